#pragma once

#include <complex>
#include <limits>
#include <string>

#include "mmmeta/mmlink.hpp"
#include "mmmeta/model.hpp"

namespace mmmeta {

enum class Variant { Hybrid, UWaveOnly, MmWaveBackhaul };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);  // hybrid | uwave | mmwave-backhaul

struct ThetaPair {
    double backhaul = 1.0;
    double device = 1.0;
};

/// Per-link thresholds. Equal device thresholds for access and direct unless a
/// rate query assigns them separately.
struct LinkThresholds {
    double backhaul = 1.0;
    double access = 1.0;
    double direct = 1.0;
    static LinkThresholds from(ThetaPair t) { return {t.backhaul, t.device, t.device}; }
};

struct MomentQuery {
    cplx order_b{1.0, 0.0};
    double theta_backhaul = 1.0;
    double theta_device = 1.0;
    Variant variant = Variant::Hybrid;
    EvalPath eval_path = EvalPath::DirectQuadrature;
    int series_terms = 64;
};

struct MomentComponents {
    cplx m_backhaul{0.0, 0.0};
    cplx m_access{0.0, 0.0};
    cplx m_direct{0.0, 0.0};
};

struct MomentResult {
    cplx value{0.0, 0.0};
    MomentComponents components;
    bool diverged = false;
    std::string reason;
    /// Backhaul threshold at which M_{-1} of the backhaul blows up (NaN if not applicable).
    double backhaul_pole = std::numeric_limits<double>::quiet_NaN();
    double series_tail_bound = 0.0;
};

/// 1 / 2F1(b, -2/alpha1; 1 - 2/alpha1; -theta2). Independent of densities and powers.
LinkMoment moment_backhaul(cplx b, double theta2, double alpha1);

/// Access moment E[(p S)^b; served by an SBS] under the Alzer form of the
/// Nakagami success probability.
LinkMoment moment_access(cplx b, double theta_d, const NetworkConfig& cfg,
                         EvalPath path = EvalPath::DirectQuadrature, int series_terms = 64);

/// Direct-link moment E[S^b; served by an MBS].
LinkMoment moment_direct(cplx b, double theta_d, const NetworkConfig& cfg);

/// Evaluates total moments for fixed thresholds; construct once, call for many b.
class MomentEngine {
   public:
    MomentEngine(const NetworkConfig& cfg, LinkThresholds th, Variant variant = Variant::Hybrid,
                 EvalPath path = EvalPath::DirectQuadrature, int series_terms = 64);
    MomentResult operator()(cplx b) const;
    const LinkThresholds& thresholds() const { return th_; }

   private:
    NetworkConfig cfg_;
    DerivedParams dp_;
    LinkThresholds th_;
    Variant variant_;
    EvalPath path_;
    int series_terms_;
    MmLink access_;
    MmLink mm_backhaul_;
};

MomentResult moment_total(const MomentQuery& q, const NetworkConfig& cfg);

/// M_{jt} of the end-to-end success probability.
cplx imaginary_moment(double t, ThetaPair thetas, const NetworkConfig& cfg, Variant variant = Variant::Hybrid,
                      EvalPath path = EvalPath::DirectQuadrature);

/// M_{-1}: mean number of attempts until success.
MomentResult mean_local_delay(ThetaPair thetas, const NetworkConfig& cfg, Variant variant = Variant::Hybrid);

struct JitterResult {
    double value = 0;
    bool diverged = false;
    std::string reason;
};
/// M_{-2} - M_{-1}^2.
JitterResult network_jitter(ThetaPair thetas, const NetworkConfig& cfg, Variant variant = Variant::Hybrid);

struct RateTargets {
    double t1 = 0;   // direct link, bit/s
    double t2 = 0;   // access link
    double tbh = 0;  // backhaul
};

/// Shannon thresholds 2^(T/W) - 1 on the bandwidth each link gets.
LinkThresholds rate_thresholds(RateTargets r, const NetworkConfig& cfg);

/// Q_b: moment of the success probability of meeting the rate targets (hybrid network).
MomentResult rate_moment(cplx b, RateTargets r, const NetworkConfig& cfg);

/// Moment for tier k (1 = MBS, 2 = SBS) of the microwave-only two-tier network.
LinkMoment moment_tier_uwave(cplx b, double theta, int k, const NetworkConfig& cfg);

MomentResult moment_total_uwave(cplx b, ThetaPair thetas, const NetworkConfig& cfg);

}  // namespace mmmeta
