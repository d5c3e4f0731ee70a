#pragma once

#include "mmmeta/mmlink.hpp"
#include "mmmeta/model.hpp"

namespace mmmeta {

struct AssocProbabilities {
    double a1 = 0;
    double a2_los = 0;
    double a2_nlos = 0;
    /// a1 from the MBS-side integral (independent route, for cross-checks).
    double a1_direct = 0;
    double abs_error = 0;
};

/// Access link of the typical device in the hybrid network at device threshold θ.
MmLink access_link(const NetworkConfig& cfg, const DerivedParams& dp, double theta_device);
/// SBS receiving its backhaul from the nearest LOS-ball marked MBS over mm-wave.
MmLink mm_backhaul_link(const NetworkConfig& cfg, const DerivedParams& dp, double theta_backhaul);

/// Λ2(l): mean number of marked SBSs with path loss at most l.
double sbs_count(double l, const NetworkConfig& cfg);

/// Density, in the path-loss variable, of being served by a LOS SBS at path loss l.
/// Support (0, d^alpha_L].
double assoc_density_los(double l, const NetworkConfig& cfg);
/// NLOS counterpart, support [d^alpha_N, inf).
double assoc_density_nlos(double l, const NetworkConfig& cfg);

/// Density of the smallest MBS path loss l1.
double mbs_pathloss_density(double l1, const NetworkConfig& cfg);

/// Probability that some marked SBS beats an MBS whose path loss is l1.
double cond_assoc_sbs(double l1, const NetworkConfig& cfg);

AssocProbabilities assoc_probs(const NetworkConfig& cfg);

/// a1 integrated over the MBS path loss with the SBS void probability inside.
double assoc_a1_direct(const NetworkConfig& cfg);

/// Closed form of a1 for alpha1 = 4, alpha_L = 2, alpha_N = 4.
double closed_form_a1(const NetworkConfig& cfg);
/// Its leading behaviour for a very large SBS gain ratio.
double closed_form_a1_large_bias(const NetworkConfig& cfg);

struct AsymptoticAssoc {
    double a2_los;
    double a2_nlos;
};
/// Limit of vanishing MBS competition (huge array gain), same exponent preconditions.
AsymptoticAssoc asymptotic_assoc(const NetworkConfig& cfg);

}  // namespace mmmeta
