"""Regenerates specfun_oracles.inc and model_oracles.inc with mpmath.

    python3 gen_oracles.py   (writes next to this file)

Everything here is computed at 40 digits and independently of the C++ code.
"""
import os
import random

import mpmath as mp

mp.mp.dps = 40
HERE = os.path.dirname(os.path.abspath(__file__))
rng = random.Random(20240601)


def s(v):
    return mp.nstr(v, 20, strip_zeros=False)


def specfun_block():
    out = ["// Generated by gen_oracles.py; do not edit.", "#pragma once", ""]
    out.append("struct Oracle2F1 { double ar, ai, b, c, z, vr, vi; };")
    out.append("inline const Oracle2F1 kOracle2F1[] = {")
    for _ in range(50):
        alpha = rng.uniform(2.2, 6.0)
        d = 2.0 / alpha
        ar = rng.choice([rng.uniform(-2.0, 3.0), float(rng.randint(-3, 4))])
        ai = rng.choice([0.0, rng.uniform(-40.0, 40.0)])
        z = -(10 ** rng.uniform(-2, 4))
        v = mp.hyp2f1(mp.mpc(ar, ai), -d, 1 - d, z)
        out.append(f"    {{{ar!r}, {ai!r}, {-d!r}, {1 - d!r}, {z!r}, {s(v.real)}, {s(v.imag)}}},")
    out.append("};")
    out.append("")
    out.append("struct Oracle1F1 { double a, b, z, v; };")
    out.append("inline const Oracle1F1 kOracle1F1[] = {")
    for _ in range(50):
        a = rng.uniform(-2.0, 3.0)
        b = rng.uniform(0.5, 3.0)
        z = rng.uniform(-150.0, 40.0)
        out.append(f"    {{{a!r}, {b!r}, {z!r}, {s(mp.hyp1f1(a, b, z))}}},")
    out.append("};")
    out.append("")
    out.append("struct OracleGamma { int m; double x, v; };")
    out.append("inline const OracleGamma kOracleGamma[] = {")
    for _ in range(50):
        m = rng.randint(1, 8)
        x = rng.uniform(0.0, 40.0)
        out.append(f"    {{{m}, {x!r}, {s(mp.gammainc(m, x, mp.inf, regularized=True))}}},")
    out.append("};")
    out.append("")
    out.append("struct OracleBeta { double x, a, b, v; };")
    out.append("inline const OracleBeta kOracleBeta[] = {")
    for _ in range(50):
        x = rng.uniform(0.0, 1.0)
        a = rng.uniform(0.2, 8.0)
        b = rng.uniform(0.2, 8.0)
        out.append(f"    {{{x!r}, {a!r}, {b!r}, {s(mp.betainc(a, b, 0, x, regularized=True))}}},")
    out.append("};")
    out.append("")
    out.append("struct OracleErf { double x, v; };")
    out.append("inline const OracleErf kOracleErf[] = {")
    for _ in range(50):
        x = rng.uniform(-5.0, 5.0)
        out.append(f"    {{{x!r}, {s(mp.erf(x))}}},")
    out.append("};")
    return "\n".join(out) + "\n"


# Default network, SI units.
C = mp.mpf("2.998e8")
P1, P2 = mp.mpf(50), mp.mpf(5)
LAM1, LAM2 = mp.mpf("2e-6"), mp.mpf("70e-6")
A1, AL, AN = 4, 2, 4
D = mp.mpf(200)
N_ANT, GD = 10, 10
SIGMA2 = mp.mpf(10) ** ((-174 + 90 + 10) / mp.mpf(10)) / 1000
ZETA2 = (C / (4 * mp.pi * mp.mpf("28e9"))) ** 2
ZETA1 = (C / (4 * mp.pi * mp.mpf("2e9"))) ** 2
G2 = N_ANT * GD
AHAT = P2 * G2 * ZETA2 / (P1 * 1 * ZETA1)
ABAR = 1 / AHAT
ML, MN = 2, 1


def alzer(m, x):
    zm = m * mp.factorial(m) ** (-mp.mpf(1) / m)
    return 1 - (1 - mp.exp(-zm * x)) ** m


def count2(l):
    return mp.pi * LAM2 * (min(l ** (mp.mpf(2) / AL), D**2) + max(0, l ** (mp.mpf(2) / AN) - D**2))


def access_moment(b, theta):
    nu = theta * SIGMA2 / (P2 * G2 * ZETA2)
    coef = mp.pi * LAM1 * ABAR ** (mp.mpf(2) / A1)

    def los(u):
        l = u ** (mp.mpf(AL) / 2)
        return mp.pi * LAM2 * mp.exp(-count2(l) - coef * l ** (mp.mpf(2) / A1)) * alzer(ML, nu * l) ** b

    def nlos(u):
        l = u ** (mp.mpf(AN) / 2)
        return mp.pi * LAM2 * mp.exp(-count2(l) - coef * l ** (mp.mpf(2) / A1)) * alzer(MN, nu * l) ** b

    d2 = D**2
    return mp.quad(los, [0, d2 / 64, d2 / 16, d2 / 4, d2]) + mp.quad(nlos, [d2, 2 * d2, 4 * d2, 16 * d2, mp.inf])


def direct_moment(b, theta):
    dl = mp.mpf(2) / A1
    F = mp.hyp2f1(b, -dl, 1 - dl, -theta)

    def f(u):
        l1 = u ** (mp.mpf(A1) / 2)
        return mp.pi * LAM1 * mp.exp(-mp.pi * LAM1 * u * F - count2(AHAT * l1))

    ua = (D**AL / AHAT) ** (mp.mpf(2) / A1)
    ub = (D**AN / AHAT) ** (mp.mpf(2) / A1)
    return mp.quad(f, [0, ua / 8, ua, ub, 4 * ub, mp.inf])


def backhaul_moment(b, theta):
    dl = mp.mpf(2) / A1
    return 1 / mp.hyp2f1(b, -dl, 1 - dl, -theta)


def model_block():
    out = ["// Generated by gen_oracles.py; do not edit.", "#pragma once", ""]
    out.append(f"inline constexpr double kOracleAHat = {s(AHAT)};")
    out.append(f"inline constexpr double kOracleNoise = {s(SIGMA2)};")
    out.append(f"inline constexpr double kOracleZeta2 = {s(ZETA2)};")
    dn = mp.pi * LAM2 * mp.exp(-count2(mp.mpf(10) ** 4) - mp.pi * LAM1 * ABAR ** mp.mpf(0.5) * mp.mpf(100))
    # density in l of being served by a LOS SBS at l = (100 m)^2: du/dl = 1 for alpha_L = 2.
    out.append(f"inline constexpr double kOracleLosDensity1e4 = {s(dn)};")
    out.append("")
    out.append("struct OracleMoment { double theta, b, backhaul, access, direct, total; };")
    out.append("inline const OracleMoment kOracleMoments[] = {")
    for theta in (mp.mpf("0.1"), mp.mpf(1), mp.mpf(10)):
        for b in (1, 2):
            bh, ac, di = backhaul_moment(b, theta), access_moment(b, theta), direct_moment(b, theta)
            out.append(f"    {{{float(theta)!r}, {b}.0, {s(bh)}, {s(ac)}, {s(di)}, {s(bh * ac + di)}}},")
    out.append("};")
    a2 = access_moment(0, 0)
    out.append(f"inline constexpr double kOracleSbsMass = {s(a2)};")
    # Microwave-only tier-2 association with equal exponents (alpha = 4 on both tiers).
    delta = mp.mpf(2) / 4
    other = (LAM1 / LAM2) * (P1 / P2) ** delta
    tier2 = mp.quad(lambda r: 2 * mp.pi * LAM2 * r * mp.exp(-mp.pi * LAM2 * r**2 * (1 + other)), [0, mp.inf])
    out.append(f"inline constexpr double kOracleUwaveTier2Assoc = {s(tier2)};")
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    with open(os.path.join(HERE, "specfun_oracles.inc"), "w") as f:
        f.write(specfun_block())
    with open(os.path.join(HERE, "model_oracles.inc"), "w") as f:
        f.write(model_block())
