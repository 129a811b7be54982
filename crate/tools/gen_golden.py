#!/usr/bin/env python3
"""Regenerates crates/casimir/tests/fixtures/golden.txt.

High-precision reference values computed with mpmath at 40 significant
digits and emitted rounded to 17 digits (full f64). The physical constants
below are the CODATA 2018 set and must stay in sync with src/constants.rs.

Usage: python3 tools/gen_golden.py > crates/casimir/tests/fixtures/golden.txt
"""

import datetime
import sys

import mpmath as mp

mp.mp.dps = 40

# CODATA 2018 (SI), identical to src/constants.rs.
K_B = mp.mpf("1.380649e-23")
HBAR = mp.mpf("1.054571817e-34")
C = mp.mpf("299792458")
E_CHARGE = mp.mpf("1.602176634e-19")
EPS_VAC = mp.mpf("8.8541878128e-12")
M_E = mp.mpf("9.1093837015e-31")


def ev(x):
    """Energy in eV to angular frequency in rad/s."""
    return mp.mpf(x) * E_CHARGE / HBAR


def emit(key, value):
    print(f"{key} = {mp.nstr(mp.mpf(value), 17, strip_zeros=False)}")


def metal_entropy_limit(a, omega_p):
    """S(a,0) = (k_B/16 pi a^2) * int_0^inf y ln(1 - r^2 e^-y) dy with the
    dissipationless zero-frequency TE coefficient, w = 2 a omega_p / c."""
    w = 2 * a * omega_p / C

    def integrand(y):
        s = mp.sqrt(w * w + y * y)
        r = (y - s) / (y + s)
        return y * mp.log(1 - r * r * mp.e**-y)

    q = mp.quad(integrand, [0, w, 60 + w])
    return K_B / (16 * mp.pi * a * a) * q


def dielectric_entropy_limit(a, eps0):
    """S(a,0) = (k_B/16 pi a^2) [zeta(3) - Li3(r0^2)], r0 = (eps0-1)/(eps0+1)."""
    r0 = (eps0 - 1) / (eps0 + 1)
    return K_B / (16 * mp.pi * a * a) * (mp.zeta(3) - mp.polylog(3, r0 * r0))


def main():
    today = datetime.date.today().isoformat()
    print("# Frozen reference values for the test suite.")
    print(f"# Generated by tools/gen_golden.py on {today}; do not edit by hand.")
    print("# Constants: CODATA-2018 (see src/constants.rs). mpmath dps = 40.")
    print()

    print("# Special functions")
    emit("zeta3", mp.zeta(3))
    emit("li3_0.25", mp.polylog(3, mp.mpf("0.25")))
    emit("li3_0.5", mp.polylog(3, mp.mpf("0.5")))
    emit("li3_0.9", mp.polylog(3, mp.mpf("0.9")))
    emit("li3_-1", mp.polylog(3, -1))
    emit("li2_0.45", mp.polylog(2, mp.mpf("0.45")))
    print()

    print("# Thermal frequencies and screening lengths")
    # First Matsubara angular frequency at 300 K, rad/s.
    emit("xi1_300K", 2 * mp.pi * K_B * 300 / HBAR)
    # Debye-Huckel inverse screening length, 1/m:
    # kappa^2 = e^2 n / (eps_vac eps0 k_B T), n = 5e19 cm^-3, eps0 = 11.66, 300 K.
    n = mp.mpf("5e19") * mp.mpf("1e6")
    eps0 = mp.mpf("11.66")
    emit("kappa_dh_si", mp.sqrt(E_CHARGE**2 * n / (EPS_VAC * eps0 * K_B * 300)))
    print()

    print("# Dielectric response along the imaginary axis")
    # Drude permittivity at i*xi: 1 + wp^2/(xi (xi + gamma)),
    # wp = 9 eV, gamma = 0.035 eV, xi = 1 eV.
    wp, gamma, xi = ev(9), ev("0.035"), ev(1)
    emit("eps_drude_gold_1eV", 1 + wp * wp / (xi * (xi + gamma)))
    print()

    print("# Zero-temperature entropy limits, J/(K m^2)")
    a = mp.mpf("1e-6")
    emit("s0_metal_1um_9eV", metal_entropy_limit(a, ev(9)))
    emit("s0_dielectric_1um_eps3", dielectric_entropy_limit(a, 3))
    print()

    print("# Perfect-reflector limits at a = 1 um")
    emit("f_ideal_1um_J_per_m2", -(mp.pi**2) * HBAR * C / (720 * a**3))
    emit("p_ideal_1um_Pa", -(mp.pi**2) * HBAR * C / (240 * a**4))
    return 0


if __name__ == "__main__":
    sys.exit(main())
