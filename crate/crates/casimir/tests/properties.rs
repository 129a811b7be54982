//! Property-based invariants: permittivity monotonicity along the imaginary
//! axis, reflection-coefficient bounds for every scheme, and agreement of the
//! two screened-TM routes on random parameters.

use proptest::prelude::*;

use casimir::constants::ev_to_rad_per_s;
use casimir::materials::{eps_core, Oscillator, OscillatorSet};
use casimir::reflection::{
    eps_z_rpa, fresnel_te, fresnel_tm, rpa_tm, zero_freq_modified_tm, zero_freq_plasma_te,
    ModifiedParams, WavePoint,
};
use casimir::specfun;

fn oscillator_set(f_ev2: f64, omega_ev: f64, gamma_ev: f64) -> OscillatorSet {
    let s = ev_to_rad_per_s(1.0);
    OscillatorSet::new(vec![
        Oscillator::new(f_ev2 * s * s, omega_ev * s, gamma_ev * s).unwrap(),
    ])
}

proptest! {
    #[test]
    fn core_permittivity_decreases_along_the_imaginary_axis(
        f_ev2 in 1.0..200.0f64,
        omega_ev in 0.5..20.0f64,
        gamma_ev in 0.0..2.0f64,
        xi_ev in 1e-3..50.0f64,
        step in 1.001..10.0f64,
    ) {
        let osc = oscillator_set(f_ev2, omega_ev, gamma_ev);
        let xi1 = ev_to_rad_per_s(xi_ev);
        let xi2 = xi1 * step;
        let e1 = eps_core(xi1, &osc);
        let e2 = eps_core(xi2, &osc);
        prop_assert!(e1 >= 1.0 && e2 >= 1.0);
        prop_assert!(e2 <= e1, "eps rose along the imaginary axis: {e1} -> {e2}");
    }

    #[test]
    fn fresnel_coefficients_stay_in_their_sign_bounds(
        eps in 1.0..1.0e6f64,
        zeta in 0.0..20.0f64,
        dy in 1e-9..60.0f64,
    ) {
        let point = WavePoint::new(zeta, zeta + dy).unwrap();
        let tm = fresnel_tm(point, eps);
        let te = fresnel_te(point, eps);
        prop_assert!((0.0..=1.0).contains(&tm), "tm = {tm}");
        prop_assert!((-1.0..=0.0).contains(&te), "te = {te}");
    }

    #[test]
    fn zero_frequency_coefficients_are_bounded(
        eps0 in 1.0 + 1e-9..1.0e3f64,
        kappa_a in 0.0..1.0e6f64,
        w in 0.0..1.0e6f64,
        y in 1e-6..100.0f64,
    ) {
        let tm = zero_freq_modified_tm(y, eps0, kappa_a);
        let te = zero_freq_plasma_te(y, w);
        let r0 = (eps0 - 1.0) / (eps0 + 1.0);
        prop_assert!((r0 - 1e-12..=1.0).contains(&tm), "tm = {tm}, r0 = {r0}");
        prop_assert!((-1.0..=0.0).contains(&te), "te = {te}");
    }

    #[test]
    fn screened_coefficients_are_physical_and_match_the_rpa_route(
        eps in 1.0 + 1e-6..20.0f64,
        de in 1e-6..1.0e6f64,
        kappa_a in 1e-3..1.0e4f64,
        zeta in 1e-6..10.0f64,
        dy in 1e-3..50.0f64,
    ) {
        let p = ModifiedParams {
            eps,
            eps_tilde: eps + de,
            eps0: eps,
            kappa_a,
            zeta,
        };
        let point = WavePoint::new(zeta, zeta + dy).unwrap();
        let tm = p.tm(point).unwrap();
        let te = p.te(point);
        prop_assert!(tm.abs() <= 1.0, "tm = {tm}");
        prop_assert!((-1.0..=0.0).contains(&te), "te = {te}");
        let via_rpa = rpa_tm(point, &p).unwrap();
        prop_assert!(
            (via_rpa - tm).abs() <= 1e-9 * tm.abs().max(1.0),
            "screened {tm} vs rpa {via_rpa}"
        );
        prop_assert!(eps_z_rpa(point, &p).unwrap().is_finite());
    }

    #[test]
    fn polylog_is_monotone_and_bounded_on_the_unit_interval(
        z in 0.0..1.0f64,
        shrink in 0.1..0.999f64,
    ) {
        let big = specfun::polylog(3, z).unwrap();
        let small = specfun::polylog(3, z * shrink).unwrap();
        prop_assert!((0.0..=specfun::zeta3()).contains(&big));
        prop_assert!(small <= big);
        prop_assert!(big >= z, "Li3(z) is bounded below by its first term");
    }
}
