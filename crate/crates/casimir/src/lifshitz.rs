//! Matsubara summation and transverse quadrature assembled into free energy,
//! pressure and entropy, plus the zero-temperature extrapolation audit and
//! the proximity-force conversion to sphere-plate geometry.
//!
//! Dimensionless form used throughout:
//!   𝓕(a,T) = (k_B T / 8πa²) Σ'_l ∫_{ζ_l}^∞ y dy [ln(1 − r_TM² e^{−y})
//!            + ln(1 − r_TE² e^{−y})]
//!   P(a,T) = −(k_B T / 8πa³) Σ'_l ∫_{ζ_l}^∞ y² dy Σ_pol r² e^{−y}/(1 − r² e^{−y})
//! with ζ_l = 2aξ_l/c, ξ_l = 2πk_B T l/ħ; the primed sum halves the l = 0
//! term. The upper limit is truncated at ζ_l + 60 where the integrand has
//! decayed below 1e-26 of its scale.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::constants::{C, HBAR, K_B};
use crate::error::{CasimirError, Result};
use crate::quadrature;
use crate::reflection::{Prepared, ReflectionScheme};

/// ξ_l = 2π k_B T l / ħ, rad/s.
pub fn matsubara_frequency(temperature: f64, l: usize) -> f64 {
    2.0 * PI * K_B * temperature * l as f64 / HBAR
}

/// One (a, T, scheme) evaluation request.
#[derive(Debug, Clone)]
pub struct EvaluationPoint {
    /// Plate separation, m.
    pub separation: f64,
    /// Temperature, K.
    pub temperature: f64,
    pub scheme: ReflectionScheme,
}

/// Convergence bookkeeping attached to every result.
#[derive(Debug, Clone, Copy, Default)]
pub struct Diagnostics {
    /// Highest Matsubara index summed.
    pub l_max: usize,
    /// Accumulated quadrature error estimate, same units as the quantity.
    pub quad_error: f64,
    /// Decay ratio |I_l|/|I_{l−1}| of the last two terms.
    pub term_ratio: f64,
}

/// Free energy per area, pressure, entropy — whichever the operation
/// populated — with diagnostics.
#[derive(Debug, Clone, Default)]
pub struct CasimirResult {
    /// J/m².
    pub free_energy_per_area: Option<f64>,
    /// Pa.
    pub pressure: Option<f64>,
    /// J/(K·m²).
    pub entropy_per_area: Option<f64>,
    /// Error estimate on the entropy from the two-step Richardson
    /// discrepancy, J/(K·m²).
    pub entropy_error: Option<f64>,
    pub diagnostics: Diagnostics,
}

const L_MAX_CAP: usize = 1_000_000;
/// Terms farther than this beyond ζ_l are below 1e-26 of the integrand scale.
const Y_SPAN: f64 = 60.0;
/// Matsubara indices evaluated per parallel batch; the reduction over each
/// batch is sequential and in index order, so the result is independent of
/// thread scheduling.
const BATCH: usize = 64;
/// Consecutive terms whose tail estimate must sit below tolerance before the
/// sum is declared converged.
const STREAK: usize = 3;

struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan { sum: 0.0, carry: 0.0 }
    }
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

fn validate(point: &EvaluationPoint) -> Result<()> {
    let a = point.separation;
    let t = point.temperature;
    if !(1.0e-8..=1.0e-5).contains(&a) {
        return Err(CasimirError::Domain(format!(
            "separation {a} m outside the validated range [10 nm, 10 µm]"
        )));
    }
    if !(t > 0.0 && t <= 1.0e4) {
        return Err(CasimirError::Domain(format!(
            "temperature {t} K outside (0, 1e4]"
        )));
    }
    Ok(())
}

/// Evaluates Σ'_l ∫_{ζ_l}^{ζ_l+60} integrand(prep, y) dy with the dynamic
/// truncation and fixed summation order described in the module docs.
fn matsubara_sum<G>(point: &EvaluationPoint, tol: f64, integrand: G) -> Result<(f64, Diagnostics)>
where
    G: Fn(&Prepared, f64) -> Result<f64> + Sync,
{
    let a = point.separation;
    let t = point.temperature;
    let quad_rel = (tol * 0.1).max(1e-13);

    let term = |l: usize| -> Result<(f64, f64)> {
        let xi = matsubara_frequency(t, l);
        let zeta = 2.0 * a * xi / C;
        let prep = point.scheme.prepare(a, t, xi, zeta)?;
        // coefficient failures are threaded out of the quadrature via a cell
        // instead of poisoning the integral with NaN silently
        let inner_err: std::cell::RefCell<Option<CasimirError>> = std::cell::RefCell::new(None);
        let q = quadrature::integrate(
            |y| match integrand(&prep, y) {
                Ok(v) => v,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            zeta,
            zeta + Y_SPAN,
            1e-18,
            quad_rel,
        );
        if let Some(e) = inner_err.into_inner() {
            return Err(e);
        }
        let q = q?;
        Ok((q.value, q.error))
    };

    let mut acc = Kahan::new();
    let mut quad_err = 0.0f64;
    let mut prev_mag: Option<f64> = None;
    let mut streak = 0usize;
    let mut ratio = 0.0f64;
    let mut l_done = 0usize;

    let mut batch_start = 0usize;
    'outer: loop {
        let batch_end = (batch_start + BATCH).min(L_MAX_CAP + 1);
        let terms: Vec<Result<(f64, f64)>> =
            (batch_start..batch_end).into_par_iter().map(term).collect();
        for (offset, tr) in terms.into_iter().enumerate() {
            let l = batch_start + offset;
            let (value, err) = tr?;
            let weight = if l == 0 { 0.5 } else { 1.0 };
            acc.add(weight * value);
            quad_err += weight * err;
            l_done = l.max(l_done);
            if l >= 1 {
                let mag = value.abs();
                if let Some(prev) = prev_mag {
                    ratio = if prev > 0.0 { mag / prev } else { 0.0 };
                    let tail = if mag == 0.0 {
                        0.0
                    } else if ratio < 1.0 {
                        mag * ratio / (1.0 - ratio)
                    } else {
                        f64::INFINITY
                    };
                    if tail <= tol * acc.sum.abs() {
                        streak += 1;
                        if streak >= STREAK {
                            break 'outer;
                        }
                    } else {
                        streak = 0;
                    }
                }
                prev_mag = Some(mag);
            }
        }
        batch_start = batch_end;
        if batch_start > L_MAX_CAP {
            return Err(CasimirError::SumNotConverged {
                l_max: L_MAX_CAP,
                tail_estimate: ratio,
                requested: tol,
            });
        }
    }

    Ok((
        acc.sum,
        Diagnostics {
            l_max: l_done,
            quad_error: quad_err,
            term_ratio: ratio,
        },
    ))
}

fn log_integrand(prep: &Prepared, y: f64) -> Result<f64> {
    let tm = prep.tm(y)?;
    let te = prep.te(y)?;
    let e = (-y).exp();
    Ok(y * ((-tm * tm * e).ln_1p() + (-te * te * e).ln_1p()))
}

fn pressure_integrand(prep: &Prepared, y: f64) -> Result<f64> {
    let tm = prep.tm(y)?;
    let te = prep.te(y)?;
    let e = (-y).exp();
    let tm2 = tm * tm * e;
    let te2 = te * te * e;
    Ok(y * y * (tm2 / (1.0 - tm2) + te2 / (1.0 - te2)))
}

/// Free energy per unit area, J/m², converged to relative tolerance `tol`
/// in both the Matsubara truncation and the transverse quadrature.
pub fn free_energy(point: &EvaluationPoint, tol: f64) -> Result<CasimirResult> {
    validate(point)?;
    let (sum, mut diag) = matsubara_sum(point, tol, log_integrand)?;
    let pref = K_B * point.temperature / (8.0 * PI * point.separation * point.separation);
    diag.quad_error *= pref;
    Ok(CasimirResult {
        free_energy_per_area: Some(pref * sum),
        diagnostics: diag,
        ..Default::default()
    })
}

/// Casimir pressure, Pa, from the analytically differentiated integrand.
pub fn pressure(point: &EvaluationPoint, tol: f64) -> Result<CasimirResult> {
    validate(point)?;
    let (sum, mut diag) = matsubara_sum(point, tol, pressure_integrand)?;
    let a = point.separation;
    let pref = -K_B * point.temperature / (8.0 * PI * a * a * a);
    diag.quad_error *= pref.abs();
    Ok(CasimirResult {
        pressure: Some(pref * sum),
        diagnostics: diag,
        ..Default::default()
    })
}

/// Inner free-energy tolerance for entropy differencing. Entropy sits on a
/// near-total cancellation — ΔF across the temperature step can be 1e-6 of F
/// — so the inner tolerance is fixed deep below the outer one.
const ENTROPY_INNER_TOL: f64 = 1e-11;

/// Entropy per unit area S = −∂𝓕/∂T, J/(K·m²), by central differences at two
/// step sizes combined with Richardson extrapolation. `tol` is the requested
/// relative tolerance; the result carries the extrapolation discrepancy as
/// its error estimate.
pub fn entropy(point: &EvaluationPoint, tol: f64) -> Result<CasimirResult> {
    validate(point)?;
    let t = point.temperature;
    let mut h = (1.0e-3 * t).max(1.0e-3);
    if h >= 0.5 * t {
        h = 0.5 * t;
    }
    let inner = ENTROPY_INNER_TOL.min(tol / 100.0);

    let f_at = |temp: f64| -> Result<(f64, Diagnostics)> {
        let p = EvaluationPoint {
            temperature: temp,
            ..point.clone()
        };
        let r = free_energy(&p, inner)?;
        Ok((r.free_energy_per_area.unwrap(), r.diagnostics))
    };

    let (f_p1, d1) = f_at(t + h)?;
    let (f_m1, _) = f_at(t - h)?;
    let (f_p2, _) = f_at(t + 0.5 * h)?;
    let (f_m2, _) = f_at(t - 0.5 * h)?;

    let d_h = (f_p1 - f_m1) / (2.0 * h);
    let d_h2 = (f_p2 - f_m2) / h;
    let s = -(4.0 * d_h2 - d_h) / 3.0;
    let err = (d_h2 - d_h).abs() / 3.0;

    // natural entropy scale for the absolute part of the failure threshold
    let scale = K_B / (16.0 * PI * point.separation * point.separation);
    if err > 10.0 * tol * (s.abs() + 1.0e-4 * scale) {
        return Err(CasimirError::DerivativeUnstable {
            temperature: t,
            discrepancy: err,
            limit: 10.0 * tol * (s.abs() + 1.0e-4 * scale),
        });
    }

    Ok(CasimirResult {
        entropy_per_area: Some(s),
        entropy_error: Some(err),
        diagnostics: d1,
        ..Default::default()
    })
}

/// Result of the zero-temperature entropy extrapolation.
#[derive(Debug, Clone)]
pub struct ZeroTemperatureFit {
    /// Extrapolated S(a, 0), J/(K·m²).
    pub s0: f64,
    /// Fitted exponent p of the correction c·T^p.
    pub exponent: f64,
    /// Amplitude c of the correction term.
    pub amplitude: f64,
    /// RMS fit residual relative to max |S(T_i)|.
    pub residual: f64,
    /// The (T, S(T), error estimate) samples the fit was made from.
    pub samples: Vec<(f64, f64, f64)>,
}

/// Largest acceptable relative RMS residual of the S(T) = S0 + c·T^p fit.
const FIT_RESIDUAL_LIMIT: f64 = 0.05;

/// Computes S(T) on the grid and fits S(T) = S0 + c·T^p by scanning the
/// exponent and solving the linear subproblem at each candidate.
pub fn entropy_zero_extrapolation(
    a: f64,
    scheme: &ReflectionScheme,
    t_grid: &[f64],
    tol: f64,
) -> Result<ZeroTemperatureFit> {
    if t_grid.len() < 6 {
        return Err(CasimirError::FitFailed(format!(
            "need at least 6 temperature points, got {}",
            t_grid.len()
        )));
    }
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let point = EvaluationPoint {
            separation: a,
            temperature: t,
            scheme: scheme.clone(),
        };
        let r = entropy(&point, tol)?;
        samples.push((t, r.entropy_per_area.unwrap(), r.entropy_error.unwrap()));
    }
    fit_power_law(a, samples)
}

fn fit_power_law(a: f64, samples: Vec<(f64, f64, f64)>) -> Result<ZeroTemperatureFit> {
    let n = samples.len() as f64;
    let smax = samples
        .iter()
        .map(|&(_, s, _)| s.abs())
        .fold(0.0f64, f64::max);

    let mut best: Option<(f64, f64, f64, f64)> = None; // (sse, p, s0, c)
    let mut p = 0.5;
    while p <= 4.0 + 1e-9 {
        // least squares for S_i = s0 + c·T_i^p
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(t, s, _) in &samples {
            let x = t.powf(p);
            sx += x;
            sy += s;
            sxx += x * x;
            sxy += x * s;
        }
        let det = n * sxx - sx * sx;
        if det.abs() > 1e-300 {
            let c = (n * sxy - sx * sy) / det;
            let s0 = (sy - c * sx) / n;
            let sse: f64 = samples
                .iter()
                .map(|&(t, s, _)| {
                    let r = s - s0 - c * t.powf(p);
                    r * r
                })
                .sum();
            if best.map_or(true, |(b, ..)| sse < b) {
                best = Some((sse, p, s0, c));
            }
        }
        p += 0.025;
    }

    let (sse, p, s0, c) =
        best.ok_or_else(|| CasimirError::FitFailed("degenerate temperature grid".into()))?;
    let rms = (sse / n).sqrt();
    // entropy may legitimately be ~0 everywhere (third law satisfied);
    // normalize against the larger of the data scale and the natural scale
    let scale = smax.max(1e-6 * K_B / (16.0 * PI * a * a));
    let residual = rms / scale;
    if residual > FIT_RESIDUAL_LIMIT {
        return Err(CasimirError::FitFailed(format!(
            "relative RMS residual {residual:.3e} exceeds {FIT_RESIDUAL_LIMIT}"
        )));
    }
    Ok(ZeroTemperatureFit {
        s0,
        exponent: p,
        amplitude: c,
        residual,
        samples,
    })
}

/// Sphere-plate force by the proximity force approximation,
/// F(a) = 2πR·𝓕_pp(a), N.
#[derive(Debug, Clone, Copy)]
pub struct PfaForce {
    pub force: f64,
    /// Set when R/a < 100 and the approximation is questionable.
    pub aspect_warning: bool,
}

pub fn pfa_sphere_force<F>(a: f64, radius: f64, plate_free_energy: F) -> Result<PfaForce>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(radius > 0.0) {
        return Err(CasimirError::Domain("sphere radius must be positive".into()));
    }
    let f_pp = plate_free_energy(a)?;
    Ok(PfaForce {
        force: 2.0 * PI * radius * f_pp,
        aspect_warning: radius / a < 100.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ev_to_rad_per_s;
    use crate::materials::{MaterialResponse, OscillatorSet};

    fn ideal_metal_proxy() -> ReflectionScheme {
        ReflectionScheme::StandardFresnel(MaterialResponse::GeneralizedPlasma(
            OscillatorSet::vacuum(),
            ev_to_rad_per_s(1.0e4),
        ))
    }

    #[test]
    fn matsubara_frequency_values() {
        assert_eq!(matsubara_frequency(300.0, 0), 0.0);
        let x1 = matsubara_frequency(300.0, 1);
        assert!((x1 / 2.467_790_255_153_06e14 - 1.0).abs() < 1e-11, "{x1}");
        assert!((matsubara_frequency(300.0, 2) - 2.0 * x1).abs() < 1.0);
    }

    #[test]
    fn ideal_metal_free_energy_and_pressure() {
        let a = 1.0e-6;
        let point = EvaluationPoint {
            separation: a,
            temperature: 1.0,
            scheme: ideal_metal_proxy(),
        };
        let f = free_energy(&point, 1e-8)
            .unwrap()
            .free_energy_per_area
            .unwrap();
        let f_ideal = -PI * PI * HBAR * C / (720.0 * a * a * a);
        assert!((f / f_ideal - 1.0).abs() < 5e-3, "F = {f}, ideal {f_ideal}");

        let p = pressure(&point, 1e-8).unwrap().pressure.unwrap();
        let p_ideal = -PI * PI * HBAR * C / (240.0 * a * a * a * a);
        assert!((p / p_ideal - 1.0).abs() < 5e-3, "P = {p}, ideal {p_ideal}");
    }

    #[test]
    fn vacuum_gives_zero() {
        let point = EvaluationPoint {
            separation: 1.0e-6,
            temperature: 300.0,
            scheme: ReflectionScheme::StandardFresnel(MaterialResponse::Dielectric(
                OscillatorSet::vacuum(),
            )),
        };
        assert_eq!(
            free_energy(&point, 1e-9)
                .unwrap()
                .free_energy_per_area
                .unwrap(),
            0.0
        );
        assert_eq!(pressure(&point, 1e-9).unwrap().pressure.unwrap(), 0.0);
    }

    #[test]
    fn pressure_matches_free_energy_derivative() {
        // plain Fresnel coefficients carry no separation dependence in
        // physical variables, so −Δ𝓕/Δa must reproduce the analytic form
        let scheme = ideal_metal_proxy();
        for &a in &[0.5e-6, 0.8e-6, 1.0e-6, 1.5e-6, 2.0e-6] {
            let at = |sep: f64| {
                free_energy(
                    &EvaluationPoint {
                        separation: sep,
                        temperature: 300.0,
                        scheme: scheme.clone(),
                    },
                    1e-11,
                )
                .unwrap()
                .free_energy_per_area
                .unwrap()
            };
            let h = 1.0e-3 * a;
            let fd = -(at(a + h) - at(a - h)) / (2.0 * h);
            let p = pressure(
                &EvaluationPoint {
                    separation: a,
                    temperature: 300.0,
                    scheme: scheme.clone(),
                },
                1e-11,
            )
            .unwrap()
            .pressure
            .unwrap();
            assert!((p / fd - 1.0).abs() < 1e-4, "a = {a}: {p} vs {fd}");
        }
    }

    #[test]
    fn free_energy_monotone_in_separation() {
        let scheme = ideal_metal_proxy();
        let mut prev = f64::NEG_INFINITY;
        for &a in &[0.3e-6, 0.6e-6, 1.0e-6, 2.0e-6, 5.0e-6] {
            let f = free_energy(
                &EvaluationPoint {
                    separation: a,
                    temperature: 300.0,
                    scheme: scheme.clone(),
                },
                1e-8,
            )
            .unwrap()
            .free_energy_per_area
            .unwrap();
            assert!(f > prev && f < 0.0);
            prev = f;
        }
    }

    #[test]
    fn dimensionless_and_physical_routes_agree() {
        // recompute one Matsubara term through physical variables
        // (k_⊥ integration) and compare with the dimensionless route
        let a = 1.0e-6;
        let t = 300.0;
        let scheme = ideal_metal_proxy();
        let l = 3;
        let xi = matsubara_frequency(t, l);
        let zeta = 2.0 * a * xi / C;
        let prep = scheme.prepare(a, t, xi, zeta).unwrap();

        let dimless = quadrature::integrate(
            |y| log_integrand(&prep, y).unwrap(),
            zeta,
            zeta + Y_SPAN,
            1e-18,
            1e-12,
        )
        .unwrap()
        .value
            * K_B * t
            / (8.0 * PI * a * a);

        // physical: (k_B T/2π) ∫ k dk Σ ln(1−r² e^{−2aq})
        let physical = quadrature::integrate(
            |k| {
                let q = (k * k + xi * xi / (C * C)).sqrt();
                let y = 2.0 * a * q;
                let tm = prep.tm(y).unwrap();
                let te = prep.te(y).unwrap();
                let e = (-2.0 * a * q).exp();
                k * ((-tm * tm * e).ln_1p() + (-te * te * e).ln_1p())
            },
            0.0,
            Y_SPAN / (2.0 * a),
            1e-18,
            1e-12,
        )
        .unwrap()
        .value
            * K_B * t
            / (2.0 * PI);

        assert!(
            (dimless / physical - 1.0).abs() < 1e-10,
            "{dimless} vs {physical}"
        );
    }

    #[test]
    fn ideal_metal_entropy_positive_and_vanishing() {
        let scheme = ideal_metal_proxy();
        let s2 = entropy(
            &EvaluationPoint {
                separation: 1.0e-6,
                temperature: 2.0,
                scheme: scheme.clone(),
            },
            1e-3,
        )
        .unwrap()
        .entropy_per_area
        .unwrap();
        let s05 = entropy(
            &EvaluationPoint {
                separation: 1.0e-6,
                temperature: 0.5,
                scheme,
            },
            1e-3,
        )
        .unwrap()
        .entropy_per_area
        .unwrap();
        assert!(s2 > 0.0 && s05 > 0.0);
        assert!(s05 < s2);
    }

    #[test]
    fn pfa_linearity_and_oracle() {
        let a = 200.0e-9;
        let f_pp = |sep: f64| Ok(-PI * PI * HBAR * C / (720.0 * sep * sep * sep));
        let r1 = pfa_sphere_force(a, 150.0e-6, f_pp).unwrap();
        let r2 = pfa_sphere_force(a, 300.0e-6, f_pp).unwrap();
        assert!((r2.force / r1.force - 2.0).abs() < 1e-12);
        assert!(!r1.aspect_warning);
        let want = 2.0 * PI * 150.0e-6 * f_pp(a).unwrap();
        assert!((r1.force / want - 1.0).abs() < 1e-12);
        let close = pfa_sphere_force(1.0e-6, 50.0e-6, f_pp).unwrap();
        assert!(close.aspect_warning);
    }

    #[test]
    fn domain_validation() {
        let p = EvaluationPoint {
            separation: 1.0e-3,
            temperature: 300.0,
            scheme: ideal_metal_proxy(),
        };
        assert!(free_energy(&p, 1e-6).is_err());
        let p = EvaluationPoint {
            separation: 1.0e-6,
            temperature: 0.0,
            scheme: ideal_metal_proxy(),
        };
        assert!(free_energy(&p, 1e-6).is_err());
    }

    #[test]
    fn fit_recovers_synthetic_power_law() {
        let a = 1.0e-6;
        let s0 = 2.5e-13;
        let samples: Vec<(f64, f64, f64)> = (0..8)
            .map(|i| {
                let t = 0.05 * 2.0f64.powi(i);
                (t, s0 + 3.0e-14 * t * t, 0.0)
            })
            .collect();
        let fit = fit_power_law(a, samples).unwrap();
        assert!((fit.s0 / s0 - 1.0).abs() < 1e-6);
        assert!((fit.exponent - 2.0).abs() < 0.03);
        assert!(fit.residual < 1e-6);
    }
}
