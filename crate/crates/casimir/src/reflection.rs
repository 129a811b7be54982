//! Reflection coefficients for every scheme: standard Fresnel, screened
//! (drift-diffusion corrected), uniaxial crystal, and the RPA
//! wave-vector-dependent permittivity route, together with their
//! zero-frequency limits and small-parameter expansions.
//!
//! Everything is evaluated in the dimensionless variables
//! ζ = 2aξ/c and y = 2aq, q² = k_⊥² + ξ²/c², so y ≥ ζ ≥ 0.
//!
//! Sign convention: TM coefficients are positive, TE negative. Only squares
//! enter the free energy, but the expansions below depend on the signs as
//! stated.

use crate::constants::C;
use crate::error::{CasimirError, Result};
use crate::materials::{eps_core, screening_kappa, MaterialResponse, ScreenedConductor};

/// Relative threshold below which ε̃ − ε is treated as zero and the
/// carrier-free reduction is used (the screened formulas divide by ε̃ − ε).
const EPS_TILDE_GUARD: f64 = 1e-30;

/// One point of the dimensionless (ζ, y) half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePoint {
    pub zeta: f64,
    pub y: f64,
}

impl WavePoint {
    pub fn new(zeta: f64, y: f64) -> Result<Self> {
        if !(zeta >= 0.0) || !(y >= zeta) {
            return Err(CasimirError::Domain(format!(
                "wave point requires y >= zeta >= 0, got zeta = {zeta}, y = {y}"
            )));
        }
        Ok(Self { zeta, y })
    }

    /// Builds the dimensionless point from physical ξ (rad/s), k_⊥ (rad/m)
    /// and separation a (m).
    pub fn from_physical(xi: f64, kperp: f64, a: f64) -> Result<Self> {
        let q = (kperp * kperp + xi * xi / (C * C)).sqrt();
        Self::new(2.0 * a * xi / C, 2.0 * a * q)
    }
}

/// √(y² + (ε−1)ζ²): the dimensionless normal wave-vector component inside
/// the material.
#[inline]
fn inside(point: WavePoint, eps: f64) -> f64 {
    (point.y * point.y + (eps - 1.0) * point.zeta * point.zeta).sqrt()
}

/// TM Fresnel coefficient (ε q − k)/(ε q + k) in dimensionless variables.
pub fn fresnel_tm(point: WavePoint, eps: f64) -> f64 {
    let b = inside(point, eps);
    (eps * point.y - b) / (eps * point.y + b)
}

/// TE Fresnel coefficient (q − k)/(q + k) in dimensionless variables.
pub fn fresnel_te(point: WavePoint, eps: f64) -> f64 {
    let b = inside(point, eps);
    (point.y - b) / (point.y + b)
}

/// Zero-frequency TM coefficient of a screened conductor:
/// (ε₀√(y²+κ_a²) − y)/(ε₀√(y²+κ_a²) + y), κ_a = 2aκ.
pub fn zero_freq_modified_tm(y: f64, eps0: f64, kappa_a: f64) -> f64 {
    let s = (y * y + kappa_a * kappa_a).sqrt();
    (eps0 * s - y) / (eps0 * s + y)
}

/// Zero-frequency TE coefficient of the generalized plasma-like model:
/// (y − √(w² + y²))/(y + √(w² + y²)) with w = 2aω_p/c.
pub fn zero_freq_plasma_te(y: f64, w: f64) -> f64 {
    let s = (w * w + y * y).sqrt();
    (y - s) / (y + s)
}

/// Uniaxial-crystal coefficient pair at one point, for given ε_x and ε_z
/// (each already evaluated at the point's frequency / wave vector):
/// TM uses √(ε_x ε_z) q against the ε_z-propagation root, TE uses ε_x alone.
pub fn uniaxial_coeffs(point: WavePoint, eps_x: f64, eps_z: f64) -> (f64, f64) {
    let kz = inside(point, eps_z);
    let exz = (eps_x * eps_z).sqrt();
    let tm = (exz * point.y - kz) / (exz * point.y + kz);
    let te = fresnel_te(point, eps_x);
    (tm, te)
}

/// Per-frequency parameters of the screened (drift-diffusion) coefficients,
/// precomputed once per Matsubara index.
#[derive(Debug, Clone, Copy)]
pub struct ModifiedParams {
    /// Core permittivity ε(iξ_l).
    pub eps: f64,
    /// Carrier-dressed permittivity ε̃(iξ_l).
    pub eps_tilde: f64,
    /// Static core permittivity ε₀.
    pub eps0: f64,
    /// Dimensionless screening parameter κ_a = 2aκ(T).
    pub kappa_a: f64,
    /// Dimensionless Matsubara frequency ζ_l.
    pub zeta: f64,
}

impl ModifiedParams {
    /// Dimensionless screening root η̃ = √(y² − ζ² + κ_a² ε₀ ε̃/(ε(ε̃−ε))).
    fn eta_tilde(&self, y: f64) -> Result<f64> {
        let de = self.eps_tilde - self.eps;
        let bracket = y * y - self.zeta * self.zeta
            + self.kappa_a * self.kappa_a * self.eps0 * self.eps_tilde / (self.eps * de);
        if bracket <= 0.0 {
            return Err(CasimirError::IllConditioned(format!(
                "negative screening-root bracket {bracket} at y = {y}"
            )));
        }
        Ok(bracket.sqrt())
    }

    /// Screened TM coefficient:
    /// (ε̃y − B − C)/(ε̃y + B + C), B = √(y²+(ε̃−1)ζ²),
    /// C = (y²−ζ²)(ε̃−ε)/(η̃ε).
    pub fn tm(&self, point: WavePoint) -> Result<f64> {
        let de = self.eps_tilde - self.eps;
        if de / self.eps_tilde < EPS_TILDE_GUARD {
            return Err(CasimirError::IllConditioned(
                "eps_tilde - eps underflows; use the carrier-free reduction".into(),
            ));
        }
        let y = point.y;
        let a = self.eps_tilde * y;
        let b = inside(point, self.eps_tilde);
        let c = (y * y - self.zeta * self.zeta) * de / (self.eta_tilde(y)? * self.eps);
        Ok((a - b - c) / (a + b + c))
    }

    /// Screened TE coefficient: plain Fresnel with ε̃.
    pub fn te(&self, point: WavePoint) -> f64 {
        fresnel_te(point, self.eps_tilde)
    }
}

/// Longitudinal RPA permittivity ε_z(iξ_l, k_⊥) in dimensionless variables,
/// with ε_x ≡ ε̃ (the transverse response carries no k_⊥ dependence).
pub fn eps_z_rpa(point: WavePoint, p: &ModifiedParams) -> Result<f64> {
    let (y, z) = (point.y, point.zeta);
    let x = (y * y - z * z).sqrt();
    let k = inside(point, p.eps_tilde);
    let de = p.eps_tilde - p.eps;
    let eta = p.eta_tilde(y)?;
    let bracket = (k * p.eps + x * x * de / eta) / (p.eps * p.eps_tilde) + x - y
        - z * z * (1.0 / k - 1.0 / y)
        + x * z * z * (1.0 / (x * k + k * k) - 1.0 / (x * y + y * y));
    if bracket.abs() < 1e-300 {
        return Err(CasimirError::IllConditioned(
            "vanishing RPA denominator".into(),
        ));
    }
    Ok(x / bracket)
}

/// TM coefficient built from the wave-vector-dependent ε_z: invert the
/// longitudinal response into the propagation constant K and form
/// (ε̃y − K)/(ε̃y + K). Must agree with [`ModifiedParams::tm`].
pub fn rpa_tm(point: WavePoint, p: &ModifiedParams) -> Result<f64> {
    let (y, z) = (point.y, point.zeta);
    let x = (y * y - z * z).sqrt();
    let k = inside(point, p.eps_tilde);
    let ez = eps_z_rpa(point, p)?;
    let kk = p.eps_tilde
        * (x / ez - x + y + z * z * (1.0 / k - 1.0 / y)
            - x * z * z * (1.0 / (x * k + k * k) - 1.0 / (x * y + y * y)));
    Ok((p.eps_tilde * y - kk) / (p.eps_tilde * y + kk))
}

/// Identifier of the small parameter an expansion is organized in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallParameter {
    /// β_a = 1/κ_a: inverse dimensionless screening (metallic regime).
    BetaA,
    /// β_l = σ(0)/(ε_vac ξ_l): conductivity over Matsubara frequency
    /// (dielectric regime).
    BetaL,
}

/// First-order expansion of a coefficient: value ≈ zeroth + parameter·first.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionTerm {
    pub zeroth: f64,
    pub first: f64,
    pub parameter: SmallParameter,
}

/// Metallic-regime expansion of the screened TM coefficient in β_a = 1/κ_a:
/// r^mod = r̃_TM − 2β_a Z + O(β_a²), with
/// Z = √(ε̃(ε̃−ε)³/(ε₀ε)) · y(y²−ζ²)/(ε̃y + B̃)².
pub fn expansion_metal(point: WavePoint, p: &ModifiedParams) -> ExpansionTerm {
    let (y, z) = (point.y, point.zeta);
    let de = p.eps_tilde - p.eps;
    let b = inside(point, p.eps_tilde);
    let zl = (p.eps_tilde * de * de * de / (p.eps0 * p.eps)).sqrt() * y * (y * y - z * z)
        / ((p.eps_tilde * y + b) * (p.eps_tilde * y + b));
    ExpansionTerm {
        zeroth: fresnel_tm(point, p.eps_tilde),
        first: -2.0 * zl,
        parameter: SmallParameter::BetaA,
    }
}

/// Expanded TM log-integrand of the free energy in the metallic regime:
/// ln(1 − r̃²e^{−y}) + 4β_a r̃ Z/(e^y − r̃²).
pub fn expansion_metal_log_integrand(point: WavePoint, p: &ModifiedParams, beta_a: f64) -> f64 {
    let t = expansion_metal(point, p);
    let r = t.zeroth;
    let zl = -0.5 * t.first;
    (-r * r * (-point.y).exp()).ln_1p() + 4.0 * beta_a * r * zl / (point.y.exp() - r * r)
}

/// Dielectric-regime expansion of both Fresnel coefficients in the
/// permittivity increment β_l (ε → ε + β_l):
/// TM first order: y(2y² + (ε−2)ζ²)/(B(εy+B)²),
/// TE first order: −yζ²/(B(y+B)²), B = √(y²+(ε−1)ζ²).
pub fn expansion_dielectric(point: WavePoint, eps: f64) -> (ExpansionTerm, ExpansionTerm) {
    let (y, z) = (point.y, point.zeta);
    let b = inside(point, eps);
    let tm_first = y * (2.0 * y * y + (eps - 2.0) * z * z) / (b * (eps * y + b) * (eps * y + b));
    let te_first = -y * z * z / (b * (y + b) * (y + b));
    (
        ExpansionTerm {
            zeroth: fresnel_tm(point, eps),
            first: tm_first,
            parameter: SmallParameter::BetaL,
        },
        ExpansionTerm {
            zeroth: fresnel_te(point, eps),
            first: te_first,
            parameter: SmallParameter::BetaL,
        },
    )
}

/// Which pair of TM/TE formulas the Lifshitz sum uses.
#[derive(Debug, Clone, PartialEq)]
pub enum ReflectionScheme {
    /// Plain Fresnel coefficients with the material's ε(iξ); the
    /// zero-frequency term follows the material class (r₀ for dielectrics,
    /// the ideal TM value for carrier materials, the plasma TE value for the
    /// dissipationless model).
    StandardFresnel(MaterialResponse),
    /// Drift-diffusion screened coefficients.
    ModifiedScreened(ScreenedConductor),
    /// Uniaxial crystal with separate in-plane and normal responses
    /// (each k_⊥-independent).
    Uniaxial {
        eps_x: MaterialResponse,
        eps_z: MaterialResponse,
    },
    /// Wave-vector-dependent longitudinal permittivity route.
    Rpa(ScreenedConductor),
}

/// Coefficients of one Matsubara term, with all frequency- and
/// temperature-dependent parameters resolved. `tm`/`te` are then pure
/// functions of y, cheap enough for the inner quadrature loop.
#[derive(Debug, Clone, Copy)]
pub enum Prepared {
    Fresnel { eps: f64, zeta: f64 },
    /// ξ = 0 term of a dielectric: TM = r₀ for all y, TE = 0.
    DielectricZero { r0: f64 },
    /// ξ = 0 term of a carrier material under plain Fresnel: TM = 1;
    /// TE = 0 (dissipative) or the plasma value (w = 2aω_p/c) if given.
    MetalZero { plasma_w: Option<f64> },
    Modified(ModifiedParams),
    /// ξ = 0 term of the screened schemes: TM from the static screening
    /// formula, TE = 0.
    ModifiedZero { eps0: f64, kappa_a: f64 },
    Rpa(ModifiedParams),
    UniaxialFinite { eps_x: f64, eps_z: f64, zeta: f64 },
    UniaxialZero { r_tm0: f64, plasma_w: Option<f64> },
}

impl Prepared {
    pub fn tm(&self, y: f64) -> Result<f64> {
        Ok(match *self {
            Prepared::Fresnel { eps, zeta } => fresnel_tm(WavePoint { zeta, y }, eps),
            Prepared::DielectricZero { r0 } => r0,
            Prepared::MetalZero { .. } => 1.0,
            Prepared::Modified(ref p) => p.tm(WavePoint { zeta: p.zeta, y })?,
            Prepared::ModifiedZero { eps0, kappa_a } => zero_freq_modified_tm(y, eps0, kappa_a),
            Prepared::Rpa(ref p) => rpa_tm(WavePoint { zeta: p.zeta, y }, p)?,
            Prepared::UniaxialFinite { eps_x, eps_z, zeta } => {
                uniaxial_coeffs(WavePoint { zeta, y }, eps_x, eps_z).0
            }
            Prepared::UniaxialZero { r_tm0, .. } => r_tm0,
        })
    }

    pub fn te(&self, y: f64) -> Result<f64> {
        Ok(match *self {
            Prepared::Fresnel { eps, zeta } => fresnel_te(WavePoint { zeta, y }, eps),
            Prepared::DielectricZero { .. } => 0.0,
            Prepared::MetalZero { plasma_w } | Prepared::UniaxialZero { plasma_w, .. } => {
                plasma_w.map_or(0.0, |w| zero_freq_plasma_te(y, w))
            }
            Prepared::Modified(ref p) | Prepared::Rpa(ref p) => {
                p.te(WavePoint { zeta: p.zeta, y })
            }
            Prepared::ModifiedZero { .. } => 0.0,
            Prepared::UniaxialFinite { eps_x, zeta, .. } => {
                fresnel_te(WavePoint { zeta, y }, eps_x)
            }
        })
    }
}

impl ReflectionScheme {
    /// Builds screened-coefficient parameters for one Matsubara frequency.
    fn modified_params(
        sc: &ScreenedConductor,
        a: f64,
        temperature: f64,
        xi: f64,
        zeta: f64,
    ) -> Result<Prepared> {
        let eps = eps_core(xi, &sc.core);
        let eps_tilde = sc.eps_tilde(xi, temperature)?;
        if (eps_tilde - eps) / eps_tilde < EPS_TILDE_GUARD {
            // carrier-free reduction
            return Ok(Prepared::Fresnel { eps, zeta });
        }
        let kappa = screening_kappa(&sc.screening_spec(), temperature)?;
        Ok(Prepared::Modified(ModifiedParams {
            eps,
            eps_tilde,
            eps0: sc.core.eps_static(),
            kappa_a: 2.0 * a * kappa,
            zeta,
        }))
    }

    /// ξ = 0 term of a plain-Fresnel material.
    fn fresnel_zero(material: &MaterialResponse, a: f64, temperature: f64) -> Prepared {
        match material {
            MaterialResponse::Dielectric(osc) => {
                let e0 = osc.eps_static();
                Prepared::DielectricZero {
                    r0: (e0 - 1.0) / (e0 + 1.0),
                }
            }
            MaterialResponse::DrudeMetal(_, d) => {
                if d.plasma_frequency == 0.0 {
                    Self::fresnel_zero(
                        &MaterialResponse::Dielectric(material.core().clone()),
                        a,
                        temperature,
                    )
                } else {
                    Prepared::MetalZero { plasma_w: None }
                }
            }
            MaterialResponse::GeneralizedPlasma(_, wp) => {
                if *wp == 0.0 {
                    Self::fresnel_zero(
                        &MaterialResponse::Dielectric(material.core().clone()),
                        a,
                        temperature,
                    )
                } else {
                    Prepared::MetalZero {
                        plasma_w: Some(2.0 * a * wp / C),
                    }
                }
            }
            MaterialResponse::ScreenedConductor(sc) => {
                if sc.carriers.density_at(temperature) > 0.0 {
                    Prepared::MetalZero { plasma_w: None }
                } else {
                    Self::fresnel_zero(
                        &MaterialResponse::Dielectric(sc.core.clone()),
                        a,
                        temperature,
                    )
                }
            }
        }
    }

    /// Resolves the coefficients of one Matsubara term. `xi` in rad/s,
    /// `zeta = 2aξ/c`; `xi = 0` selects each scheme's explicit
    /// zero-frequency branch (the generic formulas are never evaluated
    /// there — the discontinuity at (0,0) is physical).
    pub fn prepare(&self, a: f64, temperature: f64, xi: f64, zeta: f64) -> Result<Prepared> {
        match self {
            ReflectionScheme::StandardFresnel(m) => {
                if xi == 0.0 {
                    Ok(Self::fresnel_zero(m, a, temperature))
                } else {
                    Ok(Prepared::Fresnel {
                        eps: m.eps(xi, temperature)?,
                        zeta,
                    })
                }
            }
            ReflectionScheme::ModifiedScreened(sc) | ReflectionScheme::Rpa(sc) => {
                if xi == 0.0 {
                    if sc.carriers.density_at(temperature) > 0.0 {
                        let kappa = screening_kappa(&sc.screening_spec(), temperature)?;
                        Ok(Prepared::ModifiedZero {
                            eps0: sc.core.eps_static(),
                            kappa_a: 2.0 * a * kappa,
                        })
                    } else {
                        let e0 = sc.core.eps_static();
                        Ok(Prepared::DielectricZero {
                            r0: (e0 - 1.0) / (e0 + 1.0),
                        })
                    }
                } else {
                    let prepared = Self::modified_params(sc, a, temperature, xi, zeta)?;
                    match (self, prepared) {
                        (ReflectionScheme::Rpa(_), Prepared::Modified(p)) => {
                            Ok(Prepared::Rpa(p))
                        }
                        (_, p) => Ok(p),
                    }
                }
            }
            ReflectionScheme::Uniaxial { eps_x, eps_z } => {
                if xi == 0.0 {
                    let zx = Self::fresnel_zero(eps_x, a, temperature);
                    let zz = Self::fresnel_zero(eps_z, a, temperature);
                    // TM: finite static permittivities combine through
                    // √(ε_x0 ε_z0); a divergent response on either axis
                    // forces the ideal value 1.
                    let r_tm0 = match (zx, zz) {
                        (
                            Prepared::DielectricZero { r0: rx },
                            Prepared::DielectricZero { r0: rz },
                        ) => {
                            let ex = (1.0 + rx) / (1.0 - rx);
                            let ez = (1.0 + rz) / (1.0 - rz);
                            let s = (ex * ez).sqrt();
                            (s - 1.0) / (s + 1.0)
                        }
                        _ => 1.0,
                    };
                    let plasma_w = match zx {
                        Prepared::MetalZero { plasma_w } => plasma_w,
                        _ => None,
                    };
                    Ok(Prepared::UniaxialZero { r_tm0, plasma_w })
                } else {
                    Ok(Prepared::UniaxialFinite {
                        eps_x: eps_x.eps(xi, temperature)?,
                        eps_z: eps_z.eps(xi, temperature)?,
                        zeta,
                    })
                }
            }
        }
    }
}
