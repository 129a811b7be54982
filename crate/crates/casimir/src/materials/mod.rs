//! Dielectric permittivities along the imaginary frequency axis and
//! screening lengths from carrier parameters.
//!
//! Unit convention: internal formulas are rational-SI transcriptions of the
//! usual Gaussian-unit forms (4πe²n/m → e²n/(ε_vac m), 4πσ → σ/ε_vac).
//! All downstream quantities enter only through dimensionless ratios, so the
//! choice is internal; it is documented wherever a convention-bearing value
//! escapes (see [`sigma_imag_axis`]).

pub mod file;

use crate::constants::{E_CHARGE, EPS_VAC, HBAR, K_B};
use crate::error::{CasimirError, Result};

/// One core-electron oscillator: strength f (rad²/s²), resonance ω (rad/s),
/// damping γ (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub strength: f64,
    pub resonance: f64,
    pub damping: f64,
}

impl Oscillator {
    pub fn new(strength: f64, resonance: f64, damping: f64) -> Result<Self> {
        if !(resonance > 0.0) {
            return Err(CasimirError::Domain(
                "oscillator resonance must be positive".into(),
            ));
        }
        if strength < 0.0 || damping < 0.0 {
            return Err(CasimirError::Domain(
                "oscillator strength and damping must be non-negative".into(),
            ));
        }
        Ok(Self {
            strength,
            resonance,
            damping,
        })
    }
}

/// Core-electron dielectric response: ε(iξ) = 1 + Σ f_j/(ω_j² + ξ² + γ_j ξ).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OscillatorSet {
    pub oscillators: Vec<Oscillator>,
}

impl OscillatorSet {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn new(oscillators: Vec<Oscillator>) -> Self {
        Self { oscillators }
    }

    /// Static core permittivity ε₀ = ε(i·0).
    pub fn eps_static(&self) -> f64 {
        eps_core(0.0, self)
    }
}

/// Evaluates the core permittivity at imaginary frequency iξ, ξ ≥ 0.
pub fn eps_core(xi: f64, osc: &OscillatorSet) -> f64 {
    let mut eps = 1.0;
    for o in &osc.oscillators {
        eps += o.strength / (o.resonance * o.resonance + xi * xi + o.damping * xi);
    }
    eps
}

/// Free-carrier Drude parameters: plasma frequency and relaxation, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    pub plasma_frequency: f64,
    pub relaxation: f64,
}

/// ε(iξ) + ω_p²/(ξ(ξ+γ)) for ξ > 0. Diverges at ξ = 0; zero-frequency terms
/// are handled by scheme-specific formulas and must not call this.
pub fn eps_drude(xi: f64, osc: &OscillatorSet, drude: &DrudeParams) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(CasimirError::Domain(
            "eps_drude requires xi > 0; zero frequency has its own branch".into(),
        ));
    }
    let wp = drude.plasma_frequency;
    Ok(eps_core(xi, osc) + wp * wp / (xi * (xi + drude.relaxation)))
}

/// Carrier statistics selecting the Einstein-relation diffusion coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    MaxwellBoltzmann,
    FermiDirac,
}

/// Carrier density as a function of temperature.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityModel {
    /// n(T) = n0, 1/m³.
    Constant(f64),
    /// n(T) = n0 · exp(−E_a/(k_B T)): thermally activated (intrinsic) carriers.
    Activated { n0: f64, activation_j: f64 },
    /// Table of (T in K, n in 1/m³) nodes; interpolated linearly in
    /// log n versus 1/T. Nodes must be sorted by ascending T.
    Table(Vec<(f64, f64)>),
}

impl DensityModel {
    pub fn at(&self, temperature: f64) -> f64 {
        match self {
            DensityModel::Constant(n0) => *n0,
            DensityModel::Activated { n0, activation_j } => {
                n0 * (-activation_j / (K_B * temperature)).exp()
            }
            DensityModel::Table(nodes) => {
                if nodes.is_empty() {
                    return 0.0;
                }
                if temperature <= nodes[0].0 {
                    return nodes[0].1;
                }
                if temperature >= nodes[nodes.len() - 1].0 {
                    return nodes[nodes.len() - 1].1;
                }
                let i = nodes.partition_point(|&(t, _)| t < temperature);
                let (t0, n0) = nodes[i - 1];
                let (t1, n1) = nodes[i];
                let w = (1.0 / temperature - 1.0 / t0) / (1.0 / t1 - 1.0 / t0);
                (n0.ln() * (1.0 - w) + n1.ln() * w).exp()
            }
        }
    }
}

/// Carrier mobility as a function of temperature.
#[derive(Debug, Clone, PartialEq)]
pub enum MobilityModel {
    /// μ(T) = μ0, m²/(V·s).
    Constant(f64),
    /// μ(T) = μ0 · exp(−E_a/(k_B T)): hopping-style activated mobility.
    Activated { mu0: f64, activation_j: f64 },
    /// μ(T) = μ_ref · (T_ref/T)^p: phonon-limited mobility of a perfect
    /// lattice (μ → ∞, relaxation γ → 0 as T → 0).
    PowerLaw { mu_ref: f64, t_ref: f64, exponent: f64 },
}

impl MobilityModel {
    pub fn at(&self, temperature: f64) -> f64 {
        match self {
            MobilityModel::Constant(mu0) => *mu0,
            MobilityModel::Activated { mu0, activation_j } => {
                mu0 * (-activation_j / (K_B * temperature)).exp()
            }
            MobilityModel::PowerLaw {
                mu_ref,
                t_ref,
                exponent,
            } => mu_ref * (t_ref / temperature).powf(*exponent),
        }
    }
}

/// Free-carrier description: density n, effective mass m, mobility μ,
/// and the statistics flag choosing the diffusion coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierModel {
    pub density: DensityModel,
    /// Effective mass, kg.
    pub effective_mass: f64,
    pub mobility: MobilityModel,
    pub statistics: Statistics,
}

impl CarrierModel {
    pub fn density_at(&self, temperature: f64) -> f64 {
        self.density.at(temperature)
    }

    pub fn mobility_at(&self, temperature: f64) -> f64 {
        self.mobility.at(temperature)
    }

    /// Static drift conductivity σ(0) = μ|e|n, SI (S/m).
    pub fn sigma0_si(&self, temperature: f64) -> f64 {
        self.mobility_at(temperature) * E_CHARGE * self.density_at(temperature)
    }

    /// Squared plasma frequency ω_p² = n e²/(ε_vac m), rad²/s².
    pub fn omega_p_sq(&self, temperature: f64) -> f64 {
        self.density_at(temperature) * E_CHARGE * E_CHARGE / (EPS_VAC * self.effective_mass)
    }

    /// Drude relaxation γ = |e|/(μ m), rad/s. Infinite at zero mobility.
    pub fn relaxation(&self, temperature: f64) -> f64 {
        let mu = self.mobility_at(temperature);
        if mu <= 0.0 {
            f64::INFINITY
        } else {
            E_CHARGE / (mu * self.effective_mass)
        }
    }

    /// Fermi energy E_F = ħω_p, J.
    pub fn fermi_energy(&self, temperature: f64) -> f64 {
        HBAR * self.omega_p_sq(temperature).sqrt()
    }
}

/// σ(iξ) = σ(0)/(1 + ξ/γ) in the Gaussian convention (units s⁻¹):
/// σ_G = σ_SI/(4π ε_vac). The Gaussian value is what the screening formulas
/// were originally written with; every internal consumer uses dimensionless
/// ratios so the convention only matters for this accessor's documented unit.
pub fn sigma_imag_axis(xi: f64, carriers: &CarrierModel, temperature: f64) -> f64 {
    let sigma0_si = carriers.sigma0_si(temperature);
    if sigma0_si == 0.0 {
        return 0.0;
    }
    let gamma = carriers.relaxation(temperature);
    let sigma0_gauss = sigma0_si / (4.0 * std::f64::consts::PI * EPS_VAC);
    sigma0_gauss / (1.0 + xi / gamma)
}

/// Which screening length 1/κ applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreeningKind {
    /// κ² = e²n/(ε_vac ε₀ k_B T): nondegenerate (Maxwell–Boltzmann) carriers.
    DebyeHuckel,
    /// κ² = 3e²n/(2 ε_vac ε₀ E_F), E_F = ħω_p: degenerate carriers;
    /// temperature-independent.
    ThomasFermi,
    /// κ² = σ(0)/(ε_vac ε₀ D), with the diffusion coefficient D from the
    /// Einstein relation selected by the carrier statistics. Reduces exactly
    /// to DebyeHuckel (Maxwell–Boltzmann) or ThomasFermi (Fermi–Dirac).
    GeneralEinstein,
}

/// Screening specification: kind, carriers, and the static core permittivity
/// entering every κ² denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreeningSpec {
    pub kind: ScreeningKind,
    pub carriers: CarrierModel,
    pub eps0: f64,
}

/// Inverse screening length κ at temperature T, 1/m.
pub fn screening_kappa(spec: &ScreeningSpec, temperature: f64) -> Result<f64> {
    let n = spec.carriers.density_at(temperature);
    if n == 0.0 {
        return Ok(0.0);
    }
    let e2n = E_CHARGE * E_CHARGE * n;
    let kappa_sq = match spec.kind {
        ScreeningKind::DebyeHuckel => {
            if !(temperature > 0.0) {
                return Err(CasimirError::Domain(
                    "Debye-Huckel screening diverges at T = 0 with carriers present".into(),
                ));
            }
            e2n / (EPS_VAC * spec.eps0 * K_B * temperature)
        }
        ScreeningKind::ThomasFermi => {
            let ef = spec.carriers.fermi_energy(temperature);
            1.5 * e2n / (EPS_VAC * spec.eps0 * ef)
        }
        ScreeningKind::GeneralEinstein => {
            let mu = spec.carriers.mobility_at(temperature);
            let d = match spec.carriers.statistics {
                Statistics::MaxwellBoltzmann => {
                    if !(temperature > 0.0) {
                        return Err(CasimirError::Domain(
                            "Einstein diffusion undefined at T = 0 for Maxwell-Boltzmann carriers"
                                .into(),
                        ));
                    }
                    mu * K_B * temperature / E_CHARGE
                }
                Statistics::FermiDirac => {
                    mu * 2.0 * spec.carriers.fermi_energy(temperature) / (3.0 * E_CHARGE)
                }
            };
            if d == 0.0 {
                return Err(CasimirError::Domain(
                    "zero diffusion coefficient: screening length undefined".into(),
                ));
            }
            spec.carriers.sigma0_si(temperature) / (EPS_VAC * spec.eps0 * d)
        }
    };
    Ok(kappa_sq.sqrt())
}

/// Conductor with a core response, free carriers, and a screening choice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenedConductor {
    pub core: OscillatorSet,
    pub carriers: CarrierModel,
    pub screening: ScreeningKind,
}

impl ScreenedConductor {
    pub fn screening_spec(&self) -> ScreeningSpec {
        ScreeningSpec {
            kind: self.screening,
            carriers: self.carriers.clone(),
            eps0: self.core.eps_static(),
        }
    }

    /// ε̃(iξ) = ε(iξ) + ω_p²/(ξ(ξ+γ)) with carrier parameters at T.
    pub fn eps_tilde(&self, xi: f64, temperature: f64) -> Result<f64> {
        let drude = DrudeParams {
            plasma_frequency: self.carriers.omega_p_sq(temperature).sqrt(),
            relaxation: self.carriers.relaxation(temperature),
        };
        if drude.plasma_frequency == 0.0 {
            return Ok(eps_core(xi, &self.core));
        }
        eps_drude(xi, &self.core, &drude)
    }
}

/// Dielectric-response model of one (symmetric) plate material.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialResponse {
    /// Core oscillators only, no free carriers.
    Dielectric(OscillatorSet),
    /// Core oscillators plus a dissipative free-carrier term.
    DrudeMetal(OscillatorSet, DrudeParams),
    /// Core oscillators plus a dissipationless ω_p²/ξ² term (plasma frequency
    /// in rad/s).
    GeneralizedPlasma(OscillatorSet, f64),
    /// Carriers with screening corrections.
    ScreenedConductor(Box<ScreenedConductor>),
}

impl MaterialResponse {
    /// Permittivity at iξ, ξ > 0 (ξ = 0 is scheme-dispatched downstream).
    pub fn eps(&self, xi: f64, temperature: f64) -> Result<f64> {
        match self {
            MaterialResponse::Dielectric(osc) => Ok(eps_core(xi, osc)),
            MaterialResponse::DrudeMetal(osc, drude) => eps_drude(xi, osc, drude),
            MaterialResponse::GeneralizedPlasma(osc, wp) => eps_drude(
                xi,
                osc,
                &DrudeParams {
                    plasma_frequency: *wp,
                    relaxation: 0.0,
                },
            ),
            MaterialResponse::ScreenedConductor(sc) => sc.eps_tilde(xi, temperature),
        }
    }

    pub fn core(&self) -> &OscillatorSet {
        match self {
            MaterialResponse::Dielectric(osc) => osc,
            MaterialResponse::DrudeMetal(osc, _) => osc,
            MaterialResponse::GeneralizedPlasma(osc, _) => osc,
            MaterialResponse::ScreenedConductor(sc) => &sc.core,
        }
    }
}
