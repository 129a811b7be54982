//! Material description files.
//!
//! Sectioned key-value text. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! [model]
//! variant = screened_conductor        # dielectric | drude_metal |
//!                                     # generalized_plasma | screened_conductor
//! screening = debye_huckel            # debye_huckel | thomas_fermi | general_einstein
//! # plasma_eV = 9.0                   # drude_metal, generalized_plasma
//! # relaxation_eV = 0.035             # drude_metal
//!
//! [oscillators]                       # zero or more rows
//! f_eV2 = 50.0  omega_eV = 5.0  gamma_eV = 0.0
//!
//! [carriers]
//! n_per_cm3 = 1e18
//! mass_ratio = 1.0                    # effective mass / electron mass
//! mobility_cm2_per_Vs = 1000
//! statistics = maxwell_boltzmann      # maxwell_boltzmann | fermi_dirac
//! # density_model = activated         # constant (default) | activated
//! # density_activation_eV = 0.05
//! # mobility_model = power_law        # constant (default) | activated | power_law
//! # mobility_activation_eV = 0.02
//! # mobility_t_ref_K = 300
//! # mobility_exponent = 2.5
//! ```
//!
//! Unknown sections or keys are rejected with the offending line number;
//! unit bugs hide in silently-ignored keys.

use std::collections::HashMap;
use std::path::Path;

use super::*;
use crate::constants::{ev_to_rad_per_s, E_CHARGE, M_E};
use crate::error::{CasimirError, Result};

fn perr(path: &str, line: usize, message: impl Into<String>) -> CasimirError {
    CasimirError::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

struct Keyed {
    values: HashMap<String, (String, usize)>,
    path: String,
}

impl Keyed {
    fn insert(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        if self
            .values
            .insert(key.to_string(), (value.to_string(), line))
            .is_some()
        {
            return Err(perr(&self.path, line, format!("duplicate key `{key}`")));
        }
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.values.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<(f64, usize)>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<f64>()
                .map(|x| Some((x, line)))
                .map_err(|_| perr(&self.path, line, format!("`{key}` is not a number: `{v}`"))),
        }
    }

    fn require_f64(&mut self, key: &str, section: &str) -> Result<f64> {
        self.take_f64(key)?
            .map(|(v, _)| v)
            .ok_or_else(|| perr(&self.path, 0, format!("missing `{key}` in [{section}]")))
    }

    fn reject_leftovers(&self, section: &str) -> Result<()> {
        if let Some((key, (_, line))) = self.values.iter().min_by_key(|(_, (_, l))| *l) {
            return Err(perr(
                &self.path,
                *line,
                format!("unknown key `{key}` in [{section}]"),
            ));
        }
        Ok(())
    }
}

/// Parses `key = value` pairs from one oscillator row (whitespace-separated).
fn parse_row(path: &str, line_no: usize, line: &str) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    // split on whitespace but keep `key = value` groups together by first
    // normalizing `=` spacing
    let normalized = line.replace('=', " = ");
    let tokens: Vec<&str> = normalized.split_whitespace().collect();
    let mut i = 0;
    while i < tokens.len() {
        if i + 2 >= tokens.len() || tokens[i + 1] != "=" {
            return Err(perr(path, line_no, "expected `key = value` groups"));
        }
        let key = tokens[i];
        let value: f64 = tokens[i + 2]
            .parse()
            .map_err(|_| perr(path, line_no, format!("`{key}` is not a number")))?;
        if out.insert(key.to_string(), value).is_some() {
            return Err(perr(path, line_no, format!("duplicate key `{key}` in row")));
        }
        i += 3;
    }
    Ok(out)
}

/// Loads a material description file.
pub fn load_material(path: &Path) -> Result<MaterialResponse> {
    let text = std::fs::read_to_string(path).map_err(|source| CasimirError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_material(&text, &path.display().to_string())
}

/// Parses material text; `path` is used only for error messages.
pub fn parse_material(text: &str, path: &str) -> Result<MaterialResponse> {
    let mut model = Keyed {
        values: HashMap::new(),
        path: path.to_string(),
    };
    let mut carriers_kv = Keyed {
        values: HashMap::new(),
        path: path.to_string(),
    };
    let mut oscillators: Vec<Oscillator> = Vec::new();
    let mut have_carriers = false;

    #[derive(PartialEq)]
    enum Section {
        None,
        Model,
        Oscillators,
        Carriers,
    }
    let mut section = Section::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "model" => Section::Model,
                "oscillators" => Section::Oscillators,
                "carriers" => {
                    have_carriers = true;
                    Section::Carriers
                }
                other => return Err(perr(path, line_no, format!("unknown section `[{other}]`"))),
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(perr(path, line_no, "content before any [section] header"))
            }
            Section::Oscillators => {
                let mut row = parse_row(path, line_no, line)?;
                let f_ev2 = row
                    .remove("f_eV2")
                    .ok_or_else(|| perr(path, line_no, "oscillator row missing `f_eV2`"))?;
                let omega_ev = row
                    .remove("omega_eV")
                    .ok_or_else(|| perr(path, line_no, "oscillator row missing `omega_eV`"))?;
                let gamma_ev = row
                    .remove("gamma_eV")
                    .ok_or_else(|| perr(path, line_no, "oscillator row missing `gamma_eV`"))?;
                if let Some(key) = row.keys().next() {
                    return Err(perr(
                        path,
                        line_no,
                        format!("unknown key `{key}` in oscillator row"),
                    ));
                }
                let s = ev_to_rad_per_s(1.0);
                oscillators.push(
                    Oscillator::new(f_ev2 * s * s, omega_ev * s, gamma_ev * s).map_err(|e| {
                        perr(path, line_no, format!("invalid oscillator: {e}"))
                    })?,
                );
            }
            Section::Model | Section::Carriers => {
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| perr(path, line_no, "expected `key = value`"))?;
                let target = if section == Section::Model {
                    &mut model
                } else {
                    &mut carriers_kv
                };
                target.insert(key.trim(), value.trim(), line_no)?;
            }
        }
    }

    let (variant, variant_line) = model
        .take("variant")
        .ok_or_else(|| perr(path, 0, "missing `variant` in [model]"))?;

    let core = OscillatorSet::new(oscillators);

    let carriers = if have_carriers {
        Some(parse_carriers(&mut carriers_kv, path)?)
    } else {
        None
    };
    carriers_kv.reject_leftovers("carriers")?;

    let material = match variant.as_str() {
        "dielectric" => {
            if carriers.is_some() {
                return Err(perr(
                    path,
                    variant_line,
                    "variant `dielectric` does not accept a [carriers] section",
                ));
            }
            MaterialResponse::Dielectric(core)
        }
        "generalized_plasma" => {
            let wp = model.require_f64("plasma_eV", "model")?;
            MaterialResponse::GeneralizedPlasma(core, ev_to_rad_per_s(wp))
        }
        "drude_metal" => {
            let wp = model.require_f64("plasma_eV", "model")?;
            let gamma = model.require_f64("relaxation_eV", "model")?;
            MaterialResponse::DrudeMetal(
                core,
                DrudeParams {
                    plasma_frequency: ev_to_rad_per_s(wp),
                    relaxation: ev_to_rad_per_s(gamma),
                },
            )
        }
        "screened_conductor" => {
            let (kind, line) = model.take("screening").ok_or_else(|| {
                perr(path, variant_line, "screened_conductor requires `screening`")
            })?;
            let screening = match kind.as_str() {
                "debye_huckel" => ScreeningKind::DebyeHuckel,
                "thomas_fermi" => ScreeningKind::ThomasFermi,
                "general_einstein" => ScreeningKind::GeneralEinstein,
                other => {
                    return Err(perr(path, line, format!("unknown screening `{other}`")));
                }
            };
            let carriers = carriers.ok_or_else(|| {
                perr(path, variant_line, "screened_conductor requires [carriers]")
            })?;
            MaterialResponse::ScreenedConductor(Box::new(ScreenedConductor {
                core,
                carriers,
                screening,
            }))
        }
        other => {
            return Err(perr(
                path,
                variant_line,
                format!("unknown variant `{other}`"),
            ));
        }
    };
    model.reject_leftovers("model")?;
    Ok(material)
}

fn parse_carriers(kv: &mut Keyed, path: &str) -> Result<CarrierModel> {
    let n_cm3 = kv.require_f64("n_per_cm3", "carriers")?;
    let n0 = n_cm3 * 1.0e6; // cm⁻³ → m⁻³
    let mass_ratio = kv.require_f64("mass_ratio", "carriers")?;
    let mu_cm2 = kv.require_f64("mobility_cm2_per_Vs", "carriers")?;
    let mu0 = mu_cm2 * 1.0e-4; // cm²/(V·s) → m²/(V·s)

    let (stat, stat_line) = kv
        .take("statistics")
        .ok_or_else(|| perr(path, 0, "missing `statistics` in [carriers]"))?;
    let statistics = match stat.as_str() {
        "maxwell_boltzmann" => Statistics::MaxwellBoltzmann,
        "fermi_dirac" => Statistics::FermiDirac,
        other => {
            return Err(perr(path, stat_line, format!("unknown statistics `{other}`")));
        }
    };

    let density = match kv.take("density_model") {
        None => DensityModel::Constant(n0),
        Some((m, line)) => match m.as_str() {
            "constant" => DensityModel::Constant(n0),
            "activated" => {
                let ea = kv.require_f64("density_activation_eV", "carriers")?;
                DensityModel::Activated {
                    n0,
                    activation_j: ea * E_CHARGE,
                }
            }
            other => {
                return Err(perr(path, line, format!("unknown density_model `{other}`")));
            }
        },
    };

    let mobility = match kv.take("mobility_model") {
        None => MobilityModel::Constant(mu0),
        Some((m, line)) => match m.as_str() {
            "constant" => MobilityModel::Constant(mu0),
            "activated" => {
                let ea = kv.require_f64("mobility_activation_eV", "carriers")?;
                MobilityModel::Activated {
                    mu0,
                    activation_j: ea * E_CHARGE,
                }
            }
            "power_law" => {
                let t_ref = kv.require_f64("mobility_t_ref_K", "carriers")?;
                let exponent = kv.require_f64("mobility_exponent", "carriers")?;
                MobilityModel::PowerLaw {
                    mu_ref: mu0,
                    t_ref,
                    exponent,
                }
            }
            other => {
                return Err(perr(path, line, format!("unknown mobility_model `{other}`")));
            }
        },
    };

    if n0 < 0.0 || mass_ratio <= 0.0 || mu0 < 0.0 {
        return Err(perr(
            path,
            0,
            "carriers require n ≥ 0, mass_ratio > 0, mobility ≥ 0",
        ));
    }

    Ok(CarrierModel {
        density,
        effective_mass: mass_ratio * M_E,
        mobility,
        statistics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SI_LIKE: &str = "\
[model]
variant = screened_conductor
screening = debye_huckel

[oscillators]
f_eV2 = 50.0  omega_eV = 5.0  gamma_eV = 0.0

[carriers]
n_per_cm3 = 1e18
mass_ratio = 0.26
mobility_cm2_per_Vs = 1450
statistics = maxwell_boltzmann
";

    #[test]
    fn parses_screened_conductor() {
        let m = parse_material(SI_LIKE, "test").unwrap();
        let MaterialResponse::ScreenedConductor(sc) = m else {
            panic!("wrong variant");
        };
        assert_eq!(sc.screening, ScreeningKind::DebyeHuckel);
        assert!((sc.carriers.density_at(300.0) - 1.0e24).abs() < 1.0);
        assert!((sc.carriers.mobility_at(300.0) - 0.145).abs() < 1e-12);
        assert!((sc.core.eps_static() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unknown_key() {
        let bad = SI_LIKE.replace("mass_ratio", "mass_ratios");
        let err = parse_material(&bad, "test").unwrap_err().to_string();
        assert!(err.contains("mass_ratios") || err.contains("mass_ratio"), "{err}");
    }

    #[test]
    fn rejects_unknown_section_and_variant() {
        assert!(parse_material("[modell]\n", "t").is_err());
        assert!(parse_material("[model]\nvariant = exotic\n", "t").is_err());
    }

    #[test]
    fn rejects_carriers_on_dielectric() {
        let bad = SI_LIKE.replace("screened_conductor", "dielectric");
        assert!(parse_material(&bad, "t").is_err());
    }

    #[test]
    fn dielectric_roundtrip() {
        let m = parse_material(
            "[model]\nvariant = dielectric\n[oscillators]\nf_eV2=25 omega_eV=5 gamma_eV=0\n",
            "t",
        )
        .unwrap();
        let MaterialResponse::Dielectric(osc) = m else {
            panic!()
        };
        assert!((osc.eps_static() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn drude_requires_both_parameters() {
        assert!(parse_material("[model]\nvariant = drude_metal\nplasma_eV = 9\n", "t").is_err());
        let m = parse_material(
            "[model]\nvariant = drude_metal\nplasma_eV = 9\nrelaxation_eV = 0.035\n",
            "t",
        )
        .unwrap();
        assert!(matches!(m, MaterialResponse::DrudeMetal(_, _)));
    }

    #[test]
    fn error_carries_line_number() {
        let bad = "[model]\nvariant = dielectric\n[oscillators]\nf_eV2=25 omega_eV=abc gamma_eV=0\n";
        let err = parse_material(bad, "mat.txt").unwrap_err().to_string();
        assert!(err.contains("mat.txt:4"), "{err}");
    }
}
