//! Run configuration files.
//!
//! Sectioned key-value text with units in the key names:
//!
//! ```text
//! [run]
//! material = gold.mat                 # path relative to the config file
//! # material_z = si.mat               # normal-axis response (uniaxial only)
//! schemes = modified_screened, fresnel
//! # fresnel | modified_screened | rpa | uniaxial
//! quantities = pressure               # free_energy | pressure | entropy
//! # reference_scheme = fresnel        # compare subcommand
//! tol = 1e-8                          # relative tolerance (default 1e-8)
//!
//! [separation]
//! min_nm = 300
//! max_nm = 750
//! count = 10
//! spacing = linear                    # linear | log
//!
//! [temperature]
//! min_K = 300
//! max_K = 300
//! count = 1
//! spacing = linear
//! ```
//!
//! Unknown sections and keys are rejected.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::error::{CasimirError, Result};
use crate::materials::{file::load_material, MaterialResponse};
use crate::reflection::ReflectionScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeTag {
    Fresnel,
    ModifiedScreened,
    Rpa,
    Uniaxial,
}

impl SchemeTag {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "fresnel" => SchemeTag::Fresnel,
            "modified_screened" => SchemeTag::ModifiedScreened,
            "rpa" => SchemeTag::Rpa,
            "uniaxial" => SchemeTag::Uniaxial,
            other => {
                return Err(CasimirError::Config(format!("unknown scheme `{other}`")));
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SchemeTag::Fresnel => "fresnel",
            SchemeTag::ModifiedScreened => "modified_screened",
            SchemeTag::Rpa => "rpa",
            SchemeTag::Uniaxial => "uniaxial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    FreeEnergy,
    Pressure,
    Entropy,
}

impl Quantity {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "free_energy" => Quantity::FreeEnergy,
            "pressure" => Quantity::Pressure,
            "entropy" => Quantity::Entropy,
            other => {
                return Err(CasimirError::Config(format!("unknown quantity `{other}`")));
            }
        })
    }

    /// Column name with unit suffix.
    pub fn column(&self) -> &'static str {
        match self {
            Quantity::FreeEnergy => "free_energy_J_per_m2",
            Quantity::Pressure => "pressure_Pa",
            Quantity::Entropy => "entropy_J_per_K_m2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log_spacing: bool,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = self.count as f64 - 1.0;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / n;
                if self.log_spacing {
                    (self.min.ln() * (1.0 - f) + self.max.ln() * f).exp()
                } else {
                    self.min * (1.0 - f) + self.max * f
                }
            })
            .collect()
    }

    fn validate(&self, what: &str) -> Result<()> {
        if self.count == 0 {
            return Err(CasimirError::Config(format!("{what} grid has count 0")));
        }
        if self.count > 1 && !(self.min < self.max) {
            return Err(CasimirError::Config(format!(
                "{what} grid needs min < max, got {} .. {}",
                self.min, self.max
            )));
        }
        if !(self.min > 0.0) {
            return Err(CasimirError::Config(format!(
                "{what} grid minimum must be positive"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub material_path: PathBuf,
    pub material: MaterialResponse,
    pub material_z: Option<(PathBuf, MaterialResponse)>,
    pub schemes: Vec<SchemeTag>,
    pub quantities: Vec<Quantity>,
    pub reference_scheme: Option<SchemeTag>,
    /// Separations, m.
    pub a_grid: Grid,
    /// Temperatures, K.
    pub t_grid: Grid,
    pub tol: f64,
    /// Raw bytes of the config and material files, hashed into the output
    /// metadata.
    pub source_texts: Vec<String>,
}

impl RunConfig {
    /// Builds the concrete reflection scheme for a tag.
    pub fn scheme(&self, tag: SchemeTag) -> Result<ReflectionScheme> {
        match tag {
            SchemeTag::Fresnel => Ok(ReflectionScheme::StandardFresnel(self.material.clone())),
            SchemeTag::ModifiedScreened | SchemeTag::Rpa => match &self.material {
                MaterialResponse::ScreenedConductor(sc) => Ok(if tag == SchemeTag::Rpa {
                    ReflectionScheme::Rpa((**sc).clone())
                } else {
                    ReflectionScheme::ModifiedScreened((**sc).clone())
                }),
                _ => Err(CasimirError::Config(format!(
                    "scheme `{}` requires a screened_conductor material (got a carrier-free one)",
                    tag.name()
                ))),
            },
            SchemeTag::Uniaxial => {
                let (_, eps_z) = self.material_z.as_ref().ok_or_else(|| {
                    CasimirError::Config("scheme `uniaxial` requires `material_z`".into())
                })?;
                Ok(ReflectionScheme::Uniaxial {
                    eps_x: self.material.clone(),
                    eps_z: eps_z.clone(),
                })
            }
        }
    }

    /// The defaults-resolved key-value echo written into output metadata.
    pub fn echo(&self) -> Vec<(String, String)> {
        let grid = |g: &Grid| {
            format!(
                "{:e}..{:e} x{} {}",
                g.min,
                g.max,
                g.count,
                if g.log_spacing { "log" } else { "linear" }
            )
        };
        let mut out = vec![
            ("material".to_string(), self.material_path.display().to_string()),
            (
                "schemes".to_string(),
                self.schemes
                    .iter()
                    .map(|s| s.name())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            (
                "quantities".to_string(),
                self.quantities
                    .iter()
                    .map(|q| q.column())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("separation_m".to_string(), grid(&self.a_grid)),
            ("temperature_K".to_string(), grid(&self.t_grid)),
            ("tol".to_string(), format!("{:e}", self.tol)),
        ];
        if let Some((p, _)) = &self.material_z {
            out.push(("material_z".to_string(), p.display().to_string()));
        }
        if let Some(r) = self.reference_scheme {
            out.push(("reference_scheme".to_string(), r.name().to_string()));
        }
        out
    }
}

struct Section {
    values: HashMap<String, (String, usize)>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.values.remove(key)
    }
}

fn parse_sections(text: &str, path: &str) -> Result<HashMap<String, Section>> {
    let mut out: HashMap<String, Section> = HashMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            out.entry(name.clone()).or_insert(Section {
                values: HashMap::new(),
            });
            current = Some(name);
            continue;
        }
        let Some(section) = &current else {
            return Err(CasimirError::Parse {
                path: path.into(),
                line: line_no,
                message: "content before any [section] header".into(),
            });
        };
        let Some((key, value)) = line.split_once('=') else {
            return Err(CasimirError::Parse {
                path: path.into(),
                line: line_no,
                message: "expected `key = value`".into(),
            });
        };
        let entry = out.get_mut(section).unwrap();
        if entry
            .values
            .insert(key.trim().into(), (value.trim().into(), line_no))
            .is_some()
        {
            return Err(CasimirError::Parse {
                path: path.into(),
                line: line_no,
                message: format!("duplicate key `{}`", key.trim()),
            });
        }
    }
    Ok(out)
}

fn parse_grid(section: &mut Section, path: &str, what: &str, unit_scale: f64, unit: &str) -> Result<Grid> {
    let num = |kv: Option<(String, usize)>, key: &str| -> Result<f64> {
        let (v, line) = kv.ok_or_else(|| {
            CasimirError::Config(format!("missing `{key}` in [{what}] of {path}"))
        })?;
        v.parse::<f64>().map_err(|_| CasimirError::Parse {
            path: path.into(),
            line,
            message: format!("`{key}` is not a number: `{v}`"),
        })
    };
    let min = num(section.take(&format!("min_{unit}")), &format!("min_{unit}"))? * unit_scale;
    let max = num(section.take(&format!("max_{unit}")), &format!("max_{unit}"))? * unit_scale;
    let count = num(section.take("count"), "count")? as usize;
    let log_spacing = match section.take("spacing") {
        None => false,
        Some((v, line)) => match v.as_str() {
            "linear" => false,
            "log" => true,
            other => {
                return Err(CasimirError::Parse {
                    path: path.into(),
                    line,
                    message: format!("unknown spacing `{other}`"),
                });
            }
        },
    };
    let grid = Grid {
        min,
        max,
        count,
        log_spacing,
    };
    grid.validate(what)?;
    Ok(grid)
}

fn reject_leftovers(sections: &HashMap<String, Section>, path: &str) -> Result<()> {
    for (name, s) in sections {
        if let Some((key, (_, line))) = s.values.iter().min_by_key(|(_, (_, l))| *l) {
            return Err(CasimirError::Parse {
                path: path.into(),
                line: *line,
                message: format!("unknown key `{key}` in [{name}]"),
            });
        }
    }
    Ok(())
}

/// Loads and fully validates a run configuration; material paths are
/// resolved relative to the config file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CasimirError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let pstr = path.display().to_string();
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut sections = parse_sections(&text, &pstr)?;

    let known = ["run", "separation", "temperature"];
    for name in sections.keys() {
        if !known.contains(&name.as_str()) {
            return Err(CasimirError::Config(format!(
                "unknown section `[{name}]` in {pstr}"
            )));
        }
    }

    let mut run = sections.remove("run").ok_or_else(|| {
        CasimirError::Config(format!("missing [run] section in {pstr}"))
    })?;

    let (mat_rel, _) = run
        .take("material")
        .ok_or_else(|| CasimirError::Config(format!("missing `material` in [run] of {pstr}")))?;
    let material_path = dir.join(&mat_rel);
    let material = load_material(&material_path)?;
    let material_text = std::fs::read_to_string(&material_path).map_err(|source| {
        CasimirError::Io {
            path: material_path.display().to_string(),
            source,
        }
    })?;

    let mut source_texts = vec![text.clone(), material_text];
    let material_z = match run.take("material_z") {
        None => None,
        Some((rel, _)) => {
            let p = dir.join(&rel);
            let m = load_material(&p)?;
            source_texts.push(std::fs::read_to_string(&p).map_err(|source| CasimirError::Io {
                path: p.display().to_string(),
                source,
            })?);
            Some((p, m))
        }
    };

    let (schemes_raw, _) = run
        .take("schemes")
        .ok_or_else(|| CasimirError::Config(format!("missing `schemes` in [run] of {pstr}")))?;
    let schemes: Vec<SchemeTag> = schemes_raw
        .split(',')
        .map(|s| SchemeTag::parse(s.trim()))
        .collect::<Result<_>>()?;
    if schemes.is_empty() {
        return Err(CasimirError::Config("empty scheme list".into()));
    }

    let quantities: Vec<Quantity> = match run.take("quantities") {
        None => vec![Quantity::FreeEnergy],
        Some((raw, _)) => raw
            .split(',')
            .map(|s| Quantity::parse(s.trim()))
            .collect::<Result<_>>()?,
    };
    if quantities.is_empty() {
        return Err(CasimirError::Config("empty quantity list".into()));
    }

    let reference_scheme = match run.take("reference_scheme") {
        None => None,
        Some((raw, _)) => Some(SchemeTag::parse(raw.trim())?),
    };

    let tol = match run.take("tol") {
        None => 1e-8,
        Some((raw, line)) => raw.parse::<f64>().map_err(|_| CasimirError::Parse {
            path: pstr.clone(),
            line,
            message: format!("`tol` is not a number: `{raw}`"),
        })?,
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CasimirError::Config(format!("tol {tol} outside (0, 1)")));
    }

    let a_grid = match sections.get_mut("separation") {
        Some(s) => parse_grid(s, &pstr, "separation", 1e-9, "nm")?,
        None => {
            return Err(CasimirError::Config(format!(
                "missing [separation] section in {pstr}"
            )))
        }
    };
    let t_grid = match sections.get_mut("temperature") {
        Some(s) => parse_grid(s, &pstr, "temperature", 1.0, "K")?,
        None => {
            return Err(CasimirError::Config(format!(
                "missing [temperature] section in {pstr}"
            )))
        }
    };

    if !run.values.is_empty() {
        let (key, (_, line)) = run.values.iter().min_by_key(|(_, (_, l))| *l).unwrap();
        return Err(CasimirError::Parse {
            path: pstr,
            line: *line,
            message: format!("unknown key `{key}` in [run]"),
        });
    }
    reject_leftovers(&sections, &pstr)?;

    let config = RunConfig {
        material_path,
        material,
        material_z,
        schemes: schemes.clone(),
        quantities,
        reference_scheme,
        a_grid,
        t_grid,
        tol,
        source_texts,
    };

    // semantic checks: every selected scheme must be constructible
    for &tag in &schemes {
        config.scheme(tag)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(dir: &Path, name: &str, content: &str) -> PathBuf {
        let p = dir.join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        p
    }

    const DIELECTRIC_MAT: &str =
        "[model]\nvariant = dielectric\n[oscillators]\nf_eV2=50 omega_eV=5 gamma_eV=0\n";

    const MINIMAL: &str = "\
[run]
material = m.mat
schemes = fresnel

[separation]
min_nm = 1000
max_nm = 1000
count = 1

[temperature]
min_K = 300
max_K = 300
count = 1
";

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("casimir_cfg_{tag}_{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn minimal_config_loads_with_defaults() {
        let d = tmpdir("min");
        write_tmp(&d, "m.mat", DIELECTRIC_MAT);
        let p = write_tmp(&d, "run.cfg", MINIMAL);
        let cfg = load_config(&p).unwrap();
        assert_eq!(cfg.tol, 1e-8);
        assert_eq!(cfg.quantities, vec![Quantity::FreeEnergy]);
        let av = cfg.a_grid.values();
        assert_eq!(av.len(), 1);
        assert!((av[0] / 1.0e-6 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn screened_scheme_on_carrier_free_material_is_rejected() {
        let d = tmpdir("sem");
        write_tmp(&d, "m.mat", DIELECTRIC_MAT);
        let p = write_tmp(
            &d,
            "run.cfg",
            &MINIMAL.replace("schemes = fresnel", "schemes = modified_screened"),
        );
        let err = load_config(&p).unwrap_err().to_string();
        assert!(err.contains("screened_conductor"), "{err}");
    }

    #[test]
    fn log_grid_generates_log_spaced_values() {
        let g = Grid {
            min: 0.01,
            max: 10.0,
            count: 7,
            log_spacing: true,
        };
        let v = g.values();
        assert_eq!(v.len(), 7);
        assert!((v[0] - 0.01).abs() < 1e-15 && (v[6] - 10.0).abs() < 1e-12);
        // constant ratio
        let r = v[1] / v[0];
        for w in v.windows(2) {
            assert!((w[1] / w[0] / r - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let d = tmpdir("unk");
        write_tmp(&d, "m.mat", DIELECTRIC_MAT);
        let p = write_tmp(&d, "run.cfg", &format!("{MINIMAL}typo_key = 3\n"));
        let err = load_config(&p).unwrap_err().to_string();
        assert!(err.contains("typo_key"), "{err}");
    }
}
