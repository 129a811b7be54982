//! The three table-producing operations behind the CLI: parameter sweeps,
//! third-law audits, and scheme comparisons.

use std::f64::consts::PI;

use crate::constants::K_B;
use crate::error::Result;
use crate::lifshitz::{
    entropy, entropy_zero_extrapolation, free_energy, pressure, EvaluationPoint,
};
use crate::materials::{DensityModel, MaterialResponse, Statistics};
use crate::specfun::{entropy_dielectric_limit, entropy_metal_limit, zeta3};

use super::config::{Quantity, RunConfig, SchemeTag};
use super::table::{fmt_num, ResultTable};

/// Outcome of a third-law audit for one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SatisfiesNernst,
    ViolatesNernst,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::SatisfiesNernst => "satisfies_nernst",
            Verdict::ViolatesNernst => "violates_nernst",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Threshold below which an extrapolated S(a, 0) counts as zero: 1% of the
/// natural entropy scale k_B ζ(3)/(16πa²) (the carrier-free ε₀ → 1 limit).
pub fn zero_entropy_threshold(a: f64) -> f64 {
    1.0e-2 * K_B * zeta3() / (16.0 * PI * a * a)
}

/// Pure verdict rule: |S0| below the zero threshold satisfies the theorem,
/// anything resolvably nonzero violates it. Fit failures never reach this
/// function — they are reported as [`Verdict::Inconclusive`] by the audit.
pub fn audit_verdict(s0: f64, a: f64) -> Verdict {
    if s0.abs() < zero_entropy_threshold(a) {
        Verdict::SatisfiesNernst
    } else {
        Verdict::ViolatesNernst
    }
}

fn evaluate(
    point: &EvaluationPoint,
    q: Quantity,
    tol: f64,
) -> Result<(f64, usize)> {
    let r = match q {
        Quantity::FreeEnergy => free_energy(point, tol)?,
        Quantity::Pressure => pressure(point, tol)?,
        Quantity::Entropy => entropy(point, tol)?,
    };
    let v = match q {
        Quantity::FreeEnergy => r.free_energy_per_area.unwrap(),
        Quantity::Pressure => r.pressure.unwrap(),
        Quantity::Entropy => r.entropy_per_area.unwrap(),
    };
    Ok((v, r.diagnostics.l_max))
}

/// One row per (a, T, scheme): every requested quantity in its own
/// unit-suffixed column. Rows whose evaluation failed are retained with
/// `converged = false` and empty value cells.
pub fn run_sweep(config: &RunConfig) -> Result<ResultTable> {
    let mut columns = vec!["a_nm".to_string(), "T_K".to_string(), "scheme".to_string()];
    for q in &config.quantities {
        columns.push(q.column().to_string());
    }
    columns.push("l_max".to_string());
    columns.push("converged".to_string());

    let mut table = ResultTable {
        columns,
        rows: Vec::new(),
        metadata: Vec::new(),
        any_failed: false,
    };
    table.standard_metadata(&config.source_texts, config.echo());

    for &a in &config.a_grid.values() {
        for &t in &config.t_grid.values() {
            for &tag in &config.schemes {
                let scheme = config.scheme(tag)?;
                let point = EvaluationPoint {
                    separation: a,
                    temperature: t,
                    scheme,
                };
                let mut cells = vec![fmt_num(a * 1e9), fmt_num(t), tag.name().to_string()];
                let mut l_max = 0usize;
                let mut ok = true;
                for &q in &config.quantities {
                    match evaluate(&point, q, config.tol) {
                        Ok((v, l)) => {
                            cells.push(fmt_num(v));
                            l_max = l_max.max(l);
                        }
                        Err(_) => {
                            cells.push(String::new());
                            ok = false;
                        }
                    }
                }
                cells.push(l_max.to_string());
                cells.push(ok.to_string());
                if !ok {
                    table.any_failed = true;
                }
                table.push_row(cells);
            }
        }
    }
    Ok(table)
}

/// The closed-form zero-temperature limit a screened material is expected to
/// approach, when one exists: carriers whose density survives T → 0 pin the
/// limit (negative for degenerate/metallic carriers via the zero-frequency
/// TE integral, positive for nondegenerate ones via ζ(3) − Li₃(r₀²));
/// vanishing carriers leave plain third-law behavior with no closed form.
fn closed_form_limit(config: &RunConfig, tag: SchemeTag, a: f64) -> Result<Option<f64>> {
    if tag != SchemeTag::ModifiedScreened && tag != SchemeTag::Rpa {
        return Ok(None);
    }
    let MaterialResponse::ScreenedConductor(sc) = &config.material else {
        return Ok(None);
    };
    let survives = match &sc.carriers.density {
        DensityModel::Constant(n) => *n > 0.0,
        DensityModel::Activated { .. } => false,
        DensityModel::Table(nodes) => nodes.first().is_some_and(|&(_, n)| n > 0.0),
    };
    if !survives {
        return Ok(None);
    }
    Ok(Some(match sc.carriers.statistics {
        Statistics::FermiDirac => {
            let wp = sc.carriers.omega_p_sq(1.0).sqrt();
            entropy_metal_limit(a, wp)?.value
        }
        Statistics::MaxwellBoltzmann => {
            entropy_dielectric_limit(a, sc.core.eps_static())?.value
        }
    }))
}

/// Third-law audit: S(T) on a decreasing grid, extrapolated S(a, 0), fitted
/// exponent, matching closed-form limit where one exists, and a verdict.
/// Sample rows carry `row = sample`; one `row = summary` line per scheme
/// holds the fit and verdict.
pub fn nernst_audit(config: &RunConfig) -> Result<ResultTable> {
    let mut table = ResultTable::new(vec![
        "row",
        "scheme",
        "a_nm",
        "T_K",
        "S_J_per_K_m2",
        "S_err_J_per_K_m2",
        "S0_J_per_K_m2",
        "exponent",
        "fit_residual",
        "closed_form_J_per_K_m2",
        "rel_deviation",
        "verdict",
    ]);
    table.standard_metadata(&config.source_texts, config.echo());

    let a = config.a_grid.values()[0];
    let mut t_values = config.t_grid.values();
    t_values.sort_by(|x, y| y.partial_cmp(x).unwrap()); // decreasing

    for &tag in &config.schemes {
        let scheme = config.scheme(tag)?;
        let blank = String::new();
        match entropy_zero_extrapolation(a, &scheme, &t_values, config.tol) {
            Ok(fit) => {
                for &(t, s, e) in &fit.samples {
                    table.push_row(vec![
                        "sample".into(),
                        tag.name().into(),
                        fmt_num(a * 1e9),
                        fmt_num(t),
                        fmt_num(s),
                        fmt_num(e),
                        blank.clone(),
                        blank.clone(),
                        blank.clone(),
                        blank.clone(),
                        blank.clone(),
                        blank.clone(),
                    ]);
                }
                let closed = closed_form_limit(config, tag, a)?;
                let verdict = audit_verdict(fit.s0, a);
                let (closed_cell, dev_cell) = match closed {
                    Some(c) if c != 0.0 => {
                        (fmt_num(c), fmt_num((fit.s0 - c).abs() / c.abs()))
                    }
                    Some(c) => (fmt_num(c), blank.clone()),
                    None => (blank.clone(), blank.clone()),
                };
                table.push_row(vec![
                    "summary".into(),
                    tag.name().into(),
                    fmt_num(a * 1e9),
                    blank.clone(),
                    blank.clone(),
                    blank.clone(),
                    fmt_num(fit.s0),
                    fmt_num(fit.exponent),
                    fmt_num(fit.residual),
                    closed_cell,
                    dev_cell,
                    verdict.name().into(),
                ]);
            }
            Err(e) => {
                table.any_failed = true;
                table.push_row(vec![
                    "summary".into(),
                    tag.name().into(),
                    fmt_num(a * 1e9),
                    blank.clone(),
                    blank.clone(),
                    blank.clone(),
                    blank.clone(),
                    blank.clone(),
                    format!("\"{e}\"").replace(',', ";"),
                    blank.clone(),
                    blank.clone(),
                    Verdict::Inconclusive.name().into(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Per-point differences of every non-reference scheme against the
/// reference, absolute and relative, for each requested quantity.
pub fn scheme_compare(config: &RunConfig) -> Result<ResultTable> {
    let reference = config.reference_scheme.unwrap_or(config.schemes[0]);
    let mut columns = vec![
        "a_nm".to_string(),
        "T_K".to_string(),
        "scheme".to_string(),
        "reference".to_string(),
    ];
    for q in &config.quantities {
        columns.push(q.column().to_string());
        columns.push(format!("ref_{}", q.column()));
        columns.push(format!("diff_{}", q.column()));
        columns.push(format!("rel_diff_{}", q.column()));
    }
    columns.push("converged".to_string());
    let mut table = ResultTable {
        columns,
        rows: Vec::new(),
        metadata: Vec::new(),
        any_failed: false,
    };
    table.standard_metadata(&config.source_texts, config.echo());

    for &a in &config.a_grid.values() {
        for &t in &config.t_grid.values() {
            // evaluate the reference once per point
            let ref_point = EvaluationPoint {
                separation: a,
                temperature: t,
                scheme: config.scheme(reference)?,
            };
            let mut ref_vals = Vec::new();
            let mut ref_ok = true;
            for &q in &config.quantities {
                match evaluate(&ref_point, q, config.tol) {
                    Ok((v, _)) => ref_vals.push(Some(v)),
                    Err(_) => {
                        ref_vals.push(None);
                        ref_ok = false;
                    }
                }
            }
            for &tag in &config.schemes {
                if tag == reference {
                    continue;
                }
                let point = EvaluationPoint {
                    separation: a,
                    temperature: t,
                    scheme: config.scheme(tag)?,
                };
                let mut cells = vec![
                    fmt_num(a * 1e9),
                    fmt_num(t),
                    tag.name().to_string(),
                    reference.name().to_string(),
                ];
                let mut ok = ref_ok;
                for (i, &q) in config.quantities.iter().enumerate() {
                    match (evaluate(&point, q, config.tol), ref_vals[i]) {
                        (Ok((v, _)), Some(r)) => {
                            cells.push(fmt_num(v));
                            cells.push(fmt_num(r));
                            cells.push(fmt_num(v - r));
                            if r != 0.0 {
                                cells.push(fmt_num((v - r) / r.abs()));
                            } else {
                                cells.push(String::new());
                            }
                        }
                        (Ok((v, _)), None) => {
                            cells.push(fmt_num(v));
                            cells.extend([String::new(), String::new(), String::new()]);
                            ok = false;
                        }
                        (Err(_), r) => {
                            cells.push(String::new());
                            cells.push(r.map(fmt_num).unwrap_or_default());
                            cells.extend([String::new(), String::new()]);
                            ok = false;
                        }
                    }
                }
                cells.push(ok.to_string());
                if !ok {
                    table.any_failed = true;
                }
                table.push_row(cells);
            }
        }
    }
    Ok(table)
}
