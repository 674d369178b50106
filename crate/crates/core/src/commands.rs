//! Library entry points behind the command-line subcommands. Each returns a
//! serialisable value; rendering to JSON or CSV is left to the caller.

use crate::aml::{fit_scaling, scale_coefficients, verify_aml, AmlReport, AmlScaling, Functional, ScaleMode};
use crate::error::{Error, Result};
use crate::evaluator::{continuous_check, default_t_grid, rl_property_check, ContinuousRow, RlReport};
use crate::io::{fmt_complex_sig, fmt_num, parse_complex_sig, read_stream, write_stream};
use crate::manifold::{ManifoldKind, ManifoldSpec};
use crate::numeric::C64;
use crate::gamma::x3_target_class;
use crate::ring::{ClassValue, RingKind};
use crate::spectra::{x3_spectrum, SpectrumReport};
use crate::streams::CoeffStream;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;

/// Generates the stream of `spec` up to `m_max` and writes it to `out`.
pub fn cmd_gen(spec: &ManifoldSpec, m_max: usize, out: &Path) -> Result<CoeffStream> {
    if m_max < 1 {
        return Err(Error::Config("M must be at least 1".into()));
    }
    let s = spec.kind.stream(m_max)?;
    write_stream(&s, out)?;
    Ok(s)
}

/// Window `[M/2, M]` unless given.
pub fn default_window(s: &CoeffStream, window: Option<(usize, usize)>) -> (usize, usize) {
    window.unwrap_or((s.max_m() / 2, s.max_m()))
}

pub fn cmd_fit(cache: &Path, window: Option<(usize, usize)>, functional: Functional) -> Result<AmlScaling> {
    let s = read_stream(cache)?;
    fit_scaling(&s, functional, default_window(&s, window))
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledRows {
    pub t: f64,
    pub theta: f64,
    pub mode: String,
    pub basis: Vec<String>,
    pub rows: Vec<(usize, ClassValue)>,
}

pub fn cmd_scale(cache: &Path, t: f64, theta: f64, mode: ScaleMode, window: Option<(usize, usize)>) -> Result<ScaledRows> {
    let s = read_stream(cache)?;
    let (m0, m1) = default_window(&s, window);
    let vals = scale_coefficients(&s, t, theta, mode, m0..=m1)?;
    Ok(ScaledRows {
        t,
        theta,
        mode: format!("{mode:?}").to_lowercase(),
        basis: s.ring.basis.iter().map(|b| b.name.clone()).collect(),
        rows: (m0..=m1).zip(vals).collect(),
    })
}

/// Rows of the X3 table: `(m, values × 10^3)` in the basis order
/// `1, x2, x1, x1x2, x1^2, x1^2x2, x1^3, x1^3x2`.
#[derive(Clone, Debug, Serialize)]
pub struct X3Table {
    pub t: f64,
    pub theta: f64,
    pub rows: Vec<(usize, Vec<C64>)>,
}

pub const X3_TABLE_COLUMNS: [&str; 8] = ["1", "x2", "x1", "x1x2", "x1^2", "x1^2x2", "x1^3", "x1^3x2"];

impl X3Table {
    /// Machine variant: real and imaginary parts with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m");
        for c in X3_TABLE_COLUMNS {
            out.push_str(&format!(",{c}.re,{c}.im"));
        }
        out.push('\n');
        for (m, v) in &self.rows {
            out.push_str(&m.to_string());
            for z in v {
                out.push_str(&format!(",{},{}", fmt_num(z.re), fmt_num(z.im)));
            }
            out.push('\n');
        }
        out
    }

    /// Presentation variant: one `a+bj` cell per component, 6 significant digits.
    pub fn to_presentation_csv(&self) -> String {
        let mut out = format!("m,{}\n", X3_TABLE_COLUMNS.join(","));
        for (m, v) in &self.rows {
            let cells: Vec<String> = v.iter().map(|z| fmt_complex_sig(*z, 6)).collect();
            out.push_str(&format!("{m},{}\n", cells.join(",")));
        }
        out
    }

    pub fn parse_presentation_csv(text: &str) -> Result<Vec<(usize, Vec<C64>)>> {
        text.lines()
            .skip(1)
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let mut cells = l.split(',');
                let m = cells
                    .next()
                    .and_then(|c| c.trim().parse().ok())
                    .ok_or_else(|| Error::Config(format!("bad table row {l:?}")))?;
                let v = cells.map(parse_complex_sig).collect::<Result<Vec<_>>>()?;
                if v.len() != 8 {
                    return Err(Error::Config(format!("table row {m} has {} cells", v.len())));
                }
                Ok((m, v))
            })
            .collect()
    }
}

/// Table-mode scaled coefficients of an X3 stream with `T` from the spectrum and `θ = π`.
pub fn cmd_table_x3(cache: &Path, rows: &[usize]) -> Result<X3Table> {
    let s = read_stream(cache)?;
    x3_table(&s, rows)
}

pub fn x3_table(s: &CoeffStream, rows: &[usize]) -> Result<X3Table> {
    if s.ring.kind != RingKind::X3 {
        return Err(Error::Unsupported(format!("table-x3 needs an X3 stream, got {}", s.ring.name)));
    }
    let t = x3_spectrum()?.spectral_radius;
    let mut out = Vec::with_capacity(rows.len());
    for &m in rows {
        let v = scale_coefficients(s, t, PI, ScaleMode::Table, m..=m)?;
        out.push((m, v[0].0.iter().map(|z| z * 1e3).collect()));
    }
    Ok(X3Table { t, theta: PI, rows: out })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectraOutput {
    pub manifold: String,
    #[serde(rename = "T")]
    pub t: f64,
    pub spectrum: Option<SpectrumReport>,
}

pub fn cmd_spectra(spec: &ManifoldSpec) -> Result<SpectraOutput> {
    let spectrum = match &spec.kind {
        ManifoldKind::X3 => Some(x3_spectrum()?),
        k => k.quantum_matrix().map(|m| SpectrumReport::from_matrix(&m)),
    };
    Ok(SpectraOutput { manifold: spec.name.clone(), t: spec.kind.predicted_t()?, spectrum })
}

pub fn cmd_continuous(
    cache: &Path,
    scaling: &AmlScaling,
    phis: &[f64],
    t_grid: Option<&[f64]>,
) -> Result<Vec<ContinuousRow>> {
    let s = read_stream(cache)?;
    let grid = match t_grid {
        Some(g) => g.to_vec(),
        None => default_t_grid(&s, scaling.t),
    };
    continuous_check(&s, scaling, phis, &grid)
}

pub fn continuous_csv(rows: &[ContinuousRow]) -> String {
    let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
    let mut out = String::from("phi,t,deviation,decay_ratio\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", fmt_num(r.phi), fmt_num(r.t), opt(r.deviation), opt(r.decay_ratio)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaClassOutput {
    pub manifold: String,
    pub basis: Vec<String>,
    pub gamma_hat: ClassValue,
    pub target: Option<ClassValue>,
}

pub fn cmd_gamma_class(spec: &ManifoldSpec) -> Result<GammaClassOutput> {
    let ring = spec.ring()?;
    let target = if spec.kind == ManifoldKind::X3 { Some(x3_target_class(&ring)?) } else { None };
    Ok(GammaClassOutput {
        manifold: spec.name.clone(),
        basis: ring.basis.iter().map(|b| b.name.clone()).collect(),
        gamma_hat: spec.kind.gamma_class()?,
        target,
    })
}

#[derive(Clone, Debug)]
pub struct RlParams {
    pub spec: ManifoldSpec,
    pub alpha: ClassValue,
    pub beta: ClassValue,
    pub lambda: C64,
    pub t_grid: Vec<f64>,
}

/// A single coordinate is read as a scalar class.
fn lift(ring: &crate::ring::RingPresentation, c: &ClassValue) -> Result<ClassValue> {
    if c.dim() == 1 {
        return Ok(ring.scalar(c.0[0]));
    }
    ring.check(c)?;
    Ok(c.clone())
}

pub fn cmd_rl_check(p: &RlParams) -> Result<RlReport> {
    let ring = p.spec.ring()?;
    rl_property_check(&ring, &lift(&ring, &p.alpha)?, &lift(&ring, &p.beta)?, p.lambda, &p.t_grid)
}

#[derive(Clone, Debug, Serialize)]
pub struct FullReport {
    pub generator: String,
    pub ring: String,
    pub max_m: usize,
    pub scaling: AmlScaling,
    pub verification: AmlReport,
    pub predicted_t: Option<f64>,
    pub t_error: Option<f64>,
}

/// Fit, verify, and compare with the predicted `T`. Fails with a quality error
/// when the verification residuals do not decrease.
pub fn cmd_report(cache: &Path, window: Option<(usize, usize)>, functional: Functional) -> Result<FullReport> {
    let s = read_stream(cache)?;
    let w = default_window(&s, window);
    let scaling = fit_scaling(&s, functional, w)?;
    let verification = verify_aml(&s, &scaling, w)?;
    let predicted_t = predicted_for(&s).ok();
    let report = FullReport {
        generator: s.provenance.generator.clone(),
        ring: s.ring.name.clone(),
        max_m: s.max_m(),
        t_error: predicted_t.map(|p| (scaling.t - p).abs()),
        scaling,
        verification,
        predicted_t,
    };
    if !report.verification.decreasing {
        return Err(Error::Quality(format!(
            "aML residuals do not decrease over [{}, {}]: {}",
            w.0,
            w.1,
            serde_json::to_string(&report)?
        )));
    }
    Ok(report)
}

fn predicted_for(s: &CoeffStream) -> Result<f64> {
    fn kind_of(k: &RingKind) -> Result<ManifoldKind> {
        Ok(match k {
            RingKind::Projective { n } => ManifoldKind::Projective(*n),
            RingKind::X3 => ManifoldKind::X3,
            RingKind::Hypersurface { ambient_n, degree } => {
                ManifoldKind::Hypersurface { ambient: *ambient_n, degree: *degree }
            }
            RingKind::Product { left, right } => {
                ManifoldKind::Product(Box::new(kind_of(left)?), Box::new(kind_of(right)?))
            }
            RingKind::Custom { name } => return Err(Error::Unsupported(name.clone())),
        })
    }
    kind_of(&s.ring.kind)?.predicted_t()
}
