//! Asymptotically Mittag-Leffler scaling of a coefficient stream.
//!
//! A stream is aML with data `(T, θ, A)` when
//! `J_{rm} Γ(1 + rm + β) (T e^{iθ})^{-(rm+β)} → A ≠ 0`.
//! [`fit_scaling`] estimates the data from a window of coefficients and
//! [`verify_aml`] measures how well a candidate scaling holds.

use crate::error::{Error, Result};
use crate::gamma::log_gamma_class;
use crate::numeric::{cdiv, reduced_phase, C64};
use crate::par;
use crate::ring::{ClassValue, RingPresentation};
use crate::scaled::{scaled_ratio, ScaledClass};
use crate::special::log_gamma;
use crate::streams::CoeffStream;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    /// `J_{rm} Γ(1+rm+β) (Te^{iθ})^{-(rm+β)}`
    Gamma,
    /// `J_n n! n^β T^{-(n+β)} e^{-iθ(n+β)}` with `n = rm`; asymptotically equal to `Gamma`.
    Table,
}

impl FromStr for ScaleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(ScaleMode::Gamma),
            "table" => Ok(ScaleMode::Table),
            _ => Err(Error::Config(format!("unknown scale mode '{s}' (gamma|table)"))),
        }
    }
}

/// Linear functional used to turn classes into scalars for ratio estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    /// H^0 coordinate.
    Point,
    /// Integration against the fundamental class.
    Top,
    /// A single basis coordinate.
    Index(usize),
}

impl FromStr for Functional {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pt" => Ok(Functional::Point),
            "top" => Ok(Functional::Top),
            _ => s
                .strip_prefix("idx:")
                .and_then(|k| k.parse().ok())
                .map(Functional::Index)
                .ok_or_else(|| Error::Config(format!("unknown functional '{s}' (pt|top|idx:k)"))),
        }
    }
}

impl Functional {
    pub fn apply(&self, ring: &RingPresentation, c: &ClassValue) -> C64 {
        match *self {
            Functional::Point => c.h0(),
            Functional::Top => ring.integrate(c),
            Functional::Index(k) => c.0[k],
        }
    }

    fn validate(&self, ring: &RingPresentation) -> Result<()> {
        match *self {
            Functional::Index(k) if k >= ring.dim() => {
                Err(Error::Domain(format!("functional index {k} outside basis of size {}", ring.dim())))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmlScaling {
    #[serde(rename = "T")]
    pub t: f64,
    pub theta: f64,
    #[serde(rename = "A")]
    pub a: ClassValue,
    /// `‖S_m - A‖ / ‖A‖` over the fit window.
    pub residuals: Vec<f64>,
    pub method: String,
}

impl AmlScaling {
    /// True when the residuals shrink across the window.
    pub fn residuals_decreasing(&self) -> bool {
        trend_decreasing(&self.residuals)
    }
}

fn trend_decreasing(r: &[f64]) -> bool {
    if r.len() < 2 {
        return true;
    }
    let half = r.len() / 2;
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    r[r.len() - 1] < r[0] && mean(&r[half..]) < mean(&r[..half])
}

/// `log Γ(1 + rm + β)` as a class.
fn log_gamma_weight(s: &CoeffStream, m: usize) -> Result<ClassValue> {
    let e = s.exponent(m);
    log_gamma_class(&s.ring, &e.with_h0(e.h0() + 1.0))
}

/// `-(n + β)(ln T + iθ)` with the large phase `nθ` reduced exactly.
fn log_power(s: &CoeffStream, n: usize, t: f64, theta: f64) -> ClassValue {
    let lt = C64::new(t.ln(), theta);
    let mut l = s.beta.scale(-lt);
    let phase = reduced_phase(theta, n as f64);
    l.0[0] -= C64::new(n as f64 * t.ln(), phase);
    l
}

/// Scaled coefficients `S_m` for `m` in `range`.
pub fn scale_coefficients(
    s: &CoeffStream,
    t: f64,
    theta: f64,
    mode: ScaleMode,
    range: RangeInclusive<usize>,
) -> Result<Vec<ClassValue>> {
    if !(t > 0.0) || !t.is_finite() || !theta.is_finite() {
        return Err(Error::Domain(format!("scaling needs T > 0 and finite θ, got T = {t}, θ = {theta}")));
    }
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Err(Error::Domain("empty range".into()));
    }
    s.require(hi + 1)?;
    if mode == ScaleMode::Table && lo == 0 {
        return Err(Error::Domain("table normalisation is undefined at m = 0".into()));
    }
    let ring = &*s.ring;
    let out = par::map_range(lo..hi + 1, |m| -> Result<ClassValue> {
        let n = s.r as usize * m;
        let mut l = log_power(s, n, t, theta);
        match mode {
            ScaleMode::Gamma => l = &l + &log_gamma_weight(s, m)?,
            ScaleMode::Table => {
                let nf = n as f64;
                l = &l + &s.beta.scale_re(nf.ln());
                l.0[0] += log_gamma(C64::new(nf + 1.0, 0.0))?;
            }
        }
        let v = s.coeffs[m].mul(ring, &ScaledClass::exp_of(ring, &l)).to_class();
        if v.is_zero() && !s.coeffs[m].is_zero() {
            return Err(Error::Underflow { m });
        }
        Ok(v)
    });
    out.into_iter().collect()
}

/// One pass of componentwise Aitken Δ² acceleration; output has two fewer terms.
/// Where the second difference vanishes the latest value passes through.
pub fn aitken_accelerate(seq: &[ClassValue]) -> Vec<ClassValue> {
    if seq.len() < 3 {
        return Vec::new();
    }
    (0..seq.len() - 2)
        .map(|i| {
            let (x0, x1, x2) = (&seq[i], &seq[i + 1], &seq[i + 2]);
            ClassValue(
                (0..x0.dim())
                    .map(|k| {
                        let d1 = x2.0[k] - x1.0[k];
                        let d2 = x2.0[k] - 2.0 * x1.0[k] + x0.0[k];
                        let scale = x2.0[k].norm().max(x1.0[k].norm()).max(x0.0[k].norm());
                        if d2.norm() <= 1e-14 * scale || d2.norm() == 0.0 {
                            x2.0[k]
                        } else {
                            x2.0[k] - d1 * cdiv(d1, d2)
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

fn check_window(s: &CoeffStream, window: (usize, usize)) -> Result<()> {
    let (m0, m1) = window;
    if m0 == 0 || m1 <= m0 {
        return Err(Error::Domain(format!("window {m0}:{m1} must satisfy 0 < m0 < m1")));
    }
    s.require(m1 + 1)
}

/// Estimates `(T, θ, A)` from the coefficients in `window`.
///
/// `T e^{iθ}` comes from ratios `λ(J_{r(m+1)} Γ_{m+1}) / λ(J_{rm} Γ_m)` with
/// `Γ_m = Γ(1 + rm + β)` taken as a class, whose bias is `O(1/m²)`; the
/// ratios are averaged geometrically after removing that bias by a fit in `1/m²`. `A` is the Aitken-accelerated limit of
/// the scaled coefficients over the last third of the window.
pub fn fit_scaling(s: &CoeffStream, functional: Functional, window: (usize, usize)) -> Result<AmlScaling> {
    check_window(s, window)?;
    functional.validate(&s.ring)?;
    let (m0, m1) = window;
    let ring = &*s.ring;
    let values = par::map_range(m0..m1 + 1, |m| -> Result<(C64, i64)> {
        let g = ScaledClass::exp_of(ring, &log_gamma_weight(s, m)?);
        let x = s.coeffs[m].mul(ring, &g);
        Ok(x.functional(|c| functional.apply(ring, c)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    if let Some(i) = values.iter().position(|v| v.0.norm() == 0.0) {
        return Err(Error::NoLimit(format!(
            "functional {functional:?} vanishes at m = {}; choose another functional",
            m0 + i
        )));
    }
    let ratios: Vec<C64> = values.windows(2).map(|w| scaled_ratio(w[1], w[0])).collect();
    let r = s.r as f64;
    let mids: Vec<f64> = (m0..m1).map(|m| m as f64 + 0.5).collect();
    let ln_abs: Vec<f64> = ratios.iter().map(|z| z.norm().ln()).collect();
    let t = (debiased_mean(&mids, &ln_abs) / r).exp();
    let a0 = ratios[0].arg();
    let args: Vec<f64> = ratios.iter().map(|z| a0 + (z.arg() - a0 + PI).rem_euclid(2.0 * PI) - PI).collect();
    let arg_mean = debiased_mean(&mids, &args);
    let period = 2.0 * PI / r;
    let x = arg_mean / r;
    let theta = x - period * (x / period + 1e-9).floor();

    let scaled = scale_coefficients(s, t, theta, ScaleMode::Gamma, m0..=m1)?;
    let tail_len = scaled.len().div_ceil(3).max(3).min(scaled.len());
    let tail = &scaled[scaled.len() - tail_len..];
    let a = aitken_accelerate(tail).pop().unwrap_or_else(|| scaled.last().unwrap().clone());
    if a.is_zero() || !a.is_finite() {
        return Err(Error::NoLimit("scaled coefficients do not approach a nonzero class".into()));
    }
    let residuals = scaled.iter().map(|v| v.rel_distance(&a)).collect();
    Ok(AmlScaling {
        t,
        theta,
        a,
        residuals,
        method: format!("ratio:{}:geometric-mean-debiased;limit:aitken-last-third", functional_name(functional)),
    })
}

/// Intercept `a` of the least-squares fit `y ≈ a + b/m²`: the window mean with the
/// leading `O(1/m²)` bias of the ratio estimates removed.
fn debiased_mean(m: &[f64], y: &[f64]) -> f64 {
    let n = m.len() as f64;
    let mean_y = y.iter().sum::<f64>() / n;
    if m.len() < 3 {
        return mean_y;
    }
    let x: Vec<f64> = m.iter().map(|v| 1.0 / (v * v)).collect();
    let mean_x = x.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mean_x).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mean_x) * (b - mean_y)).sum();
    if sxx == 0.0 {
        return mean_y;
    }
    mean_y - sxy / sxx * mean_x
}

fn functional_name(f: Functional) -> String {
    match f {
        Functional::Point => "pt".into(),
        Functional::Top => "top".into(),
        Functional::Index(k) => format!("idx:{k}"),
    }
}

/// Same asymptotics on the `k`-th branch: `θ + 2πk/r`, `A e^{-2πi(k/r)β}`.
pub fn branch_shift(sc: &AmlScaling, k: i64, ring: &RingPresentation, beta: &ClassValue, r: u32) -> AmlScaling {
    let f = 2.0 * PI * k as f64 / r as f64;
    let mult = ring.exp(&beta.scale(C64::new(0.0, -f)));
    AmlScaling {
        t: sc.t,
        theta: sc.theta + f,
        a: ring.product(&mult, &sc.a),
        residuals: sc.residuals.clone(),
        method: format!("{};branch-shift:{k}", sc.method),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmlReport {
    pub m: Vec<usize>,
    /// `‖P (S_m - A)‖ / ‖P A‖` with `P = (Te^{iθ})^β`; independent of the branch of θ.
    pub residuals: Vec<f64>,
    pub decreasing: bool,
    /// Least-squares `c` in `residual ≈ c / m`.
    pub rate: f64,
}

impl AmlReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn last_residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&f64::NAN)
    }
}

/// Residuals of a candidate scaling over `window`.
pub fn verify_aml(s: &CoeffStream, sc: &AmlScaling, window: (usize, usize)) -> Result<AmlReport> {
    check_window(s, window)?;
    s.ring.check(&sc.a)?;
    if sc.a.is_zero() {
        return Err(Error::NoLimit("limit class A is zero".into()));
    }
    let scaled = scale_coefficients(s, sc.t, sc.theta, ScaleMode::Gamma, window.0..=window.1)?;
    let ring = &*s.ring;
    let p = ring.exp(&s.beta.scale(C64::new(sc.t.ln(), sc.theta)));
    let pa = ring.product(&p, &sc.a);
    let residuals: Vec<f64> =
        scaled.iter().map(|v| ring.product(&p, &(v - &sc.a)).norm() / pa.norm()).collect();
    let m: Vec<usize> = (window.0..=window.1).collect();
    let (num, den) = m
        .iter()
        .zip(&residuals)
        .fold((0.0, 0.0), |(n, d), (&mi, &ri)| (n + ri / mi as f64, d + 1.0 / (mi as f64 * mi as f64)));
    Ok(AmlReport { decreasing: trend_decreasing(&residuals), rate: num / den, m, residuals })
}

/// Best complex multiple `c` of `target` approximating `v`, and `‖v - c·target‖ / ‖v‖`.
pub fn collinearity(v: &ClassValue, target: &ClassValue) -> (C64, f64) {
    let num: C64 = target.0.iter().zip(&v.0).map(|(t, x)| t.conj() * x).sum();
    let den: f64 = target.0.iter().map(|t| t.norm_sqr()).sum();
    let c = num / den;
    (c, (v - &target.scale(c)).norm() / v.norm())
}
