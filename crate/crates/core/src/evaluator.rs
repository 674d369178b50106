//! Continuous-side checks: the series `α(t)` along rays, scalar Mittag-Leffler
//! functions, and Riemann–Liouville integrals with class-valued order.

use crate::aml::AmlScaling;
use crate::error::{Error, Result};
use crate::gamma::reciprocal_gamma;
use crate::numeric::{reduced_phase, CompensatedSum, C64};
use crate::par;
use crate::quadrature::Rule;
use crate::ring::{ClassValue, RingPresentation};
use crate::scaled::ScaledClass;
use crate::special::{log_gamma, rgamma};
use crate::streams::{sum_scaled, CoeffStream};
use serde::Serialize;
use std::f64::consts::PI;

const MARGIN_NATS: f64 = 40.0;

/// Crude `T` from the two last coefficients: `‖J_M‖/‖J_{M-1}‖ ≈ T^r / (rM)^r`.
pub fn crude_t(s: &CoeffStream) -> Result<f64> {
    let m = s.max_m();
    if m < 2 {
        return Err(Error::Truncation { needed: 3, have: s.len() });
    }
    let r = s.r as f64;
    let ln_ratio = s.coeffs[m].ln_norm() - s.coeffs[m - 1].ln_norm();
    let n = r * m as f64;
    Ok(((ln_ratio + r * n.ln()) / r).exp())
}

/// `e^{-T|t|} Σ_{m≤M} J_{rm} t^{rm+β}` at `t = t_abs e^{iφ}`.
pub fn eval_series(s: &CoeffStream, t_abs: f64, phi: f64, m_max: usize, damping: Option<f64>) -> Result<ScaledClass> {
    if !(t_abs > 0.0) || !t_abs.is_finite() {
        return Err(Error::Domain(format!("|t| = {t_abs} must be positive")));
    }
    s.require(m_max + 1)?;
    let t = match damping {
        Some(t) => t,
        None => crude_t(s)?,
    };
    let ring = &*s.ring;
    let lt = C64::new(t_abs.ln(), phi);
    let base = s.beta.scale(lt);
    let terms: Vec<ScaledClass> = par::map_range(0..m_max + 1, |m| {
        let n = (s.r as usize * m) as f64;
        let mut l = base.clone();
        l.0[0] += C64::new(n * t_abs.ln() - t * t_abs, reduced_phase(phi, n));
        s.coeffs[m].mul(ring, &ScaledClass::exp_of(ring, &l))
    });
    let logs: Vec<f64> = terms.iter().map(|x| if x.is_zero() { f64::NEG_INFINITY } else { x.ln_norm() }).collect();
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if logs[m_max] > peak - MARGIN_NATS {
        return Err(Error::TruncationInsufficient { required: required_m(s, t, t_abs, peak) });
    }
    Ok(sum_scaled(&terms, ring.dim()))
}

/// Smallest `M` at which `n ln(T|t|) - ln Γ(1+n) - T|t|` falls 40 nats below the peak.
fn required_m(s: &CoeffStream, t: f64, t_abs: f64, peak: f64) -> usize {
    let x = t * t_abs;
    let mut n = x.max(1.0);
    loop {
        let v = n * x.ln() - log_gamma(C64::new(n + 1.0, 0.0)).map(|z| z.re).unwrap_or(0.0) - x;
        if v < peak.min(0.0) - MARGIN_NATS - 5.0 || n > 1e9 {
            return (n / s.r as f64).ceil() as usize + 1;
        }
        n *= 1.1;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuousRow {
    pub phi: f64,
    pub t: f64,
    pub deviation: Option<f64>,
    pub decay_ratio: Option<f64>,
}

/// Compares `α(t)` along rays with the predicted `(1/r) e^{i(θ+φ)β} e^{T|t|} A` on
/// rays with `θ + φ ∈ (2π/r)Z`, and records the decay ratio on all other rays.
pub fn continuous_check(s: &CoeffStream, sc: &AmlScaling, phis: &[f64], t_grid: &[f64]) -> Result<Vec<ContinuousRow>> {
    s.ring.check(&sc.a)?;
    let points: Vec<(f64, f64)> = phis.iter().flat_map(|&p| t_grid.iter().map(move |&t| (p, t))).collect();
    let ring = &*s.ring;
    let a_norm = sc.a.norm();
    let period = 2.0 * PI / s.r as f64;
    par::map_slice(&points, |&(phi, t)| -> Result<ContinuousRow> {
        let v = eval_series(s, t, phi, s.max_m(), Some(sc.t))?.to_class();
        let x = sc.theta + phi;
        let k = (x / period).round();
        if (x - k * period).abs() <= 1e-9 {
            let rot = ring.exp(&s.beta.scale(C64::new(0.0, -x)));
            let w = ring.product(&rot, &v).scale_re(s.r as f64);
            Ok(ContinuousRow { phi, t, deviation: Some(w.rel_distance(&sc.a)), decay_ratio: None })
        } else {
            Ok(ContinuousRow { phi, t, deviation: None, decay_ratio: Some(v.norm() / a_norm) })
        }
    })
    .into_iter()
    .collect()
}

/// Default `t` grid `{10, 20, 40, 80}`, keeping `T t ≤ 0.8 r M`.
pub fn default_t_grid(s: &CoeffStream, t: f64) -> Vec<f64> {
    let cap = 0.8 * (s.r as usize * s.max_m()) as f64 / t;
    [10.0, 20.0, 40.0, 80.0].into_iter().filter(|&x| x <= cap).collect()
}

/// `E_{α,β}(z) = Σ_n z^n / Γ(αn + β)` by direct summation of log-space terms.
pub fn ml_eval(alpha: f64, beta0: C64, z: C64, tol: f64) -> Result<C64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("α = {alpha} must be positive")));
    }
    if z.norm() == 0.0 {
        return Ok(rgamma(beta0));
    }
    let lz = z.ln();
    let mut sum = CompensatedSum::new();
    let mut peak: f64 = 0.0;
    let mut small = 0;
    for n in 0..1_000_000usize {
        let b = beta0 + alpha * n as f64;
        let term = if b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round() {
            C64::new(0.0, 0.0)
        } else {
            (lz * n as f64 - log_gamma(b)?).exp()
        };
        sum.add(term);
        peak = peak.max(term.norm());
        let past_peak = (n as f64) * alpha > z.norm().powf(1.0 / alpha) + 1.0;
        if past_peak && term.norm() <= tol * sum.value().norm().max(tol * peak) {
            small += 1;
            if small >= 3 {
                return Ok(sum.value());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Domain(format!("tolerance {tol} not reached within 10^6 terms")))
}

/// Panel layout for [`rl_integral`].
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub nodes: usize,
    /// Uniform panels on the regular half; the singular half is subdivided to match.
    pub panels: usize,
    /// Geometric ratio and depth of the panels graded towards each endpoint.
    pub sigma: f64,
    pub levels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { nodes: 16, panels: 4, sigma: 0.2, levels: 24 }
    }
}

impl Quadrature {
    /// Enough panels to resolve `e^{iωx}` on `[0, t]`.
    pub fn for_frequency(omega: f64, t: f64) -> Self {
        let q = Quadrature::default();
        Quadrature { panels: q.panels.max((omega.abs() * t / 2.0).ceil() as usize), ..q }
    }
}

/// `I_α⟨f⟩(t) = (1/Γ(α)) ∫_0^t f(x) (t-x)^{α-1} dx` for a class `α` with `Re α0 > 0`.
///
/// On `t - x ≤ t/2` the substitution `t - x = t u^{1/a}`, `a = Re α0`, absorbs
/// `(t-x)^{a-1}`; the remaining factor `(t-x)^{α-a}` is integrated on panels graded
/// towards `u = 0`. The half next to `x = 0` is graded towards 0 as well, so
/// integrands with a power singularity there (such as nested integrals) stay accurate.
pub fn rl_integral(
    ring: &RingPresentation,
    f: &(dyn Fn(f64) -> ClassValue + Sync),
    alpha: &ClassValue,
    t: f64,
    q: &Quadrature,
) -> Result<ClassValue> {
    ring.check(alpha)?;
    let a = alpha.h0().re;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("Re α0 = {a} must be positive")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} must be finite and non-negative")));
    }
    if t == 0.0 {
        return Ok(ring.zero());
    }
    let rule = Rule::new(q.nodes);
    let mut acc = ring.zero();
    let one = ring.one();
    let am1 = &alpha.clone() - &one;
    let kernel = |y: f64| ring.exp(&am1.scale_re(y.ln()));
    let half = 0.5 * t;
    // regular half: x in [0, t/2]
    let h0 = half / q.panels as f64;
    let mut reg = |x: f64| ring.product(&f(x), &kernel(t - x));
    rule.graded(0.0, h0, q.sigma, q.levels, &mut reg, &mut acc);
    rule.composite(h0, half, q.panels - 1, &mut reg, &mut acc);
    // singular half in u: y = t u^{1/a}, y^{a-1} dy = t^a/a du
    let excess = alpha.with_h0(alpha.h0() - a);
    let jac = t.powf(a) / a;
    let mut sing = |u: f64| {
        let y = t * u.powf(1.0 / a);
        ring.product(&f(t - y), &ring.exp(&excess.scale_re(y.ln()))).scale_re(jac)
    };
    let u_max = 0.5f64.powf(a);
    let mut hi = u_max;
    for _ in 0..q.levels {
        let lo = hi * q.sigma;
        let (y_lo, y_hi) = (t * lo.powf(1.0 / a), t * hi.powf(1.0 / a));
        let sub = ((y_hi - y_lo) / h0).ceil().max(1.0) as usize;
        rule.composite(lo, hi, sub, &mut sing, &mut acc);
        hi = lo;
    }
    Ok(ring.product(&reciprocal_gamma(ring, alpha)?, &acc))
}

/// Residuals of the Riemann–Liouville identities on a grid of `t`.
#[derive(Clone, Debug, Serialize)]
pub struct RlReport {
    pub t_grid: Vec<f64>,
    /// `‖I_α I_β⟨1⟩ - I_{α+β}⟨1⟩‖ / ‖I_{α+β}⟨1⟩‖` at each `t`.
    pub semigroup: Vec<f64>,
    /// For `Re λ > 0`: `‖I_α⟨e^{λx}⟩ - λ^{-α}e^{λt} + t^{α-1}/(λΓ(α))‖ / ‖t^{α-1}‖`.
    pub expansion: Option<Vec<f64>>,
    pub expansion_decreasing: Option<bool>,
    /// For `Re λ ≤ 0`: `‖I_α⟨e^{λx}⟩(t)‖`.
    pub growth: Option<Vec<f64>>,
    /// Log-log slopes of `growth` stay below `Re α0 + ‖α - α0‖ + 1`.
    pub polynomially_bounded: Option<bool>,
}

/// Remainder of `I_α⟨e^{λx}⟩(t) ≈ λ^{-α}e^{λt} - Σ_{l=1}^{L} t^{α-l} / (λ^l Γ(α-l+1))`
/// for `Re λ > 0` and `1 ≤ L ≤ 3`. Uses the exact form
/// `I_α⟨e^{λx}⟩(t) = λ^{-α}e^{λt} - (1/Γ(α)) ∫_0^∞ e^{-λs} (t+s)^{α-1} ds`, which
/// avoids cancelling against the exponentially large leading term.
pub fn rl_expansion_remainder(
    ring: &RingPresentation,
    alpha: &ClassValue,
    lambda: C64,
    t: f64,
    terms: usize,
) -> Result<ClassValue> {
    if lambda.re <= 0.0 {
        return Err(Error::Domain("expansion remainder needs Re λ > 0".into()));
    }
    if !(1..=3).contains(&terms) {
        return Err(Error::Unsupported(format!("{terms} expansion terms; 1 to 3 are implemented")));
    }
    let one = ring.one();
    let am1 = alpha - &one;
    let rule = Rule::new(16);
    let s_max = 60.0 / lambda.re;
    let panels = ((s_max * lambda.norm()) / 2.0).ceil().max(8.0) as usize;
    let mut tail = ring.zero();
    rule.composite(
        0.0,
        s_max,
        panels,
        &mut |s| ring.exp(&am1.scale_re((t + s).ln())).scale((-lambda * s).exp()),
        &mut tail,
    );
    let tail = ring.product(&reciprocal_gamma(ring, alpha)?, &tail);
    let mut series = ring.zero();
    let mut order = alpha.clone();
    for l in 1..=terms {
        order = &order - &one;
        let power = ring.exp(&order.scale_re(t.ln())).scale(lambda.powi(-(l as i32)));
        series = &series + &ring.product(&power, &reciprocal_gamma(ring, &(&order + &one))?);
    }
    Ok(&series - &tail)
}

pub fn rl_property_check(
    ring: &RingPresentation,
    alpha: &ClassValue,
    beta: &ClassValue,
    lambda: C64,
    t_grid: &[f64],
) -> Result<RlReport> {
    ring.check(alpha)?;
    ring.check(beta)?;
    if alpha.h0().re <= 0.0 || beta.h0().re <= 0.0 {
        return Err(Error::Domain("Re α0 and Re β0 must be positive".into()));
    }
    let q = Quadrature::default();
    let sum = alpha + beta;
    let semigroup = par::map_slice(t_grid, |&t| -> Result<f64> {
        let one = |_: f64| ring.one();
        let inner = |x: f64| rl_integral(ring, &one, beta, x, &q).expect("validated order");
        let lhs = rl_integral(ring, &inner, alpha, t, &q)?;
        let rhs = rl_integral(ring, &one, &sum, t, &q)?;
        Ok(lhs.rel_distance(&rhs))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut report = RlReport {
        t_grid: t_grid.to_vec(),
        semigroup,
        expansion: None,
        expansion_decreasing: None,
        growth: None,
        polynomially_bounded: None,
    };
    let am1 = alpha - &ring.one();
    if lambda.re > 0.0 {
        let ratios = t_grid
            .iter()
            .map(|&t| {
                let rem = rl_expansion_remainder(ring, alpha, lambda, t, 1)?;
                Ok(rem.norm() / ring.exp(&am1.scale_re(t.ln())).norm())
            })
            .collect::<Result<Vec<f64>>>()?;
        report.expansion_decreasing = Some(ratios.windows(2).all(|w| w[1] < w[0]));
        report.expansion = Some(ratios);
    } else {
        let growth = par::map_slice(t_grid, |&t| -> Result<f64> {
            let f = |x: f64| ring.scalar((lambda * x).exp());
            let q = Quadrature::for_frequency(lambda.norm(), t);
            Ok(rl_integral(ring, &f, alpha, t, &q)?.norm())
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        let bound = alpha.h0().re + ring.op_norm(&alpha.nilpotent()) + 1.0;
        let bounded = t_grid
            .windows(2)
            .zip(growth.windows(2))
            .all(|(t, g)| (g[1] / g[0]).ln() / (t[1] / t[0]).ln() <= bound);
        report.polynomially_bounded = Some(bounded);
        report.growth = Some(growth);
    }
    Ok(report)
}
