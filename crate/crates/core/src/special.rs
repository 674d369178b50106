//! Scalar special functions: log-gamma, polygamma and integer zeta values.
//!
//! Both log-gamma and polygamma shift the argument upward with the functional
//! recurrence until the asymptotic (Stirling / Bernoulli) series converges to
//! full double precision, then sum the series.

use crate::error::{Error, Result};
use crate::numeric::C64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `B_{2k}` for `k = 1..=15`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

const MAX_POLYGAMMA_ORDER: u32 = 16;

fn check_pole(z: C64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Domain(format!("gamma pole at z = {}", z.re)));
    }
    if !z.is_finite() {
        return Err(Error::Domain("non-finite argument".into()));
    }
    Ok(())
}

/// Principal branch of `log Γ(z)`: analytic off the non-positive real axis,
/// real for real `z > 0`, and satisfying `logΓ(z+1) = logΓ(z) + log z`.
pub fn log_gamma(z: C64) -> Result<C64> {
    check_pole(z)?;
    const SHIFT_TO: f64 = 15.0;
    let mut w = z;
    let mut acc = C64::new(0.0, 0.0);
    if w.re < SHIFT_TO {
        let k = (SHIFT_TO - w.re).ceil() as usize;
        for j in 0..k {
            acc += (z + j as f64).ln();
        }
        w = z + k as f64;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let m = 2.0 * (k + 1) as f64;
        series += p * (b / (m * (m - 1.0)));
        p *= inv2;
    }
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - acc)
}

/// `1/Γ(z)`, entire; exactly zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return C64::new(0.0, 0.0);
    }
    (-log_gamma(z).expect("poles handled above")).exp()
}

/// `ψ^(n)(z) = d^{n+1}/dz^{n+1} log Γ(z)` for `0 <= n <= 16`.
pub fn polygamma(n: u32, z: C64) -> Result<C64> {
    if n > MAX_POLYGAMMA_ORDER {
        return Err(Error::Domain(format!("polygamma order {n} exceeds {MAX_POLYGAMMA_ORDER}")));
    }
    check_pole(z)?;
    let target = 20.0 + n as f64;
    let nf = n as f64;
    let n_fact: f64 = (1..=n).map(|k| k as f64).product();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut w = z;
    let mut acc = C64::new(0.0, 0.0);
    while w.re < target {
        acc -= w.powi(-(n as i32 + 1)) * (sign * n_fact);
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let asym = if n == 0 {
        let mut s = w.ln() - inv * 0.5;
        let mut p = inv2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            s -= p * (b / (2.0 * (k + 1) as f64));
            p *= inv2;
        }
        s
    } else {
        let nm1_fact = n_fact / nf;
        let inv_n = inv.powi(n as i32);
        let mut s = inv_n * nm1_fact + inv_n * inv * (n_fact / 2.0);
        // (2k+n-1)!/(2k)!, updated incrementally
        let mut ratio = nm1_fact;
        let mut p = inv_n * inv2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            let two_k = 2.0 * (k + 1) as f64;
            ratio *= (two_k + nf - 2.0) * (two_k + nf - 1.0) / ((two_k - 1.0) * two_k);
            s += p * (b * ratio);
            p *= inv2;
        }
        s * (-sign)
    };
    Ok(acc + asym)
}

/// `ζ(k)` for integers `k >= 2`, by Euler–Maclaurin summation.
pub fn zeta_int(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("zeta({k}) is not a convergent integer value")));
    }
    const N: usize = 12;
    let kf = k as f64;
    let mut s: f64 = (1..N).rev().map(|j| (j as f64).powf(-kf)).sum();
    let nf = N as f64;
    s += nf.powf(1.0 - kf) / (kf - 1.0) + 0.5 * nf.powf(-kf);
    // B_{2i}/(2i)! * k(k+1)...(k+2i-2) * N^{-k-2i+1}
    let mut rising = kf;
    let mut fact = 2.0;
    let mut p = nf.powf(-kf - 1.0);
    for (i, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        s += b / fact * rising * p;
        let two_i = 2.0 * (i + 1) as f64;
        rising *= (kf + two_i - 1.0) * (kf + two_i);
        fact *= (two_i + 1.0) * (two_i + 2.0);
        p /= nf * nf;
    }
    Ok(s)
}

/// `ψ^(0)(z), …, ψ^(n_max)(z)` at one point.
#[derive(Clone, Debug)]
pub struct PolygammaTable {
    pub z: C64,
    pub values: Vec<C64>,
}

impl PolygammaTable {
    pub fn new(z: C64, n_max: u32) -> Result<Self> {
        let values = (0..=n_max).map(|n| polygamma(n, z)).collect::<Result<_>>()?;
        Ok(PolygammaTable { z, values })
    }
}
