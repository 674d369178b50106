//! Gauss–Legendre rules and composite integration of class-valued functions.

use crate::numeric::C64;
use crate::ring::ClassValue;
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// A fixed Gauss–Legendre rule applied panel by panel.
#[derive(Clone, Debug)]
pub struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Rule { x, w }
    }

    /// `Σ` over the rule on `[a, b]`, accumulated into `acc`.
    pub fn panel(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> ClassValue, acc: &mut ClassValue) {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (xi, wi) in self.x.iter().zip(&self.w) {
            let v = f(c + h * xi);
            for (s, z) in acc.0.iter_mut().zip(&v.0) {
                *s += z * (wi * h);
            }
        }
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, panels: usize, f: &mut impl FnMut(f64) -> ClassValue, acc: &mut ClassValue) {
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            self.panel(a + p as f64 * h, a + (p + 1) as f64 * h, f, acc);
        }
    }

    /// Panels `[a + hσ^{k+1}, a + hσ^k]` graded geometrically towards `a`, `k < levels`.
    pub fn graded(&self, a: f64, h: f64, sigma: f64, levels: usize, f: &mut impl FnMut(f64) -> ClassValue, acc: &mut ClassValue) {
        let mut hi = h;
        for _ in 0..levels {
            let lo = hi * sigma;
            self.panel(a + lo, a + hi, f, acc);
            hi = lo;
        }
    }
}

pub fn scalar_integral(rule: &Rule, a: f64, b: f64, panels: usize, f: impl Fn(f64) -> C64) -> C64 {
    let mut acc = ClassValue::zeros(1);
    rule.composite(a, b, panels, &mut |x| ClassValue(vec![f(x)]), &mut acc);
    acc.0[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-15);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_exponential() {
        let r = Rule::new(12);
        let v = scalar_integral(&r, 0.0, 3.0, 4, |x| C64::new(x.exp(), 0.0));
        assert!((v.re - (3f64.exp() - 1.0)).abs() < 1e-13);
    }
}
