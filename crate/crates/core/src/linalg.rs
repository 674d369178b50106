//! Small dense complex eigenproblems.

use crate::numeric::{cdiv, C64};

pub type Matrix = Vec<Vec<C64>>;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Characteristic polynomial coefficients, lowest degree first, monic, by Faddeev–LeVerrier.
pub fn char_poly(a: &Matrix) -> Vec<C64> {
    let n = a.len();
    let mut c = vec![zero(); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut mk = vec![vec![zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = zero();
                for l in 0..n {
                    s += a[i][l] * mk[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += c[n - k + 1];
        }
        mk = next;
        let mut tr = zero();
        for i in 0..n {
            for l in 0..n {
                tr += a[i][l] * mk[l][i];
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = zero();
    let mut dp = zero();
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// Roots of a monic polynomial (lowest degree first) by Durand–Kerner, then Newton polishing.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    // Fujiwara bound on the root moduli
    let bound = c[..n]
        .iter()
        .enumerate()
        .map(|(k, z)| 2.0 * z.norm().powf(1.0 / (n - k) as f64))
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(bound * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..5000 {
        let mut change: f64 = 0.0;
        for i in 0..n {
            let (p, _) = horner(c, z[i]);
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = cdiv(p, den);
            z[i] -= step;
            change = change.max(step.norm());
        }
        if change <= 1e-15 * bound {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = cdiv(p, dp);
            if step.norm() > 1e-8 * zi.norm().max(1.0) {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting; `None` if singular.
pub fn solve(a: &Matrix, b: &[C64]) -> Option<Vec<C64>> {
    let n = a.len();
    let mut m: Matrix = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))?;
        if m[piv][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, piv);
        x.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
            let v = x[col];
            x[row] -= f * v;
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for k in col + 1..n {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

/// Eigenvector for an approximate eigenvalue by inverse iteration, and `‖Av - λv‖ / ‖v‖`.
pub fn eigenvector(a: &Matrix, lambda: C64) -> (Vec<C64>, f64) {
    let n = a.len();
    let scale = a.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let shift = lambda + C64::new(1e-11 * scale, 1e-11 * scale);
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= shift;
    }
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0, 0.1 * i as f64)).collect();
    for _ in 0..3 {
        let Some(w) = solve(&shifted, &v) else { break };
        let norm = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
        v = w.iter().map(|z| z / norm).collect();
    }
    let mut res: f64 = 0.0;
    for i in 0..n {
        let mut s = -lambda * v[i];
        for j in 0..n {
            s += a[i][j] * v[j];
        }
        res = res.max(s.norm());
    }
    let vn = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (v, res / vn)
}
