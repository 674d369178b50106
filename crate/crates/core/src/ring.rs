//! Truncated graded commutative C-algebras given by an explicit multiplication table.
//!
//! Basis element 0 is always the unit and spans H^0; every other basis element
//! has positive degree, so the span of elements 1.. is the nilpotent ideal.
//! Functions of a class (`exp`, `log`, inverse, real powers) are evaluated as
//! finite power series in the nilpotent part.

use crate::error::{Error, Result};
use crate::numeric::C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::ops::{Add, Mul, Neg, Sub};

/// A cohomology class: complex coordinates in the basis of a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassValue(pub Vec<C64>);

impl ClassValue {
    pub fn zeros(n: usize) -> Self {
        ClassValue(vec![C64::new(0.0, 0.0); n])
    }

    pub fn unit(n: usize) -> Self {
        Self::scalar(n, C64::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, z: C64) -> Self {
        let mut v = Self::zeros(n);
        v.0[0] = z;
        v
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_real(xs: &[f64]) -> Self {
        ClassValue(xs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn h0(&self) -> C64 {
        self.0[0]
    }

    pub fn nilpotent(&self) -> ClassValue {
        let mut v = self.clone();
        v.0[0] = C64::new(0.0, 0.0);
        v
    }

    pub fn with_h0(&self, z: C64) -> ClassValue {
        let mut v = self.clone();
        v.0[0] = z;
        v
    }

    /// Max-abs coordinate norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    pub fn scale(&self, z: C64) -> ClassValue {
        ClassValue(self.0.iter().map(|&c| c * z).collect())
    }

    pub fn scale_re(&self, x: f64) -> ClassValue {
        ClassValue(self.0.iter().map(|&c| c * x).collect())
    }

    /// `‖self - other‖ / ‖other‖`.
    pub fn rel_distance(&self, other: &ClassValue) -> f64 {
        (self - other).norm() / other.norm()
    }
}

impl Add for &ClassValue {
    type Output = ClassValue;
    fn add(self, rhs: &ClassValue) -> ClassValue {
        assert_eq!(self.dim(), rhs.dim(), "class dimension mismatch");
        ClassValue(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ClassValue {
    type Output = ClassValue;
    fn sub(self, rhs: &ClassValue) -> ClassValue {
        assert_eq!(self.dim(), rhs.dim(), "class dimension mismatch");
        ClassValue(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ClassValue {
    type Output = ClassValue;
    fn neg(self) -> ClassValue {
        ClassValue(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<C64> for &ClassValue {
    type Output = ClassValue;
    fn mul(self, rhs: C64) -> ClassValue {
        self.scale(rhs)
    }
}

impl Serialize for ClassValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(ClassValue(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect()))
    }
}

/// Where a ring came from; used to pick specialised algorithms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    Projective { n: u32 },
    Product { left: Box<RingKind>, right: Box<RingKind> },
    Hypersurface { ambient_n: u32, degree: u32 },
    X3,
    Custom { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    /// Real cohomological degree (twice the complex degree).
    pub degree: u32,
}

/// A ring together with its Fano data and top-degree integration functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "RingData", try_from = "RingData")]
pub struct RingPresentation {
    pub name: String,
    pub kind: RingKind,
    pub basis: Vec<BasisElement>,
    pub dim_c: u32,
    pub fano_index: u32,
    pub c1: ClassValue,
    /// Weights `w` with `∫ a = Σ w_k a_k`.
    pub integral: ClassValue,
    table: Vec<Vec<(usize, C64)>>,
    series_len: usize,
}

/// Flat serialisable form of a ring: products as sparse `(i, j, k, re, im)` triples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingData {
    pub name: String,
    pub kind: RingKind,
    pub basis: Vec<BasisElement>,
    pub dim_c: u32,
    pub fano_index: u32,
    pub c1: ClassValue,
    pub integral: ClassValue,
    pub products: Vec<(usize, usize, usize, f64, f64)>,
}

impl From<RingPresentation> for RingData {
    fn from(r: RingPresentation) -> Self {
        let n = r.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in i..n {
                for &(k, c) in &r.table[i * n + j] {
                    products.push((i, j, k, c.re, c.im));
                }
            }
        }
        RingData {
            name: r.name,
            kind: r.kind,
            basis: r.basis,
            dim_c: r.dim_c,
            fano_index: r.fano_index,
            c1: r.c1,
            integral: r.integral,
            products,
        }
    }
}

impl TryFrom<RingData> for RingPresentation {
    type Error = Error;
    fn try_from(d: RingData) -> Result<Self> {
        RingPresentation::new(
            d.name,
            d.kind,
            d.basis,
            d.dim_c,
            d.fano_index,
            d.c1,
            d.integral,
            &d.products,
        )
    }
}

impl RingPresentation {
    /// Builds and validates a ring. Each unordered pair `(i, j)` may be listed
    /// once; products with the unit are filled in automatically.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        kind: RingKind,
        basis: Vec<BasisElement>,
        dim_c: u32,
        fano_index: u32,
        c1: ClassValue,
        integral: ClassValue,
        products: &[(usize, usize, usize, f64, f64)],
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::InvalidRing("empty basis".into()));
        }
        if basis[0].degree != 0 {
            return Err(Error::InvalidRing("basis element 0 must be the unit in degree 0".into()));
        }
        if basis[1..].iter().any(|b| b.degree == 0) {
            return Err(Error::InvalidRing("H^0 must be one-dimensional".into()));
        }
        if basis.iter().any(|b| b.degree > 2 * dim_c) {
            return Err(Error::InvalidRing("basis degree exceeds 2 dim_c".into()));
        }
        for v in [&c1, &integral] {
            if v.dim() != n {
                return Err(Error::Dimension { expected: n, got: v.dim() });
            }
        }
        let mut dense = vec![C64::new(0.0, 0.0); n * n * n];
        for j in 0..n {
            dense[j * n + j] = C64::new(1.0, 0.0);
            dense[(j * n) * n + j] = C64::new(1.0, 0.0);
        }
        for &(i, j, k, re, im) in products {
            if i >= n || j >= n || k >= n {
                return Err(Error::InvalidRing(format!("product index ({i},{j},{k}) out of range")));
            }
            if i == 0 || j == 0 {
                let expect = if k == i.max(j) { 1.0 } else { 0.0 };
                if (re - expect).abs() > 1e-12 || im.abs() > 1e-12 {
                    return Err(Error::InvalidRing("unit must act as identity".into()));
                }
                continue;
            }
            let c = C64::new(re, im);
            dense[(i * n + j) * n + k] = c;
            dense[(j * n + i) * n + k] = c;
        }
        let at = |i: usize, j: usize, k: usize| dense[(i * n + j) * n + k];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = at(i, j, k);
                    if c.norm() > 0.0 && basis[i].degree + basis[j].degree != basis[k].degree {
                        return Err(Error::InvalidRing(format!(
                            "product {}*{} has a component on {} of the wrong degree",
                            basis[i].name, basis[j].name, basis[k].name
                        )));
                    }
                }
            }
        }
        let scale = dense.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for l in 0..n {
                        let mut lhs = C64::new(0.0, 0.0);
                        let mut rhs = C64::new(0.0, 0.0);
                        for k in 0..n {
                            lhs += at(a, b, k) * at(k, c, l);
                            rhs += at(a, k, l) * at(b, c, k);
                        }
                        if (lhs - rhs).norm() > 1e-10 * scale * scale {
                            return Err(Error::InvalidRing(format!(
                                "multiplication is not associative on ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        let table = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter_map(|k| {
                        let c = dense[ij * n + k];
                        (c.norm() > 0.0).then_some((k, c))
                    })
                    .collect()
            })
            .collect();
        let min_pos = basis[1..].iter().map(|b| b.degree).min().unwrap_or(1);
        let max_deg = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        Ok(RingPresentation {
            name: name.into(),
            kind,
            basis,
            dim_c,
            fano_index,
            c1,
            integral,
            table,
            series_len: (max_deg / min_pos) as usize + 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Smallest `K` with `n^K = 0` for every nilpotent `n`.
    pub fn nilpotency(&self) -> usize {
        self.series_len
    }

    pub fn zero(&self) -> ClassValue {
        ClassValue::zeros(self.dim())
    }

    pub fn one(&self) -> ClassValue {
        ClassValue::unit(self.dim())
    }

    pub fn scalar(&self, z: C64) -> ClassValue {
        ClassValue::scalar(self.dim(), z)
    }

    pub fn basis_class(&self, k: usize) -> ClassValue {
        ClassValue::basis(self.dim(), k)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn check(&self, a: &ClassValue) -> Result<()> {
        if a.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: a.dim() });
        }
        Ok(())
    }

    /// Structure constants: `e_i * e_j = Σ c_k e_k`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, a: &ClassValue, b: &ClassValue) -> Result<ClassValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.product(a, b))
    }

    /// Unchecked product; panics on dimension mismatch.
    pub fn product(&self, a: &ClassValue, b: &ClassValue) -> ClassValue {
        let n = self.dim();
        assert!(a.dim() == n && b.dim() == n, "class dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &ai) in a.0.iter().enumerate() {
            if ai.re == 0.0 && ai.im == 0.0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                if bj.re == 0.0 && bj.im == 0.0 {
                    continue;
                }
                let ab = ai * bj;
                for &(k, c) in &self.table[i * n + j] {
                    out[k] += ab * c;
                }
            }
        }
        ClassValue(out)
    }

    pub fn pow(&self, a: &ClassValue, k: u32) -> ClassValue {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.product(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.product(&base, &base);
            }
        }
        acc
    }

    /// `Σ_{k<K} c_k u^k` for a nilpotent `u`, by Horner's rule.
    fn nil_series(&self, u: &ClassValue, coeff: impl Fn(usize) -> C64) -> ClassValue {
        let k_max = self.series_len;
        let mut acc = self.scalar(coeff(k_max - 1));
        for k in (0..k_max - 1).rev() {
            acc = self.product(&acc, u);
            acc.0[0] += coeff(k);
        }
        acc
    }

    pub fn inverse(&self, a: &ClassValue) -> Result<ClassValue> {
        self.check(a)?;
        let a0 = a.h0();
        if a0.norm() == 0.0 {
            return Err(Error::NotInvertible("class"));
        }
        let u = a.nilpotent().scale(-a0.inv());
        Ok(self.nil_series(&u, |_| C64::new(1.0, 0.0)).scale(a0.inv()))
    }

    pub fn exp(&self, a: &ClassValue) -> ClassValue {
        let n = a.nilpotent();
        let mut fact = vec![1.0; self.series_len];
        for k in 1..self.series_len {
            fact[k] = fact[k - 1] * k as f64;
        }
        self.nil_series(&n, |k| C64::new(1.0 / fact[k], 0.0)).scale(a.h0().exp())
    }

    /// Logarithm with `log a0` taken on sheet `sheet` (0 is the principal branch).
    pub fn log(&self, a: &ClassValue, sheet: i32) -> Result<ClassValue> {
        self.check(a)?;
        let a0 = a.h0();
        if a0.norm() == 0.0 {
            return Err(Error::NotInvertible("logarithm argument"));
        }
        let u = a.nilpotent().scale(a0.inv());
        let mut s = self.nil_series(&u, |k| {
            if k == 0 {
                C64::new(0.0, 0.0)
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                C64::new(sign / k as f64, 0.0)
            }
        });
        s.0[0] = a0.ln() + C64::new(0.0, 2.0 * std::f64::consts::PI * sheet as f64);
        Ok(s)
    }

    /// `t^α = exp(α (ln|t| + i arg))` for `t = |t| e^{i arg}`.
    pub fn power_t(&self, alpha: &ClassValue, t_abs: f64, arg: f64) -> Result<ClassValue> {
        self.check(alpha)?;
        if !(t_abs >= 0.0) || !t_abs.is_finite() {
            return Err(Error::Domain(format!("|t| = {t_abs} must be finite and non-negative")));
        }
        if t_abs == 0.0 {
            if !alpha.nilpotent().is_zero() {
                return Err(Error::Domain("0^α with nontrivial nilpotent exponent".into()));
            }
            let a0 = alpha.h0();
            return if a0.re == 0.0 && a0.im == 0.0 {
                Ok(self.one())
            } else if a0.re > 0.0 {
                Ok(self.zero())
            } else {
                Err(Error::Domain("0^α with Re α0 <= 0".into()))
            };
        }
        let l = C64::new(t_abs.ln(), arg);
        Ok(self.exp(&alpha.scale(l)))
    }

    /// Matrix of multiplication by `a`: `m[k][j]` is the `e_k` coordinate of `a e_j`.
    pub fn mult_matrix(&self, a: &ClassValue) -> Vec<Vec<C64>> {
        let n = self.dim();
        let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            let col = self.product(a, &self.basis_class(j));
            for k in 0..n {
                m[k][j] = col.0[k];
            }
        }
        m
    }

    /// Operator norm of multiplication by `a` for the max-abs coordinate norm.
    pub fn op_norm(&self, a: &ClassValue) -> f64 {
        self.mult_matrix(a)
            .iter()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn integrate(&self, a: &ClassValue) -> C64 {
        a.0.iter().zip(&self.integral.0).map(|(x, w)| x * w).sum()
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("ring serialises");
        hex::encode(Sha256::digest(&json))
    }

    /// Tensor product ring; basis ordered lexicographically `(i, j) -> i * dim(right) + j`.
    pub fn tensor(&self, other: &RingPresentation) -> RingPresentation {
        let (n1, n2) = (self.dim(), other.dim());
        let mut basis = Vec::with_capacity(n1 * n2);
        for a in &self.basis {
            for b in &other.basis {
                let name = match (a.degree, b.degree) {
                    (0, _) => b.name.clone(),
                    (_, 0) => a.name.clone(),
                    _ => format!("{}*{}", a.name, b.name),
                };
                basis.push(BasisElement { name, degree: a.degree + b.degree });
            }
        }
        let mut products = Vec::new();
        for i1 in 0..n1 {
            for j1 in 0..n1 {
                for i2 in 0..n2 {
                    for j2 in 0..n2 {
                        let (i, j) = (i1 * n2 + i2, j1 * n2 + j2);
                        if i > j || i == 0 {
                            continue;
                        }
                        for &(k1, c1) in self.structure(i1, j1) {
                            for &(k2, c2) in other.structure(i2, j2) {
                                let c = c1 * c2;
                                products.push((i, j, k1 * n2 + k2, c.re, c.im));
                            }
                        }
                    }
                }
            }
        }
        let c1 = &self.tensor_classes(&self.c1, &other.one(), other)
            + &self.tensor_classes(&self.one(), &other.c1, other);
        let integral = self.tensor_classes(&self.integral, &other.integral, other);
        RingPresentation::new(
            format!("{}x{}", self.name, other.name),
            RingKind::Product { left: Box::new(self.kind.clone()), right: Box::new(other.kind.clone()) },
            basis,
            self.dim_c + other.dim_c,
            crate::numeric::gcd(self.fano_index, other.fano_index),
            c1,
            integral,
            &products,
        )
        .expect("tensor product of valid rings is valid")
    }

    /// `a ⊗ b` in the tensor ring `self ⊗ other`.
    pub fn tensor_classes(&self, a: &ClassValue, b: &ClassValue, other: &RingPresentation) -> ClassValue {
        let n2 = other.dim();
        let mut out = ClassValue::zeros(self.dim() * n2);
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out.0[i * n2 + j] = x * y;
            }
        }
        out
    }
}
