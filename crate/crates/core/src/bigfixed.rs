//! Fixed-point big-integer arithmetic on truncated polynomials `Q[x]/x^L`,
//! used where double precision loses everything to cancellation.

use crate::numeric::{ldexp, C64};
use crate::ring::ClassValue;
use crate::scaled::ScaledClass;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// `Σ c_i x^i` with every `c_i` stored as an integer multiple of `2^-frac_bits`.
#[derive(Clone, Debug)]
pub struct FixedPoly {
    pub coeffs: Vec<BigInt>,
    pub frac_bits: u64,
}

impl FixedPoly {
    pub fn one(len: usize, frac_bits: u64) -> Self {
        let mut coeffs = vec![BigInt::zero(); len];
        coeffs[0] = BigInt::from(1) << frac_bits;
        FixedPoly { coeffs, frac_bits }
    }

    /// Multiply by `(a x + b)` exactly.
    pub fn mul_linear(&mut self, a: i64, b: i64) {
        for i in (0..self.coeffs.len()).rev() {
            let mut v = &self.coeffs[i] * b;
            if i > 0 {
                v += &self.coeffs[i - 1] * a;
            }
            self.coeffs[i] = v;
        }
    }

    pub fn mul_int(&mut self, k: &BigInt) {
        for c in self.coeffs.iter_mut() {
            *c *= k;
        }
    }

    /// Divide by `(x + k)`, rounding each coefficient to the nearest unit in the last place.
    pub fn div_linear(&mut self, k: i64) {
        let k = BigInt::from(k);
        let mut prev = BigInt::zero();
        for c in self.coeffs.iter_mut() {
            let num = &*c - &prev;
            let q = round_div(&num, &k);
            *c = q.clone();
            prev = q;
        }
    }

    pub fn add_scaled(&mut self, other: &FixedPoly, k: &BigInt) {
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * k;
        }
    }

    /// Converts to a double-precision class with a binary exponent.
    pub fn to_scaled(&self) -> ScaledClass {
        let parts: Vec<(f64, i64)> = self.coeffs.iter().map(|c| to_f64_exp(c, self.frac_bits)).collect();
        let e = parts.iter().filter(|p| p.0 != 0.0).map(|p| p.1).max().unwrap_or(0);
        let mantissa = ClassValue(parts.iter().map(|&(m, pe)| C64::new(ldexp(m, pe - e), 0.0)).collect());
        ScaledClass::normalized(mantissa, e)
    }
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if (r.abs() << 1u32) >= d.abs() {
        q + 1
    } else {
        q
    }
}

/// `c * 2^-frac_bits` as `(m, e)` with `m` carrying the top 63 bits.
fn to_f64_exp(c: &BigInt, frac_bits: u64) -> (f64, i64) {
    if c.is_zero() {
        return (0.0, 0);
    }
    let bits = c.bits();
    let shift = bits.saturating_sub(63);
    let top = (c >> shift).to_i64().expect("63-bit value fits");
    (top as f64, shift as i64 - frac_bits as i64)
}
