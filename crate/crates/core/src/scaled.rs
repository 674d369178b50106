//! Classes with a shared binary exponent, for coefficients far outside the f64 range.

use crate::numeric::{frexp, ldexp, C64};
use crate::ring::{ClassValue, RingPresentation};
use std::f64::consts::LN_2;

/// `mantissa * 2^exp2`, normalised so the largest coordinate modulus lies in `[1/2, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledClass {
    pub mantissa: ClassValue,
    pub exp2: i64,
}

impl ScaledClass {
    pub fn zero(n: usize) -> Self {
        ScaledClass { mantissa: ClassValue::zeros(n), exp2: 0 }
    }

    pub fn from_class(c: ClassValue) -> Self {
        Self::normalized(c, 0)
    }

    pub fn normalized(mut mantissa: ClassValue, exp2: i64) -> Self {
        let max = mantissa.norm();
        if max == 0.0 || !max.is_finite() {
            return ScaledClass { mantissa, exp2: if max == 0.0 { 0 } else { exp2 } };
        }
        let (_, e) = frexp(max);
        for z in mantissa.0.iter_mut() {
            *z = C64::new(ldexp(z.re, -e), ldexp(z.im, -e));
        }
        ScaledClass { mantissa, exp2: exp2 + e }
    }

    pub fn dim(&self) -> usize {
        self.mantissa.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Denormalised value; coordinates outside the f64 range saturate to 0 or infinity.
    pub fn to_class(&self) -> ClassValue {
        ClassValue(
            self.mantissa
                .0
                .iter()
                .map(|z| C64::new(ldexp(z.re, self.exp2), ldexp(z.im, self.exp2)))
                .collect(),
        )
    }

    /// Natural log of the max-abs coordinate norm.
    pub fn ln_norm(&self) -> f64 {
        self.mantissa.norm().ln() + self.exp2 as f64 * LN_2
    }

    pub fn mul(&self, ring: &RingPresentation, other: &ScaledClass) -> ScaledClass {
        Self::normalized(ring.product(&self.mantissa, &other.mantissa), self.exp2 + other.exp2)
    }

    pub fn mul_class(&self, ring: &RingPresentation, c: &ClassValue) -> ScaledClass {
        Self::normalized(ring.product(&self.mantissa, c), self.exp2)
    }

    pub fn scale(&self, z: C64) -> ScaledClass {
        Self::normalized(self.mantissa.scale(z), self.exp2)
    }

    pub fn add(&self, other: &ScaledClass) -> ScaledClass {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp2.max(other.exp2);
        let a = self.mantissa.scale_re(ldexp(1.0, self.exp2 - e));
        let b = other.mantissa.scale_re(ldexp(1.0, other.exp2 - e));
        Self::normalized(&a + &b, e)
    }

    /// `exp(l)` for a log-form class whose H^0 part may be far outside the f64 exponent range.
    pub fn exp_of(ring: &RingPresentation, l: &ClassValue) -> ScaledClass {
        let l0 = l.h0();
        let k = (l0.re / LN_2).floor();
        let rem = l0.re - k * LN_2;
        let reduced = l.with_h0(C64::new(rem, l0.im));
        Self::normalized(ring.exp(&reduced), k as i64)
    }

    /// A linear functional applied to the class, returned as `(mantissa, exp2)`.
    pub fn functional(&self, f: impl Fn(&ClassValue) -> C64) -> (C64, i64) {
        (f(&self.mantissa), self.exp2)
    }

    /// `(tensor of mantissas, summed exponent)` in `x ⊗ y`.
    pub fn tensor(&self, x: &RingPresentation, other: &ScaledClass, y: &RingPresentation) -> ScaledClass {
        Self::normalized(x.tensor_classes(&self.mantissa, &other.mantissa, y), self.exp2 + other.exp2)
    }
}

/// Ratio of two scaled scalars.
pub fn scaled_ratio(num: (C64, i64), den: (C64, i64)) -> C64 {
    let q = num.0 / den.0;
    q * ldexp(1.0, num.1 - den.1)
}
