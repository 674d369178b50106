//! Floating-point helpers shared by the kernels.

use num_complex::Complex64;
use std::f64::consts::PI;

pub type C64 = Complex64;

pub const TWO_PI_HI: f64 = 2.0 * PI;
// 2*pi - TWO_PI_HI
pub const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Splits `x` into `(m, e)` with `x = m * 2^e` and `|m|` in `[1/2, 1)`.
pub fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        let (m, e) = frexp(x * f64::from_bits(0x4350_0000_0000_0000)); // 2^54
        return (m, e - 54);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, exp - 1022)
}

/// `x * 2^e` without intermediate overflow for large `|e|`.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= pow2(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= pow2(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    if e < -1022 {
        return x * pow2(-1022) * pow2(e + 1022);
    }
    x * pow2(e)
}

fn pow2(e: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `(a * n) mod 2pi` in `(-pi, pi]`, carrying the product error so large `n` keep full accuracy.
pub fn reduced_phase(a: f64, n: f64) -> f64 {
    let p = a * n;
    let err = a.mul_add(n, -p);
    let k = (p / TWO_PI_HI).round();
    let r = (-k).mul_add(TWO_PI_HI, p) - k * TWO_PI_LO + err;
    if r > PI {
        r - TWO_PI_HI
    } else if r <= -PI {
        r + TWO_PI_HI
    } else {
        r
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: C64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

pub fn gcd(a: u32, b: u32) -> u32 {
    num_integer::gcd(a, b)
}

/// Complex division by Smith's method; avoids the underflow of `|b|^2` for tiny `b`.
pub fn cdiv(a: C64, b: C64) -> C64 {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        C64::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        C64::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}
