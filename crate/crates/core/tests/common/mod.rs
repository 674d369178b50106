//! Independent reference implementations and frozen reference values shared by the
//! integration tests. Nothing here calls into the library's arithmetic.

#![allow(dead_code)]

use amlj::C64;
use std::io::Write;

/// Writes a line straight to the process stderr, bypassing libtest capture.
pub fn report(line: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense truncated polynomials `Σ a_k x^k mod x^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trunc(pub Vec<C64>);

impl Trunc {
    pub fn new(n: usize) -> Self {
        Trunc(vec![c(0.0, 0.0); n])
    }
    pub fn constant(n: usize, z: C64) -> Self {
        let mut t = Trunc::new(n);
        t.0[0] = z;
        t
    }
    /// `a + b x`.
    pub fn linear(n: usize, a: f64, b: f64) -> Self {
        let mut t = Trunc::constant(n, c(a, 0.0));
        if n > 1 {
            t.0[1] = c(b, 0.0);
        }
        t
    }
    pub fn mul(&self, o: &Trunc) -> Trunc {
        let n = self.0.len();
        let mut out = Trunc::new(n);
        for i in 0..n {
            for j in 0..n - i {
                out.0[i + j] += self.0[i] * o.0[j];
            }
        }
        out
    }
    pub fn add(&self, o: &Trunc) -> Trunc {
        Trunc(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn scale(&self, z: C64) -> Trunc {
        Trunc(self.0.iter().map(|a| a * z).collect())
    }
    /// Power series reciprocal by the recurrence `b_k = -(Σ_{j≥1} a_j b_{k-j}) / a_0`.
    pub fn recip(&self) -> Trunc {
        let n = self.0.len();
        let mut b = Trunc::new(n);
        let a0 = self.0[0];
        // conj/|a|/|a| avoids overflowing |a|² for large constant terms
        b.0[0] = a0.conj() / a0.norm() / a0.norm();
        for k in 1..n {
            let mut s = c(0.0, 0.0);
            for j in 1..=k {
                s += self.0[j] * b.0[k - j];
            }
            b.0[k] = -s * b.0[0];
        }
        b
    }
    pub fn powi(&self, e: u32) -> Trunc {
        let mut out = Trunc::constant(self.0.len(), c(1.0, 0.0));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
    /// `exp` of a series with zero constant term, by the Taylor sum.
    pub fn exp_nilpotent(&self) -> Trunc {
        let n = self.0.len();
        let mut out = Trunc::constant(n, c(1.0, 0.0));
        let mut term = out.clone();
        for k in 1..n {
            term = term.mul(self).scale(c(1.0 / k as f64, 0.0));
            out = out.add(&term);
        }
        out
    }
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// `ζ(s)` by a long direct sum plus the Euler–Maclaurin tail `N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12`.
pub fn zeta_direct(s: f64) -> f64 {
    let n = 100_000u64;
    let mut sum = 0.0;
    for k in (1..n).rev() {
        sum += (k as f64).powf(-s);
    }
    let nf = n as f64;
    sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn max_rel(a: &[C64], b: &[C64]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// `ln Γ(z)` to 20 digits (mpmath), principal branch.
pub const LOG_GAMMA_REF: &[((f64, f64), (f64, f64))] = &[
    ((0.5, 0.0), (0.57236494292470008707, 0.0)),
    ((1.0, 1.0), (-0.65092319930185633889, -0.30164032046753319789)),
    ((-2.5, 0.7), (-1.4941873089113575064, -8.6464756828033773445)),
    ((7.0, -40.0), (-37.906980061822659569, -117.2405442802813644)),
    ((1000.0, 1000.0), (5466.2225216299023761, 7039.33429191119332)),
    ((0.01, -0.02), (3.7944367207828294344, 1.1183633070517473198)),
    ((30.5, 0.25), (72.952429625965184555, 0.85031380989547505266)),
];

/// `ψ^{(n)}(z)` to 20 digits (mpmath).
pub const POLYGAMMA_REF: &[(u32, (f64, f64), (f64, f64))] = &[
    (0, (0.3, 0.4), (-1.2800917888512820846, 2.030105778096179631)),
    (0, (2.0, -3.0), (1.2079807107101508808, -1.1041296805875762097)),
    (0, (12.5, 0.0), (2.4851956512749120482, 0.0)),
    (0, (1000.0, 50.0), (6.9085048832533033812, 0.049983341669623862016)),
    (1, (0.3, 0.4), (-0.15348546930516515185, -4.2543920114638536223)),
    (1, (2.0, -3.0), (0.13555542700569092129, 0.26700999245834564114)),
    (1, (12.5, 0.0), (0.083285224601578370444, 0.0)),
    (2, (0.3, 0.4), (14.225567691933640508, 6.3631015648720357257)),
    (2, (2.0, -3.0), (0.052676189080935860358, -0.073036229334405806925)),
    (5, (0.3, 0.4), (5773.1649801287221555, 5041.4861964123728162)),
    (5, (2.0, -3.0), (0.039864175902363098725, -0.045010414502956550886)),
    (5, (12.5, 0.0), (0.000095622715971076443425, 0.0)),
    (9, (0.3, 0.4), (-367331128.83573271948, -56203001.87227502329)),
    (9, (2.0, -3.0), (-0.85790360183303988571, -0.19438382039927268805)),
    (9, (12.5, 0.0), (7.6160558839144274692e-6, 0.0)),
    (16, (0.3, 0.4), (2738084416003580314.5, -153645591127804094.13)),
    (16, (2.0, -3.0), (3533.4461938733285482, 5694.5152225660378182)),
    (16, (12.5, 0.0), (-6.5521064948793111497e-6, 0.0)),
    (16, (1000.0, 50.0), (-9.0044221073377543498e-37, 9.2663375065224360476e-37)),
];

/// X3 coefficients `J_n` in the basis `1, x2, x1, x1x2, x1^2, x1^2x2, x1^3, x1^3x2`,
/// from an independent 25-digit summation over the Mori cone.
pub const X3_J_REF: &[(usize, [f64; 8])] = &[
    (1, [0.0, 2.0, -6.0, 1.0, -3.0, -7.0, 21.0, 14.0]),
    (2, [1.0, -9.5, 25.5, -6.375, 28.125, 9.9375, -56.8125, -43.5]),
    (
        30,
        [
            5.018135101856492107567278e-16,
            -3280124.316984701357761869,
            9840372.950954104073276676,
            2512623.153398482616353523,
            -7537869.460195447848976074,
            12576769.22260675509360697,
            -37730307.66782026528138783,
            -40354817.39237467983820709,
        ],
    ),
    (
        100,
        [
            2.144425955290491365495249e-94,
            -1.281479359230393707204795e-20,
            3.844438077691181121614384e-20,
            2.450156074528229276594366e-20,
            -7.350468223584687829783097e-20,
            2.933802075612287357526146e-20,
            -8.801406226836862072578438e-20,
            -2.040482940529017885659906e-19,
        ],
    ),
    (
        300,
        [
            2.079864235153188050876725e-414,
            -7.436704366041203765155879e-192,
            2.231011309812361129546764e-191,
            2.226510855029670922654616e-191,
            -6.679532565089012767963847e-191,
            -2.735779981824525847597686e-192,
            8.207339945473577542793057e-192,
            -1.268702984860638088485203e-190,
        ],
    ),
];

/// Cubic surface `J_m` in the basis `1, x, x^2`, from 400-digit arithmetic on `e^{-6t} I(t)`.
pub const CUBIC_J_REF: &[(usize, [f64; 3])] = &[
    (2, [27.0, 6.75, -40.5]),
    (10, [94675.689375, 1843.8707089179421769, -393337.88024021362265]),
    (50, [0.18059778365687772175, -0.26629572148114667334, -0.54810142943264001023]),
    (150, [5.3703258324376645291e-68, -1.3712091706779725663e-67, -4.5967112593133137191e-68]),
    (300, [1.0802596564506660274e-221, -3.5016296802424727488e-221, 1.2310332223696541443e-221]),
];

/// Printed rows of the published X3 table, in units of `10^-3`.
pub const X3_TABLE_ROWS: &[(usize, &str)] = &[
    (14, "0 -0.248743 0.746229 0.187542+0.781449j -0.562627-2.34435j 2.18704-0.589182j -6.56111+1.76755j -3.97697-4.29992j"),
    (15, "0 -0.249072 0.747216 0.184877+0.782483j -0.554631-2.34745j 2.19172-0.580808j -6.57515+1.74242j -3.95630-4.31122j"),
    (16, "0 -0.249367 0.748102 0.182541+0.783411j -0.547422-2.35023j 2.19584-0.573469j -6.58753+1.72041j -3.93822-4.32113j"),
    (17, "0 -0.249635 0.748904 0.180477+0.784251j -0.541431-2.35275j 2.19952-0.566985j -6.59856+1.70096j -3.92230-4.32991j"),
    (30, "0 -0.251845 0.755534 0.166211+0.791193j -0.498632-2.37358j 2.22748-0.522166j -6.68243+1.56650j -3.81519-4.39490j"),
];

pub const X3_TABLE_A: &str =
    "0 -0.252094 0.756281 0.145512+0.791976j -0.436537-2.37593j 2.23873-0.457141j -6.71619+1.37142j -3.63163-4.42768j";

pub fn parse_row(s: &str) -> Vec<C64> {
    s.split_whitespace().map(|t| amlj::io::parse_complex_sig(t).expect("table cell")).collect()
}
