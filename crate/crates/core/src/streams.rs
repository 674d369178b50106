//! Coefficient streams `J_{rm}` of J-functions `J(t) = Σ_m J_{rm} t^{rm+β}`.

use crate::bigfixed::FixedPoly;
use crate::builtin::{projective, restrict_class, restrict_hypersurface, x3_index};
use crate::error::{Error, Result};
use crate::numeric::{gcd, ldexp, CompensatedSum, C64};
use crate::par;
use crate::ring::{ClassValue, RingKind, RingPresentation};
use crate::scaled::ScaledClass;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(generator: &str, params: &[(&str, String)]) -> Self {
        Provenance {
            generator: generator.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoeffStream {
    pub ring: Arc<RingPresentation>,
    /// Step between nonzero degrees; `coeffs[m]` is the coefficient of `t^{rm+β}`.
    pub r: u32,
    pub beta: ClassValue,
    pub coeffs: Vec<ScaledClass>,
    pub provenance: Provenance,
}

/// `dim_c/2 + c1`, the exponent shift of a Fano J-function.
pub fn standard_beta(ring: &RingPresentation) -> ClassValue {
    &ring.scalar(C64::new(ring.dim_c as f64 / 2.0, 0.0)) + &ring.c1
}

impl CoeffStream {
    pub fn new(
        ring: Arc<RingPresentation>,
        r: u32,
        beta: ClassValue,
        coeffs: Vec<ScaledClass>,
        provenance: Provenance,
    ) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("r must be positive".into()));
        }
        ring.check(&beta)?;
        for c in &coeffs {
            ring.check(&c.mantissa)?;
        }
        Ok(CoeffStream { ring, r, beta, coeffs, provenance })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest available `m`.
    pub fn max_m(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn require(&self, len: usize) -> Result<()> {
        if self.coeffs.len() < len {
            return Err(Error::Truncation { needed: len, have: self.coeffs.len() });
        }
        Ok(())
    }

    pub fn coeff(&self, m: usize) -> Result<&ScaledClass> {
        self.require(m + 1)?;
        Ok(&self.coeffs[m])
    }

    pub fn truncated(&self, m_max: usize) -> Result<CoeffStream> {
        self.require(m_max + 1)?;
        let mut s = self.clone();
        s.coeffs.truncate(m_max + 1);
        Ok(s)
    }

    /// `rm + β` as a class.
    pub fn exponent(&self, m: usize) -> ClassValue {
        self.beta.with_h0(self.beta.h0() + (self.r as usize * m) as f64)
    }
}

/// Compensated sum of scaled classes in the frame of the largest exponent.
pub fn sum_scaled(terms: &[ScaledClass], dim: usize) -> ScaledClass {
    let e = terms.iter().filter(|t| !t.is_zero()).map(|t| t.exp2).max();
    let Some(e) = e else {
        return ScaledClass::zero(dim);
    };
    let mut acc = vec![CompensatedSum::new(); dim];
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let s = ldexp(1.0, t.exp2 - e);
        for (a, z) in acc.iter_mut().zip(&t.mantissa.0) {
            a.add(z * s);
        }
    }
    ScaledClass::normalized(ClassValue(acc.iter().map(|a| a.value()).collect()), e)
}

/// `P^N`: `J_{(N+1)m} = Π_{k=1}^m (h+k)^{-(N+1)}`, `r = N+1`.
pub fn projective_stream(n: u32, m_max: usize) -> CoeffStream {
    let ring = Arc::new(projective(n));
    let h = ring.basis_class(1);
    let mut coeffs = Vec::with_capacity(m_max + 1);
    coeffs.push(ScaledClass::from_class(ring.one()));
    for m in 1..=m_max {
        let lin = h.with_h0(C64::new(m as f64, 0.0));
        let inv = ring.inverse(&lin).expect("h + m is invertible");
        let factor = ring.pow(&inv, n + 1);
        let next = coeffs[m - 1].mul_class(&ring, &factor);
        coeffs.push(next);
    }
    let beta = standard_beta(&ring);
    CoeffStream {
        ring,
        r: n + 1,
        beta,
        coeffs,
        provenance: Provenance::new("projective", &[("n", n.to_string()), ("m_max", m_max.to_string())]),
    }
}

/// `J_{X×Y} = J_X ⊗ J_Y`, regrouped by total degree; `r = gcd(r_X, r_Y)`.
pub fn product_stream(sx: &CoeffStream, sy: &CoeffStream, m_max: usize) -> Result<CoeffStream> {
    let (rx, ry) = (sx.r as usize, sy.r as usize);
    let r = gcd(sx.r, sy.r) as usize;
    sx.require(r * m_max / rx + 1)?;
    sy.require(r * m_max / ry + 1)?;
    let ring = Arc::new(sx.ring.tensor(&sy.ring));
    let dim = ring.dim();
    let coeffs = par::map_range(0..m_max + 1, |m| {
        let n = r * m;
        let terms: Vec<ScaledClass> = (0..=n / rx)
            .filter(|mx| (n - rx * mx) % ry == 0)
            .map(|mx| sx.coeffs[mx].tensor(&sx.ring, &sy.coeffs[(n - rx * mx) / ry], &sy.ring))
            .collect();
        sum_scaled(&terms, dim)
    });
    let beta = &sx.ring.tensor_classes(&sx.beta, &sy.ring.one(), &sy.ring)
        + &sx.ring.tensor_classes(&sx.ring.one(), &sy.beta, &sy.ring);
    Ok(CoeffStream {
        ring,
        r: r as u32,
        beta,
        coeffs,
        provenance: Provenance::new(
            "product",
            &[("left", sx.provenance.generator.clone()), ("right", sy.provenance.generator.clone())],
        ),
    })
}

/// `d! · H^0(J^X_{r_X})`, the exponential correction of a hypersurface of Fano index 1;
/// zero when the hypersurface has index at least 2.
pub fn c0_correction(sx: &CoeffStream, d: u32) -> Result<f64> {
    if d >= sx.r {
        return Err(Error::Domain(format!("degree {d} leaves no positive Fano index (r_X = {})", sx.r)));
    }
    if sx.r - d > 1 {
        return Ok(0.0);
    }
    let j1 = sx.coeff(1)?.to_class().h0();
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    Ok(fact * j1.re)
}

/// Degree-`d` hypersurface `Z ⊂ P^N` from the stream of `P^N`:
/// `J^Z_{r_Z m} = Π_{k=1}^{dm}(dh+k) J^X_{r_X m}` restricted to `Z`, with `r_Z = N+1-d`.
/// When `r_Z = 1` the series is multiplied by `e^{-c0 t}`; that convolution cancels
/// catastrophically in double precision and is carried out in big fixed-point arithmetic.
pub fn hypersurface_stream(sx: &CoeffStream, d: u32, m_max: usize) -> Result<CoeffStream> {
    let n = match sx.ring.kind {
        RingKind::Projective { n } => n,
        _ => return Err(Error::Unsupported("hypersurface streams need a projective-space stream".into())),
    };
    if sx.r != n + 1 {
        return Err(Error::Domain(format!("stream of P{n} must have r = {}", n + 1)));
    }
    let zring = Arc::new(restrict_hypersurface(&sx.ring, d)?);
    sx.require(m_max + 1)?;
    let r_z = n + 1 - d;
    let beta = standard_beta(&zring);
    if r_z >= 2 {
        let h = sx.ring.basis_class(1);
        let mut prefix = ScaledClass::from_class(sx.ring.one());
        let mut coeffs = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            if m > 0 {
                for k in (d as usize * (m - 1) + 1)..=(d as usize * m) {
                    let lin = h.scale_re(d as f64).with_h0(C64::new(k as f64, 0.0));
                    prefix = prefix.mul_class(&sx.ring, &lin);
                }
            }
            let full = prefix.mul(&sx.ring, &sx.coeffs[m]);
            coeffs.push(ScaledClass::normalized(restrict_class(&zring, &full.mantissa), full.exp2));
        }
        return CoeffStream::new(
            zring,
            r_z,
            beta,
            coeffs,
            Provenance::new("hypersurface", &[("ambient_n", n.to_string()), ("degree", d.to_string())]),
        );
    }
    let reference = projective_stream(n, 4.min(m_max));
    for (a, b) in sx.coeffs.iter().zip(&reference.coeffs) {
        if a.to_class().rel_distance(&b.to_class()) > 1e-12 {
            return Err(Error::Domain("stream does not match the J-function of projective space".into()));
        }
    }
    let c0 = c0_correction(sx, d)?;
    let coeffs = fano_index_one_hypersurface(n, d, c0.round() as i64, m_max);
    CoeffStream::new(
        zring,
        1,
        beta,
        coeffs,
        Provenance::new(
            "hypersurface",
            &[("ambient_n", n.to_string()), ("degree", d.to_string()), ("c0", c0.to_string())],
        ),
    )
}

/// `J_m = Σ_j (-c0)^j/j! I_{m-j}` with `I_k = Π_{k'≤dk}(dx+k') / Π_{k'≤k}(x+k')^{N+1}` in `Q[x]/x^N`.
///
/// Works with `G_k = k! I_k`, so `m! J_m = Σ_j binom(m,j) (-c0)^j G_{m-j}` is an integer
/// combination. The sum is about `((T_I+c0)/(T_I-c0))^m` larger than the result,
/// `T_I = d^d`, which sets the number of fractional bits.
fn fano_index_one_hypersurface(n: u32, d: u32, c0: i64, m_max: usize) -> Vec<ScaledClass> {
    let len = n as usize;
    let t_i = (d as f64).powi(d as i32);
    let growth = ((t_i + c0 as f64) / (t_i - c0 as f64).max(1.0)).log2().max(0.0);
    let frac_bits = (growth * m_max as f64).ceil() as u64 + 128;
    let mut gs = Vec::with_capacity(m_max + 1);
    let mut g = FixedPoly::one(len, frac_bits);
    gs.push(g.clone());
    for k in 1..=m_max as i64 {
        g.mul_int(&BigInt::from(k));
        for i in 1..=d as i64 {
            g.mul_linear(d as i64, d as i64 * (k - 1) + i);
        }
        for _ in 0..=n {
            g.div_linear(k);
        }
        gs.push(g.clone());
    }
    let mut factorials = Vec::with_capacity(m_max + 1);
    let mut f = BigInt::from(1);
    for m in 0..=m_max {
        if m > 0 {
            f *= m;
        }
        factorials.push(FixedPoly { coeffs: vec![f.clone()], frac_bits: 0 }.to_scaled());
    }
    par::map_range(0..m_max + 1, |m| {
        let mut acc = FixedPoly { coeffs: vec![BigInt::from(0); len], frac_bits };
        let mut b = BigInt::from(1);
        for j in 0..=m {
            if j > 0 {
                b = b * (m - j + 1) * (-c0) / j;
            }
            acc.add_scaled(&gs[m - j], &b);
        }
        let s = acc.to_scaled();
        let fm = &factorials[m];
        ScaledClass::normalized(s.mantissa.scale_re(1.0 / fm.mantissa.0[0].re), s.exp2 - fm.exp2)
    })
}

/// `J_m = Σ_j (-c0)^j/j! I_{m-j}` in double precision, for `r = 1` toric I-functions.
/// Fails once the cancellation ratio makes the result meaningless.
pub fn exp_convolution(ring: &RingPresentation, icoeffs: &[ScaledClass], c0: C64) -> Result<Vec<ScaledClass>> {
    let dim = ring.dim();
    let results = par::map_range(0..icoeffs.len(), |m| {
        let mut w = ScaledClass::from_class(ring.one());
        let mut terms = Vec::with_capacity(m + 1);
        for j in 0..=m {
            if j > 0 {
                w = w.scale(-c0 / j as f64);
            }
            terms.push(w.mul(ring, &icoeffs[m - j]));
        }
        let sum = sum_scaled(&terms, dim);
        let mag = terms.iter().map(|t| t.ln_norm()).fold(f64::NEG_INFINITY, f64::max);
        let ratio = if sum.is_zero() { f64::INFINITY } else { (mag - sum.ln_norm()).exp() };
        (sum, ratio)
    });
    results
        .into_iter()
        .enumerate()
        .map(|(m, (s, ratio))| if ratio > 1e8 { Err(Error::PrecisionLoss { m, ratio }) } else { Ok(s) })
        .collect()
}

/// Toric divisor class `D` with multiplicity and its pairings with the Mori generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToricDivisor {
    pub class: ClassValue,
    pub multiplicity: u32,
    pub pairings: Vec<i64>,
}

/// Toric data with a simplicial Mori cone: curve classes are `Σ a_i C_i`, `a_i >= 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToricData {
    pub name: String,
    pub divisors: Vec<ToricDivisor>,
    /// `c1 · C_i` for each generator.
    pub generator_degrees: Vec<u32>,
    /// Largest number of curve classes enumerated in one degree.
    pub lattice_cap: usize,
}

/// `Π_{k=1}^p (D+k)^{-1}` for `p >= 0`, `Π_{k=p+1}^0 (D+k)` for `p < 0`, indexed from `p_min`.
fn divisor_factors(ring: &RingPresentation, d: &ClassValue, p_min: i64, p_max: i64) -> Vec<ScaledClass> {
    let at = |k: i64| d.with_h0(d.h0() + k as f64);
    let mut pos = vec![ScaledClass::from_class(ring.one())];
    for k in 1..=p_max.max(0) {
        let inv = ring.inverse(&at(k)).expect("D + k is invertible for k > 0");
        let next = pos.last().unwrap().mul_class(ring, &inv);
        pos.push(next);
    }
    let mut neg = Vec::new();
    let mut acc = ScaledClass::from_class(ring.one());
    for p in (p_min.min(0)..0).rev() {
        acc = acc.mul_class(ring, &at(p + 1));
        neg.push(acc.clone());
    }
    neg.reverse();
    let mut out: Vec<ScaledClass> = neg;
    out.extend(pos);
    let start = p_min.min(0);
    out.drain(..(p_min - start) as usize);
    out.truncate((p_max - p_min + 1) as usize);
    out
}

fn for_each_composition(degrees: &[u32], n: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if prefix.len() + 1 == degrees.len() {
        let d = degrees[prefix.len()] as usize;
        if n % d == 0 {
            prefix.push(n / d);
            f(prefix);
            prefix.pop();
        }
        return;
    }
    let d = degrees[prefix.len()] as usize;
    for a in 0..=n / d {
        prefix.push(a);
        for_each_composition(degrees, n - a * d, prefix, f);
        prefix.pop();
    }
}

/// Toric I-function `I_D = Π_j F_j(D_j · D)^{mult_j}` summed over curve classes of
/// `c1`-degree `rm`. When `r = 1` and the degree-1 coefficient has a nonzero H^0
/// part `c0`, returns `J = e^{-c0 t} I`; otherwise `J = I`.
pub fn toric_stream(data: &ToricData, ring: Arc<RingPresentation>, m_max: usize) -> Result<CoeffStream> {
    let g = data.generator_degrees.len();
    if g == 0 || data.generator_degrees.contains(&0) {
        return Err(Error::Domain("toric data needs generators of positive c1-degree".into()));
    }
    for dv in &data.divisors {
        ring.check(&dv.class)?;
        if dv.pairings.len() != g {
            return Err(Error::Domain("divisor pairings must match the generator count".into()));
        }
    }
    let r = data.generator_degrees.iter().fold(0, |a, &b| gcd(a, b));
    let deg_max = r as usize * m_max;
    let ranges: Vec<(i64, i64)> = data
        .divisors
        .iter()
        .map(|dv| {
            let mut lo = 0i64;
            let mut hi = 0i64;
            for (p, &cd) in dv.pairings.iter().zip(&data.generator_degrees) {
                let reach = p * (deg_max / cd as usize) as i64;
                lo += reach.min(0);
                hi += reach.max(0);
            }
            (lo, hi)
        })
        .collect();
    let tables: Vec<Vec<ScaledClass>> = data
        .divisors
        .iter()
        .zip(&ranges)
        .map(|(dv, &(lo, hi))| {
            divisor_factors(&ring, &dv.class, lo, hi)
                .into_iter()
                .map(|f| {
                    let mut acc = ScaledClass::from_class(ring.one());
                    for _ in 0..dv.multiplicity {
                        acc = acc.mul(&ring, &f);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let dim = ring.dim();
    let per_degree = par::map_range(0..m_max + 1, |m| {
        let mut terms = Vec::new();
        let mut overflow = false;
        for_each_composition(&data.generator_degrees, r as usize * m, &mut Vec::new(), &mut |a| {
            if terms.len() >= data.lattice_cap {
                overflow = true;
                return;
            }
            let mut term = ScaledClass::from_class(ring.one());
            for (j, dv) in data.divisors.iter().enumerate() {
                let p: i64 = dv.pairings.iter().zip(a).map(|(q, &ai)| q * ai as i64).sum();
                term = term.mul(&ring, &tables[j][(p - ranges[j].0) as usize]);
            }
            terms.push(term);
        });
        if overflow {
            Err(Error::EnumerationCap { degree: r as usize * m, cap: data.lattice_cap })
        } else {
            Ok(sum_scaled(&terms, dim))
        }
    });
    let icoeffs: Vec<ScaledClass> = per_degree.into_iter().collect::<Result<_>>()?;
    let mut params = vec![("name", data.name.clone()), ("m_max", m_max.to_string())];
    let c0 = if r == 1 && m_max >= 1 { icoeffs[1].to_class().h0() } else { C64::new(0.0, 0.0) };
    let coeffs = if c0.norm() > 0.0 {
        params.push(("c0", format!("{}", c0.re)));
        exp_convolution(&ring, &icoeffs, c0)?
    } else {
        icoeffs
    };
    let beta = standard_beta(&ring);
    CoeffStream::new(ring, r, beta, coeffs, Provenance::new("toric", &params))
}

/// X3: divisors `x1` (four times), `x2`, `E = x2 - 3x1`; generators `C` (degree 1), `f` (degree 2).
pub fn x3_toric_data(ring: &RingPresentation) -> ToricData {
    let x1 = ring.basis_class(x3_index(1, 0));
    let x2 = ring.basis_class(x3_index(0, 1));
    let e = &x2 - &x1.scale_re(3.0);
    ToricData {
        name: "X3".into(),
        divisors: vec![
            ToricDivisor { class: x1, multiplicity: 4, pairings: vec![1, 0] },
            ToricDivisor { class: x2, multiplicity: 1, pairings: vec![0, 1] },
            ToricDivisor { class: e, multiplicity: 1, pairings: vec![-3, 1] },
        ],
        generator_degrees: vec![1, 2],
        lattice_cap: 1_000_000,
    }
}

/// `P^N` as a toric variety, for cross-checking the direct formula.
pub fn projective_toric_data(ring: &RingPresentation, n: u32) -> ToricData {
    ToricData {
        name: format!("P{n}"),
        divisors: vec![ToricDivisor { class: ring.basis_class(1), multiplicity: n + 1, pairings: vec![1] }],
        generator_degrees: vec![n + 1],
        lattice_cap: 1_000_000,
    }
}

/// Stream of `α'(t)`: coefficients `J_{rm} (rm+β)`, exponent shift `β - 1`.
pub fn derivative_stream(s: &CoeffStream) -> CoeffStream {
    let coeffs = par::map_range(0..s.len(), |m| s.coeffs[m].mul_class(&s.ring, &s.exponent(m)));
    let mut p = s.provenance.clone();
    p.params.insert("derivative".into(), "1".into());
    CoeffStream {
        ring: s.ring.clone(),
        r: s.r,
        beta: s.beta.with_h0(s.beta.h0() - 1.0),
        coeffs,
        provenance: p,
    }
}

/// Stream of `Σ_{m>=k} J_{rm} t^{rm+β}` with indices restarted at zero.
pub fn tail_stream(s: &CoeffStream, k: usize) -> Result<CoeffStream> {
    s.require(k + 1)?;
    let mut p = s.provenance.clone();
    p.params.insert("tail".into(), k.to_string());
    Ok(CoeffStream {
        ring: s.ring.clone(),
        r: s.r,
        beta: s.beta.with_h0(s.beta.h0() + (k * s.r as usize) as f64),
        coeffs: s.coeffs[k..].to_vec(),
        provenance: p,
    })
}

/// Stream of `t · α(t)`.
pub fn shift_stream(s: &CoeffStream) -> CoeffStream {
    let mut out = s.clone();
    out.beta = s.beta.with_h0(s.beta.h0() + 1.0);
    out.provenance.params.insert("times_t".into(), "1".into());
    out
}
