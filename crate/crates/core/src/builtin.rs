//! Ring presentations for the spaces handled natively.

use crate::error::{Error, Result};
use crate::numeric::C64;
use crate::ring::{BasisElement, ClassValue, RingKind, RingPresentation};
use std::collections::BTreeMap;

/// `H*(P^n) = C[h]/h^{n+1}` with `∫ h^n = 1`.
pub fn projective(n: u32) -> RingPresentation {
    truncated_polynomial(format!("P{n}"), RingKind::Projective { n }, n, n + 1, 1.0)
}

/// `C[h]/h^{dim+1}`, `c1 = fano h`, `∫ h^dim = top`.
fn truncated_polynomial(name: String, kind: RingKind, dim: u32, fano: u32, top: f64) -> RingPresentation {
    let len = dim as usize + 1;
    let basis = (0..len)
        .map(|k| BasisElement {
            name: match k {
                0 => "1".into(),
                1 => "h".into(),
                _ => format!("h^{k}"),
            },
            degree: 2 * k as u32,
        })
        .collect();
    let mut products = Vec::new();
    for i in 1..len {
        for j in i..len {
            if i + j < len {
                products.push((i, j, i + j, 1.0, 0.0));
            }
        }
    }
    let mut c1 = ClassValue::zeros(len);
    if len > 1 {
        c1.0[1] = C64::new(fano as f64, 0.0);
    }
    let mut integral = ClassValue::zeros(len);
    integral.0[len - 1] = C64::new(top, 0.0);
    RingPresentation::new(name, kind, basis, dim, fano, c1, integral, &products)
        .expect("truncated polynomial ring is valid")
}

/// Product `X × Y`.
pub fn product(x: &RingPresentation, y: &RingPresentation) -> RingPresentation {
    x.tensor(y)
}

/// Ring of a smooth degree-`d` hypersurface `Z ⊂ P^N` generated by the restricted hyperplane class:
/// `C[x]/x^N`, `∫_Z x^{N-1} = d`, Fano index `N + 1 - d`.
pub fn restrict_hypersurface(ambient: &RingPresentation, d: u32) -> Result<RingPresentation> {
    let n = match ambient.kind {
        RingKind::Projective { n } => n,
        _ => return Err(Error::Unsupported("hypersurface restriction needs a projective space".into())),
    };
    if d == 0 || d > n {
        return Err(Error::Domain(format!("degree {d} must lie in 1..={n} for a Fano hypersurface in P{n}")));
    }
    if n < 2 {
        return Err(Error::Domain("hypersurface must have positive dimension".into()));
    }
    Ok(truncated_polynomial(
        format!("P{n}[{d}]"),
        RingKind::Hypersurface { ambient_n: n, degree: d },
        n - 1,
        n + 1 - d,
        d as f64,
    ))
}

/// Pull back a class from `P^N` to a hypersurface ring by dropping `h^N`.
pub fn restrict_class(z: &RingPresentation, a: &ClassValue) -> ClassValue {
    ClassValue(a.0[..z.dim()].to_vec())
}

/// Basis index of `x1^i x2^j` in the X3 ring.
pub fn x3_index(i: usize, j: usize) -> usize {
    2 * i + j
}

fn x3_name(i: usize, j: usize) -> String {
    let p = |v: &str, e: usize| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    let parts: Vec<String> = [p("x1", i), p("x2", j)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Rewrites `x1^i x2^j` into the basis `x1^a x2^b` (`a < 4`, `b < 2`).
///
/// Classical relations: `x2^2 = 3 x1 x2`, `x1^4 = 0`.
/// Quantum relations at `q = 1`: `x2^2 = 3 x1 x2 + 1`,
/// `x1^4 = -27 x1^3 + 9 x1^2 x2 - 6 x1 + x2`.
/// Each rule lowers `(i + j, j)` lexicographically, so rewriting terminates.
pub fn x3_reduce(i: usize, j: usize, quantum: bool) -> ClassValue {
    let mut pending: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut out = ClassValue::zeros(8);
    pending.insert((i, j), 1.0);
    while let Some(((a, b), c)) = pending.pop_last() {
        if c == 0.0 {
            continue;
        }
        let mut push = |a: usize, b: usize, k: f64| *pending.entry((a, b)).or_insert(0.0) += c * k;
        if b >= 2 {
            push(a + 1, b - 1, 3.0);
            if quantum {
                push(a, b - 2, 1.0);
            }
        } else if a >= 4 {
            if quantum {
                push(a - 1, b, -27.0);
                push(a - 2, b + 1, 9.0);
                push(a - 3, b, -6.0);
                push(a - 4, b + 1, 1.0);
            }
        } else {
            out.0[x3_index(a, b)] += C64::new(c, 0.0);
        }
    }
    out
}

/// Classical cohomology of the toric 4-fold X3: `C[x1, x2]/(x1^4, x2^2 - 3 x1 x2)`,
/// `c1 = x1 + 2 x2`, `∫ x1^3 x2 = 1`.
pub fn x3_classical() -> RingPresentation {
    let mut basis = Vec::new();
    for i in 0..4 {
        for j in 0..2 {
            basis.push(BasisElement { name: x3_name(i, j), degree: 2 * (i + j) as u32 });
        }
    }
    let mut products = Vec::new();
    for p in 1..8 {
        for q in p..8 {
            let (i1, j1, i2, j2) = (p / 2, p % 2, q / 2, q % 2);
            let v = x3_reduce(i1 + i2, j1 + j2, false);
            for (k, c) in v.0.iter().enumerate() {
                if c.norm() != 0.0 {
                    products.push((p, q, k, c.re, c.im));
                }
            }
        }
    }
    let mut c1 = ClassValue::zeros(8);
    c1.0[x3_index(1, 0)] = C64::new(1.0, 0.0);
    c1.0[x3_index(0, 1)] = C64::new(2.0, 0.0);
    RingPresentation::new("X3", RingKind::X3, basis, 4, 1, c1, ClassValue::basis(8, 7), &products)
        .expect("X3 ring is valid")
}

/// Matrix of quantum multiplication by `a` on the X3 basis at `q = 1`.
pub fn x3_quantum_matrix(a: &ClassValue) -> Vec<Vec<C64>> {
    let mut m = vec![vec![C64::new(0.0, 0.0); 8]; 8];
    for (p, &ap) in a.0.iter().enumerate() {
        if ap.norm() == 0.0 {
            continue;
        }
        for q in 0..8 {
            let v = x3_reduce(p / 2 + q / 2, p % 2 + q % 2, true);
            for k in 0..8 {
                m[k][q] += ap * v.0[k];
            }
        }
    }
    m
}
