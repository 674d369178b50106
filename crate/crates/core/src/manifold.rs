//! Manifold descriptions: short names such as `P3`, `X3`, `product P1 P1`,
//! `hypersurface P3 3`, and line-oriented config files with custom rings.

use crate::builtin::{
    product, projective, restrict_class, restrict_hypersurface, x3_classical, x3_index, x3_quantum_matrix,
};
use crate::error::{Error, Result};
use crate::gamma::{gamma_hat, gamma_of_class};
use crate::linalg::Matrix;
use crate::numeric::C64;
use crate::ring::{BasisElement, ClassValue, RingKind, RingPresentation};
use crate::spectra::{hypersurface_t, kronecker_sum, pn_matrix, product_t, x3_spectrum};
use crate::streams::{
    c0_correction, hypersurface_stream, product_stream, projective_stream, toric_stream, x3_toric_data, CoeffStream,
};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

pub const MAX_PROJECTIVE_N: u32 = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum ManifoldKind {
    Projective(u32),
    Product(Box<ManifoldKind>, Box<ManifoldKind>),
    Hypersurface { ambient: u32, degree: u32 },
    X3,
    Custom(Box<RingPresentation>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    pub name: String,
    pub kind: ManifoldKind,
    /// Truncation `M` requested by a config file, if any.
    pub m: Option<usize>,
}

impl FromStr for ManifoldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let (kind, rest) = parse_tokens(&tokens)?;
        if !rest.is_empty() {
            return Err(Error::Config(format!("trailing tokens in manifold name: {}", rest.join(" "))));
        }
        Ok(kind)
    }
}

fn parse_tokens<'a>(t: &'a [&'a str]) -> Result<(ManifoldKind, &'a [&'a str])> {
    let Some((&head, rest)) = t.split_first() else {
        return Err(Error::Config("empty manifold name".into()));
    };
    match head.to_ascii_lowercase().as_str() {
        "x3" => Ok((ManifoldKind::X3, rest)),
        "product" => {
            let (a, rest) = parse_tokens(rest)?;
            let (b, rest) = parse_tokens(rest)?;
            if matches!(a, ManifoldKind::Custom(_)) || matches!(b, ManifoldKind::Custom(_)) {
                return Err(Error::Config("products of custom rings are not supported".into()));
            }
            Ok((ManifoldKind::Product(Box::new(a), Box::new(b)), rest))
        }
        "hypersurface" => {
            let (amb, rest) = parse_tokens(rest)?;
            let ManifoldKind::Projective(n) = amb else {
                return Err(Error::Config("hypersurface ambient must be P<N>".into()));
            };
            let Some((d, rest)) = rest.split_first() else {
                return Err(Error::Config("hypersurface needs a degree".into()));
            };
            let degree = d.parse().map_err(|_| Error::Config(format!("bad degree {d:?}")))?;
            validate_hypersurface(n, degree)?;
            Ok((ManifoldKind::Hypersurface { ambient: n, degree }, rest))
        }
        h if h.starts_with('p') => {
            let n: u32 = h[1..].parse().map_err(|_| Error::Config(format!("bad manifold name {head:?}")))?;
            if n == 0 || n > MAX_PROJECTIVE_N {
                return Err(Error::Config(format!("P^N needs 1 <= N <= {MAX_PROJECTIVE_N}, got {n}")));
            }
            Ok((ManifoldKind::Projective(n), rest))
        }
        _ => Err(Error::Config(format!("unknown manifold {head:?}"))),
    }
}

fn validate_hypersurface(n: u32, d: u32) -> Result<()> {
    if n < 2 || d == 0 || d > n {
        return Err(Error::Config(format!("need N >= 2 and 1 <= d <= N for a Fano hypersurface, got N = {n}, d = {d}")));
    }
    Ok(())
}

impl ManifoldKind {
    pub fn ring(&self) -> Result<RingPresentation> {
        Ok(match self {
            ManifoldKind::Projective(n) => projective(*n),
            ManifoldKind::Product(a, b) => product(&a.ring()?, &b.ring()?),
            ManifoldKind::Hypersurface { ambient, degree } => restrict_hypersurface(&projective(*ambient), *degree)?,
            ManifoldKind::X3 => x3_classical(),
            ManifoldKind::Custom(r) => (**r).clone(),
        })
    }

    fn fano_index(&self) -> Result<u32> {
        Ok(self.ring()?.fano_index)
    }

    pub fn stream(&self, m_max: usize) -> Result<CoeffStream> {
        match self {
            ManifoldKind::Projective(n) => Ok(projective_stream(*n, m_max)),
            ManifoldKind::Product(a, b) => {
                let (ra, rb) = (a.fano_index()?, b.fano_index()?);
                let r = num_integer::gcd(ra, rb) as usize;
                let sa = a.stream(r * m_max / ra as usize)?;
                let sb = b.stream(r * m_max / rb as usize)?;
                product_stream(&sa, &sb, m_max)
            }
            ManifoldKind::Hypersurface { ambient, degree } => {
                hypersurface_stream(&projective_stream(*ambient, m_max), *degree, m_max)
            }
            ManifoldKind::X3 => {
                x3_spectrum()?;
                let ring = Arc::new(x3_classical());
                toric_stream(&x3_toric_data(&ring), ring, m_max)
            }
            ManifoldKind::Custom(r) => {
                Err(Error::Unsupported(format!("no coefficient generator for custom ring {}", r.name)))
            }
        }
    }

    /// Matrix of `c1 ⋆` at `q = 1` when a closed presentation is shipped.
    pub fn quantum_matrix(&self) -> Option<Matrix> {
        match self {
            ManifoldKind::Projective(n) => Some(pn_matrix(*n)),
            ManifoldKind::X3 => Some(x3_quantum_matrix(&x3_classical().c1)),
            ManifoldKind::Product(a, b) => Some(kronecker_sum(&a.quantum_matrix()?, &b.quantum_matrix()?)),
            _ => None,
        }
    }

    /// Predicted growth constant `T`.
    pub fn predicted_t(&self) -> Result<f64> {
        match self {
            ManifoldKind::Projective(n) => Ok((n + 1) as f64),
            ManifoldKind::X3 => Ok(x3_spectrum()?.spectral_radius),
            ManifoldKind::Product(a, b) => Ok(product_t(a.predicted_t()?, b.predicted_t()?)),
            ManifoldKind::Hypersurface { ambient, degree } => {
                let r_x = ambient + 1;
                let c0 = c0_correction(&projective_stream(*ambient, 1), *degree)?;
                hypersurface_t(r_x, r_x as f64, *degree, c0)
            }
            ManifoldKind::Custom(r) => Err(Error::Unsupported(format!("no growth prediction for custom ring {}", r.name))),
        }
    }

    /// `Γ̂` from the Chern roots of the tangent bundle.
    pub fn gamma_class(&self) -> Result<ClassValue> {
        match self {
            ManifoldKind::Projective(n) => {
                let ring = projective(*n);
                gamma_hat(&ring, &vec![ring.basis_class(1); *n as usize + 1])
            }
            ManifoldKind::Product(a, b) => {
                let (ra, rb) = (a.ring()?, b.ring()?);
                Ok(ra.tensor_classes(&a.gamma_class()?, &b.gamma_class()?, &rb))
            }
            ManifoldKind::Hypersurface { ambient, degree } => {
                let p = projective(*ambient);
                let h = p.basis_class(1);
                let num = gamma_hat(&p, &vec![h.clone(); *ambient as usize + 1])?;
                let normal = gamma_of_class(&p, &(&p.one() + &h.scale_re(*degree as f64)))?;
                let z = restrict_hypersurface(&p, *degree)?;
                Ok(restrict_class(&z, &p.product(&num, &p.inverse(&normal)?)))
            }
            ManifoldKind::X3 => {
                let ring = x3_classical();
                let x1 = ring.basis_class(x3_index(1, 0));
                let x2 = ring.basis_class(x3_index(0, 1));
                let e = &x2 - &x1.scale_re(3.0);
                gamma_hat(&ring, &[x1.clone(), x1.clone(), x1.clone(), x1, e, x2])
            }
            ManifoldKind::Custom(r) => Err(Error::Unsupported(format!("no Chern roots for custom ring {}", r.name))),
        }
    }
}

impl ManifoldSpec {
    /// A short name, or the path of a config file when one exists at `s`.
    pub fn resolve(s: &str) -> Result<Self> {
        let p = Path::new(s);
        if p.is_file() {
            return Self::from_config(&std::fs::read_to_string(p)?);
        }
        Ok(ManifoldSpec { name: s.split_whitespace().collect::<Vec<_>>().join(" "), kind: s.parse()?, m: None })
    }

    pub fn ring(&self) -> Result<RingPresentation> {
        self.kind.ring()
    }

    /// Parses a config such as
    ///
    /// ```text
    /// [manifold]
    /// name = cubic surface
    /// kind = hypersurface P3 3
    /// M = 200
    /// ```
    ///
    /// or, for `kind = custom`, a `[ring]` section (`name`, `dim_c`, `fano_index`,
    /// `basis = 1:0 h:2 ...`, `c1`, `integral`) and a `[products]` section of
    /// `i j k re im` lines. Coordinates are written `re` or `re:im`.
    pub fn from_config(text: &str) -> Result<Self> {
        let sections = parse_sections(text)?;
        let man = sections.get("manifold").ok_or_else(|| Error::Config("missing [manifold] section".into()))?;
        let kind_str = get(man, "kind", "manifold")?;
        let kind = if kind_str.trim().eq_ignore_ascii_case("custom") {
            ManifoldKind::Custom(Box::new(custom_ring(&sections)?))
        } else {
            kind_str.parse()?
        };
        let m = match man.get("M") {
            Some(v) => {
                let m: usize = v.parse().map_err(|_| Error::Config(format!("bad M {v:?}")))?;
                if m < 1 {
                    return Err(Error::Config("M must be at least 1".into()));
                }
                Some(m)
            }
            None => None,
        };
        let name = man.get("name").cloned().unwrap_or_else(|| kind_str.clone());
        Ok(ManifoldSpec { name, kind, m })
    }
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_sections(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current = String::new();
    let mut product_line = 0usize;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            out.entry(current.clone()).or_default();
            continue;
        }
        if current.is_empty() {
            return Err(Error::Config(format!("line {}: entry outside a section", ln + 1)));
        }
        let sec = out.entry(current.clone()).or_default();
        if current == "products" {
            sec.insert(format!("{product_line:08}"), line.to_string());
            product_line += 1;
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", ln + 1)))?;
        if sec.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key {}", ln + 1, k.trim())));
        }
    }
    Ok(out)
}

fn get<'a>(sec: &'a BTreeMap<String, String>, key: &str, name: &str) -> Result<&'a String> {
    sec.get(key).ok_or_else(|| Error::Config(format!("[{name}] is missing {key}")))
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad {what} {s:?}")))
}

/// `re` or `re:im`.
pub fn parse_complex(s: &str) -> Result<C64> {
    match s.split_once(':') {
        Some((re, im)) => Ok(C64::new(parse_num(re, "real part")?, parse_num(im, "imaginary part")?)),
        None => Ok(C64::new(parse_num(s, "number")?, 0.0)),
    }
}

/// Whitespace- or comma-separated coordinates.
pub fn parse_class(s: &str) -> Result<ClassValue> {
    let v = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(Error::Config("empty class".into()));
    }
    Ok(ClassValue(v))
}

fn custom_ring(sections: &Sections) -> Result<RingPresentation> {
    let ring = sections.get("ring").ok_or_else(|| Error::Config("custom kind needs a [ring] section".into()))?;
    let name = get(ring, "name", "ring")?.clone();
    let dim_c = parse_num(get(ring, "dim_c", "ring")?, "dim_c")?;
    let fano_index = parse_num(get(ring, "fano_index", "ring")?, "fano_index")?;
    let basis = get(ring, "basis", "ring")?
        .split_whitespace()
        .map(|b| {
            let (n, d) = b.split_once(':').ok_or_else(|| Error::Config(format!("basis entry {b:?} is not name:degree")))?;
            Ok(BasisElement { name: n.to_string(), degree: parse_num(d, "degree")? })
        })
        .collect::<Result<Vec<_>>>()?;
    let c1 = parse_class(get(ring, "c1", "ring")?)?;
    let integral = parse_class(get(ring, "integral", "ring")?)?;
    let mut products = Vec::new();
    if let Some(p) = sections.get("products") {
        for line in p.values() {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::Config(format!("product line {line:?} needs i j k re im")));
            }
            products.push((
                parse_num(f[0], "index")?,
                parse_num(f[1], "index")?,
                parse_num(f[2], "index")?,
                parse_num(f[3], "coefficient")?,
                parse_num(f[4], "coefficient")?,
            ));
        }
    }
    RingPresentation::new(
        name.clone(),
        RingKind::Custom { name },
        basis,
        dim_c,
        fano_index,
        c1,
        integral,
        &products,
    )
}
