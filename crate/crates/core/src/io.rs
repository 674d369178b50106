//! Stream cache files and CSV emission.
//!
//! A cache is `AMLSTRM\0`, a little-endian `u32` format version, a `u32` header
//! length, a JSON header, then per coefficient an `i64` binary exponent followed by
//! `(re, im)` pairs of `f64`, all little-endian.

use crate::error::{Error, Result};
use crate::numeric::C64;
use crate::ring::{ClassValue, RingPresentation};
use crate::scaled::ScaledClass;
use crate::streams::{CoeffStream, Provenance};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

pub const CACHE_MAGIC: &[u8; 8] = b"AMLSTRM\0";
pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    ring: RingPresentation,
    ring_hash: String,
    r: u32,
    beta: ClassValue,
    len: usize,
    provenance: Provenance,
}

pub fn encode_stream(s: &CoeffStream) -> Result<Vec<u8>> {
    let header = CacheHeader {
        ring: (*s.ring).clone(),
        ring_hash: s.ring.hash(),
        r: s.r,
        beta: s.beta.clone(),
        len: s.len(),
        provenance: s.provenance.clone(),
    };
    let json = serde_json::to_vec(&header)?;
    let dim = s.ring.dim();
    let mut out = Vec::with_capacity(16 + json.len() + s.len() * (8 + 16 * dim));
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    for c in &s.coeffs {
        out.extend_from_slice(&c.exp2.to_le_bytes());
        for z in &c.mantissa.0 {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    Ok(out)
}

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.0.len() < n {
            return Err(Error::Cache("unexpected end of file".into()));
        }
        let (a, b) = self.0.split_at(n);
        self.0 = b;
        Ok(a)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_stream(bytes: &[u8]) -> Result<CoeffStream> {
    let mut r = Reader(bytes);
    if r.take(8)? != CACHE_MAGIC {
        return Err(Error::Cache("not a stream cache".into()));
    }
    let version = r.u32()?;
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("format version {version}, expected {CACHE_VERSION}")));
    }
    let hlen = r.u32()? as usize;
    let header: CacheHeader = serde_json::from_slice(r.take(hlen)?)?;
    if header.ring.hash() != header.ring_hash {
        return Err(Error::Cache("ring hash mismatch".into()));
    }
    let dim = header.ring.dim();
    let mut coeffs = Vec::with_capacity(header.len);
    for _ in 0..header.len {
        let exp2 = r.i64()?;
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            let re = r.f64()?;
            v.push(C64::new(re, r.f64()?));
        }
        coeffs.push(ScaledClass { mantissa: ClassValue(v), exp2 });
    }
    if !r.0.is_empty() {
        return Err(Error::Cache(format!("{} trailing bytes", r.0.len())));
    }
    CoeffStream::new(Arc::new(header.ring), header.r, header.beta, coeffs, header.provenance)
}

pub fn write_stream(s: &CoeffStream, path: &Path) -> Result<()> {
    let bytes = encode_stream(s)?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_stream(path: &Path) -> Result<CoeffStream> {
    decode_stream(&std::fs::read(path)?)
}

/// Scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rounds to `sig` significant digits in plain decimal notation.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - e).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit, e.g. 9.999995 -> 10.00000
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    if digits.trim_start_matches('0').len() > sig && decimals > 0 {
        let d = decimals - 1;
        return format!("{x:.d$}");
    }
    s
}

/// `a`, `bj`, or `a±bj`, each part to `sig` significant digits; zero parts are omitted.
pub fn fmt_complex_sig(z: C64, sig: usize) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => fmt_sig(z.re, sig),
        (true, false) => format!("{}j", fmt_sig(z.im, sig)),
        (false, false) => {
            let im = fmt_sig(z.im, sig);
            let sign = if im.starts_with('-') { "" } else { "+" };
            format!("{}{sign}{im}j", fmt_sig(z.re, sig))
        }
    }
}

/// Inverse of [`fmt_complex_sig`].
pub fn parse_complex_sig(s: &str) -> Result<C64> {
    let bad = || Error::Config(format!("bad complex number {s:?}"));
    let s = s.trim();
    let Some(body) = s.strip_suffix('j') else {
        return Ok(C64::new(s.parse().map_err(|_| bad())?, 0.0));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    match split {
        Some(i) => Ok(C64::new(body[..i].parse().map_err(|_| bad())?, body[i..].parse().map_err(|_| bad())?)),
        None => Ok(C64::new(0.0, body.parse().map_err(|_| bad())?)),
    }
}

/// CSV with a header row; each class expands to `name.re,name.im` columns.
pub fn classes_csv(ring: &RingPresentation, rows: &[(usize, ClassValue)]) -> String {
    let mut out = String::from("m");
    for b in &ring.basis {
        out.push_str(&format!(",{0}.re,{0}.im", b.name));
    }
    out.push('\n');
    for (m, c) in rows {
        out.push_str(&m.to_string());
        for z in &c.0 {
            out.push_str(&format!(",{},{}", fmt_num(z.re), fmt_num(z.im)));
        }
        out.push('\n');
    }
    out
}
