//! Gamma function of a cohomology class, via the Taylor expansion of log Γ at
//! the H^0 part: `log Γ(a0 + n) = log Γ(a0) + Σ_j ψ^(j-1)(a0) n^j / j!`.

use crate::builtin::x3_index;
use crate::error::{Error, Result};
use crate::numeric::C64;
use crate::ring::{ClassValue, RingKind, RingPresentation};
use crate::special::{log_gamma, polygamma};
use std::f64::consts::PI;

/// `log Γ(α)` as a class; its H^0 part may be large, see [`crate::ScaledClass::exp_of`].
pub fn log_gamma_class(ring: &RingPresentation, alpha: &ClassValue) -> Result<ClassValue> {
    ring.check(alpha)?;
    let a0 = alpha.h0();
    let n = alpha.nilpotent();
    let mut out = ring.scalar(log_gamma(a0)?);
    let mut power = ring.one();
    let mut fact = 1.0;
    for j in 1..ring.nilpotency() {
        power = ring.product(&power, &n);
        if power.is_zero() {
            break;
        }
        fact *= j as f64;
        let psi = polygamma(j as u32 - 1, a0)?;
        out = &out + &power.scale(psi / fact);
    }
    Ok(out)
}

pub fn gamma_of_class(ring: &RingPresentation, alpha: &ClassValue) -> Result<ClassValue> {
    Ok(ring.exp(&log_gamma_class(ring, alpha)?))
}

/// `1/Γ(α)`, finite for every class; uses reflection when `Re α0 < 1/2`.
pub fn reciprocal_gamma(ring: &RingPresentation, alpha: &ClassValue) -> Result<ClassValue> {
    ring.check(alpha)?;
    if alpha.h0().re >= 0.5 {
        return Ok(ring.exp(&-&log_gamma_class(ring, alpha)?));
    }
    // 1/Γ(α) = Γ(1-α) sin(πα) / π
    let one_minus = &ring.one() - alpha;
    let g = gamma_of_class(ring, &one_minus)?;
    let i_pi = C64::new(0.0, PI);
    let sin = (&ring.exp(&alpha.scale(i_pi)) - &ring.exp(&alpha.scale(-i_pi))).scale(C64::new(0.0, -0.5 / PI));
    Ok(ring.product(&g, &sin))
}

/// `Γ̂ = Π Γ(1 + δ_i)` over Chern roots `δ_i` (classes with zero H^0).
pub fn gamma_hat(ring: &RingPresentation, roots: &[ClassValue]) -> Result<ClassValue> {
    let mut acc = ring.one();
    for d in roots {
        ring.check(d)?;
        if d.h0().norm() != 0.0 {
            return Err(Error::Domain("Chern roots must have zero H^0 part".into()));
        }
        acc = ring.product(&acc, &gamma_of_class(ring, &(&ring.one() + d))?);
    }
    Ok(acc)
}

/// `Γ(1+x1)^4 Γ(1-3x1+x2) Γ(1+x2) P(2πi x1, 2πi x2)` on X3 with
/// `P(u, v) = (v - 3u)(1 - u/2 + u^2/2 - 5u^3/24)`.
pub fn x3_target_class(ring: &RingPresentation) -> Result<ClassValue> {
    if ring.kind != RingKind::X3 {
        return Err(Error::Unsupported(format!("target class is defined on X3, not {}", ring.name)));
    }
    let x1 = ring.basis_class(x3_index(1, 0));
    let x2 = ring.basis_class(x3_index(0, 1));
    let e = &x2 - &x1.scale_re(3.0);
    let gh = gamma_hat(ring, &[x1.clone(), x1.clone(), x1.clone(), x1.clone(), e, x2.clone()])?;
    let tpi = C64::new(0.0, 2.0 * PI);
    let u = x1.scale(tpi);
    let v = x2.scale(tpi);
    let u2 = ring.product(&u, &u);
    let u3 = ring.product(&u2, &u);
    let poly = &(&(&ring.one() - &u.scale_re(0.5)) + &u2.scale_re(0.5)) - &u3.scale_re(5.0 / 24.0);
    let lin = &v - &u.scale_re(3.0);
    Ok(ring.product(&gh, &ring.product(&lin, &poly)))
}
