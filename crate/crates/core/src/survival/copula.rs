//! The Clayton copula and its Kendall's tau.

use crate::error::{Error, Result};

/// `C(u, v) = (u^-a + v^-a - 1)^(-1/a)`, reducing to `u v` at `a = 0`.
pub fn clayton(u: f64, v: f64, alpha: f64) -> Result<f64> {
    for p in [u, v] {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!("copula argument {p} outside (0, 1]")));
        }
    }
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(u * v);
    }
    // u^-a - 1 + v^-a - 1 + 1, kept in expm1 form for small a
    let s = (-alpha * u.ln()).exp_m1() + (-alpha * v.ln()).exp_m1();
    Ok((-s.ln_1p() / alpha).exp())
}

pub fn tau_of_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha / (alpha + 2.0))
}

/// Inverse of [`tau_of_alpha`] on `[0, 1)`.
pub fn alpha_of_tau(tau: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Domain(format!("Kendall's tau {tau} outside [0, 1)")));
    }
    Ok(2.0 * tau / (1.0 - tau))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("copula parameter must be finite and >= 0, got {alpha}")));
    }
    Ok(())
}
