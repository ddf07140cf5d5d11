//! Complex gamma function (Lanczos approximation with reflection).

use crate::error::{Error, Result};
use crate::{c64, C64};
use std::f64::consts::PI;

// Lanczos coefficients for g = 7, n = 9 (as tabulated in the GNU Scientific
// Library and reproduced widely).
#[allow(clippy::excessive_precision)]
const LANCZOS_P: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];
const LANCZOS_G: f64 = 7.0;

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Γ(z) for complex z; relative error below ~1e-13 away from the poles.
pub fn gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole((z.re, z.im)));
    }
    if z.re < 0.5 {
        // reflection: Γ(z) Γ(1-z) = π / sin(πz)
        let s = (PI * z).sin();
        if s.norm() == 0.0 {
            return Err(Error::GammaPole((z.re, z.im)));
        }
        return Ok(PI / (s * gamma(1.0 - z)?));
    }
    let z = z - 1.0;
    let mut t = c64(LANCZOS_P[0], 0.0);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        t += p / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * w.powc(z + 0.5) * (-w).exp() * t)
}

/// ln Γ(z) via the same approximation (principal branch for Re z > 0).
pub fn ln_gamma(z: C64) -> Result<C64> {
    if z.re > 0.5 {
        let zm = z - 1.0;
        let mut t = c64(LANCZOS_P[0], 0.0);
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            t += p / (zm + i as f64);
        }
        let w = zm + LANCZOS_G + 0.5;
        Ok(0.5 * (2.0 * PI).ln() + (zm + 0.5) * w.ln() - w + t.ln())
    } else {
        Ok(gamma(z)?.ln())
    }
}
