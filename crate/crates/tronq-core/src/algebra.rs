//! Minimal ring abstraction shared by plain complex numbers, truncated
//! `1/w`-series and exponential-level expansions.
//!
//! The nonlinearity `g(w, h, h')` of the canonical equation is written once,
//! generically over [`Ring`], and instantiated both for numeric evaluation
//! and for the series recursions.  Elements represent functions of `w`; the
//! `1/w` atom is passed in explicitly so that the same expression works in
//! every carrier.

use crate::error::Result;
use crate::C64;

pub trait Ring: Clone {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiply by a complex scalar.
    fn scale(&self, c: C64) -> Self;
    /// A constant of the same shape as `self`.
    fn constant(&self, c: C64) -> Self;
    /// Multiplicative inverse; fails when the leading part vanishes.
    fn recip(&self) -> Result<Self>;

    fn sq(&self) -> Self {
        self.mul(self)
    }
    fn cube(&self) -> Self {
        self.mul(&self.sq())
    }
    fn add_scalar(&self, c: C64) -> Self {
        self.add(&self.constant(c))
    }
    /// self / rhs
    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }
}

/// Second-order Taylor jet in two directions `(δh, δh')`:
/// `f ≈ v + dh·δh + dp·δh' + ½ dhh·δh² + dhp·δh δh' + ½ dpp·δh'²`.
///
/// Instantiating the canonical equation's right-hand side on jets anchored
/// at `(h, h') = (0, 0)` yields its exact local quadratic model.  This is
/// how tiny solutions (`|h|` below f64 epsilon relative to the O(1)
/// constants inside the nonlinearity) are integrated without absorption.
#[derive(Debug, Clone, Copy)]
pub struct Jet2 {
    pub v: C64,
    pub dh: C64,
    pub dp: C64,
    pub dhh: C64,
    pub dhp: C64,
    pub dpp: C64,
}

impl Jet2 {
    pub fn constant(c: C64) -> Jet2 {
        Jet2 {
            v: c,
            dh: C64::new(0.0, 0.0),
            dp: C64::new(0.0, 0.0),
            dhh: C64::new(0.0, 0.0),
            dhp: C64::new(0.0, 0.0),
            dpp: C64::new(0.0, 0.0),
        }
    }

    /// The `h` coordinate atom at the expansion point (0, 0).
    pub fn var_h() -> Jet2 {
        let mut j = Jet2::constant(C64::new(0.0, 0.0));
        j.dh = C64::new(1.0, 0.0);
        j
    }

    /// The `h'` coordinate atom at the expansion point (0, 0).
    pub fn var_hp() -> Jet2 {
        let mut j = Jet2::constant(C64::new(0.0, 0.0));
        j.dp = C64::new(1.0, 0.0);
        j
    }

    /// Evaluate the quadratic model at an offset `(h, hp)`.
    pub fn eval(&self, h: C64, hp: C64) -> C64 {
        self.v
            + self.dh * h
            + self.dp * hp
            + 0.5 * self.dhh * h * h
            + self.dhp * h * hp
            + 0.5 * self.dpp * hp * hp
    }
}

impl Ring for Jet2 {
    fn add(&self, r: &Self) -> Self {
        Jet2 {
            v: self.v + r.v,
            dh: self.dh + r.dh,
            dp: self.dp + r.dp,
            dhh: self.dhh + r.dhh,
            dhp: self.dhp + r.dhp,
            dpp: self.dpp + r.dpp,
        }
    }
    fn sub(&self, r: &Self) -> Self {
        Jet2 {
            v: self.v - r.v,
            dh: self.dh - r.dh,
            dp: self.dp - r.dp,
            dhh: self.dhh - r.dhh,
            dhp: self.dhp - r.dhp,
            dpp: self.dpp - r.dpp,
        }
    }
    fn mul(&self, r: &Self) -> Self {
        Jet2 {
            v: self.v * r.v,
            dh: self.v * r.dh + self.dh * r.v,
            dp: self.v * r.dp + self.dp * r.v,
            dhh: self.v * r.dhh + 2.0 * self.dh * r.dh + self.dhh * r.v,
            dhp: self.v * r.dhp + self.dh * r.dp + self.dp * r.dh + self.dhp * r.v,
            dpp: self.v * r.dpp + 2.0 * self.dp * r.dp + self.dpp * r.v,
        }
    }
    fn neg(&self) -> Self {
        Jet2 {
            v: -self.v,
            dh: -self.dh,
            dp: -self.dp,
            dhh: -self.dhh,
            dhp: -self.dhp,
            dpp: -self.dpp,
        }
    }
    fn scale(&self, c: C64) -> Self {
        Jet2 {
            v: self.v * c,
            dh: self.dh * c,
            dp: self.dp * c,
            dhh: self.dhh * c,
            dhp: self.dhp * c,
            dpp: self.dpp * c,
        }
    }
    fn constant(&self, c: C64) -> Self {
        Jet2::constant(c)
    }
    fn recip(&self) -> Result<Self> {
        if self.v.norm() == 0.0 {
            return Err(crate::Error::Domain("jet reciprocal at zero value".into()));
        }
        let iv = 1.0 / self.v;
        let iv2 = iv * iv;
        let iv3 = iv2 * iv;
        Ok(Jet2 {
            v: iv,
            dh: -self.dh * iv2,
            dp: -self.dp * iv2,
            dhh: 2.0 * self.dh * self.dh * iv3 - self.dhh * iv2,
            dhp: 2.0 * self.dh * self.dp * iv3 - self.dhp * iv2,
            dpp: 2.0 * self.dp * self.dp * iv3 - self.dpp * iv2,
        })
    }
}

impl Ring for C64 {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: C64) -> Self {
        self * c
    }
    fn constant(&self, c: C64) -> Self {
        c
    }
    fn recip(&self) -> Result<Self> {
        if self.norm() == 0.0 {
            return Err(crate::Error::Domain("division by zero".into()));
        }
        Ok(1.0 / self)
    }
}
