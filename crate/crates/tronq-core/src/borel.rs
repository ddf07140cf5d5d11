//! Borel transform, Padé continuation in the Borel plane, ray Laplace
//! transforms, and the assembled Borel-summed solution representations.
//!
//! A formal series `Σ aₙ w^(-r-n)` (Re r > 0) has Borel transform
//! `Σ aₙ p^(n+r-1) / Γ(n+r)`; the analytic factor `Σ aₙ pⁿ/Γ(n+r)` is
//! continued by a near-diagonal Padé approximant and Laplace-transformed
//! along rays `p ∈ e^{iφ}·[0,∞)` that stay clear of the approximant's poles.

use crate::equations::NormalizedForm;
use crate::error::{Error, Result};
use crate::pade::{pade_from_taylor, PadeRational};
use crate::quad;
use crate::series::{FormalSeries, Transseries};
use crate::special::gamma;
use crate::{c64, C64};

/// Minimum admissible distance between a Laplace ray and a Borel-plane pole.
pub const DELTA_RAY: f64 = 0.1;

/// Default absolute quadrature tolerance for Laplace evaluations.
pub const LAPLACE_TOL: f64 = 1e-10;

/// Borel transform of a formal series: the function
/// `p^(r-1) · Σ coeffs[n] pⁿ` with `coeffs[n] = aₙ/Γ(n+r)`.
#[derive(Debug, Clone)]
pub struct BorelSeries {
    pub r: C64,
    pub coeffs: Vec<C64>,
}

impl BorelSeries {
    /// Source coefficient `aₙ = coeffs[n]·Γ(n+r)`.
    pub fn source_coeff(&self, n: usize) -> Result<C64> {
        Ok(self.coeffs[n] * gamma(self.r + n as f64)?)
    }
}

/// Borel transform of a series with integer leading exponent `offset >= 1`.
pub fn borel_transform(f: &FormalSeries) -> Result<BorelSeries> {
    let offset = f.offset();
    if offset < 1 {
        return Err(Error::NonpositiveBorelExponent(offset));
    }
    borel_transform_shifted(f.coeffs(), c64(f64::from(offset), 0.0))
}

/// Borel transform of `w^(-r) Σ aₙ w^(-n)` for complex `r` with Re r > 0.
pub fn borel_transform_shifted(source: &[C64], r: C64) -> Result<BorelSeries> {
    if r.re <= 0.0 {
        return Err(Error::NonpositiveBorelExponent(r.re.floor() as i32));
    }
    let coeffs = source
        .iter()
        .enumerate()
        .map(|(n, &a)| Ok(a / gamma(r + n as f64)?))
        .collect::<Result<Vec<C64>>>()?;
    Ok(BorelSeries { r, coeffs })
}

/// Borel-plane convolution `(a ∗ b)(p) = ∫₀^p a(t) b(p-t) dt`, computed by
/// the closed form: result exponent `r_a + r_b`, coefficients
/// `(Σ_{k<=n} a_k b_{n-k}) / Γ(n + r_a + r_b)` in terms of the source
/// coefficients.
pub fn convolve(a: &BorelSeries, b: &BorelSeries) -> Result<BorelSeries> {
    let r = a.r + b.r;
    let n = a.coeffs.len().min(b.coeffs.len());
    let mut coeffs = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = c64(0.0, 0.0);
        for k in 0..=m {
            acc += a.source_coeff(k)? * b.source_coeff(m - k)?;
        }
        coeffs.push(acc / gamma(r + m as f64)?);
    }
    Ok(BorelSeries { r, coeffs })
}

/// A Borel-plane function `p^(r-1)·R(p)` with `R` a Padé continuation of the
/// transform's analytic factor.
#[derive(Debug, Clone)]
pub struct BorelFunction {
    pub r: C64,
    pub pade: PadeRational,
}

impl BorelFunction {
    /// Near-diagonal Padé continuation using all available coefficients.
    pub fn from_series(bs: &BorelSeries) -> Result<BorelFunction> {
        let n = bs.coeffs.len();
        assert!(n >= 3, "need at least 3 Borel coefficients");
        let den = (n - 1) / 2;
        let num = n - 1 - den;
        Ok(BorelFunction {
            r: bs.r,
            pade: pade_from_taylor(&bs.coeffs, num, den)?,
        })
    }

    /// Value on the ray: `p = ρ e^{iφ}` with the ray's own branch of the
    /// power (|φ| <= π).
    pub fn value_on_ray(&self, rho: f64, phi: f64, moment: u32) -> C64 {
        let p = C64::from_polar(rho, phi);
        let log_p = c64(rho.ln(), phi);
        let power = ((self.r - 1.0 + f64::from(moment)) * log_p).exp();
        power * self.pade.eval(p)
    }

    /// Is the whole expansion zero?
    pub fn is_zero(&self) -> bool {
        self.pade.num.iter().all(|c| c.norm() == 0.0)
    }

    /// Check ray admissibility against the pruned pole set.
    pub fn ray_admissible(&self, phi: f64, cap: f64) -> bool {
        self.pade.ray_pole_distance(phi, cap) >= DELTA_RAY
    }

    /// `∫₀^{∞ e^{iφ}} p^(moment) ·(this)(p)· e^{-wp} dp` by adaptive
    /// quadrature with an endpoint-regularizing substitution.  Returns the
    /// value and an absolute error estimate (quadrature + tail bound).
    pub fn laplace(&self, w: C64, phi: f64, moment: u32, abs_tol: f64) -> Result<(C64, f64)> {
        if self.is_zero() {
            return Ok((c64(0.0, 0.0), 0.0));
        }
        let dir = C64::from_polar(1.0, phi);
        let margin = (w * dir).re;
        if margin <= 1e-9 {
            return Err(Error::DecayCondition { margin });
        }

        // ray truncation: e^{-margin·P}·sup|R| < 1e-3·tol
        let re_q = self.r.re - 1.0 + f64::from(moment);
        let mut cap = (10.0f64).max(2.0 / margin);
        let mut tail;
        loop {
            let sup = (0..=16)
                .map(|i| {
                    let rho = cap * (1.0 + i as f64 / 8.0);
                    self.pade.eval(C64::from_polar(rho, phi)).norm() * rho.powf(re_q)
                })
                .fold(0.0, f64::max);
            tail = sup * (-margin * cap).exp() / margin;
            if tail < 1e-3 * abs_tol || cap > 1e4 {
                break;
            }
            cap *= 1.6;
        }

        let dist = self.pade.ray_pole_distance(phi, cap);
        if dist < DELTA_RAY {
            return Err(Error::RayNearPole { phi, dist });
        }

        // p = t^m regularizes the p^(r-1) endpoint behavior
        let m = if self.r.re + f64::from(moment) >= 2.0 {
            1
        } else {
            (2.0 / (self.r.re + f64::from(moment))).ceil() as i32
        };
        let mf = f64::from(m);
        let t_max = cap.powf(1.0 / mf);
        let integrand = |t: f64| -> C64 {
            if t <= 0.0 {
                return c64(0.0, 0.0);
            }
            let rho = t.powi(m);
            let jac = mf * t.powi(m - 1);
            self.value_on_ray(rho, phi, moment) * (-w * dir * rho).exp() * jac
        };
        let q = quad::integrate(&integrand, 0.0, t_max, abs_tol);
        Ok((q.value * dir, q.err_estimate + tail))
    }
}

/// A Borel sum: a continued Borel transform together with a fixed ray.
#[derive(Debug, Clone)]
pub struct BorelSum {
    pub func: BorelFunction,
    pub ray_phi: f64,
}

/// Build a Borel sum of a formal series along the ray `φ`, rejecting rays
/// that pass within [`DELTA_RAY`] of a (non-spurious) approximant pole.
pub fn build_borel_sum(f: &FormalSeries, phi: f64) -> Result<BorelSum> {
    let func = BorelFunction::from_series(&borel_transform(f)?)?;
    if !func.is_zero() && !func.ray_admissible(phi, 1e3) {
        let dist = func.pade.ray_pole_distance(phi, 1e3);
        return Err(Error::RayNearPole { phi, dist });
    }
    Ok(BorelSum { func, ray_phi: phi })
}

/// Laplace-evaluate a Borel sum at `w` along its stored ray.
pub fn laplace_eval(bs: &BorelSum, w: C64) -> Result<(C64, f64)> {
    bs.func.laplace(w, bs.ray_phi, 0, LAPLACE_TOL)
}

/// Which transseries constant (and half-plane family) a representation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    /// `C₊`: rays φ in (-π, 0); constants govern arg w in (0, π/2).
    #[serde(rename = "upper")]
    Upper,
    /// `C₋`: rays φ in (0, π); constants govern arg w in (-π/2, 0).
    #[serde(rename = "lower")]
    Lower,
}

/// Tritronquée branch: `h⁺` (rays below the cut) or `h⁻` (rays above).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TriSide {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

impl Side {
    fn phi_interval(self) -> (f64, f64) {
        let d = 1e-3;
        match self {
            Side::Upper => (-std::f64::consts::PI + d, -d),
            Side::Lower => (d, std::f64::consts::PI - d),
        }
    }
}

/// Borel-summed tronquée representation of the canonical equation's
/// solutions: `h(w) = ℒ_φ H₀(w) + Σ_k C^k e^{-kw} w^{k M₁} ℒ_φ H_k(w)` with
/// `H_k = ℬ(w^{-kβ₁-kM₁} s̃_k)`.
#[derive(Debug, Clone)]
pub struct TronqueeRep {
    pub nf: NormalizedForm,
    pub ts: Transseries,
    pub h0_fn: BorelFunction,
    pub level_fns: Vec<BorelFunction>,
    pub m1: i32,
}

/// One evaluation of a Borel-summed representation.
#[derive(Debug, Clone, Copy)]
pub struct EvalJet {
    pub h: C64,
    pub hp: C64,
    pub hpp: C64,
    /// Absolute error estimate (quadrature + level truncation).
    pub err_estimate: f64,
    /// Ray used for the Laplace transforms.
    pub phi: f64,
}

impl TronqueeRep {
    pub fn build(nf: &NormalizedForm, ts: &Transseries) -> Result<TronqueeRep> {
        let m1 = nf.m1();
        let h0_fn = BorelFunction::from_series(&borel_transform(&ts.h0.window(
            2,
            ts.n as i32,
        ))?)?;
        let mut level_fns = Vec::with_capacity(ts.k());
        for k in 1..=ts.k() {
            let kf = k as f64;
            let r = kf * (nf.beta1 + f64::from(m1));
            let source: Vec<C64> = (0..=ts.n as i32).map(|j| ts.level(k).coeff(j)).collect();
            level_fns.push(BorelFunction::from_series(&borel_transform_shifted(
                &source, r,
            )?)?);
        }
        Ok(TronqueeRep {
            nf: *nf,
            ts: ts.clone(),
            h0_fn,
            level_fns,
            m1,
        })
    }

    /// Pick an admissible Laplace ray for `w` within the side's arc,
    /// preferring strong kernel decay and healthy pole distance.
    pub fn choose_phi(&self, side: Side, w: C64) -> Result<f64> {
        let (lo, hi) = side.phi_interval();
        let mut best: Option<(f64, f64)> = None;
        let samples = 160;
        for i in 0..=samples {
            let phi = lo + (hi - lo) * (i as f64) / (samples as f64);
            let margin = (w * C64::from_polar(1.0, phi)).re;
            if margin <= 1e-6 * w.norm() {
                continue;
            }
            let mut dist = self.h0_fn.pade.ray_pole_distance(phi, 1e3);
            for f in &self.level_fns {
                dist = dist.min(f.pade.ray_pole_distance(phi, 1e3));
            }
            if dist < DELTA_RAY {
                continue;
            }
            // prefer margin, softly capped by pole distance
            let score = margin.min(w.norm()) * dist.min(1.0);
            if best.map(|(s, _)| score > s).unwrap_or(true) {
                best = Some((score, phi));
            }
        }
        best.map(|(_, phi)| phi).ok_or(Error::NoAdmissibleRay {
            w: (w.re, w.im),
        })
    }

    /// Evaluate `h` together with `h'` and `h''` (term-wise differentiated
    /// representation; the Laplace kernel differentiates to `-p`).
    pub fn eval_jet(&self, c: C64, side: Side, w: C64, k_used: usize, tol: f64) -> Result<EvalJet> {
        let phi = self.choose_phi(side, w)?;
        self.eval_jet_on_ray(c, w, phi, k_used, tol)
    }

    pub fn eval_jet_on_ray(
        &self,
        c: C64,
        w: C64,
        phi: f64,
        k_used: usize,
        tol: f64,
    ) -> Result<EvalJet> {
        let (l0, e0) = self.h0_fn.laplace(w, phi, 0, tol)?;
        let (l1, e1) = self.h0_fn.laplace(w, phi, 1, tol)?;
        let (l2, e2) = self.h0_fn.laplace(w, phi, 2, tol)?;
        let mut h = l0;
        let mut hp = -l1;
        let mut hpp = l2;
        let mut err = e0 + e1 + e2;

        let k_used = k_used.min(self.level_fns.len());
        if c.norm() > 0.0 {
            let mu = f64::from(self.m1);
            let mut ck = c64(1.0, 0.0);
            for k in 1..=k_used {
                let kf = k as f64;
                ck *= c;
                let f = &self.level_fns[k - 1];
                let (lv0, le0) = f.laplace(w, phi, 0, tol)?;
                let (lv1, le1) = f.laplace(w, phi, 1, tol)?;
                let (lv2, le2) = f.laplace(w, phi, 2, tol)?;
                // prefactor E = C^k e^{-kw} w^{kM₁}
                let pre = ck * (-kf * w).exp() * w.powi(k as i32 * self.m1);
                let a = -kf + kf * mu / w;
                h += pre * lv0;
                hp += pre * (a * lv0 - lv1);
                hpp += pre * ((a * a - kf * mu / (w * w)) * lv0 - 2.0 * a * lv1 + lv2);
                err += pre.norm() * (le0 + le1 + le2) * (1.0 + a.norm()).powi(2);
            }
            // truncation of the exponential sum
            let xi = c * (-w).exp() * w.powc(-self.nf.beta1);
            err += xi.norm().powi(k_used as i32 + 1);
        }
        Ok(EvalJet {
            h,
            hp,
            hpp,
            err_estimate: err,
            phi,
        })
    }

    /// Tronquée value only.
    pub fn eval(&self, c: C64, side: Side, w: C64, k_used: usize) -> Result<EvalJet> {
        self.eval_jet(c, side, w, k_used, LAPLACE_TOL)
    }

    /// Tritronquée `h^±(w) = ℒ_φ H₀(w)` with the ray on the requested side;
    /// `phi` may be pinned explicitly (ray-rotation tests), otherwise an
    /// admissible ray is chosen.
    pub fn tritronquee(&self, side: TriSide, w: C64, phi: Option<f64>) -> Result<EvalJet> {
        let side = match side {
            TriSide::Plus => Side::Upper,
            TriSide::Minus => Side::Lower,
        };
        let phi = match phi {
            Some(p) => p,
            None => self.choose_phi(side, w)?,
        };
        let (h, e0) = self.h0_fn.laplace(w, phi, 0, LAPLACE_TOL)?;
        let (l1, e1) = self.h0_fn.laplace(w, phi, 1, LAPLACE_TOL)?;
        let (l2, e2) = self.h0_fn.laplace(w, phi, 2, LAPLACE_TOL)?;
        Ok(EvalJet {
            h,
            hp: -l1,
            hpp: l2,
            err_estimate: e0 + e1 + e2,
            phi,
        })
    }

    /// Residual of the canonical equation on an evaluated jet.
    pub fn residual(&self, w: C64, jet: &EvalJet) -> Result<C64> {
        self.nf.eqh_residual(w, jet.h, jet.hp, jet.hpp)
    }
}

/// Tronquée value with derivatives at `w` (side picks the constant family
/// and the Laplace ray arc).
pub fn tronquee_eval(
    rep: &TronqueeRep,
    c: C64,
    side: Side,
    w: C64,
    k_used: usize,
) -> Result<EvalJet> {
    rep.eval(c, side, w, k_used)
}

/// Tritronquée value `h^±(w)`; pass `phi` to pin the Laplace ray.
pub fn tritronquee_eval(
    rep: &TronqueeRep,
    side: TriSide,
    w: C64,
    phi: Option<f64>,
) -> Result<EvalJet> {
    rep.tritronquee(side, w, phi)
}
