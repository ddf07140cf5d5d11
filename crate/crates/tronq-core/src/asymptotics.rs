//! Leading two-scale profiles `F₀` per case, their defining ODEs as residual
//! oracles, and the asymptotic pole-position formulas with matching against
//! numerically observed poles.
//!
//! Pole arrays of a solution with constant `C` on one side sit where
//! `ξ(w) = C e^{-w} w^{-β₁}` reaches a singularity `ξ_s` of `F₀`:
//!
//! ```text
//! w_n = ±2nπi - β₁ ln(±2nπi) + ln C - ln ξ_s + o(1)
//! ```

use crate::borel::Side;
use crate::equations::{EquationSpec, PainleveCase};
use crate::error::{Error, Result};
use crate::ode::PoleObservation;
use crate::{c64, C64};

/// Nearest-neighbour matching radius: a quarter of the 2π inter-pole gap.
pub const MATCH_RADIUS: f64 = std::f64::consts::PI / 2.0;

/// Closed-form leading profile of one case.
#[derive(Debug, Clone, Copy)]
pub struct F0Form {
    pub case: PainleveCase,
    pub a: C64,
}

impl F0Form {
    pub fn new(case: PainleveCase, a: C64) -> F0Form {
        F0Form { case, a }
    }

    pub fn for_spec(spec: &EquationSpec) -> F0Form {
        F0Form {
            case: spec.case,
            a: spec.branch_a.unwrap_or(c64(1.0, 0.0)),
        }
    }

    pub fn eval(&self, xi: C64) -> C64 {
        let a = self.a;
        match self.case {
            PainleveCase::P3i => 2.0 * a * xi / (2.0 * a - xi),
            PainleveCase::P3ii => 36.0 * a * a * xi / (6.0 * a - xi).powu(2),
            PainleveCase::P41 => 4.0 * xi / (xi * xi + 2.0 * xi + 4.0),
            PainleveCase::P42 => 2.0 * xi / (xi + 2.0),
            PainleveCase::P43 => xi,
        }
    }

    pub fn eval_deriv(&self, xi: C64) -> C64 {
        let a = self.a;
        match self.case {
            PainleveCase::P3i => 4.0 * a * a / (2.0 * a - xi).powu(2),
            PainleveCase::P3ii => 36.0 * a * a * (6.0 * a + xi) / (6.0 * a - xi).powu(3),
            PainleveCase::P41 => {
                let q = xi * xi + 2.0 * xi + 4.0;
                4.0 * (4.0 - xi * xi) / (q * q)
            }
            PainleveCase::P42 => 4.0 / (xi + 2.0).powu(2),
            PainleveCase::P43 => c64(1.0, 0.0),
        }
    }

    pub fn eval_deriv2(&self, xi: C64) -> C64 {
        let a = self.a;
        match self.case {
            PainleveCase::P3i => 8.0 * a * a / (2.0 * a - xi).powu(3),
            PainleveCase::P3ii => 72.0 * a * a * (12.0 * a + xi) / (6.0 * a - xi).powu(4),
            PainleveCase::P41 => {
                let q = xi * xi + 2.0 * xi + 4.0;
                8.0 * (xi.powu(3) - 12.0 * xi - 8.0) / q.powu(3)
            }
            PainleveCase::P42 => -8.0 / (xi + 2.0).powu(3),
            PainleveCase::P43 => c64(0.0, 0.0),
        }
    }

    /// Singularities of `F₀` with orders; empty for the `F₀(ξ) = ξ` case.
    pub fn singular_set(&self) -> Vec<(C64, u32)> {
        let a = self.a;
        match self.case {
            PainleveCase::P3i => vec![(2.0 * a, 1)],
            PainleveCase::P3ii => vec![(6.0 * a, 2)],
            PainleveCase::P41 => vec![
                (c64(-1.0, -3f64.sqrt()), 1),
                (c64(-1.0, 3f64.sqrt()), 1),
            ],
            PainleveCase::P42 => vec![(c64(-2.0, 0.0), 1)],
            PainleveCase::P43 => Vec::new(),
        }
    }

    /// k-th Taylor coefficient of `F₀` at the origin (`k >= 1`).
    pub fn taylor_coeff(&self, k: usize) -> C64 {
        assert!(k >= 1);
        let a = self.a;
        match self.case {
            PainleveCase::P3i => (2.0 * a).powi(1 - k as i32),
            PainleveCase::P3ii => k as f64 * (6.0 * a).powi(1 - k as i32),
            PainleveCase::P41 => {
                // (ξ² + 2ξ + 4)·Σ cₖ ξᵏ = 4ξ
                let mut c = vec![c64(0.0, 0.0); k.max(2) + 1];
                c[1] = c64(1.0, 0.0);
                for m in 2..=k {
                    let prev2 = if m >= 2 { c[m - 2] } else { c64(0.0, 0.0) };
                    c[m] = -(2.0 * c[m - 1] + prev2) / 4.0;
                }
                c[k]
            }
            PainleveCase::P42 => c64(-0.5, 0.0).powi(k as i32 - 1),
            PainleveCase::P43 => {
                if k == 1 {
                    c64(1.0, 0.0)
                } else {
                    c64(0.0, 0.0)
                }
            }
        }
    }
}

/// Closed-form leading profile of a case (requires the case's branch
/// constant where applicable).
pub fn f0_closed_form(case: PainleveCase, a: C64) -> F0Form {
    F0Form::new(case, a)
}

/// Residual of the case's `F₀`-equation on the closed form at `ξ`.
pub fn f0_ode_residual(case: PainleveCase, a: C64, xi: C64) -> Result<C64> {
    let form = F0Form::new(case, a);
    for (s, _) in form.singular_set() {
        if (xi - s).norm() < 1e-8 {
            return Err(Error::Domain(format!("xi = {xi} is a singularity of F0")));
        }
    }
    let f = form.eval(xi);
    let fp = form.eval_deriv(xi);
    let fpp = form.eval_deriv2(xi);
    let xi2 = xi * xi;
    match case {
        PainleveCase::P3i => {
            let af = a + f;
            if af.norm() < 1e-12 {
                return Err(Error::Domain("A + F0 = 0".into()));
            }
            Ok(xi2 * fpp + xi * fp - xi2 * fp * fp / af - af.powu(3) / (4.0 * a * a)
                + 1.0 / (4.0 * a * a * af))
        }
        PainleveCase::P3ii => {
            let af = a + f;
            if af.norm() < 1e-12 {
                return Err(Error::Domain("A + F0 = 0".into()));
            }
            Ok(xi2 * fpp + xi * fp - xi2 * fp * fp / af - af.powu(2) / (3.0 * a)
                + 1.0 / (3.0 * a * af))
        }
        PainleveCase::P41 => {
            let q = 3.0 * f - 2.0;
            if q.norm() < 1e-12 {
                return Err(Error::Domain("3 F0 - 2 = 0".into()));
            }
            Ok(xi2 * fpp + xi * fp - 3.0 * xi2 * fp * fp / (2.0 * q)
                + q.powu(3) / 24.0
                + q.powu(2) / 3.0
                + q / 2.0)
        }
        PainleveCase::P42 => {
            let q = f - 2.0;
            if q.norm() < 1e-12 {
                return Err(Error::Domain("F0 - 2 = 0".into()));
            }
            Ok(xi2 * fpp + xi * fp - xi2 * fp * fp / (2.0 * q)
                - 3.0 * q.powu(3) / 8.0
                - q.powu(2)
                - q / 2.0)
        }
        PainleveCase::P43 => Err(Error::NotApplicable(
            "the profile F0(xi) = xi carries no defining equation here".into(),
        )),
    }
}

/// A predicted pole position in the w-plane.
#[derive(Debug, Clone, Copy)]
pub struct PolePrediction {
    pub n: usize,
    pub w_pred: C64,
    pub side: Side,
    pub refined: bool,
}

/// Outcome of a prediction request.
#[derive(Debug, Clone)]
pub enum Predictions {
    Poles(Vec<PolePrediction>),
    /// No poles are generated on this side (tritronquée mechanism).
    NonePredicted(&'static str),
}

impl Predictions {
    pub fn list(&self) -> &[PolePrediction] {
        match self {
            Predictions::Poles(v) => v,
            Predictions::NonePredicted(_) => &[],
        }
    }
}

/// Asymptotic pole positions `w_n = ±2nπi - β₁ ln(±2nπi) + ln C - ln ξ_s`
/// (principal logarithms).
pub fn predict_poles(
    beta1: C64,
    c: C64,
    xi_s: C64,
    side: Side,
    n_range: std::ops::RangeInclusive<usize>,
) -> Predictions {
    if c.norm() == 0.0 {
        return Predictions::NonePredicted("C = 0: no exponential level on this side");
    }
    let sign = match side {
        Side::Upper => 1.0,
        Side::Lower => -1.0,
    };
    // ln C - ln ξ_s with principal arguments, arranged so that common
    // positive real factors of (C, ξ_s) cancel exactly
    let log_ratio = c64((c.norm() / xi_s.norm()).ln(), c.arg() - xi_s.arg());
    let mut out = Vec::new();
    for n in n_range {
        if n == 0 {
            continue;
        }
        let base = c64(0.0, sign * 2.0 * n as f64 * std::f64::consts::PI);
        let w = base - beta1 * base.ln() + log_ratio;
        out.push(PolePrediction {
            n,
            w_pred: w,
            side,
            refined: false,
        });
    }
    Predictions::Poles(out)
}

#[derive(Debug, Clone, Copy)]
pub struct Refined {
    pub w: C64,
    pub converged: bool,
}

/// Newton-polish a predicted position by solving `C e^{-w} w^{-β₁} = ξ_s`
/// near the guess (the prediction formula is this equation's leading-order
/// solution).
pub fn refine_prediction(beta1: C64, c: C64, xi_s: C64, w_guess: C64) -> Refined {
    let mut w = w_guess;
    for _ in 0..40 {
        let xi = c * (-w).exp() * w.powc(-beta1);
        let f = xi - xi_s;
        let fp = xi * (-1.0 - beta1 / w);
        if fp.norm() == 0.0 {
            return Refined { w, converged: false };
        }
        let dw = f / fp;
        w -= dw;
        if dw.norm() < 1e-13 * (1.0 + w.norm()) {
            return Refined { w, converged: true };
        }
    }
    Refined {
        w: w_guess,
        converged: false,
    }
}

/// A predicted pole mapped back to the original x-plane.
#[derive(Debug, Clone, Copy)]
pub struct XPolePrediction {
    pub n: usize,
    pub w_pred: C64,
    pub x_pred: C64,
    /// Which singularity of F₀ generated this array (index into
    /// `singular_set`).
    pub array: usize,
}

/// Pole predictions transported to the x-plane through the case's inverse
/// change of variables.  `sheet` selects the branch of the inverse power.
pub fn predict_poles_x(
    spec: &EquationSpec,
    c: C64,
    side: Side,
    n_range: std::ops::RangeInclusive<usize>,
    sheet: i32,
) -> Result<Vec<XPolePrediction>> {
    if spec.case == PainleveCase::P43 {
        return Err(Error::NotApplicable(
            "PIV_3: the leading profile has no singularities; no pole array is predicted".into(),
        ));
    }
    let nf = spec.normalize()?;
    let form = F0Form::for_spec(spec);
    let mut out = Vec::new();
    for (idx, (xi_s, _)) in form.singular_set().into_iter().enumerate() {
        if let Predictions::Poles(list) = predict_poles(nf.beta1, c, xi_s, side, n_range.clone()) {
            for p in list {
                out.push(XPolePrediction {
                    n: p.n,
                    w_pred: p.w_pred,
                    x_pred: spec.map_w_to_x(p.w_pred, sheet)?,
                    array: idx,
                });
            }
        }
    }
    out.sort_by_key(|p| (p.n, p.array));
    Ok(out)
}

/// One matched pair in a comparison report.
#[derive(Debug, Clone, Copy)]
pub struct MatchedPole {
    pub n: usize,
    pub w_pred: C64,
    pub w_obs: C64,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub matches: Vec<MatchedPole>,
    pub unmatched_observed: usize,
    pub unmatched_predicted: usize,
    /// Whether the discrepancy decreases from the first matched index to the
    /// last (the asymptotic o(1) trend).
    pub trend_decreasing: bool,
}

/// Nearest-neighbour matching of observed poles against predictions within
/// [`MATCH_RADIUS`]; order-independent in the observed list.
pub fn compare_predictions(
    observed: &[PoleObservation],
    predicted: &[PolePrediction],
) -> ComparisonReport {
    let mut matches = Vec::new();
    let mut used = vec![false; observed.len()];
    for p in predicted {
        let mut best: Option<(usize, f64)> = None;
        for (i, o) in observed.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (o.location - p.w_pred).norm();
            if d <= MATCH_RADIUS && best.map(|(_, bd)| d < bd).unwrap_or(true) {
                best = Some((i, d));
            }
        }
        if let Some((i, d)) = best {
            used[i] = true;
            matches.push(MatchedPole {
                n: p.n,
                w_pred: p.w_pred,
                w_obs: observed[i].location,
                gap: d,
            });
        }
    }
    matches.sort_by_key(|m| m.n);
    let trend_decreasing = match (matches.first(), matches.last()) {
        (Some(a), Some(b)) if matches.len() >= 2 => b.gap <= a.gap,
        _ => false,
    };
    ComparisonReport {
        unmatched_observed: used.iter().filter(|u| !**u).count(),
        unmatched_predicted: predicted.len() - matches.len(),
        matches,
        trend_decreasing,
    }
}

/// End-to-end validation of the pole-position formula for one singularity of
/// `F₀`: predict the array, hunt each pole numerically, and match.
pub fn validate_pole_formula(
    nf: &crate::equations::NormalizedForm,
    rep: &crate::borel::TronqueeRep,
    c: C64,
    side: Side,
    xi_s: C64,
    n_range: std::ops::RangeInclusive<usize>,
    seed_offset: f64,
) -> Result<ComparisonReport> {
    let predictions = match predict_poles(nf.beta1, c, xi_s, side, n_range) {
        Predictions::Poles(p) => p,
        Predictions::NonePredicted(reason) => {
            return Err(Error::NotApplicable(reason.into()))
        }
    };
    let kind = crate::ode::SolutionKind::Tronquee { c, side };
    let mut observed = Vec::new();
    for p in &predictions {
        if let Ok(obs) = crate::ode::hunt_pole_near(nf, rep, kind, p.w_pred, seed_offset) {
            if obs.refined {
                observed.push(obs);
            }
        }
    }
    Ok(compare_predictions(&observed, &predictions))
}
