//! Cross-module consistency: the transseries level constants against the
//! closed-form leading profiles, Borel-plane singularity locations, and
//! property tests of the algebraic plumbing.

use proptest::prelude::*;
use tronq_core::asymptotics::F0Form;
use tronq_core::borel::{borel_transform, BorelFunction};
use tronq_core::c64;
use tronq_core::equations::{h_to_u, u_to_h, EquationSpec, PainleveCase};
use tronq_core::series::{compute_h0, compute_levels};
use tronq_core::C64;

fn test_spec(case: PainleveCase) -> EquationSpec {
    // nontrivial parameters so that h̃₀ does not collapse to zero
    match case {
        PainleveCase::P3i => EquationSpec::new(
            case,
            c64(0.4, 0.0),
            c64(0.3, 0.0),
            Some(c64(1.0, 0.0)),
        )
        .unwrap(),
        PainleveCase::P3ii => EquationSpec::new(
            case,
            c64(1.0, 0.0),
            c64(0.7, 0.0),
            Some(c64(1.0, 0.0)),
        )
        .unwrap(),
        PainleveCase::P41 => {
            EquationSpec::new(case, c64(0.3, 0.0), c64(0.5, 0.0), None).unwrap()
        }
        PainleveCase::P42 => {
            EquationSpec::new(case, c64(0.25, 0.0), c64(0.6, 0.0), None).unwrap()
        }
        PainleveCase::P43 => EquationSpec::new(
            case,
            c64(0.3, 0.0),
            c64(-2.0, 0.0),
            Some(c64(1.0, 0.0)),
        )
        .unwrap(),
    }
}

/// The level constants s_{k,0} are the Taylor coefficients of F₀ at 0
/// (the two-scale profile is F₀(ξ) = Σ_k s_{k,0} ξ^k).
#[test]
fn level_constants_match_f0_taylor_for_all_cases() {
    for case in PainleveCase::ALL {
        let spec = test_spec(case);
        let nf = spec.normalize().unwrap();
        let ts = compute_levels(&nf, 6, 12).unwrap();
        let f0 = F0Form::for_spec(&spec);
        for k in 1..=6usize {
            let got = ts.level(k).coeff(0);
            let want = f0.taylor_coeff(k);
            assert!(
                (got - want).norm() < 1e-10 * (1.0 + want.norm()),
                "{}: s_{{{k},0}} = {got}, F0 Taylor {want}",
                case.name()
            );
        }
    }
}

/// Worked instance: the ξ² coefficient of F₀ for PIII_i with A = 1 is 1/2.
#[test]
fn p3i_second_level_constant_is_one_half() {
    let spec = test_spec(PainleveCase::P3i);
    let ts = compute_levels(&spec.normalize().unwrap(), 2, 8).unwrap();
    assert!((ts.level(2).coeff(0) - 0.5).norm() < 1e-11);
}

/// The nearest Borel-plane singularity of ℬh̃₀ approaches ±1 as the
/// truncation order grows (singularities on Z⁺ ∪ Z⁻).
#[test]
fn borel_singularities_approach_unit_points() {
    let spec = test_spec(PainleveCase::P3ii);
    let nf = spec.normalize().unwrap();
    let mut last_dist = f64::INFINITY;
    for n in [16usize, 24, 40] {
        let h0 = compute_h0(&nf, n).unwrap();
        let bf = BorelFunction::from_series(&borel_transform(&h0).unwrap()).unwrap();
        let nearest = bf
            .pade
            .poles_pruned
            .iter()
            .map(|p| (p - c64(1.0, 0.0)).norm().min((p + c64(1.0, 0.0)).norm()))
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < last_dist + 0.02, "n={n}: {nearest} vs {last_dist}");
        last_dist = nearest;
    }
    assert!(last_dist < 0.05, "final distance {last_dist}");
}

proptest! {
    /// h ↔ u round trip wherever the substitution matrix is well-conditioned.
    #[test]
    fn htou_round_trip(
        wre in 2.0f64..50.0,
        wim in -30.0f64..30.0,
        b1re in -1.5f64..1.5,
        b2re in -1.5f64..1.5,
        hre in -2.0f64..2.0,
        him in -2.0f64..2.0,
    ) {
        let w = c64(wre, wim);
        let (b1, b2) = (c64(b1re, 0.3), c64(b2re, -0.2));
        let (h, hp) = (c64(hre, him), c64(him, -hre));
        let (u1, u2) = h_to_u(w, b1, b2, h, hp).unwrap();
        let (h2, hp2) = u_to_h(w, b1, b2, u1, u2).unwrap();
        prop_assert!((h2 - h).norm() < 1e-13 * (1.0 + h.norm()));
        prop_assert!((hp2 - hp).norm() < 1e-13 * (1.0 + hp.norm()));
    }

    /// Series arithmetic is consistent with pointwise evaluation.
    #[test]
    fn series_algebra_matches_pointwise(
        coeffs_a in proptest::collection::vec(-1.0f64..1.0, 6),
        coeffs_b in proptest::collection::vec(-1.0f64..1.0, 6),
    ) {
        use tronq_core::algebra::Ring;
        use tronq_core::series::FormalSeries;
        let mut a = FormalSeries::zero_window(1, 12);
        let mut b = FormalSeries::zero_window(0, 12);
        for (j, &v) in coeffs_a.iter().enumerate() {
            a.set_coeff(1 + j as i32, c64(v, -v / 2.0));
        }
        b.set_coeff(0, c64(1.0, 0.0)); // invertible
        for (j, &v) in coeffs_b.iter().enumerate() {
            b.set_coeff(1 + j as i32, c64(v / 2.0, v));
        }
        let w = c64(25.0, 7.0);
        let sum = a.add(&b).eval(w);
        prop_assert!((sum - (a.eval(w) + b.eval(w))).norm() < 1e-12);
        // product and reciprocal agree with pointwise values up to the
        // truncated tail, which is bounded by (1/|w|)^(known_end)
        let prod = a.mul(&b);
        let tail = (1.0 / w.norm()).powi(prod.known_end() as i32) * 4.0;
        prop_assert!((prod.eval(w) - a.eval(w) * b.eval(w)).norm() < 1e-10 + tail * 10.0);
        let recip = b.recip().unwrap();
        prop_assert!((recip.eval(w) * b.eval(w) - 1.0).norm() < 1e-8);
    }
}

/// The Borel-summed tronquée is a numerical solution for every case: the
/// canonical-equation residual stays below 1e-6 on admissible rays at small C.
#[test]
fn summed_solutions_solve_equation_for_all_cases() {
    use tronq_core::borel::{Side, TronqueeRep};
    for case in PainleveCase::ALL {
        let spec = test_spec(case);
        let nf = spec.normalize().unwrap();
        let ts = compute_levels(&nf, 3, 28).unwrap();
        let rep = TronqueeRep::build(&nf, &ts).unwrap();
        let c = c64(0.1, 0.0);
        for &(r, th) in &[(16.0, -0.2), (24.0, 0.3), (40.0, -0.4)] {
            let w = C64::from_polar(r, th);
            let jet = rep.eval(c, Side::Upper, w, 3).unwrap();
            let res = rep.residual(w, &jet).unwrap();
            assert!(
                res.norm() < 1e-6,
                "{}: residual {:.2e} at {w}",
                case.name(),
                res.norm()
            );
        }
    }
}

/// Closing the loop through the fitted constant: fit C from solution samples,
/// predict the pole array with the fitted value, and match detections.
#[test]
fn fitted_constant_feeds_pole_predictions() {
    use tronq_core::borel::{Side, TronqueeRep};
    let spec = test_spec(PainleveCase::P3ii);
    let spec = EquationSpec::new(spec.case, spec.alpha, c64(0.0, 0.0), spec.branch_a).unwrap();
    let nf = spec.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();
    let c_true = c64(1.0, 0.0);
    let samples: Vec<(C64, C64)> = (0..6)
        .map(|i| {
            let w = C64::from_polar(34.0 + 1.5 * i as f64, 1.35);
            let jet = rep
                .eval(c_true, tronq_core::borel::Side::Upper, w, 3)
                .unwrap();
            (w, jet.h)
        })
        .collect();
    let (c_fit, _) = tronq_core::ode::fit_constant(&nf, &ts, &samples).unwrap();
    assert!((c_fit - c_true).norm() < 5e-3);
    let report = tronq_core::asymptotics::validate_pole_formula(
        &nf,
        &rep,
        c_fit,
        Side::Upper,
        c64(6.0, 0.0),
        4..=8,
        6.0,
    )
    .unwrap();
    assert_eq!(report.matches.len(), 5);
    assert!(report.trend_decreasing);
    assert!(report.matches.last().unwrap().gap < 0.5);
}

/// Trajectory-level detection: a path aimed through a pole flags a blowup,
/// and the refinement recovers the same location the targeted hunt finds.
#[test]
fn detect_poles_from_blowup_trajectories() {
    use tronq_core::borel::{Side, TronqueeRep};
    use tronq_core::ode::{detect_poles, hunt_pole_near, integrate_path, seed_from_borel, PathSpec, SolutionKind};
    let spec = EquationSpec::new(
        PainleveCase::P3ii,
        c64(1.0, 0.0),
        c64(0.0, 0.0),
        Some(c64(1.0, 0.0)),
    )
    .unwrap();
    let nf = spec.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();
    let c = c64(1.0, 0.0);
    let pred = match tronq_core::asymptotics::predict_poles(
        nf.beta1,
        c,
        c64(6.0, 0.0),
        Side::Upper,
        5..=5,
    ) {
        tronq_core::asymptotics::Predictions::Poles(p) => p[0].w_pred,
        _ => unreachable!(),
    };
    let kind = SolutionKind::Tronquee {
        c,
        side: Side::Upper,
    };
    let reference = hunt_pole_near(&nf, &rep, kind, pred, 6.0).unwrap();
    // aim straight through the refined location to force the blowup flag
    let w0 = reference.location + 5.0;
    let (init, _) = seed_from_borel(&rep, c, Side::Upper, w0).unwrap();
    let path = PathSpec::line(w0, reference.location - 0.5, 1e-11, 1e-16);
    let traj = integrate_path(&nf, init, &path).unwrap();
    assert!(traj.blowup.is_some());
    let found = detect_poles(&nf, &[traj], 0.5);
    assert_eq!(found.len(), 1);
    assert!(found[0].refined);
    assert!(
        (found[0].location - reference.location).norm() < 1e-5,
        "{} vs {}",
        found[0].location,
        reference.location
    );
}

/// Pole locations are a property of the solution, not of the hunt: varying
/// the approach path and tolerances moves the refined location by no more
/// than the reported uncertainty scale.
#[test]
fn pole_location_invariant_under_approach() {
    use tronq_core::borel::{Side, TronqueeRep};
    use tronq_core::ode::{hunt_pole_near, SolutionKind};
    let spec = test_spec(PainleveCase::P3ii);
    let spec = EquationSpec::new(spec.case, spec.alpha, c64(0.0, 0.0), spec.branch_a).unwrap();
    let nf = spec.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();
    let c = c64(1.0, 0.0);
    let pred = match tronq_core::asymptotics::predict_poles(
        nf.beta1,
        c,
        c64(6.0, 0.0),
        Side::Upper,
        6..=6,
    ) {
        tronq_core::asymptotics::Predictions::Poles(p) => p[0].w_pred,
        _ => unreachable!(),
    };
    let kind = SolutionKind::Tronquee {
        c,
        side: Side::Upper,
    };
    let a = hunt_pole_near(&nf, &rep, kind, pred, 6.0).unwrap();
    let b = hunt_pole_near(&nf, &rep, kind, pred + c64(0.0, 0.4), 8.0).unwrap();
    assert!(a.refined && b.refined);
    let budget = 3.0 * a.uncertainty.max(b.uncertainty);
    assert!(
        (a.location - b.location).norm() < budget,
        "{} vs {} (budget {budget:.2e})",
        a.location,
        b.location
    );
    assert!(a.uncertainty < 1e-5 && b.uncertainty < 1e-5);
}

/// The tritronquée reflection: for a case with β₁ = β₂ the minus-side sum of
/// the reflected series matches the plus-side sum of the original,
/// h⁺(w) = ĥ⁻(-w).
#[test]
fn tritronquee_reflection_symmetry() {
    let spec = test_spec(PainleveCase::P3ii);
    let nf = spec.normalize().unwrap();
    let n = 26;
    let h0 = compute_h0(&nf, n).unwrap();
    // reflected series: ĥ₀(ŵ) = h̃₀(-ŵ) has coefficients (-1)^j h₀,j
    let mut reflected = tronq_core::series::FormalSeries::zero_window(2, n as i32);
    for j in 2..=n as i32 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        reflected.set_coeff(j, sign * h0.coeff(j));
    }
    let bf = BorelFunction::from_series(&borel_transform(&h0).unwrap()).unwrap();
    let bf_hat = BorelFunction::from_series(&borel_transform(&reflected).unwrap()).unwrap();
    // h⁺ at w (upper sector) via φ in (-π, 0); ĥ⁻ at -w via φ̂ = φ + π in (0, π)
    let w = C64::from_polar(24.0, 1.2);
    let phi = -1.0;
    let (hplus, _) = bf.laplace(w, phi, 0, 1e-12).unwrap();
    let (hhat_minus, _) = bf_hat
        .laplace(-w, phi + std::f64::consts::PI, 0, 1e-12)
        .unwrap();
    assert!(
        (hplus - hhat_minus).norm() < 1e-8,
        "{hplus} vs {hhat_minus}"
    );
}
