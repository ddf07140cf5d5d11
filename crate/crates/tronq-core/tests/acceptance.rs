//! Acceptance suite: every numbered criterion runs at its stated tolerance
//! and prints one PASS line (run with `--nocapture` to see the table; a
//! failed assertion marks the criterion red).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tronq_core::algebra::Ring;
use tronq_core::asymptotics::{
    compare_predictions, f0_ode_residual, predict_poles, validate_pole_formula, F0Form,
    Predictions,
};
use tronq_core::borel::{borel_transform, convolve, BorelFunction, Side, TriSide, TronqueeRep};
use tronq_core::c64;
use tronq_core::equations::{EquationSpec, NormalizedForm, PainleveCase};
use tronq_core::ode;
use tronq_core::series::{compute_h0, compute_levels, eqh_residual_tail, FormalSeries};
use tronq_core::C64;

fn spec(case: PainleveCase, alpha: f64, beta: f64, a: Option<f64>) -> EquationSpec {
    EquationSpec::new(
        case,
        c64(alpha, 0.0),
        c64(beta, 0.0),
        a.map(|v| c64(v, 0.0)),
    )
    .unwrap()
}

/// The standing PIII_ii instance of criteria 5–6: A = 1, β = 0, C = 0.3.
fn p3ii_standing() -> (NormalizedForm, TronqueeRep, C64) {
    let s = spec(PainleveCase::P3ii, 1.0, 0.0, Some(1.0));
    let nf = s.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();
    (nf, rep, c64(0.3, 0.0))
}

#[test]
fn criterion_01_leading_profile_equations() {
    let t0 = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for case in [
        PainleveCase::P3i,
        PainleveCase::P3ii,
        PainleveCase::P41,
        PainleveCase::P42,
    ] {
        let mut accepted = 0;
        while accepted < 100 {
            let xi = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            match f0_ode_residual(case, c64(1.0, 0.0), xi) {
                Ok(res) => {
                    assert!(
                        res.norm() < 1e-9,
                        "{case:?} at xi={xi}: residual {}",
                        res.norm()
                    );
                    worst = worst.max(res.norm());
                    accepted += 1;
                }
                Err(_) => continue, // outside the admissible domain
            }
        }
        // normalization holds exactly
        let f = F0Form::new(case, c64(1.0, 0.0));
        assert_eq!(f.eval(c64(0.0, 0.0)), c64(0.0, 0.0));
        assert_eq!(f.eval_deriv(c64(0.0, 0.0)), c64(1.0, 0.0));
    }
    println!(
        "acceptance 01 leading-profile equations: PASS (max residual {worst:.2e}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_02_series_residual_slope() {
    let t0 = std::time::Instant::now();
    let instances = [
        spec(PainleveCase::P3i, 0.1, 0.1, Some(1.0)),
        spec(PainleveCase::P3ii, 1.0, 0.7, Some(1.0)),
        spec(PainleveCase::P41, 0.3, 0.5, None),
        spec(PainleveCase::P42, 0.25, 0.6, None),
        spec(PainleveCase::P43, 0.3, -2.0, Some(1.0)),
    ];
    let n = 25usize; // truncation: exponents 2..=25, next order 26
    let mut report = String::new();
    for s in instances {
        let nf = s.normalize().unwrap();
        let h0 = compute_h0(&nf, n).unwrap();
        let tail = eqh_residual_tail(&nf, &h0, n).unwrap();
        let mut pts = Vec::new();
        for i in 0..12 {
            let r = 20.0 * 4.0f64.powf(i as f64 / 11.0);
            let w = C64::from_polar(r, 0.35);
            let (v, _, _) = tail.eval_optimal(w);
            pts.push((r.ln(), v.norm().ln()));
        }
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|(x, _)| x).sum();
        let sy: f64 = pts.iter().map(|(_, y)| y).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        let target = -(n as f64 + 1.0);
        assert!(
            (slope - target).abs() <= 0.05 * target.abs(),
            "{}: slope {slope:.2} not within 5% of {target}",
            s.case.name()
        );
        report.push_str(&format!("{} {:.2}  ", s.case.name(), slope));
    }
    println!(
        "acceptance 02 series residual slope -26±5%: PASS ({report}{:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_03_profile_transseries_link() {
    let t0 = std::time::Instant::now();
    let instances = [
        spec(PainleveCase::P3i, 0.4, 0.3, Some(1.0)),
        spec(PainleveCase::P3ii, 1.0, 0.7, Some(1.0)),
        spec(PainleveCase::P41, 0.3, 0.5, None),
        spec(PainleveCase::P42, 0.25, 0.6, None),
        spec(PainleveCase::P43, 0.3, -2.0, Some(1.0)),
    ];
    let mut worst: f64 = 0.0;
    for s in instances {
        let nf = s.normalize().unwrap();
        let ts = compute_levels(&nf, 6, 12).unwrap();
        let f0 = F0Form::for_spec(&s);
        for k in 1..=6usize {
            let got = ts.level(k).coeff(0);
            let want = f0.taylor_coeff(k);
            let dev = (got - want).norm();
            assert!(
                dev < 1e-10,
                "{} s_{{{k},0}}: {got} vs profile coefficient {want}",
                s.case.name()
            );
            worst = worst.max(dev);
        }
    }
    println!(
        "acceptance 03 profile<->transseries constants: PASS (max dev {worst:.2e}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_04_borel_laplace_identities() {
    let t0 = std::time::Instant::now();
    // product/convolution duality on 20 random truncated pairs
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst_conv: f64 = 0.0;
    for _ in 0..20 {
        let (ra, rb) = (rng.gen_range(1..4), rng.gen_range(1..4));
        let mut a = FormalSeries::zero_window(ra, 18);
        let mut b = FormalSeries::zero_window(rb, 18);
        for j in 0..9 {
            a.set_coeff(ra + j, c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            b.set_coeff(rb + j, c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        let direct = borel_transform(&a.mul(&b)).unwrap();
        let conv = convolve(&borel_transform(&a).unwrap(), &borel_transform(&b).unwrap()).unwrap();
        for (x, y) in direct.coeffs.iter().zip(&conv.coeffs) {
            let dev = (x - y).norm();
            assert!(dev < 1e-12, "convolution identity violated: {dev:.2e}");
            worst_conv = worst_conv.max(dev);
        }
    }
    // 1/w <-> 1∗ correspondence for three integrands on three rays
    let one_w = FormalSeries::monomial(1, c64(1.0, 0.0), 16);
    let integrands = [
        FormalSeries::monomial(1, c64(1.0, 0.0), 16),
        FormalSeries::monomial(2, c64(0.5, -1.0), 16),
        {
            let mut s = FormalSeries::zero_window(1, 16);
            s.set_coeff(1, c64(1.0, 0.0));
            s.set_coeff(2, c64(-2.0, 0.3));
            s.set_coeff(3, c64(0.7, 0.1));
            s
        },
    ];
    let mut worst_lap: f64 = 0.0;
    for f in &integrands {
        let bf = BorelFunction::from_series(&borel_transform(f).unwrap()).unwrap();
        let conv = convolve(&borel_transform(&one_w).unwrap(), &borel_transform(f).unwrap())
            .unwrap();
        let bconv = BorelFunction::from_series(&conv).unwrap();
        for phi in [-0.9, -0.3, 0.6] {
            let w = c64(3.0, 0.5);
            let (lf, _) = bf.laplace(w, phi, 0, 1e-12).unwrap();
            let (lc, _) = bconv.laplace(w, phi, 0, 1e-12).unwrap();
            let dev = (lc - lf / w).norm();
            assert!(dev < 1e-10, "1∗ identity violated on ray {phi}: {dev:.2e}");
            worst_lap = worst_lap.max(dev);
        }
    }
    println!(
        "acceptance 04 transform identities: PASS (conv {worst_conv:.2e}, laplace {worst_lap:.2e}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_05_summed_solution_solves_equation() {
    let t0 = std::time::Instant::now();
    let (_, rep, c) = p3ii_standing();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let r = 15.0 + 25.0 * i as f64 / 19.0;
        let w = C64::from_polar(r, -0.2);
        let jet = rep.eval(c, Side::Upper, w, 3).unwrap();
        let res = rep.residual(w, &jet).unwrap();
        assert!(
            res.norm() < 1e-6,
            "residual {:.2e} at |w| = {r}",
            res.norm()
        );
        worst = worst.max(res.norm());
    }
    println!(
        "acceptance 05 summed solution residual < 1e-6: PASS (max {worst:.2e}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_06_summation_integration_consistency() {
    let t0 = std::time::Instant::now();
    let (nf, rep, c) = p3ii_standing();
    let w0 = C64::from_polar(40.0, -0.2);
    let w1 = C64::from_polar(15.0, -0.2);
    let (init, _) = ode::seed_from_borel(&rep, c, Side::Upper, w0).unwrap();
    let path = ode::PathSpec::line(w0, w1, 1e-12, 0.0);
    let traj = ode::integrate_path(&nf, init, &path).unwrap();
    let mut worst_abs: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for i in 0..=10 {
        let r = 40.0 - 25.0 * i as f64 / 10.0;
        let w = C64::from_polar(r, -0.2);
        let (h, _) = traj.sample(w).expect("checkpoint on path");
        let jet = rep.eval(c, Side::Upper, w, 3).unwrap();
        let d = (h - jet.h).norm();
        assert!(d < 1e-6, "|difference| {d:.2e} at |w| = {r}");
        worst_abs = worst_abs.max(d);
        worst_rel = worst_rel.max(d / jet.h.norm());
    }
    println!(
        "acceptance 06 summation<->integration to 1e-6: PASS (abs {worst_abs:.2e}, rel {worst_rel:.2e}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_07_constant_recovery() {
    let t0 = std::time::Instant::now();
    let instances = [
        spec(PainleveCase::P3ii, 1.0, 0.0, Some(1.0)),
        spec(PainleveCase::P42, 0.25, 0.6, None),
    ];
    let mut worst: f64 = 0.0;
    for s in instances {
        let nf = s.normalize().unwrap();
        let ts = compute_levels(&nf, 3, 30).unwrap();
        let rep = TronqueeRep::build(&nf, &ts).unwrap();
        for cval in [0.1, 0.37, 1.0, 3.0] {
            let c = c64(cval, 0.0);
            let samples: Vec<(C64, C64)> = (0..8)
                .map(|i| {
                    let w = C64::from_polar(34.0 + 1.5 * i as f64, 1.35);
                    let jet = rep.eval(c, Side::Upper, w, 3).unwrap();
                    (w, jet.h)
                })
                .collect();
            let (c_est, _) = ode::fit_constant(&nf, &ts, &samples).unwrap();
            let rel = (c_est - c).norm() / cval;
            assert!(
                rel < 0.005,
                "{} C={cval}: recovered {c_est}, rel err {rel:.2e}",
                s.case.name()
            );
            worst = worst.max(rel);
        }
    }
    println!(
        "acceptance 07 constant recovery to 0.5%: PASS (worst rel {worst:.2e}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_08_pole_formula_validation() {
    let t0 = std::time::Instant::now();
    // PIII_ii, A = 1, C = 1: first array near arg w = π/2, n = 3..12
    let s = spec(PainleveCase::P3ii, 1.0, 0.0, Some(1.0));
    let nf = s.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();
    let c = c64(1.0, 0.0);
    let report =
        validate_pole_formula(&nf, &rep, c, Side::Upper, c64(6.0, 0.0), 3..=12, 6.0).unwrap();
    assert_eq!(report.matches.len(), 10, "all ten indices must match");
    for pair in report.matches.windows(2) {
        assert!(
            pair[1].gap <= pair[0].gap + 1e-6,
            "gap must decrease: n={} {:.4} -> n={} {:.4}",
            pair[0].n,
            pair[0].gap,
            pair[1].n,
            pair[1].gap
        );
    }
    let last = report.matches.last().unwrap();
    assert!(last.gap < 0.5, "largest-n gap {:.3}", last.gap);
    let p3ii_last_gap = last.gap;

    // PIV_1: both interleaved arrays (ξ_s = -1 ∓ √3 i) matched jointly
    let s = spec(PainleveCase::P41, 0.0, 0.0, None);
    let nf = s.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();
    let f0 = F0Form::for_spec(&s);
    let mut predictions = Vec::new();
    let mut observed = Vec::new();
    for (xi_s, _) in f0.singular_set() {
        if let Predictions::Poles(list) = predict_poles(nf.beta1, c, xi_s, Side::Upper, 4..=8) {
            for p in &list {
                let kind = ode::SolutionKind::Tronquee {
                    c,
                    side: Side::Upper,
                };
                let obs = ode::hunt_pole_near(&nf, &rep, kind, p.w_pred, 6.0).unwrap();
                assert!(obs.refined, "n={} hunt failed", p.n);
                observed.push(obs);
            }
            predictions.extend(list);
        }
    }
    let joint = compare_predictions(&observed, &predictions);
    assert_eq!(
        joint.matches.len(),
        predictions.len(),
        "both arrays fully matched"
    );
    let worst_gap = joint.matches.iter().map(|m| m.gap).fold(0.0, f64::max);
    assert!(worst_gap < 0.5);
    println!(
        "acceptance 08 pole-position formulas: PASS (PIII_ii last gap {p3ii_last_gap:.3}, PIV_1 joint worst {worst_gap:.3}, {:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_09_tritronquee_sector() {
    let t0 = std::time::Instant::now();
    let s = spec(PainleveCase::P3ii, 1.0, 0.7, Some(1.0));
    let nf = s.normalize().unwrap();
    let ts = compute_levels(&nf, 3, 30).unwrap();
    let rep = TronqueeRep::build(&nf, &ts).unwrap();

    // ray agreement at 10 overlap points with arg w near π/2
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let r = 20.0 + 15.0 * i as f64 / 9.0;
        let w = C64::from_polar(r, 1.45 + 0.02 * i as f64);
        let a = rep
            .tritronquee(TriSide::Plus, w, Some(-std::f64::consts::FRAC_PI_4))
            .unwrap();
        let b = rep
            .tritronquee(TriSide::Plus, w, Some(-3.0 * std::f64::consts::FRAC_PI_4))
            .unwrap();
        let d = (a.h - b.h).norm();
        assert!(d < 1e-8, "ray disagreement {d:.2e} at {w}");
        worst = worst.max(d);
    }

    // pole-free sweep of arg w in [-π/4, 5π/4], |w| in [20, 35]
    let mut segments = Vec::new();
    for i in 0..5 {
        let r = 20.5 + 3.5 * i as f64;
        segments.extend(ode::arc_segments(
            r,
            -std::f64::consts::FRAC_PI_4,
            5.0 * std::f64::consts::FRAC_PI_4,
            3.0,
        ));
    }
    let report = ode::sweep_segments(
        &nf,
        &rep,
        ode::SolutionKind::Tritronquee {
            side: TriSide::Plus,
        },
        &segments,
        0.5,
        0.5,
    )
    .unwrap();
    assert!(
        report.poles.is_empty(),
        "tritronquée sector must be pole-free, found {:?}",
        report.poles
    );
    println!(
        "acceptance 09 tritronquée sector: PASS (ray agreement {worst:.2e}, {} segments pole-free, max|h| {:.2e}, {:?})",
        report.segments,
        report.max_h,
        t0.elapsed()
    );
}

#[test]
fn criterion_10_half_plane_dichotomy() {
    let t0 = std::time::Instant::now();
    // PIV_2 with real α: Re β₁ = α + 1/2 changes sign at α = -1/2
    let mut counts = Vec::new();
    for alpha in [-1.0, 0.0] {
        let s = spec(PainleveCase::P42, alpha, 0.1, None);
        let nf = s.normalize().unwrap();
        let ts = compute_levels(&nf, 3, 30).unwrap();
        let rep = TronqueeRep::build(&nf, &ts).unwrap();
        let mut segments = Vec::new();
        let mut im = 60.0;
        while im <= 126.0 {
            segments.push((c64(6.0, im), c64(0.3, im)));
            im += 2.0;
        }
        let report = ode::sweep_segments(
            &nf,
            &rep,
            ode::SolutionKind::Tronquee {
                c: c64(1.0, 0.0),
                side: Side::Upper,
            },
            &segments,
            0.5,
            0.5,
        )
        .unwrap();
        let inside = report
            .poles
            .iter()
            .filter(|p| p.location.re > 0.0 && p.location.re < 5.0)
            .count();
        counts.push(inside);
    }
    assert!(
        counts[0] >= 3,
        "Re β₁ < 0 must show poles in the right half-plane window, found {}",
        counts[0]
    );
    assert_eq!(
        counts[1], 0,
        "Re β₁ > 0 must be pole-free in the matched window"
    );
    println!(
        "acceptance 10 half-plane dichotomy: PASS (α=-1: {} poles, α=0: {} poles, {:?})",
        counts[0],
        counts[1],
        t0.elapsed()
    );
}
