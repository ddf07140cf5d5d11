//! Built-in invariant battery: one line per check, exit status reflects the
//! table.  Sampling is deterministic for a given seed.

use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tronq_core::algebra::Ring;
use tronq_core::asymptotics::{f0_ode_residual, predict_poles, F0Form};
use tronq_core::borel::Side;
use tronq_core::borel::{borel_transform, convolve, BorelFunction, TronqueeRep};
use tronq_core::equations::{h_to_u, u_to_h, EquationSpec, PainleveCase};
use tronq_core::series::{compute_levels, FormalSeries};
use tronq_core::special::gamma;

fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

struct Table {
    all_ok: bool,
}

impl Table {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {:44} {}", if ok { "PASS" } else { "FAIL" }, name, detail);
        self.all_ok &= ok;
    }
}

fn spec(case: PainleveCase) -> EquationSpec {
    match case {
        PainleveCase::P3i => {
            EquationSpec::new(case, c64(0.4, 0.0), c64(0.3, 0.0), Some(c64(1.0, 0.0))).unwrap()
        }
        PainleveCase::P3ii => {
            EquationSpec::new(case, c64(1.0, 0.0), c64(0.7, 0.0), Some(c64(1.0, 0.0))).unwrap()
        }
        PainleveCase::P41 => {
            EquationSpec::new(case, c64(0.3, 0.0), c64(0.5, 0.0), None).unwrap()
        }
        PainleveCase::P42 => {
            EquationSpec::new(case, c64(0.25, 0.0), c64(0.6, 0.0), None).unwrap()
        }
        PainleveCase::P43 => {
            EquationSpec::new(case, c64(0.3, 0.0), c64(-2.0, 0.0), Some(c64(1.0, 0.0))).unwrap()
        }
    }
}

pub fn run(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table { all_ok: true };

    // gamma identities
    {
        let sqrt_pi_err = (gamma(c64(0.5, 0.0)).unwrap() - std::f64::consts::PI.sqrt()).norm();
        let fact_err = (gamma(c64(6.0, 0.0)).unwrap() - 120.0).norm() / 120.0;
        table.check(
            "gamma-known-values",
            sqrt_pi_err < 1e-12 && fact_err < 1e-12,
            format!("sqrt(pi) err {sqrt_pi_err:.1e}, 5! err {fact_err:.1e}"),
        );
    }

    // leading-profile closed forms satisfy their equations
    {
        let mut worst: f64 = 0.0;
        for case in [
            PainleveCase::P3i,
            PainleveCase::P3ii,
            PainleveCase::P41,
            PainleveCase::P42,
        ] {
            for _ in 0..25 {
                let xi = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                if let Ok(res) = f0_ode_residual(case, c64(1.0, 0.0), xi) {
                    worst = worst.max(res.norm());
                }
            }
        }
        table.check(
            "leading-profile-equations",
            worst < 1e-9,
            format!("max residual {worst:.1e}"),
        );
    }

    // normalization of the profiles
    {
        let ok = PainleveCase::ALL.iter().all(|&case| {
            let f = F0Form::new(case, c64(1.0, 0.0));
            f.eval(c64(0.0, 0.0)).norm() == 0.0
                && (f.eval_deriv(c64(0.0, 0.0)) - 1.0).norm() < 1e-14
        });
        table.check("leading-profile-normalization", ok, String::new());
    }

    // series recursion against embedded reference coefficients
    {
        let goldens = tronq_core::io::load_h0_goldens();
        let mut worst: f64 = 0.0;
        for inst in &goldens {
            let nf = inst.spec.normalize().unwrap();
            let h0 = tronq_core::series::compute_h0(&nf, 10).unwrap();
            for (j, want) in &inst.coeffs {
                worst = worst.max((h0.coeff(*j) - want).norm() / want.norm().max(1.0));
            }
        }
        table.check(
            "series-recursion-reference",
            worst < 1e-10,
            format!("max rel deviation {worst:.1e}"),
        );
    }

    // level constants = profile Taylor coefficients
    {
        let mut worst: f64 = 0.0;
        for case in PainleveCase::ALL {
            let s = spec(case);
            let ts = compute_levels(&s.normalize().unwrap(), 4, 10).unwrap();
            let f0 = F0Form::for_spec(&s);
            for k in 1..=4usize {
                let want = f0.taylor_coeff(k);
                worst =
                    worst.max((ts.level(k).coeff(0) - want).norm() / (1.0 + want.norm()));
            }
        }
        table.check(
            "level-constants-vs-profile",
            worst < 1e-10,
            format!("max deviation {worst:.1e}"),
        );
    }

    // product/convolution duality
    {
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let mut a = FormalSeries::zero_window(1, 16);
            let mut b = FormalSeries::zero_window(2, 16);
            for j in 0..8 {
                a.set_coeff(1 + j, c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                b.set_coeff(2 + j, c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
            let direct = borel_transform(&a.mul(&b)).unwrap();
            let conv = convolve(&borel_transform(&a).unwrap(), &borel_transform(&b).unwrap())
                .unwrap();
            for (x, y) in direct.coeffs.iter().zip(&conv.coeffs) {
                worst = worst.max((x - y).norm());
            }
        }
        table.check(
            "borel-convolution-duality",
            worst < 1e-12,
            format!("max deviation {worst:.1e}"),
        );
    }

    // ray-rotation invariance of the Laplace transform
    {
        let s = spec(PainleveCase::P3ii);
        let nf = s.normalize().unwrap();
        let h0 = tronq_core::series::compute_h0(&nf, 24).unwrap();
        let bf = BorelFunction::from_series(&borel_transform(&h0).unwrap()).unwrap();
        let w = C64::from_polar(22.0, -0.6);
        let mut worst: f64 = 0.0;
        let (base, _) = bf.laplace(w, 0.3, 0, 1e-12).unwrap();
        for phi in [0.7, 1.2] {
            let (v, _) = bf.laplace(w, phi, 0, 1e-12).unwrap();
            worst = worst.max((v - base).norm());
        }
        table.check(
            "laplace-ray-rotation",
            worst < 1e-9,
            format!("max deviation {worst:.1e}"),
        );
    }

    // canonical-equation residual of the Borel-summed solution
    {
        let s = EquationSpec::new(
            PainleveCase::P3ii,
            c64(1.0, 0.0),
            c64(0.0, 0.0),
            Some(c64(1.0, 0.0)),
        )
        .unwrap();
        let nf = s.normalize().unwrap();
        let ts = compute_levels(&nf, 3, 30).unwrap();
        let rep = TronqueeRep::build(&nf, &ts).unwrap();
        let mut worst: f64 = 0.0;
        for r in [16.0, 24.0, 36.0] {
            let w = C64::from_polar(r, -0.2);
            let jet = rep.eval(c64(0.3, 0.0), Side::Upper, w, 3).unwrap();
            worst = worst.max(rep.residual(w, &jet).unwrap().norm());
        }
        table.check(
            "summed-solution-residual",
            worst < 1e-6,
            format!("max residual {worst:.1e}"),
        );
    }

    // substitution matrix round trip
    {
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let w = c64(rng.gen_range(3.0..40.0), rng.gen_range(-20.0..20.0));
            let b1 = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
            let b2 = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
            let h = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let hp = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if let Ok((u1, u2)) = h_to_u(w, b1, b2, h, hp) {
                let (h2, hp2) = u_to_h(w, b1, b2, u1, u2).unwrap();
                worst = worst.max((h2 - h).norm().max((hp2 - hp).norm()));
            }
        }
        table.check(
            "substitution-round-trip",
            worst < 1e-13,
            format!("max deviation {worst:.1e}"),
        );
    }

    // prediction structure: 2πi spacing and scale invariance
    {
        let preds = predict_poles(c64(0.5, 0.0), c64(1.0, 0.0), c64(6.0, 0.0), Side::Upper, 40..=60);
        let list = preds.list();
        let mut worst: f64 = 0.0;
        for pair in list.windows(2) {
            worst = worst.max(
                (pair[1].w_pred - pair[0].w_pred - c64(0.0, 2.0 * std::f64::consts::PI)).norm(),
            );
        }
        let doubled =
            predict_poles(c64(0.5, 0.0), c64(2.0, 0.0), c64(12.0, 0.0), Side::Upper, 40..=60);
        let invariant = list
            .iter()
            .zip(doubled.list())
            .all(|(a, b)| a.w_pred == b.w_pred);
        table.check(
            "pole-prediction-structure",
            worst < 0.05 && invariant,
            format!("spacing deviation {worst:.1e}, scale-invariant {invariant}"),
        );
    }

    println!(
        "{}",
        if table.all_ok {
            "selftest: all checks passed"
        } else {
            "selftest: FAILURES PRESENT"
        }
    );
    table.all_ok
}
