//! Padé approximation of a Taylor series with pole bookkeeping.
//!
//! The Borel-plane continuation used throughout is a near-diagonal Padé
//! approximant of the (convergent) Borel transform.  Poles and zeros of the
//! rational function are located with a Durand–Kerner iteration; spurious
//! pole/zero doublets (numerical artifacts of an over-determined table) are
//! pruned before any ray-admissibility decision.

use crate::error::Result;
use crate::{c64, C64};

/// Distance below which a pole/zero pair is considered a spurious doublet.
pub const DOUBLET_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct PadeRational {
    /// Numerator coefficients, ascending powers.
    pub num: Vec<C64>,
    /// Denominator coefficients, ascending powers; den[0] = 1.
    pub den: Vec<C64>,
    /// All denominator roots.
    pub poles: Vec<C64>,
    /// Numerator roots.
    pub zeros: Vec<C64>,
    /// Poles surviving doublet pruning (the physically meaningful ones).
    pub poles_pruned: Vec<C64>,
    /// Set when the requested order was degenerate and had to be reduced.
    pub reduced: bool,
}

impl PadeRational {
    pub fn eval(&self, p: C64) -> C64 {
        horner(&self.num, p) / horner(&self.den, p)
    }

    /// Minimum distance from the ray `t e^{iφ}, t ∈ [0, cap]` to any
    /// non-spurious pole.
    pub fn ray_pole_distance(&self, phi: f64, cap: f64) -> f64 {
        let dir = C64::from_polar(1.0, phi);
        self.poles_pruned
            .iter()
            .map(|&z| {
                // distance from z to the segment [0, cap·dir]
                let t = (z * dir.conj()).re.clamp(0.0, cap);
                (z - t * dir).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn horner(coeffs: &[C64], p: C64) -> C64 {
    let mut acc = c64(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * p + c;
    }
    acc
}

/// Solve a dense complex linear system by Gaussian elimination with partial
/// pivoting.  Returns `None` when a pivot falls below `tol` (degenerate).
fn solve_dense(mut a: Vec<Vec<C64>>, mut b: Vec<C64>, tol: f64) -> Option<Vec<C64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, piv_mag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if piv_mag < tol {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot_row = a[col].clone();
        for r in col + 1..n {
            let f = a[r][col] / pivot_row[col];
            if f.norm() == 0.0 {
                continue;
            }
            for (x, pv) in a[r][col..n].iter_mut().zip(&pivot_row[col..n]) {
                *x -= f * pv;
            }
            let bc = b[col];
            b[r] -= f * bc;
        }
    }
    let mut x = vec![c64(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// All roots of a polynomial (ascending coefficients) by Durand–Kerner with
/// Newton polishing.  Exact roots at the origin (leading zero coefficients)
/// are split off first; iterates are kept inside the Cauchy root bound.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    // trailing (high-degree) zeros reduce the degree
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() < 1e-14 * scale {
        deg -= 1;
    }
    // leading (low-order) zeros are roots at the origin
    let mut zero_roots = 0usize;
    while zero_roots < deg && coeffs[zero_roots].norm() < 1e-300 * scale {
        zero_roots += 1;
    }
    let mut roots = vec![c64(0.0, 0.0); zero_roots];
    let deg_eff = deg - zero_roots;
    if deg_eff == 0 {
        return roots;
    }
    let lead = coeffs[deg];
    let monic: Vec<C64> = coeffs[zero_roots..=deg].iter().map(|c| c / lead).collect();
    let eval = |z: C64| horner(&monic, z);
    let bound = 1.0
        + monic[..deg_eff]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);

    // start on a slightly irrational circle inside the root bound
    let r0 = monic[0].norm().powf(1.0 / deg_eff as f64).clamp(0.3, bound);
    let mut z: Vec<C64> = (0..deg_eff)
        .map(|i| C64::from_polar(r0, 0.41 + 2.0 * std::f64::consts::PI * i as f64 / deg_eff as f64))
        .collect();
    for _ in 0..800 {
        let mut moved: f64 = 0.0;
        for i in 0..deg_eff {
            let mut denom = c64(1.0, 0.0);
            for j in 0..deg_eff {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 || !denom.is_finite() {
                z[i] = C64::from_polar(0.7 * bound, 2.1 * i as f64 + 0.3);
                moved = f64::INFINITY;
                continue;
            }
            let delta = eval(z[i]) / denom;
            let mut next = z[i] - delta;
            if !next.is_finite() || next.norm() > 4.0 * bound {
                next = C64::from_polar(0.9 * bound, 1.7 * i as f64 + 0.9);
            }
            moved = moved.max((next - z[i]).norm());
            z[i] = next;
        }
        if moved < 1e-14 {
            break;
        }
    }
    // Newton polish against the original polynomial
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let p = eval(*zi);
            let mut dp = c64(0.0, 0.0);
            for (k, c) in monic.iter().enumerate().skip(1) {
                dp += c * k as f64 * zi.powu(k as u32 - 1);
            }
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.norm() > bound {
                break;
            }
            *zi -= step;
        }
    }
    roots.extend(z.into_iter().filter(|r| r.is_finite()));
    roots
}

/// Build the `[num_deg / den_deg]` Padé approximant of the Taylor series
/// `Σ coeffs[n] p^n`.  Degenerate denominator systems fall back to smaller
/// denominator degrees (flagged in the result).
pub fn pade_from_taylor(coeffs: &[C64], num_deg: usize, den_deg: usize) -> Result<PadeRational> {
    assert!(
        coeffs.len() > num_deg + den_deg,
        "need {} Taylor coefficients, have {}",
        num_deg + den_deg + 1,
        coeffs.len()
    );
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        // identically zero series
        return Ok(PadeRational {
            num: vec![c64(0.0, 0.0)],
            den: vec![c64(1.0, 0.0)],
            poles: Vec::new(),
            zeros: Vec::new(),
            poles_pruned: Vec::new(),
            reduced: false,
        });
    }
    let c = |i: i64| -> C64 {
        if i < 0 {
            c64(0.0, 0.0)
        } else {
            coeffs.get(i as usize).copied().unwrap_or(c64(0.0, 0.0))
        }
    };

    let mut m = den_deg;
    let l = num_deg;
    loop {
        if m == 0 {
            let num: Vec<C64> = coeffs[..=l].to_vec();
            let zeros = poly_roots(&num);
            return Ok(PadeRational {
                num,
                den: vec![c64(1.0, 0.0)],
                poles: Vec::new(),
                zeros,
                poles_pruned: Vec::new(),
                reduced: m != den_deg,
            });
        }
        // q_1..q_M from Σ_{j=0..M} q_j c_{L+i-j} = 0, i = 1..M  (q_0 = 1)
        let a: Vec<Vec<C64>> = (1..=m)
            .map(|i| (1..=m).map(|j| c(l as i64 + i as i64 - j as i64)).collect())
            .collect();
        let rhs: Vec<C64> = (1..=m).map(|i| -c(l as i64 + i as i64)).collect();
        match solve_dense(a, rhs, 1e-13 * scale) {
            Some(q) => {
                let mut den = Vec::with_capacity(m + 1);
                den.push(c64(1.0, 0.0));
                den.extend(q);
                let num: Vec<C64> = (0..=l)
                    .map(|i| {
                        (0..=m.min(i))
                            .map(|j| den[j] * c(i as i64 - j as i64))
                            .sum()
                    })
                    .collect();
                let poles = poly_roots(&den);
                let zeros = poly_roots(&num);
                let poles_pruned: Vec<C64> = poles
                    .iter()
                    .copied()
                    .filter(|&p| {
                        p.is_finite()
                            && zeros.iter().filter(|z| z.is_finite()).all(|&z| {
                                (p - z).norm() >= DOUBLET_TOL.max(1e-10 * p.norm())
                            })
                    })
                    .collect();
                return Ok(PadeRational {
                    num,
                    den,
                    poles,
                    zeros,
                    poles_pruned,
                    reduced: m != den_deg,
                });
            }
            None => m -= 1, // degenerate: retry with a smaller denominator
        }
    }
}
