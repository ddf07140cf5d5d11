//! Truncated formal power series in `1/w` and the transseries recursions.
//!
//! A [`FormalSeries`] tracks which coefficients are actually known: the
//! element is `Σ coeffs[i]·w^(-(offset+i))` plus an unknown tail
//! `O(w^(-(offset+len)))`, and arithmetic propagates the honest window.
//!
//! [`LevelExpansion`] is the same algebra extended by a nilpotent symbol
//! carrying the exponential `C e^{-w} w^{-β₁}`; its twisted derivative is
//! what turns the canonical equation into the level-by-level recursion for
//! the series `s̃ₖ`.

use crate::algebra::Ring;
use crate::equations::NormalizedForm;
use crate::error::{Error, Result};
use crate::{c64, C64};

const ZERO_OFFSET: i32 = i32::MAX / 4; // sentinel for the exact zero series

/// Truncated series `Σ_{i} coeffs[i] w^(-(offset+i)) + O(w^(-(offset+len)))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    offset: i32,
    coeffs: Vec<C64>,
}

impl FormalSeries {
    /// Series with given lowest exponent and coefficients.
    pub fn new(offset: i32, coeffs: Vec<C64>) -> Self {
        FormalSeries { offset, coeffs }
    }

    /// The exact zero series (known to all orders).
    pub fn zero_exact() -> Self {
        FormalSeries {
            offset: ZERO_OFFSET,
            coeffs: Vec::new(),
        }
    }

    /// Zero series with an explicit window `[offset, horizon]`.
    pub fn zero_window(offset: i32, horizon: i32) -> Self {
        FormalSeries {
            offset,
            coeffs: vec![c64(0.0, 0.0); (horizon - offset + 1).max(0) as usize],
        }
    }

    /// `c · w^(-exponent)`, known through `horizon`.
    pub fn monomial(exponent: i32, c: C64, horizon: i32) -> Self {
        let mut s = Self::zero_window(exponent, horizon);
        if !s.coeffs.is_empty() {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn is_zero_exact(&self) -> bool {
        self.offset == ZERO_OFFSET
    }

    pub fn offset(&self) -> i32 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent just past the known window.
    pub fn known_end(&self) -> i64 {
        if self.is_zero_exact() {
            i64::from(ZERO_OFFSET) * 2
        } else {
            i64::from(self.offset) + self.coeffs.len() as i64
        }
    }

    /// Coefficient of `w^(-exponent)` (zero outside the stored range; the
    /// caller is responsible for staying inside the known window).
    pub fn coeff(&self, exponent: i32) -> C64 {
        if self.is_zero_exact() {
            return c64(0.0, 0.0);
        }
        let i = exponent - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            c64(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn set_coeff(&mut self, exponent: i32, c: C64) {
        let i = exponent - self.offset;
        assert!(i >= 0 && (i as usize) < self.coeffs.len(), "exponent outside window");
        self.coeffs[i as usize] = c;
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Drop leading exactly-zero coefficients (normalizing the offset).
    fn trimmed(&self) -> FormalSeries {
        if self.is_zero_exact() {
            return self.clone();
        }
        let nz = self.coeffs.iter().position(|c| c.norm() != 0.0);
        match nz {
            None => FormalSeries {
                // all-zero within the window: zero known up to the window end
                offset: (self.known_end().min(i64::from(ZERO_OFFSET))) as i32,
                coeffs: Vec::new(),
            },
            Some(k) => FormalSeries {
                offset: self.offset + k as i32,
                coeffs: self.coeffs[k..].to_vec(),
            },
        }
    }

    /// Restrict to exponents `[lo, hi]` (coefficients outside the known
    /// window must not be requested; zero-fill below the offset is exact
    /// only when the series is known there).
    pub fn window(&self, lo: i32, hi: i32) -> FormalSeries {
        let mut coeffs = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for e in lo..=hi {
            coeffs.push(self.coeff(e));
        }
        FormalSeries { offset: lo, coeffs }
    }

    /// Multiply by the exact monomial `w^(-shift)`.
    pub fn shift(&self, shift: i32) -> FormalSeries {
        if self.is_zero_exact() {
            return self.clone();
        }
        FormalSeries {
            offset: self.offset + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Term-by-term derivative d/dw.
    pub fn differentiate(&self) -> FormalSeries {
        if self.is_zero_exact() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * c64(-f64::from(self.offset + i as i32), 0.0))
            .collect();
        FormalSeries {
            offset: self.offset + 1,
            coeffs,
        }
    }

    /// Plain evaluation: sum of all stored terms at `w`.
    pub fn eval(&self, w: C64) -> C64 {
        // Horner from the deepest power
        let inv = 1.0 / w;
        let mut acc = c64(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * inv + c;
        }
        acc * inv.powi(self.offset)
    }

    /// Optimal-truncation evaluation: stop before the smallest-magnitude
    /// term; ties break toward fewer terms.  Returns `(value, first omitted
    /// term magnitude, terms used)`.
    pub fn eval_optimal(&self, w: C64) -> (C64, f64, usize) {
        let inv = 1.0 / w;
        let mut pw = inv.powi(self.offset);
        let mut best_end = self.coeffs.len();
        let mut min_term = f64::INFINITY;
        let mut terms: Vec<C64> = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            terms.push(c * pw);
            pw *= inv;
        }
        for (i, t) in terms.iter().enumerate() {
            let m = t.norm();
            if m > 0.0 && m < min_term {
                min_term = m;
                best_end = i; // stop *before* the smallest term
            }
        }
        // if magnitudes only decrease, use everything
        if best_end + 1 == terms.len() || min_term == f64::INFINITY {
            best_end = terms.len();
        }
        let value = terms[..best_end].iter().sum();
        let err = if best_end < terms.len() {
            terms[best_end].norm()
        } else {
            terms.last().map(|t| t.norm()).unwrap_or(0.0)
        };
        (value, err, best_end)
    }
}

impl Ring for FormalSeries {
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero_exact() {
            return rhs.clone();
        }
        if rhs.is_zero_exact() {
            return self.clone();
        }
        let offset = self.offset.min(rhs.offset);
        let end = self.known_end().min(rhs.known_end());
        let mut coeffs = Vec::with_capacity((end - i64::from(offset)).max(0) as usize);
        let mut e = offset;
        while i64::from(e) < end {
            coeffs.push(self.coeff(e) + rhs.coeff(e));
            e += 1;
        }
        FormalSeries { offset, coeffs }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero_exact() || rhs.is_zero_exact() {
            return FormalSeries::zero_exact();
        }
        let a = self.trimmed();
        let b = rhs.trimmed();
        if a.is_zero_exact() || b.is_zero_exact() {
            // zero up to the trimmed window
            let end = a.known_end().min(b.known_end());
            return FormalSeries {
                offset: end.min(i64::from(ZERO_OFFSET)) as i32,
                coeffs: Vec::new(),
            };
        }
        let offset = a.offset + b.offset;
        // product known through offset + min(len_a, len_b) - 1
        let len = a.coeffs.len().min(b.coeffs.len());
        let mut coeffs = vec![c64(0.0, 0.0); len];
        for (i, ca) in a.coeffs.iter().enumerate().take(len) {
            if ca.norm() == 0.0 {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += ca * cb;
            }
        }
        FormalSeries { offset, coeffs }
    }

    fn neg(&self) -> Self {
        FormalSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn scale(&self, s: C64) -> Self {
        FormalSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn constant(&self, c: C64) -> Self {
        if self.is_zero_exact() {
            return FormalSeries {
                offset: 0,
                coeffs: vec![c],
            };
        }
        let horizon = (self.known_end() - 1).clamp(0, i64::from(i32::MAX)) as i32;
        FormalSeries::monomial(0, c, horizon)
    }

    fn recip(&self) -> Result<Self> {
        let a = self.trimmed();
        if a.is_zero_exact() || a.coeffs.is_empty() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let lead = a.coeffs[0];
        let n = a.coeffs.len();
        // invert 1 + u, u = higher terms / lead
        let mut inv = vec![c64(0.0, 0.0); n];
        inv[0] = 1.0 / lead;
        for m in 1..n {
            let mut acc = c64(0.0, 0.0);
            for j in 1..=m {
                acc += a.coeffs[j] * inv[m - j];
            }
            inv[m] = -acc / lead;
        }
        Ok(FormalSeries {
            offset: -a.offset,
            coeffs: inv,
        })
    }
}

/// Transseries data: `h̃₀` plus the level series `s̃₁ .. s̃_K` with the
/// convention that level `k` carries the prefactor `C^k e^{-kw} w^{-kβ₁}`.
#[derive(Debug, Clone)]
pub struct Transseries {
    pub h0: FormalSeries,
    pub levels: Vec<FormalSeries>,
    pub beta1: C64,
    pub n: usize,
}

impl Transseries {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    /// `s̃ₖ` (1-based level index).
    pub fn level(&self, k: usize) -> &FormalSeries {
        &self.levels[k - 1]
    }
}

/// Result of an optimal-truncation transseries evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TransseriesValue {
    pub value: C64,
    /// Crude error estimate: omitted-term magnitudes plus the next level's
    /// prefactor size.
    pub err_estimate: f64,
    /// Set when `|C e^{-w} w^{-β₁}| >= 1` (expansion not ordered).
    pub prefactor_warning: bool,
}

/// The unique formal power-series solution `h̃₀` with coefficients for
/// exponents `2..=n`, obtained by fixed-point iteration of the canonical
/// equation over the series ring (one new order per sweep).
pub fn compute_h0(nf: &NormalizedForm, n: usize) -> Result<FormalSeries> {
    assert!(n >= 2, "need n >= 2");
    let horizon = n as i32;
    let inv_w = FormalSeries::monomial(1, c64(1.0, 0.0), horizon + 2);
    let mut h = FormalSeries::zero_window(2, horizon);
    let db = nf.beta2 - nf.beta1;
    let sb = nf.beta2 + nf.beta1;
    // order-by-order forward substitution: with coefficients >= j still zero,
    // order j of the fixed-point map h = h'' + (1/w)[..] - g(w,h,h') has no
    // self-dependence (the nonlinearity couples h_j only to orders >= j+2)
    for j in 2..=horizon {
        let hp = h.differentiate();
        let g = nf.g_ring(&inv_w, &h, &hp)?;
        let rhs = h
            .differentiate()
            .differentiate()
            .add(&inv_w.mul(&h.scale(db).add(&hp.scale(sb))))
            .sub(&g);
        // orders below w^-2 cancel identically; what remains is f64 noise
        debug_assert!(
            (rhs.offset()..2).all(|e| rhs.coeff(e).norm() < 1e-10),
            "series solution must start at w^-2"
        );
        h.set_coeff(j, rhs.coeff(j));
    }
    Ok(h)
}

/// Exponential-level expansion: element `Σ_k levels[k]·ε^k` where `ε` stands
/// for `C e^{-w} w^{-β₁}` and each `levels[k]` is a `1/w`-series.
#[derive(Debug, Clone)]
pub struct LevelExpansion {
    pub beta1: C64,
    pub levels: Vec<FormalSeries>,
}

impl LevelExpansion {
    pub fn from_levels(beta1: C64, levels: Vec<FormalSeries>) -> Self {
        LevelExpansion { beta1, levels }
    }

    fn k_max(&self) -> usize {
        self.levels.len() - 1
    }

    fn level_or_zero(&self, k: usize) -> FormalSeries {
        self.levels
            .get(k)
            .cloned()
            .unwrap_or_else(FormalSeries::zero_exact)
    }

    /// Twisted derivative: d/dw acts on `ε^k s(w)` as
    /// `ε^k (s' - k s - k β₁ s / w)`.
    pub fn differentiate(&self) -> Self {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let kf = k as f64;
                s.differentiate()
                    .sub(&s.scale(c64(kf, 0.0)))
                    .sub(&s.shift(1).scale(self.beta1 * kf))
            })
            .collect();
        LevelExpansion {
            beta1: self.beta1,
            levels,
        }
    }
}

impl Ring for LevelExpansion {
    fn add(&self, rhs: &Self) -> Self {
        let kk = self.k_max().max(rhs.k_max());
        let levels = (0..=kk)
            .map(|k| self.level_or_zero(k).add(&rhs.level_or_zero(k)))
            .collect();
        LevelExpansion {
            beta1: self.beta1,
            levels,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let kk = self.k_max().max(rhs.k_max());
        let mut levels = vec![FormalSeries::zero_exact(); kk + 1];
        for i in 0..=self.k_max().min(kk) {
            if self.levels[i].is_zero_exact() {
                continue;
            }
            for j in 0..=rhs.k_max() {
                if i + j > kk {
                    break;
                }
                levels[i + j] = levels[i + j].add(&self.levels[i].mul(&rhs.levels[j]));
            }
        }
        LevelExpansion {
            beta1: self.beta1,
            levels,
        }
    }

    fn neg(&self) -> Self {
        LevelExpansion {
            beta1: self.beta1,
            levels: self.levels.iter().map(|s| s.neg()).collect(),
        }
    }

    fn scale(&self, c: C64) -> Self {
        LevelExpansion {
            beta1: self.beta1,
            levels: self.levels.iter().map(|s| s.scale(c)).collect(),
        }
    }

    fn constant(&self, c: C64) -> Self {
        let mut levels = vec![FormalSeries::zero_exact(); self.levels.len()];
        levels[0] = self.levels[0].constant(c);
        LevelExpansion {
            beta1: self.beta1,
            levels,
        }
    }

    fn recip(&self) -> Result<Self> {
        // 1/(a₀ + E) = (1/a₀) Σ_m (-E/a₀)^m with E the ε-positive part
        let inv0 = self.levels[0].recip()?;
        let kk = self.k_max();
        let mut levels = vec![FormalSeries::zero_exact(); kk + 1];
        levels[0] = inv0.clone();
        // e_k = levels of -E/a₀
        let mut e: Vec<FormalSeries> = Vec::with_capacity(kk + 1);
        e.push(FormalSeries::zero_exact());
        for k in 1..=kk {
            e.push(self.levels[k].mul(&inv0).neg());
        }
        // accumulate powers of E' = -E/a₀: term_m = (E')^m / a₀
        let mut power = vec![FormalSeries::zero_exact(); kk + 1];
        power[0] = self.levels[0].constant(c64(1.0, 0.0));
        for _ in 1..=kk {
            // power <- power * E'
            let mut next = vec![FormalSeries::zero_exact(); kk + 1];
            for i in 0..=kk {
                if power[i].is_zero_exact() {
                    continue;
                }
                for j in 1..=kk {
                    if i + j > kk {
                        break;
                    }
                    next[i + j] = next[i + j].add(&power[i].mul(&e[j]));
                }
            }
            power = next;
            for k in 1..=kk {
                levels[k] = levels[k].add(&power[k].mul(&inv0));
            }
        }
        Ok(LevelExpansion {
            beta1: self.beta1,
            levels,
        })
    }
}

/// Residual operator of the canonical equation over a level expansion:
/// `R(h) = h'' - h + (1/w)[(β₂-β₁)h + (β₂+β₁)h'] - g(w,h,h')`.
fn residual_levels(
    nf: &NormalizedForm,
    x: &LevelExpansion,
    inv_w: &LevelExpansion,
) -> Result<LevelExpansion> {
    let xp = x.differentiate();
    let g = nf.g_ring(inv_w, x, &xp)?;
    let db = nf.beta2 - nf.beta1;
    let sb = nf.beta2 + nf.beta1;
    Ok(x
        .differentiate()
        .differentiate()
        .sub(x)
        .add(&inv_w.mul(&x.scale(db).add(&xp.scale(sb))))
        .sub(&g))
}

/// Compute the transseries level series `s̃₁ .. s̃_K` (normalization
/// `s₁,₀ = 1`) to order `n`, solving the level-k equations by Jacobi sweeps
/// on their triangular coefficient systems.
pub fn compute_levels(nf: &NormalizedForm, k_levels: usize, n: usize) -> Result<Transseries> {
    assert!(k_levels >= 1, "need K >= 1");
    let horizon = n as i32 + 2;
    let h0 = compute_h0(nf, n)?;
    let h0w = h0.window(2, horizon);
    let inv_w_series = FormalSeries::monomial(1, c64(1.0, 0.0), horizon + 2);

    let inv_w_lift = LevelExpansion::from_levels(nf.beta1, vec![inv_w_series]);
    let mut levels: Vec<FormalSeries> = Vec::with_capacity(k_levels);
    for k in 1..=k_levels {
        let mut s_k = FormalSeries::zero_window(0, horizon);
        if k == 1 {
            s_k.set_coeff(0, c64(1.0, 0.0)); // normalization s₁,₀ = 1
        }
        // order-by-order: with coefficients >= j still zero, the level-k
        // residual at the pivot order is pivot·0 + (already-determined data),
        // so each coefficient is solved exactly once.
        //   k = 1: pivot 2j at residual order j+1 (s₁,₀ is the free constant)
        //   k >= 2: pivot k²-1 at residual order j
        let j_start = if k == 1 { 1 } else { 0 };
        for j in j_start..=n {
            let mut expansion_levels = vec![h0w.clone()];
            for s in levels.iter().take(k - 1) {
                expansion_levels.push(s.clone());
            }
            expansion_levels.push(s_k.clone());
            let x = LevelExpansion::from_levels(nf.beta1, expansion_levels);
            let rho = residual_levels(nf, &x, &inv_w_lift)?.level_or_zero(k);
            let (pivot, r) = if k == 1 {
                (2.0 * j as f64, rho.coeff(j as i32 + 1))
            } else {
                ((k * k - 1) as f64, rho.coeff(j as i32))
            };
            if pivot.abs() < 1e-14 {
                return Err(Error::Resonance { k, j, pivot });
            }
            s_k.set_coeff(j as i32, -r / pivot);
        }
        levels.push(s_k.window(0, n as i32));
    }

    Ok(Transseries {
        h0: h0.window(2, n as i32),
        levels,
        beta1: nf.beta1,
        n,
    })
}

/// The residual of the canonical equation on a truncated series, as a
/// series: the orders at and below the truncation vanish by construction and
/// the returned tail starts at `w^-(n+1)`.  Evaluating the tail (optimally
/// truncated) estimates the true residual without the catastrophic
/// cancellation of direct evaluation at large `|w|`.
pub fn eqh_residual_tail(nf: &NormalizedForm, h: &FormalSeries, n: usize) -> Result<FormalSeries> {
    let horizon = 2 * n as i32;
    let inv_w = FormalSeries::monomial(1, c64(1.0, 0.0), horizon + 2);
    let h = h.window(2, horizon);
    let hp = h.differentiate();
    let g = nf.g_ring(&inv_w, &h, &hp)?;
    let db = nf.beta2 - nf.beta1;
    let sb = nf.beta2 + nf.beta1;
    let res = h
        .differentiate()
        .differentiate()
        .sub(&h)
        .add(&inv_w.mul(&h.scale(db).add(&hp.scale(sb))))
        .sub(&g);
    Ok(res.window(n as i32 + 1, horizon))
}

/// Optimal-truncation evaluation of the transseries at `w` with constant `C`.
pub fn evaluate_transseries(ts: &Transseries, c: C64, w: C64) -> TransseriesValue {
    let (mut value, mut err, _) = ts.h0.eval_optimal(w);
    // prefactor ε = C e^{-w} w^{-β₁}
    let eps = c * (-w).exp() * w.powc(-ts.beta1);
    let prefactor_warning = eps.norm() >= 1.0;
    let mut pw = c64(1.0, 0.0);
    for s in &ts.levels {
        pw *= eps;
        let (v, e, _) = s.eval_optimal(w);
        value += pw * v;
        err += pw.norm() * e;
    }
    // truncation of the exponential sum itself
    err += (pw * eps).norm();
    TransseriesValue {
        value,
        err_estimate: err,
        prefactor_warning,
    }
}
