//! Correlation sums of the character sequence s_n = chi(psi_n(P)):
//! partial sums, shifted correlations S(N, h), the averages U_m and V_m,
//! T(H), twisted spectra with an FFT fast path, the exact identities the
//! estimates rest on, and evaluators for the asymptotic bounds.
//!
//! Shift indices wrap modulo the period R = d * ord P, so S(N, h) is
//! total for every integer h. All sums with unit-modulus terms are
//! accumulated exactly in `CycloVec` and converted to complex doubles
//! only at the boundary.

use crate::character::{CharValue, Character, CycloVec};
use crate::curve::CurvePoint;
use crate::divpoly::{psi_at_point, EdsContext};
use crate::field::FieldElem;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rustfft::FftPlanner;
use std::f64::consts::TAU;
use thiserror::Error;

/// Tuple averages switch from exhaustive enumeration to seeded
/// Monte-Carlo above this many shift tuples.
pub const TUPLE_BUDGET: u128 = 1_000_000;

/// log log R must be positive for the bound formulas.
pub const MIN_R_FOR_BOUNDS: u64 = 16;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum CorrError {
    #[error("{what} = {given} out of range 1..={limit}")]
    OutOfRange {
        what: &'static str,
        given: u64,
        limit: u64,
    },
    #[error("FFT correlation path is cyclic-only and requires N = R (N = {n}, R = {r})")]
    FftNeedsFullPeriod { n: u64, r: u64 },
    #[error("{tuples} shift tuples exceed the enumeration budget {budget}; pass a sample spec")]
    TupleBudgetExceeded { tuples: u128, budget: u128 },
    #[error("weight vector entry {index} has modulus {modulus} > 1")]
    WeightTooLarge { index: usize, modulus: f64 },
    #[error("bound evaluators require R >= {min} (got R = {r})")]
    RTooSmallForBounds { r: u64, min: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Parameters identifying a (curve, point, character) context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeqInfo {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub px: u64,
    pub py: u64,
    pub ord_p: u64,
    pub d: u64,
    pub r: u64,
}

/// The periodic sequence s_n = chi(psi_n(P)), n = 1..R, R = d * ord P.
pub struct CharSeq {
    info: SeqInfo,
    /// values[i] = s_{i+1}; `Some(t)` means zeta_d^t, `None` means zero.
    exps: Vec<Option<u64>>,
}

/// Outcome of a tuple-averaged sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvgOutcome {
    pub value: f64,
    pub sampled: bool,
    pub tuples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrStrategy {
    Direct,
    Fft,
}

impl CharSeq {
    /// Generates one full period via `psi_range` + character evaluation.
    pub fn build(ctx: &EdsContext, chi: &Character) -> CharSeq {
        assert_eq!(
            ctx.curve().field().modulus(),
            chi.field().modulus(),
            "context and character over different fields"
        );
        let d = chi.order();
        let r = d * ctx.ord_p();
        let psis = ctx.psi_range(1, r as usize);
        let exps = psis
            .iter()
            .map(|v| match chi.eval(v) {
                CharValue::Zero => None,
                CharValue::Root(t) => Some(t),
            })
            .collect();
        let pt = ctx.point();
        let info = SeqInfo {
            p: ctx.curve().field().modulus(),
            a: ctx.curve().a().value(),
            b: ctx.curve().b().value(),
            px: pt.x().unwrap().value(),
            py: pt.y().unwrap().value(),
            ord_p: ctx.ord_p(),
            d,
            r,
        };
        CharSeq { info, exps }
    }

    pub fn info(&self) -> &SeqInfo {
        &self.info
    }

    /// Fault-injection hook for harness self-tests: corrupts s_n in place
    /// (a zero becomes 1, a root advances by one step). Consistency
    /// suites downstream are expected to catch the corruption.
    pub fn flip_value(&mut self, n: u64) {
        let idx = ((n - 1) % self.info.r) as usize;
        self.exps[idx] = match self.exps[idx] {
            None => Some(0),
            Some(t) => Some((t + 1) % self.info.d),
        };
    }

    pub fn period(&self) -> u64 {
        self.info.r
    }

    pub fn order(&self) -> u64 {
        self.info.d
    }

    /// s_n for n >= 1, wrapping modulo R.
    pub fn value(&self, n: u64) -> CharValue {
        match self.exp_at(n) {
            None => CharValue::Zero,
            Some(t) => CharValue::Root(t),
        }
    }

    fn exp_at(&self, n: u64) -> Option<u64> {
        debug_assert!(n >= 1);
        self.exps[((n - 1) % self.info.r) as usize]
    }

    fn exp_at_i64(&self, n: i64) -> Option<u64> {
        let r = self.info.r as i64;
        let idx = (n - 1).rem_euclid(r) as usize;
        self.exps[idx]
    }

    pub fn values(&self) -> Vec<CharValue> {
        self.exps
            .iter()
            .map(|e| match e {
                None => CharValue::Zero,
                Some(t) => CharValue::Root(*t),
            })
            .collect()
    }

    /// Complex image of one period, s_1..s_R.
    pub fn to_complex(&self) -> Vec<Complex64> {
        let d = self.info.d;
        self.exps
            .iter()
            .map(|e| match e {
                None => Complex64::new(0.0, 0.0),
                Some(t) => Complex64::from_polar(1.0, TAU * *t as f64 / d as f64),
            })
            .collect()
    }

    fn check_range(&self, what: &'static str, v: u64) -> Result<(), CorrError> {
        if v < 1 || v > self.info.r {
            return Err(CorrError::OutOfRange {
                what,
                given: v,
                limit: self.info.r,
            });
        }
        Ok(())
    }

    /// S(N) = sum_{n=1}^N s_n, exactly.
    pub fn sum_s(&self, n_terms: u64) -> Result<CycloVec, CorrError> {
        if n_terms > self.info.r {
            return Err(CorrError::OutOfRange {
                what: "N",
                given: n_terms,
                limit: self.info.r,
            });
        }
        let mut acc = CycloVec::new(self.info.d);
        for n in 1..=n_terms {
            acc.push(&self.value(n));
        }
        Ok(acc)
    }

    /// S(N, h) = sum_{n=1}^N s_n * s_{n+h} (second factor conjugated when
    /// `conj_second`), exactly. h wraps modulo R.
    pub fn corr_s(&self, n_terms: u64, h: i64, conj_second: bool) -> Result<CycloVec, CorrError> {
        self.check_range("N", n_terms)?;
        let d = self.info.d as i64;
        let mut acc = CycloVec::new(self.info.d);
        for n in 1..=n_terms as i64 {
            let (Some(t1), Some(t2)) = (self.exp_at_i64(n), self.exp_at_i64(n + h)) else {
                continue;
            };
            let t2 = if conj_second { -(t2 as i64) } else { t2 as i64 };
            let t = (t1 as i64 + t2).rem_euclid(d) as u64;
            acc.push(&CharValue::Root(t));
        }
        Ok(acc)
    }

    /// S(N, h) for h = 1..H. The FFT path computes the full cyclic
    /// cross-correlation and is only valid at N = R.
    pub fn corr_all_shifts(
        &self,
        n_terms: u64,
        h_max: u64,
        conj_second: bool,
        strategy: CorrStrategy,
    ) -> Result<Vec<Complex64>, CorrError> {
        self.check_range("N", n_terms)?;
        self.check_range("H", h_max)?;
        match strategy {
            CorrStrategy::Direct => (1..=h_max as i64)
                .map(|h| Ok(self.corr_s(n_terms, h, conj_second)?.to_complex()))
                .collect(),
            CorrStrategy::Fft => {
                let r = self.info.r;
                if n_terms != r {
                    return Err(CorrError::FftNeedsFullPeriod { n: n_terms, r });
                }
                let z = self.to_complex();
                let w: Vec<Complex64> = if conj_second {
                    z.iter().map(|v| v.conj()).collect()
                } else {
                    z.clone()
                };
                // c_h = sum_j z_j w_{(j+h) mod R}
                //     = (1/R) * InverseFFT( FFT(w) .* reverse(FFT(z)) )_h
                let mut planner = FftPlanner::new();
                let fwd = planner.plan_fft_forward(r as usize);
                let inv = planner.plan_fft_inverse(r as usize);
                let mut zf = z;
                let mut wf = w;
                fwd.process(&mut zf);
                fwd.process(&mut wf);
                let mut prod: Vec<Complex64> = (0..r as usize)
                    .map(|k| wf[k] * zf[(r as usize - k) % r as usize])
                    .collect();
                inv.process(&mut prod);
                let scale = 1.0 / r as f64;
                Ok((1..=h_max)
                    .map(|h| prod[(h % r) as usize].scale(scale))
                    .collect())
            }
        }
    }

    /// T(H) = sum_{h=1}^H |sum_{n=1}^R s_n conj(s_{n+h})|^2, the inner
    /// sums computed exactly shift by shift.
    pub fn t_sum(&self, h_max: u64) -> Result<f64, CorrError> {
        self.check_range("H", h_max)?;
        let mut total = 0.0;
        for h in 1..=h_max as i64 {
            let s = self.corr_s(self.info.r, h, true)?;
            total += s.to_complex().norm_sqr();
        }
        Ok(total)
    }

    /// The twisted sums S^(a) = sum_{n=1}^R s_n e_R(a n) for a = 1..R,
    /// via a length-R inverse FFT.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let r = self.info.r;
        let mut data = self.to_complex();
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(r as usize).process(&mut data);
        // data[a] = sum_j s_{j+1} e^{2 pi i a j / R}; shift by e_R(a).
        (1..=r)
            .map(|a| {
                let idx = (a % r) as usize;
                data[idx] * Complex64::from_polar(1.0, TAU * (a % r) as f64 / r as f64)
            })
            .collect()
    }

    /// Direct evaluation of a single twisted sum.
    pub fn spectrum_single(&self, a: i64) -> Complex64 {
        let r = self.info.r;
        let d = self.info.d;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 1..=r {
            if let Some(t) = self.exp_at(n) {
                let char_phase = TAU * t as f64 / d as f64;
                let tw = (a.rem_euclid(r as i64) as u64 * n % r) as f64;
                acc += Complex64::from_polar(1.0, char_phase + TAU * tw / r as f64);
            }
        }
        acc
    }

    /// Both sides of the exact identity behind the full-period T bound:
    /// T(R) = (1/R) sum_lambda |S^(lambda)|^2 |S^(-lambda)|^2.
    pub fn spectral_t_identity(&self) -> Result<(f64, f64), CorrError> {
        let r = self.info.r;
        let lhs = self.t_sum(r)?;
        let spec = self.spectrum(); // spec[i] = S^(i+1), i = 0..R-1
        let hat = |lam: u64| spec[((lam + r - 1) % r) as usize]; // S^(lam), lam mod R
        let mut rhs = 0.0;
        for lam in 1..=r {
            rhs += hat(lam).norm_sqr() * hat(r - lam % r).norm_sqr();
        }
        Ok((lhs, rhs / r as f64))
    }

    /// Inner sum |sum_{n=1}^N lead * prod_j s_{n+h_j}| for one shift tuple.
    fn tuple_inner_abs(&self, n_terms: u64, shifts: &[u64], lead_unshifted: bool) -> f64 {
        let d = self.info.d;
        let mut acc = CycloVec::new(d);
        'term: for n in 1..=n_terms {
            let mut t: u64 = 0;
            if lead_unshifted {
                match self.exp_at(n) {
                    None => continue,
                    Some(e) => t = e,
                }
            }
            for h in shifts {
                match self.exp_at(n + h) {
                    None => continue 'term,
                    Some(e) => t = (t + e) % d,
                }
            }
            acc.push(&CharValue::Root(t));
        }
        acc.abs()
    }

    fn tuple_average(
        &self,
        n_terms: u64,
        h_max: u64,
        tuple_len: usize,
        lead_unshifted: bool,
        sample: Option<(u64, u64)>,
    ) -> Result<AvgOutcome, CorrError> {
        self.check_range("N", n_terms)?;
        self.check_range("H", h_max)?;
        let total: u128 = (h_max as u128).pow(tuple_len as u32);
        if total <= TUPLE_BUDGET {
            let mut sum = 0.0;
            let mut shifts = vec![1u64; tuple_len];
            loop {
                sum += self.tuple_inner_abs(n_terms, &shifts, lead_unshifted);
                // odometer
                let mut i = 0;
                loop {
                    if i == tuple_len {
                        return Ok(AvgOutcome {
                            value: sum / total as f64,
                            sampled: false,
                            tuples: total as u64,
                        });
                    }
                    if shifts[i] < h_max {
                        shifts[i] += 1;
                        break;
                    }
                    shifts[i] = 1;
                    i += 1;
                }
            }
        }
        let Some((count, seed)) = sample else {
            return Err(CorrError::TupleBudgetExceeded {
                tuples: total,
                budget: TUPLE_BUDGET,
            });
        };
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut sum = 0.0;
        let mut shifts = vec![0u64; tuple_len];
        for _ in 0..count {
            for s in shifts.iter_mut() {
                *s = rng.gen_range(1..=h_max);
            }
            sum += self.tuple_inner_abs(n_terms, &shifts, lead_unshifted);
        }
        Ok(AvgOutcome {
            value: sum / count as f64,
            sampled: true,
            tuples: count,
        })
    }

    /// U_m(H, N): mean over (h_2..h_m) of |sum_n s_n prod_j s_{n+h_j}|.
    pub fn u_avg(
        &self,
        m: u64,
        h_max: u64,
        n_terms: u64,
        sample: Option<(u64, u64)>,
    ) -> Result<AvgOutcome, CorrError> {
        if m < 2 {
            return Err(CorrError::Precondition(format!("U_m needs m >= 2, got {m}")));
        }
        self.tuple_average(n_terms, h_max, (m - 1) as usize, true, sample)
    }

    /// V_m(H, N): mean over (h_1..h_m) of |sum_n prod_j s_{n+h_j}|.
    pub fn v_avg(
        &self,
        m: u64,
        h_max: u64,
        n_terms: u64,
        sample: Option<(u64, u64)>,
    ) -> Result<AvgOutcome, CorrError> {
        if m < 2 {
            return Err(CorrError::Precondition(format!("V_m needs m >= 2, got {m}")));
        }
        self.tuple_average(n_terms, h_max, m as usize, false, sample)
    }

    /// The weighted-sum inequality: S_w = sum_{h<=H} |sum_n alpha_n s_{n+h}|
    /// against (2 H^3 R^2 T(H) + H^3 R^4)^{1/4}.
    pub fn weighted_chain_check(
        &self,
        weights: &[Complex64],
        h_max: u64,
    ) -> Result<(f64, f64, bool), CorrError> {
        self.check_range("H", h_max)?;
        if weights.len() != self.info.r as usize {
            return Err(CorrError::Precondition(format!(
                "weight vector length {} != R = {}",
                weights.len(),
                self.info.r
            )));
        }
        for (i, w) in weights.iter().enumerate() {
            if w.norm() > 1.0 + 1e-12 {
                return Err(CorrError::WeightTooLarge {
                    index: i,
                    modulus: w.norm(),
                });
            }
        }
        let z = self.to_complex();
        let r = self.info.r;
        let mut s_w = 0.0;
        for h in 1..=h_max {
            let mut inner = Complex64::new(0.0, 0.0);
            for n in 1..=r {
                inner += weights[(n - 1) as usize] * z[((n + h - 1) % r) as usize];
            }
            s_w += inner.norm();
        }
        let t = self.t_sum(h_max)?;
        let hf = h_max as f64;
        let rf = r as f64;
        let bound = (2.0 * hf.powi(3) * rf.powi(2) * t + hf.powi(3) * rf.powi(4)).powf(0.25);
        Ok((s_w, bound, s_w <= bound * (1.0 + 1e-9)))
    }

    /// Exact count of shifts h <= H with |S(N, h)| >= Delta * N, plus the
    /// right-hand side of the exceptional-shift bound (None when the
    /// large-period hypothesis fails).
    pub fn exceptional_count(
        &self,
        n_terms: u64,
        h_max: u64,
        delta: f64,
        constant: f64,
    ) -> Result<(u64, Option<f64>), CorrError> {
        if delta <= 0.0 {
            return Err(CorrError::Precondition("Delta must be positive".into()));
        }
        self.check_range("N", n_terms)?;
        self.check_range("H", h_max)?;
        let mut count = 0u64;
        for h in 1..=h_max as i64 {
            if self.corr_s(n_terms, h, false)?.abs() >= delta * n_terms as f64 {
                count += 1;
            }
        }
        let info = self.info;
        let rhs = if b2_hypothesis_holds(info.p, info.r) {
            let rf = info.r as f64;
            Some(
                constant / delta * (h_max as f64).powf(0.75) / n_terms as f64
                    * rf.powf(7.0 / 6.0)
                    * (info.p as f64).powf(1.0 / 24.0)
                    * rf.ln().ln().powf(1.0 / 6.0),
            )
        } else {
            None
        };
        Ok((count, rhs))
    }
}

/// e_R(n) = exp(2 pi i n / R).
pub fn e_r(n: i64, r: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * n.rem_euclid(r as i64) as f64 / r as f64)
}

/// chi(psi_{mn}(P)) = chi(psi_m(nP)) chi(psi_n(P))^{m^2}: checks the
/// almost-multiplicativity identity as exact character values.
pub fn mult_identity_check(
    ctx: &EdsContext,
    chi: &Character,
    m: u64,
    n: u64,
) -> Result<bool, CorrError> {
    if n % ctx.ord_p() == 0 {
        return Err(CorrError::Precondition(format!(
            "ord P = {} divides n = {n}; nP is the identity",
            ctx.ord_p()
        )));
    }
    let d = chi.order();
    let lhs = chi.eval(&ctx.psi_eval(m * n));
    let np = ctx.curve().scalar_mul(n as i64, &ctx.point());
    let psi_m_at_np =
        psi_at_point(ctx.curve(), &np, m).expect("nP is affine since ord P does not divide n");
    let first = chi.eval(&psi_m_at_np);
    let second = chi.eval(&ctx.psi_eval(n)).pow(((m % d) * (m % d)) % d, d);
    let rhs = first.mul(&second, d);
    Ok(lhs == rhs)
}

/// The complete twisted Weil-type sum over the rational function
/// Psi(Q) = psi_k(Q) psi_k(Q+mP)^{-1} psi_l(Q)^{-1} psi_l(Q+mP),
/// summed over Q = nP, n = 1..R, against e_R(a n). Returns the sum and
/// the degree budget 2 (k^2 + l^2) sqrt(p); the comparison is
/// report-only since the implied constant is unspecified.
pub fn weil_sum_check(
    ctx: &EdsContext,
    chi: &Character,
    k: u64,
    l: u64,
    mshift: u64,
    a: i64,
) -> Result<(Complex64, f64), CorrError> {
    let r = chi.order() * ctx.ord_p();
    if k == l {
        return Err(CorrError::Precondition("k and l must differ".into()));
    }
    if gcd(k * l, r) != 1 {
        return Err(CorrError::Precondition(format!(
            "gcd(k*l, R) = gcd({}, {r}) != 1",
            k * l
        )));
    }
    if mshift % ctx.ord_p() == 0 {
        return Err(CorrError::Precondition(format!(
            "ord P = {} divides the shift m = {mshift}",
            ctx.ord_p()
        )));
    }
    let curve = ctx.curve();
    let base = ctx.point();
    let shift_pt = curve.scalar_mul(mshift as i64, &base);
    let d = chi.order();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut q = CurvePoint::Infinity;
    for n in 1..=r {
        q = curve.add(&q, &base);
        let qm = curve.add(&q, &shift_pt);
        let Some(val) = twisted_value(ctx, chi, &q, &qm, k, l) else {
            continue;
        };
        acc += val.to_complex(d) * e_r(a * n as i64, r);
    }
    let budget = 2.0 * (k * k + l * l) as f64 * (ctx.curve().field().modulus() as f64).sqrt();
    Ok((acc, budget))
}

fn twisted_value(
    ctx: &EdsContext,
    chi: &Character,
    q: &CurvePoint,
    qm: &CurvePoint,
    k: u64,
    l: u64,
) -> Option<CharValue> {
    let curve = ctx.curve();
    let factors: [(u64, &CurvePoint, bool); 4] = [
        (k, q, false),
        (k, qm, true),
        (l, q, true),
        (l, qm, false),
    ];
    let mut num = curve.field().one();
    let mut den = curve.field().one();
    for (idx, pt, inverted) in factors {
        let v: FieldElem = psi_at_point(curve, pt, idx)?;
        if v.is_zero() {
            return None;
        }
        if inverted {
            den = den.mul(&v);
        } else {
            num = num.mul(&v);
        }
    }
    let value = num.mul(&den.inv().expect("nonzero by construction"));
    Some(chi.eval(&value))
}

/// Right-hand side of the averaged-correlation bound (eq. B1):
/// c1 H^{-1/8} R exp(c2 (log R)^{1/2} / log log R)
///   + c1 H^{1/2} R^{3/4} p^{1/8} L, with L = log R, or 1 for complete
/// sums (N = R).
pub fn bound_b1(
    p: u64,
    r: u64,
    h: u64,
    c1: f64,
    c2: f64,
    complete: bool,
) -> Result<f64, CorrError> {
    check_bound_domain(r, h)?;
    let rf = r as f64;
    let hf = h as f64;
    let log_r = rf.ln();
    let first = c1 * hf.powf(-0.125) * rf * (c2 * log_r.sqrt() / log_r.ln()).exp();
    let l = if complete { 1.0 } else { log_r };
    let second = c1 * hf.sqrt() * rf.powf(0.75) * (p as f64).powf(0.125) * l;
    Ok(first + second)
}

/// Hypothesis of the large-period bound: R >= p^{1/2} exp(2.1 log p / log log p).
pub fn b2_hypothesis_holds(p: u64, r: u64) -> bool {
    let pf = p as f64;
    let threshold = pf.sqrt() * (2.1 * pf.ln() / pf.ln().ln()).exp();
    r as f64 >= threshold
}

/// Right-hand side of the large-period bound (eq. B2):
/// c3 H^{-1/4} R^{7/6} p^{1/24} (log R)(log log R)^{1/6}, when its
/// hypothesis holds; None otherwise.
pub fn bound_b2(p: u64, r: u64, h: u64, c3: f64) -> Result<Option<f64>, CorrError> {
    check_bound_domain(r, h)?;
    if !b2_hypothesis_holds(p, r) {
        return Ok(None);
    }
    let rf = r as f64;
    let hf = h as f64;
    Ok(Some(
        c3 * hf.powf(-0.25)
            * rf.powf(7.0 / 6.0)
            * (p as f64).powf(1.0 / 24.0)
            * rf.ln()
            * rf.ln().ln().powf(1.0 / 6.0),
    ))
}

/// Budget for the complete twisted sum: c p^{1/12} R^{5/6} (log log R)^{1/3},
/// when the large-period hypothesis holds.
pub fn spectrum_budget(p: u64, r: u64, c: f64) -> Option<f64> {
    if r < MIN_R_FOR_BOUNDS || !b2_hypothesis_holds(p, r) {
        return None;
    }
    let rf = r as f64;
    Some(c * (p as f64).powf(1.0 / 12.0) * rf.powf(5.0 / 6.0) * rf.ln().ln().powf(1.0 / 3.0))
}

fn check_bound_domain(r: u64, h: u64) -> Result<(), CorrError> {
    if r < MIN_R_FOR_BOUNDS {
        return Err(CorrError::RTooSmallForBounds {
            r,
            min: MIN_R_FOR_BOUNDS,
        });
    }
    if h < 1 || h > r {
        return Err(CorrError::OutOfRange {
            what: "H",
            given: h,
            limit: r,
        });
    }
    Ok(())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::field::PrimeField;

    fn toy_seq() -> CharSeq {
        let f = PrimeField::new(5).unwrap();
        let c = Curve::new(f, f.elem(1), f.elem(1)).unwrap();
        let p = c.point(0, 1).unwrap();
        let ctx = EdsContext::new(c, p, 9).unwrap();
        let chi = Character::build(f, 2).unwrap();
        CharSeq::build(&ctx, &chi)
    }

    #[test]
    fn toy_sequence_values() {
        let seq = toy_seq();
        assert_eq!(seq.period(), 18);
        // psi_1..psi_5 = 1, 2, 4, 4, 3; QRs mod 5 are {1, 4}
        let want = [
            CharValue::Root(0),
            CharValue::Root(1),
            CharValue::Root(0),
            CharValue::Root(0),
            CharValue::Root(1),
        ];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(seq.value(i as u64 + 1), *w);
        }
        assert_eq!(seq.value(9), CharValue::Zero);
        assert_eq!(seq.value(18), CharValue::Zero);
        let zeros = seq.values().iter().filter(|v| v.is_zero()).count();
        assert_eq!(zeros as u64, seq.order());
    }

    #[test]
    fn periodicity_exact() {
        let f = PrimeField::new(5).unwrap();
        let c = Curve::new(f, f.elem(1), f.elem(1)).unwrap();
        let p = c.point(0, 1).unwrap();
        let ctx = EdsContext::new(c, p, 9).unwrap();
        let chi = Character::build(f, 2).unwrap();
        let seq = CharSeq::build(&ctx, &chi);
        let r = seq.period();
        let double = ctx.psi_range(1, 2 * r as usize);
        for n in 0..r as usize {
            assert_eq!(chi.eval(&double[n]), chi.eval(&double[n + r as usize]));
        }
    }

    #[test]
    fn partial_sums() {
        let seq = toy_seq();
        assert!(seq.sum_s(0).unwrap().is_empty_sum());
        let s4 = seq.sum_s(4).unwrap();
        assert!((s4.to_complex().re - 2.0).abs() < 1e-12);
        assert!(seq.sum_s(19).is_err());
        for n in 0..=18 {
            assert!(seq.sum_s(n).unwrap().abs() <= n as f64 + 1e-12);
        }
    }

    #[test]
    fn shifted_correlation_toy() {
        let seq = toy_seq();
        let s31 = seq.corr_s(3, 1, false).unwrap();
        assert!((s31.to_complex().re + 1.0).abs() < 1e-12);
        // d = 2: conjugation is a no-op
        for h in 1..=18i64 {
            assert_eq!(
                seq.corr_s(18, h, false).unwrap(),
                seq.corr_s(18, h, true).unwrap()
            );
        }
        // h = 0 with conjugation counts nonzero terms
        let diag = seq.corr_s(18, 0, true).unwrap();
        assert!((diag.to_complex().re - 16.0).abs() < 1e-12);
    }

    #[test]
    fn corr_matches_direct_oracle() {
        let seq = toy_seq();
        let vals = seq.values();
        for n in [1u64, 5, 12, 18] {
            for h in [-3i64, 1, 2, 7, 18, 25] {
                for conj in [false, true] {
                    let exact = seq.corr_s(n, h, conj).unwrap().to_complex();
                    let direct = crate::oracle::direct_corr(&vals, 2, n, h, conj);
                    assert!((exact - direct).norm() < 1e-9, "n={n} h={h} conj={conj}");
                }
            }
        }
    }

    #[test]
    fn fft_matches_direct_at_full_period() {
        let seq = toy_seq();
        let direct = seq
            .corr_all_shifts(18, 18, false, CorrStrategy::Direct)
            .unwrap();
        let fft = seq.corr_all_shifts(18, 18, false, CorrStrategy::Fft).unwrap();
        for (a, b) in direct.iter().zip(&fft) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!(matches!(
            seq.corr_all_shifts(10, 5, false, CorrStrategy::Fft),
            Err(CorrError::FftNeedsFullPeriod { n: 10, r: 18 })
        ));
    }

    #[test]
    fn t_sum_basics() {
        let seq = toy_seq();
        let r = seq.period();
        let mut prev = 0.0;
        for h in 1..=r {
            let t = seq.t_sum(h).unwrap();
            assert!(t >= prev);
            assert!(t <= h as f64 * (r * r) as f64 + 1e-6);
            prev = t;
        }
    }

    #[test]
    fn parseval() {
        let seq = toy_seq();
        let spec = seq.spectrum();
        let total: f64 = spec.iter().map(|z| z.norm_sqr()).sum();
        let info = seq.info();
        let expect = (info.r * info.d * (info.ord_p - 1)) as f64;
        assert!((total - expect).abs() / expect < 1e-9);
    }

    #[test]
    fn spectrum_single_matches_fft() {
        let seq = toy_seq();
        let spec = seq.spectrum();
        for a in 1..=18i64 {
            let direct = seq.spectrum_single(a);
            let from_fft = spec[(a - 1) as usize];
            assert!((direct - from_fft).norm() < 1e-9, "a = {a}");
        }
        // periodicity in a
        assert!((seq.spectrum_single(3) - seq.spectrum_single(21)).norm() < 1e-9);
    }

    #[test]
    fn spectral_identity_toy() {
        let seq = toy_seq();
        let (lhs, rhs) = seq.spectral_t_identity().unwrap();
        assert!((lhs - rhs).abs() / rhs.max(1.0) < 1e-6, "lhs={lhs} rhs={rhs}");
        let info = seq.info();
        let floor = ((info.d * (info.ord_p - 1)) as f64).powi(2);
        assert!(lhs >= floor - 1e-6);
    }

    #[test]
    fn u_avg_m2_collapses_to_shift_average() {
        let seq = toy_seq();
        let u2 = seq.u_avg(2, 17, 18, None).unwrap();
        assert!(!u2.sampled);
        let mut manual = 0.0;
        for h in 1..=17i64 {
            manual += seq.corr_s(18, h, false).unwrap().abs();
        }
        manual /= 17.0;
        assert!((u2.value - manual).abs() < 1e-9);
        assert!(u2.value <= 18.0);
    }

    #[test]
    fn tuple_enumeration_matches_manual_m3() {
        let seq = toy_seq();
        let u3 = seq.u_avg(3, 4, 18, None).unwrap();
        let mut manual = 0.0;
        for h2 in 1..=4u64 {
            for h3 in 1..=4u64 {
                manual += seq.tuple_inner_abs(18, &[h2, h3], true);
            }
        }
        manual /= 16.0;
        assert!((u3.value - manual).abs() < 1e-9);
    }

    #[test]
    fn v_avg_shift_invariance_at_full_period() {
        let seq = toy_seq();
        // term for (h_1..h_m) equals the term for (h_1+c..h_m+c) at N = R
        for c in 1..=5u64 {
            for tuple in [[1u64, 3], [2, 2], [4, 1]] {
                let t0 = seq.tuple_inner_abs(18, &tuple, false);
                let tc: Vec<u64> = tuple.iter().map(|h| h + c).collect();
                let t1 = seq.tuple_inner_abs(18, &tc, false);
                assert!((t0 - t1).abs() < 1e-9);
            }
        }
        let v2 = seq.v_avg(2, 4, 18, None).unwrap();
        assert!(v2.value <= 18.0);
    }

    #[test]
    fn montecarlo_kicks_in_above_budget() {
        let seq = toy_seq();
        let full = seq.u_avg(3, 4, 18, None).unwrap();
        assert_eq!(full.tuples, 16);
        assert!(!full.sampled);
        // 18^5 tuples exceed the budget: sampling is mandatory
        assert!(matches!(
            seq.u_avg(6, 18, 18, None),
            Err(CorrError::TupleBudgetExceeded { .. })
        ));
        let a = seq.u_avg(6, 18, 18, Some((200, 7))).unwrap();
        let b = seq.u_avg(6, 18, 18, Some((200, 7))).unwrap();
        assert!(a.sampled);
        assert_eq!(a.value, b.value);
        assert!(a.value <= 18.0);
    }

    #[test]
    fn weighted_chain_trivia() {
        let seq = toy_seq();
        let r = seq.period() as usize;
        let zeros = vec![Complex64::new(0.0, 0.0); r];
        let (s, bound, ok) = seq.weighted_chain_check(&zeros, 5).unwrap();
        assert_eq!(s, 0.0);
        assert!(ok && bound > 0.0);
        let ones = vec![Complex64::new(1.0, 0.0); r];
        let (_, _, ok1) = seq.weighted_chain_check(&ones, 5).unwrap();
        assert!(ok1);
        let bad = vec![Complex64::new(2.0, 0.0); r];
        assert!(matches!(
            seq.weighted_chain_check(&bad, 5),
            Err(CorrError::WeightTooLarge { index: 0, .. })
        ));
    }

    #[test]
    fn exceptional_counts_toy() {
        let seq = toy_seq();
        let (c_big, _) = seq.exceptional_count(18, 17, 1.5, 1.0).unwrap();
        assert_eq!(c_big, 0);
        let (c_half, rhs) = seq.exceptional_count(18, 17, 0.5, 1.0).unwrap();
        // direct scan oracle
        let mut manual = 0;
        for h in 1..=17i64 {
            if seq.corr_s(18, h, false).unwrap().abs() >= 0.5 * 18.0 {
                manual += 1;
            }
        }
        assert_eq!(c_half, manual);
        assert!(rhs.is_none(), "toy context cannot satisfy the hypothesis");
        // monotone nonincreasing in Delta
        let mut prev = u64::MAX;
        for delta in [0.1, 0.3, 0.5, 0.8, 1.1] {
            let (c, _) = seq.exceptional_count(18, 17, delta, 1.0).unwrap();
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn mult_identity_toy() {
        let f = PrimeField::new(5).unwrap();
        let c = Curve::new(f, f.elem(1), f.elem(1)).unwrap();
        let p = c.point(0, 1).unwrap();
        let ctx = EdsContext::new(c, p, 9).unwrap();
        let chi = Character::build(f, 2).unwrap();
        for m in 1..=30u64 {
            for n in 1..=30u64 {
                if n % 9 == 0 {
                    assert!(mult_identity_check(&ctx, &chi, m, n).is_err());
                } else {
                    assert!(
                        mult_identity_check(&ctx, &chi, m, n).unwrap(),
                        "m={m} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn weil_sum_preconditions_and_periodicity() {
        let f = PrimeField::new(5).unwrap();
        let c = Curve::new(f, f.elem(1), f.elem(1)).unwrap();
        let p = c.point(0, 1).unwrap();
        let ctx = EdsContext::new(c, p, 9).unwrap();
        let chi = Character::build(f, 2).unwrap();
        // R = 18; k, l must be coprime to 18 and distinct
        assert!(weil_sum_check(&ctx, &chi, 5, 5, 1, 0).is_err());
        assert!(weil_sum_check(&ctx, &chi, 6, 5, 1, 0).is_err());
        assert!(weil_sum_check(&ctx, &chi, 5, 7, 9, 0).is_err());
        let (v0, budget) = weil_sum_check(&ctx, &chi, 5, 7, 1, 2).unwrap();
        let (v1, _) = weil_sum_check(&ctx, &chi, 5, 7, 1, 2 + 18).unwrap();
        assert!((v0 - v1).norm() < 1e-9);
        assert!(v0.norm() <= 18.0 + 1e-9);
        assert!(budget > 0.0);
    }

    #[test]
    fn bound_formula_shapes() {
        // first term decreasing in H, second increasing
        let b_small = bound_b1(10007, 1000, 4, 1.0, 1.0, false).unwrap();
        let b_large = bound_b1(10007, 1000, 256, 1.0, 1.0, false).unwrap();
        assert!(b_small.is_finite() && b_large.is_finite());
        let complete = bound_b1(10007, 1000, 16, 1.0, 1.0, true).unwrap();
        let partial = bound_b1(10007, 1000, 16, 1.0, 1.0, false).unwrap();
        assert!(complete <= partial);
        assert!(matches!(
            bound_b1(10007, 8, 2, 1.0, 1.0, false),
            Err(CorrError::RTooSmallForBounds { r: 8, min: 16 })
        ));
        // B2 scales exactly as H^{-1/4}
        let p = 101u64;
        let r = 2_000_000u64; // large enough for the hypothesis at small p
        assert!(b2_hypothesis_holds(p, r));
        let b1 = bound_b2(p, r, 16, 1.0).unwrap().unwrap();
        let b2v = bound_b2(p, r, 256, 1.0).unwrap().unwrap();
        assert!((b1 / b2v - 2.0).abs() < 1e-9); // (256/16)^{1/4} = 2
        assert!(bound_b2(10007, 1000, 4, 1.0).unwrap().is_none());
    }
}
