//! Independent brute-force references: symbolic division polynomials in
//! F_p[x,y] reduced modulo y^2 = x^3 + ax + b, and literal
//! term-by-term correlation sums. Nothing here shares code with the
//! block ladder in `divpoly`; these are the ground truth the fast paths
//! are tested against.

use crate::character::CharValue;
use crate::curve::{Curve, CurvePoint};
use crate::field::{FieldElem, PrimeField};
use num_complex::Complex64;
use thiserror::Error;

/// Largest index the symbolic oracle will build. The x-degree grows like
/// n^2/2; this keeps dense coefficient vectors comfortably small.
pub const PSI_ORACLE_MAX: u64 = 64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OracleError {
    #[error("symbolic oracle capped at n <= {max}, got {n}")]
    IndexTooLarge { n: u64, max: u64 },
    #[error("exact polynomial division left a nonzero remainder (internal inconsistency)")]
    InexactDivision,
}

/// An element of F_p[x,y] / (y^2 - x^3 - ax - b): two dense coefficient
/// vectors, one for the y^0 part and one for the y^1 part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoly {
    pub fx: Vec<FieldElem>,
    pub fy: Vec<FieldElem>,
}

impl CurvePoly {
    pub fn is_zero(&self) -> bool {
        self.fx.iter().all(|c| c.is_zero()) && self.fy.iter().all(|c| c.is_zero())
    }
}

/// The ambient ring, carrying the curve coefficients used to reduce y^2.
pub struct PolyRing {
    field: PrimeField,
    a: FieldElem,
    b: FieldElem,
}

fn trim(v: &mut Vec<FieldElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl PolyRing {
    pub fn new(curve: &Curve) -> Self {
        PolyRing {
            field: *curve.field(),
            a: curve.a(),
            b: curve.b(),
        }
    }

    pub fn zero(&self) -> CurvePoly {
        CurvePoly { fx: vec![], fy: vec![] }
    }

    pub fn constant(&self, c: FieldElem) -> CurvePoly {
        if c.is_zero() {
            self.zero()
        } else {
            CurvePoly { fx: vec![c], fy: vec![] }
        }
    }

    pub fn one(&self) -> CurvePoly {
        self.constant(self.field.one())
    }

    /// x^3 + ax + b as a univariate coefficient vector.
    fn curve_rhs(&self) -> Vec<FieldElem> {
        let f = &self.field;
        vec![self.b, self.a, f.zero(), f.one()]
    }

    fn uni_add(&self, p: &[FieldElem], q: &[FieldElem]) -> Vec<FieldElem> {
        let f = &self.field;
        let n = p.len().max(q.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = p.get(i).copied().unwrap_or_else(|| f.zero());
            let b = q.get(i).copied().unwrap_or_else(|| f.zero());
            out.push(a.add(&b));
        }
        trim(&mut out);
        out
    }

    fn uni_sub(&self, p: &[FieldElem], q: &[FieldElem]) -> Vec<FieldElem> {
        let f = &self.field;
        let n = p.len().max(q.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = p.get(i).copied().unwrap_or_else(|| f.zero());
            let b = q.get(i).copied().unwrap_or_else(|| f.zero());
            out.push(a.sub(&b));
        }
        trim(&mut out);
        out
    }

    fn uni_mul(&self, p: &[FieldElem], q: &[FieldElem]) -> Vec<FieldElem> {
        if p.is_empty() || q.is_empty() {
            return vec![];
        }
        let f = &self.field;
        let mut out = vec![f.zero(); p.len() + q.len() - 1];
        for (i, pi) in p.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                out[i + j] = out[i + j].add(&pi.mul(qj));
            }
        }
        trim(&mut out);
        out
    }

    /// Exact univariate division; errors on a nonzero remainder.
    fn uni_div_exact(
        &self,
        num: &[FieldElem],
        den: &[FieldElem],
    ) -> Result<Vec<FieldElem>, OracleError> {
        let mut den = den.to_vec();
        trim(&mut den);
        assert!(!den.is_empty(), "division by the zero polynomial");
        let mut rem = num.to_vec();
        trim(&mut rem);
        if rem.is_empty() {
            return Ok(vec![]);
        }
        if rem.len() < den.len() {
            return Err(OracleError::InexactDivision);
        }
        let f = &self.field;
        let lead_inv = den.last().unwrap().inv().expect("nonzero leading coeff");
        let mut quot = vec![f.zero(); rem.len() - den.len() + 1];
        while rem.len() >= den.len() {
            let shift = rem.len() - den.len();
            let coef = rem.last().unwrap().mul(&lead_inv);
            quot[shift] = coef;
            for (i, dc) in den.iter().enumerate() {
                rem[shift + i] = rem[shift + i].sub(&coef.mul(dc));
            }
            trim(&mut rem);
            if rem.is_empty() {
                break;
            }
        }
        if rem.is_empty() {
            Ok(quot)
        } else {
            Err(OracleError::InexactDivision)
        }
    }

    pub fn add(&self, p: &CurvePoly, q: &CurvePoly) -> CurvePoly {
        CurvePoly {
            fx: self.uni_add(&p.fx, &q.fx),
            fy: self.uni_add(&p.fy, &q.fy),
        }
    }

    pub fn sub(&self, p: &CurvePoly, q: &CurvePoly) -> CurvePoly {
        CurvePoly {
            fx: self.uni_sub(&p.fx, &q.fx),
            fy: self.uni_sub(&p.fy, &q.fy),
        }
    }

    /// Product with y^2 reduced to x^3 + ax + b.
    pub fn mul(&self, p: &CurvePoly, q: &CurvePoly) -> CurvePoly {
        let rhs = self.curve_rhs();
        let xx = self.uni_mul(&p.fx, &q.fx);
        let yy = self.uni_mul(&self.uni_mul(&p.fy, &q.fy), &rhs);
        let fx = self.uni_add(&xx, &yy);
        let xy = self.uni_mul(&p.fx, &q.fy);
        let yx = self.uni_mul(&p.fy, &q.fx);
        let fy = self.uni_add(&xy, &yx);
        CurvePoly { fx, fy }
    }

    /// Exact division, defined for the pure-parity operands that arise in
    /// the division polynomial recurrence (each operand has only an fx
    /// part or only an fy part).
    pub fn div_exact(&self, num: &CurvePoly, den: &CurvePoly) -> Result<CurvePoly, OracleError> {
        let den_fx_zero = den.fx.iter().all(|c| c.is_zero());
        let den_fy_zero = den.fy.iter().all(|c| c.is_zero());
        assert!(
            den_fx_zero ^ den_fy_zero,
            "div_exact expects a pure-parity nonzero divisor"
        );
        if den_fy_zero {
            // divisor g(x): divide both parts
            Ok(CurvePoly {
                fx: self.uni_div_exact(&num.fx, &den.fx)?,
                fy: self.uni_div_exact(&num.fy, &den.fx)?,
            })
        } else {
            // divisor y g(x): (n0 + y n1) / (y g) = n1/g + y * n0/(rhs * g)
            let rhs_g = self.uni_mul(&self.curve_rhs(), &den.fy);
            Ok(CurvePoly {
                fx: self.uni_div_exact(&num.fy, &den.fy)?,
                fy: self.uni_div_exact(&num.fx, &rhs_g)?,
            })
        }
    }

    /// Substitutes the coordinates of an affine point.
    pub fn eval(&self, p: &CurvePoly, pt: &CurvePoint) -> FieldElem {
        let (x, y) = match pt {
            CurvePoint::Infinity => panic!("cannot evaluate at the point at infinity"),
            CurvePoint::Affine(x, y) => (x, y),
        };
        let f = &self.field;
        let horner = |cs: &[FieldElem]| {
            let mut acc = f.zero();
            for c in cs.iter().rev() {
                acc = acc.mul(x).add(c);
            }
            acc
        };
        horner(&p.fx).add(&y.mul(&horner(&p.fy)))
    }
}

/// The symbolic psi_0..psi_4 straight from the defining formulas.
fn psi_base(ring: &PolyRing, curve: &Curve) -> [CurvePoly; 5] {
    let f = curve.field();
    let a = curve.a();
    let b = curve.b();
    let z = f.zero();
    let psi0 = ring.zero();
    let psi1 = ring.one();
    let psi2 = CurvePoly {
        fx: vec![],
        fy: vec![f.elem(2)],
    };
    // 3x^4 + 6a x^2 + 12b x - a^2
    let psi3 = CurvePoly {
        fx: vec![
            a.square().neg(),
            f.elem(12).mul(&b),
            f.elem(6).mul(&a),
            z,
            f.elem(3),
        ],
        fy: vec![],
    };
    // 4y (x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
    let four = f.elem(4);
    let psi4 = CurvePoly {
        fx: vec![],
        fy: vec![
            four.mul(&f.elem(8).mul(&b.square()).add(&a.pow(3)).neg()),
            four.mul(&f.elem(4).mul(&a).mul(&b).neg()),
            four.mul(&f.elem(5).mul(&a.square()).neg()),
            four.mul(&f.elem(20).mul(&b)),
            four.mul(&f.elem(5).mul(&a)),
            z,
            four,
        ],
    };
    [psi0, psi1, psi2, psi3, psi4]
}

/// Symbolic psi_0..psi_n via the four-term recurrence with exact
/// polynomial division. Capped at `PSI_ORACLE_MAX`.
pub fn poly_psi_all(curve: &Curve, n: u64) -> Result<Vec<CurvePoly>, OracleError> {
    if n > PSI_ORACLE_MAX {
        return Err(OracleError::IndexTooLarge {
            n,
            max: PSI_ORACLE_MAX,
        });
    }
    let ring = PolyRing::new(curve);
    let base = psi_base(&ring, curve);
    let mut psis: Vec<CurvePoly> = base.to_vec();
    // psi_{m+2} = (psi_{m+1} psi_{m-1} psi_2^2 - psi_3 psi_m^2) / psi_{m-2}
    let psi2_sq = ring.mul(&psis[2], &psis[2]);
    for m in 3..=n.saturating_sub(2) {
        let t1 = ring.mul(
            &ring.mul(&psis[(m + 1) as usize], &psis[(m - 1) as usize]),
            &psi2_sq,
        );
        let t2 = ring.mul(&psis[3], &ring.mul(&psis[m as usize], &psis[m as usize]));
        let num = ring.sub(&t1, &t2);
        let next = ring.div_exact(&num, &psis[(m - 2) as usize])?;
        psis.push(next);
    }
    psis.truncate((n + 1) as usize);
    Ok(psis)
}

/// Symbolic psi_n.
pub fn poly_psi(curve: &Curve, n: u64) -> Result<CurvePoly, OracleError> {
    Ok(poly_psi_all(curve, n)?.pop().expect("nonempty"))
}

/// psi_n(P) via the symbolic route.
pub fn poly_eval(curve: &Curve, p: &CurvePoly, pt: &CurvePoint) -> FieldElem {
    PolyRing::new(curve).eval(p, pt)
}

/// Literal term-by-term S(N, h): sum over n = 1..N of s_n * s_{n+h}
/// (second factor conjugated when asked), all in complex doubles.
/// `values[i]` holds s_{i+1} over one full period; indices wrap.
pub fn direct_corr(values: &[CharValue], d: u64, n_terms: u64, h: i64, conj_second: bool) -> Complex64 {
    let r = values.len() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=n_terms as i64 {
        let first = values[(n - 1) as usize].to_complex(d);
        let idx = (n + h - 1).rem_euclid(r) as usize;
        let mut second = values[idx].to_complex(d);
        if conj_second {
            second = second.conj();
        }
        acc += first * second;
    }
    acc
}
