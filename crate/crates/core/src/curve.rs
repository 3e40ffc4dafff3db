//! The short Weierstrass curve E: y^2 = x^3 + ax + b over F_p, its group
//! law, point enumeration at desk scale and point orders.

use crate::factor;
use crate::field::{FieldElem, PrimeField};
use thiserror::Error;

/// Default cap on the modulus for full point enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CurveError {
    #[error("singular curve: 4a^3 + 27b^2 = 0 mod {0}")]
    Singular(u64),
    #[error("point ({0}, {1}) is not on the curve")]
    NotOnCurve(u64, u64),
    #[error("p = {p} exceeds the enumeration cap {cap}; supply a point explicitly")]
    EnumCapExceeded { p: u64, cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve {
    field: PrimeField,
    a: FieldElem,
    b: FieldElem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(FieldElem, FieldElem),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<FieldElem> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, _) => Some(*x),
        }
    }

    pub fn y(&self) -> Option<FieldElem> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(_, y) => Some(*y),
        }
    }
}

impl Curve {
    pub fn new(field: PrimeField, a: FieldElem, b: FieldElem) -> Result<Self, CurveError> {
        let four = field.elem(4);
        let twenty_seven = field.elem(27);
        let disc = four
            .mul(&a)
            .mul(&a)
            .mul(&a)
            .add(&twenty_seven.mul(&b).mul(&b));
        if disc.is_zero() {
            return Err(CurveError::Singular(field.modulus()));
        }
        Ok(Curve { field, a, b })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn a(&self) -> FieldElem {
        self.a
    }

    pub fn b(&self) -> FieldElem {
        self.b
    }

    /// x^3 + ax + b.
    pub fn rhs(&self, x: &FieldElem) -> FieldElem {
        x.square().mul(x).add(&self.a.mul(x)).add(&self.b)
    }

    pub fn on_curve(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    /// Affine point from coordinates, validated against the equation.
    pub fn point(&self, x: u64, y: u64) -> Result<CurvePoint, CurveError> {
        let pt = CurvePoint::Affine(self.field.elem(x), self.field.elem(y));
        if self.on_curve(&pt) {
            Ok(pt)
        } else {
            Err(CurveError::NotOnCurve(x % self.field.modulus(), y % self.field.modulus()))
        }
    }

    pub fn negate(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(*x, y.neg()),
        }
    }

    /// Chord-tangent group law.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1) = match p {
            CurvePoint::Infinity => return *q,
            CurvePoint::Affine(x, y) => (*x, *y),
        };
        let (x2, y2) = match q {
            CurvePoint::Infinity => return *p,
            CurvePoint::Affine(x, y) => (*x, *y),
        };
        let slope = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return CurvePoint::Infinity;
            }
            // tangent: (3x^2 + a) / 2y
            let num = self.field.elem(3).mul(&x1.square()).add(&self.a);
            let den = self.field.elem(2).mul(&y1);
            num.mul(&den.inv().expect("2y != 0 checked above"))
        } else {
            let num = y2.sub(&y1);
            let den = x2.sub(&x1);
            num.mul(&den.inv().expect("x2 != x1 checked above"))
        };
        let x3 = slope.square().sub(&x1).sub(&x2);
        let y3 = slope.mul(&x1.sub(&x3)).sub(&y1);
        CurvePoint::Affine(x3, y3)
    }

    /// nP by double-and-add; negative n via negation.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let (mut k, base) = if n < 0 {
            (n.unsigned_abs(), self.negate(p))
        } else {
            (n as u64, *p)
        };
        let mut acc = CurvePoint::Infinity;
        let mut addend = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &addend);
            }
            addend = self.add(&addend, &addend);
            k >>= 1;
        }
        acc
    }

    /// All points including Infinity, ordered Infinity first, then by
    /// (x, y) ascending. Refuses above the enumeration cap.
    pub fn enumerate_points(&self, cap: u64) -> Result<Vec<CurvePoint>, CurveError> {
        let p = self.field.modulus();
        if p > cap {
            return Err(CurveError::EnumCapExceeded { p, cap });
        }
        let mut pts = vec![CurvePoint::Infinity];
        for xv in 0..p {
            let x = self.field.elem(xv);
            let r = self.rhs(&x);
            if let Some(root) = r.sqrt() {
                if root.is_zero() {
                    pts.push(CurvePoint::Affine(x, root));
                } else {
                    let other = root.neg();
                    let (lo, hi) = if root.value() < other.value() {
                        (root, other)
                    } else {
                        (other, root)
                    };
                    pts.push(CurvePoint::Affine(x, lo));
                    pts.push(CurvePoint::Affine(x, hi));
                }
            }
        }
        Ok(pts)
    }

    /// Group order by enumeration.
    pub fn group_order(&self, cap: u64) -> Result<u64, CurveError> {
        Ok(self.enumerate_points(cap)?.len() as u64)
    }

    /// Least r >= 1 with rP = O, given a multiple of it (the group order).
    pub fn point_order(&self, pt: &CurvePoint, group_order: u64) -> u64 {
        let mut r = group_order;
        for (q, e) in factor::factorize(group_order) {
            for _ in 0..e {
                let cand = r / q;
                if self.scalar_mul(cand as i64, pt).is_infinity() {
                    r = cand;
                } else {
                    break;
                }
            }
        }
        r
    }

    /// First affine point in enumeration order with order >= min_order.
    pub fn find_point_min_order(
        &self,
        min_order: u64,
        cap: u64,
    ) -> Result<Option<(CurvePoint, u64)>, CurveError> {
        let pts = self.enumerate_points(cap)?;
        let n = pts.len() as u64;
        for pt in pts.iter().filter(|pt| !pt.is_infinity()) {
            let r = self.point_order(pt, n);
            if r >= min_order {
                return Ok(Some((*pt, r)));
            }
        }
        Ok(None)
    }
}
