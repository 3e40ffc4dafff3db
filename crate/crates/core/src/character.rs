//! Multiplicative characters of F_p* of exact order d, with values kept
//! exactly as powers of the primitive d-th root of unity, plus an exact
//! cyclotomic-integer accumulator for sums of such values.

use crate::field::{FieldElem, PrimeField};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::TAU;
use thiserror::Error;

/// Above this modulus the full index table is replaced by per-query
/// baby-step giant-step discrete logs.
pub const DLOG_TABLE_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CharError {
    #[error("order {d} does not divide p - 1 = {phi}; valid orders are the divisors of {phi}")]
    InvalidOrder { d: u64, phi: u64 },
    #[error("order {0} must be at least 2")]
    OrderTooSmall(u64),
    #[error("twist {t} must be coprime to the order {d}")]
    BadTwist { t: u64, d: u64 },
}

/// chi(x) as an exact d-th root of unity exponent, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    /// zeta_d^t with 0 <= t < d.
    Root(u64),
}

impl CharValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn mul(&self, other: &CharValue, d: u64) -> CharValue {
        match (self, other) {
            (CharValue::Root(a), CharValue::Root(b)) => CharValue::Root((a + b) % d),
            _ => CharValue::Zero,
        }
    }

    pub fn conj(&self, d: u64) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(t) => CharValue::Root((d - t) % d),
        }
    }

    /// v^e; exponents reduce mod d. Zero^0 is left as Zero since every
    /// caller guarantees a nonzero base when e = 0.
    pub fn pow(&self, e: u64, d: u64) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(t) => {
                CharValue::Root(((*t as u128 * (e % d) as u128) % d as u128) as u64)
            }
        }
    }

    pub fn to_complex(&self, d: u64) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(t) => Complex64::from_polar(1.0, TAU * *t as f64 / d as f64),
        }
    }
}

enum DlogBackend {
    /// table[x - 1] = ind_g(x) for x in 1..p.
    Table(Vec<u32>),
    /// Baby-step giant-step: baby[g^j] = j for j < m, giant = g^{-m}.
    Bsgs {
        baby: HashMap<u64, u64>,
        giant: FieldElem,
        m: u64,
    },
}

/// A multiplicative character of F_p* of exact order d.
pub struct Character {
    field: PrimeField,
    g: FieldElem,
    d: u64,
    twist: u64,
    dlog: DlogBackend,
}

impl Character {
    /// The canonical character of order d: smallest primitive root g,
    /// chi(g^i) = zeta_d^{i mod d}.
    pub fn build(field: PrimeField, d: u64) -> Result<Self, CharError> {
        Self::build_twisted(field, d, 1)
    }

    /// chi_t(x) = chi(x)^t for t coprime to d; same exact order d.
    pub fn build_twisted(field: PrimeField, d: u64, twist: u64) -> Result<Self, CharError> {
        let phi = field.modulus() - 1;
        if d < 2 {
            return Err(CharError::OrderTooSmall(d));
        }
        if phi % d != 0 {
            return Err(CharError::InvalidOrder { d, phi });
        }
        let t = twist % d;
        if gcd(t, d) != 1 {
            return Err(CharError::BadTwist { t: twist, d });
        }
        let g = field.primitive_root();
        let p = field.modulus();
        let dlog = if p <= DLOG_TABLE_CAP {
            let mut table = vec![0u32; (p - 1) as usize];
            let mut acc = field.one();
            for i in 0..p - 1 {
                table[(acc.value() - 1) as usize] = i as u32;
                acc = acc.mul(&g);
            }
            DlogBackend::Table(table)
        } else {
            let m = ((p - 1) as f64).sqrt().ceil() as u64 + 1;
            let mut baby = HashMap::with_capacity(m as usize);
            let mut acc = field.one();
            for j in 0..m {
                baby.entry(acc.value()).or_insert(j);
                acc = acc.mul(&g);
            }
            let giant = g.pow(m).inv().expect("g != 0");
            DlogBackend::Bsgs { baby, giant, m }
        };
        Ok(Character {
            field,
            g,
            d,
            twist: t,
            dlog,
        })
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn generator(&self) -> FieldElem {
        self.g
    }

    /// ind_g(x) for nonzero x.
    pub fn index(&self, x: &FieldElem) -> u64 {
        assert!(!x.is_zero(), "discrete log of zero");
        match &self.dlog {
            DlogBackend::Table(t) => t[(x.value() - 1) as usize] as u64,
            DlogBackend::Bsgs { baby, giant, m } => {
                let mut cur = *x;
                for i in 0..=*m {
                    if let Some(j) = baby.get(&cur.value()) {
                        return (i * m + j) % (self.field.modulus() - 1);
                    }
                    cur = cur.mul(giant);
                }
                unreachable!("BSGS exhausted without a match; g not a generator?");
            }
        }
    }

    pub fn eval(&self, x: &FieldElem) -> CharValue {
        if x.is_zero() {
            return CharValue::Zero;
        }
        let ind = self.index(x);
        let t = ((ind % self.d) as u128 * self.twist as u128 % self.d as u128) as u64;
        CharValue::Root(t)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact accumulator for sums of d-th roots of unity: signed counts
/// c_0..c_{d-1} representing sum_j c_j zeta_d^j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloVec {
    d: u64,
    counts: Vec<i64>,
}

impl CycloVec {
    pub fn new(d: u64) -> Self {
        CycloVec {
            d,
            counts: vec![0; d as usize],
        }
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Adds v^{weight_exp}; Zero contributes nothing.
    pub fn accumulate(&mut self, v: &CharValue, weight_exp: i64) {
        if let CharValue::Root(t) = v {
            let e = weight_exp.rem_euclid(self.d as i64) as u64;
            let idx = ((*t as u128 * e as u128) % self.d as u128) as usize;
            self.counts[idx] += 1;
        }
    }

    /// Adds v itself.
    pub fn push(&mut self, v: &CharValue) {
        if let CharValue::Root(t) = v {
            self.counts[*t as usize] += 1;
        }
    }

    /// Merge for parallel reductions; order-independent.
    pub fn merge(&mut self, other: &CycloVec) {
        assert_eq!(self.d, other.d);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.counts.iter().enumerate() {
            if *c != 0 {
                z += Complex64::from_polar(1.0, TAU * j as f64 / self.d as f64).scale(*c as f64);
            }
        }
        z
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn is_empty_sum(&self) -> bool {
        self.counts.iter().all(|c| *c == 0)
    }
}
