//! Exact arithmetic in the prime field F_p for odd primes p > 3.
//!
//! Moduli are capped at 62 bits so every product fits in a 128-bit
//! intermediate; no arbitrary-precision arithmetic is involved.

use crate::factor;
use thiserror::Error;

/// Largest admissible modulus (62 bits).
pub const MAX_MODULUS_BITS: u32 = 62;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must be an odd prime > 3")]
    TooSmall(u64),
    #[error("modulus {0} exceeds the 62-bit cap")]
    TooLarge(u64),
    #[error("division by zero in F_p")]
    DivisionByZero,
    #[error("batch inversion input contains zero at index {0}")]
    ZeroInBatch(usize),
    #[error("operands belong to different prime fields ({0} vs {1})")]
    MismatchedFields(u64, u64),
}

/// The prime field F_p, p an odd prime > 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

/// A canonical residue in [0, p-1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    p: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PrimeField {
    /// Builds the field, verifying primality and the size cap.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= 3 {
            return Err(FieldError::TooSmall(p));
        }
        if p >> MAX_MODULUS_BITS != 0 {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Residue of an arbitrary u64.
    pub fn elem(&self, v: u64) -> FieldElem {
        FieldElem {
            value: v % self.p,
            p: self.p,
        }
    }

    /// Residue of a signed integer.
    pub fn elem_i64(&self, v: i64) -> FieldElem {
        let r = v.rem_euclid(self.p as i64) as u64;
        FieldElem { value: r, p: self.p }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { value: 0, p: self.p }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { value: 1, p: self.p }
    }

    /// Smallest primitive root g >= 2 of F_p*.
    pub fn primitive_root(&self) -> FieldElem {
        let phi = self.p - 1;
        let primes: Vec<u64> = factor::factorize(phi).into_iter().map(|(q, _)| q).collect();
        let mut g = 2u64;
        loop {
            if primes.iter().all(|&q| pow_mod(g, phi / q, self.p) != 1) {
                return self.elem(g);
            }
            g += 1;
            assert!(g < self.p, "no primitive root found; modulus not prime?");
        }
    }
}

impl FieldElem {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElem) {
        assert_eq!(
            self.p, other.p,
            "operands belong to different prime fields ({} vs {})",
            self.p, other.p
        );
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.check(other);
        let mut v = self.value + other.value;
        if v >= self.p {
            v -= self.p;
        }
        FieldElem { value: v, p: self.p }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.check(other);
        let v = if self.value >= other.value {
            self.value - other.value
        } else {
            self.value + self.p - other.value
        };
        FieldElem { value: v, p: self.p }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.check(other);
        FieldElem {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }

    pub fn neg(&self) -> FieldElem {
        let v = if self.value == 0 { 0 } else { self.p - self.value };
        FieldElem { value: v, p: self.p }
    }

    pub fn square(&self) -> FieldElem {
        self.mul(self)
    }

    /// x^e by square-and-multiply; 0^0 = 1.
    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem {
            value: pow_mod(self.value, e, self.p),
            p: self.p,
        }
    }

    /// Multiplicative inverse; `DivisionByZero` for the zero element.
    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Fermat: x^{p-2}. p is prime by construction.
        Ok(self.pow(self.p - 2))
    }

    /// Euler criterion.
    pub fn is_square(&self) -> bool {
        self.value == 0 || pow_mod(self.value, (self.p - 1) / 2, self.p) == 1
    }

    /// Tonelli-Shanks square root, canonicalized to [0, (p-1)/2].
    /// Returns None for non-residues; sqrt(0) = 0.
    pub fn sqrt(&self) -> Option<FieldElem> {
        let p = self.p;
        if self.value == 0 {
            return Some(*self);
        }
        if pow_mod(self.value, (p - 1) / 2, p) != 1 {
            return None;
        }
        let root = if p % 4 == 3 {
            pow_mod(self.value, (p + 1) / 4, p)
        } else {
            // Tonelli-Shanks for p = 1 mod 4.
            let mut q = p - 1;
            let mut s = 0u32;
            while q & 1 == 0 {
                q >>= 1;
                s += 1;
            }
            let mut z = 2u64;
            while pow_mod(z, (p - 1) / 2, p) != p - 1 {
                z += 1;
            }
            let mut m = s;
            let mut c = pow_mod(z, q, p);
            let mut t = pow_mod(self.value, q, p);
            let mut r = pow_mod(self.value, (q + 1) / 2, p);
            while t != 1 {
                let mut i = 0u32;
                let mut tt = t;
                while tt != 1 {
                    tt = mul_mod(tt, tt, p);
                    i += 1;
                }
                let b = pow_mod(c, 1u64 << (m - i - 1), p);
                m = i;
                c = mul_mod(b, b, p);
                t = mul_mod(t, c, p);
                r = mul_mod(r, b, p);
            }
            r
        };
        let canonical = root.min(p - root);
        Some(FieldElem { value: canonical, p })
    }
}

/// Montgomery's batch-inversion trick: one inversion plus 3(n-1) products.
pub fn batch_inv(xs: &[FieldElem]) -> Result<Vec<FieldElem>, FieldError> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(i) = xs.iter().position(|x| x.is_zero()) {
        return Err(FieldError::ZeroInBatch(i));
    }
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = xs[0];
    prefix.push(acc);
    for x in &xs[1..] {
        acc = acc.mul(x);
        prefix.push(acc);
    }
    let mut inv_acc = acc.inv()?;
    let mut out = vec![xs[0]; xs.len()];
    for i in (1..xs.len()).rev() {
        out[i] = inv_acc.mul(&prefix[i - 1]);
        inv_acc = inv_acc.mul(&xs[i]);
    }
    out[0] = inv_acc;
    Ok(out)
}
