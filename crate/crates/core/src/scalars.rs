//! Exact arithmetic substrate: big integers and rationals, the prime field
//! F_p, and binomial coefficients in both worlds.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ExactInt = BigInt;
/// Always kept in lowest terms with a positive denominator.
pub type ExactRat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("binomial index k = {k} is not below the prime {p}; falling-factorial formula is invalid")]
    IndexNotBelowPrime { k: i64, p: u64 },
    #[error("value {value} is not {p}-integral")]
    NotIntegral { value: String, p: u64 },
}

/// Commutative ring with identity, the coefficient domain of forms and
/// univariate polynomials.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_int(&BigInt::from(v))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Ring for BigInt {
    fn from_int(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Ring for BigRational {
    fn from_int(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

/// Binomial coefficient C(n, k), zero outside `0 <= k <= n`.
pub fn binom_exact(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// The field F_p. Primality is checked once, here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        // u32 range keeps products of residues inside u64.
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp {
            residue: v.rem_euclid(self.p as i64) as u64,
            modulus: self.p,
        }
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Fp {
        let r = v.mod_floor(&BigInt::from(self.p));
        Fp {
            residue: r.to_u64().expect("residue below modulus"),
            modulus: self.p,
        }
    }

    /// Raw residue arithmetic for the hot loops in elimination.
    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn inv_raw(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        Some(self.pow_raw(a, self.p - 2))
    }

    pub fn pow_raw(&self, mut base: u64, mut e: u64) -> u64 {
        base %= self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }
}

/// An element of F_p; carries its modulus so values from different fields
/// cannot be silently combined.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    residue: u64,
    modulus: u64,
}

impl Fp {
    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    pub fn inv(&self) -> Option<Fp> {
        self.field().inv_raw(self.residue).map(|r| Fp {
            residue: r,
            modulus: self.modulus,
        })
    }

    pub fn pow(&self, e: u64) -> Fp {
        Fp {
            residue: self.field().pow_raw(self.residue, e),
            modulus: self.modulus,
        }
    }

    fn check(&self, other: &Fp) {
        assert_eq!(self.modulus, other.modulus, "mixing residues of different fields");
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            residue: self.field().add_raw(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            residue: self.field().sub_raw(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(&rhs);
        Fp {
            residue: self.field().mul_raw(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            residue: self.field().sub_raw(0, self.residue),
            modulus: self.modulus,
        }
    }
}

/// C(n, k) mod p as the falling factorial n(n-1)...(n-k+1) times (k!)^{-1}.
///
/// Only valid for `k < p`, where k! is a unit; this is what makes the
/// reduction a polynomial in n.
pub fn binom_mod(n: u64, k: i64, field: &PrimeField) -> Result<Fp, ScalarError> {
    let p = field.modulus();
    if k >= p as i64 {
        return Err(ScalarError::IndexNotBelowPrime { k, p });
    }
    if k < 0 {
        return Ok(field.zero());
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k as u64 {
        // n - i may be negative as an integer only when k > n, where a zero
        // factor appears first anyway.
        let factor = (n as i128 - i as i128).rem_euclid(p as i128) as u64;
        num = field.mul_raw(num, factor);
        den = field.mul_raw(den, (i + 1) % p);
    }
    let inv = field.inv_raw(den).expect("k! is a unit for k < p");
    Ok(Fp {
        residue: field.mul_raw(num, inv),
        modulus: p,
    })
}

/// Reduce a p-integral rational into F_p.
pub fn reduce_mod(q: &ExactRat, field: &PrimeField) -> Result<Fp, ScalarError> {
    let den = field.from_bigint(q.denom());
    let inv = den.inv().ok_or_else(|| ScalarError::NotIntegral {
        value: q.to_string(),
        p: field.modulus(),
    })?;
    Ok(field.from_bigint(q.numer()) * inv)
}

/// Exponent of p in the nonzero integer v.
pub fn p_valuation(v: &BigInt, p: u64) -> u32 {
    assert!(!v.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = v.abs();
    let mut e = 0;
    loop {
        let (q, r) = v.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        v = q;
        e += 1;
    }
}
