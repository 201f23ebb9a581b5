use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Arbitrary-precision integer that stays inline while it fits in an `i64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    /// ±1
    #[inline]
    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn add(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Int) -> Int {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_mul(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() * o.to_big())
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(a) => match a.checked_neg() {
                Some(c) => Int::Small(c),
                None => Int::from_big(-BigInt::from(*a)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }

    /// Residue in `0..p`.
    pub fn rem_euclid_u32(&self, p: u32) -> u32 {
        match self {
            Int::Small(a) => a.rem_euclid(p as i64) as u32,
            Int::Big(b) => {
                let r = (**b).clone() % BigInt::from(p);
                let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                r.to_u32().unwrap()
            }
        }
    }

    pub fn bits(&self) -> u64 {
        match self {
            Int::Small(a) => 64 - a.unsigned_abs().leading_zeros() as u64,
            Int::Big(b) => b.bits(),
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int::from_big(v)
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Small values as JSON numbers, large ones as decimal strings.
impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Int::Small(v) => s.serialize_i64(*v),
            Int::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

/// Coefficient rings for sparse elimination.
pub trait Coef: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse of a unit.
    fn unit_inv(&self) -> Self;
}

impl Coef for Int {
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        Int::is_unit(self)
    }
    fn add(&self, o: &Self) -> Self {
        Int::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Int::mul(self, o)
    }
    fn neg(&self) -> Self {
        Int::neg(self)
    }
    fn unit_inv(&self) -> Self {
        self.clone()
    }
}

/// Element of F_p carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub v: u32,
    pub p: u32,
}

impl Fp {
    pub fn new(v: u32, p: u32) -> Self {
        Fp { v: v % p, p }
    }
}

impl Coef for Fp {
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_unit(&self) -> bool {
        self.v != 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp {
            v: ((self.v as u64 + o.v as u64) % self.p as u64) as u32,
            p: self.p,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Fp {
            v: ((self.v as u64 * o.v as u64) % self.p as u64) as u32,
            p: self.p,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            v: (self.p - self.v) % self.p,
            p: self.p,
        }
    }
    fn unit_inv(&self) -> Self {
        let (p, mut r, mut b, mut e) = (self.p as u64, 1u64, self.v as u64, self.p as u64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        Fp { v: r as u32, p: self.p }
    }
}

pub fn big_is_unit(b: &BigInt) -> bool {
    b.abs().is_one()
}

pub fn big_is_zero(b: &BigInt) -> bool {
    b.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::Small(i64::MAX);
        let b = a.add(&Int::ONE);
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.sub(&Int::ONE), a);
        let c = a.mul(&a);
        assert_eq!(c.to_big(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(Int::Small(i64::MIN).neg().to_big(), -BigInt::from(i64::MIN));
        assert_eq!(Int::Small(-7).rem_euclid_u32(3), 2);
    }

    #[test]
    fn fp_inverse() {
        for v in 1..7 {
            let x = Fp::new(v, 7);
            assert_eq!(x.mul(&x.unit_inv()).v, 1);
        }
    }
}
