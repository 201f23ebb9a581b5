use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    /// F_p.
    Prime,
    /// F_{p^k} as F_p[x]/(poly).
    Extension,
    /// Z/p^k with k >= 2.
    Local,
}

/// JSON-facing ring descriptor: `{kind, p, k, poly?}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub kind: RingKind,
    pub p: u32,
    pub k: u32,
    /// Monic modulus, low degree first, leading 1 included.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<u32>>,
}

impl RingSpec {
    pub fn prime(p: u32) -> Self {
        RingSpec {
            kind: RingKind::Prime,
            p,
            k: 1,
            poly: None,
        }
    }

    pub fn extension(p: u32, k: u32) -> Self {
        RingSpec {
            kind: RingKind::Extension,
            p,
            k,
            poly: None,
        }
    }

    pub fn local(p: u32, k: u32) -> Self {
        RingSpec {
            kind: RingKind::Local,
            p,
            k,
            poly: None,
        }
    }

    /// `F_q` for a prime power q.
    pub fn field(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        Ok(if k == 1 {
            RingSpec::prime(p)
        } else {
            RingSpec::extension(p, k)
        })
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Prime => write!(f, "F{}", self.p),
            RingKind::Extension => write!(f, "F{}", self.p.pow(self.k)),
            RingKind::Local => write!(f, "Z/{}", self.p.pow(self.k)),
        }
    }
}

/// Accepts `F5`, `F_9`, `GF(4)`, `Z/4`, `Z4`.
impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("unrecognised ring `{s}`"));
        let (field, num) = if let Some(r) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            (true, r)
        } else if let Some(r) = t.strip_prefix("F_").or_else(|| t.strip_prefix('F')) {
            (true, r)
        } else if let Some(r) = t.strip_prefix("Z/").or_else(|| t.strip_prefix('Z')) {
            (false, r)
        } else {
            return Err(bad());
        };
        let n: u32 = num.parse().map_err(|_| bad())?;
        let (p, k) = prime_power(n).ok_or_else(|| Error::InvalidInput(format!("{n} is not a prime power")))?;
        Ok(match (field, k) {
            (_, 1) => RingSpec::prime(p),
            (true, _) => RingSpec::extension(p, k),
            (false, _) => RingSpec::local(p, k),
        })
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `Some((p, k))` with n = p^k, p prime, k >= 1.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// A finite commutative local ring (F_p, F_{p^k} or Z/p^k), elements encoded
/// as `u8` indices with 0 and 1 the additive and multiplicative identities.
///
/// Every such ring is a chain ring: each nonzero x is `u * pi^v` for a unit
/// u, with pi = p for Z/p^k and pi = 0 (length 1) for fields. The Howell
/// form code only needs this valuation structure.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    spec: RingSpec,
    size: usize,
    length: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<Option<u8>>,
    val: Vec<u32>,
    unit_part: Vec<u8>,
    pi_pow: Vec<u8>,
    units: Vec<u8>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for FiniteRing {}

pub fn make_ring(spec: &RingSpec) -> Result<FiniteRing> {
    FiniteRing::new(spec)
}

impl FiniteRing {
    pub fn new(spec: &RingSpec) -> Result<Self> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if spec.k == 0 {
            return Err(Error::InvalidInput("exponent k must be >= 1".into()));
        }
        let size = (p as u64).checked_pow(spec.k).filter(|&s| s <= 256).ok_or_else(|| {
            Error::InvalidInput(format!("{} has more than 256 elements", spec))
        })? as usize;
        let mut spec = spec.clone();
        let (add, mul) = match spec.kind {
            RingKind::Prime => {
                if spec.k != 1 {
                    return Err(Error::InvalidInput("prime field needs k = 1".into()));
                }
                spec.poly = None;
                integer_tables(size)
            }
            RingKind::Local => {
                if spec.k < 2 {
                    return Err(Error::InvalidInput("Z/p^k needs k >= 2; use a prime field".into()));
                }
                spec.poly = None;
                integer_tables(size)
            }
            RingKind::Extension => {
                let poly = match &spec.poly {
                    Some(f) => f.clone(),
                    None => default_irreducible(p, spec.k),
                };
                check_poly(p, spec.k, &poly)?;
                let tables = poly_tables(p, spec.k, &poly);
                if !is_field(size, &tables.1) {
                    return Err(Error::InvalidInput(format!("{poly:?} is reducible over F_{p}")));
                }
                spec.poly = Some(poly);
                tables
            }
        };
        let mut ring = FiniteRing {
            size,
            length: if spec.kind == RingKind::Local { spec.k } else { 1 },
            spec,
            add,
            mul,
            neg: Vec::new(),
            inv: Vec::new(),
            val: Vec::new(),
            unit_part: Vec::new(),
            pi_pow: Vec::new(),
            units: Vec::new(),
        };
        ring.fill_derived();
        Ok(ring)
    }

    pub fn from_str_spec(s: &str) -> Result<Self> {
        FiniteRing::new(&s.parse()?)
    }

    pub fn field(q: u32) -> Result<Self> {
        FiniteRing::new(&RingSpec::field(q)?)
    }

    fn fill_derived(&mut self) {
        let n = self.size;
        self.neg = (0..n)
            .map(|a| (0..n).find(|&b| self.add[a * n + b] == 0).unwrap() as u8)
            .collect();
        self.inv = (0..n)
            .map(|a| (0..n).find(|&b| self.mul[a * n + b] == 1).map(|b| b as u8))
            .collect();
        self.units = (0..n).filter(|&a| self.inv[a].is_some()).map(|a| a as u8).collect();
        let pi: u8 = if self.is_field() { 0 } else { self.spec.p as u8 };
        let mut pow = vec![1u8];
        for _ in 0..self.length {
            let last = *pow.last().unwrap();
            pow.push(self.mul(last, pi));
        }
        self.pi_pow = pow;
        self.val = vec![self.length; n];
        self.unit_part = vec![0; n];
        for x in 1..n {
            if self.is_field() {
                self.val[x] = 0;
                self.unit_part[x] = x as u8;
            } else {
                let p = self.spec.p as usize;
                let (mut v, mut m) = (0, x);
                while m % p == 0 {
                    m /= p;
                    v += 1;
                }
                self.val[x] = v;
                self.unit_part[x] = m as u8;
            }
        }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn is_field(&self) -> bool {
        self.spec.kind != RingKind::Local
    }

    /// Nilpotency length of the maximal ideal (1 for fields).
    pub fn length(&self) -> u32 {
        self.length
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> usize {
        if self.is_field() {
            self.size
        } else {
            self.spec.p as usize
        }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        self.inv[a as usize]
    }

    #[inline]
    pub fn is_unit(&self, a: u8) -> bool {
        self.inv[a as usize].is_some()
    }

    pub fn units(&self) -> &[u8] {
        &self.units
    }

    /// Valuation with respect to the uniformizer; `length()` for zero.
    #[inline]
    pub fn val(&self, a: u8) -> u32 {
        self.val[a as usize]
    }

    /// A unit u with `a = u * pi^val(a)` (a nonzero).
    #[inline]
    pub fn unit_part(&self, a: u8) -> u8 {
        self.unit_part[a as usize]
    }

    #[inline]
    pub fn pi_pow(&self, v: u32) -> u8 {
        self.pi_pow[v as usize]
    }

    /// Splits `a = q * pi^v + r` with r the canonical remainder.
    pub fn divmod_pi_pow(&self, a: u8, v: u32) -> (u8, u8) {
        if self.is_field() {
            return if v == 0 { (a, 0) } else { (0, a) };
        }
        let m = (self.spec.p as usize).pow(v);
        let r = a as usize % m;
        (((a as usize - r) / m) as u8, r as u8)
    }

    /// Image in the residue field, encoded as an integer below `residue_size()`.
    #[inline]
    pub fn residue(&self, a: u8) -> u8 {
        if self.is_field() {
            a
        } else {
            a % self.spec.p as u8
        }
    }

    /// Integer label used in JSON and display.
    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.size).map(|a| a as u8)
    }

    /// Exhaustive check of the commutative ring axioms.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.size as u8;
        let fail = |what: &str, a: u8, b: u8, c: u8| {
            Err(Error::Consistency(format!("{} fails {what} at ({a},{b},{c})", self.spec)))
        };
        for a in 0..n {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail("identity", a, 0, 0);
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail("commutativity", a, b, 0);
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity", a, b, c);
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail("multiplicative associativity", a, b, c);
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("distributivity", a, b, c);
                    }
                }
            }
        }
        for a in 0..n {
            let brute = (0..n).any(|b| self.mul(a, b) == 1);
            if brute != self.is_unit(a) {
                return fail("unit set", a, 0, 0);
            }
        }
        Ok(())
    }
}

fn integer_tables(n: usize) -> (Vec<u8>, Vec<u8>) {
    let mut add = vec![0u8; n * n];
    let mut mul = vec![0u8; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = ((a + b) % n) as u8;
            mul[a * n + b] = ((a * b) % n) as u8;
        }
    }
    (add, mul)
}

fn digits(mut x: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn check_poly(p: u32, k: u32, poly: &[u32]) -> Result<()> {
    if poly.len() != k as usize + 1 || poly[k as usize] != 1 || poly.iter().any(|&c| c >= p) {
        return Err(Error::InvalidInput(format!(
            "modulus must be monic of degree {k} with coefficients below {p}"
        )));
    }
    Ok(())
}

fn poly_tables(p: u32, k: u32, poly: &[u32]) -> (Vec<u8>, Vec<u8>) {
    let (p, k) = (p as usize, k as usize);
    let n = p.pow(k as u32);
    let mut add = vec![0u8; n * n];
    let mut mul = vec![0u8; n * n];
    for a in 0..n {
        let da = digits(a, p, k);
        for b in 0..n {
            let db = digits(b, p, k);
            let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * n + b] = undigits(&s, p) as u8;
            let mut prod = vec![0usize; 2 * k];
            for i in 0..k {
                for j in 0..k {
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                }
            }
            for deg in (k..2 * k).rev() {
                let c = prod[deg];
                if c != 0 {
                    for (i, &f) in poly.iter().enumerate().take(k) {
                        let idx = deg - k + i;
                        prod[idx] = (prod[idx] + p - (c * f as usize) % p) % p;
                    }
                    prod[deg] = 0;
                }
            }
            mul[a * n + b] = undigits(&prod[..k], p) as u8;
        }
    }
    (add, mul)
}

fn is_field(n: usize, mul: &[u8]) -> bool {
    (1..n).all(|a| (1..n).any(|b| mul[a * n + b] == 1))
}

/// Lexicographically least monic irreducible polynomial of degree k over F_p,
/// ordered by the base-p integer of its lower coefficients.
pub fn default_irreducible(p: u32, k: u32) -> Vec<u32> {
    let n = (p as usize).pow(k);
    for c in 0..n {
        let mut poly: Vec<u32> = digits(c, p as usize, k as usize).into_iter().map(|d| d as u32).collect();
        poly.push(1);
        let (_, mul) = poly_tables(p, k, &poly);
        if is_field(n, &mul) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rings() {
        let f2 = FiniteRing::field(2).unwrap();
        assert_eq!((f2.size(), f2.units().len()), (2, 1));
        let f4 = FiniteRing::field(4).unwrap();
        assert_eq!(f4.spec().poly.as_deref(), Some(&[1, 1, 1][..]));
        assert_eq!((f4.size(), f4.units().len()), (4, 3));
        let z4 = FiniteRing::from_str_spec("Z/4").unwrap();
        assert_eq!(z4.units(), &[1, 3]);
        for r in [&f2, &f4, &z4] {
            r.check_axioms().unwrap();
        }
    }

    #[test]
    fn all_supported_small_rings_satisfy_axioms() {
        for s in ["F2", "F3", "F4", "F5", "F7", "F8", "F9", "F16", "F25", "Z/4", "Z/8", "Z/9", "Z/27", "Z/25"] {
            let r = FiniteRing::from_str_spec(s).unwrap();
            r.check_axioms().unwrap();
            if r.is_field() {
                assert_eq!(r.units().len(), r.size() - 1, "{s}");
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FiniteRing::new(&RingSpec::prime(6)).is_err());
        assert!(FiniteRing::from_str_spec("Z/6").is_err());
        assert!(FiniteRing::from_str_spec("F512").is_err());
        let reducible = RingSpec {
            poly: Some(vec![1, 0, 1]),
            ..RingSpec::extension(2, 2)
        };
        assert!(FiniteRing::new(&reducible).is_err());
    }

    #[test]
    fn valuations_in_z8() {
        let r = FiniteRing::from_str_spec("Z/8").unwrap();
        for a in 1..8u8 {
            let v = r.val(a);
            assert_eq!(r.mul(r.unit_part(a), r.pi_pow(v)), a);
            assert!(r.is_unit(r.unit_part(a)));
        }
        assert_eq!(r.val(0), 3);
        assert_eq!(r.divmod_pi_pow(7, 2), (1, 3));
    }

    #[test]
    fn spec_round_trip() {
        for s in ["F2", "F9", "Z/4"] {
            let spec: RingSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            let json = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<RingSpec>(&json).unwrap(), spec);
        }
    }
}
