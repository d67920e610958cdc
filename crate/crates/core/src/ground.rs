//! Exact rationals, the p-adic valuation on them, and the finitely generated
//! value groups `(1/d)Z` that appear along a MacLane chain.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"a"`, `"-a"`, `"a/b"` or `"-a/b"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let s = text.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let bad = || Error::BadRational(text.to_string());
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator(text.to_string()));
    }
    let q = Rat::new(num, den);
    Ok(if neg { -q } else { q })
}

/// A rational number or the symbol `INFINITY`, which is larger than every
/// rational and absorbs addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rat::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(q) => Some(q),
            ExtRat::Infinity => None,
        }
    }

    /// `n * self`, with the convention `0 * INFINITY = 0`.
    pub fn scale(&self, n: usize) -> ExtRat {
        match self {
            _ if n == 0 => ExtRat::zero(),
            ExtRat::Finite(q) => ExtRat::Finite(q * BigInt::from(n)),
            ExtRat::Infinity => ExtRat::Infinity,
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(q: Rat) -> Self {
        ExtRat::Finite(q)
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinity,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

impl Sub<&Rat> for &ExtRat {
    type Output = ExtRat;
    fn sub(self, rhs: &Rat) -> ExtRat {
        match self {
            ExtRat::Finite(a) => ExtRat::Finite(a - rhs),
            ExtRat::Infinity => ExtRat::Infinity,
        }
    }
}

impl Neg for &ExtRat {
    type Output = Option<ExtRat>;
    fn neg(self) -> Option<ExtRat> {
        self.finite().map(|q| ExtRat::Finite(-q))
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(q) => write!(f, "{q}"),
            ExtRat::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "INFINITY" => Ok(ExtRat::Infinity),
            t => parse_rational(t).map(ExtRat::Finite),
        }
    }
}

/// The ground field `Q_p`, represented by its prime. The valuation is
/// normalized by `v(p) = 1`, so the base value group is `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundContext {
    p: u64,
}

impl GroundContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(GroundContext { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^k` as a rational; `k` may be negative.
    pub fn p_pow(&self, k: i64) -> Rat {
        let base = self.p_big();
        let mag = num_traits::pow(base, k.unsigned_abs() as usize);
        if k >= 0 {
            Rat::from_integer(mag)
        } else {
            Rat::new(BigInt::one(), mag)
        }
    }

    /// p-adic valuation of a rational; `INFINITY` for zero.
    pub fn vp(&self, q: &Rat) -> ExtRat {
        if q.is_zero() {
            return ExtRat::Infinity;
        }
        let v = self.vp_int(q.numer()) - self.vp_int(q.denom());
        ExtRat::Finite(Rat::from_integer(BigInt::from(v)))
    }

    fn vp_int(&self, n: &BigInt) -> i64 {
        let p = self.p_big();
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }

    /// Integer valuation of a nonzero rational.
    pub fn vp_i64(&self, q: &Rat) -> Option<i64> {
        if q.is_zero() {
            None
        } else {
            Some(self.vp_int(q.numer()) - self.vp_int(q.denom()))
        }
    }
}

/// Deterministic trial division; inputs are small primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The subgroup `(1/d)Z` of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ValueGroup {
    d: u64,
}

impl ValueGroup {
    /// The base group `Z = v(Q_p^*)`.
    pub const INTEGERS: ValueGroup = ValueGroup { d: 1 };

    pub fn new(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Contract("value group denominator must be positive".into()));
        }
        Ok(ValueGroup { d })
    }

    pub fn denominator(&self) -> u64 {
        self.d
    }

    /// The smallest group containing `self` and the group generated by `q`.
    pub fn join_rational(&self, q: &Rat) -> Result<ValueGroup> {
        let den = q
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("denominator of {q}")))?;
        Ok(self.join(&ValueGroup { d: den }))
    }

    pub fn join(&self, other: &ValueGroup) -> ValueGroup {
        ValueGroup { d: self.d.lcm(&other.d) }
    }

    pub fn contains(&self, q: &Rat) -> bool {
        (q * BigInt::from(self.d)).is_integer()
    }

    /// `(sup : self)`, defined when `self` is a subgroup of `sup`.
    pub fn index_in(&self, sup: &ValueGroup) -> Result<u64> {
        if sup.d % self.d != 0 {
            return Err(Error::NotSubgroup { sub: self.d, sup: sup.d });
        }
        Ok(sup.d / self.d)
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            f.write_str("Z")
        } else {
            write!(f, "(1/{})Z", self.d)
        }
    }
}
