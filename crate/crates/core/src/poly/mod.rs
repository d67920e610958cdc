//! Dense univariate polynomials over `Q`.

mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ground::Rat;

pub use parse::{parse, ParseError, ParseErrorKind};

/// Coefficients in ascending degree, with no trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rat::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Polynomial::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Polynomial::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Polynomial::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * at + c)
    }

    /// `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, c| &(&acc * inner) + &Polynomial::constant(c.clone()))
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Euclidean division by a monic, nonconstant `g`.
    pub fn divrem(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if !g.is_monic() || g.is_constant() {
            return Err(Error::BadDivisor);
        }
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[k + dg]);
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs[..dg].iter().enumerate() {
                rem[k + j] -= &c * gj;
            }
            quot[k] = c;
        }
        rem.truncate(dg);
        Ok((Polynomial::from_coeffs(quot), Polynomial::from_coeffs(rem)))
    }

    pub fn rem(&self, g: &Polynomial) -> Result<Polynomial> {
        self.divrem(g).map(|(_, r)| r)
    }

    /// Canonical `phi`-adic expansion `self = sum a_s phi^s` with
    /// `deg a_s < deg phi`. The zero polynomial expands to the empty list.
    pub fn phi_expansion(&self, phi: &Polynomial) -> Result<Vec<Polynomial>> {
        if !phi.is_monic() || phi.is_constant() {
            return Err(Error::BadDivisor);
        }
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divrem(phi)?;
            digits.push(r);
            cur = q;
        }
        Ok(digits)
    }

    /// The coefficients `c_0(y), ..., c_n(y)` of `F(x + y) = sum c_j(y) x^j`,
    /// i.e. `c_j = F^(j) / j!`, without any reduction.
    pub fn taylor_shift_unreduced(&self) -> Vec<Polynomial> {
        let n = match self.degree() {
            Some(n) => n,
            None => return Vec::new(),
        };
        (0..=n)
            .map(|j| {
                // coefficient of y^(k-j) in c_j is a_k * C(k, j)
                let mut binom = BigInt::one();
                let coeffs = (j..=n)
                    .map(|k| {
                        if k > j {
                            binom = binom.clone() * BigInt::from(k) / BigInt::from(k - j);
                        }
                        &self.coeffs[k] * &binom
                    })
                    .collect();
                Polynomial::from_coeffs(coeffs)
            })
            .collect()
    }
}

/// `c_1, ..., c_n` with `c_j = F^(j)/j! mod F`: the coefficients of `x^j` in
/// `F(x + y)` reduced modulo `F(y)`. `c_0 = F(y)` vanishes and is omitted.
pub fn taylor_shift_coeffs(f: &Polynomial, modulus: &Polynomial) -> Result<Vec<Polynomial>> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    f.taylor_shift_unreduced()
        .into_iter()
        .skip(1)
        .map(|c| c.rem(modulus))
        .collect()
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Prints in the parser's canonical sub-language, highest degree first,
/// e.g. `x^4 - 10*x^2 - 25*x + 25`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            // a bare leading "-x" is outside the grammar, so keep the 1
            let show_coeff = k == 0 || !mag.is_one() || (first && c.is_negative());
            if show_coeff {
                write!(f, "{mag}")?;
                if k > 0 {
                    f.write_str("*")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        parse(s)
    }
}
