//! Random optimal MacLane chains together with a key polynomial `F` of the
//! last valuation, built so that every key polynomial is genuine:
//!
//! * an unramified first step lifts an irreducible residual polynomial of
//!   degree 2 or 3 over `F_p`;
//! * a ramified step sets `phi_{i+1} = phi_i^{e_i} + u * pi`, where `pi` is a
//!   monomial `p^a phi_0^{b_0} ... phi_{i-1}^{b_{i-1}}` with `0 <= b_j < e_j`
//!   and `mu_i(pi) = e_i gamma_i`, and `u` is a unit. The residual polynomial
//!   `y + u` has degree one.
//!
//! Each step may also add a term `p^N x^t` of strictly larger value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ground::{ExtRat, GroundContext, Rat};
use crate::maclane::{Level, MacLaneChain};
use crate::poly::Polynomial;

/// Which ramification indices the generator may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ramification {
    Any,
    /// `p` divides none of `e_0, ..., e_{r-1}`.
    QuasiTame,
    /// `p` divides none of `e_0, ..., e_r`.
    Tame,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub chain: MacLaneChain,
    pub f: Polynomial,
}

impl Generated {
    /// The chain extended by `(F, mu_r(F) + 1)`, so that `deg F = m_{r+1}`.
    pub fn extended(&self) -> Result<MacLaneChain> {
        let v = self.chain.mu_top(&self.f)?;
        let mut levels = self.chain.levels().to_vec();
        levels.push(Level::new(self.f.clone(), &v + &ExtRat::Finite(Rat::from_integer(1.into()))));
        MacLaneChain::new(self.chain.ctx().clone(), levels)
    }
}

/// A chain of depth `depth` and a key polynomial `F` of its last valuation
/// with `m_r < deg F <= max_degree`.
pub fn random_tower<R: Rng>(
    rng: &mut R,
    p: u64,
    depth: usize,
    max_degree: usize,
    ramification: Ramification,
) -> Result<Generated> {
    let ctx = GroundContext::new(p)?;
    let (unramified_first, steps) = plan_steps(rng, p, depth, max_degree, ramification)?;

    let a0: i64 = rng.gen_range(-3..=3);
    let phi0 = &Polynomial::x() - &Polynomial::constant(int(a0));
    let gamma0 = if unramified_first {
        int(rng.gen_range(-1..=2))
    } else {
        random_coprime_fraction(rng, steps[0], -(steps[0] as i64), 2 * steps[0] as i64)
    };
    let mut chain = MacLaneChain::new(ctx.clone(), vec![Level::new(phi0, gamma0)])?;
    // Gamma_{mu_i} = (1/d)Z
    let mut d: u64 = if unramified_first { 1 } else { steps[0] };

    for (i, &step) in steps.iter().enumerate() {
        let gamma_i = chain.finite_gammas()?[i].clone();
        let mut psi = if i == 0 && unramified_first {
            unramified_lift(rng, &ctx, a0, gamma_i.to_integer().to_i64().unwrap_or(0), step)
        } else {
            let pi = monomial_of_value(&chain, i, &(&gamma_i * BigInt::from(step)))?;
            let phi_i = chain.level(i).phi.clone();
            &phi_i.pow(step as u32) + &pi.scale(&random_unit(rng, p))
        };

        let value = chain.mu(i, &psi)?;
        if rng.gen_bool(0.5) {
            psi = &psi + &noise_term(rng, &chain, i, &value, psi.degree().unwrap_or(1))?;
        }

        if i == depth {
            return Ok(Generated { chain, f: psi });
        }

        let e_next = steps[i + 1];
        let value = value.finite().cloned().ok_or_else(|| Error::Inconsistent("infinite key value".into()))?;
        let lambda = random_coprime_fraction(rng, e_next, 1, 2 * e_next as i64) / BigInt::from(d);
        d *= e_next;
        let mut levels = chain.levels().to_vec();
        levels.push(Level::new(psi, value + lambda));
        chain = MacLaneChain::new(ctx.clone(), levels)?;
    }
    unreachable!("the last step returns F")
}

/// Degree multipliers for steps `0..=depth` (the last one produces `F`),
/// and whether step 0 is unramified.
fn plan_steps<R: Rng>(
    rng: &mut R,
    p: u64,
    depth: usize,
    max_degree: usize,
    ramification: Ramification,
) -> Result<(bool, Vec<u64>)> {
    let allowed = |step: usize| -> Vec<u64> {
        let restricted = match ramification {
            Ramification::Any => false,
            Ramification::QuasiTame => step < depth,
            Ramification::Tame => true,
        };
        (2..=6).filter(|e| !restricted || e % p != 0).collect()
    };
    let unramified = rng.gen_bool(0.25);
    let pool = |s: usize| if s == 0 && unramified { vec![2, 3] } else { allowed(s) };
    let mut steps: Vec<u64> = Vec::with_capacity(depth + 1);
    let mut degree = 1u64;
    for s in 0..=depth {
        // the cheapest completion of the remaining steps must still fit
        let rest: u64 = (s + 1..=depth).map(|t| pool(t).into_iter().min().unwrap_or(u64::MAX)).product();
        let fits: Vec<u64> =
            pool(s).into_iter().filter(|e| degree * e * rest <= max_degree as u64).collect();
        let Some(&e) = fits.choose(rng) else {
            return Err(Error::Contract(format!(
                "no depth-{depth} tower of degree at most {max_degree} for p = {p}"
            )));
        };
        degree *= e;
        steps.push(e);
    }
    Ok((unramified, steps))
}

fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms with `lo <= num <= hi`.
fn random_coprime_fraction<R: Rng>(rng: &mut R, den: u64, lo: i64, hi: i64) -> Rat {
    let candidates: Vec<i64> = (lo..=hi).filter(|n| n.unsigned_abs().gcd(&den) == 1).collect();
    let num = *candidates.choose(rng).expect("a unit numerator always exists");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

fn random_unit<R: Rng>(rng: &mut R, p: u64) -> Rat {
    let units: Vec<i64> = [1i64, -1, 2, -2, 3, -3].into_iter().filter(|u| u.unsigned_abs() % p != 0).collect();
    int(*units.choose(rng).expect("1 is a unit"))
}

/// `p^(k f) g((x - a0) / p^k)` for a random monic `g` of degree `f <= 3`,
/// irreducible modulo `p`.
fn unramified_lift<R: Rng>(rng: &mut R, ctx: &GroundContext, a0: i64, k: i64, f: u64) -> Polynomial {
    let p = ctx.p() as i64;
    let g = loop {
        let mut c: Vec<i64> = (0..f).map(|_| rng.gen_range(0..p)).collect();
        c.push(1);
        // degree <= 3: irreducible iff no roots
        let has_root = (0..p).any(|t| c.iter().rev().fold(0i64, |acc, &ci| (acc * t + ci).rem_euclid(p)) == 0);
        if !has_root {
            break c;
        }
    };
    let shift = &Polynomial::x() - &Polynomial::constant(int(a0));
    let f = f as i64;
    g.iter().enumerate().fold(Polynomial::zero(), |acc, (j, &gj)| {
        let coeff = int(gj) * ctx.p_pow(k * (f - j as i64));
        &acc + &shift.pow(j as u32).scale(&coeff)
    })
}

/// `p^a prod_{j<level} phi_j^{b_j}` with `0 <= b_j < e_j` and value `target`
/// under `mu_level`.
fn monomial_of_value(chain: &MacLaneChain, level: usize, target: &Rat) -> Result<Polynomial> {
    let inv = chain.truncated(level)?.invariants()?;
    let bounds: Vec<u64> = inv.e_rel[..level].to_vec();
    let mut b = vec![0u64; level];
    loop {
        let mut rest = target.clone();
        for (j, &bj) in b.iter().enumerate() {
            rest -= &inv.gammas[j] * BigInt::from(bj);
        }
        if rest.is_integer() {
            let a = rest.to_integer().to_i64().ok_or_else(|| Error::Overflow(rest.to_string()))?;
            let mut pi = Polynomial::constant(chain.ctx().p_pow(a));
            for (j, &bj) in b.iter().enumerate() {
                pi = &pi * &chain.level(j).phi.pow(bj as u32);
            }
            return Ok(pi);
        }
        // odometer over the mixed-radix digits b
        let mut j = 0;
        loop {
            if j == level {
                return Err(Error::Inconsistent(format!("{target} is not in the value group of mu_{level}")));
            }
            b[j] += 1;
            if b[j] < bounds[j] {
                break;
            }
            b[j] = 0;
            j += 1;
        }
    }
}

/// `p^N x^t` with `t < bound` and `mu_level` value strictly above `value`.
fn noise_term<R: Rng>(
    rng: &mut R,
    chain: &MacLaneChain,
    level: usize,
    value: &ExtRat,
    bound: usize,
) -> Result<Polynomial> {
    let t = rng.gen_range(0..bound);
    let xt = Polynomial::monomial(int(1), t);
    let base = chain.mu(level, &xt)?;
    let (Some(base), Some(value)) = (base.finite(), value.finite()) else {
        return Ok(Polynomial::zero());
    };
    let gap = (value - base).floor().to_integer().to_i64().unwrap_or(0);
    let n = gap + 1 + rng.gen_range(0..=2);
    let term = xt.scale(&chain.ctx().p_pow(n));
    debug_assert!(chain.mu(level, &term)? > ExtRat::Finite(value.clone()));
    Ok(term)
}
