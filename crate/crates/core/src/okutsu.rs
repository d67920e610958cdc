//! Invariants of a monic irreducible `F` read off an optimal MacLane chain
//! whose last valuation admits `F` as a key polynomial: Okutsu depth,
//! weight, the distances `delta_i`, the main invariant, the Krasner
//! constant and the multiset of root distances.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ground::Rat;
use crate::maclane::{ChainInvariants, CheckItem, CheckReport, MacLaneChain};
use crate::poly::Polynomial;

/// Values with multiplicities, values strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ValueMultiset {
    entries: Vec<(Rat, usize)>,
}

impl ValueMultiset {
    /// Collects `(value, multiplicity)` pairs, merging repeated values and
    /// dropping zero multiplicities.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rat, usize)>) -> Self {
        let mut entries: Vec<(Rat, usize)> = pairs.into_iter().filter(|(_, t)| *t > 0).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rat, usize)> = Vec::with_capacity(entries.len());
        for (v, t) in entries {
            match merged.last_mut() {
                Some((last, count)) if *last == v => *count += t,
                _ => merged.push((v, t)),
            }
        }
        ValueMultiset { entries: merged }
    }

    pub fn entries(&self) -> &[(Rat, usize)] {
        &self.entries
    }

    pub fn cardinality(&self) -> usize {
        self.entries.iter().map(|(_, t)| t).sum()
    }

    pub fn min(&self) -> Option<&Rat> {
        self.entries.first().map(|(v, _)| v)
    }

    pub fn max(&self) -> Option<&Rat> {
        self.entries.last().map(|(v, _)| v)
    }

    /// `sum value * multiplicity`.
    pub fn weighted_sum(&self) -> Rat {
        self.entries.iter().map(|(v, t)| v * BigInt::from(*t)).sum()
    }
}

impl fmt::Display for ValueMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}^{t}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tameness {
    Tame,
    QuasiTameOnly,
    Wild,
}

impl Tameness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tameness::Tame => "tame",
            Tameness::QuasiTameOnly => "quasi-tame-only",
            Tameness::Wild => "wild",
        }
    }
}

impl fmt::Display for Tameness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReportFlag {
    /// `F` is not tame; the root-distance formulas are not guaranteed.
    HypothesisUnverified,
    /// `deg F = m_r`; the weight comes from the truncated chain.
    WeightByTruncation,
}

impl ReportFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportFlag::HypothesisUnverified => "hypothesis-unverified",
            ReportFlag::WeightByTruncation => "weight-derived-by-truncation",
        }
    }
}

/// Okutsu depth of `F` and the chain whose levels form its Okutsu frame.
///
/// If `deg F > m_r` the whole chain is a frame of `F`. If `deg F = m_r`
/// the frame is `[phi_0, ..., phi_{r-1}]` and the truncated chain is used.
pub fn okutsu_depth(chain: &MacLaneChain, f: &Polynomial) -> Result<(usize, MacLaneChain)> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.degree().unwrap_or(0);
    let r = chain.depth();
    let m = chain.degrees()[r];
    if m == 0 || n == 0 || n % m != 0 {
        return Err(Error::DegreeMismatch { deg: n, m });
    }
    if n > m {
        Ok((r, chain.clone()))
    } else if r == 0 {
        Err(Error::DegreeTooSmall(n))
    } else {
        Ok((r - 1, chain.truncated(r - 1)?))
    }
}

/// `w(F) = gamma_r / m_r`, checked against `lambda_0/m_0 + ... + lambda_r/m_r`.
pub fn weight_of(inv: &ChainInvariants) -> Result<Rat> {
    let by_lambda: Rat = inv.lambda.iter().zip(&inv.degrees).map(|(l, &m)| l / BigInt::from(m)).sum();
    if by_lambda != inv.weight {
        return Err(Error::Inconsistent(format!(
            "weight gamma_r/m_r = {} but sum lambda_i/m_i = {by_lambda}",
            inv.weight
        )));
    }
    Ok(inv.weight.clone())
}

/// `delta_i = lambda_0 + ... + lambda_i`.
pub fn delta_sequence(inv: &ChainInvariants) -> Vec<Rat> {
    inv.lambda
        .iter()
        .scan(Rat::zero(), |acc, l| {
            *acc += l;
            Some(acc.clone())
        })
        .collect()
}

/// Multiplicities `t_i = n/m_i - n/m_{i+1}`, with `m_{r+1} = n`.
pub fn multiplicities(degrees: &[usize], n: usize) -> Vec<usize> {
    (0..degrees.len())
        .map(|i| {
            let next = degrees.get(i + 1).copied().unwrap_or(n);
            n / degrees[i] - n / next
        })
        .collect()
}

/// `{delta_0^t_0, ..., delta_r^t_r}`.
pub fn omega_multiset(inv: &ChainInvariants, n: usize) -> ValueMultiset {
    let deltas = delta_sequence(inv);
    let ts = multiplicities(&inv.degrees, n);
    ValueMultiset::from_pairs(deltas.into_iter().zip(ts))
}

/// Main invariant and Krasner constant, both `delta_r`. Computed as the
/// lambda sum and as `gamma_r - sum_{i<r} (m_{i+1} - m_i)/m_i * gamma_i`;
/// the two must agree.
pub fn main_invariant_and_krasner(inv: &ChainInvariants) -> Result<(Rat, Rat)> {
    let by_lambda: Rat = inv.lambda.iter().sum();
    let r = inv.gammas.len() - 1;
    let mut by_gamma = inv.gammas[r].clone();
    for i in 0..r {
        let (m, next) = (inv.degrees[i], inv.degrees[i + 1]);
        by_gamma -= &inv.gammas[i] * Rat::new(BigInt::from(next - m), BigInt::from(m));
    }
    if by_lambda != by_gamma {
        return Err(Error::Inconsistent(format!(
            "lambda form {by_lambda} differs from gamma form {by_gamma}"
        )));
    }
    Ok((by_lambda.clone(), by_lambda))
}

/// Checks `gamma_i = delta_i + sum_{j<i} (m_i/m_j - m_i/m_{j+1}) delta_j` at
/// every level.
pub fn gamma_consistency(inv: &ChainInvariants) -> CheckReport {
    let deltas = delta_sequence(inv);
    let items = (0..deltas.len())
        .map(|i| {
            let ts = multiplicities(&inv.degrees[..i], inv.degrees[i]);
            let rhs: Rat = &deltas[i] + ts.iter().zip(&deltas).map(|(&t, d)| d * BigInt::from(t)).sum::<Rat>();
            CheckItem {
                name: format!("gamma consistency at level {i}"),
                passed: rhs == inv.gammas[i],
                detail: format!("gamma_{i} = {}, delta-combination = {rhs}", inv.gammas[i]),
            }
        })
        .collect();
    CheckReport { items }
}

/// Over `Q_p` residue extensions are separable, so tameness reduces to the
/// ramification index being prime to `p`: tame iff `p` does not divide
/// `e(F) = e_0...e_r`, quasi-tame iff it does not divide
/// `e(phi_r) = e_0...e_{r-1}`.
pub fn tameness_class(inv: &ChainInvariants, p: u64) -> Tameness {
    let e_last = *inv.e_phi.last().expect("chains are nonempty");
    if inv.e_next % p != 0 {
        Tameness::Tame
    } else if e_last % p != 0 {
        Tameness::QuasiTameOnly
    } else {
        Tameness::Wild
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkutsuReport {
    pub depth: usize,
    /// `m_0, ..., m_r, n`.
    pub frame_degrees: Vec<usize>,
    pub weight: Rat,
    pub delta_seq: Vec<Rat>,
    pub main_invariant: Rat,
    pub krasner: Rat,
    pub omega: ValueMultiset,
    pub multiplicities: Vec<usize>,
    pub e_f: u64,
    pub f_f: u64,
    pub tameness: Tameness,
    pub flags: Vec<ReportFlag>,
    /// Invariants of the effective chain.
    pub invariants: ChainInvariants,
    pub effective_chain: MacLaneChain,
    pub gamma_check: CheckReport,
}

impl OkutsuReport {
    /// Requires a valid chain and that `F` passes the key polynomial test.
    pub fn new(chain: &MacLaneChain, f: &Polynomial) -> Result<Self> {
        let check = chain.key_poly_necessary_check(f)?;
        if !check.passed() {
            return Err(Error::Contract(format!(
                "F fails the key polynomial test: {}",
                check.items[0].detail
            )));
        }
        Self::from_formulas(chain, f)
    }

    /// Evaluates every closed formula without checking that `F` is a key
    /// polynomial of the chain. The chain itself must be valid.
    pub fn from_formulas(chain: &MacLaneChain, f: &Polynomial) -> Result<Self> {
        let validation = chain.validate();
        if let Some(v) = validation.violations.first() {
            return Err(Error::InvalidChain(v.message.clone()));
        }
        let (depth, effective) = okutsu_depth(chain, f)?;
        let n = f.degree().unwrap_or(0);
        let inv = effective.invariants()?;

        let weight = weight_of(&inv)?;
        let delta_seq = delta_sequence(&inv);
        let (main_invariant, krasner) = main_invariant_and_krasner(&inv)?;
        let omega = omega_multiset(&inv, n);
        let mults = multiplicities(&inv.degrees, n);
        if omega.cardinality() != n - 1 {
            return Err(Error::Inconsistent(format!("|Omega| = {} but n - 1 = {}", omega.cardinality(), n - 1)));
        }

        let e_f = inv.e_next;
        if n as u64 % e_f != 0 {
            return Err(Error::Inconsistent(format!("e(F) = {e_f} does not divide n = {n}")));
        }
        let f_f = n as u64 / e_f;

        let tameness = tameness_class(&inv, chain.ctx().p());
        let mut flags = Vec::new();
        if tameness != Tameness::Tame {
            flags.push(ReportFlag::HypothesisUnverified);
        }
        if depth < chain.depth() {
            flags.push(ReportFlag::WeightByTruncation);
        }

        let mut frame_degrees = inv.degrees.clone();
        frame_degrees.push(n);
        let gamma_check = gamma_consistency(&inv);

        Ok(OkutsuReport {
            depth,
            frame_degrees,
            weight,
            delta_seq,
            main_invariant,
            krasner,
            omega,
            multiplicities: mults,
            e_f,
            f_f,
            tameness,
            flags,
            invariants: inv,
            effective_chain: effective,
            gamma_check,
        })
    }

    pub fn has_flag(&self, flag: ReportFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn degree(&self) -> usize {
        *self.frame_degrees.last().expect("frame degrees end with n")
    }

    /// `sum t_i delta_i`, the value of `F'(theta)` predicted by the formulas.
    pub fn derivative_prediction(&self) -> Rat {
        self.omega.weighted_sum()
    }
}
