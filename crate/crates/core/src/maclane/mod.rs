//! MacLane chains of inductive valuations on `Q_p[x]`.
//!
//! A chain `mu_0 -> mu_1 -> ... -> mu_r` is stored as its key polynomials
//! `phi_i` and slopes `gamma_i`. Each `mu_i` is evaluated recursively through
//! `phi_i`-adic expansions, bottoming out at the explicit formula for `mu_0`.

mod newton;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ground::{ExtRat, GroundContext, Rat, ValueGroup};
use crate::poly::Polynomial;

pub use newton::{NewtonPolygon, Segment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub phi: Polynomial,
    pub gamma: ExtRat,
}

impl Level {
    pub fn new(phi: Polynomial, gamma: impl Into<ExtRat>) -> Self {
        Level { phi, gamma: gamma.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacLaneChain {
    ctx: GroundContext,
    levels: Vec<Level>,
}

impl MacLaneChain {
    /// Builds a chain without checking it; see [`MacLaneChain::validate`].
    pub fn new(ctx: GroundContext, levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyChain);
        }
        Ok(MacLaneChain { ctx, levels })
    }

    pub fn ctx(&self) -> &GroundContext {
        &self.ctx
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    /// `r`, the index of the last level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn last(&self) -> &Level {
        &self.levels[self.depth()]
    }

    /// `m_0, ..., m_r`.
    pub fn degrees(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.phi.degree().unwrap_or(0)).collect()
    }

    /// Levels `0..=last`.
    pub fn truncated(&self, last: usize) -> Result<MacLaneChain> {
        self.check_level(last)?;
        Ok(MacLaneChain { ctx: self.ctx.clone(), levels: self.levels[..=last].to_vec() })
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.levels.len() {
            return Err(Error::LevelOutOfRange { level, len: self.levels.len() });
        }
        Ok(())
    }

    /// Finite slopes `gamma_0, ..., gamma_r`.
    pub fn finite_gammas(&self) -> Result<Vec<Rat>> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.gamma
                    .finite()
                    .cloned()
                    .ok_or_else(|| Error::InvalidChain(format!("gamma_{i} is infinite")))
            })
            .collect()
    }

    /// `mu_level(f)`.
    pub fn mu(&self, level: usize, f: &Polynomial) -> Result<ExtRat> {
        self.check_level(level)?;
        self.mu_unchecked(level, f)
    }

    /// `mu_r(f)` for the last level.
    pub fn mu_top(&self, f: &Polynomial) -> Result<ExtRat> {
        self.mu_unchecked(self.depth(), f)
    }

    fn mu_unchecked(&self, level: usize, f: &Polynomial) -> Result<ExtRat> {
        let Level { phi, gamma } = &self.levels[level];
        let mut best = ExtRat::Infinity;
        for (s, a) in f.phi_expansion(phi)?.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let va = if level == 0 { self.gauss(a) } else { self.mu_unchecked(level - 1, a)? };
            best = best.min(&va + &gamma.scale(s));
        }
        Ok(best)
    }

    /// Minimum coefficient valuation. On valid chains the level-0 digits are
    /// constants, where this is just `vp`.
    fn gauss(&self, a: &Polynomial) -> ExtRat {
        a.coeffs().iter().map(|c| self.ctx.vp(c)).min().unwrap_or(ExtRat::Infinity)
    }

    /// `w(mu_r) = gamma_r / m_r`.
    pub fn weight(&self) -> Result<Rat> {
        let m = self.last().phi.degree().filter(|&d| d > 0).ok_or(Error::BadDivisor)?;
        let g = self.last().gamma.finite().ok_or_else(|| Error::InvalidChain("gamma_r is infinite".into()))?;
        Ok(g / BigInt::from(m))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut out = ValidationReport::default();
        let degs = self.degrees();
        let mut degrees_ok = true;

        for (i, l) in self.levels.iter().enumerate() {
            if !l.phi.is_monic() {
                out.push(Some(i), ViolationCode::NotMonic, format!("phi_{i} = {} is not monic", l.phi));
            }
            if l.gamma.is_infinite() {
                out.push(Some(i), ViolationCode::InfiniteSlope, format!("gamma_{i} must be finite"));
            }
        }
        if degs[0] != 1 {
            degrees_ok = false;
            out.push(Some(0), ViolationCode::FirstDegree, format!("deg phi_0 = {} but must be 1", degs[0]));
        }
        for i in 1..degs.len() {
            let (lo, hi) = (degs[i - 1], degs[i]);
            if hi <= lo {
                degrees_ok = false;
                out.push(
                    Some(i),
                    ViolationCode::DegreeNotIncreasing,
                    format!("m_{i} = {hi} must exceed m_{} = {lo}", i - 1),
                );
            } else if lo == 0 || hi % lo != 0 {
                degrees_ok = false;
                out.push(
                    Some(i),
                    ViolationCode::DegreeDivisibility,
                    format!("m_{} = {lo} does not divide m_{i} = {hi}", i - 1),
                );
            }
        }
        if !degrees_ok || !out.violations.is_empty() {
            return out;
        }

        for i in 1..self.levels.len() {
            let phi = &self.levels[i].phi;
            // evaluation only fails on non-monic key polynomials, reported above
            let Ok(prev) = self.mu_unchecked(i - 1, phi) else { continue };
            if self.levels[i].gamma <= prev {
                out.push(
                    Some(i),
                    ViolationCode::AugmentationNotStrict,
                    format!("gamma_{i} = {} must exceed mu_{}(phi_{i}) = {prev}", self.levels[i].gamma, i - 1),
                );
            }
            if let Ok(check) = self.attains_at_ends(i - 1, phi) {
                if !check.passed {
                    out.push(
                        Some(i),
                        ViolationCode::NotKeyForPrevious,
                        format!("phi_{i} fails the key polynomial test for mu_{}: {}", i - 1, check.detail),
                    );
                }
            }
        }
        out
    }

    /// Necessary condition for `f` to be a key polynomial of `mu_level`: in the
    /// `phi_level`-expansion of `f`, the minimum of `mu(a_s) + s*gamma` is
    /// attained both at `s = 0` and at the top index.
    fn attains_at_ends(&self, level: usize, f: &Polynomial) -> Result<CheckItem> {
        let Level { phi, gamma } = &self.levels[level];
        let digits = f.phi_expansion(phi)?;
        let mut terms = Vec::with_capacity(digits.len());
        for (s, a) in digits.iter().enumerate() {
            let va = if level == 0 { self.gauss(a) } else { self.mu_unchecked(level - 1, a)? };
            terms.push(&va + &gamma.scale(s));
        }
        let min = terms.iter().min().cloned().unwrap_or(ExtRat::Infinity);
        let top = terms.len().saturating_sub(1);
        let passed = top > 0 && !min.is_infinite() && terms[0] == min && terms[top] == min;
        let detail = format!(
            "terms [{}], minimum {min}",
            terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        );
        Ok(CheckItem { name: format!("key polynomial test at level {level}"), passed, detail })
    }

    /// Necessary check that `f` is a key polynomial of the chain's last
    /// valuation. When `deg f = m_r` the test runs one level down, against
    /// `mu_{r-1}` and `phi_{r-1}`, as for `phi_r` itself.
    pub fn key_poly_necessary_check(&self, f: &Polynomial) -> Result<CheckReport> {
        if !f.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = f.degree().unwrap_or(0);
        let m = self.degrees()[self.depth()];
        if m == 0 || n % m != 0 || n == 0 {
            return Err(Error::DegreeMismatch { deg: n, m });
        }
        let level = match (n == m, self.depth()) {
            (false, r) => r,
            (true, 0) => return Err(Error::DegreeTooSmall(n)),
            (true, r) => r - 1,
        };
        let item = self.attains_at_ends(level, f)?;
        Ok(CheckReport { items: vec![item] })
    }

    /// The invariants of an optimal chain: secondary slopes, value groups,
    /// relative ramification indices and the degree split `m_i = e(phi_i) f(phi_i)`.
    ///
    /// `e_i` is the index `(Gamma_{mu_i} : Gamma_{mu_{i-1}})` with
    /// `Gamma_{mu_{-1}} = Z`, so `e_0` is the denominator of `gamma_0` and
    /// `e(phi_i) = e_0 ... e_{i-1}`.
    pub fn invariants(&self) -> Result<ChainInvariants> {
        let gammas = self.finite_gammas()?;
        let degrees = self.degrees();
        let mut lambda = vec![gammas[0].clone()];
        for i in 1..self.levels.len() {
            let prev = self.mu_unchecked(i - 1, &self.levels[i].phi)?;
            let prev = prev
                .finite()
                .ok_or_else(|| Error::InvalidChain(format!("mu_{}(phi_{i}) is infinite", i - 1)))?;
            lambda.push(&gammas[i] - prev);
        }

        let mut value_groups = Vec::with_capacity(gammas.len());
        let mut e_rel = Vec::with_capacity(gammas.len());
        let mut e_phi = Vec::with_capacity(gammas.len());
        let mut group = ValueGroup::INTEGERS;
        for g in &gammas {
            e_phi.push(ValueGroup::INTEGERS.index_in(&group)?);
            let next = group.join_rational(g)?;
            e_rel.push(group.index_in(&next)?);
            value_groups.push(next);
            group = next;
        }
        let e_next = ValueGroup::INTEGERS.index_in(&group)?;

        let mut f_phi = Vec::with_capacity(degrees.len());
        for (i, (&m, &e)) in degrees.iter().zip(&e_phi).enumerate() {
            if m as u64 % e != 0 {
                return Err(Error::Inconsistent(format!("f(phi_{i}) = {m}/{e} is not an integer")));
            }
            f_phi.push(m as u64 / e);
        }

        Ok(ChainInvariants {
            weight: self.weight()?,
            degrees,
            gammas,
            lambda,
            e_rel,
            value_groups,
            e_phi,
            e_next,
            f_phi,
        })
    }
}

impl fmt::Display for MacLaneChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {}: ", self.ctx.p())?;
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "[{}, {}]", l.phi, l.gamma)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainInvariants {
    pub degrees: Vec<usize>,
    pub gammas: Vec<Rat>,
    /// `lambda_0 = gamma_0`, `lambda_i = gamma_i - mu_{i-1}(phi_i)`.
    pub lambda: Vec<Rat>,
    pub e_rel: Vec<u64>,
    /// `Gamma_{mu_0}, ..., Gamma_{mu_r}`.
    pub value_groups: Vec<ValueGroup>,
    /// `e(phi_0), ..., e(phi_r)`.
    pub e_phi: Vec<u64>,
    /// `(Gamma_{mu_r} : Z)`, the ramification index of any key polynomial
    /// of `mu_r` of degree above `m_r`.
    pub e_next: u64,
    pub f_phi: Vec<u64>,
    pub weight: Rat,
}

impl ChainInvariants {
    /// Checks `gamma_i / m_i = sum_{j <= i} lambda_j / m_j` at every level.
    pub fn recurrence_holds(&self) -> bool {
        let mut acc = Rat::zero();
        self.degrees.iter().zip(&self.lambda).zip(&self.gammas).all(|((&m, l), g)| {
            let m = BigInt::from(m);
            acc += l / &m;
            acc == g / &m
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationCode {
    FirstDegree,
    DegreeNotIncreasing,
    DegreeDivisibility,
    NotMonic,
    InfiniteSlope,
    AugmentationNotStrict,
    NotKeyForPrevious,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::FirstDegree => "first-degree",
            ViolationCode::DegreeNotIncreasing => "degree-strictness",
            ViolationCode::DegreeDivisibility => "degree-divisibility",
            ViolationCode::NotMonic => "monicity",
            ViolationCode::InfiniteSlope => "infinite-slope",
            ViolationCode::AugmentationNotStrict => "augmentation",
            ViolationCode::NotKeyForPrevious => "key-polynomial",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub level: Option<usize>,
    pub code: ViolationCode,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, level: Option<usize>, code: ViolationCode, message: String) {
        self.violations.push(Violation { level, code, message });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::{int, rat};

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn chain(prime: u64, levels: &[(&str, Rat)]) -> MacLaneChain {
        let ctx = GroundContext::new(prime).unwrap();
        MacLaneChain::new(ctx, levels.iter().map(|(f, g)| Level::new(p(f), g.clone())).collect()).unwrap()
    }

    fn depth_one() -> MacLaneChain {
        chain(5, &[("x", rat(1, 2)), ("x^2 - 5", rat(5, 4))])
    }

    fn fin(n: i64, d: i64) -> ExtRat {
        ExtRat::Finite(rat(n, d))
    }

    #[test]
    fn mu_examples() {
        let c = depth_one();
        assert_eq!(c.mu(1, &p("7/5")).unwrap(), fin(-1, 1));
        assert_eq!(c.mu(0, &p("7/5")).unwrap(), fin(-1, 1));
        assert_eq!(c.mu(0, &p("x^2 - 5")).unwrap(), fin(1, 1));
        assert_eq!(c.mu(1, &p("4*x^3 - 20*x - 25")).unwrap(), fin(7, 4));
        assert_eq!(c.mu(1, &Polynomial::zero()).unwrap(), ExtRat::Infinity);
        assert_eq!(c.mu(2, &p("x")), Err(Error::LevelOutOfRange { level: 2, len: 2 }));
    }

    #[test]
    fn validate_examples() {
        assert!(chain(3, &[("x", rat(1, 2))]).validate().is_valid());
        assert!(depth_one().validate().is_valid());

        let bad = chain(5, &[("x", rat(1, 2)), ("x^2 - 5", int(1))]).validate();
        assert!(bad.has(ViolationCode::AugmentationNotStrict));
        assert_eq!(bad.violations.len(), 1);

        let bad = chain(5, &[("x", rat(1, 2)), ("x^2 - 5", rat(5, 4)), ("x^3 - 5", int(9))]).validate();
        assert!(bad.has(ViolationCode::DegreeDivisibility));

        let bad = chain(5, &[("x^2", rat(1, 2))]).validate();
        assert!(bad.has(ViolationCode::FirstDegree));

        let bad = chain(5, &[("x", rat(1, 2)), ("2*x^2 - 5", int(3))]).validate();
        assert!(bad.has(ViolationCode::NotMonic));

        let bad = chain(5, &[("x", rat(1, 2)), ("x - 3", int(3))]).validate();
        assert!(bad.has(ViolationCode::DegreeNotIncreasing));

        let ctx = GroundContext::new(5).unwrap();
        let inf = MacLaneChain::new(ctx, vec![Level::new(p("x"), ExtRat::Infinity)]).unwrap();
        assert!(inf.validate().has(ViolationCode::InfiniteSlope));
    }

    #[test]
    fn validate_flags_non_key_phi() {
        // x^2 - 5x + 1 has mu_0 terms at s = 0, 1, 2 of 0, 3/2, 1: min only at s = 0
        let bad = chain(5, &[("x", rat(1, 2)), ("x^2 - 5*x + 1", int(3))]).validate();
        assert!(bad.has(ViolationCode::NotKeyForPrevious));
    }

    #[test]
    fn invariants_examples() {
        let inv = chain(3, &[("x", rat(1, 2))]).invariants().unwrap();
        assert_eq!(inv.lambda, vec![rat(1, 2)]);
        assert_eq!(inv.value_groups, vec![ValueGroup::new(2).unwrap()]);
        assert_eq!(inv.e_rel, vec![2]);
        assert_eq!(inv.weight, rat(1, 2));

        let inv = depth_one().invariants().unwrap();
        assert_eq!(inv.lambda, vec![rat(1, 2), rat(1, 4)]);
        assert_eq!(inv.value_groups.iter().map(|g| g.denominator()).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(inv.e_rel, vec![2, 2]);
        assert_eq!(inv.e_phi, vec![1, 2]);
        assert_eq!(inv.f_phi, vec![1, 1]);
        assert_eq!(inv.e_next, 4);
        assert_eq!(inv.weight, rat(5, 8));
        assert!(inv.recurrence_holds());
    }

    #[test]
    fn invariants_reject_non_integral_residue_degree() {
        // gamma_0 = 1/3 forces e(phi_1) = 3, which cannot divide m_1 = 2
        let c = chain(5, &[("x", rat(1, 3)), ("x^2 - 5", int(2))]);
        assert!(matches!(c.invariants(), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn key_check_examples() {
        let c = depth_one();
        assert!(c.key_poly_necessary_check(&p("(x^2-5)^2 - 25*x")).unwrap().passed());
        assert!(!c.key_poly_necessary_check(&p("(x^2-5)^2 - 5*x")).unwrap().passed());
        // deg F = m_r: tested against mu_0 like phi_1 itself
        assert!(c.key_poly_necessary_check(&p("x^2 - 5")).unwrap().passed());
        let r0 = c.truncated(0).unwrap();
        assert!(r0.key_poly_necessary_check(&p("x^2 - 5")).unwrap().passed());
        assert_eq!(
            c.key_poly_necessary_check(&p("x^3 - 5")),
            Err(Error::DegreeMismatch { deg: 3, m: 2 })
        );
        assert_eq!(c.key_poly_necessary_check(&p("2*x^4 - 5")), Err(Error::NotMonic));
    }
}
