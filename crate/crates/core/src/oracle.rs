//! Recomputes the root-distance multiset of `F` without the closed formulas,
//! and probes the weight by sampling.
//!
//! The roots of `F(x + theta)` are the differences `theta' - theta`, and the
//! coefficients of that polynomial are `c_j(theta)` with `c_j = F^(j)/j!`.
//! Their valuations are values `mu_r(c_j)` of polynomials of degree below
//! `n`, so the Newton polygon of the points `(j, mu_r(c_j))` yields every
//! `v(theta - theta')` as minus a slope.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ground::{ExtRat, GroundContext, Rat};
use crate::maclane::{MacLaneChain, NewtonPolygon};
use crate::okutsu::{okutsu_depth, OkutsuReport, Tameness, ValueMultiset};
use crate::poly::{taylor_shift_coeffs, Polynomial};

/// An element `g(theta)` of `Q_p[x]/(F)`, stored as its reduced
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionElement {
    rep: Polynomial,
}

impl ExtensionElement {
    pub fn new(g: &Polynomial, modulus: &Polynomial) -> Result<Self> {
        Ok(ExtensionElement { rep: g.rem(modulus)? })
    }

    pub fn representative(&self) -> &Polynomial {
        &self.rep
    }

    /// `v(g(theta)) = mu_r(g)`, valid because `deg g < deg F` and `F` is a
    /// key polynomial of `mu_r`.
    pub fn valuation(&self, chain: &MacLaneChain) -> Result<ExtRat> {
        chain.mu_top(&self.rep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonOmega {
    pub omega: ValueMultiset,
    pub polygon: NewtonPolygon,
}

/// `{ v(theta - theta') : theta' != theta }` from the Newton polygon of
/// `F(x + theta) / x`.
pub fn omega_via_newton(chain: &MacLaneChain, f: &Polynomial) -> Result<NewtonOmega> {
    let n = f.degree().unwrap_or(0);
    let coeffs = taylor_shift_coeffs(f, f)?;
    let points = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| Ok((j + 1, ExtensionElement::new(c, f)?.valuation(chain)?)))
        .collect::<Result<Vec<_>>>()?;
    let polygon = NewtonPolygon::new(points)?;
    if polygon.vertices().first().map(|v| v.0) != Some(1) || polygon.length() != n - 1 {
        return Err(Error::Inconsistent("F'(theta) has infinite value; F is not separable".into()));
    }
    let omega = ValueMultiset::from_pairs(polygon.segments().iter().map(|s| (-s.slope.clone(), s.length)));
    Ok(NewtonOmega { omega, polygon })
}

/// Root distances of `x^m - c p^k` with `vp(c) = 0`, `gcd(k, m) = 1` and `p`
/// not dividing `m`: the roots are `zeta theta` for the `m`-th roots of unity
/// `zeta`, and `v(zeta - 1) = 0` for `zeta != 1`, so every distance is
/// `v(theta) = k/m`.
pub fn omega_radical_family(p: u64, m: u64, c: &Rat, k: i64) -> Result<ValueMultiset> {
    let ctx = GroundContext::new(p)?;
    if m < 2 {
        return Err(Error::Contract(format!("radical degree m = {m} must be at least 2")));
    }
    if ctx.vp(c) != ExtRat::zero() {
        return Err(Error::Contract(format!("{c} is not a {p}-adic unit")));
    }
    if k.unsigned_abs().gcd(&m) != 1 {
        return Err(Error::Contract(format!("gcd({k}, {m}) != 1")));
    }
    if m % p == 0 {
        return Err(Error::Contract(format!("{p} divides m = {m}")));
    }
    let m_usize = usize::try_from(m).map_err(|_| Error::Overflow(m.to_string()))?;
    Ok(ValueMultiset::from_pairs([(Rat::new(BigInt::from(k), BigInt::from(m)), m_usize - 1)]))
}

/// The problem `(chain, F)` for `x^m - c p^k`: the depth-zero chain
/// `[(x, k/m)]`.
pub fn radical_problem(p: u64, m: u64, c: &Rat, k: i64) -> Result<(MacLaneChain, Polynomial)> {
    let ctx = GroundContext::new(p)?;
    let gamma = Rat::new(BigInt::from(k), BigInt::from(m));
    let m_usize = usize::try_from(m).map_err(|_| Error::Overflow(m.to_string()))?;
    let f = &Polynomial::monomial(Rat::from_integer(1.into()), m_usize)
        - &Polynomial::constant(c * ctx.p_pow(k));
    let chain = MacLaneChain::new(ctx, vec![crate::maclane::Level::new(Polynomial::x(), gamma)])?;
    Ok((chain, f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleParams {
    pub degree_bound: usize,
    pub count: usize,
    /// Exponents `j` for coefficients `u * p^j`, inclusive.
    pub valuation_range: (i64, i64),
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSample {
    pub weight: Rat,
    pub max_found: Rat,
    pub witness: Polynomial,
    /// Whether the frame's last key polynomial was evaluated first.
    pub injected: bool,
    pub evaluated: usize,
    /// First sample whose ratio exceeded the weight, if any.
    pub violation: Option<(Rat, Polynomial)>,
    pub seed: u64,
}

/// Draws random monic `g` with `0 < deg g <= degree_bound < n` and
/// coefficients `u p^j`, `u` in `{0, +-1, +-2}`, and records the largest
/// `v(g(theta)) / deg g`. The last key polynomial of the Okutsu frame is
/// evaluated first when its degree is within the bound.
pub fn sample_weight(chain: &MacLaneChain, f: &Polynomial, params: &SampleParams) -> Result<WeightSample> {
    let n = f.degree().unwrap_or(0);
    if params.degree_bound == 0 || params.degree_bound >= n {
        return Err(Error::Contract(format!(
            "degree bound {} must satisfy 1 <= D < deg F = {n}",
            params.degree_bound
        )));
    }
    let (lo, hi) = params.valuation_range;
    if lo > hi {
        return Err(Error::Contract(format!("empty valuation range {lo}..={hi}")));
    }
    let (_, effective) = okutsu_depth(chain, f)?;
    let inv = effective.invariants()?;
    let weight = inv.weight.clone();
    let ctx = chain.ctx();

    let ratio = |g: &Polynomial| -> Result<Rat> {
        let v = chain.mu_top(g)?;
        let v = v.finite().ok_or_else(|| Error::Inconsistent(format!("g = {g} has infinite value")))?;
        Ok(v / BigInt::from(g.degree().unwrap_or(1)))
    };

    let mut best: Option<(Rat, Polynomial)> = None;
    let mut violation = None;
    let mut evaluated = 0;
    let mut consider = |g: Polynomial, q: Rat| {
        evaluated += 1;
        if q > weight && violation.is_none() {
            violation = Some((q.clone(), g.clone()));
        }
        if best.as_ref().is_none_or(|(b, _)| q > *b) {
            best = Some((q, g));
        }
    };

    let phi = effective.last().phi.clone();
    let injected = phi.degree().unwrap_or(0) <= params.degree_bound;
    if injected {
        let q = ratio(&phi)?;
        consider(phi, q);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.count {
        let d = rng.gen_range(1..=params.degree_bound);
        let mut coeffs: Vec<Rat> = (0..d)
            .map(|_| {
                let u: i64 = rng.gen_range(-2..=2);
                let j = rng.gen_range(lo..=hi);
                Rat::from_integer(BigInt::from(u)) * ctx.p_pow(j)
            })
            .collect();
        coeffs.push(Rat::from_integer(1.into()));
        let g = Polynomial::from_coeffs(coeffs);
        let q = ratio(&g)?;
        consider(g, q);
    }

    let (max_found, witness) = match best {
        Some(b) => b,
        None => (Rat::zero(), Polynomial::zero()),
    };
    Ok(WeightSample { weight, max_found, witness, injected, evaluated, violation, seed: params.seed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    /// A formula needing tameness disagrees with the oracle on an input
    /// that is not tame.
    HypothesisViolation,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::HypothesisViolation => "hypothesis-violation demonstrated",
            Verdict::Fail => "FAIL",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossItem {
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub items: Vec<CrossItem>,
    pub formula: OkutsuReport,
    pub oracle: NewtonOmega,
    /// `mu_r(F')`.
    pub derivative_value: ExtRat,
}

impl CrosscheckReport {
    pub fn failed(&self) -> bool {
        self.items.iter().any(|i| i.verdict == Verdict::Fail)
    }

    pub fn hypothesis_violated(&self) -> bool {
        self.items.iter().any(|i| i.verdict == Verdict::HypothesisViolation)
    }

    pub fn item(&self, name: &str) -> Option<&CrossItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

pub const CHECK_KEY_POLY: &str = "key polynomial test";
pub const CHECK_GAMMA: &str = "gamma consistency";
pub const CHECK_CARDINALITY: &str = "oracle cardinality";
pub const CHECK_OMEGA: &str = "omega multiset";
pub const CHECK_KRASNER: &str = "krasner constant";
pub const CHECK_DERIVATIVE_ORACLE: &str = "derivative identity (oracle)";
pub const CHECK_DERIVATIVE_FORMULA: &str = "derivative identity (formula)";
pub const CHECK_DIAMETER: &str = "distance lower bound";

/// Compares the closed formulas with the Newton-polygon oracle. The chain
/// must be valid; whether `F` is a key polynomial is one of the checks.
pub fn crosscheck(chain: &MacLaneChain, f: &Polynomial) -> Result<CrosscheckReport> {
    let formula = OkutsuReport::from_formulas(chain, f)?;
    let oracle = omega_via_newton(chain, f)?;
    let derivative_value = chain.mu_top(&f.derivative())?;
    let tame = formula.tameness == Tameness::Tame;
    let n = formula.degree();

    let genuine = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
    let conditional = |ok: bool| match (ok, tame) {
        (true, _) => Verdict::Pass,
        (false, true) => Verdict::Fail,
        (false, false) => Verdict::HypothesisViolation,
    };

    let mut items = Vec::new();

    let key = chain.key_poly_necessary_check(f)?;
    items.push(CrossItem { name: CHECK_KEY_POLY, verdict: genuine(key.passed()), detail: key.items[0].detail.clone() });

    let failing: Vec<_> = formula.gamma_check.items.iter().filter(|i| !i.passed).map(|i| i.detail.clone()).collect();
    items.push(CrossItem {
        name: CHECK_GAMMA,
        verdict: genuine(failing.is_empty()),
        detail: if failing.is_empty() {
            format!("{} levels agree", formula.gamma_check.items.len())
        } else {
            failing.join("; ")
        },
    });

    let card = oracle.omega.cardinality();
    items.push(CrossItem {
        name: CHECK_CARDINALITY,
        verdict: genuine(card == n - 1),
        detail: format!("|oracle Omega| = {card}, n - 1 = {}", n - 1),
    });

    items.push(CrossItem {
        name: CHECK_OMEGA,
        verdict: conditional(formula.omega == oracle.omega),
        detail: format!("formula {} vs oracle {}", formula.omega, oracle.omega),
    });

    let oracle_max = oracle.omega.max().cloned().unwrap_or_else(Rat::zero);
    items.push(CrossItem {
        name: CHECK_KRASNER,
        verdict: conditional(oracle_max == formula.krasner),
        detail: format!("formula omega(F) = {} vs oracle max = {oracle_max}", formula.krasner),
    });

    let oracle_sum = ExtRat::Finite(oracle.omega.weighted_sum());
    items.push(CrossItem {
        name: CHECK_DERIVATIVE_ORACLE,
        verdict: genuine(oracle_sum == derivative_value),
        detail: format!("sum over oracle Omega = {oracle_sum}, mu_r(F') = {derivative_value}"),
    });

    let predicted = ExtRat::Finite(formula.derivative_prediction());
    items.push(CrossItem {
        name: CHECK_DERIVATIVE_FORMULA,
        verdict: conditional(predicted == derivative_value),
        detail: format!("sum t_i delta_i = {predicted}, mu_r(F') = {derivative_value}"),
    });

    let gamma0 = formula.invariants.gammas[0].clone();
    let oracle_min = oracle.omega.min().cloned().unwrap_or_else(Rat::zero);
    items.push(CrossItem {
        name: CHECK_DIAMETER,
        verdict: genuine(oracle_min >= gamma0),
        detail: format!("min oracle Omega = {oracle_min} >= gamma_0 = {gamma0}"),
    });

    Ok(CrosscheckReport { items, formula, oracle, derivative_value })
}
