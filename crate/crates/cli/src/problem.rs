//! Problem files: one JSON document holding the prime, the chain and `F`.
//!
//! ```json
//! {"p": 5, "chain": [{"phi": "x", "gamma": "1/2"}, {"phi": "x^2-5", "gamma": "5/4"}],
//!  "F": "(x^2-5)^2-25*x", "seed": 1}
//! ```

use std::fmt;
use std::path::Path;

use okutsu_core::ground::parse_rational;
use okutsu_core::{ExtRat, GroundContext, Level, MacLaneChain, Polynomial};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub p: u64,
    pub chain: Vec<ChainEntry>,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChainEntry {
    pub phi: String,
    pub gamma: String,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub degree_bound: Option<usize>,
    pub count: Option<usize>,
    pub valuation_min: Option<i64>,
    pub valuation_max: Option<i64>,
}

/// A problem file after every field has been parsed.
#[derive(Clone, Debug)]
pub struct Problem {
    pub chain: MacLaneChain,
    pub f: Polynomial,
    pub seed: Option<u64>,
    pub sample: SampleSpec,
}

#[derive(Debug)]
pub struct LoadError(pub String);

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn load(path: &Path) -> Result<Problem, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError(format!("{}: cannot read: {e}", path.display())))?;
    let file: ProblemFile = serde_json::from_str(&text).map_err(|e| {
        LoadError(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    file.resolve().map_err(|e| LoadError(format!("{}: {e}", path.display())))
}

impl ProblemFile {
    pub fn resolve(&self) -> Result<Problem, String> {
        let ctx = GroundContext::new(self.p).map_err(|e| format!("p: {e}"))?;
        let levels = self
            .chain
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let phi: Polynomial = entry.phi.parse().map_err(|e| format!("chain[{i}].phi: {e}"))?;
                let gamma = parse_rational(&entry.gamma)
                    .map(ExtRat::Finite)
                    .map_err(|e| format!("chain[{i}].gamma: {e}"))?;
                Ok(Level::new(phi, gamma))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let chain = MacLaneChain::new(ctx, levels).map_err(|e| format!("chain: {e}"))?;
        let f: Polynomial = self.f.parse().map_err(|e| format!("F: {e}"))?;
        Ok(Problem { chain, f, seed: self.seed, sample: self.sample.clone().unwrap_or_default() })
    }
}
