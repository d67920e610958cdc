use std::fmt::Write as _;

use okutsu_core::oracle::WeightSample;
use okutsu_core::{CrosscheckReport, OkutsuReport, Rat, ValidationReport};
use serde::Serialize;

/// Report schema; rationals are `"a/b"` strings.
#[derive(Serialize)]
pub struct ReportJson {
    pub depth: usize,
    pub degrees: Vec<usize>,
    pub weight: String,
    pub lambda: Vec<String>,
    pub e_rel: Vec<u64>,
    pub e_phi: Vec<u64>,
    pub f_phi: Vec<u64>,
    pub delta_seq: Vec<String>,
    pub delta: String,
    pub krasner: String,
    pub omega_multiset: Vec<(String, usize)>,
    #[serde(rename = "e_F")]
    pub e_f: u64,
    #[serde(rename = "f_F")]
    pub f_f: u64,
    pub tameness: String,
    pub flags: Vec<String>,
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl From<&OkutsuReport> for ReportJson {
    fn from(r: &OkutsuReport) -> Self {
        ReportJson {
            depth: r.depth,
            degrees: r.frame_degrees.clone(),
            weight: r.weight.to_string(),
            lambda: strs(&r.invariants.lambda),
            e_rel: r.invariants.e_rel.clone(),
            e_phi: r.invariants.e_phi.clone(),
            f_phi: r.invariants.f_phi.clone(),
            delta_seq: strs(&r.delta_seq),
            delta: r.main_invariant.to_string(),
            krasner: r.krasner.to_string(),
            omega_multiset: r.omega.entries().iter().map(|(v, t)| (v.to_string(), *t)).collect(),
            e_f: r.e_f,
            f_f: r.f_f,
            tameness: r.tameness.as_str().to_string(),
            flags: r.flags.iter().map(|f| f.as_str().to_string()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CrosscheckJson {
    pub checks: Vec<CheckJson>,
    pub formula_omega: Vec<(String, usize)>,
    pub oracle_omega: Vec<(String, usize)>,
    pub tameness: String,
    pub verdict: String,
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub verdict: String,
    pub detail: String,
}

impl From<&CrosscheckReport> for CrosscheckJson {
    fn from(r: &CrosscheckReport) -> Self {
        let pairs = |m: &okutsu_core::ValueMultiset| m.entries().iter().map(|(v, t)| (v.to_string(), *t)).collect();
        CrosscheckJson {
            checks: r
                .items
                .iter()
                .map(|i| CheckJson { name: i.name.to_string(), verdict: i.verdict.as_str().to_string(), detail: i.detail.clone() })
                .collect(),
            formula_omega: pairs(&r.formula.omega),
            oracle_omega: pairs(&r.oracle.omega),
            tameness: r.formula.tameness.as_str().to_string(),
            verdict: overall(r).to_string(),
        }
    }
}

pub fn overall(r: &CrosscheckReport) -> &'static str {
    if r.failed() {
        "fail"
    } else if r.hypothesis_violated() {
        "hypothesis-violation demonstrated"
    } else {
        "pass"
    }
}

#[derive(Serialize)]
pub struct SampleJson {
    pub weight: String,
    pub max_found: String,
    pub witness: String,
    pub injected: bool,
    pub evaluated: usize,
    pub seed: u64,
    pub bound_respected: bool,
}

impl From<&WeightSample> for SampleJson {
    fn from(s: &WeightSample) -> Self {
        SampleJson {
            weight: s.weight.to_string(),
            max_found: s.max_found.to_string(),
            witness: s.witness.to_string(),
            injected: s.injected,
            evaluated: s.evaluated,
            seed: s.seed,
            bound_respected: s.violation.is_none(),
        }
    }
}

pub fn validation_text(v: &ValidationReport) -> String {
    let mut out = String::new();
    if v.is_valid() {
        out.push_str("chain: valid\n");
    }
    for x in &v.violations {
        let level = x.level.map(|l| format!("level {l}")).unwrap_or_else(|| "chain".into());
        let _ = writeln!(out, "violation [{}] at {level}: {}", x.code.as_str(), x.message);
    }
    out
}

pub fn report_text(r: &OkutsuReport) -> String {
    let inv = &r.invariants;
    let mut out = String::new();
    let join = |v: &[Rat]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let joinu = |v: &[u64]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "effective chain:   {}", r.effective_chain);
    let _ = writeln!(out, "Okutsu depth:      {}", r.depth);
    let _ = writeln!(
        out,
        "degree tower:      {}",
        r.frame_degrees.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")
    );
    let _ = writeln!(out, "slopes gamma:      {}", join(&inv.gammas));
    let _ = writeln!(out, "secondary lambda:  {}", join(&inv.lambda));
    let _ = writeln!(
        out,
        "value groups:      {}",
        inv.value_groups.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(out, "e_i (index):       {}  (literal convention sets e_0 = 1)", joinu(&inv.e_rel));
    let _ = writeln!(out, "e(phi_i):          {}", joinu(&inv.e_phi));
    let _ = writeln!(out, "f(phi_i):          {}", joinu(&inv.f_phi));
    let _ = writeln!(out, "weight w(F):       {}", r.weight);
    let _ = writeln!(out, "delta_i:           {}", join(&r.delta_seq));
    let _ = writeln!(out, "main invariant:    {}", r.main_invariant);
    let _ = writeln!(out, "Krasner constant:  {}", r.krasner);
    let _ = writeln!(out, "Omega:             {}", r.omega);
    let _ = writeln!(out, "e(F), f(F):        {}, {}", r.e_f, r.f_f);
    let _ = writeln!(out, "tameness:          {} (with respect to the residue characteristic)", r.tameness);
    if !r.flags.is_empty() {
        let _ = writeln!(
            out,
            "flags:             {}",
            r.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
        );
    }
    out
}

pub fn crosscheck_text(r: &CrosscheckReport) -> String {
    let mut out = String::new();
    for i in &r.items {
        let _ = writeln!(out, "[{}] {}: {}", i.verdict, i.name, i.detail);
    }
    let _ = writeln!(out, "tameness: {}", r.formula.tameness);
    let _ = writeln!(out, "verdict: {}", overall(r));
    out
}

pub fn sample_text(s: &WeightSample) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed:        {}", s.seed);
    let _ = writeln!(out, "evaluated:   {} polynomials (frame key polynomial injected: {})", s.evaluated, s.injected);
    let _ = writeln!(out, "max ratio:   {}", s.max_found);
    let _ = writeln!(out, "witness:     {}", s.witness);
    let _ = writeln!(out, "w(F):        {}", s.weight);
    match &s.violation {
        None => {
            let _ = writeln!(out, "bound:       every sampled ratio <= w(F)");
        }
        Some((q, g)) => {
            let _ = writeln!(out, "bound:       VIOLATED by {g} with ratio {q}");
        }
    }
    out
}
