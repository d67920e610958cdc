//! Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero if
//! any criterion fails. Run with `cargo test -p okutsu-cli --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use okutsu_core::generate::{random_tower, Generated, Ramification};
use okutsu_core::ground::{int, rat};
use okutsu_core::okutsu::{gamma_consistency, main_invariant_and_krasner, Tameness};
use okutsu_core::oracle::{omega_radical_family, radical_problem, sample_weight, SampleParams};
use okutsu_core::{
    crosscheck, omega_via_newton, ExtRat, GroundContext, Level, MacLaneChain, OkutsuReport, Polynomial, Rat,
    ReportFlag, ValueMultiset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const RANDOM_CHAINS: usize = 240;
const PRODUCT_PAIRS: usize = 100;
const MONIC_SAMPLES: usize = 500;

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn okutsu(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_okutsu")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn okutsu_on(cmd: &str, file: &str, extra: &[&str]) -> (i32, Vec<u8>, String) {
    let path = example(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    okutsu(&args)
}

fn poly(s: &str) -> Polynomial {
    s.parse().expect("valid expression")
}

fn chain(p: u64, levels: &[(&str, Rat)]) -> MacLaneChain {
    let levels = levels.iter().map(|(phi, g)| Level::new(poly(phi), g.clone())).collect();
    MacLaneChain::new(GroundContext::new(p).unwrap(), levels).unwrap()
}

fn multiset(pairs: &[(Rat, usize)]) -> ValueMultiset {
    ValueMultiset::from_pairs(pairs.iter().cloned())
}

fn derivative_value(c: &MacLaneChain, f: &Polynomial) -> ExtRat {
    c.mu_top(&f.derivative()).expect("mu of F'")
}

fn golden_depth0() -> Outcome {
    let c = chain(3, &[("x", rat(1, 2))]);
    let f = poly("x^2 - 3");
    let r = OkutsuReport::new(&c, &f).map_err(|e| e.to_string())?;
    let half = rat(1, 2);
    let expected = multiset(&[(half.clone(), 1)]);
    ensure!(r.weight == half, "w(F) = {}", r.weight);
    ensure!(r.main_invariant == half && r.krasner == half, "delta = {}, omega = {}", r.main_invariant, r.krasner);
    ensure!(r.omega == expected, "Omega = {}", r.omega);
    ensure!((r.e_f, r.f_f) == (2, 1), "e, f = {}, {}", r.e_f, r.f_f);
    ensure!(r.tameness == Tameness::Tame, "tameness {}", r.tameness);
    let newton = omega_via_newton(&c, &f).map_err(|e| e.to_string())?.omega;
    let closed = omega_radical_family(3, 2, &int(1), 1).map_err(|e| e.to_string())?;
    ensure!(newton == expected && closed == expected, "Newton {newton}, radical {closed}");
    Ok(format!("w = delta = omega = 1/2, Omega = {expected}, Newton and radical agree"))
}

fn golden_depth1() -> Outcome {
    let c = chain(5, &[("x", rat(1, 2)), ("x^2 - 5", rat(5, 4))]);
    let f = poly("(x^2-5)^2 - 25*x");
    let r = OkutsuReport::new(&c, &f).map_err(|e| e.to_string())?;
    let inv = &r.invariants;
    ensure!(inv.lambda == [rat(1, 2), rat(1, 4)], "lambda {:?}", inv.lambda);
    ensure!(inv.e_rel == [2, 2], "e {:?}", inv.e_rel);
    ensure!(r.weight == rat(5, 8), "w(F) = {}", r.weight);
    ensure!(r.delta_seq == [rat(1, 2), rat(3, 4)], "delta_i {:?}", r.delta_seq);
    ensure!(r.main_invariant == rat(3, 4) && r.krasner == rat(3, 4), "delta, omega");
    let expected = multiset(&[(rat(1, 2), 2), (rat(3, 4), 1)]);
    ensure!(r.omega == expected, "Omega = {}", r.omega);
    ensure!((r.e_f, r.f_f) == (4, 1) && r.tameness == Tameness::Tame, "e, f, tameness");
    let newton = omega_via_newton(&c, &f).map_err(|e| e.to_string())?;
    ensure!(newton.omega == expected, "Newton Omega {}", newton.omega);
    let segs: Vec<(Rat, usize)> = newton.polygon.segments().iter().map(|s| (s.slope.clone(), s.length)).collect();
    ensure!(segs == [(rat(-3, 4), 1), (rat(-1, 2), 2)], "hull segments {segs:?}");
    let dv = derivative_value(&c, &f);
    ensure!(dv == ExtRat::Finite(rat(7, 4)), "mu_1(F') = {dv}");
    ensure!(r.derivative_prediction() == rat(7, 4), "sum t_i delta_i = {}", r.derivative_prediction());
    Ok(format!("Omega = {expected} from formulas and hull (-3/4 x1, -1/2 x2), mu_1(F') = 7/4"))
}

fn wild_counterexample() -> Outcome {
    let c = chain(2, &[("x", rat(1, 2))]);
    let f = poly("x^2 - 2");
    let x = crosscheck(&c, &f).map_err(|e| e.to_string())?;
    ensure!(x.formula.omega == multiset(&[(rat(1, 2), 1)]), "formula Omega {}", x.formula.omega);
    ensure!(x.oracle.omega == multiset(&[(rat(3, 2), 1)]), "oracle Omega {}", x.oracle.omega);
    ensure!(x.formula.has_flag(ReportFlag::HypothesisUnverified), "report lacks the unverified flag");
    ensure!(!x.failed() && x.hypothesis_violated(), "verdicts {:?}", x.items);
    ensure!(x.oracle.omega.min() >= Some(&rat(1, 2)), "min oracle Omega below gamma_0");
    let (code, out, err) = okutsu_on("crosscheck", "p2_x2m2.json", &[]);
    ensure!(code == 0, "crosscheck exit {code}");
    let text = String::from_utf8_lossy(&out);
    ensure!(
        text.contains("hypothesis-violation demonstrated") && err.contains("hypothesis-violation demonstrated"),
        "missing hypothesis-violation message"
    );
    Ok("formula {1/2^1} vs oracle {3/2^1}; crosscheck exits 0 with hypothesis-violation demonstrated".into())
}

/// Twenty distinct admissible `(p, m, c, k)`, drawn with a fixed seed.
fn radical_tuples() -> Vec<(u64, u64, Rat, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out: Vec<(u64, u64, Rat, i64)> = Vec::new();
    while out.len() < 20 {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let m = rng.gen_range(2u64..=6);
        let k = rng.gen_range(-6i64..=9);
        let (a, b) = (rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4));
        let unit = |v: i64| v != 0 && v % p as i64 != 0;
        if m % p == 0 || num_integer::gcd(k, m as i64) != 1 || !unit(a) || !unit(b) {
            continue;
        }
        let t = (p, m, rat(a, b), k);
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn radical_sweep() -> Outcome {
    let tuples = radical_tuples();
    for (p, m, c, k) in &tuples {
        let (chain, f) = radical_problem(*p, *m, c, *k).map_err(|e| e.to_string())?;
        let closed = omega_radical_family(*p, *m, c, *k).map_err(|e| e.to_string())?;
        let formula = OkutsuReport::new(&chain, &f).map_err(|e| format!("{f} over p = {p}: {e}"))?.omega;
        let newton = omega_via_newton(&chain, &f).map_err(|e| e.to_string())?.omega;
        ensure!(closed == multiset(&[(rat(*k, *m as i64), *m as usize - 1)]), "closed form {closed}");
        ensure!(formula == closed && newton == closed, "{f} over p = {p}: formula {formula}, Newton {newton}, closed {closed}");
    }
    Ok(format!("{} tuples, formula = Newton = {{(k/m)^(m-1)}}", tuples.len()))
}

fn random_poly(rng: &mut ChaCha8Rng, ctx: &GroundContext, max_deg: usize, monic: bool) -> Polynomial {
    let d = rng.gen_range(usize::from(monic)..=max_deg);
    let mut coeffs: Vec<Rat> =
        (0..=d).map(|_| int(rng.gen_range(-9..=9)) * ctx.p_pow(rng.gen_range(-1..=3))).collect();
    if monic || coeffs[d] == int(0) {
        coeffs[d] = int(1);
    }
    Polynomial::from_coeffs(coeffs)
}

fn random_chains(count: usize, seed: u64, ram: Ramification) -> Vec<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let p = [2u64, 3, 5, 7, 11][i % 5];
            let mut depth = (i / 5) % 4;
            if p == 2 && ram == Ramification::Tame {
                depth = depth.min(1);
            }
            random_tower(&mut rng, p, depth, 24, ram).expect("tower within budget")
        })
        .collect()
}

fn property_suite() -> Outcome {
    let chains = random_chains(RANDOM_CHAINS, 7, Ramification::Any);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    let mut monics = 0;
    for (idx, g) in chains.iter().enumerate() {
        let c = &g.chain;
        let ctx = c.ctx();
        ensure!(c.validate().is_valid(), "generated chain {c} is invalid");
        let inv = c.invariants().map_err(|e| format!("(e) {c}: {e}"))?;
        // (a)
        ensure!(inv.recurrence_holds(), "(a) recurrence fails for {c}");
        // (b)
        for i in 0..=c.depth() {
            for j in 0..=i {
                ensure!(c.mu(i, &c.level(j).phi).unwrap() == c.level(j).gamma, "(b) mu_{i}(phi_{j}) on {c}");
            }
        }
        let probe = random_poly(&mut rng, ctx, 16, false);
        for i in 1..=c.depth() {
            ensure!(c.mu(i - 1, &probe).unwrap() <= c.mu(i, &probe).unwrap(), "(b) monotonicity at {i} on {c}");
        }
        // (c), (d): spread over the chains
        let want_pairs = PRODUCT_PAIRS * (idx + 1) / chains.len() - PRODUCT_PAIRS * idx / chains.len();
        for _ in 0..want_pairs {
            let (f, h) = (random_poly(&mut rng, ctx, 12, false), random_poly(&mut rng, ctx, 12, false));
            let fh = &f * &h;
            for i in 0..=c.depth() {
                let lhs = c.mu(i, &fh).unwrap();
                let rhs = &c.mu(i, &f).unwrap() + &c.mu(i, &h).unwrap();
                ensure!(lhs == rhs, "(c) mu_{i}({f} * {h}) on {c}");
            }
            pairs += 1;
        }
        let w = c.weight().unwrap();
        let want_monic = MONIC_SAMPLES * (idx + 1) / chains.len() - MONIC_SAMPLES * idx / chains.len();
        for _ in 0..want_monic {
            let f = random_poly(&mut rng, ctx, 20, true);
            let v = c.mu_top(&f).unwrap().finite().cloned().unwrap();
            ensure!(v / BigInt::from(f.degree().unwrap()) <= w, "(d) {f} exceeds w = {w} on {c}");
            monics += 1;
        }
        // (e)
        for ((&m, &e), &f) in inv.degrees.iter().zip(&inv.e_phi).zip(&inv.f_phi) {
            ensure!(m as u64 == e * f, "(e) m = {m}, e = {e}, f = {f} on {c}");
        }
        // (f)
        let n = g.f.degree().unwrap();
        let r = OkutsuReport::new(c, &g.f).map_err(|e| e.to_string())?;
        ensure!(r.multiplicities.iter().sum::<usize>() == n - 1, "(f) sum t_i on {c}");
        // (g)
        ensure!(gamma_consistency(&inv).passed(), "(g) gamma consistency on {c}");
        // (h)
        main_invariant_and_krasner(&inv).map_err(|e| format!("(h) {c}: {e}"))?;
    }
    Ok(format!("{} chains, {pairs} product pairs, {monics} monic polynomials; (a)-(h) hold", chains.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut problems: Vec<(MacLaneChain, Polynomial)> = vec![
        (chain(3, &[("x", rat(1, 2))]), poly("x^2 - 3")),
        (chain(5, &[("x", rat(1, 2)), ("x^2 - 5", rat(5, 4))]), poly("(x^2-5)^2 - 25*x")),
    ];
    for (p, m, c, k) in radical_tuples() {
        problems.push(radical_problem(p, m, &c, k).map_err(|e| e.to_string())?);
    }
    for g in random_chains(RANDOM_CHAINS, 7, Ramification::Any)
        .into_iter()
        .chain(random_chains(120, 9, Ramification::Tame))
    {
        problems.push((g.chain, g.f));
    }
    let (mut compared, mut skipped) = (0, 0);
    for (c, f) in &problems {
        let x = crosscheck(c, f).map_err(|e| e.to_string())?;
        if x.formula.tameness != Tameness::Tame {
            skipped += 1;
            continue;
        }
        ensure!(!x.failed(), "{f} over {c}: {:?}", x.items);
        ensure!(x.formula.omega == x.oracle.omega, "{f} over {c}: formula {} vs oracle {}", x.formula.omega, x.oracle.omega);
        ensure!(
            ExtRat::Finite(x.oracle.omega.weighted_sum()) == derivative_value(c, f),
            "{f} over {c}: derivative identity"
        );
        compared += 1;
    }
    Ok(format!("{compared} tame problems agree exactly ({skipped} non-tame excluded)"))
}

fn weight_sampling() -> Outcome {
    let files = ["p3_x2m3.json", "p5_depth1.json", "p2_x2m2.json", "p7_radical.json"];
    for file in files {
        let (code, out, err) = okutsu_on("sample-weight", file, &["--json", "--count", "2000"]);
        ensure!(code == 0, "{file}: exit {code}: {err}");
        let v: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        ensure!(v["bound_respected"] == true, "{file}: bound violated");
        ensure!(v["injected"] == true && v["max_found"] == v["weight"], "{file}: w(F) not attained: {v}");
        ensure!(v["evaluated"] == 2001, "{file}: evaluated {}", v["evaluated"]);
    }
    // the library path, with an explicit seed
    let c = chain(5, &[("x", rat(1, 2)), ("x^2 - 5", rat(5, 4))]);
    let f = poly("(x^2-5)^2 - 25*x");
    let params = SampleParams { degree_bound: 3, count: 2000, valuation_range: (-1, 3), seed: 42 };
    let s = sample_weight(&c, &f, &params).map_err(|e| e.to_string())?;
    ensure!(s.violation.is_none() && s.max_found == rat(5, 8), "library sample: max {}", s.max_found);
    Ok(format!("{} golden files, 2000 draws each, max = w(F) attained by the injected phi_r", files.len()))
}

fn cli_contract() -> Outcome {
    for file in ["p3_x2m3.json", "p5_depth1.json", "p2_x2m2.json"] {
        for (cmd, extra) in [
            ("report", &["--json"][..]),
            ("crosscheck", &["--json"][..]),
            ("sample-weight", &["--json", "--seed", "17", "--count", "500"][..]),
        ] {
            let a = okutsu_on(cmd, file, extra);
            let b = okutsu_on(cmd, file, extra);
            ensure!(a.0 == 0 && b.0 == 0, "{cmd} {file}: exit {}", a.0);
            ensure!(a.1 == b.1, "{cmd} {file}: output differs between runs");
        }
    }
    let (code, _, err) = okutsu_on("validate", "malformed_expr.json", &[]);
    ensure!(code == 3, "malformed file: exit {code}");
    ensure!(err.contains("at byte"), "malformed file: no position in {err:?}");
    let (code, _, _) = okutsu_on("crosscheck", "p5_corrupted.json", &[]);
    ensure!(code == 2, "corrupted file: crosscheck exit {code}");
    Ok("byte-stable JSON on 3 files x 3 commands; malformed exit 3 with position; corrupted exit 2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden depth-0 tame (p = 3, x^2 - 3)", golden_depth0),
        ("golden depth-1 tame (p = 5, (x^2-5)^2 - 25x)", golden_depth1),
        ("wild counterexample (p = 2, x^2 - 2)", wild_counterexample),
        ("radical family sweep", radical_sweep),
        ("property suite on random chains", property_suite),
        ("oracle versus formula equivalence", oracle_equivalence),
        ("weight sampling", weight_sampling),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
