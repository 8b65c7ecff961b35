//! Command implementations behind the `parlat` binary. Each command returns its stdout
//! and stderr lines with an exit code: 0 when everything checked passes, 1 on a
//! verification failure, 2 on usage, parse or input errors.

pub mod query;

use std::fs;
use std::path::Path;

use parlat_core::galois::{
    closed_lattice, matching_pairs, tightness_check, verify_theorem21, ElemSet, FiniteRelationAlgebra, RelationJson,
    Side,
};
use parlat_core::lhs::{self, counterexample_report, NormTable, OperatorJson, ScaleConfig};
use parlat_core::space::{MultiplierTop, SpaceLattice};
use parlat_core::verify::{run_suite, SuiteConfig, SuiteSelection};
use serde::Serialize;
use serde_json::json;

use query::{eval_query, parse_query, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: Vec<String>,
    pub stderr: Vec<String>,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            stdout: Vec::new(),
            stderr: vec![msg.into()],
            code: EXIT_USAGE,
        }
    }

    fn push<T: Serialize>(&mut self, json: bool, value: &T, human: impl FnOnce() -> String) {
        self.stdout.push(if json {
            serde_json::to_string(value).expect("reports serialize")
        } else {
            human()
        });
    }
}

fn set_list(sets: &[ElemSet]) -> String {
    sets.iter().map(ElemSet::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run_query(text: &str, json: bool, omega: bool) -> Outcome {
    let ast = match parse_query(text) {
        Ok(a) => a,
        Err(e) => {
            let mut o = Outcome::usage(e.render(text));
            if json {
                o.stdout.push(json!({"query": text, "error": e}).to_string());
            }
            return o;
        }
    };
    let lattice = SpaceLattice::new(if omega { MultiplierTop::Omega } else { MultiplierTop::Infinity });
    match eval_query(&ast, text, &lattice) {
        Ok(v) => {
            let mut o = Outcome::default();
            let report = match v {
                Value::Bool(b) => json!({"query": text, "type": "bool", "result": b}),
                Value::Space(p) => json!({
                    "query": text,
                    "type": "space",
                    "result": p.to_string(),
                    "space": p,
                    "extension": p.is_extension(),
                    "nonreflexive": !p.is_reflexive(),
                }),
            };
            o.push(json, &report, || v.to_string());
            o
        }
        Err(e) => {
            let mut o = Outcome::usage(format!("error: {e}"));
            if json {
                o.stdout.push(json!({"query": text, "error": e}).to_string());
            }
            o
        }
    }
}

pub fn run_verify(suite: &str, config: SuiteConfig, json: bool) -> Outcome {
    let selection: SuiteSelection = match suite.parse() {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("error: {e}; expected one of galois, lattice, holder, young, amalgam, inductive, membership, lhs, counterexample, all")),
    };
    if config.trials == Some(0) || config.resolution.is_some_and(|r| r < 2) {
        return Outcome::usage("error: --trials must be positive and --resolution at least 2");
    }
    let mut o = Outcome::default();
    let mut failed = false;
    for s in selection.suites() {
        let report = match run_suite(s, &config) {
            Ok(r) => r,
            Err(e) => return Outcome::usage(format!("error in suite {s}: {e}")),
        };
        for r in &report.records {
            if json {
                o.stdout.push(serde_json::to_string(r).expect("records serialize"));
            } else if !r.pass {
                let sides = match (r.lhs, r.rhs) {
                    (Some(l), Some(rh)) => format!(" lhs={l:e} rhs={rh:e}"),
                    _ => String::new(),
                };
                let detail = r.detail.as_deref().map(|d| format!(" [{d}]")).unwrap_or_default();
                o.stdout.push(format!("FAIL {s}: {} ({}){sides}{detail}", r.check, r.input));
            }
        }
        let summary = report.summary();
        failed |= !summary.pass;
        o.push(json, &json!({"summary": summary}), || {
            format!(
                "{} {s}: {} checks, {} failed",
                if summary.pass { "PASS" } else { "FAIL" },
                summary.checks,
                summary.failures
            )
        });
    }
    o.code = if failed { EXIT_FAIL } else { EXIT_PASS };
    o
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("error: cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("error: {}: {e}", path.display()))
}

pub fn run_closure(path: &Path, json: bool) -> Outcome {
    let alg = match read_json::<RelationJson>(path)
        .and_then(|j| FiniteRelationAlgebra::try_from(j).map_err(|e| format!("error: {}: {e}", path.display())))
    {
        Ok(a) => a,
        Err(e) => return Outcome::usage(e),
    };
    let computed = (|| {
        let fl = closed_lattice(&alg, Side::L)?;
        let fr = closed_lattice(&alg, Side::R)?;
        let laws = verify_theorem21(&alg)?;
        let pairs = matching_pairs(&alg)?;
        let tight = tightness_check(&alg, &fr.sets)?;
        Ok::<_, parlat_core::galois::GaloisError>((fl, fr, laws, pairs, tight))
    })();
    let (fl, fr, laws, pairs, tight) = match computed {
        Ok(x) => x,
        Err(e) => return Outcome::usage(format!("error: {e}")),
    };
    let mut o = Outcome::default();
    let report = json!({
        "n": alg.n(),
        "left_lattice": fl.sets,
        "right_lattice": fr.sets,
        "matching_pairs": pairs,
        "laws": laws.checks,
        "left_universal": alg.left_universal(),
        "right_universal": alg.right_universal(),
        "tight": tight.tight,
        "dense_closed_sets": tight.dense_closed_sets,
    });
    if json {
        o.stdout.push(report.to_string());
    } else {
        o.stdout.push(format!("F^L ({} sets): {}", fl.len(), set_list(&fl.sets)));
        o.stdout.push(format!("F^R ({} sets): {}", fr.len(), set_list(&fr.sets)));
        o.stdout.push(format!("L𝔄 = {}, R𝔄 = {}", alg.left_universal(), alg.right_universal()));
        o.stdout.push(format!("lattice laws hold: {}", laws.pass()));
        o.stdout.push(format!("tight={}", tight.tight));
    }
    o.code = if laws.pass() { EXIT_PASS } else { EXIT_FAIL };
    o
}

pub fn run_scale(config: &Path, op: &Path, json: bool) -> Outcome {
    let built = read_json::<ScaleConfig>(config)
        .and_then(|c| c.build().map_err(|e| format!("error: {}: {e}", config.display())))
        .and_then(|s| {
            read_json::<OperatorJson>(op)
                .and_then(|j| j.build(&s).map_err(|e| format!("error: {}: {e}", op.display())))
                .map(|a| (s, a))
        });
    let (scale, a) = match built {
        Ok(x) => x,
        Err(e) => return Outcome::usage(e),
    };
    let table = match NormTable::compute(&scale, &a) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("error: {e}")),
    };
    let mut o = Outcome::default();
    let sets = match lhs::index_sets_from(&scale, &table) {
        Ok(s) => s,
        Err(e) => {
            o.push(json, &json!({"error": e.to_string(), "norms": table}), || format!("FAIL: {e}"));
            o.code = EXIT_FAIL;
            return o;
        }
    };
    let adj = match lhs::adjoint(&scale, &a) {
        Ok(x) => x,
        Err(e) => {
            o.push(json, &json!({"error": e.to_string()}), || format!("FAIL: {e}"));
            o.code = EXIT_FAIL;
            return o;
        }
    };
    let ok = adj.mirrored && adj.max_relative_gap <= lhs::ADJOINT_TOL && table.all_converged;
    let report = json!({
        "n": scale.n(),
        "dim": scale.dim(),
        "cap": scale.cap(),
        "order": a.order,
        "norms": table,
        "domain": sets.domain,
        "image": sets.image,
        "pairs": sets.pairs,
        "adjoint_gap": adj.max_relative_gap,
        "adjoint_mirrored": adj.mirrored,
    });
    if json {
        o.stdout.push(report.to_string());
    } else {
        o.stdout.push(sets.to_string());
        let pairs: Vec<String> = sets.pairs.iter().map(|(q, p)| format!("({q},{p})")).collect();
        o.stdout.push(format!("J(A) = {{{}}}", pairs.join(",")));
        o.stdout.push(format!(
            "adjoint: max relative gap {:e}, J mirrored: {}",
            adj.max_relative_gap, adj.mirrored
        ));
        if !table.all_converged {
            o.stdout.push("warning: some power iterations hit the iteration cap".into());
        }
    }
    o.code = if ok { EXIT_PASS } else { EXIT_FAIL };
    o
}

pub fn run_counterexample(n: usize, json: bool) -> Outcome {
    if !(1..=19).contains(&n) {
        return Outcome::usage("error: --n must lie in 1..=19");
    }
    let r = match counterexample_report(n) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("error: {e}")),
    };
    let mut o = Outcome::default();
    let report = json!({
        "n": n,
        "chain": r.chain,
        "chain_length": r.chain.len(),
        "is_chain": r.is_chain,
        "multipliers_match": r.multipliers_match,
        "right_universal": r.tightness.right_universal,
        "tight": r.tightness.tight,
    });
    if json {
        o.stdout.push(report.to_string());
    } else {
        let chain: Vec<String> = r.chain.iter().map(ElemSet::to_string).collect();
        o.stdout.push(format!("multiplier chain ({}): {}", r.chain.len(), chain.join(" ⊂ ")));
        o.stdout.push(format!("M(P_j) = P_{{n-j}} for all j: {}", r.multipliers_match));
        o.stdout.push(format!("R𝔄 = {}", r.tightness.right_universal));
        o.stdout.push(format!("tight={}", r.tightness.tight));
    }
    o.code = if r.is_chain && r.chain.len() == n + 1 && r.multipliers_match && !r.tightness.tight {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    o
}
