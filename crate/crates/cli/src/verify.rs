use std::path::PathBuf;

use gassoc::families::connected_graphs;
use gassoc::flip::{self, ReconfigSequence};
use gassoc::polymatroid::{self, GraphAssocRank};
use gassoc::reduction::{self, bundle};
use gassoc::{Error, Graph, Result, WeightFn};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::SUFFICIENCY_FILE;
use crate::{io, RunConfig, Suite, VerifyArgs};

const MAX_EXHAUSTIVE_N: usize = 6;

#[derive(Default)]
struct Tally {
    instances: usize,
    checks: usize,
    failures: usize,
    details: Vec<Value>,
}

impl Tally {
    fn record(&mut self, checks: usize, failures: usize, detail: Value) {
        self.instances += 1;
        self.checks += checks;
        self.failures += failures;
        self.details.push(detail);
    }
}

fn describe(g: &Graph) -> Value {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|&(a, b)| format!("{}-{}", g.label(a), g.label(b)))
        .collect();
    json!({ "vertices": g.n(), "edges": edges })
}

/// The single `--graph`, or every connected graph with `min_n..=max_n`
/// vertices.
fn instances(args: &VerifyArgs, min_n: usize) -> Result<Vec<Graph>> {
    if let Some(p) = &args.graph {
        return Ok(vec![io::graph(p)?]);
    }
    if args.max_n > MAX_EXHAUSTIVE_N {
        return Err(Error::ResourceLimit(format!(
            "exhaustive graph enumeration is capped at {MAX_EXHAUSTIVE_N} vertices"
        )));
    }
    Ok((min_n..=args.max_n).flat_map(connected_graphs).collect())
}

/// Positive integer weights with total at most `max_total`.
fn sample_weights(n: usize, max_total: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut w = vec![1u64; n];
    for _ in 0..rng.gen_range(0..=max_total - n) {
        w[rng.gen_range(0..n)] += 1;
    }
    w
}

pub fn run(cfg: &RunConfig, args: &VerifyArgs) -> Result<bool> {
    let mut tally = Tally::default();
    match args.suite {
        Suite::Axioms => {
            for g in instances(args, 2)? {
                let rep = polymatroid::check_axioms(&GraphAssocRank::new(&g)?, cfg.exec)?;
                let detail = json!({ "graph": describe(&g), "report": rep });
                tally.record(rep.checks, rep.violations.len(), detail);
            }
        }
        Suite::Realization => {
            for g in instances(args, 2)? {
                let rep = polymatroid::verify_realization(&g, cfg.exec)?;
                let c = &rep.checks;
                let failed = [c.compat, c.cover, c.injective, c.swap_support]
                    .iter()
                    .filter(|ok| !**ok)
                    .count();
                tally.record(4, failed, json!({ "graph": describe(&g), "report": rep }));
            }
        }
        Suite::Projection => {
            for g in instances(args, 1)? {
                let rep = flip::check_projections(&g, &cfg.limits, cfg.exec)?;
                let detail = json!({ "graph": describe(&g), "report": rep });
                tally.record(rep.checks, rep.failures, detail);
            }
        }
        Suite::BlowupEquiv => blowup_equiv(cfg, args, &mut tally)?,
        Suite::Sequence => sequence(cfg, args, &mut tally)?,
    }
    let pass = tally.failures == 0;
    let report = json!({
        "suite": args.suite.name(),
        "pass": pass,
        "instances": tally.instances,
        "checks": tally.checks,
        "failures": tally.failures,
        "details": tally.details,
    });
    if cfg.json {
        io::print_json(&report);
    } else {
        println!(
            "{}: {} ({} instances, {} checks, {} failures)",
            report["suite"].as_str().unwrap_or_default(),
            if pass { "pass" } else { "FAIL" },
            tally.instances,
            tally.checks,
            tally.failures
        );
    }
    Ok(pass)
}

impl Suite {
    fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

fn blowup_equiv(cfg: &RunConfig, args: &VerifyArgs, tally: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let graphs = instances(args, 1)?;
    for g in graphs.iter().filter(|g| g.n() <= args.max_weight) {
        let assignments: Vec<WeightFn> = match (&args.weights, &args.graph) {
            (Some(p), Some(_)) => vec![io::weights(g, p)?],
            _ => (0..args.samples)
                .map(|_| WeightFn::from_u64(&sample_weights(g.n(), args.max_weight, &mut rng)))
                .collect::<Result<_>>()?,
        };
        for w in assignments {
            let rep = reduction::check_equivalence(g, &w, &cfg.limits, cfg.exec)?;
            let weights: Vec<String> = w.as_slice().iter().map(ToString::to_string).collect();
            let detail = json!({ "graph": describe(g), "weights": weights, "report": rep });
            tally.record(rep.pairs, rep.mismatches.len(), detail);
        }
    }
    Ok(())
}

fn sequence(_cfg: &RunConfig, args: &VerifyArgs, tally: &mut Tally) -> Result<()> {
    let dir = args.bundle.as_deref();
    let pick = |explicit: &Option<PathBuf>, file: &str| {
        explicit.clone().or_else(|| dir.map(|d| d.join(file)))
    };
    let missing = |what: &str| Error::InvalidArgument(format!("sequence suite needs --{what} or --bundle"));
    let graph_path = pick(&args.graph, bundle::GRAPH_FILE).ok_or_else(|| missing("graph"))?;
    let start_path = pick(&args.start, bundle::T_INI_FILE).ok_or_else(|| missing("start"))?;
    let moves_path = pick(&args.moves, SUFFICIENCY_FILE).ok_or_else(|| missing("moves"))?;
    let g = io::graph(&graph_path)?;
    let start = io::tree(&g, &start_path)?;
    let moves = ReconfigSequence::parse_moves(&g, &io::read(&moves_path)?)?;
    let seq = ReconfigSequence::new(start, moves);

    let weights = match pick(&args.weights, bundle::WEIGHTS_FILE) {
        Some(p) if args.weights.is_some() || p.exists() => Some(io::weights(&g, &p)?),
        _ => None,
    };
    let target = match pick(&args.target, bundle::T_TAR_FILE) {
        Some(p) => Some(io::tree(&g, &p)?),
        None => None,
    };
    let below: Option<BigUint> = match (&args.below, dir) {
        (Some(b), _) => Some(
            b.parse()
                .map_err(|_| Error::InvalidArgument(format!("--below {b:?} is not an integer")))?,
        ),
        (None, Some(d)) => {
            let meta: Value = serde_json::from_str(&io::read(&d.join(bundle::META_FILE))?)
                .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
            meta["threshold"].as_str().and_then(|s| s.parse().ok())
        }
        (None, None) => None,
    };

    let (valid, end) = flip::validate_sequence(&g, &seq);
    let mut checks = vec![("valid", valid)];
    if let Some(t) = &target {
        checks.push(("reaches_target", valid && end == *t));
    }
    let weight = match &weights {
        Some(w) if valid => Some(flip::weighted_length(&g, &seq, w)?),
        Some(_) => None,
        None => Some(BigUint::from(seq.len())),
    };
    if let Some(limit) = &below {
        checks.push(("below_threshold", weight.as_ref().is_some_and(|x| x < limit)));
    }
    let failures = checks.iter().filter(|c| !c.1).count();
    let detail = json!({
        "moves": seq.len(),
        "weight": weight.map(|x| x.to_string()),
        "threshold": below.map(|x| x.to_string()),
        "checks": checks.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
    });
    tally.record(checks.len(), failures, detail);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_weights_are_positive_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=7 {
            for _ in 0..50 {
                let w = sample_weights(n, 7, &mut rng);
                assert_eq!(w.len(), n);
                assert!(w.iter().all(|&x| x >= 1));
                assert!(w.iter().sum::<u64>() <= 7);
            }
        }
    }

    #[test]
    fn suite_names_match_the_command_line() {
        assert_eq!(Suite::BlowupEquiv.name(), "blowup-equiv");
        assert_eq!(Suite::Axioms.name(), "axioms");
    }
}
