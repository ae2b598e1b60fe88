//! Smoothed-trial batches: generate, solve, certify, optionally cross-check
//! against the brute-force oracle, and aggregate deterministically.

use std::time::{Duration, Instant};

use mpg_core::{
    condition_number, rat_from_str, rat_to_string, rat_to_f64, CoreError, Game, PolicyPair, Rat,
};
use mpg_oracle::{brute_force_discounted, brute_force_solve};
use mpg_rand::{gen_graph, sample_weights};
use mpg_solve::{solve_discounted, solve_mpg, GameValue, SolveResult, SolverConfig};
use num::Zero;
use rayon::prelude::*;

use crate::config::{trial_seeds, ExperimentConfig};
use crate::error::ExpError;

/// Largest game the brute-force cross-check will attempt.
pub const VERIFY_MAX_N: usize = 8;

const CSV_VERSION_LINE: &str = "# mpg-trials v1";
const CSV_HEADER: [&str; 12] = [
    "trial", "seed", "n", "m", "phi", "delta", "in_u", "switches", "gamma_updates",
    "final_gamma", "pair", "verified",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Weight seed; the graph seed is derivable from the config and index.
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub phi: f64,
    /// Condition number, present exactly when `in_u` holds.
    pub delta: Option<Rat>,
    /// The solved pair is certified strictly inside its cone.
    pub in_u: bool,
    pub total_switches: u64,
    pub gamma_updates: u64,
    pub final_gamma: Rat,
    pub pair: PolicyPair,
    /// `Some(agreed)` when the brute-force oracle ran; `None` otherwise.
    pub verified: Option<bool>,
    /// Wall-clock solve time. Kept in memory only; the CSV stays
    /// byte-deterministic.
    pub wall: Duration,
}

/// Instantiated safety cap on total switches: 50 n^4 m^2 D^2 (log2(nD)+1)^3
/// with D = max(1, delta). `None` when no condition number is known.
pub fn switch_cap(n: usize, m: usize, delta: Option<&Rat>) -> Option<f64> {
    let d = rat_to_f64(delta?).max(1.0);
    let n = n as f64;
    let m = m as f64;
    let log_term = (n * d).log2() + 1.0;
    Some(50.0 * n.powi(4) * m * m * d * d * log_term.powi(3))
}

fn certify(g: &Game, pair: &PolicyPair) -> Result<(bool, Option<Rat>), ExpError> {
    match condition_number(g, pair) {
        Ok(rep) if rep.in_u => Ok((true, Some(rep.delta))),
        Ok(_) | Err(CoreError::NotCertified) => Ok((false, None)),
        Err(other) => Err(other.into()),
    }
}

fn oracle_agrees(g: &Game, result: &SolveResult) -> Option<bool> {
    if g.n() > VERIFY_MAX_N {
        return None;
    }
    match &result.value {
        GameValue::MeanPayoff { lambda, .. } => {
            let report = brute_force_solve(g).ok()?;
            let agree = report.lambda.iter().all(|l| l == lambda)
                && report.optimal_pairs.contains(&result.pair);
            Some(agree)
        }
        GameValue::Discounted(dvv) => {
            let report = brute_force_discounted(g, &dvv.gamma).ok()?;
            let agree =
                report.value == dvv.value && report.optimal_pairs.contains(&result.pair);
            Some(agree)
        }
    }
}

/// Generates and solves trial `trial` of the batch. Exposed so harnesses
/// can rebuild any record's instance from the config alone.
pub fn run_one_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord, ExpError> {
    let (graph_seed, weight_seed) = trial_seeds(cfg.master_seed, trial as u64);
    let skeleton = gen_graph(&cfg.graph, graph_seed)?;
    let g = sample_weights(&skeleton, &cfg.dist, weight_seed)?;
    let solver_cfg = SolverConfig::default();

    let start = Instant::now();
    let result = match cfg.gamma_bar_rat()? {
        Some(gamma_bar) => solve_discounted(&g, &gamma_bar, &solver_cfg)?,
        None => solve_mpg(&g, &solver_cfg)?,
    };
    let wall = start.elapsed();

    let (in_u, delta) = certify(&g, &result.pair)?;
    let verified = oracle_agrees(&g, &result);
    let final_gamma = match &result.value {
        GameValue::Discounted(dvv) => dvv.gamma.clone(),
        GameValue::MeanPayoff { .. } => result
            .trace
            .phases
            .last()
            .map(|p| p.gamma.clone())
            .unwrap_or_else(Rat::zero),
    };

    Ok(TrialRecord {
        trial,
        seed: weight_seed,
        n: g.n(),
        m: g.m(),
        phi: cfg.dist.phi(),
        delta,
        in_u,
        total_switches: result.trace.total_switches,
        gamma_updates: result.trace.gamma_updates,
        final_gamma,
        pair: result.pair,
        verified,
        wall,
    })
}

/// Runs the whole batch. Trials are independent; the aggregate is ordered
/// by trial index, so the output is identical for any thread count.
pub fn run_smoothed_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, ExpError> {
    cfg.validate()?;
    let body = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_one_trial(cfg, t))
            .collect::<Result<Vec<_>, ExpError>>()
    };
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| ExpError::BadConfig(e.to_string()))?
            .install(body)
    } else {
        body()
    }
}

fn pair_to_field(pair: &PolicyPair) -> String {
    pair.successors()
        .iter()
        .map(|s| (s + 1).to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn pair_from_field(s: &str) -> Result<PolicyPair, ExpError> {
    let succ = s
        .split(';')
        .map(|t| {
            t.parse::<usize>()
                .ok()
                .and_then(|v| v.checked_sub(1))
                .ok_or_else(|| ExpError::BadConfig(format!("bad pair field `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolicyPair::from_successors(succ))
}

/// Serializes records to CSV under a versioned header comment. Wall time
/// is deliberately absent.
pub fn trials_to_csv(records: &[TrialRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.phi.to_string(),
            r.delta.as_ref().map(rat_to_string).unwrap_or_default(),
            r.in_u.to_string(),
            r.total_switches.to_string(),
            r.gamma_updates.to_string(),
            rat_to_string(&r.final_gamma),
            pair_to_field(&r.pair),
            r.verified.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8");
    format!("{CSV_VERSION_LINE}\n{body}")
}

/// Parses `trials_to_csv` output back into records, with zero wall times.
pub fn trials_from_csv(text: &str) -> Result<Vec<TrialRecord>, ExpError> {
    let bad = |msg: String| ExpError::BadConfig(msg);
    let mut lines = text.lines();
    match lines.next() {
        Some(line) if line == CSV_VERSION_LINE => {}
        other => return Err(bad(format!("missing version line, got {other:?}"))),
    }
    let rest = lines.collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        if row.len() != CSV_HEADER.len() {
            return Err(bad(format!("expected {} columns", CSV_HEADER.len())));
        }
        let field = |i: usize| row.get(i).expect("length checked");
        let parse_int = |i: usize| {
            field(i)
                .parse::<u64>()
                .map_err(|e| bad(format!("column {}: {e}", CSV_HEADER[i])))
        };
        let parse_rat_at = |i: usize| {
            rat_from_str(field(i))
                .ok_or_else(|| bad(format!("column {}: bad rational", CSV_HEADER[i])))
        };
        records.push(TrialRecord {
            trial: parse_int(0)? as usize,
            seed: parse_int(1)?,
            n: parse_int(2)? as usize,
            m: parse_int(3)? as usize,
            phi: field(4)
                .parse::<f64>()
                .map_err(|e| bad(format!("column phi: {e}")))?,
            delta: if field(5).is_empty() {
                None
            } else {
                Some(parse_rat_at(5)?)
            },
            in_u: field(6) == "true",
            total_switches: parse_int(7)?,
            gamma_updates: parse_int(8)?,
            final_gamma: parse_rat_at(9)?,
            pair: pair_from_field(field(10))?,
            verified: match field(11) {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => return Err(bad(format!("column verified: `{other}`"))),
            },
            wall: Duration::ZERO,
        });
    }
    Ok(records)
}
