//! End-to-end acceptance checks for the whole stack: exact fixtures,
//! solver-versus-oracle equivalence on randomized batches, the truncated
//! oracle model, invariance under weight scaling, and the statistical
//! condition-number tail. Each test prints one
//! `criterion N: PASS/FAIL - <label>` line.
//!
//! The randomized batches are built once behind `OnceLock`s and shared by
//! every criterion that reads them, so the timed sections measure a single
//! build.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use mpg_core::{
    blackwell_bias_zero_player, condition_number, discounted_residual,
    discounted_value_zero_player, mean_value_and_bias, paper_fixture, rat, rat_to_f64,
    scale_shift_weights, CoreError, Edge, FixtureParams, FunctionalGraph, Game, Player,
    PolicyPair, Rat,
};
use mpg_exp::{
    run_smoothed_trials, switch_cap, tail_from_records, trial_seeds, ExperimentConfig,
    TailReport, TrialRecord,
};
use mpg_oracle::{
    brute_force_discounted, brute_force_solve, cycle_mean, enumerate_simple_cycles,
    karp_min_mean_cycle, one_player_breakpoints, two_player_breakpoint_scan,
    value_iteration_discounted,
};
use mpg_rand::{gen_graph, sample_weights, DistributionSpec, GraphSpec};
use mpg_solve::{
    solve_discounted, solve_mpg, solve_mpg_truncated, GameValue, SolveResult, SolverConfig,
    TraceVerbosity, WeightOracle,
};
use num::{One, Signed, Zero};

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion(idx: usize, label: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("criterion {idx}: PASS - {label}"),
        Err(why) => {
            println!("criterion {idx}: FAIL - {label}");
            panic!("criterion {idx} failed: {why}");
        }
    }
}

fn mean_payoff_lambda(result: &SolveResult) -> Rat {
    match &result.value {
        GameValue::MeanPayoff { lambda, .. } => lambda.clone(),
        GameValue::Discounted(_) => panic!("expected a mean-payoff value"),
    }
}

fn discounted_value(result: &SolveResult) -> (Rat, Vec<Rat>) {
    match &result.value {
        GameValue::Discounted(dvv) => (dvv.gamma.clone(), dvv.value.clone()),
        GameValue::MeanPayoff { .. } => panic!("expected a discounted value"),
    }
}

/// Largest |v_i - lambda| over the vector, exact.
fn payoff_gap(values: &[Rat], lambda: &Rat) -> Rat {
    values
        .iter()
        .map(|v| (v - lambda).abs())
        .max()
        .expect("nonempty value vector")
}

/// Checks the discounted-to-mean-payoff proximity bound
/// max_i |v_i - lambda| <= 2n(1-gamma)·max|w| with exact arithmetic.
fn within_proximity_bound(g: &Game, gamma: &Rat, values: &[Rat], lambda: &Rat) -> bool {
    let bound = rat(2 * g.n() as i64, 1) * (Rat::one() - gamma) * g.weights().sup_norm();
    payoff_gap(values, lambda) <= bound
}

// ---------------------------------------------------------------------------
// Shared randomized batches.
// ---------------------------------------------------------------------------

const POOL_TRIALS: usize = 500;
const POOL_SEED: u64 = 0x0acc_e501;
const TAIL_TRIALS: usize = 2000;
const TAIL_SEED: u64 = 0x0acc_e506;
const TRUNC_TRIALS: usize = 200;
const TRUNC_SEED: u64 = 0x0acc_e507;

fn bipartite_dist() -> DistributionSpec {
    DistributionSpec::gaussian(0.0, 0.2).expect("valid distribution")
}

fn bipartite_instance(master: u64, trial: u64) -> Game {
    let (graph_seed, weight_seed) = trial_seeds(master, trial);
    let skeleton =
        gen_graph(&GraphSpec::complete_bipartite(3, 3), graph_seed).expect("generator");
    sample_weights(&skeleton, &bipartite_dist(), weight_seed).expect("sampler")
}

struct PoolTrial {
    g: Game,
    pair: PolicyPair,
    lambda: Rat,
    /// Distinct discounts visited by the solve, in phase order.
    gammas: Vec<Rat>,
    total_switches: u64,
    /// Condition number, present exactly when the strict certificate exists.
    delta: Option<Rat>,
    oracle_ok: bool,
}

struct Pool {
    trials: Vec<PoolTrial>,
    wall: Duration,
}

static POOL: OnceLock<Pool> = OnceLock::new();

fn pool() -> &'static Pool {
    POOL.get_or_init(|| {
        let start = Instant::now();
        let trials = (0..POOL_TRIALS as u64)
            .map(|t| {
                let g = bipartite_instance(POOL_SEED, t);
                let result = solve_mpg(&g, &SolverConfig::default()).expect("solver");
                let lambda = mean_payoff_lambda(&result);
                let brute = brute_force_solve(&g).expect("exhaustive oracle");
                let oracle_ok = brute.lambda.iter().all(|l| l == &lambda)
                    && brute.optimal_pairs.contains(&result.pair);
                let delta = match condition_number(&g, &result.pair) {
                    Ok(rep) => Some(rep.delta),
                    Err(CoreError::NotCertified) => None,
                    Err(e) => panic!("condition number failed: {e}"),
                };
                let mut gammas: Vec<Rat> =
                    result.trace.phases.iter().map(|p| p.gamma.clone()).collect();
                gammas.dedup();
                PoolTrial {
                    g,
                    pair: result.pair,
                    lambda,
                    gammas,
                    total_switches: result.trace.total_switches,
                    delta,
                    oracle_ok,
                }
            })
            .collect();
        Pool {
            trials,
            wall: start.elapsed(),
        }
    })
}

struct ConditionedCheck {
    trial: usize,
    gamma: Rat,
    values: Vec<Rat>,
    unique_pair: bool,
}

static CONDITIONED: OnceLock<Vec<ConditionedCheck>> = OnceLock::new();

/// For every certified pool trial, the exhaustive discounted solution at
/// gamma = 1 - 1/(12 n^2 max(1, delta)).
fn conditioned_checks() -> &'static Vec<ConditionedCheck> {
    CONDITIONED.get_or_init(|| {
        pool()
            .trials
            .iter()
            .enumerate()
            .filter_map(|(trial, tr)| {
                let delta = tr.delta.as_ref()?;
                let d = delta.clone().max(Rat::one());
                let n2 = (tr.g.n() * tr.g.n()) as i64;
                let gamma = Rat::one() - Rat::one() / (rat(12 * n2, 1) * d);
                let rep = brute_force_discounted(&tr.g, &gamma).expect("exhaustive oracle");
                let unique_pair =
                    rep.optimal_pairs.len() == 1 && rep.optimal_pairs[0] == tr.pair;
                Some(ConditionedCheck {
                    trial,
                    gamma,
                    values: rep.value,
                    unique_pair,
                })
            })
            .collect()
    })
}

struct TailShared {
    records: Vec<TrialRecord>,
    report: TailReport,
    wall: Duration,
}

static TAIL: OnceLock<TailShared> = OnceLock::new();

fn tail() -> &'static TailShared {
    TAIL.get_or_init(|| {
        pool();
        let cfg = ExperimentConfig {
            graph: GraphSpec::complete_bipartite(3, 3),
            dist: bipartite_dist(),
            trials: TAIL_TRIALS,
            master_seed: TAIL_SEED,
            epsilons: ["0.05", "0.1", "0.25", "0.5"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            delta_override: None,
            gamma_bar: None,
            csv_path: None,
            threads: 0,
        };
        let start = Instant::now();
        let records = run_smoothed_trials(&cfg).expect("trial batch");
        let report = tail_from_records(&cfg, &records).expect("tail table");
        TailShared {
            records,
            report,
            wall: start.elapsed(),
        }
    })
}

struct TruncatedRun {
    n: usize,
    m: usize,
    total_switches: u64,
    delta: Option<Rat>,
    pair_ok: bool,
    lambda_ok: bool,
    lambda_close: bool,
    bits: u64,
    bits_cap: u64,
}

static TRUNCATED: OnceLock<Vec<TruncatedRun>> = OnceLock::new();

fn truncated_runs() -> &'static Vec<TruncatedRun> {
    TRUNCATED.get_or_init(|| {
        pool();
        let cfg = SolverConfig::default();
        (0..TRUNC_TRIALS as u64)
            .map(|t| {
                let g = bipartite_instance(TRUNC_SEED, t);
                let exact = solve_mpg(&g, &cfg).expect("solver");
                let exact_lambda = mean_payoff_lambda(&exact);

                let mut oracle = WeightOracle::new(g.weights());
                let trunc = solve_mpg_truncated(&g, &mut oracle, &cfg).expect("oracle solver");
                let trunc_lambda = mean_payoff_lambda(&trunc);

                let pair_ok = trunc.pair == exact.pair;
                let replay = mean_value_and_bias(&g, &trunc.pair);
                let lambda_ok = replay.lambda.iter().all(|l| l == &exact_lambda);

                let eps_final = trunc
                    .trace
                    .phases
                    .last()
                    .and_then(|p| p.epsilon.clone())
                    .expect("truncated phases carry epsilon");
                let lambda_close = (&trunc_lambda - &exact_lambda).abs() <= eps_final;

                let mut frac_bits: u64 = 0;
                let mut pow = Rat::one();
                while pow > eps_final {
                    pow /= rat(2, 1);
                    frac_bits += 1;
                }
                let bits = trunc.trace.oracle_bits.expect("oracle-model trace");
                let bits_cap = g.m() as u64 * (64 + frac_bits);

                let delta = match condition_number(&g, &trunc.pair) {
                    Ok(rep) => Some(rep.delta),
                    Err(CoreError::NotCertified) => None,
                    Err(e) => panic!("condition number failed: {e}"),
                };
                TruncatedRun {
                    n: g.n(),
                    m: g.m(),
                    total_switches: trunc.trace.total_switches.max(exact.trace.total_switches),
                    delta,
                    pair_ok,
                    lambda_ok,
                    lambda_close,
                    bits,
                    bits_cap,
                }
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------------

fn scan_envelope(x: &Rat) -> Rat {
    let left = x / rat(4, 1);
    let right = Rat::one().max(x / rat(3, 1) - Rat::one());
    left.min(right)
}

#[test]
fn criterion_01_breakpoint_scan_envelope() {
    criterion(1, "non_convex scan reproduces min{x/4, max{1, x/3 - 1}}", || {
        let g = paper_fixture("non_convex", &FixtureParams::default())
            .map_err(|e| format!("fixture: {e}"))?;
        let start = Instant::now();
        let curve = two_player_breakpoint_scan(&g, (0, 1), (rat(0, 1), rat(16, 1)), 10_000)
            .map_err(|e| format!("scan: {e}"))?;
        let elapsed = start.elapsed();

        ensure!(curve.complete, "scan returned an incomplete curve");
        let expected = vec![rat(4, 1), rat(6, 1), rat(12, 1)];
        ensure!(
            curve.breakpoints == expected,
            "breakpoints {:?}, expected {{4, 6, 12}}",
            curve.breakpoints
        );
        for k in 0..100 {
            let x = rat(16 * k, 99);
            let want = scan_envelope(&x);
            let got = curve
                .value_at(&x)
                .ok_or_else(|| format!("no piece covers x = {x}"))?;
            ensure!(got == want, "value at x = {x}: got {got}, want {want}");
        }
        ensure!(
            elapsed < Duration::from_secs(5),
            "scan took {elapsed:?}, budget 5s"
        );
        Ok(())
    });
}

#[test]
fn criterion_02_blackwell_fixture_values() {
    criterion(2, "blackwell fixture: exact value, bias, and discounted family", || {
        let g = paper_fixture("blackwell", &FixtureParams::default())
            .map_err(|e| format!("fixture: {e}"))?;
        let start = Instant::now();

        let result = solve_mpg(&g, &SolverConfig::default()).map_err(|e| format!("solve: {e}"))?;
        let lambda = mean_payoff_lambda(&result);
        ensure!(lambda.is_zero(), "lambda = {lambda}, expected 0");
        let expected_pair = PolicyPair::from_successors(vec![2, 0, 2]);
        ensure!(
            result.pair == expected_pair,
            "pair {:?}, expected successors [2, 0, 2]",
            result.pair
        );

        let bias = blackwell_bias_zero_player(&g, &result.pair);
        let expected_bias = vec![rat(-1, 1), rat(-1, 1), rat(0, 1)];
        ensure!(
            bias.u == expected_bias,
            "bias {:?}, expected (-1, -1, 0)",
            bias.u
        );

        for gamma in [rat(1, 2), rat(3, 4), rat(9, 10)] {
            let res = solve_discounted(&g, &gamma, &SolverConfig::default())
                .map_err(|e| format!("discounted solve at {gamma}: {e}"))?;
            let (got_gamma, values) = discounted_value(&res);
            ensure!(got_gamma == gamma, "value reported at {got_gamma}, not {gamma}");
            let one_minus = Rat::one() - &gamma;
            let expected = vec![-one_minus.clone(), -(&one_minus * &gamma), rat(0, 1)];
            ensure!(
                values == expected,
                "values at gamma {gamma}: {values:?}, expected (-(1-g), -(1-g)g, 0)"
            );
        }

        let elapsed = start.elapsed();
        ensure!(
            elapsed < Duration::from_secs(1),
            "fixture checks took {elapsed:?}, budget 1s"
        );
        Ok(())
    });
}

#[test]
fn criterion_03_solver_matches_exhaustive_oracle() {
    criterion(3, "500 bipartite trials agree with the exhaustive oracle", || {
        let p = pool();
        ensure!(p.trials.len() == POOL_TRIALS, "pool has {} trials", p.trials.len());
        let disagreements = p.trials.iter().filter(|t| !t.oracle_ok).count();
        ensure!(
            disagreements == 0,
            "{disagreements} of {POOL_TRIALS} trials disagree with brute force"
        );
        ensure!(
            p.wall < Duration::from_secs(60),
            "batch took {:?}, budget 60s",
            p.wall
        );
        Ok(())
    });
}

#[test]
fn criterion_04_conditioned_discount_pins_unique_pair() {
    criterion(4, "conditioned discount leaves exactly the certified pair optimal", || {
        let checks = conditioned_checks();
        ensure!(
            !checks.is_empty(),
            "no certified trials in the pool to check"
        );
        let bad = checks.iter().filter(|c| !c.unique_pair).count();
        ensure!(
            bad == 0,
            "{bad} of {} certified trials have a non-unique discounted optimum",
            checks.len()
        );
        Ok(())
    });
}

#[test]
fn criterion_05_discounted_values_near_mean_payoff() {
    criterion(5, "2n(1-gamma)·max|w| proximity holds at every visited discount", || {
        let cfg = SolverConfig::default();
        let mut checked = 0usize;

        let g = paper_fixture("blackwell", &FixtureParams::default())
            .map_err(|e| format!("fixture: {e}"))?;
        let result = solve_mpg(&g, &cfg).map_err(|e| format!("solve: {e}"))?;
        let lambda = mean_payoff_lambda(&result);
        let mut fixture_gammas: Vec<Rat> =
            result.trace.phases.iter().map(|p| p.gamma.clone()).collect();
        for target in [rat(1, 2), rat(3, 4), rat(9, 10)] {
            let res = solve_discounted(&g, &target, &cfg)
                .map_err(|e| format!("discounted solve at {target}: {e}"))?;
            fixture_gammas.extend(res.trace.phases.iter().map(|p| p.gamma.clone()));
            fixture_gammas.push(target);
        }
        fixture_gammas.sort();
        fixture_gammas.dedup();
        for gamma in &fixture_gammas {
            let res = solve_discounted(&g, gamma, &cfg)
                .map_err(|e| format!("discounted solve at {gamma}: {e}"))?;
            let (_, values) = discounted_value(&res);
            ensure!(
                within_proximity_bound(&g, gamma, &values, &lambda),
                "fixture violates the bound at gamma = {gamma}"
            );
            checked += 1;
        }

        for (idx, tr) in pool().trials.iter().enumerate() {
            for gamma in &tr.gammas {
                let res = solve_discounted(&tr.g, gamma, &cfg)
                    .map_err(|e| format!("trial {idx} discounted solve at {gamma}: {e}"))?;
                let (_, values) = discounted_value(&res);
                ensure!(
                    within_proximity_bound(&tr.g, gamma, &values, &tr.lambda),
                    "trial {idx} violates the bound at gamma = {gamma}"
                );
                checked += 1;
            }
        }

        for check in conditioned_checks() {
            let tr = &pool().trials[check.trial];
            ensure!(
                within_proximity_bound(&tr.g, &check.gamma, &check.values, &tr.lambda),
                "trial {} violates the bound at the conditioned discount",
                check.trial
            );
            checked += 1;
        }

        ensure!(checked > POOL_TRIALS, "only {checked} proximity checks ran");
        Ok(())
    });
}

#[test]
fn criterion_06_condition_number_tail() {
    criterion(6, "condition-number tail stays under the one-sided frequency bound", || {
        let t = tail();
        ensure!(
            t.records.len() == TAIL_TRIALS,
            "batch produced {} records",
            t.records.len()
        );
        ensure!(t.report.rows.len() == 4, "{} tail rows", t.report.rows.len());
        for row in &t.report.rows {
            ensure!(
                row.pass,
                "epsilon {}: frequency {:.4} exceeds bound {:.4}",
                row.epsilon,
                row.freq,
                row.bound
            );
        }
        ensure!(
            t.wall < Duration::from_secs(600),
            "tail batch took {:?}, budget 10min",
            t.wall
        );
        Ok(())
    });
}

#[test]
fn criterion_07_truncated_oracle_agreement() {
    criterion(7, "truncated-oracle solves match exact solves within the bit budget", || {
        let runs = truncated_runs();
        ensure!(runs.len() == TRUNC_TRIALS, "{} runs", runs.len());
        for (idx, r) in runs.iter().enumerate() {
            ensure!(r.pair_ok, "run {idx}: pairs differ");
            ensure!(
                r.lambda_ok,
                "run {idx}: returned pair evaluates off the exact value"
            );
            ensure!(
                r.lambda_close,
                "run {idx}: reported value drifts past the final precision"
            );
            ensure!(
                r.bits <= r.bits_cap,
                "run {idx}: {} bits charged, cap {}",
                r.bits,
                r.bits_cap
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_08_scale_shift_invariance() {
    criterion(8, "condition number, pair, and switch sequence survive w -> c·w + a", || {
        let certified: Vec<&PoolTrial> = pool()
            .trials
            .iter()
            .filter(|t| t.delta.is_some())
            .take(100)
            .collect();
        ensure!(
            certified.len() == 100,
            "only {} certified trials available",
            certified.len()
        );

        let cfg = SolverConfig::default().with_verbosity(TraceVerbosity::Switches);
        let shifts = [
            (rat(2, 1), rat(0, 1)),
            (rat(1, 1), rat(5, 1)),
            (rat(3, 1), rat(-7, 1)),
        ];
        for (idx, tr) in certified.iter().enumerate() {
            let base = solve_mpg(&tr.g, &cfg).map_err(|e| format!("base solve {idx}: {e}"))?;
            ensure!(
                base.pair == tr.pair,
                "instance {idx}: re-solve changed the pair"
            );
            let base_delta = tr.delta.as_ref().expect("certified trial");
            for (c, a) in &shifts {
                let shifted =
                    scale_shift_weights(&tr.g, c, a).map_err(|e| format!("shift: {e}"))?;
                let res = solve_mpg(&shifted, &cfg)
                    .map_err(|e| format!("shifted solve {idx} at ({c}, {a}): {e}"))?;
                ensure!(
                    res.pair == base.pair,
                    "instance {idx}, shift ({c}, {a}): pair changed"
                );
                ensure!(
                    res.trace.switches == base.trace.switches,
                    "instance {idx}, shift ({c}, {a}): switch sequence changed"
                );
                let delta = condition_number(&shifted, &res.pair)
                    .map_err(|e| format!("condition number after shift: {e}"))?
                    .delta;
                ensure!(
                    &delta == base_delta,
                    "instance {idx}, shift ({c}, {a}): delta {delta} != {base_delta}"
                );
            }
        }
        Ok(())
    });
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }

    fn rat_in(&mut self, lo: i64, hi: i64, max_den: u64) -> Rat {
        let den = 1 + self.below(max_den) as i64;
        let span = ((hi - lo) * den + 1) as u64;
        rat(lo * den + self.below(span) as i64, den)
    }
}

fn random_one_player(rng: &mut SplitMix, max_n: usize) -> Game {
    let n = 2 + rng.below(max_n as u64 - 1) as usize;
    let mut edges = Vec::new();
    for v in 0..n {
        edges.push(Edge {
            from: v,
            to: (v + 1) % n,
            weight: rng.rat_in(-20, 20, 8),
        });
    }
    for _ in 0..rng.below(2 * n as u64 + 1) {
        let from = rng.below(n as u64) as usize;
        let to = rng.below(n as u64) as usize;
        if edges.iter().any(|e| e.from == from && e.to == to) {
            continue;
        }
        edges.push(Edge {
            from,
            to,
            weight: rng.rat_in(-20, 20, 8),
        });
    }
    Game::new(vec![Player::Min; n], edges)
}

#[test]
fn criterion_09_one_player_oracles() {
    criterion(9, "Karp equals cycle enumeration; envelopes concave with <= n breakpoints", || {
        let mut rng = SplitMix(0x0acc_e509);
        for case in 0..200 {
            let g = random_one_player(&mut rng, 8);
            let karp = karp_min_mean_cycle(&g).map_err(|e| format!("case {case}: karp: {e}"))?;
            let cycles =
                enumerate_simple_cycles(&g).map_err(|e| format!("case {case}: cycles: {e}"))?;
            let best = cycles
                .iter()
                .map(|c| cycle_mean(&g, c))
                .min()
                .ok_or_else(|| format!("case {case}: no cycles found"))?;
            ensure!(
                karp.lambda == best,
                "case {case}: karp {} != enumerated minimum {best}",
                karp.lambda
            );

            for e in g.edges() {
                let (curve, _) = one_player_breakpoints(&g, (e.from, e.to))
                    .map_err(|err| format!("case {case}: envelope ({}, {}): {err}", e.from, e.to))?;
                ensure!(
                    curve.is_concave(),
                    "case {case}: envelope for ({}, {}) is not concave",
                    e.from,
                    e.to
                );
                ensure!(
                    curve.breakpoints.len() <= g.n(),
                    "case {case}: envelope for ({}, {}) has {} breakpoints, n = {}",
                    e.from,
                    e.to,
                    curve.breakpoints.len(),
                    g.n()
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_zero_player_numerics() {
    criterion(10, "fixed-policy values: exact residual 0, value iteration within 1e-9", || {
        let mut rng = SplitMix(0x0acc_e510);
        let gammas = [rat(1, 2), rat(15, 16)];
        for case in 0..200 {
            let n = 3 + rng.below(8) as usize;
            let succs: Vec<usize> = (0..n).map(|_| rng.below(n as u64) as usize).collect();
            let edges: Vec<Edge> = succs
                .iter()
                .enumerate()
                .map(|(v, &to)| Edge {
                    from: v,
                    to,
                    weight: rng.rat_in(-20, 20, 8),
                })
                .collect();
            let owners = (0..n)
                .map(|v| if v % 2 == 0 { Player::Max } else { Player::Min })
                .collect();
            let g = Game::new(owners, edges);
            let pair = PolicyPair::from_successors(succs);

            for gamma in &gammas {
                let dvv = discounted_value_zero_player(&g, &pair, gamma)
                    .map_err(|e| format!("case {case}: {e}"))?;
                let f = FunctionalGraph::from_policies(&g, &pair);
                let residual = discounted_residual(&f, &dvv);
                ensure!(
                    residual.is_zero(),
                    "case {case}: residual {residual} at gamma {gamma}"
                );

                let approx = value_iteration_discounted(&g, gamma, 1e-10)
                    .map_err(|e| format!("case {case}: value iteration: {e}"))?;
                for (v, x) in approx.iter().enumerate() {
                    let gap = (x - rat_to_f64(&dvv.value[v])).abs();
                    let close = gap <= 1e-9;
                    ensure!(
                        close,
                        "case {case}: vertex {v} off by {gap:e} at gamma {gamma}"
                    );
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_11_switch_counts_under_safety_cap() {
    criterion(11, "no randomized trial reaches 50n^4m^2D^2(log2(nD)+1)^3 switches", || {
        let mut rows: Vec<(usize, usize, u64, Option<&Rat>)> = Vec::new();
        for tr in &pool().trials {
            rows.push((tr.g.n(), tr.g.m(), tr.total_switches, tr.delta.as_ref()));
        }
        for r in &tail().records {
            rows.push((r.n, r.m, r.total_switches, r.delta.as_ref()));
        }
        for r in truncated_runs() {
            rows.push((r.n, r.m, r.total_switches, r.delta.as_ref()));
        }

        let mut capped = 0usize;
        for (idx, (n, m, switches, delta)) in rows.iter().enumerate() {
            let Some(cap) = switch_cap(*n, *m, *delta) else {
                continue;
            };
            let under = (*switches as f64) < cap;
            ensure!(
                under,
                "row {idx}: {switches} switches reaches the cap {cap}"
            );
            capped += 1;
        }
        ensure!(capped > 0, "no certified trials to check against the cap");
        Ok(())
    });
}
