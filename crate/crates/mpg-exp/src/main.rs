//! `mpg`: command-line front end over the solver, oracle, generator, and
//! experiment crates. Exit codes: 0 success, 1 verification failure,
//! 2 usage error, 3 budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use mpg_core::{
    check_ergodic_equation, cone_membership, discounted_value_zero_player, load_game,
    mean_value_and_bias, paper_fixture, rat_from_str, rat_to_string, save_game, ErgodicSolution,
    FixtureParams, Game, PolicyPair, Rat,
};
use mpg_exp::{
    condition_tail_report, run_smoothed_trials, tail_to_csv, trials_to_csv, ExpError,
    ExperimentConfig,
};
use mpg_oracle::{curve_to_csv, two_player_breakpoint_scan, BreakpointCurve, OracleError};
use mpg_solve::{
    solve_discounted, solve_discounted_truncated, solve_mpg, solve_mpg_truncated, ArithmeticMode,
    GameValue, SolveResult, SolverConfig, WeightOracle,
};
use num::{One, Zero};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "mpg",
    version,
    about = "Mean-payoff and discounted game experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate one weighted instance from an experiment config.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Write the game JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a game file and emit a result JSON.
    Solve {
        game: PathBuf,
        /// Solve the discounted game at this target discount (rational).
        #[arg(long)]
        discounted: Option<String>,
        /// See the weights only through the truncation oracle.
        #[arg(long)]
        oracle_model: bool,
        /// Floating-point arithmetic with the default tolerance.
        #[arg(long)]
        float: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the solver trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a claimed result against the game; exit 1 on mismatch.
    Verify { game: PathBuf, result: PathBuf },
    /// Run a smoothed-trial batch and write the trial CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the value of one edge weight over an interval.
    Scan {
        /// Fixture name; exclusive with --game.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        game: Option<PathBuf>,
        /// Fixture parameter x (rational), for fixtures that take one.
        #[arg(long)]
        x: Option<String>,
        /// Fixture parameter n, for the scalable fixture family.
        #[arg(long)]
        n: Option<usize>,
        /// Scanned edge as 1-based "from,to".
        #[arg(long)]
        edge: String,
        /// Interval as "lo,hi" (rationals). Equal endpoints: empty scan.
        #[arg(long)]
        range: String,
        /// Exact solves the scan may spend.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Condition-number tail table for a config.
    Tail {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                3
            } else {
                2
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, ExpError> {
    match cli.cmd {
        Cmd::Gen { config, out } => gen_cmd(&config, out.as_deref()),
        Cmd::Solve {
            game,
            discounted,
            oracle_model,
            float,
            out,
            trace,
        } => solve_cmd(
            &game,
            discounted.as_deref(),
            oracle_model,
            float,
            out.as_deref(),
            trace.as_deref(),
        ),
        Cmd::Verify { game, result } => verify_cmd(&game, &result),
        Cmd::Bench { config, out } => bench_cmd(&config, out.as_deref()),
        Cmd::Scan {
            fixture,
            game,
            x,
            n,
            edge,
            range,
            budget,
            out,
        } => scan_cmd(
            fixture.as_deref(),
            game.as_deref(),
            x.as_deref(),
            n,
            &edge,
            &range,
            budget,
            out.as_deref(),
        ),
        Cmd::Tail { config, out } => tail_cmd(&config, out.as_deref()),
    }
}

fn bad(msg: impl Into<String>) -> ExpError {
    ExpError::BadConfig(msg.into())
}

fn load_config(path: &Path) -> Result<ExperimentConfig, ExpError> {
    let text = fs::read_to_string(path)?;
    let mut cfg: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    if let Ok(seed) = std::env::var("MPG_SEED") {
        cfg.master_seed = seed
            .parse()
            .map_err(|_| bad(format!("MPG_SEED `{seed}` is not a u64")))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), ExpError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_rat_arg(s: &str, what: &str) -> Result<Rat, ExpError> {
    rat_from_str(s).ok_or_else(|| bad(format!("{what} `{s}` is not a rational literal")))
}

fn gen_cmd(config: &Path, out: Option<&Path>) -> Result<i32, ExpError> {
    let cfg = load_config(config)?;
    let (graph_seed, weight_seed) = mpg_exp::trial_seeds(cfg.master_seed, 0);
    let skeleton = mpg_rand::gen_graph(&cfg.graph, graph_seed)?;
    let g = mpg_rand::sample_weights(&skeleton, &cfg.dist, weight_seed)?;
    emit(out, &save_game(&g))?;
    Ok(0)
}

fn pair_json(pair: &PolicyPair) -> Value {
    Value::Array(
        pair.successors()
            .iter()
            .map(|s| Value::from(*s as u64 + 1))
            .collect(),
    )
}

fn rats_json(rats: &[Rat]) -> Value {
    Value::Array(rats.iter().map(|r| Value::from(rat_to_string(r))).collect())
}

fn result_json(result: &SolveResult) -> Value {
    let mut obj = json!({
        "pair": pair_json(&result.pair),
        "certified": result
            .certificate
            .as_ref()
            .map(|c| c.inside_strict)
            .unwrap_or(false),
        "total_switches": result.trace.total_switches,
        "gamma_updates": result.trace.gamma_updates,
        "oracle_bits": result.trace.oracle_bits,
    });
    let extra = match &result.value {
        GameValue::MeanPayoff { lambda, u } => json!({
            "kind": "mean_payoff",
            "lambda": rat_to_string(lambda),
            "u": rats_json(u),
        }),
        GameValue::Discounted(dvv) => json!({
            "kind": "discounted",
            "gamma": rat_to_string(&dvv.gamma),
            "values": rats_json(&dvv.value),
        }),
    };
    obj.as_object_mut()
        .expect("object literal")
        .extend(extra.as_object().expect("object literal").clone());
    obj
}

/// Truncated-oracle solvers report values under the last truncated weights,
/// which `verify` would reject against the exact game. The CLI holds the
/// exact weights, so it re-evaluates the returned pair on them.
fn rescore_exact(g: &Game, mut result: SolveResult) -> SolveResult {
    match &result.value {
        GameValue::MeanPayoff { .. } => {
            let sol = mean_value_and_bias(g, &result.pair);
            if sol.constant_value {
                result.value = GameValue::MeanPayoff {
                    lambda: sol.lambda[0].clone(),
                    u: sol.u,
                };
                result.certificate = cone_membership(g, &result.pair)
                    .ok()
                    .filter(|c| c.inside_strict);
            }
        }
        GameValue::Discounted(dvv) => {
            if let Ok(exact) = discounted_value_zero_player(g, &result.pair, &dvv.gamma) {
                result.value = GameValue::Discounted(exact);
            }
        }
    }
    result
}

fn solve_cmd(
    game: &Path,
    discounted: Option<&str>,
    oracle_model: bool,
    float: bool,
    out: Option<&Path>,
    trace: Option<&Path>,
) -> Result<i32, ExpError> {
    if oracle_model && float {
        return Err(bad("--oracle-model runs exact; drop --float"));
    }
    let g = load_game(&fs::read_to_string(game)?)?;
    let gamma_bar = discounted
        .map(|s| parse_rat_arg(s, "discount"))
        .transpose()?;
    let mut config = SolverConfig::default();
    if float {
        config = config.with_mode(ArithmeticMode::float_default());
    }

    let result = match (gamma_bar, oracle_model) {
        (None, false) => solve_mpg(&g, &config)?,
        (Some(gb), false) => solve_discounted(&g, &gb, &config)?,
        (None, true) => {
            let mut oracle = WeightOracle::new(g.weights());
            rescore_exact(&g, solve_mpg_truncated(&g, &mut oracle, &config)?)
        }
        (Some(gb), true) => {
            let mut oracle = WeightOracle::new(g.weights());
            rescore_exact(&g, solve_discounted_truncated(&g, &mut oracle, &gb, &config)?)
        }
    };

    if let Some(path) = trace {
        fs::write(path, result.trace.to_json_lines())?;
    }
    let mut text = result_json(&result).to_string();
    text.push('\n');
    emit(out, &text)?;
    Ok(0)
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, ExpError> {
    v.get(key).ok_or_else(|| bad(format!("result lacks `{key}`")))
}

fn rat_field(v: &Value, key: &str) -> Result<Rat, ExpError> {
    let s = field(v, key)?
        .as_str()
        .ok_or_else(|| bad(format!("`{key}` must be a string")))?;
    parse_rat_arg(s, key)
}

fn rats_field(v: &Value, key: &str, n: usize) -> Result<Vec<Rat>, ExpError> {
    let arr = field(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("`{key}` must be an array")))?;
    if arr.len() != n {
        return Err(bad(format!("`{key}` must have {n} entries")));
    }
    arr.iter()
        .map(|e| {
            e.as_str()
                .and_then(rat_from_str)
                .ok_or_else(|| bad(format!("`{key}` entries must be rational strings")))
        })
        .collect()
}

fn pair_field(v: &Value, g: &Game) -> Result<PolicyPair, ExpError> {
    let arr = field(v, "pair")?
        .as_array()
        .ok_or_else(|| bad("`pair` must be an array"))?;
    if arr.len() != g.n() {
        return Err(bad(format!("`pair` must have {} entries", g.n())));
    }
    let succ = arr
        .iter()
        .map(|e| {
            e.as_u64()
                .and_then(|s| (s as usize).checked_sub(1))
                .ok_or_else(|| bad("`pair` entries must be 1-based vertex numbers"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolicyPair::from_successors(succ))
}

fn fail(reason: &str) -> Result<i32, ExpError> {
    println!("FAIL: {reason}");
    Ok(1)
}

fn verify_cmd(game: &Path, result: &Path) -> Result<i32, ExpError> {
    let g = load_game(&fs::read_to_string(game)?)?;
    let claimed: Value = serde_json::from_str(&fs::read_to_string(result)?)
        .map_err(|e| bad(format!("{}: {e}", result.display())))?;
    let pair = pair_field(&claimed, &g)?;
    if !pair.is_valid(&g) {
        return fail("claimed pair uses a missing edge");
    }
    let kind = field(&claimed, "kind")?
        .as_str()
        .ok_or_else(|| bad("`kind` must be a string"))?;

    match kind {
        "mean_payoff" => {
            let lambda = rat_field(&claimed, "lambda")?;
            let u = rats_field(&claimed, "u", g.n())?;
            let report = check_ergodic_equation(&g, &ErgodicSolution { lambda: lambda.clone(), u: u.clone() });
            if !report.solves {
                return fail("claimed (lambda, u) does not solve the ergodic equation");
            }
            for v in 0..g.n() {
                let to = pair.successor(v);
                let e = g.edge(pair.edge_at(&g, v));
                if &e.weight + &u[to] != &lambda + &u[v] {
                    return fail("claimed pair does not attain the ergodic optimum");
                }
            }
        }
        "discounted" => {
            let gamma = rat_field(&claimed, "gamma")?;
            if gamma <= Rat::zero() || gamma >= Rat::one() {
                return Err(bad(format!("discount {gamma} out of range")));
            }
            let values = rats_field(&claimed, "values", g.n())?;
            let one_minus = Rat::one() - &gamma;
            for v in 0..g.n() {
                let step = |e: usize| {
                    let edge = g.edge(e);
                    &one_minus * &edge.weight + &gamma * &values[edge.to]
                };
                let candidates = g.out_edges(v).iter().map(|&e| step(e));
                let best = match g.owner(v) {
                    mpg_core::Player::Max => candidates.max(),
                    mpg_core::Player::Min => candidates.min(),
                }
                .expect("validated games have no sinks");
                if values[v] != best {
                    return fail("claimed values are not the one-step optimum");
                }
                if step(pair.edge_at(&g, v)) != best {
                    return fail("claimed pair does not attain the one-step optimum");
                }
            }
        }
        other => return Err(bad(format!("unknown result kind `{other}`"))),
    }
    println!("OK");
    Ok(0)
}

fn bench_cmd(config: &Path, out: Option<&Path>) -> Result<i32, ExpError> {
    let cfg = load_config(config)?;
    let records = run_smoothed_trials(&cfg)?;
    let csv = trials_to_csv(&records);
    match out.or(cfg.csv_path.as_deref()) {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn parse_edge(arg: &str) -> Result<(usize, usize), ExpError> {
    let (a, b) = arg
        .split_once(',')
        .ok_or_else(|| bad("--edge wants `from,to`"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .ok()
            .and_then(|v| v.checked_sub(1))
            .ok_or_else(|| bad(format!("edge vertex `{s}` must be a 1-based integer")))
    };
    Ok((parse(a)?, parse(b)?))
}

#[allow(clippy::too_many_arguments)]
fn scan_cmd(
    fixture: Option<&str>,
    game: Option<&Path>,
    x: Option<&str>,
    n: Option<usize>,
    edge: &str,
    range: &str,
    budget: u64,
    out: Option<&Path>,
) -> Result<i32, ExpError> {
    let g = match (fixture, game) {
        (Some(name), None) => {
            let params = FixtureParams {
                x: x.map(|s| parse_rat_arg(s, "x")).transpose()?,
                n,
                ..FixtureParams::default()
            };
            paper_fixture(name, &params)?
        }
        (None, Some(path)) => load_game(&fs::read_to_string(path)?)?,
        _ => return Err(bad("pass exactly one of --fixture and --game")),
    };
    let edge = parse_edge(edge)?;
    let (lo_s, hi_s) = range
        .split_once(',')
        .ok_or_else(|| bad("--range wants `lo,hi`"))?;
    let lo = parse_rat_arg(lo_s.trim(), "range low")?;
    let hi = parse_rat_arg(hi_s.trim(), "range high")?;

    if lo == hi {
        let empty = BreakpointCurve {
            pieces: vec![],
            breakpoints: vec![],
            complete: true,
        };
        emit(out, &curve_to_csv(&empty))?;
        return Ok(0);
    }

    match two_player_breakpoint_scan(&g, edge, (lo, hi), budget) {
        Ok(curve) => {
            emit(out, &curve_to_csv(&curve))?;
            Ok(0)
        }
        Err(OracleError::BudgetExhausted { partial }) => {
            emit(out, &curve_to_csv(&partial))?;
            eprintln!("scan budget exhausted; wrote the certified prefix");
            Ok(3)
        }
        Err(other) => Err(other.into()),
    }
}

fn tail_cmd(config: &Path, out: Option<&Path>) -> Result<i32, ExpError> {
    let cfg = load_config(config)?;
    let report = condition_tail_report(&cfg)?;
    emit(out, &tail_to_csv(&report))?;
    Ok(if report.all_pass() { 0 } else { 1 })
}
