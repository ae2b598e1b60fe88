//! Run traces: per-discount phase records, per-switch records, totals, and
//! JSON-lines export.

use mpg_core::{rat_to_string, Player, Rat};
use serde_json::json;

/// Why the solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    /// Mean-payoff halting test: (lambda, u) solves the ergodic equation.
    ErgodicSolved,
    /// Discounted halting test: no switch at the target discount.
    FixedAtTarget,
    /// A budget ran out; the result carries the partial trace.
    CapHit,
}

impl HaltReason {
    fn label(self) -> &'static str {
        match self {
            HaltReason::ErgodicSolved => "ergodic_solved",
            HaltReason::FixedAtTarget => "fixed_at_target",
            HaltReason::CapHit => "cap_hit",
        }
    }
}

/// One discount (or discount + precision) update.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    /// 1-based update counter.
    pub phase: u64,
    pub gamma: Rat,
    /// Oracle precision, in the truncated solvers.
    pub epsilon: Option<Rat>,
    /// Whether the pair after policy iteration induced a single cycle;
    /// `None` where no such guard runs.
    pub in_xi: Option<bool>,
    /// The zero-player value was not constant when the halting check ran.
    pub nonconstant_value: bool,
    pub max_switches: u64,
    pub min_switches: u64,
    /// Inner (best-response) loop iterations of the policy iteration call.
    pub inner_loops: u64,
    /// Outer (Min-improvement) loop iterations.
    pub outer_loops: u64,
    /// Discounted values of the pair at the end of the phase (exact mode,
    /// verbosity >= Phases).
    pub values: Option<Vec<Rat>>,
}

/// One switching step that changed at least one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchRecord {
    pub phase: u64,
    pub player: Player,
    /// Vertices reassigned in this step, with their new successors.
    pub moves: Vec<(usize, usize)>,
    /// Total vertex switches after this step.
    pub cumulative: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub phases: Vec<PhaseRecord>,
    pub switches: Vec<SwitchRecord>,
    pub total_switches: u64,
    pub total_max_switches: u64,
    pub total_min_switches: u64,
    pub gamma_updates: u64,
    /// Oracle bits charged by the end of the run (truncated solvers).
    pub oracle_bits: Option<u64>,
    /// `None` while a run is in progress.
    pub halt: Option<HaltReason>,
    pub float_mode: bool,
}

impl SolverTrace {
    pub fn new(float_mode: bool) -> SolverTrace {
        SolverTrace {
            phases: Vec::new(),
            switches: Vec::new(),
            total_switches: 0,
            total_max_switches: 0,
            total_min_switches: 0,
            gamma_updates: 0,
            oracle_bits: None,
            halt: None,
            float_mode,
        }
    }

    /// One JSON object per line: each switch record, then each phase
    /// record, then a summary line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.switches {
            let line = json!({
                "type": "switch",
                "phase": s.phase,
                "player": match s.player { Player::Max => "max", Player::Min => "min" },
                "moves": s.moves.iter().map(|&(v, t)| json!([v, t])).collect::<Vec<_>>(),
                "cumulative": s.cumulative,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        for p in &self.phases {
            let line = json!({
                "type": "phase",
                "phase": p.phase,
                "gamma": rat_to_string(&p.gamma),
                "epsilon": p.epsilon.as_ref().map(rat_to_string),
                "in_xi": p.in_xi,
                "nonconstant_value": p.nonconstant_value,
                "max_switches": p.max_switches,
                "min_switches": p.min_switches,
                "inner_loops": p.inner_loops,
                "outer_loops": p.outer_loops,
                "values": p.values.as_ref().map(|vs| {
                    vs.iter().map(rat_to_string).collect::<Vec<_>>()
                }),
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        let summary = json!({
            "type": "summary",
            "total_switches": self.total_switches,
            "max_switches": self.total_max_switches,
            "min_switches": self.total_min_switches,
            "gamma_updates": self.gamma_updates,
            "oracle_bits": self.oracle_bits,
            "halt": self.halt.map(HaltReason::label),
            "float_mode": self.float_mode,
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}
