//! Solver configuration: initial pair, budgets, arithmetic mode, and trace
//! verbosity.

use mpg_core::PolicyPair;

/// Exact rational arithmetic, or floating point with a residual tolerance
/// for throughput experiments. Equality tests (switch decisions, halting
/// checks) use the tolerance in float mode; exact mode compares rationals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithmeticMode {
    Exact,
    Float { tolerance: f64 },
}

impl ArithmeticMode {
    /// Float mode with the default 1e-9 residual tolerance.
    pub fn float_default() -> ArithmeticMode {
        ArithmeticMode::Float { tolerance: 1e-9 }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ArithmeticMode::Exact)
    }
}

/// How much of the run the trace records. `Counters` keeps totals only;
/// `Phases` adds one record per discount update including the value vector;
/// `Switches` additionally records every switching step with the vertices
/// that moved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceVerbosity {
    Counters,
    Phases,
    Switches,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Starting policies; defaults to the lowest-index successor everywhere.
    pub initial: Option<PolicyPair>,
    /// Budget for discount (and oracle-precision) updates.
    pub max_gamma_updates: u64,
    /// Override for the per-discount switch cap; `None` derives the cap
    /// from the iteration bound 50 (m/(1-gamma))^2 (log2(1/(1-gamma))+1)^2.
    pub max_switches: Option<u64>,
    pub mode: ArithmeticMode,
    pub verbosity: TraceVerbosity,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            initial: None,
            max_gamma_updates: 256,
            max_switches: None,
            mode: ArithmeticMode::Exact,
            verbosity: TraceVerbosity::Phases,
        }
    }
}

impl SolverConfig {
    pub fn with_initial(mut self, pair: PolicyPair) -> SolverConfig {
        self.initial = Some(pair);
        self
    }

    pub fn with_mode(mut self, mode: ArithmeticMode) -> SolverConfig {
        self.mode = mode;
        self
    }

    pub fn with_verbosity(mut self, verbosity: TraceVerbosity) -> SolverConfig {
        self.verbosity = verbosity;
        self
    }

    pub fn with_max_gamma_updates(mut self, budget: u64) -> SolverConfig {
        assert!(budget > 0, "budgets must be positive");
        self.max_gamma_updates = budget;
        self
    }

    pub fn with_max_switches(mut self, cap: u64) -> SolverConfig {
        assert!(cap > 0, "caps must be positive");
        self.max_switches = Some(cap);
        self
    }
}

/// Switch cap for one discounted solve, from the iteration bound with an
/// explicit constant: 50 (m/(1-gamma))^2 (log2(1/(1-gamma))+1)^2. Saturates
/// to u64::MAX when the float blows up.
pub(crate) fn derived_switch_cap(m: usize, one_minus_gamma: f64) -> u64 {
    let ratio = m as f64 / one_minus_gamma;
    let log_term = (1.0 / one_minus_gamma).log2() + 1.0;
    let cap = 50.0 * ratio * ratio * log_term * log_term;
    if cap.is_finite() && cap < u64::MAX as f64 {
        cap.ceil() as u64
    } else {
        u64::MAX
    }
}
