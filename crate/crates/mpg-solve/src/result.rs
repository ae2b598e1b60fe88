use mpg_core::{ConeCertificate, DiscountedValueVector, PolicyPair, Rat};

use crate::trace::SolverTrace;

/// What the solver computed: a mean-payoff value with its bias, or the
/// discounted value vector at the target discount.
#[derive(Debug, Clone, PartialEq)]
pub enum GameValue {
    MeanPayoff { lambda: Rat, u: Vec<Rat> },
    Discounted(DiscountedValueVector),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub pair: PolicyPair,
    pub value: GameValue,
    pub trace: SolverTrace,
    /// Strict-cone certificate of the returned pair, when it holds.
    pub certificate: Option<ConeCertificate>,
}

impl SolveResult {
    /// Mean-payoff view: (lambda, bias).
    pub fn mean_payoff(&self) -> Option<(&Rat, &[Rat])> {
        match &self.value {
            GameValue::MeanPayoff { lambda, u } => Some((lambda, u)),
            GameValue::Discounted(_) => None,
        }
    }

    pub fn discounted(&self) -> Option<&DiscountedValueVector> {
        match &self.value {
            GameValue::MeanPayoff { .. } => None,
            GameValue::Discounted(v) => Some(v),
        }
    }
}
