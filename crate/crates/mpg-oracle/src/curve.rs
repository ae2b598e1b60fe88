//! Piecewise-affine value curves in a single edge weight, with CSV export.

use mpg_core::{rat_to_string, Rat};

/// One affine piece of a value curve. `None` endpoints mark pieces that
/// extend to the corresponding infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub x_left: Option<Rat>,
    pub x_right: Option<Rat>,
    pub slope: Rat,
    pub intercept: Rat,
    /// A cycle achieving the value on this piece.
    pub witness_cycle: Vec<usize>,
}

impl Piece {
    pub fn value_at(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    fn covers(&self, x: &Rat) -> bool {
        self.x_left.as_ref().is_none_or(|l| l <= x)
            && self.x_right.as_ref().is_none_or(|r| x <= r)
    }
}

/// A value curve as contiguous affine pieces with sorted breakpoints.
/// `complete` is false when a scan ran out of budget and left gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointCurve {
    pub pieces: Vec<Piece>,
    pub breakpoints: Vec<Rat>,
    pub complete: bool,
}

impl BreakpointCurve {
    /// Evaluates the curve where a piece covers `x`.
    pub fn value_at(&self, x: &Rat) -> Option<Rat> {
        self.pieces
            .iter()
            .find(|p| p.covers(x))
            .map(|p| p.value_at(x))
    }

    /// True when slopes never increase from left to right.
    pub fn is_concave(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].slope >= w[1].slope)
    }
}

fn endpoint(value: &Option<Rat>, unbounded: &str) -> String {
    match value {
        Some(x) => rat_to_string(x),
        None => unbounded.to_string(),
    }
}

/// Renders the curve as CSV with columns x_left, x_right, slope, intercept.
/// Unbounded endpoints become "-inf" / "inf".
pub fn curve_to_csv(curve: &BreakpointCurve) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x_left", "x_right", "slope", "intercept"])
        .expect("writing to memory cannot fail");
    for p in &curve.pieces {
        w.write_record([
            endpoint(&p.x_left, "-inf"),
            endpoint(&p.x_right, "inf"),
            rat_to_string(&p.slope),
            rat_to_string(&p.intercept),
        ])
        .expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flushing a memory writer cannot fail"))
        .expect("CSV output is ASCII")
}
