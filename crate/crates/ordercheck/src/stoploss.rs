//! Stop-loss transforms and the exact decision procedure for the
//! increasing convex (stop-loss) order.
//!
//! For a multiset `A` of nonnegative values the stop-loss transform is
//! `π_A(t) = Σ_{a∈A} (a − t)₊`, a convex, nonincreasing, piecewise-linear
//! function on `[0, ∞)` that vanishes beyond the largest entry. `A`
//! dominates `B` in the stop-loss order when `π_A(t) ≥ π_B(t)` for every
//! `t ≥ 0`.
//!
//! Because `π_A − π_B` is piecewise linear with knots among the entries of
//! `A` and `B` and is identically zero beyond the largest of them, it is
//! nonnegative on all of `[0, ∞)` iff it is nonnegative at `t = 0` and at
//! every knot. [`dominates`] checks exactly those finitely many points.
//!
//! In approximate mode the pointwise comparison gets the policy slack
//! computed at the pair scale `π_A(0) + π_B(0)`. Using one fixed slack for
//! the whole comparison keeps the knot check equivalent to the
//! all-of-`[0,∞)` check (a piecewise-linear function stays above a constant
//! bound on a segment iff it does so at the endpoints).

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Scalar, ScalarPolicy};
use crate::sequence::NonnegMultiset;

#[derive(Debug, Error, PartialEq)]
pub enum StopLossError {
    #[error("stop-loss transform is only defined for t >= 0 (got {t})")]
    NegativeThreshold { t: String },
}

/// Piecewise-linear representation of `t ↦ Σ (a − t)₊`.
///
/// `knots` are the distinct positive entry values; segment `i` spans
/// `(knots[i−1], knots[i])` (segment 0 starts at 0, the last segment is
/// unbounded) and carries integer slope `−#{a : a ≥ knots[i]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StopLossCurve {
    knots: Vec<Scalar>,
    knot_values: Vec<Scalar>,
    segment_slopes: Vec<i64>,
    mass_at_zero: Scalar,
    cardinality: usize,
}

impl StopLossCurve {
    pub fn from_multiset(m: &NonnegMultiset) -> Self {
        let mass_at_zero = m.total();
        let positives: Vec<&Scalar> = m.iter().filter(|e| e.is_positive()).collect();

        let mut knots: Vec<Scalar> = Vec::new();
        for e in &positives {
            if knots.last() != Some(*e) {
                knots.push((*e).clone());
            }
        }

        // Values at knots are computed directly from the entries rather than
        // by telescoping, so the final knot value is an exact zero in both
        // arithmetic modes.
        let knot_values: Vec<Scalar> = knots
            .iter()
            .map(|k| {
                positives
                    .iter()
                    .filter(|e| *e > k)
                    .map(|e| *e - k)
                    .sum::<Scalar>()
            })
            .collect();

        let mut segment_slopes = Vec::with_capacity(knots.len() + 1);
        for k in &knots {
            let above_or_at = positives.iter().filter(|e| *e >= k).count() as i64;
            segment_slopes.push(-above_or_at);
        }
        segment_slopes.push(0);

        StopLossCurve {
            knots,
            knot_values,
            segment_slopes,
            mass_at_zero,
            cardinality: m.len(),
        }
    }

    /// `π(t)`, exact when the multiset and `t` are exact.
    pub fn eval(&self, t: &Scalar) -> Result<Scalar, StopLossError> {
        if t.is_negative() {
            return Err(StopLossError::NegativeThreshold { t: t.to_string() });
        }
        let idx = self.knots.partition_point(|k| k <= t);
        if idx == 0 {
            let slope = Scalar::from_int(self.segment_slopes[0]);
            return Ok(&self.mass_at_zero + slope * t);
        }
        let base = idx - 1;
        if idx == self.knots.len() {
            // Beyond the largest entry the transform is identically zero;
            // the last knot value is an exact zero by construction.
            return Ok(self.knot_values[base].clone());
        }
        let slope = Scalar::from_int(self.segment_slopes[idx]);
        Ok(&self.knot_values[base] + slope * (t - &self.knots[base]))
    }

    pub fn knots(&self) -> &[Scalar] {
        &self.knots
    }

    pub fn mass_at_zero(&self) -> &Scalar {
        &self.mass_at_zero
    }

    pub fn max_knot(&self) -> Option<&Scalar> {
        self.knots.last()
    }

    /// Slopes per segment, `segment 0` starting at `t = 0`; always
    /// nondecreasing integers in `{−r, …, −1, 0}`.
    pub fn segment_slopes(&self) -> &[i64] {
        &self.segment_slopes
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }
}

/// Margin of `π_A − π_B` at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginPoint {
    pub t: Scalar,
    pub margin: Scalar,
}

/// Outcome of a stop-loss order comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderWitness {
    pub dominates: bool,
    /// Smallest violating checkpoint when `dominates` is false; always
    /// `0` or a knot of one of the two curves.
    pub violating_t: Option<Scalar>,
    /// `(t, π_A(t) − π_B(t))` at `t = 0` and every knot of either curve.
    pub margin_at_knots: Vec<MarginPoint>,
}

/// Decide whether `a` dominates `b` in the stop-loss order, checking
/// `t = 0` and every knot of either transform. Ties count as dominance.
pub fn dominates(a: &NonnegMultiset, b: &NonnegMultiset, policy: &ScalarPolicy) -> OrderWitness {
    let curve_a = StopLossCurve::from_multiset(a);
    let curve_b = StopLossCurve::from_multiset(b);

    let mut checkpoints: Vec<Scalar> = Vec::with_capacity(2 + a.len() + b.len());
    checkpoints.push(Scalar::zero());
    checkpoints.extend(curve_a.knots().iter().cloned());
    checkpoints.extend(curve_b.knots().iter().cloned());
    checkpoints.sort();
    checkpoints.dedup();

    let scale = curve_a.mass_at_zero() + curve_b.mass_at_zero();

    let mut margin_at_knots = Vec::with_capacity(checkpoints.len());
    let mut violating_t = None;
    for t in checkpoints {
        let margin = curve_a.eval(&t).expect("checkpoints are nonnegative")
            - curve_b.eval(&t).expect("checkpoints are nonnegative");
        if violating_t.is_none() && !policy.certify_nonneg(&margin, &scale) {
            violating_t = Some(t.clone());
        }
        margin_at_knots.push(MarginPoint { t, margin });
    }

    OrderWitness {
        dominates: violating_t.is_none(),
        violating_t,
        margin_at_knots,
    }
}
