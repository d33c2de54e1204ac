//! Integral form: discretizing an increasing function on `[0, 1]` and
//! evaluating `∫₀¹ φ(x·f(x)) dx` by right-endpoint Riemann sums.
//!
//! For an increasing `f` and sample mean `m_n = (1/n) Σ f(k/n)`, the
//! vector `α_k = (f(k/n) − m_n)/n` is sorted and sums to zero exactly, and
//! `k·α_k = (k/n)(f(k/n) − m_n)`. So every row of a convergence study is an
//! instance of the main inequality — nonnegativity holds at every finite
//! `n`, no limit argument required. The study reports the Riemann sums and
//! sample means alongside so empirical convergence is visible.
//!
//! Step functions are the exact-arithmetic path: breakpoints and levels are
//! rationals, samples at `k/n` are exact, and a step function is constant
//! on left-open intervals `(b_{i−1}, b_i]`, so sample grids aligned with
//! the breakpoints split exactly. Analytic descriptors (affine, power,
//! exponential) evaluate in floating point and are centered in closed form.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::convexfn::OddConvexCombination;
use crate::scalar::{Scalar, ScalarPolicy};
use crate::sequence::{OrderedZeroSumSequence, SequenceError};

#[derive(Debug, Error, PartialEq)]
pub enum IntegralError {
    #[error("step function needs one more level than breakpoints (got {breaks} breaks, {levels} levels)")]
    LevelCountMismatch { breaks: usize, levels: usize },
    #[error("breakpoints must lie strictly inside (0, 1) and be strictly increasing")]
    BadBreakpoints,
    #[error("step levels must be nondecreasing (violated at {index})")]
    LevelsDecrease { index: usize },
    #[error("{family} parameter {value} does not give an increasing function on [0, 1]")]
    NotIncreasing { family: &'static str, value: f64 },
    #[error("function must have zero mean (mean = {mean}); center it first")]
    NotMeanZero { mean: String },
    #[error("analytic descriptor evaluated to a non-finite value at {x}")]
    EvaluationFailure { x: f64 },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Named analytic families, all increasing on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum AnalyticFamily {
    /// `a·x + b` with `a ≥ 0`.
    Affine { slope: f64, intercept: f64 },
    /// `x^p` with `p ≥ 1`.
    Power { exponent: f64 },
    /// `e^{c·x}` with `c ≥ 0`.
    Exp { rate: f64 },
}

impl AnalyticFamily {
    fn base_eval(&self, x: f64) -> f64 {
        match *self {
            AnalyticFamily::Affine { slope, intercept } => slope * x + intercept,
            AnalyticFamily::Power { exponent } => x.powf(exponent),
            AnalyticFamily::Exp { rate } => (rate * x).exp(),
        }
    }

    /// `∫₀¹` of the base function, in closed form.
    fn base_mean(&self) -> f64 {
        match *self {
            AnalyticFamily::Affine { slope, intercept } => slope / 2.0 + intercept,
            AnalyticFamily::Power { exponent } => 1.0 / (exponent + 1.0),
            AnalyticFamily::Exp { rate } => {
                if rate == 0.0 {
                    1.0
                } else {
                    (rate.exp() - 1.0) / rate
                }
            }
        }
    }
}

/// An analytic increasing function `base(x) + shift` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticMonotone {
    pub family: AnalyticFamily,
    pub shift: f64,
}

impl AnalyticMonotone {
    pub fn affine(slope: f64, intercept: f64) -> Result<Self, IntegralError> {
        if !(slope.is_finite() && intercept.is_finite()) || slope < 0.0 {
            return Err(IntegralError::NotIncreasing {
                family: "affine",
                value: slope,
            });
        }
        Ok(AnalyticMonotone {
            family: AnalyticFamily::Affine { slope, intercept },
            shift: 0.0,
        })
    }

    pub fn power(exponent: f64) -> Result<Self, IntegralError> {
        if !exponent.is_finite() || exponent < 1.0 {
            return Err(IntegralError::NotIncreasing {
                family: "power",
                value: exponent,
            });
        }
        Ok(AnalyticMonotone {
            family: AnalyticFamily::Power { exponent },
            shift: 0.0,
        })
    }

    pub fn exp(rate: f64) -> Result<Self, IntegralError> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(IntegralError::NotIncreasing {
                family: "exp",
                value: rate,
            });
        }
        Ok(AnalyticMonotone {
            family: AnalyticFamily::Exp { rate },
            shift: 0.0,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.family.base_eval(x) + self.shift
    }

    pub fn mean(&self) -> f64 {
        self.family.base_mean() + self.shift
    }
}

/// An increasing step function on `[0, 1]`: constant on the left-open
/// intervals `(b_{i−1}, b_i]` determined by breakpoints strictly inside
/// `(0, 1)`, with nondecreasing levels. `f(0)` is the first level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    breaks: Vec<Scalar>,
    levels: Vec<Scalar>,
}

impl StepFunction {
    pub fn new(breaks: Vec<Scalar>, levels: Vec<Scalar>) -> Result<Self, IntegralError> {
        if levels.len() != breaks.len() + 1 {
            return Err(IntegralError::LevelCountMismatch {
                breaks: breaks.len(),
                levels: levels.len(),
            });
        }
        for (i, b) in breaks.iter().enumerate() {
            if !b.is_positive() || *b >= Scalar::one() {
                return Err(IntegralError::BadBreakpoints);
            }
            if i > 0 && breaks[i - 1] >= *b {
                return Err(IntegralError::BadBreakpoints);
            }
        }
        for i in 1..levels.len() {
            if levels[i - 1] > levels[i] {
                return Err(IntegralError::LevelsDecrease { index: i });
            }
        }
        Ok(StepFunction { breaks, levels })
    }

    pub fn breaks(&self) -> &[Scalar] {
        &self.breaks
    }

    pub fn levels(&self) -> &[Scalar] {
        &self.levels
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let idx = self.breaks.partition_point(|b| b < x);
        self.levels[idx].clone()
    }

    /// `∫₀¹ f` as the exact sum of level·width terms.
    pub fn integral(&self) -> Scalar {
        let mut total = Scalar::zero();
        let mut prev = Scalar::zero();
        for (i, level) in self.levels.iter().enumerate() {
            let upper = if i < self.breaks.len() {
                self.breaks[i].clone()
            } else {
                Scalar::one()
            };
            total = total + level * (&upper - &prev);
            prev = upper;
        }
        total
    }

    /// The function shifted by `−∫₀¹ f`, exactly.
    pub fn centered(&self) -> StepFunction {
        let mean = self.integral();
        StepFunction {
            breaks: self.breaks.clone(),
            levels: self.levels.iter().map(|l| l - &mean).collect(),
        }
    }
}

/// An increasing function on `[0, 1]`, as either an analytic descriptor or
/// an exact step function, with the tolerance used for mean-zero checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneFunctionSpec {
    pub shape: MonotoneShape,
    pub mean_zero_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MonotoneShape {
    Analytic(AnalyticMonotone),
    Step(StepFunction),
}

pub const DEFAULT_MEAN_ZERO_TOL: f64 = 1e-9;

impl MonotoneFunctionSpec {
    pub fn analytic(f: AnalyticMonotone) -> Self {
        MonotoneFunctionSpec {
            shape: MonotoneShape::Analytic(f),
            mean_zero_tol: DEFAULT_MEAN_ZERO_TOL,
        }
    }

    pub fn step(f: StepFunction) -> Self {
        MonotoneFunctionSpec {
            shape: MonotoneShape::Step(f),
            mean_zero_tol: DEFAULT_MEAN_ZERO_TOL,
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        match &self.shape {
            MonotoneShape::Analytic(f) => Scalar::approx(f.eval(x.to_f64())),
            MonotoneShape::Step(f) => f.eval(x),
        }
    }

    /// `∫₀¹ f`: closed form for analytic families, exact for steps.
    pub fn mean(&self) -> Scalar {
        match &self.shape {
            MonotoneShape::Analytic(f) => Scalar::approx(f.mean()),
            MonotoneShape::Step(f) => f.integral(),
        }
    }

    /// `f − ∫₀¹ f`; idempotent, and exact on the step path.
    pub fn center(&self) -> MonotoneFunctionSpec {
        let shape = match &self.shape {
            MonotoneShape::Analytic(f) => {
                let mut g = *f;
                g.shift -= f.mean();
                MonotoneShape::Analytic(g)
            }
            MonotoneShape::Step(f) => MonotoneShape::Step(f.centered()),
        };
        MonotoneFunctionSpec {
            shape,
            mean_zero_tol: self.mean_zero_tol,
        }
    }

    pub fn is_mean_zero(&self) -> bool {
        match &self.shape {
            MonotoneShape::Analytic(f) => f.mean().abs() <= self.mean_zero_tol,
            MonotoneShape::Step(f) => f.integral().is_zero(),
        }
    }

    /// `f(1) − f(0)`, the range bound entering `|m_n| ≤ (f(1)−f(0))/n`.
    pub fn range(&self) -> Scalar {
        self.eval(&Scalar::one()) - self.eval(&Scalar::zero())
    }
}

/// Result of sampling `f` at `k/n`: the zero-sum instance plus the sample
/// mean it was centered by.
#[derive(Debug, Clone, Serialize)]
pub struct Discretization {
    pub sequence: OrderedZeroSumSequence,
    /// `m_n = (1/n) Σ f(k/n)`.
    pub sample_mean: Scalar,
}

fn samples(f: &MonotoneFunctionSpec, n: usize) -> Result<Vec<Scalar>, IntegralError> {
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let x = Scalar::ratio(k as i64, n as i64);
        let v = match &f.shape {
            MonotoneShape::Analytic(g) => {
                let y = g.eval(k as f64 / n as f64);
                if !y.is_finite() {
                    return Err(IntegralError::EvaluationFailure {
                        x: k as f64 / n as f64,
                    });
                }
                Scalar::Approx(y)
            }
            MonotoneShape::Step(g) => g.eval(&x),
        };
        out.push(v);
    }
    Ok(out)
}

/// `α_k = (f(k/n) − m_n)/n`: sorted because `f` is increasing, zero-sum by
/// construction (exactly on the step path).
pub fn discretize(
    f: &MonotoneFunctionSpec,
    n: usize,
    policy: &ScalarPolicy,
) -> Result<Discretization, IntegralError> {
    let samples = samples(f, n)?;
    let n_scalar = Scalar::from_int(n as i64);
    let sample_mean = samples.iter().sum::<Scalar>() / &n_scalar;
    let alphas: Vec<Scalar> = samples
        .iter()
        .map(|s| (s - &sample_mean) / &n_scalar)
        .collect();
    // Recentering is the identity on the exact path and absorbs the last
    // ulps of drift on the floating path.
    let sequence = OrderedZeroSumSequence::recentered(alphas, policy)?;
    Ok(Discretization {
        sequence,
        sample_mean,
    })
}

/// `(1/n) Σ φ((k/n)·f(k/n))` — the right-endpoint Riemann sum of
/// `φ(x·f(x))`, matching the sample points of [`discretize`].
pub fn riemann_sum(
    f: &MonotoneFunctionSpec,
    phi: &OddConvexCombination,
    n: usize,
) -> Result<Scalar, IntegralError> {
    let samples = samples(f, n)?;
    let n_scalar = Scalar::from_int(n as i64);
    let sum: Scalar = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let x = Scalar::ratio(i as i64 + 1, n as i64);
            phi.eval(&(x * s))
        })
        .sum();
    Ok(sum / n_scalar)
}

/// `(1/n) Σ φ((k/n)(f(k/n) − m_n))`: the main inequality applied to the
/// discretization (the argument is exactly `k·α_k`), so the result is
/// nonnegative at every finite `n`.
pub fn discrete_theorem_sum(
    f: &MonotoneFunctionSpec,
    phi: &OddConvexCombination,
    n: usize,
) -> Result<Scalar, IntegralError> {
    let samples = samples(f, n)?;
    let n_scalar = Scalar::from_int(n as i64);
    let sample_mean = samples.iter().sum::<Scalar>() / &n_scalar;
    let sum: Scalar = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let x = Scalar::ratio(i as i64 + 1, n as i64);
            phi.eval(&(x * (s - &sample_mean)))
        })
        .sum();
    Ok(sum / n_scalar)
}

/// One row of a convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub discrete_theorem_sum: Scalar,
    pub riemann_sum: Scalar,
    pub sample_mean: Scalar,
}

/// Evaluate the study rows for each `n`; rows are independent and run in
/// parallel.
pub fn convergence_study(
    f: &MonotoneFunctionSpec,
    phi: &OddConvexCombination,
    n_list: &[usize],
) -> Result<Vec<ConvergenceRow>, IntegralError> {
    n_list
        .par_iter()
        .map(|&n| {
            let d = discretize(f, n, &ScalarPolicy::approx())?;
            Ok(ConvergenceRow {
                n,
                discrete_theorem_sum: discrete_theorem_sum(f, phi, n)?,
                riemann_sum: riemann_sum(f, phi, n)?,
                sample_mean: d.sample_mean,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centered_identity() -> MonotoneFunctionSpec {
        MonotoneFunctionSpec::analytic(AnalyticMonotone::affine(1.0, -0.5).unwrap())
    }

    fn cube() -> OddConvexCombination {
        OddConvexCombination::monomial(Scalar::one(), 3).unwrap()
    }

    #[test]
    fn centering_the_identity() {
        let f = MonotoneFunctionSpec::analytic(AnalyticMonotone::affine(1.0, 0.0).unwrap());
        assert!(!f.is_mean_zero());
        let c = f.center();
        assert!(c.is_mean_zero());
        assert_eq!(c.eval(&Scalar::approx(0.5)).to_f64(), 0.0);
        // Idempotent.
        let cc = c.center();
        assert_eq!(cc.eval(&Scalar::approx(0.25)).to_f64(), c.eval(&Scalar::approx(0.25)).to_f64());
    }

    #[test]
    fn centering_a_step_function_is_exact() {
        // Levels (0, 2) split at 1/2 have mean 1; centered levels (−1, 1).
        let f = StepFunction::new(
            vec![Scalar::ratio(1, 2)],
            vec![Scalar::zero(), Scalar::from_int(2)],
        )
        .unwrap();
        assert_eq!(f.integral(), Scalar::one());
        let c = f.centered();
        assert_eq!(c.levels(), &[Scalar::from_int(-1), Scalar::one()][..]);
        assert!(c.integral().is_zero());
    }

    #[test]
    fn step_sampling_is_right_closed() {
        let f = StepFunction::new(
            vec![Scalar::ratio(1, 2)],
            vec![Scalar::from_int(-1), Scalar::one()],
        )
        .unwrap();
        assert_eq!(f.eval(&Scalar::ratio(1, 2)), Scalar::from_int(-1));
        assert_eq!(f.eval(&Scalar::ratio(3, 4)), Scalar::one());
        assert_eq!(f.eval(&Scalar::one()), Scalar::one());
        assert_eq!(f.eval(&Scalar::zero()), Scalar::from_int(-1));
    }

    #[test]
    fn step_validation_errors() {
        assert!(matches!(
            StepFunction::new(vec![Scalar::ratio(1, 2)], vec![Scalar::zero()]),
            Err(IntegralError::LevelCountMismatch { .. })
        ));
        assert!(matches!(
            StepFunction::new(
                vec![Scalar::from_int(1)],
                vec![Scalar::zero(), Scalar::one()]
            ),
            Err(IntegralError::BadBreakpoints)
        ));
        assert!(matches!(
            StepFunction::new(
                vec![Scalar::ratio(1, 2)],
                vec![Scalar::one(), Scalar::zero()]
            ),
            Err(IntegralError::LevelsDecrease { index: 1 })
        ));
    }

    #[test]
    fn discretize_identity_n2() {
        // Samples (0, 1/2), mean 1/4, α = (−1/8, 1/8).
        let d = discretize(&centered_identity(), 2, &ScalarPolicy::approx()).unwrap();
        assert_eq!(d.sample_mean.to_f64(), 0.25);
        let values: Vec<f64> = d.sequence.values().iter().map(Scalar::to_f64).collect();
        assert_eq!(values, vec![-0.125, 0.125]);
    }

    #[test]
    fn discretize_identity_n4() {
        // Samples (−1/4, 0, 1/4, 1/2), mean 1/8, α = (−3/32, −1/32, 1/32, 3/32).
        let d = discretize(&centered_identity(), 4, &ScalarPolicy::approx()).unwrap();
        let values: Vec<f64> = d.sequence.values().iter().map(Scalar::to_f64).collect();
        assert_eq!(values, vec![-3.0 / 32.0, -1.0 / 32.0, 1.0 / 32.0, 3.0 / 32.0]);
    }

    #[test]
    fn discretize_constant_zero() {
        let f = MonotoneFunctionSpec::step(
            StepFunction::new(vec![], vec![Scalar::zero()]).unwrap(),
        );
        let d = discretize(&f, 5, &ScalarPolicy::exact()).unwrap();
        assert!(d.sequence.is_all_zero());
        assert!(d.sample_mean.is_zero());
    }

    #[test]
    fn discretize_step_function_exactly() {
        let f = MonotoneFunctionSpec::step(
            StepFunction::new(
                vec![Scalar::ratio(1, 2)],
                vec![Scalar::from_int(-1), Scalar::one()],
            )
            .unwrap(),
        );
        // n even and aligned with the breakpoint: mean exactly zero.
        let d = discretize(&f, 4, &ScalarPolicy::exact()).unwrap();
        assert!(d.sample_mean.is_zero());
        assert!(d.sequence.values().iter().all(Scalar::is_exact));
        // n = 3 misses the breakpoint; mean is 1/3.
        let d = discretize(&f, 3, &ScalarPolicy::exact()).unwrap();
        assert_eq!(d.sample_mean, Scalar::ratio(1, 3));
    }

    #[test]
    fn riemann_sum_single_point() {
        let phi = OddConvexCombination::exp_diff(Scalar::one()).unwrap();
        let v = riemann_sum(&centered_identity(), &phi, 1).unwrap();
        assert!((v.to_f64() - 2.0 * 0.5f64.sinh()).abs() < 1e-12);
        assert!((v.to_f64() - 1.04219).abs() < 1e-5);
    }

    #[test]
    fn riemann_sum_zero_phi() {
        let v = riemann_sum(&centered_identity(), &OddConvexCombination::zero(), 100).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn discrete_sum_hand_value() {
        // n = 2, f = x − 1/2, φ = x³: exactly 7/1024 (dyadic, so the f64
        // path reproduces it bit-for-bit).
        let v = discrete_theorem_sum(&centered_identity(), &cube(), 2).unwrap();
        assert_eq!(v.to_f64(), 7.0 / 1024.0);
    }

    #[test]
    fn discrete_sum_single_sample_is_zero() {
        let v = discrete_theorem_sum(&centered_identity(), &cube(), 1).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn exact_policy_rejects_analytic_path() {
        let err = discretize(&centered_identity(), 3, &ScalarPolicy::exact()).unwrap_err();
        assert!(matches!(err, IntegralError::Sequence(_)));
    }

    #[test]
    fn study_rows_cover_each_n() {
        let phi = OddConvexCombination::exp_diff(Scalar::one()).unwrap();
        let rows = convergence_study(&centered_identity(), &phi, &[1, 2, 4, 8]).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(!row.discrete_theorem_sum.is_negative());
        }
        // Sample mean shrinks like range/n for increasing f.
        assert!(rows[3].sample_mean.to_f64() <= 1.0 / 8.0);
    }
}
