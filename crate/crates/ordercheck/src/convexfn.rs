//! The cone of odd functions that are increasing and convex on `[0, ∞)`,
//! and piecewise-linear increasing convex functions with `F(0) = 0`.
//!
//! Cone elements are nonnegative combinations of four atom families:
//!
//! * the identity `x` (linear coefficient),
//! * odd extensions of plus-functions `x ↦ (x − t)₊` with `t ≥ 0`,
//! * odd monomials `x^{2j+1}` with nonnegative weights,
//! * `sinh` (with `exp_diff = 2·sinh` as a named alias).
//!
//! Oddness is enforced structurally: evaluation computes the restriction to
//! `[0, ∞)` at `|x|` and applies the sign of `x`, so `φ(−x) = −φ(x)` holds
//! exactly even in floating point. Linear, plus, and monomial atoms are
//! closed under rational arithmetic; `sinh` always evaluates approximately.
//!
//! [`PLIncreasingConvexFn`] is the canonical exact-mode form of an
//! increasing convex `F` with `F(0) = 0`: an initial slope `s₀ ≥ 0` plus
//! nonnegative slope increments at positive knots, i.e. precisely the data
//! of the plus-function superposition
//! `F(x) = s₀·x + Σ_i Δs_i·(x − k_i)₊`.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum ConvexFnError {
    #[error("atom weight must be nonnegative (got {weight})")]
    NegativeWeight { weight: String },
    #[error("plus-function knot must be nonnegative (got {knot})")]
    NegativeKnot { knot: String },
    #[error("monomial degree must be odd (got {degree})")]
    EvenDegree { degree: u32 },
    #[error("initial slope must be nonnegative (got {slope})")]
    NegativeInitialSlope { slope: String },
    #[error("breakpoint knots must be positive and strictly increasing")]
    BadBreakpoints,
    #[error("slope increment must be nonnegative (got {increment})")]
    NegativeSlopeIncrement { increment: String },
    #[error("sampled chord slopes decrease at sample {index}: the atom is not increasing convex on the domain")]
    NonConvexSample { index: usize },
    #[error("malformed piecewise-linear representation: {0}")]
    Malformed(String),
}

/// Odd extension of `x ↦ (x − knot)₊`, scaled by `weight`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlusAtom {
    pub weight: Scalar,
    pub knot: Scalar,
}

/// `weight · x^degree` with odd `degree`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialAtom {
    pub weight: Scalar,
    pub degree: u32,
}

/// A nonnegative combination of cone atoms. Constructible only through
/// the atom constructors and [`add`](Self::add)/[`scaled`](Self::scaled),
/// so weights are nonnegative by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddConvexCombination {
    linear: Scalar,
    plus: Vec<PlusAtom>,
    monomials: Vec<MonomialAtom>,
    sinh_coeff: Scalar,
}

fn check_weight(weight: &Scalar) -> Result<(), ConvexFnError> {
    if weight.is_negative() {
        return Err(ConvexFnError::NegativeWeight {
            weight: weight.to_string(),
        });
    }
    Ok(())
}

impl OddConvexCombination {
    pub fn zero() -> Self {
        OddConvexCombination {
            linear: Scalar::zero(),
            plus: Vec::new(),
            monomials: Vec::new(),
            sinh_coeff: Scalar::zero(),
        }
    }

    /// `weight · x`.
    pub fn linear(weight: Scalar) -> Result<Self, ConvexFnError> {
        check_weight(&weight)?;
        let mut c = Self::zero();
        c.linear = weight;
        Ok(c)
    }

    /// `weight ·` odd extension of `(x − knot)₊`, `knot ≥ 0`.
    pub fn plus_atom(weight: Scalar, knot: Scalar) -> Result<Self, ConvexFnError> {
        check_weight(&weight)?;
        if knot.is_negative() {
            return Err(ConvexFnError::NegativeKnot {
                knot: knot.to_string(),
            });
        }
        let mut c = Self::zero();
        c.plus.push(PlusAtom { weight, knot });
        Ok(c)
    }

    /// `weight · x^degree` with `degree` odd.
    pub fn monomial(weight: Scalar, degree: u32) -> Result<Self, ConvexFnError> {
        check_weight(&weight)?;
        if degree % 2 == 0 {
            return Err(ConvexFnError::EvenDegree { degree });
        }
        let mut c = Self::zero();
        c.monomials.push(MonomialAtom { weight, degree });
        Ok(c)
    }

    /// `weight · sinh`.
    pub fn sinh(weight: Scalar) -> Result<Self, ConvexFnError> {
        check_weight(&weight)?;
        let mut c = Self::zero();
        c.sinh_coeff = weight;
        Ok(c)
    }

    /// `weight · (e^x − e^{−x})`, i.e. `2·weight·sinh`.
    pub fn exp_diff(weight: Scalar) -> Result<Self, ConvexFnError> {
        check_weight(&weight)?;
        Self::sinh(Scalar::from_int(2) * weight)
    }

    /// Odd polynomial `a₁x + a₃x³ + a₅x⁵ + …` from the listed coefficients.
    pub fn odd_polynomial(coeffs: &[Scalar]) -> Result<Self, ConvexFnError> {
        let mut c = Self::zero();
        for (j, a) in coeffs.iter().enumerate() {
            check_weight(a)?;
            if a.is_zero() {
                continue;
            }
            let degree = 2 * j as u32 + 1;
            if degree == 1 {
                c.linear = &c.linear + a;
            } else {
                c.monomials.push(MonomialAtom {
                    weight: a.clone(),
                    degree,
                });
            }
        }
        Ok(c)
    }

    /// Cone closure: the sum of two members is a member.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.linear = &out.linear + &other.linear;
        out.plus.extend(other.plus.iter().cloned());
        out.monomials.extend(other.monomials.iter().cloned());
        out.sinh_coeff = &out.sinh_coeff + &other.sinh_coeff;
        out
    }

    /// Cone closure under nonnegative scaling.
    pub fn scaled(&self, weight: &Scalar) -> Result<Self, ConvexFnError> {
        check_weight(weight)?;
        let mut out = self.clone();
        out.linear = &out.linear * weight;
        for a in &mut out.plus {
            a.weight = &a.weight * weight;
        }
        for a in &mut out.monomials {
            a.weight = &a.weight * weight;
        }
        out.sinh_coeff = &out.sinh_coeff * weight;
        Ok(out)
    }

    /// True when every atom evaluates within rational arithmetic; only the
    /// sinh atom forces approximate results.
    pub fn is_rational_closed(&self) -> bool {
        self.sinh_coeff.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.linear.is_zero()
            && self.sinh_coeff.is_zero()
            && self.plus.iter().all(|a| a.weight.is_zero())
            && self.monomials.iter().all(|a| a.weight.is_zero())
    }

    pub fn linear_coeff(&self) -> &Scalar {
        &self.linear
    }

    pub fn plus_atoms(&self) -> &[PlusAtom] {
        &self.plus
    }

    pub fn monomial_atoms(&self) -> &[MonomialAtom] {
        &self.monomials
    }

    pub fn sinh_coeff(&self) -> &Scalar {
        &self.sinh_coeff
    }

    /// Restriction to `[0, ∞)` evaluated at `u ≥ 0`.
    fn eval_nonneg(&self, u: &Scalar) -> Scalar {
        let mut acc = &self.linear * u;
        for a in &self.plus {
            if a.weight.is_zero() {
                continue;
            }
            acc = acc + &a.weight * (u - &a.knot).plus_part();
        }
        for a in &self.monomials {
            if a.weight.is_zero() {
                continue;
            }
            acc = acc + &a.weight * u.pow_u32(a.degree);
        }
        if !self.sinh_coeff.is_zero() {
            acc = acc + &self.sinh_coeff * u.sinh();
        }
        acc
    }

    /// `φ(x) = sign(x) · φ̂(|x|)`: oddness holds by construction.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let value = self.eval_nonneg(&x.abs());
        if x.is_negative() {
            -value
        } else {
            value
        }
    }
}

/// A breakpoint of a piecewise-linear increasing convex function: the slope
/// increases by `slope_increment ≥ 0` at `knot > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakpoint {
    pub knot: Scalar,
    pub slope_increment: Scalar,
}

/// Piecewise-linear `F: [0, ∞) → ℝ` with `F(0) = 0`, increasing and convex:
/// initial slope `s₀ ≥ 0`, slope increments `Δs_i ≥ 0` at strictly
/// increasing positive knots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PLIncreasingConvexFn {
    initial_slope: Scalar,
    breakpoints: Vec<Breakpoint>,
}

/// The plus-function superposition extracted from a [`PLIncreasingConvexFn`]:
/// `F(x) = initial_slope·x + Σ weight·(x − knot)₊`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlusDecomposition {
    pub initial_slope: Scalar,
    /// `(weight, knot)` pairs; the weight is the slope increment at the knot.
    pub atoms: Vec<(Scalar, Scalar)>,
}

impl PLIncreasingConvexFn {
    pub fn new(
        initial_slope: Scalar,
        breakpoints: Vec<Breakpoint>,
    ) -> Result<Self, ConvexFnError> {
        if initial_slope.is_negative() {
            return Err(ConvexFnError::NegativeInitialSlope {
                slope: initial_slope.to_string(),
            });
        }
        for (i, b) in breakpoints.iter().enumerate() {
            if !b.knot.is_positive() {
                return Err(ConvexFnError::BadBreakpoints);
            }
            if i > 0 && breakpoints[i - 1].knot >= b.knot {
                return Err(ConvexFnError::BadBreakpoints);
            }
            if b.slope_increment.is_negative() {
                return Err(ConvexFnError::NegativeSlopeIncrement {
                    increment: b.slope_increment.to_string(),
                });
            }
        }
        Ok(PLIncreasingConvexFn {
            initial_slope,
            breakpoints,
        })
    }

    /// The linear function `slope · x`.
    pub fn linear(slope: Scalar) -> Result<Self, ConvexFnError> {
        Self::new(slope, Vec::new())
    }

    /// The single plus-function `(x − knot)₊`.
    pub fn plus(knot: Scalar) -> Result<Self, ConvexFnError> {
        Self::new(
            Scalar::zero(),
            vec![Breakpoint {
                knot,
                slope_increment: Scalar::one(),
            }],
        )
    }

    pub fn initial_slope(&self) -> &Scalar {
        &self.initial_slope
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Cumulative segment slopes `s₀ ≤ s₀+Δs_1 ≤ …`.
    pub fn segment_slopes(&self) -> Vec<Scalar> {
        let mut slopes = Vec::with_capacity(self.breakpoints.len() + 1);
        let mut s = self.initial_slope.clone();
        slopes.push(s.clone());
        for b in &self.breakpoints {
            s = s + &b.slope_increment;
            slopes.push(s.clone());
        }
        slopes
    }

    /// Evaluate by walking segments and accumulating knot values. This is
    /// deliberately a different algebraic route from the plus-function form
    /// returned by [`decompose_plus`](Self::decompose_plus); tests compare
    /// the two.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut value = Scalar::zero();
        let mut slope = self.initial_slope.clone();
        let mut prev = Scalar::zero();
        for b in &self.breakpoints {
            if &b.knot > x {
                break;
            }
            value = value + &slope * (&b.knot - &prev);
            slope = slope + &b.slope_increment;
            prev = b.knot.clone();
        }
        value + &slope * (x - &prev)
    }

    /// The finite plus-function representation: `s₀` plus one `(Δs_i, k_i)`
    /// atom per breakpoint. Recomposing through
    /// [`to_odd_combination`](Self::to_odd_combination) reproduces `F`
    /// exactly on `[0, ∞)`.
    pub fn decompose_plus(&self) -> PlusDecomposition {
        PlusDecomposition {
            initial_slope: self.initial_slope.clone(),
            atoms: self
                .breakpoints
                .iter()
                .map(|b| (b.slope_increment.clone(), b.knot.clone()))
                .collect(),
        }
    }

    /// The odd extension of `F` as a cone member (linear part `s₀`, one
    /// plus atom per breakpoint).
    pub fn to_odd_combination(&self) -> OddConvexCombination {
        let mut c = OddConvexCombination::linear(self.initial_slope.clone())
            .expect("initial slope validated nonnegative");
        for b in &self.breakpoints {
            c = c.add(
                &OddConvexCombination::plus_atom(b.slope_increment.clone(), b.knot.clone())
                    .expect("breakpoint validated"),
            );
        }
        c
    }
}

/// Verdict of a cone membership test for a general piecewise-linear
/// candidate defined on all of ℝ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConeVerdict {
    Member,
    NotOdd { reason: String },
    NotIncreasingConvex { reason: String },
}

impl ConeVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ConeVerdict::Member)
    }
}

/// A candidate piecewise-linear function on all of ℝ: strictly increasing
/// knots of any sign, one slope per segment (`slopes.len() = knots.len()+1`),
/// anchored by its value at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearCandidate {
    pub knots: Vec<Scalar>,
    pub slopes: Vec<Scalar>,
    pub value_at_zero: Scalar,
}

/// Test whether the candidate lies in the cone: odd, and increasing convex
/// on `[0, ∞)`. Knots with equal adjacent slopes are ignored, so equivalent
/// representations get the same verdict.
pub fn cone_membership(
    candidate: &PiecewiseLinearCandidate,
) -> Result<ConeVerdict, ConvexFnError> {
    if candidate.slopes.len() != candidate.knots.len() + 1 {
        return Err(ConvexFnError::Malformed(format!(
            "{} knots need {} slopes, got {}",
            candidate.knots.len(),
            candidate.knots.len() + 1,
            candidate.slopes.len()
        )));
    }
    for i in 1..candidate.knots.len() {
        if candidate.knots[i - 1] >= candidate.knots[i] {
            return Err(ConvexFnError::Malformed(
                "knots must be strictly increasing".into(),
            ));
        }
    }

    // Canonical form: drop knots where the slope does not actually change.
    let mut knots: Vec<&Scalar> = Vec::new();
    let mut slopes: Vec<&Scalar> = vec![&candidate.slopes[0]];
    for (i, k) in candidate.knots.iter().enumerate() {
        let next = &candidate.slopes[i + 1];
        if next != *slopes.last().expect("nonempty") {
            knots.push(k);
            slopes.push(next);
        }
    }

    if !candidate.value_at_zero.is_zero() {
        return Ok(ConeVerdict::NotOdd {
            reason: format!("value at 0 is {}, not 0", candidate.value_at_zero),
        });
    }

    // Oddness: a kink exactly at 0 breaks the mirror symmetry of the two
    // segments adjacent to 0; otherwise knots and segment slopes must be
    // mirror images.
    let m = knots.len();
    for i in 0..m {
        let mirrored = -knots[m - 1 - i];
        if *knots[i] != mirrored {
            return Ok(ConeVerdict::NotOdd {
                reason: format!(
                    "knot {} has no mirror image at {}",
                    knots[i],
                    -knots[i]
                ),
            });
        }
    }
    for i in 0..slopes.len() {
        let j = slopes.len() - 1 - i;
        if slopes[i] != slopes[j] {
            return Ok(ConeVerdict::NotOdd {
                reason: format!(
                    "segment slopes {} and {} are not mirror-symmetric",
                    slopes[i], slopes[j]
                ),
            });
        }
    }
    if m % 2 == 1 {
        // Odd knot count with symmetric knots means the middle knot is 0,
        // and a canonical knot always changes the slope.
        return Ok(ConeVerdict::NotOdd {
            reason: "slope changes at 0".into(),
        });
    }

    // Increasing convex on [0, ∞): the segments covering (0, ∞) are those
    // from the first knot > 0 onwards, plus the one containing 0.
    let start = knots.partition_point(|k| !k.is_positive());
    let positive_slopes = &slopes[start..];
    if let Some(first) = positive_slopes.first() {
        if first.is_negative() {
            return Ok(ConeVerdict::NotIncreasingConvex {
                reason: format!("negative slope {} on [0, ∞)", first),
            });
        }
    }
    for i in 1..positive_slopes.len() {
        if positive_slopes[i - 1] > positive_slopes[i] {
            return Ok(ConeVerdict::NotIncreasingConvex {
                reason: format!(
                    "slopes decrease from {} to {} (concave piece)",
                    positive_slopes[i - 1],
                    positive_slopes[i]
                ),
            });
        }
    }

    Ok(ConeVerdict::Member)
}

/// Interpolate an increasing convex atom (with value 0 at 0) on
/// `[0, domain_max]` at `num_knots` equally spaced sample points. The
/// chords of a convex function have nondecreasing slopes, so the
/// interpolant is itself increasing convex; it agrees with the atom at the
/// samples and lies above it in between.
pub fn pl_approximation(
    atom: impl Fn(f64) -> f64,
    domain_max: f64,
    num_knots: usize,
) -> Result<PLIncreasingConvexFn, ConvexFnError> {
    if num_knots < 2 || !domain_max.is_finite() || domain_max <= 0.0 {
        return Err(ConvexFnError::Malformed(
            "need num_knots >= 2 and a positive finite domain".into(),
        ));
    }
    let h = domain_max / (num_knots - 1) as f64;
    let samples: Vec<f64> = (0..num_knots).map(|i| atom(i as f64 * h)).collect();
    if samples.iter().any(|y| !y.is_finite()) {
        return Err(ConvexFnError::Malformed(
            "atom evaluated to a non-finite value".into(),
        ));
    }
    if samples[0] != 0.0 {
        return Err(ConvexFnError::Malformed(format!(
            "atom value at 0 is {}, expected 0",
            samples[0]
        )));
    }

    let chords: Vec<f64> = samples.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    if chords[0] < 0.0 {
        return Err(ConvexFnError::NonConvexSample { index: 0 });
    }
    for i in 1..chords.len() {
        if chords[i] < chords[i - 1] {
            return Err(ConvexFnError::NonConvexSample { index: i });
        }
    }

    let breakpoints = (1..chords.len())
        .filter(|&i| chords[i] > chords[i - 1])
        .map(|i| Breakpoint {
            knot: Scalar::approx(i as f64 * h),
            slope_increment: Scalar::approx(chords[i] - chords[i - 1]),
        })
        .collect();
    PLIncreasingConvexFn::new(Scalar::approx(chords[0]), breakpoints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinh_combination_evaluates() {
        let phi = OddConvexCombination::sinh(Scalar::from_int(2)).unwrap();
        let v = phi.eval(&Scalar::from_int(1));
        assert!((v.to_f64() - 2.0 * 1f64.sinh()).abs() < 1e-12);
        assert!((v.to_f64() - 2.350402).abs() < 1e-6);
    }

    #[test]
    fn oddness_forces_zero_at_zero() {
        let phi = OddConvexCombination::sinh(Scalar::one())
            .unwrap()
            .add(&OddConvexCombination::plus_atom(Scalar::one(), Scalar::ratio(1, 2)).unwrap());
        assert!(phi.eval(&Scalar::zero()).is_zero());
    }

    #[test]
    fn cube_atom_is_exact_and_odd() {
        let phi = OddConvexCombination::monomial(Scalar::one(), 3).unwrap();
        let v = phi.eval(&Scalar::from_int(-2));
        assert!(v.is_exact());
        assert_eq!(v, Scalar::from_int(-8));
    }

    #[test]
    fn exp_diff_is_twice_sinh() {
        let a = OddConvexCombination::exp_diff(Scalar::one()).unwrap();
        let b = OddConvexCombination::sinh(Scalar::from_int(2)).unwrap();
        let x = Scalar::approx(1.7);
        assert_eq!(a.eval(&x), b.eval(&x));
    }

    #[test]
    fn even_degree_is_rejected() {
        assert_eq!(
            OddConvexCombination::monomial(Scalar::one(), 2).unwrap_err(),
            ConvexFnError::EvenDegree { degree: 2 }
        );
        assert!(OddConvexCombination::monomial(Scalar::one(), 1).is_ok());
    }

    #[test]
    fn negative_weight_is_rejected() {
        assert!(matches!(
            OddConvexCombination::sinh(Scalar::from_int(-1)),
            Err(ConvexFnError::NegativeWeight { .. })
        ));
        assert!(matches!(
            OddConvexCombination::plus_atom(Scalar::one(), Scalar::from_int(-1)),
            Err(ConvexFnError::NegativeKnot { .. })
        ));
    }

    #[test]
    fn odd_polynomial_grammar() {
        // coefficients (a1, a3, a5) = (1, 0, 3): x + 3x^5.
        let phi = OddConvexCombination::odd_polynomial(&[
            Scalar::one(),
            Scalar::zero(),
            Scalar::from_int(3),
        ])
        .unwrap();
        assert_eq!(phi.eval(&Scalar::from_int(2)), Scalar::from_int(2 + 3 * 32));
        assert!(phi.is_rational_closed());
    }

    #[test]
    fn pl_eval_and_plus_form_agree() {
        // s0 = 1, slope increment 3 at knot 2: F(3) = 3 + 3·1 = 6.
        let f = PLIncreasingConvexFn::new(
            Scalar::one(),
            vec![Breakpoint {
                knot: Scalar::from_int(2),
                slope_increment: Scalar::from_int(3),
            }],
        )
        .unwrap();
        assert_eq!(f.eval(&Scalar::from_int(3)), Scalar::from_int(6));
        let odd = f.to_odd_combination();
        for x in [0, 1, 2, 3, 5, 11] {
            let x = Scalar::ratio(x, 2);
            assert_eq!(f.eval(&x), odd.eval(&x));
        }
    }

    #[test]
    fn decompose_plus_identity_cases() {
        let plus = PLIncreasingConvexFn::plus(Scalar::one()).unwrap();
        let d = plus.decompose_plus();
        assert_eq!(d.initial_slope, Scalar::zero());
        assert_eq!(d.atoms, vec![(Scalar::one(), Scalar::one())]);

        let linear = PLIncreasingConvexFn::linear(Scalar::from_int(2)).unwrap();
        let d = linear.decompose_plus();
        assert_eq!(d.initial_slope, Scalar::from_int(2));
        assert!(d.atoms.is_empty());
    }

    #[test]
    fn cone_membership_accepts_plus_atom_extension() {
        // Odd extension of (x−1)₊: slopes 1, 0, 1 around knots −1, 1.
        let cand = PiecewiseLinearCandidate {
            knots: vec![Scalar::from_int(-1), Scalar::from_int(1)],
            slopes: vec![Scalar::one(), Scalar::zero(), Scalar::one()],
            value_at_zero: Scalar::zero(),
        };
        assert!(cone_membership(&cand).unwrap().is_member());
    }

    #[test]
    fn cone_membership_rejects_abs() {
        // |x|: slope −1 then +1 with the kink at 0.
        let cand = PiecewiseLinearCandidate {
            knots: vec![Scalar::zero()],
            slopes: vec![Scalar::from_int(-1), Scalar::one()],
            value_at_zero: Scalar::zero(),
        };
        assert!(matches!(
            cone_membership(&cand).unwrap(),
            ConeVerdict::NotOdd { .. }
        ));
    }

    #[test]
    fn cone_membership_rejects_concave_odd_function() {
        // Odd extension of x − (x−1)₊: slopes 0, 1, 0 — decreasing on [0, ∞).
        let cand = PiecewiseLinearCandidate {
            knots: vec![Scalar::from_int(-1), Scalar::from_int(1)],
            slopes: vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
            value_at_zero: Scalar::zero(),
        };
        match cone_membership(&cand).unwrap() {
            ConeVerdict::NotIncreasingConvex { reason } => {
                assert!(reason.contains("decrease"), "reason: {reason}");
            }
            other => panic!("expected NotIncreasingConvex, got {other:?}"),
        }
    }

    #[test]
    fn cone_membership_rejects_malformed() {
        let cand = PiecewiseLinearCandidate {
            knots: vec![Scalar::one()],
            slopes: vec![Scalar::one()],
            value_at_zero: Scalar::zero(),
        };
        assert!(matches!(
            cone_membership(&cand),
            Err(ConvexFnError::Malformed(_))
        ));
    }

    #[test]
    fn pl_approximation_of_sinh() {
        // sinh on [0,2] with knots {0,1,2}: slopes sinh(1) then sinh(2)−sinh(1).
        let f = pl_approximation(f64::sinh, 2.0, 3).unwrap();
        let s = f.segment_slopes();
        assert!((s[0].to_f64() - 1f64.sinh()).abs() < 1e-12);
        assert!((s[1].to_f64() - (2f64.sinh() - 1f64.sinh())).abs() < 1e-12);
        assert!((s[0].to_f64() - 1.1752).abs() < 1e-4);
        assert!((s[1].to_f64() - 2.4517).abs() < 1e-4);
        // Agrees with the atom at the knots.
        assert!((f.eval(&Scalar::approx(1.0)).to_f64() - 1f64.sinh()).abs() < 1e-12);
        assert!((f.eval(&Scalar::approx(2.0)).to_f64() - 2f64.sinh()).abs() < 1e-12);
        // Lies above the atom between knots.
        assert!(f.eval(&Scalar::approx(1.5)).to_f64() >= 1.5f64.sinh());
    }

    #[test]
    fn pl_approximation_two_point_chord() {
        let f = pl_approximation(|x| x * x * x, 1.0, 2).unwrap();
        assert!(f.breakpoints().is_empty());
        assert_eq!(f.initial_slope(), &Scalar::approx(1.0));
    }

    #[test]
    fn pl_approximation_of_linear_is_exactly_linear() {
        let f = pl_approximation(|x| x, 3.0, 7).unwrap();
        assert!(f.breakpoints().is_empty());
        assert_eq!(f.eval(&Scalar::approx(2.5)).to_f64(), 2.5);
    }

    #[test]
    fn pl_approximation_rejects_concave_atom() {
        let err = pl_approximation(f64::sqrt, 1.0, 5).unwrap_err();
        assert!(matches!(err, ConvexFnError::NonConvexSample { .. }));
    }
}
