//! Instance generation, counterexample scanning, and tightness probing.
//!
//! Scans evaluate the main inequality over streams of generated instances.
//! A negative margin seen in approximate arithmetic is never reported
//! directly: the instance is rationalized (each double is the exact dyadic
//! rational its bits denote), recentered exactly, and re-judged in exact
//! arithmetic — by the exact margin when φ is rational-closed, and always
//! by exact stop-loss dominance of the split parts, which certifies
//! nonnegativity for *every* cone member including analytic atoms. Apparent
//! violations that fail to reproduce exactly are counted as tolerance
//! events.
//!
//! Near-equality instances (margin below `threshold · scale`) are shrunk by
//! repeatedly dropping the outermost pair and recentering while the margin
//! stays small, preferring small witnesses over clever ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{certify_lemma1, CertificateCase};
use crate::convexfn::OddConvexCombination;
use crate::scalar::{Scalar, ScalarPolicy};
use crate::sequence::OrderedZeroSumSequence;
use crate::stoploss::dominates;
use crate::theorem::{theorem_scale, theorem_sum};

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("grid of {raw_tuples} raw tuples exceeds the enumeration budget of {budget}")]
    BudgetExceeded { raw_tuples: u128, budget: u128 },
    #[error("instance size must be at least 1")]
    EmptyInstance,
}

/// How random instances are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Distribution {
    /// Integers in `[−half_range, half_range]` over `denominator`, sorted
    /// and recentered exactly; the resulting entries live in `(1/(n·d))·ℤ`.
    UniformGridRational { half_range: i64, denominator: i64 },
    /// Sum-of-twelve-uniforms noise scaled by `scale`, sorted and
    /// recentered in floating point.
    GaussianLikeReal { scale: f64 },
}

impl Distribution {
    pub fn grid_default() -> Self {
        Distribution::UniformGridRational {
            half_range: 12,
            denominator: 4,
        }
    }

    pub fn real_default() -> Self {
        Distribution::GaussianLikeReal { scale: 1.0 }
    }
}

/// Draw one sorted zero-sum instance; deterministic per `(n, seed, dist)`.
pub fn random_instance(n: usize, seed: u64, dist: &Distribution) -> OrderedZeroSumSequence {
    assert!(n >= 1, "instance size must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *dist {
        Distribution::UniformGridRational {
            half_range,
            denominator,
        } => {
            let mut vals: Vec<i64> = (0..n)
                .map(|_| rng.gen_range(-half_range..=half_range))
                .collect();
            vals.sort_unstable();
            let scalars = vals
                .into_iter()
                .map(|v| Scalar::ratio(v, denominator))
                .collect();
            OrderedZeroSumSequence::recentered(scalars, &ScalarPolicy::exact())
                .expect("sorted grid values recenter to an exact zero sum")
        }
        Distribution::GaussianLikeReal { scale } => {
            let mut vals: Vec<f64> = (0..n)
                .map(|_| {
                    let s: f64 = (0..12).map(|_| rng.gen::<f64>()).sum();
                    (s - 6.0) * scale
                })
                .collect();
            vals.sort_unstable_by(f64::total_cmp);
            // First centering pass here; the constructor's pass absorbs the
            // remaining ulps.
            let mean = vals.iter().sum::<f64>() / n as f64;
            let scalars = vals.into_iter().map(|v| Scalar::approx(v - mean)).collect();
            OrderedZeroSumSequence::recentered(scalars, &ScalarPolicy::approx())
                .expect("doubly-centered values pass the zero-sum tolerance")
        }
    }
}

const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Stream of every sorted zero-sum tuple with entries in
/// `{−half_range, …, half_range} / denominator`, each exactly once, in
/// lexicographic order.
pub fn exhaustive_grid(
    n: usize,
    half_range: i64,
    denominator: i64,
) -> Result<GridEnumerator, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyInstance);
    }
    let base = (2 * half_range + 1) as u128;
    let mut raw: u128 = n as u128;
    for _ in 0..n {
        raw = raw.saturating_mul(base);
        if raw > ENUMERATION_BUDGET {
            return Err(SearchError::BudgetExceeded {
                raw_tuples: raw,
                budget: ENUMERATION_BUDGET,
            });
        }
    }
    Ok(GridEnumerator {
        n,
        half_range,
        denominator,
        prefix: Vec::with_capacity(n),
        sum: 0,
        started: false,
        done: false,
    })
}

/// Backtracking enumerator over nondecreasing integer tuples with zero sum.
/// At each depth the feasible window for the next value is computed in
/// closed form, so every emitted prefix extends to a full tuple.
pub struct GridEnumerator {
    n: usize,
    half_range: i64,
    denominator: i64,
    prefix: Vec<i64>,
    sum: i64,
    started: bool,
    done: bool,
}

impl GridEnumerator {
    /// Feasible values at the current depth are `[window.0, window.1]`:
    /// `c ≥ low`, the remaining `r−1` slots can still reach the target
    /// (`target ≤ c + (r−1)·h`), and they cannot be forced below it
    /// (`r·c ≤ target`).
    fn window(&self, low: i64) -> (i64, i64) {
        let r = (self.n - self.prefix.len()) as i64;
        let target = -self.sum;
        let min = low.max(target - (r - 1) * self.half_range);
        let max = self.half_range.min(target.div_euclid(r));
        (min, max)
    }

    fn low(&self) -> i64 {
        self.prefix.last().copied().unwrap_or(-self.half_range)
    }

    fn push(&mut self, v: i64) {
        self.prefix.push(v);
        self.sum += v;
    }

    fn pop(&mut self) -> i64 {
        let v = self.prefix.pop().expect("pop on nonempty prefix");
        self.sum -= v;
        v
    }

    /// Extend the (feasible) prefix to a full tuple by always taking the
    /// smallest feasible value.
    fn descend(&mut self) {
        while self.prefix.len() < self.n {
            let (min, max) = self.window(self.low());
            debug_assert!(min <= max, "descend called on an infeasible prefix");
            let _ = max;
            self.push(min);
        }
        debug_assert_eq!(self.sum, 0);
    }

    /// Move to the next full tuple, or report exhaustion.
    fn advance(&mut self) -> bool {
        while !self.prefix.is_empty() {
            let c = self.pop();
            let (_, max) = self.window(self.low());
            if c + 1 <= max {
                self.push(c + 1);
                self.descend();
                return true;
            }
        }
        false
    }

    fn emit(&self) -> OrderedZeroSumSequence {
        let values = self
            .prefix
            .iter()
            .map(|&v| Scalar::ratio(v, self.denominator))
            .collect();
        OrderedZeroSumSequence::new(values, &ScalarPolicy::exact())
            .expect("enumerated tuples are sorted with exact zero sum")
    }
}

impl Iterator for GridEnumerator {
    type Item = OrderedZeroSumSequence;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
            return Some(self.emit());
        }
        if self.advance() {
            Some(self.emit())
        } else {
            self.done = true;
            None
        }
    }
}

/// Scan configuration; identical configurations produce identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    pub budget: usize,
    /// Margins below `threshold · scale` count as near-equality.
    pub near_equality_threshold: f64,
    pub seed: u64,
    pub policy: ScalarPolicy,
    /// At most this many near-equality witnesses are shrunk and recorded.
    pub max_recorded_near_equality: usize,
}

impl ScanConfig {
    pub fn new(budget: usize, seed: u64, policy: ScalarPolicy) -> Self {
        ScanConfig {
            budget,
            near_equality_threshold: 1e-6,
            seed,
            policy,
            max_recorded_near_equality: 25,
        }
    }
}

/// The smallest margin seen and where.
#[derive(Debug, Clone, Serialize)]
pub struct MarginWitness {
    pub margin: Scalar,
    pub alpha: Vec<Scalar>,
    pub phi_index: usize,
}

/// An apparent violation together with its exact re-evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationRecord {
    pub alpha: Vec<Scalar>,
    pub phi_index: usize,
    /// Margin as originally evaluated.
    pub observed_margin: Scalar,
    /// Exact margin of the rationalized instance (rational-closed φ only).
    pub exact_margin: Option<Scalar>,
    /// Exact stop-loss dominance of the rationalized split parts.
    pub exact_dominance: bool,
}

/// A shrunk small instance whose margin sits near zero.
#[derive(Debug, Clone, Serialize)]
pub struct NearEqualityRecord {
    pub alpha: Vec<Scalar>,
    pub phi_index: usize,
    pub margin: Scalar,
    pub original_len: usize,
}

/// Scan outcome. Violations are exact-confirmed only; float near-zero
/// negatives appear as `tolerance_events`.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub instances_tested: usize,
    pub pairs_evaluated: usize,
    pub seed: u64,
    pub min_margin: Option<MarginWitness>,
    pub violations: Vec<ViolationRecord>,
    pub tolerance_events: usize,
    pub near_equality_count: usize,
    pub shrunk_near_equality: Vec<NearEqualityRecord>,
}

/// Exact re-evaluation of an apparent violation: rationalize, recenter
/// exactly, then judge by exact margin (when available) and by exact
/// dominance of the split parts.
fn escalate(
    seq: &OrderedZeroSumSequence,
    phi: &OddConvexCombination,
) -> (Option<Scalar>, bool, Vec<Scalar>) {
    let exact_values: Vec<Scalar> = seq
        .values()
        .iter()
        .map(|v| {
            if v.is_exact() {
                v.clone()
            } else {
                Scalar::rationalize(v.to_f64()).expect("finite instance values")
            }
        })
        .collect();
    let exact_seq = OrderedZeroSumSequence::recentered(exact_values, &ScalarPolicy::exact())
        .expect("rationalized values stay sorted and recenter exactly");
    let exact_margin = if phi.is_rational_closed() {
        Some(theorem_sum(&exact_seq, phi))
    } else {
        None
    };
    let (p, q) = exact_seq.split_instance();
    let dominance = dominates(&p, &q, &ScalarPolicy::exact()).dominates;
    (exact_margin, dominance, exact_seq.values().to_vec())
}

fn is_near_equality(margin: &Scalar, scale: &Scalar, threshold: f64) -> bool {
    margin.to_f64() < threshold * scale.to_f64()
}

/// Shrink a near-equality witness: drop the outermost pair and recenter
/// while the margin stays below the threshold.
fn shrink_near_equality(
    seq: &OrderedZeroSumSequence,
    phi: &OddConvexCombination,
    threshold: f64,
    policy: &ScalarPolicy,
) -> OrderedZeroSumSequence {
    let mut current = seq.clone();
    while current.len() > 2 {
        let inner = current.values()[1..current.len() - 1].to_vec();
        let candidate = match OrderedZeroSumSequence::recentered(inner, policy) {
            Ok(c) => c,
            Err(_) => break,
        };
        let margin = theorem_sum(&candidate, phi);
        let scale = theorem_scale(&candidate, phi);
        if policy.certify_nonneg(&margin, &scale) && is_near_equality(&margin, &scale, threshold) {
            current = candidate;
        } else {
            break;
        }
    }
    current
}

#[derive(Default)]
struct ScanAccum {
    min: Option<(usize, Scalar, usize)>, // (pair index, margin, phi index)
    violations: Vec<(usize, ViolationRecord)>,
    tolerance_events: usize,
    near_equality: Vec<usize>,
}

impl ScanAccum {
    fn merge(mut self, other: ScanAccum) -> ScanAccum {
        self.min = match (self.min, other.min) {
            (None, m) | (m, None) => m,
            (Some(a), Some(b)) => {
                // Min by margin, smallest pair index on ties, so the merge
                // is associative and independent of scheduling.
                let pick_b = match b.1.total_cmp(&a.1) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => b.0 < a.0,
                    std::cmp::Ordering::Greater => false,
                };
                Some(if pick_b { b } else { a })
            }
        };
        self.violations.extend(other.violations);
        self.tolerance_events += other.tolerance_events;
        self.near_equality.extend(other.near_equality);
        self
    }
}

/// Evaluate the inequality for every `(instance, φ)` pair up to `budget`
/// pairs, in parallel with a deterministic merge.
pub fn scan<I>(
    instances: I,
    phis: &[OddConvexCombination],
    config: &ScanConfig,
) -> ScanReport
where
    I: IntoIterator<Item = OrderedZeroSumSequence>,
{
    assert!(!phis.is_empty(), "scan needs at least one function");
    let needed = config.budget.div_ceil(phis.len());
    let pool: Vec<OrderedZeroSumSequence> = instances.into_iter().take(needed).collect();
    let pairs = config.budget.min(pool.len() * phis.len());

    let accum = (0..pairs)
        .into_par_iter()
        .fold(ScanAccum::default, |mut acc, pair_idx| {
            let seq = &pool[pair_idx / phis.len()];
            let phi_index = pair_idx % phis.len();
            let phi = &phis[phi_index];
            let margin = theorem_sum(seq, phi);
            let scale = theorem_scale(seq, phi);

            if !config.policy.certify_nonneg(&margin, &scale) {
                let (exact_margin, exact_dominance, exact_alpha) = escalate(seq, phi);
                let confirmed = match &exact_margin {
                    Some(m) => m.is_negative(),
                    None => !exact_dominance,
                };
                if confirmed {
                    acc.violations.push((
                        pair_idx,
                        ViolationRecord {
                            alpha: exact_alpha,
                            phi_index,
                            observed_margin: margin.clone(),
                            exact_margin,
                            exact_dominance,
                        },
                    ));
                } else {
                    acc.tolerance_events += 1;
                }
            } else if is_near_equality(&margin, &scale, config.near_equality_threshold) {
                acc.near_equality.push(pair_idx);
            }

            let better = match &acc.min {
                None => true,
                Some((idx, best, _)) => match margin.total_cmp(best) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => pair_idx < *idx,
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                acc.min = Some((pair_idx, margin, phi_index));
            }
            acc
        })
        .reduce(ScanAccum::default, ScanAccum::merge);

    let min_margin = accum.min.map(|(idx, margin, phi_index)| MarginWitness {
        margin,
        alpha: pool[idx / phis.len()].values().to_vec(),
        phi_index,
    });

    let mut violations = accum.violations;
    violations.sort_by_key(|(idx, _)| *idx);
    let violations: Vec<ViolationRecord> = violations.into_iter().map(|(_, v)| v).collect();

    let mut near = accum.near_equality;
    near.sort_unstable();
    let near_equality_count = near.len();
    let shrunk_near_equality: Vec<NearEqualityRecord> = near
        .iter()
        .take(config.max_recorded_near_equality)
        .map(|&pair_idx| {
            let seq = &pool[pair_idx / phis.len()];
            let phi_index = pair_idx % phis.len();
            let shrunk = shrink_near_equality(
                seq,
                &phis[phi_index],
                config.near_equality_threshold,
                &config.policy,
            );
            NearEqualityRecord {
                margin: theorem_sum(&shrunk, &phis[phi_index]),
                alpha: shrunk.values().to_vec(),
                phi_index,
                original_len: seq.len(),
            }
        })
        .collect();

    ScanReport {
        instances_tested: pool.len(),
        pairs_evaluated: pairs,
        seed: config.seed,
        min_margin,
        violations,
        tolerance_events: accum.tolerance_events,
        near_equality_count,
        shrunk_near_equality,
    }
}

/// One probed ratio of the truncated-sum comparison.
#[derive(Debug, Clone, Serialize)]
pub struct TightnessRow {
    pub alpha: Vec<Scalar>,
    pub threshold: Scalar,
    /// `A / B` — positive-side over negative-side truncated sum.
    pub ratio: Scalar,
    pub case: CertificateCase,
}

/// Smallest observed `A/B` ratios per proof case. Exploratory: the only
/// guaranteed bound is `ratio ≥ 1`.
#[derive(Debug, Clone, Serialize)]
pub struct TightnessReport {
    pub probes_total: usize,
    pub probes_with_positive_lower_sum: usize,
    pub smallest_small_case: Vec<TightnessRow>,
    pub smallest_large_case: Vec<TightnessRow>,
}

const TIGHTNESS_ROWS_KEPT: usize = 10;

/// Probe `A/B` ratios over exhaustive small grids and seeded random
/// instances for every `n ≤ n_max` and every threshold in `t_grid`.
pub fn tightness_probe(n_max: usize, t_grid: &[Scalar], seed: u64) -> TightnessReport {
    let mut rows: Vec<TightnessRow> = Vec::new();
    let mut probes_total = 0usize;

    let mut probe = |seq: &OrderedZeroSumSequence, rows: &mut Vec<TightnessRow>| {
        for t in t_grid {
            probes_total += 1;
            let cert = match certify_lemma1(seq, t) {
                Ok(c) => c,
                Err(_) => continue,
            };
            if cert.negative_stop_loss.is_zero() {
                continue; // ratio undefined when B = 0
            }
            rows.push(TightnessRow {
                alpha: seq.values().to_vec(),
                threshold: t.clone(),
                ratio: &cert.positive_stop_loss / &cert.negative_stop_loss,
                case: cert.case,
            });
        }
    };

    for n in 2..=n_max {
        if n <= 5 {
            if let Ok(grid) = exhaustive_grid(n, 2, 1) {
                for seq in grid {
                    probe(&seq, &mut rows);
                }
            }
        }
        let dist = Distribution::UniformGridRational {
            half_range: 8,
            denominator: 2,
        };
        for i in 0..40u64 {
            let instance_seed = seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((n as u64) << 16)
                .wrapping_add(i);
            let seq = random_instance(n, instance_seed, &dist);
            probe(&seq, &mut rows);
        }
    }

    let probes_with_positive_lower_sum = rows.len();
    let mut small: Vec<TightnessRow> = rows
        .iter()
        .filter(|r| r.case == CertificateCase::SmallN)
        .cloned()
        .collect();
    let mut large: Vec<TightnessRow> = rows
        .into_iter()
        .filter(|r| r.case == CertificateCase::LargeN)
        .collect();
    small.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
    large.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
    small.truncate(TIGHTNESS_ROWS_KEPT);
    large.truncate(TIGHTNESS_ROWS_KEPT);

    TightnessReport {
        probes_total,
        probes_with_positive_lower_sum,
        smallest_small_case: small,
        smallest_large_case: large,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_centers_to_zero() {
        for dist in [Distribution::grid_default(), Distribution::real_default()] {
            let seq = random_instance(1, 7, &dist);
            assert_eq!(seq.len(), 1);
            assert!(seq.values()[0].is_zero() || seq.values()[0].to_f64().abs() < 1e-15);
        }
    }

    #[test]
    fn random_instances_are_deterministic() {
        for dist in [Distribution::grid_default(), Distribution::real_default()] {
            let a = random_instance(9, 42, &dist);
            let b = random_instance(9, 42, &dist);
            assert_eq!(a, b);
            let c = random_instance(9, 43, &dist);
            assert!(a != c || a.is_all_zero());
        }
    }

    #[test]
    fn grid_instances_are_exact_zero_sum() {
        let seq = random_instance(5, 3, &Distribution::grid_default());
        assert!(seq.values().iter().all(Scalar::is_exact));
        assert!(seq.values().iter().sum::<Scalar>().is_zero());
    }

    #[test]
    fn exhaustive_pairs_in_unit_range() {
        let seqs: Vec<Vec<i64>> = exhaustive_grid(2, 1, 1)
            .unwrap()
            .map(|s| s.values().iter().map(|v| v.to_f64() as i64).collect())
            .collect();
        assert_eq!(seqs, vec![vec![-1, 1], vec![0, 0]]);
    }

    #[test]
    fn exhaustive_singleton() {
        let seqs: Vec<_> = exhaustive_grid(1, 3, 1).unwrap().collect();
        assert_eq!(seqs.len(), 1);
        assert!(seqs[0].is_all_zero());
    }

    #[test]
    fn exhaustive_triples_in_unit_range() {
        // (−1,0,1) and (0,0,0); (−1,−1,2) needs an entry outside the range.
        let count = exhaustive_grid(3, 1, 1).unwrap().count();
        assert_eq!(count, 2);
    }

    #[test]
    fn exhaustive_matches_brute_force_counts() {
        for (n, h) in [(2usize, 3i64), (3, 2), (4, 2), (5, 1)] {
            let fast = exhaustive_grid(n, h, 1).unwrap().count();
            // Odometer over all tuples, filtering sorted zero-sum ones.
            let side = (2 * h + 1) as usize;
            let mut slow = 0usize;
            for code in 0..side.pow(n as u32) {
                let mut c = code;
                let mut tuple = Vec::with_capacity(n);
                for _ in 0..n {
                    tuple.push((c % side) as i64 - h);
                    c /= side;
                }
                if tuple.windows(2).all(|w| w[0] <= w[1])
                    && tuple.iter().sum::<i64>() == 0
                {
                    slow += 1;
                }
            }
            assert_eq!(fast, slow, "n={n} h={h}");
        }
    }

    #[test]
    fn enumeration_budget_guard() {
        assert!(matches!(
            exhaustive_grid(20, 10, 1),
            Err(SearchError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn scan_finds_no_violations_on_exhaustive_grid() {
        let phis = vec![
            OddConvexCombination::monomial(Scalar::one(), 3).unwrap(),
            OddConvexCombination::linear(Scalar::one()).unwrap(),
        ];
        let config = ScanConfig::new(10_000, 0, ScalarPolicy::exact());
        let report = scan(exhaustive_grid(4, 2, 1).unwrap(), &phis, &config);
        assert!(report.violations.is_empty());
        assert_eq!(report.tolerance_events, 0);
        let min = report.min_margin.expect("pairs were evaluated");
        assert!(!min.margin.is_negative());
    }

    #[test]
    fn scan_reports_zero_margin_for_all_zero_generator() {
        let phis = vec![OddConvexCombination::monomial(Scalar::one(), 3).unwrap()];
        let zeros = (0..5).map(|_| {
            OrderedZeroSumSequence::new(
                vec![Scalar::zero(), Scalar::zero()],
                &ScalarPolicy::exact(),
            )
            .unwrap()
        });
        let config = ScanConfig::new(5, 0, ScalarPolicy::exact());
        let report = scan(zeros, &phis, &config);
        let min = report.min_margin.expect("evaluated");
        assert!(min.margin.is_zero());
        assert!(report.violations.is_empty());
    }

    #[test]
    fn scan_is_deterministic() {
        let phis = vec![
            OddConvexCombination::sinh(Scalar::from_int(2)).unwrap(),
            OddConvexCombination::monomial(Scalar::one(), 3).unwrap(),
        ];
        let make = || {
            let instances =
                (0..200).map(|i| random_instance(6, 1000 + i, &Distribution::real_default()));
            scan(instances, &phis, &ScanConfig::new(400, 9, ScalarPolicy::approx()))
        };
        let a = serde_json::to_string(&make()).unwrap();
        let b = serde_json::to_string(&make()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tolerance_events_are_not_violations() {
        // Instances whose sum drifts by ~1e-13 (admissible under the default
        // zero-sum tolerance) have genuinely negative floating-point margins
        // under φ = x. An absurdly tight policy flags them all; exact
        // escalation recenters and must reclassify every one.
        let phis = vec![
            OddConvexCombination::linear(Scalar::one()).unwrap(),
            OddConvexCombination::monomial(Scalar::one(), 3).unwrap(),
        ];
        let instances = (0..10).map(|i| {
            let drift = 1e-13 * (i + 1) as f64;
            OrderedZeroSumSequence::new(
                vec![Scalar::approx(-drift), Scalar::approx(0.0)],
                &ScalarPolicy::approx(),
            )
            .unwrap()
        });
        let policy = ScalarPolicy::approx_with(f64::MIN_POSITIVE, f64::MIN_POSITIVE);
        let config = ScanConfig::new(20, 5, policy);
        let report = scan(instances, &phis, &config);
        assert!(report.violations.is_empty());
        assert_eq!(report.tolerance_events, 20);
        assert!(report.min_margin.unwrap().margin.is_negative());
    }

    #[test]
    fn near_equality_shrinks_toward_small_instances() {
        // Margins of x³ on ±ε instances are tiny relative to threshold 1.0,
        // forcing the shrinker to engage.
        let phis = vec![OddConvexCombination::monomial(Scalar::one(), 3).unwrap()];
        let instances = (0..4).map(|_| {
            OrderedZeroSumSequence::new(
                vec![
                    Scalar::ratio(-1, 10),
                    Scalar::ratio(-1, 10),
                    Scalar::ratio(1, 10),
                    Scalar::ratio(1, 10),
                ],
                &ScalarPolicy::exact(),
            )
            .unwrap()
        });
        let mut config = ScanConfig::new(4, 0, ScalarPolicy::exact());
        config.near_equality_threshold = 1.0;
        let report = scan(instances, &phis, &config);
        assert_eq!(report.near_equality_count, 4);
        assert!(!report.shrunk_near_equality.is_empty());
        for rec in &report.shrunk_near_equality {
            assert!(rec.alpha.len() < 4, "witness should shrink");
            assert!(!rec.margin.is_negative());
        }
    }

    #[test]
    fn tightness_ratios_match_hand_traces() {
        let report = tightness_probe(5, &[Scalar::zero()], 11);
        assert!(report.probes_with_positive_lower_sum > 0);
        for row in report
            .smallest_small_case
            .iter()
            .chain(&report.smallest_large_case)
        {
            assert!(row.ratio >= Scalar::one(), "A/B >= 1 must hold");
        }
        // α = (−2,−1,1,2) at t = 0 has A/B = 11/4 and sits in the small case.
        let target: Vec<Scalar> = [-2, -1, 1, 2].iter().map(|&v| Scalar::from_int(v)).collect();
        let found = report
            .smallest_small_case
            .iter()
            .find(|r| r.alpha == target);
        if let Some(row) = found {
            assert_eq!(row.ratio, Scalar::ratio(11, 4));
        }
    }
}
