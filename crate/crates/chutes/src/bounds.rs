//! Cutoff formulas bounding the largest vertex on length-limited paths.
//!
//! These bounds are what make first-appearance certification feasible: row
//! entries above the bound can be discarded without losing any path short
//! enough to matter. Every formula here rounds up, so a returned cutoff is
//! always safe (a slightly large cutoff only costs time; a small one would
//! silently void certification).

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith;
use crate::paths::ProblemParams;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("step budget must be at least 2, got {0}")]
    StepBudgetTooSmall(u64),
    #[error("half-length must be at least 1")]
    HalfLengthZero,
}

/// A bound request: paths from `x` to `y` of length at most `2 * half_length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    pub x: BigUint,
    pub y: BigUint,
    pub half_length: u64,
    pub params: ProblemParams,
}

impl BoundQuery {
    pub fn new(
        x: BigUint,
        y: BigUint,
        half_length: u64,
        params: ProblemParams,
    ) -> Result<Self, BoundsError> {
        if half_length < 1 {
            return Err(BoundsError::HalfLengthZero);
        }
        Ok(Self {
            x,
            y,
            half_length,
            params,
        })
    }
}

/// Largest endpoint `n^2` of a belt between adjacent squares `(n-gap)^2`
/// and `n^2`, subject to `steps = (2/5) * gap * (2n - gap) < budget`,
/// `n = residue (mod 5)` and `n - gap >= 2`. `None` when no such belt fits.
fn max_adjacent_square_endpoint(gap: u64, residue: u64, budget: u64) -> Option<u64> {
    // 2*gap*(2n - gap) <= 5*budget - 1  =>  n <= (5*budget - 1 + 2*gap^2) / (4*gap)
    let n_hi = (5 * budget - 1 + 2 * gap * gap) / (4 * gap);
    if n_hi < gap + 2 {
        return None;
    }
    let n = n_hi - ((n_hi + 5 - residue % 5) % 5);
    if n < gap + 2 {
        return None;
    }
    Some(n * n)
}

/// Largest possible endpoints of square-to-square belts of fewer than
/// `step_budget` steps in the `d=5, e=2` graph, split by the residue class
/// of the endpoint: `(bound for class 1, bound for class 4)`.
///
/// Squares in the graph are congruent to 1 or 4 modulo 5. A class-1 belt
/// ends at `n^2` with `n = 1` or `n = 4 (mod 5)` (adjacent-square gaps 2
/// and 3); a class-4 belt ends with `n = 3` or `n = 2 (mod 5)` (gaps 1 and
/// 4). A class with no belt inside the budget reports 0.
pub fn belt_endpoint_bound(step_budget: u64) -> Result<(u64, u64), BoundsError> {
    if step_budget < 2 {
        return Err(BoundsError::StepBudgetTooSmall(step_budget));
    }
    let class1 = [
        max_adjacent_square_endpoint(2, 1, step_budget),
        max_adjacent_square_endpoint(3, 4, step_budget),
    ];
    let class4 = [
        max_adjacent_square_endpoint(1, 3, step_budget),
        max_adjacent_square_endpoint(4, 2, step_budget),
    ];
    let best = |cases: [Option<u64>; 2]| cases.into_iter().flatten().max().unwrap_or(0);
    Ok((best(class1), best(class4)))
}

/// Bound on the largest vertex of a `d=5, e=2` path of length at most
/// `2 * half_length` whose maximum sits at least two steps away from both
/// endpoints: `ceil((5l + 1)^4 / 16)` with `l` clamped up to 3 (paths
/// shorter than 6 steps are still covered by the length-6 bound).
pub fn interior_max_bound(half_length: u64) -> BigUint {
    let l = half_length.max(3);
    let fourth = BigUint::from(5 * l + 1).pow(4);
    (fourth + 15u32) / 16u32
}

/// Bound on the largest vertex of any `d=5, e=2` path from `x` to `y` of
/// length at most `2 * half_length`: the interior bound unless the maximum
/// is attained next to an endpoint, in which case `(x+5)^2` or `y^2` wins.
///
/// Panics when called with parameters other than `d=5, e=2`; use
/// [`general_path_max_bound`] for other instances.
pub fn path_max_bound(query: &BoundQuery) -> BigUint {
    putnam_bound_branches(query).max
}

/// The individual branches behind [`path_max_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PutnamBoundBranches {
    pub interior: BigUint,
    pub start_step: BigUint,
    pub end_step: BigUint,
    pub max: BigUint,
}

pub fn putnam_bound_branches(query: &BoundQuery) -> PutnamBoundBranches {
    assert!(
        query.params.d() == 5 && query.params.e() == 2,
        "path_max_bound is specific to d=5, e=2"
    );
    let interior = interior_max_bound(query.half_length);
    let start_step = (&query.x + 5u32).pow(2);
    let end_step = query.y.pow(2);
    let max = interior
        .clone()
        .max(start_step.clone())
        .max(end_step.clone());
    PutnamBoundBranches {
        interior,
        start_step,
        end_step,
        max,
    }
}

/// The individual branches behind [`general_path_max_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralBoundBranches {
    /// Peak whose belt crosses a lesser `e`-th power:
    /// `(1 + ceil((d*l/e)^(1/(e-1))))^(e^2)`.
    pub belt_through_power: BigUint,
    /// Peak whose belt avoids lesser `e`-th powers:
    /// `ceil((d*l * 2^(e-1) / (2^(e-1) - 1))^e)`.
    pub belt_without_power: BigUint,
    /// Maximum attained on the first up-step: `(x+d)^e`.
    pub start_step: BigUint,
    /// Maximum attained just before the final down-step: `y^e`.
    pub end_step: BigUint,
    pub max: BigUint,
}

pub fn general_bound_branches(query: &BoundQuery) -> GeneralBoundBranches {
    let d = query.params.d();
    let e = query.params.e();
    let l = query.half_length;

    // branch 1: smallest integer t with t^(e-1) >= ceil(d*l/e), then (1+t)^(e^2)
    let target = BigUint::from((d as u128 * l as u128).div_ceil(e as u128));
    let mut t = if e == 2 {
        target.clone() // root exponent e-1 = 1
    } else {
        arith::integer_root(&target, e - 1)
    };
    while t.pow(e - 1) < target {
        t += 1u32;
    }
    let belt_through_power = (t + 1u32).pow(e * e);

    // branch 2: ceil((d*l * 2^(e-1) / (2^(e-1) - 1))^e), exact rational
    let pow2 = BigUint::from(2u32).pow(e - 1);
    let numerator = (BigUint::from(d) * l * &pow2).pow(e);
    let denominator = (pow2 - 1u32).pow(e);
    let belt_without_power = (&numerator + &denominator - 1u32) / &denominator;

    let start_step = (&query.x + d).pow(e);
    let end_step = query.y.pow(e);
    let max = belt_through_power
        .clone()
        .max(belt_without_power.clone())
        .max(start_step.clone())
        .max(end_step.clone());
    GeneralBoundBranches {
        belt_through_power,
        belt_without_power,
        start_step,
        end_step,
        max,
    }
}

/// Bound on the largest vertex of any path from `x` to `y` of length at
/// most `2 * half_length`, valid for every instance. Coarser than
/// [`path_max_bound`] on `d=5, e=2` but never smaller than the true bound;
/// all rounding is upward.
pub fn general_path_max_bound(query: &BoundQuery) -> BigUint {
    general_bound_branches(query).max
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn putnam_query(x: u64, y: u64, half_length: u64) -> BoundQuery {
        BoundQuery::new(big(x), big(y), half_length, ProblemParams::putnam()).unwrap()
    }

    #[test]
    fn belt_bound_at_150_steps() {
        assert_eq!(belt_endpoint_bound(150).unwrap(), (91 * 91, 183 * 183));
    }

    #[test]
    fn belt_bound_runner_up_is_dominated() {
        // within class 1 the gap-3 case tops out at n = 59, below 91^2
        assert_eq!(max_adjacent_square_endpoint(3, 4, 150), Some(59 * 59));
        assert_eq!(max_adjacent_square_endpoint(2, 1, 150), Some(91 * 91));
        // within class 4 the gap-4 case tops out at n = 47, below 183^2
        assert_eq!(max_adjacent_square_endpoint(4, 2, 150), Some(47 * 47));
        assert_eq!(max_adjacent_square_endpoint(1, 3, 150), Some(183 * 183));
    }

    #[test]
    fn belt_bound_rejects_tiny_budget() {
        assert_eq!(
            belt_endpoint_bound(1),
            Err(BoundsError::StepBudgetTooSmall(1))
        );
    }

    /// Exhaustive oracle: every square-to-square belt `m^2 -> n^2` with
    /// `m >= 2`, endpoints below `limit^2` and fewer than `budget` steps.
    fn enumerate_belt_endpoints(budget: u64, limit: u64) -> (u64, u64) {
        let mut best = [0u64, 0u64]; // class 1, class 4
        for n in 3..=limit {
            if n % 5 == 0 {
                continue;
            }
            let class = (n * n) % 5;
            for m in 2..n {
                if m % 5 == 0 || (m * m) % 5 != class {
                    continue;
                }
                let steps = 2 * (n * n - m * m) / 5;
                if steps >= 2 && steps < budget {
                    let slot = if class == 1 { 0 } else { 1 };
                    best[slot] = best[slot].max(n * n);
                }
            }
        }
        (best[0], best[1])
    }

    #[test]
    fn belt_bound_matches_enumeration() {
        for budget in [2u64, 3, 5, 10, 20, 50, 100, 150] {
            assert_eq!(
                belt_endpoint_bound(budget).unwrap(),
                enumerate_belt_endpoints(budget, 200),
                "budget {budget}"
            );
        }
    }

    #[test]
    fn interior_bound_values() {
        assert_eq!(interior_max_bound(75), big(188).pow(4));
        assert_eq!(interior_max_bound(75), big(1_249_198_336));
        assert_eq!(interior_max_bound(3), big(4096));
        assert_eq!(interior_max_bound(1), big(4096)); // clamped to l = 3
    }

    #[test]
    fn path_bound_examples() {
        assert_eq!(path_max_bound(&putnam_query(2, 99, 75)), big(188).pow(4));
        assert_eq!(
            path_max_bound(&putnam_query(1_000_000, 2, 3)),
            big(1_000_005).pow(2)
        );
        assert_eq!(
            path_max_bound(&putnam_query(2, 1_000_000, 3)),
            big(1_000_000).pow(2)
        );
    }

    #[test]
    fn general_bound_worked_example() {
        let q = BoundQuery::new(big(2), big(7), 50, ProblemParams::new(17, 4, 2).unwrap()).unwrap();
        let branches = general_bound_branches(&q);
        assert_eq!(branches.belt_through_power, big(7).pow(16));
        assert_eq!(branches.belt_through_power, big(33_232_930_569_601));
        assert_eq!(branches.start_step, big(130_321));
        assert_eq!(branches.end_step, big(2401));
        assert_eq!(general_path_max_bound(&q), big(7).pow(16));
    }

    #[test]
    fn general_bound_putnam_instance() {
        let q = putnam_query(2, 99, 75);
        let branches = general_bound_branches(&q);
        assert_eq!(branches.belt_through_power, big(189).pow(4));
        assert_eq!(branches.belt_without_power, big(562_500));
        assert_eq!(general_path_max_bound(&q), big(189).pow(4));
    }

    #[test]
    fn general_bound_start_dominates() {
        let q = putnam_query(1_000_000_000, 2, 1);
        assert_eq!(general_path_max_bound(&q), big(1_000_000_005).pow(2));
    }

    #[test]
    fn bounds_monotone_in_each_argument() {
        let mut prev = BigUint::from(0u32);
        for l in 1..40 {
            let b = path_max_bound(&putnam_query(2, 9, l));
            assert!(b >= prev);
            prev = b;
        }
        for (xs, ys) in [([2u64, 7, 30, 1000], [9u64, 9, 9, 9])] {
            let mut prev = BigUint::from(0u32);
            for (&x, &y) in xs.iter().zip(ys.iter()) {
                let b = path_max_bound(&putnam_query(x, y, 5));
                assert!(b >= prev);
                prev = b;
            }
        }
        let mut prev = BigUint::from(0u32);
        for y in [2u64, 9, 100, 5000] {
            let b = general_path_max_bound(&putnam_query(2, y, 5));
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn general_bound_never_below_specialized() {
        // the specialized bound clamps l below 3 upward (covering length-6
        // paths), so the comparison only makes sense from l = 3 on
        for l in [3u64, 4, 10, 75] {
            for (x, y) in [(2u64, 3u64), (2, 99), (7, 44), (100, 2)] {
                let q = putnam_query(x, y, l);
                assert!(
                    general_path_max_bound(&q) >= path_max_bound(&q),
                    "x={x} y={y} l={l}"
                );
            }
        }
    }

    #[test]
    fn half_length_must_be_positive() {
        assert_eq!(
            BoundQuery::new(big(2), big(3), 0, ProblemParams::putnam()),
            Err(BoundsError::HalfLengthZero)
        );
    }
}
