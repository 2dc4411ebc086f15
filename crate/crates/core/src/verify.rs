//! Independent checks for simplex projections.
//!
//! [`oracle_project`] solves the projection problem by exhaustive enumeration
//! of supports and does not rely on sorting. [`kkt_check`] certifies a
//! candidate point through the first-order optimality conditions.

use crate::error::{Error, Result};
use crate::simplex::{check_values, RealVector, TargetSum};
use crate::sum::{self, CompensatedSum};

/// Largest dimension accepted by [`oracle_project`] (about 10^6 supports).
pub const ORACLE_MAX_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub x: RealVector,
    /// Original indices of the chosen support, ascending.
    pub support: Vec<usize>,
    pub squared_distance: f64,
}

/// Exhaustive solution of `min ||x - a||^2` over the simplex.
///
/// Every non-empty subset `T` of coordinates yields the candidate
/// `x_i = a_i + (t - sum_{j in T} a_j) / |T|` on `T` and zero elsewhere.
/// Candidates with a negative coordinate are discarded; the remaining one of
/// least squared distance wins, ties broken by the smaller support bitmask.
pub fn oracle_project(a: &RealVector, target_sum: TargetSum) -> Result<OracleResult> {
    let n = a.len();
    if n > ORACLE_MAX_DIM {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    let t = target_sum.value();

    let mut best: Option<(f64, u32, f64)> = None;
    let mut candidate = vec![0.0; n];
    for mask in 1u32..(1u32 << n) {
        let members = || (0..n).filter(move |&i| mask & (1 << i) != 0);
        let size = mask.count_ones() as f64;
        let mut mass = CompensatedSum::new();
        mass.add(t);
        for i in members() {
            mass.add(-a[i]);
        }
        let shift = mass.value() / size;

        let mut feasible = true;
        for (i, slot) in candidate.iter_mut().enumerate() {
            *slot = if mask & (1 << i) != 0 {
                a[i] + shift
            } else {
                0.0
            };
            if *slot < 0.0 {
                feasible = false;
                break;
            }
        }
        if !feasible {
            continue;
        }

        let dist = sum::sum_of_squares(candidate.iter().zip(a.iter()).map(|(x, a)| x - a));
        let better = match best {
            None => true,
            Some((d, m, _)) => (dist, mask) < (d, m),
        };
        if better {
            best = Some((dist, mask, shift));
        }
    }

    // Singletons are always feasible, so some candidate survives.
    let (squared_distance, mask, shift) = best.expect("singleton supports are always feasible");
    let support: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
    let mut x = vec![0.0; n];
    for &i in &support {
        x[i] = a[i] + shift;
    }
    Ok(OracleResult {
        x: RealVector::from_vec_unchecked(x),
        support,
        squared_distance,
    })
}

/// Outcome of [`kkt_check`]. The point is certified when all four flags hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    /// `|sum(x) - t| <= tol`.
    pub feasible_sum: bool,
    /// `x_i >= -tol` for every `i`.
    pub feasible_nonneg: bool,
    /// `|x_i - a_i - lambda| <= tol` on the active set `{x_i > tol}`.
    pub equal_shift_ok: bool,
    /// `a_i + lambda <= tol` off the active set.
    pub inactive_ok: bool,
    /// Mean of `x_i - a_i` over the active set.
    pub lambda_estimate: f64,
    /// Largest deviation seen across all four conditions.
    pub max_violation: f64,
}

impl KktReport {
    pub fn passed(&self) -> bool {
        self.feasible_sum && self.feasible_nonneg && self.equal_shift_ok && self.inactive_ok
    }
}

pub fn kkt_check(a: &[f64], x: &[f64], target_sum: TargetSum, tol: f64) -> Result<KktReport> {
    if a.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: x.len(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    check_values(a)?;
    check_values(x)?;
    let t = target_sum.value();

    let sum_violation = (sum::sum(x.iter().copied()) - t).abs();
    let nonneg_violation = x.iter().fold(0.0f64, |acc, &v| acc.max(-v));

    let mut active = 0usize;
    let mut shift_sum = CompensatedSum::new();
    for (&xi, &ai) in x.iter().zip(a) {
        if xi > tol {
            active += 1;
            shift_sum.add(xi - ai);
        }
    }
    let lambda_estimate = if active > 0 {
        shift_sum.value() / active as f64
    } else {
        // No active coordinates: the largest lambda that keeps every
        // inactive condition tight.
        -a.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };

    let mut shift_violation = 0.0f64;
    let mut inactive_violation = 0.0f64;
    for (&xi, &ai) in x.iter().zip(a) {
        if xi > tol {
            shift_violation = shift_violation.max((xi - ai - lambda_estimate).abs());
        } else {
            inactive_violation = inactive_violation.max(ai + lambda_estimate);
        }
    }

    Ok(KktReport {
        feasible_sum: sum_violation <= tol,
        feasible_nonneg: nonneg_violation <= tol,
        equal_shift_ok: shift_violation <= tol,
        inactive_ok: inactive_violation <= tol,
        lambda_estimate,
        max_violation: sum_violation
            .max(nonneg_violation)
            .max(shift_violation)
            .max(inactive_violation),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[f64]) -> RealVector {
        RealVector::try_from(v).unwrap()
    }

    #[test]
    fn oracle_negative_tail() {
        let r = oracle_project(&rv(&[0.7, 0.3, -0.1]), TargetSum::ONE).unwrap();
        assert_eq!(r.support, vec![0, 1]);
        assert!((r.x[0] - 0.7).abs() < 1e-15);
        assert!((r.x[1] - 0.3).abs() < 1e-15);
        assert_eq!(r.x[2], 0.0);
        assert!((r.squared_distance - 0.01).abs() < 1e-15);
    }

    #[test]
    fn oracle_fixed_point() {
        let r = oracle_project(&rv(&[1.0, 0.0, 0.0]), TargetSum::ONE).unwrap();
        assert_eq!(r.x.as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(r.squared_distance, 0.0);
        // {0} and {0,1}, {0,1,2}, ... all reach distance 0; the smallest mask wins.
        assert_eq!(r.support, vec![0]);
    }

    #[test]
    fn oracle_size_limit() {
        let a = rv(&[0.0; ORACLE_MAX_DIM + 1]);
        assert_eq!(
            oracle_project(&a, TargetSum::ONE),
            Err(Error::TooLarge { n: 21, max: 20 })
        );
    }

    #[test]
    fn kkt_accepts_point_on_simplex() {
        let a = [0.25, 0.25, 0.5];
        let r = kkt_check(&a, &a, TargetSum::ONE, 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(r.lambda_estimate, 0.0);
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn kkt_flags_unequal_shift() {
        let r = kkt_check(&[0.7, 0.3, -0.1], &[0.8, 0.2, 0.0], TargetSum::ONE, 1e-6).unwrap();
        assert!(!r.passed());
        assert!(!r.equal_shift_ok);
        assert!(r.feasible_sum);
        assert!(r.feasible_nonneg);
        assert!((r.max_violation - 0.1).abs() < 1e-12);
    }

    #[test]
    fn kkt_flags_inactive_condition() {
        // x drops the second coordinate although a_2 + lambda > 0.
        let r = kkt_check(&[0.6, 0.4], &[1.0, 0.0], TargetSum::ONE, 1e-9).unwrap();
        assert!(r.equal_shift_ok);
        assert!(!r.inactive_ok);
    }

    #[test]
    fn kkt_flags_infeasible_points() {
        let r = kkt_check(&[0.5, 0.5], &[0.6, 0.6], TargetSum::ONE, 1e-9).unwrap();
        assert!(!r.feasible_sum);
        let r = kkt_check(&[1.2, -0.2], &[1.2, -0.2], TargetSum::ONE, 1e-9).unwrap();
        assert!(!r.feasible_nonneg);
    }

    #[test]
    fn kkt_argument_errors() {
        assert_eq!(
            kkt_check(&[1.0], &[1.0, 0.0], TargetSum::ONE, 1e-9),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            kkt_check(&[1.0], &[1.0], TargetSum::ONE, 0.0),
            Err(Error::InvalidTolerance(0.0))
        );
    }
}
