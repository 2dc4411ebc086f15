//! Exact Euclidean projection onto the scaled simplex
//! `{x : sum(x) = t, x >= 0}` by sort and threshold.
//!
//! The pipeline is:
//!
//! 1. [`sort_descending`] orders the point, remembering the permutation.
//! 2. [`gap_sequence`] builds `S_m = sum_{i<=m} (a_i - a_m)` with the
//!    recursion `S_m = S_{m-1} + (m-1)(a_{m-1} - a_m)`, `S_1 = 0`, plus
//!    compensated prefix sums of the sorted values.
//! 3. [`find_support_size`] picks the largest `m` with `S_m <= t`.
//! 4. [`compute_shift`] gives the common shift `lambda = (t - P_m) / m`.
//! 5. [`assemble_projection`] sets `x_i = a_i + lambda` on the first `m`
//!    sorted coordinates, zero elsewhere, and undoes the permutation.
//!
//! [`objective_sequence`] evaluates the squared distance of each candidate
//! support size through its own recursion. It is diagnostic only.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Half-width, in units of machine epsilon, of the window below zero that is
/// snapped to exactly zero when assembling a projection.
pub const CLAMP_ULPS: f64 = 16.0;

/// A non-empty vector of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(check_values(&values).is_ok());
        Self(values)
    }
}

pub(crate) fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

impl Deref for RealVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for RealVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl TryFrom<&[f64]> for RealVector {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Self {
        v.0
    }
}

/// The required coordinate sum of the simplex. Finite and strictly positive;
/// defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TargetSum(f64);

impl TargetSum {
    pub const ONE: TargetSum = TargetSum(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidTargetSum(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for TargetSum {
    fn default() -> Self {
        Self::ONE
    }
}

impl TryFrom<f64> for TargetSum {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// A descending copy of a point together with the permutation that produced it.
///
/// `perm[k]` is the original index of the `k`-th largest value and
/// `inv_perm[i]` the sorted position of original index `i` (both zero-based).
/// Equal values keep their original relative order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedView {
    sorted: Vec<f64>,
    perm: Vec<usize>,
    inv_perm: Vec<usize>,
}

impl SortedView {
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inv_perm(&self) -> &[usize] {
        &self.inv_perm
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Scatter a vector given in sorted order back to the original order.
    pub fn unsort(&self, in_sorted_order: &[f64]) -> Vec<f64> {
        assert_eq!(in_sorted_order.len(), self.len());
        self.inv_perm.iter().map(|&k| in_sorted_order[k]).collect()
    }
}

/// The gap sequence `S_1..S_n` and prefix sums `P_1..P_n` of a sorted point.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSequence {
    s: Vec<f64>,
    prefix: Vec<f64>,
}

impl GapSequence {
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// Output of [`project`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// The projection, in the original coordinate order.
    pub x: RealVector,
    /// Number of leading sorted coordinates that received the shift (`m*`).
    pub support_size: usize,
    /// The common shift `lambda*` applied on the support.
    pub shift: f64,
    /// `m* lambda*^2 + sum of squares of the coordinates outside the support`.
    pub squared_distance: f64,
    /// Sorted position to original index, as in [`SortedView::perm`].
    pub perm: Vec<usize>,
}

impl ProjectionResult {
    /// Number of strictly positive coordinates of `x`.
    pub fn positive_count(&self) -> usize {
        self.x.iter().filter(|&&v| v > 0.0).count()
    }
}

pub fn sort_descending(a: &RealVector) -> SortedView {
    sort_values(a)
}

/// Maps a finite `f64` to a `u64` whose ascending order is the descending
/// order of the value. `-0.0` and `0.0` map to the same key, which decodes
/// to `0.0`.
#[inline]
fn descending_key(v: f64) -> u64 {
    let bits = (v + 0.0).to_bits();
    let ascending = if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    };
    !ascending
}

#[inline]
fn value_from_key(key: u64) -> f64 {
    let ascending = !key;
    let bits = if ascending >> 63 == 1 {
        ascending & !(1 << 63)
    } else {
        !ascending
    };
    f64::from_bits(bits)
}

/// `(key, original index)` records in descending value order.
fn sorted_records(a: &[f64]) -> Vec<(u64, usize)> {
    let mut keyed: Vec<(u64, usize)> = a.iter().map(|&v| descending_key(v)).zip(0..).collect();
    // Ties in the key are broken by original index, the order a stable sort
    // would give.
    keyed.sort_unstable();
    keyed
}

pub(crate) fn sort_values(a: &[f64]) -> SortedView {
    let keyed = sorted_records(a);
    let n = a.len();
    let mut sorted = Vec::with_capacity(n);
    let mut perm = Vec::with_capacity(n);
    let mut inv_perm = vec![0; n];
    for (k, (key, index)) in keyed.into_iter().enumerate() {
        sorted.push(value_from_key(key));
        perm.push(index);
        inv_perm[index] = k;
    }
    SortedView {
        sorted,
        perm,
        inv_perm,
    }
}

pub fn gap_sequence(sv: &SortedView) -> GapSequence {
    let a = &sv.sorted;
    let n = a.len();
    let mut s = Vec::with_capacity(n);
    let mut prefix = Vec::with_capacity(n);

    let mut acc = CompensatedSum::new();
    let mut gap = 0.0;
    for (m, &value) in a.iter().enumerate() {
        if m > 0 {
            // Both factors are non-negative, so the sequence is monotone in
            // floating point as well.
            gap += m as f64 * (a[m - 1] - value);
        }
        s.push(gap);
        acc.add(value);
        prefix.push(acc.value());
    }
    GapSequence { s, prefix }
}

/// Largest `m` (one-based) with `S_m <= target_sum`.
///
/// Always at least 1, since `S_1 = 0`.
pub fn find_support_size(g: &GapSequence, target_sum: TargetSum) -> usize {
    let t = target_sum.value();
    // `s` is non-decreasing, so the entries satisfying `S_m <= t` form a prefix.
    g.s.partition_point(|&s| s <= t).max(1)
}

/// The shift `lambda = (t - P_m) / m` for support size `m` (one-based).
pub fn compute_shift(g: &GapSequence, support_size: usize, target_sum: TargetSum) -> Result<f64> {
    let n = g.len();
    if support_size == 0 || support_size > n {
        return Err(Error::SupportSizeOutOfRange {
            size: support_size,
            len: n,
        });
    }
    let shift = (target_sum.value() - g.prefix[support_size - 1]) / support_size as f64;
    if shift.is_finite() {
        Ok(shift)
    } else {
        Err(Error::Overflow)
    }
}

pub fn project(a: &RealVector) -> Result<ProjectionResult> {
    project_onto(a, TargetSum::ONE)
}

pub fn project_onto(a: &RealVector, target_sum: TargetSum) -> Result<ProjectionResult> {
    project_values(a, target_sum)
}

/// Projection of a slice already known to be non-empty and finite.
///
/// Performs the same arithmetic as `sort_descending`, `gap_sequence`,
/// `find_support_size` and `assemble_projection` in sequence, but walks the
/// gap recursion only until it first exceeds the target and never
/// materializes the sorted view or the full sequences.
pub(crate) fn project_values(a: &[f64], target_sum: TargetSum) -> Result<ProjectionResult> {
    let t = target_sum.value();
    let records = sorted_records(a);
    let n = records.len();
    let value = |k: usize| value_from_key(records[k].0);

    let mut prefix = CompensatedSum::new();
    prefix.add(value(0));
    let mut gap = 0.0;
    let mut support_size = n;
    for m in 1..n {
        gap += m as f64 * (value(m - 1) - value(m));
        if gap > t {
            support_size = m;
            break;
        }
        prefix.add(value(m));
    }
    let shift = (t - prefix.value()) / support_size as f64;
    if !shift.is_finite() {
        return Err(Error::Overflow);
    }

    let mut x = vec![0.0; n];
    if n == 1 {
        x[0] = t;
    } else {
        for &(key, index) in &records[..support_size] {
            x[index] = clamp_coordinate(value_from_key(key), shift, index)?;
        }
    }
    let squared_distance = squared_distance_from_tail(
        records[support_size..]
            .iter()
            .map(|&(key, _)| value_from_key(key)),
        support_size,
        shift,
    );
    Ok(ProjectionResult {
        x: RealVector::from_vec_unchecked(x),
        support_size,
        shift,
        squared_distance,
        perm: records.iter().map(|&(_, index)| index).collect(),
    })
}

/// Build the projection candidate for a given support size.
///
/// With `m*` from [`find_support_size`] this is the projection. Other support
/// sizes are accepted so that callers can compare equivalent choices when
/// `S_m` hits the target exactly.
pub fn assemble_projection(
    sv: &SortedView,
    g: &GapSequence,
    support_size: usize,
    target_sum: TargetSum,
) -> Result<ProjectionResult> {
    let (x, shift, squared_distance) = assemble(sv, g, support_size, target_sum)?;
    Ok(ProjectionResult {
        x,
        support_size,
        shift,
        squared_distance,
        perm: sv.perm.clone(),
    })
}

fn assemble(
    sv: &SortedView,
    g: &GapSequence,
    support_size: usize,
    target_sum: TargetSum,
) -> Result<(RealVector, f64, f64)> {
    let n = sv.len();
    let shift = compute_shift(g, support_size, target_sum)?;

    let mut x = vec![0.0; n];
    if n == 1 {
        x[0] = target_sum.value();
    } else {
        for (&a, &index) in sv.sorted.iter().zip(&sv.perm).take(support_size) {
            x[index] = clamp_coordinate(a, shift, index)?;
        }
    }

    let squared_distance = squared_distance_from_tail(
        sv.sorted[support_size..].iter().copied(),
        support_size,
        shift,
    );
    Ok((RealVector::from_vec_unchecked(x), shift, squared_distance))
}

/// `a + shift`, with values just below zero from rounding snapped to zero.
#[inline]
fn clamp_coordinate(a: f64, shift: f64, index: usize) -> Result<f64> {
    let v = a + shift;
    if v >= 0.0 {
        Ok(v)
    } else if v >= -CLAMP_ULPS * f64::EPSILON * a.abs().max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::ClampViolation { index, value: v })
    }
}

fn squared_distance_from_tail(
    tail: impl Iterator<Item = f64>,
    support_size: usize,
    shift: f64,
) -> f64 {
    let mut acc = CompensatedSum::new();
    for a in tail {
        acc.add_square(a);
    }
    let (sq, sq_lo) = crate::sum::two_product(shift, shift);
    let m = support_size as f64;
    acc.add(m * sq);
    acc.add(m * sq_lo);
    acc.value()
}

/// `m* lambda*^2 + sum_{k > m*} sorted_k^2`, evaluated from the original
/// point and a projection of it.
pub fn squared_distance(a: &RealVector, r: &ProjectionResult) -> Result<f64> {
    if a.len() != r.perm.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: r.perm.len(),
        });
    }
    if r.support_size == 0 || r.support_size > a.len() {
        return Err(Error::SupportSizeOutOfRange {
            size: r.support_size,
            len: a.len(),
        });
    }
    let tail = r.perm[r.support_size..].iter().map(|&i| a[i]);
    Ok(squared_distance_from_tail(tail, r.support_size, r.shift))
}

/// `f(1)..f(n)`: the squared distance to the simplex restricted to each
/// support size, via `f(m) = f(m-1) - (t - S_m)^2 / (m(m-1))`.
///
/// `f(1) = (t - a_1)^2 + sum_{i>1} a_i^2`, which expands to
/// `t^2 - 2 t a_1 + sum a_i^2`; the factored form avoids cancellation.
pub fn objective_sequence(sv: &SortedView, g: &GapSequence, target_sum: TargetSum) -> Vec<f64> {
    let t = target_sum.value();
    let a = &sv.sorted;
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut acc = CompensatedSum::new();
    acc.add_square(t - a[0]);
    for &v in &a[1..] {
        acc.add_square(v);
    }
    let mut f = Vec::with_capacity(n);
    let mut current = acc.value();
    f.push(current);
    for m in 2..=n {
        let r = t - g.s[m - 1];
        let mf = m as f64;
        current -= r * r / (mf * (mf - 1.0));
        f.push(current);
    }
    f
}
