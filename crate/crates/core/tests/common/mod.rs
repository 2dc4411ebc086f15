#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplex_proj::RealVector;

pub const EXAMPLE_ROW: [f64; 8] = [
    0.947127, 0.051650, 0.001145, 0.000140, 0.000000, -0.000005, -0.000006, -0.000050,
];
pub const EXAMPLE_X: [f64; 8] = [
    0.9471115, 0.0516345, 0.0011295, 0.0001245, 0.0, 0.0, 0.0, 0.0,
];
pub const EXAMPLE_S: [f64; 8] = [
    0.0, 0.895477, 0.996487, 0.999502, 1.000062, 1.000087, 1.000093, 1.000401,
];
pub const EXAMPLE_SHIFT: f64 = -1.55e-5;
pub const EXAMPLE_DISTANCE: f64 = 3.522e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vector(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> RealVector {
    RealVector::new((0..n).map(|_| rng.random_range(lo..=hi)).collect()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
}

pub fn permute(a: &[f64], sigma: &[usize]) -> Vec<f64> {
    sigma.iter().map(|&i| a[i]).collect()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
