//! Compensated summation built on error-free transformations.
//!
//! [`CompensatedSum`] keeps the running sum as an unevaluated pair
//! `hi + lo`, where `hi` is the ordinary floating-point sum and `lo`
//! accumulates the exact rounding error of every addition (Neumaier's
//! variant of Kahan summation). Squares are added with their `fma`-recovered
//! rounding error as well, so sums of squares keep the same accuracy.

/// Error-free addition: returns `(s, e)` with `s = fl(a + b)` and
/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let b_virtual = s - a;
    let a_virtual = s - b_virtual;
    let e = (a - a_virtual) + (b - b_virtual);
    (s, e)
}

/// Error-free multiplication via fused multiply-add.
#[inline]
pub fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    hi: f64,
    lo: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    #[inline]
    pub fn add_square(&mut self, x: f64) {
        let (p, e) = two_product(x, x);
        self.add(p);
        self.lo += e;
    }

    /// The rounded value of the compensated sum.
    #[inline]
    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }

    /// The unevaluated pair `(hi, lo)`.
    #[inline]
    pub fn parts(&self) -> (f64, f64) {
        (self.hi, self.lo)
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

pub fn sum_of_squares(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in values {
        acc.add_square(x);
    }
    acc.value()
}
