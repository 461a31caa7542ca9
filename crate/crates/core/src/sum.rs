//! Compensated accumulation.
//!
//! Pair sums in this crate are specified to be bit-stable across thread
//! counts: partial sums are produced in a fixed block order and reduced
//! sequentially with Neumaier compensation.

/// Neumaier variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice, in slice order.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut acc = Neumaier::new();
    for &x in xs {
        acc.add(x);
    }
    acc.total()
}
