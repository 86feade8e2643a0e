//! Compensated accumulation.
//!
//! The log-magnitude and argument totals run over (q-1)/2 terms, each of
//! size up to log q, while the quantity of interest survives a cancellation
//! down to order one. Plain f64 addition would lose up to
//! log2((q-1)/2 * log q) bits there; Neumaier's variant of Kahan summation
//! keeps a running correction term and restores all but the final rounding.

/// Running sum with a first-order error correction.
///
/// The correction handles the case where the incoming term is larger than
/// the partial sum, which Kahan's original update drops.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
