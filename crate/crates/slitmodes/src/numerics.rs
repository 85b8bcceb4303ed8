//! Small numeric helpers shared across modules.

/// Neumaier-compensated accumulator. Plain summation over the ~2e4 terms of
/// a large decomposition can drift by several 1e-12, which would eat the
/// whole normalization tolerance; compensation keeps the error at O(eps).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_small_terms() {
        let mut s = NeumaierSum::default();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-18);
        }
        assert_eq!(s.total(), 1.0 + 1e-15);
    }
}
