//! Compensated (Neumaier) summation.
//!
//! The oracle adds up to 2^28 per-cell contributions; plain accumulation would
//! drift by ~1e-10 and make results depend on enumeration order.

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if libm::fabs(self.sum) >= libm::fabs(value) {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    #[inline]
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let values = [1.0, 1e100, 1.0, -1e100];
        let s: CompensatedSum = values.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
        let naive: f64 = values.iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn merge_equals_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let all: CompensatedSum = xs.iter().copied().collect();
        let mut a: CompensatedSum = xs[..400].iter().copied().collect();
        let b: CompensatedSum = xs[400..].iter().copied().collect();
        a.merge(&b);
        assert!((a.value() - all.value()).abs() <= 1e-15);
    }
}
