//! Streaming log-sum-exp accumulation.

use serde::{Deserialize, Serialize};

use crate::extended::ExtendedReal;

/// Running value of `log Σ exp(w_i)` kept as `(max, Σ exp(w_i − max))`.
///
/// Terms equal to `−∞` are no-ops. Merging two accumulators is exact up to
/// the usual floating-point reassociation, so a fixed merge order gives
/// reproducible results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSumExp {
    max: f64,
    scaled_sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled_sum: 0.0,
        }
    }

    pub fn push(&mut self, w: ExtendedReal) {
        if let ExtendedReal::Finite(w) = w {
            self.push_f64(w);
        }
    }

    pub fn push_f64(&mut self, w: f64) {
        if w == f64::NEG_INFINITY {
            return;
        }
        if w > self.max {
            self.scaled_sum = self.scaled_sum * (self.max - w).exp() + 1.0;
            self.max = w;
        } else {
            self.scaled_sum += (w - self.max).exp();
        }
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if self.max == f64::NEG_INFINITY {
            *self = *other;
            return;
        }
        if other.max > self.max {
            self.scaled_sum = self.scaled_sum * (self.max - other.max).exp() + other.scaled_sum;
            self.max = other.max;
        } else {
            self.scaled_sum += other.scaled_sum * (other.max - self.max).exp();
        }
    }

    pub fn is_empty(&self) -> bool {
        self.max == f64::NEG_INFINITY
    }

    pub fn value(&self) -> ExtendedReal {
        if self.is_empty() {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(self.max + self.scaled_sum.ln())
        }
    }
}

impl FromIterator<f64> for LogSumExp {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = LogSumExp::new();
        for w in iter {
            acc.push_f64(w);
        }
        acc
    }
}
