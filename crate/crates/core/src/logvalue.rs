//! Nonnegative quantities stored as natural logarithms.
//!
//! Tree counts such as `n^(n-2)` overflow `f64` near `n = 150`, so every
//! count, moment and bound in this crate travels as a [`LogValue`].

use core::cmp::Ordering;
use core::ops::{Add, Div, Mul};

use crate::math;

/// Natural log of a nonnegative number, with an explicit zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogValue {
    Zero,
    Ln(f64),
}

impl LogValue {
    pub const ONE: LogValue = LogValue::Ln(0.0);

    /// From a log; `-inf` maps to [`LogValue::Zero`].
    pub fn from_ln(ln: f64) -> LogValue {
        if ln == f64::NEG_INFINITY {
            LogValue::Zero
        } else {
            LogValue::Ln(ln)
        }
    }

    /// From a nonnegative value. Panics on negative or NaN input.
    pub fn from_value(x: f64) -> LogValue {
        assert!(x >= 0.0, "LogValue of negative number {x}");
        if x == 0.0 {
            LogValue::Zero
        } else {
            LogValue::Ln(math::ln(x))
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, LogValue::Zero)
    }

    /// The log, `-inf` for zero.
    pub fn ln(self) -> f64 {
        match self {
            LogValue::Zero => f64::NEG_INFINITY,
            LogValue::Ln(x) => x,
        }
    }

    pub fn ln_opt(self) -> Option<f64> {
        match self {
            LogValue::Zero => None,
            LogValue::Ln(x) => Some(x),
        }
    }

    /// Back to the linear domain (may overflow to `inf`).
    pub fn value(self) -> f64 {
        match self {
            LogValue::Zero => 0.0,
            LogValue::Ln(x) => math::exp(x),
        }
    }

    pub fn powi(self, k: u32) -> LogValue {
        match self {
            _ if k == 0 => LogValue::ONE,
            LogValue::Zero => LogValue::Zero,
            LogValue::Ln(x) => LogValue::Ln(x * k as f64),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogValue) -> LogValue {
        match (self, rhs) {
            (LogValue::Ln(a), LogValue::Ln(b)) => LogValue::Ln(a + b),
            _ => LogValue::Zero,
        }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    /// Panics when dividing by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogValue) -> LogValue {
        match (self, rhs) {
            (_, LogValue::Zero) => panic!("LogValue division by zero"),
            (LogValue::Zero, _) => LogValue::Zero,
            (LogValue::Ln(a), LogValue::Ln(b)) => LogValue::Ln(a - b),
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        match (self, rhs) {
            (LogValue::Zero, x) | (x, LogValue::Zero) => x,
            (LogValue::Ln(a), LogValue::Ln(b)) => {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                LogValue::Ln(hi + math::ln1p(math::exp(lo - hi)))
            }
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &LogValue) -> Option<Ordering> {
        self.ln().partial_cmp(&other.ln())
    }
}

impl core::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        let mut acc = LogSumExp::new();
        for x in iter {
            acc.push(x);
        }
        acc.total()
    }
}

/// Streaming log-sum-exp with a running max shift.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    shift: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp::new()
    }
}

impl LogSumExp {
    pub fn new() -> LogSumExp {
        LogSumExp {
            shift: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn push(&mut self, x: LogValue) {
        let LogValue::Ln(v) = x else { return };
        if v > self.shift {
            self.scaled = self.scaled * math::exp(self.shift - v) + 1.0;
            self.shift = v;
        } else {
            self.scaled += math::exp(v - self.shift);
        }
    }

    pub fn total(&self) -> LogValue {
        if self.scaled == 0.0 {
            LogValue::Zero
        } else {
            LogValue::Ln(self.shift + math::ln(self.scaled))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_absorbs_products() {
        assert_eq!(LogValue::Zero * LogValue::Ln(5.0), LogValue::Zero);
        assert_eq!(LogValue::Ln(2.0) * LogValue::Ln(3.0), LogValue::Ln(5.0));
        assert_eq!(LogValue::Zero + LogValue::Ln(1.5), LogValue::Ln(1.5));
        assert_eq!(LogValue::from_ln(f64::NEG_INFINITY), LogValue::Zero);
        assert_eq!(LogValue::from_value(0.0), LogValue::Zero);
        assert_eq!(LogValue::Zero.powi(0), LogValue::ONE);
    }

    #[test]
    fn sums_beyond_f64_range() {
        let big = LogValue::Ln(5000.0);
        let s = big + big;
        assert!((s.ln() - (5000.0 + libm::log(2.0))).abs() < 1e-12);
        let total: LogValue = [LogValue::Ln(1000.0), LogValue::Zero, LogValue::Ln(1000.0)].into_iter().sum();
        assert!((total.ln() - (1000.0 + libm::log(2.0))).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_linear_arithmetic(a in 0.0f64..1e6, b in 0.0f64..1e6) {
            let (la, lb) = (LogValue::from_value(a), LogValue::from_value(b));
            let sum = (la + lb).value();
            prop_assert!((sum - (a + b)).abs() <= 1e-9 * (a + b).max(1.0));
            let prod = (la * lb).value();
            prop_assert!((prod - a * b).abs() <= 1e-9 * (a * b).max(1.0));
            let streamed: LogValue = [la, lb, la].into_iter().sum();
            prop_assert!((streamed.value() - (2.0 * a + b)).abs() <= 1e-9 * (2.0 * a + b).max(1.0));
        }
    }
}
