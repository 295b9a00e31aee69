//! Thin wrappers over `libm` so the rest of the crate reads like `std` code.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `ln(t!)`. Exact summation for small `t`, `lgamma` beyond.
pub fn ln_factorial(t: u64) -> f64 {
    if t < 64 {
        (2..=t).map(|i| ln(i as f64)).sum()
    } else {
        libm::lgamma(t as f64 + 1.0)
    }
}
