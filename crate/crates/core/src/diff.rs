//! Central finite-difference stencils.
//!
//! All stencils are fourth-order accurate. The first and second derivative
//! use five points, the third uses seven.

use std::ops::{Add, Mul, Sub};

/// Values that can be combined linearly by a stencil.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Linear for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Reach of the stencil for the given derivative order, in units of `h`.
pub fn stencil_half_width(order: usize) -> f64 {
    match order {
        0 => 0.0,
        1 | 2 => 2.0,
        _ => 3.0,
    }
}

/// `f′(s)` with error `O(h⁴)`.
pub fn first<T: Linear, E>(f: impl Fn(f64) -> Result<T, E>, s: f64, h: f64) -> Result<T, E> {
    let (m2, m1, p1, p2) = (f(s - 2.0 * h)?, f(s - h)?, f(s + h)?, f(s + 2.0 * h)?);
    Ok(((p1 - m1) * 8.0 - (p2 - m2)) * (1.0 / (12.0 * h)))
}

/// `f″(s)` with error `O(h⁴)`.
pub fn second<T: Linear, E>(f: impl Fn(f64) -> Result<T, E>, s: f64, h: f64) -> Result<T, E> {
    let (m2, m1, c, p1, p2) = (f(s - 2.0 * h)?, f(s - h)?, f(s)?, f(s + h)?, f(s + 2.0 * h)?);
    Ok(((p1 + m1) * 16.0 - (p2 + m2) - c * 30.0) * (1.0 / (12.0 * h * h)))
}

/// `f‴(s)` with error `O(h⁴)` (seven-point stencil).
pub fn third<T: Linear, E>(f: impl Fn(f64) -> Result<T, E>, s: f64, h: f64) -> Result<T, E> {
    let (m3, m2, m1) = (f(s - 3.0 * h)?, f(s - 2.0 * h)?, f(s - h)?);
    let (p1, p2, p3) = (f(s + h)?, f(s + 2.0 * h)?, f(s + 3.0 * h)?);
    Ok(((p2 - m2) * 8.0 - (p3 - m3) - (p1 - m1) * 13.0) * (1.0 / (8.0 * h * h * h)))
}

/// Dispatch on order 1..=3.
pub fn nth<T: Linear, E>(f: impl Fn(f64) -> Result<T, E>, s: f64, h: f64, order: usize) -> Result<T, E> {
    match order {
        1 => first(f, s, h),
        2 => second(f, s, h),
        3 => third(f, s, h),
        _ => panic!("finite-difference order {order} not supported"),
    }
}
