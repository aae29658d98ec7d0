//! Bessel functions of the first kind, orders 0 and 1, on `[0, 30]`.
//!
//! The power series is used up to `x = 12`, where cancellation still costs
//! less than 1e-12. Beyond that the Hankel asymptotic series cannot reach
//! 1e-12 until x ≈ 14, so the integral
//! `J_n(x) = (1/2π) ∫ cos(nτ - x sin τ) dτ` over one period is evaluated with
//! the trapezoid rule, which converges geometrically for periodic
//! analytic integrands.

use crate::error::{Result, SloshError};
use crate::scalar::Real;

pub const BESSEL_MAX_X: f64 = 30.0;
const SERIES_MAX_X: f64 = 12.0;
const TRAPEZOID_NODES: usize = 96;

fn check(x: f64) -> Result<()> {
    if (0.0..=BESSEL_MAX_X).contains(&x) {
        Ok(())
    } else {
        Err(SloshError::Argument(format!("Bessel argument {x} outside [0, {BESSEL_MAX_X}]")))
    }
}

fn series(n: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = h.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    let mut largest = term.abs();
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -h * h / (k * (k + f64::from(n)));
        sum += term;
        largest = largest.max(term.abs());
        if term.abs() <= 1e-17 * largest && k > h {
            return sum;
        }
    }
}

fn trapezoid(n: u32, x: f64) -> f64 {
    let step = std::f64::consts::TAU / TRAPEZOID_NODES as f64;
    let nf = f64::from(n);
    (0..TRAPEZOID_NODES)
        .map(|j| {
            let t = step * j as f64;
            (nf * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / TRAPEZOID_NODES as f64
}

fn jn(n: u32, x: f64) -> f64 {
    if x <= SERIES_MAX_X {
        series(n, x)
    } else {
        trapezoid(n, x)
    }
}

pub fn bessel_j0<T: Real>(x: T) -> Result<T> {
    let x = x.to_f64_lossy();
    check(x)?;
    Ok(T::lit(jn(0, x)))
}

pub fn bessel_j1<T: Real>(x: T) -> Result<T> {
    let x = x.to_f64_lossy();
    check(x)?;
    Ok(T::lit(jn(1, x)))
}

fn j1p(x: f64) -> f64 {
    if x < 1e-4 {
        0.5 - 3.0 * x * x / 16.0
    } else {
        jn(0, x) - jn(1, x) / x
    }
}

/// `J₁'(x) = J₀(x) - J₁(x)/x`, with `J₁'(0) = 1/2`.
pub fn bessel_j1p<T: Real>(x: T) -> Result<T> {
    let x = x.to_f64_lossy();
    check(x)?;
    Ok(T::lit(j1p(x)))
}

/// First positive zero `j'₁,₁` of `J₁'`, by Newton's method from 1.8.
pub fn find_j1prime_zero() -> f64 {
    let mut x = 1.8;
    for _ in 0..50 {
        // Bessel's equation gives J₁'' = -J₁'/x - (1 - 1/x²) J₁.
        let d = j1p(x);
        let dd = -d / x - (1.0 - 1.0 / (x * x)) * jn(1, x);
        let step = d / dd;
        x -= step;
        if step.abs() <= 1e-14 {
            break;
        }
    }
    x
}
