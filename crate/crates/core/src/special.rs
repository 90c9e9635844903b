//! Associated Legendre functions and spherical Bessel/Hankel functions.
//!
//! All evaluations go through numerically stable recurrences: the associated
//! Legendre functions seed on the diagonal and recur upward in degree, the
//! spherical Bessel function of the first kind switches between upward
//! recurrence (oscillatory regime, `x > n`) and a normalized downward sweep
//! (evanescent regime, `n >= x`, where upward recurrence is unstable), and
//! the second kind always recurs upward because it is the dominant solution.
//!
//! Real arguments only; degrees are capped at [`MAX_DEGREE`].

use crate::fmath;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

/// Largest degree any function in this module accepts.
pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialError {
    /// Degree exceeds [`MAX_DEGREE`].
    DegreeTooLarge { n: u32 },
    /// Order outside `0..=n`.
    OrderOutOfRange { n: u32, m: u32 },
    /// `mu` outside `[-1, 1]` or not finite.
    ArgumentOutOfRange,
    /// Negative or non-finite argument where `x >= 0` is required.
    NegativeArgument,
    /// Zero, negative, or non-finite argument where `x > 0` is required.
    NonPositiveArgument,
}

impl fmt::Display for SpecialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialError::DegreeTooLarge { n } => {
                write!(f, "degree {n} exceeds the supported maximum {MAX_DEGREE}")
            }
            SpecialError::OrderOutOfRange { n, m } => {
                write!(f, "order {m} is outside 0..={n}")
            }
            SpecialError::ArgumentOutOfRange => write!(f, "argument must lie in [-1, 1]"),
            SpecialError::NegativeArgument => write!(f, "argument must be finite and >= 0"),
            SpecialError::NonPositiveArgument => write!(f, "argument must be finite and > 0"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SpecialError {}

fn check_degree(n: u32) -> Result<(), SpecialError> {
    if n > MAX_DEGREE {
        Err(SpecialError::DegreeTooLarge { n })
    } else {
        Ok(())
    }
}

/// Legendre polynomial `P_n(mu)` by the three-term recurrence.
pub fn legendre(n: u32, mu: f64) -> Result<f64, SpecialError> {
    assoc_legendre(n, 0, mu)
}

/// Associated Legendre function `P_n^m(mu)` including the Condon-Shortley
/// phase `(-1)^m`, for `0 <= m <= n` and `mu` in `[-1, 1]`.
///
/// Seeds `P_m^m = (-1)^m (2m-1)!! (1-mu^2)^{m/2}` and recurs upward in the
/// degree; both steps are stable on the real interval.
pub fn assoc_legendre(n: u32, m: u32, mu: f64) -> Result<f64, SpecialError> {
    check_degree(n)?;
    if m > n {
        return Err(SpecialError::OrderOutOfRange { n, m });
    }
    if !mu.is_finite() || fmath::abs(mu) > 1.0 {
        return Err(SpecialError::ArgumentOutOfRange);
    }
    // (1-mu)(1+mu) keeps precision near the poles.
    let s = fmath::sqrt((1.0 - mu) * (1.0 + mu));
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    if n == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = mu * (2 * m + 1) as f64 * pmm;
    for k in (m + 2)..=n {
        let next =
            (mu * (2 * k - 1) as f64 * cur - (k + m - 1) as f64 * prev) / ((k - m) as f64);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Spherical Bessel function of the first kind, `j_n(x)`, for `x >= 0`.
pub fn sph_bessel_j(n: u32, x: f64) -> Result<f64, SpecialError> {
    check_degree(n)?;
    Ok(j_seq(n, x)?[n as usize])
}

/// `j_0(x) ..= j_{n_max}(x)` in one sweep.
pub fn sph_bessel_j_array(n_max: u32, x: f64) -> Result<Vec<f64>, SpecialError> {
    check_degree(n_max)?;
    j_seq(n_max, x)
}

/// Spherical Bessel function of the second kind, `y_n(x)`, for `x > 0`.
pub fn sph_bessel_y(n: u32, x: f64) -> Result<f64, SpecialError> {
    check_degree(n)?;
    Ok(y_seq(n, x)?[n as usize])
}

/// `y_0(x) ..= y_{n_max}(x)` in one sweep.
pub fn sph_bessel_y_array(n_max: u32, x: f64) -> Result<Vec<f64>, SpecialError> {
    check_degree(n_max)?;
    y_seq(n_max, x)
}

/// Spherical Hankel function of the first kind, `h^(1)_n = j_n + i y_n`.
pub fn sph_hankel1(n: u32, x: f64) -> Result<Complex64, SpecialError> {
    check_degree(n)?;
    // y goes first so any non-positive argument reports the hankel domain.
    let y = y_seq(n, x)?;
    let j = j_seq(n, x)?;
    Ok(Complex64::new(j[n as usize], y[n as usize]))
}

/// Spherical Hankel function of the second kind, `h^(2)_n = j_n - i y_n`.
pub fn sph_hankel2(n: u32, x: f64) -> Result<Complex64, SpecialError> {
    Ok(sph_hankel1(n, x)?.conj())
}

/// Derivative of `j_n` via `f'_n = f_{n-1} - (n+1)/x f_n` (`f'_0 = -f_1`).
pub fn sph_bessel_j_prime(n: u32, x: f64) -> Result<f64, SpecialError> {
    check_degree(n)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialError::NonPositiveArgument);
    }
    let j = j_seq(n + 1, x)?;
    Ok(derivative(&j, n, x))
}

/// Derivative of `y_n`.
pub fn sph_bessel_y_prime(n: u32, x: f64) -> Result<f64, SpecialError> {
    check_degree(n)?;
    let y = y_seq(n + 1, x)?;
    Ok(derivative(&y, n, x))
}

/// Derivative of `h^(1)_n`.
pub fn sph_hankel1_prime(n: u32, x: f64) -> Result<Complex64, SpecialError> {
    check_degree(n)?;
    let y = y_seq(n + 1, x)?;
    let j = j_seq(n + 1, x)?;
    Ok(Complex64::new(derivative(&j, n, x), derivative(&y, n, x)))
}

/// Derivative of `h^(2)_n`.
pub fn sph_hankel2_prime(n: u32, x: f64) -> Result<Complex64, SpecialError> {
    Ok(sph_hankel1_prime(n, x)?.conj())
}

fn derivative<T>(seq: &[T], n: u32, x: f64) -> T
where
    T: Copy + core::ops::Sub<Output = T> + core::ops::Mul<f64, Output = T> + core::ops::Neg<Output = T>,
{
    let n = n as usize;
    if n == 0 {
        -seq[1]
    } else {
        seq[n - 1] - seq[n] * ((n as f64 + 1.0) / x)
    }
}

fn j_seq(n_max: u32, x: f64) -> Result<Vec<f64>, SpecialError> {
    if !x.is_finite() || x < 0.0 {
        return Err(SpecialError::NegativeArgument);
    }
    let len = n_max as usize + 1;
    if x == 0.0 {
        let mut out = vec![0.0; len];
        out[0] = 1.0;
        return Ok(out);
    }
    let j0 = fmath::sin(x) / x;
    if n_max == 0 {
        return Ok(vec![j0]);
    }
    let j1 = fmath::sin(x) / (x * x) - fmath::cos(x) / x;
    if (n_max as f64) < x {
        // Oscillatory regime: upward recurrence is stable.
        let mut out = vec![0.0; len];
        out[0] = j0;
        out[1] = j1;
        for k in 2..len {
            out[k] = (2 * k - 1) as f64 / x * out[k - 1] - out[k - 2];
        }
        return Ok(out);
    }
    // Evanescent regime: normalized downward recurrence (Miller's method).
    // The start offset grows like n^(1/3) to clear the turning point.
    let offset = 20.0_f64.max(18.0 * fmath::cbrt(n_max as f64)) as u32;
    let start = n_max + offset;
    let mut out = vec![0.0; len];
    let mut above = 0.0_f64;
    let mut cur = 1e-30_f64;
    for k in (0..start).rev() {
        let below = (2 * k + 3) as f64 / x * cur - above;
        above = cur;
        cur = below;
        if (k as usize) < len {
            out[k as usize] = cur;
        }
        if fmath::abs(cur) > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    // Anchor on whichever closed form is larger; they never vanish together.
    let scale = if fmath::abs(j0) >= fmath::abs(j1) {
        j0 / out[0]
    } else {
        j1 / out[1]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    Ok(out)
}

fn y_seq(n_max: u32, x: f64) -> Result<Vec<f64>, SpecialError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialError::NonPositiveArgument);
    }
    let len = n_max as usize + 1;
    let mut out = vec![0.0; len];
    out[0] = -fmath::cos(x) / x;
    if n_max == 0 {
        return Ok(out);
    }
    out[1] = -fmath::cos(x) / (x * x) - fmath::sin(x) / x;
    for k in 2..len {
        out[k] = (2 * k - 1) as f64 / x * out[k - 1] - out[k - 2];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Truncated power series for j_n, used as an independent oracle at
    /// small arguments where it converges to machine precision.
    fn series_j(n: u32, x: f64) -> f64 {
        let mut dfact = 1.0;
        for i in 0..=n {
            dfact *= (2 * i + 1) as f64;
        }
        let mut term = x.powi(n as i32) / dfact;
        let mut sum = term;
        for k in 1..=30i64 {
            term *= -(x * x) / ((2 * k) as f64 * (2 * n as i64 + 2 * k + 1) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn legendre_known_values() {
        assert_eq!(assoc_legendre(0, 0, 0.3).unwrap(), 1.0);
        assert_eq!(assoc_legendre(1, 0, 0.5).unwrap(), 0.5);
        assert_eq!(assoc_legendre(1, 1, 0.0).unwrap(), -1.0);
        // P_2^1(mu) = -3 mu sqrt(1-mu^2)
        let mu = 0.4;
        let expected = -3.0 * mu * (1.0f64 - mu * mu).sqrt();
        assert!((assoc_legendre(2, 1, mu).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn legendre_vanishes_at_poles_for_positive_order() {
        for n in 1..=10u32 {
            for m in 1..=n {
                assert_eq!(assoc_legendre(n, m, 1.0).unwrap(), 0.0);
                assert_eq!(assoc_legendre(n, m, -1.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn legendre_rejects_bad_inputs() {
        assert_eq!(
            assoc_legendre(2, 3, 0.0),
            Err(SpecialError::OrderOutOfRange { n: 2, m: 3 })
        );
        assert_eq!(assoc_legendre(2, 1, 1.5), Err(SpecialError::ArgumentOutOfRange));
        assert_eq!(assoc_legendre(65, 0, 0.0), Err(SpecialError::DegreeTooLarge { n: 65 }));
    }

    #[test]
    fn bessel_j_at_zero_and_small_arguments() {
        assert_eq!(sph_bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(sph_bessel_j(3, 0.0).unwrap(), 0.0);
        assert!((sph_bessel_j(0, core::f64::consts::PI).unwrap()).abs() < 1e-12);
        for n in 0..=8u32 {
            for &x in &[1e-3, 0.1, 0.5, 1.0, 1.9] {
                let got = sph_bessel_j(n, x).unwrap();
                let want = series_j(n, x);
                let denom = want.abs().max(1e-300);
                assert!(
                    ((got - want) / denom).abs() < 1e-12,
                    "j_{n}({x}): {got} vs series {want}"
                );
            }
        }
    }

    #[test]
    fn bessel_j_closed_forms_at_large_arguments() {
        for &x in &[10.0f64, 100.0, 1e4] {
            let j1 = x.sin() / (x * x) - x.cos() / x;
            let j2 = (3.0 / (x * x * x) - 1.0 / x) * x.sin() - 3.0 * x.cos() / (x * x);
            assert!(((sph_bessel_j(1, x).unwrap() - j1) / j1.abs().max(1e-12)).abs() < 1e-11);
            assert!(((sph_bessel_j(2, x).unwrap() - j2) / j2.abs().max(1e-12)).abs() < 1e-11);
        }
    }

    #[test]
    fn bessel_y_seed_values() {
        let y0 = sph_bessel_y(0, 1.0).unwrap();
        assert!((y0 + 1.0f64.cos()).abs() < 1e-15);
        let y1 = sph_bessel_y(1, 2.0).unwrap();
        let want = -2.0f64.cos() / 4.0 - 2.0f64.sin() / 2.0;
        assert!((y1 - want).abs() < 1e-15);
    }

    #[test]
    fn hankel_seed_value() {
        // h^(2)_0(x) = i e^{-ix} / x, so at x = 1: sin(1) + i cos(1).
        let h = sph_hankel2(0, 1.0).unwrap();
        assert!((h.re - 1.0f64.sin()).abs() < 1e-15);
        assert!((h.im - 1.0f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn hankel_kinds_are_conjugate() {
        let a = sph_hankel1(4, 5.5).unwrap();
        let b = sph_hankel2(4, 5.5).unwrap();
        assert_eq!(a, b.conj());
        let ap = sph_hankel1_prime(4, 5.5).unwrap();
        let bp = sph_hankel2_prime(4, 5.5).unwrap();
        assert_eq!(ap, bp.conj());
    }

    #[test]
    fn wronskian_identity() {
        // j_n(x) h'^(2)_n(x) - j'_n(x) h^(2)_n(x) = -i / x^2
        for n in 0..=16u32 {
            for &x in &[0.01, 0.1, 1.0, 2.7, 10.0, 100.0] {
                let j = sph_bessel_j(n, x).unwrap();
                let jp = sph_bessel_j_prime(n, x).unwrap();
                let h = sph_hankel2(n, x).unwrap();
                let hp = sph_hankel2_prime(n, x).unwrap();
                let got = hp * j - h * jp;
                let want = Complex64::new(0.0, -1.0 / (x * x));
                let rel = (got - want).norm() / want.norm();
                assert!(rel < 1e-9, "wronskian n={n} x={x}: rel {rel}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let x = 3.2;
        let h = 1e-6;
        for n in 0..=6u32 {
            let fd = (sph_bessel_j(n, x + h).unwrap() - sph_bessel_j(n, x - h).unwrap()) / (2.0 * h);
            let got = sph_bessel_j_prime(n, x).unwrap();
            assert!((got - fd).abs() < 1e-8, "j'_{n}({x})");
            let fd = (sph_bessel_y(n, x + h).unwrap() - sph_bessel_y(n, x - h).unwrap()) / (2.0 * h);
            let got = sph_bessel_y_prime(n, x).unwrap();
            assert!((got - fd).abs() < 1e-7, "y'_{n}({x})");
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(sph_bessel_j(2, -1.0), Err(SpecialError::NegativeArgument));
        assert_eq!(sph_bessel_y(2, 0.0), Err(SpecialError::NonPositiveArgument));
        assert_eq!(sph_hankel2(2, 0.0), Err(SpecialError::NonPositiveArgument));
        assert_eq!(sph_hankel1(2, -3.0), Err(SpecialError::NonPositiveArgument));
        assert_eq!(sph_bessel_j_prime(2, 0.0), Err(SpecialError::NonPositiveArgument));
    }

    #[test]
    fn downward_sweep_survives_extreme_dynamic_range() {
        // Deep evanescent regime: values underflow-adjacent but finite.
        let v = sph_bessel_j(32, 0.01).unwrap();
        assert!(v.is_finite());
        assert!(v > 0.0);
        let rel = (v - series_j(32, 0.01)) / series_j(32, 0.01);
        assert!(rel.abs() < 1e-12);
    }

    proptest! {
        // (2n+1) mu P_n^m = (n-m+1) P_{n+1}^m + (n+m) P_{n-1}^m
        #[test]
        fn legendre_three_term_recurrence(n in 1u32..20, mfrac in 0.0f64..1.0, mu in -1.0f64..1.0) {
            let m = (mfrac * n as f64) as u32;
            let a = assoc_legendre(n, m, mu).unwrap();
            let lo = assoc_legendre(n - 1, m, mu).unwrap();
            let hi = assoc_legendre(n + 1, m, mu).unwrap();
            let lhs = (2 * n + 1) as f64 * mu * a;
            let rhs = (n - m + 1) as f64 * hi + (n + m) as f64 * lo;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            prop_assert!((lhs - rhs).abs() / scale < 1e-10);
        }

        #[test]
        fn bessel_series_agreement(n in 0u32..12, x in 1e-6f64..2.0) {
            let got = sph_bessel_j(n, x).unwrap();
            let want = series_j(n, x);
            let denom = want.abs().max(1e-300);
            prop_assert!(((got - want) / denom).abs() < 1e-11);
        }
    }
}
