//! Spherical-harmonic bases, quadrature grids, and the discrete transform.
//!
//! Three basis flavors are supported, all orthonormal over the full sphere
//! but differing in phase and in real-vs-complex form; mixing them silently
//! is the classic source of sign bugs this crate exists to prevent.
//! Coefficients are stored in ACN order, index `n^2 + n + m`.

use crate::fmath;
use crate::special::{self, SpecialError};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;

/// Largest harmonic order the transform layer accepts.
pub const MAX_ORDER: u32 = 32;

const SQRT_2: f64 = core::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShError {
    /// Order exceeds [`MAX_ORDER`].
    OrderTooLarge { n: u32 },
    /// `|m| > n`.
    DegreeOrderMismatch { n: u32, m: i32 },
    /// Colatitude outside `[0, pi]` or non-finite angles.
    InvalidDirection { colatitude: f64, azimuth: f64 },
    /// Analysis order exceeds what the grid integrates exactly.
    GridExactnessTooLow { requested: u32, available: u32 },
    /// Sample count differs from the node count of the grid.
    SampleCountMismatch { expected: usize, got: usize },
    /// Coefficient slice length is not a perfect square.
    InvalidCoefficientCount { len: usize },
    Special(SpecialError),
}

impl fmt::Display for ShError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShError::OrderTooLarge { n } => {
                write!(f, "order {n} exceeds the supported maximum {MAX_ORDER}")
            }
            ShError::DegreeOrderMismatch { n, m } => write!(f, "degree {m} is outside -{n}..={n}"),
            ShError::InvalidDirection { colatitude, azimuth } => write!(
                f,
                "invalid direction: colatitude {colatitude} must lie in [0, pi], azimuth {azimuth} must be finite"
            ),
            ShError::GridExactnessTooLow { requested, available } => write!(
                f,
                "analysis order {requested} exceeds the grid's exact order {available}"
            ),
            ShError::SampleCountMismatch { expected, got } => {
                write!(f, "expected {expected} samples, got {got}")
            }
            ShError::InvalidCoefficientCount { len } => {
                write!(f, "coefficient count {len} is not a perfect square")
            }
            ShError::Special(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ShError {}

impl From<SpecialError> for ShError {
    fn from(e: SpecialError) -> Self {
        ShError::Special(e)
    }
}

/// A direction on the unit sphere: colatitude from the +z axis in `[0, pi]`,
/// azimuth counterclockwise from +x in `[0, 2*pi)`.
///
/// The frame is right-handed with x forward, y left, z up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    colatitude: f64,
    azimuth: f64,
}

impl Direction {
    /// Validates the colatitude and wraps the azimuth into `[0, 2*pi)`.
    pub fn new(colatitude: f64, azimuth: f64) -> Result<Self, ShError> {
        if !colatitude.is_finite() || !azimuth.is_finite() || !(0.0..=PI).contains(&colatitude) {
            return Err(ShError::InvalidDirection { colatitude, azimuth });
        }
        let mut azimuth = fmath::rem_euclid(azimuth, 2.0 * PI);
        // rem_euclid can round up to the modulus itself.
        if azimuth >= 2.0 * PI {
            azimuth = 0.0;
        }
        Ok(Self { colatitude, azimuth })
    }

    pub fn colatitude(&self) -> f64 {
        self.colatitude
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// The opposite direction. Maps between the incidence and propagation
    /// description of the same wave.
    pub fn antipode(&self) -> Self {
        Direction::new(PI - self.colatitude, self.azimuth + PI)
            .expect("antipode of a valid direction is valid")
    }

    /// Same direction rotated by half a turn about the z axis.
    pub fn azimuth_rotated_half_turn(&self) -> Self {
        Direction::new(self.colatitude, self.azimuth + PI)
            .expect("rotation of a valid direction is valid")
    }

    /// True when the two directions coincide within `tol` radians, treating
    /// the azimuth as irrelevant at the poles.
    pub fn approx_eq(&self, other: &Direction, tol: f64) -> bool {
        if fmath::abs(self.colatitude - other.colatitude) > tol {
            return false;
        }
        let polar = self.colatitude.min(PI - self.colatitude) <= tol;
        if polar {
            return true;
        }
        let d = fmath::rem_euclid(self.azimuth - other.azimuth, 2.0 * PI);
        d <= tol || 2.0 * PI - d <= tol
    }
}

/// The three spherical-harmonic basis definitions handled by this crate.
///
/// All three share the same normalization magnitude; they differ in where
/// the Condon-Shortley phase ends up and in real-vs-complex form:
///
/// * `ComplexGd`: complex basis with `Y_{n,-m} = conj(Y_{n,m})` (the leading
///   `(-1)^m` cancels the phase inside the Legendre function for `m > 0`).
/// * `ComplexWilliams`: complex basis with `Y_{n,-m} = (-1)^m conj(Y_{n,m})`,
///   the form common in acoustics textbooks.
/// * `RealN3d`: the real, fully normalized basis used by ambisonics tooling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShFlavor {
    ComplexGd,
    ComplexWilliams,
    RealN3d,
}

impl ShFlavor {
    pub fn is_real(&self) -> bool {
        matches!(self, ShFlavor::RealN3d)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ShFlavor::ComplexGd => "complex_gd",
            ShFlavor::ComplexWilliams => "complex_williams",
            ShFlavor::RealN3d => "real_n3d",
        }
    }
}

impl fmt::Display for ShFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// ACN storage index of the coefficient `(n, m)`.
pub fn acn(n: u32, m: i32) -> usize {
    debug_assert!(m.unsigned_abs() <= n);
    (n as i64 * n as i64 + n as i64 + m as i64) as usize
}

/// Number of coefficients of an order-`n` expansion.
pub fn num_coeffs(n: u32) -> usize {
    ((n + 1) * (n + 1)) as usize
}

/// Order of an expansion with `len` coefficients, if `len` is a perfect square.
pub fn order_from_len(len: usize) -> Option<u32> {
    let mut n = 0u32;
    while num_coeffs(n) < len {
        n += 1;
    }
    (num_coeffs(n) == len).then_some(n)
}

/// sqrt((2n+1)/(4 pi) * (n-k)!/(n+k)!), the orthonormalizing factor shared by
/// all three flavors.
fn norm_factor(n: u32, k: u32) -> f64 {
    let mut ratio = 1.0;
    for j in (n - k + 1)..=(n + k) {
        ratio *= j as f64;
    }
    fmath::sqrt((2 * n + 1) as f64 / (4.0 * PI) / ratio)
}

fn check_degree_order(n: u32, m: i32) -> Result<(), ShError> {
    if n > MAX_ORDER {
        return Err(ShError::OrderTooLarge { n });
    }
    if m.unsigned_abs() > n {
        return Err(ShError::DegreeOrderMismatch { n, m });
    }
    Ok(())
}

/// Evaluates the spherical harmonic `Y_{n,m}` of the given flavor.
pub fn sh_eval(flavor: ShFlavor, n: u32, m: i32, dir: Direction) -> Result<Complex64, ShError> {
    check_degree_order(n, m)?;
    let mu = fmath::cos(dir.colatitude());
    let k = m.unsigned_abs();
    let alpha = dir.azimuth();
    let value = match flavor {
        ShFlavor::ComplexGd => {
            // (-1)^m sqrt(...) P_n^{|m|}(cos b) e^{i m a}; the sign uses the
            // signed m, which equals (-1)^{|m|}.
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let radial = sign * norm_factor(n, k) * special::assoc_legendre(n, k, mu)?;
            Complex64::new(fmath::cos(m as f64 * alpha), fmath::sin(m as f64 * alpha)) * radial
        }
        ShFlavor::ComplexWilliams => {
            // sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!) P_n^m(cos b) e^{i m a} with a
            // signed order; P_n^{-k} = (-1)^k (n-k)!/(n+k)! P_n^k.
            let mut radial = norm_factor(n, k) * special::assoc_legendre(n, k, mu)?;
            if m < 0 && k % 2 == 1 {
                radial = -radial;
            }
            Complex64::new(fmath::cos(m as f64 * alpha), fmath::sin(m as f64 * alpha)) * radial
        }
        ShFlavor::RealN3d => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let radial = sign * norm_factor(n, k) * special::assoc_legendre(n, k, mu)?;
            let angular = match m {
                0 => 1.0,
                m if m > 0 => SQRT_2 * fmath::cos(k as f64 * alpha),
                _ => SQRT_2 * fmath::sin(k as f64 * alpha),
            };
            Complex64::new(radial * angular, 0.0)
        }
    };
    Ok(value)
}

/// A sampling of the sphere with quadrature weights.
///
/// `exact_order` is the largest `N` for which products of two order-`N`
/// harmonics integrate exactly, i.e. the largest safe analysis order.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub nodes: Vec<Direction>,
    pub weights: Vec<f64>,
    pub exact_order: u32,
}

impl QuadratureGrid {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let k = count as f64;
    for i in 0..count {
        let mut x = fmath::cos(PI * (i as f64 + 0.75) / (k + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_count and its derivative by the stable recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=count {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if count == 0 { p0 } else { p1 };
            let pm1 = if count == 1 { 1.0 } else { p0 };
            dp = k * (x * p - pm1) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if fmath::abs(step) < 1e-15 {
                // One polishing step after convergence.
                let mut p0 = 1.0;
                let mut p1 = x;
                for j in 2..=count {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if count == 0 { p0 } else { p1 };
                let pm1 = if count == 1 { 1.0 } else { p0 };
                dp = k * (x * p - pm1) / (x * x - 1.0);
                x -= p / dp;
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Builds a grid that is exact through `exact_order`: Gauss-Legendre in the
/// colatitude (`exact_order + 1` rings) crossed with `2 * exact_order + 1`
/// equiangular azimuths. Total weight is `4 pi`.
pub fn make_gauss_grid(exact_order: u32) -> Result<QuadratureGrid, ShError> {
    if exact_order > MAX_ORDER {
        return Err(ShError::OrderTooLarge { n: exact_order });
    }
    let rings = exact_order as usize + 1;
    let azimuths = 2 * exact_order as usize + 1;
    let (mu, w_mu) = gauss_legendre(rings);
    let w_az = 2.0 * PI / azimuths as f64;
    let mut nodes = Vec::with_capacity(rings * azimuths);
    let mut weights = Vec::with_capacity(rings * azimuths);
    for (x, wc) in mu.iter().zip(&w_mu) {
        let beta = fmath::acos(x.clamp(-1.0, 1.0));
        for j in 0..azimuths {
            let alpha = 2.0 * PI * j as f64 / azimuths as f64;
            nodes.push(Direction::new(beta, alpha)?);
            weights.push(wc * w_az);
        }
    }
    Ok(QuadratureGrid { nodes, weights, exact_order })
}

/// All harmonics up to `n_max` at each direction; row-major, one row of
/// `(n_max+1)^2` values per direction.
pub(crate) fn basis_matrix(
    flavor: ShFlavor,
    n_max: u32,
    dirs: &[Direction],
) -> Result<Vec<Complex64>, ShError> {
    let stride = num_coeffs(n_max);
    let mut out = Vec::with_capacity(stride * dirs.len());
    for dir in dirs {
        for n in 0..=n_max {
            for m in -(n as i32)..=(n as i32) {
                out.push(sh_eval(flavor, n, m, *dir)?);
            }
        }
    }
    Ok(out)
}

/// Projects samples on the grid nodes onto the harmonics through `n_max`:
/// `c_{n,m} = sum_q w_q f(dir_q) conj(Y_{n,m}(dir_q))`.
///
/// Refuses orders beyond the grid's exact order, where the projection would
/// alias.
pub fn sh_analysis(
    samples: &[Complex64],
    grid: &QuadratureGrid,
    flavor: ShFlavor,
    n_max: u32,
) -> Result<Vec<Complex64>, ShError> {
    if n_max > grid.exact_order {
        return Err(ShError::GridExactnessTooLow { requested: n_max, available: grid.exact_order });
    }
    sh_analysis_weighted(samples, &grid.nodes, &grid.weights, flavor, n_max)
}

/// Analysis against an explicit node/weight list. The caller vouches for the
/// quadrature being exact through `2 * n_max`.
pub(crate) fn sh_analysis_weighted(
    samples: &[Complex64],
    dirs: &[Direction],
    weights: &[f64],
    flavor: ShFlavor,
    n_max: u32,
) -> Result<Vec<Complex64>, ShError> {
    if n_max > MAX_ORDER {
        return Err(ShError::OrderTooLarge { n: n_max });
    }
    if samples.len() != dirs.len() || weights.len() != dirs.len() {
        return Err(ShError::SampleCountMismatch { expected: dirs.len(), got: samples.len() });
    }
    let stride = num_coeffs(n_max);
    let basis = basis_matrix(flavor, n_max, dirs)?;
    let mut out = vec![Complex64::new(0.0, 0.0); stride];
    for (q, (sample, weight)) in samples.iter().zip(weights).enumerate() {
        let row = &basis[q * stride..(q + 1) * stride];
        let ws = sample * *weight;
        for (acc, y) in out.iter_mut().zip(row) {
            *acc += ws * y.conj();
        }
    }
    Ok(out)
}

/// Evaluates the expansion at one direction. The order is inferred from the
/// coefficient count.
pub fn sh_synthesis(
    coeffs: &[Complex64],
    flavor: ShFlavor,
    dir: Direction,
) -> Result<Complex64, ShError> {
    let n_max = order_from_len(coeffs.len())
        .ok_or(ShError::InvalidCoefficientCount { len: coeffs.len() })?;
    if n_max > MAX_ORDER {
        return Err(ShError::OrderTooLarge { n: n_max });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = 0usize;
    for n in 0..=n_max {
        for m in -(n as i32)..=(n as i32) {
            acc += coeffs[idx] * sh_eval(flavor, n, m, dir)?;
            idx += 1;
        }
    }
    Ok(acc)
}

/// Re-expresses coefficients of one flavor in another so that synthesis is
/// unchanged at every direction.
///
/// Between the two complex flavors this is a sign flip on positive orders;
/// between complex and real it mixes the `(n, m)` and `(n, -m)` pair through
/// a unitary 2x2 block.
pub fn convert_flavor(
    coeffs: &[Complex64],
    from: ShFlavor,
    to: ShFlavor,
) -> Result<Vec<Complex64>, ShError> {
    let n_max = order_from_len(coeffs.len())
        .ok_or(ShError::InvalidCoefficientCount { len: coeffs.len() })?;
    if n_max > MAX_ORDER {
        return Err(ShError::OrderTooLarge { n: n_max });
    }
    if from == to {
        return Ok(coeffs.to_vec());
    }
    // Route everything through ComplexGd; each leg is its own inverse or has
    // an explicit inverse below.
    let gd: Vec<Complex64> = match from {
        ShFlavor::ComplexGd => coeffs.to_vec(),
        ShFlavor::ComplexWilliams => williams_gd_sign_flip(coeffs, n_max),
        ShFlavor::RealN3d => real_to_gd(coeffs, n_max),
    };
    let out = match to {
        ShFlavor::ComplexGd => gd,
        ShFlavor::ComplexWilliams => williams_gd_sign_flip(&gd, n_max),
        ShFlavor::RealN3d => gd_to_real(&gd, n_max),
    };
    Ok(out)
}

/// GD <-> Williams: multiply coefficients with `m > 0` by `(-1)^m`. The map
/// is an involution.
fn williams_gd_sign_flip(coeffs: &[Complex64], n_max: u32) -> Vec<Complex64> {
    let mut out = coeffs.to_vec();
    for n in 0..=n_max {
        for m in 1..=(n as i32) {
            if m % 2 == 1 {
                out[acn(n, m)] = -out[acn(n, m)];
            }
        }
    }
    out
}

fn gd_to_real(coeffs: &[Complex64], n_max: u32) -> Vec<Complex64> {
    let inv_sqrt2 = 1.0 / SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let mut out = coeffs.to_vec();
    for n in 0..=n_max {
        for m in 1..=(n as i32) {
            let plus = coeffs[acn(n, m)];
            let minus = coeffs[acn(n, -m)];
            out[acn(n, m)] = (plus + minus) * inv_sqrt2;
            out[acn(n, -m)] = i * (plus - minus) * inv_sqrt2;
        }
    }
    out
}

fn real_to_gd(coeffs: &[Complex64], n_max: u32) -> Vec<Complex64> {
    let inv_sqrt2 = 1.0 / SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let mut out = coeffs.to_vec();
    for n in 0..=n_max {
        for m in 1..=(n as i32) {
            let cos_part = coeffs[acn(n, m)];
            let sin_part = coeffs[acn(n, -m)];
            out[acn(n, m)] = (cos_part - i * sin_part) * inv_sqrt2;
            out[acn(n, -m)] = (cos_part + i * sin_part) * inv_sqrt2;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dir(c: f64, a: f64) -> Direction {
        Direction::new(c, a).unwrap()
    }

    #[test]
    fn direction_wraps_azimuth_and_validates_colatitude() {
        let d = dir(1.0, -0.5);
        assert!((d.azimuth() - (2.0 * PI - 0.5)).abs() < 1e-15);
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(PI + 0.1, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn sh_eval_order_zero_is_constant() {
        let want = 1.0 / (4.0 * PI).sqrt();
        for flavor in [ShFlavor::ComplexGd, ShFlavor::ComplexWilliams, ShFlavor::RealN3d] {
            let v = sh_eval(flavor, 0, 0, dir(0.7, 3.0)).unwrap();
            assert!((v.re - want).abs() < 1e-15);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn sh_eval_gd_dipole_on_equator() {
        // Y_{1,1} at (pi/2, 0): the leading sign and the phase inside the
        // Legendre function cancel, leaving +sqrt(3/(8 pi)).
        let want = (3.0 / (8.0 * PI)).sqrt();
        let v = sh_eval(ShFlavor::ComplexGd, 1, 1, dir(PI / 2.0, 0.0)).unwrap();
        assert!((v.re - want).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
        // Williams keeps the textbook minus sign there.
        let v = sh_eval(ShFlavor::ComplexWilliams, 1, 1, dir(PI / 2.0, 0.0)).unwrap();
        assert!((v.re + want).abs() < 1e-15);
    }

    #[test]
    fn sh_eval_real_first_order() {
        // Real (1,-1) at (pi/2, pi/2) is sqrt(3/(4 pi)) * sin(azimuth).
        let want = (3.0 / (4.0 * PI)).sqrt();
        let v = sh_eval(ShFlavor::RealN3d, 1, -1, dir(PI / 2.0, PI / 2.0)).unwrap();
        assert!((v.re - want).abs() < 1e-15, "{} vs {}", v.re, want);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn sh_eval_rejects_out_of_range() {
        assert!(sh_eval(ShFlavor::ComplexGd, 1, 2, dir(0.5, 0.5)).is_err());
        assert!(sh_eval(ShFlavor::ComplexGd, MAX_ORDER + 1, 0, dir(0.5, 0.5)).is_err());
    }

    #[test]
    fn acn_layout() {
        assert_eq!(acn(0, 0), 0);
        assert_eq!(acn(1, -1), 1);
        assert_eq!(acn(1, 0), 2);
        assert_eq!(acn(1, 1), 3);
        assert_eq!(acn(2, -2), 4);
        assert_eq!(num_coeffs(3), 16);
        assert_eq!(order_from_len(16), Some(3));
        assert_eq!(order_from_len(17), None);
    }

    #[test]
    fn trivial_grid_is_one_node_of_full_weight() {
        let g = make_gauss_grid(0).unwrap();
        assert_eq!(g.num_nodes(), 1);
        assert!((g.weights[0] - 4.0 * PI).abs() < 1e-12);
        assert!((g.nodes[0].colatitude() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_weights_sum_to_sphere_area() {
        for q in [1u32, 4, 9] {
            let g = make_gauss_grid(q).unwrap();
            assert_eq!(g.num_nodes(), ((q + 1) * (2 * q + 1)) as usize);
            assert!((g.weight_sum() - 4.0 * PI).abs() < 1e-11, "q={q}");
        }
    }

    #[test]
    fn gram_matrix_is_identity_through_exact_order() {
        let n_max = 5u32;
        let g = make_gauss_grid(n_max).unwrap();
        for flavor in [ShFlavor::ComplexGd, ShFlavor::ComplexWilliams, ShFlavor::RealN3d] {
            let stride = num_coeffs(n_max);
            let basis = basis_matrix(flavor, n_max, &g.nodes).unwrap();
            for a in 0..stride {
                for b in 0..stride {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for q in 0..g.num_nodes() {
                        acc += basis[q * stride + b] * basis[q * stride + a].conj() * g.weights[q];
                    }
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (acc - want).norm() < 1e-10,
                        "{flavor:?} gram[{a}][{b}] = {acc}"
                    );
                }
            }
        }
    }

    #[test]
    fn analysis_picks_out_a_single_harmonic() {
        let g = make_gauss_grid(4).unwrap();
        let samples: Vec<Complex64> = g
            .nodes
            .iter()
            .map(|d| sh_eval(ShFlavor::ComplexGd, 2, 1, *d).unwrap())
            .collect();
        let c = sh_analysis(&samples, &g, ShFlavor::ComplexGd, 4).unwrap();
        for n in 0..=4u32 {
            for m in -(n as i32)..=(n as i32) {
                let want = if (n, m) == (2, 1) { 1.0 } else { 0.0 };
                assert!((c[acn(n, m)] - want).norm() < 1e-12, "({n},{m})");
            }
        }
    }

    #[test]
    fn analysis_of_a_constant() {
        let g = make_gauss_grid(2).unwrap();
        let samples = vec![Complex64::new(1.0, 0.0); g.num_nodes()];
        let c = sh_analysis(&samples, &g, ShFlavor::RealN3d, 2).unwrap();
        assert!((c[0].re - (4.0 * PI).sqrt()).abs() < 1e-12);
        for v in &c[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn analysis_refuses_aliasing_orders() {
        let g = make_gauss_grid(3).unwrap();
        let samples = vec![Complex64::new(0.0, 0.0); g.num_nodes()];
        assert_eq!(
            sh_analysis(&samples, &g, ShFlavor::ComplexGd, 4),
            Err(ShError::GridExactnessTooLow { requested: 4, available: 3 })
        );
    }

    #[test]
    fn synthesis_analysis_round_trip() {
        let n_max = 3u32;
        let g = make_gauss_grid(n_max).unwrap();
        // Deterministic pseudo-random coefficients.
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for flavor in [ShFlavor::ComplexGd, ShFlavor::ComplexWilliams, ShFlavor::RealN3d] {
            let coeffs: Vec<Complex64> =
                (0..num_coeffs(n_max)).map(|_| Complex64::new(next(), next())).collect();
            let samples: Vec<Complex64> = g
                .nodes
                .iter()
                .map(|d| sh_synthesis(&coeffs, flavor, *d).unwrap())
                .collect();
            let back = sh_analysis(&samples, &g, flavor, n_max).unwrap();
            for (a, b) in coeffs.iter().zip(&back) {
                assert!((a - b).norm() < 1e-10, "{flavor:?}");
            }
        }
    }

    #[test]
    fn flavor_conversion_matches_pointwise_synthesis() {
        let n_max = 3u32;
        let mut state = 0x13198A2E03707344u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let coeffs: Vec<Complex64> =
            (0..num_coeffs(n_max)).map(|_| Complex64::new(next(), next())).collect();
        let flavors = [ShFlavor::ComplexGd, ShFlavor::ComplexWilliams, ShFlavor::RealN3d];
        let probes: Vec<Direction> =
            (0..40).map(|_| dir(next().abs() * PI, next() * PI + PI)).collect();
        for from in flavors {
            for to in flavors {
                let converted = convert_flavor(&coeffs, from, to).unwrap();
                for p in &probes {
                    let a = sh_synthesis(&coeffs, from, *p).unwrap();
                    let b = sh_synthesis(&converted, to, *p).unwrap();
                    assert!((a - b).norm() < 1e-10, "{from:?} -> {to:?}");
                }
            }
        }
    }

    #[test]
    fn gd_to_williams_flips_odd_positive_orders() {
        let n_max = 2u32;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); num_coeffs(n_max)];
        coeffs[acn(2, 1)] = Complex64::new(1.0, 0.0);
        let w = convert_flavor(&coeffs, ShFlavor::ComplexGd, ShFlavor::ComplexWilliams).unwrap();
        assert_eq!(w[acn(2, 1)], Complex64::new(-1.0, 0.0));
        let mut coeffs = vec![Complex64::new(0.0, 0.0); num_coeffs(n_max)];
        coeffs[acn(0, 0)] = Complex64::new(1.0, 0.0);
        let w = convert_flavor(&coeffs, ShFlavor::ComplexGd, ShFlavor::ComplexWilliams).unwrap();
        assert_eq!(w[acn(0, 0)], Complex64::new(1.0, 0.0));
    }

    proptest! {
        #[test]
        fn conjugation_symmetry(n in 0u32..9, mfrac in 0.0f64..1.0, c in 0.0f64..PI, a in 0.0f64..(2.0 * PI)) {
            let m = (mfrac * n as f64) as i32;
            let d = dir(c, a);
            let gd_pos = sh_eval(ShFlavor::ComplexGd, n, m, d).unwrap();
            let gd_neg = sh_eval(ShFlavor::ComplexGd, n, -m, d).unwrap();
            prop_assert!((gd_neg - gd_pos.conj()).norm() < 1e-12);
            let w_pos = sh_eval(ShFlavor::ComplexWilliams, n, m, d).unwrap();
            let w_neg = sh_eval(ShFlavor::ComplexWilliams, n, -m, d).unwrap();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((w_neg - w_pos.conj() * sign).norm() < 1e-12);
            let r = sh_eval(ShFlavor::RealN3d, n, m, d).unwrap();
            prop_assert!(r.im == 0.0);
        }

        #[test]
        fn antipodal_parity(n in 0u32..9, mfrac in -1.0f64..1.0, c in 0.0f64..PI, a in 0.0f64..(2.0 * PI)) {
            let m = (mfrac * n as f64) as i32;
            let d = dir(c, a);
            let flipped = d.antipode();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for flavor in [ShFlavor::ComplexGd, ShFlavor::ComplexWilliams, ShFlavor::RealN3d] {
                let y = sh_eval(flavor, n, m, d).unwrap();
                let y_flip = sh_eval(flavor, n, m, flipped).unwrap();
                prop_assert!((y_flip - y * sign).norm() < 1e-12, "{:?}", flavor);
            }
        }

        #[test]
        fn antipode_is_involutive(c in 0.0f64..PI, a in 0.0f64..(2.0 * PI)) {
            let d = dir(c, a);
            let back = d.antipode().antipode();
            prop_assert!(back.approx_eq(&d, 1e-12));
        }
    }
}
