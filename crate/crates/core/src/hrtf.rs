//! Head-related transfer functions: measured sets on spherical grids, their
//! spherical-harmonic encoding, and band-limited synthetic sets for testing.

use crate::coefficients::{CoeffKind, ShCoefficients};
use crate::convention::{ConventionSystem, DirectionReference, FieldFactor, FourierSign};
use crate::sh::{self, Direction, QuadratureGrid, ShError, ShFlavor};
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Angular tolerance for treating two measurement directions as the same.
pub const DIRECTION_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HrtfError {
    EmptyDirections,
    EmptyFrequencies,
    /// Response array length disagrees with `directions x frequencies`.
    DataLengthMismatch { expected: usize, got: usize },
    InvalidFrequency { frequency_hz: f64 },
    NonFiniteResponse,
    /// No measured direction matches a required grid node.
    MissingDirection { colatitude: f64, azimuth: f64 },
    Sh(ShError),
}

impl fmt::Display for HrtfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HrtfError::EmptyDirections => write!(f, "the set contains no directions"),
            HrtfError::EmptyFrequencies => write!(f, "the set contains no frequency bins"),
            HrtfError::DataLengthMismatch { expected, got } => {
                write!(f, "expected {expected} response values, got {got}")
            }
            HrtfError::InvalidFrequency { frequency_hz } => {
                write!(f, "invalid frequency {frequency_hz} Hz")
            }
            HrtfError::NonFiniteResponse => write!(f, "responses must be finite"),
            HrtfError::MissingDirection { colatitude, azimuth } => write!(
                f,
                "no measured direction within tolerance of ({colatitude}, {azimuth})"
            ),
            HrtfError::Sh(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HrtfError {}

impl From<ShError> for HrtfError {
    fn from(e: ShError) -> Self {
        HrtfError::Sh(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ear {
    Left,
    Right,
}

impl Ear {
    pub const BOTH: [Ear; 2] = [Ear::Left, Ear::Right];
}

impl fmt::Display for Ear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ear::Left => "left",
            Ear::Right => "right",
        })
    }
}

/// A measured HRTF set: per-ear transfer functions on a list of source
/// directions (always incidence: where the source sits) and frequency bins.
///
/// Spectra are stored in the negative-exponent transform. Storage is
/// direction-major: all bins of direction 0, then direction 1, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct HrtfSet {
    directions: Vec<Direction>,
    frequencies_hz: Vec<f64>,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl HrtfSet {
    pub fn new(
        directions: Vec<Direction>,
        frequencies_hz: Vec<f64>,
        left: Vec<Complex64>,
        right: Vec<Complex64>,
    ) -> Result<Self, HrtfError> {
        if directions.is_empty() {
            return Err(HrtfError::EmptyDirections);
        }
        if frequencies_hz.is_empty() {
            return Err(HrtfError::EmptyFrequencies);
        }
        for &f in &frequencies_hz {
            if !f.is_finite() || f < 0.0 {
                return Err(HrtfError::InvalidFrequency { frequency_hz: f });
            }
        }
        let expected = directions.len() * frequencies_hz.len();
        for data in [&left, &right] {
            if data.len() != expected {
                return Err(HrtfError::DataLengthMismatch { expected, got: data.len() });
            }
            if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(HrtfError::NonFiniteResponse);
            }
        }
        Ok(Self { directions, frequencies_hz, left, right })
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn num_bins(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn response(&self, ear: Ear, direction_index: usize, bin: usize) -> Complex64 {
        let idx = direction_index * self.num_bins() + bin;
        match ear {
            Ear::Left => self.left[idx],
            Ear::Right => self.right[idx],
        }
    }

    /// Index of the measured direction matching `dir` within `tol` radians.
    pub fn find_direction(&self, dir: &Direction, tol: f64) -> Option<usize> {
        self.directions.iter().position(|d| d.approx_eq(dir, tol))
    }
}

/// Per-ear spherical-harmonic expansions of an HRTF set, sharing one
/// convention, order, and frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HrtfShCoefficients {
    pub left: ShCoefficients,
    pub right: ShCoefficients,
}

impl HrtfShCoefficients {
    pub fn convention(&self) -> ConventionSystem {
        self.left.convention
    }

    pub fn max_order(&self) -> u32 {
        self.left.max_order()
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        self.left.frequencies_hz()
    }

    pub fn ear(&self, ear: Ear) -> &ShCoefficients {
        match ear {
            Ear::Left => &self.left,
            Ear::Right => &self.right,
        }
    }
}

/// Matches each grid node to a measured direction and returns the data row
/// indices in grid order.
fn match_grid(set: &HrtfSet, grid: &QuadratureGrid) -> Result<Vec<usize>, HrtfError> {
    grid.nodes
        .iter()
        .map(|node| {
            set.find_direction(node, DIRECTION_MATCH_TOL).ok_or(HrtfError::MissingDirection {
                colatitude: node.colatitude(),
                azimuth: node.azimuth(),
            })
        })
        .collect()
}

/// Expands an HRTF set on the sphere.
///
/// The set must sample all nodes of `grid`. With an incidence target the
/// expansion is a plain quadrature analysis. With a propagation target the
/// transfer function is re-parameterized by the direction the sound travels,
/// so each sample is attributed to the antipodal direction; the antipodal
/// node set is not the grid itself, but it integrates band-limited functions
/// just as exactly.
///
/// The result is tagged with the negative-exponent transform and no field
/// factor; use [`encode_hrtf_for_convention`] to target a full convention.
pub fn encode_hrtf(
    set: &HrtfSet,
    grid: &QuadratureGrid,
    reference: DirectionReference,
    flavor: ShFlavor,
    max_order: u32,
) -> Result<HrtfShCoefficients, HrtfError> {
    if max_order > grid.exact_order {
        return Err(HrtfError::Sh(ShError::GridExactnessTooLow {
            requested: max_order,
            available: grid.exact_order,
        }));
    }
    let rows = match_grid(set, grid)?;
    let analysis_dirs: Vec<Direction> = match reference {
        DirectionReference::Incidence => grid.nodes.clone(),
        DirectionReference::Propagation => grid.nodes.iter().map(|d| d.antipode()).collect(),
    };
    let convention = ConventionSystem {
        flavor,
        reference,
        fourier_sign: FourierSign::NegativeExponent,
        field_factor: FieldFactor::Unit,
    };
    let frequencies = set.frequencies_hz().to_vec();
    let mut left =
        ShCoefficients::zeros(CoeffKind::Ring, convention, max_order, frequencies.clone())?;
    let mut right = ShCoefficients::zeros(CoeffKind::Ring, convention, max_order, frequencies)?;
    let mut samples = Vec::with_capacity(grid.num_nodes());
    for (ear, out) in [(Ear::Left, &mut left), (Ear::Right, &mut right)] {
        for bin in 0..set.num_bins() {
            samples.clear();
            samples.extend(rows.iter().map(|&row| set.response(ear, row, bin)));
            let coeffs = sh::sh_analysis_weighted(
                &samples,
                &analysis_dirs,
                &grid.weights,
                flavor,
                max_order,
            )?;
            out.bin_mut(bin).copy_from_slice(&coeffs);
        }
    }
    Ok(HrtfShCoefficients { left, right })
}

/// Expands an HRTF set ready for rendering under a full convention: encodes
/// with the convention's flavor and reference, conjugates the spectra when
/// the convention uses the positive-exponent transform, and tags all four
/// axes.
pub fn encode_hrtf_for_convention(
    set: &HrtfSet,
    grid: &QuadratureGrid,
    sys: &ConventionSystem,
    max_order: u32,
) -> Result<HrtfShCoefficients, HrtfError> {
    let mut pair = encode_hrtf(set, grid, sys.reference, sys.flavor, max_order)?;
    if sys.conjugate_to_common_sign() {
        // Measured spectra are negative-exponent; the target reads them
        // conjugated.
        pair.left.conjugate_in_place();
        pair.right.conjugate_in_place();
    }
    pair.left.convention = *sys;
    pair.right.convention = *sys;
    Ok(pair)
}

/// A band-limited random HRTF stand-in whose exact expansion is known.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticHrtf {
    /// The generator sampled at a grid's nodes, shaped like a measurement.
    pub set: HrtfSet,
    /// The generating expansion (incidence reference, negative exponent).
    pub generator: HrtfShCoefficients,
}

impl SyntheticHrtf {
    /// Evaluates the generator exactly at any direction.
    pub fn evaluate(&self, ear: Ear, dir: Direction, bin: usize) -> Result<Complex64, ShError> {
        self.generator.ear(ear).synthesize(bin, dir)
    }
}

/// Draws a random band-limited HRTF-like set, reproducible from `seed`.
///
/// Coefficients up to `max_order` are filled with independent uniform values
/// in `[-1, 1)` for both real and imaginary parts, in a fixed traversal
/// order (ear, then bin, then coefficient), then sampled at the grid nodes
/// so the result doubles as a synthetic measurement.
pub fn synth_hrtf(
    seed: u64,
    max_order: u32,
    frequencies_hz: &[f64],
    grid: &QuadratureGrid,
) -> Result<SyntheticHrtf, HrtfError> {
    if frequencies_hz.is_empty() {
        return Err(HrtfError::EmptyFrequencies);
    }
    for &f in frequencies_hz {
        if !f.is_finite() || f < 0.0 {
            return Err(HrtfError::InvalidFrequency { frequency_hz: f });
        }
    }
    let convention = ConventionSystem {
        flavor: ShFlavor::ComplexGd,
        reference: DirectionReference::Incidence,
        fourier_sign: FourierSign::NegativeExponent,
        field_factor: FieldFactor::Unit,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || {
        // 53 random mantissa bits, mapped to [-1, 1).
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut left = ShCoefficients::zeros(
        CoeffKind::Ring,
        convention,
        max_order,
        frequencies_hz.to_vec(),
    )?;
    let mut right = left.clone();
    for out in [&mut left, &mut right] {
        for bin in 0..frequencies_hz.len() {
            for v in out.bin_mut(bin) {
                *v = Complex64::new(unit(), unit());
            }
        }
    }
    let generator = HrtfShCoefficients { left, right };
    let mut left_samples = Vec::with_capacity(grid.num_nodes() * frequencies_hz.len());
    let mut right_samples = Vec::with_capacity(grid.num_nodes() * frequencies_hz.len());
    for node in &grid.nodes {
        for bin in 0..frequencies_hz.len() {
            left_samples.push(generator.left.synthesize(bin, *node)?);
            right_samples.push(generator.right.synthesize(bin, *node)?);
        }
    }
    let set = HrtfSet::new(
        grid.nodes.clone(),
        frequencies_hz.to_vec(),
        left_samples,
        right_samples,
    )?;
    Ok(SyntheticHrtf { set, generator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sh::make_gauss_grid;
    use alloc::vec;
    use core::f64::consts::PI;

    fn constant_set(value: Complex64, grid: &QuadratureGrid) -> HrtfSet {
        let n = grid.num_nodes();
        HrtfSet::new(
            grid.nodes.clone(),
            vec![1000.0],
            vec![value; n],
            vec![value * 0.5; n],
        )
        .unwrap()
    }

    #[test]
    fn set_validates_shapes() {
        let d = Direction::new(1.0, 1.0).unwrap();
        assert_eq!(
            HrtfSet::new(vec![], vec![1.0], vec![], vec![]),
            Err(HrtfError::EmptyDirections)
        );
        assert_eq!(
            HrtfSet::new(vec![d], vec![], vec![], vec![]),
            Err(HrtfError::EmptyFrequencies)
        );
        assert!(matches!(
            HrtfSet::new(vec![d], vec![1.0], vec![Complex64::new(1.0, 0.0); 2], vec![
                Complex64::new(1.0, 0.0)
            ]),
            Err(HrtfError::DataLengthMismatch { expected: 1, got: 2 })
        ));
        assert!(matches!(
            HrtfSet::new(vec![d], vec![-5.0], vec![Complex64::new(1.0, 0.0)], vec![
                Complex64::new(1.0, 0.0)
            ]),
            Err(HrtfError::InvalidFrequency { .. })
        ));
    }

    #[test]
    fn constant_response_encodes_to_the_uniform_harmonic() {
        let grid = make_gauss_grid(3).unwrap();
        let value = Complex64::new(2.0, -1.0);
        let set = constant_set(value, &grid);
        for reference in [DirectionReference::Incidence, DirectionReference::Propagation] {
            let pair =
                encode_hrtf(&set, &grid, reference, ShFlavor::ComplexGd, 3).unwrap();
            let want = value * (4.0 * PI).sqrt();
            assert!((pair.left.at(0, 0, 0) - want).norm() < 1e-12);
            for n in 1..=3u32 {
                for m in -(n as i32)..=(n as i32) {
                    assert!(pair.left.at(0, n, m).norm() < 1e-12);
                }
            }
            assert!((pair.right.at(0, 0, 0) - want * 0.5).norm() < 1e-12);
        }
    }

    #[test]
    fn reference_flip_scales_orders_by_parity() {
        let grid = make_gauss_grid(4).unwrap();
        let synth = synth_hrtf(7, 4, &[500.0, 1500.0], &grid).unwrap();
        let inc = encode_hrtf(
            &synth.set,
            &grid,
            DirectionReference::Incidence,
            ShFlavor::ComplexGd,
            4,
        )
        .unwrap();
        let prop = encode_hrtf(
            &synth.set,
            &grid,
            DirectionReference::Propagation,
            ShFlavor::ComplexGd,
            4,
        )
        .unwrap();
        for bin in 0..2 {
            for n in 0..=4u32 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                for m in -(n as i32)..=(n as i32) {
                    let want = inc.left.at(bin, n, m) * sign;
                    let got = prop.left.at(bin, n, m);
                    assert!((got - want).norm() < 1e-10, "bin {bin} ({n},{m})");
                }
            }
        }
    }

    #[test]
    fn encoding_recovers_a_band_limited_generator() {
        let grid = make_gauss_grid(3).unwrap();
        let synth = synth_hrtf(42, 3, &[250.0, 750.0], &grid).unwrap();
        let pair = encode_hrtf(
            &synth.set,
            &grid,
            DirectionReference::Incidence,
            ShFlavor::ComplexGd,
            3,
        )
        .unwrap();
        for bin in 0..2 {
            for (got, want) in pair.left.bin(bin).iter().zip(synth.generator.left.bin(bin)) {
                assert!((got - want).norm() < 1e-11);
            }
            for (got, want) in pair.right.bin(bin).iter().zip(synth.generator.right.bin(bin)) {
                assert!((got - want).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn convention_encode_conjugates_swapped_sign_rows() {
        let grid = make_gauss_grid(2).unwrap();
        let synth = synth_hrtf(3, 2, &[1000.0], &grid).unwrap();
        let r4 = ConventionSystem::from_row(4).unwrap();
        let r5 = ConventionSystem::from_row(5).unwrap();
        let e4 = encode_hrtf_for_convention(&synth.set, &grid, &r4, 2).unwrap();
        let e5 = encode_hrtf_for_convention(&synth.set, &grid, &r5, 2).unwrap();
        assert_eq!(e4.convention(), r4);
        assert_eq!(e5.convention(), r5);
        for (a, b) in e4.left.bin(0).iter().zip(e5.left.bin(0)) {
            assert!((b - a.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn missing_direction_is_reported() {
        let grid = make_gauss_grid(2).unwrap();
        let mut dirs = grid.nodes.clone();
        dirs.pop();
        dirs.push(Direction::new(0.123, 0.456).unwrap());
        let n = dirs.len();
        let set = HrtfSet::new(
            dirs,
            vec![1000.0],
            vec![Complex64::new(1.0, 0.0); n],
            vec![Complex64::new(1.0, 0.0); n],
        )
        .unwrap();
        assert!(matches!(
            encode_hrtf(&set, &grid, DirectionReference::Incidence, ShFlavor::RealN3d, 2),
            Err(HrtfError::MissingDirection { .. })
        ));
    }

    #[test]
    fn synthesis_is_deterministic_per_seed() {
        let grid = make_gauss_grid(2).unwrap();
        let a = synth_hrtf(9, 2, &[1000.0], &grid).unwrap();
        let b = synth_hrtf(9, 2, &[1000.0], &grid).unwrap();
        assert_eq!(a, b);
        let c = synth_hrtf(10, 2, &[1000.0], &grid).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn evaluate_matches_the_sampled_set() {
        let grid = make_gauss_grid(2).unwrap();
        let synth = synth_hrtf(5, 2, &[400.0], &grid).unwrap();
        for (i, node) in grid.nodes.iter().enumerate() {
            for ear in Ear::BOTH {
                let direct = synth.set.response(ear, i, 0);
                let evaluated = synth.evaluate(ear, *node, 0).unwrap();
                assert!((direct - evaluated).norm() < 1e-12);
            }
        }
    }
}
