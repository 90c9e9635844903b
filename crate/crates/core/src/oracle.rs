//! Convention-free reference answers: direct binaural sums over plane waves
//! and plain quadrature over the sphere. The rest of the crate is tested
//! against these.

use crate::convention::FourierSign;
use crate::hrtf::{Ear, HrtfSet, SyntheticHrtf, DIRECTION_MATCH_TOL};
use crate::render::BinauralOutput;
use crate::sh::{Direction, QuadratureGrid, ShError};
use crate::sphere::PlaneWaveScene;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleError {
    /// The responder has no measurement at the requested direction.
    DirectionNotMeasured { colatitude: f64, azimuth: f64 },
    Sh(ShError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::DirectionNotMeasured { colatitude, azimuth } => {
                write!(f, "no measurement at direction ({colatitude}, {azimuth})")
            }
            OracleError::Sh(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

impl From<ShError> for OracleError {
    fn from(e: ShError) -> Self {
        OracleError::Sh(e)
    }
}

/// Anything that can answer "what does this ear receive from a source in
/// that direction at that bin", in the negative-exponent transform.
///
/// Directions are always incidence here; the trait exists so oracles can be
/// phrased without spherical harmonics at all.
pub trait EarResponse {
    fn frequencies_hz(&self) -> &[f64];

    fn response(&self, ear: Ear, incidence: Direction, bin: usize)
        -> Result<Complex64, OracleError>;
}

impl EarResponse for HrtfSet {
    fn frequencies_hz(&self) -> &[f64] {
        HrtfSet::frequencies_hz(self)
    }

    /// Exact-match lookup; the set knows nothing between its measurements.
    fn response(
        &self,
        ear: Ear,
        incidence: Direction,
        bin: usize,
    ) -> Result<Complex64, OracleError> {
        let idx = self.find_direction(&incidence, DIRECTION_MATCH_TOL).ok_or(
            OracleError::DirectionNotMeasured {
                colatitude: incidence.colatitude(),
                azimuth: incidence.azimuth(),
            },
        )?;
        Ok(HrtfSet::response(self, ear, idx, bin))
    }
}

impl EarResponse for SyntheticHrtf {
    fn frequencies_hz(&self) -> &[f64] {
        self.set.frequencies_hz()
    }

    /// Band-limited synthesis, defined everywhere on the sphere.
    fn response(
        &self,
        ear: Ear,
        incidence: Direction,
        bin: usize,
    ) -> Result<Complex64, OracleError> {
        Ok(self.evaluate(ear, incidence, bin)?)
    }
}

/// The definitionally correct binaural signal of a plane-wave scene: each
/// wave's amplitude times the ear's response from its arrival direction,
/// summed. No spherical harmonics, no conventions, no array.
pub fn direct_binaural(
    scene: &PlaneWaveScene,
    responder: &impl EarResponse,
) -> Result<BinauralOutput, OracleError> {
    let frequencies = responder.frequencies_hz().to_vec();
    let mut left = Vec::with_capacity(frequencies.len());
    let mut right = Vec::with_capacity(frequencies.len());
    for bin in 0..frequencies.len() {
        for (ear, out) in [(Ear::Left, &mut left), (Ear::Right, &mut right)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for wave in scene.waves() {
                acc += wave.amplitude * responder.response(ear, wave.incidence, bin)?;
            }
            out.push(acc);
        }
    }
    Ok(BinauralOutput::new(FourierSign::NegativeExponent, frequencies, left, right))
}

/// Quadrature of an arbitrary function over the sphere.
pub fn integrate_sphere(
    f: impl Fn(Direction) -> Complex64,
    grid: &QuadratureGrid,
) -> Complex64 {
    grid.nodes
        .iter()
        .zip(&grid.weights)
        .fold(Complex64::new(0.0, 0.0), |acc, (node, w)| acc + f(*node) * *w)
}
