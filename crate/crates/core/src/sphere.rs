//! Rigid-sphere microphone arrays: plane-wave scenes, surface pressure,
//! modal strengths, regularized radial filters, and the encoding step that
//! turns surface pressure into field coefficients.

use crate::coefficients::{CoeffKind, ShCoefficients};
use crate::convention::{ConventionSystem, DirectionReference, FourierSign};
use crate::fmath;
use crate::sh::{self, sh_eval, Direction, QuadratureGrid, ShError};
use crate::special::{self, SpecialError};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereError {
    /// Radius or speed of sound is not a positive finite number.
    InvalidSphere { radius_m: f64, speed_of_sound_m_s: f64 },
    /// A wave amplitude is not finite.
    InvalidAmplitude,
    /// The scene contains no plane waves.
    EmptyScene,
    /// Frequency is not finite, or not strictly positive where the radial
    /// physics needs `k > 0`.
    InvalidFrequency { frequency_hz: f64 },
    /// The grid cannot resolve the field at the highest requested frequency.
    GridTooCoarse { exact_order: u32, k_radius: f64 },
    /// Max gain of the radial filter is not finite.
    InvalidFilterGain { max_gain_db: f64 },
    /// Pressure data and encoder disagree on the Fourier transform sign.
    TransformSignMismatch,
    Sh(ShError),
    Special(SpecialError),
}

impl fmt::Display for SphereError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereError::InvalidSphere { radius_m, speed_of_sound_m_s } => write!(
                f,
                "sphere radius {radius_m} m and speed of sound {speed_of_sound_m_s} m/s must be positive and finite"
            ),
            SphereError::InvalidAmplitude => write!(f, "wave amplitude must be finite"),
            SphereError::EmptyScene => write!(f, "scene has no waves"),
            SphereError::InvalidFrequency { frequency_hz } => {
                write!(f, "invalid frequency {frequency_hz} Hz")
            }
            SphereError::GridTooCoarse { exact_order, k_radius } => write!(
                f,
                "grid exact order {exact_order} cannot resolve kR = {k_radius}"
            ),
            SphereError::InvalidFilterGain { max_gain_db } => {
                write!(f, "invalid radial filter max gain {max_gain_db} dB")
            }
            SphereError::TransformSignMismatch => {
                write!(f, "pressure data and target convention use opposite transform signs")
            }
            SphereError::Sh(e) => write!(f, "{e}"),
            SphereError::Special(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SphereError {}

impl From<ShError> for SphereError {
    fn from(e: ShError) -> Self {
        SphereError::Sh(e)
    }
}

impl From<SpecialError> for SphereError {
    fn from(e: SpecialError) -> Self {
        SphereError::Special(e)
    }
}

/// Geometry and medium of a rigid-sphere array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    radius_m: f64,
    speed_of_sound_m_s: f64,
}

impl SphereSpec {
    pub fn new(radius_m: f64, speed_of_sound_m_s: f64) -> Result<Self, SphereError> {
        if !(radius_m.is_finite() && radius_m > 0.0)
            || !(speed_of_sound_m_s.is_finite() && speed_of_sound_m_s > 0.0)
        {
            return Err(SphereError::InvalidSphere { radius_m, speed_of_sound_m_s });
        }
        Ok(Self { radius_m, speed_of_sound_m_s })
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn speed_of_sound_m_s(&self) -> f64 {
        self.speed_of_sound_m_s
    }

    /// Dimensionless `kR` at the given frequency.
    pub fn k_radius(&self, frequency_hz: f64) -> f64 {
        2.0 * PI * frequency_hz / self.speed_of_sound_m_s * self.radius_m
    }
}

/// One plane wave, described by the direction it arrives from and its
/// complex amplitude in the negative-exponent transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Complex64,
    pub incidence: Direction,
}

impl PlaneWave {
    pub fn new(amplitude: Complex64, incidence: Direction) -> Result<Self, SphereError> {
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(SphereError::InvalidAmplitude);
        }
        Ok(Self { amplitude, incidence })
    }

    /// The wave's direction as seen by a convention: the arrival direction
    /// itself, or its antipode for propagation-referenced conventions.
    pub fn direction_for(&self, reference: DirectionReference) -> Direction {
        match reference {
            DirectionReference::Incidence => self.incidence,
            DirectionReference::Propagation => self.incidence.antipode(),
        }
    }

    /// Amplitude as seen in the given transform; positive-exponent spectra
    /// are conjugates of negative-exponent ones.
    pub fn amplitude_for(&self, sign: FourierSign) -> Complex64 {
        match sign {
            FourierSign::NegativeExponent => self.amplitude,
            FourierSign::PositiveExponent => self.amplitude.conj(),
        }
    }
}

/// A non-empty superposition of plane waves.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveScene {
    waves: Vec<PlaneWave>,
}

impl PlaneWaveScene {
    pub fn new(waves: Vec<PlaneWave>) -> Result<Self, SphereError> {
        if waves.is_empty() {
            return Err(SphereError::EmptyScene);
        }
        Ok(Self { waves })
    }

    pub fn waves(&self) -> &[PlaneWave] {
        &self.waves
    }
}

/// Regularization settings for inverting the modal strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFilterSpec {
    max_gain_db: f64,
}

impl RadialFilterSpec {
    pub fn new(max_gain_db: f64) -> Result<Self, SphereError> {
        if !max_gain_db.is_finite() {
            return Err(SphereError::InvalidFilterGain { max_gain_db });
        }
        Ok(Self { max_gain_db })
    }

    pub fn max_gain_db(&self) -> f64 {
        self.max_gain_db
    }

    pub fn max_gain_linear(&self) -> f64 {
        fmath::powf(10.0, self.max_gain_db / 20.0)
    }
}

impl Default for RadialFilterSpec {
    /// 40 dB, a practical ceiling for measured arrays.
    fn default() -> Self {
        Self { max_gain_db: 40.0 }
    }
}

/// Hankel-function kind matching a transform sign: outgoing waves are second
/// kind under the negative exponent, first kind under the positive one.
fn hankel_for_sign(sign: FourierSign, n: u32, x: f64) -> Result<Complex64, SpecialError> {
    match sign {
        FourierSign::NegativeExponent => special::sph_hankel2(n, x),
        FourierSign::PositiveExponent => special::sph_hankel1(n, x),
    }
}

fn hankel_prime_for_sign(sign: FourierSign, n: u32, x: f64) -> Result<Complex64, SpecialError> {
    match sign {
        FourierSign::NegativeExponent => special::sph_hankel2_prime(n, x),
        FourierSign::PositiveExponent => special::sph_hankel1_prime(n, x),
    }
}

/// Modal strength of order `n` on a rigid sphere at `kR = k_radius`: the
/// incident-plus-scattered radial term
/// `j_n(kR) - (j_n'(kR) / h_n'(kR)) h_n(kR)`, times the per-order factor the
/// convention prints in its field expansion.
pub fn modal_strength(
    sys: &ConventionSystem,
    n: u32,
    k_radius: f64,
) -> Result<Complex64, SphereError> {
    if !(k_radius.is_finite() && k_radius > 0.0) {
        return Err(SphereError::InvalidFrequency { frequency_hz: k_radius });
    }
    let j = special::sph_bessel_j(n, k_radius)?;
    let jp = special::sph_bessel_j_prime(n, k_radius)?;
    let h = hankel_for_sign(sys.fourier_sign, n, k_radius)?;
    let hp = hankel_prime_for_sign(sys.fourier_sign, n, k_radius)?;
    let bracket = -h * (jp / hp) + j;
    Ok(bracket * modal_factor(sys, n))
}

/// Same quantity through the Wronskian shortcut
/// `-+ i / (kR)^2 / h_n'(kR)`, which avoids the cancellation-prone bracket.
pub fn modal_strength_closed(
    sys: &ConventionSystem,
    n: u32,
    k_radius: f64,
) -> Result<Complex64, SphereError> {
    if !(k_radius.is_finite() && k_radius > 0.0) {
        return Err(SphereError::InvalidFrequency { frequency_hz: k_radius });
    }
    let hp = hankel_prime_for_sign(sys.fourier_sign, n, k_radius)?;
    let num = match sys.fourier_sign {
        FourierSign::NegativeExponent => Complex64::new(0.0, -1.0),
        FourierSign::PositiveExponent => Complex64::new(0.0, 1.0),
    };
    let bracket = num / (k_radius * k_radius) / hp;
    Ok(bracket * modal_factor(sys, n))
}

/// The per-order factor inside the modal strength: the printed field factor,
/// or 1 when the convention prints none (the coefficients then carry it).
fn modal_factor(sys: &ConventionSystem, n: u32) -> Complex64 {
    sys.printed_field_factor(n)
}

/// Regularized inverse of the modal strength. The magnitude is soft-limited
/// to the configured max gain through an arctan characteristic; the phase
/// is kept exactly.
pub fn radial_filter(
    sys: &ConventionSystem,
    n: u32,
    k_radius: f64,
    spec: &RadialFilterSpec,
) -> Result<Complex64, SphereError> {
    let b = modal_strength_closed(sys, n, k_radius)?;
    let u = b.finv();
    let g_max = spec.max_gain_linear();
    if !u.re.is_finite() || !u.im.is_finite() {
        // b underflowed to zero; the limiter saturates at the cap.
        return Ok(Complex64::new(g_max, 0.0));
    }
    let g = u.norm();
    if g == 0.0 {
        return Ok(u);
    }
    let limited = (2.0 * g_max / PI) * fmath::atan(PI * g / (2.0 * g_max));
    let limited = limited.min(g_max);
    Ok(u * (limited / g))
}

/// Relative amount by which the limiter shrinks a gain `g` under a cap
/// `g_max`: zero means the filter is exact there.
pub fn limiter_relative_deviation(g: f64, g_max: f64) -> f64 {
    if g <= 0.0 {
        return 0.0;
    }
    let limited = (2.0 * g_max / PI) * fmath::atan(PI * g / (2.0 * g_max));
    1.0 - limited.min(g_max) / g
}

fn check_frequencies(frequencies_hz: &[f64], require_positive: bool) -> Result<(), SphereError> {
    for &f in frequencies_hz {
        let ok = f.is_finite() && if require_positive { f > 0.0 } else { f >= 0.0 };
        if !ok {
            return Err(SphereError::InvalidFrequency { frequency_hz: f });
        }
    }
    Ok(())
}

/// Field coefficients of a plane-wave scene, written directly from the
/// closed-form expansion (no microphones involved). Exact at every order
/// and frequency, including DC.
pub fn scene_field_coefficients(
    scene: &PlaneWaveScene,
    sys: &ConventionSystem,
    max_order: u32,
    frequencies_hz: &[f64],
) -> Result<ShCoefficients, SphereError> {
    check_frequencies(frequencies_hz, false)?;
    let mut out =
        ShCoefficients::zeros(CoeffKind::Breve, *sys, max_order, frequencies_hz.to_vec())?;
    // The coefficients of a frequency-flat wave are the same in every bin.
    let mut template = Vec::with_capacity(sh::num_coeffs(max_order));
    for wave in scene.waves() {
        let amp = wave.amplitude_for(sys.fourier_sign);
        let dir = wave.direction_for(sys.reference);
        template.clear();
        for n in 0..=max_order {
            let factor = sys.absorbed_encode_factor(n) * amp;
            for m in -(n as i32)..=(n as i32) {
                template.push(sh_eval(sys.flavor, n, m, dir)?.conj() * factor);
            }
        }
        for bin in 0..out.num_bins() {
            for (slot, term) in out.bin_mut(bin).iter_mut().zip(&template) {
                *slot += term;
            }
        }
    }
    Ok(out)
}

/// Complex pressure sampled on the surface of a rigid sphere, bin-major.
#[derive(Debug, Clone)]
pub struct SurfacePressure {
    pub sphere: SphereSpec,
    pub grid: QuadratureGrid,
    /// Transform sign of the stored spectra.
    pub fourier_sign: FourierSign,
    frequencies_hz: Vec<f64>,
    data: Vec<Complex64>,
}

impl SurfacePressure {
    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn num_bins(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn bin(&self, bin: usize) -> &[Complex64] {
        let s = self.grid.num_nodes();
        &self.data[bin * s..(bin + 1) * s]
    }
}

/// Cosine of the angle between two directions.
fn cos_angle(a: &Direction, b: &Direction) -> f64 {
    fmath::sin(a.colatitude()) * fmath::sin(b.colatitude())
        * fmath::cos(a.azimuth() - b.azimuth())
        + fmath::cos(a.colatitude()) * fmath::cos(b.colatitude())
}

/// Orders (inclusive) the pressure synthesis runs to. Deliberately beyond
/// the grid's exact order so that the simulated field contains the energy a
/// real array would alias.
fn synthesis_order(grid: &QuadratureGrid) -> u32 {
    grid.exact_order + 8
}

/// Simulates the total (incident plus scattered) pressure a rigid-sphere
/// array observes for a plane-wave scene.
///
/// The per-node sum uses the addition theorem, so each wave costs one
/// Legendre evaluation per node rather than a full basis sweep. The grid
/// must resolve the field: `exact_order >= kR` at the highest frequency.
pub fn simulate_surface_pressure(
    scene: &PlaneWaveScene,
    sphere: &SphereSpec,
    grid: &QuadratureGrid,
    sys: &ConventionSystem,
    frequencies_hz: &[f64],
) -> Result<SurfacePressure, SphereError> {
    check_frequencies(frequencies_hz, true)?;
    let x_max = frequencies_hz.iter().fold(0.0f64, |acc, &f| acc.max(sphere.k_radius(f)));
    if (grid.exact_order as f64) < x_max {
        return Err(SphereError::GridTooCoarse { exact_order: grid.exact_order, k_radius: x_max });
    }
    let n_synth = synthesis_order(grid);
    let num_nodes = grid.num_nodes();
    let mut data = alloc::vec![Complex64::new(0.0, 0.0); num_nodes * frequencies_hz.len()];
    for (bin, &f) in frequencies_hz.iter().enumerate() {
        let x = sphere.k_radius(f);
        // Per-order weight: modal strength times whatever factor the
        // encoding absorbs into the coefficients, times the addition
        // theorem's (2n+1)/(4 pi).
        let mut order_weight = Vec::with_capacity(n_synth as usize + 1);
        for n in 0..=n_synth {
            let w = modal_strength(sys, n, x)?
                * sys.absorbed_encode_factor(n)
                * ((2 * n + 1) as f64 / (4.0 * PI));
            order_weight.push(w);
        }
        let out = &mut data[bin * num_nodes..(bin + 1) * num_nodes];
        for wave in scene.waves() {
            let amp = wave.amplitude_for(sys.fourier_sign);
            let dir = wave.direction_for(sys.reference);
            for (node, slot) in grid.nodes.iter().zip(out.iter_mut()) {
                let mu = cos_angle(&dir, node).clamp(-1.0, 1.0);
                // P_0..P_{n_synth} by the three-term recurrence.
                let mut p_prev = 1.0;
                let mut p_cur = mu;
                let mut acc = order_weight[0] * p_prev;
                if n_synth >= 1 {
                    acc += order_weight[1] * p_cur;
                }
                for n in 2..=n_synth {
                    let p_next = ((2 * n - 1) as f64 * mu * p_cur
                        - (n - 1) as f64 * p_prev)
                        / n as f64;
                    p_prev = p_cur;
                    p_cur = p_next;
                    acc += order_weight[n as usize] * p_cur;
                }
                *slot += acc * amp;
            }
        }
    }
    Ok(SurfacePressure {
        sphere: *sphere,
        grid: grid.clone(),
        fourier_sign: sys.fourier_sign,
        frequencies_hz: frequencies_hz.to_vec(),
        data,
    })
}

/// Encodes surface pressure into field coefficients: spherical-harmonic
/// analysis on the grid followed by the regularized radial filter.
///
/// The pressure must have been recorded (or simulated) under the same
/// transform sign as the target convention.
pub fn sma_encode(
    pressure: &SurfacePressure,
    sys: &ConventionSystem,
    max_order: u32,
    filter: &RadialFilterSpec,
) -> Result<ShCoefficients, SphereError> {
    if pressure.fourier_sign != sys.fourier_sign {
        return Err(SphereError::TransformSignMismatch);
    }
    let mut out = ShCoefficients::zeros(
        CoeffKind::Breve,
        *sys,
        max_order,
        pressure.frequencies_hz.clone(),
    )?;
    for bin in 0..pressure.num_bins() {
        let x = pressure.sphere.k_radius(pressure.frequencies_hz[bin]);
        let raw = sh::sh_analysis(pressure.bin(bin), &pressure.grid, sys.flavor, max_order)?;
        let dst = out.bin_mut(bin);
        let mut idx = 0usize;
        for n in 0..=max_order {
            let f = radial_filter(sys, n, x, filter)?;
            for _ in 0..(2 * n + 1) {
                dst[idx] = raw[idx] * f;
                idx += 1;
            }
        }
    }
    Ok(out)
}
