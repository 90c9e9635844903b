//! Binaural rendering in the spherical-harmonic domain, convention
//! conversion of coefficient sets, and simulation of two classic
//! sign-convention mistakes.

use crate::coefficients::{CoeffKind, ShCoefficients};
use crate::convention::{ConventionSystem, FourierSign};
use crate::hrtf::{Ear, HrtfShCoefficients};
use crate::sh::{self, ShError, ShFlavor};
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

/// Which of the four convention axes two tagged data sets disagree on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchAxis {
    Flavor,
    Reference,
    FourierSign,
    FieldFactor,
}

impl fmt::Display for MismatchAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MismatchAxis::Flavor => "basis flavor",
            MismatchAxis::Reference => "direction reference",
            MismatchAxis::FourierSign => "transform sign",
            MismatchAxis::FieldFactor => "field factor",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenderError {
    /// Field data must be breve coefficients; transfer functions ring ones.
    WrongKind { expected: CoeffKind, got: CoeffKind },
    /// Field and transfer-function conventions disagree; rendering across
    /// conventions silently is precisely the bug class this crate refuses.
    ConventionMismatch { axis: MismatchAxis },
    /// The two ears of a transfer-function pair are inconsistent.
    InconsistentEars,
    /// Frequency axes differ.
    FrequencyMismatch,
    /// Conversion of field coefficients is defined only between the named
    /// convention rows.
    UnknownConvention,
    /// The requested defect does not exist under this convention.
    DefectNotApplicable { defect: RenderDefect },
    Sh(ShError),
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::WrongKind { expected, got } => {
                write!(f, "expected {expected} coefficients, got {got}")
            }
            RenderError::ConventionMismatch { axis } => {
                write!(f, "field and transfer-function conventions disagree on the {axis}")
            }
            RenderError::InconsistentEars => {
                write!(f, "left and right expansions disagree on convention, order, or bins")
            }
            RenderError::FrequencyMismatch => write!(f, "frequency axes differ"),
            RenderError::UnknownConvention => {
                write!(f, "field conversion is only defined between the named convention rows")
            }
            RenderError::DefectNotApplicable { defect } => {
                write!(f, "defect {defect} does not arise under this convention")
            }
            RenderError::Sh(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RenderError {}

impl From<ShError> for RenderError {
    fn from(e: ShError) -> Self {
        RenderError::Sh(e)
    }
}

/// Per-ear binaural spectra, tagged with the transform sign they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct BinauralOutput {
    pub fourier_sign: FourierSign,
    frequencies_hz: Vec<f64>,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl BinauralOutput {
    pub fn new(
        fourier_sign: FourierSign,
        frequencies_hz: Vec<f64>,
        left: Vec<Complex64>,
        right: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(left.len(), frequencies_hz.len());
        debug_assert_eq!(right.len(), frequencies_hz.len());
        Self { fourier_sign, frequencies_hz, left, right }
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn num_bins(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn ear(&self, ear: Ear) -> &[Complex64] {
        match ear {
            Ear::Left => &self.left,
            Ear::Right => &self.right,
        }
    }

    /// The same signal expressed in the negative-exponent transform, for
    /// comparing outputs across conventions.
    pub fn in_common_sign(&self) -> BinauralOutput {
        match self.fourier_sign {
            FourierSign::NegativeExponent => self.clone(),
            FourierSign::PositiveExponent => BinauralOutput {
                fourier_sign: FourierSign::NegativeExponent,
                frequencies_hz: self.frequencies_hz.clone(),
                left: self.left.iter().map(|v| v.conj()).collect(),
                right: self.right.iter().map(|v| v.conj()).collect(),
            },
        }
    }
}

fn first_mismatched_axis(a: &ConventionSystem, b: &ConventionSystem) -> Option<MismatchAxis> {
    if a.flavor != b.flavor {
        Some(MismatchAxis::Flavor)
    } else if a.reference != b.reference {
        Some(MismatchAxis::Reference)
    } else if a.fourier_sign != b.fourier_sign {
        Some(MismatchAxis::FourierSign)
    } else if a.field_factor != b.field_factor {
        Some(MismatchAxis::FieldFactor)
    } else {
        None
    }
}

fn check_hrtf_pair(hrtf: &HrtfShCoefficients) -> Result<(), RenderError> {
    if hrtf.left.kind != CoeffKind::Ring {
        return Err(RenderError::WrongKind { expected: CoeffKind::Ring, got: hrtf.left.kind });
    }
    if hrtf.left.convention != hrtf.right.convention
        || hrtf.left.max_order() != hrtf.right.max_order()
        || hrtf.left.frequencies_hz() != hrtf.right.frequencies_hz()
    {
        return Err(RenderError::InconsistentEars);
    }
    Ok(())
}

/// The coupling the rendering sum uses for one `(n, m)` term. It follows
/// from the Gram structure of the unconjugated product of two harmonics,
/// so it is a property of the basis flavor alone.
fn pair_term(
    flavor: ShFlavor,
    field_bin: &[Complex64],
    hrtf_bin: &[Complex64],
    n: u32,
    m: i32,
) -> Complex64 {
    match flavor {
        ShFlavor::ComplexGd => field_bin[sh::acn(n, -m)] * hrtf_bin[sh::acn(n, m)],
        ShFlavor::ComplexWilliams => {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            field_bin[sh::acn(n, -m)] * hrtf_bin[sh::acn(n, m)] * sign
        }
        ShFlavor::RealN3d => field_bin[sh::acn(n, m)] * hrtf_bin[sh::acn(n, m)],
    }
}

/// Renders a sound field through a transfer-function pair.
///
/// Both inputs must carry identical convention tags on all four axes; the
/// output stays in that convention's transform sign. Orders are truncated
/// to the smaller of the two expansions.
pub fn render(
    field: &ShCoefficients,
    hrtf: &HrtfShCoefficients,
) -> Result<BinauralOutput, RenderError> {
    render_impl(field, hrtf, None)
}

/// [`render`] with one deliberately injected mistake, for studying what a
/// convention bug sounds like. See [`RenderDefect`].
pub fn render_with_defect(
    field: &ShCoefficients,
    hrtf: &HrtfShCoefficients,
    defect: RenderDefect,
) -> Result<BinauralOutput, RenderError> {
    check_defect_applies(defect, &field.convention)?;
    render_impl(field, hrtf, Some(defect))
}

fn render_impl(
    field: &ShCoefficients,
    hrtf: &HrtfShCoefficients,
    defect: Option<RenderDefect>,
) -> Result<BinauralOutput, RenderError> {
    if field.kind != CoeffKind::Breve {
        return Err(RenderError::WrongKind { expected: CoeffKind::Breve, got: field.kind });
    }
    check_hrtf_pair(hrtf)?;
    let sys = field.convention;
    if let Some(axis) = first_mismatched_axis(&sys, &hrtf.convention()) {
        return Err(RenderError::ConventionMismatch { axis });
    }
    if field.frequencies_hz() != hrtf.frequencies_hz() {
        return Err(RenderError::FrequencyMismatch);
    }
    let n_max = field.max_order().min(hrtf.max_order());
    let num_bins = field.num_bins();
    let mut left = Vec::with_capacity(num_bins);
    let mut right = Vec::with_capacity(num_bins);
    for bin in 0..num_bins {
        let field_bin = field.bin(bin);
        for (ear, out) in [(Ear::Left, &mut left), (Ear::Right, &mut right)] {
            let hrtf_bin = hrtf.ear(ear).bin(bin);
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..=n_max {
                let mut pre = sys.render_prefactor(n);
                match defect {
                    Some(RenderDefect::SwapIPowers) => {
                        // i^{+-n} written with the opposite sign of n wherever
                        // the convention uses it. For these rows the net
                        // effect on each term is a parity factor.
                        if n % 2 == 1 {
                            pre = -pre;
                        }
                    }
                    Some(RenderDefect::DropMinusOneM) | None => {}
                }
                for m in -(n as i32)..=(n as i32) {
                    let mut term = pair_term(sys.flavor, field_bin, hrtf_bin, n, m);
                    if defect == Some(RenderDefect::DropMinusOneM) && m % 2 != 0 {
                        // The flavor's (-1)^m coupling factor got forgotten.
                        term = -term;
                    }
                    acc += term * pre;
                }
            }
            out.push(acc);
        }
    }
    Ok(BinauralOutput {
        fourier_sign: sys.fourier_sign,
        frequencies_hz: field.frequencies_hz().to_vec(),
        left,
        right,
    })
}

/// The spherical-harmonic expansion of the directional amplitude density the
/// field coefficients describe, with any per-order convention factor divided
/// out. Integrating this density against a transfer function over the
/// sphere reproduces [`render`].
pub fn plane_wave_density(field: &ShCoefficients) -> Result<ShCoefficients, RenderError> {
    if field.kind != CoeffKind::Breve {
        return Err(RenderError::WrongKind { expected: CoeffKind::Breve, got: field.kind });
    }
    let mut out = field.clone();
    let sys = field.convention;
    out.scale_per_order(|n| sys.render_prefactor(n));
    out.kind = CoeffKind::Ring;
    Ok(out)
}

/// Re-expresses tagged coefficients under another convention, preserving
/// what they describe.
///
/// Field (breve) coefficients convert only between the named rows: the
/// per-order factor ratio between two rows also carries their direction
/// reference flip, an identity that holds for the table but not for
/// arbitrary axis combinations. Transfer-function (ring) coefficients
/// convert between any two systems; the field-factor axis is inert for
/// them.
pub fn convert_convention(
    coeffs: &ShCoefficients,
    target: &ConventionSystem,
) -> Result<ShCoefficients, RenderError> {
    let src = coeffs.convention;
    if src == *target {
        return Ok(coeffs.clone());
    }
    match coeffs.kind {
        CoeffKind::Breve => {
            if src.row_id().is_none() || target.row_id().is_none() {
                return Err(RenderError::UnknownConvention);
            }
            let mut out = coeffs.clone();
            if src.conjugate_to_common_sign() {
                out.conjugate_in_place();
            }
            out.scale_per_order(|n| {
                src.field_factor_common_sign(n) / target.field_factor_common_sign(n)
            });
            let mut out = out.convert_flavor(target.flavor)?;
            if target.conjugate_to_common_sign() {
                out.conjugate_in_place();
            }
            out.convention = *target;
            Ok(out)
        }
        CoeffKind::Ring => {
            let mut out = coeffs.clone();
            if src.conjugate_to_common_sign() {
                out.conjugate_in_place();
            }
            if src.reference != target.reference {
                // Reparameterizing by the opposite direction scales each
                // order by its parity.
                out.scale_per_order(|n| {
                    Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                });
            }
            let mut out = out.convert_flavor(target.flavor)?;
            if target.conjugate_to_common_sign() {
                out.conjugate_in_place();
            }
            out.convention = *target;
            Ok(out)
        }
    }
}

/// Two classic convention mistakes this crate can inject on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderDefect {
    /// Forgetting the `(-1)^m` coupling factor in the rendering sum of the
    /// complex flavor that needs one. Sounds like the scene rotated half a
    /// turn in azimuth.
    DropMinusOneM,
    /// Writing `i^{+n}` where the convention demands `i^{-n}` (or vice
    /// versa). Scales every odd order by -1; applying it twice cancels out.
    SwapIPowers,
}

impl fmt::Display for RenderDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RenderDefect::DropMinusOneM => "drop_minus_one_m",
            RenderDefect::SwapIPowers => "swap_i_powers",
        })
    }
}

fn check_defect_applies(defect: RenderDefect, sys: &ConventionSystem) -> Result<(), RenderError> {
    let applies = match defect {
        // Only the Williams-flavor row has the (-1)^m to forget.
        RenderDefect::DropMinusOneM => sys.row_id() == Some(3),
        // Only rows whose formulas spell out i^{-n} powers can swap them.
        RenderDefect::SwapIPowers => matches!(sys.row_id(), Some(1) | Some(2)),
    };
    if applies {
        Ok(())
    } else {
        Err(RenderError::DefectNotApplicable { defect })
    }
}

/// Returns the field coefficients a pipeline with the given defect would
/// effectively be rendering: feeding the result to a correct [`render`]
/// reproduces [`render_with_defect`] on the original.
pub fn simulate_missing_sign_defect(
    field: &ShCoefficients,
    defect: RenderDefect,
) -> Result<ShCoefficients, RenderError> {
    if field.kind != CoeffKind::Breve {
        return Err(RenderError::WrongKind { expected: CoeffKind::Breve, got: field.kind });
    }
    check_defect_applies(defect, &field.convention)?;
    let mut out = field.clone();
    match defect {
        RenderDefect::SwapIPowers => {
            out.scale_per_order(|n| Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        }
        RenderDefect::DropMinusOneM => {
            for bin in 0..out.num_bins() {
                let data = out.bin_mut(bin);
                for n in 0..=field.max_order() {
                    for m in -(n as i32)..=(n as i32) {
                        if m % 2 != 0 {
                            data[sh::acn(n, m)] = -data[sh::acn(n, m)];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
