//! Convention bookkeeping: the four independent choices that published
//! sound-field formulations disagree on.
//!
//! A coefficient set is meaningless without knowing all four axes, so the
//! carrying type [`ConventionSystem`] travels with every coefficient
//! container in this crate and renderers refuse mismatched combinations.

use crate::sh::ShFlavor;
use core::fmt;
use num_complex::Complex64;

/// Whether plane-wave expansion coefficients are indexed by the direction the
/// wave travels toward, or the direction it arrives from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirectionReference {
    Propagation,
    Incidence,
}

impl fmt::Display for DirectionReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DirectionReference::Propagation => "propagation",
            DirectionReference::Incidence => "incidence",
        })
    }
}

/// Sign of the exponent in the time-frequency kernel `e^{sign * i w t}` used
/// when the frequency-domain quantities were defined.
///
/// `NegativeExponent` is the common engineering transform; under it an
/// outgoing wave is a spherical Hankel function of the second kind. The two
/// choices produce mutually conjugate spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourierSign {
    NegativeExponent,
    PositiveExponent,
}

impl fmt::Display for FourierSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FourierSign::NegativeExponent => "negative_exponent",
            FourierSign::PositiveExponent => "positive_exponent",
        })
    }
}

/// Per-order factor some formulations absorb into the field coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldFactor {
    /// No factor absorbed; the rendering sum divides it out instead.
    Unit,
    /// `4 pi i^{-n}`.
    FourPiINegN,
    /// `4 pi i^{+n}`.
    FourPiIPosN,
}

impl fmt::Display for FieldFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldFactor::Unit => "unit",
            FieldFactor::FourPiINegN => "four_pi_i_neg_n",
            FieldFactor::FourPiIPosN => "four_pi_i_pos_n",
        })
    }
}

/// `i^k` for signed `k`, computed exactly.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// One complete set of formulation choices.
///
/// Five named combinations cover the formulations this crate interoperates
/// with; [`ConventionSystem::from_row`] constructs them by their table row
/// and [`ConventionSystem::row_id`] recovers the row of a known combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConventionSystem {
    pub flavor: ShFlavor,
    pub reference: DirectionReference,
    pub fourier_sign: FourierSign,
    pub field_factor: FieldFactor,
}

impl ConventionSystem {
    /// The five interoperable combinations, numbered 1 through 5.
    pub fn from_row(row: u8) -> Option<Self> {
        let sys = match row {
            1 => ConventionSystem {
                flavor: ShFlavor::ComplexGd,
                reference: DirectionReference::Propagation,
                fourier_sign: FourierSign::NegativeExponent,
                field_factor: FieldFactor::Unit,
            },
            2 => ConventionSystem {
                flavor: ShFlavor::ComplexGd,
                reference: DirectionReference::Propagation,
                fourier_sign: FourierSign::NegativeExponent,
                field_factor: FieldFactor::FourPiINegN,
            },
            3 => ConventionSystem {
                flavor: ShFlavor::ComplexWilliams,
                reference: DirectionReference::Propagation,
                fourier_sign: FourierSign::NegativeExponent,
                field_factor: FieldFactor::FourPiINegN,
            },
            4 => ConventionSystem {
                flavor: ShFlavor::RealN3d,
                reference: DirectionReference::Incidence,
                fourier_sign: FourierSign::NegativeExponent,
                field_factor: FieldFactor::FourPiIPosN,
            },
            5 => ConventionSystem {
                flavor: ShFlavor::RealN3d,
                reference: DirectionReference::Incidence,
                fourier_sign: FourierSign::PositiveExponent,
                field_factor: FieldFactor::FourPiINegN,
            },
            _ => return None,
        };
        Some(sys)
    }

    /// Row number if this combination is one of the five named ones.
    pub fn row_id(&self) -> Option<u8> {
        (1..=5u8).find(|&row| ConventionSystem::from_row(row) == Some(*self))
    }

    /// The per-order field factor as printed, i.e. before accounting for the
    /// Fourier sign: 1, `4 pi i^{-n}`, or `4 pi i^{+n}`.
    pub fn printed_field_factor(&self, n: u32) -> Complex64 {
        match self.field_factor {
            FieldFactor::Unit => Complex64::new(1.0, 0.0),
            FieldFactor::FourPiINegN => i_pow(-(n as i64)) * (4.0 * core::f64::consts::PI),
            FieldFactor::FourPiIPosN => i_pow(n as i64) * (4.0 * core::f64::consts::PI),
        }
    }

    /// The field factor re-expressed in the negative-exponent transform.
    ///
    /// A positive-exponent formulation's spectra are the conjugates of their
    /// negative-exponent counterparts, so its printed factor appears
    /// conjugated when the whole pipeline is compared on common ground.
    pub fn field_factor_common_sign(&self, n: u32) -> Complex64 {
        let printed = self.printed_field_factor(n);
        match self.fourier_sign {
            FourierSign::NegativeExponent => printed,
            FourierSign::PositiveExponent => printed.conj(),
        }
    }

    /// Per-order factor a plane-wave encoder multiplies into the field
    /// coefficients, in this convention's own transform.
    ///
    /// When the expansion prints a `4 pi i^{+-n}` factor, the coefficients
    /// are bare. When it prints none (`Unit`), the coefficients themselves
    /// carry the plane-wave factor and the rendering sum divides it out.
    pub fn absorbed_encode_factor(&self, n: u32) -> Complex64 {
        match self.field_factor {
            FieldFactor::Unit => {
                let f = i_pow(-(n as i64)) * (4.0 * core::f64::consts::PI);
                match self.fourier_sign {
                    FourierSign::NegativeExponent => f,
                    FourierSign::PositiveExponent => f.conj(),
                }
            }
            _ => Complex64::new(1.0, 0.0),
        }
    }

    /// Per-order factor the rendering sum applies to each product term; the
    /// exact inverse of [`ConventionSystem::absorbed_encode_factor`].
    pub fn render_prefactor(&self, n: u32) -> Complex64 {
        match self.field_factor {
            FieldFactor::Unit => {
                let f = i_pow(n as i64) / (4.0 * core::f64::consts::PI);
                match self.fourier_sign {
                    FourierSign::NegativeExponent => f,
                    FourierSign::PositiveExponent => f.conj(),
                }
            }
            _ => Complex64::new(1.0, 0.0),
        }
    }

    /// Whether frequency-domain data in this convention must be conjugated to
    /// compare against negative-exponent data.
    pub fn conjugate_to_common_sign(&self) -> bool {
        self.fourier_sign == FourierSign::PositiveExponent
    }
}

impl fmt::Display for ConventionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row_id() {
            Some(row) => write!(
                f,
                "row{row} ({}, {}, {}, {})",
                self.flavor, self.reference, self.fourier_sign, self.field_factor
            ),
            None => write!(
                f,
                "custom ({}, {}, {}, {})",
                self.flavor, self.reference, self.fourier_sign, self.field_factor
            ),
        }
    }
}
