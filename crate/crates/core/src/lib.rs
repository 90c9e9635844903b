//! Sound-field capture and binaural rendering in the spherical-harmonic domain.
//!
//! The crate models the chain from a plane-wave sound scene, through a rigid
//! spherical microphone array, to the two ear signals of a listener:
//!
//! * [`special`]: associated Legendre and spherical Bessel/Hankel functions,
//! * [`sh`]: spherical-harmonic bases, quadrature grids, and the discrete
//!   transform over the sphere,
//! * [`convention`]: the five interlocking definition systems commonly found
//!   in the literature (basis flavor, direction reference, Fourier sign,
//!   field normalization factor),
//! * [`sphere`]: rigid-sphere scattering, radial filters, and array encoding,
//! * [`hrtf`]: head-related transfer function sets and their harmonic-domain
//!   encoding,
//! * [`render`]: the binaural rendering equation and convention conversion,
//! * [`oracle`]: brute-force reference computations used to validate the
//!   fast paths.
//!
//! The crate is `no_std`-compatible (`default-features = false`); it then
//! relies on `alloc` and on `libm`-backed float math.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub(crate) mod fmath;

pub mod convention;
pub mod hrtf;
pub mod oracle;
pub mod render;
pub mod sh;
pub mod special;
pub mod sphere;

mod coefficients;

pub use coefficients::{CoeffKind, ShCoefficients};
pub use convention::{ConventionSystem, DirectionReference, FieldFactor, FourierSign};
pub use hrtf::{Ear, HrtfSet, HrtfShCoefficients, SyntheticHrtf};
pub use num_complex::Complex64;
pub use render::{BinauralOutput, RenderDefect};
pub use sh::{Direction, QuadratureGrid, ShFlavor};
pub use sphere::{PlaneWave, PlaneWaveScene, RadialFilterSpec, SphereSpec, SurfacePressure};
