//! Frequency-indexed spherical-harmonic coefficient sets tagged with their
//! convention.

use crate::convention::ConventionSystem;
use crate::sh::{self, Direction, ShError, ShFlavor};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

/// What the stored numbers mean physically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffKind {
    /// Sound-field expansion with the radial dependence divided out
    /// (plane-wave density style).
    Breve,
    /// Directional transfer function expanded directly on the sphere.
    Ring,
}

impl CoeffKind {
    pub fn label(&self) -> &'static str {
        match self {
            CoeffKind::Breve => "breve",
            CoeffKind::Ring => "ring",
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Coefficients for a list of frequency bins, all sharing one order and one
/// convention. Storage is bin-major: all `(order+1)^2` ACN-ordered values of
/// bin 0, then bin 1, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct ShCoefficients {
    pub kind: CoeffKind,
    pub convention: ConventionSystem,
    max_order: u32,
    frequencies_hz: Vec<f64>,
    data: Vec<Complex64>,
}

impl ShCoefficients {
    pub fn zeros(
        kind: CoeffKind,
        convention: ConventionSystem,
        max_order: u32,
        frequencies_hz: Vec<f64>,
    ) -> Result<Self, ShError> {
        if max_order > sh::MAX_ORDER {
            return Err(ShError::OrderTooLarge { n: max_order });
        }
        let stride = sh::num_coeffs(max_order);
        let data = vec![Complex64::new(0.0, 0.0); stride * frequencies_hz.len()];
        Ok(Self { kind, convention, max_order, frequencies_hz, data })
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn num_bins(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    fn stride(&self) -> usize {
        sh::num_coeffs(self.max_order)
    }

    /// All coefficients of one frequency bin, ACN order.
    pub fn bin(&self, bin: usize) -> &[Complex64] {
        let s = self.stride();
        &self.data[bin * s..(bin + 1) * s]
    }

    pub fn bin_mut(&mut self, bin: usize) -> &mut [Complex64] {
        let s = self.stride();
        &mut self.data[bin * s..(bin + 1) * s]
    }

    pub fn at(&self, bin: usize, n: u32, m: i32) -> Complex64 {
        self.bin(bin)[sh::acn(n, m)]
    }

    pub fn set(&mut self, bin: usize, n: u32, m: i32, value: Complex64) {
        let idx = sh::acn(n, m);
        self.bin_mut(bin)[idx] = value;
    }

    /// Evaluates one bin's expansion at a direction using the tagged flavor.
    pub fn synthesize(&self, bin: usize, dir: Direction) -> Result<Complex64, ShError> {
        sh::sh_synthesis(self.bin(bin), self.convention.flavor, dir)
    }

    /// Returns a copy re-expressed in another basis flavor; synthesis values
    /// are unchanged. Only the flavor axis of the convention tag changes.
    pub fn convert_flavor(&self, flavor: ShFlavor) -> Result<Self, ShError> {
        let mut out = self.clone();
        if flavor == self.convention.flavor {
            return Ok(out);
        }
        for bin in 0..self.num_bins() {
            let converted = sh::convert_flavor(self.bin(bin), self.convention.flavor, flavor)?;
            out.bin_mut(bin).copy_from_slice(&converted);
        }
        out.convention.flavor = flavor;
        Ok(out)
    }

    /// Conjugates every stored value in place, leaving the tag untouched.
    /// Callers flip the Fourier-sign axis themselves.
    pub fn conjugate_in_place(&mut self) {
        for v in &mut self.data {
            *v = v.conj();
        }
    }

    /// Multiplies every coefficient of order `n` in every bin by `factor(n)`.
    pub fn scale_per_order(&mut self, factor: impl Fn(u32) -> Complex64) {
        let stride = self.stride();
        let max_order = self.max_order;
        for bin_data in self.data.chunks_mut(stride) {
            let mut idx = 0usize;
            for n in 0..=max_order {
                let f = factor(n);
                for _ in 0..(2 * n + 1) {
                    bin_data[idx] *= f;
                    idx += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convention::ConventionSystem;
    use core::f64::consts::PI;

    fn row1() -> ConventionSystem {
        ConventionSystem::from_row(1).unwrap()
    }

    #[test]
    fn zeros_layout_and_indexing() {
        let mut c =
            ShCoefficients::zeros(CoeffKind::Breve, row1(), 2, vec![100.0, 200.0]).unwrap();
        assert_eq!(c.num_bins(), 2);
        assert_eq!(c.bin(0).len(), 9);
        c.set(1, 2, -1, Complex64::new(3.0, -4.0));
        assert_eq!(c.at(1, 2, -1), Complex64::new(3.0, -4.0));
        assert_eq!(c.at(0, 2, -1), Complex64::new(0.0, 0.0));
        assert!(ShCoefficients::zeros(CoeffKind::Breve, row1(), 33, vec![]).is_err());
    }

    #[test]
    fn scale_per_order_touches_whole_orders() {
        let mut c = ShCoefficients::zeros(CoeffKind::Ring, row1(), 1, vec![1.0]).unwrap();
        for v in c.bin_mut(0) {
            *v = Complex64::new(1.0, 0.0);
        }
        c.scale_per_order(|n| Complex64::new((n + 1) as f64, 0.0));
        assert_eq!(c.at(0, 0, 0).re, 1.0);
        assert_eq!(c.at(0, 1, -1).re, 2.0);
        assert_eq!(c.at(0, 1, 0).re, 2.0);
        assert_eq!(c.at(0, 1, 1).re, 2.0);
    }

    #[test]
    fn flavor_conversion_preserves_synthesis() {
        let mut c = ShCoefficients::zeros(CoeffKind::Ring, row1(), 2, vec![1.0]).unwrap();
        c.set(0, 1, 1, Complex64::new(0.3, -0.2));
        c.set(0, 1, -1, Complex64::new(-0.5, 0.1));
        c.set(0, 2, 0, Complex64::new(1.0, 0.25));
        let r = c.convert_flavor(ShFlavor::RealN3d).unwrap();
        assert_eq!(r.convention.flavor, ShFlavor::RealN3d);
        let d = Direction::new(1.1, 2.2).unwrap();
        let a = c.synthesize(0, d).unwrap();
        let b = r.synthesize(0, d).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn conjugation_is_elementwise() {
        let mut c = ShCoefficients::zeros(CoeffKind::Breve, row1(), 0, vec![1.0]).unwrap();
        c.set(0, 0, 0, Complex64::new(2.0, 3.0));
        c.conjugate_in_place();
        assert_eq!(c.at(0, 0, 0), Complex64::new(2.0, -3.0));
    }

    #[test]
    fn synthesize_uses_the_tagged_flavor() {
        let mut c = ShCoefficients::zeros(CoeffKind::Ring, row1(), 0, vec![1.0]).unwrap();
        c.set(0, 0, 0, Complex64::new(1.0, 0.0));
        let v = c.synthesize(0, Direction::new(0.4, 0.9).unwrap()).unwrap();
        assert!((v.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
    }
}
