//! Gaussian beam geometry and the optimal input-waist rule.

use crate::error::{Error, Result};
use crate::float::Real;

/// A fundamental Gaussian mode. The waist radius is defined at the 1/e level
/// of the field amplitude; propagation uses the vacuum wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBeam<R> {
    pub waist_radius: R,
    pub wavelength: R,
    pub waist_position: R,
}

impl<R: Real> GaussianBeam<R> {
    /// Beam with its waist at z = 0.
    pub fn new(waist_radius: R, wavelength: R) -> Result<Self> {
        Self::with_waist_position(waist_radius, wavelength, R::zero())
    }

    pub fn with_waist_position(waist_radius: R, wavelength: R, waist_position: R) -> Result<Self> {
        if !(waist_radius > R::zero()) {
            return Err(Error::invalid("waist_radius", "must be > 0"));
        }
        if !(wavelength > R::zero()) {
            return Err(Error::invalid("wavelength", "must be > 0"));
        }
        Ok(GaussianBeam {
            waist_radius,
            wavelength,
            waist_position,
        })
    }

    /// Rayleigh length, pi w0^2 / lambda.
    pub fn rayleigh_length(&self) -> R {
        R::PI() * self.waist_radius * self.waist_radius / self.wavelength
    }

    /// Beam radius w(z) = w0 sqrt(1 + ((z - z0)/z_R)^2).
    pub fn radius(&self, z: R) -> R {
        let zr = (z - self.waist_position) / self.rayleigh_length();
        self.waist_radius * (R::one() + zr * zr).sqrt()
    }

    /// Intensity distribution area-normalized at every z:
    /// `I(r, z) = 2 / (pi w(z)^2) exp(-2 r^2 / w(z)^2)`, in 1/m^2.
    pub fn intensity(&self, r: R, z: R) -> R {
        let w = self.radius(z);
        let x = r / w;
        R::of(2.0) / (R::PI() * w * w) * (-R::of(2.0) * x * x).exp()
    }

    /// Rabi frequency of a control field with on-axis waist value `peak_rabi`:
    /// the Rabi frequency follows the field amplitude, so it scales as
    /// `(w0 / w(z)) exp(-r^2 / w(z)^2)`.
    pub fn rabi(&self, peak_rabi: R, r: R, z: R) -> R {
        let w = self.radius(z);
        let x = r / w;
        peak_rabi * (self.waist_radius / w) * (-x * x).exp()
    }
}

/// Crystal of length L with the beam waists at its center, z in [-L/2, L/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalGeometry<R> {
    pub length: R,
}

impl<R: Real> CrystalGeometry<R> {
    pub fn new(length: R) -> Result<Self> {
        if !(length > R::zero()) {
            return Err(Error::invalid("length", "must be > 0"));
        }
        Ok(CrystalGeometry { length })
    }

    pub fn half_length(&self) -> R {
        self.length * R::of(0.5)
    }
}

/// Input waist minimizing the beam radius at the crystal end faces,
/// `sqrt(L lambda / (2 pi))`; equivalently the waist whose Rayleigh length
/// is exactly L/2.
pub fn optimal_input_waist<R: Real>(length: R, wavelength: R) -> Result<R> {
    if !(length > R::zero()) {
        return Err(Error::invalid("length", "must be > 0"));
    }
    if !(wavelength > R::zero()) {
        return Err(Error::invalid("wavelength", "must be > 0"));
    }
    Ok((length * wavelength / (R::of(2.0) * R::PI())).sqrt())
}
