//! Gaussian detuning spectra and spectrally averaged efficiencies.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::float::Real;
use crate::quad::GaussLegendre;

/// Number of quadrature nodes used for spectral averages.
pub const DEFAULT_SPECTRAL_NODES: usize = 65;

/// Integration support half-width in units of the FWHM; the Gaussian mass
/// outside +-2.5 FWHM is ~4e-9.
const SUPPORT_HALF_WIDTH_FWHM: f64 = 2.5;

/// Area-normalized Gaussian distribution over detuning, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpectrum<R> {
    pub fwhm: R,
    pub center: R,
}

impl<R: Real> GaussianSpectrum<R> {
    pub fn new(fwhm: R) -> Result<Self> {
        Self::with_center(fwhm, R::zero())
    }

    pub fn with_center(fwhm: R, center: R) -> Result<Self> {
        if !(fwhm > R::zero()) {
            return Err(Error::invalid("fwhm", "must be > 0"));
        }
        Ok(GaussianSpectrum { fwhm, center })
    }

    /// Standard deviation, fwhm / (2 sqrt(2 ln 2)).
    pub fn sigma(&self) -> R {
        self.fwhm / (R::of(2.0) * (R::of(2.0) * R::LN_2()).sqrt())
    }

    /// Probability density at detuning `delta`.
    pub fn density(&self, delta: R) -> R {
        let sigma = self.sigma();
        let x = (delta - self.center) / sigma;
        (-x * x * R::of(0.5)).exp() / (sigma * R::TAU().sqrt())
    }

    pub fn shifted(mut self, center: R) -> Self {
        self.center = center;
        self
    }
}

/// Average `eff(delta)` over the spectrum with the default node count.
pub fn spectral_average<R, F>(eff: F, spectrum: &GaussianSpectrum<R>) -> Result<R>
where
    R: Real,
    F: Fn(R) -> Result<R> + Sync,
{
    spectral_average_with_nodes(eff, spectrum, DEFAULT_SPECTRAL_NODES)
}

/// Average `eff(delta)` over the spectrum using `n` Gauss-Legendre nodes on
/// `center +- 2.5 FWHM`. The density weights are renormalized to unit sum so
/// a constant integrand is reproduced exactly despite the tail truncation.
pub fn spectral_average_with_nodes<R, F>(
    eff: F,
    spectrum: &GaussianSpectrum<R>,
    n: usize,
) -> Result<R>
where
    R: Real,
    F: Fn(R) -> Result<R> + Sync,
{
    let (nodes, weights) = spectral_rule(spectrum, n);
    let values: Result<Vec<R>> = nodes.par_iter().map(|&d| eff(d)).collect();
    let values = values?;
    Ok(values
        .iter()
        .zip(&weights)
        .fold(R::zero(), |acc, (&v, &w)| acc + w * v))
}

/// Nodes and unit-sum weights of the spectral quadrature rule.
pub fn spectral_rule<R: Real>(spectrum: &GaussianSpectrum<R>, n: usize) -> (Vec<R>, Vec<R>) {
    assert!(n >= 2, "spectral average needs at least two nodes");
    let half = spectrum.fwhm * R::of(SUPPORT_HALF_WIDTH_FWHM);
    let rule = GaussLegendre::new(n);
    let (nodes, gl_weights) = rule.scaled(spectrum.center - half, spectrum.center + half);
    let mut weights: Vec<R> = nodes
        .iter()
        .zip(&gl_weights)
        .map(|(&x, &w)| w * spectrum.density(x))
        .collect();
    let total = weights.iter().fold(R::zero(), |acc, &w| acc + w);
    for w in &mut weights {
        *w /= total;
    }
    (nodes, weights)
}

/// Raw quadrature of the density itself (before renormalization); used to
/// verify that the rule integrates the spectrum to 1 within tolerance.
pub fn density_quadrature<R: Real>(spectrum: &GaussianSpectrum<R>, n: usize) -> R {
    let half = spectrum.fwhm * R::of(SUPPORT_HALF_WIDTH_FWHM);
    let rule = GaussLegendre::new(n);
    rule.integrate(spectrum.center - half, spectrum.center + half, |d| {
        spectrum.density(d)
    })
}

/// FWHM power-spectrum width (rad/s) of a Gaussian pulse with the given FWHM
/// intensity duration: `2 pi * 0.4413 / t = 4 ln 2 / t` (Gaussian
/// time-bandwidth product).
pub fn fwhm_from_gaussian_duration<R: Real>(t_fwhm: R) -> Result<R> {
    if !(t_fwhm > R::zero()) {
        return Err(Error::invalid("t_fwhm", "must be > 0"));
    }
    Ok(R::of(4.0) * R::LN_2() / t_fwhm)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI: f64 = std::f64::consts::TAU;

    /// Abramowitz & Stegun 7.1.26 rational approximation, |err| < 1.5e-7;
    /// independent oracle for Gaussian mass fractions.
    fn erf(x: f64) -> f64 {
        let sign = x.signum();
        let x = x.abs();
        let t = 1.0 / (1.0 + 0.3275911 * x);
        let poly = t
            * (0.254829592
                + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
        sign * (1.0 - poly * (-x * x).exp())
    }

    fn spectrum_110khz() -> GaussianSpectrum<f64> {
        GaussianSpectrum::new(TWO_PI * 110e3).unwrap()
    }

    #[test]
    fn density_integrates_to_one() {
        let s = spectrum_110khz();
        let q: f64 = density_quadrature(&s, DEFAULT_SPECTRAL_NODES);
        assert!((q - 1.0).abs() < 1e-6, "quadrature mass {q}");
    }

    #[test]
    fn constant_integrand_is_exact() {
        let s = spectrum_110khz();
        let got = spectral_average(|_| Ok(0.37), &s).unwrap();
        assert!((got - 0.37).abs() < 1e-9 * 0.37);
    }

    #[test]
    fn narrow_spectrum_is_a_delta() {
        let s = GaussianSpectrum::with_center(TWO_PI * 1.0, TWO_PI * 50e3).unwrap();
        let got = spectral_average(|d| Ok((d / (TWO_PI * 100e3)).sin().powi(2)), &s).unwrap();
        let at_center = (0.5_f64).sin().powi(2);
        assert!((got - at_center).abs() < 1e-6);
    }

    #[test]
    fn top_hat_covers_gaussian_mass_fraction() {
        // eff = 1 inside +-FWHM/2: expected mass is erf(sqrt(2 ln 2)/sqrt 2).
        // The integrand jump is beyond the default 65-node rule (~3e-2 off),
        // so the weighting is verified at a high node count.
        let s = spectrum_110khz();
        let half = s.fwhm / 2.0;
        let top_hat = |d: f64| Ok(if d.abs() <= half { 1.0 } else { 0.0 });
        let expected = erf((2.0 * std::f64::consts::LN_2).sqrt() / std::f64::consts::SQRT_2);
        assert!((expected - 0.7610).abs() < 5e-4, "oracle sanity: {expected}");
        let got = spectral_average_with_nodes(top_hat, &s, 4097).unwrap();
        assert!((got - expected).abs() < 1e-3, "{got} vs {expected}");
        let coarse = spectral_average(top_hat, &s).unwrap();
        assert!((coarse - expected).abs() < 5e-2, "coarse {coarse}");
    }

    #[test]
    fn doubling_nodes_is_converged() {
        let s = spectrum_110khz();
        let f = |d: f64| Ok(1.0 / (1.0 + (d / s.fwhm).powi(2)));
        let a = spectral_average_with_nodes(f, &s, DEFAULT_SPECTRAL_NODES).unwrap();
        let b = spectral_average_with_nodes(f, &s, 2 * DEFAULT_SPECTRAL_NODES).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn monotone_in_the_integrand() {
        let s = spectrum_110khz();
        let lo = spectral_average(|d| Ok(0.5 * (-d.abs() / s.fwhm).exp()), &s).unwrap();
        let hi = spectral_average(|d| Ok(0.6 * (-d.abs() / s.fwhm).exp() + 0.1), &s).unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn shifted_center_even_integrand() {
        // an even efficiency sees the same average for either chirp sign
        let plus = GaussianSpectrum::with_center(TWO_PI * 110e3, TWO_PI * 40e3).unwrap();
        let minus = GaussianSpectrum::with_center(TWO_PI * 110e3, -TWO_PI * 40e3).unwrap();
        let eff = |d: f64| Ok(1.0 / (1.0 + (d / (TWO_PI * 200e3)).powi(2)));
        let a = spectral_average(eff, &plus).unwrap();
        let b = spectral_average(eff, &minus).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn time_bandwidth_product() {
        let got: f64 = fwhm_from_gaussian_duration(4e-6).unwrap();
        assert!((got / TWO_PI - 110.318e3).abs() < 1.0, "{}", got / TWO_PI);
        let got: f64 = fwhm_from_gaussian_duration(8e-6).unwrap();
        assert!((got / TWO_PI - 55.159e3).abs() < 1.0);
        let got: f64 = fwhm_from_gaussian_duration(1e-6).unwrap();
        assert!((got / TWO_PI - 441.271e3).abs() < 2.0);
        assert!(fwhm_from_gaussian_duration(0.0_f64).is_err());
    }

    #[test]
    fn invalid_fwhm_rejected() {
        assert!(GaussianSpectrum::new(0.0_f64).is_err());
        assert!(GaussianSpectrum::new(-1.0_f64).is_err());
    }
}
