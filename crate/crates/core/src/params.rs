//! Physical parameters of the driven Kerr dimer.
//!
//! Everything is expressed in units of the nominal decay rate `gamma`.
//! Site mismatches are stored as differences (site 1 minus site 2) and split
//! symmetrically around the nominal value, so the mean stays at the operating
//! point: `x_1 = x + dx/2`, `x_2 = x - dx/2`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// One of the two cavities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    One,
    Two,
}

impl Site {
    pub fn index(self) -> usize {
        match self {
            Site::One => 0,
            Site::Two => 1,
        }
    }
}

/// Parameters of the two-site Kerr dimer, with optional per-site mismatches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerParams<T> {
    /// Cavity-laser detuning (both sites share this nominal value).
    pub detuning: T,
    /// On-site Kerr nonlinearity; shifts the two-photon state of a mode by `2U`.
    pub kerr: T,
    /// Inter-cavity hopping.
    pub hopping: T,
    /// Nominal photon-loss rate; the unit scale of the whole problem.
    pub gamma: T,
    /// Cross-Kerr interaction between the two modes (zero for the plain dimer).
    pub cross_kerr: T,
    /// Detuning mismatch between the sites.
    pub detuning_mismatch: T,
    /// Loss-rate mismatch between the sites.
    pub gamma_mismatch: T,
    /// Kerr mismatch between the sites.
    pub kerr_mismatch: T,
}

impl<T: Scalar> DimerParams<T> {
    /// Symmetric dimer with no mismatches and no cross-Kerr term.
    pub fn symmetric(detuning: T, kerr: T, hopping: T, gamma: T) -> Self {
        Self {
            detuning,
            kerr,
            hopping,
            gamma,
            cross_kerr: T::zero(),
            detuning_mismatch: T::zero(),
            gamma_mismatch: T::zero(),
            kerr_mismatch: T::zero(),
        }
    }

    pub fn with_cross_kerr(mut self, ux: T) -> Self {
        self.cross_kerr = ux;
        self
    }

    pub fn with_detuning_mismatch(mut self, d: T) -> Self {
        self.detuning_mismatch = d;
        self
    }

    pub fn with_gamma_mismatch(mut self, d: T) -> Self {
        self.gamma_mismatch = d;
        self
    }

    pub fn with_kerr_mismatch(mut self, d: T) -> Self {
        self.kerr_mismatch = d;
        self
    }

    /// Per-site detunings `(Delta_1, Delta_2)`.
    pub fn site_detunings(&self) -> (T, T) {
        let half = self.detuning_mismatch / T::of(2.0);
        (self.detuning + half, self.detuning - half)
    }

    /// Per-site loss rates `(gamma_1, gamma_2)`.
    pub fn site_gammas(&self) -> (T, T) {
        let half = self.gamma_mismatch / T::of(2.0);
        (self.gamma + half, self.gamma - half)
    }

    /// Per-site Kerr strengths `(U_1, U_2)`.
    pub fn site_kerrs(&self) -> (T, T) {
        let half = self.kerr_mismatch / T::of(2.0);
        (self.kerr + half, self.kerr - half)
    }

    /// Complex single-photon energy of one site: `E_j = Delta_j - i gamma_j / 2`.
    pub fn complex_detuning_site(&self, site: Site) -> Complex<T> {
        let (d1, d2) = self.site_detunings();
        let (g1, g2) = self.site_gammas();
        match site {
            Site::One => c(d1, -g1 / T::of(2.0)),
            Site::Two => c(d2, -g2 / T::of(2.0)),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.detuning_mismatch == T::zero()
            && self.gamma_mismatch == T::zero()
            && self.kerr_mismatch == T::zero()
    }

    /// Check the basic physicality constraints.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::zero()) {
            return Err(Error::InvalidParams("gamma must be positive".into()));
        }
        let (g1, g2) = self.site_gammas();
        if !(g1 > T::zero() && g2 > T::zero()) {
            return Err(Error::InvalidParams(
                "per-site loss rates must stay positive under the mismatch".into(),
            ));
        }
        if !(self.hopping > T::zero()) {
            return Err(Error::InvalidParams("hopping J must be positive".into()));
        }
        Ok(())
    }
}

/// Bilateral drive: site 1 is driven by a real CW field `F1`, site 2 by
/// `F2 = ratio * F1 * exp(i phi)`, optionally enveloped by a Gaussian pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec<T> {
    /// Site-1 drive amplitude (real, positive).
    pub f1: T,
    /// Drive phase of site 2 relative to site 1, radians.
    pub phi: T,
    /// Amplitude ratio `|F2| / |F1|`.
    pub ratio: T,
    /// Gaussian pulse width applied to the site-2 envelope, if pulsed.
    pub pulse_sigma: Option<T>,
}

impl<T: Scalar> DriveSpec<T> {
    /// Equal-amplitude CW drive at phase `phi`.
    pub fn bilateral(f1: T, phi: T) -> Self {
        Self {
            f1,
            phi,
            ratio: T::one(),
            pulse_sigma: None,
        }
    }

    /// The main-text quadrature drive `F2 = i F1`.
    pub fn quadrature(f1: T) -> Self {
        Self::bilateral(f1, T::FRAC_PI_2())
    }

    pub fn with_ratio(mut self, ratio: T) -> Self {
        self.ratio = ratio;
        self
    }

    pub fn with_pulse_sigma(mut self, sigma: T) -> Self {
        self.pulse_sigma = Some(sigma);
        self
    }

    /// Complex site-2 amplitude `F2 = ratio * F1 * exp(i phi)` (CW value,
    /// before any pulse envelope).
    pub fn f2(&self) -> Complex<T> {
        let p = Complex::new(T::zero(), self.phi).exp();
        p * self.ratio * self.f1
    }

    /// Gaussian envelope value at time `t` (1 for a CW drive).
    pub fn envelope(&self, t: T) -> T {
        match self.pulse_sigma {
            None => T::one(),
            Some(sigma) => (-t * t / (T::of(2.0) * sigma * sigma)).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadrature_drive_is_i_f1() {
        let d = DriveSpec::<f64>::quadrature(0.05);
        let f2 = d.f2();
        assert_relative_eq!(f2.re, 0.0, epsilon = 1e-16);
        assert_relative_eq!(f2.im, 0.05, epsilon = 1e-16);
    }

    #[test]
    fn mismatch_split_preserves_mean() {
        let p = DimerParams::symmetric(0.1f64, 0.05, 0.4, 1.0)
            .with_detuning_mismatch(0.02)
            .with_gamma_mismatch(0.04);
        let (d1, d2) = p.site_detunings();
        assert_relative_eq!(d1, 0.11);
        assert_relative_eq!(d2, 0.09);
        assert_relative_eq!((d1 + d2) / 2.0, p.detuning);
        let (g1, g2) = p.site_gammas();
        assert_relative_eq!(g1 - g2, 0.04);
    }

    #[test]
    fn gamma_must_stay_positive_per_site() {
        let p = DimerParams::symmetric(0.0f64, 0.0, 0.4, 1.0).with_gamma_mismatch(2.5);
        assert!(p.validate().is_err());
    }
}
