//! Surface response: Drude metals and the ideal-Ohmic approximation.
//!
//! Everything downstream probes the surface through the electrostatic
//! (near-field) p-polarized reflection coefficient
//!
//! ```text
//!   r(w) = (eps(w) - 1) / (eps(w) + 1)
//! ```
//!
//! evaluated at in-plane momenta k z << 1 ... k ~ 1/z with k c >> |w|, where
//! retardation drops out and r is k-independent. For a Drude metal
//!
//! ```text
//!   eps(w) = 1 - wp^2 / (w (w + i gamma))
//! ```
//!
//! the coefficient collapses to the rational form
//!
//! ```text
//!   r(w) = wp^2 / (wp^2 - 2 w^2 - 2 i gamma w),
//! ```
//!
//! analytic at w = 0 with r(0) = 1 and Im r(w) ~ 2 eps0 rho w for small w,
//! where rho = gamma / (eps0 wp^2) is the DC resistivity. That linear
//! low-frequency law is the Ohmic regime; [`Material::OhmicIdeal`] keeps
//! only it (plus a constant real part), which is the natural description of
//! a surface specified by resistivity alone.
//!
//! Negative frequencies follow the crossing relation r(-w) = conj r(w),
//! implemented by evaluating at |w| and conjugating, so both variants stay
//! exactly crossing-symmetric including at w = 0.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::EPS0;

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    #[error("plasma frequency must be positive, got {0}")]
    NonPositivePlasmaFrequency(f64),
    #[error("dissipation rate must be positive, got {0}")]
    NonPositiveDissipation(f64),
    #[error("resistivity must be positive, got {0}")]
    NonPositiveResistivity(f64),
}

/// Surface model probed through its near-field reflection coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum Material {
    /// Drude metal with plasma frequency and dissipation rate in rad/s.
    Drude { omega_p: f64, gamma: f64 },
    /// Pure Ohmic response: r(w) = r_re + 2 i eps0 rho w, with rho in Ohm*m.
    /// Valid while |w| stays far below any internal material scale.
    OhmicIdeal { rho: f64, r_re: f64 },
}

impl Material {
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self, MaterialError> {
        if !(omega_p > 0.0) {
            return Err(MaterialError::NonPositivePlasmaFrequency(omega_p));
        }
        if !(gamma > 0.0) {
            return Err(MaterialError::NonPositiveDissipation(gamma));
        }
        Ok(Material::Drude { omega_p, gamma })
    }

    pub fn ohmic_ideal(rho: f64, r_re: f64) -> Result<Self, MaterialError> {
        if !(rho > 0.0) {
            return Err(MaterialError::NonPositiveResistivity(rho));
        }
        Ok(Material::OhmicIdeal { rho, r_re })
    }

    /// Relative permittivity eps(w). Only defined for the Drude variant;
    /// the ideal-Ohmic surface is specified directly at the reflection level.
    /// eps has a pole at w = 0; callers evaluating near zero should use
    /// [`Material::reflection_p`], which stays finite there.
    pub fn permittivity(&self, omega: f64) -> Option<Complex64> {
        match *self {
            Material::Drude { omega_p, gamma } => {
                let w = omega.abs().max(f64::MIN_POSITIVE);
                let eps = Complex64::new(1.0, 0.0)
                    - omega_p * omega_p / (w * Complex64::new(w, gamma));
                Some(if omega < 0.0 { eps.conj() } else { eps })
            }
            Material::OhmicIdeal { .. } => None,
        }
    }

    /// Near-field p-polarized reflection coefficient r(w) = (eps-1)/(eps+1).
    ///
    /// Crossing symmetry r(-w) = conj r(w) holds exactly; r(0) is real.
    pub fn reflection_p(&self, omega: f64) -> Complex64 {
        let w = omega.abs();
        let r = match *self {
            Material::Drude { omega_p, gamma } => {
                let wp2 = omega_p * omega_p;
                wp2 / Complex64::new(wp2 - 2.0 * w * w, -2.0 * gamma * w)
            }
            Material::OhmicIdeal { rho, r_re } => Complex64::new(r_re, 2.0 * EPS0 * rho * w),
        };
        if omega < 0.0 {
            r.conj()
        } else {
            r
        }
    }

    /// Im r(w) for real w; odd in w.
    pub fn reflection_p_im(&self, omega: f64) -> f64 {
        self.reflection_p(omega).im
    }

    /// DC resistivity rho (Ohm*m), the slope of the Ohmic law
    /// Im r(w) = 2 eps0 rho w as w -> 0.
    pub fn resistivity(&self) -> f64 {
        match *self {
            Material::Drude { omega_p, gamma } => gamma / (EPS0 * omega_p * omega_p),
            Material::OhmicIdeal { rho, .. } => rho,
        }
    }

    /// Re r(0): unity for any Drude metal, the configured constant otherwise.
    pub fn reflection_p_static(&self) -> f64 {
        match *self {
            Material::Drude { .. } => 1.0,
            Material::OhmicIdeal { r_re, .. } => r_re,
        }
    }

    /// Surface-plasmon frequency wp/sqrt(2) where Re(eps) = -1 and |r| peaks;
    /// none for the ideal-Ohmic surface (its response never resonates).
    pub fn surface_plasmon_frequency(&self) -> Option<f64> {
        match *self {
            Material::Drude { omega_p, .. } => Some(omega_p / std::f64::consts::SQRT_2),
            Material::OhmicIdeal { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ev_to_rad_s;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Drude parameters for gold: hbar wp = 9 eV, hbar gamma = 35 meV.
    fn gold() -> Material {
        Material::drude(ev_to_rad_s(9.0), ev_to_rad_s(0.035)).unwrap()
    }

    #[test]
    fn gold_frequency_scales() {
        let Material::Drude { omega_p, gamma } = gold() else {
            unreachable!()
        };
        assert_relative_eq!(omega_p, 1.367_340_7e16, max_relative = 1e-7);
        assert_relative_eq!(gamma, 5.317_436e13, max_relative = 1e-6);
    }

    #[test]
    fn gold_permittivity_at_1p3_ev() {
        let w = ev_to_rad_s(1.3);
        let eps = gold().permittivity(w).unwrap();
        assert_relative_eq!(eps.re, -46.894_4, max_relative = 1e-5);
        assert_relative_eq!(eps.im, 1.289_46, max_relative = 1e-5);
    }

    #[test]
    fn gold_reflection_at_1p3_ev() {
        let w = ev_to_rad_s(1.3);
        let r = gold().reflection_p(w);
        // (eps-1)/(eps+1) from the frozen permittivity above
        assert_relative_eq!(r.re, 1.043_545, max_relative = 1e-5);
        assert_relative_eq!(r.im, 1.223_43e-3, max_relative = 1e-4);
        // ratio controlling the rotation-frequency suppression
        assert_relative_eq!(r.re / r.im, 853.0, max_relative = 2e-3);
    }

    #[test]
    fn reflection_rational_form_matches_eps_ratio() {
        let m = gold();
        for w_ev in [1e-6, 0.01, 0.5, 1.3, 5.0, 6.363, 9.0, 20.0] {
            let w = ev_to_rad_s(w_ev);
            let eps = m.permittivity(w).unwrap();
            let via_eps = (eps - 1.0) / (eps + 1.0);
            let direct = m.reflection_p(w);
            assert_relative_eq!(direct.re, via_eps.re, max_relative = 1e-10);
            assert_relative_eq!(direct.im, via_eps.im, max_relative = 1e-10);
        }
    }

    #[test]
    fn crossing_symmetry_exact() {
        for m in [gold(), Material::ohmic_ideal(8e-7, 1.0).unwrap()] {
            for w in [1e3, 1e9, 7.3e14, 2.9e15] {
                let plus = m.reflection_p(w);
                let minus = m.reflection_p(-w);
                assert_eq!(plus.re, minus.re);
                assert_eq!(plus.im, -minus.im);
            }
            assert_eq!(m.reflection_p(0.0).im, 0.0);
        }
    }

    #[test]
    fn static_limit_is_regular_and_unity() {
        let r0 = gold().reflection_p(0.0);
        assert_abs_diff_eq!(r0.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r0.im, 0.0);
        // no blow-up approaching zero from either side
        let r_tiny = gold().reflection_p(1e-3);
        assert_abs_diff_eq!(r_tiny.re, 1.0, epsilon = 1e-12);
        assert!(r_tiny.im > 0.0 && r_tiny.im < 1e-15);
    }

    #[test]
    fn gold_resistivity_matches_drude_dc_value() {
        // rho = gamma / (eps0 wp^2) for the gold parameters above
        assert_relative_eq!(gold().resistivity(), 3.212_18e-8, max_relative = 1e-5);
    }

    #[test]
    fn ohmic_slope_matches_drude_low_frequency() {
        let m = gold();
        let rho = m.resistivity();
        // Doppler-band frequencies for v ~ 30 km/s, z ~ 5 nm: w ~ 3e12
        for w in [1e10, 1e11, 1e12, 3e12] {
            let im = m.reflection_p_im(w);
            let ohmic = 2.0 * EPS0 * rho * w;
            // relative deviation grows like 4 w^2 / wp^2
            assert_relative_eq!(im, ohmic, max_relative = 1e-6);
        }
    }

    #[test]
    fn ohmic_ideal_matches_its_definition() {
        let rho = 8e-7;
        let m = Material::ohmic_ideal(rho, 1.0).unwrap();
        let w = 4.2e11;
        let r = m.reflection_p(w);
        assert_eq!(r.re, 1.0);
        assert_relative_eq!(r.im, 2.0 * EPS0 * rho * w, max_relative = 1e-14);
        assert_eq!(m.resistivity(), rho);
    }

    #[test]
    fn surface_plasmon_peak() {
        let m = gold();
        let wsp = m.surface_plasmon_frequency().unwrap();
        assert_relative_eq!(wsp, 9.668_4e15, max_relative = 1e-4);
        // |r| at the plasmon is ~ wsp / gamma >> 1
        let r = m.reflection_p(wsp);
        assert_relative_eq!(r.im, 181.8, max_relative = 2e-3);
        // peak dominates neighbours
        assert!(r.norm() > m.reflection_p(0.8 * wsp).norm());
        assert!(r.norm() > m.reflection_p(1.2 * wsp).norm());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(Material::drude(0.0, 1.0).is_err());
        assert!(Material::drude(1.0, -2.0).is_err());
        assert!(Material::ohmic_ideal(0.0, 1.0).is_err());
    }
}
