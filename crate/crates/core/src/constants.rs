//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Every dimensional quantity in this crate is SI: frequencies in rad/s,
//! lengths in m, polarizabilities in C^2 m^2 / J, forces in N. Inputs are
//! accepted in the units experimentalists actually quote (eV, Å^3, nm, km/s,
//! atomic mass units) and converted here, in one place.

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity [F/m] = [C^2 / (J m)].
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Elementary charge [C] (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Unified atomic mass unit [kg].
pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;

/// 4 pi eps0 [C^2 / (J m)], the Gaussian-to-SI polarizability factor.
pub const FOUR_PI_EPS0: f64 = 4.0 * std::f64::consts::PI * EPS0;

/// Convert a photon/transition energy in eV to an angular frequency [rad/s].
///
/// omega = E * e / hbar.
pub fn ev_to_rad_s(energy_ev: f64) -> f64 {
    energy_ev * ELEMENTARY_CHARGE / HBAR
}

/// Convert an angular frequency [rad/s] back to eV.
pub fn rad_s_to_ev(omega: f64) -> f64 {
    omega * HBAR / ELEMENTARY_CHARGE
}

/// Convert a static polarizability quoted as a volume in Å^3 (the common
/// "alpha / (4 pi eps0)" convention) to SI [C^2 m^2 / J].
pub fn polarizability_si_from_angstrom3(volume_a3: f64) -> f64 {
    FOUR_PI_EPS0 * volume_a3 * 1e-30
}

/// Convert a mass in atomic mass units to kg.
pub fn mass_si_from_u(mass_u: f64) -> f64 {
    mass_u * ATOMIC_MASS
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ev_conversion_round_trip() {
        let omega = ev_to_rad_s(1.3);
        // 1 eV = 1.519267e15 rad/s
        assert_relative_eq!(ev_to_rad_s(1.0), 1.519_267_448_8e15, max_relative = 1e-10);
        assert_relative_eq!(rad_s_to_ev(omega), 1.3, max_relative = 1e-14);
    }

    #[test]
    fn rubidium_polarizability_in_si() {
        // 47.28 Å^3 -> 4 pi eps0 * 47.28e-30 m^3
        let a0 = polarizability_si_from_angstrom3(47.28);
        assert_relative_eq!(a0, 5.260_69e-39, max_relative = 1e-4);
    }

    #[test]
    fn rubidium_mass() {
        assert_relative_eq!(mass_si_from_u(86.9), 1.443_009e-25, max_relative = 1e-5);
    }
}
