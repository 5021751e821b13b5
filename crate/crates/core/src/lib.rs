//! Quantum rolling friction for an atom moving above a dissipative surface.
//!
//! A polarizable atom dragged at constant velocity v parallel to a planar
//! Ohmic surface (height z_a, electrostatic regime) experiences a frictional
//! force from the Doppler-asymmetric vacuum fluctuations, and the same
//! asymmetry pumps angular momentum into the induced dipole: the atom's
//! fluctuation cloud rotates, like a wheel rolling the wrong way against the
//! direction of motion.
//!
//! The crate computes, from first-principles response theory with full
//! back-action (no local-equilibrium shortcut):
//!
//! * the translational and rotational parts of the frictional force,
//!   `F_t` and `F_r`, and their low-velocity closed forms;
//! * the steady-state angular momentum `L` stored in the dipole cloud;
//! * the effective rotation frequency `Omega` (angular momentum over the
//!   dipole cloud's moment of inertia).
//!
//! Pipeline: surface response ([`material`]) -> near-field Green tensor and
//! its Doppler momentum kernels ([`greens`]) -> dressed polarizability and
//! nonequilibrium dipole power spectrum ([`atomresponse`]) -> forces,
//! angular momentum and rotation frequency ([`observables`]). The adaptive
//! quadrature engine lives in [`quad`]; [`verify`] bundles the acceptance
//! checks the test-suite and the command line expose.

pub mod atomresponse;
pub mod constants;
pub mod greens;
pub mod material;
pub mod math3;
pub mod observables;
pub mod quad;
pub mod verify;

pub use atomresponse::{
    bare_polarizability, dressed_polarizability, power_spectrum, resonance_roots,
    spectrum_correction, AtomParams, DressedEval, ResonanceRoot, ResponseConfig, ResponseError,
    SpectralMode, SpectrumEval, SpectrumTable, TableSpec,
};
pub use greens::{
    doppler_kernel, doppler_kernel_static, green_im_dagger, green_nearfield, green_reduced,
    heaviside_kernel_im, spin_ldos, KernelConfig, KernelEval,
};
pub use material::{Material, MaterialError};
pub use math3::{Axis, C64, M3C, Mat3Error};
pub use observables::{
    angular_momentum, evaluate_observables, friction_forces, friction_lowv, lowv_coefficients,
    lowv_coefficients_quadrature, moment_of_inertia, rotation_frequency,
    rotation_frequency_asymptotic, spectral_moments, ForceResult, MomentResult, Observables,
    Scenario, ScenarioConfig,
};
pub use quad::{
    integrate_1d, integrate_1d_scalar, integrate_k_plane, Domain, KPlaneConfig, KxRegion,
    QuadConfig, QuadResult,
};
pub use verify::{all_checks, Check};
