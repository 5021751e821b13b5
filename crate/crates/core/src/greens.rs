//! Near-field scattering Green tensor of a planar surface and its
//! Doppler-shifted in-plane-momentum integrals.
//!
//! In the electrostatic regime (distance z far below both the photon
//! wavelength and the skin depth scale, k c >> |w|) the scattering Green
//! tensor at the source point, in the mixed (k, z) representation, is
//!
//! ```text
//!   G(k, z, w) = Pi(theta) * (k / 2 eps0) * r(w) * exp(-2 k z)
//! ```
//!
//! with r(w) the near-field p-reflection coefficient and the polarization
//! tensor `Pi = u (x) u*` built from u = (cos t, sin t, i). Pi is Hermitian
//! and positive semidefinite. The entries odd in sin t (xy, yx, yz, zy)
//! integrate to zero over any ky-symmetric momentum region, so the reduced
//! tensor
//!
//! ```text
//!         [ c^2   0   -i c ]
//!   Pi -> [  0   s^2    0  ]         (c = cos t, s = sin t)
//!         [ i c   0     1  ]
//! ```
//!
//! is exact under every momentum integral in this crate; the full tensor
//! stays available for single-k diagnostics. The reduced tensor splits into
//! a real diagonal part and an antisymmetric part proportional to the y
//! rotation generator:
//!
//! ```text
//!   G = diag(sigma) - phi * L_y,
//!   sigma = (c^2, s^2, 1) * (k / 2 eps0) r e^{-2kz},
//!   phi   = (kx / 2 eps0) r e^{-2kz},
//! ```
//!
//! where Im phi is the spin-momentum-locked part of the field fluctuations:
//! it is odd in kx, so only motion (which samples r at Doppler-shifted
//! frequencies w + kx v) lets it survive the momentum integral.
//!
//! The kernels exported here are the two momentum integrals the response
//! theory needs, both with the co-moving frequency argument w + kx v:
//! [`doppler_kernel`] integrates G itself (dressing the polarizability) and
//! [`heaviside_kernel_im`] integrates the positive-frequency window of the
//! anti-Hermitian part (driving the nonequilibrium spectrum).

use crate::constants::EPS0;
use crate::material::Material;
use crate::math3::{C64, M3C};
use crate::quad::{integrate_k_plane, KPlaneConfig, KxRegion, QuadConfig};

/// Reduced Green tensor components at one in-plane momentum:
/// diagonal `sigma` and rotation-coupling amplitude `phi`, so that
/// G = diag(sigma) - phi * L_y.
pub fn green_reduced(
    material: &Material,
    k: f64,
    cos_t: f64,
    z: f64,
    omega: f64,
) -> ([C64; 3], C64) {
    let r = material.reflection_p(omega);
    let pref = 0.5 * k / EPS0 * (-2.0 * k * z).exp();
    let c2 = cos_t * cos_t;
    let s2 = 1.0 - c2;
    let sigma = [r * (pref * c2), r * (pref * s2), r * pref];
    let phi = r * (pref * cos_t);
    (sigma, phi)
}

/// Scattering Green tensor at in-plane momentum (kx, ky), height z and
/// frequency w. With `full_tensor` the ky-odd entries are kept; otherwise
/// the reduced form (exact under ky-symmetric momentum integrals) is built.
pub fn green_nearfield(
    material: &Material,
    kx: f64,
    ky: f64,
    z: f64,
    omega: f64,
    full_tensor: bool,
) -> M3C {
    let k = kx.hypot(ky);
    if k == 0.0 {
        return M3C::zero();
    }
    let cos_t = kx / k;
    let sin_t = ky / k;
    let (sigma, phi) = green_reduced(material, k, cos_t, z, omega);
    let mut g = M3C::diag(sigma);
    // - phi * L_y contributes -i phi to (x,z) and +i phi to (z,x)
    let i = C64::new(0.0, 1.0);
    g.m[0][2] = -i * phi;
    g.m[2][0] = i * phi;
    if full_tensor {
        let r = material.reflection_p(omega);
        let pref = 0.5 * k / EPS0 * (-2.0 * k * z).exp();
        let cs = r * (pref * cos_t * sin_t);
        let psi = r * (pref * sin_t);
        g.m[0][1] = cs;
        g.m[1][0] = cs;
        g.m[1][2] = -i * psi;
        g.m[2][1] = i * psi;
    }
    g
}

/// Anti-Hermitian content of the Green tensor, (G - G^dag) / 2i, at one
/// momentum: Hermitian, positive semidefinite for w > 0, and equal to the
/// same tensor structure with r replaced by Im r.
pub fn green_im_dagger(material: &Material, kx: f64, ky: f64, z: f64, omega: f64) -> M3C {
    green_nearfield(material, kx, ky, z, omega, true).im_dagger()
}

/// Spin-momentum locking amplitude Im phi(k, w) at cos t = kx / k.
pub fn spin_ldos(material: &Material, k: f64, cos_t: f64, z: f64, omega: f64) -> f64 {
    let (_, phi) = green_reduced(material, k, cos_t, z, omega);
    phi.im
}

/// Result of a momentum-integrated kernel evaluation.
#[derive(Debug, Clone, Copy)]
pub struct KernelEval {
    pub matrix: M3C,
    /// Worst per-component relative quadrature error estimate.
    pub err: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Quadrature controls for the momentum kernels.
#[derive(Debug, Clone)]
pub struct KernelConfig {
    pub angular_order: usize,
    pub radial: QuadConfig,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            angular_order: 32,
            radial: QuadConfig {
                rel_tol: 1e-9,
                abs_floor: 1e-13,
                max_panels: 800,
            },
        }
    }
}

impl KernelConfig {
    fn k_plane(&self, kx_breaklines: Vec<f64>) -> KPlaneConfig {
        KPlaneConfig {
            angular_order: self.angular_order,
            radial: self.radial.clone(),
            kx_breaklines,
        }
    }
}

/// Doppler-shifted momentum integral of the Green tensor,
///
/// ```text
///   K(w, v) = int d^2k/(2pi)^2  G(k, z, w + kx v),
/// ```
///
/// the self-consistent dressing kernel of the moving dipole. The quadrant
/// images (+-kx, +-ky) are summed analytically inside the integrand: the
/// diagonal picks up r(w + k v c) + r(w - k v c) while the xz entry picks up
/// the difference, so the small xz component is resolved to its own relative
/// accuracy instead of drowning in the diagonal's tolerance.
pub fn doppler_kernel(
    material: &Material,
    z: f64,
    omega: f64,
    v: f64,
    cfg: &KernelConfig,
) -> KernelEval {
    if v == 0.0 {
        let matrix = doppler_kernel_static(material, z, omega);
        return KernelEval {
            matrix,
            err: 0.0,
            n_evals: 0,
            converged: true,
        };
    }
    // components: re/im of (diag-sum combos for xx, yy, zz) and of the
    // xz pairing combo p = 2 c (r+ - r-); all share the momentum nodes
    let res = integrate_k_plane(
        |k: f64, theta: f64| -> [f64; 8] {
            let c = theta.cos();
            let s2 = 1.0 - c * c;
            let rp = material.reflection_p(omega + k * v * c);
            let rm = material.reflection_p(omega - k * v * c);
            let pref = 0.5 * k / EPS0 * (-2.0 * k * z).exp();
            let sum = (rp + rm) * (2.0 * pref);
            let diff = (rp - rm) * (2.0 * pref * c);
            [
                sum.re * c * c,
                sum.im * c * c,
                sum.re * s2,
                sum.im * s2,
                sum.re,
                sum.im,
                diff.re,
                diff.im,
            ]
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        0.5 / z,
        KxRegion::Full,
        &cfg.k_plane(Vec::new()),
    );
    let v8 = res.value;
    let mut matrix = M3C::diag([
        C64::new(v8[0], v8[1]),
        C64::new(v8[2], v8[3]),
        C64::new(v8[4], v8[5]),
    ]);
    // K_xz = -i * p, K_zx = +i * p
    let p = C64::new(v8[6], v8[7]);
    matrix.m[0][2] = C64::new(0.0, -1.0) * p;
    matrix.m[2][0] = C64::new(0.0, 1.0) * p;
    KernelEval {
        matrix,
        err: res.worst_rel_err(),
        n_evals: res.n_evals,
        converged: res.converged,
    }
}

/// Closed form of [`doppler_kernel`] at rest:
/// K(w, 0) = r(w) / (16 pi eps0 z^3) * diag(1/2, 1/2, 1).
pub fn doppler_kernel_static(material: &Material, z: f64, omega: f64) -> M3C {
    let r = material.reflection_p(omega);
    let scale = 1.0 / (16.0 * std::f64::consts::PI * EPS0 * z * z * z);
    M3C::diag([r * (0.5 * scale), r * (0.5 * scale), r * scale])
}

/// Positive-frequency window of the anti-Hermitian Green tensor under the
/// Doppler map,
///
/// ```text
///   Ktheta(w, v) = int d^2k/(2pi)^2 theta(w + kx v) G_imdag(k, z, w + kx v),
/// ```
///
/// which is Hermitian and positive semidefinite for every (w, v): the
/// integrand is pointwise PSD on the window where it is nonzero, because
/// Im r > 0 exactly where the shifted frequency is positive.
///
/// For w > 0 the window cuts the kx < -w/v half-plane out of the r- image;
/// for w < 0 only kx > |w|/v survives. The threshold lines enter the radial
/// quadrature as per-ray breakpoints. At v = 0 the window collapses to
/// theta(w) times the static kernel's anti-Hermitian part.
pub fn heaviside_kernel_im(
    material: &Material,
    z: f64,
    omega: f64,
    v: f64,
    cfg: &KernelConfig,
) -> KernelEval {
    assert!(v >= 0.0, "kernel defined for v >= 0; map v -> -v by x -> -x");
    if v == 0.0 {
        let matrix = if omega > 0.0 {
            doppler_kernel_static(material, z, omega).im_dagger()
        } else {
            M3C::zero()
        };
        return KernelEval {
            matrix,
            err: 0.0,
            n_evals: 0,
            converged: true,
        };
    }
    let k_star = omega.abs() / v; // kx threshold where a window edge sits
    let res = integrate_k_plane(
        |k: f64, theta: f64| -> [f64; 4] {
            let c = theta.cos();
            let s2 = 1.0 - c * c;
            let wp = omega + k * v * c;
            let wm = omega - k * v * c;
            let rp = if wp > 0.0 {
                material.reflection_p_im(wp)
            } else {
                0.0
            };
            let rm = if wm > 0.0 {
                material.reflection_p_im(wm)
            } else {
                0.0
            };
            let pref = 0.5 * k / EPS0 * (-2.0 * k * z).exp();
            let sum = 2.0 * pref * (rp + rm);
            let diff = 2.0 * pref * c * (rp - rm);
            [sum * c * c, sum * s2, sum, diff]
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        0.5 / z,
        KxRegion::Full,
        &cfg.k_plane(vec![k_star]),
    );
    let v4 = res.value;
    let mut matrix = M3C::diag([
        C64::new(v4[0], 0.0),
        C64::new(v4[1], 0.0),
        C64::new(v4[2], 0.0),
    ]);
    let p = C64::new(v4[3], 0.0);
    matrix.m[0][2] = C64::new(0.0, -1.0) * p;
    matrix.m[2][0] = C64::new(0.0, 1.0) * p;
    KernelEval {
        matrix,
        err: res.worst_rel_err(),
        n_evals: res.n_evals,
        converged: res.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ev_to_rad_s;
    use approx::assert_relative_eq;

    fn gold() -> Material {
        Material::drude(ev_to_rad_s(9.0), ev_to_rad_s(0.035)).unwrap()
    }

    const Z: f64 = 5e-9;

    #[test]
    fn reduced_decomposition_reassembles_tensor() {
        let m = gold();
        let (kx, ky, w) = (0.7e8f64, -0.4e8f64, ev_to_rad_s(0.9));
        let k = kx.hypot(ky);
        let (sigma, phi) = green_reduced(&m, k, kx / k, Z, w);
        let g = green_nearfield(&m, kx, ky, Z, w, false);
        let mut rebuilt = M3C::diag(sigma);
        let ly = crate::math3::l_y();
        rebuilt = rebuilt - ly.scale_c(phi);
        assert!((g - rebuilt).norm_max() <= 1e-15 * g.norm_max());
    }

    #[test]
    fn full_tensor_is_rank_one_and_hermitian_in_structure() {
        let m = gold();
        let (kx, ky, w) = (1.1e8f64, 0.6e8f64, ev_to_rad_s(1.1));
        let g = green_nearfield(&m, kx, ky, Z, w, true);
        // G / (pref r) = u (x) u* has rank 1: det = 0 and trace = 2 pref r
        let k = kx.hypot(ky);
        let pref = 0.5 * k / EPS0 * (-2.0 * k * Z).exp();
        let r = m.reflection_p(w);
        assert!(g.det().norm() <= 1e-12 * g.norm_max().powi(3));
        let tr = g.trace();
        assert_relative_eq!(tr.re, 2.0 * pref * r.re, max_relative = 1e-12);
        assert_relative_eq!(tr.im, 2.0 * pref * r.im, max_relative = 1e-12);
    }

    #[test]
    fn reduced_tensor_drops_only_ky_odd_entries() {
        let m = gold();
        let (kx, ky, w) = (0.9e8, 0.5e8, ev_to_rad_s(0.4));
        let full = green_nearfield(&m, kx, ky, Z, w, true);
        let red = green_nearfield(&m, kx, ky, Z, w, false);
        // averaging the full tensor over ky -> -ky reproduces the reduced one
        let mirrored = green_nearfield(&m, kx, -ky, Z, w, true);
        let avg = (full + mirrored).scale(0.5);
        assert!((avg - red).norm_max() <= 1e-15 * full.norm_max());
    }

    #[test]
    fn parity_in_kx_flips_the_rotational_part() {
        let m = gold();
        let (kx, ky, w) = (0.8e8, 0.3e8, ev_to_rad_s(0.7));
        let g = green_nearfield(&m, kx, ky, Z, w, false);
        let gm = green_nearfield(&m, -kx, ky, Z, w, false);
        for i in 0..3 {
            assert_eq!(g.m[i][i], gm.m[i][i]);
        }
        assert_eq!(g.m[0][2], -gm.m[0][2]);
        assert_eq!(g.m[2][0], -gm.m[2][0]);
    }

    #[test]
    fn im_dagger_is_psd_at_positive_frequency() {
        let m = gold();
        for (kx, ky) in [(1e8, 0.0), (0.3e8, 1.2e8), (-0.9e8, 0.2e8)] {
            let gi = green_im_dagger(&m, kx, ky, Z, ev_to_rad_s(0.8));
            assert!(gi.hermiticity_defect() <= 1e-15 * gi.norm_max());
            assert!(gi.min_eigenvalue() >= -1e-12 * gi.trace().re);
        }
    }

    #[test]
    fn spin_ldos_odd_in_kx_and_proportional_to_im_r() {
        let m = gold();
        let (k, w) = (1.4e8, ev_to_rad_s(0.6));
        let plus = spin_ldos(&m, k, 0.6, Z, w);
        let minus = spin_ldos(&m, k, -0.6, Z, w);
        assert_relative_eq!(plus, -minus, max_relative = 1e-14);
        let expected = 0.5 * k * 0.6 / EPS0 * (-2.0 * k * Z).exp() * m.reflection_p_im(w);
        assert_relative_eq!(plus, expected, max_relative = 1e-14);
    }

    #[test]
    fn static_kernel_closed_form_matches_quadrature() {
        let m = gold();
        let w = ev_to_rad_s(1.3);
        let closed = doppler_kernel_static(&m, Z, w);
        // quadrature route with v = 0 folded in manually: integrate the
        // reduced tensor over the quarter circle with 4x image weight
        let res = integrate_k_plane(
            |k: f64, theta: f64| -> [f64; 6] {
                let c = theta.cos();
                let (sigma, _) = green_reduced(&m, k, c, Z, w);
                [
                    4.0 * sigma[0].re,
                    4.0 * sigma[0].im,
                    4.0 * sigma[1].re,
                    4.0 * sigma[1].im,
                    4.0 * sigma[2].re,
                    4.0 * sigma[2].im,
                ]
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            0.5 / Z,
            KxRegion::Full,
            &KPlaneConfig::default(),
        );
        assert!(res.converged);
        assert_relative_eq!(res.value[0], closed.m[0][0].re, max_relative = 1e-8);
        assert_relative_eq!(res.value[1], closed.m[0][0].im, max_relative = 1e-8);
        assert_relative_eq!(res.value[4], closed.m[2][2].re, max_relative = 1e-8);
        assert_relative_eq!(res.value[5], closed.m[2][2].im, max_relative = 1e-8);
        // zz = 2 xx for the static kernel
        assert_relative_eq!(
            closed.m[2][2].re,
            2.0 * closed.m[0][0].re,
            max_relative = 1e-15
        );
    }

    #[test]
    fn doppler_kernel_reduces_to_static_at_small_velocity() {
        let m = gold();
        let w = ev_to_rad_s(0.9);
        let k0 = doppler_kernel_static(&m, Z, w);
        let kv = doppler_kernel(&m, Z, w, 1.0, &KernelConfig::default());
        assert!(kv.converged);
        // diagonal moves only at O((v/c_eff)^2); 1 m/s is indistinguishable
        for i in 0..3 {
            assert_relative_eq!(
                kv.matrix.m[i][i].re,
                k0.m[i][i].re,
                max_relative = 1e-8
            );
        }
        // xz is strictly zero at rest and O(v) in motion
        assert!(kv.matrix.m[0][2].norm() <= 1e-6 * kv.matrix.m[2][2].norm());
    }

    #[test]
    fn doppler_kernel_xz_scales_linearly_in_v() {
        let m = gold();
        let w = 2e11; // inside the Ohmic band
        let cfg = KernelConfig::default();
        let k1 = doppler_kernel(&m, Z, w, 5_000.0, &cfg);
        let k2 = doppler_kernel(&m, Z, w, 10_000.0, &cfg);
        let x1 = k1.matrix.m[0][2].re;
        let x2 = k2.matrix.m[0][2].re;
        assert_relative_eq!(x2 / x1, 2.0, max_relative = 1e-4);
        // K_zx = -K_xz for the reduced structure
        assert_eq!(k1.matrix.m[2][0], -k1.matrix.m[0][2]);
    }

    #[test]
    fn heaviside_kernel_matches_unpaired_full_circle() {
        let m = gold();
        let z = Z;
        let v = 30_000.0;
        for w in [3e11, -2e11] {
            let paired = heaviside_kernel_im(&m, z, w, v, &KernelConfig::default());
            assert!(paired.converged);
            // independent route: full circle, indicator inside the integrand
            let res = integrate_k_plane(
                |k: f64, theta: f64| -> [f64; 4] {
                    let c = theta.cos();
                    let s2 = 1.0 - c * c;
                    let ws = w + k * v * c;
                    let ri = if ws > 0.0 { m.reflection_p_im(ws) } else { 0.0 };
                    let pref = 0.5 * k / EPS0 * (-2.0 * k * z).exp();
                    [
                        pref * ri * c * c,
                        pref * ri * s2,
                        pref * ri,
                        pref * ri * c,
                    ]
                },
                -std::f64::consts::PI,
                std::f64::consts::PI,
                0.5 / z,
                KxRegion::Full,
                &KPlaneConfig {
                    angular_order: 32,
                    kx_breaklines: vec![-w / v],
                    ..Default::default()
                },
            );
            for (i, &(ip, jp)) in [(0usize, 0usize), (1, 1), (2, 2)].iter().enumerate() {
                assert_relative_eq!(
                    paired.matrix.m[ip][jp].re,
                    res.value[i],
                    max_relative = 1e-6
                );
            }
            assert_relative_eq!(paired.matrix.m[0][2].im, -res.value[3], max_relative = 1e-6);
        }
    }

    #[test]
    fn heaviside_kernel_is_hermitian_psd() {
        let m = gold();
        for (w, v) in [(4e11, 2e4), (-1.5e11, 1e4), (1e12, 3e5), (-4e12, 3e5)] {
            let kk = heaviside_kernel_im(&m, Z, w, v, &KernelConfig::default());
            assert!(kk.converged);
            assert!(kk.matrix.hermiticity_defect() <= 1e-14 * kk.matrix.norm_max());
            let tr = kk.matrix.trace().re;
            assert!(tr >= 0.0);
            assert!(kk.matrix.min_eigenvalue() >= -1e-10 * tr);
        }
    }

    #[test]
    fn heaviside_kernel_negative_frequency_window_shrinks() {
        // for w < 0 only kx > |w|/v survives, so the kernel is strictly
        // smaller than its positive-frequency mirror
        let m = gold();
        let v = 20_000.0;
        let plus = heaviside_kernel_im(&m, Z, 2e11, v, &KernelConfig::default());
        let minus = heaviside_kernel_im(&m, Z, -2e11, v, &KernelConfig::default());
        assert!(minus.matrix.trace().re > 0.0);
        assert!(minus.matrix.trace().re < plus.matrix.trace().re);
    }

    #[test]
    fn heaviside_kernel_at_rest_is_windowed_static_kernel() {
        let m = gold();
        let w = ev_to_rad_s(0.5);
        let at_rest = heaviside_kernel_im(&m, Z, w, 0.0, &KernelConfig::default());
        let expected = doppler_kernel_static(&m, Z, w).im_dagger();
        assert!((at_rest.matrix - expected).norm_max() <= 1e-15 * expected.norm_max());
        let negative = heaviside_kernel_im(&m, Z, -w, 0.0, &KernelConfig::default());
        assert_eq!(negative.matrix.norm_max(), 0.0);
    }
}
