//! Dense 3x3 complex matrices and the so(3) spin algebra used throughout.
//!
//! The response tensors of this problem (Green tensor, polarizability, dipole
//! power spectrum) are all 3x3 complex matrices over the Cartesian axes
//! (x, y, z), where x is the direction of motion and z the surface normal.
//! Two different decompositions appear side by side and must not be confused:
//!
//! * transpose symmetry: `M = sym(M) + asym(M)` with `sym(M) = (M + M^T)/2`,
//! * elementwise parts:  `M = re(M) + i im(M)`,
//! * dagger ("dissipative") parts: `im_dagger(M) = (M - M^†)/(2i)`.
//!
//! These tie together through the identity
//! `im_dagger(M) = sym(im(M)) - i asym(re(M))`, which the tests pin down.
//!
//! The spin-1 generators are `[L_i]_jk = -i eps_ijk`; in particular `L_y` has
//! exactly two nonzero entries, `(x,z) = +i` and `(z,x) = -i`, and satisfies
//! `trace(L_y^T L_y) = -2` and `L_y^2 = diag(1, 0, 1)`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex64;

/// Cartesian axis labels; x is the direction of motion, z the surface normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

/// A dense, stack-allocated 3x3 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M3C {
    pub m: [[C64; 3]; 3],
}

/// Errors from the small dense linear algebra kernel.
#[derive(Debug, thiserror::Error)]
pub enum Mat3Error {
    #[error("matrix is numerically singular (|det| = {det_abs:.3e} <= {threshold:.3e})")]
    Singular { det_abs: f64, threshold: f64 },
}

impl M3C {
    pub const fn zero() -> Self {
        let z = C64 { re: 0.0, im: 0.0 };
        M3C { m: [[z; 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            out.m[i][i] = C64::new(1.0, 0.0);
        }
        out
    }

    pub fn diag(d: [C64; 3]) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            out.m[i][i] = d[i];
        }
        out
    }

    pub fn from_rows(rows: [[C64; 3]; 3]) -> Self {
        M3C { m: rows }
    }

    pub fn get(&self, i: Axis, j: Axis) -> C64 {
        self.m[i as usize][j as usize]
    }

    pub fn set(&mut self, i: Axis, j: Axis, v: C64) {
        self.m[i as usize][j as usize] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[j][i];
            }
        }
        out
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][j].conj();
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        self.transpose().conj()
    }

    /// Transpose-symmetric part (M + M^T)/2.
    pub fn sym(&self) -> Self {
        (*self + self.transpose()).scale(0.5)
    }

    /// Transpose-antisymmetric part (M - M^T)/2.
    pub fn asym(&self) -> Self {
        (*self - self.transpose()).scale(0.5)
    }

    /// Elementwise real part, kept complex-typed for composability.
    pub fn re_part(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = C64::new(self.m[i][j].re, 0.0);
            }
        }
        out
    }

    /// Elementwise imaginary part (a real matrix, stored complex-typed).
    pub fn im_part(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = C64::new(self.m[i][j].im, 0.0);
            }
        }
        out
    }

    /// Dagger-based dissipative part (M - M^†)/(2i); Hermitian by construction.
    ///
    /// Identity: `im_dagger(M) = sym(im(M)) - i asym(re(M))`.
    pub fn im_dagger(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let d = self.m[i][j] - self.m[j][i].conj();
                // d / (2i) = (d.im + i * (-d.re)) / 2
                out.m[i][j] = C64::new(d.im * 0.5, -d.re * 0.5);
            }
        }
        out
    }

    /// Hermitian part (M + M^†)/2.
    pub fn re_dagger(&self) -> Self {
        (*self + self.dagger()).scale(0.5)
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// trace(A B) computed without forming the product.
    pub fn trace_product(a: &M3C, b: &M3C) -> C64 {
        let mut t = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                t += a.m[i][j] * b.m[j][i];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] *= s;
            }
        }
        out
    }

    pub fn scale_c(&self, s: C64) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] *= s;
            }
        }
        out
    }

    pub fn det(&self) -> C64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry magnitude; the natural scale for singularity thresholds.
    pub fn norm_max(&self) -> f64 {
        let mut n: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                n = n.max(self.m[i][j].norm());
            }
        }
        n
    }

    /// Inverse via the adjugate, guarded against near-singular input.
    ///
    /// The matrix is declared singular when |det| <= 1e-14 * norm_max^3,
    /// the roundoff floor for a 3x3 determinant at this scale.
    pub fn inverse(&self) -> Result<M3C, Mat3Error> {
        let d = self.det();
        let scale = self.norm_max();
        let threshold = 1e-14 * scale * scale * scale;
        if d.norm() <= threshold {
            return Err(Mat3Error::Singular {
                det_abs: d.norm(),
                threshold,
            });
        }
        let m = &self.m;
        let inv_d = C64::new(1.0, 0.0) / d;
        let mut out = Self::zero();
        // adjugate: cofactor transpose
        out.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_d;
        out.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_d;
        out.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_d;
        out.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_d;
        out.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_d;
        out.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_d;
        out.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_d;
        out.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_d;
        out.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_d;
        Ok(out)
    }

    /// Max entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).norm_max()
    }

    /// Eigenvalues of a Hermitian matrix, ascending, by the closed-form
    /// trigonometric method for 3x3 symmetric eigenproblems.
    ///
    /// The caller is responsible for `self` being (numerically) Hermitian;
    /// only the Hermitian part of the data enters the computation.
    pub fn hermitian_eigenvalues(&self) -> [f64; 3] {
        // cyclic complex Jacobi sweeps on the Hermitian part: quadratically
        // convergent and accurate to machine precision even for degenerate
        // spectra (where closed-form cubic solvers lose half the digits)
        let mut a = self.re_dagger().m;
        for _ in 0..16 {
            let off = a[0][1].norm_sqr() + a[0][2].norm_sqr() + a[1][2].norm_sqr();
            let scale = a[0][0].re.abs() + a[1][1].re.abs() + a[2][2].re.abs();
            if off <= f64::EPSILON * f64::EPSILON * scale * scale {
                break;
            }
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = a[p][q];
                let norm = apq.norm();
                if norm == 0.0 {
                    continue;
                }
                let w = apq / norm; // unit phase of the pivot
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * norm);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let app = a[p][p].re - t * norm;
                let aqq = a[q][q].re + t * norm;
                a[p][p] = C64::new(app, 0.0);
                a[q][q] = C64::new(aqq, 0.0);
                a[p][q] = C64::new(0.0, 0.0);
                a[q][p] = C64::new(0.0, 0.0);
                let r = 3 - p - q; // the untouched index
                let arp = a[r][p];
                let arq = a[r][q];
                a[r][p] = arp * c - arq * (s * w.conj());
                a[r][q] = arp * (s * w) + arq * c;
                a[p][r] = a[r][p].conj();
                a[q][r] = a[r][q].conj();
            }
        }
        let mut e = [a[0][0].re, a[1][1].re, a[2][2].re];
        e.sort_by(|x, y| x.partial_cmp(y).unwrap());
        e
    }

    /// Smallest eigenvalue of the Hermitian part; >= -tol means PSD within tol.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }
}

impl Add for M3C {
    type Output = M3C;
    fn add(self, rhs: M3C) -> M3C {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for M3C {
    type Output = M3C;
    fn sub(self, rhs: M3C) -> M3C {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] -= rhs.m[i][j];
            }
        }
        out
    }
}

impl Neg for M3C {
    type Output = M3C;
    fn neg(self) -> M3C {
        self.scale(-1.0)
    }
}

impl Mul for M3C {
    type Output = M3C;
    fn mul(self, rhs: M3C) -> M3C {
        let mut out = M3C::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..3 {
                    s += self.m[i][k] * rhs.m[k][j];
                }
                out.m[i][j] = s;
            }
        }
        out
    }
}

/// Spin-1 generator about `axis`: `[L_i]_jk = -i eps_ijk`.
pub fn generator(axis: Axis) -> M3C {
    let mut out = M3C::zero();
    let i = axis as usize;
    // eps_ijk over the two nonzero index pairs for fixed i
    let j = (i + 1) % 3;
    let k = (i + 2) % 3;
    out.m[j][k] = C64::new(0.0, -1.0); // eps_ijk = +1
    out.m[k][j] = C64::new(0.0, 1.0); // eps_ikj = -1
    out
}

/// The generator about the y axis, the only one coupled by planar motion.
pub fn l_y() -> M3C {
    generator(Axis::Y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn l_y_entries_match_levi_civita() {
        let ly = l_y();
        // [L_y]_xz = -i eps_yxz = -i * (-1) = +i ; [L_y]_zx = -i eps_yzx = -i
        assert_eq!(ly.get(Axis::X, Axis::Z), c(0.0, 1.0));
        assert_eq!(ly.get(Axis::Z, Axis::X), c(0.0, -1.0));
        assert_eq!(ly.get(Axis::X, Axis::Y), c(0.0, 0.0));
        assert_eq!(ly.get(Axis::Y, Axis::Y), c(0.0, 0.0));
    }

    #[test]
    fn spin_algebra_traces() {
        let ly = l_y();
        let lyt_ly = M3C::trace_product(&ly.transpose(), &ly);
        assert_relative_eq!(lyt_ly.re, -2.0, max_relative = 1e-15);
        assert_eq!(lyt_ly.im, 0.0);

        let ly2 = ly * ly;
        assert_eq!(ly2.get(Axis::X, Axis::X), c(1.0, 0.0));
        assert_eq!(ly2.get(Axis::Y, Axis::Y), c(0.0, 0.0));
        assert_eq!(ly2.get(Axis::Z, Axis::Z), c(1.0, 0.0));
        assert_relative_eq!(ly2.trace().re, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn generators_close_under_commutation() {
        // [L_x, L_y] = i L_z for [L_i]_jk = -i eps_ijk
        let lx = generator(Axis::X);
        let ly = generator(Axis::Y);
        let lz = generator(Axis::Z);
        let comm = lx * ly - ly * lx;
        let expect = lz.scale_c(c(0.0, 1.0));
        assert!((comm - expect).norm_max() < 1e-15);
    }

    #[test]
    fn trace_of_s_ly_picks_out_xz_asymmetry() {
        // trace(S L_y) = i (S_zx - S_xz); for Hermitian S this is 2 Im S_xz.
        let mut s = M3C::identity();
        s.set(Axis::X, Axis::Z, c(0.3, 0.7));
        s.set(Axis::Z, Axis::X, c(0.3, -0.7));
        let t = M3C::trace_product(&s, &l_y());
        assert_relative_eq!(t.re, 2.0 * 0.7, max_relative = 1e-15);
        assert!(t.im.abs() < 1e-15);
    }

    #[test]
    fn inverse_recovers_identity() {
        let a = M3C::from_rows([
            [c(2.0, 1.0), c(0.3, -0.2), c(0.0, 0.5)],
            [c(-1.0, 0.0), c(4.0, -2.0), c(0.1, 0.1)],
            [c(0.7, 0.7), c(0.0, -0.3), c(3.0, 0.2)],
        ]);
        let inv = a.inverse().unwrap();
        assert!(((a * inv) - M3C::identity()).norm_max() < 1e-13);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut a = M3C::identity();
        a.m[2][2] = c(0.0, 0.0);
        a.m[2][0] = c(0.0, 0.0);
        let row0 = a.m[0];
        a.m[2] = row0; // rank-deficient
        assert!(a.inverse().is_err());
    }

    #[test]
    fn hermitian_eigenvalues_of_known_matrix() {
        // diag(1,2,3) rotated by nothing: trivially [1,2,3]
        let d = M3C::diag([c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let e = d.hermitian_eigenvalues();
        assert_relative_eq!(e[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(e[1], 2.0, max_relative = 1e-14);
        assert_relative_eq!(e[2], 3.0, max_relative = 1e-14);

        // A Hermitian matrix with known spectrum {0, 1+c^2} pattern:
        // [[c^2, -ic],[ic, 1]] padded with a middle s^2 entry; c = 0.6, s = 0.8.
        let m = M3C::from_rows([
            [c(0.36, 0.0), c(0.0, 0.0), c(0.0, -0.6)],
            [c(0.0, 0.0), c(0.64, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.6), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let e = m.hermitian_eigenvalues();
        assert_relative_eq!(e[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(e[1], 0.64, max_relative = 1e-12);
        assert_relative_eq!(e[2], 1.36, max_relative = 1e-12);
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| C64::new(re, im))
    }

    fn arb_m3c() -> impl Strategy<Value = M3C> {
        proptest::array::uniform3(proptest::array::uniform3(arb_c64()))
            .prop_map(|rows| M3C::from_rows(rows))
    }

    proptest! {
        #[test]
        fn decompositions_reassemble(m in arb_m3c()) {
            let viaparts = m.sym() + m.asym();
            prop_assert!((viaparts - m).norm_max() < 1e-12);
            let viaelem = m.re_part() + m.im_part().scale_c(C64::new(0.0, 1.0));
            prop_assert!((viaelem - m).norm_max() < 1e-12);
        }

        #[test]
        fn im_dagger_identity(m in arb_m3c()) {
            // (M - M^†)/(2i) = sym(im M) - i asym(re M)
            let lhs = m.im_dagger();
            let rhs = m.im_part().sym() - m.re_part().asym().scale_c(C64::new(0.0, 1.0));
            prop_assert!((lhs - rhs).norm_max() < 1e-12);
            prop_assert!(lhs.hermiticity_defect() < 1e-12);
        }

        #[test]
        fn trace_product_is_cyclic(a in arb_m3c(), b in arb_m3c()) {
            let ab = M3C::trace_product(&a, &b);
            let ba = M3C::trace_product(&b, &a);
            prop_assert!((ab - ba).norm() < 1e-9 * (1.0 + ab.norm()));
        }

        #[test]
        fn eigenvalue_sum_matches_trace(m in arb_m3c()) {
            let h = m.re_dagger();
            let e = h.hermitian_eigenvalues();
            let tr = h.trace().re;
            prop_assert!((e[0] + e[1] + e[2] - tr).abs() < 1e-9 * (1.0 + tr.abs()));
        }
    }
}
