//! Exact 2×2 complex matrix algebra and the Pauli matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::vec3::Vec3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMat2 {
    pub m: [[Complex64; 2]; 2],
}

impl ComplexMat2 {
    pub const ZERO: ComplexMat2 = ComplexMat2::new(ZERO, ZERO, ZERO, ZERO);
    pub const IDENTITY: ComplexMat2 = ComplexMat2::new(ONE, ZERO, ZERO, ONE);

    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a * s, b * s, c * s, d * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Largest entrywise modulus, the ∞-norm used for all matrix tolerances.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).max_abs() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// Only the Hermitian part of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        let mean = 0.5 * (a + d);
        let half_gap = (0.5 * (a - d)).hypot(b.norm());
        [mean - half_gap, mean + half_gap]
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for (row, orow) in out.m.iter_mut().zip(o.m) {
            for (z, oz) in row.iter_mut().zip(orow) {
                *z += oz;
            }
        }
        out
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(-a, -b, -c, -d)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = o.m;
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_re(s)
    }
}

pub fn sigma_x() -> ComplexMat2 {
    ComplexMat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> ComplexMat2 {
    ComplexMat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> ComplexMat2 {
    ComplexMat2::new(ONE, ZERO, ZERO, -ONE)
}

/// The Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli() -> [ComplexMat2; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// σ·p = p_x σ₁ + p_y σ₂ + p_z σ₃.
pub fn pauli_dot(p: Vec3) -> ComplexMat2 {
    let pz = Complex64::new(p.z, 0.0);
    ComplexMat2::new(pz, Complex64::new(p.x, -p.y), Complex64::new(p.x, p.y), -pz)
}
