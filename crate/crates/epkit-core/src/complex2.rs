//! Minimal complex 2-vector / 2x2-matrix arithmetic.
//!
//! Everything in this crate lives in C^2, so a hand-rolled pair of types is
//! both lighter and more transparent than a general linear algebra
//! dependency. Two inner products appear throughout: the *bilinear* one
//! `a^T b` (no conjugation, the one that vanishes on isotropic vectors) and
//! the sesquilinear Hilbert product `<a|b> = a^dagger b`.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
// Float is shadowed by the std inherent methods in test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

pub type C64 = Complex64;

/// Complex column 2-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2(pub [C64; 2]);

impl Vec2 {
    pub const fn new(a: C64, b: C64) -> Self {
        Vec2([a, b])
    }

    pub fn zero() -> Self {
        Vec2([C64::new(0.0, 0.0); 2])
    }

    /// Bilinear product `self^T other` (no conjugation).
    pub fn dot_t(&self, other: &Vec2) -> C64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    /// Hermitian product `<self|other> = self^dagger other`.
    pub fn dot_h(&self, other: &Vec2) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Vec2 {
        Vec2([self.0[0].conj(), self.0[1].conj()])
    }

    pub fn scale(&self, s: C64) -> Vec2 {
        Vec2([self.0[0] * s, self.0[1] * s])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0[0].norm().max(self.0[1].norm())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2([-self.0[0], -self.0[1]])
    }
}

/// Complex 2x2 matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    pub fn zero() -> Self {
        Mat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    /// Swap matrix S2 = [[0,1],[1,0]].
    pub fn swap() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Mat2([[zero, one], [one, zero]])
    }

    /// Nilpotent Jordan block J2(0) = [[0,1],[0,0]].
    pub fn jordan_block() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Mat2([[zero, one], [zero, zero]])
    }

    pub fn from_columns(c0: Vec2, c1: Vec2) -> Self {
        Mat2([[c0.0[0], c1.0[0]], [c0.0[1], c1.0[1]]])
    }

    pub fn column(&self, j: usize) -> Vec2 {
        Vec2([self.0[0][j], self.0[1][j]])
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn conj(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[0][1].conj()],
            [self.0[1][0].conj(), self.0[1][1].conj()],
        ])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        self.transpose().conj()
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(Mat2([
            [self.0[1][1] / d, -self.0[0][1] / d],
            [-self.0[1][0] / d, self.0[0][0] / d],
        ]))
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2([
            [self.0[0][0] * s, self.0[0][1] * s],
            [self.0[1][0] * s, self.0[1][1] * s],
        ])
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.0[0][0].norm_sqr()
            + self.0[0][1].norm_sqr()
            + self.0[1][0].norm_sqr()
            + self.0[1][1].norm_sqr())
        .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0[0][0]
            .norm()
            .max(self.0[0][1].norm())
            .max(self.0[1][0].norm())
            .max(self.0[1][1].norm())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2([
            [self.0[0][0] + rhs.0[0][0], self.0[0][1] + rhs.0[0][1]],
            [self.0[1][0] + rhs.0[1][0], self.0[1][1] + rhs.0[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2([
            [self.0[0][0] - rhs.0[0][0], self.0[0][1] - rhs.0[0][1]],
            [self.0[1][0] - rhs.0[1][0], self.0[1][1] - rhs.0[1][1]],
        ])
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2([
            self.0[0][0] * v.0[0] + self.0[0][1] * v.0[1],
            self.0[1][0] * v.0[0] + self.0[1][1] * v.0[1],
        ])
    }
}

impl Mul<Mat2> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }
}
