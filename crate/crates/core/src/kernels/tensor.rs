//! Two-component vectors and 2×2 complex matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x1: f64,
    pub x2: f64,
}

impl Vec2 {
    pub const E1: Vec2 = Vec2 { x1: 1.0, x2: 0.0 };
    pub const E2: Vec2 = Vec2 { x1: 0.0, x2: 1.0 };

    pub const fn new(x1: f64, x2: f64) -> Self {
        Vec2 { x1, x2 }
    }

    /// Polarization basis vector e_j, j in {1, 2}.
    pub fn basis(j: usize) -> Self {
        match j {
            1 => Self::E1,
            2 => Self::E2,
            _ => panic!("basis index must be 1 or 2, got {j}"),
        }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x1 * s, self.x2 * s)
    }

    /// Rotation by +90 degrees: (-x2, x1).
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.x2, self.x1)
    }

    pub fn to_complex(self) -> Vec2C {
        Vec2C::new(self.x1.into(), self.x2.into())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x1, -self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2C {
    pub x1: Complex64,
    pub x2: Complex64,
}

impl Vec2C {
    pub const ZERO: Vec2C = Vec2C { x1: ZERO, x2: ZERO };

    pub const fn new(x1: Complex64, x2: Complex64) -> Self {
        Vec2C { x1, x2 }
    }

    /// Bilinear product (no conjugation).
    pub fn dot(self, o: Vec2C) -> Complex64 {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn dot_real(self, o: Vec2) -> Complex64 {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn conj(self) -> Vec2C {
        Vec2C::new(self.x1.conj(), self.x2.conj())
    }

    pub fn scale(self, s: Complex64) -> Vec2C {
        Vec2C::new(self.x1 * s, self.x2 * s)
    }

    /// Largest component modulus.
    pub fn max_abs(self) -> f64 {
        self.x1.norm().max(self.x2.norm())
    }

    pub fn norm(self) -> f64 {
        (self.x1.norm_sqr() + self.x2.norm_sqr()).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn component(self, j: usize) -> Complex64 {
        match j {
            1 => self.x1,
            2 => self.x2,
            _ => panic!("component index must be 1 or 2, got {j}"),
        }
    }
}

impl Add for Vec2C {
    type Output = Vec2C;
    fn add(self, o: Vec2C) -> Vec2C {
        Vec2C::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for Vec2C {
    type Output = Vec2C;
    fn sub(self, o: Vec2C) -> Vec2C {
        Vec2C::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Neg for Vec2C {
    type Output = Vec2C;
    fn neg(self) -> Vec2C {
        Vec2C::new(-self.x1, -self.x2)
    }
}

impl Mul<f64> for Vec2C {
    type Output = Vec2C;
    fn mul(self, s: f64) -> Vec2C {
        Vec2C::new(self.x1 * s, self.x2 * s)
    }
}

/// 2×2 complex matrix, row-major entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Mat2C {
    pub const ZERO: Mat2C = Mat2C { a11: ZERO, a12: ZERO, a21: ZERO, a22: ZERO };

    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Mat2C { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Mat2C::new(one, ZERO, ZERO, one)
    }

    /// a I + b v vᵀ.
    pub fn iso_plus_dyad(a: Complex64, b: Complex64, v: Vec2) -> Self {
        Mat2C::new(
            a + b * (v.x1 * v.x1),
            b * (v.x1 * v.x2),
            b * (v.x2 * v.x1),
            a + b * (v.x2 * v.x2),
        )
    }

    /// u vᵀ for real vectors.
    pub fn outer(u: Vec2, v: Vec2) -> Self {
        Mat2C::new(
            (u.x1 * v.x1).into(),
            (u.x1 * v.x2).into(),
            (u.x2 * v.x1).into(),
            (u.x2 * v.x2).into(),
        )
    }

    /// Entry (r, c) with 1-based indices.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match (r, c) {
            (1, 1) => self.a11,
            (1, 2) => self.a12,
            (2, 1) => self.a21,
            (2, 2) => self.a22,
            _ => panic!("matrix index ({r},{c}) out of range"),
        }
    }

    pub fn transpose(&self) -> Self {
        Mat2C::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn conj(&self) -> Self {
        Mat2C::new(self.a11.conj(), self.a12.conj(), self.a21.conj(), self.a22.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Mat2C::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn col(&self, k: usize) -> Vec2C {
        match k {
            1 => Vec2C::new(self.a11, self.a21),
            2 => Vec2C::new(self.a12, self.a22),
            _ => panic!("column index must be 1 or 2, got {k}"),
        }
    }

    pub fn from_cols(c1: Vec2C, c2: Vec2C) -> Self {
        Mat2C::new(c1.x1, c2.x1, c1.x2, c2.x2)
    }

    pub fn mul_vec(&self, v: Vec2C) -> Vec2C {
        Vec2C::new(self.a11 * v.x1 + self.a12 * v.x2, self.a21 * v.x1 + self.a22 * v.x2)
    }

    pub fn mul_real_vec(&self, v: Vec2) -> Vec2C {
        Vec2C::new(self.a11 * v.x1 + self.a12 * v.x2, self.a21 * v.x1 + self.a22 * v.x2)
    }

    pub fn matmul(&self, o: &Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn re(&self) -> [[f64; 2]; 2] {
        [[self.a11.re, self.a12.re], [self.a21.re, self.a22.re]]
    }

    pub fn im(&self) -> [[f64; 2]; 2] {
        [[self.a11.im, self.a12.im], [self.a21.im, self.a22.im]]
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: f64) -> Mat2C {
        Mat2C::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }
}

impl Mul<Complex64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: Complex64) -> Mat2C {
        self.scale(s)
    }
}
