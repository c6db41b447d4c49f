//! 2x2 complex matrices and exact Gaussian-integer 2x2 matrices.
//!
//! Everything in the Riemann-Hilbert layer is 2x2, so a fixed-size type with
//! value semantics beats a general matrix library here. Entries are row-major:
//! `[[a, b], [c, d]]`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(C64::new(1.0, 0.0), C64::ZERO, C64::ZERO, C64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Mat2::new(C64::ZERO, C64::ZERO, C64::ZERO, C64::ZERO)
    }

    pub fn diag(x: C64, y: C64) -> Self {
        Mat2::new(x, C64::ZERO, C64::ZERO, y)
    }

    /// diag(s, 1/s), the third-Pauli-matrix power that conjugates jump data.
    pub fn sigma3(s: C64) -> Self {
        Mat2::diag(s, 1.0 / s)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inv(&self) -> Self {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Max-abs entry norm. All residual bounds in this crate use this norm.
    pub fn norm_max(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    pub fn row(&self, i: usize) -> [C64; 2] {
        match i {
            0 => [self.a, self.b],
            _ => [self.c, self.d],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match (i, j) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            _ => self.d,
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, r: Mat2) -> Mat2 {
        Mat2::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, r: Mat2) -> Mat2 {
        Mat2::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        Mat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Gaussian integer a + b*i with exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gi {
    pub re: i64,
    pub im: i64,
}

pub const fn gi(re: i64, im: i64) -> Gi {
    Gi { re, im }
}

impl Gi {
    pub const ZERO: Gi = gi(0, 0);
    pub const ONE: Gi = gi(1, 0);

    pub fn is_unit(&self) -> bool {
        (self.re.abs() == 1 && self.im == 0) || (self.re == 0 && self.im.abs() == 1)
    }

    /// Multiplicative inverse, defined only for the four units.
    pub fn unit_inv(&self) -> Gi {
        debug_assert!(self.is_unit());
        // 1/(a+bi) = conj/(a^2+b^2) = conj for units
        gi(self.re, -self.im)
    }
}

impl Add for Gi {
    type Output = Gi;
    fn add(self, r: Gi) -> Gi {
        gi(self.re + r.re, self.im + r.im)
    }
}

impl Sub for Gi {
    type Output = Gi;
    fn sub(self, r: Gi) -> Gi {
        gi(self.re - r.re, self.im - r.im)
    }
}

impl Mul for Gi {
    type Output = Gi;
    fn mul(self, r: Gi) -> Gi {
        gi(
            self.re * r.re - self.im * r.im,
            self.re * r.im + self.im * r.re,
        )
    }
}

impl Neg for Gi {
    type Output = Gi;
    fn neg(self) -> Gi {
        gi(-self.re, -self.im)
    }
}

/// Exact 2x2 matrix over the Gaussian integers; used for jump-data identities
/// that must hold exactly, not just to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GMat2 {
    pub a: Gi,
    pub b: Gi,
    pub c: Gi,
    pub d: Gi,
}

impl GMat2 {
    pub const fn new(a: Gi, b: Gi, c: Gi, d: Gi) -> Self {
        GMat2 { a, b, c, d }
    }

    pub const IDENTITY: GMat2 = GMat2::new(gi(1, 0), gi(0, 0), gi(0, 0), gi(1, 0));

    pub fn det(&self) -> Gi {
        self.a * self.d - self.b * self.c
    }

    /// Exact inverse; the determinant must be a unit.
    pub fn inv(&self) -> GMat2 {
        let det = self.det();
        assert!(det.is_unit(), "exact inverse requires unit determinant");
        let s = det.unit_inv();
        GMat2::new(self.d * s, -self.b * s, -self.c * s, self.a * s)
    }

    pub fn to_mat2(&self) -> Mat2 {
        let f = |g: Gi| C64::new(g.re as f64, g.im as f64);
        Mat2::new(f(self.a), f(self.b), f(self.c), f(self.d))
    }
}

impl Mul for GMat2 {
    type Output = GMat2;
    fn mul(self, r: GMat2) -> GMat2 {
        GMat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}
