//! Double-double arithmetic: unevaluated sums hi + lo with |lo| <= ulp(hi)/2,
//! giving roughly 32 significant digits.
//!
//! Used where plain f64 loses too much to cancellation: high-degree recurrence
//! inner products and the Airy Maclaurin series at moderate |z|. Only the
//! operations those paths need are implemented.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// An exact two-component constant, e.g. frozen from higher precision.
    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    /// The exact product of two doubles as a two-component value.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, r: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, r.hi);
        let (t1, t2) = two_sum(self.lo, r.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, r: Dd) -> Dd {
        self.add(r.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, r: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, r.hi);
        let p2 = p2 + self.hi * r.lo + self.lo * r.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, r: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, r);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * r);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, r: Dd) -> Dd {
        let q1 = self.hi / r.hi;
        let rem = self.sub(r.mul_f64(q1));
        let q2 = rem.hi / r.hi;
        let rem2 = rem.sub(r.mul_f64(q2));
        let q3 = rem2.hi / r.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, r: f64) -> Dd {
        self.div(Dd::from_f64(r))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ddc {
    pub re: Dd,
    pub im: Dd,
}

impl Ddc {
    pub const ZERO: Ddc = Ddc { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Ddc = Ddc { re: Dd::ONE, im: Dd::ZERO };

    #[inline]
    pub fn from_c64(z: Complex64) -> Ddc {
        Ddc { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, r: Ddc) -> Ddc {
        Ddc { re: self.re.add(r.re), im: self.im.add(r.im) }
    }

    #[inline]
    pub fn sub(self, r: Ddc) -> Ddc {
        Ddc { re: self.re.sub(r.re), im: self.im.sub(r.im) }
    }

    #[inline]
    pub fn mul(self, r: Ddc) -> Ddc {
        Ddc {
            re: self.re.mul(r.re).sub(self.im.mul(r.im)),
            im: self.re.mul(r.im).add(self.im.mul(r.re)),
        }
    }

    #[inline]
    pub fn mul_dd(self, r: Dd) -> Ddc {
        Ddc { re: self.re.mul(r), im: self.im.mul(r) }
    }

    #[inline]
    pub fn mul_f64(self, r: f64) -> Ddc {
        Ddc { re: self.re.mul_f64(r), im: self.im.mul_f64(r) }
    }

    #[inline]
    pub fn div_f64(self, r: f64) -> Ddc {
        Ddc { re: self.re.div_f64(r), im: self.im.div_f64(r) }
    }

    /// Cheap magnitude proxy for convergence checks.
    #[inline]
    pub fn mag(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_exactness() {
        // 1 + 2^-80 survives in double-double, not in f64
        let tiny = (2.0f64).powi(-80);
        let s = Dd::ONE.add(Dd::from_f64(tiny));
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, tiny);
        let back = s.sub(Dd::ONE);
        assert_eq!(back.to_f64(), tiny);
    }

    #[test]
    fn mul_catches_rounding() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60 exactly
        let x = Dd::ONE.add(Dd::from_f64((2.0f64).powi(-30)));
        let sq = x.mul(x);
        let expect_lo = (2.0f64).powi(-60);
        let r = sq.sub(Dd::ONE).sub(Dd::from_f64((2.0f64).powi(-29)));
        assert_eq!(r.to_f64(), expect_lo);
    }

    #[test]
    fn div_recovers_thirds() {
        let third = Dd::ONE.div_f64(3.0);
        let one = third.mul_f64(3.0);
        assert!((one.sub(Dd::ONE)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_mul_matches_f64_for_small_cases() {
        let a = Ddc::from_c64(Complex64::new(1.5, -2.25));
        let b = Ddc::from_c64(Complex64::new(-0.5, 3.0));
        let p = a.mul(b).to_c64();
        let q = Complex64::new(1.5, -2.25) * Complex64::new(-0.5, 3.0);
        assert!((p - q).norm() < 1e-15);
    }
}
