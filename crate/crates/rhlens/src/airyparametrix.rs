//! Local edge model built from Airy functions.
//!
//! Provides complex evaluation of (Ai, Ai'), the entire matrix whose columns
//! are rotated Airy solutions, the piecewise sector solution with its exact
//! Gaussian-integer ray jumps, the second-derivative identity check, the
//! far-field matching report, and the hard-edge (log singularity) jump data.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::dd::{Dd, Ddc};
use crate::error::{Error, Result};
use crate::mat2::{c64, gi, C64, GMat2, Mat2, I};

/// Radius separating the double-double Maclaurin series from the asymptotic
/// expansion. At this radius the optimally truncated expansion already reaches
/// f64 roundoff while the series still holds 16 digits in double-double.
const SPLIT_RADIUS: f64 = 9.0;

/// Ai(0) and -Ai'(0), double-double.
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const NEG_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

const TWO_SQRT_PI: f64 = 3.544907701811032;

/// xi = e^{2 pi i/3}, the rotation of the three-fold symmetry.
fn xi() -> C64 {
    c64(-0.5, 0.75f64.sqrt())
}

fn xi2() -> C64 {
    c64(-0.5, -(0.75f64.sqrt()))
}

/// e^{i pi/12}, the diagonal phase of the entire matrix.
fn phase12() -> C64 {
    C64::from_polar(1.0, PI / 12.0)
}

/// Evaluate (Ai(z), Ai'(z)) anywhere in the plane.
///
/// Maclaurin series in double-double arithmetic for |z| <= 9; optimally
/// truncated asymptotic series beyond; for |arg z| > 2pi/3 the evaluation is
/// rotated through the three-fold relation so both rotated arguments lie in
/// the sector where the expansion is reliable.
pub fn airy_pair(z: C64) -> (C64, C64) {
    if z.norm() <= SPLIT_RADIUS {
        maclaurin(z)
    } else if z.arg().abs() <= 2.0 * PI / 3.0 {
        asymptotic(z)
    } else {
        let (a1, ap1) = asymptotic(xi() * z);
        let (a2, ap2) = asymptotic(xi2() * z);
        (
            -(xi() * a1 + xi2() * a2),
            -(xi2() * ap1 + xi() * ap2),
        )
    }
}

/// Power series about 0, accumulated in double-double. The partial sums grow
/// to ~e^{2|zeta|} before cancelling down to the recessive value, which costs
/// up to 16 digits at |z| = 9; double-double keeps 16 more.
fn maclaurin(z: C64) -> (C64, C64) {
    let zc = Ddc::from_c64(z);
    let z2 = zc.mul(zc);
    let z3 = z2.mul(zc);
    // Ai = AI0*f - NEG_AIP0*g with f = sum a_k z^{3k}, g = sum b_k z^{3k+1},
    // a_k = a_{k-1}/((3k-1)3k), b_k = b_{k-1}/(3k(3k+1)).
    // Term streams share exact integer divisors so the double-double chain
    // never multiplies by a pre-rounded ratio: sa_k = a_k z^{3k-1} and
    // ub_k = b_k z^{3k} carry the derivative terms 3k*sa_k and (3k+1)*ub_k.
    let mut f = Ddc::ONE;
    let mut g = zc;
    let mut fp = Ddc::ZERO;
    let mut gp = Ddc::ONE;
    let mut ta = Ddc::ONE; // a_k z^{3k}
    let mut tb = zc; // b_k z^{3k+1}
    let mut sa = Ddc::ZERO; // a_k z^{3k-1}
    let mut ub = Ddc::ONE; // b_k z^{3k}
    for k in 1..400 {
        let kf = k as f64;
        ta = ta.mul(z3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        tb = tb.mul(z3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        sa = if k == 1 {
            z2.div_f64(6.0)
        } else {
            sa.mul(z3).div_f64((3.0 * kf - 1.0) * (3.0 * kf))
        };
        ub = ub.mul(z3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        let tap = sa.mul_f64(3.0 * kf);
        let tbp = ub.mul_f64(3.0 * kf + 1.0);
        f = f.add(ta);
        g = g.add(tb);
        fp = fp.add(tap);
        gp = gp.add(tbp);
        let t = ta.mag().max(tb.mag()).max(tap.mag()).max(tbp.mag());
        let s = f.mag().max(g.mag()).max(1.0);
        if k > 4 && t < 1e-35 * s {
            break;
        }
    }
    (
        f.mul_dd(AI0).sub(g.mul_dd(NEG_AIP0)).to_c64(),
        fp.mul_dd(AI0).sub(gp.mul_dd(NEG_AIP0)).to_c64(),
    )
}

/// Asymptotic expansion with zeta = (2/3) z^{3/2}, truncated at the smallest
/// term; the omitted tail is O(e^{-2|zeta|}) relative, below f64 roundoff for
/// |z| > 9.
fn asymptotic(z: C64) -> (C64, C64) {
    let zeta = z.powf(1.5) * (2.0 / 3.0);
    let z4 = z.powf(0.25);
    let mut sa = c64(1.0, 0.0);
    let mut sb = c64(1.0, 0.0);
    let mut u = 1.0f64;
    let mut pw = c64(1.0, 0.0); // (-1)^k zeta^{-k}
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        pw = -pw / zeta;
        let ta = pw * u;
        if ta.norm() >= last {
            break;
        }
        last = ta.norm();
        sa += ta;
        sb += ta * ((6.0 * kf + 1.0) / (1.0 - 6.0 * kf));
    }
    let pref = (-zeta).exp() / TWO_SQRT_PI;
    (pref / z4 * sa, -(pref * z4) * sb)
}

/// The entire matrix: first column from Ai(z), second from Ai(xi^2 z), with
/// the e^{i pi/12} diagonal phase.
pub fn entire_e(z: C64) -> Mat2 {
    let ph = phase12();
    let (a0, ap0) = airy_pair(z);
    let (a2, ap2) = airy_pair(xi2() * z);
    Mat2::new(a0 * ph, a2 * ph.conj(), ap0 * ph, xi2() * ap2 * ph.conj())
}

/// det of the entire matrix, constant in z by the Wronskian: e^{i pi/6}/(2 pi).
pub fn det_e() -> C64 {
    c64(0.13783222385544802, 0.07957747154594767)
}

/// Residual of Ai(z) + xi Ai(xi z) + xi^2 Ai(xi^2 z) = 0 relative to the
/// largest of the three terms.
pub fn check_connection(z: C64) -> f64 {
    let t0 = airy_pair(z).0;
    let t1 = xi() * airy_pair(xi() * z).0;
    let t2 = xi2() * airy_pair(xi2() * z).0;
    let m = t0.norm().max(t1.norm()).max(t2.norm()).max(f64::MIN_POSITIVE);
    (t0 + t1 + t2).norm() / m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Omega1,
    Omega2,
    Omega3,
    Omega4,
}

/// Four rays from the origin at angles {0, +diag, pi, -diag} split the plane
/// into sectors Omega1..Omega4 counterclockwise from the positive real axis.
/// The diagonal angle is configurable because the sector solution is constant
/// per sector; any angle strictly between pi/2 and pi yields the same checks.
#[derive(Clone, Copy, Debug)]
pub struct AirySectorLayout {
    diag_angle: f64,
}

impl Default for AirySectorLayout {
    fn default() -> Self {
        AirySectorLayout {
            diag_angle: 3.0 * PI / 4.0,
        }
    }
}

impl AirySectorLayout {
    pub fn new(diag_angle: f64) -> Result<Self> {
        if !(diag_angle > FRAC_PI_2 && diag_angle < PI) {
            return Err(Error::Config(format!(
                "diagonal ray angle {diag_angle} outside (pi/2, pi)"
            )));
        }
        Ok(AirySectorLayout { diag_angle })
    }

    pub fn diag_angle(&self) -> f64 {
        self.diag_angle
    }

    /// Euclidean distance from z to the nearest of the four rays.
    pub fn ray_distance(&self, z: C64) -> f64 {
        let r = z.norm();
        let a = z.arg();
        let mut best = r;
        for t in [0.0, self.diag_angle, PI, -PI, -self.diag_angle] {
            let d = (a - t).abs();
            let dist = if d >= FRAC_PI_2 { r } else { r * d.sin() };
            best = best.min(dist);
        }
        best
    }

    /// Sector containing z; points within 1e-12 of a ray are ambiguous.
    pub fn classify(&self, z: C64) -> Result<Sector> {
        if self.ray_distance(z) < 1e-12 {
            return Err(Error::RegionTieBreak { tol: 1e-12 });
        }
        let a = z.arg();
        Ok(if a > 0.0 {
            if a < self.diag_angle {
                Sector::Omega1
            } else {
                Sector::Omega2
            }
        } else if a > -self.diag_angle {
            Sector::Omega4
        } else {
            Sector::Omega3
        })
    }

    /// Angle of a ray under this layout.
    pub fn ray_angle(&self, ray: Ray) -> f64 {
        match ray {
            Ray::PosReal => 0.0,
            Ray::UpperDiag => self.diag_angle,
            Ray::NegReal => PI,
            Ray::LowerDiag => -self.diag_angle,
        }
    }
}

/// (constant, rotation) per column of the sector solution; the column is
/// constant * (Ai(w z), w Ai'(w z)).
fn sector_columns(sector: Sector) -> ((C64, C64), (C64, C64)) {
    let ph = phase12();
    let phc = ph.conj();
    let one = c64(1.0, 0.0);
    match sector {
        Sector::Omega1 => ((ph, one), (phc, xi2())),
        Sector::Omega2 => ((-(xi() * ph), xi()), (phc, xi2())),
        Sector::Omega3 => ((I * phc, xi2()), (-(xi2() * phc), xi())),
        Sector::Omega4 => ((ph, one), (-(xi2() * phc), xi())),
    }
}

/// Sector formula evaluated without classification; on a ray it gives that
/// sector's boundary value.
///
/// Each column is a single rotated Airy evaluation. This is the numerically
/// stable form: multiplying entire_e by the sector factor cancels the
/// dominant solution exactly in algebra but catastrophically in floating
/// point once |z| is large.
pub fn upsilon_in(sector: Sector, z: C64) -> Mat2 {
    let ((k1, w1), (k2, w2)) = sector_columns(sector);
    let (a1, ap1) = airy_pair(w1 * z);
    let (a2, ap2) = airy_pair(w2 * z);
    Mat2::new(k1 * a1, k2 * a2, k1 * w1 * ap1, k2 * w2 * ap2)
}

/// The piecewise solution: classify, then evaluate the sector formula.
pub fn upsilon(layout: &AirySectorLayout, z: C64) -> Result<Mat2> {
    Ok(upsilon_in(layout.classify(z)?, z))
}

/// Second derivative of the sector solution, entrywise from Ai'' = z Ai,
/// never by finite differences.
pub fn upsilon_second(sector: Sector, z: C64) -> Mat2 {
    let ((k1, w1), (k2, w2)) = sector_columns(sector);
    let col = |k: C64, w: C64| {
        let wz = w * z;
        let (a, ap) = airy_pair(wz);
        (k * w * w * wz * a, k * w * w * w * (a + wz * ap))
    };
    let (t1, b1) = col(k1, w1);
    let (t2, b2) = col(k2, w2);
    Mat2::new(t1, t2, b1, b2)
}

/// Residual of the second-derivative identity: the sector solution satisfies
/// upsilon'' upsilon^{-1} = [[z, 0], [1, z]] in every sector, since constant
/// right factors cancel.
pub fn check_f(sector: Sector, z: C64) -> f64 {
    let u = upsilon_in(sector, z);
    let f = upsilon_second(sector, z) * u.inv();
    let target = Mat2::new(z, c64(0.0, 0.0), c64(1.0, 0.0), z);
    (f - target).norm_max()
}

/// Constant right factor relating the sector solution to the entire matrix:
/// upsilon = entire_e * factor.
pub fn sector_factor(sector: Sector) -> GMat2 {
    match sector {
        Sector::Omega1 => GMat2::IDENTITY,
        Sector::Omega2 => GMat2::new(gi(1, 0), gi(0, 0), gi(0, -1), gi(1, 0)),
        Sector::Omega3 => GMat2::new(gi(0, 0), gi(0, 1), gi(0, 1), gi(1, 0)),
        Sector::Omega4 => GMat2::new(gi(1, 0), gi(0, 1), gi(0, 0), gi(1, 0)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    PosReal,
    UpperDiag,
    NegReal,
    LowerDiag,
}

impl Ray {
    pub const ALL: [Ray; 4] = [Ray::PosReal, Ray::UpperDiag, Ray::NegReal, Ray::LowerDiag];

    /// Sectors on the (+, -) sides under the declared orientation: the
    /// positive axis points outward, the other three rays point inward.
    pub fn sides(self) -> (Sector, Sector) {
        match self {
            Ray::PosReal => (Sector::Omega1, Sector::Omega4),
            Ray::UpperDiag => (Sector::Omega1, Sector::Omega2),
            Ray::NegReal => (Sector::Omega2, Sector::Omega3),
            Ray::LowerDiag => (Sector::Omega3, Sector::Omega4),
        }
    }
}

/// Exact jump matrix on each ray: upsilon_+ = upsilon_- * jump.
pub fn airy_jump(ray: Ray) -> GMat2 {
    match ray {
        Ray::PosReal => GMat2::new(gi(1, 0), gi(0, -1), gi(0, 0), gi(1, 0)),
        Ray::UpperDiag => GMat2::new(gi(1, 0), gi(0, 0), gi(0, 1), gi(1, 0)),
        Ray::NegReal => GMat2::new(gi(0, 0), gi(0, -1), gi(0, -1), gi(0, 0)),
        Ray::LowerDiag => GMat2::new(gi(1, 0), gi(0, 0), gi(0, 1), gi(1, 0)),
    }
}

/// Walking once around the origin must return to the start sector: with the
/// declared orientations this reads jump(lower) jump(neg) jump(upper) =
/// jump(pos), checked exactly over the Gaussian integers.
pub fn check_cyclic_airy() -> bool {
    let v1 = airy_jump(Ray::PosReal);
    let v2 = airy_jump(Ray::UpperDiag);
    let v3 = airy_jump(Ray::NegReal);
    let v4 = airy_jump(Ray::LowerDiag);
    v1.inv() * v4 * v3 * v2 == GMat2::IDENTITY
}

/// Jump residual at distance k along the ray, from the two adjacent sector
/// formulas: columnwise || column(upsilon_+ - upsilon_- jump) || relative to
/// the same column of upsilon_+. Columns carry exponentially different
/// scales, so a single matrix norm would test only the dominant one.
pub fn check_jump(layout: &AirySectorLayout, ray: Ray, k: f64) -> f64 {
    let z = C64::from_polar(k, layout.ray_angle(ray));
    let (plus, minus) = ray.sides();
    let up = upsilon_in(plus, z);
    let um = upsilon_in(minus, z) * airy_jump(ray).to_mat2();
    let d = up - um;
    let mut worst: f64 = 0.0;
    for j in 0..2 {
        let dn = d.entry(0, j).norm().hypot(d.entry(1, j).norm());
        let un = up.entry(0, j).norm().hypot(up.entry(1, j).norm());
        worst = worst.max(dn / un);
    }
    worst
}

/// Far-field matching: sup over sampled arguments on |z| = r of
/// || M^{-1} z^{sigma3/4} upsilon(z) e^{zeta sigma3} - I || with
/// M = e^{i pi/12}/(2 sqrt pi) [[1, 1], [-1, 1]].
///
/// The first omitted correction of the expansion is ~ (5/72)/|zeta|, about
/// 1.0e-3 at r = 25; the residual reports that finite-r rate, it does not
/// vanish to roundoff.
pub fn normalization_residual(layout: &AirySectorLayout, r: f64, samples: usize) -> Result<f64> {
    let m_inv = Mat2::new(c64(1.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0))
        .scale(C64::from_polar(PI.sqrt(), -PI / 12.0));
    let mut worst: f64 = 0.0;
    for j in 0..samples {
        let a = -PI + PI * (2.0 * j as f64 + 1.0) / samples as f64;
        let z = C64::from_polar(r, a);
        let u = upsilon(layout, z)?;
        let zeta = z.powf(1.5) * (2.0 / 3.0);
        let z4 = z.powf(0.25);
        let d1 = Mat2::diag(z4, c64(1.0, 0.0) / z4);
        let d2 = Mat2::diag(zeta.exp(), (-zeta).exp());
        worst = worst.max((m_inv * d1 * u * d2 - Mat2::identity()).norm_max());
    }
    Ok(worst)
}

/// Max relative disagreement of (Ai, Ai') between the series route and the
/// asymptotic route on the matching annulus around the split radius.
pub fn stokes_overlap_report(samples: usize) -> f64 {
    let asym_any = |z: C64| {
        if z.arg().abs() <= 2.0 * PI / 3.0 {
            asymptotic(z)
        } else {
            let (a1, ap1) = asymptotic(xi() * z);
            let (a2, ap2) = asymptotic(xi2() * z);
            (-(xi() * a1 + xi2() * a2), -(xi2() * ap1 + xi() * ap2))
        }
    };
    let mut worst: f64 = 0.0;
    for &r in &[8.6, 9.0, 9.4] {
        for j in 0..samples {
            let a = -PI + PI * (2.0 * j as f64 + 1.0) / samples as f64;
            let z = C64::from_polar(r, a);
            let (s0, s1) = maclaurin(z);
            let (t0, t1) = asym_any(z);
            worst = worst
                .max((s0 - t0).norm() / t0.norm())
                .max((s1 - t1).norm() / t1.norm());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselRay {
    Upper,
    NegReal,
    Lower,
}

/// Ray angles of the hard-edge layout: 2pi/3, pi, -2pi/3, all oriented
/// toward the origin.
pub fn bessel_ray_angle(ray: BesselRay) -> f64 {
    match ray {
        BesselRay::Upper => 2.0 * PI / 3.0,
        BesselRay::NegReal => PI,
        BesselRay::Lower => -2.0 * PI / 3.0,
    }
}

/// Exact jump matrix on each hard-edge ray.
pub fn bessel_jump(ray: BesselRay) -> GMat2 {
    match ray {
        BesselRay::Upper | BesselRay::Lower => {
            GMat2::new(gi(1, 0), gi(0, 0), gi(1, 0), gi(1, 0))
        }
        BesselRay::NegReal => GMat2::new(gi(0, 0), gi(1, 0), gi(-1, 0), gi(0, 0)),
    }
}

/// Jump at a point on the hard-edge contour; the point must lie on one of
/// the three rays.
pub fn bessel_jump_at(zeta: C64) -> Result<Mat2> {
    if zeta.norm() == 0.0 {
        return Err(Error::Domain("hard-edge jump undefined at 0".into()));
    }
    let a = zeta.arg();
    for ray in [BesselRay::Upper, BesselRay::NegReal, BesselRay::Lower] {
        let t = bessel_ray_angle(ray);
        if (a - t).abs() < 1e-9 || (a - t).abs() > 2.0 * PI - 1e-9 {
            return Ok(bessel_jump(ray).to_mat2());
        }
    }
    Err(Error::Domain(format!(
        "point at angle {a} lies on no hard-edge ray"
    )))
}

/// Walk the three hard-edge jumps once around the origin. The exact product
/// is parabolic, not the identity: the local solution picks up a logarithm,
/// exactly as a log-singular weight requires.
pub fn ray_cycle_log_edge() -> GMat2 {
    bessel_jump(BesselRay::Upper) * bessel_jump(BesselRay::NegReal) * bessel_jump(BesselRay::Lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values computed with 50-digit arithmetic from the series and
    // the connection formula.
    fn reference_points() -> Vec<(C64, C64, C64)> {
        vec![
            (
                c64(2.0, 1.0),
                c64(0.0016977668572654568, -0.040718017053223981),
                c64(-0.015110279283226958, 0.062458954713600138),
            ),
            (
                c64(-5.0, 0.0),
                c64(0.35076100902411432, 0.0),
                c64(0.32719281855444314, 0.0),
            ),
            (
                c64(8.0, 0.0),
                c64(4.6922076160992316e-8, 0.0),
                c64(-1.3414392979067866e-7, 0.0),
            ),
            (
                c64(30.0, 0.0),
                c64(3.2082175915504956e-49, 0.0),
                c64(-1.759876581432726e-48, 0.0),
            ),
            (
                c64(12.0, 9.0),
                c64(3.1783814755698191e-11, -2.1136915288365103e-11),
                c64(-1.4288476677473987e-10, 3.932903638237414e-11),
            ),
            (
                c64(-11.0, 2.0),
                c64(-33.180397131142225, -113.64363056177521),
                c64(-368.81244235199746, 141.98343451017526),
            ),
            (
                c64(4.0, 0.0),
                c64(0.00095156385120480187, 0.0),
                c64(-0.0019586409502041789, 0.0),
            ),
            (
                c64(0.5, -0.3),
                c64(0.22634795458107735, 0.068001411096681169),
                c64(-0.23013706202248152, -0.03652315800475668),
            ),
            (
                c64(-5.5839598967784937, 7.6856614465620013),
                c64(-30595113.249249998, 22696616.429476676),
                c64(104163663.86460583, 51959722.475021264),
            ),
            (
                c64(-23.555558516716452, 8.3747037538976272),
                c64(-66177737020295915.0, 22375640156132339.0),
                c64(1.6579031244428711e17, 3.0705074142325394e17),
            ),
            (
                c64(-23.555558516716452, -8.3747037538976272),
                c64(-66177737020295915.0, -22375640156132339.0),
                c64(1.6579031244428711e17, -3.0705074142325394e17),
            ),
            (
                c64(0.0, 9.2),
                c64(46840.598694516009, -69554.237773540166),
                c64(-247741.05221794208, 50040.564233580284),
            ),
            (
                c64(-12.5, 21.650635094610966),
                c64(1.6982891441041419e35, -9.8050769451034544e34),
                c64(-8.4743768764077029e35, -4.8926837708083272e35),
            ),
        ]
    }

    #[test]
    fn airy_matches_reference_values() {
        for (z, ai, aip) in reference_points() {
            let (a, ap) = airy_pair(z);
            assert!(rel(a, ai) < 1e-10, "Ai({z}) off by {}", rel(a, ai));
            assert!(rel(ap, aip) < 1e-10, "Ai'({z}) off by {}", rel(ap, aip));
        }
    }

    #[test]
    fn airy_at_zero_and_gamma_closed_form() {
        let (a, ap) = airy_pair(c64(0.0, 0.0));
        assert!((a.re - AI0.to_f64()).abs() < 1e-16 && a.im == 0.0);
        assert!((ap.re + NEG_AIP0.to_f64()).abs() < 1e-16);
        // Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
        let g23 = crate::quad::ln_gamma(2.0 / 3.0).exp();
        let g13 = crate::quad::ln_gamma(1.0 / 3.0).exp();
        assert!((a.re - 3f64.powf(-2.0 / 3.0) / g23).abs() < 1e-15);
        assert!((ap.re + 3f64.powf(-1.0 / 3.0) / g13).abs() < 1e-15);
    }

    #[test]
    fn positive_axis_envelope_first_order() {
        // Ai(30) * 2 sqrt(pi) 30^{1/4} e^{zeta} = 1 - u1/zeta + O(zeta^{-2}),
        // u1/zeta = (5/72)/109.544 = 6.34e-4; the product sits below 1 by
        // exactly that much, not within 1e-6 of 1.
        let z = c64(30.0, 0.0);
        let zeta = 2.0 / 3.0 * 30f64.powf(1.5);
        let (a, _) = airy_pair(z);
        let s = a.re * TWO_SQRT_PI * 30f64.powf(0.25) * zeta.exp();
        let dev = 1.0 - s;
        assert!(dev > 6.2e-4 && dev < 6.4e-4, "envelope deviation {dev}");
    }

    #[test]
    fn connection_formula_residual() {
        assert_eq!(check_connection(c64(0.0, 0.0)), 0.0);
        assert!(check_connection(c64(2.0, 1.0)) < 1e-10);
        assert!(check_connection(c64(-5.0, 0.0)) < 1e-8);
        for j in 0..24 {
            let a = -PI + PI * (2.0 * j as f64 + 1.0) / 24.0;
            for r in [0.3, 2.0, 5.0, 8.0, 9.7] {
                let z = C64::from_polar(r, a);
                assert!(check_connection(z) < 1e-8, "residual at {z}");
            }
        }
    }

    #[test]
    fn entire_matrix_determinant_constant() {
        for z in [
            c64(0.0, 0.0),
            c64(3.0, 2.0),
            c64(-4.0, 1.0),
            c64(9.0, -3.0),
            c64(0.0, 0.5),
        ] {
            let d = entire_e(z).det();
            assert!(
                (d - det_e()).norm() / det_e().norm() < 1e-10,
                "det at {z}: {d}"
            );
        }
    }

    #[test]
    fn entire_matrix_is_analytic() {
        // Cauchy reconstruction of E(1) from the circle |w - 1| = 1.
        let m = 64;
        let mut acc = Mat2::zero();
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            let w = c64(1.0, 0.0) + C64::from_polar(1.0, t);
            // E(w)/(w-1) * dw/(2 pi i), dw = i e^{it} dt
            let f = entire_e(w).scale(C64::from_polar(1.0, t) / (w - c64(1.0, 0.0)));
            acc = acc + f;
        }
        acc = acc.scale(c64(1.0 / m as f64, 0.0));
        let direct = entire_e(c64(1.0, 0.0));
        assert!((acc - direct).norm_max() < 1e-8);
    }

    #[test]
    fn sector_solution_equals_entire_times_factor() {
        // Stable at small |z| where no exponential separation has set in.
        let pts = [
            (Sector::Omega1, c64(1.2, 0.9)),
            (Sector::Omega2, c64(-1.5, 0.8)),
            (Sector::Omega3, c64(-1.1, -1.3)),
            (Sector::Omega4, c64(0.7, -1.9)),
        ];
        for (s, z) in pts {
            let a = upsilon_in(s, z);
            let b = entire_e(z) * sector_factor(s).to_mat2();
            assert!(
                (a - b).norm_max() / b.norm_max() < 1e-12,
                "sector {s:?} mismatch"
            );
        }
    }

    #[test]
    fn jump_residuals_on_all_rays() {
        let layout = AirySectorLayout::default();
        for ray in Ray::ALL {
            for j in 0..20 {
                let k = 0.1 * 10f64.powf(2.0 * j as f64 / 19.0);
                let r = check_jump(&layout, ray, k);
                assert!(r < 1e-8, "{ray:?} at k = {k}: {r}");
            }
        }
        // absolute residual at k = 2 on the positive axis
        let z = c64(2.0, 0.0);
        let up = upsilon_in(Sector::Omega1, z);
        let um = upsilon_in(Sector::Omega4, z) * airy_jump(Ray::PosReal).to_mat2();
        assert!((up - um).norm_max() < 1e-9);
    }

    #[test]
    fn cyclic_product_is_identity_exactly() {
        assert!(check_cyclic_airy());
        for ray in Ray::ALL {
            assert_eq!(airy_jump(ray).det(), gi(1, 0));
        }
        // dropping any factor breaks the cycle
        let v1 = airy_jump(Ray::PosReal);
        let v2 = airy_jump(Ray::UpperDiag);
        let v3 = airy_jump(Ray::NegReal);
        let v4 = airy_jump(Ray::LowerDiag);
        assert_ne!(v1.inv() * v4 * v3, GMat2::IDENTITY);
        assert_ne!(v1.inv() * v4 * v2, GMat2::IDENTITY);
        assert_ne!(v1.inv() * v3 * v2, GMat2::IDENTITY);
        assert_ne!(v4 * v3 * v2, GMat2::IDENTITY);
    }

    #[test]
    fn second_derivative_identity() {
        assert!(check_f(Sector::Omega1, c64(1.0, 1.0)) < 1e-9);
        assert!(check_f(Sector::Omega2, c64(-2.0, 0.5)) < 1e-9);
        // top-left of the recovered coefficient matrix at z = 5
        let z = c64(5.0, 0.0);
        let u = upsilon_in(Sector::Omega1, z);
        let f = upsilon_second(Sector::Omega1, z) * u.inv();
        assert!((f.entry(0, 0) - z).norm() < 1e-9);
        assert!((f.entry(1, 0) - c64(1.0, 0.0)).norm() < 1e-9);
        assert!(f.entry(0, 1).norm() < 1e-9);
    }

    #[test]
    fn far_field_matching_rate() {
        let layout = AirySectorLayout::default();
        let r25 = normalization_residual(&layout, 25.0, 64).unwrap();
        assert!(r25 < 2e-3, "residual at r = 25: {r25}");
        assert!(r25 > 5e-4, "first-order term should dominate: {r25}");
        let r15 = normalization_residual(&layout, 15.0, 32).unwrap();
        let r50 = normalization_residual(&layout, 50.0, 32).unwrap();
        assert!(r50 < r25 && r25 < r15, "not decreasing: {r15} {r25} {r50}");
    }

    #[test]
    fn sector_classification_and_tie_breaks() {
        let layout = AirySectorLayout::default();
        assert_eq!(layout.classify(c64(1.0, 1.0)).unwrap(), Sector::Omega1);
        assert_eq!(layout.classify(c64(-2.0, 0.5)).unwrap(), Sector::Omega2);
        assert_eq!(layout.classify(c64(-2.0, -0.5)).unwrap(), Sector::Omega3);
        assert_eq!(layout.classify(c64(1.0, -1.0)).unwrap(), Sector::Omega4);
        assert!(matches!(
            layout.classify(c64(2.0, 1e-13)),
            Err(Error::RegionTieBreak { .. })
        ));
        assert!(layout.classify(c64(0.0, 0.0)).is_err());
        assert!(AirySectorLayout::new(1.2).is_err());
        assert!(AirySectorLayout::new(3.15).is_err());
        let narrow = AirySectorLayout::new(2.0).unwrap();
        assert_eq!(narrow.classify(c64(-1.0, 2.0)).unwrap(), Sector::Omega2);
        for ray in Ray::ALL {
            assert!(check_jump(&narrow, ray, 2.0) < 1e-10);
        }
    }

    #[test]
    fn hard_edge_jump_data() {
        for ray in [BesselRay::Upper, BesselRay::NegReal, BesselRay::Lower] {
            assert_eq!(bessel_jump(ray).det(), gi(1, 0));
        }
        let cycle = ray_cycle_log_edge();
        assert_eq!(
            cycle,
            GMat2::new(gi(1, 0), gi(1, 0), gi(0, 0), gi(1, 0)),
            "cycle must be the parabolic block"
        );
        assert_ne!(cycle, GMat2::IDENTITY);
        let m = bessel_jump_at(C64::from_polar(2.0, 2.0 * PI / 3.0)).unwrap();
        assert_eq!(m.entry(1, 0), c64(1.0, 0.0));
        let m = bessel_jump_at(c64(-3.0, 0.0)).unwrap();
        assert_eq!(m.entry(0, 1), c64(1.0, 0.0));
        assert!(bessel_jump_at(c64(1.0, 1.0)).is_err());
    }

    #[test]
    fn series_asymptotic_overlap() {
        assert!(stokes_overlap_report(24) < 1e-11);
    }

    proptest! {
        #[test]
        fn connection_residual_everywhere(re in -12.0f64..12.0, im in -12.0f64..12.0) {
            let z = c64(re, im);
            prop_assert!(check_connection(z) < 1e-8);
        }

        #[test]
        fn determinant_constant_in_sectors(re in -8.0f64..8.0, im in -8.0f64..8.0) {
            let layout = AirySectorLayout::default();
            let z = c64(re, im);
            if let Ok(s) = layout.classify(z) {
                let d = upsilon_in(s, z).det();
                prop_assert!((d - det_e()).norm() / det_e().norm() < 1e-10);
            }
        }

        #[test]
        fn classify_dispatch_consistent(re in -6.0f64..6.0, im in -6.0f64..6.0) {
            let layout = AirySectorLayout::default();
            let z = c64(re, im);
            if let Ok(u) = upsilon(&layout, z) {
                let s = layout.classify(z).unwrap();
                prop_assert!((u - upsilon_in(s, z)).norm_max() == 0.0);
            }
        }

        #[test]
        fn ode_identity_everywhere(re in -7.0f64..7.0, im in -7.0f64..7.0) {
            let layout = AirySectorLayout::default();
            let z = c64(re, im);
            if z.norm() > 0.2 {
                if let Ok(s) = layout.classify(z) {
                    prop_assert!(check_f(s, z) < 1e-8);
                }
            }
        }
    }
}
