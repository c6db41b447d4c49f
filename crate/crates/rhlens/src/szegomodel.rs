//! The outer model: conformal map to the exterior disk, multiplicative
//! splitting of the weight across the cut, and the resulting leading-order
//! predictions for the scaled monic polynomials q_n = 2^n * monic.
//!
//! The splitting function D is analytic and zero-free off [-1, 1], tends to
//! a finite positive limit at infinity, and its boundary values satisfy
//! D_plus * D_minus = rho on (-1, 1). Each built-in family gets an exact
//! evaluation: endpoint-power weights (including the inverse square root)
//! reduce to quarter-power factors of (z -+ 1)/phi, and the lens-entire
//! family exp(sqrt(1 - x^2)) sums its cosine-coefficient series in closed
//! form via atanh.


use crate::error::{Error, Result};
use crate::mat2::{c64, Mat2, C64};
use crate::weights::{WeightFamily, WeightSpec};

/// Exterior conformal map z + sqrt(z - 1) sqrt(z + 1), mapping the cut-plane
/// onto the outside of the unit disk. Principal branches of each square root
/// factor; on the cut approached from above it equals exp(i arccos x).
pub fn phi(z: C64) -> C64 {
    z + (z - 1.0).sqrt() * (z + 1.0).sqrt()
}

/// 1/phi, the small map onto the punctured unit disk.
pub fn phi_recip(z: C64) -> C64 {
    1.0 / phi(z)
}

/// The quarter-power ratio a(z) = ((z-1)/(z+1))^(1/4), principal branch,
/// tending to 1 at infinity.
fn a_quarter(z: C64) -> C64 {
    ((z - 1.0) / (z + 1.0)).powf(0.25)
}

/// The symmetric combinations A = (a + 1/a)/2 and B = (a - 1/a)/(2i) that
/// build the model matrix. A -> 1 and B -> 0 at infinity; both have only
/// quarter-power endpoint singularities.
pub fn ab(z: C64) -> (C64, C64) {
    let a = a_quarter(z);
    let ai = 1.0 / a;
    ((a + ai) * 0.5, (a - ai) / c64(0.0, 2.0))
}

/// Boundary values of (A, B) on the cut from above at x = cos(theta):
/// a_plus = (tan(theta/2))^(1/2) e^(i pi/4).
pub fn ab_plus(theta: f64) -> (C64, C64) {
    let t = (theta * 0.5).tan().sqrt();
    let e = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let a = t * e;
    let ai = 1.0 / a;
    ((a + ai) * 0.5, (a - ai) / c64(0.0, 2.0))
}

/// Distance below which prediction requests are refused: the outer and lens
/// expansions both degenerate at the endpoints, where the turning-point
/// model takes over.
pub const ENDPOINT_EXCLUSION: f64 = 0.05;

/// The outer model for one weight: carries the splitting limit D_inf and
/// evaluates the splitting, the model matrix, and polynomial predictions.
#[derive(Clone, Debug)]
pub struct OuterModel {
    weight: WeightSpec,
    /// Limit of the splitting function at infinity, exp(I/(2 pi)) with I the
    /// weight's equilibrium log-integral.
    pub d_inf: f64,
}

impl OuterModel {
    pub fn new(weight: &WeightSpec) -> Result<Self> {
        let integral = weight.szego_integral()?;
        Ok(OuterModel {
            weight: weight.clone(),
            d_inf: (integral / (2.0 * std::f64::consts::PI)).exp(),
        })
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    fn off_cut(z: C64) -> bool {
        z.im != 0.0 || z.re.abs() > 1.0
    }

    /// The splitting function D(z) for z off the cut [-1, 1].
    pub fn szego_d(&self, z: C64) -> Result<C64> {
        if !Self::off_cut(z) {
            return Err(Error::Domain(format!(
                "splitting function needs z off the cut; use the boundary form (z = {z})"
            )));
        }
        let root_scale = self.weight.scale.sqrt();
        let v = match self.weight.family {
            WeightFamily::Legendre => c64(1.0, 0.0),
            WeightFamily::ChebyshevFirst => endpoint_factor(z, 0.5, 0.5),
            WeightFamily::EndpointPower { sigma_plus, sigma_minus } => {
                endpoint_factor(z, sigma_plus, sigma_minus)
            }
            WeightFamily::ExpSqrt => {
                let u = phi_recip(z);
                (expsqrt_exponent(u) / std::f64::consts::PI).exp()
            }
        };
        Ok(v * root_scale)
    }

    /// Boundary value of D on the cut from above at x = cos(theta),
    /// theta in (0, pi). The lower boundary value is the conjugate.
    pub fn szego_d_plus(&self, theta: f64) -> Result<C64> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "boundary splitting needs theta in (0, pi), got {theta}"
            )));
        }
        let root_scale = self.weight.scale.sqrt();
        let v = match self.weight.family {
            WeightFamily::Legendre => c64(1.0, 0.0),
            WeightFamily::ChebyshevFirst => endpoint_factor_plus(theta, 0.5, 0.5),
            WeightFamily::EndpointPower { sigma_plus, sigma_minus } => {
                endpoint_factor_plus(theta, sigma_plus, sigma_minus)
            }
            WeightFamily::ExpSqrt => {
                // (1/u - u) atanh(u) at u = e^{-i theta} reduces to
                // (pi/2) sin t + i sin t log cot(t/2).
                let s = theta.sin();
                let logcot = (0.5 * theta).tan().recip().ln();
                C64::from_polar((0.5 * s).exp(), s * logcot / std::f64::consts::PI)
            }
        };
        Ok(v * root_scale)
    }

    /// Model matrix N(z): determinant one, solves the oscillatory cut jump
    /// [[0, rho], [-1/rho, 0]] exactly, tends to diag(D_inf, 1/D_inf)
    /// conjugated to the identity at infinity.
    pub fn n_matrix(&self, z: C64) -> Result<Mat2> {
        let d = self.szego_d(z)?;
        let (a_c, b_c) = ab(z);
        let di = c64(self.d_inf, 0.0);
        Ok(Mat2::new(
            di * a_c / d,
            di * b_c * d,
            -b_c / (di * d),
            a_c * d / di,
        ))
    }

    /// Boundary value of the model matrix from above at x = cos(theta).
    pub fn n_plus(&self, theta: f64) -> Result<Mat2> {
        let d = self.szego_d_plus(theta)?;
        let (a_c, b_c) = ab_plus(theta);
        let di = c64(self.d_inf, 0.0);
        Ok(Mat2::new(
            di * a_c / d,
            di * b_c * d,
            -b_c / (di * d),
            a_c * d / di,
        ))
    }

    fn check_endpoint_distance(&self, z: C64) -> Result<()> {
        let dp = (z - 1.0).norm();
        let dm = (z + 1.0).norm();
        if dp < ENDPOINT_EXCLUSION || dm < ENDPOINT_EXCLUSION {
            return Err(Error::RegionTieBreak {
                tol: ENDPOINT_EXCLUSION,
            });
        }
        Ok(())
    }

    /// Leading-order prediction of q_n(z) for z outside the closed lens:
    /// D_inf phi^n A / D.
    pub fn predict_outer(&self, n: u32, z: C64) -> Result<C64> {
        self.check_endpoint_distance(z)?;
        if self.weight.in_lens(z) {
            return Err(Error::Domain(format!(
                "outer prediction expects z outside the lens, got {z}"
            )));
        }
        let d = self.szego_d(z)?;
        let (a_c, _) = ab(z);
        Ok(self.d_inf * phi(z).powu(n) * a_c / d)
    }

    /// Two-term prediction of q_n(z) for z strictly inside the lens, off the
    /// cut: the recessive lens term enters with a sign split across the cut.
    pub fn predict_lens(&self, n: u32, z: C64) -> Result<C64> {
        self.check_endpoint_distance(z)?;
        if !self.weight.in_lens(z) || z.im == 0.0 {
            return Err(Error::Domain(format!(
                "lens prediction expects z inside the lens and off the axis, got {z}"
            )));
        }
        let d = self.szego_d(z)?;
        let (a_c, b_c) = ab(z);
        let rho = self.weight.eval_c(z)?;
        let p = phi(z);
        let sign = if z.im > 0.0 { 1.0 } else { -1.0 };
        Ok(self.d_inf * (p.powu(n) * a_c / d + sign * p.powu(n).inv() * b_c * d / rho))
    }

    /// Prediction of q_n(cos theta) on the cut. The two boundary terms are
    /// conjugates, so the value is 2 Re(D_inf e^{i n theta} A_plus / D_plus).
    pub fn predict_on_cut(&self, n: u32, theta: f64) -> Result<f64> {
        self.check_endpoint_distance(c64(theta.cos(), 0.0))?;
        let d = self.szego_d_plus(theta)?;
        let (a_c, _) = ab_plus(theta);
        let osc = C64::from_polar(1.0, n as f64 * theta);
        Ok(2.0 * (self.d_inf * osc * a_c / d).re)
    }

    /// Region-dispatched prediction: on-cut, lens, or outer by position.
    pub fn predict(&self, n: u32, z: C64) -> Result<C64> {
        if z.im == 0.0 && z.re.abs() < 1.0 {
            let theta = z.re.acos();
            return self.predict_on_cut(n, theta).map(|v| c64(v, 0.0));
        }
        if self.weight.in_lens(z) {
            self.predict_lens(n, z)
        } else {
            self.predict_outer(n, z)
        }
    }

    /// Multiplicative defect of the boundary relation D_plus D_minus = rho
    /// at x = cos(theta); zero up to roundoff for every family.
    pub fn splitting_defect(&self, theta: f64) -> Result<f64> {
        let dp = self.szego_d_plus(theta)?;
        let rho = self.weight.eval(theta.cos())?;
        Ok(((dp * dp.conj()).re / rho - 1.0).abs())
    }
}

/// (1/u - u) atanh(u), the summed cosine-coefficient series of the
/// lens-entire family. Near u = 0 the closed form amplifies the absolute
/// error of atanh by 1/|u|, so switch to the series
/// (1 - u^2) sum u^{2k}/(2k+1) there.
fn expsqrt_exponent(u: C64) -> C64 {
    if u.norm_sqr() < 0.09 {
        let u2 = u * u;
        let mut term = c64(1.0, 0.0);
        let mut sum = c64(1.0, 0.0);
        for k in 1..40 {
            term *= u2;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.norm_sqr() < 1e-64 {
                break;
            }
        }
        (c64(1.0, 0.0) - u2) * sum
    } else {
        (1.0 / u - u) * u.atanh()
    }
}

/// exp(-sp/2 log((z-1)/phi) - sm/2 log((z+1)/phi)), principal logs. Both
/// ratios avoid the negative real axis off the cut.
fn endpoint_factor(z: C64, sp: f64, sm: f64) -> C64 {
    let p = phi(z);
    let r1 = (z - 1.0) / p;
    let r2 = (z + 1.0) / p;
    (-0.5 * (sp * r1.ln() + sm * r2.ln())).exp()
}

/// Boundary value of the endpoint factor from above: the ratios become
/// (1 - x) e^{i(pi - theta)} and (1 + x) e^{-i theta}, with the real parts
/// written via half-angle forms to avoid cancellation.
fn endpoint_factor_plus(theta: f64, sp: f64, sm: f64) -> C64 {
    let half = 0.5 * theta;
    // log(1 - cos t) = log 2 + 2 log sin(t/2), log(1 + cos t) = log 2 + 2 log cos(t/2)
    let log1m = std::f64::consts::LN_2 + 2.0 * half.sin().ln();
    let log1p = std::f64::consts::LN_2 + 2.0 * half.cos().ln();
    let log_r1 = c64(log1m, std::f64::consts::PI - theta);
    let log_r2 = c64(log1p, -theta);
    (-0.5 * (sp * log_r1 + sm * log_r2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSpec;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn conformal_map_basics() {
        // phi(-2) = -2 - sqrt(3): the map preserves the sign convention on
        // the negative axis.
        let v = phi(c64(-2.0, 0.0));
        assert!(close(v, c64(-2.0 - 3.0_f64.sqrt(), 0.0), 1e-15));
        // |phi| > 1 off the cut and phi ~ 2z at infinity.
        for &z in &[c64(0.3, 0.4), c64(-1.2, 0.1), c64(5.0, -3.0)] {
            assert!(phi(z).norm() > 1.0);
        }
        let big = c64(1e8, 3e7);
        assert!(close(phi(big), big * 2.0, 1e-15));
        // Upper boundary value is exp(i theta).
        let theta: f64 = 1.1;
        let up = phi(c64(theta.cos(), 1e-300));
        assert!(close(up, C64::from_polar(1.0, theta), 1e-7));
    }

    #[test]
    fn splitting_matches_direct_integral_constants() {
        // Frozen values computed from the defining integral
        // exp(sqrt(z^2-1)/(2 pi) * int log rho(cos t)/(z - cos t) dt)
        // by high-precision quadrature.
        let cases: Vec<(WeightSpec, C64, C64)> = vec![
            (
                WeightSpec::chebyshev_first(),
                c64(1.5, 0.5),
                c64(1.4714831548477116, -0.0675574309044731),
            ),
            (
                WeightSpec::chebyshev_first(),
                c64(-0.3, 0.9),
                c64(1.3032704051401038, 0.0457662298638786),
            ),
            (
                WeightSpec::endpoint_power(0.25, 0.6).unwrap(),
                c64(1.5, 0.5),
                c64(1.2422584118313939, 0.0154708490261551),
            ),
            (
                WeightSpec::endpoint_power(0.25, 0.6).unwrap(),
                c64(-0.3, 0.9),
                c64(1.2704725557788506, 0.2208819919385750),
            ),
            (
                WeightSpec::exp_sqrt(),
                c64(1.5, 0.5),
                c64(1.3508672015233513, 0.0250361195192006),
            ),
            (
                WeightSpec::exp_sqrt(),
                c64(-0.3, 0.9),
                c64(1.4247095006798157, -0.0233762062453253),
            ),
        ];
        for (w, z, expect) in cases {
            let model = OuterModel::new(&w).unwrap();
            let got = model.szego_d(z).unwrap();
            assert!(
                close(got, expect, 1e-14),
                "family {:?} at {z}: got {got}, expected {expect}",
                w.family
            );
        }
    }

    #[test]
    fn splitting_infinity_limit_and_symmetry() {
        for w in [
            WeightSpec::legendre(),
            WeightSpec::chebyshev_first(),
            WeightSpec::endpoint_power(0.3, 0.1).unwrap(),
            WeightSpec::exp_sqrt(),
            WeightSpec::exp_sqrt().with_scale(2.5).unwrap(),
        ] {
            let model = OuterModel::new(&w).unwrap();
            // D approaches D_inf at rate 1/|z|.
            let far = model.szego_d(c64(8e9, 6e9)).unwrap();
            assert!(close(far, c64(model.d_inf, 0.0), 1e-9));
            // Schwarz symmetry off the cut.
            for &z in &[c64(0.4, 0.3), c64(-1.5, 0.2), c64(2.0, -1.0)] {
                let up = model.szego_d(z).unwrap();
                let dn = model.szego_d(z.conj()).unwrap();
                assert!(close(up, dn.conj(), 1e-14));
            }
        }
    }

    #[test]
    fn boundary_splitting_multiplies_to_weight() {
        for w in [
            WeightSpec::legendre(),
            WeightSpec::chebyshev_first(),
            WeightSpec::endpoint_power(0.25, 0.6).unwrap(),
            WeightSpec::exp_sqrt(),
            WeightSpec::chebyshev_first().with_scale(0.7).unwrap(),
        ] {
            let model = OuterModel::new(&w).unwrap();
            for &theta in &[0.3, 1.0, 1.8, 2.9] {
                assert!(model.splitting_defect(theta).unwrap() < 1e-13);
                // Boundary value agrees with the interior limit.
                let x = theta.cos();
                let lim = model.szego_d(c64(x, 1e-9)).unwrap();
                let bdry = model.szego_d_plus(theta).unwrap();
                assert!(close(lim, bdry, 1e-7));
            }
        }
    }

    #[test]
    fn model_matrix_unimodular_and_jump() {
        let w = WeightSpec::endpoint_power(0.25, 0.6).unwrap();
        let model = OuterModel::new(&w).unwrap();
        for &z in &[c64(1.5, 0.5), c64(0.2, -0.7), c64(-2.0, 0.1)] {
            let n = model.n_matrix(z).unwrap();
            assert!((n.det() - c64(1.0, 0.0)).norm() < 1e-13);
        }
        // Across the cut: N_plus = N_minus * [[0, rho], [-1/rho, 0]].
        for &theta in &[0.6_f64, 1.4, 2.4] {
            let x = theta.cos();
            let rho = w.eval(x).unwrap();
            let np = model.n_plus(theta).unwrap();
            let eps = 1e-9;
            let nm = model.n_matrix(c64(x, -eps)).unwrap();
            let jump = Mat2::new(c64(0.0, 0.0), c64(rho, 0.0), c64(-1.0 / rho, 0.0), c64(0.0, 0.0));
            let rhs = nm * jump;
            assert!(
                (np - rhs).norm_max() < 1e-6 * np.norm_max(),
                "jump defect too large at theta={theta}"
            );
        }
    }

    #[test]
    fn entry_closed_forms_hold_at_random_points() {
        // A = phi^{1/2} / (sqrt(2) (z^2-1)^{1/4}) and B = i phi^{-1/2} / (sqrt(2) (z^2-1)^{1/4}).
        // Both principal square roots below jump only across (-inf, -1) and the
        // jumps cancel in the products, so the formulas are branch-correct off [-1, 1].
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5a1d);
        let mut kept = 0;
        while kept < 100 {
            let z = c64(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let dist = if z.re.abs() <= 1.0 { z.im.abs() } else { ((z.re.abs() - 1.0).powi(2) + z.im * z.im).sqrt() };
            if dist < 0.05 || z.norm() > 3.0 {
                continue;
            }
            kept += 1;
            let (a, b) = ab(z);
            let root4 = ((z - 1.0).sqrt() * (z + 1.0).sqrt()).sqrt();
            let s2 = 2.0_f64.sqrt();
            let ph = phi(z).sqrt();
            assert!(close(a, ph / (root4 * s2), 1e-12), "A mismatch at {z}");
            assert!(close(b, crate::mat2::I / (ph * root4 * s2), 1e-12), "B mismatch at {z}");
        }
    }

    #[test]
    fn chebyshev_predictions_are_exact() {
        let model = OuterModel::new(&WeightSpec::chebyshev_first()).unwrap();
        // q_n = 2 T_n for n >= 1; on the cut that is 2 cos(n theta).
        for n in [1u32, 5, 12] {
            for &theta in &[0.5, 1.2, 2.5] {
                let pred = model.predict_on_cut(n, theta).unwrap();
                let exact = 2.0 * (n as f64 * theta).cos();
                assert!((pred - exact).abs() < 1e-13, "n={n} theta={theta}");
            }
        }
        // Two-term lens prediction is exact at complex points too.
        let z = c64(0.3, 0.2);
        let t_cheb = |n: u32, z: C64| -> C64 {
            // T_n via the exterior map: (phi^n + phi^{-n})/2.
            let p = phi(z);
            (p.powu(n) + p.powu(n).inv()) * 0.5
        };
        for n in [4u32, 9] {
            let pred = model.predict_lens(n, z).unwrap();
            let exact = t_cheb(n, z) * 2.0;
            assert!(close(pred, exact, 1e-13), "n={n}");
            let pred_dn = model.predict_lens(n, z.conj()).unwrap();
            assert!(close(pred_dn, exact.conj(), 1e-13));
        }
    }

    #[test]
    fn legendre_predictions_converge_at_first_order() {
        let model = OuterModel::new(&WeightSpec::legendre()).unwrap();
        // Frozen q_20 values: 4^20 (20!)^2/40! * P_20 at the test points.
        let q20_outer = 248148058.46918470;
        let q20_cut = -1.4495822529161450;
        let pred_outer = model.predict_outer(20, c64(1.5, 0.0)).unwrap();
        let rel_outer = (pred_outer.re - q20_outer).abs() / q20_outer.abs();
        assert!(pred_outer.im.abs() < 1e-9 * q20_outer);
        // Error constant is about 0.044/n at this point.
        assert!(rel_outer < 0.0035 && rel_outer > 0.0008, "rel={rel_outer}");
        let pred_cut = model.predict_on_cut(20, 1.1).unwrap();
        let rel_cut = (pred_cut - q20_cut).abs() / q20_cut.abs();
        assert!(rel_cut < 0.012 && rel_cut > 0.002, "rel={rel_cut}");
    }

    #[test]
    fn prediction_region_dispatch() {
        let model = OuterModel::new(&WeightSpec::legendre()).unwrap();
        // Near-endpoint requests are refused toward the turning-point model.
        assert!(matches!(
            model.predict(7, c64(1.001, 0.0)),
            Err(Error::RegionTieBreak { .. })
        ));
        assert!(model.predict_outer(7, c64(0.0, 0.3)).is_err()); // inside lens
        assert!(model.predict_lens(7, c64(3.0, 0.1)).is_err()); // outside lens
        // Dispatch picks the right branch.
        assert!(model.predict(7, c64(0.0, 0.3)).is_ok());
        assert!(model.predict(7, c64(3.0, 0.1)).is_ok());
        assert!(model.predict(7, c64(0.2, 0.0)).is_ok());
    }
}
