//! Weight families on [-1, 1] and the analyticity lens they live on.
//!
//! A weight is a positive function rho on (-1, 1) together with declared
//! endpoint decay rates and a lens-shaped neighbourhood of the open interval
//! on which rho continues analytically. Everything downstream (recurrence
//! generation, the outer model, the residual framework) consumes weights
//! through this module.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::loglog_fit;

pub const NU_INF: f64 = f64::INFINITY;

/// The built-in weight families.
///
/// Endpoint behaviour is tracked through the pair (sigma_plus, sigma_minus):
/// rho(x) ~ const * (1 - x)^(-sigma_plus) near +1 and (1 + x)^(-sigma_minus)
/// near -1, with sigma = 0 meaning a finite positive limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum WeightFamily {
    /// rho = 1.
    Legendre,
    /// rho = (1 - x^2)^(-1/2).
    ChebyshevFirst,
    /// rho = (1 - x)^(-sigma_plus) * (1 + x)^(-sigma_minus), each exponent in [0, 1).
    EndpointPower { sigma_plus: f64, sigma_minus: f64 },
    /// rho = exp(sqrt(1 - x^2)), entire in the lens coordinate.
    ExpSqrt,
}

/// A concrete weight: family, overall scale, declared growth indices, and the
/// half-height of its analyticity lens.
#[derive(Clone, Debug, Serialize)]
pub struct WeightSpec {
    pub family: WeightFamily,
    /// Constant multiplier applied to the family shape. Must be positive.
    pub scale: f64,
    /// Declared index nu_plus: |rho(z)| = O(dist^(-1/nu_plus)) at the endpoints.
    /// Infinity means rho stays bounded there.
    pub nu_plus: f64,
    /// Declared index nu_minus for 1/rho, same convention.
    pub nu_minus: f64,
    /// Apex height h of the lens: the region bounded by the two circular arcs
    /// through -1 and 1 with apexes at +-ih. Must lie in (0, 1].
    pub lens_half_height: f64,
}

fn check_index(nu: f64, label: &str) -> Result<()> {
    if nu > 1.0 || nu == NU_INF {
        Ok(())
    } else {
        Err(Error::Weight(format!(
            "growth index {label} must exceed 1 (got {nu})"
        )))
    }
}

impl WeightSpec {
    pub fn legendre() -> Self {
        WeightSpec {
            family: WeightFamily::Legendre,
            scale: 1.0,
            nu_plus: NU_INF,
            nu_minus: NU_INF,
            lens_half_height: 0.5,
        }
    }

    pub fn chebyshev_first() -> Self {
        WeightSpec {
            family: WeightFamily::ChebyshevFirst,
            scale: 1.0,
            nu_plus: 2.0, // 1/sigma with sigma = 1/2 at both ends
            nu_minus: NU_INF,
            lens_half_height: 0.5,
        }
    }

    /// Both exponents must lie in [0, 1) so that rho stays integrable and the
    /// logarithm of the weight stays integrable against the arcsine density.
    pub fn endpoint_power(sigma_plus: f64, sigma_minus: f64) -> Result<Self> {
        for (s, side) in [(sigma_plus, "+1"), (sigma_minus, "-1")] {
            if !(0.0..1.0).contains(&s) || !s.is_finite() {
                return Err(Error::Weight(format!(
                    "endpoint exponent at {side} must lie in [0, 1), got {s}"
                )));
            }
        }
        let smax = sigma_plus.max(sigma_minus);
        let nu_plus = if smax > 0.0 { 1.0 / smax } else { NU_INF };
        let spec = WeightSpec {
            family: WeightFamily::EndpointPower { sigma_plus, sigma_minus },
            scale: 1.0,
            nu_plus,
            nu_minus: NU_INF,
            lens_half_height: 0.5,
        };
        Ok(spec)
    }

    pub fn exp_sqrt() -> Self {
        WeightSpec {
            family: WeightFamily::ExpSqrt,
            scale: 1.0,
            nu_plus: NU_INF,
            nu_minus: NU_INF,
            lens_half_height: 0.5,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Weight(format!("scale must be positive, got {scale}")));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn with_lens_half_height(mut self, h: f64) -> Result<Self> {
        if !(0.0 < h && h <= 1.0) {
            return Err(Error::Weight(format!(
                "lens half-height must lie in (0, 1], got {h}"
            )));
        }
        self.lens_half_height = h;
        Ok(self)
    }

    /// Declared overrides for the growth indices (used when a caller knows a
    /// sharper bound than the family default).
    pub fn with_indices(mut self, nu_plus: f64, nu_minus: f64) -> Result<Self> {
        check_index(nu_plus, "nu_plus")?;
        check_index(nu_minus, "nu_minus")?;
        self.nu_plus = nu_plus;
        self.nu_minus = nu_minus;
        Ok(self)
    }

    /// nu_0 = min(nu_plus, nu_minus).
    pub fn nu0(&self) -> f64 {
        self.nu_plus.min(self.nu_minus)
    }

    /// Logarithmic endpoint singularity exponents (sigma_plus, sigma_minus):
    /// log rho(cos t) + sigma_plus log(1 - cos t) + sigma_minus log(1 + cos t)
    /// is smooth on [0, pi].
    pub fn log_singularity(&self) -> (f64, f64) {
        match self.family {
            WeightFamily::Legendre | WeightFamily::ExpSqrt => (0.0, 0.0),
            WeightFamily::ChebyshevFirst => (0.5, 0.5),
            WeightFamily::EndpointPower { sigma_plus, sigma_minus } => (sigma_plus, sigma_minus),
        }
    }

    /// The smooth remainder of log rho(cos t) after the endpoint-log
    /// subtraction, evaluated analytically per family (no cancellation).
    pub fn smooth_log_theta(&self, theta: f64) -> f64 {
        let base = self.scale.ln();
        match self.family {
            WeightFamily::Legendre | WeightFamily::ChebyshevFirst
            | WeightFamily::EndpointPower { .. } => base,
            WeightFamily::ExpSqrt => base + theta.sin(),
        }
    }

    /// rho(cos t) * sin t in closed form, for families whose transplanted
    /// weight is smooth in t. Families with endpoint power growth return
    /// None; integrate those with a Jacobi rule in x instead.
    pub fn theta_factor(&self, theta: f64) -> Option<f64> {
        match self.family {
            WeightFamily::Legendre => Some(self.scale * theta.sin()),
            WeightFamily::ChebyshevFirst => Some(self.scale),
            WeightFamily::EndpointPower { .. } => None,
            WeightFamily::ExpSqrt => Some(self.scale * theta.sin().exp() * theta.sin()),
        }
    }

    /// Weight value on the open interval. Endpoints are rejected because two
    /// of the families blow up there.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-1.0 < x && x < 1.0) {
            return Err(Error::Domain(format!(
                "weight evaluation needs x in (-1, 1), got {x}"
            )));
        }
        let v = match self.family {
            WeightFamily::Legendre => 1.0,
            WeightFamily::ChebyshevFirst => 1.0 / (1.0 - x * x).sqrt(),
            WeightFamily::EndpointPower { sigma_plus, sigma_minus } => {
                (-sigma_plus * (1.0 - x).ln() - sigma_minus * (1.0 + x).ln()).exp()
            }
            WeightFamily::ExpSqrt => (1.0 - x * x).sqrt().exp(),
        };
        Ok(self.scale * v)
    }

    /// Analytic continuation into the lens. Points outside the open lens are
    /// rejected; all branch choices are principal and agree with `eval` on
    /// the real axis.
    pub fn eval_c(&self, z: Complex64) -> Result<Complex64> {
        if !self.in_lens(z) {
            return Err(Error::Domain(format!(
                "weight continuation is only defined inside the lens, got {z}"
            )));
        }
        let one = Complex64::new(1.0, 0.0);
        let v = match self.family {
            WeightFamily::Legendre => one,
            WeightFamily::ChebyshevFirst => one / (one - z * z).sqrt(),
            WeightFamily::EndpointPower { sigma_plus, sigma_minus } => {
                (-(one - z).ln() * sigma_plus - (one + z).ln() * sigma_minus).exp()
            }
            WeightFamily::ExpSqrt => (one - z * z).sqrt().exp(),
        };
        Ok(v * self.scale)
    }

    /// Open lens membership: strictly inside both circles through -1 and 1
    /// with apexes at +-i h, endpoints excluded.
    pub fn in_lens(&self, z: Complex64) -> bool {
        in_lens_with_height(z, self.lens_half_height)
    }

    /// Integral of log rho against the equilibrium (arcsine) density, as the
    /// theta-integral of log rho(cos t) over [0, pi]. Endpoint logarithms are
    /// removed in closed form; the smooth remainder is integrated by
    /// Richardson-extrapolated trapezoid sums with doubling until converged.
    pub fn szego_integral(&self) -> Result<f64> {
        let (sp, sm) = self.log_singularity();
        let singular = (sp + sm) * std::f64::consts::PI * std::f64::consts::LN_2;

        let smooth = romberg_0_pi(|t| self.smooth_log_theta(t))?;
        Ok(singular + smooth)
    }

    /// Measure the actual growth of rho and 1/rho along a ray approaching
    /// each endpoint inside the lens. Returns per-side (rho_rate, inv_rate):
    /// exponents g with |rho| ~ dist^(-g) (clamped at zero; boundedness shows
    /// up as rate 0). Used to cross-check the declared indices.
    pub fn endpoint_growth_probe(&self) -> Result<EndpointProbe> {
        let plus = self.probe_side(1.0)?;
        let minus = self.probe_side(-1.0)?;
        Ok(EndpointProbe { plus, minus })
    }

    fn probe_side(&self, side: f64) -> Result<SideRates> {
        // Ray pointing into the lens, 15 degrees above the interval.
        let ang = if side > 0.0 {
            std::f64::consts::PI * (165.0 / 180.0)
        } else {
            std::f64::consts::PI * (15.0 / 180.0)
        };
        let dir = Complex64::new(ang.cos(), ang.sin());
        let mut r0 = 0.3;
        while r0 > 1e-8 && !self.in_lens(Complex64::new(side, 0.0) + dir * r0) {
            r0 *= 0.5;
        }
        if r0 <= 1e-8 {
            return Err(Error::Domain("probe ray never entered the lens".into()));
        }
        let radii: Vec<f64> = (0..7).map(|j| r0 * 0.5_f64.powi(j)).collect();
        let mags: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let z = Complex64::new(side, 0.0) + dir * r;
                self.eval_c(z).map(|v| v.norm())
            })
            .collect::<Result<_>>()?;
        let (slope, _, _) = loglog_fit(&radii, &mags);
        Ok(SideRates {
            rho_rate: (-slope).max(0.0),
            inv_rate: slope.max(0.0),
        })
    }

    /// Check measured endpoint rates against the declared indices, with a
    /// small additive slack for fit noise.
    pub fn validate_declared_indices(&self) -> Result<EndpointProbe> {
        let probe = self.endpoint_growth_probe()?;
        let slack = 0.05;
        let cap_rho = if self.nu_plus == NU_INF { 0.0 } else { 1.0 / self.nu_plus };
        let cap_inv = if self.nu_minus == NU_INF { 0.0 } else { 1.0 / self.nu_minus };
        for (side, rates) in [("+1", &probe.plus), ("-1", &probe.minus)] {
            if rates.rho_rate > cap_rho + slack {
                return Err(Error::Weight(format!(
                    "measured growth {:.4} of rho at {side} exceeds declared 1/nu_plus = {:.4}",
                    rates.rho_rate, cap_rho
                )));
            }
            if rates.inv_rate > cap_inv + slack {
                return Err(Error::Weight(format!(
                    "measured growth {:.4} of 1/rho at {side} exceeds declared 1/nu_minus = {:.4}",
                    rates.inv_rate, cap_inv
                )));
            }
        }
        Ok(probe)
    }

    /// Parse a weight record: a family name, optionally followed by a colon
    /// and comma-separated key=value pairs. Examples:
    ///
    /// - `legendre`
    /// - `chebyshev1:scale=2`
    /// - `endpoint-power:sigma_plus=0.1,sigma_minus=0.3,lens=0.4`
    /// - `exp-sqrt:nu_plus=inf,nu_minus=inf`
    pub fn parse(record: &str) -> Result<Self> {
        let record = record.trim();
        let (name, rest) = match record.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (record, None),
        };
        let mut sigma_plus = None;
        let mut sigma_minus = None;
        let mut scale = None;
        let mut lens = None;
        let mut nu_plus = None;
        let mut nu_minus = None;
        if let Some(rest) = rest {
            for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
                let (key, val) = pair.split_once('=').ok_or_else(|| {
                    Error::Config(format!("weight parameter `{pair}` is not key=value"))
                })?;
                let key = key.trim();
                let num = parse_index(val.trim())
                    .ok_or_else(|| Error::Config(format!("bad numeric value `{val}`")))?;
                match key {
                    "sigma_plus" => sigma_plus = Some(num),
                    "sigma_minus" => sigma_minus = Some(num),
                    "scale" => scale = Some(num),
                    "lens" => lens = Some(num),
                    "nu_plus" => nu_plus = Some(num),
                    "nu_minus" => nu_minus = Some(num),
                    other => {
                        return Err(Error::Config(format!("unknown weight parameter `{other}`")))
                    }
                }
            }
        }
        let mut spec = match name {
            "legendre" => WeightSpec::legendre(),
            "chebyshev1" | "chebyshev-first" => WeightSpec::chebyshev_first(),
            "endpoint-power" => WeightSpec::endpoint_power(
                sigma_plus.unwrap_or(0.0),
                sigma_minus.unwrap_or(0.0),
            )?,
            "exp-sqrt" => WeightSpec::exp_sqrt(),
            other => return Err(Error::Config(format!("unknown weight family `{other}`"))),
        };
        if !matches!(spec.family, WeightFamily::EndpointPower { .. })
            && (sigma_plus.is_some() || sigma_minus.is_some())
        {
            return Err(Error::Config(
                "sigma parameters only apply to endpoint-power".into(),
            ));
        }
        if let Some(s) = scale {
            spec = spec.with_scale(s)?;
        }
        if let Some(h) = lens {
            spec = spec.with_lens_half_height(h)?;
        }
        if nu_plus.is_some() || nu_minus.is_some() {
            let np = nu_plus.unwrap_or(spec.nu_plus);
            let nm = nu_minus.unwrap_or(spec.nu_minus);
            spec = spec.with_indices(np, nm)?;
        }
        Ok(spec)
    }

    /// Canonical record form, parseable by `parse`.
    pub fn record(&self) -> String {
        let mut s = match self.family {
            WeightFamily::Legendre => "legendre".to_string(),
            WeightFamily::ChebyshevFirst => "chebyshev1".to_string(),
            WeightFamily::EndpointPower { sigma_plus, sigma_minus } => {
                format!("endpoint-power:sigma_plus={sigma_plus},sigma_minus={sigma_minus}")
            }
            WeightFamily::ExpSqrt => "exp-sqrt".to_string(),
        };
        if self.scale != 1.0 {
            s.push(if s.contains(':') { ',' } else { ':' });
            s.push_str(&format!("scale={}", self.scale));
        }
        if self.lens_half_height != 0.5 {
            s.push(if s.contains(':') { ',' } else { ':' });
            s.push_str(&format!("lens={}", self.lens_half_height));
        }
        s
    }
}

fn parse_index(s: &str) -> Option<f64> {
    match s {
        "inf" | "Inf" | "INF" | "infinity" => Some(NU_INF),
        _ => s.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

/// Lens membership test for apex height h: inside both circles through the
/// endpoints with centres at -+ i(1 - h^2)/(2h).
pub fn in_lens_with_height(z: Complex64, h: f64) -> bool {
    debug_assert!(h > 0.0 && h <= 1.0);
    let a = (h * h - 1.0) / (2.0 * h); // centre of the upper arc's circle is i*a (a <= 0 for h < 1)
    let r2 = a * a + 1.0;
    let up = Complex64::new(z.re, z.im - a);
    let dn = Complex64::new(z.re, z.im + a);
    up.norm_sqr() < r2 && dn.norm_sqr() < r2 && (z.re.abs() < 1.0 || z.im != 0.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SideRates {
    /// Exponent g in |rho| ~ dist^(-g) as the endpoint is approached.
    pub rho_rate: f64,
    /// Same for 1/rho.
    pub inv_rate: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EndpointProbe {
    pub plus: SideRates,
    pub minus: SideRates,
}

/// Trapezoid sums over [0, pi] with two Richardson levels, doubling the grid
/// until the extrapolated value settles. The integrands here are analytic on
/// the closed interval, so the Euler-Maclaurin expansion is valid and the
/// extrapolation removes the h^2 and h^4 terms.
fn romberg_0_pi(f: impl Fn(f64) -> f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let trap = |m: usize| -> f64 {
        let h = pi / m as f64;
        let mut s = 0.5 * (f(0.0) + f(pi));
        for j in 1..m {
            s += f(j as f64 * h);
        }
        s * h
    };
    let mut m = 64;
    let mut t = [trap(m), trap(2 * m), trap(4 * m)];
    let mut last = f64::NAN;
    loop {
        let r01 = (4.0 * t[1] - t[0]) / 3.0;
        let r12 = (4.0 * t[2] - t[1]) / 3.0;
        let r = (16.0 * r12 - r01) / 15.0;
        if (r - last).abs() < 1e-12 * (1.0 + r.abs()) {
            return Ok(r);
        }
        if m >= 1 << 18 {
            return Err(Error::Quadrature(
                "trapezoid refinement for the weight integral did not converge".into(),
            ));
        }
        last = r;
        m *= 2;
        t = [t[1], t[2], trap(4 * m)];
    }
}
