//! Recurrence engine: generate the three-term recurrence of a weight by
//! discretized inner products on a family-adapted quadrature rule, certify
//! how many coefficients are trustworthy by grid doubling, and evaluate the
//! scaled polynomials q_n = 2^n * monic without overflow.
//!
//! Monic orthogonal polynomials satisfy
//!   pi_{k+1}(x) = (x - alpha_k) pi_k(x) - beta_k pi_{k-1}(x),
//! and the scaled family q_k = 2^k pi_k stays O(1) on the interval, so all
//! evaluation runs through q. Norms are kept in log form: the squared norm
//! of q_n is beta_0 * prod 4 beta_k, which tends to pi * D_inf^2.


use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::mat2::{c64, C64};
use crate::quad::{gauss_jacobi, gauss_legendre, gauss_legendre_theta, QuadRule};
use crate::szegomodel::phi;
use crate::weights::{WeightFamily, WeightSpec};

/// Degree threshold beyond which the discretized inner products accumulate
/// in double-double arithmetic.
const DD_THRESHOLD: usize = 60;

/// Relative agreement required between the m-point and 2m-point runs for a
/// coefficient to count as certified.
const CERTIFY_TOL: f64 = 1e-10;

/// Recurrence coefficients alpha_0..alpha_{n-1}, beta_0..beta_{n-1} (beta_0
/// is the total mass of the weight), with a certified trust horizon.
#[derive(Clone, Debug)]
pub struct Recurrence {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Coefficients with index < trusted agreed between two grid
    /// resolutions to within the certification tolerance.
    pub trusted: usize,
}

/// The discretization rule a family uses for its inner products. Endpoint
/// power growth is absorbed into a Jacobi rule in x so that the remaining
/// integrand is polynomial; lens-entire weights integrate in the angle
/// variable where they are smooth.
pub(crate) fn family_rule(w: &WeightSpec, m: usize) -> Result<(QuadRule, Vec<f64>)> {
    match w.family {
        WeightFamily::Legendre => {
            let rule = gauss_legendre(m);
            let vals = vec![w.scale; m];
            Ok((rule, vals))
        }
        WeightFamily::ChebyshevFirst => {
            let rule = gauss_jacobi(-0.5, -0.5, m)?;
            let vals = vec![w.scale; m];
            Ok((rule, vals))
        }
        WeightFamily::EndpointPower { sigma_plus, sigma_minus } => {
            let rule = gauss_jacobi(-sigma_plus, -sigma_minus, m)?;
            let vals = vec![w.scale; m];
            Ok((rule, vals))
        }
        WeightFamily::ExpSqrt => {
            let theta = gauss_legendre_theta(m);
            let nodes: Vec<f64> = theta.nodes.iter().map(|&t| t.cos()).collect();
            let vals: Vec<f64> = theta
                .nodes
                .iter()
                .map(|&t| w.theta_factor(t).unwrap())
                .collect();
            Ok((QuadRule { nodes, weights: theta.weights }, vals))
        }
    }
}

/// One Stieltjes pass on a fixed rule, producing coefficients with indices
/// 0..ncoeff. `vals` holds the non-polynomial part of the integrand at the
/// nodes (the weight itself for angle rules, the scale for rules that
/// absorb the weight).
fn stieltjes_pass(
    rule: &QuadRule,
    vals: &[f64],
    ncoeff: usize,
    use_dd: bool,
) -> (Vec<f64>, Vec<f64>) {
    let m = rule.nodes.len();
    // Effective quadrature weights w_i * vals_i.
    let wv: Vec<f64> = rule
        .weights
        .iter()
        .zip(vals)
        .map(|(&w, &v)| w * v)
        .collect();

    // Scaled polynomial values s_k = q_k(x_i); the recurrence in q-form is
    // q_{k+1} = 2 (x - alpha_k) q_k - 4 beta_k q_{k-1}.
    let mut s_prev = vec![0.0f64; m];
    let mut s_cur = vec![1.0f64; m];
    let mut alpha = Vec::with_capacity(ncoeff);
    let mut beta = Vec::with_capacity(ncoeff);

    let dot = |f: &dyn Fn(usize) -> f64| -> f64 {
        if use_dd {
            let mut acc = Dd::ZERO;
            for i in 0..m {
                acc = acc.add(Dd::prod(wv[i], f(i)));
            }
            acc.to_f64()
        } else {
            let mut acc = 0.0;
            for i in 0..m {
                acc += wv[i] * f(i);
            }
            acc
        }
    };

    // den_k = sum wv * s_k^2 = 4^k ||pi_k||^2; beta_0 is the mass.
    let mut den_prev = dot(&|i| s_cur[i] * s_cur[i]);
    beta.push(den_prev);
    for k in 0..ncoeff {
        let num = dot(&|i| rule.nodes[i] * s_cur[i] * s_cur[i]);
        let a_k = num / den_prev;
        alpha.push(a_k);
        if k + 1 == ncoeff {
            break;
        }
        let b4 = if k == 0 { 0.0 } else { 4.0 * beta[k] };
        for i in 0..m {
            let next = 2.0 * (rule.nodes[i] - a_k) * s_cur[i] - b4 * s_prev[i];
            s_prev[i] = s_cur[i];
            s_cur[i] = next;
        }
        let den = dot(&|i| s_cur[i] * s_cur[i]);
        // beta_{k+1} = ||pi_{k+1}||^2 / ||pi_k||^2 = den_{k+1} / (4 den_k).
        beta.push(den / (4.0 * den_prev));
        den_prev = den;
    }
    (alpha, beta)
}

impl Recurrence {
    /// Stieltjes generation on a single grid of `m` nodes, no certificate.
    /// Produces coefficient indices 0..=n.
    pub fn generate_with_nodes(w: &WeightSpec, n: usize, m: usize) -> Result<Recurrence> {
        if m < n + 8 {
            return Err(Error::Quadrature(format!(
                "need at least n + 8 = {} nodes for degree {n}, got {m}",
                n + 8
            )));
        }
        let (rule, vals) = family_rule(w, m)?;
        let use_dd = n > DD_THRESHOLD;
        let (mut alpha, beta) = stieltjes_pass(&rule, &vals, n + 1, use_dd);
        if is_symmetric(w) {
            for a in alpha.iter_mut() {
                if a.abs() > 1e-10 {
                    return Err(Error::Precision {
                        trusted: 0,
                        requested: n,
                    });
                }
                *a = 0.0;
            }
        }
        Ok(Recurrence { alpha, beta, trusted: 0 })
    }

    /// Generate with a doubling certificate: run at m and 2m nodes and mark
    /// as trusted the longest coefficient prefix on which both runs agree to
    /// 1e-10 (absolute in alpha, relative in beta).
    pub fn generate(w: &WeightSpec, n: usize) -> Result<Recurrence> {
        let m = (2 * n + 64).max(128);
        let coarse = Self::generate_with_nodes(w, n, m)?;
        let fine = Self::generate_with_nodes(w, n, 2 * m)?;
        let mut trusted = n + 1;
        'scan: for k in 0..=n {
            let da = (coarse.alpha[k] - fine.alpha[k]).abs();
            let db = (coarse.beta[k] - fine.beta[k]).abs() / fine.beta[k].abs();
            if da > CERTIFY_TOL || db > CERTIFY_TOL {
                trusted = k;
                break 'scan;
            }
        }
        Ok(Recurrence {
            alpha: fine.alpha,
            beta: fine.beta,
            trusted,
        })
    }

    /// Number of coefficient pairs available.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Fail unless degree `n` sits inside the certified prefix.
    pub fn require(&self, n: usize) -> Result<()> {
        if n >= self.trusted {
            Err(Error::Precision {
                trusted: self.trusted,
                requested: n,
            })
        } else {
            Ok(())
        }
    }

    /// log of ||q_n||^2 = log beta_0 + sum_{k=1}^{n} log(4 beta_k).
    pub fn log_norm_sq(&self, n: usize) -> f64 {
        assert!(n < self.beta.len());
        let mut s = self.beta[0].ln();
        for k in 1..=n {
            s += (4.0 * self.beta[k]).ln();
        }
        s
    }

    /// ||q_n||, the weighted L2 norm of the scaled polynomial.
    pub fn norm(&self, n: usize) -> f64 {
        (0.5 * self.log_norm_sq(n)).exp()
    }

    /// q_n(x) for x in [-1, 1] by the real three-term recurrence; values
    /// stay O(norm) there, so this never overflows.
    pub fn eval_on_cut(&self, n: usize, x: f64) -> f64 {
        assert!(n < self.alpha.len() && x.abs() <= 1.0);
        let mut prev = 0.0;
        let mut cur = 1.0;
        for k in 0..n {
            let next = 2.0 * (x - self.alpha[k]) * cur
                - 4.0 * if k == 0 { 0.0 } else { self.beta[k] } * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// s_n(z) = q_n(z) / phi(z)^n, the exterior-scaled value, O(1) off the
    /// cut for any degree. Returns the pair (s_{n-1}, s_n) feeding the
    /// residual framework's exact-solution columns.
    pub fn eval_scaled_pair(&self, n: usize, z: C64) -> (C64, C64) {
        assert!(n >= 1 && n < self.alpha.len());
        let p = phi(z);
        let pinv = 1.0 / p;
        let pinv2 = pinv * pinv;
        // s_{k+1} = 2 (z - alpha_k) s_k / phi - 4 beta_k s_{k-1} / phi^2,
        // each iterate carrying its own phi^{-k} scaling.
        let mut prev = c64(0.0, 0.0);
        let mut cur = c64(1.0, 0.0);
        for k in 0..n {
            let b = if k == 0 { 0.0 } else { 4.0 * self.beta[k] };
            let next = (z - self.alpha[k]) * cur * pinv * 2.0 - b * prev * pinv2;
            prev = cur;
            cur = next;
        }
        (prev, cur)
    }

    /// s_n(z) alone.
    pub fn eval_scaled(&self, n: usize, z: C64) -> C64 {
        if n == 0 {
            return c64(1.0, 0.0);
        }
        self.eval_scaled_pair(n, z).1
    }

    /// q_n(z) = s_n phi^n. Overflows for large n at points far from the
    /// interval; prefer the scaled form there.
    pub fn eval_q(&self, n: usize, z: C64) -> C64 {
        self.eval_scaled(n, z) * phi(z).powu(n as u32)
    }

    /// Serialize as CSV with header `k,alpha,beta`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,alpha,beta\n");
        for k in 0..self.alpha.len() {
            s.push_str(&format!("{},{},{}\n", k, self.alpha[k], self.beta[k]));
        }
        s
    }

    /// Parse the CSV form. The trust horizon is not stored in the file; the
    /// result is marked fully trusted and callers re-certify if needed.
    pub fn from_csv(text: &str) -> Result<Recurrence> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Config("empty recurrence file".into()))?;
        if header.trim() != "k,alpha,beta" {
            return Err(Error::Config(format!("bad recurrence header `{header}`")));
        }
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!("bad recurrence row `{line}`")));
            }
            let k: usize = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad index `{}`", parts[0])))?;
            if k != i {
                return Err(Error::Config(format!("row index {k} out of order at line {i}")));
            }
            let a: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad alpha `{}`", parts[1])))?;
            let b: f64 = parts[2]
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad beta `{}`", parts[2])))?;
            if b <= 0.0 {
                return Err(Error::Config(format!("beta must be positive, got {b}")));
            }
            alpha.push(a);
            beta.push(b);
        }
        if alpha.is_empty() {
            return Err(Error::Config("recurrence file has no rows".into()));
        }
        let trusted = alpha.len();
        Ok(Recurrence { alpha, beta, trusted })
    }
}

fn is_symmetric(w: &WeightSpec) -> bool {
    match w.family {
        WeightFamily::Legendre | WeightFamily::ChebyshevFirst | WeightFamily::ExpSqrt => true,
        WeightFamily::EndpointPower { sigma_plus, sigma_minus } => sigma_plus == sigma_minus,
    }
}
