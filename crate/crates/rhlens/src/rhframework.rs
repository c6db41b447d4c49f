//! Contour machinery: oriented contours, discrete Cauchy operators with
//! boundary values on closed curves, the singular-integral-equation solver
//! for matrix jump problems, reconstruction of the solution off the contour,
//! Laurent far-field coefficients, and norm diagnostics.
//!
//! The Nystrom path handles closed smooth curves (circles, ellipses); open
//! arcs with endpoints are served by closed-form transforms elsewhere.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::{c64, C64, Mat2};

/// Smooth closed parametrized curve, t in [0, 2pi), counterclockwise.
#[derive(Clone, Copy, Debug)]
pub enum ClosedCurve {
    Circle { center: C64, radius: f64 },
    Ellipse { center: C64, a: f64, b: f64 },
}

impl ClosedCurve {
    pub fn point(&self, t: f64) -> C64 {
        match *self {
            ClosedCurve::Circle { center, radius } => center + C64::from_polar(radius, t),
            ClosedCurve::Ellipse { center, a, b } => {
                center + c64(a * t.cos(), b * t.sin())
            }
        }
    }

    pub fn deriv(&self, t: f64) -> C64 {
        match *self {
            ClosedCurve::Circle { radius, .. } => C64::from_polar(radius, t) * crate::mat2::I,
            ClosedCurve::Ellipse { a, b, .. } => c64(-a * t.sin(), b * t.cos()),
        }
    }

    pub fn deriv2(&self, t: f64) -> C64 {
        match *self {
            ClosedCurve::Circle { radius, .. } => -C64::from_polar(radius, t),
            ClosedCurve::Ellipse { a, b, .. } => c64(-a * t.cos(), -b * t.sin()),
        }
    }

    fn valid(&self) -> bool {
        match *self {
            ClosedCurve::Circle { radius, .. } => radius > 0.0,
            ClosedCurve::Ellipse { a, b, .. } => a > 0.0 && b > 0.0,
        }
    }
}

/// One oriented piece of a contour; `reversed` flips the orientation of the
/// underlying parametrization.
#[derive(Clone, Debug)]
pub struct ContourPiece {
    pub label: String,
    pub kind: PieceKind,
    pub reversed: bool,
}

#[derive(Clone, Copy, Debug)]
pub enum PieceKind {
    Closed(ClosedCurve),
    Segment { a: C64, b: C64 },
    Arc { center: C64, radius: f64, from: f64, to: f64 },
}

impl ContourPiece {
    /// Point at s in [0, 1] along the oriented piece.
    pub fn point(&self, s: f64) -> C64 {
        let s = if self.reversed { 1.0 - s } else { s };
        match self.kind {
            PieceKind::Closed(c) => c.point(2.0 * PI * s),
            PieceKind::Segment { a, b } => a + (b - a) * s,
            PieceKind::Arc { center, radius, from, to } => {
                center + C64::from_polar(radius, from + (to - from) * s)
            }
        }
    }

    fn speed_ok(&self) -> bool {
        match self.kind {
            PieceKind::Closed(c) => c.valid(),
            PieceKind::Segment { a, b } => (b - a).norm() > 0.0,
            PieceKind::Arc { radius, from, to, .. } => radius > 0.0 && from != to,
        }
    }
}

/// Labeled collection of oriented pieces. Pieces may share endpoints
/// (junctions) but must not cross elsewhere.
#[derive(Clone, Debug, Default)]
pub struct OrientedContour {
    pub pieces: Vec<ContourPiece>,
}

impl OrientedContour {
    pub fn new(pieces: Vec<ContourPiece>) -> Self {
        OrientedContour { pieces }
    }

    pub fn labels(&self) -> Vec<&str> {
        self.pieces.iter().map(|p| p.label.as_str()).collect()
    }

    /// Nonvanishing speeds everywhere; no crossings away from endpoints,
    /// checked on a sample grid.
    pub fn validate(&self) -> Result<()> {
        for p in &self.pieces {
            if !p.speed_ok() {
                return Err(Error::Config(format!(
                    "piece {} has a degenerate parametrization",
                    p.label
                )));
            }
        }
        let samples = 48;
        for (i, p) in self.pieces.iter().enumerate() {
            for q in self.pieces.iter().skip(i + 1) {
                for si in 1..samples {
                    let s = si as f64 / samples as f64;
                    for sj in 1..samples {
                        let t = sj as f64 / samples as f64;
                        let d = (p.point(s) - q.point(t)).norm();
                        let near_junction = s.min(1.0 - s).min(t.min(1.0 - t)) < 0.08;
                        if d < 1e-9 && !near_junction {
                            return Err(Error::Config(format!(
                                "pieces {} and {} cross away from junctions",
                                p.label, q.label
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Equispaced-parameter discretization of a closed smooth curve carrying
/// nodes, parameter speeds, and second derivatives for the boundary rules.
#[derive(Clone, Debug)]
pub struct NystromGrid {
    pub curve: ClosedCurve,
    m: usize,
    nodes: Vec<C64>,
    speeds: Vec<C64>,
    second: Vec<C64>,
}

impl NystromGrid {
    /// m must be even (the alternate-point rule pairs offsets), at least 8,
    /// and at most 2048 (dense direct solves).
    pub fn new(curve: ClosedCurve, m: usize) -> Result<Self> {
        if !curve.valid() {
            return Err(Error::Config("degenerate curve".into()));
        }
        if m < 8 || m > 2048 || m % 2 != 0 {
            return Err(Error::Config(format!(
                "resolution {m} outside the even range [8, 2048]"
            )));
        }
        let mut nodes = Vec::with_capacity(m);
        let mut speeds = Vec::with_capacity(m);
        let mut second = Vec::with_capacity(m);
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            nodes.push(curve.point(t));
            speeds.push(curve.deriv(t));
            second.push(curve.deriv2(t));
        }
        Ok(NystromGrid { curve, m, nodes, speeds, second })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> C64 {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn param(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.m as f64
    }

    /// Complex quadrature weight for contour integrals: gamma'(t_j) * h.
    pub fn complex_weight(&self, i: usize) -> C64 {
        self.speeds[i] * (2.0 * PI / self.m as f64)
    }

    /// Arc-length weight |gamma'(t_j)| * h for L^p norms.
    pub fn arc_weight(&self, i: usize) -> f64 {
        self.speeds[i].norm() * (2.0 * PI / self.m as f64)
    }

    fn min_distance(&self, z: C64) -> f64 {
        self.nodes
            .iter()
            .map(|k| (k - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn max_spacing(&self) -> f64 {
        self.speeds
            .iter()
            .map(|s| s.norm() * 2.0 * PI / self.m as f64)
            .fold(0.0, f64::max)
    }

    /// Sample a scalar function at the nodes.
    pub fn sample(&self, f: impl Fn(C64) -> C64) -> Vec<C64> {
        self.nodes.iter().map(|&k| f(k)).collect()
    }

    /// Sample a matrix function at the nodes.
    pub fn sample_mat(&self, f: impl Fn(C64) -> Mat2) -> Vec<Mat2> {
        self.nodes.iter().map(|&k| f(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn half(self) -> f64 {
        match self {
            Side::Plus => 0.5,
            Side::Minus => -0.5,
        }
    }
}

fn near_contour_check(grid: &NystromGrid, z: C64) -> Result<()> {
    if grid.min_distance(z) < 2.0 * grid.max_spacing() {
        return Err(Error::Quadrature(format!(
            "point {z} within two grid spacings of the contour; off-contour \
             accuracy is not guaranteed there"
        )));
    }
    Ok(())
}

/// (1/2pi i) integral of f(k)/(k - z) dk over the closed grid contour,
/// spectrally accurate for analytic f and z away from the contour.
pub fn cauchy_integral(grid: &NystromGrid, f: &[C64], z: C64) -> Result<C64> {
    assert_eq!(f.len(), grid.len());
    near_contour_check(grid, z)?;
    let mut acc = c64(0.0, 0.0);
    for j in 0..grid.len() {
        acc += f[j] * grid.complex_weight(j) / (grid.node(j) - z);
    }
    Ok(acc / c64(0.0, 2.0 * PI))
}

/// Componentwise Cauchy integral for matrix samples.
pub fn cauchy_integral_mat(grid: &NystromGrid, f: &[Mat2], z: C64) -> Result<Mat2> {
    assert_eq!(f.len(), grid.len());
    near_contour_check(grid, z)?;
    let mut acc = Mat2::zero();
    for j in 0..grid.len() {
        acc = acc + f[j].scale(grid.complex_weight(j) / (grid.node(j) - z));
    }
    Ok(acc.scale(c64(0.0, 2.0 * PI).inv()))
}

/// Kernel of the principal-value split: gamma'(t)/(gamma(t)-gamma(s)) minus
/// (1/2)cot((t-s)/2) extends smoothly to the diagonal with value
/// gamma''(s)/(2 gamma'(s)).
fn smooth_kernel(grid: &NystromGrid, s_param: f64, s_point: C64, s_idx: Option<usize>, j: usize) -> C64 {
    if let Some(i) = s_idx {
        if i == j {
            return grid.second[i] / (grid.speeds[i] * 2.0);
        }
    }
    let t = grid.param(j);
    let full = grid.speeds[j] / (grid.node(j) - s_point);
    let cot = 0.5 / ((t - s_param) / 2.0).tan();
    full - c64(cot, 0.0)
}

/// Row i of the discrete minus-side boundary operator: the alternate-point
/// cot rule (exact for trigonometric polynomials of degree < m/2 on
/// equispaced grids) plus the plain trapezoid on the smooth remainder.
fn boundary_row(grid: &NystromGrid, i: usize, side: Side) -> Vec<C64> {
    let m = grid.len();
    let h = 2.0 * PI / m as f64;
    let s_param = grid.param(i);
    let s_point = grid.node(i);
    let mut row = vec![c64(0.0, 0.0); m];
    for j in 0..m {
        // smooth part: (1/2pi i) * h * K(s, t_j)
        let k = smooth_kernel(grid, s_param, s_point, Some(i), j);
        row[j] += k * h / c64(0.0, 2.0 * PI);
        // cot part on odd offsets: (2/m) cot((t_j - t_i)/2) / (2i)
        if (j + m - i) % 2 == 1 {
            let cot = 1.0 / ((grid.param(j) - s_param) / 2.0).tan();
            row[j] += c64(cot * 2.0 / m as f64, 0.0) / c64(0.0, 2.0);
        }
    }
    row[i] += c64(side.half(), 0.0);
    row
}

/// Boundary value C_{+/-} f at node i of the closed grid contour.
pub fn cauchy_boundary(grid: &NystromGrid, f: &[C64], i: usize, side: Side) -> C64 {
    assert_eq!(f.len(), grid.len());
    let row = boundary_row(grid, i, side);
    row.iter().zip(f).map(|(r, v)| r * v).sum()
}

/// Componentwise boundary value for matrix samples.
pub fn cauchy_boundary_mat(grid: &NystromGrid, f: &[Mat2], i: usize, side: Side) -> Mat2 {
    assert_eq!(f.len(), grid.len());
    let row = boundary_row(grid, i, side);
    let mut acc = Mat2::zero();
    for (r, v) in row.iter().zip(f) {
        acc = acc + v.scale(*r);
    }
    acc
}

/// Trigonometric interpolation of equispaced samples at parameter t
/// (even-m cardinal function sin(m u/2) cot(u/2) / m).
pub fn trig_interp(grid: &NystromGrid, f: &[C64], t: f64) -> C64 {
    assert_eq!(f.len(), grid.len());
    let m = grid.len() as f64;
    let mut acc = c64(0.0, 0.0);
    for j in 0..grid.len() {
        let u = t - grid.param(j);
        if (u / 2.0).sin().abs() < 1e-14 {
            return f[j];
        }
        let card = (m * u / 2.0).sin() / (u / 2.0).tan() / m;
        acc += f[j] * card;
    }
    acc
}

/// Boundary value at the midpoint between nodes i and i+1. On the half-offset
/// point the plain trapezoid of the cot kernel is itself an alternate-point
/// rule, so the evaluation stays spectral off the node set.
pub fn cauchy_boundary_midpoint(grid: &NystromGrid, f: &[C64], i: usize, side: Side) -> C64 {
    assert_eq!(f.len(), grid.len());
    let m = grid.len();
    let h = 2.0 * PI / m as f64;
    let s_param = grid.param(i) + h / 2.0;
    let s_point = grid.curve.point(s_param);
    let mut acc = c64(0.0, 0.0);
    for j in 0..m {
        let k = smooth_kernel(grid, s_param, s_point, None, j);
        let cot = 1.0 / ((grid.param(j) - s_param) / 2.0).tan();
        acc += f[j]
            * (k * h / c64(0.0, 2.0 * PI) + c64(cot / (2.0 * m as f64), 0.0) / c64(0.0, 1.0));
    }
    acc + trig_interp(grid, f, s_param) * side.half()
}

/// Jump data on a contour: v(k) per point, w = v - I.
pub struct JumpData {
    v: Box<dyn Fn(C64) -> Mat2 + Send + Sync>,
}

impl JumpData {
    pub fn new(v: impl Fn(C64) -> Mat2 + Send + Sync + 'static) -> Self {
        JumpData { v: Box::new(v) }
    }

    pub fn v(&self, k: C64) -> Mat2 {
        (self.v)(k)
    }

    pub fn w(&self, k: C64) -> Mat2 {
        (self.v)(k) - Mat2::identity()
    }

    /// Max deviation of det v from 1 over the grid nodes.
    pub fn unimodularity_defect(&self, grid: &NystromGrid) -> f64 {
        grid.nodes()
            .iter()
            .map(|&k| (self.v(k).det() - c64(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// Solution of the singular integral equation (I - C_w) Phi = C_-(w) on the
/// grid, with the discrete-system residual and a condition-number estimate.
pub struct SieSolution {
    pub phi: Vec<Mat2>,
    pub condition: f64,
    pub residual: f64,
}

/// Nystrom solve. The unknown acts row-wise: both rows of Phi satisfy the
/// same 2m x 2m system with different right-hand sides, so one LU serves
/// both.
pub fn solve_sie(j: &JumpData, grid: &NystromGrid) -> Result<SieSolution> {
    let m = grid.len();
    let n = 2 * m;
    let wmats: Vec<Mat2> = grid.nodes().iter().map(|&k| j.w(k)).collect();
    let rows: Vec<Vec<C64>> = (0..m).map(|i| boundary_row(grid, i, Side::Minus)).collect();

    // A[(i,c),(j,a)] = delta - B_ij w(k_j)[a][c]
    let mut a = DMatrix::<C64>::zeros(n, n);
    for i in 0..m {
        for c in 0..2 {
            let r = 2 * i + c;
            a[(r, r)] += c64(1.0, 0.0);
            for jj in 0..m {
                for aa in 0..2 {
                    a[(r, 2 * jj + aa)] -= rows[i][jj] * wmats[jj].entry(aa, c);
                }
            }
        }
    }
    // rhs column per matrix row of Phi: b[(i,c)] = (C_- w)[r][c] at node i
    let mut b = DMatrix::<C64>::zeros(n, 2);
    for i in 0..m {
        for c in 0..2 {
            for jj in 0..m {
                for r in 0..2 {
                    b[(2 * i + c, r)] += rows[i][jj] * wmats[jj].entry(r, c);
                }
            }
        }
    }

    let a_norm = a
        .row_iter()
        .map(|row| row.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let lu = a.clone().lu();
    let x = lu.solve(&b).ok_or(Error::SingularOperator { cond: f64::INFINITY })?;

    // condition estimate: ||A||_inf times a lower bound of ||A^{-1}||_inf
    // from a few structured solves
    let mut inv_norm: f64 = 0.0;
    for trial in 0..3 {
        let mut e = DMatrix::<C64>::zeros(n, 1);
        for k in 0..n {
            let s = if (k + trial) % 2 == 0 { 1.0 } else { -1.0 };
            e[(k, 0)] = c64(s, 0.0);
        }
        if let Some(y) = lu.solve(&e) {
            let ny = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
            inv_norm = inv_norm.max(ny);
        }
    }
    let condition = a_norm * inv_norm;

    let phi: Vec<Mat2> = (0..m)
        .map(|i| {
            Mat2::new(
                x[(2 * i, 0)],
                x[(2 * i + 1, 0)],
                x[(2 * i, 1)],
                x[(2 * i + 1, 1)],
            )
        })
        .collect();

    // residual of the discrete system: Phi - C_-(Phi w) - C_-(w)
    let pw: Vec<Mat2> = (0..m).map(|i| (phi[i] + Mat2::identity()) * wmats[i]).collect();
    let mut residual: f64 = 0.0;
    for i in 0..m {
        let mut acc = Mat2::zero();
        for jj in 0..m {
            acc = acc + pw[jj].scale(rows[i][jj]);
        }
        residual = residual.max((phi[i] - acc).norm_max());
    }

    if condition > 1e12 {
        return Err(Error::SingularOperator { cond: condition });
    }
    Ok(SieSolution { phi, condition, residual })
}

/// R(z) = I + (1/2pi i) integral (Phi + I) w / (k - z) dk, analytic off the
/// contour, -> I at infinity.
pub fn reconstruct_r(grid: &NystromGrid, j: &JumpData, phi: &[Mat2], z: C64) -> Result<Mat2> {
    let f: Vec<Mat2> = (0..grid.len())
        .map(|i| (phi[i] + Mat2::identity()) * j.w(grid.node(i)))
        .collect();
    Ok(Mat2::identity() + cauchy_integral_mat(grid, &f, z)?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RoundtripReport {
    pub resolution: usize,
    pub residual_sie: f64,
    pub residual_phi_match: f64,
    pub residual_jump: f64,
    pub condition_number: f64,
}

/// Both directions of the solution/jump correspondence: the reconstructed
/// minus boundary value must reproduce Phi, reinserting it must satisfy
/// the equation, and the off-node jump R_+ = R_- v must hold at midpoints.
pub fn roundtrip_check(j: &JumpData, grid: &NystromGrid) -> Result<RoundtripReport> {
    let m = grid.len();
    let sol = solve_sie(j, grid)?;
    let pw: Vec<Mat2> = (0..m)
        .map(|i| (sol.phi[i] + Mat2::identity()) * j.w(grid.node(i)))
        .collect();

    // (i) R_- - I at the nodes matches Phi
    let mut phi_prime = Vec::with_capacity(m);
    let mut phi_match: f64 = 0.0;
    for i in 0..m {
        let p = cauchy_boundary_mat(grid, &pw, i, Side::Minus);
        phi_match = phi_match.max((p - sol.phi[i]).norm_max());
        phi_prime.push(p);
    }

    // (ii) reinsert Phi' = R_- - I into the equation
    let wmats: Vec<Mat2> = grid.nodes().iter().map(|&k| j.w(k)).collect();
    let pw2: Vec<Mat2> = (0..m).map(|i| phi_prime[i] * wmats[i]).collect();
    let mut sie_resid: f64 = 0.0;
    for i in 0..m {
        let lhs = phi_prime[i] - cauchy_boundary_mat(grid, &pw2, i, Side::Minus);
        let rhs = cauchy_boundary_mat(grid, &wmats, i, Side::Minus);
        sie_resid = sie_resid.max((lhs - rhs).norm_max());
    }

    // off-node jump residual at midpoints, componentwise boundary values
    let mut jump_resid: f64 = 0.0;
    let check_points = 16.min(m);
    for c in 0..check_points {
        let i = c * m / check_points;
        let t = grid.param(i) + PI / m as f64;
        let k_star = grid.curve.point(t);
        let mut rp = Mat2::identity();
        let mut rm = Mat2::identity();
        for (r, cidx) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
            let comp: Vec<C64> = pw.iter().map(|mat| mat.entry(r, cidx)).collect();
            let vp = cauchy_boundary_midpoint(grid, &comp, i, Side::Plus);
            let vm = cauchy_boundary_midpoint(grid, &comp, i, Side::Minus);
            rp = set_entry(rp, r, cidx, if r == cidx { c64(1.0, 0.0) + vp } else { vp });
            rm = set_entry(rm, r, cidx, if r == cidx { c64(1.0, 0.0) + vm } else { vm });
        }
        let resid = (rp - rm * j.v(k_star)).norm_max();
        jump_resid = jump_resid.max(resid);
    }

    Ok(RoundtripReport {
        resolution: m,
        residual_sie: sie_resid.max(sol.residual),
        residual_phi_match: phi_match,
        residual_jump: jump_resid,
        condition_number: sol.condition,
    })
}

fn set_entry(m: Mat2, r: usize, c: usize, v: C64) -> Mat2 {
    let mut e = [[m.entry(0, 0), m.entry(0, 1)], [m.entry(1, 0), m.entry(1, 1)]];
    e[r][c] = v;
    Mat2::new(e[0][0], e[0][1], e[1][0], e[1][1])
}

/// Far-field Laurent coefficients theta_i, i = 1..count, of the reconstructed
/// solution: theta_i = -(1/2pi i) integral k^{i-1} (Phi + I) w dk.
pub fn laurent_theta(grid: &NystromGrid, j: &JumpData, phi: &[Mat2], count: usize) -> Vec<Mat2> {
    let m = grid.len();
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let mut acc = Mat2::zero();
        for jj in 0..m {
            let k = grid.node(jj);
            let f = (phi[jj] + Mat2::identity()) * j.w(k);
            acc = acc + f.scale(k.powi(i as i32 - 1) * grid.complex_weight(jj));
        }
        out.push(acc.scale(-c64(0.0, 2.0 * PI).inv()));
    }
    out
}

/// L^p norm of sampled magnitudes with respect to arc length; p = infinity
/// gives the sup over nodes.
pub fn lp_norm(grid: &NystromGrid, samples: &[f64], p: f64) -> f64 {
    assert_eq!(samples.len(), grid.len());
    if p.is_infinite() {
        return samples.iter().fold(0.0, |a, &b| a.max(b));
    }
    assert!(p >= 1.0, "L^p norms require p >= 1");
    let mut acc = 0.0;
    for (i, &s) in samples.iter().enumerate() {
        acc += s.powf(p) * grid.arc_weight(i);
    }
    acc.powf(1.0 / p)
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    pub lhs_l1: f64,
    pub factor_norms: Vec<f64>,
    pub product: f64,
    pub satisfied: bool,
}

/// Product-domination check: the L^1 norm of a pointwise product against the
/// product of L^{p_i} norms of its factors, with 1% quadrature slack.
/// The exponents must be conjugate: sum of 1/p_i = 1.
pub fn holder_report(grid: &NystromGrid, factors: &[(&[f64], f64)]) -> HolderReport {
    let m = grid.len();
    let mut lhs_samples = vec![1.0f64; m];
    let mut inv_sum = 0.0;
    for (s, p) in factors {
        assert_eq!(s.len(), m);
        for i in 0..m {
            lhs_samples[i] *= s[i];
        }
        inv_sum += if p.is_infinite() { 0.0 } else { 1.0 / p };
    }
    assert!(
        (inv_sum - 1.0).abs() < 1e-12,
        "exponents must be conjugate, got sum 1/p = {inv_sum}"
    );
    let lhs = lp_norm(grid, &lhs_samples, 1.0);
    let norms: Vec<f64> = factors.iter().map(|(s, p)| lp_norm(grid, s, *p)).collect();
    let product: f64 = norms.iter().product();
    HolderReport {
        lhs_l1: lhs,
        factor_norms: norms,
        product,
        satisfied: lhs <= product * 1.01,
    }
}

/// L^p norm over an explicit sampled measure: `weights[i]` is the measure
/// element carried by sample i (quadrature weight times arc length).
pub fn lp_norm_weighted(samples: &[f64], weights: &[f64], p: f64) -> f64 {
    assert_eq!(samples.len(), weights.len());
    if p.is_infinite() {
        return samples.iter().fold(0.0, |a, &b| a.max(b));
    }
    assert!(p >= 1.0, "L^p norms require p >= 1");
    let mut acc = 0.0;
    for (&s, &w) in samples.iter().zip(weights) {
        acc += s.powf(p) * w;
    }
    acc.powf(1.0 / p)
}

/// Product-domination check on an explicit sampled measure. Unlike
/// [`holder_report`], the left-hand samples are passed in directly so they
/// may be smaller than the literal factor product when structure cancels.
pub fn holder_report_weighted(
    lhs: &[f64],
    weights: &[f64],
    factors: &[(&[f64], f64)],
) -> HolderReport {
    let mut inv_sum = 0.0;
    let mut norms = Vec::with_capacity(factors.len());
    for (s, p) in factors {
        assert_eq!(s.len(), lhs.len());
        inv_sum += if p.is_infinite() { 0.0 } else { 1.0 / p };
        norms.push(lp_norm_weighted(s, weights, *p));
    }
    assert!(
        (inv_sum - 1.0).abs() < 1e-12,
        "exponents must be conjugate, got sum 1/p = {inv_sum}"
    );
    let lhs_l1 = lp_norm_weighted(lhs, weights, 1.0);
    let product: f64 = norms.iter().product();
    HolderReport {
        lhs_l1,
        factor_norms: norms,
        product,
        satisfied: lhs_l1 <= product * 1.01,
    }
}
