//! Python bindings: weights, recurrences, the outer model, and the
//! desk-scale checks, with reports delivered as plain dictionaries.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rhlens::asymlab::{
    error_sweep, exponent_budget, lambda_exponent, parametrix_residual, ExtReal, SweepRegion,
};
use rhlens::orthocore::Recurrence as CoreRecurrence;
use rhlens::szegomodel::OuterModel as CoreModel;
use rhlens::weights::WeightSpec;
use rhlens::{c64, C64};

fn err(e: rhlens::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Weight on [-1, 1], identified by its parseable record string.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Weight {
    spec: WeightSpec,
}

#[pymethods]
impl Weight {
    #[staticmethod]
    fn legendre() -> Self {
        Weight { spec: WeightSpec::legendre() }
    }

    #[staticmethod]
    fn chebyshev_first() -> Self {
        Weight { spec: WeightSpec::chebyshev_first() }
    }

    #[staticmethod]
    fn endpoint_power(sigma_plus: f64, sigma_minus: f64) -> PyResult<Self> {
        Ok(Weight { spec: WeightSpec::endpoint_power(sigma_plus, sigma_minus).map_err(err)? })
    }

    #[staticmethod]
    fn exp_sqrt() -> Self {
        Weight { spec: WeightSpec::exp_sqrt() }
    }

    #[staticmethod]
    fn parse(record: &str) -> PyResult<Self> {
        Ok(Weight { spec: WeightSpec::parse(record).map_err(err)? })
    }

    /// Canonical record string, accepted back by `parse`.
    fn record(&self) -> String {
        self.spec.record()
    }

    /// Pointwise value on the open interval.
    fn eval(&self, x: f64) -> PyResult<f64> {
        self.spec.eval(x).map_err(err)
    }

    #[getter]
    fn nu_plus(&self) -> f64 {
        self.spec.nu_plus
    }

    #[getter]
    fn nu_minus(&self) -> f64 {
        self.spec.nu_minus
    }

    fn __repr__(&self) -> String {
        format!("Weight({:?})", self.spec.record())
    }
}

/// Certified three-term recurrence coefficients for a weight.
#[pyclass(frozen)]
struct Recurrence {
    rec: CoreRecurrence,
}

#[pymethods]
impl Recurrence {
    #[staticmethod]
    fn generate(weight: &Weight, n: usize) -> PyResult<Self> {
        Ok(Recurrence { rec: CoreRecurrence::generate(&weight.spec, n).map_err(err)? })
    }

    fn alpha(&self, k: usize) -> PyResult<f64> {
        self.rec
            .alpha
            .get(k)
            .copied()
            .ok_or_else(|| PyValueError::new_err(format!("alpha_{k} not generated")))
    }

    fn beta(&self, k: usize) -> PyResult<f64> {
        self.rec
            .beta
            .get(k)
            .copied()
            .ok_or_else(|| PyValueError::new_err(format!("beta_{k} not generated")))
    }

    fn __len__(&self) -> usize {
        self.rec.len()
    }

    /// Weighted L2 norm of the scaled degree-n polynomial.
    fn norm(&self, n: usize) -> f64 {
        self.rec.norm(n)
    }

    /// Scaled polynomial value on the interval.
    fn eval_on_cut(&self, n: usize, x: f64) -> f64 {
        self.rec.eval_on_cut(n, x)
    }

    fn to_csv(&self) -> String {
        self.rec.to_csv()
    }
}

/// Degree-independent model: splitting function, entry formulas, predictions.
#[pyclass(frozen)]
struct OuterModel {
    model: CoreModel,
}

#[pymethods]
impl OuterModel {
    #[new]
    fn new(weight: &Weight) -> PyResult<Self> {
        Ok(OuterModel { model: CoreModel::new(&weight.spec).map_err(err)? })
    }

    #[getter]
    fn d_inf(&self) -> f64 {
        self.model.d_inf
    }

    /// Predicted scaled polynomial value; the region is chosen from z.
    fn predict(&self, n: u32, z: C64) -> PyResult<C64> {
        self.model.predict(n, z).map_err(err)
    }

    /// Splitting function off the interval.
    fn szego_d(&self, z: C64) -> PyResult<C64> {
        self.model.szego_d(z).map_err(err)
    }

    /// | D_+ conj(D_+) - rho | at angle theta, relative to the weight.
    fn splitting_defect(&self, theta: f64) -> PyResult<f64> {
        self.model.splitting_defect(theta).map_err(err)
    }
}

/// Fit the decay exponent of the prediction error over a degree ladder.
#[pyfunction]
#[pyo3(signature = (weight, z, ns, region = "outer"))]
fn sweep<'py>(
    py: Python<'py>,
    weight: &Weight,
    z: C64,
    ns: Vec<usize>,
    region: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let region: SweepRegion = region.parse().map_err(err)?;
    if ns.is_empty() {
        return Err(PyValueError::new_err("degree list must be non-empty"));
    }
    let rec = CoreRecurrence::generate(&weight.spec, ns[ns.len() - 1] + 8).map_err(err)?;
    let model = CoreModel::new(&weight.spec).map_err(err)?;
    let rep = error_sweep(&rec, &model, z, &ns, region).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("weight", &rep.weight)?;
    d.set_item("region", &rep.region)?;
    d.set_item("ns", &rep.ns)?;
    d.set_item("errors", &rep.errors)?;
    d.set_item("lambda", rep.lambda)?;
    d.set_item("fitted_exponent", rep.fitted_exponent)?;
    d.set_item("correlation", rep.correlation)?;
    d.set_item("window_start_n", rep.window_start_n)?;
    d.set_item("at_floor", rep.at_floor)?;
    d.set_item("pass", rep.pass)?;
    Ok(d)
}

/// Residual of the oracle-built matrix quotient on the endpoint circles.
#[pyfunction]
#[pyo3(signature = (weight, ns, delta = 0.2, samples = 32))]
fn parametrix_check<'py>(
    py: Python<'py>,
    weight: &Weight,
    ns: Vec<usize>,
    delta: f64,
    samples: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if ns.is_empty() {
        return Err(PyValueError::new_err("degree list must be non-empty"));
    }
    let model = CoreModel::new(&weight.spec).map_err(err)?;
    // The backward-recurrence buffer is known only inside the check, so
    // deepen the recurrence on demand.
    let mut depth = ns[ns.len() - 1] + 300;
    let rep = loop {
        let rec = CoreRecurrence::generate(&weight.spec, depth).map_err(err)?;
        match parametrix_residual(&rec, &model, &ns, delta, samples) {
            Err(rhlens::Error::Precision { requested, .. }) if requested > depth => {
                depth = requested + 16;
            }
            other => break other.map_err(err)?,
        }
    };
    let d = PyDict::new(py);
    d.set_item("weight", &rep.weight)?;
    d.set_item("delta", rep.delta)?;
    d.set_item("samples", rep.samples)?;
    d.set_item("ns", &rep.ns)?;
    d.set_item("residuals", &rep.residuals)?;
    d.set_item("det_defect", rep.det_defect)?;
    d.set_item("lambda", rep.lambda)?;
    d.set_item("fitted_exponent", rep.fitted_exponent)?;
    d.set_item("correlation", rep.correlation)?;
    d.set_item("decreasing", rep.decreasing)?;
    d.set_item("pass", rep.pass)?;
    Ok(d)
}

/// Exact exponent budget for a pair of integrability indices given as
/// strings: `"10"`, `"20/3"`, `"2.5"`, or `"inf"`.
#[pyfunction]
fn budget<'py>(py: Python<'py>, nu_plus: &str, nu_minus: &str) -> PyResult<Bound<'py, PyDict>> {
    let np = ExtReal::parse(nu_plus).map_err(err)?;
    let nm = ExtReal::parse(nu_minus).map_err(err)?;
    let (lambda, admissible) = lambda_exponent(&np, &nm).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambda", ExtReal::Finite(lambda).to_f64())?;
    d.set_item("admissible", admissible)?;
    if admissible {
        let b = exponent_budget(np, nm).map_err(err)?;
        d.set_item("rows", b.rows())?;
        d.set_item("table", b.table())?;
        d.set_item("tau", b.tau.to_f64())?;
        d.set_item("p", b.p.to_f64())?;
        d.set_item("q", b.q.to_f64())?;
        d.set_item("vartheta", b.vartheta.to_f64())?;
        d.set_item("omega", b.omega.to_f64())?;
    }
    Ok(d)
}

/// Worst residuals of the sector-solution identity suite.
#[pyfunction]
#[pyo3(signature = (seed = 0xa17e))]
fn airy_suite<'py>(py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    use rhlens::airyparametrix::{
        check_connection, check_cyclic_airy, check_f, check_jump, det_e, upsilon_in,
        AirySectorLayout, Ray,
    };
    let layout = AirySectorLayout::default();
    let mut connection: f64 = 0.0;
    for r in [0.1, 0.5, 1.0, 2.0, 4.0, 7.0, 10.0] {
        for k in 0..16 {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 16.0;
            connection = connection.max(check_connection(c64(r * th.cos(), r * th.sin())));
        }
    }
    let mut jump: f64 = 0.0;
    for ray in Ray::ALL {
        for i in 1..=20 {
            jump = jump.max(check_jump(&layout, ray, 0.5 * i as f64));
        }
    }
    // Deterministic low-discrepancy points; the seed only rotates the set.
    let mut second_order: f64 = 0.0;
    let mut det_drift: f64 = 0.0;
    let golden = 0.618_033_988_749_894_9_f64;
    let mut u = (seed % 997) as f64 / 997.0;
    let mut kept = 0;
    while kept < 50 {
        u = (u + golden).fract();
        let v = (u + golden * 0.5).fract();
        let z = c64(8.0 * u - 4.0, 8.0 * v - 4.0);
        if let Ok(sector) = layout.classify(z) {
            second_order = second_order.max(check_f(sector, z));
            let det = upsilon_in(sector, z).det();
            det_drift = det_drift.max((det - det_e()).norm() / det_e().norm());
            kept += 1;
        }
    }
    let d = PyDict::new(py);
    d.set_item("cyclic_exact", check_cyclic_airy())?;
    d.set_item("connection", connection)?;
    d.set_item("jump", jump)?;
    d.set_item("second_order", second_order)?;
    d.set_item("det_drift", det_drift)?;
    Ok(d)
}

/// Roundtrip the singular integral equation for the unimodular
/// scalar-exponential circle jump at the given resolution.
#[pyfunction]
#[pyo3(signature = (nodes = 512))]
fn sie_roundtrip<'py>(py: Python<'py>, nodes: usize) -> PyResult<Bound<'py, PyDict>> {
    use rhlens::mat2::Mat2;
    use rhlens::rhframework::{roundtrip_check, ClosedCurve, JumpData, NystromGrid};
    let grid = NystromGrid::new(
        ClosedCurve::Circle { center: c64(0.0, 0.0), radius: 1.0 },
        nodes,
    )
    .map_err(err)?;
    let g = |k: C64| 0.3 * (k + 1.0 / k);
    let j = JumpData::new(move |k| {
        Mat2::new(g(k).exp(), c64(0.0, 0.0), c64(0.0, 0.0), (-g(k)).exp())
    });
    let rep = roundtrip_check(&j, &grid).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("resolution", rep.resolution)?;
    d.set_item("residual_sie", rep.residual_sie)?;
    d.set_item("residual_phi_match", rep.residual_phi_match)?;
    d.set_item("residual_jump", rep.residual_jump)?;
    d.set_item("condition_number", rep.condition_number)?;
    Ok(d)
}

#[pymodule]
pub fn rhlens_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Weight>()?;
    m.add_class::<Recurrence>()?;
    m.add_class::<OuterModel>()?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(parametrix_check, m)?)?;
    m.add_function(wrap_pyfunction!(budget, m)?)?;
    m.add_function(wrap_pyfunction!(airy_suite, m)?)?;
    m.add_function(wrap_pyfunction!(sie_roundtrip, m)?)?;
    Ok(())
}
