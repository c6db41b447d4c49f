//! Least-squares fits on log-log data, shared by the endpoint probe and the
//! asymptotic error sweeps.

/// Straight-line least squares of y against x. Returns (slope, intercept,
/// Pearson correlation). Correlation is 0 when either variance vanishes.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    assert!(n >= 2.0, "fit needs at least two points");
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let corr = if sxx > 0.0 && syy > 0.0 {
        sxy / (sxx.sqrt() * syy.sqrt())
    } else {
        0.0
    };
    (slope, intercept, corr)
}

/// Fit log y = slope * log x + c. Pairs with non-positive y are rejected by
/// assertion; filter before calling.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| {
        assert!(y > 0.0, "loglog_fit requires positive ordinates");
        y.ln()
    }).collect();
    linear_fit(&lx, &ly)
}
