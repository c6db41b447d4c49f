//! Batch experiment driver: each subcommand runs one desk-scale check,
//! writes `report.json` and `data.csv` into the output directory, prints a
//! one-line verdict, and exits 0 on pass, 1 on a numerical failure, 2 on a
//! configuration error. Identical configurations produce byte-identical
//! CSV files.

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rhlens::airyparametrix::{
    check_connection, check_cyclic_airy, check_f, check_jump, det_e, upsilon_in, AirySectorLayout,
    Ray,
};
use rhlens::asymlab::{
    error_sweep, exponent_budget, lambda_exponent, parametrix_residual, ExtReal, SweepRegion,
};
use rhlens::mat2::{c64, Mat2};
use rhlens::orthocore::Recurrence;
use rhlens::rhframework::{roundtrip_check, ClosedCurve, JumpData, NystromGrid};
use rhlens::szegomodel::OuterModel;
use rhlens::weights::WeightSpec;
use rhlens::Error;

#[derive(Parser)]
#[command(name = "rhlens", version, about = "Desk-scale checks for orthogonal-polynomial asymptotics")]
struct Cli {
    /// JSON file with default parameters; explicit flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory receiving report.json and data.csv.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the degree-n polynomial norm with its limit sqrt(pi) D_inf.
    SzegoCheck {
        /// Weight record, e.g. `legendre` or `endpoint-power:sigma_plus=0.1,sigma_minus=0`.
        #[arg(long)]
        weight: Option<String>,
        /// Degree at which the norm is compared.
        #[arg(long)]
        n: Option<usize>,
        /// Allowed relative deviation from the limit.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Fit the decay exponent of the prediction error over a ladder of degrees.
    AsymSweep {
        #[arg(long)]
        weight: Option<String>,
        /// Evaluation point, real part.
        #[arg(long)]
        z_re: Option<f64>,
        /// Evaluation point, imaginary part.
        #[arg(long)]
        z_im: Option<f64>,
        /// Comparison region: outer, lens, or cut.
        #[arg(long)]
        region: Option<String>,
        /// Comma-separated strictly increasing degrees.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<usize>>,
    },
    /// Residual of the oracle-built matrix quotient on the endpoint circles.
    ParametrixCheck {
        #[arg(long)]
        weight: Option<String>,
        /// Circle radius around the endpoints, in [0.1, 0.3].
        #[arg(long)]
        delta: Option<f64>,
        /// Equispaced half-offset samples per circle.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<usize>>,
    },
    /// Run the sector-solution identity suite.
    AiryCheck {
        /// Seed for the random second-order identity points.
        #[arg(long)]
        seed: Option<u64>,
        /// Residual cap for connection, jump, and second-order checks.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Roundtrip the singular integral equation on the unit circle.
    SieRoundtrip {
        /// Nodes at the finest resolution; the ladder halves down to 32.
        #[arg(long)]
        nodes: Option<usize>,
        /// Residual cap at the finest resolution.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Exact exponent table for a pair of integrability indices.
    Budget {
        /// Index at +1: a positive rational such as `10`, `20/3`, `2.5`, or `inf`.
        #[arg(long)]
        nu_plus: Option<String>,
        /// Index at -1, same formats.
        #[arg(long)]
        nu_minus: Option<String>,
    },
}

/// File-supplied defaults; every field is optional and any explicit flag wins.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    weight: Option<String>,
    n: Option<usize>,
    ns: Option<Vec<usize>>,
    tol: Option<f64>,
    z_re: Option<f64>,
    z_im: Option<f64>,
    region: Option<String>,
    delta: Option<f64>,
    samples: Option<usize>,
    nodes: Option<usize>,
    seed: Option<u64>,
    nu_plus: Option<String>,
    nu_minus: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => match load_config(path) {
            Ok(f) => f,
            Err(msg) => {
                eprintln!("config error: {msg}");
                return ExitCode::from(2);
            }
        },
        None => FileConfig::default(),
    };
    match run(&cli, &file) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("{err}");
            match err {
                Error::Config(_) | Error::Weight(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn run(cli: &Cli, file: &FileConfig) -> rhlens::Result<bool> {
    match &cli.command {
        Command::SzegoCheck { weight, n, tol } => {
            let weight = resolve(weight, &file.weight, "legendre".to_string());
            let n = resolve(n, &file.n, 100);
            let tol = resolve(tol, &file.tol, 0.01);
            szego_check(cli, &weight, n, tol)
        }
        Command::AsymSweep { weight, z_re, z_im, region, ns } => {
            let weight = resolve(weight, &file.weight, "legendre".to_string());
            let z = c64(
                resolve(z_re, &file.z_re, 2.0),
                resolve(z_im, &file.z_im, 0.0),
            );
            let region = resolve(region, &file.region, "outer".to_string());
            let ns = resolve(ns, &file.ns, vec![10, 14, 20, 28, 40, 57, 80, 113, 160]);
            asym_sweep(cli, &weight, z, &region, &ns)
        }
        Command::ParametrixCheck { weight, delta, samples, ns } => {
            let weight = resolve(weight, &file.weight, "legendre".to_string());
            let delta = resolve(delta, &file.delta, 0.2);
            let samples = resolve(samples, &file.samples, 32);
            let ns = resolve(ns, &file.ns, vec![10, 14, 20, 28, 40, 57, 80]);
            parametrix_check(cli, &weight, delta, samples, &ns)
        }
        Command::AiryCheck { seed, tol } => {
            let seed = resolve(seed, &file.seed, 0xa17e);
            let tol = resolve(tol, &file.tol, 1e-8);
            airy_check(cli, seed, tol)
        }
        Command::SieRoundtrip { nodes, tol } => {
            let nodes = resolve(nodes, &file.nodes, 512);
            let tol = resolve(tol, &file.tol, 1e-8);
            sie_roundtrip(cli, nodes, tol)
        }
        Command::Budget { nu_plus, nu_minus } => {
            let nu_plus = resolve(nu_plus, &file.nu_plus, "inf".to_string());
            let nu_minus = resolve(nu_minus, &file.nu_minus, "inf".to_string());
            budget(cli, &nu_plus, &nu_minus)
        }
    }
}

/// Flag beats config file beats built-in default; the resolved value is what
/// lands in the emitted report.
fn resolve<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}

fn write_artifacts(
    cli: &Cli,
    command: &str,
    config: Value,
    metrics: Value,
    pass: bool,
    csv: &str,
) -> rhlens::Result<()> {
    let report = json!({
        "command": command,
        "config": config,
        "metrics": metrics,
        "pass": pass,
    });
    std::fs::create_dir_all(&cli.out_dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", cli.out_dir.display())))?;
    let pretty = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(cli.out_dir.join("report.json"), pretty + "\n")
        .map_err(|e| Error::Config(format!("cannot write report.json: {e}")))?;
    std::fs::write(cli.out_dir.join("data.csv"), csv)
        .map_err(|e| Error::Config(format!("cannot write data.csv: {e}")))?;
    Ok(())
}

fn check_ns(ns: &[usize]) -> rhlens::Result<()> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "degree list must be non-empty and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn szego_check(cli: &Cli, weight: &str, n: usize, tol: f64) -> rhlens::Result<bool> {
    let w = WeightSpec::parse(weight)?;
    if n == 0 {
        return Err(Error::Config("degree must be positive".into()));
    }
    let rec = Recurrence::generate(&w, n + 8)?;
    let model = OuterModel::new(&w)?;
    let limit = std::f64::consts::PI.sqrt() * model.d_inf;
    let norm_n = rec.norm(n);
    let rel_err = (norm_n / limit - 1.0).abs();
    let pass = rel_err <= tol;

    let mut csv = String::from("n,norm,limit,rel_err\n");
    for k in 1..=n {
        let nk = rec.norm(k);
        csv.push_str(&format!("{k},{nk},{limit},{}\n", (nk / limit - 1.0).abs()));
    }
    write_artifacts(
        cli,
        "szego-check",
        json!({"weight": weight, "n": n, "tol": tol}),
        json!({"norm": norm_n, "limit": limit, "rel_err": rel_err}),
        pass,
        &csv,
    )?;
    println!(
        "szego-check weight={weight} n={n} rel_err={rel_err:.3e} tol={tol:.1e} {}",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

fn asym_sweep(cli: &Cli, weight: &str, z: rhlens::C64, region: &str, ns: &[usize]) -> rhlens::Result<bool> {
    let w = WeightSpec::parse(weight)?;
    let region: SweepRegion = region.parse()?;
    check_ns(ns)?;
    let rec = Recurrence::generate(&w, ns[ns.len() - 1] + 8)?;
    let model = OuterModel::new(&w)?;
    let rep = error_sweep(&rec, &model, z, ns, region)?;
    write_artifacts(
        cli,
        "asym-sweep",
        json!({"weight": weight, "z_re": z.re, "z_im": z.im, "region": rep.region, "ns": ns}),
        json!({
            "lambda": rep.lambda,
            "fitted_exponent": rep.fitted_exponent,
            "correlation": rep.correlation,
            "window_start_n": rep.window_start_n,
            "at_floor": rep.at_floor,
        }),
        rep.pass,
        &rep.to_csv(),
    )?;
    println!(
        "asym-sweep weight={weight} region={} z={}+{}i fitted={:.3} lambda={:.3} {}",
        rep.region,
        z.re,
        z.im,
        rep.fitted_exponent,
        rep.lambda,
        if rep.pass { "PASS" } else { "FAIL" }
    );
    Ok(rep.pass)
}

fn parametrix_check(
    cli: &Cli,
    weight: &str,
    delta: f64,
    samples: usize,
    ns: &[usize],
) -> rhlens::Result<bool> {
    let w = WeightSpec::parse(weight)?;
    check_ns(ns)?;
    let model = OuterModel::new(&w)?;
    let n_max = ns[ns.len() - 1];
    // The backward-recurrence buffer depends on the sample geometry and is
    // only known inside the check, so deepen the recurrence on demand.
    let mut depth = n_max + 300;
    let rep = loop {
        let rec = Recurrence::generate(&w, depth)?;
        match parametrix_residual(&rec, &model, ns, delta, samples) {
            Err(Error::Precision { requested, .. }) if requested > depth => depth = requested + 16,
            other => break other?,
        }
    };
    write_artifacts(
        cli,
        "parametrix-check",
        json!({"weight": weight, "delta": delta, "samples": samples, "ns": ns}),
        json!({
            "lambda": rep.lambda,
            "fitted_exponent": rep.fitted_exponent,
            "correlation": rep.correlation,
            "det_defect": rep.det_defect,
            "decreasing": rep.decreasing,
            "max_residual": rep.residuals[rep.residuals.len() - 1],
        }),
        rep.pass,
        &rep.to_csv(),
    )?;
    println!(
        "parametrix-check weight={weight} delta={delta} fitted={:.3} det_defect={:.2e} {}",
        rep.fitted_exponent,
        rep.det_defect,
        if rep.pass { "PASS" } else { "FAIL" }
    );
    Ok(rep.pass)
}

fn airy_check(cli: &Cli, seed: u64, tol: f64) -> rhlens::Result<bool> {
    use rand::{Rng, SeedableRng};
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let layout = AirySectorLayout::default();
    let cyclic_defect = if check_cyclic_airy() { 0.0 } else { 1.0 };

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

    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut second_order: f64 = 0.0;
    let mut kept = 0;
    while kept < 50 {
        let z = c64(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if let Ok(sector) = layout.classify(z) {
            second_order = second_order.max(check_f(sector, z));
            kept += 1;
        }
    }

    let mut det_drift: f64 = 0.0;
    for i in 0..9 {
        for k in 0..9 {
            let z = c64(-8.0 + 2.0 * i as f64, -8.0 + 2.0 * k as f64);
            if let Ok(sector) = layout.classify(z) {
                let d = upsilon_in(sector, z).det();
                det_drift = det_drift.max((d - det_e()).norm() / det_e().norm());
            }
        }
    }

    let det_tol = 1e-10;
    let pass = cyclic_defect == 0.0
        && connection <= tol
        && jump <= tol
        && second_order <= tol
        && det_drift <= det_tol;

    let mut csv = String::from("check,value,threshold\n");
    csv.push_str(&format!("cyclic_defect,{cyclic_defect},0\n"));
    csv.push_str(&format!("connection,{connection},{tol}\n"));
    csv.push_str(&format!("jump,{jump},{tol}\n"));
    csv.push_str(&format!("second_order,{second_order},{tol}\n"));
    csv.push_str(&format!("det_drift,{det_drift},{det_tol}\n"));
    write_artifacts(
        cli,
        "airy-check",
        json!({"seed": seed, "tol": tol}),
        json!({
            "cyclic_defect": cyclic_defect,
            "connection": connection,
            "jump": jump,
            "second_order": second_order,
            "det_drift": det_drift,
        }),
        pass,
        &csv,
    )?;
    println!(
        "airy-check connection={connection:.2e} jump={jump:.2e} f={second_order:.2e} det={det_drift:.2e} {}",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

fn sie_roundtrip(cli: &Cli, nodes: usize, tol: f64) -> rhlens::Result<bool> {
    if nodes < 32 {
        return Err(Error::Config(format!("need at least 32 nodes, got {nodes}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    // Unimodular scalar-exponential jump; resolution ladder halves down to 32.
    let g = |k: rhlens::C64| 0.3 * (k + 1.0 / k);
    let mut ladder = Vec::new();
    let mut m = nodes;
    while m >= 32 {
        ladder.push(m);
        m /= 2;
    }
    ladder.reverse();

    let mut csv = String::from("m,residual_sie,residual_phi_match,residual_jump,condition_number\n");
    let mut last = None;
    for &m in &ladder {
        let grid = NystromGrid::new(
            ClosedCurve::Circle { center: c64(0.0, 0.0), radius: 1.0 },
            m,
        )?;
        let j = JumpData::new(move |k| {
            Mat2::new(g(k).exp(), c64(0.0, 0.0), c64(0.0, 0.0), (-g(k)).exp())
        });
        let rep = roundtrip_check(&j, &grid)?;
        csv.push_str(&format!(
            "{m},{},{},{},{}\n",
            rep.residual_sie, rep.residual_phi_match, rep.residual_jump, rep.condition_number
        ));
        last = Some(rep);
    }
    let rep = last.expect("ladder is non-empty");
    let pass =
        rep.residual_sie <= tol && rep.residual_phi_match <= tol && rep.residual_jump <= tol;
    write_artifacts(
        cli,
        "sie-roundtrip",
        json!({"nodes": nodes, "tol": tol}),
        json!({
            "residual_sie": rep.residual_sie,
            "residual_phi_match": rep.residual_phi_match,
            "residual_jump": rep.residual_jump,
            "condition_number": rep.condition_number,
        }),
        pass,
        &csv,
    )?;
    println!(
        "sie-roundtrip nodes={nodes} sie={:.2e} phi={:.2e} jump={:.2e} {}",
        rep.residual_sie,
        rep.residual_phi_match,
        rep.residual_jump,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

fn budget(cli: &Cli, nu_plus: &str, nu_minus: &str) -> rhlens::Result<bool> {
    let np = ExtReal::parse(nu_plus)?;
    let nm = ExtReal::parse(nu_minus)?;
    let (lambda, admissible) = lambda_exponent(&np, &nm)?;
    let lambda_f = rhlens::asymlab::ExtReal::Finite(lambda.clone()).to_f64();

    if !admissible {
        write_artifacts(
            cli,
            "budget",
            json!({"nu_plus": nu_plus, "nu_minus": nu_minus}),
            json!({"lambda": lambda_f, "admissible": false}),
            false,
            "quantity,value\n",
        )?;
        println!("budget nu_plus={np} nu_minus={nm} lambda={lambda_f} inadmissible FAIL");
        return Ok(false);
    }

    let b = exponent_budget(np.clone(), nm.clone())?;
    let mut csv = String::from("quantity,value\n");
    for (k, v) in b.rows() {
        csv.push_str(&format!("{k},{v}\n"));
    }
    print!("{}", b.table());
    write_artifacts(
        cli,
        "budget",
        json!({"nu_plus": nu_plus, "nu_minus": nu_minus}),
        json!({
            "lambda": lambda_f,
            "admissible": true,
            "p": b.p.to_f64(),
            "q": b.q.to_f64(),
            "vartheta": b.vartheta.to_f64(),
            "tau": b.tau.to_f64(),
            "omega": b.omega.to_f64(),
        }),
        true,
        &csv,
    )?;
    println!("budget nu_plus={np} nu_minus={nm} lambda={lambda_f} tau={} PASS", b.tau.to_f64());
    Ok(true)
}
