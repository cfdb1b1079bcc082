//! `cvpol` — command-line front end for the two-mode polarization
//! entanglement toolkit.
//!
//! Exit codes: 0 = entangled / success, 1 = separable (or failed
//! replication check), 2 = input error, 3 = numerical non-convergence.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::ScenarioConfig;
use cvpol::homodyne::{
    emit_trace_csv, estimate_scan, parse_trace_csv, read_sidecar_json, simulate_scan,
    write_sidecar_json, ScanEstimate, TraceMeta,
};
use cvpol::io::{load_state_json, report_to_json, save_state_json, stokes_report_to_json};
use cvpol::metrics::{
    correct_losses, eof_symmetric, maximally_correlated_modes, EntanglementReport,
};
use cvpol::stokes::{lock_phase_to_squeezing, stokes_sum_variances, BrightBeamPair, StokesReport};

const EXIT_OK: u8 = 0;
const EXIT_SEPARABLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "cvpol",
    version,
    about = "Two-mode Gaussian polarization entanglement: criterion optimization, \
             homodyne scan simulation, Stokes analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario configuration file (JSON). Flags override file fields,
    /// file fields override built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override the scenario seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Directory for generated artifacts (created if missing).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Override the detection efficiency used for loss correction
    /// (replicate, eof).
    #[arg(long, global = true, value_name = "F")]
    eta: Option<f64>,

    /// Machine-readable stdout instead of text.
    #[arg(long, global = true, value_enum, value_name = "json|csv")]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in reference scenario end to end and check its
    /// expected values; nonzero exit if any check fails.
    Replicate,
    /// Find the maximally correlated polarization basis of a state file
    /// and report the criterion minimum and entanglement of formation.
    Optimize {
        /// State JSON file.
        state: PathBuf,
    },
    /// Entanglement of formation for a measured criterion value
    /// (loss-corrected first when --eta is given).
    Eof {
        /// Criterion value, e.g. 1.86.
        i_value: f64,
    },
    /// Simulate a phase-ramped homodyne scan; writes trace and estimate
    /// CSV files and prints the minimal binned criterion estimate.
    Scan,
    /// Stokes-operator polarization entanglement of the bright beam pair.
    Stokes,
    /// Estimate per-bin variances from an externally recorded trace CSV.
    Analyze {
        /// Trace CSV file (`theta_rad,x_a,x_b`).
        trace: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<cvpol::Error>() {
        Some(cvpol::Error::NonConvergence { .. }) => EXIT_NONCONVERGENCE,
        _ => EXIT_INPUT,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Replicate => run_replicate(cli),
        Command::Optimize { state } => run_optimize(cli, state),
        Command::Eof { i_value } => run_eof(cli, *i_value),
        Command::Scan => run_scan(cli),
        Command::Stokes => run_stokes(cli),
        Command::Analyze { trace } => run_analyze(cli, trace),
    }
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(eta) = cli.eta {
        cfg.efficiency = eta;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_out_dir(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create output directory {}", out.display()))
}

struct Check {
    name: &'static str,
    value: f64,
    expected: String,
    pass: bool,
}

impl Check {
    fn near(name: &'static str, value: f64, expected: f64, tol: f64) -> Self {
        Self {
            name,
            value,
            expected: format!("{expected} ± {tol:.0e}"),
            pass: (value - expected).abs() <= tol,
        }
    }

    fn band(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name,
            value,
            expected: format!("within [{lo}, {hi}]"),
            pass: (lo..=hi).contains(&value),
        }
    }
}

fn run_replicate(cli: &Cli) -> Result<u8> {
    // Built-in scenario: both modes squeezed 5% on orthogonal quadratures.
    let cfg = ScenarioConfig::default();
    let eta = cli.eta.unwrap_or(cfg.efficiency);
    let eta_is_default = cli.eta.is_none();

    let pm45 = cfg.state_pm45()?;
    let report = maximally_correlated_modes(&pm45)?;
    let i_min = report.i_of_theta_min;
    let corrected = correct_losses(i_min, eta)?;
    let eof = eof_symmetric(corrected)?;
    let pair = BrightBeamPair::new(pm45.clone(), cfg.alpha_b, 0.0)?;
    let locked = lock_phase_to_squeezing(&pair, &report);
    let stokes = stokes_sum_variances(&locked);

    let mut checks = vec![Check::near(
        "criterion minimum I_{+45,-45}(theta_sq)",
        i_min,
        1.90,
        1e-9,
    )];
    if eta_is_default {
        checks.push(Check::near("loss-corrected criterion", corrected, 1.86, 1e-9));
        checks.push(Check::band("entanglement of formation", eof, 0.011, 0.017));
    } else {
        // With an overridden efficiency the published band no longer
        // applies; check consistency with the beamsplitter model instead.
        let model = 2.0 + (i_min - 2.0) / eta;
        checks.push(Check::near(
            "loss-corrected criterion (beamsplitter model)",
            corrected,
            model,
            1e-12,
        ));
    }
    checks.push(Check::near(
        "Stokes normalized criterion I^S/|alpha_B|^2",
        stokes.i_stokes_normalized,
        1.90,
        1e-9,
    ));
    let all_pass = checks.iter().all(|c| c.pass);

    match cli.format {
        Some(Format::Json) => {
            let doc = serde_json::json!({
                "convention": cvpol::CONVENTION,
                "i_min": i_min,
                "theta_star": report.theta_star,
                "efficiency": eta,
                "i_corrected": corrected,
                "eof": eof,
                "stokes_normalized": stokes.i_stokes_normalized,
                "entangled": stokes.entangled,
                "checks": checks.iter().map(|c| serde_json::json!({
                    "name": c.name, "value": c.value,
                    "expected": c.expected, "pass": c.pass,
                })).collect::<Vec<_>>(),
                "all_checks_pass": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Some(Format::Csv) => {
            println!("quantity,value,expected,pass");
            for c in &checks {
                println!("{},{:.12},{},{}", c.name, c.value, c.expected, c.pass);
            }
        }
        None => {
            println!("reference scenario: both modes squeezed 5% (v_min = 0.95) on orthogonal quadratures");
            for c in &checks {
                println!(
                    "  {:<45} = {:<16.12} [{}] {}",
                    c.name,
                    c.value,
                    c.expected,
                    if c.pass { "ok" } else { "FAIL" }
                );
            }
            println!(
                "  chain: I = {i_min:.4} -> corrected({eta:.4}) = {corrected:.4} -> EOF = {eof:.4}; Stokes = {:.4}",
                stokes.i_stokes_normalized
            );
        }
    }

    if let Some(out) = &cli.out {
        ensure_out_dir(out)?;
        save_state_json(&cfg.state_xy()?, out.join("state_xy.json"))?;
        save_state_json(&pm45, out.join("state_pm45.json"))?;
        std::fs::write(out.join("report.json"), report_to_json(&report) + "\n")?;
        std::fs::write(
            out.join("stokes_report.json"),
            stokes_report_to_json(&stokes) + "\n",
        )?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_SEPARABLE })
}

fn print_entanglement_report(report: &EntanglementReport, format: Option<Format>) -> Result<()> {
    match format {
        Some(Format::Json) => println!("{}", report_to_json(report)),
        Some(Format::Csv) => {
            println!("quantity,value");
            println!("i_of_theta_min,{:.16e}", report.i_of_theta_min);
            println!("theta_star,{:.16e}", report.theta_star);
            println!("i_star,{:.16e}", report.i_star);
            println!("n_param,{:.16e}", report.n_param);
            println!("k_param,{:.16e}", report.k_param);
            println!("eof,{:.16e}", report.eof);
        }
        None => {
            println!("criterion minimum in the given basis: {:.9} at theta = {:.9}", report.i_of_theta_min, report.theta_star);
            println!("global minimum over bases:            {:.9}", report.i_star);
            println!("standard form: n = {:.9}, k = {:.9}", report.n_param, report.k_param);
            println!("entanglement of formation:            {:.9}", report.eof);
            println!("verdict: {}", if report.i_star < 2.0 { "entangled" } else { "separable" });
        }
    }
    Ok(())
}

fn run_optimize(cli: &Cli, state_path: &Path) -> Result<u8> {
    let state = load_state_json(state_path)
        .with_context(|| format!("state file {}", state_path.display()))?;
    let report = maximally_correlated_modes(&state)?;
    print_entanglement_report(&report, cli.format)?;
    if let Some(out) = &cli.out {
        ensure_out_dir(out)?;
        std::fs::write(out.join("report.json"), report_to_json(&report) + "\n")?;
    }
    Ok(if report.i_star < 2.0 { EXIT_OK } else { EXIT_SEPARABLE })
}

fn run_eof(cli: &Cli, i_value: f64) -> Result<u8> {
    let (i_used, eta) = match cli.eta {
        Some(eta) => (correct_losses(i_value, eta)?, eta),
        None => (i_value, 1.0),
    };
    let eof = eof_symmetric(i_used)?;
    match cli.format {
        Some(Format::Json) => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "i_value": i_value,
                "efficiency": eta,
                "i_corrected": i_used,
                "eof": eof,
            }))?
        ),
        Some(Format::Csv) => {
            println!("quantity,value");
            println!("i_value,{i_value:.16e}");
            println!("i_corrected,{i_used:.16e}");
            println!("eof,{eof:.16e}");
        }
        None => println!("EOF({i_used}) = {eof:.9}"),
    }
    Ok(if eof > 0.0 { EXIT_OK } else { EXIT_SEPARABLE })
}

fn write_estimates_csv(est: &ScanEstimate, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "theta_rad,var_a,var_b,cov_ab,i_plus,sample_count,stderr")?;
    for b in &est.bins {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            b.theta_center, b.var_a, b.var_b, b.cov_ab, b.i_plus_estimate, b.sample_count, b.stderr
        )?;
    }
    w.flush()?;
    Ok(())
}

fn print_scan_summary(est: &ScanEstimate, label: &str, format: Option<Format>) -> Result<u8> {
    let best = match est.min_i_plus() {
        Some(b) => b,
        None => bail!("no θ bin carries at least 2 samples; nothing to estimate"),
    };
    let slope = est.theta_slope();
    // Two-sided 95% normal bound on the regression slope; the flatness
    // signature of a scan whose criterion does not depend on θ.
    let slope_zero = slope.map(|(s, se)| s.abs() <= 1.96 * se);
    let spread = est
        .bins
        .iter()
        .map(|b| b.i_plus_estimate)
        .fold(f64::NEG_INFINITY, f64::max)
        - best.i_plus_estimate;
    for skipped in &est.skipped {
        eprintln!(
            "warning: skipped bin at theta = {} with {} sample(s)",
            skipped.theta, skipped.sample_count
        );
    }
    match format {
        Some(Format::Json) => {
            let doc = serde_json::json!({
                "criterion": label,
                "min_i_plus": best.i_plus_estimate,
                "theta_at_min": best.theta_center,
                "stderr_at_min": best.stderr,
                "bin_spread": spread,
                "bins": est.bins.len(),
                "skipped_bins": est.skipped.len(),
                "theta_slope": slope.map(|(s, _)| s),
                "theta_slope_stderr": slope.map(|(_, se)| se),
                "slope_zero_at_95pct": slope_zero,
                "entangled": best.i_plus_estimate < 2.0,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Some(Format::Csv) => {
            println!("quantity,value");
            println!("min_i_plus,{:.16e}", best.i_plus_estimate);
            println!("theta_at_min,{:.16e}", best.theta_center);
            println!("stderr_at_min,{:.16e}", best.stderr);
            println!("bin_spread,{spread:.16e}");
            if let Some((s, se)) = slope {
                println!("theta_slope,{s:.16e}");
                println!("theta_slope_stderr,{se:.16e}");
            }
        }
        None => {
            println!(
                "min binned {label} = {:.4} ± {:.4} at theta = {:.4} ({} bins, spread {:.4})",
                best.i_plus_estimate,
                best.stderr,
                best.theta_center,
                est.bins.len(),
                spread
            );
            if let Some((s, se)) = slope {
                println!(
                    "theta slope = {s:.3e} ± {se:.3e} -> zero at 95%: {}",
                    if slope_zero == Some(true) { "yes" } else { "no" }
                );
            }
        }
    }
    Ok(if best.i_plus_estimate < 2.0 {
        EXIT_OK
    } else {
        EXIT_SEPARABLE
    })
}

fn run_scan(cli: &Cli) -> Result<u8> {
    let cfg = load_config(cli)?;
    let state = cfg.scan_state()?;
    let mut trace = simulate_scan(&state, &cfg.scan_ramp(), cfg.samples_per_bin, cfg.seed)?;
    trace.analysis_frequency_mhz = cfg.analysis_frequency_mhz;
    let est = estimate_scan(&trace);

    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    ensure_out_dir(&out)?;
    save_state_json(&state, out.join("scan_state.json"))?;
    emit_trace_csv(&trace, out.join("trace.csv"))?;
    write_sidecar_json(
        &TraceMeta {
            analysis_frequency_mhz: cfg.analysis_frequency_mhz,
            seed: cfg.seed,
            state_ref: "scan_state.json".into(),
        },
        out.join("trace_meta.json"),
    )?;
    write_estimates_csv(&est, &out.join("estimates.csv"))?;

    let label = match cfg.scan_basis {
        config::ScanBasis::Pm45 => "I_{+45,-45}",
        config::ScanBasis::Xy => "I_{x,y}",
    };
    print_scan_summary(&est, label, cli.format)
}

fn print_stokes_report(rep: &StokesReport, format: Option<Format>) -> Result<()> {
    match format {
        Some(Format::Json) => println!("{}", stokes_report_to_json(rep)),
        Some(Format::Csv) => {
            println!("quantity,value");
            println!("s1_mean_alpha,{:.16e}", rep.s1_mean_alpha);
            println!("s1_mean_beta,{:.16e}", rep.s1_mean_beta);
            println!("var_s2_sum,{:.16e}", rep.var_s2_sum);
            println!("var_s3_sum,{:.16e}", rep.var_s3_sum);
            println!("i_stokes_normalized,{:.16e}", rep.i_stokes_normalized);
            println!("entangled,{}", rep.entangled);
        }
        None => {
            println!("<S1_alpha> = {:.6e}, <S1_beta> = {:.6e}", rep.s1_mean_alpha, rep.s1_mean_beta);
            println!(
                "Var(S2_a+S2_b) = {:.6e}, Var(S3_a+S3_b) = {:.6e}",
                rep.var_s2_sum, rep.var_s3_sum
            );
            println!("I^S / |alpha_B|^2 = {:.9}", rep.i_stokes_normalized);
            println!("verdict: {}", if rep.entangled { "entangled" } else { "not entangled" });
        }
    }
    Ok(())
}

fn run_stokes(cli: &Cli) -> Result<u8> {
    let cfg = load_config(cli)?;
    let pair = cfg.bright_pair()?;
    let rep = stokes_sum_variances(&pair);
    print_stokes_report(&rep, cli.format)?;
    if let Some(out) = &cli.out {
        ensure_out_dir(out)?;
        std::fs::write(
            out.join("stokes_report.json"),
            stokes_report_to_json(&rep) + "\n",
        )?;
    }
    Ok(if rep.entangled { EXIT_OK } else { EXIT_SEPARABLE })
}

fn run_analyze(cli: &Cli, trace_path: &Path) -> Result<u8> {
    let mut trace = parse_trace_csv(trace_path)?;
    // Pick up acquisition metadata written by `scan`, if present.
    let sidecar = trace_path.with_file_name(
        trace_path
            .file_stem()
            .map(|s| format!("{}_meta.json", s.to_string_lossy()))
            .unwrap_or_else(|| "trace_meta.json".into()),
    );
    if sidecar.exists() {
        let meta = read_sidecar_json(&sidecar)?;
        trace.analysis_frequency_mhz = meta.analysis_frequency_mhz;
        trace.seed = meta.seed;
    }
    let est = estimate_scan(&trace);
    if let Some(out) = &cli.out {
        ensure_out_dir(out)?;
        write_estimates_csv(&est, &out.join("estimates.csv"))?;
    }
    print_scan_summary(&est, "I (sum-of-variances)", cli.format)
}
