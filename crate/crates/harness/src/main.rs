use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use perfhom_core::regime::{
    limit_regime, perforation_numbers, rates_at, validate_epsilon, PerforationParams, RateKey,
};
use perfhom_femlab::io::{write_mesh, write_solution};
use perfhom_femlab::mesh::build_mesh;
use perfhom_harness::checks::{abstract_suite, corrector_grid, corrector_suite};
use perfhom_harness::config::SweepConfig;
use perfhom_harness::fit::{check_against_coarsest, fit_pairs, RateFit};
use perfhom_harness::report::{read_csv, write_csv, write_json, write_plot_data, CsvRow, Summary};
use perfhom_harness::sweep::auto_refinement;
use perfhom_harness::{parse_eps_range, run_sweep, solve_load, ErrorKey, HarnessError, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "perfhom", version, about = "Robin homogenization in perforated domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Limit regime, perforation numbers and predicted rates.
    Regime(RegimeArgs),
    /// Corrector identities over a parameter grid.
    CorrectorCheck {
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// Also write every row and the summary as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Resolvent and spectral bounds on random finite-dimensional instances.
    AbstractCheck {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 16)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solves every ε of a config and writes meshes, solutions and norms.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs an ε-sweep and checks the measured errors against the rates.
    Sweep(SweepArgs),
    /// Fits `error ≤ C·rate` to the rows of a sweep CSV.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "l2")]
        error: String,
        #[arg(long, default_value = "eta")]
        rate: String,
        /// Fails when max/min of error/rate exceeds this.
        #[arg(long)]
        max_deviation: Option<f64>,
    },
}

#[derive(Args)]
struct RegimeArgs {
    /// TOML or JSON with `n`, `d` and `gamma` (or a sweep config).
    #[arg(long, conflicts_with_all = ["n", "s", "t"])]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// `d_ε = ε^s`.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// `γ_ε = ε^t`.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// `eps=a:b:k`: one CSV row per ε.
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Directory for two-column `eps value` files.
    #[arg(long)]
    plot_data: Option<PathBuf>,
    /// Require the headline error to decrease strictly with ε.
    #[arg(long)]
    assert_decreasing: bool,
    /// Require max/min of the headline error/rate ratio to stay below this.
    #[arg(long)]
    max_deviation: Option<f64>,
    /// Require error ≤ factor·C·rate with C taken from the coarsest ε.
    #[arg(long)]
    coarse_factor: Option<f64>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when an enabled assertion fails.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Regime(args) => regime(args),
        Command::CorrectorCheck { samples, json } => corrector_check(samples, json),
        Command::AbstractCheck { instances, max_dim, seed, csv } => abstract_check(instances, max_dim, seed, csv),
        Command::Solve { config, out } => solve(&config, &out),
        Command::Sweep(args) => sweep(args),
        Command::Fit { csv, error, rate, max_deviation } => fit(&csv, &error, &rate, max_deviation),
    }
}

fn load_params(path: &Path) -> Result<PerforationParams> {
    let text = fs::read_to_string(path)?;
    let json = path.extension().is_some_and(|e| e == "json");
    let bare: Result<PerforationParams> = if json {
        serde_json::from_str(&text).map_err(Into::into)
    } else {
        toml::from_str(&text).map_err(Into::into)
    };
    let params = match bare {
        Ok(p) => p,
        Err(_) => {
            let cfg: SweepConfig = if json { serde_json::from_str(&text)? } else { toml::from_str(&text)? };
            cfg.params
        }
    };
    params.validate()?;
    Ok(params)
}

#[derive(Serialize)]
struct RegimeRow {
    eps: f64,
    p_eps: f64,
    q_eps: f64,
    v_eps: f64,
    lambda: f64,
    eta: Option<f64>,
    eta_prime: Option<f64>,
    eta_tilde: Option<f64>,
    eta_dprime: Option<f64>,
    th5: f64,
    violations: String,
}

fn regime(args: RegimeArgs) -> Result<bool> {
    let params = match (&args.config, args.n, args.s, args.t) {
        (Some(path), ..) => load_params(path)?,
        (None, Some(n), Some(s), Some(t)) => PerforationParams::power_laws(n, s, t)?,
        _ => return Err(HarnessError::Config("give --config or all of --n, --s, --t".into())),
    };
    let report = limit_regime(&params);
    let mut out = io::stdout().lock();

    if let Some(spec) = &args.sweep {
        let mut w = csv::Writer::from_writer(out);
        for eps in parse_eps_range(spec)? {
            let numbers = perforation_numbers(&params, eps)?;
            let rates = rates_at(&params, eps)?;
            let violations: Vec<String> = validate_epsilon(&params, eps)?.iter().map(|v| v.to_string()).collect();
            w.serialize(RegimeRow {
                eps,
                p_eps: numbers.p_eps,
                q_eps: numbers.q_eps,
                v_eps: numbers.v_eps,
                lambda: numbers.lambda_eps,
                eta: rates.eta,
                eta_prime: rates.eta_prime,
                eta_tilde: rates.eta_tilde,
                eta_dprime: rates.eta_dprime,
                th5: rates.th5_bound,
                violations: violations.join("; "),
            })?;
        }
        w.flush()?;
        return Ok(true);
    }

    let mut doc = serde_json::json!({ "params": params, "regime": report });
    writeln!(out, "{:<10} {}", "P", report.p)?;
    writeln!(out, "{:<10} {}", "Q", report.q)?;
    writeln!(out, "{:<10} {}", "V", report.v.map_or("-".to_string(), |v| v.to_string()))?;
    writeln!(out, "{:<10} {:?}", "scenario", report.scenario)?;
    writeln!(out, "{:<10} {:?}", "case", report.v_case)?;
    if let Some(eps) = args.eps {
        let numbers = perforation_numbers(&params, eps)?;
        let rates = rates_at(&params, eps)?;
        let violations = validate_epsilon(&params, eps)?;
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6e}"));
        writeln!(out, "{:<10} {:.6e}", "eps", eps)?;
        writeln!(out, "{:<10} {:.6e}", "P_eps", numbers.p_eps)?;
        writeln!(out, "{:<10} {:.6e}", "Q_eps", numbers.q_eps)?;
        writeln!(out, "{:<10} {:.6e}", "V_eps", numbers.v_eps)?;
        writeln!(out, "{:<10} {:.6e}", "Lambda", numbers.lambda_eps)?;
        writeln!(out, "{:<10} {}", "eta", opt(rates.eta))?;
        writeln!(out, "{:<10} {}", "eta'", opt(rates.eta_prime))?;
        writeln!(out, "{:<10} {}", "eta~", opt(rates.eta_tilde))?;
        writeln!(out, "{:<10} {}", "eta''", opt(rates.eta_dprime))?;
        writeln!(out, "{:<10} {:.6e}", "th5", rates.th5_bound)?;
        for v in &violations {
            writeln!(out, "{:<10} {v}", "violation")?;
        }
        doc["numbers"] = serde_json::to_value(numbers)?;
        doc["rates"] = serde_json::to_value(rates)?;
        doc["violations"] = serde_json::to_value(violations)?;
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(true)
}

fn corrector_check(samples: usize, json: Option<PathBuf>) -> Result<bool> {
    let grid = corrector_grid()?;
    let (rows, summary) = corrector_suite(&grid, samples)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{:>2} {:>5} {:>5} {:>6} {:>11} {:>11} {:>11}  verdict", "n", "s", "t", "eps", "robin/γ", "flux", "sup")?;
    for r in &rows {
        writeln!(
            out,
            "{:>2} {:>5} {:>5} {:>6} {:>11.3e} {:>11.3e} {:>11.3e}  {}",
            r.case.n,
            r.case.s,
            r.case.t,
            r.case.eps,
            r.robin_residual / r.gamma,
            r.flux_rel_error,
            r.sup_rel_error,
            if r.pass { "pass" } else { "FAIL" }
        )?;
    }
    let doc = serde_json::json!({ "summary": summary, "rows": rows });
    match json {
        Some(path) => fs::write(path, serde_json::to_string_pretty(&doc)?)?,
        None => writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?,
    }
    Ok(summary.failures == 0)
}

fn abstract_check(instances: usize, max_dim: usize, seed: u64, csv: Option<PathBuf>) -> Result<bool> {
    let rows = abstract_suite(instances, max_dim, seed)?;
    let sink: Box<dyn Write> = match &csv {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    let resolvent = rows.iter().filter(|r| !r.resolvent_bounds_hold()).count();
    let spectral = rows.iter().filter(|r| !r.spectral_bound_holds()).count();
    let checked = rows.iter().filter(|r| r.bound.is_some()).count();
    let ok = resolvent == 0 && spectral == 0;
    eprintln!(
        "{} instances: {resolvent} resolvent violations; {checked} spectral checks, {spectral} violations: {}",
        rows.len(),
        if ok { "PASS" } else { "FAIL" }
    );
    Ok(ok)
}

#[derive(Serialize)]
struct SolveRecord {
    eps: f64,
    load: String,
    refinement: u32,
    u_eps: String,
    u_hom: Option<String>,
    iterations: usize,
    relative_residual: f64,
    norms: Option<perfhom_femlab::norms::ErrorNorms>,
}

fn solve(config: &Path, out: &Path) -> Result<bool> {
    let cfg = SweepConfig::from_path(config)?;
    let refinement = match cfg.refinement {
        Some(r) => r,
        None => auto_refinement(&cfg.params, &cfg.eps)?,
    };
    fs::create_dir_all(out)?;
    let with_corrector = cfg.record.contains(&ErrorKey::H1Corrected);
    let mut records = Vec::new();
    for (i, &eps) in cfg.eps.iter().enumerate() {
        let mesh = build_mesh(&cfg.params, eps, refinement).map_err(|e| HarnessError::at(eps, e))?;
        write_mesh(&mesh.perforated, &out.join(format!("perforated_{i}.mesh")))?;
        write_mesh(&mesh.filled, &out.join(format!("filled_{i}.mesh")))?;
        for &load in &cfg.loads {
            let sol = solve_load(&mesh, &cfg.params, load, true, with_corrector, cfg.solver)
                .map_err(|e| HarnessError::at(eps, e))?;
            let name = format!("u_eps_{i}_{}.bin", load.name());
            let meta = serde_json::json!({
                "eps": eps, "load": load.name(), "mesh": format!("perforated_{i}.mesh"),
                "iterations": sol.u_eps.iterations, "relative_residual": sol.u_eps.relative_residual,
            });
            write_solution(&out.join(&name), &sol.u_eps.values, &meta)?;
            let hom_name = match &sol.u_hom {
                Some(u) => {
                    let name = format!("u_hom_{i}_{}.bin", load.name());
                    let meta = serde_json::json!({
                        "eps": eps, "load": load.name(), "mesh": format!("filled_{i}.mesh"),
                        "iterations": u.iterations, "relative_residual": u.relative_residual,
                    });
                    write_solution(&out.join(&name), &u.values, &meta)?;
                    Some(name)
                }
                None => None,
            };
            records.push(SolveRecord {
                eps,
                load: load.name().to_string(),
                refinement,
                u_eps: name,
                u_hom: hom_name,
                iterations: sol.u_eps.iterations,
                relative_residual: sol.u_eps.relative_residual,
                norms: sol.norms,
            });
        }
    }
    fs::write(out.join("norms.json"), serde_json::to_string_pretty(&records)? + "\n")?;
    Ok(true)
}

/// `(error, rate)` columns for the config's headline pair.
fn headline(cfg: &SweepConfig) -> (ErrorKey, RateKey) {
    if limit_regime(&cfg.params).v.is_some() && cfg.record.contains(&ErrorKey::L2) {
        (ErrorKey::L2, RateKey::Eta)
    } else {
        (ErrorKey::UNorm, RateKey::Th5)
    }
}

fn column_pairs(rows: &[CsvRow], error: ErrorKey, rate: RateKey) -> Result<Vec<(f64, f64)>> {
    rows.iter()
        .map(|r| {
            let e = match error {
                ErrorKey::L2 => r.l2,
                ErrorKey::H1 => r.h1,
                ErrorKey::H1Corrected => r.h1_corrected,
                ErrorKey::UNorm => Some(r.u_norm),
            };
            let q = match rate {
                RateKey::Eta => r.eta,
                RateKey::EtaPrime => r.eta_prime,
                RateKey::EtaTilde => r.eta_tilde,
                RateKey::EtaDprime => r.eta_dprime,
                RateKey::Th5 => Some(r.th5),
            };
            match (e, q) {
                (Some(e), Some(q)) => Ok((e, q)),
                _ => Err(HarnessError::Fit(format!("row at ε = {} lacks {} or {rate:?}", r.eps, error.name()))),
            }
        })
        .collect()
}

fn sweep(args: SweepArgs) -> Result<bool> {
    let cfg = SweepConfig::from_path(&args.config)?;
    let rows = run_sweep(&cfg)?;
    let csv_rows: Vec<CsvRow> = rows.iter().map(CsvRow::from).collect();
    let (error, rate) = headline(&cfg);
    let pairs = column_pairs(&csv_rows, error, rate)?;
    let fit = fit_pairs(&pairs)?;

    let csv_path = args.csv.or(cfg.output.csv.clone());
    match &csv_path {
        Some(path) => write_csv(&rows, fs::File::create(path)?)?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if let Some(path) = args.json.or(cfg.output.json.clone()) {
        let summary = Summary { rows: &rows, fits: vec![(format!("{}/{rate:?}", error.name()), fit.clone())] };
        write_json(&summary, fs::File::create(path)?)?;
    }
    if let Some(dir) = args.plot_data.or(cfg.output.plot_dir.clone()) {
        write_plot_data(&rows, &dir)?;
    }

    let mut ok = true;
    let errors: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    if args.assert_decreasing {
        let pass = errors.windows(2).all(|w| w[1] < w[0]);
        eprintln!("{}: {} strictly decreasing {errors:?}", verdict(pass), error.name());
        ok &= pass;
    }
    if let Some(limit) = args.max_deviation {
        let pass = fit.deviation < limit;
        eprintln!("{}: {}/{rate:?} deviation {:.4} < {limit}", verdict(pass), error.name(), fit.deviation);
        ok &= pass;
    }
    if let Some(factor) = args.coarse_factor {
        let coarse = check_against_coarsest(&pairs, factor)?;
        let pass = coarse.violations.is_empty();
        eprintln!(
            "{}: {}/{rate:?} within factor {factor} of C = {:.4e}; violations at rows {:?}",
            verdict(pass),
            error.name(),
            coarse.constant,
            coarse.violations
        );
        ok &= pass;
    }
    Ok(ok)
}

fn fit(csv: &Path, error: &str, rate: &str, max_deviation: Option<f64>) -> Result<bool> {
    let rows = read_csv(csv)?;
    let error: ErrorKey = error.parse()?;
    let rate: RateKey = rate.parse()?;
    let fit: RateFit = fit_pairs(&column_pairs(&rows, error, rate)?)?;
    println!("{}", serde_json::to_string_pretty(&fit)?);
    Ok(match max_deviation {
        Some(limit) => {
            let pass = fit.deviation < limit;
            eprintln!("{}: deviation {:.4} < {limit}", verdict(pass), fit.deviation);
            pass
        }
        None => true,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
