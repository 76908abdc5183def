use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qkt_discord::runner::{
    self, alpha_sweep_diagnostic, output, ConfigError, Format, InitialAngles, Preset, RunError,
    ScenarioConfig, SourceKind,
};

#[derive(Parser)]
#[command(
    name = "qkt-discord",
    version,
    about = "Kicked-top dephasing of a two-qubit Bell-diagonal pair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity series only, with revival and decay-fit metadata.
    Fd(ScenarioArgs),
    /// Full correlation record per kick.
    Dynamics(ScenarioArgs),
    /// Kicked-top and memoryless dephasing side by side.
    ChannelCompare(ScenarioArgs),
    /// Closed-form vs brute-force discord along the run.
    Oracle(ScenarioArgs),
    /// Independent runs over one scalar parameter.
    Sweep(ScenarioArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Qkt,
    Markovian,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// JSON configuration; keys not present keep their preset/default values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    kicks: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    cx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    cy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    cz: Option<f64>,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    phi0: Option<f64>,
    #[arg(long, conflicts_with_all = ["theta0", "phi0"])]
    seed: Option<u64>,
    /// Markovian dephasing rate; selects the markovian source unless --source says otherwise.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum)]
    source: Option<SourceArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Add the closed-form vs brute-force discord check to sweep summaries.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    sweep_axis: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sweep_values: Vec<f64>,
}

fn invalid(key: &str, reason: &str) -> RunError {
    ConfigError::Invalid {
        key: key.into(),
        reason: reason.into(),
    }
    .into()
}

fn build_config(args: &ScenarioArgs) -> Result<ScenarioConfig, RunError> {
    let mut cfg = args.preset.map(Preset::config).unwrap_or_default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        cfg = ScenarioConfig::from_json_over(&cfg, &text)?;
    }
    let scalar = [
        ("j", args.j),
        ("nu", args.nu),
        ("eta", args.eta),
        ("epsilon", args.epsilon),
        ("cx", args.cx),
        ("cy", args.cy),
        ("cz", args.cz),
        ("theta0", args.theta0),
        ("phi0", args.phi0),
    ];
    for (key, value) in scalar {
        if let Some(v) = value {
            cfg = cfg.with_axis(key, v)?;
        }
    }
    if let Some(k) = args.kicks {
        cfg.n_kicks = k;
    }
    if let Some(seed) = args.seed {
        cfg.initial = InitialAngles::Random { seed };
    }
    cfg.source = match (args.source, args.gamma) {
        (Some(SourceArg::Qkt), Some(_)) => {
            return Err(invalid(
                "gamma",
                "only meaningful with the markovian source",
            ))
        }
        (Some(SourceArg::Qkt), None) => SourceKind::Qkt,
        (_, Some(gamma)) => SourceKind::Markovian { gamma },
        (Some(SourceArg::Markovian), None) => match cfg.source {
            SourceKind::Markovian { .. } => cfg.source,
            SourceKind::Qkt => return Err(invalid("gamma", "markovian source needs --gamma")),
        },
        (None, None) => cfg.source,
    };
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    if let Some(format) = args.format {
        cfg.format = format;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn preset_note(args: &ScenarioArgs) -> Option<String> {
    args.preset.map(|p| {
        format!(
            "preset: {} (qualitative reference parameters; no tabulated values exist, checks are property-based)",
            p.name()
        )
    })
}

fn deliver(cfg: &ScenarioConfig, text: String) -> Result<(), RunError> {
    match &cfg.output {
        Some(path) => runner::write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header(cfg: &ScenarioConfig, notes: &[String]) -> String {
    let mut s = format!(
        "# qkt-discord {}\n# config: {}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.to_json()
    );
    if let Some(seed) = cfg.seed() {
        writeln!(s, "# seed: {seed}").unwrap();
    }
    for n in notes {
        writeln!(s, "# {n}").unwrap();
    }
    s
}

fn fd(args: &ScenarioArgs) -> Result<(), RunError> {
    let cfg = build_config(args)?;
    let res = runner::fidelity_analysis(&cfg)?;
    let f = res.series.fidelity();
    let alpha = res.series.alpha();
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": cfg,
            "revivals": res.revivals,
            "fit": res.fit.as_ref().map(|fit| json!({
                "model": format!("{:?}", fit.model).to_lowercase(),
                "rate": fit.rate,
                "window": [fit.window.start, fit.window.end],
                "residual": fit.residual,
            })),
            "F": f,
            "alpha": alpha,
        }))
        .expect("serializes"),
        Format::Csv => {
            let mut notes: Vec<String> = preset_note(args).into_iter().collect();
            notes.push(format!("revival_times: {:?}", res.revivals.revival_times));
            if let Some(p) = res.revivals.estimated_period {
                notes.push(format!("revival_period: {p:.6}"));
            }
            if let Some(k) = res.revivals.k_estimate {
                notes.push(format!("k_estimate: {k:.6}"));
            }
            if let Some(fit) = &res.fit {
                notes.push(format!(
                    "decay_fit: {:?} rate={:.6e} window={}..{}",
                    fit.model, fit.rate, fit.window.start, fit.window.end
                ));
            }
            let mut s = header(&cfg, &notes);
            s.push_str("n,F,alpha\n");
            for (n, (f, a)) in f.iter().zip(&alpha).enumerate() {
                writeln!(s, "{n},{f:.14e},{a:.14e}").unwrap();
            }
            s
        }
    };
    deliver(&cfg, text)
}

fn dynamics(args: &ScenarioArgs) -> Result<(), RunError> {
    let cfg = build_config(args)?;
    let mut out = runner::run_scenario(&cfg)?;
    out.notes.extend(preset_note(args));
    if let Some(text) = output::emit(&out)? {
        print!("{text}");
    }
    Ok(())
}

fn channel_compare(args: &ScenarioArgs) -> Result<(), RunError> {
    let cfg = build_config(args)?;
    let cmp = runner::channel_compare(&cfg)?;
    runner::check_row_identities(&cmp.qkt)?;
    runner::check_row_identities(&cmp.markovian)?;
    let cols = cfg.columns();
    let text = match cfg.format {
        Format::Json => {
            let side = |rows: &[runner::Row]| -> Vec<serde_json::Value> {
                rows.iter().map(|r| json!(r)).collect()
            };
            serde_json::to_string_pretty(&json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg,
                "gamma": cmp.gamma,
                "gamma_fitted": cmp.gamma_fitted,
                "qkt": side(&cmp.qkt),
                "markovian": side(&cmp.markovian),
            }))
            .expect("serializes")
        }
        Format::Csv => {
            let mut notes: Vec<String> = preset_note(args).into_iter().collect();
            notes.push(format!(
                "markovian_gamma: {:.14e}{}",
                cmp.gamma,
                if cmp.gamma_fitted {
                    " (half the fitted kicked-top decay rate)"
                } else {
                    ""
                }
            ));
            let mut s = header(&cfg, &notes);
            s.push('n');
            for prefix in ["qkt", "mk"] {
                for c in &cols {
                    for h in c.headers() {
                        write!(s, ",{prefix}_{h}").unwrap();
                    }
                }
            }
            s.push('\n');
            for (a, b) in cmp.qkt.iter().zip(&cmp.markovian) {
                write!(s, "{}", a.n).unwrap();
                for row in [a, b] {
                    for c in &cols {
                        for v in output::values(row, *c) {
                            write!(s, ",{v:.14e}").unwrap();
                        }
                    }
                }
                s.push('\n');
            }
            s
        }
    };
    deliver(&cfg, text)
}

fn oracle(args: &ScenarioArgs) -> Result<(), RunError> {
    let cfg = build_config(args)?;
    let v = cfg.validate()?;
    let series = runner::amplitudes(&cfg)?;
    let rows = runner::oracle_rows(v.correlations, &series, runner::SWEEP_ORACLE_STRIDE)?;
    let last_f = series.fidelity().last().copied().unwrap_or(1.0).min(1.0);
    let diag = alpha_sweep_diagnostic(v.correlations, last_f, 32)?;
    let max = rows
        .iter()
        .map(|r| (r.closed - r.numeric).abs())
        .fold(0.0, f64::max);
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": cfg,
            "max_discrepancy": max,
            "alpha_sweep": diag,
            "rows": rows,
        }))
        .expect("serializes"),
        Format::Csv => {
            let mut notes: Vec<String> = preset_note(args).into_iter().collect();
            notes.push(format!("max_discrepancy: {max:.6e}"));
            notes.push(format!(
                "alpha_sweep at F={:.6e}: closed_variation={:.6e} numeric_variation={:.6e}",
                diag.fidelity, diag.closed_variation, diag.numeric_variation
            ));
            let mut s = header(&cfg, &notes);
            s.push_str("n,F,alpha,Q_closed,Q_numeric\n");
            for r in &rows {
                writeln!(
                    s,
                    "{},{:.14e},{:.14e},{:.14e},{:.14e}",
                    r.n, r.fidelity, r.alpha, r.closed, r.numeric
                )
                .unwrap();
            }
            s
        }
    };
    deliver(&cfg, text)
}

fn sweep(args: &ScenarioArgs) -> Result<(), RunError> {
    let cfg = build_config(args)?;
    let axis = args
        .sweep_axis
        .as_deref()
        .ok_or_else(|| invalid("sweep-axis", "required for sweep"))?;
    let res = runner::sweep(&cfg, axis, &args.sweep_values, args.oracle)?;
    for run in &res.runs {
        runner::check_row_identities(&run.rows)?;
    }
    let text = match cfg.format {
        Format::Csv => output::sweep_summary_csv(&res),
        Format::Json => output::sweep_summary_json(&res),
    };
    deliver(&cfg, text)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fd(a) => fd(a),
        Command::Dynamics(a) => dynamics(a),
        Command::ChannelCompare(a) => channel_compare(a),
        Command::Oracle(a) => oracle(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
