//! `ceresa`: exact Green-Griffiths complexes, quartic forms, the Klein
//! group, and genus-3 theta constants from the command line.
//!
//! All structured I/O is JSON: rationals travel as strings "p/q", cyclotomic
//! numbers as arrays of six rational strings, period matrices as
//! {"re": 3x3, "im": 3x3}. Inputs come from files or stdin ("-").

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ceresa_core::autgroup::{self, GModule};
use ceresa_core::error::Error;
use ceresa_core::exactnum::format_rational;
use ceresa_core::quartic::{
    self, change_coordinates, dc_matrix, parse_quartic, qc_matrix, quartic_from_form,
    quartic_to_json, rc_matrix,
};
use ceresa_core::theta::{
    chi18, cusp_order_along, min_theta_null, theta_constant, transform_check, PeriodMatrix,
    TauJson, ThetaChar, TransformKind,
};
use ceresa_core::verify::{
    self, complex_report, OutputFormat, RunConfig, VerificationReport, VerifySuite,
};

#[derive(Parser)]
#[command(name = "ceresa", version, about = "Genus-3 Ceresa-cycle verification toolkit")]
struct Cli {
    /// Relative tolerance for numerical checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eps: f64,

    /// Working precision in decimal digits (env CERESA_PRECISION overrides
    /// the default; an explicit flag wins).
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Seed for the randomized spot checks.
    #[arg(long, global = true, default_value_t = 17)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Include wall-clock runtimes in verification reports.
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Term dimensions, differential ranks, homology and cocycle data of the
    /// graded complexes.
    Complex {
        /// 0, 1, 2 or "all".
        #[arg(long, default_value = "all")]
        p: String,
    },
    /// Q_C of a quartic  (JSON {"monomials": {"i,j,k": "p/q"}}).
    Qc {
        #[arg(long)]
        quartic: PathBuf,
    },
    /// R_C of a degree-two element (JSON {"p": [...], "q": [...]}).
    Rc {
        #[arg(long = "h", value_name = "FILE")]
        h_elem: PathBuf,
    },
    /// D_C = Q_C + R_C.
    Dc {
        #[arg(long)]
        quartic: PathBuf,
        #[arg(long = "h", value_name = "FILE")]
        h_elem: PathBuf,
    },
    /// Quartic -> form -> quartic round trip.
    Roundtrip {
        #[arg(long)]
        quartic: PathBuf,
    },
    /// Transform a quartic by an invertible rational 3x3 matrix
    /// (JSON [[...],[...],[...]] of rational strings).
    ChangeBasis {
        #[arg(long)]
        quartic: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Order of the closure of a generator set (default: bundled Klein
    /// generators).
    GroupOrder {
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(long, default_value_t = autgroup::DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Check a group preserves a quartic, recording every scalar.
    GroupPreserves {
        #[arg(long)]
        generators: Option<PathBuf>,
        /// Defaults to the bundled Klein quartic.
        #[arg(long)]
        quartic: Option<PathBuf>,
        #[arg(long, default_value_t = autgroup::DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Multiplicity of the trivial representation in a module.
    GroupMultiplicity {
        #[arg(long)]
        generators: Option<PathBuf>,
        /// b, a, s2a-det-b, s4b, det-a or det-b.
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = autgroup::DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Basis of the trivial-isotypic subspace of a module.
    GroupInvariants {
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = autgroup::DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// One theta constant at a period matrix (char "m1,m2,m3;n1,n2,n3").
    Theta {
        #[arg(long)]
        tau: PathBuf,
        #[arg(long = "char", value_name = "CHAR")]
        characteristic: String,
    },
    /// chi18, the product of the 36 even theta constants.
    Chi18 {
        #[arg(long)]
        tau: PathBuf,
    },
    /// The minimal even theta null and the hyperelliptic-candidate flag.
    MinNull {
        #[arg(long)]
        tau: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
    /// Modulus law of a symplectic transformation.
    TransformCheck {
        #[arg(long)]
        tau: PathBuf,
        #[arg(long, value_enum)]
        kind: TransformArg,
        /// Integer symmetric shift (JSON 3x3), default E11; translation only.
        #[arg(long)]
        shift: Option<PathBuf>,
    },
    /// Slope of -log|chi18| against 2 pi t along tau + i t E_jj.
    CuspOrder {
        #[arg(long)]
        tau: PathBuf,
        /// Comma-separated increasing samples, default 1.0..4.0 step 0.5.
        #[arg(long)]
        t_samples: Option<String>,
        /// Diagonal direction j (0, 1 or 2).
        #[arg(long, default_value_t = 0)]
        direction: usize,
    },
    /// Full Klein-quartic verification suite.
    KleinVerify,
    /// Full cohomology verification suite.
    CohoVerify {
        /// Random equivariance trials.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Full chi18 verification suite.
    Chi18Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformArg {
    Translation,
    Inversion,
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }
}

fn load_quartic(path: &PathBuf) -> Result<quartic::QuarticCoefficients, Error> {
    let text = read_input(path)?;
    let parsed: quartic::QuarticJson = serde_json::from_str(&text)?;
    parse_quartic(&parsed.monomials)
}

fn load_degree_two(path: &PathBuf) -> Result<quartic::DegreeTwoElement, Error> {
    let text = read_input(path)?;
    let parsed: quartic::DegreeTwoJson = serde_json::from_str(&text)?;
    quartic::parse_degree_two(&parsed)
}

fn load_tau(path: &PathBuf) -> Result<PeriodMatrix, Error> {
    let text = read_input(path)?;
    let parsed: TauJson = serde_json::from_str(&text)?;
    PeriodMatrix::from_json(&parsed)
}

fn load_group(
    generators: &Option<PathBuf>,
    cap: usize,
) -> Result<autgroup::MatrixGroup, Error> {
    match generators {
        None => autgroup::klein_group(),
        Some(path) => {
            let text = read_input(path)?;
            let parsed: autgroup::GeneratorsJson = serde_json::from_str(&text)?;
            let gens = autgroup::parse_generators(&parsed)?;
            autgroup::closure(&gens, cap)
        }
    }
}

fn load_rational_matrix(path: &PathBuf) -> Result<ceresa_core::multilinear::Mat<ceresa_core::exactnum::Rational>, Error> {
    let text = read_input(path)?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&text)?;
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
        return Err(Error::DimensionMismatch("expected a 3x3 matrix".into()));
    }
    let mut m = ceresa_core::multilinear::Mat::zeros(3, 3);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, ceresa_core::exactnum::parse_rational(s)?);
        }
    }
    Ok(m)
}

fn emit(cli: &Cli, value: serde_json::Value) -> Result<(), Error> {
    let text = match cli.format {
        FormatArg::Json => serde_json::to_string_pretty(&value)? + "\n",
        FormatArg::Text => render_text(&value),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Plain-text rendering: key/value lines, matrices row per line.
fn render_text(value: &serde_json::Value) -> String {
    fn walk(v: &serde_json::Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            serde_json::Value::Object(map) => {
                for (k, val) in map {
                    match val {
                        serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(val, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                    }
                }
            }
            serde_json::Value::Array(items) => {
                for item in items {
                    match item {
                        serde_json::Value::Array(row)
                            if row.iter().all(|x| !x.is_array() && !x.is_object()) =>
                        {
                            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                            out.push_str(&format!("{pad}[{}]\n", cells.join(", ")));
                        }
                        serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                            walk(item, indent + 1, out)
                        }
                        _ => out.push_str(&format!("{pad}- {item}\n")),
                    }
                }
            }
            _ => out.push_str(&format!("{pad}{v}\n")),
        }
    }
    let mut s = String::new();
    walk(value, 0, &mut s);
    s
}

fn suite_output(cli: &Cli, suite: &VerifySuite) -> Result<bool, Error> {
    match cli.format {
        FormatArg::Json => emit(cli, serde_json::to_value(suite)?)?,
        FormatArg::Text => {
            let mut s = String::new();
            s.push_str(&format!("suite: {} (version {})\n", suite.suite, suite.version));
            s.push_str(&format!(
                "config: eps={:e} precision={}{} seed={}\n",
                suite.config.eps,
                suite.config.precision,
                if suite.config.precision_from_env { " (env)" } else { "" },
                suite.config.seed
            ));
            for r in &suite.reports {
                render_report_line(&mut s, r);
            }
            s.push_str(&format!(
                "result: {}\n",
                if suite.all_passed { "PASS" } else { "FAIL" }
            ));
            match &cli.out {
                Some(path) => std::fs::write(path, s)
                    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?,
                None => print!("{s}"),
            }
        }
    }
    Ok(suite.all_passed)
}

fn render_report_line(s: &mut String, r: &VerificationReport) {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    let timing = r
        .runtime_ms
        .map(|ms| format!(" [{ms} ms]"))
        .unwrap_or_default();
    s.push_str(&format!(
        "[{verdict}] {}{}\n        expected: {} ({})\n        computed: {}\n",
        r.check, timing, r.expected, r.provenance, r.computed
    ));
}

fn config_from(cli: &Cli, trials: usize) -> RunConfig {
    let defaults = RunConfig::default();
    let (precision, precision_from_env) = match cli.precision {
        Some(p) => (p, false),
        None => (defaults.precision, defaults.precision_from_env),
    };
    RunConfig {
        eps: cli.eps,
        precision,
        precision_from_env,
        seed: cli.seed,
        trials,
        format: match cli.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Text => OutputFormat::Text,
        },
        timings: cli.timings,
        ..defaults
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Complex { p } => {
            let ps: Vec<u8> = match p.as_str() {
                "all" => vec![0, 1, 2],
                other => vec![other
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad p `{other}`")))?],
            };
            for &pv in &ps {
                if pv > 2 {
                    return Err(Error::Invalid("p must be 0, 1 or 2".into()));
                }
            }
            let reports: Vec<_> = ps.iter().map(|&pv| complex_report(pv)).collect();
            emit(cli, json!({ "complexes": reports }))?;
            Ok(true)
        }
        Command::Qc { quartic } => {
            let f = load_quartic(quartic)?;
            emit(cli, serde_json::to_value(qc_matrix(&f))?)?;
            Ok(true)
        }
        Command::Rc { h_elem } => {
            let h = load_degree_two(h_elem)?;
            emit(cli, serde_json::to_value(rc_matrix(&h))?)?;
            Ok(true)
        }
        Command::Dc { quartic, h_elem } => {
            let f = load_quartic(quartic)?;
            let h = load_degree_two(h_elem)?;
            emit(cli, serde_json::to_value(dc_matrix(&f, &h))?)?;
            Ok(true)
        }
        Command::Roundtrip { quartic } => {
            let f = load_quartic(quartic)?;
            let q = qc_matrix(&f);
            let back = quartic_from_form(&q)?;
            let ok = back == f;
            emit(
                cli,
                json!({
                    "form": serde_json::to_value(&q)?,
                    "recovered": serde_json::to_value(quartic_to_json(&back))?,
                    "roundtrip_exact": ok,
                }),
            )?;
            Ok(ok)
        }
        Command::ChangeBasis { quartic, matrix } => {
            let f = load_quartic(quartic)?;
            let g = load_rational_matrix(matrix)?;
            let (fg, transported) = change_coordinates(&f, &g)?;
            emit(
                cli,
                json!({
                    "quartic": serde_json::to_value(quartic_to_json(&fg))?,
                    "transported_form": serde_json::to_value(&transported)?,
                    "det_g": format_rational(&g.det()),
                }),
            )?;
            Ok(true)
        }
        Command::GroupOrder { generators, cap } => {
            let group = load_group(generators, *cap)?;
            emit(cli, json!({ "order": group.order() }))?;
            Ok(true)
        }
        Command::GroupPreserves {
            generators,
            quartic,
            cap,
        } => {
            let group = load_group(generators, *cap)?;
            let f = match quartic {
                Some(p) => load_quartic(p)?,
                None => autgroup::klein_quartic()?,
            };
            let cert = autgroup::preserves_quartic(&group, &f);
            let scalars: Vec<serde_json::Value> = cert
                .scalars
                .iter()
                .map(|s| match s {
                    Some(c) => json!(c.to_strings().to_vec()),
                    None => json!(null),
                })
                .collect();
            emit(
                cli,
                json!({
                    "preserved": cert.preserved,
                    "all_scalars_one": cert.all_scalars_one,
                    "scalars": scalars,
                }),
            )?;
            Ok(cert.preserved)
        }
        Command::GroupMultiplicity {
            generators,
            module,
            cap,
        } => {
            let group = load_group(generators, *cap)?;
            let m = GModule::parse(module)?;
            let mult = autgroup::trivial_multiplicity(&group, m)?;
            emit(
                cli,
                json!({
                    "module": m.name(),
                    "order": group.order(),
                    "trivial_multiplicity": mult.to_string(),
                }),
            )?;
            Ok(true)
        }
        Command::GroupInvariants {
            generators,
            module,
            cap,
        } => {
            let group = load_group(generators, *cap)?;
            let m = GModule::parse(module)?;
            let basis = autgroup::invariant_subspace(&group, m);
            let vectors: Vec<Vec<Vec<String>>> = basis
                .iter()
                .map(|v| v.iter().map(|c| c.to_strings().to_vec()).collect())
                .collect();
            emit(
                cli,
                json!({
                    "module": m.name(),
                    "dimension": basis.len(),
                    "basis": vectors,
                }),
            )?;
            Ok(true)
        }
        Command::Theta {
            tau,
            characteristic,
        } => {
            let t = load_tau(tau)?;
            let alpha = ThetaChar::parse(characteristic)?;
            let config = config_from(cli, 0);
            let v = theta_constant(&alpha, &t, config.precision_eps())?;
            emit(
                cli,
                json!({
                    "char": alpha.label(),
                    "even": alpha.is_even(),
                    "value": { "re": v.value.re, "im": v.value.im },
                    "abs": v.value.norm(),
                    "eps": v.eps,
                    "radius": v.radius,
                }),
            )?;
            Ok(true)
        }
        Command::Chi18 { tau } => {
            let t = load_tau(tau)?;
            let v = chi18(&t, cli.eps)?;
            emit(
                cli,
                json!({
                    "value": { "re": v.value.re, "im": v.value.im },
                    "abs": v.value.norm(),
                    "error_bound": v.error_bound,
                }),
            )?;
            Ok(true)
        }
        Command::MinNull { tau, threshold } => {
            let t = load_tau(tau)?;
            let config = config_from(cli, 0);
            let m = min_theta_null(&t, config.precision_eps(), *threshold)?;
            emit(
                cli,
                json!({
                    "char": m.characteristic.label(),
                    "modulus": m.modulus,
                    "threshold": threshold,
                    "hyperelliptic_candidate": m.hyperelliptic_candidate,
                }),
            )?;
            Ok(true)
        }
        Command::TransformCheck { tau, kind, shift } => {
            let t = load_tau(tau)?;
            let k = match kind {
                TransformArg::Inversion => TransformKind::Inversion,
                TransformArg::Translation => {
                    let b = match shift {
                        Some(path) => {
                            let text = read_input(path)?;
                            serde_json::from_str::<[[i64; 3]; 3]>(&text)?
                        }
                        None => [[1, 0, 0], [0, 0, 0], [0, 0, 0]],
                    };
                    TransformKind::Translation(b)
                }
            };
            let r = transform_check(&t, &k, cli.eps.min(1e-11))?;
            emit(cli, serde_json::to_value(&r)?)?;
            Ok(true)
        }
        Command::CuspOrder {
            tau,
            t_samples,
            direction,
        } => {
            let t = load_tau(tau)?;
            let ts: Vec<f64> = match t_samples {
                Some(s) => s
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse()
                            .map_err(|_| Error::Invalid(format!("bad sample `{x}`")))
                    })
                    .collect::<Result<_, _>>()?,
                None => (0..7).map(|k| 1.0 + 0.5 * k as f64).collect(),
            };
            let fit = cusp_order_along(&t, *direction, &ts, cli.eps.max(1e-9))?;
            emit(cli, serde_json::to_value(&fit)?)?;
            Ok(true)
        }
        Command::KleinVerify => {
            let config = config_from(cli, 20);
            let suite = verify::klein_verify(&config);
            suite_output(cli, &suite)
        }
        Command::CohoVerify { trials } => {
            let config = config_from(cli, *trials);
            let suite = verify::coho_verify(&config);
            suite_output(cli, &suite)
        }
        Command::Chi18Verify => {
            let config = config_from(cli, 20);
            let suite = verify::chi18_verify(&config);
            suite_output(cli, &suite)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
