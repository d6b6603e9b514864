use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use weylnet::chiral::{
    chiral_sigma, dalembert, dalembert_inverse_functions, sigma_infinity, sigma_minus, sigma_plus,
};
use weylnet::chiral::chiral_regularizers;
use weylnet::exact::{fmt_q, parse_q};
use weylnet::funcspace::Interval;
use weylnet::nets::{diagram_check, gauge_apply, locality_report, sector_apply, GaugeElement, NetKind, SectorAutomorphism};
use weylnet::registry_file::{load_default, load_path, parse_vector, GridOverride};
use weylnet::sample::{random_member, random_word, rng};
use weylnet::states::{eval_state, gram_psd, StateSpec, TOL_HERMITIAN};
use weylnet::symplectic::{regularizer_label, Regularizer, Registry, SpaceKind, SymVector};
use weylnet::weyl::{format_element, parse_element, WeylElement};
use weylnet::Error;
use weylnet_cli::suites::{run_suite, tol_scale_from_env, Context};

#[derive(Parser)]
#[command(name = "weylnet", version, about = "Weyl algebra, charged sectors and local nets at desk scale")]
struct Cli {
    /// Generator registry file; the built-in default when omitted
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Seed of the pseudo-random generator (ChaCha8)
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the JSON output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the number of grid points
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Override the grid half-width
    #[arg(long, global = true)]
    window: Option<f64>,
    /// Suite to run when no subcommand is given
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite (see --suite)
    Run,
    /// Evaluate states
    #[command(subcommand)]
    State(StateCmd),
    /// d'Alembert decomposition into chiral movers
    #[command(subcommand)]
    Chiral(ChiralCmd),
    /// Nets, sectors and gauge action
    #[command(subcommand)]
    Net(NetCmd),
}

#[derive(Subcommand)]
enum StateCmd {
    /// ω(A) for an element literal
    Eval {
        #[arg(long, default_value = "field")]
        state: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Regularizing element; the registry's canonical one when omitted
        #[arg(long)]
        regularizer: Option<String>,
    },
    /// Gram matrix ω(A_i* A_j) over `;`-separated words or random ones
    Gram {
        #[arg(long, default_value = "field")]
        state: String,
        #[arg(long, allow_hyphen_values = true)]
        words: Option<String>,
        #[arg(long, default_value_t = 20)]
        random: usize,
        #[arg(long)]
        regularizer: Option<String>,
    },
}

#[derive(Subcommand)]
enum ChiralCmd {
    /// Decompose and reconstruct a vector
    Roundtrip {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// σ split into σ₊ + σ₋ + σ_∞
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
}

#[derive(Subcommand)]
enum NetCmd {
    /// σ over generator pairs of two disjoint intervals
    Locality {
        #[arg(long)]
        kind: String,
        /// `a,b` with rational endpoints such as `-5/2,3`
        #[arg(long, allow_hyphen_values = true)]
        i1: String,
        #[arg(long, allow_hyphen_values = true)]
        i2: String,
    },
    /// Apply ρ_F = ad W(F) localized in an interval
    Sector {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Apply the gauge element (n, r)
    Gauge {
        #[arg(long, allow_hyphen_values = true)]
        n: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// ψ_T and fixed-point clauses for T localized in an interval
    Diagram {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
    },
}

/// Input problems exit with 2, failed checks and domain errors with 1.
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse { .. } | Error::InvalidKey(_) | Error::UnknownGenerator(_) | Error::BadGrid(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let over = GridOverride {
        points: cli.grid_points,
        window: cli.window,
    };
    let (loaded, source) = match &cli.registry {
        Some(p) => (load_path(p, over), p.display().to_string()),
        None if cli.grid_points.is_some() || cli.window.is_some() => (
            weylnet::registry_file::parse_registry(weylnet::registry_file::DEFAULT_REGISTRY, None, over),
            "default".to_string(),
        ),
        None => (load_default(), "default".to_string()),
    };
    let loaded = loaded.map_err(|e| Failure::Input(format!("registry: {e}")))?;
    let tol_scale = tol_scale_from_env().map_err(Failure::Input)?;
    let ctx = Context::new(loaded, cli.seed, tol_scale, &source);

    let (value, ok) = match &cli.cmd {
        None | Some(Cmd::Run) => {
            let report = run_suite(&ctx, &cli.suite).map_err(Failure::Input)?;
            eprintln!(
                "suite {}: {} pass, {} fail, {} skip in {:.2?}",
                report.suite, report.summary.pass, report.summary.fail, report.summary.skip, report.duration
            );
            for c in report.checks.iter().filter(|c| !c.passed()) {
                eprintln!("  {:?}: {} (measured {:?}, tolerance {:e})", c.status, c.name, c.measured, c.tolerance);
            }
            emit(cli, &report.to_json())?;
            return Ok(report.all_passed());
        }
        Some(Cmd::State(s)) => state(&ctx, s)?,
        Some(Cmd::Chiral(c)) => chiral(&ctx, c)?,
        Some(Cmd::Net(n)) => net(&ctx, n)?,
    };
    let mut text = serde_json::to_string_pretty(&value).expect("json value serializes");
    text.push('\n');
    emit(cli, &text)?;
    Ok(ok)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Check(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn interval(s: &str) -> Result<Interval, Failure> {
    let bad = || Failure::Input(format!("interval `{s}` is not of the form a,b"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let (a, b) = (parse_q(a).ok_or_else(bad)?, parse_q(b).ok_or_else(bad)?);
    Ok(Interval::new(a, b)?)
}

fn regularizer(reg: &mut Registry, ctx: &Context, lit: &Option<String>) -> Result<Regularizer, Failure> {
    let t = match lit {
        Some(s) => parse_vector(reg, s)?,
        None => ctx.regularizer_vector()?,
    };
    let label = regularizer_label(reg, &t);
    Ok(Regularizer::new(reg, &t, &label)?)
}

fn state_spec(reg: &mut Registry, ctx: &Context, name: &str, lit: &Option<String>) -> Result<StateSpec, Failure> {
    Ok(match name {
        "fock" => StateSpec::Fock,
        "nonregular" => StateSpec::NonRegularElementary(regularizer(reg, ctx, lit)?),
        "field" => StateSpec::Field(regularizer(reg, ctx, lit)?),
        "product" => StateSpec::Product(regularizer(reg, ctx, lit)?),
        "chiral-vacuum" => {
            let t = regularizer(reg, ctx, lit)?.t;
            let (sp, sm) = chiral_regularizers(reg, &t)?;
            StateSpec::chiral_vacuum(sp, sm)?
        }
        other => {
            return Err(Failure::Input(format!(
                "unknown state `{other}`; expected fock, nonregular, field, product or chiral-vacuum"
            )))
        }
    })
}

fn state(ctx: &Context, cmd: &StateCmd) -> Result<(Value, bool), Failure> {
    let mut reg = ctx.reg.clone();
    match cmd {
        StateCmd::Eval {
            state,
            element,
            regularizer,
        } => {
            let spec = state_spec(&mut reg, ctx, state, regularizer)?;
            let a = parse_element(&reg, element)?;
            let v = eval_state(&reg, &spec, &a)?;
            Ok((
                json!({ "state": spec.name(), "element": format_element(&reg, &a), "value": cx(v) }),
                true,
            ))
        }
        StateCmd::Gram {
            state,
            words,
            random,
            regularizer,
        } => {
            let spec = state_spec(&mut reg, ctx, state, regularizer)?;
            let ws: Vec<WeylElement> = match words {
                Some(s) => s.split(';').map(|w| parse_element(&reg, w)).collect::<Result<_, _>>()?,
                None => {
                    let mut g = rng(ctx.seed);
                    let kinds: &[SpaceKind] = match spec {
                        StateSpec::Fock | StateSpec::ChiralVacuum { .. } => &[SpaceKind::Va],
                        _ => &[SpaceKind::Vf, SpaceKind::Vb, SpaceKind::Vc, SpaceKind::Vq],
                    };
                    let mut keys: Vec<SymVector> = Vec::new();
                    for k in kinds {
                        for _ in 0..4 {
                            keys.push(random_member(&mut g, &reg, *k, 3)?);
                        }
                    }
                    (0..*random).map(|_| random_word(&mut g, &keys, 3)).collect()
                }
            };
            let rep = gram_psd(&reg, &spec, &ws)?;
            let psd = rep.min_eigenvalue >= -1e-8 * rep.norm;
            let herm = rep.hermiticity_defect < TOL_HERMITIAN;
            let matrix: Vec<Vec<Value>> = (0..ws.len())
                .map(|i| (0..ws.len()).map(|j| cx(rep.matrix[(i, j)])).collect())
                .collect();
            Ok((
                json!({
                    "state": spec.name(),
                    "words": ws.iter().map(|w| format_element(&reg, w)).collect::<Vec<_>>(),
                    "min_eigenvalue": rep.min_eigenvalue,
                    "norm": rep.norm,
                    "hermiticity_defect": rep.hermiticity_defect,
                    "positive": psd,
                    "hermitian": herm,
                    "matrix": matrix,
                }),
                psd && herm,
            ))
        }
    }
}

fn chiral(ctx: &Context, cmd: &ChiralCmd) -> Result<(Value, bool), Failure> {
    let reg = &ctx.reg;
    match cmd {
        ChiralCmd::Roundtrip { vector } => {
            let f = parse_vector(reg, vector)?;
            let p = dalembert(reg, &f)?;
            let (f0, f1) = reg.materialize(&f)?;
            let (g0, g1, c) = dalembert_inverse_functions(&p)?;
            let err = f0.max_abs_diff(&g0).max(f1.max_abs_diff(&g1));
            let ch = reg.charges(&f, None)?;
            let (ip, im) = p.at_infinity();
            let ok = err < ctx.quad(1e-8) && c == ch.c;
            Ok((
                json!({
                    "vector": reg.format(&f),
                    "c_plus": fmt_q(&p.c_plus),
                    "c_minus": fmt_q(&p.c_minus),
                    "theta_at_infinity": [fmt_q(&ip), fmt_q(&im)],
                    "F_c": fmt_q(&ch.c),
                    "F_q": fmt_q(&ch.q),
                    "max_error": err,
                    "passed": ok,
                }),
                ok,
            ))
        }
        ChiralCmd::Decompose { f, g } => {
            let (f, g) = (parse_vector(reg, f)?, parse_vector(reg, g)?);
            let (pf, pg) = (dalembert(reg, &f)?, dalembert(reg, &g)?);
            let s = reg.sigma(&f, &g)?;
            let split = chiral_sigma(&pf, &pg)?;
            let ok = (s - split).abs() < ctx.quad(1e-5);
            Ok((
                json!({
                    "sigma": s,
                    "sigma_plus": sigma_plus(&pf.theta_plus, &pg.theta_plus)?,
                    "sigma_minus": sigma_minus(&pf.theta_minus, &pg.theta_minus)?,
                    "sigma_infinity": sigma_infinity(&pf, &pg),
                    "sum": split,
                    "residual": s - split,
                    "passed": ok,
                }),
                ok,
            ))
        }
    }
}

fn net(ctx: &Context, cmd: &NetCmd) -> Result<(Value, bool), Failure> {
    let reg = &ctx.reg;
    match cmd {
        NetCmd::Locality { kind, i1, i2 } => {
            let kind: NetKind = kind.parse()?;
            let rep = locality_report(reg, kind, &interval(i1)?, &interval(i2)?)?;
            let pairs: Vec<Value> = rep
                .pairs
                .iter()
                .map(|p| json!({ "f": p.f, "g": p.g, "sigma": p.sigma, "closed_form": p.closed_form, "bounded": p.bounded }))
                .collect();
            Ok((
                json!({
                    "kind": kind.to_string(),
                    "expected_local": kind.expected_local(),
                    "pairs": pairs,
                    "max_abs_sigma": rep.max_abs_sigma,
                    "max_abs_sigma_bounded": rep.max_abs_sigma_bounded,
                    "max_closed_form_error": rep.max_closed_form_error,
                    "passed": rep.passed,
                }),
                rep.passed,
            ))
        }
        NetCmd::Sector { f, interval: i, element } => {
            let rho = SectorAutomorphism::new(reg, parse_vector(reg, f)?, interval(i)?)?;
            let a = parse_element(reg, element)?;
            let out = sector_apply(reg, &rho, &a)?;
            Ok((
                json!({ "f": reg.format(&rho.f), "interval": rho.interval.display(), "element": format_element(reg, &a), "image": format_element(reg, &out) }),
                true,
            ))
        }
        NetCmd::Gauge { n, r, element } => {
            let a = parse_element(reg, element)?;
            let out = gauge_apply(reg, &GaugeElement::Group { n: *n, r: *r }, &a)?;
            Ok((
                json!({ "n": n, "r": r, "element": format_element(reg, &a), "image": format_element(reg, &out) }),
                true,
            ))
        }
        NetCmd::Diagram { t, interval: i } => {
            let mut reg = reg.clone();
            let t = parse_vector(&reg, t)?;
            let rep = diagram_check(&mut reg, &t, &interval(i)?)?;
            let clauses: Vec<Value> = rep
                .clauses
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "measured": c.measured, "informational": c.informational }))
                .collect();
            Ok((json!({ "clauses": clauses, "passed": rep.passed() }), rep.passed()))
        }
    }
}
