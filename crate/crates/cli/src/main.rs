//! `liyorke`: analyze atomic systems, build certificates, run the gallery.
//!
//! Exit codes: 0 success, 1 I/O or schema error (or a failing gallery
//! entry), 2 implication-audit or replay violation, 3 no witness within the
//! search budget.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use liyorke::atom::parse_atom_list;
use liyorke::audit::audit_implications;
use liyorke::constructions::{
    build_irregular_vector, build_ly6_set, build_wandering, scrambled_pairs, IndexSearch, DEFAULT_MAX_INDEX,
};
use liyorke::error::Error;
use liyorke::lp::{orbit_norms, SimpleFunction};
use liyorke::oracle::Direction;
use liyorke::report;
use liyorke::shift::{check_weighted_shift, ShiftRule, WeightedShift};
use liyorke::spec_file::{export_spec, parse_exact, parse_spec, SystemSpec};
use liyorke::system::Space;
use liyorke::{gallery, Atom, Exponent, Rational};

#[derive(Parser)]
#[command(name = "liyorke", version, about = "Li-Yorke chaos of composition operators on atomic L^p spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Orbit horizon.
    #[arg(long, default_value_t = 64)]
    horizon: u64,
    /// Exponent p, `a` or `a/b`.
    #[arg(long, default_value = "1")]
    p: Exponent,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide every applicable criterion and audit the implications. A stored
    /// report is re-audited instead.
    Analyze {
        spec: PathBuf,
        /// Set for the sufficient conditions (i) and (ii), e.g. `{(0,0)}`.
        #[arg(long)]
        set: Option<String>,
        /// Also write `n ↦ ‖T^n χ_B‖^p` for the `--set` as CSV.
        #[arg(long, requires = "set")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a constructive proof and emit its certificate.
    Construct {
        spec: PathBuf,
        #[arg(long)]
        what: What,
        /// Source set `B`.
        #[arg(long, default_value = "0")]
        set: String,
        /// Number of translates of the wandering set.
        #[arg(long, default_value_t = 5)]
        j: usize,
        /// Number of index pairs of the LY6 set.
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Bound on `μ(B ∖ W)` for the wandering builders.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, value_enum, default_value_t = Search::Exact)]
        search: Search,
        #[arg(long, default_value_t = DEFAULT_MAX_INDEX)]
        max_index: u64,
        /// Irregular vector: members `B_i`; `cells:<row>` gives `{(i,row)}`,
        /// `points` gives `{i}`, `atoms` every table atom. Defaults by space.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 64)]
        family_size: i64,
        #[arg(long, default_value = "1/16")]
        tol_down: String,
        #[arg(long, default_value = "4")]
        bound_up: String,
        #[arg(long, default_value_t = 3)]
        min_interleavings: usize,
        /// Scalars of the Li-Yorke pairs `(aφ, bφ)`, comma separated.
        #[arg(long, default_value = "1,2,3")]
        scalars: String,
        /// Write the orbit-norm trace of the irregular vector as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run gallery entries against their expected tables.
    Gallery {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        name: Option<String>,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide Li-Yorke chaos of a two-sided weighted backward shift.
    Shift {
        /// `w ≡ c`.
        #[arg(long, group = "rule")]
        constant: Option<String>,
        /// `left,right`: `w_n = left` for `n < 0`, `right` for `n ≥ 0`.
        #[arg(long, group = "rule")]
        log_linear: Option<String>,
        /// `left;window;start;right` with comma-separated periods.
        #[arg(long, group = "rule")]
        periodic: Option<String>,
        /// Weights `μ({i})/μ({i+1})` of a two-sided shift spec.
        #[arg(long, group = "rule")]
        spec: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the spec of a gallery entry.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    BackwardWandering,
    ForwardWandering,
    Ly6Set,
    Irregular,
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    Exact,
    Expansion,
}

struct Fail {
    code: u8,
    message: String,
}

impl Fail {
    fn input(message: impl Into<String>) -> Self {
        Fail {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoWitnessTimes { .. } | Error::BudgetExhausted { .. } => 3,
            _ => 1,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<u8, Fail>;

fn read(path: &PathBuf) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn write_text(path: &PathBuf, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

/// A closed pipe (`| head`) is not an error.
fn print_text(text: &str) -> Result<(), Fail> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Fail::input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn emit(out: &Option<PathBuf>, v: &Value) -> Result<(), Fail> {
    let text = report::to_text(v);
    match out {
        Some(path) => write_text(path, &text),
        None => print_text(&text),
    }
}

fn load(path: &PathBuf) -> Result<SystemSpec<Rational>, Fail> {
    let text = read(path)?;
    parse_spec(&text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn scalar(field: &str, s: &str) -> Result<Rational, Fail> {
    parse_exact(s).ok_or_else(|| Fail::input(format!("--{field}: invalid rational `{s}`")))
}

fn scalars(field: &str, s: &str) -> Result<Vec<Rational>, Fail> {
    s.split(',').map(|t| scalar(field, t.trim())).collect()
}

fn atoms(field: &str, s: &str) -> Result<Vec<Atom>, Fail> {
    parse_atom_list(s).map_err(|e| Fail::input(format!("--{field}: {e}")))
}

fn analyze(spec_path: &PathBuf, set: Option<String>, csv: Option<PathBuf>, common: Common) -> CliResult {
    let text = read(spec_path)?;
    if report::is_report(&text) {
        let (spec, statuses) =
            report::read_report::<Rational>(&text).map_err(|e| Fail::input(format!("{}: {e}", spec_path.display())))?;
        let violations = audit_implications(&statuses, &spec.system.flags);
        for v in &violations {
            eprintln!("audit: {v}");
        }
        return Ok(if violations.is_empty() { 0 } else { 2 });
    }
    let mut spec = parse_spec::<Rational>(&text).map_err(|e| Fail::input(format!("{}: {e}", spec_path.display())))?;
    if let Some(s) = &set {
        spec.cor1_set = Some(atoms("set", s)?);
    }
    let full = gallery::full_report(&spec.system, common.horizon, spec.cor1_set.as_deref())?;
    let analysis = report::analyze(&spec.system, full);
    emit(&common.out, &report::analysis_json(&spec, common.horizon, &analysis))?;
    if let (Some(path), Some(set)) = (csv, &spec.cor1_set) {
        let phi = SimpleFunction::indicator(&spec.system, set, common.p)?;
        write_text(&path, &orbit_norms(&spec.system, &phi, common.horizon)?.to_csv())?;
    }
    for (c, e) in &analysis.replay_failures {
        eprintln!("replay {c}: {e}");
    }
    for v in &analysis.violations {
        eprintln!("audit: {v}");
    }
    Ok(if analysis.violations.is_empty() && analysis.replay_failures.is_empty() {
        0
    } else {
        2
    })
}

fn irregular_family(spec: &SystemSpec<Rational>, family: Option<&str>, size: i64) -> Result<Vec<Vec<Atom>>, Fail> {
    let sys = &spec.system;
    let default = match &sys.space {
        Space::Table(_) => "atoms",
        Space::Line { .. } | Space::Chain { .. } => "points",
        _ => "cells:0",
    };
    let family = family.unwrap_or(default);
    let members: Vec<Vec<Atom>> = if family == "atoms" {
        match &sys.space {
            Space::Table(t) => t.entries().keys().map(|a| vec![*a]).collect(),
            _ => return Err(Fail::input("--family atoms needs a table system")),
        }
    } else if family == "points" {
        (1..=size).map(|i| vec![Atom::Point(i)]).collect()
    } else if let Some(row) = family.strip_prefix("cells:") {
        let row: i64 = row.parse().map_err(|_| Fail::input(format!("--family: bad row `{row}`")))?;
        (1..=size).map(|i| vec![Atom::Cell(i, row)]).collect()
    } else {
        return Err(Fail::input(format!("--family: unknown family `{family}`")));
    };
    Ok(members.into_iter().filter(|b| b.iter().all(|a| sys.contains(a))).collect())
}

#[allow(clippy::too_many_arguments)]
fn construct(
    spec_path: &PathBuf,
    what: What,
    set: &str,
    j: usize,
    k: usize,
    delta: Option<String>,
    search: Search,
    max_index: u64,
    family: Option<String>,
    family_size: i64,
    tol_down: &str,
    bound_up: &str,
    min_interleavings: usize,
    scalar_list: &str,
    csv: Option<PathBuf>,
    common: Common,
) -> CliResult {
    let spec = load(spec_path)?;
    let sys = &spec.system;
    let search = match search {
        Search::Exact => IndexSearch::Exact,
        Search::Expansion => IndexSearch::Expansion,
    };
    let b = atoms("set", set)?;
    let v = match what {
        What::BackwardWandering | What::ForwardWandering => {
            let dir = if matches!(what, What::BackwardWandering) {
                Direction::Backward
            } else {
                Direction::Forward
            };
            let delta = delta.map(|d| scalar("delta", &d)).transpose()?;
            let c = build_wandering(sys, dir, &b, j, delta, search, max_index)?;
            report::wandering_json(sys, &c)
        }
        What::Ly6Set => report::ly6_set_json(sys, &build_ly6_set(sys, &b, k, search, max_index)?),
        What::Irregular => {
            let fam = irregular_family(&spec, family.as_deref(), family_size)?;
            let tol = scalar("tol-down", tol_down)?;
            let up = scalar("bound-up", bound_up)?;
            let c = build_irregular_vector(sys, &fam, common.horizon, tol, up, common.p, min_interleavings)?;
            let pairs = scrambled_pairs(sys, &c, &scalars("scalars", scalar_list)?)?;
            if let Some(path) = &csv {
                write_text(path, &c.trace.to_csv())?;
            }
            report::irregular_json(sys, &c, Some(&pairs))
        }
    };
    emit(&common.out, &v)?;
    Ok(0)
}

fn run_gallery(name: Option<String>, common: Common) -> CliResult {
    let names: Vec<String> = match name {
        Some(n) => vec![n],
        None => gallery::list_entries().into_iter().map(String::from).collect(),
    };
    let mut entries = Vec::new();
    for n in &names {
        entries.push(gallery::run_entry(n, common.horizon)?);
    }
    for e in &entries {
        eprintln!("{}: {}", e.name, if e.passed() { "pass" } else { "FAIL" });
    }
    emit(&common.out, &report::gallery_json(&entries))?;
    Ok(if entries.iter().all(|e| e.passed()) { 0 } else { 1 })
}

fn shift_rule(
    constant: Option<String>,
    log_linear: Option<String>,
    periodic: Option<String>,
    spec: Option<PathBuf>,
) -> Result<ShiftRule<Rational>, Fail> {
    if let Some(c) = constant {
        let w = scalar("constant", &c)?;
        return Ok(ShiftRule::LogLinear { left: w.clone(), right: w });
    }
    if let Some(s) = log_linear {
        let v = scalars("log-linear", &s)?;
        let [left, right] = <[Rational; 2]>::try_from(v).map_err(|_| Fail::input("--log-linear needs `left,right`"))?;
        return Ok(ShiftRule::LogLinear { left, right });
    }
    if let Some(s) = periodic {
        let parts: Vec<&str> = s.split(';').collect();
        let [left, window, start, right] = <[&str; 4]>::try_from(parts)
            .map_err(|_| Fail::input("--periodic needs `left;window;start;right`"))?;
        let window = if window.trim().is_empty() {
            Vec::new()
        } else {
            scalars("periodic", window)?
        };
        let start = start
            .trim()
            .parse()
            .map_err(|_| Fail::input(format!("--periodic: bad start `{start}`")))?;
        return Ok(ShiftRule::Periodic {
            left: scalars("periodic", left)?,
            window,
            start,
            right: scalars("periodic", right)?,
        });
    }
    if let Some(path) = spec {
        let spec = load(&path)?;
        return match spec.system.line_profile() {
            Some((profile, 1)) => Ok(ShiftRule::FromProfile(profile.clone())),
            _ => Err(Fail::input("--spec must describe a two_sided_shift with step 1")),
        };
    }
    Err(Fail::input("give one of --constant, --log-linear, --periodic, --spec"))
}

fn shift(
    constant: Option<String>,
    log_linear: Option<String>,
    periodic: Option<String>,
    spec: Option<PathBuf>,
    common: Common,
) -> CliResult {
    let rule = shift_rule(constant, log_linear, periodic, spec)?;
    let shift = WeightedShift::new(rule, common.p)?;
    let v = check_weighted_shift(&shift, common.horizon)?;
    eprintln!("WSHIFT: {}", v.status);
    emit(&common.out, &report::verdict_certificate("weighted-shift", &v))?;
    Ok(0)
}

fn export(name: &str, out: Option<PathBuf>) -> CliResult {
    let e = gallery::entry(name)?;
    let cor1: Option<Vec<Atom>> = e.cor1_set.map(|v| v.iter().map(|&(i, j)| Atom::Cell(i, j)).collect());
    let text = export_spec(&(e.build)(), cor1.as_deref());
    match out {
        Some(path) => write_text(&path, &text)?,
        None => print_text(&text)?,
    }
    Ok(0)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Analyze { spec, set, csv, common } => analyze(&spec, set, csv, common),
        Command::Construct {
            spec,
            what,
            set,
            j,
            k,
            delta,
            search,
            max_index,
            family,
            family_size,
            tol_down,
            bound_up,
            min_interleavings,
            scalars,
            csv,
            common,
        } => construct(
            &spec,
            what,
            &set,
            j,
            k,
            delta,
            search,
            max_index,
            family,
            family_size,
            &tol_down,
            &bound_up,
            min_interleavings,
            &scalars,
            csv,
            common,
        ),
        Command::Gallery { name, all: _, common } => run_gallery(name, common),
        Command::Shift {
            constant,
            log_linear,
            periodic,
            spec,
            common,
        } => shift(constant, log_linear, periodic, spec, common),
        Command::Export { name, out } => export(&name, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
