//! `ramify`: character tables, ramification decisions, completeness and
//! invariant generators from the command line.
//!
//! Exit status: 0 when the answer is yes (or the command succeeded), 1 when
//! it is no, 2 on any error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use ramify::catalog;
use ramify::chartheory::representation::{self, Representation, RepresentationSpec};
use ramify::decide::{self, Analysis, CompletenessOptions, DecisionCertificate, Property};
use ramify::group::input::GroupSpec;
use ramify::group::DEFAULT_BUDGET;
use ramify::invariants::{self, FieldMode, InvariantOptions, VerifyOptions};
use ramify::{CharacterTable, Error, FiniteGroup, Subgroup};

#[derive(Parser)]
#[command(name = "ramify", version, about = "Ramification, completeness and noncommutative invariants of finite groups")]
struct Cli {
    /// Refuse groups with more elements than this.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget_elements: usize,
    /// Write the machine-readable result (JSON) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the character table.
    Chartab {
        /// Group: a JSON file, a built-in name such as S4, or catalog:ORDER:ID.
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide a ramification property, locally over a subgroup or for the
    /// whole group.
    Decide {
        group: String,
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// Subgroup for the local properties: `elements:0,3,5`,
        /// `generators:1,2`, or a bare element list.
        #[arg(long)]
        over: Option<String>,
        /// Disable the lattice shortcuts (search every candidate).
        #[arg(long)]
        no_prune: bool,
    },
    /// List the nontrivial abelian normal subgroups, usable with `--over`.
    Subgroups { group: String },
    /// Re-check a saved decision certificate against the group.
    Replay { group: String, certificate: PathBuf },
    /// Decide whether a representation is complete.
    Complete {
        group: String,
        /// A JSON file, or one of `permutation`, `standard`, `regular`.
        representation: String,
        #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
        field: FieldArg,
        #[arg(long)]
        no_prune: bool,
    },
    /// Synthesize invariant generators and optionally verify them.
    Invariants {
        group: String,
        representation: String,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        /// Check invariance on random matrix tuples.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Built-in groups and user-supplied tables (see RAMIFY_CATALOG).
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List built-in group names.
    List,
    /// Print a group description as JSON.
    Show { name: String },
    /// Load a user-supplied table and report its order and class count.
    Check { order: usize, id: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PropertyArg {
    Unramified,
    Pseudo,
    Totally,
    TotallyPseudo,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for FieldMode {
    fn from(f: FieldArg) -> FieldMode {
        match f {
            FieldArg::Real => FieldMode::Real,
            FieldArg::Complex => FieldMode::Complex,
        }
    }
}

/// A failure with the exit status it maps to.
struct Failure {
    message: String,
    detail: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { message: e.to_string(), detail: None }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { message: e.to_string(), detail: None }
    }
}

fn fail<T>(message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { message: message.into(), detail: None })
}

type Outcome = Result<bool, Failure>;

// A closed pipe (`ramify ... | head`) is not an error worth a panic.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! sayln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            if let Some(d) = f.detail {
                eprint!("{d}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Chartab { group, format } => chartab(cli, group, *format),
        Command::Decide { group, property, over, no_prune } => decide_cmd(cli, group, *property, over.as_deref(), *no_prune),
        Command::Subgroups { group } => subgroups(cli, group),
        Command::Replay { group, certificate } => replay(cli, group, certificate),
        Command::Complete { group, representation, field, no_prune } => {
            complete(cli, group, representation, *field, *no_prune)
        }
        Command::Invariants { group, representation, field, verify, trials, dim, seed, format } => {
            let vopts = verify.then_some(VerifyOptions { trials: *trials, dim: *dim, seed: *seed });
            invariants_cmd(cli, group, representation, *field, vopts, *format)
        }
        Command::Catalog { action } => catalog_cmd(cli, action),
    }
}

fn load_group(arg: &str, budget: usize) -> Result<Arc<FiniteGroup>, Failure> {
    let spec = if Path::new(arg).is_file() {
        GroupSpec::from_json(&std::fs::read_to_string(arg)?)?
    } else if let Some(rest) = arg.strip_prefix("catalog:") {
        let (order, id) = rest
            .split_once(':')
            .and_then(|(o, i)| Some((o.parse::<usize>().ok()?, i.parse::<usize>().ok()?)))
            .ok_or_else(|| Failure { message: format!("expected catalog:ORDER:ID, got {arg}"), detail: None })?;
        match catalog::user_table(order, id) {
            Some(spec) => spec?,
            None => {
                return fail(format!(
                    "no table for [{order},{id}]; set {} to a directory containing {order}_{id}.json",
                    catalog::CATALOG_ENV
                ))
            }
        }
    } else {
        match catalog::get(arg) {
            Some(spec) => spec,
            None => return fail(format!("{arg} is neither a file nor a built-in group")),
        }
    };
    Ok(Arc::new(spec.build(budget)?))
}

fn load_representation(arg: &str, g: &FiniteGroup) -> Result<(Representation, Option<Vec<String>>), Failure> {
    match arg {
        "permutation" => Ok((Representation::permutation(g)?, None)),
        "standard" => Ok((Representation::standard(g)?, None)),
        "regular" => Ok((Representation::regular(g), None)),
        path => {
            let spec = RepresentationSpec::from_json(&std::fs::read_to_string(path)?)?;
            Ok((spec.build(g)?, spec.variables.clone()))
        }
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| Failure { message: format!("bad element index {s:?}"), detail: None })
        })
        .collect()
}

fn parse_subgroup(g: &FiniteGroup, spec: &str) -> Result<Subgroup, Failure> {
    if let Some(rest) = spec.strip_prefix("generators:") {
        let gens = parse_indices(rest)?;
        if gens.iter().any(|&x| x >= g.order()) {
            return fail("generator index out of range");
        }
        return Ok(g.subgroup_generated(&gens));
    }
    let rest = spec.strip_prefix("elements:").unwrap_or(spec);
    Ok(g.subgroup_from_elements(&parse_indices(rest)?)?)
}

fn write_out(cli: &Cli, json: &str) -> Result<(), Failure> {
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{json}\n"))?;
    }
    Ok(())
}

fn chartab(cli: &Cli, group: &str, format: Format) -> Outcome {
    let g = load_group(group, cli.budget_elements)?;
    let t = CharacterTable::compute(g)?;
    let json = serde_json::to_string_pretty(&t.export()).expect("table serializes");
    match format {
        Format::Text => say!("{t}"),
        Format::Json => sayln!("{json}"),
    }
    write_out(cli, &json)?;
    Ok(true)
}

fn decide_cmd(cli: &Cli, group: &str, property: PropertyArg, over: Option<&str>, no_prune: bool) -> Outcome {
    let g = load_group(group, cli.budget_elements)?;
    let analysis = Analysis::new(g.clone())?;
    match property {
        PropertyArg::Unramified | PropertyArg::Pseudo => {
            let Some(spec) = over else {
                return fail("local properties need --over");
            };
            let n = parse_subgroup(&g, spec)?;
            let verdict = if property == PropertyArg::Unramified {
                decide::unramified_over(analysis.table(), &n)?
            } else {
                decide::pseudo_unramified_over(analysis.table(), &n)?
            };
            let name = if property == PropertyArg::Unramified { "unramified" } else { "pseudo-unramified" };
            sayln!("{name} over subgroup of order {}: {}", n.order(), if verdict.holds { "yes" } else { "no" });
            if let Some(w) = verdict.witness {
                sayln!("  witness: irreducible {w}");
            }
            let json = serde_json::json!({
                "property": name,
                "subgroup": n.elements(),
                "holds": verdict.holds,
                "witness": verdict.witness,
            });
            write_out(cli, &serde_json::to_string_pretty(&json).unwrap())?;
            Ok(verdict.holds)
        }
        PropertyArg::Totally | PropertyArg::TotallyPseudo => {
            if over.is_some() {
                return fail("--over applies only to the local properties");
            }
            let prop = if property == PropertyArg::Totally { Property::Unramified } else { Property::PseudoUnramified };
            let cert = analysis.decide_with(prop, !no_prune)?;
            say!("{cert}");
            write_out(cli, &cert.to_json())?;
            Ok(cert.holds)
        }
    }
}

fn subgroups(cli: &Cli, group: &str) -> Outcome {
    let g = load_group(group, cli.budget_elements)?;
    let mut rows = Vec::new();
    for n in g.normal_subgroups() {
        let els = n.elements();
        if n.is_trivial() || els.iter().any(|&a| els.iter().any(|&b| g.mul(a, b) != g.mul(b, a))) {
            continue;
        }
        let list = els.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        sayln!("order {}: elements:{list}", n.order());
        rows.push(els.to_vec());
    }
    write_out(cli, &serde_json::to_string_pretty(&rows).unwrap())?;
    Ok(true)
}

fn replay(cli: &Cli, group: &str, certificate: &Path) -> Outcome {
    let g = load_group(group, cli.budget_elements)?;
    let cert = DecisionCertificate::from_json(&std::fs::read_to_string(certificate)?)?;
    let ok = cert.replay(&g)?;
    sayln!("certificate {}", if ok { "valid" } else { "invalid" });
    Ok(ok)
}

fn completeness_options(field: FieldArg, no_prune: bool) -> CompletenessOptions {
    CompletenessOptions { prunes: !no_prune, real: matches!(field, FieldArg::Real), ..Default::default() }
}

fn complete(cli: &Cli, group: &str, representation: &str, field: FieldArg, no_prune: bool) -> Outcome {
    let g = load_group(group, cli.budget_elements)?;
    let analysis = Analysis::new(g.clone())?;
    let table = analysis.table();
    // The keyword actions only need their characters; building every matrix
    // of a large regular representation is wasteful.
    let chi = match representation {
        "regular" => representation::regular_character(table),
        "permutation" => representation::permutation_character(table)?,
        "standard" => representation::standard_character(table)?,
        _ => load_representation(representation, &g)?.0.character(table),
    };
    let report = analysis.is_complete_character(&chi, &completeness_options(field, no_prune))?;
    say!("{report}");
    write_out(cli, &serde_json::to_string_pretty(&report).unwrap())?;
    Ok(report.complete)
}

fn invariants_cmd(
    cli: &Cli,
    group: &str,
    representation: &str,
    field: FieldArg,
    verify: Option<VerifyOptions>,
    format: Format,
) -> Outcome {
    let g = load_group(group, cli.budget_elements)?;
    let (rep, names) = load_representation(representation, &g)?;
    let opts = InvariantOptions { field: field.into(), variables: names, ..Default::default() };
    let set = match invariants::invariant_generators(&g, &rep, &opts) {
        Ok(s) => s,
        Err(e @ Error::Unsupported(_)) => {
            let analysis = Analysis::new(g.clone())?;
            let report = analysis
                .is_complete_character(&rep.character(analysis.table()), &completeness_options(field, false))?;
            return Err(Failure { message: e.to_string(), detail: Some(report.to_string()) });
        }
        Err(e) => return Err(e.into()),
    };
    let mut json = set.to_json();
    let mut ok = true;
    let report = match &verify {
        Some(v) => {
            let r = invariants::verify_invariance(&set.generators(), &rep, v)?;
            ok = r.ok() && set.len() == set.expected_count();
            json["verification"] = serde_json::to_value(&r).unwrap();
            Some(r)
        }
        None => None,
    };
    let text = serde_json::to_string_pretty(&json).unwrap();
    match format {
        Format::Text => {
            say!("{set}");
            if let Some(r) = &report {
                sayln!(
                    "verification: {} ({} trials, {} group elements, {} generators, {} failures)",
                    if r.ok() { "pass" } else { "FAIL" },
                    r.trials,
                    r.elements,
                    r.generators,
                    r.failures.len()
                );
            }
        }
        Format::Json => sayln!("{text}"),
    }
    write_out(cli, &text)?;
    Ok(ok)
}

fn catalog_cmd(cli: &Cli, action: &CatalogAction) -> Outcome {
    match action {
        CatalogAction::List => {
            for n in catalog::names() {
                sayln!("{n}");
            }
            Ok(true)
        }
        CatalogAction::Show { name } => {
            let Some(spec) = catalog::get(name) else {
                return fail(format!("no built-in group named {name}"));
            };
            let text = serde_json::to_string_pretty(&spec).expect("group serializes");
            sayln!("{text}");
            write_out(cli, &text)?;
            Ok(true)
        }
        CatalogAction::Check { order, id } => {
            let Some(spec) = catalog::user_table(*order, *id) else {
                return fail(format!("no table for [{order},{id}] (set {})", catalog::CATALOG_ENV));
            };
            let g = spec?.build(cli.budget_elements)?;
            sayln!("[{order},{id}]: order {}, {} classes", g.order(), g.conjugacy_classes().len());
            Ok(true)
        }
    }
}
