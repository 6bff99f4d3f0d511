use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kunneth::catalog::{load_catalog, parse_two_form, Catalog, CatalogEntry, CatalogSource};
use kunneth::connection::{canonical_connection, curvature, ricci};
use kunneth::exterior::KForm;
use kunneth::expr::parse_vector_list;
use kunneth::kernel::fmt_rational;
use kunneth::report::{Format, Report, Section};
use kunneth::search::{search_bilagrangian, SearchConfig, SearchStatus, Strategy};
use kunneth::symplectic::{is_symplectic, verify_bilagrangian, BiLagrangianStructure, SymplecticVerdict};
use kunneth::tables;
use kunneth::{Error, Subspace};

#[derive(Parser)]
#[command(name = "kunneth", version, about = "Bi-Lagrangian structures on nilpotent Lie algebras, checked exactly")]
struct Cli {
    /// Output format: json, csv or md.
    #[arg(long, global = true, default_value = "md", value_parser = parse_format)]
    format: Format,

    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries.
    List,
    /// Show one entry.
    Show { name: String },
    /// Betti numbers of one entry, or of every six-dimensional entry.
    Betti {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
    /// Check that a form is symplectic and a pair of subalgebras is bi-Lagrangian.
    Check {
        name: String,
        /// Symplectic form, e.g. `16+25+34`.
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        /// Basis of F, e.g. `e1, e3, e5`.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Basis of G.
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
    },
    /// Canonical connection on the adapted basis of the witness.
    Connection { name: String },
    /// Curvature and Ricci tensor of the canonical connection.
    Curvature { name: String },
    /// Verify the parametric lemma identities.
    Lemmas {
        #[arg(long)]
        id: Option<String>,
    },
    /// Search for a bi-Lagrangian pair.
    Search {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        height: u32,
        #[arg(long, default_value = "echelonGrid", value_parser = parse_strategy)]
        strategy: Strategy,
    },
    /// Reproduce every table and identity.
    VerifyTables,
}

fn parse_format(s: &str) -> Result<Format, String> {
    Format::parse(s).ok_or_else(|| format!("unknown format `{s}` (json, csv, md)"))
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    Strategy::parse(s).ok_or_else(|| format!("unknown strategy `{s}` (coordinateFirst, echelonGrid, random)"))
}

enum Failure {
    /// Bad input: unknown names, parse errors.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn omega_of(e: &CatalogEntry, given: Option<&str>) -> Result<KForm, Failure> {
    match given {
        Some(s) => parse_two_form(s.trim(), e.dim)
            .map_err(|err| Failure::Usage(format!("--omega `{s}`: column {}: {}", err.column, err.message))),
        None => e
            .omega
            .clone()
            .ok_or_else(|| Failure::Usage(format!("{} has no symplectic form in the catalog; pass --omega", e.name))),
    }
}

fn basis_of(flag: &str, src: &str, n: usize) -> Result<Subspace, Failure> {
    let vs = parse_vector_list(src, n).map_err(|err| {
        Failure::Usage(format!(
            "--{flag} `{src}`: vector {}, column {}: {}",
            err.item + 1,
            err.column,
            err.message
        ))
    })?;
    Ok(Subspace::span(n, vs)?)
}

fn structure_of(e: &CatalogEntry) -> Result<BiLagrangianStructure, Failure> {
    match e.structure() {
        Some(Ok(b)) => Ok(b),
        Some(Err(err)) => Err(Failure::Usage(format!("{}: witness does not verify: {err}", e.name))),
        None => Err(Failure::Usage(format!("{} has no bi-Lagrangian witness in the catalog", e.name))),
    }
}

fn list(cat: &Catalog) -> Report {
    let mut s = Section::new("Catalog", "Algebra", &["dim", "k", "salamon", "omega", "source", "witness"]);
    let dash = || "-".to_string();
    for e in cat.entries() {
        s.row(
            e.name.clone(),
            vec![
                e.dim.to_string(),
                e.k_number.map(|k| k.to_string()).unwrap_or_else(dash),
                e.salamon_tuple().unwrap_or_else(dash),
                e.omega.as_ref().map(|w| w.to_token()).unwrap_or_else(dash),
                e.source.map(|s| s.as_str().to_string()).unwrap_or_else(dash),
                if e.witness.is_some() { "yes" } else { "no" }.into(),
            ],
        );
    }
    let mut r = Report::new();
    r.push(s);
    r.push(tables::catalog_section(cat));
    r
}

fn show(e: &CatalogEntry) -> Report {
    let mut s = Section::new(e.name.clone(), "Field", &["value"]);
    let vecs = |vs: &[kunneth::Vector]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
    s.row("aliases", vec![e.aliases().join("; ")]);
    s.row("dim", vec![e.dim.to_string()]);
    s.row("d alpha", vec![format!("({})", e.dalpha_tokens.join(","))]);
    if let Some(t) = e.salamon_tuple() {
        s.row("salamon", vec![t]);
    }
    if let Some(w) = &e.omega {
        s.row("omega", vec![w.to_token()]);
    }
    if let Some(src) = e.source {
        s.row("source", vec![src.as_str().into()]);
    }
    if let Some(w) = &e.witness {
        s.row("F", vec![vecs(&w.f)]);
        s.row("G", vec![vecs(&w.g)]);
    }
    if let Some(f) = e.expected_flat {
        s.row("flat", vec![f.to_string()]);
    }
    let mut br = Section::new("Brackets", "[x, y]", &["value"]);
    let g = e.algebra();
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let v = g.bracket_basis(i, j);
            if !v.is_zero() {
                br.row(format!("[e{}, e{}]", i + 1, j + 1), vec![v.to_string()]);
            }
        }
    }
    let mut r = Report::new();
    r.push(s);
    r.push(br);
    r
}

fn check(e: &CatalogEntry, omega: Option<&str>, f: Option<&str>, g: Option<&str>) -> Result<Report, Failure> {
    let w = omega_of(e, omega)?;
    let alg = e.algebra();
    let mut s = Section::new(format!("Check {}", e.name), "Condition", &["holds"]);
    let verdict = is_symplectic(alg, &w)?;
    s.row("omega", vec![w.to_token()]);
    s.row("closed", vec![(verdict != SymplecticVerdict::NotClosed).to_string()]);
    s.row("non-degenerate", vec![(verdict != SymplecticVerdict::Degenerate).to_string()]);
    if verdict != SymplecticVerdict::Yes {
        s.fail(format!("omega is not symplectic ({verdict:?})"));
    }
    let pair = match (f, g) {
        (Some(f), Some(g)) => Some((basis_of("f", f, e.dim)?, basis_of("g", g, e.dim)?)),
        (None, None) => e.witness_subspaces(),
        _ => return Err(Failure::Usage("pass both --f and --g, or neither".into())),
    };
    if let Some((fs, gs)) = pair {
        let rep = verify_bilagrangian(alg, &w, &fs, &gs);
        for (label, ok) in [
            ("F subalgebra", rep.f_subalgebra),
            ("G subalgebra", rep.g_subalgebra),
            ("F Lagrangian", rep.f_lagrangian),
            ("G Lagrangian", rep.g_lagrangian),
            ("complementary", rep.complementary),
        ] {
            s.row(label, vec![ok.to_string()]);
        }
        for why in rep.failures() {
            s.fail(why);
        }
    }
    let mut r = Report::new();
    r.push(s.checked());
    Ok(r)
}

fn connection(e: &CatalogEntry) -> Result<Report, Failure> {
    let b = structure_of(e)?;
    let c = canonical_connection(&b);
    let basis = c.basis();
    let mut s = Section::new(format!("Canonical connection of {}", e.name), "nabla(x, y)", &["value"]);
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let v = c.entry(i, j);
            if !v.is_zero() {
                s.row(format!("nabla({}, {})", basis[i], basis[j]), vec![v.to_string()]);
            }
        }
    }
    let mut r = Report::new();
    r.push(s);
    Ok(r)
}

fn curvature_report(e: &CatalogEntry) -> Result<Report, Failure> {
    let b = structure_of(e)?;
    let c = canonical_connection(&b);
    let r = curvature(b.algebra(), &c);
    let basis = r.basis().to_vec();
    let mut s = Section::new(format!("Curvature of {}", e.name), "R(x, y) z", &["value"]);
    for (i, j, k) in r.nonzero() {
        if i < j {
            s.row(
                format!("R({}, {}) {}", basis[i], basis[j], basis[k]),
                vec![r.on_basis(i, j, k).to_string()],
            );
        }
    }
    let flat = r.is_zero();
    s.row("flat", vec![flat.to_string()]);
    let ric = ricci(&r);
    let mut rs = Section::new(format!("Ricci tensor of {}", e.name), "Ric(x, y)", &["value"]);
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            rs.row(format!("Ric({}, {})", basis[i], basis[j]), vec![fmt_rational(ric.get(i, j))]);
        }
    }
    if let Some(x) = e.expected_flat {
        if x != flat {
            s.fail(format!("catalog says flat = {x}, computed flat = {flat}"));
        }
    }
    if !ric.is_zero() {
        rs.fail("Ricci tensor is nonzero");
    }
    let mut out = Report::new();
    out.push(s.checked());
    out.push(rs.checked());
    Ok(out)
}

fn search(e: &CatalogEntry, omega: Option<&str>, cfg: SearchConfig) -> Result<Report, Failure> {
    let w = omega_of(e, omega)?;
    let out = search_bilagrangian(e.algebra(), &w, &cfg)?;
    let mut s = Section::new(format!("Search on {}", e.name), "Field", &["value"]);
    s.row("omega", vec![w.to_token()]);
    s.row("strategy", vec![cfg.strategy.as_str().into()]);
    s.row("seed", vec![cfg.seed.to_string()]);
    s.row("budget", vec![cfg.budget.to_string()]);
    s.row("height", vec![cfg.height.to_string()]);
    let status = match out.status {
        SearchStatus::Found => "found".to_string(),
        SearchStatus::BudgetExhausted => "budget exhausted".to_string(),
        SearchStatus::GridExhausted { height } => format!("grid exhausted at height {height}"),
    };
    s.row("status", vec![status]);
    s.row("candidates tried", vec![out.candidates_tried.to_string()]);
    let st = out.stats;
    for (label, n) in [
        ("rejected: not a subalgebra", st.not_subalgebra),
        ("rejected: nilpotency filter", st.nilpotent_filter),
        ("rejected: not Lagrangian", st.not_lagrangian),
        ("rejected: no complement", st.no_complement),
        ("complements tried", st.complements_tried),
    ] {
        s.row(label, vec![n.to_string()]);
    }
    match &out.found {
        Some(b) => {
            let vecs = |x: &Subspace| x.basis().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
            s.row("F", vec![vecs(b.f())]);
            s.row("G", vec![vecs(b.g())]);
            s = s.checked();
        }
        None => s.fail("no witness found (this is not a proof of non-existence)"),
    }
    let mut r = Report::new();
    r.push(s);
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let loaded;
    let cat: &Catalog = match &cli.catalog {
        Some(p) => {
            loaded = load_catalog(CatalogSource::Path(p))?;
            &loaded
        }
        None => kunneth::catalog::builtin(),
    };
    Ok(match &cli.command {
        Command::List => list(cat),
        Command::Show { name } => show(cat.entry(name)?),
        Command::Betti { name, all } => {
            let s = match (name, all) {
                (Some(n), false) => tables::betti_section([cat.entry(n)?]),
                (None, true) => tables::betti_section(cat.entries().iter().filter(|e| e.dim == 6)),
                _ => return Err(Failure::Usage("pass an algebra name or --all".into())),
            };
            let mut r = Report::new();
            r.push(s);
            r
        }
        Command::Check { name, omega, f, g } => check(cat.entry(name)?, omega.as_deref(), f.as_deref(), g.as_deref())?,
        Command::Connection { name } => connection(cat.entry(name)?)?,
        Command::Curvature { name } => curvature_report(cat.entry(name)?)?,
        Command::Lemmas { id } => {
            let mut r = Report::new();
            r.push(tables::lemma_section(cat, id.as_deref())?);
            r
        }
        Command::Search {
            name,
            omega,
            seed,
            budget,
            height,
            strategy,
        } => search(
            cat.entry(name)?,
            omega.as_deref(),
            SearchConfig {
                seed: *seed,
                budget: *budget,
                height: *height,
                strategy: *strategy,
            },
        )?,
        Command::VerifyTables => tables::verify_tables(cat),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut text = report.render(cli.format);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                for f in report.failures() {
                    eprintln!("FAIL {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
