use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wb_core::bbf::{gram_matrix, make_symplectic, torus_standard_basis, GramMode};
use wb_core::dga::{cohomology, Slot, StructureModel, Theory};
use wb_core::exterior::{Bidegree, Form};
use wb_core::grass::{alpha_order, pluecker_curve};
use wb_core::parse::parse_form;
use wb_core::workbench::{
    list_scenarios, load_model, load_scenarios, run_custom, run_many, Report, EXIT_ERROR,
};

#[derive(Parser)]
#[command(
    name = "wb",
    version,
    about = "Exact invariant-form calculations on compact complex models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Run a scenario, or `all`.
    Run(RunArgs),
    /// Model file utilities.
    Model {
        #[command(subcommand)]
        command: ModelCommand,
    },
    /// Beauville-Bogomolov-Fujiki form utilities.
    Bbf {
        #[command(subcommand)]
        command: BbfCommand,
    },
    /// Dimension and representatives of one cohomology group.
    Cohomology(CohomologyArgs),
    /// Degree of the Plücker curve for one n or a range `a-b`.
    GrassDegree {
        #[arg(long)]
        n: String,
    },
}

#[derive(Args)]
struct RunArgs {
    id: String,
    #[arg(long)]
    json: bool,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Read scenarios from this file instead of the built-in set.
    #[arg(long)]
    scenarios: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Parse and validate a model file.
    Check { path: PathBuf },
}

#[derive(Subcommand)]
enum BbfCommand {
    /// Gram matrix of the BBF form.
    Gram(GramArgs),
}

#[derive(Args)]
struct GramArgs {
    path: PathBuf,
    #[arg(long)]
    sigma: String,
    /// Substitute V = 1/(mu mub).
    #[arg(long)]
    normalized: bool,
    #[arg(long, default_value = "oracle")]
    mode: GramMode,
    /// Semicolon-separated basis forms (default: the standard torus basis,
    /// or de Rham H^2 representatives).
    #[arg(long)]
    basis: Option<String>,
}

#[derive(Args)]
struct CohomologyArgs {
    path: PathBuf,
    #[arg(long)]
    theory: Theory,
    #[arg(long, conflicts_with = "bidegree")]
    degree: Option<usize>,
    /// `p,q`
    #[arg(long)]
    bidegree: Option<String>,
    #[arg(long)]
    json: bool,
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_ERROR as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (id, description) in list_scenarios() {
                println!("{id:<18} {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
        Command::Model {
            command: ModelCommand::Check { path },
        } => match load_model(&path) {
            Ok(m) => {
                print!("{}", model_summary(&m));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                ExitCode::from(1)
            }
        },
        Command::Bbf {
            command: BbfCommand::Gram(args),
        } => match gram(args) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Cohomology(args) => match cohomology_cmd(args) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::GrassDegree { n } => match grass(&n) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}

fn run(args: RunArgs) -> ExitCode {
    let reports: Vec<Report> = match &args.scenarios {
        Some(path) => {
            let scenarios = match load_scenarios(path) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let chosen: Vec<_> = scenarios
                .iter()
                .filter(|s| args.id == "all" || s.id == args.id)
                .collect();
            if chosen.is_empty() {
                return fail(format!("unknown scenario `{}`", args.id));
            }
            chosen.into_iter().map(run_custom).collect()
        }
        None => {
            let ids: Vec<&str> = if args.id == "all" {
                list_scenarios().into_iter().map(|(id, _)| id).collect()
            } else {
                vec![args.id.as_str()]
            };
            match run_many(&ids, args.timing) {
                Ok(r) => r,
                Err(e) => return fail(e),
            }
        }
    };
    if args.json {
        if reports.len() == 1 {
            println!("{}", reports[0].to_json());
        } else {
            let items: Vec<String> = reports.iter().map(Report::to_json).collect();
            println!("[\n{}\n]", items.join(",\n"));
        }
    } else {
        for r in &reports {
            print!("{}", r.to_text());
        }
    }
    let code = reports
        .iter()
        .map(Report::exit_code)
        .find(|c| *c != 0)
        .unwrap_or(0);
    ExitCode::from(code as u8)
}

fn model_summary(m: &StructureModel) -> String {
    let alg = m.algebra();
    let mut out = format!(
        "model {}: {} generators ({} holomorphic, {} antiholomorphic), valid\n",
        m.name(),
        alg.len(),
        alg.holomorphic_count(),
        alg.antiholomorphic_count()
    );
    for (pos, g) in alg.generators().iter().enumerate() {
        let d = m.differential(pos);
        if !d.is_zero() {
            out.push_str(&format!("  d{} = {}\n", g.name, d));
        }
    }
    if m.has_zero_differential() {
        out.push_str("  all differentials vanish\n");
    }
    out
}

fn parse_basis(text: &str, m: &StructureModel) -> Result<Vec<Form>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_form(s, m.algebra()).map_err(|e| format!("basis form `{s}`: {e}")))
        .collect()
}

fn gram(args: GramArgs) -> Result<String, String> {
    let m = load_model(&args.path).map_err(|e| e.to_string())?;
    let sigma = parse_form(&args.sigma, m.algebra()).map_err(|e| format!("--sigma: {e}"))?;
    let s = make_symplectic(&m, &sigma).map_err(|e| e.to_string())?;
    let basis = match &args.basis {
        Some(b) => parse_basis(b, &m)?,
        None if m.has_zero_differential() && m.algebra().has_full_conjugation() => {
            torus_standard_basis(&m)
        }
        None => cohomology(&m, Theory::DeRham, Slot::Degree(2))
            .map_err(|e| e.to_string())?
            .basis
            .clone(),
    };
    let mut g = gram_matrix(&s, &basis, args.mode).map_err(|e| e.to_string())?;
    if args.normalized {
        g = g.normalized(&s);
    }
    let mut out = format!("mu = {}\n", s.mu());
    for (i, row) in g.entries.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("{}: [{}]\n", basis[i], cells.join(", ")));
    }
    Ok(out)
}

fn cohomology_cmd(args: CohomologyArgs) -> Result<String, String> {
    let m = load_model(&args.path).map_err(|e| e.to_string())?;
    let slot = match (args.degree, &args.bidegree) {
        (Some(k), None) => Slot::Degree(k),
        (None, Some(b)) => {
            let parts: Vec<&str> = b.split(',').map(str::trim).collect();
            let parsed: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse::<usize>()).collect();
            match parsed.as_deref() {
                Ok([p, q]) => Slot::Bidegree(Bidegree::new(*p, *q)),
                _ => return Err(format!("--bidegree expects `p,q`, got `{b}`")),
            }
        }
        _ => return Err("pass exactly one of --degree and --bidegree".into()),
    };
    let r = cohomology(&m, args.theory, slot).map_err(|e| e.to_string())?;
    if args.json {
        let basis: Vec<String> = r.basis.iter().map(|f| format!("\"{f}\"")).collect();
        return Ok(format!(
            "{{\"model\": \"{}\", \"theory\": \"{}\", \"slot\": \"{}\", \"dimension\": {}, \"basis\": [{}]}}\n",
            m.name(),
            r.theory,
            r.slot,
            r.dimension,
            basis.join(", ")
        ));
    }
    let mut out = format!(
        "{} {} cohomology in {}: dimension {}\n",
        m.name(),
        r.theory,
        r.slot,
        r.dimension
    );
    for f in &r.basis {
        out.push_str(&format!("  {f}\n"));
    }
    Ok(out)
}

fn grass(arg: &str) -> Result<String, String> {
    let range = match arg.split_once('-') {
        Some((a, b)) => {
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| format!("bad range `{arg}`"))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| format!("bad range `{arg}`"))?;
            a..=b
        }
        None => {
            let n: usize = arg.trim().parse().map_err(|_| format!("bad n `{arg}`"))?;
            n..=n
        }
    };
    let mut out = String::from("n  degree  order_at_alpha=0\n");
    for n in range {
        let c = pluecker_curve(n).map_err(|e| e.to_string())?;
        let d = c.degree().map_err(|e| e.to_string())?;
        let o = alpha_order(&c.distinguished()).unwrap_or(0);
        out.push_str(&format!("{n:<2} {d:<7} {o}\n"));
    }
    Ok(out)
}
