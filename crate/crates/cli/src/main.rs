use clap::{Parser, Subcommand};
use freeknot_cli::appendix::{parse_appendix_csv, reproduce_appendix};
use freeknot_cli::output::{render_distribution, Format};
use freeknot_cli::verify::{self, FamilyKeys};
use freeknot_cli::{cache, data_path, load_reference};
use freeknot_core::classify::{Identified, ReferenceTable};
use freeknot_core::diagram::{parse_diagram_file, FreeDiagram};
use freeknot_core::enumerate::{decimal_string, distribution_from_tally};
use freeknot_core::formulas::bounds_series;
use freeknot_core::polynomial::parse_poly;
use freeknot_core::tangle::{make_21n, make_2n, make_foil, make_kn, rational_closure};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "freeknot", version, about = "exact resultant-knot enumeration for free knot diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Cache directory for assignment tallies
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Crossing budget for composite classes in the reference table
    #[arg(long, global = true, default_value_t = 9)]
    composite_budget: u32,
    /// Signed PD corpus (default: shipped data/rolfsen_pd.txt)
    #[arg(long, global = true)]
    pd_data: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all crossing assignments of a diagram file
    Enumerate { file: PathBuf },
    /// Generate a twist-family shape and enumerate it
    ///
    /// Kinds: `foil N`, `2n N`, `kn K N`, `21n N`; or `--word "2 1 5"`.
    Family {
        kind: Option<String>,
        params: Vec<i64>,
        /// Space-separated Conway word for a general rational closure
        #[arg(long)]
        word: Option<String>,
    },
    /// Enumerate every corpus shape and compare with the percentage table
    ReproduceAppendix {
        /// Percentage table (default: shipped data/appendix.csv)
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Check the family counting formulas against exhaustive enumeration
    VerifyFormulas {
        /// Formula-only evaluation horizon
        #[arg(long, default_value_t = 25)]
        n_max: i64,
    },
    /// Emit the conjectured trefoil-probability envelope as CSV
    BoundsPlot { n_max: i64 },
    /// Identify a Jones polynomial (in the bracket variable A)
    ClassifyJones {
        poly: String,
        /// Also print the polynomial in t = A^-4
        #[arg(long)]
        t: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("--jobs must be at least 1");
            std::process::exit(2);
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("rayon pool initialized once");
    }
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let code = match run(&cli, format) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            2
        }
    };
    std::process::exit(code);
}

fn reference(cli: &Cli) -> Result<(std::collections::BTreeMap<String, FreeDiagram>, ReferenceTable), String> {
    let path = cli.pd_data.clone().unwrap_or_else(|| data_path("rolfsen_pd.txt"));
    load_reference(&path, cli.composite_budget)
}

fn report_shape(
    cli: &Cli,
    format: Format,
    label: &str,
    d: &FreeDiagram,
) -> Result<i32, String> {
    let (_, table) = reference(cli)?;
    let tally = cache::tally_cached(d, cli.cache.as_deref());
    let dist = distribution_from_tally(d.canonical_form(), d.crossing_count(), &tally, &table)
        .map_err(|e| e.to_string())?;
    println!("{}", render_distribution(label, &dist, &table, format)?);
    Ok(0)
}

fn run(cli: &Cli, format: Format) -> Result<i32, String> {
    match &cli.command {
        Command::Enumerate { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let parsed = parse_diagram_file(&text).map_err(|e| e.to_string())?;
            let label = parsed
                .name
                .unwrap_or_else(|| file.file_stem().unwrap_or_default().to_string_lossy().into_owned());
            report_shape(cli, format, &label, &parsed.diagram)
        }
        Command::Family { kind, params, word } => {
            let (label, d) = family_shape(kind.as_deref(), params, word.as_deref())?;
            report_shape(cli, format, &label, &d)
        }
        Command::ReproduceAppendix { table } => {
            let (shapes, reference_table) = reference(cli)?;
            let table_path = table.clone().unwrap_or_else(|| data_path("appendix.csv"));
            let text = std::fs::read_to_string(&table_path)
                .map_err(|e| format!("cannot read {}: {e}", table_path.display()))?;
            let rows = parse_appendix_csv(&text).map_err(|e| e.to_string())?;
            let reports =
                reproduce_appendix(&rows, &shapes, &reference_table).map_err(|e| e.to_string())?;
            let mut failures = 0;
            for r in &reports {
                if r.pass() {
                    println!("PASS {}", r.name);
                } else {
                    failures += 1;
                    for m in &r.mismatches {
                        println!(
                            "FAIL {} {}: expected {}, got {}",
                            r.name, m.column, m.expected, m.got
                        );
                    }
                }
            }
            println!("{} rows, {} failures", reports.len(), failures);
            Ok(if failures == 0 { 0 } else { 1 })
        }
        Command::VerifyFormulas { n_max } => {
            let mut keys = FamilyKeys::new();
            let mut checks = Vec::new();
            checks.extend(verify::verify_foils(&[3, 5, 7, 9, 11], &mut keys));
            checks.extend(verify::verify_two_n(&[1, 2, 3, 4, 5, 6, 7, 8], &mut keys));
            checks.extend(verify::verify_kn(
                &[(2, 2), (2, 4), (4, 2), (4, 4), (2, 6), (3, 2), (3, 4), (5, 2), (3, 6)],
                9,
            ));
            checks.extend(verify::verify_twoonen(&[1, 3, 5, 7], &mut keys));
            checks.extend(verify::verify_recursive());
            checks.extend(verify::formula_only_rows(*n_max));
            let mut failures = 0;
            for c in &checks {
                let enumerated = c.enumerated.as_deref().unwrap_or("-");
                let status = if c.pass { "PASS" } else { "FAIL" };
                println!("{status} {} [{}] formula={} enumerated={enumerated}", c.theorem, c.parameter, c.formula);
                if !c.pass {
                    failures += 1;
                }
            }
            println!("{} checks, {} failures", checks.len(), failures);
            Ok(if failures == 0 { 0 } else { 1 })
        }
        Command::BoundsPlot { n_max } => {
            let rows = bounds_series(*n_max).map_err(|e| e.to_string())?;
            println!("n,foil_trefoil_probability,two_n_trefoil_probability");
            for row in rows {
                println!("{},{},{}", row.n, decimal_string(&row.upper), decimal_string(&row.lower));
            }
            Ok(0)
        }
        Command::ClassifyJones { poly, t } => {
            let p = parse_poly(poly)?;
            let (_, table) = reference(cli)?;
            if *t {
                match p.to_t_string() {
                    Some(s) => println!("t-form: {s}"),
                    None => println!("t-form: not a knot polynomial (exponents not multiples of 4)"),
                }
            }
            match table.identify(&p) {
                Identified::Class(c) => {
                    println!("{} (crossing number {})", c.name, c.crossing_number);
                    Ok(0)
                }
                Identified::Unidentified(p) => {
                    println!("unidentified: {p}");
                    Ok(1)
                }
            }
        }
    }
}

fn family_shape(
    kind: Option<&str>,
    params: &[i64],
    word: Option<&str>,
) -> Result<(String, FreeDiagram), String> {
    if let Some(word) = word {
        let entries: Vec<i64> = word
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad word entry {t:?}")))
            .collect::<Result<_, _>>()?;
        if entries.is_empty() {
            return Err("empty tangle word".into());
        }
        let (d, _) = rational_closure(&entries).map_err(|e| e.to_string())?;
        return Ok((format!("word {}", word.trim()), d));
    }
    let need = |k: usize| -> Result<(), String> {
        if params.len() == k {
            Ok(())
        } else {
            Err(format!("expected {k} parameter(s)"))
        }
    };
    match kind {
        Some("foil") => {
            need(1)?;
            Ok((format!("foil {}", params[0]), make_foil(params[0]).map_err(|e| e.to_string())?))
        }
        Some("2n") => {
            need(1)?;
            Ok((format!("2n {}", params[0]), make_2n(params[0]).map_err(|e| e.to_string())?))
        }
        Some("kn") => {
            need(2)?;
            Ok((
                format!("kn {} {}", params[0], params[1]),
                make_kn(params[0], params[1]).map_err(|e| e.to_string())?,
            ))
        }
        Some("21n") => {
            need(1)?;
            Ok((format!("21n {}", params[0]), make_21n(params[0]).map_err(|e| e.to_string())?))
        }
        Some(other) => Err(format!("unknown family kind {other:?} (foil, 2n, kn, 21n)")),
        None => Err("family needs a kind (foil, 2n, kn, 21n) or --word".into()),
    }
}
