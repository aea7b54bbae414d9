//! Regenerates `data/rolfsen_pd.txt` from the shipped percentage table.
//! See the `tablegen` module for how the corpus is derived and validated.

use clap::Parser;
use std::path::PathBuf;

#[derive(Parser)]
#[command(about = "derive and validate the PD corpus from the percentage table")]
struct Args {
    /// Percentage table to match against
    #[arg(long, default_value = None)]
    appendix: Option<PathBuf>,
    /// Where to write the corpus
    #[arg(long, default_value = None)]
    out: Option<PathBuf>,
    /// Print the derivation report without writing the corpus
    #[arg(long)]
    dry_run: bool,
}

fn main() {
    let args = Args::parse();
    let appendix = args.appendix.unwrap_or_else(|| freeknot_cli::data_path("appendix.csv"));
    let out = args.out.unwrap_or_else(|| freeknot_cli::data_path("rolfsen_pd.txt"));

    let text = match std::fs::read_to_string(&appendix) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", appendix.display());
            std::process::exit(2);
        }
    };
    let rows = match freeknot_cli::appendix::parse_appendix_csv(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    match freeknot_cli::tablegen::generate(&rows) {
        Ok(generated) => {
            print!("{}", generated.report);
            if args.dry_run {
                println!("dry run; corpus not written");
                return;
            }
            if let Err(e) = std::fs::write(&out, generated.pd_text) {
                eprintln!("cannot write {}: {e}", out.display());
                std::process::exit(2);
            }
            println!("wrote {}", out.display());
        }
        Err(e) => {
            eprintln!("generation failed:\n{e}");
            std::process::exit(1);
        }
    }
}
