use std::process::ExitCode;

use clap::Parser;
use core_ideals_cli::{load_spec, run_command, Command, Flags};

/// Reductions, K_n, L_n and cores of m-primary ideals over finite fields.
#[derive(Parser, Debug)]
#[command(name = "core-ideals", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Spec file describing the ring and ideals.
    spec: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Generators of the reduction J, comma separated.
    #[arg(long = "J", value_name = "GENS")]
    j: Option<String>,
    /// Ideal from the spec file to use (default I).
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long)]
    json: bool,
    /// Extension degree e of the coefficient field GF(p^e).
    #[arg(long)]
    field_ext: Option<u32>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let flags = Flags {
        n: cli.n,
        seed: cli.seed,
        repeats: cli.repeats,
        window: cli.window,
        t_max: cli.t_max,
        n_max: cli.n_max,
        j: cli.j,
        ideal: cli.ideal,
    };
    let result = load_spec(&cli.spec, cli.field_ext).and_then(|spec| run_command(cli.command, &spec, &flags));
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
