use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fibercoh::script::{RunOptions, Session};

/// Run a fibercoh session script and write one JSON file per command.
#[derive(Parser, Debug)]
#[command(name = "fibercoh", version)]
struct Args {
    /// session script
    #[arg(long)]
    script: PathBuf,
    /// seed for every randomized step; recorded in each output
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// accepted for script compatibility; commands run on one thread
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// extra degrees added around computed windows
    #[arg(long, default_value_t = 0)]
    window_slack: i64,
    /// highest power used by rational-map limit estimates
    #[arg(long)]
    power_cutoff: Option<usize>,
    /// also write CSV tables where a command has one
    #[arg(long)]
    csv: bool,
    /// print the normalized script and exit
    #[arg(long)]
    format: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.threads == 0 {
        eprintln!("fibercoh: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let text = match fs::read_to_string(&args.script) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("fibercoh: cannot read {}: {e}", args.script.display());
            return ExitCode::from(2);
        }
    };
    let session = match Session::from_text(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("fibercoh: {}: {e}", args.script.display());
            return ExitCode::from(2);
        }
    };
    if args.format {
        print!("{}", session.script);
        return ExitCode::SUCCESS;
    }
    if session.script.commands.is_empty() {
        return ExitCode::SUCCESS;
    }
    if let Err(e) = fs::create_dir_all(&args.out) {
        eprintln!("fibercoh: cannot create {}: {e}", args.out.display());
        return ExitCode::from(2);
    }
    let opts = RunOptions { seed: args.seed, window_slack: args.window_slack, power_cutoff: args.power_cutoff };
    let mut failed = 0;
    for out in session.run(&opts) {
        let path = args.out.join(format!("{}.json", out.stem));
        let body = serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n";
        if let Err(e) = fs::write(&path, body) {
            eprintln!("fibercoh: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
        if let (true, Some(csv)) = (args.csv, &out.csv) {
            let p = args.out.join(format!("{}.csv", out.stem));
            if let Err(e) = fs::write(&p, csv) {
                eprintln!("fibercoh: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        match &out.error {
            Some(e) => {
                failed += 1;
                eprintln!("{}: error: {e}", out.stem);
            }
            None => println!("{}: ok", out.stem),
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
