use std::io::Write;

use novp::cli::{run, RANK_CAP_ENV};

fn main() {
    let out = run(std::env::args_os(), std::env::var(RANK_CAP_ENV).ok());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
