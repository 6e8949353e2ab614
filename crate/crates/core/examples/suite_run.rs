//! Run a named suite with a config overlay and print the CSV summary.

use bch_resum::suite::{all_pass, render_csv, run_suite, RunConfig};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "identities".into());
    let mut cfg = RunConfig::overlay("version = 1\ntrials = 10\ncap.identity_52 = 6\n").unwrap();
    cfg.jobs = 1;
    let reports = run_suite(&name, &cfg).unwrap();
    print!("{}", render_csv(&reports));
    println!("all pass: {}", all_pass(&reports));
}
