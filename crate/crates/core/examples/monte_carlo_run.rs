//! A small sweep driven by a flat configuration, printed as CSV.

use pinball::config::RunConfig;
use pinball::harness::run_experiment;

pub fn main() {
    let cfg = RunConfig::parse_str(
        "d = 3, 5\n\
         p = 1e-3\n\
         shots = 5000\n\
         predecoder = pinball, clique, none\n\
         seed = 2024\n",
    )
    .unwrap();
    let report = run_experiment(&cfg).unwrap();
    print!("{}", report.to_csv());
}
