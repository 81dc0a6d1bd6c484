//! Every example must run to completion.

#[path = "../examples/compare_predecoders.rs"]
mod compare_predecoders;
#[path = "../examples/decoding_graph.rs"]
mod decoding_graph;
#[path = "../examples/energy_model.rs"]
mod energy_model;
#[path = "../examples/error_chains.rs"]
mod error_chains;
#[path = "../examples/lattice_schedule.rs"]
mod lattice_schedule;
#[path = "../examples/monte_carlo_run.rs"]
mod monte_carlo_run;
#[path = "../examples/mwpm_decode.rs"]
mod mwpm_decode;
#[path = "../examples/pinball_pipeline.rs"]
mod pinball_pipeline;
#[path = "../examples/simulate_shots.rs"]
mod simulate_shots;

#[test]
fn example_lattice_schedule() {
    lattice_schedule::main();
}

#[test]
fn example_simulate_shots() {
    simulate_shots::main();
}

#[test]
fn example_decoding_graph() {
    decoding_graph::main();
}

#[test]
fn example_pinball_pipeline() {
    pinball_pipeline::main();
}

#[test]
fn example_compare_predecoders() {
    compare_predecoders::main();
}

#[test]
fn example_mwpm_decode() {
    mwpm_decode::main();
}

#[test]
fn example_monte_carlo_run() {
    monte_carlo_run::main();
}

#[test]
fn example_energy_model() {
    energy_model::main();
}

#[test]
fn example_error_chains() {
    error_chains::main();
}
