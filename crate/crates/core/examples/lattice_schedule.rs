//! Build a rotated surface code lattice, check its CNOT schedule and print
//! the layout with the schedule of one bulk X plaquette.
//!
//! `cargo run --example lattice_schedule -- 5`

use pinball::lattice::{build_lattice, AncillaId};

pub fn main() {
    let d = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let lat = build_lattice(d).expect("odd distance in 3..=25");
    lat.validate_schedule().expect("schedule is valid");
    println!("d={d}: {} data, {} X and {} Z ancillas", lat.num_data(), lat.num_x(), lat.num_z());
    print!("{}", lat.dump());
    let bulk = lat.x_ancillas().iter().position(|a| a.data_qubits().count() == 4).unwrap();
    for (t, q, dir) in lat.cnot_schedule(AncillaId::x(bulk)).unwrap() {
        println!("timestep {t}: data {:?} {dir:?}", lat.data_coords(q));
    }
}
