//! Build the decoding graph from single-fault enumeration and summarize its
//! edge classes.

use std::sync::Arc;

use pinball::graph::EdgeClass;
use pinball::{build_graph, build_lattice, NoiseModel};

pub fn main() {
    let d = 5;
    let (graph, faults) = build_graph(Arc::new(build_lattice(d).unwrap()), &NoiseModel::si1000(1e-3).unwrap()).unwrap();
    println!("d={d}: {} fault outcomes, {} detectors, {} edges", faults.len(), graph.num_detectors(), graph.edges().len());
    let counts = graph.class_counts();
    for class in EdgeClass::ALL {
        println!("{:>17}: {}", class.name(), counts.get(&class).copied().unwrap_or(0));
    }
    for line in graph.dump().lines().take(6) {
        println!("{line}");
    }
}
