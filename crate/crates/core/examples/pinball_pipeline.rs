//! Build the nine-stage pipeline, then feed it a measurement error, a hook
//! error and an isolated defect.

use pinball::graph::EdgeClass;
use pinball::harness::CodeSetup;
use pinball::predecoder::block_for_edge;
use pinball::Predecoder;

pub fn main() {
    let setup = CodeSetup::new(7, 1e-3).unwrap();
    let (g, pipe) = (&setup.graph, &setup.pipeline);
    for s in pipe.stages() {
        println!("stage {:<5} {:>3} primitives", s.id.to_string(), s.primitives.len());
    }
    for class in [EdgeClass::Time, EdgeClass::Hook, EdgeClass::EdgeSpace] {
        let id = g.edges().iter().position(|e| e.class == class).unwrap() as u32;
        let out = pipe.predecode(&block_for_edge(g, id));
        println!("{:>10}: complex={} corrections={:?}", class.name(), out.complex, out.correction_qubits());
    }
    let mut lone = setup.sampler.empty_block();
    lone.set(3, setup.lattice.x_at(3, 3).unwrap(), true);
    println!("isolated bulk defect: complex={}", pipe.predecode(&lone).complex);
}
