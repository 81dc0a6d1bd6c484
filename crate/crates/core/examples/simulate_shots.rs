//! Sample detector blocks two ways: with the full Pauli-frame simulator and
//! with the fault-table sampler, then round-trip one through the binary
//! record format.

use std::sync::Arc;

use pinball::circuit::{simulate_shot, Circuit, DetectorBlock, FaultSampler};
use pinball::{build_lattice, NoiseModel};

pub fn main() {
    let (d, p) = (5, 2e-3);
    let lat = build_lattice(d).unwrap();
    let noise = NoiseModel::si1000(p).unwrap();

    let frame = simulate_shot(&lat, &noise, d, 42).unwrap();
    println!("frame simulator: defects {:?} logical flip {}", frame.defects(), frame.logical_flip);

    let circuit = Circuit::new(Arc::new(lat), d).unwrap();
    let sampler = FaultSampler::new(d, d, circuit.enumerate_single_faults(&noise));
    println!("fault table sampler: {:.3} faults per block on average", sampler.mean_faults());
    for shot in 0..3 {
        let b = sampler.sample_shot(7, shot);
        println!("shot {shot}: {} defects, flip {}", b.defects().len(), b.logical_flip);
    }

    let block = sampler.sample_shot(7, 0);
    let mut bytes = Vec::new();
    block.write_record(0, &mut bytes).unwrap();
    let (shot, back) = DetectorBlock::read_record(d, d, &bytes[..]).unwrap().unwrap();
    assert_eq!((shot, &back), (0, &block));
    println!("record of {} bytes round-trips", bytes.len());
}
