//! Decode sampled blocks with minimum-weight perfect matching and check the
//! correction against the block's own syndrome.

use pinball::harness::CodeSetup;
use pinball::matching::MatchingDecoder;

pub fn main() {
    let setup = CodeSetup::new(5, 5e-3).unwrap();
    let decoder = MatchingDecoder::new(&setup.graph).unwrap();
    let lat = &setup.lattice;
    let mut failures = 0;
    let shots = 500;
    for shot in 0..shots {
        let block = setup.sampler.sample_shot(3, shot);
        let out = decoder.decode(&block).unwrap();
        assert_eq!(lat.x_syndrome_of(out.correction_qubits()), block.spatial_parity());
        failures += usize::from(out.predicted_flip != block.logical_flip);
        if shot < 3 {
            println!(
                "shot {shot}: {} defects, weight {:.2}, correction {:?}",
                out.defects.len(),
                out.weight,
                out.correction_qubits()
            );
        }
    }
    println!("{failures} logical failures in {shots} blocks");
}
