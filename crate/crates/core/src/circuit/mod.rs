//! Z-error simulation of the X-stabilizer syndrome-extraction circuit.
//!
//! A memory experiment: data prepared in `|+>`, `rounds` rounds of syndrome
//! extraction, then a transversal X-basis readout. Detector layer 0 compares
//! the first X-ancilla outcome with its deterministic value, layers
//! `1..rounds` compare consecutive outcomes, and the last layer compares the
//! stabilizer recomputed from the data readout with the last round.

mod block;
mod faults;
mod frame;
mod noise;
mod sampler;

use std::sync::Arc;

pub use block::{DetectorBlock, HEADER_BYTES};
pub use faults::{fault_qubits, FaultEntry};
pub use frame::{inject_fault, Channel, Circuit, Fault, FaultTerm, Moment, Pauli, PauliFrame, Qubit};
pub use noise::{ChannelKind, NoiseModel};
pub use sampler::{shot_rng, FaultSampler};

use crate::error::Result;
use crate::lattice::Lattice;

/// Simulate one shot with the full frame simulator. Deterministic in `seed`.
pub fn simulate_shot(lattice: &Lattice, noise: &NoiseModel, rounds: usize, seed: u64) -> Result<DetectorBlock> {
    let circuit = Circuit::new(Arc::new(lattice.clone()), rounds)?;
    let mut rng = shot_rng(seed, 0);
    Ok(circuit.sample_frame(noise, &mut rng))
}

/// Enumerate single faults of the `d`-round memory experiment.
pub fn enumerate_single_faults(lattice: &Lattice, noise: &NoiseModel) -> Result<Vec<FaultEntry>> {
    let circuit = Circuit::new(Arc::new(lattice.clone()), lattice.distance())?;
    Ok(circuit.enumerate_single_faults(noise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, DataId};
    use rand::Rng;

    fn circuit(d: usize) -> Circuit {
        Circuit::new(Arc::new(build_lattice(d).unwrap()), d).unwrap()
    }

    fn dets(c: &Circuit, faults: &[Fault]) -> Vec<(usize, usize)> {
        let nx = c.lattice().num_x();
        let b = c.run_with_faults(faults).unwrap();
        b.defects().into_iter().map(|i| (i / nx, i % nx)).collect()
    }

    #[test]
    fn noiseless_is_silent() {
        let lat = build_lattice(5).unwrap();
        let b = simulate_shot(&lat, &NoiseModel::noiseless(), 5, 42).unwrap();
        assert!(b.is_silent());
        assert!(!b.logical_flip);
        assert_eq!(b.num_layers(), 6);
    }

    #[test]
    fn measurement_fault_is_time_like() {
        let c = circuit(5);
        for i in 1..4 {
            let f = Fault { round: i, moment: Moment::Measure, term: FaultTerm::MeasurementFlip(Qubit::X(3)) };
            assert_eq!(dets(&c, &[f]), vec![(i, 3), (i + 1, 3)]);
        }
    }

    #[test]
    fn data_fault_before_cnots_is_space_like() {
        let c = circuit(5);
        let lat = c.lattice();
        let q = lat.data_id(2, 2);
        let f = Fault { round: 2, moment: Moment::PreH, term: FaultTerm::Single(Qubit::Data(q), Pauli::Z) };
        let mut expect: Vec<_> = lat.x_neighbors_of(q).iter().map(|&a| (2, a)).collect();
        expect.sort();
        assert_eq!(dets(&c, &[f]), expect);
    }

    #[test]
    fn data_fault_between_x_cnots_is_spacetime() {
        let c = circuit(7);
        let lat = c.lattice();
        for (r, col) in [(2, 2), (2, 3), (3, 3)] {
            let q = lat.data_id(r, col);
            let xs = lat.x_neighbors_of(q).to_vec();
            assert_eq!(xs.len(), 2);
            let t = |a: usize| lat.x_ancillas()[a].timestep_of(q).unwrap();
            let (early, late) = if t(xs[0]) < t(xs[1]) { (xs[0], xs[1]) } else { (xs[1], xs[0]) };
            // Z lands after the early CNOT: late ancilla sees it this round,
            // early ancilla only next round
            let f = Fault { round: 1, moment: Moment::Cnot(t(early)), term: FaultTerm::Single(Qubit::Data(q), Pauli::Z) };
            let got = dets(&c, &[f]);
            assert_eq!(got.len(), 2);
            assert!(got.contains(&(1, late)) && got.contains(&(2, early)), "{got:?}");
        }
    }

    #[test]
    fn hook_fault_spans_two_rows_and_one_round() {
        let c = circuit(7);
        let lat = c.lattice();
        let zi = lat.z_ancillas().iter().position(|a| a.row == 3 && a.col == 2).unwrap();
        let f = Fault { round: 2, moment: Moment::Cnot(2), term: FaultTerm::Single(Qubit::Z(zi), Pauli::Z) };
        let got = dets(&c, &[f]);
        assert_eq!(got.len(), 2, "{got:?}");
        let (a, b) = (&lat.x_ancillas()[got[0].1], &lat.x_ancillas()[got[1].1]);
        assert_eq!(got[1].0, got[0].0 + 1);
        assert_eq!(a.col, b.col);
        assert_eq!(a.row.abs_diff(b.row), 2);
    }

    #[test]
    fn z_on_fresh_z_ancilla_is_harmless() {
        // Z on |0> is a stabilizer; its spread through all four CNOTs must not
        // be visible, which also checks the schedule measures correctly
        let c = circuit(5);
        for k in 0..c.lattice().num_z() {
            let f = Fault { round: 1, moment: Moment::PreH, term: FaultTerm::Single(Qubit::Z(k), Pauli::Z) };
            assert!(dets(&c, &[f]).is_empty());
            assert!(!c.run_with_faults(&[f]).unwrap().logical_flip);
        }
    }

    #[test]
    fn identity_and_x_terms_do_nothing() {
        let c = circuit(3);
        for p in [Pauli::I, Pauli::X] {
            let f = Fault { round: 0, moment: Moment::PreH, term: FaultTerm::Single(Qubit::Data(DataId(4)), p) };
            assert!(dets(&c, &[f]).is_empty());
        }
    }

    #[test]
    fn invalid_locations_rejected() {
        let c = circuit(3);
        let bad = [
            Fault { round: 3, moment: Moment::PreH, term: FaultTerm::Single(Qubit::Data(DataId(0)), Pauli::Z) },
            Fault { round: 0, moment: Moment::Cnot(5), term: FaultTerm::Single(Qubit::Data(DataId(0)), Pauli::Z) },
            Fault { round: 0, moment: Moment::PreH, term: FaultTerm::Single(Qubit::Data(DataId(99)), Pauli::Z) },
            Fault { round: 1, moment: Moment::DataPrep, term: FaultTerm::Single(Qubit::Data(DataId(0)), Pauli::Z) },
            Fault { round: 0, moment: Moment::PreH, term: FaultTerm::MeasurementFlip(Qubit::X(0)) },
            Fault {
                round: 0,
                moment: Moment::Cnot(1),
                term: FaultTerm::Pair(Qubit::X(0), Pauli::Z, Qubit::Data(DataId(8)), Pauli::Z),
            },
        ];
        for f in bad {
            assert!(c.run_with_faults(&[f]).is_err(), "{f:?}");
        }
    }

    #[test]
    fn enumeration_is_graphlike_with_table_rates() {
        let p = 1e-3;
        let noise = NoiseModel::si1000(p).unwrap();
        for d in [3, 5, 7] {
            let entries = enumerate_single_faults(&build_lattice(d).unwrap(), &noise).unwrap();
            for e in &entries {
                assert!(e.detectors.len() <= 2, "{e:?}");
                match e.kind {
                    ChannelKind::Measurement => assert!((e.probability - 5.0 * p).abs() < 1e-15),
                    ChannelKind::TwoQubit => {
                        assert!((e.channel_rate - p).abs() < 1e-15);
                        assert!((e.probability - 4.0 * p / 15.0).abs() < 1e-15);
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn linearity_of_fault_pairs() {
        let c = circuit(5);
        let entries = c.enumerate_single_faults(&NoiseModel::si1000(1e-3).unwrap());
        let mut rng = shot_rng(7, 0);
        for _ in 0..300 {
            let a = &entries[rng.random_range(0..entries.len())];
            let b = &entries[rng.random_range(0..entries.len())];
            let got = c.run_with_faults(&[a.fault, b.fault]).unwrap();
            let mut want = DetectorBlock::zeros(5, 5);
            for e in [a, b] {
                for &i in &e.detectors {
                    want.toggle(i as usize);
                }
                want.logical_flip ^= e.logical_flip;
            }
            assert_eq!(got, want, "{:?} + {:?}", a.fault, b.fault);
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let lat = build_lattice(5).unwrap();
        let noise = NoiseModel::si1000(5e-3).unwrap();
        let a: Vec<_> = (0..20).map(|s| simulate_shot(&lat, &noise, 5, s).unwrap()).collect();
        let b: Vec<_> = (0..20).map(|s| simulate_shot(&lat, &noise, 5, s).unwrap()).collect();
        assert_eq!(a, b);
        assert!(a.iter().any(|x| x != &a[0]));
    }

    #[test]
    fn sampler_matches_frame_simulator_statistically() {
        let d = 3;
        let c = circuit(d);
        let noise = NoiseModel::si1000(1e-2).unwrap();
        let sampler = FaultSampler::new(d, d, c.enumerate_single_faults(&noise));
        let shots = 20_000u64;
        let n = DetectorBlock::zeros(d, d).num_detectors();
        let (mut fa, mut fb) = (vec![0u32; n + 1], vec![0u32; n + 1]);
        for s in 0..shots {
            let a = c.sample_frame(&noise, &mut shot_rng(1, s));
            let b = sampler.sample_shot(2, s);
            for i in 0..n {
                fa[i] += a.bits()[i] as u32;
                fb[i] += b.bits()[i] as u32;
            }
            fa[n] += a.logical_flip as u32;
            fb[n] += b.logical_flip as u32;
        }
        for i in 0..=n {
            let (x, y) = (fa[i] as f64 / shots as f64, fb[i] as f64 / shots as f64);
            let sd = ((x * (1.0 - x) + y * (1.0 - y)) / shots as f64).sqrt();
            assert!((x - y).abs() < 5.0 * sd + 1e-3, "detector {i}: {x} vs {y}");
        }
    }
}
