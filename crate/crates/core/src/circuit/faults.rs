//! Exhaustive single-fault enumeration.

use super::frame::{Circuit, Fault, FaultTerm, Moment, Pauli, Qubit, Resolved};
use super::noise::{ChannelKind, NoiseModel};
use crate::lattice::DataId;

/// One Z-relevant outcome of one noise channel instance, with the detectors
/// it flips when it is the only fault in an otherwise noiseless block.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultEntry {
    pub channel: u32,
    pub kind: ChannelKind,
    pub fault: Fault,
    /// Probability of this particular outcome.
    pub probability: f64,
    /// Total rate of the channel the outcome belongs to.
    pub channel_rate: f64,
    /// Sorted flat detector indices (`layer * per_layer + ancilla`).
    pub detectors: Vec<u32>,
    pub logical_flip: bool,
}

impl FaultEntry {
    pub fn is_trivial(&self) -> bool {
        self.detectors.is_empty() && !self.logical_flip
    }
}

fn toggle(v: &mut Vec<u32>, x: u32) {
    if let Some(i) = v.iter().position(|&y| y == x) {
        v.swap_remove(i);
    } else {
        v.push(x);
    }
}

impl Circuit {
    /// Forward-propagate a single resolved fault through the noiseless
    /// circuit, tracking only the qubits that carry a Z.
    pub(crate) fn propagate(&self, r: &Resolved) -> (Vec<u32>, bool) {
        let lat = self.lattice();
        let (nd, nx) = (lat.num_data() as u32, lat.num_x());
        let rounds = self.rounds();
        let mut zs: Vec<u32> = Vec::with_capacity(4);
        for &g in &r.zs {
            toggle(&mut zs, g);
        }
        let mut dets: Vec<u32> = Vec::with_capacity(4);
        let mut flip = false;
        let flip_round = |dets: &mut Vec<u32>, round: usize, k: usize| {
            toggle(dets, (round * nx + k) as u32);
            toggle(dets, ((round + 1) * nx + k) as u32);
        };
        let flip_data = |dets: &mut Vec<u32>, flip: &mut bool, q: u32| {
            for &k in lat.x_neighbors_of(DataId(q as usize)) {
                toggle(dets, (rounds * nx + k) as u32);
            }
            if lat.on_observable(DataId(q as usize)) {
                *flip ^= true;
            }
        };
        if let Some(g) = r.flip {
            if g < nd {
                flip_data(&mut dets, &mut flip, g);
            } else {
                flip_round(&mut dets, self.tick(r.tick).round, (g - nd) as usize);
            }
        }
        let mut scratch = Vec::with_capacity(4);
        for i in r.tick + 1..self.num_ticks() {
            if zs.is_empty() {
                break;
            }
            let tick = self.tick(i);
            match tick.moment {
                Moment::Reset => zs.retain(|&g| g < nd),
                Moment::Cnot(_) => {
                    scratch.clear();
                    scratch.extend(zs.iter().map(|&g| tick.control_of[g as usize]).filter(|&c| c != u32::MAX));
                    for &c in &scratch {
                        toggle(&mut zs, c);
                    }
                }
                Moment::Measure => {
                    for &g in &zs {
                        if g >= nd && ((g - nd) as usize) < nx {
                            flip_round(&mut dets, tick.round, (g - nd) as usize);
                        }
                    }
                }
                Moment::FinalMeasure => {
                    for &g in &zs {
                        if g < nd {
                            flip_data(&mut dets, &mut flip, g);
                        }
                    }
                }
                _ => {}
            }
        }
        dets.sort_unstable();
        (dets, flip)
    }

    /// Detector set and logical flip caused by one fault in isolation.
    pub fn single_fault_effect(&self, fault: &Fault) -> crate::Result<(Vec<u32>, bool)> {
        let r = self.resolve(fault)?;
        Ok(self.propagate(&r))
    }

    /// Every Z-relevant outcome of every channel in the block.
    pub fn enumerate_single_faults(&self, noise: &NoiseModel) -> Vec<FaultEntry> {
        let mut out = Vec::with_capacity(self.channels().len() * 2);
        for (ci, ch) in self.channels().iter().enumerate() {
            let tick = self.tick(ch.tick as usize);
            let (round, moment) = (tick.round, tick.moment);
            let qa = self.qubit_of(ch.qubits[0]);
            let qb = self.qubit_of(ch.qubits[1]);
            let terms: Vec<FaultTerm> = match ch.kind {
                ChannelKind::Measurement => vec![FaultTerm::MeasurementFlip(qa)],
                ChannelKind::Reset | ChannelKind::SingleQubit | ChannelKind::Idle | ChannelKind::ResonatorIdle => {
                    vec![FaultTerm::Single(qa, Pauli::Z)]
                }
                ChannelKind::TwoQubit => vec![
                    FaultTerm::Pair(qa, Pauli::Z, qb, Pauli::I),
                    FaultTerm::Pair(qa, Pauli::I, qb, Pauli::Z),
                    FaultTerm::Pair(qa, Pauli::Z, qb, Pauli::Z),
                ],
            };
            for term in terms {
                let fault = Fault { round, moment, term };
                let (detectors, logical_flip) = self.single_fault_effect(&fault).expect("enumerated faults are valid locations");
                out.push(FaultEntry {
                    channel: ci as u32,
                    kind: ch.kind,
                    fault,
                    probability: noise.outcome_probability(ch.kind),
                    channel_rate: noise.rate(ch.kind),
                    detectors,
                    logical_flip,
                });
            }
        }
        out
    }
}

/// Convenience: the qubit a single-qubit fault term acts on.
pub fn fault_qubits(term: &FaultTerm) -> Vec<Qubit> {
    match *term {
        FaultTerm::Single(q, _) | FaultTerm::MeasurementFlip(q) => vec![q],
        FaultTerm::Pair(a, _, b, _) => vec![a, b],
    }
}
