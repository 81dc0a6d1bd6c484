//! Compiled syndrome-extraction circuit and a Z-only Pauli frame simulator.
//!
//! Only Z components are tracked. Through a CNOT a Z on the target spreads to
//! the control, so Z errors on data qubits reach the X ancillas (which are
//! CNOT controls) and Z errors on Z ancillas reach data qubits (which are the
//! controls of Z-ancilla CNOTs). X ancillas are simulated in their Hadamard
//! rotated frame: prepared in `|+>` and measured in the X basis, so a reset
//! flip or a Hadamard fault shows up as a Z on the ancilla.
//!
//! Per round the circuit runs `Reset, PreH, Cnot(1..=4), PostH, Measure`.
//! The block starts with a `DataPrep` moment and ends with `FinalH` and
//! `FinalMeasure` (transversal X-basis data readout). Noise acts after the
//! operation of its moment.

use std::sync::Arc;

use rand::Rng;

use super::block::DetectorBlock;
use super::noise::{ChannelKind, NoiseModel};
use crate::error::{Error, Result};
use crate::lattice::{DataId, Lattice};

/// A physical qubit in the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Data(DataId),
    X(usize),
    Z(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Moment {
    DataPrep,
    Reset,
    PreH,
    /// CNOT layer 1..=4.
    Cnot(u8),
    PostH,
    Measure,
    FinalH,
    FinalMeasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Y | Pauli::Z)
    }
}

/// What a fault does to the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaultTerm {
    Single(Qubit, Pauli),
    Pair(Qubit, Pauli, Qubit, Pauli),
    /// Classical flip of a measurement outcome.
    MeasurementFlip(Qubit),
}

/// A fault at a circuit coordinate. `round` is the syndrome round; the
/// `DataPrep` moment belongs to round 0 and the final readout moments to the
/// last round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fault {
    pub round: usize,
    pub moment: Moment,
    pub term: FaultTerm,
}

/// One noise channel instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub tick: u32,
    pub kind: ChannelKind,
    pub qubits: [u32; 2],
    pub arity: u8,
}

#[derive(Debug, Clone)]
pub(crate) struct Tick {
    pub round: usize,
    pub moment: Moment,
    /// For CNOT ticks: `control_of[target]`, `u32::MAX` where unused.
    pub control_of: Vec<u32>,
    pub cnots: Vec<(u32, u32)>,
    pub channels: std::ops::Range<usize>,
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Circuit {
    lattice: Arc<Lattice>,
    rounds: usize,
    pub(crate) ticks: Vec<Tick>,
    channels: Vec<Channel>,
}

impl Circuit {
    pub fn new(lattice: Arc<Lattice>, rounds: usize) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::InvalidLocation("at least one round is required".into()));
        }
        let nd = lattice.num_data();
        let nx = lattice.num_x();
        let nq = lattice.num_qubits();
        let data = 0..nd as u32;
        let xs = nd as u32..(nd + nx) as u32;
        let zs = (nd + nx) as u32..nq as u32;
        let mut ticks = Vec::new();
        let mut channels = Vec::new();
        let mut push = |ticks: &mut Vec<Tick>, round, moment, cnots: Vec<(u32, u32)>, chans: Vec<(ChannelKind, [u32; 2], u8)>| {
            let tick = ticks.len() as u32;
            let start = channels.len();
            channels.extend(chans.into_iter().map(|(kind, qubits, arity)| Channel { tick, kind, qubits, arity }));
            let mut control_of = Vec::new();
            if !cnots.is_empty() {
                control_of = vec![NONE; nq];
                for &(c, t) in &cnots {
                    control_of[t as usize] = c;
                }
            }
            ticks.push(Tick { round, moment, control_of, cnots, channels: start..channels.len() });
        };
        let single = |kind: ChannelKind, qs: std::ops::Range<u32>| qs.map(move |q| (kind, [q, q], 1u8));

        let prep: Vec<_> =
            data.clone().flat_map(|q| [(ChannelKind::Reset, [q, q], 1), (ChannelKind::SingleQubit, [q, q], 1)]).collect();
        push(&mut ticks, 0, Moment::DataPrep, Vec::new(), prep);

        for r in 0..rounds {
            push(&mut ticks, r, Moment::Reset, Vec::new(), single(ChannelKind::Reset, xs.clone()).collect());
            let h_layer = || {
                single(ChannelKind::SingleQubit, xs.clone())
                    .chain(single(ChannelKind::Idle, data.clone()))
                    .chain(single(ChannelKind::Idle, zs.clone()))
                    .collect::<Vec<_>>()
            };
            push(&mut ticks, r, Moment::PreH, Vec::new(), h_layer());
            for t in 1..=4u8 {
                let mut cnots = Vec::new();
                for (k, a) in lattice.x_ancillas().iter().enumerate() {
                    if let Some(s) = a.schedule.iter().find(|s| s.timestep == t) {
                        cnots.push(((nd + k) as u32, s.data.0 as u32));
                    }
                }
                for (k, a) in lattice.z_ancillas().iter().enumerate() {
                    if let Some(s) = a.schedule.iter().find(|s| s.timestep == t) {
                        cnots.push((s.data.0 as u32, (nd + nx + k) as u32));
                    }
                }
                let mut busy = vec![false; nq];
                let mut chans = Vec::new();
                for &(c, tq) in &cnots {
                    busy[c as usize] = true;
                    busy[tq as usize] = true;
                    chans.push((ChannelKind::TwoQubit, [c, tq], 2));
                }
                chans.extend((0..nq as u32).filter(|q| !busy[*q as usize]).map(|q| (ChannelKind::Idle, [q, q], 1)));
                push(&mut ticks, r, Moment::Cnot(t), cnots, chans);
            }
            push(&mut ticks, r, Moment::PostH, Vec::new(), h_layer());
            let meas = single(ChannelKind::Measurement, xs.clone()).chain(single(ChannelKind::ResonatorIdle, data.clone()));
            push(&mut ticks, r, Moment::Measure, Vec::new(), meas.collect());
        }
        push(&mut ticks, rounds - 1, Moment::FinalH, Vec::new(), single(ChannelKind::SingleQubit, data.clone()).collect());
        push(&mut ticks, rounds - 1, Moment::FinalMeasure, Vec::new(), single(ChannelKind::Measurement, data).collect());
        Ok(Self { lattice, rounds, ticks, channels })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn num_ticks(&self) -> usize {
        self.ticks.len()
    }

    pub(crate) fn tick(&self, i: usize) -> &Tick {
        &self.ticks[i]
    }

    pub fn global_index(&self, q: Qubit) -> Result<u32> {
        let lat = &self.lattice;
        let (nd, nx) = (lat.num_data(), lat.num_x());
        let idx = match q {
            Qubit::Data(d) if d.0 < nd => d.0,
            Qubit::X(k) if k < nx => nd + k,
            Qubit::Z(k) if k < lat.num_z() => nd + nx + k,
            _ => return Err(Error::InvalidLocation(format!("no such qubit {q:?}"))),
        };
        Ok(idx as u32)
    }

    pub fn qubit_of(&self, g: u32) -> Qubit {
        let (nd, nx) = (self.lattice.num_data(), self.lattice.num_x());
        let g = g as usize;
        if g < nd {
            Qubit::Data(DataId(g))
        } else if g < nd + nx {
            Qubit::X(g - nd)
        } else {
            Qubit::Z(g - nd - nx)
        }
    }

    pub fn tick_index(&self, round: usize, moment: Moment) -> Result<usize> {
        let bad = || Error::InvalidLocation(format!("round {round} moment {moment:?}"));
        if round >= self.rounds {
            return Err(bad());
        }
        let within = match moment {
            Moment::DataPrep if round == 0 => return Ok(0),
            Moment::FinalH if round == self.rounds - 1 => return Ok(self.ticks.len() - 2),
            Moment::FinalMeasure if round == self.rounds - 1 => return Ok(self.ticks.len() - 1),
            Moment::Reset => 0,
            Moment::PreH => 1,
            Moment::Cnot(t @ 1..=4) => 1 + t as usize,
            Moment::PostH => 6,
            Moment::Measure => 7,
            _ => return Err(bad()),
        };
        Ok(1 + round * 8 + within)
    }

    /// Map a fault to its tick and the global qubits carrying a Z after
    /// projection, or the measured qubit for a measurement flip.
    pub(crate) fn resolve(&self, fault: &Fault) -> Result<Resolved> {
        let tick = self.tick_index(fault.round, fault.moment)?;
        let t = &self.ticks[tick];
        let mut zs = Vec::new();
        match fault.term {
            FaultTerm::Single(q, p) => {
                let g = self.global_index(q)?;
                if p.has_z() {
                    zs.push(g);
                }
            }
            FaultTerm::Pair(a, pa, b, pb) => {
                let (ga, gb) = (self.global_index(a)?, self.global_index(b)?);
                let paired = t.cnots.iter().any(|&(c, tq)| (c, tq) == (ga, gb) || (c, tq) == (gb, ga));
                if !paired {
                    return Err(Error::InvalidLocation(format!("{a:?},{b:?} share no gate at {:?}", fault.moment)));
                }
                if pa.has_z() {
                    zs.push(ga);
                }
                if pb.has_z() {
                    zs.push(gb);
                }
            }
            FaultTerm::MeasurementFlip(q) => {
                let g = self.global_index(q)?;
                let ok = matches!((fault.moment, q), (Moment::Measure, Qubit::X(_)) | (Moment::FinalMeasure, Qubit::Data(_)));
                if !ok {
                    return Err(Error::InvalidLocation(format!("no measurement of {q:?} at {:?}", fault.moment)));
                }
                return Ok(Resolved { tick, zs, flip: Some(g) });
            }
        }
        Ok(Resolved { tick, zs, flip: None })
    }

    /// Run the noiseless circuit with the given faults injected.
    pub fn run_with_faults(&self, faults: &[Fault]) -> Result<DetectorBlock> {
        let mut by_tick: Vec<Vec<Resolved>> = vec![Vec::new(); self.ticks.len()];
        for f in faults {
            let r = self.resolve(f)?;
            by_tick[r.tick].push(r);
        }
        let mut frame = PauliFrame::new(self);
        for (i, tick) in self.ticks.iter().enumerate() {
            frame.apply_tick(self, tick);
            for r in &by_tick[i] {
                frame.apply_resolved(self, r);
            }
        }
        Ok(frame.into_block(self))
    }

    /// Sample one shot by drawing every noise channel independently.
    pub fn sample_frame<R: Rng>(&self, noise: &NoiseModel, rng: &mut R) -> DetectorBlock {
        let mut frame = PauliFrame::new(self);
        for tick in &self.ticks {
            frame.apply_tick(self, tick);
            for ch in &self.channels[tick.channels.clone()] {
                let rate = noise.rate(ch.kind);
                if rate <= 0.0 || rng.random::<f64>() >= rate {
                    continue;
                }
                frame.apply_channel_hit(self, ch, rng);
            }
        }
        frame.into_block(self)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Resolved {
    pub tick: usize,
    pub zs: Vec<u32>,
    pub flip: Option<u32>,
}

/// Z components on every qubit plus the measurement-record flips so far.
#[derive(Debug, Clone)]
pub struct PauliFrame {
    z: Vec<bool>,
    /// `rounds x num_x` flips of X-ancilla outcomes.
    records: Vec<bool>,
    /// Flips of final data outcomes.
    data_records: Vec<bool>,
    round: usize,
}

impl PauliFrame {
    pub fn new(circuit: &Circuit) -> Self {
        let lat = circuit.lattice();
        Self {
            z: vec![false; lat.num_qubits()],
            records: vec![false; circuit.rounds() * lat.num_x()],
            data_records: vec![false; lat.num_data()],
            round: 0,
        }
    }

    pub fn z(&self, g: u32) -> bool {
        self.z[g as usize]
    }

    /// Z frame on the data qubits.
    pub fn data_z(&self, circuit: &Circuit) -> Vec<bool> {
        self.z[..circuit.lattice().num_data()].to_vec()
    }

    fn apply_tick(&mut self, circuit: &Circuit, tick: &Tick) {
        let lat = circuit.lattice();
        let (nd, nx) = (lat.num_data(), lat.num_x());
        self.round = tick.round;
        match tick.moment {
            Moment::Reset => self.z[nd..].iter_mut().for_each(|b| *b = false),
            Moment::Cnot(_) => {
                for &(c, t) in &tick.cnots {
                    if self.z[t as usize] {
                        self.z[c as usize] ^= true;
                    }
                }
            }
            Moment::Measure => {
                let base = tick.round * nx;
                for k in 0..nx {
                    self.records[base + k] = self.z[nd + k];
                }
            }
            Moment::FinalMeasure => self.data_records.copy_from_slice(&self.z[..nd]),
            _ => {}
        }
    }

    fn flip_record(&mut self, circuit: &Circuit, tick: usize, g: u32) {
        let lat = circuit.lattice();
        let nd = lat.num_data();
        let t = circuit.tick(tick);
        if (g as usize) < nd {
            self.data_records[g as usize] ^= true;
        } else {
            self.records[t.round * lat.num_x() + g as usize - nd] ^= true;
        }
    }

    fn apply_resolved(&mut self, circuit: &Circuit, r: &Resolved) {
        for &g in &r.zs {
            self.z[g as usize] ^= true;
        }
        if let Some(g) = r.flip {
            self.flip_record(circuit, r.tick, g);
        }
    }

    fn apply_channel_hit<R: Rng>(&mut self, circuit: &Circuit, ch: &Channel, rng: &mut R) {
        match ch.kind {
            ChannelKind::Measurement => {
                let tick = circuit.tick(ch.tick as usize);
                let nd = circuit.lattice().num_data() as u32;
                // the final data readout records data qubits; round readout the X ancillas
                if tick.moment == Moment::FinalMeasure || ch.qubits[0] >= nd {
                    self.flip_record(circuit, ch.tick as usize, ch.qubits[0]);
                }
            }
            // a reset flip is an X error before the basis change, i.e. a Z in our frame
            ChannelKind::Reset => self.z[ch.qubits[0] as usize] ^= true,
            ChannelKind::SingleQubit | ChannelKind::Idle | ChannelKind::ResonatorIdle => {
                // uniform over X, Y, Z; two of the three carry a Z
                if rng.random_range(0..3) != 0 {
                    self.z[ch.qubits[0] as usize] ^= true;
                }
            }
            ChannelKind::TwoQubit => {
                // uniform over the 15 nontrivial two-qubit Paulis
                let k = rng.random_range(1..16u32);
                let (pa, pb) = (k / 4, k % 4);
                // encode I=0, X=1, Y=2, Z=3; Y and Z carry Z
                if pa >= 2 {
                    self.z[ch.qubits[0] as usize] ^= true;
                }
                if pb >= 2 {
                    self.z[ch.qubits[1] as usize] ^= true;
                }
            }
        }
    }

    /// Inject a fault into the frame in its current state.
    pub fn inject(&mut self, circuit: &Circuit, fault: &Fault) -> Result<()> {
        let r = circuit.resolve(fault)?;
        self.apply_resolved(circuit, &r);
        Ok(())
    }

    pub fn into_block(self, circuit: &Circuit) -> DetectorBlock {
        let lat = circuit.lattice();
        let rounds = circuit.rounds();
        let nx = lat.num_x();
        let mut block = DetectorBlock::zeros(lat.distance(), rounds);
        for r in 0..rounds {
            for k in 0..nx {
                if self.records[r * nx + k] {
                    block.toggle(r * nx + k);
                    block.toggle((r + 1) * nx + k);
                }
            }
        }
        for (q, &f) in self.data_records.iter().enumerate() {
            if f {
                for &k in lat.x_neighbors_of(DataId(q)) {
                    block.toggle(rounds * nx + k);
                }
                if lat.on_observable(DataId(q)) {
                    block.logical_flip ^= true;
                }
            }
        }
        block
    }
}

/// Inject a fault into a frame. The frame must be positioned at the fault's
/// moment; [`Circuit::run_with_faults`] takes care of that ordering.
pub fn inject_fault(circuit: &Circuit, frame: &mut PauliFrame, fault: &Fault) -> Result<()> {
    frame.inject(circuit, fault)
}
