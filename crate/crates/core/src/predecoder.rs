//! The Pinball predecoder: nine stages of conflict-free primitives run over a
//! sliding two-layer window.
//!
//! A window holds an older layer `S_{i-1}` and a newer layer `S_i`, both
//! working copies. Time, spacetime and hook primitives pair a slot in the
//! older layer with one in the newer layer. Bulk and edge space primitives act
//! on the older layer only, so a detector is considered for spatial pairing
//! after its time-like partner in the next layer has been seen. A virtual
//! all-zero layer precedes layer 0 and follows the last layer, which gives the
//! final layer its own pass of spatial checks. Whatever is still active in the
//! older layer after a window makes the block complex.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::Serialize;

use crate::circuit::DetectorBlock;
use crate::error::{Error, Result};
use crate::graph::{DecodingGraph, EdgeClass, Lean};
use crate::lattice::{DataId, Lattice};

/// Result of predecoding one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredecodeOutcome {
    pub complex: bool,
    /// Z corrections over the `d x d` data qubits. Empty when complex.
    pub corrections: Vec<bool>,
    /// Observable parity of the corrections.
    pub predicted_flip: bool,
}

impl PredecodeOutcome {
    pub fn complex() -> Self {
        Self { complex: true, corrections: Vec::new(), predicted_flip: false }
    }

    pub fn correction_qubits(&self) -> Vec<DataId> {
        self.corrections.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| DataId(i)).collect()
    }
}

/// A first-level decoder that either resolves a block or flags it complex.
pub trait Predecoder: Send + Sync {
    fn name(&self) -> &'static str;
    fn predecode(&self, block: &DetectorBlock) -> PredecodeOutcome;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StageId {
    M,
    B(u8),
    St(u8),
    H,
    E,
}

impl StageId {
    pub const ORDER: [StageId; 9] = [
        StageId::M,
        StageId::B(1),
        StageId::B(2),
        StageId::B(3),
        StageId::B(4),
        StageId::St(1),
        StageId::St(2),
        StageId::H,
        StageId::E,
    ];

    fn position(self) -> usize {
        Self::ORDER.iter().position(|&s| s == self).expect("stage in order")
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageId::M => write!(f, "M"),
            StageId::B(k) => write!(f, "B({k})"),
            StageId::St(k) => write!(f, "ST({k})"),
            StageId::H => write!(f, "H"),
            StageId::E => write!(f, "E"),
        }
    }
}

/// Detector position inside the two-layer window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Slot {
    Older(u32),
    Newer(u32),
}

impl Slot {
    fn index(self, per_layer: usize) -> usize {
        match self {
            Slot::Older(a) => a as usize,
            Slot::Newer(a) => per_layer + a as usize,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Older(a) => write!(f, "old:{a}"),
            Slot::Newer(a) => write!(f, "new:{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Primitive {
    pub center: Slot,
    /// `None` is the always-active artificial neighbor.
    pub neighbor: Option<Slot>,
    pub correction: Vec<DataId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub id: StageId,
    pub primitives: Vec<Primitive>,
}

/// Where a decoding-graph edge is handled: window index, stage position and
/// primitive index within the stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Owner {
    pub window: usize,
    pub stage: usize,
    pub primitive: usize,
}

#[derive(Debug, Clone)]
struct Compiled {
    center: u32,
    neighbor: u32,
    corr: Vec<u32>,
}

const ARTIFICIAL: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Pipeline {
    lattice: Arc<Lattice>,
    rounds: usize,
    per_layer: usize,
    stages: Vec<Stage>,
    owners: Vec<Owner>,
    compiled: Vec<Vec<Compiled>>,
    observable: Vec<bool>,
}

fn bulk_color(lat: &Lattice, a: usize, b: usize) -> u8 {
    let (pa, pb) = (&lat.x_ancillas()[a], &lat.x_ancillas()[b]);
    let (upper, lower) = if pa.row < pb.row { (pa, pb) } else { (pb, pa) };
    let falling = lower.col > upper.col;
    let parity = (upper.row % 2) as u8;
    1 + 2 * parity + u8::from(!falling)
}

/// Assign every decoding-graph edge to a window-relative primitive in one of
/// the nine stages and check that no stage touches a slot twice.
pub fn build_pipeline(graph: &DecodingGraph) -> Result<Pipeline> {
    let lat = graph.lattice();
    let per_layer = graph.per_layer();
    let mut stages: Vec<Stage> = StageId::ORDER.iter().map(|&id| Stage { id, primitives: Vec::new() }).collect();
    let mut index: HashMap<(usize, Slot, Option<Slot>), usize> = HashMap::new();
    let mut owners = Vec::with_capacity(graph.edges().len());

    for e in graph.edges() {
        let (lu, au) = graph.coords(e.u).expect("u is a detector");
        let other = graph.coords(e.v);
        let (window, stage, center, neighbor) = match (e.class, other) {
            (EdgeClass::EdgeSpace, None) => (lu + 1, StageId::E, Slot::Older(au as u32), None),
            (EdgeClass::BulkSpace, Some((lv, av))) if lv == lu => {
                let color = bulk_color(lat, au, av);
                let (x, y) = (au.min(av) as u32, au.max(av) as u32);
                (lu + 1, StageId::B(color), Slot::Older(x), Some(Slot::Older(y)))
            }
            (class, Some((lv, av))) if lv == lu + 1 => {
                let stage = match class {
                    EdgeClass::Time => StageId::M,
                    EdgeClass::SpacetimeSingle if e.lean == Some(Lean::BottomLeft) => StageId::St(1),
                    EdgeClass::SpacetimeSingle => StageId::St(2),
                    EdgeClass::Hook => StageId::H,
                    _ => return Err(Error::Coverage(format!("edge {}-{} of class {class:?} spans layers", e.u, e.v))),
                };
                (lv, stage, Slot::Older(au as u32), Some(Slot::Newer(av as u32)))
            }
            _ => return Err(Error::Coverage(format!("edge {}-{} does not fit a window", e.u, e.v))),
        };
        let pos = stage.position();
        let key = (pos, center, neighbor);
        let primitive = match index.get(&key) {
            Some(&k) => {
                if stages[pos].primitives[k].correction != e.correction {
                    return Err(Error::Coverage(format!(
                        "primitive {center}-{neighbor:?} in {stage} has layer-dependent corrections"
                    )));
                }
                k
            }
            None => {
                let k = stages[pos].primitives.len();
                stages[pos].primitives.push(Primitive { center, neighbor, correction: e.correction.clone() });
                index.insert(key, k);
                k
            }
        };
        owners.push(Owner { window, stage: pos, primitive });
    }

    for stage in &stages {
        let mut used: HashMap<Slot, usize> = HashMap::new();
        for p in &stage.primitives {
            for s in std::iter::once(p.center).chain(p.neighbor) {
                if used.insert(s, 1).is_some() {
                    return Err(Error::StageConflict { stage: stage.id.to_string(), slot: s.to_string() });
                }
            }
        }
    }

    let compiled = stages
        .iter()
        .map(|s| {
            s.primitives
                .iter()
                .map(|p| Compiled {
                    center: p.center.index(per_layer) as u32,
                    neighbor: p.neighbor.map_or(ARTIFICIAL, |n| n.index(per_layer) as u32),
                    corr: p.correction.iter().map(|q| q.0 as u32).collect(),
                })
                .collect()
        })
        .collect();
    let lattice = Arc::new(lat.clone());
    let observable = (0..lat.num_data()).map(|q| lat.on_observable(DataId(q))).collect();
    Ok(Pipeline { lattice, rounds: graph.rounds(), per_layer, stages, owners, compiled, observable })
}

impl Pipeline {
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Owner of each decoding-graph edge, in graph edge order.
    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn num_primitives(&self) -> usize {
        self.stages.iter().map(|s| s.primitives.len()).sum()
    }

    /// Check that every graph edge has exactly one owner and that no two
    /// edges share an owner.
    pub fn verify_coverage(&self, graph: &DecodingGraph) -> Result<()> {
        if self.owners.len() != graph.edges().len() {
            return Err(Error::Coverage(format!("{} owners for {} edges", self.owners.len(), graph.edges().len())));
        }
        let mut seen = HashMap::new();
        for (i, o) in self.owners.iter().enumerate() {
            if let Some(j) = seen.insert((o.window, o.stage, o.primitive), i) {
                return Err(Error::Coverage(format!("edges {j} and {i} share primitive {o:?}")));
            }
        }
        for (pos, stage) in self.stages.iter().enumerate() {
            for k in 0..stage.primitives.len() {
                if !self.owners.iter().any(|o| o.stage == pos && o.primitive == k) {
                    return Err(Error::Coverage(format!("primitive {k} of {} owns no edge", stage.id)));
                }
            }
        }
        Ok(())
    }

    pub fn new_state(&self) -> PipelineState<'_> {
        PipelineState::new(self)
    }

    /// Stage membership as text: one section per stage.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# pinball pipeline d={} stages={}", self.lattice.distance(), self.stages.len());
        for s in &self.stages {
            let _ = writeln!(out, "stage {} primitives={}", s.id, s.primitives.len());
            for p in &s.primitives {
                let n = p.neighbor.map_or_else(|| "artificial".to_string(), |n| n.to_string());
                let corr: Vec<String> = p.correction.iter().map(|q| q.0.to_string()).collect();
                let _ = writeln!(out, "  {} {} [{}]", p.center, n, corr.join(","));
            }
        }
        out
    }
}

impl Predecoder for Pipeline {
    fn name(&self) -> &'static str {
        "pinball"
    }

    fn predecode(&self, block: &DetectorBlock) -> PredecodeOutcome {
        let mut st = self.new_state();
        for l in 0..block.num_layers() {
            st.predecode_round(block.layer(l));
        }
        st.finalize_block()
    }
}

/// Working state for one block.
#[derive(Debug, Clone)]
pub struct PipelineState<'a> {
    pipeline: &'a Pipeline,
    /// Older layer followed by newer layer.
    window: Vec<bool>,
    corrections: Vec<bool>,
    complex: bool,
    layers_seen: usize,
}

impl<'a> PipelineState<'a> {
    fn new(pipeline: &'a Pipeline) -> Self {
        let n = pipeline.lattice.num_data();
        Self {
            pipeline,
            window: vec![false; 2 * pipeline.per_layer],
            corrections: vec![false; n],
            complex: false,
            layers_seen: 0,
        }
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    pub fn corrections(&self) -> &[bool] {
        &self.corrections
    }

    /// Shift `layer` into the window and run all nine stages.
    pub fn predecode_round(&mut self, layer: &[bool]) {
        let pl = self.pipeline.per_layer;
        assert_eq!(layer.len(), pl, "layer width");
        self.window.copy_within(pl.., 0);
        self.window[pl..].copy_from_slice(layer);
        self.layers_seen += 1;
        self.run_window();
    }

    fn run_window(&mut self) {
        let pl = self.pipeline.per_layer;
        if !self.window.iter().any(|&b| b) {
            return;
        }
        for stage in &self.pipeline.compiled {
            for p in stage {
                let c = p.center as usize;
                if !self.window[c] {
                    continue;
                }
                if p.neighbor == ARTIFICIAL {
                    self.window[c] = false;
                } else {
                    let n = p.neighbor as usize;
                    if !self.window[n] {
                        continue;
                    }
                    self.window[c] = false;
                    self.window[n] = false;
                }
                for &q in &p.corr {
                    self.corrections[q as usize] ^= true;
                }
            }
        }
        if self.window[..pl].iter().any(|&b| b) {
            self.complex = true;
        }
    }

    /// Flush the final layer through a window with a virtual empty layer and
    /// report the block result.
    pub fn finalize_block(mut self) -> PredecodeOutcome {
        let pl = self.pipeline.per_layer;
        self.window.copy_within(pl.., 0);
        self.window[pl..].fill(false);
        self.run_window();
        if self.complex {
            return PredecodeOutcome::complex();
        }
        let predicted_flip = self.corrections.iter().zip(&self.pipeline.observable).filter(|(c, o)| **c && **o).count() % 2 == 1;
        PredecodeOutcome { complex: false, corrections: self.corrections, predicted_flip }
    }
}

/// True when two Z corrections differ by a product of stabilizers, i.e. the
/// difference has no X syndrome and does not cross the observable.
pub fn stabilizer_equivalent(lat: &Lattice, a: &[DataId], b: &[DataId]) -> bool {
    let mut diff = vec![false; lat.num_data()];
    for q in a.iter().chain(b) {
        diff[q.0] ^= true;
    }
    let qubits: Vec<DataId> = diff.iter().enumerate().filter(|(_, x)| **x).map(|(i, _)| DataId(i)).collect();
    let quiet = lat.x_syndrome_of(qubits.iter().copied()).iter().all(|s| !s);
    let crosses = qubits.iter().filter(|q| lat.on_observable(**q)).count() % 2 == 1;
    quiet && !crosses
}

/// A block whose only active detectors are the endpoints of `edge`.
pub fn block_for_edge(graph: &DecodingGraph, edge: u32) -> DetectorBlock {
    let d = graph.lattice().distance();
    let mut block = DetectorBlock::zeros(d, graph.rounds());
    let e = graph.edge(edge);
    for v in [e.u, e.v] {
        if !graph.is_boundary(v) {
            block.toggle(v as usize);
        }
    }
    block.logical_flip = e.logical_flip;
    block
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::NoiseModel;
    use crate::graph::build_graph;
    use crate::lattice::build_lattice;

    fn setup(d: usize) -> (DecodingGraph, Pipeline) {
        let (g, _) = build_graph(Arc::new(build_lattice(d).unwrap()), &NoiseModel::si1000(1e-3).unwrap()).unwrap();
        let p = build_pipeline(&g).unwrap();
        (g, p)
    }

    #[test]
    fn nine_stages_with_exact_coverage() {
        for d in [3, 5, 7, 9] {
            let (g, p) = setup(d);
            assert_eq!(p.num_stages(), 9);
            p.verify_coverage(&g).unwrap();
            for s in p.stages().iter().filter(|_| d >= 5) {
                assert!(!s.primitives.is_empty(), "d={d} stage {} empty", s.id);
            }
        }
    }

    #[test]
    fn stage_count_does_not_grow_with_distance() {
        let counts: Vec<usize> = [3, 7, 11].iter().map(|&d| setup(d).1.num_stages()).collect();
        assert!(counts.iter().all(|&c| c == 9));
    }

    #[test]
    fn empty_block_is_trivial() {
        let (g, p) = setup(5);
        let out = p.predecode(&DetectorBlock::zeros(5, g.rounds()));
        assert!(!out.complex);
        assert!(out.corrections.iter().all(|c| !c));
    }

    #[test]
    fn time_pair_cleared_by_m() {
        let (g, p) = setup(5);
        let mut b = DetectorBlock::zeros(5, 5);
        b.set(2, 4, true);
        b.set(3, 4, true);
        let out = p.predecode(&b);
        assert!(!out.complex);
        assert!(out.correction_qubits().is_empty());
        let _ = g;
    }

    #[test]
    fn lone_boundary_syndrome_cleared_by_e() {
        let (g, p) = setup(5);
        let id = g.edges().iter().position(|e| e.class == EdgeClass::EdgeSpace).unwrap() as u32;
        let out = p.predecode(&block_for_edge(&g, id));
        assert!(!out.complex);
        assert!(stabilizer_equivalent(g.lattice(), &out.correction_qubits(), &g.edge(id).correction));
    }

    #[test]
    fn isolated_bulk_syndrome_is_complex() {
        let (_, p) = setup(7);
        let lat = p.lattice().clone();
        let a = lat.x_at(3, 3).unwrap();
        let mut b = DetectorBlock::zeros(7, 7);
        b.set(3, a, true);
        assert!(p.predecode(&b).complex);
    }

    #[test]
    fn every_single_edge_decodes() {
        for d in [3, 5, 7] {
            let (g, p) = setup(d);
            for id in 0..g.edges().len() as u32 {
                let out = p.predecode(&block_for_edge(&g, id));
                assert!(!out.complex, "d={d} edge {:?}", g.edge(id));
                assert!(stabilizer_equivalent(g.lattice(), &out.correction_qubits(), &g.edge(id).correction));
            }
        }
    }

    #[test]
    fn dump_has_nine_sections() {
        let (_, p) = setup(5);
        assert_eq!(p.dump().lines().filter(|l| l.starts_with("stage ")).count(), 9);
    }
}
