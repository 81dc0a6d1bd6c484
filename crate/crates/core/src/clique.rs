//! Clique baseline predecoder.
//!
//! Each window looks at the older layer only:
//!
//! 1. A lone active boundary ancilla (no active spatial neighbor) is cleared
//!    with its boundary correction.
//! 2. An active ancilla whose only active spatial neighbor also has it as its
//!    only active neighbor forms a pair; the shared data qubit is corrected.
//!    Both ends evaluate the edge, so every bulk edge is checked twice.
//! 3. A detector active in both layers is treated as a measurement error, but
//!    only the older copy is cleared.
//!
//! Anything left in the older layer marks the block complex. There is no
//! spacetime or hook logic.

use crate::circuit::DetectorBlock;
use crate::graph::{DecodingGraph, EdgeClass};
use crate::lattice::DataId;
use crate::predecoder::{PredecodeOutcome, Predecoder};

#[derive(Debug, Clone)]
pub struct Clique {
    per_layer: usize,
    num_data: usize,
    /// Spatial neighbors with the shared data qubit.
    neighbors: Vec<Vec<(u32, u32)>>,
    /// Boundary correction for ancillas on the lattice edge.
    boundary: Vec<Option<u32>>,
    observable: Vec<bool>,
}

/// Working state for one block.
#[derive(Debug, Clone)]
pub struct CliqueState<'a> {
    clique: &'a Clique,
    older: Vec<bool>,
    newer: Vec<bool>,
    corrections: Vec<bool>,
    complex: bool,
    scratch: Vec<bool>,
}

impl Clique {
    pub fn new(graph: &DecodingGraph) -> Self {
        let per_layer = graph.per_layer();
        let mut neighbors = vec![Vec::new(); per_layer];
        let mut boundary = vec![None; per_layer];
        for e in graph.edges() {
            let Some((lu, a)) = graph.coords(e.u) else { continue };
            match e.class {
                EdgeClass::BulkSpace => {
                    let (lv, b) = graph.coords(e.v).expect("bulk edges join detectors");
                    let q = e.correction[0].0 as u32;
                    if lu == 0 && lv == 0 {
                        neighbors[a].push((b as u32, q));
                        neighbors[b].push((a as u32, q));
                    }
                }
                EdgeClass::EdgeSpace if boundary[a].is_none() => {
                    boundary[a] = Some(e.correction[0].0 as u32);
                }
                _ => {}
            }
        }
        let lat = graph.lattice();
        let observable = (0..lat.num_data()).map(|q| lat.on_observable(DataId(q))).collect();
        Self { per_layer, num_data: lat.num_data(), neighbors, boundary, observable }
    }

    pub fn new_state(&self) -> CliqueState<'_> {
        CliqueState {
            clique: self,
            older: vec![false; self.per_layer],
            newer: vec![false; self.per_layer],
            corrections: vec![false; self.num_data],
            complex: false,
            scratch: vec![false; self.per_layer],
        }
    }
}

impl CliqueState<'_> {
    pub fn older(&self) -> &[bool] {
        &self.older
    }

    pub fn newer(&self) -> &[bool] {
        &self.newer
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    /// Shift `layer` in and run the three checks on the older layer.
    pub fn predecode_round(&mut self, layer: &[bool]) {
        std::mem::swap(&mut self.older, &mut self.newer);
        self.newer.copy_from_slice(layer);
        self.run_window();
    }

    fn active_neighbors(&self, a: usize) -> impl Iterator<Item = &(u32, u32)> {
        self.clique.neighbors[a].iter().filter(|(b, _)| self.older[*b as usize])
    }

    fn run_window(&mut self) {
        let c = self.clique;
        if !self.older.iter().any(|&b| b) {
            return;
        }
        // boundary checks, decided on one snapshot
        for a in 0..c.per_layer {
            self.scratch[a] = self.older[a] && c.boundary[a].is_some() && self.active_neighbors(a).next().is_none();
        }
        for a in 0..c.per_layer {
            if self.scratch[a] {
                self.older[a] = false;
                self.corrections[c.boundary[a].unwrap() as usize] ^= true;
            }
        }
        // bulk pairs, both ends must agree
        let mut pairs = Vec::new();
        for a in 0..c.per_layer {
            if !self.older[a] {
                continue;
            }
            let mut it = self.active_neighbors(a);
            let (Some(&(b, q)), None) = (it.next(), it.next()) else { continue };
            if (b as usize) < a {
                continue;
            }
            let mut back = self.active_neighbors(b as usize);
            if let (Some(&(x, _)), None) = (back.next(), back.next()) {
                if x as usize == a {
                    pairs.push((a, b as usize, q));
                }
            }
        }
        for (a, b, q) in pairs {
            self.older[a] = false;
            self.older[b] = false;
            self.corrections[q as usize] ^= true;
        }
        // measurement rule: only the older endpoint is cleared
        for a in 0..c.per_layer {
            if self.older[a] && self.newer[a] {
                self.older[a] = false;
            }
        }
        if self.older.iter().any(|&b| b) {
            self.complex = true;
        }
    }

    pub fn finalize_block(mut self) -> PredecodeOutcome {
        self.predecode_round(&vec![false; self.clique.per_layer]);
        if self.complex {
            return PredecodeOutcome::complex();
        }
        let predicted_flip = self.corrections.iter().zip(&self.clique.observable).filter(|(c, o)| **c && **o).count() % 2 == 1;
        PredecodeOutcome { complex: false, corrections: self.corrections, predicted_flip }
    }
}

impl Predecoder for Clique {
    fn name(&self) -> &'static str {
        "clique"
    }

    fn predecode(&self, block: &DetectorBlock) -> PredecodeOutcome {
        let mut st = self.new_state();
        for l in 0..block.num_layers() {
            st.predecode_round(block.layer(l));
        }
        st.finalize_block()
    }
}

/// `clique_predecode_block` as a free function.
pub fn clique_predecode_block(clique: &Clique, block: &DetectorBlock) -> PredecodeOutcome {
    clique.predecode(block)
}
