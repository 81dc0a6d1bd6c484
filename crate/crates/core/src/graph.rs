//! Z-error decoding graph built from single-fault enumeration.
//!
//! Vertices are detectors, indexed `layer * per_layer + ancilla`, plus two
//! boundary vertices for the left and right lattice edges. Every graphlike
//! fault becomes (or merges into) one edge. Edges are classified by geometry
//! and carry the data-qubit correction that reproduces their endpoints.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::circuit::{Circuit, FaultEntry, NoiseModel};
use crate::error::{Error, Result};
use crate::lattice::{DataId, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeClass {
    BulkSpace,
    EdgeSpace,
    Time,
    SpacetimeSingle,
    Hook,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 5] =
        [EdgeClass::BulkSpace, EdgeClass::EdgeSpace, EdgeClass::Time, EdgeClass::SpacetimeSingle, EdgeClass::Hook];

    pub fn name(self) -> &'static str {
        match self {
            EdgeClass::BulkSpace => "bulk-space",
            EdgeClass::EdgeSpace => "edge-space",
            EdgeClass::Time => "time",
            EdgeClass::SpacetimeSingle => "spacetime-single",
            EdgeClass::Hook => "hook",
        }
    }
}

/// Spatial direction of a diagonal spacetime edge, seen from the earlier
/// detector towards the later one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Lean {
    BottomLeft,
    BottomRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    /// Always a detector.
    pub u: u32,
    /// A detector, or a boundary vertex for edge-space edges.
    pub v: u32,
    pub class: EdgeClass,
    pub lean: Option<Lean>,
    pub correction: Vec<DataId>,
    pub logical_flip: bool,
    pub probability: f64,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct DecodingGraph {
    lattice: Arc<Lattice>,
    rounds: usize,
    per_layer: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(u32, u32)>>,
    /// Edges realized by each enumerated fault (empty for silent faults).
    fault_edges: Vec<Vec<u32>>,
    lookup: HashMap<(u32, u32), u32>,
}

impl Serialize for DataId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0 as u64)
    }
}

/// Probability that an odd number of two independent mechanisms fire.
pub fn merge_probability(q1: f64, q2: f64) -> f64 {
    q1 + q2 - 2.0 * q1 * q2
}

pub fn edge_weight(p: f64) -> f64 {
    ((1.0 - p) / p).ln()
}

impl DecodingGraph {
    pub fn num_detectors(&self) -> usize {
        (self.rounds + 1) * self.per_layer
    }

    pub fn num_vertices(&self) -> usize {
        self.num_detectors() + 2
    }

    pub fn boundary(&self, side: Side) -> u32 {
        (self.num_detectors() + side as usize) as u32
    }

    pub fn is_boundary(&self, v: u32) -> bool {
        v as usize >= self.num_detectors()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn per_layer(&self) -> usize {
        self.per_layer
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.adjacency[v as usize]
    }

    pub fn fault_edges(&self, fault: usize) -> &[u32] {
        &self.fault_edges[fault]
    }

    pub fn find_edge(&self, a: u32, b: u32) -> Option<u32> {
        self.lookup.get(&(a.min(b), a.max(b))).copied()
    }

    /// `(layer, ancilla)` of a detector vertex.
    pub fn coords(&self, v: u32) -> Option<(usize, usize)> {
        (!self.is_boundary(v)).then(|| (v as usize / self.per_layer, v as usize % self.per_layer))
    }

    pub fn correction_for(&self, edge: u32) -> &[DataId] {
        &self.edges[edge as usize].correction
    }

    pub fn class_counts(&self) -> HashMap<EdgeClass, usize> {
        let mut m = HashMap::new();
        for e in &self.edges {
            *m.entry(e.class).or_insert(0) += 1;
        }
        m
    }

    fn vertex_name(&self, v: u32) -> String {
        match self.coords(v) {
            Some((l, a)) => format!("{l}:{a}"),
            None if v == self.boundary(Side::Left) => "B:left".into(),
            None => "B:right".into(),
        }
    }

    /// One edge per line: endpoints, class, correction, probability.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# decoding graph d={} rounds={} detectors={} edges={}",
            self.lattice.distance(),
            self.rounds,
            self.num_detectors(),
            self.edges.len()
        );
        for e in &self.edges {
            let corr: Vec<String> = e
                .correction
                .iter()
                .map(|q| {
                    let (r, c) = self.lattice.data_coords(*q);
                    format!("({r},{c})")
                })
                .collect();
            let _ = writeln!(
                out,
                "{} {} {} [{}] flip={} p={:.6e}",
                self.vertex_name(e.u),
                self.vertex_name(e.v),
                e.class.name(),
                corr.join(","),
                e.logical_flip as u8,
                e.probability
            );
        }
        out
    }
}

/// Geometric class of a set of endpoints. `b` is `None` for a boundary edge.
pub fn classify_edge(lat: &Lattice, a: (usize, usize), b: Option<(usize, usize)>) -> Result<(EdgeClass, Option<Lean>)> {
    let unclassified = || Error::Unclassifiable(format!("endpoints {a:?} {b:?}"));
    let Some(b) = b else {
        let touches_edge = lat.x_ancillas()[a.1].data_qubits().any(|q| lat.x_neighbors_of(q).len() == 1);
        return if touches_edge { Ok((EdgeClass::EdgeSpace, None)) } else { Err(unclassified()) };
    };
    let ((la, aa), (lb, ab)) = if a.0 <= b.0 { (a, b) } else { (b, a) };
    let (pa, pb) = (&lat.x_ancillas()[aa], &lat.x_ancillas()[ab]);
    let dl = lb - la;
    if aa == ab && dl == 1 {
        return Ok((EdgeClass::Time, None));
    }
    let adjacent = lat.shared_data_qubit(aa, ab).is_some();
    match dl {
        0 if adjacent => Ok((EdgeClass::BulkSpace, None)),
        1 if adjacent => {
            let dr = pb.row as isize - pa.row as isize;
            let dc = pb.col as isize - pa.col as isize;
            let lean = if dr * dc < 0 { Lean::BottomLeft } else { Lean::BottomRight };
            Ok((EdgeClass::SpacetimeSingle, Some(lean)))
        }
        1 if pa.col == pb.col && pa.row.abs_diff(pb.row) == 2 => Ok((EdgeClass::Hook, None)),
        _ => Err(unclassified()),
    }
}

fn signature_matches(lat: &Lattice, qubits: &[DataId], want: &[usize]) -> bool {
    let syn = lat.x_syndrome_of(qubits.iter().copied());
    let mut expect = vec![false; lat.num_x()];
    for &a in want {
        expect[a] ^= true;
    }
    syn == expect
}

fn observable_parity(lat: &Lattice, qubits: &[DataId]) -> bool {
    qubits.iter().filter(|q| lat.on_observable(**q)).count() % 2 == 1
}

fn correction_for_geometry(
    lat: &Lattice,
    class: EdgeClass,
    a: usize,
    b: Option<usize>,
    side: Option<Side>,
) -> Option<Vec<DataId>> {
    let d = lat.distance();
    match class {
        EdgeClass::Time => Some(Vec::new()),
        EdgeClass::BulkSpace | EdgeClass::SpacetimeSingle => lat.shared_data_qubit(a, b?).map(|q| vec![q]),
        EdgeClass::EdgeSpace => {
            let col = if side? == Side::Left { 0 } else { d - 1 };
            let mut qs: Vec<DataId> = lat.x_ancillas()[a]
                .data_qubits()
                .filter(|&q| lat.x_neighbors_of(q).len() == 1 && lat.data_coords(q).1 == col)
                .collect();
            qs.sort();
            qs.first().map(|&q| vec![q])
        }
        EdgeClass::Hook => {
            let (pa, pb) = (&lat.x_ancillas()[a], &lat.x_ancillas()[b?]);
            let top = pa.row.min(pb.row);
            let j = pa.col;
            let mut candidates = Vec::new();
            for col in [j as isize - 1, j as isize] {
                if col < 0 || col >= d as isize || top + 1 >= d {
                    continue;
                }
                let mut chain = vec![lat.data_id(top, col as usize), lat.data_id(top + 1, col as usize)];
                chain.sort();
                if signature_matches(lat, &chain, &[a, b?]) {
                    candidates.push(chain);
                }
            }
            candidates.sort();
            candidates.into_iter().next()
        }
    }
}

/// Build the decoding graph for a `d`-round memory experiment.
pub fn build_graph(lattice: Arc<Lattice>, noise: &NoiseModel) -> Result<(DecodingGraph, Vec<FaultEntry>)> {
    let rounds = lattice.distance();
    let circuit = Circuit::new(lattice.clone(), rounds)?;
    let entries = circuit.enumerate_single_faults(noise);
    let graph = build_graph_from_faults(lattice, rounds, &entries)?;
    Ok((graph, entries))
}

pub fn build_graph_from_faults(lattice: Arc<Lattice>, rounds: usize, entries: &[FaultEntry]) -> Result<DecodingGraph> {
    let per_layer = lattice.num_x();
    let n_det = ((rounds + 1) * per_layer) as u32;
    let left = n_det;
    let right = n_det + 1;
    let split = |v: u32| (v as usize / per_layer, v as usize % per_layer);

    let mut edges: Vec<Edge> = Vec::new();
    let mut lookup: HashMap<(u32, u32), u32> = HashMap::new();
    let mut fault_edges = vec![Vec::new(); entries.len()];
    let mut deferred = Vec::new();

    let add =
        |edges: &mut Vec<Edge>, lookup: &mut HashMap<(u32, u32), u32>, u: u32, v: u32, flip: bool, prob: f64| -> Result<u32> {
            let key = (u.min(v), u.max(v));
            if let Some(&id) = lookup.get(&key) {
                let e = &mut edges[id as usize];
                if e.logical_flip != flip {
                    return Err(Error::Unclassifiable(format!("edge {key:?} reached with both logical parities")));
                }
                e.probability = merge_probability(e.probability, prob);
                return Ok(id);
            }
            let (a, b) = (split(key.0), (key.1 < n_det).then(|| split(key.1)));
            let (class, lean) = classify_edge(&lattice, a, b)?;
            let side = (key.1 >= n_det).then_some(if key.1 == left { Side::Left } else { Side::Right });
            let correction = correction_for_geometry(&lattice, class, a.1, b.map(|x| x.1), side)
                .ok_or_else(|| Error::Unclassifiable(format!("no correction for {class:?} {a:?} {b:?}")))?;
            let want: Vec<usize> = std::iter::once(a.1).chain(b.map(|x| x.1)).collect();
            if !signature_matches(&lattice, &correction, &want) || observable_parity(&lattice, &correction) != flip {
                return Err(Error::Unclassifiable(format!("correction {correction:?} does not reproduce {class:?} {a:?} {b:?}")));
            }
            let id = edges.len() as u32;
            edges.push(Edge { u: key.0, v: key.1, class, lean, correction, logical_flip: flip, probability: prob, weight: 0.0 });
            lookup.insert(key, id);
            Ok(id)
        };

    for (i, e) in entries.iter().enumerate() {
        if e.probability <= 0.0 && e.channel_rate <= 0.0 && e.is_trivial() {
            continue;
        }
        match e.detectors.as_slice() {
            [] if e.logical_flip => {
                return Err(Error::Unclassifiable(format!("undetectable logical fault {:?}", e.fault)));
            }
            [] => {}
            [u] => {
                // a single detector pairs with the left boundary iff the fault
                // crosses the observable column
                let v = if e.logical_flip { left } else { right };
                fault_edges[i].push(add(&mut edges, &mut lookup, *u, v, e.logical_flip, e.probability)?);
            }
            [u, v] => fault_edges[i].push(add(&mut edges, &mut lookup, *u, *v, e.logical_flip, e.probability)?),
            _ => deferred.push(i),
        }
    }

    // Hyperedges: split into already known graphlike edges.
    for i in deferred {
        let e = &entries[i];
        let parts = decompose(&e.detectors, e.logical_flip, &edges, &lookup, left, right)
            .ok_or_else(|| Error::Unclassifiable(format!("non-graphlike fault {:?} -> {:?}", e.fault, e.detectors)))?;
        for id in parts {
            let edge = &mut edges[id as usize];
            edge.probability = merge_probability(edge.probability, e.probability);
            fault_edges[i].push(id);
        }
    }

    let mut adjacency = vec![Vec::new(); n_det as usize + 2];
    for (id, e) in edges.iter_mut().enumerate() {
        e.weight = edge_weight(e.probability);
        adjacency[e.u as usize].push((e.v, id as u32));
        adjacency[e.v as usize].push((e.u, id as u32));
    }
    Ok(DecodingGraph { lattice, rounds, per_layer, edges, adjacency, fault_edges, lookup })
}

fn decompose(
    dets: &[u32],
    flip: bool,
    edges: &[Edge],
    lookup: &HashMap<(u32, u32), u32>,
    left: u32,
    right: u32,
) -> Option<Vec<u32>> {
    fn go(
        rest: &[u32],
        flip: bool,
        edges: &[Edge],
        lookup: &HashMap<(u32, u32), u32>,
        bnd: [u32; 2],
        acc: &mut Vec<u32>,
    ) -> bool {
        let Some((&first, tail)) = rest.split_first() else {
            return !flip;
        };
        let mut partners: Vec<(u32, Vec<u32>)> = bnd.iter().map(|&b| (b, tail.to_vec())).collect();
        for (k, &other) in tail.iter().enumerate() {
            let mut t = tail.to_vec();
            t.remove(k);
            partners.push((other, t));
        }
        for (other, remaining) in partners {
            if let Some(&id) = lookup.get(&(first.min(other), first.max(other))) {
                acc.push(id);
                if go(&remaining, flip ^ edges[id as usize].logical_flip, edges, lookup, bnd, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(dets, flip, edges, lookup, [left, right], &mut acc).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    fn graph(d: usize, p: f64) -> (DecodingGraph, Vec<FaultEntry>) {
        build_graph(Arc::new(build_lattice(d).unwrap()), &NoiseModel::si1000(p).unwrap()).unwrap()
    }

    #[test]
    fn merge_rule() {
        assert!((merge_probability(0.1, 0.1) - 0.18).abs() < 1e-12);
        assert!(edge_weight(0.01) > 0.0);
    }

    #[test]
    fn all_classes_present_and_partitioned() {
        for d in [5, 7] {
            let (g, _) = graph(d, 1e-3);
            let counts = g.class_counts();
            for c in EdgeClass::ALL {
                assert!(counts.get(&c).copied().unwrap_or(0) > 0, "d={d} missing {c:?}");
            }
            assert_eq!(counts.values().sum::<usize>(), g.edges().len());
        }
    }

    #[test]
    fn every_d3_detector_has_a_boundary_edge() {
        let (g, _) = graph(3, 1e-3);
        for v in 0..g.num_detectors() as u32 {
            let has = g.neighbors(v).iter().any(|&(w, _)| g.is_boundary(w));
            assert!(has, "detector {v} has no boundary edge");
        }
    }

    #[test]
    fn bulk_vertex_degree_matches_unit_cell() {
        let (g, _) = graph(5, 1e-3);
        let lat = g.lattice();
        let a = lat.x_at(2, 2).unwrap();
        let v = (2 * g.per_layer() + a) as u32;
        let mut by_class: HashMap<EdgeClass, usize> = HashMap::new();
        for &(_, id) in g.neighbors(v) {
            *by_class.entry(g.edge(id).class).or_insert(0) += 1;
        }
        assert_eq!(by_class[&EdgeClass::BulkSpace], 4);
        assert_eq!(by_class[&EdgeClass::Time], 2);
        assert_eq!(by_class[&EdgeClass::SpacetimeSingle], 4);
        assert_eq!(by_class[&EdgeClass::Hook], 2);
    }

    #[test]
    fn corrections_by_class() {
        let (g, _) = graph(7, 1e-3);
        for e in g.edges() {
            let n = e.correction.len();
            match e.class {
                EdgeClass::Time => assert_eq!(n, 0),
                EdgeClass::Hook => assert_eq!(n, 2),
                _ => assert_eq!(n, 1),
            }
            assert!(e.weight > 0.0);
        }
    }

    #[test]
    fn every_fault_maps_to_edges() {
        let (g, entries) = graph(5, 1e-3);
        for (i, e) in entries.iter().enumerate() {
            let mut dets = Vec::new();
            let mut flip = false;
            for &id in g.fault_edges(i) {
                let edge = g.edge(id);
                for v in [edge.u, edge.v] {
                    if !g.is_boundary(v) {
                        if let Some(k) = dets.iter().position(|&x| x == v) {
                            dets.swap_remove(k);
                        } else {
                            dets.push(v);
                        }
                    }
                }
                flip ^= edge.logical_flip;
            }
            dets.sort();
            assert_eq!(dets, e.detectors);
            assert_eq!(flip, e.logical_flip);
        }
    }

    #[test]
    fn classify_examples() {
        let lat = build_lattice(7).unwrap();
        let a = lat.x_at(2, 2).unwrap();
        let b = lat.x_at(3, 3).unwrap();
        let c = lat.x_at(4, 2).unwrap();
        assert_eq!(classify_edge(&lat, (1, a), Some((2, a))).unwrap().0, EdgeClass::Time);
        assert_eq!(classify_edge(&lat, (1, a), Some((1, b))).unwrap().0, EdgeClass::BulkSpace);
        assert_eq!(classify_edge(&lat, (1, a), Some((2, c))).unwrap().0, EdgeClass::Hook);
        assert_eq!(classify_edge(&lat, (1, a), Some((2, b))).unwrap().0, EdgeClass::SpacetimeSingle);
        assert!(classify_edge(&lat, (1, a), Some((3, a))).is_err());
        assert!(classify_edge(&lat, (1, a), None).is_err());
    }

    #[test]
    fn rebuild_is_stable() {
        let (a, _) = graph(5, 2e-3);
        let (b, _) = graph(5, 2e-3);
        assert_eq!(a.dump(), b.dump());
        assert_eq!(a.class_counts(), b.class_counts());
    }
}
