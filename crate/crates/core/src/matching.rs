//! Minimum-weight perfect matching on the decoding graph.
//!
//! Defects are paired with each other or with the boundary. Pairwise costs
//! are shortest-path distances that never pass through a boundary vertex.
//! Small instances are solved by subset dynamic programming; larger ones go
//! through a blossom matcher on the standard boundary-doubled graph.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use petgraph::graph::UnGraph;
use serde::Serialize;

use crate::circuit::DetectorBlock;
use crate::error::{Error, Result};
use crate::graph::DecodingGraph;
use crate::lattice::DataId;

/// Largest instance the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Above this many defects the blossom matcher replaces subset DP.
const DP_LIMIT: usize = 12;

/// Full distance tables are kept when the graph has at most this many vertices.
const TABLE_LIMIT: usize = 3000;

/// Integer scale for the blossom matcher's weights.
const WEIGHT_SCALE: f64 = 1e6;

const NO_EDGE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapItem(f64, u32);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths from a set of sources.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    sources: Vec<u32>,
    n: usize,
    dist: Vec<f64>,
    /// Edge entering each vertex on its shortest path, per source.
    pred: Vec<u32>,
}

impl ShortestPaths {
    pub fn sources(&self) -> &[u32] {
        &self.sources
    }

    pub fn distance(&self, source: usize, v: u32) -> f64 {
        self.dist[source * self.n + v as usize]
    }

    /// Edges of a shortest path from `sources[source]` to `v`, walking back
    /// from `v`.
    pub fn path_edges(&self, graph: &DecodingGraph, source: usize, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut cur = v;
        while cur != self.sources[source] {
            let e = self.pred[source * self.n + cur as usize];
            if e == NO_EDGE {
                break;
            }
            out.push(e);
            let edge = graph.edge(e);
            cur = if edge.u == cur { edge.v } else { edge.u };
        }
        out
    }
}

fn dijkstra(graph: &DecodingGraph, src: u32, dist: &mut [f64], pred: &mut [u32]) {
    dist.fill(f64::INFINITY);
    pred.fill(NO_EDGE);
    dist[src as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem(0.0, src));
    while let Some(HeapItem(du, u)) = heap.pop() {
        if du > dist[u as usize] {
            continue;
        }
        if u != src && graph.is_boundary(u) {
            continue;
        }
        for &(v, e) in graph.neighbors(u) {
            let nd = du + graph.edge(e).weight;
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                pred[v as usize] = e;
                heap.push(HeapItem(nd, v));
            }
        }
    }
}

/// Exact shortest paths from each source. Boundary vertices end paths but
/// are never passed through.
pub fn shortest_paths(graph: &DecodingGraph, sources: &[u32]) -> Result<ShortestPaths> {
    let n = graph.num_vertices();
    let mut dist = vec![0.0; sources.len() * n];
    let mut pred = vec![0; sources.len() * n];
    for (i, &s) in sources.iter().enumerate() {
        let (dd, pp) = (&mut dist[i * n..(i + 1) * n], &mut pred[i * n..(i + 1) * n]);
        dijkstra(graph, s, dd, pp);
        if let Some(v) = (0..graph.num_detectors()).find(|&v| dd[v].is_infinite()) {
            return Err(Error::Disconnected(format!("detector {v} unreachable from {s}")));
        }
    }
    Ok(ShortestPaths { sources: sources.to_vec(), n, dist, pred })
}

/// One defect's partner: another defect (by position) or the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Partner {
    Defect(usize),
    Boundary,
}

/// Optimal pairing of `n` defects given pairwise and boundary costs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    pub weight: f64,
    pub partners: Vec<Partner>,
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooManyDefects(n, limit));
    }
    Ok(())
}

/// Exhaustive search over every pairing, each defect optionally matched to
/// the boundary. Test oracle.
pub fn brute_force_match(pair: &[Vec<f64>], boundary: &[f64]) -> Result<f64> {
    let n = boundary.len();
    check_size(n, BRUTE_FORCE_LIMIT)?;
    fn go(pair: &[Vec<f64>], boundary: &[f64], used: &mut [bool]) -> f64 {
        let Some(i) = used.iter().position(|u| !u) else {
            return 0.0;
        };
        used[i] = true;
        let mut best = boundary[i] + go(pair, boundary, used);
        for j in i + 1..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(pair[i][j] + go(pair, boundary, used));
                used[j] = false;
            }
        }
        used[i] = false;
        best
    }
    Ok(go(pair, boundary, &mut vec![false; n]))
}

/// Exact matching by dynamic programming over defect subsets.
pub fn subset_dp_match(pair: &[Vec<f64>], boundary: &[f64]) -> Result<Matching> {
    let n = boundary.len();
    check_size(n, 20)?;
    let full = (1usize << n) - 1;
    let mut best = vec![f64::INFINITY; full + 1];
    let mut choice = vec![u8::MAX; full + 1];
    best[0] = 0.0;
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut b = boundary[i] + best[rest];
        let mut c = i as u8;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let w = pair[i][j] + best[rest & !(1 << j)];
            if w < b {
                b = w;
                c = j as u8;
            }
        }
        best[mask] = b;
        choice[mask] = c;
    }
    let mut partners = vec![Partner::Boundary; n];
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask] as usize;
        mask &= !(1 << i);
        if j != i {
            partners[i] = Partner::Defect(j);
            partners[j] = Partner::Defect(i);
            mask &= !(1 << j);
        }
    }
    Ok(Matching { weight: best[full], partners })
}

/// Exact matching with the blossom algorithm. Each defect gets a private
/// boundary copy; boundary copies are joined by zero-cost edges.
pub fn blossom_match(pair: &[Vec<f64>], boundary: &[f64]) -> Matching {
    let n = boundary.len();
    if n == 0 {
        return Matching { weight: 0.0, partners: Vec::new() };
    }
    let scaled = |w: f64| (w * WEIGHT_SCALE).round() as i128;
    let mut max = 0i128;
    let mut g: UnGraph<(), i128> = UnGraph::with_capacity(2 * n, n * n * 2);
    for _ in 0..2 * n {
        g.add_node(());
    }
    let node = petgraph::graph::NodeIndex::new;
    let mut edges = Vec::new();
    for i in 0..n {
        for (j, &w) in pair[i].iter().enumerate().skip(i + 1) {
            edges.push((i, j, scaled(w)));
            edges.push((n + i, n + j, 0));
        }
        edges.push((i, n + i, scaled(boundary[i])));
    }
    for &(_, _, w) in &edges {
        max = max.max(w);
    }
    for (a, b, w) in edges {
        g.add_edge(node(a), node(b), max + 1 - w);
    }
    let matched = rustworkx_core::max_weight_matching::max_weight_matching(
        &g,
        true,
        |e| Ok::<_, std::convert::Infallible>(*e.weight()),
        false,
    )
    .unwrap_or_else(|e| match e {});
    let mut partners = vec![Partner::Boundary; n];
    let mut weight = 0.0;
    for (a, b) in matched {
        let (a, b) = (a.min(b), a.max(b));
        if b < n {
            partners[a] = Partner::Defect(b);
            partners[b] = Partner::Defect(a);
            weight += pair[a][b];
        } else if a < n {
            weight += boundary[a];
        }
    }
    Matching { weight, partners }
}

/// Pairwise costs, boundary costs and the boundary vertex of each defect.
pub type Costs = (Vec<Vec<f64>>, Vec<f64>, Vec<u32>);

/// Output of the second-level decoder for one block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchOutcome {
    pub weight: f64,
    pub predicted_flip: bool,
    /// Z corrections over the data qubits.
    pub corrections: Vec<bool>,
    pub defects: Vec<u32>,
    pub partners: Vec<Partner>,
}

impl MatchOutcome {
    pub fn correction_qubits(&self) -> Vec<DataId> {
        self.corrections.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| DataId(i)).collect()
    }
}

/// MWPM decoder with optional precomputed all-pairs tables.
#[derive(Debug, Clone)]
pub struct MatchingDecoder<'g> {
    graph: &'g DecodingGraph,
    table: Option<ShortestPaths>,
    /// Observable parity of the tabulated shortest path, per (source, target).
    flips: Vec<bool>,
}

impl<'g> MatchingDecoder<'g> {
    pub fn new(graph: &'g DecodingGraph) -> Result<Self> {
        let n = graph.num_vertices();
        if n > TABLE_LIMIT {
            return Ok(Self { graph, table: None, flips: Vec::new() });
        }
        let all: Vec<u32> = (0..graph.num_detectors() as u32).collect();
        let table = shortest_paths(graph, &all)?;
        let mut flips = vec![false; all.len() * n];
        for s in 0..all.len() {
            // walk the predecessor tree in distance order so each vertex
            // inherits its parent's parity
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_by(|a, b| table.distance(s, *a).total_cmp(&table.distance(s, *b)));
            for v in order {
                let e = table.pred[s * n + v as usize];
                if e == NO_EDGE {
                    continue;
                }
                let edge = graph.edge(e);
                let parent = if edge.u == v { edge.v } else { edge.u };
                flips[s * n + v as usize] = flips[s * n + parent as usize] ^ edge.logical_flip;
            }
        }
        Ok(Self { graph, table: Some(table), flips })
    }

    pub fn graph(&self) -> &DecodingGraph {
        self.graph
    }

    /// Pairwise and boundary costs for the defects, with the boundary vertex
    /// chosen for each defect.
    pub fn costs(&self, defects: &[u32]) -> Result<Costs> {
        let g = self.graph;
        let bounds = [g.boundary(crate::graph::Side::Left), g.boundary(crate::graph::Side::Right)];
        let local;
        let (paths, rows): (&ShortestPaths, Vec<usize>) = match &self.table {
            Some(t) => (t, defects.iter().map(|&d| d as usize).collect()),
            None => {
                local = shortest_paths(g, defects)?;
                (&local, (0..defects.len()).collect())
            }
        };
        let n = defects.len();
        let mut pair = vec![vec![0.0; n]; n];
        let mut boundary = vec![0.0; n];
        let mut side = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                pair[i][j] = paths.distance(rows[i], defects[j]);
            }
            let (l, r) = (paths.distance(rows[i], bounds[0]), paths.distance(rows[i], bounds[1]));
            (boundary[i], side[i]) = if l <= r { (l, bounds[0]) } else { (r, bounds[1]) };
        }
        Ok((pair, boundary, side))
    }

    fn path(&self, from: u32, to: u32, local: Option<(&ShortestPaths, usize)>) -> Vec<u32> {
        match (&self.table, local) {
            (_, Some((p, row))) => p.path_edges(self.graph, row, to),
            (Some(t), None) => t.path_edges(self.graph, from as usize, to),
            (None, None) => Vec::new(),
        }
    }

    /// Predicted observable flip only. Cheaper than [`Self::decode`] when
    /// tables are available.
    pub fn predict_flip(&self, block: &DetectorBlock) -> Result<bool> {
        if self.table.is_none() {
            return Ok(self.decode(block)?.predicted_flip);
        }
        let defects: Vec<u32> = block.defects().into_iter().map(|v| v as u32).collect();
        if defects.is_empty() {
            return Ok(false);
        }
        let (pair, boundary, side) = self.costs(&defects)?;
        let m = self.solve(&pair, &boundary)?;
        let n = self.graph.num_vertices();
        let mut flip = false;
        for (i, p) in m.partners.iter().enumerate() {
            let s = defects[i] as usize * n;
            match *p {
                Partner::Boundary => flip ^= self.flips[s + side[i] as usize],
                Partner::Defect(j) if j > i => flip ^= self.flips[s + defects[j] as usize],
                Partner::Defect(_) => {}
            }
        }
        Ok(flip)
    }

    fn solve(&self, pair: &[Vec<f64>], boundary: &[f64]) -> Result<Matching> {
        if boundary.len() <= DP_LIMIT {
            subset_dp_match(pair, boundary)
        } else {
            Ok(blossom_match(pair, boundary))
        }
    }

    pub fn decode(&self, block: &DetectorBlock) -> Result<MatchOutcome> {
        let g = self.graph;
        let defects: Vec<u32> = block.defects().into_iter().map(|v| v as u32).collect();
        let mut corrections = vec![false; g.lattice().num_data()];
        if defects.is_empty() {
            return Ok(MatchOutcome { weight: 0.0, predicted_flip: false, corrections, defects, partners: Vec::new() });
        }
        let local = if self.table.is_none() { Some(shortest_paths(g, &defects)?) } else { None };
        let (pair, boundary, side) = self.costs(&defects)?;
        let m = self.solve(&pair, &boundary)?;
        let mut flip = false;
        for (i, p) in m.partners.iter().enumerate() {
            let target = match *p {
                Partner::Boundary => side[i],
                Partner::Defect(j) if j > i => defects[j],
                Partner::Defect(_) => continue,
            };
            for e in self.path(defects[i], target, local.as_ref().map(|l| (l, i))) {
                let edge = g.edge(e);
                flip ^= edge.logical_flip;
                for q in &edge.correction {
                    corrections[q.0] ^= true;
                }
            }
        }
        Ok(MatchOutcome { weight: m.weight, predicted_flip: flip, corrections, defects, partners: m.partners })
    }
}

/// One-off MWPM decode without precomputed tables.
pub fn decode_block_mwpm(graph: &DecodingGraph, block: &DetectorBlock) -> Result<MatchOutcome> {
    MatchingDecoder { graph, table: None, flips: Vec::new() }.decode(block)
}
