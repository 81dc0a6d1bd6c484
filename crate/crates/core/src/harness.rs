//! Monte Carlo experiments and the analytic bandwidth, energy and capacity
//! models.
//!
//! Every `(d, p)` cell draws its blocks from a seed derived from the master
//! seed, `d` and `p` only, so all predecoders in a cell see the same blocks.
//! Blocks are processed in fixed-size chunks on the rayon pool and counts are
//! summed, which keeps results independent of the thread count.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{shot_rng, Circuit, DetectorBlock, FaultSampler, NoiseModel};
use crate::clique::Clique;
use crate::config::{EnergyParams, PredecoderKind, RunConfig};
use crate::error::{Error, Result};
use crate::graph::{build_graph_from_faults, DecodingGraph, EdgeClass};
use crate::lattice::{build_lattice, Lattice};
use crate::matching::MatchingDecoder;
use crate::predecoder::{build_pipeline, Pipeline, Predecoder};

pub const SCHEMA_VERSION: u32 = 1;

const CHUNK: u64 = 4096;

/// Everything needed to simulate and decode one `(d, p)` cell.
pub struct CodeSetup {
    pub lattice: Arc<Lattice>,
    pub noise: NoiseModel,
    pub graph: DecodingGraph,
    pub sampler: FaultSampler,
    pub pipeline: Pipeline,
    pub clique: Clique,
}

impl CodeSetup {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        let lattice = Arc::new(build_lattice(d)?);
        let noise = NoiseModel::si1000(p)?;
        let circuit = Circuit::new(lattice.clone(), d)?;
        let entries = circuit.enumerate_single_faults(&noise);
        let graph = build_graph_from_faults(lattice.clone(), d, &entries)?;
        let pipeline = build_pipeline(&graph)?;
        let clique = Clique::new(&graph);
        let sampler = FaultSampler::new(d, d, entries);
        Ok(Self { lattice, noise, graph, sampler, pipeline, clique })
    }

    pub fn distance(&self) -> usize {
        self.lattice.distance()
    }

    pub fn predecoder(&self, kind: PredecoderKind) -> Option<&dyn Predecoder> {
        match kind {
            PredecoderKind::Pinball => Some(&self.pipeline),
            PredecoderKind::Clique => Some(&self.clique),
            PredecoderKind::None => None,
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of a `(d, p)` cell.
pub fn cell_seed(master: u64, d: usize, p: f64) -> u64 {
    splitmix(splitmix(master ^ splitmix(d as u64)) ^ p.to_bits())
}

/// Raw tallies for one predecoder in one cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub shots: u64,
    pub complex: u64,
    /// Non-complex blocks whose predecoder correction was wrong.
    pub l1_errors: u64,
    /// Blocks whose final correction (predecoder or matching) was wrong.
    pub logical_errors: u64,
}

impl Counts {
    fn add(&mut self, o: &Counts) {
        self.shots += o.shots;
        self.complex += o.complex;
        self.l1_errors += o.l1_errors;
        self.logical_errors += o.logical_errors;
    }

    pub fn coverage(&self) -> f64 {
        (self.shots - self.complex) as f64 / self.shots as f64
    }

    /// `None` when no block was handled by the predecoder.
    pub fn accuracy(&self) -> Option<f64> {
        let handled = self.shots - self.complex;
        (handled > 0).then(|| (handled - self.l1_errors) as f64 / handled as f64)
    }

    pub fn ler(&self) -> f64 {
        self.logical_errors as f64 / self.shots as f64
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Bandwidth reduction relative to shipping every block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Savings {
    pub factor: f64,
    /// True when no block was offloaded; `factor` is then the shot count,
    /// a lower bound.
    pub lower_bound: bool,
}

pub fn bandwidth_savings(coverage: f64) -> f64 {
    1.0 / (1.0 - coverage)
}

pub fn bandwidth_savings_measured(c: &Counts) -> Savings {
    if c.complex == 0 {
        Savings { factor: c.shots as f64, lower_bound: true }
    } else {
        Savings { factor: bandwidth_savings(c.coverage()), lower_bound: false }
    }
}

/// Dynamic power ratio of two operating points, `P ∝ V² f`.
pub fn power_ratio(v_hi: f64, f_hi: f64, v_lo: f64, f_lo: f64) -> f64 {
    (v_hi * v_hi * f_hi) / (v_lo * v_lo * f_lo)
}

/// Transmission cost multiplier from packet framing.
pub fn packet_overhead(packet_bits: u32, header_bits: u32) -> f64 {
    packet_bits as f64 / (packet_bits - header_bits) as f64
}

/// Logical qubits a cooling budget can host at a given per-qubit power.
pub fn capacity(budget_w: f64, p_hp_mw: f64) -> u64 {
    if budget_w <= 0.0 || p_hp_mw <= 0.0 {
        return 0;
    }
    (budget_w / (p_hp_mw * 1e-3)).floor() as u64
}

/// High-performance predecoder power, interpolated linearly in `d²` between
/// 0.04 mW at d=3 and 0.56 mW at d=21 unless fixed by the parameters.
pub fn p_hp_mw(params: &EnergyParams, d: usize) -> f64 {
    params.p_hp_mw.unwrap_or_else(|| {
        let t = (d * d) as f64 - 9.0;
        0.04 + (0.56 - 0.04) * t / (441.0 - 9.0)
    })
}

/// Syndrome bits per `d`-round block: one bit per detector.
pub fn block_bits(d: usize) -> u64 {
    ((d + 1) * (d * d - 1) / 2) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energy {
    pub predecoder_pj: f64,
    pub transmission_pj: f64,
    pub baseline_pj: f64,
    pub savings: f64,
}

/// Per-block energy with and without predecoding. The predecoder runs one
/// round in high-performance mode and `d - 1` rounds in low-power mode.
pub fn energy_model(params: &EnergyParams, coverage: f64, d: usize, predecoding: bool) -> Energy {
    let overhead = packet_overhead(params.packet_bits, params.header_bits);
    let baseline = block_bits(d) as f64 * params.e_tx_pj_per_bit * overhead;
    if !predecoding {
        return Energy { predecoder_pj: 0.0, transmission_pj: baseline, baseline_pj: baseline, savings: 1.0 };
    }
    let p_hp = p_hp_mw(params, d);
    let p_lp = p_hp / power_ratio(params.hp_voltage, params.hp_freq_mhz, params.lp_voltage, params.lp_freq_mhz);
    // mW * us = nJ = 1000 pJ
    let e_pre = 1000.0 * params.round_time_us * (p_hp + p_lp * (d as f64 - 1.0));
    let e_tx = (1.0 - coverage) * baseline;
    Energy { predecoder_pj: e_pre, transmission_pj: e_tx, baseline_pj: baseline, savings: baseline / (e_pre + e_tx) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub d: usize,
    pub p: f64,
    pub predecoder: PredecoderKind,
    pub counts: Counts,
    pub coverage: f64,
    pub accuracy: Option<f64>,
    pub ler: f64,
    pub ler_low: f64,
    pub ler_high: f64,
    pub bandwidth: Savings,
    pub energy: Energy,
}

impl RunRow {
    fn new(d: usize, p: f64, predecoder: PredecoderKind, counts: Counts, params: &EnergyParams) -> Self {
        let (ler_low, ler_high) = wilson_interval(counts.logical_errors, counts.shots);
        let coverage = counts.coverage();
        Self {
            d,
            p,
            predecoder,
            counts,
            coverage,
            accuracy: counts.accuracy(),
            ler: counts.ler(),
            ler_low,
            ler_high,
            bandwidth: bandwidth_savings_measured(&counts),
            energy: energy_model(params, coverage, d, predecoder != PredecoderKind::None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub rows: Vec<RunRow>,
}

pub const CSV_HEADER: &str = "d,p,predecoder,shots,complex,coverage,accuracy,l1_errors,logical_errors,ler,ler_low,ler_high,bandwidth_savings,savings_lower_bound,e_predecoder_pj,e_transmission_pj,e_baseline_pj,energy_savings";

impl RunReport {
    /// CSV with the schema version and resolved configuration as `#` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema_version = {}", self.schema_version);
        for line in self.config.to_kv().lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{CSV_HEADER}");
        for r in &self.rows {
            let acc = r.accuracy.map(|a| a.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.d,
                r.p,
                r.predecoder.name(),
                r.counts.shots,
                r.counts.complex,
                r.coverage,
                acc,
                r.counts.l1_errors,
                r.counts.logical_errors,
                r.ler,
                r.ler_low,
                r.ler_high,
                r.bandwidth.factor,
                r.bandwidth.lower_bound,
                r.energy.predecoder_pj,
                r.energy.transmission_pj,
                r.energy.baseline_pj,
                r.energy.savings
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn row(&self, d: usize, p: f64, kind: PredecoderKind) -> Option<&RunRow> {
        self.rows.iter().find(|r| r.d == d && r.p == p && r.predecoder == kind)
    }
}

/// Simulate `shots` blocks of one cell and tally every requested predecoder
/// on the same blocks. Matching runs at most once per block.
pub fn run_cell(setup: &CodeSetup, kinds: &[PredecoderKind], shots: u64, seed: u64) -> Result<Vec<Counts>> {
    let matcher = MatchingDecoder::new(&setup.graph)?;
    let preds: Vec<Option<&dyn Predecoder>> = kinds.iter().map(|&k| setup.predecoder(k)).collect();
    let chunks = shots.div_ceil(CHUNK);
    let per_chunk = |c: u64| -> Result<Vec<Counts>> {
        let mut counts = vec![Counts::default(); kinds.len()];
        let mut block = setup.sampler.empty_block();
        let mut fired = Vec::new();
        for shot in c * CHUNK..((c + 1) * CHUNK).min(shots) {
            let mut rng = shot_rng(seed, shot);
            setup.sampler.sample_into(&mut rng, &mut block, &mut fired);
            let silent = block.is_silent();
            let mut mwpm: Option<bool> = None;
            for (k, pred) in preds.iter().enumerate() {
                let cnt = &mut counts[k];
                cnt.shots += 1;
                let outcome = match (pred, silent) {
                    (Some(_), true) => None,
                    (Some(p), false) => Some(p.predecode(&block)),
                    (None, _) => Some(crate::predecoder::PredecodeOutcome::complex()),
                };
                let predicted = match outcome {
                    Some(o) if o.complex => {
                        cnt.complex += 1;
                        match mwpm {
                            Some(f) => f,
                            None => {
                                let f = if silent { false } else { matcher.predict_flip(&block)? };
                                mwpm = Some(f);
                                f
                            }
                        }
                    }
                    Some(o) => {
                        if o.predicted_flip != block.logical_flip {
                            cnt.l1_errors += 1;
                        }
                        o.predicted_flip
                    }
                    None => {
                        if block.logical_flip {
                            cnt.l1_errors += 1;
                        }
                        false
                    }
                };
                if predicted != block.logical_flip {
                    cnt.logical_errors += 1;
                }
            }
        }
        Ok(counts)
    };
    let parts: Vec<Vec<Counts>> = (0..chunks).into_par_iter().map(per_chunk).collect::<Result<_>>()?;
    let mut total = vec![Counts::default(); kinds.len()];
    for part in parts {
        for (t, c) in total.iter_mut().zip(&part) {
            t.add(c);
        }
    }
    Ok(total)
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Run the Cartesian product of distances, rates and predecoders.
pub fn run_experiment(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let mut rows = Vec::new();
    for &d in &config.distances {
        for &p in &config.rates {
            log::info!("cell d={d} p={p} shots={}", config.shots);
            let setup = CodeSetup::new(d, p)?;
            let seed = cell_seed(config.seed, d, p);
            let counts = with_pool(config.threads, || run_cell(&setup, &config.predecoders, config.shots, seed))??;
            for (&kind, c) in config.predecoders.iter().zip(counts) {
                rows.push(RunRow::new(d, p, kind, c, &config.energy));
            }
        }
    }
    Ok(RunReport { schema_version: SCHEMA_VERSION, config: config.clone(), rows })
}

/// Edges realized an odd number of times by the fired faults.
pub fn realized_edges(setup: &CodeSetup, fired: &[u32]) -> Vec<u32> {
    let mut edges: Vec<u32> = fired.iter().flat_map(|&f| setup.graph.fault_edges(f as usize).iter().copied()).collect();
    edges.sort_unstable();
    let mut out = Vec::with_capacity(edges.len());
    let mut i = 0;
    while i < edges.len() {
        let mut j = i;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(edges[i]);
        }
        i = j;
    }
    out
}

/// Connected components of realized edges, as lists of edge ids. Boundary
/// vertices do not join components.
pub fn error_chains(graph: &DecodingGraph, edges: &[u32]) -> Vec<Vec<u32>> {
    let n = edges.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut owner: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for (i, &e) in edges.iter().enumerate() {
        let edge = graph.edge(e);
        for v in [edge.u, edge.v] {
            if graph.is_boundary(v) {
                continue;
            }
            if let Some(&j) = owner.get(&v) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            } else {
                owner.insert(v, i);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<u32>> = std::collections::BTreeMap::new();
    for (i, &e) in edges.iter().enumerate() {
        groups.entry(find(&mut parent, i)).or_default().push(e);
    }
    groups.into_values().collect()
}

/// Histogram of the longest error chain per block, indexed by edge count.
pub fn chain_length_histogram(setup: &CodeSetup, shots: u64, seed: u64) -> Vec<u64> {
    let chunks = shots.div_ceil(CHUNK);
    let parts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hist = Vec::new();
            let mut fired = Vec::new();
            for shot in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                setup.sampler.sample_faults(&mut shot_rng(seed, shot), &mut fired);
                let edges = realized_edges(setup, &fired);
                let longest = error_chains(&setup.graph, &edges).iter().map(Vec::len).max().unwrap_or(0);
                if hist.len() <= longest {
                    hist.resize(longest + 1, 0);
                }
                hist[longest] += 1;
            }
            hist
        })
        .collect();
    let mut total: Vec<u64> = Vec::new();
    for h in parts {
        if total.len() < h.len() {
            total.resize(h.len(), 0);
        }
        for (t, x) in total.iter_mut().zip(h) {
            *t += x;
        }
    }
    total
}

/// Classes used when tallying isolated length-1 errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ErrorKind {
    TimeLike,
    SpaceLike,
    SpacetimeSingle,
    Hook,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 4] = [ErrorKind::TimeLike, ErrorKind::SpaceLike, ErrorKind::SpacetimeSingle, ErrorKind::Hook];

    pub fn of(class: EdgeClass) -> Self {
        match class {
            EdgeClass::Time => ErrorKind::TimeLike,
            EdgeClass::BulkSpace | EdgeClass::EdgeSpace => ErrorKind::SpaceLike,
            EdgeClass::SpacetimeSingle => ErrorKind::SpacetimeSingle,
            EdgeClass::Hook => ErrorKind::Hook,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::TimeLike => "time-like",
            ErrorKind::SpaceLike => "space-like",
            ErrorKind::SpacetimeSingle => "spacetime-single",
            ErrorKind::Hook => "hook",
        }
    }
}

/// Counts of isolated length-1 chains by class, in [`ErrorKind::ALL`] order.
pub fn length_one_distribution(setup: &CodeSetup, shots: u64, seed: u64) -> [u64; 4] {
    let chunks = shots.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tally = [0u64; 4];
            let mut fired = Vec::new();
            for shot in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                setup.sampler.sample_faults(&mut shot_rng(seed, shot), &mut fired);
                let edges = realized_edges(setup, &fired);
                for chain in error_chains(&setup.graph, &edges) {
                    if let [e] = chain.as_slice() {
                        let k = ErrorKind::of(setup.graph.edge(*e).class);
                        tally[ErrorKind::ALL.iter().position(|&x| x == k).unwrap()] += 1;
                    }
                }
            }
            tally
        })
        .reduce(|| [0; 4], |a, b| std::array::from_fn(|i| a[i] + b[i]))
}

/// Fractions from [`length_one_distribution`].
pub fn normalize(tally: &[u64; 4]) -> [f64; 4] {
    let total: u64 = tally.iter().sum();
    std::array::from_fn(|i| if total == 0 { 0.0 } else { tally[i] as f64 / total as f64 })
}

/// Predecode a single block with every structural check a caller might want:
/// the original block must be left untouched and complex outcomes carry no
/// corrections.
pub fn predecode_checked(pred: &dyn Predecoder, block: &DetectorBlock) -> Result<crate::predecoder::PredecodeOutcome> {
    let before = block.clone();
    let out = pred.predecode(block);
    if &before != block {
        return Err(Error::Coverage("predecoder modified its input".into()));
    }
    if out.complex && !out.corrections.is_empty() {
        return Err(Error::Coverage("complex outcome carries corrections".into()));
    }
    Ok(out)
}

/// What the structural checks covered for one distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureSummary {
    pub d: usize,
    pub faults: usize,
    pub edges: usize,
    pub primitives: usize,
    pub stages: usize,
}

/// Schedule validity, single-fault soundness of the decoding graph, and
/// exactly-once, conflict-free pipeline coverage.
pub fn validate_structure(setup: &CodeSetup) -> Result<StructureSummary> {
    setup.lattice.validate_schedule()?;
    let g = &setup.graph;
    let entries = setup.sampler.entries();
    for (i, e) in entries.iter().enumerate() {
        let mut dets: Vec<u32> = Vec::new();
        let mut flip = false;
        for &id in g.fault_edges(i) {
            let edge = g.edge(id);
            for v in [edge.u, edge.v] {
                if g.is_boundary(v) {
                    continue;
                }
                match dets.iter().position(|&x| x == v) {
                    Some(k) => {
                        dets.swap_remove(k);
                    }
                    None => dets.push(v),
                }
            }
            flip ^= edge.logical_flip;
        }
        dets.sort_unstable();
        if dets != e.detectors || flip != e.logical_flip {
            return Err(Error::Unclassifiable(format!("fault {:?} is not reproduced by its edges", e.fault)));
        }
    }
    let lat = g.lattice();
    for e in g.edges() {
        let mut want = vec![false; lat.num_x()];
        for v in [e.u, e.v] {
            if let Some((_, a)) = g.coords(v) {
                want[a] ^= true;
            }
        }
        if lat.x_syndrome_of(e.correction.iter().copied()) != want {
            return Err(Error::Unclassifiable(format!("correction of edge {}-{} misses its endpoints", e.u, e.v)));
        }
    }
    let p = &setup.pipeline;
    if p.num_stages() != 9 {
        return Err(Error::Coverage(format!("{} stages", p.num_stages())));
    }
    p.verify_coverage(g)?;
    Ok(StructureSummary {
        d: setup.distance(),
        faults: entries.len(),
        edges: g.edges().len(),
        primitives: p.num_primitives(),
        stages: p.num_stages(),
    })
}

/// Decode a block holding only one edge, for every edge. Returns the number
/// of edges checked.
pub fn validate_single_edges(setup: &CodeSetup) -> Result<usize> {
    let g = &setup.graph;
    for id in 0..g.edges().len() as u32 {
        let block = crate::predecoder::block_for_edge(g, id);
        let out = predecode_checked(&setup.pipeline, &block)?;
        let e = g.edge(id);
        if out.complex {
            return Err(Error::Coverage(format!("single {} edge {}-{} flagged complex", e.class.name(), e.u, e.v)));
        }
        if !crate::predecoder::stabilizer_equivalent(g.lattice(), &out.correction_qubits(), &e.correction) {
            return Err(Error::Coverage(format!("single {} edge {}-{} miscorrected", e.class.name(), e.u, e.v)));
        }
    }
    Ok(g.edges().len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_estimate() {
        let (lo, hi) = wilson_interval(10, 1000);
        assert!(lo < 0.01 && hi > 0.01);
        assert_eq!(wilson_interval(0, 100).0, 0.0);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn model_arithmetic() {
        assert_eq!(bandwidth_savings(0.5), 2.0);
        assert!((power_ratio(0.8, 100.0, 0.48, 12.5) - 22.22).abs() < 0.01);
        assert!((power_ratio(0.8, 100.0, 0.54, 12.5) - 17.56).abs() < 0.01);
        assert_eq!(packet_overhead(64, 32), 2.0);
        assert_eq!(capacity(1.5, 0.56), 2678);
        assert_eq!(capacity(0.0, 0.56), 0);
        assert_eq!(block_bits(3), 16);
        let e = energy_model(&EnergyParams::default(), 0.0, 5, false);
        assert_eq!(e.savings, 1.0);
    }

    #[test]
    fn d3_pinball_has_full_coverage() {
        let setup = CodeSetup::new(3, 1e-3).unwrap();
        let c = run_cell(&setup, &[PredecoderKind::Pinball, PredecoderKind::None], 5000, 4).unwrap();
        assert_eq!(c[0].complex, 0);
        assert_eq!(c[1].complex, 5000);
        assert_eq!(c[1].coverage(), 0.0);
    }

    #[test]
    fn report_is_deterministic_across_thread_counts() {
        let mut cfg = RunConfig { distances: vec![3, 5], rates: vec![5e-3], shots: 3000, ..RunConfig::default() };
        cfg.predecoders = vec![PredecoderKind::Pinball, PredecoderKind::Clique, PredecoderKind::None];
        cfg.threads = Some(1);
        let a = run_experiment(&cfg).unwrap().rows;
        cfg.threads = Some(3);
        let b = run_experiment(&cfg).unwrap().rows;
        assert_eq!(a, b);
    }

    #[test]
    fn chains_split_at_boundaries() {
        let setup = CodeSetup::new(5, 1e-3).unwrap();
        let g = &setup.graph;
        let edge_space: Vec<u32> =
            (0..g.edges().len() as u32).filter(|&e| g.edge(e).class == EdgeClass::EdgeSpace).take(2).collect();
        assert_eq!(error_chains(g, &edge_space).len(), 2);
        let hist = chain_length_histogram(&setup, 2000, 3);
        assert_eq!(hist.iter().sum::<u64>(), 2000);
    }
}
