//! Fast shot sampling from the enumerated single-fault table.
//!
//! Under Pauli-frame linearity a shot is the XOR of the effects of the faults
//! that fired. Channels with the same firing probability are grouped and the
//! next firing channel is found by geometric skipping, so the cost of a shot
//! scales with the number of faults that fire rather than with circuit size.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::block::DetectorBlock;
use super::faults::FaultEntry;
use super::noise::ChannelKind;

#[derive(Debug, Clone)]
struct Group {
    prob: f64,
    ln_miss: f64,
    /// Outcomes per channel in this group.
    stride: usize,
    /// Fault-entry indices, `stride` consecutive entries per channel.
    outcomes: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FaultSampler {
    d: usize,
    rounds: usize,
    entries: Vec<FaultEntry>,
    groups: Vec<Group>,
}

/// Deterministic per-shot generator: the master seed selects the key and the
/// shot index selects the stream.
pub fn shot_rng(master_seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(shot);
    rng
}

impl FaultSampler {
    /// Build from an enumerated fault table. Outcomes with no effect are dropped.
    pub fn new(d: usize, rounds: usize, entries: Vec<FaultEntry>) -> Self {
        // (kind, kept outcomes) -> channel -> kept entry indices
        let mut by_channel: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            let kept = by_channel.entry(e.channel).or_default();
            if !e.is_trivial() && e.probability > 0.0 {
                kept.push(i as u32);
            }
        }
        let mut groups: BTreeMap<(u8, usize), Group> = BTreeMap::new();
        for (_, kept) in by_channel {
            if kept.is_empty() {
                continue;
            }
            let first = &entries[kept[0] as usize];
            let key = (kind_code(first.kind), kept.len());
            let prob = first.probability * kept.len() as f64;
            let g = groups.entry(key).or_insert_with(|| Group {
                prob,
                ln_miss: (1.0 - prob).ln(),
                stride: kept.len(),
                outcomes: Vec::new(),
            });
            g.outcomes.extend_from_slice(&kept);
        }
        Self { d, rounds, entries, groups: groups.into_values().collect() }
    }

    pub fn entries(&self) -> &[FaultEntry] {
        &self.entries
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Expected number of effective faults per shot.
    pub fn mean_faults(&self) -> f64 {
        self.groups.iter().map(|g| g.prob * (g.outcomes.len() / g.stride) as f64).sum()
    }

    /// Draw the fired fault indices for one shot.
    pub fn sample_faults<R: Rng>(&self, rng: &mut R, fired: &mut Vec<u32>) {
        fired.clear();
        for g in &self.groups {
            let n = g.outcomes.len() / g.stride;
            if g.prob <= 0.0 {
                continue;
            }
            let mut i = 0usize;
            loop {
                if g.prob < 1.0 {
                    let u: f64 = 1.0 - rng.random::<f64>();
                    let skip = (u.ln() / g.ln_miss).floor();
                    if skip >= (n - i) as f64 {
                        break;
                    }
                    i += skip as usize;
                }
                if i >= n {
                    break;
                }
                let j = if g.stride == 1 { 0 } else { rng.random_range(0..g.stride) };
                fired.push(g.outcomes[i * g.stride + j]);
                i += 1;
            }
        }
    }

    /// XOR the effects of `fired` into a cleared block.
    pub fn apply(&self, fired: &[u32], block: &mut DetectorBlock) {
        block.clear();
        for &f in fired {
            let e = &self.entries[f as usize];
            for &det in &e.detectors {
                block.toggle(det as usize);
            }
            block.logical_flip ^= e.logical_flip;
        }
    }

    pub fn sample_into<R: Rng>(&self, rng: &mut R, block: &mut DetectorBlock, fired: &mut Vec<u32>) {
        self.sample_faults(rng, fired);
        self.apply(fired, block);
    }

    pub fn empty_block(&self) -> DetectorBlock {
        DetectorBlock::zeros(self.d, self.rounds)
    }

    pub fn sample_shot(&self, master_seed: u64, shot: u64) -> DetectorBlock {
        let mut rng = shot_rng(master_seed, shot);
        let mut block = self.empty_block();
        let mut fired = Vec::new();
        self.sample_into(&mut rng, &mut block, &mut fired);
        block
    }
}

fn kind_code(k: ChannelKind) -> u8 {
    ChannelKind::ALL.iter().position(|&c| c == k).unwrap_or(0) as u8
}
