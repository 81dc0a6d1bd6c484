//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with
//! `cargo test -p pinball --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use pinball::circuit::shot_rng;
use pinball::config::{EnergyParams, PredecoderKind, RunConfig};
use pinball::harness::{self, CodeSetup, ErrorKind};
use pinball::matching::{blossom_match, brute_force_match, MatchingDecoder, BRUTE_FORCE_LIMIT};
use pinball::Predecoder;

type Verdict = Result<String, String>;
type Check = fn() -> Verdict;

const LENGTH_ONE_TARGET: [f64; 4] = [48.02, 41.65, 7.69, 2.63];
const LENGTH_ONE_TOL_PTS: f64 = 3.0;
const SAVINGS_RANGE: (f64, f64) = (2000.0, 6000.0);
const LER_RATIO_MAX: f64 = 2.0;
const ENERGY_REL_TOL: f64 = 0.01;

/// Predecoder-only tally: (shots, complex, handled blocks with a wrong flip).
/// Matching is not needed for coverage or accuracy.
fn tally(setup: &CodeSetup, pred: &dyn Predecoder, shots: u64, seed: u64) -> (u64, u64, u64) {
    const CHUNK: u64 = 4096;
    let (complex, wrong) = (0..shots.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut block = setup.sampler.empty_block();
            let mut fired = Vec::new();
            let (mut complex, mut wrong) = (0, 0);
            for shot in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                setup.sampler.sample_into(&mut shot_rng(seed, shot), &mut block, &mut fired);
                if block.is_silent() {
                    wrong += u64::from(block.logical_flip);
                    continue;
                }
                let out = pred.predecode(&block);
                if out.complex {
                    complex += 1;
                } else if out.predicted_flip != block.logical_flip {
                    wrong += 1;
                }
            }
            (complex, wrong)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    (shots, complex, wrong)
}

fn setup(d: usize, p: f64) -> Result<CodeSetup, String> {
    CodeSetup::new(d, p).map_err(|e| e.to_string())
}

fn structure() -> Verdict {
    let t = Instant::now();
    for d in [3, 5, 7, 9, 11] {
        let s = setup(d, 1e-3)?;
        s.lattice.validate_schedule().map_err(|e| format!("d={d}: {e}"))?;
        let sum = harness::validate_structure(&s).map_err(|e| format!("d={d}: {e}"))?;
        if sum.stages != 9 {
            return Err(format!("d={d}: {} stages", sum.stages));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("d=3..11 valid in {secs:.1} s"))
}

fn single_edges() -> Verdict {
    let t = Instant::now();
    let mut total = 0;
    for d in [3, 5, 7, 9, 11] {
        total += harness::validate_single_edges(&setup(d, 1e-3)?).map_err(|e| format!("d={d}: {e}"))?;
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 300.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("{total} edges decoded in {secs:.1} s"))
}

fn length_one_classes() -> Verdict {
    let s = setup(11, 1e-3)?;
    let dist = harness::normalize(&harness::length_one_distribution(&s, 100_000, 2024));
    let mut detail = Vec::new();
    let mut ok = true;
    for (k, kind) in ErrorKind::ALL.iter().enumerate() {
        let pct = 100.0 * dist[k];
        ok &= (pct - LENGTH_ONE_TARGET[k]).abs() <= LENGTH_ONE_TOL_PTS;
        detail.push(format!("{} {pct:.2}% (target {})", kind.name(), LENGTH_ONE_TARGET[k]));
    }
    let detail = detail.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn full_coverage_d3() -> Verdict {
    let mut detail = Vec::new();
    for p in [1e-4, 1e-3, 1e-2] {
        let s = setup(3, p)?;
        let (shots, complex, _) = tally(&s, &s.pipeline, 100_000, 31);
        if complex != 0 {
            return Err(format!("p={p}: {complex} complex of {shots}"));
        }
        detail.push(format!("p={p}"));
    }
    Ok(format!("0 complex in 1e5 shots at {}", detail.join(", ")))
}

fn dominance() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for d in [5, 7, 9, 11] {
        let s = setup(d, 1e-3)?;
        let stats = |pred: &dyn Predecoder| {
            let (shots, complex, wrong) = tally(&s, pred, 100_000, 57);
            let handled = shots - complex;
            let acc = if handled == 0 { 0.0 } else { 1.0 - wrong as f64 / handled as f64 };
            (1.0 - complex as f64 / shots as f64, acc)
        };
        let (pc, pa) = stats(&s.pipeline);
        let (cc, ca) = stats(&s.clique);
        ok &= pc > cc && pa >= ca;
        detail.push(format!("d={d} cov {pc:.4}/{cc:.4} acc {pa:.5}/{ca:.5}"));
    }
    let detail = format!("pinball/clique: {}", detail.join("; "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bandwidth() -> Verdict {
    let cfg = RunConfig { distances: vec![5], rates: vec![1e-4], shots: 10_000_000, seed: 6, ..RunConfig::default() };
    let report = harness::run_experiment(&cfg).map_err(|e| e.to_string())?;
    let row = report.row(5, 1e-4, PredecoderKind::Pinball).ok_or("missing row")?;
    if row.bandwidth.lower_bound || row.bandwidth.factor != 1.0 / (1.0 - row.coverage) {
        return Err(format!("factor {} does not equal 1/(1-{})", row.bandwidth.factor, row.coverage));
    }
    let f = row.bandwidth.factor;
    let detail = format!("{} complex in 1e7 shots, savings {f:.1}", row.counts.complex);
    if (SAVINGS_RANGE.0..=SAVINGS_RANGE.1).contains(&f) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ler_parity() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for d in [7, 9] {
        let s = setup(d, 1e-3)?;
        let c = harness::run_cell(&s, &[PredecoderKind::None, PredecoderKind::Pinball], 1_000_000, 77 + d as u64)
            .map_err(|e| e.to_string())?;
        let (a, b) = (c[0].ler(), c[1].ler());
        let ratio = if a.min(b) > 0.0 { a.max(b) / a.min(b) } else { f64::INFINITY };
        ok &= ratio <= LER_RATIO_MAX;
        detail.push(format!("d={d} mwpm {a:.3e} pinball+mwpm {b:.3e} ratio {ratio:.2}"));
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn matching_optimality() -> Verdict {
    let s = setup(5, 1e-2)?;
    let dec = MatchingDecoder::new(&s.graph).map_err(|e| e.to_string())?;
    let (mut checked, mut mismatches) = (0, 0);
    for shot in 0..10_000 {
        let block = s.sampler.sample_shot(88, shot);
        let n = block.defects().len();
        if n == 0 || n > BRUTE_FORCE_LIMIT {
            continue;
        }
        let out = dec.decode(&block).map_err(|e| e.to_string())?;
        let (pair, boundary, _) = dec.costs(&out.defects).map_err(|e| e.to_string())?;
        let oracle = brute_force_match(&pair, &boundary).map_err(|e| e.to_string())?;
        let blossom = blossom_match(&pair, &boundary).weight;
        checked += 1;
        let tol = 1e-9 * oracle.abs().max(1.0);
        // blossom works on weights rounded to 1e-6
        let quantized = n as f64 * 1e-6;
        if (out.weight - oracle).abs() > tol || (blossom - oracle).abs() > quantized {
            mismatches += 1;
        }
    }
    let detail = format!("{checked} blocks checked, {mismatches} mismatches");
    if mismatches == 0 && checked > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn energy() -> Verdict {
    let e = EnergyParams::default();
    let r048 = harness::power_ratio(e.hp_voltage, e.hp_freq_mhz, 0.48, e.lp_freq_mhz);
    let r054 = harness::power_ratio(e.hp_voltage, e.hp_freq_mhz, 0.54, e.lp_freq_mhz);
    let overhead = harness::packet_overhead(e.packet_bits, e.header_bits);
    let cap = harness::capacity(e.budget_w, 0.56);
    let close = |x: f64, t: f64| ((x - t) / t).abs() <= ENERGY_REL_TOL;
    let detail = format!("ratios {r048:.2}x {r054:.2}x, overhead {overhead}, capacity {cap}");
    if close(r048, 22.2) && close(r054, 17.5) && overhead == 2.0 && close(cap as f64, 2668.0) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Verdict {
    let cfg = RunConfig {
        distances: vec![3, 5],
        rates: vec![1e-3, 5e-3],
        shots: 20_000,
        predecoders: vec![PredecoderKind::Pinball, PredecoderKind::Clique, PredecoderKind::None],
        seed: 4242,
        ..RunConfig::default()
    };
    let run =
        |threads| harness::run_experiment(&RunConfig { threads, ..cfg.clone() }).map(|r| r.to_csv()).map_err(|e| e.to_string());
    let (a, b) = (run(None)?, run(None)?);
    if a != b {
        return Err("repeated run differs".into());
    }
    let rows = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    if rows(&run(Some(1))?) != rows(&a) {
        return Err("single-threaded rows differ".into());
    }
    Ok(format!("{} bytes identical across repeats and thread counts", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("structural invariants", structure),
        ("single-edge exhaustive decode", single_edges),
        ("length-one error classes", length_one_classes),
        ("full coverage at d=3", full_coverage_d3),
        ("dominance over clique", dominance),
        ("bandwidth savings", bandwidth),
        ("logical error rate parity", ler_parity),
        ("matching optimality", matching_optimality),
        ("energy arithmetic", energy),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {} {name}: {detail} [{:.1} s]", i + 1, t.elapsed().as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
