//! Power ratios of the low-power operating points, framing overhead,
//! cooling-budget capacity and per-block energy.

use pinball::config::EnergyParams;
use pinball::harness::{capacity, energy_model, packet_overhead, power_ratio};

pub fn main() {
    println!("0.48 V / 12.5 MHz: {:.2}x less power", power_ratio(0.8, 100.0, 0.48, 12.5));
    println!("0.54 V / 12.5 MHz: {:.2}x less power", power_ratio(0.8, 100.0, 0.54, 12.5));
    println!("64-bit packets, 32-bit headers: {}x transmission", packet_overhead(64, 32));
    println!("1.5 W at 0.56 mW: {} logical qubits", capacity(1.5, 0.56));
    println!("1.5 W at 0.0402 mW: {} logical qubits", capacity(1.5, 0.0402));
    let params = EnergyParams::default();
    for (d, coverage) in [(5, 0.9997), (11, 0.72), (21, 0.07)] {
        let e = energy_model(&params, coverage, d, true);
        println!(
            "d={d} coverage {coverage}: {:.1} pJ predecode + {:.1} pJ link vs {:.1} pJ -> {:.2}x",
            e.predecoder_pj, e.transmission_pj, e.baseline_pj, e.savings
        );
    }
}
