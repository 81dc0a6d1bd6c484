//! Longest error chain per block and the class mix of isolated length-1
//! errors.

use pinball::harness::{chain_length_histogram, length_one_distribution, normalize, CodeSetup, ErrorKind};

pub fn main() {
    let setup = CodeSetup::new(7, 1e-3).unwrap();
    let hist = chain_length_histogram(&setup, 5000, 1);
    for (len, n) in hist.iter().enumerate() {
        println!("longest chain {len}: {n}");
    }
    let frac = normalize(&length_one_distribution(&setup, 5000, 1));
    for (k, f) in ErrorKind::ALL.iter().zip(frac) {
        println!("{:>17}: {:.2}%", k.name(), 100.0 * f);
    }
}
