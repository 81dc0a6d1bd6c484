//! Coverage and accuracy of Pinball and Clique on the same blocks.

use pinball::config::PredecoderKind;
use pinball::harness::{run_cell, CodeSetup};

pub fn main() {
    let shots = 4000;
    let kinds = [PredecoderKind::Pinball, PredecoderKind::Clique];
    println!("d    pinball cov/acc      clique cov/acc");
    for d in [3, 5, 7] {
        let setup = CodeSetup::new(d, 1e-3).unwrap();
        let c = run_cell(&setup, &kinds, shots, 11).unwrap();
        let acc = |i: usize| c[i].accuracy().unwrap_or(f64::NAN);
        println!("{d:<3} {:.4}/{:.5}     {:.4}/{:.5}", c[0].coverage(), acc(0), c[1].coverage(), acc(1));
    }
}
