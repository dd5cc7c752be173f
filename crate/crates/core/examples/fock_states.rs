//! Build state pairs, certify their photon-number tails and round-trip the
//! JSON pair format.

use fock_receiver::fock::{certify_tail, presets, PairFile, DEFAULT_TRUNC_BUDGET};
use fock_receiver::FockVector;

fn main() -> fock_receiver::Result<()> {
    let cat = presets::cat(1.0, 24)?;
    println!(
        "cat pair: overlap {:.2e}, discarded norm {:.2e}",
        cat.overlap().norm(),
        cat.discarded_norm()
    );
    for (name, v) in [("even", cat.psi()), ("odd", cat.phi())] {
        let tail = certify_tail(v);
        println!(
            "  {name:<4} <n> = {:.4}  tail x = {:.3}  c_max = {:.3}",
            v.mean_photon_number(),
            tail.x,
            tail.c_max
        );
    }

    // raw vectors are orthogonalised on ingestion
    let file = PairFile {
        cutoff: 24,
        psi: vec![[0.8, 0.0], [0.6, 0.0]],
        phi: vec![[0.6, 0.1], [-0.7, 0.0], [0.1, 0.0]],
    };
    let pair = file.clone().into_pair(DEFAULT_TRUNC_BUDGET)?;
    println!("ingested pair: overlap {:.2e}", pair.overlap().norm());
    println!(
        "{}",
        PairFile::from_pair(&pair)
            .to_json()?
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join(" ")
    );

    let vacuum = FockVector::basis(24, 0);
    println!(
        "vacuum tail: finite support = {}",
        certify_tail(&vacuum).finite_support
    );
    Ok(())
}
