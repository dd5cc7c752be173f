//! One measurement step: tap a fraction `r` of the signal, displace the tap
//! and count photons.

use fock_receiver::fock::presets;
use fock_receiver::operators::{beamsplitter_tap, step_kraus};
use num_complex::Complex64 as C64;

fn main() -> fock_receiver::Result<()> {
    let pair = presets::cat(1.0, 24)?;
    let n = 16;
    let fam = step_kraus(1.0 / n as f64, C64::new(0.25, 0.0), 4, 24)?;
    let c = fam.completeness();
    println!(
        "completeness residual {:.2e} (explicit outcomes miss {:.2e})",
        c.residual, c.explicit_deficit
    );
    for (name, v) in [("even cat", pair.psi()), ("odd cat", pair.phi())] {
        let p = fam.probabilities(v);
        println!(
            "{name:>8}: P(k) = {}",
            p.iter()
                .map(|x| format!("{x:.3e}"))
                .collect::<Vec<_>>()
                .join("  ")
        );
    }

    // undisplaced tap of a single photon: it stays or goes with probability 1-r, r
    let branches = beamsplitter_tap(&fock_receiver::FockVector::basis(24, 1), 0.25, 1)?;
    for (k, b) in branches.iter().enumerate() {
        println!("single photon, tap count {k}: weight {:.4}", b.norm_sqr());
    }
    Ok(())
}
