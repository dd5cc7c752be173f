//! Exact error probabilities by enumerating every detection record.

use fock_receiver::engine::{exact_error_probability, EngineConfig, FailurePolicy};
use fock_receiver::fock::presets;

fn main() -> fock_receiver::Result<()> {
    let cfg = EngineConfig::default();
    let zero_one = presets::zero_one(24);
    let cat = presets::cat(1.0, 24)?;
    for n in [2, 4, 8, 12] {
        let a = exact_error_probability(&zero_one, n, &cfg)?;
        let b = exact_error_probability(&cat, n, &cfg)?;
        println!(
            "N={n:>2}  (|0>,|1>) p_err {:.1e}   cat p_err {:.5e}  p_fail {:.5e}  pruned {:.1e}",
            a.p_err, b.p_err, b.p_fail, b.pruned_mass
        );
    }
    let coin = EngineConfig {
        failure_policy: FailurePolicy::FairCoin,
        ..cfg
    };
    let c = exact_error_probability(&cat, 8, &coin)?;
    println!("N=8 with coin-flip failures: p_err {:.5e}", c.p_err);
    Ok(())
}
