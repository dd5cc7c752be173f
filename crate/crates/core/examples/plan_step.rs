//! Feedforward planning of the first step and the final alignment, for a
//! generic and a degenerate pair.

use fock_receiver::fock::presets;
use fock_receiver::receiver::{analyze_x, decompose, Planner, ReceiverConfig};

fn main() -> fock_receiver::Result<()> {
    let cfg = ReceiverConfig::default();
    for (name, pair) in [
        ("cat", presets::cat(1.0, 24)?),
        ("plus-minus", presets::plus_minus(24)),
    ] {
        let n = 64;
        let d = decompose(pair.psi(), pair.phi(), 1.0 / n as f64)?;
        let an = analyze_x(&d, cfg.deg_tol);
        println!(
            "{name}: identity residual {:.1e}, verdict {:?}",
            d.identity_residual(pair.overlap()),
            an.report.verdict
        );

        let planner = Planner::new(&pair, n, &cfg)?;
        println!(
            "  planned in rotated basis: {} (delta = {:?})",
            planner.is_perturbed(),
            planner.delta()
        );
        let (first, _) = planner.plan(1, &planner.initial_design())?;
        println!(
            "  step 1: r = {:.4}, beta = {:.4}, cap {:.3}, source {:?}",
            first.r, first.beta, first.beta_cap, first.source
        );
        let (last, _) = planner.plan(n, &planner.initial_design())?;
        println!(
            "  final step on the inputs: beta = {:.4}, orientation {:?}",
            last.beta,
            last.orientation.unwrap()
        );
    }
    Ok(())
}
