//! Run the analytic bound grids and print their summary.

use fock_receiver::analysis::{cmd_validate, ValidateConfig};

fn main() -> fock_receiver::Result<()> {
    let report = cmd_validate(&ValidateConfig::default())?;
    for g in &report.grids {
        println!(
            "{:<22} {:>7} points  {} violations  worst ratio {:.3}",
            g.name, g.points, g.violations, g.max_ratio
        );
    }
    for pk in &report.pk {
        println!(
            "N={:>3} k={}  P_k {:.3e}  bound {:.3e}",
            pk.n, pk.k, pk.p_k, pk.bound
        );
    }
    println!("passed {}  hash {}", report.passed, report.hash);
    Ok(())
}
