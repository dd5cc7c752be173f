//! Seeded Monte Carlo: an error estimate with its Wilson interval, a
//! trajectory log, one-click statistics and the displacement budget.

use fock_receiver::engine::{
    mc_error_probability, mean_photon_budget, one_click_statistics, sample_trajectories,
    write_jsonl, EngineConfig,
};
use fock_receiver::fock::presets;

fn main() -> fock_receiver::Result<()> {
    let cfg = EngineConfig::default();
    let pair = presets::cat(1.0, 24)?;
    let n = 64;
    let est = mc_error_probability(&pair, n, 20_000, 1, &cfg)?;
    println!(
        "N={n}: p_err {:.4e} in [{:.4e}, {:.4e}], p_fail {:.4e}",
        est.p_err, est.ci_low, est.ci_high, est.p_fail
    );

    let trajs = sample_trajectories(&pair, n, 2000, 1, None, &cfg)?;
    let mut log = Vec::new();
    write_jsonl(&mut log, &trajs[..3])?;
    print!(
        "{}",
        String::from_utf8_lossy(&log)
            .lines()
            .map(|l| format!("{:.100}...\n", l))
            .collect::<String>()
    );

    let stats = one_click_statistics(&trajs)?;
    println!(
        "J histogram {:?}, tail slope {:?}",
        stats.histogram, stats.tail_slope
    );
    let budget = mean_photon_budget(&trajs, n)?;
    println!(
        "|beta_0|^2 = {:.4}, |beta_aux|^2 = {:.4}",
        budget.beta0_sq, budget.beta_aux_sq
    );
    Ok(())
}
