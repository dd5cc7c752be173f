//! A small N sweep with a power-law fit of the error probability.

use fock_receiver::analysis::{run_sweep, PairSource, RunConfig, SweepSpec};
use fock_receiver::engine::Mode;

fn main() -> fock_receiver::Result<()> {
    let cfg = RunConfig {
        samples: Some(20_000),
        ..RunConfig::default()
    };
    let mut spec = SweepSpec::from_config(PairSource::Preset("cat".into()), &cfg);
    spec.n_values = vec![4, 8, 16, 32];
    spec.mode = Mode::Auto;
    let pair = spec.pair.load(cfg.cutoff, cfg.engine.trunc_budget)?;
    let report = run_sweep(&pair, &spec, &cfg)?;
    print!("{}", String::from_utf8_lossy(&report.to_csv()?));
    let fit = &report.fit;
    println!(
        "slope {:.3} +/- {:.3} against {} -> {:?}",
        fit.slope.unwrap_or(f64::NAN),
        fit.slope_stderr.unwrap_or(f64::NAN),
        fit.expected_slope,
        fit.verdict
    );
    Ok(())
}
