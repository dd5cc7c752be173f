//! Replay a single detection record and print what the receiver saw.

use fock_receiver::analysis::cmd_oracle;
use fock_receiver::engine::EngineConfig;
use fock_receiver::fock::presets;

fn main() -> fock_receiver::Result<()> {
    let cfg = EngineConfig::default();
    print!(
        "{}",
        cmd_oracle(&presets::zero_one(24), 6, &[0, 0, 1, 0, 0, 0], &cfg)?
    );
    print!(
        "{}",
        cmd_oracle(&presets::cat(1.0, 24)?, 6, &[0, 1, 0, 0, 0, 1], &cfg)?
    );
    Ok(())
}
