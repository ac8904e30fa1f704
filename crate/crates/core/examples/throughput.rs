//! Walk-step throughput of the stock presets: `cargo run --release -p rwre-core --example throughput`.
use std::time::Instant;

use rwre_core::environment::{presets, EnvironmentView};
use rwre_core::regeneration::{detect_regenerations, CensorPolicy};
use rwre_core::walk::{axis_projection, simulate, WalkSeed};

fn main() {
    let horizon = 1 << 22;
    for name in presets::NAMES {
        let env = EnvironmentView::new(presets::by_name(name).unwrap(), 1);
        let start = Instant::now();
        let t = simulate(&env, &[0, 0], horizon, WalkSeed::new(2));
        let sim = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let r = detect_regenerations(&axis_projection(&t, 0, 1), CensorPolicy::default());
        let det = start.elapsed().as_secs_f64();
        println!(
            "{name:>20}: {:.1} M steps/s simulate, {:.1} M steps/s detect, {} regenerations",
            horizon as f64 / sim / 1e6,
            horizon as f64 / det / 1e6,
            r.len()
        );
    }
}
