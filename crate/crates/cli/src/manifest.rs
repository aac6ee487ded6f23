//! Run manifest embedded in every JSON output. Results are bit-reproducible
//! given identical manifest inputs (fixed summation order, seeded RNG); the
//! wall-clock field is timing metadata, not an input.

use serde_json::json;

pub struct Manifest {
    horizon: usize,
    grid: Option<u32>,
    started: std::time::Instant,
}

impl Manifest {
    pub fn new(horizon: usize, grid: Option<u32>) -> Self {
        Manifest { horizon, grid, started: std::time::Instant::now() }
    }

    pub fn finish(&self, command: &[&str]) -> serde_json::Value {
        let argv: Vec<String> = std::env::args().collect();
        json!({
            "tool": "carleman",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command.join(" "),
            "argv": argv,
            "horizon": self.horizon,
            "grid_log2": self.grid,
            "wall_ms": self.started.elapsed().as_millis(),
        })
    }
}
