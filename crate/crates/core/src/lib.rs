//! Bet-and-run restart strategies over pluggable anytime solvers.
//!
//! A bet-and-run strategy spends a first phase on `k` short diversified runs
//! of a randomized solver, then continues only the best of those runs for the
//! remaining time. This crate provides the schedule math (fixed-length and
//! Luby-based phase-1 plans), the orchestration itself (including the
//! seed-replay trick for solvers that cannot checkpoint), built-in anytime
//! local-search solvers for the traveling salesperson and minimum vertex
//! cover problems, an adapter for external solver binaries, and the
//! rank/Wilcoxon tooling used to compare strategies across instances.

pub mod mvc;
pub mod orchestrator;
pub mod stats;
pub mod strategy;
pub mod tsp;

/// Time unit used for all budgets and trajectories: one solver step in
/// virtual mode, one microsecond in wall-clock mode.
pub type Ticks = u64;

/// Solution quality. Both built-in problems minimize; `f64::INFINITY` is the
/// sentinel for "no feasible solution found within budget".
pub type Quality = f64;

/// Budget accounting mode for solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeMode {
    /// Deterministic step counts; bit-reproducible runs.
    Virtual,
    /// Microseconds of elapsed wall-clock time.
    WallClock,
}

impl std::fmt::Display for TimeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TimeMode::Virtual => write!(f, "virtual"),
            TimeMode::WallClock => write!(f, "wallclock"),
        }
    }
}
