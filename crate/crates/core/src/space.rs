//! Space-growth measurement for the metered engine.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::classify::InvariantList;
use crate::error::{Error, Result};
use crate::generate::{generate, subdivide, Family, FamilySpec};
use crate::metered::MeteredEngine;
use crate::tape::{default_budget, MeteredWorkspace, SpaceReport};
use crate::triangulation::Triangulation;

/// Sizes `8, 16, ..., 1024`.
pub const BENCH_SIZES: [usize; 8] = [8, 16, 32, 64, 128, 256, 512, 1024];

/// A sphere with exactly `n` triangles (`n >= 2` and even), grown from the
/// 2-triangle sphere by seeded random subdivision.
pub fn bench_input(n: usize, seed: u64) -> Triangulation {
    assert!(n >= 2 && n.is_multiple_of(2), "sphere triangulations have an even triangle count");
    let base = generate(&FamilySpec::surface(Family::Sphere, 0)).expect("sphere generates");
    subdivide(&base, ((n - 2) / 2) as u32, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BudgetExceeded,
    DeadlineExceeded,
    Failed,
}

/// One metered run. `peak_bits` covers the work done before the run ended,
/// so it is a lower bound when `status` is not `completed`.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceRun {
    pub n: usize,
    pub status: RunStatus,
    #[serde(flatten)]
    pub report: SpaceReport,
    pub elapsed_ms: u128,
    #[serde(skip)]
    pub result: Option<InvariantList>,
}

impl SpaceRun {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space run serializes")
    }
}

/// Classifies `tri` with `engine` on a fresh workspace.
///
/// `budget_bits = None` uses the default budget for the input length.
pub fn measure(
    tri: &Triangulation,
    engine: &MeteredEngine<'_>,
    budget_bits: Option<u64>,
    deadline: Option<Instant>,
) -> SpaceRun {
    let symbols = tri.tape_symbols();
    let mut ws = MeteredWorkspace::new(budget_bits.unwrap_or_else(|| default_budget(symbols)));
    if let Some(d) = deadline {
        ws = ws.with_deadline(d);
    }
    let start = Instant::now();
    let outcome: Result<InvariantList> = engine.classify(tri, &ws);
    let status = match &outcome {
        Ok(_) => RunStatus::Completed,
        Err(Error::BudgetExceeded { .. }) => RunStatus::BudgetExceeded,
        Err(Error::DeadlineExceeded) => RunStatus::DeadlineExceeded,
        Err(_) => RunStatus::Failed,
    };
    SpaceRun {
        n: tri.triangle_count(),
        status,
        report: ws.report(symbols),
        elapsed_ms: start.elapsed().as_millis(),
        result: outcome.ok(),
    }
}

/// Runs every size in `sizes` against one overall time limit; sizes reached
/// after the limit report `deadline_exceeded` with no work done.
pub fn bench_space(
    sizes: &[usize],
    engine: &MeteredEngine<'_>,
    budget_bits: Option<u64>,
    limit: Option<Duration>,
    seed: u64,
) -> Vec<SpaceRun> {
    let deadline = limit.map(|l| Instant::now() + l);
    sizes.iter().map(|&n| measure(&bench_input(n, seed), engine, budget_bits, deadline)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::SavitchOracle;
    use crate::invariants::InvariantTriple;

    #[test]
    fn inputs_have_requested_size() {
        for n in [2, 8, 64] {
            let tri = bench_input(n, 3);
            assert_eq!(tri.triangle_count(), n);
            assert!(crate::validate::is_surface(&tri));
        }
    }

    #[test]
    fn smallest_size_completes_within_budget() {
        let runs = bench_space(&[8], &MeteredEngine::new(&SavitchOracle), None, None, 1);
        let run = &runs[0];
        assert_eq!(run.status, RunStatus::Completed);
        assert!(run.report.peak_bits <= run.report.budget_bits);
        assert_eq!(run.result.as_ref().unwrap().triples(), &[InvariantTriple::new(0, 2, 0)]);
        assert!(run.to_json().contains("\"status\":\"completed\""));
    }
}
