//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.
//!
//! `SURFACE_SPACE_LIMIT_SECS` overrides the 600 s wall-clock limit of the
//! space-growth run.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surface_core::classify::components;
use surface_core::connectivity::{count_components, count_components_metered};
use surface_core::generate::{corpus, relabel, subdivide};
use surface_core::graphs::{identification_multiedges, multidegrees};
use surface_core::space::{bench_space, RunStatus, BENCH_SIZES};
use surface_core::tape::default_budget;
use surface_core::EdgeLabel::*;
use surface_core::*;

const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_UNIONS: usize = 140;

type Outcome = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn klein() -> Triangulation {
    Triangulation::parse(KLEIN_TAPE).unwrap()
}

fn w(t: usize, i: u8) -> usize {
    CornerId::new(t, i).id()
}

fn corpus_tables() -> Vec<(FamilySpec, Triangulation)> {
    corpus(CORPUS_SEED, CORPUS_UNIONS)
        .into_iter()
        .map(|s| {
            let t = generate(&s).unwrap();
            (s, t)
        })
        .collect()
}

fn klein_golden() -> Outcome {
    let start = Instant::now();
    let g = GluingEntry::glued;
    let b = GluingEntry::Boundary;
    let klein_rows =
        [[g(2, E13), g(3, E12), g(3, E32)], [g(3, E13), b, g(1, E21)], [g(1, E23), g(1, E13), g(2, E21)]];
    let cover_rows = [
        [g(2, E13), g(6, E12), g(3, E32)],
        [g(3, E13), b, g(1, E21)],
        [g(4, E23), g(1, E13), g(2, E21)],
        [g(5, E13), g(3, E12), g(6, E32)],
        [g(6, E13), b, g(4, E21)],
        [g(1, E23), g(4, E13), g(5, E21)],
    ];
    let tri = klein();
    ensure!(tri.rows() == klein_rows, "parsed table differs: {:?}", tri.rows());
    ensure!(tri.serialize() == KLEIN_TAPE, "serialization differs");
    let cover = double_cover(&tri);
    ensure!(cover.rows() == cover_rows, "double cover differs: {}", cover);
    let want = [InvariantTriple::new(1, -1, 1)];
    let uf = UnionFindOracle::new();
    for engine in [Engine::Baseline, Engine::Metered] {
        let oracle: &dyn ConnectivityOracle = match engine {
            Engine::Baseline => &uf,
            Engine::Metered => &SavitchOracle,
        };
        let list = classify(&tri, oracle, engine).map_err(|e| e.to_string())?;
        ensure!(list.triples() == want, "{engine:?} classify gave {:?}", list.triples());
    }
    let name = normal_form_name(want[0]).map_err(|e| e.to_string())?.to_string();
    ensure!(name == "non-orientable genus 2 with 1 boundary component", "name {name:?}");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("table and double cover exact, [(1,-1,1)], {name:?}, {elapsed:.2?}"))
}

fn auxiliary_graphs() -> Outcome {
    let f: BTreeSet<(usize, usize)> = [
        (w(1, 1), w(2, 1)),
        (w(1, 2), w(2, 3)),
        (w(2, 1), w(3, 1)),
        (w(2, 2), w(3, 3)),
        (w(1, 1), w(3, 2)),
        (w(1, 3), w(3, 3)),
        (w(1, 2), w(3, 1)),
        (w(1, 3), w(3, 2)),
    ]
    .into_iter()
    .map(|(a, b)| (a.min(b), a.max(b)))
    .collect();
    let mut f_prime = f.clone();
    f_prime.insert((w(2, 2), w(2, 3)));
    let k: BTreeSet<_> = vertex_identification_graph(&klein()).edges().collect();
    let kp: BTreeSet<_> = boundary_identification_graph(&klein()).edges().collect();
    ensure!(k == f, "K edges {k:?}");
    ensure!(kp == f_prime, "K' edges {kp:?}");
    Ok(format!("K has {} edges, K' has {}", k.len(), kp.len()))
}

/// Replaces one entry with a different random value.
fn mutate(tri: &Triangulation, rng: &mut ChaCha8Rng) -> Triangulation {
    let n = tri.triangle_count();
    let mut rows = tri.rows().to_vec();
    let t = rng.gen_range(0..n);
    let c = rng.gen_range(0..3);
    let old = rows[t][c];
    let new = loop {
        let cand = if rng.gen_range(0..7) == 0 {
            GluingEntry::Boundary
        } else {
            GluingEntry::glued(rng.gen_range(1..=n), *EdgeLabel::ALL.choose(rng).unwrap())
        };
        if cand != old {
            break cand;
        }
    };
    rows[t][c] = new;
    Triangulation::new(rows).unwrap()
}

fn validator() -> Outcome {
    ensure!(is_surface(&klein()), "Klein table rejected");
    let fixtures = [
        (ViolationKind::DuplicateTarget, "# 10 (21) - - # 1 (21) - - # 1 (12) - -"),
        (ViolationKind::BoundaryReferenced, "# 10 (12) - - # - - -"),
        (ViolationKind::AsymmetricGluing, "# 10 (12) - - # - - -"),
        (ViolationKind::AsymmetricReversedGluing, "# 10 (21) - - # 1 (12) - -"),
        (ViolationKind::SelfGluing, "# 1 (12) - -"),
    ];
    for (kind, text) in fixtures {
        let v = check_surface(&Triangulation::parse(text).unwrap()).err().unwrap_or_default();
        ensure!(v.iter().any(|v| v.kind == kind), "{kind} not raised by {text:?}");
    }
    let closed: Vec<Triangulation> = corpus(CORPUS_SEED, 0)
        .iter()
        .filter(|s| s.expected_triples().unwrap().iter().all(|t| t.b == 0))
        .map(|s| generate(s).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut silent = 0;
    for _ in 0..1000 {
        let base = closed.choose(&mut rng).unwrap();
        if is_surface(&mutate(base, &mut rng)) {
            silent += 1;
        }
    }
    ensure!(silent == 0, "{silent} of 1000 mutations accepted");
    Ok(format!("5 fixtures, 1000 mutations over {} closed surfaces all rejected", closed.len()))
}

fn closed_form(tables: &[(FamilySpec, Triangulation)]) -> Outcome {
    let start = Instant::now();
    ensure!(tables.len() >= 200, "corpus has only {} cases", tables.len());
    for (spec, tri) in tables {
        let got = classify_baseline(tri).map_err(|e| format!("{spec}: {e}"))?;
        let want = spec.expected_triples().unwrap();
        ensure!(got.triples() == want, "{spec}: got {:?}, want {want:?}", got.triples());
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("{} cases exact, {elapsed:.2?}", tables.len()))
}

fn structure(tables: &[(FamilySpec, Triangulation)]) -> Outcome {
    let uf = UnionFindOracle::new();
    for (spec, tri) in tables {
        let order = 3 * tri.triangle_count();
        let k = vertex_identification_graph(tri);
        ensure!(k.max_degree() <= 2, "{spec}: K degree {}", k.max_degree());
        let k_multi = multidegrees(order, &identification_multiedges(tri, false));
        ensure!(k_multi.iter().all(|&d| d <= 2), "{spec}: K multidegree above 2");
        let kp_multi = multidegrees(order, &identification_multiedges(tri, true));
        ensure!(kp_multi.iter().all(|&d| d == 2), "{spec}: K' multidegree not 2");

        let parts = classify_baseline(tri).unwrap();
        let chi: i64 = parts.triples().iter().map(|t| t.chi).sum();
        let cover = classify_baseline(&double_cover(tri)).unwrap();
        let cover_chi: i64 = cover.triples().iter().map(|t| t.chi).sum();
        ensure!(cover_chi == 2 * chi, "{spec}: chi(cover) {cover_chi} vs 2*{chi}");

        let kc = count_components(&uf, &k).unwrap() as i64;
        let kpc = count_components(&uf, &boundary_identification_graph(tri)).unwrap() as i64;
        let x = tri.boundary_edge_count() as i64;
        let b = kpc - kc + x;
        let b_sum: i64 = parts.triples().iter().map(|t| t.b as i64).sum();
        ensure!(b >= 0 && b == b_sum, "{spec}: b = {b}, components sum to {b_sum}");

        // Whole-table chi against the sum over components.
        let n = tri.triangle_count() as i64;
        let whole = kc - (3 * n + x) / 2 + n;
        ensure!(whole == chi, "{spec}: chi {whole} but components sum to {chi}");
        let by_part: i64 =
            components(tri, &uf).unwrap().iter().map(|c| invariant_triple(c, &uf).unwrap().chi).sum();
        ensure!(by_part == chi, "{spec}: extracted components sum to {by_part}");
    }
    Ok(format!("{} cases", tables.len()))
}

fn random_graph(rng: &mut ChaCha8Rng, order: usize, p: f64) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(order);
    for a in 1..=order {
        for b in a + 1..=order {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

fn equivalence(tables: &[(FamilySpec, Triangulation)]) -> Outcome {
    let start = Instant::now();
    for (spec, tri) in tables {
        let base = classify_baseline(tri).unwrap();
        // Black-box oracle for both graph kinds; the engine itself still runs
        // metered against the default budget.
        let uf = UnionFindOracle::caching();
        let ws = MeteredWorkspace::new(default_budget(tri.tape_symbols()));
        let metered = MeteredEngine::new(&uf)
            .with_corner_oracle(&uf)
            .classify(tri, &ws)
            .map_err(|e| format!("{spec}: {e}"))?;
        ensure!(metered == base, "{spec}: metered {:?} vs {:?}", metered.triples(), base.triples());
    }
    let mut savitch_runs = 0;
    for (spec, tri) in tables.iter().filter(|(_, t)| t.triangle_count() <= 8) {
        let list = classify(tri, &SavitchOracle, Engine::Metered).map_err(|e| format!("{spec}: {e}"))?;
        ensure!(list == classify_baseline(tri).unwrap(), "{spec}: savitch engine differs");
        savitch_runs += 1;
    }

    let engines_done = start.elapsed();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let uf = UnionFindOracle::new();
    let mut disagreements = 0;
    let (mut yes, mut no) = (0, 0);
    for i in 0..100 {
        // Even: dense graphs up to 200 vertices. Odd: sparse graphs small
        // enough for exhaustive negative Savitch searches.
        let g = if i % 2 == 0 {
            let (order, p) = (rng.gen_range(20..=200), rng.gen_range(0.3..0.6));
            random_graph(&mut rng, order, p)
        } else {
            let (order, p) = (rng.gen_range(2..=8), rng.gen_range(0.05..0.4));
            random_graph(&mut rng, order, p)
        };
        let n = g.order();
        for _ in 0..1000 {
            let (s, t) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let a = connectivity::connected(&uf, &g, s, t).unwrap();
            let b = connectivity::connected(&SavitchOracle, &g, s, t).unwrap();
            if a != b {
                disagreements += 1;
            }
            if a {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    ensure!(disagreements == 0, "{disagreements} oracle disagreements");
    Ok(format!(
        "{} cases metered = baseline ({savitch_runs} also with savitch) in {engines_done:.1?}, \
         100k pairs agree ({yes} connected, {no} not) in {:.1?}",
        tables.len(),
        start.elapsed() - engines_done
    ))
}

fn invariance(tables: &[(FamilySpec, Triangulation)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let uf = UnionFindOracle::new();
    for (spec, tri) in tables.choose_multiple(&mut rng, 100) {
        let r = relabel(tri, rng.gen());
        let s = subdivide(tri, rng.gen_range(1..=5), rng.gen());
        ensure!(homeomorphic(tri, &r, &uf, Engine::Baseline).unwrap(), "{spec}: relabel changed type");
        ensure!(homeomorphic(tri, &s, &uf, Engine::Baseline).unwrap(), "{spec}: subdivision changed type");
        ensure!(homeomorphic(&s, &r, &uf, Engine::Baseline).unwrap(), "{spec}: not symmetric/transitive");
    }
    Ok("100 members".to_owned())
}

fn space_growth() -> Outcome {
    let limit = std::env::var("SURFACE_SPACE_LIMIT_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(600);
    let engine = MeteredEngine::new(&SavitchOracle);
    let runs = bench_space(&BENCH_SIZES, &engine, None, Some(Duration::from_secs(limit)), 1);
    let summary: Vec<String> = runs
        .iter()
        .map(|r| format!("n={} {:?} peak={}/{}", r.n, r.status, r.report.peak_bits, r.report.budget_bits))
        .collect();
    let summary = summary.join(", ");
    for r in &runs {
        ensure!(r.status == RunStatus::Completed, "n={} did not complete: {summary}", r.n);
        ensure!(r.report.peak_bits <= r.report.budget_bits, "n={} over budget: {summary}", r.n);
    }
    let (first, last) = (&runs[0].report, &runs[runs.len() - 1].report);
    let peak_ratio = last.peak_bits as f64 / first.peak_bits as f64;
    let input_ratio = last.input_symbols as f64 / first.input_symbols as f64;
    let sublinear = peak_ratio < input_ratio / 4.0;
    ensure!(sublinear, "peak ratio {peak_ratio:.2} vs {input_ratio:.2}/4: {summary}");
    Ok(summary)
}

fn call_counts() -> Outcome {
    let mut seen = Vec::new();
    for n in [3usize, 8, 20] {
        let tri = if n == 3 { klein() } else { space::bench_input(n, 1) };
        let dual = face_dual(&tri);
        let counter = CountingOracle::new(&SavitchOracle);
        let ws = MeteredWorkspace::unlimited();
        let c = count_components_metered(&counter, &dual, &ws).map_err(|e| e.to_string())?;
        ensure!(c == 1, "n={n}: {c} components");
        ensure!(counter.calls() == (n * (n - 1) / 2) as u64, "n={n}: {} calls", counter.calls());
        seen.push(format!("n={n}: {}", counter.calls()));
    }
    Ok(seen.join(", "))
}

fn main() {
    let tables = corpus_tables();
    let criteria: Vec<Criterion> = vec![
        ("klein bottle golden", Box::new(klein_golden)),
        ("auxiliary graph golden", Box::new(auxiliary_graphs)),
        ("validator", Box::new(validator)),
        ("closed-form corpus", Box::new(|| closed_form(&tables))),
        ("corner graph structure", Box::new(|| structure(&tables))),
        ("engine/oracle equivalence", Box::new(|| equivalence(&tables))),
        ("invariance", Box::new(|| invariance(&tables))),
        ("space growth", Box::new(space_growth)),
        ("call counts", Box::new(call_counts)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
