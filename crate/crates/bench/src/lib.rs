//! Inputs shared by the benchmarks.

use surface_core::generate::subdivide;
use surface_core::{generate, FamilySpec, Triangulation};

/// `spec` grown by random subdivision until it has at least `n` triangles.
pub fn grown(spec: &str, n: usize, seed: u64) -> Triangulation {
    let spec: FamilySpec = spec.parse().expect("valid spec");
    let base = generate(&spec).expect("spec generates");
    let missing = n.saturating_sub(base.triangle_count());
    subdivide(&base, missing.div_ceil(2) as u32, seed)
}

/// A disjoint union of `parts` punctured genus-2 surfaces, relabeled.
pub fn union_of(parts: usize, seed: u64) -> Triangulation {
    let items = vec!["orientable(2):b=1"; parts].join(" + ");
    let spec: FamilySpec = format!("{items} | relabel={seed}").parse().expect("valid spec");
    generate(&spec).expect("spec generates")
}
