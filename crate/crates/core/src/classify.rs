//! Multi-component classification and the homeomorphism decision.

use std::fmt;

use crate::connectivity::{ConnectivityOracle, UnionFindOracle};
use crate::error::{Error, Result};
use crate::graphs::{face_dual, GraphStream};
use crate::invariants::{invariant_triple, InvariantTriple};
use crate::metered::MeteredEngine;
use crate::tape::{default_budget, MeteredWorkspace};
use crate::triangulation::{GluingEntry, Triangulation};
use crate::validate::check_surface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Baseline,
    Metered,
}

/// Invariant triples of all components, sorted by `(o, chi, b)`. Homeomorphic
/// components each contribute their own entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct InvariantList {
    triples: Vec<InvariantTriple>,
}

impl InvariantList {
    pub fn new(mut triples: Vec<InvariantTriple>) -> Self {
        triples.sort();
        Self { triples }
    }

    pub(crate) fn from_sorted(triples: Vec<InvariantTriple>) -> Self {
        debug_assert!(triples.windows(2).all(|w| w[0] <= w[1]));
        Self { triples }
    }

    pub fn triples(&self) -> &[InvariantTriple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Labels each triangle with the lowest triangle of its component.
fn component_representatives(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<Vec<usize>> {
    let dual = face_dual(tri);
    let ws = MeteredWorkspace::unlimited();
    let n = dual.vertex_count(&ws)?;
    let mut rep = vec![0; n + 1];
    if !oracle.is_metered() {
        let (mut dsu, _) = crate::connectivity::components_of(&dual, &ws)?;
        let mut lowest = vec![usize::MAX; n];
        for (t, r) in rep.iter_mut().enumerate().skip(1) {
            let root = dsu.find(t - 1);
            lowest[root] = lowest[root].min(t);
            *r = lowest[root];
        }
        return Ok(rep);
    }
    for t in 1..=n {
        rep[t] = t;
        for s in 1..t {
            if rep[s] == s && oracle.connected(&dual, s, t, &ws)? {
                rep[t] = s;
                break;
            }
        }
    }
    Ok(rep)
}

/// Splits the table into its components in representative order.
fn split_components(tri: &Triangulation, rep: &[usize]) -> Vec<Triangulation> {
    let n = tri.triangle_count();
    let mut reps: Vec<usize> = (1..=n).filter(|&t| rep[t] == t).collect();
    reps.sort_unstable();
    let mut new_index = vec![0; n + 1];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for t in 1..=n {
        let slot = reps.binary_search(&rep[t]).expect("representative listed");
        members[slot].push(t);
        new_index[t] = members[slot].len();
    }
    members
        .into_iter()
        .map(|ts| {
            let rows = ts
                .iter()
                .map(|&t| {
                    tri.rows()[t - 1].map(|e| match e {
                        GluingEntry::Boundary => e,
                        GluingEntry::Glued { target, label } => {
                            GluingEntry::Glued { target: new_index[target], label }
                        }
                    })
                })
                .collect();
            Triangulation::new(rows).expect("component targets stay inside the component")
        })
        .collect()
}

/// The `i`-th component (1-based, ordered by lowest triangle), renumbered
/// `1..k` in ascending original order.
pub fn extract_component(
    tri: &Triangulation,
    i: usize,
    oracle: &dyn ConnectivityOracle,
) -> Result<Triangulation> {
    let rep = component_representatives(tri, oracle)?;
    let mut comps = split_components(tri, &rep);
    let c = comps.len();
    if i == 0 || i > c {
        return Err(Error::ComponentOutOfRange { i, c });
    }
    Ok(comps.swap_remove(i - 1))
}

/// All components in representative order.
pub fn components(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<Vec<Triangulation>> {
    let rep = component_representatives(tri, oracle)?;
    Ok(split_components(tri, &rep))
}

/// Per-component triples in component order (not sorted).
pub fn component_triples(
    tri: &Triangulation,
    oracle: &dyn ConnectivityOracle,
) -> Result<Vec<InvariantTriple>> {
    if let Err(v) = check_surface(tri) {
        return Err(Error::InvalidSurface { input: None, violations: v.len() });
    }
    components(tri, oracle)?.iter().map(|comp| invariant_triple(comp, oracle)).collect()
}

/// Sorted invariant list of a surface.
///
/// The metered engine sends face-dual queries to `oracle` and corner-graph
/// queries to the path walk, under the default budget. Use
/// [`MeteredEngine::classify`] directly for other configurations.
pub fn classify(
    tri: &Triangulation,
    oracle: &dyn ConnectivityOracle,
    engine: Engine,
) -> Result<InvariantList> {
    match engine {
        Engine::Baseline => Ok(InvariantList::new(component_triples(tri, oracle)?)),
        Engine::Metered => {
            let ws = MeteredWorkspace::new(default_budget(tri.tape_symbols()));
            MeteredEngine::new(oracle).classify(tri, &ws)
        }
    }
}

/// Two surfaces are homeomorphic iff their invariant lists agree.
pub fn homeomorphic(
    a: &Triangulation,
    b: &Triangulation,
    oracle: &dyn ConnectivityOracle,
    engine: Engine,
) -> Result<bool> {
    for (idx, tri) in [a, b].into_iter().enumerate() {
        if let Err(v) = check_surface(tri) {
            return Err(Error::InvalidSurface { input: Some(idx + 1), violations: v.len() });
        }
    }
    Ok(classify(a, oracle, engine)? == classify(b, oracle, engine)?)
}

/// Baseline classification with union-find.
pub fn classify_baseline(tri: &Triangulation) -> Result<InvariantList> {
    classify(tri, &UnionFindOracle::new(), Engine::Baseline)
}

/// Which standard surface a triple names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceGenus {
    /// Connected sum of `g` tori (`g = 0` is the sphere).
    Orientable(u64),
    /// Connected sum of `k >= 1` projective planes.
    NonOrientable(u64),
}

/// Standard-form name of a connected surface: its genus (which carries
/// orientability) plus the number of boundary circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NormalFormName {
    pub genus: SurfaceGenus,
    pub boundary: u64,
}

impl NormalFormName {
    /// Everyday name where one exists ("torus", "Klein bottle with 1
    /// boundary component", ...).
    pub fn common_name(&self) -> Option<String> {
        let base = match self.genus {
            SurfaceGenus::Orientable(0) => "sphere",
            SurfaceGenus::Orientable(1) => "torus",
            SurfaceGenus::NonOrientable(1) => "projective plane",
            SurfaceGenus::NonOrientable(2) => "Klein bottle",
            _ => return None,
        };
        Some(match (self.genus, self.boundary) {
            (SurfaceGenus::Orientable(0), 1) => "disk".to_owned(),
            (SurfaceGenus::NonOrientable(1), 1) => "Möbius band".to_owned(),
            (_, 0) => base.to_owned(),
            (_, b) => format!("{base} with {b} {}", plural(b)),
        })
    }

    /// The genus form, e.g. "non-orientable genus 2 with 1 boundary component".
    pub fn genus_form(&self) -> String {
        let head = match self.genus {
            SurfaceGenus::Orientable(g) => format!("orientable genus {g}"),
            SurfaceGenus::NonOrientable(k) => format!("non-orientable genus {k}"),
        };
        format!("{head} with {} {}", self.boundary, plural(self.boundary))
    }
}

fn plural(b: u64) -> &'static str {
    if b == 1 {
        "boundary component"
    } else {
        "boundary components"
    }
}

/// Sphere, disk, torus, Möbius band, projective plane and Klein bottle print
/// under their own names; everything else in genus form.
impl fmt::Display for NormalFormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let special = matches!(
            (self.genus, self.boundary),
            (SurfaceGenus::Orientable(0), 0 | 1)
                | (SurfaceGenus::Orientable(1), 0)
                | (SurfaceGenus::NonOrientable(1), 0 | 1)
                | (SurfaceGenus::NonOrientable(2), 0)
        );
        if special {
            f.write_str(&self.common_name().expect("special names exist"))
        } else {
            f.write_str(&self.genus_form())
        }
    }
}

pub fn normal_form_name(tr: InvariantTriple) -> Result<NormalFormName> {
    let deficit = 2 - tr.chi - tr.b as i64;
    let genus = if tr.o == 0 {
        if deficit < 0 || deficit % 2 != 0 {
            return Err(Error::InvalidTriple(format!(
                "{tr}: orientable genus (2 - chi - b)/2 = {deficit}/2"
            )));
        }
        SurfaceGenus::Orientable((deficit / 2) as u64)
    } else {
        if deficit < 1 {
            return Err(Error::InvalidTriple(format!("{tr}: non-orientable genus 2 - chi - b = {deficit}")));
        }
        SurfaceGenus::NonOrientable(deficit as u64)
    };
    Ok(NormalFormName { genus, boundary: tr.b })
}
