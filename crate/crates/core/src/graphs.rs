//! Face-dual graph, vertex identification graph `K`, boundary identification
//! graph `K'`, and the orientation double cover.
//!
//! Corner `i` of triangle `t` has vertex id `3(t - 1) + i`, so ids run
//! `1..=3n` and golden edge lists stay stable.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::tape::MeteredWorkspace;
use crate::triangulation::{Column, GluingEntry, Triangulation};

/// Read access to an undirected graph on vertices `1..=vertex_count`.
///
/// Implemented by materialized [`UndirectedGraph`]s and by the recomputing
/// streams of the metered engine. Neighbour enumeration may repeat a vertex
/// (multigraph view); connectivity is unaffected.
pub trait GraphStream {
    fn vertex_count(&self, ws: &MeteredWorkspace) -> Result<usize>;

    /// Calls `f` for each neighbour of `v` until it returns `Ok(false)`.
    fn for_each_neighbor(
        &self,
        ws: &MeteredWorkspace,
        v: usize,
        f: &mut dyn FnMut(usize) -> Result<bool>,
    ) -> Result<()>;

    fn adjacent(&self, ws: &MeteredWorkspace, a: usize, b: usize) -> Result<bool> {
        let mut found = false;
        self.for_each_neighbor(ws, a, &mut |u| {
            found = u == b;
            Ok(!found)
        })?;
        Ok(found)
    }

    /// Structural identity, used by caching oracles.
    fn key(&self) -> u64;
}

/// Simple undirected graph on `1..=order`: no loops, no parallel edges.
///
/// Equality compares vertex count and edge set only.
#[derive(Debug, Clone, Default)]
pub struct UndirectedGraph {
    order: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for UndirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.edges == other.edges
    }
}

impl Eq for UndirectedGraph {}

impl UndirectedGraph {
    pub fn new(order: usize) -> Self {
        Self { order, edges: BTreeSet::new(), adj: vec![Vec::new(); order] }
    }

    /// Builds a graph from an edge list; loops and repeats are dropped.
    pub fn from_edges(order: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::new(order);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Adds `{a, b}`. Returns whether the edge was new; loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<bool> {
        for v in [a, b] {
            if v == 0 || v > self.order {
                return Err(Error::UnknownVertex(v));
            }
        }
        if a == b {
            return Ok(false);
        }
        let key = (a.min(b), a.max(b));
        if !self.edges.insert(key) {
            return Ok(false);
        }
        self.adj[a - 1].push(b);
        self.adj[b - 1].push(a);
        Ok(true)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.order
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `v <count>` followed by one `e a b` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("v {}\n", self.order);
        for (a, b) in self.edges() {
            out.push_str(&format!("e {a} {b}\n"));
        }
        out
    }
}

impl GraphStream for UndirectedGraph {
    fn vertex_count(&self, _ws: &MeteredWorkspace) -> Result<usize> {
        Ok(self.order)
    }

    fn for_each_neighbor(
        &self,
        _ws: &MeteredWorkspace,
        v: usize,
        f: &mut dyn FnMut(usize) -> Result<bool>,
    ) -> Result<()> {
        if v == 0 || v > self.order {
            return Err(Error::UnknownVertex(v));
        }
        for &u in &self.adj[v - 1] {
            if !f(u)? {
                break;
            }
        }
        Ok(())
    }

    fn adjacent(&self, _ws: &MeteredWorkspace, a: usize, b: usize) -> Result<bool> {
        Ok(self.contains_edge(a, b))
    }

    fn key(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        std::hash::Hash::hash(&(self.order, &self.edges), &mut h);
        std::hash::Hasher::finish(&h)
    }
}

/// Corner `i` (1, 2 or 3) of triangle `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerId {
    pub t: usize,
    pub i: u8,
}

impl CornerId {
    pub fn new(t: usize, i: u8) -> Self {
        debug_assert!(t >= 1 && (1..=3).contains(&i));
        Self { t, i }
    }

    pub fn id(self) -> usize {
        3 * (self.t - 1) + usize::from(self.i)
    }

    pub fn from_id(id: usize) -> Self {
        debug_assert!(id >= 1);
        Self { t: (id - 1) / 3 + 1, i: ((id - 1) % 3 + 1) as u8 }
    }
}

pub fn face_dual(tri: &Triangulation) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(tri.triangle_count());
    for (idx, row) in tri.rows().iter().enumerate() {
        for entry in row {
            if let Some(s) = entry.target() {
                g.add_edge(idx + 1, s).expect("well-formed table");
            }
        }
    }
    g
}

/// Corner identifications induced by one glued site: column `(ij)` of `t`
/// glued to `(pq)` of `s` identifies `i ~ p` and `j ~ q`.
pub fn gluing_corner_pairs(t: usize, col: Column, entry: GluingEntry) -> Option<[(CornerId, CornerId); 2]> {
    let GluingEntry::Glued { target: s, label } = entry else {
        return None;
    };
    let (i, j) = col.label().corners();
    let (p, q) = label.corners();
    Some([(CornerId::new(t, i), CornerId::new(s, p)), (CornerId::new(t, j), CornerId::new(s, q))])
}

fn identification_graph(tri: &Triangulation, with_boundary: bool) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(3 * tri.triangle_count());
    for (idx, row) in tri.rows().iter().enumerate() {
        let t = idx + 1;
        for col in Column::ALL {
            let entry = row[col.index()];
            match gluing_corner_pairs(t, col, entry) {
                Some(pairs) => {
                    for (a, b) in pairs {
                        g.add_edge(a.id(), b.id()).expect("well-formed table");
                    }
                }
                None if with_boundary => {
                    let (i, j) = col.label().corners();
                    g.add_edge(CornerId::new(t, i).id(), CornerId::new(t, j).id())
                        .expect("well-formed table");
                }
                None => {}
            }
        }
    }
    g
}

/// The graph `K`: one vertex per triangle corner, an edge for each pair of
/// corners identified directly by a gluing.
pub fn vertex_identification_graph(tri: &Triangulation) -> UndirectedGraph {
    identification_graph(tri, false)
}

/// The graph `K'`: `K` plus an edge joining the two corners of every unglued
/// triangle edge.
pub fn boundary_identification_graph(tri: &Triangulation) -> UndirectedGraph {
    identification_graph(tri, true)
}

/// `K` (or `K'`) as a multigraph: one edge pair per glued edge pair, emitted
/// from whichever of its two sites comes first in scan order, loops kept.
/// Every corner has degree exactly 2 in the `K'` version of a valid surface.
pub fn identification_multiedges(tri: &Triangulation, with_boundary: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (idx, row) in tri.rows().iter().enumerate() {
        let t = idx + 1;
        for col in Column::ALL {
            let entry = row[col.index()];
            match entry {
                GluingEntry::Glued { target: s, label } => {
                    if (t, col) < (s, label.column()) {
                        let pairs = gluing_corner_pairs(t, col, entry).expect("glued");
                        out.extend(pairs.iter().map(|(a, b)| (a.id(), b.id())));
                    }
                }
                GluingEntry::Boundary if with_boundary => {
                    let (i, j) = col.label().corners();
                    out.push((CornerId::new(t, i).id(), CornerId::new(t, j).id()));
                }
                GluingEntry::Boundary => {}
            }
        }
    }
    out
}

/// Multigraph degrees (loops count twice), indexed by vertex id - 1.
pub fn multidegrees(order: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0; order];
    for &(a, b) in edges {
        deg[a - 1] += 1;
        deg[b - 1] += 1;
    }
    deg
}

/// Image of one table entry in sheet 1 (`prime = false`) or sheet 2 of the
/// double cover on `2n` triangles, where triangle `t'` is `n + t`.
pub fn double_cover_entry(entry: GluingEntry, n: usize, prime: bool) -> GluingEntry {
    match entry {
        GluingEntry::Boundary => GluingEntry::Boundary,
        GluingEntry::Glued { target, label } => {
            // A forward label flips orientation, so the gluing crosses sheets.
            let cross = label.is_forward() != prime;
            let target = if cross { target + n } else { target };
            GluingEntry::Glued { target, label }
        }
    }
}

/// Orientation double cover, triangles ordered `1..n, 1'..n'`.
pub fn double_cover(tri: &Triangulation) -> Triangulation {
    let n = tri.triangle_count();
    let mut rows = Vec::with_capacity(2 * n);
    for prime in [false, true] {
        for row in tri.rows() {
            rows.push(row.map(|e| double_cover_entry(e, n, prime)));
        }
    }
    Triangulation::new(rows).expect("cover targets stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{EdgeLabel::*, KLEIN_TAPE};

    fn klein() -> Triangulation {
        Triangulation::parse(KLEIN_TAPE).unwrap()
    }

    fn w(t: usize, i: u8) -> usize {
        CornerId::new(t, i).id()
    }

    fn edge_set(pairs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
    }

    #[test]
    fn corner_id_encoding() {
        assert_eq!(w(1, 1), 1);
        assert_eq!(w(1, 3), 3);
        assert_eq!(w(2, 1), 4);
        assert_eq!(CornerId::from_id(9), CornerId::new(3, 3));
        for id in 1..=30 {
            assert_eq!(CornerId::from_id(id).id(), id);
        }
    }

    #[test]
    fn klein_face_dual() {
        let g = face_dual(&klein());
        assert_eq!(g.order(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn klein_k_and_kprime() {
        let f = edge_set(&[
            (w(1, 1), w(2, 1)),
            (w(1, 2), w(2, 3)),
            (w(2, 1), w(3, 1)),
            (w(2, 2), w(3, 3)),
            (w(1, 1), w(3, 2)),
            (w(1, 3), w(3, 3)),
            (w(1, 2), w(3, 1)),
            (w(1, 3), w(3, 2)),
        ]);
        let k = vertex_identification_graph(&klein());
        assert_eq!(k.order(), 9);
        assert_eq!(k.edges().collect::<BTreeSet<_>>(), f);

        let mut f_prime = f.clone();
        f_prime.insert((w(2, 2), w(2, 3)));
        let kp = boundary_identification_graph(&klein());
        assert_eq!(kp.edges().collect::<BTreeSet<_>>(), f_prime);
    }

    #[test]
    fn klein_double_cover_matches_table() {
        let g = GluingEntry::glued;
        let b = GluingEntry::Boundary;
        let expected = vec![
            [g(2, E13), g(6, E12), g(3, E32)],
            [g(3, E13), b, g(1, E21)],
            [g(4, E23), g(1, E13), g(2, E21)],
            [g(5, E13), g(3, E12), g(6, E32)],
            [g(6, E13), b, g(4, E21)],
            [g(1, E23), g(4, E13), g(5, E21)],
        ];
        assert_eq!(double_cover(&klein()).rows(), expected.as_slice());
    }

    #[test]
    fn single_triangle_graphs() {
        let tri = Triangulation::parse("# - - -").unwrap();
        assert_eq!(face_dual(&tri).edge_count(), 0);
        let k = vertex_identification_graph(&tri);
        assert_eq!((k.order(), k.edge_count()), (3, 0));
        let kp = boundary_identification_graph(&tri);
        assert_eq!(kp.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 3)]);
        let cover = double_cover(&tri);
        assert_eq!(cover.serialize(), "# - - - # - - -");
    }

    #[test]
    fn multigraph_degrees_are_two() {
        let tri = klein();
        let kp = identification_multiedges(&tri, true);
        assert!(multidegrees(9, &kp).iter().all(|&d| d == 2));
        let k = identification_multiedges(&tri, false);
        assert_eq!(k.len(), 8);
        assert_eq!(kp.len() - k.len(), tri.boundary_edge_count());
    }

    #[test]
    fn graph_text_format() {
        let g = face_dual(&klein());
        assert_eq!(g.to_text(), "v 3\ne 1 2\ne 1 3\ne 2 3\n");
    }

    #[test]
    fn rejects_unknown_vertex() {
        let mut g = UndirectedGraph::new(2);
        assert_eq!(g.add_edge(1, 3), Err(Error::UnknownVertex(3)));
        assert_eq!(g.add_edge(1, 1), Ok(false));
        assert_eq!(g.add_edge(1, 2), Ok(true));
        assert_eq!(g.add_edge(2, 1), Ok(false));
    }
}
