//! Recomputing views used by the metered engine.
//!
//! Nothing here materializes a table or a graph. A [`TableSource`] answers
//! "row `t`, column `e`" by recomputing it from its upstream source, and the
//! graph streams answer neighbour queries by reading table entries. Chaining
//! them composes the pipeline stages without storing intermediate output.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::connectivity::ConnectivityOracle;
use crate::error::{Error, Result};
use crate::graphs::{double_cover_entry, CornerId, GraphStream};
use crate::tape::{ChargeToken, MeteredWorkspace};
use crate::triangulation::{Column, GluingEntry, Triangulation};

/// Cheap order-sensitive combine (splitmix64 finalizer), for oracle cache keys.
fn mix(parts: &[u64]) -> u64 {
    parts.iter().fold(0x9e37_79b9_7f4a_7c15, |acc, &p| {
        let mut z = (acc ^ p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    })
}

/// Random access to a gluing table.
pub trait TableSource {
    fn triangle_count(&self, ws: &MeteredWorkspace) -> Result<usize>;
    fn entry(&self, ws: &MeteredWorkspace, t: usize, col: Column) -> Result<GluingEntry>;
    fn key(&self) -> u64;
}

/// The input tape itself.
#[derive(Debug, Clone, Copy)]
pub struct InputTable<'a> {
    tri: &'a Triangulation,
    digest: u64,
}

impl<'a> InputTable<'a> {
    pub fn new(tri: &'a Triangulation) -> Self {
        let mut h = DefaultHasher::new();
        tri.hash(&mut h);
        Self { tri, digest: h.finish() }
    }
}

impl TableSource for InputTable<'_> {
    fn triangle_count(&self, _ws: &MeteredWorkspace) -> Result<usize> {
        Ok(self.tri.triangle_count())
    }

    fn entry(&self, ws: &MeteredWorkspace, t: usize, col: Column) -> Result<GluingEntry> {
        ws.read_entry(self.tri, t, col)
    }

    fn key(&self) -> u64 {
        mix(&[0, self.digest])
    }
}

/// The orientation double cover, rows `1..n` then `1'..n'`.
pub struct DoubleCoverTable<'a> {
    inner: &'a dyn TableSource,
}

impl<'a> DoubleCoverTable<'a> {
    pub fn new(inner: &'a dyn TableSource) -> Self {
        Self { inner }
    }
}

impl TableSource for DoubleCoverTable<'_> {
    fn triangle_count(&self, ws: &MeteredWorkspace) -> Result<usize> {
        Ok(2 * self.inner.triangle_count(ws)?)
    }

    fn entry(&self, ws: &MeteredWorkspace, t: usize, col: Column) -> Result<GluingEntry> {
        let n = self.inner.triangle_count(ws)?;
        if t == 0 || t > 2 * n {
            return Err(Error::IndexOutOfRange { t, n: 2 * n });
        }
        let prime = t > n;
        let row = if prime { t - n } else { t };
        Ok(double_cover_entry(self.inner.entry(ws, row, col)?, n, prime))
    }

    fn key(&self) -> u64 {
        mix(&[1, self.inner.key()])
    }
}

/// The `i`-th connected component, triangles renumbered `1..k` in ascending
/// original order.
///
/// The component representative (lowest triangle of the component) and the
/// size `k` are found once and held as two counters; every entry read then
/// re-derives the member triangle and the renumbered target by connectivity
/// queries against the upstream face-dual graph.
pub struct ComponentTable<'a> {
    inner: &'a dyn TableSource,
    oracle: &'a dyn ConnectivityOracle,
    index: usize,
    rep: usize,
    size: usize,
    _registers: [ChargeToken<'a>; 2],
}

impl<'a> ComponentTable<'a> {
    pub fn new(
        ws: &'a MeteredWorkspace,
        inner: &'a dyn TableSource,
        oracle: &'a dyn ConnectivityOracle,
        index: usize,
    ) -> Result<Self> {
        let n = inner.triangle_count(ws)?;
        let regs = [ws.counter(n as u64)?, ws.counter(n as u64)?];
        let dual = FaceDualStream::new(inner);
        let rep = find_representative(ws, &dual, oracle, n, index)?;
        let mut size = 0;
        {
            let _s = ws.counter(n as u64)?;
            for s in rep..=n {
                if oracle.connected(&dual, s, rep, ws)? {
                    size += 1;
                }
            }
        }
        Ok(Self { inner, oracle, index, rep, size, _registers: regs })
    }

    pub fn representative(&self) -> usize {
        self.rep
    }

    /// Original index of the `j`-th member.
    fn member(&self, ws: &MeteredWorkspace, j: usize) -> Result<usize> {
        let n = self.inner.triangle_count(ws)?;
        let dual = FaceDualStream::new(self.inner);
        let _s = ws.counter(n as u64)?;
        let _count = ws.counter(n as u64)?;
        let mut count = 0;
        for s in self.rep..=n {
            if self.oracle.connected(&dual, s, self.rep, ws)? {
                count += 1;
                if count == j {
                    return Ok(s);
                }
            }
        }
        Err(Error::IndexOutOfRange { t: j, n: self.size })
    }

    /// New index of original triangle `u`: members in `rep..=u`.
    fn rank(&self, ws: &MeteredWorkspace, u: usize) -> Result<usize> {
        let n = self.inner.triangle_count(ws)?;
        let dual = FaceDualStream::new(self.inner);
        let _x = ws.counter(n as u64)?;
        let _rank = ws.counter(n as u64)?;
        let mut rank = 0;
        for x in self.rep..=u {
            if self.oracle.connected(&dual, x, self.rep, ws)? {
                rank += 1;
            }
        }
        Ok(rank)
    }
}

/// Lowest triangle of the `index`-th component: the `index`-th vertex not
/// connected to any lower vertex.
pub fn find_representative(
    ws: &MeteredWorkspace,
    dual: &dyn GraphStream,
    oracle: &dyn ConnectivityOracle,
    n: usize,
    index: usize,
) -> Result<usize> {
    if index == 0 || n == 0 {
        return Err(Error::ComponentOutOfRange { i: index, c: if n == 0 { 0 } else { 1 } });
    }
    let _t = ws.counter(n as u64)?;
    let _c = ws.counter(n as u64)?;
    let _s = ws.counter(n as u64)?;
    let _flag = ws.charge(1)?;
    let mut t = 1;
    let mut c = 1;
    while c < index {
        t += 1;
        if t > n {
            return Err(Error::ComponentOutOfRange { i: index, c });
        }
        let mut seen = false;
        for s in 1..t {
            if oracle.connected(dual, s, t, ws)? {
                seen = true;
            }
        }
        if !seen {
            c += 1;
        }
    }
    Ok(t)
}

impl TableSource for ComponentTable<'_> {
    fn triangle_count(&self, _ws: &MeteredWorkspace) -> Result<usize> {
        Ok(self.size)
    }

    fn entry(&self, ws: &MeteredWorkspace, t: usize, col: Column) -> Result<GluingEntry> {
        if t == 0 || t > self.size {
            return Err(Error::IndexOutOfRange { t, n: self.size });
        }
        let s = self.member(ws, t)?;
        match self.inner.entry(ws, s, col)? {
            GluingEntry::Boundary => Ok(GluingEntry::Boundary),
            GluingEntry::Glued { target, label } => {
                Ok(GluingEntry::Glued { target: self.rank(ws, target)?, label })
            }
        }
    }

    fn key(&self) -> u64 {
        mix(&[2, self.inner.key(), self.index as u64])
    }
}

/// Face-dual graph of a table source: vertex `t` is adjacent to every
/// triangle its row glues to.
pub struct FaceDualStream<'a> {
    src: &'a dyn TableSource,
}

impl<'a> FaceDualStream<'a> {
    pub fn new(src: &'a dyn TableSource) -> Self {
        Self { src }
    }
}

impl GraphStream for FaceDualStream<'_> {
    fn vertex_count(&self, ws: &MeteredWorkspace) -> Result<usize> {
        self.src.triangle_count(ws)
    }

    fn for_each_neighbor(
        &self,
        ws: &MeteredWorkspace,
        v: usize,
        f: &mut dyn FnMut(usize) -> Result<bool>,
    ) -> Result<()> {
        for col in Column::ALL {
            let entry = self.src.entry(ws, v, col).map_err(|e| match e {
                Error::IndexOutOfRange { t, .. } => Error::UnknownVertex(t),
                other => other,
            })?;
            if let Some(s) = entry.target() {
                if s != v && !f(s)? {
                    break;
                }
            }
        }
        Ok(())
    }

    fn key(&self) -> u64 {
        mix(&[10, self.src.key()])
    }
}

/// `K` (or `K'` when `with_boundary`) of a table source. Corner `w(t,i)`
/// has one neighbour slot per triangle edge through corner `i`.
pub struct IdentificationStream<'a> {
    src: &'a dyn TableSource,
    with_boundary: bool,
}

impl<'a> IdentificationStream<'a> {
    pub fn vertex_graph(src: &'a dyn TableSource) -> Self {
        Self { src, with_boundary: false }
    }

    pub fn boundary_graph(src: &'a dyn TableSource) -> Self {
        Self { src, with_boundary: true }
    }
}

impl GraphStream for IdentificationStream<'_> {
    fn vertex_count(&self, ws: &MeteredWorkspace) -> Result<usize> {
        Ok(3 * self.src.triangle_count(ws)?)
    }

    fn for_each_neighbor(
        &self,
        ws: &MeteredWorkspace,
        v: usize,
        f: &mut dyn FnMut(usize) -> Result<bool>,
    ) -> Result<()> {
        if v == 0 || v > self.vertex_count(ws)? {
            return Err(Error::UnknownVertex(v));
        }
        let corner = CornerId::from_id(v);
        for col in Column::ALL {
            let (a, b) = col.label().corners();
            let other_first = if corner.i == a {
                false
            } else if corner.i == b {
                true
            } else {
                continue;
            };
            let neighbor = match self.src.entry(ws, corner.t, col)? {
                GluingEntry::Glued { target, label } => {
                    let (p, q) = label.corners();
                    Some(CornerId::new(target, if other_first { q } else { p }))
                }
                GluingEntry::Boundary if self.with_boundary => {
                    Some(CornerId::new(corner.t, if other_first { a } else { b }))
                }
                GluingEntry::Boundary => None,
            };
            if let Some(w) = neighbor {
                if !f(w.id())? {
                    break;
                }
            }
        }
        Ok(())
    }

    fn key(&self) -> u64 {
        mix(&[11 + u64::from(self.with_boundary), self.src.key()])
    }
}
