//! s,t-connectivity oracles and component counting.
//!
//! The pipeline treats undirected s,t-connectivity as a black box behind
//! [`ConnectivityOracle`], with these implementations:
//!
//! * [`UnionFindOracle`]: fast, materializes a disjoint-set forest; its
//!   memory is not charged to the workspace.
//! * [`SavitchOracle`]: midpoint-doubling reachability; charges one frame
//!   per recursion level, so its peak is `O(log^2 |V|)` bits. Its running
//!   time is `|V|^O(log |V|)`, which limits it to small graphs.
//! * [`PathWalkOracle`]: walks a graph of maximum degree 2 (a disjoint union
//!   of paths and cycles, which is what `K` and `K'` are) using three vertex
//!   registers: `O(log |V|)` bits, linear time.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::graphs::GraphStream;
use crate::tape::{ceil_log2, counter_bits, MeteredWorkspace};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl DisjointSet {
    pub fn new(len: usize) -> Self {
        Self { parent: (0..len).collect(), size: vec![1; len], sets: len }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// Union-find over a 1-indexed graph stream, plus the number of forest edges.
pub fn components_of(g: &dyn GraphStream, ws: &MeteredWorkspace) -> Result<(DisjointSet, usize)> {
    let order = g.vertex_count(ws)?;
    let mut dsu = DisjointSet::new(order);
    let mut forest_edges = 0;
    for v in 1..=order {
        g.for_each_neighbor(ws, v, &mut |u| {
            if u > v && dsu.union(v - 1, u - 1) {
                forest_edges += 1;
            }
            Ok(true)
        })?;
    }
    Ok((dsu, forest_edges))
}

/// Undirected s,t-connectivity.
pub trait ConnectivityOracle {
    fn connected(&self, g: &dyn GraphStream, s: usize, t: usize, ws: &MeteredWorkspace) -> Result<bool>;

    fn name(&self) -> &'static str;

    /// Whether the oracle charges its own scratch memory to the workspace.
    fn is_metered(&self) -> bool;

    /// Number of components. The default runs the counting loop with an
    /// early exit; oracles with a faster route override it.
    fn count_components(&self, g: &dyn GraphStream, ws: &MeteredWorkspace) -> Result<usize> {
        let n = g.vertex_count(ws)?;
        let mut c = 0;
        for t in 1..=n {
            let mut seen = false;
            for s in 1..t {
                if self.connected(g, s, t, ws)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                c += 1;
            }
        }
        Ok(c)
    }
}

fn check_vertex(order: usize, v: usize) -> Result<()> {
    if v == 0 || v > order {
        Err(Error::UnknownVertex(v))
    } else {
        Ok(())
    }
}

/// Baseline oracle. With [`UnionFindOracle::caching`] the forest of each
/// distinct graph key is built once per oracle instance.
#[derive(Debug, Default)]
pub struct UnionFindOracle {
    cache: Option<RefCell<HashMap<u64, Rc<RefCell<DisjointSet>>>>>,
}

impl UnionFindOracle {
    pub fn new() -> Self {
        Self { cache: None }
    }

    pub fn caching() -> Self {
        Self { cache: Some(RefCell::new(HashMap::new())) }
    }

    fn forest(&self, g: &dyn GraphStream, ws: &MeteredWorkspace) -> Result<Rc<RefCell<DisjointSet>>> {
        let Some(cache) = &self.cache else {
            return Ok(Rc::new(RefCell::new(components_of(g, ws)?.0)));
        };
        let key = g.key();
        if let Some(dsu) = cache.borrow().get(&key) {
            return Ok(Rc::clone(dsu));
        }
        let dsu = Rc::new(RefCell::new(components_of(g, ws)?.0));
        cache.borrow_mut().insert(key, Rc::clone(&dsu));
        Ok(dsu)
    }
}

impl ConnectivityOracle for UnionFindOracle {
    fn connected(&self, g: &dyn GraphStream, s: usize, t: usize, ws: &MeteredWorkspace) -> Result<bool> {
        let order = g.vertex_count(ws)?;
        check_vertex(order, s)?;
        check_vertex(order, t)?;
        let dsu = self.forest(g, ws)?;
        let same = dsu.borrow_mut().same(s - 1, t - 1);
        Ok(same)
    }

    fn name(&self) -> &'static str {
        "unionfind"
    }

    fn is_metered(&self) -> bool {
        false
    }

    fn count_components(&self, g: &dyn GraphStream, ws: &MeteredWorkspace) -> Result<usize> {
        Ok(self.forest(g, ws)?.borrow().set_count())
    }
}

/// Savitch reachability: `reach(u, v, d)` holds iff some midpoint `m` has
/// `reach(u, m, d/2)` and `reach(m, v, d/2)`; the top-level bound is
/// `d = 2^ceil(log2 |V|)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SavitchOracle;

impl SavitchOracle {
    fn reach(
        g: &dyn GraphStream,
        ws: &MeteredWorkspace,
        order: usize,
        frame_bits: u64,
        u: usize,
        v: usize,
        d: u64,
    ) -> Result<bool> {
        ws.tick()?;
        if u == v {
            return Ok(true);
        }
        if g.adjacent(ws, u, v)? {
            return Ok(true);
        }
        if d <= 1 {
            return Ok(false);
        }
        // Frame: midpoint register, half selector, level counter.
        let _frame = ws.charge(frame_bits)?;
        let half = d / 2;
        for m in 1..=order {
            if m == u || m == v {
                continue;
            }
            if Self::reach(g, ws, order, frame_bits, u, m, half)?
                && Self::reach(g, ws, order, frame_bits, m, v, half)?
            {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Number of work bits one recursion frame holds for a graph of `order`
    /// vertices.
    pub fn frame_bits(order: usize) -> u64 {
        let id = counter_bits(order as u64);
        let levels = ceil_log2((order as u64).max(1)) + 1;
        id + 1 + counter_bits(levels)
    }

    /// Upper bound on peak bits for one query: the two endpoint registers and
    /// one frame per level.
    pub fn peak_bound(order: usize) -> u64 {
        let depth = ceil_log2((order as u64).max(1));
        2 * counter_bits(order as u64) + depth * Self::frame_bits(order)
    }
}

impl ConnectivityOracle for SavitchOracle {
    fn connected(&self, g: &dyn GraphStream, s: usize, t: usize, ws: &MeteredWorkspace) -> Result<bool> {
        let order = g.vertex_count(ws)?;
        check_vertex(order, s)?;
        check_vertex(order, t)?;
        let _endpoints = ws.charge(2 * counter_bits(order as u64))?;
        let d = 1u64 << ceil_log2((order as u64).max(1));
        Self::reach(g, ws, order, Self::frame_bits(order), s, t, d)
    }

    fn name(&self) -> &'static str {
        "savitch"
    }

    fn is_metered(&self) -> bool {
        true
    }
}

/// Walks paths and cycles. Fails with [`Error::DegreeTooHigh`] on any vertex
/// with more than two neighbour slots.
#[derive(Debug, Default, Clone, Copy)]
pub struct PathWalkOracle;

impl PathWalkOracle {
    fn slots(g: &dyn GraphStream, ws: &MeteredWorkspace, v: usize) -> Result<[Option<usize>; 2]> {
        let mut slots = [None, None];
        let mut degree = 0;
        g.for_each_neighbor(ws, v, &mut |u| {
            if degree < 2 {
                slots[degree] = Some(u);
            }
            degree += 1;
            Ok(true)
        })?;
        if degree > 2 {
            return Err(Error::DegreeTooHigh { vertex: v, degree });
        }
        Ok(slots)
    }

    /// Follows the path from `start` through `first`, returning true if `t`
    /// is met. Returns `Err` only on stream errors.
    fn walk(
        g: &dyn GraphStream,
        ws: &MeteredWorkspace,
        start: usize,
        first: usize,
        t: usize,
    ) -> Result<(bool, bool)> {
        let (mut prev, mut cur) = (start, first);
        loop {
            ws.tick()?;
            if cur == t {
                return Ok((true, false));
            }
            if cur == start {
                // Closed a cycle; everything reachable has been seen.
                return Ok((false, true));
            }
            let next = match Self::slots(g, ws, cur)? {
                [Some(a), Some(b)] => {
                    if a == prev {
                        b
                    } else {
                        a
                    }
                }
                // Endpoint of a path.
                _ => return Ok((false, false)),
            };
            prev = cur;
            cur = next;
        }
    }
}

impl ConnectivityOracle for PathWalkOracle {
    fn connected(&self, g: &dyn GraphStream, s: usize, t: usize, ws: &MeteredWorkspace) -> Result<bool> {
        let order = g.vertex_count(ws)?;
        check_vertex(order, s)?;
        check_vertex(order, t)?;
        let id = counter_bits(order as u64);
        // start, previous, current, target
        let _regs = ws.charge(4 * id)?;
        if s == t {
            return Ok(true);
        }
        let slots = Self::slots(g, ws, s)?;
        if let Some(a) = slots[0] {
            let (found, cycle) = Self::walk(g, ws, s, a, t)?;
            if found {
                return Ok(true);
            }
            if cycle {
                return Ok(false);
            }
        }
        if let Some(b) = slots[1] {
            return Ok(Self::walk(g, ws, s, b, t)?.0);
        }
        Ok(false)
    }

    fn name(&self) -> &'static str {
        "pathwalk"
    }

    fn is_metered(&self) -> bool {
        true
    }
}

/// Counts the queries forwarded to an inner oracle.
pub struct CountingOracle<'a> {
    inner: &'a dyn ConnectivityOracle,
    calls: Cell<u64>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn ConnectivityOracle) -> Self {
        Self { inner, calls: Cell::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }
}

impl ConnectivityOracle for CountingOracle<'_> {
    fn connected(&self, g: &dyn GraphStream, s: usize, t: usize, ws: &MeteredWorkspace) -> Result<bool> {
        self.calls.set(self.calls.get() + 1);
        self.inner.connected(g, s, t, ws)
    }

    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn is_metered(&self) -> bool {
        self.inner.is_metered()
    }
}

/// `connected(oracle, G, s, t)`.
pub fn connected(oracle: &dyn ConnectivityOracle, g: &dyn GraphStream, s: usize, t: usize) -> Result<bool> {
    oracle.connected(g, s, t, &MeteredWorkspace::unlimited())
}

/// Number of connected components of `g`, by whatever route the oracle
/// prefers.
pub fn count_components(oracle: &dyn ConnectivityOracle, g: &dyn GraphStream) -> Result<usize> {
    oracle.count_components(g, &MeteredWorkspace::unlimited())
}

/// Component counting exactly as the metered engine runs it: `c` starts at 1,
/// and each `t >= 2` is tested against every `s < t` with no early exit, so a
/// graph on `n` vertices costs `n(n-1)/2` oracle calls. Counters are charged
/// to `ws`.
pub fn count_components_metered(
    oracle: &dyn ConnectivityOracle,
    g: &dyn GraphStream,
    ws: &MeteredWorkspace,
) -> Result<usize> {
    let n = g.vertex_count(ws)?;
    if n == 0 {
        return Ok(0);
    }
    let _c = ws.counter(n as u64)?;
    let _t = ws.counter(n as u64)?;
    let _s = ws.counter(n as u64)?;
    let _flag = ws.charge(1)?;
    let mut c = 1;
    for t in 2..=n {
        let mut seen = false;
        for s in 1..t {
            if oracle.connected(g, s, t, ws)? {
                seen = true;
            }
        }
        if !seen {
            c += 1;
        }
    }
    Ok(c)
}
