//! Triangulations of known homeomorphism type, for tests and benchmarks.
//!
//! Closed surfaces come from a polygon with the standard word
//! (`a a^-1`, `a1 b1 a1^-1 b1^-1 ...`, `a1 a1 a2 a2 ...`), triangulated as a
//! fan. A puncture subdivides three times and deletes a triangle whose
//! corners are all new interior vertices.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariants::InvariantTriple;
use crate::triangulation::{Column, EdgeLabel, GluingEntry, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    /// Connected sum of `g` tori.
    Orientable(u32),
    /// Connected sum of `k >= 1` projective planes.
    NonOrientable(u32),
    Disk,
    Moebius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Random triangle permutation.
    Relabel { seed: u64 },
    /// `count` stellar subdivisions of random triangles.
    Subdivide { count: u32, seed: u64 },
}

/// A generator request. Text form (see [`FromStr`]):
/// `orientable(2):b=1 + sphere + moebius | relabel=7, subdivide=3/9`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Surface { family: Family, punctures: u32, mutations: Vec<Mutation> },
    Union { components: Vec<FamilySpec>, mutations: Vec<Mutation> },
}

impl FamilySpec {
    pub fn surface(family: Family, punctures: u32) -> Self {
        FamilySpec::Surface { family, punctures, mutations: Vec::new() }
    }

    pub fn union(components: Vec<FamilySpec>) -> Self {
        FamilySpec::Union { components, mutations: Vec::new() }
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        match &mut self {
            FamilySpec::Surface { mutations, .. } | FamilySpec::Union { mutations, .. } => mutations.push(m),
        }
        self
    }

    /// Closed-form triples of every component, sorted.
    pub fn expected_triples(&self) -> Result<Vec<InvariantTriple>> {
        let mut out = Vec::new();
        self.collect_triples(&mut out)?;
        out.sort();
        Ok(out)
    }

    fn collect_triples(&self, out: &mut Vec<InvariantTriple>) -> Result<()> {
        match self {
            FamilySpec::Surface { family, punctures, .. } => {
                let p = i64::from(*punctures);
                let (o, chi, b) = match *family {
                    Family::Sphere => (0, 2, 0),
                    Family::Orientable(g) => (0, 2 - 2 * i64::from(g), 0),
                    Family::NonOrientable(0) => {
                        return Err(unsupported("non-orientable genus must be at least 1"))
                    }
                    Family::NonOrientable(k) => (1, 2 - i64::from(k), 0),
                    Family::Disk => (0, 1, 1),
                    Family::Moebius => (1, 0, 1),
                };
                out.push(InvariantTriple::new(o, chi - p, b + *punctures as u64));
            }
            FamilySpec::Union { components, .. } => {
                for c in components {
                    c.collect_triples(out)?;
                }
            }
        }
        Ok(())
    }
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::UnsupportedSpec(msg.into())
}

pub fn generate(spec: &FamilySpec) -> Result<Triangulation> {
    let (rows, mutations) = match spec {
        FamilySpec::Surface { family, punctures, mutations } => {
            let mut rows = base_rows(*family)?;
            for _ in 0..*punctures {
                puncture(&mut rows);
            }
            (rows, mutations)
        }
        FamilySpec::Union { components, mutations } => {
            let mut rows = Vec::new();
            for c in components {
                let part = generate(c)?;
                append_shifted(&mut rows, part.rows());
            }
            (rows, mutations)
        }
    };
    let mut tri = Triangulation::new(rows)?;
    for m in mutations {
        tri = apply_mutation(&tri, *m);
    }
    Ok(tri)
}

pub fn apply_mutation(tri: &Triangulation, m: Mutation) -> Triangulation {
    match m {
        Mutation::Relabel { seed } => relabel(tri, seed),
        Mutation::Subdivide { count, seed } => subdivide(tri, count, seed),
    }
}

type Rows = Vec<[GluingEntry; 3]>;

fn set(rows: &mut Rows, t: usize, col: Column, entry: GluingEntry) {
    rows[t - 1][col.index()] = entry;
}

/// Glues edge `col_a` of `a` to edge `col_b` of `b`. With `compatible`, the
/// two triangle orientations agree across the edge (the edge is traversed in
/// opposite directions); otherwise the gluing flips orientation.
fn glue(rows: &mut Rows, (a, col_a): (usize, Column), (b, col_b): (usize, Column), compatible: bool) {
    let (la, lb) = if compatible {
        (col_b.label().reverse(), col_a.label().reverse())
    } else {
        (col_b.label(), col_a.label())
    };
    set(rows, a, col_a, GluingEntry::glued(b, la));
    set(rows, b, col_b, GluingEntry::glued(a, lb));
}

/// Triangulated polygon whose sides, in boundary order, are given by
/// `word` as `(letter, inverse)`; `None` leaves a side unglued. Returns the
/// rows with every side glued per the word.
fn polygon(word: &[Option<(u32, bool)>]) -> Rows {
    let m = word.len();
    let (mut rows, sides): (Rows, Vec<(usize, Column)>) = if m == 2 {
        // Cone over the 2-gon from a centre point.
        let mut rows = vec![[GluingEntry::Boundary; 3]; 2];
        glue(&mut rows, (1, Column::C23), (2, Column::C31), true);
        glue(&mut rows, (2, Column::C23), (1, Column::C31), true);
        (rows, vec![(1, Column::C12), (2, Column::C12)])
    } else {
        // Fan from the first polygon vertex: triangle j is (P1, P(j+1), P(j+2)).
        let mut rows = vec![[GluingEntry::Boundary; 3]; m - 2];
        for j in 1..m - 2 {
            glue(&mut rows, (j, Column::C31), (j + 1, Column::C12), true);
        }
        let mut sides = vec![(1, Column::C12)];
        sides.extend((2..m).map(|s| (s - 1, Column::C23)));
        sides.push((m - 2, Column::C31));
        (rows, sides)
    };
    for i in 0..m {
        let Some((letter, inv)) = word[i] else { continue };
        for j in i + 1..m {
            if let Some((other, other_inv)) = word[j] {
                if other == letter {
                    glue(&mut rows, sides[i], sides[j], inv != other_inv);
                }
            }
        }
    }
    rows
}

fn base_rows(family: Family) -> Result<Rows> {
    let word: Vec<Option<(u32, bool)>> = match family {
        Family::Sphere | Family::Orientable(0) => vec![Some((0, false)), Some((0, true))],
        Family::Orientable(g) => (0..g)
            .flat_map(|i| {
                let (a, b) = (2 * i, 2 * i + 1);
                [Some((a, false)), Some((b, false)), Some((a, true)), Some((b, true))]
            })
            .collect(),
        Family::NonOrientable(0) => return Err(unsupported("non-orientable genus must be at least 1")),
        Family::NonOrientable(k) => (0..k).flat_map(|i| [Some((i, false)), Some((i, false))]).collect(),
        Family::Disk => return Ok(vec![[GluingEntry::Boundary; 3]]),
        Family::Moebius => vec![Some((0, false)), None, Some((0, false)), None],
    };
    Ok(polygon(&word))
}

fn append_shifted(rows: &mut Rows, part: &[[GluingEntry; 3]]) {
    let shift = rows.len();
    rows.extend(part.iter().map(|row| {
        row.map(|e| match e {
            GluingEntry::Boundary => e,
            GluingEntry::Glued { target, label } => GluingEntry::glued(target + shift, label),
        })
    }));
}

/// Stellar subdivision of triangle `t` with centre `v`: `t` keeps
/// `(P1, P2, v)` and rows `n+1 = (P2, P3, v)`, `n+2 = (P3, P1, v)` are added.
fn subdivide_triangle(rows: &mut Rows, t: usize) {
    let n = rows.len();
    let (t2, t3) = (n + 1, n + 2);
    // Old edges 23 and 31 of t become edge 12 of t2 and t3.
    let remap = |e: GluingEntry| match e {
        GluingEntry::Glued { target, label } if target == t => match label {
            EdgeLabel::E23 => GluingEntry::glued(t2, EdgeLabel::E12),
            EdgeLabel::E32 => GluingEntry::glued(t2, EdgeLabel::E21),
            EdgeLabel::E31 => GluingEntry::glued(t3, EdgeLabel::E12),
            EdgeLabel::E13 => GluingEntry::glued(t3, EdgeLabel::E21),
            _ => e,
        },
        _ => e,
    };
    for row in rows.iter_mut() {
        *row = row.map(remap);
    }
    let old = rows[t - 1];
    rows.push([old[Column::C23.index()], GluingEntry::Boundary, GluingEntry::Boundary]);
    rows.push([old[Column::C31.index()], GluingEntry::Boundary, GluingEntry::Boundary]);
    glue(rows, (t, Column::C23), (t2, Column::C31), true);
    glue(rows, (t2, Column::C23), (t3, Column::C31), true);
    glue(rows, (t3, Column::C23), (t, Column::C31), true);
}

/// Deletes row `r`: its neighbours' edges become boundary, and the last row
/// moves into the gap.
fn remove_triangle(rows: &mut Rows, r: usize) {
    for row in rows.iter_mut() {
        for e in row.iter_mut() {
            if e.target() == Some(r) {
                *e = GluingEntry::Boundary;
            }
        }
    }
    let last = rows.len();
    rows.swap_remove(r - 1);
    if r != last {
        for row in rows.iter_mut() {
            for e in row.iter_mut() {
                if let GluingEntry::Glued { target, label } = *e {
                    if target == last {
                        *e = GluingEntry::glued(r, label);
                    }
                }
            }
        }
    }
}

fn puncture(rows: &mut Rows) {
    // Centre v of triangle 1, then w of (P1, P2, v), then u of (P2, v, w).
    subdivide_triangle(rows, 1);
    subdivide_triangle(rows, 1);
    let pvw = rows.len() - 1;
    let n = rows.len();
    subdivide_triangle(rows, pvw);
    // Row n + 1 is (v, w, u), whose corners are all interior.
    remove_triangle(rows, n + 1);
}

/// Applies a uniformly random permutation to the triangle indices.
pub fn relabel(tri: &Triangulation, seed: u64) -> Triangulation {
    let n = tri.triangle_count();
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    permute(tri, &perm)
}

/// Row `t` moves to `perm[t - 1]`; `perm` must be a permutation of `1..=n`.
pub fn permute(tri: &Triangulation, perm: &[usize]) -> Triangulation {
    let n = tri.triangle_count();
    assert_eq!(perm.len(), n, "permutation length");
    let mut rows = vec![[GluingEntry::Boundary; 3]; n];
    for (idx, row) in tri.rows().iter().enumerate() {
        rows[perm[idx] - 1] = row.map(|e| match e {
            GluingEntry::Boundary => e,
            GluingEntry::Glued { target, label } => GluingEntry::glued(perm[target - 1], label),
        });
    }
    Triangulation::new(rows).expect("permutation keeps targets in range")
}

/// `count` stellar subdivisions, each of a random triangle.
pub fn subdivide(tri: &Triangulation, count: u32, seed: u64) -> Triangulation {
    if tri.is_empty() {
        return tri.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = tri.rows().to_vec();
    for _ in 0..count {
        let t = rng.gen_range(1..=rows.len());
        subdivide_triangle(&mut rows, t);
    }
    Triangulation::new(rows).expect("subdivision keeps targets in range")
}

/// Deterministic corpus: every single surface with `g <= 5`, `k <= 6` and
/// up to 4 punctures, disks and Möbius bands with up to 4 punctures, then
/// `extra` random unions of 2 to 6 components with random mutations.
pub fn corpus(seed: u64, extra: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for b in 0..=4 {
        out.push(FamilySpec::surface(Family::Sphere, b));
        for g in 1..=5 {
            out.push(FamilySpec::surface(Family::Orientable(g), b));
        }
        for k in 1..=6 {
            out.push(FamilySpec::surface(Family::NonOrientable(k), b));
        }
        out.push(FamilySpec::surface(Family::Disk, b));
        out.push(FamilySpec::surface(Family::Moebius, b));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let c = rng.gen_range(2..=6);
        let components = (0..c).map(|_| random_surface(&mut rng)).collect();
        let mut spec = FamilySpec::union(components);
        if rng.gen_bool(0.5) {
            spec = spec.with_mutation(Mutation::Relabel { seed: rng.gen() });
        }
        out.push(spec);
    }
    out
}

fn random_surface(rng: &mut ChaCha8Rng) -> FamilySpec {
    let family = match rng.gen_range(0..5) {
        0 => Family::Sphere,
        1 => Family::Orientable(rng.gen_range(1..=5)),
        2 => Family::NonOrientable(rng.gen_range(1..=6)),
        3 => Family::Disk,
        _ => Family::Moebius,
    };
    let mut spec = FamilySpec::surface(family, rng.gen_range(0..=4));
    if rng.gen_bool(0.3) {
        spec = spec.with_mutation(Mutation::Subdivide { count: rng.gen_range(1..=5), seed: rng.gen() });
    }
    if rng.gen_bool(0.3) {
        spec = spec.with_mutation(Mutation::Relabel { seed: rng.gen() });
    }
    spec
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Sphere => f.write_str("sphere"),
            Family::Orientable(g) => write!(f, "orientable({g})"),
            Family::NonOrientable(k) => write!(f, "nonorientable({k})"),
            Family::Disk => f.write_str("disk"),
            Family::Moebius => f.write_str("moebius"),
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::Relabel { seed } => write!(f, "relabel={seed}"),
            Mutation::Subdivide { count, seed } => write!(f, "subdivide={count}/{seed}"),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Surface { family, punctures, mutations } => {
                write!(f, "{family}")?;
                if *punctures > 0 {
                    write!(f, ":b={punctures}")?;
                }
                for m in mutations {
                    write!(f, ":{m}")?;
                }
                Ok(())
            }
            FamilySpec::Union { components, mutations } => {
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{c}")?;
                }
                if !mutations.is_empty() {
                    f.write_str(" |")?;
                    for (i, m) in mutations.iter().enumerate() {
                        write!(f, "{} {m}", if i == 0 { "" } else { "," })?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| unsupported(format!("bad {what} `{s}`")))
}

fn parse_mutation(s: &str) -> Result<Mutation> {
    let (key, val) = s.trim().split_once('=').ok_or_else(|| unsupported(format!("bad mutation `{s}`")))?;
    match key.trim() {
        "relabel" => Ok(Mutation::Relabel { seed: parse_num(val, "seed")? }),
        "subdivide" => {
            let (count, seed) = val.split_once('/').unwrap_or((val, "0"));
            Ok(Mutation::Subdivide { count: parse_num(count, "count")?, seed: parse_num(seed, "seed")? })
        }
        other => Err(unsupported(format!("unknown mutation `{other}`"))),
    }
}

fn parse_family(s: &str) -> Result<Family> {
    let s = s.trim();
    let arg = |name: &str| -> Result<Option<u32>> {
        match s.strip_prefix(name).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')')) {
            Some(n) => parse_num(n, "genus").map(Some),
            None => Ok(None),
        }
    };
    let family = match s {
        "sphere" => Family::Sphere,
        "torus" => Family::Orientable(1),
        "projective" => Family::NonOrientable(1),
        "klein" => Family::NonOrientable(2),
        "disk" => Family::Disk,
        "moebius" => Family::Moebius,
        _ => {
            if let Some(g) = arg("orientable")? {
                Family::Orientable(g)
            } else if let Some(k) = arg("nonorientable")? {
                if k == 0 {
                    return Err(unsupported("non-orientable genus must be at least 1"));
                }
                Family::NonOrientable(k)
            } else {
                return Err(unsupported(format!("unknown family `{s}`")));
            }
        }
    };
    Ok(family)
}

fn parse_surface(s: &str) -> Result<FamilySpec> {
    let mut parts = s.split(':');
    let family = parse_family(parts.next().unwrap_or(""))?;
    let mut punctures = 0;
    let mut mutations = Vec::new();
    for opt in parts {
        match opt.trim().strip_prefix("b=") {
            Some(b) => punctures = parse_num(b, "puncture count")?,
            None => mutations.push(parse_mutation(opt)?),
        }
    }
    Ok(FamilySpec::Surface { family, punctures, mutations })
}

/// `item (+ item)* [| mutation (, mutation)*]` where an item is
/// `family(:b=N)?(:mutation)*`, a family is one of `sphere`, `disk`,
/// `moebius`, `torus`, `projective`, `klein`, `orientable(g)`,
/// `nonorientable(k)`, and a mutation is `relabel=SEED` or
/// `subdivide=COUNT/SEED`. A single item without `|` parses as a surface.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (items, muts) = match s.split_once('|') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let items: Vec<&str> = items.split('+').collect();
        if items.len() == 1 && muts.is_none() {
            return parse_surface(items[0]);
        }
        let components = items.into_iter().map(parse_surface).collect::<Result<Vec<_>>>()?;
        let mutations = match muts {
            Some(m) => m.split(',').map(parse_mutation).collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        Ok(FamilySpec::Union { components, mutations })
    }
}
