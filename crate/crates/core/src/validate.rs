//! Decides whether a gluing table describes a surface.
//!
//! Five conditions are checked at every site `(t, e)` with `e` a column:
//!
//! 1. `(t, e)` and `(t, ē)` together occur at most once as table entries;
//! 2. an unglued site is not referenced by any entry;
//! 3. `entry(t, e) = (s, f)` with forward `f` implies `entry(s, f) = (t, e)`;
//! 4. `entry(t, e) = (s, f)` with reversed `f` implies `entry(s, f̄) = (t, ē)`;
//! 5. no site is glued to itself, in either direction.
//!
//! Unlike a first-failure scan, every violation is collected.

use std::collections::HashMap;
use std::fmt;

use crate::triangulation::{Column, GluingEntry, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    DuplicateTarget,
    BoundaryReferenced,
    AsymmetricGluing,
    AsymmetricReversedGluing,
    SelfGluing,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub t: usize,
    pub e: Column,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} t={} e={}: {}", self.kind, self.t, self.e, self.detail)
    }
}

/// Returns `Ok(())` when all five conditions hold, otherwise every violation
/// in scan order (row, then column, then condition number).
pub fn check_surface(tri: &Triangulation) -> Result<(), Vec<Violation>> {
    // Occurrence count of each (triangle, column) irrespective of direction.
    let mut refs: HashMap<(usize, Column), usize> = HashMap::new();
    for entry in tri.rows().iter().flatten() {
        if let GluingEntry::Glued { target, label } = *entry {
            *refs.entry((target, label.column())).or_default() += 1;
        }
    }

    let mut violations = Vec::new();
    for (idx, row) in tri.rows().iter().enumerate() {
        let t = idx + 1;
        for col in Column::ALL {
            let e = col.label();
            let count = refs.get(&(t, col)).copied().unwrap_or(0);
            let mut push = |kind, detail: String| violations.push(Violation { kind, t, e: col, detail });

            if count > 1 {
                push(
                    ViolationKind::DuplicateTarget,
                    format!("({t},{e}) or ({t},{}) occurs {count} times", e.reverse()),
                );
            }
            let y = row[col.index()];
            match y {
                GluingEntry::Boundary => {
                    if count != 0 {
                        push(
                            ViolationKind::BoundaryReferenced,
                            format!("unglued edge is referenced {count} times"),
                        );
                    }
                }
                GluingEntry::Glued { target: s, label: f } => {
                    if f.is_forward() {
                        let z = tri.entry(s, f.column()).expect("well-formed table");
                        if z != GluingEntry::glued(t, e) {
                            push(
                                ViolationKind::AsymmetricGluing,
                                format!("entry is ({s},{f}) but row {s} column {f} is {}", show(z)),
                            );
                        }
                    } else {
                        let z = tri.entry(s, f.column()).expect("well-formed table");
                        if z != GluingEntry::glued(t, e.reverse()) {
                            push(
                                ViolationKind::AsymmetricReversedGluing,
                                format!(
                                    "entry is ({s},{f}) but row {s} column {} is {}, expected ({t},{})",
                                    f.reverse(),
                                    show(z),
                                    e.reverse()
                                ),
                            );
                        }
                    }
                    if s == t && (f == e || f == e.reverse()) {
                        push(ViolationKind::SelfGluing, format!("edge glued to itself as ({s},{f})"));
                    }
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub fn is_surface(tri: &Triangulation) -> bool {
    check_surface(tri).is_ok()
}

fn show(entry: GluingEntry) -> String {
    match entry {
        GluingEntry::Boundary => "unglued".to_owned(),
        GluingEntry::Glued { target, label } => format!("({target},{label})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::KLEIN_TAPE;

    fn kinds(text: &str) -> Vec<(ViolationKind, usize, Column)> {
        let tri = Triangulation::parse(text).unwrap();
        check_surface(&tri).unwrap_err().into_iter().map(|v| (v.kind, v.t, v.e)).collect()
    }

    #[test]
    fn klein_is_surface() {
        assert!(is_surface(&Triangulation::parse(KLEIN_TAPE).unwrap()));
    }

    #[test]
    fn empty_is_surface() {
        assert!(is_surface(&Triangulation::empty()));
    }

    #[test]
    fn self_gluing() {
        assert_eq!(kinds("# 1 (12) - -"), vec![(ViolationKind::SelfGluing, 1, Column::C12)]);
        assert_eq!(
            kinds("# 1 (21) 1 (12) -"),
            vec![
                (ViolationKind::DuplicateTarget, 1, Column::C12),
                (ViolationKind::SelfGluing, 1, Column::C12),
                (ViolationKind::AsymmetricGluing, 1, Column::C23),
            ]
        );
    }

    #[test]
    fn asymmetric_and_boundary_referenced() {
        assert_eq!(
            kinds("# 10 (12) - - # - - -"),
            vec![
                (ViolationKind::AsymmetricGluing, 1, Column::C12),
                (ViolationKind::BoundaryReferenced, 2, Column::C12),
            ]
        );
    }

    #[test]
    fn duplicate_target() {
        // Triangles 1 and 2 are glued consistently; triangle 3 also claims (1,12).
        let v = kinds("# 10 (21) - - # 1 (21) - - # 1 (12) - -");
        assert!(v.contains(&(ViolationKind::DuplicateTarget, 1, Column::C12)));
    }

    #[test]
    fn asymmetric_reversed() {
        // entry(1,12) = (2,21) requires entry(2,12) = (1,21).
        let v = kinds("# 10 (21) - - # 1 (12) - -");
        assert!(v.contains(&(ViolationKind::AsymmetricReversedGluing, 1, Column::C12)));
        assert!(!v.iter().any(|k| k.0 == ViolationKind::SelfGluing));
    }

    #[test]
    fn two_edges_of_one_triangle_may_be_glued() {
        // Cone: edge (23) glued to edge (13) of the same triangle.
        assert!(is_surface(&Triangulation::parse("# - 1 (13) 1 (32)").unwrap()));
    }

    #[test]
    fn violation_line_format() {
        let tri = Triangulation::parse("# 1 (12) - -").unwrap();
        let v = check_surface(&tri).unwrap_err();
        assert_eq!(v[0].to_string(), "SelfGluing t=1 e=12: edge glued to itself as (1,12)");
    }
}
