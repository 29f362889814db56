//! Finite-set certification of tree-metric structure.
//!
//! Scans are exhaustive and run in lexicographic index order, so the first
//! reported witness is the lexicographically smallest one.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{Point, Tolerance};
use crate::metrics::{distance, gromov_median, segment_excess, DistanceMatrix, MetricKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    FourPoint,
    Triangle,
    Ultrametric,
    ConditionB,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::FourPoint => "four_point",
            ViolationKind::Triangle => "triangle",
            ViolationKind::Ultrametric => "ultrametric",
            ViolationKind::ConditionB => "condition_b",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
    /// Amount by which the inequality fails (always positive).
    pub slack: f64,
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.witness.iter().map(|i| i.to_string()).collect();
        write!(f, "{} violated at [{}] by {:e}", self.kind, idx.join(","), self.slack)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(ViolationReport),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn violation(&self) -> Option<&ViolationReport> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(v) => Some(v),
        }
    }
}

/// Excess of the largest pairing sum over the second largest.
fn four_point_excess(dm: &DistanceMatrix, [a, b, c, d]: [usize; 4]) -> (f64, f64) {
    let mut sums = [dm.get(a, b) + dm.get(c, d), dm.get(a, c) + dm.get(b, d), dm.get(a, d) + dm.get(b, c)];
    sums.sort_by(f64::total_cmp);
    (sums[2] - sums[1], sums[2])
}

/// Four-point condition on one quadruple, for all three pairings.
///
/// Repeated indices are allowed; with `c == d` this reduces to the triangle
/// inequality.
pub fn four_point_holds(dm: &DistanceMatrix, quad: [usize; 4], tol: Tolerance) -> Result<bool> {
    for &i in &quad {
        dm.check_index(i)?;
    }
    let (excess, scale) = four_point_excess(dm, quad);
    Ok(excess <= tol.band(scale))
}

fn triangle_violation(dm: &DistanceMatrix, tol: Tolerance) -> Option<ViolationReport> {
    let n = dm.n();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                // each side against the sum of the other two
                for (long, s1, s2) in [
                    (dm.get(i, k), dm.get(i, j), dm.get(j, k)),
                    (dm.get(i, j), dm.get(i, k), dm.get(j, k)),
                    (dm.get(j, k), dm.get(i, j), dm.get(i, k)),
                ] {
                    let excess = long - s1 - s2;
                    if excess > tol.band(long) {
                        return Some(ViolationReport {
                            kind: ViolationKind::Triangle,
                            witness: vec![i, j, k],
                            slack: excess,
                        });
                    }
                }
            }
        }
    }
    None
}

fn four_point_violation(dm: &DistanceMatrix, tol: Tolerance) -> Option<ViolationReport> {
    let n = dm.n();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let (excess, scale) = four_point_excess(dm, [a, b, c, d]);
                    if excess > tol.band(scale) {
                        return Some(ViolationReport {
                            kind: ViolationKind::FourPoint,
                            witness: vec![a, b, c, d],
                            slack: excess,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Triangle inequality on every triple, then the four-point condition on every
/// quadruple.
pub fn is_tree_metric(dm: &DistanceMatrix, tol: Tolerance) -> Verdict {
    match triangle_violation(dm, tol).or_else(|| four_point_violation(dm, tol)) {
        Some(v) => Verdict::Fail(v),
        None => Verdict::Pass,
    }
}

pub fn ultrametric_violation(dm: &DistanceMatrix, tol: Tolerance) -> Option<ViolationReport> {
    let n = dm.n();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for (side, o1, o2) in [
                    (dm.get(i, j), dm.get(i, k), dm.get(j, k)),
                    (dm.get(i, k), dm.get(i, j), dm.get(j, k)),
                    (dm.get(j, k), dm.get(i, j), dm.get(i, k)),
                ] {
                    let excess = side - o1.max(o2);
                    if excess > tol.band(side) {
                        return Some(ViolationReport {
                            kind: ViolationKind::Ultrametric,
                            witness: vec![i, j, k],
                            slack: excess,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Strong triangle inequality `d(A,B) ≤ max{d(A,C), d(B,C)}` on every triple.
pub fn is_ultrametric(dm: &DistanceMatrix, tol: Tolerance) -> bool {
    ultrametric_violation(dm, tol).is_none()
}

/// Worst segment-membership excess of `o` over the three sides of a triple.
fn tripoint_excess(kind: MetricKind, pts: [&Point; 3], o: &Point, tol: Tolerance) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let excess = segment_excess(kind, pts[i], pts[j], o, tol)?.abs();
        let allowed = tol.band(distance(kind, pts[i], pts[j], tol)?);
        worst = worst.max(excess - allowed);
    }
    Ok(worst)
}

/// Smallest amount by which a triple fails to have a common tripoint, or
/// `None` when one exists.
fn condition_b_failure(kind: MetricKind, pts: [&Point; 3], tol: Tolerance) -> Result<Option<f64>> {
    if kind.shape().is_some() {
        return match gromov_median(kind, pts[0], pts[1], pts[2], tol) {
            Ok(o) => {
                let excess = tripoint_excess(kind, pts, &o, tol)?;
                Ok((excess > 0.0).then_some(excess))
            }
            Err(Error::Median { deviation }) => Ok(Some(deviation)),
            Err(e) => Err(e),
        };
    }
    // Without a closed-form median the only computable tripoints are the points
    // themselves: a triple passes when one of them lies between the other two.
    let mut best = f64::INFINITY;
    for o in pts {
        let excess = tripoint_excess(kind, pts, o, tol)?;
        if excess <= 0.0 {
            return Ok(None);
        }
        best = best.min(excess);
    }
    Ok(Some(best))
}

/// Every distinct triple has a tripoint lying on all three metric segments.
pub fn check_condition_b(kind: MetricKind, points: &[Point], tol: Tolerance) -> Result<Verdict> {
    if let Some(first) = points.first() {
        for p in points {
            first.ensure_dim(p.dim())?;
            kind.check_point(p)?;
        }
    }
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if let Some(slack) = condition_b_failure(kind, [&points[i], &points[j], &points[k]], tol)? {
                    return Ok(Verdict::Fail(ViolationReport {
                        kind: ViolationKind::ConditionB,
                        witness: vec![i, j, k],
                        slack,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}
