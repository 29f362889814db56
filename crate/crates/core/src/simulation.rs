//! Increment-based simulation of Brownian motion on the radial and river trees.
//!
//! Radial: points are grouped by directed ray and sorted by radius; the field
//! on a group is the prefix sum of independent increments whose variances are
//! the gaps between consecutive radii. River: the point set is closed under
//! projection to the axis, spanned by a tree rooted at the origin, and each
//! value is the sum of independent edge increments along its root path.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::gaussian_field::{CovMatrix, SampleBatch};
use crate::geometry::{euclidean, same_directed_ray, same_vertical, Point, Tolerance};
use crate::metrics::{radial_distance, river_distance};
use crate::rng::{fill_standard_normal, replicate_rng};

/// Plan for the radial simulator. `sigma[k]` is the input index of the k-th
/// point in sorted order; `variances[k]` is the variance of its increment.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPlan {
    pub points: Vec<Point>,
    pub sigma: Vec<usize>,
    pub group_sizes: Vec<usize>,
    pub variances: Vec<f64>,
}

fn angle(p: &Point) -> f64 {
    let a = p.y().atan2(p.x());
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

pub fn radial_plan(points: &[Point], tol: Tolerance) -> Result<RadialPlan> {
    if points.is_empty() {
        return Err(Error::InvalidPoint("empty point list".into()));
    }
    for p in points {
        p.ensure_dim(2)?;
    }
    let at_origin = |i: usize| points[i].norm() <= tol.eps_abs;
    let by_radius = |a: &usize, b: &usize| points[*a].norm().total_cmp(&points[*b].norm()).then(a.cmp(b));

    let (origin, mut rest): (Vec<usize>, Vec<usize>) = (0..points.len()).partition(|&i| at_origin(i));
    rest.sort_by(|&a, &b| angle(&points[a]).total_cmp(&angle(&points[b])).then_with(|| by_radius(&a, &b)));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in rest {
        match groups.last_mut() {
            Some(g) if same_directed_ray(&points[g[0]], &points[i], tol)? => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    // angles just below 2π belong to the ray at angle 0
    if groups.len() >= 2 && same_directed_ray(&points[groups[0][0]], &points[groups[groups.len() - 1][0]], tol)? {
        let last = groups.pop().unwrap_or_default();
        groups[0].extend(last);
    }
    if !origin.is_empty() {
        groups.insert(0, origin);
    }

    let mut sigma = Vec::with_capacity(points.len());
    let mut group_sizes = Vec::with_capacity(groups.len());
    let mut variances = Vec::with_capacity(points.len());
    for mut g in groups {
        g.sort_by(by_radius);
        group_sizes.push(g.len());
        for (k, &i) in g.iter().enumerate() {
            variances.push(if k == 0 {
                points[i].norm()
            } else {
                radial_distance(&points[g[k - 1]], &points[i], tol)?
            });
        }
        sigma.extend(g);
    }
    Ok(RadialPlan { points: points.to_vec(), sigma, group_sizes, variances })
}

impl RadialPlan {
    /// Start offset (in sorted order) of the group containing each sorted position.
    fn group_starts(&self) -> Vec<usize> {
        let mut starts = Vec::with_capacity(self.sigma.len());
        let mut offset = 0;
        for &size in &self.group_sizes {
            starts.extend(std::iter::repeat_n(offset, size));
            offset += size;
        }
        starts
    }
}

pub fn simulate_radial(plan: &RadialPlan, seed: u64, reps: usize) -> SampleBatch {
    let n = plan.points.len();
    let sd: Vec<f64> = plan.variances.iter().map(|v| v.max(0.0).sqrt()).collect();
    let starts = plan.group_starts();
    let mut values = vec![0.0; reps * n];
    let mut z = vec![0.0; n];
    for rep in 0..reps {
        fill_standard_normal(&mut replicate_rng(seed, rep), &mut z);
        let row = &mut values[rep * n..(rep + 1) * n];
        let mut acc = 0.0;
        for k in 0..n {
            if starts[k] == k {
                acc = 0.0;
            }
            acc += sd[k] * z[k];
            row[plan.sigma[k]] = acc;
        }
    }
    SampleBatch::new(seed, reps, plan.points.clone(), values)
}

/// Covariance of [`simulate_radial`]'s output computed from the plan alone.
pub fn induced_covariance_radial(plan: &RadialPlan) -> Result<CovMatrix> {
    let n = plan.points.len();
    let starts = plan.group_starts();
    let mut prefix = vec![0.0; n];
    for k in 0..n {
        prefix[k] = plan.variances[k] + if starts[k] == k { 0.0 } else { prefix[k - 1] };
    }
    let mut entries = vec![0.0; n * n];
    for k in 0..n {
        for l in k..n {
            if starts[l] != starts[k] {
                break;
            }
            let (i, j) = (plan.sigma[k], plan.sigma[l]);
            entries[i * n + j] = prefix[k];
            entries[j * n + i] = prefix[k];
        }
    }
    CovMatrix::from_entries(Point::origin(2), plan.points.clone(), entries)
}

fn xy_order(a: &Point, b: &Point) -> Ordering {
    a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y()))
}

/// Input points plus the origin and every vertical's axis projection, with
/// duplicates removed, sorted by first then second coordinate.
pub fn river_closure(points: &[Point], tol: Tolerance) -> Result<Vec<Point>> {
    for p in points {
        p.ensure_dim(2)?;
    }
    let mut all: Vec<Point> = points.to_vec();
    all.push(Point::origin(2));
    all.extend(points.iter().map(|p| Point::xy(p.x(), 0.0)));
    all.sort_by(xy_order);

    // verticals keep the first coordinate of their leftmost member
    let mut verticals: Vec<Vec<Point>> = Vec::new();
    for p in all {
        match verticals.last_mut() {
            Some(v) if same_vertical(&v[0], &p, tol) => v.push(p),
            _ => verticals.push(vec![p]),
        }
    }
    let mut out = Vec::new();
    for mut v in verticals {
        let x0 = v[0].x();
        for p in v.iter_mut().filter(|p| p.y() == 0.0) {
            *p = Point::xy(x0, 0.0);
        }
        v.sort_by(|a, b| a.y().total_cmp(&b.y()));
        let mut kept: Vec<Point> = Vec::with_capacity(v.len());
        for p in v {
            let dup = kept.last().is_some_and(|q| euclidean(q.coords(), p.coords()) <= tol.band(q.norm() + p.norm()));
            if !dup {
                kept.push(p);
            }
        }
        out.extend(kept);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiverEdge {
    pub tail: usize,
    pub head: usize,
    pub variance: f64,
}

/// Spanning tree of a labelled point set, rooted at the origin. Edges point
/// away from the root and are listed so every tail precedes its head.
#[derive(Debug, Clone, PartialEq)]
pub struct RiverPlan {
    pub labelled: Vec<Point>,
    pub root: usize,
    pub edges: Vec<RiverEdge>,
    /// Per point, the edges from the root to it with their orientation sign.
    pub root_paths: Vec<Vec<(usize, i8)>>,
}

pub fn river_plan(labelled: &[Point], tol: Tolerance) -> Result<RiverPlan> {
    if labelled.is_empty() {
        return Err(Error::NotLabelled("empty point list".into()));
    }
    for p in labelled {
        p.ensure_dim(2)?;
    }
    let on_axis = |p: &Point| p.y().abs() <= tol.eps_abs;

    // verticals as index ranges
    let mut verticals: Vec<(usize, usize)> = Vec::new();
    for i in 0..labelled.len() {
        if i > 0 && same_vertical(&labelled[i - 1], &labelled[i], tol) {
            if labelled[i].y() < labelled[i - 1].y() {
                return Err(Error::NotOrdered(i));
            }
            verticals.last_mut().expect("a vertical is open").1 = i + 1;
        } else {
            if i > 0 && labelled[i].x() < labelled[i - 1].x() {
                return Err(Error::NotOrdered(i));
            }
            verticals.push((i, i + 1));
        }
    }
    let mut axis_points = Vec::with_capacity(verticals.len());
    for &(s, e) in &verticals {
        let a = (s..e)
            .find(|&i| on_axis(&labelled[i]))
            .ok_or_else(|| Error::NotLabelled(format!("vertical x = {} has no axis point", labelled[s].x())))?;
        axis_points.push(a);
    }
    let root_vertical = verticals
        .iter()
        .position(|&(s, _)| same_vertical(&labelled[s], &Point::origin(2), tol))
        .ok_or_else(|| Error::NotLabelled("origin missing".into()))?;
    let root = axis_points[root_vertical];

    let mut edges = Vec::with_capacity(labelled.len().saturating_sub(1));
    let mut push = |tail: usize, head: usize| -> Result<()> {
        let variance = river_distance(&labelled[tail], &labelled[head], tol)?;
        edges.push(RiverEdge { tail, head, variance });
        Ok(())
    };
    for v in root_vertical + 1..verticals.len() {
        push(axis_points[v - 1], axis_points[v])?;
    }
    for v in (0..root_vertical).rev() {
        push(axis_points[v + 1], axis_points[v])?;
    }
    for (v, &(s, e)) in verticals.iter().enumerate() {
        let a = axis_points[v];
        // upward chain includes other on-axis duplicates
        let mut prev = a;
        for i in (s..e).filter(|&i| i != a && (i > a || on_axis(&labelled[i]))) {
            push(prev, i)?;
            prev = i;
        }
        let mut prev = a;
        for i in (s..a).rev().filter(|&i| !on_axis(&labelled[i])) {
            push(prev, i)?;
            prev = i;
        }
    }

    let mut parent = vec![None; labelled.len()];
    for (k, e) in edges.iter().enumerate() {
        parent[e.head] = Some(k);
    }
    let root_paths = (0..labelled.len())
        .map(|i| {
            let mut path = Vec::new();
            let mut cur = i;
            while let Some(k) = parent[cur] {
                path.push((k, 1));
                cur = edges[k].tail;
            }
            path.reverse();
            path
        })
        .collect();
    Ok(RiverPlan { labelled: labelled.to_vec(), root, edges, root_paths })
}

pub fn simulate_river(plan: &RiverPlan, seed: u64, reps: usize) -> SampleBatch {
    let n = plan.labelled.len();
    let m = plan.edges.len();
    let sd: Vec<f64> = plan.edges.iter().map(|e| e.variance.max(0.0).sqrt()).collect();
    let mut values = vec![0.0; reps * n];
    let mut z = vec![0.0; m];
    for rep in 0..reps {
        fill_standard_normal(&mut replicate_rng(seed, rep), &mut z);
        let row = &mut values[rep * n..(rep + 1) * n];
        for (k, e) in plan.edges.iter().enumerate() {
            row[e.head] = row[e.tail] + sd[k] * z[k];
        }
    }
    SampleBatch::new(seed, reps, plan.labelled.clone(), values)
}

/// Signed overlap of root paths: shared edges traversed in the same direction
/// add their variance, opposite directions subtract it.
pub fn induced_covariance_river(plan: &RiverPlan) -> Result<CovMatrix> {
    let n = plan.labelled.len();
    let m = plan.edges.len();
    let mut sign_on_path = vec![0i8; m];
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for &(k, s) in &plan.root_paths[i] {
            sign_on_path[k] = s;
        }
        for j in i..n {
            let c: f64 =
                plan.root_paths[j].iter().map(|&(k, s)| f64::from(sign_on_path[k] * s) * plan.edges[k].variance).sum();
            entries[i * n + j] = c;
            entries[j * n + i] = c;
        }
        for &(k, _) in &plan.root_paths[i] {
            sign_on_path[k] = 0;
        }
    }
    CovMatrix::from_entries(Point::origin(2), plan.labelled.clone(), entries)
}
