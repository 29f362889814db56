//! Point representations and the ray predicates every metric branches on.
//!
//! The radial and river metrics switch formula depending on whether two points
//! share a line through the origin (or a vertical). Floating inputs make that an
//! approximate question, so every predicate takes an explicit [`Tolerance`] and
//! all modules decide branches through the functions here.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute and relative tolerance used by all branch decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl Tolerance {
    pub const MAX: f64 = 1e-3;

    pub fn new(eps_abs: f64, eps_rel: f64) -> Result<Self> {
        let ok = |e: f64| e > 0.0 && e <= Self::MAX;
        if ok(eps_abs) && ok(eps_rel) {
            Ok(Self { eps_abs, eps_rel })
        } else {
            Err(Error::InvalidTolerance { eps_abs, eps_rel })
        }
    }

    /// Same value for both components.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }

    /// `eps_abs + eps_rel * scale`.
    #[inline]
    pub fn band(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps_abs: 1e-9, eps_rel: 1e-9 }
    }
}

/// A point of ℝⁿ with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("point has no coordinates".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {bad}")));
        }
        Ok(Self { coords })
    }

    /// Planar point. Panics on non-finite input; use [`Point::new`] for untrusted data.
    pub fn xy(x: f64, y: f64) -> Self {
        Self::new(vec![x, y]).expect("finite planar coordinates")
    }

    pub fn origin(dim: usize) -> Self {
        Self { coords: vec![0.0; dim.max(1)] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    /// Second coordinate; panics on one-dimensional points.
    #[inline]
    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point { coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found: self.dim() })
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point written as (directed ray, radius). The origin has no direction.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPoint {
    pub direction: Option<Vec<f64>>,
    pub radius: f64,
}

impl RayPoint {
    pub fn to_point(&self, dim: usize) -> Point {
        match &self.direction {
            Some(u) => Point { coords: u.iter().map(|c| c * self.radius).collect() },
            None => Point::origin(dim),
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean distance `|a - b|`.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn same_dim(a: &Point, b: &Point) -> Result<()> {
    a.ensure_dim(b.dim())
}

pub fn to_ray_point(p: &Point, tol: Tolerance) -> RayPoint {
    let radius = p.norm();
    let direction = (radius > tol.eps_abs).then(|| p.coords.iter().map(|c| c / radius).collect());
    RayPoint { direction, radius }
}

/// Norm of the component of the longer vector orthogonal to the shorter one.
/// Returns `None` when the shorter vector is within `eps_abs` of the origin.
pub(crate) fn orthogonal_residual(a: &[f64], b: &[f64], tol: Tolerance) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    let (short, long, ns) = if na <= nb { (a, b, na) } else { (b, a, nb) };
    if ns <= tol.eps_abs {
        return None;
    }
    let proj = dot(long, short) / ns;
    let residual: f64 = long
        .iter()
        .zip(short)
        .map(|(l, s)| {
            let r = l - proj * s / ns;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    Some(residual)
}

/// True iff `a` and `b` lie on a common line through the origin.
pub fn collinear_through_origin(a: &Point, b: &Point, tol: Tolerance) -> Result<bool> {
    same_dim(a, b)?;
    Ok(match orthogonal_residual(&a.coords, &b.coords, tol) {
        None => true,
        Some(r) => r <= tol.band(a.norm() + b.norm()),
    })
}

/// True iff `a` and `b` lie on a common closed ray from the origin.
pub fn same_directed_ray(a: &Point, b: &Point, tol: Tolerance) -> Result<bool> {
    same_dim(a, b)?;
    Ok(match orthogonal_residual(&a.coords, &b.coords, tol) {
        None => true,
        Some(r) => r <= tol.band(a.norm() + b.norm()) && dot(&a.coords, &b.coords) >= 0.0,
    })
}

/// Same vertical line `x = const` in the plane.
pub(crate) fn same_vertical(a: &Point, b: &Point, tol: Tolerance) -> bool {
    (a.x() - b.x()).abs() <= tol.band(a.x().abs() + b.x().abs())
}
