//! Brownian motion indexed by a tree metric: the covariance
//! `½(d(O,X) + d(O,Y) - d(X,Y))`, a semidefinite Cholesky factorization that
//! doubles as a negative-type oracle, and exact sampling from the factor.

use crate::error::{Error, Result};
use crate::geometry::{Point, Tolerance};
use crate::metrics::{distance, MetricKind};
use crate::rng::{fill_standard_normal, replicate_rng};

/// Relative pivot tolerance of [`cholesky_psd`] when the caller has no better value.
pub const DEFAULT_PIVOT_REL: f64 = 1e-10;

/// Symmetric covariance over an indexed point list, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    pub root: Point,
    pub points: Vec<Point>,
    entries: Vec<f64>,
}

impl CovMatrix {
    /// Takes a row-major `n×n` matrix; it is symmetrized from the upper triangle.
    pub fn from_entries(root: Point, points: Vec<Point>, mut entries: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("non-finite entry {bad}")));
        }
        for i in 0..n {
            for j in 0..i {
                entries[i * n + j] = entries[j * n + i];
            }
        }
        Ok(Self { root, points, entries })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n() + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n()).map(|i| self.get(i, i)).fold(0.0, f64::max)
    }

    /// `1e-10 · max diagonal`.
    pub fn default_pivot_tol(&self) -> f64 {
        DEFAULT_PIVOT_REL * self.max_diagonal()
    }

    /// Largest entrywise gap to `other` and where it occurs.
    pub fn max_abs_diff(&self, other: &CovMatrix) -> Result<(f64, (usize, usize))> {
        if self.n() != other.n() {
            return Err(Error::Dimension { expected: self.n(), found: other.n() });
        }
        let n = self.n();
        let mut worst = (0.0, (0, 0));
        for i in 0..n {
            for j in 0..n {
                let gap = (self.get(i, j) - other.get(i, j)).abs();
                if gap > worst.0 {
                    worst = (gap, (i, j));
                }
            }
        }
        Ok(worst)
    }
}

pub fn tree_covariance(kind: MetricKind, o: &Point, x: &Point, y: &Point, tol: Tolerance) -> Result<f64> {
    let dox = distance(kind, o, x, tol)?;
    if x == y {
        return Ok(dox);
    }
    Ok(0.5 * (dox + distance(kind, o, y, tol)? - distance(kind, x, y, tol)?))
}

pub fn covariance_matrix(kind: MetricKind, o: &Point, points: &[Point], tol: Tolerance) -> Result<CovMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidPoint("empty point list".into()));
    }
    let n = points.len();
    let root_d = points.iter().map(|p| distance(kind, o, p, tol)).collect::<Result<Vec<_>>>()?;
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = root_d[i];
        for j in i + 1..n {
            let c = 0.5 * (root_d[i] + root_d[j] - distance(kind, &points[i], &points[j], tol)?);
            entries[i * n + j] = c;
            entries[j * n + i] = c;
        }
    }
    Ok(CovMatrix { root: o.clone(), points: points.to_vec(), entries })
}

/// Lower-triangular `L` with `L·Lᵀ ≈ C`; columns of numerically zero pivots are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    pub points: Vec<Point>,
    lower: Vec<f64>,
    pub rank: usize,
}

impl CholeskyFactor {
    #[inline]
    pub fn n(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.n() + j]
    }

    /// Row-major `L·Lᵀ`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..=j).map(|k| self.get(i, k) * self.get(j, k)).sum();
                out[i * n + j] = s;
                out[j * n + i] = s;
            }
        }
        out
    }
}

/// Semidefinite Cholesky without pivoting.
///
/// A pivot below `-pivot_tol` is an error. A pivot in `[-pivot_tol, pivot_tol]`
/// zeroes its column, which is only consistent when the remaining entries of
/// that column are `O(√(pivot_tol · max diagonal))`; otherwise the matrix has a
/// negative 2×2 minor and is rejected as well.
pub fn cholesky_psd(cov: &CovMatrix, pivot_tol: f64) -> Result<CholeskyFactor> {
    let n = cov.n();
    let scale = cov.max_diagonal();
    let off_tol = (pivot_tol.max(0.0) * scale).sqrt() + 1e-12 * scale;
    let mut l = vec![0.0; n * n];
    let mut rank = 0;
    for j in 0..n {
        let pivot = cov.get(j, j) - (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum::<f64>();
        if pivot < -pivot_tol {
            return Err(Error::NotPsd { index: j, pivot });
        }
        let zero = pivot <= pivot_tol;
        let ljj = if zero { 0.0 } else { pivot.sqrt() };
        l[j * n + j] = ljj;
        if !zero {
            rank += 1;
        }
        for i in j + 1..n {
            let r = cov.get(i, j) - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if zero {
                if r.abs() > off_tol {
                    return Err(Error::NotPsd { index: j, pivot });
                }
            } else {
                l[i * n + j] = r / ljj;
            }
        }
    }
    Ok(CholeskyFactor { points: cov.points.clone(), lower: l, rank })
}

/// Simulated field values, `reps × n`, row-major by replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub reps: usize,
    pub points: Vec<Point>,
    values: Vec<f64>,
}

impl SampleBatch {
    pub(crate) fn new(seed: u64, reps: usize, points: Vec<Point>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), reps * points.len());
        Self { seed, reps, points, values }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn row(&self, rep: usize) -> &[f64] {
        let n = self.n();
        &self.values[rep * n..(rep + 1) * n]
    }

    #[inline]
    pub fn value(&self, rep: usize, i: usize) -> f64 {
        self.values[rep * self.n() + i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean-zero estimator with divisor `reps`.
    pub fn empirical_covariance(&self) -> Vec<f64> {
        let n = self.n();
        let mut acc = vec![0.0; n * n];
        for r in 0..self.reps {
            let row = self.row(r);
            for i in 0..n {
                let vi = row[i];
                if vi == 0.0 {
                    continue;
                }
                for j in i..n {
                    acc[i * n + j] += vi * row[j];
                }
            }
        }
        let reps = self.reps.max(1) as f64;
        for i in 0..n {
            for j in i..n {
                let v = acc[i * n + j] / reps;
                acc[i * n + j] = v;
                acc[j * n + i] = v;
            }
        }
        acc
    }
}

/// Each replicate is `L·z` with `z` standard normal from the replicate's stream.
pub fn sample_exact(factor: &CholeskyFactor, seed: u64, reps: usize) -> SampleBatch {
    let n = factor.n();
    let mut values = vec![0.0; reps * n];
    let mut z = vec![0.0; n];
    for rep in 0..reps {
        fill_standard_normal(&mut replicate_rng(seed, rep), &mut z);
        let row = &mut values[rep * n..(rep + 1) * n];
        for (i, out) in row.iter_mut().enumerate() {
            *out = (0..=i).map(|k| factor.get(i, k) * z[k]).sum();
        }
    }
    SampleBatch::new(seed, reps, factor.points.clone(), values)
}

/// `Cov(B(x) - B(y), B(p1) - B(p2)) = ½(d(x,p2) + d(y,p1) - d(x,p1) - d(y,p2))`.
pub fn increment_covariance(
    kind: MetricKind,
    x: &Point,
    y: &Point,
    p1: &Point,
    p2: &Point,
    tol: Tolerance,
) -> Result<f64> {
    let d = |a: &Point, b: &Point| distance(kind, a, b, tol);
    Ok(0.5 * ((d(x, p2)? + d(y, p1)?) - (d(x, p1)? + d(y, p2)?)))
}

/// `a ∈ F_B(P₁|P₂)`: the increment `B(a) - B(P₂)` is uncorrelated with `B(P₁) - B(P₂)`.
pub fn f_b_member(kind: MetricKind, p1: &Point, p2: &Point, a: &Point, tol: Tolerance) -> Result<bool> {
    let c = increment_covariance(kind, a, p2, p1, p2, tol)?;
    Ok(c.abs() <= 0.5 * tol.band(distance(kind, a, p1, tol)?))
}
