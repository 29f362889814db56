//! The radial (hedgehog) metric, the river metric, their parametric
//! deformations, and the Euclidean reference metric.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{collinear_through_origin, euclidean, same_dim, same_vertical, Point, Tolerance};

/// Continuous `f: ℝ₊ → ℝ₊` applied to branch lengths of a parametric metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `f(u) = u^p`, `p > 0`. Always satisfies `f(1) = 1`.
    Power(f64),
    /// `f(u) = c·u`, `c > 0`. Satisfies `f(1) = 1` only for `c = 1`.
    Linear(f64),
}

impl Family {
    pub fn validate(self) -> Result<Self> {
        let v = match self {
            Family::Power(p) | Family::Linear(p) => p,
        };
        if v.is_finite() && v > 0.0 {
            Ok(self)
        } else {
            Err(Error::InvalidMetric(format!("family parameter must be positive and finite, got {v}")))
        }
    }

    #[inline]
    pub fn apply(self, u: f64) -> f64 {
        match self {
            Family::Power(1.0) => u,
            Family::Power(p) => u.powf(p),
            Family::Linear(c) => c * u,
        }
    }

    pub fn is_normalized(self) -> bool {
        match self {
            Family::Power(_) => true,
            Family::Linear(c) => c == 1.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Power(p) => write!(f, "power:{p}"),
            Family::Linear(c) => write!(f, "linear:{c}"),
        }
    }
}

/// Which tree a metric is built on, when it is built on one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    Radial,
    River,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    Radial,
    River,
    Euclidean,
    /// `f(|a-b|)` on a common line through the origin, `f(|a|) + f(|b|)` otherwise.
    ParametricRadial(Family),
    /// `g₁` on vertical legs, `g₂` on the leg along the horizontal axis.
    ParametricRiver {
        vertical: Family,
        axis: Family,
    },
}

impl MetricKind {
    pub fn shape(&self) -> Option<TreeShape> {
        match self {
            MetricKind::Radial | MetricKind::ParametricRadial(_) => Some(TreeShape::Radial),
            MetricKind::River | MetricKind::ParametricRiver { .. } => Some(TreeShape::River),
            MetricKind::Euclidean => None,
        }
    }

    pub fn required_dim(&self) -> Option<usize> {
        (self.shape() == Some(TreeShape::River)).then_some(2)
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match self.required_dim() {
            Some(d) => p.ensure_dim(d),
            None => Ok(()),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Radial => write!(f, "radial"),
            MetricKind::River => write!(f, "river"),
            MetricKind::Euclidean => write!(f, "euclidean"),
            MetricKind::ParametricRadial(fam) => write!(f, "radial-{fam}"),
            MetricKind::ParametricRiver { vertical, axis } if vertical == axis => write!(f, "river-{vertical}"),
            MetricKind::ParametricRiver { vertical, axis } => write!(f, "river-{vertical}/{axis}"),
        }
    }
}

fn parse_family(s: &str) -> Result<Family> {
    let (name, value) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidMetric(format!("expected `power:P` or `linear:C`, got `{s}`")))?;
    let v: f64 = value.trim().parse().map_err(|_| Error::InvalidMetric(format!("bad family parameter `{value}`")))?;
    match name.trim() {
        "power" => Family::Power(v).validate(),
        "linear" => Family::Linear(v).validate(),
        other => Err(Error::InvalidMetric(format!("unknown family `{other}`"))),
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    /// Accepts `radial`, `river`, `euclidean`, `radial-power:P`, `radial-linear:C`,
    /// `river-power:P`, `river-linear:C` and `river-<vertical>/<axis>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "radial" => return Ok(MetricKind::Radial),
            "river" => return Ok(MetricKind::River),
            "euclidean" => return Ok(MetricKind::Euclidean),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("radial-") {
            return Ok(MetricKind::ParametricRadial(parse_family(rest)?));
        }
        if let Some(rest) = s.strip_prefix("river-") {
            let (vertical, axis) = match rest.split_once('/') {
                Some((v, a)) => (parse_family(v)?, parse_family(a)?),
                None => {
                    let f = parse_family(rest)?;
                    (f, f)
                }
            };
            return Ok(MetricKind::ParametricRiver { vertical, axis });
        }
        Err(Error::InvalidMetric(format!("unknown metric `{s}`")))
    }
}

/// Radial metric: `|a-b|` on a common line through the origin, `|a|+|b|` otherwise.
pub fn radial_distance(a: &Point, b: &Point, tol: Tolerance) -> Result<f64> {
    Ok(if collinear_through_origin(a, b, tol)? { euclidean(a.coords(), b.coords()) } else { a.norm() + b.norm() })
}

/// River metric on ℝ²: vertical travel on a shared vertical, otherwise down to
/// the horizontal axis, along it, and up the other vertical.
pub fn river_distance(a: &Point, b: &Point, tol: Tolerance) -> Result<f64> {
    a.ensure_dim(2)?;
    b.ensure_dim(2)?;
    Ok(if same_vertical(a, b, tol) {
        (a.y() - b.y()).abs()
    } else {
        (a.y().abs() + b.y().abs()) + (a.x() - b.x()).abs()
    })
}

pub fn distance(kind: MetricKind, a: &Point, b: &Point, tol: Tolerance) -> Result<f64> {
    match kind {
        MetricKind::Radial => radial_distance(a, b, tol),
        MetricKind::River => river_distance(a, b, tol),
        MetricKind::Euclidean => {
            same_dim(a, b)?;
            Ok(euclidean(a.coords(), b.coords()))
        }
        MetricKind::ParametricRadial(f) => Ok(if collinear_through_origin(a, b, tol)? {
            f.apply(euclidean(a.coords(), b.coords()))
        } else {
            f.apply(a.norm()) + f.apply(b.norm())
        }),
        MetricKind::ParametricRiver { vertical, axis } => {
            a.ensure_dim(2)?;
            b.ensure_dim(2)?;
            Ok(if same_vertical(a, b, tol) {
                vertical.apply((a.y() - b.y()).abs())
            } else {
                (vertical.apply(a.y().abs()) + vertical.apply(b.y().abs())) + axis.apply((a.x() - b.x()).abs())
            })
        }
    }
}

/// Membership of `x` in the metric segment `[a, b]`.
pub fn segment_contains(kind: MetricKind, a: &Point, b: &Point, x: &Point, tol: Tolerance) -> Result<bool> {
    Ok(segment_excess(kind, a, b, x, tol)?.abs() <= tol.band(distance(kind, a, b, tol)?))
}

/// `d(a,x) + d(x,b) - d(a,b)`.
pub(crate) fn segment_excess(kind: MetricKind, a: &Point, b: &Point, x: &Point, tol: Tolerance) -> Result<f64> {
    Ok(distance(kind, a, x, tol)? + distance(kind, x, b, tol)? - distance(kind, a, b, tol)?)
}

/// Gromov product `(y|z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2`.
pub fn gromov_product(kind: MetricKind, x: &Point, y: &Point, z: &Point, tol: Tolerance) -> Result<f64> {
    Ok(0.5 * (distance(kind, x, y, tol)? + distance(kind, x, z, tol)? - distance(kind, y, z, tol)?))
}

/// Largest deviation of `d(X, o)` from the Gromov product at `X`, over `X ∈ {a, b, c}`.
pub fn median_deviation(kind: MetricKind, pts: [&Point; 3], o: &Point, tol: Tolerance) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..3 {
        let (x, y, z) = (pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]);
        let target = gromov_product(kind, x, y, z, tol)?;
        worst = worst.max((distance(kind, x, o, tol)? - target).abs());
    }
    Ok(worst)
}

/// The tripoint `O` with `[a,b] ∩ [b,c] ∩ [a,c] = {O}`.
///
/// The candidate comes from the closed form of the underlying tree (radial or
/// river) and is re-verified against all three Gromov identities under `kind`,
/// so a distance function that is not a tree metric yields [`Error::Median`].
pub fn gromov_median(kind: MetricKind, a: &Point, b: &Point, c: &Point, tol: Tolerance) -> Result<Point> {
    same_dim(a, b)?;
    same_dim(a, c)?;
    kind.check_point(a)?;
    let candidate = match kind.shape() {
        Some(TreeShape::Radial) => radial_median(a, b, c, tol)?,
        Some(TreeShape::River) => river_median(a, b, c, tol),
        None => {
            return Err(Error::Unsupported { operation: "gromov_median", metric: kind.to_string() });
        }
    };
    let deviation = median_deviation(kind, [a, b, c], &candidate, tol)?;
    let scale = distance(kind, a, b, tol)? + distance(kind, b, c, tol)? + distance(kind, a, c, tol)?;
    if deviation <= tol.band(scale) {
        Ok(candidate)
    } else {
        Err(Error::Median { deviation })
    }
}

fn radial_median(a: &Point, b: &Point, c: &Point, tol: Tolerance) -> Result<Point> {
    // Products relative to the origin: the shared radius on a common directed
    // ray, zero across rays. The median is the shorter point of the pair that
    // overlaps most, or the origin when no pair overlaps.
    let pts = [a, b, c];
    let mut best: Option<(f64, &Point)> = None;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if !crate::geometry::same_directed_ray(pts[i], pts[j], tol)? {
            continue;
        }
        let (ni, nj) = (pts[i].norm(), pts[j].norm());
        let (overlap, shorter) = if ni <= nj { (ni, pts[i]) } else { (nj, pts[j]) };
        if best.is_none_or(|(o, _)| overlap > o) {
            best = Some((overlap, shorter));
        }
    }
    Ok(match best {
        Some((overlap, p)) if overlap > tol.eps_abs => p.clone(),
        _ => Point::origin(a.dim()),
    })
}

fn river_median(a: &Point, b: &Point, c: &Point, tol: Tolerance) -> Point {
    let on_axis = |p: &Point| p.y().abs() <= tol.eps_abs;
    let ab = same_vertical(a, b, tol);
    let bc = same_vertical(b, c, tol);
    let ac = same_vertical(a, c, tol);

    if ab && bc {
        let mut v = [a, b, c];
        v.sort_by(|p, q| p.y().total_cmp(&q.y()));
        return v[1].clone();
    }
    let shared = if ab {
        Some((a, b))
    } else if bc {
        Some((b, c))
    } else if ac {
        Some((a, c))
    } else {
        None
    };
    match shared {
        Some((p, q)) => {
            if !on_axis(p) && !on_axis(q) && p.y().signum() == q.y().signum() {
                if p.y().abs() <= q.y().abs() {
                    p.clone()
                } else {
                    q.clone()
                }
            } else {
                Point::xy(p.x(), 0.0)
            }
        }
        None => {
            let mut xs = [a.x(), b.x(), c.x()];
            xs.sort_by(f64::total_cmp);
            Point::xy(xs[1], 0.0)
        }
    }
}

/// Symmetric, nonnegative matrix with zero diagonal, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates squareness, finiteness, nonnegativity, symmetry within `eps_abs`
    /// and a zero diagonal within `eps_abs`. The stored matrix is exactly
    /// symmetric (upper triangle mirrored) with an exact zero diagonal.
    pub fn from_rows(rows: Vec<Vec<f64>>, tol: Tolerance) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        let mut entries = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < -tol.eps_abs {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) = {v} is not a finite nonnegative value"
                    )));
                }
            }
            if row[i].abs() > tol.eps_abs {
                return Err(Error::InvalidMatrix(format!("diagonal entry {i} = {} is not zero", row[i])));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (rows[i][j] - rows[j][i]).abs() > tol.eps_abs {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric entries ({i},{j}) = {} and ({j},{i}) = {}",
                        rows[i][j], rows[j][i]
                    )));
                }
                let v = rows[i][j].max(0.0);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self { n, entries })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Overwrites `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::Index { index, len: self.n })
        }
    }
}

pub fn distance_matrix(kind: MetricKind, points: &[Point], tol: Tolerance) -> Result<DistanceMatrix> {
    let first = points.first().ok_or_else(|| Error::InvalidMatrix("no points".into()))?;
    for p in points {
        same_dim(first, p)?;
        kind.check_point(p)?;
    }
    let n = points.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance(kind, &points[i], &points[j], tol)?;
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    #[test]
    fn radial_examples() {
        assert_eq!(radial_distance(&p(1.0, 0.0), &p(3.0, 0.0), t()).unwrap(), 2.0);
        assert_eq!(radial_distance(&p(1.0, 0.0), &p(0.0, 1.0), t()).unwrap(), 2.0);
        // collinear through the origin with opposite directions: both branches give 3
        let d = radial_distance(&p(1.0, 0.0), &p(-2.0, 0.0), t()).unwrap();
        assert_eq!(d, 3.0);
        assert_eq!(d, p(1.0, 0.0).norm() + p(-2.0, 0.0).norm());
    }

    #[test]
    fn river_examples() {
        assert_eq!(river_distance(&p(1.0, 2.0), &p(1.0, 5.0), t()).unwrap(), 3.0);
        assert_eq!(river_distance(&p(1.0, 2.0), &p(3.0, -1.0), t()).unwrap(), 5.0);
        for (x, y) in [(2.0, -3.0), (-1.5, 0.25), (0.0, 4.0)] {
            assert_eq!(river_distance(&p(0.0, 0.0), &p(x, y), t()).unwrap(), f64::abs(x) + f64::abs(y));
        }
    }

    #[test]
    fn river_rejects_other_dimensions() {
        let a = Point::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(river_distance(&a, &a, t()), Err(Error::Dimension { expected: 2, .. })));
    }

    #[test]
    fn dispatch_examples() {
        assert_eq!(distance(MetricKind::Radial, &p(1.0, 0.0), &p(3.0, 0.0), t()).unwrap(), 2.0);
        let pow = MetricKind::ParametricRadial(Family::Power(1.5));
        assert_eq!(distance(pow, &p(1.0, 0.0), &p(0.0, 1.0), t()).unwrap(), 2.0);
        assert_eq!(distance(pow, &p(4.0, 0.0), &p(0.0, 0.0), t()).unwrap(), 8.0);
    }

    #[test]
    fn segment_examples() {
        let k = MetricKind::Radial;
        assert!(segment_contains(k, &p(0.0, 5.0), &p(5.0, 0.0), &p(0.0, 0.0), t()).unwrap());
        assert!(segment_contains(k, &p(1.0, 0.0), &p(3.0, 0.0), &p(2.0, 0.0), t()).unwrap());
        assert!(segment_contains(MetricKind::River, &p(1.0, 2.0), &p(3.0, 1.0), &p(2.0, 0.0), t()).unwrap());
        assert!(!segment_contains(k, &p(1.0, 0.0), &p(3.0, 0.0), &p(0.0, 1.0), t()).unwrap());
    }

    #[test]
    fn median_examples() {
        let k = MetricKind::Radial;
        assert_eq!(gromov_median(k, &p(1.0, 0.0), &p(2.0, 0.0), &p(0.0, 1.0), t()).unwrap(), p(1.0, 0.0));
        assert_eq!(gromov_median(k, &p(0.0, 1.0), &p(0.0, 3.0), &p(1.0, 0.0), t()).unwrap(), p(0.0, 1.0));
        assert_eq!(gromov_median(k, &p(1.0, 0.0), &p(0.0, 1.0), &p(-1.0, -1.0), t()).unwrap(), p(0.0, 0.0));
        let r = MetricKind::River;
        assert_eq!(gromov_median(r, &p(1.0, 2.0), &p(1.0, 5.0), &p(4.0, 1.0), t()).unwrap(), p(1.0, 2.0));
        assert_eq!(gromov_median(r, &p(1.0, 2.0), &p(1.0, -5.0), &p(4.0, 1.0), t()).unwrap(), p(1.0, 0.0));
        assert_eq!(gromov_median(r, &p(-3.0, 2.0), &p(1.0, -5.0), &p(4.0, 1.0), t()).unwrap(), p(1.0, 0.0));
        assert_eq!(gromov_median(r, &p(2.0, 2.0), &p(2.0, -5.0), &p(2.0, 1.0), t()).unwrap(), p(2.0, 1.0));
    }

    #[test]
    fn median_rejects_euclidean_and_non_tree_parametric() {
        let e = gromov_median(MetricKind::Euclidean, &p(0.0, 0.0), &p(1.0, 0.0), &p(0.0, 1.0), t());
        assert!(matches!(e, Err(Error::Unsupported { .. })));
        // three points on one ray under u^2: the middle point no longer satisfies the identities
        let k = MetricKind::ParametricRadial(Family::Power(2.0));
        let e = gromov_median(k, &p(1.0, 0.0), &p(2.0, 0.0), &p(3.0, 0.0), t());
        assert!(matches!(e, Err(Error::Median { .. })));
    }

    #[test]
    fn matrix_examples() {
        let dm = distance_matrix(MetricKind::Radial, &[p(1.0, 0.0), p(2.0, 0.0)], t()).unwrap();
        assert_eq!(dm.rows().collect::<Vec<_>>(), vec![&[0.0, 1.0][..], &[1.0, 0.0][..]]);
        let dm = distance_matrix(MetricKind::Radial, &[p(1.0, 0.0), p(0.0, 1.0)], t()).unwrap();
        assert_eq!(dm.get(0, 1), 2.0);
        let dm = distance_matrix(MetricKind::River, &[p(0.0, 0.0), p(1.0, 1.0)], t()).unwrap();
        assert_eq!(dm.get(1, 0), 2.0);
        assert!(distance_matrix(MetricKind::Radial, &[], t()).is_err());
    }

    #[test]
    fn matrix_loader_validation() {
        let ok = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0 + 1e-12, 0.0]], t()).unwrap();
        assert_eq!(ok.get(0, 1), ok.get(1, 0));
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.5, 0.0]], t()).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![0.1, 1.0], vec![1.0, 0.0]], t()).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 1.0]], t()).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]], t()).is_err());
    }

    #[test]
    fn metric_kind_round_trips_through_strings() {
        for s in ["radial", "river", "euclidean", "radial-power:1.5", "radial-linear:2", "river-power:0.5"] {
            let k: MetricKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        let k: MetricKind = "river-power:2/linear:1".parse().unwrap();
        assert_eq!(k, MetricKind::ParametricRiver { vertical: Family::Power(2.0), axis: Family::Linear(1.0) });
        assert!("radial-power:-1".parse::<MetricKind>().is_err());
        assert!("hyperbolic".parse::<MetricKind>().is_err());
    }
}
