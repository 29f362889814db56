//! The sets `C_d(P₁,P₂) = {X : d(X,P₁) = d(X,P₂) + d(P₁,P₂)}`.
//!
//! Membership is available two ways: straight from the defining equation
//! ([`cd_member_def`]) and from the closed-form regions of the radial and river
//! trees ([`cd_region_radial`], [`cd_region_river`]). The equivalence scan
//! compares the two, which is also how a parametric metric is identified.

use crate::error::{Error, Result};
use crate::geometry::{euclidean, orthogonal_residual, same_dim, same_vertical, Point, Tolerance};
use crate::metrics::{distance, Family, MetricKind, TreeShape};

/// Multiple of the branch tolerance inside which probes are classified as
/// [`ProbeClass::Boundary`].
pub const BOUNDARY_BAND_FACTOR: f64 = 10.0;

/// `C_{d₁}(P₁,P₂)` for the radial metric.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialRegion {
    /// Closed sub-ray `{t·u : t ≥ |start|}` with `u` the direction of `start`.
    RayFrom {
        start: Point,
    },
    /// Everything except the open sub-ray `{t·u : t > cut_radius}`, `u` the
    /// direction of `toward`.
    ComplementBeyond {
        toward: Point,
        cut_radius: f64,
    },
    WholeSpace,
}

/// `C_{d₂}(P₁,P₂)` for the river metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiverRegion {
    /// ℝ² minus `{x}×{y : sign·y > cut}`.
    ComplementAbove {
        x: f64,
        sign: f64,
        cut: f64,
    },
    /// `{x}×{y : sign(y) = sign(y₀), |y| ≥ |y₀|}`.
    VerticalRayFrom {
        x: f64,
        y: f64,
    },
    /// `{(a,b) : direction·(a - edge) ≥ 0}`, closed at the edge.
    HalfPlane {
        edge: f64,
        direction: f64,
    },
    WholeSpace,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CdRegion {
    Radial(RadialRegion),
    River(RiverRegion),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeClass {
    Inside,
    Outside,
    /// Within the boundary band, where float rounding can flip either test.
    Boundary,
}

/// Membership from the defining equation:
/// `|d(x,p1) - d(x,p2) - d(p1,p2)| ≤ eps_abs + eps_rel·d(x,p1)`.
pub fn cd_member_def(kind: MetricKind, p1: &Point, p2: &Point, x: &Point, tol: Tolerance) -> Result<bool> {
    let dx1 = distance(kind, x, p1, tol)?;
    let gap = dx1 - distance(kind, x, p2, tol)? - distance(kind, p1, p2, tol)?;
    Ok(gap.abs() <= tol.band(dx1))
}

pub fn cd_region_radial(p1: &Point, p2: &Point, tol: Tolerance) -> Result<RadialRegion> {
    same_dim(p1, p2)?;
    let (n1, n2) = (p1.norm(), p2.norm());
    if euclidean(p1.coords(), p2.coords()) <= tol.band(n1 + n2) {
        return Ok(RadialRegion::WholeSpace);
    }
    // P₂ ∈ [0, P₁) on the directed ray of P₁
    let on_segment = n2 <= tol.eps_abs || (crate::geometry::same_directed_ray(p1, p2, tol)? && n2 < n1);
    Ok(if on_segment {
        RadialRegion::ComplementBeyond { toward: p1.clone(), cut_radius: n2 }
    } else {
        RadialRegion::RayFrom { start: p2.clone() }
    })
}

pub fn cd_region_river(p1: &Point, p2: &Point, tol: Tolerance) -> Result<RiverRegion> {
    p1.ensure_dim(2)?;
    p2.ensure_dim(2)?;
    if euclidean(p1.coords(), p2.coords()) <= tol.band(p1.norm() + p2.norm()) {
        return Ok(RiverRegion::WholeSpace);
    }
    let axis = |y: f64| y.abs() <= tol.eps_abs;
    let vertical = same_vertical(p1, p2, tol);
    // P₂ ∈ [P₁*, P₁): same vertical, second coordinate in [0, P₁⁽²⁾) directed
    let on_segment = vertical
        && !axis(p1.y())
        && (axis(p2.y()) || (p2.y().signum() == p1.y().signum() && p2.y().abs() < p1.y().abs()));
    Ok(if on_segment {
        RiverRegion::ComplementAbove { x: p1.x(), sign: p1.y().signum(), cut: p2.y().abs() }
    } else if !axis(p2.y()) {
        RiverRegion::VerticalRayFrom { x: p2.x(), y: p2.y() }
    } else {
        // different verticals, P₂ on the axis
        RiverRegion::HalfPlane { edge: p2.x(), direction: (p2.x() - p1.x()).signum() }
    })
}

/// Closed-form region for the tree underlying `kind`.
pub fn cd_region(kind: MetricKind, p1: &Point, p2: &Point, tol: Tolerance) -> Result<CdRegion> {
    match kind.shape() {
        Some(TreeShape::Radial) => Ok(CdRegion::Radial(cd_region_radial(p1, p2, tol)?)),
        Some(TreeShape::River) => Ok(CdRegion::River(cd_region_river(p1, p2, tol)?)),
        None => Err(Error::Unsupported { operation: "cd_region", metric: kind.to_string() }),
    }
}

impl RadialRegion {
    pub fn contains(&self, x: &Point, tol: Tolerance) -> Result<bool> {
        match self {
            RadialRegion::WholeSpace => Ok(true),
            RadialRegion::RayFrom { start } => {
                let (nx, ns) = (x.norm(), start.norm());
                Ok(crate::geometry::same_directed_ray(x, start, tol)? && nx >= ns - tol.band(nx + ns))
            }
            RadialRegion::ComplementBeyond { toward, cut_radius } => {
                let nx = x.norm();
                let beyond = nx > tol.eps_abs
                    && crate::geometry::same_directed_ray(x, toward, tol)?
                    && nx > cut_radius + tol.band(nx + cut_radius);
                Ok(!beyond)
            }
        }
    }

    pub fn classify(&self, x: &Point, tol: Tolerance) -> Result<ProbeClass> {
        use ProbeClass::*;
        let (reference, threshold, inside_beyond) = match self {
            RadialRegion::WholeSpace => return Ok(Inside),
            RadialRegion::RayFrom { start } => (start, start.norm(), true),
            RadialRegion::ComplementBeyond { toward, cut_radius } => (toward, *cut_radius, false),
        };
        same_dim(x, reference)?;
        let (inside, outside) = if inside_beyond { (Inside, Outside) } else { (Outside, Inside) };
        let nx = x.norm();
        let line_band = tol.band(nx + reference.norm());
        let radius_band = BOUNDARY_BAND_FACTOR * tol.band(nx + threshold);
        let on_ray = match orthogonal_residual(x.coords(), reference.coords(), tol) {
            // x at the origin
            None => true,
            Some(r) if r <= line_band => crate::geometry::dot(x.coords(), reference.coords()) >= 0.0,
            Some(r) if r <= BOUNDARY_BAND_FACTOR * line_band => return Ok(Boundary),
            Some(_) => false,
        };
        if !on_ray {
            return Ok(outside);
        }
        let gap = nx - threshold;
        Ok(if gap.abs() <= radius_band {
            Boundary
        } else if gap > 0.0 {
            inside
        } else {
            outside
        })
    }
}

impl RiverRegion {
    pub fn contains(&self, p: &Point, tol: Tolerance) -> Result<bool> {
        p.ensure_dim(2)?;
        let (a, b) = (p.x(), p.y());
        let on = |x: f64| (a - x).abs() <= tol.band(a.abs() + x.abs());
        Ok(match *self {
            RiverRegion::WholeSpace => true,
            RiverRegion::ComplementAbove { x, sign, cut } => !(on(x) && sign * b > cut + tol.band(cut + b.abs())),
            RiverRegion::VerticalRayFrom { x, y } => {
                let s = y.signum();
                on(x) && s * b >= y.abs() - tol.band(y.abs() + b.abs())
            }
            RiverRegion::HalfPlane { edge, direction } => direction * (a - edge) >= -tol.band(a.abs() + edge.abs()),
        })
    }

    pub fn classify(&self, p: &Point, tol: Tolerance) -> Result<ProbeClass> {
        use ProbeClass::*;
        p.ensure_dim(2)?;
        let (a, b) = (p.x(), p.y());
        let vertical = |x: f64| {
            let band = tol.band(a.abs() + x.abs());
            let dx = (a - x).abs();
            if dx <= band {
                Some(true)
            } else if dx <= BOUNDARY_BAND_FACTOR * band {
                None
            } else {
                Some(false)
            }
        };
        // compares t against threshold c on a vertical
        let along = |t: f64, c: f64, above: ProbeClass, below: ProbeClass| {
            let gap = t - c;
            if gap.abs() <= BOUNDARY_BAND_FACTOR * tol.band(t.abs() + c) {
                Boundary
            } else if gap > 0.0 {
                above
            } else {
                below
            }
        };
        Ok(match *self {
            RiverRegion::WholeSpace => Inside,
            RiverRegion::ComplementAbove { x, sign, cut } => match vertical(x) {
                None => Boundary,
                Some(false) => Inside,
                Some(true) => along(sign * b, cut, Outside, Inside),
            },
            RiverRegion::VerticalRayFrom { x, y } => match vertical(x) {
                None => Boundary,
                Some(false) => Outside,
                Some(true) => along(y.signum() * b, y.abs(), Inside, Outside),
            },
            RiverRegion::HalfPlane { edge, direction } => match vertical(edge) {
                None | Some(true) => Boundary,
                Some(false) if direction * (a - edge) > 0.0 => Inside,
                Some(false) => Outside,
            },
        })
    }
}

impl CdRegion {
    pub fn contains(&self, x: &Point, tol: Tolerance) -> Result<bool> {
        match self {
            CdRegion::Radial(r) => r.contains(x, tol),
            CdRegion::River(r) => r.contains(x, tol),
        }
    }

    pub fn classify(&self, x: &Point, tol: Tolerance) -> Result<ProbeClass> {
        match self {
            CdRegion::Radial(r) => r.classify(x, tol),
            CdRegion::River(r) => r.classify(x, tol),
        }
    }
}

pub fn region_contains(region: &CdRegion, x: &Point, tol: Tolerance) -> Result<bool> {
    region.contains(x, tol)
}

/// Rectangular probe grid, `nx × ny` nodes including the corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::Config(format!("bad grid extents [{xmin},{xmax}]x[{ymin},{ymax}]")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::Config(format!("grid resolution must be at least 2 per axis, got {nx}x{ny}")));
        }
        Ok(Self { xmin, xmax, ymin, ymax, nx, ny })
    }

    /// Row-major by `y`, then `x`.
    pub fn nodes(&self) -> Vec<Point> {
        let lin = |lo: f64, hi: f64, k: usize, n: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.push(Point::xy(lin(self.xmin, self.xmax, i, self.nx), lin(self.ymin, self.ymax, j, self.ny)));
            }
        }
        out
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `xmin,xmax,ymin,ymax,res[,resy]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if !(5..=6).contains(&parts.len()) {
            return Err(Error::Config(format!("grid `{s}`: expected xmin,xmax,ymin,ymax,res[,resy]")));
        }
        let f = |k: usize| parts[k].parse::<f64>().map_err(|e| Error::Config(format!("grid `{s}`: {e}")));
        let u = |k: usize| parts[k].parse::<usize>().map_err(|e| Error::Config(format!("grid `{s}`: {e}")));
        let nx = u(4)?;
        let ny = if parts.len() == 6 { u(5)? } else { nx };
        Self::new(f(0)?, f(1)?, f(2)?, f(3)?, nx, ny)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMark {
    In,
    Out,
    Skipped,
}

impl std::fmt::Display for GridMark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GridMark::In => "1",
            GridMark::Out => "0",
            GridMark::Skipped => "S",
        })
    }
}

/// Membership mask of `C_d(p1,p2)` over a grid. Nodes in the boundary band of
/// the closed-form region are [`GridMark::Skipped`] in both modes.
pub fn cd_grid(
    kind: MetricKind,
    p1: &Point,
    p2: &Point,
    grid: &GridSpec,
    by_definition: bool,
    tol: Tolerance,
) -> Result<Vec<(Point, GridMark)>> {
    let region = cd_region(kind, p1, p2, tol)?;
    grid.nodes()
        .into_iter()
        .map(|x| {
            let mark = if region.classify(&x, tol)? == ProbeClass::Boundary {
                GridMark::Skipped
            } else {
                let member =
                    if by_definition { cd_member_def(kind, p1, p2, &x, tol)? } else { region.contains(&x, tol)? };
                if member {
                    GridMark::In
                } else {
                    GridMark::Out
                }
            };
            Ok((x, mark))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchRecord {
    pub pair_index: usize,
    pub probe_index: usize,
    pub p1: Point,
    pub p2: Point,
    pub x: Point,
    pub def_member: bool,
    pub region_member: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EquivalenceScan {
    /// Ordered by (pair index, probe index).
    pub mismatches: Vec<MismatchRecord>,
    pub checked: usize,
    pub skipped: usize,
}

/// Compares definition-based membership under `kind` with the closed-form
/// region of the underlying radial or river tree. Probes inside a region's
/// boundary band are counted as skipped.
pub fn cd_equivalence_scan(
    kind: MetricKind,
    pairs: &[(Point, Point)],
    probes: &[Point],
    tol: Tolerance,
) -> Result<EquivalenceScan> {
    let mut scan = EquivalenceScan::default();
    for (pair_index, (p1, p2)) in pairs.iter().enumerate() {
        let region = cd_region(kind, p1, p2, tol)?;
        for (probe_index, x) in probes.iter().enumerate() {
            if region.classify(x, tol)? == ProbeClass::Boundary {
                scan.skipped += 1;
                continue;
            }
            scan.checked += 1;
            let def_member = cd_member_def(kind, p1, p2, x, tol)?;
            let region_member = region.contains(x, tol)?;
            if def_member != region_member {
                scan.mismatches.push(MismatchRecord {
                    pair_index,
                    probe_index,
                    p1: p1.clone(),
                    p2: p2.clone(),
                    x: x.clone(),
                    def_member,
                    region_member,
                });
            }
        }
    }
    Ok(scan)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyFit {
    pub slope: f64,
    pub max_residual: f64,
}

/// Least-squares line through the origin, `value ≈ c·u`.
///
/// Linearity of a continuous additive branch function is what pins a
/// parametric metric down; the caller decides what residual counts as linear.
pub fn cauchy_fit(samples: &[(f64, f64)]) -> Result<CauchyFit> {
    if samples.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 samples, got {}", samples.len())));
    }
    if let Some((u, v)) = samples.iter().find(|(u, v)| !(u.is_finite() && *u > 0.0 && v.is_finite())) {
        return Err(Error::Fit(format!("invalid sample ({u}, {v}); u must be positive and finite")));
    }
    let u0 = samples[0].0;
    if samples.iter().all(|(u, _)| *u == u0) {
        return Err(Error::Fit("all sample abscissae are equal".into()));
    }
    let suv: f64 = samples.iter().map(|(u, v)| u * v).sum();
    let suu: f64 = samples.iter().map(|(u, _)| u * u).sum();
    let slope = suv / suu;
    let max_residual = samples.iter().map(|(u, v)| (v - slope * u).abs()).fold(0.0, f64::max);
    Ok(CauchyFit { slope, max_residual })
}

/// Outcome of testing whether a metric is the radial or river metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Identification {
    pub kind: MetricKind,
    pub scan: EquivalenceScan,
    /// Fit of the vertical (river) or only (radial) branch function.
    pub branch_fit: CauchyFit,
    /// Fit of the axis branch function (river only).
    pub axis_fit: Option<CauchyFit>,
    pub identified: bool,
}

const LINEAR_RESIDUAL: f64 = 1e-9;

fn fit_is_identity(fit: &CauchyFit) -> bool {
    fit.max_residual <= LINEAR_RESIDUAL && (fit.slope - 1.0).abs() <= LINEAR_RESIDUAL
}

fn branch_samples(kind: MetricKind, leg: impl Fn(f64) -> (Point, Point), tol: Tolerance) -> Result<Vec<(f64, f64)>> {
    [0.5, 1.0, 1.5, 2.0, 3.0, 4.0]
        .iter()
        .map(|&u| {
            let (a, b) = leg(u);
            Ok((u, distance(kind, &a, &b, tol)?))
        })
        .collect()
}

/// Pairs covering every closed-form case, including same-ray (same-vertical)
/// configurations that expose non-additive branch functions.
pub fn identification_pairs(shape: TreeShape) -> Vec<(Point, Point)> {
    let mut pairs = Vec::new();
    match shape {
        TreeShape::Radial => {
            let dirs = [(1.0, 0.0), (0.0, 1.0), (-0.6, 0.8), (-1.0, 0.0)];
            let radii = [0.0, 0.5, 1.0, 2.0, 3.0];
            for &(ux, uy) in &dirs {
                for &r1 in &radii {
                    for &r2 in &radii {
                        pairs.push((Point::xy(r1 * ux, r1 * uy), Point::xy(r2 * ux, r2 * uy)));
                    }
                }
            }
            for w in dirs.windows(2) {
                let (a, b) = (w[0], w[1]);
                pairs.push((Point::xy(2.0 * a.0, 2.0 * a.1), Point::xy(b.0, b.1)));
            }
        }
        TreeShape::River => {
            let ys = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
            for &x in &[-1.0, 0.0, 2.0] {
                for &y1 in &ys {
                    for &y2 in &ys {
                        pairs.push((Point::xy(x, y1), Point::xy(x, y2)));
                    }
                }
            }
            for &(a, b) in &[((-2.0, 1.0), (1.0, 0.0)), ((1.0, 2.0), (-1.0, 0.0)), ((0.0, 1.0), (2.0, -1.0))] {
                pairs.push((Point::xy(a.0, a.1), Point::xy(b.0, b.1)));
            }
        }
    }
    pairs
}

/// Probes on a 0.25-spaced lattice over `[-5, 5]²`; it contains every
/// identification pair's ray or vertical.
pub fn identification_probes() -> Vec<Point> {
    let steps = 41;
    let mut probes = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            probes.push(Point::xy(-5.0 + 0.25 * i as f64, -5.0 + 0.25 * j as f64));
        }
    }
    probes
}

/// Decides whether `kind` coincides with the radial (or river) metric: the
/// C-sets must match the closed forms, and the branch functions recovered from
/// the metric must be the identity (linear with `f(1) = 1`).
pub fn identify(kind: MetricKind, tol: Tolerance) -> Result<Identification> {
    let shape = kind.shape().ok_or_else(|| Error::Unsupported { operation: "identify", metric: kind.to_string() })?;
    let scan = cd_equivalence_scan(kind, &identification_pairs(shape), &identification_probes(), tol)?;
    let o = Point::xy(0.0, 0.0);
    let (branch_fit, axis_fit) = match shape {
        TreeShape::Radial => {
            let fit = cauchy_fit(&branch_samples(kind, |u| (o.clone(), Point::xy(u, 0.0)), tol)?)?;
            (fit, None)
        }
        TreeShape::River => {
            let vertical = cauchy_fit(&branch_samples(kind, |u| (Point::xy(1.0, 0.0), Point::xy(1.0, u)), tol)?)?;
            let axis = cauchy_fit(&branch_samples(kind, |u| (o.clone(), Point::xy(u, 0.0)), tol)?)?;
            (vertical, Some(axis))
        }
    };
    let identified =
        scan.mismatches.is_empty() && fit_is_identity(&branch_fit) && axis_fit.as_ref().is_none_or(fit_is_identity);
    Ok(Identification { kind, scan, branch_fit, axis_fit, identified })
}

/// The parametric family swept by the `identify` command.
pub fn parametric_family(shape: TreeShape) -> Vec<MetricKind> {
    let fams = [
        Family::Power(0.5),
        Family::Power(1.0),
        Family::Power(1.5),
        Family::Power(2.0),
        Family::Linear(1.0),
        Family::Linear(2.0),
    ];
    fams.iter()
        .map(|&f| match shape {
            TreeShape::Radial => MetricKind::ParametricRadial(f),
            TreeShape::River => MetricKind::ParametricRiver { vertical: f, axis: f },
        })
        .collect()
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
    fn grid_spec_parsing() {
        let g: GridSpec = "-5,5,-2,2,11".parse().unwrap();
        assert_eq!((g.nx, g.ny), (11, 11));
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 121);
        assert_eq!(nodes[0], p(-5.0, -2.0));
        assert_eq!(nodes[120], p(5.0, 2.0));
        assert_eq!("0,1,0,1,3,4".parse::<GridSpec>().unwrap().ny, 4);
        for bad in ["0,1,0,1", "1,0,0,1,5", "0,1,0,1,1", "0,1,0,x,5"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_masks_agree_for_half_plane() {
        let g: GridSpec = "-5,5,-5,5,21".parse().unwrap();
        let (p1, p2) = (p(1.0, 2.0), p(3.0, 0.0));
        let closed = cd_grid(MetricKind::River, &p1, &p2, &g, false, t()).unwrap();
        let def = cd_grid(MetricKind::River, &p1, &p2, &g, true, t()).unwrap();
        assert_eq!(closed, def);
        let inside = closed.iter().filter(|(_, m)| *m == GridMark::In).count();
        // x ∈ {3.5, ..., 5} on 21 rows; the closed edge x = 3 is in the band
        assert_eq!(inside, 4 * 21);
    }

    #[test]
    fn definition_examples() {
        let k = MetricKind::Radial;
        // d(x,p1) = 5+2 = 7, d(x,p2) = 5+1 = 6, d(p1,p2) = 1
        assert!(cd_member_def(k, &p(2.0, 0.0), &p(1.0, 0.0), &p(0.0, 5.0), t()).unwrap());
        // d(x,p1) = 1, d(x,p2) + d(p1,p2) = 2 + 1
        assert!(!cd_member_def(k, &p(2.0, 0.0), &p(1.0, 0.0), &p(3.0, 0.0), t()).unwrap());
        for kind in [MetricKind::Radial, MetricKind::River, MetricKind::Euclidean] {
            assert!(cd_member_def(kind, &p(2.0, -1.0), &p(-1.0, 3.0), &p(-1.0, 3.0), t()).unwrap());
        }
    }

    #[test]
    fn radial_region_cases() {
        assert_eq!(
            cd_region_radial(&p(1.0, 0.0), &p(0.0, 1.0), t()).unwrap(),
            RadialRegion::RayFrom { start: p(0.0, 1.0) }
        );
        assert_eq!(
            cd_region_radial(&p(2.0, 0.0), &p(1.0, 0.0), t()).unwrap(),
            RadialRegion::ComplementBeyond { toward: p(2.0, 0.0), cut_radius: 1.0 }
        );
        assert_eq!(cd_region_radial(&p(3.0, 3.0), &p(3.0, 3.0), t()).unwrap(), RadialRegion::WholeSpace);
        // beyond P₁ on its ray, and at the origin
        assert!(matches!(cd_region_radial(&p(1.0, 0.0), &p(2.0, 0.0), t()).unwrap(), RadialRegion::RayFrom { .. }));
        assert!(matches!(
            cd_region_radial(&p(1.0, 1.0), &p(0.0, 0.0), t()).unwrap(),
            RadialRegion::ComplementBeyond { cut_radius, .. } if cut_radius == 0.0
        ));
        assert!(matches!(cd_region_radial(&p(0.0, 0.0), &p(0.0, 2.0), t()).unwrap(), RadialRegion::RayFrom { .. }));
    }

    #[test]
    fn river_region_cases() {
        assert_eq!(
            cd_region_river(&p(1.0, 2.0), &p(1.0, 1.0), t()).unwrap(),
            RiverRegion::ComplementAbove { x: 1.0, sign: 1.0, cut: 1.0 }
        );
        assert_eq!(
            cd_region_river(&p(1.0, 2.0), &p(3.0, 4.0), t()).unwrap(),
            RiverRegion::VerticalRayFrom { x: 3.0, y: 4.0 }
        );
        assert_eq!(
            cd_region_river(&p(1.0, 2.0), &p(3.0, 0.0), t()).unwrap(),
            RiverRegion::HalfPlane { edge: 3.0, direction: 1.0 }
        );
        assert_eq!(cd_region_river(&p(1.0, 2.0), &p(1.0, 2.0), t()).unwrap(), RiverRegion::WholeSpace);
        // projection of P₁ is on the segment; the opposite side of the axis is not
        assert!(matches!(
            cd_region_river(&p(1.0, 2.0), &p(1.0, 0.0), t()).unwrap(),
            RiverRegion::ComplementAbove { .. }
        ));
        assert!(matches!(
            cd_region_river(&p(1.0, 2.0), &p(1.0, -1.0), t()).unwrap(),
            RiverRegion::VerticalRayFrom { .. }
        ));
        assert!(cd_region_river(&Point::new(vec![1.0]).unwrap(), &p(1.0, 0.0), t()).is_err());
    }

    #[test]
    fn containment_examples() {
        let ray = CdRegion::Radial(RadialRegion::RayFrom { start: p(0.0, 1.0) });
        assert!(region_contains(&ray, &p(0.0, 2.0), t()).unwrap());
        assert!(region_contains(&ray, &p(0.0, 1.0), t()).unwrap());
        assert!(!region_contains(&ray, &p(0.0, 0.5), t()).unwrap());
        assert!(!region_contains(&ray, &p(0.0, -2.0), t()).unwrap());

        let comp = CdRegion::Radial(RadialRegion::ComplementBeyond { toward: p(1.0, 0.0), cut_radius: 1.0 });
        assert!(!region_contains(&comp, &p(3.0, 0.0), t()).unwrap());
        assert!(region_contains(&comp, &p(1.0, 0.0), t()).unwrap());
        assert!(region_contains(&comp, &p(-3.0, 0.0), t()).unwrap());

        let half = CdRegion::River(RiverRegion::HalfPlane { edge: 3.0, direction: 1.0 });
        assert!(region_contains(&half, &p(3.0, -7.0), t()).unwrap());
        assert!(region_contains(&half, &p(9.0, 2.0), t()).unwrap());
        assert!(!region_contains(&half, &p(2.5, 0.0), t()).unwrap());
    }

    #[test]
    fn classification_marks_boundaries() {
        let ray = RadialRegion::RayFrom { start: p(0.0, 1.0) };
        assert_eq!(ray.classify(&p(0.0, 1.0), t()).unwrap(), ProbeClass::Boundary);
        assert_eq!(ray.classify(&p(0.0, 2.0), t()).unwrap(), ProbeClass::Inside);
        assert_eq!(ray.classify(&p(5e-9, 2.0), t()).unwrap(), ProbeClass::Boundary);
        assert_eq!(ray.classify(&p(1e-3, 2.0), t()).unwrap(), ProbeClass::Outside);
        let half = RiverRegion::HalfPlane { edge: 3.0, direction: -1.0 };
        assert_eq!(half.classify(&p(3.0, 1.0), t()).unwrap(), ProbeClass::Boundary);
        assert_eq!(half.classify(&p(2.0, 1.0), t()).unwrap(), ProbeClass::Inside);
    }

    #[test]
    fn scan_examples() {
        let pairs = identification_pairs(TreeShape::Radial);
        let probes = identification_probes();
        let s = cd_equivalence_scan(MetricKind::Radial, &pairs, &probes, t()).unwrap();
        assert!(s.mismatches.is_empty(), "{:?}", s.mismatches.first());
        assert!(s.checked > 0);

        let p1 = MetricKind::ParametricRadial(Family::Power(1.0));
        assert!(cd_equivalence_scan(p1, &pairs, &probes, t()).unwrap().mismatches.is_empty());

        // |x - p2| = |p2 - p1| = 1 on one ray: 2^1.5 ≠ 1 + 1
        let k = MetricKind::ParametricRadial(Family::Power(1.5));
        let s = cd_equivalence_scan(k, &[(p(1.0, 0.0), p(2.0, 0.0))], &[p(3.0, 0.0)], t()).unwrap();
        assert_eq!(s.mismatches.len(), 1);
        let m = &s.mismatches[0];
        assert!(!m.def_member && m.region_member);
    }

    #[test]
    fn scan_rejects_euclidean() {
        let r = cd_equivalence_scan(MetricKind::Euclidean, &[(p(1.0, 0.0), p(2.0, 0.0))], &[p(3.0, 0.0)], t());
        assert!(matches!(r, Err(Error::Unsupported { .. })));
    }

    /// Least-squares slope by direct search over c, independent of the normal equations.
    fn brute_force_fit(samples: &[(f64, f64)]) -> (f64, f64) {
        let sse = |c: f64| samples.iter().map(|(u, v)| (v - c * u).powi(2)).sum::<f64>();
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if sse(m1) < sse(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let c = 0.5 * (lo + hi);
        let res = samples.iter().map(|(u, v)| (v - c * u).abs()).fold(0.0, f64::max);
        (c, res)
    }

    #[test]
    fn cauchy_fit_examples() {
        let lin: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&u| (u, u)).collect();
        let fit = cauchy_fit(&lin).unwrap();
        assert_eq!(fit.slope, 1.0);
        assert_eq!(fit.max_residual, 0.0);

        let twice: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&u| (u, 2.0 * u)).collect();
        assert_eq!(cauchy_fit(&twice).unwrap().slope, 2.0);

        let pow: Vec<_> = [1.0f64, 2.0, 4.0].iter().map(|&u| (u, u.powf(1.5))).collect();
        let fit = cauchy_fit(&pow).unwrap();
        let (c, res) = brute_force_fit(&pow);
        // oracle: c ≈ 1.840803, worst residual ≈ 0.853 at u = 2
        assert!((fit.slope - c).abs() < 1e-6);
        assert!((fit.max_residual - res).abs() < 1e-5);
        assert!((fit.slope - 1.840_803).abs() < 1e-6);
        assert!(fit.max_residual > 0.3);
    }

    #[test]
    fn cauchy_fit_rejects_degenerate_input() {
        assert!(cauchy_fit(&[]).is_err());
        assert!(cauchy_fit(&[(1.0, 1.0)]).is_err());
        assert!(cauchy_fit(&[(2.0, 1.0), (2.0, 3.0)]).is_err());
        assert!(cauchy_fit(&[(0.0, 1.0), (2.0, 3.0)]).is_err());
    }

    #[test]
    fn identification_of_family_members() {
        for kind in parametric_family(TreeShape::Radial).into_iter().chain(parametric_family(TreeShape::River)) {
            let id = identify(kind, t()).unwrap();
            let (expect_match, expect_identity) = match kind {
                MetricKind::ParametricRadial(f) | MetricKind::ParametricRiver { vertical: f, .. } => match f {
                    Family::Power(p) => (p == 1.0, p == 1.0),
                    Family::Linear(c) => (true, c == 1.0),
                },
                _ => unreachable!(),
            };
            assert_eq!(id.scan.mismatches.is_empty(), expect_match, "{kind}");
            assert_eq!(id.identified, expect_identity, "{kind}");
        }
        assert!(identify(MetricKind::Radial, t()).unwrap().identified);
        assert!(identify(MetricKind::River, t()).unwrap().identified);
    }
}
