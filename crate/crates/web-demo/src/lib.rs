//! Browser bindings for three operations on the square `[-5, 5]²`: the
//! C-set mask of a point pair, one sample of the tree-indexed Brownian field
//! over a grid, and the tree-metric checks on a clicked point set.
//!
//! Each operation has a plain Rust form returning `Result<_, String>` and a
//! thin `#[wasm_bindgen]` wrapper.

use wasm_bindgen::prelude::*;

use rtree_bm::cd_sets::{cd_grid, GridMark, GridSpec};
use rtree_bm::gaussian_field::{cholesky_psd, covariance_matrix, sample_exact};
use rtree_bm::metrics::distance_matrix;
use rtree_bm::simulation::{radial_plan, river_closure, river_plan, simulate_radial, simulate_river};
use rtree_bm::tree_checks::{check_condition_b, is_tree_metric, Verdict};
use rtree_bm::{MetricKind, Point, Tolerance};

/// Half-width of the displayed square.
pub const EXTENT: f64 = 5.0;
/// Largest grid resolution accepted by the field sampler.
pub const MAX_FIELD_RES: usize = 201;
/// Non-tree metrics go through a dense factorization, so their grids stay small.
pub const MAX_DENSE_RES: usize = 25;

fn metric(name: &str) -> Result<MetricKind, String> {
    name.parse().map_err(|e: rtree_bm::Error| e.to_string())
}

fn square(res: usize) -> Result<GridSpec, String> {
    GridSpec::new(-EXTENT, EXTENT, -EXTENT, EXTENT, res, res).map_err(|e| e.to_string())
}

/// Row-major mask over a `res × res` grid, `y` outer: 0 outside, 1 inside,
/// 2 within the boundary band.
pub fn cdset_mask_impl(
    name: &str,
    p1: [f64; 2],
    p2: [f64; 2],
    res: usize,
    by_definition: bool,
) -> Result<Vec<u8>, String> {
    let kind = metric(name)?;
    let (a, b) = (Point::xy(p1[0], p1[1]), Point::xy(p2[0], p2[1]));
    let cells = cd_grid(kind, &a, &b, &square(res)?, by_definition, Tolerance::default()).map_err(|e| e.to_string())?;
    Ok(cells
        .iter()
        .map(|(_, m)| match m {
            GridMark::Out => 0,
            GridMark::In => 1,
            GridMark::Skipped => 2,
        })
        .collect())
}

/// One replicate of the field at the `res × res` grid nodes, same layout as
/// the mask.
pub fn simulate_field_impl(name: &str, seed: u64, res: usize) -> Result<Vec<f64>, String> {
    let kind = metric(name)?;
    let cap = if matches!(kind, MetricKind::Radial | MetricKind::River) { MAX_FIELD_RES } else { MAX_DENSE_RES };
    if res > cap {
        return Err(format!("resolution {res} exceeds {cap} for {kind}"));
    }
    let nodes = square(res)?.nodes();
    let tol = Tolerance::default();
    let err = |e: rtree_bm::Error| e.to_string();
    match kind {
        MetricKind::Radial => Ok(simulate_radial(&radial_plan(&nodes, tol).map_err(err)?, seed, 1).row(0).to_vec()),
        MetricKind::River => {
            let labelled = river_closure(&nodes, tol).map_err(err)?;
            let batch = simulate_river(&river_plan(&labelled, tol).map_err(err)?, seed, 1);
            // the closure is sorted by (x, y) and contains every grid node
            let band = tol.band(EXTENT);
            nodes
                .iter()
                .map(|p| {
                    let start = labelled.partition_point(|q| q.x() < p.x() - band);
                    labelled[start..]
                        .iter()
                        .take_while(|q| q.x() <= p.x() + band)
                        .position(|q| (q.x() - p.x()).abs() <= band && (q.y() - p.y()).abs() <= band)
                        .map(|i| batch.value(0, start + i))
                        .ok_or_else(|| format!("grid node {p} missing from the closure"))
                })
                .collect()
        }
        kind => {
            let cov = covariance_matrix(kind, &Point::origin(2), &nodes, tol).map_err(err)?;
            let factor = cholesky_psd(&cov, cov.default_pivot_tol()).map_err(err)?;
            Ok(sample_exact(&factor, seed, 1).row(0).to_vec())
        }
    }
}

fn describe(label: &str, v: &Verdict) -> String {
    match v {
        Verdict::Pass => format!("PASS {label}"),
        Verdict::Fail(r) => format!("FAIL {label}: {r}"),
    }
}

/// Tree-metric and median checks on points given as `[x0, y0, x1, y1, ...]`.
pub fn tree_check_summary_impl(name: &str, coords: &[f64]) -> Result<String, String> {
    let kind = metric(name)?;
    if !coords.len().is_multiple_of(2) {
        return Err("coordinates must come in pairs".into());
    }
    let pts: Vec<Point> = coords.chunks(2).map(|c| Point::xy(c[0], c[1])).collect();
    if pts.len() > 64 {
        return Err(format!("{} points exceed the limit of 64", pts.len()));
    }
    let tol = Tolerance::default();
    let dm = distance_matrix(kind, &pts, tol).map_err(|e| e.to_string())?;
    let b = check_condition_b(kind, &pts, tol).map_err(|e| e.to_string())?;
    Ok(format!(
        "{} points under {kind}\n{}\n{}",
        pts.len(),
        describe("triangle inequality and four-point condition", &is_tree_metric(&dm, tol)),
        describe("median condition", &b)
    ))
}

#[wasm_bindgen]
pub fn cdset_mask(
    metric: &str,
    p1x: f64,
    p1y: f64,
    p2x: f64,
    p2y: f64,
    res: usize,
    by_definition: bool,
) -> Result<Vec<u8>, JsError> {
    cdset_mask_impl(metric, [p1x, p1y], [p2x, p2y], res, by_definition).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate_field(metric: &str, seed: u64, res: usize) -> Result<Vec<f64>, JsError> {
    simulate_field_impl(metric, seed, res).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tree_check_summary(metric: &str, coords: &[f64]) -> Result<String, JsError> {
    tree_check_summary_impl(metric, coords).map_err(|e| JsError::new(&e))
}
