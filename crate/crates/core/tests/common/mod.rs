//! Seeded generators for integration tests.
//!
//! Coordinates are drawn from the lattice `(10/49)·k` with `k` odd, which is
//! exactly the node set of `linspace(-10, 10, 50)`. Rays through a lattice
//! point and verticals at a lattice abscissa therefore pass through many probe
//! nodes, so every closed-form case is exercised by the grid.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rtree_bm::Point;

pub type Generator = fn(&mut ChaCha8Rng) -> Point;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(10/49)·k`; odd `k ∈ [-49, 49]` gives the probe grid nodes.
pub fn node(k: i64) -> f64 {
    k as f64 * 10.0 / 49.0
}

fn odd(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    2 * rng.random_range(-(bound + 1) / 2..(bound + 1) / 2) + 1
}

/// 50 × 50 probes on `[-10, 10]²`.
pub fn probe_grid() -> Vec<Point> {
    let ks: Vec<i64> = (0..50).map(|i| 2 * i - 49).collect();
    let mut out = Vec::with_capacity(2500);
    for &j in &ks {
        for &i in &ks {
            out.push(Point::xy(node(i), node(j)));
        }
    }
    out
}

/// Random lattice point inside the probe window.
pub fn lattice_point(rng: &mut ChaCha8Rng) -> Point {
    Point::xy(node(odd(rng, 49)), node(odd(rng, 49)))
}

/// Pairs covering every radial case: unrelated points, one shared ray in
/// either order, opposite rays, the origin, and equal points.
pub fn radial_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Point, Point)> {
    (0..count)
        .map(|_| {
            let (a, b) = (odd(rng, 5), odd(rng, 5));
            let on_ray = |m: i64| Point::xy(node(m * a), node(m * b));
            let mult = |rng: &mut ChaCha8Rng| {
                let lim = 49 / a.abs().max(b.abs());
                odd(rng, lim)
            };
            match rng.random_range(0..6) {
                0 => (lattice_point(rng), lattice_point(rng)),
                1 => {
                    let (m1, m2) = (mult(rng).abs(), mult(rng).abs());
                    (on_ray(m1), on_ray(m2))
                }
                2 => {
                    let (m1, m2) = (mult(rng).abs(), mult(rng).abs());
                    (on_ray(m1), on_ray(-m2))
                }
                3 => (lattice_point(rng), Point::xy(0.0, 0.0)),
                4 => (Point::xy(0.0, 0.0), lattice_point(rng)),
                _ => {
                    let p = lattice_point(rng);
                    (p.clone(), p)
                }
            }
        })
        .collect()
}

/// Pairs covering every river case: unrelated points, a shared vertical on one
/// or both sides of the axis, axis points, and equal points.
pub fn river_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Point, Point)> {
    (0..count)
        .map(|_| {
            let x = node(odd(rng, 49));
            let y = |rng: &mut ChaCha8Rng| node(odd(rng, 49));
            match rng.random_range(0..7) {
                0 => (lattice_point(rng), lattice_point(rng)),
                1 => (Point::xy(x, y(rng)), Point::xy(x, y(rng))),
                2 => (Point::xy(x, y(rng)), Point::xy(x, 0.0)),
                3 => (Point::xy(x, 0.0), Point::xy(x, y(rng))),
                4 => (lattice_point(rng), Point::xy(node(odd(rng, 49)), 0.0)),
                5 => (Point::xy(node(odd(rng, 49)), 0.0), Point::xy(node(odd(rng, 49)), 0.0)),
                _ => {
                    let p = lattice_point(rng);
                    (p.clone(), p)
                }
            }
        })
        .collect()
}

const DIRECTIONS: [(f64, f64); 6] = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.6, 0.8), (-0.8, 0.6), (0.6, -0.8)];

/// Planar point for the radial tree: often on a few shared rays, sometimes the
/// origin, otherwise generic.
pub fn radial_point(rng: &mut ChaCha8Rng) -> Point {
    match rng.random_range(0..10) {
        0 => Point::xy(0.0, 0.0),
        1..=6 => {
            let (ux, uy) = DIRECTIONS[rng.random_range(0..DIRECTIONS.len())];
            let r = if rng.random_bool(0.5) { rng.random_range(1..8) as f64 * 0.5 } else { rng.random_range(0.1..5.0) };
            Point::xy(r * ux, r * uy)
        }
        _ => Point::xy(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
    }
}

/// Point of ℝ³ for the radial tree.
pub fn radial_point_3d(rng: &mut ChaCha8Rng) -> Point {
    const DIRS: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [-0.48, 0.6, 0.64], [0.0, 0.0, -1.0]];
    match rng.random_range(0..10) {
        0 => Point::origin(3),
        1..=6 => {
            let u = DIRS[rng.random_range(0..DIRS.len())];
            let r = rng.random_range(0.1..5.0);
            Point::new(u.iter().map(|c| c * r).collect()).expect("finite")
        }
        _ => Point::new((0..3).map(|_| rng.random_range(-5.0..5.0)).collect()).expect("finite"),
    }
}

/// Planar point for the river tree: often on a few shared verticals or the axis.
pub fn river_point(rng: &mut ChaCha8Rng) -> Point {
    const XS: [f64; 5] = [-2.0, -0.5, 0.0, 1.0, 2.5];
    let x = if rng.random_bool(0.7) { XS[rng.random_range(0..XS.len())] } else { rng.random_range(-5.0..5.0) };
    let y = match rng.random_range(0..5) {
        0 => 0.0,
        1 => rng.random_range(-4..5) as f64 * 0.5,
        _ => rng.random_range(-5.0..5.0),
    };
    Point::xy(x, y)
}

pub fn points(rng: &mut ChaCha8Rng, n: usize, gen: Generator) -> Vec<Point> {
    (0..n).map(|_| gen(rng)).collect()
}
