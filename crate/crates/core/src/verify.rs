//! Verification harness: deterministic covariance comparisons, the
//! negative-type factorization check, a Monte-Carlo covariance test and the
//! independence-set scan.

use std::fmt;

use crate::cd_sets::cd_member_def;
use crate::error::{Error, Result};
use crate::gaussian_field::{cholesky_psd, covariance_matrix, f_b_member, sample_exact, CovMatrix, SampleBatch};
use crate::geometry::{Point, Tolerance};
use crate::metrics::{MetricKind, TreeShape};
use crate::simulation::{
    induced_covariance_radial, induced_covariance_river, radial_plan, river_closure, river_plan, simulate_radial,
    simulate_river, RadialPlan, RiverPlan,
};

/// Entrywise tolerance for covariances that should agree exactly.
pub const EXACT_COV_TOL: f64 = 1e-9;
/// Standard errors allowed per entry in [`mc_covariance_test`].
pub const MC_SIGMAS: f64 = 5.0;
/// Fewer replicates than this and the Monte-Carlo test is skipped.
pub const MC_MIN_REPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub name: String,
    pub status: Status,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Present on failure.
    pub witness: Option<String>,
}

impl VerifyReport {
    fn decide(name: &str, max_deviation: f64, tolerance: f64, witness: impl FnOnce() -> String) -> Self {
        let pass = max_deviation <= tolerance;
        Self {
            name: name.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            max_deviation,
            tolerance,
            witness: (!pass).then(witness),
        }
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<7} {}: max deviation {:.3e} (tolerance {:.3e})",
            self.status, self.name, self.max_deviation, self.tolerance
        )?;
        if let Some(w) = &self.witness {
            write!(f, "; {w}")?;
        }
        Ok(())
    }
}

/// Entrywise comparison of two covariance matrices over the same points.
pub fn compare_covariances(name: &str, got: &CovMatrix, want: &CovMatrix, tol: f64) -> Result<VerifyReport> {
    let (gap, (i, j)) = got.max_abs_diff(want)?;
    Ok(VerifyReport::decide(name, gap, tol, || format!("entry ({i},{j}): {} vs {}", got.get(i, j), want.get(i, j))))
}

pub fn psd_report(name: &str, cov: &CovMatrix) -> VerifyReport {
    let tol = cov.default_pivot_tol();
    match cholesky_psd(cov, tol) {
        Ok(f) => {
            let gap = f
                .reconstruct()
                .iter()
                .zip(cov.entries())
                .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
                .fold(0.0, f64::max);
            VerifyReport::decide(name, gap, 1e-9, || "factor does not reproduce the matrix".into())
        }
        Err(Error::NotPsd { index, pivot }) => VerifyReport {
            name: name.to_string(),
            status: Status::Fail,
            max_deviation: -pivot,
            tolerance: tol,
            witness: Some(format!("pivot {pivot:e} at index {index}")),
        },
        Err(e) => VerifyReport {
            name: name.to_string(),
            status: Status::Fail,
            max_deviation: f64::INFINITY,
            tolerance: tol,
            witness: Some(e.to_string()),
        },
    }
}

/// Compares the empirical covariance of `batch` with `theory`. Each entry may
/// deviate by `5·√((CᵢᵢCⱼⱼ + Cᵢⱼ²)/reps)`; the reported deviation is the worst
/// entry measured in those standard errors.
pub fn mc_covariance_test(name: &str, batch: &SampleBatch, theory: &CovMatrix) -> Result<VerifyReport> {
    let n = theory.n();
    if batch.n() != n {
        return Err(Error::Dimension { expected: n, found: batch.n() });
    }
    if batch.reps < MC_MIN_REPS {
        return Ok(VerifyReport {
            name: name.to_string(),
            status: Status::Skipped,
            max_deviation: 0.0,
            tolerance: MC_SIGMAS,
            witness: None,
        });
    }
    let emp = batch.empirical_covariance();
    let reps = batch.reps as f64;
    let mut worst = (0.0, 0, 0);
    for i in 0..n {
        for j in i..n {
            let c = theory.get(i, j);
            let se = ((theory.get(i, i) * theory.get(j, j) + c * c).max(0.0) / reps).sqrt();
            let gap = (emp[i * n + j] - c).abs();
            let z = if se > 0.0 {
                gap / se
            } else if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            if z > worst.0 {
                worst = (z, i, j);
            }
        }
    }
    let (z, i, j) = worst;
    Ok(VerifyReport::decide(name, z, MC_SIGMAS, || {
        format!("entry ({i},{j}): empirical {} vs {}", emp[i * n + j], theory.get(i, j))
    }))
}

pub fn check_radial_plan(plan: &RadialPlan, tol: Tolerance) -> Result<VerifyReport> {
    let formula = covariance_matrix(MetricKind::Radial, &Point::origin(2), &plan.points, tol)?;
    compare_covariances("radial plan covariance", &induced_covariance_radial(plan)?, &formula, EXACT_COV_TOL)
}

pub fn check_river_plan(plan: &RiverPlan, tol: Tolerance) -> Result<VerifyReport> {
    let formula = covariance_matrix(MetricKind::River, &Point::origin(2), &plan.labelled, tol)?;
    compare_covariances("river plan covariance", &induced_covariance_river(plan)?, &formula, EXACT_COV_TOL)
}

/// Disagreements between `a ∈ F_B(P₁|P₂)` and `a ∈ C_d(P₁,P₂)` over every
/// ordered pair of distinct `pairs_from` points and every probe.
pub fn fb_cd_report(kind: MetricKind, pairs_from: &[Point], probes: &[Point], tol: Tolerance) -> Result<VerifyReport> {
    let mut mismatches = 0usize;
    let mut first = None;
    for (i, p1) in pairs_from.iter().enumerate() {
        for (j, p2) in pairs_from.iter().enumerate() {
            if i == j {
                continue;
            }
            for (k, a) in probes.iter().enumerate() {
                if f_b_member(kind, p1, p2, a, tol)? != cd_member_def(kind, p1, p2, a, tol)? {
                    mismatches += 1;
                    first.get_or_insert((i, j, k));
                }
            }
        }
    }
    Ok(VerifyReport::decide("independence set equals C-set", mismatches as f64, 0.0, || {
        let (i, j, k) = first.unwrap_or_default();
        format!("{mismatches} mismatches, first P1=#{i}, P2=#{j}, probe #{k}")
    }))
}

/// Pairs for the independence scan are drawn from at most this many points.
pub const FB_PAIR_POINTS: usize = 16;

/// The full suite for one point set: simulator covariance against the
/// formula, the factorization, Monte-Carlo checks of the simulator and the
/// Cholesky oracle, and the independence-set scan.
pub fn verify_points(
    kind: MetricKind,
    points: &[Point],
    seed: u64,
    reps: usize,
    tol: Tolerance,
) -> Result<Vec<VerifyReport>> {
    let shape = kind
        .shape()
        .filter(|_| matches!(kind, MetricKind::Radial | MetricKind::River))
        .ok_or_else(|| Error::Unsupported { operation: "verify", metric: kind.to_string() })?;
    let o = Point::origin(2);
    let (exact, batch, pts) = match shape {
        TreeShape::Radial => {
            let plan = radial_plan(points, tol)?;
            (check_radial_plan(&plan, tol)?, simulate_radial(&plan, seed, reps), points.to_vec())
        }
        TreeShape::River => {
            let plan = river_plan(&river_closure(points, tol)?, tol)?;
            (check_river_plan(&plan, tol)?, simulate_river(&plan, seed, reps), plan.labelled.clone())
        }
    };
    let theory = covariance_matrix(kind, &o, &pts, tol)?;
    let mut reports = vec![exact, psd_report("covariance is positive semidefinite", &theory)];
    reports.push(mc_covariance_test("simulator empirical covariance", &batch, &theory)?);
    match cholesky_psd(&theory, theory.default_pivot_tol()) {
        Ok(f) => {
            let oracle = sample_exact(&f, seed ^ 0x5EED, reps);
            reports.push(mc_covariance_test("Cholesky oracle empirical covariance", &oracle, &theory)?);
        }
        Err(e) => reports.push(VerifyReport {
            name: "Cholesky oracle empirical covariance".into(),
            status: Status::Skipped,
            max_deviation: 0.0,
            tolerance: MC_SIGMAS,
            witness: Some(e.to_string()),
        }),
    }
    let head = &pts[..pts.len().min(FB_PAIR_POINTS)];
    reports.push(fb_cd_report(kind, head, &pts, tol)?);
    Ok(reports)
}
