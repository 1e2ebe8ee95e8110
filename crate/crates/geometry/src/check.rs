//! Per-sample curvature reports, trajectory verdicts and CSV interchange.

use std::io::{Read, Write};

use hypersurf::derivation::DerivationTable;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{pointwise, PointCurvature};
use crate::frame::{FrameState, PhiStructure};
use crate::ode::Trajectory;
use crate::structure::{codazzi_at, gauss_at, Mutation};
use crate::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub kappa1: f64,
    #[serde(flatten)]
    pub point: PointCurvature,
    pub codazzi_residual: f64,
    pub gauss_residual: f64,
}

pub fn curvature_report(
    st: &FrameState,
    phi: &PhiStructure,
    table: &DerivationTable,
) -> Result<CurvatureReport, GeometryError> {
    let mutation = Mutation::default();
    Ok(CurvatureReport {
        s: st.s,
        alpha: st.alpha,
        beta: st.beta,
        gamma: st.gamma,
        mu: st.mu,
        kappa1: st.kappa1(),
        point: pointwise(&st.shape_operator(), phi),
        codazzi_residual: codazzi_at(st, phi, &mutation)?,
        gauss_residual: gauss_at(st, phi, table, &mutation)?,
    })
}

/// Upper bounds on the absolute residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub ideal: f64,
    pub codazzi: f64,
    pub gauss: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { ideal: 1e-8, codazzi: 1e-8, gauss: 1e-8 }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (name, v) in [("ideal", self.ideal), ("codazzi", self.codazzi), ("gauss", self.gauss)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GeometryError::Usage(format!("threshold `{name}` must be positive (got {v})")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub samples: usize,
    pub thresholds: Thresholds,
    pub max_ideal_residual: f64,
    pub max_codazzi_residual: f64,
    pub max_gauss_residual: f64,
    pub max_slice_defect: f64,
    pub reports: Vec<CurvatureReport>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Curvature reports at every sample with the worst residuals and a verdict.
///
/// Per-sample work runs on the thread pool unless `sequential` is set; the
/// result does not depend on the schedule.
pub fn check_trajectory(
    traj: &Trajectory,
    table: &DerivationTable,
    thresholds: &Thresholds,
    sequential: bool,
) -> Result<CheckReport, GeometryError> {
    let phi = PhiStructure::standard();
    let reports: Vec<CurvatureReport> = if sequential {
        traj.samples.iter().map(|st| curvature_report(st, &phi, table)).collect::<Result<_, _>>()?
    } else {
        traj.samples.par_iter().map(|st| curvature_report(st, &phi, table)).collect::<Result<_, _>>()?
    };
    let max = |f: fn(&CurvatureReport) -> f64| reports.iter().map(f).fold(0.0, f64::max);
    let max_ideal_residual = max(|r| r.point.ideal_residual.abs());
    let max_codazzi_residual = max(|r| r.codazzi_residual);
    let max_gauss_residual = max(|r| r.gauss_residual);
    let max_slice_defect = traj.samples.iter().map(|s| s.slice_defect().abs()).fold(0.0, f64::max);
    let verdict = if reports.is_empty() {
        Verdict::Vacuous
    } else if max_ideal_residual <= thresholds.ideal
        && max_codazzi_residual <= thresholds.codazzi
        && max_gauss_residual <= thresholds.gauss
    {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport {
        verdict,
        samples: reports.len(),
        thresholds: *thresholds,
        max_ideal_residual,
        max_codazzi_residual,
        max_gauss_residual,
        max_slice_defect,
        reports,
    })
}

pub const CSV_COLUMNS: [&str; 15] = [
    "s",
    "alpha",
    "beta",
    "gamma",
    "mu",
    "kappa1",
    "K12",
    "K13",
    "K23",
    "tau",
    "delta2",
    "H",
    "ideal_residual",
    "codazzi_residual",
    "gauss_residual",
];

/// Writes one row per report. Floats use the shortest round-trip form.
pub fn write_csv<W: Write>(out: W, reports: &[CurvatureReport]) -> Result<(), GeometryError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| GeometryError::Io(std::io::Error::other(e));
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in reports {
        let p = &r.point;
        let row = [
            r.s,
            r.alpha,
            r.beta,
            r.gamma,
            r.mu,
            r.kappa1,
            p.k12,
            p.k13,
            p.k23,
            p.tau,
            p.delta2,
            p.h,
            p.ideal_residual,
            r.codazzi_residual,
            r.gauss_residual,
        ];
        w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct Row {
    s: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    mu: f64,
}

/// Reads the state columns back; derived columns are ignored and recomputed
/// by [`check_trajectory`].
pub fn read_csv<R: Read>(input: R) -> Result<Trajectory, GeometryError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| GeometryError::Data(e.to_string()))?.clone();
    if headers.is_empty() {
        return Err(GeometryError::Data("empty file".into()));
    }
    for col in ["s", "alpha", "beta", "gamma", "mu"] {
        if !headers.iter().any(|h| h == col) {
            return Err(GeometryError::Data(format!("missing column `{col}`")));
        }
    }
    let mut samples = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let r = row.map_err(|e| GeometryError::Data(format!("row {}: {e}", i + 2)))?;
        let st = FrameState { s: r.s, alpha: r.alpha, beta: r.beta, gamma: r.gamma, mu: r.mu };
        if [st.s, st.alpha, st.beta, st.gamma, st.mu].iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::Data(format!("row {}: non-finite value", i + 2)));
        }
        if let Some(prev) = samples.last() {
            let prev: &FrameState = prev;
            if st.s <= prev.s {
                return Err(GeometryError::Data(format!("row {}: s is not increasing", i + 2)));
            }
        }
        samples.push(st);
    }
    Ok(Trajectory::from_samples(samples))
}
