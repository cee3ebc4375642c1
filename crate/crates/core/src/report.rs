//! Run configuration and the JSON reports behind the command-line tool.
//! Reports depend only on the configuration and the input document, so
//! equal inputs give byte-identical output.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra2d::AlgebraKind;
use crate::error::{Error, Result};
use crate::exactlin::{normalize_homogeneous, CLUSTER_RADIUS, RANK_TOL};
use crate::grassmann::{classify_congruence, verify_congruence_membership, RP5Vec};
use crate::proj_plane::PointA;
use crate::ruled::{
    generator_round_trip, grid, join_reconstruct, singular_locus, AnalysisConfig, CurveA,
    Derivatives, FrameDerivative, JoinReconstruction, SurfaceAnalysis,
};
use crate::sampling::{point, rng};
use crate::scalar::{Rational, Scalar};
use crate::wire::{decode_curve, decode_rp5_curve, encode_curve, encode_rp5};

pub const SCHEMA: &str = "1";

/// Largest fraction of degenerate grid samples a curve may have.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.1;

/// Tolerance for the Plücker round trip of a join and the frame relations.
pub const ROUND_TRIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub kind: AlgebraKind,
    pub mode: Mode,
    pub seed: u64,
    pub samples: usize,
    pub grid: [usize; 2],
    pub tol_rank: f64,
    pub tol_membership: f64,
    pub tol_cluster: f64,
    pub derivatives: Derivatives,
}

impl RunConfig {
    pub fn new(kind: AlgebraKind) -> Self {
        RunConfig {
            kind,
            mode: Mode::Exact,
            seed: 0,
            samples: 100,
            grid: [5, 5],
            tol_rank: RANK_TOL,
            tol_membership: 1e-8,
            tol_cluster: CLUSTER_RADIUS,
            derivatives: Derivatives::Analytic,
        }
    }

    pub fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig {
            derivatives: self.derivatives,
            tol_rank: self.tol_rank,
            tol_membership: self.tol_membership,
            tol_subspace: self.tol_membership,
            cluster_radius: self.tol_cluster,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.grid.contains(&0) {
            return Err(Error::Parse(
                "samples and grid sizes must be positive".into(),
            ));
        }
        let tols = [self.tol_rank, self.tol_membership, self.tol_cluster];
        if tols.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Parse(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    /// Membership failure, misclassification or a broken invariant.
    Failed,
    /// Too many degenerate samples for a generic analysis.
    Degenerate,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Passed => 0,
            Status::Failed => 3,
            Status::Degenerate => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub status: Status,
}

impl Report {
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
        s.push('\n');
        s
    }
}

fn header(command: &str, cfg: &RunConfig) -> Value {
    json!({"schema": SCHEMA, "command": command, "config": cfg})
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

/// Classifies the congruence and checks focal-plane membership for
/// `cfg.samples` seeded random points.
pub fn congruence(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let classification = classify_congruence(cfg.kind)?;
    let points: Vec<PointA<Rational>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| point(&mut rng(cfg.seed, i), cfg.kind))
        .collect::<Result<_>>()?;
    let report = match cfg.mode {
        Mode::Exact => verify_congruence_membership(cfg.kind, &points, 0.0)?,
        Mode::Float => {
            let pts: Vec<PointA<f64>> = points.iter().map(|p| p.map(Scalar::to_f64)).collect();
            verify_congruence_membership(cfg.kind, &pts, cfg.tol_membership)?
        }
    };
    let status = if report.failures.is_empty() {
        Status::Passed
    } else {
        Status::Failed
    };
    let json = merge(
        header("congruence", cfg),
        json!({
            "kind": cfg.kind,
            "class": report.class,
            "samples": report.samples,
            "checks": report.checks,
            "failures": report.failures,
            "focal_polynomial": classification.focal_polynomial,
            "roots": classification.roots,
            "real_foci": classification.real_foci,
            "focal_planes": report.focal_planes,
        }),
    );
    Ok(Report { json, status })
}

fn encode_opt<S: Scalar>(v: &Option<RP5Vec<S>>) -> Value {
    match v {
        Some(v) => encode_rp5(&normalize_homogeneous(v).try_into().expect("six entries")),
        None => Value::Null,
    }
}

#[derive(Debug, Default, Serialize)]
struct FrameSummary {
    samples: usize,
    form_residual: f64,
    smoothness_residual: f64,
    analyticity_residual: f64,
    structure_residual: f64,
    structure_tol: f64,
}

fn frame_summary(
    curve: &CurveA<f64>,
    params: &[[f64; 2]],
    failures: &mut Vec<String>,
) -> FrameSummary {
    let checks: Vec<_> = params
        .par_iter()
        .map(|t| {
            FrameDerivative::at(curve, t)
                .and_then(|f| f.check(curve))
                .ok()
        })
        .collect();
    let mut s = FrameSummary::default();
    for c in checks.iter().flatten() {
        s.samples += 1;
        s.form_residual = s.form_residual.max(c.form_residual);
        s.smoothness_residual = s.smoothness_residual.max(c.smoothness_residual);
        s.analyticity_residual = s.analyticity_residual.max(c.analyticity_residual);
        s.structure_residual = s.structure_residual.max(c.structure_residual);
        s.structure_tol = c.structure_tol;
    }
    let relations = [
        ("algebra form", s.form_residual),
        ("smoothness", s.smoothness_residual),
        ("analyticity", s.analyticity_residual),
    ];
    for (name, r) in relations {
        if r > ROUND_TRIP_TOL {
            failures.push(format!("frame {name} relation residual {r:e}"));
        }
    }
    if s.structure_residual > s.structure_tol {
        failures.push(format!(
            "frame structure equation residual {:e}",
            s.structure_residual
        ));
    }
    s
}

fn analyse_curve<S: Scalar>(
    curve: &CurveA<Rational>,
    cfg: &RunConfig,
) -> Result<SurfaceAnalysis<S>> {
    let c: CurveA<S> = curve.map(|v| S::from_rational(v));
    singular_locus(&c, &grid::<S>(cfg.grid[0], cfg.grid[1]), &cfg.analysis())
}

fn curve_report<S: Scalar>(curve: &CurveA<Rational>, cfg: &RunConfig) -> Result<Report> {
    let analysis = analyse_curve::<S>(curve, cfg)?;
    let mut failures = analysis.failures.clone();
    let fc = curve.map(Scalar::to_f64);
    let frame = frame_summary(&fc, &grid::<f64>(cfg.grid[0], cfg.grid[1]), &mut failures);
    let matches = analysis.classified_as_expected();
    if !matches {
        let got = analysis
            .classification
            .map_or("unclassified".to_string(), |c| c.to_string());
        failures.push(format!(
            "classified as {got}, expected {}",
            analysis.expected
        ));
    }
    let fraction = analysis.degenerate_fraction();
    let status = if fraction > MAX_DEGENERATE_FRACTION {
        Status::Degenerate
    } else if !matches || !failures.is_empty() {
        Status::Failed
    } else {
        Status::Passed
    };
    let focal_curves: Vec<Value> = analysis
        .focal_curves
        .iter()
        .map(|c| {
            json!({
                "plane": c.plane,
                "lambda": c.lambda,
                "span_dim": c.span_dim,
                "points": c.points.iter().map(encode_opt).collect::<Vec<_>>(),
            })
        })
        .collect();
    let json = merge(
        header("curve", cfg),
        json!({
            "kind": analysis.kind,
            "curve": encode_curve(curve),
            "classification": analysis.classification,
            "expected": analysis.expected,
            "matches_expected": matches,
            "samples": analysis.samples.len(),
            "degenerate": analysis.degenerate,
            "degenerate_fraction": fraction,
            "focal_span": analysis.focal_span,
            "frame": frame,
            "failures": failures,
            "per_sample": analysis.samples,
            "focal_curves": focal_curves,
        }),
    );
    Ok(Report { json, status })
}

/// Full generator and singular-locus analysis of a curve document.
pub fn curve(doc: &Value, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let curve: CurveA<Rational> = decode_curve(doc)?;
    check_kind(curve.kind(), cfg)?;
    match cfg.mode {
        Mode::Exact => curve_report::<Rational>(&curve, cfg),
        Mode::Float => curve_report::<f64>(&curve, cfg),
    }
}

fn check_kind(kind: AlgebraKind, cfg: &RunConfig) -> Result<()> {
    if kind != cfg.kind {
        return Err(Error::Parse(format!(
            "document is over {kind} but --kind is {}",
            cfg.kind
        )));
    }
    Ok(())
}

fn join_json<S: Scalar>(j: &JoinReconstruction<S>) -> Value {
    json!({
        "lines": j.lines.iter().map(|l| match l {
            Some(l) => Value::Array(
                normalize_homogeneous(l.plucker()).iter().map(|x| Value::String(x.encode())).collect(),
            ),
            None => Value::Null,
        }).collect::<Vec<_>>(),
        "warnings": j.warnings,
        "plane_dims": j.plane_dims,
        "span_rank": j.span_rank,
        "intersection_round_trip": j.round_trip,
    })
}

fn join_from_curve<S: Scalar>(curve: &CurveA<Rational>, cfg: &RunConfig) -> Result<Report> {
    let analysis = analyse_curve::<S>(curve, cfg)?;
    let [g1, g2] = &analysis.focal_curves[..] else {
        return Err(Error::Contract(format!(
            "a {} curve has {} focal curves; a join needs two",
            curve.kind(),
            analysis.focal_curves.len()
        )));
    };
    let tol = if S::EXACT { 0.0 } else { cfg.tol_rank };
    let j = join_reconstruct(&g1.points, &g2.points, tol)?;
    let round_trip = generator_round_trip(&analysis, &j);
    let ok = round_trip <= ROUND_TRIP_TOL && j.round_trip <= ROUND_TRIP_TOL;
    let json = merge(
        merge(header("join", cfg), join_json(&j)),
        json!({
            "source": "curve",
            "curve": encode_curve(curve),
            "classification": analysis.classification,
            "generator_round_trip": round_trip,
        }),
    );
    Ok(Report {
        json,
        status: if ok { Status::Passed } else { Status::Failed },
    })
}

fn join_from_samples<S: Scalar>(doc: &Value, cfg: &RunConfig) -> Result<Report> {
    let get = |k: &str| {
        doc.get(k)
            .ok_or_else(|| Error::Parse(format!("missing field {k:?}")))
    };
    let g1: Vec<Option<RP5Vec<S>>> = decode_rp5_curve(get("gamma1")?)?;
    let g2: Vec<Option<RP5Vec<S>>> = decode_rp5_curve(get("gamma2")?)?;
    let tol = if S::EXACT { 0.0 } else { cfg.tol_rank };
    let j = join_reconstruct(&g1, &g2, tol)?;
    let ok = j.round_trip <= ROUND_TRIP_TOL;
    let json = merge(
        merge(header("join", cfg), join_json(&j)),
        json!({"source": "samples"}),
    );
    Ok(Report {
        json,
        status: if ok { Status::Passed } else { Status::Failed },
    })
}

/// Joins matched samples `{"gamma1", "gamma2"}`, or the two focal curves of
/// a curve document.
pub fn join(doc: &Value, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let sampled = doc.get("gamma1").is_some() || doc.get("gamma2").is_some();
    match (sampled, cfg.mode) {
        (true, Mode::Exact) => join_from_samples::<Rational>(doc, cfg),
        (true, Mode::Float) => join_from_samples::<f64>(doc, cfg),
        (false, mode) => {
            let curve: CurveA<Rational> = decode_curve(doc)?;
            check_kind(curve.kind(), cfg)?;
            match mode {
                Mode::Exact => join_from_curve::<Rational>(&curve, cfg),
                Mode::Float => join_from_curve::<f64>(&curve, cfg),
            }
        }
    }
}

/// Structured error payload; the exit code follows the error kind.
pub fn error_json(e: &Error) -> Value {
    json!({"schema": SCHEMA, "error": e.tag(), "message": e.to_string()})
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divisor(_) => 2,
        Error::Parse(_) => 64,
        _ => 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_curve;

    fn monomial(kind: AlgebraKind) -> Value {
        json!({
            "kind": kind,
            "degree": 2,
            "coeffs": {"F1": [{"x": "0", "y": "0"}, {"x": "1", "y": "0"}],
                       "F2": [{"x": "0", "y": "0"}, {"x": "0", "y": "0"}, {"x": "1", "y": "0"}]}
        })
    }

    #[test]
    fn congruence_reports() {
        for (kind, class) in [
            (AlgebraKind::Double, "hyperbolic"),
            (AlgebraKind::Dual, "parabolic"),
            (AlgebraKind::Complex, "elliptic"),
        ] {
            let mut cfg = RunConfig::new(kind);
            cfg.samples = 10;
            let r = congruence(&cfg).unwrap();
            assert_eq!(r.status, Status::Passed);
            assert_eq!(r.json["class"], class);
            assert_eq!(r.json["schema"], "1");
            cfg.mode = Mode::Float;
            assert_eq!(congruence(&cfg).unwrap().status, Status::Passed);
        }
    }

    #[test]
    fn curve_reports_classify() {
        for (kind, class) in [
            (AlgebraKind::Double, "join"),
            (AlgebraKind::Dual, "plane-curve-family"),
            (AlgebraKind::Complex, "no-real-singularities"),
        ] {
            let mut cfg = RunConfig::new(kind);
            cfg.grid = [3, 3];
            let r = curve(&monomial(kind), &cfg).unwrap();
            assert_eq!(r.json["classification"], class, "{}", r.to_pretty());
            assert_eq!(r.status, Status::Passed, "{}", r.json["failures"]);
            cfg.mode = Mode::Float;
            let r = curve(&monomial(kind), &cfg).unwrap();
            assert_eq!(r.status, Status::Passed, "{}", r.json["failures"]);
        }
        let r = curve(
            &monomial(AlgebraKind::Double),
            &RunConfig::new(AlgebraKind::Double),
        )
        .unwrap();
        assert_eq!(r.json["focal_curves"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn kind_must_match_document() {
        let e = curve(
            &monomial(AlgebraKind::Dual),
            &RunConfig::new(AlgebraKind::Double),
        )
        .unwrap_err();
        assert_eq!(exit_code(&e), 64);
    }

    #[test]
    fn join_from_double_curve() {
        let mut cfg = RunConfig::new(AlgebraKind::Double);
        cfg.grid = [3, 3];
        let r = join(&monomial(AlgebraKind::Double), &cfg).unwrap();
        assert_eq!(r.status, Status::Passed);
        assert_eq!(r.json["generator_round_trip"], 0.0);
        assert!(join(
            &monomial(AlgebraKind::Dual),
            &RunConfig::new(AlgebraKind::Dual)
        )
        .is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let c = encode_curve(&random_curve::<Rational>(
            &mut rng(5, 0),
            AlgebraKind::Double,
        ));
        let mut cfg = RunConfig::new(AlgebraKind::Double);
        cfg.mode = Mode::Float;
        cfg.grid = [3, 2];
        assert_eq!(
            curve(&c, &cfg).unwrap().to_pretty(),
            curve(&c, &cfg).unwrap().to_pretty()
        );
    }
}
