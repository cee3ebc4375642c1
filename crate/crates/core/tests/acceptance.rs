//! End-to-end acceptance checks. Run with `--nocapture` to see one line per
//! criterion.

use std::time::{Duration, Instant};

use algplane::exactlin::{real_roots_with_multiplicity, RootSet};
use algplane::grassmann::{
    classify_congruence, embed, focal_polynomial, lines_intersect, span_rank,
    verify_congruence_membership,
};
use algplane::model::{CongruenceClass, SurfaceClass};
use algplane::proj_plane::PointA;
use algplane::ruled::{
    generator_round_trip, grid, join_reconstruct, singular_locus, AnalysisConfig, CurveA,
    SampleOutcome, SurfaceAnalysis,
};
use algplane::sampling::{a2, adjacent_pair, curves, point, rng};
use algplane::{AlgebraKind, Rational, Scalar, A2};

type Q = Rational;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

fn run(label: &str, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let passed = ok && in_time;
    let timing = match budget {
        Some(b) => format!("{:.2?} of {:.0?}", elapsed, b),
        None => format!("{:.2?}", elapsed),
    };
    println!(
        "[{}] {label}: {detail} ({timing})",
        if passed { "PASS" } else { "FAIL" }
    );
    Outcome {
        passed,
        detail,
        elapsed,
        budget,
    }
}

fn focal_multiplicities() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for kind in AlgebraKind::ALL {
        let roots = real_roots_with_multiplicity(&focal_polynomial(kind), 0.0).unwrap();
        let real: Vec<(Q, usize)> = roots
            .real
            .iter()
            .map(|r| (r.exact.clone().expect("rational root"), r.multiplicity))
            .collect();
        let complex: Vec<(f64, f64, usize)> = roots
            .complex
            .iter()
            .map(|c| (c.re, c.im, c.multiplicity))
            .collect();
        let want_real: Vec<(Q, usize)> = match kind {
            AlgebraKind::Double => vec![(Q::ratio(-1, 1), 2), (Q::ratio(1, 1), 2)],
            AlgebraKind::Dual => vec![(Q::ratio(0, 1), 4)],
            AlgebraKind::Complex => vec![],
        };
        let want_complex = if kind == AlgebraKind::Complex {
            vec![(0.0, 1.0, 2)]
        } else {
            vec![]
        };
        let complex_ok = complex.len() == want_complex.len()
            && complex
                .iter()
                .zip(&want_complex)
                .all(|(a, b)| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12 && a.2 == b.2);
        let this = real == want_real && complex_ok;
        ok &= this;
        notes.push(format!("{kind} {}", describe(&roots)));
    }
    (ok, notes.join("; "))
}

fn describe(r: &RootSet) -> String {
    let mut parts: Vec<String> = r
        .real
        .iter()
        .map(|x| format!("{}:{}", x.value, x.multiplicity))
        .collect();
    parts.extend(
        r.complex
            .iter()
            .map(|c| format!("{}±{}i:{}", c.re, c.im, c.multiplicity)),
    );
    if parts.is_empty() {
        "{}".into()
    } else {
        format!("{{{}}}", parts.join(", "))
    }
}

fn congruence_classification() -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for kind in AlgebraKind::ALL {
        let want = match kind {
            AlgebraKind::Double => CongruenceClass::Hyperbolic,
            AlgebraKind::Dual => CongruenceClass::Parabolic,
            AlgebraKind::Complex => CongruenceClass::Elliptic,
        };
        let class = classify_congruence(kind).unwrap().class;
        let points: Vec<PointA<Q>> = (0..100)
            .map(|i| point(&mut rng(SEED, i), kind).unwrap())
            .collect();
        let report = verify_congruence_membership(kind, &points, 0.0).unwrap();
        let passed = report.samples
            - report
                .failures
                .iter()
                .map(|f| f.sample)
                .collect::<std::collections::BTreeSet<_>>()
                .len();
        ok &= class == want && report.failures.is_empty() && report.samples == 100;
        notes.push(format!("{kind} {class} {passed}/{}", report.samples));
    }
    (ok, notes.join("; "))
}

fn analyse<S: Scalar>(
    kind: AlgebraKind,
    n: usize,
    g: (usize, usize),
    cfg: &AnalysisConfig,
) -> Vec<SurfaceAnalysis<S>> {
    let params = grid::<S>(g.0, g.1);
    curves::<Q>(SEED, kind, n)
        .iter()
        .map(|c: &CurveA<Q>| {
            let c: CurveA<S> = c.map(|v| S::from_rational(v));
            singular_locus(&c, &params, cfg).unwrap()
        })
        .collect()
}

fn tangent_rank_check(analyses: &[(AlgebraKind, Vec<SurfaceAnalysis<f64>>)]) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (kind, list) in analyses {
        let (mut total, mut rank4, mut fixed, mut worst) = (0, 0, 0, 0.0_f64);
        for a in list {
            for s in &a.samples {
                total += 1;
                if let SampleOutcome::Ok(r) = s {
                    if r.rank == 4 {
                        rank4 += 1;
                    }
                    if r.tangent.fixed {
                        fixed += 1;
                    }
                    for p in &r.tangent.probes {
                        worst = worst.max(if p.focal { p.excess } else { p.distance });
                    }
                }
            }
        }
        let frac = rank4 as f64 / total as f64;
        ok &= frac >= 0.95 && fixed == rank4;
        notes.push(format!(
            "{kind} rank 4 at {rank4}/{total}, fixed {fixed}/{rank4}, max distance {worst:.1e}"
        ));
    }
    (ok, notes.join("; "))
}

fn singular_locus_classification(
    analyses: &[(AlgebraKind, Vec<SurfaceAnalysis<Q>>)],
) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (kind, list) in analyses {
        let want = match kind {
            AlgebraKind::Double => SurfaceClass::Join,
            AlgebraKind::Dual => SurfaceClass::PlaneCurveFamily,
            AlgebraKind::Complex => SurfaceClass::NoRealSingularities,
        };
        let right = list
            .iter()
            .filter(|a| a.classification == Some(want))
            .count();
        let clean = list.iter().filter(|a| a.failures.is_empty()).count();
        let memberships: usize = list
            .iter()
            .flat_map(|a| a.samples.iter().filter_map(|s| s.report()))
            .map(|r| r.memberships.iter().filter(|m| m.passed).count())
            .sum();
        let negative = list
            .iter()
            .flat_map(|a| a.samples.iter().filter_map(|s| s.report()))
            .all(|r| *kind != AlgebraKind::Complex || r.discriminant.is_some_and(|d| d < 0.0));
        ok &= right == list.len() && clean == list.len() && negative;
        notes.push(format!(
            "{kind} {want} {right}/{}, clean {clean}, memberships {memberships}",
            list.len()
        ));
    }
    (ok, notes.join("; "))
}

fn oracle_agreement<S: Scalar>(analyses: &[&[SurfaceAnalysis<S>]]) -> (usize, usize, f64) {
    let (mut agree, mut total, mut worst) = (0, 0, 0.0_f64);
    for list in analyses {
        for a in list.iter() {
            for s in &a.samples {
                match s {
                    SampleOutcome::Ok(r) => {
                        total += 1;
                        worst = worst.max(r.oracle_distance);
                        if r.oracle_distance <= 1e-6 {
                            agree += 1;
                        }
                    }
                    SampleOutcome::Failed { .. } => total += 1,
                    SampleOutcome::Degenerate { .. } => {}
                }
            }
        }
    }
    (agree, total, worst)
}

fn join_round_trip() -> (bool, String) {
    let cfg = AnalysisConfig::default();
    let mut ok = true;
    let mut worst = 0.0_f64;
    let mut worst_float = 0.0_f64;
    for (exact, float) in analyse::<Q>(AlgebraKind::Double, 10, (5, 5), &cfg)
        .into_iter()
        .zip(analyse::<f64>(AlgebraKind::Double, 10, (5, 5), &cfg))
    {
        for (a, d) in [(&exact, &mut worst)] {
            let [g1, g2] = &a.focal_curves[..] else {
                ok = false;
                continue;
            };
            let j = join_reconstruct(&g1.points, &g2.points, 0.0).unwrap();
            *d = d.max(generator_round_trip(a, &j));
        }
        let [g1, g2] = &float.focal_curves[..] else {
            ok = false;
            continue;
        };
        let j = join_reconstruct(&g1.points, &g2.points, cfg.tol_rank).unwrap();
        worst_float = worst_float.max(generator_round_trip(&float, &j));
    }
    ok &= worst <= 1e-8 && worst_float <= 1e-8;
    (
        ok,
        format!("10 curves, max Plücker distance exact {worst:.1e}, float {worst_float:.1e}"),
    )
}

fn straight_lines() -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for kind in AlgebraKind::ALL {
        let mut ranks = Vec::new();
        for i in 0..5 {
            let r = &mut rng(SEED ^ 7, i);
            let line =
                CurveA::<Q>::straight(a2(r, kind), a2(r, kind), a2(r, kind), a2(r, kind)).unwrap();
            let pts: Vec<PointA<Q>> = grid::<Q>(4, 4)
                .iter()
                .filter_map(|t| line.eval(&A2::new(kind, t[0].clone(), t[1].clone())).ok())
                .collect();
            ranks.push(span_rank(&pts).unwrap());
        }
        ok &= ranks.iter().all(|&r| r == 4);
        notes.push(format!("{kind} ranks {ranks:?}"));
    }
    (ok, notes.join("; "))
}

fn foundations() -> (bool, String) {
    let mut counts = [0usize; 5];
    let mut totals = [0usize; 5];
    for kind in AlgebraKind::ALL {
        for i in 0..1000 {
            let r = &mut rng(SEED ^ 11, i);
            let (a, b, c): (A2<Q>, A2<Q>, A2<Q>) = (a2(r, kind), a2(r, kind), a2(r, kind));
            totals[0] += 1;
            if &(&a + &b) * &c == &(&a * &c) + &(&b * &c)
                && &a * &b == &b * &a
                && &(&a * &b) * &c == &a * &(&b * &c)
            {
                counts[0] += 1;
            }
            totals[1] += 1;
            let prod = &a.to_matrix() * &b.to_matrix();
            if (&a * &b).to_matrix() == prod {
                counts[1] += 1;
            }
            totals[2] += 1;
            if a.norm() == a.to_matrix().det() && (&a * &b).norm() == a.norm() * b.norm() {
                counts[2] += 1;
            }
            let p = point::<Q>(r, kind).unwrap();
            totals[3] += 1;
            if embed(&p).unwrap().satisfies_plucker_relations(0.0) {
                counts[3] += 1;
            }
        }
        for i in 0..200 {
            let r = &mut rng(SEED ^ 13, i);
            let (x, y) = if i % 2 == 0 {
                adjacent_pair::<Q>(r, kind).unwrap()
            } else {
                (point(r, kind).unwrap(), point(r, kind).unwrap())
            };
            totals[4] += 1;
            if lines_intersect(&embed(&x).unwrap(), &embed(&y).unwrap()).unwrap()
                == x.adjacent(&y).unwrap()
            {
                counts[4] += 1;
            }
        }
    }
    let names = [
        "ring axioms",
        "homomorphism",
        "norm-determinant",
        "Plücker relations",
        "adjacency-intersection",
    ];
    let ok = counts == totals;
    let detail = names
        .iter()
        .zip(counts.iter().zip(&totals))
        .map(|(n, (c, t))| format!("{n} {c}/{t}"))
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    outcomes.push(run(
        "focal multiplicities",
        Some(Duration::from_secs(1)),
        focal_multiplicities,
    ));
    outcomes.push(run(
        "congruence classification and focal-plane membership",
        Some(Duration::from_secs(10)),
        congruence_classification,
    ));

    let float_cfg = AnalysisConfig::default();
    let mut float_runs = Vec::new();
    outcomes.push(run(
        "tangent rank along generators",
        Some(Duration::from_secs(60)),
        || {
            float_runs = AlgebraKind::ALL
                .iter()
                .map(|&k| (k, analyse::<f64>(k, 20, (5, 5), &float_cfg)))
                .collect();
            tangent_rank_check(&float_runs)
        },
    ));

    let exact_cfg = AnalysisConfig::default();
    let mut exact_runs = Vec::new();
    outcomes.push(run("singular-locus classification", None, || {
        exact_runs = AlgebraKind::ALL
            .iter()
            .map(|&k| (k, analyse::<Q>(k, 20, (5, 5), &exact_cfg)))
            .collect();
        singular_locus_classification(&exact_runs)
    }));

    outcomes.push(run("generic focus solver agrees with closed forms", None, || {
        let f: Vec<&[SurfaceAnalysis<f64>]> = float_runs.iter().map(|(_, l)| &l[..]).collect();
        let e: Vec<&[SurfaceAnalysis<Q>]> = exact_runs.iter().map(|(_, l)| &l[..]).collect();
        let (fa, ft, fw) = oracle_agreement(&f);
        let (ea, et, ew) = oracle_agreement(&e);
        (
            fa == ft && ea == et && ft > 0 && et > 0,
            format!("float {fa}/{ft} (max distance {fw:.1e}), exact {ea}/{et} (max distance {ew:.1e})"),
        )
    }));

    outcomes.push(run("join round trip", None, join_round_trip));
    outcomes.push(run("straight lines span a 3-space", None, straight_lines));
    outcomes.push(run("algebra and embedding foundations", None, foundations));

    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.passed).collect();
    assert!(
        failed.is_empty(),
        "{} criteria failed: {:?}",
        failed.len(),
        failed
            .iter()
            .map(|o| (&o.detail, o.elapsed, o.budget))
            .collect::<Vec<_>>()
    );
}
