//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the summary is always printed.

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use hypersurf::algebra::{parse_canonical, LaurentElement, KAPPA1};
use hypersurf::derivation::{check_derivation_consistency, DerivationTable, Direction};
use hypersurf::pipeline::{run_pipeline, strip_timing, Fixtures, PipelineConfig, StepId, StrategyChoice, Verdict};
use hypersurf_geometry::{
    check_trajectory, codazzi_at, delta2_cross_check, gauss_at, inequality_monte_carlo, inequality_residual,
    integrate_2hopf, observed_order, random_equality_case, FrameState, IntegrateOptions, Model, Mutation, PhiStructure,
    StopReason, Thresholds, Trajectory,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn full_run(strategy: StrategyChoice) -> Result<hypersurf::pipeline::Certificate, String> {
    let cfg = PipelineConfig { fixtures_dir: Fixtures::bundled_dir(), steps: None, strategy, seed: 20240229 };
    run_pipeline(&cfg).map_err(|e| e.to_string())
}

/// Displayed values the golden fixtures must encode, checked independently of
/// the pipeline.
const DISPLAYED: [(&str, &str); 8] = [
    ("p1", "16*g - 4*m"),
    ("p3", "-m*(2*g^2 - g*m - 1)^2"),
    ("q1", "88*g + 4*m"),
    ("q4", "(m - g)*(2*g^2 - g*m - 1)^2*(2*g^2 + 5*g*m - 2*m^2 - 1)"),
    ("r1_prefactor", "32*(4*g - m)*(2*g^2 - g*m - 1)^3"),
    ("b2i_final", "m*(9*m^2 + 208*b^2 + 72)"),
    ("b2ii_final", "b^2*(2*m^4 + 15*m^2 - 9)"),
    ("h18", "767557632*m"),
];

fn golden(name: &str) -> Result<hypersurf::algebra::MPoly, String> {
    let path = Fixtures::bundled_dir().join("golden").join(format!("{name}.poly"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n");
    parse_canonical(&body).map_err(|e| format!("{name}: {e}"))
}

fn criterion_1(cert: &hypersurf::pipeline::Certificate) -> Outcome {
    for (name, shown) in DISPLAYED {
        let expected = parse_canonical(shown).map_err(|e| e.to_string())?;
        ensure(golden(name)? == expected, format!("fixture {name} differs from {shown}"))?;
    }
    let mut scalars = Vec::new();
    for id in &StepId::ALL[..12] {
        let step = cert.step(*id).ok_or_else(|| format!("{id:?} missing"))?;
        ensure(step.verdict == Verdict::Match, format!("{id:?} verdict {:?}", step.verdict))?;
        if let Some(s) = &step.scalar {
            ensure(s != "0", format!("{id:?} has a zero scalar"))?;
            scalars.push(format!("{id:?}={s}"));
        }
    }
    Ok(format!("S1-S12 match exactly; scalars {}", scalars.join(" ")))
}

fn criterion_2(cert: &hypersurf::pipeline::Certificate, seconds: f64) -> Outcome {
    let step = cert.step(StepId::S13).ok_or("S13 missing")?;
    ensure(step.verdict == Verdict::Match, format!("S13 verdict {:?}", step.verdict))?;
    let find = |needle: &str| step.checks.iter().find(|c| c.name.contains(needle));
    let val = find("valuation").ok_or("no valuation check")?;
    ensure(val.verdict == Verdict::Match && val.computed == "36", format!("valuation {}", val.computed))?;
    let deg = find("degree of k").ok_or("no degree check")?;
    ensure(deg.verdict == Verdict::Match && deg.computed == "116", format!("cofactor degree {}", deg.computed))?;
    ensure(cert.k_mu_coefficients.len() == 117, format!("{} coefficients of k", cert.k_mu_coefficients.len()))?;
    let agree = find("agree").ok_or("no strategy agreement check")?;
    ensure(agree.verdict == Verdict::Match, "resultant strategies disagree")?;
    ensure(seconds < 600.0, format!("runtime {seconds:.1}s"))?;
    Ok(format!("valuation 36, deg k = 116, strategies agree, pipeline {seconds:.1}s"))
}

fn criterion_3() -> Outcome {
    let report = check_derivation_consistency(&DerivationTable::case_b()).map_err(|e| e.to_string())?;
    ensure(report.residual.is_zero(), format!("residual {}", report.residual))?;
    Ok("e3-derivative of the kappa1 relation reduces to 0".into())
}

fn tangent_error(tol: f64) -> Result<(usize, f64), String> {
    let tr =
        integrate_2hopf(FrameState::on_slice(0.0, 0.0, 1.0, 0.0), Model::IdealSlice, &IntegrateOptions::new(0.7, tol))
            .map_err(|e| e.to_string())?;
    ensure(tr.stop == StopReason::RangeEnd, format!("stopped: {}", tr.stop.label()))?;
    let err = tr
        .samples
        .iter()
        .map(|s| {
            let exact = (s.s + FRAC_PI_4).tan();
            ((s.beta - exact) / exact).abs()
        })
        .fold(0.0, f64::max);
    Ok((tr.len() - 1, err))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
        let (_, err) = tangent_error(tol)?;
        ensure(err <= 10.0 * tol, format!("tol {tol:e}: max relative error {err:e}"))?;
        worst = worst.max(err / tol);
    }
    let pts = (0..9).map(|k| tangent_error(1e-6 / 2f64.powi(k))).collect::<Result<Vec<_>, _>>()?;
    let order = observed_order(&pts);
    ensure(order >= 4.0, format!("observed order {order:.2}"))?;
    Ok(format!("max error {worst:.2}*tol, observed order {order:.2}"))
}

const IDEAL_STARTS: [(f64, f64, f64); 5] =
    [(0.0, 0.5, 0.0), (0.2, -0.5, -0.1), (0.1, 1.0, 0.3), (-0.2, -1.0, 0.25), (0.5, 2.0, -0.2)];

fn ideal_trajectories() -> Result<Vec<Trajectory>, String> {
    IDEAL_STARTS
        .iter()
        .map(|&(a, b, g)| {
            integrate_2hopf(FrameState::on_slice(0.0, a, b, g), Model::IdealSlice, &IntegrateOptions::new(0.3, 1e-10))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn criterion_5(trajs: &[Trajectory]) -> Outcome {
    let table = DerivationTable::case_b();
    let mut worst: f64 = 0.0;
    for tr in trajs {
        let rep = check_trajectory(tr, &table, &Thresholds::default(), false).map_err(|e| e.to_string())?;
        ensure(rep.samples > 1, "trajectory has a single sample")?;
        ensure(rep.max_ideal_residual <= 1e-8, format!("ideal residual {:e}", rep.max_ideal_residual))?;
        worst = worst.max(rep.max_ideal_residual);
    }
    let ruled = integrate_2hopf(
        FrameState::on_slice(0.0, 0.0, 1.0, 0.0),
        Model::IdealSlice,
        &IntegrateOptions::new(0.7, 1e-10),
    )
    .map_err(|e| e.to_string())?;
    let rep = check_trajectory(&ruled, &table, &Thresholds::default(), false).map_err(|e| e.to_string())?;
    let dev = rep.reports.iter().map(|r| (r.point.delta2 - 5.0).abs()).fold(0.0, f64::max);
    ensure(dev <= 1e-10, format!("minimal ruled delta2 off by {dev:e}"))?;
    Ok(format!("{} trajectories, max ideal residual {worst:.1e}; minimal ruled |delta2 - 5| <= {dev:.1e}", trajs.len()))
}

fn criterion_6(trajs: &[Trajectory]) -> Outcome {
    let table = DerivationTable::case_b();
    let phi = PhiStructure::standard();
    let mut bad = table.clone();
    bad.set_rule(KAPPA1, Direction::E3, LaurentElement::from_poly(parse_canonical("k^2").map_err(|e| e.to_string())?));
    let muts = [
        Mutation { kappa1: 0.1, ..Default::default() },
        Mutation { kappa2: 0.1, ..Default::default() },
        Mutation { kappa3: 0.1, ..Default::default() },
    ];
    let (mut worst, mut weakest_mut, mut weakest_rule) = (0.0f64, f64::INFINITY, f64::INFINITY);
    for tr in trajs {
        for st in &tr.samples {
            let c = codazzi_at(st, &phi, &Mutation::default()).map_err(|e| e.to_string())?;
            let g = gauss_at(st, &phi, &table, &Mutation::default()).map_err(|e| e.to_string())?;
            ensure(c <= 1e-8 && g <= 1e-8, format!("residuals {c:e}, {g:e} at s = {}", st.s))?;
            worst = worst.max(c).max(g);
            for m in &muts {
                let r = codazzi_at(st, &phi, m).map_err(|e| e.to_string())?;
                ensure(r > 1e-2, format!("{m:?} gives only {r:e} at s = {}", st.s))?;
                weakest_mut = weakest_mut.min(r);
            }
            let r = gauss_at(st, &phi, &bad, &Mutation::default()).map_err(|e| e.to_string())?;
            ensure(r > 1e-2, format!("corrupted e3 rule gives only {r:e}"))?;
            weakest_rule = weakest_rule.min(r);
        }
    }
    Ok(format!(
        "max residual {worst:.1e}; weakest mutation response {weakest_mut:.3}, corrupted rule {weakest_rule:.3}"
    ))
}

fn criterion_7() -> Outcome {
    let draws = 100_000;
    let summary = inequality_monte_carlo(draws, 7, 3.0, false);
    ensure(summary.min_residual >= -1e-10, format!("min residual {:e}", summary.min_residual))?;
    let phi = PhiStructure::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (a, e1, e2) = random_equality_case(&mut rng, &phi, 3.0);
        ensure(phi.pair(&e1, &e2).abs() <= 1e-12, "equality plane is not phi-orthogonal")?;
        let r = inequality_residual(&a, &phi, &e1, &e2).map_err(|e| e.to_string())?;
        worst = worst.max(r.abs());
    }
    ensure(worst <= 1e-12, format!("equality residual {worst:e}"))?;
    Ok(format!("{draws} draws, min residual {:.3e}; equality cases within {worst:.1e}", summary.min_residual))
}

fn criterion_8() -> Outcome {
    let diff = delta2_cross_check(1000, 5, 3.0, 2000);
    ensure(diff <= 1e-6, format!("max difference {diff:e}"))?;
    Ok(format!("1000 operators, max difference {diff:.1e}"))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypersurf"))
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypersurf-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn criterion_9() -> Outcome {
    let dir = scratch();
    let mut certs = Vec::new();
    for i in 0..2 {
        let out = dir.join(format!("cert{i}.json"));
        let st = bin().args(["verify", "pipeline", "--out"]).arg(&out).output().map_err(|e| e.to_string())?;
        ensure(st.status.code() == Some(0), format!("verify exit {:?}", st.status.code()))?;
        let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        certs.push(strip_timing(&text).map_err(|e| e.to_string())?);
    }
    ensure(certs[0] == certs[1], "certificates differ outside timing fields")?;
    let mut csvs = Vec::new();
    for i in 0..2 {
        let out = dir.join(format!("traj{i}.csv"));
        let st = bin()
            .args(["integrate", "--alpha0", "0.2", "--beta0", "-0.5", "--gamma0", "-0.1", "--s-range", "0:0.3"])
            .args(["--tol", "1e-10", "--strict-sequential", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(st.status.code() == Some(0), format!("integrate exit {:?}", st.status.code()))?;
        csvs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(csvs[0] == csvs[1], "strict-sequential CSVs differ")?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("certificates identical modulo timing ({} bytes); CSVs bit-identical", certs[0].len()))
}

fn main() {
    // Respect `cargo test -- --list` style probes from tooling.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let started = Instant::now();
    let cert = full_run(StrategyChoice::Both);
    let pipeline_secs = started.elapsed().as_secs_f64();
    let trajs = ideal_trajectories();
    let results: Vec<(&str, Outcome)> = vec![
        ("pipeline golden reproduction", cert.as_ref().map_err(Clone::clone).and_then(criterion_1)),
        ("S13 valuation and degree", cert.as_ref().map_err(Clone::clone).and_then(|c| criterion_2(c, pipeline_secs))),
        ("symbolic consistency", criterion_3()),
        ("ODE closed form and order", criterion_4()),
        ("delta(2) equality on ideal trajectories", trajs.as_ref().map_err(Clone::clone).and_then(|t| criterion_5(t))),
        ("structure-equation residuals", trajs.as_ref().map_err(Clone::clone).and_then(|t| criterion_6(t))),
        ("inequality property suite", criterion_7()),
        ("delta(2) cross-check", criterion_8()),
        ("determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
