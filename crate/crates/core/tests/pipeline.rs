use std::path::Path;

use hypersurf::algebra::{BigRational, MPoly};
use hypersurf::pipeline::{
    run_pipeline, run_with_fixtures, strip_timing, Certificate, FixtureError, Fixtures, PipelineConfig, PipelineError,
    StepId, StrategyChoice, Verdict,
};
use num_traits::Zero;

fn full_run() -> Certificate {
    run_pipeline(&PipelineConfig::default()).unwrap()
}

fn copy_fixtures(to: &Path) {
    let from = Fixtures::bundled_dir();
    for sub in ["", "golden", "premises"] {
        std::fs::create_dir_all(to.join(sub)).unwrap();
        for entry in std::fs::read_dir(from.join(sub)).unwrap() {
            let entry = entry.unwrap();
            if entry.file_type().unwrap().is_file() {
                std::fs::copy(entry.path(), to.join(sub).join(entry.file_name())).unwrap();
            }
        }
    }
}

fn edit(path: &Path, from: &str, to: &str) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains(from), "{from} not in {}", path.display());
    std::fs::write(path, text.replacen(from, to, 1)).unwrap();
}

fn config(dir: &Path) -> PipelineConfig {
    PipelineConfig { fixtures_dir: dir.to_path_buf(), ..PipelineConfig::default() }
}

#[test]
fn default_run_matches_every_step() {
    let cert = full_run();
    assert_eq!(cert.steps.len(), 13);
    for s in &cert.steps {
        assert_eq!(s.verdict, Verdict::Match, "{} {:?}", s.id, s.notes);
    }
    assert_eq!(cert.overall, Verdict::Match);
    assert!(cert.culprits.is_empty());
    assert_eq!(cert.step(StepId::S8).unwrap().scalar.as_deref(), Some("-1"));
    assert_eq!(cert.step(StepId::S12).unwrap().scalar.as_deref(), Some("-4"));
    assert_eq!(cert.fixture_sha256.len(), hypersurf::pipeline::POLY_FIXTURES.len() + 1);
}

#[test]
fn displayed_factors_and_lists() {
    let cert = full_run();
    let check = |id: StepId, name: &str| {
        let s = cert.step(id).unwrap();
        s.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("{id}: no check `{name}`")).clone()
    };
    assert_eq!(check(StepId::S6, "coefficient of w^2 is p1").computed, "16*g - 4*m");
    assert_eq!(check(StepId::S7, "coefficient of w^3 is q1").computed, "88*g + 4*m");
    for i in 0..8 {
        assert_eq!(check(StepId::S8, &format!("g{i}")).verdict, Verdict::Match);
    }
    for i in 0..19 {
        assert_eq!(check(StepId::S12, &format!("h{i}")).verdict, Verdict::Match);
    }
    assert_eq!(check(StepId::S12, "constant term of h9").computed, "230400");
    assert_eq!(check(StepId::S13, "mu-adic valuation of R2").computed, "36");
    assert_eq!(check(StepId::S13, "degree of k").computed, "116");
    let dup = check(StepId::S11, "discrepancy with the literal printed text is exactly the repeated pair");
    assert_eq!((dup.verdict, dup.computed.as_str()), (Verdict::Info, "true"));
    assert_eq!(cert.step(StepId::S9).unwrap().golden.as_deref(), Some("208*b^2*m + 9*m^3 + 72*m"));
}

#[test]
fn k_mu_agrees_with_independent_reference() {
    let cert = full_run();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/k_mu_reference.txt")).unwrap();
    let reference: Vec<BigRational> =
        text.lines().filter(|l| !l.starts_with('#')).map(|l| BigRational::from_integer(l.parse().unwrap())).collect();
    let ours: Vec<BigRational> = cert.k_mu_coefficients.iter().map(|c| c.parse().unwrap()).collect();
    assert_eq!(ours.len(), 117);
    assert_eq!(reference.len(), 117);
    let s = &ours[0] / &reference[0];
    assert!(!s.is_zero());
    for (a, b) in ours.iter().zip(&reference) {
        assert_eq!(a, &(b * &s));
    }
}

#[test]
fn strategies_give_identical_certificates() {
    let a = run_pipeline(&PipelineConfig { strategy: StrategyChoice::Sylvester, ..PipelineConfig::default() }).unwrap();
    let b = run_pipeline(&PipelineConfig { strategy: StrategyChoice::Interp, ..PipelineConfig::default() }).unwrap();
    for (x, y) in a.steps.iter().zip(&b.steps) {
        assert_eq!(x.computed, y.computed, "{}", x.id);
        assert_eq!(x.scalar, y.scalar);
    }
    assert_eq!(a.k_mu_coefficients, b.k_mu_coefficients);
}

#[test]
fn certificate_is_deterministic() {
    let a = full_run().to_json();
    let b = full_run().to_json();
    assert_eq!(strip_timing(&a).unwrap(), strip_timing(&b).unwrap());
}

#[test]
fn step_selection_runs_dependencies_only() {
    let cert = run_pipeline(&PipelineConfig { steps: Some(vec![StepId::S8]), ..PipelineConfig::default() }).unwrap();
    let ids: Vec<StepId> = cert.steps.iter().map(|s| s.id).collect();
    assert_eq!(ids, vec![StepId::S1, StepId::S4, StepId::S5, StepId::S6, StepId::S7, StepId::S8]);
    assert_eq!(cert.overall, Verdict::Match);
    assert!(cert.k_mu_coefficients.is_empty());
}

#[test]
fn mutated_golden_names_the_culprit() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    edit(&dir.path().join("golden/g3.poly"), "1016*m^3", "1017*m^3");
    let cert = run_pipeline(&config(dir.path())).unwrap();
    assert_eq!(cert.overall, Verdict::Mismatch);
    assert_eq!(cert.culprits, vec![StepId::S8]);
    let s8 = cert.step(StepId::S8).unwrap();
    let g3 = s8.checks.iter().find(|c| c.name == "g3").unwrap();
    assert_eq!(g3.verdict, Verdict::Mismatch);
}

#[test]
fn corrupted_premise_constant_breaks_s1() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    edit(&dir.path().join("premises/codazzi_kappa1_kappa3.poly"), "g^2 - 1)", "g^2 - 2)");
    let cert = run_pipeline(&PipelineConfig { steps: Some(vec![StepId::S1]), ..config(dir.path()) }).unwrap();
    assert_eq!(cert.step(StepId::S1).unwrap().verdict, Verdict::Mismatch);
}

#[test]
fn sign_flipped_cd8_breaks_s2() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    edit(&dir.path().join("premises/codazzi_e3_mu_minus_gamma.poly"), "- b*(k3", "+ b*(k3");
    let cert = run_pipeline(&PipelineConfig { steps: Some(vec![StepId::S2]), ..config(dir.path()) }).unwrap();
    let s2 = cert.step(StepId::S2).unwrap();
    assert_eq!(s2.verdict, Verdict::Mismatch);
    assert_eq!(cert.culprits, vec![StepId::S2]);
}

#[test]
fn corrupted_table_aborts_or_mismatches_downstream() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    edit(&dir.path().join("derivation_case_b.tbl"), "k e3: k^2 + g^2 + 3*g*m + 4", "k e3: k^2");
    let fx = Fixtures::load(dir.path()).unwrap();
    let cert = run_with_fixtures(&fx, &PipelineConfig { steps: Some(vec![StepId::S6]), ..config(dir.path()) });
    assert_eq!(cert.step(StepId::S5).unwrap().verdict, Verdict::Mismatch);
    assert_eq!(cert.overall, Verdict::Mismatch);
}

#[test]
fn missing_and_corrupt_fixtures_are_configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    std::fs::remove_file(dir.path().join("golden/h18.poly")).unwrap();
    assert!(matches!(run_pipeline(&config(dir.path())), Err(PipelineError::Fixture(FixtureError::Missing { .. }))));

    copy_fixtures(dir.path());
    edit(&dir.path().join("golden/p1.poly"), "16*g", "16*q");
    assert!(matches!(run_pipeline(&config(dir.path())), Err(PipelineError::Fixture(FixtureError::Corrupt { .. }))));
}

#[test]
fn computed_polynomials_are_exposed() {
    let cert = run_pipeline(&PipelineConfig { steps: Some(vec![StepId::S4]), ..PipelineConfig::default() }).unwrap();
    let s4 = cert.step(StepId::S4).unwrap();
    let p: &MPoly = s4.computed_poly.as_ref().unwrap();
    assert_eq!(p.to_string(), s4.computed);
}
