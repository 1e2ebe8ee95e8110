use std::f64::consts::FRAC_PI_4;

use hypersurf::derivation::DerivationTable;
use hypersurf_geometry::*;
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = ShapeOp> {
    prop::array::uniform6(-3.0f64..3.0)
        .prop_map(|v| ShapeOp(Matrix3::new(v[0], v[1], v[2], v[1], v[3], v[4], v[2], v[4], v[5])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn curvature_symmetries_and_bianchi(a in shape()) {
        let t = CurvatureTensor::from_gauss(&a, &PhiStructure::standard()).r;
        for i in 0..3 { for j in 0..3 { for k in 0..3 { for l in 0..3 {
            let v = t[i][j][k][l];
            prop_assert!((v + t[j][i][k][l]).abs() < 1e-12);
            prop_assert!((v + t[i][j][l][k]).abs() < 1e-12);
            prop_assert!((v - t[k][l][i][j]).abs() < 1e-12);
            prop_assert!((v + t[j][k][i][l] + t[k][i][j][l]).abs() < 1e-12);
        }}}}
    }

    #[test]
    fn delta2_equals_tau_minus_min_plane_curvature(a in shape()) {
        let phi = PhiStructure::standard();
        prop_assert!((pointwise(&a, &phi).delta2 - delta2_plane_grid(&a, &phi, 10_000)).abs() < 1e-6);
    }

    #[test]
    fn slice_is_preserved(alpha in -1.0f64..1.0, beta in prop_oneof![-2.0f64..-0.3, 0.3f64..2.0], gamma in -1.0f64..1.0) {
        let tol = 1e-9;
        let tr = integrate_2hopf(FrameState::on_slice(0.0, alpha, beta, gamma), Model::IdealSlice, &IntegrateOptions::new(0.2, tol)).unwrap();
        prop_assert!(tr.samples.iter().all(|s| s.slice_defect().abs() <= 10.0 * tol));
        prop_assert!(tr.samples.windows(2).all(|w| w[1].s > w[0].s));
    }
}

fn tangent_error(tol: f64, s_end: f64) -> (usize, f64) {
    let tr = integrate_2hopf(
        FrameState::on_slice(0.0, 0.0, 1.0, 0.0),
        Model::IdealSlice,
        &IntegrateOptions::new(s_end, tol),
    )
    .unwrap();
    assert_eq!(tr.stop, StopReason::RangeEnd);
    let err = tr
        .samples
        .iter()
        .map(|s| {
            let exact = (s.s + FRAC_PI_4).tan();
            ((s.beta - exact) / exact).abs()
        })
        .fold(0.0, f64::max);
    (tr.len() - 1, err)
}

#[test]
fn tangent_accuracy_and_order() {
    for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
        let (_, err) = tangent_error(tol, 0.7);
        assert!(err <= 10.0 * tol, "tol {tol:e}: {err:e}");
    }
    let pts: Vec<_> = (0..9).map(|k| tangent_error(1e-6 / 2f64.powi(k), 0.7)).collect();
    assert!(observed_order(&pts) >= 4.0, "{pts:?}");
}

#[test]
fn ideal_trajectories_pass() {
    let table = DerivationTable::case_b();
    for (a, b, g) in [(0.0, 0.5, 0.0), (0.2, -0.5, -0.1), (0.1, 1.0, 0.3), (-0.2, -1.0, 0.25), (0.5, 2.0, -0.2)] {
        let tr =
            integrate_2hopf(FrameState::on_slice(0.0, a, b, g), Model::IdealSlice, &IntegrateOptions::new(0.3, 1e-10))
                .unwrap();
        let rep = check_trajectory(&tr, &table, &Thresholds::default(), false).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{a} {b} {g}");
    }
}

#[test]
fn off_slice_fails_ideality() {
    let start = FrameState { s: 0.0, alpha: 0.0, beta: 1.0, gamma: 0.0, mu: 0.0 };
    let tr = integrate_2hopf(start, Model::FreeMu { mu_rate: 1.0 }, &IntegrateOptions::new(0.3, 1e-10)).unwrap();
    let rep = check_trajectory(&tr, &DerivationTable::case_b(), &Thresholds::default(), true).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!(rep.max_ideal_residual > 1e-8);
}

#[test]
fn mutations_are_detected() {
    let phi = PhiStructure::standard();
    let table = DerivationTable::case_b();
    let tr = integrate_2hopf(
        FrameState::on_slice(0.0, 0.1, 1.0, 0.3),
        Model::IdealSlice,
        &IntegrateOptions::new(0.3, 1e-10),
    )
    .unwrap();
    let muts = [
        Mutation { kappa1: 0.1, ..Default::default() },
        Mutation { kappa2: 0.1, ..Default::default() },
        Mutation { kappa3: 0.1, ..Default::default() },
    ];
    for st in &tr.samples {
        for m in &muts {
            assert!(codazzi_at(st, &phi, m).unwrap() > 1e-2, "{m:?} at {st:?}");
        }
    }
    let mut bad = table.clone();
    bad.set_rule(
        hypersurf::algebra::KAPPA1,
        hypersurf::derivation::Direction::E3,
        hypersurf::algebra::LaurentElement::from_poly(hypersurf::algebra::parse_canonical("k^2").unwrap()),
    );
    for i in 0..tr.len() {
        assert!(gauss_residual(&tr, i, &bad).unwrap() > 1e-2);
        assert!(gauss_residual(&tr, i, &table).unwrap() <= 1e-8);
        assert!(codazzi_residual(&tr, i).unwrap() <= 1e-8);
    }
}

#[test]
fn strict_sequential_csv_is_reproducible() {
    let table = DerivationTable::case_b();
    let render = |seq: bool| {
        let tr = integrate_2hopf(
            FrameState::on_slice(0.0, 0.2, -0.5, -0.1),
            Model::IdealSlice,
            &IntegrateOptions::new(0.3, 1e-10),
        )
        .unwrap();
        let rep = check_trajectory(&tr, &table, &Thresholds::default(), seq).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rep.reports).unwrap();
        buf
    };
    assert_eq!(render(true), render(true));
    assert_eq!(render(true), render(false));
}

#[test]
fn plane_normals_cover_the_sphere() {
    let pts = fibonacci_sphere(10_000);
    assert_eq!(pts.len(), 10_000);
    assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    let mean: Vector3<f64> = pts.iter().sum::<Vector3<f64>>() / 10_000.0;
    assert!(mean.norm() < 1e-3);
}
