use tlms::bjorling::{solve_bjorling, DegeneracyPolicy};
use tlms::geometry::{Annulus, LVec3, SplitCurve, Surface};
use tlms::interpolate::{minimality_conditions, point_interpolant};
use tlms::series::{LaurentMap, SplitFourierSeries};
use tlms::split::SplitComplex;
use tlms::verify::{
    boundary_report, fd_conformality, fd_wave_residual, metric_scan, verify_surface, Grid,
    SurfaceClass, VerifyConfig, DEFAULT_DELTA, DEFAULT_DET_TOL,
};

const K: SplitComplex = SplitComplex::K;

fn null_helix() -> SplitCurve {
    SplitCurve::new(
        SplitFourierSeries::from_coeffs([(1, K)]),
        SplitFourierSeries::winding_only(SplitComplex::ONE),
    )
    .unwrap()
}

fn stretched_tangent() -> SplitCurve {
    SplitCurve::new(
        SplitFourierSeries::from_coeffs([(0, SplitComplex::real(0.5)), (2, SplitComplex::real(0.5))]),
        SplitFourierSeries::from_coeffs([(1, SplitComplex::real(0.5)), (-1, SplitComplex::real(0.5))]),
    )
    .unwrap()
}

fn closed_form() -> Surface {
    let gamma = null_helix();
    solve_bjorling(&gamma, &gamma.derivative(), DegeneracyPolicy::Warn)
        .unwrap()
        .surface
}

fn nondegenerate() -> Surface {
    solve_bjorling(&null_helix(), &stretched_tangent(), DegeneracyPolicy::Error)
        .unwrap()
        .surface
}

#[test]
fn wave_residual_examples() {
    let flat = Surface::flat_plane();
    let g = Grid::default_for(&flat, 33, 33).unwrap();
    assert!(fd_wave_residual(&flat, &g, 1e-3).unwrap() < 1e-8);

    let square = Surface::new(
        LaurentMap::zero().with_a(2, SplitComplex::ONE),
        LaurentMap::zero(),
        Annulus::standard(),
    )
    .unwrap();
    // the stencil is exact on z^2; what remains is rounding, about ε·|F|/Δ²
    let scale = square.eval(std::f64::consts::E, 2.0).unwrap().mag();
    assert!(fd_wave_residual(&square, &g, 1e-3).unwrap() <= 16.0 * f64::EPSILON * scale / 1e-6);

    let s = nondegenerate();
    let g = Grid::default_for(&s, 33, 33).unwrap();
    assert!(fd_wave_residual(&s, &g, 1e-3).unwrap() <= 1e-5);
}

#[test]
fn conformality_examples() {
    let flat = Surface::flat_plane();
    let g = Grid::default_for(&flat, 9, 17).unwrap();
    let (conf, cross) = fd_conformality(&flat, &g, DEFAULT_DELTA).unwrap();
    assert!(conf < 1e-10 && cross < 1e-10);

    let tilted = Surface::new(
        LaurentMap::identity(),
        LaurentMap::zero()
            .with_a(1, SplitComplex::real(0.5))
            .with_b(-1, SplitComplex::real(0.5)),
        Annulus::standard(),
    )
    .unwrap();
    let (conf, _) = fd_conformality(&tilted, &g, DEFAULT_DELTA).unwrap();
    assert!((conf - 1.0).abs() < 1e-6);
}

#[test]
fn bjorling_outputs_are_conformal_at_default_step() {
    let mut worst = Vec::new();
    for s in [closed_form(), nondegenerate()] {
        let cfg = VerifyConfig::default_for(&s).unwrap();
        let (conf, cross) = fd_conformality(&s, &cfg.grid, DEFAULT_DELTA).unwrap();
        worst.push((conf, cross));
    }
    assert!(
        worst.iter().all(|&(c, x)| c <= 1e-6 && x <= 1e-6),
        "(conformal, cross) per surface: {worst:?}"
    );
}

#[test]
fn conformality_converges_at_second_order() {
    let s = nondegenerate();
    let g = Grid::default_for(&s, 17, 33).unwrap();
    let values: Vec<f64> = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
        .iter()
        .map(|&d| fd_conformality(&s, &g, d).unwrap().0)
        .collect();
    for w in values.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..=4.5).contains(&ratio), "ratios from {values:?}");
    }
}

#[test]
fn nonminimal_surface_has_visible_conformal_defect() {
    let gamma = SplitCurve::new(
        SplitFourierSeries::from_coeffs([(1, SplitComplex::ONE)]),
        SplitFourierSeries::from_coeffs([(1, K * 0.5), (-1, K * -0.5)]),
    )
    .unwrap();
    let s = point_interpolant(&gamma, LVec3::ZERO, 2.0).unwrap();
    let (_, norm) = minimality_conditions(&s);
    assert!(norm > 0.1, "symbolic residual {norm}");
    let g = Grid::default_for(&s, 17, 33).unwrap();
    let (conf, cross) = fd_conformality(&s, &g, DEFAULT_DELTA).unwrap();
    assert!(conf.max(cross) > 0.01);
}

#[test]
fn metric_scan_examples() {
    let flat = Surface::flat_plane();
    let g = Grid::default_for(&flat, 9, 17).unwrap();
    let scan = metric_scan(&flat, &g, DEFAULT_DELTA, DEFAULT_DET_TOL).unwrap();
    assert_eq!(scan.classification, SurfaceClass::Timelike);
    assert!((scan.det_min + 1.0).abs() < 1e-6 && (scan.det_max + 1.0).abs() < 1e-6);

    let s = closed_form();
    let g = Grid::default_for(&s, 9, 17).unwrap();
    let scan = metric_scan(&s, &g, DEFAULT_DELTA, DEFAULT_DET_TOL).unwrap();
    assert_eq!(scan.classification, SurfaceClass::Degenerate);
    assert_eq!(scan.singular_points.len(), g.len());

    let s = nondegenerate();
    let g = Grid::default_for(&s, 9, 17).unwrap();
    let scan = metric_scan(&s, &g, DEFAULT_DELTA, DEFAULT_DET_TOL).unwrap();
    assert_eq!(scan.classification, SurfaceClass::Mixed);
    let on_unit: Vec<_> = g.points().filter(|&(rho, _)| rho == 1.0).collect();
    assert_eq!(on_unit.len(), 17);
    for p in on_unit {
        assert!(scan.singular_points.contains(&p), "{p:?} not singular");
    }
}

#[test]
fn boundary_report_examples() {
    let gamma = null_helix();
    let s = closed_form();
    let rep = boundary_report(&s, &gamma, Some(&gamma.derivative()), (-2.0, 2.0), 401, 1e-4).unwrap();
    assert!(rep.position <= 1e-12);
    assert!(rep.drho.unwrap() <= 1e-6);

    let rep = boundary_report(&nondegenerate(), &gamma, Some(&stretched_tangent()), (-2.0, 2.0), 401, 1e-4)
        .unwrap();
    assert!(rep.position <= 1e-8);
    assert!(rep.drho.unwrap() <= 1e-6);

    let flat = Surface::flat_plane();
    let own = flat.restrict_rho(1.0).unwrap();
    let rep = boundary_report(&flat, &own, None, (-2.0, 2.0), 401, 1e-4).unwrap();
    assert_eq!(rep.position, 0.0);
    assert_eq!(rep.drho, None);
}

#[test]
fn report_is_deterministic_and_well_formed() {
    let s = nondegenerate();
    let cfg = VerifyConfig::default_for(&s).unwrap();
    let a = verify_surface(&s, &cfg).unwrap();
    let b = verify_surface(&s, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.wave_residual_max >= 0.0 && a.conformal_residual_max >= 0.0);
    let points: Vec<_> = cfg.grid.points().collect();
    assert!(a.singular_points.iter().all(|p| points.contains(p)));
}

#[test]
fn grid_outside_domain_is_rejected() {
    let s = nondegenerate();
    let g = Grid::log_uniform((0.1, 1.0), 5, (-1.0, 1.0), 5).unwrap();
    assert!(matches!(
        fd_conformality(&s, &g, DEFAULT_DELTA),
        Err(tlms::Error::GridOutsideDomain(_))
    ));
}
