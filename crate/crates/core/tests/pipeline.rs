use jspectral::generate::generate_instance;
use jspectral::pipeline::{
    factorize, factorize_with_known, plan, recursive_factorize, sweep_orders, truncate_tails,
    PipelineConfig,
};
use jspectral::triangular::{triangular_j_factorize, SeriesWindow};
use jspectral::{fixtures, Error, LaurentPoly, MatrixLaurent, Signature};

#[test]
fn truncation_windows_grow_with_distance_from_diagonal() {
    let inst = generate_instance(&Signature::parse("+-+").unwrap(), 2, 1).unwrap();
    let cfg = PipelineConfig::new(6);
    let (grid, window) = plan(&inst.s, &cfg).unwrap();
    let tri = triangular_j_factorize(&inst.s, grid, window).unwrap();
    let m_n = truncate_tails(&tri, 6).unwrap();
    assert_eq!(m_n.get(2, 0).lowest(), -12);
    assert_eq!(m_n.get(2, 1).lowest(), -6);
    assert_eq!(m_n.get(1, 0).lowest(), -6);
    for i in 0..3 {
        assert_eq!(m_n.get(i, i), tri.m.get(i, i));
        for j in (i + 1)..3 {
            assert!(m_n.get(i, j).is_zero());
        }
    }
}

#[test]
fn polynomial_triangular_factor_is_unchanged() {
    let s = MatrixLaurent::identity(2);
    let cfg = PipelineConfig::new(3);
    let (grid, window) = plan(&s, &cfg).unwrap();
    let tri = triangular_j_factorize(&s, grid, window).unwrap();
    assert_eq!(truncate_tails(&tri, 3).unwrap(), tri.m);
}

#[test]
fn window_shortfall_is_reported() {
    let s = fixtures::singular_example();
    let window = SeriesWindow { negative: 4, positive: 40 };
    let tri = triangular_j_factorize(&s, 512, window).unwrap();
    assert!(matches!(
        truncate_tails(&tri, 5),
        Err(Error::WindowExceedsData { stored: -4, required: -5 })
    ));
}

#[test]
fn stage_invariant_and_block_structure() {
    let inst = generate_instance(&Signature::parse("-+-+").unwrap(), 2, 4).unwrap();
    let cfg = PipelineConfig::new(12);
    let (grid, window) = plan(&inst.s, &cfg).unwrap();
    let tri = triangular_j_factorize(&inst.s, grid, window).unwrap();
    let m_n = truncate_tails(&tri, 12).unwrap();
    let out = recursive_factorize(&m_n, &tri.signature, &cfg, grid, window.positive).unwrap();
    assert_eq!(out.per_step.len(), 3);
    for (k, step) in out.per_step.iter().enumerate() {
        assert_eq!(step.stage, k + 2);
        assert_eq!(step.degree, (k + 1) * 12);
        assert!(step.stage_residual < 1e-12);
        assert!(step.junitarity_defect < 1e-10);
    }
    for e in out.q.entries() {
        assert!(e.max_abs_negative() < 1e-9 * out.q.max_abs());
    }
}

#[test]
fn identity_factor_is_identity() {
    let res = factorize(&MatrixLaurent::identity(3), &PipelineConfig::new(1)).unwrap();
    assert!(res.factor.max_diff(&MatrixLaurent::identity(3)).unwrap() < 1e-14);
    assert_eq!(res.signature, Signature::identity(3));
}

#[test]
fn error_decreases_with_order() {
    let s = fixtures::singular_example();
    let rows = sweep_orders(&s, &[5, 10, 53], &PipelineConfig::default());
    assert!(rows[0].residual > rows[1].residual);
    assert!(rows[1].residual > rows[2].residual);
    assert!(rows[2].residual <= 1e-12);
    assert!(rows.iter().all(|r| r.error.is_none()));
}

#[test]
fn exact_factor_and_canonical_form() {
    let s = fixtures::singular_example();
    let known = fixtures::singular_example_factor();
    let res = factorize_with_known(&s, &PipelineConfig::new(53), Some(&known)).unwrap();
    let k = res.report.known.as_ref().unwrap();
    assert!(k.coefficient_error < 1e-12);
    assert!(res.report.causality_leakage < 1e-9);
    assert_eq!(res.report.boundary_roots, 2);
    assert_eq!(res.report.interior_roots, 0);
    assert!(res.factor.highest() <= 53 + 1);

    let (canon, sig) = res.canonical();
    assert_eq!(sig.signs(), &[1, -1]);
    assert_eq!(canon.get(1, 0), res.factor.get(1, 1));
}

#[test]
fn tiny_grid_degrades_without_aborting() {
    let s = fixtures::singular_example();
    let cfg = PipelineConfig {
        grid_size: Some(64),
        ..PipelineConfig::new(20)
    };
    let rows = sweep_orders(&s, &[20], &cfg);
    assert_eq!(rows.len(), 1);
    let good = sweep_orders(&s, &[20], &PipelineConfig::new(20));
    assert!(rows[0].residual.is_nan() || rows[0].residual > good[0].residual);
}

#[test]
fn inconstant_signs_are_rejected() {
    let s = MatrixLaurent::new(
        2,
        2,
        vec![
            LaurentPoly::from_real(-1, &[1.0, 0.0, 1.0]),
            LaurentPoly::zero(),
            LaurentPoly::zero(),
            LaurentPoly::one(),
        ],
    )
    .unwrap();
    assert!(matches!(
        factorize(&s, &PipelineConfig::new(4)),
        Err(Error::InconstantSign { minor: 1, .. })
    ));
}
