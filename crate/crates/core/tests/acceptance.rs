//! Acceptance suite: one test per release criterion, each printing a
//! single PASS line (visible with `--nocapture`). Everything here is
//! exact except the two seeded finite-difference residual checks, whose
//! tolerances are fixed constants of the crate.
//!
//! Run with: `cargo test -p cosym-core --test acceptance`

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cosym_core::cosymplectic::{
    basic_closed_one_forms, cosymplectic_vector_space, deform_type_i, deform_type_ii,
    splitting_obstruction, verify_cosymplectic, CosymplecticPair,
};
use cosym_core::model::load_model;
use cosym_core::scalar::{rat, rat_int, Rational, SymbolicReal};
use cosym_core::scenario::{run_scenario, RunOptions, StepStatus};
use cosym_core::topology::{
    basic_betti, fibration_check, finite_order, k_cosymplectic_obstruction_torus,
    poincare_from_fixed, rationalize_class, toric_betti_check, wang_betti, BasicBetti,
    FixedCircleSet, IntMatrix, MappingTorus, MatrixOrder, Rationalization,
};
use cosym_core::toric::{
    closed_reeb_orbit_count, dense_subgroup_check, moment_condition_residual, moment_rescale,
    orbit_isotropy_residual, MomentModel, ReebOrbits,
};
use cosym_core::{Form, LieAlgebra, Vector};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn sr(x: i64) -> SymbolicReal {
    SymbolicReal::from_rational(rat_int(x))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-2..=2), 1)
}

/// Criterion 1: over ≥100 random bracket tables (dim ≤ 6, coefficients in
/// −2..2), the Jacobi check agrees with exhaustive d∘d = 0 on all basis
/// forms of all degrees; exact, zero tolerance.
#[test]
fn criterion_01_jacobi_iff_d_squared_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut holds_count = 0usize;
    let mut fails_count = 0usize;
    let mut tables = 0usize;
    while tables < 120 {
        let dim = rng.random_range(2..=6usize);
        // sparse random table: a few brackets with random targets
        let entries = rng.random_range(0..=4usize);
        let mut brackets = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..entries {
            let i = rng.random_range(0..dim - 1);
            let j = rng.random_range(i + 1..dim);
            if !seen.insert((i, j)) {
                continue;
            }
            let mut coeffs = Vec::new();
            for k in 0..dim {
                let c = random_rational(&mut rng);
                if !c.is_zero() {
                    coeffs.push((k, c));
                }
            }
            brackets.push((i, j, coeffs));
        }
        let Ok(algebra) = LieAlgebra::new(dim, brackets) else {
            continue;
        };
        tables += 1;
        let jacobi = algebra.jacobi_check().holds;
        // exhaustive d² over every basis form of every degree
        let mut d_squared_zero = true;
        'subsets: for mask in 0u32..(1 << dim) {
            let indices: Vec<usize> = (0..dim).filter(|&b| mask & (1 << b) != 0).collect();
            let form = Form::basis(dim, &indices).unwrap();
            let dd = algebra.d(&algebra.d(&form).unwrap()).unwrap();
            if !dd.is_zero() {
                d_squared_zero = false;
                break 'subsets;
            }
        }
        assert_eq!(
            jacobi, d_squared_zero,
            "jacobi_check and d² disagree on a dim-{dim} table"
        );
        if jacobi {
            holds_count += 1;
        } else {
            fails_count += 1;
        }
    }
    assert!(
        holds_count > 0 && fails_count > 0,
        "need both outcomes to be exercised"
    );
    println!(
        "acceptance 1 (Jacobi ⟺ d²=0 on {tables} random tables, {holds_count} valid / {fails_count} invalid): PASS"
    );
}

fn load_pair(path: &str) -> CosymplecticPair {
    let model = load_model(fixture(path)).unwrap();
    CosymplecticPair::new(
        model.lie_algebra.clone().unwrap(),
        model.forms["eta"].clone(),
        model.forms["omega"].clone(),
    )
    .unwrap()
}

/// Criterion 2: the flat and Heisenberg-based fixtures verify as
/// cosymplectic with Reeb field e₅ and a split algebra; exact.
#[test]
fn criterion_02_flat_and_heisenberg_models() {
    for name in ["r5_flat.json", "h3_r2.json"] {
        let model = load_model(fixture(name)).unwrap();
        let g = model.lie_algebra.clone().unwrap();
        let verdict = verify_cosymplectic(&g, &model.forms["eta"], &model.forms["omega"]).unwrap();
        assert!(verdict.is_cosymplectic, "{name} must verify");
        let pair =
            CosymplecticPair::new(g, model.forms["eta"].clone(), model.forms["omega"].clone())
                .unwrap();
        assert_eq!(pair.reeb(), &Vector::basis(5, 4), "{name} Reeb field");
        assert!(
            splitting_obstruction(&pair).unwrap().splits,
            "{name} splitting"
        );
        // the bundled scenario agrees
        let report = run_scenario(&model, RunOptions::default());
        assert!(
            report.overall_pass,
            "{name} scenario:\n{}",
            report.to_text()
        );
    }
    println!("acceptance 2 (flat and Heisenberg fixtures: verify, Reeb = e₅, splits): PASS");
}

/// Criterion 3: ≥200 randomized type I deformations per fixture preserve
/// the structure and satisfy the exact volume law; ≥200 type II
/// deformations preserve the structure and the Reeb field exactly.
#[test]
fn criterion_03_deformation_closure_and_volume_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["r5_flat.json", "h3_r2.json"] {
        let pair = load_pair(name);
        let theta_basis = cosymplectic_vector_space(&pair).unwrap();
        let beta_basis = basic_closed_one_forms(&pair).unwrap();
        let input_volume = pair.volume().unwrap();
        for _ in 0..200 {
            // random cosymplectic field, rescaled into the admissible range
            let mut theta = Vector::zero(5);
            for v in &theta_basis {
                theta = theta.add(&v.scale(&random_rational(&mut rng))).unwrap();
            }
            let eta_theta = pair.eta().pair(&theta).unwrap().as_rational().unwrap();
            if (Rational::one() + &eta_theta) <= Rational::zero() {
                let shrink = (eta_theta.abs() * rat_int(2)).recip();
                theta = theta.scale(&shrink);
            }
            let record = deform_type_i(&pair, &theta).unwrap();
            let scale = Rational::one() + pair.eta().pair(&theta).unwrap().as_rational().unwrap();
            let mut expected_scale = Rational::one();
            for _ in 0..=pair.n() {
                expected_scale *= scale.recip();
            }
            assert_eq!(record.volume_scale, expected_scale);
            assert_eq!(
                record.output.volume().unwrap(),
                input_volume.scale(&expected_scale),
                "volume law must hold exactly"
            );
        }
        for _ in 0..200 {
            let mut beta = Form::zero(5, 1);
            for b in &beta_basis {
                beta = beta.add(&b.scale(&random_rational(&mut rng))).unwrap();
            }
            let record = deform_type_ii(&pair, &beta).unwrap();
            assert_eq!(
                record.output.reeb(),
                pair.reeb(),
                "type II preserves the Reeb field"
            );
            assert_eq!(record.output.omega(), pair.omega());
        }
    }
    println!(
        "acceptance 3 (200 type I + 200 type II deformations per fixture, exact closure): PASS"
    );
}

/// Criterion 4: Wang with identity gluing over CP¹, CP², CP¹×CP¹ passes
/// the toric Betti relations and matches the Poincaré polynomial from the
/// stated fixed-circle indices; exact.
#[test]
fn criterion_04_betti_relations() {
    let cases: [(&str, Vec<usize>, Vec<usize>); 3] = [
        ("CP^1", vec![1, 0, 1], vec![0, 2]),
        ("CP^2", vec![1, 0, 1, 0, 1], vec![0, 2, 4]),
        ("CP^1 x CP^1", vec![1, 0, 2, 0, 1], vec![0, 2, 2, 4]),
    ];
    for (label, fiber, indices) in cases {
        let torus = MappingTorus::identity_gluing(fiber, label).unwrap();
        let betti = wang_betti(&torus);
        assert!(
            toric_betti_check(&betti).unwrap().ok,
            "{label}: toric relations"
        );
        let poincare = poincare_from_fixed(&FixedCircleSet::new(indices).unwrap());
        assert_eq!(betti, poincare, "{label}: Wang vs Poincaré polynomial");
    }
    println!("acceptance 4 (Betti relations b_2k = b_2k+1 over CP¹, CP², CP¹×CP¹): PASS");
}

/// Criterion 5: the hyperbolic gluing matrix admits no K-cosymplectic
/// metric; the quarter rotation has order 4; the unipotent shear has
/// infinite order; exact.
#[test]
fn criterion_05_k_cosymplectic_obstruction() {
    let hyperbolic = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    assert_eq!(finite_order(&hyperbolic).unwrap(), MatrixOrder::Infinite);
    assert!(
        k_cosymplectic_obstruction_torus(&hyperbolic)
            .unwrap()
            .no_k_metric
    );
    let rotation = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
    assert_eq!(finite_order(&rotation).unwrap(), MatrixOrder::Finite(4));
    let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
    assert_eq!(finite_order(&shear).unwrap(), MatrixOrder::Infinite);
    assert!(
        k_cosymplectic_obstruction_torus(&shear)
            .unwrap()
            .no_k_metric
    );
    println!("acceptance 5 (K-cosymplectic obstruction: hyperbolic/rotation/shear): PASS");
}

/// Criterion 6: the deformed product model pipeline: deforming by
/// ε₁x₁+ε₂x₂ with declared-independent symbols defeats the fibration
/// criterion while the momentum image stays the exact standard simplex,
/// and the rationalization recovers coefficients (−1, −1).
#[test]
fn criterion_06_deformed_product_pipeline() {
    let model = load_model(fixture("example_105.json")).unwrap();
    let report = run_scenario(&model, RunOptions::default());
    assert!(report.overall_pass, "{}", report.to_text());
    assert!(report.steps.iter().all(|s| s.status == StepStatus::Pass));
    // direct library-level checks of the same pipeline
    let pc = model.periods["eta_prime"].clone();
    let verdict = fibration_check(&pc).unwrap();
    assert!(!verdict.rational_multiple_of_integer_class);
    let gens = [model.periods["gen1"].clone(), model.periods["gen2"].clone()];
    match rationalize_class(&pc, &gens).unwrap() {
        Rationalization::Feasible {
            coefficients,
            new_periods,
        } => {
            assert_eq!(coefficients, vec![rat_int(-1), rat_int(-1)]);
            assert!(
                fibration_check(&new_periods)
                    .unwrap()
                    .rational_multiple_of_integer_class
            );
        }
        Rationalization::Infeasible => panic!("rationalization must be feasible"),
    }
    let simplex = MomentModel::cpn(2).unwrap();
    assert_eq!(
        simplex.vertices(),
        &[
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)]
        ]
    );
    println!("acceptance 6 (type II pipeline: fibration false, simplex unchanged, coefficients (−1,−1)): PASS");
}

/// Criterion 7: the basic-cohomology recursion kills all odd degrees on
/// the product models, and the forward recursion reproduces the input.
#[test]
fn criterion_07_basic_cohomology() {
    for b in [vec![1, 1], vec![1, 1, 1, 1], vec![1, 1, 1, 1, 1, 1]] {
        match basic_betti(&b).unwrap() {
            BasicBetti::Consistent(basic) => {
                for (p, &value) in basic.iter().enumerate() {
                    if p % 2 == 1 {
                        assert_eq!(value, 0, "odd basic Betti numbers vanish");
                    }
                }
                let mut rebuilt = Vec::new();
                for p in 0..basic.len() {
                    rebuilt.push(basic[p] + if p > 0 { basic[p - 1] } else { 0 });
                }
                assert_eq!(rebuilt, b, "round trip is exact");
            }
            BasicBetti::Inconsistent { .. } => panic!("product models are consistent"),
        }
    }
    println!("acceptance 7 (basic cohomology: odd degrees vanish, exact round trip): PASS");
}

/// Criterion 8: the momentum identity dμ^A = ι_Āω holds to < 1e−6 under
/// central finite differences for n = 1, 2 with two coefficient choices
/// each, and the orbit-isotropy pairing stays below 1e−9.
#[test]
fn criterion_08_momentum_identity_residuals() {
    let cases: [(usize, Vec<i64>); 4] = [
        (1, vec![1]),
        (1, vec![-3]),
        (2, vec![1, 0]),
        (2, vec![1, -1]),
    ];
    for (n, a) in &cases {
        let record = moment_condition_residual(*n, a, 100, 42).unwrap();
        assert!(
            record.max_residual < 1e-6,
            "n={n}, A={a:?}: residual {}",
            record.max_residual
        );
    }
    let iso1 = orbit_isotropy_residual(2, &[1, 0], &[0, 1], 100, 42).unwrap();
    let iso2 = orbit_isotropy_residual(2, &[2, -3], &[1, 4], 100, 42).unwrap();
    assert!(
        iso1 < 1e-9 && iso2 < 1e-9,
        "isotropy residuals {iso1}, {iso2}"
    );
    println!("acceptance 8 (momentum identity < 1e−6, orbit isotropy < 1e−9): PASS");
}

/// Criterion 9: η₀(θ) = 1 halves every simplex vertex exactly, and
/// successive rescalings compose by (1+s)(1+s′)−1.
#[test]
fn criterion_09_momentum_rescaling() {
    let model = MomentModel::cpn(2).unwrap().with_eta0_theta(rat_int(1));
    let halved = moment_rescale(&model).unwrap();
    assert_eq!(
        halved,
        vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat(1, 2), rat_int(0)],
            vec![rat_int(0), rat(1, 2)],
        ]
    );
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        // positive rational parameters keep 1+s > 0 automatically
        let s = rat(rng.random_range(0..=6), rng.random_range(1..=4));
        let s2 = rat(rng.random_range(0..=6), rng.random_range(1..=4));
        let once =
            moment_rescale(&MomentModel::cpn(2).unwrap().with_eta0_theta(s.clone())).unwrap();
        let twice = moment_rescale(
            &MomentModel::cpn(2)
                .unwrap()
                .with_vertices(once)
                .unwrap()
                .with_eta0_theta(s2.clone()),
        )
        .unwrap();
        let combined = (Rational::one() + &s) * (Rational::one() + &s2) - Rational::one();
        let direct =
            moment_rescale(&MomentModel::cpn(2).unwrap().with_eta0_theta(combined)).unwrap();
        assert_eq!(twice, direct, "composition law must be exact");
    }
    println!("acceptance 9 (momentum rescaling: exact halving and composition law): PASS");
}

/// Criterion 10: a dense torus element on the CP² mapping torus leaves
/// exactly 3 closed Reeb orbits; the identity closes all of them.
#[test]
fn criterion_10_closed_reeb_orbits() {
    let dense = MomentModel::cpn(2)
        .unwrap()
        .with_torus_element(vec![SymbolicReal::symbol(1), SymbolicReal::symbol(2)])
        .unwrap();
    assert!(dense_subgroup_check(dense.torus_element().unwrap()).unwrap());
    assert_eq!(
        closed_reeb_orbit_count(&dense).unwrap(),
        ReebOrbits::Finite(3)
    );
    let id = MomentModel::cpn(2)
        .unwrap()
        .with_torus_element(vec![sr(0), sr(0)])
        .unwrap();
    assert_eq!(closed_reeb_orbit_count(&id).unwrap(), ReebOrbits::AllClosed);
    println!("acceptance 10 (closed Reeb orbits: dense → 3, identity → all closed): PASS");
}
