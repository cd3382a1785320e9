//! Property tests for the algebraic laws the whole crate leans on:
//! canonical scalar arithmetic, exact linear solving, the antiderivation
//! identities of the exterior calculus, and the scaling invariances of the
//! topology and toric layers.

use num_traits::Zero;
use proptest::prelude::*;

use cosym_core::linalg::{rank_over_q, solve_linear, LinearSolution, Matrix};
use cosym_core::scalar::{rat, Rational, SymbolicReal};
use cosym_core::topology::{fibration_check, PeriodClass};
use cosym_core::toric::dense_subgroup_check;
use cosym_core::{Form, LieAlgebra, Vector};

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn symbolic_strategy() -> impl Strategy<Value = SymbolicReal> {
    proptest::collection::vec((0usize..4, rational_strategy()), 0..4).prop_map(|terms| {
        let mut out = SymbolicReal::zero();
        for (slot, coeff) in terms {
            out += &SymbolicReal::term(slot, coeff);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Canonical form: a + (−a) = 0 and (a·b)/b = a, exactly.
    #[test]
    fn scalar_canonical_form(a in rational_strategy(), b in rational_strategy()) {
        prop_assert!((&a + &(-a.clone())).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(&(&(&a * &b) / &b), &a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Symbolic arithmetic is associative, commutative, and distributes
    /// over rational scaling, with exact structural equality.
    #[test]
    fn symbolic_ring_laws(
        a in symbolic_strategy(),
        b in symbolic_strategy(),
        c in symbolic_strategy(),
        r in rational_strategy(),
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        let lhs = (&a + &b).scale(&r);
        let rhs = &a.scale(&r) + &b.scale(&r);
        prop_assert_eq!(lhs, rhs);
        // multiplication by a rational value agrees with scaling
        let r_sym = SymbolicReal::from_rational(r.clone());
        prop_assert_eq!(a.try_mul(&r_sym).unwrap(), a.scale(&r));
    }
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = (Matrix, Vec<Rational>)> {
    (1..=max, 1..=max).prop_flat_map(|(rows, cols)| {
        (
            proptest::collection::vec(rational_strategy(), rows * cols),
            proptest::collection::vec(rational_strategy(), cols),
        )
            .prop_map(move |(data, x)| (Matrix::new(rows, cols, data).unwrap(), x))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// For random M and x up to 8×8, solving M·(Mx) = b recovers a
    /// solution set that contains x, and rank + nullity = cols.
    #[test]
    fn solve_recovers_known_solutions((m, x) in matrix_strategy(8)) {
        let b = m.mul_vec(&x).unwrap();
        let solution = solve_linear(&m, &b).unwrap();
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        match &solution {
            LinearSolution::Unique(sol) => prop_assert_eq!(sol, &x),
            LinearSolution::NonUnique { particular, kernel } => {
                prop_assert_eq!(m.mul_vec(particular).unwrap(), b.clone());
                // x − particular must lie in the kernel span: solve K c = diff
                let diff: Vec<Rational> =
                    x.iter().zip(particular).map(|(a, b)| a - b).collect();
                let k = Matrix::from_rows(
                    (0..m.cols())
                        .map(|row| kernel.iter().map(|v| v[row].clone()).collect())
                        .collect(),
                ).unwrap();
                let membership = solve_linear(&k, &diff).unwrap();
                prop_assert!(!matches!(membership, LinearSolution::NoSolution));
            }
            LinearSolution::NoSolution => prop_assert!(false, "b is consistent by construction"),
        }
        prop_assert!(solution.contains(&m, &b, &x));
    }
}

fn form_strategy(dim: usize, degree: usize) -> impl Strategy<Value = Form> {
    let indices: Vec<Vec<usize>> = subsets_of_size(dim, degree);
    proptest::collection::vec(rational_strategy(), indices.len()).prop_map(move |coeffs| {
        Form::from_terms(
            dim,
            degree,
            indices
                .iter()
                .cloned()
                .zip(coeffs.into_iter().map(SymbolicReal::from_rational)),
        )
        .unwrap()
    })
}

fn subsets_of_size(dim: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((prefix, start)) = stack.pop() {
        if prefix.len() == size {
            out.push(prefix);
            continue;
        }
        for i in start..dim {
            let mut next = prefix.clone();
            next.push(i);
            stack.push((next, i + 1));
        }
    }
    out
}

fn vector_strategy(dim: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(rational_strategy(), dim).prop_map(Vector::new)
}

/// A Jacobi-valid 5-dimensional testbed: the Heisenberg factor plus two
/// flat directions.
fn h3_r2() -> LieAlgebra {
    LieAlgebra::new(5, vec![(0, 1, vec![(2, rat(1, 1))])]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// Graded commutativity of the wedge product.
    #[test]
    fn wedge_graded_commutativity(
        a in form_strategy(5, 1),
        b in form_strategy(5, 2),
        c in form_strategy(5, 1),
    ) {
        // odd·even commutes, odd·odd anticommutes
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().neg());
    }

    /// The interior product is an antiderivation of degree −1 and squares
    /// to zero.
    #[test]
    fn contraction_antiderivation(
        x in vector_strategy(5),
        a in form_strategy(5, 2),
        b in form_strategy(5, 1),
    ) {
        let lhs = a.wedge(&b).unwrap().contract(&x).unwrap();
        let rhs = a
            .contract(&x).unwrap()
            .wedge(&b).unwrap()
            .add(&a.wedge(&b.contract(&x).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
        let twice = a.contract(&x).unwrap().contract(&x).unwrap();
        prop_assert!(twice.is_zero());
    }

    /// The differential is an antiderivation of degree +1 on a
    /// Jacobi-valid algebra.
    #[test]
    fn differential_antiderivation(a in form_strategy(5, 1), b in form_strategy(5, 2)) {
        let g = h3_r2();
        let lhs = g.d(&a.wedge(&b).unwrap()).unwrap();
        let rhs = g
            .d(&a).unwrap()
            .wedge(&b).unwrap()
            .add(&a.wedge(&g.d(&b).unwrap()).unwrap().neg())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The fibration criterion only sees the ray of the period class:
    /// scaling by any nonzero rational changes nothing.
    #[test]
    fn fibration_scaling_invariance(
        periods in proptest::collection::vec(symbolic_strategy(), 1..5),
        scale in rational_strategy(),
    ) {
        prop_assume!(!scale.is_zero());
        prop_assume!(periods.iter().any(|p| !p.is_zero()));
        let pc = PeriodClass::new(periods.clone()).unwrap();
        let scaled =
            PeriodClass::new(periods.iter().map(|p| p.scale(&scale)).collect()).unwrap();
        let v1 = fibration_check(&pc).unwrap();
        let v2 = fibration_check(&scaled).unwrap();
        prop_assert_eq!(
            v1.rational_multiple_of_integer_class,
            v2.rational_multiple_of_integer_class
        );
        prop_assert_eq!(v1.integer_class, v2.integer_class);
    }

    /// Density of the generated subgroup is invariant under unimodular
    /// change of basis of the torus.
    #[test]
    fn dense_check_unimodular_invariance(
        a1 in symbolic_strategy(),
        a2 in symbolic_strategy(),
        shear in -3i64..=3,
    ) {
        let a = vec![a1, a2];
        // elementary unimodular matrix [[1, s], [0, 1]] composed with a swap
        let images = vec![
            &a[1] + &a[0].scale(&rat(shear, 1)),
            a[0].clone(),
        ];
        prop_assert_eq!(
            dense_subgroup_check(&a).unwrap(),
            dense_subgroup_check(&images).unwrap()
        );
    }

    /// Flattened ranks never exceed either matrix dimension.
    #[test]
    fn rank_over_q_bounds(rows in proptest::collection::vec(
        proptest::collection::vec(symbolic_strategy(), 3), 1..5)
    ) {
        let rank = rank_over_q(&rows).unwrap();
        prop_assert!(rank <= rows.len());
        prop_assert!(rank <= 3 * 4); // entries span at most 4 slots
    }
}

/// Round trips and determinism over the bundled fixtures.
mod fixtures {
    use cosym_core::model::{load_model, parse_model};
    use cosym_core::scenario::{run_scenario, RunOptions};

    fn fixture(name: &str) -> String {
        format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    const ALL: [&str; 7] = [
        "r5_flat.json",
        "h3_r2.json",
        "t2_anosov.json",
        "cp1_s1.json",
        "cp2_s1.json",
        "example_105.json",
        "dense_reeb_cp2.json",
    ];

    #[test]
    fn canonical_round_trip_on_all_fixtures() {
        for name in ALL {
            let model = load_model(fixture(name)).unwrap();
            let emitted = model.to_canonical_string();
            let reloaded = parse_model(&emitted).unwrap();
            assert_eq!(model, reloaded, "{name} must round-trip");
            assert_eq!(
                emitted,
                reloaded.to_canonical_string(),
                "{name} emission stable"
            );
        }
    }

    #[test]
    fn reports_deterministic_modulo_timestamp() {
        for name in ALL {
            let model = load_model(fixture(name)).unwrap();
            let strip = |mut v: serde_json::Value| {
                v.as_object_mut().unwrap().remove("generated_at_unix");
                serde_json::to_string(&v).unwrap()
            };
            let a = strip(run_scenario(&model, RunOptions { seed: 5 }).to_json());
            let b = strip(run_scenario(&model, RunOptions { seed: 5 }).to_json());
            assert_eq!(a, b, "{name} must be deterministic");
        }
    }

    #[test]
    fn all_fixture_scenarios_pass() {
        for name in ALL {
            let model = load_model(fixture(name)).unwrap();
            let report = run_scenario(&model, RunOptions::default());
            assert!(report.overall_pass, "{name}:\n{}", report.to_text());
        }
    }
}
