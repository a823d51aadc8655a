use hamlift::cli::parse_expression;
use hamlift::hamilton::solve_hamiltonian_field;
use hamlift::lifts::{lift_function, lift_one_form, lift_vector_field, total_derivative, LiftKind, LiftTag};
use hamlift::manifold::{exterior_derivative_1, pairing, CoordSystem, OneForm, VectorField};
use hamlift::symcore::{conjugate_swap, structurally_equal, wirtinger_derivative, Coord, Expr};
use proptest::prelude::*;

fn chart() -> CoordSystem {
    CoordSystem::new(2, 1).unwrap()
}

fn base() -> CoordSystem {
    chart().base()
}

fn coord_in(c: CoordSystem) -> impl Strategy<Value = Coord> {
    proptest::sample::select(c.enumerate())
}

fn constant() -> impl Strategy<Value = Expr> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(re, im, den)| Expr::ratio(re, den) + Expr::ratio(im, den) * Expr::i())
}

/// Expressions over `c` built from sums, products, small powers and the
/// occasional exponential.
fn expr_in(c: CoordSystem) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![constant(), coord_in(c).prop_map(Expr::coord)];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            1 => (inner.clone(), 0i64..=3).prop_map(|(a, n)| a.pow(n)),
            1 => inner.clone().prop_map(|a| -a),
            1 => inner.prop_map(|a| (a * Expr::ratio(1, 4)).exp()),
        ]
    })
}

fn polynomial_in(c: CoordSystem) -> impl Strategy<Value = Expr> {
    let monomial = (constant(), proptest::collection::vec(coord_in(c), 0..=3))
        .prop_map(|(k, cs)| k * Expr::product(cs.into_iter().map(Expr::coord)));
    proptest::collection::vec(monomial, 1..=3).prop_map(Expr::sum)
}

fn base_fiber_polynomial() -> impl Strategy<Value = Expr> {
    let c = base();
    let monomial = (constant(), proptest::collection::vec(proptest::sample::select(c.fiber()), 0..=3))
        .prop_map(|(k, cs)| k * Expr::product(cs.into_iter().map(Expr::coord)));
    proptest::collection::vec(monomial, 1..=3).prop_map(Expr::sum)
}

fn base_field() -> impl Strategy<Value = VectorField> {
    proptest::collection::vec((proptest::sample::select(base().fiber()), base_fiber_polynomial()), 0..=3)
        .prop_map(|comps| {
            let mut z = VectorField::basis(base(), Coord::Time).unwrap();
            for (c, e) in comps {
                z = z.add(&VectorField::from_components(base(), [(c, e)]).unwrap()).unwrap();
            }
            z
        })
}

fn base_form() -> impl Strategy<Value = OneForm> {
    proptest::collection::vec((proptest::sample::select(base().fiber()), base_fiber_polynomial()), 0..=3)
        .prop_map(|comps| {
            let mut w = OneForm::basis(base(), Coord::Time).unwrap();
            for (c, e) in comps {
                w = w.add(&OneForm::from_components(base(), [(c, e)]).unwrap()).unwrap();
            }
            w
        })
}

fn kind() -> impl Strategy<Value = LiftKind> {
    prop_oneof![Just(LiftTag::Vertical), Just(LiftTag::Complete)]
        .prop_flat_map(|tag| (0u32..=2).prop_map(move |order| LiftKind { tag, order }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_is_linear(f in expr_in(chart()), g in expr_in(chart()), a in constant(), c in coord_in(chart())) {
        let lhs = wirtinger_derivative(&(&a * &f + &g), c);
        let rhs = &a * &wirtinger_derivative(&f, c) + wirtinger_derivative(&g, c);
        prop_assert!(structurally_equal(&lhs, &rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn partials_commute(f in expr_in(chart()), a in coord_in(chart()), b in coord_in(chart())) {
        let ab = wirtinger_derivative(&wirtinger_derivative(&f, a), b);
        let ba = wirtinger_derivative(&wirtinger_derivative(&f, b), a);
        prop_assert!(structurally_equal(&ab, &ba), "{ab} vs {ba}");
    }

    #[test]
    fn normalization_is_idempotent(f in expr_in(chart())) {
        let once = f.normalize();
        prop_assert_eq!(once.normalize(), once);
    }

    #[test]
    fn printed_form_parses_back(f in expr_in(chart())) {
        let text = f.to_string();
        let back = parse_expression(&text, chart()).unwrap();
        prop_assert!(structurally_equal(&back, &f), "{text} reparsed as {back}");
    }

    #[test]
    fn exact_forms_are_closed(f in expr_in(chart())) {
        let df = OneForm::differential(&f, chart()).unwrap();
        prop_assert!(exterior_derivative_1(&df).is_zero());
    }

    #[test]
    fn pairing_with_differential_is_directional_derivative(f in polynomial_in(chart()), z in base_field()) {
        let z = z.embed(chart()).unwrap();
        let df = OneForm::differential(&f, chart()).unwrap();
        prop_assert!(structurally_equal(&pairing(&df, &z).unwrap(), &z.apply(&f)));
    }

    #[test]
    fn total_derivative_obeys_leibniz(f in polynomial_in(chart()), g in polynomial_in(chart())) {
        let c = chart();
        let lhs = total_derivative(&(&f * &g), c);
        let rhs = total_derivative(&f, c) * &g + &f * total_derivative(&g, c);
        prop_assert!(structurally_equal(&lhs, &rhs));
    }

    #[test]
    fn function_lifts_are_linear(f in base_fiber_polynomial(), g in base_fiber_polynomial(), a in constant(), kind in kind()) {
        let target = base().with_order(kind.order);
        let lhs = lift_function(&(&a * &f + &g), kind, target).unwrap();
        let rhs = &a * &lift_function(&f, kind, target).unwrap() + lift_function(&g, kind, target).unwrap();
        prop_assert!(structurally_equal(&lhs, &rhs));
    }

    #[test]
    fn field_and_form_lifts_are_additive(
        x in base_field(),
        y in base_field(),
        v in base_form(),
        w in base_form(),
        kind in kind(),
    ) {
        let target = base().with_order(kind.order);
        let lifted_sum = lift_vector_field(&x.add(&y).unwrap(), kind, target).unwrap();
        let sum_lifted = lift_vector_field(&x, kind, target).unwrap()
            .add(&lift_vector_field(&y, kind, target).unwrap()).unwrap();
        prop_assert!(lifted_sum.structurally_eq(&sum_lifted));
        let lifted_sum = lift_one_form(&v.add(&w).unwrap(), kind, target).unwrap();
        let sum_lifted = lift_one_form(&v, kind, target).unwrap()
            .add(&lift_one_form(&w, kind, target).unwrap()).unwrap();
        prop_assert!(lifted_sum.structurally_eq(&sum_lifted));
    }

    #[test]
    fn conjugate_swap_is_an_involution(f in expr_in(chart())) {
        prop_assert!(structurally_equal(&conjugate_swap(&conjugate_swap(&f)), &f));
    }

    #[test]
    fn self_conjugate_hamiltonians_give_mirrored_equations(p in base_fiber_polynomial(), kind in kind()) {
        let target = base().with_order(kind.order);
        let h = lift_function(&(&p + &conjugate_swap(&p)), kind, target).unwrap();
        let sys = solve_hamiltonian_field(&h, target, kind).unwrap();
        for c in target.fiber() {
            if let Coord::Z { .. } = c {
                let mirrored = conjugate_swap(&sys.rhs[&c]);
                prop_assert!(structurally_equal(&mirrored, &sys.rhs[&c.conjugate()]), "{c}");
            }
        }
    }
}
