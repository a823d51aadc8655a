//! Liouville and symplectic forms on `^kM` and the Hamiltonian vector field
//! solving `i_Z Phi = dH`.

use std::collections::BTreeMap;

use crate::lifts::{LiftKind, LiftTag};
use crate::manifold::{
    exterior_derivative_1, interior_product, CoordSystem, ManifoldError, OneForm, TwoForm,
    VectorField,
};
use crate::symcore::{wirtinger_derivative, Coord, Expr};

pub use crate::symcore::conjugate_swap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSystem {
    pub chart: CoordSystem,
    pub kind: LiftKind,
    pub h: Expr,
    /// The solved field including `d/dt`.
    pub z: VectorField,
    /// `d c / dt` for every fiber coordinate of the chart.
    pub rhs: BTreeMap<Coord, Expr>,
    pub unconstrained: Vec<Coord>,
    pub solvability_obstructions: Vec<(Coord, Expr)>,
}

fn levels(chart: CoordSystem, kind: LiftKind) -> Vec<u32> {
    match kind.tag {
        LiftTag::Vertical => vec![0],
        LiftTag::Complete => (0..=chart.k()).collect(),
    }
}

/// `(1/2) i (-z dzbar + zbar dz)`, summed over level 0 for the vertical
/// kind and over every level for the complete kind.
pub fn liouville_form(chart: CoordSystem, kind: LiftKind) -> OneForm {
    let half_i = Expr::ratio(1, 2) * Expr::i();
    let mut comps = Vec::new();
    for r in levels(chart, kind) {
        for i in 1..=chart.m() {
            comps.push((Coord::zbar(r, i), -(&half_i * Expr::z(r, i))));
            comps.push((Coord::z(r, i), &half_i * Expr::zbar(r, i)));
        }
    }
    OneForm::from_trusted(chart, comps)
}

/// `Phi = -d(lambda) = -i dzbar ^ dz` over the same levels as the
/// Liouville form.
pub fn symplectic_form(chart: CoordSystem, kind: LiftKind) -> TwoForm {
    exterior_derivative_1(&liouville_form(chart, kind)).neg()
}

/// The same field written directly: `Z[z] = (1/i) dH/dzbar`,
/// `Z[zbar] = -(1/i) dH/dz`, placed at level `k` (vertical) or at each
/// level `r` (complete), plus `d/dt`.
pub fn closed_form_field(
    h: &Expr,
    chart: CoordSystem,
    kind: LiftKind,
) -> Result<VectorField, ManifoldError> {
    chart.check_expr(h)?;
    let inv_i = Expr::one() / Expr::i();
    let mut comps = vec![(Coord::Time, Expr::one())];
    for r in levels(chart, kind) {
        let target = match kind.tag {
            LiftTag::Vertical => chart.k(),
            LiftTag::Complete => r,
        };
        for i in 1..=chart.m() {
            comps.push((
                Coord::z(target, i),
                &inv_i * wirtinger_derivative(h, Coord::zbar(r, i)),
            ));
            comps.push((
                Coord::zbar(target, i),
                -(&inv_i * wirtinger_derivative(h, Coord::z(r, i))),
            ));
        }
    }
    Ok(VectorField::from_trusted(chart, comps))
}

/// Solves `i_Z Phi = dH` by matching coefficients. The order of the lift
/// is taken from the chart.
///
/// Each coordinate row of `i_Z Phi` involves at most one fiber unknown, so
/// the system is solved row by row. Rows of `dH` that no unknown reaches,
/// including the `dt` row, are reported as obstructions.
pub fn solve_hamiltonian_field(
    h: &Expr,
    chart: CoordSystem,
    kind: LiftKind,
) -> Result<HamiltonianSystem, ManifoldError> {
    let kind = LiftKind { tag: kind.tag, order: chart.k() };
    let h = h.normalize();
    let phi = symplectic_form(chart, kind);
    let dh = OneForm::differential(&h, chart)?;
    let fiber = chart.fiber();

    let columns: Vec<(Coord, OneForm)> = fiber
        .iter()
        .map(|u| {
            let basis = VectorField::basis(chart, *u).expect("fiber coordinate is in chart");
            (*u, interior_product(&basis, &phi).expect("same chart"))
        })
        .collect();

    let mut solved: BTreeMap<Coord, Expr> = BTreeMap::new();
    let mut obstructions = Vec::new();
    for row in chart.enumerate() {
        let mut partners = columns
            .iter()
            .filter_map(|(u, col)| {
                let c = col.component(row);
                (!c.is_zero()).then_some((*u, c))
            });
        let target = dh.component(row);
        match (partners.next(), partners.next()) {
            (None, _) => {
                if !target.is_zero() {
                    obstructions.push((row, target));
                }
            }
            (Some((u, coeff)), None) => {
                solved.insert(u, &target / &coeff);
            }
            (Some(_), Some(_)) => unreachable!("symplectic rows pair a single unknown"),
        }
    }

    let placed: BTreeMap<Coord, Expr> = match kind.tag {
        LiftTag::Vertical => solved
            .into_iter()
            .map(|(u, e)| (u.at_level(chart.k()), e))
            .collect(),
        LiftTag::Complete => solved,
    };
    let unconstrained: Vec<Coord> = fiber.iter().copied().filter(|c| !placed.contains_key(c)).collect();
    let rhs: BTreeMap<Coord, Expr> = fiber
        .iter()
        .map(|c| (*c, placed.get(c).cloned().unwrap_or_else(Expr::zero)))
        .collect();
    let z = VectorField::from_trusted(
        chart,
        std::iter::once((Coord::Time, Expr::one())).chain(placed),
    );

    Ok(HamiltonianSystem {
        chart,
        kind,
        h,
        z,
        rhs,
        unconstrained,
        solvability_obstructions: obstructions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub coord: Coord,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSet {
    pub chart: CoordSystem,
    pub kind: LiftKind,
    /// `dt/dt = 1` first, then every fiber coordinate in canonical order.
    pub equations: Vec<Equation>,
    pub unconstrained: Vec<Coord>,
    pub obstructions: Vec<(Coord, Expr)>,
    /// For the vertical kind with `k >= 1`: the reading in which every level
    /// `r` carries the level-0 right-hand side. Not used as dynamics.
    pub annotations: Vec<Equation>,
}

pub fn emit_equations(sys: &HamiltonianSystem) -> EquationSet {
    let mut equations = vec![Equation { coord: Coord::Time, rhs: Expr::one() }];
    equations.extend(sys.rhs.iter().map(|(c, e)| Equation { coord: *c, rhs: e.clone() }));

    let mut annotations = Vec::new();
    if sys.kind.tag == LiftTag::Vertical && sys.chart.k() >= 1 {
        let inv_i = Expr::one() / Expr::i();
        for c in sys.chart.fiber() {
            let base = c.at_level(0).conjugate();
            let d = wirtinger_derivative(&sys.h, base);
            let rhs = match c {
                Coord::Z { .. } => &inv_i * d,
                _ => -(&inv_i * d),
            };
            annotations.push(Equation { coord: c, rhs });
        }
    }

    EquationSet {
        chart: sys.chart,
        kind: sys.kind,
        equations,
        unconstrained: sys.unconstrained.clone(),
        obstructions: sys.solvability_obstructions.clone(),
        annotations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::pairing;
    use crate::symcore::structurally_equal;

    fn chart(m: u32, k: u32) -> CoordSystem {
        CoordSystem::new(m, k).unwrap()
    }

    fn oscillator() -> Expr {
        Expr::z(0, 1) * Expr::zbar(0, 1)
    }

    #[test]
    fn liouville_examples() {
        let l = liouville_form(chart(1, 0), LiftKind::vertical(0));
        assert!(structurally_equal(
            &l.component(Coord::zbar(0, 1)),
            &(Expr::ratio(-1, 2) * Expr::i() * Expr::z(0, 1))
        ));
        assert!(structurally_equal(
            &l.component(Coord::z(0, 1)),
            &(Expr::ratio(1, 2) * Expr::i() * Expr::zbar(0, 1))
        ));
        assert_eq!(l.components().count(), 2);
        assert_eq!(liouville_form(chart(1, 1), LiftKind::complete(1)).components().count(), 4);
        assert_eq!(liouville_form(chart(1, 1), LiftKind::vertical(1)).components().count(), 2);
        assert_eq!(liouville_form(chart(2, 0), LiftKind::vertical(0)).components().count(), 4);
    }

    #[test]
    fn symplectic_examples() {
        let phi = symplectic_form(chart(1, 0), LiftKind::vertical(0));
        assert_eq!(phi.coefficient(Coord::zbar(0, 1), Coord::z(0, 1)), -Expr::i());
        assert_eq!(phi.terms().count(), 1);
        let phi = symplectic_form(chart(1, 2), LiftKind::complete(2));
        assert_eq!(phi.terms().count(), 3);
        for r in 0..=2 {
            assert_eq!(phi.coefficient(Coord::zbar(r, 1), Coord::z(r, 1)), -Expr::i());
        }
        assert!(phi.is_closed());
        assert!(phi.has_constant_coefficients());
    }

    #[test]
    fn oscillator_at_order_zero() {
        for tag in [LiftTag::Vertical, LiftTag::Complete] {
            let sys = solve_hamiltonian_field(&oscillator(), chart(1, 0), LiftKind { tag, order: 0 }).unwrap();
            assert!(structurally_equal(&sys.rhs[&Coord::z(0, 1)], &(-Expr::i() * Expr::z(0, 1))));
            assert!(structurally_equal(&sys.rhs[&Coord::zbar(0, 1)], &(Expr::i() * Expr::zbar(0, 1))));
            assert!(sys.unconstrained.is_empty());
            assert!(sys.solvability_obstructions.is_empty());
            assert_eq!(sys.rhs[&Coord::z(0, 1)].to_string(), "(-i)*z0_1");
        }
    }

    #[test]
    fn zero_hamiltonian() {
        let sys = solve_hamiltonian_field(&Expr::zero(), chart(1, 0), LiftKind::complete(0)).unwrap();
        assert!(sys.z.structurally_eq(&VectorField::basis(chart(1, 0), Coord::Time).unwrap()));
        assert!(sys.rhs.values().all(Expr::is_zero));
        let eqs = emit_equations(&sys);
        assert!(eqs.equations.iter().skip(1).all(|e| e.rhs.is_zero()));
    }

    #[test]
    fn generic_solver_matches_closed_form() {
        let h = crate::lifts::complete_lift_function(&oscillator(), chart(1, 1)).unwrap();
        let sys = solve_hamiltonian_field(&h, chart(1, 1), LiftKind::complete(1)).unwrap();
        let closed = closed_form_field(&h, chart(1, 1), LiftKind::complete(1)).unwrap();
        assert!(sys.z.structurally_eq(&closed));
        assert_eq!(emit_equations(&sys).equations.len(), 5);
    }

    #[test]
    fn vertical_degeneracy() {
        for (m, k) in [(1, 2), (2, 1)] {
            let sys = solve_hamiltonian_field(&oscillator(), chart(m, k), LiftKind::vertical(k)).unwrap();
            assert_eq!(sys.unconstrained.len(), (2 * m * k) as usize);
            assert!(sys.unconstrained.iter().all(|c| c.level().unwrap() < k));
            let closed = closed_form_field(&oscillator(), chart(m, k), LiftKind::vertical(k)).unwrap();
            assert!(sys.z.structurally_eq(&closed));
            assert_eq!(emit_equations(&sys).annotations.len(), (2 * m * (k + 1)) as usize);
        }
    }

    #[test]
    fn time_dependence_is_an_obstruction() {
        let h = &oscillator() + &Expr::t();
        let sys = solve_hamiltonian_field(&h, chart(1, 0), LiftKind::complete(0)).unwrap();
        assert_eq!(sys.solvability_obstructions, vec![(Coord::Time, Expr::one())]);
    }

    #[test]
    fn energy_is_stationary_along_the_field() {
        let h = Expr::z(0, 1).pow(2) * Expr::zbar(0, 1) + Expr::i() * Expr::zbar(0, 1);
        for kind in [LiftKind::vertical(2), LiftKind::complete(2)] {
            let sys = solve_hamiltonian_field(&h, chart(1, 2), kind).unwrap();
            let dh = OneForm::differential(&h, chart(1, 2)).unwrap();
            assert!(pairing(&dh, &sys.z).unwrap().is_zero());
        }
    }
}
