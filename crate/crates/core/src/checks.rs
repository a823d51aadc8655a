//! Verification suites shared by the `check` command and the test targets.
//! Every suite draws its inputs from a seeded [`Corpus`] and reports
//! failures as data.

use num_complex::Complex64;
use serde::Serialize;

use crate::corpus::Corpus;
use crate::hamilton::{closed_form_field, conjugate_swap, liouville_form, solve_hamiltonian_field, symplectic_form};
use crate::lifts::{
    build_contact_structure, complete_lift_vector_field, iterated_complete_lift_vector_field,
    lift_function, lift_one_form, lift_tensor11, lift_vector_field, verify_contact, LiftKind,
    LiftTag,
};
use crate::manifold::{
    apply_tensor11, exterior_derivative_1, pairing, CoordSystem, OneForm, TwoForm, VectorField,
};
use crate::symcore::{eval_numeric, structurally_equal, wirtinger_derivative, Coord, Expr};

const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), cases: 0, failures: 0, counterexamples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures == 0
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(detail());
            }
        }
    }

    pub fn merge(&mut self, other: CheckResult) {
        self.cases += other.cases;
        self.failures += other.failures;
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(c);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub m: u32,
    pub k: u32,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Sample counts used by [`run_checks`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSizes {
    pub lift_instances: usize,
    pub fields: usize,
    pub hamiltonians: usize,
    pub exact_forms: usize,
    pub derivative_expressions: usize,
    pub derivative_points: usize,
}

impl Default for SampleSizes {
    fn default() -> Self {
        SampleSizes {
            lift_instances: 10,
            fields: 10,
            hamiltonians: 10,
            exact_forms: 10,
            derivative_expressions: 5,
            derivative_points: 4,
        }
    }
}

pub fn run_checks(chart: CoordSystem, seed: u64, sizes: SampleSizes) -> CheckReport {
    let mut corpus = Corpus::new(seed);
    let mut checks = Vec::new();
    checks.extend(lift_identities(chart, &mut corpus, sizes.lift_instances));
    checks.push(binomial_consistency(chart, &mut corpus, sizes.fields));
    checks.push(contact_suite(chart));
    checks.extend(closed_form_agreement(chart, &mut corpus, sizes.hamiltonians));
    checks.push(symplectic_structure(chart));
    checks.push(exact_forms_closed(chart, &mut corpus, sizes.exact_forms));
    checks.push(degeneracy_accounting(chart));
    checks.push(conjugate_symmetry(chart, &mut corpus, sizes.hamiltonians));
    checks.push(energy_stationarity(chart, &mut corpus, sizes.hamiltonians));
    checks.push(derivative_oracle(
        chart,
        &mut corpus,
        sizes.derivative_expressions,
        sizes.derivative_points,
    ));
    CheckReport {
        m: chart.m(),
        k: chart.k(),
        seed,
        passed: checks.iter().all(CheckResult::passed),
        checks,
    }
}

/// Time parts of lifted fields and forms are passive, so the `dt(d/dt)`
/// product is compared unlifted and only the remainder is lifted.
fn lifted_pairing(w: &OneForm, z: &VectorField, kind: LiftKind, target: CoordSystem) -> Expr {
    let passive = w.component(Coord::Time) * z.component(Coord::Time);
    let rest = pairing(w, z).expect("same base chart") - &passive;
    passive + lift_function(&rest, kind, target).expect("base expression")
}

/// The lift identities on `n` random instances `(f, Z, w, phi)`:
/// `Z^L(f^c) = (Zf)^L`, `w^L(Z^c) = (wZ)^L` and `phi^L(Z^c) = (phi Z)^L`
/// for both kinds `L`.
pub fn lift_identities(chart: CoordSystem, corpus: &mut Corpus, n: usize) -> Vec<CheckResult> {
    let (m, k) = (chart.m(), chart.k());
    let tag = |t: LiftTag| LiftKind { tag: t, order: k };
    let mut field = [
        CheckResult::new(format!("vertical field on complete function (m={m}, k={k})")),
        CheckResult::new(format!("complete field on complete function (m={m}, k={k})")),
    ];
    let mut form = [
        CheckResult::new(format!("vertical form on complete field (m={m}, k={k})")),
        CheckResult::new(format!("complete form on complete field (m={m}, k={k})")),
    ];
    let mut tensor = [
        CheckResult::new(format!("vertical tensor on complete field (m={m}, k={k})")),
        CheckResult::new(format!("complete tensor on complete field (m={m}, k={k})")),
    ];
    for _ in 0..n {
        let f = corpus.base_polynomial(m);
        let z = corpus.base_vector_field(m);
        let w = corpus.base_one_form(m);
        let phi = corpus.base_tensor(m);

        let fc = lift_function(&f, LiftKind::complete(k), chart).expect("base f");
        let zc = complete_lift_vector_field(&z, chart).expect("base Z");
        for (slot, t) in [LiftTag::Vertical, LiftTag::Complete].into_iter().enumerate() {
            let kind = tag(t);

            let zl = lift_vector_field(&z, kind, chart).expect("base Z");
            let lhs = zl.apply(&fc);
            let rhs = lift_function(&z.apply(&f), kind, chart).expect("base Zf");
            field[slot].record(structurally_equal(&lhs, &rhs), || {
                format!("f = {f}; Z = {z}; lhs = {lhs}; rhs = {rhs}")
            });

            let wl = lift_one_form(&w, kind, chart).expect("base w");
            let lhs = pairing(&wl, &zc).expect("same chart");
            let rhs = lifted_pairing(&w, &z, kind, chart);
            form[slot].record(structurally_equal(&lhs, &rhs), || {
                format!("w = {w}; Z = {z}; lhs = {lhs}; rhs = {rhs}")
            });

            match lift_tensor11(&phi, kind, chart) {
                Ok(phil) => {
                    let lhs = apply_tensor11(&phil, &zc).expect("same chart");
                    let rhs = lift_vector_field(&apply_tensor11(&phi, &z).expect("same chart"), kind, chart)
                        .expect("base field");
                    tensor[slot].record(lhs.structurally_eq(&rhs), || {
                        format!("Z = {z}; lhs = {lhs}; rhs = {rhs}")
                    });
                }
                Err(e) => tensor[slot].record(false, || format!("lift failed: {e}")),
            }
        }
    }
    field.into_iter().chain(form).chain(tensor).collect()
}

/// Closed binomial form against `k` single complete-lift steps.
pub fn binomial_consistency(chart: CoordSystem, corpus: &mut Corpus, n: usize) -> CheckResult {
    let mut out = CheckResult::new(format!(
        "binomial closed form vs iterated steps (m={}, k={})",
        chart.m(),
        chart.k()
    ));
    for _ in 0..n {
        let z = corpus.base_vector_field(chart.m());
        let closed = complete_lift_vector_field(&z, chart).expect("base Z");
        let iterated = iterated_complete_lift_vector_field(&z, chart).expect("base Z");
        out.record(closed.structurally_eq(&iterated), || {
            format!("Z = {z}; closed = {closed}; iterated = {iterated}")
        });
    }
    out
}

/// Contact structures from three `(xi, eta)` pairs and both kinds.
pub fn contact_suite(chart: CoordSystem) -> CheckResult {
    let (m, k) = (chart.m(), chart.k());
    let base = chart.base();
    let mut out = CheckResult::new(format!("contact structure (m={m}, k={k})"));
    let dt_field = VectorField::basis(base, Coord::Time).expect("t");
    let dt_form = OneForm::basis(base, Coord::Time).expect("t");
    let xi_twisted = VectorField::from_components(
        base,
        [(Coord::Time, Expr::one()), (Coord::z(0, 1), Expr::zbar(0, 1)), (Coord::zbar(0, 1), Expr::i())],
    )
    .expect("base");
    let eta_twisted = OneForm::from_components(
        base,
        [(Coord::Time, Expr::one()), (Coord::z(0, m), Expr::zbar(0, 1) * Expr::z(0, m))],
    )
    .expect("base");
    let pairs = [(&dt_field, &dt_form), (&xi_twisted, &dt_form), (&dt_field, &eta_twisted)];
    for (xi, eta) in pairs {
        for tag in [LiftTag::Vertical, LiftTag::Complete] {
            let kind = LiftKind { tag, order: k };
            match build_contact_structure(xi, eta, kind, chart) {
                Ok(cs) => {
                    let report = verify_contact(&cs);
                    let ok = report.passed() && report.real_rank == chart.dimension() - 1;
                    out.record(ok, || {
                        format!(
                            "{tag}: xi = {xi}; eta = {eta}; rank = {}; kernels = {:?}; {}",
                            report.real_rank,
                            report.kernel_dimensions,
                            report.counterexamples.join("; ")
                        )
                    });
                }
                Err(e) => out.record(false, || format!("{tag}: xi = {xi}; eta = {eta}: {e}")),
            }
        }
    }
    out
}

/// Generic coefficient matching against the closed-form field, with the
/// Hamiltonian lifted by the kind.
pub fn closed_form_agreement(chart: CoordSystem, corpus: &mut Corpus, n: usize) -> Vec<CheckResult> {
    [LiftTag::Vertical, LiftTag::Complete]
        .into_iter()
        .map(|tag| {
            let kind = LiftKind { tag, order: chart.k() };
            let mut out = CheckResult::new(format!(
                "{tag} solver vs closed form (m={}, k={})",
                chart.m(),
                chart.k()
            ));
            for _ in 0..n {
                let h = lift_function(&corpus.base_polynomial(chart.m()), kind, chart).expect("base H");
                let sys = solve_hamiltonian_field(&h, chart, kind).expect("chart H");
                let closed = closed_form_field(&h, chart, kind).expect("chart H");
                out.record(sys.z.structurally_eq(&closed), || {
                    format!("H = {h}; solved = {}; closed = {closed}", sys.z)
                });
            }
            out
        })
        .collect()
}

/// `Phi` has constant coefficients, equals `-i sum dzbar ^ dz` and is closed.
pub fn symplectic_structure(chart: CoordSystem) -> CheckResult {
    let mut out = CheckResult::new(format!("symplectic form (m={}, k={})", chart.m(), chart.k()));
    for tag in [LiftTag::Vertical, LiftTag::Complete] {
        let kind = LiftKind { tag, order: chart.k() };
        let phi = symplectic_form(chart, kind);
        let levels = if tag == LiftTag::Vertical { 0..=0 } else { 0..=chart.k() };
        let mut expected = TwoForm::zero(chart);
        for r in levels {
            for i in 1..=chart.m() {
                expected
                    .add_wedge(Coord::zbar(r, i), Coord::z(r, i), -Expr::i())
                    .expect("chart coordinates");
            }
        }
        let minus_d_lambda = exterior_derivative_1(&liouville_form(chart, kind)).neg();
        let ok = phi.has_constant_coefficients()
            && phi.structurally_eq(&expected)
            && phi.structurally_eq(&minus_d_lambda)
            && phi.is_closed();
        out.record(ok, || format!("{tag}: Phi = {phi:?}"));
    }
    out
}

/// `d(df) = 0` for random `f` over every chart coordinate.
pub fn exact_forms_closed(chart: CoordSystem, corpus: &mut Corpus, n: usize) -> CheckResult {
    let mut out = CheckResult::new(format!("d(df) = 0 (m={}, k={})", chart.m(), chart.k()));
    for _ in 0..n {
        let f = corpus.expression_with_exp(chart);
        let ddf = exterior_derivative_1(&OneForm::differential(&f, chart).expect("chart f"));
        out.record(ddf.is_zero(), || format!("f = {f}"));
    }
    out
}

/// The vertical kind leaves exactly the `2mk` fiber directions of levels
/// `0..k-1` free; the complete kind leaves none.
pub fn degeneracy_accounting(chart: CoordSystem) -> CheckResult {
    let (m, k) = (chart.m(), chart.k());
    let mut out = CheckResult::new(format!("degeneracy accounting (m={m}, k={k})"));
    let h = Expr::sum((1..=m).map(|i| Expr::z(0, i) * Expr::zbar(0, i)));
    let v = solve_hamiltonian_field(&h, chart, LiftKind::vertical(k)).expect("chart H");
    let expected: Vec<Coord> = (0..k).flat_map(|r| chart.level(r)).collect();
    out.record(v.unconstrained == expected && v.unconstrained.len() == (2 * m * k) as usize, || {
        format!("vertical unconstrained = {:?}", v.unconstrained)
    });
    let hc = lift_function(&h, LiftKind::complete(k), chart).expect("base H");
    let c = solve_hamiltonian_field(&hc, chart, LiftKind::complete(k)).expect("chart H");
    out.record(c.unconstrained.is_empty() && c.solvability_obstructions.is_empty(), || {
        format!(
            "complete unconstrained = {:?}, obstructions = {:?}",
            c.unconstrained, c.solvability_obstructions
        )
    });
    out
}

/// For self-conjugate `H`, `rhs[zbar] = swap(rhs[z])`.
pub fn conjugate_symmetry(chart: CoordSystem, corpus: &mut Corpus, n: usize) -> CheckResult {
    let mut out = CheckResult::new(format!("conjugate symmetry (m={}, k={})", chart.m(), chart.k()));
    for _ in 0..n {
        let base = corpus.self_conjugate_polynomial(chart.m());
        for tag in [LiftTag::Vertical, LiftTag::Complete] {
            let kind = LiftKind { tag, order: chart.k() };
            let h = lift_function(&base, kind, chart).expect("base H");
            let sys = solve_hamiltonian_field(&h, chart, kind).expect("chart H");
            for c in chart.fiber() {
                if let Coord::Z { .. } = c {
                    let a = conjugate_swap(&sys.rhs[&c]);
                    let b = &sys.rhs[&c.conjugate()];
                    out.record(structurally_equal(&a, b), || format!("{tag}: H = {h}; {c}"));
                }
            }
        }
    }
    out
}

/// `dH(Z) = dH/dt` for every solved field.
pub fn energy_stationarity(chart: CoordSystem, corpus: &mut Corpus, n: usize) -> CheckResult {
    let mut out = CheckResult::new(format!("energy stationarity (m={}, k={})", chart.m(), chart.k()));
    for _ in 0..n {
        let base = corpus.base_polynomial(chart.m()) + Expr::t() * corpus.base_polynomial(chart.m());
        for tag in [LiftTag::Vertical, LiftTag::Complete] {
            let kind = LiftKind { tag, order: chart.k() };
            let h = lift_function(&base, kind, chart).expect("base H");
            let sys = solve_hamiltonian_field(&h, chart, kind).expect("chart H");
            let dh = OneForm::differential(&h, chart).expect("chart H");
            let lhs = pairing(&dh, &sys.z).expect("same chart");
            let rhs = wirtinger_derivative(&h, Coord::Time);
            out.record(structurally_equal(&lhs, &rhs), || format!("{tag}: H = {h}"));
        }
    }
    out
}

const FD_STEP: f64 = 1e-5;
const FD_TOLERANCE: f64 = 1e-6;

/// Central finite differences along the real and imaginary directions of
/// each `z^{ri}` (with `zbar^{ri}` moving as its conjugate), recombined into
/// `(d/dx -/+ i d/dy)/2`, against the symbolic derivative.
pub fn derivative_oracle(
    chart: CoordSystem,
    corpus: &mut Corpus,
    expressions: usize,
    points: usize,
) -> CheckResult {
    let mut out = CheckResult::new(format!(
        "Wirtinger derivative vs finite differences (m={}, k={})",
        chart.m(),
        chart.k()
    ));
    for _ in 0..expressions {
        let e = corpus.expression_with_exp(chart);
        for _ in 0..points {
            let p = corpus.point(chart);
            for c in chart.enumerate() {
                let exact = eval_numeric(&wirtinger_derivative(&e, c), &p).expect("bound point");
                let f = |dz: Complex64| {
                    let mut q = p.clone();
                    match c {
                        Coord::Time => *q.get_mut(&c).unwrap() += dz,
                        _ => {
                            let (zc, zbc) = match c {
                                Coord::Z { .. } => (c, c.conjugate()),
                                _ => (c.conjugate(), c),
                            };
                            *q.get_mut(&zc).unwrap() += dz;
                            *q.get_mut(&zbc).unwrap() += dz.conj();
                        }
                    }
                    eval_numeric(&e, &q).expect("bound point")
                };
                let h = Complex64::new(FD_STEP, 0.0);
                let ih = Complex64::new(0.0, FD_STEP);
                let dx = (f(h) - f(-h)) / (2.0 * FD_STEP);
                let fd = match c {
                    Coord::Time => dx,
                    _ => {
                        let dy = (f(ih) - f(-ih)) / (2.0 * FD_STEP);
                        let i = Complex64::new(0.0, 1.0);
                        if let Coord::Z { .. } = c {
                            (dx - i * dy) / 2.0
                        } else {
                            (dx + i * dy) / 2.0
                        }
                    }
                };
                let err = (fd - exact).norm();
                out.record(err <= FD_TOLERANCE * exact.norm().max(1.0), || {
                    format!("e = {e}; d/d{c}: exact = {exact}, fd = {fd}")
                });
            }
        }
    }
    out
}
