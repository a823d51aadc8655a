//! Vertical and complete lifts from `N` to the extension `^kN`.
//!
//! The complete lift of a function is `f^{c^k} = D^k f` with the total
//! derivative operator
//! `D g = t dg/dt + sum_{r<k,i} z^{r+1,i} dg/dz^{ri} + zbar^{r+1,i} dg/dzbar^{ri}`.
//! A mixed lift `v^a c^b` of a function is `D^b`.
//!
//! In every field and form lift the `d/dt` and `dt` components are passive:
//! they are carried over unchanged.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::manifold::{
    apply_tensor11, pairing, CoordSystem, ManifoldError, OneForm, Tensor11, VectorField,
};
use crate::symcore::{eval_numeric, structurally_equal, wirtinger_derivative, Coord, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiftTag {
    Vertical,
    Complete,
}

impl fmt::Display for LiftTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftTag::Vertical => "vertical",
            LiftTag::Complete => "complete",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftKind {
    pub tag: LiftTag,
    pub order: u32,
}

impl LiftKind {
    pub fn vertical(order: u32) -> Self {
        LiftKind { tag: LiftTag::Vertical, order }
    }

    pub fn complete(order: u32) -> Self {
        LiftKind { tag: LiftTag::Complete, order }
    }
}

impl fmt::Display for LiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.tag, self.order)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("base expression references non-base coordinate {0}")]
    InvalidBaseExpression(Coord),
    #[error("base vector field references non-base coordinate {0}")]
    InvalidBaseField(Coord),
    #[error("base 1-form references non-base coordinate {0}")]
    InvalidBaseForm(Coord),
    #[error("lift order {order} exceeds chart order {k}")]
    OrderExceedsChart { order: u32, k: u32 },
    #[error("lifted tensor entry ({output}, {input}) is not fixed by the defining identities")]
    Underdetermined { output: Coord, input: Coord },
    #[error("eta(xi) = {0} after lifting, expected 1")]
    NotNormalized(Box<Expr>),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

pub fn binomial(n: u32, r: u32) -> i64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r) as i64;
    let n = n as i64;
    (0..r).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn is_base(c: Coord, m: u32) -> bool {
    c.is_time() || (c.level() == Some(0) && c.index().is_some_and(|i| i >= 1 && i <= m))
}

fn check_base_expr(e: &Expr, m: u32, err: fn(Coord) -> LiftError) -> Result<(), LiftError> {
    match e.coords().into_iter().find(|c| !is_base(*c, m)) {
        Some(c) => Err(err(c)),
        None => Ok(()),
    }
}

fn check_order(kind: LiftKind, target: CoordSystem) -> Result<(), LiftError> {
    if kind.order > target.k() {
        Err(LiftError::OrderExceedsChart { order: kind.order, k: target.k() })
    } else {
        Ok(())
    }
}

/// One application of the total derivative on `chart`.
pub fn total_derivative(g: &Expr, chart: CoordSystem) -> Expr {
    let mut terms = vec![Expr::t() * wirtinger_derivative(g, Coord::Time)];
    for r in 0..chart.k() {
        for c in chart.level(r) {
            let d = wirtinger_derivative(g, c);
            if !d.is_zero() {
                terms.push(Expr::coord(c.at_level(r + 1)) * d);
            }
        }
    }
    Expr::sum(terms)
}

fn total_derivative_n(g: &Expr, n: u32, chart: CoordSystem) -> Expr {
    (0..n).fold(g.normalize(), |acc, _| total_derivative(&acc, chart))
}

/// `f^{v^k}`: the identity on base expressions.
pub fn vertical_lift_function(f: &Expr, target: CoordSystem) -> Result<Expr, LiftError> {
    check_base_expr(f, target.m(), LiftError::InvalidBaseExpression)?;
    Ok(f.normalize())
}

/// `f^{c^k} = D^k f`.
pub fn complete_lift_function(f: &Expr, target: CoordSystem) -> Result<Expr, LiftError> {
    check_base_expr(f, target.m(), LiftError::InvalidBaseExpression)?;
    Ok(total_derivative_n(f, target.k(), target))
}

/// `f^{v^a c^b} = D^b f`.
pub fn mixed_lift_function(
    f: &Expr,
    vertical_steps: u32,
    complete_steps: u32,
    target: CoordSystem,
) -> Result<Expr, LiftError> {
    check_base_expr(f, target.m(), LiftError::InvalidBaseExpression)?;
    let order = vertical_steps + complete_steps;
    if order > target.k() {
        return Err(LiftError::OrderExceedsChart { order, k: target.k() });
    }
    Ok(total_derivative_n(f, complete_steps, target))
}

pub fn lift_function(f: &Expr, kind: LiftKind, target: CoordSystem) -> Result<Expr, LiftError> {
    check_order(kind, target)?;
    let chart = target.with_order(kind.order);
    match kind.tag {
        LiftTag::Vertical => vertical_lift_function(f, chart),
        LiftTag::Complete => complete_lift_function(f, chart),
    }
}

fn check_base_field(z: &VectorField, m: u32) -> Result<(), LiftError> {
    if z.chart().m() != m {
        return Err(ManifoldError::ChartMismatch { left: z.chart(), right: z.chart().with_order(0) }.into());
    }
    for (c, e) in z.components() {
        if !is_base(*c, m) {
            return Err(LiftError::InvalidBaseField(*c));
        }
        check_base_expr(e, m, LiftError::InvalidBaseField)?;
    }
    Ok(())
}

fn check_base_form(w: &OneForm, m: u32) -> Result<(), LiftError> {
    if w.chart().m() != m {
        return Err(ManifoldError::ChartMismatch { left: w.chart(), right: w.chart().with_order(0) }.into());
    }
    for (c, e) in w.components() {
        if !is_base(*c, m) {
            return Err(LiftError::InvalidBaseForm(*c));
        }
        check_base_expr(e, m, LiftError::InvalidBaseForm)?;
    }
    Ok(())
}

fn field_lift_unchecked(z: &VectorField, tag: LiftTag, chart: CoordSystem) -> VectorField {
    let k = chart.k();
    let mut out = Vec::new();
    for (c, a) in z.components() {
        if c.is_time() {
            out.push((*c, a.clone()));
            continue;
        }
        match tag {
            LiftTag::Vertical => out.push((c.at_level(k), a.clone())),
            LiftTag::Complete => {
                let mut d = a.clone();
                for r in 0..=k {
                    if r > 0 {
                        d = total_derivative(&d, chart);
                    }
                    out.push((c.at_level(r), Expr::int(binomial(k, r)) * &d));
                }
            }
        }
    }
    VectorField::from_trusted(chart, out)
}

fn form_lift_unchecked(w: &OneForm, tag: LiftTag, chart: CoordSystem) -> OneForm {
    let k = chart.k();
    let mut out = Vec::new();
    for (c, a) in w.components() {
        if c.is_time() {
            out.push((*c, a.clone()));
            continue;
        }
        match tag {
            LiftTag::Vertical => out.push((*c, a.clone())),
            LiftTag::Complete => {
                let mut d = a.clone();
                for j in 0..=k {
                    if j > 0 {
                        d = total_derivative(&d, chart);
                    }
                    out.push((c.at_level(k - j), d.clone()));
                }
            }
        }
    }
    OneForm::from_trusted(chart, out)
}

/// Base fiber components move to level `k`.
pub fn vertical_lift_vector_field(
    z: &VectorField,
    target: CoordSystem,
) -> Result<VectorField, LiftError> {
    check_base_field(z, target.m())?;
    Ok(field_lift_unchecked(z, LiftTag::Vertical, target))
}

/// Level-`r` component `C(k,r) (Z^{0i})^{v^{k-r} c^r} = C(k,r) D^r Z^{0i}`.
pub fn complete_lift_vector_field(
    z: &VectorField,
    target: CoordSystem,
) -> Result<VectorField, LiftError> {
    check_base_field(z, target.m())?;
    Ok(field_lift_unchecked(z, LiftTag::Complete, target))
}

pub fn lift_vector_field(
    z: &VectorField,
    kind: LiftKind,
    target: CoordSystem,
) -> Result<VectorField, LiftError> {
    check_order(kind, target)?;
    check_base_field(z, target.m())?;
    Ok(field_lift_unchecked(z, kind.tag, target.with_order(kind.order)).embed(target)?)
}

/// One complete-lift step from `^{r}N` to `^{r+1}N`:
/// `Y'^{s} = Y^{s} + D(Y^{s-1})`.
pub fn complete_lift_vector_field_step(y: &VectorField) -> VectorField {
    let chart = y.chart().with_order(y.chart().k() + 1);
    let mut out = Vec::new();
    for (c, a) in y.components() {
        out.push((*c, a.clone()));
        if let Some(level) = c.level() {
            out.push((c.at_level(level + 1), total_derivative(a, chart)));
        }
    }
    VectorField::from_trusted(chart, out)
}

/// `k` single complete-lift steps starting from the base field.
pub fn iterated_complete_lift_vector_field(
    z: &VectorField,
    target: CoordSystem,
) -> Result<VectorField, LiftError> {
    check_base_field(z, target.m())?;
    let mut y = VectorField::from_trusted(target.base(), z.components().map(|(c, e)| (*c, e.clone())));
    for _ in 0..target.k() {
        y = complete_lift_vector_field_step(&y);
    }
    Ok(y)
}

/// Base components stay on `dz^{0i}`.
pub fn vertical_lift_one_form(w: &OneForm, target: CoordSystem) -> Result<OneForm, LiftError> {
    check_base_form(w, target.m())?;
    Ok(form_lift_unchecked(w, LiftTag::Vertical, target))
}

/// Component on `dz^{ri}` is `(w_{0i})^{c^{k-r} v^r} = D^{k-r} w_{0i}`.
pub fn complete_lift_one_form(w: &OneForm, target: CoordSystem) -> Result<OneForm, LiftError> {
    check_base_form(w, target.m())?;
    Ok(form_lift_unchecked(w, LiftTag::Complete, target))
}

pub fn lift_one_form(w: &OneForm, kind: LiftKind, target: CoordSystem) -> Result<OneForm, LiftError> {
    check_order(kind, target)?;
    check_base_form(w, target.m())?;
    Ok(form_lift_unchecked(w, kind.tag, target.with_order(kind.order)).embed(target)?)
}

/// The tensor `phi^L` with `phi^L(X^{c^k}) = (phi X)^L` for every base
/// field `X`, where `L` is the requested lift.
///
/// Each input column is read off a probe `X = z^{0,a} d/dc` built on an
/// auxiliary index `a = m + 1`: the lifted probe has component
/// `C(k,s) z^{s,a}` on level `s`, so the coefficient of `z^{s,a}` in
/// `(phi X)^L` fixes column `(c, s)`.
pub fn lift_tensor11(
    phi: &Tensor11,
    kind: LiftKind,
    target: CoordSystem,
) -> Result<Tensor11, LiftError> {
    check_order(kind, target)?;
    let m = target.m();
    if phi.chart().m() != m {
        return Err(ManifoldError::ChartMismatch { left: phi.chart(), right: target }.into());
    }
    for ((o, i), e) in phi.entries() {
        for c in [o, i] {
            if !is_base(*c, m) {
                return Err(LiftError::InvalidBaseField(*c));
            }
        }
        check_base_expr(e, m, LiftError::InvalidBaseField)?;
    }

    let k = kind.order;
    let chart = target.with_order(k);
    let aux = m + 1;
    let aux_base = CoordSystem::new(aux, 0)?;
    let aux_chart = aux_base.with_order(k);
    let base_phi = Tensor11::from_trusted(aux_base, phi.entries().map(|(key, e)| (*key, e.clone())));

    let mut entries = Vec::new();

    let time_image = apply_tensor11(&base_phi, &VectorField::basis(aux_base, Coord::Time)?)?;
    for (o, e) in field_lift_unchecked(&time_image, kind.tag, aux_chart).components() {
        entries.push(((*o, Coord::Time), e.clone()));
    }

    for input in target.base().fiber() {
        let probe = VectorField::from_trusted(aux_base, [(input, Expr::z(0, aux))]);
        let image = field_lift_unchecked(&apply_tensor11(&base_phi, &probe)?, kind.tag, aux_chart);
        for (o, rhs) in image.components() {
            let mut residual = rhs.clone();
            for s in 0..=k {
                let probe_coord = Coord::z(s, aux);
                let weight = Expr::int(binomial(k, s));
                let entry = wirtinger_derivative(rhs, probe_coord) / &weight;
                if entry.is_zero() {
                    continue;
                }
                if entry.coords().iter().any(|c| c.index() == Some(aux)) {
                    return Err(LiftError::Underdetermined { output: *o, input: input.at_level(s) });
                }
                residual = residual - weight * Expr::coord(probe_coord) * &entry;
                entries.push(((*o, input.at_level(s)), entry));
            }
            if !residual.is_zero() {
                return Err(LiftError::Underdetermined { output: *o, input });
            }
        }
    }
    Ok(Tensor11::from_entries(chart, entries)?.embed(target)?)
}

/// `(phi, xi, eta)` with `phi = -I + xi (x) eta` on a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactStructure {
    chart: CoordSystem,
    phi: Tensor11,
    xi: VectorField,
    eta: OneForm,
}

impl ContactStructure {
    /// Assembles a structure without checking the contact conditions;
    /// [`verify_contact`] reports on them.
    pub fn from_parts(
        phi: Tensor11,
        xi: VectorField,
        eta: OneForm,
    ) -> Result<Self, LiftError> {
        let chart = phi.chart();
        if xi.chart() != chart {
            return Err(ManifoldError::ChartMismatch { left: chart, right: xi.chart() }.into());
        }
        if eta.chart() != chart {
            return Err(ManifoldError::ChartMismatch { left: chart, right: eta.chart() }.into());
        }
        Ok(ContactStructure { chart, phi, xi, eta })
    }

    pub fn chart(&self) -> CoordSystem {
        self.chart
    }

    pub fn phi(&self) -> &Tensor11 {
        &self.phi
    }

    pub fn xi(&self) -> &VectorField {
        &self.xi
    }

    pub fn eta(&self) -> &OneForm {
        &self.eta
    }
}

/// Lifts `xi` completely and `eta` by `kind`, then sets
/// `phi = -I + xi^{c^k} (x) eta^L`.
pub fn build_contact_structure(
    xi: &VectorField,
    eta: &OneForm,
    kind: LiftKind,
    target: CoordSystem,
) -> Result<ContactStructure, LiftError> {
    let xi_l = lift_vector_field(xi, LiftKind::complete(kind.order), target)?;
    let eta_l = lift_one_form(eta, kind, target)?;
    let norm = pairing(&eta_l, &xi_l)?;
    if !structurally_equal(&norm, &Expr::one()) {
        return Err(LiftError::NotNormalized(Box::new(norm)));
    }
    let phi = Tensor11::identity(target)
        .scale(&Expr::int(-1))
        .add(&Tensor11::outer(&xi_l, &eta_l)?)?;
    ContactStructure::from_parts(phi, xi_l, eta_l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactReport {
    pub chart: CoordSystem,
    pub phi_xi_zero: bool,
    pub eta_phi_zero: bool,
    pub eta_xi_one: bool,
    /// Numeric kernel dimension of `phi` at each sample point.
    pub kernel_dimensions: Vec<usize>,
    /// `phi(xi) = 0` numerically at each sample point.
    pub kernel_contains_xi: bool,
    /// Numeric rank over the complex field, i.e. `2m(k+1)` for a contact
    /// structure on the real-dimension count used here.
    pub real_rank: usize,
    /// The count `m(k+1)`.
    pub complex_rank: usize,
    pub counterexamples: Vec<String>,
}

impl ContactReport {
    pub fn passed(&self) -> bool {
        self.phi_xi_zero
            && self.eta_phi_zero
            && self.eta_xi_one
            && self.kernel_contains_xi
            && !self.kernel_dimensions.is_empty()
            && self.kernel_dimensions.iter().all(|d| *d == 1)
    }
}

const SAMPLE_POINTS: usize = 10;
const SAMPLE_SEED: u64 = 0x5eed_c0de;
const RANK_TOLERANCE: f64 = 1e-9;

fn random_point(chart: CoordSystem, rng: &mut ChaCha8Rng) -> BTreeMap<Coord, Complex64> {
    let mut p = BTreeMap::new();
    p.insert(Coord::Time, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    for r in 0..=chart.k() {
        for i in 1..=chart.m() {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            p.insert(Coord::z(r, i), z);
            p.insert(Coord::zbar(r, i), z.conj());
        }
    }
    p
}

/// Checks the contact conditions symbolically and the kernel of `phi`
/// numerically at fixed pseudo-random points.
pub fn verify_contact(cs: &ContactStructure) -> ContactReport {
    let chart = cs.chart;
    let mut counterexamples = Vec::new();

    let phi_xi = apply_tensor11(&cs.phi, &cs.xi).expect("charts agree by construction");
    let phi_xi_zero = phi_xi.is_zero();
    for (c, e) in phi_xi.components() {
        counterexamples.push(format!("phi(xi)[{c}] = {e}"));
    }

    let eta_phi = cs.phi.precompose(&cs.eta).expect("charts agree by construction");
    let eta_phi_zero = eta_phi.is_zero();
    for (c, e) in eta_phi.components() {
        counterexamples.push(format!("(eta o phi)[{c}] = {e}"));
    }

    let norm = pairing(&cs.eta, &cs.xi).expect("charts agree by construction");
    let eta_xi_one = structurally_equal(&norm, &Expr::one());
    if !eta_xi_one {
        counterexamples.push(format!("eta(xi) = {norm}"));
    }

    let coords = chart.enumerate();
    let n = coords.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut kernel_dimensions = Vec::with_capacity(SAMPLE_POINTS);
    let mut kernel_contains_xi = true;
    let mut real_rank = 0;
    for sample in 0..SAMPLE_POINTS {
        let point = random_point(chart, &mut rng);
        let eval = |e: &Expr| eval_numeric(e, &point);
        let mut matrix = DMatrix::<Complex64>::zeros(n, n);
        let mut xi_vec = vec![Complex64::new(0.0, 0.0); n];
        let mut failed = false;
        for (row, o) in coords.iter().enumerate() {
            match eval(&cs.xi.component(*o)) {
                Ok(v) => xi_vec[row] = v,
                Err(err) => {
                    counterexamples.push(format!("sample {sample}: xi[{o}]: {err}"));
                    failed = true;
                }
            }
            for (col, i) in coords.iter().enumerate() {
                match eval(&cs.phi.entry(*o, *i)) {
                    Ok(v) => matrix[(row, col)] = v,
                    Err(err) => {
                        counterexamples.push(format!("sample {sample}: phi[{o},{i}]: {err}"));
                        failed = true;
                    }
                }
            }
        }
        if failed {
            kernel_contains_xi = false;
            kernel_dimensions.push(usize::MAX);
            continue;
        }
        let singular = matrix.clone().singular_values();
        let scale = singular.iter().cloned().fold(0.0, f64::max).max(1.0);
        let rank = singular.iter().filter(|s| **s > RANK_TOLERANCE * scale).count();
        real_rank = real_rank.max(rank);
        let dim = n - rank;
        if dim != 1 {
            counterexamples.push(format!("sample {sample}: kernel dimension {dim}"));
        }
        kernel_dimensions.push(dim);

        let xi_norm = xi_vec.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let image: f64 = (0..n)
            .map(|row| (0..n).map(|col| matrix[(row, col)] * xi_vec[col]).sum::<Complex64>().norm_sqr())
            .sum::<f64>()
            .sqrt();
        if xi_norm == 0.0 || image > RANK_TOLERANCE * scale * xi_norm {
            kernel_contains_xi = false;
            counterexamples.push(format!("sample {sample}: |phi(xi)| = {image:e}, |xi| = {xi_norm:e}"));
        }
    }

    ContactReport {
        chart,
        phi_xi_zero,
        eta_phi_zero,
        eta_xi_one,
        kernel_dimensions,
        kernel_contains_xi,
        real_rank,
        complex_rank: (chart.m() * (chart.k() + 1)) as usize,
        counterexamples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(m: u32, k: u32) -> CoordSystem {
        CoordSystem::new(m, k).unwrap()
    }

    fn z(r: u32) -> Expr {
        Expr::z(r, 1)
    }

    fn zb(r: u32) -> Expr {
        Expr::zbar(r, 1)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(2, 1), 2);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn function_lifts() {
        let f = &z(0) * &zb(0);
        assert_eq!(vertical_lift_function(&f, chart(1, 3)).unwrap(), f);
        assert_eq!(vertical_lift_function(&Expr::t(), chart(1, 2)).unwrap(), Expr::t());
        assert!(matches!(
            vertical_lift_function(&z(1), chart(1, 2)),
            Err(LiftError::InvalidBaseExpression(_))
        ));

        let fc = complete_lift_function(&f, chart(1, 1)).unwrap();
        assert!(structurally_equal(&fc, &(&z(1) * &zb(0) + &zb(1) * &z(0))));
        assert!(complete_lift_function(&Expr::int(7), chart(1, 2)).unwrap().is_zero());
        assert_eq!(complete_lift_function(&z(0), chart(1, 1)).unwrap(), z(1));
        assert_eq!(complete_lift_function(&f, chart(1, 0)).unwrap(), f);
    }

    #[test]
    fn time_term_uses_t_coefficient() {
        let fc = complete_lift_function(&Expr::t(), chart(1, 1)).unwrap();
        assert_eq!(fc, Expr::t());
    }

    #[test]
    fn vector_field_lifts() {
        let base = chart(1, 0);
        let zf = VectorField::from_components(base, [(Coord::Time, Expr::one()), (Coord::z(0, 1), z(0))]).unwrap();
        let v = vertical_lift_vector_field(&zf, chart(1, 1)).unwrap();
        let expected =
            VectorField::from_components(chart(1, 1), [(Coord::Time, Expr::one()), (Coord::z(1, 1), z(0))]).unwrap();
        assert!(v.structurally_eq(&expected));

        let c = complete_lift_vector_field(&zf, chart(1, 1)).unwrap();
        let expected = VectorField::from_components(
            chart(1, 1),
            [(Coord::Time, Expr::one()), (Coord::z(0, 1), z(0)), (Coord::z(1, 1), z(1))],
        )
        .unwrap();
        assert!(c.structurally_eq(&expected));

        let dt = VectorField::basis(base, Coord::Time).unwrap();
        for k in 0..3 {
            let target = chart(1, k);
            assert!(complete_lift_vector_field(&dt, target)
                .unwrap()
                .structurally_eq(&VectorField::basis(target, Coord::Time).unwrap()));
        }
        assert!(complete_lift_vector_field(&zf, base).unwrap().structurally_eq(&zf));
    }

    #[test]
    fn vertical_field_identity_example() {
        let target = chart(1, 1);
        let zf = VectorField::from_components(chart(1, 0), [(Coord::Time, Expr::one()), (Coord::z(0, 1), zb(0))])
            .unwrap();
        let lhs = vertical_lift_vector_field(&zf, target)
            .unwrap()
            .apply(&complete_lift_function(&z(0), target).unwrap());
        let rhs = vertical_lift_function(&zf.apply(&z(0)), target).unwrap();
        assert_eq!(lhs, zb(0));
        assert_eq!(rhs, zb(0));
    }

    #[test]
    fn closed_form_matches_iterated_steps() {
        let zf = VectorField::from_components(
            chart(1, 0),
            [(Coord::Time, Expr::one()), (Coord::z(0, 1), &z(0) * &zb(0)), (Coord::zbar(0, 1), z(0).pow(2))],
        )
        .unwrap();
        for k in 1..=3 {
            let target = chart(1, k);
            let closed = complete_lift_vector_field(&zf, target).unwrap();
            let iterated = iterated_complete_lift_vector_field(&zf, target).unwrap();
            assert!(closed.structurally_eq(&iterated), "k={k}");
        }
    }

    #[test]
    fn one_form_lifts() {
        let base = chart(1, 0);
        let w = OneForm::from_components(base, [(Coord::Time, Expr::one()), (Coord::z(0, 1), zb(0))]).unwrap();
        let v = vertical_lift_one_form(&w, chart(1, 2)).unwrap();
        assert!(v.structurally_eq(&w.embed(chart(1, 2)).unwrap()));

        let c = complete_lift_one_form(&w, chart(1, 1)).unwrap();
        let expected = OneForm::from_components(
            chart(1, 1),
            [(Coord::Time, Expr::one()), (Coord::z(1, 1), zb(0)), (Coord::z(0, 1), zb(1))],
        )
        .unwrap();
        assert!(c.structurally_eq(&expected));

        let dt = OneForm::basis(base, Coord::Time).unwrap();
        for tag in [LiftTag::Vertical, LiftTag::Complete] {
            let lifted = lift_one_form(&dt, LiftKind { tag, order: 2 }, chart(1, 2)).unwrap();
            assert!(lifted.structurally_eq(&OneForm::basis(chart(1, 2), Coord::Time).unwrap()));
        }
    }

    #[test]
    fn tensor_lifts_satisfy_action_identity() {
        let base = chart(1, 0);
        let phi = Tensor11::from_entries(
            base,
            [
                ((Coord::z(0, 1), Coord::zbar(0, 1)), z(0)),
                ((Coord::zbar(0, 1), Coord::z(0, 1)), Expr::i()),
                ((Coord::Time, Coord::z(0, 1)), zb(0)),
                ((Coord::z(0, 1), Coord::Time), Expr::int(2)),
            ],
        )
        .unwrap();
        let x = VectorField::from_components(
            base,
            [(Coord::Time, Expr::one()), (Coord::z(0, 1), zb(0)), (Coord::zbar(0, 1), &z(0) * &zb(0))],
        )
        .unwrap();
        for k in 0..=2 {
            let target = chart(1, k);
            for kind in [LiftKind::vertical(k), LiftKind::complete(k)] {
                let lifted = lift_tensor11(&phi, kind, target).unwrap();
                let lhs = apply_tensor11(&lifted, &complete_lift_vector_field(&x, target).unwrap()).unwrap();
                let rhs = lift_vector_field(&apply_tensor11(&phi, &x).unwrap(), kind, target).unwrap();
                assert!(lhs.structurally_eq(&rhs), "{kind}");
            }
        }
        let zero = Tensor11::zero(base);
        assert!(lift_tensor11(&zero, LiftKind::complete(2), chart(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn contact_structures() {
        let base = chart(1, 0);
        let xi = VectorField::basis(base, Coord::Time).unwrap();
        let eta = OneForm::basis(base, Coord::Time).unwrap();
        for k in 0..=2 {
            for kind in [LiftKind::vertical(k), LiftKind::complete(k)] {
                let cs = build_contact_structure(&xi, &eta, kind, chart(1, k)).unwrap();
                assert!(apply_tensor11(cs.phi(), cs.xi()).unwrap().is_zero());
                let report = verify_contact(&cs);
                assert!(report.passed(), "{report:?}");
                assert_eq!(report.real_rank, 2 * (k as usize + 1));
                assert_eq!(report.complex_rank, k as usize + 1);
            }
        }

        let eta2 = eta.scale(&Expr::int(2));
        assert!(matches!(
            build_contact_structure(&xi, &eta2, LiftKind::vertical(1), chart(1, 1)),
            Err(LiftError::NotNormalized(_))
        ));
    }

    #[test]
    fn perturbed_contact_structure_fails() {
        let base = chart(1, 0);
        let xi = VectorField::basis(base, Coord::Time).unwrap();
        let eta = OneForm::basis(base, Coord::Time).unwrap();
        let cs = build_contact_structure(&xi, &eta, LiftKind::complete(1), chart(1, 1)).unwrap();
        let bump = Tensor11::from_entries(cs.chart(), [((Coord::z(0, 1), Coord::Time), Expr::ratio(1, 1000))]).unwrap();
        let perturbed =
            ContactStructure::from_parts(cs.phi().add(&bump).unwrap(), cs.xi().clone(), cs.eta().clone()).unwrap();
        let report = verify_contact(&perturbed);
        assert!(!report.phi_xi_zero);
        assert!(!report.passed());
    }
}
