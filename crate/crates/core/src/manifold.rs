//! Charts of the extension `^kN = R x ^kM` and the coordinate-indexed
//! geometric objects that live on them.
//!
//! All objects are sparse: a coordinate (or pair) without an entry has a
//! zero coefficient. Stored coefficients are normalized and never zero.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::symcore::{structurally_equal, wirtinger_derivative, Coord, Expr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("chart mismatch: {left} vs {right}")]
    ChartMismatch { left: CoordSystem, right: CoordSystem },
    #[error("coordinate {coord} is outside chart {chart}")]
    CoordinateOutsideChart { coord: Coord, chart: CoordSystem },
    #[error("invalid chart: m must be at least 1 (got m={m})")]
    InvalidChart { m: u32 },
}

/// Chart `(t, z^{ri}, zbar^{ri})`, `0 <= r <= k`, `1 <= i <= m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordSystem {
    m: u32,
    k: u32,
}

impl CoordSystem {
    pub fn new(m: u32, k: u32) -> Result<Self, ManifoldError> {
        if m == 0 {
            return Err(ManifoldError::InvalidChart { m });
        }
        Ok(CoordSystem { m, k })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The base chart of `N` with the same fiber dimension.
    pub fn base(&self) -> CoordSystem {
        CoordSystem { m: self.m, k: 0 }
    }

    pub fn with_order(&self, k: u32) -> CoordSystem {
        CoordSystem { m: self.m, k }
    }

    /// `2m(k+1) + 1`.
    pub fn dimension(&self) -> usize {
        (2 * self.m * (self.k + 1) + 1) as usize
    }

    pub fn contains(&self, c: Coord) -> bool {
        match c {
            Coord::Time => true,
            Coord::Z { level, index } | Coord::ZBar { level, index } => {
                level <= self.k && index >= 1 && index <= self.m
            }
        }
    }

    /// All coordinates in canonical order.
    pub fn enumerate(&self) -> Vec<Coord> {
        let mut out = Vec::with_capacity(self.dimension());
        out.push(Coord::Time);
        out.extend(self.fiber());
        out
    }

    pub fn fiber(&self) -> Vec<Coord> {
        (0..=self.k).flat_map(|r| self.level(r)).collect()
    }

    /// Fiber coordinates at level `r`, in canonical order.
    pub fn level(&self, r: u32) -> Vec<Coord> {
        (1..=self.m)
            .flat_map(|i| [Coord::z(r, i), Coord::zbar(r, i)])
            .collect()
    }

    pub fn check_expr(&self, e: &Expr) -> Result<(), ManifoldError> {
        match e.coords().into_iter().find(|c| !self.contains(*c)) {
            Some(coord) => Err(ManifoldError::CoordinateOutsideChart { coord, chart: *self }),
            None => Ok(()),
        }
    }

    pub(crate) fn same_as(&self, other: &CoordSystem) -> Result<(), ManifoldError> {
        if self == other {
            Ok(())
        } else {
            Err(ManifoldError::ChartMismatch { left: *self, right: *other })
        }
    }
}

impl fmt::Display for CoordSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, k={})", self.m, self.k)
    }
}

fn insert_nonzero<K: Ord>(map: &mut BTreeMap<K, Expr>, key: K, value: Expr) {
    let value = value.normalize();
    if value.is_zero() {
        map.remove(&key);
    } else {
        map.insert(key, value);
    }
}

fn accumulate<K: Ord + Clone>(map: &mut BTreeMap<K, Expr>, key: K, value: Expr) {
    let sum = match map.get(&key) {
        Some(old) => old + &value,
        None => value,
    };
    insert_nonzero(map, key, sum);
}

fn validate_entries<'a, I>(chart: &CoordSystem, coords: I) -> Result<(), ManifoldError>
where
    I: IntoIterator<Item = (&'a [Coord], &'a Expr)>,
{
    for (keys, e) in coords {
        for k in keys {
            if !chart.contains(*k) {
                return Err(ManifoldError::CoordinateOutsideChart { coord: *k, chart: *chart });
            }
        }
        chart.check_expr(e)?;
    }
    Ok(())
}

/// `sum_c Z[c] d/dc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: CoordSystem,
    components: BTreeMap<Coord, Expr>,
}

impl VectorField {
    pub fn zero(chart: CoordSystem) -> Self {
        VectorField { chart, components: BTreeMap::new() }
    }

    /// The coordinate basis field `d/dc`.
    pub fn basis(chart: CoordSystem, c: Coord) -> Result<Self, ManifoldError> {
        VectorField::from_components(chart, [(c, Expr::one())])
    }

    pub fn from_components<I>(chart: CoordSystem, components: I) -> Result<Self, ManifoldError>
    where
        I: IntoIterator<Item = (Coord, Expr)>,
    {
        let mut out = VectorField::zero(chart);
        for (c, e) in components {
            validate_entries(&chart, [(std::slice::from_ref(&c), &e)])?;
            accumulate(&mut out.components, c, e);
        }
        Ok(out)
    }

    /// Caller guarantees that keys and referenced coordinates are in `chart`.
    pub(crate) fn from_trusted<I>(chart: CoordSystem, components: I) -> Self
    where
        I: IntoIterator<Item = (Coord, Expr)>,
    {
        let mut out = VectorField::zero(chart);
        for (c, e) in components {
            accumulate(&mut out.components, c, e);
        }
        out
    }

    pub fn chart(&self) -> CoordSystem {
        self.chart
    }

    pub fn component(&self, c: Coord) -> Expr {
        self.components.get(&c).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Coord, &Expr)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Directional derivative `Z(f) = sum_c Z[c] df/dc`.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::sum(
            self.components
                .iter()
                .map(|(c, z)| z * &wirtinger_derivative(f, *c)),
        )
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField, ManifoldError> {
        self.chart.same_as(&other.chart)?;
        let mut out = self.clone();
        for (c, e) in &other.components {
            accumulate(&mut out.components, *c, e.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Expr) -> VectorField {
        VectorField::from_trusted(self.chart, self.components.iter().map(|(c, e)| (*c, e * s)))
    }

    /// Same components on a chart that contains every key of this one.
    pub fn embed(&self, chart: CoordSystem) -> Result<VectorField, ManifoldError> {
        VectorField::from_components(chart, self.components.clone())
    }

    pub fn structurally_eq(&self, other: &VectorField) -> bool {
        self.chart == other.chart
            && keys_union(&self.components, &other.components)
                .all(|c| structurally_equal(&self.component(c), &other.component(c)))
    }
}

/// `sum_c w[c] dc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    chart: CoordSystem,
    components: BTreeMap<Coord, Expr>,
}

impl OneForm {
    pub fn zero(chart: CoordSystem) -> Self {
        OneForm { chart, components: BTreeMap::new() }
    }

    pub fn basis(chart: CoordSystem, c: Coord) -> Result<Self, ManifoldError> {
        OneForm::from_components(chart, [(c, Expr::one())])
    }

    pub fn from_components<I>(chart: CoordSystem, components: I) -> Result<Self, ManifoldError>
    where
        I: IntoIterator<Item = (Coord, Expr)>,
    {
        let mut out = OneForm::zero(chart);
        for (c, e) in components {
            validate_entries(&chart, [(std::slice::from_ref(&c), &e)])?;
            accumulate(&mut out.components, c, e);
        }
        Ok(out)
    }

    pub(crate) fn from_trusted<I>(chart: CoordSystem, components: I) -> Self
    where
        I: IntoIterator<Item = (Coord, Expr)>,
    {
        let mut out = OneForm::zero(chart);
        for (c, e) in components {
            accumulate(&mut out.components, c, e);
        }
        out
    }

    /// The differential `df = sum_c (df/dc) dc` over every chart coordinate.
    pub fn differential(f: &Expr, chart: CoordSystem) -> Result<Self, ManifoldError> {
        chart.check_expr(f)?;
        Ok(OneForm::from_trusted(
            chart,
            chart
                .enumerate()
                .into_iter()
                .map(|c| (c, wirtinger_derivative(f, c))),
        ))
    }

    pub fn chart(&self) -> CoordSystem {
        self.chart
    }

    pub fn component(&self, c: Coord) -> Expr {
        self.components.get(&c).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Coord, &Expr)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &OneForm) -> Result<OneForm, ManifoldError> {
        self.chart.same_as(&other.chart)?;
        let mut out = self.clone();
        for (c, e) in &other.components {
            accumulate(&mut out.components, *c, e.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Expr) -> OneForm {
        OneForm::from_trusted(self.chart, self.components.iter().map(|(c, e)| (*c, e * s)))
    }

    pub fn embed(&self, chart: CoordSystem) -> Result<OneForm, ManifoldError> {
        OneForm::from_components(chart, self.components.clone())
    }

    pub fn structurally_eq(&self, other: &OneForm) -> bool {
        self.chart == other.chart
            && keys_union(&self.components, &other.components)
                .all(|c| structurally_equal(&self.component(c), &other.component(c)))
    }
}

/// `sum_{c1 < c2} Phi[(c1, c2)] dc1 ^ dc2`, stored on canonically ordered
/// pairs only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoForm {
    chart: CoordSystem,
    terms: BTreeMap<(Coord, Coord), Expr>,
}

impl TwoForm {
    pub fn zero(chart: CoordSystem) -> Self {
        TwoForm { chart, terms: BTreeMap::new() }
    }

    /// Adds `coeff * da ^ db`, reordering with a sign flip when `a > b`.
    /// Self pairs vanish.
    pub fn add_wedge(&mut self, a: Coord, b: Coord, coeff: Expr) -> Result<(), ManifoldError> {
        validate_entries(&self.chart, [(&[a, b][..], &coeff)])?;
        self.add_wedge_trusted(a, b, coeff);
        Ok(())
    }

    fn add_wedge_trusted(&mut self, a: Coord, b: Coord, coeff: Expr) {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => {}
            Less => accumulate(&mut self.terms, (a, b), coeff),
            Greater => accumulate(&mut self.terms, (b, a), -coeff),
        }
    }

    pub fn chart(&self) -> CoordSystem {
        self.chart
    }

    /// Coefficient of `da ^ db` (antisymmetric in `a`, `b`).
    pub fn coefficient(&self, a: Coord, b: Coord) -> Expr {
        if a <= b {
            self.terms.get(&(a, b)).cloned().unwrap_or_else(Expr::zero)
        } else {
            -self.coefficient(b, a)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Coord, Coord), &Expr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> TwoForm {
        TwoForm {
            chart: self.chart,
            terms: self.terms.iter().map(|(k, e)| (*k, -e)).collect(),
        }
    }

    /// `d Phi = 0`: for every triple `a < b < c` the cyclic sum
    /// `d_a Phi_bc - d_b Phi_ac + d_c Phi_ab` vanishes.
    pub fn is_closed(&self) -> bool {
        let coords = self.chart.enumerate();
        for (ia, a) in coords.iter().enumerate() {
            for (ib, b) in coords.iter().enumerate().skip(ia + 1) {
                for c in coords.iter().skip(ib + 1) {
                    let s = wirtinger_derivative(&self.coefficient(*b, *c), *a)
                        - wirtinger_derivative(&self.coefficient(*a, *c), *b)
                        + wirtinger_derivative(&self.coefficient(*a, *b), *c);
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True when every coefficient is a constant.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(|e| e.as_constant().is_some())
    }

    pub fn structurally_eq(&self, other: &TwoForm) -> bool {
        self.chart == other.chart
            && keys_union(&self.terms, &other.terms).all(|(a, b)| {
                structurally_equal(&self.coefficient(a, b), &other.coefficient(a, b))
            })
    }
}

/// Type (1,1) tensor with entries indexed by `(output, input)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor11 {
    chart: CoordSystem,
    entries: BTreeMap<(Coord, Coord), Expr>,
}

impl Tensor11 {
    pub fn zero(chart: CoordSystem) -> Self {
        Tensor11 { chart, entries: BTreeMap::new() }
    }

    pub fn identity(chart: CoordSystem) -> Self {
        Tensor11::from_trusted(chart, chart.enumerate().into_iter().map(|c| ((c, c), Expr::one())))
    }

    pub fn from_entries<I>(chart: CoordSystem, entries: I) -> Result<Self, ManifoldError>
    where
        I: IntoIterator<Item = ((Coord, Coord), Expr)>,
    {
        let mut out = Tensor11::zero(chart);
        for ((o, i), e) in entries {
            validate_entries(&chart, [(&[o, i][..], &e)])?;
            accumulate(&mut out.entries, (o, i), e);
        }
        Ok(out)
    }

    pub(crate) fn from_trusted<I>(chart: CoordSystem, entries: I) -> Self
    where
        I: IntoIterator<Item = ((Coord, Coord), Expr)>,
    {
        let mut out = Tensor11::zero(chart);
        for (key, e) in entries {
            accumulate(&mut out.entries, key, e);
        }
        out
    }

    /// `X (x) w`, acting as `Y -> w(Y) X`.
    pub fn outer(x: &VectorField, w: &OneForm) -> Result<Self, ManifoldError> {
        x.chart.same_as(&w.chart)?;
        Ok(Tensor11::from_trusted(
            x.chart,
            x.components()
                .flat_map(|(o, xe)| w.components().map(move |(i, we)| ((*o, *i), xe * we))),
        ))
    }

    pub fn chart(&self) -> CoordSystem {
        self.chart
    }

    pub fn entry(&self, output: Coord, input: Coord) -> Expr {
        self.entries.get(&(output, input)).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Coord, Coord), &Expr)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Tensor11) -> Result<Tensor11, ManifoldError> {
        self.chart.same_as(&other.chart)?;
        let mut out = self.clone();
        for (k, e) in &other.entries {
            accumulate(&mut out.entries, *k, e.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Expr) -> Tensor11 {
        Tensor11::from_trusted(self.chart, self.entries.iter().map(|(k, e)| (*k, e * s)))
    }

    pub fn embed(&self, chart: CoordSystem) -> Result<Tensor11, ManifoldError> {
        Tensor11::from_entries(chart, self.entries.clone())
    }

    /// Column of input coordinate `input` as a vector field.
    pub fn column(&self, input: Coord) -> VectorField {
        VectorField::from_trusted(
            self.chart,
            self.entries
                .iter()
                .filter(|((_, i), _)| *i == input)
                .map(|((o, _), e)| (*o, e.clone())),
        )
    }

    /// The 1-form `w o phi`, i.e. `Y -> w(phi Y)`.
    pub fn precompose(&self, w: &OneForm) -> Result<OneForm, ManifoldError> {
        self.chart.same_as(&w.chart)?;
        Ok(OneForm::from_trusted(
            self.chart,
            self.entries
                .iter()
                .map(|((o, i), e)| (*i, &w.component(*o) * e)),
        ))
    }

    pub fn structurally_eq(&self, other: &Tensor11) -> bool {
        self.chart == other.chart
            && keys_union(&self.entries, &other.entries)
                .all(|(o, i)| structurally_equal(&self.entry(o, i), &other.entry(o, i)))
    }
}

fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I, prefix: &str) -> fmt::Result
where
    I: Iterator<Item = (&'a Coord, &'a Expr)>,
{
    let mut empty = true;
    for (c, e) in terms {
        if !empty {
            f.write_str(" + ")?;
        }
        write!(f, "({e}) {prefix}{c}")?;
        empty = false;
    }
    if empty {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.components.iter(), "d/d")
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.components.iter(), "d")
    }
}

fn keys_union<'a, K: Ord + Copy + 'a>(
    a: &'a BTreeMap<K, Expr>,
    b: &'a BTreeMap<K, Expr>,
) -> impl Iterator<Item = K> + 'a {
    let mut keys: Vec<K> = a.keys().chain(b.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
}

/// `w(Z) = sum_c w[c] Z[c]`.
pub fn pairing(w: &OneForm, z: &VectorField) -> Result<Expr, ManifoldError> {
    w.chart.same_as(&z.chart)?;
    Ok(Expr::sum(
        w.components
            .iter()
            .filter_map(|(c, we)| z.components.get(c).map(|ze| we * ze)),
    ))
}

/// Coefficient of `dc1 ^ dc2` (`c1 < c2`) is `d w[c2]/dc1 - d w[c1]/dc2`.
pub fn exterior_derivative_1(w: &OneForm) -> TwoForm {
    let mut out = TwoForm::zero(w.chart);
    let coords = w.chart.enumerate();
    for (n, a) in coords.iter().enumerate() {
        for b in coords.iter().skip(n + 1) {
            let coeff = wirtinger_derivative(&w.component(*b), *a)
                - wirtinger_derivative(&w.component(*a), *b);
            out.add_wedge_trusted(*a, *b, coeff);
        }
    }
    out
}

/// `i_Z (a ^ b) = a(Z) b - b(Z) a`.
pub fn interior_product(z: &VectorField, phi: &TwoForm) -> Result<OneForm, ManifoldError> {
    z.chart.same_as(&phi.chart)?;
    let mut out = OneForm::zero(z.chart);
    for ((a, b), coeff) in &phi.terms {
        let za = z.component(*a);
        if !za.is_zero() {
            accumulate(&mut out.components, *b, coeff * &za);
        }
        let zb = z.component(*b);
        if !zb.is_zero() {
            accumulate(&mut out.components, *a, -(coeff * &zb));
        }
    }
    Ok(out)
}

/// Matrix action `(phi Z)[o] = sum_i phi[(o, i)] Z[i]`.
pub fn apply_tensor11(phi: &Tensor11, z: &VectorField) -> Result<VectorField, ManifoldError> {
    phi.chart.same_as(&z.chart)?;
    Ok(VectorField::from_trusted(
        phi.chart,
        phi.entries
            .iter()
            .filter_map(|((o, i), e)| z.components.get(i).map(|ze| (*o, e * ze))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(m: u32, k: u32) -> CoordSystem {
        CoordSystem::new(m, k).unwrap()
    }

    #[test]
    fn chart_enumeration() {
        let c = chart(2, 1);
        let coords = c.enumerate();
        assert_eq!(coords.len(), 2 * 2 * 2 + 1);
        assert_eq!(coords.len(), c.dimension());
        let mut sorted = coords.clone();
        sorted.sort();
        assert_eq!(coords, sorted);
        assert!(CoordSystem::new(0, 1).is_err());
        assert!(!c.contains(Coord::z(2, 1)));
        assert!(!c.contains(Coord::z(0, 3)));
    }

    #[test]
    fn pairing_examples() {
        let c = chart(1, 0);
        let dt = OneForm::basis(c, Coord::Time).unwrap();
        let d_dt = VectorField::basis(c, Coord::Time).unwrap();
        assert_eq!(pairing(&dt, &d_dt).unwrap(), Expr::one());

        let dz = OneForm::basis(c, Coord::z(0, 1)).unwrap();
        let d_dzb = VectorField::basis(c, Coord::zbar(0, 1)).unwrap();
        assert!(pairing(&dz, &d_dzb).unwrap().is_zero());

        let w = OneForm::from_components(c, [(Coord::z(0, 1), Expr::zbar(0, 1))]).unwrap();
        let z = VectorField::from_components(c, [(Coord::z(0, 1), Expr::z(0, 1))]).unwrap();
        assert!(structurally_equal(
            &pairing(&w, &z).unwrap(),
            &(Expr::z(0, 1) * Expr::zbar(0, 1))
        ));

        let other = VectorField::zero(chart(1, 1));
        assert!(matches!(pairing(&w, &other), Err(ManifoldError::ChartMismatch { .. })));
    }

    #[test]
    fn exterior_derivative_examples() {
        let c = chart(1, 0);
        let w = OneForm::from_components(c, [(Coord::z(0, 1), Expr::zbar(0, 1))]).unwrap();
        let d = exterior_derivative_1(&w);
        assert_eq!(d.coefficient(Coord::z(0, 1), Coord::zbar(0, 1)), Expr::int(-1));
        assert_eq!(d.coefficient(Coord::zbar(0, 1), Coord::z(0, 1)), Expr::one());

        let f = Expr::z(0, 1) * Expr::zbar(0, 1);
        let df = OneForm::differential(&f, c).unwrap();
        assert!(exterior_derivative_1(&df).is_zero());

        let dt = OneForm::basis(c, Coord::Time).unwrap();
        assert!(exterior_derivative_1(&dt).is_zero());
    }

    fn kaehler(c: CoordSystem) -> TwoForm {
        let mut phi = TwoForm::zero(c);
        phi.add_wedge(Coord::zbar(0, 1), Coord::z(0, 1), -Expr::i()).unwrap();
        phi
    }

    #[test]
    fn interior_product_examples() {
        let c = chart(1, 0);
        let phi = kaehler(c);
        let dz = VectorField::basis(c, Coord::z(0, 1)).unwrap();
        let out = interior_product(&dz, &phi).unwrap();
        let expected = OneForm::from_components(c, [(Coord::zbar(0, 1), Expr::i())]).unwrap();
        assert!(out.structurally_eq(&expected));

        let dt = VectorField::basis(c, Coord::Time).unwrap();
        assert!(interior_product(&dt, &phi).unwrap().is_zero());

        let a = Expr::z(0, 1) * Expr::int(3);
        let b = Expr::zbar(0, 1) + Expr::t();
        let z = VectorField::from_components(c, [(Coord::z(0, 1), a.clone()), (Coord::zbar(0, 1), b.clone())])
            .unwrap();
        let out = interior_product(&z, &phi).unwrap();
        let expected = OneForm::from_components(
            c,
            [(Coord::z(0, 1), -Expr::i() * b), (Coord::zbar(0, 1), Expr::i() * a)],
        )
        .unwrap();
        assert!(out.structurally_eq(&expected));
    }

    #[test]
    fn tensor_examples() {
        let c = chart(1, 1);
        let z = VectorField::from_components(
            c,
            [(Coord::Time, Expr::one()), (Coord::z(1, 1), Expr::z(0, 1))],
        )
        .unwrap();
        assert!(apply_tensor11(&Tensor11::identity(c), &z).unwrap().structurally_eq(&z));
        assert!(apply_tensor11(&Tensor11::zero(c), &z).unwrap().is_zero());

        let xi = VectorField::basis(c, Coord::Time).unwrap();
        let eta = OneForm::basis(c, Coord::Time).unwrap();
        let phi = Tensor11::identity(c)
            .scale(&Expr::int(-1))
            .add(&Tensor11::outer(&xi, &eta).unwrap())
            .unwrap();
        assert!(apply_tensor11(&phi, &xi).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_antisymmetric_by_construction() {
        let c = chart(1, 0);
        let mut phi = TwoForm::zero(c);
        phi.add_wedge(Coord::z(0, 1), Coord::z(0, 1), Expr::one()).unwrap();
        assert!(phi.is_zero());
        phi.add_wedge(Coord::zbar(0, 1), Coord::z(0, 1), Expr::int(2)).unwrap();
        phi.add_wedge(Coord::z(0, 1), Coord::zbar(0, 1), Expr::int(2)).unwrap();
        assert!(phi.is_zero());
        assert!(phi.add_wedge(Coord::z(1, 1), Coord::Time, Expr::one()).is_err());
    }
}
