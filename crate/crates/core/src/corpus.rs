//! Seeded generators for random expressions, fields, forms and tensors on
//! the base chart. The same seed always yields the same objects.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::manifold::{CoordSystem, OneForm, Tensor11, VectorField};
use crate::symcore::{conjugate_swap, Constant, Coord, Expr};

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Small nonzero complex rational.
    pub fn constant(&mut self) -> Constant {
        loop {
            let re = self.rng.gen_range(-3..=3);
            let im = self.rng.gen_range(-3..=3);
            let den = self.rng.gen_range(1..=3);
            if re != 0 || im != 0 {
                return Constant::from_parts((re, den), (im, den));
            }
        }
    }

    fn monomial(&mut self, coords: &[Coord], max_degree: u32) -> Expr {
        let degree = self.rng.gen_range(0..=max_degree);
        Expr::product((0..degree).map(|_| Expr::coord(*coords.choose(&mut self.rng).unwrap())))
    }

    /// Polynomial in the given coordinates with 1 to `max_terms` terms.
    pub fn polynomial_in(&mut self, coords: &[Coord], max_terms: usize, max_degree: u32) -> Expr {
        let n = self.rng.gen_range(1..=max_terms);
        Expr::sum((0..n).map(|_| Expr::constant(self.constant()) * self.monomial(coords, max_degree)))
    }

    /// Polynomial over the base fiber coordinates of `m` indices.
    pub fn base_polynomial(&mut self, m: u32) -> Expr {
        let coords = base_fiber(m);
        self.polynomial_in(&coords, 3, 3)
    }

    /// `P + swap(P)`, invariant under the formal conjugation.
    pub fn self_conjugate_polynomial(&mut self, m: u32) -> Expr {
        let p = self.base_polynomial(m);
        &p + &conjugate_swap(&p)
    }

    /// Polynomial possibly multiplied by an exponential of a linear form.
    pub fn expression_with_exp(&mut self, chart: CoordSystem) -> Expr {
        let coords: Vec<Coord> = chart.enumerate();
        let p = self.polynomial_in(&coords, 3, 3);
        if self.rng.gen_bool(0.5) {
            let lin = self.polynomial_in(&coords, 2, 1).scale(&Constant::from_ratio(1, 4));
            p * lin.exp()
        } else {
            p
        }
    }

    /// `d/dt + sum a^{i} d/dz^{0i} + b^{i} d/dzbar^{0i}`.
    pub fn base_vector_field(&mut self, m: u32) -> VectorField {
        let chart = CoordSystem::new(m, 0).expect("m >= 1");
        let mut comps = vec![(Coord::Time, Expr::one())];
        for c in base_fiber(m) {
            if self.rng.gen_bool(0.75) {
                comps.push((c, self.base_polynomial(m)));
            }
        }
        VectorField::from_components(chart, comps).expect("base components")
    }

    /// `dt + sum w_{c} dc` over the base fiber.
    pub fn base_one_form(&mut self, m: u32) -> OneForm {
        let chart = CoordSystem::new(m, 0).expect("m >= 1");
        let mut comps = vec![(Coord::Time, Expr::one())];
        for c in base_fiber(m) {
            if self.rng.gen_bool(0.75) {
                comps.push((c, self.base_polynomial(m)));
            }
        }
        OneForm::from_components(chart, comps).expect("base components")
    }

    /// Sparse base tensor with polynomial entries.
    pub fn base_tensor(&mut self, m: u32) -> Tensor11 {
        let chart = CoordSystem::new(m, 0).expect("m >= 1");
        let coords = chart.enumerate();
        let mut entries = Vec::new();
        for o in &coords {
            for i in &coords {
                if self.rng.gen_bool(0.4) {
                    let e = self.polynomial_in(&base_fiber(m), 2, 2);
                    entries.push(((*o, *i), e));
                }
            }
        }
        Tensor11::from_entries(chart, entries).expect("base entries")
    }

    /// Point with `t` real and `zbar = conj(z)` at every level.
    pub fn point(&mut self, chart: CoordSystem) -> BTreeMap<Coord, Complex64> {
        let mut p = BTreeMap::new();
        p.insert(Coord::Time, Complex64::new(self.rng.gen_range(-1.0..1.0), 0.0));
        for r in 0..=chart.k() {
            for i in 1..=chart.m() {
                let z = Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0));
                p.insert(Coord::z(r, i), z);
                p.insert(Coord::zbar(r, i), z.conj());
            }
        }
        p
    }
}

pub fn base_fiber(m: u32) -> Vec<Coord> {
    CoordSystem::new(m, 0).expect("m >= 1").fiber()
}
