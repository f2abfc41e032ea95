//! Seeded random generators for multi-indices, polynomials and systems.
//! Used by the ranking audit and by the property and acceptance suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, Ambient, Deriv, DiffPoly, Monomial, Rational, Var};
use crate::multiindex::MultiIndex;
use crate::normal::{SolvedForm, SolvedSystem};
use crate::ranking::Ranking;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform over indices of length `n` with |α| ≤ `max_order`.
    pub fn multi_index(&mut self, n: usize, max_order: u32) -> MultiIndex {
        let total = self.rng.gen_range(0..=max_order);
        let mut v = vec![0u32; n];
        for _ in 0..total {
            let k = self.rng.gen_range(0..n);
            v[k] += 1;
        }
        MultiIndex::new(v)
    }

    pub fn deriv(&mut self, amb: &Ambient, max_order: u32) -> Deriv {
        let i = self.rng.gen_range(1..=amb.m);
        Deriv::new(i, self.multi_index(amb.n, max_order))
    }

    /// A small nonzero rational.
    pub fn coeff(&mut self) -> Rational {
        let mut num = self.rng.gen_range(-4i64..=4);
        if num == 0 {
            num = 1;
        }
        let den = if self.rng.gen_bool(0.25) {
            self.rng.gen_range(2i64..=3)
        } else {
            1
        };
        rat(num, den)
    }

    pub fn var(&mut self, amb: &Ambient, max_order: u32) -> Var {
        if self.rng.gen_bool(0.3) {
            Var::X(self.rng.gen_range(1..=amb.n as u32))
        } else {
            Var::U(self.deriv(amb, max_order))
        }
    }

    pub fn poly(&mut self, amb: &Ambient, max_terms: usize, max_degree: u32, max_order: u32) -> DiffPoly {
        let mut vars = Vec::new();
        for _ in 0..4 {
            vars.push(self.var(amb, max_order));
        }
        self.poly_in(&vars, max_terms, max_degree)
    }

    /// A random polynomial whose variables are drawn from `vars`.
    pub fn poly_in(&mut self, vars: &[Var], max_terms: usize, max_degree: u32) -> DiffPoly {
        let terms = self.rng.gen_range(0..=max_terms);
        let mut p = DiffPoly::zero();
        for _ in 0..terms {
            let deg = self.rng.gen_range(0..=max_degree);
            let mut pairs = Vec::new();
            if !vars.is_empty() {
                for _ in 0..deg {
                    pairs.push((vars.choose(&mut self.rng).expect("nonempty").clone(), 1));
                }
            }
            let c = self.coeff();
            p.add_term(Monomial::from_pairs(pairs), c);
        }
        p
    }

    /// `k` distinct derivatives of order ≤ `max_order`.
    pub fn distinct_derivs(&mut self, amb: &Ambient, k: usize, max_order: u32) -> Vec<Deriv> {
        let mut pool = amb.derivs_up_to(max_order);
        pool.shuffle(&mut self.rng);
        pool.truncate(k);
        pool
    }

    /// A normalized set: distinct leads, every tail free of every lead.
    pub fn normalized_set(
        &mut self,
        amb: &Ambient,
        k: usize,
        max_order: u32,
        max_degree: u32,
    ) -> Vec<SolvedForm> {
        let leads = self.distinct_derivs(amb, k, max_order);
        let free: Vec<Var> = (1..=amb.n as u32)
            .map(Var::X)
            .chain(
                amb.derivs_up_to(max_order)
                    .into_iter()
                    .filter(|d| !leads.contains(d))
                    .map(Var::U),
            )
            .collect();
        leads
            .into_iter()
            .map(|lead| {
                let tail = self.poly_in(&free, 3, max_degree);
                SolvedForm::new(lead, tail).expect("tail avoids leads")
            })
            .collect()
    }

    /// A conditionally solvable system: each tail mixes x's with derivatives
    /// ranked strictly below its lead. With `affine` set, tails are affine in
    /// the derivatives with constant coefficients.
    pub fn solvable_system(
        &mut self,
        amb: &Ambient,
        ranking: &Ranking,
        k: usize,
        max_order: u32,
        affine: bool,
    ) -> SolvedSystem {
        let leads = self.distinct_derivs(amb, k, max_order);
        let all = amb.derivs_up_to(max_order);
        let mut equations = Vec::new();
        for lead in leads {
            let below: Vec<Var> = all
                .iter()
                .filter(|d| ranking.compare(d, &lead).is_lt())
                .cloned()
                .map(Var::U)
                .collect();
            let xs: Vec<Var> = (1..=amb.n as u32).map(Var::X).collect();
            let mut tail = DiffPoly::zero();
            if affine {
                for _ in 0..self.rng.gen_range(0..=2) {
                    if let Some(v) = below.choose(&mut self.rng) {
                        let c = self.coeff();
                        tail.add_term(Monomial::var(v.clone()), c);
                    }
                }
                tail = &tail + &self.poly_in(&xs, 2, 1);
            } else {
                let mut pool = xs.clone();
                for _ in 0..3 {
                    if let Some(v) = below.choose(&mut self.rng) {
                        pool.push(v.clone());
                    }
                }
                tail = self.poly_in(&pool, 3, 2);
            }
            equations.push(SolvedForm::new(lead, tail).expect("tail is ranked below lead"));
        }
        SolvedSystem::new(*amb, ranking.clone(), equations).expect("valid random system")
    }
}
