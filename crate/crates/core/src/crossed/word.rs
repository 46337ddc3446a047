//! Formal linear combinations of products of `L^n_a`, `T^n_x`, `(T^n_x)*`.

use std::fmt;

use rand::Rng;

use crate::algebra::{random_c64, AlgElem};
use crate::bimodule::{BimElem, Bimodule};
use crate::error::Result;
use crate::fock::{GradedOp, Window};
use crate::linalg::{CMat, C64};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub enum Gen {
    /// `L^n_a` on degree `n`.
    L { a: AlgElem, n: i32 },
    /// `T^n_x`: degree `n` to `n+1`.
    T { x: BimElem, n: i32 },
    /// `(T^n_x)*`: degree `n+1` to `n`.
    TStar { x: BimElem, n: i32 },
}

impl Gen {
    pub fn source(&self) -> i32 {
        match self {
            Gen::L { n, .. } | Gen::T { n, .. } => *n,
            Gen::TStar { n, .. } => n + 1,
        }
    }

    pub fn target(&self) -> i32 {
        match self {
            Gen::L { n, .. } | Gen::TStar { n, .. } => *n,
            Gen::T { n, .. } => n + 1,
        }
    }

    fn shifted(&self, by: i32) -> Gen {
        match self {
            Gen::L { a, n } => Gen::L { a: a.clone(), n: n + by },
            Gen::T { x, n } => Gen::T { x: x.clone(), n: n + by },
            Gen::TStar { x, n } => Gen::TStar { x: x.clone(), n: n + by },
        }
    }

    fn adjoint(&self) -> Gen {
        match self {
            Gen::L { a, n } => Gen::L { a: a.adjoint(), n: *n },
            Gen::T { x, n } => Gen::TStar { x: x.clone(), n: *n },
            Gen::TStar { x, n } => Gen::T { x: x.clone(), n: *n },
        }
    }

    pub fn eval(&self, w: &Window) -> Result<CMat> {
        match self {
            Gen::L { a, n } => w.left_action_op(a, *n),
            Gen::T { x, n } => w.creation(x, *n),
            Gen::TStar { x, n } => Ok(w.creation(x, *n)?.adjoint()),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::L { n, .. } => write!(f, "L^{n}"),
            Gen::T { n, .. } => write!(f, "T^{n}"),
            Gen::TStar { n, .. } => write!(f, "T*^{n}"),
        }
    }
}

/// `coeff · g_1 g_2 ⋯ g_k`, read as a composition (`g_k` acts first).
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: C64,
    pub gens: Vec<Gen>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeneratorWord {
    pub terms: Vec<Monomial>,
}

impl GeneratorWord {
    pub fn gen(g: Gen) -> Self {
        Self { terms: vec![Monomial { coeff: C64::new(1.0, 0.0), gens: vec![g] }] }
    }

    pub fn monomial(coeff: C64, gens: Vec<Gen>) -> Self {
        Self { terms: vec![Monomial { coeff, gens }] }
    }

    pub fn identity() -> Self {
        Self::monomial(C64::new(1.0, 0.0), Vec::new())
    }

    pub fn add(&self, other: &GeneratorWord) -> Self {
        Self { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { terms: self.terms.iter().map(|m| Monomial { coeff: m.coeff * s, gens: m.gens.clone() }).collect() }
    }

    pub fn mul(&self, other: &GeneratorWord) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Monomial { coeff: a.coeff * b.coeff, gens: a.gens.iter().chain(&b.gens).cloned().collect() });
            }
        }
        Self { terms }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial { coeff: m.coeff.conj(), gens: m.gens.iter().rev().map(Gen::adjoint).collect() })
                .collect(),
        }
    }

    fn shifted(&self, by: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial { coeff: m.coeff, gens: m.gens.iter().map(|g| g.shifted(by)).collect() })
                .collect(),
        }
    }

    /// `σ`: every degree label decreases by one.
    pub fn sigma(&self) -> Self {
        self.shifted(-1)
    }

    pub fn sigma_inv(&self) -> Self {
        self.shifted(1)
    }

    /// Degrees touched by any generator, as `(min, max)`.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let all = self.terms.iter().flat_map(|m| m.gens.iter().flat_map(|g| [g.source(), g.target()]));
        all.fold(None, |acc, d| match acc {
            None => Some((d, d)),
            Some((lo, hi)) => Some((lo.min(d), hi.max(d))),
        })
    }

    /// Evaluates on the window; an empty monomial is the identity.
    pub fn eval(&self, w: &Window) -> Result<GradedOp> {
        let mut out = GradedOp::zero(w);
        for m in &self.terms {
            if m.gens.is_empty() {
                out = out.add(&GradedOp::identity(w).scale(m.coeff));
                continue;
            }
            let last = m.gens.last().unwrap();
            let (src, mut tgt) = (last.source(), last.target());
            let mut acc = last.eval(w)?;
            let mut live = true;
            for g in m.gens.iter().rev().skip(1) {
                let b = g.eval(w)?;
                if g.source() != tgt {
                    live = false;
                }
                if live {
                    acc = b * acc;
                    tgt = g.target();
                }
            }
            if live {
                out.insert(src, tgt, acc * m.coeff)?;
            }
        }
        Ok(out)
    }

    /// Normal form using the module relations; monomials with mismatched degrees vanish.
    pub fn reduce(&self, x: &Bimodule) -> Self {
        let mut terms = Vec::new();
        for m in &self.terms {
            if let Some(gens) = reduce_monomial(x, &m.gens) {
                terms.push(Monomial { coeff: m.coeff, gens });
            }
        }
        Self { terms }
    }

    pub fn random<R: Rng + ?Sized>(x: &Bimodule, lo: i32, hi: i32, max_len: usize, max_terms: usize, rng: &mut R) -> Self {
        let alg = x.algebra();
        let terms = (0..rng.random_range(1..=max_terms))
            .map(|_| {
                let mut cur = rng.random_range(lo..=hi);
                let mut gens = Vec::new();
                for _ in 0..rng.random_range(1..=max_len) {
                    let mut options = vec![0];
                    if cur < hi {
                        options.push(1);
                    }
                    if cur > lo {
                        options.push(2);
                    }
                    let g = match options[rng.random_range(0..options.len())] {
                        0 => Gen::L { a: alg.random(rng), n: cur },
                        1 => Gen::T { x: x.random_elem(rng), n: cur },
                        _ => Gen::TStar { x: x.random_elem(rng), n: cur - 1 },
                    };
                    cur = g.target();
                    gens.push(g);
                }
                gens.reverse();
                Monomial { coeff: random_c64(rng), gens }
            })
            .collect();
        Self { terms }
    }
}

fn combine(module: &Bimodule, left: &Gen, right: &Gen) -> Option<Option<Gen>> {
    use Gen::*;
    if left.source() != right.target() {
        return Some(None);
    }
    let out = match (left, right) {
        (L { a, n }, L { a: b, .. }) => L { a: a * b, n: *n },
        (L { a, .. }, T { x, n }) => T { x: module.act_left(a, x), n: *n },
        (T { x, n }, L { a, .. }) => T { x: module.act_right(x, a), n: *n },
        (L { a, .. }, TStar { x, n }) => TStar { x: module.act_right(x, &a.adjoint()), n: *n },
        (TStar { x, n }, L { a, .. }) => TStar { x: module.act_left(&a.adjoint(), x), n: *n },
        (T { x, n }, TStar { x: y, .. }) => L { a: module.ip_left(x, y), n: n + 1 },
        (TStar { x, n }, T { x: y, .. }) => L { a: module.ip_right(x, y), n: *n },
        _ => return None,
    };
    Some(Some(out))
}

fn reduce_monomial(x: &Bimodule, gens: &[Gen]) -> Option<Vec<Gen>> {
    let mut stack: Vec<Gen> = Vec::new();
    for g in gens.iter().rev() {
        // process right to left so that the stack holds an already reduced suffix
        let mut cur = g.clone();
        loop {
            match stack.last() {
                None => break,
                Some(top) => match combine(x, &cur, top) {
                    None => break,
                    Some(None) => return None,
                    Some(Some(merged)) => {
                        stack.pop();
                        cur = merged;
                    }
                },
            }
        }
        stack.push(cur);
    }
    stack.reverse();
    Some(stack)
}

/// Symbolic and evaluated checks of `σ` on random words supported in `[-N+2, N-1]`.
pub fn verify_sigma(w: &Window, words: usize, seed: u64, tol: f64) -> Report {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x1 = w.base();
    let (lo, hi) = (2 - w.radius(), w.radius() - 1);
    let mut r = Report::new();
    let suite = "sigma";
    let alg = w.algebra();

    let a = alg.random(&mut rng);
    let x = x1.random_elem(&mut rng);
    let gens_ok = GeneratorWord::gen(Gen::L { a: a.clone(), n: 0 }).sigma() == GeneratorWord::gen(Gen::L { a, n: -1 })
        && GeneratorWord::gen(Gen::T { x: x.clone(), n: 0 }).sigma() == GeneratorWord::gen(Gen::T { x, n: -1 });
    r.claim(suite, "sigma-generators", gens_ok);

    let (mut mult, mut star, mut inv) = (true, true, true);
    let (mut relabel, mut iso) = (0.0f64, 0.0f64);
    let mut edge_skips = 0;
    for _ in 0..words {
        let w1 = GeneratorWord::random(x1, lo, hi, 4, 3, &mut rng);
        let w2 = GeneratorWord::random(x1, lo, hi, 3, 2, &mut rng);
        mult &= w1.mul(&w2).sigma() == w1.sigma().mul(&w2.sigma());
        star &= w1.adjoint().sigma() == w1.sigma().adjoint();
        inv &= w1.sigma_inv().sigma() == w1 && w1.sigma().sigma_inv() == w1;

        let shifted = w1.sigma();
        let (Ok(direct), Ok(orig)) = (shifted.eval(w), w1.eval(w)) else {
            edge_skips += 1;
            continue;
        };
        let normal = w1.reduce(x1);
        let relabelled = normal.sigma().eval(w).expect("reduced words stay in range");
        let reduced_shift = shifted.reduce(x1).eval(w).expect("reduced words stay in range");
        let scale = 1.0 + orig.max_abs();
        relabel = relabel.max(direct.max_diff(&relabelled) / scale).max(direct.max_diff(&reduced_shift) / scale);
        iso = iso.max((direct.norm() - orig.norm()).abs() / (1.0 + orig.norm()));
    }
    r.claim(suite, "sigma-multiplicative", mult);
    r.claim(suite, "sigma-star", star);
    r.claim(suite, "sigma-inverse", inv);
    let e = r.check(suite, "sigma-relabel", relabel, tol);
    if edge_skips > 0 {
        e.with_note(format!("{edge_skips} words left the window"));
    }
    r.check(suite, "sigma-isometric", iso, tol.max(1e-10));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{matrix, swap};
    use crate::linalg::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma_of_generators() {
        let alg = swap().algebra;
        let a = alg.one();
        assert_eq!(GeneratorWord::gen(Gen::L { a: a.clone(), n: 0 }).sigma(), GeneratorWord::gen(Gen::L { a, n: -1 }));
    }

    #[test]
    fn sigma_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = matrix().module;
        for _ in 0..20 {
            let w = GeneratorWord::random(&x, -2, 2, 4, 3, &mut rng);
            assert_eq!(w.sigma_inv().sigma(), w);
        }
    }

    #[test]
    fn shifted_t_tstar_is_left_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = matrix();
        let win = Window::build(&b.module, 3).unwrap();
        let x = b.module.random_elem(&mut rng);
        let y = b.module.random_elem(&mut rng);
        let word = GeneratorWord::monomial(c(1.0, 0.0), vec![Gen::T { x: x.clone(), n: 0 }, Gen::TStar { x: y.clone(), n: 0 }]);
        let lhs = word.sigma().eval(&win).unwrap();
        let rhs = GeneratorWord::gen(Gen::L { a: b.module.ip_left(&x, &y), n: 0 }).eval(&win).unwrap();
        assert!(lhs.max_diff(&rhs) < 1e-12);
        // the reduction produces the same normal form
        assert_eq!(word.sigma().reduce(&b.module).terms[0].gens.len(), 1);
    }

    #[test]
    fn reduction_preserves_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for b in [swap(), matrix()] {
            let win = Window::build(&b.module, 3).unwrap();
            for _ in 0..20 {
                let w = GeneratorWord::random(&b.module, -2, 2, 5, 3, &mut rng);
                let d = w.eval(&win).unwrap().max_diff(&w.reduce(&b.module).eval(&win).unwrap());
                assert!(d < 1e-11, "{d}");
            }
        }
    }

    #[test]
    fn mismatched_degrees_vanish() {
        let b = swap();
        let win = Window::build(&b.module, 2).unwrap();
        let a = b.algebra.one();
        let word = GeneratorWord::monomial(c(1.0, 0.0), vec![Gen::L { a: a.clone(), n: 1 }, Gen::L { a, n: 0 }]);
        assert!(word.reduce(&b.module).terms.is_empty());
        assert!(word.eval(&win).unwrap().max_abs() == 0.0);
        let id = GeneratorWord::identity().eval(&win).unwrap();
        assert!(id.max_diff(&GradedOp::identity(&win)) == 0.0);
    }
}
