//! Finitely supported sequences `ℤ → A` and `ℤ → X` with the twisted bimodule structure.

use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{AlgElem, Algebra};
use crate::bimodule::{BimElem, Bimodule};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeqA {
    pub terms: BTreeMap<i32, AlgElem>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeqX {
    pub terms: BTreeMap<i32, BimElem>,
}

impl SeqA {
    /// `a δ_n`.
    pub fn delta(a: AlgElem, n: i32) -> Self {
        Self { terms: BTreeMap::from([(n, a)]) }
    }

    pub fn random<R: Rng + ?Sized>(alg: &Algebra, support: impl IntoIterator<Item = i32>, rng: &mut R) -> Self {
        Self { terms: support.into_iter().map(|n| (n, alg.random(rng))).collect() }
    }

    pub fn get(&self, n: i32) -> Option<&AlgElem> {
        self.terms.get(&n)
    }

    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().cloned()
    }

    pub fn mul(&self, other: &SeqA) -> SeqA {
        SeqA {
            terms: self
                .terms
                .iter()
                .filter_map(|(n, a)| other.terms.get(n).map(|b| (*n, a * b)))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> SeqA {
        SeqA { terms: self.terms.iter().map(|(n, a)| (*n, a.adjoint())).collect() }
    }

    /// `(σφ)(n) = φ(n+1)`, so `σ(aδ_n) = aδ_{n-1}`.
    pub fn shift(&self) -> SeqA {
        SeqA { terms: self.terms.iter().map(|(n, a)| (n - 1, a.clone())).collect() }
    }

    pub fn max_diff(&self, other: &SeqA) -> f64 {
        let keys: std::collections::BTreeSet<i32> = self.terms.keys().chain(other.terms.keys()).cloned().collect();
        keys.into_iter()
            .map(|n| match (self.terms.get(&n), other.terms.get(&n)) {
                (Some(a), Some(b)) => a.max_diff(b),
                (Some(a), None) | (None, Some(a)) => a.norm(),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }
}

impl SeqX {
    /// `x δ_n`.
    pub fn delta(x: BimElem, n: i32) -> Self {
        Self { terms: BTreeMap::from([(n, x)]) }
    }

    pub fn random<R: Rng + ?Sized>(x: &Bimodule, support: impl IntoIterator<Item = i32>, rng: &mut R) -> Self {
        Self { terms: support.into_iter().map(|n| (n, x.random_elem(rng))).collect() }
    }

    pub fn get(&self, n: i32) -> Option<&BimElem> {
        self.terms.get(&n)
    }

    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().cloned()
    }

    /// `(fφ)(n) = f(n)·φ(n-1)`.
    pub fn act_right(&self, x: &Bimodule, phi: &SeqA) -> SeqX {
        SeqX {
            terms: self
                .terms
                .iter()
                .filter_map(|(n, f)| phi.get(n - 1).map(|a| (*n, x.act_right(f, a))))
                .collect(),
        }
    }

    /// `(φf)(n) = φ(n)·f(n)`.
    pub fn act_left(&self, x: &Bimodule, phi: &SeqA) -> SeqX {
        SeqX {
            terms: self
                .terms
                .iter()
                .filter_map(|(n, f)| phi.get(*n).map(|a| (*n, x.act_left(a, f))))
                .collect(),
        }
    }

    /// `<f,g>_R(n) = <f(n+1), g(n+1)>_R`.
    pub fn ip_right(&self, x: &Bimodule, g: &SeqX) -> SeqA {
        SeqA {
            terms: self
                .terms
                .iter()
                .filter_map(|(n, f)| g.get(*n).map(|gn| (n - 1, x.ip_right(f, gn))))
                .collect(),
        }
    }

    /// `<f,g>_L(n) = <f(n), g(n)>_L`.
    pub fn ip_left(&self, x: &Bimodule, g: &SeqX) -> SeqA {
        SeqA {
            terms: self
                .terms
                .iter()
                .filter_map(|(n, f)| g.get(*n).map(|gn| (*n, x.ip_left(f, gn))))
                .collect(),
        }
    }

    /// `(σf)(n) = f(n+1)`.
    pub fn shift(&self) -> SeqX {
        SeqX { terms: self.terms.iter().map(|(n, f)| (n - 1, f.clone())).collect() }
    }

    pub fn max_diff(&self, other: &SeqX) -> f64 {
        let keys: std::collections::BTreeSet<i32> = self.terms.keys().chain(other.terms.keys()).cloned().collect();
        keys.into_iter()
            .map(|n| match (self.terms.get(&n), other.terms.get(&n)) {
                (Some(a), Some(b)) => a.max_diff(b),
                (Some(a), None) | (None, Some(a)) => a.coords.iter().map(|z| z.norm()).fold(0.0, f64::max),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }
}
