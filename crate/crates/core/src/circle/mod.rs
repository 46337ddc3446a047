//! Trigonometric-polynomial loops on the circle, exact uniform quadrature, the
//! Fourier isomorphism onto finitely supported sequences, and spectral projections.

mod spectral;
mod ycheck;

pub use spectral::{spectral_projection, verify_spectral};
pub use ycheck::{loop_norm, y_structure_check};

use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{AlgElem, Algebra};
use crate::bimodule::{BimElem, Bimodule};
use crate::crossed::{SeqA, SeqX};
use crate::error::{Error, Result};
use crate::linalg::{c, C64};

/// Values a loop can take: anything with a zero, addition and complex scaling.
pub trait Coeff: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, s: C64) -> Self;
}

impl Coeff for C64 {
    fn zero_like(&self) -> Self {
        c(0.0, 0.0)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, s: C64) -> Self {
        self * s
    }
}

impl Coeff for AlgElem {
    fn zero_like(&self) -> Self {
        self.scale(c(0.0, 0.0))
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, s: C64) -> Self {
        self.scale(s)
    }
}

impl Coeff for BimElem {
    fn zero_like(&self) -> Self {
        self.scale(c(0.0, 0.0))
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, s: C64) -> Self {
        self.scale(s)
    }
}

/// `f(λ) = Σ_k λ^k c_k` with finitely many coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop<T> {
    zero: T,
    pub coeffs: BTreeMap<i32, T>,
}

pub type LoopA = Loop<AlgElem>;
pub type LoopX = Loop<BimElem>;

impl<T: Coeff> Loop<T> {
    pub fn zero(zero: T) -> Self {
        Self { zero, coeffs: BTreeMap::new() }
    }

    /// `λ^k c`.
    pub fn monomial(value: T, k: i32) -> Self {
        Self { zero: value.zero_like(), coeffs: BTreeMap::from([(k, value)]) }
    }

    /// Adds `λ^k c` to the loop.
    pub fn with(mut self, k: i32, value: T) -> Self {
        let next = match self.coeffs.get(&k) {
            Some(old) => old.plus(&value),
            None => value,
        };
        self.coeffs.insert(k, next);
        self
    }

    pub fn zero_value(&self) -> &T {
        &self.zero
    }

    pub fn coeff(&self, k: i32) -> T {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| self.zero.clone())
    }

    /// Largest `|k|` with a stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn eval(&self, lambda: C64) -> T {
        self.coeffs
            .iter()
            .fold(self.zero.clone(), |acc, (&k, v)| acc.plus(&v.times(lambda.powi(k))))
    }

    /// Values at the `points` nodes of the uniform rule.
    pub fn sample(&self, points: usize) -> Vec<T> {
        nodes(points).into_iter().map(|l| self.eval(l)).collect()
    }
}

impl LoopA {
    pub fn zero_in(alg: &Algebra) -> Self {
        Self::zero(alg.zero())
    }

    /// Random coefficients at every `k` in `support`.
    pub fn random<R: Rng + ?Sized>(alg: &Algebra, support: impl IntoIterator<Item = i32>, rng: &mut R) -> Self {
        support.into_iter().fold(Self::zero_in(alg), |l, k| l.with(k, alg.random(rng)))
    }
}

impl LoopX {
    pub fn zero_in(x: &Bimodule) -> Self {
        Self::zero(x.zero_elem())
    }

    pub fn random<R: Rng + ?Sized>(x: &Bimodule, support: impl IntoIterator<Item = i32>, rng: &mut R) -> Self {
        support.into_iter().fold(Self::zero_in(x), |l, k| l.with(k, x.random_elem(rng)))
    }
}

/// The `M` nodes `exp(2πij/M)`.
pub fn nodes(points: usize) -> Vec<C64> {
    (0..points)
        .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / points as f64))
        .collect()
}

fn exactness(points: usize, degree: usize) -> Result<()> {
    if points < degree + 1 {
        return Err(Error::QuadratureTooCoarse { points, degree, needed: degree + 1 });
    }
    Ok(())
}

/// `∫ f(λ) dλ` for the normalized Haar measure, by the `points`-node uniform rule.
/// The rule is exact on `λ^m` for `|m| < points`, so the loop's degree must stay below `points`.
pub fn circle_integrate<T: Coeff>(f: &Loop<T>, points: usize) -> Result<T> {
    exactness(points, f.degree())?;
    let samples = f.sample(points);
    Ok(average(&samples))
}

fn average<T: Coeff>(samples: &[T]) -> T {
    let w = c(1.0 / samples.len() as f64, 0.0);
    let first = samples[0].zero_like();
    samples.iter().fold(first, |acc, v| acc.plus(&v.times(w)))
}

/// `∫ λ^{-k} h(λ) dλ` from samples of `h` on the uniform grid, for each `k` in `range`.
pub fn coefficients_from_samples<T: Coeff>(samples: &[T], range: impl IntoIterator<Item = i32>) -> BTreeMap<i32, T> {
    let m = samples.len();
    let pts = nodes(m);
    range
        .into_iter()
        .map(|k| {
            let weighted: Vec<T> = samples.iter().zip(&pts).map(|(v, l)| v.times(l.powi(-k))).collect();
            (k, average(&weighted))
        })
        .collect()
}

/// `(Iφ)(n) = ∫ λ^n φ(λ) dλ`, i.e. `n ↦ c_{-n}`.
pub fn iso_a(phi: &LoopA) -> SeqA {
    SeqA { terms: phi.coeffs.iter().map(|(&k, a)| (-k, a.clone())).collect() }
}

/// `(If)(n) = ∫ λ^{n-1} f(λ) dλ`, i.e. `n ↦ c_{1-n}`.
pub fn iso_x(f: &LoopX) -> SeqX {
    SeqX { terms: f.coeffs.iter().map(|(&k, x)| (1 - k, x.clone())).collect() }
}

pub fn iso_a_inv(alg: &Algebra, phi: &SeqA) -> LoopA {
    phi.terms.iter().fold(LoopA::zero_in(alg), |l, (&n, a)| l.with(-n, a.clone()))
}

pub fn iso_x_inv(x: &Bimodule, f: &SeqX) -> LoopX {
    f.terms.iter().fold(LoopX::zero_in(x), |l, (&n, v)| l.with(1 - n, v.clone()))
}

/// `I` computed from point samples rather than coefficients; `points` must exceed twice the degree.
pub fn iso_a_quadrature(phi: &LoopA, points: usize) -> Result<SeqA> {
    let d = phi.degree() as i32;
    exactness(points, 2 * d as usize)?;
    let coeffs = coefficients_from_samples(&phi.sample(points), -d..=d);
    Ok(SeqA { terms: coeffs.into_iter().map(|(k, a)| (-k, a)).collect() })
}

pub fn iso_x_quadrature(f: &LoopX, points: usize) -> Result<SeqX> {
    let d = f.degree() as i32;
    exactness(points, 2 * d as usize)?;
    let coeffs = coefficients_from_samples(&f.sample(points), -d..=d);
    Ok(SeqX { terms: coeffs.into_iter().map(|(k, x)| (1 - k, x)).collect() })
}
