//! Finite-dimensional C*-algebras presented as direct sums of full matrix blocks.
//!
//! Every element is a tuple of square complex matrices. The algebra carries one
//! positive trace weight per block; the weighted trace `τ(a*b)` is the scalar
//! product used for coordinates, so the coordinate basis returned by
//! [`Algebra::basis`] (scaled matrix units) is orthonormal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, max_abs_diff, op_norm, CMat, CVec, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Algebra {
    block_dims: Vec<usize>,
    weights: Vec<f64>,
}

impl Algebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        let weights = vec![1.0; block_dims.len()];
        Self::with_weights(block_dims, weights)
    }

    pub fn with_weights(block_dims: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidAlgebra("at least one block is required".into()));
        }
        if let Some(i) = block_dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidAlgebra(format!("block {i} has size 0")));
        }
        if weights.len() != block_dims.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} trace weights given for {} blocks",
                weights.len(),
                block_dims.len()
            )));
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidAlgebra(format!("trace weight of block {i} must be positive")));
        }
        Ok(Self { block_dims, weights })
    }

    /// The complex numbers.
    pub fn scalars() -> Self {
        Self::new(vec![1]).unwrap()
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem { blocks: self.block_dims.iter().map(|&d| CMat::zeros(d, d)).collect() }
    }

    pub fn one(&self) -> AlgElem {
        AlgElem { blocks: self.block_dims.iter().map(|&d| CMat::identity(d, d)).collect() }
    }

    pub fn element(&self, blocks: Vec<CMat>) -> Result<AlgElem> {
        let e = AlgElem { blocks };
        self.check_member(&e)?;
        Ok(e)
    }

    /// Element with a single nonzero block.
    pub fn from_block(&self, block: usize, m: CMat) -> Result<AlgElem> {
        let mut z = self.zero();
        if block >= self.num_blocks() || z.blocks[block].shape() != m.shape() {
            return Err(Error::AlgebraMismatch(format!("block {block} cannot hold a {:?} matrix", m.shape())));
        }
        z.blocks[block] = m;
        Ok(z)
    }

    /// Element of a commutative algebra (all blocks of size 1) from its diagonal.
    pub fn diagonal(&self, values: &[C64]) -> Result<AlgElem> {
        if values.len() != self.num_blocks() || self.block_dims.iter().any(|&d| d != 1) {
            return Err(Error::AlgebraMismatch("diagonal() needs a commutative algebra and one value per block".into()));
        }
        Ok(AlgElem { blocks: values.iter().map(|&v| CMat::from_element(1, 1, v)).collect() })
    }

    pub fn check_member(&self, a: &AlgElem) -> Result<()> {
        if a.blocks.len() != self.block_dims.len()
            || a.blocks.iter().zip(&self.block_dims).any(|(b, &d)| b.shape() != (d, d))
        {
            return Err(Error::AlgebraMismatch(format!(
                "element with block shapes {:?} does not belong to algebra with blocks {:?}",
                a.shape(),
                self.block_dims
            )));
        }
        Ok(())
    }

    /// (block, row, col) of the coordinate index `beta`.
    pub fn basis_index(&self, beta: usize) -> (usize, usize, usize) {
        let mut rest = beta;
        for (i, &d) in self.block_dims.iter().enumerate() {
            if rest < d * d {
                return (i, rest / d, rest % d);
            }
            rest -= d * d;
        }
        panic!("basis index {beta} out of range for algebra of dimension {}", self.dim());
    }

    pub fn basis_position(&self, block: usize, row: usize, col: usize) -> usize {
        let offset: usize = self.block_dims[..block].iter().map(|d| d * d).sum();
        offset + row * self.block_dims[block] + col
    }

    /// Orthonormal basis element `e_{jk}/sqrt(w_i)` of block `i`.
    pub fn basis(&self, beta: usize) -> AlgElem {
        let (i, j, k) = self.basis_index(beta);
        let mut z = self.zero();
        z.blocks[i][(j, k)] = c(1.0 / self.weights[i].sqrt(), 0.0);
        z
    }

    /// Unscaled matrix unit `e_{jk}` of block `i`.
    pub fn matrix_unit(&self, block: usize, row: usize, col: usize) -> AlgElem {
        let mut z = self.zero();
        z.blocks[block][(row, col)] = c(1.0, 0.0);
        z
    }

    /// Index of `basis(beta)^*`; the scaled matrix units are closed under adjoints.
    pub fn adjoint_index(&self, beta: usize) -> usize {
        let (i, j, k) = self.basis_index(beta);
        self.basis_position(i, k, j)
    }

    pub fn coords(&self, a: &AlgElem) -> CVec {
        let mut out = CVec::zeros(self.dim());
        let mut pos = 0;
        for (i, b) in a.blocks.iter().enumerate() {
            let s = self.weights[i].sqrt();
            let d = self.block_dims[i];
            for j in 0..d {
                for k in 0..d {
                    out[pos] = b[(j, k)] * s;
                    pos += 1;
                }
            }
        }
        out
    }

    pub fn from_coords(&self, v: &CVec) -> AlgElem {
        assert_eq!(v.len(), self.dim(), "coordinate vector has wrong length");
        let mut z = self.zero();
        let mut pos = 0;
        for (i, b) in z.blocks.iter_mut().enumerate() {
            let s = self.weights[i].sqrt();
            let d = self.block_dims[i];
            for j in 0..d {
                for k in 0..d {
                    b[(j, k)] = v[pos] / s;
                    pos += 1;
                }
            }
        }
        z
    }

    /// Weighted trace `Σ_i w_i tr(a_i)`.
    pub fn trace(&self, a: &AlgElem) -> C64 {
        a.blocks.iter().zip(&self.weights).map(|(b, &w)| b.trace() * w).sum()
    }

    /// Matrix of left multiplication by `a` in the orthonormal coordinates.
    pub fn left_mul_matrix(&self, a: &AlgElem) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for beta in 0..n {
            let col = self.coords(&(a * &self.basis(beta)));
            m.set_column(beta, &col);
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgElem {
        AlgElem {
            blocks: self
                .block_dims
                .iter()
                .map(|&d| CMat::from_fn(d, d, |_, _| random_c64(rng)))
                .collect(),
        }
    }
}

pub fn random_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgElem {
    pub blocks: Vec<CMat>,
}

impl AlgElem {
    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    fn same_shape(&self, other: &AlgElem) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::AlgebraMismatch(format!(
                "block shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    /// Blockwise product, rejecting elements of different algebras.
    pub fn checked_mul(&self, other: &AlgElem) -> Result<AlgElem> {
        self.same_shape(other)?;
        Ok(AlgElem { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect() })
    }

    pub fn checked_add(&self, other: &AlgElem) -> Result<AlgElem> {
        self.same_shape(other)?;
        Ok(AlgElem { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect() })
    }

    pub fn adjoint(&self) -> AlgElem {
        AlgElem { blocks: self.blocks.iter().map(|b| b.adjoint()).collect() }
    }

    pub fn scale(&self, s: C64) -> AlgElem {
        AlgElem { blocks: self.blocks.iter().map(|b| b * s).collect() }
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    /// Self-adjoint within `tol` and spectrum bounded below by `-tol·‖a‖`.
    pub fn is_positive(&self, tol: f64) -> bool {
        let scale = self.norm();
        let herm_defect = self
            .blocks
            .iter()
            .map(|b| max_abs_diff(b, &b.adjoint()))
            .fold(0.0, f64::max);
        if herm_defect > tol * scale.max(1.0) {
            return false;
        }
        self.blocks.iter().all(|b| {
            let (vals, _) = hermitian_eigen(b);
            vals.iter().all(|&v| v >= -tol * scale)
        })
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &AlgElem) -> f64 {
        assert_eq!(self.shape(), other.shape(), "comparing elements of different algebras");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| format!("{b}")).collect();
        write!(f, "({})", parts.join(" ⊕ "))
    }
}

impl Mul for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: &AlgElem) -> AlgElem {
        self.checked_mul(rhs).expect("product of elements from different algebras")
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        self.checked_add(rhs).expect("sum of elements from different algebras")
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        self.checked_add(&rhs.scale(c(-1.0, 0.0))).expect("difference of elements from different algebras")
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        self.scale(c(-1.0, 0.0))
    }
}

/// A *-automorphism `α(a)_i = u_i a_{p(i)} u_i*`.
///
/// Stored as a block permutation plus one unitary per block so that the
/// inverse is again exactly of this form.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    permutation: Vec<usize>,
    unitaries: Vec<CMat>,
}

impl Automorphism {
    pub fn new(algebra: &Algebra, permutation: Vec<usize>, unitaries: Vec<CMat>) -> Result<Self> {
        let k = algebra.num_blocks();
        if permutation.len() != k || unitaries.len() != k {
            return Err(Error::InvalidAutomorphism(format!(
                "expected {k} permutation entries and {k} unitaries"
            )));
        }
        let mut seen = vec![false; k];
        for (i, &p) in permutation.iter().enumerate() {
            if p >= k || seen[p] {
                return Err(Error::InvalidAutomorphism(format!("{permutation:?} is not a permutation")));
            }
            seen[p] = true;
            if algebra.block_dims[p] != algebra.block_dims[i] {
                return Err(Error::InvalidAutomorphism(format!(
                    "block {p} (size {}) cannot be moved to block {i} (size {})",
                    algebra.block_dims[p], algebra.block_dims[i]
                )));
            }
        }
        for (i, u) in unitaries.iter().enumerate() {
            let d = algebra.block_dims[i];
            if u.shape() != (d, d) {
                return Err(Error::InvalidAutomorphism(format!("unitary {i} must be {d}x{d}")));
            }
            let defect = max_abs_diff(&(u.adjoint() * u), &CMat::identity(d, d));
            if defect > 1e-10 {
                return Err(Error::InvalidAutomorphism(format!("matrix {i} is not unitary (defect {defect:.2e})")));
            }
        }
        let alpha = Self { permutation, unitaries };
        alpha.validate(algebra)?;
        Ok(alpha)
    }

    pub fn identity(algebra: &Algebra) -> Self {
        Self {
            permutation: (0..algebra.num_blocks()).collect(),
            unitaries: algebra.block_dims.iter().map(|&d| CMat::identity(d, d)).collect(),
        }
    }

    /// Inner automorphism `Ad u` on a single block algebra.
    pub fn inner(algebra: &Algebra, u: CMat) -> Result<Self> {
        Self::new(algebra, vec![0], vec![u])
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    /// Multiplicativity and *-preservation on a basis, to 1e-10.
    fn validate(&self, algebra: &Algebra) -> Result<()> {
        let n = algebra.dim();
        for p in 0..n {
            let bp = algebra.basis(p);
            let star = self.apply(&bp.adjoint()).max_diff(&self.apply(&bp).adjoint());
            if star > 1e-10 {
                return Err(Error::InvalidAutomorphism(format!("not *-preserving (defect {star:.2e})")));
            }
            for q in 0..n {
                let bq = algebra.basis(q);
                let d = self.apply(&(&bp * &bq)).max_diff(&(&self.apply(&bp) * &self.apply(&bq)));
                if d > 1e-10 {
                    return Err(Error::InvalidAutomorphism(format!("not multiplicative (defect {d:.2e})")));
                }
            }
        }
        let round_trip = (0..n)
            .map(|p| self.inverse().apply(&self.apply(&algebra.basis(p))).max_diff(&algebra.basis(p)))
            .fold(0.0, f64::max);
        if round_trip > 1e-12 {
            return Err(Error::InvalidAutomorphism(format!("inverse defect {round_trip:.2e}")));
        }
        Ok(())
    }

    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        AlgElem {
            blocks: self
                .permutation
                .iter()
                .zip(&self.unitaries)
                .map(|(&p, u)| u * &a.blocks[p] * u.adjoint())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let k = self.permutation.len();
        let mut inv = vec![0; k];
        for (i, &p) in self.permutation.iter().enumerate() {
            inv[p] = i;
        }
        // a_{p(i)} = u_i* b_i u_i, so block p(i) of the inverse reads block i.
        let unitaries = (0..k).map(|j| self.unitaries[inv[j]].adjoint()).collect();
        Automorphism { permutation: inv, unitaries }
    }

    /// `α^power(a)` for any integer power.
    pub fn apply_power(&self, a: &AlgElem, power: i32) -> AlgElem {
        let step = if power >= 0 { self.clone() } else { self.inverse() };
        let mut out = a.clone();
        for _ in 0..power.unsigned_abs() {
            out = step.apply(&out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one(x: f64) -> C64 {
        c(x, 0.0)
    }

    #[test]
    fn scalar_product() {
        let a = Algebra::scalars();
        let x = a.diagonal(&[one(2.0)]).unwrap();
        let y = a.diagonal(&[one(3.0)]).unwrap();
        assert_eq!(x.checked_mul(&y).unwrap(), a.diagonal(&[one(6.0)]).unwrap());
    }

    #[test]
    fn unit_law_and_orthogonal_idempotents() {
        let m2 = Algebra::new(vec![2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = m2.random(&mut rng);
        assert_eq!(&a * &m2.one(), a);

        let cc = Algebra::new(vec![1, 1]).unwrap();
        let p = cc.diagonal(&[one(1.0), one(0.0)]).unwrap();
        let q = cc.diagonal(&[one(0.0), one(1.0)]).unwrap();
        assert_eq!(&p * &q, cc.zero());
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = Algebra::new(vec![2]).unwrap().one();
        let b = Algebra::new(vec![1, 1]).unwrap().one();
        assert!(matches!(a.checked_mul(&b), Err(Error::AlgebraMismatch(_))));
    }

    #[test]
    fn norms() {
        let m2 = Algebra::new(vec![2]).unwrap();
        let d = m2
            .element(vec![CMat::from_row_slice(2, 2, &[one(1.0), one(0.0), one(0.0), one(-2.0)])])
            .unwrap();
        assert!((d.norm() - 2.0).abs() < 1e-15);
        assert_eq!(m2.zero().norm(), 0.0);
        // singular values of e12 by hand: e12* e12 = e22 has eigenvalues {0, 1}
        assert!((m2.matrix_unit(0, 0, 1).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn positivity() {
        let m3 = Algebra::new(vec![3]).unwrap();
        assert!(m3.one().is_positive(1e-12));
        assert!(!(-&m3.one()).is_positive(1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = m3.random(&mut rng);
        assert!((&b.adjoint() * &b).is_positive(1e-12));
    }

    #[test]
    fn swap_automorphism() {
        let cc = Algebra::new(vec![1, 1]).unwrap();
        let swap = Automorphism::new(&cc, vec![1, 0], vec![CMat::identity(1, 1), CMat::identity(1, 1)]).unwrap();
        let a = cc.diagonal(&[one(1.0), one(0.0)]).unwrap();
        assert_eq!(swap.apply_power(&a, 1), cc.diagonal(&[one(0.0), one(1.0)]).unwrap());
        assert_eq!(swap.apply_power(&a, 0), a);
    }

    #[test]
    fn inner_automorphism_square() {
        let m2 = Algebra::new(vec![2]).unwrap();
        let u = CMat::from_row_slice(2, 2, &[one(1.0), one(0.0), one(0.0), c(0.0, 1.0)]);
        let alpha = Automorphism::inner(&m2, u.clone()).unwrap();
        let e12 = m2.matrix_unit(0, 0, 1);
        // oracle: u² e12 (u²)* computed directly
        let u2 = &u * &u;
        let oracle = m2.element(vec![&u2 * &e12.blocks[0] * u2.adjoint()]).unwrap();
        assert!(alpha.apply_power(&e12, 2).max_diff(&oracle) < 1e-15);
        assert!(alpha.apply_power(&e12, 2).max_diff(&(-&e12)) < 1e-15);
    }

    #[test]
    fn non_unitary_is_rejected() {
        let m2 = Algebra::new(vec![2]).unwrap();
        let bad = CMat::from_row_slice(2, 2, &[one(2.0), one(0.0), one(0.0), one(1.0)]);
        assert!(Automorphism::inner(&m2, bad).is_err());
        let mixed = Algebra::new(vec![1, 2]).unwrap();
        let r = Automorphism::new(&mixed, vec![1, 0], vec![CMat::identity(1, 1), CMat::identity(2, 2)]);
        assert!(r.is_err());
    }

    #[test]
    fn coordinates_are_orthonormal_for_weighted_trace() {
        let alg = Algebra::with_weights(vec![2, 1], vec![2.0, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = alg.random(&mut rng);
        let b = alg.random(&mut rng);
        let lhs = alg.trace(&(&a.adjoint() * &b));
        let rhs = alg.coords(&a).dotc(&alg.coords(&b));
        assert!((lhs - rhs).norm() < 1e-12);
        assert!(alg.from_coords(&alg.coords(&a)).max_diff(&a) < 1e-15);
    }
}
