//! Balanced tensor product `X ⊗_A Y` as a quotient of the algebraic tensor
//! space by the null space of the trace-paired right Gram form.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, op_norm, CMat, CVec};

use super::{BimElem, Bimodule};

/// Relative eigenvalue threshold below which Gram directions count as null.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-9;

/// Passage between the algebraic tensor space and the quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct Quotient {
    /// `r × D`: class of an algebraic tensor.
    pub project: CMat,
    /// `D × r`: a representative of each quotient coordinate vector; `project * lift = I`.
    pub lift: CMat,
    /// Number of discarded null directions.
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorProduct {
    pub module: Bimodule,
    pub quotient: Quotient,
    left_dim: usize,
    right_dim: usize,
}

impl TensorProduct {
    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn algebraic_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    /// The class of `x ⊗ y`.
    pub fn factor_map(&self, x: &BimElem, y: &BimElem) -> BimElem {
        BimElem::new(&self.quotient.project * x.coords.kronecker(&y.coords))
    }

    /// Writes a representative of `u` as `Σ_p e_p ⊗ w_p` and returns the `w_p`.
    pub fn decompose(&self, u: &BimElem) -> Vec<BimElem> {
        let rep = &self.quotient.lift * &u.coords;
        let dy = self.right_dim;
        (0..self.left_dim)
            .map(|p| BimElem::new(CVec::from_fn(dy, |q, _| rep[p * dy + q])))
            .collect()
    }
}

/// Builds `X ⊗_A Y` after checking both factors against the bimodule axioms.
pub fn tensor(x: &Bimodule, y: &Bimodule, tol: f64) -> Result<TensorProduct> {
    for (name, m) in [("left factor", x), ("right factor", y)] {
        let report = m.check_axioms(1e-9);
        if !report.passed() {
            return Err(Error::AxiomFailure(format!("{name}: {}", report.failed_ids().join(", "))));
        }
    }
    tensor_unchecked(x, y, tol)
}

pub(crate) fn tensor_unchecked(x: &Bimodule, y: &Bimodule, tol: f64) -> Result<TensorProduct> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch("tensor factors live over different algebras".into()));
    }
    let alg = x.algebra().clone();
    let n = alg.dim();
    let (dx, dy) = (x.dim(), y.dim());
    let big = dx * dy;

    // coefficients of the induced forms on the algebraic basis e_p ⊗ f_q
    let mut gr = vec![CMat::zeros(big, big); n];
    let mut gl = vec![CMat::zeros(big, big); n];
    let e: Vec<BimElem> = (0..dx).map(|p| x.basis_elem(p)).collect();
    let f: Vec<BimElem> = (0..dy).map(|q| y.basis_elem(q)).collect();
    for p in 0..dx {
        for p2 in 0..dx {
            let m = y.left_op(&x.ip_right(&e[p], &e[p2]));
            for (g, coeff) in y.ip_right_coeffs().iter().enumerate() {
                let block = coeff * &m;
                for q in 0..dy {
                    for q2 in 0..dy {
                        gr[g][(p * dy + q, p2 * dy + q2)] = block[(q, q2)];
                    }
                }
            }
        }
    }
    for q in 0..dy {
        for q2 in 0..dy {
            let rt = x.right_op(&y.ip_left(&f[q], &f[q2])).transpose();
            for (g, coeff) in x.ip_left_coeffs().iter().enumerate() {
                let block = &rt * coeff;
                for p in 0..dx {
                    for p2 in 0..dx {
                        gl[g][(p * dy + q, p2 * dy + q2)] = block[(p, p2)];
                    }
                }
            }
        }
    }

    let holder = Bimodule::from_parts(alg.clone(), big, vec![CMat::zeros(big, big); n], vec![CMat::zeros(big, big); n], gl, gr)?;
    let s = holder.right_scalar_gram();
    let sl = holder.left_scalar_gram();
    let (vals, vecs) = hermitian_eigen(&s);
    let top = vals.first().cloned().unwrap_or(0.0);
    let scale = op_norm(&x.right_scalar_gram()) * op_norm(&y.right_scalar_gram());
    let keep: Vec<usize> = if top <= tol * scale.max(f64::MIN_POSITIVE) {
        Vec::new()
    } else {
        let (low, high) = (tol * top, 10.0 * tol * top);
        if let Some(&v) = vals.iter().find(|&&v| v >= low && v < high) {
            return Err(Error::IllConditioned { value: v, low, high });
        }
        (0..big).filter(|&k| vals[k] >= high).collect()
    };
    let r = keep.len();
    let kernel: Vec<usize> = (0..big).filter(|k| !keep.contains(k)).collect();

    if !kernel.is_empty() {
        // (u,v)_L = u^T S_L conj(v), so its null vectors are the conjugates of ker S_L
        let kmat = CMat::from_fn(big, kernel.len(), |i, j| vecs[(i, kernel[j])].conj());
        let leak = op_norm(&(&sl * &kmat)) / op_norm(&sl).max(1.0);
        if leak > tol.sqrt() {
            return Err(Error::LeftFormNotNull(leak));
        }
    }

    let lift = CMat::from_fn(big, r, |i, j| vecs[(i, keep[j])] / vals[keep[j]].sqrt());
    let project = CMat::from_fn(r, big, |i, j| vecs[(j, keep[i])].conj() * vals[keep[i]].sqrt());

    let id_x = CMat::identity(dx, dx);
    let id_y = CMat::identity(dy, dy);
    let left = x.left_basis_ops().iter().map(|l| &project * l.kronecker(&id_y) * &lift).collect();
    let right = y.right_basis_ops().iter().map(|rr| &project * id_x.kronecker(rr) * &lift).collect();
    let lift_conj = lift.map(|z| z.conj());
    let ipr = holder.ip_right_coeffs().iter().map(|g| lift.adjoint() * g * &lift).collect();
    let ipl = holder.ip_left_coeffs().iter().map(|g| lift.transpose() * g * &lift_conj).collect();
    let module = Bimodule::from_parts(alg, r, left, right, ipl, ipr)?;
    Ok(TensorProduct {
        module,
        quotient: Quotient { project, lift, kernel_dim: big - r },
        left_dim: dx,
        right_dim: dy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{half, matrix, scalar, swap};
    use crate::linalg::{c, max_abs_diff};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_squared_is_one_dimensional() {
        let s = scalar().module;
        let t = tensor(&s, &s, DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(t.module.dim(), 1);
        assert!(t.module.check_axioms(1e-10).passed());
    }

    #[test]
    fn swap_squared_has_two_dimensional_kernel() {
        let x = swap().module;
        let t = tensor(&x, &x, DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(t.algebraic_dim(), 4);
        assert_eq!(t.quotient.kernel_dim, 2);
        assert_eq!(t.module.dim(), 2);
        // independent oracle: rank of the 4x4 trace-paired Gram matrix
        // <x⊗y, x'⊗y'> = τ(<y, <x,x'>_R y'>_R) with A_α formulas evaluated directly
        let b = swap();
        let alg = &b.algebra;
        let alpha = b.automorphism.unwrap();
        let inv = alpha.inverse();
        let basis: Vec<_> = (0..2).map(|i| alg.basis(i)).collect();
        let mut g = CMat::zeros(4, 4);
        for p in 0..2 {
            for q in 0..2 {
                for p2 in 0..2 {
                    for q2 in 0..2 {
                        let inner = inv.apply(&(&basis[p].adjoint() * &basis[p2]));
                        let val = inv.apply(&(&basis[q].adjoint() * &(&inner * &basis[q2])));
                        g[(p * 2 + q, p2 * 2 + q2)] = alg.trace(&val);
                    }
                }
            }
        }
        let eig = nalgebra::SymmetricEigen::new(g);
        let rank = eig.eigenvalues.iter().filter(|v| v.abs() > 1e-9).count();
        assert_eq!(rank, 2);
    }

    #[test]
    fn balancing_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for b in [swap(), matrix()] {
            let x = &b.module;
            let t = tensor(x, x, DEFAULT_KERNEL_TOL).unwrap();
            for _ in 0..10 {
                let u = x.random_elem(&mut rng);
                let v = x.random_elem(&mut rng);
                let a = b.algebra.random(&mut rng);
                let lhs = t.factor_map(&x.act_right(&u, &a), &v);
                let rhs = t.factor_map(&u, &x.act_left(&a, &v));
                assert!(lhs.max_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn swap_with_dual_transports_left_inner_product() {
        let b = swap();
        let x = &b.module;
        let d = x.dual().unwrap();
        let t = tensor(x, &d, DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(t.module.dim(), 2);
        let alg = &b.algebra;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let (x1, y1, x2, y2) = (alg.random(&mut rng), alg.random(&mut rng), alg.random(&mut rng), alg.random(&mut rng));
            let el = |a: &crate::algebra::AlgElem| BimElem::new(alg.coords(a));
            let u = t.factor_map(&el(&x1), &el(&y1).conj());
            let v = t.factor_map(&el(&x2), &el(&y2).conj());
            // <x1⊗ỹ1, x2⊗ỹ2>_L = <x1 <ỹ1,ỹ2>_L, x2>_L = x1 (y1* y2)... via <ỹ1,ỹ2>_L = <y1,y2>_R
            let inner = b.automorphism.as_ref().unwrap().inverse().apply(&(&y1.adjoint() * &y2));
            let xa = &x1 * &b.automorphism.as_ref().unwrap().apply(&inner);
            let expected = &xa * &x2.adjoint();
            assert!(t.module.ip_left(&u, &v).max_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn half_squared_vanishes() {
        let h = half().module;
        let t = tensor(&h, &h, DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(t.module.dim(), 0);
        assert!(t.module.check_axioms(1e-10).passed());
        let hd = h.dual().unwrap();
        assert_eq!(tensor(&h, &hd, DEFAULT_KERNEL_TOL).unwrap().module.dim(), 1);
        assert_eq!(tensor(&hd, &h, DEFAULT_KERNEL_TOL).unwrap().module.dim(), 1);
    }

    #[test]
    fn quotient_basis_is_orthonormal() {
        let x = matrix().module;
        let t = tensor(&x, &x, DEFAULT_KERNEL_TOL).unwrap();
        let s = t.module.right_scalar_gram();
        assert!(max_abs_diff(&s, &CMat::identity(s.nrows(), s.ncols())) < 1e-12);
        assert!(max_abs_diff(&(&t.quotient.project * &t.quotient.lift), &CMat::identity(4, 4)) < 1e-12);
        assert!(t.module.check_axioms(1e-10).passed());
    }

    #[test]
    fn broken_factor_is_rejected() {
        let bad = scalar().module.with_scaled_left_inner_product(c(2.0, 0.0));
        assert!(matches!(tensor(&bad, &bad, DEFAULT_KERNEL_TOL), Err(Error::AxiomFailure(_))));
    }

    #[test]
    fn guard_band_raises() {
        // rescaling one basis vector of ℂ⊕ℂ puts a Gram eigenvalue inside the band
        use crate::algebra::Algebra;
        let alg = Algebra::new(vec![1, 1]).unwrap();
        let triv = Bimodule::trivial(&alg);
        let eps = 3e-9f64;
        let cm = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(eps.sqrt(), 0.0)]));
        let cinv = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(1.0 / eps.sqrt(), 0.0)]));
        let x = triv.change_basis(&cm, &cinv);
        assert!(x.check_axioms(1e-10).passed());
        let s = triv;
        assert!(matches!(tensor(&x, &s, DEFAULT_KERNEL_TOL), Err(Error::IllConditioned { .. })));
    }
}
