//! The truncated Fock module `⊕_{|n|≤N} X^{⊗n}` and its creation operators.
//!
//! Components are built left-associated: `X^{⊗n} = X ⊗ X^{⊗(n-1)}` for `n ≥ 2`
//! and `X^{⊗n} = X̃ ⊗ X^{⊗(n+1)}` for `n ≤ -2`. Every component carries an
//! orthonormal basis, so module adjoints are conjugate transposes.

mod graded;
mod identities;

pub use graded::{theta, GradedOp, GradedVec};
pub use identities::verify_creation_identities;

use crate::algebra::AlgElem;
use crate::bimodule::tensor::tensor_unchecked;
use crate::bimodule::{BimElem, Bimodule, TensorProduct, DEFAULT_KERNEL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{kron_vec_identity, CMat};

#[derive(Debug, Clone)]
pub struct Window {
    radius: i32,
    /// `components[n + N]` is `X^{⊗n}`.
    components: Vec<Bimodule>,
    /// `steps[n + N]` is the tensor step producing component `n`, for `|n| ≥ 2`.
    steps: Vec<Option<TensorProduct>>,
    /// Coordinates of `x~` in `X^{⊗-1}` are `dual_import · conj(x)`.
    dual_import: CMat,
    dual_export: CMat,
}

impl Window {
    /// Builds the window after checking `x` against the bimodule axioms.
    pub fn build(x: &Bimodule, radius: usize) -> Result<Window> {
        let report = x.check_axioms(1e-9);
        if !report.passed() {
            return Err(Error::AxiomFailure(report.failed_ids().join(", ")));
        }
        Self::build_unchecked(x, radius)
    }

    /// Builds the window without validating `x`; used for fault injection.
    ///
    /// `x` is re-expressed in an orthonormal basis if it is not already; use
    /// [`Window::base`] for the coordinates actually in effect.
    pub fn build_unchecked(x: &Bimodule, radius: usize) -> Result<Window> {
        if radius < 1 {
            return Err(Error::Dimension("window radius must be at least 1".into()));
        }
        let n = radius as i32;
        let (x1, _) = x.orthonormalize()?;
        let (xm1, dual_import) = x1.dual_unchecked().orthonormalize()?;
        let dual_export = dual_import.clone().try_inverse().unwrap_or_else(|| CMat::identity(0, 0));

        let size = 2 * radius + 1;
        let mut components: Vec<Option<Bimodule>> = vec![None; size];
        let mut steps: Vec<Option<TensorProduct>> = vec![None; size];
        let at = |k: i32| (k + n) as usize;
        components[at(0)] = Some(Bimodule::trivial(x.algebra()));
        components[at(1)] = Some(x1.clone());
        components[at(-1)] = Some(xm1.clone());
        for k in 2..=n {
            let t = tensor_unchecked(&x1, components[at(k - 1)].as_ref().unwrap(), DEFAULT_KERNEL_TOL)?;
            components[at(k)] = Some(t.module.clone());
            steps[at(k)] = Some(t);
            let t = tensor_unchecked(&xm1, components[at(1 - k)].as_ref().unwrap(), DEFAULT_KERNEL_TOL)?;
            components[at(-k)] = Some(t.module.clone());
            steps[at(-k)] = Some(t);
        }
        Ok(Window {
            radius: n,
            components: components.into_iter().map(Option::unwrap).collect(),
            steps,
            dual_import,
            dual_export,
        })
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + Clone {
        -self.radius..=self.radius
    }

    pub fn contains(&self, n: i32) -> bool {
        n.abs() <= self.radius
    }

    pub fn algebra(&self) -> &crate::algebra::Algebra {
        self.components[0].algebra()
    }

    /// `X^{⊗1}`, the bimodule in the coordinates used by the window.
    pub fn base(&self) -> &Bimodule {
        self.component(1)
    }

    /// `X^{⊗-1} = X̃`.
    pub fn dual_base(&self) -> &Bimodule {
        self.component(-1)
    }

    /// Component `X^{⊗n}`; panics outside the window.
    pub fn component(&self, n: i32) -> &Bimodule {
        assert!(self.contains(n), "degree {n} outside window of radius {}", self.radius);
        &self.components[(n + self.radius) as usize]
    }

    pub fn dim(&self, n: i32) -> usize {
        self.component(n).dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Bimodule::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(Bimodule::dim).sum()
    }

    /// Position of the first coordinate of degree `n` in the dense layout.
    pub fn offset(&self, n: i32) -> usize {
        self.degrees().take_while(|&k| k < n).map(|k| self.dim(k)).sum()
    }

    /// The tensor step `X ⊗ X^{⊗(n-1)}` (n ≥ 2) or `X̃ ⊗ X^{⊗(n+1)}` (n ≤ -2) producing component `n`.
    pub fn step(&self, n: i32) -> Option<&TensorProduct> {
        if !self.contains(n) {
            return None;
        }
        self.steps[(n + self.radius) as usize].as_ref()
    }

    pub fn tilde(&self, x: &BimElem) -> BimElem {
        BimElem::new(&self.dual_import * x.coords.map(|z| z.conj()))
    }

    pub fn untilde(&self, w: &BimElem) -> BimElem {
        BimElem::new((&self.dual_export * &w.coords).map(|z| z.conj()))
    }

    fn degree_check(&self, n: i32, lo: i32, hi: i32, what: &'static str) -> Result<()> {
        if n < lo || n > hi {
            return Err(Error::DegreeOutOfWindow { degree: n, radius: self.radius, what });
        }
        Ok(())
    }

    /// `L^n_a`: the left action of `a` on `X^{⊗n}`.
    pub fn left_action_op(&self, a: &AlgElem, n: i32) -> Result<CMat> {
        self.degree_check(n, -self.radius, self.radius, "left action")?;
        Ok(self.component(n).left_op(a))
    }

    /// Class of `x ⊗ w` in `X^{⊗(n+1)}` for `x ∈ X` and `w ∈ X^{⊗n}`, `n ≥ 0`;
    /// at `n = 0` this is `x·w` under `X ⊗ A ≅ X`.
    pub fn tensor_up(&self, x: &BimElem, w: &BimElem, n: i32) -> Result<BimElem> {
        self.degree_check(n, 0, self.radius - 1, "tensor_up")?;
        Ok(BimElem::new(self.creation(x, n)? * &w.coords))
    }

    /// Class of `ỹ ⊗ w` in `X^{⊗(n-1)}` for `ỹ ∈ X̃` and `w ∈ X^{⊗n}`, `n ≤ 0`.
    pub fn tensor_down(&self, y_tilde: &BimElem, w: &BimElem, n: i32) -> Result<BimElem> {
        self.degree_check(n, 1 - self.radius, 0, "tensor_down")?;
        Ok(BimElem::new(self.dual_creation(y_tilde, -n) * &w.coords))
    }

    /// Creation by `ỹ ∈ X̃` on the dual tower: `X^{⊗-m} → X^{⊗-(m+1)}`, `0 ≤ m ≤ N-1`.
    fn dual_creation(&self, y_tilde: &BimElem, m: i32) -> CMat {
        if m == 0 {
            let xm1 = self.dual_base();
            let mut t = CMat::zeros(xm1.dim(), self.algebra().dim());
            for (b, r) in xm1.right_basis_ops().iter().enumerate() {
                t.set_column(b, &(r * &y_tilde.coords));
            }
            t
        } else {
            let step = self.step(-(m + 1)).expect("dual tensor step");
            &step.quotient.project * kron_vec_identity(&y_tilde.coords, self.dim(-m))
        }
    }

    /// `T^n_x: X^{⊗n} → X^{⊗(n+1)}` for `-N ≤ n ≤ N-1`; negative degrees are
    /// adjoints of dual creations.
    pub fn creation(&self, x: &BimElem, n: i32) -> Result<CMat> {
        self.degree_check(n, -self.radius, self.radius - 1, "creation")?;
        if x.dim() != self.base().dim() {
            return Err(Error::Dimension(format!("element of length {} in a module of dimension {}", x.dim(), self.base().dim())));
        }
        Ok(match n {
            0 => {
                let x1 = self.base();
                let mut t = CMat::zeros(x1.dim(), self.algebra().dim());
                for (b, r) in x1.right_basis_ops().iter().enumerate() {
                    t.set_column(b, &(r * &x.coords));
                }
                t
            }
            n if n > 0 => {
                let step = self.step(n + 1).expect("tensor step");
                &step.quotient.project * kron_vec_identity(&x.coords, self.dim(n))
            }
            n => self.dual_creation(&self.tilde(x), -n - 1).adjoint(),
        })
    }

    /// `T^n_x` for `n < 0` built directly from `x̃₁ ⊗ w ↦ <x,x₁>_L w`.
    pub fn creation_negative_direct(&self, x: &BimElem, n: i32) -> Result<CMat> {
        self.degree_check(n, -self.radius, -1, "direct negative creation")?;
        let xm1 = self.dual_base();
        let xt = self.tilde(x);
        let d1 = xm1.dim();
        // <x, x_p>_L = <x~, e~_p>_R in X̃
        let coeff: Vec<AlgElem> = (0..d1).map(|p| xm1.ip_right(&xt, &xm1.basis_elem(p))).collect();
        if n == -1 {
            let alg = self.algebra();
            let mut t = CMat::zeros(alg.dim(), d1);
            for (p, a) in coeff.iter().enumerate() {
                t.set_column(p, &alg.coords(a));
            }
            return Ok(t);
        }
        let inner = self.component(n + 1);
        let dq = inner.dim();
        let mut direct = CMat::zeros(dq, d1 * dq);
        for (p, a) in coeff.iter().enumerate() {
            let l = inner.left_op(a);
            for q in 0..dq {
                direct.set_column(p * dq + q, &l.column(q));
            }
        }
        Ok(direct * &self.step(n).expect("dual tensor step").quotient.lift)
    }

    /// `(T^n_x)*` for `n < 0` built directly as `w ↦ x̃ ⊗ w` (with `x̃ ⊗ a = x̃·a` at `n = -1`).
    pub fn creation_adjoint_negative_direct(&self, x: &BimElem, n: i32) -> Result<CMat> {
        self.degree_check(n, -self.radius, -1, "direct negative creation adjoint")?;
        let xt = self.tilde(x);
        let d = self.dim(n + 1);
        let mut t = CMat::zeros(self.dim(n), d);
        if n == -1 {
            let alg = self.algebra();
            for b in 0..d {
                t.set_column(b, &self.dual_base().act_right(&xt, &alg.basis(b)).coords);
            }
        } else {
            let step = self.step(n).expect("dual tensor step");
            let inner = self.component(n + 1);
            for q in 0..d {
                t.set_column(q, &step.factor_map(&xt, &inner.basis_elem(q)).coords);
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{half, matrix, scalar, swap};
    use crate::linalg::{c, max_abs_diff, op_norm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_window_is_all_ones() {
        let w = Window::build(&scalar().module, 3).unwrap();
        assert_eq!(w.dims(), vec![1; 7]);
        let one = BimElem::from_slice(&[c(1.0, 0.0)]);
        for n in -3..3 {
            assert!(max_abs_diff(&w.creation(&one, n).unwrap(), &CMat::identity(1, 1)) < 1e-14);
        }
    }

    #[test]
    fn swap_window_dims() {
        let w = Window::build(&swap().module, 2).unwrap();
        assert_eq!(w.dims(), vec![2; 5]);
    }

    #[test]
    fn half_window_dims() {
        let w = Window::build(&half().module, 3).unwrap();
        assert_eq!(w.dims(), vec![0, 0, 1, 2, 1, 0, 0]);
        for n in w.degrees() {
            assert!(w.component(n).check_axioms(1e-10).passed());
        }
    }

    #[test]
    fn creation_at_minus_one_is_left_inner_product() {
        let b = swap();
        let w = Window::build(&b.module, 2).unwrap();
        let alg = &b.algebra;
        let x = BimElem::new(alg.coords(&alg.diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap()));
        let t = w.creation(&x, -1).unwrap();
        let image = BimElem::new(&t * &w.tilde(&x).coords);
        let expected = alg.diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(alg.from_coords(&image.coords).max_diff(&expected) < 1e-14);
    }

    #[test]
    fn degree_errors() {
        let w = Window::build(&scalar().module, 2).unwrap();
        let one = BimElem::from_slice(&[c(1.0, 0.0)]);
        assert!(matches!(w.creation(&one, 2), Err(Error::DegreeOutOfWindow { degree: 2, .. })));
        assert!(matches!(w.creation(&one, -3), Err(Error::DegreeOutOfWindow { .. })));
        assert!(w.creation(&one, -2).is_ok());
        assert!(w.left_action_op(&w.algebra().one(), 3).is_err());
    }

    #[test]
    fn left_action_examples() {
        let b = swap();
        let w = Window::build(&b.module, 2).unwrap();
        let alg = &b.algebra;
        for n in w.degrees() {
            let l = w.left_action_op(&alg.one(), n).unwrap();
            assert!(max_abs_diff(&l, &CMat::identity(2, 2)) < 1e-13);
        }
        let p = alg.diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let l0 = w.left_action_op(&p, 0).unwrap();
        let mut expected = CMat::zeros(2, 2);
        expected[(0, 0)] = c(1.0, 0.0);
        assert!(max_abs_diff(&l0, &expected) < 1e-15);
        // L^{-1}_a x~ = (x a*)~
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = matrix();
        let w = Window::build(&m.module, 2).unwrap();
        for _ in 0..5 {
            let a = m.algebra.random(&mut rng);
            let x = w.base().random_elem(&mut rng);
            let lhs = BimElem::new(w.left_action_op(&a, -1).unwrap() * &w.tilde(&x).coords);
            let rhs = w.tilde(&w.base().act_right(&x, &a.adjoint()));
            assert!(lhs.max_diff(&rhs) < 1e-13);
        }
    }

    #[test]
    fn creation_norm_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for b in [swap(), matrix(), half()] {
            let w = Window::build(&b.module, 3).unwrap();
            for _ in 0..20 {
                let x = w.base().random_elem(&mut rng);
                let nx = w.base().norm(&x);
                for n in -3..3 {
                    assert!(op_norm(&w.creation(&x, n).unwrap()) <= nx + 1e-10);
                }
            }
        }
    }

    #[test]
    fn negative_creation_matches_direct_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for b in [swap(), matrix()] {
            let w = Window::build(&b.module, 3).unwrap();
            let x = w.base().random_elem(&mut rng);
            for n in -3..0 {
                let t = w.creation(&x, n).unwrap();
                assert!(max_abs_diff(&t, &w.creation_negative_direct(&x, n).unwrap()) < 1e-12);
                assert!(max_abs_diff(&t.adjoint(), &w.creation_adjoint_negative_direct(&x, n).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn tilde_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let w = Window::build(&matrix().module, 1).unwrap();
        let x = w.base().random_elem(&mut rng);
        assert!(w.untilde(&w.tilde(&x)).max_diff(&x) < 1e-14);
    }
}
