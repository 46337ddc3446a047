//! For `X = A_α`: the unitaries `I_n: X^{⊗n} → A` and the `K ⊗ A` picture.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, Automorphism};
use crate::bimodule::{BimElem, Bimodule};
use crate::error::{Error, Result};
use crate::fock::Window;
use crate::linalg::{max_abs_diff, vec_max_abs_diff, CMat};
use crate::report::Report;

#[derive(Debug, Clone)]
pub struct AAlphaPicture {
    alpha: Automorphism,
    radius: i32,
    /// `intertwiners[n + N]` is `I_n` as a `dim A × dim X^{⊗n}` matrix.
    intertwiners: Vec<CMat>,
}

impl AAlphaPicture {
    /// Builds `I_n` for every degree; fails unless the window's base is `A_α` in its standard basis.
    pub fn new(w: &Window, alpha: &Automorphism) -> Result<Self> {
        let alg = w.algebra().clone();
        let expected = Bimodule::from_automorphism(&alg, alpha);
        let dist = w.base().structure_distance(&expected);
        if dist > 1e-10 {
            return Err(Error::NotAAlpha(format!("structure constants differ from A_alpha by {dist:.3e}")));
        }
        let r = w.radius();
        let mut intertwiners = vec![CMat::zeros(0, 0); (2 * r + 1) as usize];
        let at = |n: i32| (n + r) as usize;
        let coords = |a: &AlgElem| alg.coords(a);
        let d = alg.dim();
        intertwiners[at(0)] = CMat::identity(d, d);
        // I_1(x) = α⁻¹(x)
        intertwiners[at(1)] = CMat::from_fn(d, d, |g, p| coords(&alpha.apply_power(&alg.basis(p), -1))[g]);
        // I_{-1}(ã) = a*
        let xm1 = w.dual_base();
        intertwiners[at(-1)] = {
            let mut m = CMat::zeros(d, xm1.dim());
            for k in 0..xm1.dim() {
                let a = alg.from_coords(&w.untilde(&xm1.basis_elem(k)).coords);
                m.set_column(k, &coords(&a.adjoint()));
            }
            m
        };
        for n in 2..=r {
            for deg in [n, -n] {
                let step = w.step(deg).expect("tensor step");
                let inner = if deg > 0 { deg - 1 } else { deg + 1 };
                let prev = intertwiners[at(inner)].clone();
                let dy = step.right_dim();
                // head factor of the left-associated tensor: α^{-n}(a) for n > 0, α^{-n-1}(a*) for n < 0
                let heads: Vec<AlgElem> = (0..step.left_dim())
                    .map(|p| {
                        if deg > 0 {
                            alpha.apply_power(&alg.basis(p), -deg)
                        } else {
                            let a = alg.from_coords(&w.untilde(&xm1.basis_elem(p)).coords);
                            alpha.apply_power(&a.adjoint(), -deg - 1)
                        }
                    })
                    .collect();
                let lift = &step.quotient.lift;
                let mut m = CMat::zeros(d, lift.ncols());
                for k in 0..lift.ncols() {
                    let mut acc = alg.zero();
                    for (p, head) in heads.iter().enumerate() {
                        for q in 0..dy {
                            let cf = lift[(p * dy + q, k)];
                            if cf.norm() == 0.0 {
                                continue;
                            }
                            let tail = alg.from_coords(&prev.column(q).into_owned());
                            acc = &acc + &(head * &tail).scale(cf);
                        }
                    }
                    m.set_column(k, &coords(&acc));
                }
                intertwiners[at(deg)] = m;
            }
        }
        Ok(Self { alpha: alpha.clone(), radius: r, intertwiners })
    }

    pub fn intertwiner(&self, n: i32) -> &CMat {
        &self.intertwiners[(n + self.radius) as usize]
    }

    /// Runs every check of the picture on `samples` random draws.
    pub fn check(&self, w: &Window, samples: usize, seed: u64, tol: f64) -> Report {
        let suite = "a-alpha-picture";
        let alg = w.algebra();
        let x1 = w.base();
        let r = self.radius;
        let d = alg.dim();
        let lmul = |a: &AlgElem| alg.left_mul_matrix(a);
        let alpha_mat = CMat::from_fn(d, d, |g, b| alg.coords(&self.alpha.apply(&alg.basis(b)))[g]);
        let alpha_inv_mat = CMat::from_fn(d, d, |g, b| alg.coords(&self.alpha.inverse().apply(&alg.basis(b)))[g]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rep = Report::new();

        let mut unitary: f64 = 0.0;
        for n in w.degrees() {
            let i = self.intertwiner(n);
            unitary = unitary.max(max_abs_diff(&(i.adjoint() * i), &CMat::identity(i.ncols(), i.ncols())));
            unitary = unitary.max(max_abs_diff(&(i * i.adjoint()), &CMat::identity(d, d)));
        }
        rep.check(suite, "in-unitary", unitary, tol);

        let (mut in1, mut in2, mut conj_l, mut conj_t, mut transport, mut formula) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..samples.max(1) {
            let a = alg.random(&mut rng);
            let x = x1.random_elem(&mut rng);
            let xa = alg.from_coords(&x.coords);
            let mut conj_l_blocks = Vec::new();
            let mut conj_t_blocks = Vec::new();
            for n in -r..=r {
                let i = self.intertwiner(n);
                let l = w.left_action_op(&a, n).unwrap();
                let c = BimElem::random(w.dim(n), &mut rng);
                let lhs = i * (&l * &c.coords);
                let target = self.alpha.apply_power(&a, -n);
                in1 = in1.max(vec_max_abs_diff(&lhs, &(lmul(&target) * (i * &c.coords))));
                let conj = i * &l * i.adjoint();
                conj_l = conj_l.max(max_abs_diff(&conj, &lmul(&target)));
                conj_l_blocks.push(conj);
                if n < r {
                    let t = w.creation(&x, n).unwrap();
                    let next = self.intertwiner(n + 1);
                    let tx = self.alpha.apply_power(&xa, -(n + 1));
                    let lhs = next * (&t * &c.coords);
                    in2 = in2.max(vec_max_abs_diff(&lhs, &(lmul(&tx) * (i * &c.coords))));
                    let conj = next * &t * i.adjoint();
                    conj_t = conj_t.max(max_abs_diff(&conj, &lmul(&tx)));
                    conj_t_blocks.push(conj);
                }
            }
            // σ lowers degrees by one; transported, the block at n-1 must be α applied to the block at n
            for k in 1..conj_l_blocks.len() {
                let expected = &alpha_mat * &conj_l_blocks[k] * &alpha_inv_mat;
                transport = transport.max(max_abs_diff(&conj_l_blocks[k - 1], &expected));
            }
            for k in 1..conj_t_blocks.len() {
                let expected = &alpha_mat * &conj_t_blocks[k] * &alpha_inv_mat;
                transport = transport.max(max_abs_diff(&conj_t_blocks[k - 1], &expected));
            }
            if r >= 2 {
                // I_2(a1 ⊗ a2) = α^{-2}(a1) α^{-1}(a2)
                let a1 = alg.random(&mut rng);
                let a2 = alg.random(&mut rng);
                let el = |z: &AlgElem| BimElem::new(alg.coords(z));
                let t = w.tensor_up(&el(&a1), &el(&a2), 1).unwrap();
                let got = alg.from_coords(&(self.intertwiner(2) * &t.coords));
                let expected = &self.alpha.apply_power(&a1, -2) * &self.alpha.apply_power(&a2, -1);
                formula = formula.max(got.max_diff(&expected));
                // I_{-2}(ã1 ⊗ ã2) = α(a1*) a2*
                let t = w.tensor_down(&w.tilde(&el(&a1)), &w.tilde(&el(&a2)), -1).unwrap();
                let got = alg.from_coords(&(self.intertwiner(-2) * &t.coords));
                let expected = &self.alpha.apply(&a1.adjoint()) * &a2.adjoint();
                formula = formula.max(got.max_diff(&expected));
            }
        }
        rep.check(suite, "in1", in1, tol);
        rep.check(suite, "in2", in2, tol);
        rep.check(suite, "in-formula", formula, tol);
        rep.check(suite, "conjugated-L", conj_l, tol);
        rep.check(suite, "conjugated-T", conj_t, tol);
        rep.check(suite, "sigma-transport", transport, tol);
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{half, matrix, swap};
    use crate::linalg::c;

    #[test]
    fn identity_at_degree_zero() {
        let b = swap();
        let w = Window::build(&b.module, 3).unwrap();
        let pic = AAlphaPicture::new(&w, b.automorphism.as_ref().unwrap()).unwrap();
        assert!(max_abs_diff(pic.intertwiner(0), &CMat::identity(2, 2)) == 0.0);
    }

    #[test]
    fn swap_degree_two_formula() {
        // I_2(a1 ⊗ a2) = α⁻²(a1)α⁻¹(a2) = a1 α(a2) for the swap
        let b = swap();
        let w = Window::build(&b.module, 3).unwrap();
        let alpha = b.automorphism.as_ref().unwrap();
        let pic = AAlphaPicture::new(&w, alpha).unwrap();
        let alg = &b.algebra;
        let a1 = alg.diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let a2 = alg.diagonal(&[c(5.0, 0.0), c(7.0, 0.0)]).unwrap();
        let t = w.tensor_up(&BimElem::new(alg.coords(&a1)), &BimElem::new(alg.coords(&a2)), 1).unwrap();
        let got = alg.from_coords(&(pic.intertwiner(2) * &t.coords));
        assert!(got.max_diff(&alg.diagonal(&[c(14.0, 0.0), c(15.0, 0.0)]).unwrap()) < 1e-12);
    }

    #[test]
    fn pictures_pass() {
        for b in [swap(), matrix()] {
            let w = Window::build(&b.module, 3).unwrap();
            let pic = AAlphaPicture::new(&w, b.automorphism.as_ref().unwrap()).unwrap();
            let r = pic.check(&w, 10, 4, 1e-12);
            assert!(r.passed(), "{}: {r}", b.name);
        }
    }

    #[test]
    fn non_a_alpha_rejected() {
        let w = Window::build(&half().module, 2).unwrap();
        let alpha = Automorphism::identity(w.algebra());
        assert!(matches!(AAlphaPicture::new(&w, &alpha), Err(Error::NotAAlpha(_))));
    }
}
