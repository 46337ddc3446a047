//! Hilbert C*-bimodules over a block algebra, given by structure constants.
//!
//! A bimodule of dimension `d` is stored relative to a fixed basis `e_1..e_d`:
//! one `d×d` matrix per algebra basis element for each action, and one `d×d`
//! matrix per algebra coordinate for each inner product. Slot conventions:
//! `<x,y>_R` is conjugate-linear in `x`, `<x,y>_L` is conjugate-linear in `y`.

mod builtins;
mod morphism;
pub(crate) mod tensor;

pub use builtins::{half, matrix, scalar, swap, Builtin};
pub use morphism::check_morphism;
pub use tensor::{tensor, Quotient, TensorProduct, DEFAULT_KERNEL_TOL};

use rand::Rng;

use crate::algebra::{random_c64, AlgElem, Algebra, Automorphism};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, inv_sqrt_psd, is_identity, max_abs_diff, rank, CMat, CVec, C64};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct BimElem {
    pub coords: CVec,
}

impl BimElem {
    pub fn new(coords: CVec) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: CVec::zeros(dim) }
    }

    pub fn basis(dim: usize, p: usize) -> Self {
        let mut v = CVec::zeros(dim);
        v[p] = c(1.0, 0.0);
        Self { coords: v }
    }

    pub fn from_slice(values: &[C64]) -> Self {
        Self { coords: CVec::from_column_slice(values) }
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self { coords: CVec::from_fn(dim, |_, _| random_c64(rng)) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coords: &self.coords * s }
    }

    pub fn add(&self, other: &BimElem) -> Self {
        Self { coords: &self.coords + &other.coords }
    }

    /// Coordinates of the same vector viewed in the conjugate space.
    pub fn conj(&self) -> Self {
        Self { coords: self.coords.map(|z| z.conj()) }
    }

    pub fn max_diff(&self, other: &BimElem) -> f64 {
        crate::linalg::vec_max_abs_diff(&self.coords, &other.coords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule {
    algebra: Algebra,
    dim: usize,
    /// `left[β]` is the matrix of `x ↦ b_β·x`.
    left: Vec<CMat>,
    /// `right[β]` is the matrix of `x ↦ x·b_β`.
    right: Vec<CMat>,
    /// `ip_left[γ][(p,q)]` is coordinate γ of `<e_p,e_q>_L`.
    ip_left: Vec<CMat>,
    ip_right: Vec<CMat>,
}

impl Bimodule {
    pub fn from_parts(
        algebra: Algebra,
        dim: usize,
        left: Vec<CMat>,
        right: Vec<CMat>,
        ip_left: Vec<CMat>,
        ip_right: Vec<CMat>,
    ) -> Result<Self> {
        let n = algebra.dim();
        for (name, list) in [("left action", &left), ("right action", &right), ("left inner product", &ip_left), ("right inner product", &ip_right)] {
            if list.len() != n {
                return Err(Error::Dimension(format!("{name}: expected {n} matrices, got {}", list.len())));
            }
            if let Some(m) = list.iter().find(|m| m.shape() != (dim, dim)) {
                return Err(Error::Dimension(format!("{name}: expected {dim}x{dim} matrices, got {:?}", m.shape())));
            }
        }
        Ok(Self { algebra, dim, left, right, ip_left, ip_right })
    }

    /// Builds the structure constants from basis evaluations:
    /// `left(β, q) = b_β·e_q`, `right(β, q) = e_q·b_β`, `ip(p, q) = <e_p, e_q>`.
    pub fn from_fns(
        algebra: Algebra,
        dim: usize,
        left: impl Fn(usize, usize) -> CVec,
        right: impl Fn(usize, usize) -> CVec,
        ip_left: impl Fn(usize, usize) -> AlgElem,
        ip_right: impl Fn(usize, usize) -> AlgElem,
    ) -> Self {
        let n = algebra.dim();
        let action = |f: &dyn Fn(usize, usize) -> CVec| -> Vec<CMat> {
            (0..n)
                .map(|beta| {
                    let mut m = CMat::zeros(dim, dim);
                    for q in 0..dim {
                        m.set_column(q, &f(beta, q));
                    }
                    m
                })
                .collect()
        };
        let ip = |f: &dyn Fn(usize, usize) -> AlgElem| -> Vec<CMat> {
            let mut out = vec![CMat::zeros(dim, dim); n];
            for p in 0..dim {
                for q in 0..dim {
                    let v = algebra.coords(&f(p, q));
                    for (g, m) in out.iter_mut().enumerate() {
                        m[(p, q)] = v[g];
                    }
                }
            }
            out
        };
        let left = action(&left);
        let right = action(&right);
        let ip_left = ip(&ip_left);
        let ip_right = ip(&ip_right);
        Self { algebra, dim, left, right, ip_left, ip_right }
    }

    /// `A_α`: the algebra itself with `x·a = xα(a)`, `<x,y>_L = xy*`, `<x,y>_R = α⁻¹(x*y)`.
    pub fn from_automorphism(algebra: &Algebra, alpha: &Automorphism) -> Self {
        let n = algebra.dim();
        let b: Vec<AlgElem> = (0..n).map(|i| algebra.basis(i)).collect();
        let alpha_b: Vec<AlgElem> = b.iter().map(|x| alpha.apply(x)).collect();
        let inv = alpha.inverse();
        Self::from_fns(
            algebra.clone(),
            n,
            |beta, q| algebra.coords(&(&b[beta] * &b[q])),
            |beta, q| algebra.coords(&(&b[q] * &alpha_b[beta])),
            |p, q| &b[p] * &b[q].adjoint(),
            |p, q| inv.apply(&(&b[p].adjoint() * &b[q])),
        )
    }

    /// The algebra as a bimodule over itself.
    pub fn trivial(algebra: &Algebra) -> Self {
        Self::from_automorphism(algebra, &Automorphism::identity(algebra))
    }

    /// The zero bimodule.
    pub fn zero(algebra: &Algebra) -> Self {
        let n = algebra.dim();
        let e = vec![CMat::zeros(0, 0); n];
        Self { algebra: algebra.clone(), dim: 0, left: e.clone(), right: e.clone(), ip_left: e.clone(), ip_right: e }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_basis_ops(&self) -> &[CMat] {
        &self.left
    }

    pub fn right_basis_ops(&self) -> &[CMat] {
        &self.right
    }

    pub fn ip_left_coeffs(&self) -> &[CMat] {
        &self.ip_left
    }

    pub fn ip_right_coeffs(&self) -> &[CMat] {
        &self.ip_right
    }

    pub fn basis_elem(&self, p: usize) -> BimElem {
        BimElem::basis(self.dim, p)
    }

    pub fn zero_elem(&self) -> BimElem {
        BimElem::zeros(self.dim)
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> BimElem {
        BimElem::random(self.dim, rng)
    }

    fn combine(&self, ops: &[CMat], a: &AlgElem) -> CMat {
        let coeffs = self.algebra.coords(a);
        let mut m = CMat::zeros(self.dim, self.dim);
        for (cf, op) in coeffs.iter().zip(ops) {
            if *cf != c(0.0, 0.0) {
                m += op * *cf;
            }
        }
        m
    }

    /// Matrix of `x ↦ a·x`.
    pub fn left_op(&self, a: &AlgElem) -> CMat {
        self.combine(&self.left, a)
    }

    /// Matrix of `x ↦ x·a`.
    pub fn right_op(&self, a: &AlgElem) -> CMat {
        self.combine(&self.right, a)
    }

    pub fn act_left(&self, a: &AlgElem, x: &BimElem) -> BimElem {
        BimElem::new(self.left_op(a) * &x.coords)
    }

    pub fn act_right(&self, x: &BimElem, a: &AlgElem) -> BimElem {
        BimElem::new(self.right_op(a) * &x.coords)
    }

    pub fn ip_right(&self, x: &BimElem, y: &BimElem) -> AlgElem {
        let v = CVec::from_iterator(
            self.ip_right.len(),
            self.ip_right.iter().map(|g| (x.coords.adjoint() * g * &y.coords)[(0, 0)]),
        );
        self.algebra.from_coords(&v)
    }

    pub fn ip_left(&self, x: &BimElem, y: &BimElem) -> AlgElem {
        let yc = y.coords.map(|z| z.conj());
        let v = CVec::from_iterator(
            self.ip_left.len(),
            self.ip_left.iter().map(|g| (x.coords.transpose() * g * &yc)[(0, 0)]),
        );
        self.algebra.from_coords(&v)
    }

    /// `‖x‖ = ‖<x,x>_R‖^{1/2}`.
    pub fn norm(&self, x: &BimElem) -> f64 {
        self.ip_right(x, x).norm().sqrt()
    }

    fn trace_functional(&self) -> CVec {
        let alg = &self.algebra;
        CVec::from_fn(alg.dim(), |g, _| {
            let (i, j, k) = alg.basis_index(g);
            if j == k {
                c(alg.weights()[i].sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    fn scalar_gram(&self, coeffs: &[CMat]) -> CMat {
        let t = self.trace_functional();
        let mut s = CMat::zeros(self.dim, self.dim);
        for (tg, g) in t.iter().zip(coeffs) {
            if *tg != c(0.0, 0.0) {
                s += g * *tg;
            }
        }
        s
    }

    /// `S_pq = τ(<e_p, e_q>_R)`; the basis is orthonormal iff this is the identity.
    pub fn right_scalar_gram(&self) -> CMat {
        self.scalar_gram(&self.ip_right)
    }

    /// `S_pq = τ(<e_p, e_q>_L)`, so that `τ(<x,y>_L) = Σ x_p conj(y_q) S_pq`.
    pub fn left_scalar_gram(&self) -> CMat {
        self.scalar_gram(&self.ip_left)
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        is_identity(&self.right_scalar_gram(), tol)
    }

    /// Block `i` of the matrix `[<e_p,e_q>]_{p,q}` in `M_d(A)`, rows indexed `(p, j)`.
    fn gram_block(&self, coeffs: &[CMat], block: usize) -> CMat {
        let alg = &self.algebra;
        let nb = alg.block_dims()[block];
        let w = alg.weights()[block].sqrt();
        let d = self.dim;
        let mut m = CMat::zeros(d * nb, d * nb);
        for p in 0..d {
            for q in 0..d {
                for j in 0..nb {
                    for k in 0..nb {
                        let g = alg.basis_position(block, j, k);
                        m[(p * nb + j, q * nb + k)] = coeffs[g][(p, q)] / w;
                    }
                }
            }
        }
        m
    }

    /// Verifies every bimodule axiom on the basis; failures are report entries.
    pub fn check_axioms(&self, tol: f64) -> Report {
        let suite = "axioms";
        let alg = &self.algebra;
        let n = alg.dim();
        let d = self.dim;
        let id = CMat::identity(d, d);
        let mut r = Report::new();
        if d == 0 {
            for id in [
                "bimodule-law", "left-module", "right-module", "compatibility", "left-linearity",
                "right-linearity", "positivity-left", "positivity-right", "definiteness-left", "definiteness-right",
            ] {
                r.check(suite, id, 0.0, tol).with_note("zero module");
            }
            return r;
        }
        let basis: Vec<AlgElem> = (0..n).map(|i| alg.basis(i)).collect();

        let mut law: f64 = 0.0;
        let mut lmod = max_abs_diff(&self.left_op(&alg.one()), &id);
        let mut rmod = max_abs_diff(&self.right_op(&alg.one()), &id);
        for a in 0..n {
            for b in 0..n {
                law = law.max(max_abs_diff(&(&self.left[a] * &self.right[b]), &(&self.right[b] * &self.left[a])));
                let ab = &basis[a] * &basis[b];
                lmod = lmod.max(max_abs_diff(&self.left_op(&ab), &(&self.left[a] * &self.left[b])));
                rmod = rmod.max(max_abs_diff(&self.right_op(&ab), &(&self.right[b] * &self.right[a])));
            }
        }
        r.check(suite, "bimodule-law", law, tol);
        r.check(suite, "left-module", lmod, tol);
        r.check(suite, "right-module", rmod, tol);

        let e: Vec<BimElem> = (0..d).map(|p| self.basis_elem(p)).collect();
        let gl: Vec<Vec<AlgElem>> = (0..d).map(|p| (0..d).map(|q| self.ip_left(&e[p], &e[q])).collect()).collect();
        let gr: Vec<Vec<AlgElem>> = (0..d).map(|p| (0..d).map(|q| self.ip_right(&e[p], &e[q])).collect()).collect();

        let mut compat: f64 = 0.0;
        for p in 0..d {
            for q in 0..d {
                let lhs_op = self.left_op(&gl[p][q]);
                for (z, g) in gr[q].iter().enumerate() {
                    let lhs = lhs_op.column(z).into_owned();
                    let rhs = self.act_right(&e[p], g).coords;
                    compat = compat.max(crate::linalg::vec_max_abs_diff(&lhs, &rhs));
                }
            }
        }
        r.check(suite, "compatibility", compat, tol);

        let mut llin: f64 = 0.0;
        let mut rlin: f64 = 0.0;
        for p in 0..d {
            for q in 0..d {
                llin = llin.max(gl[p][q].adjoint().max_diff(&gl[q][p]));
                rlin = rlin.max(gr[p][q].adjoint().max_diff(&gr[q][p]));
                for b in &basis {
                    let ax = self.act_left(b, &e[p]);
                    llin = llin.max(self.ip_left(&ax, &e[q]).max_diff(&(b * &gl[p][q])));
                    let ya = self.act_right(&e[q], b);
                    rlin = rlin.max(self.ip_right(&e[p], &ya).max_diff(&(&gr[p][q] * b)));
                }
            }
        }
        r.check(suite, "left-linearity", llin, tol);
        r.check(suite, "right-linearity", rlin, tol);

        for (id, coeffs) in [("positivity-left", &self.ip_left), ("positivity-right", &self.ip_right)] {
            let mut worst: f64 = 0.0;
            for i in 0..alg.num_blocks() {
                let m = self.gram_block(coeffs, i);
                let (vals, _) = hermitian_eigen(&m);
                let scale = vals.first().cloned().unwrap_or(0.0).abs().max(1.0);
                let herm = max_abs_diff(&m, &m.adjoint());
                let neg = vals.last().map(|&v| (-v).max(0.0)).unwrap_or(0.0);
                worst = worst.max(neg / scale).max(herm);
            }
            r.check(suite, id, worst, tol);
        }

        for (id, s) in [("definiteness-left", self.left_scalar_gram()), ("definiteness-right", self.right_scalar_gram())] {
            let (vals, _) = hermitian_eigen(&s);
            let top = vals.first().cloned().unwrap_or(0.0);
            let low = vals.last().cloned().unwrap_or(0.0);
            let definite = top > 0.0 && low > tol * top;
            r.claim(suite, id, definite)
                .with_note(format!("smallest/largest scalar Gram eigenvalue = {:.3e}", if top > 0.0 { low / top } else { 0.0 }));
        }
        r
    }

    fn require_axioms(&self, tol: f64) -> Result<()> {
        let report = self.check_axioms(tol);
        if report.passed() {
            Ok(())
        } else {
            Err(Error::AxiomFailure(report.failed_ids().join(", ")))
        }
    }

    /// The conjugate bimodule: `a·x~ = (xa*)~`, `x~·a = (a*x)~`, inner products swapped.
    pub fn dual(&self) -> Result<Bimodule> {
        self.require_axioms(1e-9)?;
        Ok(self.dual_unchecked())
    }

    /// Dual without validating the input first.
    pub fn dual_unchecked(&self) -> Bimodule {
        let alg = &self.algebra;
        let n = alg.dim();
        let conj = |m: &CMat| m.map(|z| z.conj());
        let left = (0..n).map(|b| conj(&self.right[alg.adjoint_index(b)])).collect();
        let right = (0..n).map(|b| conj(&self.left[alg.adjoint_index(b)])).collect();
        Bimodule {
            algebra: alg.clone(),
            dim: self.dim,
            left,
            right,
            ip_left: self.ip_right.clone(),
            ip_right: self.ip_left.clone(),
        }
    }

    /// Re-expresses the bimodule in a basis orthonormal for `τ(<x,y>_R)`.
    ///
    /// Returns the new bimodule and the matrix taking old coordinates to new ones.
    pub fn orthonormalize(&self) -> Result<(Bimodule, CMat)> {
        let d = self.dim;
        let s = self.right_scalar_gram();
        if is_identity(&s, 1e-13) {
            return Ok((self.clone(), CMat::identity(d, d)));
        }
        let (vals, _) = hermitian_eigen(&s);
        if vals.last().map(|&v| v <= 1e-12 * vals[0].max(1e-300)).unwrap_or(false) {
            return Err(Error::AxiomFailure("right inner product is not definite".into()));
        }
        let (cm, cinv) = inv_sqrt_psd(&s);
        Ok((self.change_basis(&cm, &cinv), cinv))
    }

    /// Structure constants relative to the basis `e'_k = Σ_p C_pk e_p`; `c_inv` must be `C⁻¹`.
    pub fn change_basis(&self, cm: &CMat, c_inv: &CMat) -> Bimodule {
        let ccj = cm.map(|z| z.conj());
        let conj_op = |m: &CMat| c_inv * m * cm;
        Bimodule {
            algebra: self.algebra.clone(),
            dim: self.dim,
            left: self.left.iter().map(conj_op).collect(),
            right: self.right.iter().map(conj_op).collect(),
            ip_left: self.ip_left.iter().map(|g| cm.transpose() * g * &ccj).collect(),
            ip_right: self.ip_right.iter().map(|g| cm.adjoint() * g * cm).collect(),
        }
    }

    /// Whether the span of `<x,y>_side` over basis pairs is all of `A`.
    pub fn fullness(&self, side: Side, tol: f64) -> bool {
        self.inner_product_span_rank(side, tol) == self.algebra.dim()
    }

    pub fn inner_product_span_rank(&self, side: Side, tol: f64) -> usize {
        let coeffs = match side {
            Side::Left => &self.ip_left,
            Side::Right => &self.ip_right,
        };
        let d = self.dim;
        if d == 0 {
            return 0;
        }
        let n = self.algebra.dim();
        let m = CMat::from_fn(n, d * d, |g, pq| coeffs[g][(pq / d, pq % d)]);
        rank(&m, tol)
    }

    /// Whether `a ↦ (action of a on X)` is injective for the given side.
    pub fn action_faithful(&self, side: Side, tol: f64) -> bool {
        self.action_rank(side, tol) == self.algebra.dim()
    }

    pub fn action_rank(&self, side: Side, tol: f64) -> usize {
        let ops = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        let d = self.dim;
        if d == 0 {
            return 0;
        }
        let m = CMat::from_fn(d * d, ops.len(), |rc, b| ops[b][(rc / d, rc % d)]);
        rank(&m, tol)
    }

    /// Largest structure-constant difference to another bimodule over the same algebra.
    pub fn structure_distance(&self, other: &Bimodule) -> f64 {
        if self.dim != other.dim || self.algebra != other.algebra {
            return f64::INFINITY;
        }
        let lists = [
            (&self.left, &other.left),
            (&self.right, &other.right),
            (&self.ip_left, &other.ip_left),
            (&self.ip_right, &other.ip_right),
        ];
        lists
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| max_abs_diff(x, y)))
            .fold(0.0, f64::max)
    }

    /// Copy with the right action multiplied by `factor`; only useful for fault injection.
    pub fn with_scaled_right_action(&self, factor: C64) -> Bimodule {
        let mut out = self.clone();
        for m in &mut out.right {
            *m *= factor;
        }
        out
    }

    /// Copy with the left inner product multiplied by `factor`; only useful for fault injection.
    pub fn with_scaled_left_inner_product(&self, factor: C64) -> Bimodule {
        let mut out = self.clone();
        for m in &mut out.ip_left {
            *m *= factor;
        }
        out
    }
}
