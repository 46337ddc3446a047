//! The representations `Λ` and `π` on a window, the gauge unitaries, the shift
//! `σ` on generator words, compact generation, and the `A_α` picture.

mod aalpha;
mod compacts;
mod seq;
mod word;

pub use aalpha::AAlphaPicture;
pub use compacts::{creation_compact_residual, generate_compacts, peel_theta, CompactApprox};
pub use seq::{SeqA, SeqX};
pub use word::{verify_sigma, Gen, GeneratorWord, Monomial};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::AlgElem;
use crate::bimodule::{BimElem, Side};
use crate::error::{Error, Result};
use crate::fock::{GradedOp, GradedVec, Window};
use crate::linalg::{c, null_space, CMat, C64};
use crate::report::Report;

/// `Λ_A(a)`: block diagonal with blocks `L^n_a`.
pub fn lambda_a(w: &Window, a: &AlgElem) -> GradedOp {
    let mut op = GradedOp::zero(w);
    for n in w.degrees() {
        op.insert(n, n, w.component(n).left_op(a)).expect("degree in window");
    }
    op
}

/// `Λ_X(x)`: blocks `T^{n-1}_x` from degree `n-1` to `n`; the block leaving the top degree is dropped.
pub fn lambda_x(w: &Window, x: &BimElem) -> Result<GradedOp> {
    let mut op = GradedOp::zero(w);
    for n in (1 - w.radius())..=w.radius() {
        op.insert(n - 1, n, w.creation(x, n - 1)?)?;
    }
    op.edge = true;
    Ok(op)
}

/// `(U_λ η)(n) = λ^n η(n)`.
pub fn gauge(w: &Window, lambda: C64) -> Result<GradedOp> {
    let defect = (lambda.norm() - 1.0).abs();
    if defect > 1e-12 {
        return Err(Error::NotUnimodular(lambda.norm()));
    }
    let mut op = GradedOp::zero(w);
    for n in w.degrees() {
        let d = w.dim(n);
        op.insert(n, n, CMat::identity(d, d) * lambda.powi(n))?;
    }
    Ok(op)
}

fn support_check(n: i32, lo: i32, hi: i32, radius: i32, what: &'static str) -> Result<()> {
    if n < lo || n > hi {
        return Err(Error::DegreeOutOfWindow { degree: n, radius, what });
    }
    Ok(())
}

/// `π₀(φ)`: blocks `L^n_{φ(n)}`.
pub fn pi0(w: &Window, phi: &SeqA) -> Result<GradedOp> {
    let r = w.radius();
    let mut op = GradedOp::zero(w);
    for (&n, a) in &phi.terms {
        support_check(n, -r, r, r, "pi0 support")?;
        op.insert(n, n, w.left_action_op(a, n)?)?;
    }
    Ok(op)
}

/// `π₁(f)`: blocks `T^{n-1}_{f(n)}` from degree `n-1` to `n`.
pub fn pi1(w: &Window, f: &SeqX) -> Result<GradedOp> {
    let r = w.radius();
    let mut op = GradedOp::zero(w);
    for (&n, x) in &f.terms {
        support_check(n, 1 - r, r, r, "pi1 support")?;
        op.insert(n - 1, n, w.creation(x, n - 1)?)?;
    }
    Ok(op)
}

fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn par_max<const K: usize>(samples: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> [f64; K] + Sync) -> [f64; K] {
    (0..samples.max(1))
        .into_par_iter()
        .map(|i| f(&mut seeded(seed, i as u64)))
        .reduce(|| [0.0; K], |a, b| std::array::from_fn(|k| a[k].max(b[k])))
}

/// Gauge covariance for `λ` ranging over the 8th roots of unity.
pub fn verify_covariance(w: &Window, samples: usize, seed: u64, tol: f64) -> Report {
    let roots: Vec<C64> = (0..8).map(|k| C64::from_polar(1.0, std::f64::consts::PI * k as f64 / 4.0)).collect();
    let gauges: Vec<GradedOp> = roots.iter().map(|&l| gauge(w, l).expect("unit root")).collect();
    let mut law: f64 = 0.0;
    for (i, ui) in gauges.iter().enumerate() {
        for (j, uj) in gauges.iter().enumerate() {
            law = law.max(ui.compose(uj).max_diff(&gauges[(i + j) % 8]));
        }
    }
    let worst = par_max::<2>(samples, seed, |rng| {
        let a = w.algebra().random(rng);
        let x = w.base().random_elem(rng);
        let la = lambda_a(w, &a);
        let lx = lambda_x(w, &x).expect("window has radius >= 1");
        let mut v = [0.0f64; 2];
        for (l, u) in roots.iter().zip(&gauges) {
            v[0] = v[0].max(u.compose(&la).compose(&u.adjoint()).max_diff(&la));
            v[1] = v[1].max(u.compose(&lx).compose(&u.adjoint()).max_diff(&lx.scale(*l)));
        }
        v
    });
    let mut r = Report::new();
    r.check("covariance", "gauge-group-law", law, tol);
    r.check("covariance", "covariance-A", worst[0], tol);
    r.check("covariance", "covariance-X", worst[1], tol);
    r
}

/// The representation identities for `Λ` and `π` on random sequences.
pub fn verify_representation(w: &Window, samples: usize, seed: u64, tol: f64) -> Report {
    let n = w.radius();
    let x1 = w.base();
    let alg = w.algebra();
    let worst = par_max::<8>(samples, seed, |rng| {
        let mut v = [0.0f64; 8];
        let a = alg.random(rng);
        let x = x1.random_elem(rng);
        let y = x1.random_elem(rng);
        let lx = lambda_x(w, &x).unwrap();
        let ly = lambda_x(w, &y).unwrap();
        v[0] = lambda_a(w, &a).compose(&lx).max_diff(&lambda_x(w, &x1.act_left(&a, &x)).unwrap());
        v[1] = lx.adjoint().compose(&ly).restrict(-n, n - 1).max_diff(&lambda_a(w, &x1.ip_right(&x, &y)).restrict(-n, n - 1));

        let k = rng.random_range(-n..=n);
        let kx = rng.random_range(1 - n..=n);
        v[2] = pi0(w, &SeqA::delta(a.clone(), k)).unwrap().max_diff(&GradedOp::embed(w, k, k, w.left_action_op(&a, k).unwrap()).unwrap());
        v[2] = v[2].max(
            pi1(w, &SeqX::delta(x.clone(), kx))
                .unwrap()
                .max_diff(&GradedOp::embed(w, kx - 1, kx, w.creation(&x, kx - 1).unwrap()).unwrap()),
        );

        let phi = SeqA::random(alg, -n..=n, rng);
        let f = SeqX::random(x1, 1 - n..=n, rng);
        let g = SeqX::random(x1, 1 - n..=n, rng);
        let p0 = pi0(w, &phi).unwrap();
        let (pf, pg) = (pi1(w, &f).unwrap(), pi1(w, &g).unwrap());
        v[3] = pi1(w, &f.act_right(x1, &phi)).unwrap().max_diff(&pf.compose(&p0));
        v[4] = pi1(w, &f.act_left(x1, &phi)).unwrap().max_diff(&p0.compose(&pf));
        v[5] = pi0(w, &f.ip_right(x1, &g)).unwrap().max_diff(&pf.adjoint().compose(&pg));
        v[6] = pi0(w, &f.ip_left(x1, &g)).unwrap().max_diff(&pf.compose(&pg.adjoint()));

        // [(π₁f)* ξ](n) = (T^n_{f(n+1)})* ξ(n+1), entrywise and through the A-valued pairing
        let mut star = GradedOp::zero(w);
        for (&m, fm) in &f.terms {
            star.insert(m, m - 1, w.creation(fm, m - 1).unwrap().adjoint()).unwrap();
        }
        v[7] = pf.adjoint().max_diff(&star);
        let eta = GradedVec::random(w, rng);
        let xi = GradedVec::random(w, rng);
        let lhs = pf.apply(&eta).inner(w, &xi);
        let rhs = eta.inner(w, &star.apply(&xi));
        v[7] = v[7].max(lhs.max_diff(&rhs));
        v
    });
    let ids = [
        "lambda-tn1", "lambda-tn2", "pi-generators", "pi-right-action", "pi-left-action", "pi-ip-right", "pi-ip-left", "pi-adjoint",
    ];
    let mut r = Report::new();
    for (id, v) in ids.iter().zip(worst) {
        r.check("pi-representation", id, v, tol);
    }
    r
}

/// Window-scale kernel of `π₀` on sequences supported in the interior degrees.
#[derive(Debug, Clone)]
pub struct Injectivity {
    pub faithful_left: bool,
    pub faithful_right: bool,
    /// `(degree, dim ker L^n)` for each interior degree.
    pub kernel_dims: Vec<(i32, usize)>,
    /// A nonzero interior-supported `φ` with `π₀(φ) = 0`, when one exists.
    pub witness: Option<SeqA>,
}

impl Injectivity {
    pub fn kernel_trivial(&self) -> bool {
        self.kernel_dims.iter().all(|&(_, k)| k == 0)
    }
}

pub fn injectivity(w: &Window, tol: f64) -> Injectivity {
    let alg = w.algebra();
    let x1 = w.base();
    let mut kernel_dims = Vec::new();
    let mut candidates: Vec<(i32, usize, SeqA)> = Vec::new();
    for n in (1 - w.radius())..w.radius() {
        let comp = w.component(n);
        let d = comp.dim();
        let ops = comp.left_basis_ops();
        let m = CMat::from_fn(d * d, ops.len(), |rc, b| ops[b][(rc / d, rc % d)]);
        let ker = if d == 0 { CMat::identity(alg.dim(), alg.dim()) } else { null_space(&m, tol) };
        kernel_dims.push((n, ker.ncols()));
        if ker.ncols() > 0 {
            let phi = alg.from_coords(&ker.column(0).into_owned());
            candidates.push((n, d, SeqA::delta(phi, n)));
        }
    }
    // prefer a witness on a nonzero component, closest to degree 0
    candidates.sort_by_key(|(n, d, _)| (*d == 0, n.abs(), *n));
    Injectivity {
        faithful_left: x1.action_faithful(Side::Left, tol),
        faithful_right: x1.action_faithful(Side::Right, tol),
        kernel_dims,
        witness: candidates.into_iter().next().map(|(_, _, s)| s),
    }
}

/// Report entries for the injectivity dichotomy.
pub fn verify_injectivity(w: &Window, tol: f64) -> (Report, Injectivity) {
    let inj = injectivity(w, 1e-9);
    let mut r = Report::new();
    let both = inj.faithful_left && inj.faithful_right;
    r.claim("pi-representation", "injectivity-dichotomy", both == inj.kernel_trivial()).with_note(format!(
        "left action faithful: {}, right action faithful: {}, interior kernel dims {:?}",
        inj.faithful_left, inj.faithful_right, inj.kernel_dims
    ));
    if let Some(phi) = &inj.witness {
        let (n, a) = phi.terms.iter().next().unwrap();
        let viol = pi0(w, phi).map(|op| op.max_abs()).unwrap_or(f64::INFINITY);
        r.check("pi-representation", "kernel-witness", viol / a.norm(), tol)
            .with_note(format!("phi = {a} at degree {n}, norm {:.3}", a.norm()));
    }
    (r, inj)
}

pub(crate) fn one() -> C64 {
    c(1.0, 0.0)
}
