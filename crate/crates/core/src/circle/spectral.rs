//! `P_n(S) = ∫ λ^{-n} U_λ S U_λ* dλ` on window operators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crossed::{gauge, lambda_a, lambda_x};
use crate::error::{Error, Result};
use crate::fock::{GradedOp, Window};
use crate::linalg::{c, C64};
use crate::report::Report;

use super::nodes;

fn check_points(w: &Window, points: usize) -> Result<()> {
    let top = 4 * w.radius() as usize;
    if points < top + 2 {
        return Err(Error::QuadratureTooCoarse { points, degree: top, needed: top + 2 });
    }
    Ok(())
}

/// The gauge unitaries at the quadrature nodes, built once per window.
struct Rule {
    nodes: Vec<(C64, GradedOp, GradedOp)>,
    zero: GradedOp,
}

impl Rule {
    fn new(w: &Window, points: usize) -> Result<Self> {
        check_points(w, points)?;
        let nodes = nodes(points)
            .into_iter()
            .map(|l| gauge(w, l).map(|u| (l, u.adjoint(), u)))
            .collect::<Result<_>>()?;
        Ok(Self { nodes, zero: GradedOp::zero(w) })
    }

    fn project(&self, s: &GradedOp, n: i32) -> GradedOp {
        let mut acc = self.zero.clone();
        for (l, u_star, u) in &self.nodes {
            acc = acc.add(&u.compose(s).compose(u_star).scale(l.powi(-n)));
        }
        acc.scale(c(1.0 / self.nodes.len() as f64, 0.0))
    }
}

/// Requires `points ≥ 4N + 2`: window operators carry degrees in `[-2N, 2N]`.
pub fn spectral_projection(w: &Window, s: &GradedOp, n: i32, points: usize) -> Result<GradedOp> {
    Ok(Rule::new(w, points)?.project(s, n))
}

/// Fixed points, degree bookkeeping and completeness of the family `P_n`.
pub fn verify_spectral(w: &Window, samples: usize, seed: u64, points: usize, tol: f64) -> Result<Report> {
    let rule = Rule::new(w, points)?;
    let suite = "spectral";
    let r = w.radius();
    let top = 2 * r;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = |s: &GradedOp, n: i32| -> Result<GradedOp> { Ok(rule.project(s, n)) };
    let (mut fixed_a, mut fixed_x, mut degree, mut complete) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples.max(1) {
        let a = w.algebra().random(&mut rng);
        let x = w.base().random_elem(&mut rng);
        let y = w.base().random_elem(&mut rng);
        let la = lambda_a(w, &a);
        let lx = lambda_x(w, &x)?;
        fixed_a = fixed_a.max(p(&la, 0)?.max_diff(&la));
        fixed_a = fixed_a.max(p(&la, 1)?.max_abs());
        fixed_x = fixed_x.max(p(&lx, 1)?.max_diff(&lx));
        fixed_x = fixed_x.max(p(&lx, 0)?.max_abs());
        let lxy = lx.compose(&lambda_x(w, &y)?);
        degree = degree.max(p(&lxy, 2)?.max_diff(&lxy));
        degree = degree.max(p(&lxy, 1)?.max_abs());

        let s = GradedOp::random(w, &mut rng);
        let parts: Vec<GradedOp> = (-top..=top).map(|n| p(&s, n)).collect::<Result<_>>()?;
        let mut sum = GradedOp::zero(w);
        for (i, pn) in parts.iter().enumerate() {
            let n = i as i32 - top;
            sum = sum.add(pn);
            degree = degree.max(pn.max_diff(&s.degree_part(n)));
            for m in -top..=top {
                let twice = p(pn, m)?;
                let expected = if m == n { pn.clone() } else { GradedOp::zero(w) };
                degree = degree.max(twice.max_diff(&expected));
            }
        }
        complete = complete.max(sum.max_diff(&s));
    }
    let mut rep = Report::new();
    rep.check(suite, "spectral-fixed-A", fixed_a, tol);
    rep.check(suite, "spectral-fixed-X", fixed_x, tol);
    rep.check(suite, "spectral-degree", degree, tol);
    rep.check(suite, "spectral-complete", complete, tol);
    Ok(rep)
}
