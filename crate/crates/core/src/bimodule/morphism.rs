//! Bimodule morphisms `(φ_A, φ_X)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgElem;
use crate::linalg::{rank, CMat};
use crate::report::Report;

use super::{BimElem, Bimodule};

/// Checks the four morphism equations on bases, plus the norm inequality on
/// `samples` random vectors (with equality when `φ_A` is injective).
///
/// `phi_x` is the matrix of `φ_X` from the basis of `x` to the basis of `y`.
pub fn check_morphism(
    phi_a: impl Fn(&AlgElem) -> AlgElem,
    phi_x: &CMat,
    x: &Bimodule,
    y: &Bimodule,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Report {
    let suite = "morphism";
    let mut r = Report::new();
    let src = x.algebra();
    let tgt = y.algebra();
    if phi_x.shape() != (y.dim(), x.dim()) {
        r.claim(suite, "morphism-left", false).with_note(format!(
            "phi_X has shape {:?}, expected {:?}",
            phi_x.shape(),
            (y.dim(), x.dim())
        ));
        return r;
    }
    let basis: Vec<AlgElem> = (0..src.dim()).map(|i| src.basis(i)).collect();
    let images: Vec<AlgElem> = basis.iter().map(&phi_a).collect();

    let mut hom: f64 = images[0].max_diff(&images[0]);
    for (i, a) in basis.iter().enumerate() {
        hom = hom.max(phi_a(&a.adjoint()).max_diff(&images[i].adjoint()));
        for (j, b) in basis.iter().enumerate() {
            hom = hom.max(phi_a(&(a * b)).max_diff(&(&images[i] * &images[j])));
        }
    }
    r.check(suite, "morphism-homomorphism", hom, tol);

    let map = |v: &BimElem| BimElem::new(phi_x * &v.coords);
    let e: Vec<BimElem> = (0..x.dim()).map(|p| x.basis_elem(p)).collect();
    let (mut left, mut right, mut ipl, mut ipr) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, a) in basis.iter().enumerate() {
        for v in &e {
            left = left.max(map(&x.act_left(a, v)).max_diff(&y.act_left(&images[i], &map(v))));
            right = right.max(map(&x.act_right(v, a)).max_diff(&y.act_right(&map(v), &images[i])));
        }
    }
    for u in &e {
        for v in &e {
            ipl = ipl.max(y.ip_left(&map(u), &map(v)).max_diff(&phi_a(&x.ip_left(u, v))));
            ipr = ipr.max(y.ip_right(&map(u), &map(v)).max_diff(&phi_a(&x.ip_right(u, v))));
        }
    }
    r.check(suite, "morphism-left", left, tol);
    r.check(suite, "morphism-right", right, tol);
    r.check(suite, "morphism-ip-left", ipl, tol);
    r.check(suite, "morphism-ip-right", ipr, tol);

    let coords = CMat::from_fn(tgt.dim(), src.dim(), |g, b| tgt.coords(&images[b])[g]);
    let injective = rank(&coords, 1e-10) == src.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let v = x.random_elem(&mut rng);
        let (nx, ny) = (x.norm(&v), y.norm(&map(&v)));
        let defect = if injective { (ny - nx).abs() } else { (ny - nx).max(0.0) };
        worst = worst.max(defect / nx.max(1.0));
    }
    r.check(suite, "morphism-norm", worst, tol)
        .with_note(if injective { "phi_A injective: isometry expected" } else { "phi_A not injective: contraction expected" });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{matrix, scalar, swap};
    use crate::linalg::c;

    #[test]
    fn identity_morphism_is_isometric() {
        for b in [scalar(), swap(), matrix()] {
            let d = b.module.dim();
            let r = check_morphism(|a| a.clone(), &CMat::identity(d, d), &b.module, &b.module, 20, 1, 1e-10);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn unit_scalar_gauge_is_a_morphism() {
        let b = matrix();
        let d = b.module.dim();
        let lambda = c(0.6, 0.8);
        let r = check_morphism(|a| a.clone(), &(CMat::identity(d, d) * lambda), &b.module, &b.module, 20, 2, 1e-10);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn doubling_breaks_inner_products_by_four() {
        let b = scalar();
        let r = check_morphism(|a| a.clone(), &(CMat::identity(1, 1) * c(2.0, 0.0)), &b.module, &b.module, 5, 3, 1e-10);
        assert!((r.get("morphism-ip-right").unwrap().violation - 3.0).abs() < 1e-12);
        assert!((r.get("morphism-ip-left").unwrap().violation - 3.0).abs() < 1e-12);
        assert!(!r.get("morphism-norm").unwrap().pass);
        assert!(r.get("morphism-left").unwrap().pass);
    }
}
