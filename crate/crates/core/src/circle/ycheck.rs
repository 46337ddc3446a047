//! The bimodule `Y` of loops, computed by convolution on the quadrature grid,
//! checked against the sequence structure through `I`.

use crate::algebra::AlgElem;
use crate::bimodule::{BimElem, Bimodule};
use crate::crossed::{SeqA, SeqX};
use crate::linalg::{c, op_norm, CMat};
use crate::report::Report;

use super::{coefficients_from_samples, iso_a, iso_a_inv, iso_a_quadrature, iso_x, iso_x_inv, iso_x_quadrature, nodes, LoopA, LoopX};

/// A grid large enough that every convolution and coefficient extraction below is alias free.
fn grid_size(f: &LoopX, g: &LoopX, phi: &LoopA) -> usize {
    4 * (f.degree() + g.degree() + phi.degree()) + 8
}

fn sum_scaled<T: super::Coeff>(terms: impl Iterator<Item = T>, zero: T, m: usize) -> T {
    let w = c(1.0 / m as f64, 0.0);
    terms.fold(zero, |acc, t| acc.plus(&t.times(w)))
}

fn at(j: isize, m: usize) -> usize {
    j.rem_euclid(m as isize) as usize
}

/// `(φf)(μ) = ∫ λ φ(λ) f(λ⁻¹μ) dλ` on the grid.
fn conv_left(x: &Bimodule, phi: &[AlgElem], f: &[BimElem]) -> Vec<BimElem> {
    let m = f.len();
    let pts = nodes(m);
    (0..m as isize)
        .map(|j| {
            let terms = (0..m).map(|i| x.act_left(&phi[i], &f[at(j - i as isize, m)]).scale(pts[i]));
            sum_scaled(terms, x.zero_elem(), m)
        })
        .collect()
}

/// `(fφ)(μ) = ∫ f(λ) φ(λ⁻¹μ) dλ`.
fn conv_right(x: &Bimodule, f: &[BimElem], phi: &[AlgElem]) -> Vec<BimElem> {
    let m = f.len();
    (0..m as isize)
        .map(|j| {
            let terms = (0..m).map(|i| x.act_right(&f[i], &phi[at(j - i as isize, m)]));
            sum_scaled(terms, x.zero_elem(), m)
        })
        .collect()
}

/// `<f,g>_L(μ) = ∫ <f(λ), μ g(μ⁻¹λ)>_L dλ`.
fn conv_ip_left(x: &Bimodule, f: &[BimElem], g: &[BimElem]) -> Vec<AlgElem> {
    let m = f.len();
    let pts = nodes(m);
    (0..m as isize)
        .map(|j| {
            let terms = (0..m).map(|i| x.ip_left(&f[i], &g[at(i as isize - j, m)].scale(pts[j as usize])));
            sum_scaled(terms, x.algebra().zero(), m)
        })
        .collect()
}

/// `<f,g>_R(μ) = ∫ <f(λ), g(λμ)>_R dλ`.
fn conv_ip_right(x: &Bimodule, f: &[BimElem], g: &[BimElem]) -> Vec<AlgElem> {
    let m = f.len();
    (0..m as isize)
        .map(|j| {
            let terms = (0..m).map(|i| x.ip_right(&f[i], &g[at(i as isize + j, m)]));
            sum_scaled(terms, x.algebra().zero(), m)
        })
        .collect()
}

fn j_a(samples: &[AlgElem], reach: i32) -> SeqA {
    SeqA { terms: coefficients_from_samples(samples, -reach..=reach).into_iter().map(|(k, a)| (-k, a)).collect() }
}

fn j_y(samples: &[BimElem], reach: i32) -> SeqX {
    SeqX { terms: coefficients_from_samples(samples, -reach..=reach).into_iter().map(|(k, v)| (1 - k, v)).collect() }
}

/// `‖f‖_Y = ‖<f,f>_R‖^{1/2}`, with the norm of `A ⋊_id S¹` realized as the operator norm
/// of convolution by `<f,f>_R` on `ℓ²(grid) ⊗ L²(A, τ)`.
pub fn loop_norm(x: &Bimodule, f: &LoopX) -> f64 {
    let m = 4 * f.degree() + 4;
    let s = f.sample(m);
    let psi = conv_ip_right(x, &s, &s);
    let alg = x.algebra();
    let d = alg.dim();
    let blocks: Vec<CMat> = psi.iter().map(|a| alg.left_mul_matrix(a) / c(m as f64, 0.0)).collect();
    let mut conv = CMat::zeros(m * d, m * d);
    for j in 0..m {
        for l in 0..m {
            conv.view_mut((j * d, l * d), (d, d)).copy_from(&blocks[at(j as isize - l as isize, m)]);
        }
    }
    op_norm(&conv).sqrt()
}

/// Every identity relating the loop structure on `Y` to the sequence structure, for the given loops.
pub fn y_structure_check(x: &Bimodule, f: &LoopX, g: &LoopX, phi: &LoopA, tol: f64) -> Report {
    let suite = "fourier";
    let m = grid_size(f, g, phi);
    let reach = (f.degree() + g.degree() + phi.degree() + 2) as i32;
    let mut rep = Report::new();

    let pts = nodes(m);
    let mut quad: f64 = 0.0;
    for e in -(m as i32 - 1)..=(m as i32 - 1) {
        let mean = pts.iter().map(|l| l.powi(e)).sum::<crate::linalg::C64>() / c(m as f64, 0.0);
        let exact = if e == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) };
        quad = quad.max((mean - exact).norm());
    }
    rep.check(suite, "quadrature-exact", quad, tol.max(1e-14));

    let mut mono_x: f64 = 0.0;
    for (&k, v) in &f.coeffs {
        let got = iso_x_quadrature(&LoopX::monomial(v.clone(), k), m).expect("grid is fine enough");
        mono_x = mono_x.max(got.max_diff(&SeqX::delta(v.clone(), 1 - k)));
    }
    rep.check(suite, "fourier-monomial-X", mono_x, tol);
    let mut mono_a: f64 = 0.0;
    for (&k, a) in &phi.coeffs {
        let got = iso_a_quadrature(&LoopA::monomial(a.clone(), k), m).expect("grid is fine enough");
        mono_a = mono_a.max(got.max_diff(&SeqA::delta(a.clone(), -k)));
    }
    rep.check(suite, "fourier-monomial-A", mono_a, tol);

    let alg = x.algebra();
    let round = [f, g]
        .iter()
        .map(|h| {
            let back = iso_x_inv(x, &iso_x(h));
            let coeff = h.coeffs.keys().chain(back.coeffs.keys()).map(|&k| h.coeff(k).max_diff(&back.coeff(k))).fold(0.0, f64::max);
            coeff.max(iso_x_quadrature(h, m).unwrap().max_diff(&iso_x(h)))
        })
        .fold(0.0, f64::max);
    let back = iso_a_inv(alg, &iso_a(phi));
    let round_a = phi.coeffs.keys().map(|&k| phi.coeff(k).max_diff(&back.coeff(k))).fold(0.0, f64::max);
    rep.check(suite, "fourier-round-trip", round.max(round_a), tol);

    let (fs, gs, ps) = (f.sample(m), g.sample(m), phi.sample(m));
    let (jf, jg, jp) = (iso_x(f), iso_x(g), iso_a(phi));
    let left = j_y(&conv_left(x, &ps, &fs), reach).max_diff(&jf.act_left(x, &jp));
    rep.check(suite, "y-left-action", left, tol);
    let right = j_y(&conv_right(x, &fs, &ps), reach).max_diff(&jf.act_right(x, &jp));
    rep.check(suite, "y-right-action", right, tol);
    let ipl = j_a(&conv_ip_left(x, &fs, &gs), reach).max_diff(&jf.ip_left(x, &jg));
    rep.check(suite, "y-ip-left", ipl, tol);
    let ipr = j_a(&conv_ip_right(x, &fs, &gs), reach).max_diff(&jf.ip_right(x, &jg));
    rep.check(suite, "y-ip-right", ipr, tol);

    let sup = |s: &SeqX| s.terms.values().map(|v| x.norm(v)).fold(0.0, f64::max);
    let iso = [f, g]
        .iter()
        .map(|h| (loop_norm(x, h) - sup(&iso_x(h))).abs())
        .fold(0.0, f64::max);
    rep.check(suite, "y-isometry", iso, tol);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{half, matrix, scalar, swap};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomials_are_exact() {
        let b = matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = LoopX::monomial(b.module.random_elem(&mut rng), 2);
        let g = LoopX::monomial(b.module.random_elem(&mut rng), 2);
        let phi = LoopA::monomial(b.algebra.random(&mut rng), 0);
        let r = y_structure_check(&b.module, &f, &g, &phi, 1e-12);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn random_loops_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for b in [scalar(), swap(), matrix(), half()] {
            let f = LoopX::random(&b.module, -2..=1, &mut rng);
            let g = LoopX::random(&b.module, [-1, 0, 3], &mut rng);
            let phi = LoopA::random(&b.algebra, -1..=2, &mut rng);
            let r = y_structure_check(&b.module, &f, &g, &phi, 1e-12);
            assert!(r.passed(), "{}: {r}", b.name);
        }
    }

    #[test]
    fn zero_loops() {
        let b = swap();
        let z = LoopX::zero_in(&b.module);
        let r = y_structure_check(&b.module, &z, &z, &LoopA::zero_in(&b.algebra), 1e-15);
        assert!(r.passed(), "{r}");
        assert_eq!(loop_norm(&b.module, &z), 0.0);
    }

    #[test]
    fn monomial_norm_is_module_norm() {
        let b = swap();
        let x = BimElem::from_slice(&[c(3.0, 0.0), c(0.0, 4.0)]);
        let n = loop_norm(&b.module, &LoopX::monomial(x.clone(), -1));
        assert!((n - b.module.norm(&x)).abs() < 1e-12);
    }
}
