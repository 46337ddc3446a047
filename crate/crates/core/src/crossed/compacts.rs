//! Rank-one operators `θ_{uδ_m, vδ_l}` as words in the generators, and the
//! converse approximation of creation operators by finite sums of `θ`s.

use crate::algebra::AlgElem;
use crate::bimodule::{BimElem, Bimodule, Side};
use crate::error::{Error, Result};
use crate::fock::{theta, GradedVec, Window};
use crate::linalg::{op_norm, CMat, CVec};

use super::word::{Gen, GeneratorWord};
use super::one;

#[derive(Debug, Clone)]
pub struct CompactApprox {
    pub word: GeneratorWord,
    /// `‖eval(word) − θ‖` in operator norm on the window.
    pub residual: f64,
}

fn left_chain(w: &Window, u: &BimElem, m: i32) -> Vec<(Vec<Gen>, AlgElem)> {
    let alg = w.algebra();
    match m {
        0 => vec![(Vec::new(), alg.from_coords(&u.coords))],
        1 => vec![(vec![Gen::T { x: u.clone(), n: 0 }], alg.one())],
        -1 => vec![(vec![Gen::TStar { x: w.untilde(u), n: -1 }], alg.one())],
        _ => {
            let step = w.step(m).expect("tensor step");
            let first = if m > 0 { w.base() } else { w.dual_base() };
            let mut out = Vec::new();
            for (p, wp) in step.decompose(u).into_iter().enumerate() {
                if wp.coords.iter().all(|z| z.norm() == 0.0) {
                    continue;
                }
                let head = if m > 0 {
                    Gen::T { x: first.basis_elem(p), n: m - 1 }
                } else {
                    Gen::TStar { x: w.untilde(&first.basis_elem(p)), n: m }
                };
                let inner = if m > 0 { m - 1 } else { m + 1 };
                for (mut chain, a) in left_chain(w, &wp, inner) {
                    chain.insert(0, head.clone());
                    out.push((chain, a));
                }
            }
            out
        }
    }
}

fn right_chain(w: &Window, v: &BimElem, l: i32) -> Vec<(AlgElem, Vec<Gen>)> {
    let alg = w.algebra();
    match l {
        0 => vec![(alg.from_coords(&v.coords), Vec::new())],
        1 => vec![(alg.one(), vec![Gen::TStar { x: v.clone(), n: 0 }])],
        -1 => vec![(alg.one(), vec![Gen::T { x: w.untilde(v), n: -1 }])],
        _ => {
            let step = w.step(l).expect("tensor step");
            let first = if l > 0 { w.base() } else { w.dual_base() };
            let mut out = Vec::new();
            for (p, wp) in step.decompose(v).into_iter().enumerate() {
                if wp.coords.iter().all(|z| z.norm() == 0.0) {
                    continue;
                }
                let tail = if l > 0 {
                    Gen::TStar { x: first.basis_elem(p), n: l - 1 }
                } else {
                    Gen::T { x: w.untilde(&first.basis_elem(p)), n: l }
                };
                let inner = if l > 0 { l - 1 } else { l + 1 };
                for (b, mut suffix) in right_chain(w, &wp, inner) {
                    suffix.push(tail.clone());
                    out.push((b, suffix));
                }
            }
            out
        }
    }
}

/// Word for `θ_{uδ_m, vδ_l}` obtained by peeling tensor factors with creation
/// operators down to `θ_{aδ_0, bδ_0} = L^0_{ab*}`.
pub fn peel_theta(w: &Window, u: &BimElem, m: i32, v: &BimElem, l: i32) -> Result<GeneratorWord> {
    for (deg, vec) in [(m, u), (l, v)] {
        if deg.abs() >= w.radius() {
            return Err(Error::DegreeOutOfWindow { degree: deg, radius: w.radius(), what: "compact generation" });
        }
        if vec.dim() != w.dim(deg) {
            return Err(Error::Dimension(format!("vector of length {} at degree {deg} of dimension {}", vec.dim(), w.dim(deg))));
        }
    }
    let mut word = GeneratorWord::default();
    for (prefix, a) in left_chain(w, u, m) {
        for (b, suffix) in right_chain(w, v, l) {
            let mut gens = prefix.clone();
            gens.push(Gen::L { a: &a * &b.adjoint(), n: 0 });
            gens.extend(suffix.iter().cloned());
            word = word.add(&GeneratorWord::monomial(one(), gens));
        }
    }
    Ok(word)
}

/// `θ_{uδ_m, vδ_l}` as a word in the image of `π`, with its residual.
///
/// Requires `X` full on both sides; the converse inclusion of the compacts in
/// the image of `π` depends on it.
pub fn generate_compacts(w: &Window, u: &BimElem, m: i32, v: &BimElem, l: i32) -> Result<CompactApprox> {
    let x = w.base();
    for (side, name) in [(Side::Left, "left"), (Side::Right, "right")] {
        if !x.fullness(side, 1e-9) {
            return Err(Error::NotFull(format!(
                "span of the {name} inner products has dimension {} of {}",
                x.inner_product_span_rank(side, 1e-9),
                x.algebra().dim()
            )));
        }
    }
    let word = peel_theta(w, u, m, v, l)?;
    let target = theta(w, &GradedVec::single(w, m, u)?, &GradedVec::single(w, l, v)?);
    let residual = word.eval(w)?.sub(&target).norm();
    Ok(CompactApprox { word, residual })
}

/// Distance from `creation` (a map `src → tgt` of the form `y ↦ x ⊗ y`) to the
/// finite-rank operator `Σ c_pq θ_{x⊗e_p, e_q}`, where `Σ c_pq <e_p,e_q>_L` is the
/// least-squares approximation of the unit within the span of `<src, src>_L`.
fn compact_residual(src: &Bimodule, tgt: &Bimodule, creation: &CMat) -> f64 {
    let d = src.dim();
    if d == 0 || tgt.dim() == 0 {
        return 0.0;
    }
    let alg = src.algebra();
    let basis: Vec<BimElem> = (0..d).map(|p| src.basis_elem(p)).collect();
    let m = CMat::from_fn(alg.dim(), d * d, |g, pq| alg.coords(&src.ip_left(&basis[pq / d], &basis[pq % d]))[g]);
    let target = alg.coords(&alg.one());
    let coeffs: CVec = m.svd(true, true).solve(&target, 1e-12).expect("svd with vectors");
    let mut approx = CMat::zeros(tgt.dim(), d);
    for pq in 0..d * d {
        let (p, q) = (pq / d, pq % d);
        if coeffs[pq].norm() == 0.0 {
            continue;
        }
        let xp = creation.column(p).into_owned();
        for k in 0..d {
            let col = tgt.right_op(&src.ip_right(&basis[q], &basis[k])) * &xp * coeffs[pq];
            let mut target_col = approx.column_mut(k);
            target_col += col;
        }
    }
    op_norm(&(creation - approx))
}

/// How far `T^n_x` (for `n ≥ 0`) or the dual creation `(T^n_x)*` (for `n < 0`)
/// is from a finite sum of rank-one operators built from the left inner product.
pub fn creation_compact_residual(w: &Window, x: &BimElem, n: i32) -> Result<f64> {
    let t = w.creation(x, n)?;
    Ok(if n >= 0 {
        compact_residual(w.component(n), w.component(n + 1), &t)
    } else {
        compact_residual(w.component(n + 1), w.component(n), &t.adjoint())
    })
}
