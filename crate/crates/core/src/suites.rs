//! Named verification suites over an [`Instance`], run in parallel and merged into one report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bimodule::{Bimodule, Side};
use crate::circle::{verify_spectral, y_structure_check, LoopA, LoopX};
use crate::crossed::{
    creation_compact_residual, generate_compacts, pi0, verify_covariance, verify_injectivity, verify_representation,
    verify_sigma, AAlphaPicture, SeqA,
};
use crate::error::{Error, Result};
use crate::fock::{theta, verify_creation_identities, GradedVec, Window};
use crate::instance::Instance;
use crate::linalg::{rank, CMat};
use crate::report::Report;

pub const SUITES: [&str; 10] = [
    "axioms",
    "tensor-powers",
    "creation-identities",
    "covariance",
    "pi-representation",
    "compact-generation",
    "sigma",
    "fourier",
    "spectral",
    "a-alpha-picture",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub window: usize,
    pub tol: f64,
    pub quadrature: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Settings {
    pub const DEFAULT_WINDOW: usize = 3;
    pub const DEFAULT_TOL: f64 = 1e-9;
    pub const DEFAULT_SEED: u64 = 20240601;
    pub const DEFAULT_SAMPLES: usize = 50;

    /// Defaults for radius `window`; the quadrature follows the radius as `4N + 2`.
    pub fn for_window(window: usize) -> Self {
        Self {
            window,
            tol: Self::DEFAULT_TOL,
            quadrature: 4 * window + 2,
            seed: Self::DEFAULT_SEED,
            samples: Self::DEFAULT_SAMPLES,
        }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Self::for_window(Self::DEFAULT_WINDOW)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    /// A suite could not run because a Gram kernel fell in the guard band.
    pub ill_conditioned: bool,
}

/// Every suite that applies to `inst`; the `A_α` picture needs a known automorphism.
pub fn default_suites(inst: &Instance) -> Vec<String> {
    SUITES
        .iter()
        .filter(|&&s| s != "a-alpha-picture" || inst.automorphism.is_some())
        .map(|s| s.to_string())
        .collect()
}

pub fn unknown_suites(names: &[String]) -> Vec<String> {
    names.iter().filter(|n| !SUITES.contains(&n.as_str())).cloned().collect()
}

/// Runs the named suites; unknown names must be rejected beforehand.
pub fn run_suites(inst: &Instance, names: &[String], s: &Settings) -> Outcome {
    let needs_window = names.iter().any(|n| n != "axioms");
    let window = if needs_window { Some(Window::build(&inst.module, s.window)) } else { None };
    let results: Vec<(String, Result<Report>)> = names
        .par_iter()
        .map(|name| {
            let res = match name.as_str() {
                "axioms" => Ok(inst.module.check_axioms(s.tol)),
                other => match window.as_ref().unwrap() {
                    Ok(w) => run_windowed(other, inst, w, s),
                    Err(e) => Err(e.clone()),
                },
            };
            (name.clone(), res)
        })
        .collect();
    let mut report = Report::new();
    let mut ill_conditioned = false;
    for (name, res) in results {
        match res {
            Ok(r) => report.extend(r),
            Err(e) => {
                ill_conditioned |= matches!(e, Error::IllConditioned { .. });
                report.claim(&name, "suite-error", false).with_note(e.to_string());
            }
        }
    }
    Outcome { report, ill_conditioned }
}

fn run_windowed(name: &str, inst: &Instance, w: &Window, s: &Settings) -> Result<Report> {
    match name {
        "tensor-powers" => tensor_powers(inst, w, s),
        "creation-identities" => Ok(verify_creation_identities(w, s.samples, s.seed, s.tol)),
        "covariance" => Ok(verify_covariance(w, s.samples, s.seed, s.tol)),
        "pi-representation" => {
            let mut r = verify_representation(w, s.samples, s.seed, s.tol);
            r.extend(verify_injectivity(w, s.tol).0);
            Ok(r)
        }
        "compact-generation" => compact_generation(w, s),
        "sigma" => Ok(verify_sigma(w, s.samples, s.seed, s.tol)),
        "fourier" => Ok(fourier(inst, s)),
        "spectral" => verify_spectral(w, s.samples.clamp(1, 3), s.seed, s.quadrature, s.tol),
        "a-alpha-picture" => {
            let alpha = inst
                .automorphism
                .as_ref()
                .ok_or_else(|| Error::NotAAlpha("the instance does not name an automorphism".into()))?;
            Ok(AAlphaPicture::new(w, alpha)?.check(w, s.samples.min(10), s.seed, s.tol))
        }
        other => unreachable!("unknown suite {other}"),
    }
}

/// Rank of `τ(<e_p ⊗ f_q, e_p' ⊗ f_q'>_R)` on the algebraic tensor product, from the
/// defining formula `<x ⊗ y, x' ⊗ y'>_R = <y, <x,x'>_R y'>_R`.
pub fn gram_rank(x: &Bimodule, y: &Bimodule) -> usize {
    let alg = x.algebra();
    let (dx, dy) = (x.dim(), y.dim());
    let e: Vec<_> = (0..dx).map(|p| x.basis_elem(p)).collect();
    let f: Vec<_> = (0..dy).map(|q| y.basis_elem(q)).collect();
    let g = CMat::from_fn(dx * dy, dx * dy, |r, c| {
        let (p, q, p2, q2) = (r / dy, r % dy, c / dy, c % dy);
        let inner = y.act_left(&x.ip_right(&e[p], &e[p2]), &f[q2]);
        alg.trace(&y.ip_right(&f[q], &inner))
    });
    rank(&g, 1e-8)
}

fn worst_axiom_violation(m: &Bimodule, tol: f64) -> f64 {
    m.check_axioms(tol).entries.iter().map(|e| e.violation).fold(0.0, f64::max)
}

fn tensor_powers(inst: &Instance, w: &Window, s: &Settings) -> Result<Report> {
    let suite = "tensor-powers";
    let r = w.radius();
    let mut rep = Report::new();
    let mut dim_gap = 0usize;
    for n in 2..=r {
        for (deg, head, tail) in [(n, w.base(), w.component(n - 1)), (-n, w.dual_base(), w.component(1 - n))] {
            dim_gap = dim_gap.max(w.dim(deg).abs_diff(gram_rank(head, tail)));
        }
    }
    rep.check(suite, "tensor-dim", dim_gap as f64, 0.0).with_note(format!("dims {:?}", w.dims()));
    if inst.automorphism.is_some() {
        let d = w.algebra().dim();
        let gap = w.degrees().map(|n| w.dim(n).abs_diff(d)).max().unwrap_or(0);
        rep.check(suite, "tensor-dim-aalpha", gap as f64, 0.0);
    }
    let comps = w.degrees().map(|n| worst_axiom_violation(w.component(n), s.tol)).fold(0.0, f64::max);
    rep.check(suite, "component-axioms", comps, s.tol);
    let x = &inst.module;
    rep.check(suite, "dual-involution", x.dual()?.dual()?.structure_distance(x), s.tol);
    Ok(rep)
}

fn compact_generation(w: &Window, s: &Settings) -> Result<Report> {
    let suite = "compact-generation";
    let x = w.base();
    let alg = w.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut rep = Report::new();
    for (side, id) in [(Side::Left, "full-left"), (Side::Right, "full-right")] {
        let k = x.inner_product_span_rank(side, 1e-9);
        rep.claim(suite, id, k == alg.dim()).with_note(format!("inner products span {k} of {} dimensions", alg.dim()));
    }

    let mut worst: f64 = 0.0;
    let mut obstruction = None;
    'outer: for m in -1..=1 {
        for l in -1..=1 {
            for _ in 0..s.samples.clamp(1, 5) {
                let u = w.component(m).random_elem(&mut rng);
                let v = w.component(l).random_elem(&mut rng);
                match generate_compacts(w, &u, m, &v, l) {
                    Ok(approx) => worst = worst.max(approx.residual),
                    Err(Error::NotFull(msg)) => {
                        obstruction = Some(msg);
                        break 'outer;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    match obstruction {
        Some(msg) => {
            rep.claim(suite, "theta-generation", false).with_note(format!("fullness obstruction: {msg}"));
        }
        None => {
            rep.check(suite, "theta-generation", worst, s.tol);
        }
    }

    let mut base: f64 = 0.0;
    for _ in 0..s.samples.clamp(1, 10) {
        let a = alg.random(&mut rng);
        let b = alg.random(&mut rng);
        let el = |z: &crate::algebra::AlgElem| crate::bimodule::BimElem::new(alg.coords(z));
        let th = theta(w, &GradedVec::single(w, 0, &el(&a))?, &GradedVec::single(w, 0, &el(&b))?);
        base = base.max(th.max_diff(&pi0(w, &SeqA::delta(&a * &b.adjoint(), 0))?));
    }
    rep.check(suite, "theta-base", base, s.tol);

    let mut creation: f64 = 0.0;
    for n in -w.radius()..w.radius() {
        let xr = x.random_elem(&mut rng);
        creation = creation.max(creation_compact_residual(w, &xr, n)?);
    }
    rep.check(suite, "creation-compact", creation, s.tol);
    Ok(rep)
}

/// Keeps one entry per check id: the worst violation, failing if any run failed.
pub fn merge_worst(reports: Vec<Report>) -> Report {
    let mut out = Report::new();
    for r in reports {
        for e in r.entries {
            match out.entries.iter_mut().find(|o| o.suite == e.suite && o.check_id == e.check_id) {
                Some(o) => {
                    if e.violation > o.violation || e.violation.is_nan() {
                        o.violation = e.violation;
                        if !e.note.is_empty() {
                            o.note = e.note.clone();
                        }
                    }
                    o.pass &= e.pass;
                }
                None => out.entries.push(e),
            }
        }
    }
    out
}

fn fourier(inst: &Instance, s: &Settings) -> Report {
    let x = &inst.module;
    let alg = &inst.algebra;
    let reports = (0..s.samples.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            rng.set_stream(i as u64);
            let f = LoopX::random(x, -3..=3, &mut rng);
            let g = LoopX::random(x, -2..=2, &mut rng);
            let phi = LoopA::random(alg, -2..=2, &mut rng);
            y_structure_check(x, &f, &g, &phi, s.tol)
        })
        .collect();
    merge_worst(reports)
}
