//! Desk-scale acceptance run on the four builtin instances with N = 3 and a fixed seed.
//! Prints one PASS/FAIL line per criterion; run with `--nocapture` to see them.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fockdual::bimodule::{half, matrix, scalar, swap, Builtin};
use fockdual::circle::{iso_a, iso_x, iso_x_quadrature, loop_norm, verify_spectral, y_structure_check, LoopA, LoopX};
use fockdual::crossed::{
    generate_compacts, injectivity, pi0, verify_covariance, verify_representation, verify_sigma, AAlphaPicture, SeqA,
    SeqX,
};
use fockdual::fock::verify_creation_identities;
use fockdual::linalg::c;
use fockdual::suites::gram_rank;
use fockdual::{BimElem, Error, Report, Window};

const N: usize = 3;
const SEED: u64 = 20240601;

fn all() -> [Builtin; 4] {
    [scalar(), swap(), matrix(), half()]
}

fn full() -> [Builtin; 2] {
    [swap(), matrix()]
}

fn window(b: &Builtin) -> Window {
    Window::build(&b.module, N).expect("builtin windows build")
}

fn worst(r: &Report, ids: &[&str]) -> f64 {
    r.entries
        .iter()
        .filter(|e| ids.is_empty() || ids.contains(&e.check_id.as_str()))
        .map(|e| e.violation)
        .fold(0.0, f64::max)
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(v: f64, tol: f64) -> Outcome {
    Outcome { pass: v.is_finite() && v <= tol, detail: format!("worst violation {v:.2e}, tolerance {tol:.0e}") }
}

fn axioms() -> Outcome {
    let v = all().iter().map(|b| worst(&b.module.check_axioms(1e-10), &[])).fold(0.0, f64::max);
    let mutant = swap().module.with_scaled_left_inner_product(c(2.0, 0.0)).check_axioms(1e-10);
    let caught = !mutant.get("compatibility").unwrap().pass;
    let mut o = within(v, 1e-10);
    o.pass &= caught;
    o.detail += &format!("; mutant fails compatibility: {caught}");
    o
}

fn creation() -> Outcome {
    let v = all()
        .iter()
        .map(|b| worst(&verify_creation_identities(&window(b), 100, SEED, 1e-10), &[]))
        .fold(0.0, f64::max);
    within(v, 1e-10)
}

fn covariance() -> Outcome {
    let v = all().iter().map(|b| worst(&verify_covariance(&window(b), 50, SEED, 1e-12), &[])).fold(0.0, f64::max);
    within(v, 1e-12)
}

fn representation() -> Outcome {
    let (mut ids, mut adj) = (0.0f64, 0.0f64);
    for b in all() {
        let r = verify_representation(&window(&b), 50, SEED, 1e-10);
        ids = ids.max(worst(&r, &[]));
        adj = adj.max(worst(&r, &["pi-adjoint"]));
    }
    let pass = ids <= 1e-10 && adj <= 1e-12;
    Outcome { pass, detail: format!("identities {ids:.2e} (tol 1e-10), adjoint formula {adj:.2e} (tol 1e-12)") }
}

fn dichotomy() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for b in full() {
        let inj = injectivity(&window(&b), 1e-9);
        let ok = inj.faithful_left && inj.faithful_right && inj.kernel_trivial();
        pass &= ok;
        detail.push(format!("{}: faithful and injective {ok}", b.name));
    }
    let w = window(&half());
    let inj = injectivity(&w, 1e-9);
    let witness_ok = inj.witness.as_ref().is_some_and(|phi| {
        let interior = phi.terms.keys().all(|n| n.abs() < N as i32);
        let nonzero = phi.terms.values().any(|a| a.norm() > 0.5);
        let killed = pi0(&w, phi).unwrap().max_abs() < 1e-12;
        interior && nonzero && killed
    });
    let ok = !(inj.faithful_left && inj.faithful_right) && witness_ok;
    pass &= ok;
    detail.push(format!("half: non-faithful with interior kernel witness {ok}"));
    Outcome { pass, detail: detail.join("; ") }
}

fn compacts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut residual: f64 = 0.0;
    for b in full() {
        let w = window(&b);
        for m in -1..=1 {
            for l in -1..=1 {
                let (cm, cl) = (w.component(m), w.component(l));
                let mut pairs: Vec<(BimElem, BimElem)> = Vec::new();
                for p in 0..cm.dim() {
                    for q in 0..cl.dim() {
                        pairs.push((cm.basis_elem(p), cl.basis_elem(q)));
                    }
                }
                pairs.extend((0..5).map(|_| (cm.random_elem(&mut rng), cl.random_elem(&mut rng))));
                for (u, v) in pairs {
                    residual = residual.max(generate_compacts(&w, &u, m, &v, l).unwrap().residual);
                }
            }
        }
    }
    let w = window(&half());
    let u = w.component(0).random_elem(&mut rng);
    let obstruction = matches!(generate_compacts(&w, &u, 0, &u, 0), Err(Error::NotFull(_)));
    let mut o = within(residual, 1e-8);
    o.pass &= obstruction;
    o.detail += &format!("; half reports fullness obstruction: {obstruction}");
    o
}

fn sigma() -> Outcome {
    let (mut relabel, mut symbolic) = (0.0f64, true);
    for b in all() {
        let r = verify_sigma(&window(&b), 100, SEED, 1e-12);
        relabel = relabel.max(worst(&r, &["sigma-relabel"]));
        symbolic &= ["sigma-multiplicative", "sigma-star", "sigma-generators"].iter().all(|id| r.get(id).unwrap().pass);
    }
    let mut o = within(relabel, 1e-12);
    o.pass &= symbolic;
    o.detail += &format!("; multiplicative and *-preserving: {symbolic}");
    o
}

fn fourier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut mono, mut inter, mut iso) = (0.0f64, 0.0f64, 0.0f64);
    let intertwining = ["y-left-action", "y-right-action", "y-ip-left", "y-ip-right", "fourier-round-trip"];
    for b in all() {
        let x = &b.module;
        for k in -3..=3 {
            let v = x.random_elem(&mut rng);
            let f = LoopX::monomial(v.clone(), k);
            mono = mono.max(iso_x(&f).max_diff(&SeqX::delta(v.clone(), 1 - k)));
            mono = mono.max(iso_x_quadrature(&f, 7).unwrap().max_diff(&SeqX::delta(v, 1 - k)));
            let a = b.algebra.random(&mut rng);
            mono = mono.max(iso_a(&LoopA::monomial(a.clone(), -k)).max_diff(&SeqA::delta(a, k)));
        }
        for _ in 0..50 {
            let f = LoopX::random(x, -3..=3, &mut rng);
            let g = LoopX::random(x, -2..=2, &mut rng);
            let phi = LoopA::random(&b.algebra, -2..=2, &mut rng);
            let r = y_structure_check(x, &f, &g, &phi, 1e-12);
            inter = inter.max(worst(&r, &intertwining));
            let sup = iso_x(&f).terms.values().map(|v| x.norm(v)).fold(0.0, f64::max);
            iso = iso.max((loop_norm(x, &f) - sup).abs());
        }
    }
    let pass = mono == 0.0 || mono <= 1e-14;
    Outcome {
        pass: pass && inter <= 1e-12 && iso <= 1e-10,
        detail: format!("monomials {mono:.2e} (exact), intertwining {inter:.2e} (tol 1e-12), isometry {iso:.2e} (tol 1e-10)"),
    }
}

fn spectral() -> Outcome {
    let v = all()
        .iter()
        .map(|b| worst(&verify_spectral(&window(b), 2, SEED, 14, 1e-12).unwrap(), &[]))
        .fold(0.0, f64::max);
    within(v, 1e-12)
}

fn a_alpha() -> Outcome {
    let v = full()
        .iter()
        .map(|b| {
            let w = window(b);
            let pic = AAlphaPicture::new(&w, b.automorphism.as_ref().unwrap()).unwrap();
            worst(&pic.check(&w, 20, SEED, 1e-12), &[])
        })
        .fold(0.0, f64::max);
    within(v, 1e-12)
}

fn dimensions() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for b in full() {
        let w = window(&b);
        let d = b.algebra.dim();
        let dims = w.dims();
        let mut oracle = vec![d; dims.len()];
        for n in 2..=N as i32 {
            oracle[(n + N as i32) as usize] = gram_rank(w.base(), w.component(n - 1));
            oracle[(N as i32 - n) as usize] = gram_rank(w.dual_base(), w.component(1 - n));
        }
        let ok = dims.iter().all(|&k| k == d) && oracle == dims;
        pass &= ok;
        detail.push(format!("{}: dims {dims:?}, Gram-rank {oracle:?}, dim A = {d}", b.name));
    }
    Outcome { pass, detail: detail.join("; ") }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [Criterion; 11] = [
        ("bimodule axioms and mutant", axioms),
        ("creation identities", creation),
        ("gauge covariance", covariance),
        ("pi is a representation", representation),
        ("injectivity dichotomy", dichotomy),
        ("compact generation", compacts),
        ("sigma shift", sigma),
        ("Fourier isomorphism", fourier),
        ("spectral projections", spectral),
        ("A_alpha picture", a_alpha),
        ("tensor-power dimensions", dimensions),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {:>2} {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("acceptance finished in {secs:.1}s");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
