//! Randomized verification of the creation-operator identities on a window.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linalg::{max_abs_diff, op_norm, vec_max_abs_diff};
use crate::report::Report;

use super::Window;

const IDS: [&str; 8] = ["tn1-left", "tn1-right", "tn2-left", "tn2-right", "creation-norm", "creation-adjoint", "negn", "negnstar"];

fn sample(w: &Window, rng: &mut ChaCha8Rng) -> [f64; 8] {
    let x1 = w.base();
    let alg = w.algebra();
    let a = alg.random(rng);
    let x = x1.random_elem(rng);
    let y = x1.random_elem(rng);
    let ax = x1.act_left(&a, &x);
    let xa = x1.act_right(&x, &a);
    let ipl = x1.ip_left(&x, &y);
    let ipr = x1.ip_right(&x, &y);
    let nx = x1.norm(&x);
    let mut v = [0.0f64; 8];
    let t = |z, n| w.creation(z, n).expect("degree in window");
    let l = |b, n| w.left_action_op(b, n).expect("degree in window");
    for n in -w.radius()..w.radius() {
        let tx = t(&x, n);
        let ty = t(&y, n);
        v[0] = v[0].max(max_abs_diff(&t(&ax, n), &(l(&a, n + 1) * &tx)));
        v[1] = v[1].max(max_abs_diff(&t(&xa, n), &(&tx * l(&a, n))));
        v[2] = v[2].max(max_abs_diff(&(&tx * ty.adjoint()), &l(&ipl, n + 1)));
        v[3] = v[3].max(max_abs_diff(&(tx.adjoint() * &ty), &l(&ipr, n)));
        v[4] = v[4].max((op_norm(&tx) - nx).max(0.0));
        if n >= 0 {
            // T_x*(y ⊗ z) = <x,y>_R z
            let z = crate::bimodule::BimElem::random(w.dim(n), rng);
            let yz = w.tensor_up(&y, &z, n).expect("degree in window");
            let lhs = tx.adjoint() * &yz.coords;
            let rhs = l(&ipr, n) * &z.coords;
            v[5] = v[5].max(vec_max_abs_diff(&lhs, &rhs));
        } else {
            let direct = w.creation_negative_direct(&x, n).expect("negative degree");
            v[6] = v[6].max(max_abs_diff(&tx, &direct));
            let direct_star = w.creation_adjoint_negative_direct(&x, n).expect("negative degree");
            v[7] = v[7].max(max_abs_diff(&tx.adjoint(), &direct_star));
        }
    }
    v
}

/// Checks `T^n_{ax} = L^{n+1}_a T^n_x`, `T^n_{xa} = T^n_x L^n_a`, both halves of
/// the inner-product identities, the norm bound, and the negative-degree
/// formulas over every degree in `[-N, N-1]` for `samples` random draws.
pub fn verify_creation_identities(w: &Window, samples: usize, seed: u64, tol: f64) -> Report {
    let worst = (0..samples.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            sample(w, &mut rng)
        })
        .reduce(|| [0.0; 8], |a, b| std::array::from_fn(|k| a[k].max(b[k])));
    let mut r = Report::new();
    for (id, v) in IDS.iter().zip(worst) {
        r.check("creation-identities", id, v, tol);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{matrix, scalar, swap};
    use crate::linalg::c;

    #[test]
    fn scalar_is_exact() {
        let w = Window::build(&scalar().module, 3).unwrap();
        let r = verify_creation_identities(&w, 10, 1, 1e-12);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn swap_and_matrix_pass() {
        for b in [swap(), matrix()] {
            let w = Window::build(&b.module, 3).unwrap();
            let r = verify_creation_identities(&w, 50, 2, 1e-10);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn corrupted_right_action_is_caught() {
        let bad = swap().module.with_scaled_right_action(c(2.0, 0.0));
        let w = Window::build_unchecked(&bad, 3).unwrap();
        let r = verify_creation_identities(&w, 5, 3, 1e-10);
        assert!(!r.get("tn2-right").unwrap().pass, "{r}");
    }
}
