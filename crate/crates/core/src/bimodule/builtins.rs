//! Named example bimodules.

use crate::algebra::{Algebra, Automorphism};
use crate::linalg::{c, CMat, CVec};

use super::Bimodule;

#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: &'static str,
    pub algebra: Algebra,
    pub module: Bimodule,
    /// Set when the module is `A_α` for this automorphism.
    pub automorphism: Option<Automorphism>,
}

impl Builtin {
    pub fn by_name(name: &str) -> Option<Builtin> {
        match name {
            "scalar" => Some(scalar()),
            "swap" => Some(swap()),
            "matrix" => Some(matrix()),
            "half" => Some(half()),
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 4] = ["scalar", "swap", "matrix", "half"];
}

fn a_alpha(name: &'static str, algebra: Algebra, alpha: Automorphism) -> Builtin {
    let module = Bimodule::from_automorphism(&algebra, &alpha);
    Builtin { name, algebra, module, automorphism: Some(alpha) }
}

/// `X = A = ℂ` with the obvious structure.
pub fn scalar() -> Builtin {
    let alg = Algebra::scalars();
    let id = Automorphism::identity(&alg);
    a_alpha("scalar", alg, id)
}

/// `A_α` over `ℂ⊕ℂ` with `α` swapping the summands.
pub fn swap() -> Builtin {
    let alg = Algebra::new(vec![1, 1]).unwrap();
    let one = CMat::identity(1, 1);
    let alpha = Automorphism::new(&alg, vec![1, 0], vec![one.clone(), one]).unwrap();
    a_alpha("swap", alg, alpha)
}

/// `A_α` over `M_2(ℂ)` with `α = Ad diag(1, i)`.
pub fn matrix() -> Builtin {
    let alg = Algebra::new(vec![2]).unwrap();
    let u = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]));
    let alpha = Automorphism::inner(&alg, u).unwrap();
    a_alpha("matrix", alg, alpha)
}

/// `X = ℂ` over `ℂ⊕ℂ` with `a·x = a₁x`, `x·a = xa₂`, `<x,y>_L = (xȳ,0)`, `<x,y>_R = (0,x̄y)`.
pub fn half() -> Builtin {
    let alg = Algebra::new(vec![1, 1]).unwrap();
    let unit = |v: f64| CMat::from_element(1, 1, c(v, 0.0));
    let module = Bimodule::from_parts(
        alg.clone(),
        1,
        vec![unit(1.0), unit(0.0)],
        vec![unit(0.0), unit(1.0)],
        vec![unit(1.0), unit(0.0)],
        vec![unit(0.0), unit(1.0)],
    )
    .unwrap();
    Builtin { name: "half", algebra: alg, module, automorphism: None }
}
