//! Verification reports: one entry per checked identity or claim.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub suite: String,
    pub check_id: String,
    /// The identity being checked, written out as a formula.
    pub anchor: String,
    pub violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a measured violation; passes iff it is finite and within `tolerance`.
    pub fn check(&mut self, suite: &str, check_id: &str, violation: f64, tolerance: f64) -> &mut Entry {
        let pass = violation.is_finite() && violation <= tolerance;
        self.push(suite, check_id, violation, tolerance, pass)
    }

    /// Records a yes/no claim (violation 0 on success, 1 on failure).
    pub fn claim(&mut self, suite: &str, check_id: &str, holds: bool) -> &mut Entry {
        self.push(suite, check_id, if holds { 0.0 } else { 1.0 }, 0.0, holds)
    }

    fn push(&mut self, suite: &str, check_id: &str, violation: f64, tolerance: f64, pass: bool) -> &mut Entry {
        self.entries.push(Entry {
            suite: suite.to_string(),
            check_id: check_id.to_string(),
            anchor: anchor(check_id).to_string(),
            violation,
            tolerance,
            pass,
            note: String::new(),
        });
        self.entries.last_mut().unwrap()
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn get(&self, check_id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.check_id == check_id)
    }

    pub fn max_violation(&self, check_id: &str) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| e.check_id == check_id)
            .map(|e| e.violation)
            .reduce(f64::max)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.failures().map(|e| e.check_id.as_str()).collect()
    }
}

impl Entry {
    pub fn with_note(&mut self, note: impl Into<String>) -> &mut Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "[{}] {:<20} {:<28} violation={:.3e} tol={:.1e}  {}{}",
                if e.pass { "PASS" } else { "FAIL" },
                e.suite,
                e.check_id,
                e.violation,
                e.tolerance,
                e.anchor,
                if e.note.is_empty() { String::new() } else { format!("  ({})", e.note) }
            )?;
        }
        Ok(())
    }
}

/// Fixed table from check ids to the identity each one verifies.
pub const ANCHORS: &[(&str, &str)] = &[
    // bimodule axioms
    ("bimodule-law", "(ax)b = a(xb)"),
    ("left-module", "a(bx) = (ab)x, 1x = x"),
    ("right-module", "(xa)b = x(ab), x1 = x"),
    ("compatibility", "<x,y>_L z = x<y,z>_R"),
    ("left-linearity", "<ax,y>_L = a<x,y>_L, <x,y>_L* = <y,x>_L"),
    ("right-linearity", "<x,ya>_R = <x,y>_R a, <x,y>_R* = <y,x>_R"),
    ("positivity-left", "<x,x>_L >= 0"),
    ("positivity-right", "<x,x>_R >= 0"),
    ("definiteness-left", "<x,x>_L = 0 => x = 0"),
    ("definiteness-right", "<x,x>_R = 0 => x = 0"),
    // morphisms
    ("morphism-homomorphism", "phi_A(ab) = phi_A(a) phi_A(b), phi_A(a*) = phi_A(a)*"),
    ("morphism-left", "phi_X(ax) = phi_A(a) phi_X(x)"),
    ("morphism-right", "phi_X(xa) = phi_X(x) phi_A(a)"),
    ("morphism-ip-left", "<phi_X x, phi_X y>_L = phi_A(<x,y>_L)"),
    ("morphism-ip-right", "<phi_X x, phi_X y>_R = phi_A(<x,y>_R)"),
    ("morphism-norm", "||phi_X(x)|| <= ||x||, equality when phi_A injective"),
    // tensor powers and window
    ("tensor-dim", "dim X^(n) = rank of the right Gram form of X (x) X^(n-1)"),
    ("tensor-dim-aalpha", "dim (A_alpha)^(n) = dim A"),
    ("component-axioms", "every X^(n) is a Hilbert bimodule"),
    ("dual-involution", "dual(dual(X)) = X"),
    // creation identities
    ("tn1-left", "T^n_{ax} = L^{n+1}_a T^n_x"),
    ("tn1-right", "T^n_{xa} = T^n_x L^n_a"),
    ("tn2-left", "T^n_x (T^n_y)* = L^{n+1}_{<x,y>_L}"),
    ("tn2-right", "(T^n_x)* T^n_y = L^n_{<x,y>_R}"),
    ("creation-norm", "||T^n_x|| <= ||x||"),
    ("creation-adjoint", "(T_{x0})*(x (x) y) = <x0,x>_R y"),
    ("negn", "T^n_x(x1~ (x) w) = <x,x1>_L w for n < 0"),
    ("negnstar", "(T^n_x)*(w) = x~ (x) w for n < 0"),
    // gauge covariance
    ("gauge-group-law", "U_lambda U_mu = U_{lambda mu}"),
    ("covariance-A", "U_lambda Lambda_A(a) U_lambda* = Lambda_A(a)"),
    ("covariance-X", "U_lambda Lambda_X(x) U_lambda* = lambda Lambda_X(x)"),
    // representation pi
    ("lambda-tn1", "Lambda_A(a) Lambda_X(x) = Lambda_X(ax)"),
    ("lambda-tn2", "Lambda_X(x)* Lambda_X(y) = Lambda_A(<x,y>_R)"),
    ("pi-generators", "pi0(a delta_n) = L^n_a, pi1(x delta_{n+1}) = T^n_x"),
    ("pi-right-action", "pi1(f phi) = pi1(f) pi0(phi)"),
    ("pi-left-action", "pi1(phi f) = pi0(phi) pi1(f)"),
    ("pi-ip-right", "pi0(<f,g>_R) = pi1(f)* pi1(g)"),
    ("pi-ip-left", "pi0(<f,g>_L) = pi1(f) pi1(g)*"),
    ("pi-adjoint", "[(pi1 f)* xi](n) = (T^n_{f(n+1)})* xi(n+1)"),
    ("injectivity-dichotomy", "ker pi0 = 0 on the window iff both actions are faithful"),
    ("kernel-witness", "pi0(phi) = 0 for the exhibited phi != 0"),
    // compacts
    ("full-left", "span <X,X>_L = A"),
    ("full-right", "span <X,X>_R = A"),
    ("theta-generation", "theta_{u delta_m, v delta_l} lies in the image of pi"),
    ("theta-base", "theta_{a,b} = pi0(ab* delta_0)"),
    ("creation-compact", "T^n_x = sum_i theta_{x0 (x) u_i, v_i} with x0 sum <u_i,v_i>_L = x"),
    // sigma
    ("sigma-multiplicative", "sigma(w1 w2) = sigma(w1) sigma(w2)"),
    ("sigma-star", "sigma(w*) = sigma(w)*"),
    ("sigma-inverse", "sigma(sigma^-1(w)) = w"),
    ("sigma-relabel", "eval(sigma w) = degree-relabelled normal form of eval(w)"),
    ("sigma-isometric", "||eval(sigma w)|| = ||eval(w)||"),
    ("sigma-generators", "sigma(L^n_a) = L^{n-1}_a, sigma(T^n_x) = T^{n-1}_x"),
    // circle
    ("quadrature-exact", "int lambda^m dlambda = [m = 0]"),
    ("fourier-monomial-X", "J_Y(f_{x,k}) = x delta_{1-k}"),
    ("fourier-monomial-A", "I(lambda^{-n} a) = a delta_n"),
    ("fourier-round-trip", "I^{-1}(I(f)) = f"),
    ("y-left-action", "I(phi f)(n) = I(phi)(n) I(f)(n)"),
    ("y-right-action", "I(f phi)(n) = I(f)(n) I(phi)(n-1)"),
    ("y-ip-left", "J_A(<f,g>_L)(n) = <J_Y f(n), J_Y g(n)>_L"),
    ("y-ip-right", "J_A(<f,g>_R)(n) = <J_Y f(n+1), J_Y g(n+1)>_R"),
    ("y-isometry", "||f|| = sup_n ||J_Y f(n)||"),
    ("spectral-fixed-A", "P_0(Lambda_A(a)) = Lambda_A(a)"),
    ("spectral-fixed-X", "P_1(Lambda_X(x)) = Lambda_X(x), P_0(Lambda_X(x)) = 0"),
    ("spectral-degree", "P_m P_n = [m = n] P_n"),
    ("spectral-complete", "sum_n P_n(S) = S"),
    // A_alpha picture
    ("in-unitary", "I_n is a unitary of right Hilbert A-modules"),
    ("in1", "I_n(L^n_a c) = alpha^{-n}(a) I_n(c)"),
    ("in2", "I_{n+1}(T^n_x c) = alpha^{-(n+1)}(x) I_n(c)"),
    ("in-formula", "I_n(a1 (x) ... (x) an) = alpha^{-n}(a1) ... alpha^{-1}(an)"),
    ("conjugated-L", "I L^n_a I* = E_nn (x) alpha^{-n}(a)"),
    ("conjugated-T", "I T^n_x I* = E_{n+1,n} (x) alpha^{-(n+1)}(x)"),
    ("sigma-transport", "I sigma(.) I* = (Ad rho (x) alpha)(I . I*)"),
    // instance plumbing
    ("suite-error", "suite could not run"),
];

pub fn anchor(check_id: &str) -> &'static str {
    ANCHORS
        .iter()
        .find(|(id, _)| *id == check_id)
        .map(|(_, a)| *a)
        .unwrap_or("(unanchored)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_and_claim() {
        let mut r = Report::new();
        r.check("s", "tn1-left", 1e-12, 1e-10);
        r.claim("s", "full-left", false);
        assert!(!r.passed());
        assert_eq!(r.failed_ids(), vec!["full-left"]);
        assert_eq!(r.get("tn1-left").unwrap().anchor, "T^n_{ax} = L^{n+1}_a T^n_x");
    }

    #[test]
    fn nan_fails() {
        let mut r = Report::new();
        r.check("s", "tn1-left", f64::NAN, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn anchor_ids_are_unique() {
        let mut ids: Vec<_> = ANCHORS.iter().map(|(id, _)| *id).collect();
        ids.sort();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }
}
