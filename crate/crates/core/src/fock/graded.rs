//! Degree-indexed block operators and vectors on a [`Window`].

use std::collections::BTreeMap;

use crate::algebra::{random_c64, AlgElem};
use crate::bimodule::BimElem;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff, op_norm, vec_max_abs_diff, CMat, CVec, C64};

use super::Window;

#[derive(Debug, Clone, PartialEq)]
pub struct GradedVec {
    radius: i32,
    parts: Vec<CVec>,
}

impl GradedVec {
    pub fn zeros(w: &Window) -> Self {
        Self { radius: w.radius(), parts: w.dims().into_iter().map(CVec::zeros).collect() }
    }

    /// `v δ_n`.
    pub fn single(w: &Window, n: i32, v: &BimElem) -> Result<Self> {
        let mut out = Self::zeros(w);
        out.set(n, v.coords.clone())?;
        Ok(out)
    }

    pub fn random<R: rand::Rng + ?Sized>(w: &Window, rng: &mut R) -> Self {
        Self {
            radius: w.radius(),
            parts: w.dims().into_iter().map(|d| BimElem::random(d, rng).coords).collect(),
        }
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    pub fn get(&self, n: i32) -> &CVec {
        &self.parts[(n + self.radius) as usize]
    }

    pub fn set(&mut self, n: i32, v: CVec) -> Result<()> {
        if n.abs() > self.radius {
            return Err(Error::DegreeOutOfWindow { degree: n, radius: self.radius, what: "graded vector" });
        }
        let slot = &mut self.parts[(n + self.radius) as usize];
        if slot.len() != v.len() {
            return Err(Error::Dimension(format!("degree {n} has dimension {}, got {}", slot.len(), v.len())));
        }
        *slot = v;
        Ok(())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> {
        -self.radius..=self.radius
    }

    pub fn add(&self, other: &GradedVec) -> Self {
        Self { radius: self.radius, parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { radius: self.radius, parts: self.parts.iter().map(|a| a * s).collect() }
    }

    /// `<self, other> = Σ_n <self(n), other(n)>_R`.
    pub fn inner(&self, w: &Window, other: &GradedVec) -> AlgElem {
        let mut acc = w.algebra().zero();
        for n in self.degrees() {
            let c = w.component(n);
            acc = &acc + &c.ip_right(&BimElem::new(self.get(n).clone()), &BimElem::new(other.get(n).clone()));
        }
        acc
    }

    pub fn to_dense(&self) -> CVec {
        let total = self.parts.iter().map(|p| p.len()).sum();
        CVec::from_iterator(total, self.parts.iter().flat_map(|p| p.iter().cloned()))
    }

    pub fn max_diff(&self, other: &GradedVec) -> f64 {
        self.parts.iter().zip(&other.parts).map(|(a, b)| vec_max_abs_diff(a, b)).fold(0.0, f64::max)
    }

    /// Degrees carrying a nonzero component.
    pub fn support(&self) -> Vec<i32> {
        self.degrees().filter(|&n| self.get(n).iter().any(|z| z.norm() > 0.0)).collect()
    }
}

/// Block operator with blocks keyed by `(source degree, target degree)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOp {
    radius: i32,
    dims: Vec<usize>,
    blocks: BTreeMap<(i32, i32), CMat>,
    /// Set when a block was dropped because it would leave the window.
    pub edge: bool,
}

impl GradedOp {
    pub fn zero(w: &Window) -> Self {
        Self { radius: w.radius(), dims: w.dims(), blocks: BTreeMap::new(), edge: false }
    }

    /// Gaussian entries in every block between window degrees.
    pub fn random<R: rand::Rng + ?Sized>(w: &Window, rng: &mut R) -> Self {
        let mut op = Self::zero(w);
        for n in w.degrees() {
            for m in w.degrees() {
                let t = CMat::from_fn(w.dim(m), w.dim(n), |_, _| random_c64(rng));
                op.blocks.insert((n, m), t);
            }
        }
        op
    }

    pub fn identity(w: &Window) -> Self {
        let mut op = Self::zero(w);
        for n in w.degrees() {
            let d = w.dim(n);
            op.blocks.insert((n, n), CMat::identity(d, d));
        }
        op
    }

    /// `i_{n,m}(t)` for `t: X^{⊗n} → X^{⊗m}`.
    pub fn embed(w: &Window, n: i32, m: i32, t: CMat) -> Result<Self> {
        let mut op = Self::zero(w);
        op.insert(n, m, t)?;
        Ok(op)
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims[(n + self.radius) as usize]
    }

    fn check_degree(&self, n: i32) -> Result<()> {
        if n.abs() > self.radius {
            return Err(Error::DegreeOutOfWindow { degree: n, radius: self.radius, what: "graded operator" });
        }
        Ok(())
    }

    /// Adds `t` into block `(n, m)`.
    pub fn insert(&mut self, n: i32, m: i32, t: CMat) -> Result<()> {
        self.check_degree(n)?;
        self.check_degree(m)?;
        let shape = (self.dim(m), self.dim(n));
        if t.shape() != shape {
            return Err(Error::Dimension(format!("block {n}->{m} must be {shape:?}, got {:?}", t.shape())));
        }
        match self.blocks.get_mut(&(n, m)) {
            Some(b) => *b += t,
            None => {
                self.blocks.insert((n, m), t);
            }
        }
        Ok(())
    }

    pub fn block(&self, n: i32, m: i32) -> Option<&CMat> {
        self.blocks.get(&(n, m))
    }

    /// The `(n, m)` block, or zeros if absent.
    pub fn block_or_zero(&self, n: i32, m: i32) -> CMat {
        self.block(n, m).cloned().unwrap_or_else(|| CMat::zeros(self.dim(m), self.dim(n)))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(i32, i32), &CMat)> {
        self.blocks.iter()
    }

    pub fn add(&self, other: &GradedOp) -> GradedOp {
        let mut out = self.clone();
        for (&(n, m), b) in &other.blocks {
            out.insert(n, m, b.clone()).expect("compatible windows");
        }
        out.edge |= other.edge;
        out
    }

    pub fn sub(&self, other: &GradedOp) -> GradedOp {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> GradedOp {
        let mut out = self.clone();
        for b in out.blocks.values_mut() {
            *b *= s;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedOp) -> GradedOp {
        let mut out = GradedOp { radius: self.radius, dims: self.dims.clone(), blocks: BTreeMap::new(), edge: self.edge || other.edge };
        for (&(n, m), t) in &other.blocks {
            for (&(_, k), s) in self.blocks.range((m, i32::MIN)..=(m, i32::MAX)) {
                out.insert(n, k, s * t).expect("degrees already in window");
            }
        }
        out
    }

    pub fn adjoint(&self) -> GradedOp {
        GradedOp {
            radius: self.radius,
            dims: self.dims.clone(),
            blocks: self.blocks.iter().map(|(&(n, m), b)| ((m, n), b.adjoint())).collect(),
            edge: self.edge,
        }
    }

    fn offset(&self, n: i32) -> usize {
        (-self.radius..n).map(|k| self.dim(k)).sum()
    }

    pub fn to_dense(&self) -> CMat {
        let total: usize = self.dims.iter().sum();
        let mut out = CMat::zeros(total, total);
        for (&(n, m), b) in &self.blocks {
            let (r, c) = (self.offset(m), self.offset(n));
            out.view_mut((r, c), b.shape()).copy_from(b);
        }
        out
    }

    /// Operator norm on the window (orthonormal bases make this the module norm).
    pub fn norm(&self) -> f64 {
        op_norm(&self.to_dense())
    }

    pub fn apply(&self, v: &GradedVec) -> GradedVec {
        let mut parts: Vec<CVec> = self.dims.iter().map(|&d| CVec::zeros(d)).collect();
        for (&(n, m), b) in &self.blocks {
            parts[(m + self.radius) as usize] += b * v.get(n);
        }
        GradedVec { radius: self.radius, parts }
    }

    /// Keeps only blocks whose source and target both lie in `[lo, hi]`.
    pub fn restrict(&self, lo: i32, hi: i32) -> GradedOp {
        let mut out = self.clone();
        out.blocks.retain(|&(n, m), _| (lo..=hi).contains(&n) && (lo..=hi).contains(&m));
        out
    }

    /// Blocks of degree `d`, i.e. those mapping `n` to `n + d`.
    pub fn degree_part(&self, d: i32) -> GradedOp {
        let mut out = self.clone();
        out.blocks.retain(|&(n, m), _| m - n == d);
        out
    }

    /// The single degree carried by all blocks with an entry above `tol`, if there is one.
    pub fn pure_degree(&self, tol: f64) -> Option<i32> {
        let mut degs = self.blocks.iter().filter(|(_, b)| max_abs(b) > tol).map(|(&(n, m), _)| m - n);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Largest entrywise difference over the union of blocks.
    pub fn max_diff(&self, other: &GradedOp) -> f64 {
        let mut keys: Vec<(i32, i32)> = self.blocks.keys().chain(other.blocks.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|(n, m)| max_abs_diff(&self.block_or_zero(n, m), &other.block_or_zero(n, m)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.values().map(max_abs).fold(0.0, f64::max)
    }
}

/// `θ_{u,v}: z ↦ u<v,z>`.
pub fn theta(w: &Window, u: &GradedVec, v: &GradedVec) -> GradedOp {
    let mut op = GradedOp::zero(w);
    let (su, sv) = (u.support(), v.support());
    for &n in &sv {
        let src = w.component(n);
        let vn = BimElem::new(v.get(n).clone());
        let coeffs: Vec<AlgElem> = (0..src.dim()).map(|q| src.ip_right(&vn, &src.basis_elem(q))).collect();
        for &m in &su {
            let tgt = w.component(m);
            let mut b = CMat::zeros(tgt.dim(), src.dim());
            for (q, a) in coeffs.iter().enumerate() {
                b.set_column(q, &(tgt.right_op(a) * u.get(m)));
            }
            op.insert(n, m, b).expect("degrees in window");
        }
    }
    op
}
