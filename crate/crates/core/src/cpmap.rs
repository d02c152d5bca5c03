//! Normal completely positive maps between finite-dimensional algebras in
//! the Heisenberg direction, stored as Kraus families per block pair.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::report::{LawCheck, Report};
use crate::rng::Rng;
use crate::vnalg::{AlgElement, FdAlgebra};
use crate::TOL_REL;

/// `φ(a)_j = Σ_i Σ_V V* a_i V` with `V` of shape `n_i × m_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CpMap {
    pub source: FdAlgebra,
    pub target: FdAlgebra,
    kraus: Vec<Vec<CMatrix>>,
}

/// How `CpMap::random` normalizes its Ginibre draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Normalization {
    None,
    Unital,
    /// Unital, then scaled so that `φ(1) = s·1`.
    Scaled(f64),
}

impl CpMap {
    pub fn new(source: FdAlgebra, target: FdAlgebra, kraus: Vec<Vec<CMatrix>>) -> Result<Self> {
        let nt = target.n_blocks();
        if kraus.len() != source.n_blocks() * nt {
            return Err(Error::ShapeMismatch("one Kraus family per (source, target) block pair"));
        }
        for (idx, fam) in kraus.iter().enumerate() {
            let (n, m) = (source.blocks[idx / nt], target.blocks[idx % nt]);
            if fam.iter().any(|v| v.rows != n || v.cols != m) {
                return Err(Error::ShapeMismatch("Kraus operator of block pair (i,j) must be n_i x m_j"));
            }
        }
        Ok(CpMap { source, target, kraus })
    }

    pub fn zero(source: &FdAlgebra, target: &FdAlgebra) -> Self {
        let kraus = vec![Vec::new(); source.n_blocks() * target.n_blocks()];
        CpMap { source: source.clone(), target: target.clone(), kraus }
    }

    pub fn identity(alg: &FdAlgebra) -> Self {
        let mut f = CpMap::zero(alg, alg);
        for (i, &n) in alg.blocks.iter().enumerate() {
            f.kraus_mut(i, i).push(CMatrix::identity(n));
        }
        f
    }

    /// `a ↦ V* a V` from `M_n` to `M_m` for `V` of shape `n × m`.
    pub fn ad(v: &CMatrix) -> Self {
        let mut f = CpMap::zero(&FdAlgebra::matrix(v.rows), &FdAlgebra::matrix(v.cols));
        f.kraus_mut(0, 0).push(v.clone());
        f
    }

    /// Single block pair map with the given Kraus family.
    pub fn between_factors(n: usize, m: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        CpMap::new(FdAlgebra::matrix(n), FdAlgebra::matrix(m), vec![kraus])
    }

    pub fn kraus(&self, i: usize, j: usize) -> &[CMatrix] {
        &self.kraus[i * self.target.n_blocks() + j]
    }

    pub fn kraus_mut(&mut self, i: usize, j: usize) -> &mut Vec<CMatrix> {
        let nt = self.target.n_blocks();
        &mut self.kraus[i * nt + j]
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, a: &AlgElement) -> Result<AlgElement> {
        if a.algebra != self.source {
            return Err(Error::ShapeMismatch("argument is not in the source algebra"));
        }
        Ok(AlgElement::from_fn(&self.target, |j, m| {
            let mut out = CMatrix::zeros(m, m);
            for (i, ai) in a.mats.iter().enumerate() {
                for v in self.kraus(i, j) {
                    out.add_assign(&ai.congruence(v));
                }
            }
            out
        }))
    }

    /// `φ(1)`.
    pub fn unit_image(&self) -> AlgElement {
        AlgElement::from_fn(&self.target, |j, m| {
            let mut out = CMatrix::zeros(m, m);
            for i in 0..self.source.n_blocks() {
                for v in self.kraus(i, j) {
                    out.add_assign(&v.adj_mul(v));
                }
            }
            out
        })
    }

    /// Schrödinger-picture dual `ω ↦ Σ V ω V*` (trace duality).
    pub fn predual_apply(&self, w: &AlgElement) -> Result<AlgElement> {
        if w.algebra != self.target {
            return Err(Error::ShapeMismatch("argument is not in the target algebra"));
        }
        Ok(AlgElement::from_fn(&self.source, |i, n| {
            let mut out = CMatrix::zeros(n, n);
            for (j, wj) in w.mats.iter().enumerate() {
                for v in self.kraus(i, j) {
                    out.add_assign(&v.mul(wj).mul(&v.adjoint()));
                }
            }
            out
        }))
    }

    /// Images of all source matrix units, in `source.matrix_units()` order.
    pub fn unit_images(&self) -> Vec<AlgElement> {
        self.source
            .matrix_units()
            .into_iter()
            .map(|(i, k, l)| self.apply(&AlgElement::matrix_unit(&self.source, i, k, l)).unwrap())
            .collect()
    }

    /// Max deviation on source matrix units; maps must share source and target.
    pub fn dist(&self, other: &CpMap) -> f64 {
        assert_eq!((&self.source, &self.target), (&other.source, &other.target), "maps must share types");
        self.unit_images().iter().zip(other.unit_images()).fold(0.0, |m, (a, b)| m.max(a.dist(&b)))
    }

    /// Like `dist`, but on `probes` random elements once the source is too
    /// large for an exhaustive matrix-unit sweep.
    pub fn dist_probe(&self, other: &CpMap, rng: &mut Rng, probes: usize) -> f64 {
        if self.source.dim() <= 1024 {
            return self.dist(other);
        }
        (0..probes).fold(0.0, |m, _| {
            let x = AlgElement::random(&self.source, rng);
            let scale = x.max_abs().max(1.0);
            m.max(self.apply(&x).unwrap().dist(&other.apply(&x).unwrap()) / scale)
        })
    }

    /// Matrix of the linear map in matrix-unit coordinates:
    /// `dim(target) × dim(source)`.
    pub fn superop(&self) -> CMatrix {
        let cols: Vec<Vec<C64>> = self.unit_images().into_iter().map(flatten).collect();
        CMatrix::from_columns(self.target.dim(), &cols)
    }

    /// `C = Σ_{k,l} E_kl ⊗ φ_ij(E_kl)`.
    pub fn choi(&self, i: usize, j: usize) -> CMatrix {
        let (n, m) = (self.source.blocks[i], self.target.blocks[j]);
        let mut c = CMatrix::zeros(n * m, n * m);
        for v in self.kraus(i, j) {
            let w: Vec<C64> = v.data().iter().map(|z| z.conj()).collect();
            let wm = CMatrix::column(&w);
            c.add_assign(&wm.mul(&wm.adjoint()));
        }
        c
    }

    /// Choi matrices in `(i, j)` row-major order.
    pub fn choi_table(&self) -> Vec<CMatrix> {
        let nt = self.target.n_blocks();
        (0..self.kraus.len()).map(|idx| self.choi(idx / nt, idx % nt)).collect()
    }

    pub fn from_choi(source: &FdAlgebra, target: &FdAlgebra, table: &[CMatrix], tol: f64) -> Result<Self> {
        let nt = target.n_blocks();
        if table.len() != source.n_blocks() * nt {
            return Err(Error::ShapeMismatch("one Choi matrix per block pair"));
        }
        let eigs = table.iter().map(|c| linalg::psd_eig(c, tol)).collect::<Result<Vec<_>>>()?;
        let top = eigs.iter().fold(0.0f64, |m, e| m.max(e.max_value()));
        let t = if top < 1e-12 { 1e-12 } else { TOL_REL * top };
        let kraus = eigs
            .iter()
            .enumerate()
            .map(|(idx, e)| kraus_from_eig(e, source.blocks[idx / nt], target.blocks[idx % nt], t))
            .collect();
        Ok(CpMap { source: source.clone(), target: target.clone(), kraus })
    }

    /// The map with Choi matrices of a linear map given by its action;
    /// rejects non-CP `f`.
    pub fn from_linear(
        source: &FdAlgebra,
        target: &FdAlgebra,
        f: impl Fn(&AlgElement) -> AlgElement,
        tol: f64,
    ) -> Result<Self> {
        let nt = target.n_blocks();
        let mut table = Vec::with_capacity(source.n_blocks() * nt);
        let images: Vec<Vec<AlgElement>> = source
            .blocks
            .iter()
            .enumerate()
            .map(|(i, &n)| (0..n * n).map(|kl| f(&AlgElement::matrix_unit(source, i, kl / n, kl % n))).collect())
            .collect();
        for (i, &n) in source.blocks.iter().enumerate() {
            for (j, &m) in target.blocks.iter().enumerate() {
                let mut c = CMatrix::zeros(n * m, n * m);
                for k in 0..n {
                    for l in 0..n {
                        let img = &images[i][k * n + l].mats[j];
                        c.add_assign(&CMatrix::unit(n, k, l).kron(img));
                    }
                }
                table.push(c);
            }
        }
        CpMap::from_choi(source, target, &table, tol)
    }

    /// Canonical Kraus form via the Choi matrices.
    pub fn canonical(&self, tol: f64) -> Self {
        CpMap::from_choi(&self.source, &self.target, &self.choi_table(), tol).expect("Kraus maps have PSD Choi")
    }

    pub fn scale(&self, s: f64) -> Self {
        let r = Float::sqrt(s);
        let kraus = self.kraus.iter().map(|fam| fam.iter().map(|v| v.scale_re(r)).collect()).collect();
        CpMap { source: self.source.clone(), target: self.target.clone(), kraus }
    }

    /// Pointwise sum without a summability check.
    pub fn add(&self, other: &CpMap) -> Result<Self> {
        if (&self.source, &self.target) != (&other.source, &other.target) {
            return Err(Error::ShapeMismatch("summands must share source and target"));
        }
        let mut out = self.clone();
        for (a, b) in out.kraus.iter_mut().zip(&other.kraus) {
            a.extend(b.iter().cloned());
        }
        Ok(out)
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unit_image().dist(&AlgElement::one(&self.target)) <= tol
    }

    pub fn is_subunital(&self, tol: f64) -> bool {
        self.unit_image().le(&AlgElement::one(&self.target), tol)
    }

    /// Unital, *-preserving, and multiplicative on matrix units.
    pub fn is_nmiu(&self, tol: f64) -> bool {
        if !self.is_unital(tol) {
            return false;
        }
        let units = self.unit_images();
        let mut off = 0;
        let mut diag = Vec::new();
        for &n in &self.source.blocks {
            let e = |k: usize, l: usize| &units[off + k * n + l];
            for k in 0..n {
                for l in 0..n {
                    if e(k, l).adjoint().dist(e(l, k)) > tol {
                        return false;
                    }
                    for m in 0..n {
                        if e(k, l).mul(e(l, m)).dist(e(k, m)) > tol {
                            return false;
                        }
                    }
                }
                diag.push(e(k, k).clone());
            }
            off += n * n;
        }
        for (a, p) in diag.iter().enumerate() {
            for q in &diag[a + 1..] {
                if p.mul(q).max_abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `is_nmiu` for small sources; for large ones, unitality plus
    /// multiplicativity and *-preservation on random pairs.
    pub fn is_nmiu_probe(&self, rng: &mut Rng, probes: usize, tol: f64) -> bool {
        if self.source.blocks.iter().all(|&n| n <= 16) {
            return self.is_nmiu(tol);
        }
        if !self.is_unital(tol) {
            return false;
        }
        (0..probes).all(|_| {
            let x = AlgElement::random(&self.source, rng);
            let y = AlgElement::random(&self.source, rng);
            let (fx, fy) = (self.apply(&x).unwrap(), self.apply(&y).unwrap());
            let scale = x.max_abs() * y.max_abs();
            self.apply(&x.mul(&y)).unwrap().dist(&fx.mul(&fy)) <= tol * scale
                && self.apply(&x.adjoint()).unwrap().dist(&fx.adjoint()) <= tol * x.max_abs()
        })
    }

    /// Largest deviation from unitality, *-preservation and
    /// multiplicativity over `probes` random pairs, relative to input size.
    pub fn nmiu_residual(&self, rng: &mut Rng, probes: usize) -> f64 {
        let mut r = self.unit_image().dist(&AlgElement::one(&self.target));
        for _ in 0..probes {
            let x = AlgElement::random(&self.source, rng);
            let y = AlgElement::random(&self.source, rng);
            let (fx, fy) = (self.apply(&x).unwrap(), self.apply(&y).unwrap());
            let (sx, sy) = (x.max_abs().max(1e-300), y.max_abs().max(1e-300));
            r = r.max(self.apply(&x.mul(&y)).unwrap().dist(&fx.mul(&fy)) / (sx * sy));
            r = r.max(self.apply(&x.adjoint()).unwrap().dist(&fx.adjoint()) / sx);
        }
        r
    }

    /// `g − f` is completely positive (`f ≤ g` in the ncp order), by the
    /// smallest eigenvalue of the Choi differences against `tol`.
    pub fn ncp_le(&self, other: &CpMap, tol: f64) -> bool {
        self.ncp_gap(other) >= -tol
    }

    /// Smallest eigenvalue over the Choi matrices of `other − self`.
    pub fn ncp_gap(&self, other: &CpMap) -> f64 {
        self.choi_table()
            .iter()
            .zip(other.choi_table())
            .fold(f64::INFINITY, |m, (a, b)| m.min(linalg::min_eig(&b.sub(a))))
    }

    /// Least projection `e` of the source with `φ(1 − e) = 0`.
    pub fn image(&self) -> AlgElement {
        AlgElement::from_fn(&self.source, |i, n| {
            let mut s = CMatrix::zeros(n, n);
            for j in 0..self.target.n_blocks() {
                for v in self.kraus(i, j) {
                    s.add_assign(&v.mul(&v.adjoint()));
                }
            }
            linalg::support_proj(&s.hermitian_part(), 1.0).expect("sum of V V* is PSD")
        })
    }

    /// Ginibre Kraus draw with `k` operators per block pair.
    pub fn random(source: &FdAlgebra, target: &FdAlgebra, k: usize, norm: Normalization, rng: &mut Rng) -> Self {
        let mut f = CpMap::zero(source, target);
        for (i, &n) in source.blocks.iter().enumerate() {
            for (j, &m) in target.blocks.iter().enumerate() {
                for _ in 0..k {
                    f.kraus_mut(i, j).push(rng.ginibre(n, m));
                }
            }
        }
        match norm {
            Normalization::None => f,
            Normalization::Unital => f.normalized(),
            Normalization::Scaled(s) => f.normalized().scale(s),
        }
    }

    /// Right-multiply Kraus operators by `φ(1)^{-1/2}` per target block.
    pub fn normalized(&self) -> Self {
        let u = self.unit_image();
        let fixes: Vec<CMatrix> =
            u.mats.iter().map(|m| linalg::pinv(&linalg::sqrt_psd(m, 1.0).expect("PSD"), TOL_REL)).collect();
        let mut out = self.clone();
        for i in 0..self.source.n_blocks() {
            for (j, s) in fixes.iter().enumerate() {
                for v in out.kraus_mut(i, j) {
                    *v = v.mul(s);
                }
            }
        }
        out
    }
}

pub(crate) fn flatten(x: AlgElement) -> Vec<C64> {
    x.mats.into_iter().flat_map(CMatrix::into_data).collect()
}

/// Kraus operators (`n × m`) from a PSD Choi matrix, descending eigenvalue.
pub fn kraus_from_choi(c: &CMatrix, n: usize, m: usize, tol: f64) -> Result<Vec<CMatrix>> {
    if c.rows != n * m || c.cols != n * m {
        return Err(Error::ShapeMismatch("Choi matrix must be nm x nm"));
    }
    let e = linalg::psd_eig(c, tol)?;
    Ok(kraus_from_eig(&e, n, m, e.threshold(TOL_REL)))
}

fn kraus_from_eig(e: &linalg::EigenDecomposition, n: usize, m: usize, t: f64) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for col in (0..n * m).rev() {
        let lam = e.values[col];
        if lam <= t {
            continue;
        }
        let s = Float::sqrt(lam);
        let v: Vec<C64> = e.basis.col(col).iter().map(|z| z.conj() * s).collect();
        out.push(CMatrix::from_vec(n, m, v));
    }
    out
}

/// `outer ∘ inner`: apply `inner` first.
pub fn compose(outer: &CpMap, inner: &CpMap) -> Result<CpMap> {
    if inner.target != outer.source {
        return Err(Error::ShapeMismatch("inner target must be outer source"));
    }
    let mut f = CpMap::zero(&inner.source, &outer.target);
    for i in 0..inner.source.n_blocks() {
        for k in 0..outer.target.n_blocks() {
            let mut fam = Vec::new();
            for j in 0..inner.target.n_blocks() {
                for v in inner.kraus(i, j) {
                    for w in outer.kraus(j, k) {
                        fam.push(v.mul(w));
                    }
                }
            }
            *f.kraus_mut(i, k) = fam;
        }
    }
    Ok(f)
}

/// `φ ⊗ ψ` with blocks in lexicographic order on both sides.
pub fn tensor(f: &CpMap, g: &CpMap) -> CpMap {
    let source = f.source.tensor(&g.source);
    let target = f.target.tensor(&g.target);
    let mut out = CpMap::zero(&source, &target);
    let (ns, nt) = (g.source.n_blocks(), g.target.n_blocks());
    for i in 0..f.source.n_blocks() {
        for i2 in 0..ns {
            for j in 0..f.target.n_blocks() {
                for j2 in 0..nt {
                    let fam = out.kraus_mut(i * ns + i2, j * nt + j2);
                    for v in f.kraus(i, j) {
                        for w in g.kraus(i2, j2) {
                            fam.push(v.kron(w));
                        }
                    }
                }
            }
        }
    }
    out
}

/// `c ↦ (f(c), g(c))` from `𝒞` into `𝒜 ⊕ ℬ`.
pub fn pair_target(f: &CpMap, g: &CpMap) -> Result<CpMap> {
    if f.source != g.source {
        return Err(Error::ShapeMismatch("pair_target needs a common source"));
    }
    let target = f.target.dirsum(&g.target);
    let mut out = CpMap::zero(&f.source, &target);
    let nf = f.target.n_blocks();
    for i in 0..f.source.n_blocks() {
        for j in 0..nf {
            *out.kraus_mut(i, j) = f.kraus(i, j).to_vec();
        }
        for j in 0..g.target.n_blocks() {
            *out.kraus_mut(i, nf + j) = g.kraus(i, j).to_vec();
        }
    }
    Ok(out)
}

/// `(a, b) ↦ (f(a), g(b))`, block diagonal.
pub fn dirsum(f: &CpMap, g: &CpMap) -> CpMap {
    let source = f.source.dirsum(&g.source);
    let target = f.target.dirsum(&g.target);
    let mut out = CpMap::zero(&source, &target);
    let (fs, ft) = (f.source.n_blocks(), f.target.n_blocks());
    for i in 0..fs {
        for j in 0..ft {
            *out.kraus_mut(i, j) = f.kraus(i, j).to_vec();
        }
    }
    for i in 0..g.source.n_blocks() {
        for j in 0..g.target.n_blocks() {
            *out.kraus_mut(fs + i, ft + j) = g.kraus(i, j).to_vec();
        }
    }
    out
}

/// `(a, b) ↦ f(a) + g(b)` from `𝒜 ⊕ ℬ` into `𝒞`; the effectus tuple `⟨f, g⟩`.
pub fn cotuple_source(f: &CpMap, g: &CpMap) -> Result<CpMap> {
    if f.target != g.target {
        return Err(Error::ShapeMismatch("cotuple_source needs a common target"));
    }
    let source = f.source.dirsum(&g.source);
    let mut out = CpMap::zero(&source, &f.target);
    let nf = f.source.n_blocks();
    for j in 0..f.target.n_blocks() {
        for i in 0..nf {
            *out.kraus_mut(i, j) = f.kraus(i, j).to_vec();
        }
        for i in 0..g.source.n_blocks() {
            *out.kraus_mut(nf + i, j) = g.kraus(i, j).to_vec();
        }
    }
    Ok(out)
}

/// Partial sum `f ⊻ g`, defined when `f(1) + g(1) ≤ 1`.
pub fn ovee_sum(f: &CpMap, g: &CpMap, tol: f64) -> Result<CpMap> {
    let s = f.add(g)?;
    let u = s.unit_image();
    let one = AlgElement::one(&s.target);
    if !u.le(&one, tol) {
        let excess = u.mats.iter().fold(0.0f64, |m, x| m.max(-linalg::min_eig(&CMatrix::identity(x.rows).sub(x))));
        return Err(Error::NotSummable { excess });
    }
    Ok(s)
}

/// `a ↦ (a, 0)` from `𝒜` into `𝒜 ⊕ ℬ`.
pub fn partial_proj_first(a: &FdAlgebra, b: &FdAlgebra) -> CpMap {
    pair_target(&CpMap::identity(a), &CpMap::zero(a, b)).unwrap()
}

/// `(a, b) ↦ a` from `𝒜 ⊕ ℬ` into `𝒜`.
pub fn coprojection_first(a: &FdAlgebra, b: &FdAlgebra) -> CpMap {
    cotuple_source(&CpMap::identity(a), &CpMap::zero(b, a)).unwrap()
}

/// `(a, b) ↦ b` from `𝒜 ⊕ ℬ` into `ℬ`.
pub fn coprojection_second(a: &FdAlgebra, b: &FdAlgebra) -> CpMap {
    cotuple_source(&CpMap::zero(a, b), &CpMap::identity(b)).unwrap()
}

/// Partial sum used by the effectus harness; swappable for fault injection.
pub type OveeFn = fn(&CpMap, &CpMap, f64) -> Result<CpMap>;

/// Instance-level effectus axioms on `op vN` for the pair of algebras
/// `(a, b)`: predicates form an effect algebra, `⊻` is bilinear under
/// composition, tuples satisfy the projection and unit equations, and the
/// zero–one law.
pub fn effectus_axiom_harness(
    a: &FdAlgebra,
    b: &FdAlgebra,
    seed: u64,
    trials: usize,
    tol: f64,
    ovee: OveeFn,
) -> Report {
    let mut rng = Rng::new(seed);
    let mut ea = LawCheck::new("pred_effect_algebra");
    let mut bil = LawCheck::new("ovee_bilinear");
    let mut proj = LawCheck::new("tuple_projection");
    let mut tup = LawCheck::new("tuple_is_ovee_of_coprojections");
    let mut unit = LawCheck::new("unit_of_tuple");
    let mut zo = LawCheck::new("zero_one_law");
    for t in 0..trials {
        // predicates on a: p ⊻ p⊥ = 1, associativity of sums of thirds, zero-one
        let p = AlgElement::random_effect(a, &mut rng);
        let q = AlgElement::random_effect(a, &mut rng).scale(0.5);
        let r = AlgElement::random_effect(a, &mut rng).scale(0.5);
        let one = AlgElement::one(a);
        let r1 = p.add(&p.perp()).dist(&one);
        let r2 = q.add(&r).add(&AlgElement::zero(a)).dist(&r.add(&q));
        let defined = one.add(&p).le(&one, tol);
        ea.observe(r1.max(r2), tol, || format!("trial {t}: p ⊻ p⊥ = 1 or commutativity off by {:e}", r1.max(r2)));
        zo.holds(!defined || p.max_abs() <= tol, || format!("trial {t}: 1 ⊻ p defined for nonzero p"));

        // maps a -> b summable pair, pre- and post-composition
        let f = CpMap::random(a, b, 2, Normalization::Scaled(0.5 * rng.uniform()), &mut rng);
        let g = CpMap::random(a, b, 2, Normalization::Scaled(0.5 * rng.uniform()), &mut rng);
        let h = CpMap::random(b, a, 2, Normalization::Unital, &mut rng);
        let k = CpMap::random(b, b, 2, Normalization::Unital, &mut rng);
        let fg = match ovee(&f, &g, tol) {
            Ok(x) => x,
            Err(_) => {
                bil.holds(false, || format!("trial {t}: summable pair rejected"));
                continue;
            }
        };
        let pre = ovee(&compose(&f, &h).unwrap(), &compose(&g, &h).unwrap(), tol)
            .map(|x| x.dist(&compose(&fg, &h).unwrap()));
        let post = ovee(&compose(&k, &f).unwrap(), &compose(&k, &g).unwrap(), tol)
            .map(|x| x.dist(&compose(&k, &fg).unwrap()));
        match (pre, post) {
            (Ok(x), Ok(y)) => bil.observe(x.max(y), tol, || format!("trial {t}: (f⊻g)∘h differs by {:e}", x.max(y))),
            _ => bil.holds(false, || format!("trial {t}: composite sum undefined")),
        }

        // tuple ⟨f, g⟩: a ⊕ b-indexed pair of maps into a common target
        let f2 = CpMap::random(a, a, 2, Normalization::Scaled(0.5 * rng.uniform()), &mut rng);
        let g2 = CpMap::random(b, a, 2, Normalization::Scaled(0.5 * rng.uniform()), &mut rng);
        let tuple = cotuple_source(&f2, &g2).unwrap();
        let r = compose(&tuple, &partial_proj_first(a, b)).unwrap().dist(&f2);
        proj.observe(r, tol, || format!("trial {t}: π̂₁∘⟨f,g⟩ differs from f by {r:e}"));
        let via = ovee(
            &compose(&f2, &coprojection_first(a, b)).unwrap(),
            &compose(&g2, &coprojection_second(a, b)).unwrap(),
            tol,
        );
        match via {
            Ok(x) => {
                let r = x.dist(&tuple);
                tup.observe(r, tol, || format!("trial {t}: ⟨f,g⟩ differs from (κ₁∘f)⊻(κ₂∘g) by {r:e}"));
            }
            Err(_) => tup.holds(false, || format!("trial {t}: coprojection sum undefined")),
        }
        let r = tuple.unit_image().dist(&f2.unit_image().add(&g2.unit_image()));
        unit.observe(r, tol, || format!("trial {t}: 1∘⟨f,g⟩ off by {r:e}"));
    }
    let mut rep = Report::new();
    for c in [ea, bil, proj, tup, unit, zo] {
        rep.push(c);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn measurement() -> CpMap {
        // ℂ² → M₂, (λ, μ) ↦ λ|0⟩⟨0| + μ|1⟩⟨1|
        let src = FdAlgebra::commutative(2);
        let mut f = CpMap::zero(&src, &FdAlgebra::matrix(2));
        f.kraus_mut(0, 0).push(CMatrix::real(&[&[1.0, 0.0]]));
        f.kraus_mut(1, 0).push(CMatrix::real(&[&[0.0, 1.0]]));
        f
    }

    #[test]
    fn apply_examples() {
        let m = measurement();
        let x = AlgElement::central(&m.source, &[1.0, 0.0]);
        assert!(m.apply(&x).unwrap().mats[0].dist(&CMatrix::unit(2, 0, 0)) < 1e-15);

        // a ↦ a ⊗ 1 from M2 to M4: Kraus V_k = 1 ⊗ <k| reshaped as 2 x 4
        let mut disc = CpMap::zero(&FdAlgebra::matrix(2), &FdAlgebra::matrix(4));
        for k in 0..2 {
            let mut e = CMatrix::zeros(1, 2);
            e[(0, k)] = C64::new(1.0, 0.0);
            disc.kraus_mut(0, 0).push(CMatrix::identity(2).kron(&e));
        }
        let one = disc.apply(&AlgElement::one(&disc.source)).unwrap();
        assert!(one.dist(&AlgElement::one(&disc.target)) < 1e-15);
        assert!(disc.is_nmiu(1e-9));

        let z = CpMap::zero(&FdAlgebra::matrix(2), &FdAlgebra::matrix(3));
        let mut rng = Rng::new(2);
        assert_eq!(z.apply(&AlgElement::random(&z.source, &mut rng)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn choi_of_identity() {
        let c = CpMap::identity(&FdAlgebra::matrix(2)).choi(0, 0);
        // Σ |ii><jj|
        let mut expect = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                expect[(i * 3, j * 3)] = C64::new(1.0, 0.0);
            }
        }
        assert!(c.dist(&expect) < 1e-15);
        let z = CpMap::zero(&FdAlgebra::matrix(2), &FdAlgebra::matrix(2));
        assert_eq!(z.choi(0, 0).max_abs(), 0.0);
    }

    #[test]
    fn from_choi_rejects_non_psd() {
        let a = FdAlgebra::matrix(2);
        // transpose map has non-PSD Choi (the swap)
        let t = CpMap::from_linear(&a, &a, |x| x.map(CMatrix::transpose), 1e-9);
        assert!(matches!(t, Err(Error::NotPsd { .. })));
    }

    #[test]
    fn ovee_and_compose_examples() {
        let mut rng = Rng::new(4);
        let a = FdAlgebra::matrix(3);
        let p = AlgElement::random_effect(&a, &mut rng);
        let asrt = |e: &AlgElement| CpMap::ad(&e.sqrt(1e-9).unwrap().mats[0]);
        let s = ovee_sum(&asrt(&p), &asrt(&p.perp()), 1e-9).unwrap();
        assert!(s.unit_image().dist(&AlgElement::one(&a)) < 1e-12);
        assert!(matches!(
            ovee_sum(&CpMap::identity(&a), &CpMap::identity(&a), 1e-9),
            Err(Error::NotSummable { .. })
        ));

        let b = FdAlgebra::new(vec![2, 1]).unwrap();
        let phi = CpMap::random(&b, &a, 2, Normalization::Unital, &mut rng);
        let c = compose(&CpMap::identity(&a), &phi).unwrap();
        for _ in 0..10 {
            let x = AlgElement::random(&b, &mut rng);
            assert!(c.apply(&x).unwrap().dist(&phi.apply(&x).unwrap()) < 1e-12);
        }

        let m = measurement();
        let mm = tensor(&m, &m);
        let x = AlgElement::central(&mm.source, &[1.0, 0.0, 0.0, 0.0]);
        assert!(mm.apply(&x).unwrap().mats[0].dist(&CMatrix::unit(4, 0, 0)) < 1e-15);
    }

    #[test]
    fn nmiu_examples() {
        let mut rng = Rng::new(8);
        let u = rng.unitary(3);
        assert!(CpMap::ad(&u).is_nmiu(1e-9));
        let p = rng.effect(3);
        assert!(!CpMap::ad(&linalg::sqrt_psd(&p, 1e-9).unwrap()).is_nmiu(1e-9));
    }

    #[test]
    fn image_examples() {
        let a = FdAlgebra::new(vec![2, 3]).unwrap();
        assert_eq!(CpMap::identity(&a).image(), AlgElement::one(&a));
        let first = cotuple_source(&CpMap::identity(&FdAlgebra::matrix(2)), &CpMap::zero(&FdAlgebra::matrix(3), &FdAlgebra::matrix(2))).unwrap();
        assert_eq!(first.image(), AlgElement::central(&a, &[1.0, 0.0]));
        assert_eq!(CpMap::zero(&a, &a).image(), AlgElement::zero(&a));
    }

    #[test]
    fn harness_passes_and_catches_corruption() {
        let a = FdAlgebra::matrix(2);
        let b = FdAlgebra::new(vec![3, 1]).unwrap();
        let rep = effectus_axiom_harness(&a, &b, 1, 20, 1e-9, ovee_sum);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        fn dropping(f: &CpMap, g: &CpMap, tol: f64) -> Result<CpMap> {
            let mut s = ovee_sum(f, g, tol)?;
            for fam in &mut s.kraus {
                fam.pop();
            }
            Ok(s)
        }
        let bad = effectus_axiom_harness(&a, &b, 1, 5, 1e-9, dropping);
        assert!(!bad.get("ovee_bilinear").unwrap().passed);
        assert!(bad.get("ovee_bilinear").unwrap().witness.is_some());
        let empty = effectus_axiom_harness(&a, &b, 1, 0, 1e-9, ovee_sum);
        assert!(empty.passed() && empty.checks.iter().all(|c| c.checked == 0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn prop_choi_round_trip(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let s = FdAlgebra::new(vec![2, 1]).unwrap();
            let t = FdAlgebra::new(vec![2, 3]).unwrap();
            let f = CpMap::random(&s, &t, 3, Normalization::None, &mut rng);
            let g = CpMap::from_choi(&s, &t, &f.choi_table(), 1e-9).unwrap();
            for idx in 0..4 {
                let (i, j) = (idx / 2, idx % 2);
                prop_assert!(g.kraus(i, j).len() <= s.blocks[i] * t.blocks[j]);
                prop_assert!(g.choi(i, j).dist(&f.choi(i, j)) < 1e-9);
            }
            for _ in 0..20 {
                let x = AlgElement::random(&s, &mut rng);
                prop_assert!(g.apply(&x).unwrap().dist(&f.apply(&x).unwrap()) < 1e-8);
            }
        }

        #[test]
        fn prop_positive_on_psd(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let s = FdAlgebra::new(vec![2, 2]).unwrap();
            let t = FdAlgebra::matrix(3);
            let f = CpMap::random(&s, &t, 2, Normalization::None, &mut rng);
            let x = AlgElement::random(&s, &mut rng);
            let psd = x.adjoint().mul(&x);
            prop_assert!(linalg::min_eig(&f.apply(&psd).unwrap().mats[0]) >= -1e-10);
        }

        #[test]
        fn prop_image_of_composite_is_smaller(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let a = FdAlgebra::new(vec![2, 1]).unwrap();
            let b = FdAlgebra::matrix(3);
            // low-rank inner map so the inequality is not trivially 1 ≤ 1
            let psi = CpMap::random(&a, &b, 1, Normalization::None, &mut rng);
            let phi = CpMap::random(&b, &a, 1, Normalization::None, &mut rng);
            let comp = compose(&phi, &psi).unwrap();
            prop_assert!(comp.image().le(&psi.image(), 1e-9));
        }

        #[test]
        fn prop_unit_of_tuple(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let a = FdAlgebra::matrix(2);
            let b = FdAlgebra::commutative(2);
            let c = FdAlgebra::new(vec![2, 1]).unwrap();
            let f = CpMap::random(&a, &c, 2, Normalization::Scaled(0.4), &mut rng);
            let g = CpMap::random(&b, &c, 2, Normalization::Scaled(0.6), &mut rng);
            let t = cotuple_source(&f, &g).unwrap();
            prop_assert!(t.unit_image().dist(&f.unit_image().add(&g.unit_image())) < 1e-12);
        }
    }
}
