//! Finite-dimensional von Neumann algebras `M_{n1} ⊕ … ⊕ M_{nk}`, their
//! elements, and recognition of block structure inside a concrete `M_d`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::rng::Rng;
use crate::{DEFAULT_SEED, TOL_REL};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdAlgebra {
    pub blocks: Vec<usize>,
}

impl FdAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidInput("algebra needs at least one block, all positive"));
        }
        Ok(FdAlgebra { blocks })
    }

    /// The factor `M_n`.
    pub fn matrix(n: usize) -> Self {
        FdAlgebra { blocks: vec![n] }
    }

    /// The zero algebra `{0}`; it has no blocks.
    pub fn zero_algebra() -> Self {
        FdAlgebra { blocks: Vec::new() }
    }

    /// `M_n`, or the zero algebra when `n = 0`.
    pub fn factor_or_zero(n: usize) -> Self {
        if n == 0 {
            FdAlgebra::zero_algebra()
        } else {
            FdAlgebra::matrix(n)
        }
    }

    /// `ℂ^k`, the commutative algebra on `k` points.
    pub fn commutative(k: usize) -> Self {
        FdAlgebra { blocks: vec![1; k] }
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Complex dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// Side of the block-diagonal representation, `Σ n_i`.
    pub fn size(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn is_factor(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn dirsum(&self, other: &FdAlgebra) -> FdAlgebra {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        FdAlgebra { blocks }
    }

    /// Blocks `n_i·m_j` in lexicographic `(i, j)` order.
    pub fn tensor(&self, other: &FdAlgebra) -> FdAlgebra {
        let blocks = self.blocks.iter().flat_map(|&n| other.blocks.iter().map(move |&m| n * m)).collect();
        FdAlgebra { blocks }
    }

    /// All matrix units `(block, k, l)` in block then row-major order.
    pub fn matrix_units(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for (i, &n) in self.blocks.iter().enumerate() {
            for k in 0..n {
                for l in 0..n {
                    out.push((i, k, l));
                }
            }
        }
        out
    }
}

/// One matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement {
    pub algebra: FdAlgebra,
    pub mats: Vec<CMatrix>,
}

impl AlgElement {
    pub fn new(algebra: FdAlgebra, mats: Vec<CMatrix>) -> Result<Self> {
        if mats.len() != algebra.n_blocks()
            || mats.iter().zip(&algebra.blocks).any(|(m, &n)| m.rows != n || m.cols != n)
        {
            return Err(Error::ShapeMismatch("element blocks must match the algebra"));
        }
        Ok(AlgElement { algebra, mats })
    }

    pub fn from_fn(algebra: &FdAlgebra, f: impl FnMut(usize, usize) -> CMatrix) -> Self {
        let mut f = f;
        let mats = algebra.blocks.iter().enumerate().map(|(i, &n)| f(i, n)).collect();
        AlgElement { algebra: algebra.clone(), mats }
    }

    pub fn zero(algebra: &FdAlgebra) -> Self {
        AlgElement::from_fn(algebra, |_, n| CMatrix::zeros(n, n))
    }

    pub fn one(algebra: &FdAlgebra) -> Self {
        AlgElement::scalar(algebra, 1.0)
    }

    pub fn scalar(algebra: &FdAlgebra, s: f64) -> Self {
        AlgElement::from_fn(algebra, |_, n| CMatrix::identity(n).scale_re(s))
    }

    pub fn matrix_unit(algebra: &FdAlgebra, block: usize, k: usize, l: usize) -> Self {
        AlgElement::from_fn(algebra, |i, n| {
            if i == block {
                CMatrix::unit(n, k, l)
            } else {
                CMatrix::zeros(n, n)
            }
        })
    }

    /// Central element `Σ c_i·1_i`.
    pub fn central(algebra: &FdAlgebra, coeffs: &[f64]) -> Self {
        AlgElement::from_fn(algebra, |i, n| CMatrix::identity(n).scale_re(coeffs[i]))
    }

    pub fn random(algebra: &FdAlgebra, rng: &mut Rng) -> Self {
        AlgElement::from_fn(algebra, |_, n| rng.ginibre(n, n))
    }

    pub fn random_effect(algebra: &FdAlgebra, rng: &mut Rng) -> Self {
        AlgElement::from_fn(algebra, |_, n| rng.effect(n))
    }

    pub fn random_projection(algebra: &FdAlgebra, rng: &mut Rng) -> Self {
        AlgElement::from_fn(algebra, |_, n| rng.projection(n))
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        AlgElement { algebra: self.algebra.clone(), mats: self.mats.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<Self> {
        let mats = self.mats.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(AlgElement { algebra: self.algebra.clone(), mats })
    }

    fn zip(&self, other: &AlgElement, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        assert_eq!(self.algebra, other.algebra, "elements must live in the same algebra");
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect();
        AlgElement { algebra: self.algebra.clone(), mats }
    }

    pub fn add(&self, other: &AlgElement) -> Self {
        self.zip(other, CMatrix::add)
    }

    pub fn sub(&self, other: &AlgElement) -> Self {
        self.zip(other, CMatrix::sub)
    }

    pub fn mul(&self, other: &AlgElement) -> Self {
        self.zip(other, CMatrix::mul)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|m| m.scale_re(s))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|m| m.scale(s))
    }

    pub fn adjoint(&self) -> Self {
        self.map(CMatrix::adjoint)
    }

    /// Orthosupplement `1 - x`.
    pub fn perp(&self) -> Self {
        AlgElement::one(&self.algebra).sub(self)
    }

    /// Max entrywise distance over all blocks.
    pub fn dist(&self, other: &AlgElement) -> f64 {
        assert_eq!(self.algebra, other.algebra, "elements must live in the same algebra");
        self.mats.iter().zip(&other.mats).fold(0.0, |m, (a, b)| m.max(a.dist(b)))
    }

    pub fn max_abs(&self) -> f64 {
        self.mats.iter().fold(0.0, |m, a| m.max(a.max_abs()))
    }

    pub fn op_norm(&self) -> f64 {
        self.mats.iter().fold(0.0, |m, a| m.max(linalg::op_norm(a)))
    }

    pub fn inner(&self, other: &AlgElement) -> C64 {
        self.mats.iter().zip(&other.mats).map(|(a, b)| a.inner(b)).sum()
    }

    pub fn is_effect(&self, tol: f64) -> bool {
        self.mats.iter().all(|m| linalg::is_effect(m, tol))
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.mats.iter().all(|m| linalg::is_projection(m, tol))
    }

    pub fn is_central(&self, tol: f64) -> bool {
        self.mats.iter().all(|m| {
            let c = m.trace() / m.rows as f64;
            m.dist(&CMatrix::identity(m.rows).scale(c)) <= tol
        })
    }

    pub fn ceil(&self, tol: f64) -> Result<Self> {
        self.try_map(|m| linalg::support_proj(m, tol))
    }

    pub fn floor(&self, tol: f64) -> Result<Self> {
        self.try_map(|m| linalg::floor_proj(m, tol))
    }

    pub fn sqrt(&self, tol: f64) -> Result<Self> {
        self.try_map(|m| linalg::sqrt_psd(m, tol))
    }

    pub fn pinv(&self, tol: f64) -> Self {
        self.map(|m| linalg::pinv(m, tol))
    }

    /// `self ≤ other` in the Loewner order.
    pub fn le(&self, other: &AlgElement, tol: f64) -> bool {
        self.mats.iter().zip(&other.mats).all(|(a, b)| linalg::loewner_le(a, b, tol))
    }

    /// Block-diagonal matrix of side `Σ n_i`.
    pub fn to_dense(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.algebra.size(), self.algebra.size());
        let mut off = 0;
        for m in &self.mats {
            out.set_block(off, off, m);
            off += m.rows;
        }
        out
    }

    /// Blocks on the diagonal of a dense matrix of side `Σ n_i`.
    pub fn from_dense(algebra: &FdAlgebra, m: &CMatrix) -> Self {
        let mut off = 0;
        AlgElement::from_fn(algebra, |_, n| {
            let b = m.block(off, off, n, n);
            off += n;
            b
        })
    }
}

/// Least central projection above an effect.
pub fn central_carrier(p: &AlgElement, tol: f64) -> Result<AlgElement> {
    if !p.is_effect(tol) {
        return Err(Error::NotEffect);
    }
    Ok(AlgElement::from_fn(&p.algebra, |i, n| {
        if p.mats[i].max_abs() > tol {
            CMatrix::identity(n)
        } else {
            CMatrix::zeros(n, n)
        }
    }))
}

fn projection_ranks(p: &AlgElement, tol: f64) -> Result<Vec<usize>> {
    if !p.is_projection(tol) {
        return Err(Error::NotProjection);
    }
    Ok(p.mats.iter().map(|m| Float::round(m.trace().re) as usize).collect())
}

/// Murray–von Neumann equivalence: equal rank in every block.
pub fn mv_equivalent(p: &AlgElement, q: &AlgElement, tol: f64) -> Result<bool> {
    Ok(projection_ranks(p, tol)? == projection_ranks(q, tol)?)
}

/// A *-subalgebra of `M_d` presented as `⊕_k M_{n_k} ⊗ 1_{m_k}`.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub ambient_dim: usize,
    pub structure: FdAlgebra,
    pub multiplicities: Vec<usize>,
    /// Per block, a `d × n_k·m_k` isometry `J_k`; the block element `x`
    /// sits in `M_d` as `J_k (x ⊗ 1) J_k*`.
    pub embed: Vec<CMatrix>,
    pub unit: CMatrix,
}

impl Subalgebra {
    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn embed_element(&self, x: &AlgElement) -> CMatrix {
        let mut out = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (k, j) in self.embed.iter().enumerate() {
            let lifted = x.mats[k].kron(&CMatrix::identity(self.multiplicities[k]));
            out.add_assign(&j.mul(&lifted).mul(&j.adjoint()));
        }
        out
    }

    /// Inverse of `embed_element` on the subalgebra (reads the first copy).
    pub fn restrict(&self, t: &CMatrix) -> AlgElement {
        AlgElement::from_fn(&self.structure, |k, n| {
            let m = self.multiplicities[k];
            let c = t.congruence(&self.embed[k]);
            CMatrix::from_fn(n, n, |a, b| c[(a * m, b * m)])
        })
    }

    /// Distance from `t` to its projection onto the subalgebra.
    pub fn residual(&self, t: &CMatrix) -> f64 {
        // conditional expectation: average over the multiplicity copies
        let x = AlgElement::from_fn(&self.structure, |k, n| {
            let m = self.multiplicities[k];
            let c = t.congruence(&self.embed[k]);
            CMatrix::from_fn(n, n, |a, b| (0..m).map(|mu| c[(a * m + mu, b * m + mu)]).sum::<C64>() / m as f64)
        });
        self.embed_element(&x).dist(t)
    }

    pub fn contains(&self, t: &CMatrix, tol: f64) -> bool {
        self.residual(t) <= tol
    }

    /// Embedded matrix units, in `structure.matrix_units()` order.
    pub fn matrix_units(&self) -> Vec<CMatrix> {
        self.structure
            .matrix_units()
            .into_iter()
            .map(|(b, k, l)| self.embed_element(&AlgElement::matrix_unit(&self.structure, b, k, l)))
            .collect()
    }
}

/// Orthonormal (Hilbert–Schmidt) basis of the span of `mats`.
pub fn span_basis(mats: &[CMatrix], tol_rel: f64) -> Vec<CMatrix> {
    let r = mats.len();
    if r == 0 {
        return Vec::new();
    }
    let g = CMatrix::from_fn(r, r, |i, j| mats[i].inner(&mats[j]));
    let e = linalg::herm_eig(&g.hermitian_part(), 1.0).expect("Gram matrices are Hermitian");
    let t = e.threshold(tol_rel);
    let (rows, cols) = (mats[0].rows, mats[0].cols);
    let mut out = Vec::new();
    for c in (0..r).rev() {
        let lam = e.values[c];
        if lam <= t {
            continue;
        }
        let mut m = CMatrix::zeros(rows, cols);
        for (i, b) in mats.iter().enumerate() {
            let w = e.basis[(i, c)];
            if w.norm() > 0.0 {
                m.add_assign(&b.scale(w));
            }
        }
        out.push(m.scale_re(1.0 / Float::sqrt(lam)));
    }
    out
}

fn coefficients(basis: &[CMatrix], x: &CMatrix) -> Vec<C64> {
    basis.iter().map(|b| b.inner(x)).collect()
}

fn span_residual(basis: &[CMatrix], x: &CMatrix) -> f64 {
    let mut r = x.clone();
    for (b, c) in basis.iter().zip(coefficients(basis, x)) {
        r = r.sub(&b.scale(c));
    }
    r.max_abs()
}

fn combine(basis: &[CMatrix], coeffs: &[C64]) -> CMatrix {
    let mut out = CMatrix::zeros(basis[0].rows, basis[0].cols);
    for (b, &c) in basis.iter().zip(coeffs) {
        out.add_assign(&b.scale(c));
    }
    out
}

/// Group consecutive ascending eigenvalues whose gaps are below `gap`.
fn clusters(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(c) if v - values[*c.last().unwrap()] < gap => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Spectral clusters of a Hermitian `h` restricted to the range of the
/// isometry `u`; returns per cluster the orthonormal columns in `M_d`.
fn spectral_clusters(h: &CMatrix, u: &CMatrix, gap: f64) -> Vec<CMatrix> {
    let hr = h.congruence(u).hermitian_part();
    let norm = linalg::op_norm(&hr).max(1e-300);
    let e = linalg::herm_eig(&hr.scale_re(1.0 / norm), 1.0).expect("Hermitian by construction");
    clusters(&e.values, gap)
        .into_iter()
        .map(|idx| {
            let cols: Vec<Vec<C64>> = idx.iter().map(|&c| e.basis.col(c)).collect();
            let mut w = u.mul(&CMatrix::from_columns(u.cols, &cols));
            w.fix_column_phases(1e-10);
            w
        })
        .collect()
}

const GAP: f64 = 1e-6;
const MAX_RETRIES: u64 = 16;

/// Wedderburn decomposition of a *-closed subspace of `M_d` that is an
/// algebra with unit some projection.
pub fn recognize_structure(basis: &[CMatrix], seed: u64, tol: f64) -> Result<Subalgebra> {
    let d = basis.first().map(|b| b.rows).ok_or(Error::NotSubalgebra("empty basis"))?;
    if basis.iter().any(|b| b.rows != d || b.cols != d) {
        return Err(Error::ShapeMismatch("basis matrices must share a square shape"));
    }
    let chk = (tol * 1e3).max(1e-8);
    let b = span_basis(basis, TOL_REL);
    let r = b.len();
    if r == 0 {
        return Err(Error::NotSubalgebra("zero subspace"));
    }
    for x in &b {
        if span_residual(&b, &x.adjoint()) > chk {
            return Err(Error::NotSubalgebra("not closed under adjoint"));
        }
    }
    for x in &b {
        for y in &b {
            if span_residual(&b, &x.mul(y)) > chk {
                return Err(Error::NotSubalgebra("not closed under products"));
            }
        }
    }
    let mut s = CMatrix::zeros(d, d);
    for x in &b {
        s.add_assign(&x.mul(&x.adjoint()));
    }
    let unit = linalg::support_proj(&s.hermitian_part(), 1.0)?;
    if span_residual(&b, &unit) > chk || b.iter().any(|x| unit.mul(x).dist(x) > chk) {
        return Err(Error::NotSubalgebra("no unit projection"));
    }

    // center: coefficient vectors z with [Σ z_i b_i, b_j] = 0 for all j
    let comm: Vec<Vec<CMatrix>> = b.iter().map(|x| b.iter().map(|y| x.commutator(y)).collect()).collect();
    let g = CMatrix::from_fn(r, r, |i, k| (0..r).map(|j| comm[i][j].inner(&comm[k][j])).sum());
    let zc = linalg::nullspace_of_gram(&g, TOL_REL);
    let center: Vec<CMatrix> = (0..zc.cols).map(|c| combine(&b, &zc.col(c))).collect();
    let center_dim = center.len();
    let u_unit = linalg::range_basis(&unit, TOL_REL);

    let mut rng = Rng::new(seed);
    let mut zs: Option<Vec<CMatrix>> = None;
    for attempt in 0..MAX_RETRIES {
        if attempt > 0 {
            rng = Rng::new(seed.wrapping_add(attempt));
        }
        let coeffs: Vec<C64> = (0..center_dim).map(|_| rng.complex_normal()).collect();
        let h = combine(&center, &coeffs).hermitian_part();
        let cl = spectral_clusters(&h, &u_unit, GAP);
        if cl.len() == center_dim {
            zs = Some(cl);
            break;
        }
    }
    let zs = zs.ok_or(Error::NotSubalgebra("central spectrum did not separate"))?;

    struct Block {
        n: usize,
        m: usize,
        first: usize,
        j: CMatrix,
    }
    let mut blocks = Vec::new();
    for w in &zs {
        let z = w.mul(&w.adjoint());
        let zb: Vec<CMatrix> = b.iter().map(|x| z.mul(x)).collect();
        let kb = span_basis(&zb, TOL_REL);
        let dim = kb.len();
        let n = Float::round(Float::sqrt(dim as f64)) as usize;
        if n * n != dim || n == 0 {
            return Err(Error::NotSubalgebra("central summand dimension is not a square"));
        }
        let rank = w.cols;
        if rank % n != 0 {
            return Err(Error::NotSubalgebra("central summand rank is not a multiple of n"));
        }
        let m = rank / n;
        let mut found = None;
        for _ in 0..MAX_RETRIES {
            let hc: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
            let x = combine(&kb, &hc).hermitian_part();
            let qs = spectral_clusters(&x, w, GAP);
            if qs.len() != n || qs.iter().any(|q| q.cols != m) {
                continue;
            }
            let yc: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
            let y = combine(&kb, &yc);
            let q1 = qs[0].mul(&qs[0].adjoint());
            let mut e1: Vec<CMatrix> = Vec::with_capacity(n);
            let mut ok = true;
            for q in &qs {
                let ql = q.mul(&q.adjoint());
                let e = q1.mul(&y).mul(&ql);
                let nrm = linalg::op_norm(&e);
                if nrm < 1e-6 {
                    ok = false;
                    break;
                }
                e1.push(e.scale_re(1.0 / nrm));
            }
            if !ok {
                continue;
            }
            e1[0] = q1;
            let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n * m);
            for e in &e1 {
                let el1 = e.adjoint();
                for mu in 0..m {
                    cols.push(el1.mul(&CMatrix::column(&qs[0].col(mu))).col(0));
                }
            }
            found = Some(CMatrix::from_columns(d, &cols));
            break;
        }
        let j = found.ok_or(Error::NotSubalgebra("block spectrum did not separate"))?;
        if j.adj_mul(&j).dist(&CMatrix::identity(n * m)) > chk {
            return Err(Error::NotSubalgebra("matrix units are not coherent"));
        }
        let first = (0..d).find(|&i| z[(i, i)].re > 1e-8).unwrap_or(d);
        blocks.push(Block { n, m, first, j });
    }
    blocks.sort_by(|a, c| c.n.cmp(&a.n).then(a.first.cmp(&c.first)));

    let sub = Subalgebra {
        ambient_dim: d,
        structure: FdAlgebra { blocks: blocks.iter().map(|x| x.n).collect() },
        multiplicities: blocks.iter().map(|x| x.m).collect(),
        embed: blocks.into_iter().map(|x| x.j).collect(),
        unit,
    };
    if sub.dim() != r {
        return Err(Error::NotSubalgebra("block dimensions do not add up"));
    }
    if b.iter().any(|x| sub.residual(x) > chk) {
        return Err(Error::NotSubalgebra("basis is not spanned by the recognized matrix units"));
    }
    Ok(sub)
}

/// Kernel basis of `T ↦ (T g − g T)_g` over `gens` and their adjoints.
pub fn commutant_basis(gens: &[CMatrix], tol: f64) -> Result<Vec<CMatrix>> {
    let d = gens.first().map(|g| g.rows).ok_or(Error::InvalidInput("no generators"))?;
    let id = CMatrix::identity(d);
    let mut l = CMatrix::zeros(d * d, d * d);
    let mut all: Vec<CMatrix> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        if g.rows != d || g.cols != d {
            return Err(Error::ShapeMismatch("generators must share a square shape"));
        }
        all.push(g.clone());
        if !g.is_hermitian(tol) {
            all.push(g.adjoint());
        }
    }
    for g in &all {
        // row-major vec: vec(T g) = (1 ⊗ gᵀ) vec T, vec(g T) = (g ⊗ 1) vec T
        let lg = id.kron(&g.transpose()).sub(&g.kron(&id));
        l.add_assign(&lg.adj_mul(&lg));
    }
    let k = linalg::nullspace_of_gram(&l, TOL_REL);
    Ok((0..k.cols).map(|c| CMatrix::from_vec(d, d, k.col(c))).collect())
}

/// Commutant of a family in `M_d`, recognized as a subalgebra.
pub fn commutant(gens: &[CMatrix], tol: f64) -> Result<Subalgebra> {
    recognize_structure(&commutant_basis(gens, tol)?, DEFAULT_SEED, tol)
}
