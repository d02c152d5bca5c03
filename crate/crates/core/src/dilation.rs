//! GNS, minimal Stinespring and Paschke dilations of ncp-maps between
//! finite-dimensional algebras, the mediating-map solver, and numerical
//! checks of the structure theorems around Paschke dilations.
//!
//! The Paschke module `X = 𝒜 ⊙_φ ℬ` is handled through its compressions
//! `X·E^j_00`, which are Hilbert spaces spanned by the generators
//! `E^i_kl ⊗ E^j_s0`. Their Gram matrix is block diagonal with the Choi
//! matrices `C_ij` as blocks, so an orthonormal basis comes straight from
//! the Choi eigenvectors and `ℬᵃ(X) = ⊕_j M_{k_j}` with
//! `k_j = Σ_i n_i·rank C_ij`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::cpmap::{self, flatten, CpMap};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::report::{LawCheck, Report};
use crate::rng::Rng;
use crate::vnalg::{self, AlgElement, FdAlgebra, Subalgebra};
use crate::{DEFAULT_SEED, TOL_REL};

/// Random probes used wherever an exhaustive sweep would be too large.
const PROBES: usize = 12;

/// `φ(a) = V* ρ(a) V` with `ρ: 𝒜 → M_K` a representation and `V: ℂⁿ → ℂ^K`.
#[derive(Clone, Debug)]
pub struct StinespringDilation {
    pub k_dim: usize,
    pub rho: CpMap,
    /// `K × n`; column `x` is the class of `1 ⊗ e_x`.
    pub v: CMatrix,
    /// Rank of the Gram matrix of `𝒜 ⊙ ℂⁿ`; equals `k_dim`.
    pub gram_rank: usize,
}

impl StinespringDilation {
    /// The dilation viewed as the triple `(M_K, ρ, ad_V)`.
    pub fn lifted(&self) -> DilationTriple {
        let p = FdAlgebra::factor_or_zero(self.k_dim);
        let n = self.v.cols;
        let mut h = CpMap::zero(&p, &FdAlgebra::matrix(n));
        if self.k_dim > 0 {
            h.kraus_mut(0, 0).push(self.v.clone());
        }
        DilationTriple { p, rho: self.rho.clone(), h }
    }

    /// Rank of `span{ρ(a) V x}`.
    pub fn cyclic_rank(&self) -> usize {
        if self.k_dim == 0 {
            return 0;
        }
        let cols: Vec<CMatrix> = self.rho.unit_images().iter().map(|r| r.mats[0].mul(&self.v)).collect();
        linalg::rank(&CMatrix::hstack(&cols), TOL_REL)
    }
}

/// GNS data `⟨x, ρ(a) x⟩ = ω(a)`.
#[derive(Clone, Debug)]
pub struct Gns {
    pub h_dim: usize,
    pub rho: CpMap,
    pub x: Vec<C64>,
}

/// Generator `E^i_kl ⊗ E^j_s0` of the compressed module `X·E^j_00`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub block: usize,
    pub k: usize,
    pub l: usize,
    pub s: usize,
}

/// The Paschke module in compressed form, one Hilbert space per block of ℬ.
#[derive(Clone, Debug)]
pub struct PaschkeModule {
    pub b: FdAlgebra,
    /// Per ℬ-block `j`, generators ordered by `(i, k, l, s)`.
    pub gens: Vec<Vec<Generator>>,
    /// Per `j`, `G[g, g'] = ⟨g, g'⟩` read off at `E^j_00`.
    pub gram: Vec<CMatrix>,
    /// Per `j`, `F` with column `γ` expanding the basis vector `e_γ` over
    /// the generators; `F* G F = 1`. Each `e_γ` has `⟨e_γ, e_γ⟩ = E^j_00`.
    pub basis: Vec<CMatrix>,
    /// Per `j`, `F* G`: the coordinates `⟨e_γ, g⟩` of every generator.
    pub coords: Vec<CMatrix>,
    /// `frames[j][i]`: columns `ψ_r / √λ_r` of the kept Choi eigenpairs of
    /// `C_ij`, descending `λ`.
    pub frames: Vec<Vec<CMatrix>>,
    /// `offsets[j][i]`: first basis index belonging to source block `i`.
    pub offsets: Vec<Vec<usize>>,
}

impl PaschkeModule {
    /// `max_j ‖G_j − coords_j* coords_j‖`; zero is the Parseval identity on
    /// every generator, and on sums of them.
    pub fn parseval_residual(&self) -> f64 {
        self.gram.iter().zip(&self.coords).fold(0.0f64, |m, (g, c)| m.max(c.adj_mul(c).dist(g)))
    }

    /// `max_j ‖F* G F − 1‖`.
    pub fn orthonormality_residual(&self) -> f64 {
        self.gram.iter().zip(&self.basis).fold(0.0f64, |m, (g, f)| {
            m.max(g.congruence(f).dist(&CMatrix::identity(f.cols)))
        })
    }
}

/// `(P, ρ, h)` with `ρ` nmiu and `h ∘ ρ = φ`.
#[derive(Clone, Debug)]
pub struct DilationTriple {
    pub p: FdAlgebra,
    pub rho: CpMap,
    pub h: CpMap,
}

#[derive(Clone, Debug)]
pub struct PaschkeDilation {
    pub phi: CpMap,
    /// `ℬᵃ(X)`; blocks of ℬ with `k_j = 0` are dropped.
    pub p: FdAlgebra,
    pub rho: CpMap,
    pub h: CpMap,
    pub module: PaschkeModule,
    /// ℬ-block underlying each block of `P`.
    pub block_of: Vec<usize>,
    /// Per block of `P`, the `k_j × m_j` coordinates of `(1 ⊗ 1)·E^j_s0`.
    pub unit_vec: Vec<CMatrix>,
}

impl PaschkeDilation {
    pub fn triple(&self) -> DilationTriple {
        DilationTriple { p: self.p.clone(), rho: self.rho.clone(), h: self.h.clone() }
    }

    /// Runtime invariants: `h∘ρ = φ`, `ρ` nmiu, `h` pure, the module basis
    /// is orthonormal and Parseval, and the vector `1 ⊗ 1` read off the
    /// module agrees with the canonical Kraus operators of `φ`.
    pub fn verify(&self, tol: f64) -> Report {
        let mut rep = Report::new();
        let mut c = LawCheck::new("h_after_rho_is_phi");
        let r = cpmap::compose(&self.h, &self.rho).map(|f| f.dist(&self.phi)).unwrap_or(f64::INFINITY);
        c.observe(r, tol, || format!("‖h∘ρ − φ‖ = {r:e}"));
        rep.push(c);

        let mut c = LawCheck::new("rho_nmiu");
        c.holds(self.rho.is_nmiu(tol), || "ρ fails multiplicativity on matrix units".into());
        rep.push(c);

        let mut c = LawCheck::new("h_pure");
        c.holds(crate::effectus_ops::is_pure(&self.h), || "ρ of the dilation of h is not surjective".into());
        rep.push(c);

        let mut c = LawCheck::new("module_orthonormal");
        let r = self.module.orthonormality_residual();
        c.observe(r, tol, || format!("‖F*GF − 1‖ = {r:e}"));
        rep.push(c);

        let mut c = LawCheck::new("parseval");
        let r = self.module.parseval_residual();
        c.observe(r, tol, || format!("‖G − Σ|coords|²‖ = {r:e}"));
        rep.push(c);

        let mut c = LawCheck::new("unit_vector_matches_kraus");
        for (pb, &j) in self.block_of.iter().enumerate() {
            let m = self.phi.target.blocks[j];
            let mut closed = CMatrix::zeros(self.p.blocks[pb], m);
            for (i, &n) in self.phi.source.blocks.iter().enumerate() {
                let f = &self.module.frames[j][i];
                let off = self.module.offsets[j][i];
                // row (i, k, r) of W is the k-th row of the r-th canonical Kraus operator
                for t in 0..f.cols {
                    let nrm2: f64 = (0..n * m).map(|x| f[(x, t)].norm_sqr()).sum();
                    let lam = 1.0 / nrm2;
                    for k in 0..n {
                        for s in 0..m {
                            closed[(off + k * f.cols + t, s)] = (f[(k * m + s, t)] * lam).conj();
                        }
                    }
                }
            }
            let r = closed.dist(&self.unit_vec[pb]);
            c.observe(r, tol.max(1e-12) * 1e3, || format!("block {pb}: ‖W − rows(V)‖ = {r:e}"));
        }
        rep.push(c);
        rep
    }
}

/// Eigendecomposition of every Choi matrix of `φ` with a rank cutoff
/// relative to the largest eigenvalue across all of them.
fn choi_frames(phi: &CpMap) -> (Vec<CMatrix>, Vec<Vec<CMatrix>>) {
    let (na, nb) = (phi.source.n_blocks(), phi.target.n_blocks());
    let table = phi.choi_table();
    let eigs: Vec<_> = table.iter().map(|c| linalg::psd_eig(c, 1.0).expect("Kraus Choi is PSD")).collect();
    let top = eigs.iter().fold(0.0f64, |m, e| m.max(e.max_value()));
    let thr = if top < 1e-12 { 1e-12 } else { TOL_REL * top };
    let mut frames = vec![Vec::with_capacity(na); nb];
    for (j, fj) in frames.iter_mut().enumerate() {
        for i in 0..na {
            let e = &eigs[i * nb + j];
            let d = e.values.len();
            let cols: Vec<Vec<C64>> = (0..d)
                .rev()
                .filter(|&c| e.values[c] > thr)
                .map(|c| {
                    let s = 1.0 / Float::sqrt(e.values[c]);
                    e.basis.col(c).into_iter().map(|z| z * s).collect()
                })
                .collect();
            fj.push(if cols.is_empty() { CMatrix::zeros(d, 0) } else { CMatrix::from_columns(d, &cols) });
        }
    }
    (table, frames)
}

/// Paschke dilation of any ncp-map.
pub fn paschke(phi: &CpMap) -> PaschkeDilation {
    let (a, b) = (&phi.source, &phi.target);
    let (na, nb) = (a.n_blocks(), b.n_blocks());
    let (table, frames) = choi_frames(phi);
    let mut module = PaschkeModule {
        b: b.clone(),
        gens: Vec::with_capacity(nb),
        gram: Vec::with_capacity(nb),
        basis: Vec::with_capacity(nb),
        coords: Vec::with_capacity(nb),
        frames,
        offsets: Vec::with_capacity(nb),
    };
    let mut ws = Vec::with_capacity(nb);
    for (j, &m) in b.blocks.iter().enumerate() {
        let mut gens = Vec::new();
        let mut gen_off = Vec::with_capacity(na);
        for (i, &n) in a.blocks.iter().enumerate() {
            gen_off.push(gens.len());
            for k in 0..n {
                for l in 0..n {
                    for s in 0..m {
                        gens.push(Generator { block: i, k, l, s });
                    }
                }
            }
        }
        let big_n = gens.len();
        let mut g = CMatrix::zeros(big_n, big_n);
        let mut h = CMatrix::zeros(big_n, m);
        let mut col_off = Vec::with_capacity(na);
        let mut kj = 0;
        for (i, &n) in a.blocks.iter().enumerate() {
            let c = &table[i * nb + j];
            for k in 0..n {
                let o = gen_off[i] + k * n * m;
                g.set_block(o, o, c);
                // ⟨E_kl ⊗ E_s0, 1 ⊗ E_x0⟩ = φ(E_lk)[s, x] = C[(l, s), (k, x)]
                for l in 0..n {
                    for s in 0..m {
                        for x in 0..m {
                            h[(o + l * m + s, x)] = c[(l * m + s, k * m + x)];
                        }
                    }
                }
            }
            col_off.push(kj);
            kj += n * module.frames[j][i].cols;
        }
        let mut f = CMatrix::zeros(big_n, kj);
        for (i, &n) in a.blocks.iter().enumerate() {
            let fr = &module.frames[j][i];
            let r = fr.cols;
            for k in 0..n {
                for t in 0..r {
                    for ls in 0..n * m {
                        f[(gen_off[i] + k * n * m + ls, col_off[i] + k * r + t)] = fr[(ls, t)];
                    }
                }
            }
        }
        let coords = f.adj_mul(&g);
        ws.push(f.adj_mul(&h));
        module.gens.push(gens);
        module.gram.push(g);
        module.basis.push(f);
        module.coords.push(coords);
        module.offsets.push(col_off);
    }

    let block_of: Vec<usize> = (0..nb).filter(|&j| module.basis[j].cols > 0).collect();
    let p = FdAlgebra { blocks: block_of.iter().map(|&j| module.basis[j].cols).collect() };
    let mut rho = CpMap::zero(a, &p);
    let mut h = CpMap::zero(&p, b);
    let mut unit_vec = Vec::with_capacity(block_of.len());
    for (pb, &j) in block_of.iter().enumerate() {
        let kj = p.blocks[pb];
        for (i, &n) in a.blocks.iter().enumerate() {
            let r = module.frames[j][i].cols;
            let off = module.offsets[j][i];
            for t in 0..r {
                let mut v = CMatrix::zeros(n, kj);
                for k in 0..n {
                    v[(k, off + k * r + t)] = C64::new(1.0, 0.0);
                }
                rho.kraus_mut(i, pb).push(v);
            }
        }
        h.kraus_mut(pb, j).push(ws[j].clone());
        unit_vec.push(ws[j].clone());
    }
    PaschkeDilation { phi: phi.clone(), p, rho, h, module, block_of, unit_vec }
}

/// `ℬᵃ(X)` the long way: the full module `X` as a vector space with the
/// trace pairing `tr⟨·,·⟩`, the right ℬ-action as operators on it, and the
/// commutant of that action recognized as a subalgebra. Dense and
/// quadratic in `dim X`, so only for small maps; `paschke` must agree with
/// it block for block.
pub fn paschke_reference_algebra(phi: &CpMap, tol: f64) -> Result<Subalgebra> {
    let (a, b) = (&phi.source, &phi.target);
    let nb = b.n_blocks();
    let table = phi.choi_table();
    // generator (j, i, k, l, s, t) = E^i_kl ⊗ E^j_st
    let mut offs = Vec::new();
    let mut big_n = 0;
    for &m in &b.blocks {
        let mut row = Vec::new();
        for &n in &a.blocks {
            row.push(big_n);
            big_n += n * n * m * m;
        }
        offs.push(row);
    }
    if big_n == 0 {
        return Err(Error::InvalidInput("empty module"));
    }
    let idx = |j: usize, i: usize, k: usize, l: usize, s: usize, t: usize| {
        let (n, m) = (a.blocks[i], b.blocks[j]);
        offs[j][i] + ((k * n + l) * m + s) * m + t
    };
    let mut g = CMatrix::zeros(big_n, big_n);
    for (j, &m) in b.blocks.iter().enumerate() {
        for (i, &n) in a.blocks.iter().enumerate() {
            let blk = table[i * nb + j].kron(&CMatrix::identity(m));
            for k in 0..n {
                let o = idx(j, i, k, 0, 0, 0);
                g.set_block(o, o, &blk);
            }
        }
    }
    let e = linalg::psd_eig(&g, tol)?;
    let thr = e.threshold(TOL_REL);
    let q = {
        let cols: Vec<Vec<C64>> = (0..e.values.len())
            .filter(|&c| e.values[c] > thr)
            .map(|c| e.basis.col(c).into_iter().map(|z| z / Float::sqrt(e.values[c])).collect())
            .collect();
        CMatrix::from_columns(big_n, &cols)
    };
    if q.cols == 0 {
        return Err(Error::InvalidInput("zero module"));
    }
    let qg = q.adj_mul(&g);
    let action = |j: usize, u: usize, v: usize| {
        let mut r = CMatrix::zeros(big_n, big_n);
        let m = b.blocks[j];
        for (i, &n) in a.blocks.iter().enumerate() {
            for k in 0..n {
                for l in 0..n {
                    for s in 0..m {
                        r[(idx(j, i, k, l, s, v), idx(j, i, k, l, s, u))] = C64::new(1.0, 0.0);
                    }
                }
            }
        }
        qg.mul(&r).mul(&q)
    };
    let mut gens = Vec::new();
    for (j, &m) in b.blocks.iter().enumerate() {
        for u in 0..m {
            for v in 0..m {
                let x = action(j, u, v);
                // trace-pairing adjoint must be the module adjoint: (·E_uv)* = ·E_vu
                let y = action(j, v, u);
                let asym = x.adjoint().dist(&y);
                if asym > tol.max(1e-12) * 1e3 {
                    return Err(Error::NotHermitian { asymmetry: asym });
                }
                gens.push(x);
            }
        }
    }
    vnalg::commutant(&gens, tol)
}

/// Minimal Stinespring dilation of `φ: 𝒜 → M_n` built on `𝒜 ⊙ ℂⁿ` modulo
/// the Gram nullspace.
pub fn stinespring_minimal(phi: &CpMap, tol: f64) -> Result<StinespringDilation> {
    if !phi.target.is_factor() {
        return Err(Error::TargetNotFactor);
    }
    let a = &phi.source;
    let n = phi.target.blocks[0];
    // generator (i, k, l, s) = E^i_kl ⊗ e_s
    let mut gen_off = Vec::new();
    let mut big_n = 0;
    for &ni in &a.blocks {
        gen_off.push(big_n);
        big_n += ni * ni * n;
    }
    let units = phi.unit_images();
    let mut unit_off = Vec::new();
    let mut acc = 0;
    for &ni in &a.blocks {
        unit_off.push(acc);
        acc += ni * ni;
    }
    let img = |i: usize, k: usize, l: usize| &units[unit_off[i] + k * a.blocks[i] + l].mats[0];
    let mut g = CMatrix::zeros(big_n, big_n);
    let mut h = CMatrix::zeros(big_n, n);
    for (i, &ni) in a.blocks.iter().enumerate() {
        for k in 0..ni {
            for l in 0..ni {
                for s in 0..n {
                    let r = gen_off[i] + (k * ni + l) * n + s;
                    // ⟨E_kl ⊗ e_s, E_kl' ⊗ e_s'⟩ = φ(E_ll')[s, s']
                    for l2 in 0..ni {
                        for s2 in 0..n {
                            g[(r, gen_off[i] + (k * ni + l2) * n + s2)] = img(i, l, l2)[(s, s2)];
                        }
                    }
                    for x in 0..n {
                        h[(r, x)] = img(i, l, k)[(s, x)];
                    }
                }
            }
        }
    }
    let e = linalg::psd_eig(&g.hermitian_part(), tol)?;
    let top = e.max_value();
    let thr = if top < 1e-12 { 1e-12 } else { TOL_REL * top };
    let kept: Vec<usize> = (0..e.values.len()).rev().filter(|&c| e.values[c] > thr).collect();
    let k_dim = kept.len();
    let f = if k_dim == 0 {
        CMatrix::zeros(big_n, 0)
    } else {
        let cols: Vec<Vec<C64>> = kept
            .iter()
            .map(|&c| e.basis.col(c).into_iter().map(|z| z / Float::sqrt(e.values[c])).collect())
            .collect();
        CMatrix::from_columns(big_n, &cols)
    };
    let fg = f.adj_mul(&g);
    let target = FdAlgebra::factor_or_zero(k_dim);
    let rho = CpMap::from_linear(
        a,
        &target,
        |x| {
            if k_dim == 0 {
                return AlgElement::zero(&target);
            }
            // left multiplication on generators: E_kl ⊗ e_s ↦ Σ_k' x[k', k] E_k'l ⊗ e_s
            let mut la = CMatrix::zeros(big_n, big_n);
            for (i, &ni) in a.blocks.iter().enumerate() {
                let xi = &x.mats[i];
                for k in 0..ni {
                    for k2 in 0..ni {
                        let z = xi[(k2, k)];
                        if z == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for ls in 0..ni * n {
                            la[(gen_off[i] + k2 * ni * n + ls, gen_off[i] + k * ni * n + ls)] = z;
                        }
                    }
                }
            }
            AlgElement::new(target.clone(), vec![fg.mul(&la).mul(&f)]).unwrap()
        },
        tol.max(1e-9),
    )?;
    Ok(StinespringDilation { k_dim, rho, v: f.adj_mul(&h), gram_rank: k_dim })
}

/// Positive functional `a ↦ tr(d a)` on `alg` from a density `d`.
pub fn functional_from_density(d: &AlgElement, tol: f64) -> Result<CpMap> {
    let one = FdAlgebra::matrix(1);
    let mut w = CpMap::zero(&d.algebra, &one);
    for (i, di) in d.mats.iter().enumerate() {
        let e = linalg::herm_eig(di, tol).map_err(|_| Error::NotPositive)?;
        if e.min_value() < -tol * e.max_value().abs().max(1.0) {
            return Err(Error::NotPositive);
        }
        for (c, &lam) in e.values.iter().enumerate() {
            if lam > e.threshold(TOL_REL) {
                let col: Vec<C64> = e.basis.col(c).into_iter().map(|z| z * Float::sqrt(lam)).collect();
                w.kraus_mut(i, 0).push(CMatrix::column(&col));
            }
        }
    }
    Ok(w)
}

/// GNS representation of a positive functional `ω: 𝒜 → ℂ`.
pub fn gns(omega: &CpMap, tol: f64) -> Result<Gns> {
    if omega.target != FdAlgebra::matrix(1) {
        return Err(Error::ShapeMismatch("a functional has target ℂ"));
    }
    let s = stinespring_minimal(omega, tol)?;
    Ok(Gns { h_dim: s.k_dim, rho: s.rho, x: s.v.col(0).into_iter().take(s.k_dim).collect() })
}

/// `φ(a) = V*(a ⊗ 1_r)V` for `φ: M_n → M_m`; returns `(r, V)` with `V` of
/// shape `n·r × m` and `r` the Choi rank.
pub fn stinespring_tensor_form(phi: &CpMap, tol: f64) -> Result<(usize, CMatrix)> {
    if !phi.target.is_factor() {
        return Err(Error::TargetNotFactor);
    }
    if !phi.source.is_factor() {
        return Err(Error::ShapeMismatch("tensor form needs a single source block"));
    }
    let (n, m) = (phi.source.blocks[0], phi.target.blocks[0]);
    let ks = cpmap::kraus_from_choi(&phi.choi(0, 0), n, m, tol.max(1e-9))?;
    let r = ks.len();
    let mut v = CMatrix::zeros(n * r, m);
    for (t, k) in ks.iter().enumerate() {
        for i in 0..n {
            for s in 0..m {
                v[(i * r + t, s)] = k[(i, s)];
            }
        }
    }
    Ok((r, v))
}

/// `σ: P′ → P` from the universal property, with its defining residuals.
#[derive(Clone, Debug)]
pub struct Mediation {
    pub sigma: CpMap,
    /// `‖σ∘ρ′ − ρ‖` on matrix units.
    pub rho_residual: f64,
    /// `‖h∘σ − h′‖` on matrix units (or random probes for large `P′`).
    pub h_residual: f64,
    /// `ρ(𝒜)·(1⊗1)·ℬ` spans the module, which pins `σ` down.
    pub unique: bool,
}

/// Solve for the mediating map out of another dilation triple of `φ`.
///
/// With `u(a ⊗ E_s0) = (ρ′(a) K e_s)_K` over the Kraus operators `K` of
/// `h′`, `u` is an isometry intertwining the left actions and
/// `σ(T) = u* T u`; its Kraus operators are read off in the module basis.
pub fn mediating_map(d: &PaschkeDilation, t: &DilationTriple, tol: f64) -> Result<Mediation> {
    let phi = &d.phi;
    if t.rho.source != phi.source || t.rho.target != t.p || t.h.source != t.p || t.h.target != phi.target {
        return Err(Error::ShapeMismatch("triple must be 𝒜 → P′ → ℬ"));
    }
    let mut rng = Rng::new(DEFAULT_SEED);
    if t.rho.nmiu_residual(&mut rng, 4) > tol.max(1e-12) * 1e2 {
        return Err(Error::InvalidInput("ρ′ is not nmiu"));
    }
    let residual = cpmap::compose(&t.h, &t.rho)?.dist(phi);
    if residual > tol {
        return Err(Error::NotADilationTriple { residual });
    }
    let a = &phi.source;
    let units = t.rho.unit_images();
    let mut unit_off = Vec::new();
    let mut acc = 0;
    for &n in &a.blocks {
        unit_off.push(acc);
        acc += n * n;
    }
    let mut sigma = CpMap::zero(&t.p, &d.p);
    for (pb, &j) in d.block_of.iter().enumerate() {
        let m = phi.target.blocks[j];
        let kj = d.p.blocks[pb];
        for (ip, &kp) in t.p.blocks.iter().enumerate() {
            for kop in t.h.kraus(ip, j) {
                let mut z = CMatrix::zeros(kp, kj);
                for (i, &n) in a.blocks.iter().enumerate() {
                    let fr = &d.module.frames[j][i];
                    let off = d.module.offsets[j][i];
                    let r = fr.cols;
                    for tt in 0..r {
                        for l in 0..n {
                            let u = CMatrix::from_fn(m, 1, |s, _| fr[(l * m + s, tt)]);
                            let ku = kop.mul(&u);
                            for k in 0..n {
                                let v = units[unit_off[i] + k * n + l].mats[ip].mul(&ku);
                                let col = off + k * r + tt;
                                for row in 0..kp {
                                    z[(row, col)] += v[(row, 0)];
                                }
                            }
                        }
                    }
                }
                sigma.kraus_mut(ip, pb).push(z);
            }
        }
    }
    let rho_residual = cpmap::compose(&sigma, &t.rho)?.dist(&d.rho);
    let h_residual = cpmap::compose(&d.h, &sigma)?.dist_probe(&t.h, &mut rng, PROBES);
    let unique = d.block_of.iter().enumerate().all(|(pb, _)| {
        let cols: Vec<CMatrix> = d.rho.unit_images().iter().map(|x| x.mats[pb].mul(&d.unit_vec[pb])).collect();
        linalg::rank(&CMatrix::hstack(&cols), TOL_REL) == d.p.blocks[pb]
    });
    Ok(Mediation { sigma, rho_residual, h_residual, unique })
}

/// The nmiu isomorphism between two dilations of the same map.
#[derive(Clone, Debug)]
pub struct DilationIso {
    /// `θ: P₁ → P₂` with `θ∘ρ₁ = ρ₂` and `h₂∘θ = h₁`.
    pub theta: CpMap,
    pub rho_residual: f64,
    pub h_residual: f64,
    pub nmiu_residual: f64,
}

impl DilationIso {
    pub fn residual(&self) -> f64 {
        self.rho_residual.max(self.h_residual).max(self.nmiu_residual)
    }
}

/// Mediating map from `d1` into the Paschke dilation `d2`, checked to be an
/// nmiu bijection.
pub fn dilation_iso(d1: &DilationTriple, d2: &PaschkeDilation, tol: f64) -> Result<DilationIso> {
    let med = mediating_map(d2, d1, tol)?;
    let theta = med.sigma;
    let mut rng = Rng::new(DEFAULT_SEED ^ 0x150);
    let nmiu_residual = theta.nmiu_residual(&mut rng, 6);
    // the kernel of a *-homomorphism is a central summand
    let faithful = (0..d1.p.n_blocks()).all(|ip| {
        let mut c = vec![0.0; d1.p.n_blocks()];
        c[ip] = 1.0;
        theta.apply(&AlgElement::central(&d1.p, &c)).unwrap().max_abs() > 0.5
    });
    if d1.p.dim() != d2.p.dim() || !faithful || nmiu_residual > tol {
        return Err(Error::NotIsomorphic("mediating map is not an nmiu bijection"));
    }
    Ok(DilationIso { theta, rho_residual: med.rho_residual, h_residual: med.h_residual, nmiu_residual })
}

/// `‖σ₂₁∘σ₁₂ − id‖` and `‖σ₁₂∘σ₂₁ − id‖` for two Paschke dilations.
pub fn mediating_round_trip(d1: &PaschkeDilation, d2: &PaschkeDilation, tol: f64) -> Result<(f64, f64)> {
    let s12 = mediating_map(d2, &d1.triple(), tol)?.sigma;
    let s21 = mediating_map(d1, &d2.triple(), tol)?.sigma;
    let mut rng = Rng::new(DEFAULT_SEED);
    let a = cpmap::compose(&s21, &s12)?.dist_probe(&CpMap::identity(&d1.p), &mut rng, PROBES);
    let b = cpmap::compose(&s12, &s21)?.dist_probe(&CpMap::identity(&d2.p), &mut rng, PROBES);
    Ok((a, b))
}

#[derive(Clone, Debug)]
pub struct Injectivity {
    /// `⌈ρ⌉`, the image of `ρ` in `𝒜`.
    pub ceil_rho: AlgElement,
    /// `⌈⌈φ⌉⌉`, the central carrier of the image of `φ`.
    pub cceil_phi: AlgElement,
    pub residual: f64,
    pub equal: bool,
}

pub fn injectivity_check(d: &PaschkeDilation, tol: f64) -> Result<Injectivity> {
    let ceil_rho = d.rho.image();
    let cceil_phi = vnalg::central_carrier(&d.phi.image(), tol)?;
    let residual = ceil_rho.dist(&cceil_phi);
    Ok(Injectivity { equal: residual <= tol, ceil_rho, cceil_phi, residual })
}

/// Commutant of `ρ(𝒜)` inside each block of `P`.
pub fn rho_commutant(d: &PaschkeDilation, tol: f64) -> Result<Vec<Subalgebra>> {
    let images = d.rho.unit_images();
    (0..d.p.n_blocks())
        .map(|pb| {
            let gens: Vec<CMatrix> = images.iter().map(|x| x.mats[pb].clone()).collect();
            vnalg::commutant(&gens, tol)
        })
        .collect()
}

/// Embedded commutant elements as elements of `P`, one per block matrix unit.
fn commutant_units(d: &PaschkeDilation, comm: &[Subalgebra]) -> Vec<AlgElement> {
    let mut out = Vec::new();
    for (pb, c) in comm.iter().enumerate() {
        for u in c.matrix_units() {
            out.push(AlgElement::from_fn(&d.p, |q, k| if q == pb { u.clone() } else { CMatrix::zeros(k, k) }));
        }
    }
    out
}

/// `a ↦ h(t ρ(a))` as a linear map, returned as its matrix-unit images.
fn phi_t_images(d: &PaschkeDilation, t: &AlgElement) -> Vec<AlgElement> {
    d.rho.unit_images().iter().map(|r| d.h.apply(&t.mul(r)).unwrap()).collect()
}

/// `φ_t` for an effect `t` of `ρ(𝒜)□`, built from its action so that a
/// non-CP result is rejected rather than assumed away.
pub fn phi_t(d: &PaschkeDilation, t: &AlgElement, tol: f64) -> Result<CpMap> {
    CpMap::from_linear(&d.phi.source, &d.phi.target, |a| d.h.apply(&t.mul(&d.rho.apply(a).unwrap())).unwrap(), tol)
}

/// Recover `t ∈ ρ(𝒜)□` from `ψ = φ_t`: the `ψ`-Gram of the module
/// generators, read in `φ`'s orthonormal basis.
pub fn radon_nikodym(d: &PaschkeDilation, psi: &CpMap) -> AlgElement {
    let nb = d.phi.target.n_blocks();
    let table = psi.choi_table();
    AlgElement::from_fn(&d.p, |pb, _| {
        let j = d.block_of[pb];
        let m = d.phi.target.blocks[j];
        let mut g = CMatrix::zeros(d.module.gram[j].rows, d.module.gram[j].cols);
        let mut o = 0;
        for (i, &n) in d.phi.source.blocks.iter().enumerate() {
            for _ in 0..n {
                g.set_block(o, o, &table[i * nb + j]);
                o += n * m;
            }
        }
        g.congruence(&d.module.basis[j])
    })
}

/// Sampled check that `t ↦ φ_t` is a linear order isomorphism from the unit
/// interval of `ρ(𝒜)□` onto `[0, φ]` in the ncp order.
pub fn order_correspondence(d: &PaschkeDilation, samples: usize, seed: u64, tol: f64) -> Result<Report> {
    let comm = rho_commutant(d, tol)?;
    let mut rng = Rng::new(seed);
    let scale = d.phi.unit_image().max_abs().max(1.0);
    let mut rep = Report::new();

    let mut unit = LawCheck::new("phi_one_is_phi");
    let one = phi_t(d, &AlgElement::one(&d.p), tol)?;
    let r = one.dist(&d.phi);
    unit.observe(r, tol, || format!("‖φ_1 − φ‖ = {r:e}"));
    let lam = 0.375;
    let r = phi_t(d, &AlgElement::scalar(&d.p, lam), tol)?.dist(&d.phi.scale(lam));
    unit.observe(r, tol, || format!("‖φ_λ − λφ‖ = {r:e}"));
    rep.push(unit);

    let units = commutant_units(d, &comm);
    let mut inj = LawCheck::new("injective");
    let cols: Vec<Vec<C64>> =
        units.iter().map(|u| phi_t_images(d, u).into_iter().flat_map(flatten).collect()).collect();
    let rows = cols.first().map_or(0, Vec::len);
    let rank = if cols.is_empty() { 0 } else { linalg::rank(&CMatrix::from_columns(rows, &cols), TOL_REL) };
    inj.holds(rank == units.len(), || format!("rank {rank} < dim ρ(𝒜)□ = {}", units.len()));

    let mut ncp = LawCheck::new("phi_t_ncp");
    let mut below = LawCheck::new("phi_t_below_phi");
    let mut order = LawCheck::new("order_preserving");
    let mut rt = LawCheck::new("round_trip");
    let mut seen: Vec<(AlgElement, CpMap)> = Vec::new();
    for trial in 0..samples {
        let t = sample_commutant_effect(d, &comm, &mut rng);
        let c = sample_commutant_effect(d, &comm, &mut rng);
        let sq = t.sqrt(tol)?;
        let t1 = sq.mul(&c).mul(&sq);
        let ft = match phi_t(d, &t, tol) {
            Ok(f) => f,
            Err(e) => {
                ncp.holds(false, || format!("trial {trial}: φ_t rejected: {e}"));
                continue;
            }
        };
        ncp.holds(true, String::new);
        let gap = ft.ncp_gap(&d.phi);
        below.observe((-gap).max(0.0), tol * scale, || format!("trial {trial}: λ_min(φ − φ_t) = {gap:e}"));
        match phi_t(d, &t1, tol) {
            Ok(f1) => {
                let gap = f1.ncp_gap(&ft);
                order.observe((-gap).max(0.0), tol * scale, || format!("trial {trial}: λ_min(φ_t − φ_t1) = {gap:e}"));
            }
            Err(e) => order.holds(false, || format!("trial {trial}: φ_t1 rejected: {e}")),
        }
        let back = radon_nikodym(d, &ft);
        let r = back.dist(&t);
        rt.observe(r, 1e-7_f64.max(tol), || format!("trial {trial}: ‖W*W − t‖ = {r:e}"));
        // distinct samples must give distinct maps
        for (s, fs) in &seen {
            let dt = s.dist(&t);
            if dt > 1e-6 {
                inj.holds(fs.dist(&ft) > 1e-9 * dt, || format!("trial {trial}: φ_t coincides for distinct t"));
            }
        }
        if seen.len() < 8 {
            seen.push((t, ft));
        }
    }
    rep.push(ncp);
    rep.push(below);
    rep.push(order);
    rep.push(inj);
    rep.push(rt);
    Ok(rep)
}

fn sample_commutant_effect(d: &PaschkeDilation, comm: &[Subalgebra], rng: &mut Rng) -> AlgElement {
    let parts: Vec<CMatrix> = comm
        .iter()
        .map(|c| c.embed_element(&AlgElement::random_effect(&c.structure, rng)).hermitian_part())
        .collect();
    AlgElement::new(d.p.clone(), parts).unwrap()
}

/// The tensor of two dilations together with the witness that it is
/// isomorphic to the directly computed dilation of `φ₁ ⊗ φ₂`.
#[derive(Clone, Debug)]
pub struct TensorDilation {
    pub triple: DilationTriple,
    pub direct: PaschkeDilation,
    pub iso: DilationIso,
}

pub fn dilation_tensor(d1: &PaschkeDilation, d2: &PaschkeDilation, tol: f64) -> Result<TensorDilation> {
    let triple = DilationTriple {
        p: d1.p.tensor(&d2.p),
        rho: cpmap::tensor(&d1.rho, &d2.rho),
        h: cpmap::tensor(&d1.h, &d2.h),
    };
    let direct = paschke(&cpmap::tensor(&d1.phi, &d2.phi));
    let iso = dilation_iso(&triple, &direct, tol)?;
    Ok(TensorDilation { triple, direct, iso })
}

/// `h` is injective on `ρ(𝒜)□`, which characterizes ncp-extreme maps.
pub fn ncp_extreme_check(phi: &CpMap, tol: f64) -> Result<bool> {
    let d = paschke(phi);
    if d.p.n_blocks() == 0 {
        return Ok(true);
    }
    let comm = rho_commutant(&d, tol)?;
    let units = commutant_units(&d, &comm);
    let cols: Vec<Vec<C64>> = units.iter().map(|u| flatten(d.h.apply(u).unwrap())).collect();
    let rank = linalg::rank(&CMatrix::from_columns(d.phi.target.dim(), &cols), TOL_REL);
    Ok(rank == units.len())
}

/// Basic facts: the dilation of `λφ` is `(P, ρ, λh)`, that of the pair
/// `c ↦ (φ₁(c), φ₂(c))` is the blockwise `(P₁ ⊕ P₂, (ρ₁, ρ₂), h₁ ⊕ h₂)`,
/// and an nmiu `φ` dilates as `(ℬ, φ, id)`.
pub fn paschke_basics(phi1: &CpMap, phi2: &CpMap, lambda: f64, tol: f64) -> Result<Report> {
    let mut rep = Report::new();
    let d1 = paschke(phi1);
    let d2 = paschke(phi2);

    let mut c = LawCheck::new("scaled");
    let t = DilationTriple { p: d1.p.clone(), rho: d1.rho.clone(), h: d1.h.scale(lambda) };
    match dilation_iso(&t, &paschke(&phi1.scale(lambda)), tol) {
        Ok(iso) => c.observe(iso.residual(), tol, || "iso residual above tolerance".into()),
        Err(e) => c.holds(false, || format!("{e}")),
    }
    rep.push(c);

    let mut c = LawCheck::new("pair_blockwise");
    let t = DilationTriple {
        p: d1.p.dirsum(&d2.p),
        rho: cpmap::pair_target(&d1.rho, &d2.rho)?,
        h: cpmap::dirsum(&d1.h, &d2.h),
    };
    match dilation_iso(&t, &paschke(&cpmap::pair_target(phi1, phi2)?), tol) {
        Ok(iso) => c.observe(iso.residual(), tol, || "iso residual above tolerance".into()),
        Err(e) => c.holds(false, || format!("{e}")),
    }
    rep.push(c);

    if phi1.is_nmiu(tol) {
        let mut c = LawCheck::new("nmiu_dilates_itself");
        let t = DilationTriple { p: phi1.target.clone(), rho: phi1.clone(), h: CpMap::identity(&phi1.target) };
        match dilation_iso(&t, &d1, tol) {
            Ok(iso) => c.observe(iso.residual(), tol, || "iso residual above tolerance".into()),
            Err(e) => c.holds(false, || format!("{e}")),
        }
        rep.push(c);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmap::Normalization;
    use crate::rng::Rng;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_unital(src: &[usize], tgt: &[usize], k: usize, seed: u64) -> CpMap {
        let mut rng = Rng::new(seed);
        CpMap::random(&FdAlgebra { blocks: src.to_vec() }, &FdAlgebra { blocks: tgt.to_vec() }, k, Normalization::Unital, &mut rng)
    }

    fn measurement() -> CpMap {
        let mut f = CpMap::zero(&FdAlgebra::commutative(2), &FdAlgebra::matrix(2));
        f.kraus_mut(0, 0).push(CMatrix::from_vec(1, 2, vec![c(1.0), c(0.0)]));
        f.kraus_mut(1, 0).push(CMatrix::from_vec(1, 2, vec![c(0.0), c(1.0)]));
        f
    }

    fn depolarizing() -> CpMap {
        let half = CMatrix::identity(2).scale_re(0.5);
        CpMap::from_linear(
            &FdAlgebra::matrix(2),
            &FdAlgebra::matrix(2),
            |a| AlgElement::new(FdAlgebra::matrix(2), vec![half.scale(a.mats[0].trace())]).unwrap(),
            TOL,
        )
        .unwrap()
    }

    /// `a ↦ p a p` onto the corner, with one block per block where `p ≠ 0`.
    fn corner(p: &AlgElement) -> CpMap {
        let mut us = Vec::new();
        for (i, pi) in p.mats.iter().enumerate() {
            let u = linalg::range_basis(pi, 1e-9);
            if u.cols > 0 {
                us.push((i, u));
            }
        }
        let tgt = FdAlgebra { blocks: us.iter().map(|(_, u)| u.cols).collect() };
        let mut f = CpMap::zero(&p.algebra, &tgt);
        for (jb, (i, u)) in us.into_iter().enumerate() {
            f.kraus_mut(i, jb).push(u);
        }
        f
    }

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    #[test]
    fn gns_examples() {
        let m2 = FdAlgebra::matrix(2);
        let pure = functional_from_density(&AlgElement::new(m2.clone(), vec![CMatrix::diag_real(&[1.0, 0.0])]).unwrap(), TOL).unwrap();
        let g = gns(&pure, TOL).unwrap();
        assert_eq!(g.h_dim, 2);
        let x = CMatrix::column(&g.x);
        for (idx, img) in g.rho.unit_images().iter().enumerate() {
            let lhs = img.mats[0].congruence(&x)[(0, 0)];
            let rhs = pure.unit_images()[idx].mats[0][(0, 0)];
            assert!((lhs - rhs).norm() < 1e-10);
        }
        assert!((x.adj_mul(&x)[(0, 0)].re - 1.0).abs() < 1e-10);

        let zero = CpMap::zero(&m2, &FdAlgebra::matrix(1));
        assert_eq!(gns(&zero, TOL).unwrap().h_dim, 0);

        let mixed = functional_from_density(&AlgElement::scalar(&m2, 0.5), TOL).unwrap();
        assert_eq!(gns(&mixed, TOL).unwrap().h_dim, 4);
    }

    #[test]
    fn non_positive_density_rejected() {
        let d = AlgElement::new(FdAlgebra::matrix(2), vec![CMatrix::diag_real(&[1.0, -0.5])]).unwrap();
        assert_eq!(functional_from_density(&d, TOL).unwrap_err(), Error::NotPositive);
    }

    #[test]
    fn stinespring_identity_and_measurement() {
        let id = CpMap::identity(&FdAlgebra::matrix(2));
        let s = stinespring_minimal(&id, TOL).unwrap();
        assert_eq!(s.k_dim, 2);
        assert!(s.v.mul(&s.v.adjoint()).dist(&CMatrix::identity(2)) < 1e-10);
        assert!(s.rho.is_nmiu(1e-9));

        let s = stinespring_minimal(&measurement(), TOL).unwrap();
        assert_eq!(s.k_dim, 2);
        // ρ(λ, μ) has spectrum {λ, μ}
        let r = s.rho.apply(&AlgElement::central(&FdAlgebra::commutative(2), &[0.25, 0.75])).unwrap();
        let e = linalg::herm_eig(&r.mats[0], TOL).unwrap();
        assert!((e.values[0] - 0.25).abs() < 1e-10 && (e.values[1] - 0.75).abs() < 1e-10);
    }

    #[test]
    fn stinespring_random_unital() {
        for seed in 0..6 {
            let phi = random_unital(&[3], &[2], 2, seed);
            let s = stinespring_minimal(&phi, TOL).unwrap();
            assert!(s.v.adj_mul(&s.v).dist(&CMatrix::identity(2)) < 1e-9);
            let lifted = s.lifted();
            assert!(cpmap::compose(&lifted.h, &lifted.rho).unwrap().dist(&phi) < 1e-9);
            assert_eq!(s.cyclic_rank(), s.k_dim);
            // Gram rank oracle: Σ_i n_i · rank C_i
            let oracle = 3 * linalg::rank(&phi.choi(0, 0), 1e-9);
            assert_eq!(s.k_dim, oracle);
        }
    }

    #[test]
    fn stinespring_rejects_multi_block_target() {
        let phi = random_unital(&[2], &[1, 1], 1, 3);
        assert_eq!(stinespring_minimal(&phi, TOL).unwrap_err(), Error::TargetNotFactor);
    }

    #[test]
    fn tensor_form_examples() {
        let (r, v) = stinespring_tensor_form(&CpMap::identity(&FdAlgebra::matrix(2)), TOL).unwrap();
        assert_eq!(r, 1);
        assert!(v.adj_mul(&v).dist(&CMatrix::identity(2)) < 1e-10);

        let dep = depolarizing();
        let (r, v) = stinespring_tensor_form(&dep, TOL).unwrap();
        assert_eq!(r, linalg::rank(&dep.choi(0, 0), 1e-9));
        assert_eq!(r, 4);
        let lifted = CpMap::ad(&v);
        let f = CpMap::from_linear(
            &FdAlgebra::matrix(2),
            &FdAlgebra::matrix(2),
            |a| lifted.apply(&AlgElement::new(FdAlgebra::matrix(8), vec![a.mats[0].kron(&CMatrix::identity(4))]).unwrap()).unwrap(),
            TOL,
        )
        .unwrap();
        assert!(f.dist(&dep) < 1e-9);

        // measure in the computational basis, then prepare |+⟩ or |−⟩
        let mr = CpMap::from_linear(
            &FdAlgebra::matrix(2),
            &FdAlgebra::matrix(2),
            |a| {
                let x = &a.mats[0];
                let plus = (x[(0, 0)] + x[(1, 1)] + x[(0, 1)] + x[(1, 0)]) * 0.5;
                let minus = (x[(0, 0)] + x[(1, 1)] - x[(0, 1)] - x[(1, 0)]) * 0.5;
                AlgElement::new(FdAlgebra::matrix(2), vec![CMatrix::from_vec(2, 2, vec![plus, c(0.0), c(0.0), minus])]).unwrap()
            },
            TOL,
        )
        .unwrap();
        let (r, v) = stinespring_tensor_form(&mr, TOL).unwrap();
        for (i, k, l) in FdAlgebra::matrix(2).matrix_units() {
            let _ = i;
            let a = CMatrix::unit(2, k, l);
            let got = a.kron(&CMatrix::identity(r)).congruence(&v);
            let want = mr.apply(&AlgElement::matrix_unit(&FdAlgebra::matrix(2), 0, k, l)).unwrap();
            assert!(got.dist(&want.mats[0]) < 1e-9);
        }
    }

    #[test]
    fn paschke_invariants_on_mixed_blocks() {
        for seed in 0..4 {
            let phi = random_unital(&[2, 1], &[2, 3], 2, 100 + seed);
            let d = paschke(&phi);
            let rep = d.verify(1e-9);
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn paschke_matches_dense_commutant() {
        let maps = [
            random_unital(&[2], &[2], 2, 7),
            random_unital(&[2, 1], &[2], 1, 8),
            measurement(),
            CpMap::identity(&FdAlgebra { blocks: vec![2, 2] }),
        ];
        for phi in &maps {
            let d = paschke(phi);
            let reference = paschke_reference_algebra(phi, 1e-9).unwrap();
            assert_eq!(sorted(reference.structure.blocks.clone()), sorted(d.p.blocks.clone()));
        }
    }

    #[test]
    fn nmiu_map_dilates_itself() {
        let u = Rng::new(5).unitary(2);
        let mut phi = CpMap::ad(&u);
        phi = cpmap::dirsum(&phi, &CpMap::identity(&FdAlgebra::commutative(1)));
        let d = paschke(&phi);
        assert_eq!(d.p.blocks, vec![2, 1]);
        let t = DilationTriple { p: phi.target.clone(), rho: phi.clone(), h: CpMap::identity(&phi.target) };
        let iso = dilation_iso(&t, &d, 1e-9).unwrap();
        assert!(iso.residual() < 1e-9);
    }

    #[test]
    fn faithful_state_dilates_to_m4() {
        let w = functional_from_density(&AlgElement::new(FdAlgebra::matrix(2), vec![CMatrix::diag_real(&[0.3, 0.7])]).unwrap(), TOL).unwrap();
        let d = paschke(&w);
        assert_eq!(d.p.blocks, vec![4]);
        // h is a vector state: one Kraus column
        assert_eq!(d.h.kraus(0, 0).len(), 1);
        assert_eq!(d.h.kraus(0, 0)[0].cols, 1);
    }

    #[test]
    fn corner_dilates_to_central_carrier() {
        let a = FdAlgebra { blocks: vec![2, 3] };
        let mut rng = Rng::new(11);
        let mut p = AlgElement::zero(&a);
        p.mats[1] = rng.projection_of_rank(3, 2);
        let hp = corner(&p);
        let d = paschke(&hp);
        assert_eq!(d.p.blocks, vec![3]);
        let cc = vnalg::central_carrier(&p, 1e-9).unwrap();
        assert!(cc.dist(&AlgElement::central(&a, &[0.0, 1.0])) < 1e-9);
        // triple (⌈⌈p⌉⌉𝒜, cut to the carrier, compression) is isomorphic
        let carrier = FdAlgebra::matrix(3);
        let mut cut = CpMap::zero(&a, &carrier);
        cut.kraus_mut(1, 0).push(CMatrix::identity(3));
        let mut comp = CpMap::zero(&carrier, &hp.target);
        comp.kraus_mut(0, 0).push(hp.kraus(1, 0)[0].clone());
        let t = DilationTriple { p: carrier, rho: cut, h: comp };
        assert!(dilation_iso(&t, &d, 1e-9).unwrap().residual() < 1e-9);
    }

    #[test]
    fn mediating_map_from_itself_is_identity() {
        let phi = random_unital(&[2, 1], &[2], 2, 21);
        let d = paschke(&phi);
        let m = mediating_map(&d, &d.triple(), 1e-8).unwrap();
        assert!(m.unique);
        assert!(m.sigma.dist(&CpMap::identity(&d.p)) < 1e-9);
    }

    #[test]
    fn inflated_triple_projects_onto_first_summand() {
        let phi = random_unital(&[2], &[2], 2, 22);
        let d = paschke(&phi);
        let t = DilationTriple {
            p: d.p.dirsum(&d.p),
            rho: cpmap::pair_target(&d.rho, &d.rho).unwrap(),
            h: cpmap::cotuple_source(&d.h, &CpMap::zero(&d.p, &phi.target)).unwrap(),
        };
        let m = mediating_map(&d, &t, 1e-8).unwrap();
        assert!(m.rho_residual < 1e-9 && m.h_residual < 1e-9);
        assert!(m.sigma.dist(&cpmap::coprojection_first(&d.p, &d.p)) < 1e-9);
    }

    #[test]
    fn not_a_dilation_triple() {
        let phi = random_unital(&[2], &[2], 2, 23);
        let d = paschke(&phi);
        let mut t = d.triple();
        t.h = t.h.scale(0.5);
        assert!(matches!(mediating_map(&d, &t, 1e-8), Err(Error::NotADilationTriple { .. })));
    }

    #[test]
    fn conjugated_dilation_iso_is_the_conjugation() {
        let phi = random_unital(&[2], &[2], 2, 24);
        let d = paschke(&phi);
        let u = Rng::new(9).unitary(d.p.blocks[0]);
        let ad_u = CpMap::ad(&u);
        let ad_us = CpMap::ad(&u.adjoint());
        let t = DilationTriple {
            p: d.p.clone(),
            rho: cpmap::compose(&ad_u, &d.rho).unwrap(),
            h: cpmap::compose(&d.h, &ad_us).unwrap(),
        };
        let iso = dilation_iso(&t, &d, 1e-8).unwrap();
        assert!(iso.theta.dist(&ad_us) < 1e-8);
    }

    #[test]
    fn stinespring_is_paschke() {
        for (src, seed) in [(vec![2], 31), (vec![1, 1], 32), (vec![2, 1], 33)] {
            let phi = random_unital(&src, &[2], 2, seed);
            let s = stinespring_minimal(&phi, TOL).unwrap();
            let d = paschke(&phi);
            let iso = dilation_iso(&s.lifted(), &d, 1e-8).unwrap();
            assert!(iso.residual() < 1e-8, "{}", iso.residual());
        }
    }

    #[test]
    fn mediating_maps_invert_each_other() {
        let phi = random_unital(&[2], &[2], 2, 41);
        // same map, Kraus family rotated by a unitary
        let w = Rng::new(4).unitary(2);
        let ks = phi.kraus(0, 0);
        let mixed: Vec<CMatrix> =
            (0..2).map(|r| ks[0].scale(w[(r, 0)]).add(&ks[1].scale(w[(r, 1)]))).collect();
        let psi = CpMap::between_factors(2, 2, mixed).unwrap();
        assert!(psi.dist(&phi) < 1e-12);
        let (a, b) = mediating_round_trip(&paschke(&phi), &paschke(&psi), 1e-8).unwrap();
        assert!(a < 1e-9 && b < 1e-9);
    }

    #[test]
    fn injectivity_examples() {
        let w = functional_from_density(&AlgElement::scalar(&FdAlgebra::matrix(2), 0.5), TOL).unwrap();
        let inj = injectivity_check(&paschke(&w), TOL).unwrap();
        assert!(inj.equal && inj.ceil_rho.dist(&AlgElement::one(&w.source)) < TOL);

        let a = FdAlgebra { blocks: vec![2, 3] };
        let proj = cpmap::coprojection_first(&FdAlgebra::matrix(2), &FdAlgebra::matrix(3));
        let inj = injectivity_check(&paschke(&proj), TOL).unwrap();
        assert!(inj.equal);
        assert!(inj.ceil_rho.dist(&AlgElement::central(&a, &[1.0, 0.0])) < TOL);

        let zero = CpMap::zero(&a, &FdAlgebra::matrix(2));
        let d = paschke(&zero);
        assert_eq!(d.p.n_blocks(), 0);
        let inj = injectivity_check(&d, TOL).unwrap();
        assert!(inj.equal && inj.ceil_rho.max_abs() < TOL);
    }

    #[test]
    fn order_correspondence_cases() {
        let id = CpMap::identity(&FdAlgebra { blocks: vec![2, 2] });
        let d = paschke(&id);
        let comm = rho_commutant(&d, TOL).unwrap();
        assert!(comm.iter().all(|c| c.structure.blocks == vec![1]));
        let t = AlgElement::central(&d.p, &[0.25, 0.5]);
        let ft = phi_t(&d, &t, TOL).unwrap();
        let x = AlgElement::random(&id.source, &mut Rng::new(2));
        let want = AlgElement::new(id.source.clone(), vec![x.mats[0].scale_re(0.25), x.mats[1].scale_re(0.5)]).unwrap();
        assert!(ft.apply(&x).unwrap().dist(&want) < 1e-9);

        for phi in [id, random_unital(&[2], &[2], 2, 51)] {
            let d = paschke(&phi);
            let rep = order_correspondence(&d, 10, 3, 1e-9).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn tensor_of_dilations() {
        let id = CpMap::identity(&FdAlgebra::matrix(2));
        let td = dilation_tensor(&paschke(&id), &paschke(&id), 1e-8).unwrap();
        assert_eq!(td.direct.p.blocks, vec![4]);

        let w = functional_from_density(&AlgElement::scalar(&FdAlgebra::matrix(2), 0.5), TOL).unwrap();
        let td = dilation_tensor(&paschke(&w), &paschke(&id), 1e-8).unwrap();
        assert_eq!(td.triple.p.blocks, vec![8]);

        let f1 = random_unital(&[2], &[2], 2, 61);
        let f2 = random_unital(&[2], &[2], 2, 62);
        let td = dilation_tensor(&paschke(&f1), &paschke(&f2), 1e-7).unwrap();
        assert!(td.iso.residual() < 1e-7);
    }

    #[test]
    fn ncp_extreme_examples() {
        let mut rng = Rng::new(71);
        let (u1, u2) = (rng.unitary(2), rng.unitary(2));
        assert!(ncp_extreme_check(&CpMap::ad(&u1), TOL).unwrap());
        let mix = CpMap::ad(&u1).scale(0.5).add(&CpMap::ad(&u2).scale(0.5)).unwrap();
        assert!(!ncp_extreme_check(&mix, TOL).unwrap());
        let v = rng.ginibre(3, 2);
        assert!(ncp_extreme_check(&CpMap::ad(&v), TOL).unwrap());
    }

    #[test]
    fn basics_suite() {
        let u = Rng::new(81).unitary(2);
        let rep = paschke_basics(&CpMap::ad(&u), &random_unital(&[2], &[1, 2], 2, 82), 0.3, 1e-8).unwrap();
        assert_eq!(rep.checks.len(), 3);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn h_after_rho_is_phi(seed in any::<u64>(), k in 1usize..3) {
            let mut rng = Rng::new(seed);
            let a = FdAlgebra { blocks: vec![2, 1] };
            let b = FdAlgebra { blocks: vec![1, 2] };
            let phi = CpMap::random(&a, &b, k, Normalization::None, &mut rng);
            let d = paschke(&phi);
            let r = cpmap::compose(&d.h, &d.rho).unwrap().dist(&phi);
            prop_assert!(r <= 1e-9 * phi.unit_image().max_abs().max(1.0));
            prop_assert!(d.rho.is_nmiu(1e-9));
        }
    }
}
