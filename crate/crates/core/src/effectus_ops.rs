//! The effectus calculus on `op vN` at finite dimension.
//!
//! Maps are stored in the Heisenberg direction, so an effectus arrow
//! `X → Y` is a `CpMap` from the algebra of `Y` to that of `X`, and the
//! effectus composite `g ∘ f` (f first) is `cpmap::compose(f, g)`.
//! Predicates on the domain of `f` live in `f.target`; `1 ∘ f` is `f(1)`.

use alloc::format;
use alloc::vec::Vec;

use crate::cpmap::{self, flatten, CpMap};
use crate::dilation;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::report::{LawCheck, Report};
use crate::rng::Rng;
use crate::vnalg::{self, AlgElement, FdAlgebra};
use crate::TOL_REL;

/// Smallest singular value a solved standard-form map must clear to count
/// as invertible.
pub const INVERTIBILITY_THRESHOLD: f64 = 1e-8;

fn require_effect(p: &AlgElement, tol: f64) -> Result<()> {
    if p.is_effect(tol) {
        Ok(())
    } else {
        Err(Error::NotEffect)
    }
}

fn require_projection(s: &AlgElement, tol: f64) -> Result<()> {
    if s.is_projection(tol) {
        Ok(())
    } else {
        Err(Error::NotSharp)
    }
}

/// `b ↦ √p b √p`.
pub fn asrt(p: &AlgElement, tol: f64) -> Result<CpMap> {
    require_effect(p, tol)?;
    let root = p.sqrt(tol)?;
    let mut f = CpMap::zero(&p.algebra, &p.algebra);
    for (i, r) in root.mats.into_iter().enumerate() {
        f.kraus_mut(i, i).push(r);
    }
    Ok(f)
}

/// `p & q = √p q √p`.
pub fn seqprod(p: &AlgElement, q: &AlgElement, tol: f64) -> Result<AlgElement> {
    require_effect(p, tol)?;
    require_effect(q, tol)?;
    let r = p.sqrt(tol)?;
    Ok(r.mul(q).mul(&r).map(CMatrix::hermitian_part))
}

/// The unique effect `q` with `q & q = p`.
pub fn sqrt_effect(p: &AlgElement, tol: f64) -> Result<AlgElement> {
    require_effect(p, tol)?;
    p.sqrt(tol)
}

/// Sequential product used by the dagger suite; swappable for fault tests.
pub type SeqProdFn = fn(&AlgElement, &AlgElement, f64) -> Result<AlgElement>;

/// Per source block, an isometry onto the range of the projection `s`;
/// blocks where `s = 0` are skipped.
fn range_isometries(s: &AlgElement) -> Vec<(usize, CMatrix)> {
    s.mats
        .iter()
        .enumerate()
        .filter_map(|(i, si)| {
            let u = linalg::range_basis(si, TOL_REL);
            (u.cols > 0).then_some((i, u))
        })
        .collect()
}

/// `⌊p⌋𝒜⌊p⌋` with the comprehension `π: b ↦ ⌊p⌋b⌊p⌋`.
#[derive(Clone, Debug)]
pub struct CornerPresentation {
    pub p: AlgElement,
    pub floor_p: AlgElement,
    pub corner_alg: FdAlgebra,
    /// `𝒜 → corner_alg`, Kraus `u` per block; total.
    pub pi: CpMap,
    /// `(source block, u)` with `u u* = ⌊p⌋` on that block.
    pub embed: Vec<(usize, CMatrix)>,
}

impl CornerPresentation {
    /// `ζ`-style embedding `corner_alg → 𝒜`, `x ↦ u x u*`.
    pub fn inclusion(&self) -> CpMap {
        let mut f = CpMap::zero(&self.corner_alg, &self.p.algebra);
        for (jb, (i, u)) in self.embed.iter().enumerate() {
            f.kraus_mut(jb, *i).push(u.adjoint());
        }
        f
    }
}

pub fn standard_corner(p: &AlgElement, tol: f64) -> Result<CornerPresentation> {
    require_effect(p, tol)?;
    let floor_p = p.floor(tol)?;
    let embed = range_isometries(&floor_p);
    let corner_alg = FdAlgebra { blocks: embed.iter().map(|(_, u)| u.cols).collect() };
    let mut pi = CpMap::zero(&p.algebra, &corner_alg);
    for (jb, (i, u)) in embed.iter().enumerate() {
        pi.kraus_mut(*i, jb).push(u.clone());
    }
    Ok(CornerPresentation { p: p.clone(), floor_p, corner_alg, pi, embed })
}

/// The unique `f′` with `f′ ∘ π = f` for `f` with `f(p) = f(1)`; here
/// `f′(x) = f(u x u*)`.
pub fn corner_factor(c: &CornerPresentation, f: &CpMap, tol: f64) -> Result<CpMap> {
    if f.source != c.p.algebra {
        return Err(Error::ShapeMismatch("map must start at the corner's algebra"));
    }
    let gap = f.apply(&c.p)?.dist(&f.unit_image());
    if gap > tol {
        return Err(Error::UniversalPropertyViolated { residual: gap });
    }
    let g = cpmap::compose(f, &c.inclusion())?;
    let residual = cpmap::compose(&g, &c.pi)?.dist(f);
    if residual > tol.max(1e-12) * 1e2 {
        return Err(Error::UniversalPropertyViolated { residual });
    }
    Ok(g)
}

/// `c_b: ⌈b⌉ℬ⌈b⌉ → ℬ`, `x ↦ √b x √b`.
#[derive(Clone, Debug)]
pub struct FilterPresentation {
    pub b: AlgElement,
    pub ceil_b: AlgElement,
    pub filter_alg: FdAlgebra,
    pub c: CpMap,
    pub embed: Vec<(usize, CMatrix)>,
}

pub fn standard_filter(b: &AlgElement, tol: f64) -> Result<FilterPresentation> {
    require_effect(b, tol)?;
    let ceil_b = b.ceil(tol)?;
    let embed = range_isometries(&ceil_b);
    let filter_alg = FdAlgebra { blocks: embed.iter().map(|(_, u)| u.cols).collect() };
    let root = b.sqrt(tol)?;
    let mut c = CpMap::zero(&filter_alg, &b.algebra);
    for (jb, (i, u)) in embed.iter().enumerate() {
        c.kraus_mut(jb, *i).push(u.adjoint().mul(&root.mats[*i]));
    }
    Ok(FilterPresentation { b: b.clone(), ceil_b, filter_alg, c, embed })
}

/// The unique `f′` with `c_b ∘ f′ = f` for `f` with `f(1) ≤ b`; here
/// `f′(y) = u* √b⁺ f(y) √b⁺ u`.
pub fn filter_factor(fp: &FilterPresentation, f: &CpMap, tol: f64) -> Result<CpMap> {
    if f.target != fp.b.algebra {
        return Err(Error::ShapeMismatch("map must end at the filter's algebra"));
    }
    let one = f.unit_image();
    if !one.le(&fp.b, tol) {
        let excess = fp.b.sub(&one).mats.iter().fold(0.0f64, |m, x| m.max(-linalg::min_eig(x)));
        return Err(Error::UniversalPropertyViolated { residual: excess });
    }
    let root_inv = fp.b.sqrt(tol)?.pinv(tol);
    let mut g = CpMap::zero(&f.source, &fp.filter_alg);
    for i in 0..f.source.n_blocks() {
        for (jb, (j, u)) in fp.embed.iter().enumerate() {
            let w = root_inv.mats[*j].mul(u);
            *g.kraus_mut(i, jb) = f.kraus(i, *j).iter().map(|v| v.mul(&w)).collect();
        }
    }
    let residual = cpmap::compose(&fp.c, &g)?.dist(f);
    if residual > tol.max(1e-12) * 1e3 {
        return Err(Error::UniversalPropertyViolated { residual });
    }
    Ok(g)
}

/// Filters are injective: the superoperator of `c_b` has full column rank.
pub fn filter_injective(fp: &FilterPresentation) -> bool {
    fp.filter_alg.dim() == 0 || linalg::rank(&fp.c.superop(), TOL_REL) == fp.filter_alg.dim()
}

/// Pure iff `ρ` of the Paschke dilation is surjective.
pub fn is_pure(f: &CpMap) -> bool {
    let d = dilation::paschke(f);
    if d.p.dim() == 0 {
        return true;
    }
    linalg::rank(&d.rho.superop(), TOL_REL) == d.p.dim()
}

/// `f = π_{im f} ∘ α ∘ ζ_{⌈1∘f⌉} ∘ asrt_{1∘f}` in effectus order; in the
/// Heisenberg direction `f = asrt ∘ ζ ∘ α ∘ π` applied right to left.
#[derive(Clone, Debug)]
pub struct PureFactorization {
    pub f: CpMap,
    pub im_f: AlgElement,
    pub one_f: AlgElement,
    /// `im f·𝒜·im f → ⌈f(1)⌉ℬ⌈f(1)⌉`, an nmiu bijection.
    pub alpha: CpMap,
    /// `𝒜 → im f·𝒜·im f`.
    pub pi: CpMap,
    /// `⌈f(1)⌉ℬ⌈f(1)⌉ → ℬ`.
    pub zeta: CpMap,
    pub asrt: CpMap,
    pub residual: f64,
}

impl PureFactorization {
    pub fn recompose(&self) -> CpMap {
        let inner = cpmap::compose(&self.alpha, &self.pi).unwrap();
        let mid = cpmap::compose(&self.zeta, &inner).unwrap();
        cpmap::compose(&self.asrt, &mid).unwrap()
    }
}

/// Smallest singular value of a square superoperator, or zero if it is not
/// square.
fn min_singular(g: &CpMap) -> f64 {
    if g.source.dim() != g.target.dim() {
        return 0.0;
    }
    if g.source.dim() == 0 {
        return f64::INFINITY;
    }
    let s = g.superop();
    num_traits::Float::sqrt(linalg::min_eig(&s.adj_mul(&s)).max(0.0))
}

pub fn pure_factor(f: &CpMap, tol: f64) -> Result<PureFactorization> {
    if !is_pure(f) {
        return Err(Error::NotPure);
    }
    let im_f = f.image();
    let one_f = f.unit_image();
    let e = one_f.ceil(tol)?;
    let pi = standard_corner(&im_f, tol)?;
    let zeta = standard_filter(&e, tol)?;
    let root_inv = one_f.sqrt(tol)?.pinv(tol);
    let mut alpha = CpMap::zero(&pi.corner_alg, &zeta.filter_alg);
    for (ib, (i, us)) in pi.embed.iter().enumerate() {
        for (jb, (j, ue)) in zeta.embed.iter().enumerate() {
            let w = root_inv.mats[*j].mul(ue);
            *alpha.kraus_mut(ib, jb) = f.kraus(*i, *j).iter().map(|v| us.adj_mul(v).mul(&w)).collect();
        }
    }
    if min_singular(&alpha) <= INVERTIBILITY_THRESHOLD {
        return Err(Error::NotPure);
    }
    let asrt_map = asrt(&one_f, tol.max(1e-9))?;
    let mut out = PureFactorization {
        f: f.clone(),
        im_f,
        one_f,
        alpha,
        pi: pi.pi,
        zeta: zeta.c_sharp(),
        asrt: asrt_map,
        residual: 0.0,
    };
    out.residual = out.recompose().dist(f);
    Ok(out)
}

impl FilterPresentation {
    /// For sharp `b` the filter is the plain inclusion `x ↦ u x u*`.
    fn c_sharp(&self) -> CpMap {
        let mut f = CpMap::zero(&self.filter_alg, &self.b.algebra);
        for (jb, (i, u)) in self.embed.iter().enumerate() {
            f.kraus_mut(jb, *i).push(u.adjoint());
        }
        f
    }
}

/// `V ↦ V*` on every Kraus operator with source and target swapped; for
/// `ad_V` this is `ad_{V*}`.
pub fn kraus_adjoint(f: &CpMap) -> CpMap {
    let mut out = CpMap::zero(&f.target, &f.source);
    for i in 0..f.source.n_blocks() {
        for j in 0..f.target.n_blocks() {
            *out.kraus_mut(j, i) = f.kraus(i, j).iter().map(CMatrix::adjoint).collect();
        }
    }
    out
}

/// Inverse of an nmiu bijection: canonical Kraus operators are unitaries,
/// one per matched block pair, so the inverse is the Kraus adjoint.
pub fn nmiu_inverse(g: &CpMap, tol: f64) -> Result<CpMap> {
    if min_singular(g) <= INVERTIBILITY_THRESHOLD {
        return Err(Error::NotIsomorphic("map is not invertible"));
    }
    let inv = kraus_adjoint(&g.canonical(tol));
    let r = cpmap::compose(&inv, g)?.dist(&CpMap::identity(&g.source));
    if r > tol.max(1e-12) * 1e3 {
        return Err(Error::NotIsomorphic("map is not an nmiu bijection"));
    }
    Ok(inv)
}

/// `f† = asrt_{1∘f} ∘ π_{⌈1∘f⌉} ∘ α⁻¹ ∘ ζ_{im f}` (effectus order). The
/// comprehension and quotient are the Kraus adjoints of the factorization's
/// own `ζ` and `π`, so all four maps share one choice of corner bases.
pub fn dagger_pure(f: &CpMap, tol: f64) -> Result<CpMap> {
    let pf = pure_factor(f, tol)?;
    let pi_e = kraus_adjoint(&pf.zeta);
    let zeta_im = kraus_adjoint(&pf.pi);
    let alpha_inv = nmiu_inverse(&pf.alpha, tol.max(1e-9))?;
    // Heisenberg: asrt first, then π_e, α⁻¹, ζ_im
    let x = cpmap::compose(&pi_e, &pf.asrt)?;
    let x = cpmap::compose(&alpha_inv, &x)?;
    cpmap::compose(&zeta_im, &x)
}

/// `f^◇(s) = ⌈f(s)⌉` for a projection `s` of `f.source`.
pub fn diamond(f: &CpMap, s: &AlgElement, tol: f64) -> Result<AlgElement> {
    require_projection(s, tol)?;
    f.apply(s)?.ceil(tol)
}

/// `f^□(s) = f^◇(s⊥)⊥`.
pub fn box_(f: &CpMap, s: &AlgElement, tol: f64) -> Result<AlgElement> {
    Ok(diamond(f, &s.perp(), tol)?.perp())
}

/// `f_◇(t) = im(f ∘ π_t)` (effectus order) for a projection `t` of
/// `f.target`, computed through the standard corner of `t`.
pub fn lower_diamond(f: &CpMap, t: &AlgElement, tol: f64) -> Result<AlgElement> {
    require_projection(t, tol)?;
    let c = standard_corner(t, tol)?;
    Ok(cpmap::compose(&c.pi, f)?.image())
}

/// `s ≤ t` for projections: `t s = s`.
pub fn proj_le(s: &AlgElement, t: &AlgElement, tol: f64) -> bool {
    t.mul(s).dist(s) <= tol
}

/// `s ∧ t` as the range intersection, the kernel of `2 − s − t`.
pub fn infimum(s: &AlgElement, t: &AlgElement, tol: f64) -> Result<AlgElement> {
    require_projection(s, tol)?;
    require_projection(t, tol)?;
    Ok(AlgElement::from_fn(&s.algebra, |i, n| {
        let d = CMatrix::identity(n).scale_re(2.0).sub(&s.mats[i]).sub(&t.mats[i]);
        let k = linalg::nullspace(&d, 1e-7);
        k.mul(&k.adjoint())
    }))
}

/// `s ∧ t = (π_s)_◇(π_s^□(t))`.
pub fn infimum_via_diamond(s: &AlgElement, t: &AlgElement, tol: f64) -> Result<AlgElement> {
    let c = standard_corner(s, tol)?;
    let inner = box_(&c.pi, t, tol)?;
    lower_diamond(&c.pi, &inner, tol)
}

/// `f^◇ = f_◇` on sampled projections (for `f: 𝒜 → 𝒜`).
pub fn diamond_self_adjoint(f: &CpMap, rng: &mut Rng, samples: usize, tol: f64) -> Result<bool> {
    for _ in 0..samples {
        let s = AlgElement::random_projection(&f.source, rng);
        if diamond(f, &s, tol)?.dist(&lower_diamond(f, &s, tol)?) > 1e-6 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sef_p = asrt_p ⊻ asrt_{p⊥}`.
pub fn sef(p: &AlgElement, tol: f64) -> Result<CpMap> {
    cpmap::ovee_sum(&asrt(p, tol)?, &asrt(&p.perp(), tol)?, tol.max(1e-9))
}

/// `f ∘ sef_p = f` (effectus order) for `p` an effect of `f.target`.
pub fn inv_set_check(f: &CpMap, p: &AlgElement, tol: f64) -> Result<bool> {
    let s = sef(p, tol)?;
    Ok(cpmap::compose(&s, f)?.dist(f) <= tol)
}

/// Least commutant residual of the off-commutant draws in
/// [`inv_commutant_check`].
const OFF_MARGIN: f64 = 1e-2;

/// `Inv ρ = [0,1]_{ρ(𝒜)□}`: sampled effects, half drawn from the
/// commutant and half generic or perturbed, classified both ways.
pub fn inv_commutant_check(rho: &CpMap, samples: usize, seed: u64, tol: f64) -> Result<Report> {
    if !rho.is_nmiu(tol) {
        return Err(Error::InvalidInput("ρ must be nmiu"));
    }
    let images = rho.unit_images();
    let comms = (0..rho.target.n_blocks())
        .map(|j| {
            let gens: Vec<CMatrix> = images.iter().map(|x| x.mats[j].clone()).collect();
            vnalg::commutant(&gens, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rng = Rng::new(seed);
    let mut agree = LawCheck::new("inv_equals_commutant");
    let mut members = 0;
    let off = |p: &AlgElement| p.mats.iter().zip(&comms).fold(0.0f64, |m, (x, c)| m.max(c.residual(x)));
    let comm_effect = |rng: &mut Rng| -> Result<AlgElement> {
        let parts = comms.iter().map(|c| c.embed_element(&AlgElement::random_effect(&c.structure, rng)).hermitian_part()).collect();
        AlgElement::new(rho.target.clone(), parts)
    };
    // The Inv defect of p is quadratic in its distance from the commutant,
    // so off-commutant draws within OFF_MARGIN of it are redrawn: there the
    // two tests read the same tolerance on different scales. A commutant
    // that is everything never clears the margin, hence the attempt cap.
    let generic = |rng: &mut Rng| {
        let mut r = AlgElement::random_effect(&rho.target, rng);
        for _ in 0..64 {
            if off(&r) >= OFF_MARGIN {
                break;
            }
            r = AlgElement::random_effect(&rho.target, rng);
        }
        r
    };
    for trial in 0..samples {
        let p = match trial % 3 {
            0 => generic(&mut rng),
            1 => comm_effect(&mut rng)?,
            // a commutant effect nudged off the commutant
            _ => comm_effect(&mut rng)?.scale(0.9).add(&generic(&mut rng).scale(0.05)),
        };
        let in_comm = p.mats.iter().zip(&comms).all(|(x, c)| c.contains(x, tol));
        let inv = inv_set_check(rho, &p, tol)?;
        members += usize::from(in_comm);
        agree.holds(in_comm == inv, || format!("trial {trial}: commutant {in_comm}, Inv {inv}"));
    }
    let mut rep = Report::new();
    rep.push(agree);
    let mut both = LawCheck::new("both_classes_sampled");
    both.holds(samples < 3 || (members > 0 && members < samples), || format!("{members} of {samples} in commutant"));
    rep.push(both);
    Ok(rep)
}

/// Pure with `f(1)` sharp.
pub fn pristine_check(f: &CpMap, tol: f64) -> bool {
    is_pure(f) && f.unit_image().is_projection(tol)
}

/// Dagger-suite output: asserted laws and the S4/S5 observations, which
/// are recorded but never part of the verdict.
#[derive(Clone, Debug)]
pub struct DaggerSuite {
    pub report: Report,
    pub observations: Report,
}

fn random_effect_below(q: &AlgElement, rng: &mut Rng, tol: f64) -> AlgElement {
    // √q r √q ≤ q for an effect r
    let r = AlgElement::random_effect(&q.algebra, rng);
    let s = q.sqrt(tol).unwrap();
    s.mul(&r).mul(&s).map(CMatrix::hermitian_part)
}

/// Randomized dagger conditions and the sequential-effect-algebra axioms
/// S1–S3 on `[0,1]_𝒜`, plus dagger laws on pure samples.
pub fn dagger_law_suite(alg: &FdAlgebra, seed: u64, trials: usize, tol: f64, seq: SeqProdFn) -> DaggerSuite {
    let mut rng = Rng::new(seed);
    let mut root = LawCheck::new("unique_square_root");
    let mut cond2 = LawCheck::new("asrt_square_of_seqprod");
    let mut sharp = LawCheck::new("quotient_of_sharp_is_sharp");
    let mut s1 = LawCheck::new("S1_additive");
    let mut s2 = LawCheck::new("S2_unit");
    let mut s3 = LawCheck::new("S3_zero_commutes");
    let mut obs4 = LawCheck::new("S4_observed");
    let mut obs5 = LawCheck::new("S5_observed");
    let one = AlgElement::one(alg);
    let err = |e: Error| format!("{e}");
    for trial in 0..trials {
        let p = AlgElement::random_effect(alg, &mut rng);
        let q = AlgElement::random_effect(alg, &mut rng);

        // condition 1: q = √p is the unique square root, and it commutes with p
        match sqrt_effect(&p, tol) {
            Ok(r) => {
                let back = seq(&r, &r, tol).map(|x| x.dist(&p)).unwrap_or(f64::INFINITY);
                let comm = r.mul(&p).dist(&p.mul(&r));
                root.observe(back.max(comm), 1e-9_f64.max(tol), || format!("trial {trial}: ‖q&q − p‖ = {back:e}"));
            }
            Err(e) => root.holds(false, || err(e)),
        }

        // condition 2: asrt²_{p&q} = asrt_p ∘ asrt²_q ∘ asrt_p
        let r = seq(&p, &q, tol).and_then(|pq| {
            let a = asrt(&pq, 1e-7)?;
            let lhs = cpmap::compose(&a, &a)?;
            let (ap, aq) = (asrt(&p, tol)?, asrt(&q, tol)?);
            let rhs = cpmap::compose(&ap, &cpmap::compose(&aq, &cpmap::compose(&aq, &ap)?)?)?;
            Ok(lhs.dist(&rhs))
        });
        match r {
            Ok(r) => cond2.observe(r, 1e-8_f64.max(tol), || format!("trial {trial}: ‖asrt²_(p&q) − asrt_p asrt²_q asrt_p‖ = {r:e}")),
            Err(e) => cond2.holds(false, || format!("trial {trial}: {e}")),
        }

        // condition 3: ζ_s sends projections of the corner to projections
        let s = AlgElement::random_projection(alg, &mut rng);
        if let Ok(c) = standard_corner(&s, tol) {
            if c.corner_alg.dim() > 0 {
                let x = AlgElement::random_projection(&c.corner_alg, &mut rng);
                let y = c.inclusion().apply(&x).unwrap();
                let r = y.mul(&y).dist(&y).max(y.adjoint().dist(&y));
                sharp.observe(r, 1e-8_f64.max(tol), || format!("trial {trial}: ‖ζ(x)² − ζ(x)‖ = {r:e}"));
            }
        }

        // S1: a & (b ⊻ c) = a&b ⊻ a&c with c ≤ b⊥
        let c = random_effect_below(&q.perp(), &mut rng, tol);
        if let (Ok(l), Ok(x), Ok(y)) = (seq(&p, &q.add(&c), tol), seq(&p, &q, tol), seq(&p, &c, tol)) {
            let r = l.dist(&x.add(&y));
            s1.observe(r, 1e-8_f64.max(tol), || format!("trial {trial}: additivity defect {r:e}"));
        }
        // S2: 1 & a = a
        if let Ok(x) = seq(&one, &p, tol) {
            let r = x.dist(&p);
            s2.observe(r, 1e-9_f64.max(tol), || format!("trial {trial}: ‖1&p − p‖ = {r:e}"));
        }
        // S3: a&b = 0 ⇒ a&b = b&a, on effects with orthogonal supports
        let e = AlgElement::random_projection(alg, &mut rng);
        let a = random_effect_below(&e, &mut rng, tol);
        let b = random_effect_below(&e.perp(), &mut rng, tol);
        if let (Ok(ab), Ok(ba)) = (seq(&a, &b, tol), seq(&b, &a, tol)) {
            let r = if ab.max_abs() <= 1e-9 { ab.dist(&ba) } else { 0.0 };
            s3.observe(r, 1e-9_f64.max(tol), || format!("trial {trial}: a&b = 0 but ‖a&b − b&a‖ = {r:e}"));
        }

        // S4/S5 on commuting pairs, for the record only
        let g = alg_commuting_pair(alg, &mut rng);
        if let (Ok(bc), Ok(ab)) = (seq(&g.1, &q, tol), seq(&g.0, &g.1, tol)) {
            let l = seq(&g.0, &bc, tol);
            let r = seq(&ab, &q, tol);
            if let (Ok(l), Ok(r)) = (l, r) {
                let d = l.dist(&r);
                obs4.observe(d, 1e-8_f64.max(tol), || format!("trial {trial}: a|b but a&(b&c) ≠ (a&b)&c by {d:e}"));
            }
        }
        if let Ok(ab) = seq(&g.0, &g.1, tol) {
            // c commuting with a and b commutes with a&b
            let c = g.2.clone();
            if let (Ok(x), Ok(y)) = (seq(&c, &ab, tol), seq(&ab, &c, tol)) {
                let d = x.dist(&y);
                obs5.observe(d, 1e-8_f64.max(tol), || format!("trial {trial}: c|a, c|b but c∤a&b by {d:e}"));
            }
        }
    }

    let mut report = Report::new();
    for c in [root, cond2, sharp, s1, s2, s3] {
        report.push(c);
    }
    report.extend(pure_dagger_laws(alg, &mut rng, trials.min(40), tol));
    let mut observations = Report::new();
    observations.push(obs4);
    observations.push(obs5);
    DaggerSuite { report, observations }
}

/// Three mutually commuting effects from a common random eigenbasis.
fn alg_commuting_pair(alg: &FdAlgebra, rng: &mut Rng) -> (AlgElement, AlgElement, AlgElement) {
    let mut parts = (Vec::new(), Vec::new(), Vec::new());
    for &n in &alg.blocks {
        let u = rng.unitary(n);
        let mut diag = || {
            let d: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            d
        };
        let (d0, d1, d2) = (diag(), diag(), diag());
        let mk = |d: &[f64]| u.mul(&CMatrix::diag_real(d)).mul(&u.adjoint()).hermitian_part();
        parts.0.push(mk(&d0));
        parts.1.push(mk(&d1));
        parts.2.push(mk(&d2));
    }
    (
        AlgElement::new(alg.clone(), parts.0).unwrap(),
        AlgElement::new(alg.clone(), parts.1).unwrap(),
        AlgElement::new(alg.clone(), parts.2).unwrap(),
    )
}

/// `(ad_V)† = ad_{V*}`, `f†† = f`, `(f∘g)† = g†∘f†`, `asrt_p† = asrt_p`,
/// and `α† = α⁻¹` for isomorphisms, on random pure maps between the
/// blocks of `alg`.
fn pure_dagger_laws(alg: &FdAlgebra, rng: &mut Rng, trials: usize, tol: f64) -> Report {
    let mut adj = LawCheck::new("dagger_of_ad_is_ad_adjoint");
    let mut inv = LawCheck::new("dagger_involutive");
    let mut contra = LawCheck::new("dagger_contravariant");
    let mut asr = LawCheck::new("dagger_of_asrt");
    let mut iso = LawCheck::new("dagger_of_iso_is_inverse");
    let dtol = 1e-8_f64.max(tol);
    let n_blocks = alg.blocks.len();
    for trial in 0..trials {
        let a = alg.blocks[rng.below(n_blocks)];
        let b = alg.blocks[rng.below(n_blocks)];
        let c = alg.blocks[rng.below(n_blocks)];
        let v = contraction(rng.ginibre(a, b));
        let w = contraction(rng.ginibre(b, c));
        let (f, g) = (CpMap::ad(&v), CpMap::ad(&w));
        match dagger_pure(&f, tol) {
            Ok(fd) => {
                let r = fd.dist(&CpMap::ad(&v.adjoint()));
                adj.observe(r, dtol, || format!("trial {trial}: ‖(ad_V)† − ad_V*‖ = {r:e}"));
                match dagger_pure(&fd, tol) {
                    Ok(fdd) => {
                        let r = fdd.dist(&f);
                        inv.observe(r, dtol, || format!("trial {trial}: ‖f†† − f‖ = {r:e}"));
                    }
                    Err(e) => inv.holds(false, || format!("trial {trial}: {e}")),
                }
                // Heisenberg composite: ad_V first, then ad_W
                let r = (|| -> Result<f64> {
                    let fg = cpmap::compose(&g, &f)?;
                    let lhs = dagger_pure(&fg, tol)?;
                    let rhs = cpmap::compose(&fd, &dagger_pure(&g, tol)?)?;
                    Ok(lhs.dist(&rhs))
                })();
                match r {
                    Ok(r) => contra.observe(r, dtol, || format!("trial {trial}: ‖(f∘g)† − g†∘f†‖ = {r:e}")),
                    Err(e) => contra.holds(false, || format!("trial {trial}: {e}")),
                }
            }
            Err(e) => adj.holds(false, || format!("trial {trial}: {e}")),
        }
        let p = AlgElement::random_effect(alg, rng);
        let r = asrt(&p, tol).and_then(|ap| Ok(dagger_pure(&ap, tol)?.dist(&ap)));
        match r {
            Ok(r) => asr.observe(r, dtol, || format!("trial {trial}: ‖asrt_p† − asrt_p‖ = {r:e}")),
            Err(e) => asr.holds(false, || format!("trial {trial}: {e}")),
        }
        let u = rng.unitary(a);
        let al = CpMap::ad(&u);
        let r = dagger_pure(&al, tol).and_then(|d| Ok(d.dist(&nmiu_inverse(&al, 1e-9)?)));
        match r {
            Ok(r) => iso.observe(r, dtol, || format!("trial {trial}: ‖α† − α⁻¹‖ = {r:e}")),
            Err(e) => iso.holds(false, || format!("trial {trial}: {e}")),
        }
    }
    let mut rep = Report::new();
    for c in [adj, inv, contra, asr, iso] {
        rep.push(c);
    }
    rep
}

/// `v / ‖v‖`, so that `ad_v` is subunital.
pub fn contraction(v: CMatrix) -> CMatrix {
    let n = linalg::op_norm(&v);
    if n > 0.0 {
        v.scale_re(1.0 / n)
    } else {
        v
    }
}

/// Random map of low Kraus rank on `alg`, so that diamonds are nontrivial.
/// Nonzero singular values of each Kraus operator lie in `[0.3, 1]`:
/// composites of raw Ginibre products can land within rounding of the
/// rank cutoff, where supports are not numerically determined.
pub fn random_sparse_map(alg: &FdAlgebra, rng: &mut Rng) -> CpMap {
    let mut f = CpMap::zero(alg, alg);
    for (i, &n) in alg.blocks.iter().enumerate() {
        for (j, &m) in alg.blocks.iter().enumerate() {
            if rng.below(2) == 0 {
                continue;
            }
            let r = 1 + rng.below(n.min(m));
            let (u, w) = (rng.unitary(n), rng.unitary(m));
            let sigma: Vec<f64> = (0..r).map(|_| 0.3 + 0.7 * rng.uniform()).collect();
            let v = CMatrix::from_fn(n, m, |a, b| (0..r).map(|k| u[(a, k)] * w[(k, b)] * sigma[k]).sum());
            f.kraus_mut(i, j).push(v);
        }
    }
    f
}

/// Galois adjunction `f_◇ ⊣ f^□`, functoriality of both diamonds, the
/// infimum formula and `ζ_s ∘ π_s = id`, `π_s ∘ ζ_s = asrt_s` on sampled
/// maps and projections.
pub fn diamond_suite(alg: &FdAlgebra, seed: u64, samples: usize, tol: f64) -> Report {
    let mut rng = Rng::new(seed);
    let mut adj = LawCheck::new("galois_adjunction");
    let mut up = LawCheck::new("upper_diamond_functorial");
    let mut low = LawCheck::new("lower_diamond_functorial");
    let mut inf = LawCheck::new("infimum_formula");
    let mut zp = LawCheck::new("zeta_pi");
    for trial in 0..samples {
        let f = random_sparse_map(alg, &mut rng);
        let g = random_sparse_map(alg, &mut rng);
        let s = AlgElement::random_projection(alg, &mut rng);
        let t = AlgElement::random_projection(alg, &mut rng);
        let r = (|| -> Result<()> {
            let fb = box_(&f, &s, tol)?;
            // candidates: a random t, one below f^□(s), and f_◇(t) itself
            let sub = infimum(&fb, &AlgElement::random_projection(alg, &mut rng), tol)?;
            for tt in [t.clone(), fb.clone(), sub] {
                let lhs = proj_le(&lower_diamond(&f, &tt, tol)?, &s, 1e-8);
                let rhs = proj_le(&tt, &fb, 1e-8);
                adj.holds(lhs == rhs, || format!("trial {trial}: f_◇(t) ≤ s is {lhs}, t ≤ f^□(s) is {rhs}"));
            }
            let ss = lower_diamond(&f, &t, tol)?;
            let lhs = proj_le(&lower_diamond(&f, &t, tol)?, &ss, 1e-8);
            let rhs = proj_le(&t, &box_(&f, &ss, tol)?, 1e-8);
            adj.holds(lhs == rhs, || format!("trial {trial}: unit of the adjunction fails"));

            // effectus f ∘ g is Heisenberg compose(g, f)
            let fg = cpmap::compose(&g, &f)?;
            let r = diamond(&fg, &s, tol)?.dist(&diamond(&g, &diamond(&f, &s, tol)?, tol)?);
            up.observe(r, 1e-8, || format!("trial {trial}: ‖(f∘g)^◇ − g^◇∘f^◇‖ = {r:e}"));
            let r = lower_diamond(&fg, &t, tol)?.dist(&lower_diamond(&f, &lower_diamond(&g, &t, tol)?, tol)?);
            low.observe(r, 1e-8, || format!("trial {trial}: ‖(f∘g)_◇ − f_◇∘g_◇‖ = {r:e}"));

            let r = infimum(&s, &t, tol)?.dist(&infimum_via_diamond(&s, &t, tol)?);
            inf.observe(r, 1e-8, || format!("trial {trial}: ‖s∧t − (π_s)_◇(π_s^□ t)‖ = {r:e}"));
            // a pair with a nontrivial meet
            let big = AlgElement::random_projection(alg, &mut rng);
            let small = infimum(&big, &s, tol)?.add(&infimum(&big.perp(), &t, tol)?);
            let r = infimum(&big, &small, tol)?.dist(&infimum_via_diamond(&big, &small, tol)?);
            inf.observe(r, 1e-8, || format!("trial {trial}: meet formula on a nested pair, defect {r:e}"));

            let c = standard_corner(&s, tol)?;
            let z = c.inclusion();
            let r1 = cpmap::compose(&c.pi, &z)?.dist(&CpMap::identity(&c.corner_alg));
            let r2 = cpmap::compose(&z, &c.pi)?.dist(&asrt(&s, tol)?);
            zp.observe(r1.max(r2), 1e-8, || format!("trial {trial}: ζπ defect {r1:e}, πζ defect {r2:e}"));
            Ok(())
        })();
        if let Err(e) = r {
            adj.holds(false, || format!("trial {trial}: {e}"));
        }
    }
    let mut rep = Report::new();
    for c in [adj, up, low, inf, zp] {
        rep.push(c);
    }
    rep
}

/// Purity against the independent oracle: `ρ` surjective in the Paschke
/// dilation, decided from the rank of `ρ`'s superoperator.
pub fn purity_oracle(f: &CpMap) -> bool {
    let d = dilation::paschke(f);
    let cols: Vec<Vec<_>> = d.rho.unit_images().into_iter().map(flatten).collect();
    if d.p.dim() == 0 {
        return true;
    }
    linalg::rank(&CMatrix::from_columns(d.p.dim(), &cols), TOL_REL) == d.p.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use crate::C64;
    use alloc::vec;
    use proptest::prelude::*;

    fn m2m2() -> FdAlgebra {
        FdAlgebra::new(vec![2, 2]).unwrap()
    }

    fn ket(n: usize, k: usize) -> CMatrix {
        CMatrix::from_fn(n, 1, |r, _| C64::new(if r == k { 1.0 } else { 0.0 }, 0.0))
    }

    fn proj(alg: &FdAlgebra, mats: Vec<CMatrix>) -> AlgElement {
        AlgElement::new(alg.clone(), mats).unwrap()
    }

    #[test]
    fn asrt_rejects_non_effects() {
        let a = FdAlgebra::matrix(2);
        let p = AlgElement::one(&a).scale(1.5);
        assert_eq!(asrt(&p, 1e-9).unwrap_err(), Error::NotEffect);
        let q = AlgElement::new(a.clone(), vec![CMatrix::real(&[&[1.0, 0.0], &[0.0, -0.2]])]).unwrap();
        assert_eq!(seqprod(&q, &AlgElement::one(&a), 1e-9).unwrap_err(), Error::NotEffect);
    }

    #[test]
    fn asrt_of_one_is_identity_and_unit_image_is_p() {
        let mut rng = Rng::new(3);
        let alg = FdAlgebra::new(vec![1, 3]).unwrap();
        let id = asrt(&AlgElement::one(&alg), 1e-9).unwrap();
        assert!(id.dist(&CpMap::identity(&alg)) < 1e-12);
        let p = AlgElement::random_effect(&alg, &mut rng);
        assert!(asrt(&p, 1e-9).unwrap().unit_image().dist(&p) < 1e-12);
    }

    #[test]
    fn seqprod_of_diagonals_multiplies() {
        let a = FdAlgebra::matrix(2);
        let p = proj(&a, vec![CMatrix::diag_real(&[0.25, 1.0])]);
        let q = proj(&a, vec![CMatrix::diag_real(&[0.5, 0.3])]);
        let r = seqprod(&p, &q, 1e-9).unwrap();
        assert!(r.dist(&proj(&a, vec![CMatrix::diag_real(&[0.125, 0.3])])) < 1e-12);
        let s = sqrt_effect(&p, 1e-9).unwrap();
        assert!(s.dist(&proj(&a, vec![CMatrix::diag_real(&[0.5, 1.0])])) < 1e-12);
    }

    #[test]
    fn corner_of_rank_one_projection() {
        let a = FdAlgebra::matrix(3);
        let p = proj(&a, vec![CMatrix::diag_real(&[1.0, 0.0, 0.4])]);
        let c = standard_corner(&p, 1e-9).unwrap();
        assert_eq!(c.corner_alg.blocks, vec![1]);
        assert!(c.pi.is_unital(1e-12));
        // π(p) = π(1)
        assert!(c.pi.apply(&p).unwrap().dist(&c.pi.unit_image()) < 1e-12);
    }

    #[test]
    fn corner_factors_maps_that_ignore_p_perp() {
        let mut rng = Rng::new(11);
        let a = FdAlgebra::new(vec![2, 3]).unwrap();
        let s = AlgElement::random_projection(&a, &mut rng);
        let p = s.scale(0.5).add(&s).map(|x| x.scale_re(2.0 / 3.0));
        let c = standard_corner(&p, 1e-9).unwrap();
        assert!(c.floor_p.dist(&s) < 1e-9);
        let h = CpMap::random(&c.corner_alg, &FdAlgebra::matrix(2), 2, cpmap::Normalization::Unital, &mut rng);
        let f = cpmap::compose(&h, &c.pi).unwrap();
        let g = corner_factor(&c, &f, 1e-9).unwrap();
        assert!(g.dist(&h) < 1e-9);
        let bad = CpMap::random(&a, &FdAlgebra::matrix(2), 2, cpmap::Normalization::Unital, &mut rng);
        assert!(matches!(corner_factor(&c, &bad, 1e-9), Err(Error::UniversalPropertyViolated { .. })));
    }

    #[test]
    fn filter_factors_maps_below_b() {
        let mut rng = Rng::new(12);
        let b_alg = FdAlgebra::new(vec![3]).unwrap();
        let b = proj(&b_alg, vec![CMatrix::diag_real(&[0.7, 0.2, 0.0])]);
        let fp = standard_filter(&b, 1e-9).unwrap();
        assert_eq!(fp.filter_alg.blocks, vec![2]);
        assert!(filter_injective(&fp));
        assert!(fp.c.unit_image().dist(&b) < 1e-12);
        let h = CpMap::random(&FdAlgebra::matrix(2), &fp.filter_alg, 2, cpmap::Normalization::Unital, &mut rng).scale(0.8);
        let f = cpmap::compose(&fp.c, &h).unwrap();
        let g = filter_factor(&fp, &f, 1e-9).unwrap();
        assert!(g.dist(&h) < 1e-9);
        assert!(g.is_subunital(1e-9));
        let too_big = CpMap::random(&FdAlgebra::matrix(2), &b_alg, 2, cpmap::Normalization::Unital, &mut rng);
        assert!(matches!(filter_factor(&fp, &too_big, 1e-9), Err(Error::UniversalPropertyViolated { .. })));
    }

    #[test]
    fn purity_examples() {
        let mut rng = Rng::new(5);
        let v = rng.ginibre(3, 2);
        assert!(is_pure(&CpMap::ad(&v)));
        assert!(purity_oracle(&CpMap::ad(&v)));
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        assert!(is_pure(&CpMap::identity(&alg)));
        // measurement M2 → ℂ²: not pure
        let mut m = CpMap::zero(&FdAlgebra::matrix(2), &FdAlgebra::commutative(2));
        m.kraus_mut(0, 0).push(ket(2, 0));
        m.kraus_mut(0, 1).push(ket(2, 1));
        assert!(!is_pure(&m));
        assert!(!purity_oracle(&m));
        assert_eq!(pure_factor(&m, 1e-9).unwrap_err(), Error::NotPure);
        let p = AlgElement::random_effect(&alg, &mut rng);
        assert!(is_pure(&asrt(&p, 1e-9).unwrap()));
    }

    #[test]
    fn pure_factorization_recomposes() {
        let mut rng = Rng::new(6);
        for (n, r, m) in [(3, 2, 2), (2, 1, 3), (4, 4, 4)] {
            let v = contraction(rng.ginibre(n, r).mul(&rng.ginibre(r, m)));
            let f = CpMap::ad(&v);
            let pf = pure_factor(&f, 1e-9).unwrap();
            assert!(pf.residual < 1e-9, "residual {}", pf.residual);
            assert!(pf.alpha.is_nmiu(1e-8));
            assert_eq!(pf.alpha.source.dim(), pf.alpha.target.dim());
        }
    }

    #[test]
    fn pristine_examples() {
        let mut rng = Rng::new(8);
        let u = rng.unitary(3);
        assert!(pristine_check(&CpMap::ad(&u), 1e-9));
        let s = AlgElement::random_projection(&FdAlgebra::matrix(3), &mut rng);
        assert!(pristine_check(&asrt(&s, 1e-9).unwrap(), 1e-9));
        let p = proj(&FdAlgebra::matrix(2), vec![CMatrix::diag_real(&[0.5, 1.0])]);
        assert!(!pristine_check(&asrt(&p, 1e-9).unwrap(), 1e-9));
    }

    #[test]
    fn dagger_of_ad_and_asrt() {
        let mut rng = Rng::new(9);
        let v = contraction(rng.ginibre(2, 3));
        let d = dagger_pure(&CpMap::ad(&v), 1e-9).unwrap();
        assert!(d.dist(&CpMap::ad(&v.adjoint())) < 1e-8);
        let p = AlgElement::random_effect(&FdAlgebra::new(vec![2, 2]).unwrap(), &mut rng);
        let a = asrt(&p, 1e-9).unwrap();
        assert!(dagger_pure(&a, 1e-9).unwrap().dist(&a) < 1e-8);
    }

    #[test]
    fn diamond_box_on_a_measurement_like_map() {
        // ad_V with V = |0⟩⟨1|: V*·V sends s to ⟨0|s|0⟩|1⟩⟨1|
        let v = CMatrix::unit(2, 0, 1);
        let f = CpMap::ad(&v);
        let a = FdAlgebra::matrix(2);
        let e0 = proj(&a, vec![CMatrix::unit(2, 0, 0)]);
        let e1 = proj(&a, vec![CMatrix::unit(2, 1, 1)]);
        assert!(diamond(&f, &e0, 1e-9).unwrap().dist(&e1) < 1e-12);
        assert!(diamond(&f, &e1, 1e-9).unwrap().max_abs() < 1e-12);
        assert!(box_(&f, &e1, 1e-9).unwrap().dist(&e0) < 1e-12);
        assert!(lower_diamond(&f, &e1, 1e-9).unwrap().dist(&e0) < 1e-12);
        let half = AlgElement::one(&a).scale(0.5);
        assert_eq!(diamond(&f, &half, 1e-9).unwrap_err(), Error::NotSharp);
    }

    #[test]
    fn infimum_of_lines() {
        let a = FdAlgebra::matrix(3);
        let s = proj(&a, vec![CMatrix::diag_real(&[1.0, 1.0, 0.0])]);
        let h = 0.5f64.sqrt();
        let w = CMatrix::from_vec(3, 1, vec![C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(h, 0.0)]);
        let x = CMatrix::from_vec(3, 1, vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let t = proj(&a, vec![w.mul(&w.adjoint()).add(&CMatrix::unit(3, 0, 0))]);
        // s ∧ t is the line through e0
        let m = infimum(&s, &t, 1e-9).unwrap();
        assert!(m.dist(&proj(&a, vec![CMatrix::unit(3, 0, 0)])) < 1e-9);
        assert!(infimum_via_diamond(&s, &t, 1e-9).unwrap().dist(&m) < 1e-9);
        let u = proj(&a, vec![x.mul(&x.adjoint())]);
        assert!(infimum(&s, &u, 1e-9).unwrap().dist(&u) < 1e-9);

        // distinct lines at a small angle still meet in zero
        let th = 0.02f64;
        let v = CMatrix::from_vec(3, 1, vec![C64::new(th.cos(), 0.0), C64::new(th.sin(), 0.0), C64::new(0.0, 0.0)]);
        let e0 = proj(&a, vec![CMatrix::unit(3, 0, 0)]);
        let l = proj(&a, vec![v.mul(&v.adjoint())]);
        assert!(infimum(&e0, &l, 1e-9).unwrap().max_abs() < 1e-9);
        assert!(infimum_via_diamond(&e0, &l, 1e-9).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn diamond_suite_passes_on_m2_m2() {
        let rep = diamond_suite(&m2m2(), 1, 60, 1e-9);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn asrt_is_the_diamond_self_adjoint_candidate() {
        let mut rng = Rng::new(21);
        let a = FdAlgebra::matrix(3);
        let p = AlgElement::random_effect(&a, &mut rng);
        let root = p.sqrt(1e-9).unwrap().mats[0].clone();
        let low = proj(&a, vec![CMatrix::diag_real(&[0.9, 0.4, 0.0])]);
        let lroot = low.sqrt(1e-9).unwrap().mats[0].clone();
        assert!(diamond_self_adjoint(&CpMap::ad(&root), &mut rng, 10, 1e-9).unwrap());
        assert!(diamond_self_adjoint(&CpMap::ad(&lroot), &mut rng, 10, 1e-9).unwrap());
        let twisted = CpMap::ad(&rng.unitary(3).mul(&lroot));
        assert!(!diamond_self_adjoint(&twisted, &mut rng, 10, 1e-9).unwrap());
    }

    #[test]
    fn dagger_suite_passes_and_catches_a_wrong_product() {
        let alg = FdAlgebra::new(vec![2, 3]).unwrap();
        let good = dagger_law_suite(&alg, 4, 30, 1e-9, seqprod);
        assert!(good.report.passed(), "{:?}", good.report.failures().collect::<Vec<_>>());
        assert!(good.observations.passed());
        fn naive(p: &AlgElement, q: &AlgElement, _tol: f64) -> Result<AlgElement> {
            Ok(p.mul(q).mul(p).map(CMatrix::hermitian_part))
        }
        let bad = dagger_law_suite(&alg, 4, 30, 1e-9, naive);
        assert!(!bad.report.get("asrt_square_of_seqprod").unwrap().passed);
    }

    #[test]
    fn sef_fixes_commuting_effects() {
        let mut rng = Rng::new(2);
        let a = FdAlgebra::matrix(2);
        // ρ: M2 → M4, a ↦ a ⊗ 1
        let mut rho = CpMap::zero(&a, &FdAlgebra::matrix(4));
        for t in 0..2 {
            let mut v = CMatrix::zeros(2, 4);
            for k in 0..2 {
                v[(k, 2 * k + t)] = C64::new(1.0, 0.0);
            }
            rho.kraus_mut(0, 0).push(v);
        }
        assert!(rho.is_nmiu(1e-12));
        let q = AlgElement::random_effect(&a, &mut rng).mats[0].clone();
        let p = proj(&FdAlgebra::matrix(4), vec![CMatrix::identity(2).kron(&q)]);
        assert!(inv_set_check(&rho, &p, 1e-9).unwrap());
        let r = AlgElement::random_effect(&FdAlgebra::matrix(4), &mut rng);
        assert!(!inv_set_check(&rho, &r, 1e-9).unwrap());
        let rep = inv_commutant_check(&rho, 30, 7, 1e-8).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        let rep = inv_commutant_check(&CpMap::identity(&a), 30, 7, 1e-8).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn galois_adjunction(seed in any::<u64>()) {
            let alg = m2m2();
            let mut rng = Rng::new(seed);
            let f = random_sparse_map(&alg, &mut rng);
            let s = AlgElement::random_projection(&alg, &mut rng);
            let fb = box_(&f, &s, 1e-9).unwrap();
            for t in [AlgElement::random_projection(&alg, &mut rng), fb.clone()] {
                let lhs = proj_le(&lower_diamond(&f, &t, 1e-9).unwrap(), &s, 1e-8);
                let rhs = proj_le(&t, &fb, 1e-8);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn zeta_after_pi_is_identity(seed in any::<u64>()) {
            let alg = FdAlgebra::new(vec![3, 2]).unwrap();
            let mut rng = Rng::new(seed);
            let s = AlgElement::random_projection(&alg, &mut rng);
            let c = standard_corner(&s, 1e-9).unwrap();
            let r = cpmap::compose(&c.pi, &c.inclusion()).unwrap().dist(&CpMap::identity(&c.corner_alg));
            prop_assert!(r < 1e-10);
        }

        #[test]
        fn seqprod_is_additive_and_unital(seed in any::<u64>()) {
            let alg = FdAlgebra::new(vec![2, 2]).unwrap();
            let mut rng = Rng::new(seed);
            let p = AlgElement::random_effect(&alg, &mut rng);
            let q = AlgElement::random_effect(&alg, &mut rng).scale(0.5);
            let r = AlgElement::random_effect(&alg, &mut rng).scale(0.5);
            let lhs = seqprod(&p, &q.add(&r), 1e-9).unwrap();
            let rhs = seqprod(&p, &q, 1e-9).unwrap().add(&seqprod(&p, &r, 1e-9).unwrap());
            prop_assert!(lhs.dist(&rhs) < 1e-10);
            prop_assert!(seqprod(&p, &AlgElement::one(&alg), 1e-9).unwrap().dist(&p) < 1e-10);
        }
    }
}
