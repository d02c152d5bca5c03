//! Finite abstract `M`-convex sets over a finite effect monoid: congruence
//! closure, quotients, binary coproducts and the semilattice bridge.
//!
//! A distribution over a carrier of size `n` is stored densely as its
//! coefficient vector in `Mⁿ`; `D_M` of the carrier is enumerated once.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::dm::{FiniteScalars, Reading, Scalars};
use super::ea::EXHAUSTIVE_LIMIT;
use crate::error::{Error, Result};
use crate::report::{LawCheck, Report};
use crate::rng::Rng;
use crate::DEFAULT_SEED;

/// Largest `|Z|^|C|` for which mediators are counted by brute force.
const BRUTE_MEDIATORS: usize = 4096;

fn total<M: Scalars<S = u32>>(m: &M, v: &[u32]) -> Option<u32> {
    v.iter().try_fold(m.zero(), |acc, x| m.add(&acc, x))
}

/// `D_M(n)` in lexicographic order.
fn enumerate_dists(m: &FiniteScalars, n: usize) -> Result<Vec<Vec<u32>>> {
    let k = m.size();
    let count = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(k).filter(|&c| c <= EXHAUSTIVE_LIMIT));
    let Some(count) = count else {
        return Err(Error::InvalidInput("D_M of the carrier exceeds the enumeration limit"));
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let one = m.one();
    let mut out = Vec::new();
    let mut v = vec![0u32; n];
    for _ in 0..count {
        if total(m, &v) == Some(one) {
            out.push(v.clone());
        }
        for d in (0..n).rev() {
            v[d] += 1;
            if (v[d] as usize) < k {
                break;
            }
            v[d] = 0;
        }
    }
    Ok(out)
}

/// `(D_M f)(p)` for `f: n → target_size`.
fn push_forward(m: &FiniteScalars, p: &[u32], f: &[usize], target_size: usize) -> Option<Vec<u32>> {
    let mut out = vec![m.zero(); target_size];
    for (x, c) in p.iter().enumerate() {
        if *c != 0 {
            out[f[x]] = m.add(&out[f[x]], c)?;
        }
    }
    Some(out)
}

/// `(X, h)` with `h: D_M X → X` stored as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteConvexSet {
    pub m: FiniteScalars,
    pub names: Vec<String>,
    dists: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    h: Vec<usize>,
}

impl FiniteConvexSet {
    /// Tabulate `h` over all of `D_M(names)`.
    pub fn from_fn(m: FiniteScalars, names: Vec<String>, h: impl Fn(&[u32]) -> usize) -> Result<Self> {
        let n = names.len();
        let dists = enumerate_dists(&m, n)?;
        let mut hv = Vec::with_capacity(dists.len());
        for d in &dists {
            let x = h(d);
            if x >= n {
                return Err(Error::InvalidInput("convex structure leaves the carrier"));
            }
            hv.push(x);
        }
        let index = dists.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        Ok(FiniteConvexSet { m, names, dists, index, h: hv })
    }

    /// `D_M{0,…,n−1}` with `h = μ`; carrier points are the distributions.
    pub fn free(m: FiniteScalars, n: usize) -> Result<Self> {
        let base = enumerate_dists(&m, n)?;
        let names = base.iter().map(|d| show_dist(&m, d, None)).collect();
        let lookup: BTreeMap<Vec<u32>, usize> = base.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        FiniteConvexSet::from_fn(m, names, |outer| {
            let mut acc = vec![m.zero(); n];
            for (k, s) in outer.iter().enumerate() {
                if *s != 0 {
                    for (a, l) in acc.iter_mut().zip(&base[k]) {
                        *a = m.add(a, &m.mul(s, l)).expect("μ of a distribution is defined");
                    }
                }
            }
            lookup[&acc]
        })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn dists(&self) -> &[Vec<u32>] {
        &self.dists
    }

    /// `η(x)` as a coefficient vector.
    pub fn point(&self, x: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.size()];
        v[x] = self.m.one();
        v
    }

    pub fn dist_index(&self, p: &[u32]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn h(&self, p: &[u32]) -> Option<usize> {
        self.dist_index(p).map(|i| self.h[i])
    }

    /// `h ∘ η = id` and `h ∘ μ = h ∘ D_M h`, the latter over outer
    /// distributions with at most `nesting` inner terms; exhaustive when
    /// that space is at most `EXHAUSTIVE_LIMIT`, else 2000 seeded samples.
    pub fn verify(&self, nesting: usize) -> Report {
        let m = &self.m;
        let mut unit = LawCheck::new("h_eta");
        let mut mult = LawCheck::new("h_multiplicative");
        for x in 0..self.size() {
            unit.holds(self.h(&self.point(x)) == Some(x), || format!("h(1|{}⟩) ≠ {}", self.names[x], self.names[x]));
        }
        let coeff_choices = |s: usize| enumerate_dists(m, s).unwrap_or_default().into_iter().filter(|c| c.iter().all(|&x| x != 0));
        let mut check = |ks: &[usize], cs: &[u32]| {
            let mut flat = vec![m.zero(); self.size()];
            let mut outer = vec![m.zero(); self.size()];
            let mut ok = true;
            for (k, s) in ks.iter().zip(cs) {
                for (a, l) in flat.iter_mut().zip(&self.dists[*k]) {
                    match m.add(a, &m.mul(s, l)) {
                        Some(v) => *a = v,
                        None => ok = false,
                    }
                }
                let y = self.h[*k];
                match m.add(&outer[y], s) {
                    Some(v) => outer[y] = v,
                    None => ok = false,
                }
            }
            let (l, r) = (self.h(&flat), self.h(&outer));
            mult.holds(ok && l.is_some() && l == r, || {
                let terms: Vec<String> =
                    ks.iter().zip(cs).map(|(k, s)| format!("{}|{}⟩", m.show(s), show_dist(m, &self.dists[*k], Some(&self.names)))).collect();
                format!("h∘μ and h∘D h disagree on {}", terms.join(" ⊻ "))
            });
        };
        let nd = self.dists.len();
        let mut space = 0usize;
        for s in 1..=nesting.min(nd) {
            space = space.saturating_add(binomial(nd, s).saturating_mul(m.size().saturating_pow(s as u32)));
        }
        if space <= EXHAUSTIVE_LIMIT {
            for s in 1..=nesting.min(nd) {
                let choices: Vec<Vec<u32>> = coeff_choices(s).collect();
                for ks in combinations(nd, s) {
                    for cs in &choices {
                        check(&ks, cs);
                    }
                }
            }
        } else {
            let mut rng = Rng::new(DEFAULT_SEED);
            for _ in 0..2000 {
                let s = 1 + rng.below(nesting.min(nd));
                let mut ks: Vec<usize> = (0..s).map(|_| rng.below(nd)).collect();
                ks.sort_unstable();
                ks.dedup();
                let cs = m.sample_partition(ks.len(), &mut rng);
                if cs.iter().all(|&c| c != 0) {
                    check(&ks, &cs);
                }
            }
        }
        let mut rep = Report::new();
        rep.push(unit);
        rep.push(mult);
        rep
    }

    /// `f(h_X p) = h_Z((D_M f) p)` for all `p`.
    pub fn is_affine(&self, f: &[usize], z: &FiniteConvexSet) -> bool {
        self.affine_violation(f, z).is_none()
    }

    fn affine_violation(&self, f: &[usize], z: &FiniteConvexSet) -> Option<Vec<u32>> {
        self.dists.iter().zip(&self.h).find_map(|(p, &hx)| {
            let ok = push_forward(&self.m, p, f, z.size()).and_then(|q| z.h(&q)) == Some(f[hx]);
            (!ok).then(|| p.clone())
        })
    }
}

fn show_dist(m: &FiniteScalars, p: &[u32], names: Option<&[String]>) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(x, c)| match names {
            Some(ns) => format!("{}|{}⟩", m.show(c), ns[x]),
            None => format!("{}|{x}⟩", m.show(c)),
        })
        .collect();
    terms.join(" ⊻ ")
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Keeps the smaller root, so classes are named by their least member.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// `X/∼` with the quotient map `q`.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Classes ordered by least member.
    pub classes: Vec<Vec<usize>>,
    pub q: Vec<usize>,
    pub quotient: FiniteConvexSet,
    /// `h_∼ ∘ D_M q = q ∘ h`.
    pub report: Report,
}

/// Least congruence containing `r`: starting from the equivalence closure,
/// distributions with equal push-forwards to the current classes have their
/// `h`-values merged, in carrier order, until nothing changes.
pub fn least_congruence(x: &FiniteConvexSet, r: &[(usize, usize)]) -> Result<Quotient> {
    let n = x.size();
    if r.iter().any(|&(a, b)| a >= n || b >= n) {
        return Err(Error::InvalidInput("relation leaves the carrier"));
    }
    let mut uf = UnionFind((0..n).collect());
    for &(a, b) in r {
        uf.union(a, b);
    }
    loop {
        let cls: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        let mut first: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let mut changed = false;
        for (p, &hp) in x.dists.iter().zip(&x.h) {
            let key = push_forward(&x.m, p, &cls, n).expect("push-forward of a distribution is defined");
            match first.get(&key) {
                Some(&y) => changed |= uf.union(y, hp),
                None => {
                    first.insert(key, hp);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    let reps: Vec<usize> = roots.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let q: Vec<usize> = roots.iter().map(|r| reps.binary_search(r).unwrap()).collect();
    let classes: Vec<Vec<usize>> = reps.iter().map(|r| (0..n).filter(|&i| roots[i] == *r).collect()).collect();
    let names: Vec<String> = classes
        .iter()
        .map(|c| {
            let ms: Vec<&str> = c.iter().map(|&i| x.names[i].as_str()).collect();
            format!("[{}]", ms.join(", "))
        })
        .collect();
    // h_∼(ψ) = q(h(ψ lifted to class representatives))
    let quotient = FiniteConvexSet::from_fn(x.m, names, |psi| {
        let mut lift = vec![0u32; n];
        for (c, l) in psi.iter().enumerate() {
            lift[reps[c]] = *l;
        }
        q[x.h(&lift).expect("lifted distribution is normalized")]
    })?;
    let mut affine = LawCheck::new("quotient_affine");
    for (p, &hp) in x.dists.iter().zip(&x.h) {
        let ok = push_forward(&x.m, p, &q, quotient.size()).and_then(|v| quotient.h(&v)) == Some(q[hp]);
        affine.holds(ok, || format!("h_∼ is not well defined at {}", show_dist(&x.m, p, Some(&x.names))));
    }
    let mut report = Report::new();
    report.push(affine);
    Ok(Quotient { classes, q, quotient, report })
}

/// `X + Y` as `D_M(X ⊎ Y)/∼` with coprojections `c₁`, `c₂`.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub carrier: FiniteConvexSet,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    /// Size of `D_M(X ⊎ Y)` before the quotient.
    pub free_size: usize,
    /// For each class, one distribution over `X ⊎ Y` in it.
    representatives: Vec<Vec<u32>>,
}

pub fn aconv_coproduct(x: &FiniteConvexSet, y: &FiniteConvexSet) -> Result<Coproduct> {
    if x.m != y.m {
        return Err(Error::InvalidInput("convex sets over different scalars"));
    }
    let m = x.m;
    let (nx, ny) = (x.size(), y.size());
    let free = FiniteConvexSet::free(m, nx + ny)?;
    let base = enumerate_dists(&m, nx + ny)?;
    let lookup: BTreeMap<Vec<u32>, usize> = base.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
    let kappa = |p: &[u32], offset: usize| {
        let mut v = vec![0u32; nx + ny];
        v[offset..offset + p.len()].copy_from_slice(p);
        lookup[&v]
    };
    let eta_k = |i: usize| {
        let mut v = vec![0u32; nx + ny];
        v[i] = m.one();
        lookup[&v]
    };
    // D κ₁(φ) ∼ η(κ₁(h_X φ)) and likewise for Y
    let mut r = Vec::new();
    for (p, &hp) in x.dists.iter().zip(&x.h) {
        r.push((kappa(p, 0), eta_k(hp)));
    }
    for (p, &hp) in y.dists.iter().zip(&y.h) {
        r.push((kappa(p, nx), eta_k(nx + hp)));
    }
    let quo = least_congruence(&free, &r)?;
    let c1 = (0..nx).map(|i| quo.q[eta_k(i)]).collect();
    let c2 = (0..ny).map(|j| quo.q[eta_k(nx + j)]).collect();
    let representatives = quo.classes.iter().map(|c| base[c[0]].clone()).collect();
    Ok(Coproduct { carrier: quo.quotient, c1, c2, free_size: base.len(), representatives })
}

/// All functions `0..n → 0..k`, as vectors.
fn all_functions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut v = vec![0usize; n];
    loop {
        out.push(v.clone());
        let mut d = n;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            v[d] += 1;
            if v[d] < k {
                break;
            }
            v[d] = 0;
        }
    }
}

/// Affinity of the coprojections, joint epicness, and the universal
/// property against every candidate `Z`: each pair of affine maps has
/// exactly one affine mediator.
pub fn verify_coproduct(cp: &Coproduct, x: &FiniteConvexSet, y: &FiniteConvexSet, candidates: &[FiniteConvexSet]) -> Report {
    let c = &cp.carrier;
    let m = c.m;
    let mut aff = LawCheck::new("coprojections_affine");
    aff.holds(x.is_affine(&cp.c1, c), || String::from("c₁ is not affine"));
    aff.holds(y.is_affine(&cp.c2, c), || String::from("c₂ is not affine"));

    let mut epic = LawCheck::new("jointly_epic");
    let mut reached: BTreeSet<usize> = cp.c1.iter().chain(&cp.c2).copied().collect();
    loop {
        let before = reached.len();
        for (p, &hp) in c.dists.iter().zip(&c.h) {
            if p.iter().enumerate().all(|(i, l)| *l == 0 || reached.contains(&i)) {
                reached.insert(hp);
            }
        }
        if reached.len() == before {
            break;
        }
    }
    epic.holds(reached.len() == c.size(), || format!("images generate {} of {} points", reached.len(), c.size()));

    let mut univ = LawCheck::new("universal_property");
    let (nx, ny) = (x.size(), y.size());
    for (zi, z) in candidates.iter().enumerate() {
        let fs: Vec<Vec<usize>> = all_functions(nx, z.size()).into_iter().filter(|f| x.is_affine(f, z)).collect();
        let gs: Vec<Vec<usize>> = all_functions(ny, z.size()).into_iter().filter(|g| y.is_affine(g, z)).collect();
        let brute = (0..c.size()).try_fold(1usize, |a, _| a.checked_mul(z.size()).filter(|&t| t <= BRUTE_MEDIATORS)).is_some();
        let ks: Vec<Vec<usize>> =
            if brute { all_functions(c.size(), z.size()).into_iter().filter(|k| c.is_affine(k, z)).collect() } else { Vec::new() };
        for f in &fs {
            for g in &gs {
                let count = if brute {
                    ks.iter().filter(|k| cp.c1.iter().zip(f).all(|(a, b)| k[*a] == *b) && cp.c2.iter().zip(g).all(|(a, b)| k[*a] == *b)).count()
                } else {
                    // k = h_Z ∘ D[f, g] on representatives; unique by joint epicness
                    let fg: Vec<usize> = f.iter().chain(g).copied().collect();
                    let k: Option<Vec<usize>> =
                        cp.representatives.iter().map(|p| push_forward(&m, p, &fg, z.size()).and_then(|v| z.h(&v))).collect();
                    match k {
                        Some(k)
                            if c.is_affine(&k, z)
                                && cp.c1.iter().zip(f).all(|(a, b)| k[*a] == *b)
                                && cp.c2.iter().zip(g).all(|(a, b)| k[*a] == *b)
                                && reached.len() == c.size() =>
                        {
                            1
                        }
                        _ => 0,
                    }
                };
                univ.holds(count == 1, || format!("candidate {zi} (size {}), f = {f:?}, g = {g:?}: {count} mediators", z.size()));
            }
        }
    }
    let mut rep = Report::new();
    for l in [aff, epic, univ] {
        rep.push(l);
    }
    rep
}

/// Join-semilattice on `0..n` given by its join table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semilattice {
    pub join: Vec<Vec<usize>>,
}

impl Semilattice {
    pub fn new(join: Vec<Vec<usize>>) -> Result<Self> {
        let n = join.len();
        if join.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidInput("join must be an n×n table"));
        }
        for a in 0..n {
            if join[a][a] != a {
                return Err(Error::InvalidInput("join is not idempotent"));
            }
            for b in 0..n {
                if join[a][b] != join[b][a] {
                    return Err(Error::InvalidInput("join is not commutative"));
                }
                for c in 0..n {
                    if join[join[a][b]][c] != join[a][join[b][c]] {
                        return Err(Error::InvalidInput("join is not associative"));
                    }
                }
            }
        }
        Ok(Semilattice { join })
    }

    pub fn chain(n: usize) -> Self {
        Semilattice { join: (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect() }
    }

    pub fn size(&self) -> usize {
        self.join.len()
    }
}

/// Every semilattice structure on the labeled set `0..n`.
pub fn all_semilattices(n: usize) -> Vec<Semilattice> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    all_functions(pairs.len(), n)
        .into_iter()
        .filter_map(|vals| {
            let mut join = vec![vec![0; n]; n];
            for (a, row) in join.iter_mut().enumerate() {
                row[a] = a;
            }
            for ((a, b), v) in pairs.iter().zip(vals) {
                join[*a][*b] = v;
                join[*b][*a] = v;
            }
            Semilattice::new(join).ok()
        })
        .collect()
}

/// `L` as a convex set over `2` read with joins: `h(S) = ⋁ S`.
pub fn semilattice_bridge(l: &Semilattice) -> FiniteConvexSet {
    let names = (0..l.size()).map(|i| format!("{i}")).collect();
    FiniteConvexSet::from_fn(FiniteScalars::two(Reading::Join), names, |p| {
        let mut it = p.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, _)| i);
        let first = it.next().expect("distributions are nonempty");
        it.fold(first, |acc, i| l.join[acc][i])
    })
    .expect("2^n fits the enumeration limit for small semilattices")
}

/// Inverse of [`semilattice_bridge`]: `a ∨ b = h(1|a⟩ ⊻ 1|b⟩)`.
pub fn semilattice_from_convex(x: &FiniteConvexSet) -> Result<Semilattice> {
    if x.m != FiniteScalars::two(Reading::Join) {
        return Err(Error::InvalidInput("semilattices live over 2 read with joins"));
    }
    let n = x.size();
    let join = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut v = vec![0u32; n];
                    v[a] = 1;
                    v[b] = 1;
                    x.h(&v).unwrap()
                })
                .collect()
        })
        .collect();
    Semilattice::new(join)
}

/// Semilattice coproduct built directly: pairs `(Option<a>, Option<b>)`,
/// not both empty, joined componentwise. Returns it with its injections.
pub fn semilattice_coproduct_oracle(a: &Semilattice, b: &Semilattice) -> (Semilattice, Vec<usize>, Vec<usize>) {
    let mut elems: Vec<(Option<usize>, Option<usize>)> = Vec::new();
    elems.extend((0..a.size()).map(|i| (Some(i), None)));
    elems.extend((0..b.size()).map(|j| (None, Some(j))));
    for i in 0..a.size() {
        elems.extend((0..b.size()).map(|j| (Some(i), Some(j))));
    }
    let pos = |e: &(Option<usize>, Option<usize>)| elems.iter().position(|x| x == e).unwrap();
    let j1 = |x: Option<usize>, y: Option<usize>, t: &Semilattice| match (x, y) {
        (Some(x), Some(y)) => Some(t.join[x][y]),
        (x, None) => x,
        (None, y) => y,
    };
    let join = elems
        .iter()
        .map(|p| elems.iter().map(|q| pos(&(j1(p.0, q.0, a), j1(p.1, q.1, b)))).collect())
        .collect();
    let i1 = (0..a.size()).collect();
    let i2 = (a.size()..a.size() + b.size()).collect();
    (Semilattice { join }, i1, i2)
}

/// Every convex structure on a carrier of size `0..=max_size`. Over `2`
/// read with joins these are the semilattices; otherwise tables are
/// enumerated directly when `n^(non-point distributions)` stays within
/// `EXHAUSTIVE_LIMIT`.
pub fn candidate_convex_sets(m: FiniteScalars, max_size: usize) -> Result<Vec<FiniteConvexSet>> {
    let mut out = Vec::new();
    for n in 0..=max_size {
        if m == FiniteScalars::two(Reading::Join) {
            out.extend(all_semilattices(n).iter().map(semilattice_bridge));
            continue;
        }
        let dists = enumerate_dists(&m, n)?;
        let free: Vec<usize> = (0..dists.len()).filter(|&i| dists[i].iter().filter(|c| **c != 0).count() > 1).collect();
        let fits = (0..free.len()).try_fold(1usize, |a, _| a.checked_mul(n).filter(|&t| t <= EXHAUSTIVE_LIMIT)).is_some();
        if !fits {
            return Err(Error::InvalidInput("too many candidate convex structures"));
        }
        let names: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        for vals in all_functions(free.len(), n) {
            let table: BTreeMap<&[u32], usize> = free.iter().zip(&vals).map(|(&i, &v)| (dists[i].as_slice(), v)).collect();
            let z = FiniteConvexSet::from_fn(m, names.clone(), |p| match table.get(p) {
                Some(&v) => v,
                None => p.iter().position(|c| *c != 0).unwrap(),
            })?;
            if z.verify(3).passed() {
                out.push(z);
            }
        }
    }
    Ok(out)
}
