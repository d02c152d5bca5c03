//! Effect algebras, effect monoids and effect divisoids with exhaustive or
//! seeded law harnesses.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::report::{LawCheck, Report};
use crate::rng::Rng;
use crate::vnalg::{AlgElement, FdAlgebra};
use crate::DEFAULT_SEED;

/// Largest tuple space swept exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 100_000;
const FALLBACK_TRIALS: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { seed: u64, trials: usize },
}

pub trait EffectAlgebra {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn perp(&self, a: &Self::Elem) -> Self::Elem;
    /// `a ⊻ b`, or `None` when `a` and `b` are not summable.
    fn ovee(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    /// The whole carrier, when finite.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn sample(&self, rng: &mut Rng) -> Self::Elem;

    /// `a ≤ b` iff `a ⊻ c = b` for some `c`; searched on finite carriers.
    fn le(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        match self.elements() {
            Some(es) => es.iter().any(|c| self.ovee(a, c).as_ref() == Some(b)),
            None => self.ovee(a, &self.perp(b)).is_some(),
        }
    }

    /// `n` elements with `⋁ = 1`, for samplers that cannot hit such tuples
    /// by chance.
    fn sample_partition(&self, _n: usize, _rng: &mut Rng) -> Option<Vec<Self::Elem>> {
        None
    }

    fn show(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

pub trait EffectMonoid: EffectAlgebra {
    fn odot(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

pub trait EffectDivisoid: EffectMonoid {
    /// `a / b`, defined iff `a ≤ b`.
    fn divide(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// `⋁` of a list, `None` if some partial sum is undefined.
pub(crate) fn big_ovee<E: EffectAlgebra>(e: &E, xs: &[E::Elem]) -> Option<E::Elem> {
    xs.iter().try_fold(e.zero(), |acc, x| e.ovee(&acc, x))
}

/// All `k`-tuples when that is at most `EXHAUSTIVE_LIMIT`, else seeded
/// samples; the flag says which.
fn tuples<E: EffectAlgebra>(e: &E, mode: Mode, k: usize) -> (Vec<Vec<E::Elem>>, bool) {
    if mode == Mode::Exhaustive {
        if let Some(es) = e.elements() {
            let n = es.len();
            let total = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&t| t <= EXHAUSTIVE_LIMIT));
            if let Some(total) = total {
                let mut out = Vec::with_capacity(total);
                let mut idx = vec![0usize; k];
                for _ in 0..total {
                    out.push(idx.iter().map(|&i| es[i].clone()).collect());
                    for d in (0..k).rev() {
                        idx[d] += 1;
                        if idx[d] < n {
                            break;
                        }
                        idx[d] = 0;
                    }
                }
                return (out, true);
            }
        }
    }
    let (seed, trials) = match mode {
        Mode::Random { seed, trials } => (seed, trials),
        Mode::Exhaustive => (DEFAULT_SEED, FALLBACK_TRIALS),
    };
    let mut rng = Rng::new(seed);
    ((0..trials).map(|_| (0..k).map(|_| e.sample(&mut rng)).collect()).collect(), false)
}

/// Effect-algebra axioms and the derived laws: involution, positivity,
/// cancellation, and that `≤` is a partial order.
pub fn ea_harness<E: EffectAlgebra>(e: &E, mode: Mode) -> Report {
    let (zero, one) = (e.zero(), e.one());
    let mut comm = LawCheck::new("pcm_commutative");
    let mut assoc = LawCheck::new("pcm_associative");
    let mut zlaw = LawCheck::new("pcm_zero");
    let mut orth = LawCheck::new("orthocomplement");
    let mut uniq = LawCheck::new("orthocomplement_unique");
    let mut zo = LawCheck::new("zero_one");
    let mut inv = LawCheck::new("involution");
    let mut pos = LawCheck::new("positivity");
    let mut canc = LawCheck::new("cancellation");
    let mut refl = LawCheck::new("order_reflexive");
    let mut anti = LawCheck::new("order_antisymmetric");
    let mut trans = LawCheck::new("order_transitive");
    let s = |x: &E::Elem| e.show(x);

    let (singles, _) = tuples(e, mode, 1);
    for t in &singles {
        let a = &t[0];
        zlaw.holds(e.ovee(a, &zero).as_ref() == Some(a), || format!("{} ⊻ 0 ≠ {}", s(a), s(a)));
        let p = e.perp(a);
        orth.holds(e.ovee(a, &p).as_ref() == Some(&one), || format!("{} ⊻ {}⊥ ≠ 1", s(a), s(a)));
        zo.holds(e.ovee(a, &one).is_none() || *a == zero, || format!("{} ⊥ 1 but {} ≠ 0", s(a), s(a)));
        inv.holds(e.perp(&p) == *a, || format!("{}⊥⊥ = {}", s(a), s(&e.perp(&p))));
        refl.holds(e.le(a, a), || format!("{} ≰ {}", s(a), s(a)));
    }
    let (pairs, _) = tuples(e, mode, 2);
    for t in &pairs {
        let (a, b) = (&t[0], &t[1]);
        let (ab, ba) = (e.ovee(a, b), e.ovee(b, a));
        comm.holds(ab == ba, || format!("{} ⊻ {} = {:?} but {} ⊻ {} = {:?}", s(a), s(b), ab, s(b), s(a), ba));
        if ab.as_ref() == Some(&one) {
            uniq.holds(*b == e.perp(a), || format!("{} ⊻ {} = 1 but {}⊥ = {}", s(a), s(b), s(a), s(&e.perp(a))));
        }
        if ab.as_ref() == Some(&zero) {
            pos.holds(*a == zero && *b == zero, || format!("{} ⊻ {} = 0", s(a), s(b)));
        }
        if e.le(a, b) && e.le(b, a) {
            anti.holds(a == b, || format!("{} ≤ {} ≤ {} but they differ", s(a), s(b), s(a)));
        }
    }
    let (triples, _) = tuples(e, mode, 3);
    for t in &triples {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        if let Some(ab) = e.ovee(a, b) {
            if let Some(abc) = e.ovee(&ab, c) {
                let r = e.ovee(b, c).and_then(|bc| e.ovee(a, &bc));
                assoc.holds(r.as_ref() == Some(&abc), || {
                    format!("({} ⊻ {}) ⊻ {} = {} but {} ⊻ ({} ⊻ {}) = {:?}", s(a), s(b), s(c), s(&abc), s(a), s(b), s(c), r)
                });
            }
            if let Some(ac) = e.ovee(a, c) {
                if ab == ac {
                    canc.holds(b == c, || format!("{} ⊻ {} = {} ⊻ {} with {} ≠ {}", s(a), s(b), s(a), s(c), s(b), s(c)));
                }
            }
        }
        if e.le(a, b) && e.le(b, c) {
            trans.holds(e.le(a, c), || format!("{} ≤ {} ≤ {} but {} ≰ {}", s(a), s(b), s(c), s(a), s(c)));
        }
    }
    let mut rep = Report::new();
    for c in [comm, assoc, zlaw, orth, uniq, zo, inv, pos, canc, refl, anti, trans] {
        rep.push(c);
    }
    rep
}

/// Unit, associativity and distributivity of `⊙`.
pub fn emonoid_check<M: EffectMonoid>(m: &M, mode: Mode) -> Report {
    let one = m.one();
    let s = |x: &M::Elem| m.show(x);
    let mut unit = LawCheck::new("monoid_unit");
    let mut assoc = LawCheck::new("monoid_associative");
    let mut dist = LawCheck::new("monoid_distributive");
    for t in tuples(m, mode, 1).0 {
        let a = &t[0];
        unit.holds(m.odot(&one, a) == *a && m.odot(a, &one) == *a, || format!("1 ⊙ {} or {} ⊙ 1 differs", s(a), s(a)));
    }
    for t in tuples(m, mode, 3).0 {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let l = m.odot(&m.odot(a, b), c);
        let r = m.odot(a, &m.odot(b, c));
        assoc.holds(l == r, || format!("({} ⊙ {}) ⊙ {} = {} but {} ⊙ ({} ⊙ {}) = {}", s(a), s(b), s(c), s(&l), s(a), s(b), s(c), s(&r)));
    }
    for t in tuples(m, mode, 4).0 {
        let (a, b, c, d) = (&t[0], &t[1], &t[2], &t[3]);
        if let (Some(ab), Some(cd)) = (m.ovee(a, b), m.ovee(c, d)) {
            let l = m.odot(&ab, &cd);
            let r = big_ovee(m, &[m.odot(a, c), m.odot(b, c), m.odot(a, d), m.odot(b, d)]);
            dist.holds(r.as_ref() == Some(&l), || {
                format!("({} ⊻ {}) ⊙ ({} ⊻ {}) = {} but the expanded sum is {:?}", s(a), s(b), s(c), s(d), s(&l), r)
            });
        }
    }
    let mut rep = Report::new();
    for c in [unit, assoc, dist] {
        rep.push(c);
    }
    rep
}

/// Whenever `⋁ aᵢ = 1` and `⋁ aᵢ ⊙ bᵢ = 1`, each `aᵢ ⊙ bᵢ = aᵢ`; over all
/// tuples of length `1..=max_len`.
pub fn emonoid_lemma_check<M: EffectMonoid>(m: &M, mode: Mode, max_len: usize) -> Report {
    let one = m.one();
    let s = |x: &M::Elem| m.show(x);
    let mut lemma = LawCheck::new("emonoid_lemma");
    let mut premises = LawCheck::new("emonoid_lemma_premise_met");
    let mut met = 0usize;
    let mut rng = Rng::new(match mode {
        Mode::Random { seed, .. } => seed ^ 0x5eed,
        Mode::Exhaustive => DEFAULT_SEED,
    });
    for n in 1..=max_len {
        let (mut ts, exhaustive) = tuples(m, mode, 2 * n);
        if !exhaustive {
            // half the samples are built to satisfy the premise
            for t in ts.iter_mut().step_by(2) {
                if let Some(a) = m.sample_partition(n, &mut rng) {
                    for i in 0..n {
                        t[2 * i] = a[i].clone();
                        if a[i] != m.zero() {
                            t[2 * i + 1] = one.clone();
                        }
                    }
                }
            }
        }
        for t in &ts {
            let a: Vec<M::Elem> = (0..n).map(|i| t[2 * i].clone()).collect();
            let ab: Vec<M::Elem> = (0..n).map(|i| m.odot(&t[2 * i], &t[2 * i + 1])).collect();
            if big_ovee(m, &a).as_ref() == Some(&one) && big_ovee(m, &ab).as_ref() == Some(&one) {
                met += 1;
                let bad = (0..n).find(|&i| ab[i] != a[i]);
                lemma.holds(bad.is_none(), || {
                    let i = bad.unwrap();
                    format!("a_{i} ⊙ b_{i} = {} but a_{i} = {}", s(&ab[i]), s(&a[i]))
                });
            }
        }
    }
    premises.holds(met > 0, || String::from("no tuple satisfied the premise"));
    let mut rep = Report::new();
    rep.push(lemma);
    rep.push(premises);
    rep
}

/// Divisoid axioms 1–3 and the derived identities `0/0 = 0`, `1/1 = 1`,
/// `a/1 = a`, `(a/a)⊙(a/a) = a/a`, `(a⊙b)/a = (a/a)⊙b` and
/// `(b/c)⊙(a/b) = a/c` for `a ≤ b ≤ c`.
pub fn divisoid_check<D: EffectDivisoid>(d: &D, mode: Mode) -> Report {
    let (zero, one) = (d.zero(), d.one());
    let s = |x: &D::Elem| d.show(x);
    let mut ax1 = LawCheck::new("divisoid_quotient");
    let mut ax1u = LawCheck::new("divisoid_quotient_unique");
    let mut ax2 = LawCheck::new("divisoid_below_support");
    let mut ax3 = LawCheck::new("divisoid_support_idempotent");
    let mut dom = LawCheck::new("divisoid_domain");
    let mut derived = LawCheck::new("divisoid_derived");
    let mut chain = LawCheck::new("divisoid_chain");
    let div = |a: &D::Elem, b: &D::Elem| d.divide(a, b);
    let elements = d.elements();

    derived.holds(div(&zero, &zero).ok() == Some(zero.clone()), || String::from("0/0 ≠ 0"));
    derived.holds(div(&one, &one).ok() == Some(one.clone()), || String::from("1/1 ≠ 1"));
    for t in tuples(d, mode, 1).0 {
        let a = &t[0];
        derived.holds(div(a, &one).ok().as_ref() == Some(a), || format!("{}/1 ≠ {}", s(a), s(a)));
        match div(a, a) {
            Ok(aa) => {
                ax2.holds(d.le(a, &aa), || format!("{} ≰ {}/{}", s(a), s(a), s(a)));
                ax3.holds(div(&aa, &aa).ok().as_ref() == Some(&aa), || format!("({0}/{0})/({0}/{0}) ≠ {0}/{0}", s(a)));
                derived.holds(d.odot(&aa, &aa) == aa, || format!("{0}/{0} is not ⊙-idempotent", s(a)));
            }
            Err(e) => ax2.holds(false, || format!("{}/{} undefined: {e}", s(a), s(a))),
        }
    }
    for t in tuples(d, mode, 2).0 {
        let (a, b) = (&t[0], &t[1]);
        let q = div(a, b);
        if !d.le(a, b) {
            dom.holds(q == Err(Error::NotDefined), || format!("{}/{} defined though {} ≰ {}", s(a), s(b), s(a), s(b)));
        } else {
            match (q, div(b, b)) {
                (Ok(q), Ok(bb)) => {
                    ax1.holds(d.le(&q, &bb) && d.odot(b, &q) == *a, || format!("{} ⊙ ({}/{}) ≠ {}", s(b), s(a), s(b), s(a)));
                    if let Some(es) = &elements {
                        let other = es.iter().find(|x| **x != q && d.le(x, &bb) && d.odot(b, x) == *a);
                        ax1u.holds(other.is_none(), || format!("{} also solves {} ⊙ x = {}", s(other.unwrap()), s(b), s(a)));
                    }
                }
                _ => dom.holds(false, || format!("{}/{} undefined though {} ≤ {}", s(a), s(b), s(a), s(b))),
            }
        }
        let ab = d.odot(a, b);
        if let (Ok(l), Ok(aa)) = (div(&ab, a), div(a, a)) {
            let r = d.odot(&aa, b);
            derived.holds(l == r, || format!("({0} ⊙ {1})/{0} = {2} but ({0}/{0}) ⊙ {1} = {3}", s(a), s(b), s(&l), s(&r)));
        }
    }
    for t in tuples(d, mode, 3).0 {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        if d.le(a, b) && d.le(b, c) {
            if let (Ok(bc), Ok(ab), Ok(ac)) = (div(b, c), div(a, b), div(a, c)) {
                let l = d.odot(&bc, &ab);
                chain.holds(l == ac, || format!("({1}/{2}) ⊙ ({0}/{1}) ≠ {0}/{2}", s(a), s(b), s(c)));
            }
        }
    }
    let mut rep = Report::new();
    for c in [ax1, ax1u, ax2, ax3, dom, derived, chain] {
        rep.push(c);
    }
    rep
}

/// Finite Boolean algebra on `atoms` atoms as bitmasks; `⊻` is disjoint
/// union and `⊙` is meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BooleanAlgebra {
    pub atoms: u32,
}

impl BooleanAlgebra {
    pub fn new(atoms: u32) -> Result<Self> {
        if atoms > 16 {
            return Err(Error::InvalidInput("at most 16 atoms"));
        }
        Ok(BooleanAlgebra { atoms })
    }

    /// The two-element Boolean algebra `2`.
    pub fn two() -> Self {
        BooleanAlgebra { atoms: 1 }
    }

    pub fn size(&self) -> usize {
        1usize << self.atoms
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.atoms) - 1) as u32
    }
}

impl EffectAlgebra for BooleanAlgebra {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        self.full()
    }
    fn perp(&self, a: &u32) -> u32 {
        !a & self.full()
    }
    fn ovee(&self, a: &u32, b: &u32) -> Option<u32> {
        (a & b == 0).then_some(a | b)
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.size() as u32).collect())
    }
    fn sample(&self, rng: &mut Rng) -> u32 {
        rng.below(self.size()) as u32
    }
    fn le(&self, a: &u32, b: &u32) -> bool {
        a & !b == 0
    }
    fn show(&self, a: &u32) -> String {
        format!("{a:#b}")
    }
}

impl EffectMonoid for BooleanAlgebra {
    fn odot(&self, a: &u32, b: &u32) -> u32 {
        a & b
    }
}

impl EffectDivisoid for BooleanAlgebra {
    fn divide(&self, a: &u32, b: &u32) -> Result<u32> {
        if self.le(a, b) {
            Ok(*a)
        } else {
            Err(Error::NotDefined)
        }
    }
}

/// `ℚ ∩ [0,1]` with partial addition and the usual product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UnitRational;

impl UnitRational {
    pub fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn contains(x: &BigRational) -> bool {
        !x.numer().sign().eq(&num_bigint::Sign::Minus) && *x <= BigRational::one()
    }
}

impl EffectAlgebra for UnitRational {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn perp(&self, a: &BigRational) -> BigRational {
        BigRational::one() - a
    }
    fn ovee(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        let s = a + b;
        (s <= BigRational::one()).then_some(s)
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    /// Small denominators, so that sums and chains occur often.
    fn sample(&self, rng: &mut Rng) -> BigRational {
        let d = 1 + rng.below(12) as i64;
        let k = rng.below(d as usize + 1) as i64;
        let scale = 1 + rng.below(3) as i64;
        Self::ratio(k, d * scale)
    }
    fn le(&self, a: &BigRational, b: &BigRational) -> bool {
        a <= b
    }
    fn sample_partition(&self, n: usize, rng: &mut Rng) -> Option<Vec<BigRational>> {
        let mut w: Vec<i64> = (0..n).map(|_| rng.below(7) as i64).collect();
        if w.iter().all(|&x| x == 0) {
            w[rng.below(n)] = 1;
        }
        let total: i64 = w.iter().sum();
        Some(w.into_iter().map(|x| Self::ratio(x, total)).collect())
    }
    fn show(&self, a: &BigRational) -> String {
        format!("{a}")
    }
}

impl EffectMonoid for UnitRational {
    fn odot(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
}

impl EffectDivisoid for UnitRational {
    /// `a/b` with `0/0 = 0`.
    fn divide(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        if a > b {
            return Err(Error::NotDefined);
        }
        if b.is_zero() {
            return Ok(BigRational::zero());
        }
        Ok(a / b)
    }
}

/// Effect algebra given by explicit tables over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEa {
    pub names: Vec<String>,
    pub zero: usize,
    pub one: usize,
    pub perp: Vec<usize>,
    pub ovee: Vec<Vec<Option<usize>>>,
    /// Optional `⊙`, making this an effect monoid.
    pub odot: Option<Vec<Vec<usize>>>,
}

impl TableEa {
    pub fn new(names: Vec<String>, zero: usize, one: usize, perp: Vec<usize>, ovee: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || zero >= n || one >= n {
            return Err(Error::InvalidInput("zero and one must be carrier indices"));
        }
        if perp.len() != n || perp.iter().any(|&p| p >= n) {
            return Err(Error::InvalidInput("perp must map the carrier to itself"));
        }
        if ovee.len() != n || ovee.iter().any(|r| r.len() != n || r.iter().flatten().any(|&k| k >= n)) {
            return Err(Error::InvalidInput("ovee must be an n×n partial table"));
        }
        Ok(TableEa { names, zero, one, perp, ovee, odot: None })
    }

    pub fn with_odot(mut self, odot: Vec<Vec<usize>>) -> Result<Self> {
        let n = self.names.len();
        if odot.len() != n || odot.iter().any(|r| r.len() != n || r.iter().any(|&k| k >= n)) {
            return Err(Error::InvalidInput("odot must be an n×n total table"));
        }
        self.odot = Some(odot);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn from_boolean(b: BooleanAlgebra) -> Self {
        let n = b.size();
        let ovee = (0..n as u32).map(|x| (0..n as u32).map(|y| b.ovee(&x, &y).map(|z| z as usize)).collect()).collect();
        let odot = (0..n as u32).map(|x| (0..n as u32).map(|y| (x & y) as usize).collect()).collect();
        TableEa {
            names: (0..n).map(|x| format!("{x:#b}")).collect(),
            zero: 0,
            one: n - 1,
            perp: (0..n as u32).map(|x| b.perp(&x) as usize).collect(),
            ovee,
            odot: Some(odot),
        }
    }

    /// Overwrite one (symmetric) entry of `⊻`, for fault injection.
    pub fn set_ovee(&mut self, a: usize, b: usize, v: Option<usize>) {
        self.ovee[a][b] = v;
        self.ovee[b][a] = v;
    }
}

impl EffectAlgebra for TableEa {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn perp(&self, a: &usize) -> usize {
        self.perp[*a]
    }
    fn ovee(&self, a: &usize, b: &usize) -> Option<usize> {
        self.ovee[*a][*b]
    }
    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.size()).collect())
    }
    fn sample(&self, rng: &mut Rng) -> usize {
        rng.below(self.size())
    }
    fn show(&self, a: &usize) -> String {
        self.names[*a].clone()
    }
}

impl EffectMonoid for TableEa {
    /// Tables without `⊙` act as the trivial `a ⊙ b = 0` unless one side is `1`.
    fn odot(&self, a: &usize, b: &usize) -> usize {
        match &self.odot {
            Some(t) => t[*a][*b],
            None if *a == self.one => *b,
            None if *b == self.one => *a,
            None => self.zero,
        }
    }
}

/// `[0,1]_𝒜` as an effect module over `ℚ ∩ [0,1]` acting by scaling, on
/// sampled scalars and effects.
pub fn predicates_as_module(alg: &FdAlgebra, seed: u64, trials: usize, tol: f64) -> Report {
    let q = UnitRational;
    let mut rng = Rng::new(seed);
    let f = |x: &BigRational| -> f64 {
        let n: f64 = num_traits::ToPrimitive::to_f64(x.numer()).unwrap_or(f64::NAN);
        let d: f64 = num_traits::ToPrimitive::to_f64(x.denom()).unwrap_or(f64::NAN);
        n / d
    };
    let act = |l: &BigRational, p: &AlgElement| p.scale(f(l));
    let mut closed = LawCheck::new("action_lands_in_effects");
    let mut unit = LawCheck::new("module_unit");
    let mut assoc = LawCheck::new("module_associative");
    let mut add_e = LawCheck::new("module_additive_in_effect");
    let mut add_s = LawCheck::new("module_additive_in_scalar");
    for trial in 0..trials {
        let (l, m) = (q.sample(&mut rng), q.sample(&mut rng));
        let p = AlgElement::random_effect(alg, &mut rng);
        // r ≤ p⊥
        let c = p.perp().sqrt(tol).unwrap_or_else(|_| AlgElement::zero(alg));
        let r = c.mul(&AlgElement::random_effect(alg, &mut rng)).mul(&c).map(CMatrix::hermitian_part);
        closed.holds(act(&l, &p).is_effect(tol), || format!("trial {trial}: {l}·p is not an effect"));
        unit.observe(act(&q.one(), &p).dist(&p), tol, || format!("trial {trial}: 1·p ≠ p"));
        let lm = q.odot(&l, &m);
        let d = act(&lm, &p).dist(&act(&l, &act(&m, &p)));
        assoc.observe(d, tol, || format!("trial {trial}: ({l}⊙{m})·p ≠ {l}·({m}·p), defect {d:e}"));
        let (lp, lr) = (act(&l, &p), act(&l, &r));
        let summable = lp.add(&lr).is_effect(tol);
        let d = act(&l, &p.add(&r)).dist(&lp.add(&lr));
        add_e.observe(if summable { d } else { f64::INFINITY }, tol, || format!("trial {trial}: {l}·(p ⊻ r) ≠ {l}·p ⊻ {l}·r"));
        if let Some(s) = q.ovee(&l, &m) {
            let (a, b) = (act(&l, &p), act(&m, &p));
            let d = act(&s, &p).dist(&a.add(&b));
            add_s.observe(if a.add(&b).is_effect(tol) { d } else { f64::INFINITY }, tol, || {
                format!("trial {trial}: ({l} ⊻ {m})·p ≠ {l}·p ⊻ {m}·p")
            });
        }
    }
    let mut rep = Report::new();
    for c in [closed, unit, assoc, add_e, add_s] {
        rep.push(c);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn rand_mode() -> Mode {
        Mode::Random { seed: 7, trials: 500 }
    }

    #[test]
    fn two_is_an_effect_divisoid() {
        let two = BooleanAlgebra::two();
        assert!(ea_harness(&two, Mode::Exhaustive).passed());
        assert!(emonoid_check(&two, Mode::Exhaustive).passed());
        assert!(divisoid_check(&two, Mode::Exhaustive).passed());
        assert_eq!(two.divide(&1, &1), Ok(1));
        assert_eq!(two.divide(&1, &0), Err(Error::NotDefined));
    }

    #[test]
    fn boolean_algebras_up_to_16_elements() {
        for k in 0..=4 {
            let b = BooleanAlgebra::new(k).unwrap();
            for rep in [ea_harness(&b, Mode::Exhaustive), emonoid_check(&b, Mode::Exhaustive), divisoid_check(&b, Mode::Exhaustive)] {
                assert!(rep.passed(), "{k} atoms: {:?}", rep.failures().collect::<Vec<_>>());
            }
            let t = TableEa::from_boolean(b);
            assert!(ea_harness(&t, Mode::Exhaustive).passed());
        }
    }

    #[test]
    fn rational_unit_interval() {
        let q = UnitRational;
        for rep in [ea_harness(&q, rand_mode()), emonoid_check(&q, rand_mode()), divisoid_check(&q, rand_mode())] {
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
            assert!(rep.checks.iter().all(|c| c.checked > 0 || c.law == "divisoid_quotient_unique"), "{rep:?}");
        }
        let a = UnitRational::ratio(1, 3);
        assert_eq!(q.divide(&a, &q.one()), Ok(a.clone()));
        assert_eq!(q.divide(&q.zero(), &q.zero()), Ok(q.zero()));
        assert_eq!(q.divide(&a, &UnitRational::ratio(1, 4)), Err(Error::NotDefined));
        assert_eq!(q.divide(&UnitRational::ratio(1, 4), &UnitRational::ratio(1, 2)), Ok(UnitRational::ratio(1, 2)));
    }

    #[test]
    fn broken_orthocomplement_is_reported() {
        let mut t = TableEa::from_boolean(BooleanAlgebra::new(2).unwrap());
        // 0b01 ⊻ 0b10 no longer reaches 1
        t.set_ovee(1, 2, Some(2));
        let rep = ea_harness(&t, Mode::Exhaustive);
        let c = rep.get("orthocomplement").unwrap();
        assert!(!c.passed);
        assert!(c.witness.as_ref().unwrap().contains("0b1"), "{c:?}");
    }

    #[test]
    fn emonoid_lemma() {
        let two = BooleanAlgebra::two();
        let rep = emonoid_lemma_check(&two, Mode::Exhaustive, 3);
        assert!(rep.passed());
        // the n = 1 case on 2: a = 1 and a ⊙ b = 1 force b = 1
        // premises met: 1 + 2·2 + 3·4
        assert_eq!(rep.get("emonoid_lemma").unwrap().checked, 17);
        let rep = emonoid_lemma_check(&UnitRational, Mode::Random { seed: 3, trials: 500 }, 3);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        let rep = emonoid_lemma_check(&BooleanAlgebra::new(2).unwrap(), Mode::Exhaustive, 3);
        assert!(rep.passed());
    }

    #[test]
    fn predicates_form_a_module() {
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        let rep = predicates_as_module(&alg, 5, 100, 1e-9);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn table_rejects_bad_shapes() {
        let names = vec!["0".to_string(), "1".to_string()];
        assert!(TableEa::new(names.clone(), 0, 2, vec![1, 0], vec![vec![Some(0), Some(1)], vec![Some(1), None]]).is_err());
        assert!(TableEa::new(names, 0, 1, vec![1, 0], vec![vec![Some(0), Some(1)], vec![Some(1), None]]).is_ok());
    }
}
