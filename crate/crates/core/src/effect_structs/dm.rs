//! Formal `M`-convex combinations and the monad `D_M`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_rational::BigRational;

use super::ea::{BooleanAlgebra, EffectAlgebra, EffectMonoid, UnitRational};
use crate::error::{Error, Result};
use crate::report::{LawCheck, Report};
use crate::rng::Rng;

/// Coefficient arithmetic for `D_M`: a partial sum and a product.
pub trait Scalars {
    type S: Clone + Ord + Debug;

    fn zero(&self) -> Self::S;
    fn one(&self) -> Self::S;
    fn add(&self, a: &Self::S, b: &Self::S) -> Option<Self::S>;
    fn mul(&self, a: &Self::S, b: &Self::S) -> Self::S;
    /// `n` coefficients summing to `1`, some possibly zero.
    fn sample_partition(&self, n: usize, rng: &mut Rng) -> Vec<Self::S>;

    fn show(&self, a: &Self::S) -> String {
        format!("{a:?}")
    }
}

impl Scalars for UnitRational {
    type S = BigRational;

    fn zero(&self) -> BigRational {
        EffectAlgebra::zero(self)
    }
    fn one(&self) -> BigRational {
        EffectAlgebra::one(self)
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        self.ovee(a, b)
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.odot(a, b)
    }
    fn sample_partition(&self, n: usize, rng: &mut Rng) -> Vec<BigRational> {
        EffectAlgebra::sample_partition(self, n, rng).unwrap()
    }
    fn show(&self, a: &BigRational) -> String {
        format!("{a}")
    }
}

/// How coefficients of a finite effect monoid are summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    /// The effect-algebra sum: defined only on disjoint arguments. Over `2`
    /// this leaves only point masses.
    Strict,
    /// The lattice join, total and idempotent. Over `2`, `D_M X` is the
    /// nonempty finite subsets of `X` and convex sets are semilattices.
    Join,
}

/// A finite effect monoid (a finite Boolean algebra) used as scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteScalars {
    pub alg: BooleanAlgebra,
    pub reading: Reading,
}

impl FiniteScalars {
    pub fn two(reading: Reading) -> Self {
        FiniteScalars { alg: BooleanAlgebra::two(), reading }
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }
}

impl Scalars for FiniteScalars {
    type S = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        self.alg.full()
    }
    fn add(&self, a: &u32, b: &u32) -> Option<u32> {
        match self.reading {
            Reading::Strict => self.alg.ovee(a, b),
            Reading::Join => Some(a | b),
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        a & b
    }
    /// Each atom goes to one index (strict) or a nonempty set of indices
    /// (join).
    fn sample_partition(&self, n: usize, rng: &mut Rng) -> Vec<u32> {
        let mut out = alloc::vec![0u32; n];
        for atom in 0..self.alg.atoms {
            out[rng.below(n)] |= 1 << atom;
            if self.reading == Reading::Join {
                for c in out.iter_mut() {
                    if rng.below(3) == 0 {
                        *c |= 1 << atom;
                    }
                }
            }
        }
        out
    }
    fn show(&self, a: &u32) -> String {
        format!("{a:#b}")
    }
}

/// Finitely supported `p: X → M` with `⋁ p(x) = 1`; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalDist<S, X> {
    pub coeffs: BTreeMap<X, S>,
}

impl<S: Clone + Ord + Debug, X: Clone + Ord> FormalDist<S, X> {
    /// `λ₁|x₁⟩ ⊻ ⋯ ⊻ λₙ|xₙ⟩`, merging repeated points.
    pub fn new<M: Scalars<S = S>>(m: &M, terms: impl IntoIterator<Item = (X, S)>) -> Result<Self> {
        let mut coeffs: BTreeMap<X, S> = BTreeMap::new();
        let mut total = m.zero();
        for (x, l) in terms {
            total = m.add(&total, &l).ok_or(Error::NotNormalized)?;
            let merged = match coeffs.get(&x) {
                Some(c) => m.add(c, &l).ok_or(Error::NotNormalized)?,
                None => l,
            };
            coeffs.insert(x, merged);
        }
        if total != m.one() {
            return Err(Error::NotNormalized);
        }
        let zero = m.zero();
        coeffs.retain(|_, l| *l != zero);
        Ok(FormalDist { coeffs })
    }

    pub fn support(&self) -> impl Iterator<Item = &X> {
        self.coeffs.keys()
    }

    pub fn coeff<M: Scalars<S = S>>(&self, m: &M, x: &X) -> S {
        self.coeffs.get(x).cloned().unwrap_or_else(|| m.zero())
    }
}

/// `η(x) = 1|x⟩`.
pub fn dm_eta<M: Scalars, X: Clone + Ord>(m: &M, x: X) -> FormalDist<M::S, X> {
    let mut coeffs = BTreeMap::new();
    coeffs.insert(x, m.one());
    FormalDist { coeffs }
}

/// `μ(Φ)(x) = ⋁_φ Φ(φ) ⊙ φ(x)`.
pub fn dm_mu<M: Scalars, X: Clone + Ord>(m: &M, phi: &FormalDist<M::S, FormalDist<M::S, X>>) -> Result<FormalDist<M::S, X>> {
    let terms = phi.coeffs.iter().flat_map(|(inner, s)| inner.coeffs.iter().map(move |(x, l)| (x.clone(), m.mul(s, l))));
    FormalDist::new(m, terms)
}

/// `(D_M f)(p)(y) = ⋁_{f(x) = y} p(x)`.
pub fn dm_map<M: Scalars, X: Clone + Ord, Y: Clone + Ord>(
    m: &M,
    f: impl Fn(&X) -> Y,
    p: &FormalDist<M::S, X>,
) -> Result<FormalDist<M::S, Y>> {
    FormalDist::new(m, p.coeffs.iter().map(|(x, l)| (f(x), l.clone())))
}

/// A random distribution over `points` with support of size at most `k`.
pub fn random_dist<M: Scalars, X: Clone + Ord>(m: &M, points: &[X], k: usize, rng: &mut Rng) -> FormalDist<M::S, X> {
    let n = 1 + rng.below(k.max(1));
    let coeffs = m.sample_partition(n, rng);
    let terms: Vec<(X, M::S)> = coeffs.into_iter().map(|c| (points[rng.below(points.len())].clone(), c)).collect();
    FormalDist::new(m, terms).expect("sampled coefficients sum to one")
}

/// Unit, associativity and functor laws of `D_M`, checked by exact
/// equality on random nested distributions over a five-point set.
pub fn dm_monad_check<M: Scalars>(m: &M, samples: usize, seed: u64) -> Report {
    let mut rng = Rng::new(seed);
    let points: Vec<u8> = (0..5).collect();
    let mut left = LawCheck::new("mu_eta_is_id");
    let mut right = LawCheck::new("mu_D_eta_is_id");
    let mut assoc = LawCheck::new("mu_mu_is_mu_D_mu");
    let mut func = LawCheck::new("D_preserves_composition");
    let mut nat = LawCheck::new("mu_natural");
    for trial in 0..samples {
        let p = random_dist(m, &points, 4, &mut rng);
        let l = dm_mu(m, &dm_eta(m, p.clone()));
        left.holds(l.as_ref() == Ok(&p), || format!("trial {trial}: μ(η p) ≠ p for p = {p:?}"));
        let r = dm_map(m, |x: &u8| dm_eta(m, *x), &p).and_then(|q| dm_mu(m, &q));
        right.holds(r.as_ref() == Ok(&p), || format!("trial {trial}: μ(D η p) ≠ p for p = {p:?}"));

        let inner: Vec<_> = (0..3).map(|_| random_dist(m, &points, 3, &mut rng)).collect();
        let mid: Vec<_> = (0..3).map(|_| random_dist(m, &inner, 3, &mut rng)).collect();
        let big = random_dist(m, &mid, 3, &mut rng);
        let a = dm_mu(m, &big).and_then(|x| dm_mu(m, &x));
        let b = match big.coeffs.keys().find_map(|x| dm_mu(m, x).err()) {
            Some(e) => Err(e),
            None => dm_map(m, |x| dm_mu(m, x).unwrap(), &big).and_then(|x| dm_mu(m, &x)),
        };
        assoc.holds(a.is_ok() && a == b, || format!("trial {trial}: μ∘μ ≠ μ∘Dμ"));

        let f: Vec<u8> = (0..5).map(|_| rng.below(5) as u8).collect();
        let g: Vec<u8> = (0..5).map(|_| rng.below(5) as u8).collect();
        let gf = dm_map(m, |x: &u8| g[f[*x as usize] as usize], &p);
        let g_f = dm_map(m, |x: &u8| f[*x as usize], &p).and_then(|q| dm_map(m, |x: &u8| g[*x as usize], &q));
        func.holds(gf.is_ok() && gf == g_f, || format!("trial {trial}: D(g∘f) ≠ Dg∘Df"));

        let mu_then = dm_mu(m, &mid[0]).and_then(|x| dm_map(m, |y: &u8| f[*y as usize], &x));
        let then_mu = dm_map(m, |q| dm_map(m, |y: &u8| f[*y as usize], q).unwrap(), &mid[0]).and_then(|x| dm_mu(m, &x));
        nat.holds(mu_then.is_ok() && mu_then == then_mu, || format!("trial {trial}: Df∘μ ≠ μ∘DDf"));
    }
    let mut rep = Report::new();
    for c in [left, right, assoc, func, nat] {
        rep.push(c);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        UnitRational::ratio(n, d)
    }

    #[test]
    fn eta_is_a_point_mass() {
        let m = UnitRational;
        let e = dm_eta(&m, 'x');
        assert_eq!(e.coeffs.len(), 1);
        assert_eq!(e.coeff(&m, &'x'), q(1, 1));
    }

    #[test]
    fn mu_of_an_outer_point_mass() {
        let m = UnitRational;
        let inner = FormalDist::new(&m, [('x', q(1, 2)), ('y', q(1, 2))]).unwrap();
        let outer = dm_eta(&m, inner.clone());
        assert_eq!(dm_mu(&m, &outer).unwrap(), inner);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let m = UnitRational;
        assert_eq!(FormalDist::new(&m, [('x', q(1, 2))]), Err(Error::NotNormalized));
        assert_eq!(FormalDist::new(&m, [('x', q(2, 3)), ('y', q(2, 3))]), Err(Error::NotNormalized));
        // repeated points merge
        let d = FormalDist::new(&m, [('x', q(1, 4)), ('y', q(1, 2)), ('x', q(1, 4))]).unwrap();
        assert_eq!(d.coeff(&m, &'x'), q(1, 2));
        let two = FiniteScalars::two(Reading::Strict);
        assert_eq!(FormalDist::new(&two, [('x', 1), ('y', 1)]), Err(Error::NotNormalized));
        let two = FiniteScalars::two(Reading::Join);
        assert_eq!(FormalDist::new(&two, [('x', 1), ('y', 1)]).unwrap().coeffs.len(), 2);
    }

    #[test]
    fn monad_laws_exact() {
        let rep = dm_monad_check(&UnitRational, 500, 1);
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        for reading in [Reading::Strict, Reading::Join] {
            for atoms in [1, 2, 3] {
                let m = FiniteScalars { alg: BooleanAlgebra::new(atoms).unwrap(), reading };
                let rep = dm_monad_check(&m, 200, 2);
                assert!(rep.passed(), "{m:?}: {:?}", rep.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn a_broken_multiplication_breaks_associativity() {
        struct Skewed;
        impl Scalars for Skewed {
            type S = BigRational;
            fn zero(&self) -> BigRational {
                q(0, 1)
            }
            fn one(&self) -> BigRational {
                q(1, 1)
            }
            fn add(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
                Some(a + b)
            }
            // a product that is not associative
            fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
                if *a == q(1, 1) || *b == q(1, 1) {
                    a * b
                } else {
                    a * b * q(2, 1) - a * a * b
                }
            }
            fn sample_partition(&self, n: usize, rng: &mut Rng) -> Vec<BigRational> {
                EffectAlgebra::sample_partition(&UnitRational, n, rng).unwrap()
            }
        }
        let rep = dm_monad_check(&Skewed, 100, 3);
        assert!(!rep.get("mu_mu_is_mu_D_mu").unwrap().passed);
    }
}
