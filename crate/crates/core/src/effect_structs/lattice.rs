//! Finite ortholattices, the orthomodular law, and the modularity identity
//! `a ⊻ b = (a ∧ b) ⊻ (a ∨ b)` in finite effect algebras.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ea::{ea_harness, EffectAlgebra, Mode, TableEa};
use crate::error::{Error, Result};
use crate::report::{LawCheck, Report};

/// Finite poset with an orthocomplementation, given by its order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrtholattice {
    pub names: Vec<String>,
    /// `leq[a][b]` iff `a ≤ b`.
    pub leq: Vec<Vec<bool>>,
    pub perp: Vec<usize>,
}

impl FiniteOrtholattice {
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>, perp: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n == 0 || leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("order must be an n×n relation"));
        }
        if perp.len() != n || perp.iter().any(|&p| p >= n) {
            return Err(Error::InvalidInput("perp must map the carrier to itself"));
        }
        Ok(FiniteOrtholattice { names, leq, perp })
    }

    /// Order generated by the cover pairs `(a, b)` with `a < b`.
    pub fn from_covers(names: &[&str], covers: &[(usize, usize)], perp: Vec<usize>) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::InvalidInput("cover index out of range"));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Self::new(names.iter().map(|s| String::from(*s)).collect(), leq, perp)
    }

    /// Subsets of `k` atoms under inclusion.
    pub fn boolean(k: u32) -> Self {
        let n = 1usize << k;
        let full = n - 1;
        FiniteOrtholattice {
            names: (0..n).map(|x| format!("{x:#b}")).collect(),
            leq: (0..n).map(|a| (0..n).map(|b| a & !b == 0).collect()).collect(),
            perp: (0..n).map(|a| !a & full).collect(),
        }
    }

    /// `MO_n`: `0`, `1` and `n` incomparable complemented pairs.
    pub fn mo(n: usize) -> Self {
        let size = 2 * n + 2;
        let top = size - 1;
        let mut names = vec![String::from("0")];
        for i in 0..n {
            names.push(format!("a{i}"));
            names.push(format!("a{i}⊥"));
        }
        names.push(String::from("1"));
        let leq = (0..size).map(|a| (0..size).map(|b| a == b || a == 0 || b == top).collect()).collect();
        let mut perp = vec![top; size];
        perp[top] = 0;
        for i in 0..n {
            perp[1 + 2 * i] = 2 + 2 * i;
            perp[2 + 2 * i] = 1 + 2 * i;
        }
        FiniteOrtholattice { names, leq, perp }
    }

    /// The benzene ring `O6`: `0 < x < y < 1` and `0 < y⊥ < x⊥ < 1`.
    pub fn o6() -> Self {
        Self::from_covers(
            &["0", "x", "y", "y⊥", "x⊥", "1"],
            &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)],
            vec![5, 4, 3, 2, 1, 0],
        )
        .unwrap()
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.size()).filter(|&c| self.le(c, a) && self.le(c, b)).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&c| self.le(c, m)))
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.size()).filter(|&c| self.le(a, c) && self.le(b, c)).collect();
        upper.iter().copied().find(|&m| upper.iter().all(|&c| self.le(m, c)))
    }

    fn bottom(&self) -> Option<usize> {
        (0..self.size()).find(|&z| (0..self.size()).all(|a| self.le(z, a)))
    }

    fn top(&self) -> Option<usize> {
        (0..self.size()).find(|&t| (0..self.size()).all(|a| self.le(a, t)))
    }

    /// Partial algebra with `a ⊻ b = a ∨ b` for `a ≤ b⊥`.
    pub fn to_ea(&self) -> Result<TableEa> {
        let (zero, one) = match (self.bottom(), self.top()) {
            (Some(z), Some(o)) => (z, o),
            _ => return Err(Error::InvalidInput("lattice is not bounded")),
        };
        let n = self.size();
        let ovee = (0..n)
            .map(|a| (0..n).map(|b| if self.le(a, self.perp[b]) { self.join(a, b) } else { None }).collect())
            .collect();
        TableEa::new(self.names.clone(), zero, one, self.perp.clone(), ovee)
    }
}

/// Lattice and ortholattice axioms, the orthomodular law, and the bridge:
/// if the induced partial sum is an effect algebra the lattice must be
/// orthomodular.
pub fn oml_check(l: &FiniteOrtholattice) -> Report {
    let n = l.size();
    let nm = |a: usize| l.names[a].clone();
    let mut order = LawCheck::new("partial_order");
    let mut bounded = LawCheck::new("bounded");
    let mut lattice = LawCheck::new("lattice");
    let mut o1 = LawCheck::new("ortho_meet_zero");
    let mut o2 = LawCheck::new("ortho_join_one");
    let mut o3 = LawCheck::new("ortho_antitone");
    let mut o4 = LawCheck::new("ortho_involution");
    let mut om = LawCheck::new("orthomodular");
    let mut bridge = LawCheck::new("ea_ortholattice_is_orthomodular");

    for a in 0..n {
        order.holds(l.le(a, a), || format!("{} ≰ {}", nm(a), nm(a)));
        for b in 0..n {
            if a != b && l.le(a, b) {
                order.holds(!l.le(b, a), || format!("{} ≤ {} ≤ {}", nm(a), nm(b), nm(a)));
            }
            for c in 0..n {
                if l.le(a, b) && l.le(b, c) {
                    order.holds(l.le(a, c), || format!("{} ≤ {} ≤ {} but {} ≰ {}", nm(a), nm(b), nm(c), nm(a), nm(c)));
                }
            }
            lattice.holds(l.meet(a, b).is_some() && l.join(a, b).is_some(), || format!("{} and {} lack a meet or join", nm(a), nm(b)));
        }
    }
    let (zero, one) = (l.bottom(), l.top());
    bounded.holds(zero.is_some() && one.is_some(), || String::from("no bottom or no top"));
    let mut orthomodular = true;
    if let (Some(zero), Some(one)) = (zero, one) {
        for a in 0..n {
            let p = l.perp[a];
            o1.holds(l.meet(a, p) == Some(zero), || format!("{0} ∧ {0}⊥ ≠ 0", nm(a)));
            o2.holds(l.join(a, p) == Some(one), || format!("{0} ∨ {0}⊥ ≠ 1", nm(a)));
            o4.holds(l.perp[p] == a, || format!("{0}⊥⊥ ≠ {0}", nm(a)));
            for b in 0..n {
                if !l.le(a, b) {
                    continue;
                }
                o3.holds(l.le(l.perp[b], p), || format!("{} ≤ {} but {}⊥ ≰ {}⊥", nm(a), nm(b), nm(b), nm(a)));
                let r = l.meet(p, b).and_then(|m| l.join(a, m));
                let ok = r == Some(b);
                orthomodular &= ok;
                om.holds(ok, || format!("{0} ≤ {1} but {0} ∨ ({0}⊥ ∧ {1}) = {2}", nm(a), nm(b), r.map(nm).unwrap_or_default()));
            }
        }
    }
    match l.to_ea() {
        Ok(e) => {
            let is_ea = ea_harness(&e, Mode::Exhaustive).passed();
            bridge.holds(!is_ea || orthomodular, || String::from("an effect algebra that is an ortholattice fails orthomodularity"));
        }
        Err(_) => bridge.holds(zero.is_none() || one.is_none(), || String::from("bounded lattice did not induce a partial sum")),
    }
    let mut rep = Report::new();
    for c in [order, bounded, lattice, o1, o2, o3, o4, om, bridge] {
        rep.push(c);
    }
    rep
}

/// Wherever `a ⊥ b` and `a ∧ b` exists, `a ∨ b` exists and
/// `a ⊻ b = (a ∧ b) ⊻ (a ∨ b)`; meets and joins are found by search in the
/// induced order.
pub fn modularity_check<E: EffectAlgebra>(e: &E) -> Report {
    let mut law = LawCheck::new("ea_modularity");
    let Some(es) = e.elements() else {
        law.holds(false, || String::from("carrier is not finite"));
        let mut rep = Report::new();
        rep.push(law);
        return rep;
    };
    let bound = |a: &E::Elem, b: &E::Elem, lower: bool| -> Option<E::Elem> {
        let cands: Vec<&E::Elem> =
            es.iter().filter(|c| if lower { e.le(c, a) && e.le(c, b) } else { e.le(a, c) && e.le(b, c) }).collect();
        cands
            .iter()
            .find(|m| cands.iter().all(|c| if lower { e.le(c, m) } else { e.le(m, c) }))
            .map(|m| (*m).clone())
    };
    for a in &es {
        for b in &es {
            let Some(ab) = e.ovee(a, b) else { continue };
            let Some(m) = bound(a, b, true) else { continue };
            let j = bound(a, b, false);
            let r = j.as_ref().and_then(|j| e.ovee(&m, j));
            law.holds(r.as_ref() == Some(&ab), || {
                format!("{} ⊻ {} = {} but (∧) ⊻ (∨) = {:?}", e.show(a), e.show(b), e.show(&ab), r.map(|x| e.show(&x)))
            });
        }
    }
    let mut rep = Report::new();
    rep.push(law);
    rep
}

#[cfg(test)]
mod tests {
    use super::super::ea::BooleanAlgebra;
    use super::*;

    #[test]
    fn boolean_lattices_are_orthomodular() {
        for k in 0..=4 {
            let rep = oml_check(&FiniteOrtholattice::boolean(k));
            assert!(rep.passed(), "{k}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn mo2_is_orthomodular_and_its_ea_is_modular() {
        let l = FiniteOrtholattice::mo(2);
        assert!(oml_check(&l).passed());
        let e = l.to_ea().unwrap();
        assert!(ea_harness(&e, Mode::Exhaustive).passed());
        assert!(modularity_check(&e).passed());
    }

    #[test]
    fn benzene_ring_fails_orthomodularity() {
        let rep = oml_check(&FiniteOrtholattice::o6());
        let om = rep.get("orthomodular").unwrap();
        assert!(!om.passed);
        assert_eq!(om.witness.as_deref(), Some("x ≤ y but x ∨ (x⊥ ∧ y) = x"));
        // it is still an ortholattice, and its induced sum is no effect algebra
        for law in ["lattice", "ortho_meet_zero", "ortho_join_one", "ortho_antitone", "ortho_involution"] {
            assert!(rep.get(law).unwrap().passed, "{law}");
        }
        assert!(rep.get("ea_ortholattice_is_orthomodular").unwrap().passed);
        let e = FiniteOrtholattice::o6().to_ea().unwrap();
        assert!(!ea_harness(&e, Mode::Exhaustive).get("orthocomplement_unique").unwrap().passed);
    }

    #[test]
    fn modularity_on_boolean_and_projection_sublattices() {
        assert!(modularity_check(&BooleanAlgebra::new(2).unwrap()).passed());
        // {0, p, p⊥, 1} in the projections of M₂
        let e = FiniteOrtholattice::mo(1).to_ea().unwrap();
        assert!(modularity_check(&e).passed());
        assert!(modularity_check(&FiniteOrtholattice::mo(3).to_ea().unwrap()).passed());
    }
}
