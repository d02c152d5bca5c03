//! The verification suite: twelve named criteria, each a [`Report`].
//!
//! Random draws all flow from the configured seed; each criterion derives
//! its own stream so criteria can run in isolation.

use effectus_core::cpmap::{self, Normalization};
use effectus_core::dilation::{self, DilationTriple};
use effectus_core::effect_structs::{
    aconv_coproduct, candidate_convex_sets, divisoid_check, dm_monad_check, ea_harness, emonoid_check, emonoid_lemma_check,
    oml_check, semilattice_from_convex, verify_coproduct, BooleanAlgebra, FiniteConvexSet, FiniteOrtholattice, FiniteScalars,
    Mode, Reading, UnitRational,
};
use effectus_core::effectus_ops::{self, contraction};
use effectus_core::linalg;
use effectus_core::vnalg::{self, AlgElement};
use effectus_core::{CMatrix, CpMap, FdAlgebra, LawCheck, Report, Rng, C64};

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub run: fn(u64) -> Report,
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "swap-commutant", run: swap_commutant },
    Criterion { id: 2, name: "stinespring", run: stinespring },
    Criterion { id: 3, name: "stinespring-is-paschke", run: stinespring_is_paschke },
    Criterion { id: 4, name: "corner-dilation", run: corner_dilation },
    Criterion { id: 5, name: "injectivity", run: injectivity },
    Criterion { id: 6, name: "order-correspondence", run: order_correspondence },
    Criterion { id: 7, name: "tensor-dilation", run: tensor_dilation },
    Criterion { id: 8, name: "dagger-laws", run: dagger_laws },
    Criterion { id: 9, name: "diamond-calculus", run: diamond_calculus },
    Criterion { id: 10, name: "purity", run: purity },
    Criterion { id: 11, name: "abstract-layer", run: abstract_layer },
    Criterion { id: 12, name: "inv-commutant", run: inv_commutant },
];

pub fn find(name: &str) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.name == name || c.id.to_string() == name)
}

fn stream(seed: u64, id: u64) -> Rng {
    Rng::new(seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn alg(blocks: &[usize]) -> FdAlgebra {
    FdAlgebra::new(blocks.to_vec()).expect("nonempty positive blocks")
}

fn failed(law: &str, e: impl core::fmt::Display) -> LawCheck {
    let mut c = LawCheck::new(law);
    c.holds(false, || format!("{e}"));
    c
}

fn swap() -> CMatrix {
    CMatrix::from_fn(4, 4, |r, c| {
        let (a, b) = (c / 2, c % 2);
        C64::new(f64::from(u8::from(r == 2 * b + a)), 0.0)
    })
}

fn swap_commutant(_seed: u64) -> Report {
    let mut rep = Report::new();
    let mut c = LawCheck::new("block_dims_9_1");
    match vnalg::commutant(&[swap()], 1e-9) {
        Ok(s) => {
            let mut dims: Vec<usize> = s.structure.blocks.iter().map(|n| n * n).collect();
            dims.sort_unstable_by(|a, b| b.cmp(a));
            c.holds(dims == [9, 1], || format!("block dims {dims:?}"));
            // the big block acts on the symmetric subspace, where swap is +1
            let k = s.structure.blocks.iter().position(|&n| n == 3);
            let mut sym = LawCheck::new("m3_on_symmetric_subspace");
            match k {
                Some(k) => {
                    let r = swap().mul(&s.embed[k]).dist(&s.embed[k]);
                    sym.observe(r, 1e-9, || format!("‖SJ − J‖ = {r:e}"));
                }
                None => sym.holds(false, || "no M₃ block".into()),
            }
            rep.push(c);
            rep.push(sym);
        }
        Err(e) => rep.push(failed("block_dims_9_1", e)),
    }
    rep
}

fn stinespring(seed: u64) -> Report {
    let mut rng = stream(seed, 2);
    let mut dil = LawCheck::new("v_rho_v_is_phi");
    let mut iso = LawCheck::new("v_isometry");
    let mut rank = LawCheck::new("k_dim_is_gram_rank");
    for t in 0..50 {
        let src = if t < 25 { 2 } else { 3 };
        let phi = CpMap::random(&FdAlgebra::matrix(src), &FdAlgebra::matrix(2), 1 + t % 3, Normalization::Unital, &mut rng);
        match dilation::stinespring_minimal(&phi, 1e-9) {
            Ok(s) => {
                let l = s.lifted();
                let r = cpmap::compose(&l.h, &l.rho).map_or(f64::INFINITY, |g| g.dist(&phi));
                dil.observe(r, 1e-8, || format!("map {t}: ‖V*ρ(a)V − φ(a)‖ = {r:e}"));
                let r = s.v.adj_mul(&s.v).dist(&CMatrix::identity(2));
                iso.observe(r, 1e-8, || format!("map {t}: ‖V*V − 1‖ = {r:e}"));
                // Gram rank of 𝒜 ⊙ ℂⁿ is n_src · rank of the Choi matrix
                let oracle = src * linalg::rank(&phi.choi(0, 0), 1e-9);
                rank.holds(s.k_dim == s.gram_rank && s.k_dim == oracle, || {
                    format!("map {t}: K = {}, Gram rank {}, oracle {oracle}", s.k_dim, s.gram_rank)
                });
            }
            Err(e) => dil.holds(false, || format!("map {t}: {e}")),
        }
    }
    let mut rep = Report::new();
    for c in [dil, iso, rank] {
        rep.push(c);
    }
    rep
}

fn stinespring_is_paschke(seed: u64) -> Report {
    let mut rng = stream(seed, 3);
    let mut c = LawCheck::new("lifted_stinespring_iso_paschke");
    let sources = [vec![2], vec![1, 1], vec![2, 1]];
    for t in 0..20 {
        let a = alg(&sources[t % 3]);
        let n = 2 + t % 2;
        let phi = CpMap::random(&a, &FdAlgebra::matrix(n), 1 + t % 3, Normalization::Unital, &mut rng);
        let out = dilation::stinespring_minimal(&phi, 1e-9)
            .and_then(|s| dilation::dilation_iso(&s.lifted(), &dilation::paschke(&phi), 1e-7));
        match out {
            Ok(iso) => {
                let r = iso.residual();
                c.observe(r, 1e-7, || format!("map {t} from {:?} to M{n}: residual {r:e}", a.blocks));
            }
            Err(e) => c.holds(false, || format!("map {t} from {:?} to M{n}: {e}", a.blocks)),
        }
    }
    let mut rep = Report::new();
    rep.push(c);
    rep
}

/// A random nonzero projection.
fn random_projection(a: &FdAlgebra, rng: &mut Rng) -> AlgElement {
    loop {
        let mats: Vec<CMatrix> = a
            .blocks
            .iter()
            .map(|&n| {
                let r = rng.below(n + 1);
                rng.projection_of_rank(n, r)
            })
            .collect();
        if mats.iter().any(|m| m.max_abs() > 0.5) {
            return AlgElement::new(a.clone(), mats).unwrap();
        }
    }
}

fn corner_dilation(seed: u64) -> Report {
    let mut rng = stream(seed, 4);
    let mut dims = LawCheck::new("p_is_central_carrier_blocks");
    let mut isos = LawCheck::new("iso_to_central_carrier_triple");
    for t in 0..10 {
        let a = if t % 2 == 0 { alg(&[2, 3]) } else { alg(&[3]) };
        let p = random_projection(&a, &mut rng);
        let hp = match effectus_ops::standard_corner(&p, 1e-9) {
            Ok(c) => c.pi,
            Err(e) => {
                dims.holds(false, || format!("trial {t}: {e}"));
                continue;
            }
        };
        let d = dilation::paschke(&hp);
        // ⌈⌈p⌉⌉𝒜 keeps exactly the blocks where p is nonzero
        let kept: Vec<usize> = (0..a.n_blocks()).filter(|&i| p.mats[i].max_abs() > 1e-9).collect();
        let carrier = FdAlgebra::new(kept.iter().map(|&i| a.blocks[i]).collect()).unwrap();
        let mut got = d.p.blocks.clone();
        let mut want = carrier.blocks.clone();
        got.sort_unstable();
        want.sort_unstable();
        dims.holds(got == want, || format!("trial {t}: P = {:?}, carrier blocks {:?}", d.p.blocks, carrier.blocks));
        let cc = vnalg::central_carrier(&p, 1e-9).unwrap();
        let mut coeffs = vec![0.0; a.n_blocks()];
        for &i in &kept {
            coeffs[i] = 1.0;
        }
        let r = cc.dist(&AlgElement::central(&a, &coeffs));
        dims.observe(r, 1e-9, || format!("trial {t}: central carrier off by {r:e}"));

        let mut cut = CpMap::zero(&a, &carrier);
        let mut comp = CpMap::zero(&carrier, &hp.target);
        for (c, &i) in kept.iter().enumerate() {
            cut.kraus_mut(i, c).push(CMatrix::identity(a.blocks[i]));
            for j in 0..hp.target.n_blocks() {
                comp.kraus_mut(c, j).extend(hp.kraus(i, j).iter().cloned());
            }
        }
        let triple = DilationTriple { p: carrier, rho: cut, h: comp };
        match dilation::dilation_iso(&triple, &d, 1e-7) {
            Ok(iso) => {
                let r = iso.residual();
                isos.observe(r, 1e-7, || format!("trial {t}: residual {r:e}"));
            }
            Err(e) => isos.holds(false, || format!("trial {t}: {e}")),
        }
    }
    let mut rep = Report::new();
    rep.push(dims);
    rep.push(isos);
    rep
}

fn injectivity(seed: u64) -> Report {
    let mut rng = stream(seed, 5);
    let m2 = FdAlgebra::matrix(2);
    let m23 = alg(&[2, 3]);
    let mut battery: Vec<(String, CpMap)> = vec![
        ("identity on M2⊕M3".into(), CpMap::identity(&m23)),
        ("projection onto M2 (kills M3)".into(), cpmap::coprojection_first(&m2, &FdAlgebra::matrix(3))),
        ("zero map".into(), CpMap::zero(&m23, &m2)),
        (
            "maximally mixed state".into(),
            dilation::functional_from_density(&AlgElement::scalar(&m2, 0.5), 1e-9).expect("density is a state"),
        ),
    ];
    for t in 0..4 {
        battery.push((format!("random unital {t}"), CpMap::random(&m23, &m2, 2, Normalization::Unital, &mut rng)));
    }
    for t in 0..4 {
        // random map that only reads the second summand
        let g = CpMap::random(&FdAlgebra::matrix(3), &m2, 1 + t % 2, Normalization::Unital, &mut rng);
        let kill = cpmap::coprojection_second(&m2, &FdAlgebra::matrix(3));
        battery.push((format!("random map killing M2 {t}"), cpmap::compose(&g, &kill).unwrap()));
    }
    for t in 0..2 {
        let p = random_projection(&alg(&[2, 2]), &mut rng);
        battery.push((format!("corner {t}"), effectus_ops::standard_corner(&p, 1e-9).unwrap().pi));
    }
    let mut c = LawCheck::new("ceil_rho_is_central_carrier");
    for (name, phi) in &battery {
        match dilation::injectivity_check(&dilation::paschke(phi), 1e-9) {
            Ok(inj) => c.observe(inj.residual, 1e-9, || format!("{name}: ‖⌈ρ⌉ − ⌈⌈φ⌉⌉‖ = {:e}", inj.residual)),
            Err(e) => c.holds(false, || format!("{name}: {e}")),
        }
    }
    let mut rep = Report::new();
    rep.push(c);
    rep
}

fn order_correspondence(seed: u64) -> Report {
    let mut rng = stream(seed, 6);
    let m2 = FdAlgebra::matrix(2);
    let density = {
        let w = rng.effect(2).add(&CMatrix::identity(2).scale_re(0.1));
        let tr = w.trace().re;
        AlgElement::new(m2.clone(), vec![w.scale_re(1.0 / tr)]).unwrap()
    };
    let maps = [
        ("id on M2⊕M2", CpMap::identity(&alg(&[2, 2]))),
        ("random unital M2→M2", CpMap::random(&m2, &m2, 2, Normalization::Unital, &mut rng)),
        ("faithful state on M2", dilation::functional_from_density(&density, 1e-9).expect("faithful density")),
    ];
    let mut rep = Report::new();
    for (i, (name, phi)) in maps.iter().enumerate() {
        let d = dilation::paschke(phi);
        match dilation::order_correspondence(&d, 50, seed.wrapping_add(i as u64), 1e-7) {
            Ok(r) => {
                for mut c in r.checks {
                    c.law = format!("{}[{name}]", c.law);
                    rep.push(c);
                }
            }
            Err(e) => rep.push(failed(&format!("order_correspondence[{name}]"), e)),
        }
    }
    rep
}

fn tensor_dilation(seed: u64) -> Report {
    let mut rng = stream(seed, 7);
    let m2 = FdAlgebra::matrix(2);
    let state = dilation::functional_from_density(&AlgElement::scalar(&m2, 0.5), 1e-9).expect("state");
    let meas = {
        let mut f = CpMap::zero(&FdAlgebra::commutative(2), &m2);
        f.kraus_mut(0, 0).push(CMatrix::real(&[&[1.0, 0.0]]));
        f.kraus_mut(1, 0).push(CMatrix::real(&[&[0.0, 1.0]]));
        f
    };
    let mut pairs = vec![
        ("id ⊗ id", CpMap::identity(&m2), CpMap::identity(&m2)),
        ("state ⊗ id", state.clone(), CpMap::identity(&m2)),
        ("measurement ⊗ state", meas, state),
    ];
    for _ in 0..3 {
        let f = CpMap::random(&m2, &m2, 2, Normalization::Unital, &mut rng);
        let g = CpMap::random(&alg(&[1, 1]), &m2, 1, Normalization::Unital, &mut rng);
        pairs.push(("random ⊗ random", f, g));
    }
    let mut c = LawCheck::new("tensor_iso_direct");
    for (t, (name, f, g)) in pairs.iter().enumerate() {
        match dilation::dilation_tensor(&dilation::paschke(f), &dilation::paschke(g), 1e-7) {
            Ok(td) => {
                let r = td.iso.residual();
                c.observe(r, 1e-7, || format!("pair {t} ({name}): residual {r:e}"));
            }
            Err(e) => c.holds(false, || format!("pair {t} ({name}): {e}")),
        }
    }
    let mut rep = Report::new();
    rep.push(c);
    rep
}

fn dagger_laws(seed: u64) -> Report {
    let mut rep = Report::new();
    for blocks in [vec![2], vec![2, 3]] {
        let a = alg(&blocks);
        let suite = effectus_ops::dagger_law_suite(&a, seed, 200, 1e-8, effectus_ops::seqprod);
        for mut c in suite.report.checks {
            if c.law == "unique_square_root" && c.residual > 1e-9 {
                c.passed = false;
                c.witness.get_or_insert_with(|| format!("square-root round trip {:e} above 1e-9", c.residual));
            }
            c.law = format!("{}[{blocks:?}]", c.law);
            rep.push(c);
        }
    }
    rep
}

fn diamond_calculus(seed: u64) -> Report {
    effectus_ops::diamond_suite(&alg(&[2, 2]), seed, 500, 1e-8)
}

fn purity(seed: u64) -> Report {
    let mut rng = stream(seed, 10);
    let mut samples: Vec<(String, CpMap, bool)> = Vec::new();
    for t in 0..20 {
        let (n, m) = [(2, 2), (3, 2), (2, 3), (3, 3)][t % 4];
        samples.push((format!("ad_V {t} ({n}×{m})"), CpMap::ad(&contraction(rng.ginibre(n, m))), true));
    }
    for t in 0..5 {
        let a = if t % 2 == 0 { alg(&[2, 3]) } else { alg(&[2, 2]) };
        let p = random_projection(&a, &mut rng);
        samples.push((format!("corner {t}"), effectus_ops::standard_corner(&p, 1e-9).unwrap().pi, true));
        let b = AlgElement::random_effect(&a, &mut rng);
        samples.push((format!("filter {t}"), effectus_ops::standard_filter(&b, 1e-9).unwrap().c, true));
    }
    for t in 0..20 {
        let n = 2 + t % 2;
        let (u1, u2) = (rng.unitary(n), rng.unitary(n));
        let lam = 0.1 + 0.8 * rng.uniform();
        let mix = CpMap::ad(&u1).scale(lam).add(&CpMap::ad(&u2).scale(1.0 - lam)).unwrap();
        samples.push((format!("mixture {t} (λ = {lam:.3})"), mix, false));
    }
    let mut expected = LawCheck::new("is_pure_matches_expected");
    let mut oracle = LawCheck::new("is_pure_matches_surjectivity_oracle");
    for (name, f, want) in &samples {
        let got = effectus_ops::is_pure(f);
        expected.holds(got == *want, || format!("{name}: is_pure = {got}, expected {want}"));
        let o = effectus_ops::purity_oracle(f);
        oracle.holds(got == o, || format!("{name}: is_pure = {got}, ρ surjective = {o}"));
    }
    let mut rep = Report::new();
    rep.push(expected);
    rep.push(oracle);
    rep
}

fn tagged(rep: &mut Report, tag: &str, r: Report) {
    for mut c in r.checks {
        c.law = format!("{}[{tag}]", c.law);
        rep.push(c);
    }
}

fn abstract_layer(seed: u64) -> Report {
    let mut rep = Report::new();
    for atoms in 0..=4 {
        let b = BooleanAlgebra::new(atoms).expect("at most 16 atoms");
        let tag = format!("boolean {}", b.size());
        tagged(&mut rep, &tag, ea_harness(&b, Mode::Exhaustive));
        tagged(&mut rep, &tag, emonoid_check(&b, Mode::Exhaustive));
        tagged(&mut rep, &tag, divisoid_check(&b, Mode::Exhaustive));
        tagged(&mut rep, &tag, oml_check(&FiniteOrtholattice::boolean(atoms)));
    }
    tagged(&mut rep, "2", emonoid_lemma_check(&BooleanAlgebra::two(), Mode::Exhaustive, 3));
    let q = UnitRational;
    let random = Mode::Random { seed, trials: 500 };
    tagged(&mut rep, "rational", ea_harness(&q, random));
    tagged(&mut rep, "rational", emonoid_check(&q, random));
    tagged(&mut rep, "rational", divisoid_check(&q, random));

    let o6 = oml_check(&FiniteOrtholattice::o6());
    let mut c = LawCheck::new("o6_fails_orthomodularity");
    let om = o6.get("orthomodular");
    c.holds(om.is_some_and(|l| !l.passed && l.witness.is_some()), || "O6 passed the orthomodular law".into());
    let others_pass = o6.checks.iter().filter(|l| l.law != "orthomodular").all(|l| l.passed);
    c.holds(others_pass, || "O6 failed a law other than orthomodularity".into());
    rep.push(c);

    tagged(&mut rep, "D_rational", dm_monad_check(&q, 500, seed));

    let m = FiniteScalars::two(Reading::Join);
    let one = FiniteConvexSet::from_fn(m, vec!["*".into()], |_| 0).expect("one point");
    let mut c = LawCheck::new("one_plus_one_is_three_element_semilattice");
    match aconv_coproduct(&one, &one) {
        Ok(cp) => {
            let size = cp.carrier.size();
            c.holds(size == 3, || format!("1+1 has {size} points"));
            let shape = semilattice_from_convex(&cp.carrier).map(|l| {
                let (a, b) = (cp.c1[0], cp.c2[0]);
                let top = l.join[a][b];
                a != b && top != a && top != b
            });
            c.holds(shape == Ok(true), || format!("coprojections do not span a V-shaped semilattice: {shape:?}"));
            rep.push(c);
            match candidate_convex_sets(m, 4) {
                Ok(cands) => tagged(&mut rep, "1+1, |Z| ≤ 4", verify_coproduct(&cp, &one, &one, &cands)),
                Err(e) => rep.push(failed("universal_property", e)),
            }
        }
        Err(e) => {
            c.holds(false, || format!("{e}"));
            rep.push(c);
        }
    }
    rep
}

fn inv_commutant(seed: u64) -> Report {
    let m2 = FdAlgebra::matrix(2);
    // a ↦ a ⊗ 1 on M₂ → M₄
    let mut tensor_one = CpMap::zero(&m2, &FdAlgebra::matrix(4));
    for t in 0..2 {
        let mut v = CMatrix::zeros(2, 4);
        for k in 0..2 {
            v[(k, 2 * k + t)] = C64::new(1.0, 0.0);
        }
        tensor_one.kraus_mut(0, 0).push(v);
    }
    let mut rep = Report::new();
    for (name, rho) in [("id", CpMap::identity(&m2)), ("⊗1", tensor_one)] {
        match effectus_ops::inv_commutant_check(&rho, 200, seed, 1e-8) {
            Ok(r) => tagged(&mut rep, name, r),
            Err(e) => rep.push(failed(&format!("inv_equals_commutant[{name}]"), e)),
        }
    }
    rep
}
