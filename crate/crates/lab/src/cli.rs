//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use effectus_core::dilation::{self, DilationTriple};
use effectus_core::effect_structs::{
    aconv_coproduct, candidate_convex_sets, divisoid_check, dm_monad_check, ea_harness, emonoid_check, emonoid_lemma_check,
    modularity_check, oml_check, predicates_as_module, verify_coproduct, BooleanAlgebra, EffectAlgebra, EffectDivisoid,
    EffectMonoid, FiniteOrtholattice, FiniteScalars, Mode, Reading, UnitRational,
};
use effectus_core::effectus_ops;
use effectus_core::vnalg::{self, AlgElement};
use effectus_core::{cpmap, CMatrix, CpMap, FdAlgebra, LawCheck, Report, DEFAULT_SEED};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::json::{read_json, AlgebraJson, ConvexJson, ElementJson, LatticeJson, MapJson, MatrixJson, StructureJson, TripleJson};
use crate::output::{report_json, RunConfig};
use crate::suite;
use crate::LabError;

#[derive(Parser, Debug)]
#[command(name = "effectus-lab", version, about = "Dilations and effectus law checks on finite-dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Numerical tolerance for every check.
    #[arg(long, global = true, default_value_t = effectus_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Sample count for randomized checks.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// GNS, Stinespring and Paschke dilations.
    Dilate {
        #[command(subcommand)]
        op: DilateOp,
    },
    /// Assert maps, sequential products, daggers, diamonds, corners, filters.
    Effectus {
        #[command(subcommand)]
        op: EffectusOp,
    },
    /// Commutants, structure recognition, central carriers.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Law harnesses for finite and exact effect structures.
    Structs {
        #[command(subcommand)]
        op: StructsOp,
    },
    /// The verification suite.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
struct MapArg {
    /// CP map JSON.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Subcommand, Debug)]
enum DilateOp {
    /// GNS space of a state (target ℂ).
    Gns(MapArg),
    /// Minimal Stinespring dilation of a map into a factor.
    Stinespring(MapArg),
    /// Paschke dilation of any ncp-map.
    Paschke(MapArg),
    /// Paschke of `f ⊗ g` against the tensor of the two dilations.
    Tensor {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        map2: PathBuf,
    },
    /// Maps below φ against effects in the commutant of ρ.
    OrderCorr(MapArg),
    /// Mediating map from the Paschke dilation to another triple.
    Mediate {
        #[arg(long)]
        map: PathBuf,
        /// Dilation triple JSON `{"p", "rho", "h"}`.
        #[arg(long)]
        triple: PathBuf,
    },
}

#[derive(Args, Debug)]
struct EffectusIn {
    /// Algebra JSON; inferred from the data when omitted.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Data JSON with the fields the operation needs (`p`, `q`, `s`, `b`, `map`).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum EffectusOp {
    /// `a ↦ √p a √p` for an effect `p`.
    Asrt(EffectusIn),
    /// `p & q = √p q √p`.
    Seqprod(EffectusIn),
    /// Dagger of a pure `map`.
    Dagger(EffectusIn),
    /// Diamond, box and lower diamond of `map` at projection `s`.
    Diamond(EffectusIn),
    /// Standard corner of `p` and the factor of `map` through it.
    Corner(EffectusIn),
    /// Standard filter of `b` and the factor of `map` through it.
    Filter(EffectusIn),
    /// Dagger-effectus law suite on random instances.
    Laws {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Side-effect-free map of `p`; with `map`, whether `p` lies in its invariant set.
    Sef(EffectusIn),
}

#[derive(Args, Debug)]
struct InArg {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum AlgebraOp {
    /// `{"gens": [matrix, …]}`.
    Commutant(InArg),
    /// `{"basis": [matrix, …]}`.
    Structure(InArg),
    /// An element JSON; prints its central carrier.
    Carrier(InArg),
}

#[derive(Args, Debug)]
struct StructArg {
    /// Structure JSON file.
    #[arg(long = "in", conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// `two`, `boolean:K`, `rational`; for `oml` also `o6`, `mo:N`.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand, Debug)]
enum StructsOp {
    /// Effect algebra laws.
    Ea(StructArg),
    /// Orthomodular lattice laws.
    Oml(StructArg),
    /// Effect monoid laws.
    Monoid(StructArg),
    /// Effect divisoid laws; builtins only.
    Divisoid(StructArg),
    /// Distribution monad laws.
    Dm {
        /// `rational`, `two-strict`, `two-join`, `boolean:K` (strict).
        #[arg(long, default_value = "rational")]
        scalars: String,
    },
    /// Coproduct of two finite convex sets.
    Coproduct {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Largest test object for the universal property.
        #[arg(long, default_value_t = 4)]
        max_z: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SuiteArgs {
    #[arg(long)]
    all: bool,
    /// Criterion name or number.
    #[arg(long)]
    name: Option<String>,
}

/// Parse `argv`, run, write the report; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(passed) => i32::from(!passed),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<bool, LabError> {
    if !(cli.tol > 0.0) {
        return Err(LabError::Input("--tol must be positive".into()));
    }
    let mut cfg = RunConfig { command: String::new(), tol: cli.tol, seed: cli.seed, trials: cli.trials, inputs: Vec::new(), out: cli.out };
    let (rep, data) = match cli.cmd {
        Cmd::Dilate { op } => dilate(op, &mut cfg)?,
        Cmd::Effectus { op } => effectus(op, &mut cfg)?,
        Cmd::Algebra { op } => algebra(op, &mut cfg)?,
        Cmd::Structs { op } => structs(op, &mut cfg)?,
        Cmd::Suite(args) => run_suite(args, &mut cfg)?,
    };
    let doc = report_json(&cfg, &rep, data);
    let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    match &cfg.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(rep.passed())
}

fn input<T: serde::de::DeserializeOwned>(cfg: &mut RunConfig, name: &str, path: &Path) -> Result<T, LabError> {
    cfg.inputs.push((name.into(), path.to_path_buf()));
    read_json(path)
}

fn load_map(cfg: &mut RunConfig, name: &str, path: &Path) -> Result<CpMap, LabError> {
    input::<MapJson>(cfg, name, path)?.to_map()
}

fn map_json(f: &CpMap) -> Value {
    serde_json::to_value(MapJson::from_map(f)).expect("map serializes")
}

fn elem_json(a: &AlgElement) -> Value {
    serde_json::to_value(ElementJson::from_element(a)).expect("element serializes")
}

fn mat_json(m: &CMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("matrix serializes")
}

fn single(law: &str, r: f64, tol: f64) -> LawCheck {
    let mut c = LawCheck::new(law);
    c.observe(r, tol, || format!("residual {r:e} above {tol:e}"));
    c
}

fn report_of(checks: impl IntoIterator<Item = LawCheck>) -> Report {
    let mut rep = Report::new();
    for c in checks {
        rep.push(c);
    }
    rep
}

type Outcome = (Report, Value);

fn dilate(op: DilateOp, cfg: &mut RunConfig) -> Result<Outcome, LabError> {
    let tol = cfg.tol;
    match op {
        DilateOp::Gns(a) => {
            cfg.command = "dilate gns".into();
            let omega = load_map(cfg, "map", &a.map)?;
            let g = dilation::gns(&omega, tol)?;
            let mut c = LawCheck::new("gns_reproduces_state");
            for (i, k, l) in omega.source.matrix_units() {
                let e = AlgElement::matrix_unit(&omega.source, i, k, l);
                let r = g.rho.apply(&e)?.mats[0].clone();
                let x = CMatrix::column(&g.x);
                let val = x.adj_mul(&r.mul(&x))[(0, 0)];
                let want = omega.apply(&e)?.mats[0][(0, 0)];
                let d = (val - want).norm();
                c.observe(d, tol, || format!("⟨x, ρ(E_{k}{l}) x⟩ off by {d:e} in block {i}"));
            }
            let x: Vec<[f64; 2]> = g.x.iter().map(|z| [z.re, z.im]).collect();
            Ok((report_of([c]), json!({"h_dim": g.h_dim, "rho": map_json(&g.rho), "x": x})))
        }
        DilateOp::Stinespring(a) => {
            cfg.command = "dilate stinespring".into();
            let phi = load_map(cfg, "map", &a.map)?;
            let s = dilation::stinespring_minimal(&phi, tol)?;
            let l = s.lifted();
            let mut checks = vec![
                single("v_rho_v_is_phi", cpmap::compose(&l.h, &l.rho)?.dist(&phi), tol),
                {
                    let mut c = LawCheck::new("k_dim_is_gram_rank");
                    c.holds(s.k_dim == s.gram_rank, || format!("K = {}, Gram rank {}", s.k_dim, s.gram_rank));
                    c
                },
            ];
            if phi.is_unital(tol) {
                checks.push(single("v_isometry", s.v.adj_mul(&s.v).dist(&CMatrix::identity(s.v.cols)), tol));
            }
            Ok((report_of(checks), json!({"k_dim": s.k_dim, "gram_rank": s.gram_rank, "v": mat_json(&s.v), "rho": map_json(&s.rho)})))
        }
        DilateOp::Paschke(a) => {
            cfg.command = "dilate paschke".into();
            let phi = load_map(cfg, "map", &a.map)?;
            let d = dilation::paschke(&phi);
            let rep = d.verify(tol);
            Ok((rep, json!({"P": {"blocks": d.p.blocks}, "rho": map_json(&d.rho), "h": map_json(&d.h)})))
        }
        DilateOp::Tensor { map, map2 } => {
            cfg.command = "dilate tensor".into();
            let f = load_map(cfg, "map", &map)?;
            let g = load_map(cfg, "map2", &map2)?;
            let td = dilation::dilation_tensor(&dilation::paschke(&f), &dilation::paschke(&g), tol)?;
            let rep = report_of([
                single("iso_rho", td.iso.rho_residual, tol),
                single("iso_h", td.iso.h_residual, tol),
                single("iso_nmiu", td.iso.nmiu_residual, tol),
            ]);
            Ok((rep, json!({"P_tensor": {"blocks": td.triple.p.blocks}, "P_direct": {"blocks": td.direct.p.blocks}})))
        }
        DilateOp::OrderCorr(a) => {
            cfg.command = "dilate order-corr".into();
            let phi = load_map(cfg, "map", &a.map)?;
            let d = dilation::paschke(&phi);
            let rep = dilation::order_correspondence(&d, cfg.trials, cfg.seed, tol)?;
            Ok((rep, json!({"P": {"blocks": d.p.blocks}})))
        }
        DilateOp::Mediate { map, triple } => {
            cfg.command = "dilate mediate".into();
            let phi = load_map(cfg, "map", &map)?;
            let t: TripleJson = input(cfg, "triple", &triple)?;
            let t = DilationTriple { p: t.p.to_algebra()?, rho: t.rho.to_map()?, h: t.h.to_map()? };
            let d = dilation::paschke(&phi);
            let m = dilation::mediating_map(&d, &t, tol)?;
            let mut unique = LawCheck::new("mediator_unique");
            unique.holds(m.unique, || "ρ(𝒜)·ℬ does not span the module".into());
            let rep = report_of([single("sigma_rho", m.rho_residual, tol), single("h_sigma", m.h_residual, tol), unique]);
            Ok((rep, json!({"sigma": map_json(&m.sigma)})))
        }
    }
}

#[derive(Deserialize, Default)]
struct EffectusData {
    p: Option<ElementJson>,
    q: Option<ElementJson>,
    s: Option<ElementJson>,
    b: Option<ElementJson>,
    map: Option<MapJson>,
}

struct Loaded {
    alg: Option<FdAlgebra>,
    data: EffectusData,
}

impl Loaded {
    fn elem(&self, field: &str, e: &Option<ElementJson>) -> Result<AlgElement, LabError> {
        e.as_ref().ok_or_else(|| LabError::Input(format!("data needs field {field:?}")))?.to_element(self.alg.as_ref())
    }

    fn map(&self) -> Result<CpMap, LabError> {
        self.data.map.as_ref().ok_or_else(|| LabError::Input("data needs field \"map\"".into()))?.to_map()
    }
}

fn load_effectus(cfg: &mut RunConfig, a: &EffectusIn) -> Result<Loaded, LabError> {
    let alg = match &a.algebra {
        Some(p) => Some(input::<AlgebraJson>(cfg, "algebra", p)?.to_algebra()?),
        None => None,
    };
    let data = input(cfg, "in", &a.input)?;
    Ok(Loaded { alg, data })
}

fn effectus(op: EffectusOp, cfg: &mut RunConfig) -> Result<Outcome, LabError> {
    let tol = cfg.tol;
    match op {
        EffectusOp::Asrt(a) => {
            cfg.command = "effectus asrt".into();
            let l = load_effectus(cfg, &a)?;
            let p = l.elem("p", &l.data.p)?;
            let f = effectus_ops::asrt(&p, tol)?;
            let r = f.unit_image().dist(&p);
            Ok((report_of([single("asrt_one_is_p", r, tol)]), json!({"asrt": map_json(&f)})))
        }
        EffectusOp::Seqprod(a) => {
            cfg.command = "effectus seqprod".into();
            let l = load_effectus(cfg, &a)?;
            let (p, q) = (l.elem("p", &l.data.p)?, l.elem("q", &l.data.q)?);
            let pq = effectus_ops::seqprod(&p, &q, tol)?;
            let mut eff = LawCheck::new("result_is_effect");
            eff.holds(pq.is_effect(tol), || "p & q is not an effect".into());
            let unit = effectus_ops::seqprod(&p, &AlgElement::one(&p.algebra), tol)?.dist(&p);
            Ok((report_of([eff, single("p_and_one_is_p", unit, tol)]), json!({"result": elem_json(&pq)})))
        }
        EffectusOp::Dagger(a) => {
            cfg.command = "effectus dagger".into();
            let l = load_effectus(cfg, &a)?;
            let f = l.map()?;
            let fd = effectus_ops::dagger_pure(&f, tol)?;
            let back = effectus_ops::dagger_pure(&fd, tol)?;
            Ok((report_of([single("dagger_involutive", back.dist(&f), tol.max(1e-8))]), json!({"dagger": map_json(&fd)})))
        }
        EffectusOp::Diamond(a) => {
            cfg.command = "effectus diamond".into();
            let l = load_effectus(cfg, &a)?;
            let f = l.map()?;
            let s = l.elem("s", &l.data.s)?;
            let up = effectus_ops::diamond(&f, &s, tol)?;
            let bx = effectus_ops::box_(&f, &s, tol)?;
            let mut c = LawCheck::new("results_are_projections");
            c.holds(up.is_projection(tol) && bx.is_projection(tol), || "diamond or box not sharp".into());
            Ok((report_of([c]), json!({"diamond": elem_json(&up), "box": elem_json(&bx)})))
        }
        EffectusOp::Corner(a) => {
            cfg.command = "effectus corner".into();
            let l = load_effectus(cfg, &a)?;
            let p = l.elem("p", &l.data.p)?;
            let c = effectus_ops::standard_corner(&p, tol)?;
            let mut checks = vec![single("pi_unit_is_floor_p", c.inclusion().unit_image().dist(&c.floor_p), tol)];
            let mut data = json!({"corner_algebra": {"blocks": c.corner_alg.blocks}, "pi": map_json(&c.pi)});
            if l.data.map.is_some() {
                let f = l.map()?;
                let g = effectus_ops::corner_factor(&c, &f, tol)?;
                checks.push(single("factor_recomposes", cpmap::compose(&g, &c.pi)?.dist(&f), tol.max(1e-12) * 1e2));
                data["factor"] = map_json(&g);
            }
            Ok((report_of(checks), data))
        }
        EffectusOp::Filter(a) => {
            cfg.command = "effectus filter".into();
            let l = load_effectus(cfg, &a)?;
            let b = l.elem("b", &l.data.b)?;
            let fp = effectus_ops::standard_filter(&b, tol)?;
            let mut inj = LawCheck::new("filter_injective");
            inj.holds(effectus_ops::filter_injective(&fp), || "c_b is not injective".into());
            let mut checks = vec![single("c_unit_is_b", fp.c.unit_image().dist(&b), tol), inj];
            let mut data = json!({"filter_algebra": {"blocks": fp.filter_alg.blocks}, "c": map_json(&fp.c)});
            if l.data.map.is_some() {
                let f = l.map()?;
                let g = effectus_ops::filter_factor(&fp, &f, tol)?;
                checks.push(single("factor_recomposes", cpmap::compose(&fp.c, &g)?.dist(&f), tol.max(1e-12) * 1e2));
                data["factor"] = map_json(&g);
            }
            Ok((report_of(checks), data))
        }
        EffectusOp::Laws { algebra } => {
            cfg.command = "effectus laws".into();
            let alg = input::<AlgebraJson>(cfg, "algebra", &algebra)?.to_algebra()?;
            let suite = effectus_ops::dagger_law_suite(&alg, cfg.seed, cfg.trials, tol, effectus_ops::seqprod);
            let mut rep = suite.report;
            rep.extend(effectus_ops::diamond_suite(&alg, cfg.seed, cfg.trials, tol));
            rep.extend(predicates_as_module(&alg, cfg.seed, cfg.trials, tol));
            let obs: Vec<Value> =
                suite.observations.checks.iter().map(|c| json!({"law": c.law, "held": c.passed, "checked": c.checked})).collect();
            Ok((rep, json!({"observations": obs})))
        }
        EffectusOp::Sef(a) => {
            cfg.command = "effectus sef".into();
            let l = load_effectus(cfg, &a)?;
            let p = l.elem("p", &l.data.p)?;
            let s = effectus_ops::sef(&p, tol)?;
            let checks = [single("sef_unital", s.unit_image().dist(&AlgElement::one(&p.algebra)), tol)];
            let mut data = json!({"sef": map_json(&s)});
            if l.data.map.is_some() {
                data["p_in_inv"] = json!(effectus_ops::inv_set_check(&l.map()?, &p, tol)?);
            }
            Ok((report_of(checks), data))
        }
    }
}

#[derive(Deserialize)]
struct Gens {
    gens: Vec<MatrixJson>,
}

#[derive(Deserialize)]
struct Basis {
    basis: Vec<MatrixJson>,
}

fn matrices(ms: &[MatrixJson]) -> Result<Vec<CMatrix>, LabError> {
    let out = ms.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
    let d = out.first().map(|m| m.rows).ok_or_else(|| LabError::Input("need at least one matrix".into()))?;
    if out.iter().any(|m| m.rows != d || m.cols != d) {
        return Err(LabError::Input(format!("all matrices must be {d}×{d}")));
    }
    Ok(out)
}

fn algebra(op: AlgebraOp, cfg: &mut RunConfig) -> Result<Outcome, LabError> {
    let tol = cfg.tol;
    match op {
        AlgebraOp::Commutant(a) => {
            cfg.command = "algebra commutant".into();
            let gens = matrices(&input::<Gens>(cfg, "in", &a.input)?.gens)?;
            let c = vnalg::commutant(&gens, tol)?;
            let mut comm = LawCheck::new("commutes_with_generators");
            for u in c.matrix_units() {
                for g in &gens {
                    comm.observe(u.commutator(g).max_abs(), tol * 1e2, || "matrix unit fails to commute".into());
                }
            }
            let dims: Vec<usize> = c.structure.blocks.iter().map(|n| n * n).collect();
            Ok((report_of([comm]), json!({"blocks": c.structure.blocks, "multiplicities": c.multiplicities, "block_dims": dims})))
        }
        AlgebraOp::Structure(a) => {
            cfg.command = "algebra structure".into();
            let basis = matrices(&input::<Basis>(cfg, "in", &a.input)?.basis)?;
            let s = vnalg::recognize_structure(&basis, cfg.seed, tol)?;
            let mut c = LawCheck::new("basis_in_recognized_algebra");
            for b in &basis {
                let r = s.residual(b);
                c.observe(r, tol * 1e2, || format!("basis element off by {r:e}"));
            }
            Ok((report_of([c]), json!({"blocks": s.structure.blocks, "multiplicities": s.multiplicities})))
        }
        AlgebraOp::Carrier(a) => {
            cfg.command = "algebra carrier".into();
            let p = input::<ElementJson>(cfg, "in", &a.input)?.to_element(None)?;
            let cc = vnalg::central_carrier(&p, tol)?;
            let mut c = LawCheck::new("carrier_central_projection");
            c.holds(cc.is_central(tol) && cc.is_projection(tol), || "carrier is not a central projection".into());
            let mut below = LawCheck::new("p_below_carrier");
            below.holds(cc.mul(&p).dist(&p) <= tol * 1e2, || "p not supported in its carrier".into());
            Ok((report_of([c, below]), json!({"carrier": elem_json(&cc)})))
        }
    }
}

enum Builtin {
    Boolean(BooleanAlgebra),
    Rational,
    Lattice(FiniteOrtholattice),
}

fn parse_builtin(s: &str) -> Result<Builtin, LabError> {
    let bad = || LabError::Input(format!("unknown builtin {s:?}"));
    Ok(match s {
        "two" => Builtin::Boolean(BooleanAlgebra::two()),
        "rational" => Builtin::Rational,
        "o6" => Builtin::Lattice(FiniteOrtholattice::o6()),
        _ => match s.split_once(':') {
            Some(("boolean", k)) => Builtin::Boolean(BooleanAlgebra::new(k.parse().map_err(|_| bad())?)?),
            Some(("mo", n)) => Builtin::Lattice(FiniteOrtholattice::mo(n.parse().map_err(|_| bad())?)),
            _ => return Err(bad()),
        },
    })
}

fn mode_for<E: EffectAlgebra>(e: &E, cfg: &RunConfig) -> Mode {
    if e.elements().is_some() {
        Mode::Exhaustive
    } else {
        Mode::Random { seed: cfg.seed, trials: cfg.trials }
    }
}

fn ea_all<E: EffectAlgebra>(e: &E, cfg: &RunConfig) -> Report {
    ea_harness(e, mode_for(e, cfg))
}

fn monoid_all<E: EffectMonoid>(e: &E, cfg: &RunConfig) -> Report {
    let m = mode_for(e, cfg);
    let mut rep = emonoid_check(e, m);
    rep.extend(emonoid_lemma_check(e, m, 3));
    rep
}

fn divisoid_all<E: EffectDivisoid>(e: &E, cfg: &RunConfig) -> Report {
    divisoid_check(e, mode_for(e, cfg))
}

fn structs(op: StructsOp, cfg: &mut RunConfig) -> Result<Outcome, LabError> {
    let pick = |cfg: &mut RunConfig, a: &StructArg| -> Result<Result<Builtin, StructureJson>, LabError> {
        match (&a.input, &a.builtin) {
            (Some(p), None) => Ok(Err(input::<StructureJson>(cfg, "in", p)?)),
            (None, Some(b)) => Ok(Ok(parse_builtin(b)?)),
            _ => Err(LabError::Input("give exactly one of --in and --builtin".into())),
        }
    };
    match op {
        StructsOp::Ea(a) => {
            cfg.command = "structs ea".into();
            let rep = match pick(cfg, &a)? {
                Ok(Builtin::Boolean(b)) => ea_all(&b, cfg),
                Ok(Builtin::Rational) => ea_all(&UnitRational, cfg),
                Ok(Builtin::Lattice(l)) => {
                    let e = l.to_ea()?;
                    let mut rep = ea_all(&e, cfg);
                    rep.extend(modularity_check(&e));
                    rep
                }
                Err(s) => ea_all(&s.to_table()?, cfg),
            };
            Ok((rep, Value::Null))
        }
        StructsOp::Oml(a) => {
            cfg.command = "structs oml".into();
            let l = match (&a.input, &a.builtin) {
                (Some(p), None) => input::<LatticeJson>(cfg, "in", p)?.to_lattice()?,
                (None, Some(b)) => match parse_builtin(b)? {
                    Builtin::Lattice(l) => l,
                    Builtin::Boolean(b) => FiniteOrtholattice::boolean(b.size().trailing_zeros()),
                    Builtin::Rational => return Err(LabError::Input("the rational interval is not a finite lattice".into())),
                },
                _ => return Err(LabError::Input("give exactly one of --in and --builtin".into())),
            };
            Ok((oml_check(&l), json!({"size": l.size()})))
        }
        StructsOp::Monoid(a) => {
            cfg.command = "structs monoid".into();
            let rep = match pick(cfg, &a)? {
                Ok(Builtin::Boolean(b)) => monoid_all(&b, cfg),
                Ok(Builtin::Rational) => monoid_all(&UnitRational, cfg),
                Ok(Builtin::Lattice(_)) => return Err(LabError::Input("lattices carry no monoid product here".into())),
                Err(s) => {
                    if s.odot.is_none() {
                        return Err(LabError::Input("monoid checks need an \"odot\" table".into()));
                    }
                    monoid_all(&s.to_table()?, cfg)
                }
            };
            Ok((rep, Value::Null))
        }
        StructsOp::Divisoid(a) => {
            cfg.command = "structs divisoid".into();
            let rep = match pick(cfg, &a)? {
                Ok(Builtin::Boolean(b)) => divisoid_all(&b, cfg),
                Ok(Builtin::Rational) => divisoid_all(&UnitRational, cfg),
                _ => return Err(LabError::Input("divisoid checks run on the builtins two, boolean:K and rational".into())),
            };
            Ok((rep, Value::Null))
        }
        StructsOp::Dm { scalars } => {
            cfg.command = "structs dm".into();
            let rep = match scalars.as_str() {
                "rational" => dm_monad_check(&UnitRational, cfg.trials, cfg.seed),
                "two-strict" => dm_monad_check(&FiniteScalars::two(Reading::Strict), cfg.trials, cfg.seed),
                "two-join" => dm_monad_check(&FiniteScalars::two(Reading::Join), cfg.trials, cfg.seed),
                s => match s.split_once(':') {
                    Some(("boolean", k)) => {
                        let k = k.parse().map_err(|_| LabError::Input(format!("bad atom count in {s:?}")))?;
                        dm_monad_check(&FiniteScalars { alg: BooleanAlgebra::new(k)?, reading: Reading::Strict }, cfg.trials, cfg.seed)
                    }
                    _ => return Err(LabError::Input(format!("unknown scalars {s:?}"))),
                },
            };
            Ok((rep, json!({"scalars": scalars})))
        }
        StructsOp::Coproduct { x, y, max_z } => {
            cfg.command = "structs coproduct".into();
            let xs = input::<ConvexJson>(cfg, "x", &x)?.to_convex()?;
            let ys = input::<ConvexJson>(cfg, "y", &y)?.to_convex()?;
            let mut rep = xs.verify(3);
            rep.extend(ys.verify(3));
            let cp = aconv_coproduct(&xs, &ys)?;
            let cands = candidate_convex_sets(xs.m, max_z)?;
            rep.extend(cp.carrier.verify(3));
            rep.extend(verify_coproduct(&cp, &xs, &ys, &cands));
            Ok((
                rep,
                json!({
                    "size": cp.carrier.size(),
                    "points": cp.carrier.names,
                    "c1": cp.c1,
                    "c2": cp.c2,
                    "free_size": cp.free_size,
                    "candidates": cands.len(),
                }),
            ))
        }
    }
}

fn run_suite(args: SuiteArgs, cfg: &mut RunConfig) -> Result<Outcome, LabError> {
    let chosen: Vec<&suite::Criterion> = if args.all {
        cfg.command = "suite --all".into();
        suite::CRITERIA.iter().collect()
    } else {
        let name = args.name.unwrap_or_default();
        cfg.command = format!("suite --name {name}");
        vec![suite::find(&name).ok_or_else(|| LabError::Input(format!("no criterion named {name:?}")))?]
    };
    let mut rep = Report::new();
    let mut per = Vec::new();
    for c in chosen {
        let r = (c.run)(cfg.seed);
        per.push(json!({"id": c.id, "name": c.name, "status": if r.passed() { "pass" } else { "fail" }, "max_residual": r.max_residual()}));
        for mut l in r.checks {
            l.law = format!("{}: {}", c.name, l.law);
            rep.push(l);
        }
    }
    Ok((rep, json!({"criteria": per})))
}
