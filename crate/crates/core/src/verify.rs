//! Deterministic verification suites with machine-readable reports.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::group::{all_subgroups, center, closure, commutator_subgroup, is_normal, FiniteGroup};
use crate::heisenberg::*;
use crate::linalg::{same_span, CycMatrix};
use crate::mackey::*;
use crate::prounipotent::*;
use crate::reps::*;
use crate::scalar::{gauss_sum, is_prime, CycField, CycNumber};
use crate::symplectic::{EnumerationGuard, SymplecticSpace};
use crate::weil::*;
use crate::{Error, Result};

pub const SUITES: [&str; 5] = ["heisenberg", "reps", "weil", "mackey", "sqrt"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown format {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub ell: usize,
    #[serde(rename = "K")]
    pub precision: u32,
    pub k0: u32,
    pub mode: VerifyMode,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { p: 3, ell: 1, precision: 4, k0: 1, mode: VerifyMode::Exhaustive, samples: 200, seed: 0, format: Format::Json, output: None }
    }
}

impl RunConfig {
    /// Rejects configurations a suite cannot run, before any work is done.
    pub fn validate(&self, suite: &str) -> Result<()> {
        if self.p == 2 || !is_prime(self.p) {
            return Err(Error::InvalidArgument(format!("{} is not an odd prime", self.p)));
        }
        if self.ell == 0 {
            return Err(Error::InvalidArgument("ell must be positive".into()));
        }
        let guard = EnumerationGuard::default();
        let small_sp = (self.ell == 1 && self.p <= guard.max_p_ell1) || (self.ell == 2 && self.p <= guard.max_p_ell2);
        match suite {
            "heisenberg" | "reps" => {
                if !small_sp {
                    return Err(Error::Guard(format!("{suite} suite needs ell = 1 and p <= {} or ell = 2 and p <= {}", guard.max_p_ell1, guard.max_p_ell2)));
                }
            }
            "weil" => {
                if self.ell != 1 || self.p > guard.max_p_ell1 {
                    let what = if self.mode == VerifyMode::Exhaustive { "exhaustive verification" } else { "the Weil lift" };
                    return Err(Error::Guard(format!("{what} requires ell = 1 and p <= {}", guard.max_p_ell1)));
                }
            }
            "mackey" => {}
            "sqrt" => {
                CongruenceGroup::new(2, self.p, self.precision, self.k0)?;
            }
            "all" => {
                for s in SUITES {
                    self.validate(s)?;
                }
            }
            _ => return Err(Error::InvalidArgument(format!("unknown suite {suite}"))),
        }
        Ok(())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    pub config: RunConfig,
    #[serde(skip)]
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => {
                let mut out = String::from("suite,check,passed,witness\n");
                let witness: HashMap<&str, &Value> = self.failures.iter().map(|f| (f.check.as_str(), &f.witness)).collect();
                for r in &self.records {
                    let w = witness.get(r.check.as_str()).map(|v| v.to_string()).unwrap_or_default();
                    out.push_str(&format!("{},{},{},{}\n", self.suite, r.check, r.passed, csv_field(&w)));
                }
                out
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Accumulates named checks; each name is recorded once, with its first failure.
#[derive(Default)]
struct Checks {
    prefix: String,
    records: Vec<CheckRecord>,
    failures: Vec<Failure>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> Value) {
        let name = format!("{}{name}", self.prefix);
        self.records.push(CheckRecord { check: name.clone(), passed: ok });
        if !ok {
            self.failures.push(Failure { check: name, witness: witness() });
        }
    }

    /// Runs a fallible check; an error is a failure whose witness is the message.
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<Option<Value>>) {
        match f() {
            Ok(None) => self.check(name, true, || Value::Null),
            Ok(Some(w)) => self.check(name, false, || w),
            Err(e) => self.check(name, false, || json!({ "error": e.to_string() })),
        }
    }
}

impl Checks {
    fn into_report(self, suite: &str, cfg: &RunConfig) -> Report {
        Report { suite: suite.into(), checks: self.records.len(), failures: self.failures, seed: cfg.seed, config: cfg.clone(), records: self.records }
    }
}

fn first<T>(it: impl IntoIterator<Item = T>, f: impl FnMut(&T) -> bool) -> Option<T> {
    it.into_iter().find(f)
}

pub fn run_suite(suite: &str, cfg: &RunConfig) -> Result<Report> {
    cfg.validate(suite)?;
    let mut c = Checks::default();
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    for s in &names {
        c.prefix = if suite == "all" { format!("{s}/") } else { String::new() };
        match *s {
            "heisenberg" => heisenberg_suite(cfg, &mut c)?,
            "reps" => reps_suite(cfg, &mut c)?,
            "weil" => weil_suite(cfg, &mut c)?,
            "mackey" => mackey_suite(cfg, &mut c)?,
            "sqrt" => sqrt_suite(cfg, &mut c)?,
            _ => unreachable!("validated"),
        }
    }
    Ok(c.into_report(suite, cfg))
}

fn triples_or_sample(n: usize, cap: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, usize)> {
    if n * n * n <= cap {
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect()
    } else {
        (0..samples.max(1)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    }
}

fn heisenberg_suite(cfg: &RunConfig, c: &mut Checks) -> Result<()> {
    let (p, ell) = (cfg.p, cfg.ell);
    let hg = HeisenbergGroup::standard(p, ell)?;
    let space = hg.space().clone();
    let n = hg.order();
    let mut rng = cfg.rng(1);
    let el = |h: usize| hg.element(h).to_json();

    let triples = triples_or_sample(n, 2_000_000, cfg.samples * 10, &mut rng);
    c.run("group_associativity", || Ok(first(triples, |&(a, b, x)| hg.mul(hg.mul(a, b), x) != hg.mul(a, hg.mul(b, x))).map(|(a, b, x)| json!([el(a), el(b), el(x)]))));
    c.run("group_inverses", || Ok(first(0..n, |&a| hg.mul(a, hg.inv(a)) != 0 || hg.mul(hg.inv(a), a) != 0).map(&el)));
    c.run("commutator_is_symplectic_form", || {
        let step = if n * n > 1_000_000 { 7 } else { 1 };
        Ok(first((0..n).step_by(step).flat_map(|a| (0..n).map(move |b| (a, b))), |&(a, b)| {
            let comm = hg.mul(hg.mul(a, b), hg.mul(hg.inv(a), hg.inv(b)));
            comm != hg.central(hg.commutator(a, b) as i64) || hg.commutator(a, b) != space.pairing(&hg.element(a).w, &hg.element(b).w)
        })
        .map(|(a, b)| json!([el(a), el(b)])))
    });
    c.run("center_equals_commutator_subgroup", || {
        let all: Vec<usize> = (0..n).collect();
        let (z, d) = (center(&hg), commutator_subgroup(&hg, &all));
        Ok((z != hg.center() || d != hg.center()).then(|| json!({ "center": z.len(), "derived": d.len() })))
    });

    let isos = SpecialIso::all(&space);
    c.check("special_iso_count", isos.len() == space.vector_count(), || json!({ "found": isos.len() }));
    if p == 3 && ell == 1 {
        c.run("special_iso_count_brute_force", || {
            let k = count_special_isos_brute_force(&hg)?;
            Ok((k != 9).then(|| json!({ "brute_force": k })))
        });
    }
    c.run("special_iso_definition", || Ok(first(&isos, |nu| !nu.satisfies_definition(&hg)).map(|nu| json!(nu.offset))));
    c.run("special_iso_torsor", || {
        let tables: std::collections::HashSet<Vec<usize>> = isos.iter().map(|nu| (0..n).map(|h| nu.apply(&hg, h)).collect()).collect();
        let inverse_ok = isos.iter().all(|nu| (0..n).all(|h| nu.apply_inverse(&hg, nu.apply(&hg, h)) == h));
        Ok((tables.len() != isos.len() || !inverse_ok).then(|| json!({ "distinct": tables.len(), "inverse_ok": inverse_ok })))
    });
    if ell == 1 {
        c.run("special_iso_equality_conditions", || {
            let sp = space.enumerate_sp()?;
            for a in &isos {
                for b in &isos {
                    let (x, y, z) = special_iso_equal_tests(&hg, &sp, a, b);
                    if !(x == y && y == z && x == (a == b)) {
                        return Ok(Some(json!({ "nu1": a.offset, "nu2": b.offset, "conditions": [x, y, z] })));
                    }
                }
            }
            Ok(None)
        });
    }

    let pol = space.standard_polarization();
    let plus = hg.lift_subspace(&pol.plus);
    let minus = hg.lift_subspace(&pol.minus);
    let hat_minus = hg.lift_subspace_with_center(&pol.minus);
    c.run("split_polarization_to_special_iso", || {
        if special_iso_from_split_polarization(&hg, &plus, &minus)? != SpecialIso::base(&space) {
            return Ok(Some(json!("standard split polarization")));
        }
        for w0 in space.all_vectors() {
            let x = hg.make(&w0, 0);
            let conj = |set: &[usize]| -> Vec<usize> {
                let mut v: Vec<usize> = set.iter().map(|&h| hg.mul(hg.mul(hg.inv(x), h), x)).collect();
                v.sort_unstable();
                v
            };
            let (cp, cm) = (conj(&plus), conj(&minus));
            let nu = special_iso_from_split_polarization(&hg, &cp, &cm)?;
            if nu.offset != space.neg_vec(&w0) || cp.iter().chain(&cm).any(|&h| nu.mu(&hg, h) != 0) {
                return Ok(Some(json!({ "w0": w0, "offset": nu.offset })));
            }
        }
        Ok(None)
    });
    c.run("special_iso_splits_polarization", || {
        for nu in &isos {
            let m = split_polarization_from_iso(&hg, nu, &plus, &hat_minus)?;
            let mut prod: Vec<usize> = m.iter().flat_map(|&a| (0..p as usize).map(move |z| (a, z))).map(|(a, z)| hg.mul(a, z)).collect();
            prod.sort_unstable();
            let meets_center = m.iter().any(|&h| h != 0 && h < p as usize);
            let round_trip = if plus.iter().all(|&h| nu.mu(&hg, h) == 0) { special_iso_from_split_polarization(&hg, &plus, &m)? == *nu } else { true };
            if prod != hat_minus || meets_center || m.len() != hg.span(&pol.minus).len() || !round_trip {
                return Ok(Some(json!({ "nu": nu.offset })));
            }
        }
        Ok(None)
    });
    c.run("involution_of_standard_polarization", || {
        let alpha = involution_from_polarization(&space, &pol)?;
        let e1 = space.basis_vector(0);
        let ok = alpha.apply(&hg, hg.make(&e1, 1)) == hg.make(&e1, -1) && alpha.is_automorphism(&hg) && alpha.is_involution(&hg);
        let (hp, hm) = polarization_from_involution(&hg, &alpha)?;
        Ok((!ok || hp != plus || hm != hat_minus).then(|| json!({ "image_of_e1_1": el(alpha.apply(&hg, hg.make(&e1, 1))) })))
    });

    if ell == 1 {
        c.run("involutions_nontrivial_on_center_give_polarizations", || {
            let list = order_two_automorphisms_nontrivial_on_center(&space)?;
            if list.is_empty() {
                return Ok(Some(json!("no involutions found")));
            }
            for alpha in &list {
                let bad = || json!({ "s": alpha.s.matrix.to_json(), "w0": alpha.w0 });
                if !alpha.is_automorphism(&hg) || !alpha.is_involution(&hg) {
                    return Ok(Some(bad()));
                }
                let (hp, hm) = polarization_from_involution(&hg, alpha)?;
                validate_polarization_of_h(&hg, &hp, &hm)?;
                let by_product: Vec<usize> = (0..n).filter(|&h| hg.mul(h, alpha.apply(&hg, h)) < p as usize).collect();
                let (fixed, negated) = space.eigen_polarization(&alpha.s)?;
                let img = |set: &[usize]| -> Vec<Vec<u64>> { hg.image_in_w(set).iter().map(|&w| space.vector_from_index(w)).collect() };
                if by_product != hm || !space.same_subspace(&img(&hp), &fixed) || !space.same_subspace(&img(&hm), &negated) {
                    return Ok(Some(bad()));
                }
            }
            Ok(None)
        });
        c.run("involutions_trivial_on_center_count", || {
            let list = order_two_automorphisms_trivial_on_center(&space)?;
            let brute = count_order_two_trivial_on_center_brute_force(&hg)?;
            let fixes = list.iter().all(|a| (0..p as usize).all(|z| a.apply(&hg, z) == z) && a.is_involution(&hg));
            Ok((list.len() != brute || list.len() != (p * p) as usize || !fixes).then(|| json!({ "listed": list.len(), "brute_force": brute })))
        });
        c.run("lagrangian_subgroup_conjugator", || {
            for v in space.all_vectors().into_iter().filter(|v| v.iter().any(|&x| x != 0)) {
                for m in 0..p as i64 {
                    let hplus = closure(&hg, &[hg.make(&v, m)]);
                    let w0 = hplus_conjugator(&hg, &hplus)?;
                    let x = hg.make(&w0, 0);
                    if let Some(&h) = hplus.iter().find(|&&h| hg.mul(hg.mul(hg.inv(x), hg.split(h).0 * p as usize), x) != h) {
                        return Ok(Some(json!({ "generator": el(hg.make(&v, m)), "w0": w0, "element": el(h) })));
                    }
                }
            }
            Ok(None)
        });
    } else {
        c.run("special_iso_restricts_to_heisenberg_subgroup", || {
            let u = vec![space.basis_vector(0), space.basis_vector(ell)];
            let sub = hg.lift_subspace_with_center(&u);
            let closed = closure(&hg, &sub) == sub;
            let bad = isos.iter().step_by(7).find(|nu| !satisfies_special_iso_definition(&hg, &|h| nu.mu(&hg, h), &sub));
            Ok((!closed || bad.is_some()).then(|| json!({ "closed": closed, "nu": bad.map(|nu| nu.offset.clone()) })))
        });
    }
    Ok(())
}

fn one(f: &'static CycField) -> impl Fn(usize) -> CycNumber + Sync {
    move |_| CycNumber::one(f)
}

fn rep_pair_failure(rep: &MatrixRep, hg: &HeisenbergGroup, samples: usize, rng: &mut ChaCha8Rng) -> Option<(usize, usize)> {
    let n = hg.order();
    if n <= 125 {
        return rep.homomorphism_failure(hg);
    }
    (0..samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).find(|&(a, b)| *rep.image(hg.mul(a, b)) != rep.image(a).mul(rep.image(b)))
}

fn fixed_forms_witness(hg: &HeisenbergGroup, k: &[usize]) -> Result<Option<Value>> {
    let mut dim = None;
    for model in [Model::Plus, Model::Minus] {
        let tau = heisenberg_rep(hg, 1, model)?;
        let ff = fixed_forms(hg, &tau, 1, model, k)?;
        let nonzero = ff.double_coset_forms.iter().filter(|v| v.iter().any(|x| !x.is_zero())).count();
        let hd = hom_dim(&tau, k, one(tau.field()))?;
        if !ff.agree(tau.field(), tau.dim()) || nonzero != ff.dimension() || hd != ff.dimension() || *dim.get_or_insert(hd) != hd {
            return Ok(Some(json!({ "K": hg.subset_to_json(k), "model": model, "double_coset_forms": nonzero, "nullspace": ff.dimension(), "hom_dim": hd })));
        }
    }
    Ok(None)
}

fn fixed_form_dim(hg: &HeisenbergGroup, k: &[usize]) -> Result<usize> {
    let tau = heisenberg_rep(hg, 1, Model::Minus)?;
    Ok(fixed_forms(hg, &tau, 1, Model::Minus, k)?.dimension())
}

fn reps_suite(cfg: &RunConfig, c: &mut Checks) -> Result<()> {
    let (p, ell) = (cfg.p, cfg.ell);
    let hg = HeisenbergGroup::standard(p, ell)?;
    let space = hg.space().clone();
    let n = hg.order();
    let f = CycField::for_prime(p);
    let dim = (p as usize).pow(ell as u32);
    let mut rng = cfg.rng(2);

    for model in [Model::Plus, Model::Minus] {
        let exps: Vec<u64> = if n <= 125 { (1..p).collect() } else { vec![1, p - 1] };
        for k in exps {
            let name = format!("heisenberg_rep_homomorphism_{}_zeta{k}", if model == Model::Plus { "plus" } else { "minus" });
            let tau = heisenberg_rep(&hg, k, model)?;
            let fail = rep_pair_failure(&tau, &hg, cfg.samples, &mut rng);
            c.check(&name, fail.is_none(), || json!(fail));
        }
    }
    let tau = heisenberg_rep(&hg, 1, Model::Minus)?;
    c.run("central_character", || {
        let zeta = CycNumber::root_of_order(f, p as u32, 1);
        Ok((*tau.image(hg.central(1)) != CycMatrix::scalar(f, dim, &zeta)).then(|| json!("image of (0,1)")))
    });
    if ell == 1 {
        c.run("translation_and_phase_formulas", || {
            let shift = CycMatrix::from_fn(f, dim, dim, |t, u| if u == (t + 1) % dim { CycNumber::one(f) } else { CycNumber::zero(f) });
            if *tau.image(hg.make(&[1, 0], 0)) != shift {
                return Ok(Some(json!("translation")));
            }
            for x in 0..p as i64 {
                let phase = CycMatrix::from_fn(f, dim, dim, |t, u| if t == u { zeta_value(f, p, 1, -x * t as i64) } else { CycNumber::zero(f) });
                if *tau.image(hg.make(&[0, (p - x as u64) % p], 0)) != phase {
                    return Ok(Some(json!({ "phase": x })));
                }
            }
            Ok(None)
        });
    }
    c.run("character_supported_on_center", || {
        Ok(first(0..n, |&h| {
            let (w, z) = hg.split(h);
            let expected = if w == 0 { CycNumber::root_of_order(f, p as u32, z as i64).scale_int(dim as i64) } else { CycNumber::zero(f) };
            tau.trace(h) != expected
        })
        .map(|h| hg.element(h).to_json()))
    });
    c.run("contragredient_is_inverse_central_character_model", || {
        let dual = contragredient(&hg, &tau)?;
        let other = heisenberg_rep(&hg, p - 1, Model::Minus)?;
        let back = contragredient(&hg, &dual)?;
        Ok((dual.images() != other.images() || back.character_values() != tau.character_values()).then(|| json!("contragredient")))
    });
    c.run("invariant_pairing", || {
        let co = heisenberg_rep(&hg, p - 1, Model::Minus)?;
        let delta = |i: usize| -> Vec<CycNumber> { (0..dim).map(|j| if i == j { CycNumber::one(f) } else { CycNumber::zero(f) }).collect() };
        let col = |m: &CycMatrix, v: &[CycNumber]| m.transpose().left_apply(v);
        let pairs: Vec<(usize, usize)> = if dim <= 5 { (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect() } else { (0..dim).map(|i| (i, (i + 1) % dim)).chain((0..dim).map(|i| (i, i))).collect() };
        for (i, j) in pairs {
            let base = invariant_pairing(&delta(i), &delta(j))?;
            if base != CycNumber::from_int(f, (i == j) as i64) {
                return Ok(Some(json!({ "i": i, "j": j })));
            }
            let step = if n > 400 { 11 } else { 1 };
            for h in (0..n).step_by(step) {
                if invariant_pairing(&col(tau.image(h), &delta(i)), &col(co.image(h), &delta(j)))? != base {
                    return Ok(Some(json!({ "i": i, "j": j, "h": hg.element(h).to_json() })));
                }
            }
        }
        Ok(None)
    });

    if ell == 1 {
        c.run("fixed_forms_match_nullspace", || {
            if p == 3 {
                for k in all_subgroups(&hg) {
                    if let Some(w) = fixed_forms_witness(&hg, &k)? {
                        return Ok(Some(w));
                    }
                }
            } else {
                for _ in 0..50 {
                    let gens: Vec<usize> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..n)).collect();
                    if let Some(w) = fixed_forms_witness(&hg, &closure(&hg, &gens))? {
                        return Ok(Some(w));
                    }
                }
            }
            Ok(None)
        });
    }
    c.run("fixed_forms_examples", || {
        let pol = space.standard_polarization();
        let wplus = hg.lift_subspace(&pol.plus);
        let dims = [fixed_form_dim(&hg, &hg.center())?, fixed_form_dim(&hg, &hg.lift_subspace_with_center(&pol.plus))?, fixed_form_dim(&hg, &wplus)?];
        let ff = fixed_forms(&hg, &tau, 1, Model::Minus, &wplus)?;
        let spans_ones = same_span(f, &ff.nullspace_basis, &[vec![CycNumber::one(f); dim]], dim);
        let mut lines_ok = true;
        if ell == 1 {
            for v in space.all_vectors().into_iter().filter(|v| v.iter().any(|&x| x != 0)) {
                lines_ok &= fixed_form_dim(&hg, &hg.lift_subspace(&[v]))? == 1;
            }
        }
        Ok((dims != [0, 0, 1] || !spans_ones || !lines_ok).then(|| json!({ "dims": dims, "spans_ones": spans_ones, "isotropic_lines": lines_ok })))
    });
    c.run("hom_dim_trivial_subgroup", || {
        let d = hom_dim(&tau, &[0], one(f))?;
        Ok((d != dim).then(|| json!(d)))
    });

    if ell == 1 {
        let nontrivial = order_two_automorphisms_nontrivial_on_center(&space)?;
        let trivial = order_two_automorphisms_trivial_on_center(&space)?;
        let awit = |a: &HeisenbergAutomorphism| json!({ "s": a.s.matrix.to_json(), "w0": a.w0, "central_sign": a.central_sign });
        c.run("involution_fixed_points_have_one_invariant_form", || {
            for alpha in &nontrivial {
                let (plus, hm) = polarization_from_involution(&hg, alpha)?;
                validate_polarization_of_h(&hg, &plus, &hm)?;
                if hom_dim(&tau, &plus, one(f))? != 1 {
                    return Ok(Some(awit(alpha)));
                }
            }
            Ok(None)
        });
        c.run("twist_by_involution_is_contragredient", || {
            let dual = contragredient(&hg, &tau)?;
            for alpha in &nontrivial {
                let t = alpha.table(&hg);
                if !rep_equivalent(&tau.precompose(|h| t[h])?, &dual)? {
                    return Ok(Some(awit(alpha)));
                }
            }
            Ok(None)
        });
        c.run("involution_trivial_on_center_has_no_invariant_form", || {
            for alpha in &trivial {
                let t = alpha.table(&hg);
                let fixed: Vec<usize> = (0..n).filter(|&h| t[h] == h).collect();
                if hom_dim(&tau, &fixed, one(f))? != 0 {
                    return Ok(Some(awit(alpha)));
                }
            }
            Ok(None)
        });
        c.run("inequivalent_central_characters", || {
            let tau2 = heisenberg_rep(&hg, 2, Model::Minus)?;
            Ok((!rep_equivalent(&tau, &tau)? || rep_equivalent(&tau, &tau2)?).then(|| json!("zeta vs zeta^2")))
        });
        c.run("irreducibles_orthonormal", || {
            let irr = irreducibles_of_h(&hg)?;
            let count_ok = irr.len() == (p * p + p - 1) as usize && irr.iter().map(|r| r.dim() * r.dim()).sum::<usize>() == n;
            if !count_ok {
                return Ok(Some(json!({ "count": irr.len() })));
            }
            for (i, a) in irr.iter().enumerate() {
                for (j, b) in irr.iter().enumerate().skip(i) {
                    if character_inner_product(a, b)? != CycNumber::from_int(f, (i == j) as i64) {
                        return Ok(Some(json!({ "i": i, "j": j })));
                    }
                }
            }
            Ok(None)
        });
        c.run("gelfand_pair", || {
            let irr = irreducibles_of_h(&hg)?;
            let stride = nontrivial.len().div_ceil(48).max(1);
            for alpha in nontrivial.iter().step_by(stride) {
                let (plus, _) = polarization_from_involution(&hg, alpha)?;
                for (i, rho) in irr.iter().enumerate() {
                    let d = hom_dim(rho, &plus, one(f))?;
                    if d > 1 {
                        return Ok(Some(json!({ "alpha": awit(alpha), "irreducible": i, "hom_dim": d })));
                    }
                }
            }
            Ok(None)
        });
        c.run("gelfand_double_coset_identity", || {
            for alpha in &nontrivial {
                let (wp, wm) = space.eigen_polarization(&alpha.s)?;
                for &a in &hg.span(&wp) {
                    for &b in &hg.span(&wm) {
                        let (a, b) = (space.vector_from_index(a), space.vector_from_index(b));
                        let na = hg.make(&space.neg_vec(&a), 0);
                        for z in 0..p as i64 {
                            let lhs = hg.mul(hg.mul(na, hg.make(&space.add_vec(&a, &space.neg_vec(&b)), -z)), na);
                            if lhs != hg.make(&space.neg_vec(&space.add_vec(&a, &b)), -z) {
                                return Ok(Some(json!({ "w_plus": a, "w_minus": b, "z": z })));
                            }
                        }
                    }
                }
            }
            Ok(None)
        });
    }
    Ok(())
}

fn weil_suite(cfg: &RunConfig, c: &mut Checks) -> Result<()> {
    let p = cfg.p;
    let hg = HeisenbergGroup::standard(p, 1)?;
    c.run("gauss_sum_norm", || {
        let g = gauss_sum(p)?;
        let f = g.field();
        let sign = if p % 4 == 1 { 1 } else { -1 };
        Ok((g.mul(&g) != CycNumber::from_int(f, sign * p as i64) || g.mul(&g.conj()) != CycNumber::from_int(f, p as i64)).then(|| g.to_json()))
    });
    c.run("weyl_scalar_unit_modulus", || {
        let s = select_weyl_scalar(&hg, 1)?;
        let f = s.field();
        Ok((s.mul(&s.conj()).scale_int(p as i64) != CycNumber::one(f)).then(|| s.to_json()))
    });
    let mut lifts = vec![];
    for model in [Model::Plus, Model::Minus] {
        let tag = if model == Model::Plus { "plus" } else { "minus" };
        let lift = standard_lift(&hg, 1, model)?;
        c.run(&format!("lift_homomorphism_{tag}"), || {
            let r = verify_homomorphism(&hg, &lift, cfg.mode, cfg.samples, cfg.seed)?;
            Ok((!r.passed()).then(|| serde_json::to_value(&r).expect("serializes")))
        });
        c.run(&format!("levi_trace_sign_{tag}"), || {
            let entries = trace_sign_on_m(&lift)?;
            Ok(first(&entries, |e| !e.ok()).map(|e| serde_json::to_value(e).expect("serializes")))
        });
        c.run(&format!("parabolic_character_on_plus_form_{tag}"), || {
            let lambda = lambda_plus(&lift)?;
            let fixed = invariant_forms_nullspace(&lift.base, &plus_lagrangian_preimage(&hg, &lift.nu));
            let spans = fixed.len() == 1 && same_span(lift.field(), &fixed, std::slice::from_ref(&lambda), lift.dim());
            let r = p_action_check(&lift, &lambda)?;
            Ok((!spans || !r.failures.is_empty() || r.checked != (p * (p - 1)) as usize).then(|| json!({ "fixed_forms": fixed.len(), "failures": r.failures })))
        });
        lifts.push(lift);
    }
    c.run("contragredient_lift", || {
        let dual = lifts[1].contragredient(&hg)?;
        let r = verify_homomorphism(&hg, &dual, VerifyMode::Relations, 0, 0)?;
        let direct = weil_lift(&hg, &contragredient(&hg, &lifts[1].base)?, &lifts[1].nu)?;
        Ok((!r.passed() || dual.sp_character() != direct.sp_character()).then(|| json!("contragredient")))
    });
    c.run("abelianization", || {
        let a = abelianization_order(&lifts[0].group);
        let expected = if p == 3 { 3 } else { 1 };
        Ok((a != expected).then(|| json!(a)))
    });
    if p == 3 {
        c.run("sl23_character_is_alpha_plus_beta", || {
            let r = sl23_reference()?;
            let mism = r.character_mismatches();
            Ok((!mism.is_empty()).then(|| json!(mism)))
        });
        c.run("sl23_exactly_one_extension_matches", || {
            let r = sl23_reference()?;
            let target: Vec<CycNumber> = (0..24).map(|s| r.alpha.trace(s).add(&r.beta.trace(s))).collect();
            let exts = sl23_extensions(&r);
            let matches: Vec<bool> = exts.iter().map(|l| l.sp_character() == target).collect();
            Ok((matches.iter().filter(|&&m| m).count() != 1 || exts.len() != 3).then(|| json!(matches)))
        });
        c.run("sl23_fourier_transform_at_inverse_weyl", || {
            let r = sl23_reference()?;
            let i = CycNumber::imaginary_unit(r.tauhat.field());
            let jinv = r.appendix_element(&[vec![0, -1], vec![1, 0]])?;
            Ok((*r.tauhat.image(jinv) != r.fourier_transform()?.scale(&i)).then(|| json!("tau^(j^-1) != i F")))
        });
        c.run("transported_character_independent_of_special_iso", || {
            let tau = heisenberg_rep(&hg, 1, Model::Minus)?;
            let isos = SpecialIso::all(hg.space());
            let reference = transported_character(&hg, &abstract_lift(&hg, &tau, &SpecialIso::base(hg.space()), 1)?);
            for nu in &isos {
                let lift = abstract_lift(&hg, &tau, nu, 1)?;
                if !verify_homomorphism(&hg, &lift, VerifyMode::Exhaustive, 0, 0)?.passed() || transported_character(&hg, &lift) != reference {
                    return Ok(Some(json!(nu.offset)));
                }
            }
            for a in &isos {
                for b in &isos {
                    if !special_iso_twist_holds(&hg, &tau, 1, a, b) {
                        return Ok(Some(json!({ "nu1": a.offset, "nu2": b.offset })));
                    }
                }
            }
            Ok(None)
        });
    }
    Ok(())
}

/// `(K, κ, H)` with `mackey_hom_dim`, the oracle and its contragredient form agreeing.
fn mackey_configurations(c: &mut Checks, g: &TableGroup, field: &'static CycField, configs: &mut usize) -> Result<()> {
    let subs = all_subgroups(g);
    let stride = (subs.len() / 4).max(1);
    let picks: Vec<&Vec<usize>> = subs.iter().step_by(stride).collect();
    let name = format!("mackey_matches_induced_oracle_{}", g.name);
    let mut witness = None;
    for k in &picks {
        if g.order() / k.len() > ORACLE_GUARD {
            continue;
        }
        let chars = linear_characters(g, k, field)?;
        for (ci, kappa) in chars.iter().enumerate().take(3) {
            for h in &picks {
                let m = mackey_hom_dim(g, k, kappa, h)?;
                let o = induced_hom_dim_oracle(g, k, kappa, h)?;
                let oc = induced_hom_dim_oracle_contragredient(g, k, kappa, h)?;
                *configs += 1;
                if (m != o || m != oc) && witness.is_none() {
                    witness = Some(json!({ "K": k, "character": ci, "H": h, "mackey": m, "oracle": o, "contragredient": oc }));
                }
            }
        }
    }
    c.check(&name, witness.is_none(), || witness.clone().unwrap_or(Value::Null));
    Ok(())
}

/// Orbit clauses, triangle and multiplicity identities for one `(G, K, κ, θ)`.
fn orbit_witness<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], kappa: &MatrixRep, theta: &InvolutionRecord, limit: Option<usize>) -> Result<Option<Value>> {
    let r = s_theta_clauses(g, k, theta, limit)?;
    let o = orbmult_check(g, k, kappa, theta)?;
    let normal = is_normal(g, k);
    let bound_ok = !o.h1.center_in_k || o.m_k <= o.h1.bound;
    let ok = r.clause1 && r.clause2 && r.triangle && o.fiber_identity() && (!normal || (r.passed() && o.passed())) && (!r.clause4 || o.lhs == o.rhs) && (!normal || bound_ok);
    Ok((!ok).then(|| json!({ "K": k, "theta": theta.map, "normal": normal, "clauses": r, "multiplicity": o })))
}

/// Parts of the Mackey suite: `groups` (the table-group zoo), `semidirect`
/// (`H`, `Ŝ ⋉ W` and `Sp(W) ⋉ H` at `p = 3`), or `all`.
pub const MACKEY_SCOPES: [&str; 3] = ["all", "groups", "semidirect"];

fn mackey_suite(cfg: &RunConfig, c: &mut Checks) -> Result<()> {
    mackey_scoped(cfg, "all", c)
}

/// The Mackey suite restricted to one scope.
pub fn run_mackey(cfg: &RunConfig, scope: &str) -> Result<Report> {
    cfg.validate("mackey")?;
    if !MACKEY_SCOPES.contains(&scope) {
        return Err(Error::InvalidArgument(format!("unknown mackey scope {scope}")));
    }
    let mut c = Checks::default();
    mackey_scoped(cfg, scope, &mut c)?;
    Ok(c.into_report("mackey", cfg))
}

/// Mackey and orbit checks on a user-supplied table group.
pub fn run_table_group(cfg: &RunConfig, g: &TableGroup) -> Result<Report> {
    let field = CycField::get(24);
    let mut c = Checks::default();
    let mut configs = 0;
    mackey_configurations(&mut c, g, field, &mut configs)?;
    if g.order() <= AUTOMORPHISM_GUARD {
        table_orbit_identities(&mut c, g, field);
    }
    Ok(c.into_report("mackey", cfg))
}

fn table_orbit_identities(c: &mut Checks, g: &TableGroup, field: &'static CycField) {
    c.run(&format!("orbit_identities_{}", g.name), || {
        let subs = all_subgroups(g);
        for theta in involutions(g)?.iter().take(6) {
            for k in subs.iter().step_by(3) {
                if let Some(w) = orbit_witness(g, k, &MatrixRep::trivial(g, field, k.clone())?, theta, None)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    });
}

fn mackey_scoped(cfg: &RunConfig, scope: &str, c: &mut Checks) -> Result<()> {
    let field = CycField::get(24);
    let hg3 = HeisenbergGroup::standard(3, 1)?;
    if scope != "semidirect" {
        let mut configs = 0usize;
        let groups: Vec<TableGroup> = zoo()?.into_iter().filter(|g| g.order() <= 48).collect();
        for g in &groups {
            mackey_configurations(c, g, field, &mut configs)?;
        }
        if cfg.p == 5 {
            let h5 = TableGroup::heisenberg(&HeisenbergGroup::standard(5, 1)?)?;
            mackey_configurations(c, &h5, CycField::for_prime(5), &mut configs)?;
        }
        c.check("mackey_configuration_count", configs >= 20, || json!(configs));
        for g in groups.iter().filter(|g| g.order() <= AUTOMORPHISM_GUARD) {
            table_orbit_identities(c, g, field);
        }
    }
    if scope == "groups" {
        return Ok(());
    }
    c.run("orbit_identities_heisenberg", || {
        let g = TableGroup::heisenberg(&hg3)?;
        let subs = all_subgroups(&g);
        let list = order_two_automorphisms_nontrivial_on_center(hg3.space())?;
        for alpha in list.iter().step_by(4) {
            let theta = InvolutionRecord::new(&g, alpha.table(&hg3))?;
            for k in subs.iter().step_by(5) {
                for kappa in linear_characters(&g, k, CycField::for_prime(3))?.iter().take(2) {
                    if let Some(w) = orbit_witness(&g, k, kappa, &theta, None)? {
                        return Ok(Some(w));
                    }
                }
            }
        }
        Ok(None)
    });
    c.run("orbit_identities_hat_symplectic_semidirect_w", || {
        let space = SymplecticSpace::new(3, 1)?;
        let g = TableGroup::hat_sp_semidirect_w(&space)?;
        let nvec = space.vector_count();
        let hat: Vec<usize> = (0..48).map(|s| s * nvec).collect();
        let f = CycField::for_prime(3);
        let sign = MatrixRep::character(&g, f, hat.clone(), |x| CycNumber::from_int(f, TableGroup::hat_sign(&space, x).expect("enumerable")))?;
        let theta = InvolutionRecord::inner(&g, 24 * nvec)?;
        for kappa in [MatrixRep::trivial(&g, f, hat.clone())?, sign] {
            if let Some(w) = orbit_witness(&g, &hat, &kappa, &theta, Some(48))? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    });
    c.run("symplectic_semidirect_heisenberg", || {
        let g = TableGroup::sp_semidirect_heisenberg(&hg3)?;
        let lift = standard_lift(&hg3, 1, Model::Minus)?;
        let rep = semidirect_weil_rep(&g, &lift, &hg3)?;
        if let Some(x) = rep.homomorphism_failure(&g) {
            return Ok(Some(json!({ "homomorphism_failure": x })));
        }
        let h: Vec<usize> = (0..hg3.order()).map(|x| semidirect_index(&hg3, 0, x)).collect();
        let tau = heisenberg_rep(&hg3, 1, Model::Minus)?;
        let kappa = MatrixRep::new(tau.field(), 3, g.order(), h.clone(), h.iter().map(|&x| tau.image(x % hg3.order()).clone()).collect(), vec![])?;
        let minus_one = lift.index_of(&hg3.space().m_element_scalar(-1)?)?;
        let theta = InvolutionRecord::inner(&g, semidirect_index(&hg3, minus_one, 0))?;
        let o = orbmult_check(&g, &h, &kappa, &theta)?;
        Ok((!o.passed()).then(|| serde_json::to_value(&o).expect("serializes")))
    });
    Ok(())
}

fn sqrt_suite(cfg: &RunConfig, c: &mut Checks) -> Result<()> {
    let (p, kk, k0) = (cfg.p, cfg.precision, cfg.k0);
    let mut rng = cfg.rng(5);
    if p == 3 {
        c.run("square_root_of_four_mod_81", || {
            let g = CongruenceGroup::new(1, 3, 4, 1)?;
            let r = sqrt(&g.element_from_rows(&[vec![4]])?)?;
            let all = square_roots_brute_force(&g.element_from_rows(&[vec![4]])?)?;
            Ok((r.root.matrix().to_rows() != vec![vec![79]] || all != vec![r.root.clone()]).then(|| r.to_json()))
        });
    }
    for n in [1usize, 2] {
        let g = CongruenceGroup::new(n, p, kk, k0)?;
        c.run(&format!("square_root_unique_n{n}"), || {
            if g.order() <= ENUMERATION_GUARD {
                let elems = g.enumerate()?;
                let squares: HashMap<CongruenceElement, usize> = elems.iter().enumerate().map(|(i, x)| (x.square(), i)).collect();
                if squares.len() != elems.len() {
                    return Ok(Some(json!({ "squaring_not_injective": elems.len() - squares.len() })));
                }
                for a in &elems {
                    let r = sqrt(a)?;
                    if r.root.square() != *a || elems[squares[a]] != r.root {
                        return Ok(Some(a.to_json()));
                    }
                }
            } else {
                for _ in 0..cfg.samples {
                    let a = g.random(&mut rng);
                    let r = sqrt(&a)?;
                    if r.root.square() != a || r.root.level() != a.level() {
                        return Ok(Some(a.to_json()));
                    }
                }
            }
            Ok(None)
        });
    }
    let g2 = CongruenceGroup::new(2, p, kk, k0)?;
    let alphas = vec![
        ("transpose_inverse", CongruenceAutomorphism::transpose_inverse(&g2)),
        ("antidiagonal_transpose_inverse", CongruenceAutomorphism::antidiagonal_transpose_inverse(&g2)),
        ("swap", CongruenceAutomorphism::new(&g2, BaseInvolution::Permutation { perm: vec![1, 0] }, None)?),
    ];
    c.run("square_root_commutes_with_automorphisms", || {
        for _ in 0..cfg.samples.min(100) {
            let a = g2.random(&mut rng);
            for (name, alpha) in &alphas {
                if sqrt(&alpha.apply(&a))?.root != alpha.apply(&sqrt(&a)?.root) {
                    return Ok(Some(json!({ "alpha": name, "a": a.to_json() })));
                }
            }
        }
        Ok(None)
    });
    if p == 3 {
        c.run("h1_trivial_exhaustive_1_plus_3M2_mod_27", || {
            let g = CongruenceGroup::new(2, 3, 3, 1)?;
            let r = h1_alpha_trivial_exhaustive(&g, &CongruenceAutomorphism::transpose_inverse(&g))?;
            Ok((!r.trivial || r.group_order != 6561).then(|| serde_json::to_value(&r).expect("serializes")))
        });
    }
    if g2.order() <= ENUMERATION_GUARD {
        c.run("h1_trivial_exhaustive", || {
            for (name, alpha) in &alphas {
                let r = h1_alpha_trivial_exhaustive(&g2, alpha)?;
                if !r.trivial {
                    return Ok(Some(json!({ "alpha": name, "report": r })));
                }
            }
            Ok(None)
        });
    }
    c.run("h1_witnesses", || {
        for (name, alpha) in &alphas {
            for _ in 0..100 {
                let z = random_cocycle(&g2, alpha, &mut rng);
                let y = h1_witness(&z, alpha)?;
                if y.mul(&alpha.apply(&y).inverse()) != z {
                    return Ok(Some(json!({ "alpha": name, "z": z.to_json() })));
                }
            }
        }
        Ok(None)
    });
    c.run("alpha_factorization", || {
        let alpha = CongruenceAutomorphism::antidiagonal_transpose_inverse(&g2);
        let (upper, lower, full) = (BlockPattern::upper(2), BlockPattern::lower(2), BlockPattern::full(2));
        for i in 0..100 {
            let cc = random_fixed(&g2, &full, &alpha, &mut rng)?;
            let (a, b) = if i % 2 == 0 { (&upper, &lower) } else { (&lower, &upper) };
            let f = alpha_factor(&cc, a, b, &alpha)?;
            let ok = a.contains(&f.a) && b.contains(&f.b) && alpha.apply(&f.a) == f.a && alpha.apply(&f.b) == f.b && f.a.mul(&f.b) == cc;
            if !ok {
                return Ok(Some(json!({ "c": cc.to_json(), "factorization": f.to_json() })));
            }
        }
        Ok(None)
    });
    Ok(())
}
