//! The Heisenberg–Weil lift of a Heisenberg representation to `Sp(W) ⋉ H`.
//!
//! Construction: in the plus model (functions on `W⁻`) the parabolic `P`
//! acts by `(τ̂₊(g)φ)(t) = χ^P(g) ζ(−½u·v) φ(v)` with `(u,v) = g⁻¹(0,t)`,
//! and the Weyl element by `c·F`, `(Fφ)(u) = Σ_t φ(t) ζ(t·u)`, where `c` is the
//! unique candidate in `{±1/g(p), ±i/g(p)}` satisfying the relations
//! `j² = m(−1)` and `(j·n(1))³ = 1`. The rest of `Sp` is reached through the
//! Bruhat decomposition `s = n(a/c)·j·p₂` (`ℓ = 1`). Any other model, and any
//! special isomorphism `ν`, is reached by an intertwiner
//! `T : τ₊ → τ∘ν⁻¹`, giving `ρ̂(s) = T τ̂₊(s) T⁻¹`.
//!
//! The SL(2,3) reference model uses a second basis `e₁' = −e₂`, `e₂' = e₁`
//! (first vector in `W⁻`, second in `W⁺`); a matrix `A` written in that basis
//! corresponds to `s = j A j⁻¹` in the standard one.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{commutator_subgroup, FiniteGroup};
use crate::heisenberg::{HeisenbergElement, HeisenbergGroup, SpecialIso};
use crate::linalg::CycMatrix;
use crate::modular::{mod_inv, ModMatrix};
use crate::reps::{basis_point, contragredient, heisenberg_rep, zeta_value, MatrixRep, Model};
use crate::scalar::{gauss_sum, legendre, CycField, CycNumber};
use crate::symplectic::{EnumerationGuard, SpElement, SpTable, SymplecticSpace};

/// A lift of `τ` to `Sp(W) ⋉_ν H`.
#[derive(Clone, Debug)]
pub struct WeilLift {
    pub base: MatrixRep,
    pub nu: SpecialIso,
    pub zeta_exponent: u64,
    /// The scalar `c` with `τ̂₊(j) = c·F`.
    pub weyl_scalar: CycNumber,
    /// `T` with `T τ₊(h) = τ(ν⁻¹(h)) T`.
    pub transport: CycMatrix,
    pub group: SpTable,
    p: u64,
    ell: usize,
    sp_images: Vec<CycMatrix>,
}

fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).map(|(x, y)| x * y % p).sum::<u64>() % p
}

fn coord_index(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * p as usize + (x % p) as usize)
}

/// The plus-model operator of `g ∈ P`.
pub fn plus_parabolic_operator(hg: &HeisenbergGroup, zeta_exponent: u64, g: &SpElement) -> Result<CycMatrix> {
    let space = hg.space();
    let (p, ell) = (hg.p(), space.ell());
    let chi = space.chi_p(g)?;
    let field = CycField::for_prime(p);
    let dim = (p as usize).pow(ell as u32);
    let gi = g.inverse();
    let mut m = CycMatrix::zeros(field, dim, dim);
    for ti in 0..dim {
        let t = basis_point(hg, ti);
        let mut w = vec![0; ell];
        w.extend_from_slice(&t);
        let uv = gi.apply(&w);
        let (u, v) = uv.split_at(ell);
        let phase = -((space.half() * dot(u, v, p)) as i64);
        m.set(ti, coord_index(v, p), zeta_value(field, p, zeta_exponent, phase).scale_int(chi));
    }
    Ok(m)
}

/// `(Fφ)(u) = Σ_t φ(t) ζ(t·u)` on functions of `W⁻`.
pub fn plus_fourier_operator(hg: &HeisenbergGroup, zeta_exponent: u64) -> CycMatrix {
    let p = hg.p();
    let field = CycField::for_prime(p);
    let dim = (p as usize).pow(hg.space().ell() as u32);
    CycMatrix::from_fn(field, dim, dim, |u, t| zeta_value(field, p, zeta_exponent, dot(&basis_point(hg, t), &basis_point(hg, u), p) as i64))
}

/// The candidates `{±1/g, ±i/g}`, raised to the power `ℓ`.
pub fn weyl_scalar_candidates(p: u64, ell: usize) -> Result<Vec<CycNumber>> {
    let g = gauss_sum(p)?;
    let field = g.field();
    let gi = g.inv()?;
    let i = CycNumber::imaginary_unit(field);
    Ok([gi.clone(), gi.neg(), i.mul(&gi), i.mul(&gi).neg()].iter().map(|c| c.pow(ell as u64)).collect())
}

/// Select the Weyl scalar by the relations `J² = τ̂₊(m(−1))` and `(J·τ̂₊(n(1)))³ = 1`.
pub fn select_weyl_scalar(hg: &HeisenbergGroup, zeta_exponent: u64) -> Result<CycNumber> {
    let space = hg.space();
    let f = plus_fourier_operator(hg, zeta_exponent);
    let minus_one = plus_parabolic_operator(hg, zeta_exponent, &space.m_element_scalar(-1)?)?;
    let n1 = plus_parabolic_operator(hg, zeta_exponent, &space.n_element_scalar(1)?)?;
    let passing: Vec<CycNumber> = weyl_scalar_candidates(hg.p(), space.ell())?
        .into_iter()
        .filter(|c| {
            let j = f.scale(c);
            let jn = j.mul(&n1);
            j.mul(&j) == minus_one && jn.mul(&jn).mul(&jn).is_identity()
        })
        .collect();
    match passing.as_slice() {
        [c] => Ok(c.clone()),
        _ => Err(Error::Construction(format!("{} Weyl scalar candidates satisfy the relations", passing.len()))),
    }
}

/// `s = p₁·j·p₂` for `s` with nonzero lower-left entry (`ℓ = 1`).
pub fn bruhat_factor(space: &SymplecticSpace, s: &SpElement) -> Result<(SpElement, SpElement)> {
    if space.ell() != 1 {
        return Err(Error::Guard("Bruhat factorization is implemented for ell = 1".into()));
    }
    let p = space.p();
    let m = &s.matrix;
    let (a, c, d) = (m.get(0, 0), m.get(1, 0), m.get(1, 1));
    let ci = mod_inv(c, p).ok_or_else(|| Error::InvalidArgument("lower-left entry is zero".into()))?;
    let p1 = space.n_element_scalar((a * ci % p) as i64)?;
    let p2 = space.element_from_rows(&[vec![-(c as i64), -(d as i64)], vec![0, -(ci as i64)]])?;
    if p1.compose(&space.weyl()).compose(&p2) != *s {
        return Err(Error::Construction("Bruhat factorization failed".into()));
    }
    Ok((p1, p2))
}

/// Generators of `H` used to pin intertwiners: `(e_i, 0)` and `(0, 1)`.
pub fn heisenberg_generators(hg: &HeisenbergGroup) -> Vec<usize> {
    let space = hg.space();
    let mut g: Vec<usize> = (0..space.dim()).map(|i| hg.make(&space.basis_vector(i), 0)).collect();
    g.push(hg.central(1));
    g
}

/// A nonzero `X` with `X·a(h) = b(h)·X` for the listed `h`, if the space of such is one-dimensional.
pub fn intertwiner(a: &MatrixRep, b: &MatrixRep, gens: &[usize]) -> Result<CycMatrix> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::Dimension("intertwiner between representations of different dimension".into()));
    }
    let field = a.field();
    let mut eq = CycMatrix::zeros(field, d * d * gens.len(), d * d);
    for (gi, &h) in gens.iter().enumerate() {
        let (ah, bh) = (a.image(h), b.image(h));
        for i in 0..d {
            for j in 0..d {
                let row = gi * d * d + i * d + j;
                for k in 0..d {
                    let x = eq.get(row, i * d + k).add(ah.get(k, j));
                    eq.set(row, i * d + k, x);
                    let y = eq.get(row, k * d + j).sub(bh.get(i, k));
                    eq.set(row, k * d + j, y);
                }
            }
        }
    }
    let null = eq.nullspace();
    if null.len() != 1 {
        return Err(Error::Construction(format!("intertwiner space has dimension {}", null.len())));
    }
    Ok(CycMatrix::from_fn(field, d, d, |i, k| null[0][i * d + k].clone()))
}

/// The exponent `k` with `τ(0,1) = ζ_p^k·1`.
pub fn central_exponent(hg: &HeisenbergGroup, tau: &MatrixRep) -> Result<u64> {
    let p = hg.p();
    let field = tau.field();
    let img = tau.image(hg.central(1));
    (1..p)
        .find(|&k| *img == CycMatrix::scalar(field, tau.dim(), &zeta_value(field, p, k, 1)))
        .ok_or_else(|| Error::InvalidArgument("central character is not a nontrivial scalar".into()))
}

fn plus_model_images(hg: &HeisenbergGroup, k: u64, group: &SpTable) -> Result<(CycNumber, Vec<CycMatrix>)> {
    let space = hg.space();
    let c = select_weyl_scalar(hg, k)?;
    let j = plus_fourier_operator(hg, k).scale(&c);
    let images = group
        .elements
        .par_iter()
        .map(|s| {
            if space.in_p(s) {
                plus_parabolic_operator(hg, k, s)
            } else {
                let (p1, p2) = bruhat_factor(space, s)?;
                Ok(plus_parabolic_operator(hg, k, &p1)?.mul(&j).mul(&plus_parabolic_operator(hg, k, &p2)?))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((c, images))
}

/// The Heisenberg–Weil lift of a Heisenberg representation `τ` of the
/// coordinate group (any model), through the special isomorphism `ν`.
pub fn weil_lift(hg: &HeisenbergGroup, tau: &MatrixRep, nu: &SpecialIso) -> Result<WeilLift> {
    let space = hg.space();
    if space.ell() != 1 {
        return Err(Error::Guard("the Weil lift is constructed for ell = 1".into()));
    }
    if tau.domain().len() != hg.order() {
        return Err(Error::InvalidArgument("tau must be a representation of all of H".into()));
    }
    let k = central_exponent(hg, tau)?;
    let group = SpTable::new(space.enumerate_sp_guarded(EnumerationGuard::default())?)?;
    let (c, plus_images) = plus_model_images(hg, k, &group)?;
    let plus = heisenberg_rep(hg, k, Model::Plus)?;
    let pulled = tau.precompose(|h| nu.apply_inverse(hg, h))?;
    let gens = heisenberg_generators(hg);
    let t = if gens.iter().all(|&h| plus.image(h) == pulled.image(h)) {
        CycMatrix::identity(tau.field(), tau.dim())
    } else {
        intertwiner(&plus, &pulled, &gens)?
    };
    let ti = t.inverse()?;
    let sp_images = if t.is_identity() { plus_images } else { plus_images.par_iter().map(|m| t.mul(m).mul(&ti)).collect() };
    Ok(WeilLift {
        base: tau.clone(),
        nu: nu.clone(),
        zeta_exponent: k,
        weyl_scalar: c,
        transport: t,
        group,
        p: hg.p(),
        ell: space.ell(),
        sp_images,
    })
}

/// The lift of a model of `τ` through the base special isomorphism.
pub fn standard_lift(hg: &HeisenbergGroup, zeta_exponent: u64, model: Model) -> Result<WeilLift> {
    weil_lift(hg, &heisenberg_rep(hg, zeta_exponent, model)?, &SpecialIso::base(hg.space()))
}

/// The lift for a representation of an abstract Heisenberg group identified
/// with the coordinate group through `ν` and with `Z ≅ F_p` through `ζ`.
pub fn abstract_lift(hg: &HeisenbergGroup, tau_abstract: &MatrixRep, nu: &SpecialIso, zeta_exponent: u64) -> Result<WeilLift> {
    if zeta_exponent.is_multiple_of(hg.p()) {
        return Err(Error::InvalidArgument("central character must be nontrivial".into()));
    }
    if central_exponent(hg, tau_abstract)? != zeta_exponent % hg.p() {
        return Err(Error::InvalidArgument("tau does not have the stated central character".into()));
    }
    weil_lift(hg, tau_abstract, nu)
}

impl WeilLift {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn field(&self) -> &'static CycField {
        self.base.field()
    }

    pub fn sp_elements(&self) -> &[SpElement] {
        &self.group.elements
    }

    pub fn sp_images(&self) -> &[CycMatrix] {
        &self.sp_images
    }

    pub fn image(&self, s: usize) -> &CycMatrix {
        &self.sp_images[s]
    }

    pub fn index_of(&self, s: &SpElement) -> Result<usize> {
        self.group.index_of(s).ok_or_else(|| Error::NotMember("not an element of Sp(W)".into()))
    }

    pub fn image_of(&self, s: &SpElement) -> Result<&CycMatrix> {
        Ok(&self.sp_images[self.index_of(s)?])
    }

    /// `s·_ν h = ν⁻¹(s·ν(h))`, where `s·(w,z) = (sw, z)`.
    pub fn act(&self, hg: &HeisenbergGroup, s: usize, h: usize) -> usize {
        let e = hg.element(self.nu.apply(hg, h));
        let moved = HeisenbergElement { w: self.group.elements[s].apply(&e.w), z: e.z };
        self.nu.apply_inverse(hg, hg.index_of(&moved))
    }

    /// The image `τ(h)ρ̂(s)` of the element `h·s` of the semidirect product,
    /// where `(h₁s₁)(h₂s₂) = (h₁·(s₁·h₂))(s₁s₂)`.
    pub fn semidirect_image(&self, s: usize, h: usize) -> CycMatrix {
        self.base.image(h).mul(&self.sp_images[s])
    }

    /// A copy with `s ↦ ψ(s)·ρ̂(s)`.
    pub fn twisted(&self, psi: impl Fn(usize) -> CycNumber) -> WeilLift {
        let mut out = self.clone();
        for (i, m) in out.sp_images.iter_mut().enumerate() {
            *m = m.scale(&psi(i));
        }
        out
    }

    /// The lift with `s ↦ ᵗρ̂(s⁻¹)` on the contragredient of `τ`.
    pub fn contragredient(&self, hg: &HeisenbergGroup) -> Result<WeilLift> {
        let mut out = self.clone();
        out.base = contragredient(hg, &self.base)?;
        out.zeta_exponent = (self.p - self.zeta_exponent) % self.p;
        out.sp_images = (0..self.group.order()).into_par_iter().map(|s| self.sp_images[self.group.inv(s)].transpose()).collect();
        Ok(out)
    }

    pub fn sp_character(&self) -> Vec<CycNumber> {
        self.sp_images.iter().map(CycMatrix::trace).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "ell": self.ell,
            "zeta": self.zeta_exponent,
            "nu": self.nu.offset,
            "conductor": self.field().conductor(),
            "weyl_scalar": self.weyl_scalar.to_json(),
            "basis": self.base.basis_labels,
            "sp_images": self.group.elements.iter().zip(&self.sp_images).map(|(s, m)| json!({
                "s": s.matrix.to_json(),
                "image": m.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Relations,
    Sampled,
}

impl std::str::FromStr for VerifyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(VerifyMode::Exhaustive),
            "relations" => Ok(VerifyMode::Relations),
            "sampled" => Ok(VerifyMode::Sampled),
            _ => Err(Error::InvalidArgument(format!("unknown verification mode {s}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomomorphismReport {
    pub mode: VerifyMode,
    pub pairs_checked: usize,
    /// First pair `(s, t)` with `ρ̂(st) ≠ ρ̂(s)ρ̂(t)`.
    pub failure: Option<(usize, usize)>,
    pub identity_ok: bool,
    /// First `(s, h)` with `ρ̂(s)τ(h)ρ̂(s)⁻¹ ≠ τ(s·h)`.
    pub intertwining_failure: Option<(usize, usize)>,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.identity_ok && self.intertwining_failure.is_none()
    }
}

/// Pairs `(s, x)` with `x` among the generators `j`, `m(prim)`, `n(1)`; passing
/// for all `s` proves the homomorphism property.
fn relation_pairs(lift: &WeilLift) -> Vec<(usize, usize)> {
    let space = SymplecticSpace::new(lift.p, lift.ell).expect("valid space");
    let gens: Vec<usize> = space.sp_generators().iter().filter_map(|g| lift.group.index_of(g)).collect();
    (0..lift.group.order()).flat_map(|s| gens.iter().map(move |&x| (s, x))).collect()
}

pub fn verify_homomorphism(hg: &HeisenbergGroup, lift: &WeilLift, mode: VerifyMode, samples: usize, seed: u64) -> Result<HomomorphismReport> {
    let n = lift.group.order();
    let pairs: Vec<(usize, usize)> = match mode {
        VerifyMode::Exhaustive => {
            let g = EnumerationGuard::default();
            if lift.ell != 1 || lift.p > g.max_p_ell1 {
                return Err(Error::Guard(format!("exhaustive verification requires ell = 1 and p <= {}", g.max_p_ell1)));
            }
            (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect()
        }
        VerifyMode::Relations => relation_pairs(lift),
        VerifyMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        }
    };
    let failure = pairs
        .par_iter()
        .find_first(|&&(s, t)| lift.sp_images[lift.group.mul(s, t)] != lift.sp_images[s].mul(&lift.sp_images[t]))
        .copied();
    Ok(HomomorphismReport {
        mode,
        pairs_checked: pairs.len(),
        failure,
        identity_ok: lift.sp_images[lift.group.identity()].is_identity(),
        intertwining_failure: intertwining_failure(hg, lift),
    })
}

/// Checks `ρ̂(s)τ(h) = τ(s·_ν h)ρ̂(s)` for all `s` and the generators of `H`.
pub fn intertwining_failure(hg: &HeisenbergGroup, lift: &WeilLift) -> Option<(usize, usize)> {
    let gens = heisenberg_generators(hg);
    let pairs: Vec<(usize, usize)> = (0..lift.group.order()).flat_map(|s| gens.iter().map(move |&h| (s, h))).collect();
    pairs
        .par_iter()
        .find_first(|&&(s, h)| {
            let m = &lift.sp_images[s];
            m.mul(lift.base.image(h)) != lift.base.image(lift.act(hg, s, h)).mul(m)
        })
        .copied()
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSignEntry {
    pub element: usize,
    pub trace: CycNumber,
    pub chi_m: i64,
    pub real: bool,
    pub sign: Option<i32>,
}

impl TraceSignEntry {
    pub fn ok(&self) -> bool {
        self.real && self.sign == Some(self.chi_m as i32)
    }
}

/// For every `m ∈ M`: the trace of `ρ̂(m)`, whether it is real, and its sign against `χ^M(m)`.
pub fn trace_sign_on_m(lift: &WeilLift) -> Result<Vec<TraceSignEntry>> {
    let space = SymplecticSpace::new(lift.p, lift.ell)?;
    let mut out = vec![];
    for (i, s) in lift.group.elements.iter().enumerate() {
        if space.in_m(s) {
            let trace = lift.sp_images[i].trace();
            out.push(TraceSignEntry {
                element: i,
                real: trace == trace.conj(),
                sign: trace.real_sign(),
                chi_m: space.chi_m(s)?,
                trace,
            });
        }
    }
    Ok(out)
}

/// `λ₊(φ) = φ(0)` in the plus model, carried to the lift's model: `λ₊ ∘ T⁻¹`.
pub fn lambda_plus(lift: &WeilLift) -> Result<Vec<CycNumber>> {
    let ti = lift.transport.inverse()?;
    Ok(ti.row(0).to_vec())
}

/// The subgroup `ν⁻¹(W⁺ × 0)` fixing `λ₊`.
pub fn plus_lagrangian_preimage(hg: &HeisenbergGroup, nu: &SpecialIso) -> Vec<usize> {
    let space = hg.space();
    let plus: Vec<Vec<u64>> = space.standard_polarization().plus;
    let mut out: Vec<usize> = hg.span(&plus).into_iter().map(|w| nu.apply_inverse(hg, w * hg.p() as usize)).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PActionReport {
    pub checked: usize,
    /// Elements `g ∈ P` for which `λ∘ρ̂(g) ≠ χ^P(g)·λ`.
    pub failures: Vec<usize>,
}

pub fn p_action_check(lift: &WeilLift, lambda: &[CycNumber]) -> Result<PActionReport> {
    if lambda.len() != lift.dim() {
        return Err(Error::Dimension("linear form of the wrong length".into()));
    }
    let space = SymplecticSpace::new(lift.p, lift.ell)?;
    let mut checked = 0;
    let mut failures = vec![];
    for (i, s) in lift.group.elements.iter().enumerate() {
        if !space.in_p(s) {
            continue;
        }
        checked += 1;
        let chi = space.chi_p(s)?;
        let moved = lift.sp_images[i].left_apply(lambda);
        if moved.iter().zip(lambda).any(|(a, b)| *a != b.scale_int(chi)) {
            failures.push(i);
        }
    }
    Ok(PActionReport { checked, failures })
}

/// `|S / [S,S]|`.
pub fn abelianization_order(group: &SpTable) -> usize {
    let all: Vec<usize> = (0..group.order()).collect();
    group.order() / commutator_subgroup(group, &all).len()
}

/// Characters `(s, h) ↦ tr ρ̂(s)τ(ν⁻¹h)` transported to `S ⋉ W♯`, indexed `s·|H| + h`.
pub fn transported_character(hg: &HeisenbergGroup, lift: &WeilLift) -> Vec<CycNumber> {
    let nh = hg.order();
    (0..lift.group.order() * nh)
        .into_par_iter()
        .map(|i| {
            let (s, h) = (i / nh, i % nh);
            lift.semidirect_image(s, lift.nu.apply_inverse(hg, h)).trace()
        })
        .collect()
}

/// `τ∘ν₁⁻¹(h) = ζ(⟨w, w₀₂ − w₀₁⟩)·τ∘ν₂⁻¹(h)` for all `h = (w,z)`.
pub fn special_iso_twist_holds(hg: &HeisenbergGroup, tau: &MatrixRep, k: u64, nu1: &SpecialIso, nu2: &SpecialIso) -> bool {
    let space = hg.space();
    let p = hg.p();
    let diff: Vec<u64> = nu2.offset.iter().zip(&nu1.offset).map(|(a, b)| (a + p - b) % p).collect();
    (0..hg.order()).all(|h| {
        let e = hg.element(h);
        let c = zeta_value(tau.field(), p, k, space.pairing(&e.w, &diff) as i64);
        *tau.image(nu1.apply_inverse(hg, h)) == tau.image(nu2.apply_inverse(hg, h)).scale(&c)
    })
}

/// The explicit SL(2,3) model: `α`, `β` and the lift in the minus model.
#[derive(Clone, Debug)]
pub struct Sl23Reference {
    pub alpha: MatrixRep,
    pub beta: MatrixRep,
    pub tauhat: WeilLift,
    /// Whether the displayed generator values, with the `β` matrix assigned to
    /// `j` itself, define a homomorphism.
    pub literal_table_consistent: bool,
}

/// `γ'(s) = j⁻¹ s j`: the matrix of `s` in the basis `(−e₂, e₁)`.
pub fn to_appendix_coordinates(space: &SymplecticSpace, s: &SpElement) -> SpElement {
    let j = space.weyl();
    j.inverse().compose(s).compose(&j)
}

pub fn from_appendix_coordinates(space: &SymplecticSpace, a: &SpElement) -> SpElement {
    let j = space.weyl();
    j.compose(a).compose(&j.inverse())
}

type AlphaBeta = HashMap<ModMatrix, (CycNumber, CycMatrix)>;

/// Generate `(α, β)` on appendix-coordinate matrices from the displayed
/// generator values; the `β` Weyl matrix is assigned to `weyl_target`.
/// Returns the table and whether every product was consistent.
fn sl23_closure(weyl_target: &ModMatrix) -> Result<(AlphaBeta, bool)> {
    let field = CycField::for_prime(3);
    let zeta = |v: i64| zeta_value(field, 3, 1, v);
    let g = gauss_sum(3)?;
    let gi = g.inv()?;
    let one = CycNumber::one(field);
    // i/√3 = −1/g(3)
    let w = gi.neg();
    let beta_weyl = CycMatrix::from_rows(field, vec![vec![w.clone(), w.scale_int(2)], vec![w.clone(), w.neg()]])?;
    let m = |rows: [[i64; 2]; 2]| ModMatrix::from_rows(3, &[rows[0].to_vec(), rows[1].to_vec()]);
    let mut gens: Vec<(ModMatrix, CycNumber, CycMatrix)> = vec![];
    gens.push((m([[2, 0], [0, 2]])?, one.clone(), CycMatrix::scalar(field, 2, &CycNumber::from_int(field, legendre(2, 3)))));
    for b in 1..3 {
        let d = CycMatrix::from_rows(field, vec![vec![one.clone(), CycNumber::zero(field)], vec![CycNumber::zero(field), zeta(-b)]])?;
        gens.push((m([[1, b], [0, 1]])?, zeta(-b), d));
    }
    gens.push((weyl_target.clone(), one.clone(), beta_weyl));
    let id = ModMatrix::identity(3, 2);
    let mut table: AlphaBeta = HashMap::new();
    table.insert(id.clone(), (one, CycMatrix::identity(field, 2)));
    let mut frontier = vec![id];
    let mut consistent = true;
    while let Some(x) = frontier.pop() {
        let (xa, xb) = table[&x].clone();
        for (gm, ga, gb) in &gens {
            let y = x.mul(gm);
            let val = (xa.mul(ga), xb.mul(gb));
            match table.get(&y) {
                Some(old) => consistent &= *old == val,
                None => {
                    table.insert(y.clone(), val);
                    frontier.push(y);
                }
            }
        }
    }
    Ok((table, consistent))
}

pub fn sl23_reference() -> Result<Sl23Reference> {
    let hg = HeisenbergGroup::standard(3, 1)?;
    let space = hg.space();
    let tauhat = standard_lift(&hg, 1, Model::Minus)?;
    let literal = sl23_closure(&space.weyl().matrix)?.1;
    let (table, consistent) = sl23_closure(&space.weyl().inverse().matrix)?;
    if !consistent || table.len() != 24 {
        return Err(Error::Construction("alpha and beta do not close up on SL(2,3)".into()));
    }
    let field = tauhat.field();
    let values: Vec<&(CycNumber, CycMatrix)> = tauhat.group.elements.iter().map(|s| &table[&to_appendix_coordinates(space, s).matrix]).collect();
    let alpha = MatrixRep::on_group(field, 1, values.iter().map(|(a, _)| CycMatrix::scalar(field, 1, a)).collect(), vec!["xi1".into()])?;
    let beta = MatrixRep::on_group(field, 2, values.iter().map(|(_, b)| b.clone()).collect(), vec!["xi2".into(), "xi3".into()])?;
    Ok(Sl23Reference { alpha, beta, tauhat, literal_table_consistent: literal })
}

impl Sl23Reference {
    /// Elements where `tr τ̂ ≠ tr α + tr β`.
    pub fn character_mismatches(&self) -> Vec<usize> {
        (0..self.tauhat.group.order())
            .filter(|&s| self.tauhat.image(s).trace() != self.alpha.trace(s).add(&self.beta.trace(s)))
            .collect()
    }

    /// `τ̂(s)` on even functions in the basis `ξ₂ = δ₀`, `ξ₃ = δ₁ + δ₋₁`.
    pub fn even_block(&self, s: usize) -> CycMatrix {
        let m = self.tauhat.image(s);
        let field = m.field();
        let xi2 = vec![CycNumber::one(field), CycNumber::zero(field), CycNumber::zero(field)];
        let xi3 = vec![CycNumber::zero(field), CycNumber::one(field), CycNumber::one(field)];
        let cols: Vec<Vec<CycNumber>> = [xi2, xi3].iter().map(|v| (0..3).map(|r| (0..3).fold(CycNumber::zero(field), |acc, c| acc.add(&m.get(r, c).mul(&v[c])))).collect()).collect();
        CycMatrix::from_fn(field, 2, 2, |r, c| cols[c][r].clone())
    }

    /// Whether `τ̂(s)ξ₁ = α(s)ξ₁` with `ξ₁(t) = t`.
    pub fn odd_line_ok(&self, s: usize) -> bool {
        let m = self.tauhat.image(s);
        let field = m.field();
        let xi1 = [0i64, 1, -1].map(|v| CycNumber::from_int(field, v));
        let a = self.alpha.image(s).get(0, 0);
        (0..3).all(|r| (0..3).fold(CycNumber::zero(field), |acc, c| acc.add(&m.get(r, c).mul(&xi1[c]))) == xi1[r].mul(a))
    }

    /// `f̂(t) = (1/√3) Σ_s f(s) ζ(−st)`, realized with `1/√3 = i/g(3)`.
    pub fn fourier_transform(&self) -> Result<CycMatrix> {
        let field = self.tauhat.field();
        let c = CycNumber::imaginary_unit(field).mul(&gauss_sum(3)?.inv()?);
        Ok(CycMatrix::from_fn(field, 3, 3, |t, s| zeta_value(field, 3, 1, -((s * t) as i64)).mul(&c)))
    }

    /// Index of the element whose appendix-coordinate matrix has the given rows.
    pub fn appendix_element(&self, rows: &[Vec<i64>]) -> Result<usize> {
        let space = SymplecticSpace::new(3, 1)?;
        let a = space.element_from_rows(rows)?;
        self.tauhat.index_of(&from_appendix_coordinates(&space, &a))
    }
}

/// `ψ(s) = α(s)^e` applied to a lift at `p = 3`, for `e = 0, 1, 2`.
pub fn sl23_extensions(reference: &Sl23Reference) -> Vec<WeilLift> {
    (0..3u64).map(|e| reference.tauhat.twisted(|s| reference.alpha.image(s).get(0, 0).pow(e))).collect()
}
