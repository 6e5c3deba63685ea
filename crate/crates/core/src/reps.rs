//! Matrix representations over `Q(ζ_N)`: the two induced models of the
//! Heisenberg representation, contragredients, invariant forms and Hom-space
//! dimensions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subset};
use crate::heisenberg::HeisenbergGroup;
use crate::linalg::{same_span, CycMatrix};
use crate::modular::modulo;
use crate::scalar::{CycField, CycNumber};

/// A representation of a subset (normally a subgroup) of an ambient finite
/// group, indexed by ambient element indices.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    field: &'static CycField,
    dim: usize,
    domain: Subset,
    pos: Vec<u32>,
    images: Vec<CycMatrix>,
    pub basis_labels: Vec<String>,
}

const ABSENT: u32 = u32::MAX;

impl MatrixRep {
    pub fn new(field: &'static CycField, dim: usize, ambient_order: usize, domain: Subset, images: Vec<CycMatrix>, basis_labels: Vec<String>) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::Dimension("one image per domain element is required".into()));
        }
        if images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Dimension("image of the wrong size".into()));
        }
        let mut pos = vec![ABSENT; ambient_order];
        for (i, &g) in domain.iter().enumerate() {
            if g >= ambient_order || pos[g] != ABSENT {
                return Err(Error::InvalidArgument("domain must list distinct ambient elements".into()));
            }
            pos[g] = i as u32;
        }
        let basis_labels = if basis_labels.len() == dim { basis_labels } else { (0..dim).map(|i| format!("e{i}")).collect() };
        Ok(MatrixRep { field, dim, domain, pos, images, basis_labels })
    }

    /// A representation of the whole group, `images[g]` for every index `g`.
    pub fn on_group(field: &'static CycField, dim: usize, images: Vec<CycMatrix>, basis_labels: Vec<String>) -> Result<Self> {
        let n = images.len();
        Self::new(field, dim, n, (0..n).collect(), images, basis_labels)
    }

    pub fn from_fn<G: FiniteGroup + ?Sized>(g: &G, field: &'static CycField, dim: usize, domain: Subset, f: impl Fn(usize) -> CycMatrix + Sync) -> Result<Self> {
        let images: Vec<CycMatrix> = domain.par_iter().map(|&x| f(x)).collect();
        Self::new(field, dim, g.order(), domain, images, vec![])
    }

    /// One-dimensional representation from a character.
    pub fn character<G: FiniteGroup + ?Sized>(g: &G, field: &'static CycField, domain: Subset, chi: impl Fn(usize) -> CycNumber + Sync) -> Result<Self> {
        Self::from_fn(g, field, 1, domain, |x| CycMatrix::scalar(field, 1, &chi(x)))
    }

    pub fn trivial<G: FiniteGroup + ?Sized>(g: &G, field: &'static CycField, domain: Subset) -> Result<Self> {
        Self::character(g, field, domain, |_| CycNumber::one(field))
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn ambient_order(&self) -> usize {
        self.pos.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.pos.get(g).is_some_and(|&p| p != ABSENT)
    }

    pub fn image(&self, g: usize) -> &CycMatrix {
        let p = self.pos[g];
        assert!(p != ABSENT, "element {g} is outside the domain");
        &self.images[p as usize]
    }

    pub fn images(&self) -> &[CycMatrix] {
        &self.images
    }

    pub fn trace(&self, g: usize) -> CycNumber {
        self.image(g).trace()
    }

    pub fn character_values(&self) -> Vec<CycNumber> {
        self.images.par_iter().map(CycMatrix::trace).collect()
    }

    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        if subset.iter().any(|&g| !self.contains(g)) {
            return Err(Error::InvalidArgument("restriction outside the domain".into()));
        }
        let imgs = subset.iter().map(|&g| self.image(g).clone()).collect();
        Self::new(self.field, self.dim, self.ambient_order(), subset.to_vec(), imgs, self.basis_labels.clone())
    }

    /// `g ↦ ρ(f(g))`, e.g. `τ∘α` for an automorphism `α` given on indices.
    pub fn precompose(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        let imgs = self.domain.iter().map(|&g| self.image(f(g)).clone()).collect();
        Self::new(self.field, self.dim, self.ambient_order(), self.domain.clone(), imgs, self.basis_labels.clone())
    }

    /// `g ↦ T ρ(g) T⁻¹`.
    pub fn conjugate_by(&self, t: &CycMatrix) -> Result<Self> {
        let ti = t.inverse()?;
        let imgs = self.images.par_iter().map(|m| t.mul(m).mul(&ti)).collect();
        Self::new(self.field, self.dim, self.ambient_order(), self.domain.clone(), imgs, self.basis_labels.clone())
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if self.domain != o.domain {
            return Err(Error::InvalidArgument("direct sum needs equal domains".into()));
        }
        let imgs = self.images.iter().zip(&o.images).map(|(a, b)| a.direct_sum(b)).collect();
        let mut labels = self.basis_labels.clone();
        labels.extend(o.basis_labels.iter().cloned());
        Self::new(self.field, self.dim + o.dim, self.ambient_order(), self.domain.clone(), imgs, labels)
    }

    /// Tensor with a one-dimensional character.
    pub fn twist(&self, chi: impl Fn(usize) -> CycNumber) -> Result<Self> {
        let imgs = self.domain.iter().zip(&self.images).map(|(&g, m)| m.scale(&chi(g))).collect();
        Self::new(self.field, self.dim, self.ambient_order(), self.domain.clone(), imgs, self.basis_labels.clone())
    }

    /// First pair `(a, b)` in the domain with `ρ(ab) ≠ ρ(a)ρ(b)`, over all
    /// pairs, plus the identity check.
    pub fn homomorphism_failure<G: FiniteGroup + ?Sized>(&self, g: &G) -> Option<(usize, usize)> {
        if !self.image(g.identity()).is_identity() {
            return Some((g.identity(), g.identity()));
        }
        let dom = &self.domain;
        dom.par_iter()
            .find_map_first(|&a| {
                dom.iter().find_map(|&b| {
                    let ab = g.mul(a, b);
                    if !self.contains(ab) || self.image(ab) != &self.image(a).mul(self.image(b)) {
                        Some((a, b))
                    } else {
                        None
                    }
                })
            })
    }

    pub fn to_json(&self, label: impl Fn(usize) -> Value) -> Value {
        Value::Array(
            self.domain
                .iter()
                .map(|&g| json!({ "element": label(g), "matrix": self.image(g).to_json() }))
                .collect(),
        )
    }
}

/// `g ↦ ᵗρ(g⁻¹)`.
pub fn contragredient<G: FiniteGroup + ?Sized>(g: &G, rep: &MatrixRep) -> Result<MatrixRep> {
    let imgs: Vec<CycMatrix> = rep.domain.par_iter().map(|&x| rep.image(g.inv(x)).transpose()).collect();
    MatrixRep::new(rep.field, rep.dim, rep.ambient_order(), rep.domain.clone(), imgs, rep.basis_labels.clone())
}

/// The inducing subgroup of a Heisenberg model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Induced from `W⁺ × F_p`; functions on `W⁻`.
    Plus,
    /// Induced from `W⁻ × F_p`; functions on `W⁺`.
    Minus,
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(Model::Plus),
            "minus" => Ok(Model::Minus),
            _ => Err(Error::InvalidArgument(format!("unknown model {s}"))),
        }
    }
}

fn split_xy(w: &[u64], ell: usize) -> (&[u64], &[u64]) {
    (&w[..ell], &w[ell..])
}

fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).map(|(x, y)| x * y % p).sum::<u64>() % p
}

fn coords(idx: usize, ell: usize, p: u64) -> Vec<u64> {
    let mut i = idx;
    (0..ell)
        .map(|_| {
            let x = i % p as usize;
            i /= p as usize;
            x as u64
        })
        .collect()
}

fn coord_index(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * p as usize + (x % p) as usize)
}

/// `ζ(v) = ζ_p^{k·v}` in the run field.
pub fn zeta_value(field: &'static CycField, p: u64, k: u64, v: i64) -> CycNumber {
    CycNumber::root_of_order(field, p as u32, modulo(k as i64 * v, p) as i64)
}

/// The Heisenberg representation with central character `ζ(z) = ζ_p^{k z}`.
///
/// Minus model: `(τ((x,y),z)f)(t) = ζ(z + t·y + ½x·y) f(t+x)`, `t ∈ W⁺`.
/// Plus model: `(τ((x,y),z)φ)(t) = ζ(z − t·x − ½x·y) φ(t+y)`, `t ∈ W⁻`.
pub fn heisenberg_rep(hg: &HeisenbergGroup, zeta_exponent: u64, model: Model) -> Result<MatrixRep> {
    let p = hg.p();
    if zeta_exponent.is_multiple_of(p) {
        return Err(Error::InvalidArgument("central character must be nontrivial".into()));
    }
    let k = zeta_exponent % p;
    let ell = hg.space().ell();
    let half = hg.space().half();
    let dim = (p as usize).pow(ell as u32);
    let field = CycField::for_prime(p);
    let rep = MatrixRep::from_fn(hg, field, dim, (0..hg.order()).collect(), |h| {
        let e = hg.element(h);
        let (x, y) = split_xy(&e.w, ell);
        let xy = dot(x, y, p);
        let mut m = CycMatrix::zeros(field, dim, dim);
        for ti in 0..dim {
            let t = coords(ti, ell, p);
            let (phase, shift) = match model {
                Model::Minus => ((e.z + dot(&t, y, p) + half * xy) as i64, x),
                Model::Plus => (e.z as i64 - dot(&t, x, p) as i64 - (half * xy) as i64, y),
            };
            let target: Vec<u64> = t.iter().zip(shift).map(|(a, b)| (a + b) % p).collect();
            m.set(ti, coord_index(&target, p), zeta_value(field, p, k, phase));
        }
        m
    })?;
    let side = if model == Model::Minus { "W+" } else { "W-" };
    let labels = (0..dim).map(|i| format!("{side}:{:?}", coords(i, ell, p))).collect();
    MatrixRep::new(field, dim, hg.order(), rep.domain, rep.images, labels)
}

/// Coordinates `t` of the transversal point labelling basis index `i`.
pub fn basis_point(hg: &HeisenbergGroup, i: usize) -> Vec<u64> {
    coords(i, hg.space().ell(), hg.p())
}

/// `⟨f₁,f₂⟩ = Σ_t f₁(t) f₂(t)`; invariant for the pair of `ζ` and `ζ⁻¹` models.
pub fn invariant_pairing(f1: &[CycNumber], f2: &[CycNumber]) -> Result<CycNumber> {
    if f1.len() != f2.len() || f1.is_empty() {
        return Err(Error::Dimension("pairing needs vectors of equal positive length".into()));
    }
    let mut acc = CycNumber::zero(f1[0].field());
    for (a, b) in f1.iter().zip(f2) {
        acc = acc.add(&a.mul(b));
    }
    Ok(acc)
}

/// `dim {λ : λ∘ρ(k) = χ(k)λ for k ∈ K}`, as the rank of
/// `(1/|K|) Σ_k χ(k)⁻¹ ᵗρ(k)`.
pub fn hom_dim(rep: &MatrixRep, k: &[usize], chi: impl Fn(usize) -> CycNumber + Sync) -> Result<usize> {
    Ok(projector(rep, k, chi)?.rank())
}

/// The averaging projector onto `Hom_K(ρ, χ)` acting on row forms (transposed).
pub fn projector(rep: &MatrixRep, k: &[usize], chi: impl Fn(usize) -> CycNumber + Sync) -> Result<CycMatrix> {
    if k.iter().any(|&x| !rep.contains(x)) {
        return Err(Error::InvalidArgument("subgroup outside the representation's domain".into()));
    }
    let field = rep.field;
    let sum = k
        .par_iter()
        .map(|&x| {
            let c = chi(x).inv().expect("character values are units");
            rep.image(x).transpose().scale(&c)
        })
        .reduce(|| CycMatrix::zeros(field, rep.dim, rep.dim), |a, b| a.add(&b));
    Ok(sum.scale(&CycNumber::from_ratio(field, 1, k.len() as i64)))
}

/// Basis of `{λ : λρ(k) = λ, k ∈ K}` from the stacked equations `λ(ρ(k) − 1) = 0`.
pub fn invariant_forms_nullspace(rep: &MatrixRep, k: &[usize]) -> Vec<Vec<CycNumber>> {
    let d = rep.dim;
    let id = CycMatrix::identity(rep.field, d);
    let blocks: Vec<CycMatrix> = k.iter().map(|&x| rep.image(x).sub(&id)).collect();
    let stacked = CycMatrix::from_fn(rep.field, d, d * blocks.len().max(1), |r, c| {
        if blocks.is_empty() {
            CycNumber::zero(rep.field)
        } else {
            blocks[c / d].get(r, c % d).clone()
        }
    });
    stacked.left_nullspace()
}

/// Invariant forms of a Heisenberg model under `K`: the double-coset forms
/// `λ_x(φ) = Σ_{k∈K} φ(xk)` and, independently, the nullspace basis.
#[derive(Clone, Debug)]
pub struct FixedForms {
    pub double_coset_forms: Vec<Vec<CycNumber>>,
    pub representatives: Vec<usize>,
    pub nullspace_basis: Vec<Vec<CycNumber>>,
}

impl FixedForms {
    pub fn dimension(&self) -> usize {
        self.nullspace_basis.len()
    }

    pub fn agree(&self, field: &'static CycField, dim: usize) -> bool {
        let nonzero: Vec<Vec<CycNumber>> = self.double_coset_forms.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
        same_span(field, &nonzero, &self.nullspace_basis, dim)
    }
}

/// Position of `h` in a Heisenberg model: `h = a·(t,0)` with `a` in the inducing
/// subgroup; returns `(basis index of t, central phase of a)`.
fn model_decompose(hg: &HeisenbergGroup, model: Model, h: usize) -> (usize, i64) {
    let p = hg.p();
    let ell = hg.space().ell();
    let half = hg.space().half();
    let e = hg.element(h);
    let (x, y) = split_xy(&e.w, ell);
    let xy = dot(x, y, p);
    match model {
        Model::Minus => (coord_index(x, p), (e.z + half * xy) as i64),
        Model::Plus => (coord_index(y, p), e.z as i64 - (half * xy) as i64),
    }
}

fn in_inducing_isotropic(hg: &HeisenbergGroup, model: Model, h: usize) -> bool {
    let ell = hg.space().ell();
    let e = hg.element(h);
    let (x, y) = split_xy(&e.w, ell);
    match model {
        Model::Minus => x.iter().all(|&v| v == 0),
        Model::Plus => y.iter().all(|&v| v == 0),
    }
}

pub fn fixed_forms(hg: &HeisenbergGroup, rep: &MatrixRep, zeta_exponent: u64, model: Model, k: &[usize]) -> Result<FixedForms> {
    let p = hg.p();
    let field = rep.field;
    let n = hg.order();
    let mut label = vec![usize::MAX; n];
    let mut reps = vec![];
    // inducing subgroup A = W∓ × F_p
    let a_sub: Vec<usize> = (0..n).filter(|&h| in_inducing_isotropic(hg, model, h)).collect();
    for x in 0..n {
        if label[x] != usize::MAX {
            continue;
        }
        reps.push(x);
        for &a in &a_sub {
            let ax = hg.mul(a, x);
            for &kk in k {
                label[hg.mul(ax, kk)] = x;
            }
        }
    }
    let mut forms = vec![];
    let mut kept = vec![];
    for &x in &reps {
        let xi = hg.inv(x);
        let ok = k.iter().all(|&kk| {
            let c = hg.mul(hg.mul(x, kk), xi);
            !in_inducing_isotropic(hg, model, c) || hg.split(c).1 == 0
        });
        if !ok {
            continue;
        }
        let mut lam = vec![CycNumber::zero(field); rep.dim()];
        for &kk in k {
            let (t, phase) = model_decompose(hg, model, hg.mul(x, kk));
            lam[t] = lam[t].add(&zeta_value(field, p, zeta_exponent, phase));
        }
        forms.push(lam);
        kept.push(x);
    }
    Ok(FixedForms { double_coset_forms: forms, representatives: kept, nullspace_basis: invariant_forms_nullspace(rep, k) })
}

/// Characters are equal on every domain element.
pub fn rep_equivalent(r1: &MatrixRep, r2: &MatrixRep) -> Result<bool> {
    if r1.domain != r2.domain {
        return Err(Error::InvalidArgument("representations on different groups".into()));
    }
    Ok(r1.domain.par_iter().all(|&g| r1.trace(g) == r2.trace(g)))
}

/// `(1/|G|) Σ χ₁(g) conj(χ₂(g))` over the common domain.
pub fn character_inner_product(r1: &MatrixRep, r2: &MatrixRep) -> Result<CycNumber> {
    if r1.domain != r2.domain {
        return Err(Error::InvalidArgument("representations on different groups".into()));
    }
    let field = r1.field;
    let sum = r1
        .domain
        .par_iter()
        .map(|&g| r1.trace(g).mul(&r2.trace(g).conj()))
        .reduce(|| CycNumber::zero(field), |a, b| a.add(&b));
    Ok(sum.mul(&CycNumber::from_ratio(field, 1, r1.domain.len() as i64)))
}

/// The `p^{2ℓ}` characters inflated from `W` followed by the `p − 1`
/// Heisenberg representations (minus model).
pub fn irreducibles_of_h(hg: &HeisenbergGroup) -> Result<Vec<MatrixRep>> {
    if hg.order() > 3200 {
        return Err(Error::Guard("irreducible enumeration limited to |H| <= 3200".into()));
    }
    let p = hg.p();
    let field = CycField::for_prime(p);
    let space = hg.space();
    let mut out = vec![];
    for v in space.all_vectors() {
        out.push(MatrixRep::character(hg, field, (0..hg.order()).collect(), |h| {
            let e = hg.element(h);
            zeta_value(field, p, 1, space.pairing(&e.w, &v) as i64)
        })?);
    }
    for k in 1..p {
        out.push(heisenberg_rep(hg, k, Model::Minus)?);
    }
    Ok(out)
}

pub fn subset_json(hg: &HeisenbergGroup, set: &[usize]) -> Value {
    hg.subset_to_json(set)
}
