//! The Heisenberg group `W ⊠ F_p` with product
//! `(w₁,z₁)(w₂,z₂) = (w₁+w₂, z₁+z₂+½⟨w₁,w₂⟩)`, its automorphisms, special
//! isomorphisms and polarizations.
//!
//! Elements are indexed by `z + p·index(w)`, so the identity has index 0.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{is_subgroup, FiniteGroup, Subset};
use crate::modular::{modulo, ModMatrix};
use crate::symplectic::{Polarization, SpElement, SymplecticSpace};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub w: Vec<u64>,
    pub z: u64,
}

impl HeisenbergElement {
    pub fn to_json(&self) -> Value {
        json!({ "w": self.w, "z": self.z })
    }
}

/// Largest `p^{2ℓ}` for which the addition and pairing tables are built.
const MAX_VECTORS: usize = 4096;

#[derive(Clone, Debug)]
pub struct HeisenbergGroup {
    space: SymplecticSpace,
    nvec: usize,
    add: Vec<u32>,
    pair: Vec<u16>,
    neg: Vec<u32>,
}

impl HeisenbergGroup {
    pub fn new(space: SymplecticSpace) -> Result<Self> {
        let nvec = space.vector_count();
        if nvec > MAX_VECTORS {
            return Err(Error::Guard(format!("p^(2l) = {nvec} exceeds {MAX_VECTORS}")));
        }
        let vecs = space.all_vectors();
        let mut add = vec![0u32; nvec * nvec];
        let mut pair = vec![0u16; nvec * nvec];
        for (i, a) in vecs.iter().enumerate() {
            for (j, b) in vecs.iter().enumerate() {
                add[i * nvec + j] = space.vector_index(&space.add_vec(a, b)) as u32;
                pair[i * nvec + j] = space.pairing(a, b) as u16;
            }
        }
        let neg = vecs.iter().map(|a| space.vector_index(&space.neg_vec(a)) as u32).collect();
        Ok(HeisenbergGroup { space, nvec, add, pair, neg })
    }

    pub fn standard(p: u64, ell: usize) -> Result<Self> {
        Self::new(SymplecticSpace::new(p, ell)?)
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn p(&self) -> u64 {
        self.space.p()
    }

    pub fn vector_count(&self) -> usize {
        self.nvec
    }

    pub fn index_of(&self, h: &HeisenbergElement) -> usize {
        (h.z % self.p()) as usize + self.p() as usize * self.space.vector_index(&h.w)
    }

    pub fn element(&self, idx: usize) -> HeisenbergElement {
        let p = self.p() as usize;
        HeisenbergElement { w: self.space.vector_from_index(idx / p), z: (idx % p) as u64 }
    }

    pub fn make(&self, w: &[u64], z: i64) -> usize {
        modulo(z, self.p()) as usize + self.p() as usize * self.space.vector_index(w)
    }

    pub fn central(&self, z: i64) -> usize {
        modulo(z, self.p()) as usize
    }

    /// Split an index into `(index(w), z)`.
    pub fn split(&self, idx: usize) -> (usize, u64) {
        let p = self.p() as usize;
        (idx / p, (idx % p) as u64)
    }

    pub fn vec_pairing(&self, a: usize, b: usize) -> u64 {
        self.pair[a * self.nvec + b] as u64
    }

    pub fn vec_add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.nvec + b] as usize
    }

    pub fn vec_neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn multiply(&self, a: &HeisenbergElement, b: &HeisenbergElement) -> HeisenbergElement {
        self.element(self.mul(self.index_of(a), self.index_of(b)))
    }

    /// `[h₁,h₂] = ⟨w₁,w₂⟩`.
    pub fn commutator(&self, a: usize, b: usize) -> u64 {
        self.vec_pairing(a / self.p() as usize, b / self.p() as usize)
    }

    pub fn center(&self) -> Subset {
        (0..self.p() as usize).collect()
    }

    /// `w`-parts of a subset, as vector indices (with repetition removed).
    pub fn image_in_w(&self, set: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = set.iter().map(|&h| self.split(h).0).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `U × {0}` for a subspace `U` given by a basis; a subgroup when `U` is isotropic.
    pub fn lift_subspace(&self, basis: &[Vec<u64>]) -> Subset {
        let span = self.span(basis);
        let mut out: Vec<usize> = span.iter().map(|&v| v * self.p() as usize).collect();
        out.sort_unstable();
        out
    }

    /// `U × F_p`.
    pub fn lift_subspace_with_center(&self, basis: &[Vec<u64>]) -> Subset {
        let p = self.p() as usize;
        let mut out: Vec<usize> = self.span(basis).iter().flat_map(|&v| (0..p).map(move |z| v * p + z)).collect();
        out.sort_unstable();
        out
    }

    /// Vector indices of the span of `basis`.
    pub fn span(&self, basis: &[Vec<u64>]) -> Vec<usize> {
        let mut acc = vec![0usize];
        for b in basis {
            let bi = self.space.vector_index(b);
            let mut multiples = vec![0usize];
            for _ in 1..self.p() {
                let last = *multiples.last().expect("nonempty");
                multiples.push(self.vec_add(last, bi));
            }
            let mut next: Vec<usize> = acc.iter().flat_map(|&a| multiples.iter().map(move |&m| (a, m))).map(|(a, m)| self.vec_add(a, m)).collect();
            next.sort_unstable();
            next.dedup();
            acc = next;
        }
        acc
    }

    pub fn subset_to_json(&self, set: &[usize]) -> Value {
        Value::Array(set.iter().map(|&h| self.element(h).to_json()).collect())
    }
}

impl FiniteGroup for HeisenbergGroup {
    fn order(&self) -> usize {
        self.nvec * self.p() as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.p() as usize;
        let (wa, za) = (a / p, a % p);
        let (wb, zb) = (b / p, b % p);
        let half = self.space.half() as usize;
        let z = (za + zb + half * self.pair[wa * self.nvec + wb] as usize) % p;
        z + p * self.add[wa * self.nvec + wb] as usize
    }

    fn inv(&self, a: usize) -> usize {
        let p = self.p() as usize;
        let (w, z) = (a / p, a % p);
        (p - z) % p + p * self.neg[w] as usize
    }
}

/// A special isomorphism `ν(w,z) = (w, z + ⟨w,w₀⟩)`, stored by its offset `w₀`
/// relative to the base isomorphism `μ₀(w,z) = z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpecialIso {
    pub offset: Vec<u64>,
}

impl SpecialIso {
    pub fn base(space: &SymplecticSpace) -> Self {
        SpecialIso { offset: vec![0; space.dim()] }
    }

    pub fn all(space: &SymplecticSpace) -> Vec<SpecialIso> {
        space.all_vectors().into_iter().map(|offset| SpecialIso { offset }).collect()
    }

    /// `μ(h)`.
    pub fn mu(&self, hg: &HeisenbergGroup, h: usize) -> u64 {
        let e = hg.element(h);
        (e.z + hg.space().pairing(&e.w, &self.offset)) % hg.p()
    }

    /// `ν(h)`, as an index of the same coordinate group `W ⊠ F_p`.
    pub fn apply(&self, hg: &HeisenbergGroup, h: usize) -> usize {
        let (w, _) = hg.split(h);
        w * hg.p() as usize + self.mu(hg, h) as usize
    }

    pub fn apply_inverse(&self, hg: &HeisenbergGroup, h: usize) -> usize {
        let e = hg.element(h);
        let z = modulo(e.z as i64 - hg.space().pairing(&e.w, &self.offset) as i64, hg.p());
        hg.index_of(&HeisenbergElement { w: e.w, z })
    }

    /// `ν⁻¹(W × {0})`.
    pub fn preimage_of_w(&self, hg: &HeisenbergGroup) -> Subset {
        let mut out: Vec<usize> = (0..hg.vector_count()).map(|w| self.apply_inverse(hg, w * hg.p() as usize)).collect();
        out.sort_unstable();
        out
    }

    /// The defining properties of a special isomorphism, checked on all pairs.
    pub fn satisfies_definition(&self, hg: &HeisenbergGroup) -> bool {
        satisfies_special_iso_definition(hg, &|h| self.mu(hg, h), &(0..hg.order()).collect::<Vec<_>>())
    }
}

/// `μ(z) = z` on the center and `μ(h₁h₂) = μ(h₁)+μ(h₂)+½[h₁,h₂]` for `h₁,h₂` in `domain`.
pub fn satisfies_special_iso_definition(hg: &HeisenbergGroup, mu: &dyn Fn(usize) -> u64, domain: &[usize]) -> bool {
    let p = hg.p();
    let half = hg.space().half();
    hg.center().iter().all(|&z| mu(z) == z as u64)
        && domain.iter().all(|&a| {
            domain.iter().all(|&b| mu(hg.mul(a, b)) == (mu(a) + mu(b) + half * hg.commutator(a, b)) % p)
        })
}

/// Count functions `μ: H → F_p` with the special-isomorphism property by
/// searching all `f: W → F_p` with `μ(w,z) = z + f(w)`.
pub fn count_special_isos_brute_force(hg: &HeisenbergGroup) -> Result<usize> {
    let nvec = hg.vector_count();
    let p = hg.p() as usize;
    let total = (p as f64).powi(nvec as i32);
    if total > 1e6 {
        return Err(Error::Guard("brute-force search over W -> F_p too large".into()));
    }
    let all: Vec<usize> = (0..hg.order()).collect();
    let mut count = 0;
    let mut f = vec![0usize; nvec];
    loop {
        let mu = |h: usize| -> u64 {
            let (w, z) = hg.split(h);
            ((z as usize + f[w]) % p) as u64
        };
        if satisfies_special_iso_definition(hg, &mu, &all) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == nvec {
                return Ok(count);
            }
            f[i] += 1;
            if f[i] < p {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// Solve `⟨w, w₀⟩ = c_i` for `(w_i, c_i)` spanning `W`, returning the unique `w₀`.
fn solve_offset(space: &SymplecticSpace, conds: &[(Vec<u64>, u64)]) -> Result<Vec<u64>> {
    let n = space.dim();
    let p = space.p();
    // ⟨w, w₀⟩ = ᵗw J w₀: rows ᵗw J, augmented by c.
    let aug = ModMatrix::from_fn(p, conds.len(), n + 1, |r, c| {
        if c < n {
            let jw = space.form().transpose().apply(&conds[r].0);
            jw[c] as i64
        } else {
            conds[r].1 as i64
        }
    });
    let (red, pivots) = aug.rref_prime();
    if pivots.len() != n || pivots.contains(&n) {
        return Err(Error::Construction("offset is not uniquely determined".into()));
    }
    Ok((0..n).map(|i| red.get(i, n)).collect())
}

/// For an abelian `H⁺` with `H⁺ ∩ Z = 1` and maximal isotropic image `W₀`,
/// the `w₀` with `(w₀,0)⁻¹(w,0)(w₀,0) = (w, μ(w))` for every `(w, μ(w)) ∈ H⁺`,
/// i.e. `⟨w, w₀⟩ = μ(w)` on `W₀`.
pub fn hplus_conjugator(hg: &HeisenbergGroup, hplus: &[usize]) -> Result<Vec<u64>> {
    let space = hg.space();
    let p = hg.p() as usize;
    let n = space.dim();
    let pl = p.pow(space.ell() as u32);
    if !is_subgroup(hg, hplus) || hplus.len() != pl || hplus.iter().any(|&h| h != 0 && h < p) {
        return Err(Error::InvalidArgument("H+ must be a subgroup of order p^l meeting Z trivially".into()));
    }
    let basis: Vec<Vec<u64>> = hg.image_in_w(hplus).iter().map(|&w| space.vector_from_index(w)).collect();
    if !space.is_totally_isotropic(&basis) {
        return Err(Error::InvalidArgument("image of H+ is not isotropic".into()));
    }
    let mu: std::collections::HashMap<usize, u64> = hplus.iter().map(|&h| hg.split(h)).collect();
    let gens = independent(space, &basis);
    let aug = ModMatrix::from_fn(hg.p(), gens.len(), n + 1, |r, c| {
        if c < n {
            space.form().transpose().apply(&gens[r])[c] as i64
        } else {
            mu[&space.vector_index(&gens[r])] as i64
        }
    });
    let (red, pivots) = aug.rref_prime();
    if pivots.contains(&n) {
        return Err(Error::Construction("no conjugating element".into()));
    }
    let mut w0 = vec![0u64; n];
    for (row, &c) in pivots.iter().enumerate() {
        w0[c] = red.get(row, n);
    }
    Ok(w0)
}

fn check_split_polarization(hg: &HeisenbergGroup, plus: &[usize], minus: &[usize]) -> Result<()> {
    let space = hg.space();
    let ell = space.ell();
    let pp = (hg.p() as usize).pow(ell as u32);
    for set in [plus, minus] {
        if !is_subgroup(hg, set) || set.len() != pp || set.iter().any(|&h| h != 0 && h < hg.p() as usize) {
            return Err(Error::InvalidArgument("not a split polarization: bad subgroup".into()));
        }
    }
    let basis = |set: &[usize]| -> Vec<Vec<u64>> { hg.image_in_w(set).iter().map(|&w| space.vector_from_index(w)).collect() };
    let (bp, bm) = (basis(plus), basis(minus));
    if !space.is_totally_isotropic(&bp) || !space.is_totally_isotropic(&bm) {
        return Err(Error::InvalidArgument("not a split polarization: images not isotropic".into()));
    }
    let mut both = bp.clone();
    both.extend(bm);
    let rank = crate::modular::columns_matrix(hg.p(), space.dim(), &both).rank_prime();
    if rank != space.dim() {
        return Err(Error::InvalidArgument("not a split polarization: images not complementary".into()));
    }
    Ok(())
}

/// The special isomorphism `ν(w₊w₋z) = (w̄₊ + w̄₋, z + ½[w₊,w₋])` attached to a
/// split polarization.
pub fn special_iso_from_split_polarization(hg: &HeisenbergGroup, plus: &[usize], minus: &[usize]) -> Result<SpecialIso> {
    check_split_polarization(hg, plus, minus)?;
    let p = hg.p();
    let half = hg.space().half();
    let mut mu = vec![u64::MAX; hg.order()];
    for &a in plus {
        for &b in minus {
            let ab = hg.mul(a, b);
            for z in 0..p {
                let h = hg.mul(ab, z as usize);
                mu[h] = (z + half * hg.commutator(a, b)) % p;
            }
        }
    }
    if mu.contains(&u64::MAX) {
        return Err(Error::Construction("H+ H- Z does not cover H".into()));
    }
    let conds: Vec<(Vec<u64>, u64)> = (0..hg.vector_count())
        .map(|w| (hg.space().vector_from_index(w), mu[w * p as usize]))
        .collect();
    let offset = solve_offset(hg.space(), &conds)?;
    let nu = SpecialIso { offset };
    if (0..hg.order()).any(|h| nu.mu(hg, h) != mu[h]) {
        return Err(Error::Construction("split-polarization formula is not of offset form".into()));
    }
    Ok(nu)
}

/// `H⁻ = Ĥ⁻ ∩ ν⁻¹(W × 1)`.
pub fn split_polarization_from_iso(hg: &HeisenbergGroup, nu: &SpecialIso, plus: &[usize], hat_minus: &[usize]) -> Result<Subset> {
    validate_polarization_of_h(hg, plus, hat_minus)?;
    Ok(hat_minus.iter().copied().filter(|&h| nu.mu(hg, h) == 0).collect())
}

/// A polarization `(H⁺, Ĥ⁻)` of `H`: `H⁺ ∩ Z = 1`, `Z ⊆ Ĥ⁻`, both abelian,
/// and the images in `W` form a polarization.
pub fn validate_polarization_of_h(hg: &HeisenbergGroup, plus: &[usize], hat_minus: &[usize]) -> Result<()> {
    let space = hg.space();
    let p = hg.p() as usize;
    let pl = p.pow(space.ell() as u32);
    let abelian = |s: &[usize]| s.iter().all(|&a| s.iter().all(|&b| hg.mul(a, b) == hg.mul(b, a)));
    let ok = is_subgroup(hg, plus)
        && is_subgroup(hg, hat_minus)
        && plus.len() == pl
        && hat_minus.len() == pl * p
        && plus.iter().all(|&h| h == 0 || h >= p)
        && (0..p).all(|z| hat_minus.binary_search(&z).is_ok())
        && abelian(plus)
        && abelian(hat_minus);
    if !ok {
        return Err(Error::InvalidArgument("not a polarization of H".into()));
    }
    let basis = |set: &[usize]| -> Vec<Vec<u64>> { hg.image_in_w(set).iter().map(|&w| space.vector_from_index(w)).collect() };
    let pol = Polarization { plus: independent(space, &basis(plus)), minus: independent(space, &basis(hat_minus)) };
    space.validate_polarization(&pol)
}

/// A maximal linearly independent sub-list.
pub fn independent(space: &SymplecticSpace, vecs: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![];
    for v in vecs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if crate::modular::columns_matrix(space.p(), space.dim(), &trial).rank_prime() == trial.len() {
            out = trial;
        }
    }
    out
}

/// The three conditions of the equivalence lemma for special isomorphisms:
/// equality, equal preimages of `W × 1`, and `ν₂ = s∘ν₁` for some `s ∈ Sp(W)`.
pub fn special_iso_equal_tests(hg: &HeisenbergGroup, sp: &[SpElement], n1: &SpecialIso, n2: &SpecialIso) -> (bool, bool, bool) {
    let all: Vec<usize> = (0..hg.order()).collect();
    let equal = all.iter().all(|&h| n1.apply(hg, h) == n2.apply(hg, h));
    let preimages = n1.preimage_of_w(hg) == n2.preimage_of_w(hg);
    let by_s = sp.iter().any(|s| {
        all.iter().all(|&h| {
            let e = hg.element(n1.apply(hg, h));
            let moved = hg.index_of(&HeisenbergElement { w: s.apply(&e.w), z: e.z });
            moved == n2.apply(hg, h)
        })
    });
    (equal, preimages, by_s)
}

/// `α(w,z) = (s·w, c·z + ⟨w₀,w⟩)` with `c = central_sign`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergAutomorphism {
    pub s: SpElement,
    pub w0: Vec<u64>,
    pub central_sign: i8,
}

impl HeisenbergAutomorphism {
    pub fn new(space: &SymplecticSpace, s: SpElement, w0: Vec<u64>, central_sign: i8) -> Result<Self> {
        if central_sign.abs() != 1 || s.sign != central_sign || w0.len() != space.dim() {
            return Err(Error::InvalidArgument("central sign must match the sign of s".into()));
        }
        Ok(HeisenbergAutomorphism { s, w0, central_sign })
    }

    pub fn apply(&self, hg: &HeisenbergGroup, h: usize) -> usize {
        let e = hg.element(h);
        let p = hg.p();
        let z = modulo(self.central_sign as i64 * e.z as i64 + hg.space().pairing(&self.w0, &e.w) as i64, p);
        hg.index_of(&HeisenbergElement { w: self.s.apply(&e.w), z })
    }

    pub fn table(&self, hg: &HeisenbergGroup) -> Vec<usize> {
        (0..hg.order()).map(|h| self.apply(hg, h)).collect()
    }

    pub fn is_automorphism(&self, hg: &HeisenbergGroup) -> bool {
        let t = self.table(hg);
        let n = hg.order();
        (0..n).all(|a| (0..n).all(|b| t[hg.mul(a, b)] == hg.mul(t[a], t[b])))
    }

    pub fn is_involution(&self, hg: &HeisenbergGroup) -> bool {
        let t = self.table(hg);
        (0..hg.order()).all(|h| t[t[h]] == h) && t.iter().enumerate().any(|(i, &x)| i != x)
    }

    /// `Int((v,0))∘s` for `s ∈ Sp(W)`, i.e. `(w,z) ↦ (sw, z + ⟨v, sw⟩)`.
    pub fn inner_after_symplectic(space: &SymplecticSpace, s: &SpElement, v: &[u64]) -> Result<Self> {
        let w0 = s.inverse().apply(v);
        Self::new(space, s.clone(), w0, 1)
    }
}

/// `α(w₊ + w₋, z) = (w₊ − w₋, −z)`.
pub fn involution_from_polarization(space: &SymplecticSpace, pol: &Polarization) -> Result<HeisenbergAutomorphism> {
    let s = space.polarization_to_involution(pol)?;
    HeisenbergAutomorphism::new(space, s, vec![0; space.dim()], -1)
}

/// `Hplus = {α(h) = h}` and `Hhat_minus = {α(h) = h⁻¹}`.
pub fn polarization_from_involution(hg: &HeisenbergGroup, alpha: &HeisenbergAutomorphism) -> Result<(Subset, Subset)> {
    if alpha.central_sign != -1 {
        return Err(Error::InvalidArgument("involution must be nontrivial on the center".into()));
    }
    if !alpha.is_involution(hg) {
        return Err(Error::InvalidArgument("automorphism is not of order two".into()));
    }
    let t = alpha.table(hg);
    let plus = (0..hg.order()).filter(|&h| t[h] == h).collect();
    let hat_minus = (0..hg.order()).filter(|&h| t[h] == hg.inv(h)).collect();
    Ok((plus, hat_minus))
}

fn enumeration_guard(space: &SymplecticSpace) -> Result<()> {
    if space.ell() != 1 || space.p() > 7 {
        return Err(Error::Guard("automorphism enumeration needs ell = 1 and p <= 7".into()));
    }
    Ok(())
}

/// Nontrivial order-two automorphisms fixing `Z` pointwise: `s ∈ Sp(W)`,
/// `s² = 1`, `s·w₀ = −w₀`.
pub fn order_two_automorphisms_trivial_on_center(space: &SymplecticSpace) -> Result<Vec<HeisenbergAutomorphism>> {
    enumeration_guard(space)?;
    let mut out = vec![];
    for s in space.enumerate_sp()? {
        if !s.compose(&s).is_identity() {
            continue;
        }
        for w0 in space.all_vectors() {
            if s.apply(&w0) == space.neg_vec(&w0) && !(s.is_identity() && w0.iter().all(|&x| x == 0)) {
                out.push(HeisenbergAutomorphism::new(space, s.clone(), w0, 1)?);
            }
        }
    }
    Ok(out)
}

/// Order-two automorphisms acting by `z ↦ −z` on the center: `s ∈ S⁻` with
/// `s² = 1` and `⟨w₀, (s − 1)w⟩ = 0` for all `w`.
pub fn order_two_automorphisms_nontrivial_on_center(space: &SymplecticSpace) -> Result<Vec<HeisenbergAutomorphism>> {
    enumeration_guard(space)?;
    let mut out = vec![];
    let basis: Vec<Vec<u64>> = (0..space.dim()).map(|i| space.basis_vector(i)).collect();
    for s in space.enumerate_antisymplectic()? {
        if !s.compose(&s).is_identity() {
            continue;
        }
        for w0 in space.all_vectors() {
            let ok = basis.iter().all(|w| {
                let d = space.add_vec(&s.apply(w), &space.neg_vec(w));
                space.pairing(&w0, &d) == 0
            });
            if ok {
                out.push(HeisenbergAutomorphism::new(space, s.clone(), w0, -1)?);
            }
        }
    }
    Ok(out)
}

/// Brute-force count of order-two automorphisms fixing `Z`, searching all
/// `(s, w₀) ∈ Sp(W) ⋉ W` and testing the map on every element.
pub fn count_order_two_trivial_on_center_brute_force(hg: &HeisenbergGroup) -> Result<usize> {
    let space = hg.space();
    enumeration_guard(space)?;
    let mut count = 0;
    for s in space.enumerate_sp()? {
        for w0 in space.all_vectors() {
            let a = HeisenbergAutomorphism::new(space, s.clone(), w0, 1)?;
            let t = a.table(hg);
            let fixes_center = (0..hg.p() as usize).all(|z| t[z] == z);
            if fixes_center && a.is_involution(hg) && a.is_automorphism(hg) {
                count += 1;
            }
        }
    }
    Ok(count)
}
