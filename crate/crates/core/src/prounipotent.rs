//! Congruence subgroups `1 + p^{k₀}M_n(Z/p^K)` of `GL_n(Z/p^K)`: unique square
//! roots by filtration descent, triviality of `H¹_α`, and the factorization
//! `C^α = A^α B^α`.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::modular::{mod_inv, ModMatrix};
use crate::scalar::is_prime;

/// Upper bound on the group order for enumeration.
pub const ENUMERATION_GUARD: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceGroup {
    pub n: usize,
    pub p: u64,
    #[serde(rename = "K")]
    pub precision: u32,
    pub k0: u32,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CongruenceElement {
    group: CongruenceGroup,
    m: ModMatrix,
}

impl fmt::Debug for CongruenceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

impl CongruenceGroup {
    pub fn new(n: usize, p: u64, precision: u32, k0: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix size must be positive".into()));
        }
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        if k0 == 0 || k0 > precision {
            return Err(Error::InvalidArgument(format!("need 1 <= k0 <= K, got k0={k0}, K={precision}")));
        }
        if (precision as f64) * (p as f64).log2() > 62.0 {
            return Err(Error::InvalidArgument(format!("p^K too large: p={p}, K={precision}")));
        }
        Ok(CongruenceGroup { n, p, precision, k0 })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    /// Number of filtration layers `K − k₀`.
    pub fn depth(&self) -> u32 {
        self.precision - self.k0
    }

    /// `p^{n²(K−k₀)}`, saturating.
    pub fn order(&self) -> usize {
        let e = (self.n * self.n) as u32 * self.depth();
        (self.p as usize).checked_pow(e).unwrap_or(usize::MAX)
    }

    pub fn identity(&self) -> CongruenceElement {
        CongruenceElement { group: *self, m: ModMatrix::identity(self.modulus(), self.n) }
    }

    pub fn element(&self, m: ModMatrix) -> Result<CongruenceElement> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::Dimension(format!("expected {0}x{0} matrix", self.n)));
        }
        let m = if m.modulus() == self.modulus() { m } else { ModMatrix::from_rows(self.modulus(), &m.to_rows())? };
        let e = CongruenceElement { group: *self, m };
        if e.level().is_none() {
            return Err(Error::NotMember(format!("not congruent to the identity mod {}^{}", self.p, self.k0)));
        }
        Ok(e)
    }

    pub fn element_from_rows(&self, rows: &[Vec<i64>]) -> Result<CongruenceElement> {
        self.element(ModMatrix::from_rows(self.modulus(), rows)?)
    }

    /// `1 + p^{k₀}X` for `X` with entries reduced mod `p^{K−k₀}`.
    pub fn from_offset(&self, x: &[u64]) -> CongruenceElement {
        let q = self.p.pow(self.k0);
        let mut m = ModMatrix::identity(self.modulus(), self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, (m.get(i, j) + q * x[i * self.n + j]) % self.modulus());
            }
        }
        CongruenceElement { group: *self, m }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> CongruenceElement {
        let r = self.p.pow(self.depth());
        let x: Vec<u64> = (0..self.n * self.n).map(|_| rng.gen_range(0..r.max(1))).collect();
        self.from_offset(&x)
    }

    pub fn random_in<R: Rng + ?Sized>(&self, pattern: &BlockPattern, rng: &mut R) -> CongruenceElement {
        let r = self.p.pow(self.depth());
        let n = self.n;
        let x: Vec<u64> = (0..n * n).map(|c| if pattern.allows(c / n, c % n) { rng.gen_range(0..r.max(1)) } else { 0 }).collect();
        self.from_offset(&x)
    }

    /// Every element, when the order is at most [`ENUMERATION_GUARD`].
    pub fn enumerate(&self) -> Result<Vec<CongruenceElement>> {
        let order = self.order();
        if order > ENUMERATION_GUARD {
            return Err(Error::Guard(format!("group of order {order} exceeds {ENUMERATION_GUARD}")));
        }
        let r = self.p.pow(self.depth());
        let cells = self.n * self.n;
        let mut x = vec![0u64; cells];
        let mut out = Vec::with_capacity(order);
        for _ in 0..order {
            out.push(self.from_offset(&x));
            for c in x.iter_mut() {
                *c += 1;
                if *c < r {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    /// `1 + p^{k₀}E_{ij}` for the cells of `pattern`; these generate the pattern subgroup.
    pub fn generators(&self, pattern: &BlockPattern) -> Vec<CongruenceElement> {
        let mut out = vec![];
        for i in 0..self.n {
            for j in 0..self.n {
                if pattern.allows(i, j) {
                    let mut x = vec![0; self.n * self.n];
                    x[i * self.n + j] = 1;
                    out.push(self.from_offset(&x));
                }
            }
        }
        out
    }
}

impl CongruenceElement {
    pub fn group(&self) -> &CongruenceGroup {
        &self.group
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.m
    }

    pub fn mul(&self, o: &Self) -> Self {
        CongruenceElement { group: self.group, m: self.m.mul(&o.m) }
    }

    /// `(1 + X)⁻¹ = Σ (−X)^i`, which stops once `X^i ≡ 0`.
    pub fn inverse(&self) -> Self {
        let n = self.group.n;
        let one = ModMatrix::identity(self.group.modulus(), n);
        let x = self.m.sub(&one);
        let neg = x.neg();
        let mut term = one.clone();
        let mut sum = one;
        loop {
            term = term.mul(&neg);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        CongruenceElement { group: self.group, m: sum }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    /// The `i` with `g ∈ G_i \ G_{i+1}`, where `G_i = {g ≡ 1 mod p^{k₀+i}}`;
    /// `K − k₀` for the identity and `None` outside `G_0`.
    pub fn level(&self) -> Option<u32> {
        let g = &self.group;
        let one = ModMatrix::identity(g.modulus(), g.n);
        let d = self.m.sub(&one);
        let v = d.data().iter().filter(|&&x| x != 0).map(|&x| valuation(x, g.p)).min().unwrap_or(g.precision);
        (v >= g.k0).then(|| v - g.k0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.group.n,
            "p": self.group.p,
            "K": self.group.precision,
            "k0": self.group.k0,
            "entries": self.m.to_rows(),
        })
    }
}

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

fn half(g: &CongruenceGroup) -> u64 {
    mod_inv(2, g.modulus()).expect("p odd")
}

#[derive(Clone, Debug)]
pub struct SqrtResult {
    pub root: CongruenceElement,
    /// Level of the residual `x_i⁻²a` after each step.
    pub levels: Vec<u32>,
}

impl SqrtResult {
    pub fn to_json(&self) -> Value {
        json!({ "root": self.root.to_json(), "residual_levels": self.levels })
    }
}

/// The square root of `a` by descent through the filtration: with residual
/// `x⁻²a = 1 + R` in `G_i`, the correction `y = 1 + R/2` puts the next
/// residual in `G_{i+1}`.
pub fn sqrt(a: &CongruenceElement) -> Result<SqrtResult> {
    let g = a.group;
    let h = half(&g);
    let depth = g.depth();
    let mut x = g.identity();
    let mut levels = vec![];
    let mut prev = a.level().ok_or_else(|| Error::NotMember("element outside the congruence group".into()))?;
    levels.push(prev);
    for _ in 0..=depth {
        let r = x.square().inverse().mul(a);
        if r.is_identity() {
            return Ok(SqrtResult { root: x, levels });
        }
        let one = ModMatrix::identity(g.modulus(), g.n);
        let y = CongruenceElement { group: g, m: one.add(&r.m.sub(&one).scale(h as i64)) };
        x = x.mul(&y);
        let next = x.square().inverse().mul(a).level().expect("stays in the group");
        if next <= prev {
            return Err(Error::Construction(format!("residual did not descend: level {prev} then {next}")));
        }
        levels.push(next);
        prev = next;
    }
    Err(Error::Construction(format!("no convergence after {} steps", depth + 1)))
}

/// All `x` with `x² = a`, by enumeration.
pub fn square_roots_brute_force(a: &CongruenceElement) -> Result<Vec<CongruenceElement>> {
    Ok(a.group.enumerate()?.into_iter().filter(|x| x.square() == *a).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseInvolution {
    Identity,
    TransposeInverse,
    /// `g ↦ σgσ⁻¹` for the permutation matrix of `perm`, i.e. `g_{ij} ↦ g_{σ(i)σ(j)}`.
    Permutation { perm: Vec<usize> },
}

/// `α(g) = m·θ₀(g)·m⁻¹` with `m ∈ GL_n(Z/p^K)`.
#[derive(Clone, Debug)]
pub struct CongruenceAutomorphism {
    pub base: BaseInvolution,
    pub conjugator: ModMatrix,
    conjugator_inv: ModMatrix,
}

impl CongruenceAutomorphism {
    pub fn new(group: &CongruenceGroup, base: BaseInvolution, conjugator: Option<ModMatrix>) -> Result<Self> {
        let md = group.modulus();
        let conjugator = match conjugator {
            Some(c) => ModMatrix::from_rows(md, &c.to_rows())?,
            None => ModMatrix::identity(md, group.n),
        };
        if conjugator.rows() != group.n || conjugator.cols() != group.n {
            return Err(Error::Dimension("conjugator has the wrong size".into()));
        }
        if let BaseInvolution::Permutation { perm } = &base {
            let mut seen = perm.clone();
            seen.sort_unstable();
            if seen != (0..group.n).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{}", group.n)));
            }
        }
        let conjugator_inv = conjugator.inverse()?;
        let alpha = CongruenceAutomorphism { base, conjugator, conjugator_inv };
        if let Some(g) = group.generators(&BlockPattern::full(group.n)).into_iter().find(|g| alpha.apply(&alpha.apply(g)) != *g) {
            return Err(Error::InvalidArgument(format!("not an involution: α² moves {g:?}")));
        }
        Ok(alpha)
    }

    pub fn identity(group: &CongruenceGroup) -> Self {
        Self::new(group, BaseInvolution::Identity, None).expect("identity")
    }

    pub fn transpose_inverse(group: &CongruenceGroup) -> Self {
        Self::new(group, BaseInvolution::TransposeInverse, None).expect("transpose-inverse")
    }

    /// `g ↦ w(gᵗ)⁻¹w⁻¹` with `w` the antidiagonal permutation; it stabilizes
    /// both the upper and the lower triangular subgroups.
    pub fn antidiagonal_transpose_inverse(group: &CongruenceGroup) -> Self {
        let n = group.n;
        let w = ModMatrix::from_fn(group.modulus(), n, n, |i, j| (i + j + 1 == n) as i64);
        Self::new(group, BaseInvolution::TransposeInverse, Some(w)).expect("antidiagonal involution")
    }

    pub fn apply(&self, g: &CongruenceElement) -> CongruenceElement {
        let t = match &self.base {
            BaseInvolution::Identity => g.m.clone(),
            BaseInvolution::TransposeInverse => g.m.transpose().inverse().expect("unit determinant"),
            BaseInvolution::Permutation { perm } => {
                let n = g.group.n;
                ModMatrix::from_fn(g.group.modulus(), n, n, |i, j| g.m.get(perm[i], perm[j]) as i64)
            }
        };
        CongruenceElement { group: g.group, m: self.conjugator.mul(&t).mul(&self.conjugator_inv) }
    }

    /// Whether `α` maps the pattern subgroup into itself, checked on generators.
    pub fn stabilizes(&self, group: &CongruenceGroup, pattern: &BlockPattern) -> bool {
        group.generators(pattern).iter().all(|g| pattern.contains(&self.apply(g)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Report {
    pub mode: &'static str,
    pub group_order: usize,
    pub z1: usize,
    pub b1: usize,
    pub trivial: bool,
}

/// `Z¹_α = B¹_α` by enumeration.
pub fn h1_alpha_trivial_exhaustive(group: &CongruenceGroup, alpha: &CongruenceAutomorphism) -> Result<H1Report> {
    let elems = group.enumerate()?;
    let z1: HashSet<CongruenceElement> = elems.iter().filter(|z| alpha.apply(z) == z.inverse()).cloned().collect();
    let b1: HashSet<CongruenceElement> = elems.iter().map(|y| y.mul(&alpha.apply(y).inverse())).collect();
    Ok(H1Report { mode: "exhaustive", group_order: elems.len(), z1: z1.len(), b1: b1.len(), trivial: z1 == b1 })
}

/// For `z` with `α(z) = z⁻¹`, the witness `y = √z` with `z = y·α(y)⁻¹`.
pub fn h1_witness(z: &CongruenceElement, alpha: &CongruenceAutomorphism) -> Result<CongruenceElement> {
    if alpha.apply(z) != z.inverse() {
        return Err(Error::InvalidArgument("z is not a cocycle: α(z) ≠ z⁻¹".into()));
    }
    let y = sqrt(z)?.root;
    if y.mul(&alpha.apply(&y).inverse()) != *z {
        return Err(Error::Construction("square root is not a splitting".into()));
    }
    Ok(y)
}

/// A random cocycle `gα(g)⁻¹`.
pub fn random_cocycle<R: Rng + ?Sized>(group: &CongruenceGroup, alpha: &CongruenceAutomorphism, rng: &mut R) -> CongruenceElement {
    let g = group.random(rng);
    g.mul(&alpha.apply(&g).inverse())
}

/// A random `α`-fixed element `√(gα(g)⁻¹)⁻¹·g` of the pattern subgroup.
pub fn random_fixed<R: Rng + ?Sized>(group: &CongruenceGroup, pattern: &BlockPattern, alpha: &CongruenceAutomorphism, rng: &mut R) -> Result<CongruenceElement> {
    if !alpha.stabilizes(group, pattern) {
        return Err(Error::InvalidArgument("pattern subgroup is not α-stable".into()));
    }
    let g = group.random_in(pattern, rng);
    let s = sqrt(&g.mul(&alpha.apply(&g).inverse()))?.root;
    Ok(s.inverse().mul(&g))
}

/// A subgroup `{g ∈ G_0 : g_{ij} = 0 off the pattern}`, optionally with unit
/// diagonal; the pattern is a reflexive, transitive relation so the allowed
/// matrices form an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPattern {
    n: usize,
    cells: Vec<bool>,
    #[serde(default)]
    unipotent: bool,
}

impl BlockPattern {
    pub fn new(n: usize, allowed: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let cells: Vec<bool> = (0..n * n).map(|c| c / n == c % n || allowed(c / n, c % n)).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if cells[i * n + j] && cells[j * n + k] && !cells[i * n + k] {
                        return Err(Error::InvalidArgument(format!("pattern not closed: ({i},{j}),({j},{k}) without ({i},{k})")));
                    }
                }
            }
        }
        Ok(BlockPattern { n, cells, unipotent: false })
    }

    pub fn full(n: usize) -> Self {
        BlockPattern { n, cells: vec![true; n * n], unipotent: false }
    }

    /// The same pattern with diagonal entries required to be `1`.
    pub fn unipotent(mut self) -> Self {
        self.unipotent = true;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal(n: usize) -> Self {
        Self::new(n, |_, _| false).expect("diagonal")
    }

    pub fn upper(n: usize) -> Self {
        Self::new(n, |i, j| i <= j).expect("upper")
    }

    pub fn lower(n: usize) -> Self {
        Self::new(n, |i, j| i >= j).expect("lower")
    }

    /// Block upper triangular for the given block sizes.
    pub fn block_upper(sizes: &[usize]) -> Result<Self> {
        let block: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
        Self::new(block.len(), |i, j| block[i] <= block[j])
    }

    pub fn block_lower(sizes: &[usize]) -> Result<Self> {
        let block: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
        Self::new(block.len(), |i, j| block[i] >= block[j])
    }

    /// Whether the cell may differ from the identity.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j] && !(self.unipotent && i == j)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        BlockPattern { n: self.n, cells: self.cells.iter().zip(&o.cells).map(|(a, b)| *a && *b).collect(), unipotent: self.unipotent || o.unipotent }
    }

    pub fn contains(&self, g: &CongruenceElement) -> bool {
        let n = self.n;
        let one = |c: usize| (c / n == c % n) as u64;
        g.group.n == n && (0..n * n).all(|c| self.allows(c / n, c % n) || g.m.get(c / n, c % n) == one(c))
    }

    fn covers_strict_upper(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.allows(i, j)))
    }

    fn covers_lower(&self) -> bool {
        !self.unipotent && (0..self.n).all(|i| (0..=i).all(|j| self.allows(i, j)))
    }

    fn covers_upper(&self) -> bool {
        !self.unipotent && (0..self.n).all(|i| (i..self.n).all(|j| self.allows(i, j)))
    }

    fn covers_strict_lower(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.allows(i, j)))
    }
}

/// `c = UL` with `U` upper unitriangular and `L` lower triangular.
fn ul_decomposition(c: &CongruenceElement) -> (CongruenceElement, CongruenceElement) {
    let n = c.group.n;
    let md = c.group.modulus();
    let rev = |i: usize| n - 1 - i;
    let a = ModMatrix::from_fn(md, n, n, |i, j| c.m.get(rev(i), rev(j)) as i64);
    let (l, u) = lu_doolittle(&a);
    let uu = ModMatrix::from_fn(md, n, n, |i, j| l.get(rev(i), rev(j)) as i64);
    let ll = ModMatrix::from_fn(md, n, n, |i, j| u.get(rev(i), rev(j)) as i64);
    (CongruenceElement { group: c.group, m: uu }, CongruenceElement { group: c.group, m: ll })
}

/// `c = LU` with `L` lower unitriangular and `U` upper triangular.
fn lu_decomposition(c: &CongruenceElement) -> (CongruenceElement, CongruenceElement) {
    let (l, u) = lu_doolittle(&c.m);
    (CongruenceElement { group: c.group, m: l }, CongruenceElement { group: c.group, m: u })
}

/// Doolittle elimination; pivots are units because `a ≡ 1 mod p`.
fn lu_doolittle(a: &ModMatrix) -> (ModMatrix, ModMatrix) {
    let n = a.rows();
    let md = a.modulus();
    let mut l = ModMatrix::identity(md, n);
    let mut u = ModMatrix::zeros(md, n, n);
    let mulm = |x: u64, y: u64| (x as u128 * y as u128 % md as u128) as u64;
    for i in 0..n {
        for k in i..n {
            let s = (0..i).fold(0u64, |acc, j| (acc + mulm(l.get(i, j), u.get(j, k))) % md);
            u.set(i, k, (a.get(i, k) + md - s) % md);
        }
        let piv = mod_inv(u.get(i, i), md).expect("unit pivot");
        for k in i + 1..n {
            let s = (0..i).fold(0u64, |acc, j| (acc + mulm(l.get(k, j), u.get(j, i))) % md);
            l.set(k, i, mulm((a.get(k, i) + md - s) % md, piv));
        }
    }
    (l, u)
}

/// `(x, y) ↦ (xD, D⁻¹y)` with `D` the diagonal of `y`.
fn shift_diagonal(x: CongruenceElement, y: CongruenceElement) -> (CongruenceElement, CongruenceElement) {
    let g = y.group;
    let n = g.n;
    let d = ModMatrix::from_fn(g.modulus(), n, n, |i, j| if i == j { y.m.get(i, i) as i64 } else { 0 });
    let d = CongruenceElement { group: g, m: d };
    (x.mul(&d), d.inverse().mul(&y))
}

/// Some `c = ab` with `a ∈ A`, `b ∈ B`.
pub fn factor(c: &CongruenceElement, a: &BlockPattern, b: &BlockPattern) -> Result<(CongruenceElement, CongruenceElement)> {
    let g = c.group;
    if a.contains(c) {
        return Ok((c.clone(), g.identity()));
    }
    if b.contains(c) {
        return Ok((g.identity(), c.clone()));
    }
    if a.covers_strict_upper() && b.covers_lower() {
        return Ok(ul_decomposition(c));
    }
    if a.covers_upper() && b.covers_strict_lower() {
        let (u, l) = ul_decomposition(c);
        return Ok(shift_diagonal(u, l));
    }
    if a.covers_strict_lower() && b.covers_upper() {
        return Ok(lu_decomposition(c));
    }
    if a.covers_lower() && b.covers_strict_upper() {
        let (l, u) = lu_decomposition(c);
        return Ok(shift_diagonal(l, u));
    }
    if g.order() <= ENUMERATION_GUARD {
        for x in g.enumerate()?.into_iter().filter(|x| a.contains(x)) {
            let y = x.inverse().mul(c);
            if b.contains(&y) {
                return Ok((x, y));
            }
        }
        return Err(Error::NotMember("c is not in AB".into()));
    }
    Err(Error::Guard("no decomposition rule for these patterns and the group is too large to search".into()))
}

#[derive(Clone, Debug)]
pub struct AlphaFactorization {
    pub a: CongruenceElement,
    pub b: CongruenceElement,
    /// The splitting `y ∈ A∩B` of the cocycle `a₀⁻¹α(a₀)`.
    pub y: CongruenceElement,
}

impl AlphaFactorization {
    pub fn to_json(&self) -> Value {
        json!({ "a": self.a.to_json(), "b": self.b.to_json(), "y": self.y.to_json() })
    }
}

/// Factors an `α`-fixed `c ∈ AB` as `a'b'` with `a' ∈ A^α`, `b' ∈ B^α`: from
/// any `c = ab`, split `a⁻¹α(a) = yα(y)⁻¹` in `A∩B` and take `a' = ay`, `b' = y⁻¹b`.
pub fn alpha_factor(c: &CongruenceElement, a_pattern: &BlockPattern, b_pattern: &BlockPattern, alpha: &CongruenceAutomorphism) -> Result<AlphaFactorization> {
    let g = c.group;
    if alpha.apply(c) != *c {
        return Err(Error::InvalidArgument("c is not α-fixed".into()));
    }
    if !alpha.stabilizes(&g, a_pattern) || !alpha.stabilizes(&g, b_pattern) {
        return Err(Error::InvalidArgument("A and B must be α-stable".into()));
    }
    let (a, b) = factor(c, a_pattern, b_pattern)?;
    let z = a.inverse().mul(&alpha.apply(&a));
    let ab = a_pattern.intersect(b_pattern);
    if !ab.contains(&z) {
        return Err(Error::Construction("cocycle outside A∩B".into()));
    }
    let y = h1_witness(&z, alpha)?;
    if !ab.contains(&y) {
        return Err(Error::Construction("splitting outside A∩B".into()));
    }
    let a2 = a.mul(&y);
    let b2 = y.inverse().mul(&b);
    let ok = a_pattern.contains(&a2) && b_pattern.contains(&b2) && alpha.apply(&a2) == a2 && alpha.apply(&b2) == b2 && a2.mul(&b2) == *c;
    if !ok {
        return Err(Error::Construction("factorization failed to verify".into()));
    }
    Ok(AlphaFactorization { a: a2, b: b2, y })
}
