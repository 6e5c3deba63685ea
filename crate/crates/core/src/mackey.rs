//! Finite groups given by multiplication tables, the Mackey decomposition of
//! `Hom_H(Ind_K^G κ, 1)`, involutions and their orbits, twisted conjugacy
//! classes, the sets `S(θ,Θ′)`, the multiplicity `m_K(Θ)` and the `H¹_Θ`
//! bound.
//!
//! Induction uses right cosets: `Ind_K^G κ` is the space of `f : G → V` with
//! `f(kg) = κ(k)f(g)` and `(π(g)f)(x) = f(xg)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::Hash;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{closure, commutator_subgroup, element_order, generators, intersect, is_subgroup, mask, FiniteGroup, Subset};
use crate::heisenberg::HeisenbergGroup;
use crate::linalg::CycMatrix;
use crate::reps::{contragredient, hom_dim, MatrixRep};
use crate::scalar::{CycField, CycNumber};
use crate::symplectic::{SpTable, SymplecticSpace};
use crate::weil::WeilLift;

/// Largest group order accepted by [`automorphisms`].
pub const AUTOMORPHISM_GUARD: usize = 24;
/// Largest `[G:K]·dim κ` accepted by [`induced_hom_dim_oracle`].
pub const ORACLE_GUARD: usize = 256;

#[derive(Clone, Debug)]
pub struct TableGroup {
    pub name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    center: Subset,
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup for TableGroup {
    fn order(&self) -> usize {
        self.order
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }
}

impl TableGroup {
    fn from_flat(name: &str, order: usize, table: Vec<u32>) -> Result<Self> {
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        if inverse.contains(&u32::MAX) {
            return Err(Error::InvalidArgument("some element has no inverse".into()));
        }
        let mut g = TableGroup { name: name.into(), order, table, inverse, center: vec![], perms: None };
        g.center = crate::group::center(&g);
        Ok(g)
    }

    /// A group from an explicit table, validated: identity at index 0,
    /// Latin-square rows/columns, two-sided inverses and associativity.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("table must be square and nonempty".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidArgument("table entry out of range".into()));
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(Error::InvalidArgument("index 0 must be the identity".into()));
        }
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[table[a][b]] = true;
                col[table[b][a]] = true;
            }
            if row.contains(&false) || col.contains(&false) {
                return Err(Error::InvalidArgument("table is not a Latin square".into()));
            }
        }
        let assoc = (0..n).into_par_iter().all(|a| (0..n).all(|b| (0..n).all(|c| table[table[a][b]][c] == table[a][table[b][c]])));
        if !assoc {
            return Err(Error::InvalidArgument("operation is not associative".into()));
        }
        let g = Self::from_flat("table", n, table.iter().flatten().map(|&x| x as u32).collect())?;
        if (0..n).any(|a| g.mul(g.inv(a), a) != 0) {
            return Err(Error::InvalidArgument("left and right inverses differ".into()));
        }
        Ok(g)
    }

    /// The group generated by closing `elems` under an associative `mul`;
    /// `elems[0]` must be the identity.
    pub fn from_elements<T: Clone + Eq + Hash + Sync>(name: &str, elems: Vec<T>, mul: impl Fn(&T, &T) -> T + Sync) -> Result<Self> {
        let n = elems.len();
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != n {
            return Err(Error::InvalidArgument("elements must be distinct".into()));
        }
        let rows: Vec<Vec<u32>> = elems
            .par_iter()
            .map(|a| elems.iter().map(|b| index.get(&mul(a, b)).map(|&i| i as u32).ok_or_else(|| Error::InvalidArgument("element list is not closed".into()))).collect::<Result<Vec<u32>>>())
            .collect::<Result<Vec<_>>>()?;
        if (0..n).any(|a| rows[0][a] != a as u32) {
            return Err(Error::InvalidArgument("first element must be the identity".into()));
        }
        Self::from_flat(name, n, rows.concat())
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn elements(&self) -> Subset {
        (0..self.order).collect()
    }

    /// Sign of `g` when the group was built from permutations.
    pub fn sign(&self, g: usize) -> Option<i64> {
        let perm = &self.perms.as_ref()?[g];
        let mut seen = vec![false; perm.len()];
        let mut sign = 1;
        for i in 0..perm.len() {
            if !seen[i] {
                let mut j = i;
                let mut len = 0;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                    len += 1;
                }
                if len % 2 == 0 {
                    sign = -sign;
                }
            }
        }
        Some(sign)
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "order": self.order, "table": self.table() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing order".into()))? as usize;
        let table: Vec<Vec<usize>> = serde_json::from_value(v.get("table").cloned().ok_or_else(|| Error::Parse("missing table".into()))?).map_err(|e| Error::Parse(e.to_string()))?;
        if table.len() != order {
            return Err(Error::Parse("order does not match the table".into()));
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("table");
        Ok(Self::from_table(&table)?.with_name(name))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json().to_string()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::from_elements(&format!("C{n}"), (0..n).collect(), |a, b| (a + b) % n)
    }

    /// The dihedral group of order `2n`, elements `r^a s^b`.
    pub fn dihedral(n: usize) -> Result<Self> {
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|b| (0..n).map(move |a| (a, b))).collect();
        Self::from_elements(&format!("D{}", 2 * n), elems, |&(a1, b1), &(a2, b2)| ((if b1 == 0 { a1 + a2 } else { a1 + n - a2 }) % n, (b1 + b2) % 2))
    }

    /// The dicyclic group of order `4n`: `a^{2n} = 1`, `x² = a^n`, `xax⁻¹ = a⁻¹`.
    /// `n = 2` gives `Q8` and `n = 4` gives `Q16`.
    pub fn dicyclic(n: usize) -> Result<Self> {
        let m = 2 * n;
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|e| (0..m).map(move |k| (k, e))).collect();
        Self::from_elements(&format!("Dic{}", 4 * n), elems, |&(k, e), &(l, f)| {
            let moved = if e == 0 { l } else { m - l };
            let extra = if e == 1 && f == 1 { n } else { 0 };
            ((k + moved + extra) % m, e ^ f)
        })
    }

    pub fn quaternion() -> Result<Self> {
        Ok(Self::dicyclic(2)?.with_name("Q8"))
    }

    fn from_permutations(name: &str, perms: Vec<Vec<usize>>) -> Result<Self> {
        let mut g = Self::from_elements(name, perms.clone(), |a, b| b.iter().map(|&i| a[i]).collect::<Vec<usize>>())?;
        g.perms = Some(perms);
        Ok(g)
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![];
        let mut cur: Vec<usize> = (0..n).collect();
        fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == cur.len() {
                out.push(cur.clone());
                return;
            }
            for i in k..cur.len() {
                cur.swap(k, i);
                rec(k + 1, cur, out);
                cur.swap(k, i);
            }
        }
        rec(0, &mut cur, &mut out);
        out.sort();
        out
    }

    /// The symmetric group on `n ≤ 5` letters, composition `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::Guard("symmetric groups are built for 1 <= n <= 5".into()));
        }
        Self::from_permutations(&format!("S{n}"), Self::all_permutations(n))
    }

    pub fn alternating(n: usize) -> Result<Self> {
        let s = Self::symmetric(n)?;
        let perms: Vec<Vec<usize>> = (0..s.order).filter(|&g| s.sign(g) == Some(1)).map(|g| s.perms.as_ref().expect("permutations")[g].clone()).collect();
        Self::from_permutations(&format!("A{n}"), perms)
    }

    pub fn direct_product(a: &TableGroup, b: &TableGroup) -> Result<Self> {
        let elems: Vec<(usize, usize)> = (0..a.order).flat_map(|x| (0..b.order).map(move |y| (x, y))).collect();
        Self::from_elements(&format!("{}x{}", a.name, b.name), elems, |&(x1, y1), &(x2, y2)| (a.mul(x1, x2), b.mul(y1, y2)))
    }

    /// The subgroup on `subset`, reindexed in increasing order of ambient index.
    pub fn subgroup(g: &TableGroup, subset: &[usize], name: &str) -> Result<Self> {
        if !is_subgroup(g, subset) {
            return Err(Error::InvalidArgument("not a subgroup".into()));
        }
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        let mut t = Self::from_elements(name, elems.clone(), |&x, &y| g.mul(x, y))?;
        t.perms = g.perms.as_ref().map(|p| elems.iter().map(|&x| p[x].clone()).collect());
        Ok(t)
    }

    /// `SL(2, p) = Sp(2, F_p)` in the standard enumeration.
    pub fn sl2(p: u64) -> Result<Self> {
        let space = SymplecticSpace::new(p, 1)?;
        let sp = SpTable::new(space.enumerate_sp()?)?;
        Self::from_elements(&format!("SL2({p})"), (0..sp.order()).collect(), |&a, &b| sp.mul(a, b))
    }

    pub fn heisenberg(hg: &HeisenbergGroup) -> Result<Self> {
        Self::from_elements(&format!("H({})", hg.p()), (0..hg.order()).collect(), |&a, &b| hg.mul(a, b))
    }

    /// `Sp(W) ⋉ H` with `s·(w,z) = (sw, z)`. The pair `(s, h)` stands for `h·s`,
    /// has index `s·|H| + h`, and `(s₁,h₁)(s₂,h₂) = (s₁s₂, h₁·(s₁·h₂))`.
    pub fn sp_semidirect_heisenberg(hg: &HeisenbergGroup) -> Result<Self> {
        let sp = SpTable::new(hg.space().enumerate_sp()?)?;
        let nh = hg.order();
        let act: Vec<u32> = (0..sp.order())
            .flat_map(|s| {
                let e = &sp.elements[s];
                (0..nh).map(move |h| {
                    let x = hg.element(h);
                    hg.make(&e.apply(&x.w), x.z as i64) as u32
                })
            })
            .collect();
        let elems: Vec<(usize, usize)> = (0..sp.order()).flat_map(|s| (0..nh).map(move |h| (s, h))).collect();
        Self::from_elements(&format!("Sp2({})xH", hg.p()), elems, |&(s1, h1), &(s2, h2)| (sp.mul(s1, s2), hg.mul(h1, act[s1 * nh + h2] as usize)))
    }

    /// `Ŝ ⋉ W` where `Ŝ = Sp(W) ∪ S⁻` acts linearly on the additive group `W`.
    pub fn hat_sp_semidirect_w(space: &SymplecticSpace) -> Result<Self> {
        let mut hat = space.enumerate_sp()?;
        hat.extend(space.enumerate_antisymplectic()?);
        let table = SpTable::new(hat)?;
        let vecs = space.vector_count();
        let elems: Vec<(usize, usize)> = (0..table.order()).flat_map(|s| (0..vecs).map(move |w| (s, w))).collect();
        Self::from_elements(&format!("Sp2({})^xW", space.p()), elems, |&(s1, w1), &(s2, w2)| {
            let moved = table.elements[s1].apply(&space.vector_from_index(w2));
            (table.mul(s1, s2), space.vector_index(&space.add_vec(&space.vector_from_index(w1), &moved)))
        })
    }

    /// `s ∈ Ŝ` in `Ŝ ⋉ W`, as a sign: `+1` symplectic, `−1` antisymplectic.
    pub fn hat_sign(space: &SymplecticSpace, g: usize) -> Result<i64> {
        let n = space.enumerate_sp()?.len();
        Ok(if g / space.vector_count() < n { 1 } else { -1 })
    }
}

/// The groups used for sweeps.
pub fn zoo() -> Result<Vec<TableGroup>> {
    let s3 = TableGroup::symmetric(3)?;
    let s4 = TableGroup::symmetric(4)?;
    let c2 = TableGroup::cyclic(2)?;
    Ok(vec![
        TableGroup::cyclic(1)?,
        TableGroup::cyclic(6)?,
        TableGroup::cyclic(8)?,
        TableGroup::direct_product(&c2, &TableGroup::direct_product(&c2, &c2)?)?.with_name("C2^3"),
        TableGroup::dihedral(4)?,
        TableGroup::dihedral(6)?,
        s3,
        TableGroup::alternating(4)?,
        TableGroup::quaternion()?,
        TableGroup::dicyclic(4)?.with_name("Q16"),
        TableGroup::sl2(3)?,
        TableGroup::direct_product(&s4, &c2)?.with_name("S4xC2"),
        s4,
        TableGroup::heisenberg(&HeisenbergGroup::standard(3, 1)?)?,
    ])
}

/// Labels each element by the smallest element of its double coset `KgH`.
pub fn double_coset_labels<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], h: &[usize]) -> Result<Vec<usize>> {
    if !is_subgroup(g, k) || !is_subgroup(g, h) {
        return Err(Error::InvalidArgument("double cosets need subgroups".into()));
    }
    let n = g.order();
    let mut label = vec![usize::MAX; n];
    for x in 0..n {
        if label[x] != usize::MAX {
            continue;
        }
        for &a in k {
            let ax = g.mul(a, x);
            for &b in h {
                label[g.mul(ax, b)] = x;
            }
        }
    }
    Ok(label)
}

/// One representative (the smallest element) per double coset `KgH`.
pub fn double_cosets<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], h: &[usize]) -> Result<Vec<usize>> {
    let labels = double_coset_labels(g, k, h)?;
    let reps: BTreeSet<usize> = labels.into_iter().collect();
    Ok(reps.into_iter().collect())
}

/// `Σ_{KgH} dim Hom_{K∩gHg⁻¹}(κ, 1)`.
pub fn mackey_hom_dim<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], kappa: &MatrixRep, h: &[usize]) -> Result<usize> {
    check_rep_on(kappa, k)?;
    let field = kappa.field();
    double_cosets(g, k, h)?
        .into_iter()
        .map(|x| {
            let conj = crate::group::conjugate_subset(g, x, h);
            hom_dim(kappa, &intersect(k, &conj), |_| CycNumber::one(field))
        })
        .sum()
}

fn check_rep_on(kappa: &MatrixRep, k: &[usize]) -> Result<()> {
    if kappa.domain().len() != k.len() || k.iter().any(|&x| !kappa.contains(x)) {
        return Err(Error::InvalidArgument("representation must be defined exactly on K".into()));
    }
    Ok(())
}

/// Right coset representatives of `K\G` and, for every element, its coset index.
fn right_cosets<G: FiniteGroup + ?Sized>(g: &G, k: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = g.order();
    let mut idx = vec![usize::MAX; n];
    let mut reps = vec![];
    for x in 0..n {
        if idx[x] == usize::MAX {
            for &a in k {
                idx[g.mul(a, x)] = reps.len();
            }
            reps.push(x);
        }
    }
    (reps, idx)
}

/// `Σ_{h∈H} π(h)` for `π = Ind_K^G κ`, built blockwise.
pub fn induced_sum<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], kappa: &MatrixRep, h: &[usize]) -> Result<CycMatrix> {
    check_rep_on(kappa, k)?;
    if !is_subgroup(g, k) || !is_subgroup(g, h) {
        return Err(Error::InvalidArgument("K and H must be subgroups".into()));
    }
    let d = kappa.dim();
    let (reps, idx) = right_cosets(g, k);
    let n = reps.len() * d;
    if n > ORACLE_GUARD {
        return Err(Error::Guard(format!("induced dimension {n} exceeds {ORACLE_GUARD}")));
    }
    let field = kappa.field();
    let mut sum = CycMatrix::zeros(field, n, n);
    for &y in h {
        for (i, &r) in reps.iter().enumerate() {
            let x = g.mul(r, y);
            let j = idx[x];
            let kk = g.mul(x, g.inv(reps[j]));
            let block = kappa.image(kk);
            for a in 0..d {
                for b in 0..d {
                    let v = block.get(a, b);
                    if !v.is_zero() {
                        let cur = sum.get(i * d + a, j * d + b).add(v);
                        sum.set(i * d + a, j * d + b, cur);
                    }
                }
            }
        }
    }
    Ok(sum)
}

/// `dim Hom_H(Ind_K^G κ, 1)` as the rank of `Σ_{h∈H} π(h)`, without Mackey theory.
pub fn induced_hom_dim_oracle<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], kappa: &MatrixRep, h: &[usize]) -> Result<usize> {
    Ok(induced_sum(g, k, kappa, h)?.rank())
}

/// The same oracle applied to `Ind_K^G κ̃`, the contragredient of the induced representation.
pub fn induced_hom_dim_oracle_contragredient<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], kappa: &MatrixRep, h: &[usize]) -> Result<usize> {
    induced_hom_dim_oracle(g, k, &contragredient(g, kappa)?, h)
}

/// An automorphism of order at most two, as a permutation of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvolutionRecord {
    pub map: Vec<usize>,
}

impl InvolutionRecord {
    pub fn new<G: FiniteGroup + ?Sized>(g: &G, map: Vec<usize>) -> Result<Self> {
        let n = g.order();
        if map.len() != n || map.iter().any(|&x| x >= n) {
            return Err(Error::InvalidArgument("map must be a function on the group".into()));
        }
        if (0..n).any(|x| map[map[x]] != x) {
            return Err(Error::InvalidArgument("map does not square to the identity".into()));
        }
        let hom = (0..n).into_par_iter().all(|a| (0..n).all(|b| map[g.mul(a, b)] == g.mul(map[a], map[b])));
        if !hom {
            return Err(Error::InvalidArgument("map is not an automorphism".into()));
        }
        Ok(InvolutionRecord { map })
    }

    pub fn identity<G: FiniteGroup + ?Sized>(g: &G) -> Self {
        InvolutionRecord { map: (0..g.order()).collect() }
    }

    /// `Int(x)`, valid when `x² ∈ Z`.
    pub fn inner<G: FiniteGroup + ?Sized>(g: &G, x: usize) -> Result<Self> {
        let xi = g.inv(x);
        Self::new(g, (0..g.order()).map(|y| g.mul(g.mul(x, y), xi)).collect())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `gθ(g)⁻¹`.
    pub fn twist<G: FiniteGroup + ?Sized>(&self, g: &G, x: usize) -> usize {
        g.mul(x, g.inv(self.map[x]))
    }

    /// `Int(x)∘θ`.
    pub fn after_inner<G: FiniteGroup + ?Sized>(&self, g: &G, x: usize) -> Self {
        let xi = g.inv(x);
        InvolutionRecord { map: self.map.iter().map(|&y| g.mul(g.mul(x, y), xi)).collect() }
    }

    /// `x·θ = Int(x)∘θ∘Int(x⁻¹) = Int(xθ(x)⁻¹)∘θ`.
    pub fn act<G: FiniteGroup + ?Sized>(&self, g: &G, x: usize) -> Self {
        self.after_inner(g, self.twist(g, x))
    }

    /// `G^θ`.
    pub fn fixed_points(&self) -> Subset {
        self.map.iter().enumerate().filter(|(i, &x)| *i == x).map(|(i, _)| i).collect()
    }
}

/// All automorphisms (as permutations), by extending images of a generating set.
pub fn automorphisms<G: FiniteGroup + ?Sized>(g: &G) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    if n > AUTOMORPHISM_GUARD {
        return Err(Error::Guard(format!("automorphism enumeration is limited to order {AUTOMORPHISM_GUARD}")));
    }
    let all: Vec<usize> = (0..n).collect();
    let gens = generators(g, &all);
    let orders: Vec<usize> = all.iter().map(|&x| element_order(g, x)).collect();
    let candidates: Vec<Vec<usize>> = gens.iter().map(|&x| all.iter().copied().filter(|&y| orders[y] == orders[x]).collect()).collect();
    let mut out = vec![];
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        if let Some(map) = extend_to_map(g, &gens, &images) {
            out.push(map);
        }
        let mut i = 0;
        loop {
            if i == gens.len() {
                out.sort();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn extend_to_map<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity()] = g.identity();
    let mut stack = vec![g.identity()];
    while let Some(x) = stack.pop() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = g.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = v;
                stack.push(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    let hit = mask(n, &map);
    if hit.contains(&false) {
        return None;
    }
    (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == g.mul(map[a], map[b]))).then_some(map)
}

/// All automorphisms of order exactly two.
pub fn involutions<G: FiniteGroup + ?Sized>(g: &G) -> Result<Vec<InvolutionRecord>> {
    Ok(automorphisms(g)?
        .into_iter()
        .map(|map| InvolutionRecord { map })
        .filter(|t| !t.is_trivial() && t.map.iter().enumerate().all(|(i, &x)| t.map[x] == i))
        .collect())
}

/// Inner involutions `Int(x)` for `x ∉ Z` with `x² ∈ Z`, one per distinct map.
pub fn inner_involutions<G: FiniteGroup + ?Sized>(g: &G) -> Vec<InvolutionRecord> {
    let mut seen = BTreeSet::new();
    for x in 0..g.order() {
        if let Ok(t) = InvolutionRecord::inner(g, x) {
            if !t.is_trivial() {
                seen.insert(t);
            }
        }
    }
    seen.into_iter().collect()
}

/// The orbit `A·θ`, sorted.
pub fn orbit<G: FiniteGroup + ?Sized>(g: &G, theta: &InvolutionRecord, actor: &[usize]) -> Vec<InvolutionRecord> {
    let set: BTreeSet<InvolutionRecord> = actor.par_iter().map(|&a| theta.act(g, a)).collect::<Vec<_>>().into_iter().collect();
    set.into_iter().collect()
}

/// Partition of `thetas` (by position) into `A`-orbits.
pub fn involution_orbits<G: FiniteGroup + ?Sized>(g: &G, thetas: &[InvolutionRecord], actor: &[usize]) -> Result<Vec<Vec<usize>>> {
    if !is_subgroup(g, actor) {
        return Err(Error::InvalidArgument("actor must be a subgroup".into()));
    }
    for t in thetas {
        InvolutionRecord::new(g, t.map.clone())?;
    }
    let pos: HashMap<&InvolutionRecord, usize> = thetas.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut seen = vec![false; thetas.len()];
    let mut out = vec![];
    for i in 0..thetas.len() {
        if seen[i] {
            continue;
        }
        let mut cls = BTreeSet::new();
        for t in orbit(g, &thetas[i], actor) {
            let j = *pos.get(&t).ok_or_else(|| Error::NotMember("list is not closed under the action".into()))?;
            seen[j] = true;
            cls.insert(j);
        }
        out.push(cls.into_iter().collect());
    }
    Ok(out)
}

/// `Θ` with its decomposition into `K`-orbits `Θ^K`.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub orbit: Vec<InvolutionRecord>,
    pub k_orbits: Vec<Vec<usize>>,
    /// `K`-orbit index of each member of `Θ`.
    pub k_orbit_of: Vec<usize>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl OrbitData {
    pub fn new<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord) -> Result<Self> {
        let all: Vec<usize> = (0..g.order()).collect();
        let orbit = orbit(g, theta, &all);
        let k_orbits = involution_orbits(g, &orbit, k)?;
        let mut k_orbit_of = vec![0; orbit.len()];
        for (i, cls) in k_orbits.iter().enumerate() {
            for &j in cls {
                k_orbit_of[j] = i;
            }
        }
        let lookup = orbit.iter().enumerate().map(|(i, t)| (t.map.clone(), i)).collect();
        Ok(OrbitData { orbit, k_orbits, k_orbit_of, lookup })
    }

    pub fn position(&self, t: &InvolutionRecord) -> Option<usize> {
        self.lookup.get(&t.map).copied()
    }

    pub fn k_orbit_index(&self, t: &InvolutionRecord) -> Option<usize> {
        self.position(t).map(|i| self.k_orbit_of[i])
    }
}

/// `S(θ,Θ′) = {KgG^θ : g·θ ∈ Θ′}`, as double-coset labels.
pub fn s_theta<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord, theta_prime: &[InvolutionRecord]) -> Result<Vec<usize>> {
    let all: Vec<usize> = (0..g.order()).collect();
    let full: HashSet<InvolutionRecord> = orbit(g, theta, &all).into_iter().collect();
    if theta_prime.iter().any(|t| !full.contains(t)) {
        return Err(Error::InvalidArgument("the K-orbit is not inside the G-orbit of theta".into()));
    }
    let target: HashSet<&InvolutionRecord> = theta_prime.iter().collect();
    let labels = double_coset_labels(g, k, &theta.fixed_points())?;
    let set: BTreeSet<usize> = all.iter().filter(|&&x| target.contains(&theta.act(g, x))).map(|&x| labels[x]).collect();
    Ok(set.into_iter().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SThetaReport {
    pub orbit_size: usize,
    pub k_orbit_count: usize,
    pub m_k: usize,
    /// `S(x·θ, Θ′) = S(θ,Θ′)x⁻¹` for every `x` and `Θ′`.
    pub clause1: bool,
    /// `S(θ, K·θ)` = double cosets containing `g` with `gθ(g)⁻¹ ∈ Z`.
    pub clause2: bool,
    /// `Kg₁G^θ ↦ Kxg₁x⁻¹G^{x·θ}` is a well-defined bijection `S(θ,K·θ) → S(x·θ, K·x·θ)`.
    pub clause3: bool,
    /// `|S(θ″,Θ′)|` is constant over `θ″ ∈ Θ` and `Θ′ ∈ Θ^K`.
    pub clause4: bool,
    pub triangle: bool,
}

impl SThetaReport {
    pub fn passed(&self) -> bool {
        self.clause1 && self.clause2 && self.clause3 && self.clause4 && self.triangle
    }
}

/// Checks every clause on the orbit of `θ`, over all `x ∈ G` (or the first `limit` of them).
pub fn s_theta_clauses<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord, limit: Option<usize>) -> Result<SThetaReport> {
    if !is_subgroup(g, k) {
        return Err(Error::InvalidArgument("K must be a subgroup".into()));
    }
    let n = g.order();
    let data = OrbitData::new(g, k, theta)?;
    let nk = data.k_orbits.len();
    let center: HashSet<usize> = crate::group::center(g).into_iter().collect();
    let base_labels = double_coset_labels(g, k, &theta.fixed_points())?;
    let base_sets = s_sets(g, &data, theta, &base_labels)?;
    let own = data.k_orbit_index(theta).expect("theta lies in its orbit");

    let clause2 = {
        let z_cosets: BTreeSet<usize> = (0..n).filter(|&x| center.contains(&theta.twist(g, x))).map(|x| base_labels[x]).collect();
        z_cosets == base_sets[own]
    };

    let actors: Vec<usize> = (0..limit.unwrap_or(n).min(n)).collect();
    let per_actor: Vec<(bool, bool, Vec<usize>)> = actors
        .par_iter()
        .map(|&x| -> Result<(bool, bool, Vec<usize>)> {
            let tx = theta.act(g, x);
            let labels = double_coset_labels(g, k, &tx.fixed_points())?;
            let sets = s_sets(g, &data, &tx, &labels)?;
            let xi = g.inv(x);
            let c1 = (0..nk).all(|i| {
                let moved: BTreeSet<usize> = (0..n).filter(|&y| base_sets[i].contains(&base_labels[y])).map(|y| labels[g.mul(y, xi)]).collect();
                moved == sets[i]
            });
            let own_x = data.k_orbit_index(&tx).expect("orbit member");
            let mut image: HashMap<usize, usize> = HashMap::new();
            let mut c3 = true;
            for y in 0..n {
                if base_sets[own].contains(&base_labels[y]) && center.contains(&theta.twist(g, y)) {
                    let img = labels[g.mul(g.mul(x, y), xi)];
                    if *image.entry(base_labels[y]).or_insert(img) != img {
                        c3 = false;
                    }
                }
            }
            let targets: BTreeSet<usize> = image.values().copied().collect();
            c3 &= image.len() == base_sets[own].len() && targets == sets[own_x];
            Ok((c1, c3, sets.iter().map(BTreeSet::len).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    let clause1 = per_actor.iter().all(|r| r.0);
    let clause3 = per_actor.iter().all(|r| r.1);
    let m_k = base_sets[own].len();
    let clause4 = per_actor.iter().all(|r| r.2.iter().all(|&s| s == m_k));
    let triangle = commuting_triangle(g, k, theta)?;
    Ok(SThetaReport { orbit_size: data.orbit.len(), k_orbit_count: nk, m_k, clause1, clause2, clause3, clause4, triangle })
}

fn s_sets<G: FiniteGroup + ?Sized>(g: &G, data: &OrbitData, theta: &InvolutionRecord, labels: &[usize]) -> Result<Vec<BTreeSet<usize>>> {
    let mut sets = vec![BTreeSet::new(); data.k_orbits.len()];
    for x in 0..g.order() {
        let i = data.k_orbit_index(&theta.act(g, x)).ok_or_else(|| Error::Construction("orbit is not closed".into()))?;
        sets[i].insert(labels[x]);
    }
    Ok(sets)
}

/// `m_K(Θ) = |S(θ, K·θ)|`.
pub fn m_k<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord) -> Result<usize> {
    let ko = orbit(g, theta, k);
    Ok(s_theta(g, k, theta, &ko)?.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct H1Bound {
    pub z1: usize,
    pub b1: usize,
    pub bound: usize,
    pub center_in_k: bool,
}

/// `|Z¹_Θ / B¹_Θ|` with `Z¹ = {z : θ(z) = z⁻¹}` and `B¹ = {zθ(z)⁻¹}`.
pub fn h1_bound<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord) -> H1Bound {
    let z = crate::group::center(g);
    let z1 = z.iter().filter(|&&x| theta.apply(x) == g.inv(x)).count();
    let b1: BTreeSet<usize> = z.iter().map(|&x| theta.twist(g, x)).collect();
    let ks: HashSet<usize> = k.iter().copied().collect();
    H1Bound { z1, b1: b1.len(), bound: z1 / b1.len(), center_in_k: z.iter().all(|x| ks.contains(x)) }
}

/// `K`-orbit labels (smallest member) of the twisted action `k·x = kxθ(k)⁻¹` on `S_θ = {gθ(g)⁻¹}`.
pub fn twisted_classes<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord) -> HashMap<usize, usize> {
    let s: BTreeSet<usize> = (0..g.order()).map(|x| theta.twist(g, x)).collect();
    let mut label = HashMap::new();
    for &x in &s {
        if label.contains_key(&x) {
            continue;
        }
        for &a in k {
            label.insert(g.mul(g.mul(a, x), g.inv(theta.apply(a))), x);
        }
    }
    label
}

/// `KgG^θ ↔ K·gθ(g)⁻¹` is a bijection and `K·x ↦ K·(Int(x)∘θ)` recovers `K·(g·θ)`.
pub fn commuting_triangle<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], theta: &InvolutionRecord) -> Result<bool> {
    let labels = double_coset_labels(g, k, &theta.fixed_points())?;
    let classes = twisted_classes(g, k, theta);
    let data = OrbitData::new(g, k, theta)?;
    let mut forward: HashMap<usize, usize> = HashMap::new();
    let mut to_orbit: HashMap<usize, usize> = HashMap::new();
    for x in 0..g.order() {
        let t = theta.twist(g, x);
        let cls = classes[&t];
        if *forward.entry(labels[x]).or_insert(cls) != cls {
            return Ok(false);
        }
        let via_classes = data.k_orbit_index(&theta.after_inner(g, cls));
        let via_cosets = data.k_orbit_index(&theta.act(g, x));
        if via_classes.is_none() || via_classes != via_cosets {
            return Ok(false);
        }
        if *to_orbit.entry(cls).or_insert(via_classes.unwrap()) != via_classes.unwrap() {
            return Ok(false);
        }
    }
    let images: BTreeSet<usize> = forward.values().copied().collect();
    let all_classes: BTreeSet<usize> = classes.values().copied().collect();
    Ok(images.len() == forward.len() && images == all_classes)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbMultReport {
    pub lhs: usize,
    pub rhs: usize,
    pub m_k: usize,
    /// `⟨Θ′, κ⟩_K` for each `Θ′ ∈ Θ^K`.
    pub terms: Vec<usize>,
    pub h1: H1Bound,
    pub contragredient_lhs: usize,
    pub mackey: usize,
    /// `|S(θ,Θ′)|` for each `Θ′ ∈ Θ^K`.
    pub fibers: Vec<usize>,
    /// `Σ_{Θ′} |S(θ,Θ′)|·⟨Θ′,κ⟩_K`.
    pub weighted: usize,
}

impl OrbMultReport {
    /// The factorization through a single `m_K(Θ)`.
    pub fn passed(&self) -> bool {
        self.fiber_identity() && self.lhs == self.rhs && (!self.h1.center_in_k || self.m_k <= self.h1.bound)
    }

    /// The fiber-weighted form, which does not need `|S(θ,Θ′)|` to be constant.
    pub fn fiber_identity(&self) -> bool {
        self.lhs == self.weighted && self.lhs == self.contragredient_lhs && self.lhs == self.mackey
    }
}

/// `⟨Θ,π⟩_G` from the oracle against `m_K(Θ)·Σ_{Θ′} ⟨Θ′,κ⟩_K`.
pub fn orbmult_check<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], kappa: &MatrixRep, theta: &InvolutionRecord) -> Result<OrbMultReport> {
    let field = kappa.field();
    let h = theta.fixed_points();
    let lhs = induced_hom_dim_oracle(g, k, kappa, &h)?;
    let contragredient_lhs = induced_hom_dim_oracle_contragredient(g, k, kappa, &h)?;
    let mackey = mackey_hom_dim(g, k, kappa, &h)?;
    let data = OrbitData::new(g, k, theta)?;
    let terms = data
        .k_orbits
        .iter()
        .map(|cls| hom_dim(kappa, &intersect(k, &data.orbit[cls[0]].fixed_points()), |_| CycNumber::one(field)))
        .collect::<Result<Vec<usize>>>()?;
    let fibers = data
        .k_orbits
        .iter()
        .map(|cls| Ok(s_theta(g, k, theta, &cls.iter().map(|&i| data.orbit[i].clone()).collect::<Vec<_>>())?.len()))
        .collect::<Result<Vec<usize>>>()?;
    let weighted = fibers.iter().zip(&terms).map(|(a, b)| a * b).sum();
    let m = m_k(g, k, theta)?;
    Ok(OrbMultReport { lhs, rhs: m * terms.iter().sum::<usize>(), m_k: m, terms, h1: h1_bound(g, k, theta), contragredient_lhs, mackey, fibers, weighted })
}

/// All one-dimensional characters of the subgroup `K`, with values in the
/// roots of unity whose order is the exponent of `K/[K,K]`.
pub fn linear_characters<G: FiniteGroup + ?Sized>(g: &G, k: &[usize], field: &'static CycField) -> Result<Vec<MatrixRep>> {
    let derived = mask(g.order(), &commutator_subgroup(g, k));
    let m = k.iter().fold(1usize, |acc, &x| {
        let (mut y, mut e) = (x, 1);
        while !derived[y] {
            y = g.mul(y, x);
            e += 1;
        }
        num_integer::lcm(acc, e)
    });
    let n = field.conductor() as usize;
    if !n.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!("field of conductor {} lacks roots of order {m}", field.conductor())));
    }
    let gens = generators(g, k);
    let kset = mask(g.order(), k);
    let mut out = vec![];
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(vals) = extend_character(g, &gens, &choice, m, &kset) {
            let images: Vec<CycMatrix> = k.iter().map(|&x| CycMatrix::scalar(field, 1, &CycNumber::root_of_order(field, m as u32, vals[&x] as i64))).collect();
            out.push(MatrixRep::new(field, 1, g.order(), k.to_vec(), images, vec![])?);
        }
        let mut i = 0;
        loop {
            if i == gens.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < m {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn extend_character<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize], exps: &[usize], m: usize, kset: &[bool]) -> Option<HashMap<usize, usize>> {
    let mut val: HashMap<usize, usize> = HashMap::new();
    val.insert(g.identity(), 0);
    let mut stack = vec![g.identity()];
    while let Some(x) = stack.pop() {
        for (&s, &e) in gens.iter().zip(exps) {
            let y = g.mul(x, s);
            debug_assert!(kset[y]);
            let v = (val[&x] + e) % m;
            match val.get(&y) {
                Some(&old) if old != v => return None,
                Some(_) => {}
                None => {
                    val.insert(y, v);
                    stack.push(y);
                }
            }
        }
    }
    Some(val)
}

/// The Weil lift as a representation of the table group `Sp(W) ⋉ H`
/// (base special isomorphism): `(s, h) ↦ τ(h)ρ̂(s)`.
pub fn semidirect_weil_rep(table: &TableGroup, lift: &WeilLift, hg: &HeisenbergGroup) -> Result<MatrixRep> {
    let nh = hg.order();
    if table.order() != lift.group.order() * nh {
        return Err(Error::Dimension("table does not match Sp(W) x H".into()));
    }
    MatrixRep::from_fn(table, lift.field(), lift.dim(), table.elements(), |x| lift.semidirect_image(x / nh, x % nh))
}

/// Index of `(s, h)` in [`TableGroup::sp_semidirect_heisenberg`].
pub fn semidirect_index(hg: &HeisenbergGroup, s: usize, h: usize) -> usize {
    s * hg.order() + h
}

/// The subgroup `{(s, h)}` for `s` in a subset of `Sp(W)` and all `h`.
pub fn semidirect_subset(hg: &HeisenbergGroup, sp_subset: &[usize], h_subset: &[usize]) -> Subset {
    let mut out: Vec<usize> = sp_subset.iter().flat_map(|&s| h_subset.iter().map(move |&h| semidirect_index(hg, s, h))).collect();
    out.sort_unstable();
    out
}

/// Subgroup generated by the listed elements.
pub fn generated<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Subset {
    closure(g, gens)
}
