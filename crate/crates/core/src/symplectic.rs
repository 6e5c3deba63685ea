//! Symplectic spaces over `F_p`, polarizations, and the groups `Sp(W)`, `M`,
//! `N`, `P` together with the antisymplectic coset `S⁻`.
//!
//! Basis convention: `e_1..e_ℓ` span `W⁺` and `e_{ℓ+1}..e_{2ℓ}` span `W⁻`;
//! the form is `⟨v,w⟩ = ᵗv j w` with `j = [[0, 1_ℓ], [−1_ℓ, 0]]`.

use std::collections::{HashMap, HashSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::modular::{columns_matrix, modulo, ModMatrix};
use crate::scalar::is_prime;

/// Size limits for exhaustive enumeration of `Sp(W)`.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationGuard {
    pub max_p_ell1: u64,
    pub max_p_ell2: u64,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard { max_p_ell1: 7, max_p_ell2: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    p: u64,
    ell: usize,
    form: ModMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpElement {
    pub matrix: ModMatrix,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub plus: Vec<Vec<u64>>,
    pub minus: Vec<Vec<u64>>,
}

impl SymplecticSpace {
    pub fn new(p: u64, ell: usize) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p must be an odd prime, got {p}")));
        }
        if ell == 0 {
            return Err(Error::InvalidArgument("ell must be positive".into()));
        }
        let n = 2 * ell;
        let form = ModMatrix::from_fn(p, n, n, |r, c| {
            if r < ell && c == r + ell {
                1
            } else if r >= ell && c + ell == r {
                -1
            } else {
                0
            }
        });
        Ok(SymplecticSpace { p, ell, form })
    }

    /// A space with a caller-supplied form, which must be antisymmetric and invertible.
    pub fn with_form(p: u64, form: ModMatrix) -> Result<Self> {
        let base = SymplecticSpace::new(p, (form.rows() / 2).max(1))?;
        if form.rows() != form.cols() || form.rows() % 2 == 1 || form.modulus() != p {
            return Err(Error::Dimension("form must be square of even size over F_p".into()));
        }
        if form.transpose() != form.neg() || form.det_prime() == 0 {
            return Err(Error::InvalidArgument("form must be antisymmetric and invertible".into()));
        }
        Ok(SymplecticSpace { form, ..base })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn dim(&self) -> usize {
        2 * self.ell
    }

    pub fn form(&self) -> &ModMatrix {
        &self.form
    }

    /// `½ = (p+1)/2` in `F_p`.
    pub fn half(&self) -> u64 {
        self.p.div_ceil(2)
    }

    pub fn pairing(&self, v: &[u64], w: &[u64]) -> u64 {
        let jw = self.form.apply(w);
        v.iter().zip(&jw).map(|(a, b)| a * b % self.p).sum::<u64>() % self.p
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn vector_count(&self) -> usize {
        (self.p as usize).pow(self.dim() as u32)
    }

    pub fn vector_index(&self, v: &[u64]) -> usize {
        v.iter().rev().fold(0usize, |acc, &x| acc * self.p as usize + (x % self.p) as usize)
    }

    pub fn vector_from_index(&self, mut idx: usize) -> Vec<u64> {
        let p = self.p as usize;
        (0..self.dim())
            .map(|_| {
                let x = idx % p;
                idx /= p;
                x as u64
            })
            .collect()
    }

    pub fn all_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.vector_count()).map(|i| self.vector_from_index(i)).collect()
    }

    pub fn add_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn neg_vec(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn scale_vec(&self, k: i64, a: &[u64]) -> Vec<u64> {
        let k = modulo(k, self.p);
        a.iter().map(|x| x * k % self.p).collect()
    }

    fn check_shape(&self, m: &ModMatrix) -> Result<()> {
        if m.rows() != self.dim() || m.cols() != self.dim() || m.modulus() != self.p {
            return Err(Error::Dimension(format!("expected a {0}x{0} matrix over F_{1}", self.dim(), self.p)));
        }
        Ok(())
    }

    pub fn is_symplectic(&self, m: &ModMatrix) -> Result<bool> {
        self.check_shape(m)?;
        Ok(m.transpose().mul(&self.form).mul(m) == self.form)
    }

    pub fn is_antisymplectic(&self, m: &ModMatrix) -> Result<bool> {
        self.check_shape(m)?;
        Ok(m.transpose().mul(&self.form).mul(m) == self.form.neg())
    }

    pub fn element(&self, m: ModMatrix) -> Result<SpElement> {
        if self.is_symplectic(&m)? {
            Ok(SpElement { matrix: m, sign: 1 })
        } else if self.is_antisymplectic(&m)? {
            Ok(SpElement { matrix: m, sign: -1 })
        } else {
            Err(Error::NotMember("matrix is neither symplectic nor antisymplectic".into()))
        }
    }

    pub fn element_from_rows(&self, rows: &[Vec<i64>]) -> Result<SpElement> {
        self.element(ModMatrix::from_rows(self.p, rows)?)
    }

    pub fn identity(&self) -> SpElement {
        SpElement { matrix: ModMatrix::identity(self.p, self.dim()), sign: 1 }
    }

    pub fn weyl(&self) -> SpElement {
        SpElement { matrix: self.form.clone(), sign: 1 }
    }

    /// `m(y) = diag(y, ᵗy⁻¹)`.
    pub fn m_element(&self, y: &ModMatrix) -> Result<SpElement> {
        if y.rows() != self.ell || y.cols() != self.ell {
            return Err(Error::Dimension("y must be ell x ell".into()));
        }
        let yit = y.inverse()?.transpose();
        let l = self.ell;
        let m = ModMatrix::from_fn(self.p, 2 * l, 2 * l, |r, c| match (r < l, c < l) {
            (true, true) => y.get(r, c) as i64,
            (false, false) => yit.get(r - l, c - l) as i64,
            _ => 0,
        });
        self.element(m)
    }

    /// `n(b) = [[1, b], [0, 1]]` for symmetric `b`.
    pub fn n_element(&self, b: &ModMatrix) -> Result<SpElement> {
        if b.rows() != self.ell || b.cols() != self.ell || b.transpose() != *b {
            return Err(Error::InvalidArgument("b must be a symmetric ell x ell matrix".into()));
        }
        let l = self.ell;
        let m = ModMatrix::from_fn(self.p, 2 * l, 2 * l, |r, c| {
            if r == c {
                1
            } else if r < l && c >= l {
                b.get(r, c - l) as i64
            } else {
                0
            }
        });
        self.element(m)
    }

    pub fn m_element_scalar(&self, y: i64) -> Result<SpElement> {
        self.m_element(&ModMatrix::identity(self.p, self.ell).scale(y))
    }

    pub fn n_element_scalar(&self, b: i64) -> Result<SpElement> {
        self.n_element(&ModMatrix::identity(self.p, self.ell).scale(b))
    }

    fn blocks(&self, s: &ModMatrix) -> (ModMatrix, ModMatrix, ModMatrix, ModMatrix) {
        let l = self.ell;
        (s.block(0, l, 0, l), s.block(0, l, l, 2 * l), s.block(l, 2 * l, 0, l), s.block(l, 2 * l, l, 2 * l))
    }

    /// `s ∈ P`: symplectic and stabilizes `W⁺`.
    pub fn in_p(&self, s: &SpElement) -> bool {
        s.sign == 1 && self.blocks(&s.matrix).2.is_zero()
    }

    pub fn in_m(&self, s: &SpElement) -> bool {
        let (_, b, c, _) = self.blocks(&s.matrix);
        s.sign == 1 && b.is_zero() && c.is_zero()
    }

    pub fn in_n(&self, s: &SpElement) -> bool {
        let (a, _, c, d) = self.blocks(&s.matrix);
        s.sign == 1 && c.is_zero() && a.is_identity() && d.is_identity()
    }

    fn quadratic_sign(&self, det: u64) -> i64 {
        let e = ModMatrix::from_fn(self.p, 1, 1, |_, _| det as i64).pow((self.p - 1) / 2).get(0, 0);
        if e == 1 {
            1
        } else {
            -1
        }
    }

    /// `χ^M(m(y)) = (det y)^{(p−1)/2}`.
    pub fn chi_m(&self, s: &SpElement) -> Result<i64> {
        if !self.in_m(s) {
            return Err(Error::NotMember("element is not in M".into()));
        }
        Ok(self.quadratic_sign(self.blocks(&s.matrix).0.det_prime()))
    }

    /// `χ^P(mn) = χ^M(m)`; the M-part of `g ∈ P` has upper-left block equal to that of `g`.
    pub fn chi_p(&self, s: &SpElement) -> Result<i64> {
        if !self.in_p(s) {
            return Err(Error::NotMember("element does not stabilize W+".into()));
        }
        Ok(self.quadratic_sign(self.blocks(&s.matrix).0.det_prime()))
    }

    /// Factor `g ∈ P` as `m·n`.
    pub fn levi_decomposition(&self, s: &SpElement) -> Result<(SpElement, SpElement)> {
        if !self.in_p(s) {
            return Err(Error::NotMember("element does not stabilize W+".into()));
        }
        let m = self.m_element(&self.blocks(&s.matrix).0)?;
        let n = m.inverse().compose(s);
        debug_assert!(self.in_n(&n));
        Ok((m, n))
    }

    pub fn standard_polarization(&self) -> Polarization {
        Polarization {
            plus: (0..self.ell).map(|i| self.basis_vector(i)).collect(),
            minus: (self.ell..self.dim()).map(|i| self.basis_vector(i)).collect(),
        }
    }

    fn span_rank(&self, vecs: &[Vec<u64>]) -> usize {
        if vecs.is_empty() {
            return 0;
        }
        columns_matrix(self.p, self.dim(), vecs).rank_prime()
    }

    pub fn is_totally_isotropic(&self, vecs: &[Vec<u64>]) -> bool {
        vecs.iter().all(|a| vecs.iter().all(|b| self.pairing(a, b) == 0))
    }

    pub fn validate_polarization(&self, pol: &Polarization) -> Result<()> {
        let ok = pol.plus.len() == self.ell
            && pol.minus.len() == self.ell
            && self.is_totally_isotropic(&pol.plus)
            && self.is_totally_isotropic(&pol.minus)
            && self.span_rank(&[pol.plus.clone(), pol.minus.clone()].concat()) == self.dim();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("not a polarization".into()))
        }
    }

    /// `ker(s−1)` and `ker(s+1)` for `s² = 1`.
    pub fn eigen_polarization(&self, s: &SpElement) -> Result<(Vec<Vec<u64>>, Vec<Vec<u64>>)> {
        if !s.matrix.mul(&s.matrix).is_identity() {
            return Err(Error::InvalidArgument("element is not of order dividing two".into()));
        }
        let id = ModMatrix::identity(self.p, self.dim());
        Ok((s.matrix.sub(&id).kernel_prime(), s.matrix.add(&id).kernel_prime()))
    }

    /// The order-two antisymplectic map acting by `+1` on `W⁺` and `−1` on `W⁻`.
    pub fn polarization_to_involution(&self, pol: &Polarization) -> Result<SpElement> {
        self.validate_polarization(pol)?;
        let basis = columns_matrix(self.p, self.dim(), &[pol.plus.clone(), pol.minus.clone()].concat());
        let l = self.ell;
        let d = ModMatrix::from_fn(self.p, 2 * l, 2 * l, |r, c| if r != c { 0 } else if r < l { 1 } else { -1 });
        let m = basis.mul(&d).mul(&basis.inverse()?);
        self.element(m)
    }

    /// Whether `span(a) = span(b)`.
    pub fn same_subspace(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
        let ra = self.span_rank(a);
        ra == self.span_rank(b) && ra == self.span_rank(&[a.to_vec(), b.to_vec()].concat())
    }

    /// All elements of `Sp(W)`, within the guard.
    pub fn enumerate_sp_guarded(&self, guard: EnumerationGuard) -> Result<Vec<SpElement>> {
        match self.ell {
            1 if self.p <= guard.max_p_ell1 => {
                let p = self.p as i64;
                let mut out = vec![];
                for a in 0..p {
                    for b in 0..p {
                        for c in 0..p {
                            for d in 0..p {
                                if (a * d - b * c).rem_euclid(p) == 1 {
                                    let m = ModMatrix::from_rows(self.p, &[vec![a, b], vec![c, d]])?;
                                    out.push(SpElement { matrix: m, sign: 1 });
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            2 if self.p <= guard.max_p_ell2 => Ok(self.sp_by_closure()),
            _ => Err(Error::Guard(format!("enumeration of Sp({}, F_{}) exceeds the guard", self.dim(), self.p))),
        }
    }

    pub fn enumerate_sp(&self) -> Result<Vec<SpElement>> {
        self.enumerate_sp_guarded(EnumerationGuard::default())
    }

    /// Generators of `Sp(W)`: `m(y)` for elementary `y`, `n(b)` for a basis of symmetric `b`, and `j`.
    pub fn sp_generators(&self) -> Vec<SpElement> {
        let l = self.ell;
        let mut gens = vec![self.weyl()];
        let mut prim = 2;
        while (1..self.p - 1).any(|e| ModMatrix::identity(self.p, 1).scale(prim).pow(e).is_identity()) {
            prim += 1;
        }
        for i in 0..l {
            let mut y = ModMatrix::identity(self.p, l);
            y.set(i, i, prim as u64);
            gens.push(self.m_element(&y).expect("diagonal unit"));
            for k in 0..l {
                if k != i {
                    let mut y = ModMatrix::identity(self.p, l);
                    y.set(i, k, 1);
                    gens.push(self.m_element(&y).expect("transvection"));
                }
            }
            for k in i..l {
                let mut b = ModMatrix::zeros(self.p, l, l);
                b.set(i, k, 1);
                b.set(k, i, 1);
                gens.push(self.n_element(&b).expect("symmetric"));
            }
        }
        gens
    }

    fn sp_by_closure(&self) -> Vec<SpElement> {
        let gens = self.sp_generators();
        let id = self.identity();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        seen.insert(id.matrix.data().to_vec());
        let mut out = vec![id.clone()];
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = x.compose(g);
                if seen.insert(y.matrix.data().to_vec()) {
                    out.push(y.clone());
                    stack.push(y);
                }
            }
        }
        out.sort();
        out
    }

    /// `S⁻ = S·δ` with `δ = diag(1_ℓ, −1_ℓ)`.
    pub fn enumerate_antisymplectic(&self) -> Result<Vec<SpElement>> {
        let delta = self.polarization_to_involution(&self.standard_polarization())?;
        Ok(self.enumerate_sp()?.iter().map(|s| s.compose(&delta)).collect())
    }

    pub fn sp_index(elements: &[SpElement]) -> HashMap<Vec<u64>, usize> {
        elements.iter().enumerate().map(|(i, s)| (s.matrix.data().to_vec(), i)).collect()
    }
}

impl SpElement {
    pub fn compose(&self, o: &SpElement) -> SpElement {
        SpElement { matrix: self.matrix.mul(&o.matrix), sign: self.sign * o.sign }
    }

    pub fn inverse(&self) -> SpElement {
        SpElement { matrix: self.matrix.inverse().expect("symplectic matrices are invertible"), sign: self.sign }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.matrix.apply(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn order(&self) -> usize {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }

    pub fn to_json(&self) -> Value {
        json!(self.matrix.to_rows())
    }
}

/// An enumerated `Sp(W)` with a multiplication table, as a [`FiniteGroup`].
#[derive(Clone, Debug)]
pub struct SpTable {
    pub elements: Vec<SpElement>,
    index: HashMap<Vec<u64>, usize>,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl SpTable {
    /// Identity is moved to index 0.
    pub fn new(mut elements: Vec<SpElement>) -> Result<Self> {
        let n = elements.len();
        if n > 4096 {
            return Err(Error::Guard("multiplication table limited to 4096 elements".into()));
        }
        let id = elements.iter().position(SpElement::is_identity).ok_or_else(|| Error::InvalidArgument("identity missing".into()))?;
        elements.swap(0, id);
        let index = SymplecticSpace::sp_index(&elements);
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = a.compose(b);
                table[i * n + j] = *index.get(c.matrix.data()).ok_or_else(|| Error::InvalidArgument("list not closed".into()))? as u32;
            }
        }
        let inverse = (0..n).map(|i| (0..n).find(|&j| table[i * n + j] == 0).expect("inverse exists") as u32).collect();
        Ok(SpTable { elements, index, table, inverse })
    }

    pub fn index_of(&self, s: &SpElement) -> Option<usize> {
        self.index.get(s.matrix.data()).copied()
    }
}

impl crate::group::FiniteGroup for SpTable {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_conventions() {
        let w = SymplecticSpace::new(3, 1).unwrap();
        assert_eq!(w.pairing(&[1, 0], &[0, 1]), 1);
        assert_eq!(w.pairing(&[0, 1], &[1, 0]), 2);
        assert!(w.is_symplectic(&w.weyl().matrix).unwrap());
        let d21 = ModMatrix::from_rows(3, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!w.is_symplectic(&d21).unwrap());
        let d22 = ModMatrix::from_rows(3, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert!(w.is_symplectic(&d22).unwrap());
        let swap = ModMatrix::from_rows(3, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(w.is_antisymplectic(&swap).unwrap());
        let bad = ModMatrix::identity(3, 4);
        assert!(w.is_symplectic(&bad).is_err());
    }

    #[test]
    fn chi_values() {
        let w5 = SymplecticSpace::new(5, 1).unwrap();
        assert_eq!(w5.chi_m(&w5.m_element_scalar(2).unwrap()).unwrap(), -1);
        assert_eq!(w5.chi_m(&w5.m_element_scalar(4).unwrap()).unwrap(), 1);
        let g = w5.m_element_scalar(2).unwrap().compose(&w5.n_element_scalar(1).unwrap());
        assert_eq!(w5.chi_p(&g).unwrap(), -1);
        assert!(w5.chi_m(&g).is_err());
        let w7 = SymplecticSpace::new(7, 1).unwrap();
        assert_eq!(w7.chi_m(&w7.m_element_scalar(2).unwrap()).unwrap(), 1);
        assert!(w7.chi_p(&w7.weyl()).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        for (p, n) in [(3, 24), (5, 120), (7, 336)] {
            assert_eq!(SymplecticSpace::new(p, 1).unwrap().enumerate_sp().unwrap().len(), n);
        }
        assert!(SymplecticSpace::new(11, 1).unwrap().enumerate_sp().is_err());
    }

    #[test]
    fn involution_round_trip() {
        let w = SymplecticSpace::new(5, 1).unwrap();
        let pol = w.standard_polarization();
        let s = w.polarization_to_involution(&pol).unwrap();
        assert_eq!(s.matrix.to_rows(), vec![vec![1, 0], vec![0, 4]]);
        assert_eq!(s.sign, -1);
        let (plus, minus) = w.eigen_polarization(&s).unwrap();
        assert!(w.same_subspace(&plus, &pol.plus));
        assert!(w.same_subspace(&minus, &pol.minus));
        let swapped = Polarization { plus: pol.minus.clone(), minus: pol.plus.clone() };
        let t = w.polarization_to_involution(&swapped).unwrap();
        assert_eq!(t.matrix, s.matrix.neg());
        let (all, none) = w.eigen_polarization(&w.identity()).unwrap();
        assert_eq!((all.len(), none.len()), (2, 0));
    }
}
