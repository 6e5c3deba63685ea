//! Exact arithmetic in the cyclotomic field `Q(ζ_N)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` modulo the
//! N-th cyclotomic polynomial, as integer numerators over one positive common
//! denominator. Values that fit in `i64` take a fast path with checked `i128`
//! intermediates; anything larger falls back to `BigInt`.
//!
//! The embedding `ζ_N ↦ e^{2πi/N}` is fixed throughout.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Precomputed data for `Q(ζ_N)`. Obtained through [`CycField::get`], which
/// interns one instance per conductor for the lifetime of the process.
#[derive(Debug)]
pub struct CycField {
    n: u32,
    phi: usize,
    cyclotomic: Vec<i64>,
    /// `x^k mod Φ_N` for `k < N`.
    powers: Vec<Vec<i64>>,
    units: Vec<u32>,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd] / den[dd];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

impl PartialEq for CycField {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n
    }
}

impl Eq for CycField {}

impl Hash for CycField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
    }
}

impl CycField {
    fn build(n: u32) -> CycField {
        assert!(n >= 1, "conductor must be positive");
        let cyclotomic = cyclotomic_poly(n);
        let phi = cyclotomic.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic Φ_N
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
            if phi == 1 {
                next[0] = 0;
            }
            for i in 0..phi {
                next[i] -= top * cyclotomic[i];
            }
            cur = next;
        }
        let units = (1..=n).filter(|&k| k.gcd(&n) == 1).map(|k| k % n).collect();
        CycField { n, phi, cyclotomic, powers, units }
    }

    /// Interned field of conductor `n`.
    pub fn get(n: u32) -> &'static CycField {
        static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static CycField>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = reg.lock().expect("field registry poisoned");
        guard.entry(n).or_insert_with(|| Box::leak(Box::new(CycField::build(n))))
    }

    /// The field used for a run at the odd prime `p`: conductor `lcm(4, p)`.
    pub fn for_prime(p: u64) -> &'static CycField {
        CycField::get((4 * p / p.gcd(&4)) as u32)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.cyclotomic
    }

    fn same(&self, other: &CycField) -> bool {
        std::ptr::eq(self, other)
    }
}

/// Coefficient ring used by the generic kernels: `i128` with overflow
/// detection, or `BigInt` which never overflows.
pub(crate) trait Coef: Clone + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_one(&self) -> bool;
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
}

impl Coef for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

pub(crate) fn normalize<T: Coef>(mut num: Vec<T>, mut den: T) -> Option<(Vec<T>, T)> {
    if num.iter().all(|c| c.is_zero()) {
        return Some((num.iter().map(|_| T::zero()).collect(), T::from_i64(1)));
    }
    let mut g = den.clone();
    for c in &num {
        if g.is_one() {
            break;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if den.is_neg() {
        g = g.neg()?;
    }
    if !g.is_one() {
        for c in num.iter_mut() {
            *c = c.div_exact(&g);
        }
        den = den.div_exact(&g);
    }
    Some((num, den))
}

/// Reduce a polynomial of arbitrary degree modulo `Φ_N` using the power table.
pub(crate) fn reduce<T: Coef>(f: &CycField, poly: &[T]) -> Option<Vec<T>> {
    let phi = f.phi;
    let mut out: Vec<T> = Vec::with_capacity(phi);
    for c in poly.iter().take(phi) {
        out.push(c.clone());
    }
    while out.len() < phi {
        out.push(T::zero());
    }
    for (k, c) in poly.iter().enumerate().skip(phi) {
        if c.is_zero() {
            continue;
        }
        let pw = &f.powers[k % f.n as usize];
        for (i, &r) in pw.iter().enumerate() {
            if r != 0 {
                out[i] = out[i].add(&c.mul(&T::from_i64(r))?)?;
            }
        }
    }
    Some(out)
}

fn add_kernel<T: Coef>(an: &[T], ad: &T, bn: &[T], bd: &T, negate_b: bool) -> Option<(Vec<T>, T)> {
    let g = ad.gcd(bd);
    let ma = bd.div_exact(&g);
    let mb = ad.div_exact(&g);
    let den = ad.mul(&ma)?;
    let mut num = Vec::with_capacity(an.len());
    for (a, b) in an.iter().zip(bn) {
        let x = a.mul(&ma)?;
        let y = b.mul(&mb)?;
        num.push(if negate_b { x.sub(&y)? } else { x.add(&y)? });
    }
    normalize(num, den)
}

fn mul_kernel<T: Coef>(f: &CycField, an: &[T], ad: &T, bn: &[T], bd: &T) -> Option<(Vec<T>, T)> {
    let phi = f.phi;
    let mut conv = vec![T::zero(); 2 * phi - 1];
    for (i, a) in an.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in bn.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            conv[i + j] = conv[i + j].add(&a.mul(b)?)?;
        }
    }
    let num = reduce(f, &conv)?;
    normalize(num, ad.mul(bd)?)
}

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    Small { num: Box<[i64]>, den: i64 },
    Big { num: Box<[BigInt]>, den: BigInt },
}

/// An exact element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycNumber {
    field: &'static CycField,
    repr: Repr,
}

impl CycNumber {
    pub(crate) fn from_i128_parts(field: &'static CycField, num: Vec<i128>, den: i128) -> Self {
        match normalize(num, den) {
            Some((num, den)) => Self::narrow_i128(field, num, den),
            None => unreachable!("normalization of i128 data cannot overflow except on i128::MIN"),
        }
    }

    fn narrow_i128(field: &'static CycField, num: Vec<i128>, den: i128) -> Self {
        let small: Option<Vec<i64>> = num.iter().map(|&c| i64::try_from(c).ok()).collect();
        match (small, i64::try_from(den).ok()) {
            (Some(num), Some(den)) => CycNumber { field, repr: Repr::Small { num: num.into(), den } },
            _ => CycNumber {
                field,
                repr: Repr::Big {
                    num: num.into_iter().map(BigInt::from).collect(),
                    den: BigInt::from(den),
                },
            },
        }
    }

    pub(crate) fn from_big_parts(field: &'static CycField, num: Vec<BigInt>, den: BigInt) -> Self {
        let (num, den) = normalize(num, den).expect("bigint normalization");
        let small: Option<Vec<i64>> = num.iter().map(|c| c.to_i64()).collect();
        match (small, den.to_i64()) {
            (Some(num), Some(den)) => CycNumber { field, repr: Repr::Small { num: num.into(), den } },
            _ => CycNumber { field, repr: Repr::Big { num: num.into(), den } },
        }
    }

    pub(crate) fn small_parts(&self) -> Option<(&[i64], i64)> {
        match &self.repr {
            Repr::Small { num, den } => Some((num, *den)),
            Repr::Big { .. } => None,
        }
    }

    pub(crate) fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.repr {
            Repr::Small { num, den } => (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den)),
            Repr::Big { num, den } => (num.to_vec(), den.clone()),
        }
    }

    fn wide(&self) -> Option<(Vec<i128>, i128)> {
        self.small_parts().map(|(n, d)| (n.iter().map(|&c| c as i128).collect(), d as i128))
    }

    pub fn zero(field: &'static CycField) -> Self {
        CycNumber { field, repr: Repr::Small { num: vec![0; field.phi].into(), den: 1 } }
    }

    pub fn one(field: &'static CycField) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &'static CycField, v: i64) -> Self {
        let mut num = vec![0i64; field.phi];
        num[0] = v;
        CycNumber { field, repr: Repr::Small { num: num.into(), den: 1 } }
    }

    /// The rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(field: &'static CycField, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let mut v = vec![0i128; field.phi];
        v[0] = num as i128;
        Self::from_i128_parts(field, v, den as i128)
    }

    /// Build from power-basis coefficients `coeffs[k] = (num, den)`; the vector
    /// may be longer than `φ(N)` and is reduced modulo `Φ_N`.
    pub fn from_rational_coeffs(field: &'static CycField, coeffs: &[(BigInt, BigInt)]) -> Result<Self> {
        let mut den = BigInt::one();
        for (_, d) in coeffs {
            if Zero::is_zero(d) {
                return Err(Error::InvalidArgument("zero denominator".into()));
            }
            den = den.lcm(d);
        }
        let scaled: Vec<BigInt> = coeffs.iter().map(|(n, d)| n * (&den / d)).collect();
        let num = reduce(field, &scaled).expect("bigint reduction");
        Ok(Self::from_big_parts(field, num, den))
    }

    /// `ζ_N^k` in the field of conductor `N`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let field = CycField::get(n);
        Self::root_in(field, k)
    }

    /// `ζ_N^k` where `N` is the conductor of `field`.
    pub fn root_in(field: &'static CycField, k: i64) -> Self {
        let idx = k.rem_euclid(field.n as i64) as usize;
        CycNumber { field, repr: Repr::Small { num: field.powers[idx].clone().into(), den: 1 } }
    }

    /// `ζ_m^k` inside `field`; `m` must divide the conductor.
    pub fn root_of_order(field: &'static CycField, m: u32, k: i64) -> Self {
        assert!(field.n.is_multiple_of(m), "order {m} does not divide conductor {}", field.n);
        Self::root_in(field, k * (field.n / m) as i64)
    }

    /// `i = ζ_4`; requires `4 | N`.
    pub fn imaginary_unit(field: &'static CycField) -> Self {
        Self::root_of_order(field, 4, 1)
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    fn check_field(&self, o: &CycNumber) {
        assert!(
            self.field.same(o.field),
            "conductor mismatch: {} vs {}",
            self.field.n,
            o.field.n
        );
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0),
            Repr::Big { .. } => false,
        }
    }

    fn addsub(&self, o: &CycNumber, negate: bool) -> CycNumber {
        self.check_field(o);
        if let (Some((an, ad)), Some((bn, bd))) = (self.wide(), o.wide()) {
            if let Some((n, d)) = add_kernel(&an, &ad, &bn, &bd, negate) {
                return Self::narrow_i128(self.field, n, d);
            }
        }
        let (an, ad) = self.big_parts();
        let (bn, bd) = o.big_parts();
        let (n, d) = add_kernel(&an, &ad, &bn, &bd, negate).expect("bigint add");
        Self::from_big_parts(self.field, n, d)
    }

    pub fn add(&self, o: &CycNumber) -> CycNumber {
        self.addsub(o, false)
    }

    pub fn sub(&self, o: &CycNumber) -> CycNumber {
        self.addsub(o, true)
    }

    pub fn mul(&self, o: &CycNumber) -> CycNumber {
        self.check_field(o);
        if self.is_zero() || o.is_zero() {
            return CycNumber::zero(self.field);
        }
        if let (Some((an, ad)), Some((bn, bd))) = (self.wide(), o.wide()) {
            if let Some((n, d)) = mul_kernel(self.field, &an, &ad, &bn, &bd) {
                return Self::narrow_i128(self.field, n, d);
            }
        }
        let (an, ad) = self.big_parts();
        let (bn, bd) = o.big_parts();
        let (n, d) = mul_kernel(self.field, &an, &ad, &bn, &bd).expect("bigint mul");
        Self::from_big_parts(self.field, n, d)
    }

    pub fn neg(&self) -> CycNumber {
        match &self.repr {
            Repr::Small { num, den } if num.iter().all(|&c| c != i64::MIN) => CycNumber {
                field: self.field,
                repr: Repr::Small { num: num.iter().map(|&c| -c).collect(), den: *den },
            },
            _ => {
                let (n, d) = self.big_parts();
                Self::from_big_parts(self.field, n.into_iter().map(|c| -c).collect(), d)
            }
        }
    }

    pub fn scale_int(&self, k: i64) -> CycNumber {
        self.mul(&CycNumber::from_int(self.field, k))
    }

    /// The Galois automorphism `ζ ↦ ζ^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: i64) -> CycNumber {
        let n = self.field.n as i64;
        assert_eq!(k.gcd(&n), 1, "galois exponent must be a unit");
        let (num, den) = self.big_parts();
        let mut out = vec![<BigInt as Zero>::zero(); self.field.phi];
        for (i, c) in num.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let idx = ((i as i64) * k).rem_euclid(n) as usize;
            for (j, &r) in self.field.powers[idx].iter().enumerate() {
                if r != 0 {
                    out[j] += c * r;
                }
            }
        }
        Self::from_big_parts(self.field, out, den)
    }

    /// Complex conjugation, i.e. `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycNumber {
        self.galois(self.field.n as i64 - 1)
    }

    /// If the element is rational, its value as `(num, den)` with `den > 0`.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        let (num, den) = self.big_parts();
        if num[1..].iter().all(Zero::is_zero) {
            Some((num[0].clone(), den))
        } else {
            None
        }
    }

    /// If the element is an integer, its value.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().and_then(|(n, d)| if One::is_one(&d) { Some(n) } else { None })
    }

    /// Multiplicative inverse, via the norm to `Q`.
    pub fn inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        let mut prod = CycNumber::one(self.field);
        for &k in &self.field.units {
            if k != 1 {
                prod = prod.mul(&self.galois(k as i64));
            }
        }
        let norm = self.mul(&prod);
        let (nn, nd) = norm.as_rational().expect("norm of a cyclotomic number is rational");
        let (pn, pd) = prod.big_parts();
        // prod / (nn/nd) = prod * nd / nn
        let num: Vec<BigInt> = pn.into_iter().map(|c| c * &nd).collect();
        Ok(Self::from_big_parts(self.field, num, pd * nn))
    }

    pub fn div(&self, o: &CycNumber) -> Result<CycNumber> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> CycNumber {
        let mut base = self.clone();
        let mut acc = CycNumber::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Diagnostic floating-point value under the fixed embedding.
    pub fn to_complex(&self) -> (f64, f64) {
        let (num, den) = self.big_parts();
        let d = den.to_f64().unwrap_or(f64::INFINITY);
        let n = self.field.n as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(0.0) / d;
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }

    /// Sign of a real element: exact for rationals; otherwise decided from the
    /// embedding only when the value is far from zero relative to the rounding
    /// error, `None` if it cannot be certified or the element is not real.
    pub fn real_sign(&self) -> Option<i32> {
        if let Some((n, _)) = self.as_rational() {
            return Some(if Zero::is_zero(&n) { 0 } else if Signed::is_negative(&n) { -1 } else { 1 });
        }
        if !self.is_real() {
            return None;
        }
        let (num, den) = self.big_parts();
        let d = den.to_f64()?;
        let bound: f64 = num.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs() / d).sum::<f64>() * 1e-12;
        let (re, _) = self.to_complex();
        if re.abs() > bound.max(1e-300) {
            Some(if re > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<(BigInt, BigInt)> {
        let (num, den) = self.big_parts();
        num.into_iter()
            .map(|c| {
                let g = Integer::gcd(&c, &den);
                if Zero::is_zero(&c) {
                    (c, BigInt::one())
                } else {
                    (&c / &g, &den / &g)
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        fn int(v: &BigInt) -> Value {
            match v.to_i64() {
                Some(x) => json!(x),
                None => json!(v.to_string()),
            }
        }
        let coeffs: Vec<Value> = self.coeffs().iter().map(|(n, d)| json!([int(n), int(d)])).collect();
        json!({ "N": self.field.n, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<CycNumber> {
        fn int(v: &Value) -> Result<BigInt> {
            match v {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Parse(format!("non-integer coefficient {n}"))),
                Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer {s}"))),
                _ => Err(Error::Parse("coefficient must be an integer".into())),
            }
        }
        let n = v
            .get("N")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1 && n <= u32::MAX as u64)
            .ok_or_else(|| Error::Parse("missing or invalid N".into()))?;
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for c in arr {
            let pair = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("coefficient must be [num, den]".into()))?;
            coeffs.push((int(&pair[0])?, int(&pair[1])?));
        }
        CycNumber::from_rational_coeffs(CycField::get(n as u32), &coeffs)
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, o: &Self) -> bool {
        if !self.field.same(o.field) {
            return false;
        }
        match (&self.repr, &o.repr) {
            (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) => da == db && a == b,
            (Repr::Big { num: a, den: da }, Repr::Big { num: b, den: db }) => da == db && a == b,
            _ => false,
        }
    }
}

impl Eq for CycNumber {}

impl serde::Serialize for CycNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}


impl Hash for CycNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        match &self.repr {
            Repr::Small { num, den } => {
                num.hash(state);
                den.hash(state);
            }
            Repr::Big { num, den } => {
                num.hash(state);
                den.hash(state);
            }
        }
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, (n, d)) in self.coeffs().iter().enumerate() {
            if Zero::is_zero(n) {
                continue;
            }
            let neg = Signed::is_negative(n);
            let a = n.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if One::is_one(d) { a.to_string() } else { format!("{a}/{d}") };
            match (k, One::is_one(&a) && One::is_one(d)) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "z{}", self.field.n)?,
                (1, false) => write!(f, "{coef}*z{}", self.field.n)?,
                (_, true) => write!(f, "z{}^{k}", self.field.n)?,
                (_, false) => write!(f, "{coef}*z{}^{k}", self.field.n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $fun:ident) => {
        impl std::ops::$tr<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $m(self, o: &CycNumber) -> CycNumber {
                CycNumber::$fun(self, o)
            }
        }
        impl std::ops::$tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, o: CycNumber) -> CycNumber {
                CycNumber::$fun(&self, &o)
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber::neg(self)
    }
}

impl std::ops::Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber::neg(&self)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol `(t/p)` for an odd prime `p`.
pub fn legendre(t: i64, p: u64) -> i64 {
    let p = p as i64;
    let t = t.rem_euclid(p);
    if t == 0 {
        return 0;
    }
    let mut acc = 1i64;
    let mut base = t;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// The quadratic Gauss sum `g(p) = Σ_t (t/p) ζ_p^t`, in the field of conductor
/// `lcm(4, p)`. Its square is `(−1)^{(p−1)/2} p`.
pub fn gauss_sum(p: u64) -> Result<CycNumber> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("gauss_sum needs an odd prime, got {p}")));
    }
    let field = CycField::for_prime(p);
    let mut acc = CycNumber::zero(field);
    for t in 1..p as i64 {
        let term = CycNumber::root_of_order(field, p as u32, t);
        acc = if legendre(t, p) == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(CycField::get(1).cyclotomic_polynomial(), &[-1, 1]);
        assert_eq!(CycField::get(3).cyclotomic_polynomial(), &[1, 1, 1]);
        assert_eq!(CycField::get(4).cyclotomic_polynomial(), &[1, 0, 1]);
        assert_eq!(CycField::get(12).cyclotomic_polynomial(), &[1, 0, -1, 0, 1]);
        assert_eq!(CycField::get(28).degree(), 12);
    }

    #[test]
    fn roots_of_unity() {
        assert!(CycNumber::root_of_unity(3, 0).is_one());
        let w = CycNumber::root_of_unity(3, 1);
        let s = &(&w * &w) + &w;
        assert!((&s + &CycNumber::one(w.field())).is_zero());
        let i = CycNumber::root_of_unity(4, 1);
        assert_eq!(&i * &i, CycNumber::from_int(i.field(), -1));
        let z = CycNumber::root_of_unity(20, 3);
        assert!(z.pow(20).is_one());
        assert!(!z.pow(10).is_one());
    }

    #[test]
    fn gauss_sum_squares() {
        let g3 = gauss_sum(3).unwrap();
        let f = g3.field();
        let w = CycNumber::root_of_order(f, 3, 1);
        assert_eq!(g3, &w - &w.pow(2));
        assert_eq!(&g3 * &g3, CycNumber::from_int(f, -3));
        let g5 = gauss_sum(5).unwrap();
        assert_eq!(&g5 * &g5, CycNumber::from_int(g5.field(), 5));
        let g7 = gauss_sum(7).unwrap();
        assert_eq!(&g7 * &g7, CycNumber::from_int(g7.field(), -7));
        assert!(gauss_sum(2).is_err());
        assert!(gauss_sum(9).is_err());
    }

    #[test]
    fn inverse_and_json() {
        let f = CycField::get(28);
        let a = &CycNumber::root_in(f, 3) + &CycNumber::from_ratio(f, 2, 7);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        let back = CycNumber::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let f = CycField::get(12);
        let big = CycNumber::from_int(f, i64::MAX);
        let sq = &big * &big;
        let (n, _) = sq.as_rational().unwrap();
        assert_eq!(n, BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = sq.div(&big).unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn display() {
        let f = CycField::get(12);
        let a = &CycNumber::root_in(f, 1) - &CycNumber::from_ratio(f, 1, 2);
        assert_eq!(a.to_string(), "-1/2 + z12");
        assert_eq!(CycNumber::zero(f).to_string(), "0");
    }
}
