//! Exact arithmetic in the tower GF(p) ⊆ GF(q) ⊆ GF(q^t), with q = p^e.
//!
//! Every element is stored in one absolute representation: a polynomial of
//! degree below `e·t` over GF(p), reduced modulo a fixed irreducible of degree
//! `e·t`, packed into a `u32` as base-p digits (bit `i` is the coefficient of
//! `ξ^i` when p = 2). The subfield GF(q) is the embedded copy generated by a
//! root of the degree-`e` modulus; membership is the Frobenius fixpoint test
//! `x^q = x`.
//!
//! Fields with at most 2^16 elements get log/antilog tables. The polynomial
//! routines stay available as [`FieldTower::mul_generic`] so the two paths can
//! be compared bit for bit.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default limit on the number of items any enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

const TABLE_LIMIT: u64 = 1 << 16;
const ORDER_LIMIT: u64 = 1 << 31;

/// A field element in the absolute representation of its tower.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A level of the tower, from the prime field up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// GF(p)
    Prime,
    /// GF(q)
    Sub,
    /// GF(q^t)
    Top,
}

/// Either `"auto"` or an explicit little-endian coefficient list (leading 1 included).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(untagged)]
pub enum ModulusSpec {
    Named(String),
    Coeffs(Vec<u32>),
}

impl Default for ModulusSpec {
    fn default() -> Self {
        ModulusSpec::Named("auto".into())
    }
}

/// Field description as it appears in configuration files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct FieldConfig {
    pub p: u32,
    pub e: u32,
    pub t: u32,
    /// Modulus of the top field, degree `e·t` over GF(p).
    #[serde(default)]
    pub modulus: ModulusSpec,
    /// Modulus of GF(q), degree `e` over GF(p).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_modulus: Option<ModulusSpec>,
}

struct LogTables {
    /// `exp[i] = g^i`, doubled so that `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The chain GF(p) ⊆ GF(q) ⊆ GF(q^t). Immutable once built.
pub struct FieldTower {
    p: u32,
    e: u32,
    t: u32,
    deg: usize,
    order: u32,
    q: u32,
    modulus: Vec<u32>,
    sub_modulus: Vec<u32>,
    sub_gen: Elem,
    pow_p: Vec<u32>,
    tables: Option<LogTables>,
    /// Powers `ξ^j`, `j < t`, of the tower generator.
    xi_pows: Vec<Elem>,
    /// Powers `g^a`, `a < e`, of the subfield generator.
    sub_pows: Vec<Elem>,
    /// Inverse of the GF(p)-matrix whose rows are the digits of `g^a ξ^j`.
    expand_inv: Vec<Vec<u32>>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("t", &self.t)
            .field("modulus", &self.modulus)
            .field("sub_modulus", &self.sub_modulus)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.t == other.t
            && self.modulus == other.modulus
            && self.sub_modulus == other.sub_modulus
            && self.sub_gen == other.sub_gen
    }
}

impl Eq for FieldTower {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, e))
}

// ---------------------------------------------------------------------------
// Polynomials over GF(p), little-endian coefficient vectors.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is small; Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (factor as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    poly_trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut x = low;
            for _ in 0..k {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `d` whose lower coefficients, read as a
/// base-p number with the constant term least significant, are smallest.
pub fn least_irreducible(p: u32, d: usize) -> Vec<u32> {
    let count = (p as u64).pow(d as u32);
    for low in 0..count {
        let mut f = Vec::with_capacity(d + 1);
        let mut x = low;
        for _ in 0..d {
            f.push((x % p as u64) as u32);
            x /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn factor_distinct(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Inverts a square matrix over GF(p); `None` when singular.
fn invert_mod_p(m: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut a: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = inv_mod_p(a[col][col], p) as u64;
        for x in a[col].iter_mut() {
            *x = (*x as u64 * inv % p as u64) as u32;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col] as u64;
                for c in 0..2 * n {
                    let sub = (f * a[col][c] as u64 % p as u64) as u32;
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl FieldTower {
    /// Builds the tower with automatically chosen moduli.
    pub fn new(p: u32, e: u32, t: u32) -> Result<Self> {
        Self::with_moduli(p, e, t, None, None)
    }

    /// Builds GF(q) ⊆ GF(q^t) from the prime power `q`.
    pub fn from_q(q: u32, t: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, e, t)
    }

    pub fn from_config(cfg: &FieldConfig) -> Result<Self> {
        fn resolve(spec: &ModulusSpec) -> Result<Option<Vec<u32>>> {
            match spec {
                ModulusSpec::Named(name) if name == "auto" => Ok(None),
                ModulusSpec::Named(name) => Err(Error::InvalidField(format!(
                    "unknown modulus selector `{name}` (expected \"auto\" or a coefficient list)"
                ))),
                ModulusSpec::Coeffs(c) => Ok(Some(c.clone())),
            }
        }
        let top = resolve(&cfg.modulus)?;
        let sub = match &cfg.sub_modulus {
            Some(spec) => resolve(spec)?,
            None => None,
        };
        Self::with_moduli(cfg.p, cfg.e, cfg.t, top, sub)
    }

    /// Builds the tower from explicit moduli (little-endian, monic).
    pub fn with_moduli(
        p: u32,
        e: u32,
        t: u32,
        modulus: Option<Vec<u32>>,
        sub_modulus: Option<Vec<u32>>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if e == 0 || t == 0 {
            return Err(Error::InvalidField("e and t must be positive".into()));
        }
        let deg = (e * t) as usize;
        let order = (p as u64).checked_pow(deg as u32).unwrap_or(u64::MAX);
        if order > ORDER_LIMIT {
            return Err(Error::InvalidField(format!(
                "GF({p}^{deg}) is too large for the absolute representation"
            )));
        }
        let check = |m: Vec<u32>, d: usize| -> Result<Vec<u32>> {
            if m.len() != d + 1 || m[d] != 1 || m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidField(format!(
                    "modulus {m:?} must be a monic degree-{d} polynomial over GF({p})"
                )));
            }
            if !is_irreducible(&m, p) {
                return Err(Error::Reducible { p, coeffs: m });
            }
            Ok(m)
        };
        let modulus = match modulus {
            Some(m) => check(m, deg)?,
            None => least_irreducible(p, deg),
        };
        let sub_modulus = match sub_modulus {
            Some(m) => check(m, e as usize)?,
            None => least_irreducible(p, e as usize),
        };
        let q = p.pow(e);
        let mut pow_p = Vec::with_capacity(deg + 1);
        let mut acc = 1u64;
        for _ in 0..=deg {
            pow_p.push(acc.min(u32::MAX as u64) as u32);
            acc *= p as u64;
        }
        let mut field = FieldTower {
            p,
            e,
            t,
            deg,
            order: order as u32,
            q,
            modulus,
            sub_modulus,
            sub_gen: Elem::ZERO,
            pow_p,
            tables: None,
            xi_pows: Vec::new(),
            sub_pows: Vec::new(),
            expand_inv: Vec::new(),
        };
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        field.sub_gen = field.find_sub_generator()?;
        field.build_expansion()?;
        Ok(field)
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn t(&self) -> u32 {
        self.t
    }
    /// Size of GF(q).
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Size of GF(q^t).
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Degree of the top field over GF(p).
    #[inline]
    pub fn degree(&self) -> usize {
        self.deg
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn sub_modulus(&self) -> &[u32] {
        &self.sub_modulus
    }
    /// Image of the class of `X` under GF(q) = GF(p)[X]/(sub_modulus) → GF(q^t).
    pub fn sub_generator(&self) -> Elem {
        self.sub_gen
    }
    /// The tower generator ξ, a root of the top modulus.
    pub fn generator(&self) -> Elem {
        if self.deg >= 2 {
            Elem(self.p)
        } else {
            // GF(p) itself: X ≡ -m_0.
            self.neg(Elem(self.modulus[0]))
        }
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }
    pub fn size_of(&self, level: Level) -> u64 {
        match level {
            Level::Prime => self.p as u64,
            Level::Sub => self.q as u64,
            Level::Top => self.order as u64,
        }
    }

    pub fn config(&self) -> FieldConfig {
        FieldConfig {
            p: self.p,
            e: self.e,
            t: self.t,
            modulus: ModulusSpec::Coeffs(self.modulus.clone()),
            sub_modulus: Some(ModulusSpec::Coeffs(self.sub_modulus.clone())),
        }
    }

    // -- representation ----------------------------------------------------

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.deg);
        let mut x = a.0;
        for _ in 0..self.deg {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    fn from_digits_unchecked(&self, d: &[u32]) -> Elem {
        let mut code = 0u32;
        for (i, &c) in d.iter().enumerate().take(self.deg) {
            code += c * self.pow_p[i];
        }
        Elem(code)
    }

    /// Little-endian GF(p) coefficient list of `a` (the serialized form).
    pub fn to_coeffs(&self, a: Elem) -> Vec<u32> {
        self.digits(a)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.deg {
            return Err(Error::InvalidField(format!(
                "coefficient list of length {} exceeds degree {}",
                coeffs.len(),
                self.deg
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidField(format!(
                "coefficient {c} is not reduced mod {}",
                self.p
            )));
        }
        Ok(self.from_digits_unchecked(coeffs))
    }

    /// The image of an integer in GF(p).
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    // -- arithmetic --------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut code = 0u32;
        for i in 0..self.deg {
            let d = (x % self.p + y % self.p) % self.p;
            code += d * self.pow_p[i];
            x /= self.p;
            y /= self.p;
        }
        Elem(code)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut code = 0u32;
        for i in 0..self.deg {
            let d = (self.p - x % self.p) % self.p;
            code += d * self.pow_p[i];
            x /= self.p;
        }
        Elem(code)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None if self.p == 2 => self.mul_binary(a, b),
            None => self.mul_generic(a, b),
        }
    }

    /// Carry-less multiply and reduce, p = 2 only.
    fn mul_binary(&self, a: Elem, b: Elem) -> Elem {
        let mut r: u64 = 0;
        for i in 0..self.deg {
            if (b.0 >> i) & 1 == 1 {
                r ^= (a.0 as u64) << i;
            }
        }
        let mut modmask: u64 = 0;
        for (i, &c) in self.modulus.iter().enumerate() {
            modmask |= (c as u64) << i;
        }
        for i in (self.deg..2 * self.deg).rev() {
            if (r >> i) & 1 == 1 {
                r ^= modmask << (i - self.deg);
            }
        }
        Elem(r as u32)
    }

    /// Schoolbook polynomial product reduced by the modulus; no tables.
    pub fn mul_generic(&self, a: Elem, b: Elem) -> Elem {
        let da = self.digits(a);
        let db = self.digits(b);
        let p = self.p as u64;
        let mut prod = vec![0u32; 2 * self.deg];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_digits_unchecked(&r)
    }

    pub fn pow(&self, a: Elem, mut k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = (self.order - 1) as u64;
            let l = t.log[a.0 as usize] as u64 * (k % n) % n;
            return Elem(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let l = (n - t.log[a.0 as usize]) % n;
            return Ok(Elem(t.exp[l as usize]));
        }
        Ok(self.pow(a, self.order as u64 - 2))
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        self.inv(a).expect("nonzero pivot")
    }

    /// `a^(q^i)`; the exponent is taken mod t, so `frobenius(a, t) = a`.
    pub fn frobenius(&self, a: Elem, i: u32) -> Elem {
        let i = i % self.t;
        if i == 0 || a.is_zero() {
            return a;
        }
        self.pow(a, (self.q as u64).pow(i))
    }

    /// `Σ_{i<t} a^(q^i)`, which lies in GF(q).
    pub fn trace(&self, a: Elem) -> Elem {
        self.trace_over(a, self.t)
    }

    /// Relative trace from GF(q^s) down to GF(q): `Σ_{i<s} a^(q^i)`.
    pub fn trace_over(&self, a: Elem, s: u32) -> Elem {
        (0..s).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(a, i)))
    }

    /// `Π_{i<t} a^(q^i)`, which lies in GF(q).
    pub fn norm(&self, a: Elem) -> Elem {
        (0..self.t).fold(Elem::ONE, |acc, i| self.mul(acc, self.frobenius(a, i)))
    }

    /// The smallest tower level containing `a`.
    pub fn level_of(&self, a: Elem) -> Level {
        if self.pow(a, self.p as u64) == a {
            Level::Prime
        } else if self.pow(a, self.q as u64) == a {
            Level::Sub
        } else {
            Level::Top
        }
    }

    pub fn in_level(&self, a: Elem, level: Level) -> bool {
        self.level_of(a) <= level
    }

    // -- vector kernels ----------------------------------------------------

    /// `dst += f · src`.
    pub fn axpy(&self, dst: &mut [Elem], f: Elem, src: &[Elem]) {
        if f.is_zero() {
            return;
        }
        match (&self.tables, self.p) {
            (Some(t), 2) => {
                let lf = t.log[f.0 as usize] as usize;
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        d.0 ^= t.exp[lf + t.log[s.0 as usize] as usize];
                    }
                }
            }
            _ => {
                for (d, s) in dst.iter_mut().zip(src) {
                    if !s.is_zero() {
                        *d = self.add(*d, self.mul(f, *s));
                    }
                }
            }
        }
    }

    pub fn scale(&self, v: &mut [Elem], f: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, f);
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Scales `v` so that its first nonzero entry is 1. Returns `false` for the zero vector.
    pub fn normalize(&self, v: &mut [Elem]) -> bool {
        match v.iter().find(|x| !x.is_zero()) {
            Some(&lead) => {
                if lead != Elem::ONE {
                    let inv = self.inv_nz(lead);
                    self.scale(v, inv);
                }
                true
            }
            None => false,
        }
    }

    // -- GF(q)-structure ---------------------------------------------------

    /// Coordinates of `y` over the basis `(1, ξ, …, ξ^{t-1})`; entries lie in GF(q).
    pub fn expand(&self, y: Elem) -> Vec<Elem> {
        let d = self.digits(y);
        let e = self.e as usize;
        let p = self.p as u64;
        let mut c = vec![0u32; self.deg];
        for (i, &di) in d.iter().enumerate() {
            if di == 0 {
                continue;
            }
            for (k, ck) in c.iter_mut().enumerate() {
                *ck = ((*ck as u64 + di as u64 * self.expand_inv[i][k] as u64) % p) as u32;
            }
        }
        (0..self.t as usize)
            .map(|j| {
                (0..e).fold(Elem::ZERO, |acc, a| {
                    let coeff = Elem(c[a + e * j]);
                    self.add(acc, self.mul(coeff, self.sub_pows[a]))
                })
            })
            .collect()
    }

    /// Inverse of [`expand`](Self::expand): `Σ c_j ξ^j`.
    pub fn combine(&self, coeffs: &[Elem]) -> Elem {
        coeffs
            .iter()
            .zip(&self.xi_pows)
            .fold(Elem::ZERO, |acc, (&c, &x)| self.add(acc, self.mul(c, x)))
    }

    pub fn xi_powers(&self) -> &[Elem] {
        &self.xi_pows
    }

    /// Embeds a GF(q) element given by its coefficients over the subfield generator.
    pub fn embed_sub(&self, coeffs: &[u32]) -> Elem {
        coeffs
            .iter()
            .zip(&self.sub_pows)
            .fold(Elem::ZERO, |acc, (&c, &g)| self.add(acc, self.mul(Elem(c % self.p), g)))
    }

    // -- enumeration -------------------------------------------------------

    /// All elements of `level` in ascending code order, which is lexicographic on
    /// the coefficient vector read from the highest degree down.
    pub fn elements(&self, level: Level, cap: u64) -> Result<Vec<Elem>> {
        let size = self.size_of(level);
        if size > cap {
            return Err(Error::CapExceeded {
                requested: size as u128,
                cap,
            });
        }
        let all = (0..self.order).map(Elem);
        Ok(match level {
            Level::Top => all.collect(),
            _ => all.filter(|&a| self.in_level(a, level)).collect(),
        })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, level: Level) -> Elem {
        match level {
            Level::Top => Elem(rng.gen_range(0..self.order)),
            Level::Sub => {
                let coeffs: Vec<u32> = (0..self.e).map(|_| rng.gen_range(0..self.p)).collect();
                self.embed_sub(&coeffs)
            }
            Level::Prime => Elem(rng.gen_range(0..self.p)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, level: Level) -> Elem {
        loop {
            let x = self.random(rng, level);
            if !x.is_zero() {
                return x;
            }
        }
    }

    // -- construction helpers ---------------------------------------------

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as u64;
        let primes = factor_distinct(n);
        let gen = (1..self.order)
            .map(Elem)
            .find(|&g| primes.iter().all(|&l| self.pow_slow(g, n / l) != Elem::ONE))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut x = Elem::ONE;
        for i in 0..n as usize {
            exp[i] = x.0;
            exp[i + n as usize] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_untabled(x, gen);
        }
        LogTables { exp, log }
    }

    fn mul_untabled(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            self.mul_binary(a, b)
        } else {
            self.mul_generic(a, b)
        }
    }

    fn pow_slow(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_untabled(acc, base);
            }
            base = self.mul_untabled(base, base);
            k >>= 1;
        }
        acc
    }

    fn eval_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), Elem(c)))
    }

    fn find_sub_generator(&self) -> Result<Elem> {
        if self.e == 1 {
            // GF(q) = GF(p); the degree-one modulus X + m_0 has the root -m_0.
            return Ok(self.neg(Elem(self.sub_modulus[0])));
        }
        (0..self.order)
            .map(Elem)
            .find(|&x| self.eval_poly(&self.sub_modulus, x).is_zero())
            .ok_or_else(|| Error::Invariant("subfield modulus has no root in the top field".into()))
    }

    fn build_expansion(&mut self) -> Result<()> {
        let xi = self.generator();
        self.xi_pows = (0..self.t).map(|j| self.pow(xi, j as u64)).collect();
        self.sub_pows = (0..self.e).map(|a| self.pow(self.sub_gen, a as u64)).collect();
        let e = self.e as usize;
        let mut rows = vec![Vec::new(); self.deg];
        for j in 0..self.t as usize {
            for a in 0..e {
                rows[a + e * j] = self.digits(self.mul(self.sub_pows[a], self.xi_pows[j]));
            }
        }
        self.expand_inv = invert_mod_p(&rows, self.p)
            .ok_or_else(|| Error::Invariant("power basis of the tower generator is not a basis".into()))?;
        Ok(())
    }
}

/// Arithmetic operations exposed through [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

/// An element bundled with its tower and the smallest level containing it.
#[derive(Clone, Debug)]
pub struct TowerElement {
    tower: Arc<FieldTower>,
    value: Elem,
    level: Level,
}

impl TowerElement {
    pub fn new(tower: &Arc<FieldTower>, value: Elem) -> Self {
        let level = tower.level_of(value);
        TowerElement {
            tower: Arc::clone(tower),
            value,
            level,
        }
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn frobenius(&self, i: u32) -> TowerElement {
        TowerElement::new(&self.tower, self.tower.frobenius(self.value, i))
    }

    pub fn trace(&self) -> TowerElement {
        TowerElement::new(&self.tower, self.tower.trace(self.value))
    }

    pub fn norm(&self) -> TowerElement {
        TowerElement::new(&self.tower, self.tower.norm(self.value))
    }
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && *self.tower == *other.tower
    }
}

/// Checked arithmetic between tagged elements. Unary operations ignore `b`.
pub fn arith(a: &TowerElement, b: &TowerElement, op: Op) -> Result<TowerElement> {
    if !Arc::ptr_eq(&a.tower, &b.tower) && *a.tower != *b.tower {
        return Err(Error::MixedTowers);
    }
    let f = &a.tower;
    let value = match op {
        Op::Add => f.add(a.value, b.value),
        Op::Mul => f.mul(a.value, b.value),
        Op::Neg => f.neg(a.value),
        Op::Inv => f.inv(a.value)?,
        Op::Pow(k) => f.pow(a.value, k),
    };
    Ok(TowerElement::new(f, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldTower {
        FieldTower::new(2, 1, 2).unwrap()
    }

    #[test]
    fn gf4_modulus_and_products() {
        let f = gf4();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.generator();
        assert_eq!(w, Elem(2));
        // ω·ω = ω + 1
        assert_eq!(f.mul(w, w), Elem(3));
        // ω³ by repeated polynomial multiplication
        let w3 = f.mul_generic(f.mul_generic(w, w), w);
        assert_eq!(w3, Elem::ONE);
        assert_eq!(f.pow(w, 3), Elem::ONE);
    }

    #[test]
    fn gf4_frobenius_trace_norm() {
        let f = gf4();
        let w = f.generator();
        let squared = f.mul_generic(w, w);
        assert_eq!(f.frobenius(w, 1), squared);
        assert_eq!(f.frobenius(w, 1), Elem(3));
        assert_eq!(f.trace(w), f.add(w, squared));
        assert_eq!(f.trace(w), Elem::ONE);
        assert_eq!(f.norm(w), Elem::ONE);
        assert_eq!(f.trace(Elem::ZERO), Elem::ZERO);
        assert_eq!(f.norm(Elem::ZERO), Elem::ZERO);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = gf4();
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::DivisionByZero)));
    }

    #[test]
    fn enumeration_respects_levels_and_cap() {
        let f = FieldTower::new(2, 1, 1).unwrap();
        assert_eq!(f.elements(Level::Top, 16).unwrap(), vec![Elem(0), Elem(1)]);

        let f = gf4();
        let all = f.elements(Level::Top, 16).unwrap();
        assert_eq!(all.len(), 4);

        // (p, e, t) = (2, 2, 2): GF(16) over GF(4)
        let f = FieldTower::new(2, 2, 2).unwrap();
        let top = f.elements(Level::Top, 1 << 20).unwrap();
        assert_eq!(top.len(), 16);
        let fixed = top.iter().filter(|&&x| f.pow(x, 4) == x).count();
        assert_eq!(fixed, 4);
        assert_eq!(f.elements(Level::Sub, 1 << 20).unwrap().len(), 4);

        assert!(matches!(f.elements(Level::Top, 8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        let err = FieldTower::with_moduli(2, 1, 2, Some(vec![1, 0, 1]), None).unwrap_err();
        assert!(matches!(err, Error::Reducible { .. }));
        assert!(FieldTower::new(4, 1, 2).is_err());
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn table_and_generic_paths_agree() {
        for &(p, e, t) in &[(2, 1, 4), (2, 2, 2), (3, 1, 2), (3, 1, 3), (5, 1, 2), (2, 3, 2)] {
            let f = FieldTower::new(p, e, t).unwrap();
            assert!(f.has_tables());
            for a in 0..f.order() {
                for b in 0..f.order() {
                    let (a, b) = (Elem(a), Elem(b));
                    assert_eq!(f.mul(a, b), f.mul_generic(a, b), "({p},{e},{t}) {a:?}*{b:?}");
                    if p == 2 {
                        assert_eq!(f.mul_binary(a, b), f.mul_generic(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn subfield_embedding_is_a_homomorphism() {
        for &(p, e, t) in &[(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 4, 1)] {
            let f = FieldTower::new(p, e, t).unwrap();
            let q = f.q();
            let lists: Vec<Vec<u32>> = (0..q)
                .map(|mut c| {
                    (0..e)
                        .map(|_| {
                            let d = c % p;
                            c /= p;
                            d
                        })
                        .collect()
                })
                .collect();
            let emb: Vec<Elem> = lists.iter().map(|l| f.embed_sub(l)).collect();
            assert_eq!(emb[0], Elem::ZERO);
            assert_eq!(emb[1], Elem::ONE);
            // images are exactly the Frobenius-fixed elements
            let mut sorted = emb.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, f.elements(Level::Sub, 1 << 20).unwrap());
            // products: multiply in GF(p)[X]/(m) and compare
            let m = f.sub_modulus();
            for (i, a) in lists.iter().enumerate() {
                for (j, b) in lists.iter().enumerate() {
                    let mut prod = vec![0u32; 2 * e as usize];
                    for (x, &ax) in a.iter().enumerate() {
                        for (y, &by) in b.iter().enumerate() {
                            prod[x + y] = (prod[x + y] + ax * by) % p;
                        }
                    }
                    let mut r = poly_rem(&prod, m, p);
                    r.resize(e as usize, 0);
                    assert_eq!(f.mul(emb[i], emb[j]), f.embed_sub(&r));
                    let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(f.add(emb[i], emb[j]), f.embed_sub(&sum));
                }
            }
        }
    }

    #[test]
    fn expansion_round_trips() {
        for &(p, e, t) in &[(2, 1, 4), (2, 2, 2), (3, 1, 3), (3, 2, 2)] {
            let f = FieldTower::new(p, e, t).unwrap();
            for y in f.elements(Level::Top, 1 << 20).unwrap() {
                let c = f.expand(y);
                assert_eq!(c.len(), t as usize);
                assert!(c.iter().all(|&x| f.in_level(x, Level::Sub)));
                assert_eq!(f.combine(&c), y);
            }
        }
    }

    #[test]
    fn checked_arith_rejects_mixed_towers() {
        let a = Arc::new(gf4());
        let b = Arc::new(FieldTower::new(2, 1, 4).unwrap());
        let x = TowerElement::new(&a, Elem(2));
        let y = TowerElement::new(&b, Elem(2));
        assert!(matches!(arith(&x, &y, Op::Add), Err(Error::MixedTowers)));
        let z = TowerElement::new(&a, Elem::ZERO);
        assert!(matches!(arith(&z, &z, Op::Inv), Err(Error::DivisionByZero)));
        let prod = arith(&x, &x, Op::Mul).unwrap();
        assert_eq!(prod.value(), Elem(3));
        assert_eq!(prod.level(), Level::Top);
        assert_eq!(prod.trace().level(), Level::Prime);
    }
}
