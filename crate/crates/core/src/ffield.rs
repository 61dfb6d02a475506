//! Finite fields `F_q` with `q = p^r`, `p` an odd prime.
//!
//! Elements are represented by their canonical integer encoding: the element
//! with polynomial representative `c_0 + c_1 x + … + c_{r-1} x^{r-1}` is the
//! integer `c_0 + c_1 p + … + c_{r-1} p^{r-1}`. For prime fields this is just
//! the residue itself. Extension fields are built as `F_p[x]/(f)` for a monic
//! irreducible `f`; when no modulus is supplied the lexicographically smallest
//! irreducible (by coefficient tuple `(c_0, …, c_{r-1})`) is used, which makes
//! element encodings reproducible across runs.
//!
//! Quadratic classes and square roots are table-driven (fields are capped at
//! `q ≤ 2^16`, so a full table costs at most a few hundred KB); the Euler
//! criterion `a^((q-1)/2)` is kept alongside as an independent route and used
//! to cross-check the tables in tests.

use std::fmt;
use std::sync::Arc;

/// Hard cap on field size; tables are built eagerly under this bound.
pub const MAX_Q: u64 = 1 << 16;

/// Quadratic class of a field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadClass {
    /// The zero element.
    Zero,
    /// A nonzero square.
    Square,
    /// A non-square.
    NonSquare,
}

impl fmt::Display for QuadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadClass::Zero => write!(f, "zero"),
            QuadClass::Square => write!(f, "square"),
            QuadClass::NonSquare => write!(f, "non-square"),
        }
    }
}

/// An element of a finite field, stored as its canonical integer encoding.
///
/// The encoding alone does not know which field it belongs to; all arithmetic
/// goes through a [`FieldSpec`], and structures that combine several elements
/// (points, matrices) carry the field once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u64);

impl FieldElement {
    /// The canonical integer encoding, in `0..q`.
    #[inline]
    pub fn val(self) -> u64 {
        self.0
    }

    /// Crate-internal constructor for hot paths that already guarantee
    /// `v < q` (index decoding, table iteration).
    #[inline]
    pub(crate) fn new_unchecked(v: u64) -> Self {
        FieldElement(v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Errors from field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// `p` is not prime.
    NotPrime(u64),
    /// `p = 2`; only odd characteristic is supported.
    EvenCharacteristic,
    /// `p^r` exceeds [`MAX_Q`] or does not fit the encoding.
    UnsupportedSize { p: u64, r: u32 },
    /// A supplied modulus is malformed (wrong length, non-monic, coefficient
    /// out of range, or given for a prime field where it must be `x`).
    InvalidModulus(String),
    /// A supplied modulus is not irreducible over `F_p`.
    ReducibleModulus(String),
    /// Inversion of zero.
    ZeroInverse,
    /// `-1` is not a square (`q ≢ 1 (mod 4)`), so `ω_q` does not exist.
    NoRootOfMinusOne { q: u64 },
    /// An integer is not a valid element encoding for this field.
    InvalidElement { value: u64, q: u64 },
    /// A field descriptor string could not be parsed.
    Parse(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::EvenCharacteristic => write!(f, "characteristic 2 is not supported"),
            FieldError::UnsupportedSize { p, r } => {
                write!(f, "field size {p}^{r} exceeds the supported bound {MAX_Q}")
            }
            FieldError::InvalidModulus(s) => write!(f, "invalid modulus: {s}"),
            FieldError::ReducibleModulus(s) => write!(f, "modulus is reducible: {s}"),
            FieldError::ZeroInverse => write!(f, "inversion of zero"),
            FieldError::NoRootOfMinusOne { q } => {
                write!(f, "-1 is not a square in F_{q} (q ≢ 1 mod 4)")
            }
            FieldError::InvalidElement { value, q } => {
                write!(f, "{value} is not an element encoding of F_{q}")
            }
            FieldError::Parse(s) => write!(f, "cannot parse field descriptor: {s}"),
        }
    }
}

impl std::error::Error for FieldError {}

enum Repr {
    /// Prime field: arithmetic directly on residues.
    Prime,
    /// Small extension field with full multiplication/addition tables.
    Tabled { mul: Vec<u16>, add: Vec<u16> },
    /// Larger extension field: per-operation polynomial arithmetic.
    Poly,
}

struct FieldInner {
    p: u64,
    r: u32,
    q: u64,
    /// Monic modulus, constant coefficient first, length `r + 1`. For prime
    /// fields this is `[0, 1]`, i.e. the polynomial `x`.
    modulus: Vec<u64>,
    repr: Repr,
    /// Quadratic class per encoding (0 = zero, 1 = square, 2 = non-square).
    quad: Vec<u8>,
    /// Canonical square root per encoding (`u32::MAX` for non-squares); the
    /// root with the smaller encoding is stored.
    sqrt: Vec<u32>,
}

/// A finite field `F_{p^r}` (odd `p`, `p^r ≤ 2^16`), cheap to clone and share.
///
/// Equality compares the mathematical presentation: characteristic, degree and
/// modulus. Two specs built from the same parameters are interchangeable.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

/// Construct `F_{p^r}`. With `modulus: None` and `r > 1` the lexicographically
/// smallest monic irreducible polynomial is selected; a supplied modulus must
/// be monic of degree `r` with coefficients below `p` (constant first).
pub fn make_field(p: u64, r: u32, modulus: Option<&[u64]>) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if r == 0 {
        return Err(FieldError::UnsupportedSize { p, r });
    }
    let q = p
        .checked_pow(r)
        .filter(|&q| q <= MAX_Q)
        .ok_or(FieldError::UnsupportedSize { p, r })?;

    let modulus: Vec<u64> = match (r, modulus) {
        (1, None) => vec![0, 1],
        (1, Some(m)) if m == [0, 1] => vec![0, 1],
        (1, Some(m)) => {
            return Err(FieldError::InvalidModulus(format!(
                "prime field F_{p} admits only the trivial modulus x, got {m:?}"
            )))
        }
        (_, Some(m)) => {
            if m.len() != r as usize + 1 {
                return Err(FieldError::InvalidModulus(format!(
                    "expected {} coefficients for degree {r}, got {}",
                    r + 1,
                    m.len()
                )));
            }
            if m[r as usize] != 1 {
                return Err(FieldError::InvalidModulus("not monic".into()));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(FieldError::InvalidModulus(format!(
                    "coefficient not reduced mod {p}"
                )));
            }
            if !poly::is_irreducible(&m[..r as usize], p) {
                return Err(FieldError::ReducibleModulus(format!("{m:?} over F_{p}")));
            }
            m.to_vec()
        }
        (_, None) => poly::smallest_irreducible(p, r),
    };

    let repr = if r == 1 {
        Repr::Prime
    } else if q <= 512 {
        let (mul, add) = build_tables(p, r, q, &modulus);
        Repr::Tabled { mul, add }
    } else {
        Repr::Poly
    };

    let mut inner = FieldInner {
        p,
        r,
        q,
        modulus,
        repr,
        quad: Vec::new(),
        sqrt: Vec::new(),
    };

    // One squaring pass fills both the class table and the canonical roots;
    // iterating encodings in ascending order makes the stored root the
    // smaller of each pair ±x.
    let mut quad = vec![2u8; q as usize];
    let mut sqrt = vec![u32::MAX; q as usize];
    quad[0] = 0;
    for x in 0..q {
        let s = raw_mul(&inner, x, x);
        if sqrt[s as usize] == u32::MAX {
            sqrt[s as usize] = x as u32;
        }
        if s != 0 {
            quad[s as usize] = 1;
        }
    }
    debug_assert_eq!(
        quad.iter().filter(|&&c| c == 1).count() as u64,
        (q - 1) / 2,
        "exactly (q-1)/2 nonzero squares"
    );
    inner.quad = quad;
    inner.sqrt = sqrt;

    Ok(FieldSpec {
        inner: Arc::new(inner),
    })
}

/// Parse a field descriptor: `p` for prime fields, `p^r:c_0,…,c_r` for
/// extension fields (constant coefficient first, monic), or `p^r` to pick the
/// default modulus.
pub fn parse_field_descriptor(s: &str) -> Result<FieldSpec, FieldError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FieldError::Parse("empty descriptor".into()));
    }
    let (base, coeffs) = match s.split_once(':') {
        Some((b, c)) => (b, Some(c)),
        None => (s, None),
    };
    let (p_str, r_str) = match base.split_once('^') {
        Some((p, r)) => (p, Some(r)),
        None => (base, None),
    };
    let p: u64 = p_str
        .parse()
        .map_err(|_| FieldError::Parse(format!("bad characteristic in {s:?}")))?;
    let r: u32 = match r_str {
        Some(r) => r
            .parse()
            .map_err(|_| FieldError::Parse(format!("bad degree in {s:?}")))?,
        None => 1,
    };
    let modulus: Option<Vec<u64>> = match coeffs {
        Some(c) => Some(
            c.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| FieldError::Parse(format!("bad coefficient {t:?} in {s:?}")))
                })
                .collect::<Result<_, _>>()?,
        ),
        None => None,
    };
    make_field(p, r, modulus.as_deref())
}

impl fmt::Display for FieldSpec {
    /// The canonical descriptor: `p` or `p^r:c_0,…,c_r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.r == 1 {
            write!(f, "{}", self.inner.p)
        } else {
            write!(f, "{}^{}:", self.inner.p, self.inner.r)?;
            let parts: Vec<String> = self.inner.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FieldSpec {
    #[inline]
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.inner.r
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Monic modulus, constant coefficient first, length `r + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The element with canonical encoding `v`.
    pub fn el(&self, v: u64) -> Result<FieldElement, FieldError> {
        if v < self.inner.q {
            Ok(FieldElement(v))
        } else {
            Err(FieldError::InvalidElement {
                value: v,
                q: self.inner.q,
            })
        }
    }

    /// All elements in ascending canonical encoding.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(raw_add(&self.inner, a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(raw_neg(&self.inner, a.0))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(raw_mul(&self.inner, a.0, b.0))
    }

    /// `a^e`; the exponent is reduced mod `q - 1` for nonzero bases, and
    /// `0^0 = 1` by convention.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.0 == 0 {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let mut e = e % (self.inner.q - 1);
        let mut base = a.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = raw_mul(&self.inner, acc, base);
            }
            base = raw_mul(&self.inner, base, base);
            e >>= 1;
        }
        FieldElement(acc)
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.inner.q - 2))
    }

    /// `a / b`; fails when `b = 0`.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Quadratic class, from the precomputed table.
    #[inline]
    pub fn quad_class(&self, a: FieldElement) -> QuadClass {
        match self.inner.quad[a.0 as usize] {
            0 => QuadClass::Zero,
            1 => QuadClass::Square,
            _ => QuadClass::NonSquare,
        }
    }

    /// Quadratic class via the Euler criterion `a^((q-1)/2)`; the route used
    /// for fields too large to table (none under the current cap), kept as an
    /// independent cross-check of the table.
    pub fn euler_criterion(&self, a: FieldElement) -> QuadClass {
        if a.0 == 0 {
            return QuadClass::Zero;
        }
        if self.pow(a, (self.inner.q - 1) / 2) == self.one() {
            QuadClass::Square
        } else {
            QuadClass::NonSquare
        }
    }

    /// Canonical square root (the root with smaller encoding), `None` for
    /// non-squares; `sqrt(0) = 0`.
    #[inline]
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        match self.inner.sqrt[a.0 as usize] {
            u32::MAX => None,
            v => Some(FieldElement(v as u64)),
        }
    }

    /// `ω_q`, the canonical square root of `-1`; exists iff `q ≡ 1 (mod 4)`.
    pub fn omega(&self) -> Result<FieldElement, FieldError> {
        self.sqrt(self.neg(self.one()))
            .ok_or(FieldError::NoRootOfMinusOne { q: self.inner.q })
    }

    /// The Frobenius power `a^(p^i)`, an automorphism fixing `F_p`.
    ///
    /// Requires `i < r`.
    pub fn frobenius(&self, a: FieldElement, i: u32) -> FieldElement {
        assert!(i < self.inner.r, "frobenius index {i} out of range");
        let mut x = a;
        for _ in 0..i {
            x = self.pow(x, self.inner.p);
        }
        x
    }

    /// Render an element in polynomial form, e.g. `2+w+2w^2` (prime fields:
    /// the residue itself).
    pub fn format_element(&self, a: FieldElement) -> String {
        if self.inner.r == 1 {
            return a.0.to_string();
        }
        let digits = poly::decode(a.0, self.inner.p, self.inner.r);
        let mut parts = Vec::new();
        for (i, &c) in digits.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".into(),
                (1, c) => format!("{c}w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}w^{i}"),
            };
            parts.push(t);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

#[inline]
fn raw_add(f: &FieldInner, a: u64, b: u64) -> u64 {
    match &f.repr {
        Repr::Prime => {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        }
        Repr::Tabled { add, .. } => add[(a * f.q + b) as usize] as u64,
        Repr::Poly => {
            let mut enc = 0u64;
            let mut pw = 1u64;
            let (mut a, mut b) = (a, b);
            for _ in 0..f.r {
                let s = (a % f.p + b % f.p) % f.p;
                enc += s * pw;
                pw *= f.p;
                a /= f.p;
                b /= f.p;
            }
            enc
        }
    }
}

#[inline]
fn raw_neg(f: &FieldInner, a: u64) -> u64 {
    match &f.repr {
        Repr::Prime => {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        }
        _ => {
            let mut enc = 0u64;
            let mut pw = 1u64;
            let mut a = a;
            for _ in 0..f.r {
                let d = a % f.p;
                enc += if d == 0 { 0 } else { f.p - d } * pw;
                pw *= f.p;
                a /= f.p;
            }
            enc
        }
    }
}

#[inline]
fn raw_mul(f: &FieldInner, a: u64, b: u64) -> u64 {
    match &f.repr {
        Repr::Prime => a * b % f.p,
        Repr::Tabled { mul, .. } => mul[(a * f.q + b) as usize] as u64,
        Repr::Poly => {
            let pa = poly::decode(a, f.p, f.r);
            let pb = poly::decode(b, f.p, f.r);
            let prod = poly::mul_mod(&pa, &pb, &f.modulus, f.p);
            poly::encode(&prod, f.p)
        }
    }
}

fn build_tables(p: u64, r: u32, q: u64, modulus: &[u64]) -> (Vec<u16>, Vec<u16>) {
    let n = q as usize;
    let mut mul = vec![0u16; n * n];
    let mut add = vec![0u16; n * n];
    let polys: Vec<Vec<u64>> = (0..q).map(|v| poly::decode(v, p, r)).collect();
    for a in 0..n {
        for b in a..n {
            let m = poly::encode(&poly::mul_mod(&polys[a], &polys[b], modulus, p), p) as u16;
            mul[a * n + b] = m;
            mul[b * n + a] = m;
            let s: Vec<u64> = (0..r as usize)
                .map(|i| (polys[a][i] + polys[b][i]) % p)
                .collect();
            let s = poly::encode(&s, p) as u16;
            add[a * n + b] = s;
            add[b * n + a] = s;
        }
    }
    (mul, add)
}

/// Decompose `q` as an odd prime power `p^r`, if it is one.
pub(crate) fn odd_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q % 2 == 0 {
        return None;
    }
    let mut p = 3;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut r = 0;
            while rest % p == 0 {
                rest /= p;
                r += 1;
            }
            return if rest == 1 { Some((p, r)) } else { None };
        }
        p += 2;
    }
    Some((q, 1)) // q itself is an odd prime
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense polynomial arithmetic over `F_p`, used for extension-field setup.
/// Polynomials are coefficient vectors indexed by degree.
mod poly {
    /// Digits of `v` in base `p`, fixed length `r`.
    pub fn decode(v: u64, p: u64, r: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(r as usize);
        let mut v = v;
        for _ in 0..r {
            out.push(v % p);
            v /= p;
        }
        out
    }

    /// Canonical encoding of a coefficient vector (any length).
    pub fn encode(c: &[u64], p: u64) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    fn trim(c: &mut Vec<u64>) {
        while c.last() == Some(&0) {
            c.pop();
        }
    }

    /// `a · b mod f` where `f` is monic with constant coefficient first.
    pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let r = f.len() - 1;
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        // reduce: x^r ≡ -(f_0 + f_1 x + … + f_{r-1} x^{r-1})
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..r {
                let sub = c * f[k] % p;
                prod[d - r + k] = (prod[d - r + k] + p - sub) % p;
            }
        }
        prod.truncate(r.max(1));
        prod
    }

    /// `x^(p^k) mod f` computed by iterated `p`-th powers.
    fn x_pow_p_iter(k: u32, f: &[u64], p: u64) -> Vec<u64> {
        let mut t = vec![0, 1]; // x
        for _ in 0..k {
            t = pow_mod(&t, p, f, p);
        }
        t
    }

    fn pow_mod(base: &[u64], e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = base.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let db = b.len() - 1;
        let lead_inv = mod_inv(b[db], p);
        while a.len() > db {
            let da = a.len() - 1;
            let c = a[da] * lead_inv % p;
            if c != 0 {
                for k in 0..=db {
                    let sub = c * b[k] % p;
                    a[da - db + k] = (a[da - db + k] + p - sub) % p;
                }
            }
            a.pop();
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        a
    }

    fn mod_inv(a: u64, p: u64) -> u64 {
        // p is prime and a ≠ 0
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Irreducibility of the monic polynomial `x^r + c_{r-1}x^{r-1} + … + c_0`
    /// over `F_p`, given the low coefficients `low = [c_0, …, c_{r-1}]`.
    ///
    /// Standard criterion: `x^(p^r) ≡ x (mod f)` and, for every prime divisor
    /// `s` of `r`, `gcd(x^(p^(r/s)) - x, f) = 1`.
    pub fn is_irreducible(low: &[u64], p: u64) -> bool {
        let r = low.len() as u32;
        if r == 1 {
            return true;
        }
        let mut f = low.to_vec();
        f.push(1);

        let xpr = x_pow_p_iter(r, &f, p);
        let mut diff = xpr.clone();
        while diff.len() < 2 {
            diff.push(0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let mut d = diff.clone();
        trim(&mut d);
        if !d.is_empty() {
            return false;
        }

        for s in prime_divisors(r as u64) {
            let t = x_pow_p_iter(r / s as u32, &f, p);
            let mut diff = t;
            while diff.len() < 2 {
                diff.push(0);
            }
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(&f, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    fn prime_divisors(mut n: u64) -> Vec<u64> {
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

    /// The lexicographically smallest monic irreducible of degree `r` over
    /// `F_p`, by coefficient tuple `(c_0, …, c_{r-1})`. Returned constant
    /// first with the leading 1 appended.
    pub fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
        let mut low = vec![0u64; r as usize];
        loop {
            if is_irreducible(&low, p) {
                let mut f = low;
                f.push(1);
                return f;
            }
            // odometer: last coordinate varies fastest
            let mut i = r as usize;
            loop {
                assert!(i > 0, "no irreducible polynomial found (impossible)");
                i -= 1;
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: &str) -> FieldSpec {
        parse_field_descriptor(q).unwrap()
    }

    #[test]
    fn prime_field_basics() {
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(f7.q(), 7);
        assert_eq!(f7.to_string(), "7");
        let a = f7.el(3).unwrap();
        let b = f7.el(5).unwrap();
        assert_eq!(f7.add(a, b).val(), 1);
        assert_eq!(f7.mul(a, b).val(), 1);
        assert_eq!(f7.neg(a).val(), 4);
        assert_eq!(f7.sub(a, b).val(), 5);
        assert_eq!(f7.inv(b).unwrap().val(), 3);
        assert_eq!(f7.pow(a, 0).val(), 1);
        assert!(f7.el(7).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(
            make_field(2, 3, None).unwrap_err(),
            FieldError::EvenCharacteristic
        );
        assert!(matches!(
            make_field(3, 20, None).unwrap_err(),
            FieldError::UnsupportedSize { .. }
        ));
        // x^2 - 1 = x^2 + 2 · 1 is reducible over F_3
        assert!(matches!(
            make_field(3, 2, Some(&[2, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus(_)
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 0, 2])).unwrap_err(),
            FieldError::InvalidModulus(_)
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 1])).unwrap_err(),
            FieldError::InvalidModulus(_)
        ));
    }

    #[test]
    fn default_modulus_is_lex_smallest() {
        // Independent oracle for F_9: a monic quadratic over F_3 is reducible
        // iff it has a root; scan all tuples lex-below the default.
        let f9 = make_field(3, 2, None).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        let has_root = |c0: u64, c1: u64| (0..3u64).any(|x| (x * x + c1 * x + c0) % 3 == 0);
        for (c0, c1) in [(0, 0), (0, 1), (0, 2)] {
            assert!(has_root(c0, c1), "({c0},{c1}) should be reducible");
        }
        assert!(!has_root(1, 0));

        // F_27: degree-3 reducibility over F_3 is likewise equivalent to
        // having a root.
        let f27 = make_field(3, 3, None).unwrap();
        assert_eq!(f27.modulus(), &[1, 0, 2, 1]);
        let has_root3 =
            |c: [u64; 3]| (0..3u64).any(|x| (x * x * x + c[2] * x * x + c[1] * x + c[0]) % 3 == 0);
        let mut below = Vec::new();
        'outer: for c0 in 0..3 {
            for c1 in 0..3 {
                for c2 in 0..3 {
                    if [c0, c1, c2] == [1, 0, 2] {
                        break 'outer;
                    }
                    below.push([c0, c1, c2]);
                }
            }
        }
        for c in below {
            assert!(has_root3(c), "{c:?} should be reducible");
        }
        assert!(!has_root3([1, 0, 2]));
    }

    #[test]
    fn explicit_f27_modulus_reduction() {
        // F_27 = F_3[w]/(w^3 + w^2 + w + 2): w^3 = 2w^2 + 2w + 1, encoded
        // 1 + 2·3 + 2·9 = 25.
        let f27 = f("3^3:2,1,1,1");
        let w = f27.el(3).unwrap();
        assert_eq!(f27.pow(w, 3).val(), 25);
        // and f(w) = 0
        let v = f27.add(
            f27.add(f27.pow(w, 3), f27.pow(w, 2)),
            f27.add(w, f27.el(2).unwrap()),
        );
        assert_eq!(v.val(), 0);
        assert_eq!(f27.to_string(), "3^3:2,1,1,1");
    }

    #[test]
    fn descriptor_roundtrip() {
        for d in ["7", "3^2:1,0,1", "3^3:2,1,1,1", "5^2:2,0,1"] {
            let spec = f(d);
            assert_eq!(spec.to_string(), d);
            assert_eq!(parse_field_descriptor(&spec.to_string()).unwrap(), spec);
        }
        // default-modulus shorthand
        assert_eq!(f("3^2").to_string(), "3^2:1,0,1");
        for bad in ["", "6", "3^", "^2", "3^2:1,0", "3^2:3,0,1", "x"] {
            assert!(parse_field_descriptor(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn quad_classes_and_sqrt() {
        let f7 = f("7");
        let squares: Vec<u64> = f7
            .elements()
            .filter(|&x| f7.quad_class(x) == QuadClass::Square)
            .map(|x| x.val())
            .collect();
        assert_eq!(squares, vec![1, 2, 4]);
        assert_eq!(f7.sqrt(f7.el(3).unwrap()), None);
        assert_eq!(f7.quad_class(f7.zero()), QuadClass::Zero);

        let f5 = f("5");
        assert_eq!(f5.sqrt(f5.el(4).unwrap()).unwrap().val(), 2);
        assert_eq!(f5.sqrt(f5.zero()).unwrap().val(), 0);

        // F_9 squares are {0, 1, 2, w, 2w} = encodings {0, 1, 2, 3, 6}
        let f9 = f("3^2");
        let sq9: Vec<u64> = f9
            .elements()
            .filter(|&x| f9.quad_class(x) != QuadClass::NonSquare)
            .map(|x| x.val())
            .collect();
        assert_eq!(sq9, vec![0, 1, 2, 3, 6]);
    }

    #[test]
    fn table_matches_euler_criterion() {
        for d in ["3", "5", "7", "13", "3^2", "5^2", "3^3:2,1,1,1", "7^2"] {
            let spec = f(d);
            for x in spec.elements() {
                assert_eq!(spec.quad_class(x), spec.euler_criterion(x), "{d} {x}");
            }
        }
    }

    #[test]
    fn sqrt_is_canonical_and_correct() {
        for d in ["3", "5", "13", "3^2", "3^3:2,1,1,1", "5^2"] {
            let spec = f(d);
            for x in spec.elements() {
                match spec.sqrt(x) {
                    Some(rt) => {
                        assert_eq!(spec.mul(rt, rt), x);
                        let other = spec.neg(rt);
                        assert!(rt.val() <= other.val(), "canonical root is the smaller");
                    }
                    None => assert_eq!(spec.quad_class(x), QuadClass::NonSquare),
                }
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(f("5").omega().unwrap().val(), 2);
        assert_eq!(f("13").omega().unwrap().val(), 5);
        assert_eq!(f("3^2").omega().unwrap().val(), 3); // w^2 = -1 under w^2 + 1
        assert!(matches!(
            f("7").omega(),
            Err(FieldError::NoRootOfMinusOne { q: 7 })
        ));
        assert!(f("3").omega().is_err());
    }

    #[test]
    fn quad_class_multiplicative() {
        for d in ["3", "5", "7", "3^2", "5^2", "3^3"] {
            let spec = f(d);
            for a in spec.elements().skip(1) {
                for b in spec.elements().skip(1) {
                    let expect = if (spec.quad_class(a) == QuadClass::Square)
                        == (spec.quad_class(b) == QuadClass::Square)
                    {
                        QuadClass::Square
                    } else {
                        QuadClass::NonSquare
                    };
                    assert_eq!(spec.quad_class(spec.mul(a, b)), expect);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_field_automorphism() {
        let f27 = f("3^3:2,1,1,1");
        for a in f27.elements() {
            // fixes the prime field
            if a.val() < 3 {
                assert_eq!(f27.frobenius(a, 1), a);
            }
            // order divides r
            let mut x = a;
            for _ in 0..3 {
                x = f27.frobenius(x, 1);
            }
            assert_eq!(x, a);
            for b in f27.elements() {
                assert_eq!(
                    f27.frobenius(f27.add(a, b), 1),
                    f27.add(f27.frobenius(a, 1), f27.frobenius(b, 1))
                );
            }
        }
        let f9 = f("3^2");
        for a in f9.elements() {
            assert_eq!(f9.frobenius(f9.frobenius(a, 1), 1), a);
            assert_eq!(f9.frobenius(a, 0), a);
        }
    }

    #[test]
    fn inverse_and_pow_reduction() {
        for d in ["5", "13", "3^2", "3^3:2,1,1,1", "5^2"] {
            let spec = f(d);
            let q = spec.q();
            for x in spec.elements().skip(1) {
                assert_eq!(spec.mul(x, spec.inv(x).unwrap()), spec.one());
                assert_eq!(spec.pow(x, q - 1), spec.one());
                assert_eq!(spec.pow(x, q), x); // exponent reduction
            }
            assert_eq!(spec.inv(spec.zero()).unwrap_err(), FieldError::ZeroInverse);
        }
    }

    #[test]
    fn poly_and_tabled_representations_agree() {
        // F_27 fits the table cap; rebuild it untabled by exercising the
        // polynomial path through a large-q spec is impossible under the cap,
        // so instead check table entries against direct polynomial products.
        let f27 = f("3^3:2,1,1,1");
        for a in f27.elements() {
            for b in f27.elements() {
                let direct = {
                    let pa = [a.val() % 3, (a.val() / 3) % 3, a.val() / 9];
                    let pb = [b.val() % 3, (b.val() / 3) % 3, b.val() / 9];
                    let mut prod = [0u64; 5];
                    for i in 0..3 {
                        for j in 0..3 {
                            prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % 3;
                        }
                    }
                    // reduce with w^3 = 2w^2+2w+1, w^4 = w·w^3 = 2w^3+2w^2+w
                    for d in (3..5).rev() {
                        let c = prod[d];
                        prod[d] = 0;
                        prod[d - 3] = (prod[d - 3] + c * 1) % 3;
                        prod[d - 2] = (prod[d - 2] + c * 2) % 3;
                        prod[d - 1] = (prod[d - 1] + c * 2) % 3;
                    }
                    prod[0] + 3 * prod[1] + 9 * prod[2]
                };
                assert_eq!(f27.mul(a, b).val(), direct, "{} * {}", a, b);
            }
        }
    }

    #[test]
    fn format_element_polynomial_form() {
        let f27 = f("3^3:2,1,1,1");
        assert_eq!(f27.format_element(f27.el(0).unwrap()), "0");
        assert_eq!(f27.format_element(f27.el(5).unwrap()), "2+w");
        assert_eq!(f27.format_element(f27.el(25).unwrap()), "1+2w+2w^2");
        assert_eq!(f("7").format_element(f("7").el(5).unwrap()), "5");
    }
}
