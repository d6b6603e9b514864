//! Finite complex combinations of Weyl generators `W(v)` with the product
//! `W(v)W(v') = e^{-iσ(v,v')/2} W(v+v')` and involution `W(v)* = W(-v)`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::registry_file::parse_vector;
use crate::symplectic::{Registry, SymVector};

/// Coefficients below this modulus are dropped by `normalize`.
pub const COEFF_FLOOR: f64 = 1e-15;

/// Exact keys of a Weyl algebra: an additive group.
pub trait Key: Clone + Ord + Debug {
    fn origin() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_origin(&self) -> bool;
}

/// A real antisymmetric bilinear form on keys.
pub trait SymplecticForm<K> {
    fn sigma(&self, a: &K, b: &K) -> Result<f64>;
}

impl Key for SymVector {
    fn origin() -> Self {
        SymVector::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_origin(&self) -> bool {
        self.is_zero()
    }
}

impl SymplecticForm<SymVector> for Registry {
    fn sigma(&self, a: &SymVector, b: &SymVector) -> Result<f64> {
        Registry::sigma(self, a, b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement<K: Key = SymVector> {
    terms: BTreeMap<K, Complex64>,
}

impl<K: Key> Default for WeylElement<K> {
    fn default() -> Self {
        WeylElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Key> WeylElement<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::generator(K::origin())
    }

    pub fn generator(k: K) -> Self {
        Self::term(k, Complex64::new(1.0, 0.0))
    }

    pub fn term(k: K, c: Complex64) -> Self {
        let mut e = Self::zero();
        e.push(k, c);
        e.normalize()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Complex64)>) -> Self {
        let mut e = Self::zero();
        for (k, c) in terms {
            e.push(k, c);
        }
        e.normalize()
    }

    fn push(&mut self, k: K, c: Complex64) {
        *self.terms.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= COEFF_FLOOR);
        self
    }

    pub fn terms(&self) -> &BTreeMap<K, Complex64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> Complex64 {
        self.terms.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(k.clone(), *c);
        }
        out.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        WeylElement {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * a)).collect(),
        }
        .normalize()
    }

    /// Applies `c ↦ c·phase(key)` to every term.
    pub fn map_phases(&self, mut phase: impl FnMut(&K) -> Result<Complex64>) -> Result<Self> {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.push(k.clone(), c * phase(k)?);
        }
        Ok(out.normalize())
    }

    pub fn retain(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        WeylElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    /// Largest coefficientwise deviation between two elements.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, c) in &self.terms {
            worst = worst.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

pub fn weyl_mul<K: Key, S: SymplecticForm<K> + ?Sized>(
    form: &S,
    a: &WeylElement<K>,
    b: &WeylElement<K>,
) -> Result<WeylElement<K>> {
    let mut out = WeylElement::zero();
    for (u, x) in &a.terms {
        for (v, y) in &b.terms {
            let s = form.sigma(u, v)?;
            let phase = Complex64::from_polar(1.0, -0.5 * s);
            out.push(u.plus(v), x * y * phase);
        }
    }
    Ok(out.normalize())
}

pub fn weyl_star<K: Key>(a: &WeylElement<K>) -> WeylElement<K> {
    WeylElement {
        terms: a
            .terms
            .iter()
            .map(|(k, c)| (k.negated(), c.conj()))
            .collect(),
    }
}

/// `σ(s,t) + σ(r,s+t) − σ(r,s) − σ(r+s,t)`, the defect of the cocycle
/// identity for `y(s,t) = e^{-iσ(s,t)/2}`.
pub fn cocycle_residual<K: Key, S: SymplecticForm<K> + ?Sized>(
    form: &S,
    r: &K,
    s: &K,
    t: &K,
) -> Result<f64> {
    let lhs = form.sigma(s, t)? + form.sigma(r, &s.plus(t))?;
    let rhs = form.sigma(r, s)? + form.sigma(&r.plus(s), t)?;
    Ok(lhs - rhs)
}

pub fn cocycle_check<K: Key, S: SymplecticForm<K> + ?Sized>(form: &S, r: &K, s: &K, t: &K) -> Result<bool> {
    Ok(cocycle_residual(form, r, s, t)?.abs() <= 1e-9)
}

/// Coefficientwise defect of `W(v)W(w) = e^{-iσ(v,w)} W(w)W(v)`.
pub fn exchange_residual<K: Key, S: SymplecticForm<K> + ?Sized>(form: &S, v: &K, w: &K) -> Result<f64> {
    let a = WeylElement::generator(v.clone());
    let b = WeylElement::generator(w.clone());
    let lhs = weyl_mul(form, &a, &b)?;
    let phase = Complex64::from_polar(1.0, -form.sigma(v, w)?);
    let rhs = weyl_mul(form, &b, &a)?.scale(phase);
    Ok(lhs.max_diff(&rhs))
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(s)
        .trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t.trim() {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            x => x.parse().ok(),
        }
    };
    match split {
        Some(i) => Some(Complex64::new(body[..i].trim().parse().ok()?, imag(&body[i..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// Parses literals such as `2.0+0.0i * W[a1 + 3/2 c1] - W[0]`.
///
/// A term is `[coefficient *] W[vector]`; terms are joined by `+` or `-`.
/// Coefficients are real or complex (`a+bi`, `bi`), optionally in
/// parentheses; `W[0]` is the identity.
pub fn parse_element(reg: &Registry, s: &str) -> Result<WeylElement> {
    let bad = |m: &str| Error::InvalidKey(format!("{m} in element `{s}`"));
    let mut out = WeylElement::zero();
    let mut rest = s.trim();
    let mut first = true;
    if rest.is_empty() {
        return Err(bad("empty literal"));
    }
    while !rest.is_empty() {
        let mut sign = 1.0;
        if !first {
            rest = match rest.as_bytes()[0] {
                b'+' => &rest[1..],
                b'-' => {
                    sign = -1.0;
                    &rest[1..]
                }
                _ => return Err(bad("expected + or - between terms")),
            };
        }
        let open = rest.find("W[").ok_or_else(|| bad("missing W["))?;
        let prefix = rest[..open].trim();
        let coeff = if prefix.is_empty() {
            Complex64::new(1.0, 0.0)
        } else if prefix == "-" {
            Complex64::new(-1.0, 0.0)
        } else {
            let c = prefix
                .strip_suffix('*')
                .ok_or_else(|| bad("coefficient must be followed by *"))?;
            parse_complex(c).ok_or_else(|| bad("unreadable coefficient"))?
        };
        let close = rest[open..].find(']').ok_or_else(|| bad("missing ]"))? + open;
        let key = parse_vector(reg, &rest[open + 2..close])?;
        out.push(key, coeff * sign);
        rest = rest[close + 1..].trim_start();
        first = false;
    }
    Ok(out.normalize())
}

fn fmt_f(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

/// Renders an element in the literal syntax accepted by `parse_element`.
pub fn format_element(reg: &Registry, a: &WeylElement) -> String {
    if a.is_empty() {
        return "0".into();
    }
    a.terms
        .iter()
        .map(|(k, c)| {
            let im = fmt_f(c.im);
            let sep = if im.starts_with('-') { "" } else { "+" };
            format!("({}{}{}i) * W[{}]", fmt_f(c.re), sep, im, reg.format(k))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The scalar multiple `a·W(0)`.
pub fn scalar<K: Key>(a: Complex64) -> WeylElement<K> {
    WeylElement::term(K::origin(), a)
}

/// A word `ζ W(h) W(l)` of the crossed product, with `h` in the observable
/// part and `l` in the charge part.
#[derive(Debug, Clone, PartialEq)]
pub struct StagedWord<K: Key = SymVector> {
    pub zeta: Complex64,
    pub h: K,
    pub l: K,
}

/// Staged product
/// `(ζ,h,l)(ζ',h',l') = (ζζ' e^{−iα(h',l)} e^{−iσ(l,l')/2} e^{−iσ(h,h')/2}, h+h', l+l')`
/// with `α(h', l) = σ(l, h')`.
pub fn staged_mul<K: Key, S: SymplecticForm<K> + ?Sized>(
    form: &S,
    a: &StagedWord<K>,
    b: &StagedWord<K>,
) -> Result<StagedWord<K>> {
    let alpha = form.sigma(&a.l, &b.h)?;
    let sl = form.sigma(&a.l, &b.l)?;
    let sh = form.sigma(&a.h, &b.h)?;
    let phase = Complex64::from_polar(1.0, -alpha - 0.5 * sl - 0.5 * sh);
    Ok(StagedWord {
        zeta: a.zeta * b.zeta * phase,
        h: a.h.plus(&b.h),
        l: a.l.plus(&b.l),
    })
}

/// `ζ W(h) W(l) = ζ e^{−iσ(h,l)/2} W(h+l)`
pub fn staged_to_global<K: Key, S: SymplecticForm<K> + ?Sized>(
    form: &S,
    w: &StagedWord<K>,
) -> Result<WeylElement<K>> {
    let phase = Complex64::from_polar(1.0, -0.5 * form.sigma(&w.h, &w.l)?);
    Ok(WeylElement::term(w.h.plus(&w.l), w.zeta * phase))
}
