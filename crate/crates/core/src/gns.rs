//! The elementary Weyl algebra over `L = C ⊕ N` with `σ_L((c,n),(c',n')) = cn' − c'n`
//! in its non-regular GNS representation on finitely supported vectors
//! over the discrete charge group.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Result;
use crate::exact::{fmt_q, to_f64, Q};
use crate::weyl::{Key, SymplecticForm, WeylElement};

/// A point `(c, n)` of the elementary plane, both coordinates exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LVector {
    pub c: Q,
    pub n: Q,
}

impl LVector {
    pub fn new(c: Q, n: Q) -> LVector {
        LVector { c, n }
    }
}

impl Key for LVector {
    fn origin() -> Self {
        LVector::new(Q::zero(), Q::zero())
    }
    fn plus(&self, o: &Self) -> Self {
        LVector::new(&self.c + &o.c, &self.n + &o.n)
    }
    fn negated(&self) -> Self {
        LVector::new(-&self.c, -&self.n)
    }
    fn is_origin(&self) -> bool {
        self.c.is_zero() && self.n.is_zero()
    }
}

/// The form `σ_L` on the elementary plane.
#[derive(Debug, Clone, Copy, Default)]
pub struct ElementaryPlane;

impl SymplecticForm<LVector> for ElementaryPlane {
    fn sigma(&self, a: &LVector, b: &LVector) -> Result<f64> {
        Ok(to_f64(&(&a.c * &b.n - &b.c * &a.n)))
    }
}

/// Finitely supported vector; the amplitude at charge `c` multiplies `|c,0⟩`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GnsVector {
    amps: BTreeMap<Q, Complex64>,
}

impl GnsVector {
    pub fn zero() -> GnsVector {
        GnsVector::default()
    }

    /// `|c, 0⟩`
    pub fn basis(c: Q) -> GnsVector {
        GnsVector::from_amps([(c, Complex64::new(1.0, 0.0))])
    }

    /// `|c, n⟩ = e^{icn/2} |c, 0⟩`
    pub fn ket(c: Q, n: f64) -> GnsVector {
        let phase = Complex64::from_polar(1.0, 0.5 * to_f64(&c) * n);
        GnsVector::from_amps([(c, phase)])
    }

    /// The cyclic vector `|0, 0⟩`.
    pub fn vacuum() -> GnsVector {
        GnsVector::basis(Q::zero())
    }

    pub fn from_amps(amps: impl IntoIterator<Item = (Q, Complex64)>) -> GnsVector {
        let mut v = GnsVector::zero();
        for (c, a) in amps {
            v.push(c, a);
        }
        v.canonical()
    }

    fn push(&mut self, c: Q, a: Complex64) {
        *self.amps.entry(c).or_insert(Complex64::zero()) += a;
    }

    fn canonical(mut self) -> GnsVector {
        self.amps.retain(|_, a| !a.is_zero());
        self
    }

    pub fn amps(&self) -> &BTreeMap<Q, Complex64> {
        &self.amps
    }

    pub fn amp(&self, c: &Q) -> Complex64 {
        self.amps.get(c).copied().unwrap_or(Complex64::zero())
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn add(&self, o: &GnsVector) -> GnsVector {
        let mut out = self.clone();
        for (c, a) in &o.amps {
            out.push(c.clone(), *a);
        }
        out.canonical()
    }

    pub fn scale(&self, s: Complex64) -> GnsVector {
        GnsVector {
            amps: self.amps.iter().map(|(c, a)| (c.clone(), a * s)).collect(),
        }
        .canonical()
    }

    pub fn sub(&self, o: &GnsVector) -> GnsVector {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn distance(&self, o: &GnsVector) -> f64 {
        self.sub(o).norm_sq().sqrt()
    }
}

/// `⟨u, v⟩`, antilinear in the first slot.
pub fn sector_inner(u: &GnsVector, v: &GnsVector) -> Complex64 {
    u.amps
        .iter()
        .map(|(c, a)| a.conj() * v.amp(c))
        .sum()
}

/// `π(W(c,n)) |c'⟩ = e^{i n (2c' + c)/2} |c + c'⟩`.
pub fn apply_elementary(c: &Q, n: f64, v: &GnsVector) -> GnsVector {
    let cf = to_f64(c);
    GnsVector::from_amps(v.amps.iter().map(|(cp, a)| {
        let phase = Complex64::from_polar(1.0, 0.5 * n * (2.0 * to_f64(cp) + cf));
        (cp + c, a * phase)
    }))
}

pub fn apply_element(a: &WeylElement<LVector>, v: &GnsVector) -> GnsVector {
    let mut out = GnsVector::zero();
    for (k, coef) in a.terms() {
        out = out.add(&apply_elementary(&k.c, to_f64(&k.n), v).scale(*coef));
    }
    out
}

/// `⟨0|A|0⟩`, the sum of the coefficients of chargeless keys.
pub fn sector_trace(a: &WeylElement<LVector>) -> Complex64 {
    a.terms()
        .iter()
        .filter(|(k, _)| k.c.is_zero())
        .map(|(_, c)| *c)
        .sum()
}

/// `Φ_N |c⟩ = c |c⟩`.
pub fn phi_n_apply(v: &GnsVector) -> GnsVector {
    GnsVector::from_amps(v.amps.iter().map(|(c, a)| (c.clone(), a * to_f64(c))))
}

/// `(π(W(0,n)) − I) v / (i n)`, which tends to `Φ_N v` as `n → 0`.
pub fn phi_n_difference(n: f64, v: &GnsVector) -> GnsVector {
    let shifted = apply_elementary(&Q::zero(), n, v).sub(v);
    shifted.scale(Complex64::new(0.0, -1.0 / n))
}

/// Operator norm of `π(W(v1)) − π(W(v2))` restricted to the span of the
/// given charge basis vectors.
pub fn domain_distance(v1: &LVector, v2: &LVector, domain: &[Q]) -> f64 {
    let mut targets: Vec<Q> = Vec::new();
    let mut cols = Vec::new();
    for d in domain {
        let basis = GnsVector::basis(d.clone());
        let img = apply_elementary(&v1.c, to_f64(&v1.n), &basis)
            .sub(&apply_elementary(&v2.c, to_f64(&v2.n), &basis));
        for c in img.amps.keys() {
            if !targets.contains(c) {
                targets.push(c.clone());
            }
        }
        cols.push(img);
    }
    if targets.is_empty() {
        return 0.0;
    }
    let m = DMatrix::from_fn(targets.len(), domain.len(), |i, j| cols[j].amp(&targets[i]));
    m.singular_values().max()
}

/// Largest restricted distance over every two-charge domain on which the
/// two operators can interfere, plus the non-interfering domain `{0, 1}`.
pub fn two_charge_norm_distance(v1: &LVector, v2: &LVector) -> f64 {
    let shift = &v1.c - &v2.c;
    let mut best: f64 = 0.0;
    let zero = Q::zero();
    let probe = Q::from_integer(1.into());
    let mut domains = vec![(zero.clone(), probe.clone())];
    if !shift.is_zero() {
        domains.push((zero.clone(), shift.clone()));
        domains.push((zero.clone(), -&shift));
        domains.push((probe.clone(), &probe + &shift));
    }
    for (a, b) in domains {
        if a != b {
            best = best.max(domain_distance(v1, v2, &[a, b]));
        }
    }
    best
}

/// Norm distance on the `k`-charge chain `{0, d, 2d, ...}` with `d = c1 − c2`;
/// it increases towards 2 as `k` grows.
pub fn chain_norm_distance(v1: &LVector, v2: &LVector, k: usize) -> f64 {
    let d = &v1.c - &v2.c;
    let domain: Vec<Q> = (0..k as i64).map(|j| &d * Q::from_integer(j.into())).collect();
    domain_distance(v1, v2, &domain)
}

pub fn describe(v: &GnsVector) -> String {
    let parts: Vec<String> = v
        .amps
        .iter()
        .map(|(c, a)| format!("({:.6}{:+.6}i)|{}⟩", a.re, a.im, fmt_q(c)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
