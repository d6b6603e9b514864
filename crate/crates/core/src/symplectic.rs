//! Symplectic spaces spanned by registered generator pairs `f0 ⊕ f1`, their
//! charge functionals, the center splitting and the regularizing map ψ_T.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_q, q, to_f64, Q};
use crate::funcspace::{
    self, first_moment, integrate, pairing, spectrum_of_samples, weight_at, Grid, Localization,
    TestFunction, Weight, TOL_CHARGE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    fn ix(self) -> usize {
        self.0 as usize
    }
}

/// A registered pair `F = f0 ⊕ f1` with its exact charges.
#[derive(Debug, Clone)]
pub struct PairGenerator {
    pub id: String,
    pub f0: TestFunction,
    pub f1: TestFunction,
    pub declared_c: Q,
    pub declared_q: Q,
    pub declared_inf: Q,
    pub loc: Localization,
}

/// Finite exact-rational combination of generators. Zero coefficients are
/// never stored, so derived equality is exact equality of vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymVector {
    coords: BTreeMap<GenId, Q>,
}

impl SymVector {
    pub fn zero() -> SymVector {
        SymVector::default()
    }

    pub fn gen(id: GenId) -> SymVector {
        SymVector::from_terms([(id, q(1))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GenId, Q)>) -> SymVector {
        let mut v = SymVector::zero();
        for (id, c) in terms {
            v.add_term(id, &c);
        }
        v
    }

    pub fn add_term(&mut self, id: GenId, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(id).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&id);
        }
    }

    pub fn coords(&self) -> &BTreeMap<GenId, Q> {
        &self.coords
    }

    pub fn coeff(&self, id: GenId) -> Q {
        self.coords.get(&id).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, a: &Q) -> SymVector {
        if a.is_zero() {
            return SymVector::zero();
        }
        SymVector {
            coords: self.coords.iter().map(|(k, v)| (*k, v * a)).collect(),
        }
    }

    /// `self + a·other`
    pub fn axpy(&self, a: &Q, other: &SymVector) -> SymVector {
        let mut out = self.clone();
        for (id, c) in &other.coords {
            out.add_term(*id, &(c * a));
        }
        out
    }
}

impl Add for &SymVector {
    type Output = SymVector;
    fn add(self, rhs: &SymVector) -> SymVector {
        self.axpy(&q(1), rhs)
    }
}

impl Sub for &SymVector {
    type Output = SymVector;
    fn sub(self, rhs: &SymVector) -> SymVector {
        self.axpy(&q(-1), rhs)
    }
}

impl Neg for &SymVector {
    type Output = SymVector;
    fn neg(self) -> SymVector {
        self.scale(&q(-1))
    }
}

/// Charges of a vector. `n` and `r` are only defined relative to a
/// regularizing element.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeData {
    pub c: Q,
    pub q: Q,
    pub inf: Q,
    pub minus: Q,
    pub plus: Q,
    pub n: Option<f64>,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpaceKind {
    Va,
    Vb,
    Vc,
    Vq,
    Ve,
    Vf,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 6] = [
        SpaceKind::Va,
        SpaceKind::Vb,
        SpaceKind::Vc,
        SpaceKind::Vq,
        SpaceKind::Ve,
        SpaceKind::Vf,
    ];

    pub fn admits(self, c: &Q, q: &Q, inf: &Q) -> bool {
        match self {
            SpaceKind::Va => c.is_zero() && q.is_zero() && inf.is_zero(),
            SpaceKind::Vb => c.is_zero() && q.is_zero(),
            SpaceKind::Vc => q.is_zero(),
            SpaceKind::Vq => c.is_zero() && inf.is_zero(),
            SpaceKind::Ve => c.is_zero(),
            SpaceKind::Vf => true,
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceKind::Va => "Va",
            SpaceKind::Vb => "Vb",
            SpaceKind::Vc => "Vc",
            SpaceKind::Vq => "Vq",
            SpaceKind::Ve => "Ve",
            SpaceKind::Vf => "Vf",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Spectra {
    f0: Vec<Complex64>,
    f1: Vec<Complex64>,
    dp: f64,
    moment0: f64,
    mean1: f64,
}

/// Append-only generator store with cached pairings and Fock Gram entries.
#[derive(Debug, Clone)]
pub struct Registry {
    grid: Grid,
    gens: Vec<PairGenerator>,
    index: HashMap<String, GenId>,
    // p[i][j] = ∫ f0_i f1_j
    p: Vec<Vec<f64>>,
    fock: Vec<Vec<f64>>,
    spectra: Vec<Spectra>,
    momenta: Vec<f64>,
    center: Option<GenId>,
    canonical: Option<SymVector>,
    charge_tol: f64,
}

impl Registry {
    pub fn new(grid: Grid) -> Registry {
        Registry {
            grid,
            gens: Vec::new(),
            index: HashMap::new(),
            p: Vec::new(),
            fock: Vec::new(),
            spectra: Vec::new(),
            momenta: Vec::new(),
            center: None,
            canonical: None,
            charge_tol: TOL_CHARGE,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.gens.len() as u32).map(GenId)
    }

    pub fn generator(&self, id: GenId) -> Result<&PairGenerator> {
        self.gens
            .get(id.ix())
            .ok_or_else(|| Error::UnknownGenerator(format!("#{}", id.0)))
    }

    pub fn id(&self, name: &str) -> Result<GenId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn vector(&self, name: &str) -> Result<SymVector> {
        Ok(SymVector::gen(self.id(name)?))
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id.ix()].id
    }

    /// Tolerance for declared charges against quadrature; loosened for
    /// coarse grids.
    pub fn set_charge_tolerance(&mut self, tol: f64) {
        self.charge_tol = tol;
    }

    pub fn register(&mut self, name: &str, f0: TestFunction, f1: TestFunction, c: Q) -> Result<GenId> {
        if self.index.contains_key(name) {
            return Err(Error::InvalidKey(format!("generator {name} is already registered")));
        }
        if f0.grid() != &self.grid || f1.grid() != &self.grid {
            return Err(Error::BadGrid(format!("generator {name} is not on the registry grid")));
        }
        if !f0.left().is_zero() {
            return Err(Error::NonDecaying("left"));
        }
        if !f0.right().is_zero() {
            return Err(Error::NonDecaying("right"));
        }
        let measured = integrate(&f0);
        if (measured - to_f64(&c)).abs() > self.charge_tol {
            return Err(Error::ChargeMismatch {
                id: name.to_string(),
                declared: fmt_q(&c),
                measured,
            });
        }
        let asym = f1.asymptotics();
        let loc = funcspace::localization(&f0, &f1);
        let id = GenId(self.gens.len() as u32);
        let gen = PairGenerator {
            id: name.to_string(),
            f0,
            f1,
            declared_c: c,
            declared_q: &asym.plus - &asym.minus,
            declared_inf: asym.inf,
            loc,
        };
        self.extend_tables(&gen)?;
        self.gens.push(gen);
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    fn extend_tables(&mut self, gen: &PairGenerator) -> Result<()> {
        let s0 = spectrum_of_samples(&self.grid, gen.f0.samples());
        let s1 = spectrum_of_samples(&self.grid, gen.f1.samples());
        if self.momenta.is_empty() {
            self.momenta = (0..s0.values.len()).map(|k| s0.momentum(k)).collect();
        }
        let spec = Spectra {
            f0: s0.values,
            f1: s1.values,
            dp: s0.dp,
            moment0: first_moment(&gen.f0),
            mean1: integrate(&gen.f1),
        };
        let n = self.gens.len();
        let mut row = Vec::with_capacity(n + 1);
        for other in &self.gens {
            row.push(pairing(&gen.f0, &other.f1)?);
        }
        let mut col = Vec::with_capacity(n + 1);
        for other in &self.gens {
            col.push(pairing(&other.f0, &gen.f1)?);
        }
        let own = pairing(&gen.f0, &gen.f1)?;
        for (i, r) in self.p.iter_mut().enumerate() {
            r.push(col[i]);
        }
        row.push(own);
        self.p.push(row);

        let mut frow = Vec::with_capacity(n + 1);
        for other in &self.spectra {
            frow.push(self.fock_entry(&spec, other));
        }
        let diag = self.fock_entry(&spec, &spec);
        for (i, r) in self.fock.iter_mut().enumerate() {
            r.push(frow[i]);
        }
        frow.push(diag);
        self.fock.push(frow);
        self.spectra.push(spec);
        Ok(())
    }

    fn fock_entry(&self, a: &Spectra, b: &Spectra) -> f64 {
        let mut acc = 0.0;
        for (k, &p) in self.momenta.iter().enumerate() {
            let inv = weight_at(Weight::InvAbs, p) * (a.f0[k] * b.f0[k].conj()).re;
            let abs = weight_at(Weight::Abs, p) * (a.f1[k] * b.f1[k].conj()).re;
            acc += inv + abs;
        }
        let dp = a.dp;
        let corr = dp * dp / 6.0 / (2.0 * std::f64::consts::PI)
            * (a.moment0 * b.moment0 + a.mean1 * b.mean1);
        acc * dp + corr
    }

    pub fn set_center(&mut self, id: GenId) -> Result<()> {
        let g = self.generator(id)?;
        let constant = g.declared_c.is_zero()
            && g.f0.samples().iter().all(|v| *v == 0.0)
            && g.f1.left() == g.f1.right()
            && !g.f1.left().is_zero();
        if !constant {
            return Err(Error::InvalidKey(format!("{} is not a constant pair 0 ⊕ n", g.id)));
        }
        // normalize to 0 ⊕ 1 by the caller's declared value
        if g.f1.left() != &q(1) {
            return Err(Error::InvalidKey(format!("{} must be 0 ⊕ 1", g.id)));
        }
        self.center = Some(id);
        Ok(())
    }

    /// The generator `N = 0 ⊕ 1` spanning the center of `Vb`.
    pub fn center(&self) -> Result<GenId> {
        self.center
            .ok_or_else(|| Error::UnknownGenerator("center element 0 ⊕ 1".into()))
    }

    /// Registers `0 ⊕ 1` if no center generator exists yet.
    pub fn ensure_center(&mut self) -> Result<GenId> {
        if let Some(id) = self.center {
            return Ok(id);
        }
        let f0 = TestFunction::zero(&self.grid);
        let f1 = TestFunction::constant(&self.grid, q(1));
        let id = self.register("N", f0, f1, q(0))?;
        self.center = Some(id);
        Ok(id)
    }

    pub fn set_canonical_regularizer(&mut self, t: SymVector) {
        self.canonical = Some(t);
    }

    pub fn canonical_regularizer(&self) -> Option<&SymVector> {
        self.canonical.as_ref()
    }

    fn check(&self, v: &SymVector) -> Result<()> {
        match v.coords.keys().find(|id| id.ix() >= self.gens.len()) {
            Some(id) => Err(Error::UnknownGenerator(format!("#{}", id.0))),
            None => Ok(()),
        }
    }

    /// `∫ f0 g1` on two vectors.
    pub fn p_form(&self, f: &SymVector, g: &SymVector) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        let mut acc = 0.0;
        for (i, a) in &f.coords {
            let a = to_f64(a);
            for (j, b) in &g.coords {
                acc += a * to_f64(b) * self.p[i.ix()][j.ix()];
            }
        }
        Ok(acc)
    }

    /// `σ(F, G) = ∫ (f0 g1 − f1 g0) dx`.
    pub fn sigma(&self, f: &SymVector, g: &SymVector) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        let mut acc = 0.0;
        for (i, a) in &f.coords {
            let a = to_f64(a);
            for (j, b) in &g.coords {
                let s = self.p[i.ix()][j.ix()] - self.p[j.ix()][i.ix()];
                acc += a * to_f64(b) * s;
            }
        }
        Ok(acc)
    }

    pub fn charges(&self, f: &SymVector, t: Option<&SymVector>) -> Result<ChargeData> {
        self.check(f)?;
        let mut c = q(0);
        let mut minus = q(0);
        let mut plus = q(0);
        for (id, a) in &f.coords {
            let g = &self.gens[id.ix()];
            c += a * &g.declared_c;
            minus += a * g.f1.left();
            plus += a * g.f1.right();
        }
        let qq = &plus - &minus;
        let inf = (&plus + &minus) / q(2);
        let (n, r) = match t {
            None => (None, None),
            Some(t) => {
                let (n, r) = self.regularized_coordinates(f, t)?;
                (Some(n), Some(r))
            }
        };
        Ok(ChargeData {
            c,
            q: qq,
            inf,
            minus,
            plus,
            n,
            r,
        })
    }

    /// `(F_n, F_r)` relative to `T`:
    /// `F_n = ∫ f1 τ0 / T_c` and `F_r = (∫ f0 τ1 − (F_c/T_c) ∫ τ0 τ1) / T_q`.
    fn regularized_coordinates(&self, f: &SymVector, t: &SymVector) -> Result<(f64, f64)> {
        let tc = self.charges(t, None)?;
        if tc.c.is_zero() || tc.q.is_zero() {
            return Err(Error::DegenerateRegularizer {
                tc: fmt_q(&tc.c),
                tq: fmt_q(&tc.q),
            });
        }
        let fc = self.charges(f, None)?.c;
        let t_c = to_f64(&tc.c);
        let t_q = to_f64(&tc.q);
        let n = self.p_form(t, f)? / t_c;
        let k = self.p_form(t, t)?;
        let r = (self.p_form(f, t)? - to_f64(&fc) / t_c * k) / t_q;
        Ok((n, r))
    }

    pub fn member(&self, kind: SpaceKind, f: &SymVector) -> Result<bool> {
        let ch = self.charges(f, None)?;
        Ok(kind.admits(&ch.c, &ch.q, &ch.inf))
    }

    /// Smallest space of the inclusion diagram containing `f`.
    pub fn smallest_space(&self, f: &SymVector) -> Result<SpaceKind> {
        for kind in SpaceKind::ALL {
            if self.member(kind, f)? {
                return Ok(kind);
            }
        }
        Ok(SpaceKind::Vf)
    }

    /// `F ↦ (F − F_inf·N, F_inf)` on `Ve`.
    pub fn split_off_center(&self, f: &SymVector) -> Result<(SymVector, Q)> {
        let ch = self.charges(f, None)?;
        if !ch.c.is_zero() {
            return Err(Error::NotInDomain(format!(
                "split_off_center needs F_c = 0, got {}",
                fmt_q(&ch.c)
            )));
        }
        if ch.inf.is_zero() {
            return Ok((f.clone(), q(0)));
        }
        let n = self.center()?;
        Ok((f.axpy(&-&ch.inf, &SymVector::gen(n)), ch.inf))
    }

    /// `‖T_a F‖²` from the cached generator Gram table.
    pub fn fock_norm_sq(&self, f: &SymVector) -> Result<f64> {
        if !self.member(SpaceKind::Va, f)? {
            return Err(Error::NotInDomain(format!(
                "Fock norm of {} outside Va",
                self.format(f)
            )));
        }
        let mut acc = 0.0;
        for (i, a) in &f.coords {
            let a = to_f64(a);
            for (j, b) in &f.coords {
                acc += a * to_f64(b) * self.fock[i.ix()][j.ix()];
            }
        }
        Ok(acc.max(0.0))
    }

    /// The two component functions of a vector.
    pub fn materialize(&self, f: &SymVector) -> Result<(TestFunction, TestFunction)> {
        self.check(f)?;
        let t0: Vec<(Q, &TestFunction)> = f
            .coords
            .iter()
            .map(|(id, a)| (a.clone(), &self.gens[id.ix()].f0))
            .collect();
        let t1: Vec<(Q, &TestFunction)> = f
            .coords
            .iter()
            .map(|(id, a)| (a.clone(), &self.gens[id.ix()].f1))
            .collect();
        Ok((
            TestFunction::combine(&self.grid, &t0)?,
            TestFunction::combine(&self.grid, &t1)?,
        ))
    }

    pub fn localization(&self, f: &SymVector) -> Result<Localization> {
        if f.len() == 1 {
            let (id, _) = f.coords.iter().next().expect("one term");
            return Ok(self.generator(*id)?.loc);
        }
        let (f0, f1) = self.materialize(f)?;
        Ok(funcspace::localization(&f0, &f1))
    }

    pub fn format(&self, f: &SymVector) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (id, a)) in f.coords.iter().enumerate() {
            let name = self
                .gens
                .get(id.ix())
                .map(|g| g.id.clone())
                .unwrap_or_else(|| format!("#{}", id.0));
            let neg = a.is_negative();
            let mag = a.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != q(1) {
                out.push_str(&fmt_q(&mag));
                out.push(' ');
            }
            out.push_str(&name);
        }
        out
    }
}

/// Regularizing element `T` with its split parts registered as generators
/// `T.0 = τ0 ⊕ 0` and `T.1 = 0 ⊕ τ1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularizer {
    pub t: SymVector,
    pub t0: GenId,
    pub t1: GenId,
    pub center: GenId,
    pub tc: Q,
    pub tq: Q,
    pub tinf: Q,
    pub cross: f64,
}

/// Image of ψ_T: `F_t ∈ Va`, `F_l = (F_c, F_n)`, `F_m = (F_r, F_q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiT {
    pub ft: SymVector,
    pub l: (Q, f64),
    pub m: (f64, Q),
}

pub fn sigma_l(a: &(Q, f64), b: &(Q, f64)) -> f64 {
    to_f64(&a.0) * b.1 - to_f64(&b.0) * a.1
}

pub fn sigma_m(a: &(f64, Q), b: &(f64, Q)) -> f64 {
    a.0 * to_f64(&b.1) - b.0 * to_f64(&a.1)
}

impl Regularizer {
    pub fn new(reg: &mut Registry, t: &SymVector, label: &str) -> Result<Regularizer> {
        let ch = reg.charges(t, None)?;
        if ch.c.is_zero() || ch.q.is_zero() {
            return Err(Error::DegenerateRegularizer {
                tc: fmt_q(&ch.c),
                tq: fmt_q(&ch.q),
            });
        }
        let center = reg.ensure_center()?;
        let (tau0, tau1) = reg.materialize(t)?;
        let zero = TestFunction::zero(reg.grid());
        let n0 = format!("{label}.0");
        let n1 = format!("{label}.1");
        let t0 = match reg.id(&n0) {
            Ok(id) => id,
            Err(_) => reg.register(&n0, tau0, zero.clone(), ch.c.clone())?,
        };
        let t1 = match reg.id(&n1) {
            Ok(id) => id,
            Err(_) => reg.register(&n1, zero, tau1, q(0))?,
        };
        let cross = reg.p_form(t, t)?;
        Ok(Regularizer {
            t: t.clone(),
            t0,
            t1,
            center,
            tc: ch.c,
            tq: ch.q,
            tinf: ch.inf,
            cross,
        })
    }

    /// Exact coefficients `(a, b, k)` with `F − a·T.0 − b·T.1 − k·N ∈ Va`.
    pub fn split_coefficients(&self, reg: &Registry, f: &SymVector) -> Result<(Q, Q, Q)> {
        let ch = reg.charges(f, None)?;
        let a = &ch.c / &self.tc;
        let b = &ch.q / &self.tq;
        let k = &ch.inf - &b * &self.tinf;
        Ok((a, b, k))
    }

    pub fn charge_part(&self, reg: &Registry, f: &SymVector) -> Result<SymVector> {
        let (a, b, _) = self.split_coefficients(reg, f)?;
        Ok(SymVector::from_terms([(self.t0, a), (self.t1, b)]))
    }

    pub fn psi(&self, reg: &Registry, f: &SymVector) -> Result<PsiT> {
        let ch = reg.charges(f, None)?;
        let (a, b, k) = self.split_coefficients(reg, f)?;
        let ft = f
            .axpy(&-&a, &SymVector::gen(self.t0))
            .axpy(&-&b, &SymVector::gen(self.t1))
            .axpy(&-&k, &SymVector::gen(self.center));
        let t_c = to_f64(&self.tc);
        let t_q = to_f64(&self.tq);
        let fn_ = reg.p_form(&SymVector::gen(self.t0), f)? / t_c;
        let fr = (reg.p_form(f, &SymVector::gen(self.t1))? - to_f64(&a) * self.cross) / t_q;
        Ok(PsiT {
            ft,
            l: (ch.c, fn_),
            m: (fr, ch.q),
        })
    }
}

/// ψ_T as a single call; registers the split parts of `T` on first use.
pub fn psi_t(reg: &mut Registry, t: &SymVector, f: &SymVector) -> Result<PsiT> {
    let label = regularizer_label(reg, t);
    Regularizer::new(reg, t, &label)?.psi(reg, f)
}

/// Stable generator-name stem for the split parts of `t`.
pub fn regularizer_label(reg: &Registry, t: &SymVector) -> String {
    if t.len() == 1 {
        let (id, c) = t.coords().iter().next().expect("one term");
        if *c == q(1) {
            return reg.name(*id).to_string();
        }
    }
    let mut h = std::collections::hash_map::DefaultHasher::new();
    std::hash::Hash::hash(&reg.format(t), &mut h);
    format!("R{:016x}", std::hash::Hasher::finish(&h))
}
