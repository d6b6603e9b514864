//! Local nets over bounded intervals, represented by their localized
//! generators; sector automorphisms, gauge action and fixed points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{fmt_q, to_f64, Q};
use crate::funcspace::{Interval, Localization, TOL_QUAD};
use crate::symplectic::{regularizer_label, Regularizer, Registry, SpaceKind, SymVector};
use crate::weyl::WeylElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NetKind {
    A,
    B,
    C,
    Q,
    E,
    F,
}

impl NetKind {
    pub const ALL: [NetKind; 6] = [NetKind::A, NetKind::B, NetKind::C, NetKind::Q, NetKind::E, NetKind::F];

    pub fn space(self) -> SpaceKind {
        match self {
            NetKind::A => SpaceKind::Va,
            NetKind::B => SpaceKind::Vb,
            NetKind::C => SpaceKind::Vc,
            NetKind::Q => SpaceKind::Vq,
            NetKind::E => SpaceKind::Ve,
            NetKind::F => SpaceKind::Vf,
        }
    }

    /// Nets whose disjointly localized generators should commute.
    pub fn expected_local(self) -> bool {
        matches!(self, NetKind::A | NetKind::B | NetKind::C)
    }
}

impl fmt::Display for NetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for NetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<NetKind> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(NetKind::A),
            "B" => Ok(NetKind::B),
            "C" => Ok(NetKind::C),
            "Q" => Ok(NetKind::Q),
            "E" => Ok(NetKind::E),
            "F" => Ok(NetKind::F),
            _ => Err(Error::InvalidKey(format!("unknown net {s}"))),
        }
    }
}

/// Registered generators of `V_kind` localized in `i`. An empty list is the
/// zero space.
pub fn net_generators(reg: &Registry, kind: NetKind, i: &Interval) -> Result<Vec<SymVector>> {
    let mut out = Vec::new();
    for id in reg.ids() {
        let v = SymVector::gen(id);
        if i.contains_loc(&reg.generator(id)?.loc) && reg.member(kind.space(), &v)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Closed form of `σ(F, G)` for disjointly localized `F`, `G`:
/// `G_−F_c − F_+G_c` when `F` lies to the left, and `G_+F_c − F_−G_c` when
/// it lies to the right.
pub fn disjoint_phase(reg: &Registry, f: &SymVector, g: &SymVector, f_left: bool) -> Result<f64> {
    let cf = reg.charges(f, None)?;
    let cg = reg.charges(g, None)?;
    let v = if f_left {
        &cg.minus * &cf.c - &cf.plus * &cg.c
    } else {
        &cg.plus * &cf.c - &cf.minus * &cg.c
    };
    Ok(to_f64(&v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairPhase {
    pub f: String,
    pub g: String,
    pub sigma: f64,
    pub closed_form: f64,
    /// Both localizations are bounded.
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub kind: NetKind,
    pub pairs: Vec<PairPhase>,
    pub max_abs_sigma: f64,
    /// Same maximum over pairs with bounded localization only.
    pub max_abs_sigma_bounded: f64,
    pub max_closed_form_error: f64,
    pub passed: bool,
}

/// `σ(F, G)` over generator pairs of `kind(I1) × kind(I2)`, oriented so
/// that `F` comes from the left interval.
pub fn locality_report(reg: &Registry, kind: NetKind, i1: &Interval, i2: &Interval) -> Result<LocalityReport> {
    if !i1.disjoint(i2) {
        return Err(Error::BadIntervals);
    }
    let (left, right) = if i1.left_of(i2) { (i1, i2) } else { (i2, i1) };
    let lg = net_generators(reg, kind, left)?;
    let rg = net_generators(reg, kind, right)?;
    let mut pairs = Vec::new();
    let (mut max_s, mut max_b, mut max_e): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for f in &lg {
        for g in &rg {
            let sigma = reg.sigma(f, g)?;
            let closed_form = disjoint_phase(reg, f, g, true)?;
            let bounded = !reg.localization(f)?.is_empty() && !reg.localization(g)?.is_empty();
            max_s = max_s.max(sigma.abs());
            if bounded {
                max_b = max_b.max(sigma.abs());
            }
            max_e = max_e.max((sigma - closed_form).abs());
            pairs.push(PairPhase {
                f: reg.format(f),
                g: reg.format(g),
                sigma,
                closed_form,
                bounded,
            });
        }
    }
    let passed = if kind.expected_local() {
        max_s < TOL_QUAD
    } else {
        max_e < TOL_QUAD
    };
    Ok(LocalityReport {
        kind,
        pairs,
        max_abs_sigma: max_s,
        max_abs_sigma_bounded: max_b,
        max_closed_form_error: max_e,
        passed,
    })
}

/// `ρ_F^I = ad W(F)` for `F` localized in `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorAutomorphism {
    pub f: SymVector,
    pub interval: Interval,
}

impl SectorAutomorphism {
    pub fn new(reg: &Registry, f: SymVector, interval: Interval) -> Result<SectorAutomorphism> {
        let loc = reg.localization(&f)?;
        if !interval.contains_loc(&loc) {
            return Err(Error::NotInDomain(format!(
                "{} is not localized in {}",
                reg.format(&f),
                interval.display()
            )));
        }
        Ok(SectorAutomorphism { f, interval })
    }
}

/// `W(G) ↦ e^{iσ(F,G)} W(G)`
pub fn sector_apply(reg: &Registry, rho: &SectorAutomorphism, a: &WeylElement) -> Result<WeylElement> {
    a.map_phases(|g| Ok(Complex64::from_polar(1.0, reg.sigma(&rho.f, g)?)))
}

/// Phase picked up by `W(G)` under `ρ_F` when `G` is localized entirely to
/// one side of `I`: `e^{−iF_+G_c}` on the right, `e^{−iF_−G_c}` on the left.
pub fn soliton_phase(reg: &Registry, rho: &SectorAutomorphism, g: &SymVector) -> Result<Option<Complex64>> {
    let loc = reg.localization(g)?;
    let cf = reg.charges(&rho.f, None)?;
    let gc = reg.charges(g, None)?.c;
    let Localization::Bounded { lo, hi } = loc else {
        return Ok(None);
    };
    let (a, b) = (to_f64(&rho.interval.a), to_f64(&rho.interval.b));
    let side = if lo >= b {
        &cf.plus
    } else if hi <= a {
        &cf.minus
    } else {
        return Ok(None);
    };
    Ok(Some(Complex64::from_polar(1.0, -to_f64(&(side * &gc)))))
}

/// An element of `N ⊕ R`, or a character of the discrete charge group
/// given by a finite table `(F_c, F_q) ↦ phase`.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeElement {
    Group { n: f64, r: f64 },
    Table(BTreeMap<(Q, Q), Complex64>),
}

impl GaugeElement {
    pub fn phase(&self, c: &Q, q: &Q) -> Result<Complex64> {
        match self {
            GaugeElement::Group { n, r } => Ok(Complex64::from_polar(1.0, -(n * to_f64(c) + r * to_f64(q)))),
            GaugeElement::Table(t) => {
                if c.is_zero() && q.is_zero() {
                    return Ok(Complex64::new(1.0, 0.0));
                }
                t.get(&(c.clone(), q.clone()))
                    .copied()
                    .ok_or_else(|| Error::MissingCharacterValue(format!("({}, {})", fmt_q(c), fmt_q(q))))
            }
        }
    }

    /// Largest deviation from multiplicativity over tabulated charges whose
    /// sums are also tabulated.
    pub fn multiplicativity_defect(&self) -> f64 {
        let GaugeElement::Table(t) = self else { return 0.0 };
        let mut worst: f64 = 0.0;
        for ((c1, q1), p1) in t {
            for ((c2, q2), p2) in t {
                if let Some(p) = t.get(&(c1 + c2, q1 + q2)) {
                    worst = worst.max((p - p1 * p2).norm());
                }
            }
        }
        worst
    }
}

/// `W(F) ↦ e^{−i(nF_c + rF_q)} W(F)`, or the tabulated character value.
pub fn gauge_apply(reg: &Registry, g: &GaugeElement, a: &WeylElement) -> Result<WeylElement> {
    a.map_phases(|k| {
        let ch = reg.charges(k, None)?;
        g.phase(&ch.c, &ch.q)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    Gc,
    Gq,
    Full,
}

impl FromStr for Subgroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Subgroup> {
        match s {
            "G_c" | "gc" | "Gc" => Ok(Subgroup::Gc),
            "G_q" | "gq" | "Gq" => Ok(Subgroup::Gq),
            "G" | "full" | "G_full" => Ok(Subgroup::Full),
            _ => Err(Error::InvalidKey(format!("unknown subgroup {s}"))),
        }
    }
}

/// Group average as a charge filter: keeps keys with `F_c = 0` (`G_c`),
/// `F_q = 0` (`G_q`) or both (`G`).
pub fn fixed_point_project(reg: &Registry, a: &WeylElement, h: Subgroup) -> Result<WeylElement> {
    let mut err = None;
    let out = a.retain(|k| match reg.charges(k, None) {
        Ok(ch) => match h {
            Subgroup::Gc => ch.c.is_zero(),
            Subgroup::Gq => ch.q.is_zero(),
            Subgroup::Full => ch.c.is_zero() && ch.q.is_zero(),
        },
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    /// Reported but not part of the verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramReport {
    pub clauses: Vec<Clause>,
}

impl DiagramReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.informational || c.passed)
    }
}

/// Checks the ψ_T images of the generators of `Vc(I)`, `Vq(I)` and of `Va`
/// generators away from `loc T`, and the fixed-point identities at
/// generator level.
pub fn diagram_check(reg: &mut Registry, t: &SymVector, i: &Interval) -> Result<DiagramReport> {
    let t_loc = reg.localization(t)?;
    if t_loc.is_empty() || !i.contains_loc(&t_loc) {
        return Err(Error::RegularizerNotContained);
    }
    let label = regularizer_label(reg, t);
    let r = Regularizer::new(reg, t, &label)?;
    let reg: &Registry = reg;
    let mut clauses = Vec::new();
    let mut push = |name: &str, passed: bool, measured: f64, informational: bool| {
        clauses.push(Clause {
            name: name.to_string(),
            passed,
            measured,
            informational,
        })
    };

    let vc = net_generators(reg, NetKind::C, i)?;
    let mut q_ok = true;
    for g in &vc {
        q_ok &= r.psi(reg, g)?.m.1.is_zero();
    }
    push("Vc(I): F_q component vanishes", q_ok, vc.len() as f64, false);

    let vq = net_generators(reg, NetKind::Q, i)?;
    let mut c_ok = true;
    let mut worst_n: f64 = 0.0;
    let mut worst_side: f64 = 0.0;
    let Localization::Bounded { lo: t_lo, hi: t_hi } = t_loc else {
        unreachable!("checked above")
    };
    for g in &vq {
        let psi = r.psi(reg, g)?;
        c_ok &= psi.l.0.is_zero();
        worst_n = worst_n.max(psi.l.1.abs());
        let loc = reg.localization(g)?;
        let ch = reg.charges(g, None)?;
        let expected = if loc.right_of_point(t_hi) {
            Some(to_f64(&ch.minus))
        } else if loc.left_of_point(t_lo) {
            Some(to_f64(&ch.plus))
        } else {
            None
        };
        if let Some(e) = expected {
            worst_side = worst_side.max((psi.l.1 - e).abs());
        }
    }
    push("Vq(I): F_c component vanishes", c_ok, vq.len() as f64, false);
    push("Vq(I): F_n component vanishes", worst_n < TOL_QUAD, worst_n, false);
    push(
        "Vq(I) away from loc T: F_n equals the limit of g1 on loc T",
        worst_side < TOL_QUAD,
        worst_side,
        true,
    );

    let mut worst_a: f64 = 0.0;
    let mut exact = true;
    for id in reg.ids() {
        let g = SymVector::gen(id);
        let loc = reg.generator(id)?.loc;
        let away = loc.left_of_point(t_lo) || loc.right_of_point(t_hi);
        if loc.is_empty() || !away || !reg.member(SpaceKind::Va, &g)? {
            continue;
        }
        let psi = r.psi(reg, &g)?;
        exact &= psi.ft == g && psi.l.0.is_zero() && psi.m.1.is_zero();
        worst_a = worst_a.max(psi.l.1.abs()).max(psi.m.0.abs());
    }
    push("Va away from loc T: image is (F, 0, 0)", exact && worst_a < TOL_QUAD, worst_a, false);

    let vf = net_generators(reg, NetKind::F, i)?;
    for (h, kind, name) in [
        (Subgroup::Gq, NetKind::C, "F(I)^{G_q} = C(I)"),
        (Subgroup::Gc, NetKind::E, "F(I)^{G_c} = E(I)"),
        (Subgroup::Full, NetKind::B, "F(I)^G = B(I)"),
    ] {
        let mut kept = Vec::new();
        for g in &vf {
            if !fixed_point_project(reg, &WeylElement::generator(g.clone()), h)?.is_empty() {
                kept.push(g.clone());
            }
        }
        let target = net_generators(reg, kind, i)?;
        push(name, kept == target, kept.len() as f64, false);
    }
    Ok(DiagramReport { clauses })
}
