//! Named verification suites. Each suite draws from its own seeded stream,
//! so running a suite alone or inside `all` produces the same checks.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use weylnet::chiral::{chiral_fock_norm_sq, chiral_regularizers, chiral_sigma, dalembert, dalembert_inverse_functions, sigma_infinity};
use weylnet::exact::{q, ratio, to_f64};
use weylnet::funcspace::{Interval, TOL_QUAD};
use weylnet::gns::{
    apply_element, apply_elementary, chain_norm_distance, phi_n_apply, phi_n_difference, sector_inner, sector_trace,
    two_charge_norm_distance, ElementaryPlane, GnsVector, LVector,
};
use weylnet::nets::{
    diagram_check, fixed_point_project, gauge_apply, locality_report, net_generators, sector_apply,
    soliton_phase, GaugeElement, NetKind, SectorAutomorphism, Subgroup,
};
use weylnet::registry_file::LoadedRegistry;
use weylnet::sample::{random_member, random_phase, random_q, random_word, rng, SampleRng};
use weylnet::states::{
    eval_key, eval_product_factorized, eval_state, gram_psd, gram_with, regular_substitute, state_coincidence_check,
    StateSpec, TOL_HERMITIAN,
};
use weylnet::symplectic::{sigma_l, sigma_m, GenId, Regularizer, Registry, SpaceKind, SymVector};
use weylnet::weyl::{
    cocycle_residual, exchange_residual, staged_mul, staged_to_global, weyl_mul, weyl_star, StagedWord, WeylElement,
};
use weylnet::{Error, Result};

use crate::report::{Check, Status, SuiteReport, SCHEMA_VERSION};

pub const SUITES: [&str; 7] = ["weyl-axioms", "states-positivity", "psi-T", "chiral", "gns", "nets", "all"];

/// Registry plus run parameters shared by every suite.
#[derive(Debug, Clone)]
pub struct Context {
    pub reg: Registry,
    pub carriers: Vec<GenId>,
    pub seed: u64,
    pub tol_scale: f64,
    pub source: String,
}

/// Reads `WEYLNET_TOL_SCALE`; unset means 1.
pub fn tol_scale_from_env() -> std::result::Result<f64, String> {
    match std::env::var("WEYLNET_TOL_SCALE") {
        Err(_) => Ok(1.0),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(format!("WEYLNET_TOL_SCALE must be a positive number, got `{s}`")),
        },
    }
}

impl Context {
    pub fn new(loaded: LoadedRegistry, seed: u64, tol_scale: f64, source: &str) -> Context {
        Context {
            reg: loaded.registry,
            carriers: loaded.carriers,
            seed,
            tol_scale,
            source: source.to_string(),
        }
    }

    /// Scales a tolerance from the quadrature ladder.
    pub fn quad(&self, tol: f64) -> f64 {
        tol * self.tol_scale
    }

    fn rng(&self, tag: u64) -> SampleRng {
        rng(self.seed.wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
    }

    /// The canonical regularizer, falling back to the first carrier with
    /// both charges nonzero.
    pub fn regularizer_vector(&self) -> Result<SymVector> {
        if let Some(t) = self.reg.canonical_regularizer() {
            return Ok(t.clone());
        }
        self.charged_carriers()?
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotInDomain("registry has no regularizing element".into()))
    }

    fn charged_carriers(&self) -> Result<Vec<SymVector>> {
        let mut out = Vec::new();
        for id in &self.carriers {
            let v = SymVector::gen(*id);
            let ch = self.reg.charges(&v, None)?;
            if ch.c != q(0) && ch.q != q(0) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// A copy of the registry with the canonical regularizer and, when
    /// available, a second distinct one registered.
    pub fn with_regularizers(&self) -> Result<(Registry, Regularizer, Option<Regularizer>)> {
        let mut reg = self.reg.clone();
        let t = self.regularizer_vector()?;
        let label = weylnet::symplectic::regularizer_label(&reg, &t);
        let rt = Regularizer::new(&mut reg, &t, &label)?;
        let alt = self.charged_carriers()?.into_iter().find(|v| *v != t);
        let rk = match alt {
            Some(k) => {
                let label = weylnet::symplectic::regularizer_label(&reg, &k);
                Some(Regularizer::new(&mut reg, &k, &label)?)
            }
            None => None,
        };
        Ok((reg, rt, rk))
    }
}

/// Runs a named suite and assembles its report.
pub fn run_suite(ctx: &Context, suite: &str) -> std::result::Result<SuiteReport, String> {
    let start = Instant::now();
    let names: Vec<&str> = match suite {
        "all" => SUITES[..6].to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(format!("unknown suite `{s}`; expected one of {}", SUITES.join(", "))),
    };
    let mut checks = Vec::new();
    for name in names {
        let part = match name {
            "weyl-axioms" => weyl_axioms(ctx),
            "states-positivity" => states_positivity(ctx),
            "psi-T" => psi_t(ctx),
            "chiral" => chiral(ctx),
            "gns" => gns(ctx),
            "nets" => nets(ctx),
            _ => unreachable!(),
        };
        checks.extend(part.into_iter().map(|mut c| {
            c.name = format!("{name}/{}", c.name);
            c
        }));
    }
    let mut report = SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: suite.to_string(),
        seed: ctx.seed,
        registry: ctx.source.clone(),
        grid_points: ctx.reg.grid().len(),
        window: [ctx.reg.grid().lo(), ctx.reg.grid().hi()],
        tol_scale: ctx.tol_scale,
        checks,
        summary: Default::default(),
        duration: Default::default(),
    };
    report.finish();
    report.duration = start.elapsed();
    Ok(report)
}

/// Turns a failed computation into a failing check.
fn guard(name: &str, anchor: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::errored(name, anchor, e))
}

fn guard_many(name: &str, anchor: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::errored(name, anchor, e)])
}

fn vf_keys(g: &mut SampleRng, reg: &Registry, n: usize) -> Result<Vec<SymVector>> {
    (0..n).map(|_| random_member(g, reg, SpaceKind::Vf, 3)).collect()
}

fn mixed_keys(g: &mut SampleRng, reg: &Registry) -> Result<Vec<SymVector>> {
    let mut keys = Vec::new();
    for kind in [SpaceKind::Vf, SpaceKind::Vb, SpaceKind::Vc, SpaceKind::Vq] {
        for _ in 0..4 {
            keys.push(random_member(g, reg, kind, 3)?);
        }
    }
    Ok(keys)
}

pub fn weyl_axioms(ctx: &Context) -> Vec<Check> {
    let mut g = ctx.rng(1);
    let reg = &ctx.reg;
    let mut out = guard_many("axioms", "W(v)W(v') = e^{-iσ(v,v')/2} W(v+v')", || {
        let keys = vf_keys(&mut g, reg, 24)?;
        let (mut assoc, mut unit, mut inv, mut exch): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
        let mut star_exact = true;
        let mut products = 0usize;
        for _ in 0..1000 {
            let a = random_word(&mut g, &keys, 2);
            let b = random_word(&mut g, &keys, 2);
            let c = random_word(&mut g, &keys, 2);
            let ab = weyl_mul(reg, &a, &b)?;
            let l = weyl_mul(reg, &ab, &c)?;
            let r = weyl_mul(reg, &a, &weyl_mul(reg, &b, &c)?)?;
            products += 4;
            assoc = assoc.max(l.max_diff(&r));

            let v = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let w = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let uv = weyl_mul(reg, &WeylElement::generator(v.clone()), &WeylElement::generator(-&v))?;
            products += 1;
            unit = unit.max(uv.max_diff(&WeylElement::identity()));

            star_exact &= weyl_star(&weyl_star(&a)) == a;
            let rev = weyl_mul(reg, &weyl_star(&b), &weyl_star(&a))?;
            products += 1;
            inv = inv.max(weyl_star(&ab).max_diff(&rev));

            exch = exch.max(exchange_residual(reg, &v, &w)?);
            products += 2;
        }
        Ok(vec![
            Check::at_most("associativity (1000 triples)", assoc, 1e-12, "(AB)C = A(BC)"),
            Check::at_most("unitarity (1000 keys)", unit, 1e-12, "W(v)W(-v) = I"),
            Check::exact("star is an involution (1000 words)", star_exact, "A** = A"),
            Check::at_most("star reverses products (1000 pairs)", inv, 1e-12, "(AB)* = B*A*"),
            Check::at_most(
                "exchange relation (1000 pairs)",
                exch,
                1e-12,
                "W(v)W(v') = e^{-iσ(v,v')} W(v')W(v)",
            ),
            Check::exceeds("products evaluated", products as f64, 999.0, "at least 1000 product checks"),
        ])
    });

    out.push(guard("crossed-product staged law (200 pairs)", "ζW(h)W(l) staged product", || {
        let (reg, r, _) = ctx.with_regularizers()?;
        let mut g = ctx.rng(2);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let mk = |g: &mut SampleRng| -> Result<StagedWord> {
                Ok(StagedWord {
                    zeta: random_phase(g),
                    h: random_member(g, &reg, SpaceKind::Vb, 3)?,
                    l: SymVector::from_terms([(r.t0, random_q(g)), (r.t1, random_q(g))]),
                })
            };
            let a = mk(&mut g)?;
            let b = mk(&mut g)?;
            let staged = staged_to_global(&reg, &staged_mul(&reg, &a, &b)?)?;
            let global = weyl_mul(&reg, &staged_to_global(&reg, &a)?, &staged_to_global(&reg, &b)?)?;
            worst = worst.max(staged.max_diff(&global));
        }
        Ok(Check::at_most(
            "crossed-product staged law (200 pairs)",
            worst,
            1e-10,
            "(ζ,h,l)(ζ',h',l') = (ζζ'e^{-iα(h',l)}e^{-iσ(l,l')/2}e^{-iσ(h,h')/2}, h+h', l+l')",
        ))
    }));

    out.push(guard("2-cocycle identity (1000 triples)", "y(s,t)y(r,s+t) = y(r,s)y(r+s,t)", || {
        let mut g = ctx.rng(3);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let y = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let z = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            worst = worst.max(cocycle_residual(reg, &x, &y, &z)?.abs());
        }
        Ok(Check::at_most(
            "2-cocycle identity (1000 triples)",
            worst,
            1e-9,
            "y(s,t)y(r,s+t) = y(r,s)y(r+s,t)",
        ))
    }));
    out
}

pub fn psi_t(ctx: &Context) -> Vec<Check> {
    const ANCHOR: &str = "σ_f = σ_a + σ_L + σ_M";
    guard_many("psi decomposition", ANCHOR, || {
        let (reg, rt, rk) = ctx.with_regularizers()?;
        let regs: Vec<&Regularizer> = std::iter::once(&rt).chain(rk.as_ref()).collect();
        let mut g = ctx.rng(4);
        let mut worst: f64 = 0.0;
        let mut in_va = true;
        let mut same_charges = true;
        for _ in 0..200 {
            let a = random_member(&mut g, &reg, SpaceKind::Vf, 3)?;
            let b = random_member(&mut g, &reg, SpaceKind::Vf, 3)?;
            let direct = reg.sigma(&a, &b)?;
            let mut coords = Vec::new();
            for r in &regs {
                let (pa, pb) = (r.psi(&reg, &a)?, r.psi(&reg, &b)?);
                in_va &= reg.member(SpaceKind::Va, &pa.ft)? && reg.member(SpaceKind::Va, &pb.ft)?;
                let split = reg.sigma(&pa.ft, &pb.ft)? + sigma_l(&pa.l, &pb.l) + sigma_m(&pa.m, &pb.m);
                worst = worst.max((direct - split).abs());
                coords.push((pa.l.0, pa.m.1));
            }
            same_charges &= coords.windows(2).all(|w| w[0] == w[1]);
        }
        let mut out = vec![
            Check::at_most("decomposition of σ (200 pairs)", worst, ctx.quad(TOL_QUAD), ANCHOR)
                .with_note(format!("regularizers: {}", regs.len())),
            Check::exact("F_t lies in Va", in_va, "ψ_T(F) = (F_t, F_L, F_M), F_t ∈ Va"),
        ];
        if rk.is_some() {
            out.push(Check::exact(
                "charge coordinates independent of the regularizer",
                same_charges,
                "(F_c, F_q) do not depend on T",
            ));
        } else {
            out.push(Check::skip(
                "charge coordinates independent of the regularizer",
                "(F_c, F_q) do not depend on T",
                "registry has a single regularizing element",
            ));
        }
        Ok(out)
    })
}

pub fn states_positivity(ctx: &Context) -> Vec<Check> {
    guard_many("states", "ω(A*A) ≥ 0", || {
        let (reg, rt, rk) = ctx.with_regularizers()?;
        let mut g = ctx.rng(5);
        let mut out = Vec::new();
        let id = WeylElement::identity();

        let mut specs = vec![
            StateSpec::Fock,
            StateSpec::NonRegularElementary(rt.clone()),
            StateSpec::Field(rt.clone()),
            StateSpec::Product(rt.clone()),
        ];
        if let Ok((sp, sm)) = chiral_regularizers(&reg, &rt.t) {
            specs.push(StateSpec::chiral_vacuum(sp, sm)?);
        }
        let mut norm_err: f64 = 0.0;
        for s in &specs {
            norm_err = norm_err.max((eval_state(&reg, s, &id)? - Complex64::new(1.0, 0.0)).norm());
        }
        out.push(Check::at_most("normalization ω(I) = 1", norm_err, 1e-12, "ω(I) = 1"));

        let keys = mixed_keys(&mut g, &reg)?;
        let words: Vec<_> = (0..20).map(|_| random_word(&mut g, &keys, 3)).collect();
        for spec in [StateSpec::Field(rt.clone()), StateSpec::Product(rt.clone())] {
            let rep = gram_psd(&reg, &spec, &words)?;
            let name = spec.name();
            out.push(Check::at_most(
                &format!("Gram matrix of 20 words under {name} state: -λ_min/‖M‖"),
                -rep.min_eigenvalue / rep.norm,
                1e-8,
                "ω(A*A) ≥ 0",
            ));
            out.push(Check::at_most(
                &format!("Gram matrix of 20 words under {name} state: Hermiticity"),
                rep.hermiticity_defect,
                TOL_HERMITIAN,
                "ω(A*) = conj ω(A)",
            ));
        }

        // search small word sets for the largest Hermiticity defect of the
        // regular substitute ω_L(W(l)) = e^{-(a²+b²)/4}
        let mut probe = vec![WeylElement::identity()];
        for v in [
            SymVector::gen(rt.center),
            SymVector::gen(rt.t0),
            SymVector::gen(rt.t1),
            rt.t.clone(),
        ] {
            probe.push(WeylElement::generator(v));
        }
        let mut worst: f64 = 0.0;
        for i in 0..probe.len() {
            for j in (i + 1)..probe.len() {
                let pair = [probe[i].clone(), probe[j].clone()];
                let rep = gram_with(&reg, &pair, |k| regular_substitute(&reg, &rt, k))?;
                worst = worst.max(rep.hermiticity_defect);
            }
        }
        out.push(Check::exceeds(
            "regular substitute violates Hermiticity",
            worst,
            1e-6,
            "ω_L(W(l)) = 0 for l ≠ 0 is necessary",
        ));
        let fixed = gram_with(&reg, &probe, |k| eval_product_factorized(&reg, &rt, k))?;
        out.push(Check::at_most(
            "factorized product state is Hermitian on the probe words",
            fixed.hermiticity_defect,
            TOL_HERMITIAN,
            "ω_p = ω_H ⊗ ω_L",
        ));

        let words: Vec<_> = (0..100).map(|_| random_word(&mut g, &keys, 2)).collect();
        let rep = state_coincidence_check(&reg, &rt, &words)?;
        out.push(Check::at_most(
            "ω and ω_p coincide (100 words)",
            rep.max_discrepancy,
            1e-10,
            "the states ω_p and ω coincide",
        ));

        match &rk {
            Some(rk) => {
                let mut worst: f64 = 0.0;
                for k in &keys {
                    let a = eval_key(&reg, &StateSpec::Field(rt.clone()), k)?;
                    let b = eval_key(&reg, &StateSpec::Field(rk.clone()), k)?;
                    worst = worst.max((a - b).norm());
                }
                out.push(Check::at_most(
                    "field state independent of the regularizer",
                    worst,
                    ctx.quad(1e-8),
                    "ω does not depend on T",
                ));
            }
            None => out.push(Check::skip(
                "field state independent of the regularizer",
                "ω does not depend on T",
                "registry has a single regularizing element",
            )),
        }
        Ok(out)
    })
}

pub fn chiral(ctx: &Context) -> Vec<Check> {
    guard_many("chiral", "F = θ₊ + θ₋ movers", || {
        let reg = &ctx.reg;
        let mut g = ctx.rng(6);
        let mut out = Vec::new();

        let round_trip = |f: &SymVector| -> Result<f64> {
            let (f0, f1) = reg.materialize(f)?;
            let (g0, g1, _) = dalembert_inverse_functions(&dalembert(reg, f)?)?;
            Ok(f0.max_abs_diff(&g0).max(f1.max_abs_diff(&g1)))
        };
        let mut worst = round_trip(&ctx.regularizer_vector()?)?;
        for id in reg.ids() {
            worst = worst.max(round_trip(&SymVector::gen(id))?);
        }
        for _ in 0..30 {
            worst = worst.max(round_trip(&random_member(&mut g, reg, SpaceKind::Vf, 3)?)?);
        }
        out.push(Check::at_most(
            "d'Alembert round trip, max pointwise error",
            worst,
            ctx.quad(1e-8),
            "f1 = θ₊ + θ₋, f0 = ∂θ₊ − ∂θ₋",
        ));

        let mut exact = true;
        for _ in 0..50 {
            let f = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let p = dalembert(reg, &f)?;
            let ch = reg.charges(&f, None)?;
            exact &= &p.c_plus - &p.c_minus == ch.c && &p.c_plus + &p.c_minus == ch.q;
        }
        out.push(Check::exact(
            "chiral charges (50 vectors)",
            exact,
            "F_c = c₊ − c₋, F_q = c₊ + c₋",
        ));

        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let a = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let b = random_member(&mut g, reg, SpaceKind::Vf, 3)?;
            let split = chiral_sigma(&dalembert(reg, &a)?, &dalembert(reg, &b)?)?;
            worst = worst.max((reg.sigma(&a, &b)? - split).abs());
        }
        out.push(Check::at_most(
            "chiral decomposition of σ (200 pairs)",
            worst,
            ctx.quad(1e-5),
            "σ_f = σ₊ + σ₋ + σ_∞",
        ));

        let mut worst: f64 = 0.0;
        let mut sinf: f64 = 0.0;
        for _ in 0..20 {
            let a = random_member(&mut g, reg, SpaceKind::Va, 3)?;
            let f = reg.fock_norm_sq(&a)?;
            let pa = dalembert(reg, &a)?;
            worst = worst.max((f - chiral_fock_norm_sq(&pa)?).abs() / f);
            let b = dalembert(reg, &random_member(&mut g, reg, SpaceKind::Va, 3)?)?;
            sinf = sinf.max(sigma_infinity(&pa, &b).abs());
        }
        out.push(Check::at_most(
            "chiral Fock norm identity (20 Va elements, relative)",
            worst,
            ctx.quad(1e-4),
            "‖T_a F‖² = 2‖T_{a+}θ₊‖² + 2‖T_{a−}θ₋‖²",
        ));
        out.push(Check::exact("σ_∞ vanishes on Va", sinf == 0.0, "σ_∞ = 0 on Va"));
        Ok(out)
    })
}

fn random_l(g: &mut SampleRng) -> LVector {
    LVector::new(random_q(g), random_q(g))
}

fn random_gns_vector(g: &mut SampleRng) -> GnsVector {
    GnsVector::from_amps((0..4).map(|_| (random_q(g), random_phase(g) * g.gen_range(0.2..1.0))))
}

pub fn gns(ctx: &Context) -> Vec<Check> {
    let mut g = ctx.rng(7);
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let c = random_q(&mut g);
        let n = g.gen_range(-4.0..4.0);
        let got = apply_elementary(&q(0), n, &GnsVector::basis(c.clone()));
        let expect = GnsVector::basis(c.clone()).scale(Complex64::from_polar(1.0, n * to_f64(&c)));
        worst = worst.max(got.distance(&expect));
        // (π(W(0,n)) − 1)|c⟩ = (e^{inc} − 1)|c⟩
        let diff = got.sub(&GnsVector::basis(c.clone()));
        let expect = GnsVector::basis(c.clone()).scale(Complex64::from_polar(1.0, n * to_f64(&c)) - 1.0);
        worst = worst.max(diff.distance(&expect));
    }
    out.push(Check::at_most("W(0,n)|c⟩ = e^{inc}|c⟩ (100 cases)", worst, 1e-12, "(e^{inc} − 1)|c,0⟩"));

    let mut exact = true;
    for _ in 0..100 {
        let c = random_q(&mut g);
        let v = GnsVector::basis(c.clone());
        exact &= phi_n_apply(&v) == v.scale(Complex64::new(to_f64(&c), 0.0));
    }
    out.push(Check::exact("Φ_N eigen-relation (100 charges)", exact, "Φ_N|c⟩ = c|c⟩"));

    let v = GnsVector::from_amps([(q(1), Complex64::new(0.6, 0.0)), (q(-2), Complex64::new(0.0, 0.8))]);
    let target = phi_n_apply(&v);
    let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&n| phi_n_difference(n, &v).distance(&target))
        .collect();
    let dev = errs.windows(2).map(|w| (w[0] / w[1] - 10.0).abs()).fold(0.0, f64::max);
    out.push(Check::at_most(
        "Φ_N as the limit of (W(0,n) − 1)/in: error ratio per decade minus 10",
        dev,
        2.0,
        "Φ_N = lim (π(W(0,n)) − 1)/in",
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let vec = random_gns_vector(&mut g);
        let c = random_q(&mut g);
        let n = g.gen_range(-3.0..3.0);
        let back = apply_elementary(&c, n, &apply_elementary(&-&c, -n, &vec));
        worst = worst.max(back.distance(&vec));
        worst = worst.max((apply_elementary(&c, n, &vec).norm_sq() - vec.norm_sq()).abs());
        let (a, b) = (
            WeylElement::generator(LVector::new(c.clone(), random_q(&mut g))),
            WeylElement::generator(random_l(&mut g)),
        );
        let lhs = weyl_mul(&ElementaryPlane, &a, &b).map(|ab| apply_element(&ab, &vec));
        let rhs = apply_element(&a, &apply_element(&b, &vec));
        worst = worst.max(lhs.map(|l| l.distance(&rhs)).unwrap_or(f64::INFINITY));
    }
    out.push(Check::at_most("sector representation is unitary (50 cases)", worst, 1e-12, "π(W(v)) unitary"));

    let word = |g: &mut SampleRng| {
        WeylElement::from_terms((0..3).map(|_| (random_l(g), random_phase(g))))
    };
    let mut worst: f64 = 0.0;
    let mut worst_neutral: f64 = 0.0;
    for _ in 0..200 {
        let (a, b) = (word(&mut g), word(&mut g));
        let ab = weyl_mul(&ElementaryPlane, &a, &b).map(|x| sector_trace(&x));
        let ba = weyl_mul(&ElementaryPlane, &b, &a).map(|x| sector_trace(&x));
        worst = worst.max(match (ab, ba) {
            (Ok(x), Ok(y)) => (x - y).norm(),
            _ => f64::INFINITY,
        });
        let neutral = |w: &WeylElement<LVector>| w.retain(|k| k.c == q(0));
        let (x, y) = (neutral(&a), neutral(&b));
        let xy = weyl_mul(&ElementaryPlane, &x, &y).map(|p| sector_trace(&p));
        let yx = weyl_mul(&ElementaryPlane, &y, &x).map(|p| sector_trace(&p));
        worst_neutral = worst_neutral.max(match (xy, yx) {
            (Ok(x), Ok(y)) => (x - y).norm(),
            _ => f64::INFINITY,
        });
    }
    out.push(Check::at_most("trace property (200 word pairs)", worst, 1e-12, "τ(AB) = τ(BA)"));
    out.push(Check::at_most(
        "trace property on chargeless words (200 pairs)",
        worst_neutral,
        1e-12,
        "τ(AB) = τ(BA), c = 0",
    ));

    let mut best: f64 = 0.0;
    for _ in 0..50 {
        let v1 = random_l(&mut g);
        let mut v2 = random_l(&mut g);
        while v2.c == v1.c {
            v2 = random_l(&mut g);
        }
        best = best.max(two_charge_norm_distance(&v1, &v2));
    }
    out.push(
        Check::at_most(
            "norm distance 2 between distinct-charge Weyl operators on a 2-charge subspace",
            2.0 - best,
            1e-9,
            "‖π(W(v1)) − π(W(v2))‖ = 2",
        )
        .with_note(format!("largest distance found: {best:.15}")),
    );
    let (v1, v2) = (LVector::new(q(1), q(0)), LVector::new(q(0), q(0)));
    let chain: Vec<f64> = [2, 4, 8, 32].iter().map(|&k| chain_norm_distance(&v1, &v2, k)).collect();
    let increasing = chain.windows(2).all(|w| w[0] < w[1]) && chain.iter().all(|d| *d < 2.0);
    out.push(
        Check::exact("norm distance on k-charge chains increases towards 2", increasing, "‖π(W(v1)) − π(W(v2))‖ = 2")
            .with_note(format!("k = 32: {:.15}", chain[3])),
    );

    let mut exact = true;
    let vac = GnsVector::vacuum();
    let c = ratio(2, 3);
    for lam in [ratio(1, 1000), ratio(-1, 7), q(1), q(0), ratio(7, 3)] {
        let m = sector_inner(&vac, &apply_elementary(&(&lam * &c), 0.0, &vac));
        let expect = if lam == q(0) { 1.0 } else { 0.0 };
        exact &= m == Complex64::new(expect, 0.0);
    }
    out.push(Check::exact("non-regularity witness", exact, "⟨0|π(W(λc))|0⟩ = δ_{λ,0}"));
    out
}

fn left_interval() -> Interval {
    Interval::new(q(-16), ratio(-5, 2)).expect("valid interval")
}

fn right_interval() -> Interval {
    Interval::ints(-1, 20)
}

/// Looks up named default generators; `None` when the registry lacks one.
fn named(reg: &Registry, names: &[&str]) -> Option<Vec<SymVector>> {
    names.iter().map(|n| reg.vector(n).ok()).collect()
}

pub fn nets(ctx: &Context) -> Vec<Check> {
    let reg = &ctx.reg;
    let tol = ctx.quad(TOL_QUAD);
    let mut out = Vec::new();
    let (i1, i2) = (left_interval(), right_interval());

    for kind in NetKind::ALL {
        let name = format!("{kind}-net over {} and {}", i1.display(), i2.display());
        if kind.expected_local() {
            let anchor = "disjointly localized generators commute";
            out.push(guard(&format!("{name}: locality"), anchor, || {
                let rep = locality_report(reg, kind, &i1, &i2)?;
                Ok(Check::at_most(&format!("{name}: locality"), rep.max_abs_sigma, tol, anchor)
                    .with_note(format!("{} pairs", rep.pairs.len())))
            }));
        } else {
            let anchor = "σ(F,G) = G_−F_c − F_+G_c";
            out.push(guard(&format!("{name}: disjoint phase"), anchor, || {
                let rep = locality_report(reg, kind, &i1, &i2)?;
                Ok(Check::at_most(&format!("{name}: disjoint phase"), rep.max_closed_form_error, tol, anchor)
                    .with_note(format!("{} pairs", rep.pairs.len())))
            }));
        }
    }
    out.push(guard("C-net locality restricted to bounded localizations", "bounded pairs", || {
        let rep = locality_report(reg, NetKind::C, &i1, &i2)?;
        Ok(Check::at_most(
            "C-net locality restricted to bounded localizations",
            rep.max_abs_sigma_bounded,
            tol,
            "disjointly localized generators commute",
        ))
    }));

    out.extend(guard_many("sectors", "ρ_F = ad W(F)", || sector_checks(ctx)));
    out.extend(guard_many("gauge", "e^{-i(nF_c + rF_q)}", || gauge_checks(ctx)));
    out.extend(guard_many("diagram", "ψ_T decompositions", || diagram_checks(ctx)));
    out
}

fn sector_checks(ctx: &Context) -> Result<Vec<Check>> {
    let reg = &ctx.reg;
    let tol = ctx.quad(TOL_QUAD);
    let mut out = Vec::new();
    let mut g = ctx.rng(8);

    let rho0 = SectorAutomorphism::new(reg, SymVector::zero(), Interval::ints(0, 1))?;
    let keys = vf_keys(&mut g, reg, 10)?;
    let a = random_word(&mut g, &keys, 3);
    out.push(Check::exact("trivial sector is the identity", sector_apply(reg, &rho0, &a)? == a, "ρ_0 = ι"));

    let Some(v) = named(reg, &["q3", "c1", "c2", "a2"]) else {
        out.push(Check::skip("soliton phases", "e^{-iF_±G_c}", "registry lacks q3, c1, c2, a2"));
        return Ok(out);
    };
    let (q3, c2) = (&v[0], &v[2]);
    let soliton_i = Interval::ints(1, 5);
    let rho = SectorAutomorphism::new(reg, q3.clone(), soliton_i.clone())?;
    let ch = reg.charges(q3, None)?;
    let mut worst: f64 = 0.0;
    let mut sides = (0, 0);
    for gen in net_generators(reg, NetKind::F, &Interval::ints(-20, 20))? {
        let loc = reg.localization(&gen)?;
        let right = loc.right_of_point(5.0);
        let left = loc.left_of_point(1.0);
        if !(left || right) {
            continue;
        }
        if right {
            sides.1 += 1;
        } else {
            sides.0 += 1;
        }
        let gc = to_f64(&reg.charges(&gen, None)?.c);
        let lim = to_f64(if right { &ch.plus } else { &ch.minus });
        let expect = Complex64::from_polar(1.0, -lim * gc);
        let z = sector_apply(reg, &rho, &WeylElement::generator(gen.clone()))?.coeff(&gen);
        worst = worst.max((z - expect).norm());
        if let Some(closed) = soliton_phase(reg, &rho, &gen)? {
            worst = worst.max((z - closed).norm());
        }
    }
    out.push(
        Check::at_most("soliton phases e^{-iF_±G_c} on both sides of loc F", worst, tol, "e^{-iF_±G_c}")
            .with_note(format!("left generators: {}, right generators: {}", sides.0, sides.1)),
    );

    // ρ_F with F ∈ Vc(I) on the E-net of the complement
    let i = Interval::ints(14, 20);
    let rho_c = SectorAutomorphism::new(reg, c2.clone(), i)?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for gen in net_generators(reg, NetKind::E, &Interval::new(q(-20), q(13))?)? {
        let z = sector_apply(reg, &rho_c, &WeylElement::generator(gen.clone()))?.coeff(&gen);
        worst = worst.max((z - Complex64::new(1.0, 0.0)).norm());
        count += 1;
    }
    out.push(
        Check::at_most("DHR: ρ_F with F ∈ Vc(I) is the identity on E(I₁), I₁ ⊥ I", worst, tol, "ρ_F restricted to E(I₁) = ι")
            .with_note(format!("{count} generators; ρ_F acts there by e^{{iG_∓F_c}}")),
    );

    let (f, f2) = (&v[1], &v[2] + &v[3]);
    let d = f - &f2;
    let rho1 = SectorAutomorphism::new(reg, f.clone(), Interval::ints(-17, -7))?;
    let inv = SectorAutomorphism::new(reg, -&f2, Interval::ints(5, 20))?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_word(&mut g, &keys, 3);
        let lhs = sector_apply(reg, &rho1, &sector_apply(reg, &inv, &a)?)?;
        let rhs = a.map_phases(|k| Ok(Complex64::from_polar(1.0, reg.sigma(&d, k)?)))?;
        worst = worst.max(lhs.max_diff(&rhs));
    }
    out.push(
        Check::at_most("transportability: ρ_F ∘ ρ_F'⁻¹ = e^{iσ(F−F',·)} (20 words)", worst, 1e-12, "F − F' ∈ Vb")
            .with_note(format!("F − F' ∈ Vb: {}", reg.member(SpaceKind::Vb, &d)?)),
    );

    let gauge = GaugeElement::Group { n: 0.7, r: -1.9 };
    let (mut mult, mut star, mut comm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..30 {
        let a = random_word(&mut g, &keys, 3);
        let b = random_word(&mut g, &keys, 3);
        let ab = weyl_mul(reg, &a, &b)?;
        let s = |x: &WeylElement| sector_apply(reg, &rho, x);
        let t = |x: &WeylElement| gauge_apply(reg, &gauge, x);
        mult = mult.max(s(&ab)?.max_diff(&weyl_mul(reg, &s(&a)?, &s(&b)?)?));
        mult = mult.max(t(&ab)?.max_diff(&weyl_mul(reg, &t(&a)?, &t(&b)?)?));
        star = star.max(s(&weyl_star(&a))?.max_diff(&weyl_star(&s(&a)?)));
        star = star.max(t(&weyl_star(&a))?.max_diff(&weyl_star(&t(&a)?)));
        comm = comm.max(t(&s(&a)?)?.max_diff(&s(&t(&a)?)?));
    }
    out.push(Check::at_most("sector and gauge maps are multiplicative (30 pairs)", mult, 1e-12, "ρ(AB) = ρ(A)ρ(B)"));
    out.push(Check::at_most("sector and gauge maps preserve the star (30 words)", star, 1e-12, "ρ(A*) = ρ(A)*"));
    out.push(
        Check::at_most("gauge and sector maps commute (30 words)", comm, 1e-15, "both act by diagonal phases")
            .with_note("compared to floating-point rounding"),
    );
    Ok(out)
}

fn gauge_checks(ctx: &Context) -> Result<Vec<Check>> {
    let reg = &ctx.reg;
    let mut out = Vec::new();
    let mut g = ctx.rng(9);
    let t = ctx.regularizer_vector()?;
    let ch = reg.charges(&t, None)?;
    let w = WeylElement::generator(t.clone());
    out.push(Check::exact(
        "gauge (0, 0) is the identity",
        gauge_apply(reg, &GaugeElement::Group { n: 0.0, r: 0.0 }, &w)? == w,
        "g = 0",
    ));
    let (n, r) = (0.3, 1.1);
    let z = gauge_apply(reg, &GaugeElement::Group { n, r }, &w)?.coeff(&t);
    let expect = Complex64::from_polar(1.0, -(n * to_f64(&ch.c) + r * to_f64(&ch.q)));
    out.push(Check::at_most("gauge phase on W(T)", (z - expect).norm(), 1e-15, "e^{-i(nT_c + rT_q)}"));

    let all = Interval::ints(-20, 20);
    let mut fixed = true;
    for b in net_generators(reg, NetKind::B, &all)? {
        let word = WeylElement::term(b, random_phase(&mut g));
        fixed &= gauge_apply(reg, &GaugeElement::Group { n: 2.5, r: -0.4 }, &word)? == word;
    }
    out.push(Check::exact("B-net generators are gauge invariant", fixed, "F^G = B"));

    let f_gens = net_generators(reg, NetKind::F, &all)?;
    for (h, kind, name) in [
        (Subgroup::Gq, NetKind::C, "F^{G_q} = C"),
        (Subgroup::Gc, NetKind::E, "F^{G_c} = E"),
        (Subgroup::Full, NetKind::B, "F^G = B"),
    ] {
        let word = WeylElement::from_terms(f_gens.iter().map(|k| (k.clone(), Complex64::new(1.0, 0.0))));
        let kept: Vec<_> = fixed_point_project(reg, &word, h)?.terms().keys().cloned().collect();
        let mut target = net_generators(reg, kind, &all)?;
        target.sort();
        out.push(Check::exact(&format!("fixed points at generator level: {name}"), kept == target, name));
    }
    Ok(out)
}

fn diagram_checks(ctx: &Context) -> Result<Vec<Check>> {
    let mut reg = ctx.reg.clone();
    let Some(v) = named(&reg, &["k0"]) else {
        return Ok(vec![Check::skip("diagram", "ψ_T decompositions", "registry lacks k0")]);
    };
    let rep = diagram_check(&mut reg, &v[0], &Interval::ints(-2, 5))?;
    Ok(rep
        .clauses
        .into_iter()
        .map(|c| {
            let name = format!("diagram (T = k0, I = (-2, 5)): {}", c.name);
            let toleranced = c.name.contains("F_n") || c.name.contains("(F, 0, 0)");
            let mut check = if toleranced {
                Check::at_most(&name, c.measured, TOL_QUAD, &c.name)
            } else {
                Check::exact(&name, c.passed, &c.name).with_note(format!("generators: {}", c.measured))
            };
            check.status = if c.passed { Status::Pass } else { Status::Fail };
            if c.informational {
                check.note = Some("informational".into());
            }
            check
        })
        .collect())
}
