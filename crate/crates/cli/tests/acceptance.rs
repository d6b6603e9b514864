//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Tolerances are pinned here and never scaled.

use std::process::{Command, ExitCode};

use num_complex::Complex64;
use weylnet::chiral::{chiral_fock_norm_sq, chiral_sigma, dalembert, dalembert_inverse_functions};
use weylnet::exact::{q, ratio, to_f64};
use weylnet::funcspace::Interval;
use weylnet::gns::{
    apply_elementary, phi_n_apply, sector_inner, sector_trace, two_charge_norm_distance, ElementaryPlane, GnsVector,
    LVector,
};
use weylnet::nets::{
    diagram_check, fixed_point_project, locality_report, net_generators, sector_apply, NetKind, SectorAutomorphism,
    Subgroup,
};
use weylnet::registry_file::load_default;
use weylnet::sample::{random_member, random_phase, random_q, random_word, rng, SampleRng};
use weylnet::states::{gram_psd, gram_with, regular_substitute, state_coincidence_check, StateSpec};
use weylnet::symplectic::{sigma_l, sigma_m, Regularizer, Registry, SpaceKind, SymVector};
use weylnet::weyl::{staged_mul, staged_to_global, weyl_mul, weyl_star, StagedWord, WeylElement};
use weylnet_cli::suites::{run_suite, Context};

struct Criterion {
    parts: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new() -> Criterion {
        Criterion { parts: Vec::new() }
    }

    fn at_most(&mut self, what: &str, measured: f64, tol: f64) {
        self.parts
            .push((what.into(), measured <= tol, format!("measured {measured:e}, tolerance {tol:e}")));
    }

    fn exceeds(&mut self, what: &str, measured: f64, bound: f64) {
        self.parts
            .push((what.into(), measured > bound, format!("measured {measured:e}, must exceed {bound:e}")));
    }

    fn exact(&mut self, what: &str, ok: bool) {
        self.parts.push((what.into(), ok, "exact".into()));
    }

    fn finish(self, n: u32, title: &str) -> bool {
        let ok = self.parts.iter().all(|p| p.1);
        println!("criterion {n}: {} {title}", if ok { "PASS" } else { "FAIL" });
        for (what, pass, detail) in &self.parts {
            println!("    [{}] {what}: {detail}", if *pass { "ok" } else { "FAILED" });
        }
        ok
    }
}

fn registry() -> Registry {
    load_default().expect("default registry").registry
}

fn regularizers() -> (Registry, Regularizer, Regularizer) {
    let mut reg = registry();
    let t = reg.vector("T").unwrap();
    let k = reg.vector("k0").unwrap();
    let rt = Regularizer::new(&mut reg, &t, "T").unwrap();
    let rk = Regularizer::new(&mut reg, &k, "k0").unwrap();
    (reg, rt, rk)
}

fn vf(g: &mut SampleRng, reg: &Registry) -> SymVector {
    random_member(g, reg, SpaceKind::Vf, 3).unwrap()
}

fn w(k: &SymVector) -> WeylElement {
    WeylElement::generator(k.clone())
}

fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

fn mixed_keys(g: &mut SampleRng, reg: &Registry) -> Vec<SymVector> {
    let mut keys = Vec::new();
    for kind in [SpaceKind::Vf, SpaceKind::Vb, SpaceKind::Vc, SpaceKind::Vq] {
        for _ in 0..4 {
            keys.push(random_member(g, reg, kind, 3).unwrap());
        }
    }
    keys
}

fn criterion_1() -> bool {
    let reg = registry();
    let s = |a: &SymVector, b: &SymVector| reg.sigma(a, b).unwrap();
    let mut g = rng(1001);
    let (mut assoc, mut unit, mut inv, mut exch): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut involutive = true;
    for _ in 0..1000 {
        let [u, v, x] = [0; 3].map(|_| vf(&mut g, &reg));
        let [a, b, d] = [0; 3].map(|_| random_phase(&mut g));
        let (wu, wv, wx) = (w(&u).scale(a), w(&v).scale(b), w(&x).scale(d));
        // both bracketings against the expanded phase e^{-i(σ(u,v)+σ(u,x)+σ(v,x))/2}
        let expect = WeylElement::term(
            &(&u + &v) + &x,
            a * b * d * phase(-0.5 * (s(&u, &v) + s(&u, &x) + s(&v, &x))),
        );
        let left = weyl_mul(&reg, &weyl_mul(&reg, &wu, &wv).unwrap(), &wx).unwrap();
        let right = weyl_mul(&reg, &wu, &weyl_mul(&reg, &wv, &wx).unwrap()).unwrap();
        assoc = assoc.max(left.max_diff(&expect)).max(right.max_diff(&expect)).max(left.max_diff(&right));

        unit = unit.max(weyl_mul(&reg, &w(&u), &w(&-&u)).unwrap().max_diff(&WeylElement::identity()));

        let p = wu.add(&wv);
        involutive &= weyl_star(&weyl_star(&p)) == p;
        let lhs = weyl_star(&weyl_mul(&reg, &p, &wx).unwrap());
        let rhs = weyl_mul(&reg, &weyl_star(&wx), &weyl_star(&p)).unwrap();
        inv = inv.max(lhs.max_diff(&rhs));

        let uv = weyl_mul(&reg, &w(&u), &w(&v)).unwrap();
        let vu = weyl_mul(&reg, &w(&v), &w(&u)).unwrap().scale(phase(-s(&u, &v)));
        exch = exch.max(uv.max_diff(&vu));
    }
    let mut c = Criterion::new();
    c.at_most("associativity, 1000 triples", assoc, 1e-12);
    c.at_most("unitarity W(v)W(-v) = I", unit, 1e-12);
    c.exact("A** = A", involutive);
    c.at_most("(AB)* = B*A*", inv, 1e-12);
    c.at_most("exchange W(v)W(v') = e^{-iσ(v,v')}W(v')W(v)", exch, 1e-12);
    c.finish(1, "Weyl axioms")
}

fn criterion_2() -> bool {
    let (reg, r, _) = regularizers();
    let mut g = rng(1002);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mut mk = || StagedWord {
            zeta: random_phase(&mut g),
            h: random_member(&mut g, &reg, SpaceKind::Vb, 3).unwrap(),
            l: SymVector::from_terms([(r.t0, random_q(&mut g)), (r.t1, random_q(&mut g))]),
        };
        let (a, b) = (mk(), mk());
        let staged = staged_to_global(&reg, &staged_mul(&reg, &a, &b).unwrap()).unwrap();
        let global = weyl_mul(
            &reg,
            &staged_to_global(&reg, &a).unwrap(),
            &staged_to_global(&reg, &b).unwrap(),
        )
        .unwrap();
        worst = worst.max(staged.max_diff(&global));
    }
    let mut c = Criterion::new();
    c.at_most("staged product vs global product, 200 pairs", worst, 1e-10);
    c.finish(2, "crossed-product law")
}

fn criterion_3() -> bool {
    let reg = registry();
    let y = |a: &SymVector, b: &SymVector| phase(-0.5 * reg.sigma(a, b).unwrap());
    let mut g = rng(1003);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let [r, s, t] = [0; 3].map(|_| vf(&mut g, &reg));
        let lhs = y(&s, &t) * y(&r, &(&s + &t));
        let rhs = y(&r, &s) * y(&(&r + &s), &t);
        worst = worst.max((lhs - rhs).norm());
    }
    let mut c = Criterion::new();
    c.at_most("y(s,t)y(r,s+t) = y(r,s)y(r+s,t), 1000 triples", worst, 1e-9);
    c.finish(3, "2-cocycle identity")
}

/// Trapezoid sum of `f0 g1 − f1 g0` over the materialized samples.
fn sigma_oracle(reg: &Registry, f: &SymVector, g: &SymVector) -> f64 {
    let (f0, f1) = reg.materialize(f).unwrap();
    let (g0, g1) = reg.materialize(g).unwrap();
    let s: f64 = (0..f0.samples().len())
        .map(|i| f0.samples()[i] * g1.samples()[i] - f1.samples()[i] * g0.samples()[i])
        .sum();
    s * reg.grid().step()
}

fn criterion_4() -> bool {
    let (reg, rt, rk) = regularizers();
    let mut g = rng(1004);
    let mut worst: f64 = 0.0;
    let mut independent = true;
    for _ in 0..200 {
        let (a, b) = (vf(&mut g, &reg), vf(&mut g, &reg));
        let direct = sigma_oracle(&reg, &a, &b);
        for r in [&rt, &rk] {
            let (pa, pb) = (r.psi(&reg, &a).unwrap(), r.psi(&reg, &b).unwrap());
            let split = reg.sigma(&pa.ft, &pb.ft).unwrap() + sigma_l(&pa.l, &pb.l) + sigma_m(&pa.m, &pb.m);
            worst = worst.max((direct - split).abs());
        }
        let (p1, p2) = (rt.psi(&reg, &a).unwrap(), rk.psi(&reg, &a).unwrap());
        independent &= p1.l.0 == p2.l.0 && p1.m.1 == p2.m.1;
    }
    let mut c = Criterion::new();
    c.at_most("σ_f = σ_a + σ_L + σ_M, 200 pairs, T and k0", worst, 1e-6);
    c.exact("(F_c, F_q) identical under T and k0", independent);
    c.finish(4, "ψ_T decomposition")
}

fn criterion_5() -> bool {
    let (reg, rt, _) = regularizers();
    let mut g = rng(1005);
    let keys = mixed_keys(&mut g, &reg);
    let words: Vec<_> = (0..20).map(|_| random_word(&mut g, &keys, 3)).collect();
    let rep = gram_psd(&reg, &StateSpec::Field(rt.clone()), &words).unwrap();

    let probe: Vec<WeylElement> = [
        SymVector::zero(),
        SymVector::gen(rt.center),
        SymVector::gen(rt.t0),
        SymVector::gen(rt.t1),
    ]
    .iter()
    .map(w)
    .collect();
    let mut defect: f64 = 0.0;
    for i in 0..probe.len() {
        for j in (i + 1)..probe.len() {
            let pair = [probe[i].clone(), probe[j].clone()];
            let r = gram_with(&reg, &pair, |k| regular_substitute(&reg, &rt, k)).unwrap();
            defect = defect.max(r.hermiticity_defect);
        }
    }
    let mut c = Criterion::new();
    c.at_most("-λ_min / ‖M‖ of 20 words under ω_f", -rep.min_eigenvalue / rep.norm, 1e-8);
    c.exceeds("regular-substitute Hermiticity violation", defect, 1e-6);
    c.finish(5, "positivity")
}

fn criterion_6() -> bool {
    let (reg, rt, _) = regularizers();
    let mut g = rng(1006);
    let keys = mixed_keys(&mut g, &reg);
    let words: Vec<_> = (0..100).map(|_| random_word(&mut g, &keys, 2)).collect();
    let rep = state_coincidence_check(&reg, &rt, &words).unwrap();
    let mut c = Criterion::new();
    c.at_most("|ω(A) − ω_p(A)|, 100 words", rep.max_discrepancy, 1e-10);
    c.finish(6, "state coincidence")
}

fn criterion_7() -> bool {
    let mut g = rng(1007);
    let l = |g: &mut SampleRng| LVector::new(random_q(g), random_q(g));
    let mut c = Criterion::new();

    let mut worst: f64 = 0.0;
    let mut eigen = true;
    for _ in 0..100 {
        let cc = random_q(&mut g);
        let n: f64 = rand::Rng::gen_range(&mut g, -4.0..4.0);
        let basis = GnsVector::basis(cc.clone());
        let expect = basis.scale(phase(n * to_f64(&cc)));
        worst = worst.max(apply_elementary(&q(0), n, &basis).distance(&expect));
        eigen &= phi_n_apply(&basis) == basis.scale(Complex64::new(to_f64(&cc), 0.0));
    }
    c.at_most("W(0,n)|c⟩ = e^{inc}|c⟩", worst, 1e-12);
    c.exact("Φ_N|c⟩ = c|c⟩", eigen);

    let word = |g: &mut SampleRng| WeylElement::from_terms((0..3).map(|_| (l(g), random_phase(g))));
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b) = (word(&mut g), word(&mut g));
        let ab = sector_trace(&weyl_mul(&ElementaryPlane, &a, &b).unwrap());
        let ba = sector_trace(&weyl_mul(&ElementaryPlane, &b, &a).unwrap());
        worst = worst.max((ab - ba).norm());
    }
    c.at_most("trace property, 200 word pairs", worst, 1e-12);

    let mut best: f64 = 0.0;
    for _ in 0..50 {
        let v1 = l(&mut g);
        let mut v2 = l(&mut g);
        while v2.c == v1.c {
            v2 = l(&mut g);
        }
        best = best.max(two_charge_norm_distance(&v1, &v2));
    }
    c.at_most("2 − ‖π(W(v1)) − π(W(v2))‖ on 2-charge subspaces", 2.0 - best, 1e-9);

    let vac = GnsVector::vacuum();
    let dir = ratio(2, 3);
    let mut witness = true;
    for lam in [ratio(1, 1000), ratio(-1, 7), q(1), q(0), ratio(5, 2)] {
        let m = sector_inner(&vac, &apply_elementary(&(&lam * &dir), 0.0, &vac));
        witness &= m == Complex64::new(if lam == q(0) { 1.0 } else { 0.0 }, 0.0);
    }
    c.exact("⟨0|π(W(λc))|0⟩ = δ_{λ,0}", witness);
    c.finish(7, "GNS sector")
}

fn criterion_8() -> bool {
    let reg = registry();
    let mut g = rng(1008);
    let round_trip = |f: &SymVector| {
        let (f0, f1) = reg.materialize(f).unwrap();
        let (g0, g1, _) = dalembert_inverse_functions(&dalembert(&reg, f).unwrap()).unwrap();
        f0.max_abs_diff(&g0).max(f1.max_abs_diff(&g1))
    };
    let mut rt = round_trip(&reg.vector("T").unwrap());
    let mut charges = true;
    for _ in 0..50 {
        let f = vf(&mut g, &reg);
        rt = rt.max(round_trip(&f));
        let p = dalembert(&reg, &f).unwrap();
        let ch = reg.charges(&f, None).unwrap();
        charges &= &p.c_plus - &p.c_minus == ch.c && &p.c_plus + &p.c_minus == ch.q;
    }
    let mut split: f64 = 0.0;
    for _ in 0..200 {
        let (a, b) = (vf(&mut g, &reg), vf(&mut g, &reg));
        let chi = chiral_sigma(&dalembert(&reg, &a).unwrap(), &dalembert(&reg, &b).unwrap()).unwrap();
        split = split.max((sigma_oracle(&reg, &a, &b) - chi).abs());
    }
    let mut fock: f64 = 0.0;
    for _ in 0..20 {
        let a = random_member(&mut g, &reg, SpaceKind::Va, 3).unwrap();
        let f = reg.fock_norm_sq(&a).unwrap();
        fock = fock.max((f - chiral_fock_norm_sq(&dalembert(&reg, &a).unwrap()).unwrap()).abs() / f);
    }
    let mut c = Criterion::new();
    c.at_most("round trip, max pointwise error", rt, 1e-8);
    c.exact("F_c = c₊ − c₋, F_q = c₊ + c₋", charges);
    c.at_most("σ_f = σ₊ + σ₋ + σ_∞, 200 pairs", split, 1e-5);
    c.at_most("‖T_aF‖² = 2‖T_{a+}θ₊‖² + 2‖T_{a−}θ₋‖², relative, 20 Va elements", fock, 1e-4);
    c.finish(8, "d'Alembert decomposition")
}

fn criterion_9() -> bool {
    let reg = registry();
    let (i1, i2) = (Interval::new(q(-16), ratio(-5, 2)).unwrap(), Interval::ints(-1, 20));
    let mut c = Criterion::new();
    for kind in [NetKind::A, NetKind::C] {
        let rep = locality_report(&reg, kind, &i1, &i2).unwrap();
        c.at_most(&format!("{kind}-net max |σ| over {} pairs", rep.pairs.len()), rep.max_abs_sigma, 1e-6);
    }
    let rep = locality_report(&reg, NetKind::F, &i1, &i2).unwrap();
    c.at_most("F-net σ vs G_−F_c − F_+G_c", rep.max_closed_form_error, 1e-6);

    let q3 = reg.vector("q3").unwrap();
    let ch = reg.charges(&q3, None).unwrap();
    let rho = SectorAutomorphism::new(&reg, q3, Interval::ints(1, 5)).unwrap();
    let mut worst: f64 = 0.0;
    for (name, lim) in [("c2", &ch.plus), ("c1", &ch.minus)] {
        let gv = reg.vector(name).unwrap();
        let gc = to_f64(&reg.charges(&gv, None).unwrap().c);
        let z = sector_apply(&reg, &rho, &w(&gv)).unwrap().coeff(&gv);
        worst = worst.max((z - phase(-to_f64(lim) * gc)).norm());
    }
    c.at_most("soliton phases e^{-iF_±G_c}, both sides", worst, 1e-6);

    let all = Interval::ints(-20, 20);
    let f_gens = net_generators(&reg, NetKind::F, &all).unwrap();
    let word = WeylElement::from_terms(f_gens.iter().map(|k| (k.clone(), Complex64::new(1.0, 0.0))));
    let mut filters = true;
    for (h, kind) in [(Subgroup::Gq, NetKind::C), (Subgroup::Gc, NetKind::E), (Subgroup::Full, NetKind::B)] {
        let kept: Vec<_> = fixed_point_project(&reg, &word, h).unwrap().terms().keys().cloned().collect();
        let mut target = net_generators(&reg, kind, &all).unwrap();
        target.sort();
        filters &= kept == target;
    }
    c.exact("F^{G_q} = C, F^{G_c} = E, F^G = B at generator level", filters);

    let mut reg = reg;
    let k0 = reg.vector("k0").unwrap();
    let rep = diagram_check(&mut reg, &k0, &Interval::ints(-2, 5)).unwrap();
    let failed: Vec<_> = rep
        .clauses
        .iter()
        .filter(|cl| !cl.passed && !cl.informational)
        .map(|cl| format!("{} ({:e})", cl.name, cl.measured))
        .collect();
    c.parts.push((
        "diagram_check(k0, [-2, 5]) passes all clauses".into(),
        rep.passed(),
        if failed.is_empty() {
            "all clauses pass".into()
        } else {
            format!("failing: {}", failed.join("; "))
        },
    ));
    c.finish(9, "nets")
}

fn criterion_10() -> bool {
    let mut c = Criterion::new();
    let ctx = Context::new(load_default().unwrap(), 7, 1.0, "default");
    let a = run_suite(&ctx, "all").unwrap().to_json();
    let b = run_suite(&ctx, "all").unwrap().to_json();
    c.exact("in-process reports for seed 7 are byte-identical", a == b);

    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let run = |name: &str| {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_weylnet"))
            .args(["run", "--suite", "all", "--seed", "7", "--out"])
            .arg(&out)
            .env_remove("WEYLNET_TOL_SCALE")
            .stderr(std::process::Stdio::null())
            .status()
            .expect("weylnet runs");
        (status.code(), std::fs::read(&out).expect("report written"))
    };
    let (s1, r1) = run("acceptance-a.json");
    let (s2, r2) = run("acceptance-b.json");
    c.exact("binary reports for seed 7 are byte-identical", r1 == r2 && s1 == s2);
    c.exact("binary report matches the in-process report", r1 == a.as_bytes());
    c.finish(10, "determinism")
}

fn main() -> ExitCode {
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let failed: Vec<String> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 10 criteria fail ({})", failed.len(), failed.join(", "));
        ExitCode::from(1)
    }
}
