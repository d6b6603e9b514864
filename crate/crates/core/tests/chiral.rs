use weylnet::chiral::*;
use weylnet::exact::{q, ratio};
use weylnet::funcspace::TestFunction;
use weylnet::registry_file::{load_default, parse_vector};
use weylnet::sample::{random_member, rng};
use weylnet::symplectic::{Registry, SpaceKind, SymVector};

fn reg() -> Registry {
    load_default().unwrap().registry
}

fn max_err(reg: &Registry, f: &SymVector, p: &ChiralPair) -> f64 {
    let (f0, f1) = reg.materialize(f).unwrap();
    let (g0, g1, _) = dalembert_inverse_functions(p).unwrap();
    f0.max_abs_diff(&g0).max(f1.max_abs_diff(&g1))
}

#[test]
fn constant_splits_evenly() {
    let reg = reg();
    let n = parse_vector(&reg, "3 N").unwrap();
    let p = dalembert(&reg, &n).unwrap();
    for th in [&p.theta_plus, &p.theta_minus] {
        assert!(th.samples().iter().all(|v| (v - 1.5).abs() < 1e-15));
        assert_eq!((th.left(), th.right()), (&ratio(3, 2), &ratio(3, 2)));
    }
    assert!(p.is_uncharged());
}

#[test]
fn regularizer_is_a_right_mover() {
    let reg = reg();
    let t = reg.vector("T").unwrap();
    let p = dalembert(&reg, &t).unwrap();
    assert_eq!((p.c_plus.clone(), p.c_minus.clone()), (q(1), q(0)));
    assert_eq!(&p.c_plus - &p.c_minus, q(1));
    assert_eq!(&p.c_plus + &p.c_minus, q(1));
    // θ− is flat: ½(t − (t + ½)) = −¼
    assert!(p.theta_minus.samples().iter().all(|v| (v + 0.25).abs() < 1e-8));
}

#[test]
fn round_trip_is_accurate() {
    let reg = reg();
    let t = reg.vector("T").unwrap();
    assert!(max_err(&reg, &t, &dalembert(&reg, &t).unwrap()) < 1e-8);
    let mut g = rng(51);
    for _ in 0..30 {
        let f = random_member(&mut g, &reg, SpaceKind::Vf, 3).unwrap();
        let p = dalembert(&reg, &f).unwrap();
        assert!(max_err(&reg, &f, &p) < 1e-8);
        let (_, _, c) = dalembert_inverse_functions(&p).unwrap();
        assert_eq!(c, reg.charges(&f, None).unwrap().c);
    }
}

#[test]
fn inverse_registers_the_reconstruction() {
    let mut reg = reg();
    let t = reg.vector("T").unwrap();
    let p = dalembert(&reg, &t).unwrap();
    let v = dalembert_inverse(&mut reg, &p, "T'").unwrap();
    let (a, b) = (reg.charges(&t, None).unwrap(), reg.charges(&v, None).unwrap());
    assert_eq!((a.c, a.q, a.inf), (b.c, b.q, b.inf));
    assert!(reg.sigma(&t, &v).unwrap().abs() < 1e-8);
    let g = reg.grid().clone();
    let zero = ChiralPair::new(TestFunction::zero(&g), TestFunction::zero(&g));
    let z = dalembert_inverse(&mut reg, &zero, "zero").unwrap();
    let (z0, z1) = reg.materialize(&z).unwrap();
    assert!(z0.samples().iter().chain(z1.samples()).all(|v| *v == 0.0));
}

#[test]
fn charges_are_additive() {
    let reg = reg();
    let mut g = rng(52);
    for _ in 0..50 {
        let a = random_member(&mut g, &reg, SpaceKind::Vf, 3).unwrap();
        let b = random_member(&mut g, &reg, SpaceKind::Vf, 3).unwrap();
        let (pa, pb, ps) = (
            dalembert(&reg, &a).unwrap(),
            dalembert(&reg, &b).unwrap(),
            dalembert(&reg, &(&a + &b)).unwrap(),
        );
        assert_eq!(ps.c_plus, &pa.c_plus + &pb.c_plus);
        assert_eq!(ps.c_minus, &pa.c_minus + &pb.c_minus);
        let ch = reg.charges(&a, None).unwrap();
        assert_eq!(&pa.c_plus - &pa.c_minus, ch.c);
        assert_eq!(&pa.c_plus + &pa.c_minus, ch.q);
    }
}

#[test]
fn sigma_infinity_examples() {
    let reg = reg();
    let mut g = rng(53);
    for _ in 0..20 {
        let a = dalembert(&reg, &random_member(&mut g, &reg, SpaceKind::Va, 3).unwrap()).unwrap();
        let b = dalembert(&reg, &random_member(&mut g, &reg, SpaceKind::Va, 3).unwrap()).unwrap();
        assert_eq!(sigma_infinity(&a, &b), 0.0);
        let f = dalembert(&reg, &random_member(&mut g, &reg, SpaceKind::Vf, 3).unwrap()).unwrap();
        assert_eq!(sigma_infinity(&f, &f), 0.0);
        assert_eq!(sigma_infinity(&a, &f), 0.0);
    }
    let t = dalembert(&reg, &reg.vector("T").unwrap()).unwrap();
    let q3 = dalembert(&reg, &reg.vector("q3").unwrap()).unwrap();
    // Θ_T(∞) = (¾, −¼), Θ_q3(∞) = (¼, ¼)
    assert!((sigma_infinity(&t, &q3) - 0.25).abs() < 1e-15);
}

#[test]
fn chiral_decomposition_of_sigma() {
    let reg = reg();
    let mut g = rng(54);
    for _ in 0..200 {
        let a = random_member(&mut g, &reg, SpaceKind::Vf, 3).unwrap();
        let b = random_member(&mut g, &reg, SpaceKind::Vf, 3).unwrap();
        let s = reg.sigma(&a, &b).unwrap();
        let split = chiral_sigma(&dalembert(&reg, &a).unwrap(), &dalembert(&reg, &b).unwrap()).unwrap();
        assert!((s - split).abs() < 1e-5, "{s} {split}");
    }
}

#[test]
fn chiral_fock_identity() {
    let reg = reg();
    let mut g = rng(55);
    for _ in 0..20 {
        let a = random_member(&mut g, &reg, SpaceKind::Va, 3).unwrap();
        let f = reg.fock_norm_sq(&a).unwrap();
        let c = chiral_fock_norm_sq(&dalembert(&reg, &a).unwrap()).unwrap();
        assert!((f - c).abs() / f < 1e-4, "{f} {c}");
    }
}

#[test]
fn chiral_regularizers_are_symmetric() {
    let reg = reg();
    let t = reg.vector("T").unwrap();
    let (sp, sm) = chiral_regularizers(&reg, &t).unwrap();
    for s in [&sp, &sm] {
        assert_eq!(s.left(), &-s.right());
        assert_eq!(s.right() - s.left(), q(1));
        // ∫ S ∂S = 0 for an odd profile with opposite limits
        let d = weylnet::funcspace::derivative(s);
        assert!(weylnet::funcspace::pairing(&d, s).unwrap().abs() < 1e-8);
    }
}
