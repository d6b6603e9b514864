use std::f64::consts::PI;

use weylnet::exact::{q, ratio, to_f64};
use weylnet::funcspace::*;
use weylnet::Error;

fn grid() -> Grid {
    Grid::default()
}

fn gaussian(g: &Grid, a: f64) -> TestFunction {
    TestFunction::from_fn(g, q(0), q(0), |x| (-a * x * x).exp()).unwrap()
}

/// Independent transform oracle: direct sum on a grid 8x denser, integrated
/// over momentum with a fine trapezoid rule on a range 16x the padded one.
fn abs_weight_oracle(f: impl Fn(f64) -> f64, window: f64) -> f64 {
    let n = 8 * 4096;
    let h = 2.0 * window / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| -window + i as f64 * h).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let dp = 2.0 * PI / (16.0 * n as f64 * h);
    let pmax = 12.0;
    let m = (pmax / dp) as usize;
    let mut acc = 0.0;
    for k in 0..=m {
        let p = k as f64 * dp;
        let (mut re, mut im) = (0.0, 0.0);
        for (x, v) in xs.iter().zip(&fs) {
            re += v * (p * x).cos();
            im -= v * (p * x).sin();
        }
        let amp = (re * re + im * im) * h * h / (2.0 * PI);
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        acc += w * p * amp;
    }
    2.0 * acc * dp
}

#[test]
fn grid_function_validation() {
    let g = grid();
    let z = make_grid_function(vec![0.0; 4096], -32.0, 32.0, q(0), q(0)).unwrap();
    assert!(z.samples().iter().all(|&v| v == 0.0));
    let gauss = make_grid_function(g.sample(|x| (-x * x).exp()), -16.0, 16.0, q(0), q(0));
    assert!(gauss.is_ok());
    let one = make_grid_function(vec![1.0; 4096], -32.0, 32.0, q(1), q(1)).unwrap();
    let d = derivative(&one);
    assert!(d.samples().iter().all(|&v| v.abs() < 1e-12));
    let bad = make_grid_function(vec![1.0; 4096], -32.0, 32.0, q(0), q(1));
    assert!(matches!(bad, Err(Error::EdgeMismatch { side: "left", .. })));
    assert!(matches!(
        make_grid_function(vec![0.0; 16], 1.0, 1.0, q(0), q(0)),
        Err(Error::BadGrid(_))
    ));
}

#[test]
fn grid_step_spans_window() {
    let g = grid();
    assert!((g.step() * (g.len() - 1) as f64 - 64.0).abs() < 1e-12);
    assert_eq!(g.x(g.len() - 1), 32.0);
}

#[test]
fn arctan_kink_matches_closed_form_on_core() {
    let g = grid();
    let t = make_kink(&g, q(0), q(1), false).unwrap();
    assert_eq!(t.left(), &ratio(-1, 2));
    assert_eq!(t.right(), &ratio(1, 2));
    let dt = derivative(&t);
    let mut max_t: f64 = 0.0;
    let mut max_dt: f64 = 0.0;
    for i in 0..g.len() {
        let x = g.x(i);
        if x.abs() <= 16.0 {
            max_t = max_t.max((t.samples()[i] - x.atan() / PI).abs());
            max_dt = max_dt.max((dt.samples()[i] - 1.0 / (PI * (1.0 + x * x))).abs());
        }
    }
    assert!(max_t < 1e-15, "{max_t}");
    assert!(max_dt < 1e-6, "{max_dt}");
    // away from the core the numerical derivative still follows the exact slope
    let k = Kink::new(q(0), q(1), false);
    let slope = k.slope(&g).unwrap();
    assert!(dt.max_abs_diff(&slope) < 1e-6);
}

#[test]
fn kinks_are_orthogonal_to_their_slope() {
    let g = grid();
    for (c, compact) in [(0, false), (0, true), (3, true)] {
        let k = Kink::new(q(c), q(1), compact);
        let t = k.profile(&g).unwrap();
        let dt = k.slope(&g).unwrap();
        let shifted = TestFunction::combine(&g, &[(q(1), &t)]).unwrap();
        let v = pairing(&shifted, &dt).unwrap();
        assert!(v.abs() < TOL_QUAD, "center {c}: {v}");
    }
}

#[test]
fn compact_kink_slope_is_supported_in_window() {
    let g = grid();
    let k = Kink::new(q(3), q(1), true);
    let dt = k.slope(&g).unwrap();
    let outside = (0..g.len())
        .filter(|&i| g.x(i) < 2.0 || g.x(i) > 4.0)
        .map(|i| dt.samples()[i].abs())
        .fold(0.0, f64::max);
    assert!(outside < 1e-12);
    assert!((integrate(&dt) - 1.0).abs() < TOL_QUAD);
}

#[test]
fn kink_width_must_resolve() {
    let g = grid();
    assert!(matches!(
        make_kink(&g, q(0), ratio(1, 100), true),
        Err(Error::BadGrid(_))
    ));
}

#[test]
fn fundamental_theorem() {
    let g = grid();
    let fs = [
        make_kink(&g, q(0), q(1), false).unwrap(),
        make_kink(&g, q(3), q(1), true).unwrap(),
        gaussian(&g, 1.0),
    ];
    for f in &fs {
        let d = derivative(f);
        let want = to_f64(f.right()) - to_f64(f.left());
        assert!((integrate(&d) - want).abs() < TOL_QUAD);
    }
}

#[test]
fn antiderivative_recovers_kink() {
    let g = grid();
    let k = Kink::new(q(0), q(1), false);
    let dt = k.slope(&g).unwrap();
    let t = k.profile(&g).unwrap();
    let back = antiderivative(&dt, Some(&q(1))).unwrap();
    let shifted = TestFunction::combine(&g, &[(q(1), &back), (ratio(-1, 2), &TestFunction::constant(&g, q(1)))])
        .unwrap();
    let err = shifted.max_abs_diff(&t);
    assert!(err < 1e-8, "{err}");
    assert_eq!(back.right(), &q(1));
}

#[test]
fn antiderivative_of_gaussian() {
    let g = grid();
    let f = gaussian(&g, 1.0);
    let a = antiderivative(&f, None).unwrap();
    // oracle: Simpson on a grid eight times denser
    let fine = Grid::symmetric(32.0, 8 * 4096 + 1).unwrap();
    let oracle: f64 = fine
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| w * (-fine.x(i).powi(2)).exp())
        .sum();
    assert!((oracle - PI.sqrt()).abs() < 1e-12);
    assert!((to_f64(a.right()) - oracle).abs() < TOL_QUAD);
    assert!((a.samples()[g.len() - 1] - oracle).abs() < TOL_QUAD);
    let z = antiderivative(&TestFunction::zero(&g), None).unwrap();
    assert!(z.samples().iter().all(|&v| v == 0.0));
    let one = TestFunction::constant(&g, q(1));
    assert_eq!(antiderivative(&one, None), Err(Error::NonDecaying("left")));
}

#[test]
fn derivative_inverts_antiderivative() {
    let g = grid();
    for order in 0..4 {
        let f = hermite_gaussian(&g, order, 0.5, 1.0, 1.0);
        let c = if order == 0 { q(1) } else { q(0) };
        let back = derivative(&antiderivative(&f, Some(&c)).unwrap());
        assert!(back.max_abs_diff(&f) < 1e-7, "order {order}");
    }
}

#[test]
fn pairing_basics() {
    let g = grid();
    let z = TestFunction::zero(&g);
    let f = gaussian(&g, 1.0);
    let one = TestFunction::constant(&g, q(1));
    assert_eq!(pairing(&z, &f).unwrap(), 0.0);
    assert!((pairing(&f, &one).unwrap() - PI.sqrt()).abs() < TOL_QUAD);
    let k = make_kink(&g, q(0), q(1), false).unwrap();
    let h = hermite_gaussian(&g, 1, 0.3, 0.7, 2.0);
    assert_eq!(pairing(&k, &h).unwrap(), pairing(&h, &k).unwrap());
    assert_eq!(pairing(&k, &one), Err(Error::DivergentTail("left")));
}

#[test]
fn pairing_across_grids() {
    let g = grid();
    let small = Grid::symmetric(16.0, 2049).unwrap();
    let f = gaussian(&g, 1.0);
    let f_small = gaussian(&small, 1.0);
    let one_small = TestFunction::constant(&small, q(1));
    let v = pairing(&f, &one_small).unwrap();
    assert!((v - PI.sqrt()).abs() < TOL_QUAD, "{v}");
    let v = pairing(&f_small, &f).unwrap();
    assert!((v - (PI / 2.0).sqrt()).abs() < TOL_QUAD, "{v}");
}

#[test]
fn fock_norm_of_gaussian_matches_oracle() {
    let g = grid();
    let f1 = TestFunction::from_fn(&g, q(0), q(0), |x| (-0.5 * x * x).exp()).unwrap();
    let z = TestFunction::zero(&g);
    let v = fock_norm_sq(&z, &f1).unwrap();
    let oracle = abs_weight_oracle(|x| (-0.5 * x * x).exp(), 32.0);
    // the transform is e^{-p^2/2}, so the exact value is 1
    assert!((oracle - 1.0).abs() < 1e-5, "{oracle}");
    assert!(((v - oracle) / oracle).abs() < 1e-4, "{v} vs {oracle}");
    let two = f1.scale(&q(2));
    let v2 = fock_norm_sq(&z, &two).unwrap();
    assert!((v2 - 4.0 * v).abs() / v < 1e-12);
    assert_eq!(fock_norm_sq(&z, &z).unwrap(), 0.0);
}

#[test]
fn fock_norm_inverse_weight_closed_form() {
    // f0 = -x e^{-x^2/2} has transform i p e^{-p^2/2}, so the |p|^{-1} part is 1
    let g = grid();
    let f0 = TestFunction::from_fn(&g, q(0), q(0), |x| -x * (-0.5 * x * x).exp()).unwrap();
    let v = fock_norm_sq(&f0, &TestFunction::zero(&g)).unwrap();
    assert!((v - 1.0).abs() < 1e-6, "{v}");
    let charged = gaussian(&g, 1.0);
    assert!(matches!(
        fock_norm_sq(&charged, &TestFunction::zero(&g)),
        Err(Error::NotInDomain(_))
    ));
}

#[test]
fn fock_norm_polarizes_symmetrically() {
    let g = grid();
    let a = hermite_gaussian(&g, 1, -1.0, 0.8, 1.0);
    let b = hermite_gaussian(&g, 3, 2.0, 1.2, 1.0);
    let z = TestFunction::zero(&g);
    let n = |f: &TestFunction| fock_norm_sq(&z, f).unwrap();
    let sum = TestFunction::combine(&g, &[(q(1), &a), (q(1), &b)]).unwrap();
    let dif = TestFunction::combine(&g, &[(q(1), &a), (q(-1), &b)]).unwrap();
    let ab = (n(&sum) - n(&dif)) / 4.0;
    let sum2 = TestFunction::combine(&g, &[(q(1), &b), (q(1), &a)]).unwrap();
    let dif2 = TestFunction::combine(&g, &[(q(1), &b), (q(-1), &a)]).unwrap();
    let ba = (n(&sum2) - n(&dif2)) / 4.0;
    assert!((ab - ba).abs() < 1e-10);
    assert!(n(&a) >= 0.0 && n(&b) >= 0.0);
}

#[test]
fn localization_cases() {
    let g = grid();
    let z = TestFunction::zero(&g);
    let c = TestFunction::constant(&g, q(3));
    assert_eq!(localization(&z, &c), Localization::Empty);
    let bump = Kink::new(ratio(3, 2), ratio(1, 2), true).slope(&g).unwrap();
    match localization(&bump, &z) {
        Localization::Bounded { lo, hi } => {
            assert!((lo - 1.0).abs() <= g.step() && (hi - 2.0).abs() <= g.step(), "{lo} {hi}");
        }
        Localization::Empty => panic!("bump has support"),
    }
    let k = make_kink(&g, q(3), q(1), true).unwrap();
    match localization(&z, &k) {
        Localization::Bounded { lo, hi } => {
            assert!((lo - 2.0).abs() <= g.step() && (hi - 4.0).abs() <= g.step(), "{lo} {hi}");
        }
        Localization::Empty => panic!("kink has support"),
    }
}

#[test]
fn intervals() {
    let i = Interval::ints(0, 2);
    let j = Interval::ints(2, 5);
    assert!(i.disjoint(&j) && i.left_of(&j) && !j.left_of(&i));
    assert!(Interval::ints(-1, 6).contains(&j));
    assert!(Interval::new(q(1), q(1)).is_err());
    assert!(i.contains_loc(&Localization::Empty));
}

#[test]
fn asymptotics_midpoint() {
    let a = Asymptotics::new(ratio(-1, 2), ratio(3, 2));
    assert_eq!(a.inf, ratio(1, 2));
}
