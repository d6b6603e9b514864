//! Left and right movers: `θ± = ½ (f1 ± ∫_{−∞}^x f0)`, chiral charges and
//! the symplectic forms σ± and σ_∞.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{q, ratio, to_f64, Q};
use crate::funcspace::{abs_weighted_norm_sq, antiderivative, derivative, pairing, TestFunction};
use crate::symplectic::{Registry, SymVector};

#[derive(Debug, Clone, PartialEq)]
pub struct ChiralPair {
    pub theta_plus: TestFunction,
    pub theta_minus: TestFunction,
    pub c_plus: Q,
    pub c_minus: Q,
}

impl ChiralPair {
    pub fn new(theta_plus: TestFunction, theta_minus: TestFunction) -> ChiralPair {
        let c_plus = theta_plus.right() - theta_plus.left();
        let c_minus = theta_minus.right() - theta_minus.left();
        ChiralPair {
            theta_plus,
            theta_minus,
            c_plus,
            c_minus,
        }
    }

    /// `Θ(+∞)`
    pub fn at_infinity(&self) -> (Q, Q) {
        (self.theta_plus.right().clone(), self.theta_minus.right().clone())
    }

    pub fn is_uncharged(&self) -> bool {
        self.c_plus.is_zero() && self.c_minus.is_zero()
    }
}

/// θ± of a pair of functions whose `f0` integrates to `c`.
pub fn dalembert_functions(f0: &TestFunction, f1: &TestFunction, c: &Q) -> Result<ChiralPair> {
    let grid = f1.grid().clone();
    let prim = antiderivative(f0, Some(c))?;
    let half = ratio(1, 2);
    let plus = TestFunction::combine(&grid, &[(half.clone(), f1), (half.clone(), &prim)])?;
    let minus = TestFunction::combine(&grid, &[(half.clone(), f1), (-half, &prim)])?;
    Ok(ChiralPair::new(plus, minus))
}

pub fn dalembert(reg: &Registry, f: &SymVector) -> Result<ChiralPair> {
    let (f0, f1) = reg.materialize(f)?;
    let ch = reg.charges(f, None)?;
    let pair = dalembert_functions(&f0, &f1, &ch.c)?;
    debug_assert_eq!(pair.c_plus, (&ch.q + &ch.c) / q(2));
    debug_assert_eq!(pair.c_minus, (&ch.q - &ch.c) / q(2));
    Ok(pair)
}

/// `f0 = ∂(θ+ − θ−)`, `f1 = θ+ + θ−`, and `F_c = c+ − c−`.
pub fn dalembert_inverse_functions(p: &ChiralPair) -> Result<(TestFunction, TestFunction, Q)> {
    let grid = p.theta_plus.grid().clone();
    let diff = TestFunction::combine(&grid, &[(q(1), &p.theta_plus), (q(-1), &p.theta_minus)])?;
    let f1 = TestFunction::combine(&grid, &[(q(1), &p.theta_plus), (q(1), &p.theta_minus)])?;
    let c = &p.c_plus - &p.c_minus;
    if diff.right() - diff.left() != c {
        return Err(Error::NotInDomain("chiral charges disagree with the limits".into()));
    }
    Ok((derivative(&diff), f1, c))
}

/// Reconstructs the time-zero pair and registers it under `name`.
pub fn dalembert_inverse(reg: &mut Registry, p: &ChiralPair, name: &str) -> Result<SymVector> {
    let (f0, f1, c) = dalembert_inverse_functions(p)?;
    let id = reg.register(name, f0, f1, c)?;
    Ok(SymVector::gen(id))
}

/// `∫ (φ ∂θ − θ ∂φ) dx`
pub fn sigma_plus(theta: &TestFunction, phi: &TestFunction) -> Result<f64> {
    Ok(pairing(phi, &derivative(theta))? - pairing(theta, &derivative(phi))?)
}

pub fn sigma_minus(theta: &TestFunction, phi: &TestFunction) -> Result<f64> {
    Ok(-sigma_plus(theta, phi)?)
}

/// `θ+(∞) φ−(∞) − θ−(∞) φ+(∞)`
pub fn sigma_infinity(p: &ChiralPair, r: &ChiralPair) -> f64 {
    let (a1, b1) = p.at_infinity();
    let (a2, b2) = r.at_infinity();
    to_f64(&(&a1 * &b2 - &b1 * &a2))
}

/// `σ+(θ+, φ+) + σ−(θ−, φ−) + σ_∞(Θ, Φ)`
pub fn chiral_sigma(p: &ChiralPair, r: &ChiralPair) -> Result<f64> {
    Ok(sigma_plus(&p.theta_plus, &r.theta_plus)?
        + sigma_minus(&p.theta_minus, &r.theta_minus)?
        + sigma_infinity(p, r))
}

/// `∫ |p| |θ̃(p)|² dp` for θ with equal limits; the constant is dropped.
pub fn chiral_norm_sq(theta: &TestFunction) -> Result<f64> {
    abs_weighted_norm_sq(theta)
}

/// `2‖T_{a+}θ+‖² + 2‖T_{a−}θ−‖²`, which equals `‖T_a F‖²` on `Va`.
pub fn chiral_fock_norm_sq(p: &ChiralPair) -> Result<f64> {
    Ok(2.0 * chiral_norm_sq(&p.theta_plus)? + 2.0 * chiral_norm_sq(&p.theta_minus)?)
}

/// Symmetric chiral regularizers: `S+` from `T` and `S−` from the
/// reflected element `−τ0 ⊕ τ1`, each shifted to have opposite limits.
pub fn chiral_regularizers(reg: &Registry, t: &SymVector) -> Result<(TestFunction, TestFunction)> {
    let (tau0, tau1) = reg.materialize(t)?;
    let ch = reg.charges(t, None)?;
    let grid = tau0.grid().clone();
    let plus = dalembert_functions(&tau0, &tau1, &ch.c)?;
    let reflected = tau0.scale(&q(-1));
    let minus = dalembert_functions(&reflected, &tau1, &-&ch.c)?;
    let centre = |f: &TestFunction| -> Result<TestFunction> {
        let mid = (f.left() + f.right()) / q(2);
        TestFunction::combine(&grid, &[(q(1), f), (-mid, &TestFunction::constant(&grid, q(1)))])
    };
    let s_plus = centre(&plus.theta_plus)?;
    let s_minus = centre(&minus.theta_minus)?;
    if s_plus.left() == s_plus.right() || s_minus.left() == s_minus.right() {
        return Err(Error::DegenerateRegularizer {
            tc: crate::exact::fmt_q(&(s_plus.right() - s_plus.left())),
            tq: crate::exact::fmt_q(&(s_minus.right() - s_minus.left())),
        });
    }
    Ok((s_plus, s_minus))
}
