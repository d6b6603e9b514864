//! States on the Weyl algebra: the Fock state on `Va`, the non-regular
//! elementary state, the field state `ω_f`, the product state `ω_H ⊗ ω_L`
//! and the chiral vacuum; plus Gram-matrix positivity checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::chiral::{chiral_norm_sq, dalembert};
use crate::error::{Error, Result};
use crate::exact::{fmt_q, to_f64};
use crate::funcspace::TestFunction;
use crate::symplectic::{Regularizer, Registry, SymVector};
use crate::weyl::{weyl_mul, weyl_star, WeylElement};

/// Hermiticity tolerance of a Gram matrix built from a state.
pub const TOL_HERMITIAN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `exp(−¼‖T_a F‖²)` on `Va`.
    Fock,
    /// `δ_{c,0}` on keys `c·T.0 + n·N`.
    NonRegularElementary(Regularizer),
    /// `exp(−¼‖T_a F_t‖²) δ_{F_c,0} δ_{F_q,0}`.
    Field(Regularizer),
    /// `ω_H ⊗ ω_L` with `H = Vb` and `L` spanned by `T.0, T.1`.
    Product(Regularizer),
    ChiralVacuum {
        s_plus: TestFunction,
        s_minus: TestFunction,
    },
}

impl StateSpec {
    pub fn chiral_vacuum(s_plus: TestFunction, s_minus: TestFunction) -> Result<StateSpec> {
        let cp = s_plus.right() - s_plus.left();
        let cm = s_minus.right() - s_minus.left();
        if cp.is_zero() || cm.is_zero() {
            return Err(Error::DegenerateRegularizer {
                tc: fmt_q(&cp),
                tq: fmt_q(&cm),
            });
        }
        Ok(StateSpec::ChiralVacuum { s_plus, s_minus })
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateSpec::Fock => "fock",
            StateSpec::NonRegularElementary(_) => "nonregular",
            StateSpec::Field(_) => "field",
            StateSpec::Product(_) => "product",
            StateSpec::ChiralVacuum { .. } => "chiral-vacuum",
        }
    }
}

fn gaussian(norm_sq: f64) -> Complex64 {
    Complex64::new((-0.25 * norm_sq).exp(), 0.0)
}

/// `ω(W(F))` for a single key.
pub fn eval_key(reg: &Registry, spec: &StateSpec, f: &SymVector) -> Result<Complex64> {
    match spec {
        StateSpec::Fock => Ok(gaussian(reg.fock_norm_sq(f)?)),
        StateSpec::NonRegularElementary(r) => {
            let foreign = f.coords().keys().any(|id| *id != r.t0 && *id != r.center);
            if foreign {
                return Err(Error::NotInDomain(format!(
                    "{} is not in the elementary plane",
                    reg.format(f)
                )));
            }
            Ok(if f.coeff(r.t0).is_zero() {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            })
        }
        StateSpec::Field(r) => {
            let ch = reg.charges(f, None)?;
            if !ch.c.is_zero() || !ch.q.is_zero() {
                return Ok(Complex64::zero());
            }
            let psi = r.psi(reg, f)?;
            Ok(gaussian(reg.fock_norm_sq(&psi.ft)?))
        }
        StateSpec::Product(r) => {
            let (h, l) = product_split(reg, r, f)?;
            if !l.is_zero() {
                return Ok(Complex64::zero());
            }
            let (body, _) = reg.split_off_center(&h)?;
            Ok(gaussian(reg.fock_norm_sq(&body)?))
        }
        StateSpec::ChiralVacuum { .. } => {
            let p = dalembert(reg, f)?;
            if !p.is_uncharged() {
                return Ok(Complex64::zero());
            }
            let n = chiral_norm_sq(&p.theta_plus)? + chiral_norm_sq(&p.theta_minus)?;
            Ok(Complex64::new((-0.5 * n).exp(), 0.0))
        }
    }
}

/// `F = h + l` with `h ∈ Vb` and `l = a·T.0 + b·T.1`.
pub fn product_split(reg: &Registry, r: &Regularizer, f: &SymVector) -> Result<(SymVector, SymVector)> {
    let l = r.charge_part(reg, f)?;
    Ok((f - &l, l))
}

/// Linear extension of a key functional.
pub fn eval_with(a: &WeylElement, mut on_key: impl FnMut(&SymVector) -> Result<Complex64>) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for (k, c) in a.terms() {
        acc += c * on_key(k)?;
    }
    Ok(acc)
}

pub fn eval_state(reg: &Registry, spec: &StateSpec, a: &WeylElement) -> Result<Complex64> {
    eval_with(a, |k| eval_key(reg, spec, k))
}

/// Product state evaluated through the factorization
/// `W(F) = e^{iσ(h,l)/2} W(h) W(l)`.
pub fn eval_product_factorized(reg: &Registry, r: &Regularizer, f: &SymVector) -> Result<Complex64> {
    let (h, l) = product_split(reg, r, f)?;
    let phase = Complex64::from_polar(1.0, 0.5 * reg.sigma(&h, &l)?);
    let omega_l = if l.is_zero() { 1.0 } else { 0.0 };
    let (body, _) = reg.split_off_center(&h)?;
    Ok(phase * gaussian(reg.fock_norm_sq(&body)?) * omega_l)
}

/// The functional obtained by replacing `δ_{l,0}` with the regular
/// assignment `exp(−(a² + b²)/4)` on `l = a·T.0 + b·T.1`.
pub fn regular_substitute(reg: &Registry, r: &Regularizer, f: &SymVector) -> Result<Complex64> {
    let (h, l) = product_split(reg, r, f)?;
    let a = to_f64(&l.coeff(r.t0));
    let b = to_f64(&l.coeff(r.t1));
    let phase = Complex64::from_polar(1.0, 0.5 * reg.sigma(&h, &l)?);
    let (body, _) = reg.split_off_center(&h)?;
    Ok(phase * gaussian(reg.fock_norm_sq(&body)?) * (-(a * a + b * b) / 4.0).exp())
}

#[derive(Debug, Clone)]
pub struct GramReport {
    pub matrix: DMatrix<Complex64>,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// `max |M_ij − conj(M_ji)|`
    pub hermiticity_defect: f64,
    /// Largest absolute entry.
    pub norm: f64,
}

impl GramReport {
    pub fn is_psd(&self, rel_tol: f64) -> bool {
        self.min_eigenvalue >= -rel_tol * self.norm.max(1.0)
    }
}

/// `M_ij = ω(A_i* A_j)` for an arbitrary key functional.
pub fn gram_with(
    reg: &Registry,
    words: &[WeylElement],
    mut on_key: impl FnMut(&SymVector) -> Result<Complex64>,
) -> Result<GramReport> {
    let n = words.len();
    let stars: Vec<WeylElement> = words.iter().map(weyl_star).collect();
    let mut m = DMatrix::from_element(n, n, Complex64::zero());
    for i in 0..n {
        for j in 0..n {
            let prod = weyl_mul(reg, &stars[i], &words[j])?;
            m[(i, j)] = eval_with(&prod, &mut on_key)?;
        }
    }
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    let herm = (&m + m.adjoint()).scale(0.5);
    let min_eigenvalue = if n == 0 {
        0.0
    } else {
        herm.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(GramReport {
        matrix: m,
        min_eigenvalue,
        hermiticity_defect: defect,
        norm,
    })
}

pub fn gram_psd(reg: &Registry, spec: &StateSpec, words: &[WeylElement]) -> Result<GramReport> {
    gram_with(reg, words, |k| eval_key(reg, spec, k))
}

#[derive(Debug, Clone)]
pub struct CoincidenceReport {
    /// `(ω(A), ω_p(A))` per word.
    pub values: Vec<(Complex64, Complex64)>,
    pub max_discrepancy: f64,
    pub passed: bool,
}

/// Evaluates `ω` through ψ_T and `ω_p` through the factorization over
/// `Vb ⊕ L` on every word.
pub fn state_coincidence_check(reg: &Registry, r: &Regularizer, words: &[WeylElement]) -> Result<CoincidenceReport> {
    let field = StateSpec::Field(r.clone());
    let mut values = Vec::with_capacity(words.len());
    let mut worst: f64 = 0.0;
    for w in words {
        let a = eval_state(reg, &field, w)?;
        let b = eval_with(w, |k| eval_product_factorized(reg, r, k))?;
        worst = worst.max((a - b).norm());
        values.push((a, b));
    }
    Ok(CoincidenceReport {
        values,
        max_discrepancy: worst,
        passed: worst < 1e-10,
    })
}
