//! Grid-sampled real functions with exact asymptotic limits, and the
//! quadrature, differentiation, Fourier and localization machinery on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::exact::{fmt_q, q, ratio, round_to, to_f64, Q};

pub const TOL_EDGE: f64 = 1e-9;
pub const TOL_CHARGE: f64 = 1e-9;
pub const TOL_QUAD: f64 = 1e-6;
pub const TOL_SUPP: f64 = 1e-12;

/// Zero-padding factor used by every discrete Fourier transform.
pub const PAD: usize = 4;

/// Uniform grid on the closed window `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::BadGrid(format!("window [{lo}, {hi}] is empty")));
        }
        if n < 8 {
            return Err(Error::BadGrid(format!("{n} samples is too few")));
        }
        Ok(Grid { lo, hi, n })
    }

    pub fn symmetric(half_width: f64, n: usize) -> Result<Grid> {
        Grid::new(-half_width, half_width, n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }

    /// Simpson weights. For an odd number of intervals the 3/8 rule is applied
    /// once at the front and once at the back and the two rules are averaged,
    /// which keeps the weights mirror-symmetric.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.n;
        let h = self.step();
        let intervals = n - 1;
        if intervals % 2 == 0 {
            return simpson_even(n, h);
        }
        let mut front = vec![0.0; n];
        front[0] += 3.0 * h / 8.0;
        front[1] += 9.0 * h / 8.0;
        front[2] += 9.0 * h / 8.0;
        front[3] += 3.0 * h / 8.0;
        for (k, w) in simpson_even(n - 3, h).into_iter().enumerate() {
            front[k + 3] += w;
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            out[i] = 0.5 * (front[i] + front[n - 1 - i]);
        }
        out
    }
}

fn simpson_even(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n == 1 {
        return w;
    }
    for i in 0..n {
        w[i] = if i == 0 || i == n - 1 {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    w
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            lo: -32.0,
            hi: 32.0,
            n: 4096,
        }
    }
}

/// Limits of a function at both ends of the line.
#[derive(Debug, Clone, PartialEq)]
pub struct Asymptotics {
    pub minus: Q,
    pub plus: Q,
    pub inf: Q,
}

impl Asymptotics {
    pub fn new(minus: Q, plus: Q) -> Asymptotics {
        let inf = (&minus + &plus) / q(2);
        Asymptotics { minus, plus, inf }
    }
}

/// A sampled real function, exactly constant beyond its window.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    grid: Grid,
    samples: Vec<f64>,
    left: Q,
    right: Q,
}

pub fn make_grid_function(
    samples: Vec<f64>,
    lo: f64,
    hi: f64,
    left: Q,
    right: Q,
) -> Result<TestFunction> {
    let grid = Grid::new(lo, hi, samples.len())?;
    TestFunction::new(grid, samples, left, right)
}

impl TestFunction {
    pub fn new(grid: Grid, samples: Vec<f64>, left: Q, right: Q) -> Result<TestFunction> {
        if samples.len() != grid.len() {
            return Err(Error::BadGrid(format!(
                "{} samples for a {}-point grid",
                samples.len(),
                grid.len()
            )));
        }
        let (l, r) = (to_f64(&left), to_f64(&right));
        let s0 = samples[0];
        let s1 = samples[samples.len() - 1];
        if !((s0 - l).abs() <= TOL_EDGE) {
            return Err(Error::EdgeMismatch {
                side: "left",
                sample: s0,
                limit: l,
            });
        }
        if !((s1 - r).abs() <= TOL_EDGE) {
            return Err(Error::EdgeMismatch {
                side: "right",
                sample: s1,
                limit: r,
            });
        }
        Ok(TestFunction {
            grid,
            samples,
            left,
            right,
        })
    }

    /// Builds without the edge check; used for outputs of numerical operators.
    pub(crate) fn raw(grid: Grid, samples: Vec<f64>, left: Q, right: Q) -> TestFunction {
        TestFunction {
            grid,
            samples,
            left,
            right,
        }
    }

    pub fn zero(grid: &Grid) -> TestFunction {
        TestFunction::raw(grid.clone(), vec![0.0; grid.len()], q(0), q(0))
    }

    pub fn constant(grid: &Grid, value: Q) -> TestFunction {
        let v = to_f64(&value);
        TestFunction::raw(grid.clone(), vec![v; grid.len()], value.clone(), value)
    }

    pub fn from_fn(grid: &Grid, left: Q, right: Q, f: impl Fn(f64) -> f64) -> Result<TestFunction> {
        TestFunction::new(grid.clone(), grid.sample(f), left, right)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn left(&self) -> &Q {
        &self.left
    }

    pub fn right(&self) -> &Q {
        &self.right
    }

    pub fn asymptotics(&self) -> Asymptotics {
        Asymptotics::new(self.left.clone(), self.right.clone())
    }

    pub fn has_zero_limits(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }

    /// Value at an arbitrary point: cubic interpolation inside the window,
    /// the declared limits outside.
    pub fn value_at(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g.lo() {
            return if x == g.lo() { self.samples[0] } else { to_f64(&self.left) };
        }
        if x >= g.hi() {
            return if x == g.hi() {
                self.samples[g.len() - 1]
            } else {
                to_f64(&self.right)
            };
        }
        let h = g.step();
        let t = (x - g.lo()) / h;
        let i = (t.floor() as usize).min(g.len() - 2);
        let i0 = i.saturating_sub(1).min(g.len() - 4);
        let mut acc = 0.0;
        for j in 0..4 {
            let xj = (i0 + j) as f64;
            let mut l = 1.0;
            for k in 0..4 {
                if k != j {
                    l *= (t - (i0 + k) as f64) / (xj - (i0 + k) as f64);
                }
            }
            acc += l * self.samples[i0 + j];
        }
        acc
    }

    pub fn scale(&self, a: &Q) -> TestFunction {
        let af = to_f64(a);
        TestFunction::raw(
            self.grid.clone(),
            self.samples.iter().map(|v| v * af).collect(),
            &self.left * a,
            &self.right * a,
        )
    }

    /// Exact-coefficient linear combination of functions sharing one grid.
    pub fn combine(grid: &Grid, terms: &[(Q, &TestFunction)]) -> Result<TestFunction> {
        let mut samples = vec![0.0; grid.len()];
        let mut left = q(0);
        let mut right = q(0);
        for (c, f) in terms {
            if f.grid != *grid {
                return Err(Error::BadGrid("combination over mismatched grids".into()));
            }
            let cf = to_f64(c);
            for (s, v) in samples.iter_mut().zip(&f.samples) {
                *s += cf * v;
            }
            left += c * &f.left;
            right += c * &f.right;
        }
        Ok(TestFunction::raw(grid.clone(), samples, left, right))
    }

    pub fn integral(&self) -> f64 {
        integrate(self)
    }

    pub fn max_abs_diff(&self, other: &TestFunction) -> f64 {
        if self.grid == other.grid {
            return self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
        }
        self.grid
            .points()
            .iter()
            .map(|&x| (self.value_at(x) - other.value_at(x)).abs())
            .fold(0.0, f64::max)
    }

    pub fn resample(&self, grid: &Grid) -> TestFunction {
        if *grid == self.grid {
            return self.clone();
        }
        TestFunction::raw(
            grid.clone(),
            grid.sample(|x| self.value_at(x)),
            self.left.clone(),
            self.right.clone(),
        )
    }
}

/// Closed interval with exact rational endpoints, `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub a: Q,
    pub b: Q,
}

impl Interval {
    pub fn new(a: Q, b: Q) -> Result<Interval> {
        if a >= b {
            return Err(Error::NotInDomain(format!(
                "interval [{}, {}] is empty",
                fmt_q(&a),
                fmt_q(&b)
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn ints(a: i64, b: i64) -> Interval {
        Interval::new(q(a), q(b)).expect("a < b")
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.b <= other.a || other.b <= self.a
    }

    pub fn left_of(&self, other: &Interval) -> bool {
        self.b <= other.a
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn contains_loc(&self, loc: &Localization) -> bool {
        match loc {
            Localization::Empty => true,
            Localization::Bounded { lo, hi } => to_f64(&self.a) <= *lo && *hi <= to_f64(&self.b),
        }
    }

    pub fn display(&self) -> String {
        format!("[{}, {}]", fmt_q(&self.a), fmt_q(&self.b))
    }
}

/// Measured localization of a pair, at grid resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Localization {
    Empty,
    Bounded { lo: f64, hi: f64 },
}

impl Localization {
    pub fn union(self, other: Localization) -> Localization {
        match (self, other) {
            (Localization::Empty, o) | (o, Localization::Empty) => o,
            (Localization::Bounded { lo: a, hi: b }, Localization::Bounded { lo: c, hi: d }) => {
                Localization::Bounded {
                    lo: a.min(c),
                    hi: b.max(d),
                }
            }
        }
    }

    /// Entirely to the left of `x` (empty counts as both sides).
    pub fn left_of_point(&self, x: f64) -> bool {
        match self {
            Localization::Empty => true,
            Localization::Bounded { hi, .. } => *hi <= x,
        }
    }

    pub fn right_of_point(&self, x: f64) -> bool {
        match self {
            Localization::Empty => true,
            Localization::Bounded { lo, .. } => *lo >= x,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Localization::Empty)
    }
}

/// Smallest interval outside of which `f0` vanishes and `f1` is constant.
pub fn localization(f0: &TestFunction, f1: &TestFunction) -> Localization {
    let mut loc = Localization::Empty;
    let g = f0.grid();
    let mut lo = None;
    let mut hi = None;
    for (i, v) in f0.samples().iter().enumerate() {
        if v.abs() > TOL_SUPP {
            lo.get_or_insert(g.x(i));
            hi = Some(g.x(i));
        }
    }
    if let (Some(lo), Some(hi)) = (lo, hi) {
        loc = loc.union(Localization::Bounded { lo, hi });
    }
    let g = f1.grid();
    let h = g.step();
    let s = f1.samples();
    let mut lo = None;
    let mut hi = None;
    for i in 0..s.len() - 1 {
        if ((s[i + 1] - s[i]) / h).abs() > TOL_SUPP {
            lo.get_or_insert(g.x(i));
            hi = Some(g.x(i + 1));
        }
    }
    if let (Some(lo), Some(hi)) = (lo, hi) {
        loc = loc.union(Localization::Bounded { lo, hi });
    }
    loc
}

pub fn integrate(f: &TestFunction) -> f64 {
    f.grid
        .weights()
        .iter()
        .zip(&f.samples)
        .map(|(w, v)| w * v)
        .sum()
}

const D8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D6: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const D4: [f64; 2] = [2.0 / 3.0, -1.0 / 12.0];

/// Central differences of order eight on the interior, narrowing towards the
/// edges, with fourth-order one-sided stencils at the two end samples.
pub fn derivative(f: &TestFunction) -> TestFunction {
    let s = &f.samples;
    let n = s.len();
    let h = f.grid.step();
    let mut out = vec![0.0; n];
    let central = |i: usize, c: &[f64]| -> f64 {
        c.iter()
            .enumerate()
            .map(|(k, ck)| ck * (s[i + k + 1] - s[i - k - 1]))
            .sum::<f64>()
            / h
    };
    for i in 0..n {
        let room = i.min(n - 1 - i);
        out[i] = match room {
            0 if i == 0 => {
                (-25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]) / (12.0 * h)
            }
            0 => {
                (25.0 * s[n - 1] - 48.0 * s[n - 2] + 36.0 * s[n - 3] - 16.0 * s[n - 4]
                    + 3.0 * s[n - 5])
                    / (12.0 * h)
            }
            1 => (s[i + 1] - s[i - 1]) / (2.0 * h),
            2 => central(i, &D4),
            3 => central(i, &D6),
            _ => central(i, &D8),
        };
    }
    TestFunction::raw(f.grid.clone(), out, q(0), q(0))
}

/// Cumulative integral from the left window edge.
///
/// `declared` is the exact value of the full integral when known; otherwise
/// the quadrature total is rounded to `TOL_CHARGE`.
pub fn antiderivative(f: &TestFunction, declared: Option<&Q>) -> Result<TestFunction> {
    if !f.left.is_zero() {
        return Err(Error::NonDecaying("left"));
    }
    if !f.right.is_zero() {
        return Err(Error::NonDecaying("right"));
    }
    let s = &f.samples;
    let n = s.len();
    let h = f.grid.step();
    let mut out = vec![0.0; n];
    for i in 0..n - 1 {
        let piece = if i >= 2 && i + 3 < n {
            (11.0 * (s[i - 2] + s[i + 3]) - 93.0 * (s[i - 1] + s[i + 2]) + 802.0 * (s[i] + s[i + 1]))
                / 1440.0
        } else if i >= 1 && i + 2 < n {
            (13.0 * (s[i] + s[i + 1]) - (s[i - 1] + s[i + 2])) / 24.0
        } else if i == 0 {
            (9.0 * s[0] + 19.0 * s[1] - 5.0 * s[2] + s[3]) / 24.0
        } else {
            (9.0 * s[n - 1] + 19.0 * s[n - 2] - 5.0 * s[n - 3] + s[n - 4]) / 24.0
        };
        out[i + 1] = out[i] + piece * h;
    }
    let right = match declared {
        Some(c) => c.clone(),
        None => round_to(integrate(f), 1_000_000_000),
    };
    Ok(TestFunction::raw(f.grid.clone(), out, q(0), right))
}

/// `∫ f g dx` over the union window; beyond the window each factor is its
/// constant limit, so the tail contributes only when it diverges.
pub fn pairing(f: &TestFunction, g: &TestFunction) -> Result<f64> {
    if !f.left.is_zero() && !g.left.is_zero() {
        return Err(Error::DivergentTail("left"));
    }
    if !f.right.is_zero() && !g.right.is_zero() {
        return Err(Error::DivergentTail("right"));
    }
    if f.grid == g.grid {
        return Ok(f
            .grid
            .weights()
            .iter()
            .zip(f.samples.iter().zip(&g.samples))
            .map(|(w, (a, b))| w * a * b)
            .sum());
    }
    let grid = union_grid(&f.grid, &g.grid)?;
    let (fa, ga) = (f.resample(&grid), g.resample(&grid));
    pairing(&fa, &ga)
}

fn union_grid(a: &Grid, b: &Grid) -> Result<Grid> {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    let h = a.step().min(b.step());
    let n = ((hi - lo) / h).ceil() as usize + 1;
    Grid::new(lo, hi, n)
}

/// Samples of the continuous transform `(2π)^{-1/2} ∫ f(x) e^{-ipx} dx` at the
/// frequencies of the padded grid, together with the frequency step.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub dp: f64,
    pub values: Vec<Complex64>,
}

impl Spectrum {
    pub fn of(f: &TestFunction) -> Spectrum {
        spectrum_of_samples(f.grid(), f.samples())
    }

    pub fn momentum(&self, k: usize) -> f64 {
        let n = self.values.len();
        if k <= n / 2 {
            k as f64 * self.dp
        } else {
            -((n - k) as f64) * self.dp
        }
    }
}

pub(crate) fn spectrum_of_samples(grid: &Grid, samples: &[f64]) -> Spectrum {
    let n = samples.len();
    let m = PAD * n;
    let h = grid.step();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(m, Complex64::zero());
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut buf);
    let norm = h / (2.0 * PI).sqrt();
    for v in buf.iter_mut() {
        *v *= norm;
    }
    Spectrum {
        dp: 2.0 * PI / (m as f64 * h),
        values: buf,
    }
}

/// Momentum weights of the two Fock quadratic forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `|p|`
    Abs,
    /// `|p|^{-1}`, with the `p = 0` term dropped
    InvAbs,
}

pub(crate) fn weight_at(w: Weight, p: f64) -> f64 {
    match w {
        Weight::Abs => p.abs(),
        Weight::InvAbs => {
            if p == 0.0 {
                0.0
            } else {
                1.0 / p.abs()
            }
        }
    }
}

/// Trapezoidal sum `Σ w(p_k)|f̃(p_k)|² Δp` with the Euler–Maclaurin term for
/// the kink of the integrand at `p = 0`. `slope_sq` is the squared modulus of
/// the integrand's linear coefficient at the origin.
pub(crate) fn weighted_sum(w: Weight, spec: &Spectrum, slope_sq: f64) -> f64 {
    let body: f64 = spec
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| weight_at(w, spec.momentum(k)) * v.norm_sqr())
        .sum();
    body * spec.dp + spec.dp * spec.dp / 6.0 * slope_sq
}

pub(crate) fn first_moment(f: &TestFunction) -> f64 {
    f.grid
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| w * f.grid.x(i) * f.samples[i])
        .sum()
}

/// `∫ |p| |f̃(p)|² dp` for a function with equal limits at both ends; the
/// constant is removed first since it only contributes at `p = 0`.
pub fn abs_weighted_norm_sq(f: &TestFunction) -> Result<f64> {
    if f.left != f.right {
        return Err(Error::NotInDomain(
            "the |p|-weighted norm needs equal limits".into(),
        ));
    }
    let c = to_f64(&f.left);
    let centred: Vec<f64> = f.samples.iter().map(|v| v - c).collect();
    let spec = spectrum_of_samples(&f.grid, &centred);
    let mean: f64 = f
        .grid
        .weights()
        .iter()
        .zip(&centred)
        .map(|(w, v)| w * v)
        .sum();
    let slope_sq = mean * mean / (2.0 * PI);
    Ok(weighted_sum(Weight::Abs, &spec, slope_sq))
}

/// `‖T_a F‖² = ∫ (|p|^{-1} |f̃₀|² + |p| |f̃₁|²) dp` for `f0 ∈ ∂S`, `f1 ∈ S`.
pub fn fock_norm_sq(f0: &TestFunction, f1: &TestFunction) -> Result<f64> {
    if !f0.has_zero_limits() {
        return Err(Error::NotInDomain("f0 must decay at both ends".into()));
    }
    if !f1.has_zero_limits() {
        return Err(Error::NotInDomain("f1 must decay at both ends".into()));
    }
    let c = integrate(f0);
    if c.abs() > TOL_CHARGE {
        return Err(Error::NotInDomain(format!("f0 has nonzero integral {c:e}")));
    }
    let m = first_moment(f0);
    let inv = weighted_sum(Weight::InvAbs, &Spectrum::of(f0), m * m / (2.0 * PI));
    Ok(inv + abs_weighted_norm_sq(f1)?)
}

/// Probabilists' Hermite polynomial `He_n`.
pub fn hermite_he(n: u32, u: f64) -> f64 {
    let (mut a, mut b) = (1.0, u);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = u * b - k as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// `amp · He_n(u) e^{-u²/2} / (s √(2π))` with `u = (x - c)/s`; its integral is
/// `amp` for `n = 0` and zero otherwise.
pub fn hermite_gaussian(grid: &Grid, order: u32, center: f64, scale: f64, amp: f64) -> TestFunction {
    let norm = amp / (scale * (2.0 * PI).sqrt());
    let samples = grid.sample(|x| {
        let u = (x - center) / scale;
        norm * hermite_he(order, u) * (-0.5 * u * u).exp()
    });
    TestFunction::raw(grid.clone(), samples, q(0), q(0))
}

/// `e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)})`, the smooth step from 0 to 1 on `[0, 1]`.
fn smooth_step(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0);
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    let s = a / (a + b);
    let da = a / (u * u);
    let db = b / ((1.0 - u) * (1.0 - u));
    let ds = (da * b + a * db) / ((a + b) * (a + b));
    (s, ds)
}

const BETA_K: i32 = 7;

fn binom(n: i32, k: i32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Polynomial step `I_u(k+1, k+1)` and its first two derivatives in `u`.
fn poly_step(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let k = BETA_K;
    let m = 2 * k + 1;
    let s: f64 = (k + 1..=m)
        .map(|j| binom(m, j) * u.powi(j) * (1.0 - u).powi(m - j))
        .sum();
    let c = m as f64 * binom(2 * k, k);
    let ds = c * u.powi(k) * (1.0 - u).powi(k);
    let dds = c * k as f64 * (u.powi(k - 1) * (1.0 - u).powi(k) - u.powi(k) * (1.0 - u).powi(k - 1));
    (s, ds, dds)
}

/// A monotone step from −1/2 to 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct Kink {
    pub center: Q,
    pub width: Q,
    pub compact: bool,
}

impl Kink {
    pub fn new(center: Q, width: Q, compact: bool) -> Kink {
        Kink {
            center,
            width,
            compact,
        }
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        let w = to_f64(&self.width);
        if !(w > 0.0) {
            return Err(Error::BadGrid("kink width must be positive".into()));
        }
        if w < 4.0 * grid.step() {
            return Err(Error::BadGrid(format!(
                "kink width {w} is below four grid steps"
            )));
        }
        let c = to_f64(&self.center);
        if c - w <= grid.lo() || c + w >= grid.hi() {
            return Err(Error::BadGrid("kink does not fit in the window".into()));
        }
        Ok(())
    }

    /// Profile value and its first two derivatives at `x`.
    pub fn eval(&self, grid: &Grid, x: f64) -> (f64, f64, f64) {
        let c = to_f64(&self.center);
        let w = to_f64(&self.width);
        if self.compact {
            let u = (x - (c - w)) / (2.0 * w);
            let (s, ds, dds) = poly_step(u);
            let j = 1.0 / (2.0 * w);
            return (s - 0.5, ds * j, dds * j * j);
        }
        // arctan profile, spliced onto ±1/2 before the window edge
        let reach = (grid.hi() - c).min(c - grid.lo());
        let (r0, r1) = (0.5 * reach, 0.875 * reach);
        let y = x - c;
        let r = y.abs();
        let sgn = if y < 0.0 { -1.0 } else { 1.0 };
        let u = y / w;
        let a = u.atan() / PI;
        let da = 1.0 / (PI * w * (1.0 + u * u));
        let dda = -2.0 * u / (PI * w * w * (1.0 + u * u) * (1.0 + u * u));
        let v = (r - r0) / (r1 - r0);
        let (chi, dchi_dv) = smooth_step(v);
        // derivative of chi(|y|) with respect to x
        let dchi = sgn * dchi_dv / (r1 - r0);
        let ddchi = if v > 0.0 && v < 1.0 {
            let e = 1e-4;
            let (_, d1) = smooth_step(v + e);
            let (_, d0) = smooth_step(v - e);
            (d1 - d0) / (2.0 * e) / ((r1 - r0) * (r1 - r0))
        } else {
            0.0
        };
        let half = 0.5 * sgn;
        let t = a * (1.0 - chi) + half * chi;
        let dt = da * (1.0 - chi) + (half - a) * dchi;
        let ddt = dda * (1.0 - chi) - 2.0 * da * dchi + (half - a) * ddchi;
        (t, dt, ddt)
    }

    pub fn profile(&self, grid: &Grid) -> Result<TestFunction> {
        self.check(grid)?;
        let s = grid.sample(|x| self.eval(grid, x).0);
        TestFunction::new(grid.clone(), s, ratio(-1, 2), ratio(1, 2))
    }

    /// Exact derivative `∂t`, integral 1.
    pub fn slope(&self, grid: &Grid) -> Result<TestFunction> {
        self.check(grid)?;
        let s = grid.sample(|x| self.eval(grid, x).1);
        TestFunction::new(grid.clone(), s, q(0), q(0))
    }

    /// Exact second derivative `∂²t`, integral 0.
    pub fn curvature(&self, grid: &Grid) -> Result<TestFunction> {
        self.check(grid)?;
        let s = grid.sample(|x| self.eval(grid, x).2);
        TestFunction::new(grid.clone(), s, q(0), q(0))
    }
}

pub fn make_kink(grid: &Grid, center: Q, width: Q, compact: bool) -> Result<TestFunction> {
    Kink::new(center, width, compact).profile(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_mirror_symmetric_and_exact_on_cubics() {
        for n in [33usize, 34, 4096] {
            let g = Grid::symmetric(2.0, n).unwrap();
            let w = g.weights();
            for i in 0..n {
                assert_eq!(w[i], w[n - 1 - i]);
            }
            let cubic: f64 = (0..n).map(|i| w[i] * (g.x(i) + 1.0).powi(3)).sum();
            assert!((cubic - (81.0 - 1.0) / 4.0).abs() < 1e-10, "{n}: {cubic}");
        }
    }

    #[test]
    fn poly_step_is_a_step() {
        assert_eq!(poly_step(0.0).0, 0.0);
        assert_eq!(poly_step(1.0).0, 1.0);
        assert!((poly_step(0.5).0 - 0.5).abs() < 1e-15);
        let e = 1e-6;
        let fd = (poly_step(0.3 + e).0 - poly_step(0.3 - e).0) / (2.0 * e);
        assert!((fd - poly_step(0.3).1).abs() < 1e-6);
        let fd2 = (poly_step(0.3 + e).1 - poly_step(0.3 - e).1) / (2.0 * e);
        assert!((fd2 - poly_step(0.3).2).abs() < 1e-4);
    }

    #[test]
    fn hermite_recurrence() {
        assert_eq!(hermite_he(2, 3.0), 8.0);
        assert_eq!(hermite_he(3, 2.0), 2.0);
    }
}
