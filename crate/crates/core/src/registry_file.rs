//! Line-oriented generator registry files.
//!
//! ```text
//! # comment
//! grid window=32 points=4096
//! fn h0 kind=gaussian-hermite order=0 center=-12 scale=1/2 amp=1
//! fn k0 kind=kink center=0 width=1 compact=true deriv=0 limits=-1/2,1/2
//! fn one kind=constant value=1
//! fn g kind=grid file=samples.txt window=-8,8 limits=0,0
//! pair a1 f0=h1 f1=h0
//! pair c1 f0=h0 f1=0 c=1
//! center N
//! regularizer T
//! carrier c1
//! ```
//!
//! `f0=0` / `f1=0` denote the zero function. The charge `c` defaults to 0 and
//! is checked against quadrature. Function limits default to the values
//! implied by the kind and are checked against the edge samples.

use std::collections::HashMap;
use std::path::Path;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{parse_q, q, ratio, to_f64, Q};
use crate::funcspace::{hermite_gaussian, Grid, Kink, TestFunction};
use crate::symplectic::{GenId, Registry, SymVector};

pub const DEFAULT_REGISTRY: &str = include_str!("../data/default.registry");

/// Grid overrides applied on top of the file's `grid` line.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridOverride {
    pub points: Option<usize>,
    pub window: Option<f64>,
}

/// A parsed registry together with its designated elements.
#[derive(Debug, Clone)]
pub struct LoadedRegistry {
    pub registry: Registry,
    pub carriers: Vec<GenId>,
}

pub fn load_default() -> Result<LoadedRegistry> {
    parse_registry(DEFAULT_REGISTRY, None, GridOverride::default())
}

pub fn load_path(path: &Path, grid: GridOverride) -> Result<LoadedRegistry> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", path.display()),
    })?;
    parse_registry(&text, path.parent(), grid)
}

struct Line<'a> {
    no: usize,
    head: &'a str,
    name: Option<&'a str>,
    kv: HashMap<&'a str, &'a str>,
}

impl<'a> Line<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            msg: msg.into(),
        }
    }

    fn get(&self, k: &str) -> Option<&'a str> {
        self.kv.get(k).copied()
    }

    fn req(&self, k: &str) -> Result<&'a str> {
        self.get(k).ok_or_else(|| self.err(format!("missing {k}=")))
    }

    fn rational(&self, k: &str) -> Result<Option<Q>> {
        match self.get(k) {
            None => Ok(None),
            Some(v) => parse_q(v)
                .map(Some)
                .ok_or_else(|| self.err(format!("{k}={v} is not a rational"))),
        }
    }

    fn req_rational(&self, k: &str) -> Result<Q> {
        self.rational(k)?
            .ok_or_else(|| self.err(format!("missing {k}=")))
    }

    fn pair_q(&self, k: &str) -> Result<Option<(Q, Q)>> {
        let Some(v) = self.get(k) else { return Ok(None) };
        let (a, b) = v
            .split_once(',')
            .ok_or_else(|| self.err(format!("{k}= expects two values")))?;
        match (parse_q(a), parse_q(b)) {
            (Some(a), Some(b)) => Ok(Some((a, b))),
            _ => Err(self.err(format!("{k}={v} is not a rational pair"))),
        }
    }
}

fn tokenize(no: usize, raw: &str) -> Result<Option<Line<'_>>> {
    let text = raw.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let mut words = text.split_whitespace();
    let head = words.next().expect("nonempty");
    let mut name = None;
    let mut kv = HashMap::new();
    for w in words {
        match w.split_once('=') {
            Some((k, v)) => {
                if kv.insert(k, v).is_some() {
                    return Err(Error::Parse {
                        line: no,
                        msg: format!("duplicate key {k}"),
                    });
                }
            }
            None if name.is_none() => name = Some(w),
            None => {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("unexpected token {w}"),
                })
            }
        }
    }
    Ok(Some(Line { no, head, name, kv }))
}

pub fn parse_registry(text: &str, base: Option<&Path>, over: GridOverride) -> Result<LoadedRegistry> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, l)| tokenize(i + 1, l).transpose())
        .collect::<Result<_>>()?;

    let mut window = 32.0;
    let mut points = 4096;
    for l in lines.iter().filter(|l| l.head == "grid") {
        if let Some(w) = l.rational("window")? {
            window = to_f64(&w);
        }
        if let Some(p) = l.get("points") {
            points = p.parse().map_err(|_| l.err("points= expects an integer"))?;
        }
    }
    window = over.window.unwrap_or(window);
    points = over.points.unwrap_or(points);
    let grid = Grid::symmetric(window, points).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;

    let mut reg = Registry::new(grid.clone());
    let coarse = grid.step() / (64.0 / 4095.0);
    if coarse > 1.0 {
        reg.set_charge_tolerance(crate::funcspace::TOL_CHARGE * coarse.powi(6));
    }
    let mut funcs: HashMap<String, TestFunction> = HashMap::new();
    let mut carriers = Vec::new();

    for l in &lines {
        let name = || l.name.ok_or_else(|| l.err(format!("{} needs a name", l.head)));
        match l.head {
            "grid" => {}
            "fn" => {
                let n = name()?;
                let f = build_function(l, &grid, base)?;
                if funcs.insert(n.to_string(), f).is_some() {
                    return Err(l.err(format!("function {n} defined twice")));
                }
            }
            "pair" => {
                let n = name()?;
                let lookup = |k: &str| -> Result<TestFunction> {
                    let v = l.req(k)?;
                    if v == "0" {
                        return Ok(TestFunction::zero(&grid));
                    }
                    funcs
                        .get(v)
                        .cloned()
                        .ok_or_else(|| l.err(format!("unknown function {v}")))
                };
                let f0 = lookup("f0")?;
                let f1 = lookup("f1")?;
                let c = l.rational("c")?.unwrap_or_else(|| q(0));
                reg.register(n, f0, f1, c).map_err(|e| l.err(e.to_string()))?;
            }
            "center" => {
                let id = reg.id(name()?).map_err(|e| l.err(e.to_string()))?;
                reg.set_center(id).map_err(|e| l.err(e.to_string()))?;
            }
            "regularizer" => {
                let v = reg.vector(name()?).map_err(|e| l.err(e.to_string()))?;
                let ch = reg.charges(&v, None)?;
                if ch.c.is_zero() || ch.q.is_zero() {
                    return Err(l.err("regularizer needs nonzero charges"));
                }
                reg.set_canonical_regularizer(v);
            }
            "carrier" => {
                carriers.push(reg.id(name()?).map_err(|e| l.err(e.to_string()))?);
            }
            other => return Err(l.err(format!("unknown record {other}"))),
        }
    }
    Ok(LoadedRegistry {
        registry: reg,
        carriers,
    })
}

fn build_function(l: &Line, grid: &Grid, base: Option<&Path>) -> Result<TestFunction> {
    let kind = l.req("kind")?;
    let amp = l.rational("amp")?.unwrap_or_else(|| q(1));
    let declared = l.pair_q("limits")?;
    let (f, implied) = match kind {
        "gaussian-hermite" => {
            let order: u32 = l
                .req("order")?
                .parse()
                .map_err(|_| l.err("order= expects an integer"))?;
            let center = to_f64(&l.req_rational("center")?);
            let scale = to_f64(&l.req_rational("scale")?);
            if !(scale > 0.0) {
                return Err(l.err("scale must be positive"));
            }
            let f = hermite_gaussian(grid, order, center, scale, to_f64(&amp));
            (f, (q(0), q(0)))
        }
        "kink" => {
            let center = l.req_rational("center")?;
            let width = l.req_rational("width")?;
            let compact = match l.get("compact").unwrap_or("false") {
                "true" => true,
                "false" => false,
                v => return Err(l.err(format!("compact={v} is not a boolean"))),
            };
            let k = Kink::new(center, width, compact);
            let deriv = l.get("deriv").unwrap_or("0");
            let (f, lim) = match deriv {
                "0" => (k.profile(grid), (ratio(-1, 2), ratio(1, 2))),
                "1" => (k.slope(grid), (q(0), q(0))),
                "2" => (k.curvature(grid), (q(0), q(0))),
                v => return Err(l.err(format!("deriv={v} must be 0, 1 or 2"))),
            };
            let f = f.map_err(|e| l.err(e.to_string()))?;
            (f.scale(&amp), (&lim.0 * &amp, &lim.1 * &amp))
        }
        "constant" => {
            let v = l.req_rational("value")?;
            let v = &v * &amp;
            (TestFunction::constant(grid, v.clone()), (v.clone(), v))
        }
        "grid" => {
            let (left, right) = declared
                .clone()
                .ok_or_else(|| l.err("grid functions need limits="))?;
            let file = l.req("file")?;
            let path = match base {
                Some(b) => b.join(file),
                None => Path::new(file).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path)
                .map_err(|e| l.err(format!("{}: {e}", path.display())))?;
            let samples: Vec<f64> = text
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| l.err("sample file holds a non-number"))?;
            let (lo, hi) = match l.pair_q("window")? {
                Some((a, b)) => (to_f64(&a), to_f64(&b)),
                None => (grid.lo(), grid.hi()),
            };
            let own = crate::funcspace::make_grid_function(samples, lo, hi, left.clone(), right.clone())
                .map_err(|e| l.err(e.to_string()))?;
            let f = own.resample(grid);
            (f.scale(&amp), (&left * &amp, &right * &amp))
        }
        other => return Err(l.err(format!("unknown kind {other}"))),
    };
    if let Some(d) = declared {
        if d != implied {
            return Err(l.err("declared limits disagree with the function kind"));
        }
    }
    TestFunction::new(grid.clone(), f.samples().to_vec(), implied.0, implied.1)
        .map_err(|e| l.err(e.to_string()))
}

/// Parses `2 a1 - 3/2 c1 + N` (or `0`) into a vector.
pub fn parse_vector(reg: &Registry, s: &str) -> Result<SymVector> {
    let s = s.trim();
    let bad = |m: &str| Error::InvalidKey(format!("{m} in vector `{s}`"));
    if s == "0" {
        return Ok(SymVector::zero());
    }
    let mut out = SymVector::zero();
    let mut sign = q(1);
    let mut coef: Option<Q> = None;
    let mut need_op = false;
    let spaced = s.replace('+', " + ").replace('-', " - ");
    for tok in spaced.split_whitespace() {
        match tok {
            "+" | "-" => {
                if coef.is_some() {
                    return Err(bad("dangling coefficient"));
                }
                if need_op {
                    need_op = false;
                    sign = q(1);
                }
                if tok == "-" {
                    sign = -sign;
                }
            }
            _ if need_op => return Err(bad("missing operator")),
            _ => match parse_q(tok) {
                Some(c) if coef.is_none() => coef = Some(c),
                Some(_) => return Err(bad("two coefficients")),
                None => {
                    let id = reg.id(tok)?;
                    let c = coef.take().unwrap_or_else(|| q(1));
                    out.add_term(id, &(&sign * &c));
                    need_op = true;
                }
            },
        }
    }
    if !need_op {
        return Err(bad("incomplete term"));
    }
    Ok(out)
}
