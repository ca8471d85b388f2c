//! Supported dynamical systems, exact point representations and metrics.
//!
//! Metrics: `2^-(first disagreement)` on shifts, `2^-(agreeing levels)` on
//! odometers, the max-metric on products, and `|i-j|/N` (or its circular
//! variant) on grids. All values are exact [`Mag`]s.

mod grid;
mod literal;
mod odometer;
mod symbolic;

use std::fmt;

use num_integer::Integer;

pub use grid::{center, GridMetric, GridSource, GridSystem, MapFamily, Q};
pub use literal::{parse_point, parse_system, parse_system_with, FileLoader, FsLoader};
pub use odometer::{validate_structure, OdometerPoint, PeriodicStructure};
pub use symbolic::{canonicalize, parse_symbolic, Symbol, SymbolicPoint};


use crate::error::{Error, Result};
use crate::mag::Mag;

/// A memory-1 subshift of finite type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sft {
    alphabet: u32,
    allowed: Vec<Vec<bool>>,
    path: Option<String>,
}

impl Sft {
    pub fn new(alphabet: u32, allowed: Vec<Vec<bool>>, path: Option<String>) -> Result<Self> {
        let a = alphabet as usize;
        if alphabet < 1 {
            return Err(Error::InvalidSystem("SFT alphabet must be nonempty".into()));
        }
        if allowed.len() != a || allowed.iter().any(|r| r.len() != a) {
            return Err(Error::InvalidSystem(format!(
                "transition matrix must be {a}x{a}"
            )));
        }
        if let Some(s) = allowed.iter().position(|r| !r.iter().any(|&b| b)) {
            return Err(Error::InvalidSystem(format!("symbol {s} has no allowed successor")));
        }
        Ok(Sft {
            alphabet,
            allowed,
            path,
        })
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn allowed(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    pub fn allows(&self, a: Symbol, b: Symbol) -> bool {
        self.allowed[a as usize][b as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    FullShift { alphabet: u32 },
    Sft(Sft),
    Odometer(PeriodicStructure),
    Product(Vec<System>),
    Grid(GridSystem),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Symbolic(SymbolicPoint),
    Odometer(OdometerPoint),
    Product(Vec<Point>),
    Cell(usize),
}

/// Preperiod and eventual period of an orbit `(f^i(x))_{i>=0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitShape {
    pub preperiod: usize,
    pub period: usize,
}

impl OrbitShape {
    /// Length of an index window after which the sequence pair `(self, other)` repeats.
    pub fn joint_window(&self, other: &OrbitShape) -> usize {
        self.preperiod.max(other.preperiod) + self.period.lcm(&other.period)
    }
}

fn mismatch(sys: &System, x: &Point) -> Error {
    Error::PointSystemMismatch(format!("{x} is not a point of {sys}"))
}

impl System {
    pub fn full_shift(alphabet: u32) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidSystem("full shift needs at least two symbols".into()));
        }
        Ok(System::FullShift { alphabet })
    }

    pub fn odometer(levels: &[u64]) -> Result<Self> {
        Ok(System::Odometer(validate_structure(levels)?))
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, System::Grid(_))
    }

    /// Checks that `x` is a point of this system.
    pub fn contains(&self, x: &Point) -> Result<()> {
        match (self, x) {
            (System::FullShift { alphabet }, Point::Symbolic(s)) => {
                if s.max_symbol() < *alphabet {
                    Ok(())
                } else {
                    Err(mismatch(self, x))
                }
            }
            (System::Sft(sft), Point::Symbolic(s)) => {
                if s.max_symbol() < sft.alphabet && s.respects(&sft.allowed) {
                    Ok(())
                } else {
                    Err(mismatch(self, x))
                }
            }
            (System::Odometer(m), Point::Odometer(o)) => m.contains(o),
            (System::Product(parts), Point::Product(ps)) if parts.len() == ps.len() => {
                parts.iter().zip(ps).try_for_each(|(s, p)| s.contains(p))
            }
            (System::Grid(g), Point::Cell(i)) if *i < g.len() => Ok(()),
            _ => Err(mismatch(self, x)),
        }
    }

    /// `f(x)`, after checking membership.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.contains(x)?;
        Ok(self.step(x))
    }

    /// `d(x, y)`, after checking membership.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<Mag> {
        self.contains(x)?;
        self.contains(y)?;
        Ok(self.dist(x, y))
    }

    /// `f(x)` for a point already known to belong to the system.
    ///
    /// # Panics
    /// If the point's kind does not match the system.
    pub fn step(&self, x: &Point) -> Point {
        match (self, x) {
            (System::FullShift { .. } | System::Sft(_), Point::Symbolic(s)) => {
                Point::Symbolic(s.shift())
            }
            (System::Odometer(m), Point::Odometer(o)) => Point::Odometer(m.step(o)),
            (System::Product(parts), Point::Product(ps)) => {
                Point::Product(parts.iter().zip(ps).map(|(s, p)| s.step(p)).collect())
            }
            (System::Grid(g), Point::Cell(i)) => Point::Cell(g.step(*i)),
            _ => panic!("{}", mismatch(self, x)),
        }
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: &Point, n: usize) -> Point {
        match (self, x) {
            (System::FullShift { .. } | System::Sft(_), Point::Symbolic(s)) => {
                Point::Symbolic(s.shift_by(n))
            }
            (System::Odometer(m), Point::Odometer(o)) => Point::Odometer(m.advance(o, n as u64)),
            (System::Product(parts), Point::Product(ps)) => Point::Product(
                parts.iter().zip(ps).map(|(s, p)| s.iterate(p, n)).collect(),
            ),
            _ => {
                let mut y = x.clone();
                for _ in 0..n {
                    y = self.step(&y);
                }
                y
            }
        }
    }

    /// The orbit `x, f(x), …, f^(len-1)(x)`.
    pub fn orbit(&self, x: &Point, len: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(len);
        let mut y = x.clone();
        for i in 0..len {
            if i + 1 < len {
                let next = self.step(&y);
                out.push(std::mem::replace(&mut y, next));
            } else {
                out.push(y.clone());
            }
        }
        out
    }

    /// `d(x, y)` for points already known to belong to the system.
    pub fn dist(&self, x: &Point, y: &Point) -> Mag {
        match (self, x, y) {
            (System::FullShift { .. } | System::Sft(_), Point::Symbolic(a), Point::Symbolic(b)) => {
                a.distance(b)
            }
            (System::Odometer(m), Point::Odometer(a), Point::Odometer(b)) => m.distance(a, b),
            (System::Product(parts), Point::Product(a), Point::Product(b)) => parts
                .iter()
                .zip(a.iter().zip(b))
                .map(|(s, (p, q))| s.dist(p, q))
                .max()
                .unwrap_or(Mag::ZERO),
            (System::Grid(g), Point::Cell(i), Point::Cell(j)) => g.cell_distance(*i, *j),
            _ => panic!("{}", mismatch(self, x)),
        }
    }

    /// Preperiod and period of the orbit of `x`. Odometer orbits have period
    /// `m_J` at depth `J`.
    pub fn orbit_shape(&self, x: &Point) -> OrbitShape {
        match (self, x) {
            (System::FullShift { .. } | System::Sft(_), Point::Symbolic(s)) => OrbitShape {
                preperiod: s.preperiod().len(),
                period: s.cycle().len(),
            },
            (System::Odometer(m), Point::Odometer(_)) => OrbitShape {
                preperiod: 0,
                period: m.top() as usize,
            },
            (System::Product(parts), Point::Product(ps)) => {
                parts
                    .iter()
                    .zip(ps)
                    .map(|(s, p)| s.orbit_shape(p))
                    .fold(OrbitShape { preperiod: 0, period: 1 }, |acc, o| OrbitShape {
                        preperiod: acc.preperiod.max(o.preperiod),
                        period: acc.period.lcm(&o.period),
                    })
            }
            (System::Grid(g), Point::Cell(i)) => {
                let mut seen = vec![usize::MAX; g.len()];
                let mut c = *i;
                let mut t = 0;
                while seen[c] == usize::MAX {
                    seen[c] = t;
                    c = g.step(c);
                    t += 1;
                }
                OrbitShape {
                    preperiod: seen[c],
                    period: t - seen[c],
                }
            }
            _ => panic!("{}", mismatch(self, x)),
        }
    }

    /// Upper bound on any distance in the system.
    pub fn diameter_bound(&self) -> Mag {
        Mag::ONE
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::FullShift { alphabet } => write!(f, "full-shift:{alphabet}"),
            System::Sft(sft) => match &sft.path {
                Some(p) => write!(f, "sft:{}@{}", sft.alphabet, p),
                None => {
                    let rows: Vec<String> = sft
                        .allowed
                        .iter()
                        .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
                        .collect();
                    write!(f, "sft:{}={}", sft.alphabet, rows.join("/"))
                }
            },
            System::Odometer(m) => write!(f, "odometer:{m}"),
            System::Product(parts) => {
                let ps: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "product({})", ps.join(","))
            }
            System::Grid(g) => write!(f, "{g}"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Symbolic(s) => write!(f, "{s}"),
            Point::Odometer(o) => write!(f, "{o}"),
            Point::Product(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "<{}>", parts.join(";"))
            }
            Point::Cell(i) => write!(f, "{i}"),
        }
    }
}

impl From<SymbolicPoint> for Point {
    fn from(s: SymbolicPoint) -> Self {
        Point::Symbolic(s)
    }
}

impl From<OdometerPoint> for Point {
    fn from(o: OdometerPoint) -> Self {
        Point::Odometer(o)
    }
}
