//! Eventually periodic pseudo-orbits: exact defects, constructive shadowing
//! oracles with explicit moduli, and the initial pseudo-orbit through a point.
//!
//! Moduli, for `ε >= 2^-k` (largest such `k`):
//!
//! * shifts and memory-1 SFTs: `δ = 2^-(k+1)`. A `δ`-pseudo-orbit has
//!   `x_{i+1}[t] = x_i[t+1]` for `t <= k`, so the sequence of first symbols
//!   agrees with each `x_i` on `k + 2` symbols, and consecutive first
//!   symbols are an adjacent pair of a single entry, hence allowed.
//! * odometers: `δ = 2^-k`. Level-`k` residues then advance by exactly one
//!   per step, so the smallest lift of `x_0`'s level-`k` class shadows.
//! * products: the minimum over components, shadowed componentwise.
//!
//! Grid systems have no oracle.

use std::fmt;

use crate::error::{Error, Result};
use crate::mag::Mag;
use crate::spaces::{canonicalize, OrbitShape, Point, System};

/// `preperiod · cycle^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoOrbit {
    preperiod: Vec<Point>,
    cycle: Vec<Point>,
}

impl PseudoOrbit {
    pub fn new(preperiod: Vec<Point>, cycle: Vec<Point>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Parse("pseudo-orbit cycle must be nonempty".into()));
        }
        Ok(PseudoOrbit { preperiod, cycle })
    }

    /// The constant sequence at `x`.
    pub fn constant(x: Point) -> Self {
        PseudoOrbit {
            preperiod: Vec::new(),
            cycle: vec![x],
        }
    }

    /// The true orbit of `x`, represented with its exact preperiod and period.
    pub fn true_orbit(system: &System, x: &Point) -> Self {
        let shape = system.orbit_shape(x);
        let mut pts = system.orbit(x, shape.preperiod + shape.period);
        let cycle = pts.split_off(shape.preperiod);
        PseudoOrbit {
            preperiod: pts,
            cycle,
        }
    }

    pub fn preperiod(&self) -> &[Point] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[Point] {
        &self.cycle
    }

    pub fn shape(&self) -> OrbitShape {
        OrbitShape {
            preperiod: self.preperiod.len(),
            period: self.cycle.len(),
        }
    }

    /// `x_i`.
    pub fn at(&self, i: usize) -> &Point {
        let k = self.preperiod.len();
        if i < k {
            &self.preperiod[i]
        } else {
            &self.cycle[(i - k) % self.cycle.len()]
        }
    }

    /// The `k + n` stored entries in sequence order.
    pub fn entries(&self) -> impl Iterator<Item = &Point> {
        self.preperiod.iter().chain(&self.cycle)
    }

    pub fn validate(&self, system: &System) -> Result<()> {
        self.entries().try_for_each(|p| system.contains(p))
    }

    /// `i`-th component of a product pseudo-orbit.
    fn component(&self, c: usize) -> PseudoOrbit {
        let proj = |p: &Point| match p {
            Point::Product(ps) => ps[c].clone(),
            _ => panic!("not a product point"),
        };
        PseudoOrbit {
            preperiod: self.preperiod.iter().map(proj).collect(),
            cycle: self.cycle.iter().map(proj).collect(),
        }
    }
}

impl fmt::Display for PseudoOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Point]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "[{}] [{}]^∞", j(&self.preperiod), j(&self.cycle))
    }
}

/// `sup_i d(f(x_i), x_{i+1})`, exact over the `k + n` stored entries.
pub fn validity_defect(system: &System, xi: &PseudoOrbit) -> Mag {
    let len = xi.preperiod.len() + xi.cycle.len();
    (0..len)
        .map(|i| system.dist(&system.step(xi.at(i)), xi.at(i + 1)))
        .max()
        .unwrap_or(Mag::ZERO)
}

/// `sup_i d(a(i), b(i))` over one joint window of two eventually periodic sequences.
fn window_sup<'a>(
    system: &System,
    window: usize,
    mut a: impl FnMut(usize) -> &'a Point,
    mut b: impl FnMut(usize) -> Point,
) -> Mag {
    (0..window)
        .map(|i| system.dist(a(i), &b(i)))
        .max()
        .unwrap_or(Mag::ZERO)
}

/// `sup_{i>=0} d(f^i(y), x_i)`.
pub fn shadow_defect(system: &System, xi: &PseudoOrbit, y: &Point) -> Mag {
    let window = xi.shape().joint_window(&system.orbit_shape(y));
    let orbit = system.orbit(y, window);
    window_sup(system, window, |i| xi.at(i), |i| orbit[i].clone())
}

/// `sup_{i>=0} d(x_i, y_i)` between two pseudo-orbits.
pub fn sup_distance(system: &System, a: &PseudoOrbit, b: &PseudoOrbit) -> Mag {
    let window = a.shape().joint_window(&b.shape());
    window_sup(system, window, |i| a.at(i), |i| b.at(i).clone())
}

/// `limsup_i d(x_i, y_i)`: the sup over one joint period past both preperiods.
pub fn eventual_sup(system: &System, a: &PseudoOrbit, b: &PseudoOrbit) -> Mag {
    let (sa, sb) = (a.shape(), b.shape());
    let start = sa.preperiod.max(sb.preperiod);
    let window = sa.joint_window(&sb);
    (start..window)
        .map(|i| system.dist(a.at(i), b.at(i)))
        .max()
        .unwrap_or(Mag::ZERO)
}

fn level_of(eps: &Mag) -> Result<u32> {
    eps.floor_pow2_exp().ok_or(Error::NonPositiveTolerance)
}

/// δ such that every δ-pseudo-orbit is ε-shadowed by [`shadow_oracle`]'s point.
pub fn shadowing_modulus(system: &System, eps: &Mag) -> Result<Mag> {
    let k = level_of(eps)?;
    match system {
        System::FullShift { .. } | System::Sft(_) => Ok(Mag::pow2(k + 1)),
        System::Odometer(_) => Ok(Mag::pow2(k)),
        System::Product(parts) => parts
            .iter()
            .map(|p| shadowing_modulus(p, eps))
            .try_fold(Mag::ONE, |acc, m| Ok(acc.min(m?))),
        System::Grid(_) => Err(Error::UnsupportedSystem(
            "grid systems have no shadowing oracle".into(),
        )),
    }
}

/// A point whose orbit ε-shadows `xi`; requires `validity_defect(xi) <= shadowing_modulus(ε)`.
pub fn shadow_oracle(system: &System, xi: &PseudoOrbit, eps: &Mag) -> Result<Point> {
    let delta = shadowing_modulus(system, eps)?;
    let defect = validity_defect(system, xi);
    if defect > delta {
        return Err(Error::DefectTooLarge {
            defect: defect.to_string(),
            bound: delta.to_string(),
        });
    }
    Ok(oracle_unchecked(system, xi, eps))
}

fn oracle_unchecked(system: &System, xi: &PseudoOrbit, eps: &Mag) -> Point {
    match system {
        System::FullShift { .. } | System::Sft(_) => {
            let first = |p: &Point| match p {
                Point::Symbolic(s) => s.symbol_at(0),
                _ => unreachable!("validated"),
            };
            let pre: Vec<_> = xi.preperiod.iter().map(first).collect();
            let cyc: Vec<_> = xi.cycle.iter().map(first).collect();
            Point::Symbolic(canonicalize(&pre, &cyc).expect("cycle nonempty"))
        }
        System::Odometer(m) => {
            let k = level_of(eps).expect("checked by modulus") as usize;
            let level = k.min(m.depth());
            match xi.at(0) {
                Point::Odometer(x0) => Point::Odometer(m.lift(level, x0.residue(level))),
                _ => unreachable!("validated"),
            }
        }
        System::Product(parts) => Point::Product(
            parts
                .iter()
                .enumerate()
                .map(|(c, sys)| oracle_unchecked(sys, &xi.component(c), eps))
                .collect(),
        ),
        System::Grid(_) => unreachable!("rejected by modulus"),
    }
}

/// Eventually periodic δ-pseudo-orbit through `x`: the first recurrence
/// `d(f^b(x), f^a(x)) <= δ` in (b ascending, a ascending) order closes the loop.
pub fn initial_pseudo_orbit(system: &System, x: &Point, delta: &Mag) -> Result<PseudoOrbit> {
    let shape = system.orbit_shape(x);
    initial_pseudo_orbit_within(system, x, delta, shape.preperiod + shape.period)
}

/// As [`initial_pseudo_orbit`] with an explicit bound on `b`.
pub fn initial_pseudo_orbit_within(
    system: &System,
    x: &Point,
    delta: &Mag,
    max_b: usize,
) -> Result<PseudoOrbit> {
    system.contains(x)?;
    let orbit = system.orbit(x, max_b + 1);
    for b in 1..=max_b {
        if let Some(a) = (0..b).find(|&a| system.dist(&orbit[b], &orbit[a]) <= *delta) {
            let mut pts = orbit;
            pts.truncate(b);
            let cycle = pts.split_off(a);
            return Ok(PseudoOrbit {
                preperiod: pts,
                cycle,
            });
        }
    }
    Err(Error::HorizonExceeded(max_b))
}
