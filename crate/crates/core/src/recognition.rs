//! Recurrence detectors: regular recurrence witnesses, syndetic return gaps,
//! return-time fingerprints of odometers, clopen partitions of minimal data,
//! and classification of period traces.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mag::Mag;
use crate::spaces::{Point, System};

/// Default stabilisation window for [`classify`].
pub const STABILIZATION: usize = 3;

/// Smallest `n <= horizon` with `d(x, f^{kn}(x)) <= eps` for every `k >= 0`.
///
/// The orbit is eventually periodic with shape `(p0, p)`, so `k ↦ f^{kn}(x)`
/// repeats once `kn >= p0`, with period `p / gcd(n, p)`; checking `k` up to
/// `⌈p0/n⌉ + p/gcd(n, p)` is exhaustive.
pub fn rr_witness(system: &System, x: &Point, eps: &Mag, horizon: usize) -> Option<usize> {
    let shape = system.orbit_shape(x);
    (1..=horizon).find(|&n| {
        let ks = shape.preperiod.div_ceil(n) + shape.period / n.gcd(&shape.period);
        let mut y = x.clone();
        (1..=ks).all(|_| {
            y = system.iterate(&y, n);
            system.dist(x, &y) <= *eps
        })
    })
}

/// Return times `i in 0..=horizon` with `d(x, f^i(x)) <= eps`.
pub fn return_times(system: &System, x: &Point, eps: &Mag, horizon: usize) -> Vec<usize> {
    system
        .orbit(x, horizon + 1)
        .iter()
        .enumerate()
        .filter(|(_, y)| system.dist(x, y) <= *eps)
        .map(|(i, _)| i)
        .collect()
}

/// Smallest `g` such that every `g` consecutive times in `0..=horizon`
/// contain a return to within `eps`; `None` if `x` never returns.
pub fn syndetic_gap(system: &System, x: &Point, eps: &Mag, horizon: usize) -> Option<usize> {
    let r = return_times(system, x, eps, horizon);
    let last = *r.last()?;
    if last == 0 {
        return None;
    }
    let inner = r.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(1);
    Some(inner.max(horizon - last + 1))
}

/// `D(x, f^i(x)) = sup_t d(f^t(x), f^{t+i}(x))`. For odometers `D = d`.
pub fn orbit_sup_distance(system: &System, x: &Point, i: usize) -> Mag {
    match (system, x) {
        (System::Odometer(_), _) => system.dist(x, &system.iterate(x, i)),
        (System::Product(parts), Point::Product(ps)) => parts
            .iter()
            .zip(ps)
            .map(|(s, p)| orbit_sup_distance(s, p, i))
            .max()
            .unwrap_or(Mag::ZERO),
        _ => {
            let shape = system.orbit_shape(x);
            let window = shape.preperiod + shape.period;
            let a = system.orbit(x, window);
            let b = system.orbit(&system.iterate(x, i), window);
            a.iter()
                .zip(&b)
                .map(|(p, q)| system.dist(p, q))
                .max()
                .unwrap_or(Mag::ZERO)
        }
    }
}

/// Return times `l_j = min{i > 0 : D(x, f^i(x)) <= 2^-j}` for `j = 1..=depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub depth: u32,
    pub horizon: usize,
    pub returns: Vec<usize>,
}

impl Fingerprint {
    /// Whether the recovered sequence is a valid periodic structure prefix.
    pub fn is_divisible(&self) -> bool {
        self.returns.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

/// Return-time fingerprint. The ball `B_ε(x)` meets `f^i(B_ε(x))` iff the
/// centers are close in the isometric sup-metric `D`; on odometers `D = d`.
pub fn fingerprint(system: &System, x: &Point, depth: u32, horizon: usize) -> Result<Fingerprint> {
    system.contains(x)?;
    let mut returns = Vec::with_capacity(depth as usize);
    let mut from = 1;
    for j in 1..=depth {
        let eps = Mag::pow2(j);
        // The qualifying set shrinks as j grows, so l_j >= l_{j-1}.
        let l = (from..=horizon)
            .find(|&i| orbit_sup_distance(system, x, i) <= eps)
            .ok_or(Error::NoReturnWithinHorizon(j))?;
        returns.push(l);
        from = l;
    }
    Ok(Fingerprint {
        depth,
        horizon,
        returns,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// Odometer points with the given residue at a level.
    Residue { level: usize, modulus: u64, residue: u64 },
    /// An explicit finite set.
    Points(BTreeSet<Point>),
}

impl Block {
    pub fn contains(&self, y: &Point) -> bool {
        match (self, y) {
            (Block::Residue { level, residue, .. }, Point::Odometer(o)) => o.residue(*level) == *residue,
            (Block::Points(s), _) => s.contains(y),
            _ => false,
        }
    }
}

/// `P_x = {f^i(A_x) : 0 <= i < l_x}` with `A_x` the closure of `{f^{k n_x}(x)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionDescriptor {
    pub eps: Mag,
    pub horizon: usize,
    pub n_x: usize,
    pub l_x: usize,
    /// `diam(A_x)`, exact.
    pub diameter: Mag,
    pub blocks: Vec<Block>,
}

impl PartitionDescriptor {
    pub fn block_of(&self, y: &Point) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(y))
    }
}

/// Clopen partition around `x` for odometers and periodic orbits.
pub fn clopen_partition(
    system: &System,
    x: &Point,
    eps: &Mag,
    horizon: usize,
) -> Result<PartitionDescriptor> {
    system.contains(x)?;
    let n_x = rr_witness(system, x, eps, horizon).ok_or(Error::NoWitness(horizon))?;
    if let (System::Odometer(m), Point::Odometer(o)) = (system, x) {
        // n_x = m_q, and A_x is the level-q class of x.
        let q = m.levels_dividing(n_x as u64);
        let modulus = m.modulus(q);
        let blocks = (0..modulus)
            .map(|i| Block::Residue {
                level: q,
                modulus,
                residue: (o.residue(q) + i) % modulus,
            })
            .collect();
        let diameter = if q == m.depth() { Mag::ZERO } else { Mag::pow2(q as u32) };
        return Ok(PartitionDescriptor {
            eps: *eps,
            horizon,
            n_x,
            l_x: modulus as usize,
            diameter,
            blocks,
        });
    }
    let shape = system.orbit_shape(x);
    if shape.preperiod > 0 {
        return Err(Error::NotMinimalInput(format!(
            "{x} has preperiod {}",
            shape.preperiod
        )));
    }
    let p = shape.period;
    let l_x = n_x.gcd(&p);
    let a_x: BTreeSet<Point> = (0..p / l_x)
        .map(|k| system.iterate(x, (k * n_x) % p))
        .collect();
    let diameter = a_x
        .iter()
        .flat_map(|a| a_x.iter().map(move |b| (a, b)))
        .map(|(a, b)| system.dist(a, b))
        .max()
        .unwrap_or(Mag::ZERO);
    let blocks = (0..l_x)
        .map(|i| Block::Points(a_x.iter().map(|a| system.iterate(a, i)).collect()))
        .collect();
    Ok(PartitionDescriptor {
        eps: *eps,
        horizon,
        n_x,
        l_x,
        diameter,
        blocks,
    })
}

/// Depth-qualified reading of a period trace `(n_0, …, n_J)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// The last `s` periods agree on `period`.
    Periodic { period: usize, depth: usize },
    /// The last `s` periods strictly increase.
    OdometerLike { trace: Vec<usize> },
    Unresolved { depth: usize },
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Periodic { period, depth } => write!(f, "periodic({period}) at depth {depth}"),
            Verdict::OdometerLike { trace } => {
                let t: Vec<String> = trace.iter().map(usize::to_string).collect();
                write!(f, "odometer-like({}) at depth {}", t.join(","), trace.len() - 1)
            }
            Verdict::Unresolved { depth } => write!(f, "unresolved at depth {depth}"),
        }
    }
}

/// Classify a period trace with stabilisation window `s`.
pub fn classify(periods: &[usize], s: usize) -> Result<Verdict> {
    if let Some(j) = periods.windows(2).position(|w| w[0] == 0 || w[1] % w[0] != 0) {
        return Err(Error::DivisibilityViolation(j + 1));
    }
    let depth = periods.len().saturating_sub(1);
    let s = s.max(1);
    if periods.len() < s || periods.is_empty() {
        return Ok(Verdict::Unresolved { depth });
    }
    let tail = &periods[periods.len() - s..];
    if tail.windows(2).all(|w| w[0] == w[1]) {
        Ok(Verdict::Periodic {
            period: *tail.last().unwrap(),
            depth,
        })
    } else if tail.windows(2).all(|w| w[0] < w[1]) {
        Ok(Verdict::OdometerLike {
            trace: periods.to_vec(),
        })
    } else {
        Ok(Verdict::Unresolved { depth })
    }
}
