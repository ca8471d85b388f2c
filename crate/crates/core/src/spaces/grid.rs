//! Interval and circle maps discretised on `N` equal cells.
//!
//! Cell `i` has center `c_i = (2i+1)/(2N)`. A family map is evaluated exactly
//! at the centers in rational arithmetic; the snapped cell table is what
//! `apply` uses, while the exact images drive δ-edge construction.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mag::Mag;

pub type Q = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridMetric {
    /// `|i - j| / N`.
    Interval,
    /// `min(|i - j|, N - |i - j|) / N`.
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapFamily {
    /// `2x mod 1`.
    Doubling,
    /// `x + shift mod 1`.
    Rotation { shift: Q },
    /// `1 - |2x - 1|`.
    Tent,
    /// `r x (1 - x)`, `0 <= r <= 4`.
    Logistic { r: Q },
    /// `a x + b` clamped to `[0, 1]`.
    Affine { a: Q, b: Q },
}

impl MapFamily {
    pub fn default_metric(&self) -> GridMetric {
        match self {
            MapFamily::Doubling | MapFamily::Rotation { .. } => GridMetric::Circle,
            _ => GridMetric::Interval,
        }
    }

    pub fn eval(&self, x: Q) -> Q {
        let one = Q::one();
        let frac = |v: Q| v - v.floor();
        match self {
            MapFamily::Doubling => frac(x * Q::from_integer(2)),
            MapFamily::Rotation { shift } => frac(x + shift),
            MapFamily::Tent => one - (x * Q::from_integer(2) - one).abs(),
            MapFamily::Logistic { r } => r * x * (one - x),
            MapFamily::Affine { a, b } => {
                let v = a * x + b;
                v.max(Q::zero()).min(one)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridSource {
    Family(MapFamily),
    /// Explicit cell table; `path` is kept for round-tripping descriptors.
    Table { path: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridSystem {
    n: usize,
    metric: GridMetric,
    source: GridSource,
    /// Exact image of each center, in `[0, 1]`.
    images: Vec<Q>,
    /// Cell containing each image.
    table: Vec<usize>,
}

pub fn center(i: usize, n: usize) -> Q {
    Q::new(2 * i as i128 + 1, 2 * n as i128)
}

impl GridSystem {
    pub fn from_family(family: MapFamily, n: usize, metric: Option<GridMetric>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem("grid needs at least one cell".into()));
        }
        if let MapFamily::Logistic { r } = &family {
            if *r < Q::zero() || *r > Q::from_integer(4) {
                return Err(Error::InvalidSystem("logistic parameter must lie in [0, 4]".into()));
            }
        }
        let metric = metric.unwrap_or_else(|| family.default_metric());
        let images: Vec<Q> = (0..n).map(|i| family.eval(center(i, n))).collect();
        let table = images.iter().map(|&y| snap(y, n, metric)).collect();
        Ok(GridSystem {
            n,
            metric,
            source: GridSource::Family(family),
            images,
            table,
        })
    }

    pub fn from_table(
        table: Vec<usize>,
        metric: GridMetric,
        path: Option<String>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidSystem("grid table is empty".into()));
        }
        if let Some((i, &t)) = table.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(Error::InvalidSystem(format!(
                "cell {i} maps to {t}, outside 0..{n}"
            )));
        }
        let images = table.iter().map(|&t| center(t, n)).collect();
        Ok(GridSystem {
            n,
            metric,
            source: GridSource::Table { path },
            images,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn metric(&self) -> GridMetric {
        self.metric
    }

    pub fn source(&self) -> &GridSource {
        &self.source
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn image(&self, i: usize) -> Q {
        self.images[i]
    }

    pub fn step(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn cell_distance(&self, i: usize, j: usize) -> Mag {
        let d = i.abs_diff(j);
        let d = match self.metric {
            GridMetric::Interval => d,
            GridMetric::Circle => d.min(self.n - d),
        };
        Mag::ratio(d as u128, self.n as u128)
    }

    /// `d(F(c_i), c_j)` in the grid's metric, exactly.
    pub fn image_distance(&self, i: usize, j: usize) -> Mag {
        let diff = (self.images[i] - center(j, self.n)).abs();
        let d = match self.metric {
            GridMetric::Interval => diff,
            GridMetric::Circle => diff.min(Q::one() - diff),
        };
        q_to_mag(d)
    }

    /// Cells `j` that might satisfy `d(F(c_i), c_j) <= delta`; callers recheck exactly.
    pub(crate) fn candidate_targets(&self, i: usize, delta: &Mag) -> Vec<usize> {
        let n = self.n as i64;
        let y = q_to_f64(self.images[i]) * n as f64 - 0.5;
        let w = delta.to_f64() * n as f64;
        if !w.is_finite() || w >= n as f64 {
            return (0..self.n).collect();
        }
        let lo = (y - w).floor() as i64 - 1;
        let hi = (y + w).ceil() as i64 + 1;
        let mut out: Vec<usize> = match self.metric {
            GridMetric::Interval => (lo.max(0)..=hi.min(n - 1)).map(|j| j as usize).collect(),
            GridMetric::Circle => (lo..=hi).map(|j| j.rem_euclid(n) as usize).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn snap(y: Q, n: usize, metric: GridMetric) -> usize {
    let y = match metric {
        GridMetric::Circle => y - y.floor(),
        GridMetric::Interval => y,
    };
    let cell = (y * Q::from_integer(n as i128)).floor().to_integer();
    cell.clamp(0, n as i128 - 1) as usize
}

pub(crate) fn q_to_mag(q: Q) -> Mag {
    assert!(!q.is_negative(), "negative magnitude");
    Mag::ratio(*q.numer() as u128, *q.denom() as u128)
}

fn q_to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub(crate) fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Q::new(p, q))
    } else {
        Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapFamily::Doubling => write!(f, "doubling"),
            MapFamily::Rotation { shift } => write!(f, "rotation:shift={}", fmt_q(shift)),
            MapFamily::Tent => write!(f, "tent"),
            MapFamily::Logistic { r } => write!(f, "logistic:r={}", fmt_q(r)),
            MapFamily::Affine { a, b } => write!(f, "affine:a={}:b={}", fmt_q(a), fmt_q(b)),
        }
    }
}

impl fmt::Display for GridSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let metric = match self.metric {
            GridMetric::Interval => "interval",
            GridMetric::Circle => "circle",
        };
        match &self.source {
            GridSource::Family(fam) => {
                write!(f, "grid:{fam}:n={}", self.n)?;
                if self.metric != fam.default_metric() {
                    write!(f, ":metric={metric}")?;
                }
                Ok(())
            }
            GridSource::Table { path: Some(p) } => {
                write!(f, "grid:table@{p}")?;
                if self.metric != GridMetric::Interval {
                    write!(f, ":metric={metric}")?;
                }
                Ok(())
            }
            GridSource::Table { path: None } => {
                let cells: Vec<String> = self.table.iter().map(usize::to_string).collect();
                write!(f, "grid:table={}", cells.join(","))?;
                if self.metric != GridMetric::Interval {
                    write!(f, ":metric={metric}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_quarter_hits_centers() {
        let g = GridSystem::from_family(
            MapFamily::Rotation { shift: Q::new(1, 4) },
            4,
            None,
        )
        .unwrap();
        assert_eq!(g.table(), &[1, 2, 3, 0]);
        for i in 0..4 {
            assert_eq!(g.image_distance(i, (i + 1) % 4), Mag::ZERO);
        }
    }

    #[test]
    fn doubling_images() {
        let g = GridSystem::from_family(MapFamily::Doubling, 4, None).unwrap();
        assert_eq!(g.image(0), Q::new(1, 4));
        assert_eq!(g.image_distance(0, 0), Mag::ratio(1, 8));
        assert_eq!(g.image_distance(0, 1), Mag::ratio(1, 8));
        assert_eq!(g.image_distance(0, 3), Mag::ratio(3, 8));
    }

    #[test]
    fn cell_metric() {
        let g = GridSystem::from_table((0..8).collect(), GridMetric::Interval, None).unwrap();
        assert_eq!(g.cell_distance(2, 5), Mag::ratio(3, 8));
        let c = GridSystem::from_table((0..8).collect(), GridMetric::Circle, None).unwrap();
        assert_eq!(c.cell_distance(0, 7), Mag::ratio(1, 8));
    }

    #[test]
    fn table_validation() {
        assert!(GridSystem::from_table(vec![0, 4], GridMetric::Interval, None).is_err());
        assert!(GridSystem::from_table(vec![], GridMetric::Interval, None).is_err());
    }

    #[test]
    fn candidates_cover_exact_edges() {
        let g = GridSystem::from_family(MapFamily::Logistic { r: Q::new(37, 10) }, 50, None).unwrap();
        for delta in [Mag::ZERO, Mag::ratio(1, 50), Mag::pow2(3), Mag::ratio(1, 3)] {
            for i in 0..50 {
                let cand = g.candidate_targets(i, &delta);
                for j in 0..50 {
                    if g.image_distance(i, j) <= delta {
                        assert!(cand.contains(&j), "i={i} j={j} delta={delta}");
                    }
                }
            }
        }
    }
}
