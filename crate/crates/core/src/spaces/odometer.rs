//! Odometers truncated to a finite number of levels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mag::Mag;

/// A finite prefix `(m_1, …, m_J)` of a periodic structure.
///
/// Every entry is positive and divides its successor, which also makes the
/// list nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PeriodicStructure {
    levels: Vec<u64>,
}

/// Checks positivity and divisibility. Levels in errors are 1-based.
pub fn validate_structure(levels: &[u64]) -> Result<PeriodicStructure> {
    if levels.is_empty() {
        return Err(Error::EmptyStructure);
    }
    if let Some(j) = levels.iter().position(|&m| m == 0) {
        return Err(Error::NonPositiveLevel(j + 1));
    }
    for (j, w) in levels.windows(2).enumerate() {
        if w[1] % w[0] != 0 {
            return Err(Error::DivisibilityViolation(j + 1));
        }
    }
    Ok(PeriodicStructure {
        levels: levels.to_vec(),
    })
}

impl PeriodicStructure {
    pub fn new(levels: &[u64]) -> Result<Self> {
        validate_structure(levels)
    }

    /// The dyadic structure `(2, 4, …, 2^depth)`.
    pub fn dyadic(depth: u32) -> Self {
        let levels: Vec<u64> = (1..=depth).map(|j| 1u64 << j).collect();
        validate_structure(&levels).expect("dyadic structure is valid")
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    /// `m_j` for 1-based `j`; `m_0 = 1`.
    pub fn modulus(&self, j: usize) -> u64 {
        if j == 0 {
            1
        } else {
            self.levels[j - 1]
        }
    }

    /// `m_J`, the period of every orbit at full depth.
    pub fn top(&self) -> u64 {
        *self.levels.last().expect("nonempty")
    }

    /// Number of leading levels `q` with `m_q | steps`.
    pub(crate) fn levels_dividing(&self, steps: u64) -> usize {
        self.levels.iter().take_while(|&&m| steps.is_multiple_of(m)).count()
    }

    /// Truncation to the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        validate_structure(&self.levels[..depth.min(self.depth())])
    }

    pub fn contains(&self, x: &OdometerPoint) -> Result<()> {
        let r = &x.residues;
        if r.len() != self.depth() {
            return Err(Error::PointSystemMismatch(format!(
                "odometer point {x} has {} levels, structure has {}",
                r.len(),
                self.depth()
            )));
        }
        for (j, (&xj, &mj)) in r.iter().zip(&self.levels).enumerate() {
            if xj >= mj {
                return Err(Error::PointSystemMismatch(format!(
                    "residue {xj} at level {} is not below {mj}",
                    j + 1
                )));
            }
        }
        for j in 0..r.len().saturating_sub(1) {
            if r[j] != r[j + 1] % self.levels[j] {
                return Err(Error::PointSystemMismatch(format!(
                    "residues at levels {} and {} are not coherent",
                    j + 1,
                    j + 2
                )));
            }
        }
        Ok(())
    }

    /// `g_m(x)`.
    pub fn step(&self, x: &OdometerPoint) -> OdometerPoint {
        self.advance(x, 1)
    }

    /// `g_m^steps(x)`.
    pub fn advance(&self, x: &OdometerPoint, steps: u64) -> OdometerPoint {
        let residues = x
            .residues
            .iter()
            .zip(&self.levels)
            .map(|(&r, &m)| ((r as u128 + steps as u128) % m as u128) as u64)
            .collect();
        OdometerPoint { residues }
    }

    /// `2^-ν` where `ν` counts leading agreeing levels; `0` when all agree.
    pub fn distance(&self, x: &OdometerPoint, y: &OdometerPoint) -> Mag {
        let agree = x
            .residues
            .iter()
            .zip(&y.residues)
            .take_while(|(a, b)| a == b)
            .count();
        if agree == x.residues.len() {
            Mag::ZERO
        } else {
            Mag::pow2(agree as u32)
        }
    }

    /// The point whose residues all equal `residue mod m_level`, reduced at
    /// each level. It is the smallest coherent lift of that level-`level`
    /// class; `level == 0` yields the zero point.
    pub fn lift(&self, level: usize, residue: u64) -> OdometerPoint {
        let level = level.min(self.depth());
        let r = residue % self.modulus(level);
        let residues = self.levels.iter().map(|&m| r % m).collect();
        OdometerPoint { residues }
    }

    /// The point `n·1` of `X_m`, i.e. the image of zero under `g_m^n`.
    pub fn from_integer(&self, n: u64) -> OdometerPoint {
        OdometerPoint {
            residues: self.levels.iter().map(|&m| n % m).collect(),
        }
    }
}

impl TryFrom<Vec<u64>> for PeriodicStructure {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        validate_structure(&v)
    }
}

impl From<PeriodicStructure> for Vec<u64> {
    fn from(s: PeriodicStructure) -> Self {
        s.levels
    }
}

impl fmt::Display for PeriodicStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A coherent residue tower `(x_1, …, x_J)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OdometerPoint {
    residues: Vec<u64>,
}

impl OdometerPoint {
    pub fn new(structure: &PeriodicStructure, residues: Vec<u64>) -> Result<Self> {
        let x = OdometerPoint { residues };
        structure.contains(&x)?;
        Ok(x)
    }

    /// Unchecked; membership is verified when the point meets a system.
    pub fn from_residues(residues: Vec<u64>) -> Self {
        OdometerPoint { residues }
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Residue at 1-based level `j`; level 0 is always `0`.
    pub fn residue(&self, j: usize) -> u64 {
        if j == 0 {
            0
        } else {
            self.residues[j - 1]
        }
    }
}

impl fmt::Display for OdometerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(levels: &[u64]) -> PeriodicStructure {
        validate_structure(levels).unwrap()
    }

    #[test]
    fn structure_validation() {
        assert!(validate_structure(&[2, 4, 8]).is_ok());
        assert!(validate_structure(&[3, 3, 6]).is_ok());
        assert_eq!(validate_structure(&[2, 3]), Err(Error::DivisibilityViolation(1)));
        assert_eq!(validate_structure(&[2, 4, 6]), Err(Error::DivisibilityViolation(2)));
        assert_eq!(validate_structure(&[]), Err(Error::EmptyStructure));
        assert_eq!(validate_structure(&[0, 2]), Err(Error::NonPositiveLevel(1)));
    }

    #[test]
    fn step_wraps_every_level() {
        let m = s(&[2, 4, 8]);
        let x = OdometerPoint::new(&m, vec![1, 3, 7]).unwrap();
        assert_eq!(m.step(&x).residues(), &[0, 0, 0]);
    }

    #[test]
    fn coherence_rejected() {
        let m = s(&[2, 4, 8]);
        assert!(OdometerPoint::new(&m, vec![1, 2, 2]).is_err());
        assert!(OdometerPoint::new(&m, vec![1, 3]).is_err());
        assert!(OdometerPoint::new(&m, vec![0, 4, 4]).is_err());
    }

    #[test]
    fn distance_counts_agreeing_levels() {
        let m = s(&[2, 4, 8]);
        let x = OdometerPoint::from_residues(vec![1, 1, 1]);
        let y = OdometerPoint::from_residues(vec![1, 3, 3]);
        assert_eq!(m.distance(&x, &y), Mag::pow2(1));
        assert_eq!(m.distance(&x, &x), Mag::ZERO);
        let z = OdometerPoint::from_residues(vec![0, 0, 0]);
        assert_eq!(m.distance(&x, &z), Mag::ONE);
    }

    #[test]
    fn lift_is_smallest_coherent() {
        let m = s(&[2, 4, 8]);
        assert_eq!(m.lift(1, 1).residues(), &[1, 1, 1]);
        assert_eq!(m.lift(2, 3).residues(), &[1, 3, 3]);
        assert_eq!(m.lift(0, 5).residues(), &[0, 0, 0]);
        assert_eq!(m.lift(9, 13).residues(), &[1, 1, 5]);
    }

    #[test]
    fn levels_dividing_steps() {
        let m = s(&[2, 4, 8]);
        assert_eq!(m.levels_dividing(1), 0);
        assert_eq!(m.levels_dividing(4), 2);
        assert_eq!(m.levels_dividing(24), 3);
        let m = s(&[3, 6]);
        assert_eq!(m.levels_dividing(4), 0);
    }
}
