//! Eventually periodic one-sided sequences `pre · cyc^∞`.

use std::fmt;

use crate::error::{Error, Result};
use crate::mag::Mag;

pub type Symbol = u32;

/// An eventually periodic sequence kept in canonical form: the cycle is
/// primitive and the preperiod is as short as possible. Two values are equal
/// iff they denote the same infinite sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicPoint {
    pre: Vec<Symbol>,
    cyc: Vec<Symbol>,
}

/// Canonical representative of `pre · cyc^∞`.
pub fn canonicalize(pre: &[Symbol], cyc: &[Symbol]) -> Result<SymbolicPoint> {
    if cyc.is_empty() {
        return Err(Error::Parse("cycle word must be nonempty".into()));
    }
    let n = cyc.len();
    let period = (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| cyc[i] == cyc[i - p]))
        .unwrap_or(n);
    let mut cyc: Vec<Symbol> = cyc[..period].to_vec();
    let mut pre = pre.to_vec();
    // Absorb matching preperiod tails into the cycle.
    while let Some(&last) = pre.last() {
        if last != *cyc.last().unwrap() {
            break;
        }
        pre.pop();
        cyc.rotate_right(1);
    }
    Ok(SymbolicPoint { pre, cyc })
}

impl SymbolicPoint {
    pub fn new(pre: &[Symbol], cyc: &[Symbol]) -> Result<Self> {
        canonicalize(pre, cyc)
    }

    /// A purely periodic point `cyc^∞`.
    pub fn periodic(cyc: &[Symbol]) -> Result<Self> {
        canonicalize(&[], cyc)
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.pre
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cyc
    }

    /// Returns the same point; kept so callers holding an arbitrary
    /// representation can normalise without caring whether it already is.
    pub fn canonicalize(&self) -> SymbolicPoint {
        canonicalize(&self.pre, &self.cyc).expect("cycle nonempty")
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.cyc[(i - self.pre.len()) % self.cyc.len()]
        }
    }

    pub fn max_symbol(&self) -> Symbol {
        self.pre.iter().chain(&self.cyc).copied().max().unwrap_or(0)
    }

    /// The shift `σ`: drop the first symbol.
    pub fn shift(&self) -> SymbolicPoint {
        if self.pre.is_empty() {
            let mut cyc = self.cyc.clone();
            cyc.rotate_left(1);
            SymbolicPoint { pre: Vec::new(), cyc }
        } else {
            SymbolicPoint {
                pre: self.pre[1..].to_vec(),
                cyc: self.cyc.clone(),
            }
        }
    }

    /// `σ^n`.
    pub fn shift_by(&self, n: usize) -> SymbolicPoint {
        if n <= self.pre.len() {
            return SymbolicPoint {
                pre: self.pre[n..].to_vec(),
                cyc: self.cyc.clone(),
            };
        }
        let r = (n - self.pre.len()) % self.cyc.len();
        let mut cyc = self.cyc.clone();
        cyc.rotate_left(r);
        SymbolicPoint { pre: Vec::new(), cyc }
    }

    /// Index of the first disagreement with `other`, or `None` if equal.
    pub fn first_disagreement(&self, other: &SymbolicPoint) -> Option<usize> {
        if self == other {
            return None;
        }
        // Past both preperiods the sequences are periodic; agreement on
        // n1 + n2 further symbols forces equality (Fine and Wilf).
        let bound = self.pre.len().max(other.pre.len()) + self.cyc.len() + other.cyc.len();
        (0..bound).find(|&i| self.symbol_at(i) != other.symbol_at(i))
    }

    /// `2^-i*` with `i*` the first index of disagreement; `0` when equal.
    pub fn distance(&self, other: &SymbolicPoint) -> Mag {
        match self.first_disagreement(other) {
            None => Mag::ZERO,
            Some(i) => Mag::pow2(i as u32),
        }
    }

    /// True when every consecutive pair of symbols (cycle wrap included) is allowed.
    pub fn respects(&self, allowed: &[Vec<bool>]) -> bool {
        let k = self.pre.len();
        let n = self.cyc.len();
        (0..k + n).all(|i| {
            let a = self.symbol_at(i) as usize;
            let b = self.symbol_at(i + 1) as usize;
            allowed
                .get(a)
                .and_then(|row| row.get(b))
                .copied()
                .unwrap_or(false)
        })
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, w: &[Symbol], digits: bool) -> fmt::Result {
    if digits {
        for s in w {
            write!(f, "{s}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = w.iter().map(Symbol::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Display for SymbolicPoint {
    /// `pre|cyc` with single digits when every symbol is below 10, bracketed
    /// comma lists otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.max_symbol() < 10;
        if !self.pre.is_empty() {
            write_word(f, &self.pre, digits)?;
        }
        write!(f, "|")?;
        write_word(f, &self.cyc, digits)
    }
}

/// Parses a `pre|cyc` literal.
pub fn parse_symbolic(s: &str) -> Result<SymbolicPoint> {
    let s = s.trim();
    let (pre, cyc) = s
        .split_once('|')
        .ok_or_else(|| Error::Parse(format!("symbolic literal {s:?} lacks '|'")))?;
    let pre = parse_word(pre)?;
    let cyc = parse_word(cyc)?;
    if cyc.is_empty() {
        return Err(Error::Parse(format!("symbolic literal {s:?} has an empty cycle")));
    }
    canonicalize(&pre, &cyc)
}

fn parse_word(w: &str) -> Result<Vec<Symbol>> {
    let w = w.trim();
    if let Some(inner) = w.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated bracket word {w:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        return inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Symbol>()
                    .map_err(|_| Error::Parse(format!("bad symbol {t:?}")))
            })
            .collect();
    }
    w.chars()
        .map(|c| {
            c.to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {w:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> SymbolicPoint {
        parse_symbolic(s).unwrap()
    }

    /// Denoted sequence compared symbol-by-symbol on a long prefix.
    fn same_sequence(a: &[Symbol], ac: &[Symbol], b: &SymbolicPoint) -> bool {
        let len = a.len() + 2 * ac.len() + b.preperiod().len() + 2 * b.cycle().len() + 8;
        (0..len).all(|i| {
            let x = if i < a.len() { a[i] } else { ac[(i - a.len()) % ac.len()] };
            x == b.symbol_at(i)
        })
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(p("0|10").to_string(), "|01");
        assert_eq!(p("01|0101").to_string(), "|01");
        assert_eq!(p("|0").to_string(), "|0");
        assert!(same_sequence(&[0], &[1, 0], &p("0|10")));
        assert!(same_sequence(&[0, 1], &[0, 1, 0, 1], &p("01|0101")));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p("01|10").shift().to_string(), "1|10");
        assert_eq!(p("|01").shift().to_string(), "|10");
        assert_eq!(p("0000|1").shift_by(7), p("|1"));
        assert_eq!(p("12|345").shift_by(4), p("|534"));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(p("|0").distance(&p("0001|0")), Mag::pow2(3));
        assert_eq!(p("|01").distance(&p("|10")), Mag::ONE);
        assert_eq!(p("0|10").distance(&p("|01")), Mag::ZERO);
    }

    #[test]
    fn literal_forms() {
        assert_eq!(p("[]|[11,3]").to_string(), "|[11,3]");
        assert_eq!(p("[1,12]|[3]").to_string(), "[1,12]|[3]");
        assert_eq!(p("[1,2]|[3]").to_string(), "12|3");
        assert!(parse_symbolic("00001|").is_err());
        assert!(parse_symbolic("0a|1").is_err());
        assert!(parse_symbolic("001").is_err());
    }

    fn arb_raw() -> impl Strategy<Value = (Vec<Symbol>, Vec<Symbol>)> {
        (
            proptest::collection::vec(0u32..3, 0..6),
            proptest::collection::vec(0u32..3, 1..6),
        )
    }

    proptest! {
        #[test]
        fn canonical_form_denotes_same_sequence((pre, cyc) in arb_raw()) {
            let c = canonicalize(&pre, &cyc).unwrap();
            prop_assert!(same_sequence(&pre, &cyc, &c));
            prop_assert_eq!(c.canonicalize(), c.clone());
            prop_assert!(c.preperiod().len() <= pre.len());
            prop_assert!(cyc.len() % c.cycle().len() == 0);
        }

        #[test]
        fn equal_iff_same_sequence(a in arb_raw(), b in arb_raw()) {
            let ca = canonicalize(&a.0, &a.1).unwrap();
            let cb = canonicalize(&b.0, &b.1).unwrap();
            prop_assert_eq!(ca == cb, same_sequence(&a.0, &a.1, &cb));
        }

        #[test]
        fn first_disagreement_is_exact(a in arb_raw(), b in arb_raw()) {
            let ca = canonicalize(&a.0, &a.1).unwrap();
            let cb = canonicalize(&b.0, &b.1).unwrap();
            let brute = (0..200).find(|&i| ca.symbol_at(i) != cb.symbol_at(i));
            prop_assert_eq!(ca.first_disagreement(&cb), brute);
        }

        #[test]
        fn shift_by_matches_repeated_shift((pre, cyc) in arb_raw(), n in 0usize..20) {
            let c = canonicalize(&pre, &cyc).unwrap();
            let mut s = c.clone();
            for _ in 0..n { s = s.shift(); }
            prop_assert_eq!(c.shift_by(n), s);
        }
    }
}
