//! Exact nonnegative magnitudes.
//!
//! Every distance, tolerance and bound in the crate is one of these. Symbolic
//! and odometer metrics only ever produce `0` or `2^-k`; schedules and tail
//! bounds produce dyadic rationals `m·2^-k`; grid metrics produce `p/N`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, Hash)]
enum Repr {
    /// `mant · 2^-exp`, `mant` odd unless the value is zero (then `exp == 0`).
    Dyadic { mant: u128, exp: u32 },
    /// `num / den` in lowest terms, `den` not a power of two.
    Ratio { num: u128, den: u128 },
}

/// An exact nonnegative rational used as a metric value.
#[derive(Clone, Copy, Debug)]
pub struct Mag(Repr);

impl Mag {
    pub const ZERO: Mag = Mag(Repr::Dyadic { mant: 0, exp: 0 });
    pub const ONE: Mag = Mag(Repr::Dyadic { mant: 1, exp: 0 });

    /// `2^-k`.
    pub const fn pow2(k: u32) -> Mag {
        Mag(Repr::Dyadic { mant: 1, exp: k })
    }

    /// `mant · 2^-exp`.
    pub fn dyadic(mant: u128, exp: u32) -> Mag {
        if mant == 0 {
            return Mag::ZERO;
        }
        let tz = mant.trailing_zeros().min(exp);
        Mag(Repr::Dyadic { mant: mant >> tz, exp: exp - tz })
    }

    /// `num / den`.
    ///
    /// # Panics
    /// If `den == 0`.
    pub fn ratio(num: u128, den: u128) -> Mag {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Mag::ZERO;
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if den.is_power_of_two() {
            Mag::dyadic(num, den.trailing_zeros())
        } else {
            Mag(Repr::Ratio { num, den })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Dyadic { mant: 0, .. })
    }

    /// `Some(k)` when the value is exactly `2^-k` with `k >= 0`.
    pub fn as_pow2(&self) -> Option<u32> {
        match self.0 {
            Repr::Dyadic { mant: 1, exp } => Some(exp),
            _ => None,
        }
    }

    /// Largest `k` with `2^-k <= self`, for `0 < self`. Values above one give `0`.
    ///
    /// Returns `None` for zero.
    pub fn floor_pow2_exp(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        if *self >= Mag::ONE {
            return Some(0);
        }
        // Smallest k with 2^-k <= self.
        let mut k = 0u32;
        loop {
            if Mag::pow2(k) <= *self {
                return Some(k);
            }
            k += 1;
        }
    }

    /// `self · 2^-shift`.
    pub fn halve(&self, shift: u32) -> Mag {
        match self.0 {
            Repr::Dyadic { mant, exp } => Mag::dyadic(mant, exp + shift),
            Repr::Ratio { num, den } => {
                let tz = num.trailing_zeros().min(shift);
                let num = num >> tz;
                let rest = shift - tz;
                if rest == 0 {
                    return Mag::ratio(num, den);
                }
                let den = den
                    .checked_mul(1u128.checked_shl(rest).expect("magnitude overflow"))
                    .expect("magnitude overflow");
                Mag::ratio(num, den)
            }
        }
    }

    /// `2 · self`.
    pub fn double(&self) -> Mag {
        match self.0 {
            Repr::Dyadic { mant: 0, .. } => Mag::ZERO,
            Repr::Dyadic { mant, exp: 0 } => {
                Mag::dyadic(mant.checked_mul(2).expect("magnitude overflow"), 0)
            }
            Repr::Dyadic { mant, exp } => Mag::dyadic(mant, exp - 1),
            Repr::Ratio { num, den } => {
                if den % 2 == 0 {
                    Mag::ratio(num, den / 2)
                } else {
                    Mag::ratio(num.checked_mul(2).expect("magnitude overflow"), den)
                }
            }
        }
    }

    /// Exact sum.
    ///
    /// # Panics
    /// On overflow of the 128-bit representation.
    pub fn add(&self, other: &Mag) -> Mag {
        match (self.0, other.0) {
            (Repr::Dyadic { mant: m1, exp: e1 }, Repr::Dyadic { mant: m2, exp: e2 }) => {
                if m1 == 0 {
                    return *other;
                }
                if m2 == 0 {
                    return *self;
                }
                let e = e1.max(e2);
                let a = shl_checked(m1, e - e1).expect("magnitude overflow");
                let b = shl_checked(m2, e - e2).expect("magnitude overflow");
                Mag::dyadic(a.checked_add(b).expect("magnitude overflow"), e)
            }
            _ => {
                let (n1, d1) = self.to_big();
                let (n2, d2) = other.to_big();
                let num = n1 * &d2 + n2 * &d1;
                let den = d1 * d2;
                Mag::from_big(num, den)
            }
        }
    }

    /// `Σ items`, zero for an empty iterator.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Mag>) -> Mag {
        items.into_iter().fold(Mag::ZERO, |acc, m| acc.add(m))
    }

    fn to_big(self) -> (BigUint, BigUint) {
        match self.0 {
            Repr::Dyadic { mant, exp } => (BigUint::from(mant), BigUint::one() << exp),
            Repr::Ratio { num, den } => (BigUint::from(num), BigUint::from(den)),
        }
    }

    fn from_big(num: BigUint, den: BigUint) -> Mag {
        if num.is_zero() {
            return Mag::ZERO;
        }
        let g = num.gcd(&den);
        let num = num / &g;
        let den = den / g;
        let tz = den.trailing_zeros().unwrap_or(0) as u32;
        if (&den >> tz).is_one() {
            return Mag::dyadic(num.to_u128().expect("magnitude overflow"), tz);
        }
        Mag::ratio(
            num.to_u128().expect("magnitude overflow"),
            den.to_u128().expect("magnitude overflow"),
        )
    }

    /// A lossy `f64` view, for windowing and display only.
    pub fn to_f64(&self) -> f64 {
        match self.0 {
            Repr::Dyadic { mant, exp } => mant as f64 * (-(exp as f64)).exp2(),
            Repr::Ratio { num, den } => num as f64 / den as f64,
        }
    }

    /// Numerator and denominator in lowest terms, when both fit in `u128`.
    pub fn as_fraction(&self) -> Option<(u128, u128)> {
        match self.0 {
            Repr::Dyadic { mant, exp } => {
                let den = 1u128.checked_shl(exp).filter(|_| exp < 128)?;
                Some((mant, den))
            }
            Repr::Ratio { num, den } => Some((num, den)),
        }
    }
}

fn shl_checked(v: u128, s: u32) -> Option<u128> {
    if v == 0 {
        return Some(0);
    }
    if s >= 128 || v.leading_zeros() < s {
        None
    } else {
        Some(v << s)
    }
}

/// Compare `a · 2^-ea` with `b · 2^-eb`.
fn cmp_dyadic(a: u128, ea: u32, b: u128, eb: u32) -> Ordering {
    if a == 0 || b == 0 {
        return a.cmp(&b);
    }
    if ea >= eb {
        match shl_checked(b, ea - eb) {
            Some(bs) => a.cmp(&bs),
            None => Ordering::Less,
        }
    } else {
        match shl_checked(a, eb - ea) {
            Some(as_) => as_.cmp(&b),
            None => Ordering::Greater,
        }
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Repr::Dyadic { mant: a, exp: ea }, Repr::Dyadic { mant: b, exp: eb }) => {
                cmp_dyadic(a, ea, b, eb)
            }
            (Repr::Ratio { num: a, den: da }, Repr::Ratio { num: b, den: db }) => {
                match (a.checked_mul(db), b.checked_mul(da)) {
                    (Some(l), Some(r)) => l.cmp(&r),
                    _ => {
                        (BigUint::from(a) * BigUint::from(db)).cmp(&(BigUint::from(b) * BigUint::from(da)))
                    }
                }
            }
            _ => {
                let (n1, d1) = self.to_big();
                let (n2, d2) = other.to_big();
                (n1 * d2).cmp(&(n2 * d1))
            }
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Mag {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Mag {}

// Every value has exactly one `Repr`, so hashing it agrees with `==`.
impl std::hash::Hash for Mag {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Display for Mag {
    /// `0`, `1`, `2^-k`, `p/q`, or `m*2^-k` when the denominator exceeds 128 bits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Dyadic { mant: 0, .. } => write!(f, "0"),
            Repr::Dyadic { mant, exp: 0 } => write!(f, "{mant}"),
            Repr::Dyadic { mant: 1, exp } => write!(f, "2^-{exp}"),
            Repr::Dyadic { mant, exp } if exp < 128 => write!(f, "{}/{}", mant, 1u128 << exp),
            Repr::Dyadic { mant, exp } => write!(f, "{mant}*2^-{exp}"),
            Repr::Ratio { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for Mag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid magnitude {s:?}"));
        let parse_u128 = |t: &str| t.trim().parse::<u128>().map_err(|_| bad());
        let parse_exp = |t: &str| -> Result<u32, Error> {
            let t = t.trim();
            let t = t.strip_prefix('-').ok_or_else(bad)?;
            t.parse::<u32>().map_err(|_| bad())
        };
        if let Some((m, e)) = s.split_once("*2^") {
            return Ok(Mag::dyadic(parse_u128(m)?, parse_exp(e)?));
        }
        if let Some(e) = s.strip_prefix("2^") {
            return Ok(Mag::pow2(parse_exp(e)?));
        }
        if let Some((p, q)) = s.split_once('/') {
            let q = parse_u128(q)?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Mag::ratio(parse_u128(p)?, q));
        }
        Ok(Mag::dyadic(parse_u128(s)?, 0))
    }
}

impl Serialize for Mag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
