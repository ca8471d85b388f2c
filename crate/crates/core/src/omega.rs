//! ω-limit sets of eventually periodic data, exact limsup distances, and the
//! asymptotic partner of an eventually periodic point.

use std::collections::BTreeSet;

use crate::mag::Mag;
use crate::pseudo_orbits::PseudoOrbit;
use crate::spaces::{PeriodicStructure, Point, System};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaSet {
    Finite(BTreeSet<Point>),
    /// The whole odometer, compared level by level up to `depth`.
    FullOdometer {
        structure: PeriodicStructure,
        depth: usize,
    },
}

impl OmegaSet {
    pub fn len(&self) -> u64 {
        match self {
            OmegaSet::Finite(s) => s.len() as u64,
            OmegaSet::FullOdometer { structure, depth } => structure.modulus(*depth),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: &Point) -> bool {
        match self {
            OmegaSet::Finite(s) => s.contains(x),
            OmegaSet::FullOdometer { structure, .. } => match x {
                Point::Odometer(o) => structure.contains(o).is_ok(),
                _ => false,
            },
        }
    }
}

/// The cycle entries of `ξ`.
pub fn omega_of_sequence(xi: &PseudoOrbit) -> OmegaSet {
    OmegaSet::Finite(xi.cycle().iter().cloned().collect())
}

/// `ω(x, f)`. Odometers are minimal, so every odometer point has the whole
/// space as its ω-limit set. Products with an odometer factor are finite at
/// the represented depth and are enumerated.
pub fn omega_of_point(system: &System, x: &Point) -> OmegaSet {
    if let System::Odometer(m) = system {
        return OmegaSet::FullOdometer {
            structure: m.clone(),
            depth: m.depth(),
        };
    }
    let shape = system.orbit_shape(x);
    let start = system.iterate(x, shape.preperiod);
    OmegaSet::Finite(system.orbit(&start, shape.period).into_iter().collect())
}

/// `limsup_i d(f^i(x), f^i(y))`, exact: the max over one joint period past both preperiods.
pub fn limsup_distance(system: &System, x: &Point, y: &Point) -> Mag {
    let (sx, sy) = (system.orbit_shape(x), system.orbit_shape(y));
    let start = sx.preperiod.max(sy.preperiod);
    let len = sx.joint_window(&sy) - start;
    let a = system.orbit(&system.iterate(x, start), len);
    let b = system.orbit(&system.iterate(y, start), len);
    a.iter()
        .zip(&b)
        .map(|(p, q)| system.dist(p, q))
        .max()
        .unwrap_or(Mag::ZERO)
}

/// Whether every point of `omega` lies within `eps` of some point of `other`.
pub fn inclusion_check(system: &System, omega: &OmegaSet, other: &OmegaSet, eps: &Mag) -> bool {
    match (omega, other) {
        (OmegaSet::Finite(a), OmegaSet::Finite(b)) => a
            .iter()
            .all(|p| b.iter().any(|q| system.dist(p, q) <= *eps)),
        (OmegaSet::Finite(a), OmegaSet::FullOdometer { .. }) => a.iter().all(|p| other.contains(p)),
        (OmegaSet::FullOdometer { structure, depth }, OmegaSet::FullOdometer { structure: s2, .. }) => {
            structure.truncate(*depth).ok() == s2.truncate(*depth).ok()
        }
        (OmegaSet::FullOdometer { structure, depth }, OmegaSet::Finite(b)) => {
            // Points within eps of b are exactly the level-nu classes that b meets.
            let nu = eps.floor_pow2_exp().map_or(*depth, |k| (k as usize).min(*depth));
            let classes: BTreeSet<u64> = b
                .iter()
                .filter_map(|q| match q {
                    Point::Odometer(o) => Some(o.residue(nu)),
                    _ => None,
                })
                .collect();
            classes.len() as u64 == structure.modulus(nu)
        }
    }
}

/// The periodic point `y = f^{n⌈k/n⌉}(x)` of `ω(x, f)` with `f^i(y) = f^i(x)` for `i >= k`.
pub fn asymptotic_partner(system: &System, x: &Point) -> Point {
    let shape = system.orbit_shape(x);
    let n = shape.period;
    system.iterate(x, shape.preperiod.div_ceil(n) * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo_orbits::eventual_sup;
    use crate::spaces::{parse_point, parse_system, SymbolicPoint};
    use proptest::prelude::*;

    fn shift() -> System {
        parse_system("full-shift:2").unwrap()
    }

    fn p(s: &System, l: &str) -> Point {
        parse_point(s, l).unwrap()
    }

    fn set(s: &System, ls: &[&str]) -> OmegaSet {
        OmegaSet::Finite(ls.iter().map(|l| p(s, l)).collect())
    }

    #[test]
    fn omega_of_sequences() {
        let s = shift();
        let xi = PseudoOrbit::new(vec![], vec![p(&s, "|01"), p(&s, "|10")]).unwrap();
        assert_eq!(omega_of_sequence(&xi), set(&s, &["|01", "|10"]));
        let xi = PseudoOrbit::new(vec![p(&s, "|0")], vec![p(&s, "|1")]).unwrap();
        assert_eq!(omega_of_sequence(&xi), set(&s, &["|1"]));
        assert_eq!(omega_of_sequence(&PseudoOrbit::constant(p(&s, "1|0"))), set(&s, &["1|0"]));
    }

    #[test]
    fn omega_of_points() {
        let s = shift();
        assert_eq!(omega_of_point(&s, &p(&s, "01|10")), set(&s, &["|10", "|01"]));
        assert_eq!(omega_of_point(&s, &p(&s, "0000|1")), set(&s, &["|1"]));
        let m = parse_system("odometer:2,4").unwrap();
        match omega_of_point(&m, &p(&m, "(0,0)")) {
            OmegaSet::FullOdometer { structure, depth } => {
                assert_eq!(structure.levels(), &[2, 4]);
                assert_eq!(depth, 2);
            }
            o => panic!("{o:?}"),
        }
        let prod = parse_system("product(full-shift:2,odometer:2)").unwrap();
        assert_eq!(omega_of_point(&prod, &p(&prod, "<1|0;(0)>")).len(), 2);
    }

    #[test]
    fn limsup_examples() {
        let s = shift();
        assert_eq!(limsup_distance(&s, &p(&s, "1|0"), &p(&s, "|0")), Mag::ZERO);
        assert_eq!(limsup_distance(&s, &p(&s, "|01"), &p(&s, "|10")), Mag::ONE);
        assert_eq!(limsup_distance(&s, &p(&s, "0000|1"), &p(&s, "|1")), Mag::ZERO);
        assert_eq!(limsup_distance(&s, &p(&s, "|011"), &p(&s, "|010")), Mag::ONE);
    }

    #[test]
    fn inclusion_examples() {
        let s = shift();
        let a = set(&s, &["|01", "|10"]);
        let b = set(&s, &["|01"]);
        assert!(inclusion_check(&s, &a, &b, &Mag::ONE));
        assert!(!inclusion_check(&s, &a, &b, &Mag::pow2(1)));
        assert!(inclusion_check(&s, &a, &a, &Mag::ZERO));
    }

    #[test]
    fn inclusion_full_odometer() {
        let m = parse_system("odometer:2,4").unwrap();
        let full = omega_of_point(&m, &p(&m, "(0,0)"));
        let evens = set(&m, &["(0,0)", "(0,2)"]);
        let classes = set(&m, &["(0,0)", "(1,1)"]);
        assert!(inclusion_check(&m, &evens, &full, &Mag::ZERO));
        assert!(inclusion_check(&m, &full, &evens, &Mag::ONE));
        assert!(!inclusion_check(&m, &full, &evens, &Mag::pow2(1)));
        assert!(inclusion_check(&m, &full, &classes, &Mag::pow2(1)));
        assert!(!inclusion_check(&m, &full, &classes, &Mag::pow2(2)));
        assert!(inclusion_check(&m, &full, &full, &Mag::ZERO));
    }

    #[test]
    fn asymptotic_partners() {
        let s = shift();
        for (x, y) in [("1|0", "|0"), ("11|01", "|01"), ("|01", "|01"), ("110|01", "|10")] {
            let x = p(&s, x);
            let partner = asymptotic_partner(&s, &x);
            assert_eq!(partner, p(&s, y));
            assert_eq!(limsup_distance(&s, &x, &partner), Mag::ZERO);
        }
    }

    fn symbolic() -> impl Strategy<Value = Point> {
        (
            proptest::collection::vec(0u32..2, 0..5),
            proptest::collection::vec(0u32..2, 1..5),
        )
            .prop_map(|(pre, cyc)| Point::Symbolic(SymbolicPoint::new(&pre, &cyc).unwrap()))
    }

    fn sequence() -> impl Strategy<Value = PseudoOrbit> {
        (
            proptest::collection::vec(symbolic(), 0..4),
            proptest::collection::vec(symbolic(), 1..4),
        )
            .prop_map(|(pre, cyc)| PseudoOrbit::new(pre, cyc).unwrap())
    }

    proptest! {
        #[test]
        fn eventual_sup_gives_both_inclusions(a in sequence(), b in sequence()) {
            let s = shift();
            let eps = eventual_sup(&s, &a, &b);
            let (wa, wb) = (omega_of_sequence(&a), omega_of_sequence(&b));
            prop_assert!(inclusion_check(&s, &wa, &wb, &eps));
            prop_assert!(inclusion_check(&s, &wb, &wa, &eps));
        }

        #[test]
        fn true_orbit_omega_is_invariant(x in symbolic()) {
            let s = shift();
            let OmegaSet::Finite(w) = omega_of_point(&s, &x) else { unreachable!() };
            for q in &w {
                prop_assert!(w.contains(&s.step(q)));
            }
            let xi = PseudoOrbit::true_orbit(&s, &x);
            prop_assert_eq!(omega_of_sequence(&xi), OmegaSet::Finite(w));
        }

        #[test]
        fn partner_is_asymptotic(x in symbolic()) {
            let s = shift();
            let y = asymptotic_partner(&s, &x);
            prop_assert!(omega_of_point(&s, &x).contains(&y));
            prop_assert_eq!(limsup_distance(&s, &x, &y), Mag::ZERO);
        }
    }
}
