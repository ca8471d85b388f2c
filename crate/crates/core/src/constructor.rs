//! The refinement pipeline: from any point `x` and tolerance `ε`, a tower of
//! pseudo-orbits whose base points converge to a point `x₀` within `ε` of
//! `x`, with `ω(x₀)` a periodic orbit or an odometer. At finite depth `J`
//! the output is the approximant `x_0^(J)` with certified tail bounds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mag::Mag;
use crate::omega::limsup_distance;
use crate::par::Exec;
use crate::pseudo_orbits::{
    initial_pseudo_orbit, shadow_oracle, shadowing_modulus, sup_distance, validity_defect,
    PseudoOrbit,
};
use crate::recognition::{classify, Verdict, STABILIZATION};
use crate::spaces::{Point, System};

/// Default number of multiples `k` checked by the recurrence clause.
pub const RR_HORIZON: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub eps: Mag,
    pub delta: Mag,
}

/// Target `ε` split as `ε_j = ε·2^-(j+1)`, `j = 0..=J`, with `δ_j` the shadowing modulus of `ε_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub eps: Mag,
    pub levels: Vec<Level>,
}

impl Schedule {
    pub fn geometric(system: &System, eps: &Mag, depth: usize) -> Result<Self> {
        if eps.is_zero() {
            return Err(Error::NonPositiveTolerance);
        }
        let levels = (0..=depth)
            .map(|j| {
                let e = eps.halve(j as u32 + 1);
                Ok(Level {
                    delta: shadowing_modulus(system, &e)?,
                    eps: e,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Schedule { eps: *eps, levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn eps_j(&self, j: usize) -> &Mag {
        &self.levels[j].eps
    }

    pub fn delta_j(&self, j: usize) -> &Mag {
        &self.levels[j].delta
    }

    /// `ζ_j = Σ_{a=j}^{J} ε_a`.
    pub fn tail_bounds(&self) -> Vec<Mag> {
        let mut out = vec![Mag::ZERO; self.levels.len()];
        let mut acc = Mag::ZERO;
        for j in (0..self.levels.len()).rev() {
            acc = acc.add(&self.levels[j].eps);
            out[j] = acc;
        }
        out
    }
}

/// What one refinement step chose: the shadow `y` and the recurrence pair `(l, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub shadow: Point,
    pub l: usize,
    pub m: usize,
}

/// Per-level record: `(k_j, n_j)` of `ξ_j` and, for `j > 0`, the step that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub preperiod: usize,
    pub period: usize,
    pub step: Option<Refinement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub input: Point,
    pub schedule: Schedule,
    pub tower: Vec<PseudoOrbit>,
    pub trace: Vec<TraceEntry>,
    pub x0: Point,
    pub zeta: Vec<Mag>,
    pub verdict: Verdict,
}

impl RegularityCertificate {
    pub fn periods(&self) -> Vec<usize> {
        self.trace.iter().map(|t| t.period).collect()
    }

    pub fn depth(&self) -> usize {
        self.schedule.depth()
    }
}

/// One refinement: shadow `ξ` by `y`, then close the loop at the first
/// `δ_next`-recurrence of `a ↦ f^{k+an}(y)`.
pub fn refine_step(
    system: &System,
    xi: &PseudoOrbit,
    eps: &Mag,
    delta_next: &Mag,
) -> Result<(PseudoOrbit, Refinement)> {
    let y = shadow_oracle(system, xi, eps)?;
    let shape = xi.shape();
    let (k, n) = (shape.preperiod, shape.period);
    let ys = system.orbit_shape(&y);
    // a ↦ w_a is eventually periodic, so an exact repeat occurs by this bound.
    let max_m = ys.preperiod.div_ceil(n) + ys.period + 1;
    let mut w = vec![system.iterate(&y, k)];
    for m in 1..=max_m {
        let next = system.iterate(&w[m - 1], n);
        if let Some(l) = (0..m).find(|&l| system.dist(&w[l], &next) <= *delta_next) {
            let mut pts = system.orbit(&y, k + m * n);
            let cycle = pts.split_off(k + l * n);
            let out = PseudoOrbit::new(pts, cycle)?;
            return Ok((out, Refinement { shadow: y, l, m }));
        }
        w.push(next);
    }
    Err(Error::HorizonExceeded(max_m))
}

fn tower_invalid(level: usize, reason: impl Into<String>) -> Error {
    Error::TowerInvalid {
        level,
        reason: reason.into(),
    }
}

/// Check the tower's defect and level-distance conditions and package the depth-`J` approximant.
pub fn assemble_limit(
    system: &System,
    tower: Vec<PseudoOrbit>,
    schedule: Schedule,
) -> Result<(Point, RegularityCertificate)> {
    if tower.len() != schedule.levels.len() || tower.is_empty() {
        return Err(tower_invalid(
            0,
            format!("{} levels for a schedule of depth {}", tower.len(), schedule.depth()),
        ));
    }
    for (j, xi) in tower.iter().enumerate() {
        xi.validate(system)
            .map_err(|e| tower_invalid(j, e.to_string()))?;
        let defect = validity_defect(system, xi);
        if defect > *schedule.delta_j(j) {
            return Err(tower_invalid(
                j,
                format!("defect {defect} exceeds δ_j = {}", schedule.delta_j(j)),
            ));
        }
        if let Some(next) = tower.get(j + 1) {
            let sup = sup_distance(system, xi, next);
            if sup > *schedule.eps_j(j) {
                return Err(tower_invalid(
                    j,
                    format!("distance to next level {sup} exceeds ε_j = {}", schedule.eps_j(j)),
                ));
            }
        }
    }
    let trace: Vec<TraceEntry> = tower
        .iter()
        .map(|xi| TraceEntry {
            preperiod: xi.preperiod().len(),
            period: xi.cycle().len(),
            step: None,
        })
        .collect();
    let periods: Vec<usize> = trace.iter().map(|t| t.period).collect();
    let verdict = classify(&periods, STABILIZATION).map_err(|e| match e {
        Error::DivisibilityViolation(j) => tower_invalid(j, "n_j does not divide n_(j+1)"),
        e => e,
    })?;
    let x0 = tower.last().unwrap().at(0).clone();
    let cert = RegularityCertificate {
        input: tower[0].at(0).clone(),
        zeta: schedule.tail_bounds(),
        schedule,
        tower,
        trace,
        x0: x0.clone(),
        verdict,
    };
    Ok((x0, cert))
}

/// Full pipeline at depth `J`: initial pseudo-orbit, `J` refinements, limit assembly.
pub fn construct_regular_point(
    system: &System,
    x: &Point,
    eps: &Mag,
    depth: usize,
) -> Result<(Point, RegularityCertificate)> {
    system.contains(x)?;
    let schedule = Schedule::geometric(system, eps, depth)?;
    let mut tower = vec![initial_pseudo_orbit(system, x, schedule.delta_j(0))?];
    let mut steps = Vec::with_capacity(depth);
    for j in 0..depth {
        let (next, step) = refine_step(
            system,
            &tower[j],
            schedule.eps_j(j),
            schedule.delta_j(j + 1),
        )?;
        tower.push(next);
        steps.push(step);
    }
    let (x0, mut cert) = assemble_limit(system, tower, schedule)?;
    for (entry, step) in cert.trace.iter_mut().skip(1).zip(steps) {
        entry.step = Some(step);
    }
    if system.dist(x, &x0) > *eps {
        return Err(tower_invalid(depth, "limit approximant is farther than ε from the input"));
    }
    Ok((x0, cert))
}

/// Independent pipeline runs over many inputs.
pub fn construct_batch(
    system: &System,
    inputs: &[Point],
    eps: &Mag,
    depth: usize,
    exec: Exec,
) -> Vec<Result<(Point, RegularityCertificate)>> {
    exec.map(inputs, |x| construct_regular_point(system, x, eps, depth))
}

/// Certificate clauses in the order the verifier checks them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// Level counts agree and every point belongs to the system.
    Structure,
    /// `Σ ε_j <= ε` and `ε_j = ε·2^-(j+1)`.
    ScheduleSum,
    /// `δ_j` is the shadowing modulus of `ε_j`, strictly decreasing.
    ScheduleModulus,
    /// `x_0^(0)` is the input point.
    TowerStart,
    /// `validity_defect(ξ_j) <= δ_j`.
    Validity,
    /// `sup_i d(x_i^(j), x_i^(j+1)) <= ε_j`.
    LevelDistance,
    /// `x₀ = x_0^(J)` and `d(x_0^(j), x₀) <= ζ_j`.
    LimitBound,
    /// `ζ_j = Σ_{a>=j} ε_a` and `ζ_0 <= ε`.
    TailBound,
    /// `n_j | n_(j+1)`.
    Divisibility,
    /// The trace records the tower's preperiods and periods.
    TraceConsistency,
    /// `d(z, f^{k n_j}(z)) <= 2ζ_j`, `z` the first cycle entry of `ξ_J`.
    RrEvidence,
    /// The verdict is the classification of the trace.
    Verdict,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::Structure => "structure",
            Clause::ScheduleSum => "schedule: sum of eps_j <= eps",
            Clause::ScheduleModulus => "schedule: delta_j = modulus(eps_j), decreasing",
            Clause::TowerStart => "x_0^(0) = input",
            Clause::Validity => "validity_defect(xi_j) <= delta_j",
            Clause::LevelDistance => "sup_i d(x_i^(j), x_i^(j+1)) <= eps_j",
            Clause::LimitBound => "d(x_0^(j), x0) <= zeta_j",
            Clause::TailBound => "zeta_j = sum_{a>=j} eps_a, zeta_0 <= eps",
            Clause::Divisibility => "n_j | n_(j+1)",
            Clause::TraceConsistency => "trace matches tower",
            Clause::RrEvidence => "d(z, f^(k n_j)(z)) <= 2 zeta_j",
            Clause::Verdict => "verdict = classify(trace)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: Clause,
    pub level: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub rr_horizon: usize,
    pub failure: Option<Violation>,
}

impl VerificationReport {
    pub fn clause(&self) -> Option<Clause> {
        self.failure.as_ref().map(|v| v.clause)
    }
}

fn fail(clause: Clause, level: Option<usize>, detail: String) -> Violation {
    Violation {
        clause,
        level,
        detail,
    }
}

/// Recheck every certificate inequality from the raw points.
pub fn verify_certificate(
    system: &System,
    cert: &RegularityCertificate,
    rr_horizon: usize,
) -> VerificationReport {
    let failure = check(system, cert, rr_horizon).err();
    VerificationReport {
        passed: failure.is_none(),
        rr_horizon,
        failure,
    }
}

fn check(system: &System, cert: &RegularityCertificate, rr_horizon: usize) -> Result<(), Violation> {
    use Clause::*;
    let s = &cert.schedule;
    let levels = s.levels.len();
    if levels == 0
        || cert.tower.len() != levels
        || cert.trace.len() != levels
        || cert.zeta.len() != levels
    {
        return Err(fail(
            Structure,
            None,
            format!(
                "schedule {levels}, tower {}, trace {}, zeta {} levels",
                cert.tower.len(),
                cert.trace.len(),
                cert.zeta.len()
            ),
        ));
    }
    for p in [&cert.input, &cert.x0] {
        system
            .contains(p)
            .map_err(|e| fail(Structure, None, e.to_string()))?;
    }
    for (j, xi) in cert.tower.iter().enumerate() {
        xi.validate(system)
            .map_err(|e| fail(Structure, Some(j), e.to_string()))?;
    }

    for (j, lv) in s.levels.iter().enumerate() {
        if lv.eps != s.eps.halve(j as u32 + 1) {
            return Err(fail(ScheduleSum, Some(j), format!("eps_{j} = {}", lv.eps)));
        }
    }
    let total = Mag::sum(s.levels.iter().map(|l| &l.eps));
    if total > s.eps {
        return Err(fail(ScheduleSum, None, format!("sum {total} exceeds {}", s.eps)));
    }
    for (j, lv) in s.levels.iter().enumerate() {
        let expected = shadowing_modulus(system, &lv.eps)
            .map_err(|e| fail(ScheduleModulus, Some(j), e.to_string()))?;
        if lv.delta != expected {
            return Err(fail(
                ScheduleModulus,
                Some(j),
                format!("delta_{j} = {}, modulus gives {expected}", lv.delta),
            ));
        }
        if j > 0 && lv.delta >= s.levels[j - 1].delta {
            return Err(fail(ScheduleModulus, Some(j), "delta_j not decreasing".into()));
        }
    }

    if cert.tower[0].at(0) != &cert.input {
        return Err(fail(
            TowerStart,
            Some(0),
            format!("x_0^(0) = {} but input is {}", cert.tower[0].at(0), cert.input),
        ));
    }

    for (j, xi) in cert.tower.iter().enumerate() {
        let defect = validity_defect(system, xi);
        if defect > *s.delta_j(j) {
            return Err(fail(
                Validity,
                Some(j),
                format!("defect {defect} exceeds {}", s.delta_j(j)),
            ));
        }
    }

    for j in 0..levels - 1 {
        let sup = sup_distance(system, &cert.tower[j], &cert.tower[j + 1]);
        if sup > *s.eps_j(j) {
            return Err(fail(
                LevelDistance,
                Some(j),
                format!("sup distance {sup} exceeds {}", s.eps_j(j)),
            ));
        }
    }

    let last = cert.tower[levels - 1].at(0);
    if last != &cert.x0 {
        return Err(fail(
            LimitBound,
            Some(levels - 1),
            format!("x0 = {} but x_0^(J) = {last}", cert.x0),
        ));
    }
    for (j, xi) in cert.tower.iter().enumerate() {
        let d = system.dist(xi.at(0), &cert.x0);
        if d > cert.zeta[j] {
            return Err(fail(
                LimitBound,
                Some(j),
                format!("distance {d} exceeds zeta_{j} = {}", cert.zeta[j]),
            ));
        }
    }

    let expected = s.tail_bounds();
    for j in 0..levels {
        if cert.zeta[j] != expected[j] {
            return Err(fail(
                TailBound,
                Some(j),
                format!("zeta_{j} = {}, expected {}", cert.zeta[j], expected[j]),
            ));
        }
    }
    if cert.zeta[0] > s.eps {
        return Err(fail(TailBound, Some(0), format!("zeta_0 exceeds {}", s.eps)));
    }

    let periods = cert.periods();
    for j in 0..levels - 1 {
        if periods[j] == 0 || !periods[j + 1].is_multiple_of(periods[j]) {
            return Err(fail(
                Divisibility,
                Some(j),
                format!("{} does not divide {}", periods[j], periods[j + 1]),
            ));
        }
    }

    for (j, (t, xi)) in cert.trace.iter().zip(&cert.tower).enumerate() {
        if t.preperiod != xi.preperiod().len() || t.period != xi.cycle().len() {
            return Err(fail(
                TraceConsistency,
                Some(j),
                format!(
                    "trace ({}, {}) but tower ({}, {})",
                    t.preperiod,
                    t.period,
                    xi.preperiod().len(),
                    xi.cycle().len()
                ),
            ));
        }
        if let (Some(step), Some(prev)) = (&t.step, j.checked_sub(1).map(|i| &cert.tower[i])) {
            let n = prev.cycle().len();
            if step.l >= step.m || t.period != (step.m - step.l) * n {
                return Err(fail(
                    TraceConsistency,
                    Some(j),
                    format!("pair ({}, {}) does not give period {}", step.l, step.m, t.period),
                ));
            }
            if xi.at(0) != &step.shadow {
                return Err(fail(
                    TraceConsistency,
                    Some(j),
                    "recorded shadow is not x_0^(j)".into(),
                ));
            }
        }
    }

    let tail = &cert.tower[levels - 1];
    let z = &tail.cycle()[0];
    for j in 0..levels {
        let bound = cert.zeta[j].double();
        let n = periods[j];
        let mut w = z.clone();
        for k in 1..=rr_horizon {
            w = system.iterate(&w, n);
            let d = system.dist(z, &w);
            if d > bound {
                return Err(fail(
                    RrEvidence,
                    Some(j),
                    format!("d(z, f^({k}*{n})(z)) = {d} exceeds {bound}"),
                ));
            }
            if &w == z {
                // The steps repeat from here on.
                break;
            }
        }
    }

    match classify(&periods, STABILIZATION) {
        Ok(v) if v == cert.verdict => Ok(()),
        Ok(v) => Err(fail(Clause::Verdict, None, format!("recorded {}, trace gives {v}", cert.verdict))),
        Err(e) => Err(fail(Clause::Verdict, None, e.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Every pair passed; a finite-tolerance statement only.
    Consistent { tolerances: Vec<Mag> },
    Failed { index: usize, reason: String },
}

/// Check approximants `x_ε` of `x`: `limsup d(f^i x, f^i x_ε) <= ε` and a valid certificate for `x_ε`.
pub fn membership_test(
    system: &System,
    x: &Point,
    pairs: &[(Mag, Point, Option<RegularityCertificate>)],
    rr_horizon: usize,
) -> Membership {
    for (index, (eps, x_eps, cert)) in pairs.iter().enumerate() {
        let failed = |reason: String| Membership::Failed { index, reason };
        if let Err(e) = system.contains(x_eps) {
            return failed(e.to_string());
        }
        let d = limsup_distance(system, x, x_eps);
        if d > *eps {
            return failed(format!("limsup distance {d} exceeds {eps}"));
        }
        if let Some(cert) = cert {
            if cert.x0 != *x_eps {
                return failed(format!("certificate is for {}, not {x_eps}", cert.x0));
            }
            let report = verify_certificate(system, cert, rr_horizon);
            if let Some(v) = report.failure {
                return failed(format!("certificate fails: {}", v.clause));
            }
        }
    }
    Membership::Consistent {
        tolerances: pairs.iter().map(|(e, _, _)| *e).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{parse_point, parse_system};

    fn p(s: &System, l: &str) -> Point {
        parse_point(s, l).unwrap()
    }

    fn po(s: &System, pre: &[&str], cyc: &[&str]) -> PseudoOrbit {
        PseudoOrbit::new(
            pre.iter().map(|l| p(s, l)).collect(),
            cyc.iter().map(|l| p(s, l)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn schedule_is_geometric() {
        let s = parse_system("full-shift:2").unwrap();
        let sch = Schedule::geometric(&s, &Mag::pow2(1), 3).unwrap();
        let eps: Vec<_> = sch.levels.iter().map(|l| l.eps).collect();
        assert_eq!(eps, vec![Mag::pow2(2), Mag::pow2(3), Mag::pow2(4), Mag::pow2(5)]);
        assert_eq!(sch.delta_j(0), &Mag::pow2(3));
        assert_eq!(sch.tail_bounds()[0], Mag::dyadic(15, 5));
        assert_eq!(sch.tail_bounds()[3], Mag::pow2(5));
    }

    #[test]
    fn true_orbit_is_fixed_by_refinement() {
        let s = parse_system("full-shift:2").unwrap();
        let xi = po(&s, &[], &["|01", "|10"]);
        let (out, step) = refine_step(&s, &xi, &Mag::pow2(3), &Mag::pow2(5)).unwrap();
        assert_eq!(out, xi);
        assert_eq!((step.l, step.m), (0, 1));
    }

    #[test]
    fn refine_constant() {
        let s = parse_system("full-shift:2").unwrap();
        let xi = po(&s, &[], &["00001|0"]);
        let (out, _) = refine_step(&s, &xi, &Mag::pow2(2), &Mag::pow2(4)).unwrap();
        assert_eq!(out, po(&s, &[], &["|0"]));
        assert_eq!(sup_distance(&s, &xi, &out), Mag::pow2(4));
        assert!(matches!(
            refine_step(&s, &xi, &Mag::pow2(3), &Mag::pow2(4)),
            Err(Error::DefectTooLarge { .. })
        ));
    }

    #[test]
    fn refine_odometer() {
        let m = parse_system("odometer:2,4,8").unwrap();
        let xi = po(&m, &[], &["(0,0,0)", "(1,1,1)"]);
        assert_eq!(validity_defect(&m, &xi), Mag::pow2(1));
        let (out, step) = refine_step(&m, &xi, &Mag::pow2(1), &Mag::pow2(2)).unwrap();
        assert_eq!(out, po(&m, &[], &["(0,0,0)", "(1,1,1)", "(0,2,2)", "(1,3,3)"]));
        assert_eq!((step.l, step.m), (0, 2));
        assert!(validity_defect(&m, &out) <= Mag::pow2(2));
        assert!(sup_distance(&m, &xi, &out) <= Mag::pow2(1));
    }

    #[test]
    fn assemble_examples() {
        let s = parse_system("full-shift:2").unwrap();
        let sch = Schedule::geometric(&s, &Mag::pow2(1), 2).unwrap();
        let tower = vec![
            po(&s, &[], &["00001|0"]),
            po(&s, &[], &["|0"]),
            po(&s, &[], &["|0"]),
        ];
        let (x0, cert) = assemble_limit(&s, tower, sch.clone()).unwrap();
        assert_eq!(x0, p(&s, "|0"));
        assert_eq!(s.dist(&cert.input, &x0), Mag::pow2(4));
        assert!(s.dist(&cert.input, &x0) <= cert.zeta[0]);

        let same = vec![po(&s, &[], &["|01", "|10"]); 3];
        let (x0, _) = assemble_limit(&s, same, sch.clone()).unwrap();
        assert_eq!(x0, p(&s, "|01"));

        let bad = vec![po(&s, &[], &["|0"]), po(&s, &[], &["|1"]), po(&s, &[], &["|1"])];
        assert!(matches!(
            assemble_limit(&s, bad, sch),
            Err(Error::TowerInvalid { level: 0, .. })
        ));
    }

    #[test]
    fn assemble_odometer_tower() {
        let m = parse_system("odometer:2,4,8").unwrap();
        let sch = Schedule::geometric(&m, &Mag::ONE, 2).unwrap();
        let xi0 = po(&m, &[], &["(0,0,0)", "(1,1,1)"]);
        let (xi1, _) = refine_step(&m, &xi0, sch.eps_j(0), sch.delta_j(1)).unwrap();
        let (xi2, _) = refine_step(&m, &xi1, sch.eps_j(1), sch.delta_j(2)).unwrap();
        let (x0, cert) = assemble_limit(&m, vec![xi0, xi1, xi2], sch).unwrap();
        assert_eq!(x0, p(&m, "(0,0,0)"));
        assert_eq!(cert.periods(), vec![2, 4, 8]);
        assert!(verify_certificate(&m, &cert, 64).passed);
    }

    #[test]
    fn pipeline_examples() {
        let s = parse_system("full-shift:2").unwrap();
        let (x0, cert) = construct_regular_point(&s, &p(&s, "|0"), &Mag::pow2(1), 4).unwrap();
        assert_eq!(x0, p(&s, "|0"));
        assert_eq!(cert.verdict, Verdict::Periodic { period: 1, depth: 4 });

        let x = p(&s, "00001|0");
        let (x0, cert) = construct_regular_point(&s, &x, &Mag::pow2(1), 4).unwrap();
        assert_eq!(x0, p(&s, "|0"));
        assert_eq!(s.dist(&x, &x0), Mag::pow2(4));
        assert_eq!(cert.verdict, Verdict::Periodic { period: 1, depth: 4 });
        assert!(verify_certificate(&s, &cert, RR_HORIZON).passed);
    }

    #[test]
    fn odometer_pipeline() {
        let m = parse_system("odometer:2,4,8,16").unwrap();
        let x = p(&m, "(1,1,1,1)");
        let (x0, cert) = construct_regular_point(&m, &x, &Mag::pow2(1), 2).unwrap();
        assert!(m.dist(&x, &x0) <= Mag::pow2(1));
        assert_eq!(cert.verdict, Verdict::OdometerLike { trace: vec![4, 8, 16] });
        let report = verify_certificate(&m, &cert, RR_HORIZON);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn periodic_inputs_are_returned() {
        let s = parse_system("full-shift:3").unwrap();
        for lit in ["|012", "|0", "|1102", "|21"] {
            let x = p(&s, lit);
            let (x0, cert) = construct_regular_point(&s, &x, &Mag::pow2(2), 3).unwrap();
            assert_eq!(s.dist(&x, &x0), Mag::ZERO);
            assert!(verify_certificate(&s, &cert, 128).passed);
        }
    }

    #[test]
    fn grid_is_unsupported() {
        let g = parse_system("grid:doubling:n=8").unwrap();
        assert!(matches!(
            construct_regular_point(&g, &Point::Cell(1), &Mag::ONE, 2),
            Err(Error::UnsupportedSystem(_))
        ));
    }

    #[test]
    fn tampering_is_detected() {
        let s = parse_system("full-shift:2").unwrap();
        let (_, cert) = construct_regular_point(&s, &p(&s, "00001|0"), &Mag::pow2(1), 4).unwrap();

        let mut c = cert.clone();
        c.zeta[0] = Mag::ZERO;
        assert_eq!(verify_certificate(&s, &c, 64).clause(), Some(Clause::LimitBound));

        let mut c = cert.clone();
        c.trace[0].period = 2;
        c.trace[1].period = 3;
        assert_eq!(verify_certificate(&s, &c, 64).clause(), Some(Clause::Divisibility));

        let mut c = cert.clone();
        c.input = p(&s, "1|0");
        assert_eq!(verify_certificate(&s, &c, 64).clause(), Some(Clause::TowerStart));

        let mut c = cert;
        c.verdict = Verdict::Unresolved { depth: 4 };
        assert_eq!(verify_certificate(&s, &c, 64).clause(), Some(Clause::Verdict));
    }

    #[test]
    fn membership_examples() {
        let s = parse_system("full-shift:2").unwrap();
        let x = p(&s, "0000|1");
        let pairs: Vec<_> = (1..=5)
            .map(|k| {
                let eps = Mag::pow2(k);
                let (x0, cert) = construct_regular_point(&s, &p(&s, "|1"), &eps, 3).unwrap();
                (eps, x0, Some(cert))
            })
            .collect();
        assert_eq!(
            membership_test(&s, &x, &pairs, 64),
            Membership::Consistent { tolerances: (1..=5).map(Mag::pow2).collect() }
        );

        let x = p(&s, "|01");
        let (x0, cert) = construct_regular_point(&s, &p(&s, "|10"), &Mag::pow2(1), 3).unwrap();
        assert!(matches!(
            membership_test(&s, &x, &[(Mag::pow2(1), x0, Some(cert))], 64),
            Membership::Failed { index: 0, .. }
        ));

        let pairs = vec![(Mag::pow2(3), x.clone(), None), (Mag::pow2(9), x.clone(), None)];
        assert!(matches!(membership_test(&s, &x, &pairs, 64), Membership::Consistent { .. }));
    }

    #[test]
    fn batch_matches_sequential() {
        let s = parse_system("full-shift:2").unwrap();
        let xs: Vec<Point> = ["1|0", "011|01", "|110", "0101|1"].iter().map(|l| p(&s, l)).collect();
        let a = construct_batch(&s, &xs, &Mag::pow2(2), 3, Exec::Sequential);
        let b = construct_batch(&s, &xs, &Mag::pow2(2), 3, Exec::Parallel);
        assert_eq!(a, b);
    }
}
