//! JSON forms of pseudo-orbits, certificates and recognition reports.
//!
//! Points are written as literals and numbers as exact strings (`"0"`,
//! `"1"`, `"2^-k"`, `"p/q"`). Field order is fixed by declaration order, so
//! identical inputs serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::constructor::{Level, Refinement, RegularityCertificate, Schedule, TraceEntry, VerificationReport};
use crate::error::{Error, Result};
use crate::mag::Mag;
use crate::pseudo_orbits::PseudoOrbit;
use crate::recognition::{Block, Fingerprint, PartitionDescriptor, Verdict};
use crate::spaces::{parse_point, parse_system_with, FileLoader, Point, System};

fn literals(points: &[Point]) -> Vec<String> {
    points.iter().map(Point::to_string).collect()
}

fn points(system: &System, lits: &[String]) -> Result<Vec<Point>> {
    lits.iter().map(|l| parse_point(system, l)).collect()
}

/// `preperiod · cycle^∞` as point literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub preperiod: Vec<String>,
    pub cycle: Vec<String>,
}

impl SequenceJson {
    pub fn new(xi: &PseudoOrbit) -> Self {
        SequenceJson {
            preperiod: literals(xi.preperiod()),
            cycle: literals(xi.cycle()),
        }
    }

    pub fn parse(&self, system: &System) -> Result<PseudoOrbit> {
        PseudoOrbit::new(points(system, &self.preperiod)?, points(system, &self.cycle)?)
    }
}

/// Pseudo-orbit input file: `{"system": ..., "preperiod": [...], "cycle": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoOrbitFile {
    pub system: String,
    #[serde(flatten)]
    pub sequence: SequenceJson,
}

impl PseudoOrbitFile {
    pub fn new(system: &System, xi: &PseudoOrbit) -> Self {
        PseudoOrbitFile {
            system: system.to_string(),
            sequence: SequenceJson::new(xi),
        }
    }

    pub fn load(&self, files: &dyn FileLoader) -> Result<(System, PseudoOrbit)> {
        let system = parse_system_with(&self.system, files)?;
        let xi = self.sequence.parse(&system)?;
        Ok((system, xi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub preperiod: usize,
    pub period: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shadow: Option<String>,
}

impl TraceJson {
    fn new(t: &TraceEntry) -> Self {
        TraceJson {
            preperiod: t.preperiod,
            period: t.period,
            l: t.step.as_ref().map(|s| s.l),
            m: t.step.as_ref().map(|s| s.m),
            shadow: t.step.as_ref().map(|s| s.shadow.to_string()),
        }
    }

    fn parse(&self, system: &System) -> Result<TraceEntry> {
        let step = match (self.l, self.m, &self.shadow) {
            (Some(l), Some(m), Some(y)) => Some(Refinement {
                shadow: parse_point(system, y)?,
                l,
                m,
            }),
            (None, None, None) => None,
            _ => return Err(Error::Parse("trace entry needs all of l, m, shadow or none".into())),
        };
        Ok(TraceEntry {
            preperiod: self.preperiod,
            period: self.period,
            step,
        })
    }
}

/// The construct report; it carries the whole certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructReport {
    pub system: String,
    pub input_point: String,
    pub eps: Mag,
    pub depth: usize,
    pub schedule: Vec<Level>,
    pub tower: Vec<SequenceJson>,
    pub trace: Vec<TraceJson>,
    pub x0: String,
    pub zeta: Vec<Mag>,
    pub verdict: Verdict,
    pub verified: bool,
    pub config_hash: String,
}

impl ConstructReport {
    pub fn new(system: &System, cert: &RegularityCertificate, verified: bool, config_hash: String) -> Self {
        ConstructReport {
            system: system.to_string(),
            input_point: cert.input.to_string(),
            eps: cert.schedule.eps,
            depth: cert.depth(),
            schedule: cert.schedule.levels.clone(),
            tower: cert.tower.iter().map(SequenceJson::new).collect(),
            trace: cert.trace.iter().map(TraceJson::new).collect(),
            x0: cert.x0.to_string(),
            zeta: cert.zeta.clone(),
            verdict: cert.verdict.clone(),
            verified,
            config_hash,
        }
    }

    pub fn system(&self, files: &dyn FileLoader) -> Result<System> {
        parse_system_with(&self.system, files)
    }

    /// The certificate, parsed against `system`. The `depth` field is informational.
    pub fn certificate(&self, system: &System) -> Result<RegularityCertificate> {
        Ok(RegularityCertificate {
            input: parse_point(system, &self.input_point)?,
            schedule: Schedule {
                eps: self.eps,
                levels: self.schedule.clone(),
            },
            tower: self
                .tower
                .iter()
                .map(|s| s.parse(system))
                .collect::<Result<_>>()?,
            trace: self
                .trace
                .iter()
                .map(|t| t.parse(system))
                .collect::<Result<_>>()?,
            x0: parse_point(system, &self.x0)?,
            zeta: self.zeta.clone(),
            verdict: self.verdict.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub system: String,
    pub x0: String,
    #[serde(flatten)]
    pub report: VerificationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintReport {
    pub system: String,
    pub point: String,
    #[serde(flatten)]
    pub fingerprint: Fingerprint,
    pub divisible: bool,
}

impl FingerprintReport {
    pub fn new(system: &System, x: &Point, f: Fingerprint) -> Self {
        FingerprintReport {
            system: system.to_string(),
            point: x.to_string(),
            divisible: f.is_divisible(),
            fingerprint: f,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockJson {
    Residue { level: usize, modulus: u64, residue: u64 },
    Points { points: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub system: String,
    pub point: String,
    pub eps: Mag,
    pub horizon: usize,
    pub n_x: usize,
    pub l_x: usize,
    pub diameter: Mag,
    pub blocks: Vec<BlockJson>,
}

impl PartitionReport {
    pub fn new(system: &System, x: &Point, d: &PartitionDescriptor) -> Self {
        let blocks = d
            .blocks
            .iter()
            .map(|b| match b {
                Block::Residue { level, modulus, residue } => BlockJson::Residue {
                    level: *level,
                    modulus: *modulus,
                    residue: *residue,
                },
                Block::Points(s) => BlockJson::Points {
                    points: s.iter().map(Point::to_string).collect(),
                },
            })
            .collect();
        PartitionReport {
            system: system.to_string(),
            point: x.to_string(),
            eps: d.eps,
            horizon: d.horizon,
            n_x: d.n_x,
            l_x: d.l_x,
            diameter: d.diameter,
            blocks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub system: String,
    pub eps: Mag,
    pub delta: Mag,
    pub validity_defect: Mag,
    pub shadow: String,
    pub shadow_defect: Mag,
    pub shadowed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrReport {
    pub system: String,
    pub delta: Mag,
    pub nodes: usize,
    pub edges: usize,
    pub chain_recurrent: Vec<usize>,
    pub terminal_components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub system: String,
    pub eps: Mag,
    pub delta: Mag,
    pub horizon: usize,
    pub chain_continuous: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::{construct_regular_point, verify_certificate};
    use crate::spaces::{parse_system, FsLoader};

    #[test]
    fn certificate_round_trip() {
        for (sys, lit, eps, depth) in [
            ("full-shift:2", "00001|0", Mag::pow2(1), 4),
            ("odometer:2,4,8,16", "(1,1,1,1)", Mag::pow2(1), 2),
            ("product(full-shift:2,odometer:2,4)", "<1|01;(1,3)>", Mag::pow2(1), 3),
        ] {
            let s = parse_system(sys).unwrap();
            let x = parse_point(&s, lit).unwrap();
            let (_, cert) = construct_regular_point(&s, &x, &eps, depth).unwrap();
            let report = ConstructReport::new(&s, &cert, true, String::new());
            let json = serde_json::to_string_pretty(&report).unwrap();
            let back: ConstructReport = serde_json::from_str(&json).unwrap();
            assert_eq!(back, report);
            let s2 = back.system(&FsLoader::default()).unwrap();
            assert_eq!(s2, s);
            let c2 = back.certificate(&s2).unwrap();
            assert_eq!(c2, cert);
            assert!(verify_certificate(&s2, &c2, 256).passed);
        }
    }

    #[test]
    fn field_order_is_fixed() {
        let s = parse_system("full-shift:2").unwrap();
        let (_, cert) = construct_regular_point(&s, &parse_point(&s, "|0").unwrap(), &Mag::pow2(1), 2).unwrap();
        let json = serde_json::to_string(&ConstructReport::new(&s, &cert, true, "h".into())).unwrap();
        let keys = [
            "\"system\"", "\"input_point\"", "\"eps\"", "\"depth\"", "\"schedule\"", "\"tower\"",
            "\"trace\"", "\"x0\"", "\"zeta\"", "\"verdict\"", "\"verified\"", "\"config_hash\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"eps\":\"2^-1\""));
    }

    #[test]
    fn pseudo_orbit_file() {
        let s = parse_system("full-shift:2").unwrap();
        let text = r#"{"system": "full-shift:2", "preperiod": ["1|0"], "cycle": ["00001|0"]}"#;
        let f: PseudoOrbitFile = serde_json::from_str(text).unwrap();
        let (s2, xi) = f.load(&FsLoader::default()).unwrap();
        assert_eq!(s2, s);
        assert_eq!(xi.cycle().len(), 1);
        assert_eq!(PseudoOrbitFile::new(&s, &xi), f);
    }
}
