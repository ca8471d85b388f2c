use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use odoshadow::chain_graph::{
    build_graph, chain_continuity_scan, chain_recurrent, condensation, condensation_to_dot,
    cr_ladder, terminal_components, to_csv, to_dot,
};
use odoshadow::constructor::{construct_regular_point, verify_certificate};
use odoshadow::pseudo_orbits::{shadow_defect, shadow_oracle, shadowing_modulus, validity_defect};
use odoshadow::recognition::{self, clopen_partition};
use odoshadow::report::{
    ConstructReport, CrReport, FingerprintReport, PartitionReport, PseudoOrbitFile, ScanReport,
    ShadowReport, VerifyReport,
};
use odoshadow::spaces::{parse_point, parse_system, FsLoader, GridSystem};
use odoshadow::{Error, Exec, Mag, System};

use crate::output::{config_hash, emit, write_atomic};
use crate::{ConstructArgs, CrArgs, FingerprintArgs, ScanArgs, ShadowArgs, VerifyArgs};

pub enum Outcome {
    Pass,
    Fail(String),
}

fn mag(s: &str, what: &str) -> Result<Mag> {
    s.parse::<Mag>()
        .map_err(|e| anyhow::anyhow!("{e}"))
        .with_context(|| format!("--{what}"))
}

fn grid(system: &System) -> Result<&GridSystem> {
    match system {
        System::Grid(g) => Ok(g),
        s => bail!("{s} is not a grid system"),
    }
}

#[derive(Serialize)]
struct ConstructConfig<'a> {
    command: &'a str,
    system: String,
    point: String,
    eps: Mag,
    depth: usize,
    rr_horizon: usize,
}

pub fn construct(a: ConstructArgs, _exec: Exec) -> Result<Outcome> {
    let system = parse_system(&a.system)?;
    let x = parse_point(&system, &a.point)?;
    let eps = mag(&a.eps, "eps")?;
    let hash = config_hash(&ConstructConfig {
        command: "construct",
        system: system.to_string(),
        point: x.to_string(),
        eps,
        depth: a.depth,
        rr_horizon: a.rr_horizon,
    })?;
    let (x0, cert) = construct_regular_point(&system, &x, &eps, a.depth)?;
    let check = verify_certificate(&system, &cert, a.rr_horizon);
    let report = ConstructReport::new(&system, &cert, check.passed, hash);
    emit(&report, a.out.as_deref())?;
    if a.out.is_some() {
        println!("x0 = {x0}, d(x, x0) = {}, {}", system.dist(&x, &x0), cert.verdict);
    }
    Ok(match check.failure {
        None => Outcome::Pass,
        Some(v) => Outcome::Fail(format!("certificate clause '{}': {}", v.clause, v.detail)),
    })
}

pub fn verify(a: VerifyArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.cert)
        .with_context(|| format!("reading {}", a.cert.display()))?;
    let report: ConstructReport = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", a.cert.display()))?;
    let system = report.system(&FsLoader::default())?;
    let cert = report.certificate(&system)?;
    let check = verify_certificate(&system, &cert, a.rr_horizon);
    let out = VerifyReport {
        system: system.to_string(),
        x0: cert.x0.to_string(),
        report: check.clone(),
    };
    emit(&out, a.out.as_deref())?;
    Ok(match check.failure {
        None => Outcome::Pass,
        Some(v) => Outcome::Fail(format!("certificate clause '{}': {}", v.clause, v.detail)),
    })
}

fn write_opt(path: Option<&Path>, contents: impl FnOnce() -> String) -> Result<()> {
    if let Some(p) = path {
        write_atomic(p, &contents())?;
    }
    Ok(())
}

pub fn cr(a: CrArgs, exec: Exec) -> Result<Outcome> {
    let system = parse_system(&a.system)?;
    let g = grid(&system)?;
    let delta = mag(&a.delta, "delta")?;
    let graph = build_graph(g, &delta, exec);
    write_opt(a.csv.as_deref(), || to_csv(g, &graph))?;
    write_opt(a.dot.as_deref(), || to_dot(&graph))?;
    write_opt(a.condensation_dot.as_deref(), || condensation_to_dot(&condensation(&graph)))?;
    let chain_recurrent = if a.ladder.is_empty() {
        chain_recurrent(&graph)
    } else {
        let mut deltas = vec![delta];
        for d in &a.ladder {
            deltas.push(mag(d, "ladder")?);
        }
        cr_ladder(g, &deltas, exec)
    };
    let report = CrReport {
        system: system.to_string(),
        delta,
        nodes: graph.len(),
        edges: graph.edge_count(),
        chain_recurrent,
        terminal_components: terminal_components(&graph),
    };
    emit(&report, a.out.as_deref())?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct FingerprintOut {
    fingerprint: FingerprintReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<PartitionReport>,
}

pub fn fingerprint(a: FingerprintArgs) -> Result<Outcome> {
    let system = parse_system(&a.system)?;
    let x = parse_point(&system, &a.point)?;
    let f = match fingerprint_or_fail(&system, &x, a.depth, a.horizon)? {
        Ok(f) => f,
        Err(msg) => return Ok(Outcome::Fail(msg)),
    };
    let partition = match &a.partition_eps {
        Some(e) => {
            let eps = mag(e, "partition-eps")?;
            let d = clopen_partition(&system, &x, &eps, a.horizon)?;
            Some(PartitionReport::new(&system, &x, &d))
        }
        None => None,
    };
    let out = FingerprintOut {
        fingerprint: FingerprintReport::new(&system, &x, f),
        partition,
    };
    emit(&out, a.out.as_deref())?;
    Ok(Outcome::Pass)
}

fn fingerprint_or_fail(
    system: &System,
    x: &odoshadow::Point,
    depth: u32,
    horizon: usize,
) -> Result<Result<odoshadow::recognition::Fingerprint, String>> {
    match recognition::fingerprint(system, x, depth, horizon) {
        Ok(f) => Ok(Ok(f)),
        Err(e @ Error::NoReturnWithinHorizon(_)) => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

pub fn shadow_check(a: ShadowArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.orbit)
        .with_context(|| format!("reading {}", a.orbit.display()))?;
    let file: PseudoOrbitFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", a.orbit.display()))?;
    let (system, xi) = file.load(&FsLoader::default())?;
    let eps = mag(&a.eps, "eps")?;
    let delta = shadowing_modulus(&system, &eps)?;
    let defect = validity_defect(&system, &xi);
    let y = match shadow_oracle(&system, &xi, &eps) {
        Ok(y) => y,
        Err(e @ Error::DefectTooLarge { .. }) => return Ok(Outcome::Fail(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let sd = shadow_defect(&system, &xi, &y);
    let report = ShadowReport {
        system: system.to_string(),
        eps,
        delta,
        validity_defect: defect,
        shadow: y.to_string(),
        shadow_defect: sd,
        shadowed: sd <= eps,
    };
    emit(&report, a.out.as_deref())?;
    Ok(if report.shadowed {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("shadow defect {sd} exceeds {eps}"))
    })
}

pub fn cc_scan(a: ScanArgs, exec: Exec) -> Result<Outcome> {
    let system = parse_system(&a.system)?;
    let g = grid(&system)?;
    let eps = mag(&a.eps, "eps")?;
    let delta = mag(&a.delta, "delta")?;
    let nodes = chain_continuity_scan(g, &eps, &delta, a.horizon, exec);
    write_opt(a.csv.as_deref(), || {
        let mut s = String::from("node,image,chain_continuous\n");
        let mut it = nodes.iter().peekable();
        for v in 0..g.len() {
            let hit = it.peek() == Some(&&v);
            if hit {
                it.next();
            }
            s.push_str(&format!("{v},{},{}\n", g.step(v), u8::from(hit)));
        }
        s
    })?;
    let report = ScanReport {
        system: system.to_string(),
        eps,
        delta,
        horizon: a.horizon,
        chain_continuous: nodes,
    };
    emit(&report, a.out.as_deref())?;
    Ok(Outcome::Pass)
}
