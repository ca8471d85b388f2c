//! Descriptor and point literal grammar.
//!
//! Systems: `full-shift:A`, `sft:A@matrix.csv`, `sft:A=11/10`,
//! `odometer:m1,m2,…`, `product(S1,S2,…)`, `grid:FAMILY[:key=value]*:n=N`,
//! `grid:table@cells.csv`, `grid:table=F0,F1,…`; grids accept a trailing
//! `:metric=interval|circle`.
//!
//! Points: `pre|cyc` (digits, or bracketed comma lists), `(x1,…,xJ)`,
//! `<p1;p2;…>` for products, and a bare cell index for grids.

use std::path::Path;

use super::grid::{parse_q, GridMetric, GridSystem, MapFamily};
use super::odometer::{validate_structure, OdometerPoint};
use super::symbolic::parse_symbolic;
use super::{Point, Sft, System};
use crate::error::{Error, Result};

/// Source of the files referenced by `@path` descriptors.
pub trait FileLoader {
    fn load(&self, path: &str) -> Result<String>;
}

/// Reads `@path` references from the filesystem, relative to `base` when set.
#[derive(Debug, Default, Clone)]
pub struct FsLoader {
    pub base: Option<std::path::PathBuf>,
}

impl FileLoader for FsLoader {
    fn load(&self, path: &str) -> Result<String> {
        let p = match &self.base {
            Some(b) if Path::new(path).is_relative() => b.join(path),
            _ => Path::new(path).to_path_buf(),
        };
        std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    }
}

pub fn parse_system(s: &str) -> Result<System> {
    parse_system_with(s, &FsLoader::default())
}

pub fn parse_system_with(s: &str, files: &dyn FileLoader) -> Result<System> {
    let s = s.trim();
    let bad = |msg: &str| Error::Parse(format!("{msg} in system descriptor {s:?}"));
    if let Some(rest) = s.strip_prefix("product(") {
        let inner = rest.strip_suffix(')').ok_or_else(|| bad("unbalanced parentheses"))?;
        let parts = split_product(inner)?;
        if parts.is_empty() {
            return Err(bad("empty product"));
        }
        return Ok(System::Product(
            parts
                .iter()
                .map(|p| parse_system_with(p, files))
                .collect::<Result<_>>()?,
        ));
    }
    if let Some(rest) = s.strip_prefix("full-shift:") {
        let a: u32 = rest.trim().parse().map_err(|_| bad("bad alphabet size"))?;
        return System::full_shift(a);
    }
    if let Some(rest) = s.strip_prefix("odometer:") {
        let levels = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad("bad level")))
            .collect::<Result<Vec<_>>>()?;
        return Ok(System::Odometer(validate_structure(&levels)?));
    }
    if let Some(rest) = s.strip_prefix("sft:") {
        if let Some((a, path)) = rest.split_once('@') {
            let a: u32 = a.trim().parse().map_err(|_| bad("bad alphabet size"))?;
            let matrix = parse_matrix(&files.load(path.trim())?, a)?;
            return Ok(System::Sft(Sft::new(a, matrix, Some(path.trim().to_string()))?));
        }
        if let Some((a, rows)) = rest.split_once('=') {
            let a: u32 = a.trim().parse().map_err(|_| bad("bad alphabet size"))?;
            let text = rows.replace('/', "\n");
            let matrix = parse_matrix(&text, a)?;
            return Ok(System::Sft(Sft::new(a, matrix, None)?));
        }
        return Err(bad("sft needs @matrix.csv or =rows"));
    }
    if let Some(rest) = s.strip_prefix("grid:") {
        return parse_grid(rest, files).map(System::Grid);
    }
    Err(bad("unknown system kind"))
}

const KINDS: [&str; 5] = ["full-shift:", "sft:", "odometer:", "product(", "grid:"];

/// Top-level comma split; tokens that do not start a new descriptor belong
/// to the previous one (odometer levels, inline tables).
fn split_product(inner: &str) -> Result<Vec<String>> {
    let mut raw = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            raw.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {inner:?}")));
    }
    raw.push(cur);
    let mut out: Vec<String> = Vec::new();
    for tok in raw {
        let t = tok.trim();
        if KINDS.iter().any(|k| t.starts_with(k)) || out.is_empty() {
            out.push(t.to_string());
        } else {
            let last = out.last_mut().unwrap();
            last.push(',');
            last.push_str(t);
        }
    }
    Ok(out.into_iter().filter(|t| !t.is_empty()).collect())
}

fn parse_matrix(text: &str, a: u32) -> Result<Vec<Vec<bool>>> {
    let rows: Vec<Vec<bool>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cells: Vec<&str> = if l.contains(',') {
                l.split(',').map(str::trim).collect()
            } else {
                l.split("").filter(|c| !c.is_empty()).collect()
            };
            cells
                .into_iter()
                .map(|c| match c {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(Error::Parse(format!("bad matrix entry {c:?}"))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != a as usize {
        return Err(Error::InvalidSystem(format!(
            "transition matrix has {} rows, expected {a}",
            rows.len()
        )));
    }
    Ok(rows)
}

fn parse_table_csv(text: &str) -> Result<Vec<usize>> {
    let mut table = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<usize>, _> =
            fields.iter().map(|f| f.parse::<usize>()).collect();
        let Ok(vals) = parsed else {
            if table.is_empty() {
                continue; // header
            }
            return Err(Error::Parse(format!("bad table row {line:?}")));
        };
        match vals.as_slice() {
            [img] => table.push(*img),
            [cell, img] => {
                if *cell != table.len() {
                    return Err(Error::Parse(format!(
                        "table rows out of order at cell {cell}"
                    )));
                }
                table.push(*img);
            }
            _ => return Err(Error::Parse(format!("bad table row {line:?}"))),
        }
    }
    Ok(table)
}

fn parse_grid(rest: &str, files: &dyn FileLoader) -> Result<GridSystem> {
    let bad = |msg: String| Error::Parse(format!("{msg} in grid descriptor {rest:?}"));
    let mut parts = rest.split(':');
    let head = parts.next().unwrap_or("").trim();
    let mut params: Vec<(String, String)> = Vec::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| bad(format!("parameter {p:?} lacks '='")))?;
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    let take = |params: &mut Vec<(String, String)>, key: &str| -> Option<String> {
        let i = params.iter().position(|(k, _)| k == key)?;
        Some(params.remove(i).1)
    };
    let metric = match take(&mut params, "metric").as_deref() {
        None => None,
        Some("interval") => Some(GridMetric::Interval),
        Some("circle") => Some(GridMetric::Circle),
        Some(m) => return Err(bad(format!("unknown metric {m:?}"))),
    };
    let grid = if let Some(path) = head.strip_prefix("table@") {
        let table = parse_table_csv(&files.load(path.trim())?)?;
        GridSystem::from_table(
            table,
            metric.unwrap_or(GridMetric::Interval),
            Some(path.trim().to_string()),
        )?
    } else if let Some(list) = head.strip_prefix("table=") {
        let table = list
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("bad cell {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        GridSystem::from_table(table, metric.unwrap_or(GridMetric::Interval), None)?
    } else {
        let n: usize = take(&mut params, "n")
            .ok_or_else(|| bad("missing n=N".into()))?
            .parse()
            .map_err(|_| bad("bad cell count".into()))?;
        let mut q = |key: &str, default: Option<&str>| -> Result<_> {
            match take(&mut params, key).or(default.map(str::to_string)) {
                Some(v) => parse_q(&v),
                None => Err(bad(format!("missing {key}="))),
            }
        };
        let family = match head {
            "doubling" => MapFamily::Doubling,
            "tent" => MapFamily::Tent,
            "rotation" => MapFamily::Rotation { shift: q("shift", None)? },
            "logistic" => MapFamily::Logistic { r: q("r", None)? },
            "affine" => MapFamily::Affine {
                a: q("a", None)?,
                b: q("b", Some("0"))?,
            },
            other => return Err(bad(format!("unknown map family {other:?}"))),
        };
        GridSystem::from_family(family, n, metric)?
    };
    if let Some((k, _)) = params.first() {
        return Err(bad(format!("unexpected parameter {k:?}")));
    }
    Ok(grid)
}

/// Parses a point literal for `system` and checks membership.
pub fn parse_point(system: &System, s: &str) -> Result<Point> {
    let s = s.trim();
    let p = match system {
        System::FullShift { .. } | System::Sft(_) => Point::Symbolic(parse_symbolic(s)?),
        System::Odometer(_) => {
            let inner = s
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("odometer literal {s:?} needs parentheses")))?;
            let residues = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad residue {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Point::Odometer(OdometerPoint::from_residues(residues))
        }
        System::Product(parts) => {
            let inner = s
                .strip_prefix('<')
                .and_then(|t| t.strip_suffix('>'))
                .ok_or_else(|| Error::Parse(format!("product literal {s:?} needs <…>")))?;
            let comps = split_top(inner, ';', '<', '>');
            if comps.len() != parts.len() {
                return Err(Error::Parse(format!(
                    "product literal {s:?} has {} components, system has {}",
                    comps.len(),
                    parts.len()
                )));
            }
            Point::Product(
                parts
                    .iter()
                    .zip(&comps)
                    .map(|(sys, c)| parse_point(sys, c))
                    .collect::<Result<_>>()?,
            )
        }
        System::Grid(_) => Point::Cell(
            s.parse()
                .map_err(|_| Error::Parse(format!("bad cell index {s:?}")))?,
        ),
    };
    system.contains(&p)?;
    Ok(p)
}

fn split_top(s: &str, sep: char, open: char, close: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    struct MapLoader(HashMap<&'static str, &'static str>);

    impl FileLoader for MapLoader {
        fn load(&self, path: &str) -> Result<String> {
            self.0
                .get(path)
                .map(|s| s.to_string())
                .ok_or_else(|| Error::Io(path.to_string()))
        }
    }

    #[test]
    fn descriptor_roundtrip() {
        for d in [
            "full-shift:2",
            "odometer:2,4,8",
            "product(full-shift:2,odometer:2,4)",
            "product(odometer:3,6,product(full-shift:3,odometer:2))",
            "grid:doubling:n=16",
            "grid:rotation:shift=1/4:n=4",
            "grid:logistic:r=37/10:n=64",
            "grid:affine:a=1/2:b=0:n=16",
            "grid:tent:n=10:metric=circle",
            "grid:table=0,0,1,2",
            "sft:2=11/10",
        ] {
            let s = parse_system(d).unwrap();
            assert_eq!(s.to_string(), d);
        }
    }

    #[test]
    fn file_references() {
        let files = MapLoader(HashMap::from([
            ("m.csv", "1,1\n1,0\n"),
            ("t.csv", "cell,image\n0,0\n1,0\n2,1\n"),
        ]));
        let s = parse_system_with("sft:2@m.csv", &files).unwrap();
        assert_eq!(s.to_string(), "sft:2@m.csv");
        let g = parse_system_with("grid:table@t.csv", &files).unwrap();
        match g {
            System::Grid(g) => assert_eq!(g.table(), &[0, 0, 1]),
            _ => unreachable!(),
        }
        assert!(parse_system_with("grid:table@missing.csv", &files).is_err());
    }

    #[test]
    fn bad_descriptors() {
        for d in [
            "full-shift:1",
            "odometer:2,3",
            "odometer:",
            "grid:doubling",
            "grid:spiral:n=4",
            "grid:table=0,5",
            "product(full-shift:2",
            "torus:3",
            "sft:2=10/00",
        ] {
            assert!(parse_system(d).is_err(), "{d}");
        }
    }

    #[test]
    fn point_literals() {
        let p = parse_system("product(full-shift:2,odometer:2,4)").unwrap();
        let x = parse_point(&p, "<0|1;(1,3)>").unwrap();
        assert_eq!(x.to_string(), "<0|1;(1,3)>");
        assert!(parse_point(&p, "<0|1>").is_err());
        assert!(parse_point(&p, "<0|1;(1,2)>").is_err());
        let m = parse_system("odometer:2,4,8").unwrap();
        assert!(parse_point(&m, "1,3,7").is_err());
        let s = parse_system("full-shift:2").unwrap();
        assert!(parse_point(&s, "00001|").is_err());
        assert!(parse_point(&s, "012|0").is_err());
    }
}
