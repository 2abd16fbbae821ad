//! The points file: a CSV with a one-line header.
//!
//! ```text
//! # ppc-points d=2 n=3
//! 1.2500000000000000e-1,5.0000000000000000e-1
//! ...
//! ```
//!
//! Coordinates are written with 17 significant digits, which round-trips
//! every `f64` exactly.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{Error, PointSet, Result};

const MAGIC: &str = "# ppc-points";

pub fn write_points<W: Write>(ps: &PointSet, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{MAGIC} d={} n={}", ps.dim(), ps.len())?;
    for p in ps.points() {
        for (j, c) in p.iter().enumerate() {
            if j > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{c:.16e}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_points_file(ps: &PointSet, path: impl AsRef<Path>) -> Result<()> {
    write_points(ps, fs::File::create(path)?)
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let bad = |msg: &str| Error::Format {
        line: 1,
        msg: msg.to_string(),
    };
    let rest = line
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| bad("missing `# ppc-points` header"))?;
    let mut dim = None;
    let mut count = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad("malformed header field"))?;
        let value: usize = value
            .parse()
            .map_err(|_| bad("header value is not an integer"))?;
        match key {
            "d" => dim = Some(value),
            "n" => count = Some(value),
            _ => return Err(bad("unknown header field")),
        }
    }
    match (dim, count) {
        (Some(d), Some(n)) if d > 0 => Ok((d, n)),
        (Some(_), Some(_)) => Err(bad("dimension must be positive")),
        _ => Err(bad("header needs both d= and n=")),
    }
}

pub fn read_points<R: Read>(input: R) -> Result<PointSet> {
    let mut lines = BufReader::new(input).lines();
    let header = lines.next().ok_or(Error::Format {
        line: 1,
        msg: "empty file".into(),
    })??;
    let (dim, count) = parse_header(&header)?;

    let mut coords = Vec::with_capacity(dim * count);
    let mut rows = 0usize;
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line_no = i + 2;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = coords.len();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::Format {
                line: line_no,
                msg: format!("cannot parse {field:?} as a number"),
            })?;
            coords.push(v);
        }
        if coords.len() - before != dim {
            return Err(Error::Format {
                line: line_no,
                msg: format!(
                    "expected {dim} coordinates, found {}",
                    coords.len() - before
                ),
            });
        }
        rows += 1;
    }
    if rows != count {
        return Err(Error::Format {
            line: 1,
            msg: format!("header declares {count} points but the file has {rows}"),
        });
    }
    PointSet::from_flat(dim, coords, "")
}

pub fn read_points_file(path: impl AsRef<Path>) -> Result<PointSet> {
    let path = path.as_ref();
    let ps = read_points(fs::File::open(path)?)?;
    Ok(ps.with_label(path.display().to_string()))
}
