//! Plain-text formats: one record per line, `#` starts a comment line,
//! fields are whitespace separated, UTF-8 with `\n` newlines.
//!
//! * scalar files: any number of scalars per line (`-3/7`, `12`, ...)
//! * point files: exactly two scalars per line
//! * line files: `a b c [weight]` for the line `a x + b y = c`
//! * form files: four scalars (row-major) followed by `symmetric` or `skew`

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::equations::WeightedLine;
use crate::error::{Error, Result};
use crate::geom::{BilinearForm, FormKind, Point};
use crate::scalar::Scalar;
use crate::sets::{PointSet, ScalarSet};

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            None
        } else {
            Some((i + 1, t.split_whitespace().collect()))
        }
    })
}

fn scalar_at(tok: &str, line: usize) -> Result<Scalar> {
    tok.parse::<Scalar>().map_err(|e| match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        Error::ZeroDenominator => Error::Parse { line, msg: format!("zero denominator in {tok:?}") },
        other => other,
    })
}

pub fn parse_scalars(text: &str) -> Result<ScalarSet> {
    let mut out = Vec::new();
    for (line, toks) in records(text) {
        for t in toks {
            out.push(scalar_at(t, line)?);
        }
    }
    Ok(ScalarSet::from_vec(out))
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut out = Vec::new();
    for (line, toks) in records(text) {
        if toks.len() != 2 {
            return Err(Error::Parse { line, msg: format!("expected 2 fields, found {}", toks.len()) });
        }
        out.push(Point { x: scalar_at(toks[0], line)?, y: scalar_at(toks[1], line)? });
    }
    Ok(PointSet::from_vec(out))
}

/// Lines in file order; canonicalization and duplicate checks happen in
/// [`WeightedLine::new`].
pub fn parse_lines(text: &str) -> Result<Vec<WeightedLine>> {
    let mut out = Vec::new();
    for (line, toks) in records(text) {
        if !(3..=4).contains(&toks.len()) {
            return Err(Error::Parse { line, msg: format!("expected 3 or 4 fields, found {}", toks.len()) });
        }
        let weight = match toks.get(3) {
            Some(w) => w
                .parse::<u64>()
                .ok()
                .filter(|&w| w > 0)
                .ok_or_else(|| Error::Parse { line, msg: format!("weight must be a positive integer: {w:?}") })?,
            None => 1,
        };
        let l = WeightedLine::new(
            scalar_at(toks[0], line)?,
            scalar_at(toks[1], line)?,
            scalar_at(toks[2], line)?,
            weight,
        )
        .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        out.push(l);
    }
    Ok(out)
}

pub fn parse_form(text: &str) -> Result<BilinearForm> {
    let toks: Vec<(usize, &str)> =
        records(text).flat_map(|(line, toks)| toks.into_iter().map(move |t| (line, t))).collect();
    if toks.len() != 5 {
        return Err(Error::Parse {
            line: toks.last().map_or(0, |t| t.0),
            msg: format!("form needs four scalars and a kind tag, found {} fields", toks.len()),
        });
    }
    let mut m = Vec::with_capacity(4);
    for &(line, t) in &toks[..4] {
        m.push(scalar_at(t, line)?);
    }
    let (line, tag) = toks[4];
    let kind = match tag {
        "symmetric" | "sym" => FormKind::Symmetric,
        "skew" | "skew-symmetric" => FormKind::SkewSymmetric,
        other => return Err(Error::Parse { line, msg: format!("unknown form kind {other:?}") }),
    };
    let m: [Scalar; 4] = m.try_into().expect("four entries");
    BilinearForm::new(m, kind)
}

fn read<T>(path: &Path, parse: fn(&str) -> Result<T>) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    parse(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::ParseFile { path: path.to_owned(), line, msg },
        other => other,
    })
}

pub fn read_scalars(path: &Path) -> Result<ScalarSet> {
    read(path, parse_scalars)
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    read(path, parse_points)
}

pub fn read_lines(path: &Path) -> Result<Vec<WeightedLine>> {
    read(path, parse_lines)
}

pub fn read_form(path: &Path) -> Result<BilinearForm> {
    read(path, parse_form)
}

pub fn format_scalars(s: &ScalarSet) -> String {
    let mut out = String::new();
    for x in s {
        writeln!(out, "{x}").unwrap();
    }
    out
}

pub fn format_points(p: &PointSet) -> String {
    let mut out = String::new();
    for q in p {
        writeln!(out, "{q}").unwrap();
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_file() {
        let s = parse_scalars("# header\n1 2\n-3/7\n\n2\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(format_scalars(&s), "-3/7\n1\n2\n");
        assert!(matches!(parse_scalars("1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn point_file() {
        let p = parse_points("1 2\n# c\n-1/2 3\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(parse_points(&format_points(&p)).unwrap(), p);
        assert!(matches!(parse_points("1 2 3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn form_file() {
        let f = parse_form("0 1\n-1 0\nskew\n").unwrap();
        assert_eq!(f, BilinearForm::cross());
        assert!(parse_form("1 0 0 1\n").is_err());
        assert!(parse_form("1 0 0 1 weird\n").is_err());
        assert!(matches!(parse_form("1 1 1 1 symmetric"), Err(Error::DegenerateForm)));
    }

    #[test]
    fn line_file() {
        let ls = parse_lines("1 -1 0\n0 1 2 5\n").unwrap();
        assert_eq!(ls.len(), 2);
        assert_eq!(ls[1].weight, 5);
        assert!(parse_lines("0 0 1\n").is_err());
        assert!(parse_lines("1 1 1 0\n").is_err());
    }

    #[test]
    fn file_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.txt");
        fs::write(&p, "1\n2 oops\n").unwrap();
        let e = read_scalars(&p).unwrap_err();
        assert!(matches!(e, Error::ParseFile { line: 2, .. }));
        assert_eq!(e.kind(), "parse");
        assert!(e.to_string().contains("bad.txt"));
        assert!(read_points(&dir.path().join("missing.pts")).unwrap_err().to_string().contains("missing.pts"));
    }
}
