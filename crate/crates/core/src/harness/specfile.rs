//! Plain-text group descriptions.
//!
//! ```text
//! # comments start with '#'
//! name AGL1(5)
//! kind perm
//! degree 5
//! gen (0 1 2 3 4)
//! gen (1 2 4 3)
//! ```
//!
//! Matrix groups list field, dimension and generators as row-major entry
//! indices, optionally followed by `frob e`:
//!
//! ```text
//! kind matrix
//! field 2 4
//! dim 1
//! gen 2
//! gen 1 frob 2
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::make_field;
use crate::matgroup::{MatGroup, SemilinearMap};
use crate::perm::{Perm, PermGroup, MAX_DEGREE};

#[derive(Debug, Clone)]
pub enum GroupSpec {
    Perm { name: Option<String>, group: PermGroup },
    Matrix { name: Option<String>, group: MatGroup },
}

impl GroupSpec {
    pub fn name(&self) -> Option<&str> {
        match self {
            GroupSpec::Perm { name, .. } | GroupSpec::Matrix { name, .. } => name.as_deref(),
        }
    }
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// A whitespace-separated token with its 1-based column.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b + 1, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

fn parse_num<T: std::str::FromStr>(line: usize, col: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| err(line, col, format!("expected {what}, found `{tok}`")))
}

/// Parses cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
pub fn parse_cycles(text: &str, degree: usize, line: usize, col0: usize) -> Result<Perm> {
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut seen = vec![false; degree];
    let mut current: Option<Vec<u32>> = None;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let col = col0 + i;
        let c = bytes[i] as char;
        match c {
            '(' => {
                if current.is_some() {
                    return Err(err(line, col, "nested `(`"));
                }
                current = Some(Vec::new());
                i += 1;
            }
            ')' => {
                let cyc = current.take().ok_or_else(|| err(line, col, "unmatched `)`"))?;
                if cyc.len() > 1 {
                    cycles.push(cyc);
                }
                i += 1;
            }
            ',' | ' ' | '\t' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let cyc = current.as_mut().ok_or_else(|| err(line, col, "point outside a cycle"))?;
                let x: u64 = parse_num(line, col, &text[start..i], "a point")?;
                if x as usize >= degree {
                    return Err(err(line, col, format!("point {x} out of range for degree {degree}")));
                }
                if seen[x as usize] {
                    return Err(err(line, col, format!("point {x} repeated")));
                }
                seen[x as usize] = true;
                cyc.push(x as u32);
            }
            _ => return Err(err(line, col, format!("unexpected character `{c}`"))),
        }
    }
    if current.is_some() {
        return Err(err(line, col0 + text.len(), "unterminated cycle"));
    }
    Perm::from_cycles(degree, &cycles)
}

pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let mut name = None;
    let mut kind: Option<(usize, String)> = None;
    let mut degree: Option<usize> = None;
    let mut field: Option<(usize, usize, u64, u32)> = None;
    let mut dim: Option<usize> = None;
    let mut gens: Vec<(usize, usize, String)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, key)) = toks.first() else { continue };
        let rest_col = toks.get(1).map(|t| t.0).unwrap_or(col + key.len());
        let rest = content[rest_col - 1..].trim_end();
        match key {
            "name" => name = Some(rest.trim().to_string()),
            "kind" => {
                let k = rest.trim();
                if k != "perm" && k != "matrix" {
                    return Err(err(line, rest_col, format!("kind must be `perm` or `matrix`, found `{k}`")));
                }
                kind = Some((line, k.to_string()));
            }
            "degree" => {
                let d: usize = parse_num(line, rest_col, rest.trim(), "a degree")?;
                if d == 0 || d > MAX_DEGREE {
                    return Err(err(line, rest_col, format!("degree {d} outside 1..={MAX_DEGREE}")));
                }
                degree = Some(d);
            }
            "field" => {
                if toks.len() != 3 {
                    return Err(err(line, col, "expected `field <p> <f>`"));
                }
                let p = parse_num(line, toks[1].0, toks[1].1, "a prime")?;
                let f = parse_num(line, toks[2].0, toks[2].1, "an extension degree")?;
                field = Some((line, toks[1].0, p, f));
            }
            "dim" => dim = Some(parse_num(line, rest_col, rest.trim(), "a dimension")?),
            "gen" => gens.push((line, rest_col, rest.to_string())),
            other => return Err(err(line, col, format!("unknown keyword `{other}`"))),
        }
    }
    let Some((kind_line, kind)) = kind else {
        return Err(err(last_line.max(1), 1, "missing `kind` line"));
    };
    if kind == "perm" {
        let degree = degree.ok_or_else(|| err(kind_line, 1, "permutation spec needs a `degree` line"))?;
        let perms = gens
            .iter()
            .map(|(line, col, text)| parse_cycles(text, degree, *line, *col))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupSpec::Perm { name, group: PermGroup::new(degree, perms)? })
    } else {
        let (fline, fcol, p, f) = field.ok_or_else(|| err(kind_line, 1, "matrix spec needs a `field` line"))?;
        let d = dim.ok_or_else(|| err(kind_line, 1, "matrix spec needs a `dim` line"))?;
        let ctx = Arc::new(make_field(p, f).map_err(|e| err(fline, fcol, e.to_string()))?);
        let mut maps = Vec::new();
        for (line, base, text) in &gens {
            let toks = tokens(text);
            let end = text.len() + 1;
            let col_of = |i: usize| base + toks.get(i).map(|t| t.0).unwrap_or(end) - 1;
            let (entries, frob) = match toks.iter().position(|t| t.1 == "frob") {
                Some(i) => {
                    let ft = toks.get(i + 1).ok_or_else(|| err(*line, col_of(i), "`frob` needs a value"))?;
                    if toks.len() != i + 2 {
                        return Err(err(*line, col_of(i + 2), "trailing tokens after `frob`"));
                    }
                    (&toks[..i], parse_num::<u32>(*line, col_of(i + 1), ft.1, "a Frobenius exponent")?)
                }
                None => (&toks[..], 0),
            };
            if entries.len() != d * d {
                return Err(err(*line, col_of(0), format!("expected {} entries, found {}", d * d, entries.len())));
            }
            let vals = entries
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let v: u64 = parse_num(*line, col_of(i), t.1, "a field element index")?;
                    if v >= ctx.q() {
                        return Err(err(*line, col_of(i), format!("entry {v} is not an element of F_{}", ctx.q())));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?;
            if frob >= f {
                return Err(err(*line, col_of(entries.len() + 1), format!("Frobenius exponent {frob} must be < {f}")));
            }
            let g = SemilinearMap::from_indices(&ctx, d, &vals, frob)
                .map_err(|e| err(*line, col_of(0), e.to_string()))?;
            maps.push(g);
        }
        Ok(GroupSpec::Matrix { name, group: MatGroup::new(ctx, d, maps)? })
    }
}

pub fn read_spec(path: &Path) -> Result<GroupSpec> {
    parse_spec(&std::fs::read_to_string(path)?)
}

/// Canonical text form; `parse_spec(serialize_spec(s))` rebuilds the same generators.
pub fn serialize_spec(spec: &GroupSpec) -> String {
    let mut out = String::new();
    if let Some(n) = spec.name() {
        let _ = writeln!(out, "name {n}");
    }
    match spec {
        GroupSpec::Perm { group, .. } => {
            let _ = writeln!(out, "kind perm\ndegree {}", group.degree());
            for g in group.generators() {
                let _ = writeln!(out, "gen {g}");
            }
        }
        GroupSpec::Matrix { group, .. } => {
            let ctx = group.ctx();
            let _ = writeln!(out, "kind matrix\nfield {} {}\ndim {}", ctx.p(), ctx.f(), group.dim());
            for g in group.generators() {
                let entries: Vec<String> = g.matrix().iter().map(|x| x.index().to_string()).collect();
                let _ = write!(out, "gen {}", entries.join(" "));
                if g.frob() != 0 {
                    let _ = write!(out, " frob {}", g.frob());
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const AGL15: &str = "# affine group of degree 5\nname AGL1(5)\nkind perm\ndegree 5\ngen (0 1 2 3 4)\ngen (1 2 4 3)\n";

    #[test]
    fn parses_and_round_trips_perm() {
        let s = parse_spec(AGL15).unwrap();
        assert_eq!(s.name(), Some("AGL1(5)"));
        let text = serialize_spec(&s);
        let again = parse_spec(&text).unwrap();
        assert_eq!(serialize_spec(&again), text);
        let GroupSpec::Perm { group, .. } = again else { panic!() };
        assert_eq!(group.enumerated(1000).unwrap().order(), Some(20));
    }

    #[test]
    fn parses_and_round_trips_matrix() {
        let text = "kind matrix\nfield 2 4\ndim 1\ngen 2\ngen 1 frob 2\n";
        let s = parse_spec(text).unwrap();
        assert_eq!(serialize_spec(&s), text);
        let GroupSpec::Matrix { group, .. } = s else { panic!() };
        assert_eq!(group.enumerated(1000).unwrap().order(), Some(30));
    }

    #[test]
    fn reports_locations() {
        let cases = [
            ("kind perm\ndegree 3\ngen (0 1 5)\n", 3, 10),
            ("kind perm\ndegree 3\ngen (0 1\n", 3, 9),
            ("kind perm\ndegree 3\ngen (0 1 0)\n", 3, 10),
            ("kind perm\ndegre 3\n", 2, 1),
            ("kind matrix\nfield 2 2\ndim 1\ngen 7\n", 4, 5),
            ("kind matrix\nfield 2 2\ndim 2\ngen 1 0 0\n", 4, 5),
            ("kind matrix\nfield 3 1\ndim 1\ngen 0\n", 4, 5),
            ("degree 3\n", 1, 1),
            ("kind matrix\nfield 4 1\ndim 1\n", 2, 7),
        ];
        for (text, line, col) in cases {
            match parse_spec(text) {
                Err(Error::Parse { line: l, col: c, .. }) => assert_eq!((l, c), (line, col), "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
