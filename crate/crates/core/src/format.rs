//! Plain-text file formats for groupoids and algebra elements.
//!
//! Groupoid files start with the header `groupoid v1` followed by one
//! constructor:
//!
//! ```text
//! pair <n>
//! group <n>          followed by n rows of n Cayley-table entries
//! action <path> <k>  followed by one permutation row of k entries per
//!                    group element, in element order; <path> names a
//!                    one-unit groupoid file, relative to this file
//! union <path> ...   disjoint union of the listed groupoid files
//! explicit <m>       followed by unit/arrow/compose/inverse lines
//! ```
//!
//! Element files start with `element v1 <groupoid-path>` and list one
//! `<arrow-id> <re> <im>` line per nonzero coefficient. `#` starts a
//! comment anywhere; blank lines are ignored; paths must not contain
//! whitespace. Serialization always emits the explicit groupoid form and
//! prints floats with enough digits to round-trip exactly.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::groupoid::{build_groupoid, FiniteGroupoid, GroupoidSpec};

const MAX_NESTING: usize = 8;

/// Comment-stripped, tokenized lines with their 1-based line numbers.
fn meaningful_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                None
            } else {
                Some((i + 1, body.split_whitespace().collect()))
            }
        })
        .collect()
}

fn parse_usize(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a non-negative integer, found '{token}'"),
    })
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a number, found '{token}'"),
    })
}

fn take<'l, 'a>(
    lines: &'l [(usize, Vec<&'a str>)],
    pos: &mut usize,
    expected: &str,
) -> Result<&'l (usize, Vec<&'a str>)> {
    let item = lines.get(*pos).ok_or_else(|| Error::Parse {
        line: lines.last().map(|(n, _)| *n).unwrap_or(0) + 1,
        message: format!("unexpected end of file, expected {expected}"),
    })?;
    *pos += 1;
    Ok(item)
}

/// Read one row of exactly `width` integers.
fn integer_row(
    lines: &[(usize, Vec<&str>)],
    pos: &mut usize,
    width: usize,
    expected: &str,
) -> Result<Vec<usize>> {
    let (line, tokens) = take(lines, pos, expected)?;
    if tokens.len() != width {
        return Err(Error::Parse {
            line: *line,
            message: format!("expected {width} entries for {expected}, found {}", tokens.len()),
        });
    }
    tokens.iter().map(|t| parse_usize(t, *line)).collect()
}

/// Parse groupoid text. Paths inside the text resolve relative to
/// `base_dir`.
pub fn parse_groupoid(text: &str, base_dir: &Path) -> Result<Arc<FiniteGroupoid>> {
    parse_groupoid_nested(text, base_dir, 0)
}

/// Load a groupoid file; referenced files resolve relative to it.
pub fn load_groupoid(path: &Path) -> Result<Arc<FiniteGroupoid>> {
    load_groupoid_nested(path, 0)
}

fn load_groupoid_nested(path: &Path, depth: usize) -> Result<Arc<FiniteGroupoid>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base_dir = path.parent().map(PathBuf::from).unwrap_or_default();
    parse_groupoid_nested(&text, &base_dir, depth)
}

fn parse_groupoid_nested(
    text: &str,
    base_dir: &Path,
    depth: usize,
) -> Result<Arc<FiniteGroupoid>> {
    if depth > MAX_NESTING {
        return Err(Error::MalformedSpec(format!(
            "groupoid files nest deeper than {MAX_NESTING} levels"
        )));
    }
    let lines = meaningful_lines(text);
    let mut pos = 0usize;

    let (line, header) = take(&lines, &mut pos, "the 'groupoid v1' header")?;
    if header != &["groupoid", "v1"] {
        return Err(Error::Parse { line: *line, message: "expected 'groupoid v1' header".into() });
    }

    let (line, ctor) = take(&lines, &mut pos, "a constructor line")?;
    let ctor_line = *line;
    let spec = match ctor[0] {
        "pair" => {
            if ctor.len() != 2 {
                return Err(Error::Parse {
                    line: ctor_line,
                    message: "usage: pair <n>".into(),
                });
            }
            GroupoidSpec::Pair(parse_usize(ctor[1], ctor_line)?)
        }
        "group" => {
            if ctor.len() != 2 {
                return Err(Error::Parse {
                    line: ctor_line,
                    message: "usage: group <n>, followed by n Cayley-table rows".into(),
                });
            }
            let n = parse_usize(ctor[1], ctor_line)?;
            let mut table = Vec::with_capacity(n);
            for _ in 0..n {
                table.push(integer_row(&lines, &mut pos, n, "a Cayley-table row")?);
            }
            GroupoidSpec::Group { table }
        }
        "action" => {
            if ctor.len() != 3 {
                return Err(Error::Parse {
                    line: ctor_line,
                    message: "usage: action <group-path> <set-size>, followed by permutation rows"
                        .into(),
                });
            }
            let group = load_groupoid_nested(&base_dir.join(ctor[1]), depth + 1)?;
            let table = group.cayley_table()?;
            let set_size = parse_usize(ctor[2], ctor_line)?;
            let mut perms = Vec::with_capacity(table.len());
            for _ in 0..table.len() {
                perms.push(integer_row(&lines, &mut pos, set_size, "a permutation row")?);
            }
            GroupoidSpec::Action { table, set_size, perms }
        }
        "union" => {
            if ctor.len() < 2 {
                return Err(Error::Parse {
                    line: ctor_line,
                    message: "usage: union <path> [<path> ...]".into(),
                });
            }
            let mut parts = Vec::with_capacity(ctor.len() - 1);
            for token in &ctor[1..] {
                let part = load_groupoid_nested(&base_dir.join(token), depth + 1)?;
                parts.push(part.to_explicit_spec());
            }
            GroupoidSpec::Union(parts)
        }
        "explicit" => {
            if ctor.len() != 2 {
                return Err(Error::Parse {
                    line: ctor_line,
                    message: "usage: explicit <arrow-count>".into(),
                });
            }
            let m = parse_usize(ctor[1], ctor_line)?;
            let mut arrows = Vec::new();
            let mut units = Vec::new();
            let mut compose = Vec::new();
            let mut inverse = Vec::new();
            while pos < lines.len() {
                let (line, tokens) = take(&lines, &mut pos, "an explicit-table line")?;
                let want = |k: usize| -> Result<Vec<usize>> {
                    if tokens.len() != k + 1 {
                        return Err(Error::Parse {
                            line: *line,
                            message: format!(
                                "'{}' takes {k} integer arguments, found {}",
                                tokens[0],
                                tokens.len() - 1
                            ),
                        });
                    }
                    tokens[1..].iter().map(|t| parse_usize(t, *line)).collect()
                };
                match tokens[0] {
                    "unit" => units.push(want(1)?[0]),
                    "arrow" => {
                        let v = want(3)?;
                        arrows.push(crate::groupoid::Arrow { id: v[0], source: v[1], range: v[2] });
                    }
                    "compose" => {
                        let v = want(3)?;
                        compose.push((v[0], v[1], v[2]));
                    }
                    "inverse" => {
                        let v = want(2)?;
                        inverse.push((v[0], v[1]));
                    }
                    other => {
                        return Err(Error::Parse {
                            line: *line,
                            message: format!(
                                "unknown explicit directive '{other}' (expected unit, arrow, compose, or inverse)"
                            ),
                        })
                    }
                }
            }
            if arrows.len() != m {
                return Err(Error::Parse {
                    line: ctor_line,
                    message: format!("declared {m} arrows, found {}", arrows.len()),
                });
            }
            GroupoidSpec::Explicit { arrows, units, compose, inverse }
        }
        other => {
            return Err(Error::Parse {
                line: ctor_line,
                message: format!(
                    "unknown constructor '{other}' (expected pair, group, action, union, or explicit)"
                ),
            })
        }
    };

    if pos < lines.len() {
        return Err(Error::Parse {
            line: lines[pos].0,
            message: "unexpected content after the groupoid description".into(),
        });
    }
    build_groupoid(&spec)
}

/// Serialize a groupoid in the self-contained explicit form.
pub fn serialize_groupoid(g: &FiniteGroupoid) -> String {
    let mut out = String::from("groupoid v1\n");
    if let Some(origin) = g.origin() {
        out.push_str(&format!("# built from: {origin}\n"));
    }
    let m = g.arrow_count();
    out.push_str(&format!("explicit {m}\n"));
    for &u in g.units() {
        out.push_str(&format!("unit {u}\n"));
    }
    for a in g.arrows() {
        out.push_str(&format!("arrow {} {} {}\n", a.id, a.source, a.range));
    }
    for g1 in 0..m {
        for g2 in 0..m {
            if let Some(p) = g.compose_opt(g1, g2) {
                out.push_str(&format!("compose {g1} {g2} {p}\n"));
            }
        }
    }
    for gamma in 0..m {
        let inv = g.inverse(gamma).expect("id in range");
        out.push_str(&format!("inverse {gamma} {inv}\n"));
    }
    out
}

/// Parse element text. The groupoid path on the header line resolves
/// relative to `base_dir`.
pub fn parse_element(text: &str, base_dir: &Path) -> Result<AlgebraElement> {
    let lines = meaningful_lines(text);
    let mut pos = 0usize;
    let (line, header) = take(&lines, &mut pos, "the 'element v1 <groupoid-path>' header")?;
    if header.len() != 3 || header[0] != "element" || header[1] != "v1" {
        return Err(Error::Parse {
            line: *line,
            message: "expected 'element v1 <groupoid-path>' header".into(),
        });
    }
    let groupoid = load_groupoid(&base_dir.join(header[2]))?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); groupoid.arrow_count()];
    let mut seen = vec![false; groupoid.arrow_count()];
    while pos < lines.len() {
        let (line, tokens) = take(&lines, &mut pos, "a coefficient line")?;
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: *line,
                message: format!(
                    "expected '<arrow-id> <re> <im>', found {} tokens",
                    tokens.len()
                ),
            });
        }
        let id = parse_usize(tokens[0], *line)?;
        if id >= coeffs.len() {
            return Err(Error::Parse {
                line: *line,
                message: format!("arrow id {id} out of range (groupoid has {} arrows)", coeffs.len()),
            });
        }
        if seen[id] {
            return Err(Error::Parse {
                line: *line,
                message: format!("duplicate coefficient for arrow {id}"),
            });
        }
        seen[id] = true;
        coeffs[id] = Complex64::new(parse_f64(tokens[1], *line)?, parse_f64(tokens[2], *line)?);
    }
    AlgebraElement::from_coeffs(&groupoid, coeffs)
}

/// Load an element file; its groupoid path resolves relative to it.
pub fn load_element(path: &Path) -> Result<AlgebraElement> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base_dir = path.parent().map(PathBuf::from).unwrap_or_default();
    parse_element(&text, &base_dir)
}

/// Serialize an element against a groupoid path (written into the header
/// verbatim). Floats carry 17 significant digits and parse back exactly.
pub fn serialize_element(a: &AlgebraElement, groupoid_path: &str) -> String {
    let mut out = format!("element v1 {groupoid_path}\n");
    for gamma in a.support() {
        let c = a.coeff(gamma);
        out.push_str(&format!("{gamma} {:.16e} {:.16e}\n", c.re, c.im));
    }
    out
}
