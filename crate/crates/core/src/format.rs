//! Line-oriented text formats for projections and diagrams.
//!
//! ```text
//! # comment
//! vertices 6
//! edge 0 1 17 R
//! ...
//! over 0 1
//! ```
//!
//! Dart ids are `4 * vertex + slot`, slots counterclockwise; slot `k` is
//! opposite slot `k + 2`. `over v 1` puts the slot-1/3 strand on top.

use std::fmt::Write as _;

use thiserror::Error;

use crate::planar_map::{Dart, MapError, PlanarMap};
use crate::projection::{Colour, Projection, ProjectionError};
use crate::resolver::{Diagram, Resolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{}invalid projection: {source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Validation {
        line: Option<usize>,
        #[source]
        source: ProjectionError,
    },
}

fn parse_err(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        reason: reason.into(),
    }
}

struct Parsed {
    projection: Projection,
    over: Vec<(usize, usize, bool)>,
}

fn parse_number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn parse_text(text: &str, allow_over: bool) -> Result<Parsed, FormatError> {
    let mut vertices: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize, Colour, usize)> = Vec::new();
    let mut over: Vec<(usize, usize, bool)> = Vec::new();
    let mut dart_line: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap();
        match keyword {
            "vertices" => {
                if vertices.is_some() {
                    return Err(parse_err(line, "duplicate `vertices` header"));
                }
                let v = parse_number(toks.next(), line, "vertex count")?;
                if v == 0 {
                    return Err(parse_err(line, "a projection needs at least one crossing"));
                }
                vertices = Some(v);
                dart_line = vec![0; 4 * v];
            }
            "edge" => {
                let v = vertices.ok_or_else(|| parse_err(line, "`edge` before `vertices` header"))?;
                let id = parse_number(toks.next(), line, "edge id")?;
                let a = parse_number(toks.next(), line, "dart")?;
                let b = parse_number(toks.next(), line, "dart")?;
                let c = toks.next().ok_or_else(|| parse_err(line, "missing colour"))?;
                let colour = Colour::from_letter(c)
                    .ok_or_else(|| parse_err(line, format!("invalid colour `{c}`, expected B, R or G")))?;
                for d in [a, b] {
                    if d >= 4 * v {
                        return Err(parse_err(
                            line,
                            format!("dart {d} refers to vertex {} but there are only {v} vertices", d / 4),
                        ));
                    }
                    if dart_line[d] != 0 {
                        return Err(parse_err(
                            line,
                            format!(
                                "dart {d} already used on line {}; vertex {} would carry more than 4 darts",
                                dart_line[d],
                                d / 4
                            ),
                        ));
                    }
                    dart_line[d] = line;
                }
                if a == b {
                    return Err(parse_err(line, format!("dart {a} is paired with itself")));
                }
                edges.push((id, a, b, colour, line));
            }
            "over" => {
                if !allow_over {
                    return Err(parse_err(line, "`over` lines are only allowed in diagram files"));
                }
                let v = parse_number(toks.next(), line, "vertex")?;
                let bit = parse_number(toks.next(), line, "over bit")?;
                if bit > 1 {
                    return Err(parse_err(line, format!("over bit must be 0 or 1, found {bit}")));
                }
                over.push((v, line, bit == 1));
            }
            other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let v = vertices.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `vertices` header"))?;
    let last = text.lines().count().max(1);
    if let Some(d) = dart_line.iter().position(|&l| l == 0) {
        return Err(parse_err(
            last,
            format!("vertex {} has fewer than 4 darts (dart {d} is unused)", d / 4),
        ));
    }
    let mut by_id: Vec<Option<([Dart; 2], Colour)>> = vec![None; edges.len()];
    for &(id, a, b, c, line) in &edges {
        if id >= edges.len() {
            return Err(parse_err(
                line,
                format!("edge id {id} out of range, ids must be 0..{}", edges.len()),
            ));
        }
        if by_id[id].is_some() {
            return Err(parse_err(line, format!("duplicate edge id {id}")));
        }
        by_id[id] = Some(([Dart(a), Dart(b)], c));
    }
    let (pairs, colours): (Vec<[Dart; 2]>, Vec<Colour>) = by_id.into_iter().map(Option::unwrap).unzip();
    let edge_line = |e: usize| edges.iter().find(|x| x.0 == e).map(|x| x.4);
    let map = PlanarMap::from_edges(v, pairs).map_err(|e| {
        let line = match &e {
            MapError::NotInvolution(d) | MapError::DartOutOfRange(d) => {
                dart_line.get(*d).copied().filter(|&l| l != 0)
            }
            MapError::Bridge(e) => edge_line(*e),
            _ => None,
        };
        FormatError::Validation {
            line,
            source: ProjectionError::Map(e),
        }
    })?;
    let projection = Projection::new(map, colours).map_err(|e| {
        let line = match &e {
            ProjectionError::ColourNotStraight { vertex } => {
                dart_line.get(4 * vertex).copied().filter(|&l| l != 0)
            }
            _ => None,
        };
        FormatError::Validation { line, source: e }
    })?;
    Ok(Parsed { projection, over })
}

pub fn parse_projection(text: &str) -> Result<Projection, FormatError> {
    parse_text(text, false).map(|p| p.projection)
}

pub fn serialize_projection(p: &Projection) -> String {
    let mut out = String::new();
    let map = p.map();
    writeln!(out, "vertices {}", map.vertex_count()).unwrap();
    for (id, &[a, b]) in map.edges().iter().enumerate() {
        writeln!(out, "edge {id} {a} {b} {}", p.colour(id)).unwrap();
    }
    out
}

pub fn parse_diagram(text: &str) -> Result<Diagram, FormatError> {
    let parsed = parse_text(text, true)?;
    let n = parsed.projection.vertex_count();
    let mut bits: Vec<Option<bool>> = vec![None; n];
    for &(v, line, bit) in &parsed.over {
        if v >= n {
            return Err(parse_err(line, format!("vertex {v} out of range")));
        }
        if bits[v].is_some() {
            return Err(parse_err(line, format!("duplicate `over` line for vertex {v}")));
        }
        bits[v] = Some(bit);
    }
    if let Some(v) = bits.iter().position(Option::is_none) {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("missing `over` line for vertex {v}"),
        ));
    }
    let resolution = Resolution::new(bits.into_iter().map(Option::unwrap).collect());
    Ok(Diagram::new(parsed.projection, resolution).expect("resolution length checked"))
}

pub fn serialize_diagram(d: &Diagram) -> String {
    let mut out = serialize_projection(d.projection());
    for (v, bit) in d.resolution().bits().iter().enumerate() {
        writeln!(out, "over {v} {}", u8::from(*bit)).unwrap();
    }
    out
}

/// Splits a stream of blank-line separated records.
pub fn split_records(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.trim().is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            cur.clear();
        } else {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_file_parses_to_fixture() {
        let p = parse_projection(fixtures::KRUPP_TEXT).unwrap();
        assert_eq!(p, fixtures::krupp());
        assert_eq!(p.vertex_count(), 6);
    }

    #[test]
    fn round_trip_is_canonical() {
        let text = "# shuffled\nvertices 6\n\n".to_string()
            + &fixtures::NON_KRUPP_TEXT
                .lines()
                .filter(|l| l.starts_with("edge"))
                .rev()
                .collect::<Vec<_>>()
                .join("\n");
        let p = parse_projection(&text).unwrap();
        let canonical = serialize_projection(&p);
        assert_eq!(parse_projection(&canonical).unwrap(), p);
        assert_eq!(serialize_projection(&parse_projection(&canonical).unwrap()), canonical);
        assert!(canonical.starts_with("vertices 6\nedge 0 "));
    }

    #[test]
    fn fifth_dart_at_vertex_is_a_parse_error() {
        let mut text = String::from(fixtures::KRUPP_TEXT);
        text.push_str("edge 12 1 2 B\n");
        match parse_projection(&text) {
            Err(FormatError::Parse { line, reason }) => {
                assert_eq!(line, 15);
                assert!(reason.contains("more than 4 darts"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "vertices 1\nedge 0 0 1 B\nedge 1 2 3 Q\n";
        assert_eq!(
            parse_projection(bad),
            Err(FormatError::Parse {
                line: 3,
                reason: "invalid colour `Q`, expected B, R or G".into()
            })
        );
        let torus = "vertices 1\nedge 0 0 2 B\nedge 1 1 3 B\n";
        assert!(matches!(
            parse_projection(torus),
            Err(FormatError::Validation {
                source: ProjectionError::Map(MapError::NotSpherical { .. }),
                ..
            })
        ));
        assert!(matches!(
            parse_projection("vertices 0\n"),
            Err(FormatError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn diagram_round_trip() {
        let text = format!("{}over 0 1\nover 1 0\nover 2 0\nover 3 1\nover 4 1\nover 5 0\n", fixtures::KRUPP_TEXT);
        let d = parse_diagram(&text).unwrap();
        let s = serialize_diagram(&d);
        assert_eq!(parse_diagram(&s).unwrap(), d);
        assert_eq!(serialize_diagram(&parse_diagram(&s).unwrap()), s);
    }

    #[test]
    fn diagram_needs_one_over_line_per_vertex() {
        let text = format!("{}over 0 1\nover 0 0\n", fixtures::KRUPP_TEXT);
        assert!(matches!(parse_diagram(&text), Err(FormatError::Parse { .. })));
        let text = format!("{}over 0 1\n", fixtures::KRUPP_TEXT);
        assert!(matches!(parse_diagram(&text), Err(FormatError::Parse { .. })));
        assert!(parse_projection(&format!("{}over 0 1\n", fixtures::KRUPP_TEXT)).is_err());
    }

    #[test]
    fn records_split_on_blank_lines() {
        let stream = format!("{}\n\n{}", fixtures::KRUPP_TEXT, fixtures::NON_KRUPP_TEXT);
        let recs = split_records(&stream);
        assert_eq!(recs.len(), 2);
        assert_eq!(parse_projection(&recs[1]).unwrap(), fixtures::non_krupp());
    }
}
