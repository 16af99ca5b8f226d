//! Line-based text formats: OREP for representations and ODRAW for grid
//! drawings. Serialization is canonical: records are written in id order.

use std::fmt::Write as _;

use crate::drawing::GridDrawing;
use crate::rep::{Dart, Direction, OctiRep};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    /// Next non-blank line as whitespace-separated tokens.
    fn next_record(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        while let Some((_, line)) = self.inner.peek() {
            match line.split_whitespace().next() {
                Some(tok) => return Some(tok),
                None => {
                    self.inner.next();
                }
            }
        }
        None
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

fn expect_header(lines: &mut Lines<'_>, magic: &str) -> Result<(), ParseError> {
    match lines.next_record() {
        Some((_, t)) if t == [magic, "1"] => Ok(()),
        Some((l, _)) => Err(err(l, format!("expected `{magic} 1`"))),
        None => Err(err(1, format!("empty input, expected `{magic} 1`"))),
    }
}

/// Parses OREP text.
pub fn parse_rep(text: &str) -> Result<OctiRep, ParseError> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, "orep")?;
    let n: usize = match lines.next_record() {
        Some((l, t)) if t.len() == 2 && t[0] == "vertices" => num(l, t[1], "vertex count")?,
        Some((l, _)) => return Err(err(l, "expected `vertices <n>`")),
        None => return Err(err(lines.last + 1, "missing `vertices` record")),
    };

    let mut darts: Vec<Dart> = Vec::new();
    while lines.peek_keyword() == Some("edge") {
        let (l, t) = lines.next_record().expect("peeked");
        if t.len() != 5 {
            return Err(err(l, "expected `edge <id> <u> <v> <dir>`"));
        }
        let id: usize = num(l, t[1], "edge id")?;
        if id != darts.len() / 2 {
            return Err(err(
                l,
                format!("edge ids must be consecutive, expected {}", darts.len() / 2),
            ));
        }
        let u: usize = num(l, t[2], "vertex")?;
        let v: usize = num(l, t[3], "vertex")?;
        if u >= n || v >= n {
            return Err(err(l, format!("edge {id} references a vertex outside 0..{n}")));
        }
        if u == v {
            return Err(err(l, format!("edge {id} is a self-loop")));
        }
        let dir = Direction::new(num(l, t[4], "direction")?).ok_or_else(|| err(l, "direction must be in 0..8"))?;
        darts.push(Dart { origin: u, dir });
        darts.push(Dart {
            origin: v,
            dir: dir.opposite(),
        });
    }

    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; n];
    while lines.peek_keyword() == Some("rot") {
        let (l, t) = lines.next_record().expect("peeked");
        if t.len() < 2 {
            return Err(err(l, "expected `rot <v> <e_1> ...`"));
        }
        let v: usize = num(l, t[1], "vertex")?;
        if v >= n {
            return Err(err(l, format!("rotation for vertex {v} outside 0..{n}")));
        }
        if rotation[v].is_some() {
            return Err(err(l, format!("duplicate rotation for vertex {v}")));
        }
        let mut rot = Vec::with_capacity(t.len() - 2);
        for tok in &t[2..] {
            let e: usize = num(l, tok, "edge id")?;
            if 2 * e >= darts.len() {
                return Err(err(l, format!("rotation lists unknown edge {e}")));
            }
            let d = if darts[2 * e].origin == v {
                2 * e
            } else if darts[2 * e + 1].origin == v {
                2 * e + 1
            } else {
                return Err(err(
                    l,
                    format!("rotation at vertex {v} lists edge {e} not incident to it"),
                ));
            };
            rot.push(d);
        }
        rotation[v] = Some(rot);
    }

    let outer = match lines.next_record() {
        Some((l, t)) if t.len() == 3 && t[0] == "outer" => {
            let u: usize = num(l, t[1], "vertex")?;
            let v: usize = num(l, t[2], "vertex")?;
            // The face on the left of u -> v contains the dart v -> u.
            let d = (0..darts.len())
                .find(|&d| darts[d].origin == v && darts[d ^ 1].origin == u)
                .ok_or_else(|| err(l, format!("no edge between {u} and {v}")))?;
            Some(d)
        }
        Some((l, t)) if t[0] == "outer" => return Err(err(l, "expected `outer <u> <v>`")),
        Some((l, t)) => return Err(err(l, format!("unexpected record `{}`", t[0]))),
        None if darts.is_empty() => None,
        None => return Err(err(lines.last + 1, "missing `outer` record")),
    };
    if let Some((l, _)) = lines.next_record() {
        return Err(err(l, "trailing content after `outer`"));
    }

    let rotation = rotation.into_iter().map(Option::unwrap_or_default).collect();
    Ok(OctiRep::from_parts(n, darts, rotation, outer))
}

/// Writes canonical OREP text.
pub fn serialize_rep(rep: &OctiRep) -> String {
    let mut s = String::new();
    s.push_str("orep 1\n");
    let _ = writeln!(s, "vertices {}", rep.vertex_count());
    for e in 0..rep.edge_count() {
        let (u, v, dir) = rep.edge(e);
        let _ = writeln!(s, "edge {e} {u} {v} {dir}");
    }
    for v in 0..rep.vertex_count() {
        let _ = write!(s, "rot {v}");
        for &d in rep.rotation(v) {
            let _ = write!(s, " {}", d / 2);
        }
        s.push('\n');
    }
    if let Some(d) = rep.outer_dart() {
        let _ = writeln!(s, "outer {} {}", rep.head(d), rep.origin(d));
    }
    s
}

/// Parses ODRAW text. Every vertex id in `0..k` must appear exactly once.
pub fn parse_drawing(text: &str) -> Result<GridDrawing, ParseError> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, "odraw")?;
    let mut coords: Vec<Option<(i64, i64)>> = Vec::new();
    while let Some((l, t)) = lines.next_record() {
        if t.len() != 3 {
            return Err(err(l, "expected `<v> <x> <y>`"));
        }
        let v: usize = num(l, t[0], "vertex")?;
        let x: i64 = num(l, t[1], "coordinate")?;
        let y: i64 = num(l, t[2], "coordinate")?;
        if v >= coords.len() {
            coords.resize(v + 1, None);
        }
        if coords[v].replace((x, y)).is_some() {
            return Err(err(l, format!("duplicate vertex {v}")));
        }
    }
    let coords: Option<Vec<(i64, i64)>> = coords.into_iter().collect();
    coords
        .map(GridDrawing::new)
        .ok_or_else(|| err(lines.last, "vertex ids are not contiguous"))
}

/// Writes canonical ODRAW text.
pub fn serialize_drawing(drw: &GridDrawing) -> String {
    let mut s = String::from("odraw 1\n");
    for (v, (x, y)) in drw.coords().iter().enumerate() {
        let _ = writeln!(s, "{v} {x} {y}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rep::validate_rep;

    const SQUARE: &str = "orep 1\nvertices 4\nedge 0 0 1 0\nedge 1 1 2 2\nedge 2 2 3 4\nedge 3 3 0 6\nrot 0 0 3\nrot 1 1 0\nrot 2 2 1\nrot 3 2 3\nouter 1 0\n";

    #[test]
    fn parses_unit_square() {
        let rep = parse_rep(SQUARE).unwrap();
        assert_eq!(rep.vertex_count(), 4);
        assert_eq!(rep.dart_count(), 8);
        assert!(validate_rep(&rep).is_empty());
        assert_eq!(rep, fixtures::unit_square());
        assert_eq!(serialize_rep(&rep), SQUARE);
    }

    #[test]
    fn dangling_vertex_is_a_parse_error() {
        let text = SQUARE.replace("edge 3 3 0 6", "edge 3 3 9 6");
        let e = parse_rep(&text).unwrap_err();
        assert_eq!(e.line, 6);
    }

    #[test]
    fn rotation_with_foreign_edge_is_rejected() {
        let text = SQUARE.replace("rot 0 0 3", "rot 0 0 1");
        let e = parse_rep(&text).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.message.contains("not incident"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        assert_eq!(parse_rep("orep 2\n").unwrap_err().line, 1);
        assert_eq!(parse_rep("orep 1\nvertices x\n").unwrap_err().line, 2);
        let e = parse_rep(&SQUARE.replace("outer 1 0", "outer 0 2")).unwrap_err();
        assert_eq!(e.line, 11);
    }

    #[test]
    fn drawing_round_trip() {
        let text = "odraw 1\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n";
        let drw = parse_drawing(text).unwrap();
        assert_eq!(drw.coords()[2], (1, 1));
        assert_eq!(serialize_drawing(&drw), text);
        assert!(parse_drawing("odraw 1\n0 0 0\n0 1 1\n").is_err());
        assert!(parse_drawing("odraw 1\n1 0 0\n").is_err());
    }
}
