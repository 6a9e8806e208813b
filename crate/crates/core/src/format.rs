//! Line-oriented text formats for sequences (`v -> c`), colorings (`v: c`)
//! and list assignments (`v: c1 c2 ...`). `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::color::{Color, ColorSet, Coloring, ListAssignment, Vertex, MAX_COLOR, NO_COLOR};
use crate::kernel::Step;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn vertex(line: usize, s: &str, n: usize) -> Result<Vertex, FormatError> {
    let v: Vertex = s.trim().parse().map_err(|_| err(line, format!("bad vertex {:?}", s.trim())))?;
    if v >= n {
        return Err(err(line, format!("vertex {v} out of range (n = {n})")));
    }
    Ok(v)
}

fn color(line: usize, s: &str) -> Result<Color, FormatError> {
    let c: Color = s.trim().parse().map_err(|_| err(line, format!("bad color {:?}", s.trim())))?;
    if c == NO_COLOR || c > MAX_COLOR {
        return Err(err(line, format!("color {c} out of range 1..={MAX_COLOR}")));
    }
    Ok(c)
}

pub fn parse_sequence(text: &str, n: usize) -> Result<Vec<Step>, FormatError> {
    content_lines(text)
        .map(|(line, l)| {
            let (v, c) = l.split_once("->").ok_or_else(|| err(line, "expected `v -> c`"))?;
            Ok(Step::new(vertex(line, v, n)?, color(line, c)?))
        })
        .collect()
}

pub fn write_sequence(seq: &[Step]) -> String {
    let mut s = String::new();
    for step in seq {
        let _ = writeln!(s, "{} -> {}", step.vertex, step.color);
    }
    s
}

/// Parses a coloring of vertices `0..n`; every vertex listed exactly once,
/// except vertices absent from the graph, which may be omitted.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring, FormatError> {
    let mut phi = Coloring::uncolored(n);
    for (line, l) in content_lines(text) {
        let (v, c) = l.split_once(':').ok_or_else(|| err(line, "expected `v: c`"))?;
        let v = vertex(line, v, n)?;
        if phi.get(v) != NO_COLOR {
            return Err(err(line, format!("vertex {v} colored twice")));
        }
        phi.set(v, color(line, c)?);
    }
    Ok(phi)
}

pub fn write_coloring(phi: &Coloring) -> String {
    let mut s = String::new();
    for (v, &c) in phi.as_slice().iter().enumerate() {
        if c != NO_COLOR {
            let _ = writeln!(s, "{v}: {c}");
        }
    }
    s
}

/// Parses lists for vertices `0..n`; unlisted vertices get empty lists.
pub fn parse_lists(text: &str, n: usize) -> Result<ListAssignment, FormatError> {
    let mut lists = ListAssignment::uniform(n, ColorSet::empty());
    let mut seen = vec![false; n];
    for (line, l) in content_lines(text) {
        let (v, cs) = l.split_once(':').ok_or_else(|| err(line, "expected `v: c1 c2 ...`"))?;
        let v = vertex(line, v, n)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(err(line, format!("vertex {v} listed twice")));
        }
        for c in cs.split_whitespace() {
            lists.get_mut(v).insert(color(line, c)?);
        }
    }
    Ok(lists)
}

pub fn write_lists(lists: &ListAssignment) -> String {
    let mut s = String::new();
    for (v, l) in lists.0.iter().enumerate() {
        let cs: Vec<String> = l.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "{v}: {}", cs.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_round_trip() {
        let seq = vec![Step::new(0, 3), Step::new(2, 1)];
        let text = write_sequence(&seq);
        assert_eq!(text, "0 -> 3\n2 -> 1\n");
        assert_eq!(parse_sequence(&format!("# header\n{text}\n"), 3).unwrap(), seq);
    }

    #[test]
    fn coloring_and_lists_round_trip() {
        let phi = Coloring::from_vec(vec![1, 2, 10]);
        assert_eq!(parse_coloring(&write_coloring(&phi), 3).unwrap(), phi);
        let lists = ListAssignment(vec![ColorSet::range(3), ColorSet::from_colors([4, 9])]);
        assert_eq!(parse_lists(&write_lists(&lists), 2).unwrap(), lists);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_sequence("0 -> 1\n5 -> 2\n", 3).unwrap_err().line, 2);
        assert_eq!(parse_coloring("0: 1\n0: 2\n", 3).unwrap_err().line, 2);
        assert!(parse_sequence("0 -> 0\n", 3).is_err());
    }
}
