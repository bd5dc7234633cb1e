//! Text formats.
//!
//! Instance file:
//! ```text
//! ULAM v1 mono            ULAM v1 bi
//! n L tau                 nx ny L tau
//! <n permutations>        <nx permutations of X, then ny of Y>
//! ```
//! Permutations are space-separated symbols over `1..=L`.
//!
//! Vector file: `OV v1 <eeee|eaee>`, then for each of A, B, C, E a `k d`
//! line followed by `k` lines of `d` characters over `{0,1}`.
//!
//! Graph file: `GRAPH v1`, `n m`, then `m` lines `u v` over `1..=n`.
//!
//! Parsing only accepts the canonical spelling (single spaces, no trailing
//! blanks, final newline), so `serialize(parse(text)) == text`.

use thiserror::Error;
use ulam_core::gadgets::{BinaryVector, VectorSet};
use ulam_core::oracles::QuantifierPattern;
use ulam_core::reductions::maxcut::Graph;
use ulam_core::reductions::ov::OvSets;
use ulam_core::reductions::ReducedInstance;
use ulam_core::{BichromaticInstance, Perm, UlamInstance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of file after line {0}")]
    Truncated(usize),
    #[error("trailing content after line {0}")]
    Trailing(usize),
    #[error("{0}")]
    Invalid(String),
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Result<Self, FormatError> {
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| FormatError::Syntax { line: text.lines().count().max(1), msg: "missing final newline".into() })?;
        Ok(Self { lines: body.split('\n').collect(), pos: 0 })
    }

    fn next(&mut self) -> Result<(usize, &'a str), FormatError> {
        let line = self.lines.get(self.pos).copied().ok_or(FormatError::Truncated(self.pos))?;
        self.pos += 1;
        Ok((self.pos, line))
    }

    fn finish(&self) -> Result<(), FormatError> {
        if self.pos == self.lines.len() {
            Ok(())
        } else {
            Err(FormatError::Trailing(self.pos))
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Splits a canonical line of unsigned integers.
fn numbers(line: usize, text: &str, count: Option<usize>) -> Result<Vec<u64>, FormatError> {
    let mut out = Vec::new();
    for tok in text.split(' ') {
        let canonical = !tok.is_empty() && tok.bytes().all(|b| b.is_ascii_digit()) && (tok == "0" || !tok.starts_with('0'));
        if !canonical {
            return Err(syntax(line, format!("expected an unsigned integer, found {tok:?}")));
        }
        out.push(tok.parse().map_err(|e| syntax(line, format!("{tok:?}: {e}")))?);
    }
    if let Some(c) = count {
        if out.len() != c {
            return Err(syntax(line, format!("expected {c} numbers, found {}", out.len())));
        }
    }
    Ok(out)
}

fn perm_line(line: usize, text: &str, len: usize) -> Result<Perm, FormatError> {
    let raw = if len == 0 && text.is_empty() { Vec::new() } else { numbers(line, text, Some(len))? };
    if raw.iter().any(|&s| s == 0 || s > len as u64) {
        return Err(syntax(line, format!("symbols must lie in 1..={len}")));
    }
    Perm::new(raw.into_iter().map(|s| s as u32).collect()).map_err(|e| syntax(line, e.to_string()))
}

fn perm_text(p: &Perm) -> String {
    p.as_slice().iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn header<'a>(lines: &mut Lines<'a>, prefix: &str) -> Result<&'a str, FormatError> {
    let (n, h) = lines.next()?;
    h.strip_prefix(prefix).ok_or_else(|| syntax(n, format!("expected header starting with {prefix:?}")))
}

pub fn parse_instance(text: &str) -> Result<ReducedInstance, FormatError> {
    let mut lines = Lines::new(text)?;
    let kind = header(&mut lines, "ULAM v1 ")?;
    let out = match kind {
        "mono" => {
            let (ln, counts) = lines.next()?;
            let c = numbers(ln, counts, Some(3))?;
            let (n, l, tau) = (c[0] as usize, c[1] as usize, c[2]);
            let perms = (0..n)
                .map(|_| lines.next().and_then(|(ln, t)| perm_line(ln, t, l)))
                .collect::<Result<Vec<_>, _>>()?;
            ReducedInstance::Mono(UlamInstance::new(perms, tau).map_err(|e| FormatError::Invalid(e.to_string()))?)
        }
        "bi" => {
            let (ln, counts) = lines.next()?;
            let c = numbers(ln, counts, Some(4))?;
            let (nx, ny, l, tau) = (c[0] as usize, c[1] as usize, c[2] as usize, c[3]);
            let mut read = |k: usize| {
                (0..k)
                    .map(|_| lines.next().and_then(|(ln, t)| perm_line(ln, t, l)))
                    .collect::<Result<Vec<_>, _>>()
            };
            let x = read(nx)?;
            let y = read(ny)?;
            ReducedInstance::Bi(BichromaticInstance::new(x, y, tau).map_err(|e| FormatError::Invalid(e.to_string()))?)
        }
        other => return Err(syntax(1, format!("unknown instance kind {other:?}"))),
    };
    lines.finish()?;
    Ok(out)
}

/// Serializes an instance. Members must be over `1..=L`; non-contiguous
/// alphabets are normalized first.
pub fn serialize_instance(inst: &ReducedInstance) -> String {
    let mut out = String::new();
    let mut push = |p: &Perm| {
        let p = if p.is_contiguous() { p.clone() } else { p.normalized() };
        out.push_str(&perm_text(&p));
        out.push('\n');
    };
    let mut text = String::new();
    match inst {
        ReducedInstance::Mono(m) => {
            text.push_str(&format!("ULAM v1 mono\n{} {} {}\n", m.len(), m.length(), m.tau()));
            m.perms().iter().for_each(&mut push);
        }
        ReducedInstance::Bi(b) => {
            text.push_str(&format!("ULAM v1 bi\n{} {} {} {}\n", b.x.len(), b.y.len(), b.length(), b.tau));
            b.x.iter().chain(&b.y).for_each(&mut push);
        }
    }
    text + &out
}

/// A vector file: pattern plus the four sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFile {
    pub pattern: QuantifierPattern,
    pub sets: [VectorSet; 4],
}

impl VectorFile {
    pub fn to_ov_sets(&self) -> Result<OvSets, String> {
        let [a, b, c, e] = self.sets.clone();
        OvSets::new(a, b, c, e).map_err(|e| e.to_string())
    }
}

pub fn parse_vectors(text: &str) -> Result<VectorFile, FormatError> {
    let mut lines = Lines::new(text)?;
    let tag = header(&mut lines, "OV v1 ")?;
    let pattern = QuantifierPattern::from_tag(tag).ok_or_else(|| syntax(1, format!("unknown pattern {tag:?}")))?;
    let mut sets = Vec::with_capacity(4);
    for _ in 0..4 {
        let (ln, counts) = lines.next()?;
        let c = numbers(ln, counts, Some(2))?;
        let (k, d) = (c[0] as usize, c[1] as usize);
        let mut vectors = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, row) = lines.next()?;
            if row.len() != d {
                return Err(syntax(ln, format!("expected {d} bits")));
            }
            vectors.push(row.parse::<BinaryVector>().map_err(|e| syntax(ln, e.to_string()))?);
        }
        sets.push(VectorSet::with_dim(d, vectors).map_err(|e| syntax(ln, e.to_string()))?);
    }
    lines.finish()?;
    let dim = sets[0].dim();
    if sets.iter().any(|s| s.dim() != dim) {
        return Err(FormatError::Invalid("vector sets have different dimensions".into()));
    }
    let sets: [VectorSet; 4] = sets.try_into().expect("four sets");
    Ok(VectorFile { pattern, sets })
}

pub fn serialize_vectors(file: &VectorFile) -> String {
    let mut out = format!("OV v1 {}\n", file.pattern.tag());
    for set in &file.sets {
        out.push_str(&format!("{} {}\n", set.len(), set.dim()));
        for v in set.iter() {
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = Lines::new(text)?;
    let (ln, h) = lines.next()?;
    if h != "GRAPH v1" {
        return Err(syntax(ln, "expected header \"GRAPH v1\""));
    }
    let (ln, counts) = lines.next()?;
    let c = numbers(ln, counts, Some(2))?;
    let (n, m) = (c[0] as usize, c[1] as usize);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, row) = lines.next()?;
        let e = numbers(ln, row, Some(2))?;
        edges.push((e[0] as u32, e[1] as u32));
    }
    lines.finish()?;
    Graph::new(n, edges).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("GRAPH v1\n{} {}\n", g.vertex_count(), g.edges().len());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let mono = "ULAM v1 mono\n3 3 1\n1 2 3\n2 3 1\n3 1 2\n";
        assert_eq!(serialize_instance(&parse_instance(mono).unwrap()), mono);
        let bi = "ULAM v1 bi\n1 2 3 2\n1 2 3\n2 3 1\n3 1 2\n";
        assert_eq!(serialize_instance(&parse_instance(bi).unwrap()), bi);
    }

    #[test]
    fn instance_rejects_non_canonical() {
        for bad in [
            "ULAM v1 mono\n1 2 0\n1  2\n",
            "ULAM v1 mono\n1 2 0\n1 2 \n",
            "ULAM v1 mono\n1 2 0\n1 2",
            "ULAM v1 mono\n1 2 0\n01 2\n",
            "ULAM v1 mono\n1 2 0\n1 3\n",
            "ULAM v1 mono\n1 2 0\n1 1\n",
            "ULAM v1 mono\n2 2 0\n1 2\n",
            "ULAM v1 mono\n1 2 0\n1 2\n2 1\n",
            "ULAM v1 tri\n1 2 0\n1 2\n",
            "",
        ] {
            assert!(parse_instance(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn vectors_round_trip() {
        let text = "OV v1 eaee\n2 3\n010\n111\n0 3\n1 3\n000\n1 3\n101\n";
        let parsed = parse_vectors(text).unwrap();
        assert_eq!(parsed.pattern, QuantifierPattern::ExistsForallExistsExists);
        assert_eq!(parsed.sets[1].len(), 0);
        assert_eq!(serialize_vectors(&parsed), text);
        assert!(parse_vectors("OV v1 eeee\n1 2\n01\n1 3\n010\n1 2\n00\n1 2\n00\n").is_err());
        assert!(parse_vectors("OV v1 eeee\n1 2\n012\n").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let text = "GRAPH v1\n3 3\n1 2\n2 3\n1 3\n";
        assert_eq!(serialize_graph(&parse_graph(text).unwrap()), text);
        assert!(parse_graph("GRAPH v1\n2 1\n1 1\n").is_err());
        assert!(parse_graph("GRAPH v1\n2 2\n1 2\n").is_err());
    }
}
