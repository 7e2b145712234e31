//! Line-oriented curve and germ descriptions.
//!
//! ```text
//! # Steiner quartic
//! name steiner
//! degree 4
//! irreducible
//! rational
//! plucker
//! singularity puiseux (2; 3) x3
//! ```
//!
//! A proximity block lists the blown-up points in order, 1-based:
//!
//! ```text
//! singularity proximity
//!   point 1
//!   point 2 prox 1
//!   point 3 prox 1,2 exits 1
//! end
//! ```
//!
//! A tagged multiplicity sequence gives `sub` (center on two exceptional
//! curves, or the first blow-up) or `spr` for each blow-up:
//!
//! ```text
//! singularity multiplicities (2, 1, 1) tags sub,spr,sub branches 1
//! ```

use std::fmt;

use crate::inequalities::{CurveSpec, GermInput, Kodaira};
use crate::puiseux::CharSequence;
use crate::resolution::{ProximityMatrix, TaggedMultiplicities};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// A word of a line with its 1-based column.
#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    raw: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Self {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in content.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..i],
                        column: s + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push(Token {
                text: &content[s..],
                column: s + 1,
            });
        }
        Line { number, raw, tokens }
    }

    fn err(&self, column: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            msg: msg.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.raw.split('#').next().unwrap_or("").trim_end().len() + 1
    }

    /// Text of the line from token `i` on, comment removed.
    fn rest_from(&self, i: usize) -> &'a str {
        let content = self.raw.split('#').next().unwrap_or("");
        self.tokens.get(i).map_or("", |t| content[t.column - 1..].trim_end())
    }
}

fn parse_count(line: &Line, tok: Token) -> Result<u64, ParseError> {
    tok.text
        .strip_prefix('x')
        .and_then(|t| t.parse::<u64>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            line.err(
                tok.column,
                format!("expected a repetition like x3, found {:?}", tok.text),
            )
        })
}

fn parse_uint(line: &Line, tok: Token, what: &str) -> Result<u64, ParseError> {
    tok.text
        .parse::<u64>()
        .map_err(|_| line.err(tok.column, format!("expected {what}, found {:?}", tok.text)))
}

/// `(a, b, c)` starting at token `i`; returns the values and the index after it.
fn parse_paren_list(line: &Line, i: usize) -> Result<(String, usize), ParseError> {
    let first = line
        .tokens
        .get(i)
        .ok_or_else(|| line.err(line.end_column(), "expected '('"))?;
    if !first.text.starts_with('(') {
        return Err(line.err(first.column, "expected '('"));
    }
    let mut j = i;
    while j < line.tokens.len() {
        if line.tokens[j].text.ends_with(')') {
            let start = first.column - 1;
            let tok = line.tokens[j];
            let end = tok.column - 1 + tok.text.len();
            let content = line.raw.split('#').next().unwrap_or("");
            return Ok((content[start..end].to_string(), j + 1));
        }
        j += 1;
    }
    Err(line.err(line.end_column(), "missing ')'"))
}

fn parse_puiseux_at(line: &Line, i: usize) -> Result<(CharSequence, usize), ParseError> {
    let (text, next) = parse_paren_list(line, i)?;
    let seq = text
        .parse::<CharSequence>()
        .map_err(|e| line.err(line.tokens[i].column, e.to_string()))?;
    Ok((seq, next))
}

fn parse_multiplicities(line: &Line, i: usize) -> Result<(TaggedMultiplicities, usize), ParseError> {
    let (text, mut j) = parse_paren_list(line, i)?;
    let col = line.tokens[i].column;
    let multiplicities = text[1..text.len() - 1]
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| line.err(col, format!("bad multiplicity list {text}")))?;
    let mut subdivisional = None;
    let mut branches = None;
    while j < line.tokens.len() {
        let tok = line.tokens[j];
        match tok.text {
            "tags" => {
                let v = line
                    .tokens
                    .get(j + 1)
                    .ok_or_else(|| line.err(line.end_column(), "expected tag list after 'tags'"))?;
                let tags = v
                    .text
                    .split(',')
                    .map(|t| match t {
                        "sub" => Ok(true),
                        "spr" => Ok(false),
                        other => Err(line.err(v.column, format!("unknown tag {other:?}; use sub or spr"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                subdivisional = Some(tags);
                j += 2;
            }
            "branches" => {
                let v = line
                    .tokens
                    .get(j + 1)
                    .ok_or_else(|| line.err(line.end_column(), "expected a number after 'branches'"))?;
                branches = Some(parse_uint(line, *v, "a branch count")?);
                j += 2;
            }
            _ => break,
        }
    }
    let subdivisional =
        subdivisional.ok_or_else(|| line.err(col, "multiplicity input needs 'tags' (one sub/spr per blow-up)"))?;
    Ok((
        TaggedMultiplicities {
            multiplicities,
            subdivisional,
            branches: branches.unwrap_or(1),
        },
        j,
    ))
}

fn trailing_count(line: &Line, j: usize) -> Result<u64, ParseError> {
    match line.tokens.get(j) {
        None => Ok(1),
        Some(tok) => {
            let n = parse_count(line, *tok)?;
            if let Some(extra) = line.tokens.get(j + 1) {
                return Err(line.err(extra.column, format!("unexpected {:?}", extra.text)));
            }
            Ok(n)
        }
    }
}

/// Reads `point` lines up to `end`. `lines` starts after the header.
fn parse_proximity_block<'a>(
    header: &Line,
    lines: &mut impl Iterator<Item = Line<'a>>,
) -> Result<ProximityMatrix, ParseError> {
    let mut proximate = Vec::new();
    let mut exits = Vec::new();
    for line in lines.by_ref() {
        let Some(first) = line.tokens.first() else { continue };
        match first.text {
            "end" => {
                return ProximityMatrix::new(proximate, exits).map_err(|e| line.err(first.column, e.to_string()));
            }
            "point" => {
                let id_tok = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| line.err(line.end_column(), "expected a point number"))?;
                let id = parse_uint(&line, *id_tok, "a point number")? as usize;
                if id != proximate.len() + 1 {
                    return Err(line.err(
                        id_tok.column,
                        format!("points must be numbered in order; expected {}", proximate.len() + 1),
                    ));
                }
                let mut row = Vec::new();
                let mut exit = 0;
                let mut j = 2;
                while j < line.tokens.len() {
                    let key = line.tokens[j];
                    let val = line
                        .tokens
                        .get(j + 1)
                        .ok_or_else(|| line.err(line.end_column(), format!("expected a value after {:?}", key.text)))?;
                    match key.text {
                        "prox" => {
                            for t in val.text.split(',') {
                                let i: usize = t
                                    .parse()
                                    .ok()
                                    .filter(|&i| i >= 1)
                                    .ok_or_else(|| line.err(val.column, format!("bad point number {t:?}")))?;
                                row.push(i - 1);
                            }
                        }
                        "exits" => exit = parse_uint(&line, *val, "a branch count")? as u32,
                        other => return Err(line.err(key.column, format!("unknown key {other:?}; use prox or exits"))),
                    }
                    j += 2;
                }
                proximate.push(row);
                exits.push(exit);
            }
            other => {
                return Err(line.err(first.column, format!("expected 'point' or 'end', found {other:?}")));
            }
        }
    }
    Err(header.err(1, "proximity block is missing 'end'"))
}

/// Parses the part of a `singularity` line after the keyword, starting at token `i`.
fn parse_singularity<'a>(
    line: &Line,
    i: usize,
    lines: &mut impl Iterator<Item = Line<'a>>,
) -> Result<(GermInput, u64), ParseError> {
    let kind = line
        .tokens
        .get(i)
        .ok_or_else(|| line.err(line.end_column(), "expected puiseux, proximity or multiplicities"))?;
    match kind.text {
        "puiseux" => {
            let (seq, j) = parse_puiseux_at(line, i + 1)?;
            Ok((GermInput::Puiseux(seq), trailing_count(line, j)?))
        }
        "multiplicities" => {
            let (t, j) = parse_multiplicities(line, i + 1)?;
            Ok((GermInput::Tagged(t), trailing_count(line, j)?))
        }
        "proximity" => {
            let count = trailing_count(line, i + 1)?;
            let p = parse_proximity_block(line, lines)?;
            Ok((GermInput::Proximity(p), count))
        }
        t if t.starts_with('(') => {
            let (seq, j) = parse_puiseux_at(line, i)?;
            Ok((GermInput::Puiseux(seq), trailing_count(line, j)?))
        }
        other => Err(line.err(
            kind.column,
            format!("unknown singularity kind {other:?}; use puiseux, proximity or multiplicities"),
        )),
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().map(|(i, raw)| Line::new(i + 1, raw))
}

pub fn parse_curve(text: &str) -> Result<CurveSpec, ParseError> {
    let mut spec = CurveSpec::new(0);
    let mut degree_seen = false;
    let mut lines = numbered_lines(text);
    while let Some(line) = lines.next() {
        let Some(first) = line.tokens.first().copied() else {
            continue;
        };
        let no_args = |line: &Line| -> Result<(), ParseError> {
            match line.tokens.get(1) {
                Some(t) => Err(line.err(t.column, format!("unexpected {:?}", t.text))),
                None => Ok(()),
            }
        };
        match first.text {
            "degree" => {
                let tok = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| line.err(line.end_column(), "expected the degree"))?;
                let d = parse_uint(&line, *tok, "a positive degree")?;
                if d == 0 {
                    return Err(line.err(tok.column, "degree must be positive"));
                }
                if degree_seen {
                    return Err(line.err(first.column, "degree given twice"));
                }
                spec.degree = d;
                degree_seen = true;
                if let Some(t) = line.tokens.get(2) {
                    return Err(line.err(t.column, format!("unexpected {:?}", t.text)));
                }
            }
            "name" => {
                let rest = line.rest_from(1);
                if rest.is_empty() {
                    return Err(line.err(line.end_column(), "expected a name"));
                }
                spec.name = Some(rest.to_string());
            }
            "irreducible" | "reducible" => {
                no_args(&line)?;
                spec.irreducible = Some(first.text == "irreducible");
            }
            "rational" => {
                no_args(&line)?;
                spec.rational = Some(true);
            }
            "plucker" => {
                no_args(&line)?;
                spec.plucker = true;
            }
            "kodaira" => {
                let tok = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| line.err(line.end_column(), "expected general, nonnegative or unknown"))?;
                spec.kodaira = Some(match tok.text {
                    "general" => Kodaira::GeneralType,
                    "nonnegative" => Kodaira::NonNegative,
                    "unknown" => Kodaira::Unknown,
                    other => {
                        return Err(line.err(tok.column, format!("unknown Kodaira status {other:?}")));
                    }
                });
            }
            "singularity" => {
                let germ = parse_singularity(&line, 1, &mut lines)?;
                spec.singularities.push(germ);
            }
            other => {
                return Err(line.err(first.column, format!("unknown keyword {other:?}")));
            }
        }
    }
    if !degree_seen {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            msg: "missing 'degree' line".into(),
        });
    }
    Ok(spec)
}

/// One germ: a bare `(m; m1, ...)`, or a single singularity block with or
/// without the leading `singularity` keyword.
pub fn parse_germ(text: &str) -> Result<GermInput, ParseError> {
    let mut lines = numbered_lines(text);
    let mut found: Option<GermInput> = None;
    while let Some(line) = lines.next() {
        let Some(first) = line.tokens.first().copied() else {
            continue;
        };
        if found.is_some() {
            return Err(line.err(first.column, "expected a single germ"));
        }
        let start = usize::from(first.text == "singularity");
        let (germ, count) = parse_singularity(&line, start, &mut lines)?;
        if count != 1 {
            return Err(line.err(first.column, "a germ cannot carry a repetition count"));
        }
        found = Some(germ);
    }
    found.ok_or(ParseError {
        line: 1,
        column: 1,
        msg: "no germ given".into(),
    })
}

/// A proximity structure as a `singularity proximity` block that
/// [`parse_germ`] reads back.
pub fn proximity_text(p: &ProximityMatrix) -> String {
    let mut s = String::from("singularity proximity\n");
    for j in 0..p.n() {
        s.push_str(&format!("  point {}", j + 1));
        let prox = p.proximate(j);
        if !prox.is_empty() {
            let list: Vec<String> = prox.iter().map(|i| (i + 1).to_string()).collect();
            s.push_str(&format!(" prox {}", list.join(",")));
        }
        if p.exits()[j] > 0 {
            s.push_str(&format!(" exits {}", p.exits()[j]));
        }
        s.push('\n');
    }
    s.push_str("end\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curve_file() {
        let text = "\
# a comment
name three cusps
degree 4
irreducible
rational
plucker
singularity puiseux (2; 3) x3
singularity proximity
  point 1
  point 2 prox 1 exits 2   # tacnode
end
singularity multiplicities (2, 1, 1) tags sub,spr,sub branches 1
";
        let c = parse_curve(text).unwrap();
        assert_eq!(c.degree, 4);
        assert_eq!(c.name.as_deref(), Some("three cusps"));
        assert_eq!((c.irreducible, c.rational, c.plucker), (Some(true), Some(true), true));
        assert_eq!(c.singularities.len(), 3);
        assert_eq!(c.singularities[0], (GermInput::Puiseux("(2;3)".parse().unwrap()), 3));
        let GermInput::Proximity(p) = &c.singularities[1].0 else {
            panic!()
        };
        assert_eq!(p.exits(), &[0, 2]);
        let GermInput::Tagged(t) = &c.singularities[2].0 else {
            panic!()
        };
        assert_eq!(t.subdivisional, vec![true, false, true]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_curve("degree 4\nsingularity puiseux (2; 4)\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 21));
        assert!(e.msg.contains("divides"), "{e}");

        let e = parse_curve("degree 4\n  frobnicate\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));

        let e = parse_curve("singularity puiseux (2; 3)\n").unwrap_err();
        assert!(e.msg.contains("degree"));

        let e = parse_curve("degree 4\nsingularity proximity\n point 2\nend\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));

        let e = parse_curve("degree 4\nsingularity proximity\n point 1 exits 2\n").unwrap_err();
        assert!(e.msg.contains("end"));

        let e = parse_curve("degree 4\nsingularity puiseux (2; 3) 3\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 28));
    }

    #[test]
    fn parses_single_germs() {
        assert_eq!(
            parse_germ("(2; 3)").unwrap(),
            GermInput::Puiseux("(2;3)".parse().unwrap())
        );
        assert_eq!(
            parse_germ("puiseux (4; 6, 7)\n").unwrap(),
            GermInput::Puiseux("(4;6,7)".parse().unwrap())
        );
        let g = parse_germ("singularity proximity\npoint 1 exits 2\nend\n").unwrap();
        assert!(matches!(g, GermInput::Proximity(_)));
        assert!(parse_germ("(2; 3)\n(3; 4)").is_err());
        assert!(parse_germ("(2; 4)").is_err());
    }
}
