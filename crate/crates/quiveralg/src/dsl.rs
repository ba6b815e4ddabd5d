//! Line-oriented DSL for presentations.
//!
//! ```text
//! # comments run to end of line
//! vertex 1 2 3 4
//! arrow a: 1 -> 2
//! loop f: 2 special
//! relations
//! zero b*a
//! zero c*b*f*a
//! rel b+a+ + b-a-              # words separated by a lone `+`, coefficient optional
//! idem f
//! ```
//!
//! Composition in relation words is right-to-left: `b*a` denotes "apply `a`,
//! then `b`". Identifiers may carry `+`/`-` affixes (`a+`, `+b`, `+a-`), so
//! the `+` separating terms of a `rel` line must stand alone, and `->` in an
//! `arrow` line must be surrounded by whitespace.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::presentation::{Presentation, Provenance, Relation};
use crate::quiver::{Arrow, ArrowId, Path, Quiver, VertexId};

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    tokens
}

fn parse_coefficient(tok: &str) -> Option<BigRational> {
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(num, den))
}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn syntax(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn semantic(&self, err: Error) -> Error {
        match err {
            Error::Invalid(message) => Error::Semantic {
                line: self.line,
                message,
            },
            other => other,
        }
    }
}

/// Parses DSL source into a validated presentation.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut special: BTreeSet<ArrowId> = BTreeSet::new();
    let mut relation_lines: Vec<(LineCtx, Vec<String>, Vec<usize>)> = Vec::new();
    let mut in_relations = false;

    for (idx, raw) in text.lines().enumerate() {
        let ctx = LineCtx { line: idx + 1 };
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let head = tokens[0].text;
        match head {
            "vertex" | "arrow" | "loop" => {
                if in_relations {
                    return Err(ctx.syntax(
                        tokens[0].column,
                        format!("`{head}` declaration after the `relations` section"),
                    ));
                }
            }
            "relations" => {
                if tokens.len() > 1 {
                    return Err(ctx.syntax(tokens[1].column, "unexpected token after `relations`"));
                }
                in_relations = true;
                continue;
            }
            "zero" | "rel" | "idem" => {
                if !in_relations {
                    return Err(ctx.syntax(
                        tokens[0].column,
                        format!("`{head}` line before the `relations` section"),
                    ));
                }
                relation_lines.push((
                    ctx,
                    tokens.iter().map(|t| t.text.to_string()).collect(),
                    tokens.iter().map(|t| t.column).collect(),
                ));
                continue;
            }
            other => {
                return Err(ctx.syntax(tokens[0].column, format!("unknown directive `{other}`")));
            }
        }

        match head {
            "vertex" => {
                if tokens.len() == 1 {
                    return Err(ctx.syntax(tokens[0].column, "`vertex` needs at least one id"));
                }
                for t in &tokens[1..] {
                    let v = VertexId::new(t.text).map_err(|e| ctx.semantic(e))?;
                    vertices.push(v);
                }
            }
            "arrow" => {
                let (id, rest) = take_declared_id(&ctx, &tokens)?;
                if rest.len() != 3 || rest[1].text != "->" {
                    return Err(ctx.syntax(
                        tokens[0].column,
                        "expected `arrow <id>: <tail> -> <head>`",
                    ));
                }
                let id = ArrowId::new(id).map_err(|e| ctx.semantic(e))?;
                let tail = resolve_vertex(&ctx, &vertices, rest[0])?;
                let head_v = resolve_vertex(&ctx, &vertices, rest[2])?;
                arrows.push(Arrow {
                    id,
                    tail,
                    head: head_v,
                });
            }
            "loop" => {
                let (id, rest) = take_declared_id(&ctx, &tokens)?;
                if rest.is_empty() || rest.len() > 2 {
                    return Err(ctx.syntax(
                        tokens[0].column,
                        "expected `loop <id>: <vertex> [special]`",
                    ));
                }
                if rest.len() == 2 && rest[1].text != "special" {
                    return Err(ctx.syntax(rest[1].column, "expected `special` or end of line"));
                }
                let id = ArrowId::new(id).map_err(|e| ctx.semantic(e))?;
                let v = resolve_vertex(&ctx, &vertices, rest[0])?;
                if rest.len() == 2 {
                    special.insert(id.clone());
                }
                arrows.push(Arrow {
                    id,
                    tail: v.clone(),
                    head: v,
                });
            }
            _ => unreachable!(),
        }
    }

    let quiver = Quiver::new(vertices, arrows, special).map_err(|e| match e {
        Error::Invalid(message) => Error::Semantic { line: 0, message },
        other => other,
    })?;

    let mut relations = Vec::new();
    for (ctx, tokens, columns) in &relation_lines {
        match tokens[0].as_str() {
            "zero" => {
                if tokens.len() != 2 {
                    return Err(ctx.syntax(columns[0], "expected `zero <word>`"));
                }
                let path = parse_word(ctx, &quiver, &tokens[1], columns[1])?;
                relations.push(Relation::ZeroPath(path));
            }
            "idem" => {
                if tokens.len() != 2 {
                    return Err(ctx.syntax(columns[0], "expected `idem <loop-id>`"));
                }
                let id = ArrowId::new(tokens[1].as_str()).map_err(|e| ctx.semantic(e))?;
                if quiver.arrow(&id).is_none() {
                    return Err(Error::Semantic {
                        line: ctx.line,
                        message: format!("unknown arrow `{id}` in idempotent relation"),
                    });
                }
                relations.push(Relation::IdempotentLoop(id));
            }
            "rel" => {
                let terms = parse_combination(ctx, &quiver, &tokens[1..], &columns[1..])?;
                relations.push(Relation::LinearCombination(terms));
            }
            _ => unreachable!(),
        }
    }

    Presentation::new(quiver, relations, Provenance::User).map_err(|e| match e {
        Error::Invalid(message) => Error::Semantic { line: 0, message },
        other => other,
    })
}

fn take_declared_id<'a, 'b>(
    ctx: &LineCtx,
    tokens: &'b [Token<'a>],
) -> Result<(&'a str, &'b [Token<'a>])> {
    // Accepts `arrow a: ...`, `arrow a : ...`.
    if tokens.len() < 2 {
        return Err(ctx.syntax(tokens[0].column, "missing id"));
    }
    let t = tokens[1].text;
    if let Some(stripped) = t.strip_suffix(':') {
        Ok((stripped, &tokens[2..]))
    } else if tokens.len() >= 3 && tokens[2].text == ":" {
        Ok((t, &tokens[3..]))
    } else {
        Err(ctx.syntax(tokens[1].column, "expected `:` after id"))
    }
}

fn resolve_vertex(ctx: &LineCtx, declared: &[VertexId], tok: Token<'_>) -> Result<VertexId> {
    let v = VertexId::new(tok.text).map_err(|e| ctx.semantic(e))?;
    if !declared.contains(&v) {
        return Err(Error::Semantic {
            line: ctx.line,
            message: format!("unknown vertex `{v}`"),
        });
    }
    Ok(v)
}

fn parse_word(ctx: &LineCtx, quiver: &Quiver, word: &str, column: usize) -> Result<Path> {
    let mut ids = Vec::new();
    for part in word.split('*') {
        if part.is_empty() {
            return Err(ctx.syntax(column, format!("malformed word `{word}`")));
        }
        ids.push(ArrowId::new(part).map_err(|e| ctx.semantic(e))?);
    }
    // Words are written right-to-left; paths are stored first-applied-first.
    ids.reverse();
    Path::new(quiver, ids).map_err(|e| ctx.semantic(e))
}

fn parse_combination(
    ctx: &LineCtx,
    quiver: &Quiver,
    tokens: &[String],
    columns: &[usize],
) -> Result<Vec<(BigRational, Path)>> {
    let mut terms = Vec::new();
    let mut pending_coeff: Option<BigRational> = None;
    let mut expect_term = true;
    for (tok, &col) in tokens.iter().zip(columns) {
        if tok == "+" {
            if expect_term || pending_coeff.is_some() {
                return Err(ctx.syntax(col, "unexpected `+`"));
            }
            expect_term = true;
            continue;
        }
        if !expect_term {
            return Err(ctx.syntax(col, "expected `+` between terms"));
        }
        if let Some(c) = parse_coefficient(tok) {
            if pending_coeff.is_some() {
                return Err(ctx.syntax(col, "two coefficients in a row"));
            }
            pending_coeff = Some(c);
            continue;
        }
        let path = parse_word(ctx, quiver, tok, col)?;
        let coeff = pending_coeff.take().unwrap_or_else(BigRational::one);
        terms.push((coeff, path));
        expect_term = false;
    }
    if expect_term || pending_coeff.is_some() {
        return Err(Error::Parse {
            line: ctx.line,
            column: columns.last().copied().unwrap_or(1),
            message: "dangling term in `rel` line".into(),
        });
    }
    Ok(terms)
}

/// Serializes a presentation back into the DSL. `parse_presentation` of the
/// output reproduces the presentation exactly (declaration order included).
pub fn serialize_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    let quiver = p.quiver();
    if !quiver.vertices().is_empty() {
        out.push_str("vertex");
        for v in quiver.vertices() {
            out.push(' ');
            out.push_str(v.as_str());
        }
        out.push('\n');
    }
    for a in quiver.arrows() {
        if a.is_loop() {
            out.push_str(&format!("loop {}: {}", a.id, a.tail));
            if quiver.is_special(&a.id) {
                out.push_str(" special");
            }
            out.push('\n');
        } else {
            out.push_str(&format!("arrow {}: {} -> {}\n", a.id, a.tail, a.head));
        }
    }
    out.push_str("relations\n");
    for rel in p.relations() {
        match rel {
            Relation::ZeroPath(path) => out.push_str(&format!("zero {}\n", path.word())),
            Relation::IdempotentLoop(e) => out.push_str(&format!("idem {e}\n")),
            Relation::LinearCombination(terms) => {
                let rendered: Vec<String> = terms
                    .iter()
                    .map(|(c, path)| {
                        if c.is_one() {
                            path.word()
                        } else {
                            format!("{c} {}", path.word())
                        }
                    })
                    .collect();
                out.push_str(&format!("rel {}\n", rendered.join(" + ")));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The running fixture of the crate: a line quiver 1 → 2 → 3 → 4 with a
    /// special loop at 2 and relations b*a, c*b*f*a, f² − f.
    pub(crate) const LINE4_SPECIAL: &str = "\
vertex 1 2 3 4
arrow a: 1 -> 2
loop f: 2 special
arrow b: 2 -> 3
arrow c: 3 -> 4
relations
zero b*a
zero c*b*f*a
idem f
";

    #[test]
    fn parses_line4_special() {
        let p = parse_presentation(LINE4_SPECIAL).unwrap();
        assert_eq!(p.quiver().vertices().len(), 4);
        assert_eq!(p.quiver().arrows().len(), 4);
        assert_eq!(p.quiver().special_set().len(), 1);
        assert_eq!(p.relations().len(), 3);
        let words: Vec<String> = p
            .zero_paths()
            .iter()
            .map(|(_, path)| path.word())
            .collect();
        assert_eq!(words, vec!["b*a".to_string(), "c*b*f*a".to_string()]);
    }

    #[test]
    fn single_vertex_empty_presentation_is_valid() {
        let p = parse_presentation("vertex 1\nrelations\n").unwrap();
        assert_eq!(p.quiver().vertices().len(), 1);
        assert!(p.relations().is_empty());
    }

    #[test]
    fn non_composable_relation_is_a_semantic_error() {
        let src = "\
vertex 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
relations
zero a*b
";
        let err = parse_presentation(src).unwrap_err();
        assert!(matches!(err, Error::Semantic { line: 5, .. }), "{err}");
    }

    #[test]
    fn idem_is_auto_inserted_for_special_loops() {
        let src = "\
vertex 1
loop f: 1 special
relations
";
        let p = parse_presentation(src).unwrap();
        assert_eq!(p.relations().len(), 1);
    }

    #[test]
    fn reports_line_and_column_on_syntax_errors() {
        let err = parse_presentation("vertex 1\nbogus x\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 1);
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rel_line_with_coefficients_round_trips() {
        let src = "\
vertex 1 2
arrow a: 1 -> 2
arrow b: 1 -> 2
relations
rel 2 b + -1/3 a
";
        let p = parse_presentation(src).unwrap();
        let text = serialize_presentation(&p);
        let p2 = parse_presentation(&text).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let p = parse_presentation(LINE4_SPECIAL).unwrap();
        let text = serialize_presentation(&p);
        let p2 = parse_presentation(&text).unwrap();
        assert_eq!(p, p2);
    }
}
