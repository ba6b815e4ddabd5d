//! Plain-text format for representations.
//!
//! ```text
//! rep <presentation-name> over Q|F<p>
//! dim <vertex>=<n> ...
//! mat <arrow> <rows> <cols>
//! <rows of space-separated entries, rationals as p/q>
//! ```
//!
//! Blank lines and `#` comments are allowed. Every arrow of the presentation
//! must have exactly one `mat` block.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix};
use crate::presentation::Presentation;
use crate::quiver::{ArrowId, DimensionVector, VertexId};
use crate::rep::Representation;

pub fn write_representation(rep: &Representation) -> String {
    let p = rep.presentation();
    let quiver = p.quiver();
    let mut out = format!("rep {} over {}\n", p.name(), rep.field().label());
    out.push_str(&format!("dim {}\n", rep.dims().display_ordered(quiver)));
    for arrow in quiver.arrows() {
        let m = rep.matrix(&arrow.id);
        out.push_str(&format!("mat {} {} {}\n", arrow.id, m.rows(), m.cols()));
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_representation(text: &str, presentation: Arc<Presentation>) -> Result<Representation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            (i + 1, line.trim())
        })
        .filter(|(_, l)| !l.is_empty());

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| Error::Invalid("empty representation file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "rep" || tokens[2] != "over" {
        return Err(Error::Parse {
            line: lineno,
            column: 1,
            message: "expected `rep <name> over <field>`".into(),
        });
    }
    let field = FieldSpec::parse(tokens[3]).map_err(|e| Error::Semantic {
        line: lineno,
        message: e.to_string(),
    })?;

    let (lineno, dim_line) = lines
        .next()
        .ok_or_else(|| Error::Invalid("missing `dim` line".into()))?;
    let dim_tokens: Vec<&str> = dim_line.split_whitespace().collect();
    if dim_tokens.first() != Some(&"dim") {
        return Err(Error::Parse {
            line: lineno,
            column: 1,
            message: "expected `dim <vertex>=<n> ...`".into(),
        });
    }
    let mut dim_map = BTreeMap::new();
    for tok in &dim_tokens[1..] {
        let (v, n) = tok.split_once('=').ok_or_else(|| Error::Parse {
            line: lineno,
            column: 1,
            message: format!("malformed dimension entry `{tok}`"),
        })?;
        let v = VertexId::new(v).map_err(|e| Error::Semantic {
            line: lineno,
            message: e.to_string(),
        })?;
        let n: usize = n.parse().map_err(|_| Error::Semantic {
            line: lineno,
            message: format!("bad dimension `{n}`"),
        })?;
        dim_map.insert(v, n);
    }
    let dims =
        DimensionVector::new(presentation.quiver(), dim_map).map_err(|e| Error::Semantic {
            line: lineno,
            message: e.to_string(),
        })?;

    let mut mats: BTreeMap<ArrowId, Matrix> = BTreeMap::new();
    let mut pending: Option<(usize, ArrowId, usize, usize, Vec<Vec<_>>)> = None;
    for (lineno, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "mat" {
            flush_matrix(&mut pending, &mut mats, field)?;
            if tokens.len() != 4 {
                return Err(Error::Parse {
                    line: lineno,
                    column: 1,
                    message: "expected `mat <arrow> <rows> <cols>`".into(),
                });
            }
            let id = ArrowId::new(tokens[1]).map_err(|e| Error::Semantic {
                line: lineno,
                message: e.to_string(),
            })?;
            let rows: usize = tokens[2].parse().map_err(|_| Error::Semantic {
                line: lineno,
                message: "bad row count".into(),
            })?;
            let cols: usize = tokens[3].parse().map_err(|_| Error::Semantic {
                line: lineno,
                message: "bad column count".into(),
            })?;
            if mats.contains_key(&id) {
                return Err(Error::Semantic {
                    line: lineno,
                    message: format!("duplicate matrix for arrow `{id}`"),
                });
            }
            pending = Some((lineno, id, rows, cols, Vec::new()));
            continue;
        }
        let Some((_, _, rows, cols, ref mut collected)) = pending else {
            return Err(Error::Parse {
                line: lineno,
                column: 1,
                message: "matrix entries before any `mat` header".into(),
            });
        };
        if collected.len() >= rows {
            return Err(Error::Semantic {
                line: lineno,
                message: "more rows than declared".into(),
            });
        }
        if tokens.len() != cols {
            return Err(Error::Semantic {
                line: lineno,
                message: format!("expected {cols} entries, found {}", tokens.len()),
            });
        }
        let mut row = Vec::with_capacity(cols);
        for tok in tokens {
            let q = BigRational::from_str(tok).map_err(|_| Error::Semantic {
                line: lineno,
                message: format!("bad entry `{tok}`"),
            })?;
            row.push(field.from_rational(&q).map_err(|e| Error::Semantic {
                line: lineno,
                message: e.to_string(),
            })?);
        }
        collected.push(row);
    }
    flush_matrix(&mut pending, &mut mats, field)?;

    Representation::new(presentation, field, dims, mats)
}

type PendingMatrix = Option<(
    usize,
    ArrowId,
    usize,
    usize,
    Vec<Vec<crate::linalg::Scalar>>,
)>;

fn flush_matrix(
    pending: &mut PendingMatrix,
    mats: &mut BTreeMap<ArrowId, Matrix>,
    field: FieldSpec,
) -> Result<()> {
    if let Some((lineno, id, rows, _cols, collected)) = pending.take() {
        if collected.len() != rows {
            return Err(Error::Semantic {
                line: lineno,
                message: format!(
                    "matrix for `{id}` declares {rows} rows but has {}",
                    collected.len()
                ),
            });
        }
        let m = if collected.is_empty() {
            Matrix::zero(field, rows, _cols)
        } else {
            Matrix::from_rows(field, collected)?
        };
        mats.insert(id, m);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::linalg::Scalar;

    #[test]
    fn round_trips_a_rational_representation() {
        let p = Arc::new(
            parse_presentation("vertex 1 2\narrow a: 1 -> 2\nrelations\n")
                .unwrap()
                .with_name("a2"),
        );
        let f = FieldSpec::Rationals;
        let d = DimensionVector::from_values(p.quiver(), &[2, 1]).unwrap();
        let m = Matrix::from_rows(
            f,
            vec![vec![
                f.from_rational(&BigRational::from_str("1/2").unwrap()).unwrap(),
                f.from_i64(-3),
            ]],
        )
        .unwrap();
        let rep = Representation::new(
            p.clone(),
            f,
            d,
            [(ArrowId::new("a").unwrap(), m)].into_iter().collect(),
        )
        .unwrap();
        let text = write_representation(&rep);
        assert!(text.starts_with("rep a2 over Q\n"));
        let rep2 = parse_representation(&text, p).unwrap();
        assert_eq!(rep, rep2);
    }

    #[test]
    fn parses_prime_field_entries_with_reduction() {
        let p = Arc::new(parse_presentation("vertex 1 2\narrow a: 1 -> 2\nrelations\n").unwrap());
        let text = "rep x over F3\ndim 1=1 2=1\nmat a 1 1\n-1\n";
        let rep = parse_representation(text, p).unwrap();
        assert_eq!(rep.matrix(&ArrowId::new("a").unwrap()).get(0, 0), &Scalar::Mod(2));
    }

    #[test]
    fn zero_by_n_matrices_survive_the_round_trip() {
        let p = Arc::new(parse_presentation("vertex 1 2\narrow a: 1 -> 2\nrelations\n").unwrap());
        let f = FieldSpec::Rationals;
        let d = DimensionVector::from_values(p.quiver(), &[1, 0]).unwrap();
        let rep = Representation::zero(p.clone(), f, d).unwrap();
        let text = write_representation(&rep);
        let rep2 = parse_representation(&text, p).unwrap();
        assert_eq!(rep, rep2);
    }

    #[test]
    fn missing_matrix_is_an_error() {
        let p = Arc::new(parse_presentation("vertex 1 2\narrow a: 1 -> 2\nrelations\n").unwrap());
        let text = "rep x over Q\ndim 1=1 2=1\n";
        assert!(parse_representation(text, p).is_err());
    }
}
