//! Plain-text lattice files.
//!
//! ```text
//! # comment
//! gram 2
//! 4 3
//! 3 5
//! ```
//!
//! A basis file starts with `basis d n` and lists the `d × n` matrix whose
//! columns are the basis vectors, row by row. Entries are integers or `p/q`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactlin::{gram_from_basis, parse_rational, EmbeddedBasis, GramMatrix, Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeFile {
    Gram(GramMatrix),
    Basis(EmbeddedBasis),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_dim(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing dimension"))?;
    match tok.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(parse_err(line, format!("invalid dimension `{tok}`"))),
    }
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<LatticeFile> {
        let mut tokens = text.lines().enumerate().flat_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            l.split_whitespace().map(move |t| (i + 1, t))
        });
        let (line, kind) = tokens.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let (rows, cols, is_gram) = match kind {
            "gram" => {
                let n = parse_dim(tokens.next().map(|t| t.1), line)?;
                (n, n, true)
            }
            "basis" => {
                let d = parse_dim(tokens.next().map(|t| t.1), line)?;
                let n = parse_dim(tokens.next().map(|t| t.1), line)?;
                if n > d {
                    return Err(parse_err(line, format!("rank {n} exceeds ambient dimension {d}")));
                }
                (d, n, false)
            }
            other => return Err(parse_err(line, format!("expected `gram` or `basis`, found `{other}`"))),
        };
        let mut entries = Vec::with_capacity(rows * cols);
        let mut last_line = line;
        for (line, tok) in tokens {
            last_line = line;
            if entries.len() == rows * cols {
                return Err(parse_err(line, format!("unexpected extra entry `{tok}`")));
            }
            let v = parse_rational(tok).ok_or_else(|| parse_err(line, format!("invalid number `{tok}`")))?;
            entries.push(v);
        }
        if entries.len() < rows * cols {
            return Err(parse_err(
                last_line,
                format!("expected {} entries, found {}", rows * cols, entries.len()),
            ));
        }
        let mut it = entries.into_iter();
        let m: Matrix<Rational> = Matrix::from_fn(rows, cols, |_, _| it.next().expect("counted"));
        if is_gram {
            Ok(LatticeFile::Gram(GramMatrix::new(m)?))
        } else {
            Ok(LatticeFile::Basis(EmbeddedBasis::new(m)?))
        }
    }

    pub fn to_text(&self) -> String {
        let (header, m) = match self {
            LatticeFile::Gram(g) => (format!("gram {}", g.dim()), g.entries()),
            LatticeFile::Basis(b) => (format!("basis {} {}", b.ambient_dim(), b.rank()), b.columns()),
        };
        let mut out = header;
        out.push('\n');
        for i in 0..m.rows() {
            let row: Vec<String> = m.row(i).iter().map(Rational::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn gram(&self) -> Result<GramMatrix> {
        match self {
            LatticeFile::Gram(g) => Ok(g.clone()),
            LatticeFile::Basis(b) => gram_from_basis(b),
        }
    }
}
