//! Text file formats for schemes, signals and measurements.
//!
//! Scheme file:
//!
//! ```text
//! FFCS v1
//! p k s n b
//! <base primitive polynomial, constant term first>
//! <lifted primitive polynomial, constant term first>
//! <m rows of n canonical element indices>
//! ```
//!
//! A noisy scheme inserts one line after the polynomials,
//! `outer u N K <model> <parameter> <outer polynomial>`, and the rows that
//! follow are those of the composed matrix.
//!
//! Signal and measurement files hold the dimension on the first line and the
//! entries on the second, either as `index:value` pairs or as a dense list.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::lifting::{LiftError, LiftSpec};
use crate::matrix::{FieldMatrix, MatrixError};
use crate::noisy::{NoiseModel, NoisyError, NoisyScheme};
use crate::rscode::{RsCode, RsError};
use crate::sensing::{SensingError, SensingScheme, SparseSignal};

pub const MAGIC: &str = "FFCS v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Code(#[from] RsError),
    #[error(transparent)]
    Sensing(#[from] SensingError),
    #[error(transparent)]
    Noisy(#[from] NoisyError),
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed { line, msg: msg.into() }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn write_header<W: Write>(w: &mut W, s: &SensingScheme) -> Result<(), FormatError> {
    let base = s.base_field();
    writeln!(w, "{MAGIC}")?;
    writeln!(
        w,
        "{} {} {} {} {}",
        base.characteristic(),
        base.degree(),
        s.lift_degree(),
        s.dimension(),
        s.sparsity()
    )?;
    writeln!(w, "{}", join(base.prim_poly()))?;
    writeln!(w, "{}", join(s.lift().lifted().prim_poly()))?;
    Ok(())
}

fn write_rows<W: Write>(w: &mut W, a: &FieldMatrix) -> Result<(), FormatError> {
    for r in 0..a.rows() {
        writeln!(w, "{}", join(a.row(r)))?;
    }
    Ok(())
}

pub fn write_scheme<W: Write>(mut w: W, s: &SensingScheme) -> Result<(), FormatError> {
    write_header(&mut w, s)?;
    write_rows(&mut w, s.matrix())?;
    Ok(())
}

pub fn write_noisy_scheme<W: Write>(mut w: W, s: &NoisyScheme) -> Result<(), FormatError> {
    write_header(&mut w, s.inner())?;
    let model = s.model();
    writeln!(
        w,
        "outer {} {} {} {} {} {}",
        s.symbol_width(),
        s.outer_len(),
        s.outer().dimension(),
        model.name(),
        model.parameter(),
        join(s.outer_lift().lifted().prim_poly())
    )?;
    write_rows(&mut w, s.matrix())?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<Option<String>, FormatError> {
        self.number += 1;
        match self.inner.next() {
            Some(l) => Ok(Some(l?)),
            None => Ok(None),
        }
    }

    fn expect_line(&mut self) -> Result<String, FormatError> {
        self.next_line()?
            .ok_or_else(|| malformed(self.number, "unexpected end of file"))
    }

    fn numbers<T: std::str::FromStr>(&mut self) -> Result<Vec<T>, FormatError> {
        let line = self.expect_line()?;
        parse_numbers(&line, self.number)
    }
}

fn parse_numbers<T: std::str::FromStr>(line: &str, number: usize) -> Result<Vec<T>, FormatError> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| malformed(number, format!("bad number {t:?}"))))
        .collect()
}

struct Header {
    base: Field,
    lift: LiftSpec,
    n: usize,
    b: usize,
}

fn read_header<R: BufRead>(lines: &mut Lines<R>) -> Result<Header, FormatError> {
    let magic = lines.expect_line()?;
    if magic.trim() != MAGIC {
        return Err(malformed(1, format!("expected {MAGIC:?}")));
    }
    let dims: Vec<u64> = lines.numbers()?;
    let [p, k, s, n, b] = dims[..] else {
        return Err(malformed(2, "expected p k s n b"));
    };
    let base_poly: Vec<u32> = lines.numbers()?;
    let lifted_poly: Vec<u32> = lines.numbers()?;
    let base = Field::build(p, k as u32, Some(&base_poly))?;
    let lift = LiftSpec::with_poly(&base, s as u32, Some(&lifted_poly))?;
    Ok(Header {
        base,
        lift,
        n: n as usize,
        b: b as usize,
    })
}

fn read_rows<R: BufRead>(lines: &mut Lines<R>, base: &Field, n: usize) -> Result<FieldMatrix, FormatError> {
    let mut data = Vec::new();
    let mut rows = 0;
    while let Some(line) = lines.next_line()? {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<u32> = parse_numbers(&line, lines.number)?;
        if row.len() != n {
            return Err(malformed(lines.number, format!("expected {n} entries, found {}", row.len())));
        }
        data.extend(row);
        rows += 1;
    }
    Ok(FieldMatrix::from_rows(base, rows, n, data)?)
}

/// Reads a scheme and checks that its matrix lifts to the Reed–Solomon
/// parity check named by the header.
pub fn read_scheme<R: BufRead>(r: R) -> Result<SensingScheme, FormatError> {
    let mut lines = Lines { inner: r.lines(), number: 0 };
    let h = read_header(&mut lines)?;
    let a = read_rows(&mut lines, &h.base, h.n)?;
    Ok(SensingScheme::from_matrix(h.lift, h.n, h.b, a)?)
}

pub fn read_noisy_scheme<R: BufRead>(r: R) -> Result<NoisyScheme, FormatError> {
    let mut lines = Lines { inner: r.lines(), number: 0 };
    let h = read_header(&mut lines)?;
    let outer_line = lines.expect_line()?;
    let at = lines.number;
    let tokens: Vec<&str> = outer_line.split_whitespace().collect();
    if tokens.len() < 7 || tokens[0] != "outer" {
        return Err(malformed(at, "expected: outer u N K model parameter polynomial"));
    }
    let num = |t: &str| t.parse::<usize>().map_err(|_| malformed(at, format!("bad number {t:?}")));
    let (u, big_n, k) = (num(tokens[1])?, num(tokens[2])?, num(tokens[3])?);
    let param: f64 = tokens[5].parse().map_err(|_| malformed(at, "bad noise parameter"))?;
    let model = match tokens[4] {
        "none" => NoiseModel::None,
        "qsymmetric" => NoiseModel::QSymmetric { lambda: param },
        "worstcase" => NoiseModel::WorstCase { delta: param },
        other => return Err(malformed(at, format!("unknown noise model {other:?}"))),
    };
    let poly: Vec<u32> = parse_numbers(&tokens[6..].join(" "), at)?;
    if k > big_n {
        return Err(malformed(at, "outer dimension exceeds length"));
    }

    let inner = SensingScheme::from_lift(h.lift, h.n, h.b)?;
    let outer_lift = LiftSpec::with_poly(&h.base, u as u32, Some(&poly))?;
    let outer = RsCode::new(outer_lift.lifted(), big_n, big_n - k)?;
    let scheme = NoisyScheme::with_outer(inner, model, outer_lift, outer)?;
    let a = read_rows(&mut lines, &h.base, h.n)?;
    if &a != scheme.matrix() {
        return Err(SensingError::InconsistentScheme("stored matrix differs from the composed matrix".into()).into());
    }
    Ok(scheme)
}

/// Writes `n` then `index:value` pairs.
pub fn write_sparse<W: Write>(mut w: W, x: &SparseSignal) -> Result<(), FormatError> {
    writeln!(w, "{}", x.dimension())?;
    let pairs: Vec<String> = x.iter().map(|(i, v)| format!("{i}:{v}")).collect();
    writeln!(w, "{}", pairs.join(" "))?;
    Ok(())
}

/// Writes `n` then the dense entries.
pub fn write_dense<W: Write>(mut w: W, values: &[u32]) -> Result<(), FormatError> {
    writeln!(w, "{}", values.len())?;
    writeln!(w, "{}", join(values))?;
    Ok(())
}

/// Reads either layout and returns the dense entries.
pub fn read_vector<R: BufRead>(r: R) -> Result<Vec<u32>, FormatError> {
    let mut lines = Lines { inner: r.lines(), number: 0 };
    let n: usize = lines
        .expect_line()?
        .trim()
        .parse()
        .map_err(|_| malformed(1, "expected the dimension"))?;
    let body = lines.next_line()?.unwrap_or_default();
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.iter().any(|t| t.contains(':')) {
        let mut out = vec![0u32; n];
        let mut seen = vec![false; n];
        for t in tokens {
            let (i, v) = t.split_once(':').ok_or_else(|| malformed(2, format!("bad pair {t:?}")))?;
            let i: usize = i.parse().map_err(|_| malformed(2, format!("bad index {i:?}")))?;
            let v: u32 = v.parse().map_err(|_| malformed(2, format!("bad value {v:?}")))?;
            if i >= n || seen[i] {
                return Err(malformed(2, format!("index {i} out of range or repeated")));
            }
            seen[i] = true;
            out[i] = v;
        }
        Ok(out)
    } else {
        // An empty body is the sparse form of the zero vector.
        let values: Vec<u32> = parse_numbers(&body, 2)?;
        match values.len() {
            0 => Ok(vec![0; n]),
            len if len == n => Ok(values),
            len => Err(malformed(2, format!("expected {n} entries, found {len}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noisy::NoisyOptions;

    fn round_trip(s: &SensingScheme) -> Vec<u8> {
        let mut buf = Vec::new();
        write_scheme(&mut buf, s).unwrap();
        let back = read_scheme(&buf[..]).unwrap();
        let mut again = Vec::new();
        write_scheme(&mut again, &back).unwrap();
        assert_eq!(buf, again);
        assert_eq!(back.matrix(), s.matrix());
        buf
    }

    #[test]
    fn scheme_round_trip() {
        let text = round_trip(&SensingScheme::build(2, 7, 1).unwrap());
        let text = String::from_utf8(text).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("FFCS v1"));
        assert_eq!(lines.next(), Some("2 1 3 7 1"));
        assert_eq!(lines.next(), Some("1 1"));
        assert_eq!(lines.next(), Some("1 1 0 1"));
        assert_eq!(lines.count(), 6);
        round_trip(&SensingScheme::build(9, 20, 3).unwrap());
        round_trip(&SensingScheme::build(256, 300, 2).unwrap());
    }

    #[test]
    fn tampered_matrix_rejected() {
        let mut buf = Vec::new();
        write_scheme(&mut buf, &SensingScheme::build(2, 7, 1).unwrap()).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        let pos = text.rfind('0').unwrap();
        text.replace_range(pos..pos + 1, "1");
        assert!(matches!(
            read_scheme(text.as_bytes()),
            Err(FormatError::Sensing(SensingError::InconsistentScheme(_)))
        ));
        assert!(matches!(read_scheme("FFCS v2\n".as_bytes()), Err(FormatError::Malformed { .. })));
    }

    #[test]
    fn noisy_round_trip() {
        let s = NoisyScheme::build(4, 12, 2, NoiseModel::WorstCase { delta: 0.2 }, NoisyOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_noisy_scheme(&mut buf, &s).unwrap();
        let back = read_noisy_scheme(&buf[..]).unwrap();
        assert_eq!(back.matrix(), s.matrix());
        assert_eq!(back.model(), s.model());
        let mut again = Vec::new();
        write_noisy_scheme(&mut again, &back).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn vectors() {
        let x = SparseSignal::from_pairs(6, [(1, 3), (4, 2)]).unwrap();
        let mut buf = Vec::new();
        write_sparse(&mut buf, &x).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "6\n1:3 4:2\n");
        assert_eq!(read_vector(&buf[..]).unwrap(), x.to_dense());
        let mut buf = Vec::new();
        write_dense(&mut buf, &[0, 1, 2]).unwrap();
        assert_eq!(read_vector(&buf[..]).unwrap(), vec![0, 1, 2]);
        assert_eq!(read_vector("4\n".as_bytes()).unwrap(), vec![0; 4]);
        assert!(read_vector("3\n0:1 0:2\n".as_bytes()).is_err());
        assert!(read_vector("3\n1 2\n".as_bytes()).is_err());
    }
}
