//! Plain-text problem dump/load, one triplet per line. Used for debugging
//! and regression fixtures.
//!
//! Format (whitespace separated, `#` starts a comment line):
//!
//! ```text
//! problem <rows> <cols>
//! offset <v>
//! c <j> <v>          # linear cost
//! q <j> <v>          # diagonal quadratic cost
//! b <j> <lo> <hi>    # column bounds (inf / -inf allowed)
//! i <j>              # integrality flag
//! r <i> <L|E|G> <rhs>
//! a <i> <j> <v>      # matrix entry
//! ```

use std::fmt::Write as _;

use super::{MipProblem, RowSense};

pub fn dump_problem(p: &MipProblem) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "problem {} {}", p.num_rows(), p.num_cols());
    if p.offset() != 0.0 {
        let _ = writeln!(s, "offset {}", p.offset());
    }
    for j in 0..p.num_cols() {
        if p.cost(j) != 0.0 {
            let _ = writeln!(s, "c {} {}", j, p.cost(j));
        }
        if p.quadratic(j) != 0.0 {
            let _ = writeln!(s, "q {} {}", j, p.quadratic(j));
        }
        let (lo, hi) = p.bounds(j);
        let _ = writeln!(s, "b {} {} {}", j, lo, hi);
        if p.is_integer(j) {
            let _ = writeln!(s, "i {}", j);
        }
    }
    for i in 0..p.num_rows() {
        let sense = match p.sense(i) {
            RowSense::Le => "L",
            RowSense::Eq => "E",
            RowSense::Ge => "G",
        };
        let _ = writeln!(s, "r {} {} {}", i, sense, p.rhs(i));
    }
    for &(r, c, v) in p.matrix().entries() {
        let _ = writeln!(s, "a {} {} {}", r, c, v);
    }
    s
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        msg: msg.into(),
    }
}

pub fn load_problem(text: &str) -> Result<MipProblem, ParseError> {
    let mut p = MipProblem::new();
    let mut rows: Vec<(RowSense, f64)> = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut ncols = 0usize;
    let mut declared = false;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut it = t.split_whitespace();
        let tag = it.next().unwrap();
        let mut next_f64 = |it: &mut std::str::SplitWhitespace| -> Result<f64, ParseError> {
            it.next()
                .ok_or_else(|| err(line, "missing field"))?
                .parse::<f64>()
                .map_err(|e| err(line, format!("bad number: {e}")))
        };
        let mut next_usize = |it: &mut std::str::SplitWhitespace| -> Result<usize, ParseError> {
            it.next()
                .ok_or_else(|| err(line, "missing field"))?
                .parse::<usize>()
                .map_err(|e| err(line, format!("bad index: {e}")))
        };
        match tag {
            "problem" => {
                let nrows = next_usize(&mut it)?;
                ncols = next_usize(&mut it)?;
                for _ in 0..ncols {
                    p.add_col(0.0, f64::NEG_INFINITY, f64::INFINITY, false);
                }
                rows = vec![(RowSense::Le, 0.0); nrows];
                declared = true;
            }
            "offset" => p.set_offset(next_f64(&mut it)?),
            "c" => {
                let j = next_usize(&mut it)?;
                let v = next_f64(&mut it)?;
                check_col(declared, j, ncols, line)?;
                p.add_to_cost(j, v - p.cost(j));
            }
            "q" => {
                let j = next_usize(&mut it)?;
                let v = next_f64(&mut it)?;
                check_col(declared, j, ncols, line)?;
                p.set_quadratic(j, v);
            }
            "b" => {
                let j = next_usize(&mut it)?;
                let lo = next_f64(&mut it)?;
                let hi = next_f64(&mut it)?;
                check_col(declared, j, ncols, line)?;
                p.set_bounds(j, lo, hi);
            }
            "i" => {
                let j = next_usize(&mut it)?;
                check_col(declared, j, ncols, line)?;
                p.set_integer(j, true);
            }
            "r" => {
                let i = next_usize(&mut it)?;
                let sense = match it.next() {
                    Some("L") => RowSense::Le,
                    Some("E") => RowSense::Eq,
                    Some("G") => RowSense::Ge,
                    other => return Err(err(line, format!("bad sense {:?}", other))),
                };
                let rhs = next_f64(&mut it)?;
                if i >= rows.len() {
                    return Err(err(line, format!("row {i} out of range")));
                }
                rows[i] = (sense, rhs);
            }
            "a" => {
                let i = next_usize(&mut it)?;
                let j = next_usize(&mut it)?;
                let v = next_f64(&mut it)?;
                if i >= rows.len() {
                    return Err(err(line, format!("row {i} out of range")));
                }
                check_col(declared, j, ncols, line)?;
                entries.push((i, j, v));
            }
            other => return Err(err(line, format!("unknown tag {other:?}"))),
        }
    }
    if !declared {
        return Err(err(0, "missing problem header"));
    }
    // materialize rows in order
    entries.sort_by_key(|&(i, j, _)| (i, j));
    let mut cursor = 0usize;
    for (i, &(sense, rhs)) in rows.iter().enumerate() {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        while cursor < entries.len() && entries[cursor].0 == i {
            coeffs.push((entries[cursor].1, entries[cursor].2));
            cursor += 1;
        }
        p.add_row(sense, rhs, &coeffs);
    }
    Ok(p)
}

fn check_col(declared: bool, j: usize, ncols: usize, line: usize) -> Result<(), ParseError> {
    if !declared {
        return Err(err(line, "problem header must come first"));
    }
    if j >= ncols {
        return Err(err(line, format!("column {j} out of range")));
    }
    Ok(())
}
