//! Reader for the Matrix Market exchange format.
//!
//! Coordinate files become [`SparseSymmetric`], array files become
//! [`DenseSymmetric`]. `symmetric` files store the lower triangle, which is
//! mirrored. `general` files are accepted when their content is symmetric to
//! a relative 1e-12 and are then symmetrized exactly by averaging each pair.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{DenseSymmetric, SparseSymmetric, SymmetricOperator};
use crate::error::{Error, Result};

/// Relative tolerance for accepting a `general` file as symmetric.
pub const GENERAL_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedMatrix {
    Sparse(SparseSymmetric),
    Dense(DenseSymmetric),
}

impl LoadedMatrix {
    pub fn to_dense(&self) -> DenseSymmetric {
        match self {
            LoadedMatrix::Sparse(s) => s.to_dense(),
            LoadedMatrix::Dense(d) => d.clone(),
        }
    }
}

impl SymmetricOperator for LoadedMatrix {
    fn dim(&self) -> usize {
        match self {
            LoadedMatrix::Sparse(s) => s.dim(),
            LoadedMatrix::Dense(d) => d.dim(),
        }
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        match self {
            LoadedMatrix::Sparse(s) => s.apply(v, out),
            LoadedMatrix::Dense(d) => d.apply(v, out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<LoadedMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_market(&text, path)
}

/// Parses Matrix Market text; `path` is only used in error messages.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<LoadedMatrix> {
    let err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        message,
    };

    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (header_no, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let (layout, symmetry) = parse_header(header).map_err(|m| err(header_no, m))?;

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_no, size_line) = data
        .next()
        .ok_or_else(|| err(header_no, "missing size line".into()))?;
    let sizes = parse_usizes(size_line).map_err(|m| err(size_no, m))?;
    let expected_sizes = if layout == Layout::Coordinate { 3 } else { 2 };
    if sizes.len() != expected_sizes {
        return Err(err(
            size_no,
            format!(
                "expected {expected_sizes} integers on the size line, found {}",
                sizes.len()
            ),
        ));
    }
    let (rows, cols) = (sizes[0], sizes[1]);
    if rows != cols {
        return Err(err(
            size_no,
            format!("matrix is {rows} x {cols}, not square"),
        ));
    }
    if rows == 0 {
        return Err(err(size_no, "matrix dimension must be positive".into()));
    }
    let dim = rows;

    match layout {
        Layout::Coordinate => {
            let nnz = sizes[2];
            let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            let mut seen = 0;
            for (no, line) in data {
                if seen == nnz {
                    return Err(err(no, format!("more than the declared {nnz} entries")));
                }
                let mut tokens = line.split_whitespace();
                let i = parse_index(tokens.next(), dim).map_err(|m| err(no, m))?;
                let j = parse_index(tokens.next(), dim).map_err(|m| err(no, m))?;
                let x = parse_value(tokens.next()).map_err(|m| err(no, m))?;
                if tokens.next().is_some() {
                    return Err(err(no, "trailing tokens after the value".into()));
                }
                if symmetry == Symmetry::Symmetric && j > i {
                    return Err(err(
                        no,
                        format!(
                            "entry ({}, {}) above the diagonal in a symmetric file",
                            i + 1,
                            j + 1
                        ),
                    ));
                }
                *entries.entry((i, j)).or_insert(0.0) += x;
                seen += 1;
            }
            if seen != nnz {
                return Err(err(
                    text.lines().count(),
                    format!("declared {nnz} entries but found {seen}"),
                ));
            }

            let mut triplets = Vec::with_capacity(2 * entries.len());
            match symmetry {
                Symmetry::Symmetric => {
                    for (&(i, j), &x) in &entries {
                        triplets.push((i, j, x));
                        if i != j {
                            triplets.push((j, i, x));
                        }
                    }
                }
                Symmetry::General => {
                    for (&(i, j), &x) in &entries {
                        if i == j {
                            triplets.push((i, j, x));
                            continue;
                        }
                        let y = entries.get(&(j, i)).copied().unwrap_or(0.0);
                        check_pair(i, j, x, y)?;
                        triplets.push((i, j, 0.5 * (x + y)));
                        if !entries.contains_key(&(j, i)) {
                            // Only reachable for explicit zeros.
                            triplets.push((j, i, 0.5 * (x + y)));
                        }
                    }
                }
            }
            Ok(LoadedMatrix::Sparse(SparseSymmetric::from_triplets(
                dim, &triplets,
            )?))
        }
        Layout::Array => {
            // Column-major; symmetric files list the lower triangle of each column.
            let expected = match symmetry {
                Symmetry::General => dim * dim,
                Symmetry::Symmetric => dim * (dim + 1) / 2,
            };
            let mut values = Vec::with_capacity(expected);
            let mut last_no = size_no;
            for (no, line) in data {
                last_no = no;
                for tok in line.split_whitespace() {
                    if values.len() == expected {
                        return Err(err(no, format!("more than the expected {expected} values")));
                    }
                    values.push(parse_value(Some(tok)).map_err(|m| err(no, m))?);
                }
            }
            if values.len() != expected {
                return Err(err(
                    last_no,
                    format!("expected {expected} values, found {}", values.len()),
                ));
            }
            let mut full = vec![0.0; dim * dim];
            match symmetry {
                Symmetry::General => {
                    for j in 0..dim {
                        for i in 0..dim {
                            full[i * dim + j] = values[j * dim + i];
                        }
                    }
                    for i in 0..dim {
                        for j in (i + 1)..dim {
                            let (x, y) = (full[i * dim + j], full[j * dim + i]);
                            check_pair(i, j, x, y)?;
                            let avg = 0.5 * (x + y);
                            full[i * dim + j] = avg;
                            full[j * dim + i] = avg;
                        }
                    }
                }
                Symmetry::Symmetric => {
                    let mut k = 0;
                    for j in 0..dim {
                        for i in j..dim {
                            full[i * dim + j] = values[k];
                            full[j * dim + i] = values[k];
                            k += 1;
                        }
                    }
                }
            }
            Ok(LoadedMatrix::Dense(DenseSymmetric::from_row_major(
                dim, full,
            )?))
        }
    }
}

fn check_pair(i: usize, j: usize, x: f64, y: f64) -> Result<()> {
    if (x - y).abs() > GENERAL_SYMMETRY_TOL * x.abs().max(y.abs()) {
        return Err(Error::NotSymmetric {
            row: i,
            col: j,
            upper: x,
            lower: y,
        });
    }
    Ok(())
}

fn parse_header(line: &str) -> std::result::Result<(Layout, Symmetry), String> {
    let tokens: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err("first line must start with %%MatrixMarket".into());
    }
    if tokens.len() != 5 {
        return Err("header must read `%%MatrixMarket matrix <format> <field> <symmetry>`".into());
    }
    if tokens[1] != "matrix" {
        return Err(format!("unsupported object `{}`", tokens[1]));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(format!("unsupported format `{other}`")),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => {
            return Err(format!(
                "unsupported field `{other}`; only real matrices are handled"
            ))
        }
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(format!("unsupported symmetry `{other}`")),
    };
    Ok((layout, symmetry))
}

fn parse_usizes(line: &str) -> std::result::Result<Vec<usize>, String> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| format!("`{t}` is not a non-negative integer"))
        })
        .collect()
}

fn parse_index(token: Option<&str>, dim: usize) -> std::result::Result<usize, String> {
    let t = token.ok_or("missing index")?;
    let k: usize = t
        .parse()
        .map_err(|_| format!("`{t}` is not a valid index"))?;
    if k == 0 || k > dim {
        return Err(format!("index {k} outside 1..={dim}"));
    }
    Ok(k - 1)
}

fn parse_value(token: Option<&str>) -> std::result::Result<f64, String> {
    let t = token.ok_or("missing value")?;
    let x: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("value `{t}` is not finite"));
    }
    Ok(x)
}
