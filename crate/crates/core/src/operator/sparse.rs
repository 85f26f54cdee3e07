use super::{DenseSymmetric, SymmetricOperator};
use crate::error::{Error, Result};

/// Symmetric matrix in compressed sparse row form.
///
/// Both triangles are stored, so a product is one pass over the rows.
/// Column indices are strictly increasing within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    dim: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymmetric {
    /// Builds from `(row, col, value)` triplets of the full pattern (0-based).
    ///
    /// Duplicate positions are summed. The summed matrix must be exactly
    /// symmetric in both pattern and values.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= dim || j >= dim {
                return Err(Error::InvalidStructure(format!(
                    "entry ({i}, {j}) outside a {dim} x {dim} matrix"
                )));
            }
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_offsets = vec![0usize; dim + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, x) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += x;
                continue;
            }
            last = Some((i, j));
            row_offsets[i + 1] += 1;
            col_indices.push(j);
            values.push(x);
        }
        for i in 0..dim {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self::from_csr(dim, row_offsets, col_indices, values)
    }

    /// Builds from raw CSR arrays, validating structure and symmetry.
    pub fn from_csr(
        dim: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != dim + 1 || row_offsets[0] != 0 {
            return Err(Error::InvalidStructure(
                "row offsets must have dim + 1 entries starting at 0".into(),
            ));
        }
        if col_indices.len() != values.len() || row_offsets[dim] != values.len() {
            return Err(Error::InvalidStructure(
                "row offsets, column indices and values disagree in length".into(),
            ));
        }
        for i in 0..dim {
            if row_offsets[i] > row_offsets[i + 1] {
                return Err(Error::InvalidStructure(format!(
                    "row offsets decrease at row {i}"
                )));
            }
            let cols = &col_indices[row_offsets[i]..row_offsets[i + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidStructure(format!(
                    "column indices in row {i} are not strictly increasing"
                )));
            }
            if cols.last().is_some_and(|&j| j >= dim) {
                return Err(Error::InvalidStructure(format!(
                    "column index out of range in row {i}"
                )));
            }
        }
        let m = Self {
            dim,
            row_offsets,
            col_indices,
            values,
        };
        m.check_symmetry()?;
        Ok(m)
    }

    pub fn from_dense(a: &DenseSymmetric) -> Self {
        let d = a.dim();
        let mut row_offsets = Vec::with_capacity(d + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for i in 0..d {
            for (j, &x) in a.row(i).iter().enumerate() {
                if x != 0.0 {
                    col_indices.push(j);
                    values.push(x);
                }
            }
            row_offsets.push(values.len());
        }
        Self {
            dim: d,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Stored value at `(row, col)`, zero if outside the pattern.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_offsets[row]..self.row_offsets[row + 1];
        match self.col_indices[range.clone()].binary_search(&col) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        DenseSymmetric::from_lower_fn(self.dim, |i, j| self.get(i, j))
    }

    fn check_symmetry(&self) -> Result<()> {
        for i in 0..self.dim {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.col_indices[k];
                if j <= i {
                    continue;
                }
                let upper = self.values[k];
                let range = self.row_offsets[j]..self.row_offsets[j + 1];
                let lower = match self.col_indices[range.clone()].binary_search(&i) {
                    Ok(pos) => self.values[range.start + pos],
                    Err(_) => {
                        return Err(Error::InvalidStructure(format!(
                            "pattern is not symmetric: ({i}, {j}) stored but ({j}, {i}) missing"
                        )))
                    }
                };
                if upper != lower {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        upper,
                        lower,
                    });
                }
            }
            // Entries below the diagonal without a partner show up here as
            // an upper entry missing from its row; catch the reverse case too.
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.col_indices[k];
                if j < i {
                    let range = self.row_offsets[j]..self.row_offsets[j + 1];
                    if self.col_indices[range].binary_search(&i).is_err() {
                        return Err(Error::InvalidStructure(format!(
                            "pattern is not symmetric: ({i}, {j}) stored but ({j}, {i}) missing"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl SymmetricOperator for SparseSymmetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let range = self.row_offsets[i]..self.row_offsets[i + 1];
            *o = self.col_indices[range.clone()]
                .iter()
                .zip(&self.values[range])
                .map(|(&j, &x)| x * v[j])
                .sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::random_symmetric;

    #[test]
    fn triplets_sum_duplicates() {
        let m = SparseSymmetric::from_triplets(
            2,
            &[
                (0, 0, 1.0),
                (0, 0, 1.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 3.0),
            ],
        )
        .unwrap();
        assert_eq!(m.nnz(), 4);
        assert_eq!(m.matvec(&[1.0, 0.0]).unwrap(), vec![2.0, 1.0]);
    }

    #[test]
    fn rejects_one_sided_pattern() {
        let err = SparseSymmetric::from_triplets(2, &[(1, 0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidStructure(_)));
        let err = SparseSymmetric::from_triplets(2, &[(0, 1, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidStructure(_)));
    }

    #[test]
    fn rejects_asymmetric_values() {
        let err = SparseSymmetric::from_triplets(2, &[(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
    }

    #[test]
    fn rejects_unsorted_csr() {
        let err = SparseSymmetric::from_csr(2, vec![0, 2, 2], vec![1, 0], vec![1.0, 1.0]);
        assert!(matches!(err, Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SparseSymmetric::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn dense_round_trip() {
        let a = random_symmetric(9, 4);
        let s = SparseSymmetric::from_dense(&a);
        assert_eq!(s.to_dense(), a);
    }
}
