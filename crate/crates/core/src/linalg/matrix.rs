use std::fmt;

use num_rational::BigRational;

use super::elim::{self, Arith, ModP, Q};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
enum Entries {
    Mod(Vec<u64>),
    Rat(Vec<BigRational>),
}

/// A dense matrix over a single [`Field`], stored row-major.
///
/// Every entry shares the matrix's field; constructors that take [`Scalar`]s reject
/// foreign entries. Dimensions never change after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Entries,
}

/// Runs `$body` with `$ar` bound to the field arithmetic and `$data` to the typed buffer.
macro_rules! dispatch {
    ($m:expr, |$ar:ident, $data:ident| $body:expr) => {
        match (&$m.entries, $m.field) {
            (Entries::Mod($data), Field::Prime(p)) => {
                let $ar = ModP(p);
                $body
            }
            (Entries::Rat($data), Field::Rational) => {
                let $ar = Q;
                $body
            }
            _ => unreachable!("matrix storage disagrees with its field"),
        }
    };
}

/// Largest number of entries a dense matrix may hold (2^27, i.e. 1 GiB of residues).
pub const DENSE_CELL_LIMIT: usize = 1 << 27;

/// Resource guard for dense storage, reported as an exceeded budget.
pub fn check_cells(rows: usize, cols: usize) -> Result<()> {
    let needed = rows as u128 * cols as u128;
    if needed > DENSE_CELL_LIMIT as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("dense {rows}x{cols} matrix"),
            needed,
            budget: DENSE_CELL_LIMIT,
        });
    }
    Ok(())
}

fn check_field(field: Field, s: &Scalar) -> Result<()> {
    if s.field() != field {
        return Err(Error::FieldMismatch(field.to_string(), s.field().to_string()));
    }
    Ok(())
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let entries = match field {
            Field::Prime(_) => Entries::Mod(vec![0; rows * cols]),
            Field::Rational => Entries::Rat(vec![Q.zero(); rows * cols]),
        };
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set_one(i, i);
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                check_field(field, v)?;
                m.put(i, j, v);
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors, each of length `len`.
    pub fn from_columns(field: Field, len: usize, columns: &[Vec<Scalar>]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != len {
                return Err(Error::Dimension(format!(
                    "vector {j} has length {}, expected {len}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                check_field(field, v)?;
                m.put(i, j, v);
            }
        }
        Ok(m)
    }

    /// Sparse ingestion: duplicate positions are summed.
    pub fn from_triplets<I>(field: Field, rows: usize, cols: usize, triplets: I) -> Result<Matrix>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        check_cells(rows, cols)?;
        let mut m = Matrix::zeros(field, rows, cols);
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::Dimension(format!(
                    "triplet ({i}, {j}) outside a {rows}x{cols} matrix"
                )));
            }
            check_field(field, &v)?;
            m.add_at(i, j, &v);
        }
        Ok(m)
    }

    /// Small integer matrices, mostly for tests and fixtures.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, &rows).expect("entries share the field")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match (&self.entries, self.field) {
            (Entries::Mod(d), Field::Prime(p)) => Scalar::Mod {
                value: d[k],
                modulus: p,
            },
            (Entries::Rat(d), _) => Scalar::Rational(d[k].clone()),
            _ => unreachable!(),
        }
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Mod(d) => d[k] == 0,
            Entries::Rat(d) => Q.is_zero(&d[k]),
        }
    }

    fn put(&mut self, i: usize, j: usize, v: &Scalar) {
        let k = i * self.cols + j;
        match &mut self.entries {
            Entries::Mod(d) => d[k] = v.residue(),
            Entries::Rat(d) => d[k] = v.rational().clone(),
        }
    }

    fn set_one(&mut self, i: usize, j: usize) {
        let k = i * self.cols + j;
        match &mut self.entries {
            Entries::Mod(d) => d[k] = 1,
            Entries::Rat(d) => d[k] = Q.one(),
        }
    }

    fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let k = i * self.cols + j;
        match (&mut self.entries, self.field) {
            (Entries::Mod(d), Field::Prime(p)) => d[k] = (d[k] + v.residue()) % p,
            (Entries::Rat(d), _) => d[k] = &d[k] + v.rational(),
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self) -> bool {
        dispatch!(self, |ar, d| d.iter().all(|v| ar.is_zero(v)))
    }

    /// First position where the matrix is nonzero, scanning row-major.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let k = dispatch!(self, |ar, d| d.iter().position(|v| !ar.is_zero(v)))?;
        Some((k / self.cols, k % self.cols))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Nonzero entries of column `j` as `(row, value)` pairs.
    pub fn column_support(&self, j: usize) -> Vec<(usize, Scalar)> {
        (0..self.rows)
            .filter(|&i| !self.is_zero_at(i, j))
            .map(|i| (i, self.get(i, j)))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Mod(d) => Entries::Mod(transpose_vec(d, r, c)),
            Entries::Rat(d) => Entries::Rat(transpose_vec(d, r, c)),
        };
        Matrix {
            field: self.field,
            rows: c,
            cols: r,
            entries,
        }
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        check_cells(n, m)?;
        let entries = match (&self.entries, &rhs.entries, self.field) {
            (Entries::Mod(a), Entries::Mod(b), Field::Prime(p)) => {
                Entries::Mod(elim::matmul(&ModP(p), a, b, n, k, m))
            }
            (Entries::Rat(a), Entries::Rat(b), _) => Entries::Rat(elim::matmul(&Q, a, b, n, k, m)),
            _ => unreachable!(),
        };
        Ok(Matrix {
            field: self.field,
            rows: n,
            cols: m,
            entries,
        })
    }

    fn zip_with(&self, rhs: &Matrix, subtract: bool) -> Result<Matrix> {
        self.same_field(rhs)?;
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = match (&self.entries, &rhs.entries, self.field) {
            (Entries::Mod(a), Entries::Mod(b), Field::Prime(p)) => {
                let ar = ModP(p);
                Entries::Mod(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| if subtract { ar.sub(x, y) } else { ar.add(x, y) })
                        .collect(),
                )
            }
            (Entries::Rat(a), Entries::Rat(b), _) => Entries::Rat(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| if subtract { x - y } else { x + y })
                    .collect(),
            ),
            _ => unreachable!(),
        };
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, false)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, true)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix> {
        check_field(self.field, s)?;
        let entries = match &self.entries {
            Entries::Mod(d) => {
                let ar = ModP(self.field.characteristic());
                let f = s.residue();
                Entries::Mod(d.iter().map(|v| ar.mul(v, &f)).collect())
            }
            Entries::Rat(d) => Entries::Rat(d.iter().map(|v| v * s.rational()).collect()),
        };
        Ok(Matrix {
            entries,
            ..*self
        })
    }

    /// Horizontal concatenation `[a | b | ...]`.
    pub fn hstack(field: Field, rows: usize, blocks: &[&Matrix]) -> Result<Matrix> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        check_cells(rows, cols)?;
        let mut out = Matrix::zeros(field, rows, cols);
        let mut offset = 0;
        for b in blocks {
            if b.field != field || b.rows != rows {
                return Err(Error::Dimension(format!(
                    "hstack block is {}x{} over {}, expected {rows} rows over {field}",
                    b.rows, b.cols, b.field
                )));
            }
            for i in 0..rows {
                for j in 0..b.cols {
                    if !b.is_zero_at(i, j) {
                        out.put(i, offset + j, &b.get(i, j));
                    }
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(field: Field, cols: usize, blocks: &[&Matrix]) -> Result<Matrix> {
        check_cells(blocks.iter().map(|b| b.rows).sum(), cols)?;
        let ts: Vec<Matrix> = blocks.iter().map(|b| b.transpose()).collect();
        let refs: Vec<&Matrix> = ts.iter().collect();
        Ok(Matrix::hstack(field, cols, &refs)?.transpose())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, idx.len(), self.cols);
        for (new, &old) in idx.iter().enumerate() {
            for j in 0..self.cols {
                if !self.is_zero_at(old, j) {
                    out.put(new, j, &self.get(old, j));
                }
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        self.transpose().select_rows(idx).transpose()
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        let m = if self.rows < self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        match (m.entries, m.field) {
            (Entries::Mod(mut d), Field::Prime(p)) => {
                elim::echelon_rank(&ModP(p), m.rows, m.cols, &mut d)
            }
            (Entries::Rat(mut d), _) => elim::echelon_rank(&Q, m.rows, m.cols, &mut d),
            _ => unreachable!(),
        }
    }

    /// Basis of the right null space, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        self.kernel_matrix().columns()
    }

    /// The kernel basis as the columns of a `cols x nullity` matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let vecs_to_matrix = |entries: Entries, n: usize| Matrix {
            field: self.field,
            rows: n,
            cols: c,
            entries,
        };
        let basis_rows = match (&self.entries, self.field) {
            (Entries::Mod(d), Field::Prime(p)) => {
                let ar = ModP(p);
                let mut d = d.clone();
                let piv = elim::rref(&ar, r, c, &mut d);
                let ks = elim::kernel_from_rref(&ar, c, &d, &piv);
                let n = ks.len();
                vecs_to_matrix(Entries::Mod(ks.concat()), n)
            }
            (Entries::Rat(d), _) => {
                let mut d = d.clone();
                let piv = elim::rref(&Q, r, c, &mut d);
                let ks = elim::kernel_from_rref(&Q, c, &d, &piv);
                let n = ks.len();
                vecs_to_matrix(Entries::Rat(ks.concat()), n)
            }
            _ => unreachable!(),
        };
        basis_rows.transpose()
    }

    /// Solves `self * X = rhs`, returning `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        self.same_field(rhs)?;
        if rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, expected {}",
                rhs.rows, self.rows
            )));
        }
        let n = self.cols;
        let aug = Matrix::hstack(self.field, self.rows, &[self, rhs])?;
        let width = aug.cols;
        let Matrix { entries, .. } = aug;
        let rows = self.rows;
        macro_rules! finish {
            ($ar:expr, $d:ident, $wrap:path) => {{
                let ar = $ar;
                let mut $d = $d;
                let piv = elim::rref(&ar, rows, width, &mut $d);
                if piv.iter().any(|&p| p >= n) {
                    return Ok(None);
                }
                let m = rhs.cols;
                let mut x = vec![ar.zero(); n * m];
                for (row, &pc) in piv.iter().enumerate() {
                    for j in 0..m {
                        x[pc * m + j] = $d[row * width + n + j].clone();
                    }
                }
                Ok(Some(Matrix {
                    field: self.field,
                    rows: n,
                    cols: m,
                    entries: $wrap(x),
                }))
            }};
        }
        match (entries, self.field) {
            (Entries::Mod(d), Field::Prime(p)) => finish!(ModP(p), d, Entries::Mod),
            (Entries::Rat(d), _) => finish!(Q, d, Entries::Rat),
            _ => unreachable!(),
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols || self.rank() != self.rows {
            return None;
        }
        self.solve(&Matrix::identity(self.field, self.rows))
            .ok()
            .flatten()
    }

    /// Whether every column of `v` lies in the column span of `self`.
    pub fn spans(&self, v: &Matrix) -> Result<bool> {
        let r = self.rank();
        let both = Matrix::hstack(self.field, self.rows, &[self, v])?;
        Ok(both.rank() == r)
    }
}

fn transpose_vec<E: Clone>(d: &[E], r: usize, c: usize) -> Vec<E> {
    let mut out = Vec::with_capacity(d.len());
    for j in 0..c {
        for i in 0..r {
            out.push(d[i * c + j].clone());
        }
    }
    out
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `ambient - rank(span(sub))`: the dimension of the quotient of `k^ambient` by the
/// span of `sub`.
pub fn quotient_dim(field: Field, ambient: usize, sub: &[Vec<Scalar>]) -> Result<usize> {
    let m = Matrix::from_columns(field, ambient, sub)?;
    Ok(ambient - m.rank())
}
