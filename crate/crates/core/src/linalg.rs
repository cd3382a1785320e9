//! Dense exact linear algebra over ℚ.
//!
//! Everything here is plain Gauss–Jordan elimination on [`Rational`]
//! entries; no pivoting heuristics are needed since arithmetic is exact.
//! Systems with [`SymbolicReal`] coefficients but *rational* unknowns are
//! handled by flattening each equation into one rational equation per
//! symbol slot.

use crate::error::{Error, Result};
use crate::scalar::{Rational, SymbolicReal};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |s, t| s + t)
            })
            .collect())
    }

    /// In-place Gauss–Jordan reduction; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.at(r, c).recip();
            for j in c..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j) - &(self.at(r, j) * &f);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the nullspace, each vector of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let is_pivot = |c: usize| pivots.binary_search(&c).is_ok();
        for free in (0..self.cols).filter(|&c| !is_pivot(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            det *= m.at(c, c);
            let inv = m.at(c, c).recip();
            for i in c + 1..n {
                if !m.at(i, c).is_zero() {
                    let f = m.at(i, c) * &inv;
                    for j in c..n {
                        let v = m.at(i, j) - &(m.at(c, j) * &f);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
        }
        Ok(det)
    }
}

/// Outcome of solving `M x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// An affine family: any `particular + span(kernel)` solves the system.
    NonUnique {
        particular: Vec<Rational>,
        kernel: Vec<Vec<Rational>>,
    },
    NoSolution,
}

impl LinearSolution {
    pub fn kernel_dim(&self) -> usize {
        match self {
            LinearSolution::Unique(_) => 0,
            LinearSolution::NonUnique { kernel, .. } => kernel.len(),
            LinearSolution::NoSolution => 0,
        }
    }

    /// True when `x` lies in the solution set (checked exactly).
    pub fn contains(&self, m: &Matrix, b: &[Rational], x: &[Rational]) -> bool {
        match m.mul_vec(x) {
            Ok(mx) => mx == b,
            Err(_) => false,
        }
    }
}

/// Solves `M x = b`, distinguishing "no solution" from an affine family.
pub fn solve_linear(m: &Matrix, b: &[Rational]) -> Result<LinearSolution> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows, right-hand side has {} entries",
            m.rows(),
            b.len()
        )));
    }
    let mut aug = Matrix::zero(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            *aug.at_mut(i, j) = m.at(i, j).clone();
        }
        *aug.at_mut(i, m.cols()) = b[i].clone();
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&m.cols()) {
        return Ok(LinearSolution::NoSolution);
    }
    let mut particular = vec![Rational::zero(); m.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = r.at(row, m.cols()).clone();
    }
    if pivots.len() == m.cols() {
        Ok(LinearSolution::Unique(particular))
    } else {
        Ok(LinearSolution::NonUnique {
            particular,
            kernel: m.kernel_basis(),
        })
    }
}

/// Flattens rows of symbolic values into the rational matrix of their
/// coefficient vectors and returns its rank.
///
/// Rows may have any common length; each entry contributes `width` rational
/// coordinates, where `width` covers every symbol slot present.
pub fn rank_over_q(rows: &[Vec<SymbolicReal>]) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    let len = rows[0].len();
    if rows.iter().any(|r| r.len() != len) {
        return Err(Error::Input("rows of unequal length".into()));
    }
    let width = 1 + rows
        .iter()
        .flat_map(|r| r.iter())
        .map(SymbolicReal::max_slot)
        .max()
        .unwrap_or(0);
    let mut flat = Vec::with_capacity(rows.len());
    for row in rows {
        let mut v = Vec::with_capacity(len * width);
        for entry in row {
            v.extend(entry.flatten(width)?);
        }
        flat.push(v);
    }
    Ok(Matrix::from_rows(flat)?.rank())
}

/// Kernel (over ℚ) of a matrix with symbolic entries and rational unknowns:
/// each symbolic row is flattened into one rational row per symbol slot.
pub fn kernel_symbolic(rows: &[Vec<SymbolicReal>]) -> Result<Vec<Vec<Rational>>> {
    let unknowns = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != unknowns) {
        return Err(Error::Input("rows of unequal length".into()));
    }
    let width = 1 + rows
        .iter()
        .flat_map(|r| r.iter())
        .map(SymbolicReal::max_slot)
        .max()
        .unwrap_or(0);
    let mut flat = Vec::new();
    for row in rows {
        let coeffs: Vec<Vec<Rational>> = row
            .iter()
            .map(|e| e.flatten(width))
            .collect::<Result<_>>()?;
        for slot in 0..width {
            flat.push(coeffs.iter().map(|c| c[slot].clone()).collect::<Vec<_>>());
        }
    }
    Ok(Matrix::from_rows(flat)?.kernel_basis())
}

/// Solves a system whose coefficients and right-hand side are symbolic but
/// whose unknowns are rational: each equation splits into one rational
/// equation per symbol slot.
pub fn solve_symbolic(rows: &[Vec<SymbolicReal>], rhs: &[SymbolicReal]) -> Result<LinearSolution> {
    if rows.len() != rhs.len() {
        return Err(Error::Dimension(format!(
            "{} equations but {} right-hand sides",
            rows.len(),
            rhs.len()
        )));
    }
    let unknowns = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != unknowns) {
        return Err(Error::Input("rows of unequal length".into()));
    }
    let width = 1 + rows
        .iter()
        .flat_map(|r| r.iter())
        .chain(rhs.iter())
        .map(SymbolicReal::max_slot)
        .max()
        .unwrap_or(0);
    let mut flat_rows = Vec::new();
    let mut flat_rhs = Vec::new();
    for (row, b) in rows.iter().zip(rhs) {
        let coeffs: Vec<Vec<Rational>> = row
            .iter()
            .map(|e| e.flatten(width))
            .collect::<Result<_>>()?;
        let b_flat = b.flatten(width)?;
        for slot in 0..width {
            flat_rows.push(coeffs.iter().map(|c| c[slot].clone()).collect::<Vec<_>>());
            flat_rhs.push(b_flat[slot].clone());
        }
    }
    solve_linear(&Matrix::from_rows(flat_rows)?, &flat_rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn v(entries: &[i64]) -> Vec<Rational> {
        entries.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn identity_solve() {
        let sol = solve_linear(&Matrix::identity(3), &v(&[1, 2, 3])).unwrap();
        assert_eq!(sol, LinearSolution::Unique(v(&[1, 2, 3])));
    }

    #[test]
    fn inconsistent_rows() {
        let sol = solve_linear(&m(&[&[1, 1], &[1, 1]]), &v(&[1, 2])).unwrap();
        assert_eq!(sol, LinearSolution::NoSolution);
    }

    #[test]
    fn rank_one_affine_family() {
        // Oracle: x + y = 1 has solutions (t, 1−t); kernel span{(1,−1)}, dim 1.
        let sol = solve_linear(&m(&[&[1, 1], &[1, 1]]), &v(&[1, 1])).unwrap();
        match &sol {
            LinearSolution::NonUnique { particular, kernel } => {
                assert_eq!(kernel.len(), 1);
                assert_eq!(particular, &v(&[1, 0]));
            }
            other => panic!("expected affine family, got {other:?}"),
        }
        assert_eq!(sol.kernel_dim(), 1);
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        assert!(solve_linear(&Matrix::identity(2), &v(&[1])).is_err());
    }

    #[test]
    fn rank_nullity() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank() + a.kernel_basis().len(), a.cols());
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).det().unwrap(), rat_int(1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), rat_int(0));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), rat_int(-1));
    }

    #[test]
    fn rank_over_q_examples() {
        let r = |x: i64| SymbolicReal::from_rational(rat_int(x));
        // all-rational rows collapse to rank 1
        assert_eq!(
            rank_over_q(&[vec![r(1)], vec![r(2)], vec![r(3)]]).unwrap(),
            1
        );
        // {1, eps1, eps2} are independent by declaration
        let rows = vec![
            vec![SymbolicReal::one()],
            vec![SymbolicReal::symbol(1)],
            vec![SymbolicReal::symbol(2)],
        ];
        assert_eq!(rank_over_q(&rows).unwrap(), 3);
        // {eps1, 2 eps1} has rank 1 (hand elimination)
        let rows = vec![
            vec![SymbolicReal::symbol(1)],
            vec![SymbolicReal::term(1, rat_int(2))],
        ];
        assert_eq!(rank_over_q(&rows).unwrap(), 1);
    }

    #[test]
    fn solve_symbolic_flattens_per_slot() {
        // (1 + eps1)·x = 1 + eps1  →  constant slot: x = 1; eps1 slot: x = 1.
        let c = &SymbolicReal::one() + &SymbolicReal::symbol(1);
        let sol = solve_symbolic(&[vec![c.clone()]], &[c]).unwrap();
        assert_eq!(sol, LinearSolution::Unique(vec![rat_int(1)]));
        // eps1·x = 1 has no rational solution.
        let sol = solve_symbolic(&[vec![SymbolicReal::symbol(1)]], &[SymbolicReal::one()]).unwrap();
        assert_eq!(sol, LinearSolution::NoSolution);
    }

    #[test]
    fn solution_membership() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let b = v(&[3, 6]);
        let sol = solve_linear(&a, &b).unwrap();
        assert!(sol.contains(&a, &b, &v(&[1, 2])));
        assert!(sol.contains(&a, &b, &v(&[3, 0])));
        assert!(!sol.contains(&a, &b, &v(&[1, 1])));
    }

    #[test]
    fn det_scaling() {
        let a = Matrix::from_rows(vec![
            vec![rat(1, 2), rat_int(0)],
            vec![rat_int(0), rat(2, 3)],
        ])
        .unwrap();
        assert_eq!(a.det().unwrap(), rat(1, 3));
    }
}
