//! Dense exact linear algebra over prime fields `F_p` with `p <= 251`.
//!
//! Every element is stored as its canonical representative in `0..p`, one
//! byte per entry. Elimination always picks the first nonzero pivot so that
//! results (kernel bases, complements, solutions) are deterministic.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_CHARACTERISTIC: u32 = 251;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u8,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_CHARACTERISTIC).contains(&p) {
            return Err(Error::Malformed(format!("field characteristic {p} outside 2..={MAX_CHARACTERISTIC}")));
        }
        if !is_prime(p) {
            return Err(Error::Malformed(format!("{p} is not prime")));
        }
        Ok(PrimeField { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    /// Number of elements, as a `u64` for search-space estimates.
    pub fn order(self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // Fermat: a^(p-2)
        let mut result = 1u8;
        let mut base = a;
        let mut e = self.p as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

/// Row-major dense matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[F{}; {}x{}](", self.field.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, ")")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-canonical representatives.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u8>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::Malformed(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|&&v| v >= field.p) {
            return Err(Error::Malformed(format!("entry {bad} is not a canonical element of F_{}", field.p)));
        }
        Ok(Mat { field, rows, cols, data })
    }

    /// Builds a matrix from rows of integers, reducing each entry mod `p`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Result<Mat> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Malformed(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Ok(Mat { field, rows: rows.len(), cols, data })
    }

    /// A single column vector.
    pub fn column(field: PrimeField, entries: &[u8]) -> Mat {
        Mat { field, rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!(v < self.field.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in product: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        assert_eq!(self.field, other.field, "field mismatch in product");
        let p = self.field.p as u32;
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u32; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u32;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u32) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = v as u8;
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in difference");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u8) -> Mat {
        let f = self.field;
        Mat { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: u8, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in axpy");
        if s == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(s, b));
        }
    }

    pub fn neg(&self) -> Mat {
        let f = self.field;
        Mat { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = Mat::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            out.data[r * out.cols..r * out.cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * out.cols + self.cols..(r + 1) * out.cols].copy_from_slice(other.row(r));
        }
        out
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hcat(field: PrimeField, rows: usize, parts: &[Mat]) -> Mat {
        parts.iter().fold(Mat::zeros(field, rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn vcat(field: PrimeField, cols: usize, parts: &[Mat]) -> Mat {
        parts.iter().fold(Mat::zeros(field, 0, cols), |acc, m| acc.vstack(m))
    }

    /// Block diagonal matrix.
    pub fn block_diag(field: PrimeField, parts: &[Mat]) -> Mat {
        let rows: usize = parts.iter().map(Mat::rows).sum();
        let cols: usize = parts.iter().map(Mat::cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.paste(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Copies `m` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, m: &Mat) {
        for r in 0..m.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + m.cols].copy_from_slice(m.row(r));
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn row_range(&self, start: usize, end: usize) -> Mat {
        self.select_rows(&(start..end).collect::<Vec<_>>())
    }

    pub fn col_range(&self, start: usize, end: usize) -> Mat {
        self.select_cols(&(start..end).collect::<Vec<_>>())
    }

    /// Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn echelon(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if r != prow {
                for k in 0..m.cols {
                    m.data.swap(r * m.cols + k, prow * m.cols + k);
                }
            }
            let inv = f.inv(m.get(prow, c));
            for k in 0..m.cols {
                let v = m.get(prow, k);
                m.set(prow, k, f.mul(v, inv));
            }
            for r2 in 0..m.rows {
                if r2 == prow {
                    continue;
                }
                let factor = m.get(r2, c);
                if factor == 0 {
                    continue;
                }
                for k in c..m.cols {
                    let v = f.sub(m.get(r2, k), f.mul(factor, m.get(prow, k)));
                    m.set(r2, k, v);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Echelon { rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> Mat {
        let Echelon { rref, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = self.field;
        let mut k = Mat::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(rref.get(i, fc)));
            }
        }
        k
    }

    /// Rows spanning the left null space `{ y : y * self = 0 }`.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().kernel().transpose()
    }

    /// Linearly independent columns spanning the column space, chosen as the
    /// pivot columns of the original matrix.
    pub fn column_basis(&self) -> Mat {
        let pivots = self.echelon().pivots;
        self.select_cols(&pivots)
    }

    /// Rows of the reduced echelon form spanning the row space.
    pub fn row_basis(&self) -> Mat {
        let Echelon { rref, pivots } = self.echelon();
        rref.row_range(0, pivots.len())
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "row mismatch in solve");
        let aug = self.hstack(b);
        let Echelon { rref, pivots } = aug.echelon();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, rref.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Mat::identity(self.field, self.rows))?;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Injective as a linear map (full column rank).
    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    /// Surjective as a linear map (full row rank).
    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    /// Columns extending the column space of `self` to the whole ambient
    /// space, chosen among standard basis vectors.
    pub fn complement_basis(&self) -> Mat {
        let n = self.rows;
        let basis = self.column_basis();
        let mut current = basis.clone();
        let mut chosen = Vec::new();
        let mut rank = basis.cols;
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = Mat::zeros(self.field, n, 1);
            e.set(i, 0, 1);
            let trial = current.hstack(&e);
            if trial.rank() > rank {
                current = trial;
                rank += 1;
                chosen.push(i);
            }
        }
        let mut out = Mat::zeros(self.field, n, chosen.len());
        for (j, &i) in chosen.iter().enumerate() {
            out.set(i, j, 1);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Mat {
        assert!(self.is_square());
        let mut result = Mat::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }
}

/// Rank and a basis of the right null space (as columns).
pub fn rank_kernel(m: &Mat) -> (usize, Mat) {
    let k = m.kernel();
    (m.cols() - k.cols(), k)
}

/// Solves `m * x = b`, returning `None` when no solution exists.
pub fn solve_linear(m: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if m.rows() != b.rows() {
        return Err(Error::Malformed(format!(
            "system has {} equations but right-hand side has {} rows",
            m.rows(),
            b.rows()
        )));
    }
    if m.field() != b.field() {
        return Err(Error::Incompatible("matrices over different fields".into()));
    }
    Ok(m.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_rejects_composites_and_out_of_range() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(257).is_err());
        assert!(PrimeField::new(251).is_ok());
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 251] {
            let k = f(p);
            for a in 1..p as u8 {
                assert_eq!(k.mul(a, k.inv(a)), 1);
            }
        }
    }

    #[test]
    fn identity_has_full_rank() {
        let (rank, ker) = rank_kernel(&Mat::identity(f(2), 2));
        assert_eq!(rank, 2);
        assert_eq!(ker.cols(), 0);
    }

    #[test]
    fn zero_one_by_one() {
        let (rank, ker) = rank_kernel(&Mat::zeros(f(3), 1, 1));
        assert_eq!(rank, 0);
        assert_eq!(ker, Mat::from_rows(f(3), 1, &[vec![1]]).unwrap());
    }

    #[test]
    fn all_ones_over_f2() {
        let m = Mat::from_rows(f(2), 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let (rank, ker) = rank_kernel(&m);
        assert_eq!(rank, 1);
        // Exhaustive oracle: the only nonzero null vector in F_2^2.
        let nulls: Vec<[u8; 2]> =
            (0..4u8).map(|v| [v & 1, v >> 1]).filter(|v| v != &[0, 0]).filter(|v| (v[0] + v[1]) % 2 == 0).collect();
        assert_eq!(nulls, vec![[1, 1]]);
        assert_eq!(ker.col(0), vec![1, 1]);
    }

    #[test]
    fn malformed_entries_rejected() {
        assert!(Mat::from_vec(f(3), 2, 2, vec![0, 1, 2]).is_err());
        assert!(Mat::from_vec(f(3), 1, 1, vec![3]).is_err());
        assert!(Mat::from_rows(f(3), 2, &[vec![1]]).is_err());
    }

    #[test]
    fn solve_examples() {
        let k = f(5);
        let b = Mat::from_rows(k, 1, &[vec![3], vec![4]]).unwrap();
        assert_eq!(solve_linear(&Mat::identity(k, 2), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve_linear(&Mat::zeros(k, 2, 2), &b).unwrap(), None);
        assert!(solve_linear(&Mat::identity(k, 3), &b).is_err());

        let m = Mat::from_rows(f(2), 2, &[vec![1, 1]]).unwrap();
        let x = solve_linear(&m, &Mat::zeros(f(2), 1, 1)).unwrap().unwrap();
        let candidates: Vec<Vec<u8>> =
            (0..4u8).map(|v| vec![v & 1, v >> 1]).filter(|v| (v[0] + v[1]) % 2 == 0).collect();
        assert!(candidates.contains(&x.col(0)));
    }

    #[test]
    fn inverse_round_trip() {
        let k = f(7);
        let m = Mat::from_rows(k, 2, &[vec![2, 3], vec![1, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(k, 2));
        assert!(Mat::from_rows(k, 2, &[vec![1, 2], vec![2, 4]]).unwrap().inverse().is_none());
    }

    #[test]
    fn complement_completes_basis() {
        let k = f(3);
        let m = Mat::from_rows(k, 1, &[vec![1], vec![2], vec![0]]).unwrap();
        let c = m.complement_basis();
        assert_eq!(c.cols(), 2);
        assert_eq!(m.hstack(&c).rank(), 3);
    }

    fn arb_mat() -> impl Strategy<Value = Mat> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 0usize..6, 0usize..6).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0u8..p as u8, r * c)
                .prop_map(move |data| Mat::from_vec(PrimeField::new(p).unwrap(), r, c, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_mat()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_is_independent_null_basis(m in arb_mat()) {
            let (rank, k) = rank_kernel(&m);
            prop_assert_eq!(rank + k.cols(), m.cols());
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_absent_iff_augmented_rank_grows(m in arb_mat(), seed in any::<u64>()) {
            let k = m.field();
            let b_data: Vec<u8> = (0..m.rows()).map(|i| ((seed >> (i * 3)) % k.p() as u64) as u8).collect();
            let b = Mat::column(k, &b_data);
            let sol = solve_linear(&m, &b).unwrap();
            let grows = m.hstack(&b).rank() > m.rank();
            prop_assert_eq!(sol.is_none(), grows);
            if let Some(x) = sol {
                prop_assert_eq!(m.mul(&x), b);
            }
        }
    }
}
