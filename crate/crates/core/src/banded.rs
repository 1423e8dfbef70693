//! Square band matrices with at most two sub- and two super-diagonals.
//!
//! Every matrix the schemes build (the centered tridiagonal operator, the
//! pentadiagonal fourth-order operator, the implicit step matrices and the
//! mixed Newton systems) fits in this storage. Solves use Gaussian
//! elimination with partial pivoting restricted to the band, which costs
//! O(n) for fixed bandwidth.

use crate::error::{Error, Result};

/// Largest supported number of off-diagonals on either side.
pub const MAX_BANDWIDTH: usize = 2;

/// A square band matrix stored diagonal by diagonal.
///
/// The diagonal with offset `d = j - i` holds `n - |d|` entries; entry
/// `(i, j)` lives at position `min(i, j)` of that diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    diags: Vec<Vec<f64>>,
}

impl BandedMatrix {
    /// Zero matrix of dimension `n` with the given bandwidths.
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        if lower > MAX_BANDWIDTH || upper > MAX_BANDWIDTH {
            return Err(Error::InvalidParameter(format!("bandwidth ({lower}, {upper}) exceeds {MAX_BANDWIDTH}")));
        }
        let diags = (0..lower + upper + 1)
            .map(|k| {
                let off = k.abs_diff(lower);
                vec![0.0; n.saturating_sub(off)]
            })
            .collect();
        Ok(Self { n, lower, upper, diags })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, 0, 0)?;
        m.diags[0].fill(1.0);
        Ok(m)
    }

    pub fn from_diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len(), 0, 0)?;
        m.diags[0].copy_from_slice(values);
        Ok(m)
    }

    /// Constant-coefficient band matrix; `stencil` lists the values on
    /// offsets `-lower ..= upper`.
    pub fn from_stencil(n: usize, lower: usize, stencil: &[f64]) -> Result<Self> {
        if stencil.len() < lower + 1 {
            return Err(Error::InvalidParameter("stencil shorter than lower bandwidth".into()));
        }
        let upper = stencil.len() - lower - 1;
        let mut m = Self::zeros(n, lower, upper)?;
        for (d, &v) in m.diags.iter_mut().zip(stencil) {
            d.fill(v);
        }
        Ok(m)
    }

    /// `tridiag(sub, diag, sup)` with constant entries.
    pub fn tridiag(n: usize, sub: f64, diag: f64, sup: f64) -> Result<Self> {
        Self::from_stencil(n, 1, &[sub, diag, sup])
    }

    /// Pentadiagonal matrix with constant entries on offsets -2..=2.
    pub fn pentadiag(n: usize, stencil: [f64; 5]) -> Result<Self> {
        Self::from_stencil(n, 2, &stencil)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower(&self) -> usize {
        self.lower
    }

    #[inline]
    pub fn upper(&self) -> usize {
        self.upper
    }

    /// Entries of the diagonal with offset `offset`, or `None` outside the band.
    pub fn diagonal(&self, offset: isize) -> Option<&[f64]> {
        self.band_index(offset).map(|k| self.diags[k].as_slice())
    }

    pub fn diagonal_mut(&mut self, offset: isize) -> Option<&mut [f64]> {
        self.band_index(offset).map(move |k| self.diags[k].as_mut_slice())
    }

    fn band_index(&self, offset: isize) -> Option<usize> {
        if offset < -(self.lower as isize) || offset > self.upper as isize {
            None
        } else {
            Some((offset + self.lower as isize) as usize)
        }
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        match self.band_index(j as isize - i as isize) {
            Some(k) => self.diags[k][i.min(j)],
            None => 0.0,
        }
    }

    /// Set entry `(i, j)`. Panics if `(i, j)` is outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        let k = self.band_index(j as isize - i as isize).unwrap_or_else(|| panic!("entry ({i}, {j}) outside the band"));
        self.diags[k][i.min(j)] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j);
        self.set(i, j, v + value);
    }

    /// Columns `j` with a stored entry in row `i`.
    fn row_span(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.lower)..=(i + self.upper).min(self.n - 1)
    }

    /// `alpha * I + beta * self`.
    pub fn shifted_scaled(&self, alpha: f64, beta: f64) -> Self {
        let mut m = self.clone();
        for d in &mut m.diags {
            d.iter_mut().for_each(|v| *v *= beta);
        }
        m.diags[self.lower].iter_mut().for_each(|v| *v += alpha);
        m
    }

    /// Copy of `self` where every row flagged in `identity_rows` is replaced
    /// by the corresponding row of the identity.
    pub fn with_identity_rows(&self, identity_rows: &[bool]) -> Result<Self> {
        check_len(self.n, identity_rows.len())?;
        let mut m = self.clone();
        for (i, _) in identity_rows.iter().enumerate().filter(|(_, &a)| a) {
            for j in self.row_span(i) {
                m.set(i, j, if i == j { 1.0 } else { 0.0 });
            }
        }
        Ok(m)
    }

    /// Matrix-vector product in O(n * bandwidth).
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for (k, band) in self.diags.iter().enumerate() {
            let off = k as isize - self.lower as isize;
            if off >= 0 {
                let off = off as usize;
                for (i, &a) in band.iter().enumerate() {
                    y[i] += a * x[i + off];
                }
            } else {
                let off = (-off) as usize;
                for (j, &a) in band.iter().enumerate() {
                    y[j + off] += a * x[j];
                }
            }
        }
    }

    /// Row-major dense copy, mostly for tests and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// `M_ii > sum_{j != i} |M_ij|` for every row.
    pub fn is_strictly_diag_dominant(&self) -> bool {
        (0..self.n).all(|i| {
            let off: f64 = self.row_span(i).filter(|&j| j != i).map(|j| self.get(i, j).abs()).sum();
            self.get(i, i) > off
        })
    }

    /// Strict diagonal dominance with positive diagonal and non-positive
    /// off-diagonal entries.
    pub fn is_m_matrix(&self) -> bool {
        let signs_ok = (0..self.n)
            .all(|i| self.get(i, i) > 0.0 && self.row_span(i).filter(|&j| j != i).all(|j| self.get(i, j) <= 0.0));
        signs_ok && self.is_strictly_diag_dominant()
    }

    /// True when every entry, including those outside the band, is >= 0.
    pub fn is_nonnegative(&self) -> bool {
        self.diags.iter().flatten().all(|&v| v >= 0.0)
    }

    pub(crate) fn max_abs(&self) -> f64 {
        self.diags.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Solve `M x = rhs` by banded Gaussian elimination with partial pivoting.
///
/// Row interchanges are confined to the `lower` rows below the pivot, so
/// the upper bandwidth of the factor grows by at most `lower`; the working
/// storage is sized for that fill.
pub fn banded_solve(m: &BandedMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    check_len(m.n, rhs.len())?;
    let n = m.n;
    let kl = m.lower;
    let ku = m.upper;
    // Row i holds columns i - kl ..= i + kl + ku.
    let width = 2 * kl + ku + 1;
    let mut w = vec![0.0; n * width];
    let idx = |i: usize, j: usize| i * width + (j + kl - i);
    for i in 0..n {
        for j in m.row_span(i) {
            w[idx(i, j)] = m.get(i, j);
        }
    }
    let mut b = rhs.to_vec();
    let tiny = m.max_abs() * f64::EPSILON;

    for k in 0..n {
        let last_row = (k + kl).min(n - 1);
        let last_col = (k + kl + ku).min(n - 1);

        let mut p = k;
        let mut best = w[idx(k, k)].abs();
        for r in k + 1..=last_row {
            let v = w[idx(r, k)].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if !(best > tiny) {
            return Err(Error::SingularPivot { row: k, pivot: best });
        }
        if p != k {
            for j in k..=last_col {
                w.swap(idx(k, j), idx(p, j));
            }
            b.swap(k, p);
        }

        let pivot = w[idx(k, k)];
        for r in k + 1..=last_row {
            let factor = w[idx(r, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            w[idx(r, k)] = 0.0;
            for j in k + 1..=last_col {
                w[idx(r, j)] -= factor * w[idx(k, j)];
            }
            b[r] -= factor * b[k];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let last_col = (i + kl + ku).min(n - 1);
        let mut s = b[i];
        for j in i + 1..=last_col {
            s -= w[idx(i, j)] * x[j];
        }
        x[i] = s / w[idx(i, i)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn matvec_small_examples() {
        let m = BandedMatrix::tridiag(3, -1.0, 2.0, -1.0).unwrap();
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 0.0, 1.0]);

        let id = BandedMatrix::identity(4).unwrap();
        let x = [3.0, -1.0, 0.0, 7.0];
        assert_eq!(id.matvec(&x).unwrap(), x.to_vec());

        let p = BandedMatrix::pentadiag(5, [1.0, -16.0, 30.0, -16.0, 1.0]).unwrap().shifted_scaled(0.0, 1.0 / 12.0);
        let y = p.matvec(&[0.0, 1.0, 4.0, 9.0, 16.0]).unwrap();
        assert_relative_eq!(y[2], -2.0, epsilon = 1e-14);
    }

    #[test]
    fn matvec_rejects_wrong_length() {
        let m = BandedMatrix::identity(3).unwrap();
        assert!(matches!(m.matvec(&[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 3, got: 2 })));
    }

    #[test]
    fn solve_small_examples() {
        let id = BandedMatrix::identity(3).unwrap();
        assert_eq!(banded_solve(&id, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);

        let t = BandedMatrix::tridiag(2, -1.0, 2.0, -1.0).unwrap();
        let x = banded_solve(&t, &[1.0, 1.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-15);

        let d = BandedMatrix::from_diag(&[2.0, 4.0]).unwrap();
        assert_eq!(banded_solve(&d, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn solve_needs_pivoting() {
        // Zero leading diagonal entry forces a row swap.
        let mut m = BandedMatrix::zeros(3, 1, 1).unwrap();
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 1.0);
        m.set(1, 2, 2.0);
        m.set(2, 1, 1.0);
        m.set(2, 2, 3.0);
        let x_true = [1.0, -2.0, 0.5];
        let rhs = m.matvec(&x_true).unwrap();
        let x = banded_solve(&m, &rhs).unwrap();
        for (a, b) in x.iter().zip(x_true) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut s = BandedMatrix::zeros(2, 1, 1).unwrap();
        s.set(0, 0, 1.0);
        s.set(0, 1, 2.0);
        s.set(1, 0, 2.0);
        s.set(1, 1, 4.0);
        assert!(matches!(banded_solve(&s, &[1.0, 1.0]), Err(Error::SingularPivot { .. })));
    }

    #[test]
    fn dominance_and_m_matrix() {
        let a = BandedMatrix::tridiag(6, -1.0, 3.0, -1.0).unwrap();
        assert!(a.is_strictly_diag_dominant());
        assert!(a.is_m_matrix());

        let b = BandedMatrix::tridiag(6, -1.0, 2.0, -1.0).unwrap();
        assert!(!b.is_strictly_diag_dominant());
        assert!(!b.is_m_matrix());

        let c = BandedMatrix::pentadiag(6, [1.0, -16.0, 30.0, -16.0, 1.0]).unwrap();
        assert!(!c.is_m_matrix());
    }

    #[test]
    fn identity_rows_replace_band_entries() {
        let a = BandedMatrix::pentadiag(5, [1.0, -4.0, 6.0, -4.0, 1.0]).unwrap();
        let m = a.with_identity_rows(&[false, true, false, false, true]).unwrap();
        assert_eq!(m.to_dense()[1], vec![0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.to_dense()[4], vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(m.to_dense()[2], a.to_dense()[2]);
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(BandedMatrix::zeros(0, 1, 1).is_err());
        assert!(BandedMatrix::zeros(4, 3, 0).is_err());
    }

    #[test]
    fn band_lengths_match_offsets() {
        let m = BandedMatrix::zeros(5, 2, 1).unwrap();
        assert_eq!(m.diagonal(-2).unwrap().len(), 3);
        assert_eq!(m.diagonal(-1).unwrap().len(), 4);
        assert_eq!(m.diagonal(0).unwrap().len(), 5);
        assert_eq!(m.diagonal(1).unwrap().len(), 4);
        assert!(m.diagonal(2).is_none());
    }
}
