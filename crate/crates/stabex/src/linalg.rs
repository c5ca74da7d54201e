//! Dense matrices over arbitrary-precision rationals.
//!
//! Every operation is exact: entries are `BigRational` values kept in lowest
//! terms with positive denominators (maintained by the underlying `Ratio`
//! type), and rank is computed by fraction-free (Bareiss) elimination over
//! integers after clearing denominators row by row.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::fmt;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` in lowest-terms-agnostic form.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("invalid integer {t:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

/// Renders a rational as `"p"` or `"p/q"` (lowest terms, positive denominator).
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from row vectors. All rows must share a length; an empty list
    /// yields a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        Mat { rows: nrows, cols: ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_row(&mut self, i: usize, row: &[Rat]) {
        assert_eq!(row.len(), self.cols);
        self.data[i * self.cols..(i + 1) * self.cols].clone_from_slice(row);
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self[(i, j)].clone() } else { other[(i - self.rows, j)].clone() }
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// Exact rank via fraction-free Bareiss elimination. Denominators are
    /// cleared per row first (row scaling preserves rank), then every
    /// division in the Sylvester update is exact over `BigInt`.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let lcm = self
                    .row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect();
        let (h, w) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0usize;
        for c in 0..w {
            if r == h {
                break;
            }
            let Some(p) = (r..h).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            for i in r + 1..h {
                for j in c + 1..w {
                    let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    m[i][j] = num / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: plain Gaussian elimination over rationals.
    fn naive_rank(m: &Mat) -> usize {
        let mut a: Vec<Vec<Rat>> = (0..m.nrows()).map(|i| m.row(i).to_vec()).collect();
        let (h, w) = (m.nrows(), m.ncols());
        let mut r = 0;
        for c in 0..w {
            if r == h {
                break;
            }
            let Some(p) = (r..h).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = a[r][c].clone();
            for i in r + 1..h {
                if a[i][c].is_zero() {
                    continue;
                }
                let factor = &a[i][c] / &inv;
                for j in c..w {
                    let sub = &factor * &a[r][j];
                    a[i][j] -= sub;
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-7", "5/2", "-3/4", "10/4"] {
            let r = parse_rat(s).unwrap();
            let back = parse_rat(&format_rat(&r)).unwrap();
            assert_eq!(r, back);
        }
        assert_eq!(format_rat(&parse_rat("10/4").unwrap()), "5/2");
        assert_eq!(format_rat(&rat(3)), "3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn rational_invariants() {
        let r = ratio(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn identity_product() {
        let m = Mat::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(0), ratio(1, 2), rat(-1)],
        ]);
        assert_eq!(Mat::identity(2).mul(&m), m);
        assert_eq!(m.mul(&Mat::identity(3)), m);
    }

    #[test]
    fn known_ranks() {
        assert_eq!(Mat::zeros(3, 4).rank(), 0);
        assert_eq!(Mat::identity(5).rank(), 5);
        let singular = Mat::from_rows(vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
            vec![rat(3), rat(6)],
        ]);
        assert_eq!(singular.rank(), 1);
        let fractional = Mat::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 6)],
            vec![rat(1), rat(1)],
        ]);
        assert_eq!(fractional.rank(), 2);
    }

    #[test]
    fn transpose_rank_equal() {
        let m = Mat::from_rows(vec![
            vec![rat(1), rat(0), rat(2), rat(4)],
            vec![rat(0), rat(1), rat(1), rat(1)],
            vec![rat(1), rat(1), rat(3), rat(5)],
        ]);
        assert_eq!(m.rank(), m.transpose().rank());
    }

    proptest! {
        #[test]
        fn bareiss_matches_naive_gaussian(
            entries in proptest::collection::vec(-6i64..=6, 1..=30),
            cols in 1usize..=5,
        ) {
            let cols = cols.min(entries.len());
            let rows = entries.len() / cols;
            prop_assume!(rows >= 1);
            let m = Mat::from_fn(rows, cols, |i, j| rat(entries[i * cols + j]));
            prop_assert_eq!(m.rank(), naive_rank(&m));
        }

        #[test]
        fn stack_ranks_bounded(
            entries in proptest::collection::vec(-3i64..=3, 16),
        ) {
            let a = Mat::from_fn(2, 4, |i, j| rat(entries[i * 4 + j]));
            let b = Mat::from_fn(2, 4, |i, j| rat(entries[8 + i * 4 + j]));
            let v = a.vstack(&b);
            prop_assert!(v.rank() <= a.rank() + b.rank());
            let h = a.hstack(&b);
            prop_assert!(h.rank() <= a.rank() + b.rank());
        }
    }
}
