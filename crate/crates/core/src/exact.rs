//! Fraction-free exact linear algebra over the integers.
//!
//! Everything the orientation oracle needs reduces to determinant signs and
//! integer kernel bases, so all computations stay in `i128` with no rational
//! arithmetic. Entry sizes in the oracle models are tiny (|a| ≤ 3, n ≤ 12),
//! far below any overflow threshold for Bareiss elimination.

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<i128>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> IMat {
        IMat {
            rows,
            cols,
            a: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> IMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        IMat {
            rows: r,
            cols: c,
            a: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self[(i, k)];
                if v == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += v * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.rows, rhs.rows);
        let mut out = IMat::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)];
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.cols, rhs.cols);
        let mut out = IMat::zeros(self.rows + rhs.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..rhs.rows {
            for j in 0..self.cols {
                out[(self.rows + i, j)] = rhs[(i, j)];
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Keep the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> IMat {
        let mut out = IMat::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    /// Keep the listed rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> IMat {
        let mut out = IMat::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out[(ii, j)] = self[(i, j)];
            }
        }
        out
    }

    /// Sign of the determinant of a square matrix: `-1`, `0`, or `+1`.
    /// Fraction-free Bareiss elimination.
    pub fn det_sign(&self) -> i32 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m = self.a.clone();
        let at = |m: &Vec<i128>, i: usize, j: usize| m[i * n + j];
        let mut sign = 1i32;
        let mut prev = 1i128;
        for k in 0..n {
            // Pivot search.
            if at(&m, k, k) == 0 {
                let mut found = None;
                for i in k + 1..n {
                    if at(&m, i, k) != 0 {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            let pivot = at(&m, k, k);
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = pivot * at(&m, i, j) - at(&m, i, k) * at(&m, k, j);
                    m[i * n + j] = v / prev;
                }
                m[i * n + k] = 0;
            }
            prev = pivot;
        }
        let d = at(&m, n - 1, n - 1);
        match d.cmp(&0) {
            std::cmp::Ordering::Less => -sign,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => sign,
        }
    }

    /// Sign of the determinant by Laplace cofactor expansion. Independent of
    /// the elimination route; only usable for small matrices.
    pub fn det_sign_permutation_expansion(&self) -> i32 {
        assert_eq!(self.rows, self.cols);
        fn det(m: &IMat, rows: &[usize], cols: &[usize]) -> i128 {
            if rows.is_empty() {
                return 1;
            }
            let r = rows[0];
            let mut acc = 0i128;
            for (k, &c) in cols.iter().enumerate() {
                let v = m[(r, c)];
                if v == 0 {
                    continue;
                }
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let minor = det(m, sub_rows, &sub_cols);
                if k % 2 == 0 {
                    acc += v * minor;
                } else {
                    acc -= v * minor;
                }
            }
            acc
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        let d = det(self, &idx, &idx);
        match d.cmp(&0) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    /// Rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.a.clone();
        let (r, c) = (self.rows, self.cols);
        let at = |m: &Vec<i128>, i: usize, j: usize| m[i * c + j];
        let mut rank = 0;
        let mut prev = 1i128;
        for col in 0..c {
            if rank == r {
                break;
            }
            let mut piv = None;
            for i in rank..r {
                if at(&m, i, col) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            for j in 0..c {
                m.swap(rank * c + j, p * c + j);
            }
            let pivot = at(&m, rank, col);
            for i in rank + 1..r {
                for j in col + 1..c {
                    let v = pivot * at(&m, i, j) - at(&m, i, col) * at(&m, rank, j);
                    m[i * c + j] = v / prev;
                }
                m[i * c + col] = 0;
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Integer basis of the kernel, one column per basis vector.
    ///
    /// Row-reduces over the rationals (tracked as integer rows scaled during
    /// elimination) and clears denominators columnwise.
    pub fn kernel_basis(&self) -> IMat {
        let (r, c) = (self.rows, self.cols);
        // Work over rationals implemented as (num: i128) rows with a shared
        // reduction using exact integer row operations (each elimination step
        // multiplies a row; signs do not matter for spans, and the final
        // basis columns are normalized by gcd).
        let mut m: Vec<Vec<i128>> = (0..r).map(|i| (0..c).map(|j| self[(i, j)]).collect()).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let mut piv = None;
            for i in row..r {
                if m[i][col] != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            m.swap(row, p);
            let pivot = m[row][col];
            for i in 0..r {
                if i == row || m[i][col] == 0 {
                    continue;
                }
                let f = m[i][col];
                for j in 0..c {
                    m[i][j] = m[i][j] * pivot - m[row][j] * f;
                }
                reduce_row(&mut m[i]);
            }
            reduce_row(&mut m[row]);
            pivots.push((row, col));
            row += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..c).filter(|j| !pivot_cols.contains(j)).collect();
        let mut out = IMat::zeros(c, free_cols.len());
        for (k, &fc) in free_cols.iter().enumerate() {
            // x[fc] = 1 scaled by the product of pivots it interacts with.
            // Solve exactly: x[fc] = L (lcm of pivots), x[pc] = -m[row][fc] * L / pivot.
            let mut lcm: i128 = 1;
            for &(pr, pc) in &pivots {
                let _ = pc;
                let piv = m[pr][pivot_cols[pr]];
                lcm = lcm / gcd(lcm, piv.abs()) * piv.abs();
            }
            out[(fc, k)] = lcm;
            for &(pr, pc) in &pivots {
                let piv = m[pr][pc];
                out[(pc, k)] = -m[pr][fc] * lcm / piv;
            }
            // Normalize the column.
            let mut g = 0i128;
            for i in 0..c {
                g = gcd(g, out[(i, k)].abs());
            }
            if g > 1 {
                for i in 0..c {
                    out[(i, k)] /= g;
                }
            }
        }
        out
    }
}

fn reduce_row(row: &mut [i128]) {
    let mut g = 0i128;
    for &v in row.iter() {
        g = gcd(g, v.abs());
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for v in row.iter_mut() {
            *v /= g;
        }
    }
}

pub fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.a[i * self.cols + j]
    }
}

/// Relative orientation of two bases of the same subspace, given as column
/// matrices in ambient coordinates: the sign of `det(B1ᵀ B2)`. Returns 0 if
/// the columns do not span the same space (degenerate Gram pairing).
pub fn relative_orientation(b1: &IMat, b2: &IMat) -> i32 {
    assert_eq!(b1.rows, b2.rows);
    assert_eq!(b1.cols, b2.cols);
    b1.transpose().mul(b2).det_sign()
}
