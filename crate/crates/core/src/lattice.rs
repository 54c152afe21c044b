//! Small exact linear algebra over Z and Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend_from_slice(row);
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a != 0 {
                for (o, &m) in out.iter_mut().zip(self.row(i)) {
                    *o += a * m;
                }
            }
        }
        out
    }

    pub fn mul_rat_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(&a, _)| a != 0)
                    .fold(Rational::zero(), |acc, (&a, x)| acc + x * rat(a))
            })
            .collect()
    }

    /// Inverse of a unimodular matrix, or `None` if not invertible over Z.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| self.column(j).into_iter().map(rat).collect()).collect();
        let mut inv = IntMatrix::zeros(n, n);
        for j in 0..n {
            let e: Vec<Rational> = (0..n).map(|i| rat(i64::from(i == j))).collect();
            let x = solve_rational(&cols, &e)?;
            for (i, xi) in x.iter().enumerate() {
                if !xi.is_integer() {
                    return None;
                }
                inv[(i, j)] = to_i64(&xi.to_integer());
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[i64], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(&x, _)| x != 0).fold(Rational::zero(), |acc, (&x, y)| acc + y * rat(x))
}

pub fn to_i64(n: &BigInt) -> i64 {
    i64::try_from(n).expect("integer overflow")
}

/// Solves `Σ x_j cols[j] = b` over Q. Returns the unique solution when the
/// columns are linearly independent and the system is consistent.
pub fn solve_rational(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let k = cols.len();
    // augmented matrix n × (k + 1)
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            return None;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if (r..n).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| a[i][k].clone()).collect())
}

/// Smith normal form data for the subgroup generated by the columns of `a`
/// inside `Z^rows`: a unimodular `u` and invariant factors `d` such that
/// `u · a · v = diag(d)` for some unimodular `v`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub diag: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Coordinates of `x` in `Z^rows / image(a)`: torsion residues for each
    /// invariant factor > 1, then the free coordinates.
    pub fn quotient_class(&self, x: &[i64]) -> (Vec<i64>, Vec<(i64, i64)>) {
        let y = self.u.mul_vec(x);
        let mut torsion = Vec::new();
        for (i, &d) in self.diag.iter().enumerate() {
            if d > 1 {
                torsion.push((y[i].rem_euclid(d), d));
            }
        }
        let free = y[self.diag.len()..].to_vec();
        (free, torsion)
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut a = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut t = 0;
    let swap_rows = |a: &mut IntMatrix, i: usize, j: usize| {
        for c in 0..a.cols {
            a.data.swap(i * a.cols + c, j * a.cols + c);
        }
    };
    let swap_cols = |a: &mut IntMatrix, i: usize, j: usize| {
        for r in 0..a.rows {
            a.data.swap(r * a.cols + i, r * a.cols + j);
        }
    };
    // row_i -= f * row_j
    let row_sub = |a: &mut IntMatrix, i: usize, j: usize, f: i64| {
        for c in 0..a.cols {
            let v = a[(j, c)];
            a[(i, c)] -= f * v;
        }
    };
    let col_sub = |a: &mut IntMatrix, i: usize, j: usize, f: i64| {
        for r in 0..a.rows {
            let v = a[(r, j)];
            a[(r, i)] -= f * v;
        }
    };
    let mut diag = Vec::new();
    while t < m.min(n) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[(i, j)] != 0 && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let p = a[(t, t)];
            let mut dirty = false;
            for i in t + 1..m {
                let q = a[(i, t)].div_euclid(p);
                if q != 0 {
                    row_sub(&mut a, i, t, q);
                    row_sub(&mut u, i, t, q);
                }
                if a[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = a[(t, j)].div_euclid(p);
                if q != 0 {
                    col_sub(&mut a, j, t, q);
                }
                if a[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // enforce divisibility of the trailing block
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[(i, j)] % p != 0));
                match bad {
                    Some(i) => {
                        row_sub(&mut a, t, i, -1);
                        row_sub(&mut u, t, i, -1);
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..m {
                if a[(i, t)] != 0 && a[(i, t)].abs() < a[best].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if a[(t, j)] != 0 && a[(t, j)].abs() < a[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                swap_rows(&mut a, t, best.0);
                swap_rows(&mut u, t, best.0);
            } else if best.1 != t {
                swap_cols(&mut a, t, best.1);
            }
        }
        if a[(t, t)] < 0 {
            for c in 0..n {
                a[(t, c)] = -a[(t, c)];
            }
            for c in 0..m {
                u[(t, c)] = -u[(t, c)];
            }
        }
        diag.push(a[(t, t)]);
        t += 1;
    }
    SmithForm { u, diag }
}

/// `true` if every entry is ≥ 0.
pub fn all_nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

pub fn rat_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_form_of_diagonalizable() {
        // image spanned by (2,0) and (0,3): Z^2 / image ≅ Z/6
        let a = IntMatrix::from_columns(2, &[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diag, vec![1, 6]);
        let (free, tors) = s.quotient_class(&[1, 1]);
        assert!(free.is_empty());
        assert_eq!(tors.len(), 1);
        assert_eq!(tors[0].1, 6);
        // the generators vanish in the quotient
        assert_eq!(s.quotient_class(&[2, 0]).1[0].0, 0);
        assert_eq!(s.quotient_class(&[0, 3]).1[0].0, 0);
    }

    #[test]
    fn smith_form_with_free_part() {
        let a = IntMatrix::from_columns(3, &[vec![1, -1, 0], vec![0, 1, -1]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diag, vec![1, 1]);
        let (free, _) = s.quotient_class(&[1, 0, 0]);
        assert_eq!(free.len(), 1);
        assert_eq!(free[0].abs(), 1);
        let (free2, _) = s.quotient_class(&[0, 0, 1]);
        assert_eq!(free, free2);
    }

    #[test]
    fn rational_solve() {
        let cols = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let x = solve_rational(&cols, &[rat(1), rat(0)]).unwrap();
        assert_eq!(x, vec![rat_frac(1, 2), rat_frac(1, 2)]);
        let cols = vec![vec![rat(1), rat(0), rat(0)]];
        assert!(solve_rational(&cols, &[rat(0), rat(1), rat(0)]).is_none());
    }

    #[test]
    fn unimodular_inverse() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_none());
    }

    #[test]
    fn rational_text_roundtrip() {
        for q in [rat_frac(1, 2), rat(3), rat_frac(-5, 7)] {
            assert_eq!(parse_rat(&rat_to_string(&q)).unwrap(), q);
        }
    }
}
