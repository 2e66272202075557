use std::fmt;

use super::gcd::{from_level, to_level_shifted, with_level, Level};
use super::{normalize_unit, Exponents, LaurentPoly};
use crate::scalar::{GcdRing, Scalar};

/// Dense matrix of Laurent polynomials sharing one ring and variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix<C> {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<LaurentPoly<C>>,
}

impl<C: Scalar> PolyMatrix<C> {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            entries: vec![LaurentPoly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(nvars));
        }
        m
    }

    /// Build from rows; every row must have the same length.
    pub fn from_rows(nvars: usize, rows: Vec<Vec<LaurentPoly<C>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            nvars,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly<C>) {
        assert_eq!(v.nvars(), self.nvars, "variable count mismatch");
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &LaurentPoly<C>) {
        let idx = i * self.cols + j;
        self.entries[idx] = &self.entries[idx] + v;
    }

    pub fn add_monomial(&mut self, i: usize, j: usize, exps: Exponents, c: C) {
        self.entries[i * self.cols + j].add_term(exps, c);
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly<C>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len(), self.nvars);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Drop the given columns.
    pub fn without_cols(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|j| !drop.contains(j)).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &keep)
    }

    /// Exponent shift making every entry of each row an ordinary polynomial.
    fn row_shifts(&self) -> Vec<Exponents> {
        (0..self.rows)
            .map(|i| {
                let mut lo: Option<Exponents> = None;
                for p in self.row(i).iter().filter(|p| !p.is_zero()) {
                    let m = p.min_exponents();
                    lo = Some(match lo {
                        None => m,
                        Some(l) => l.iter().zip(&m).map(|(a, b)| *a.min(b)).collect(),
                    });
                }
                lo.unwrap_or_else(|| vec![0; self.nvars])
            })
            .collect()
    }

    fn to_level_rows<L: Level<Base = C>>(&self, shifts: &[Exponents]) -> Vec<Vec<L>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|p| to_level_shifted::<L>(p, &shifts[i]))
                    .collect()
            })
            .collect()
    }

    fn det_at<L: Level<Base = C>>(&self) -> LaurentPoly<C> {
        let shifts = self.row_shifts();
        let a = self.to_level_rows::<L>(&shifts);
        let d = bareiss_det(a);
        let mut total = vec![0i64; self.nvars];
        for s in &shifts {
            for (t, x) in total.iter_mut().zip(s) {
                *t += x;
            }
        }
        from_level(&d, &total)
    }

    /// Exact determinant by fraction-free elimination. Rows are first
    /// multiplied by monomials to clear negative exponents; the monomials
    /// are divided back out at the end.
    pub fn det(&self) -> LaurentPoly<C> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return LaurentPoly::one(self.nvars);
        }
        with_level!(self.nvars, C, self.det_at())
    }

    fn gcd_of_minors_at<L: Level<Base = C>>(&self, size: usize) -> LaurentPoly<C> {
        let shifts = self.row_shifts();
        let a = self.to_level_rows::<L>(&shifts);
        let mut g = L::zero();
        for rows in Combinations::new(self.rows, size) {
            for cols in Combinations::new(self.cols, size) {
                let minor: Vec<Vec<L>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect())
                    .collect();
                let d = bareiss_det(minor);
                if d.is_zero() {
                    continue;
                }
                g = g.gcd(&d);
                if g.is_unit() {
                    return LaurentPoly::one(self.nvars);
                }
            }
        }
        normalize_unit(&from_level(&g, &vec![0; self.nvars])).poly
    }

    /// Gcd of all `size x size` minors in canonical unit form; zero when all
    /// minors vanish, one for `size == 0`. Minors are visited in
    /// lexicographic order of (rows, columns) and the scan stops as soon as
    /// the running gcd is a unit.
    pub fn gcd_of_minors(&self, size: usize) -> LaurentPoly<C> {
        assert!(size <= self.rows.min(self.cols), "minor size exceeds matrix");
        if size == 0 {
            return LaurentPoly::one(self.nvars);
        }
        with_level!(self.nvars, C, self.gcd_of_minors_at(size))
    }
}

impl<C: Scalar> fmt::Display for PolyMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Bareiss fraction-free determinant over an integral domain.
pub(crate) fn bareiss_det<T: GcdRing>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return T::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly");
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let out = cur.clone();
        let k = cur.len();
        let mut next = cur;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;
    use crate::scalar::Fp;
    use num_bigint::BigInt;

    fn z(s: &str) -> LaurentPoly<BigInt> {
        parse_laurent(s, 1).unwrap()
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn determinants() {
        assert!(PolyMatrix::<BigInt>::identity(3, 1).det().is_one());
        let d = PolyMatrix::from_rows(1, vec![vec![z("t - 1"), z("0")], vec![z("0"), z("t + 1")]]);
        assert_eq!(d.det(), z("t^2 - 1"));
        let zero = PolyMatrix::from_rows(1, vec![vec![z("0")]]);
        assert!(zero.det().is_zero());
    }

    #[test]
    fn determinant_with_negative_exponents_and_pivoting() {
        let m = PolyMatrix::from_rows(
            1,
            vec![
                vec![z("0"), z("t^-1"), z("2")],
                vec![z("t"), z("1"), z("0")],
                vec![z("1"), z("0"), z("t^-2 + 1")],
            ],
        );
        // cofactor expansion by hand
        // det = -t^-1 * (t*(t^-2 + 1) - 0) + 2 * (0 - 1) = -t^-2 - 1 - 2
        assert_eq!(m.det(), z("-t^-2 - 3"));
    }

    #[test]
    fn minors() {
        let m = PolyMatrix::from_rows(1, vec![vec![z("t - 1"), z("1")], vec![z("0"), z("0")]]);
        assert!(m.gcd_of_minors(1).is_one());
        let d = PolyMatrix::from_rows(1, vec![vec![z("t - 1"), z("0")], vec![z("0"), z("t - 1")]]);
        assert_eq!(d.gcd_of_minors(2), normalize_unit(&z("t^2 - 2*t + 1")).poly);
        assert_eq!(d.gcd_of_minors(1), normalize_unit(&z("t - 1")).poly);
        assert!(d.gcd_of_minors(0).is_one());
    }

    #[test]
    fn determinant_over_finite_field() {
        let f = |s: &str| parse_laurent::<Fp<13>>(s, 1).unwrap();
        let m = PolyMatrix::from_rows(1, vec![vec![f("t"), f("1")], vec![f("1"), f("t")]]);
        assert_eq!(m.det(), f("t^2 - 1"));
    }
}
