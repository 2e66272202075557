//! Module orders over `F[t^{±1}]`, a principal ideal domain.
//!
//! Matrices are first made polynomial (rows or columns multiplied by powers
//! of `t`, which are units in the Laurent ring) and then reduced to echelon
//! form over `F[t]` with unimodular row operations. Any power of `t` in the
//! resulting order disappears under unit normalization, so working in `F[t]`
//! computes the localized answer.

use num_traits::{One, Zero};
use thiserror::Error;

use super::dense::DensePoly;
use super::gcd::{from_level, to_level_shifted};
use super::{normalize_unit, LaurentPoly, PolyMatrix};
use crate::scalar::FieldScalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PidError {
    #[error("the elimination route needs one variable, got {0}")]
    NotPid(usize),
    #[error("matrices of shape {0}x{1} and {2}x{3} cannot be composed")]
    Shape(usize, usize, usize, usize),
    #[error("the two boundary maps do not compose to zero")]
    ChainMismatch,
}

type Poly<F> = DensePoly<F>;
type Rows<F> = Vec<Vec<Poly<F>>>;

fn identity<F: FieldScalar>(n: usize) -> Rows<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect())
        .collect()
}

/// `row[dst] -= q * row[src]`.
fn axpy_rows<F: FieldScalar>(m: &mut Rows<F>, dst: usize, src: usize, q: &Poly<F>) {
    let (d, s) = if dst < src {
        let (a, b) = m.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = m.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x = x.clone() - q.clone() * y.clone();
        }
    }
}

/// `col[dst] += q * col[src]`, the inverse of the row operation above
/// applied on the right.
fn axpy_cols<F: FieldScalar>(m: &mut Rows<F>, dst: usize, src: usize, q: &Poly<F>) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            row[dst] = row[dst].clone() + q.clone() * row[src].clone();
        }
    }
}

/// Row echelon form over `F[t]`.
struct Echelon<F> {
    mat: Rows<F>,
    rank: usize,
    /// Column of the pivot in each of the first `rank` rows.
    pivot_cols: Vec<usize>,
    /// Unit `c` with `det(U) = c` when only the reduced matrix is tracked.
    det_unit: F,
    /// Transform `U` with `U * A = mat`, and its inverse `V`.
    transform: Option<(Rows<F>, Rows<F>)>,
}

fn echelon<F: FieldScalar>(mut a: Rows<F>, cols: usize, track: bool) -> Echelon<F> {
    let rows = a.len();
    let mut transform = track.then(|| (identity::<F>(rows), identity::<F>(rows)));
    let mut det_unit = F::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut found = false;
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].degree().unwrap())
            else {
                break;
            };
            found = true;
            if p != r {
                a.swap(p, r);
                det_unit = -det_unit;
                if let Some((u, v)) = transform.as_mut() {
                    u.swap(p, r);
                    for row in v.iter_mut() {
                        row.swap(p, r);
                    }
                }
            }
            let mut clean = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let (q, rem) = a[i][c].div_rem(&a[r][c]);
                axpy_rows(&mut a, i, r, &q);
                if let Some((u, v)) = transform.as_mut() {
                    axpy_rows(u, i, r, &q);
                    axpy_cols(v, r, i, &q);
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if found {
            let lead = *a[r][c].lead().unwrap();
            if !lead.is_one() {
                let s = Poly::constant(lead.inv());
                for x in a[r].iter_mut() {
                    *x = x.clone() * s.clone();
                }
                det_unit = det_unit * lead.inv();
                if let Some((u, v)) = transform.as_mut() {
                    for x in u[r].iter_mut() {
                        *x = x.clone() * s.clone();
                    }
                    let back = Poly::constant(lead);
                    for row in v.iter_mut() {
                        row[r] = row[r].clone() * back.clone();
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    Echelon {
        mat: a,
        rank: r,
        pivot_cols,
        det_unit,
        transform,
    }
}

impl<F: FieldScalar> Echelon<F> {
    /// Order of `F[t]^cols / rowspace`: product of pivots at full column
    /// rank, zero otherwise.
    fn cokernel_order(&self, cols: usize) -> Poly<F> {
        if self.rank < cols {
            return Poly::zero();
        }
        (0..self.rank).fold(Poly::one(), |acc, i| acc * self.mat[i][self.pivot_cols[i]].clone())
    }
}

fn check_univariate<F: FieldScalar>(m: &PolyMatrix<F>) -> Result<(), PidError> {
    if m.nvars() != 1 {
        return Err(PidError::NotPid(m.nvars()));
    }
    Ok(())
}

fn lowest(entries: impl Iterator<Item = i64>) -> i64 {
    entries.min().unwrap_or(0)
}

/// Rows multiplied by powers of `t` so every entry is a polynomial.
fn polynomial_rows<F: FieldScalar>(m: &PolyMatrix<F>) -> (Rows<F>, i64) {
    let mut total = 0;
    let rows = (0..m.rows())
        .map(|i| {
            let lo = lowest(m.row(i).iter().filter(|p| !p.is_zero()).map(|p| p.min_exponents()[0]));
            total += lo;
            m.row(i).iter().map(|p| to_level_shifted::<Poly<F>>(p, &[lo])).collect()
        })
        .collect();
    (rows, total)
}

/// Columns multiplied by powers of `t` so every entry is a polynomial.
fn polynomial_cols<F: FieldScalar>(m: &PolyMatrix<F>) -> Rows<F> {
    let shifts: Vec<i64> = (0..m.cols())
        .map(|j| {
            lowest(
                (0..m.rows())
                    .map(|i| m.get(i, j))
                    .filter(|p| !p.is_zero())
                    .map(|p| p.min_exponents()[0]),
            )
        })
        .collect();
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| to_level_shifted::<Poly<F>>(m.get(i, j), &[shifts[j]]))
                .collect()
        })
        .collect()
}

fn to_laurent<F: FieldScalar>(p: &Poly<F>) -> LaurentPoly<F> {
    from_level(p, &[0])
}

/// Order of the cokernel `F[t^{±1}]^n / rowspace(m)` for an `r x n` matrix,
/// in canonical unit form. Zero when the cokernel has positive rank.
pub fn cokernel_order<F: FieldScalar>(m: &PolyMatrix<F>) -> Result<LaurentPoly<F>, PidError> {
    check_univariate(m)?;
    let (rows, _) = polynomial_rows(m);
    let e = echelon(rows, m.cols(), false);
    Ok(normalize_unit(&to_laurent(&e.cokernel_order(m.cols()))).poly)
}

/// Order of the homology `ker(w -> w * b1) / rowspace(b2)` at the middle of
/// `R^a --b2--> R^b --b1--> R^c` (row-vector convention, `b2 * b1 = 0`).
///
/// A unimodular `U` with `U * b1` in echelon form of rank `r` gives the
/// kernel as the span of the last `b - r` rows of `U`; with `V = U^{-1}`,
/// the rows of `b2` have coordinates `b2 * V[:, r..]` in that basis, and the
/// homology is the cokernel of that matrix.
pub fn module_order_pid<F: FieldScalar>(
    b2: &PolyMatrix<F>,
    b1: &PolyMatrix<F>,
) -> Result<LaurentPoly<F>, PidError> {
    check_univariate(b2)?;
    check_univariate(b1)?;
    if b2.cols() != b1.rows() {
        return Err(PidError::Shape(b2.rows(), b2.cols(), b1.rows(), b1.cols()));
    }
    if !b2.mul(b1).is_zero() {
        return Err(PidError::ChainMismatch);
    }
    let n = b1.rows();
    let e1 = echelon(polynomial_cols(b1), b1.cols(), true);
    let (_, v) = e1.transform.expect("tracked elimination");
    let (b2p, _) = polynomial_rows(b2);
    let kdim = n - e1.rank;
    let coords: Rows<F> = b2p
        .iter()
        .map(|row| {
            (e1.rank..n)
                .map(|j| {
                    row.iter()
                        .zip(v.iter())
                        .filter(|(x, _)| !x.is_zero())
                        .fold(Poly::zero(), |acc, (x, vr)| acc + x.clone() * vr[j].clone())
                })
                .collect()
        })
        .collect();
    let e2 = echelon(coords, kdim, false);
    Ok(normalize_unit(&to_laurent(&e2.cokernel_order(kdim))).poly)
}

/// Exact determinant of a square one-variable matrix by elimination over
/// `F[t]`.
pub fn det_pid<F: FieldScalar>(m: &PolyMatrix<F>) -> Result<LaurentPoly<F>, PidError> {
    check_univariate(m)?;
    if m.rows() != m.cols() {
        return Err(PidError::Shape(m.rows(), m.cols(), m.rows(), m.cols()));
    }
    let n = m.rows();
    let (rows, shift) = polynomial_rows(m);
    let e = echelon(rows, n, false);
    let d = e.cokernel_order(n);
    // rows were scaled by det_unit overall and by t^-shift
    let unit = e.det_unit.inv();
    Ok(to_laurent(&d).scale(&unit).shift(&[shift]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;
    use crate::scalar::Fp;

    type F13 = Fp<13>;

    fn f(s: &str) -> LaurentPoly<F13> {
        parse_laurent(s, 1).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> PolyMatrix<F13> {
        PolyMatrix::from_rows(1, rows.iter().map(|r| r.iter().map(|s| f(s)).collect()).collect())
    }

    #[test]
    fn det_matches_bareiss() {
        let m = mat(&[
            &["t^-1", "2", "t + 1"],
            &["3", "t^2", "0"],
            &["1", "t - 1", "5*t^-2"],
        ]);
        assert_eq!(det_pid(&m).unwrap(), m.det());
        let swap = mat(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(det_pid(&swap).unwrap(), f("-1"));
    }

    #[test]
    fn cokernel_of_diagonal() {
        let m = mat(&[&["t - 1", "0"], &["0", "t^2 - 1"], &["0", "0"]]);
        let expect = normalize_unit(&(f("t - 1") * f("t^2 - 1"))).poly;
        assert_eq!(cokernel_order(&m).unwrap(), expect);
        let free = mat(&[&["t - 1", "t - 1"]]);
        assert!(cokernel_order(&free).unwrap().is_zero());
    }

    #[test]
    fn homology_orders() {
        // kernel of w -> w * b1 is spanned by (1, 1)
        let b1 = mat(&[&["t - 1"], &["1 - t"]]);
        let b2 = mat(&[&["t^2 + 1", "t^2 + 1"]]);
        assert_eq!(module_order_pid(&b2, &b1).unwrap(), f("1 + t^2"));
        let b2_free = mat(&[&["0", "0"]]);
        assert!(module_order_pid(&b2_free, &b1).unwrap().is_zero());
        let b1_zero = mat(&[&["0"]]);
        let b2_one = mat(&[&["t^-3 - t^-2"]]);
        assert_eq!(module_order_pid(&b2_one, &b1_zero).unwrap(), f("1 + 12*t"));
    }

    #[test]
    fn rejects_bad_chains() {
        let b1 = mat(&[&["1"], &["0"]]);
        let b2 = mat(&[&["1", "0"]]);
        assert_eq!(module_order_pid(&b2, &b1), Err(PidError::ChainMismatch));
        assert!(matches!(module_order_pid(&b1, &b1), Err(PidError::Shape(..))));
    }
}
