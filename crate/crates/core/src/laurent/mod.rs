//! Exact Laurent polynomials over `Z` or `F_p` in one or several variables.

mod dense;
mod gcd;
mod matrix;
pub mod pid;
mod text;

pub use dense::DensePoly;
pub use gcd::gcd_polys;
pub use matrix::PolyMatrix;
pub use text::{parse_laurent, ParsePolyError};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{reduce_mod, Fp, Integer, Scalar};

/// Exponent vector of a monomial `t_1^{e_1} ... t_m^{e_m}`.
pub type Exponents = Vec<i64>;

/// Finite sum of monomials with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Scalar> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `t_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    /// One-variable polynomial `sum_i coeffs[i] * t^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: Vec<C>) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![low + i as i64], c))
            .collect();
        LaurentPoly { nvars: 1, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, C)>) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            out.add_term(e, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// Units of the Laurent ring are monomials with unit coefficient.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().unwrap().is_unit()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i64]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())),
        )
    }

    /// Multiply by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        self.fold_exponents(i64::min)
    }

    /// Componentwise maximum exponent (zeros for the zero polynomial).
    pub fn max_exponents(&self) -> Exponents {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: fn(i64, i64) -> i64) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut acc = first.clone();
        for e in it {
            for (a, b) in acc.iter_mut().zip(e) {
                *a = f(*a, *b);
            }
        }
        acc
    }

    /// Sum over variables of (max exponent - min exponent); for one variable
    /// this is the degree span. The zero polynomial has span 0.
    pub fn degree_span(&self) -> i64 {
        let lo = self.min_exponents();
        let hi = self.max_exponents();
        hi.iter().zip(&lo).map(|(h, l)| h - l).sum()
    }

    /// Sum of the coefficients, i.e. the value at `t_1 = ... = t_m = 1`.
    pub fn eval_at_one(&self) -> C {
        self.terms.values().fold(C::zero(), |a, c| a + c.clone())
    }

    /// Substitute `t_i -> t_i^{-1}` in every variable.
    pub fn mirror(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Lowest-order term in lexicographic exponent order.
    pub fn lowest_term(&self) -> Option<(&Exponents, &C)> {
        self.terms.iter().next()
    }

    /// Highest-order term in lexicographic exponent order.
    pub fn highest_term(&self) -> Option<(&Exponents, &C)> {
        self.terms.iter().next_back()
    }

    /// For one variable: coefficients from the lowest exponent upward.
    pub fn dense_coeffs(&self) -> (i64, Vec<C>) {
        assert_eq!(self.nvars, 1, "dense_coeffs needs one variable");
        if self.is_zero() {
            return (0, Vec::new());
        }
        let lo = self.min_exponents()[0];
        let hi = self.max_exponents()[0];
        let mut v = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e[0] - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    /// Exact quotient in the Laurent ring, when it exists.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        gcd::exact_div(self, d)
    }

    pub fn divides(&self, f: &Self) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        f.exact_div(self).is_some()
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Multiply two polynomials; one-variable products go through a dense
    /// convolution.
    fn product(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.nvars);
        }
        if self.nvars == 1 && self.terms.len() > 4 && rhs.terms.len() > 4 {
            let (la, a) = self.dense_coeffs();
            let (lb, b) = rhs.dense_coeffs();
            let prod = DensePoly::new(a) * DensePoly::new(b);
            return Self::from_coeffs(la + lb, prod.into_coeffs());
        }
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl LaurentPoly<Integer> {
    /// Coefficientwise reduction modulo `P`.
    pub fn reduce<const P: u32>(&self) -> LaurentPoly<Fp<P>> {
        self.map_coeffs(reduce_mod::<P>)
    }
}

impl<C: Scalar> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.product(rhs)
    }
}

impl<C: Scalar> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Scalar> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: Self) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<C: Scalar> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Scalar> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_poly(self, f)
    }
}

/// A Laurent polynomial in canonical unit form together with the unit that
/// was applied: `poly = unit * t^shift * original`.
///
/// Equality and hashing look at `poly` only, so two values are equal exactly
/// when their sources agree up to units.
#[derive(Clone, Debug)]
pub struct NormalizedPoly<C> {
    pub poly: LaurentPoly<C>,
    pub unit: C,
    pub shift: Exponents,
}

impl<C: Scalar> PartialEq for NormalizedPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl<C: Scalar> Eq for NormalizedPoly<C> {}

impl<C: Scalar> std::hash::Hash for NormalizedPoly<C> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.poly.hash(state);
    }
}

/// Canonical representative of the unit class of `f`.
///
/// Every variable is shifted so its minimum exponent is 0, then the lowest
/// term (lexicographically) is scaled to 1 over a field or made positive over
/// the integers. Zero stays zero.
pub fn normalize_unit<C: Scalar>(f: &LaurentPoly<C>) -> NormalizedPoly<C> {
    if f.is_zero() {
        return NormalizedPoly {
            poly: f.clone(),
            unit: C::one(),
            shift: vec![0; f.nvars],
        };
    }
    let shift: Exponents = f.min_exponents().iter().map(|x| -x).collect();
    let shifted = f.shift(&shift);
    let unit = shifted.lowest_term().unwrap().1.unit_normal();
    NormalizedPoly {
        poly: shifted.scale(&unit),
        unit,
        shift,
    }
}

impl<C: Scalar> NormalizedPoly<C> {
    pub fn of(f: &LaurentPoly<C>) -> Self {
        normalize_unit(f)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly.is_one()
    }

    pub fn degree_span(&self) -> i64 {
        self.poly.degree_span()
    }

    /// Canonical form of the image under `t -> t^{-1}`.
    pub fn mirrored(&self) -> Self {
        normalize_unit(&self.poly.mirror())
    }

    /// Smaller of the canonical forms of `f(t)` and `f(t^{-1})`; equal for
    /// two polynomials exactly when they agree up to units and mirroring.
    pub fn mirror_folded(&self) -> Self {
        let m = self.mirrored();
        let key = |p: &Self| -> Vec<(Exponents, C)> {
            p.poly.terms().map(|(e, c)| (e.clone(), c.clone())).collect()
        };
        if key(&m) < key(self) {
            m
        } else {
            self.clone()
        }
    }

    pub fn equivalent_up_to_mirror(&self, other: &Self) -> bool {
        self.poly == other.poly || self.mirrored().poly == other.poly
    }
}

impl<C: Scalar> fmt::Display for NormalizedPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Equality of unit classes.
pub fn associated<C: Scalar>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> bool {
    normalize_unit(a).poly == normalize_unit(b).poly
}

impl<C: Scalar> Mul for NormalizedPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        normalize_unit(&(&self.poly * &rhs.poly))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;

    type F13 = Fp<13>;

    fn uni<C: Scalar>(low: i64, c: &[i64]) -> LaurentPoly<C> {
        LaurentPoly::from_coeffs(low, c.iter().map(|&x| C::from_i64(x)).collect())
    }

    #[test]
    fn normalize_zero_stays_zero() {
        let z = LaurentPoly::<F13>::zero(1);
        assert!(normalize_unit(&z).poly.is_zero());
    }

    #[test]
    fn normalize_over_f13() {
        // 12 t^-2 + t^-1  ->  1 + 12 t
        let f = uni::<F13>(-2, &[12, 1]);
        let n = normalize_unit(&f);
        assert_eq!(n.poly, uni::<F13>(0, &[1, 12]));
        assert_eq!(n.shift, vec![2]);
        assert_eq!(n.unit, F13::new(12));
    }

    #[test]
    fn normalize_over_integers() {
        // -t^3 + t^4  ->  1 - t
        let f = uni::<BigInt>(3, &[-1, 1]);
        assert_eq!(normalize_unit(&f).poly, uni::<BigInt>(0, &[1, -1]));
    }

    #[test]
    fn mirror_folding_identifies_reciprocals() {
        let f = normalize_unit(&uni::<F13>(0, &[1, 2, 3]));
        let g = normalize_unit(&uni::<F13>(0, &[3, 2, 1]));
        assert_ne!(f, g);
        assert!(f.equivalent_up_to_mirror(&g));
        assert_eq!(f.mirror_folded().poly, g.mirror_folded().poly);
    }

    #[test]
    fn dense_and_sparse_products_agree() {
        let a = uni::<BigInt>(-3, &[1, 2, 0, -1, 5, 7]);
        let b = uni::<BigInt>(2, &[3, 0, 1, 1, -2]);
        let dense = &a * &b;
        let mut sparse = LaurentPoly::zero(1);
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                sparse.add_term(vec![ea[0] + eb[0]], ca.clone() * cb.clone());
            }
        }
        assert_eq!(dense, sparse);
    }

    #[test]
    fn reduction_mod_p() {
        let f = uni::<BigInt>(0, &[2, -3, 2]);
        assert_eq!(f.reduce::<13>(), uni::<F13>(0, &[2, 10, 2]));
    }
}
