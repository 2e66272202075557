//! Dense polynomials in one variable over a gcd ring.
//!
//! `DensePoly<DensePoly<C>>` is a polynomial in two variables, and so on; the
//! recursive gcd below (content and primitive pseudo-remainder sequence) is
//! what the multivariable gcd is built from.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::GcdRing;

/// Coefficients stored from degree 0 upward with no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct DensePoly<T> {
    coeffs: Vec<T>,
}

impl<T: GcdRing> DensePoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: T, deg: usize) -> Self {
        let mut v = vec![T::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    fn shifted_scaled(&self, c: &T, shift: usize) -> Self {
        let mut v = vec![T::zero(); shift];
        v.extend(self.coeffs.iter().map(|x| x.clone() * c.clone()));
        Self::new(v)
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> T {
        let mut g = T::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_unit() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        Self::new(
            self.coeffs
                .iter()
                .map(|x| x.exact_div(&c).expect("content divides every coefficient"))
                .collect(),
        )
    }

    /// Pseudo-remainder: some `lead(d)^e * self` reduced modulo `d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-remainder by zero");
        let ld = d.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.lead().unwrap().clone();
            r = r.scale(&ld) - d.shifted_scaled(&lr, rd - dd);
        }
        r
    }

    /// Division with remainder, valid when the leading coefficient of `d`
    /// is a unit.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let ld = d.lead().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = r[top].clone();
            if !c.is_zero() {
                let f = c.exact_div(ld).expect("leading coefficient of divisor is a unit");
                let shift = top - dd;
                for (i, x) in d.coeffs.iter().enumerate() {
                    r[shift + i] = r[shift + i].clone() - f.clone() * x.clone();
                }
                q[shift] = f;
            }
            r.pop();
        }
        (Self::new(q), Self::new(r))
    }

    /// Exact quotient by `d`, or `None` when `d` does not divide `self`.
    pub fn exact_quotient(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let ld = d.lead().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![T::zero(); sd - dd + 1];
        for top in (dd..=sd).rev() {
            let c = r[top].clone();
            if c.is_zero() {
                continue;
            }
            let f = c.exact_div(ld)?;
            let shift = top - dd;
            for (i, x) in d.coeffs.iter().enumerate() {
                r[shift + i] = r[shift + i].clone() - f.clone() * x.clone();
            }
            q[shift] = f;
        }
        r.iter().all(|c| c.is_zero()).then(|| Self::new(q))
    }

    fn euclid_gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn prs_gcd(a: &Self, b: &Self) -> Self {
        let c = a.content().gcd(&b.content());
        let (mut a, mut b) = (a.primitive_part(), b.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.scale(&c)
    }

    /// Evaluate at `x`.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }
}

impl<T: GcdRing> Zero for DensePoly<T> {
    fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: GcdRing> One for DensePoly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: GcdRing> Add for DensePoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (i, c) in short.into_iter().enumerate() {
            long[i] = long[i].clone() + c;
        }
        Self::new(long)
    }
}

impl<T: GcdRing> Sub for DensePoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: GcdRing> Neg for DensePoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        DensePoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: GcdRing> Mul for DensePoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: GcdRing> GcdRing for DensePoly<T> {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return self.is_zero().then(Self::zero);
        }
        self.exact_quotient(d)
    }

    fn gcd(&self, other: &Self) -> Self {
        let g = if self.is_zero() {
            other.clone()
        } else if other.is_zero() {
            self.clone()
        } else if T::is_field() {
            Self::euclid_gcd(self, other)
        } else {
            Self::prs_gcd(self, other)
        };
        let u = g.unit_normal();
        g * u
    }

    fn unit_normal(&self) -> Self {
        match self.lead() {
            Some(l) => Self::constant(l.unit_normal()),
            None => Self::one(),
        }
    }

    fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_unit()
    }

    fn is_field() -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;

    fn zp(v: &[i64]) -> DensePoly<BigInt> {
        DensePoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn fp(v: &[i64]) -> DensePoly<Fp<13>> {
        DensePoly::new(v.iter().map(|&x| <Fp<13> as crate::scalar::Scalar>::from_i64(x)).collect())
    }

    #[test]
    fn integer_gcd_with_content() {
        // gcd(2t+2, 4t^2-4) = 2t+2
        let g = zp(&[2, 2]).gcd(&zp(&[-4, 0, 4]));
        assert_eq!(g, zp(&[2, 2]));
    }

    #[test]
    fn field_gcd_is_monic() {
        // gcd(t^2-1, t^3-1) = t-1
        let g = fp(&[-1, 0, 1]).gcd(&fp(&[-1, 0, 0, 1]));
        assert_eq!(g, fp(&[-1, 1]));
    }

    #[test]
    fn bivariate_gcd() {
        // (x + y)(x - y) and (x + y)^2 over Z, as polynomials in y over Z[x]
        type P2 = DensePoly<DensePoly<BigInt>>;
        let x = zp(&[0, 1]);
        let one = zp(&[1]);
        let a: P2 = DensePoly::new(vec![x.clone() * x.clone(), DensePoly::zero(), -one.clone()]);
        let b: P2 = DensePoly::new(vec![x.clone() * x.clone(), x.clone() + x.clone(), one.clone()]);
        let g = a.gcd(&b);
        let expect: P2 = DensePoly::new(vec![x, one]);
        assert_eq!(g, expect);
    }

    #[test]
    fn exact_quotient_detects_remainder() {
        assert_eq!(zp(&[-1, 0, 1]).exact_quotient(&zp(&[1, 1])), Some(zp(&[-1, 1])));
        assert_eq!(zp(&[1, 0, 1]).exact_quotient(&zp(&[1, 1])), None);
        assert_eq!(zp(&[1, 1]).exact_quotient(&zp(&[2])), None);
    }
}
