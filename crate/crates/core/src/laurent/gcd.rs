//! Gcd and exact division of Laurent polynomials.
//!
//! A Laurent polynomial is a monomial times an ordinary polynomial, and
//! monomials are units, so both operations reduce to the polynomial ring.
//! Polynomials in `m` variables are handled as nested dense polynomials,
//! `DensePoly<...DensePoly<C>>`, with the last variable outermost.

use super::dense::DensePoly;
use super::{normalize_unit, Exponents, LaurentPoly};
use crate::scalar::{GcdRing, Scalar};

/// A polynomial ring `C[t_1, ..., t_VARS]` represented by nesting.
pub(crate) trait Level: GcdRing {
    type Base: Scalar;
    const VARS: usize;

    /// Build from terms with non-negative exponent vectors of length `VARS`.
    fn from_terms(terms: &[(Vec<u32>, Self::Base)]) -> Self;

    /// Append terms, each prefixed with the outer exponents already fixed.
    fn collect_terms(&self, suffix: &[u32], out: &mut Vec<(Vec<u32>, Self::Base)>);
}

impl<C: Scalar> Level for C {
    type Base = C;
    const VARS: usize = 0;

    fn from_terms(terms: &[(Vec<u32>, C)]) -> Self {
        terms.iter().fold(C::zero(), |acc, (_, c)| acc + c.clone())
    }

    fn collect_terms(&self, suffix: &[u32], out: &mut Vec<(Vec<u32>, C)>) {
        if !self.is_zero() {
            out.push((suffix.to_vec(), self.clone()));
        }
    }
}

impl<T: Level> Level for DensePoly<T> {
    type Base = T::Base;
    const VARS: usize = T::VARS + 1;

    fn from_terms(terms: &[(Vec<u32>, T::Base)]) -> Self {
        let outer = T::VARS;
        let deg = terms.iter().map(|(e, _)| e[outer]).max().unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, T::Base)>> = vec![Vec::new(); deg + 1];
        for (e, c) in terms {
            buckets[e[outer] as usize].push((e[..outer].to_vec(), c.clone()));
        }
        DensePoly::new(
            buckets
                .iter()
                .map(|b| if b.is_empty() { T::zero() } else { T::from_terms(b) })
                .collect(),
        )
    }

    fn collect_terms(&self, suffix: &[u32], out: &mut Vec<(Vec<u32>, T::Base)>) {
        for (i, c) in self.coeffs().iter().enumerate() {
            let mut s = vec![i as u32];
            s.extend_from_slice(suffix);
            c.collect_terms(&s, out);
        }
    }
}

pub(crate) type Poly1<C> = DensePoly<C>;
pub(crate) type Poly2<C> = DensePoly<DensePoly<C>>;
pub(crate) type Poly3<C> = DensePoly<DensePoly<DensePoly<C>>>;

/// Split `f` as `t^shift * g` with `g` an ordinary polynomial, returned in
/// nested form.
pub(crate) fn to_level<L: Level>(f: &LaurentPoly<L::Base>) -> (Exponents, L) {
    let lo = f.min_exponents();
    (lo.clone(), to_level_shifted(f, &lo))
}

/// Convert `t^{-lo} * f` to nested form; every exponent must be at least `lo`.
pub(crate) fn to_level_shifted<L: Level>(f: &LaurentPoly<L::Base>, lo: &[i64]) -> L {
    assert_eq!(f.nvars(), L::VARS, "variable count does not match nesting depth");
    if f.is_zero() {
        return L::zero();
    }
    let terms: Vec<(Vec<u32>, L::Base)> = f
        .terms()
        .map(|(e, c)| {
            let shifted = e
                .iter()
                .zip(lo)
                .map(|(a, b)| u32::try_from(a - b).expect("exponent below shift"))
                .collect();
            (shifted, c.clone())
        })
        .collect();
    L::from_terms(&terms)
}

pub(crate) fn from_level<L: Level>(g: &L, shift: &[i64]) -> LaurentPoly<L::Base> {
    let mut terms = Vec::new();
    g.collect_terms(&[], &mut terms);
    LaurentPoly::from_terms(
        L::VARS,
        terms.into_iter().map(|(e, c)| {
            let ex: Exponents = e.iter().zip(shift).map(|(&a, b)| a as i64 + b).collect();
            (ex, c)
        }),
    )
}

/// Call a function generic over the nesting level matching `nvars`, as
/// `with_level!(n, C, f(args))` or `with_level!(n, C, recv.method(args))`.
macro_rules! with_level {
    (@arms $n:expr, $call:ident, $C:ty) => {
        match $n {
            1 => $call!($crate::laurent::gcd::Poly1<$C>),
            2 => $call!($crate::laurent::gcd::Poly2<$C>),
            3 => $call!($crate::laurent::gcd::Poly3<$C>),
            n => panic!("polynomial algebra supports 1..=3 variables, got {n}"),
        }
    };
    ($n:expr, $C:ty, $recv:ident . $m:ident ( $($a:expr),* )) => {{
        macro_rules! __call {
            ($L:ty) => {
                $recv.$m::<$L>($($a),*)
            };
        }
        with_level!(@arms $n, __call, $C)
    }};
    ($n:expr, $C:ty, $f:ident ( $($a:expr),* )) => {{
        macro_rules! __call {
            ($L:ty) => {
                $f::<$L>($($a),*)
            };
        }
        with_level!(@arms $n, __call, $C)
    }};
}
pub(crate) use with_level;

fn gcd_at<L: Level>(f: &LaurentPoly<L::Base>, g: &LaurentPoly<L::Base>) -> LaurentPoly<L::Base> {
    let (_, a) = to_level::<L>(f);
    let (_, b) = to_level::<L>(g);
    let h = a.gcd(&b);
    from_level(&h, &vec![0; L::VARS])
}

/// Gcd in `R[t_1^{±1}, ..., t_m^{±1}]`, in canonical unit form.
///
/// One variable over a field runs the Euclidean algorithm; otherwise a
/// recursive content / primitive pseudo-remainder sequence is used.
pub fn gcd_polys<C: Scalar>(f: &LaurentPoly<C>, g: &LaurentPoly<C>) -> LaurentPoly<C> {
    assert_eq!(f.nvars(), g.nvars(), "variable count mismatch");
    if f.is_zero() {
        return normalize_unit(g).poly;
    }
    if g.is_zero() {
        return normalize_unit(f).poly;
    }
    if f.is_unit() || g.is_unit() {
        return LaurentPoly::one(f.nvars());
    }
    let h = with_level!(f.nvars(), C, gcd_at(f, g));
    normalize_unit(&h).poly
}

fn exact_div_at<L: Level>(
    f: &LaurentPoly<L::Base>,
    d: &LaurentPoly<L::Base>,
) -> Option<LaurentPoly<L::Base>> {
    let (sf, a) = to_level::<L>(f);
    let (sd, b) = to_level::<L>(d);
    let q = a.exact_div(&b)?;
    let shift: Exponents = sf.iter().zip(&sd).map(|(x, y)| x - y).collect();
    Some(from_level(&q, &shift))
}

pub(crate) fn exact_div<C: Scalar>(f: &LaurentPoly<C>, d: &LaurentPoly<C>) -> Option<LaurentPoly<C>> {
    assert_eq!(f.nvars(), d.nvars(), "variable count mismatch");
    if d.is_zero() {
        return None;
    }
    if f.is_zero() {
        return Some(LaurentPoly::zero(f.nvars()));
    }
    if d.num_terms() == 1 {
        let (e, c) = d.lowest_term().unwrap();
        let neg: Exponents = e.iter().map(|x| -x).collect();
        let mut out = LaurentPoly::zero(f.nvars());
        for (fe, fc) in f.terms() {
            let q = fc.exact_div(c)?;
            out.add_term(fe.iter().zip(&neg).map(|(a, b)| a + b).collect(), q);
        }
        return Some(out);
    }
    with_level!(f.nvars(), C, exact_div_at(f, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;
    use crate::scalar::Fp;
    use num_bigint::BigInt;

    type F13 = Fp<13>;

    fn z(s: &str, n: usize) -> LaurentPoly<BigInt> {
        parse_laurent(s, n).unwrap()
    }

    fn f13(s: &str) -> LaurentPoly<F13> {
        parse_laurent(s, 1).unwrap()
    }

    #[test]
    fn gcd_over_f13_by_hand() {
        // canonical class of t - 1 is 1 + 12t
        assert_eq!(gcd_polys(&f13("t^2 - 1"), &f13("t^3 - 1")), f13("1 + 12*t"));
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let f = f13("12*t^-2 + t^-1");
        assert_eq!(gcd_polys(&f, &LaurentPoly::zero(1)), normalize_unit(&f).poly);
        assert!(gcd_polys(&LaurentPoly::<F13>::zero(1), &LaurentPoly::zero(1)).is_zero());
    }

    #[test]
    fn gcd_over_integers_keeps_content() {
        assert_eq!(gcd_polys(&z("2*t + 2", 1), &z("4*t^2 - 4", 1)), z("2 + 2*t", 1));
    }

    #[test]
    fn gcd_two_variables() {
        // (t1 - 1)(t2 + 1) and (t1 - 1)(t1 + t2)
        let a = z("t1*t2 + t1 - t2 - 1", 2);
        let b = z("t1^2 + t1*t2 - t1 - t2", 2);
        assert_eq!(gcd_polys(&a, &b), normalize_unit(&z("t1 - 1", 2)).poly);
    }

    #[test]
    fn laurent_exact_division() {
        let f = z("t^-3 - t^-1", 1);
        let d = z("t^-2 + t^-1", 1);
        let q = f.exact_div(&d).unwrap();
        assert_eq!(&q * &d, f);
        assert!(z("t^2 + 1", 1).exact_div(&z("t + 1", 1)).is_none());
    }
}
