//! The twisted chain complex of a presentation and the orders of its
//! homology.
//!
//! For a presentation with `g` generators and `g - 1` relators, a
//! permutation representation `alpha` into `S_k` and `phi` to `Z^m`, a word
//! `w` acts on `R[t^{±1}]^k` by `P(alpha(w)) * t^{phi(w)}`. With row vectors,
//! `B2` has block `(i, j)` equal to the image of `∂r_i/∂x_j` and `B1` has
//! block `i` equal to the image of `x_i - 1`; the fundamental formula of Fox
//! calculus gives `B2 * B1 = 0`.

use thiserror::Error;

use crate::fpgroup::{GroupPresentation, PhiMap, PresentationError};
use crate::laurent::pid::{cokernel_order, det_pid, module_order_pid, PidError};
use crate::laurent::{associated, normalize_unit, Exponents, LaurentPoly, NormalizedPoly, PolyMatrix};
use crate::perm::{Permutation, Rep};
use crate::scalar::{Fp, Integer, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwistedError {
    #[error("presentation has {generators} generators and {relators} relators; deficiency one is required")]
    Deficiency { generators: usize, relators: usize },
    #[error("representation has {found} images for {expected} generators")]
    Arity { expected: usize, found: usize },
    #[error("relator {0} is not sent to the identity")]
    RelatorViolated(usize),
    #[error("boundary maps do not compose to zero")]
    ChainCondition,
    #[error("every generator has det(rho(x) - 1) = 0")]
    NoWadaColumn,
    #[error("numerator times the order of H_0 is not divisible by the denominator")]
    InexactDivision,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Pid(#[from] PidError),
}

/// Boundary matrices `B2: C_2 -> C_1` and `B1: C_1 -> C_0`.
#[derive(Clone, Debug)]
pub struct TwistedComplex<C> {
    pub b2: PolyMatrix<C>,
    pub b1: PolyMatrix<C>,
    pub k: usize,
    pub g: usize,
}

/// Numerator and denominator of the Wada quotient for one generator column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WadaPair<C> {
    pub numerator: LaurentPoly<C>,
    pub denominator: LaurentPoly<C>,
    pub column: usize,
}

/// Add `sign * P(s) * t^e` to the `k x k` block with top-left `(r0, c0)`.
fn add_perm_block<C: Scalar>(m: &mut PolyMatrix<C>, r0: usize, c0: usize, s: &[u8], e: &Exponents, sign: i64) {
    for (c, &r) in s.iter().enumerate() {
        m.add_monomial(r0 + r as usize, c0 + c, e.clone(), C::from_i64(sign));
    }
}

pub fn build_complex<C: Scalar>(
    p: &GroupPresentation,
    rep: &Rep,
    phi: &PhiMap,
) -> Result<TwistedComplex<C>, TwistedError> {
    let g = p.num_generators;
    if p.relators.len() + 1 != g {
        return Err(TwistedError::Deficiency {
            generators: g,
            relators: p.relators.len(),
        });
    }
    if rep.images.len() != g {
        return Err(TwistedError::Arity {
            expected: g,
            found: rep.images.len(),
        });
    }
    let k = rep.k;
    let m = phi.nvars;
    let images: Vec<Vec<u8>> = rep.images.iter().map(|s| s.images().iter().map(|&x| x as u8).collect()).collect();
    let inverses: Vec<Vec<u8>> = rep
        .images
        .iter()
        .map(|s| s.inverse().images().iter().map(|&x| x as u8).collect())
        .collect();

    let mut b2 = PolyMatrix::zeros((g - 1) * k, g * k, m);
    let mut prefix: Vec<u8> = Vec::with_capacity(k);
    let mut buf: Vec<u8> = Vec::with_capacity(k);
    for (ri, r) in p.relators.iter().enumerate() {
        prefix.clear();
        prefix.extend(0..k as u8);
        let mut e = vec![0i64; m];
        for &l in r.letters() {
            let j = l.generator;
            if !l.inverse {
                add_perm_block(&mut b2, ri * k, j * k, &prefix, &e, 1);
            }
            let step = if l.inverse { &inverses[j] } else { &images[j] };
            buf.clear();
            buf.extend(step.iter().map(|&i| prefix[i as usize]));
            std::mem::swap(&mut prefix, &mut buf);
            phi.apply(&mut e, l);
            if l.inverse {
                add_perm_block(&mut b2, ri * k, j * k, &prefix, &e, -1);
            }
        }
        if prefix.iter().enumerate().any(|(i, &x)| i != x as usize) {
            return Err(TwistedError::RelatorViolated(ri));
        }
        if e.iter().any(|&x| x != 0) {
            return Err(PresentationError::NonzeroAbelianization(ri).into());
        }
    }

    let mut b1 = PolyMatrix::zeros(g * k, k, m);
    for (i, s) in images.iter().enumerate() {
        add_perm_block(&mut b1, i * k, 0, s, &phi.images[i], 1);
        for d in 0..k {
            b1.add_monomial(i * k + d, d, vec![0; m], -C::one());
        }
    }
    Ok(TwistedComplex { b2, b1, k, g })
}

impl<C: Scalar> TwistedComplex<C> {
    pub fn nvars(&self) -> usize {
        self.b1.nvars()
    }

    /// `B2 * B1 = 0`.
    pub fn check_chain(&self) -> Result<(), TwistedError> {
        if self.b2.mul(&self.b1).is_zero() {
            Ok(())
        } else {
            Err(TwistedError::ChainCondition)
        }
    }

    /// The block `rho(x_j) - 1` of `B1`.
    pub fn generator_block(&self, j: usize) -> PolyMatrix<C> {
        let rows: Vec<usize> = (j * self.k..(j + 1) * self.k).collect();
        let cols: Vec<usize> = (0..self.k).collect();
        self.b1.submatrix(&rows, &cols)
    }

    /// `B2` without the block column of generator `j`.
    pub fn numerator_matrix(&self, j: usize) -> PolyMatrix<C> {
        let drop: Vec<usize> = (j * self.k..(j + 1) * self.k).collect();
        self.b2.without_cols(&drop)
    }
}

/// Coefficient rings for which the order of `H_1` can be computed. Fields
/// with one variable use elimination over the principal ideal domain;
/// everything else goes through the Wada quotient.
pub trait TwistRing: Scalar {
    fn det(m: &PolyMatrix<Self>) -> LaurentPoly<Self> {
        m.det()
    }

    /// Order of `H_0`, the cokernel of `B1`.
    fn delta0(c: &TwistedComplex<Self>) -> LaurentPoly<Self> {
        c.b1.gcd_of_minors(c.k)
    }

    /// Order of `H_1`.
    fn order(c: &TwistedComplex<Self>) -> Result<LaurentPoly<Self>, TwistedError> {
        wada_order(c)
    }
}

impl TwistRing for Integer {}

impl<const P: u32> TwistRing for Fp<P> {
    fn det(m: &PolyMatrix<Self>) -> LaurentPoly<Self> {
        if m.nvars() == 1 {
            det_pid(m).expect("one variable")
        } else {
            m.det()
        }
    }

    fn delta0(c: &TwistedComplex<Self>) -> LaurentPoly<Self> {
        if c.nvars() == 1 {
            cokernel_order(&c.b1).expect("one variable")
        } else {
            c.b1.gcd_of_minors(c.k)
        }
    }

    fn order(c: &TwistedComplex<Self>) -> Result<LaurentPoly<Self>, TwistedError> {
        if c.nvars() == 1 {
            Ok(module_order_pid(&c.b2, &c.b1)?)
        } else {
            wada_order(c)
        }
    }
}

/// Smallest generator `j` with `det(rho(x_j) - 1) != 0`, with the
/// determinant of `B2` minus block column `j`.
pub fn wada_pair<C: TwistRing>(c: &TwistedComplex<C>) -> Result<WadaPair<C>, TwistedError> {
    for j in 0..c.g {
        let denominator = C::det(&c.generator_block(j));
        if denominator.is_zero() {
            continue;
        }
        return Ok(WadaPair {
            numerator: C::det(&c.numerator_matrix(j)),
            denominator,
            column: j,
        });
    }
    Err(TwistedError::NoWadaColumn)
}

/// Every admissible Wada pair, one per generator with nonzero denominator.
pub fn all_wada_pairs<C: TwistRing>(c: &TwistedComplex<C>) -> Vec<WadaPair<C>> {
    (0..c.g)
        .filter_map(|j| {
            let denominator = C::det(&c.generator_block(j));
            (!denominator.is_zero()).then(|| WadaPair {
                numerator: C::det(&c.numerator_matrix(j)),
                denominator,
                column: j,
            })
        })
        .collect()
}

/// `numerator * order(H_0) / denominator`, which must divide exactly.
pub fn wada_order<C: TwistRing>(c: &TwistedComplex<C>) -> Result<LaurentPoly<C>, TwistedError> {
    let w = wada_pair(c)?;
    let d0 = C::delta0(c);
    (&w.numerator * &d0)
        .exact_div(&w.denominator)
        .ok_or(TwistedError::InexactDivision)
}

pub fn delta0<C: TwistRing>(p: &GroupPresentation, rep: &Rep, phi: &PhiMap) -> Result<NormalizedPoly<C>, TwistedError> {
    let c = build_complex::<C>(p, rep, phi)?;
    Ok(normalize_unit(&C::delta0(&c)))
}

/// Order of `H_1` with coefficients twisted by `rep` and `phi`, in canonical
/// unit form.
pub fn twisted_alexander<C: TwistRing>(
    p: &GroupPresentation,
    rep: &Rep,
    phi: &PhiMap,
) -> Result<NormalizedPoly<C>, TwistedError> {
    let c = build_complex::<C>(p, rep, phi)?;
    Ok(normalize_unit(&C::order(&c)?))
}

/// Over a field with one variable: whether the elimination result times the
/// Wada denominator equals the numerator times the order of `H_0`, up to
/// units. `None` when no Wada column exists.
pub fn routes_agree<const P: u32>(c: &TwistedComplex<Fp<P>>) -> Result<Option<bool>, TwistedError> {
    let order = module_order_pid(&c.b2, &c.b1)?;
    let w = match wada_pair(c) {
        Ok(w) => w,
        Err(TwistedError::NoWadaColumn) => return Ok(None),
        Err(e) => return Err(e),
    };
    let lhs = &order * &w.denominator;
    let rhs = &w.numerator * &<Fp<P> as TwistRing>::delta0(c);
    Ok(Some(associated(&lhs, &rhs)))
}

/// Check that a representation sends every relator to the identity.
pub fn check_rep(p: &GroupPresentation, rep: &Rep) -> Result<(), TwistedError> {
    for (i, r) in p.relators.iter().enumerate() {
        if !rep.eval(r).is_identity() {
            return Err(TwistedError::RelatorViolated(i));
        }
    }
    Ok(())
}

/// The identity permutation in `S_k` for each generator.
pub fn trivial_rep(p: &GroupPresentation, k: usize) -> Rep {
    Rep::new(k, vec![Permutation::identity(k); p.num_generators])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{abelianization_map, FreeWord};
    use crate::laurent::parse_laurent;

    type F13 = Fp<13>;

    fn trefoil() -> GroupPresentation {
        GroupPresentation::new(2, vec![FreeWord::from_signed(&[1, 2, 1, -2, -1, -2])], vec![0, 0], true).unwrap()
    }

    fn unknot() -> GroupPresentation {
        GroupPresentation::new(1, vec![], vec![0], true).unwrap()
    }

    fn z(s: &str) -> LaurentPoly<Integer> {
        parse_laurent(s, 1).unwrap()
    }

    #[test]
    fn unknot_complex() {
        let p = unknot();
        let phi = abelianization_map(&p).unwrap();
        let c = build_complex::<Integer>(&p, &trivial_rep(&p, 1), &phi).unwrap();
        assert_eq!(c.b2.rows(), 0);
        assert_eq!(c.b1.get(0, 0), &z("t - 1"));
        let w = wada_pair(&c).unwrap();
        assert!(w.numerator.is_one());
        assert_eq!(w.denominator, z("t - 1"));
        assert!(twisted_alexander::<Integer>(&p, &trivial_rep(&p, 1), &phi).unwrap().is_one());
    }

    #[test]
    fn trefoil_by_hand() {
        let p = trefoil();
        let phi = abelianization_map(&p).unwrap();
        let c = build_complex::<Integer>(&p, &trivial_rep(&p, 1), &phi).unwrap();
        // d r/d a = 1 + ab - abab^-1a^-1, d r/d b = a - aba b^-1 - abab^-1a^-1b^-1
        assert_eq!(c.b2.get(0, 0), &z("1 + t^2 - t"));
        assert_eq!(c.b2.get(0, 1), &z("t - t^2 - 1"));
        assert_eq!(c.b1.get(1, 0), &z("t - 1"));
        c.check_chain().unwrap();
        let w = wada_pair(&c).unwrap();
        assert_eq!(w.column, 0);
        assert_eq!(w.numerator, z("t - t^2 - 1"));
        assert!(associated(&<Integer as TwistRing>::delta0(&c), &z("t - 1")));
        let delta = twisted_alexander::<Integer>(&p, &trivial_rep(&p, 1), &phi).unwrap();
        assert_eq!(delta.poly, z("1 - t + t^2"));
        let f = twisted_alexander::<F13>(&p, &trivial_rep(&p, 1), &phi).unwrap();
        assert_eq!(f.poly.to_string(), "1 + 12*t + t^2");
    }

    #[test]
    fn flip_representation_chain_condition() {
        let p = trefoil();
        let phi = abelianization_map(&p).unwrap();
        let flip = Permutation::from_cycles(2, &[&[0, 1]]);
        let rep = Rep::new(2, vec![flip.clone(), flip]);
        let c = build_complex::<F13>(&p, &rep, &phi).unwrap();
        assert_eq!((c.b2.rows(), c.b2.cols()), (2, 4));
        c.check_chain().unwrap();
        assert_eq!(routes_agree(&c).unwrap(), Some(true));
    }

    #[test]
    fn rejects_bad_input() {
        let p = trefoil();
        let phi = abelianization_map(&p).unwrap();
        let bad = Rep::new(
            3,
            vec![Permutation::from_cycles(3, &[&[0, 1]]), Permutation::from_cycles(3, &[&[0, 1, 2]])],
        );
        assert!(matches!(build_complex::<F13>(&p, &bad, &phi), Err(TwistedError::RelatorViolated(0))));
        let wide = GroupPresentation::new(2, vec![], vec![0, 1], true).unwrap();
        assert!(matches!(
            build_complex::<F13>(&wide, &trivial_rep(&wide, 1), &abelianization_map(&wide).unwrap()),
            Err(TwistedError::Deficiency { .. })
        ));
    }
}
