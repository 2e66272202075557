//! Words in free groups, finite presentations and Fox calculus.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::laurent::Exponents;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relator {relator} uses generator {generator}, but there are only {count} generators")]
    BadGenerator {
        relator: usize,
        generator: usize,
        count: usize,
    },
    #[error("generator {0} has no component label")]
    MissingComponent(usize),
    #[error("relator {0} does not vanish in the abelianization")]
    NonzeroAbelianization(usize),
    #[error("no relator can be dropped without changing the abelianization")]
    NoRedundantRelator,
}

/// A generator or its inverse. Generators are numbered from 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Element of a free group as a sequence of letters; not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        FreeWord(letters)
    }

    /// Build from signed 1-based indices: `2` is `x_2`, `-2` is `x_2^{-1}`.
    pub fn from_signed(letters: &[i32]) -> Self {
        FreeWord(
            letters
                .iter()
                .map(|&l| {
                    assert!(l != 0, "letter 0 is not a generator");
                    Letter::new(l.unsigned_abs() as usize - 1, l < 0)
                })
                .collect(),
        )
    }

    pub fn generator(i: usize) -> Self {
        FreeWord(vec![Letter::new(i, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation followed by free reduction at the seam only; the result
    /// is reduced when both inputs are.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = self.0.clone();
        for &l in &rhs.0 {
            push_reduced(&mut out, l);
        }
        FreeWord(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn free_reduce(&self) -> Self {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            push_reduced(&mut out, l);
        }
        FreeWord(out)
    }

    /// Replace each generator `x_i` by `images[i]`, reducing as we go.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut out = Vec::new();
        for l in &self.0 {
            let w = &images[l.generator];
            if l.inverse {
                for m in w.0.iter().rev() {
                    push_reduced(&mut out, m.inv());
                }
            } else {
                for &m in &w.0 {
                    push_reduced(&mut out, m);
                }
            }
        }
        FreeWord(out)
    }

    /// Exponent sum of each generator among `0..num_generators`.
    pub fn exponent_sums(&self, num_generators: usize) -> Vec<i64> {
        let mut v = vec![0; num_generators];
        for l in &self.0 {
            v[l.generator] += l.exponent();
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("x{}^-1", l.generator + 1)
                } else {
                    format!("x{}", l.generator + 1)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Element of the integral group ring of a free group, keyed by reduced word.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<FreeWord, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(FreeWord::empty(), 1)
    }

    pub fn word(w: FreeWord, c: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: FreeWord, c: i64) {
        if c == 0 {
            return;
        }
        let w = w.free_reduce();
        let entry = self.terms.entry(w.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Augmentation: the sum of the coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("{c}*[{w}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One term of a Fox derivative: `sign * w[..prefix_len]` in `∂w/∂x_generator`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FoxTerm {
    pub generator: usize,
    pub sign: i64,
    pub prefix_len: usize,
}

/// The terms of all Fox derivatives of `w` at once, in word order. An
/// occurrence of `x_j` at position `p` contributes `+w[..p]`; an occurrence
/// of `x_j^{-1}` contributes `-w[..p+1]`.
pub fn fox_terms(w: &FreeWord) -> impl Iterator<Item = FoxTerm> + '_ {
    w.0.iter().enumerate().map(|(p, l)| FoxTerm {
        generator: l.generator,
        sign: l.exponent(),
        prefix_len: if l.inverse { p + 1 } else { p },
    })
}

pub fn fox_derivative(w: &FreeWord, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for t in fox_terms(w).filter(|t| t.generator == j) {
        out.add_term(FreeWord(w.0[..t.prefix_len].to_vec()), t.sign);
    }
    out
}

/// Finite presentation of a link group, with each generator labelled by the
/// link component whose meridian it is.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPresentation {
    pub num_generators: usize,
    pub relators: Vec<FreeWord>,
    /// Component index (from 0) of each generator.
    pub component_of: Vec<usize>,
    pub num_components: usize,
    /// Every generator is a meridian, so generators of one component are
    /// conjugate. True for braid-closure and Wirtinger presentations.
    pub meridional: bool,
}

impl GroupPresentation {
    pub fn new(
        num_generators: usize,
        relators: Vec<FreeWord>,
        component_of: Vec<usize>,
        meridional: bool,
    ) -> Result<Self, PresentationError> {
        if component_of.len() != num_generators {
            return Err(PresentationError::MissingComponent(component_of.len().min(num_generators)));
        }
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator().filter(|&g| g >= num_generators) {
                return Err(PresentationError::BadGenerator {
                    relator: i,
                    generator: g,
                    count: num_generators,
                });
            }
        }
        let num_components = component_of.iter().map(|c| c + 1).max().unwrap_or(0);
        Ok(GroupPresentation {
            num_generators,
            relators: relators.iter().map(FreeWord::free_reduce).collect(),
            component_of,
            num_components,
            meridional,
        })
    }

    /// Generators minus relators.
    pub fn deficiency(&self) -> isize {
        self.num_generators as isize - self.relators.len() as isize
    }

    /// Matrix of exponent sums, one row per relator.
    pub fn abelianized_relators(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.num_generators))
            .collect()
    }

    /// Rank of the abelianized relation lattice.
    pub fn relation_rank(&self) -> usize {
        rational_rank(&self.abelianized_relators())
    }

    /// First Betti number of the group.
    pub fn betti_number(&self) -> usize {
        self.num_generators - self.relation_rank()
    }
}

/// Remove the last relator whose removal keeps the abelianized relation
/// rank. Presentations that already have deficiency at least one are
/// returned unchanged.
pub fn drop_redundant_relation(p: &GroupPresentation) -> Result<GroupPresentation, PresentationError> {
    if p.deficiency() >= 1 {
        return Ok(p.clone());
    }
    let rows = p.abelianized_relators();
    let full = rational_rank(&rows);
    for i in (0..rows.len()).rev() {
        let mut rest = rows.clone();
        rest.remove(i);
        if rational_rank(&rest) == full {
            let mut q = p.clone();
            q.relators.remove(i);
            return Ok(q);
        }
    }
    Err(PresentationError::NoRedundantRelator)
}

/// Homomorphism from the group to a free abelian group `Z^nvars`, given by
/// the image of each generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiMap {
    pub nvars: usize,
    pub images: Vec<Exponents>,
}

impl PhiMap {
    pub fn eval(&self, w: &FreeWord) -> Exponents {
        let mut e = vec![0; self.nvars];
        for l in w.letters() {
            self.apply(&mut e, *l);
        }
        e
    }

    /// Add the image of one letter to `acc`.
    pub fn apply(&self, acc: &mut [i64], l: Letter) {
        let s = l.exponent();
        for (a, x) in acc.iter_mut().zip(&self.images[l.generator]) {
            *a += s * x;
        }
    }

    /// Collapse all variables into one (`t_i -> t`).
    pub fn total(&self) -> PhiMap {
        PhiMap {
            nvars: 1,
            images: self.images.iter().map(|e| vec![e.iter().sum()]).collect(),
        }
    }
}

/// Map each meridian generator to the variable of its component, checking
/// that every relator dies.
pub fn abelianization_map(p: &GroupPresentation) -> Result<PhiMap, PresentationError> {
    let images: Vec<Exponents> = p
        .component_of
        .iter()
        .map(|&c| {
            let mut e = vec![0; p.num_components];
            e[c] = 1;
            e
        })
        .collect();
    let phi = PhiMap {
        nvars: p.num_components,
        images,
    };
    for (i, r) in p.relators.iter().enumerate() {
        if phi.eval(r).iter().any(|&x| x != 0) {
            return Err(PresentationError::NonzeroAbelianization(i));
        }
    }
    Ok(phi)
}

/// Rank over the rationals of an integer matrix given by rows.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (x, y) = (a[rank][c].clone(), a[i][c].clone());
            for j in c..cols {
                a[i][j] = &a[i][j] * &x - &a[rank][j] * &y;
            }
            let g = a[i].iter().fold(BigInt::zero(), |g, v| num_integer::Integer::gcd(&g, v));
            if !g.is_zero() {
                for v in a[i].iter_mut() {
                    *v = &*v / &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> FreeWord {
        FreeWord::from_signed(s)
    }

    fn elem(terms: &[(&[i32], i64)]) -> GroupRingElement {
        let mut e = GroupRingElement::zero();
        for (word, c) in terms {
            e.add_term(w(word), *c);
        }
        e
    }

    #[test]
    fn free_reduction() {
        assert!(w(&[1, -1]).free_reduce().is_empty());
        assert_eq!(w(&[1, 2, -2, 1]).free_reduce(), w(&[1, 1]));
        let r = w(&[1, 2, -1]);
        assert_eq!(r.free_reduce(), r);
        assert_eq!(w(&[1, 2, -2, -1, 3]).free_reduce(), w(&[3]));
    }

    #[test]
    fn fox_derivative_by_hand() {
        assert_eq!(fox_derivative(&w(&[1]), 0), GroupRingElement::one());
        // commutator x y x^-1 y^-1
        let c = w(&[1, 2, -1, -2]);
        assert_eq!(fox_derivative(&c, 0), elem(&[(&[], 1), (&[1, 2, -1], -1)]));
        // trefoil relator a b a b^-1 a^-1 b^-1 with a = x1, b = x2
        let r = w(&[1, 2, 1, -2, -1, -2]);
        assert_eq!(
            fox_derivative(&r, 0),
            elem(&[(&[], 1), (&[1, 2], 1), (&[1, 2, 1, -2, -1], -1)])
        );
    }

    #[test]
    fn fundamental_formula() {
        // sum_j (dw/dx_j)(x_j - 1) = w - 1
        let r = w(&[1, 2, 1, -2, -1, -2, 3, -1]);
        let mut total = GroupRingElement::zero();
        for j in 0..3 {
            let xm1 = elem(&[(&[j as i32 + 1], 1), (&[], -1)]);
            total = total.add(&fox_derivative(&r, j).mul(&xm1));
        }
        let mut expect = GroupRingElement::word(r, 1);
        expect.add_term(FreeWord::empty(), -1);
        assert_eq!(total, expect);
    }

    #[test]
    fn substitution_reduces() {
        let images = vec![w(&[1, 2, -1]), w(&[1])];
        assert_eq!(w(&[1, -2]).substitute(&images), w(&[1, 2, -1, -1]));
        assert_eq!(w(&[-1, 1]).substitute(&images), FreeWord::empty());
    }

    #[test]
    fn dropping_relators() {
        let unknot = GroupPresentation::new(1, vec![], vec![0], true).unwrap();
        assert_eq!(drop_redundant_relation(&unknot).unwrap(), unknot);
        // Wirtinger trefoil: x3 = x1 x2 x1^-1 etc.
        let wirt = GroupPresentation::new(
            3,
            vec![w(&[1, 2, -1, -3]), w(&[2, 3, -2, -1]), w(&[3, 1, -3, -2])],
            vec![0, 0, 0],
            true,
        )
        .unwrap();
        let d = drop_redundant_relation(&wirt).unwrap();
        assert_eq!(d.relators.len(), 2);
        assert_eq!(d.relators[..], wirt.relators[..2]);
    }

    #[test]
    fn abelianization() {
        let trefoil =
            GroupPresentation::new(2, vec![w(&[1, 2, 1, -2, -1, -2])], vec![0, 0], true).unwrap();
        let phi = abelianization_map(&trefoil).unwrap();
        assert_eq!(phi.images, vec![vec![1], vec![1]]);
        let hopf = GroupPresentation::new(2, vec![w(&[1, 2, -1, -2])], vec![0, 1], true).unwrap();
        assert_eq!(abelianization_map(&hopf).unwrap().images, vec![vec![1, 0], vec![0, 1]]);
        let bad = GroupPresentation::new(2, vec![w(&[1, 1, 2])], vec![0, 0], true).unwrap();
        assert_eq!(
            abelianization_map(&bad),
            Err(PresentationError::NonzeroAbelianization(0))
        );
    }

    #[test]
    fn rejects_out_of_range_generators() {
        let e = GroupPresentation::new(1, vec![w(&[2])], vec![0], true).unwrap_err();
        assert!(matches!(e, PresentationError::BadGenerator { generator: 1, .. }));
    }

    #[test]
    fn ranks() {
        assert_eq!(rational_rank(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]), 2);
        assert_eq!(rational_rank(&[vec![2, 4], vec![3, 6]]), 1);
        assert_eq!(rational_rank(&[]), 0);
    }
}
