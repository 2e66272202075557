//! Regular finite covers through Reidemeister–Schreier rewriting.
//!
//! For `alpha: pi -> S_k` with image `G`, the cosets of the kernel are the
//! elements of `G`. A word `w` lies in the coset `alpha(w)`, and appending
//! `x_i` moves coset `h` to `h ∘ alpha(x_i)`.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer as _;
use thiserror::Error;

use crate::fpgroup::{rational_rank, FreeWord, GroupPresentation, Letter, PhiMap, PresentationError};
use crate::laurent::NormalizedPoly;
use crate::perm::{image_group, regular_rep_from_image, PermError, Permutation, Rep};
use crate::scalar::{Fp, Scalar};
use crate::twisted::{build_complex, check_rep, trivial_rep, TwistRing, TwistedError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("pushforward needs a single variable, found {0}")]
    Multivariable(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
}

/// The regular cover associated to a representation.
#[derive(Clone, Debug)]
pub struct CoverData {
    pub base: GroupPresentation,
    pub rep: Rep,
    /// Elements of the image group; index 0 is the identity.
    pub elements: Vec<Permutation>,
    /// `table[h][i]` is the index of `elements[h] ∘ alpha(x_i)`.
    pub table: Vec<Vec<usize>>,
    /// Schreier generator `(h, i)` for each generator of `presentation`.
    pub schreier: Vec<(usize, usize)>,
    /// Number of Schreier generators collapsed along the spanning tree.
    pub tree_edges: usize,
    pub presentation: GroupPresentation,
    pub induced_phi: PhiMap,
    pub b1: usize,
    /// Index of the image of the cover's homology, for one variable.
    pub div: Option<i64>,
}

impl CoverData {
    pub fn degree(&self) -> usize {
        self.elements.len()
    }

    /// Euler characteristic of the presentation complex.
    pub fn euler_characteristic(&self) -> isize {
        1 - self.presentation.num_generators as isize + self.presentation.relators.len() as isize
    }
}

pub fn build_cover(p: &GroupPresentation, rep: &Rep, phi: &PhiMap, bound: usize) -> Result<CoverData, CoverError> {
    check_rep(p, rep)?;
    let elements = image_group(rep, bound)?;
    let n = elements.len();
    let g = p.num_generators;
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|h| rep.images.iter().map(|a| index[&h.compose(a)]).collect())
        .collect();

    // Breadth-first spanning tree from the identity; generator order breaks ties.
    let mut transversal: Vec<Option<Vec<i64>>> = vec![None; n];
    let mut tree = vec![vec![false; g]; n];
    transversal[0] = Some(vec![0; phi.nvars]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(h) = queue.pop_front() {
        for i in 0..g {
            let t = table[h][i];
            if transversal[t].is_none() {
                let mut e = transversal[h].clone().unwrap();
                for (a, b) in e.iter_mut().zip(&phi.images[i]) {
                    *a += b;
                }
                transversal[t] = Some(e);
                tree[h][i] = true;
                queue.push_back(t);
            }
        }
    }
    let phi_t: Vec<Vec<i64>> = transversal.into_iter().map(|e| e.expect("image group is connected")).collect();

    let mut schreier = Vec::new();
    let mut number = vec![vec![usize::MAX; g]; n];
    let mut images = Vec::new();
    for h in 0..n {
        for i in 0..g {
            if tree[h][i] {
                continue;
            }
            number[h][i] = schreier.len();
            schreier.push((h, i));
            let t = table[h][i];
            images.push(
                (0..phi.nvars)
                    .map(|v| phi_t[h][v] + phi.images[i][v] - phi_t[t][v])
                    .collect::<Vec<i64>>(),
            );
        }
    }

    let mut inverse_table = vec![vec![0usize; g]; n];
    for h in 0..n {
        for i in 0..g {
            inverse_table[table[h][i]][i] = h;
        }
    }
    let mut relators = Vec::with_capacity(n * p.relators.len());
    for r in &p.relators {
        for start in 0..n {
            let mut h = start;
            let mut letters = Vec::new();
            for l in r.letters() {
                let i = l.generator;
                let (from, to) = if l.inverse {
                    (inverse_table[h][i], inverse_table[h][i])
                } else {
                    (h, table[h][i])
                };
                if number[from][i] != usize::MAX {
                    letters.push(Letter::new(number[from][i], l.inverse));
                }
                h = to;
            }
            debug_assert_eq!(h, start);
            relators.push(FreeWord::from_letters(letters));
        }
    }
    let ngens = schreier.len();
    let presentation = GroupPresentation::new(ngens, relators, vec![0; ngens], false)?;
    let b1 = ngens - rational_rank(&presentation.abelianized_relators());
    let div = (phi.nvars == 1).then(|| images.iter().fold(0i64, |acc, e| acc.gcd(&e[0])));
    Ok(CoverData {
        base: p.clone(),
        rep: rep.clone(),
        elements,
        table,
        schreier,
        tree_edges: n * g - ngens,
        presentation,
        induced_phi: PhiMap { nvars: phi.nvars, images },
        b1,
        div,
    })
}

/// Order of the untwisted homology of the cover, with coefficients pushed
/// down to the base through the induced map.
pub fn cover_alexander_pushforward<const P: u32>(c: &CoverData) -> Result<NormalizedPoly<Fp<P>>, CoverError> {
    if c.induced_phi.nvars != 1 {
        return Err(CoverError::Multivariable(c.induced_phi.nvars));
    }
    let rep = trivial_rep(&c.presentation, 1);
    let complex = build_complex::<Fp<P>>(&c.presentation, &rep, &c.induced_phi)?;
    Ok(crate::laurent::normalize_unit(&<Fp<P> as TwistRing>::order(&complex)?))
}

/// Both sides of the comparison between the twisted polynomial of the
/// regular representation and the pushforward from the cover.
#[derive(Clone, Debug)]
pub struct LemmaReport<C> {
    pub twisted: NormalizedPoly<C>,
    pub cover: NormalizedPoly<C>,
    pub b1: usize,
    pub div: Option<i64>,
    pub equal: bool,
    /// The twisted coefficients sum to zero.
    pub vanishes_at_one: bool,
}

pub fn verify_lemma_2_3<const P: u32>(
    p: &GroupPresentation,
    rep: &Rep,
    phi: &PhiMap,
    bound: usize,
) -> Result<LemmaReport<Fp<P>>, CoverError> {
    let regular = regular_rep_from_image(rep, bound)?;
    let twisted = crate::twisted::twisted_alexander::<Fp<P>>(p, &regular, phi)?;
    let c = build_cover(p, rep, phi, bound)?;
    let cover = cover_alexander_pushforward::<P>(&c)?;
    let equal = twisted == cover;
    let vanishes_at_one = twisted.poly.eval_at_one() == Fp::<P>::from_i64(0);
    Ok(LemmaReport {
        vanishes_at_one,
        twisted,
        cover,
        b1: c.b1,
        div: c.div,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::abelianization_map;

    fn trefoil() -> GroupPresentation {
        GroupPresentation::new(2, vec![FreeWord::from_signed(&[1, 2, 1, -2, -1, -2])], vec![0, 0], true).unwrap()
    }

    #[test]
    fn unknot_triple_cover() {
        let p = GroupPresentation::new(1, vec![], vec![0], true).unwrap();
        let phi = abelianization_map(&p).unwrap();
        let rep = Rep::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]])]);
        let c = build_cover(&p, &rep, &phi, 24).unwrap();
        assert_eq!(c.presentation.num_generators, 1);
        assert_eq!(c.presentation.relators.len(), 0);
        assert_eq!((c.b1, c.div), (1, Some(3)));
        assert!(cover_alexander_pushforward::<13>(&c).unwrap().is_one());
        assert!(verify_lemma_2_3::<13>(&p, &rep, &phi, 24).unwrap().equal);
    }

    #[test]
    fn trefoil_covers() {
        let p = trefoil();
        let phi = abelianization_map(&p).unwrap();
        let trivial = c_of(&p, &Rep::trivial(1, 2));
        assert_eq!((trivial.b1, trivial.div, trivial.degree()), (1, Some(1), 1));
        assert_eq!(cover_alexander_pushforward::<13>(&trivial).unwrap().poly.to_string(), "1 + 12*t + t^2");

        let flip = Permutation::from_cycles(2, &[&[0, 1]]);
        let double = Rep::new(2, vec![flip.clone(), flip]);
        let c = c_of(&p, &double);
        assert_eq!(c.presentation.num_generators, 3);
        assert_eq!(c.presentation.relators.len(), 2);
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.b1, 1);
        let report = verify_lemma_2_3::<13>(&p, &double, &phi, 24).unwrap();
        assert!(report.equal, "{} vs {}", report.twisted.poly, report.cover.poly);

        let s3 = Rep::new(
            3,
            vec![Permutation::from_cycles(3, &[&[0, 1]]), Permutation::from_cycles(3, &[&[0, 2]])],
        );
        let report = verify_lemma_2_3::<13>(&p, &s3, &phi, 24).unwrap();
        assert!(report.equal, "{} vs {}", report.twisted.poly, report.cover.poly);
    }

    fn c_of(p: &GroupPresentation, rep: &Rep) -> CoverData {
        build_cover(p, rep, &abelianization_map(p).unwrap(), 24).unwrap()
    }
}
