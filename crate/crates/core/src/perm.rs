//! Permutations, homomorphisms of finitely presented groups into `S_k`, and
//! their classes under simultaneous conjugation.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::fpgroup::{FreeWord, GroupPresentation, Letter};

/// Largest `k` accepted by the enumeration entry points.
pub const DEFAULT_MAX_K: usize = 6;

/// Largest image group turned into a regular representation by default.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image list {0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),
    #[error("image group has order above the bound {bound}")]
    GroupTooLarge { bound: usize },
    #[error("representation has {found} images but the presentation has {expected} generators")]
    WrongArity { expected: usize, found: usize },
}

/// Bijection of `{0, ..., k-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation((0..k as u8).collect())
    }

    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in images {
            if i >= k || seen[i] || k > u8::MAX as usize {
                return Err(PermError::NotAPermutation(images.to_vec()));
            }
            seen[i] = true;
        }
        Ok(Permutation(images.iter().map(|&i| i as u8).collect()))
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Self {
        let mut p = Self::identity(k);
        for c in cycles.iter().rev() {
            let mut q = Self::identity(k);
            for w in 0..c.len() {
                q.0[c[w]] = c[(w + 1) % c.len()] as u8;
            }
            p = q.compose(&p);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        Permutation(rhs.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        Permutation(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `s ∘ self ∘ s^{-1}`.
    pub fn conjugate_by(&self, s: &Self) -> Self {
        let mut out = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[s.0[i] as usize] = s.0[j as usize];
        }
        Permutation(out)
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// All permutations of degree `k` in lexicographic order of image lists.
    pub fn all(k: usize) -> Vec<Self> {
        let mut cur: Vec<u8> = (0..k as u8).collect();
        let mut out = vec![Permutation(cur.clone())];
        loop {
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation(cur.clone()));
        }
    }

    /// Representative of the conjugacy class with the given cycle type:
    /// consecutive cycles `(0 1 .. a-1)(a ..)...`.
    pub fn with_cycle_type(parts: &[usize]) -> Self {
        let k: usize = parts.iter().sum();
        let mut img = vec![0u8; k];
        let mut start = 0;
        for &len in parts {
            for i in 0..len {
                img[start + i] = (start + (i + 1) % len) as u8;
            }
            start += len;
        }
        Permutation(img)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            any = true;
            let mut cyc = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i.to_string());
                i = self.0[i] as usize;
            }
            write!(f, "({})", cyc.join(" "))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Partitions of `k` into decreasing parts, in lexicographically decreasing
/// order.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Evaluate `w` with `alpha(uv) = alpha(u) ∘ alpha(v)`, using `buf` as
/// scratch space. The result is left in `out`.
fn eval_into(images: &[Permutation], letters: &[Letter], inverses: &[Permutation], out: &mut Vec<u8>, buf: &mut Vec<u8>) {
    let k = out.len();
    for (i, x) in out.iter_mut().enumerate() {
        *x = i as u8;
    }
    for l in letters {
        let p = if l.inverse {
            &inverses[l.generator]
        } else {
            &images[l.generator]
        };
        buf.clear();
        buf.extend((0..k).map(|i| out[p.0[i] as usize]));
        std::mem::swap(out, buf);
    }
}

/// A homomorphism into `S_k`, given by the images of the generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rep {
    pub k: usize,
    pub images: Vec<Permutation>,
}

impl Rep {
    pub fn new(k: usize, images: Vec<Permutation>) -> Self {
        assert!(images.iter().all(|p| p.degree() == k), "image degree differs from k");
        Rep { k, images }
    }

    pub fn trivial(k: usize, num_generators: usize) -> Self {
        Rep::new(k, vec![Permutation::identity(k); num_generators])
    }

    pub fn eval(&self, w: &FreeWord) -> Permutation {
        let inv: Vec<Permutation> = self.images.iter().map(Permutation::inverse).collect();
        let mut out = vec![0u8; self.k];
        let mut buf = Vec::with_capacity(self.k);
        eval_into(&self.images, w.letters(), &inv, &mut out, &mut buf);
        Permutation(out)
    }

    pub fn satisfies(&self, p: &GroupPresentation) -> bool {
        self.images.len() == p.num_generators && p.relators.iter().all(|r| self.eval(r).is_identity())
    }

    pub fn conjugate_by(&self, s: &Permutation) -> Rep {
        Rep {
            k: self.k,
            images: self.images.iter().map(|p| p.conjugate_by(s)).collect(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.images.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| self.images[i].compose(&self.images[j]) == self.images[j].compose(&self.images[i]))
        })
    }

    /// Lexicographically smallest simultaneous conjugate, and the orbit size.
    pub fn canonical(&self) -> (Rep, usize) {
        canonical_with(self, &Permutation::all(self.k))
    }

    /// Whether the image group acts transitively on `{0, ..., k-1}`.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.k];
        let mut stack = vec![0usize];
        if self.k == 0 {
            return true;
        }
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for p in &self.images {
                let j = p.apply(i);
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn canonical_with(rep: &Rep, all: &[Permutation]) -> (Rep, usize) {
    let mut best: Option<Rep> = None;
    let mut stabilizer = 0;
    for s in all {
        let c = rep.conjugate_by(s);
        if c == *rep {
            stabilizer += 1;
        }
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    (best.unwrap(), all.len() / stabilizer)
}

/// A class of homomorphisms under simultaneous conjugation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RepClass {
    /// Lexicographically smallest member.
    pub rep: Rep,
    /// Number of homomorphisms in the class.
    pub orbit: usize,
    pub abelian: bool,
}

impl RepClass {
    fn of(rep: &Rep, all: &[Permutation]) -> Self {
        let (rep, orbit) = canonical_with(rep, all);
        let abelian = rep.is_abelian();
        RepClass { rep, orbit, abelian }
    }
}

/// Depth-first search over generator images.
struct Search<'a> {
    k: usize,
    relators: Vec<&'a [Letter]>,
    /// Generators occurring in each relator.
    support: Vec<Vec<usize>>,
    order: Vec<usize>,
    component_of: Option<&'a [usize]>,
    by_type: HashMap<Vec<usize>, Vec<Permutation>>,
    all: Vec<Permutation>,
}

type Assignment = Vec<Option<Permutation>>;

/// Levels of the search tree that are split across threads.
const PARALLEL_DEPTH: usize = 2;

impl<'a> Search<'a> {
    fn new(p: &'a GroupPresentation, k: usize) -> Self {
        let g = p.num_generators;
        let relators: Vec<&[Letter]> = p.relators.iter().map(|r| r.letters()).filter(|r| !r.is_empty()).collect();
        let support: Vec<Vec<usize>> = relators
            .iter()
            .map(|r| {
                let mut s: Vec<usize> = r.iter().map(|l| l.generator).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        // most-constrained generator first, then whichever closes the most
        // relators given the ones already placed
        let mut order = Vec::with_capacity(g);
        let mut placed = vec![false; g];
        let coverage = |x: usize| support.iter().filter(|s| s.contains(&x)).count();
        for _ in 0..g {
            let best = (0..g)
                .filter(|&x| !placed[x])
                .max_by_key(|&x| {
                    let closes = support
                        .iter()
                        .filter(|s| s.contains(&x) && s.iter().all(|&y| y == x || placed[y]))
                        .count();
                    (closes, coverage(x), std::cmp::Reverse(x))
                })
                .unwrap();
            placed[best] = true;
            order.push(best);
        }
        let all = Permutation::all(k);
        let mut by_type: HashMap<Vec<usize>, Vec<Permutation>> = HashMap::new();
        for s in &all {
            by_type.entry(s.cycle_type()).or_default().push(s.clone());
        }
        Search {
            k,
            relators,
            support,
            order,
            component_of: p.meridional.then_some(&p.component_of[..]),
            by_type,
            all,
        }
    }

    fn cycle_type_ok(&self, state: &Assignment, x: usize, s: &Permutation) -> bool {
        let Some(comp) = self.component_of else {
            return true;
        };
        state
            .iter()
            .enumerate()
            .filter(|(y, a)| a.is_some() && comp[*y] == comp[x])
            .all(|(_, a)| a.as_ref().unwrap().cycle_type() == s.cycle_type())
    }

    /// Fill in forced images and check completed relators. Returns false on
    /// a contradiction.
    fn propagate(&self, state: &mut Assignment) -> bool {
        let k = self.k;
        let mut out = vec![0u8; k];
        let mut buf = Vec::with_capacity(k);
        let ident = Permutation::identity(k);
        let mut images: Vec<Permutation> = state.iter().map(|a| a.clone().unwrap_or_else(|| ident.clone())).collect();
        let mut inverses: Vec<Permutation> = images.iter().map(Permutation::inverse).collect();
        loop {
            let mut changed = false;
            for (r, sup) in self.relators.iter().zip(&self.support) {
                let mut free = sup.iter().copied().filter(|&x| state[x].is_none());
                let (first, second) = (free.next(), free.next());
                match (first, second) {
                    (None, _) => {
                        eval_into(&images, r, &inverses, &mut out, &mut buf);
                        if out.iter().enumerate().any(|(i, &j)| i != j as usize) {
                            return false;
                        }
                    }
                    (Some(x), None) => {
                        let mut pos = r.iter().enumerate().filter(|(_, l)| l.generator == x).map(|(i, _)| i);
                        let (Some(i), None) = (pos.next(), pos.next()) else {
                            continue;
                        };
                        eval_into(&images, &r[..i], &inverses, &mut out, &mut buf);
                        let u = Permutation(out.clone());
                        eval_into(&images, &r[i + 1..], &inverses, &mut out, &mut buf);
                        let v = Permutation(out.clone());
                        // u x^e v = 1
                        let vu = v.compose(&u);
                        let s = if r[i].inverse { vu } else { vu.inverse() };
                        if !self.cycle_type_ok(state, x, &s) {
                            return false;
                        }
                        inverses[x] = s.inverse();
                        images[x] = s.clone();
                        state[x] = Some(s);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn candidates(&self, state: &Assignment, x: usize, depth: usize) -> Vec<Permutation> {
        if depth == 0 {
            return partitions(self.k).iter().map(|p| Permutation::with_cycle_type(p)).collect();
        }
        if let Some(comp) = self.component_of {
            if let Some(s) = state
                .iter()
                .enumerate()
                .find(|(y, a)| a.is_some() && comp[*y] == comp[x])
                .map(|(_, a)| a.as_ref().unwrap())
            {
                return self.by_type[&s.cycle_type()].clone();
            }
        }
        self.all.clone()
    }

    fn run(&self, mut state: Assignment, depth: usize) -> Vec<Vec<Permutation>> {
        if !self.propagate(&mut state) {
            return Vec::new();
        }
        let Some(&x) = self.order.iter().find(|&&x| state[x].is_none()) else {
            return vec![state.into_iter().map(Option::unwrap).collect()];
        };
        let cands = self.candidates(&state, x, depth);
        let branch = |s: Permutation| {
            let mut next = state.clone();
            next[x] = Some(s);
            self.run(next, depth + 1)
        };
        if depth < PARALLEL_DEPTH {
            cands.into_par_iter().flat_map_iter(branch).collect()
        } else {
            cands.into_iter().flat_map(branch).collect()
        }
    }
}

/// Homomorphisms whose first-searched generator maps to a fixed
/// representative of its conjugacy class; every homomorphism is conjugate to
/// at least one of them.
fn class_seeds(p: &GroupPresentation, k: usize) -> Vec<Rep> {
    if p.num_generators == 0 {
        return vec![Rep::new(k, Vec::new())];
    }
    let search = Search::new(p, k);
    search
        .run(vec![None; p.num_generators], 0)
        .into_iter()
        .map(|images| Rep::new(k, images))
        .collect()
}

/// Every homomorphism into `S_k`, sorted.
pub fn enumerate_homs(p: &GroupPresentation, k: usize) -> Vec<Rep> {
    let all = Permutation::all(k);
    let mut set: HashSet<Rep> = HashSet::new();
    for seed in class_seeds(p, k) {
        for s in &all {
            set.insert(seed.conjugate_by(s));
        }
    }
    let mut out: Vec<Rep> = set.into_iter().collect();
    out.sort();
    out
}

/// Partition a complete list of homomorphisms into conjugacy classes,
/// sorted by canonical representative.
pub fn conjugacy_classes(reps: &[Rep]) -> Vec<RepClass> {
    let Some(first) = reps.first() else {
        return Vec::new();
    };
    let all = Permutation::all(first.k);
    let set: HashSet<RepClass> = reps.par_iter().map(|r| RepClass::of(r, &all)).collect();
    let mut out: Vec<RepClass> = set.into_iter().collect();
    out.sort();
    out
}

/// The classes of homomorphisms into `S_k`, without listing every member.
pub fn rep_classes(p: &GroupPresentation, k: usize) -> Vec<RepClass> {
    conjugacy_classes(&class_seeds(p, k))
}

/// Elements of the group generated by the images, in breadth-first order
/// from the identity under left multiplication by the generators.
pub fn image_group(rep: &Rep, bound: usize) -> Result<Vec<Permutation>, PermError> {
    let mut elems = vec![Permutation::identity(rep.k)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut head = 0;
    while head < elems.len() {
        let g = elems[head].clone();
        head += 1;
        for a in &rep.images {
            let h = a.compose(&g);
            if !index.contains_key(&h) {
                if elems.len() == bound {
                    return Err(PermError::GroupTooLarge { bound });
                }
                index.insert(h.clone(), elems.len());
                elems.push(h);
            }
        }
    }
    Ok(elems)
}

/// Left-regular representation of the image group `G`: each generator acts
/// on the element list of `G` by left multiplication by its image.
pub fn regular_rep_from_image(rep: &Rep, bound: usize) -> Result<Rep, PermError> {
    let elems = image_group(rep, bound)?;
    let index: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let images = rep
        .images
        .iter()
        .map(|a| {
            let img: Vec<usize> = elems.iter().map(|g| index[&a.compose(g)]).collect();
            Permutation::from_images(&img).expect("left multiplication is a bijection")
        })
        .collect();
    Ok(Rep::new(elems.len(), images))
}

/// Permutation matrix with entry `(s(i), i) = 1`, as rows of 0/1 values.
pub fn permutation_matrix(s: &Permutation) -> Vec<Vec<u8>> {
    let k = s.degree();
    let mut m = vec![vec![0u8; k]; k];
    for i in 0..k {
        m[s.apply(i)][i] = 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::FreeWord;

    fn trefoil() -> GroupPresentation {
        GroupPresentation::new(2, vec![FreeWord::from_signed(&[1, 2, 1, -2, -1, -2])], vec![0, 0], true).unwrap()
    }

    fn unknot() -> GroupPresentation {
        GroupPresentation::new(1, vec![], vec![0], true).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]);
        let b = Permutation::from_cycles(3, &[&[1, 2]]);
        // apply b then a: 1 -> 2 -> 2, 2 -> 1 -> 0
        assert_eq!(a.compose(&b).images(), vec![1, 2, 0]);
        assert_eq!(a.compose(&a), Permutation::identity(3));
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::with_cycle_type(&[3, 2]).cycle_type(), vec![3, 2]);
        assert_eq!(Permutation::from_cycles(4, &[&[0, 2, 3]]).to_string(), "(0 2 3)");
        assert!(Permutation::from_images(&[0, 0]).is_err());
        assert_eq!(partitions(5).len(), 7);
    }

    #[test]
    fn conjugation_matches_composition() {
        let s = Permutation::from_cycles(4, &[&[0, 3, 1]]);
        let p = Permutation::from_cycles(4, &[&[1, 2]]);
        assert_eq!(p.conjugate_by(&s), s.compose(&p).compose(&s.inverse()));
    }

    #[test]
    fn permutation_matrices() {
        assert_eq!(permutation_matrix(&Permutation::identity(2)), vec![vec![1, 0], vec![0, 1]]);
        let flip = Permutation::from_cycles(2, &[&[0, 1]]);
        assert_eq!(permutation_matrix(&flip), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn unknot_homs_and_classes() {
        assert_eq!(enumerate_homs(&unknot(), 3).len(), 6);
        assert_eq!(rep_classes(&unknot(), 5).len(), 7);
    }

    #[test]
    fn trefoil_homs_by_brute_force() {
        let p = trefoil();
        for k in 1..=4 {
            let all = Permutation::all(k);
            let mut brute = Vec::new();
            for a in &all {
                for b in &all {
                    let r = Rep::new(k, vec![a.clone(), b.clone()]);
                    if r.satisfies(&p) {
                        brute.push(r);
                    }
                }
            }
            brute.sort();
            assert_eq!(enumerate_homs(&p, k), brute, "k = {k}");
        }
        assert_eq!(enumerate_homs(&p, 2).len(), 2);
        assert_eq!(enumerate_homs(&p, 3).len(), 12);
        let classes = rep_classes(&p, 3);
        assert_eq!(classes.len(), 4);
        assert_eq!(classes.iter().map(|c| c.orbit).sum::<usize>(), 12);
    }

    #[test]
    fn regular_representation() {
        let p = trefoil();
        let trivial = Rep::trivial(3, 2);
        assert_eq!(regular_rep_from_image(&trivial, 24).unwrap(), Rep::trivial(1, 2));
        let flip = Permutation::from_cycles(2, &[&[0, 1]]);
        let r = Rep::new(2, vec![flip.clone(), flip.clone()]);
        assert_eq!(regular_rep_from_image(&r, 24).unwrap(), r);
        let s3 = Rep::new(3, vec![Permutation::from_cycles(3, &[&[0, 1]]), Permutation::from_cycles(3, &[&[0, 2]])]);
        assert!(s3.satisfies(&p));
        let reg = regular_rep_from_image(&s3, 24).unwrap();
        assert_eq!(reg.k, 6);
        assert!(reg.satisfies(&p));
        assert!(reg.is_transitive());
        assert!(matches!(regular_rep_from_image(&s3, 5), Err(PermError::GroupTooLarge { .. })));
    }
}
