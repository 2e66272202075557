//! The product invariant `Δ^k` and the verdicts derived from it.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::CoverError;
use crate::fpgroup::{abelianization_map, GroupPresentation, PresentationError};
use crate::knot_codec::{CodecError, KnotRecord};
use crate::laurent::{normalize_unit, parse_laurent, LaurentPoly, NormalizedPoly, ParsePolyError};
use crate::perm::{image_group, rep_classes, regular_rep_from_image, PermError, Rep, RepClass};
use crate::perm::{DEFAULT_MAX_GROUP_ORDER, DEFAULT_MAX_K};
use crate::scalar::{Fp, Integer, RingTag, Scalar};
use crate::twisted::{twisted_alexander, TwistRing, TwistedError};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("k = {k} exceeds the configured maximum {max}")]
    KTooLarge { k: usize, max: usize },
    #[error("k must be at least 1")]
    KZero,
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("recorded polynomial: {0}")]
    Parse(#[from] ParsePolyError),
    #[error("csv: {0}")]
    Csv(String),
}

impl InvariantError {
    /// Whether the error comes from a configured resource cap.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            InvariantError::KTooLarge { .. } | InvariantError::Perm(PermError::GroupTooLarge { .. })
        ) || matches!(self, InvariantError::Cover(CoverError::Perm(PermError::GroupTooLarge { .. })))
    }
}

/// Resource caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_k: usize,
    pub max_group_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_k: DEFAULT_MAX_K,
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
        }
    }
}

impl Limits {
    fn check_k(&self, k: usize) -> Result<(), InvariantError> {
        if k == 0 {
            Err(InvariantError::KZero)
        } else if k > self.max_k {
            Err(InvariantError::KTooLarge { k, max: self.max_k })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassResult<C> {
    pub class: RepClass,
    pub poly: NormalizedPoly<C>,
}

/// Per-class polynomials and their product.
#[derive(Clone, Debug)]
pub struct InvariantReport<C> {
    pub name: String,
    pub k: usize,
    pub ring: RingTag,
    pub classes: Vec<ClassResult<C>>,
    pub product: NormalizedPoly<C>,
    pub elapsed: Duration,
}

/// Both extreme coefficients are units. Zero is not monic.
pub fn is_monic<C: Scalar>(f: &LaurentPoly<C>) -> bool {
    match (f.lowest_term(), f.highest_term()) {
        (Some((_, lo)), Some((_, hi))) => lo.is_unit() && hi.is_unit(),
        _ => false,
    }
}

impl<C: Scalar> InvariantReport<C> {
    pub fn degree(&self) -> i64 {
        self.product.degree_span()
    }

    /// Over the integers only.
    pub fn monic(&self) -> Option<bool> {
        (self.ring == RingTag::Integers).then(|| is_monic(&self.product.poly))
    }

    pub fn num_abelian(&self) -> usize {
        self.classes.iter().filter(|c| c.class.abelian).count()
    }

    pub fn record(&self) -> ReportRecord {
        ReportRecord {
            name: self.name.clone(),
            k: self.k,
            ring: match self.ring {
                RingTag::Integers => "z".into(),
                RingTag::Fp(_) => "fp".into(),
            },
            p: match self.ring {
                RingTag::Fp(p) => Some(p),
                RingTag::Integers => None,
            },
            classes: self
                .classes
                .iter()
                .map(|c| ClassRecord {
                    rep: c.class.rep.to_string(),
                    orbit: c.class.orbit,
                    abelian: c.class.abelian,
                    poly: c.poly.to_string(),
                })
                .collect(),
            product: self.product.to_string(),
            degree: self.degree(),
            monic: self.monic(),
            verdicts: Vec::new(),
        }
    }
}

/// Serialized form of an [`InvariantReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub name: String,
    pub k: usize,
    pub ring: String,
    pub p: Option<u32>,
    pub classes: Vec<ClassRecord>,
    pub product: String,
    pub degree: i64,
    pub monic: Option<bool>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub rep: String,
    pub orbit: usize,
    pub abelian: bool,
    pub poly: String,
}

/// `Δ^k`: the product over all classes of homomorphisms into `S_k` of the
/// twisted polynomials, in canonical unit form.
pub fn delta_k<C: TwistRing>(
    name: &str,
    p: &GroupPresentation,
    k: usize,
    limits: &Limits,
) -> Result<InvariantReport<C>, InvariantError> {
    limits.check_k(k)?;
    let start = Instant::now();
    let phi = abelianization_map(p)?;
    let classes = rep_classes(p, k);
    let polys: Vec<NormalizedPoly<C>> = classes
        .par_iter()
        .map(|c| twisted_alexander::<C>(p, &c.rep, &phi))
        .collect::<Result<_, _>>()?;
    let product = polys
        .iter()
        .fold(LaurentPoly::one(phi.nvars), |acc, f| &acc * &f.poly);
    Ok(InvariantReport {
        name: name.to_string(),
        k,
        ring: C::ring(),
        classes: classes
            .into_iter()
            .zip(polys)
            .map(|(class, poly)| ClassResult { class, poly })
            .collect(),
        product: normalize_unit(&product),
        elapsed: start.elapsed(),
    })
}

/// Outcome of a search or comparison, with what is needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    TrivialUpTo { k_max: usize, modulus: Option<u32> },
    NontrivialAt { k: usize, poly: String, modulus: Option<u32> },
    /// Monic for every `k` tried. Implies fibered when the genus is one.
    FiberedConsistent { k_max: usize, genus_one: Option<bool> },
    NotFibered { k: usize, class: String, poly: String },
    MutantsDistinguished { k: usize, first: String, second: String },
    MutantsEqualUpTo { k: usize, poly: String },
    Withheld { k: usize, reason: String },
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let modulo = |m: &Option<u32>| m.map(|p| format!(" mod {p}")).unwrap_or_default();
        match self {
            Verdict::TrivialUpTo { k_max, modulus } => write!(f, "trivial up to k = {k_max}{}", modulo(modulus)),
            Verdict::NontrivialAt { k, poly, modulus } => {
                write!(f, "nontrivial at k = {k}{}: {poly}", modulo(modulus))
            }
            Verdict::FiberedConsistent { k_max, genus_one } => {
                write!(f, "fibered-consistent: monic for k <= {k_max}")?;
                match genus_one {
                    Some(true) => write!(f, " (genus one recorded: fibered if monic for every k)"),
                    _ => Ok(()),
                }
            }
            Verdict::NotFibered { k, class, poly } => write!(f, "not fibered: class {class} at k = {k} gives {poly}"),
            Verdict::MutantsDistinguished { k, .. } => write!(f, "DISTINGUISHED at k = {k}"),
            Verdict::MutantsEqualUpTo { k, .. } => write!(f, "NOT DISTINGUISHED at k = {k}"),
            Verdict::Withheld { k, reason } => write!(f, "withheld at k = {k}: {reason}"),
        }
    }
}

fn withheld(k: usize, e: &InvariantError) -> Option<Verdict> {
    match e {
        InvariantError::Twisted(t @ (TwistedError::NoWadaColumn | TwistedError::InexactDivision)) => {
            Some(Verdict::Withheld { k, reason: t.to_string() })
        }
        _ => None,
    }
}

/// Integer `Δ^k` for `k = 1..=k_max`; any non-monic class rules out a
/// fibration.
pub fn monicness_verdict(
    p: &GroupPresentation,
    k_max: usize,
    genus: Option<u32>,
    limits: &Limits,
) -> Result<Verdict, InvariantError> {
    for k in 1..=k_max {
        let report = match delta_k::<Integer>("", p, k, limits) {
            Ok(r) => r,
            Err(e) => return withheld(k, &e).ok_or(e),
        };
        if let Some(c) = report.classes.iter().find(|c| !is_monic(&c.poly.poly)) {
            return Ok(Verdict::NotFibered {
                k,
                class: c.class.rep.to_string(),
                poly: c.poly.to_string(),
            });
        }
    }
    Ok(Verdict::FiberedConsistent {
        k_max,
        genus_one: genus.map(|g| g == 1),
    })
}

/// Smallest `k <= k_max` with `Δ^k != 1`. Works over the integers, and
/// falls back to `F_13` when the integer route is unavailable.
pub fn triviality_search(p: &GroupPresentation, k_max: usize, limits: &Limits) -> Result<Verdict, InvariantError> {
    match search_in::<Integer>(p, k_max, limits, None) {
        Err(e) if withheld(0, &e).is_some() => search_in::<Fp<13>>(p, k_max, limits, Some(13)),
        other => other,
    }
}

fn search_in<C: TwistRing>(
    p: &GroupPresentation,
    k_max: usize,
    limits: &Limits,
    modulus: Option<u32>,
) -> Result<Verdict, InvariantError> {
    for k in 1..=k_max {
        let r = delta_k::<C>("", p, k, limits)?;
        if !r.product.is_one() {
            return Ok(Verdict::NontrivialAt {
                k,
                poly: r.product.to_string(),
                modulus,
            });
        }
    }
    Ok(Verdict::TrivialUpTo { k_max, modulus })
}

/// `Δ^γ` of the regular representation of the image of `rep`, against
/// `Δ^{|G|}`.
#[derive(Clone, Debug)]
pub struct DivisibilityReport<C> {
    pub group_order: usize,
    pub gamma: NormalizedPoly<C>,
    pub delta: NormalizedPoly<C>,
    pub divides: bool,
}

pub fn divisibility_check<C: TwistRing>(
    p: &GroupPresentation,
    rep: &Rep,
    limits: &Limits,
) -> Result<DivisibilityReport<C>, InvariantError> {
    let n = image_group(rep, limits.max_group_order)?.len();
    limits.check_k(n)?;
    let regular = regular_rep_from_image(rep, limits.max_group_order)?;
    let phi = abelianization_map(p)?;
    let gamma = twisted_alexander::<C>(p, &regular, &phi)?;
    let delta = delta_k::<C>("", p, n, limits)?.product;
    let divides = gamma.poly.divides(&delta.poly);
    Ok(DivisibilityReport {
        group_order: n,
        gamma,
        delta,
        divides,
    })
}

#[derive(Clone, Debug)]
pub struct MutantComparison<C> {
    pub first: InvariantReport<C>,
    pub second: InvariantReport<C>,
    pub distinguished: bool,
}

impl<C: Scalar> MutantComparison<C> {
    pub fn verdict(&self) -> Verdict {
        let k = self.first.k;
        if self.distinguished {
            Verdict::MutantsDistinguished {
                k,
                first: self.first.product.to_string(),
                second: self.second.product.to_string(),
            }
        } else {
            Verdict::MutantsEqualUpTo {
                k,
                poly: self.first.product.to_string(),
            }
        }
    }
}

/// Whether `Δ^k` separates two knots, optionally identifying `t` with
/// `t^{-1}`.
pub fn mutant_compare<C: TwistRing>(
    first: (&str, &GroupPresentation),
    second: (&str, &GroupPresentation),
    k: usize,
    allow_mirror: bool,
    limits: &Limits,
) -> Result<MutantComparison<C>, InvariantError> {
    let a = delta_k::<C>(first.0, first.1, k, limits)?;
    let b = delta_k::<C>(second.0, second.1, k, limits)?;
    let same = if allow_mirror {
        a.product.equivalent_up_to_mirror(&b.product)
    } else {
        a.product == b.product
    };
    Ok(MutantComparison {
        first: a,
        second: b,
        distinguished: !same,
    })
}

/// One line of the table of lowest and highest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub knot: String,
    pub k: usize,
    pub num_classes: usize,
    pub degree: i64,
    /// Terms of exponent at most five.
    pub head: String,
    /// The two highest terms.
    pub tail: String,
}

/// Exponents up to this bound make up the head.
pub const HEAD_DEGREE: i64 = 5;

fn head_tail<C: Scalar>(f: &LaurentPoly<C>) -> (String, String) {
    let nv = f.nvars();
    let terms: Vec<_> = f.terms().collect();
    let head = LaurentPoly::from_terms(
        nv,
        terms.iter().filter(|(e, _)| e[0] <= HEAD_DEGREE).map(|(e, c)| ((*e).clone(), (*c).clone())),
    );
    let tail = LaurentPoly::from_terms(
        nv,
        terms.iter().rev().take(2).map(|(e, c)| ((*e).clone(), (*c).clone())),
    );
    (head.to_string(), tail.to_string())
}

impl TableRow {
    pub fn from_report<C: Scalar>(r: &InvariantReport<C>) -> Self {
        Self::from_poly(&r.name, r.k, r.classes.len(), &r.product)
    }

    pub fn from_poly<C: Scalar>(knot: &str, k: usize, num_classes: usize, f: &NormalizedPoly<C>) -> Self {
        let (head, tail) = head_tail(&f.poly);
        TableRow {
            knot: knot.to_string(),
            k,
            num_classes,
            degree: f.degree_span(),
            head,
            tail,
        }
    }

    fn same_as(&self, other: &TableRow) -> bool {
        self.knot == other.knot
            && self.k == other.k
            && self.num_classes == other.num_classes
            && self.degree == other.degree
            && self.head == other.head
            && self.tail == other.tail
    }
}

/// Compare a computed product against an expected row, optionally also
/// trying `t -> t^{-1}`.
pub fn row_matches<C: Scalar>(
    expected: &TableRow,
    num_classes: usize,
    product: &NormalizedPoly<C>,
    allow_mirror: bool,
) -> bool {
    let direct = TableRow::from_poly(&expected.knot, expected.k, num_classes, product);
    direct.same_as(expected)
        || (allow_mirror
            && TableRow::from_poly(&expected.knot, expected.k, num_classes, &product.mirrored()).same_as(expected))
}

/// Rows of a `knot,k,num_classes,degree,head,tail` file.
pub fn read_table(text: &str) -> Result<Vec<TableRow>, InvariantError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<TableRow>, _>>()
        .map_err(|e| InvariantError::Csv(e.to_string()))
}

pub fn write_table(rows: &[TableRow]) -> Result<String, InvariantError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| InvariantError::Csv(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| InvariantError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Expected lowest and highest terms bundled with the library.
pub const GOLDEN_TABLE: &str = include_str!("../data/appendix.csv");

/// Result of checking a fixture's `k = 1` polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub computed: String,
    pub recorded: Option<String>,
    /// `None` when nothing is recorded.
    pub agrees: Option<bool>,
}

/// Compare `Δ^1` over the integers with the recorded classical polynomial,
/// up to units and `t -> t^{-1}`.
pub fn validate_fixture(record: &KnotRecord) -> Result<FixtureCheck, InvariantError> {
    let p = record.presentation()?;
    let d1 = delta_k::<Integer>(&record.name, &p, 1, &Limits::default())?.product;
    let (recorded, agrees) = match &record.alexander {
        Some(text) => {
            let f = normalize_unit(&parse_laurent::<Integer>(text, d1.poly.nvars())?);
            (Some(f.to_string()), Some(d1.equivalent_up_to_mirror(&f)))
        }
        None => (None, None),
    };
    Ok(FixtureCheck {
        computed: d1.to_string(),
        recorded,
        agrees,
    })
}
