//! Braid words, planar diagram codes and the knot fixture file, turned into
//! presentations of link groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::fpgroup::{drop_redundant_relation, FreeWord, GroupPresentation, Letter, PresentationError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed token `{0}`")]
    BadToken(String),
    #[error("braid letter 0 does not name a generator")]
    ZeroLetter,
    #[error("braid letter {letter} needs more than {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("malformed crossing `{0}`")]
    BadCrossing(String),
    #[error("edge {label} occurs {count} times; every edge must occur exactly twice")]
    EdgeCount { label: u32, count: usize },
    #[error("edge labels of a component are not a contiguous run: {0:?}")]
    NonContiguous(Vec<u32>),
    #[error("crossing {0} does not follow the orientation of its under-strand")]
    Orientation(usize),
    #[error("fixture line {line}: {reason}")]
    Fixture { line: usize, reason: String },
    #[error("duplicate fixture name `{0}`")]
    DuplicateName(String),
    #[error("cannot read fixture file: {0}")]
    Io(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A word in the Artin generators of the braid group on `strands` strands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.letters.iter().map(i32::to_string).collect();
        write!(f, "{}: {}", self.strands, body.join(" "))
    }
}

/// Parse whitespace-separated signed generator indices, optionally preceded
/// by `n:` giving the strand count.
pub fn parse_braid(text: &str) -> Result<BraidWord, CodecError> {
    let (declared, body) = match text.split_once(':') {
        Some((n, rest)) => {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| CodecError::BadToken(n.trim().to_string()))?;
            if n == 0 {
                return Err(CodecError::BadToken(text.trim().to_string()));
            }
            (Some(n), rest)
        }
        None => (None, text),
    };
    let mut letters = Vec::new();
    for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let v: i32 = tok.parse().map_err(|_| CodecError::BadToken(tok.to_string()))?;
        if v == 0 {
            return Err(CodecError::ZeroLetter);
        }
        letters.push(v);
    }
    let needed = letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(1);
    let strands = declared.unwrap_or(needed);
    if let Some(&bad) = letters.iter().find(|l| l.unsigned_abs() as usize >= strands) {
        return Err(CodecError::LetterOutOfRange {
            letter: bad,
            strands,
        });
    }
    Ok(BraidWord { strands, letters })
}

impl BraidWord {
    /// Underlying permutation: strand `i` at the top ends at position
    /// `perm[i]` at the bottom.
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let j = l.unsigned_abs() as usize - 1;
            for p in pos.iter_mut() {
                if *p == j {
                    *p = j + 1;
                } else if *p == j + 1 {
                    *p = j;
                }
            }
        }
        pos
    }
}

/// Artin action of a single letter on the free group of rank `n`.
fn artin_images(n: usize, letter: i32) -> Vec<FreeWord> {
    let j = letter.unsigned_abs() as usize - 1;
    let x = |i: usize, inv: bool| Letter::new(i, inv);
    let mut images: Vec<FreeWord> = (0..n).map(FreeWord::generator).collect();
    if letter > 0 {
        images[j] = FreeWord::from_letters(vec![x(j, false), x(j + 1, false), x(j, true)]);
        images[j + 1] = FreeWord::generator(j);
    } else {
        images[j] = FreeWord::generator(j + 1);
        images[j + 1] = FreeWord::from_letters(vec![x(j + 1, true), x(j, false), x(j + 1, false)]);
    }
    images
}

/// Presentation of the complement of the braid closure: one meridian per
/// strand and relators `x_i * beta(x_i)^{-1}`, with one redundant relator
/// removed.
pub fn braid_to_presentation(b: &BraidWord) -> Result<GroupPresentation, CodecError> {
    let n = b.strands;
    let mut images: Vec<FreeWord> = (0..n).map(FreeWord::generator).collect();
    for &l in &b.letters {
        let step = artin_images(n, l);
        images = images.iter().map(|w| w.substitute(&step)).collect();
    }
    let relators: Vec<FreeWord> = images
        .iter()
        .enumerate()
        .map(|(i, w)| FreeWord::generator(i).mul(&w.inverse()))
        .collect();
    let perm = b.permutation();
    let mut component_of = vec![usize::MAX; n];
    let mut m = 0;
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let mut i = start;
        while component_of[i] == usize::MAX {
            component_of[i] = m;
            i = perm[i];
        }
        m += 1;
    }
    let p = GroupPresentation::new(n, relators, component_of, true)?;
    Ok(drop_redundant_relation(&p)?)
}

/// Planar diagram code: crossings `X(i, j, k, l)` with `i` the incoming
/// under-edge and the remaining edges listed counterclockwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c[0], c[1], c[2], c[3]))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Parse `X(a,b,c,d);X(...)`. Separators between crossings may be `;`,
/// `,` or whitespace.
pub fn parse_pd(text: &str) -> Result<PdCode, CodecError> {
    let mut crossings = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ';' || c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix("X(")
            .or_else(|| rest.strip_prefix("X["))
            .ok_or_else(|| CodecError::BadCrossing(rest.chars().take(16).collect()))?;
        let end = body
            .find([')', ']'])
            .ok_or_else(|| CodecError::BadCrossing(rest.to_string()))?;
        let nums: Result<Vec<u32>, _> = body[..end].split(',').map(|s| s.trim().parse::<u32>()).collect();
        let nums = nums.map_err(|_| CodecError::BadCrossing(body[..end].to_string()))?;
        if nums.len() != 4 {
            return Err(CodecError::BadCrossing(body[..end].to_string()));
        }
        crossings.push([nums[0], nums[1], nums[2], nums[3]]);
        rest = &body[end + 1..];
    }
    if crossings.is_empty() {
        return Err(CodecError::BadCrossing(text.to_string()));
    }
    Ok(PdCode { crossings })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Wirtinger presentation: one generator per over-arc, one conjugation
/// relator per crossing, one relator dropped.
pub fn pd_to_wirtinger(pd: &PdCode) -> Result<GroupPresentation, CodecError> {
    let mut count: BTreeMap<u32, usize> = BTreeMap::new();
    for c in &pd.crossings {
        for &e in c {
            *count.entry(e).or_default() += 1;
        }
    }
    if let Some((&label, &n)) = count.iter().find(|(_, &n)| n != 2) {
        return Err(CodecError::EdgeCount { label, count: n });
    }
    let labels: Vec<u32> = count.keys().copied().collect();
    let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let ne = labels.len();

    // components: the under-strand joins i and k, the over-strand j and l
    let mut comp = UnionFind::new(ne);
    for c in &pd.crossings {
        comp.union(index[&c[0]], index[&c[2]]);
        comp.union(index[&c[1]], index[&c[3]]);
    }
    let mut members: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        members.entry(comp.find(i)).or_default().push(l);
    }
    let mut next: HashMap<u32, u32> = HashMap::new();
    let mut component_label: HashMap<u32, usize> = HashMap::new();
    for (ci, run) in members.values().enumerate() {
        let (lo, hi) = (run[0], run[run.len() - 1]);
        if (hi - lo) as usize + 1 != run.len() {
            return Err(CodecError::NonContiguous(run.clone()));
        }
        for &l in run {
            next.insert(l, if l == hi { lo } else { l + 1 });
            component_label.insert(l, ci);
        }
    }

    // arcs: edges glued across over-passes
    let mut arcs = UnionFind::new(ne);
    for c in &pd.crossings {
        arcs.union(index[&c[1]], index[&c[3]]);
    }
    let mut arc_id: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..ne {
        let r = arcs.find(i);
        let n = arc_id.len();
        arc_id.entry(r).or_insert(n);
    }
    let mut arc_of = |l: u32| arc_id[&arcs.find(index[&l])];

    let mut relators = Vec::new();
    for (n, c) in pd.crossings.iter().enumerate() {
        let [i, j, k, l] = *c;
        if next[&i] != k {
            return Err(CodecError::Orientation(n));
        }
        let positive = if next[&l] == j {
            true
        } else if next[&j] == l {
            false
        } else {
            return Err(CodecError::Orientation(n));
        };
        let (a_in, a_out, a_over) = (arc_of(i), arc_of(k), arc_of(j));
        let eps = !positive;
        // x_out = x_over^e x_in x_over^-e
        relators.push(FreeWord::from_letters(vec![
            Letter::new(a_over, eps),
            Letter::new(a_in, false),
            Letter::new(a_over, !eps),
            Letter::new(a_out, true),
        ]));
    }
    let num_arcs = arc_id.len();
    let mut component_of = vec![0; num_arcs];
    for &l in &labels {
        component_of[arc_of(l)] = component_label[&l];
    }
    let p = GroupPresentation::new(num_arcs, relators, component_of, true)?;
    Ok(drop_redundant_relation(&p)?)
}

/// Diagram encoding of a fixture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Encoding {
    Braid(BraidWord),
    Pd(PdCode),
}

impl Encoding {
    pub fn presentation(&self) -> Result<GroupPresentation, CodecError> {
        match self {
            Encoding::Braid(b) => braid_to_presentation(b),
            Encoding::Pd(pd) => pd_to_wirtinger(pd),
        }
    }
}

/// One named knot or link from the fixture file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnotRecord {
    pub name: String,
    pub encoding: Encoding,
    pub genus: Option<u32>,
    /// Published classical Alexander polynomial, in the text form used
    /// throughout.
    pub alexander: Option<String>,
    pub notes: String,
}

impl KnotRecord {
    pub fn presentation(&self) -> Result<GroupPresentation, CodecError> {
        self.encoding.presentation()
    }
}

/// Parsed fixture file, records in file order.
#[derive(Clone, Debug, Default)]
pub struct Fixtures {
    records: Vec<KnotRecord>,
}

/// Fixture file bundled with the library.
pub const BUNDLED_FIXTURES: &str = include_str!("../data/knots.txt");

/// Environment variable naming a fixture file to use instead of the bundled
/// one.
pub const FIXTURES_ENV: &str = "KNOTWIST_FIXTURES";

impl Fixtures {
    /// Parse `name | braid|pd | code | genus | alexander [| notes]` lines;
    /// `#` starts a comment and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, CodecError> {
        let mut records: Vec<KnotRecord> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| CodecError::Fixture { line: n + 1, reason };
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(err("expected at least name, type and code".into()));
            }
            let name = fields[0].to_string();
            if name.is_empty() {
                return Err(err("empty name".into()));
            }
            let encoding = match fields[1] {
                "braid" => Encoding::Braid(parse_braid(fields[2]).map_err(|e| err(e.to_string()))?),
                "pd" => Encoding::Pd(parse_pd(fields[2]).map_err(|e| err(e.to_string()))?),
                other => return Err(err(format!("unknown encoding `{other}`"))),
            };
            let field = |i: usize| fields.get(i).copied().filter(|s| !s.is_empty());
            let genus = field(3)
                .map(|g| g.parse::<u32>().map_err(|_| err(format!("bad genus `{g}`"))))
                .transpose()?;
            if records.iter().any(|r| r.name == name) {
                return Err(CodecError::DuplicateName(name));
            }
            records.push(KnotRecord {
                name,
                encoding,
                genus,
                alexander: field(4).map(str::to_string),
                notes: field(5).unwrap_or("").to_string(),
            });
        }
        Ok(Fixtures { records })
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_FIXTURES).expect("bundled fixture file parses")
    }

    pub fn from_path(path: &Path) -> Result<Self, CodecError> {
        let text = std::fs::read_to_string(path).map_err(|e| CodecError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The file named by `KNOTWIST_FIXTURES` when set, else the bundled one.
    pub fn load() -> Result<Self, CodecError> {
        match std::env::var_os(FIXTURES_ENV) {
            Some(p) => Self::from_path(Path::new(&p)),
            None => Ok(Self::bundled()),
        }
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }
}
