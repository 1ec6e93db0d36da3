//! D-invariants: the free commutative monoid over the block types `K(s,t)` and `L(m)`,
//! MANSA class counts per block, and tube-class counting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockType {
    K(usize, usize),
    L(usize),
}

impl BlockType {
    pub fn k(s: usize, t: usize) -> Result<Self> {
        if s * t == 0 && s + t != 1 {
            return Err(Error::RangeError(format!("({s},{t}) is not a block type")));
        }
        Ok(BlockType::K(s, t))
    }

    pub fn l(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::RangeError("L(0) is not a block type".into()));
        }
        Ok(BlockType::L(m))
    }

    /// Contribution `(p, q)` of the block to the two defining sums.
    pub fn budget(self) -> (usize, usize) {
        match self {
            BlockType::K(s, t) => (s, t),
            BlockType::L(m) => (m, m),
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            BlockType::K(s, t) => BlockType::K(t, s),
            l => l,
        }
    }

    /// Blocks of the Cartan subalgebras.
    pub fn is_cartan(self) -> bool {
        matches!(self, BlockType::K(1, 0) | BlockType::K(0, 1) | BlockType::L(1))
    }
}

impl BlockType {
    fn order_key(self) -> (u8, usize, usize) {
        match self {
            BlockType::K(1, 0) => (0, 0, 0),
            BlockType::K(0, 1) => (1, 0, 0),
            BlockType::K(s, t) => (2, s, t),
            BlockType::L(m) => (3, m, 0),
        }
    }
}

/// `(1,0)`, then `(0,1)`, then the remaining `(s,t)` lexicographically, then `L(m)`.
impl Ord for BlockType {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&o.order_key())
    }
}

impl PartialOrd for BlockType {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockType::K(s, t) => write!(f, "({s},{t})"),
            BlockType::L(m) => write!(f, "L{m}"),
        }
    }
}

/// Multiset of block types.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DInvariant {
    blocks: BTreeMap<BlockType, usize>,
}

impl DInvariant {
    pub fn new() -> Self {
        DInvariant::default()
    }

    pub fn from_blocks(blocks: &[(BlockType, usize)]) -> Self {
        let mut d = DInvariant::new();
        for &(b, m) in blocks {
            d.add(b, m);
        }
        d
    }

    pub fn add(&mut self, b: BlockType, mult: usize) {
        if mult > 0 {
            *self.blocks.entry(b).or_insert(0) += mult;
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (BlockType, usize)> + '_ {
        self.blocks.iter().map(|(&b, &m)| (b, m))
    }

    pub fn multiplicity(&self, b: BlockType) -> usize {
        self.blocks.get(&b).copied().unwrap_or(0)
    }

    /// `(Σ n_j s + Σ n_j m, Σ n_j t + Σ n_j m)`.
    pub fn pq(&self) -> (usize, usize) {
        self.blocks().fold((0, 0), |(p, q), (b, m)| {
            let (s, t) = b.budget();
            (p + m * s, q + m * t)
        })
    }

    pub fn sum(&self, o: &DInvariant) -> DInvariant {
        let mut d = self.clone();
        for (b, m) in o.blocks() {
            d.add(b, m);
        }
        d
    }

    pub fn opposite(&self) -> DInvariant {
        let mut d = DInvariant::new();
        for (b, m) in self.blocks() {
            d.add(b.opposite(), m);
        }
        d
    }

    pub fn is_cartan(&self) -> bool {
        self.blocks().all(|(b, _)| b.is_cartan())
    }

    pub fn to_json(&self) -> Value {
        let (p, q) = self.pq();
        json!({
            "display": self.to_string(),
            "p": p,
            "q": q,
            "blocks": self.blocks().map(|(b, m)| match b {
                BlockType::K(s, t) => json!({"kind": "K", "s": s, "t": t, "mult": m}),
                BlockType::L(l) => json!({"kind": "L", "m": l, "mult": m}),
            }).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for DInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.blocks().map(|(b, m)| if m == 1 { b.to_string() } else { format!("{m}*{b}") }).collect();
        write!(f, "{}", parts.join("+"))
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("expected a natural number, got `{s}`")))
}

impl FromStr for DInvariant {
    type Err = Error;

    /// Accepts `4*(3,5)+2*L7`; `·` may replace `*` and `𝕃`-style blocks are written `L<m>`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('·', "*");
        let mut d = DInvariant::new();
        if s == "0" || s.is_empty() {
            return Ok(d);
        }
        let mut depth = 0;
        let mut terms = Vec::new();
        let mut cur = String::new();
        for c in s.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if c == '+' && depth == 0 {
                terms.push(std::mem::take(&mut cur));
            } else {
                cur.push(c);
            }
        }
        terms.push(cur);
        for term in terms {
            let (mult, body) = match term.split_once('*') {
                Some((m, b)) => (parse_usize(m)?, b.to_string()),
                None => (1, term.clone()),
            };
            let block = if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
                let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad block `{body}`")))?;
                BlockType::k(parse_usize(a)?, parse_usize(b)?)?
            } else if let Some(m) = body.strip_prefix('L') {
                BlockType::l(parse_usize(m)?)?
            } else {
                return Err(Error::Parse(format!("bad block `{body}`")));
            };
            if mult == 0 {
                return Err(Error::Parse("multiplicity must be positive".into()));
            }
            d.add(block, mult);
        }
        Ok(d)
    }
}

/// Block types that fit into the budget `(p, q)`.
pub fn block_types_within(p: usize, q: usize) -> Vec<BlockType> {
    let mut v = Vec::new();
    if p >= 1 {
        v.push(BlockType::K(1, 0));
    }
    if q >= 1 {
        v.push(BlockType::K(0, 1));
    }
    for s in 1..=p {
        for t in 1..=q {
            v.push(BlockType::K(s, t));
        }
    }
    for m in 1..=p.min(q) {
        v.push(BlockType::L(m));
    }
    v.sort();
    v
}

/// All D-invariants with budget exactly `(p, q)`, in canonical order.
pub fn enumerate_dinvariants(p: usize, q: usize) -> Vec<DInvariant> {
    let types = block_types_within(p, q);
    let mut out = Vec::new();
    fn rec(types: &[BlockType], i: usize, rp: usize, rq: usize, cur: &mut Vec<(BlockType, usize)>, out: &mut Vec<DInvariant>) {
        if rp == 0 && rq == 0 {
            out.push(DInvariant::from_blocks(cur));
            return;
        }
        if i == types.len() {
            return;
        }
        let (s, t) = types[i].budget();
        let mut mult = 0;
        loop {
            if mult * s > rp || mult * t > rq {
                break;
            }
            if mult > 0 {
                cur.push((types[i], mult));
            }
            rec(types, i + 1, rp - mult * s, rq - mult * t, cur, out);
            if mult > 0 {
                cur.pop();
            }
            mult += 1;
        }
    }
    rec(&types, 0, p, q, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `(p−ℓ)·(1,0) + (q−ℓ)·(0,1) + ℓ·L1`.
pub fn cartan_dinvariant(p: usize, q: usize, l: usize) -> Result<DInvariant> {
    if l > p.min(q) {
        return Err(Error::RangeError(format!("ℓ = {l} exceeds min(p,q) = {}", p.min(q))));
    }
    Ok(DInvariant::from_blocks(&[(BlockType::K(1, 0), p - l), (BlockType::K(0, 1), q - l), (BlockType::L(1), l)]))
}

/// Exact count, infinitely many, or not known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassCount {
    Exact(u64),
    Infinite,
    Unknown,
}

impl ClassCount {
    pub fn exact(self) -> Option<u64> {
        match self {
            ClassCount::Exact(n) => Some(n),
            _ => None,
        }
    }

    /// Sum of nonzero class counts; `Infinite` absorbs `Unknown`.
    pub fn add(self, o: ClassCount) -> ClassCount {
        match (self, o) {
            (ClassCount::Exact(a), ClassCount::Exact(b)) => ClassCount::Exact(a + b),
            (ClassCount::Infinite, _) | (_, ClassCount::Infinite) => ClassCount::Infinite,
            _ => ClassCount::Unknown,
        }
    }

    /// Product of positive class counts; `Infinite` absorbs `Unknown`.
    pub fn mul(self, o: ClassCount) -> ClassCount {
        match (self, o) {
            (ClassCount::Exact(a), ClassCount::Exact(b)) => ClassCount::Exact(a * b),
            (ClassCount::Infinite, _) | (_, ClassCount::Infinite) => ClassCount::Infinite,
            _ => ClassCount::Unknown,
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            ClassCount::Exact(n) => json!({"kind": "exact", "value": n}),
            ClassCount::Infinite => json!({"kind": "infinite"}),
            ClassCount::Unknown => json!({"kind": "unknown"}),
        }
    }
}

impl fmt::Display for ClassCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassCount::Exact(n) => write!(f, "{n}"),
            ClassCount::Infinite => write!(f, "infinite"),
            ClassCount::Unknown => write!(f, "unknown"),
        }
    }
}

/// Number of equivalence classes of MANSAs for one block.
pub fn mansa_count(b: BlockType) -> ClassCount {
    match b {
        BlockType::K(s, t) => {
            let (lo, hi) = (s.min(t), s.max(t));
            match lo {
                0 | 1 => ClassCount::Exact(1),
                2 => ClassCount::Exact(hi.min(3) as u64),
                _ => ClassCount::Unknown,
            }
        }
        BlockType::L(m) => match m {
            1..=3 => ClassCount::Exact(1),
            4 => ClassCount::Exact(2),
            5 => ClassCount::Exact(3),
            6 | 7 => ClassCount::Unknown,
            _ => ClassCount::Infinite,
        },
    }
}

fn multiset_coefficient(c: u64, mu: u64) -> u64 {
    // C(c+μ−1, μ)
    let mut r: u64 = 1;
    for i in 0..mu {
        r = r * (c + i) / (i + 1);
    }
    r
}

/// Classes of MASAs with the given D-invariant: product over blocks of `C(c+μ−1, μ)`.
pub fn masa_count_for(d: &DInvariant) -> ClassCount {
    d.blocks().fold(ClassCount::Exact(1), |acc, (b, mu)| {
        let f = match mansa_count(b) {
            ClassCount::Exact(c) => ClassCount::Exact(multiset_coefficient(c, mu as u64)),
            other => other,
        };
        acc.mul(f)
    })
}

/// Affine classes of closed tube realizations, summed over `{D, D^opp}` orbits when `p = q`.
pub fn tube_class_count(p: usize, q: usize) -> Result<ClassCount> {
    if p == 0 || q == 0 {
        return Err(Error::RangeError("p and q must be positive".into()));
    }
    if p >= 4 && q >= 4 {
        return Ok(ClassCount::Infinite);
    }
    let all = enumerate_dinvariants(p, q);
    let mut seen = BTreeSet::new();
    let mut total = ClassCount::Exact(0);
    for d in all {
        if p == q {
            let opp = d.opposite();
            if seen.contains(&opp) {
                assert_eq!(masa_count_for(&opp), masa_count_for(&d), "opposite invariants must have equal counts");
                continue;
            }
            seen.insert(d.clone());
        }
        total = total.add(masa_count_for(&d));
    }
    Ok(total)
}

/// Sum of [`masa_count_for`] over all of `𝒟_{p,q}`, without identifying opposites.
pub fn masa_class_total(p: usize, q: usize) -> ClassCount {
    enumerate_dinvariants(p, q).iter().fold(ClassCount::Exact(0), |acc, d| acc.add(masa_count_for(d)))
}

/// Number of `{D, D^opp}` orbits in `𝒟_{p,p}`.
pub fn opposite_orbit_count(p: usize, q: usize) -> usize {
    let all = enumerate_dinvariants(p, q);
    if p != q {
        return all.len();
    }
    let fixed = all.iter().filter(|d| d.opposite() == **d).count();
    fixed + (all.len() - fixed) / 2
}

/// `5p + k(p−k) − δ_{p,2}` with `k = ⌈p/2⌉`.
pub fn c_p2_closed_form(p: usize) -> u64 {
    let k = p.div_ceil(2);
    (5 * p + k * (p - k) - usize::from(p == 2)) as u64
}

/// Position of a D-invariant of `𝒟_{n,2}` in the Isaev–Mishchenko list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImType {
    /// Candidate type numbers; several when the D-shape is shared.
    pub types: Vec<u8>,
    /// Nil-index of the MANSA for each candidate type, when that distinguishes them.
    pub nil_indices: Vec<usize>,
    pub params: Vec<(&'static str, usize)>,
}

impl fmt::Display for ImType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts: Vec<String> = self.types.iter().map(u8::to_string).collect();
        write!(f, "{} {}", if ts.len() == 1 { "type" } else { "types" }, ts.join("/"))?;
        if !self.nil_indices.is_empty() {
            let ns: Vec<String> = self.nil_indices.iter().map(usize::to_string).collect();
            write!(f, " (nil-index {})", ns.join("/"))?;
        }
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

impl ImType {
    pub fn to_json(&self) -> Value {
        json!({
            "types": self.types,
            "nil_indices": self.nil_indices,
            "params": self.params.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
            "display": self.to_string(),
        })
    }
}

pub fn im_type(d: &DInvariant) -> Result<ImType> {
    let (n, q) = d.pq();
    if q != 2 {
        return Err(Error::NotQ2);
    }
    let s = d.multiplicity(BlockType::K(1, 0));
    let rest: Vec<(BlockType, usize)> = d.blocks().filter(|(b, _)| *b != BlockType::K(1, 0)).collect();
    let one = |t: u8, params: Vec<(&'static str, usize)>| ImType { types: vec![t], nil_indices: vec![], params };
    let ok = match rest.as_slice() {
        [(BlockType::K(a, 2), 1)] => {
            let options = (*a).min(3);
            let all = [(1u8, 2usize), (4, 3), (5, 4)];
            ImType {
                types: all[..options].iter().map(|x| x.0).collect(),
                nil_indices: all[..options].iter().map(|x| x.1).collect(),
                params: vec![("s", s)],
            }
        }
        [(BlockType::L(2), 1)] => one(6, vec![]),
        [(BlockType::K(0, 1), 2)] => ImType { types: vec![8], nil_indices: vec![], params: vec![("l", 0)] },
        [(BlockType::L(1), 2)] => ImType { types: vec![9], nil_indices: vec![], params: vec![("l", 2)] },
        [(BlockType::K(0, 1), 1), (BlockType::L(1), 1)] => ImType { types: vec![10], nil_indices: vec![], params: vec![("l", 1)] },
        [(BlockType::K(a, 1), 1), (BlockType::L(1), 1)] if *a >= 1 => one(3, vec![("s", s)]),
        [(BlockType::K(0, 1), 1), (BlockType::K(a, 1), 1)] if *a >= 1 => one(2, vec![("s", s)]),
        [(BlockType::K(a, 1), 2)] if *a >= 1 => one(7, vec![("s", s), ("t", *a)]),
        [(BlockType::K(a, 1), 1), (BlockType::K(b, 1), 1)] if *a >= 1 && *b >= 1 => one(7, vec![("s", s), ("t", *a.min(b))]),
        _ => return Err(Error::TypeMismatch(format!("{d} does not match any type for n = {n}"))),
    };
    Ok(ok)
}

/// `t̃ = n − 2 + s − t`, the type-7 parameter giving an affinely equivalent realization.
pub fn type7_repetition(s: usize, t: usize, n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::RangeError("type 7 needs n ≥ 2".into()));
    }
    (n - 2 + s).checked_sub(t).ok_or_else(|| Error::RangeError(format!("t = {t} too large for n = {n}, s = {s}")))
}
