//! Combinatorial lines over a finite alphabet `P = {0..k-1}`, the three-level
//! category they generate, Hales–Jewett witness search, and the index
//! categories built from them.

mod index;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fincat::Category;

pub use index::{build_line_index, build_transfer_index, line_diagram, transfer_diagram, LineIndex, TransferIndex};
pub use search::{hj_witness_search, monochromatic_line, HjOutcome, HjSearch};

/// A word in `P^N`.
pub type Tuple = Vec<usize>;

/// A nonempty set of active coordinates moving together, fixed letters elsewhere.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    /// `None` marks an active coordinate.
    pattern: Vec<Option<usize>>,
}

impl Line {
    pub fn new(pattern: Vec<Option<usize>>) -> Result<Self> {
        if !pattern.iter().any(Option::is_none) {
            return Err(Error::Invalid("a line needs at least one active coordinate".into()));
        }
        Ok(Line { pattern })
    }

    pub fn n(&self) -> usize {
        self.pattern.len()
    }

    pub fn pattern(&self) -> &[Option<usize>] {
        &self.pattern
    }

    pub fn active(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.pattern[i].is_none()).collect()
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.pattern[i].is_none()
    }

    pub fn fixed(&self, i: usize) -> Option<usize> {
        self.pattern[i]
    }

    /// Points `ℓ ∘ p` for `p` in `0..alphabet`.
    pub fn points(&self, alphabet: usize) -> Vec<Tuple> {
        (0..alphabet).map(|p| hj_compose(self, p)).collect()
    }

    pub fn check_alphabet(&self, alphabet: usize) -> Result<()> {
        if self.pattern.iter().flatten().any(|&c| c >= alphabet) {
            return Err(Error::Invalid(format!(
                "line {self:?} uses a letter outside 0..{alphabet}"
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.pattern.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match c {
                None => f.write_str("*")?,
                Some(c) => write!(f, "{c}")?,
            }
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    n: usize,
    active: Vec<usize>,
    #[serde(default)]
    fixed: BTreeMap<usize, usize>,
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LineJson {
            n: self.n(),
            active: self.active(),
            fixed: (0..self.n()).filter_map(|i| self.pattern[i].map(|c| (i, c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LineJson::deserialize(d)?;
        let mut pattern = vec![None; raw.n];
        let mut seen = vec![false; raw.n];
        for &i in &raw.active {
            if i >= raw.n || std::mem::replace(&mut seen[i], true) {
                return Err(D::Error::custom(format!("bad active coordinate {i}")));
            }
        }
        for (&i, &c) in &raw.fixed {
            if i >= raw.n || std::mem::replace(&mut seen[i], true) {
                return Err(D::Error::custom(format!("bad fixed coordinate {i}")));
            }
            pattern[i] = Some(c);
        }
        if seen.iter().any(|&s| !s) {
            return Err(D::Error::custom("every coordinate must be active or fixed"));
        }
        Line::new(pattern).map_err(D::Error::custom)
    }
}

/// The constant letter of `e` on the active coordinates, if `e` lies on `l`.
pub fn membership(e: &[usize], l: &Line) -> Option<usize> {
    if e.len() != l.n() {
        return None;
    }
    let mut letter = None;
    for (&x, c) in e.iter().zip(&l.pattern) {
        match c {
            Some(c) if *c != x => return None,
            Some(_) => {}
            None => match letter {
                None => letter = Some(x),
                Some(p) if p != x => return None,
                Some(_) => {}
            },
        }
    }
    letter
}

/// `ℓ ∘ p`: letter `p` on the active coordinates.
pub fn hj_compose(l: &Line, p: usize) -> Tuple {
    l.pattern.iter().map(|c| c.unwrap_or(p)).collect()
}

/// The line with active set `{0}` and the remaining letters of `e` fixed.
pub fn canonical_line_through(e: &[usize]) -> Result<Line> {
    if e.is_empty() {
        return Err(Error::Invalid("no line passes through the empty word".into()));
    }
    let mut pattern: Vec<Option<usize>> = e.iter().map(|&x| Some(x)).collect();
    pattern[0] = None;
    Line::new(pattern)
}

pub fn line_count(alphabet: usize, n: usize) -> u128 {
    // Σ_k C(n,k) |P|^(n-k) = (|P|+1)^n - |P|^n
    let a = (alphabet as u128 + 1).checked_pow(n as u32);
    let b = (alphabet as u128).checked_pow(n as u32);
    match (a, b) {
        (Some(a), Some(b)) => a - b,
        _ => u128::MAX,
    }
}

pub fn tuple_count(alphabet: usize, n: usize) -> u128 {
    (alphabet as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// `P^N` in lexicographic order.
pub fn enumerate_tuples(alphabet: usize, n: usize, limits: &Limits) -> Result<Vec<Tuple>> {
    let count = limits.check_hom("tuples", tuple_count(alphabet, n))?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let mut t = vec![0usize; n];
    loop {
        out.push(t.clone());
        if !advance(&mut t, alphabet) {
            return Ok(out);
        }
    }
}

/// Position of a tuple in [`enumerate_tuples`] order.
pub fn tuple_rank(alphabet: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * alphabet + x)
}

fn advance(t: &mut [usize], base: usize) -> bool {
    for d in t.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// All lines in `P^N`: larger active sets first, then active sets
/// lexicographically, then fixed letters lexicographically.
pub fn enumerate_lines(alphabet: usize, n: usize, limits: &Limits) -> Result<Vec<Line>> {
    let count = limits.check_hom("lines", line_count(alphabet, n))?;
    let mut out = Vec::with_capacity(count);
    for size in (1..=n).rev() {
        for active in subsets_of_size(n, size) {
            let free = n - size;
            if free > 0 && alphabet == 0 {
                continue;
            }
            let mut letters = vec![0usize; free];
            loop {
                let mut pattern = vec![None; n];
                let mut next = letters.iter();
                for (i, slot) in pattern.iter_mut().enumerate() {
                    if !active.contains(&i) {
                        *slot = Some(*next.next().unwrap());
                    }
                }
                out.push(Line { pattern });
                if !advance(&mut letters, alphabet) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Arrows of the Hales–Jewett category over an alphabet of a given size.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HjArrow {
    /// `0 -> N`; the empty word is the identity of `0`.
    Word(Tuple),
    /// `1 -> N`; the line in `P^1` is the identity of `1`.
    Line(Line),
    /// Identity of `N >= 2`.
    Id(usize),
}

/// Objects are naturals; `Hom(0, N) = P^N`, `Hom(1, N)` = lines in `P^N`,
/// everything else is an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HjCategory {
    pub alphabet: usize,
    pub limits: Limits,
}

impl HjCategory {
    pub fn new(alphabet: usize, limits: Limits) -> Self {
        HjCategory { alphabet, limits }
    }
}

impl Category for HjCategory {
    type Object = usize;
    type Morphism = HjArrow;

    fn dom(&self, f: &HjArrow) -> usize {
        match f {
            HjArrow::Word(_) => 0,
            HjArrow::Line(_) => 1,
            HjArrow::Id(n) => *n,
        }
    }

    fn cod(&self, f: &HjArrow) -> usize {
        match f {
            HjArrow::Word(w) => w.len(),
            HjArrow::Line(l) => l.n(),
            HjArrow::Id(n) => *n,
        }
    }

    fn identity(&self, a: &usize) -> HjArrow {
        match a {
            0 => HjArrow::Word(Vec::new()),
            1 => HjArrow::Line(Line { pattern: vec![None] }),
            n => HjArrow::Id(*n),
        }
    }

    fn compose(&self, outer: &HjArrow, inner: &HjArrow) -> Result<HjArrow> {
        if self.cod(inner) != self.dom(outer) {
            return Err(Error::TypeMismatch(format!(
                "HJ: cannot compose {outer:?} after {inner:?}"
            )));
        }
        if *inner == self.identity(&self.dom(inner)) {
            return Ok(outer.clone());
        }
        if *outer == self.identity(&self.dom(outer)) {
            return Ok(inner.clone());
        }
        match (outer, inner) {
            (HjArrow::Line(l), HjArrow::Word(p)) if p.len() == 1 => Ok(HjArrow::Word(hj_compose(l, p[0]))),
            _ => Err(Error::InternalInconsistency(format!(
                "HJ: unexpected composable pair {outer:?}, {inner:?}"
            ))),
        }
    }

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<HjArrow>> {
        if a == b {
            return Ok(vec![self.identity(a)]);
        }
        match (a, b) {
            (0, n) => Ok(enumerate_tuples(self.alphabet, *n, &self.limits)?
                .into_iter()
                .map(HjArrow::Word)
                .collect()),
            (1, n) => Ok(enumerate_lines(self.alphabet, *n, &self.limits)?
                .into_iter()
                .map(HjArrow::Line)
                .collect()),
            _ => Ok(Vec::new()),
        }
    }
}
