//! Finite-category kernel.
//!
//! Every concrete category here is backed by total mapping tables between
//! canonical carriers `{0..n-1}`. The opposite categories store an arrow
//! `A -> B` as the table of the reversed function `B -> A`; all composition
//! and hom enumeration honours that convention.

mod colimit;
mod diagram;
pub mod dot;
mod hom;
mod index;
pub mod union_find;

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};

pub use colimit::{colimit, colimit_fin, colimit_finop, limit_fin, universal_morphism, verify_colimit, Cone};
pub use diagram::{Cocone, Diagram};
pub use hom::{rigid_surjection_count, stirling2};
pub use index::{ArrowRef, IndexArrow, IndexCategory};

/// The contract shared by every instantiated category.
pub trait Category {
    type Object: Clone + Eq + Debug;
    type Morphism: Clone + Eq + Ord + Hash + Debug;

    fn dom(&self, f: &Self::Morphism) -> Self::Object;
    fn cod(&self, f: &Self::Morphism) -> Self::Object;
    fn identity(&self, a: &Self::Object) -> Self::Morphism;
    /// `outer ∘ inner`; fails unless `cod(inner) == dom(outer)`.
    fn compose(&self, outer: &Self::Morphism, inner: &Self::Morphism) -> Result<Self::Morphism>;
    /// Complete, duplicate-free `Hom(a, b)` in canonical order.
    fn hom(&self, a: &Self::Object, b: &Self::Object) -> Result<Vec<Self::Morphism>>;
}

/// A labeled finite carrier. Elements are always `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Carrier {
    pub id: String,
    pub size: usize,
}

impl Carrier {
    pub fn new(id: impl Into<String>, size: usize) -> Self {
        Carrier { id: id.into(), size }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// A total function table `{0..source} -> {0..target}`.
///
/// The derived ordering is lexicographic on `(source, target, table)`, so
/// within one hom-set it is the lexicographic order on tables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinMorphism {
    pub source: usize,
    pub target: usize,
    pub table: Vec<usize>,
}

impl FinMorphism {
    pub fn new(source: usize, target: usize, table: Vec<usize>) -> Result<Self> {
        let f = FinMorphism { source, target, table };
        f.check_table()?;
        Ok(f)
    }

    pub fn identity_table(n: usize) -> Self {
        FinMorphism {
            source: n,
            target: n,
            table: (0..n).collect(),
        }
    }

    pub fn constant(source: usize, target: usize, value: usize) -> Self {
        FinMorphism {
            source,
            target,
            table: vec![value; source],
        }
    }

    pub fn check_table(&self) -> Result<()> {
        if self.table.len() != self.source {
            return Err(Error::TypeMismatch(format!(
                "table has {} entries for a source of size {}",
                self.table.len(),
                self.source
            )));
        }
        if let Some(&bad) = self.table.iter().find(|&&v| v >= self.target) {
            return Err(Error::TypeMismatch(format!(
                "table value {bad} outside target of size {}",
                self.target
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.table.windows(2).all(|w| w[0] < w[1])
    }

    /// Surjective, and the image of every initial segment is an initial segment.
    pub fn is_rigid_surjection(&self) -> bool {
        let mut max_seen: Option<usize> = None;
        for &v in &self.table {
            let allowed = max_seen.map_or(0, |m| m + 1);
            if v > allowed {
                return false;
            }
            max_seen = Some(max_seen.map_or(v, |m| m.max(v)));
        }
        max_seen.map_or(0, |m| m + 1) == self.target
    }

    /// Plain function composition `self ∘ inner` of the stored tables.
    pub fn after(&self, inner: &FinMorphism) -> Result<FinMorphism> {
        if inner.target != self.source {
            return Err(Error::TypeMismatch(format!(
                "cannot compose table {}->{} after {}->{}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        Ok(FinMorphism {
            source: inner.source,
            target: self.target,
            table: inner.table.iter().map(|&x| self.table[x]).collect(),
        })
    }
}

impl Debug for FinMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}{:?}", self.source, self.target, self.table)
    }
}

impl Display for FinMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Debug::fmt(self, f)
    }
}

/// Which way an arrow's stored table points relative to the arrow itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// The four table-backed categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FinKind {
    Fin,
    FinOp,
    #[serde(rename = "FinLE")]
    FinLe,
    #[serde(rename = "FinLEStarOp")]
    FinLeStarOp,
}

impl FinKind {
    pub fn variance(self) -> Variance {
        match self {
            FinKind::Fin | FinKind::FinLe => Variance::Covariant,
            FinKind::FinOp | FinKind::FinLeStarOp => Variance::Contravariant,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FinKind::Fin => "Fin",
            FinKind::FinOp => "FinOp",
            FinKind::FinLe => "FinLE",
            FinKind::FinLeStarOp => "FinLEStarOp",
        }
    }

    /// The ambient category whose tables these are, if any: `(Fin,≤)` sits in
    /// `Fin` and `(Fin,≤*)^op` sits in `Fin^op`.
    pub fn ambient(self) -> FinKind {
        match self {
            FinKind::Fin | FinKind::FinLe => FinKind::Fin,
            FinKind::FinOp | FinKind::FinLeStarOp => FinKind::FinOp,
        }
    }
}

impl std::str::FromStr for FinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Fin" => Ok(FinKind::Fin),
            "FinOp" => Ok(FinKind::FinOp),
            "FinLE" => Ok(FinKind::FinLe),
            "FinLEStarOp" => Ok(FinKind::FinLeStarOp),
            other => Err(Error::Invalid(format!("unknown category {other:?}"))),
        }
    }
}

/// Tag naming any of the five instantiated categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CategoryTag {
    Fin,
    FinOp,
    #[serde(rename = "FinLE")]
    FinLe,
    #[serde(rename = "FinLEStarOp")]
    FinLeStarOp,
    #[serde(rename = "HJ")]
    Hj {
        alphabet: Vec<String>,
    },
}

impl CategoryTag {
    pub fn fin_kind(&self) -> Option<FinKind> {
        match self {
            CategoryTag::Fin => Some(FinKind::Fin),
            CategoryTag::FinOp => Some(FinKind::FinOp),
            CategoryTag::FinLe => Some(FinKind::FinLe),
            CategoryTag::FinLeStarOp => Some(FinKind::FinLeStarOp),
            CategoryTag::Hj { .. } => None,
        }
    }
}

impl From<FinKind> for CategoryTag {
    fn from(k: FinKind) -> Self {
        match k {
            FinKind::Fin => CategoryTag::Fin,
            FinKind::FinOp => CategoryTag::FinOp,
            FinKind::FinLe => CategoryTag::FinLe,
            FinKind::FinLeStarOp => CategoryTag::FinLeStarOp,
        }
    }
}

/// A table-backed category together with the caps its enumerations obey.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinCat {
    pub kind: FinKind,
    pub limits: Limits,
}

impl FinCat {
    pub fn new(kind: FinKind) -> Self {
        FinCat {
            kind,
            limits: Limits::default(),
        }
    }

    pub fn with_limits(kind: FinKind, limits: Limits) -> Self {
        FinCat { kind, limits }
    }

    pub fn variance(&self) -> Variance {
        self.kind.variance()
    }

    /// `(table source, table target)` of the arrows in `Hom(a, b)`.
    pub fn stored_shape(&self, a: usize, b: usize) -> (usize, usize) {
        match self.variance() {
            Variance::Covariant => (a, b),
            Variance::Contravariant => (b, a),
        }
    }

    /// Builds the arrow `a -> b` from its stored table.
    pub fn arrow(&self, a: usize, b: usize, table: Vec<usize>) -> Result<FinMorphism> {
        let (s, t) = self.stored_shape(a, b);
        let f = FinMorphism::new(s, t, table)?;
        if !self.contains(&f) {
            return Err(Error::TypeMismatch(format!(
                "{f:?} is not an arrow of {}",
                self.kind.name()
            )));
        }
        Ok(f)
    }

    /// Whether a well-formed table is an arrow of this category.
    pub fn contains(&self, f: &FinMorphism) -> bool {
        if f.check_table().is_err() {
            return false;
        }
        match self.kind {
            FinKind::Fin | FinKind::FinOp => true,
            FinKind::FinLe => f.is_strictly_increasing(),
            FinKind::FinLeStarOp => f.is_rigid_surjection(),
        }
    }

    pub fn left_inverse(&self, f: &FinMorphism) -> Result<Option<FinMorphism>> {
        hom::left_inverse(self, f)
    }

    pub fn hom_count(&self, a: usize, b: usize) -> u128 {
        hom::hom_count(self, a, b)
    }

    /// Position of `f` in the canonical enumeration of its hom-set.
    pub fn rank(&self, f: &FinMorphism) -> Result<usize> {
        hom::rank(self, f)
    }

    /// Inverse of [`FinCat::rank`].
    pub fn unrank(&self, a: usize, b: usize, index: usize) -> Result<FinMorphism> {
        hom::unrank(self, a, b, index)
    }
}

impl Category for FinCat {
    type Object = usize;
    type Morphism = FinMorphism;

    fn dom(&self, f: &FinMorphism) -> usize {
        match self.variance() {
            Variance::Covariant => f.source,
            Variance::Contravariant => f.target,
        }
    }

    fn cod(&self, f: &FinMorphism) -> usize {
        match self.variance() {
            Variance::Covariant => f.target,
            Variance::Contravariant => f.source,
        }
    }

    fn identity(&self, a: &usize) -> FinMorphism {
        FinMorphism::identity_table(*a)
    }

    fn compose(&self, outer: &FinMorphism, inner: &FinMorphism) -> Result<FinMorphism> {
        if self.cod(inner) != self.dom(outer) {
            return Err(Error::TypeMismatch(format!(
                "{}: cod {:?} = {} but dom {:?} = {}",
                self.kind.name(),
                inner,
                self.cod(inner),
                outer,
                self.dom(outer)
            )));
        }
        match self.variance() {
            Variance::Covariant => outer.after(inner),
            Variance::Contravariant => inner.after(outer),
        }
    }

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<FinMorphism>> {
        hom::hom_enumerate(self, *a, *b)
    }
}
