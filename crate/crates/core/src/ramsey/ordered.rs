use serde::{Deserialize, Serialize};

use super::{find_witness, is_ramsey_witness, Coloring, Verdict};
use crate::error::{Error, Result};
use crate::fincat::{Category, FinCat, FinKind, FinMorphism};
use crate::structlang::{is_homomorphism, Structure};
use crate::verdict::Mode;

/// The Ramsey property of the base category `D`, as the partite construction
/// consumes it.
pub trait DSolver {
    fn category(&self) -> FinCat;

    /// Some `M` with `M -> (L)^K_r`, and the verdict that certifies it.
    fn witness(&self, k: usize, l: usize, r: usize) -> Result<(usize, Verdict<FinMorphism>)>;

    /// An `i ∈ Hom(L, M)` with `i ∘ Hom(K, L)` monochromatic under `chi`.
    fn resolve(&self, k: usize, l: usize, m: usize, chi: &Coloring<FinMorphism>) -> Result<FinMorphism> {
        find_witness(&self.category(), &k, &l, &m, chi)?
            .ok_or_else(|| Error::SolverFailed(format!("{m} -> ({l})^{k} fails for this coloring")))
    }
}

/// Incremental exhaustive search over order sizes, for `(Fin,≤)` and
/// `(Fin,≤*)^op`; a fixed size is verified rather than searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedSolver {
    pub d: FinCat,
    pub max_size: usize,
    pub fixed: Option<usize>,
    pub budget: usize,
}

impl OrderedSolver {
    pub fn new(d: FinCat, max_size: usize, fixed: Option<usize>, budget: usize) -> Result<Self> {
        if !matches!(d.kind, FinKind::FinLe | FinKind::FinLeStarOp) {
            return Err(Error::Unsupported(format!("no built-in solver for {}", d.kind.name())));
        }
        Ok(OrderedSolver {
            d,
            max_size,
            fixed,
            budget,
        })
    }
}

impl DSolver for OrderedSolver {
    fn category(&self) -> FinCat {
        self.d
    }

    fn witness(&self, k: usize, l: usize, r: usize) -> Result<(usize, Verdict<FinMorphism>)> {
        let sizes: Vec<usize> = match self.fixed {
            Some(m) => vec![m],
            None => (l..=self.max_size.max(l)).collect(),
        };
        for m in sizes {
            let v = is_ramsey_witness(&self.d, &k, &l, &m, r, Mode::Exhaustive, self.budget)?;
            if v.holds() {
                return Ok((m, v));
            }
        }
        Err(Error::SolverFailed(match self.fixed {
            Some(m) => format!("{m} -> ({l})^{k}_{r} is refuted in {}", self.d.kind.name()),
            None => format!(
                "no size up to {} satisfies M -> ({l})^{k}_{r} in {}",
                self.max_size,
                self.d.kind.name()
            ),
        }))
    }
}

/// An arrow of a category of structures over `D`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LdArrow {
    pub dom: usize,
    pub cod: usize,
    pub map: FinMorphism,
}

/// Structures whose carriers are objects of `D`, with arrows the `D`-arrows
/// that are homomorphisms. Objects are positions in `objects`.
#[derive(Debug, Clone)]
pub struct LdCategory {
    pub d: FinCat,
    pub objects: Vec<Structure>,
}

impl LdCategory {
    pub fn new(d: FinCat, objects: Vec<Structure>) -> Result<Self> {
        for s in &objects {
            if s.base().kind != d.kind.ambient() {
                return Err(Error::TypeMismatch(format!(
                    "a {}-structure cannot sit over {}",
                    s.base().kind.name(),
                    d.kind.name()
                )));
            }
        }
        Ok(LdCategory { d, objects })
    }
}

impl Category for LdCategory {
    type Object = usize;
    type Morphism = LdArrow;

    fn dom(&self, f: &LdArrow) -> usize {
        f.dom
    }

    fn cod(&self, f: &LdArrow) -> usize {
        f.cod
    }

    fn identity(&self, a: &usize) -> LdArrow {
        LdArrow {
            dom: *a,
            cod: *a,
            map: self.d.identity(&self.objects[*a].carrier),
        }
    }

    fn compose(&self, outer: &LdArrow, inner: &LdArrow) -> Result<LdArrow> {
        if inner.cod != outer.dom {
            return Err(Error::TypeMismatch(format!("cannot compose {outer:?} after {inner:?}")));
        }
        Ok(LdArrow {
            dom: inner.dom,
            cod: outer.cod,
            map: self.d.compose(&outer.map, &inner.map)?,
        })
    }

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<LdArrow>> {
        let (sa, sb) = (&self.objects[*a], &self.objects[*b]);
        let mut out = Vec::new();
        for map in self.d.hom(&sa.carrier, &sb.carrier)? {
            if is_homomorphism(&map, sa, sb)? {
                out.push(LdArrow { dom: *a, cod: *b, map });
            }
        }
        Ok(out)
    }
}
