use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ArrowRef, Carrier, Category, FinCat, FinKind, FinMorphism, IndexCategory};
use crate::error::{Error, Result};

/// A functor from an explicit finite index category into a table-backed category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub index: IndexCategory,
    pub category: FinCat,
    /// Carrier size per index object.
    pub objects: Vec<usize>,
    /// Image of each listed (non-identity) index arrow.
    pub arrows: Vec<FinMorphism>,
}

impl Diagram {
    pub fn new(index: IndexCategory, category: FinCat, objects: Vec<usize>, arrows: Vec<FinMorphism>) -> Result<Self> {
        let d = Diagram {
            index,
            category,
            objects,
            arrows,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn image(&self, a: ArrowRef) -> FinMorphism {
        match a {
            ArrowRef::Identity(o) => self.category.identity(&self.objects[o]),
            ArrowRef::Arrow(i) => self.arrows[i].clone(),
        }
    }

    /// Functoriality: typed arrow images, members of the category, composites respected.
    pub fn validate(&self) -> Result<()> {
        self.index.validate()?;
        if self.objects.len() != self.index.object_count() || self.arrows.len() != self.index.arrow_count() {
            return Err(Error::Invalid("diagram does not cover its index category".into()));
        }
        let cat = &self.category;
        for (arrow, img) in self.index.arrows().iter().zip(&self.arrows) {
            if !cat.contains(img) || cat.dom(img) != self.objects[arrow.src] || cat.cod(img) != self.objects[arrow.dst]
            {
                return Err(Error::TypeMismatch(format!(
                    "image {img:?} of {:?} is not an arrow {} -> {} of {}",
                    arrow.name,
                    self.objects[arrow.src],
                    self.objects[arrow.dst],
                    cat.kind.name()
                )));
            }
        }
        for (a, b, c) in self.index.composites() {
            let lhs = cat.compose(&self.arrows[b], &self.arrows[a])?;
            if lhs != self.image(c) {
                return Err(Error::Invalid(format!(
                    "diagram does not respect the composite of {:?} then {:?}",
                    self.index.arrows()[a].name,
                    self.index.arrows()[b].name
                )));
            }
        }
        Ok(())
    }

    /// Index arrows with their images, identities excluded.
    pub fn arrow_images(&self) -> impl Iterator<Item = (usize, usize, &FinMorphism)> + '_ {
        self.index
            .arrows()
            .iter()
            .zip(&self.arrows)
            .map(|(a, f)| (a.src, a.dst, f))
    }
}

/// An apex with one leg per index object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocone {
    pub apex: usize,
    pub legs: Vec<FinMorphism>,
}

impl Cocone {
    /// Legs typed correctly and `leg(T) ∘ F(f) = leg(S)` for every index arrow `f: S -> T`.
    pub fn validate_over(&self, d: &Diagram) -> Result<()> {
        let cat = &d.category;
        if self.legs.len() != d.objects.len() {
            return Err(Error::NotACocone(format!(
                "{} legs for {} index objects",
                self.legs.len(),
                d.objects.len()
            )));
        }
        for (s, leg) in self.legs.iter().enumerate() {
            if !cat.contains(leg) || cat.dom(leg) != d.objects[s] || cat.cod(leg) != self.apex {
                return Err(Error::NotACocone(format!(
                    "leg {s} ({leg:?}) is not an arrow {} -> {}",
                    d.objects[s], self.apex
                )));
            }
        }
        for (src, dst, f) in d.arrow_images() {
            if cat.compose(&self.legs[dst], f)? != self.legs[src] {
                return Err(Error::NotACocone(format!(
                    "square over {:?} -> {:?} does not commute",
                    d.index.objects()[src],
                    d.index.objects()[dst]
                )));
            }
        }
        Ok(())
    }

    pub fn is_cocone_over(&self, d: &Diagram) -> bool {
        self.validate_over(d).is_ok()
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    category: FinKind,
    index: IndexCategory,
    objects: Vec<Carrier>,
    arrows: Vec<FinMorphism>,
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson {
            category: self.category.kind,
            index: self.index.clone(),
            objects: self
                .index
                .objects()
                .iter()
                .zip(&self.objects)
                .map(|(id, &size)| Carrier::new(id.clone(), size))
                .collect(),
            arrows: self.arrows.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DiagramJson::deserialize(d)?;
        Diagram::new(
            raw.index,
            FinCat::new(raw.category),
            raw.objects.iter().map(|c| c.size).collect(),
            raw.arrows,
        )
        .map_err(D::Error::custom)
    }
}
