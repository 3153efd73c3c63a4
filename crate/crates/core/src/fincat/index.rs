use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-identity arrow of an index category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexArrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// An arrow of an index category: an identity or a listed arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowRef {
    Identity(usize),
    Arrow(usize),
}

/// An explicitly presented finite category.
///
/// Identities are implicit. `composites` maps `(first, second)` to
/// `second ∘ first` for every composable pair of listed arrows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexCategory {
    objects: Vec<String>,
    arrows: Vec<IndexArrow>,
    composites: HashMap<(usize, usize), ArrowRef>,
    outgoing: Vec<Vec<usize>>,
}

impl IndexCategory {
    pub fn new(objects: Vec<String>) -> Self {
        let outgoing = vec![Vec::new(); objects.len()];
        IndexCategory {
            objects,
            arrows: Vec::new(),
            composites: HashMap::new(),
            outgoing,
        }
    }

    /// Objects only, identities only.
    pub fn discrete(objects: Vec<String>) -> Self {
        Self::new(objects)
    }

    pub fn add_arrow(&mut self, name: impl Into<String>, src: usize, dst: usize) -> usize {
        let id = self.arrows.len();
        self.arrows.push(IndexArrow {
            name: name.into(),
            src,
            dst,
        });
        self.outgoing[src].push(id);
        id
    }

    /// Records `second ∘ first = result`.
    pub fn add_composite(&mut self, first: usize, second: usize, result: ArrowRef) {
        self.composites.insert((first, second), result);
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrows(&self) -> &[IndexArrow] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn composites(&self) -> impl Iterator<Item = (usize, usize, ArrowRef)> + '_ {
        let mut v: Vec<_> = self.composites.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v.into_iter()
    }

    pub fn src(&self, a: ArrowRef) -> usize {
        match a {
            ArrowRef::Identity(o) => o,
            ArrowRef::Arrow(i) => self.arrows[i].src,
        }
    }

    pub fn dst(&self, a: ArrowRef) -> usize {
        match a {
            ArrowRef::Identity(o) => o,
            ArrowRef::Arrow(i) => self.arrows[i].dst,
        }
    }

    /// `second ∘ first`, if composable and defined.
    pub fn compose(&self, first: ArrowRef, second: ArrowRef) -> Option<ArrowRef> {
        if self.dst(first) != self.src(second) {
            return None;
        }
        match (first, second) {
            (ArrowRef::Identity(_), s) => Some(s),
            (f, ArrowRef::Identity(_)) => Some(f),
            (ArrowRef::Arrow(a), ArrowRef::Arrow(b)) => self.composites.get(&(a, b)).copied(),
        }
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Exhaustive check of the category laws on the presentation.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if seen.insert(o.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate index object {o:?}")));
            }
        }
        let mut names = HashMap::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if a.src >= self.objects.len() || a.dst >= self.objects.len() {
                return Err(Error::Invalid(format!("arrow {:?} has an unknown endpoint", a.name)));
            }
            if a.name.starts_with("id:") || names.insert(a.name.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("bad or duplicate arrow name {:?}", a.name)));
            }
        }
        for (&(a, b), &c) in &self.composites {
            let (fa, fb) = (&self.arrows[a], &self.arrows[b]);
            if fa.dst != fb.src || self.src(c) != fa.src || self.dst(c) != fb.dst {
                return Err(Error::Invalid(format!(
                    "composite of {:?} then {:?} is mistyped",
                    fa.name, fb.name
                )));
            }
        }
        for (a, fa) in self.arrows.iter().enumerate() {
            for &b in &self.outgoing[fa.dst] {
                if !self.composites.contains_key(&(a, b)) {
                    return Err(Error::Invalid(format!(
                        "missing composite of {:?} then {:?}",
                        fa.name, self.arrows[b].name
                    )));
                }
                for &c in &self.outgoing[self.arrows[b].dst] {
                    let (x, y, z) = (ArrowRef::Arrow(a), ArrowRef::Arrow(b), ArrowRef::Arrow(c));
                    let left = self.compose(x, y).and_then(|xy| self.compose(xy, z));
                    let right = self.compose(y, z).and_then(|yz| self.compose(x, yz));
                    if left.is_none() || left != right {
                        return Err(Error::Invalid(format!(
                            "associativity fails on {:?}, {:?}, {:?}",
                            fa.name, self.arrows[b].name, self.arrows[c].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn arrow_ref_name(&self, a: ArrowRef) -> String {
        match a {
            ArrowRef::Identity(o) => format!("id:{}", self.objects[o]),
            ArrowRef::Arrow(i) => self.arrows[i].name.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    name: String,
    src: String,
    dst: String,
}

#[derive(Serialize, Deserialize)]
struct IndexJson {
    objects: Vec<String>,
    arrows: Vec<ArrowJson>,
    #[serde(default)]
    composites: Vec<[String; 3]>,
}

impl Serialize for IndexCategory {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IndexJson {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    name: a.name.clone(),
                    src: self.objects[a.src].clone(),
                    dst: self.objects[a.dst].clone(),
                })
                .collect(),
            composites: self
                .composites()
                .map(|(a, b, c)| {
                    [
                        self.arrows[a].name.clone(),
                        self.arrows[b].name.clone(),
                        self.arrow_ref_name(c),
                    ]
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexCategory {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = IndexJson::deserialize(d)?;
        let mut cat = IndexCategory::new(raw.objects);
        let obj = |cat: &IndexCategory, n: &str| {
            cat.object_index(n)
                .ok_or_else(|| D::Error::custom(format!("unknown object {n:?}")))
        };
        for a in &raw.arrows {
            let (s, t) = (obj(&cat, &a.src)?, obj(&cat, &a.dst)?);
            cat.add_arrow(a.name.clone(), s, t);
        }
        let arrow = |cat: &IndexCategory, n: &str| -> std::result::Result<ArrowRef, D::Error> {
            if let Some(o) = n.strip_prefix("id:") {
                return Ok(ArrowRef::Identity(obj(cat, o)?));
            }
            cat.arrows
                .iter()
                .position(|a| a.name == n)
                .map(ArrowRef::Arrow)
                .ok_or_else(|| D::Error::custom(format!("unknown arrow {n:?}")))
        };
        for [a, b, c] in &raw.composites {
            let (ArrowRef::Arrow(a), ArrowRef::Arrow(b)) = (arrow(&cat, a)?, arrow(&cat, b)?) else {
                return Err(D::Error::custom("composites list only non-identity arrows"));
            };
            let c = arrow(&cat, c)?;
            cat.add_composite(a, b, c);
        }
        cat.validate().map_err(D::Error::custom)?;
        Ok(cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> IndexCategory {
        let mut j = IndexCategory::new(vec!["a".into(), "b".into(), "c".into()]);
        let f = j.add_arrow("f", 0, 1);
        let g = j.add_arrow("g", 1, 2);
        let gf = j.add_arrow("gf", 0, 2);
        j.add_composite(f, g, ArrowRef::Arrow(gf));
        j
    }

    #[test]
    fn chain_is_a_category() {
        let j = chain();
        j.validate().unwrap();
        assert_eq!(
            j.compose(ArrowRef::Arrow(0), ArrowRef::Arrow(1)),
            Some(ArrowRef::Arrow(2))
        );
        assert_eq!(
            j.compose(ArrowRef::Identity(0), ArrowRef::Arrow(0)),
            Some(ArrowRef::Arrow(0))
        );
        assert_eq!(j.compose(ArrowRef::Arrow(1), ArrowRef::Arrow(0)), None);
    }

    #[test]
    fn missing_composite_is_rejected() {
        let mut j = IndexCategory::new(vec!["a".into(), "b".into(), "c".into()]);
        j.add_arrow("f", 0, 1);
        j.add_arrow("g", 1, 2);
        assert!(j.validate().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let j = chain();
        let text = serde_json::to_string(&j).unwrap();
        let back: IndexCategory = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn idempotent_composite_to_identity() {
        // an involution s with s∘s = id
        let mut j = IndexCategory::new(vec!["a".into()]);
        let s = j.add_arrow("s", 0, 0);
        j.add_composite(s, s, ArrowRef::Identity(0));
        j.validate().unwrap();
    }
}
