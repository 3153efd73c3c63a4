//! Languages whose arities are objects of a base category, structures
//! interpreting them, homomorphisms, and anchored blocks.

mod block;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fincat::{Category, FinCat, FinKind, FinMorphism, Variance};

pub use block::{enumerate_i0_monos, is_dblock_morphism, is_i0_homomorphism, is_monic_block, Block, DBlock, Forgetful};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelSymbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncSymbol {
    pub name: String,
    pub arity: (usize, usize),
}

/// Relation symbols of arity `r` and function symbols of arity `(r, s)`,
/// where `r` and `s` are objects of `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub base: FinCat,
    pub relations: Vec<RelSymbol>,
    pub functions: Vec<FuncSymbol>,
}

impl Language {
    pub fn new(base: FinCat, relations: Vec<RelSymbol>, functions: Vec<FuncSymbol>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in relations
            .iter()
            .map(|r| &r.name)
            .chain(functions.iter().map(|f| &f.name))
        {
            if !seen.insert(name.clone()) {
                return Err(Error::Invalid(format!("symbol {name:?} declared twice")));
            }
        }
        Ok(Language {
            base,
            relations,
            functions,
        })
    }

    pub fn empty(base: FinCat) -> Self {
        Language {
            base,
            relations: Vec::new(),
            functions: Vec::new(),
        }
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }
}

#[derive(Serialize, Deserialize)]
struct LanguageJson {
    base: FinKind,
    #[serde(default)]
    relations: Vec<RelSymbol>,
    #[serde(default)]
    functions: Vec<FuncSymbol>,
}

impl Serialize for Language {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LanguageJson {
            base: self.base.kind,
            relations: self.relations.clone(),
            functions: self.functions.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Language {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LanguageJson::deserialize(d)?;
        Language::new(FinCat::new(raw.base), raw.relations, raw.functions).map_err(D::Error::custom)
    }
}

/// A function interpretation computed on demand.
pub trait FuncEval: Send + Sync {
    /// `F(γ)` for `γ ∈ Hom(X, r)`.
    fn eval(&self, gamma: &FinMorphism) -> Result<FinMorphism>;
}

/// How a function symbol is interpreted.
#[derive(Clone)]
pub enum FuncInterp {
    /// Rank in `Hom(X, r)` to rank in `Hom(X, s)`.
    Table(Vec<usize>),
    Derived(Arc<dyn FuncEval>),
}

impl fmt::Debug for FuncInterp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncInterp::Table(t) => f.debug_tuple("Table").field(t).finish(),
            FuncInterp::Derived(_) => f.write_str("Derived(..)"),
        }
    }
}

impl PartialEq for FuncInterp {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FuncInterp::Table(a), FuncInterp::Table(b)) => a == b,
            (FuncInterp::Derived(a), FuncInterp::Derived(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// A carrier object with interpretations `R^X ⊆ Hom(r, X)` and
/// `F^X: Hom(X, r) -> Hom(X, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Structure {
    pub language: Arc<Language>,
    pub carrier: usize,
    pub rel: Vec<BTreeSet<FinMorphism>>,
    pub func: Vec<FuncInterp>,
}

impl Structure {
    pub fn new(
        language: Arc<Language>,
        carrier: usize,
        rel: Vec<BTreeSet<FinMorphism>>,
        func: Vec<FuncInterp>,
    ) -> Result<Self> {
        let s = Structure {
            language,
            carrier,
            rel,
            func,
        };
        s.validate()?;
        Ok(s)
    }

    /// All relations empty; only for languages without function symbols.
    pub fn bare(language: Arc<Language>, carrier: usize) -> Result<Self> {
        if !language.functions.is_empty() {
            return Err(Error::Invalid("function symbols need interpretations".into()));
        }
        let rel = vec![BTreeSet::new(); language.relations.len()];
        Structure::new(language, carrier, rel, Vec::new())
    }

    /// The same structure over a base category with other caps.
    pub fn with_limits(&self, limits: Limits) -> Structure {
        let mut language = (*self.language).clone();
        language.base.limits = limits;
        Structure {
            language: Arc::new(language),
            ..self.clone()
        }
    }

    pub fn base(&self) -> &FinCat {
        &self.language.base
    }

    pub fn validate(&self) -> Result<()> {
        let lang = &self.language;
        let cat = &lang.base;
        if self.rel.len() != lang.relations.len() || self.func.len() != lang.functions.len() {
            return Err(Error::Invalid(
                "interpretation count does not match the language".into(),
            ));
        }
        for (sym, members) in lang.relations.iter().zip(&self.rel) {
            for eta in members {
                if !cat.contains(eta) || cat.dom(eta) != sym.arity || cat.cod(eta) != self.carrier {
                    return Err(Error::TypeMismatch(format!(
                        "{eta:?} in {} is not an arrow {} -> {}",
                        sym.name, sym.arity, self.carrier
                    )));
                }
            }
        }
        for (sym, interp) in lang.functions.iter().zip(&self.func) {
            if let FuncInterp::Table(t) = interp {
                let (r, s) = sym.arity;
                let dom = cat
                    .limits
                    .check_hom("function domain", cat.hom_count(self.carrier, r))?;
                let cod = cat.hom_count(self.carrier, s);
                if t.len() != dom || t.iter().any(|&v| v as u128 >= cod) {
                    return Err(Error::TypeMismatch(format!(
                        "table for {} is not a map Hom({}, {r}) -> Hom({}, {s})",
                        sym.name, self.carrier, self.carrier
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn holds(&self, rel: usize, eta: &FinMorphism) -> bool {
        self.rel[rel].contains(eta)
    }

    /// `F^X(γ)` for the function symbol at position `func`.
    pub fn apply_func(&self, func: usize, gamma: &FinMorphism) -> Result<FinMorphism> {
        let cat = self.base();
        let (r, s) = self.language.functions[func].arity;
        if !cat.contains(gamma) || cat.dom(gamma) != self.carrier || cat.cod(gamma) != r {
            return Err(Error::TypeMismatch(format!(
                "{gamma:?} is not in Hom({}, {r})",
                self.carrier
            )));
        }
        match &self.func[func] {
            FuncInterp::Table(t) => cat.unrank(self.carrier, s, t[cat.rank(gamma)?]),
            FuncInterp::Derived(e) => e.eval(gamma),
        }
    }

    /// Explicit table of a function interpretation, by hom-set rank.
    pub fn tabulate_func(&self, func: usize) -> Result<Vec<usize>> {
        if let FuncInterp::Table(t) = &self.func[func] {
            return Ok(t.clone());
        }
        let cat = self.base();
        let r = self.language.functions[func].arity.0;
        cat.hom(&self.carrier, &r)?
            .iter()
            .map(|g| cat.rank(&self.apply_func(func, g)?))
            .collect()
    }

    /// The isomorphic copy along a bijection `beta: X -> X'`.
    pub fn transport(&self, beta: &FinMorphism) -> Result<Structure> {
        let cat = *self.base();
        if cat.dom(beta) != self.carrier || !beta.is_injective() || !beta.is_surjective() {
            return Err(Error::PreconditionFailed(
                "transport needs a bijection out of the carrier".into(),
            ));
        }
        let inverse = inverse_table(beta);
        let rel = self
            .rel
            .iter()
            .map(|set| set.iter().map(|eta| cat.compose(beta, eta)).collect::<Result<_>>())
            .collect::<Result<Vec<_>>>()?;
        let source = Arc::new(self.clone());
        let func = (0..self.func.len())
            .map(|k| {
                FuncInterp::Derived(Arc::new(Transported {
                    source: source.clone(),
                    func: k,
                    beta: beta.clone(),
                    inverse: inverse.clone(),
                }))
            })
            .collect();
        Structure::new(self.language.clone(), cat.cod(beta), rel, func)
    }
}

fn inverse_table(beta: &FinMorphism) -> FinMorphism {
    let mut table = vec![0; beta.target];
    for (x, &y) in beta.table.iter().enumerate() {
        table[y] = x;
    }
    FinMorphism {
        source: beta.target,
        target: beta.source,
        table,
    }
}

struct Transported {
    source: Arc<Structure>,
    func: usize,
    beta: FinMorphism,
    inverse: FinMorphism,
}

impl FuncEval for Transported {
    fn eval(&self, gamma: &FinMorphism) -> Result<FinMorphism> {
        let cat = self.source.base();
        let pulled = cat.compose(gamma, &self.beta)?;
        let image = self.source.apply_func(self.func, &pulled)?;
        cat.compose(&image, &self.inverse)
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    language: Language,
    carrier: usize,
    #[serde(default)]
    rel: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    func: BTreeMap<String, BTreeMap<usize, usize>>,
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let lang = &self.language;
        let rel = lang
            .relations
            .iter()
            .zip(&self.rel)
            .map(|(sym, set)| (sym.name.clone(), set.iter().map(|m| m.table.clone()).collect()))
            .collect();
        let mut func = BTreeMap::new();
        for (k, sym) in lang.functions.iter().enumerate() {
            let t = self.tabulate_func(k).map_err(S::Error::custom)?;
            func.insert(sym.name.clone(), t.into_iter().enumerate().collect());
        }
        StructureJson {
            language: (**lang).clone(),
            carrier: self.carrier,
            rel,
            func,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = StructureJson::deserialize(d)?;
        let lang = raw.language;
        let cat = lang.base;
        for name in raw.rel.keys().chain(raw.func.keys()) {
            if lang.relation_index(name).is_none() && lang.function_index(name).is_none() {
                return Err(D::Error::custom(format!("unknown symbol {name:?}")));
            }
        }
        let mut rel = Vec::new();
        for sym in &lang.relations {
            let mut set = BTreeSet::new();
            for t in raw.rel.get(&sym.name).into_iter().flatten() {
                let (a, b) = cat.stored_shape(sym.arity, raw.carrier);
                set.insert(FinMorphism::new(a, b, t.clone()).map_err(D::Error::custom)?);
            }
            rel.push(set);
        }
        let mut func = Vec::new();
        for sym in &lang.functions {
            let entries = raw
                .func
                .get(&sym.name)
                .ok_or_else(|| D::Error::custom(format!("missing interpretation of {:?}", sym.name)))?;
            if entries.keys().copied().ne(0..entries.len()) {
                return Err(D::Error::custom(format!("table of {:?} is not indexed 0..n", sym.name)));
            }
            func.push(FuncInterp::Table(entries.values().copied().collect()));
        }
        Structure::new(Arc::new(lang), raw.carrier, rel, func).map_err(D::Error::custom)
    }
}

/// Every `η: r -> X` with `f ∘ η = δ`, for `f: X -> Y` and `δ: r -> Y`.
fn post_preimages(cat: &FinCat, f: &FinMorphism, delta: &FinMorphism, r: usize) -> Result<Vec<FinMorphism>> {
    let x = cat.dom(f);
    let (choices, stored): (Vec<Vec<usize>>, (usize, usize)) = match cat.variance() {
        Variance::Covariant => {
            // η(k) ranges over the fibre of f above δ(k)
            let mut fibres = vec![Vec::new(); f.target];
            for (a, &b) in f.table.iter().enumerate() {
                fibres[b].push(a);
            }
            (delta.table.iter().map(|&b| fibres[b].clone()).collect(), (r, x))
        }
        Variance::Contravariant => {
            // stored: η_t ∘ f_t = δ_t, so η_t is forced on the image of f_t
            let mut forced = vec![None; x];
            for (y, &a) in f.table.iter().enumerate() {
                match forced[a] {
                    None => forced[a] = Some(delta.table[y]),
                    Some(v) if v != delta.table[y] => return Ok(Vec::new()),
                    _ => {}
                }
            }
            (
                forced
                    .into_iter()
                    .map(|v| v.map_or_else(|| (0..r).collect(), |v| vec![v]))
                    .collect(),
                (x, r),
            )
        }
    };
    let count = choices.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    cat.limits.check_hom("preimage enumeration", count)?;
    let mut out = Vec::new();
    product_for_each(&choices, |t| {
        let eta = FinMorphism {
            source: stored.0,
            target: stored.1,
            table: t.to_vec(),
        };
        if cat.contains(&eta) {
            out.push(eta);
        }
    });
    Ok(out)
}

/// Calls `visit` on every tuple of the product, in lexicographic order.
pub(crate) fn product_for_each(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; choices.len()];
    let mut cur: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&cur);
        let mut i = choices.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < choices[i].len() {
                cur[i] = choices[i][pos[i]];
                break;
            }
            pos[i] = 0;
            cur[i] = choices[i][0];
        }
    }
}

fn same_language(a: &Structure, b: &Structure) -> bool {
    Arc::ptr_eq(&a.language, &b.language) || a.language == b.language
}

/// Homomorphism test: for every relation `R` and `η ∈ Hom(r, X)`,
/// `R^X(η) ⇔ R^Y(f ∘ η)`, and for every function `F` and `γ ∈ Hom(Y, r)`,
/// `F^X(γ ∘ f) = F^Y(γ) ∘ f`.
///
/// The relation clause is decided through the members of `R^X` and the
/// preimages under `f ∘ -` of the members of `R^Y`, which covers every `η`.
pub fn is_homomorphism(f: &FinMorphism, a: &Structure, b: &Structure) -> Result<bool> {
    if !same_language(a, b) {
        return Err(Error::TypeMismatch("structures over different languages".into()));
    }
    let cat = a.base();
    if !cat.contains(f) || cat.dom(f) != a.carrier || cat.cod(f) != b.carrier {
        return Err(Error::TypeMismatch(format!(
            "{f:?} is not an arrow {} -> {}",
            a.carrier, b.carrier
        )));
    }
    Ok(first_violation(f, a, b)?.is_none())
}

/// Description of the first failing clause, if any.
pub fn first_violation(f: &FinMorphism, a: &Structure, b: &Structure) -> Result<Option<String>> {
    let cat = a.base();
    let lang = &a.language;
    for (k, sym) in lang.relations.iter().enumerate() {
        for eta in &a.rel[k] {
            if !b.holds(k, &cat.compose(f, eta)?) {
                return Ok(Some(format!("{}: {eta:?} holds but its image does not", sym.name)));
            }
        }
        for delta in &b.rel[k] {
            for eta in post_preimages(cat, f, delta, sym.arity)? {
                if !a.holds(k, &eta) {
                    return Ok(Some(format!("{}: image of {eta:?} holds but it does not", sym.name)));
                }
            }
        }
    }
    for (k, sym) in lang.functions.iter().enumerate() {
        for gamma in cat.hom(&b.carrier, &sym.arity.0)? {
            let lhs = a.apply_func(k, &cat.compose(&gamma, f)?)?;
            let rhs = cat.compose(&b.apply_func(k, &gamma)?, f)?;
            if lhs != rhs {
                return Ok(Some(format!("{}: naturality fails at {gamma:?}", sym.name)));
            }
        }
    }
    Ok(None)
}
