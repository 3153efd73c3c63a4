//! Colimit of a line diagram of blocks: the underlying colimit, its anchor
//! `σ`, the splittings `v_i`, and the induced relation and function
//! interpretations.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{colimit, universal_morphism, Category, Cocone, Diagram, FinCat, FinKind, FinMorphism};
use crate::lines::{build_line_index, line_diagram, Line, LineIndex, Tuple};
use crate::structlang::{
    enumerate_i0_monos, first_violation, is_homomorphism, is_monic_block, Block, FuncEval, FuncInterp, Structure,
};

/// The data a colimit block is built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineInstance {
    pub i0: FinMorphism,
    pub x: Block,
    pub y: Block,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct ColimitBlock {
    pub input: LineInstance,
    /// The alphabet `P`: the `i0`-monomorphisms `X -> Y`.
    pub monos: Vec<FinMorphism>,
    pub line_index: LineIndex,
    /// The line diagram composed with the forgetful functor.
    pub diagram: Diagram,
    /// Underlying colimit; legs in index order, tuples first.
    pub colimit: Cocone,
    pub z: Structure,
    pub sigma: FinMorphism,
    pub h: FinMorphism,
    pub v: Vec<FinMorphism>,
}

impl ColimitBlock {
    pub fn cat(&self) -> &FinCat {
        self.z.base()
    }

    pub fn tuple_leg(&self, t: usize) -> &FinMorphism {
        &self.colimit.legs[self.line_index.tuple_object(t)]
    }

    pub fn line_leg(&self, l: usize) -> &FinMorphism {
        &self.colimit.legs[self.line_index.line_object(l)]
    }

    pub fn block(&self) -> Block {
        Block {
            structure: self.z.clone(),
            anchor: self.sigma.clone(),
        }
    }

    /// `Id_Y` on active coordinates, `ℓ_i ∘ h ∘ ρ` elsewhere.
    pub fn u(&self, line: &Line, i: usize) -> Result<FinMorphism> {
        u_map(
            self.cat(),
            &self.monos,
            &self.h,
            &self.input.y.anchor,
            self.input.y.carrier(),
            line,
            i,
        )
    }

    /// Cocone, anchor and splitting equations, checked by table comparison.
    pub fn check_invariants(&self) -> Result<()> {
        let cat = self.cat();
        let fail = |what: String| Err(Error::InternalInconsistency(what));
        if let Err(e) = self.colimit.validate_over(&self.diagram) {
            return fail(format!("colimit legs do not commute: {e}"));
        }
        let rho = &self.input.y.anchor;
        let i0pi = cat.compose(&self.input.i0, &self.input.x.anchor)?;
        let id_y = cat.identity(&self.input.y.carrier());
        for (l, line) in self.line_index.lines.iter().enumerate() {
            let f = self.line_leg(l);
            if cat.compose(&self.sigma, f)? != *rho {
                return fail(format!("σ ∘ f_ℓ ≠ ρ for {line:?}"));
            }
            for (i, v) in self.v.iter().enumerate() {
                let vf = cat.compose(v, f)?;
                if vf != self.u(line, i)? || (line.is_active(i) && vf != id_y) {
                    return fail(format!("v_{i} ∘ f_ℓ is wrong for {line:?}"));
                }
            }
        }
        for (t, tuple) in self.line_index.tuples.iter().enumerate() {
            let f = self.tuple_leg(t);
            if cat.compose(&self.sigma, f)? != i0pi {
                return fail(format!("σ ∘ f_ē ≠ i0 ∘ π for {tuple:?}"));
            }
            for (i, v) in self.v.iter().enumerate() {
                if cat.compose(v, f)? != self.monos[tuple[i]] {
                    return fail(format!("v_{i} ∘ f_ē ≠ e_{i} for {tuple:?}"));
                }
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> ColimitBlockJson<'_> {
        ColimitBlockJson {
            input: &self.input,
            monos: &self.monos,
            apex: self.colimit.apex,
            z: &self.z,
            sigma: &self.sigma,
            h: &self.h,
            v: &self.v,
            tuple_legs: self
                .line_index
                .tuples
                .iter()
                .enumerate()
                .map(|(t, tuple)| TupleLeg {
                    tuple,
                    leg: self.tuple_leg(t),
                })
                .collect(),
            line_legs: self
                .line_index
                .lines
                .iter()
                .enumerate()
                .map(|(l, line)| LineLeg {
                    line,
                    leg: self.line_leg(l),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct TupleLeg<'a> {
    pub tuple: &'a Tuple,
    pub leg: &'a FinMorphism,
}

#[derive(Serialize)]
pub struct LineLeg<'a> {
    pub line: &'a Line,
    pub leg: &'a FinMorphism,
}

/// Serializable view of a colimit block.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColimitBlockJson<'a> {
    pub input: &'a LineInstance,
    pub monos: &'a [FinMorphism],
    pub apex: usize,
    pub z: &'a Structure,
    pub sigma: &'a FinMorphism,
    pub h: &'a FinMorphism,
    pub v: &'a [FinMorphism],
    pub tuple_legs: Vec<TupleLeg<'a>>,
    pub line_legs: Vec<LineLeg<'a>>,
}

fn u_map(
    cat: &FinCat,
    monos: &[FinMorphism],
    h: &FinMorphism,
    rho: &FinMorphism,
    y: usize,
    line: &Line,
    i: usize,
) -> Result<FinMorphism> {
    match line.fixed(i) {
        None => Ok(cat.identity(&y)),
        Some(p) => cat.compose(&monos[p], &cat.compose(h, rho)?),
    }
}

pub(crate) fn check_inputs(i0: &FinMorphism, xb: &Block, yb: &Block) -> Result<FinCat> {
    let cat = *xb.cat();
    if !matches!(cat.kind, FinKind::Fin | FinKind::FinOp) {
        return Err(Error::Unsupported(format!(
            "line colimits need Fin or FinOp, not {}",
            cat.kind.name()
        )));
    }
    if *xb.structure.language != *yb.structure.language {
        return Err(Error::TypeMismatch("X and Y are over different languages".into()));
    }
    if cat.left_inverse(i0)?.is_none() {
        return Err(Error::PreconditionFailed(format!("i0 {i0:?} has no left inverse")));
    }
    if !is_monic_block(xb) {
        return Err(Error::PreconditionFailed("X is not a monic block".into()));
    }
    Ok(cat)
}

/// Builds the colimit block of the line diagram of dimension `n` over all
/// `i0`-monomorphisms `X -> Y`.
pub fn construct_colimit_block(i0: &FinMorphism, xb: &Block, yb: &Block, n: usize) -> Result<ColimitBlock> {
    check_inputs(i0, xb, yb)?;
    let monos = enumerate_i0_monos(xb, yb, i0)?;
    construct_with_monos(i0, xb, yb, monos, n)
}

/// As [`construct_colimit_block`] with the alphabet supplied; every member
/// must be an `i0`-monomorphism.
pub fn construct_with_monos(
    i0: &FinMorphism,
    xb: &Block,
    yb: &Block,
    monos: Vec<FinMorphism>,
    n: usize,
) -> Result<ColimitBlock> {
    let cat = check_inputs(i0, xb, yb)?;
    for m in &monos {
        if cat.left_inverse(m)?.is_none() || !crate::structlang::is_i0_homomorphism(m, xb, yb, i0)? {
            return Err(Error::PreconditionFailed(format!("{m:?} is not an i0-monomorphism")));
        }
    }
    let limits = cat.limits;
    let (x, y) = (xb.carrier(), yb.carrier());
    let line_index = build_line_index(monos.len(), n, &limits)?;
    let diagram = line_diagram(&line_index, cat, x, y, &monos)?;
    let colim = colimit(&diagram)?;

    let left_pi = cat
        .left_inverse(&xb.anchor)?
        .ok_or_else(|| Error::PreconditionFailed("π has no left inverse".into()))?;
    let left_i0 = cat
        .left_inverse(i0)?
        .ok_or_else(|| Error::PreconditionFailed("i0 has no left inverse".into()))?;
    let h = cat.compose(&left_pi, &left_i0)?;
    if cat.compose(&h, &cat.compose(i0, &xb.anchor)?)? != cat.identity(&x) {
        return Err(Error::InternalInconsistency("h ∘ i0 ∘ π ≠ Id_X".into()));
    }

    let legs_over = |tuple_leg: &dyn Fn(&Tuple) -> Result<FinMorphism>,
                     line_leg: &dyn Fn(&Line) -> Result<FinMorphism>|
     -> Result<Vec<FinMorphism>> {
        let mut legs = Vec::with_capacity(diagram.objects.len());
        for t in &line_index.tuples {
            legs.push(tuple_leg(t)?);
        }
        for l in &line_index.lines {
            legs.push(line_leg(l)?);
        }
        Ok(legs)
    };

    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let legs = legs_over(&|t| Ok(monos[t[i]].clone()), &|l| {
            u_map(&cat, &monos, &h, &yb.anchor, y, l, i)
        })?;
        let cocone = Cocone { apex: y, legs };
        v.push(universal_morphism(&diagram, &colim, &cocone).map_err(internal)?);
    }

    let i0pi = cat.compose(i0, &xb.anchor)?;
    let anchor_cocone = Cocone {
        apex: cat.cod(i0),
        legs: legs_over(&|_| Ok(i0pi.clone()), &|_| Ok(yb.anchor.clone()))?,
    };
    let sigma = universal_morphism(&diagram, &colim, &anchor_cocone).map_err(internal)?;

    let lang = yb.structure.language.clone();
    let first_line = line_index.tuples.len();
    let mut rel = Vec::with_capacity(lang.relations.len());
    for k in 0..lang.relations.len() {
        let mut set = BTreeSet::new();
        for leg in &colim.legs[first_line..] {
            for eta in &yb.structure.rel[k] {
                set.insert(cat.compose(leg, eta)?);
            }
        }
        rel.push(set);
    }
    let func = mediated_functions(
        &diagram,
        &colim,
        &xb.structure,
        &yb.structure,
        first_line,
        lang.functions.len(),
    );
    let z = Structure::new(lang, colim.apex, rel, func)?;

    let cb = ColimitBlock {
        input: LineInstance {
            i0: i0.clone(),
            x: xb.clone(),
            y: yb.clone(),
            n,
        },
        monos,
        line_index,
        diagram,
        colimit: colim,
        z,
        sigma,
        h,
        v,
    };
    cb.check_invariants()?;
    Ok(cb)
}

fn internal(e: Error) -> Error {
    match e {
        Error::NotACocone(m) | Error::NoMediator(m) => Error::InternalInconsistency(m),
        other => other,
    }
}

/// Function interpretations on a colimit apex: legs before `first_y` read
/// their values from `x`, the rest from `y`.
pub(crate) fn mediated_functions(
    diagram: &Diagram,
    colimit: &Cocone,
    x: &Structure,
    y: &Structure,
    first_y: usize,
    count: usize,
) -> Vec<FuncInterp> {
    let shared = Arc::new(Shared {
        diagram: diagram.clone(),
        colimit: colimit.clone(),
        x: x.clone(),
        y: y.clone(),
        first_line: first_y,
    });
    (0..count)
        .map(|k| {
            FuncInterp::Derived(Arc::new(MediatedFunc {
                shared: shared.clone(),
                func: k,
                memo: Mutex::new(HashMap::new()),
            }))
        })
        .collect()
}

struct Shared {
    diagram: Diagram,
    colimit: Cocone,
    x: Structure,
    y: Structure,
    first_line: usize,
}

/// `F^Z(γ)`: the mediator of the cocone with legs `F^Y(γ ∘ f_ℓ)` and
/// `F^X(γ ∘ f_ē)`, cached per `γ`.
struct MediatedFunc {
    shared: Arc<Shared>,
    func: usize,
    memo: Mutex<HashMap<FinMorphism, FinMorphism>>,
}

impl FuncEval for MediatedFunc {
    fn eval(&self, gamma: &FinMorphism) -> Result<FinMorphism> {
        if let Some(hit) = self.memo.lock().unwrap().get(gamma) {
            return Ok(hit.clone());
        }
        let s = &self.shared;
        let cat = s.x.base();
        let target = s.x.language.functions[self.func].arity.1;
        let mut legs = Vec::with_capacity(s.colimit.legs.len());
        for (o, leg) in s.colimit.legs.iter().enumerate() {
            let src = if o < s.first_line { &s.x } else { &s.y };
            legs.push(src.apply_func(self.func, &cat.compose(gamma, leg)?)?);
        }
        let cocone = Cocone { apex: target, legs };
        let value = universal_morphism(&s.diagram, &s.colimit, &cocone).map_err(internal)?;
        // concurrent fills compute the same mediator
        self.memo.lock().unwrap().insert(gamma.clone(), value.clone());
        Ok(value)
    }
}

/// Every `f_ℓ` is a homomorphism `Y -> Z` and every `f_ē` one `X -> Z`.
pub fn verify_homomorphism_legs(cb: &ColimitBlock) -> Result<bool> {
    for l in 0..cb.line_index.lines.len() {
        if !is_homomorphism(cb.line_leg(l), &cb.input.y.structure, &cb.z)? {
            return Ok(false);
        }
    }
    for t in 0..cb.line_index.tuples.len() {
        if !is_homomorphism(cb.tuple_leg(t), &cb.input.x.structure, &cb.z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tally of the relation-reflection check `R^Z(f_ℓ ∘ η) ⇔ R^Y(η)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReflectionReport {
    /// `(ℓ, η)` pairs examined.
    pub checked: usize,
    pub failures: usize,
    /// Related `f_ℓ ∘ η` also reached as `f_ℓ' ∘ η'` with `ℓ' ≠ ℓ`, split by
    /// whether the active sets of `ℓ` and `ℓ'` meet.
    pub overlapping: usize,
    pub disjoint: usize,
}

/// Exhaustive over every line and every `η ∈ Hom(r, Y)`.
pub fn relation_reflection(cb: &ColimitBlock) -> Result<ReflectionReport> {
    let cat = cb.cat();
    let y = &cb.input.y.structure;
    let mut report = ReflectionReport::default();
    let lines = &cb.line_index.lines;
    for (k, sym) in y.language.relations.iter().enumerate() {
        let etas = cat.hom(&sym.arity, &y.carrier)?;
        for (l, line) in lines.iter().enumerate() {
            for eta in &etas {
                let delta = cat.compose(cb.line_leg(l), eta)?;
                report.checked += 1;
                let in_z = cb.z.holds(k, &delta);
                if in_z != y.holds(k, eta) {
                    report.failures += 1;
                }
                if !in_z {
                    continue;
                }
                for (m, other) in lines.iter().enumerate() {
                    if m == l {
                        continue;
                    }
                    let witnessed = y.rel[k]
                        .iter()
                        .map(|e| cat.compose(cb.line_leg(m), e))
                        .collect::<Result<Vec<_>>>()?
                        .contains(&delta);
                    if witnessed {
                        if line.active().iter().any(|&i| other.is_active(i)) {
                            report.overlapping += 1;
                        } else {
                            report.disjoint += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// A cocone over the line diagram in the category of blocks: an apex block
/// `(W, τ)` and legs in index order, tuples first.
#[derive(Debug, Clone)]
pub struct BlockCocone {
    pub apex: Block,
    pub legs: Vec<FinMorphism>,
}

/// The unique mediator out of the colimit block into another block cocone,
/// checked to be an `Id_V`-homomorphism of blocks.
pub fn verify_colimit_in_bl(cb: &ColimitBlock, other: &BlockCocone) -> Result<FinMorphism> {
    let cat = cb.cat();
    let w = &other.apex;
    let i0pi = cat.compose(&cb.input.i0, &cb.input.x.anchor)?;
    if other.legs.len() != cb.colimit.legs.len() || w.anchor_target() != cat.cod(&cb.input.i0) {
        return Err(Error::NotACocone(
            "apex or leg count does not fit the line diagram".into(),
        ));
    }
    let first_line = cb.line_index.tuples.len();
    for (o, leg) in other.legs.iter().enumerate() {
        let (src, square) = if o < first_line {
            (&cb.input.x, &i0pi)
        } else {
            (&cb.input.y, &cb.input.y.anchor)
        };
        if !cat.contains(leg) || cat.dom(leg) != src.carrier() || cat.cod(leg) != w.carrier() {
            return Err(Error::NotACocone(format!("leg {o} is mistyped")));
        }
        if cat.compose(&w.anchor, leg)? != *square {
            return Err(Error::NotACocone(format!("leg {o} does not respect the anchors")));
        }
        if !is_homomorphism(leg, &src.structure, &w.structure)? {
            return Err(Error::NotACocone(format!("leg {o} is not a homomorphism")));
        }
    }
    let underlying = Cocone {
        apex: w.carrier(),
        legs: other.legs.clone(),
    };
    let f = universal_morphism(&cb.diagram, &cb.colimit, &underlying)?;
    if cat.compose(&w.anchor, &f)? != cb.sigma {
        return Err(Error::InternalInconsistency("τ ∘ f ≠ σ".into()));
    }
    if let Some(why) = first_violation(&f, &cb.z, &w.structure)? {
        return Err(Error::HomomorphismViolation(format!("mediator {f:?}: {why}")));
    }
    Ok(f)
}
