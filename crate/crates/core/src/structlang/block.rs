use serde::{Deserialize, Deserializer, Serialize};

use super::{is_homomorphism, product_for_each, Structure};
use crate::error::{Error, Result};
use crate::fincat::{Category, FinCat, FinKind, FinMorphism, Variance};

/// A structure anchored by `π: X -> U`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub structure: Structure,
    pub anchor: FinMorphism,
}

impl Block {
    pub fn new(structure: Structure, anchor: FinMorphism) -> Result<Self> {
        let cat = structure.base();
        if !cat.contains(&anchor) || cat.dom(&anchor) != structure.carrier {
            return Err(Error::TypeMismatch(format!(
                "anchor {anchor:?} does not leave the carrier {}",
                structure.carrier
            )));
        }
        Ok(Block { structure, anchor })
    }

    /// `(X, Id_X)`.
    pub fn identity(structure: Structure) -> Self {
        let anchor = FinMorphism::identity_table(structure.carrier);
        Block { structure, anchor }
    }

    pub fn with_limits(&self, limits: crate::config::Limits) -> Block {
        Block {
            structure: self.structure.with_limits(limits),
            anchor: self.anchor.clone(),
        }
    }

    pub fn carrier(&self) -> usize {
        self.structure.carrier
    }

    pub fn cat(&self) -> &FinCat {
        self.structure.base()
    }

    pub fn anchor_target(&self) -> usize {
        self.cat().cod(&self.anchor)
    }
}

#[derive(Deserialize)]
struct BlockJson {
    structure: Structure,
    anchor: FinMorphism,
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BlockJson::deserialize(d)?;
        Block::new(raw.structure, raw.anchor).map_err(D::Error::custom)
    }
}

/// The anchor splits.
pub fn is_monic_block(b: &Block) -> bool {
    matches!(b.cat().left_inverse(&b.anchor), Ok(Some(_)))
}

fn check_square_types(xb: &Block, yb: &Block, i0: &FinMorphism) -> Result<()> {
    let cat = xb.cat();
    if !cat.contains(i0) || cat.dom(i0) != xb.anchor_target() || cat.cod(i0) != yb.anchor_target() {
        return Err(Error::TypeMismatch(format!(
            "i0 {i0:?} does not run from {} to {}",
            xb.anchor_target(),
            yb.anchor_target()
        )));
    }
    Ok(())
}

/// A homomorphism `f` with `ρ ∘ f = i0 ∘ π`.
pub fn is_i0_homomorphism(f: &FinMorphism, xb: &Block, yb: &Block, i0: &FinMorphism) -> Result<bool> {
    check_square_types(xb, yb, i0)?;
    let cat = xb.cat();
    if !is_homomorphism(f, &xb.structure, &yb.structure)? {
        return Ok(false);
    }
    Ok(cat.compose(&yb.anchor, f)? == cat.compose(i0, &xb.anchor)?)
}

/// All `i0`-homomorphisms `X -> Y` with a left inverse, in hom-set order.
pub fn enumerate_i0_monos(xb: &Block, yb: &Block, i0: &FinMorphism) -> Result<Vec<FinMorphism>> {
    check_square_types(xb, yb, i0)?;
    let cat = xb.cat();
    let candidates = match cat.kind {
        FinKind::Fin | FinKind::FinOp => square_candidates(xb, yb, i0)?,
        _ => cat.hom(&xb.carrier(), &yb.carrier())?,
    };
    let mut out = Vec::new();
    for f in candidates {
        if cat.left_inverse(&f)?.is_some() && is_i0_homomorphism(&f, xb, yb, i0)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Tables making the anchor square commute, enumerated directly.
fn square_candidates(xb: &Block, yb: &Block, i0: &FinMorphism) -> Result<Vec<FinMorphism>> {
    let cat = xb.cat();
    let target = cat.compose(i0, &xb.anchor)?;
    let rho = &yb.anchor;
    let (x, y) = (xb.carrier(), yb.carrier());
    let (choices, shape) = match cat.variance() {
        Variance::Covariant => {
            let mut fibres = vec![Vec::new(); rho.target];
            for (b, &v) in rho.table.iter().enumerate() {
                fibres[v].push(b);
            }
            let choices: Vec<Vec<usize>> = target.table.iter().map(|&v| fibres[v].clone()).collect();
            (choices, (x, y))
        }
        Variance::Contravariant => {
            // stored: f_t ∘ ρ_t = (i0 ∘ π)_t
            let mut forced = vec![None; y];
            for (v, &b) in rho.table.iter().enumerate() {
                let want = target.table[v];
                match forced[b] {
                    None => forced[b] = Some(want),
                    Some(w) if w != want => return Ok(Vec::new()),
                    _ => {}
                }
            }
            let choices = forced
                .into_iter()
                .map(|v| v.map_or_else(|| (0..x).collect(), |v| vec![v]))
                .collect();
            (choices, (y, x))
        }
    };
    let count = choices
        .iter()
        .fold(1u128, |acc: u128, c: &Vec<usize>| acc.saturating_mul(c.len() as u128));
    cat.limits.check_hom("anchored hom-set", count)?;
    let mut out = Vec::with_capacity(count as usize);
    product_for_each(&choices, |t| {
        out.push(FinMorphism {
            source: shape.0,
            target: shape.1,
            table: t.to_vec(),
        })
    });
    Ok(out)
}

/// The inclusion of a subcategory of orders into its ambient category:
/// identity on carrier sizes and on tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Forgetful {
    pub d: FinCat,
    pub c: FinCat,
}

impl Forgetful {
    pub fn new(d: FinCat, c: FinCat) -> Result<Self> {
        if d.kind.ambient() != c.kind {
            return Err(Error::TypeMismatch(format!(
                "{} does not sit inside {}",
                d.kind.name(),
                c.kind.name()
            )));
        }
        Ok(Forgetful { d, c })
    }

    pub fn object(&self, k: usize) -> usize {
        k
    }

    pub fn arrow(&self, i: &FinMorphism) -> FinMorphism {
        i.clone()
    }
}

/// A block whose anchor lands in `G(K)` for an object `K` of `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DBlock {
    pub block: Block,
    pub d_object: usize,
}

impl DBlock {
    pub fn new(block: Block, d_object: usize, g: &Forgetful) -> Result<Self> {
        if block.anchor_target() != g.object(d_object) {
            return Err(Error::TypeMismatch(format!(
                "anchor lands in {} rather than G({d_object})",
                block.anchor_target()
            )));
        }
        Ok(DBlock { block, d_object })
    }
}

/// The first `i ∈ Hom_D(K, L)` for which `f` is a `G(i)`-monomorphism.
pub fn is_dblock_morphism(f: &FinMorphism, xd: &DBlock, yd: &DBlock, g: &Forgetful) -> Result<Option<FinMorphism>> {
    if g.c.left_inverse(f)?.is_none() {
        return Ok(None);
    }
    for i in g.d.hom(&xd.d_object, &yd.d_object)? {
        if is_i0_homomorphism(f, &xd.block, &yd.block, &g.arrow(&i))? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
