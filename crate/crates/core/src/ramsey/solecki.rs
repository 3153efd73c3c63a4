use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::partite::{partite_construction, ConstructionResolution, PartiteConstruction};
use super::{is_monochromatic, is_ramsey_witness, Coloring, LdArrow, LdCategory, OrderedSolver, Verdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::fincat::{Category, FinCat, FinKind, FinMorphism, Variance};
use crate::structlang::{is_homomorphism, Block, DBlock, Forgetful, Structure};
use crate::verdict::Mode;

/// A partite construction for structures over orders, relabeled so the
/// result is itself an ordered structure.
#[derive(Clone)]
pub struct Solecki {
    pub construction: PartiteConstruction,
    /// Relabeling `Z -> Z'`, an isomorphism of structures.
    pub beta: FinMorphism,
    /// `Z'` anchored by `anchor ∘ β⁻¹`.
    pub ordered: Block,
    /// `[K, M, Z']` as objects of the category of ordered structures.
    pub category: LdCategory,
}

/// Weakly increasing anchor: stable sort of the carrier by anchor value.
fn direct_order(anchor: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..anchor.len()).collect();
    order.sort_by_key(|&z| anchor[z]);
    order
}

/// Image of `table: M -> Z` ordered by least preimage, then the rest of
/// `0..z` in label order.
pub(crate) fn dual_order(table: &[usize], z: usize) -> Vec<usize> {
    let mut first = vec![None; z];
    for (a, &v) in table.iter().enumerate() {
        first[v].get_or_insert(a);
    }
    let mut image: Vec<usize> = (0..z).filter(|&v| first[v].is_some()).collect();
    image.sort_by_key(|&v| first[v]);
    image.extend((0..z).filter(|&v| first[v].is_none()));
    image
}

fn build(k: &Structure, m: &Structure, r: usize, fixed: Option<usize>, config: &Config, d: FinKind) -> Result<Solecki> {
    let c = *k.base();
    let ambient = d.ambient();
    if c.kind != ambient || *k.language != *m.language {
        return Err(Error::TypeMismatch(format!(
            "K and M must share a {}-language",
            ambient.name()
        )));
    }
    let d = FinCat::with_limits(d, c.limits);
    let g = Forgetful::new(d, c)?;
    let x = DBlock::new(Block::identity(k.clone()), k.carrier, &g)?;
    let y = DBlock::new(Block::identity(m.clone()), m.carrier, &g)?;
    let solver = OrderedSolver::new(d, config.solver_max_size, fixed, config.limits.max_colorings)?;
    let pc = partite_construction(g, &x, &y, r, Arc::new(solver), config)?;

    let zb = &pc.z.block;
    let n = zb.carrier();
    let order = match d.kind {
        FinKind::FinLe => direct_order(&zb.anchor.table),
        _ => dual_order(&zb.anchor.table, n),
    };
    let mut new_of_old = vec![0; n];
    for (pos, &old) in order.iter().enumerate() {
        new_of_old[old] = pos;
    }
    let forward = FinMorphism::new(n, n, new_of_old)?;
    let backward = FinMorphism::new(n, n, order)?;
    // an arrow Z -> Z' of the opposite category is stored as a table Z' -> Z
    let (beta, beta_inv) = match c.variance() {
        Variance::Covariant => (forward, backward),
        Variance::Contravariant => (backward, forward),
    };
    let relabeled = zb.structure.transport(&beta)?;
    if !is_homomorphism(&beta, &zb.structure, &relabeled)? || !is_homomorphism(&beta_inv, &relabeled, &zb.structure)? {
        return Err(Error::InternalInconsistency("relabeling is not an isomorphism".into()));
    }
    let anchor = c.compose(&zb.anchor, &beta_inv)?;
    let ordered = Block::new(relabeled, anchor)?;
    check_ordering(&ordered, d.kind)?;
    let category = LdCategory::new(d, vec![k.clone(), m.clone(), ordered.structure.clone()])?;
    Ok(Solecki {
        construction: pc,
        beta,
        ordered,
        category,
    })
}

fn check_ordering(b: &Block, d: FinKind) -> Result<()> {
    let t = &b.anchor.table;
    let ok = match d {
        FinKind::FinLe => t.windows(2).all(|w| w[0] <= w[1]),
        _ => {
            // image first, in order of least preimage
            let order = dual_order(t, b.carrier());
            order.iter().enumerate().all(|(pos, &v)| pos == v)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InternalInconsistency(
            "relabeled anchor is not in the required order".into(),
        ))
    }
}

/// Ordered structures over `(Fin,≤)`: relabels `Z` so its anchor is weakly
/// increasing.
pub fn solecki_direct(
    k: &Structure,
    m: &Structure,
    r: usize,
    fixed: Option<usize>,
    config: &Config,
) -> Result<Solecki> {
    build(k, m, r, fixed, config, FinKind::FinLe)
}

/// Structures over `(Fin,≤*)^op`: relabels `Z` so the image of its anchor
/// comes first, ordered by least preimage.
pub fn solecki_dual(k: &Structure, m: &Structure, r: usize, fixed: Option<usize>, config: &Config) -> Result<Solecki> {
    build(k, m, r, fixed, config, FinKind::FinLeStarOp)
}

impl Solecki {
    /// `Hom(K, Z')` among ordered structures: the domain of the colorings.
    pub fn domain(&self) -> Result<Vec<LdArrow>> {
        self.category.hom(&0, &2)
    }

    /// An arrow `M -> Z'` whose composites with `Hom(K, M)` share one color.
    pub fn resolve(&self, chi: &Coloring<LdArrow>) -> Result<(LdArrow, ConstructionResolution)> {
        let pc = &self.construction;
        let c = pc.g.c;
        let lift = |f: &FinMorphism, dom: usize| -> Result<LdArrow> {
            Ok(LdArrow {
                dom,
                cod: 2,
                map: c.compose(&self.beta, f)?,
            })
        };
        let colors = pc
            .domain
            .iter()
            .map(|f| chi.color_or_err(&lift(f, 0)?))
            .collect::<Result<Vec<_>>>()?;
        let chi_z = Coloring::new(pc.domain.clone(), chi.r, colors)?;
        let res = pc.resolve(&chi_z)?;
        let e = lift(&res.embedding, 1)?;
        if !self.category.hom(&1, &2)?.contains(&e) {
            return Err(Error::InternalInconsistency(
                "relabeled embedding is not an ordered arrow".into(),
            ));
        }
        let image = self
            .category
            .hom(&0, &1)?
            .iter()
            .map(|f| self.category.compose(&e, f))
            .collect::<Result<Vec<_>>>()?;
        if !is_monochromatic(chi, &image)? {
            return Err(Error::InternalInconsistency(
                "relabeled embedding is not monochromatic".into(),
            ));
        }
        Ok((e, res))
    }

    /// Direct check of `Z' -> (M)^K_r` among ordered structures.
    pub fn verify(&self, mode: Mode, budget: usize) -> Result<Verdict<LdArrow>> {
        is_ramsey_witness(&self.category, &0, &1, &2, self.construction.r, mode, budget)
    }
}

impl Serialize for Solecki {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Solecki", 3)?;
        st.serialize_field("construction", &self.construction)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("ordered", &self.ordered)?;
        st.end()
    }
}
