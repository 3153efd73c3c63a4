use std::fmt::Debug;
use std::hash::Hash;

use super::{is_monochromatic, Coloring};
use crate::error::{Error, Result};
use crate::lines::TransferIndex;

/// Data of the transfer step: the factorization index built in the source
/// category, a surjection `F: Hom(A, B) -> Hom(D, E)` listed along
/// `index.factors`, and a cocone `φ` over the transfer diagram, its legs in
/// index order (`h`-objects, then `g`-objects).
pub struct Transfer<'a, CM, DM> {
    pub index: &'a TransferIndex<CM>,
    pub f_map: &'a [DM],
    pub hom_de: &'a [DM],
    pub legs: &'a [DM],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferOutcome<DM> {
    /// Position of the chosen `g` among the `g`-objects.
    pub g: usize,
    /// `φ_g`.
    pub leg: DM,
}

impl<CM, DM> Transfer<'_, CM, DM>
where
    CM: Clone + Eq + Hash + Debug,
    DM: Clone + Eq + Hash + Debug,
{
    pub fn validate(&self, compose: impl Fn(&DM, &DM) -> Result<DM>) -> Result<()> {
        let ix = self.index;
        if self.f_map.len() != ix.factors.len() {
            return Err(Error::Invalid("F must be listed along Hom(A, B)".into()));
        }
        if let Some(j) = self.hom_de.iter().find(|j| !self.f_map.contains(j)) {
            return Err(Error::NotSurjective(format!("{j:?} has no preimage under F")));
        }
        if self.legs.len() != ix.h_objects.len() + ix.g_objects.len() {
            return Err(Error::NotACocone("one leg per transfer object is required".into()));
        }
        for &(h, g, f) in &ix.arrows {
            let via = compose(&self.legs[ix.h_objects.len() + g], &self.f_map[f])?;
            if via != self.legs[h] {
                return Err(Error::NotACocone(format!("φ_g ∘ F(f) ≠ φ_h at (h{h}, g{g}, f{f})")));
            }
        }
        Ok(())
    }
}

/// Resolves `chi` on `Hom(D, W)` through the source witness.
///
/// Colors `h ∈ Hom(A, C)` by `χ′(h) = χ(φ_h)`, asks `solver` for a `g` whose
/// `g ∘ Hom(A, B)` is `χ′`-monochromatic, and returns `φ_g` after checking
/// that `φ_g ∘ Hom(D, E)` is `χ`-monochromatic.
pub fn transfer_resolve<CM, DM>(
    t: &Transfer<'_, CM, DM>,
    compose: impl Fn(&DM, &DM) -> Result<DM>,
    chi: &Coloring<DM>,
    solver: impl FnOnce(&Coloring<CM>) -> Result<Option<usize>>,
) -> Result<TransferOutcome<DM>>
where
    CM: Clone + Eq + Hash + Debug,
    DM: Clone + Eq + Hash + Debug,
{
    t.validate(&compose)?;
    let ix = t.index;
    let recolored = ix
        .h_objects
        .iter()
        .enumerate()
        .map(|(h, _)| chi.color_or_err(&t.legs[h]))
        .collect::<Result<Vec<_>>>()?;
    let chi_prime = Coloring::new(ix.h_objects.clone(), chi.r, recolored)?;
    let g = solver(&chi_prime)?.ok_or_else(|| Error::SolverFailed("the source object resolved no coloring".into()))?;
    if g >= ix.g_objects.len() {
        return Err(Error::SolverFailed(format!("solver chose g{g}, which does not exist")));
    }
    let through_g: Vec<CM> = ix
        .arrows
        .iter()
        .filter(|a| a.1 == g)
        .map(|a| ix.h_objects[a.0].clone())
        .collect();
    if !is_monochromatic(&chi_prime, &through_g)? {
        return Err(Error::SolverFailed(format!("g{g} is not χ′-monochromatic")));
    }
    let leg = t.legs[ix.h_objects.len() + g].clone();
    let image = t.hom_de.iter().map(|j| compose(&leg, j)).collect::<Result<Vec<_>>>()?;
    if !is_monochromatic(chi, &image)? {
        return Err(Error::InternalInconsistency(
            "φ_g ∘ Hom(D, E) is not monochromatic".into(),
        ));
    }
    Ok(TransferOutcome { g, leg })
}
