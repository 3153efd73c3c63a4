use std::collections::BTreeSet;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::transfer::{transfer_resolve, Transfer};
use super::{Coloring, DSolver, Verdict};
use crate::colimit_block::{check_inputs, construct_with_monos, mediated_functions, ColimitBlock};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::fincat::{colimit, universal_morphism, Category, Cocone, Diagram, FinMorphism, IndexCategory};
use crate::lines::{
    build_transfer_index, hj_witness_search, monochromatic_line, HjArrow, HjCategory, HjSearch, Line, TransferIndex,
};
use crate::structlang::{enumerate_i0_monos, is_i0_homomorphism, is_monic_block, Block, DBlock, Forgetful, Structure};
use crate::verdict::{Mode, Status};

/// One application of the partite lemma: `Z -> (Y)^X_r` among blocks
/// over `i0`, with `Z` the colimit of a line diagram of Hales–Jewett
/// dimension `N`.
#[derive(Debug, Clone)]
pub struct PartiteLemma {
    pub r: usize,
    pub hj: HjSearch,
    pub block: ColimitBlock,
    /// `Hom(X, Z)` among blocks over `i0`: the domain of the colorings.
    pub domain: Vec<FinMorphism>,
    transfer: TransferIndex<HjArrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaResolution {
    pub line: Line,
    pub leg: FinMorphism,
}

pub fn partite_lemma(i0: &FinMorphism, xb: &Block, yb: &Block, r: usize, config: &Config) -> Result<PartiteLemma> {
    if r == 0 {
        return Err(Error::Invalid("color count must be positive".into()));
    }
    check_inputs(i0, xb, yb)?;
    let monos = enumerate_i0_monos(xb, yb, i0)?;
    let hj = hj_witness_search(monos.len(), r, config.hj_nmax, Mode::Exhaustive, &config.limits)?;
    if hj.status() != Status::VerifiedExhaustively {
        return Err(Error::InternalInconsistency(
            "Hales–Jewett dimension was not verified".into(),
        ));
    }
    let alphabet = monos.len();
    let block = construct_with_monos(i0, xb, yb, monos, hj.n)?;
    let transfer = build_transfer_index(&HjCategory::new(alphabet, config.limits), &0, &1, &hj.n)?;
    if transfer.arrows != block.line_index.incidences {
        return Err(Error::InternalInconsistency(
            "transfer index differs from the line index".into(),
        ));
    }
    let domain = enumerate_i0_monos(xb, &block.block(), i0)?;
    Ok(PartiteLemma {
        r,
        hj,
        block,
        domain,
        transfer,
    })
}

impl PartiteLemma {
    pub fn z(&self) -> Block {
        self.block.block()
    }

    pub fn i0(&self) -> &FinMorphism {
        &self.block.input.i0
    }

    /// A line whose leg `f_ℓ` makes `f_ℓ ∘ P` monochromatic under `chi`.
    pub fn resolve(&self, chi: &Coloring<FinMorphism>) -> Result<LemmaResolution> {
        let cb = &self.block;
        let cat = *cb.cat();
        let limits = cat.limits;
        let (alphabet, n) = (cb.monos.len(), cb.line_index.n);
        let t = Transfer {
            index: &self.transfer,
            f_map: &cb.monos,
            hom_de: &cb.monos,
            legs: &cb.colimit.legs,
        };
        let lines = &self.transfer.g_objects;
        let out = transfer_resolve(
            &t,
            |a, b| cat.compose(a, b),
            chi,
            |cp| {
                // words are listed in rank order, so the assignment is indexed by rank
                Ok(monochromatic_line(&cp.assignment, alphabet, n, &limits)?
                    .and_then(|l| lines.iter().position(|g| *g == HjArrow::Line(l.clone()))))
            },
        )?;
        Ok(LemmaResolution {
            line: cb.line_index.lines[out.g].clone(),
            leg: out.leg,
        })
    }
}

impl Serialize for PartiteLemma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PartiteLemma", 3)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("hjSearch", &self.hj)?;
        st.serialize_field("colimitBlock", &self.block.summary())?;
        st.end()
    }
}

/// `Hom(X, Y)` among `D`-blocks: the `G(i)`-monomorphisms for some
/// `i ∈ Hom_D(K, L)`, sorted.
pub fn dblock_hom(x: &DBlock, y: &DBlock, g: &Forgetful) -> Result<Vec<FinMorphism>> {
    let mut out = BTreeSet::new();
    for i in g.d.hom(&x.d_object, &y.d_object)? {
        out.extend(enumerate_i0_monos(&x.block, &y.block, &g.arrow(&i))?);
    }
    Ok(out.into_iter().collect())
}

/// The partite construction over a base category `D` with the Ramsey
/// property, amplifying one partite lemma per arrow `K -> M`.
#[derive(Clone)]
pub struct PartiteConstruction {
    pub g: Forgetful,
    pub x: DBlock,
    pub y: DBlock,
    pub r: usize,
    /// The base witness `M -> (L)^K_r`.
    pub m: usize,
    pub d_verdict: Verdict<FinMorphism>,
    pub hom_lm: Vec<FinMorphism>,
    /// `Y_0` with anchor `ρ_0`, the sum of one copy of `Y` per `i ∈ Hom(L, M)`.
    pub y0: Block,
    /// The copy inclusions `h_i`, along `hom_lm`.
    pub h: Vec<FinMorphism>,
    /// The enumeration `j_k` of `Hom(K, M)`.
    pub hom_km: Vec<FinMorphism>,
    /// Step `k` builds `Y_{k+1}` from `Y_k` over `G(j_k)`.
    pub tower: Vec<PartiteLemma>,
    pub z: DBlock,
    /// Colorings are taken on `Hom(X, Z)` among `D`-blocks.
    pub domain: Vec<FinMorphism>,
    hom_xy: Vec<FinMorphism>,
    y0_monos: Vec<Vec<FinMorphism>>,
    solver: Arc<dyn DSolver + Send + Sync>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructionResolution {
    /// `g_k: Y_k -> Y_{k+1}` with the line it came from.
    pub chain: Vec<LemmaResolution>,
    /// `g = g_{n-1} ∘ ⋯ ∘ g_0`.
    pub g: FinMorphism,
    /// `χ′` along `hom_km`; `None` where no arrow of `Y_0` lies over `j_k`.
    pub chi_prime: Vec<Option<usize>>,
    pub i0: FinMorphism,
    /// `g ∘ h_{i0}`: an arrow `Y -> Z` whose composites with `Hom(X, Y)` share one color.
    pub embedding: FinMorphism,
    pub color: Option<usize>,
}

fn check_conditions(g: &Forgetful, arrows: &[&FinMorphism]) -> Result<()> {
    for i in arrows {
        if g.c.left_inverse(&g.arrow(i))?.is_none() {
            return Err(Error::PreconditionFailed(format!("G({i:?}) has no left inverse")));
        }
    }
    Ok(())
}

pub fn partite_construction(
    g: Forgetful,
    x: &DBlock,
    y: &DBlock,
    r: usize,
    solver: Arc<dyn DSolver + Send + Sync>,
    config: &Config,
) -> Result<PartiteConstruction> {
    if r == 0 {
        return Err(Error::Invalid("color count must be positive".into()));
    }
    if !is_monic_block(&x.block) {
        return Err(Error::PreconditionFailed("X is not a monic block".into()));
    }
    let c = g.c;
    if x.block.cat().kind != c.kind || *x.block.structure.language != *y.block.structure.language {
        return Err(Error::TypeMismatch(
            "X and Y must share a language over the ambient category".into(),
        ));
    }
    if solver.category().kind != g.d.kind {
        return Err(Error::TypeMismatch(
            "the solver works in a different base category".into(),
        ));
    }
    let (k, l) = (x.d_object, y.d_object);
    let (m, d_verdict) = solver.witness(k, l, r)?;
    let hom_lm = g.d.hom(&l, &m)?;
    let hom_km = g.d.hom(&k, &m)?;
    let hom_kl = g.d.hom(&k, &l)?;
    check_conditions(&g, &hom_lm.iter().chain(&hom_km).chain(&hom_kl).collect::<Vec<_>>())?;

    let (y0, h) = disjoint_sum(&g, &y.block, m, &hom_lm)?;
    let mut tower = Vec::with_capacity(hom_km.len());
    let mut current = y0.clone();
    for j in &hom_km {
        let lemma = partite_lemma(&g.arrow(j), &x.block, &current, r, config)?;
        current = lemma.z();
        tower.push(lemma);
    }
    let z = DBlock::new(current, m, &g)?;
    let domain = dblock_hom(x, &z, &g)?;
    let hom_xy = dblock_hom(x, y, &g)?;
    let y0_monos = hom_km
        .iter()
        .map(|j| enumerate_i0_monos(&x.block, &y0, &g.arrow(j)))
        .collect::<Result<_>>()?;
    Ok(PartiteConstruction {
        g,
        x: x.clone(),
        y: y.clone(),
        r,
        m,
        d_verdict,
        hom_lm,
        y0,
        h,
        hom_km,
        tower,
        z,
        domain,
        hom_xy,
        y0_monos,
        solver,
    })
}

/// Sum of copies of `Y` indexed by `Hom(L, M)`, anchored at `G(M)` by the
/// mediator of the legs `G(i) ∘ ρ`.
fn disjoint_sum(g: &Forgetful, y: &Block, m: usize, hom_lm: &[FinMorphism]) -> Result<(Block, Vec<FinMorphism>)> {
    let c = g.c;
    let names = (0..hom_lm.len()).map(|i| format!("i{i}")).collect();
    let diagram = Diagram::new(
        IndexCategory::discrete(names),
        c,
        vec![y.carrier(); hom_lm.len()],
        Vec::new(),
    )?;
    let sum = colimit(&diagram)?;
    let legs = hom_lm
        .iter()
        .map(|i| c.compose(&g.arrow(i), &y.anchor))
        .collect::<Result<Vec<_>>>()?;
    let rho0 = universal_morphism(
        &diagram,
        &sum,
        &Cocone {
            apex: g.object(m),
            legs,
        },
    )?;
    let ys = &y.structure;
    let lang = ys.language.clone();
    let rel = ys
        .rel
        .iter()
        .map(|members| {
            let mut set = BTreeSet::new();
            for h in &sum.legs {
                for eta in members {
                    set.insert(c.compose(h, eta)?);
                }
            }
            Ok(set)
        })
        .collect::<Result<Vec<_>>>()?;
    let func = mediated_functions(&diagram, &sum, ys, ys, 0, lang.functions.len());
    let y0 = Block::new(Structure::new(lang, sum.apex, rel, func)?, rho0)?;
    for (i, h) in hom_lm.iter().zip(&sum.legs) {
        if c.left_inverse(h)?.is_none() || !is_i0_homomorphism(h, y, &y0, &g.arrow(i))? {
            return Err(Error::InternalInconsistency(format!(
                "h_i for i = {i:?} is not a G(i)-monomorphism"
            )));
        }
    }
    Ok((y0, sum.legs))
}

impl PartiteConstruction {
    /// `Y_k`, with `Y_0` the sum and `Y_n = Z`.
    pub fn level(&self, k: usize) -> Block {
        match k {
            0 => self.y0.clone(),
            k => self.tower[k - 1].z(),
        }
    }

    pub fn solver(&self) -> &(dyn DSolver + Send + Sync) {
        self.solver.as_ref()
    }

    /// An arrow `Y -> Z` among `D`-blocks whose composites with every
    /// `X -> Y` receive one color under `chi`.
    pub fn resolve(&self, chi: &Coloring<FinMorphism>) -> Result<ConstructionResolution> {
        let c = self.g.c;
        let id_m = c.identity(&self.g.object(self.m));
        let mut outer = c.identity(&self.z.block.carrier());
        let mut chain = Vec::with_capacity(self.tower.len());
        for k in (0..self.tower.len()).rev() {
            let lemma = &self.tower[k];
            let colors = lemma
                .domain
                .iter()
                .map(|f| chi.color_or_err(&c.compose(&outer, f)?))
                .collect::<Result<Vec<_>>>()?;
            let chi_k = Coloring::new(lemma.domain.clone(), chi.r, colors)?;
            let step = lemma.resolve(&chi_k)?;
            let (lower, upper) = (self.level(k), self.level(k + 1));
            if c.left_inverse(&step.leg)?.is_none() || !is_i0_homomorphism(&step.leg, &lower, &upper, &id_m)? {
                return Err(Error::InternalInconsistency(format!(
                    "g_{k} is not an Id_M-monomorphism"
                )));
            }
            outer = c.compose(&outer, &step.leg)?;
            chain.push(step);
        }
        chain.reverse();
        let g_map = outer;

        let mut chi_prime = Vec::with_capacity(self.hom_km.len());
        for (j, monos) in self.hom_km.iter().zip(&self.y0_monos) {
            let mut color = None;
            for f in monos {
                let here = chi.color_or_err(&c.compose(&g_map, f)?)?;
                if *color.get_or_insert(here) != here {
                    return Err(Error::ChiPrimeIllDefined(format!(
                        "arrows over {j:?} receive colors {} and {here}",
                        color.unwrap()
                    )));
                }
            }
            chi_prime.push(color);
        }
        // an arrow with nothing over it may take any color
        let filled = chi_prime.iter().map(|c| c.unwrap_or(0)).collect();
        let chi_d = Coloring::new(self.hom_km.clone(), chi.r, filled)?;
        let (k, l) = (self.x.d_object, self.y.d_object);
        let i0 = self.solver.resolve(k, l, self.m, &chi_d)?;
        let pos = self
            .hom_lm
            .iter()
            .position(|i| *i == i0)
            .ok_or_else(|| Error::SolverFailed(format!("{i0:?} is not an arrow L -> M")))?;
        let embedding = c.compose(&g_map, &self.h[pos])?;

        if c.left_inverse(&embedding)?.is_none()
            || !is_i0_homomorphism(&embedding, &self.y.block, &self.z.block, &self.g.arrow(&i0))?
        {
            return Err(Error::InternalInconsistency(
                "the final embedding is not a block arrow".into(),
            ));
        }
        let mut color = None;
        for f in &self.hom_xy {
            let here = chi.color_or_err(&c.compose(&embedding, f)?)?;
            if *color.get_or_insert(here) != here {
                return Err(Error::InternalInconsistency(
                    "the final embedding is not monochromatic".into(),
                ));
            }
        }
        Ok(ConstructionResolution {
            chain,
            g: g_map,
            chi_prime,
            i0,
            embedding,
            color,
        })
    }
}

impl Serialize for PartiteConstruction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PartiteConstruction", 13)?;
        st.serialize_field("d", self.g.d.kind.name())?;
        st.serialize_field("c", self.g.c.kind.name())?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("dVerdict", &self.d_verdict)?;
        st.serialize_field("homLM", &self.hom_lm)?;
        st.serialize_field("y0", &self.y0)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("homKM", &self.hom_km)?;
        st.serialize_field("tower", &self.tower)?;
        st.serialize_field("z", &self.z)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fincat::{FinCat, FinKind};
    use crate::ramsey::{is_monochromatic, OrderedSolver};
    use crate::structlang::{Language, RelSymbol};

    fn lang(kind: FinKind, rels: &[(&str, usize)]) -> Arc<Language> {
        let rels = rels
            .iter()
            .map(|&(n, a)| RelSymbol {
                name: n.into(),
                arity: a,
            })
            .collect();
        Arc::new(Language::new(FinCat::new(kind), rels, vec![]).unwrap())
    }

    fn bare(l: &Arc<Language>, carrier: usize, anchor: FinMorphism) -> Block {
        Block::new(Structure::bare(l.clone(), carrier).unwrap(), anchor).unwrap()
    }

    /// Point anchored by the identity; pair with constant anchor.
    fn point_and_pair() -> (Block, Block) {
        let l = lang(FinKind::Fin, &[]);
        (
            bare(&l, 1, FinMorphism::identity_table(1)),
            bare(&l, 2, FinMorphism::constant(2, 1, 0)),
        )
    }

    fn all_colorings(domain: &[FinMorphism], r: usize) -> impl Iterator<Item = Coloring<FinMorphism>> + '_ {
        let n = domain.len();
        (0..r.pow(n as u32)).map(move |mut code| {
            let mut colors = vec![0; n];
            for slot in colors.iter_mut().rev() {
                *slot = code % r;
                code /= r;
            }
            Coloring::new(domain.to_vec(), r, colors).unwrap()
        })
    }

    #[test]
    fn lemma_resolves_every_coloring() {
        let (x, y) = point_and_pair();
        let lemma = partite_lemma(&FinMorphism::identity_table(1), &x, &y, 2, &Config::default()).unwrap();
        assert_eq!(lemma.hj.n, 2);
        assert_eq!(lemma.block.z.carrier, 4);
        assert_eq!(lemma.domain.len(), 4);
        let cat = FinCat::new(FinKind::Fin);
        for chi in all_colorings(&lemma.domain, 2) {
            let res = lemma.resolve(&chi).unwrap();
            let image: Vec<_> = lemma
                .block
                .monos
                .iter()
                .map(|p| cat.compose(&res.leg, p).unwrap())
                .collect();
            assert!(is_monochromatic(&chi, &image).unwrap());
        }
    }

    #[test]
    fn lemma_with_one_mono_or_one_color_is_flat() {
        let (x, y) = point_and_pair();
        let lemma = partite_lemma(&FinMorphism::identity_table(1), &x, &y, 1, &Config::default()).unwrap();
        assert_eq!(lemma.hj.n, 1);
        assert_eq!(lemma.block.z.carrier, 2);

        let l = lang(FinKind::Fin, &[]);
        let y1 = bare(&l, 2, FinMorphism::new(2, 2, vec![0, 1]).unwrap());
        let x1 = bare(&l, 1, FinMorphism::new(1, 2, vec![0]).unwrap());
        let i0 = FinMorphism::identity_table(2);
        let lemma = partite_lemma(&i0, &x1, &y1, 3, &Config::default()).unwrap();
        assert_eq!(lemma.block.monos.len(), 1);
        assert_eq!(lemma.hj.n, 1);
        assert_eq!(lemma.block.z.carrier, 2);
    }

    #[test]
    fn empty_alphabet_gives_a_copy_of_y() {
        // X over 0 but Y has nothing over 0
        let l = lang(FinKind::Fin, &[]);
        let x = bare(&l, 1, FinMorphism::new(1, 2, vec![0]).unwrap());
        let y = bare(&l, 1, FinMorphism::new(1, 2, vec![1]).unwrap());
        let lemma = partite_lemma(&FinMorphism::identity_table(2), &x, &y, 2, &Config::default()).unwrap();
        assert!(lemma.block.monos.is_empty());
        assert_eq!(lemma.hj.n, 1);
        assert_eq!(lemma.block.z.carrier, 1);
        assert!(lemma.domain.is_empty());
        let chi = Coloring::new(Vec::new(), 2, Vec::new()).unwrap();
        assert_eq!(lemma.resolve(&chi).unwrap().leg, FinMorphism::identity_table(1));
    }

    fn fin_le_solver() -> Arc<dyn DSolver + Send + Sync> {
        Arc::new(OrderedSolver::new(FinCat::new(FinKind::FinLe), 6, None, 1 << 20).unwrap())
    }

    fn fin_forgetful() -> Forgetful {
        Forgetful::new(FinCat::new(FinKind::FinLe), FinCat::new(FinKind::Fin)).unwrap()
    }

    fn check_random(pc: &PartiteConstruction, trials: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = pc.g.c;
        for _ in 0..trials {
            let chi = Coloring::random(pc.domain.clone(), pc.r, &mut rng).unwrap();
            let res = pc.resolve(&chi).unwrap();
            let image: Vec<_> = pc
                .hom_xy
                .iter()
                .map(|f| c.compose(&res.embedding, f).unwrap())
                .collect();
            assert!(is_monochromatic(&chi, &image).unwrap());
        }
    }

    #[test]
    fn degenerate_singleton_tower() {
        let g = fin_forgetful();
        let l = lang(FinKind::Fin, &[]);
        let p = DBlock::new(bare(&l, 1, FinMorphism::identity_table(1)), 1, &g).unwrap();
        let pc = partite_construction(g, &p, &p, 2, fin_le_solver(), &Config::default()).unwrap();
        assert_eq!(pc.m, 1);
        assert_eq!(pc.tower.len(), 1);
        assert_eq!(pc.z.block.carrier(), 1);
        let chi = Coloring::new(pc.domain.clone(), 2, vec![1]).unwrap();
        let res = pc.resolve(&chi).unwrap();
        assert_eq!(res.embedding, FinMorphism::identity_table(1));
        assert_eq!(res.color, Some(1));
    }

    #[test]
    fn pair_over_a_point_runs_a_nontrivial_lemma() {
        let g = fin_forgetful();
        let l = lang(FinKind::Fin, &[]);
        let x = DBlock::new(bare(&l, 1, FinMorphism::identity_table(1)), 1, &g).unwrap();
        let y = DBlock::new(bare(&l, 2, FinMorphism::constant(2, 1, 0)), 1, &g).unwrap();
        let pc = partite_construction(g, &x, &y, 2, fin_le_solver(), &Config::default()).unwrap();
        assert_eq!(pc.m, 1);
        assert_eq!(pc.tower[0].hj.n, 2);
        assert_eq!(pc.z.block.carrier(), 4);
        for chi in all_colorings(&pc.domain, 2) {
            let res = pc.resolve(&chi).unwrap();
            let c = pc.g.c;
            let image: Vec<_> = pc
                .hom_xy
                .iter()
                .map(|f| c.compose(&res.embedding, f).unwrap())
                .collect();
            assert!(is_monochromatic(&chi, &image).unwrap());
        }
    }

    #[test]
    fn one_color_pipeline_over_orders() {
        let g = fin_forgetful();
        let l = lang(FinKind::Fin, &[]);
        let x = DBlock::new(bare(&l, 1, FinMorphism::identity_table(1)), 1, &g).unwrap();
        let y = DBlock::new(bare(&l, 2, FinMorphism::identity_table(2)), 2, &g).unwrap();
        let pc = partite_construction(g, &x, &y, 1, fin_le_solver(), &Config::default()).unwrap();
        assert_eq!(pc.m, 2);
        assert_eq!(pc.hom_km.len(), 2);
        check_random(&pc, 20, 1);
    }

    #[test]
    fn unary_relation_pipeline_completes() {
        // K a related point; M = {0, 1} with only 1 related
        let g = fin_forgetful();
        let l = lang(FinKind::Fin, &[("R", 1)]);
        let unary = |c: usize, members: &[usize]| {
            let set: BTreeSet<_> = members
                .iter()
                .map(|&m| FinMorphism::new(1, c, vec![m]).unwrap())
                .collect();
            Structure::new(l.clone(), c, vec![set], vec![]).unwrap()
        };
        let x = DBlock::new(Block::identity(unary(1, &[0])), 1, &g).unwrap();
        let y = DBlock::new(Block::identity(unary(2, &[1])), 2, &g).unwrap();
        let pc = partite_construction(g, &x, &y, 2, fin_le_solver(), &Config::default()).unwrap();
        assert_eq!(pc.m, 3);
        let alphabets: Vec<usize> = pc.tower.iter().map(|t| t.block.monos.len()).collect();
        assert_eq!(alphabets, vec![0, 1, 2]);
        for t in &pc.tower {
            assert!(crate::colimit_block::verify_homomorphism_legs(&t.block).unwrap());
        }
        check_random(&pc, 200, 7);
    }

    #[test]
    fn finop_pipeline_over_rigid_surjections() {
        let g = Forgetful::new(FinCat::new(FinKind::FinLeStarOp), FinCat::new(FinKind::FinOp)).unwrap();
        let l = lang(FinKind::FinOp, &[]);
        let x = DBlock::new(bare(&l, 2, FinMorphism::identity_table(2)), 2, &g).unwrap();
        let y = DBlock::new(bare(&l, 3, FinMorphism::new(2, 3, vec![0, 1]).unwrap()), 2, &g).unwrap();
        let solver = Arc::new(OrderedSolver::new(g.d, 4, None, 1 << 20).unwrap());
        let pc = partite_construction(g, &x, &y, 2, solver, &Config::default()).unwrap();
        assert_eq!(pc.m, 2);
        assert_eq!(pc.tower.len(), 1);
        assert_eq!(pc.tower[0].block.monos.len(), 2);
        check_random(&pc, 100, 3);
    }

    #[test]
    fn y0_is_a_sum_of_copies() {
        let g = fin_forgetful();
        let l = lang(FinKind::Fin, &[]);
        let y = bare(&l, 2, FinMorphism::identity_table(2));
        let hom_lm = g.d.hom(&2, &3).unwrap();
        let (y0, h) = disjoint_sum(&g, &y, 3, &hom_lm).unwrap();
        assert_eq!(y0.carrier(), 6);
        for (i, hi) in hom_lm.iter().zip(&h) {
            assert_eq!(y0.anchor.after(hi).unwrap(), *i);
        }
        let images: BTreeSet<usize> = h.iter().flat_map(|hi| hi.table.clone()).collect();
        assert_eq!(images.len(), 6);
    }
}
