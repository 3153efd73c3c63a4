use std::collections::BTreeSet;
use std::sync::Arc;

use partite_core::colimit_block::{construct_colimit_block, relation_reflection, verify_homomorphism_legs};
use partite_core::fincat::{
    colimit, rigid_surjection_count, universal_morphism, Category, Cocone, Diagram, FinCat, FinKind, FinMorphism,
    IndexCategory,
};
use partite_core::lines::{monochromatic_line, tuple_rank};
use partite_core::ramsey::{find_witness, is_monochromatic, is_ramsey_witness, Coloring};
use partite_core::structlang::{is_homomorphism, Block, Language, RelSymbol, Structure};
use partite_core::verdict::{Mode, Status};
use partite_core::Limits;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = FinKind> {
    prop_oneof![
        Just(FinKind::Fin),
        Just(FinKind::FinOp),
        Just(FinKind::FinLe),
        Just(FinKind::FinLeStarOp),
    ]
}

/// A random arrow of `Hom(a, b)` picked by rank, if the hom-set is inhabited.
fn pick(cat: &FinCat, a: usize, b: usize, seed: usize) -> Option<FinMorphism> {
    let n = cat.hom_count(a, b);
    (n > 0).then(|| cat.unrank(a, b, seed % n as usize).unwrap())
}

/// Fin or FinOp diagram on a source/sink split of `sizes`, arrows given as
/// `(source, sink, table seed)`.
fn diagram(kind: FinKind, sizes: &[usize], sources: usize, arrows: &[(usize, usize, usize)]) -> Diagram {
    let cat = FinCat::new(kind);
    let mut index = IndexCategory::new((0..sizes.len()).map(|i| format!("o{i}")).collect());
    let mut images = Vec::new();
    for (k, &(s, t, seed)) in arrows.iter().enumerate() {
        let (s, t) = (s % sources, sources + t % (sizes.len() - sources));
        if let Some(f) = pick(&cat, sizes[s], sizes[t], seed) {
            index.add_arrow(format!("a{k}"), s, t);
            images.push(f);
        }
    }
    Diagram::new(index, cat, sizes.to_vec(), images).unwrap()
}

fn diagram_input() -> impl Strategy<Value = (Vec<usize>, usize, Vec<(usize, usize, usize)>)> {
    (prop::collection::vec(0usize..=3, 2..=4), 1usize..=3).prop_flat_map(|(sizes, sources)| {
        let sources = sources.min(sizes.len() - 1);
        (
            Just(sizes),
            Just(sources),
            prop::collection::vec((0usize..4, 0usize..4, 0usize..10_000), 0..=4),
        )
    })
}

fn unary(c: usize, members: &BTreeSet<usize>) -> Structure {
    let rel = RelSymbol {
        name: "R".into(),
        arity: 1,
    };
    let lang = Arc::new(Language::new(FinCat::new(FinKind::Fin), vec![rel], vec![]).unwrap());
    let set = members
        .iter()
        .map(|&m| FinMorphism::new(1, c, vec![m]).unwrap())
        .collect();
    Structure::new(lang, c, vec![set], vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_and_unital(
        k in kind(),
        sizes in prop::array::uniform4(0usize..=5),
        seeds in prop::array::uniform3(0usize..100_000),
    ) {
        let cat = FinCat::new(k);
        let [a, b, c, d] = sizes;
        let (Some(f), Some(g), Some(h)) =
            (pick(&cat, a, b, seeds[0]), pick(&cat, b, c, seeds[1]), pick(&cat, c, d, seeds[2]))
        else {
            return Ok(());
        };
        let gf = cat.compose(&g, &f).unwrap();
        prop_assert!(cat.contains(&gf));
        prop_assert_eq!(cat.compose(&h, &gf).unwrap(), cat.compose(&cat.compose(&h, &g).unwrap(), &f).unwrap());
        prop_assert_eq!(cat.compose(&f, &cat.identity(&a)).unwrap(), f.clone());
        prop_assert_eq!(cat.compose(&cat.identity(&b), &f).unwrap(), f);
    }

    #[test]
    fn rank_and_unrank_are_inverse(k in kind(), a in 0usize..=4, b in 0usize..=4, seed in 0usize..100_000) {
        let cat = FinCat::new(k);
        if let Some(f) = pick(&cat, a, b, seed) {
            prop_assert_eq!(cat.unrank(a, b, cat.rank(&f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn rigid_surjections_match_the_closed_count(n in 0usize..=6, k in 0usize..=6) {
        let cat = FinCat::new(FinKind::FinLeStarOp);
        let hom = cat.hom(&k, &n).unwrap();
        prop_assert_eq!(hom.len() as u128, rigid_surjection_count(n, k));
        prop_assert!(hom.iter().all(FinMorphism::is_rigid_surjection));
    }

    #[test]
    fn every_cocone_factors_uniquely_through_the_colimit(
        (sizes, sources, arrows) in diagram_input(),
        apex in 1usize..=3,
        values in prop::collection::vec(0usize..3, 12),
    ) {
        let d = diagram(FinKind::Fin, &sizes, sources, &arrows);
        let colim = colimit(&d).unwrap();
        prop_assert!(colim.is_cocone_over(&d));
        // a cocone is any map out of the apex composed with the legs
        let m = FinMorphism::new(colim.apex, apex, (0..colim.apex).map(|z| values[z % 12] % apex).collect()).unwrap();
        let legs = colim.legs.iter().map(|l| d.category.compose(&m, l).unwrap()).collect();
        let other = Cocone { apex, legs };
        prop_assert!(other.is_cocone_over(&d));
        prop_assert_eq!(universal_morphism(&d, &colim, &other).unwrap(), m);
    }

    #[test]
    fn finop_colimit_counts_compatible_tuples((sizes, sources, arrows) in diagram_input()) {
        let d = diagram(FinKind::FinOp, &sizes, sources, &arrows);
        let colim = colimit(&d).unwrap();
        prop_assert!(colim.is_cocone_over(&d));
        let total: usize = sizes.iter().product();
        let compatible = (0..total)
            .filter(|&code| {
                let mut c = code;
                let mut x = vec![0; sizes.len()];
                for (slot, &n) in x.iter_mut().zip(&sizes).rev() {
                    *slot = c % n;
                    c /= n;
                }
                d.index.arrows().iter().zip(&d.arrows).all(|(a, f)| x[a.src] == f.table[x[a.dst]])
            })
            .count();
        prop_assert_eq!(colim.apex, compatible);
    }

    #[test]
    fn found_lines_are_monochromatic(colors in prop::collection::vec(0usize..2, 9)) {
        // HJ(3, 2) is out of reach, but any line the search returns must be genuine
        let found = monochromatic_line(&colors, 3, 2, &Limits::default()).unwrap();
        if let Some(line) = found {
            let seen: BTreeSet<usize> = line.points(3).iter().map(|t| colors[tuple_rank(3, t)]).collect();
            prop_assert_eq!(seen.len(), 1);
        }
    }

    #[test]
    fn witnesses_are_monochromatic(colors in prop::collection::vec(0usize..2, 10)) {
        let cat = FinCat::new(FinKind::FinLe);
        let chi = Coloring::new(cat.hom(&2, &5).unwrap(), 2, colors).unwrap();
        if let Some(g) = find_witness(&cat, &2, &3, &5, &chi).unwrap() {
            let image: Vec<_> = cat.hom(&2, &3).unwrap().iter().map(|f| cat.compose(&g, f).unwrap()).collect();
            prop_assert!(is_monochromatic(&chi, &image).unwrap());
        }
    }

    #[test]
    fn sampling_never_contradicts_exhaustion(c in 2usize..=5, seed in any::<u64>()) {
        let cat = FinCat::new(FinKind::FinLe);
        let exact = is_ramsey_witness(&cat, &1, &2, &c, 2, Mode::Exhaustive, 1 << 12).unwrap();
        let sampled = is_ramsey_witness(&cat, &1, &2, &c, 2, Mode::Sampled { trials: 50, seed }, 0).unwrap();
        prop_assert_ne!(sampled.status, Status::VerifiedExhaustively);
        if sampled.status == Status::Refuted {
            prop_assert_eq!(exact.status, Status::Refuted);
        }
    }

    #[test]
    fn transport_along_a_permutation_is_an_isomorphism(
        members in prop::collection::btree_set(0usize..5, 0..5),
        perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let x = unary(5, &members);
        let beta = FinMorphism::new(5, 5, perm.clone()).unwrap();
        let mut inv = vec![0; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let y = x.transport(&beta).unwrap();
        prop_assert!(is_homomorphism(&beta, &x, &y).unwrap());
        prop_assert!(is_homomorphism(&FinMorphism::new(5, 5, inv).unwrap(), &y, &x).unwrap());
    }

    #[test]
    fn colimit_blocks_reflect_unary_relations(
        related_x in any::<bool>(),
        y_members in prop::collection::btree_set(0usize..3, 0..=3),
        n in 1usize..=2,
    ) {
        let x = unary(1, &if related_x { BTreeSet::from([0]) } else { BTreeSet::new() });
        let y = unary(3, &y_members);
        let i0 = FinMorphism::new(1, 1, vec![0]).unwrap();
        let xb = Block::new(x, i0.clone()).unwrap();
        let yb = Block::new(y, FinMorphism::new(3, 1, vec![0; 3]).unwrap()).unwrap();
        let cb = construct_colimit_block(&i0, &xb, &yb, n).unwrap();
        cb.check_invariants().unwrap();
        prop_assert!(verify_homomorphism_legs(&cb).unwrap());
        prop_assert_eq!(relation_reflection(&cb).unwrap().failures, 0);
    }
}
