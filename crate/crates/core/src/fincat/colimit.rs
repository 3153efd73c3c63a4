use std::collections::{HashMap, VecDeque};

use super::union_find::UnionFind;
use super::{Cocone, Diagram, FinCat, FinKind, FinMorphism, IndexCategory};
use crate::config::Limits;
use crate::error::{Error, Result};

/// Colimit in `Fin` or `Fin^op`, whichever the diagram lives in.
pub fn colimit(d: &Diagram) -> Result<Cocone> {
    match d.category.kind {
        FinKind::Fin => colimit_fin(d),
        FinKind::FinOp => colimit_finop(d),
        other => Err(Error::Unsupported(format!(
            "colimits are computed only in Fin and FinOp, not {}",
            other.name()
        ))),
    }
}

/// Quotient of the disjoint sum by the equivalence generated by
/// `(s, S) ~ (F(f)(s), T)` for each index arrow `f: S -> T`.
///
/// Classes are labeled in order of their smallest `(object position, element)`.
pub fn colimit_fin(d: &Diagram) -> Result<Cocone> {
    if d.category.kind != FinKind::Fin {
        return Err(Error::TypeMismatch("colimit_fin needs a Fin diagram".into()));
    }
    let limits = &d.category.limits;
    let offsets = offsets(&d.objects);
    let total = *offsets.last().unwrap();
    if total > limits.max_product {
        return Err(Error::bound("disjoint sum", total, limits.max_product));
    }
    let mut uf = UnionFind::new(total);
    for (src, dst, f) in d.arrow_images() {
        for (s, &t) in f.table.iter().enumerate() {
            uf.union(offsets[src] + s, offsets[dst] + t);
        }
    }
    let (labels, apex) = uf.canonical_labels();
    limits.check_apex("colimit apex", apex)?;
    let legs = d
        .objects
        .iter()
        .enumerate()
        .map(|(s, &size)| FinMorphism {
            source: size,
            target: apex,
            table: labels[offsets[s]..offsets[s] + size].to_vec(),
        })
        .collect();
    Ok(Cocone { apex, legs })
}

/// Limit cone in `Fin`: the compatible tuples and their projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: usize,
    pub projections: Vec<FinMorphism>,
}

/// Limit in `Fin` of a `Fin` diagram: tuples with `F(f)(x_S) = x_T`, in
/// lexicographic order.
pub fn limit_fin(d: &Diagram) -> Result<Cone> {
    if d.category.kind != FinKind::Fin {
        return Err(Error::TypeMismatch("limit_fin needs a Fin diagram".into()));
    }
    let constraints: Vec<Constraint> = d
        .arrow_images()
        .map(|(src, dst, f)| Constraint {
            from: src,
            to: dst,
            table: &f.table,
        })
        .collect();
    let tuples = compatible_tuples(&d.objects, &constraints, &d.category.limits)?;
    Ok(Cone {
        apex: tuples.len(),
        projections: projections(&d.objects, &tuples),
    })
}

/// Colimit in `Fin^op`, i.e. the limit in `Fin` of the reversed diagram; legs
/// are the projections, stored in the reversed direction.
pub fn colimit_finop(d: &Diagram) -> Result<Cocone> {
    if d.category.kind != FinKind::FinOp {
        return Err(Error::TypeMismatch("colimit_finop needs a FinOp diagram".into()));
    }
    // an arrow f: S -> T is stored as a function F(T) -> F(S)
    let constraints: Vec<Constraint> = d
        .arrow_images()
        .map(|(src, dst, f)| Constraint {
            from: dst,
            to: src,
            table: &f.table,
        })
        .collect();
    let tuples = compatible_tuples(&d.objects, &constraints, &d.category.limits)?;
    Ok(Cocone {
        apex: tuples.len(),
        legs: projections(&d.objects, &tuples),
    })
}

impl Diagram {
    /// The same tables viewed as a `Fin` diagram over the opposite index
    /// category. Only defined for `FinOp` diagrams.
    pub fn reversed(&self) -> Result<Diagram> {
        if self.category.kind != FinKind::FinOp {
            return Err(Error::TypeMismatch("only FinOp diagrams reverse into Fin".into()));
        }
        let mut op = IndexCategory::new(self.index.objects().to_vec());
        for a in self.index.arrows() {
            op.add_arrow(a.name.clone(), a.dst, a.src);
        }
        for (a, b, c) in self.index.composites() {
            op.add_composite(b, a, c);
        }
        Diagram::new(
            op,
            FinCat::with_limits(FinKind::Fin, self.category.limits),
            self.objects.clone(),
            self.arrows.clone(),
        )
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

fn projections(sizes: &[usize], tuples: &[Vec<usize>]) -> Vec<FinMorphism> {
    sizes
        .iter()
        .enumerate()
        .map(|(s, &size)| FinMorphism {
            source: tuples.len(),
            target: size,
            table: tuples.iter().map(|t| t[s]).collect(),
        })
        .collect()
}

struct Constraint<'a> {
    from: usize,
    to: usize,
    table: &'a [usize],
}

/// All tuples `x` with `x_to = table[x_from]` for every constraint, sorted.
///
/// Backtracking with arc consistency; the node count is capped by
/// `max_product` and the solution count by `max_apex`.
fn compatible_tuples(sizes: &[usize], constraints: &[Constraint], limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let domains: Vec<Vec<bool>> = sizes.iter().map(|&n| vec![true; n]).collect();
    let mut out = Vec::new();
    let mut nodes = 0usize;
    search(domains, constraints, limits, &mut nodes, &mut out)?;
    out.sort();
    Ok(out)
}

fn propagate(domains: &mut [Vec<bool>], constraints: &[Constraint]) -> bool {
    loop {
        let mut changed = false;
        for c in constraints {
            let mut hit = vec![false; domains[c.to].len()];
            for (a, &b) in c.table.iter().enumerate() {
                if domains[c.from][a] {
                    if domains[c.to][b] {
                        hit[b] = true;
                    } else {
                        domains[c.from][a] = false;
                        changed = true;
                    }
                }
            }
            for (b, keep) in hit.into_iter().enumerate() {
                if domains[c.to][b] && !keep {
                    domains[c.to][b] = false;
                    changed = true;
                }
            }
        }
        if domains.iter().any(|d| !d.iter().any(|&x| x)) {
            return false;
        }
        if !changed {
            return true;
        }
    }
}

fn search(
    mut domains: Vec<Vec<bool>>,
    constraints: &[Constraint],
    limits: &Limits,
    nodes: &mut usize,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    *nodes += 1;
    if *nodes > limits.max_product {
        return Err(Error::bound("limit search nodes", *nodes, limits.max_product));
    }
    if !propagate(&mut domains, constraints) {
        return Ok(());
    }
    let branch = domains
        .iter()
        .enumerate()
        .map(|(i, d)| (d.iter().filter(|&&x| x).count(), i))
        .filter(|&(n, _)| n > 1)
        .min();
    match branch {
        None => {
            out.push(domains.iter().map(|d| d.iter().position(|&x| x).unwrap()).collect());
            if out.len() > limits.max_apex {
                return Err(Error::bound("limit apex", out.len(), limits.max_apex));
            }
        }
        Some((_, var)) => {
            let values: Vec<usize> = (0..domains[var].len()).filter(|&v| domains[var][v]).collect();
            for v in values {
                let mut next = domains.clone();
                next[var].iter_mut().enumerate().for_each(|(i, x)| *x = i == v);
                search(next, constraints, limits, nodes, out)?;
            }
        }
    }
    Ok(())
}

/// The unique `m` with `m ∘ colim.leg(S) = other.leg(S)` for all `S`.
pub fn universal_morphism(d: &Diagram, colim: &Cocone, other: &Cocone) -> Result<FinMorphism> {
    other.validate_over(d)?;
    let cat = &d.category;
    let m = match cat.kind {
        FinKind::Fin => {
            let mut table = vec![usize::MAX; colim.apex];
            for (leg, oleg) in colim.legs.iter().zip(&other.legs) {
                for (s, &z) in leg.table.iter().enumerate() {
                    let want = oleg.table[s];
                    if table[z] != usize::MAX && table[z] != want {
                        return Err(Error::NoMediator(format!(
                            "apex element {z} is forced to both {} and {want}",
                            table[z]
                        )));
                    }
                    table[z] = want;
                }
            }
            if let Some(z) = table.iter().position(|&v| v == usize::MAX) {
                return Err(Error::NoMediator(format!(
                    "apex element {z} is outside every leg image, mediator not unique"
                )));
            }
            FinMorphism {
                source: colim.apex,
                target: other.apex,
                table,
            }
        }
        FinKind::FinOp => {
            let mut by_tuple: HashMap<Vec<usize>, usize> = HashMap::with_capacity(colim.apex);
            for z in 0..colim.apex {
                let t: Vec<usize> = colim.legs.iter().map(|l| l.table[z]).collect();
                if by_tuple.insert(t, z).is_some() {
                    return Err(Error::NoMediator(format!(
                        "apex element {z} duplicates another projection tuple, mediator not unique"
                    )));
                }
            }
            let mut table = Vec::with_capacity(other.apex);
            for w in 0..other.apex {
                let t: Vec<usize> = other.legs.iter().map(|l| l.table[w]).collect();
                let z = by_tuple
                    .get(&t)
                    .ok_or_else(|| Error::NoMediator(format!("tuple {t:?} is missing from the limit")))?;
                table.push(*z);
            }
            FinMorphism {
                source: other.apex,
                target: colim.apex,
                table,
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "mediators are computed only in Fin and FinOp, not {}",
                other.name()
            )))
        }
    };
    for (leg, oleg) in colim.legs.iter().zip(&other.legs) {
        if super::Category::compose(cat, &m, leg)? != *oleg {
            return Err(Error::InternalInconsistency("mediator misses a leg equation".into()));
        }
    }
    Ok(m)
}

/// Checks that every cocone over `d` with apex size at most `apex_bound` has
/// exactly one mediator out of `colim`.
///
/// Cocones are enumerated factor by factor: in `Fin` a cocone is a free choice
/// of value per connected component of the element graph, and the number of
/// mediators is a product over apex elements of a count depending only on the
/// components meeting that element's fibre. In `Fin^op` a cone is a free
/// choice of compatible tuple per apex element, and the mediator count is a
/// product over those elements. Components and compatible tuples are computed
/// here by graph search and brute-force product filtering, independently of
/// the colimit construction.
pub fn verify_colimit(d: &Diagram, colim: &Cocone, apex_bound: usize) -> Result<bool> {
    if !colim.is_cocone_over(d) {
        return Ok(false);
    }
    let limits = &d.category.limits;
    match d.category.kind {
        FinKind::Fin => {
            let offsets = offsets(&d.objects);
            let total = *offsets.last().unwrap();
            if total > limits.max_product {
                return Err(Error::bound("disjoint sum", total, limits.max_product));
            }
            let component = element_components(d, &offsets);
            let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); colim.apex];
            for (s, leg) in colim.legs.iter().enumerate() {
                for (x, &z) in leg.table.iter().enumerate() {
                    fibres[z].push(component[offsets[s] + x]);
                }
            }
            for comps in fibres.iter_mut() {
                comps.sort_unstable();
                comps.dedup();
            }
            let mut budget = limits.max_colorings;
            for w in 0..=apex_bound {
                if w == 0 {
                    // a cocone into the empty set exists only for an empty sum,
                    // and then the mediator out of the apex is unique iff it is empty
                    if total == 0 && colim.apex != 0 {
                        return Ok(false);
                    }
                    continue;
                }
                for comps in &fibres {
                    if comps.is_empty() {
                        // unconstrained apex element: w candidate values
                        if w != 1 {
                            return Ok(false);
                        }
                        continue;
                    }
                    let count = (w as u128).saturating_pow(comps.len() as u32);
                    if count > budget as u128 {
                        return Err(Error::bound("cocone enumeration", count, limits.max_colorings));
                    }
                    budget -= count as usize;
                    let mut assign = vec![0usize; comps.len()];
                    loop {
                        // the fibre has a mediator value iff all its components agree
                        if assign.iter().any(|&v| v != assign[0]) {
                            return Ok(false);
                        }
                        if !odometer(&mut assign, w) {
                            break;
                        }
                    }
                }
            }
            Ok(true)
        }
        FinKind::FinOp => {
            if apex_bound == 0 {
                return Ok(true);
            }
            let tuples = brute_force_compatible(d)?;
            let mut hits: HashMap<Vec<usize>, usize> = HashMap::new();
            for z in 0..colim.apex {
                let t: Vec<usize> = colim.legs.iter().map(|l| l.table[z]).collect();
                *hits.entry(t).or_default() += 1;
            }
            Ok(tuples.iter().all(|t| hits.get(t) == Some(&1)))
        }
        other => Err(Error::Unsupported(format!(
            "colimit verification only in Fin and FinOp, not {}",
            other.name()
        ))),
    }
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Connected components of the element graph, by breadth-first search.
fn element_components(d: &Diagram, offsets: &[usize]) -> Vec<usize> {
    let total = *offsets.last().unwrap();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (src, dst, f) in d.arrow_images() {
        for (s, &t) in f.table.iter().enumerate() {
            let (a, b) = (offsets[src] + s, offsets[dst] + t);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut comp = vec![usize::MAX; total];
    let mut next = 0;
    for start in 0..total {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = next;
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    comp
}

fn brute_force_compatible(d: &Diagram) -> Result<Vec<Vec<usize>>> {
    let limits = &d.category.limits;
    let product = d.objects.iter().fold(1u128, |acc, &n| acc.saturating_mul(n as u128));
    if product > limits.max_product as u128 {
        return Err(Error::bound("product", product, limits.max_product));
    }
    if d.objects.contains(&0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut t = vec![0usize; d.objects.len()];
    loop {
        let ok = d.arrow_images().all(|(src, dst, f)| f.table[t[dst]] == t[src]);
        if ok {
            out.push(t.clone());
        }
        let mut i = t.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            t[i] += 1;
            if t[i] < d.objects[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::Category;

    fn discrete(kind: FinKind, sizes: &[usize]) -> Diagram {
        let names = (0..sizes.len()).map(|i| format!("S{i}")).collect();
        Diagram::new(
            IndexCategory::discrete(names),
            FinCat::new(kind),
            sizes.to_vec(),
            vec![],
        )
        .unwrap()
    }

    fn pair(kind: FinKind, s: usize, t: usize, f: Vec<usize>, g: Vec<usize>) -> Diagram {
        let cat = FinCat::new(kind);
        let mut j = IndexCategory::new(vec!["S".into(), "T".into()]);
        j.add_arrow("f", 0, 1);
        j.add_arrow("g", 0, 1);
        let (a, b) = cat.stored_shape(s, t);
        Diagram::new(
            j,
            cat,
            vec![s, t],
            vec![FinMorphism::new(a, b, f).unwrap(), FinMorphism::new(a, b, g).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn coproduct_of_two() {
        let d = discrete(FinKind::Fin, &[2, 3]);
        let c = colimit_fin(&d).unwrap();
        assert_eq!(c.apex, 5);
        assert!(c.legs.iter().all(|l| l.is_injective()));
        assert!(verify_colimit(&d, &c, 4).unwrap());
    }

    #[test]
    fn coequalizer_collapses_everything() {
        // union-find oracle: 0~1 (via f,g on 0), 1~2 (via f,g on 1) and S-elements join T
        let d = pair(FinKind::Fin, 2, 3, vec![0, 1], vec![1, 2]);
        let c = colimit_fin(&d).unwrap();
        assert_eq!(c.apex, 1);
        assert!(verify_colimit(&d, &c, 4).unwrap());
    }

    #[test]
    fn empty_index_gives_initial_object() {
        let d = discrete(FinKind::Fin, &[]);
        let c = colimit_fin(&d).unwrap();
        assert_eq!(c.apex, 0);
        assert!(verify_colimit(&d, &c, 3).unwrap());
        let dop = discrete(FinKind::FinOp, &[]);
        // terminal object of Fin: the empty product
        assert_eq!(colimit_finop(&dop).unwrap().apex, 1);
    }

    #[test]
    fn finop_product_and_equalizers() {
        let d = discrete(FinKind::FinOp, &[2, 3]);
        let c = colimit_finop(&d).unwrap();
        assert_eq!(c.apex, 6);
        assert!(verify_colimit(&d, &c, 3).unwrap());

        let same = pair(FinKind::FinOp, 2, 2, vec![0, 1], vec![0, 1]);
        assert_eq!(colimit_finop(&same).unwrap().apex, 2);

        // filter oracle: s_S = s_T and s_S = 1 leaves only (1, 1)
        let eq = pair(FinKind::FinOp, 2, 2, vec![0, 1], vec![1, 1]);
        let c = colimit_finop(&eq).unwrap();
        assert_eq!(c.apex, 1);
        assert_eq!(c.legs[0].table, vec![1]);
        assert!(verify_colimit(&eq, &c, 3).unwrap());
    }

    #[test]
    fn finop_matches_reversed_limit() {
        let eq = pair(FinKind::FinOp, 3, 2, vec![0, 1], vec![1, 1]);
        let c = colimit_finop(&eq).unwrap();
        let cone = limit_fin(&eq.reversed().unwrap()).unwrap();
        assert_eq!(cone.apex, c.apex);
        assert_eq!(cone.projections, c.legs);
    }

    #[test]
    fn mediator_into_itself_is_identity() {
        let d = pair(FinKind::Fin, 2, 3, vec![0, 1], vec![0, 2]);
        let c = colimit_fin(&d).unwrap();
        let m = universal_morphism(&d, &c, &c).unwrap();
        assert_eq!(m, FinMorphism::identity_table(c.apex));
    }

    #[test]
    fn mediator_to_a_point_is_constant() {
        let d = discrete(FinKind::Fin, &[2, 3]);
        let c = colimit_fin(&d).unwrap();
        let point = Cocone {
            apex: 1,
            legs: vec![FinMorphism::constant(2, 1, 0), FinMorphism::constant(3, 1, 0)],
        };
        assert_eq!(
            universal_morphism(&d, &c, &point).unwrap(),
            FinMorphism::constant(5, 1, 0)
        );
    }

    #[test]
    fn mediator_determined_classwise() {
        // f: 0->0, 1->1 ; g: 0->0, 1->2 identifies T's 1 and 2
        let d = pair(FinKind::Fin, 2, 3, vec![0, 1], vec![0, 2]);
        let c = colimit_fin(&d).unwrap();
        assert_eq!(c.apex, 2);
        let other = Cocone {
            apex: 2,
            legs: vec![
                FinMorphism::new(2, 2, vec![1, 0]).unwrap(),
                FinMorphism::new(3, 2, vec![1, 0, 0]).unwrap(),
            ],
        };
        let m = universal_morphism(&d, &c, &other).unwrap();
        for (leg, oleg) in c.legs.iter().zip(&other.legs) {
            assert_eq!(m.after(leg).unwrap(), *oleg);
        }
    }

    #[test]
    fn mediator_rejects_non_cocones() {
        let d = pair(FinKind::Fin, 2, 3, vec![0, 1], vec![0, 2]);
        let c = colimit_fin(&d).unwrap();
        let bogus = Cocone {
            apex: 3,
            legs: vec![
                FinMorphism::new(2, 3, vec![0, 1]).unwrap(),
                FinMorphism::identity_table(3),
            ],
        };
        assert_eq!(universal_morphism(&d, &c, &bogus).unwrap_err().code(), "NotACocone");
    }

    #[test]
    fn redundant_apex_element_is_not_universal() {
        let d = discrete(FinKind::Fin, &[2, 1]);
        let c = colimit_fin(&d).unwrap();
        let padded = Cocone {
            apex: c.apex + 1,
            legs: c
                .legs
                .iter()
                .map(|l| FinMorphism {
                    target: l.target + 1,
                    ..l.clone()
                })
                .collect(),
        };
        assert!(padded.is_cocone_over(&d));
        assert!(!verify_colimit(&d, &padded, 4).unwrap());
        // over-identifying cocone: exists but has no mediator for some cocones
        let squashed = Cocone {
            apex: 1,
            legs: vec![FinMorphism::constant(2, 1, 0), FinMorphism::constant(1, 1, 0)],
        };
        assert!(!verify_colimit(&d, &squashed, 4).unwrap());
    }

    #[test]
    fn finop_duplicate_projection_is_not_universal() {
        let d = discrete(FinKind::FinOp, &[2]);
        let dup = Cocone {
            apex: 3,
            legs: vec![FinMorphism::new(3, 2, vec![0, 1, 1]).unwrap()],
        };
        assert!(dup.is_cocone_over(&d));
        assert!(!verify_colimit(&d, &dup, 2).unwrap());
        let cat = FinCat::new(FinKind::FinOp);
        assert_eq!(cat.dom(&dup.legs[0]), 2);
    }
}
