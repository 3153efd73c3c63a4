use super::{Category, FinCat, FinKind, FinMorphism};
use crate::error::{Error, Result};

fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc == u128::MAX || acc == 0 {
            break;
        }
    }
    acc
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Stirling number of the second kind, saturating.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Number of rigid surjections from an `n`-element order onto a `k`-element order.
pub fn rigid_surjection_count(n: usize, k: usize) -> u128 {
    stirling2(n, k)
}

pub(super) fn hom_count(cat: &FinCat, a: usize, b: usize) -> u128 {
    let (s, t) = cat.stored_shape(a, b);
    match cat.kind {
        FinKind::Fin | FinKind::FinOp => pow_sat(t, s),
        FinKind::FinLe => binomial(t, s),
        FinKind::FinLeStarOp => stirling2(s, t),
    }
}

pub(super) fn hom_enumerate(cat: &FinCat, a: usize, b: usize) -> Result<Vec<FinMorphism>> {
    let count = cat
        .limits
        .check_hom(&format!("|Hom_{}({a},{b})|", cat.kind.name()), hom_count(cat, a, b))?;
    let (s, t) = cat.stored_shape(a, b);
    let mut out = Vec::with_capacity(count);
    match cat.kind {
        FinKind::Fin | FinKind::FinOp => all_tables(s, t, &mut out),
        FinKind::FinLe => increasing_tables(s, t, &mut out),
        FinKind::FinLeStarOp => rigid_tables(s, t, &mut out),
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn all_tables(s: usize, t: usize, out: &mut Vec<FinMorphism>) {
    if s > 0 && t == 0 {
        return;
    }
    let mut table = vec![0usize; s];
    loop {
        out.push(FinMorphism {
            source: s,
            target: t,
            table: table.clone(),
        });
        // odometer, last position least significant
        let mut i = s;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < t {
                break;
            }
            table[i] = 0;
        }
    }
}

fn increasing_tables(s: usize, t: usize, out: &mut Vec<FinMorphism>) {
    fn go(pos: usize, next: usize, s: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<FinMorphism>) {
        if pos == s {
            out.push(FinMorphism {
                source: s,
                target: t,
                table: cur.clone(),
            });
            return;
        }
        // leave room for the remaining positions
        let last = t - (s - pos);
        for v in next..=last {
            cur.push(v);
            go(pos + 1, v + 1, s, t, cur, out);
            cur.pop();
        }
    }
    if s <= t {
        go(0, 0, s, t, &mut Vec::with_capacity(s), out);
    }
}

fn rigid_tables(s: usize, t: usize, out: &mut Vec<FinMorphism>) {
    fn go(pos: usize, used: usize, s: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<FinMorphism>) {
        if pos == s {
            if used == t {
                out.push(FinMorphism {
                    source: s,
                    target: t,
                    table: cur.clone(),
                });
            }
            return;
        }
        // not enough positions left to reach every target value
        if t - used > s - pos {
            return;
        }
        let top = if used < t { used } else { used - 1 };
        for v in 0..=top {
            cur.push(v);
            go(pos + 1, used.max(v + 1), s, t, cur, out);
            cur.pop();
        }
    }
    if s == 0 {
        if t == 0 {
            out.push(FinMorphism {
                source: 0,
                target: 0,
                table: vec![],
            });
        }
        return;
    }
    if t == 0 {
        return;
    }
    go(0, 0, s, t, &mut Vec::with_capacity(s), out);
}

pub(super) fn rank(cat: &FinCat, f: &FinMorphism) -> Result<usize> {
    if !cat.contains(f) {
        return Err(Error::TypeMismatch(format!(
            "{f:?} is not an arrow of {}",
            cat.kind.name()
        )));
    }
    match cat.kind {
        FinKind::Fin | FinKind::FinOp => {
            let mut idx: u128 = 0;
            for &v in &f.table {
                idx = idx.saturating_mul(f.target as u128).saturating_add(v as u128);
            }
            usize::try_from(idx).map_err(|_| Error::bound("hom rank", idx, usize::MAX))
        }
        _ => {
            let (a, b) = (cat.dom(f), cat.cod(f));
            let all = hom_enumerate(cat, a, b)?;
            all.binary_search(f)
                .map_err(|_| Error::InternalInconsistency(format!("{f:?} missing from its hom-set")))
        }
    }
}

pub(super) fn unrank(cat: &FinCat, a: usize, b: usize, index: usize) -> Result<FinMorphism> {
    let count = hom_count(cat, a, b);
    if index as u128 >= count {
        return Err(Error::Invalid(format!(
            "index {index} out of range for a hom-set of size {count}"
        )));
    }
    let (s, t) = cat.stored_shape(a, b);
    match cat.kind {
        FinKind::Fin | FinKind::FinOp => {
            let mut table = vec![0; s];
            let mut rest = index;
            for slot in table.iter_mut().rev() {
                *slot = rest % t;
                rest /= t;
            }
            Ok(FinMorphism {
                source: s,
                target: t,
                table,
            })
        }
        _ => Ok(hom_enumerate(cat, a, b)?.swap_remove(index)),
    }
}

pub(super) fn left_inverse(cat: &FinCat, f: &FinMorphism) -> Result<Option<FinMorphism>> {
    if !cat.contains(f) {
        return Err(Error::TypeMismatch(format!(
            "{f:?} is not an arrow of {}",
            cat.kind.name()
        )));
    }
    let candidate = match cat.kind {
        // lexicographically least retraction: unreached points go to 0
        FinKind::Fin => {
            if !f.is_injective() || (f.source == 0 && f.target > 0) {
                None
            } else {
                let mut table = vec![0; f.target];
                for (x, &y) in f.table.iter().enumerate() {
                    table[y] = x;
                }
                Some(FinMorphism {
                    source: f.target,
                    target: f.source,
                    table,
                })
            }
        }
        // dually: the least section of the stored surjection
        FinKind::FinOp => {
            let mut table = vec![usize::MAX; f.target];
            for (x, &y) in f.table.iter().enumerate().rev() {
                table[y] = x;
            }
            if table.contains(&usize::MAX) {
                None
            } else {
                Some(FinMorphism {
                    source: f.target,
                    target: f.source,
                    table,
                })
            }
        }
        FinKind::FinLe | FinKind::FinLeStarOp => {
            let id = cat.identity(&cat.dom(f));
            let mut found = None;
            for g in hom_enumerate(cat, cat.cod(f), cat.dom(f))? {
                if cat.compose(&g, f)? == id {
                    found = Some(g);
                    break;
                }
            }
            found
        }
    };
    if let Some(g) = &candidate {
        if cat.compose(g, f)? != cat.identity(&cat.dom(f)) {
            return Err(Error::InternalInconsistency(format!(
                "left inverse {g:?} of {f:?} does not split"
            )));
        }
    }
    Ok(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(n_src: usize, n_tgt: usize, keep: impl Fn(&FinMorphism) -> bool) -> Vec<FinMorphism> {
        let mut all = Vec::new();
        all_tables(n_src, n_tgt, &mut all);
        all.into_iter().filter(|f| keep(f)).collect()
    }

    #[test]
    fn hom_counts_match_examples() {
        assert_eq!(FinCat::new(FinKind::Fin).hom(&2, &3).unwrap().len(), 9);
        assert_eq!(FinCat::new(FinKind::FinLe).hom(&2, &3).unwrap().len(), 3);
        let rigid = FinCat::new(FinKind::FinLeStarOp).hom(&2, &3).unwrap();
        let tables: Vec<_> = rigid.iter().map(|f| f.table.clone()).collect();
        assert_eq!(tables, vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
        assert!(rigid.iter().all(|f| f.source == 3 && f.target == 2));
    }

    #[test]
    fn enumerations_agree_with_brute_force_filters() {
        for s in 0..=4 {
            for t in 0..=4 {
                let le = FinCat::new(FinKind::FinLe);
                assert_eq!(
                    le.hom(&s, &t).unwrap(),
                    brute_force(s, t, |f| f.is_strictly_increasing())
                );
                let rs = FinCat::new(FinKind::FinLeStarOp);
                assert_eq!(rs.hom(&t, &s).unwrap(), brute_force(s, t, |f| f.is_rigid_surjection()));
                assert_eq!(rs.hom_count(t, s), stirling2(s, t));
                let fin = FinCat::new(FinKind::Fin);
                assert_eq!(fin.hom(&s, &t).unwrap(), brute_force(s, t, |_| true));
            }
        }
    }

    #[test]
    fn empty_carriers() {
        let fin = FinCat::new(FinKind::Fin);
        assert_eq!(fin.hom(&0, &3).unwrap().len(), 1);
        assert_eq!(fin.hom(&2, &0).unwrap().len(), 0);
        assert_eq!(fin.hom(&0, &0).unwrap().len(), 1);
    }

    #[test]
    fn bound_exceeded_on_large_hom() {
        let fin = FinCat::new(FinKind::Fin);
        let err = fin.hom(&10, &10).unwrap_err();
        assert_eq!(err.code(), "BoundExceeded");
    }

    #[test]
    fn rank_unrank_roundtrip() {
        for kind in [FinKind::Fin, FinKind::FinOp, FinKind::FinLe, FinKind::FinLeStarOp] {
            let cat = FinCat::new(kind);
            let all = cat.hom(&3, &2).unwrap();
            for (i, f) in all.iter().enumerate() {
                assert_eq!(cat.rank(f).unwrap(), i);
                assert_eq!(&cat.unrank(3, 2, i).unwrap(), f);
            }
        }
    }

    #[test]
    fn left_inverse_examples() {
        let fin = FinCat::new(FinKind::Fin);
        let inj = fin.arrow(1, 2, vec![0]).unwrap();
        assert!(fin.left_inverse(&inj).unwrap().is_some());
        let collapse = fin.arrow(2, 1, vec![0, 0]).unwrap();
        assert!(fin.left_inverse(&collapse).unwrap().is_none());

        let op = FinCat::new(FinKind::FinOp);
        let surj = op.arrow(2, 3, vec![0, 1, 1]).unwrap();
        let g = op.left_inverse(&surj).unwrap().unwrap();
        assert_eq!(op.compose(&g, &surj).unwrap(), op.identity(&2));
    }

    #[test]
    fn closed_form_left_inverses_are_lexicographically_least() {
        for kind in [FinKind::Fin, FinKind::FinOp] {
            let cat = FinCat::new(kind);
            for a in 0..=3 {
                for b in 0..=3 {
                    for f in cat.hom(&a, &b).unwrap() {
                        let id = cat.identity(&a);
                        let brute = cat
                            .hom(&b, &a)
                            .unwrap()
                            .into_iter()
                            .find(|g| cat.compose(g, &f).unwrap() == id);
                        assert_eq!(cat.left_inverse(&f).unwrap(), brute, "{kind:?} {f:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(3, 2), 3);
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(stirling2(5, 3), 25);
        assert_eq!(stirling2(0, 0), 1);
        assert_eq!(stirling2(3, 0), 0);
    }
}
