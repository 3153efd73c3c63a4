#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use partite_cli::request::{DInput, LineInput};
use partite_core::fincat::{CategoryTag, FinCat, FinKind, FinMorphism};
use partite_core::structlang::{Block, DBlock, Language, RelSymbol, Structure};

pub fn fm(source: usize, target: usize, table: &[usize]) -> FinMorphism {
    FinMorphism::new(source, target, table.to_vec()).unwrap()
}

fn unary_language() -> Arc<Language> {
    let rel = RelSymbol {
        name: "R".into(),
        arity: 1,
    };
    Arc::new(Language::new(FinCat::new(FinKind::Fin), vec![rel], vec![]).unwrap())
}

/// Point `X` over `{*}`, pair `Y` with constant anchor, `i0 = id`, `N = 2`.
pub fn pair_over_point() -> LineInput {
    let lang = Arc::new(Language::empty(FinCat::new(FinKind::Fin)));
    LineInput {
        i0: fm(1, 1, &[0]),
        x: Block::new(Structure::bare(lang.clone(), 1).unwrap(), fm(1, 1, &[0])).unwrap(),
        y: Block::new(Structure::bare(lang, 2).unwrap(), fm(2, 1, &[0, 0])).unwrap(),
        n: Some(2),
    }
}

/// One unary relation, `R^X = ∅`, `R^Y = {1}` on a pair: only the mono onto
/// the unrelated point qualifies, so `|P| = 1`.
pub fn unary_pair_over_point() -> LineInput {
    unary_instance(&[], 2, &[1])
}

/// Related point `X`, `Y = {0, 1, 2}` with `R^Y = {0, 1}`: `|P| = 2`, and the
/// related points are exactly the ones the tuples glue together.
pub fn unary_triple_over_point() -> LineInput {
    unary_instance(&[0], 3, &[0, 1])
}

fn unary_instance(rx: &[usize], y: usize, ry: &[usize]) -> LineInput {
    let lang = unary_language();
    let set = |c: usize, m: &[usize]| m.iter().map(|&p| fm(1, c, &[p])).collect::<BTreeSet<_>>();
    let xs = Structure::new(lang.clone(), 1, vec![set(1, rx)], vec![]).unwrap();
    let ys = Structure::new(lang, y, vec![set(y, ry)], vec![]).unwrap();
    LineInput {
        i0: fm(1, 1, &[0]),
        x: Block::new(xs, fm(1, 1, &[0])).unwrap(),
        y: Block::new(ys, fm(y, 1, &vec![0; y])).unwrap(),
        n: Some(2),
    }
}

/// Empty language over `(Fin,≤)`: `K` a point, `L` two points, identity anchors.
pub fn order_pipeline() -> DInput {
    let lang = Arc::new(Language::empty(FinCat::new(FinKind::Fin)));
    let block = |n: usize| DBlock {
        block: Block::identity(Structure::bare(lang.clone(), n).unwrap()),
        d_object: n,
    };
    DInput {
        d: CategoryTag::FinLe,
        x: block(1),
        y: block(2),
    }
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

pub fn partite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partite"))
        .args(args)
        .output()
        .expect("the partite binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
