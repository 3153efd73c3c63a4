use super::{enumerate_lines, enumerate_tuples, membership, Line, Tuple};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fincat::{Category, Diagram, FinCat, FinMorphism, IndexCategory};

/// Index category with one object per tuple and per line of `P^N`, and one
/// arrow `ē -> ℓ` for each incidence `ē ∈ ℓ`.
#[derive(Debug, Clone)]
pub struct LineIndex {
    pub alphabet: usize,
    pub n: usize,
    pub tuples: Vec<Tuple>,
    pub lines: Vec<Line>,
    /// `(tuple position, line position, ℓ(ē))`, in arrow order.
    pub incidences: Vec<(usize, usize, usize)>,
    pub index: IndexCategory,
}

impl LineIndex {
    /// Index object of a tuple position.
    pub fn tuple_object(&self, t: usize) -> usize {
        t
    }

    /// Index object of a line position.
    pub fn line_object(&self, l: usize) -> usize {
        self.tuples.len() + l
    }
}

fn tuple_name(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("e({})", parts.join(","))
}

fn line_name(l: &Line) -> String {
    format!("l{l:?}")
}

pub fn build_line_index(alphabet: usize, n: usize, limits: &Limits) -> Result<LineIndex> {
    if n == 0 {
        return Err(Error::Invalid("line diagrams need N > 0".into()));
    }
    let tuples = enumerate_tuples(alphabet, n, limits)?;
    let lines = enumerate_lines(alphabet, n, limits)?;
    let mut names: Vec<String> = tuples.iter().map(|t| tuple_name(t)).collect();
    names.extend(lines.iter().map(line_name));
    let mut index = IndexCategory::new(names);
    let mut incidences = Vec::new();
    for (ti, t) in tuples.iter().enumerate() {
        for (li, l) in lines.iter().enumerate() {
            if let Some(p) = membership(t, l) {
                index.add_arrow(format!("({},{})", tuple_name(t), line_name(l)), ti, tuples.len() + li);
                incidences.push((ti, li, p));
            }
        }
    }
    Ok(LineIndex {
        alphabet,
        n,
        tuples,
        lines,
        incidences,
        index,
    })
}

/// The line diagram in the underlying category: tuples go to `X`, lines to
/// `Y`, and the arrow `(ē, ℓ)` to the mono `monos[ℓ(ē)]`.
pub fn line_diagram(li: &LineIndex, cat: FinCat, x: usize, y: usize, monos: &[FinMorphism]) -> Result<Diagram> {
    if monos.len() != li.alphabet {
        return Err(Error::Invalid(format!(
            "{} monos for an alphabet of size {}",
            monos.len(),
            li.alphabet
        )));
    }
    let mut objects = vec![x; li.tuples.len()];
    objects.extend(std::iter::repeat_n(y, li.lines.len()));
    let arrows = li.incidences.iter().map(|&(_, _, p)| monos[p].clone()).collect();
    Diagram::new(li.index.clone(), cat, objects, arrows)
}

/// Index category of factorizations: objects `Hom(A, C) ∪ Hom(B, C)`, and an
/// arrow `h -> g` named `(h, g, f)` for every `f ∈ Hom(A, B)` with `g ∘ f = h`.
#[derive(Debug, Clone)]
pub struct TransferIndex<M> {
    pub h_objects: Vec<M>,
    pub g_objects: Vec<M>,
    pub factors: Vec<M>,
    /// `(h position, g position, f position)`, in arrow order.
    pub arrows: Vec<(usize, usize, usize)>,
    pub index: IndexCategory,
}

pub fn build_transfer_index<C: Category>(
    cat: &C,
    a: &C::Object,
    b: &C::Object,
    c: &C::Object,
) -> Result<TransferIndex<C::Morphism>> {
    let h_objects = cat.hom(a, c)?;
    let g_objects = cat.hom(b, c)?;
    let factors = cat.hom(a, b)?;
    let mut names: Vec<String> = (0..h_objects.len()).map(|i| format!("h{i}")).collect();
    names.extend((0..g_objects.len()).map(|j| format!("g{j}")));
    let mut index = IndexCategory::new(names);
    let mut arrows = Vec::new();
    for (hi, h) in h_objects.iter().enumerate() {
        for (gi, g) in g_objects.iter().enumerate() {
            for (fi, f) in factors.iter().enumerate() {
                if cat.compose(g, f)? == *h {
                    index.add_arrow(format!("(h{hi},g{gi},f{fi})"), hi, h_objects.len() + gi);
                    arrows.push((hi, gi, fi));
                }
            }
        }
    }
    Ok(TransferIndex {
        h_objects,
        g_objects,
        factors,
        arrows,
        index,
    })
}

/// `h`-objects go to `D`, `g`-objects to `E`, the arrow `(h, g, f)` to `F(f)`.
pub fn transfer_diagram<M>(
    ti: &TransferIndex<M>,
    target: FinCat,
    d: usize,
    e: usize,
    f_map: impl Fn(&M) -> FinMorphism,
) -> Result<Diagram> {
    let mut objects = vec![d; ti.h_objects.len()];
    objects.extend(std::iter::repeat_n(e, ti.g_objects.len()));
    let arrows = ti.arrows.iter().map(|&(_, _, f)| f_map(&ti.factors[f])).collect();
    Diagram::new(ti.index.clone(), target, objects, arrows)
}
