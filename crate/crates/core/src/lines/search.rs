use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{enumerate_lines, enumerate_tuples, tuple_rank, Line};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::verdict::{Mode, Status};

/// Result of testing one dimension `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjOutcome {
    pub n: usize,
    #[serde(flatten)]
    pub status: Status,
    /// A coloring of `P^N` (by tuple rank) with no monochromatic line.
    pub counterexample: Option<Vec<usize>>,
}

/// The least dimension found to satisfy `N -> (1)^0_r`, with the outcome at
/// every smaller dimension as its minimality certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjSearch {
    pub alphabet: usize,
    pub colors: usize,
    pub n: usize,
    pub attempts: Vec<HjOutcome>,
}

impl HjSearch {
    pub fn status(&self) -> Status {
        self.attempts
            .last()
            .map(|a| a.status)
            .unwrap_or(Status::VerifiedExhaustively)
    }

    /// The counterexample one dimension below the answer, if any.
    pub fn below(&self) -> Option<&[usize]> {
        let k = self.attempts.len();
        (k >= 2)
            .then(|| self.attempts[k - 2].counterexample.as_deref())
            .flatten()
    }
}

/// Smallest `N <= n_max` such that every `r`-coloring of `P^N` has a line all
/// of whose points share a color.
pub fn hj_witness_search(
    alphabet: usize,
    colors: usize,
    n_max: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<HjSearch> {
    if colors == 0 {
        return Err(Error::Invalid("color count must be positive".into()));
    }
    let mut attempts = Vec::new();
    for n in 1..=n_max {
        let outcome = test_dimension(alphabet, colors, n, mode, limits)?;
        let holds = outcome.status.holds();
        attempts.push(outcome);
        if holds {
            return Ok(HjSearch {
                alphabet,
                colors,
                n,
                attempts,
            });
        }
    }
    Err(Error::SearchExhausted(format!(
        "no dimension up to {n_max} works for alphabet {alphabet} and {colors} colors"
    )))
}

struct Incidence {
    /// Lines as lists of point ranks.
    lines: Vec<Vec<usize>>,
    /// For each point, the lines whose last point it is.
    closing: Vec<Vec<usize>>,
    points: usize,
}

fn incidence(alphabet: usize, n: usize, limits: &Limits) -> Result<Incidence> {
    let points = enumerate_tuples(alphabet, n, limits)?.len();
    let lines: Vec<Vec<usize>> = enumerate_lines(alphabet, n, limits)?
        .iter()
        .map(|l| l.points(alphabet).iter().map(|t| tuple_rank(alphabet, t)).collect())
        .collect();
    let mut closing = vec![Vec::new(); points];
    for (i, pts) in lines.iter().enumerate() {
        if let Some(&last) = pts.iter().max() {
            closing[last].push(i);
        }
    }
    Ok(Incidence { lines, closing, points })
}

fn mono(pts: &[usize], coloring: &[usize]) -> bool {
    pts.iter().all(|&p| coloring[p] == coloring[pts[0]])
}

fn test_dimension(alphabet: usize, colors: usize, n: usize, mode: Mode, limits: &Limits) -> Result<HjOutcome> {
    let inc = incidence(alphabet, n, limits)?;
    match mode {
        Mode::Exhaustive => {
            let found = least_bad_coloring(&inc, colors, limits.max_colorings)?;
            Ok(HjOutcome {
                n,
                status: if found.is_some() {
                    Status::Refuted
                } else {
                    Status::VerifiedExhaustively
                },
                counterexample: found,
            })
        }
        Mode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let coloring: Vec<usize> = (0..inc.points).map(|_| rng.gen_range(0..colors)).collect();
                if !inc.lines.iter().any(|l| mono(l, &coloring)) {
                    return Ok(HjOutcome {
                        n,
                        status: Status::Refuted,
                        counterexample: Some(coloring),
                    });
                }
            }
            Ok(HjOutcome {
                n,
                status: Status::NoCounterexampleFound { trials, seed },
                counterexample: None,
            })
        }
    }
}

/// Depth-first search in lexicographic order for a coloring without a
/// monochromatic line; a line is tested as soon as its last point is colored.
fn least_bad_coloring(inc: &Incidence, colors: usize, budget: usize) -> Result<Option<Vec<usize>>> {
    let n = inc.points;
    if n == 0 {
        return Ok(if inc.lines.is_empty() { Some(Vec::new()) } else { None });
    }
    let mut coloring = vec![0usize; n];
    let mut pos = 0usize;
    let mut nodes = 0usize;
    let mut fresh = true;
    loop {
        if !fresh {
            // try the next color at `pos`, backtracking when exhausted
            loop {
                coloring[pos] += 1;
                if coloring[pos] < colors {
                    break;
                }
                coloring[pos] = 0;
                if pos == 0 {
                    return Ok(None);
                }
                pos -= 1;
            }
        }
        nodes += 1;
        if nodes > budget {
            return Err(Error::bound("line-free coloring search nodes", nodes, budget));
        }
        let ok = inc.closing[pos].iter().all(|&l| !mono(&inc.lines[l], &coloring));
        if ok {
            if pos + 1 == n {
                return Ok(Some(coloring));
            }
            pos += 1;
            coloring[pos] = 0;
            fresh = true;
        } else {
            fresh = false;
        }
    }
}

/// First line, in canonical order, whose points all receive one color under
/// a coloring of `P^N` indexed by tuple rank.
pub fn monochromatic_line(coloring: &[usize], alphabet: usize, n: usize, limits: &Limits) -> Result<Option<Line>> {
    for l in enumerate_lines(alphabet, n, limits)? {
        let ranks: Vec<usize> = l.points(alphabet).iter().map(|t| tuple_rank(alphabet, t)).collect();
        if mono(&ranks, coloring) {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    /// Plain enumeration of all colorings as base-r integers, first tuple most significant.
    fn brute_least_bad(alphabet: usize, colors: usize, n: usize) -> Option<Vec<usize>> {
        let inc = incidence(alphabet, n, &lim()).unwrap();
        let total = colors.pow(inc.points as u32);
        (0..total).find_map(|code| {
            let mut c = vec![0; inc.points];
            let mut x = code;
            for slot in c.iter_mut().rev() {
                *slot = x % colors;
                x /= colors;
            }
            (!inc.lines.iter().any(|l| mono(l, &c))).then_some(c)
        })
    }

    #[test]
    fn two_letters_two_colors() {
        let s = hj_witness_search(2, 2, 4, Mode::Exhaustive, &lim()).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.below(), Some(&[0, 1][..]));
        assert_eq!(brute_least_bad(2, 2, 1), Some(vec![0, 1]));
        assert_eq!(brute_least_bad(2, 2, 2), None);
    }

    #[test]
    fn one_letter_is_trivial() {
        for r in 1..=4 {
            let s = hj_witness_search(1, r, 3, Mode::Exhaustive, &lim()).unwrap();
            assert_eq!(s.n, 1);
            assert_eq!(s.status(), Status::VerifiedExhaustively);
        }
        assert_eq!(hj_witness_search(2, 1, 3, Mode::Exhaustive, &lim()).unwrap().n, 1);
        // an empty alphabet has a single pointless line, vacuously monochromatic
        assert_eq!(hj_witness_search(0, 2, 3, Mode::Exhaustive, &lim()).unwrap().n, 1);
    }

    #[test]
    fn dfs_finds_the_least_counterexample() {
        for (a, r, n) in [(2, 2, 1), (2, 3, 2), (3, 2, 1), (3, 2, 2), (2, 3, 1)] {
            let inc = incidence(a, n, &lim()).unwrap();
            assert_eq!(
                least_bad_coloring(&inc, r, 1 << 30).unwrap(),
                brute_least_bad(a, r, n),
                "{a} {r} {n}"
            );
        }
    }

    #[test]
    fn exhausted_and_bounded() {
        let e = hj_witness_search(2, 3, 1, Mode::Exhaustive, &lim()).unwrap_err();
        assert_eq!(e.code(), "SearchExhausted");
        let tiny = Limits {
            max_colorings: 3,
            ..lim()
        };
        let e = hj_witness_search(2, 2, 2, Mode::Exhaustive, &tiny).unwrap_err();
        assert_eq!(e.code(), "BoundExceeded");
    }

    #[test]
    fn sampled_mode_is_reproducible_and_modest() {
        let mode = Mode::Sampled { trials: 50, seed: 7 };
        let a = hj_witness_search(2, 2, 3, mode, &lim()).unwrap();
        let b = hj_witness_search(2, 2, 3, mode, &lim()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n, 2);
        assert!(matches!(
            a.status(),
            Status::NoCounterexampleFound { trials: 50, seed: 7 }
        ));
    }

    #[test]
    fn mono_line_lookup() {
        // P^2 with colors by rank: (0,0)=0 (0,1)=1 (1,0)=1 (1,1)=0 -> diagonal is monochromatic
        let l = monochromatic_line(&[0, 1, 1, 0], 2, 2, &lim()).unwrap().unwrap();
        assert_eq!(l.active(), vec![0, 1]);
        assert_eq!(monochromatic_line(&[0, 1], 2, 1, &lim()).unwrap(), None);
    }
}
