use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use partite_core::colimit_block::{
    construct_colimit_block, relation_reflection, verify_homomorphism_legs, ReflectionReport,
};
use partite_core::fincat::{colimit, verify_colimit, Category, CategoryTag, Cocone, Diagram, FinCat, FinMorphism};
use partite_core::lines::{hj_witness_search, HjCategory};
use partite_core::ramsey::{
    dblock_hom, is_monochromatic, is_ramsey_witness, partite_construction, partite_lemma, solecki_direct, solecki_dual,
    Coloring, OrderedSolver,
};
use partite_core::structlang::{Block, DBlock, Forgetful, Structure};
use partite_core::verdict::{Mode, Status};
use partite_core::{Config, Error, Limits};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::load::{CliError, CliResult};

/// `i0: U -> V` with blocks `X` over `U` and `Y` over `V`; `n` is only read
/// by `colimit-block`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineInput {
    pub i0: FinMorphism,
    pub x: Block,
    pub y: Block,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

/// Two blocks over a category of orders `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DInput {
    pub d: CategoryTag,
    pub x: DBlock,
    pub y: DBlock,
}

/// `K` and `M`, structures over the same language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedInput {
    pub k: Structure,
    pub m: Structure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Direct,
    Dual,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(Variant::Direct),
            "dual" => Ok(Variant::Dual),
            other => Err(format!("unknown variant {other:?}; use direct or dual")),
        }
    }
}

/// How the base category's witness size is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    Auto,
    Size(usize),
}

impl SolverChoice {
    fn fixed(self) -> Option<usize> {
        match self {
            SolverChoice::Auto => None,
            SolverChoice::Size(m) => Some(m),
        }
    }
}

impl FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(SolverChoice::Auto);
        }
        s.strip_prefix("size=")
            .and_then(|n| n.parse().ok())
            .map(SolverChoice::Size)
            .ok_or_else(|| format!("expected auto or size=<n>, got {s:?}"))
    }
}

/// Parses `Fin`, `FinOp`, `FinLE`, `FinLEStarOp` or `HJ:<alphabet size>`.
pub fn parse_category(s: &str) -> Result<CategoryTag, String> {
    if let Some(n) = s.strip_prefix("HJ:") {
        let n: usize = n.parse().map_err(|_| format!("bad alphabet size in {s:?}"))?;
        return Ok(CategoryTag::Hj {
            alphabet: (0..n).map(|i| i.to_string()).collect(),
        });
    }
    s.parse::<partite_core::fincat::FinKind>()
        .map(CategoryTag::from)
        .map_err(|e| e.to_string())
}

/// A fully specified command: everything needed to reproduce its result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", rename_all_fields = "camelCase")]
pub enum Request {
    HjSearch {
        alphabet: usize,
        colors: usize,
        nmax: usize,
        scan: Mode,
    },
    HomEnum {
        category: CategoryTag,
        from: usize,
        to: usize,
    },
    VerifyRamsey {
        category: CategoryTag,
        a: usize,
        b: usize,
        c: usize,
        r: usize,
        scan: Mode,
    },
    Colimit {
        diagram: Diagram,
        apex_bound: Option<usize>,
    },
    ColimitBlock {
        instance: LineInput,
        verify: bool,
    },
    PartiteLemma {
        instance: LineInput,
        r: usize,
        scan: Mode,
    },
    PartiteConstruction {
        instance: DInput,
        r: usize,
        solver: SolverChoice,
        trials: usize,
        seed: u64,
    },
    Solecki {
        variant: Variant,
        instance: OrderedInput,
        r: usize,
        solver: SolverChoice,
        trials: usize,
        seed: u64,
    },
}

impl Request {
    pub fn name(&self) -> &'static str {
        match self {
            Request::HjSearch { .. } => "hj-search",
            Request::HomEnum { .. } => "hom-enum",
            Request::VerifyRamsey { .. } => "verify-ramsey",
            Request::Colimit { .. } => "colimit",
            Request::ColimitBlock { .. } => "colimit-block",
            Request::PartiteLemma { .. } => "partite-lemma",
            Request::PartiteConstruction { .. } => "partite-construction",
            Request::Solecki { .. } => "solecki",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// A universal claim held (exhaustively or on every sample).
    Holds,
    /// A claim failed; the result carries the counterexample.
    Refuted,
    /// A construction or enumeration finished.
    Completed,
}

impl Outcome {
    fn of(holds: bool) -> Self {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Refuted
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Refuted => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Refuted => "refuted",
            Outcome::Completed => "completed",
        })
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub outcome: Outcome,
    pub result: Value,
    /// One-line human summary.
    pub summary: String,
    /// The coloring that refutes the claim, when there is one.
    pub counterexample: Option<Value>,
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| Error::InternalInconsistency(format!("serialization failed: {e}")).into())
}

fn with_limits(block: &Block, limits: Limits) -> Block {
    block.with_limits(limits)
}

/// Colorings of `domain` with `r` colors as base-`r` numerals, first
/// element most significant.
fn decode(code: u64, len: usize, r: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    let mut c = code;
    for slot in out.iter_mut().rev() {
        *slot = (c % r as u64) as usize;
        c /= r as u64;
    }
    out
}

fn coloring_count(len: usize, r: usize, budget: usize) -> CliResult<u64> {
    let total = (r as u128).checked_pow(len as u32).filter(|&t| t <= budget as u128);
    total.map(|t| t as u64).ok_or_else(|| {
        Error::BoundExceeded {
            what: format!("{r}-colorings of {len} arrows"),
            needed: format!("{r}^{len}"),
            cap: budget,
        }
        .into()
    })
}

/// Outcome of running a resolver over many colorings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
struct ResolverCheck {
    #[serde(flatten)]
    status: Status,
    colorings_examined: u64,
    failures: u64,
    chi_prime_ill_defined: u64,
    /// Color assignment of the first failing coloring, in domain order.
    first_failure: Option<Vec<usize>>,
}

enum Trial {
    Pass,
    Fail,
    ChiPrime,
}

/// Applies `check` to each coloring; failures are tallied, errors other
/// than an ill-defined `χ′` abort.
fn scan_colorings(
    len: usize,
    r: usize,
    scan: Mode,
    budget: usize,
    check: impl Fn(&[usize]) -> CliResult<Trial> + Sync,
) -> CliResult<ResolverCheck> {
    let assignments: Vec<Vec<usize>> = match scan {
        Mode::Exhaustive => {
            let total = coloring_count(len, r, budget)?;
            (0..total).map(|code| decode(code, len, r)).collect()
        }
        Mode::Sampled { trials, seed } => {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials)
                .map(|_| (0..len).map(|_| rng.gen_range(0..r)).collect())
                .collect()
        }
    };
    let outcomes = assignments
        .par_iter()
        .map(|a| check(a))
        .collect::<CliResult<Vec<Trial>>>()?;
    let mut failures = 0;
    let mut chi = 0;
    let mut first = None;
    for (a, t) in assignments.iter().zip(&outcomes) {
        match t {
            Trial::Pass => continue,
            Trial::Fail => failures += 1,
            Trial::ChiPrime => chi += 1,
        }
        first.get_or_insert_with(|| a.clone());
    }
    let status = match (first.is_some(), scan) {
        (true, _) => Status::Refuted,
        (false, Mode::Exhaustive) => Status::VerifiedExhaustively,
        (false, Mode::Sampled { trials, seed }) => Status::NoCounterexampleFound { trials, seed },
    };
    Ok(ResolverCheck {
        status,
        colorings_examined: assignments.len() as u64,
        failures,
        chi_prime_ill_defined: chi,
        first_failure: first,
    })
}

fn rebase_dblock(b: &DBlock, g: &Forgetful) -> CliResult<DBlock> {
    Ok(DBlock::new(with_limits(&b.block, g.c.limits), b.d_object, g)?)
}

/// Runs `request` under `config`. Deterministic in both.
pub fn execute(request: &Request, config: &Config) -> CliResult<Report> {
    config.validate()?;
    let limits = config.limits;
    let budget = limits.max_colorings;
    match request {
        Request::HjSearch {
            alphabet,
            colors,
            nmax,
            scan,
        } => {
            let s = hj_witness_search(*alphabet, *colors, *nmax, *scan, &limits)?;
            Ok(Report {
                outcome: Outcome::of(s.status().holds()),
                summary: format!("N={} ({})", s.n, s.status().label()),
                result: to_value(&s)?,
                counterexample: None,
            })
        }
        Request::HomEnum { category, from, to } => {
            let (count, arrows) = match category.fin_kind() {
                Some(kind) => {
                    let hom = FinCat::with_limits(kind, limits).hom(from, to)?;
                    (hom.len(), to_value(&hom)?)
                }
                None => {
                    let CategoryTag::Hj { alphabet } = category else {
                        unreachable!()
                    };
                    let hom = HjCategory::new(alphabet.len(), limits).hom(from, to)?;
                    (hom.len(), to_value(&hom)?)
                }
            };
            Ok(Report {
                outcome: Outcome::Completed,
                summary: format!("|Hom({from}, {to})| = {count}"),
                result: json!({ "count": count, "arrows": arrows }),
                counterexample: None,
            })
        }
        Request::VerifyRamsey {
            category,
            a,
            b,
            c,
            r,
            scan,
        } => {
            let (status, examined, verdict, counterexample) = match category.fin_kind() {
                Some(kind) => {
                    let cat = FinCat::with_limits(kind, limits);
                    let v = is_ramsey_witness(&cat, a, b, c, *r, *scan, budget)?;
                    let cx = v.counterexample.as_ref().map(to_value).transpose()?;
                    (v.status, v.colorings_examined, to_value(&v)?, cx)
                }
                None => {
                    let CategoryTag::Hj { alphabet } = category else {
                        unreachable!()
                    };
                    let cat = HjCategory::new(alphabet.len(), limits);
                    let v = is_ramsey_witness(&cat, a, b, c, *r, *scan, budget)?;
                    let cx = v.counterexample.as_ref().map(to_value).transpose()?;
                    (v.status, v.colorings_examined, to_value(&v)?, cx)
                }
            };
            Ok(Report {
                outcome: Outcome::of(status.holds()),
                summary: format!("{c} -> ({b})^{a}_{r}: {} after {examined} colorings", status.label()),
                result: verdict,
                counterexample,
            })
        }
        Request::Colimit { diagram, apex_bound } => {
            let mut d = diagram.clone();
            d.category.limits = limits;
            let cocone: Cocone = colimit(&d)?;
            let universal = apex_bound.map(|bound| verify_colimit(&d, &cocone, bound)).transpose()?;
            let outcome = match universal {
                Some(ok) => Outcome::of(ok),
                None => Outcome::Completed,
            };
            Ok(Report {
                outcome,
                summary: match universal {
                    Some(ok) => format!("apex {}; universal up to the bound: {ok}", cocone.apex),
                    None => format!("apex {}", cocone.apex),
                },
                result: json!({ "cocone": to_value(&cocone)?, "universal": universal }),
                counterexample: None,
            })
        }
        Request::ColimitBlock { instance, verify } => {
            let n = instance
                .n
                .ok_or_else(|| CliError::Argument("colimit-block needs the dimension n".into()))?;
            let cb = construct_colimit_block(
                &instance.i0,
                &with_limits(&instance.x, limits),
                &with_limits(&instance.y, limits),
                n,
            )?;
            let mut result = json!({ "colimitBlock": to_value(&cb.summary())? });
            let mut outcome = Outcome::Completed;
            let mut summary = format!("|Z| = {} from {} monos and N = {n}", cb.z.carrier, cb.monos.len());
            if *verify {
                let invariants = cb.check_invariants().err().map(|e| e.to_string());
                let legs = verify_homomorphism_legs(&cb)?;
                let reflection: ReflectionReport = relation_reflection(&cb)?;
                let ok = invariants.is_none() && legs && reflection.failures == 0;
                outcome = Outcome::of(ok);
                summary.push_str(&format!("; checks {}", if ok { "pass" } else { "fail" }));
                result["checks"] = json!({
                    "invariantViolation": invariants,
                    "homomorphismLegs": legs,
                    "reflection": to_value(&reflection)?,
                });
            }
            Ok(Report {
                outcome,
                summary,
                result,
                counterexample: None,
            })
        }
        Request::PartiteLemma { instance, r, scan } => {
            let lemma = partite_lemma(
                &instance.i0,
                &with_limits(&instance.x, limits),
                &with_limits(&instance.y, limits),
                *r,
                config,
            )?;
            let cat = *lemma.block.cat();
            let check = scan_colorings(lemma.domain.len(), *r, *scan, budget, |a| {
                let chi = Coloring::new(lemma.domain.clone(), *r, a.to_vec())?;
                let res = lemma.resolve(&chi)?;
                let image = lemma
                    .block
                    .monos
                    .iter()
                    .map(|p| cat.compose(&res.leg, p))
                    .collect::<partite_core::Result<Vec<_>>>()?;
                Ok(if is_monochromatic(&chi, &image)? {
                    Trial::Pass
                } else {
                    Trial::Fail
                })
            })?;
            Ok(Report {
                outcome: Outcome::of(check.status.holds()),
                summary: format!(
                    "N = {}, |Z| = {}; resolver {} over {} colorings",
                    lemma.hj.n,
                    lemma.block.z.carrier,
                    check.status.label(),
                    check.colorings_examined
                ),
                counterexample: None,
                result: json!({ "lemma": to_value(&lemma)?, "resolverCheck": to_value(&check)? }),
            })
        }
        Request::PartiteConstruction {
            instance,
            r,
            solver,
            trials,
            seed,
        } => {
            let kind = instance
                .d
                .fin_kind()
                .ok_or_else(|| CliError::Argument("the base category must be FinLE or FinLEStarOp".into()))?;
            let d = FinCat::with_limits(kind, limits);
            let g = Forgetful::new(d, FinCat::with_limits(kind.ambient(), limits))?;
            let x = rebase_dblock(&instance.x, &g)?;
            let y = rebase_dblock(&instance.y, &g)?;
            let s = OrderedSolver::new(d, config.solver_max_size, solver.fixed(), budget)?;
            let pc = partite_construction(g, &x, &y, *r, Arc::new(s), config)?;
            let hom_xy = dblock_hom(&pc.x, &pc.y, &pc.g)?;
            let scan = Mode::Sampled {
                trials: *trials,
                seed: *seed,
            };
            let check = scan_colorings(pc.domain.len(), *r, scan, budget, |a| {
                let chi = Coloring::new(pc.domain.clone(), *r, a.to_vec())?;
                let res = match pc.resolve(&chi) {
                    Ok(res) => res,
                    Err(Error::ChiPrimeIllDefined(_)) => return Ok(Trial::ChiPrime),
                    Err(e) => return Err(e.into()),
                };
                let image = hom_xy
                    .iter()
                    .map(|f| pc.g.c.compose(&res.embedding, f))
                    .collect::<partite_core::Result<Vec<_>>>()?;
                Ok(if is_monochromatic(&chi, &image)? {
                    Trial::Pass
                } else {
                    Trial::Fail
                })
            })?;
            Ok(Report {
                outcome: Outcome::of(check.status.holds()),
                summary: format!(
                    "M = {}, |Z| = {} after {} steps; resolver {}",
                    pc.m,
                    pc.z.block.carrier(),
                    pc.tower.len(),
                    check.status.label()
                ),
                counterexample: None,
                result: json!({ "construction": to_value(&pc)?, "resolverCheck": to_value(&check)? }),
            })
        }
        Request::Solecki {
            variant,
            instance,
            r,
            solver,
            trials,
            seed,
        } => {
            let k = instance.k.with_limits(limits);
            let m = instance.m.with_limits(limits);
            let s = match variant {
                Variant::Direct => solecki_direct(&k, &m, *r, solver.fixed(), config)?,
                Variant::Dual => solecki_dual(&k, &m, *r, solver.fixed(), config)?,
            };
            let domain = s.domain()?;
            let scan = Mode::Sampled {
                trials: *trials,
                seed: *seed,
            };
            let check = scan_colorings(domain.len(), *r, scan, budget, |a| {
                let chi = Coloring::new(domain.clone(), *r, a.to_vec())?;
                match s.resolve(&chi) {
                    Ok(_) => Ok(Trial::Pass),
                    Err(Error::ChiPrimeIllDefined(_)) => Ok(Trial::ChiPrime),
                    Err(e) => Err(e.into()),
                }
            })?;
            let verdict = s.verify(scan, budget)?;
            let ok = check.status.holds() && verdict.holds();
            Ok(Report {
                outcome: Outcome::of(ok),
                summary: format!(
                    "|Z'| = {}; resolver {}; direct check {}",
                    s.ordered.carrier(),
                    check.status.label(),
                    verdict.status.label()
                ),
                counterexample: verdict.counterexample.as_ref().map(to_value).transpose()?,
                result: json!({
                    "solecki": to_value(&s)?,
                    "resolverCheck": to_value(&check)?,
                    "verdict": to_value(&verdict)?,
                }),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_put_the_first_arrow_first() {
        assert_eq!(decode(5, 3, 2), vec![1, 0, 1]);
        assert_eq!(decode(0, 0, 3), Vec::<usize>::new());
        assert!(coloring_count(40, 2, 1 << 20).is_err());
        assert_eq!(coloring_count(0, 2, 1).unwrap(), 1);
    }

    #[test]
    fn argument_parsers() {
        assert_eq!("size=5".parse::<SolverChoice>().unwrap(), SolverChoice::Size(5));
        assert_eq!("auto".parse::<SolverChoice>().unwrap(), SolverChoice::Auto);
        assert!("size=".parse::<SolverChoice>().is_err());
        assert_eq!(parse_category("FinLE").unwrap(), CategoryTag::FinLe);
        assert_eq!(
            parse_category("HJ:2").unwrap(),
            CategoryTag::Hj {
                alphabet: vec!["0".into(), "1".into()]
            }
        );
        assert!(parse_category("Set").is_err());
    }

    #[test]
    fn requests_round_trip() {
        let r = Request::VerifyRamsey {
            category: CategoryTag::FinLe,
            a: 2,
            b: 3,
            c: 5,
            r: 2,
            scan: Mode::Exhaustive,
        };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["command"], "verify-ramsey");
        assert_eq!(serde_json::from_value::<Request>(v).unwrap(), r);
    }

    #[test]
    fn refuted_ramsey_claim_carries_a_counterexample() {
        let r = Request::VerifyRamsey {
            category: CategoryTag::FinLe,
            a: 1,
            b: 2,
            c: 2,
            r: 2,
            scan: Mode::Exhaustive,
        };
        let rep = execute(&r, &Config::default()).unwrap();
        assert_eq!(rep.outcome, Outcome::Refuted);
        assert!(rep.counterexample.is_some());
    }

    #[test]
    fn hom_enum_counts_rigid_surjections() {
        let r = Request::HomEnum {
            category: CategoryTag::FinLeStarOp,
            from: 2,
            to: 3,
        };
        assert_eq!(execute(&r, &Config::default()).unwrap().result["count"], 3);
    }
}
