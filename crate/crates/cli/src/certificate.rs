use partite_core::Config;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::load::{parse_json, CliResult};
use crate::request::{execute, Outcome, Report, Request};

pub const TOOL: &str = "partite";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Self-contained record of one run: the request, the configuration (seed
/// included) and everything the run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: String,
    pub version: String,
    pub request: Request,
    pub config: Config,
    pub outcome: Outcome,
    pub result: Value,
}

impl Certificate {
    pub fn new(request: Request, config: Config, report: &Report) -> Self {
        Certificate {
            tool: TOOL.into(),
            version: VERSION.into(),
            request,
            config,
            outcome: report.outcome,
            result: report.result.clone(),
        }
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }
}

/// Runs `request` and wraps the result.
pub fn certify(request: Request, config: Config) -> CliResult<(Certificate, Report)> {
    let report = execute(&request, &config)?;
    Ok((Certificate::new(request, config, &report), report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recheck {
    Identical,
    /// 1-based line of the first difference between the stored and the
    /// re-derived text.
    Differs {
        line: usize,
    },
}

/// Re-derives a certificate from its recorded request and configuration and
/// compares the two texts byte for byte.
pub fn recheck(file: &str, text: &str) -> CliResult<Recheck> {
    let stored: Certificate = parse_json(file, text)?;
    let (fresh, _) = certify(stored.request, stored.config)?;
    let fresh = fresh.render();
    if fresh == text {
        return Ok(Recheck::Identical);
    }
    let line = text
        .lines()
        .zip(fresh.lines())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| text.lines().count().min(fresh.lines().count()))
        + 1;
    Ok(Recheck::Differs { line })
}

#[cfg(test)]
mod tests {
    use partite_core::fincat::CategoryTag;
    use partite_core::verdict::Mode;

    use super::*;

    fn sample() -> String {
        let req = Request::HjSearch {
            alphabet: 2,
            colors: 2,
            nmax: 3,
            scan: Mode::Exhaustive,
        };
        certify(req, Config::default()).unwrap().0.render()
    }

    #[test]
    fn untampered_certificate_rechecks() {
        assert_eq!(recheck("c.json", &sample()).unwrap(), Recheck::Identical);
    }

    #[test]
    fn tampered_result_is_detected() {
        let text = sample().replacen("\"n\": 2", "\"n\": 3", 1);
        assert!(matches!(recheck("c.json", &text).unwrap(), Recheck::Differs { .. }));
    }

    #[test]
    fn certificate_records_seed_and_request() {
        let req = Request::HomEnum {
            category: CategoryTag::Fin,
            from: 1,
            to: 2,
        };
        let (c, _) = certify(req, Config::default()).unwrap();
        let v: Value = serde_json::from_str(&c.render()).unwrap();
        assert_eq!(v["config"]["rngSeed"], 0x5eed);
        assert_eq!(v["request"]["command"], "hom-enum");
    }
}
