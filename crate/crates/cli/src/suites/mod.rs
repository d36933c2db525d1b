mod cubic;
mod kollar;
pub mod pindep;

use imperfect::exactfield::FieldElement;

use crate::config::{ConfigError, SuiteConfig, SuiteId, DEFAULT_POINT_DEGREE};
use crate::report::{Recorder, Report};

pub(crate) fn strings(xs: &[FieldElement]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

/// Runs the configured suite. Checks run in a fixed order and the report
/// depends only on the configuration and seed.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    let mut rec = Recorder::new(cfg.timings);
    let all = cfg.suite == SuiteId::All;
    if matches!(cfg.suite, SuiteId::Pindep | SuiteId::All) {
        for p in pindep::primes(cfg)? {
            pindep::run(&mut rec, cfg, p, &format!("pindep[p={p}]"))?;
        }
    }
    if matches!(cfg.suite, SuiteId::Kollar | SuiteId::All) {
        for p in cfg.kollar_primes() {
            for n in cfg.kollar_dims() {
                // A single prime and dimension keeps the requested degree; the
                // sweep in `all` drops to degree 1 beyond the smallest case.
                let degree = if all && cfg.point_degree == DEFAULT_POINT_DEGREE && (p, n) != (3, 1) { 1 } else { cfg.point_degree };
                kollar::run(&mut rec, p, n, degree, cfg.budget, &format!("kollar[p={p},n={n}]"));
            }
        }
    }
    if cfg.suite == SuiteId::Cubic2 || (all && cfg.runs_cubic()) {
        cubic::run(&mut rec, cfg.seed, "cubic2");
    }
    Ok(Report::new(cfg, rec.finish()))
}
