//! Instance files, per-instance reports, corpus sweeps and the report cache
//! behind the `polycay` binary.

pub mod cache;
pub mod io;
pub mod report;
pub mod sweep;

pub use report::{run_instance_report, InstanceReport, ReportOptions, SCHEMA};
pub use sweep::{run_sweep, SearchTarget, SweepKind, SweepOptions, SweepReport};

/// Environment variable overriding the monomial budget.
pub const MONOMIAL_ENV: &str = "POLYCAY_MAX_MONOMIALS";

/// Default limits with the monomial budget taken from the environment.
pub fn limits_from_env() -> Result<polycay::Limits, String> {
    let mut limits = polycay::Limits::default();
    if let Ok(v) = std::env::var(MONOMIAL_ENV) {
        limits.max_monomials = v
            .trim()
            .parse()
            .map_err(|_| format!("{MONOMIAL_ENV} must be a nonnegative integer, got `{v}`"))?;
    }
    Ok(limits)
}

/// Pretty JSON with keys sorted.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values serialize");
    serde_json::to_string_pretty(&v).expect("json values serialize")
}
