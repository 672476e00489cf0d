//! Job parsing, dispatch and output formatting behind the `toricoh` binary.

pub mod job;
pub mod output;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;
use toricoh::{
    delta, h02_diagnostic, h_vector_with, main2_closed, Checks, DivisorClass, HOptions, MethodChoice, Rational,
    RuledToricSurface,
};

pub use job::{parse_batch, parse_job, Job, Task};
pub use output::{render, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{path}: {source}")]
    Core { path: String, source: toricoh::Error },
}

impl CliError {
    /// 3 for a failed internal cross-check, 2 for anything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } if source.is_internal() => 3,
            _ => 2,
        }
    }
}

/// Reads `TORICOH_CHECKS`. Unset means the build default.
pub fn checks_from_env() -> Result<Checks, CliError> {
    match std::env::var("TORICOH_CHECKS") {
        Err(_) => Ok(Checks::default()),
        Ok(v) => match v.as_str() {
            "strict" => Ok(Checks::Strict),
            "off" => Ok(Checks::Off),
            other => Err(CliError::Input {
                path: "TORICOH_CHECKS".into(),
                msg: format!("expected strict or off, got \"{other}\""),
            }),
        },
    }
}

pub fn parse_method(s: &str) -> Option<MethodChoice> {
    match s {
        "auto" => Some(MethodChoice::Auto),
        "enum" => Some(MethodChoice::Enum),
        "closed" => Some(MethodChoice::Closed),
        _ => None,
    }
}

const MAX_SAFE: i64 = (1 << 53) - 1;

/// Integers beyond the IEEE-double range become strings.
pub fn int(x: i64) -> Value {
    if x.abs() > MAX_SAFE {
        Value::String(x.to_string())
    } else {
        Value::from(x)
    }
}

fn rat(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn div(d: DivisorClass) -> Value {
    Value::Array(d.to_array().into_iter().map(int).collect())
}

fn surface_json(s: &RuledToricSurface) -> Value {
    json!({"d1": int(s.d1), "d2": int(s.d2), "n1": int(s.n1), "n2": int(s.n2), "r": rat(&s.r)})
}

fn core(path: &str) -> impl Fn(toricoh::Error) -> CliError + '_ {
    move |e| CliError::Core { path: path.to_string(), source: e }
}

fn surface_info(s: &RuledToricSurface, path: &str) -> Result<Map<String, Value>, CliError> {
    let mut m = Map::new();
    m.insert("k".into(), int(s.k));
    m.insert("p1".into(), int(s.p1));
    m.insert("q1".into(), int(s.q1));
    m.insert("p2".into(), int(s.p2));
    m.insert("q2".into(), int(s.q2));
    m.insert("rd1d2".into(), int(s.rd1d2));
    m.insert("biruled".into(), Value::Bool(s.is_biruled()));
    m.insert("generators".into(), json!(["Z", "F", "E_X", "E_Y"]));
    m.insert(
        "relations".into(),
        json!([format!("F = {}·E_X", s.d1), format!("F = {}·E_Y", s.d2)]),
    );
    m.insert("torsion_order".into(), int(s.d));
    m.insert("torsion_generator".into(), div(s.torsion_generator()));
    m.insert("K".into(), div(s.canonical_divisor().map_err(core(path))?));
    m.insert("Z_K".into(), Value::Array(s.canonical_cycle().0.iter().map(rat).collect()));
    let ms = s.intersection_matrix();
    m.insert(
        "M_S".into(),
        Value::Array(ms.iter().map(|row| Value::Array(row.iter().map(rat).collect())).collect()),
    );
    Ok(m)
}

/// Runs one job and returns its JSON result.
pub fn run_job(job: &Job, opts: HOptions) -> Result<Value, CliError> {
    let path = job.path.as_str();
    let mut out = Map::new();
    out.insert("task".into(), json!(job.task.name()));
    if let Some(s) = &job.surface {
        out.insert("surface".into(), surface_json(s));
    }
    match &job.task {
        Task::Delta { d, p, k } => {
            let v = delta(*d, *p, *k).map_err(core(path))?;
            out.insert("d".into(), int(*d));
            out.insert("p".into(), int(*p));
            out.insert("k".into(), int(*k));
            out.insert("delta".into(), rat(&v));
        }
        Task::SurfaceInfo => {
            let s = job.surface.as_ref().expect("surface present");
            out.extend(surface_info(s, path)?);
        }
        Task::Cohomology { divisor } => {
            let s = job.surface.as_ref().expect("surface present");
            let h = h_vector_with(s, *divisor, opts).map_err(core(path))?;
            out.insert("divisor".into(), div(*divisor));
            out.insert("h".into(), Value::Array(h.triple().into_iter().map(int).collect()));
            out.insert("chi".into(), int(h.chi));
            out.insert("method".into(), json!(h.method.as_str()));
            out.insert("cross_checked".into(), Value::Bool(h.cross_checked));
            if let Some(m) = main2_closed(s, *divisor) {
                out.insert("region".into(), json!(m.region));
            }
            if let Some(r) = h02_diagnostic(s, *divisor) {
                out.insert(
                    "h02_diagnostic".into(),
                    json!({"predicted": int(r.predicted), "h0": int(r.h0), "matched": r.matched}),
                );
            }
            out.insert("flags".into(), json!(h.flags));
        }
        Task::Covering(cov) => {
            let t = cov.table(opts).map_err(core(path))?;
            let sp = cov.splitting(opts).map_err(core(path))?;
            let fact = cov.charpoly_factorization_check(opts).map_err(core(path))?;
            out.insert("n".into(), int(cov.n));
            out.insert("H".into(), div(cov.h));
            out.insert(
                "components".into(),
                Value::Array(
                    cov.components
                        .iter()
                        .map(|c| json!({"mult": int(c.mult), "class": div(c.class)}))
                        .collect(),
                ),
            );
            out.insert(
                "table".into(),
                Value::Array(
                    t.rows
                        .iter()
                        .map(|r| {
                            json!({
                                "k": int(r.k),
                                "L": div(r.class),
                                "uvw": Value::Array(r.uvw.into_iter().map(int).collect()),
                                "h1": int(r.h1),
                            })
                        })
                        .collect(),
                ),
            );
            let spectrum = |m: std::collections::BTreeMap<i64, i64>| {
                Value::Object(m.into_iter().map(|(k, v)| (k.to_string(), int(v))).collect())
            };
            out.insert("h1_total".into(), int(t.h1_total()));
            out.insert("betti1".into(), int(t.betti1()));
            out.insert("eigenvalues".into(), spectrum(t.eigenvalue_multiset()));
            out.insert("holomorphic".into(), spectrum(t.holomorphic_spectrum()));
            out.insert("charpoly".into(), json!(t.charpoly_string()));
            out.insert(
                "splitting".into(),
                json!({
                    "n1": int(sp.n1),
                    "n2": int(sp.n2),
                    "I1": sp.i1,
                    "I2": sp.i2,
                    "betti1": [int(sp.sub1.betti1()), int(sp.sub2.betti1())],
                }),
            );
            out.insert("factorization".into(), Value::Bool(fact));
            let mut flags = cov.flags.clone();
            flags.extend(t.flags.iter().cloned());
            out.insert("flags".into(), json!(flags));
        }
    }
    Ok(Value::Object(out))
}

/// A job that did not produce a result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<&CliError> for Failure {
    fn from(e: &CliError) -> Self {
        Failure { code: e.exit_code(), message: e.to_string() }
    }
}

/// Runs jobs on `threads` workers (0 means one per core). Results keep the
/// input order.
pub fn run_all(jobs: &[Result<Job, CliError>], opts: HOptions, threads: usize) -> Vec<Result<Value, Failure>> {
    let go = |j: &Result<Job, CliError>| match j {
        Ok(j) => run_job(j, opts).map_err(|e| Failure::from(&e)),
        Err(e) => Err(Failure::from(e)),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| jobs.par_iter().map(go).collect())
}

/// Highest exit code among the results.
pub fn exit_code(results: &[Result<Value, Failure>]) -> i32 {
    results.iter().filter_map(|r| r.as_ref().err()).map(|f| f.code).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strict() -> HOptions {
        HOptions { method: MethodChoice::Auto, checks: Checks::Strict }
    }

    #[test]
    fn cohomology_row_and_delta() {
        let j = parse_job(r#"{"surface":{"d1":5,"d2":5,"n1":3,"n2":2,"r":"0"},"task":"cohomology","divisor":[1,-1,2,1]}"#).unwrap();
        let v = run_job(&j, strict()).unwrap();
        assert_eq!(v["h"], json!([0, 1, 0]));
        assert_eq!(v["chi"], json!(-1));
        let j = parse_job(r#"{"task":"delta","d":2,"p":1,"k":1}"#).unwrap();
        assert_eq!(run_job(&j, strict()).unwrap()["delta"], json!("1/4"));
    }

    #[test]
    fn covering_betti() {
        let text = r#"{"surface":{"d1":12,"d2":12,"n1":1,"n2":11,"r":"0"},"task":"covering",
            "covering":{"n":12,"H":[0,0,4,-3],"components":[{"mult":1,"class":[0,1,0,0]}]}}"#;
        let v = run_job(&parse_job(text).unwrap(), strict()).unwrap();
        assert_eq!(v["betti1"], json!(6));
        assert_eq!(v["factorization"], json!(true));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let pos = |k: &str| keys.iter().position(|x| *x == k).unwrap();
        assert!(pos("table") < pos("betti1") && pos("betti1") < pos("eigenvalues"));
    }

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(int(MAX_SAFE), json!(MAX_SAFE));
        assert_eq!(int(MAX_SAFE + 1), json!("9007199254740992"));
        assert_eq!(int(-MAX_SAFE - 1), json!("-9007199254740992"));
    }

    #[test]
    fn exit_codes() {
        let internal = CliError::Core { path: "$".into(), source: toricoh::Error::InternalInconsistency("x".into()) };
        assert_eq!(internal.exit_code(), 3);
        let bad = CliError::Core { path: "$".into(), source: toricoh::Error::InvalidSurface("x".into()) };
        assert_eq!(bad.exit_code(), 2);
        let fail = |code| Err(Failure { code, message: String::new() });
        let results = vec![Ok(json!({})), fail(2), fail(3)];
        assert_eq!(exit_code(&results), 3);
        assert_eq!(exit_code(&results[..2]), 2);
    }
}
