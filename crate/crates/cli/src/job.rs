//! Job descriptions and their JSON form.

use serde_json::Value;
use toricoh::{CoveringSpec, DivisorClass, Rational, RuledToricSurface};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Task {
    Delta { d: i64, p: i64, k: i64 },
    SurfaceInfo,
    Cohomology { divisor: DivisorClass },
    Covering(Box<CoveringSpec>),
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Delta { .. } => "delta",
            Task::SurfaceInfo => "surface-info",
            Task::Cohomology { .. } => "cohomology",
            Task::Covering(_) => "covering",
        }
    }
}

/// A validated unit of work. `path` locates it in its input for error messages.
#[derive(Debug, Clone)]
pub struct Job {
    pub path: String,
    pub surface: Option<RuledToricSurface>,
    pub task: Task,
}

/// A JSON value together with its location.
struct At<'a> {
    v: &'a Value,
    path: String,
}

impl<'a> At<'a> {
    fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::Input { path: self.path.clone(), msg: msg.into() }
    }

    fn opt(&self, key: &str) -> Option<At<'a>> {
        self.v.get(key).map(|v| At { v, path: format!("{}.{key}", self.path) })
    }

    fn key(&self, key: &str) -> Result<At<'a>, CliError> {
        if !self.v.is_object() {
            return Err(self.err("expected an object"));
        }
        self.opt(key).ok_or_else(|| self.err(format!("missing field \"{key}\"")))
    }

    fn items(&self) -> Result<Vec<At<'a>>, CliError> {
        let arr = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, v)| At { v, path: format!("{}[{i}]", self.path) })
            .collect())
    }

    /// Integers may also arrive as decimal strings.
    fn int(&self) -> Result<i64, CliError> {
        match self.v {
            Value::Number(n) => n.as_i64().ok_or_else(|| self.err(format!("expected an integer, got {n}"))),
            Value::String(s) => s.trim().parse().map_err(|_| self.err(format!("expected an integer, got \"{s}\""))),
            other => Err(self.err(format!("expected an integer, got {other}"))),
        }
    }

    fn rational(&self) -> Result<Rational, CliError> {
        match self.v {
            Value::String(s) => s.parse().map_err(|_| self.err(format!("expected a rational \"num/den\", got \"{s}\""))),
            Value::Number(_) => Ok(Rational::from(self.int()?)),
            other => Err(self.err(format!("expected a rational \"num/den\", got {other}"))),
        }
    }

    fn str(&self) -> Result<&'a str, CliError> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn divisor(&self) -> Result<DivisorClass, CliError> {
        let xs = self.items()?;
        if xs.len() != 4 {
            return Err(self.err(format!("expected [a,b,alpha,beta], got {} entries", xs.len())));
        }
        Ok(DivisorClass::raw(xs[0].int()?, xs[1].int()?, xs[2].int()?, xs[3].int()?))
    }
}

fn core_err(path: &str, e: toricoh::Error) -> CliError {
    CliError::Core { path: path.to_string(), source: e }
}

pub fn surface_from_parts(d1: i64, d2: i64, n1: i64, n2: i64, r: Rational, path: &str) -> Result<RuledToricSurface, CliError> {
    let s = RuledToricSurface::new(d1, d2, n1, n2, r).map_err(|e| core_err(path, e))?;
    // K is validated here so that a failure is attributed to the surface
    s.canonical_divisor().map_err(|e| core_err(path, e))?;
    Ok(s)
}

fn surface(at: &At) -> Result<RuledToricSurface, CliError> {
    let r = match at.opt("r") {
        Some(r) => r.rational()?,
        None => Rational::zero(),
    };
    surface_from_parts(
        at.key("d1")?.int()?,
        at.key("d2")?.int()?,
        at.key("n1")?.int()?,
        at.key("n2")?.int()?,
        r,
        &at.path,
    )
}

pub fn covering(
    s: &RuledToricSurface,
    n: i64,
    h: DivisorClass,
    components: Vec<(i64, DivisorClass)>,
    path: &str,
) -> Result<CoveringSpec, CliError> {
    CoveringSpec::new(s.clone(), components, h, n).map_err(|e| core_err(path, e))
}

fn job_at(at: &At) -> Result<Job, CliError> {
    let task = at.key("task")?;
    let name = task.str()?;
    let needs_surface = name != "delta";
    let s = match at.opt("surface") {
        Some(x) => Some(surface(&x)?),
        None if needs_surface => return Err(at.err("missing field \"surface\"")),
        None => None,
    };
    let task = match name {
        "delta" => Task::Delta { d: at.key("d")?.int()?, p: at.key("p")?.int()?, k: at.key("k")?.int()? },
        "surface-info" => Task::SurfaceInfo,
        "cohomology" => {
            let s = s.as_ref().expect("surface present");
            Task::Cohomology { divisor: s.canonical_form(at.key("divisor")?.divisor()?) }
        }
        "covering" => {
            let s = s.as_ref().expect("surface present");
            let c = at.key("covering")?;
            let comps = c
                .key("components")?
                .items()?
                .iter()
                .map(|x| Ok((x.key("mult")?.int()?, x.key("class")?.divisor()?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let n = c.key("n")?.int()?;
            let h = c.key("H")?.divisor()?;
            Task::Covering(Box::new(covering(s, n, h, comps, &c.path)?))
        }
        other => {
            return Err(task.err(format!(
                "unknown task \"{other}\" (expected delta, surface-info, cohomology or covering)"
            )))
        }
    };
    Ok(Job { path: at.path.clone(), surface: s, task })
}

/// Parses one job object.
pub fn parse_job(text: &str) -> Result<Job, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input { path: "$".into(), msg: e.to_string() })?;
    job_at(&At { v: &v, path: "$".into() })
}

/// Parses `{"jobs":[…]}`, or a single job object. Malformed jobs become
/// per-job errors; only a malformed envelope fails the whole input.
pub fn parse_batch(text: &str) -> Result<Vec<Result<Job, CliError>>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input { path: "$".into(), msg: e.to_string() })?;
    let root = At { v: &v, path: "$".into() };
    match root.opt("jobs") {
        Some(jobs) => Ok(jobs.items()?.iter().map(job_at).collect()),
        None => Ok(vec![job_at(&root)]),
    }
}

/// `"a,b,alpha,beta"` as typed on the command line.
pub fn parse_divisor_arg(text: &str, path: &str) -> Result<DivisorClass, CliError> {
    let xs: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Input { path: path.to_string(), msg: format!("expected a,b,alpha,beta, got \"{text}\"") };
    if xs.len() != 4 {
        return Err(bad());
    }
    let mut out = [0i64; 4];
    for (o, x) in out.iter_mut().zip(xs) {
        *o = x.parse().map_err(|_| bad())?;
    }
    Ok(out.into())
}

/// `"M:a,b,alpha,beta"`.
pub fn parse_component_arg(text: &str, path: &str) -> Result<(i64, DivisorClass), CliError> {
    let (m, d) = text.split_once(':').ok_or_else(|| CliError::Input {
        path: path.to_string(),
        msg: format!("expected M:a,b,alpha,beta, got \"{text}\""),
    })?;
    let m = m.trim().parse().map_err(|_| CliError::Input {
        path: path.to_string(),
        msg: format!("multiplicity \"{m}\" is not an integer"),
    })?;
    Ok((m, parse_divisor_arg(d, path)?))
}
