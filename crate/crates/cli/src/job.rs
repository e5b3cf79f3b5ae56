//! Job files: a TOML document naming a representation and a polynomial curve.

use std::path::Path;
use std::sync::Arc;

use orbitlift::catalog;
use orbitlift::lift::{Mode, OrbitCurve};
use orbitlift::rat::{self, int};
use orbitlift::rep::{Group, Preimage, RepSpec, Section};
use orbitlift::rewrite::{Rewriter, TableScheme};
use orbitlift::{Matrix, MultiPoly, Rational, Representation};
use serde::Deserialize;

use crate::CliError;

/// Everything a run needs, parsed and validated.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub rep: Arc<Representation>,
    /// Coefficients of each component in ascending powers of `t`.
    pub curve: Vec<Vec<Rational>>,
    pub order: usize,
    pub mode: Mode,
    /// Centers of the local lifts; one center means no gluing.
    pub interval: Vec<Rational>,
    pub outputs: Outputs,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outputs {
    pub jets: bool,
    pub residuals: bool,
    pub samples: Option<SampleSpec>,
    /// Rank to run the condition report at.
    pub conditions: Option<usize>,
    pub membership: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs { jets: true, residuals: true, samples: Some(SampleSpec::default()), conditions: None, membership: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSpec {
    pub count: usize,
    /// Defaults to the span of the lift intervals.
    pub range: Option<(Rational, Rational)>,
    pub digits: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { count: 11, range: None, digits: 12 }
    }
}

/// An integer or a `"p/q"` string. Floats do not deserialize.
#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn value(&self) -> Result<Rational, CliError> {
        match self {
            Num::Int(k) => Ok(int(*k)),
            Num::Str(s) => rat::parse(s).map_err(|e| CliError::Format(e.to_string())),
        }
    }
}

fn values(v: &[Num]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(Num::value).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRep {
    Name(String),
    Inline(Box<RawEntry>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    representation: RawRep,
    curve: Vec<String>,
    order: usize,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    interval: Vec<Num>,
    #[serde(default)]
    outputs: Option<RawOutputs>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    #[serde(default = "yes")]
    jets: bool,
    #[serde(default = "yes")]
    residuals: bool,
    #[serde(default)]
    samples: Option<RawSamples>,
    #[serde(default)]
    conditions: Option<usize>,
    #[serde(default)]
    membership: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    count: usize,
    #[serde(default)]
    range: Option<[Num; 2]>,
    #[serde(default)]
    digits: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    dim: usize,
    #[serde(default)]
    variables: Option<Vec<String>>,
    #[serde(default)]
    metric: Option<Vec<Num>>,
    generators: Vec<String>,
    group: RawGroup,
    #[serde(default)]
    relations: Vec<String>,
    /// Pairs `[p over x, q over y]` with `q∘σ = p`.
    #[serde(default)]
    tables: Vec<[String; 2]>,
    #[serde(default)]
    preimage: Option<String>,
    #[serde(default)]
    axis: Option<usize>,
    #[serde(default)]
    notes: String,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawGroup {
    Finite {
        elements: Vec<Vec<Vec<Num>>>,
    },
    Continuous {
        family: String,
        tangents: Vec<Vec<Vec<Num>>>,
        samples: Vec<Vec<Vec<Num>>>,
        #[serde(default)]
        fixed_basis: Vec<Vec<Num>>,
    },
}

fn matrix(rows: &[Vec<Num>]) -> Result<Matrix, CliError> {
    let rows = rows.iter().map(|r| values(r)).collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows).map_err(|e| CliError::Format(e.to_string()))
}

fn matrices(ms: &[Vec<Vec<Num>>]) -> Result<Vec<Matrix>, CliError> {
    ms.iter().map(|m| matrix(m)).collect()
}

impl RawEntry {
    fn build(self) -> Result<Arc<Representation>, CliError> {
        let dim = self.dim;
        let names: Vec<String> = self.variables.clone().unwrap_or_else(|| (1..=dim).map(|i| format!("x{i}")).collect());
        if names.len() != dim {
            return Err(CliError::Format(format!("{} variables for dimension {dim}", names.len())));
        }
        let x: Vec<&str> = names.iter().map(String::as_str).collect();
        let n = self.generators.len();
        let y_names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        let y: Vec<&str> = y_names.iter().map(String::as_str).collect();
        let parse = |s: &str, vars: &[&str]| MultiPoly::parse(s, vars).map_err(|e| CliError::Format(e.to_string()));

        let sigma = self.generators.iter().map(|s| parse(s, &x)).collect::<Result<Vec<_>, _>>()?;
        let degrees = sigma
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.homogeneous_degree().filter(|&d| d > 0).ok_or_else(|| {
                    CliError::Engine(orbitlift::Error::ValidationFailed(format!("generator {} is not homogeneous", i + 1)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let metric = match &self.metric {
            Some(m) => values(m)?,
            None => vec![int(1); dim],
        };
        let relations = self.relations.iter().map(|s| parse(s, &y)).collect::<Result<Vec<_>, _>>()?;
        let entries = self
            .tables
            .iter()
            .map(|[p, q]| Ok((parse(p, &x)?, parse(q, &y)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let (group, section) = match &self.group {
            RawGroup::Finite { elements } => (Group::Finite { elements: matrices(elements)? }, Some(Section::Whole)),
            RawGroup::Continuous { family, tangents, samples, fixed_basis } => (
                Group::Continuous {
                    family: family.clone(),
                    tangents: matrices(tangents)?,
                    samples: matrices(samples)?,
                    fixed_basis: fixed_basis.iter().map(|v| values(v)).collect::<Result<_, _>>()?,
                },
                None,
            ),
        };
        let preimage = match self.preimage.as_deref() {
            None | Some("none") => Preimage::None,
            Some("norm_axis") => Preimage::NormAxis { axis: self.axis.unwrap_or(0) },
            Some(other) => return Err(CliError::Format(format!("unknown preimage method `{other}`"))),
        };
        let rep = Arc::new(Representation::new(RepSpec {
            name: self.name,
            dim,
            metric,
            group,
            sigma,
            degrees,
            relations,
            rewriter: Rewriter::Tables(TableScheme { entries }),
            preimage,
            section,
            slices: Vec::new(),
            max_depth: dim.max(1),
            notes: self.notes,
        }));
        rep.validate()?;
        Ok(rep)
    }
}

/// Coefficients of a polynomial in `t`, lowest power first.
pub fn parse_curve_component(src: &str) -> Result<Vec<Rational>, CliError> {
    let p = MultiPoly::parse(src, &["t"]).map_err(|e| CliError::Format(format!("curve `{src}`: {e}")))?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    Ok((0..=deg).map(|k| p.coeff(&[k as u32])).collect())
}

pub fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "analytic" => Ok(Mode::Analytic),
        "smooth" => Ok(Mode::Smooth),
        other => Err(CliError::Format(format!("unknown mode `{other}`"))),
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, CliError> {
        let raw: RawJob = toml::from_str(text).map_err(|e| CliError::Format(e.to_string()))?;
        let rep = match raw.representation {
            RawRep::Name(name) => catalog::load(&name)?,
            RawRep::Inline(entry) => entry.build()?,
        };
        let curve = raw.curve.iter().map(|s| parse_curve_component(s)).collect::<Result<Vec<_>, _>>()?;
        if curve.len() != rep.n() {
            return Err(CliError::Format(format!(
                "curve has {} components but {} has {} generators",
                curve.len(),
                rep.name,
                rep.n()
            )));
        }
        if raw.order < 1 {
            return Err(CliError::Format("order must be at least 1".into()));
        }
        let mode = parse_mode(raw.mode.as_deref().unwrap_or("analytic"))?;
        let mut interval = values(&raw.interval)?;
        if interval.is_empty() {
            interval.push(int(0));
        }
        if interval.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Format("interval centers must be strictly increasing".into()));
        }
        let outputs = match raw.outputs {
            None => Outputs::default(),
            Some(o) => Outputs {
                jets: o.jets,
                residuals: o.residuals,
                samples: match o.samples {
                    None => None,
                    Some(s) => Some(SampleSpec {
                        count: s.count,
                        range: match s.range {
                            Some([a, b]) => Some((a.value()?, b.value()?)),
                            None => None,
                        },
                        digits: s.digits.unwrap_or(12).max(1),
                    }),
                },
                conditions: o.conditions,
                membership: o.membership,
            },
        };
        Ok(JobSpec { rep, curve, order: raw.order, mode, interval, outputs })
    }

    pub fn load(path: &Path) -> Result<JobSpec, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        JobSpec::parse(&text)
    }

    pub fn orbit_curve(&self) -> Result<OrbitCurve, CliError> {
        Ok(OrbitCurve::from_polynomials(self.rep.clone(), self.curve.clone(), self.order)?)
    }
}
