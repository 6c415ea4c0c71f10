use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;
use stieltjes_realize::quadrature::QuadConfig;
use stieltjes_realize::{
    boundary_trace_constant, GammaRange, HalfLinePotential, OperatorData, SpectralMeasure, WeylEvaluator,
};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Moments,
    Restore,
    Sweep,
    Verify,
    Weyl,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Moments => "moments",
            Command::Restore => "restore",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
            Command::Weyl => "weyl",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// `[lo, hi, n]` or `{"lo":..,"hi":..,"n":..}`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum RangeSpec {
    Tuple(f64, f64, usize),
    Named { lo: f64, hi: f64, n: usize },
}

impl RangeSpec {
    pub fn to_range(self) -> Result<GammaRange<f64>, CliError> {
        let (lo, hi, n) = match self {
            RangeSpec::Tuple(lo, hi, n) | RangeSpec::Named { lo, hi, n } => (lo, hi, n),
        };
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || n == 0 {
            return Err(CliError::job("gamma_range needs finite lo <= hi and n >= 1"));
        }
        Ok(GammaRange { lo, hi, n })
    }
}

/// Operator data with every field optional; missing values come from the potential.
#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub theta: Option<f64>,
    pub m: Option<f64>,
    pub c: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quad_abs: Option<f64>,
    pub quad_rel: Option<f64>,
    pub quad_max_panels: Option<usize>,
    pub ode: Option<f64>,
    pub truncation_length: Option<f64>,
    pub verify: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Option<Command>,
    pub measure: Option<SpectralMeasure<f64>>,
    pub gamma: Option<f64>,
    pub gamma_range: Option<RangeSpec>,
    pub operator: Option<OperatorSpec>,
    pub potential: Option<HalfLinePotential<f64>>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Verification points `[re, im]`; defaults to the 20-point log-polar grid.
    pub samples: Option<Vec<[f64; 2]>>,
    /// Spectral parameters `[re, im]` for the `weyl` command.
    pub lambdas: Option<Vec<[f64; 2]>>,
}

fn positive(x: Option<f64>, name: &str) -> Result<(), CliError> {
    match x {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(CliError::job(format!("tolerances.{name} must be positive"))),
        _ => Ok(()),
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let job: JobSpec = serde_json::from_str(text).map_err(|e| CliError::job(format!("malformed job: {e}")))?;
        let t = &job.tolerances;
        positive(t.quad_abs, "quad_abs")?;
        positive(t.quad_rel, "quad_rel")?;
        positive(t.ode, "ode")?;
        positive(t.verify, "verify")?;
        if t.quad_max_panels == Some(0) {
            return Err(CliError::job("tolerances.quad_max_panels must be positive"));
        }
        Ok(job)
    }

    pub fn check_command(&self, cmd: Command) -> Result<(), CliError> {
        match self.command {
            Some(c) if c != cmd => Err(CliError::job(format!(
                "job declares command \"{}\" but \"{}\" was requested",
                c.name(),
                cmd.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn measure(&self) -> Result<SpectralMeasure<f64>, CliError> {
        let m = self.measure.clone().ok_or_else(|| CliError::job("job needs a measure"))?;
        let t = &self.tolerances;
        if t.quad_abs.is_none() && t.quad_rel.is_none() && t.quad_max_panels.is_none() {
            return Ok(m);
        }
        Ok(m.with_quadrature(QuadConfig {
            abs_tol: t.quad_abs.unwrap_or(1e-10),
            rel_tol: t.quad_rel.unwrap_or(1e-13),
            max_panels: t.quad_max_panels.unwrap_or(4000),
        }))
    }

    /// The single free term; rejects jobs that also carry a range.
    pub fn gamma(&self) -> Result<f64, CliError> {
        match (self.gamma, self.gamma_range) {
            (Some(_), Some(_)) => Err(CliError::job("give exactly one of gamma and gamma_range")),
            (Some(g), None) if g.is_finite() => Ok(g),
            (Some(_), None) => Err(CliError::job("gamma must be finite")),
            (None, _) => Err(CliError::job("job needs gamma")),
        }
    }

    pub fn gamma_range(&self) -> Result<GammaRange<f64>, CliError> {
        match (self.gamma, self.gamma_range) {
            (None, Some(r)) => r.to_range(),
            (Some(_), Some(_)) => Err(CliError::job("give exactly one of gamma and gamma_range")),
            _ => Err(CliError::job("job needs gamma_range")),
        }
    }

    pub fn weyl(&self) -> Result<Option<WeylEvaluator<f64>>, CliError> {
        let Some(p) = self.potential.clone() else {
            return Ok(None);
        };
        let mut ev = WeylEvaluator::new(p)?;
        if let Some(tol) = self.tolerances.ode {
            ev = ev.with_tolerance(tol)?;
        }
        if let Some(l) = self.tolerances.truncation_length {
            ev = ev.with_length(l)?;
        }
        Ok(Some(ev))
    }

    /// Operator data: explicit fields win, the rest is computed from the potential.
    pub fn operator(&self, weyl: Option<&WeylEvaluator<f64>>) -> Result<OperatorData<f64>, CliError> {
        let spec = self.operator.unwrap_or_default();
        let m = match (spec.m, weyl) {
            (Some(m), _) => m,
            (None, Some(ev)) => ev.weyl_m_at_minus_zero()?,
            (None, None) => return Err(CliError::job("job needs operator.m or a potential")),
        };
        let c = match (spec.c, spec.xi, weyl) {
            (Some(c), _, _) => Some(c),
            (None, None, Some(ev)) => boundary_trace_constant(ev.potential()).ok(),
            _ => None,
        };
        if let Some(c) = c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(CliError::job("operator.c must be positive"));
            }
        }
        Ok(OperatorData { theta: spec.theta, m, c, xi: spec.xi })
    }

    pub fn samples(&self) -> Option<Vec<Complex64>> {
        self.samples.as_ref().map(|s| s.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }

    pub fn lambdas(&self) -> Result<Vec<Complex64>, CliError> {
        let l = self.lambdas.as_ref().ok_or_else(|| CliError::job("weyl job needs lambdas"))?;
        if l.is_empty() {
            return Err(CliError::job("lambdas must not be empty"));
        }
        Ok(l.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }
}
