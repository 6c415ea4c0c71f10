use serde::Serialize;
use stieltjes_realize::restore::{accretivity, GammaSet};
use stieltjes_realize::system::VERIFY_TOLERANCE;
use stieltjes_realize::{
    gamma_admissible, restore_system, sectoriality_angle, sweep, verification_grid, verify_realization, Error,
    Extended, FunctionClass, Sectoriality, StieltjesLikeFunction, SweepRow, SystemParams,
};

use crate::error::CliError;
use crate::format::{csv_table, fmt_num};
use crate::job::{Command, Format, JobSpec};

pub struct Artifact {
    pub text: String,
    /// False when a verification ran and failed.
    pub pass: bool,
}

fn json<S: Serialize>(value: &S) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::job(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn ok(text: String) -> Artifact {
    Artifact { text, pass: true }
}

fn json_only(cmd: Command, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::job(format!("csv output is only available for sweep and weyl, not {}", cmd.name()))),
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    class: FunctionClass,
    stieltjes: bool,
    gamma: f64,
    b: Extended<f64>,
    accretive: bool,
    strict: bool,
    sectoriality: Sectoriality<f64>,
    gamma_admissible: GammaSet<f64>,
}

#[derive(Serialize)]
struct WeylRow {
    lambda_re: f64,
    lambda_im: f64,
    m_re: f64,
    m_im: f64,
    err_est: f64,
}

#[derive(Serialize)]
struct WeylReport {
    /// `null` when the limit along the negative axis is unavailable.
    m_at_minus_zero: Option<f64>,
    rows: Vec<WeylRow>,
}

pub fn run(cmd: Command, job: &JobSpec) -> Result<Artifact, CliError> {
    job.check_command(cmd)?;
    let format = job.output.format;
    match cmd {
        Command::Classify => {
            json_only(cmd, format)?;
            let sigma = job.measure()?;
            let gamma = job.gamma()?;
            let tag = sigma.classify(gamma)?;
            let b = sigma.moments()?.b;
            let acc = accretivity(b, gamma);
            json(&ClassifyReport {
                class: tag.class,
                stieltjes: tag.stieltjes,
                gamma,
                b,
                accretive: acc.accretive,
                strict: acc.strict,
                sectoriality: sectoriality_angle(b, gamma),
                gamma_admissible: gamma_admissible(b),
            })
            .map(ok)
        }
        Command::Moments => {
            json_only(cmd, format)?;
            json(&job.measure()?.moments()?).map(ok)
        }
        Command::Restore => {
            json_only(cmd, format)?;
            let f = StieltjesLikeFunction::new(job.measure()?, job.gamma()?);
            let weyl = job.weyl()?;
            let op = job.operator(weyl.as_ref())?;
            json(&restore_system(&f, &op)?).map(ok)
        }
        Command::Sweep => {
            let sigma = job.measure()?;
            let range = job.gamma_range()?;
            let weyl = job.weyl()?;
            let op = job.operator(weyl.as_ref())?;
            let moments = sigma.moments()?;
            let theta = match moments.b {
                Extended::Finite(_) => op.theta.ok_or(Error::MissingTheta)?,
                Extended::Infinite => op.theta.unwrap_or(-op.m),
            };
            let rows = sweep(moments.b, theta, op.m, op.xi_for(moments.i2), range)?;
            match format {
                Format::Json => json(&rows).map(ok),
                Format::Csv => sweep_csv(&rows).map(ok),
            }
        }
        Command::Verify => {
            json_only(cmd, format)?;
            let f = StieltjesLikeFunction::new(job.measure()?, job.gamma()?);
            let weyl = job.weyl()?.ok_or_else(|| CliError::job("verify job needs a potential"))?;
            let op = job.operator(Some(&weyl))?;
            let restored = restore_system(&f, &op)?;
            let params = SystemParams::from_restored(&restored, weyl)?;
            let samples = job.samples().unwrap_or_else(verification_grid::<f64>);
            let tol = job.tolerances.verify.unwrap_or(VERIFY_TOLERANCE);
            let report = verify_realization(&f, &params, &samples, tol)?;
            Ok(Artifact { text: json(&report)?, pass: report.pass })
        }
        Command::Weyl => {
            let ev = job.weyl()?.ok_or_else(|| CliError::job("weyl job needs a potential"))?;
            let mut rows = Vec::new();
            for lambda in job.lambdas()? {
                let v = ev.weyl_m_with_error(lambda)?;
                rows.push(WeylRow { lambda_re: lambda.re, lambda_im: lambda.im, m_re: v.m.re, m_im: v.m.im, err_est: v.err_est });
            }
            match format {
                Format::Json => json(&WeylReport { m_at_minus_zero: ev.weyl_m_at_minus_zero().ok(), rows }).map(ok),
                Format::Csv => weyl_csv(&rows).map(ok),
            }
        }
    }
}

fn sweep_csv(rows: &[SweepRow<f64>]) -> Result<String, CliError> {
    let header = ["gamma", "h_re", "h_im", "mu", "alpha_rad", "accretive", "circle_residual", "eta_residual"];
    let body = rows.iter().map(|r| {
        vec![
            fmt_num(r.gamma),
            fmt_num(r.h.re),
            fmt_num(r.h.im),
            match r.mu {
                Extended::Finite(mu) => fmt_num(mu),
                Extended::Infinite => "inf".into(),
            },
            match r.sectoriality {
                Sectoriality::Sectorial(a) => fmt_num(a),
                Sectoriality::Extremal => "extremal".into(),
                Sectoriality::NonAccretive => "none".into(),
            },
            u8::from(r.accretive).to_string(),
            fmt_num(r.circle_residual),
            r.eta_residual.map(fmt_num).unwrap_or_default(),
        ]
    });
    csv_table(&header, body).map_err(|e| CliError::job(format!("csv output failed: {e}")))
}

fn weyl_csv(rows: &[WeylRow]) -> Result<String, CliError> {
    let header = ["lambda_re", "lambda_im", "m_re", "m_im", "err_est"];
    let body = rows
        .iter()
        .map(|r| vec![fmt_num(r.lambda_re), fmt_num(r.lambda_im), fmt_num(r.m_re), fmt_num(r.m_im), fmt_num(r.err_est)]);
    csv_table(&header, body).map_err(|e| CliError::job(format!("csv output failed: {e}")))
}
