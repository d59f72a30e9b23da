//! Parsers for grid and random-variable arguments.

use ri_tails::catalog::{AnalyticRV, DiscreteRV, RandomVariable};
use ri_tails::optimize::{lin_grid, log_grid};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Spacing {
    Log,
    Lin,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => log_grid(self.min, self.max, self.points),
            Spacing::Lin => lin_grid(self.min, self.max, self.points),
        }
    }
}

fn number(token: &str, what: &str) -> Result<f64, String> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("`{token}` is not a number ({what})"))
}

/// `min:max:points[:lin]`, log spacing by default.
pub fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("`{text}` is not of the form min:max:points[:lin]"));
    }
    let min = number(parts[0], "grid min")?;
    let max = number(parts[1], "grid max")?;
    let points: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a point count", parts[2]))?;
    let spacing = match parts.get(3).map(|s| s.trim()) {
        None | Some("log") => Spacing::Log,
        Some("lin") => Spacing::Lin,
        Some(other) => return Err(format!("`{other}`: spacing must be `lin` or `log`")),
    };
    if !(min > 0.0 && min.is_finite()) {
        return Err(format!("`{}`: grid min must be positive and finite", parts[0]));
    }
    if !(max > min && max.is_finite()) {
        return Err(format!("`{}`: grid max must be finite and exceed min", parts[1]));
    }
    if points < 2 {
        return Err(format!("`{}`: a grid needs at least 2 points", parts[2]));
    }
    Ok(GridSpec { min, max, points, spacing })
}

fn key_values(body: &str) -> Result<Vec<(&str, &str)>, String> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| kv.split_once('=').ok_or_else(|| format!("`{kv}`: expected key=value")))
        .collect()
}

/// Random variables:
/// `const:c=1`, `twopoint:v=10,p=0.01`, `atoms:0@0.99,10@0.01`,
/// `powersing:alpha=0.5[,scale=1]`.
pub fn parse_rv(text: &str) -> Result<RandomVariable, String> {
    let (kind, body) = text.split_once(':').unwrap_or((text, ""));
    let fail = |e: ri_tails::Error| e.to_string();
    let get = |kvs: &[(&str, &str)], key: &str| -> Result<Option<f64>, String> {
        kvs.iter()
            .find(|(k, _)| k.trim() == key)
            .map(|(_, v)| number(v, key))
            .transpose()
    };
    let check_keys = |kvs: &[(&str, &str)], allowed: &[&str]| -> Result<(), String> {
        match kvs.iter().find(|(k, _)| !allowed.contains(&k.trim())) {
            Some((k, _)) => Err(format!("`{k}`: unknown parameter for `{kind}`")),
            None => Ok(()),
        }
    };
    match kind.trim() {
        "const" => {
            let kvs = key_values(body)?;
            check_keys(&kvs, &["c"])?;
            let c = get(&kvs, "c")?.ok_or("`const`: missing c")?;
            Ok(DiscreteRV::constant(c).map_err(fail)?.into())
        }
        "twopoint" => {
            let kvs = key_values(body)?;
            check_keys(&kvs, &["v", "p"])?;
            let v = get(&kvs, "v")?.ok_or("`twopoint`: missing v")?;
            let p = get(&kvs, "p")?.ok_or("`twopoint`: missing p")?;
            Ok(DiscreteRV::two_point(v, p).map_err(fail)?.into())
        }
        "atoms" => {
            let atoms = body
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|a| {
                    let (v, w) = a
                        .split_once('@')
                        .ok_or_else(|| format!("`{a}`: expected value@probability"))?;
                    Ok((number(v, "atom value")?, number(w, "atom probability")?))
                })
                .collect::<Result<Vec<_>, String>>()?;
            Ok(DiscreteRV::new(atoms).map_err(fail)?.into())
        }
        "powersing" => {
            let kvs = key_values(body)?;
            check_keys(&kvs, &["alpha", "scale"])?;
            let alpha = get(&kvs, "alpha")?.ok_or("`powersing`: missing alpha")?;
            let scale = get(&kvs, "scale")?.unwrap_or(1.0);
            Ok(AnalyticRV::scaled_power_singularity(alpha, scale).map_err(fail)?.into())
        }
        other => Err(format!(
            "`{other}`: unknown random variable (const, twopoint, atoms, powersing)"
        )),
    }
}
