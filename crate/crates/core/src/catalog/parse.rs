//! `family ":" key "=" value {"," key "=" value}`

use std::collections::BTreeMap;

use super::psi::PsiFunction;
use super::weight::WeightFunction;
use super::young::YoungFunction;
use super::{Family, MeasureModel, SpaceDescriptor};
use crate::error::{Error, Result};

struct Params<'a> {
    family: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => {
                let v = match raw.to_ascii_lowercase().as_str() {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => raw
                        .parse::<f64>()
                        .map_err(|_| Error::parse(format!("{key}={raw}"), "not a number"))?,
                };
                if v.is_nan() {
                    return Err(Error::parse(format!("{key}={raw}"), "not a number"));
                }
                Ok(Some(v))
            }
        }
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| {
            Error::parse(self.family, format!("missing parameter `{key}`"))
        })
    }

    fn text(&self, key: &str) -> Option<&'a str> {
        self.values.get(key).copied()
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if *key != "measure" && !allowed.contains(key) {
                return Err(Error::parse(
                    *key,
                    format!("unknown parameter for family `{}`", self.family),
                ));
            }
        }
        Ok(())
    }
}

fn range_error(key: &str, value: f64, rule: &str) -> Error {
    Error::parse(format!("{key}={value}"), rule.to_string())
}

/// Parses a space description such as `lp:p=2` or `gls:B=2,beta=0.5`.
/// The measure defaults to probabilistic.
pub fn parse_space_spec(text: &str) -> Result<SpaceDescriptor> {
    let text = text.trim();
    let (family, rest) = match text.split_once(':') {
        Some((f, r)) => (f.trim(), r.trim()),
        None => (text, ""),
    };
    let mut values = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::parse(item, "expected key=value"))?;
        let (k, v) = (k.trim(), v.trim());
        if values.insert(k, v).is_some() {
            return Err(Error::parse(k, "parameter given twice"));
        }
    }
    let params = Params { family, values };
    let measure = match params.text("measure") {
        None | Some("prob") | Some("probabilistic") => MeasureModel::Probabilistic,
        Some("infinite") => MeasureModel::SigmaFiniteInfinite,
        Some(other) => {
            return Err(Error::parse(
                format!("measure={other}"),
                "expected `prob` or `infinite`",
            ))
        }
    };

    let family = match family.to_ascii_lowercase().as_str() {
        "lp" => {
            params.only(&["p"])?;
            let p = params.required("p")?;
            if !(p >= 1.0) {
                return Err(range_error("p", p, "L_p requires p >= 1"));
            }
            Family::Lp { p }
        }
        "linf" => {
            params.only(&[])?;
            Family::Lp { p: f64::INFINITY }
        }
        "lorentz" => {
            params.only(&["w", "p"])?;
            match params.text("w").unwrap_or("power") {
                "power" => {}
                other => {
                    return Err(Error::parse(format!("w={other}"), "only `w=power` is supported"))
                }
            }
            let p = params.required("p")?;
            let w = WeightFunction::power(p)
                .map_err(|_| range_error("p", p, "weight exponent must be > 0"))?;
            Family::Lorentz { w }
        }
        "orlicz" => {
            params.only(&["form", "p", "q", "c"])?;
            let p = params.required("p")?;
            let c = params.number("c")?.unwrap_or(1.0);
            if !(p >= 1.0 && p.is_finite()) {
                return Err(range_error("p", p, "Young exponent must be finite and >= 1"));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(range_error("c", c, "coefficient must be > 0"));
            }
            let default_form = if params.text("q").is_some() {
                "powerlog"
            } else {
                "power"
            };
            let n = match params.text("form").unwrap_or(default_form) {
                "power" => {
                    if params.text("q").is_some() {
                        return Err(Error::parse("q", "`q` only applies to form=powerlog"));
                    }
                    YoungFunction::scaled_power(p, c)?
                }
                "powerlog" => {
                    let q = params.number("q")?.unwrap_or(0.0);
                    YoungFunction::scaled_power_log(p, q, c)
                        .map_err(|e| Error::parse(format!("q={q}"), e.to_string()))?
                }
                other => {
                    return Err(Error::parse(
                        format!("form={other}"),
                        "expected `power` or `powerlog`",
                    ))
                }
            };
            Family::Orlicz { n }
        }
        "gls" => {
            params.only(&["form", "B", "b", "beta", "m", "r"])?;
            let b_key = if params.text("B").is_some() { "B" } else { "b" };
            let inferred = if params.text(b_key).is_some() {
                "gridblowup"
            } else if params.text("m").is_some() {
                "powerroot"
            } else if params.text("r").is_some() {
                "degenerate"
            } else {
                "gridblowup"
            };
            let psi = match params.text("form").unwrap_or(inferred) {
                "gridblowup" => {
                    params.only(&["form", "B", "b", "beta"])?;
                    let b = params.required(b_key)?;
                    let beta = params.required("beta")?;
                    if !(b > 1.0 && b.is_finite()) {
                        return Err(range_error("B", b, "B must be finite and > 1"));
                    }
                    if !(beta > 0.0 && beta.is_finite()) {
                        return Err(range_error("beta", beta, "beta must be > 0"));
                    }
                    PsiFunction::GridBlowup { b, beta }
                }
                "powerroot" => {
                    params.only(&["form", "m"])?;
                    let m = params.required("m")?;
                    PsiFunction::power_root(m).map_err(|_| range_error("m", m, "m must be > 0"))?
                }
                "degenerate" => {
                    params.only(&["form", "r"])?;
                    let r = params.required("r")?;
                    PsiFunction::degenerate(r)
                        .map_err(|_| range_error("r", r, "r must be finite and >= 1"))?
                }
                other => {
                    return Err(Error::parse(
                        format!("form={other}"),
                        "expected `gridblowup`, `powerroot` or `degenerate`",
                    ))
                }
            };
            Family::Gls { psi }
        }
        other => {
            return Err(Error::parse(
                other,
                "unknown family (expected lp, linf, lorentz, orlicz or gls)",
            ))
        }
    };
    SpaceDescriptor::new(family, measure).map_err(|e| match e {
        Error::Validation(msg) => Error::parse("measure=infinite", msg),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let lp = parse_space_spec("lp:p=2").unwrap();
        assert_eq!(lp.family, Family::Lp { p: 2.0 });
        assert_eq!(lp.measure, MeasureModel::Probabilistic);
        let gls = parse_space_spec("gls:B=2,beta=0.5").unwrap();
        assert_eq!(gls.family, Family::Gls { psi: PsiFunction::GridBlowup { b: 2.0, beta: 0.5 } });
        let inf = parse_space_spec("lp:p=3,measure=infinite").unwrap();
        assert_eq!(inf.measure, MeasureModel::SigmaFiniteInfinite);
        assert_eq!(parse_space_spec("linf").unwrap().family, Family::Lp { p: f64::INFINITY });
        let orl = parse_space_spec("orlicz:form=powerlog,p=2,q=1").unwrap();
        assert_eq!(orl.family, Family::Orlicz { n: YoungFunction::PowerLog { p: 2.0, q: 1.0, c: 1.0 } });
    }

    #[test]
    fn errors_name_offending_token() {
        let cases = [
            ("lp:p=0.5", "p=0.5"),
            ("gls:B=2,beta=0", "beta=0"),
            ("banach:p=2", "banach"),
            ("lp:q=2", "q"),
            ("lp:p=x", "p=x"),
            ("orlicz:form=cosh,p=2", "form=cosh"),
            ("lorentz:p=2,measure=infinite", "measure=infinite"),
            ("lp:p=2,measure=huge", "measure=huge"),
            ("lp:p", "p"),
        ];
        for (input, token) in cases {
            match parse_space_spec(input) {
                Err(Error::Parse { token: t, .. }) => assert_eq!(t, token, "{input}"),
                other => panic!("{input}: {other:?}"),
            }
        }
    }
}
