use std::collections::BTreeMap;

use bochner::curvature::CurvatureModel;
use bochner::{Error, Result};

/// Parses `key=value` words, rejecting unknown or repeated keys.
pub fn key_values<'a>(words: &'a [String], allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut out = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got {w:?}")))?;
        if !allowed.contains(&k) {
            return Err(Error::InvalidInput(format!("unknown key {k:?}; expected one of {}", allowed.join(", "))));
        }
        if out.insert(k, v).is_some() {
            return Err(Error::InvalidInput(format!("key {k:?} given twice")));
        }
    }
    Ok(out)
}

fn required<T: std::str::FromStr>(kv: &BTreeMap<&str, &str>, key: &str) -> Result<T> {
    let raw = kv.get(key).ok_or_else(|| Error::InvalidInput(format!("missing {key}=")))?;
    parse(key, raw)
}

fn optional<T: std::str::FromStr>(kv: &BTreeMap<&str, &str>, key: &str, default: T) -> Result<T> {
    kv.get(key).map_or(Ok(default), |raw| parse(key, raw))
}

fn parse<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::InvalidInput(format!("cannot parse {key}={raw}")))
}

pub fn constant(words: &[String]) -> Result<CurvatureModel> {
    let kv = key_values(words, &["n", "kappa"])?;
    Ok(CurvatureModel::Constant { n: required(&kv, "n")?, kappa: required(&kv, "kappa")? })
}

pub fn fubini_study(words: &[String]) -> Result<CurvatureModel> {
    let kv = key_values(words, &["m"])?;
    Ok(CurvatureModel::FubiniStudy { m: required(&kv, "m")? })
}

pub fn random(words: &[String]) -> Result<CurvatureModel> {
    let kv = key_values(words, &["n", "seed", "eps", "kappa"])?;
    Ok(CurvatureModel::RandomPerturbed {
        n: required(&kv, "n")?,
        base_kappa: optional(&kv, "kappa", 1.0)?,
        seed: optional(&kv, "seed", 0)?,
        eps: required(&kv, "eps")?,
    })
}

/// `2:1,3:0.5` as factor dimensions and curvatures.
pub fn product(spec: &str) -> Result<CurvatureModel> {
    let factors = spec
        .split(',')
        .map(|f| {
            let (d, k) = f
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("factor {f:?} is not dim:kappa")))?;
            Ok((parse("dim", d.trim())?, parse("kappa", k.trim())?))
        })
        .collect::<Result<Vec<(usize, f64)>>>()?;
    Ok(CurvatureModel::Product { factors })
}

/// `2,3` as a list of degrees.
pub fn degrees(spec: &str) -> Result<Vec<usize>> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',').map(|d| parse("degree", d.trim())).collect()
}
