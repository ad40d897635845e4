//! Parsing of censoring-scheme descriptors. The grammar round-trips with
//! the library's `Display` implementation: `complete`, `type-i:tau=2.5`,
//! `hybrid-ii:r=10,tau=1.4`, `progressive-i:taus=0.4+0.8,removals=3+3`, ...

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use mobw::data::CensoringScheme;

pub fn parse_scheme(text: &str) -> Result<CensoringScheme> {
    let (kind, rest) = match text.split_once(':') {
        Some((kind, rest)) => (kind.trim(), Some(rest)),
        None => (text.trim(), None),
    };
    let mut fields = parse_fields(rest)?;
    let scheme = match kind {
        "complete" => CensoringScheme::Complete,
        "type-i" => CensoringScheme::TypeI { tau: take_f64(&mut fields, "tau")? },
        "type-ii" => CensoringScheme::TypeII { r: take_usize(&mut fields, "r")? },
        "hybrid-i" => CensoringScheme::HybridI {
            r: take_usize(&mut fields, "r")?,
            tau: take_f64(&mut fields, "tau")?,
        },
        "hybrid-ii" => CensoringScheme::HybridII {
            r: take_usize(&mut fields, "r")?,
            tau: take_f64(&mut fields, "tau")?,
        },
        "progressive-i" => CensoringScheme::ProgressiveI {
            taus: take_f64_list(&mut fields, "taus")?,
            removals: fields
                .remove("removals")
                .map(|v| parse_usize_list(&v))
                .transpose()?
                .unwrap_or_default(),
        },
        "progressive-ii" => CensoringScheme::ProgressiveII {
            removals: take_usize_list(&mut fields, "removals")?,
        },
        other => bail!(
            "unknown censoring scheme `{other}` (expected complete, type-i, type-ii, \
             hybrid-i, hybrid-ii, progressive-i, or progressive-ii)"
        ),
    };
    if let Some(stray) = fields.keys().next() {
        bail!("scheme `{kind}` does not take a `{stray}` field");
    }
    Ok(scheme)
}

fn parse_fields(rest: Option<&str>) -> Result<BTreeMap<String, String>> {
    let mut fields = BTreeMap::new();
    let Some(rest) = rest else {
        return Ok(fields);
    };
    for part in rest.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            bail!("scheme field `{part}` is not of the form key=value");
        };
        fields.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(fields)
}

fn take(fields: &mut BTreeMap<String, String>, key: &str) -> Result<String> {
    fields
        .remove(key)
        .with_context(|| format!("scheme is missing its `{key}` field"))
}

fn take_f64(fields: &mut BTreeMap<String, String>, key: &str) -> Result<f64> {
    let raw = take(fields, key)?;
    raw.parse().with_context(|| format!("scheme field {key}={raw}"))
}

fn take_usize(fields: &mut BTreeMap<String, String>, key: &str) -> Result<usize> {
    let raw = take(fields, key)?;
    raw.parse().with_context(|| format!("scheme field {key}={raw}"))
}

fn parse_usize_list(raw: &str) -> Result<Vec<usize>> {
    raw.split('+')
        .map(|x| x.trim().parse().with_context(|| format!("list entry `{x}`")))
        .collect()
}

fn parse_f64_list(raw: &str) -> Result<Vec<f64>> {
    raw.split('+')
        .map(|x| x.trim().parse().with_context(|| format!("list entry `{x}`")))
        .collect()
}

fn take_usize_list(fields: &mut BTreeMap<String, String>, key: &str) -> Result<Vec<usize>> {
    parse_usize_list(&take(fields, key)?)
}

fn take_f64_list(fields: &mut BTreeMap<String, String>, key: &str) -> Result<Vec<f64>> {
    parse_f64_list(&take(fields, key)?)
}
