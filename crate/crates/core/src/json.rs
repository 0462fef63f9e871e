//! Bit-reproducible number rendering for JSON and CSV output.
//!
//! Every `f64` is written with 17 significant digits (`%.17g`), which is the
//! shortest width that round-trips any double exactly.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

/// `%.17g` rendering. Non-finite values render as `NaN`, `inf`, `-inf`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serializes as a JSON number token in `%.17g` form; non-finite as `null`.
#[derive(Debug, Clone, Copy)]
pub struct G17(pub f64);

impl Serialize for G17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        serde_json::Number::from_str(&g17(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    G17(*x).serialize(s)
}

pub fn ser_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for &x in xs {
        seq.serialize_element(&G17(x))?;
    }
    seq.end()
}

pub fn ser_vec_vec<S: Serializer>(xss: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xss.len()))?;
    for xs in xss {
        let row: Vec<G17> = xs.iter().map(|&x| G17(x)).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

pub fn ser_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, &v) in m {
        map.serialize_entry(k, &G17(v))?;
    }
    map.end()
}
