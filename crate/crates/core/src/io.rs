//! JSON model and values files.
//!
//! A model lists attributes, each either explicit
//! `{"name", "elements": [...], "covers": [[lo, hi], ...]}` or a shorthand
//! `{"name", "kind": "boolean" | "ternary" | {"chain": m}}`.
//!
//! A values file is one of
//! - dense: `{"order": "lex", "values": [...]}` in [`ProductLattice::index_of`] order,
//! - sparse: `{"default": d, "points": [{"point": [labels], "value": x}, ...]}`,
//! - capacity: `{"n": n, "values": [...]}` by bitmask, bit `i` for attribute `i`,
//! - bi-capacity: `{"n": n, "entries": {"{1}|{2}": x, ...}, "default": d}`,
//!   players numbered from `1`.
//!
//! Numbers are read exactly from their decimal text; `"p/q"` strings are
//! accepted wherever a number is.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::product::{fnv1a, Attribute, ProductElement, ProductLattice};
use crate::transforms::{LatticeFunction, SparseFunction, Valuation};
use crate::value::{format_rational, parse_rational, Rational};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    attributes: Vec<AttributeSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeSpec {
    name: String,
    elements: Option<Vec<String>>,
    covers: Option<Vec<(String, String)>>,
    kind: Option<KindSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum KindSpec {
    Named(String),
    Chain { chain: usize },
}

fn context(what: impl std::fmt::Display) -> impl Fn(Error) -> Error {
    move |e| Error::Parse(format!("{what}: {e}"))
}

fn attribute_lattice(spec: &AttributeSpec) -> Result<FiniteLattice> {
    let at = context(format!("attribute `{}`", spec.name));
    match (&spec.kind, &spec.elements) {
        (Some(_), Some(_)) => Err(at(Error::Parse("give either `kind` or `elements`, not both".into()))),
        (Some(KindSpec::Named(k)), None) => match k.as_str() {
            "boolean" => Ok(FiniteLattice::boolean(&spec.name)),
            "ternary" => Ok(FiniteLattice::ternary(&spec.name)),
            other => Err(at(Error::Parse(format!("unknown kind `{other}`")))),
        },
        (Some(KindSpec::Chain { chain }), None) => FiniteLattice::chain_of(&spec.name, *chain).map_err(at),
        (None, Some(elements)) => {
            let covers = spec.covers.as_deref().unwrap_or(&[]);
            let pairs: Vec<(&str, &str)> = covers.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            FiniteLattice::build(&spec.name, elements, &pairs).map_err(at)
        }
        (None, None) => Err(at(Error::Parse("missing `elements` or `kind`".into()))),
    }
}

/// Attributes of a model, without requiring each to be a lattice.
pub fn parse_attributes(text: &str) -> Result<Vec<(String, FiniteLattice)>> {
    let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("model: {e}")))?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in &spec.attributes {
        if !seen.insert(a.name.clone()) {
            return Err(Error::Parse(format!("model: duplicate attribute name `{}`", a.name)));
        }
        out.push((a.name.clone(), attribute_lattice(a)?));
    }
    Ok(out)
}

pub fn parse_model(text: &str) -> Result<ProductLattice> {
    let attributes = parse_attributes(text)?
        .into_iter()
        .map(|(name, lattice)| Attribute { name, lattice: Arc::new(lattice) })
        .collect();
    ProductLattice::new(attributes)
}

/// Explicit JSON form of a product: every attribute with its elements and covers.
pub fn model_to_json(p: &ProductLattice) -> Value {
    let attrs: Vec<Value> = p
        .attributes()
        .iter()
        .map(|a| {
            let l = &a.lattice;
            let covers: Vec<Value> = l
                .covers()
                .iter()
                .map(|&(lo, hi)| Value::from(vec![l.label(lo).to_string(), l.label(hi).to_string()]))
                .collect();
            serde_json::json!({ "name": a.name, "elements": l.labels(), "covers": covers })
        })
        .collect();
    serde_json::json!({ "attributes": attrs })
}

/// Values as read, dense or sparse.
#[derive(Debug, Clone)]
pub enum Values {
    Dense(LatticeFunction<Rational>),
    Sparse(SparseFunction<Rational>),
}

impl Values {
    pub fn domain(&self) -> &ProductLattice {
        match self {
            Values::Dense(f) => f.domain(),
            Values::Sparse(f) => f.domain(),
        }
    }

    /// Dense form, materializing a sparse function if the product is small
    /// enough.
    pub fn to_dense(&self) -> Result<LatticeFunction<Rational>> {
        match self {
            Values::Dense(f) => Ok(f.clone()),
            Values::Sparse(f) => LatticeFunction::from_valuation(f),
        }
    }
}

impl Valuation<Rational> for Values {
    fn domain(&self) -> &ProductLattice {
        Values::domain(self)
    }

    fn value(&self, x: &ProductElement) -> Rational {
        match self {
            Values::Dense(f) => f.value(x),
            Values::Sparse(f) => f.value(x),
        }
    }
}

fn number(v: &Value, what: &str) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::Parse(format!("{what}: expected a number or a \"p/q\" string"))),
    };
    parse_rational(&text).map_err(context(what))
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("values: missing `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what}: expected an array")))
}

fn numbers(v: &Value, what: &str) -> Result<Vec<Rational>> {
    array(v, what)?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{what}[{i}]")))
        .collect()
}

/// Reads a values file. Capacity and bi-capacity shorthands may omit the
/// model, in which case `2^n` or `3^n` is used.
pub fn parse_values(text: &str, model: Option<Arc<ProductLattice>>) -> Result<Values> {
    let json: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("values: {e}")))?;
    let obj = json.as_object().ok_or_else(|| Error::Parse("values: expected a JSON object".into()))?;
    let need_model = || model.clone().ok_or_else(|| Error::Parse("values: this format needs a model".into()));
    if obj.contains_key("entries") {
        return parse_bicapacity(obj, model).map(Values::Dense);
    }
    if obj.contains_key("n") {
        return parse_capacity(obj, model).map(Values::Dense);
    }
    if obj.contains_key("points") {
        let domain = need_model()?;
        let default = match obj.get("default") {
            Some(d) => number(d, "values.default")?,
            None => Rational::from_integer(0.into()),
        };
        let mut f = SparseFunction::new(Arc::clone(&domain), default);
        for (i, p) in array(field(obj, "points")?, "values.points")?.iter().enumerate() {
            let what = format!("values.points[{i}]");
            let labels: Vec<String> = p
                .get("point")
                .and_then(|l| serde_json::from_value(l.clone()).ok())
                .ok_or_else(|| Error::Parse(format!("{what}: `point` must be a list of labels")))?;
            let x = domain.parse_labels(&labels).map_err(context(&what))?;
            let value = number(p.get("value").unwrap_or(&Value::Null), &format!("{what}.value"))?;
            if f.insert(x, value)?.is_some() {
                return Err(Error::Parse(format!("{what}: point listed twice")));
            }
        }
        return Ok(Values::Sparse(f));
    }
    if obj.contains_key("values") {
        let domain = need_model()?;
        match obj.get("order").and_then(Value::as_str) {
            Some("lex") | None => {}
            Some(other) => return Err(Error::Parse(format!("values: unknown order `{other}`"))),
        }
        let values = numbers(field(obj, "values")?, "values.values")?;
        return LatticeFunction::new(domain, values).map(Values::Dense).map_err(context("values"));
    }
    Err(Error::Parse("values: expected `values`, `points`, `n` or `entries`".into()))
}

fn shorthand_domain(model: Option<Arc<ProductLattice>>, n: usize, len: usize, kind: &str) -> Result<Arc<ProductLattice>> {
    match model {
        Some(p) => {
            if p.n() != n || p.lattices().any(|l| l.len() != len || !l.flags().is_linear) {
                return Err(Error::Parse(format!("values: {kind} shorthand needs a model of {n} chains with {len} elements")));
            }
            Ok(p)
        }
        None if len == 2 => Ok(Arc::new(ProductLattice::boolean(n)?)),
        None => Ok(Arc::new(ProductLattice::ternary(n)?)),
    }
}

fn shorthand_n(obj: &serde_json::Map<String, Value>, limit: usize) -> Result<usize> {
    let n = field(obj, "n")?
        .as_u64()
        .filter(|&n| n >= 1 && n <= limit as u64)
        .ok_or_else(|| Error::Parse(format!("values.n: expected an integer in 1..={limit}")))?;
    Ok(n as usize)
}

fn parse_capacity(obj: &serde_json::Map<String, Value>, model: Option<Arc<ProductLattice>>) -> Result<LatticeFunction<Rational>> {
    let n = shorthand_n(obj, 24)?;
    let domain = shorthand_domain(model, n, 2, "capacity")?;
    let values = numbers(field(obj, "values")?, "values.values")?;
    if values.len() != 1 << n {
        return Err(Error::Parse(format!("values.values: expected {} entries, got {}", 1usize << n, values.len())));
    }
    let d = Arc::clone(&domain);
    LatticeFunction::from_fn(domain, |x| {
        let mask = (0..n).filter(|&k| x.0[k] == d.lattice(k).top()).fold(0usize, |m, k| m | 1 << k);
        values[mask].clone()
    })
}

/// `"{1,3}"` as a bitmask over players `1..=n`.
pub fn parse_set(text: &str, n: usize) -> Result<u32> {
    let bad = || Error::Parse(format!("`{text}` is not a set like {{1,3}}"));
    let inner = text.trim().strip_prefix('{').and_then(|s| s.strip_suffix('}')).ok_or_else(bad)?;
    let mut mask = 0u32;
    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i: usize = item.parse().map_err(|_| bad())?;
        if i == 0 || i > n {
            return Err(Error::Parse(format!("`{text}`: player {i} outside 1..={n}")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

fn parse_bicapacity(obj: &serde_json::Map<String, Value>, model: Option<Arc<ProductLattice>>) -> Result<LatticeFunction<Rational>> {
    let n = shorthand_n(obj, 15)?;
    let domain = shorthand_domain(model, n, 3, "bi-capacity")?;
    let default = match obj.get("default") {
        Some(d) => Some(number(d, "values.default")?),
        None => None,
    };
    let entries = field(obj, "entries")?
        .as_object()
        .ok_or_else(|| Error::Parse("values.entries: expected an object".into()))?;
    let size = 3usize.pow(n as u32);
    let mut table: Vec<Option<Rational>> = vec![None; size];
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    for (key, v) in entries {
        let what = format!("values.entries[\"{key}\"]");
        let (a, b) = key.split_once('|').ok_or_else(|| Error::Parse(format!("{what}: key must look like {{A}}|{{B}}")))?;
        let a = parse_set(a, n).map_err(context(&what))?;
        let b = parse_set(b, n).map_err(context(&what))?;
        if a & b != 0 {
            return Err(Error::Parse(format!("{what}: {}", Error::NotDisjoint)));
        }
        let idx: usize = (0..n)
            .map(|i| pow3[i] * if a >> i & 1 == 1 { 2 } else if b >> i & 1 == 1 { 0 } else { 1 })
            .sum();
        if table[idx].replace(number(v, &what)?).is_some() {
            return Err(Error::Parse(format!("{what}: pair listed twice")));
        }
    }
    if default.is_none() {
        if let Some(missing) = table.iter().position(Option::is_none) {
            return Err(Error::Parse(format!(
                "values.entries: no value for base-3 index {missing} and no `default`"
            )));
        }
    }
    let d = Arc::clone(&domain);
    LatticeFunction::from_fn(domain, |x| {
        let idx: usize = (0..n).map(|i| pow3[i] * d.lattice(i).rank(x.0[i])).sum();
        table[idx].clone().or_else(|| default.clone()).expect("checked above")
    })
}

/// Dense values file for `f`, re-readable by [`parse_values`].
pub fn dense_values_json(f: &LatticeFunction<Rational>) -> Value {
    let values: Vec<Value> = f.values().iter().map(|v| Value::String(format_rational(v))).collect();
    serde_json::json!({ "order": "lex", "values": values })
}

/// Stable digest of a function's values in index order.
pub fn function_fingerprint(f: &LatticeFunction<Rational>) -> String {
    let text: Vec<String> = f.values().iter().map(format_rational).collect();
    fnv1a(text.join(";").as_bytes())
}

/// Splits `"a,b,{1,2}"` at top-level commas.
pub fn split_labels(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '{' | '(' | '[' => depth += 1,
            '}' | ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out.into_iter().map(|s| s.trim().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{int, rat};

    #[test]
    fn shorthand_matches_explicit() {
        let short = parse_model(r#"{"attributes":[{"name":"a","kind":"ternary"},{"name":"b","kind":{"chain":3}},{"name":"c","kind":"boolean"}]}"#).unwrap();
        let explicit = parse_model(&model_to_json(&short).to_string()).unwrap();
        assert_eq!(short, explicit);
        assert_eq!(short.lattice(0).labels(), ["-1", "0", "1"]);
    }

    #[test]
    fn model_errors_have_context() {
        let e = parse_model(r#"{"attributes":[{"name":"x","elements":["a","b"],"covers":[["a","c"]]}]}"#).unwrap_err();
        assert!(e.to_string().contains("attribute `x`"), "{e}");
        let e = parse_model(r#"{"attributes":[{"name":"x","kind":"quaternary"}]}"#).unwrap_err();
        assert!(e.to_string().contains("quaternary"));
        assert!(parse_model("{\"attributes\": [").unwrap_err().to_string().contains("line"));
    }

    #[test]
    fn exact_numbers() {
        let v = parse_values(r#"{"n":1,"values":[0.1,"1/3"]}"#, None).unwrap();
        let d = v.to_dense().unwrap();
        assert_eq!(d.values(), &[rat(1, 10), rat(1, 3)]);
    }

    #[test]
    fn capacity_bitmask_order() {
        let v = parse_values(r#"{"n":2,"values":[0,1,2,3]}"#, None).unwrap();
        let p = v.domain().clone();
        // bit 0 is the first attribute
        assert_eq!(v.value(&p.parse_labels(&["1", "0"]).unwrap()), int(1));
        assert_eq!(v.value(&p.parse_labels(&["0", "1"]).unwrap()), int(2));
    }

    #[test]
    fn bicapacity_entries() {
        let text = r#"{"n":2,"default":0,"entries":{"{1,2}|{}":1,"{}|{1,2}":-1,"{1}|{2}":"1/2"}}"#;
        let v = parse_values(text, None).unwrap();
        let p = v.domain().clone();
        assert_eq!(v.value(&p.parse_labels(&["1", "-1"]).unwrap()), rat(1, 2));
        assert_eq!(v.value(&p.top()), int(1));
        assert_eq!(v.value(&p.bottom()), int(-1));
        assert!(parse_values(r#"{"n":2,"entries":{"{1}|{1}":1}}"#, None).is_err());
        assert!(parse_values(r#"{"n":2,"entries":{"{1}|{2}":1}}"#, None).is_err());
    }

    #[test]
    fn dense_round_trip_and_sparse() {
        let p = Arc::new(ProductLattice::ternary(2).unwrap());
        let f = LatticeFunction::from_fn(Arc::clone(&p), |x| rat(x.0[0] as i64 - 1, 1 + x.0[1] as i64)).unwrap();
        let back = parse_values(&dense_values_json(&f).to_string(), Some(Arc::clone(&p))).unwrap();
        assert_eq!(back.to_dense().unwrap(), f);
        let sparse = r#"{"default":"2","points":[{"point":["1","0"],"value":5}]}"#;
        let s = parse_values(sparse, Some(Arc::clone(&p))).unwrap();
        assert_eq!(s.value(&p.parse_labels(&["1", "0"]).unwrap()), int(5));
        assert_eq!(s.value(&p.top()), int(2));
        let dup = r#"{"points":[{"point":["1","0"],"value":5},{"point":["1","0"],"value":1}]}"#;
        assert!(parse_values(dup, Some(p)).is_err());
    }

    #[test]
    fn label_splitting() {
        assert_eq!(split_labels("1, 0"), ["1", "0"]);
        assert_eq!(split_labels("{1,2},{}"), ["{1,2}", "{}"]);
    }
}
