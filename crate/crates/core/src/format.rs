//! Canonical JSON documents.
//!
//! Every document is written compactly with keys in sorted order and all
//! vertex lists sorted, so equal objects serialize to identical bytes.
//!
//! | document    | shape |
//! |-------------|-------|
//! | graph       | `{"d":3,"edges":[[0,1],...],"n":4}` |
//! | orientation | `{"graph_fingerprint":"<hex>","heads":[0,1,...]}` |
//! | set system  | `{"graph_fingerprint":"<hex>","k":2,"sets":[[0,1,2],...]}` |
//! | certificate | `{"k":2,"orientation":{..},"sets":[[..],..],"type":"faces"}` (no `k` for `"aof"`) |
//! | instance    | `{"coords":[[["num","den"],..],..]\|null,"d":3,"facets":[[..],..],"graph":{..},"name":".."}` |

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::certificate::{AofCertificate, FaceCertificate};
use crate::error::{Error, Result};
use crate::graph::{validate_graph, Fingerprint, Orientation, PolytopeGraph};
use crate::ksystem::SetSystem;
use crate::oracle::Instance;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?
        .iter()
        .map(|x| as_usize(x, what))
        .collect()
}

fn nested_list(v: &Value, what: &str) -> Result<Vec<Vec<usize>>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array of arrays")))?
        .iter()
        .map(|x| usize_list(x, what))
        .collect()
}

fn fingerprint_field(obj: &Value) -> Result<Fingerprint> {
    field(obj, "graph_fingerprint")?
        .as_str()
        .ok_or_else(|| parse_err("graph_fingerprint must be a string"))?
        .parse()
}

pub fn graph_to_value(g: &PolytopeGraph) -> Value {
    json!({
        "d": g.dim(),
        "n": g.vertex_count(),
        "edges": g.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

pub fn graph_from_value(v: &Value) -> Result<PolytopeGraph> {
    let d = as_usize(field(v, "d")?, "d")?;
    let n = as_usize(field(v, "n")?, "n")?;
    let edges = nested_list(field(v, "edges")?, "edges")?
        .into_iter()
        .map(|e| match e[..] {
            [a, b] => Ok((a, b)),
            _ => Err(parse_err("every edge must be a pair")),
        })
        .collect::<Result<Vec<_>>>()?;
    validate_graph(d, n, &edges)
}

/// Reads a graph document, or the graph embedded in an instance document.
pub fn graph_from_any(v: &Value) -> Result<PolytopeGraph> {
    match v.get("graph") {
        Some(inner) => graph_from_value(inner),
        None => graph_from_value(v),
    }
}

pub fn orientation_to_value(o: &Orientation) -> Value {
    json!({
        "graph_fingerprint": o.graph_fingerprint().to_string(),
        "heads": o.heads().iter().map(|&h| u8::from(h)).collect::<Vec<_>>(),
    })
}

pub fn orientation_from_value(v: &Value) -> Result<Orientation> {
    let fp = fingerprint_field(v)?;
    let heads = usize_list(field(v, "heads")?, "heads")?
        .into_iter()
        .map(|h| match h {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(parse_err("heads entries must be 0 or 1")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Orientation::from_parts(fp, heads))
}

/// Parses an orientation and checks it against `g`.
pub fn orientation_for(g: &PolytopeGraph, v: &Value) -> Result<Orientation> {
    let o = orientation_from_value(v)?;
    if o.graph_fingerprint() != g.fingerprint() {
        return Err(Error::FingerprintMismatch {
            expected: g.fingerprint(),
            found: o.graph_fingerprint(),
        });
    }
    Orientation::new(g, o.heads().to_vec())
}

pub fn set_system_to_value(s: &SetSystem) -> Value {
    json!({
        "graph_fingerprint": s.graph_fingerprint().to_string(),
        "k": s.k(),
        "sets": s.sets(),
    })
}

pub fn set_system_from_value(v: &Value) -> Result<SetSystem> {
    let fp = fingerprint_field(v)?;
    let k = as_usize(field(v, "k")?, "k")?;
    SetSystem::new(fp, k, nested_list(field(v, "sets")?, "sets")?)
}

pub fn face_certificate_to_value(c: &FaceCertificate) -> Value {
    json!({
        "type": "faces",
        "k": c.k(),
        "sets": c.claimed_sets.sets(),
        "orientation": orientation_to_value(&c.witness_orientation),
    })
}

pub fn aof_certificate_to_value(c: &AofCertificate) -> Value {
    json!({
        "type": "aof",
        "sets": c.witness_two_system.sets(),
        "orientation": orientation_to_value(&c.candidate_orientation),
    })
}

/// A parsed certificate file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Faces(FaceCertificate),
    Aof(AofCertificate),
}

pub fn certificate_from_value(v: &Value) -> Result<Certificate> {
    let kind = field(v, "type")?
        .as_str()
        .ok_or_else(|| parse_err("type must be a string"))?;
    let o = orientation_from_value(field(v, "orientation")?)?;
    let sets = nested_list(field(v, "sets")?, "sets")?;
    match kind {
        "faces" => {
            let k = as_usize(field(v, "k")?, "k")?;
            let s = SetSystem::new(o.graph_fingerprint(), k, sets)?;
            Ok(Certificate::Faces(FaceCertificate::new(s, o)?))
        }
        "aof" => {
            let s = SetSystem::new(o.graph_fingerprint(), 2, sets)?;
            Ok(Certificate::Aof(AofCertificate::new(o, s)?))
        }
        other => Err(parse_err(format!("unknown certificate type {other:?}"))),
    }
}

fn rational_to_value(r: &BigRational) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

fn rational_from_value(v: &Value) -> Result<BigRational> {
    let parts = v
        .as_array()
        .ok_or_else(|| parse_err("coordinate must be [num, den]"))?;
    let [num, den] = &parts[..] else {
        return Err(parse_err("coordinate must be [num, den]"));
    };
    let int = |x: &Value| -> Result<BigInt> {
        match x {
            Value::String(s) => s
                .parse()
                .map_err(|_| parse_err(format!("bad integer {s:?}"))),
            Value::Number(n) => n.to_string().parse().map_err(|_| parse_err("bad integer")),
            _ => Err(parse_err("coordinate entries must be integers")),
        }
    };
    let den = int(den)?;
    if den == BigInt::from(0) {
        return Err(parse_err("zero denominator"));
    }
    Ok(BigRational::new(int(num)?, den))
}

pub fn instance_to_value(inst: &Instance) -> Value {
    let coords = match &inst.coords {
        None => Value::Null,
        Some(c) => Value::Array(
            c.iter()
                .map(|x| Value::Array(x.iter().map(rational_to_value).collect()))
                .collect(),
        ),
    };
    json!({
        "name": inst.name,
        "d": inst.dim(),
        "graph": graph_to_value(&inst.graph),
        "facets": inst.facets,
        "coords": coords,
    })
}

pub fn instance_from_value(v: &Value) -> Result<Instance> {
    let name = field(v, "name")?
        .as_str()
        .ok_or_else(|| parse_err("name must be a string"))?
        .to_string();
    let d = as_usize(field(v, "d")?, "d")?;
    let g = graph_from_value(field(v, "graph")?)?;
    if g.dim() != d {
        return Err(parse_err(format!(
            "instance d = {d} but graph d = {}",
            g.dim()
        )));
    }
    let facets = nested_list(field(v, "facets")?, "facets")?;
    let coords = match v.get("coords") {
        None | Some(Value::Null) => None,
        Some(c) => Some(
            c.as_array()
                .ok_or_else(|| parse_err("coords must be an array or null"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| parse_err("coordinate row must be an array"))?
                        .iter()
                        .map(rational_from_value)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let inst = Instance::from_facets(name, d, g.vertex_count(), facets, coords)?;
    if inst.graph != g {
        return Err(parse_err("graph does not match the facet incidences"));
    }
    Ok(inst)
}

/// Compact serialization with sorted keys.
pub fn to_canonical_string(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut keys: Vec<&String> = m.keys().collect();
                keys.sort();
                let mut out = Map::new();
                for k in keys {
                    out.insert(k.clone(), sort(&m[k]));
                }
                Value::Object(out)
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string(&sort(v)).expect("JSON values serialize")
}
