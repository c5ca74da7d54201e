//! JSON encoding and decoding for graphs, certificates, formulations,
//! factorizations, and verification reports.
//!
//! Parsing walks `serde_json::Value` trees by hand so that every error
//! carries the JSON path at which it occurred. Rational numbers are encoded
//! as strings (`"3"`, `"-1/2"`) to keep output exact; matrices are arrays of
//! row arrays.

use crate::extform::ExtendedFormulation;
use crate::factor::NonnegFactorization;
use crate::graph::{BasicCertificate, Graph};
use crate::linalg::{format_rat, Mat, Rat};
use crate::verify::{EfReport, StabReport};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{path}: {message}")]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

pub(crate) fn err(path: &str, message: impl Into<String>) -> ParseError {
    ParseError { path: path.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str(text).map_err(|e| err("$", format!("invalid JSON: {e}")))
}

pub fn to_pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("serialization cannot fail");
    text.push('\n');
    text
}

pub(crate) fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

pub(crate) fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

pub(crate) fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, ParseError> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

pub(crate) fn as_usize(v: &Value, path: &str) -> Result<usize, ParseError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(path, "expected a nonnegative integer"))
}

pub(crate) fn get<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    path: &str,
) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| err(path, format!("missing key {key:?}")))
}

pub(crate) fn string_list(v: &Value, path: &str) -> Result<Vec<String>, ParseError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_str(x, &format!("{path}[{i}]")).map(str::to_string))
        .collect()
}

fn usize_list(v: &Value, path: &str) -> Result<Vec<usize>, ParseError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn graph_to_json(g: &Graph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(u, v)| json!([g.name(u), g.name(v)]))
        .collect();
    json!({ "names": g.names(), "edges": edges })
}

pub fn graph_from_json(v: &Value, path: &str) -> Result<Graph, ParseError> {
    let obj = as_object(v, path)?;
    let names = string_list(get(obj, "names", path)?, &format!("{path}.names"))?;
    let index_of = |name: &str, at: &str| {
        names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| err(at, format!("unknown vertex {name:?}")))
    };
    let edges_path = format!("{path}.edges");
    let mut edges = Vec::new();
    for (i, pair) in as_array(get(obj, "edges", path)?, &edges_path)?.iter().enumerate() {
        let at = format!("{edges_path}[{i}]");
        let pair = as_array(pair, &at)?;
        if pair.len() != 2 {
            return Err(err(&at, "an edge is a pair of vertex names"));
        }
        let u = index_of(as_str(&pair[0], &at)?, &at)?;
        let v = index_of(as_str(&pair[1], &at)?, &at)?;
        edges.push((u, v));
    }
    Graph::new(names, edges).map_err(|e| err(path, e.to_string()))
}

/// Certificate payload without its kind tag; decomposition tree documents
/// carry the kind in a sibling `"class"` key.
pub fn certificate_payload_to_json(c: &BasicCertificate) -> Value {
    match c {
        BasicCertificate::Bipartite { sides } | BasicCertificate::CoBipartite { sides } => {
            json!({ "sides": [sides[0], sides[1]] })
        }
        BasicCertificate::LineBipartite { root, vertex_edge }
        | BasicCertificate::CoLineBipartite { root, vertex_edge } => {
            let edges: Vec<Value> = vertex_edge
                .iter()
                .map(|(v, (a, b))| json!({ "vertex": v, "edge": [a, b] }))
                .collect();
            json!({ "root": graph_to_json(root), "edges": edges })
        }
        BasicCertificate::DoubleSplit { p, q, linking, a, b, x, y } => json!({
            "p": p,
            "q": q,
            "linking": linking,
            "a": a,
            "b": b,
            "x": x,
            "y": y,
        }),
        BasicCertificate::FacetDirect => json!({}),
    }
}

/// Standalone certificate form: the payload plus a `"kind"` tag.
pub fn certificate_to_json(c: &BasicCertificate) -> Value {
    let mut v = certificate_payload_to_json(c);
    v.as_object_mut()
        .expect("payload is an object")
        .insert("kind".into(), Value::String(c.kind().into()));
    v
}

fn sides_from_json(obj: &Map<String, Value>, path: &str) -> Result<[Vec<String>; 2], ParseError> {
    let sides_path = format!("{path}.sides");
    let sides = as_array(get(obj, "sides", path)?, &sides_path)?;
    if sides.len() != 2 {
        return Err(err(&sides_path, "expected exactly two sides"));
    }
    Ok([
        string_list(&sides[0], &format!("{sides_path}[0]"))?,
        string_list(&sides[1], &format!("{sides_path}[1]"))?,
    ])
}

fn vertex_edge_from_json(
    obj: &Map<String, Value>,
    path: &str,
) -> Result<Vec<(String, (String, String))>, ParseError> {
    let edges_path = format!("{path}.edges");
    let mut out = Vec::new();
    for (i, item) in as_array(get(obj, "edges", path)?, &edges_path)?.iter().enumerate() {
        let at = format!("{edges_path}[{i}]");
        let item = as_object(item, &at)?;
        let vertex = as_str(get(item, "vertex", &at)?, &format!("{at}.vertex"))?.to_string();
        let pair_path = format!("{at}.edge");
        let pair = as_array(get(item, "edge", &at)?, &pair_path)?;
        if pair.len() != 2 {
            return Err(err(&pair_path, "a root edge is a pair of vertex names"));
        }
        let a = as_str(&pair[0], &pair_path)?.to_string();
        let b = as_str(&pair[1], &pair_path)?.to_string();
        out.push((vertex, (a, b)));
    }
    Ok(out)
}

pub fn certificate_from_json(v: &Value, path: &str) -> Result<BasicCertificate, ParseError> {
    let obj = as_object(v, path)?;
    let kind = as_str(get(obj, "kind", path)?, &format!("{path}.kind"))?;
    certificate_from_parts(kind, v, path)
}

/// Builds a certificate from a kind tag and a payload object; the tag may
/// live inside the payload (standalone files) or beside it (tree nodes).
pub fn certificate_from_parts(
    kind: &str,
    v: &Value,
    path: &str,
) -> Result<BasicCertificate, ParseError> {
    let obj = as_object(v, path)?;
    match kind {
        "bipartite" => Ok(BasicCertificate::Bipartite { sides: sides_from_json(obj, path)? }),
        "co_bipartite" => Ok(BasicCertificate::CoBipartite { sides: sides_from_json(obj, path)? }),
        "line_bipartite" | "co_line_bipartite" => {
            let root = graph_from_json(get(obj, "root", path)?, &format!("{path}.root"))?;
            let vertex_edge = vertex_edge_from_json(obj, path)?;
            if kind == "line_bipartite" {
                Ok(BasicCertificate::LineBipartite { root, vertex_edge })
            } else {
                Ok(BasicCertificate::CoLineBipartite { root, vertex_edge })
            }
        }
        "double_split" => {
            let linking_path = format!("{path}.linking");
            let linking = as_array(get(obj, "linking", path)?, &linking_path)?
                .iter()
                .enumerate()
                .map(|(i, row)| usize_list(row, &format!("{linking_path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BasicCertificate::DoubleSplit {
                p: as_usize(get(obj, "p", path)?, &format!("{path}.p"))?,
                q: as_usize(get(obj, "q", path)?, &format!("{path}.q"))?,
                linking,
                a: string_list(get(obj, "a", path)?, &format!("{path}.a"))?,
                b: string_list(get(obj, "b", path)?, &format!("{path}.b"))?,
                x: string_list(get(obj, "x", path)?, &format!("{path}.x"))?,
                y: string_list(get(obj, "y", path)?, &format!("{path}.y"))?,
            })
        }
        "facet_direct" => Ok(BasicCertificate::FacetDirect),
        other => Err(err(
            path,
            format!(
                "unknown certificate kind {other:?}; expected one of bipartite, co_bipartite, \
                 line_bipartite, co_line_bipartite, double_split, facet_direct"
            ),
        )),
    }
}

fn mat_to_json(m: &Mat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_rat(x))).collect()))
        .collect();
    Value::Array(rows)
}

fn rat_list_to_json(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(format_rat(x))).collect())
}

fn name_set(names: &[String], set: &[usize]) -> Value {
    Value::Array(set.iter().map(|&v| Value::String(names[v].clone())).collect())
}

pub fn ef_to_json(ef: &ExtendedFormulation) -> Value {
    let witnesses: Vec<Value> = ef
        .witnesses
        .iter()
        .map(|(set, t)| {
            json!({ "set": name_set(&ef.x_names, set), "t": rat_list_to_json(t) })
        })
        .collect();
    json!({
        "x_names": ef.x_names,
        "t_names": ef.t_names,
        "size": ef.size(),
        "E": mat_to_json(&ef.e),
        "F": mat_to_json(&ef.f),
        "g": rat_list_to_json(&ef.g),
        "witnesses": witnesses,
    })
}

pub fn factorization_to_json(g: &Graph, f: &NonnegFactorization) -> Value {
    let rows: Vec<Value> =
        f.row_labels.iter().map(|l| Value::String(l.render(g))).collect();
    let columns: Vec<Value> = f.col_sets.iter().map(|set| name_set(&f.names, set)).collect();
    json!({
        "names": f.names,
        "rank_bound": f.r(),
        "rows": rows,
        "columns": columns,
        "T": mat_to_json(&f.t),
        "U": mat_to_json(&f.u),
    })
}

pub fn ef_report_to_json(r: &EfReport) -> Value {
    let facets: Vec<Value> = r
        .facet_checks
        .iter()
        .map(|c| {
            json!({
                "facet": c.label,
                "bound": format_rat(&c.bound),
                "optimum": c.value.as_ref().map(format_rat),
                "ok": c.ok,
            })
        })
        .collect();
    let lifts: Vec<Value> = r
        .lift_checks
        .iter()
        .map(|c| json!({ "stable_set": c.label, "via_witness": c.via_witness, "ok": c.ok }))
        .collect();
    json!({ "facet_checks": facets, "lift_checks": lifts, "pass": r.pass })
}

pub fn stab_report_to_json(r: &StabReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "objective": c.objective,
                "lp_value": format_rat(&c.lp_value),
                "enum_value": format_rat(&c.enum_value),
                "ok": c.ok,
            })
        })
        .collect();
    json!({ "checks": checks, "pass": r.pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extform::ef_from_facets;
    use crate::family::EnumLimits;
    use crate::graph;

    #[test]
    fn graph_round_trip() {
        let g = graph::cycle(5);
        let v = graph_to_json(&g);
        let back = graph_from_json(&v, "$").unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn graph_errors_carry_paths() {
        let v = json!({ "names": ["a", "b"], "edges": [["a", "z"]] });
        let e = graph_from_json(&v, "$").unwrap_err();
        assert_eq!(e.path, "$.edges[0]");
        let v = json!({ "names": ["a", "b"] });
        let e = graph_from_json(&v, "$").unwrap_err();
        assert!(e.message.contains("edges"));
        let v = json!({ "names": "a", "edges": [] });
        let e = graph_from_json(&v, "$").unwrap_err();
        assert_eq!(e.path, "$.names");
    }

    #[test]
    fn certificate_round_trips() {
        let g = graph::complete_bipartite(2, 2);
        let (s0, s1) = g.bipartition().unwrap();
        let to_names =
            |side: &[usize]| side.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
        let certs = vec![
            BasicCertificate::Bipartite { sides: [to_names(&s0), to_names(&s1)] },
            BasicCertificate::FacetDirect,
            {
                let root = graph::path(4);
                let (l, edge_map) = root.line_graph().unwrap();
                let vertex_edge = edge_map
                    .iter()
                    .enumerate()
                    .map(|(i, &(u, v))| {
                        (
                            l.name(i).to_string(),
                            (root.name(u).to_string(), root.name(v).to_string()),
                        )
                    })
                    .collect();
                BasicCertificate::LineBipartite { root, vertex_edge }
            },
            BasicCertificate::DoubleSplit {
                p: 2,
                q: 2,
                linking: vec![vec![0], vec![0, 1]],
                a: vec!["a1".into(), "a2".into()],
                b: vec!["b1".into(), "b2".into()],
                x: vec!["x1".into(), "x2".into()],
                y: vec!["y1".into(), "y2".into()],
            },
        ];
        for cert in certs {
            let v = certificate_to_json(&cert);
            let back = certificate_from_json(&v, "$").unwrap();
            assert_eq!(certificate_to_json(&back), v);
        }
    }

    #[test]
    fn unknown_certificate_kind_is_rejected() {
        let v = json!({ "kind": "mystery" });
        let e = certificate_from_json(&v, "$").unwrap_err();
        assert_eq!(e.path, "$");
        assert!(e.message.contains("mystery"));
    }

    #[test]
    fn formulation_serialization_is_exact() {
        let g = graph::complete(2);
        let ef = ef_from_facets(&g, &EnumLimits::default()).unwrap();
        let v = ef_to_json(&ef);
        assert_eq!(v["size"], json!(3));
        assert_eq!(v["g"], json!(["0", "0", "1"]));
        // The witness list is sorted by index set: empty set first.
        assert_eq!(v["witnesses"][0]["set"], json!([]));
        let text = to_pretty(&v);
        assert!(text.ends_with('\n'));
        assert!(text.contains("\"x_names\""));
    }
}
