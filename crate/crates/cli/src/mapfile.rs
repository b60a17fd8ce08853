//! Map files: JSON objects describing a linear map by its Choi matrix, a
//! Kraus list, or a built-in family.
//!
//! ```json
//! {"in_dim": 2, "out_dim": 2, "kind": "choi", "data": [[1, 0], [0, 0], ...]}
//! {"in_dim": 2, "out_dim": 2, "kind": "kraus", "data": [[[0, 0], [1, 0], [1, 0], [0, 0]]]}
//! {"in_dim": 3, "out_dim": 3, "kind": "builtin", "name": "lambda_mu", "params": {"mu": 0.5}}
//! ```
//!
//! Complex entries are `[re, im]` pairs. Choi data is row-major of length
//! `(in_dim·out_dim)²`; each Kraus operator is row-major `out_dim × in_dim`.

use std::fmt;
use std::path::Path;

use posmap::{
    ad_v, identity_map, lambda_mu, random_sp_k, reduction_map, sum_maps, transpose_map,
    ComplexMatrix, SuperMap, C64,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub source: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.source, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Choi,
    Kraus,
    Builtin,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    mu: Option<f64>,
    k: Option<usize>,
    terms: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMapFile {
    in_dim: usize,
    out_dim: usize,
    kind: Kind,
    data: Option<Value>,
    name: Option<String>,
    params: Option<Params>,
}

/// A parsed map plus what parsing observed about it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMap {
    pub map: SuperMap,
    pub kind: Kind,
    /// `max |C − C*|` of the Choi matrix; reported, never enforced here.
    pub hermitian_deviation: f64,
}

pub fn parse_map_file(path: &Path) -> Result<ParsedMap, ParseError> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        source: source.clone(),
        message: format!("cannot read file: {e}"),
    })?;
    parse_map_str(&text, &source)
}

pub fn parse_map_str(text: &str, source: &str) -> Result<ParsedMap, ParseError> {
    let err = |message: String| ParseError {
        source: source.to_string(),
        message,
    };
    let raw: RawMapFile = serde_json::from_str(text)
        .map_err(|e| err(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if raw.in_dim == 0 || raw.out_dim == 0 {
        return Err(err(
            "fields `in_dim` and `out_dim` must be at least 1".into()
        ));
    }
    let (k, n) = (raw.in_dim, raw.out_dim);
    let map = match raw.kind {
        Kind::Choi => {
            reject_field(raw.name.is_some(), "name", "choi").map_err(err)?;
            reject_field(raw.params.is_some(), "params", "choi").map_err(err)?;
            let data = raw
                .data
                .as_ref()
                .ok_or_else(|| err("field `data` is required for kind \"choi\"".into()))?;
            let entries = complex_list(data, "data").map_err(err)?;
            let d = k * n;
            if entries.len() != d * d {
                return Err(err(format!(
                    "field `data`: expected {} entries for a {d}×{d} Choi matrix, found {}",
                    d * d,
                    entries.len()
                )));
            }
            let choi = ComplexMatrix::from_vec(d, d, entries).map_err(|e| err(e.to_string()))?;
            SuperMap::from_choi(k, n, choi).map_err(|e| err(e.to_string()))?
        }
        Kind::Kraus => {
            reject_field(raw.name.is_some(), "name", "kraus").map_err(err)?;
            reject_field(raw.params.is_some(), "params", "kraus").map_err(err)?;
            let data = raw
                .data
                .as_ref()
                .ok_or_else(|| err("field `data` is required for kind \"kraus\"".into()))?;
            let ops = data
                .as_array()
                .ok_or_else(|| err("field `data`: expected a list of Kraus operators".into()))?;
            if ops.is_empty() {
                return Err(err(
                    "field `data`: at least one Kraus operator is required".into()
                ));
            }
            let mut terms = Vec::with_capacity(ops.len());
            for (idx, op) in ops.iter().enumerate() {
                let field = format!("data[{idx}]");
                let entries = complex_list(op, &field).map_err(err)?;
                if entries.len() != n * k {
                    return Err(err(format!(
                        "field `{field}`: expected {} entries for a {n}×{k} operator, found {}",
                        n * k,
                        entries.len()
                    )));
                }
                let v = ComplexMatrix::from_vec(n, k, entries).map_err(|e| err(e.to_string()))?;
                terms.push((1.0, ad_v(&v)));
            }
            sum_maps(&terms).map_err(|e| err(e.to_string()))?
        }
        Kind::Builtin => {
            reject_field(raw.data.is_some(), "data", "builtin").map_err(err)?;
            let name = raw
                .name
                .as_deref()
                .ok_or_else(|| err("field `name` is required for kind \"builtin\"".into()))?;
            builtin(name, k, n, &raw.params.unwrap_or_default()).map_err(err)?
        }
    };
    let hermitian_deviation = map.choi().hermitian_deviation();
    Ok(ParsedMap {
        map,
        kind: raw.kind,
        hermitian_deviation,
    })
}

fn reject_field(present: bool, field: &str, kind: &str) -> Result<(), String> {
    if present {
        Err(format!(
            "field `{field}` is not allowed for kind \"{kind}\""
        ))
    } else {
        Ok(())
    }
}

fn complex_list(value: &Value, field: &str) -> Result<Vec<C64>, String> {
    let items = value
        .as_array()
        .ok_or_else(|| format!("field `{field}`: expected a list of [re, im] pairs"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item.as_array().map(Vec::as_slice) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(format!(
                    "field `{field}[{i}]`: [re, im] entries must be numbers"
                )),
            },
            _ => Err(format!("field `{field}[{i}]`: expected an [re, im] pair")),
        })
        .collect()
}

fn square(name: &str, k: usize, n: usize) -> Result<usize, String> {
    if k != n {
        return Err(format!(
            "builtin \"{name}\" needs in_dim = out_dim, found {k} and {n}"
        ));
    }
    Ok(n)
}

fn builtin(name: &str, k: usize, n: usize, params: &Params) -> Result<SuperMap, String> {
    let allow = |allowed: &[&str]| -> Result<(), String> {
        let given = [
            ("mu", params.mu.is_some()),
            ("k", params.k.is_some()),
            ("terms", params.terms.is_some()),
            ("seed", params.seed.is_some()),
        ];
        for (p, set) in given {
            if set && !allowed.contains(&p) {
                return Err(format!(
                    "field `params.{p}` is not used by builtin \"{name}\""
                ));
            }
        }
        Ok(())
    };
    match name {
        "identity" => {
            allow(&[])?;
            Ok(identity_map(square(name, k, n)?))
        }
        "transpose" => {
            allow(&[])?;
            Ok(transpose_map(square(name, k, n)?))
        }
        "reduction" => {
            allow(&[])?;
            Ok(reduction_map(square(name, k, n)?))
        }
        "lambda_mu" => {
            allow(&["mu"])?;
            let mu = params
                .mu
                .ok_or_else(|| "field `params.mu` is required for builtin \"lambda_mu\"".to_string())?;
            if !mu.is_finite() {
                return Err("field `params.mu` must be finite".into());
            }
            Ok(lambda_mu(square(name, k, n)?, mu))
        }
        "sp_k_random" => {
            allow(&["k", "terms", "seed"])?;
            let rank = params
                .k
                .ok_or_else(|| "field `params.k` is required for builtin \"sp_k_random\"".to_string())?;
            let terms = params.terms.unwrap_or(1);
            let seed = params.seed.unwrap_or(0);
            random_sp_k(rank, k, n, terms, seed).map_err(|e| format!("builtin \"sp_k_random\": {e}"))
        }
        other => Err(format!(
            "field `name`: unknown builtin \"{other}\" (expected identity, transpose, reduction, lambda_mu or sp_k_random)"
        )),
    }
}

/// Map-file object with the Choi representation of `map`.
pub fn to_map_value(map: &SuperMap, round: impl Fn(f64) -> Value) -> Value {
    let data: Vec<Value> = map
        .choi()
        .as_slice()
        .iter()
        .map(|z| Value::Array(vec![round(z.re), round(z.im)]))
        .collect();
    serde_json::json!({
        "in_dim": map.in_dim(),
        "out_dim": map.out_dim(),
        "kind": "choi",
        "data": data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use posmap::flip_operator;

    fn parse(text: &str) -> Result<ParsedMap, ParseError> {
        parse_map_str(text, "test.map")
    }

    #[test]
    fn builtin_transpose_has_flip_choi() {
        let m = parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "builtin", "name": "transpose"}"#)
            .unwrap();
        assert_eq!(m.map.choi(), &flip_operator(2));
        assert_eq!(m.hermitian_deviation, 0.0);
    }

    #[test]
    fn single_kraus_is_ad_v() {
        let m = parse(
            r#"{"in_dim": 2, "out_dim": 2, "kind": "kraus",
                          "data": [[[1, 0], [2, 0], [0, 1], [3, 0]]]}"#,
        )
        .unwrap();
        let v = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(3.0, 0.0),
            ],
        )
        .unwrap();
        assert!(m.map.distance(&ad_v(&v)) < 1e-15);
    }

    #[test]
    fn choi_round_trip() {
        let r = reduction_map(2);
        let text = to_map_value(&r, |x| serde_json::json!(x)).to_string();
        assert_eq!(parse(&text).unwrap().map, r);
    }

    #[test]
    fn wrong_choi_length_is_reported() {
        let e =
            parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "choi", "data": [[1, 0]]}"#).unwrap_err();
        assert!(e.message.contains("expected 16 entries"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse("{\n  \"in_dim\": 2,\n  \"out_dim\": ,\n}").unwrap_err();
        assert!(e.message.starts_with("line 3, column"), "{e}");
        let e = parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "matrix"}"#).unwrap_err();
        assert!(e.message.contains("unknown variant"), "{e}");
        let e = parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "choi", "extra": 1}"#).unwrap_err();
        assert!(e.message.contains("unknown field"), "{e}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let e = parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "choi", "data": [[1, 0], [1]]}"#)
            .unwrap_err();
        assert!(e.message.contains("`data[1]`"), "{e}");
        let e = parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "builtin", "name": "lambda_mu"}"#)
            .unwrap_err();
        assert!(e.message.contains("params.mu"), "{e}");
        let e = parse(r#"{"in_dim": 2, "out_dim": 3, "kind": "builtin", "name": "identity"}"#)
            .unwrap_err();
        assert!(e.message.contains("in_dim = out_dim"), "{e}");
        let e =
            parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "builtin", "name": "swap"}"#).unwrap_err();
        assert!(e.message.contains("unknown builtin"), "{e}");
        let e = parse(r#"{"in_dim": 2, "out_dim": 2, "kind": "builtin", "name": "sp_k_random", "params": {"k": 3}}"#)
            .unwrap_err();
        assert!(e.message.contains("sp_k_random"), "{e}");
    }

    #[test]
    fn non_hermitian_choi_is_reported_not_rejected() {
        let mut data = vec!["[0, 0]"; 16];
        data[1] = "[1, 0]";
        let text = format!(
            r#"{{"in_dim": 2, "out_dim": 2, "kind": "choi", "data": [{}]}}"#,
            data.join(",")
        );
        let m = parse(&text).unwrap();
        assert!(m.hermitian_deviation > 0.5);
    }
}
