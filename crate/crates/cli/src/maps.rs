use hss_core::polyring::{parse_rational, rational_to_string, GaussRational, PolyJson, Polynomial};
use hss_core::rigidity::RationalMap;
use hss_core::spaces::Space;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Deserialize)]
struct ComponentJson {
    num: PolyJson,
    den: Option<PolyJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFileJson {
    maps: Vec<Vec<ComponentJson>>,
    lambdas: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub enum Lambda {
    Exact(String, f64),
    Float(f64),
}

impl Lambda {
    pub fn value(&self) -> f64 {
        match *self {
            Lambda::Exact(_, v) | Lambda::Float(v) => v,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Lambda::Exact(s, v) => json!({"parsed": "exact", "text": s, "value": v}),
            Lambda::Float(v) => json!({"parsed": "float", "value": v}),
        }
    }
}

pub struct MapFile {
    pub maps: Vec<RationalMap>,
    /// Absent in the file: every λ defaults to 1.
    pub lambdas: Option<Vec<Lambda>>,
}

fn parse_lambda(s: &str) -> Result<Lambda, String> {
    let s = s.trim();
    let l = if s.contains('/') {
        let r = parse_rational(s).map_err(|e| format!("lambda {s:?}: {e}"))?;
        let v = GaussRational::from_rational(r.clone()).to_complex64().re;
        Lambda::Exact(rational_to_string(&r), v)
    } else {
        Lambda::Float(s.parse::<f64>().map_err(|_| format!("lambda {s:?} is not a number"))?)
    };
    if !(l.value() > 0.0 && l.value().is_finite()) {
        return Err(format!("lambda {s:?} must be positive"));
    }
    Ok(l)
}

/// Reads a bare array of maps or {"maps": [...], "lambdas": [...]}.
pub fn parse_map_file(text: &str, space: &Space) -> Result<MapFile, String> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column()))?;
    let file: MapFileJson = if v.is_array() {
        MapFileJson { maps: serde_json::from_value(v).map_err(|e| format!("map list: {e}"))?, lambdas: None }
    } else {
        serde_json::from_value(v).map_err(|e| format!("map file: {e}"))?
    };
    if file.maps.is_empty() {
        return Err("map file holds no maps".into());
    }
    let mut maps = Vec::new();
    for (k, comps) in file.maps.iter().enumerate() {
        if comps.len() != space.n {
            return Err(format!("map {k}: {} components, space has dimension {}", comps.len(), space.n));
        }
        let mut pairs = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let num =
                Polynomial::from_json_in(&c.num, &space.ring).map_err(|e| format!("map {k} component {i}: {e}"))?;
            let den = match &c.den {
                Some(d) => {
                    Polynomial::from_json_in(d, &space.ring).map_err(|e| format!("map {k} component {i}: {e}"))?
                }
                None => Polynomial::one(&space.ring),
            };
            pairs.push((num, den));
        }
        maps.push(RationalMap::new(&space.ring, pairs).map_err(|e| format!("map {k}: {e}"))?);
    }
    let lambdas = match file.lambdas {
        None => None,
        Some(ls) => {
            if ls.len() != maps.len() {
                return Err(format!("{} lambdas for {} maps", ls.len(), maps.len()));
            }
            Some(ls.iter().map(|s| parse_lambda(s)).collect::<Result<Vec<_>, _>>()?)
        }
    };
    Ok(MapFile { maps, lambdas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hss_core::spaces::SpaceDescriptor;

    fn g11() -> Space {
        Space::build(SpaceDescriptor::TypeI(1, 1)).unwrap()
    }

    #[test]
    fn lambdas() {
        assert!(matches!(parse_lambda("3/2"), Ok(Lambda::Exact(ref s, v)) if s == "3/2" && v == 1.5));
        assert!(matches!(parse_lambda("0.25"), Ok(Lambda::Float(v)) if v == 0.25));
        assert!(parse_lambda("-1").is_err());
        assert!(parse_lambda("0/3").is_err());
        assert!(parse_lambda("x").is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let e = parse_map_file("[\n  {\"num\": }\n]", &g11()).err().unwrap();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn shape_errors() {
        let s = g11();
        let var = s.ring.names()[0].clone();
        let comp = format!(r#"{{"num": {{"vars": ["{var}"], "terms": [{{"exp": [1], "re": "1", "im": "0"}}]}}}}"#);
        assert_eq!(parse_map_file(&format!("[[{comp}]]"), &s).unwrap().maps.len(), 1);
        assert!(parse_map_file(&format!("[[{comp}, {comp}]]"), &s).is_err());
        assert!(parse_map_file(&format!(r#"{{"maps": [[{comp}]], "lambdas": ["1", "2"]}}"#), &s).is_err());
        assert!(parse_map_file("[]", &s).is_err());
        let bad = r#"[[{"num": {"vars": ["q"], "terms": []}}]]"#;
        assert!(parse_map_file(bad, &s).is_err());
    }
}
