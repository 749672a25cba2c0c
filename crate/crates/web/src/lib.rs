//! wasm-bindgen entry points for the static demo page in `www/`.
//! Every function returns a JSON string; errors become `{"error": ...}`.

use fibercoh::fiber::FiberPoint;
use fibercoh::ratmap::{FiberMap, RationalMapData};
use fibercoh::script::{RunOptions, Script, Session};
use fibercoh::{Error, Ring, RingDescriptor};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn error_json(e: &Error) -> Value {
    match e {
        Error::Parse { line, col, offset, msg } => {
            json!({ "error": e.to_string(), "line": line, "col": col, "offset": offset, "msg": msg })
        }
        _ => json!({ "error": e.to_string() }),
    }
}

fn finish(r: Result<Value, Error>) -> String {
    r.unwrap_or_else(|e| error_json(&e)).to_string()
}

/// Run a session script; returns `[{"stem", "output"}, ...]`.
#[wasm_bindgen]
pub fn run_script(src: &str, seed: u32) -> String {
    finish(Session::from_text(src).map(|s| {
        let opts = RunOptions { seed: seed as u64, ..RunOptions::default() };
        Value::Array(s.run(&opts).into_iter().map(|o| json!({ "stem": o.stem, "output": o.json })).collect())
    }))
}

/// Normalized text of a script, or the parse error with its position.
#[wasm_bindgen]
pub fn format_script(src: &str) -> String {
    finish(Script::parse(src).map(|s| json!({ "text": s.to_string() })))
}

/// Image degree, map degree and saturated fiber multiplicity of a map
/// `P^r ⇢ P^s` given by comma-separated forms in `x0..x_r`.
#[wasm_bindgen]
pub fn rational_map(forms: &str, r: u32, seed: u32) -> String {
    finish(rational_map_value(forms, r as usize, seed as u64))
}

fn rational_map_value(forms: &str, r: usize, seed: u64) -> Result<Value, Error> {
    if r == 0 || r > 3 {
        return Err(Error::Invalid("source dimension must be 1, 2 or 3".into()));
    }
    let names: Vec<String> = (0..=r).map(|i| format!("x{i}")).collect();
    let vars: Vec<(&str, i64)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    let ring = Ring::new(&RingDescriptor::standard(&vars))?;
    let gens = forms
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| ring.parse_poly(s))
        .collect::<Result<Vec<_>, _>>()?;
    let map = RationalMapData::new(&ring, gens)?;
    let fm = FiberMap::new(&map, FiberPoint::Closed(vec![]))?;
    let inv = fm.invariants(map.default_cutoff(), seed)?;
    let image: Vec<String> = fm.image_ideal()?.iter().map(|p| p.to_string()).collect();
    let mut v = serde_json::to_value(inv).expect("invariants serialize");
    v["image_ideal"] = json!(image);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_map() {
        let v: Value = serde_json::from_str(&rational_map("x0^2, x0*x1, x1^2", 1, 0)).unwrap();
        assert_eq!((v["deg_y"].as_i64(), v["deg_g"].as_i64(), v["e_sat"].as_i64()), (Some(2), Some(1), Some(2)));
    }

    #[test]
    fn parse_error_position() {
        let v: Value = serde_json::from_str(&format_script("ring R base QQ vars x:1\ncmd betti M;")).unwrap();
        assert_eq!((v["line"].as_u64(), v["col"].as_u64()), (Some(2), Some(1)));
    }

    #[test]
    fn script_runs() {
        let v: Value = serde_json::from_str(&run_script(
            "ring R base QQ vars x:1, y:1;\nideal I = (x*y);\nmodule M = quotient I;\ncmd invariants M;",
            0,
        ))
        .unwrap();
        assert_eq!(v[0]["output"]["result"]["dim"], 1);
    }
}
