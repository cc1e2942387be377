//! Browser bindings: each function takes a quiver document as a JSON string
//! and returns a JSON string, with failures reported as `{"error", "message"}`.

use serde_json::{json, Value};
use torquiv::classify::{classify_2d, normal_fan_2d};
use torquiv::ideal::{certify_degree_bound, minimal_generators, GradedMonoid, GradedSemigroup};
use torquiv::polytope::lattice_points;
use torquiv::quiver::{flow_to_json, parse_quiver_json, Quiver, Weight};
use torquiv::reductions::flows_to_json;
use torquiv::{Error, Limits};
use wasm_bindgen::prelude::*;

/// Keeps a page responsive: enumerations stop well before the CLI default.
const WEB_LIMITS: Limits = Limits { max_nodes: 2_000_000 };

fn parse(doc: &str) -> Result<(Quiver, Weight), Error> {
    let (q, w) = parse_quiver_json(doc)?;
    let w = w.unwrap_or_else(|| vec![0; q.vertex_count()]);
    Ok((q, w))
}

fn render(r: Result<Value, Error>) -> String {
    let v = r.unwrap_or_else(|e| json!({ "error": e.kind(), "message": e.to_string() }));
    serde_json::to_string_pretty(&v).expect("serializable")
}

pub fn lattice_points_json(doc: &str, degree: u32) -> String {
    render(parse(doc).and_then(|(q, w)| {
        let pts = torquiv::polytope::lattice_points_with(&q, &w, degree, &WEB_LIMITS)?;
        Ok(json!({ "degree": degree, "count": pts.len(), "points": flows_to_json(&q, &pts) }))
    }))
}

pub fn classify_json(doc: &str) -> String {
    render(parse(doc).and_then(|(q, w)| {
        let surface = classify_2d(&q, &w)?;
        let fan = normal_fan_2d(&q, &w)?;
        let counts = (1..=3).map(|k| lattice_points(&q, &w, k).map(|p| p.len())).collect::<Result<Vec<_>, _>>()?;
        Ok(json!({ "surface": surface.name(), "rays": fan.rays, "lattice_counts": counts }))
    }))
}

pub fn ideal_json(doc: &str, max_degree: u32) -> String {
    render(parse(doc).and_then(|(q, w)| {
        let s = GradedSemigroup::with_limits(q.clone(), w, WEB_LIMITS)?;
        let gens = minimal_generators(&s, max_degree.max(2))?;
        let cert = certify_degree_bound(&s, 3, s.default_horizon(3))?;
        let table: Vec<Value> = s.generators().iter().map(|g| flow_to_json(&q, g)).collect();
        Ok(json!({
            "generators": table,
            "binomials": gens.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "degree_three": cert.to_json(),
        }))
    }))
}

#[wasm_bindgen(js_name = latticePoints)]
pub fn lattice_points_js(doc: &str, degree: u32) -> String {
    lattice_points_json(doc, degree)
}

#[wasm_bindgen(js_name = classifySurface)]
pub fn classify_js(doc: &str) -> String {
    classify_json(doc)
}

#[wasm_bindgen(js_name = idealGenerators)]
pub fn ideal_js(doc: &str, max_degree: u32) -> String {
    ideal_json(doc, max_degree)
}
