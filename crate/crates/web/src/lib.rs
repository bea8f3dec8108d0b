//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes and returns JSON text. The plain functions beside them
//! carry the logic so they can be tested natively.

use layercake::instance::{allocation_to_json, generate};
use layercake::rational::{self, Rational};
use layercake::render::render_svg;
use layercake::session::diagonal_function;
use layercake::{solve, Instance, Protocol, QuerySession};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Solves and returns `{"allocation", "report", "svg"}`.
pub fn solve_json(instance: &str, protocol: &str) -> Result<String, String> {
    let inst = Instance::parse(instance).map_err(|e| e.to_string())?;
    let protocol: Protocol = protocol.parse().map_err(|e: layercake::Error| e.to_string())?;
    let sol = solve(&inst, protocol).map_err(|e| e.to_string())?;
    let allocation: Value = serde_json::from_str(&allocation_to_json(&inst.names, &sol.allocation, None))
        .expect("allocation text is JSON");
    Ok(json!({
        "allocation": allocation,
        "report": sol.report.to_value(),
        "svg": render_svg(&inst.extents, &inst.names, &sol.allocation),
    })
    .to_string())
}

/// `f(x) = V_i(LR(x))` for an even-layered instance, as knots in exact and
/// float form plus the agent's switching point.
pub fn diagonal_json(instance: &str, agent: usize) -> Result<String, String> {
    let inst = Instance::parse(instance).map_err(|e| e.to_string())?;
    let v = inst
        .valuations
        .get(agent)
        .ok_or_else(|| format!("no agent {agent}"))?;
    let cake = inst.cake();
    let mut s = QuerySession::new(cake.clone(), inst.valuations.clone());
    let x = s.switching_point(agent, &cake).map_err(|e| e.to_string())?;
    let f = diagonal_function(v.densities());
    let floats = |xs: &[Rational]| xs.iter().map(rational::to_f64).collect::<Vec<_>>();
    Ok(json!({
        "xs": floats(f.knots()),
        "ys": floats(f.knot_values()),
        "half": rational::to_f64(&(v.total() / rational::int(2))),
        "switching_point": rational::format(&x),
        "switching_value": rational::format(&f.eval(&x)),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn solve_instance(instance: &str, protocol: &str) -> Result<String, JsValue> {
    solve_json(instance, protocol).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn random_instance(
    agents: usize,
    layers: usize,
    breakpoints: usize,
    seed: u64,
) -> Result<String, JsValue> {
    if agents == 0 || layers == 0 {
        return Err(JsValue::from_str("need at least one agent and one layer"));
    }
    Ok(generate(agents, layers, breakpoints, seed).to_json())
}

#[wasm_bindgen]
pub fn diagonal_curve(instance: &str, agent: usize) -> Result<String, JsValue> {
    diagonal_json(instance, agent).map_err(|e| JsValue::from_str(&e))
}
