//! JSON serialization of games.
//!
//! Schema: `{ "n": int, "owner": ["max"|"min", ...], "edges": [{"from": int,
//! "to": int, "w": string}, ...] }`. Vertices are 1-based in files and
//! 0-based in memory. Weights are strings holding a rational (`"p/q"`),
//! integer, or finite decimal literal; `save_game` always writes the exact
//! `"p"` / `"p/q"` form so weights round-trip exactly.

use serde_json::{json, Value};

use crate::error::CoreError;
use crate::game::{validate_game, Edge, Game, Player};
use crate::rat::{rat_from_str, rat_to_string, Rat};

fn parse_error(text: &str, field: &str, message: impl Into<String>) -> CoreError {
    // Best-effort line attribution: first occurrence of the quoted field name.
    let line = text
        .find(&format!("\"{field}\""))
        .map(|pos| text[..pos].bytes().filter(|&b| b == b'\n').count() + 1)
        .unwrap_or(1);
    CoreError::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn require_u64(text: &str, v: &Value, field: &str) -> Result<u64, CoreError> {
    v.as_u64()
        .ok_or_else(|| parse_error(text, field, "expected a non-negative integer"))
}

fn parse_weight(text: &str, v: &Value, field: &str) -> Result<Rat, CoreError> {
    match v {
        Value::String(s) => rat_from_str(s).ok_or_else(|| {
            parse_error(
                text,
                field,
                format!("`{s}` is not a rational or decimal literal"),
            )
        }),
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else {
                Err(parse_error(
                    text,
                    field,
                    "non-integer numeric weights must be quoted strings to stay exact",
                ))
            }
        }
        _ => Err(parse_error(text, field, "expected a string or integer")),
    }
}

/// Parses a game from its JSON text form. Fails with `Parse` on malformed
/// input and with `Validation` when the decoded game breaks the structural
/// invariants.
pub fn load_game(text: &str) -> Result<Game, CoreError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CoreError::Parse {
        line: e.line(),
        field: String::new(),
        message: e.to_string(),
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| parse_error(text, "", "top-level value must be an object"))?;

    let n = require_u64(
        text,
        obj.get("n")
            .ok_or_else(|| parse_error(text, "n", "missing field"))?,
        "n",
    )? as usize;

    let owner_val = obj
        .get("owner")
        .ok_or_else(|| parse_error(text, "owner", "missing field"))?;
    let owner_arr = owner_val
        .as_array()
        .ok_or_else(|| parse_error(text, "owner", "expected an array"))?;
    if owner_arr.len() != n {
        return Err(parse_error(
            text,
            "owner",
            format!("expected {} entries, found {}", n, owner_arr.len()),
        ));
    }
    let mut owner = Vec::with_capacity(n);
    for (i, o) in owner_arr.iter().enumerate() {
        match o.as_str() {
            Some("max") => owner.push(Player::Max),
            Some("min") => owner.push(Player::Min),
            _ => {
                return Err(parse_error(
                    text,
                    "owner",
                    format!("entry {i} must be \"max\" or \"min\""),
                ))
            }
        }
    }

    let edges_val = obj
        .get("edges")
        .ok_or_else(|| parse_error(text, "edges", "missing field"))?;
    let edges_arr = edges_val
        .as_array()
        .ok_or_else(|| parse_error(text, "edges", "expected an array"))?;
    let mut edges = Vec::with_capacity(edges_arr.len());
    for (i, e) in edges_arr.iter().enumerate() {
        let eobj = e
            .as_object()
            .ok_or_else(|| parse_error(text, "edges", format!("entry {i} must be an object")))?;
        let from_field = format!("edges[{i}].from");
        let to_field = format!("edges[{i}].to");
        let w_field = format!("edges[{i}].w");
        let from = require_u64(
            text,
            eobj.get("from")
                .ok_or_else(|| parse_error(text, "from", format!("missing in edge {i}")))?,
            &from_field,
        )? as usize;
        let to = require_u64(
            text,
            eobj.get("to")
                .ok_or_else(|| parse_error(text, "to", format!("missing in edge {i}")))?,
            &to_field,
        )? as usize;
        if from == 0 || to == 0 {
            return Err(parse_error(
                text,
                "edges",
                format!("entry {i}: vertex indices are 1-based"),
            ));
        }
        let weight = parse_weight(
            text,
            eobj.get("w")
                .ok_or_else(|| parse_error(text, "w", format!("missing in edge {i}")))?,
            &w_field,
        )?;
        edges.push(Edge {
            from: from - 1,
            to: to - 1,
            weight,
        });
    }

    let game = Game::new(owner, edges);
    let report = validate_game(&game);
    if !report.ok {
        return Err(CoreError::Validation(report));
    }
    Ok(game)
}

/// Serializes a game to the JSON text form read by `load_game`.
pub fn save_game(g: &Game) -> String {
    let owner: Vec<&str> = g
        .owners()
        .iter()
        .map(|p| match p {
            Player::Max => "max",
            Player::Min => "min",
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            json!({
                "from": e.from + 1,
                "to": e.to + 1,
                "w": rat_to_string(&e.weight),
            })
        })
        .collect();
    let doc = json!({
        "n": g.n(),
        "owner": owner,
        "edges": edges,
    });
    serde_json::to_string_pretty(&doc).expect("game serialization cannot fail")
}
