//! Reference models shipped with the library.
//!
//! `servers`: three servers a, b, c over five states with atoms p, q, r.
//! a cannot tell s0, s1, s2 apart, b cannot tell s0, s3, s4 apart, and c
//! knows nothing. `servers_ideal` adds the ideal transitions s1–s0 and
//! s3–s0. `pooling_gap`: two agents whose pooled information differs from
//! what any round of sharing produces.

use crate::kripke::{load, Model};

pub const SERVERS: &str = include_str!("../models/servers.json");
pub const SERVERS_IDEAL: &str = include_str!("../models/servers_ideal.json");
pub const POOLING_GAP: &str = include_str!("../models/pooling_gap.json");

/// Name and JSON text of every built-in model.
pub const ALL: [(&str, &str); 3] = [
    ("servers", SERVERS),
    ("servers_ideal", SERVERS_IDEAL),
    ("pooling_gap", POOLING_GAP),
];

fn parse(text: &str) -> Model {
    load(text.as_bytes()).expect("built-in model is valid")
}

pub fn servers() -> Model {
    parse(SERVERS)
}

pub fn servers_ideal() -> Model {
    parse(SERVERS_IDEAL)
}

pub fn pooling_gap() -> Model {
    parse(POOLING_GAP)
}

pub fn by_name(name: &str) -> Option<Model> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| parse(t))
}
