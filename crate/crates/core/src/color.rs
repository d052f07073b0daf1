use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::PortGraph;

/// Opaque, totally ordered color token. Serialized as a bare integer or string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Color {
    Int(i64),
    Name(String),
}

impl Color {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Color::Int(c) => Some(*c),
            Color::Name(_) => None,
        }
    }
}

impl From<i64> for Color {
    fn from(c: i64) -> Self {
        Color::Int(c)
    }
}

impl From<&str> for Color {
    fn from(s: &str) -> Self {
        Color::Name(s.to_owned())
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Int(c) => write!(f, "{c}"),
            Color::Name(s) => write!(f, "{s}"),
        }
    }
}

/// Candidate or final output: one optional color per node index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorAssignment {
    colors: Vec<Option<Color>>,
}

impl ColorAssignment {
    pub fn empty(n: usize) -> Self {
        ColorAssignment { colors: vec![None; n] }
    }

    pub fn from_colors(colors: Vec<Color>) -> Self {
        ColorAssignment { colors: colors.into_iter().map(Some).collect() }
    }

    pub fn from_ints(colors: &[i64]) -> Self {
        Self::from_colors(colors.iter().map(|&c| Color::Int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<&Color> {
        self.colors.get(v).and_then(Option::as_ref)
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.colors[v] = Some(c);
    }

    pub fn clear(&mut self, v: usize) {
        self.colors[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<&Color>)> {
        self.colors.iter().enumerate().map(|(v, c)| (v, c.as_ref()))
    }

    /// Number of distinct colors in use.
    pub fn palette_size(&self) -> usize {
        let mut seen: Vec<&Color> = self.colors.iter().flatten().collect();
        seen.sort();
        seen.dedup();
        seen.len()
    }

    pub fn to_id_map(&self, graph: &PortGraph) -> BTreeMap<u64, Color> {
        self.iter()
            .filter_map(|(v, c)| c.map(|c| (graph.identity(v), c.clone())))
            .collect()
    }

    /// Rebuilds an assignment keyed by identity; unknown identities are ignored.
    pub fn from_id_map(graph: &PortGraph, map: &BTreeMap<u64, Color>) -> Self {
        let mut out = Self::empty(graph.n());
        for (&id, c) in map {
            if let Some(v) = graph.index_of(id) {
                out.set(v, c.clone());
            }
        }
        out
    }
}
