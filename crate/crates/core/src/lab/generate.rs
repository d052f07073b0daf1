//! Deterministic graph generators with canonical ports.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::PortGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphKind {
    Ring { n: usize },
    Path { n: usize },
    /// `K_{1,leaves}`.
    Star { leaves: usize },
    Complete { n: usize },
    RandomBoundedDegree { n: usize, max_degree: usize },
    /// Random recursive tree; `max_degree = 0` means unbounded.
    Tree { n: usize, max_degree: usize },
    Petersen,
}

/// Identity assignment: `1..=n` by default, or a seeded sample of distinct
/// identities from `1..=id_range`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub id_range: Option<u64>,
}

impl FromStr for GraphKind {
    type Err = GenError;

    /// `ring:64`, `path:5`, `star:8`, `complete:4`, `random:200:8`,
    /// `tree:200[:maxdeg]`, `petersen`.
    fn from_str(s: &str) -> Result<Self, GenError> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize, GenError> {
            parts
                .get(i)
                .ok_or_else(|| GenError::InvalidParams(format!("`{s}` is missing a parameter")))?
                .parse()
                .map_err(|_| GenError::InvalidParams(format!("`{s}`: bad number")))
        };
        match parts[0] {
            "ring" => Ok(GraphKind::Ring { n: num(1)? }),
            "path" => Ok(GraphKind::Path { n: num(1)? }),
            "star" => Ok(GraphKind::Star { leaves: num(1)? }),
            "complete" => Ok(GraphKind::Complete { n: num(1)? }),
            "random" | "random-bounded-degree" => {
                Ok(GraphKind::RandomBoundedDegree { n: num(1)?, max_degree: num(2)? })
            }
            "tree" => Ok(GraphKind::Tree { n: num(1)?, max_degree: if parts.len() > 2 { num(2)? } else { 0 } }),
            "petersen" => Ok(GraphKind::Petersen),
            other => Err(GenError::InvalidParams(format!("unknown graph kind `{other}`"))),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Ring { n } => write!(f, "ring:{n}"),
            GraphKind::Path { n } => write!(f, "path:{n}"),
            GraphKind::Star { leaves } => write!(f, "star:{leaves}"),
            GraphKind::Complete { n } => write!(f, "complete:{n}"),
            GraphKind::RandomBoundedDegree { n, max_degree } => write!(f, "random:{n}:{max_degree}"),
            GraphKind::Tree { n, max_degree: 0 } => write!(f, "tree:{n}"),
            GraphKind::Tree { n, max_degree } => write!(f, "tree:{n}:{max_degree}"),
            GraphKind::Petersen => write!(f, "petersen"),
        }
    }
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidParams(msg.into())
}

/// Edges over node indices `0..n`.
fn shape(kind: GraphKind, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<(usize, usize)>), GenError> {
    Ok(match kind {
        GraphKind::Ring { n } => {
            if n < 3 {
                return Err(invalid("ring needs n >= 3"));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        GraphKind::Path { n } => {
            if n < 1 {
                return Err(invalid("path needs n >= 1"));
            }
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        GraphKind::Star { leaves } => (leaves + 1, (1..=leaves).map(|i| (0, i)).collect()),
        GraphKind::Complete { n } => {
            if n < 1 {
                return Err(invalid("complete graph needs n >= 1"));
            }
            (n, (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect())
        }
        GraphKind::Petersen => {
            let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            e.extend((0..5).map(|i| (i, i + 5)));
            e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
            (10, e)
        }
        GraphKind::Tree { n, max_degree } => {
            if n == 0 || (max_degree == 1 && n > 2) {
                return Err(invalid("tree needs n >= 1 and max_degree != 1 unless n <= 2"));
            }
            let cap = if max_degree == 0 { usize::MAX } else { max_degree };
            (n, random_tree(n, cap, rng))
        }
        GraphKind::RandomBoundedDegree { n, max_degree } => {
            if n == 0 || (n > 2 && max_degree < 2) || (n > 1 && max_degree > n - 1) {
                return Err(invalid("random graph needs 2 <= max_degree <= n-1"));
            }
            let mut edges = random_tree(n, max_degree, rng);
            let mut deg = vec![0usize; n];
            let mut set: HashSet<(usize, usize)> = HashSet::new();
            for &(a, b) in &edges {
                deg[a] += 1;
                deg[b] += 1;
                set.insert((a.min(b), a.max(b)));
            }
            let mut misses = 0;
            while misses < 50 * n {
                let open: Vec<usize> = (0..n).filter(|&v| deg[v] < max_degree).collect();
                if open.len() < 2 {
                    break;
                }
                let a = *open.choose(rng).expect("nonempty");
                let b = *open.choose(rng).expect("nonempty");
                let key = (a.min(b), a.max(b));
                if a == b || set.contains(&key) {
                    misses += 1;
                    continue;
                }
                set.insert(key);
                deg[a] += 1;
                deg[b] += 1;
                edges.push(key);
            }
            (n, edges)
        }
    })
}

/// Random recursive tree with a degree cap.
fn random_tree(n: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let u = open[i];
        edges.push((u, v));
        deg[u] += 1;
        deg[v] += 1;
        if deg[u] >= cap {
            open.swap_remove(i);
        }
        if deg[v] < cap {
            open.push(v);
        }
    }
    edges
}

fn identities(n: usize, params: GenParams, rng: &mut ChaCha8Rng) -> Result<Vec<u64>, GenError> {
    match params.id_range {
        None => Ok((1..=n as u64).collect()),
        Some(range) if range < n as u64 => Err(invalid(format!("id range {range} is smaller than n = {n}"))),
        Some(range) => {
            let mut seen = BTreeSet::new();
            let mut ids = Vec::with_capacity(n);
            while ids.len() < n {
                let id = rng.gen_range(1..=range);
                if seen.insert(id) {
                    ids.push(id);
                }
            }
            Ok(ids)
        }
    }
}

/// Builds the requested graph; deterministic for a given seed.
pub fn gen_graph(kind: GraphKind, params: GenParams, seed: u64) -> Result<PortGraph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, edges) = shape(kind, &mut rng)?;
    let ids = identities(n, params, &mut rng)?;
    let by_id: Vec<(u64, u64)> = edges.iter().map(|&(a, b)| (ids[a], ids[b])).collect();
    let g = PortGraph::from_edges(ids, &by_id).map_err(|e| invalid(e.to_string()))?;
    g.require_connected().map_err(|e| invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_shapes() {
        let ring = gen_graph(GraphKind::Ring { n: 8 }, GenParams::default(), 0).unwrap();
        assert_eq!((ring.n(), ring.max_degree()), (8, 2));
        let p = gen_graph(GraphKind::Petersen, GenParams::default(), 0).unwrap();
        assert_eq!(p.n(), 10);
        assert!((0..10).all(|v| p.degree(v) == 3));
        let s = gen_graph("star:8".parse().unwrap(), GenParams::default(), 0).unwrap();
        assert_eq!((s.n(), s.max_degree()), (9, 8));
    }

    #[test]
    fn random_bounded_degree_audit() {
        let g = gen_graph(GraphKind::RandomBoundedDegree { n: 200, max_degree: 8 }, GenParams::default(), 1).unwrap();
        assert_eq!(g.n(), 200);
        assert_eq!(g.max_degree(), 8);
        assert!(g.is_connected());
    }

    #[test]
    fn seeds_are_deterministic() {
        let k = GraphKind::Tree { n: 50, max_degree: 4 };
        let p = GenParams { id_range: Some(1_000_000) };
        assert_eq!(gen_graph(k, p, 7).unwrap(), gen_graph(k, p, 7).unwrap());
        let g = gen_graph(k, p, 7).unwrap();
        assert!(g.max_degree() <= 4);
        assert!(g.ids().iter().all(|&id| (1..=1_000_000).contains(&id)));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for s in ["ring:64", "path:2", "random:200:8", "tree:20:3", "petersen", "complete:4"] {
            assert_eq!(s.parse::<GraphKind>().unwrap().to_string(), s);
        }
        assert!("blob:3".parse::<GraphKind>().is_err());
        assert!(gen_graph(GraphKind::Ring { n: 2 }, GenParams::default(), 0).is_err());
    }
}
