//! Where instances come from: a JSON file, or a generator plus an encoder.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use confcolor::io::{load_graph, load_instance, LoadOptions};
use confcolor::lab::{
    encode_edge_coloring, encode_list_coloring, encode_mis, encode_plus_one_coloring, gen_graph, random_lists,
    EdgeColoringEncoding, GenParams, GraphKind, MisMode,
};
use confcolor::{Color, ConflictInstance, PortGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Encode {
    Plus1,
    /// Lists from `--lists`, or random lists of size deg+1.
    List,
    Edge,
    MisLiteral,
    MisStrict,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Instance JSON file.
    #[arg(long, conflicts_with_all = ["gen", "graph"])]
    pub instance: Option<PathBuf>,
    /// Generator spec such as `ring:64`, `random:200:8`, `tree:50:4`, `petersen`.
    #[arg(long)]
    pub gen: Option<GraphKind>,
    /// Graph JSON file, as written by `gen`.
    #[arg(long, conflicts_with = "gen")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "plus1")]
    pub encode: Encode,
    /// Lists keyed by node identity, e.g. `{"1":[1],"2":[1,2]}`.
    #[arg(long)]
    pub lists: Option<String>,
    /// Palette for random lists.
    #[arg(long, default_value_t = 40)]
    pub palette: usize,
    /// Draw identities from `1..=id_range` instead of `1..=n`.
    #[arg(long)]
    pub id_range: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub struct Loaded {
    pub instance: ConflictInstance,
    /// Set when the instance is the line-graph encoding of `graph`.
    pub edge: Option<EdgeColoringEncoding>,
    pub graph: PortGraph,
}

impl InputArgs {
    pub fn load(&self) -> Result<Loaded> {
        if let Some(path) = &self.instance {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let instance = load_instance(&text, LoadOptions::default()).with_context(|| format!("loading {}", path.display()))?;
            let graph = instance.graph().clone();
            return Ok(Loaded { instance, edge: None, graph });
        }
        let graph = match (&self.gen, &self.graph) {
            (Some(kind), _) => gen_graph(*kind, GenParams { id_range: self.id_range }, self.seed)?,
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                load_graph(&text)?
            }
            (None, None) => bail!("one of --instance, --gen or --graph is required"),
        };
        let mut edge = None;
        let instance = match self.encode {
            Encode::Plus1 => encode_plus_one_coloring(&graph),
            Encode::List => {
                let lists = match &self.lists {
                    Some(text) => parse_lists(&graph, text)?,
                    None => random_lists(&graph, self.palette, self.seed),
                };
                encode_list_coloring(&graph, lists)
            }
            Encode::Edge => {
                let enc = encode_edge_coloring(&graph);
                let instance = enc.instance.clone();
                edge = Some(enc);
                instance
            }
            Encode::MisLiteral => encode_mis(&graph, MisMode::Literal),
            Encode::MisStrict => encode_mis(&graph, MisMode::Strict),
        };
        Ok(Loaded { instance, edge, graph })
    }
}

fn parse_lists(graph: &PortGraph, text: &str) -> Result<Vec<Vec<Color>>> {
    let map: BTreeMap<u64, Vec<Color>> = serde_json::from_str(text).context("parsing --lists")?;
    graph
        .ids()
        .iter()
        .map(|id| match map.get(id) {
            Some(l) if !l.is_empty() => Ok(l.clone()),
            _ => bail!("--lists has no nonempty list for node {id}"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_keyed_by_identity() {
        let g = PortGraph::from_edges(vec![7, 9], &[(7, 9)]).unwrap();
        let l = parse_lists(&g, r#"{"9": [1, 2], "7": ["a"]}"#).unwrap();
        assert_eq!(l[0], vec![Color::Name("a".into())]);
        assert_eq!(l[1].len(), 2);
        assert!(parse_lists(&g, r#"{"7": [1]}"#).is_err());
        assert!(parse_lists(&g, r#"{"7": [1], "9": []}"#).is_err());
    }
}
