//! The fixed test corpus: small named graph families under three encodings.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::color::Color;
use crate::graph::PortGraph;
use crate::instance::ConflictInstance;

use super::encode::{encode_edge_coloring, encode_list_coloring, encode_plus_one_coloring};
use super::generate::{gen_graph, GenParams, GraphKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Plus1,
    /// Random lists of size `deg + 1`.
    List,
    Edge,
}

impl Encoding {
    pub const ALL: [Encoding; 3] = [Encoding::Plus1, Encoding::List, Encoding::Edge];
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: GraphKind,
    pub seed: u64,
    pub encoding: Encoding,
    pub graph: PortGraph,
    pub instance: ConflictInstance,
}

/// Lists of size `deg(v) + 1` drawn without replacement from
/// `{1..max(palette, deg(v)+1)}`.
pub fn random_lists(graph: &PortGraph, palette: usize, seed: u64) -> Vec<Vec<Color>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..graph.n())
        .map(|v| {
            let size = graph.degree(v) + 1;
            let mut l: Vec<Color> = sample(&mut rng, palette.max(size), size)
                .into_iter()
                .map(|i| Color::Int(i as i64 + 1))
                .collect();
            l.sort();
            l
        })
        .collect()
}

/// Encodes `graph`; `None` for the edge encoding of an edgeless graph.
pub fn encode(graph: &PortGraph, encoding: Encoding, seed: u64) -> Option<ConflictInstance> {
    match encoding {
        Encoding::Plus1 => Some(encode_plus_one_coloring(graph)),
        Encoding::List => Some(encode_list_coloring(graph, random_lists(graph, 40, seed))),
        Encoding::Edge if graph.edge_count() == 0 => None,
        Encoding::Edge => Some(encode_edge_coloring(graph).instance),
    }
}

/// Graph families of the validity corpus, with their seeds.
pub fn corpus_graphs() -> Vec<(GraphKind, u64)> {
    let mut out = Vec::new();
    out.extend((3..=64).map(|n| (GraphKind::Ring { n }, 0)));
    out.extend([1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 200].map(|n| (GraphKind::Path { n }, 0)));
    out.extend([1, 2, 3, 5, 8, 16, 32].map(|leaves| (GraphKind::Star { leaves }, 0)));
    for n in [10, 50, 100, 200] {
        out.extend((0..5).map(|s| (GraphKind::Tree { n, max_degree: 0 }, s)));
    }
    out.push((GraphKind::Petersen, 0));
    for max_degree in [4, 6, 8] {
        out.extend((0..50).map(|s| (GraphKind::RandomBoundedDegree { n: 200, max_degree }, s)));
    }
    out
}

/// Every corpus graph under every encoding.
pub fn validity_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (kind, seed) in corpus_graphs() {
        let graph = gen_graph(kind, GenParams::default(), seed).expect("corpus parameters are valid");
        for encoding in Encoding::ALL {
            if let Some(instance) = encode(&graph, encoding, seed) {
                out.push(CorpusEntry {
                    name: format!("{kind}#{seed}/{encoding:?}").to_lowercase(),
                    kind,
                    seed,
                    encoding,
                    graph: graph.clone(),
                    instance,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_have_slack() {
        let g = gen_graph(GraphKind::Star { leaves: 50 }, GenParams::default(), 0).unwrap();
        let l = random_lists(&g, 40, 3);
        assert!((0..g.n()).all(|v| l[v].len() == g.degree(v) + 1));
        assert_eq!(l, random_lists(&g, 40, 3));
    }

    #[test]
    fn corpus_size() {
        // 62 rings, 12 paths, 7 stars, 20 trees, Petersen, 150 random graphs
        assert_eq!(corpus_graphs().len(), 252);
    }
}
