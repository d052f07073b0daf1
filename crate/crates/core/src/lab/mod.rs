//! Encoders, generators and the brute-force oracle used across the test suites.

pub mod corpus;
pub mod encode;
pub mod generate;
pub mod oracle;

pub use corpus::{corpus_graphs, encode, random_lists, validity_corpus, CorpusEntry, Encoding};
pub use encode::{
    decode_edge_coloring, decode_mis, encode_edge_coloring, encode_list_coloring, encode_mis,
    encode_plus_one_coloring, encode_plus_one_with_delta, is_mis, EdgeColoringEncoding, MisMode,
};
pub use generate::{gen_graph, GenError, GenParams, GraphKind};
pub use oracle::{brute_force_solve, enumerate_solutions, BruteForce};
