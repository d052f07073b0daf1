//! Linial's color reduction through cover-free families.
//!
//! Family members are graphs of polynomials of degree at most `D` over a prime
//! field `F_q`: color `j` owns `{(x, p_j(x)) : x in F_q}` where the
//! coefficients of `p_j` are the base-`q` digits of `j`. Two distinct
//! polynomials agree on at most `D` points, so a set meets the union of `Δ`
//! others in at most `Δ·D < q` points and is never covered when `q > Δ·D`.
//! Sets live in a ground set of `q²` points.

use serde::Serialize;
use thiserror::Error;

use crate::color::ColorAssignment;
use crate::graph::PortGraph;
use crate::math::next_prime;
use crate::orientation::Orientation;
use crate::runtime::{run_sync, NodeContext, NodeProgram, Step};

/// Worst-case final palette is at most `K·Δ²` (frozen).
pub const LINIAL_K: u64 = 16;

/// Default cap on the ground-set size `q²`.
pub const DEFAULT_GROUND_BUDGET: u64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinialError {
    #[error("cover-free family for m={m}, Δ={delta} needs ground set {needed} > budget {budget}")]
    ParameterOverflow { m: u64, delta: u64, needed: u128, budget: u64 },
    #[error("input coloring is improper: nodes {0} and {1} share a color")]
    ImproperInput(u64, u64),
    #[error("input color {color} at node {node} is outside the palette 0..{s}")]
    ColorOutOfRange { node: u64, color: u64, s: u64 },
    #[error("simulated run did not finish: {0}")]
    Runtime(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverFreeFamily {
    pub m: u64,
    pub cover: u64,
    pub q: u64,
    pub degree: u32,
}

impl CoverFreeFamily {
    pub fn ground_set_size(&self) -> u64 {
        self.q * self.q
    }

    /// Point `(x, y)` is encoded as `x·q + y`. Sorted ascending.
    pub fn set(&self, j: u64) -> Vec<u64> {
        let q = self.q;
        let mut coeffs = Vec::with_capacity(self.degree as usize + 1);
        let mut rest = j;
        for _ in 0..=self.degree {
            coeffs.push(rest % q);
            rest /= q;
        }
        (0..q)
            .map(|x| {
                let y = coeffs.iter().rev().fold(0u64, |acc, &c| ((acc as u128 * x as u128 + c as u128) % q as u128) as u64);
                x * q + y
            })
            .collect()
    }

    /// Smallest point of set `own` outside the union of `others`.
    pub fn pick(&self, own: u64, others: &[u64]) -> Option<u64> {
        let mut blocked: Vec<u64> = others.iter().flat_map(|&o| self.set(o)).collect();
        blocked.sort_unstable();
        self.set(own).into_iter().find(|p| blocked.binary_search(p).is_err())
    }

    /// Exhaustive cover-freeness check; exponential, for small families.
    pub fn is_cover_free_exhaustive(&self) -> bool {
        let sets: Vec<Vec<u64>> = (0..self.m).map(|j| self.set(j)).collect();
        let k = self.cover as usize;
        (0..sets.len()).all(|s| {
            let others: Vec<usize> = (0..sets.len()).filter(|&o| o != s).collect();
            !covers(&sets, &sets[s], &others, k, &mut Vec::new())
        })
    }
}

fn covers(sets: &[Vec<u64>], target: &[u64], pool: &[usize], k: usize, chosen: &mut Vec<usize>) -> bool {
    let covered = |chosen: &[usize]| {
        target.iter().all(|p| chosen.iter().any(|&c| sets[c].binary_search(p).is_ok()))
    };
    if chosen.len() == k || pool.is_empty() {
        return covered(chosen);
    }
    for (i, &c) in pool.iter().enumerate() {
        chosen.push(c);
        let hit = covers(sets, target, &pool[i + 1..], k, chosen);
        chosen.pop();
        if hit {
            return true;
        }
    }
    covered(chosen)
}

/// The `Δ`-cover-free family of `m` sets with the smallest ground set
/// (ties broken toward smaller degree).
pub fn cover_free_family(m: u64, delta: u64) -> Result<CoverFreeFamily, LinialError> {
    cover_free_family_with_budget(m, delta, DEFAULT_GROUND_BUDGET)
}

pub fn cover_free_family_with_budget(m: u64, delta: u64, budget: u64) -> Result<CoverFreeFamily, LinialError> {
    let m = m.max(1);
    let delta = delta.max(1);
    let mut best: Option<CoverFreeFamily> = None;
    for degree in 0u32.. {
        let floor = delta * degree as u64 + 1;
        if let Some(b) = best {
            if floor > b.q {
                break;
            }
        }
        let q = next_prime(floor.max(root_ceil(m, degree + 1)));
        if best.map_or(true, |b| q < b.q) {
            best = Some(CoverFreeFamily { m, cover: delta, q, degree });
        }
    }
    let fam = best.expect("degree 0 always yields a family");
    let needed = fam.q as u128 * fam.q as u128;
    if needed > budget as u128 {
        return Err(LinialError::ParameterOverflow { m, delta, needed, budget });
    }
    Ok(fam)
}

/// Smallest `q` with `q^e >= m`.
fn root_ceil(m: u64, e: u32) -> u64 {
    let mut q = (m as f64).powf(1.0 / e as f64).floor().max(1.0) as u64;
    while q > 1 && pow_at_least(q - 1, e, m) {
        q -= 1;
    }
    while !pow_at_least(q, e, m) {
        q += 1;
    }
    q
}

fn pow_at_least(q: u64, e: u32, m: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= q as u128;
        if acc >= m as u128 {
            return true;
        }
    }
    acc >= m as u128
}

/// Families applied in sequence, starting from palette `s0`, while each
/// strictly shrinks the palette.
pub fn reduction_schedule(s0: u64, delta: u64) -> Result<Vec<CoverFreeFamily>, LinialError> {
    let mut out = Vec::new();
    let mut s = s0.max(1);
    if delta == 0 {
        return Ok(out);
    }
    loop {
        let fam = cover_free_family(s, delta)?;
        if fam.ground_set_size() >= s {
            return Ok(out);
        }
        s = fam.ground_set_size();
        out.push(fam);
    }
}

/// Node input for [`LinialProgram`]: initial color and, for the oriented
/// variant, which ports point to out-neighbors.
#[derive(Clone, Debug)]
pub struct LinialInput {
    pub color: u64,
    pub out_ports: Option<Vec<bool>>,
}

/// Runs a fixed schedule of reductions, one round each. Every node knows the
/// schedule (it depends only on the known palette and degree bound).
pub struct LinialProgram {
    pub schedule: Vec<CoverFreeFamily>,
}

impl NodeProgram for LinialProgram {
    type Input = LinialInput;
    type State = LinialInput;
    type Msg = u64;
    type Output = u64;

    fn init(&self, _: &NodeContext, input: &LinialInput) -> LinialInput {
        input.clone()
    }

    fn step(&self, _: &NodeContext, round: usize, st: &mut LinialInput, inbox: &[Option<u64>]) -> Step<u64, u64> {
        if round > 0 {
            let fam = &self.schedule[round - 1];
            let others: Vec<u64> = inbox
                .iter()
                .enumerate()
                .filter(|(p, _)| st.out_ports.as_ref().map_or(true, |o| o[*p]))
                .filter_map(|(_, c)| *c)
                .collect();
            st.color = fam.pick(st.color, &others).expect("cover-free family leaves a free point");
        }
        if round == self.schedule.len() {
            Step::done(st.color)
        } else {
            Step::send(st.color)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinialRun {
    /// Colors in `0..palette`.
    pub colors: Vec<u64>,
    pub palette: u64,
    pub rounds: usize,
    pub schedule: Vec<CoverFreeFamily>,
}

impl LinialRun {
    pub fn assignment(&self) -> ColorAssignment {
        ColorAssignment::from_ints(&self.colors.iter().map(|&c| c as i64).collect::<Vec<_>>())
    }
}

fn check_proper(graph: &PortGraph, colors: &[u64], s: u64) -> Result<(), LinialError> {
    for v in 0..graph.n() {
        if colors[v] >= s {
            return Err(LinialError::ColorOutOfRange { node: graph.identity(v), color: colors[v], s });
        }
    }
    for (u, _, v, _) in graph.edges() {
        if colors[u] == colors[v] {
            return Err(LinialError::ImproperInput(graph.identity(u), graph.identity(v)));
        }
    }
    Ok(())
}

fn execute(
    graph: &PortGraph,
    colors: &[u64],
    s: u64,
    schedule: Vec<CoverFreeFamily>,
    out_ports: Option<&Orientation>,
    n_upper_bound: u64,
) -> Result<LinialRun, LinialError> {
    let inputs: Vec<LinialInput> = (0..graph.n())
        .map(|v| LinialInput { color: colors[v], out_ports: out_ports.map(|o| o.flags(v).to_vec()) })
        .collect();
    let rounds = schedule.len();
    let palette = schedule.last().map_or(s, |f| f.ground_set_size());
    let program = LinialProgram { schedule };
    let trace = run_sync(graph, &program, &inputs, n_upper_bound, rounds)
        .map_err(|e| LinialError::Runtime(e.to_string()))?;
    Ok(LinialRun { colors: trace.outputs, palette, rounds: trace.rounds_used, schedule: program.schedule })
}

/// One reduction round from a proper `s`-coloring with colors in `0..s`.
pub fn linial_reduce(graph: &PortGraph, colors: &[u64], s: u64) -> Result<LinialRun, LinialError> {
    check_proper(graph, colors, s)?;
    let delta = graph.max_degree() as u64;
    if delta == 0 {
        return Ok(LinialRun { colors: vec![0; graph.n()], palette: 1, rounds: 0, schedule: vec![] });
    }
    let fam = cover_free_family(s, delta)?;
    execute(graph, colors, s, vec![fam], None, s)
}

/// Reduces a proper `s`-coloring under degree bound `delta` until the palette
/// stops shrinking.
pub fn reduce_to_fixpoint(
    graph: &PortGraph,
    colors: &[u64],
    s: u64,
    delta: u64,
    n_upper_bound: u64,
) -> Result<LinialRun, LinialError> {
    check_proper(graph, colors, s)?;
    if delta == 0 || graph.edge_count() == 0 {
        return Ok(LinialRun { colors: vec![0; graph.n()], palette: 1, rounds: 0, schedule: vec![] });
    }
    let schedule = reduction_schedule(s, delta)?;
    execute(graph, colors, s, schedule, None, n_upper_bound)
}

/// Oriented variant: each node only avoids its out-neighbors, so a
/// `Δ⃗`-cover-free family suffices and the palette drops to `O(Δ⃗²)`.
/// Adjacent nodes still get distinct colors because every edge is an
/// out-edge of one endpoint.
pub fn reduce_oriented(
    graph: &PortGraph,
    orientation: &Orientation,
    colors: &[u64],
    s: u64,
    n_upper_bound: u64,
) -> Result<LinialRun, LinialError> {
    reduce_oriented_with(graph, orientation, orientation.max_outdegree() as u64, colors, s, n_upper_bound)
}

/// [`reduce_oriented`] with an externally known outdegree bound.
pub fn reduce_oriented_with(
    graph: &PortGraph,
    orientation: &Orientation,
    outdeg: u64,
    colors: &[u64],
    s: u64,
    n_upper_bound: u64,
) -> Result<LinialRun, LinialError> {
    check_proper(graph, colors, s)?;
    assert!(orientation.max_outdegree() as u64 <= outdeg, "orientation exceeds the outdegree bound");
    if outdeg == 0 || graph.edge_count() == 0 {
        return Ok(LinialRun { colors: vec![0; graph.n()], palette: 1, rounds: 0, schedule: vec![] });
    }
    let schedule = reduction_schedule(s, outdeg)?;
    execute(graph, colors, s, schedule, Some(orientation), n_upper_bound)
}

/// Proper coloring with at most `K·Δ²` colors starting from identities, which
/// are assumed to be at most `n_upper_bound`.
pub fn delta2_coloring_with(graph: &PortGraph, max_degree: usize, n_upper_bound: u64) -> Result<LinialRun, LinialError> {
    let colors: Vec<u64> = graph.ids().to_vec();
    reduce_to_fixpoint(graph, &colors, n_upper_bound + 1, max_degree as u64, n_upper_bound)
}

/// [`delta2_coloring_with`] using the graph's own maximum degree and identity.
pub fn delta2_coloring(graph: &PortGraph) -> Result<LinialRun, LinialError> {
    let n_upper = graph.ids().iter().copied().max().unwrap_or(1);
    delta2_coloring_with(graph, graph.max_degree(), n_upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u64) -> PortGraph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        PortGraph::from_edges((1..=n).collect(), &edges).unwrap()
    }

    #[test]
    fn small_families() {
        let f = cover_free_family(2, 1).unwrap();
        assert_eq!((f.q, f.degree), (2, 0));
        assert!(f.is_cover_free_exhaustive());
        let f = cover_free_family(16, 2).unwrap();
        assert_eq!((f.q, f.degree, f.ground_set_size()), (5, 1, 25));
        assert!((0..16).all(|j| f.set(j).len() == 5));
        assert!(f.is_cover_free_exhaustive());
    }

    #[test]
    fn linear_polynomials_meet_at_most_once() {
        let f = CoverFreeFamily { m: 25, cover: 1, q: 5, degree: 1 };
        for a in 0..25 {
            for b in (a + 1)..25 {
                let sa = f.set(a);
                let shared = f.set(b).iter().filter(|p| sa.contains(p)).count();
                assert!(shared <= 1);
            }
        }
    }

    #[test]
    fn budget_overflow() {
        assert!(matches!(
            cover_free_family_with_budget(1 << 40, 1000, 100),
            Err(LinialError::ParameterOverflow { .. })
        ));
    }

    #[test]
    fn ring16_single_round() {
        let g = ring(16);
        let colors: Vec<u64> = (0..16).collect();
        let run = linial_reduce(&g, &colors, 16).unwrap();
        assert_eq!(run.rounds, 1);
        assert_eq!(run.palette, 25);
        assert!(run.colors.iter().all(|&c| c < 25));
        for (u, _, v, _) in g.edges() {
            assert_ne!(run.colors[u], run.colors[v]);
        }
    }

    #[test]
    fn improper_input_rejected() {
        let g = ring(4);
        assert_eq!(linial_reduce(&g, &[0, 0, 1, 2], 4), Err(LinialError::ImproperInput(1, 2)));
    }

    #[test]
    fn edgeless_graph_is_unchanged() {
        let g = PortGraph::from_edges(vec![5], &[]).unwrap();
        let run = linial_reduce(&g, &[0], 1).unwrap();
        assert_eq!((run.colors, run.rounds), (vec![0], 0));
    }

    #[test]
    fn k2_and_ring_schedule() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let run = delta2_coloring(&g).unwrap();
        assert_ne!(run.colors[0], run.colors[1]);
        let sched: Vec<u64> = reduction_schedule(10_000_000_001, 2).unwrap().iter().map(|f| f.ground_set_size()).collect();
        assert_eq!(sched, vec![289, 49, 25]);
    }

    #[test]
    fn final_palette_within_k_delta_squared() {
        for delta in 1..=300u64 {
            let sched = reduction_schedule(1_000_000_000_000, delta).unwrap();
            let last = sched.last().unwrap().ground_set_size();
            assert!(last <= LINIAL_K * delta * delta, "Δ={delta}: {last}");
        }
    }

    #[test]
    fn oriented_variant_uses_outdegree() {
        // a path oriented along itself has outdegree 1
        let g = PortGraph::from_edges((1..=6).collect(), &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let o = Orientation::by_identity(&g);
        let colors: Vec<u64> = (0..6).map(|i| i * 1000).collect();
        let run = reduce_oriented(&g, &o, &colors, 6000, 6).unwrap();
        assert!(run.palette <= LINIAL_K);
        for (u, _, v, _) in g.edges() {
            assert_ne!(run.colors[u], run.colors[v]);
        }
    }
}
