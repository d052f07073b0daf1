//! One simplification stage: from an interval-form instance `P_i` build the
//! subset instance `P_{i+1}` in one round, and lift solutions back in one
//! round.
//!
//! Subsets of `{1..l}` are bitmasks (`l ≤ 128`); bit `c - 1` stands for color
//! `c`. A lifted color is the lexicographic rank of its subset among all
//! `k`-subsets, so equal tokens at different nodes denote the same subset.

use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::color::{Color, ColorAssignment};
use crate::instance::{validate_coloring, ConflictInstance, LocalInput};
use crate::orientation::Orientation;
use crate::runtime::{run_sync, NodeContext, NodeProgram, Step};

use super::params::SimplifyParams;
use super::SimplifyError;

/// Largest base list length the bitmask representation supports.
pub const MAX_MATERIALIZED_L: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StageConfig {
    /// Cap on `C(l, k)`, the lifted colors materialized per node.
    pub max_subsets: u64,
    /// Cap on subset pairs examined per edge while pruning.
    pub max_pairs: u64,
    /// Accept constructible stages with `τ = 0` (flagged degenerate).
    pub allow_tau_zero: bool,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig { max_subsets: 10_000_000, max_pairs: 400_000_000, allow_tau_zero: false }
    }
}

/// All `k`-subsets of `{1..l}` in lexicographic order of their sorted elements.
pub fn k_subsets(l: u32, k: u32) -> Vec<u128> {
    assert!(l as u64 <= MAX_MATERIALIZED_L);
    let mut out = Vec::new();
    if k > l {
        return out;
    }
    let mut idx: Vec<u32> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u128, |m, &i| m | (1u128 << i)));
        // advance to the next combination
        let mut i = k as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < l - k + i as u32 {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        if idx[i] >= l - k + i as u32 {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k as usize {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Colors (1-based) of a subset mask, ascending.
pub fn mask_colors(mask: u128) -> Vec<u32> {
    (0..128).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

fn bit(c: u32) -> u128 {
    1u128 << (c - 1)
}

/// Per-port view of the conflicts of one edge, seen from `v`.
struct EdgeMasks {
    /// `own_hit[c_u]`: own colors in conflict with neighbor color `c_u`.
    own_hit: Vec<u128>,
    /// `their_hit[c_v]`: neighbor colors in conflict with own color `c_v`.
    their_hit: Vec<u128>,
}

impl EdgeMasks {
    fn new(l: u32, pairs: &[(u32, u32)]) -> Self {
        let mut own_hit = vec![0u128; l as usize + 1];
        let mut their_hit = vec![0u128; l as usize + 1];
        for &(a, b) in pairs {
            if b >= 1 && b <= l {
                own_hit[b as usize] |= bit(a);
            }
            their_hit[a as usize] |= if b >= 1 && b <= l { bit(b) } else { 0 };
        }
        EdgeMasks { own_hit, their_hit }
    }

    fn union(table: &[u128], set: u128) -> u128 {
        let mut acc = 0;
        let mut rest = set;
        while rest != 0 {
            let b = rest.trailing_zeros();
            acc |= table[b as usize + 1];
            rest &= rest - 1;
        }
        acc
    }

    /// `(v, own) ~ (u, theirs)`.
    fn related(&self, own: u128, theirs: u128, tau: i64) -> bool {
        let a = (theirs & Self::union(&self.their_hit, own)).count_ones() as i64;
        let b = (own & Self::union(&self.own_hit, theirs)).count_ones() as i64;
        a > tau || b > tau
    }
}

/// Knowledge shared by all nodes for one stage.
#[derive(Clone, Debug)]
pub struct StageKnowledge {
    pub params: SimplifyParams,
    pub subsets: Arc<Vec<u128>>,
    /// `⌊d_next / 2⌋`, or `None` if it does not fit (then nothing is pruned).
    pub prune_above: Option<u64>,
    pub l_next: usize,
}

/// What each node computes in the construction round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeStageOutput {
    /// Ranks of the kept subsets, ascending.
    pub list: Vec<u32>,
    /// Per port: `(own rank, neighbor rank)` conflict pairs.
    pub conflicts: Vec<Vec<(u32, u32)>>,
    /// Subsets removed by pruning on account of each port.
    pub removed_per_port: Vec<u64>,
    /// Largest number of related neighbor subsets (unpruned neighbor list)
    /// over the kept own subsets.
    pub unpruned_degree: u64,
    /// Fewer than `l_next` subsets survived pruning.
    pub underflow: bool,
}

pub struct SimplifyProgram {
    pub know: StageKnowledge,
}

pub struct SimplifyState {
    input: LocalInput,
    masks: Vec<EdgeMasks>,
    kept: Vec<u32>,
    removed: Vec<u64>,
    unpruned: u64,
    underflow: bool,
}

impl SimplifyProgram {
    fn prune(&self, input: &LocalInput) -> SimplifyState {
        let l = input.list_len;
        let tau = self.know.params.tau;
        let subsets = &self.know.subsets;
        let masks: Vec<EdgeMasks> = input.ports.iter().map(|p| EdgeMasks::new(l, p)).collect();
        let mut removed_by = vec![false; subsets.len()];
        let mut removed = vec![0u64; masks.len()];
        let mut worst = vec![0u64; subsets.len()];
        for (p, m) in masks.iter().enumerate() {
            for (i, &own) in subsets.iter().enumerate() {
                let count = subsets.iter().filter(|&&theirs| m.related(own, theirs, tau)).count() as u64;
                worst[i] = worst[i].max(count);
                if self.know.prune_above.is_some_and(|cap| count > cap) {
                    if !removed_by[i] {
                        removed_by[i] = true;
                    }
                    removed[p] += 1;
                }
            }
        }
        let kept: Vec<u32> = (0..subsets.len() as u32)
            .filter(|&i| !removed_by[i as usize])
            .take(self.know.l_next)
            .collect();
        let underflow = kept.len() < self.know.l_next;
        let unpruned = kept.iter().map(|&i| worst[i as usize]).max().unwrap_or(0);
        SimplifyState { input: input.clone(), masks, kept, removed, unpruned, underflow }
    }
}

impl NodeProgram for SimplifyProgram {
    type Input = LocalInput;
    type State = SimplifyState;
    type Msg = Arc<Vec<u32>>;
    type Output = NodeStageOutput;

    fn init(&self, _: &NodeContext, input: &LocalInput) -> SimplifyState {
        self.prune(input)
    }

    fn step(&self, _: &NodeContext, round: usize, st: &mut SimplifyState, inbox: &[Option<Self::Msg>]) -> Step<Self::Msg, NodeStageOutput> {
        if round == 0 {
            return Step::send(Arc::new(st.kept.clone()));
        }
        let tau = self.know.params.tau;
        let subsets = &self.know.subsets;
        let conflicts = st
            .masks
            .iter()
            .zip(inbox)
            .map(|(m, theirs)| {
                let theirs = theirs.as_deref().map(Vec::as_slice).unwrap_or(&[]);
                let mut pairs = Vec::new();
                for &a in &st.kept {
                    for &b in theirs {
                        if m.related(subsets[a as usize], subsets[b as usize], tau) {
                            pairs.push((a, b));
                        }
                    }
                }
                pairs
            })
            .collect();
        debug_assert_eq!(st.input.ports.len(), st.masks.len());
        Step::done(NodeStageOutput {
            list: st.kept.clone(),
            conflicts,
            removed_per_port: st.removed.clone(),
            unpruned_degree: st.unpruned,
            underflow: st.underflow,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageAudit {
    /// Largest per-neighbor removal count in the pruning step.
    pub max_removed_per_neighbor: u64,
    /// `⌈C(l, k) / (2Δ)⌉`.
    pub removal_bound: u64,
    /// Per-edge conflict degree of the lifted instance.
    pub measured_degree: u64,
    /// Same degree counted against unpruned neighbor lists.
    pub unpruned_degree: u64,
    pub list_size: u64,
}

/// `P_i` and `P_{i+1}` together with the data needed to lift solutions.
#[derive(Clone, Debug)]
pub struct StagePair {
    pub base: ConflictInstance,
    /// Lifted instance; colors are subset ranks.
    pub lifted: ConflictInstance,
    pub orientation: Orientation,
    pub params: SimplifyParams,
    pub subsets: Arc<Vec<u128>>,
    pub audit: StageAudit,
    pub rounds: usize,
}

impl StagePair {
    /// Base colors of the subset behind a lifted color token.
    pub fn subset_of(&self, token: &Color) -> Option<Vec<u32>> {
        let r = token.as_int()?;
        self.subsets.get(usize::try_from(r).ok()?).map(|&m| mask_colors(m))
    }
}

fn local_inputs(inst: &ConflictInstance) -> Result<Vec<LocalInput>, SimplifyError> {
    (0..inst.n())
        .map(|v| inst.local_input(v).ok_or(SimplifyError::NotIntervalForm))
        .collect()
}

/// Builds `P_{i+1}` from the interval-form instance `base`.
pub fn simplify_instance(
    base: &ConflictInstance,
    orientation: &Orientation,
    params: &SimplifyParams,
    cfg: &StageConfig,
) -> Result<StagePair, SimplifyError> {
    let l = base.interval_len().ok_or(SimplifyError::NotIntervalForm)? as u64;
    let g = base.graph();
    if l != params.l
        || base.conflict_degree() as u64 > params.d
        || g.max_degree() as u64 > params.delta
        || orientation.max_outdegree() as u64 > params.outdeg
    {
        return Err(SimplifyError::ParamsMismatch(format!(
            "instance (l={l}, d={}, Δ={}, Δ⃗={}) vs params (l={}, d={}, Δ={}, Δ⃗={})",
            base.conflict_degree(),
            g.max_degree(),
            orientation.max_outdegree(),
            params.l,
            params.d,
            params.delta,
            params.outdeg
        )));
    }
    let usable = if cfg.allow_tau_zero { params.constructible() } else { !params.degenerate && params.constructible() };
    if !usable {
        return Err(SimplifyError::DegenerateStage { k: params.k, tau: params.tau });
    }
    let count = params.subset_count();
    let too_big = |what: &str| SimplifyError::MaterializationBudgetExceeded { what: what.to_string(), value: count.to_string() };
    let c = count.to_u64().ok_or_else(|| too_big("C(l,k)"))?;
    if l > MAX_MATERIALIZED_L || c > cfg.max_subsets {
        return Err(too_big("C(l,k)"));
    }
    if (c as u128) * (c as u128) * g.max_degree().max(1) as u128 > cfg.max_pairs as u128 {
        return Err(too_big("C(l,k)² pairs"));
    }
    let l_next = params.l_next_u64().expect("l_next <= C(l,k)") as usize;
    let subsets = Arc::new(k_subsets(l as u32, params.k as u32));
    let prune_above = params.d_next_u64().map(|d| d / 2);
    let know = StageKnowledge { params: params.clone(), subsets: subsets.clone(), prune_above, l_next };
    let program = SimplifyProgram { know };
    let inputs = local_inputs(base)?;
    let trace = run_sync(g, &program, &inputs, g.n() as u64, 1).map_err(|e| SimplifyError::Runtime(e.to_string()))?;

    let removal_bound = c.div_ceil(2 * params.delta);
    let mut max_removed = 0;
    let mut unpruned = 0;
    for (v, out) in trace.outputs.iter().enumerate() {
        if out.underflow {
            return Err(SimplifyError::ListUnderflow { node: g.identity(v) });
        }
        let worst = out.removed_per_port.iter().copied().max().unwrap_or(0);
        if worst > removal_bound {
            return Err(SimplifyError::PruningBoundViolated { node: g.identity(v), removed: worst, bound: removal_bound });
        }
        max_removed = max_removed.max(worst);
        unpruned = unpruned.max(out.unpruned_degree);
    }
    let lists = trace
        .outputs
        .iter()
        .map(|o| o.list.iter().map(|&r| Color::Int(r as i64)).collect())
        .collect();
    let conflicts = trace
        .outputs
        .iter()
        .map(|o| {
            o.conflicts
                .iter()
                .map(|pairs| pairs.iter().map(|&(a, b)| (Color::Int(a as i64), Color::Int(b as i64))).collect())
                .collect()
        })
        .collect();
    let lifted = ConflictInstance::new(g.clone(), lists, conflicts)?;
    let measured = lifted.conflict_degree() as u64;
    if params.d_next_u64().is_some_and(|d| measured > d) {
        return Err(SimplifyError::DegreeBoundViolated { measured, bound: params.d_next.to_string() });
    }
    let audit = StageAudit {
        max_removed_per_neighbor: max_removed,
        removal_bound,
        measured_degree: measured,
        unpruned_degree: unpruned,
        list_size: l_next as u64,
    };
    Ok(StagePair {
        base: base.clone(),
        lifted,
        orientation: orientation.clone(),
        params: params.clone(),
        subsets,
        audit,
        rounds: trace.rounds_used,
    })
}

/// Input of the lifting round at one node.
#[derive(Clone, Debug)]
pub struct LiftInput {
    pub subset: u128,
    pub base: LocalInput,
    pub out_ports: Vec<bool>,
}

pub struct LiftProgram;

impl NodeProgram for LiftProgram {
    type Input = LiftInput;
    type State = LiftInput;
    type Msg = u128;
    type Output = Option<u32>;

    fn init(&self, _: &NodeContext, input: &LiftInput) -> LiftInput {
        input.clone()
    }

    fn step(&self, _: &NodeContext, round: usize, st: &mut LiftInput, inbox: &[Option<u128>]) -> Step<u128, Option<u32>> {
        if round == 0 {
            return Step::send(st.subset);
        }
        let l = st.base.list_len;
        let mut blocked = 0u128;
        for (p, theirs) in inbox.iter().enumerate() {
            if !st.out_ports[p] {
                continue;
            }
            let m = EdgeMasks::new(l, &st.base.ports[p]);
            blocked |= EdgeMasks::union(&m.own_hit, theirs.unwrap_or(0));
        }
        let free = st.subset & !blocked;
        Step::done((free != 0).then(|| free.trailing_zeros() + 1))
    }
}

/// Maps a valid solution of `stage.lifted` to a valid solution of
/// `stage.base`, choosing the smallest admissible base color.
pub fn lift_solution(stage: &StagePair, solution_next: &ColorAssignment) -> Result<(ColorAssignment, usize), SimplifyError> {
    let report = validate_coloring(&stage.lifted, solution_next);
    if !report.valid {
        return Err(SimplifyError::InvalidSolution(report.violations.len()));
    }
    let g = stage.base.graph();
    let inputs = (0..g.n())
        .map(|v| {
            let token = solution_next.get(v).expect("validated");
            let r = token.as_int().expect("rank token") as usize;
            Ok(LiftInput {
                subset: stage.subsets[r],
                base: stage.base.local_input(v).ok_or(SimplifyError::NotIntervalForm)?,
                out_ports: stage.orientation.flags(v).to_vec(),
            })
        })
        .collect::<Result<Vec<_>, SimplifyError>>()?;
    let trace = run_sync(g, &LiftProgram, &inputs, g.n() as u64, 1).map_err(|e| SimplifyError::Runtime(e.to_string()))?;
    let mut colors = Vec::with_capacity(g.n());
    for (v, c) in trace.outputs.iter().enumerate() {
        match c {
            Some(c) => colors.push(Color::Int(*c as i64)),
            None => return Err(SimplifyError::EmptyChoiceSet { node: g.identity(v) }),
        }
    }
    Ok((ColorAssignment::from_colors(colors), trace.rounds_used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;
    use crate::lab::encode_list_coloring;
    use crate::simplify::params::simplify_params;

    fn interval_edge(l: i64) -> ConflictInstance {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        encode_list_coloring(&g, vec![(1..=l).map(Color::Int).collect(); 2])
    }

    #[test]
    fn subsets_in_lex_order() {
        let s = k_subsets(4, 2);
        let as_lists: Vec<Vec<u32>> = s.iter().map(|&m| mask_colors(m)).collect();
        assert_eq!(as_lists, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(k_subsets(16, 2).len(), 120);
        assert_eq!(k_subsets(5, 0), vec![0]);
        assert_eq!(k_subsets(3, 3).len(), 1);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn single_edge_micro_stage() {
        let base = interval_edge(16);
        let o = Orientation::by_identity(base.graph());
        let params = simplify_params(16, 1, 1, 1);
        let stage = simplify_instance(&base, &o, &params, &StageConfig::default()).unwrap();
        assert_eq!(stage.rounds, 1);
        assert_eq!(stage.lifted.min_list_size(), 60);
        assert_eq!(stage.lifted.max_list_size(), 60);
        assert!(stage.audit.measured_degree <= 256);
        assert!(stage.audit.max_removed_per_neighbor <= stage.audit.removal_bound);
        assert_eq!(stage.audit.removal_bound, 60);
    }

    #[test]
    fn k1_stage_lifts_singletons() {
        let base = interval_edge(8);
        let o = Orientation::by_identity(base.graph());
        let params = simplify_params(8, 1, 1, 1);
        let cfg = StageConfig { allow_tau_zero: true, ..StageConfig::default() };
        let stage = simplify_instance(&base, &o, &params, &cfg).unwrap();
        assert_eq!(stage.lifted.min_list_size(), 4);
        let sol = ColorAssignment::from_ints(&[0, 1]);
        let (lifted, rounds) = lift_solution(&stage, &sol).unwrap();
        assert_eq!(rounds, 1);
        assert_eq!(lifted, ColorAssignment::from_ints(&[1, 2]));
        assert!(validate_coloring(&base, &lifted).valid);
    }

    #[test]
    fn degenerate_stage_refused() {
        let base = interval_edge(8);
        let o = Orientation::by_identity(base.graph());
        let params = simplify_params(8, 1, 1, 1);
        assert!(matches!(
            simplify_instance(&base, &o, &params, &StageConfig::default()),
            Err(SimplifyError::DegenerateStage { k: 1, tau: 0 })
        ));
    }

    #[test]
    fn isolated_node_lifts_to_smallest_element() {
        let g = PortGraph::from_edges(vec![3], &[]).unwrap();
        let base = encode_list_coloring(&g, vec![(1..=16).map(Color::Int).collect()]);
        let o = Orientation::by_identity(&g);
        let stage = simplify_instance(&base, &o, &simplify_params(16, 1, 1, 1), &StageConfig::default()).unwrap();
        let token = stage.lifted.list(0)[7].clone();
        let expected = stage.subset_of(&token).unwrap()[0];
        let (lifted, _) = lift_solution(&stage, &ColorAssignment::from_colors(vec![token])).unwrap();
        assert_eq!(lifted.get(0), Some(&Color::Int(expected as i64)));
    }
}
