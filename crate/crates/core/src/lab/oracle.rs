//! Exhaustive backtracking oracle with forward checking.

use crate::color::{Color, ColorAssignment};
use crate::instance::ConflictInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForce {
    Solved(ColorAssignment),
    Unsat,
    BudgetExceeded,
}

struct Search<'a> {
    inst: &'a ConflictInstance,
    /// `alive[v][i]`: 0 if color `i` of `v` is still possible, otherwise the
    /// depth that removed it (plus one).
    alive: Vec<Vec<usize>>,
    chosen: Vec<Option<usize>>,
    steps: u64,
    budget: u64,
}

enum Flow {
    Stop,
    Continue,
    OutOfBudget,
}

impl<'a> Search<'a> {
    fn new(inst: &'a ConflictInstance, budget: u64) -> Self {
        Search {
            inst,
            alive: (0..inst.n()).map(|v| vec![0; inst.list(v).len()]).collect(),
            chosen: vec![None; inst.n()],
            steps: 0,
            budget,
        }
    }

    /// Removes colors of neighbors that conflict with `v := c`. Returns false
    /// on a domain wipeout.
    fn propagate(&mut self, v: usize, ci: usize, depth: usize) -> bool {
        let g = self.inst.graph();
        let c = &self.inst.list(v)[ci];
        let mut ok = true;
        for (p, &(u, _)) in g.ports(v).iter().enumerate() {
            if self.chosen[u].is_some() {
                continue;
            }
            for (own, theirs) in self.inst.conflicts(v, p) {
                if own != c {
                    continue;
                }
                if let Ok(j) = self.inst.list(u).binary_search(theirs) {
                    if self.alive[u][j] == 0 {
                        self.alive[u][j] = depth + 1;
                    }
                }
            }
            if self.alive[u].iter().all(|&a| a != 0) {
                ok = false;
            }
        }
        ok
    }

    fn undo(&mut self, depth: usize) {
        for row in self.alive.iter_mut() {
            for a in row.iter_mut() {
                if *a == depth + 1 {
                    *a = 0;
                }
            }
        }
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[Option<usize>]) -> bool) -> Flow {
        if depth == self.inst.n() {
            return if visit(&self.chosen) { Flow::Stop } else { Flow::Continue };
        }
        let v = depth;
        for ci in 0..self.inst.list(v).len() {
            if self.alive[v][ci] != 0 {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Flow::OutOfBudget;
            }
            self.chosen[v] = Some(ci);
            if self.propagate(v, ci, depth) {
                match self.run(depth + 1, visit) {
                    Flow::Continue => {}
                    other => {
                        self.undo(depth);
                        self.chosen[v] = None;
                        return other;
                    }
                }
            }
            self.undo(depth);
            self.chosen[v] = None;
        }
        Flow::Continue
    }

    fn assignment(&self, chosen: &[Option<usize>]) -> ColorAssignment {
        let colors: Vec<Color> = chosen
            .iter()
            .enumerate()
            .map(|(v, ci)| self.inst.list(v)[ci.expect("complete")].clone())
            .collect();
        ColorAssignment::from_colors(colors)
    }
}

/// First solution in lexicographic (node index, list order) order. `budget`
/// bounds the number of tentative assignments.
pub fn brute_force_solve(instance: &ConflictInstance, budget: u64) -> BruteForce {
    let mut search = Search::new(instance, budget);
    let mut found = None;
    let flow = search.run(0, &mut |chosen| {
        found = Some(chosen.to_vec());
        true
    });
    match (flow, found) {
        (_, Some(chosen)) => BruteForce::Solved(search.assignment(&chosen)),
        (Flow::OutOfBudget, None) => BruteForce::BudgetExceeded,
        _ => BruteForce::Unsat,
    }
}

/// Every solution, or `None` if the budget runs out first.
pub fn enumerate_solutions(instance: &ConflictInstance, budget: u64) -> Option<Vec<ColorAssignment>> {
    let mut search = Search::new(instance, budget);
    let mut all = Vec::new();
    let flow = search.run(0, &mut |chosen| {
        all.push(chosen.to_vec());
        false
    });
    if matches!(flow, Flow::OutOfBudget) {
        return None;
    }
    Some(all.iter().map(|c| search.assignment(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;
    use crate::instance::validate_coloring;
    use crate::lab::encode::{encode_list_coloring, encode_plus_one_coloring};

    fn cycle(n: u64) -> PortGraph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        PortGraph::from_edges((1..=n).collect(), &edges).unwrap()
    }

    #[test]
    fn triangle_is_colorable() {
        let inst = encode_plus_one_coloring(&cycle(3));
        match brute_force_solve(&inst, 1000) {
            BruteForce::Solved(a) => {
                assert!(validate_coloring(&inst, &a).valid);
                assert_eq!(a, ColorAssignment::from_ints(&[1, 2, 3]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn odd_cycle_two_lists_unsat() {
        let lists = vec![vec![Color::Int(1), Color::Int(2)]; 5];
        let inst = encode_list_coloring(&cycle(5), lists);
        assert_eq!(brute_force_solve(&inst, 10_000), BruteForce::Unsat);
        assert_eq!(enumerate_solutions(&inst, 10_000), Some(vec![]));
    }

    #[test]
    fn budget_is_reported() {
        let lists = vec![vec![Color::Int(1), Color::Int(2)]; 5];
        let inst = encode_list_coloring(&cycle(5), lists);
        assert_eq!(brute_force_solve(&inst, 2), BruteForce::BudgetExceeded);
    }

    #[test]
    fn enumerates_all_three_colorings_of_k3() {
        let inst = encode_plus_one_coloring(&cycle(3));
        let all = enumerate_solutions(&inst, 10_000).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|a| validate_coloring(&inst, a).valid));
    }
}
