//! Zero-round solution of an instance whose local inputs come from a small,
//! commonly known promise set.
//!
//! Every node enumerates the same extended inputs `(input, label)` in the same
//! order and greedily fixes a color for each; a node then only looks up its
//! own entry. Two neighbors with distinct labels never collide because the
//! later one in the order avoided every color the earlier one could cause.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::instance::LocalInput;

use super::SimplifyError;

/// An ordered, duplicate-free promise set of local inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Promise {
    inputs: Vec<LocalInput>,
    index: HashMap<LocalInput, usize>,
}

impl Promise {
    /// Keeps the first occurrence of each input; the order is the shared
    /// enumeration order.
    pub fn new(inputs: impl IntoIterator<Item = LocalInput>) -> Self {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for x in inputs {
            if !index.contains_key(&x) {
                index.insert(x.clone(), list.len());
                list.push(x);
            }
        }
        Promise { inputs: list, index }
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[LocalInput] {
        &self.inputs
    }

    pub fn position(&self, x: &LocalInput) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Largest per-port conflict degree over the promise.
    pub fn conflict_degree(&self) -> u64 {
        let mut best = 0;
        for x in &self.inputs {
            for pairs in &x.ports {
                let mut run = 0;
                for (i, p) in pairs.iter().enumerate() {
                    run = if i > 0 && pairs[i - 1].0 == p.0 { run + 1 } else { 1 };
                    best = best.max(run);
                }
            }
        }
        best
    }
}

/// Colors of all extended inputs, computed once per promise.
#[derive(Clone, Debug)]
pub struct GreedyTable {
    pub l: u64,
    pub s: u64,
    promise: Promise,
    /// Entry `i * s + (label - 1)`.
    colors: Vec<u32>,
}

impl GreedyTable {
    /// Requires `l > d * Δ * s * |I|` and a promise whose inputs have list
    /// length `l`, at most `Δ` ports and conflict degree at most `d`.
    pub fn new(promise: Promise, l: u64, d: u64, delta: u64, s: u64) -> Result<Self, SimplifyError> {
        if s == 0 {
            return Err(SimplifyError::InvalidPromise("label count s must be positive".into()));
        }
        for x in promise.inputs() {
            if x.list_len as u64 != l {
                return Err(SimplifyError::InvalidPromise(format!("input with list length {} != {l}", x.list_len)));
            }
            if x.ports.len() as u64 > delta {
                return Err(SimplifyError::InvalidPromise(format!("input with {} ports > Δ = {delta}", x.ports.len())));
            }
        }
        if promise.conflict_degree() > d {
            return Err(SimplifyError::InvalidPromise(format!("conflict degree {} > d = {d}", promise.conflict_degree())));
        }
        let bound = BigUint::from(d) * delta * s * promise.len();
        if BigUint::from(l) <= bound {
            return Err(SimplifyError::RatioTooSmall { l, bound: bound.to_string() });
        }
        let mut used = vec![false; l as usize + 1];
        let mut colors = Vec::with_capacity(promise.len() * s as usize);
        let mut blocked = vec![false; l as usize + 1];
        for x in promise.inputs() {
            for _label in 1..=s {
                blocked.iter_mut().for_each(|b| *b = false);
                for pairs in &x.ports {
                    for &(a, b) in pairs {
                        if used[b as usize] {
                            blocked[a as usize] = true;
                        }
                    }
                }
                let c = (1..=l as u32).find(|&c| !blocked[c as usize]);
                let c = c.expect("greedy choice set is nonempty when l > dΔ|I'|");
                used[c as usize] = true;
                colors.push(c);
            }
        }
        Ok(GreedyTable { l, s, promise, colors })
    }

    pub fn promise(&self) -> &Promise {
        &self.promise
    }

    /// Color of the extended input `(input, label)`, `label` in `1..=s`.
    pub fn color(&self, input: &LocalInput, label: u64) -> Result<u32, SimplifyError> {
        let i = self.promise.position(input).ok_or(SimplifyError::PromiseViolated)?;
        if label == 0 || label > self.s {
            return Err(SimplifyError::PromiseViolated);
        }
        Ok(self.colors[i * self.s as usize + (label - 1) as usize])
    }
}

/// One-shot form: builds the table for `promise` and looks up `input`.
pub fn greedy_zero_round(
    input: &LocalInput,
    label: u64,
    promise: &Promise,
    l: u64,
    d: u64,
    delta: u64,
    s: u64,
) -> Result<u32, SimplifyError> {
    GreedyTable::new(promise.clone(), l, d, delta, s)?.color(input, label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2_input() -> LocalInput {
        LocalInput { list_len: 3, ports: vec![vec![(1, 1), (2, 2), (3, 3)]] }
    }

    #[test]
    fn k2_two_labels() {
        let promise = Promise::new([k2_input()]);
        assert_eq!(greedy_zero_round(&k2_input(), 1, &promise, 3, 1, 1, 2).unwrap(), 1);
        assert_eq!(greedy_zero_round(&k2_input(), 2, &promise, 3, 1, 1, 2).unwrap(), 2);
    }

    #[test]
    fn no_conflicts_gives_color_one() {
        let x = LocalInput { list_len: 2, ports: vec![vec![], vec![]] };
        let promise = Promise::new([x.clone()]);
        let table = GreedyTable::new(promise, 2, 0, 2, 5).unwrap();
        assert!((1..=5).all(|lab| table.color(&x, lab).unwrap() == 1));
    }

    #[test]
    fn outside_promise_is_rejected() {
        let promise = Promise::new([k2_input()]);
        let other = LocalInput { list_len: 3, ports: vec![vec![(1, 1)]] };
        assert_eq!(greedy_zero_round(&other, 1, &promise, 3, 1, 1, 2), Err(SimplifyError::PromiseViolated));
        assert_eq!(greedy_zero_round(&k2_input(), 3, &promise, 3, 1, 1, 2), Err(SimplifyError::PromiseViolated));
    }

    #[test]
    fn ratio_checked() {
        let promise = Promise::new([k2_input()]);
        assert!(matches!(
            greedy_zero_round(&k2_input(), 1, &promise, 3, 1, 1, 3),
            Err(SimplifyError::RatioTooSmall { l: 3, .. })
        ));
    }
}
