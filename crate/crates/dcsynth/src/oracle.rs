//! Monolithic synthesis over the explicit product.
//!
//! Alternating fixpoint on the fully materialized state space: repeatedly
//! drop states with an uncontrollable route out of the surviving set, and
//! states from which no marked state remains reachable among survivors.
//! Serves as the brute-force cross-check for the on-the-fly engine and is
//! implemented independently of it.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::lts::{CompositeModel, ModelError, ProductAutomaton};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub realizable: bool,
    pub num_states: usize,
    pub num_transitions: usize,
}

pub fn monolithic_oracle(
    model: &CompositeModel,
    max_states: usize,
) -> Result<OracleVerdict, ModelError> {
    let product = model.explicit_product(max_states)?;
    let survivors = winning_states(model, &product);
    Ok(OracleVerdict {
        realizable: survivors[product.initial],
        num_states: product.num_states(),
        num_transitions: product.num_transitions(),
    })
}

/// Supremal set of product states from which control can keep the plant
/// nonblocking: every uncontrollable successor survives and a marked survivor
/// stays reachable through surviving states.
pub fn winning_states(model: &CompositeModel, product: &ProductAutomaton) -> Vec<bool> {
    let n = product.num_states();
    let mut alive = vec![true; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, row) in product.transitions.iter().enumerate() {
        for &(_, t) in row {
            preds[t].push(s);
        }
    }
    loop {
        let mut changed = false;
        // Marked-coreachability restricted to survivors.
        let mut coreach = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&i| alive[i] && product.marked[i])
            .collect();
        for &i in &queue {
            coreach[i] = true;
        }
        while let Some(t) = queue.pop_front() {
            for &s in &preds[t] {
                if alive[s] && !coreach[s] {
                    coreach[s] = true;
                    queue.push_back(s);
                }
            }
        }
        for i in 0..n {
            if alive[i] && !coreach[i] {
                alive[i] = false;
                changed = true;
            }
        }
        // Controllability: an uncontrollable edge out of the set is fatal.
        loop {
            let mut pruned = false;
            for s in 0..n {
                if !alive[s] {
                    continue;
                }
                let escapes = product.transitions[s]
                    .iter()
                    .any(|&(l, t)| !model.is_controllable(l) && !alive[t]);
                if escapes {
                    alive[s] = false;
                    pruned = true;
                }
            }
            if !pruned {
                break;
            }
            changed = true;
        }
        if !changed {
            return alive;
        }
    }
}
