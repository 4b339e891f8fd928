//! Component automata and their lazy parallel composition.
//!
//! A plant is given as an ordered list of component automata that synchronize
//! on shared event labels and interleave on private ones. The composed state
//! space is never materialized up front: [`CompositeModel::compose_successors`]
//! enumerates the enabled product transitions of a single state on demand.
//! [`CompositeModel::explicit_product`] materializes the reachable product and
//! exists as a brute-force cross-check for the on-the-fly machinery.

use std::collections::HashMap;

use thiserror::Error;

/// Local state id inside one component.
pub type StateId = u32;
/// Index into the global (model-wide) alphabet.
pub type LabelId = u32;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{0}")]
    Syntax(String),
    #[error("inconsistent controllability for label `{0}`")]
    InconsistentControllability(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("dangling state reference `{state}` in component `{component}`")]
    DanglingState { component: String, state: String },
    #[error("composition references unknown component `{0}`")]
    UnknownComponent(String),
    #[error("composition must list at least one component")]
    EmptyComposition,
    #[error("reachable product exceeds the state budget of {0}")]
    ProductTooLarge(usize),
}

/// One component automaton, with labels resolved against the global alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    pub name: String,
    pub state_names: Vec<String>,
    pub initial: StateId,
    pub marked: Vec<bool>,
    /// Sorted global label ids this component participates in.
    pub alphabet: Vec<LabelId>,
    /// Per-state outgoing transitions, sorted by (label, target).
    pub transitions: Vec<Vec<(LabelId, StateId)>>,
}

impl Automaton {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn contains_label(&self, label: LabelId) -> bool {
        self.alphabet.binary_search(&label).is_ok()
    }

    /// Targets of `label`-transitions from `state` (contiguous slice thanks to sorting).
    pub fn targets(&self, state: StateId, label: LabelId) -> &[(LabelId, StateId)] {
        let row = &self.transitions[state as usize];
        let lo = row.partition_point(|&(l, _)| l < label);
        let hi = row.partition_point(|&(l, _)| l <= label);
        &row[lo..hi]
    }
}

/// Untyped component description as produced by the parser or the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawComponent {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    pub marked: Vec<String>,
    /// (source, label, target) triples.
    pub transitions: Vec<(String, String, String)>,
    /// Labels this component declares controllable, if it declares any.
    pub controllable: Option<Vec<String>>,
}

/// Untyped model description: components, global controllable set, composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawModel {
    pub components: Vec<RawComponent>,
    pub controllable: Vec<String>,
    pub composition: Vec<String>,
}

/// The plant: components plus the global alphabet with its controllability
/// partition. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeModel {
    /// Global alphabet, sorted lexicographically so label-id order is label order.
    pub labels: Vec<String>,
    pub controllable: Vec<bool>,
    pub components: Vec<Automaton>,
    /// Per label, the indices of the components whose alphabet contains it.
    label_members: Vec<Vec<usize>>,
}

/// One transition of the (implicit) synchronous product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlantSuccessor {
    pub label: LabelId,
    pub controllable: bool,
    pub target: Vec<StateId>,
}

impl CompositeModel {
    pub fn from_raw(raw: &RawModel) -> Result<CompositeModel, ModelError> {
        if raw.composition.is_empty() {
            return Err(ModelError::EmptyComposition);
        }
        let defs: HashMap<&str, &RawComponent> =
            raw.components.iter().map(|c| (c.name.as_str(), c)).collect();
        let mut ordered: Vec<&RawComponent> = Vec::new();
        for name in &raw.composition {
            let comp = defs
                .get(name.as_str())
                .ok_or_else(|| ModelError::UnknownComponent(name.clone()))?;
            ordered.push(comp);
        }

        // Global alphabet: union of component alphabets, sorted.
        let mut label_set: Vec<String> = Vec::new();
        for comp in &ordered {
            for (_, l, _) in &comp.transitions {
                label_set.push(l.clone());
            }
        }
        label_set.sort();
        label_set.dedup();
        let label_idx: HashMap<&str, LabelId> = label_set
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as LabelId))
            .collect();

        let mut controllable = vec![false; label_set.len()];
        for l in &raw.controllable {
            let id = *label_idx
                .get(l.as_str())
                .ok_or_else(|| ModelError::UnknownLabel(l.clone()))?;
            controllable[id as usize] = true;
        }
        // A component-level declaration must agree with the global partition on
        // the labels the component uses.
        for comp in &ordered {
            if let Some(decl) = &comp.controllable {
                let declared: Vec<LabelId> = decl
                    .iter()
                    .map(|l| {
                        label_idx
                            .get(l.as_str())
                            .copied()
                            .ok_or_else(|| ModelError::UnknownLabel(l.clone()))
                    })
                    .collect::<Result<_, _>>()?;
                let mut used: Vec<LabelId> = comp
                    .transitions
                    .iter()
                    .map(|(_, l, _)| label_idx[l.as_str()])
                    .collect();
                used.sort();
                used.dedup();
                for &l in &declared {
                    if !controllable[l as usize] {
                        return Err(ModelError::InconsistentControllability(
                            label_set[l as usize].clone(),
                        ));
                    }
                }
                for &l in &used {
                    let in_decl = declared.contains(&l);
                    if controllable[l as usize] != in_decl {
                        return Err(ModelError::InconsistentControllability(
                            label_set[l as usize].clone(),
                        ));
                    }
                }
            }
        }

        let mut components = Vec::with_capacity(ordered.len());
        for comp in &ordered {
            let state_idx: HashMap<&str, StateId> = comp
                .states
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_str(), i as StateId))
                .collect();
            let resolve = |s: &str| -> Result<StateId, ModelError> {
                state_idx.get(s).copied().ok_or_else(|| ModelError::DanglingState {
                    component: comp.name.clone(),
                    state: s.to_string(),
                })
            };
            let initial = resolve(&comp.initial)?;
            let mut marked = vec![false; comp.states.len()];
            for m in &comp.marked {
                marked[resolve(m)? as usize] = true;
            }
            let mut transitions: Vec<Vec<(LabelId, StateId)>> = vec![Vec::new(); comp.states.len()];
            let mut alphabet: Vec<LabelId> = Vec::new();
            for (src, l, dst) in &comp.transitions {
                let label = label_idx[l.as_str()];
                let s = resolve(src)?;
                let t = resolve(dst)?;
                transitions[s as usize].push((label, t));
                alphabet.push(label);
            }
            alphabet.sort();
            alphabet.dedup();
            for row in &mut transitions {
                row.sort();
                row.dedup();
            }
            components.push(Automaton {
                name: comp.name.clone(),
                state_names: comp.states.clone(),
                initial,
                marked,
                alphabet,
                transitions,
            });
        }

        let mut label_members = vec![Vec::new(); label_set.len()];
        for (ci, comp) in components.iter().enumerate() {
            for &l in &comp.alphabet {
                label_members[l as usize].push(ci);
            }
        }

        Ok(CompositeModel {
            labels: label_set,
            controllable,
            components,
            label_members,
        })
    }

    pub fn label(&self, id: LabelId) -> &str {
        &self.labels[id as usize]
    }

    pub fn is_controllable(&self, id: LabelId) -> bool {
        self.controllable[id as usize]
    }

    pub fn initial_state(&self) -> Vec<StateId> {
        self.components.iter().map(|c| c.initial).collect()
    }

    fn check_arity(&self, s: &[StateId]) {
        assert_eq!(
            s.len(),
            self.components.len(),
            "plant state arity {} does not match component count {}",
            s.len(),
            self.components.len()
        );
    }

    /// Enabled transitions of the synchronous product at `s`, sorted by
    /// (label, target). A label is enabled iff every component whose alphabet
    /// contains it has a transition from its current local state.
    pub fn compose_successors(&self, s: &[StateId]) -> Vec<PlantSuccessor> {
        self.check_arity(s);
        let mut out = Vec::new();
        for (lid, members) in self.label_members.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let label = lid as LabelId;
            let mut options: Vec<(usize, &[(LabelId, StateId)])> = Vec::with_capacity(members.len());
            let mut enabled = true;
            for &ci in members {
                let targets = self.components[ci].targets(s[ci], label);
                if targets.is_empty() {
                    enabled = false;
                    break;
                }
                options.push((ci, targets));
            }
            if !enabled {
                continue;
            }
            // Cartesian product over nondeterministic local targets; the
            // counter order yields targets in ascending lexicographic order.
            let mut idx = vec![0usize; options.len()];
            'product: loop {
                let mut target = s.to_vec();
                for (k, &(ci, targets)) in options.iter().enumerate() {
                    target[ci] = targets[idx[k]].1;
                }
                out.push(PlantSuccessor {
                    label,
                    controllable: self.controllable[lid],
                    target,
                });
                // Advance the mixed-radix counter, least significant last.
                let mut k = options.len();
                loop {
                    if k == 0 {
                        break 'product;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < options[k].1.len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
        debug_assert!(out.windows(2).all(|w| (w[0].label, &w[0].target) <= (w[1].label, &w[1].target)));
        out.dedup();
        out
    }

    /// True iff every component's local state is marked.
    pub fn is_marked(&self, s: &[StateId]) -> bool {
        self.check_arity(s);
        self.components
            .iter()
            .zip(s)
            .all(|(c, &local)| c.marked[local as usize])
    }

    /// Fully materialized reachable product. Brute-force oracle for the
    /// on-the-fly composition and for the monolithic synthesis check.
    pub fn explicit_product(&self, max_states: usize) -> Result<ProductAutomaton, ModelError> {
        let initial = self.initial_state();
        let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
        let mut states: Vec<Vec<StateId>> = Vec::new();
        index.insert(initial.clone(), 0);
        states.push(initial);
        let mut transitions: Vec<Vec<(LabelId, usize)>> = Vec::new();
        let mut frontier = 0usize;
        while frontier < states.len() {
            let s = states[frontier].clone();
            let succs = self.compose_successors(&s);
            let mut row = Vec::with_capacity(succs.len());
            for succ in succs {
                let next = match index.get(&succ.target) {
                    Some(&i) => i,
                    None => {
                        let i = states.len();
                        if i >= max_states {
                            return Err(ModelError::ProductTooLarge(max_states));
                        }
                        index.insert(succ.target.clone(), i);
                        states.push(succ.target);
                        i
                    }
                };
                row.push((succ.label, next));
            }
            transitions.push(row);
            frontier += 1;
        }
        let marked = states.iter().map(|s| self.is_marked(s)).collect();
        Ok(ProductAutomaton {
            states,
            marked,
            transitions,
            initial: 0,
        })
    }
}

/// Reachable explicit product, with states indexed in BFS discovery order.
#[derive(Debug, Clone)]
pub struct ProductAutomaton {
    pub states: Vec<Vec<StateId>>,
    pub marked: Vec<bool>,
    /// Per state, in the same order `compose_successors` returns them.
    pub transitions: Vec<Vec<(LabelId, usize)>>,
    pub initial: usize,
}

impl ProductAutomaton {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }
}
