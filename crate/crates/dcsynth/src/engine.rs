//! On-the-fly synthesis loop.
//!
//! The [`Explorer`] maintains the expanded-transition history, the frontier of
//! unexpanded transitions with discovered sources, and a sound winning/losing
//! classification of the explored region. Expansion order is delegated to an
//! [`ExplorationPolicy`]; the loop stops once the initial state is decided,
//! the frontier runs dry, or the expansion budget is exhausted.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lts::{CompositeModel, LabelId, StateId};

pub type PlantIdx = u32;
pub type TransId = u32;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("director failed closed-loop validation: {0}")]
    DirectorValidation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    Undecided,
    Winning,
    Losing,
}

/// One enumerated transition of the product, indexed into the arena.
#[derive(Debug, Clone)]
pub struct Trans {
    pub source: PlantIdx,
    pub label: LabelId,
    pub target: PlantIdx,
    pub controllable: bool,
    pub expanded: bool,
}

#[derive(Debug)]
struct StateInfo {
    local: Vec<StateId>,
    marked: bool,
    discovered: bool,
    discovery_rank: u32,
    parent: Option<(PlantIdx, LabelId)>,
    succ: Vec<TransId>,
    in_edges: Vec<TransId>,
    expanded_out: u32,
    has_uncontrollable_out: bool,
    class: Class,
}

/// Global synthesis phase flags: first marked state found, first winning
/// classification, first losing classification.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Phase {
    pub marked_found: bool,
    pub winning_found: bool,
    pub losing_found: bool,
}

/// Emitted by [`Explorer::expand`]; enough to maintain a graph encoding
/// incrementally alongside the engine.
#[derive(Debug, Clone)]
pub struct ExpandEvent {
    pub expanded: TransId,
    pub newly_discovered: Option<PlantIdx>,
    /// Transitions enumerated by the discovery triggered by this expansion.
    pub new_transitions: std::ops::Range<TransId>,
}

pub struct Explorer<'m> {
    model: &'m CompositeModel,
    index: HashMap<Vec<StateId>, PlantIdx>,
    states: Vec<StateInfo>,
    discovery_order: Vec<PlantIdx>,
    trans: Vec<Trans>,
    history: Vec<TransId>,
    frontier: BTreeSet<(u32, TransId)>,
    phase: Phase,
    last_expanded: Option<TransId>,
    last_discovered: Option<PlantIdx>,
}

impl<'m> Explorer<'m> {
    /// Starts a run: interns and discovers the initial state and classifies.
    pub fn new(model: &'m CompositeModel) -> Explorer<'m> {
        let mut ex = Explorer {
            model,
            index: HashMap::new(),
            states: Vec::new(),
            discovery_order: Vec::new(),
            trans: Vec::new(),
            history: Vec::new(),
            frontier: BTreeSet::new(),
            phase: Phase::default(),
            last_expanded: None,
            last_discovered: None,
        };
        let s0 = ex.intern(model.initial_state());
        ex.discover(s0, None);
        ex.last_discovered = Some(s0);
        ex.classify_pass();
        ex
    }

    pub fn model(&self) -> &CompositeModel {
        self.model
    }

    pub fn initial(&self) -> PlantIdx {
        0
    }

    fn intern(&mut self, local: Vec<StateId>) -> PlantIdx {
        if let Some(&idx) = self.index.get(&local) {
            return idx;
        }
        let idx = self.states.len() as PlantIdx;
        let marked = self.model.is_marked(&local);
        self.index.insert(local.clone(), idx);
        self.states.push(StateInfo {
            local,
            marked,
            discovered: false,
            discovery_rank: u32::MAX,
            parent: None,
            succ: Vec::new(),
            in_edges: Vec::new(),
            expanded_out: 0,
            has_uncontrollable_out: false,
            class: Class::Undecided,
        });
        idx
    }

    /// Marks `idx` discovered and enumerates its successors into the frontier.
    fn discover(&mut self, idx: PlantIdx, parent: Option<(PlantIdx, LabelId)>) {
        debug_assert!(!self.states[idx as usize].discovered);
        let rank = self.discovery_order.len() as u32;
        self.discovery_order.push(idx);
        let local = self.states[idx as usize].local.clone();
        let succs = self.model.compose_successors(&local);
        let mut ids = Vec::with_capacity(succs.len());
        let mut has_uncontrollable = false;
        for s in succs {
            let target = self.intern(s.target);
            let tid = self.trans.len() as TransId;
            self.trans.push(Trans {
                source: idx,
                label: s.label,
                target,
                controllable: s.controllable,
                expanded: false,
            });
            has_uncontrollable |= !s.controllable;
            self.states[target as usize].in_edges.push(tid);
            self.frontier.insert((rank, tid));
            ids.push(tid);
        }
        let info = &mut self.states[idx as usize];
        info.discovered = true;
        info.discovery_rank = rank;
        info.parent = parent;
        info.succ = ids;
        info.has_uncontrollable_out = has_uncontrollable;
        if info.marked {
            self.phase.marked_found = true;
        }
    }

    /// Expands one frontier transition and re-runs classification.
    pub fn expand(&mut self, tid: TransId) -> Result<ExpandEvent, EngineError> {
        let (source, target, label) = {
            let t = self
                .trans
                .get(tid as usize)
                .ok_or_else(|| EngineError::Contract(format!("unknown transition id {tid}")))?;
            (t.source, t.target, t.label)
        };
        let rank = self.states[source as usize].discovery_rank;
        if !self.frontier.remove(&(rank, tid)) {
            return Err(EngineError::Contract(format!(
                "transition {tid} is not in the frontier"
            )));
        }
        self.trans[tid as usize].expanded = true;
        self.states[source as usize].expanded_out += 1;
        self.history.push(tid);
        self.last_expanded = Some(tid);
        let before = self.trans.len() as TransId;
        if !self.states[target as usize].discovered {
            self.discover(target, Some((source, label)));
            self.last_discovered = Some(target);
        } else {
            self.last_discovered = None;
        }
        let after = self.trans.len() as TransId;
        self.classify_pass();
        Ok(ExpandEvent {
            expanded: tid,
            newly_discovered: self.last_discovered,
            new_transitions: before..after,
        })
    }

    // ── Accessors ─────────────────────────────────────────────────────

    pub fn trans(&self, tid: TransId) -> &Trans {
        &self.trans[tid as usize]
    }

    pub fn num_trans(&self) -> usize {
        self.trans.len()
    }

    pub fn history(&self) -> &[TransId] {
        &self.history
    }

    pub fn expansions(&self) -> u64 {
        self.history.len() as u64
    }

    /// Frontier in canonical order: source discovery rank, then the per-source
    /// successor order (label, then target).
    pub fn frontier_canonical(&self) -> Vec<TransId> {
        self.frontier.iter().map(|&(_, tid)| tid).collect()
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    pub fn local_state(&self, idx: PlantIdx) -> &[StateId] {
        &self.states[idx as usize].local
    }

    pub fn is_discovered(&self, idx: PlantIdx) -> bool {
        self.states[idx as usize].discovered
    }

    pub fn discovery_rank(&self, idx: PlantIdx) -> Option<u32> {
        self.states[idx as usize].discovered.then(|| self.states[idx as usize].discovery_rank)
    }

    pub fn discovery_order(&self) -> &[PlantIdx] {
        &self.discovery_order
    }

    pub fn class(&self, idx: PlantIdx) -> Class {
        self.states[idx as usize].class
    }

    pub fn is_marked_state(&self, idx: PlantIdx) -> bool {
        self.states[idx as usize].marked
    }

    pub fn parent(&self, idx: PlantIdx) -> Option<(PlantIdx, LabelId)> {
        self.states[idx as usize].parent
    }

    pub fn enumerated_out(&self, idx: PlantIdx) -> usize {
        self.states[idx as usize].succ.len()
    }

    pub fn successors(&self, idx: PlantIdx) -> &[TransId] {
        &self.states[idx as usize].succ
    }

    pub fn expanded_out(&self, idx: PlantIdx) -> u32 {
        self.states[idx as usize].expanded_out
    }

    pub fn has_uncontrollable_out(&self, idx: PlantIdx) -> bool {
        self.states[idx as usize].has_uncontrollable_out
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn last_expanded(&self) -> Option<TransId> {
        self.last_expanded
    }

    pub fn last_discovered(&self) -> Option<PlantIdx> {
        self.last_discovered
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Recomputes the frontier from first principles and compares. Test hook
    /// for the frontier law F = (enumerated of discovered) \ h.
    pub fn check_frontier_law(&self) -> bool {
        let mut expect = BTreeSet::new();
        for info in self.states.iter().filter(|s| s.discovered) {
            for &tid in &info.succ {
                if !self.trans[tid as usize].expanded {
                    expect.insert((info.discovery_rank, tid));
                }
            }
        }
        expect == self.frontier
    }

    // ── Classification ────────────────────────────────────────────────

    /// Full fixpoint over the explored region: losing rules first (deadlocks,
    /// dead regions, uncontrollable contagion), then the greatest winning set.
    pub fn classify_pass(&mut self) {
        self.losing_fixpoint();
        let (in_g, _) = self.winning_fixpoint();
        for (i, &w) in in_g.iter().enumerate() {
            if w {
                debug_assert_ne!(self.states[i].class, Class::Losing);
                self.states[i].class = Class::Winning;
                self.phase.winning_found = true;
            } else {
                // Finality: a winning state never leaves the winning set.
                debug_assert_ne!(
                    self.states[i].class,
                    Class::Winning,
                    "winning classification must be final"
                );
            }
        }
    }

    fn losing_fixpoint(&mut self) {
        loop {
            // Escape analysis: a discovered, non-losing state escapes if it is
            // marked, can reach an undiscovered target, or can reach another
            // escaping state through enumerated transitions between
            // non-losing states.
            let mut can_escape = vec![false; self.states.len()];
            let mut queue = VecDeque::new();
            for (i, info) in self.states.iter().enumerate() {
                if !info.discovered || info.class == Class::Losing {
                    continue;
                }
                let leaks = info.marked
                    || info.succ.iter().any(|&tid| {
                        let t = &self.trans[tid as usize];
                        !self.states[t.target as usize].discovered
                    });
                if leaks {
                    can_escape[i] = true;
                    queue.push_back(i as PlantIdx);
                }
            }
            while let Some(s) = queue.pop_front() {
                for &tid in &self.states[s as usize].in_edges {
                    let src = self.trans[tid as usize].source;
                    let info = &self.states[src as usize];
                    if info.discovered && info.class != Class::Losing && !can_escape[src as usize]
                    {
                        can_escape[src as usize] = true;
                        queue.push_back(src);
                    }
                }
            }
            let mut newly: Vec<PlantIdx> = Vec::new();
            for (i, info) in self.states.iter_mut().enumerate() {
                if info.discovered && info.class == Class::Undecided && !can_escape[i] {
                    info.class = Class::Losing;
                    newly.push(i as PlantIdx);
                }
            }
            // Uncontrollable contagion, propagated to a fixpoint.
            let mut w = 0;
            while w < newly.len() {
                let lost = newly[w];
                w += 1;
                let in_edges = self.states[lost as usize].in_edges.clone();
                for tid in in_edges {
                    let t = &self.trans[tid as usize];
                    if t.controllable {
                        continue;
                    }
                    let src = t.source;
                    let info = &mut self.states[src as usize];
                    if info.discovered && info.class == Class::Undecided {
                        info.class = Class::Losing;
                        newly.push(src);
                    }
                }
            }
            if newly.is_empty() {
                break;
            }
            self.phase.losing_found = true;
        }
    }

    /// Greatest set G of discovered non-losing states such that every
    /// uncontrollable successor stays in G and a marked state of G is
    /// reachable within G. Returns membership and distance-to-marked.
    fn winning_fixpoint(&self) -> (Vec<bool>, Vec<u32>) {
        let mut in_g: Vec<bool> = self
            .states
            .iter()
            .map(|s| s.discovered && s.class != Class::Losing)
            .collect();
        let mut dist = vec![u32::MAX; self.states.len()];
        // Removing a state may invalidate its uncontrollable predecessors;
        // propagate removals with a worklist.
        let mut removed: VecDeque<PlantIdx> = VecDeque::new();
        for i in 0..self.states.len() {
            if !in_g[i] {
                continue;
            }
            let escapes = self.states[i].succ.iter().any(|&tid| {
                let t = &self.trans[tid as usize];
                !t.controllable && !in_g[t.target as usize]
            });
            if escapes {
                in_g[i] = false;
                removed.push_back(i as PlantIdx);
            }
        }
        loop {
            while let Some(x) = removed.pop_front() {
                for &tid in &self.states[x as usize].in_edges {
                    let t = &self.trans[tid as usize];
                    if t.controllable {
                        continue;
                    }
                    let src = t.source as usize;
                    if in_g[src] {
                        in_g[src] = false;
                        removed.push_back(src as PlantIdx);
                    }
                }
            }
            // Condition (iii): marked state of G reachable within G.
            dist = vec![u32::MAX; self.states.len()];
            let mut queue = VecDeque::new();
            for (i, info) in self.states.iter().enumerate() {
                if in_g[i] && info.marked {
                    dist[i] = 0;
                    queue.push_back(i as PlantIdx);
                }
            }
            while let Some(s) = queue.pop_front() {
                for &tid in &self.states[s as usize].in_edges {
                    let src = self.trans[tid as usize].source;
                    if in_g[src as usize] && dist[src as usize] == u32::MAX {
                        dist[src as usize] = dist[s as usize] + 1;
                        queue.push_back(src);
                    }
                }
            }
            let mut changed = false;
            for i in 0..self.states.len() {
                if in_g[i] && dist[i] == u32::MAX {
                    in_g[i] = false;
                    removed.push_back(i as PlantIdx);
                    changed = true;
                }
            }
            if !changed {
                return (in_g, dist);
            }
        }
    }

    /// Director for the current winning set. Requires the initial state to be
    /// winning; the result is validated against the closed loop it induces.
    pub fn extract_director(&self) -> Result<Director, EngineError> {
        if self.class(self.initial()) != Class::Winning {
            return Err(EngineError::Contract(
                "director extraction requires a winning initial state".into(),
            ));
        }
        let (in_g, dist) = self.winning_fixpoint();
        let mut choices = Vec::new();
        for (i, info) in self.states.iter().enumerate() {
            if !in_g[i] {
                continue;
            }
            let choice = if info.marked && dist[i] == 0 {
                None
            } else {
                // Prefer no controllable choice when an uncontrollable edge
                // already decreases the distance to marked; otherwise pick the
                // lowest-label controllable edge on a shortest path.
                let mut best: Option<LabelId> = None;
                let mut via_uncontrollable = false;
                for &tid in &info.succ {
                    let t = &self.trans[tid as usize];
                    if !in_g[t.target as usize] {
                        continue;
                    }
                    if dist[t.target as usize].saturating_add(1) != dist[i] {
                        continue;
                    }
                    if !t.controllable {
                        via_uncontrollable = true;
                        break;
                    }
                    if best.map_or(true, |b| t.label < b) {
                        best = Some(t.label);
                    }
                }
                if via_uncontrollable {
                    None
                } else {
                    best
                }
            };
            choices.push((info.local.clone(), choice));
        }
        let director = Director { choices };
        director.validate(self.model)?;
        Ok(director)
    }
}

/// State-feedback controller enabling at most one controllable event per state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Director {
    /// (plant state, enabled controllable label) pairs over the winning set.
    pub choices: Vec<(Vec<StateId>, Option<LabelId>)>,
}

impl Director {
    pub fn choice(&self, state: &[StateId]) -> Option<&Option<LabelId>> {
        self.choices.iter().find(|(s, _)| s == state).map(|(_, c)| c)
    }

    /// Closed-loop check: no unmarked deadlock, and a marked state reachable
    /// from every closed-loop reachable state.
    pub fn validate(&self, model: &CompositeModel) -> Result<(), EngineError> {
        let by_state: HashMap<&[StateId], &Option<LabelId>> = self
            .choices
            .iter()
            .map(|(s, c)| (s.as_slice(), c))
            .collect();
        let initial = model.initial_state();
        let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
        let mut states = vec![initial.clone()];
        index.insert(initial, 0);
        let mut succs: Vec<Vec<usize>> = Vec::new();
        let mut cursor = 0;
        while cursor < states.len() {
            let s = states[cursor].clone();
            let choice = by_state.get(s.as_slice()).ok_or_else(|| {
                EngineError::DirectorValidation(format!(
                    "closed loop reaches a state outside the director domain: {s:?}"
                ))
            })?;
            let mut row = Vec::new();
            for succ in model.compose_successors(&s) {
                let enabled = !succ.controllable || Some(succ.label) == **choice;
                if !enabled {
                    continue;
                }
                let next = *index.entry(succ.target.clone()).or_insert_with(|| {
                    states.push(succ.target.clone());
                    states.len() - 1
                });
                row.push(next);
            }
            if row.is_empty() && !model.is_marked(&s) {
                return Err(EngineError::DirectorValidation(format!(
                    "closed loop has an unmarked deadlock at {s:?}"
                )));
            }
            succs.push(row);
            cursor += 1;
        }
        // Backward reachability from marked states inside the closed loop.
        let mut coreach = vec![false; states.len()];
        let mut queue: VecDeque<usize> = states
            .iter()
            .enumerate()
            .filter(|(_, s)| model.is_marked(s))
            .map(|(i, _)| i)
            .collect();
        for &i in &queue {
            coreach[i] = true;
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
        for (i, row) in succs.iter().enumerate() {
            for &j in row {
                preds[j].push(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &p in &preds[i] {
                if !coreach[p] {
                    coreach[p] = true;
                    queue.push_back(p);
                }
            }
        }
        if let Some(i) = coreach.iter().position(|&c| !c) {
            return Err(EngineError::DirectorValidation(format!(
                "no marked state reachable from closed-loop state {:?}",
                states[i]
            )));
        }
        Ok(())
    }
}

/// Frontier-selection strategy plugged into [`run_dcs`].
pub trait ExplorationPolicy {
    fn select(&mut self, ex: &Explorer, rng: &mut ChaCha8Rng) -> TransId;
    fn name(&self) -> String;
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub realizable: bool,
    pub decided: bool,
    pub expansions: u64,
    #[serde(skip)]
    pub director: Option<Director>,
}

/// Runs the synthesis loop to a verdict.
pub fn run_dcs(
    model: &CompositeModel,
    policy: &mut dyn ExplorationPolicy,
    budget: u64,
    seed: u64,
) -> Verdict {
    assert!(budget >= 1, "budget must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ex = Explorer::new(model);
    loop {
        match ex.class(ex.initial()) {
            Class::Winning => {
                let director = ex.extract_director().expect("winning verdicts carry a valid director");
                return Verdict {
                    realizable: true,
                    decided: true,
                    expansions: ex.expansions(),
                    director: Some(director),
                };
            }
            Class::Losing => {
                return Verdict {
                    realizable: false,
                    decided: true,
                    expansions: ex.expansions(),
                    director: None,
                };
            }
            Class::Undecided => {}
        }
        if ex.frontier_len() == 0 {
            // Fully explored: the greatest winning set is exact, so an
            // undecided initial state cannot be winning.
            return Verdict {
                realizable: false,
                decided: true,
                expansions: ex.expansions(),
                director: None,
            };
        }
        if ex.expansions() >= budget {
            return Verdict {
                realizable: false,
                decided: false,
                expansions: ex.expansions(),
                director: None,
            };
        }
        let choice = policy.select(&ex, &mut rng);
        ex.expand(choice).expect("policies must select frontier members");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{RawComponent, RawModel};

    fn chain_model() -> CompositeModel {
        // s0 -a-> s1 -b-> s2 (marked), all controllable.
        let p = RawComponent {
            name: "P".into(),
            states: vec!["s0".into(), "s1".into(), "s2".into()],
            initial: "s0".into(),
            marked: vec!["s2".into()],
            transitions: vec![
                ("s0".into(), "a".into(), "s1".into()),
                ("s1".into(), "b".into(), "s2".into()),
            ],
            controllable: None,
        };
        CompositeModel::from_raw(&RawModel {
            components: vec![p],
            controllable: vec!["a".into(), "b".into()],
            composition: vec!["P".into()],
        })
        .unwrap()
    }

    struct FirstPolicy;
    impl ExplorationPolicy for FirstPolicy {
        fn select(&mut self, ex: &Explorer, _rng: &mut ChaCha8Rng) -> TransId {
            ex.frontier_canonical()[0]
        }
        fn name(&self) -> String {
            "first".into()
        }
    }

    #[test]
    fn initial_discovery_populates_frontier() {
        let model = chain_model();
        let ex = Explorer::new(&model);
        assert_eq!(ex.frontier_len(), 1);
        assert_eq!(ex.expansions(), 0);
        assert!(ex.check_frontier_law());
    }

    #[test]
    fn chain_to_marked_sink_becomes_winning() {
        let model = chain_model();
        let verdict = run_dcs(&model, &mut FirstPolicy, 100, 0);
        assert!(verdict.realizable);
        assert!(verdict.decided);
        let director = verdict.director.unwrap();
        assert_eq!(director.choice(&[0]), Some(&Some(0))); // label `a`
        assert_eq!(director.choice(&[1]), Some(&Some(1))); // label `b`
        assert_eq!(director.choice(&[2]), Some(&None));
    }

    #[test]
    fn marked_deadlock_is_winning() {
        let p = RawComponent {
            name: "P".into(),
            states: vec!["s0".into()],
            initial: "s0".into(),
            marked: vec!["s0".into()],
            transitions: vec![],
            controllable: None,
        };
        // A second component provides an alphabet so the model is non-empty.
        let model = CompositeModel::from_raw(&RawModel {
            components: vec![p],
            controllable: vec![],
            composition: vec!["P".into()],
        });
        // With no transitions at all there is no alphabet; the marked initial
        // state must still classify as winning.
        let model = model.unwrap();
        let verdict = run_dcs(&model, &mut FirstPolicy, 1, 0);
        assert!(verdict.realizable);
        assert_eq!(verdict.expansions, 0);
    }

    #[test]
    fn unmarked_deadlock_initial_state_is_losing() {
        let p = RawComponent {
            name: "P".into(),
            states: vec!["s0".into()],
            initial: "s0".into(),
            marked: vec![],
            transitions: vec![],
            controllable: None,
        };
        let model = CompositeModel::from_raw(&RawModel {
            components: vec![p],
            controllable: vec![],
            composition: vec!["P".into()],
        })
        .unwrap();
        let verdict = run_dcs(&model, &mut FirstPolicy, 1, 0);
        assert!(!verdict.realizable);
        assert!(verdict.decided);
    }

    #[test]
    fn uncontrollable_loop_without_marked_states_is_losing() {
        let p = RawComponent {
            name: "P".into(),
            states: vec!["s0".into(), "s1".into()],
            initial: "s0".into(),
            marked: vec![],
            transitions: vec![
                ("s0".into(), "u".into(), "s1".into()),
                ("s1".into(), "v".into(), "s0".into()),
            ],
            controllable: None,
        };
        let model = CompositeModel::from_raw(&RawModel {
            components: vec![p],
            controllable: vec![],
            composition: vec!["P".into()],
        })
        .unwrap();
        let verdict = run_dcs(&model, &mut FirstPolicy, 100, 0);
        assert!(!verdict.realizable);
        assert!(verdict.decided);
    }

    #[test]
    fn losing_propagates_through_uncontrollable_edges() {
        // s0 -u(unc)-> dead (unmarked deadlock); s0 -c-> goal (marked).
        let p = RawComponent {
            name: "P".into(),
            states: vec!["s0".into(), "dead".into(), "goal".into()],
            initial: "s0".into(),
            marked: vec!["goal".into()],
            transitions: vec![
                ("s0".into(), "u".into(), "dead".into()),
                ("s0".into(), "c".into(), "goal".into()),
            ],
            controllable: None,
        };
        let model = CompositeModel::from_raw(&RawModel {
            components: vec![p],
            controllable: vec!["c".into()],
            composition: vec!["P".into()],
        })
        .unwrap();
        let verdict = run_dcs(&model, &mut FirstPolicy, 100, 0);
        assert!(!verdict.realizable, "uncontrollable route into a dead end loses");
    }

    #[test]
    fn budget_exhaustion_reports_undecided() {
        let model = chain_model();
        let verdict = run_dcs(&model, &mut FirstPolicy, 1, 0);
        assert!(!verdict.decided);
        assert_eq!(verdict.expansions, 1);
    }

    #[test]
    fn expanding_non_frontier_transition_is_a_contract_violation() {
        let model = chain_model();
        let mut ex = Explorer::new(&model);
        let tid = ex.frontier_canonical()[0];
        ex.expand(tid).unwrap();
        assert!(matches!(ex.expand(tid), Err(EngineError::Contract(_))));
    }

    #[test]
    fn frontier_law_holds_along_a_run() {
        let model = crate::benchmarks::generate_benchmark(crate::benchmarks::BenchmarkSpec::new(
            crate::benchmarks::Domain::AT,
            1,
            1,
        ));
        let mut ex = Explorer::new(&model);
        while ex.frontier_len() > 0 {
            let tid = ex.frontier_canonical()[0];
            ex.expand(tid).unwrap();
            assert!(ex.check_frontier_law());
        }
    }
}
