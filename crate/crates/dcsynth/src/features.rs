//! Node features, edge features, and the flat state-action feature vector
//! used by the baseline Q-network.
//!
//! Labels are normalized by stripping trailing `_<digits>` / `.<digits>`
//! instance indices, so the feature dimension of a benchmark family does not
//! depend on the instance size.

use crate::engine::{Class, Explorer, PlantIdx, TransId};
use crate::lts::{CompositeModel, LabelId};

pub const NODE_FEATURE_DIM: usize = 7;

/// Per-edge feature dimension for a normalized alphabet of size `a`.
pub fn edge_feature_dim(a: usize) -> usize {
    2 * a + 12
}

/// Flat φ(h, a) dimension for a normalized alphabet of size `a`.
pub fn phi_dim(a: usize) -> usize {
    NODE_FEATURE_DIM + edge_feature_dim(a)
}

/// Base event labels with instance indices stripped, in sorted order, plus a
/// map from global label ids onto base indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedAlphabet {
    pub base_labels: Vec<String>,
    map: Vec<usize>,
}

impl NormalizedAlphabet {
    pub fn from_model(model: &CompositeModel) -> NormalizedAlphabet {
        let mut base_labels: Vec<String> =
            model.labels.iter().map(|l| normalize_label(l)).collect();
        base_labels.sort();
        base_labels.dedup();
        let map = model
            .labels
            .iter()
            .map(|l| {
                base_labels
                    .binary_search(&normalize_label(l))
                    .expect("every label has a base form")
            })
            .collect();
        NormalizedAlphabet { base_labels, map }
    }

    pub fn len(&self) -> usize {
        self.base_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base_labels.is_empty()
    }

    pub fn base_index(&self, label: LabelId) -> usize {
        self.map[label as usize]
    }
}

/// Strips trailing `_<digits>` and `.<digits>` segments: `put_3` → `put`,
/// `assign_2_1` → `assign`.
pub fn normalize_label(label: &str) -> String {
    let mut s = label;
    loop {
        let Some(pos) = s.rfind(['_', '.']) else { break };
        let suffix = &s[pos + 1..];
        if !suffix.is_empty() && suffix.bytes().all(|b| b.is_ascii_digit()) {
            s = &s[..pos];
        } else {
            break;
        }
    }
    s.to_string()
}

fn phase_bits(ex: &Explorer) -> [f64; 3] {
    let p = ex.phase();
    [
        p.marked_found as u8 as f64,
        p.winning_found as u8 as f64,
        p.losing_found as u8 as f64,
    ]
}

/// 7-dimensional node feature vector. Undiscovered (placeholder) states get
/// all zeros except the global phase bits.
pub fn node_features(ex: &Explorer, state: PlantIdx) -> Vec<f64> {
    let phase = phase_bits(ex);
    if !ex.is_discovered(state) {
        return vec![0.0, 0.0, 0.0, 0.0, phase[0], phase[1], phase[2]];
    }
    let just_explored = (ex.last_discovered() == Some(state)) as u8 as f64;
    let enumerated = ex.enumerated_out(state);
    let explored_ratio = if enumerated == 0 {
        0.0
    } else {
        ex.expanded_out(state) as f64 / enumerated as f64
    };
    vec![
        just_explored,
        explored_ratio,
        ex.has_uncontrollable_out(state) as u8 as f64,
        ex.is_marked_state(state) as u8 as f64,
        phase[0],
        phase[1],
        phase[2],
    ]
}

/// (2|A| + 12)-dimensional edge feature vector for a history or frontier
/// transition.
pub fn edge_features(ex: &Explorer, alphabet: &NormalizedAlphabet, tid: TransId) -> Vec<f64> {
    let a = alphabet.len();
    let t = ex.trans(tid);
    let mut out = vec![0.0; edge_feature_dim(a)];
    out[alphabet.base_index(t.label)] = 1.0;
    // Labels on the discovery-tree path from the root to the source node.
    let mut cur = t.source;
    while let Some((parent, label)) = ex.parent(cur) {
        out[a + alphabet.base_index(label)] = 1.0;
        cur = parent;
    }
    let mut i = 2 * a;
    out[i] = t.controllable as u8 as f64;
    i += 1;
    out[i] = ex.is_marked_state(t.target) as u8 as f64;
    i += 1;
    let phase = phase_bits(ex);
    out[i..i + 3].copy_from_slice(&phase);
    i += 3;
    let class_slot = if !ex.is_discovered(t.target) {
        3 // Unexplored
    } else {
        match ex.class(t.target) {
            Class::Winning => 0,
            Class::Losing => 1,
            Class::Undecided => 2,
        }
    };
    out[i + class_slot] = 1.0;
    i += 4;
    let child_discovered = ex.is_discovered(t.target);
    out[i] = (child_discovered && ex.has_uncontrollable_out(t.target)) as u8 as f64;
    i += 1;
    out[i] = (child_discovered && ex.expanded_out(t.target) > 0) as u8 as f64;
    i += 1;
    out[i] = ex
        .last_expanded()
        .map_or(false, |last| ex.trans(last).source == t.source) as u8 as f64;
    out
}

/// Flat feature vector φ(h, a): source node features followed by the edge
/// features of the candidate transition.
pub fn phi(ex: &Explorer, alphabet: &NormalizedAlphabet, tid: TransId) -> Vec<f64> {
    let mut v = node_features(ex, ex.trans(tid).source);
    v.extend(edge_features(ex, alphabet, tid));
    v
}
