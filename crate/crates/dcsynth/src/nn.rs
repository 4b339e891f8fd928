//! Hand-rolled neural nets in f64: a two-layer GCN with an edge-scoring MLP
//! head, and a flat-feature Q-network baseline. Gradients are derived
//! manually and checked against finite differences in the tests; parameters
//! flatten into a single vector so the optimizer and the checks stay simple.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphEncoding;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("weight file error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Symmetric normalization with self-loops: D^-1/2 (A + I) D^-1/2.
    NormalizedSym,
    /// Plain neighbor sum (plus self), no normalization.
    Sum,
}

/// Sparse symmetric propagation matrix over the undirected edge view.
struct Prop {
    /// (row, col, weight); includes self-loops.
    entries: Vec<(usize, usize, f64)>,
    n: usize,
}

impl Prop {
    fn build(g: &GraphEncoding, agg: Aggregation) -> Prop {
        let n = g.node_count();
        let mut weight = std::collections::BTreeMap::<(usize, usize), f64>::new();
        for i in 0..n {
            *weight.entry((i, i)).or_insert(0.0) += 1.0;
        }
        for &(a, b) in &g.edges {
            if a == b {
                continue; // self-loop already present
            }
            *weight.entry((a as usize, b as usize)).or_insert(0.0) += 1.0;
            *weight.entry((b as usize, a as usize)).or_insert(0.0) += 1.0;
        }
        let mut entries: Vec<(usize, usize, f64)> =
            weight.into_iter().map(|((r, c), w)| (r, c, w)).collect();
        if agg == Aggregation::NormalizedSym {
            let mut degree = vec![0.0; n];
            for &(r, _, w) in &entries {
                degree[r] += w;
            }
            for e in &mut entries {
                e.2 /= (degree[e.0] * degree[e.1]).sqrt();
            }
        }
        Prop { entries, n }
    }

    /// Sparse × dense product; the matrix is symmetric, so this also serves
    /// as the transposed product in the backward pass.
    fn matmul(&self, m: &Array2<f64>) -> Array2<f64> {
        let mut out = Array2::zeros((self.n, m.ncols()));
        for &(r, c, w) in &self.entries {
            let src = m.row(c).to_owned() * w;
            let mut dst = out.row_mut(r);
            dst += &src;
        }
        out
    }
}

fn relu(m: &Array2<f64>) -> Array2<f64> {
    m.mapv(|x| x.max(0.0))
}

fn relu_mask(m: &Array2<f64>) -> Array2<f64> {
    m.mapv(|x| if x > 0.0 { 1.0 } else { 0.0 })
}

fn xavier(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-bound..bound))
}

/// Two GCN layers followed by an edge MLP scoring head.
#[derive(Debug, Clone)]
pub struct GnnModel {
    pub w1: Array2<f64>, // [f_n, h]
    pub b1: Array1<f64>,
    pub w2: Array2<f64>, // [h, h]
    pub b2: Array1<f64>,
    pub mw1: Array2<f64>, // [2h + f_e, h_m]
    pub mb1: Array1<f64>,
    pub mw2: Array2<f64>, // [h_m, 1]
    pub mb2: Array1<f64>,
    pub agg: Aggregation,
}

/// Intermediate activations kept for the backward pass.
pub struct GnnCache {
    prop: Prop,
    ax: Array2<f64>,
    s1: Array2<f64>,
    az1: Array2<f64>,
    s2: Array2<f64>,
    z2: Array2<f64>,
    /// Per scored edge: (source node, target node, mlp input, mlp hidden preact).
    edges: Vec<(usize, usize, Array1<f64>, Array1<f64>)>,
}

impl GnnModel {
    pub fn new(f_n: usize, h: usize, f_e: usize, h_m: usize, agg: Aggregation, rng: &mut ChaCha8Rng) -> GnnModel {
        GnnModel {
            w1: xavier(f_n, h, rng),
            b1: Array1::zeros(h),
            w2: xavier(h, h, rng),
            b2: Array1::zeros(h),
            mw1: xavier(2 * h + f_e, h_m, rng),
            mb1: Array1::zeros(h_m),
            mw2: xavier(h_m, 1, rng),
            mb2: Array1::zeros(1),
            agg,
        }
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.ncols()
    }

    pub fn node_dim(&self) -> usize {
        self.w1.nrows()
    }

    pub fn edge_dim(&self) -> usize {
        self.mw1.nrows() - 2 * self.hidden_dim()
    }

    /// Scores the frontier edges of `g`; keeps activations for backward.
    pub fn forward(&self, g: &GraphEncoding) -> (Vec<f64>, GnnCache) {
        let n = g.node_count();
        let f_n = self.node_dim();
        let mut x = Array2::zeros((n, f_n));
        for (i, row) in g.node_feats.iter().enumerate() {
            assert_eq!(row.len(), f_n, "node feature dimension mismatch");
            x.row_mut(i).assign(&Array1::from_vec(row.clone()));
        }
        let prop = Prop::build(g, self.agg);
        let ax = prop.matmul(&x);
        let s1 = ax.dot(&self.w1) + &self.b1;
        let z1 = relu(&s1);
        let az1 = prop.matmul(&z1);
        let s2 = az1.dot(&self.w2) + &self.b2;
        let z2 = relu(&s2);
        let h = self.hidden_dim();
        let mut scores = Vec::with_capacity(g.frontier.len());
        let mut edges = Vec::with_capacity(g.frontier.len());
        for &pos in &g.frontier {
            let (u, v) = g.edges[pos];
            let feats = &g.edge_feats[pos];
            assert_eq!(feats.len(), self.edge_dim(), "edge feature dimension mismatch");
            let mut cat = Array1::zeros(2 * h + feats.len());
            cat.slice_mut(ndarray::s![0..h]).assign(&z2.row(u as usize));
            cat.slice_mut(ndarray::s![h..2 * h]).assign(&z2.row(v as usize));
            cat.slice_mut(ndarray::s![2 * h..]).assign(&Array1::from_vec(feats.clone()));
            let hid = cat.dot(&self.mw1) + &self.mb1;
            let act = hid.mapv(|x| x.max(0.0));
            let score = act.dot(&self.mw2)[0] + self.mb2[0];
            scores.push(score);
            edges.push((u as usize, v as usize, cat, hid));
        }
        (scores, GnnCache { prop, ax, s1, az1, s2, z2, edges })
    }

    pub fn scores(&self, g: &GraphEncoding) -> Vec<f64> {
        self.forward(g).0
    }

    /// Backpropagates per-score gradients into a flat parameter gradient.
    pub fn backward(&self, cache: &GnnCache, dscores: &[f64]) -> Vec<f64> {
        assert_eq!(dscores.len(), cache.edges.len());
        let h = self.hidden_dim();
        let mut dw1 = Array2::zeros(self.w1.raw_dim());
        let mut db1 = Array1::zeros(self.b1.raw_dim());
        let mut dw2 = Array2::zeros(self.w2.raw_dim());
        let mut db2 = Array1::zeros(self.b2.raw_dim());
        let mut dmw1 = Array2::zeros(self.mw1.raw_dim());
        let mut dmb1 = Array1::zeros(self.mb1.raw_dim());
        let mut dmw2 = Array2::zeros(self.mw2.raw_dim());
        let mut dmb2 = Array1::zeros(self.mb2.raw_dim());
        let mut dz2: Array2<f64> = Array2::zeros(cache.z2.raw_dim());
        for ((u, v, cat, hid), &ds) in cache.edges.iter().zip(dscores) {
            let act = hid.mapv(|x| x.max(0.0));
            // Output layer of the MLP head.
            for (i, &a) in act.iter().enumerate() {
                dmw2[[i, 0]] += a * ds;
            }
            dmb2[0] += ds;
            // Hidden layer.
            let dact: Array1<f64> = self.mw2.column(0).mapv(|w| w * ds);
            let dhid: Array1<f64> =
                &dact * &hid.mapv(|x| if x > 0.0 { 1.0 } else { 0.0 });
            for (i, &c) in cat.iter().enumerate() {
                for (j, &dh) in dhid.iter().enumerate() {
                    dmw1[[i, j]] += c * dh;
                }
            }
            dmb1 += &dhid;
            let dcat = self.mw1.dot(&dhid);
            let mut row = dz2.row_mut(*u);
            row += &dcat.slice(ndarray::s![0..h]);
            let mut row = dz2.row_mut(*v);
            row += &dcat.slice(ndarray::s![h..2 * h]);
        }
        // Second conv layer.
        let ds2 = &dz2 * &relu_mask(&cache.s2);
        dw2 += &cache.az1.t().dot(&ds2);
        db2 += &ds2.sum_axis(Axis(0));
        let dz1 = cache.prop.matmul(&ds2.dot(&self.w2.t()));
        // First conv layer.
        let ds1 = &dz1 * &relu_mask(&cache.s1);
        dw1 += &cache.ax.t().dot(&ds1);
        db1 += &ds1.sum_axis(Axis(0));
        flatten_parts(&[
            dw1.view().into_dyn(),
            db1.view().into_dyn(),
            dw2.view().into_dyn(),
            db2.view().into_dyn(),
            dmw1.view().into_dyn(),
            dmb1.view().into_dyn(),
            dmw2.view().into_dyn(),
            dmb2.view().into_dyn(),
        ])
    }

    pub fn num_params(&self) -> usize {
        self.flatten().len()
    }

    /// Row-major concatenation in the fixed order w1 b1 w2 b2 mw1 mb1 mw2 mb2.
    pub fn flatten(&self) -> Vec<f64> {
        flatten_parts(&[
            self.w1.view().into_dyn(),
            self.b1.view().into_dyn(),
            self.w2.view().into_dyn(),
            self.b2.view().into_dyn(),
            self.mw1.view().into_dyn(),
            self.mb1.view().into_dyn(),
            self.mw2.view().into_dyn(),
            self.mb2.view().into_dyn(),
        ])
    }

    pub fn assign_from_flat(&mut self, flat: &[f64]) {
        let mut off = 0;
        off = assign2(&mut self.w1, flat, off);
        off = assign1(&mut self.b1, flat, off);
        off = assign2(&mut self.w2, flat, off);
        off = assign1(&mut self.b2, flat, off);
        off = assign2(&mut self.mw1, flat, off);
        off = assign1(&mut self.mb1, flat, off);
        off = assign2(&mut self.mw2, flat, off);
        off = assign1(&mut self.mb2, flat, off);
        assert_eq!(off, flat.len(), "flat parameter vector length mismatch");
    }
}

fn flatten_parts(parts: &[ndarray::ArrayViewD<f64>]) -> Vec<f64> {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p.iter().copied());
    }
    out
}

fn assign2(m: &mut Array2<f64>, flat: &[f64], off: usize) -> usize {
    let len = m.len();
    for (slot, &v) in m.iter_mut().zip(&flat[off..off + len]) {
        *slot = v;
    }
    off + len
}

fn assign1(m: &mut Array1<f64>, flat: &[f64], off: usize) -> usize {
    let len = m.len();
    for (slot, &v) in m.iter_mut().zip(&flat[off..off + len]) {
        *slot = v;
    }
    off + len
}

/// Flat-feature Q-network: Linear → ReLU → Linear on φ(h, a).
#[derive(Debug, Clone)]
pub struct QNet {
    pub w1: Array2<f64>, // [f, h_m]
    pub b1: Array1<f64>,
    pub w2: Array2<f64>, // [h_m, 1]
    pub b2: Array1<f64>,
}

pub struct QCache {
    phi: Array1<f64>,
    hid: Array1<f64>,
}

impl QNet {
    pub fn new(f: usize, h_m: usize, rng: &mut ChaCha8Rng) -> QNet {
        QNet {
            w1: xavier(f, h_m, rng),
            b1: Array1::zeros(h_m),
            w2: xavier(h_m, 1, rng),
            b2: Array1::zeros(1),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w1.nrows()
    }

    pub fn forward(&self, phi: &[f64]) -> (f64, QCache) {
        assert_eq!(phi.len(), self.input_dim(), "phi dimension mismatch");
        let phi = Array1::from_vec(phi.to_vec());
        let hid = phi.dot(&self.w1) + &self.b1;
        let act = hid.mapv(|x| x.max(0.0));
        let q = act.dot(&self.w2)[0] + self.b2[0];
        (q, QCache { phi, hid })
    }

    pub fn q(&self, phi: &[f64]) -> f64 {
        self.forward(phi).0
    }

    pub fn backward(&self, cache: &QCache, dq: f64) -> Vec<f64> {
        let act = cache.hid.mapv(|x| x.max(0.0));
        let mut dw2 = Array2::zeros(self.w2.raw_dim());
        for (i, &a) in act.iter().enumerate() {
            dw2[[i, 0]] = a * dq;
        }
        let db2 = Array1::from_vec(vec![dq]);
        let dact = self.w2.column(0).mapv(|w| w * dq);
        let dhid = &dact * &cache.hid.mapv(|x| if x > 0.0 { 1.0 } else { 0.0 });
        let mut dw1 = Array2::zeros(self.w1.raw_dim());
        for (i, &p) in cache.phi.iter().enumerate() {
            for (j, &dh) in dhid.iter().enumerate() {
                dw1[[i, j]] = p * dh;
            }
        }
        flatten_parts(&[
            dw1.view().into_dyn(),
            dhid.view().into_dyn(),
            dw2.view().into_dyn(),
            db2.view().into_dyn(),
        ])
    }

    pub fn flatten(&self) -> Vec<f64> {
        flatten_parts(&[
            self.w1.view().into_dyn(),
            self.b1.view().into_dyn(),
            self.w2.view().into_dyn(),
            self.b2.view().into_dyn(),
        ])
    }

    pub fn assign_from_flat(&mut self, flat: &[f64]) {
        let mut off = 0;
        off = assign2(&mut self.w1, flat, off);
        off = assign1(&mut self.b1, flat, off);
        off = assign2(&mut self.w2, flat, off);
        off = assign1(&mut self.b2, flat, off);
        assert_eq!(off, flat.len(), "flat parameter vector length mismatch");
    }
}

/// Adam over a flat parameter vector.
pub struct Adam {
    pub lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(lr: f64, dim: usize) -> Adam {
        Adam { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; dim], v: vec![0.0; dim], t: 0 }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        assert_eq!(params.len(), grad.len());
        assert_eq!(params.len(), self.m.len());
        self.t += 1;
        let b1t = 1.0 - self.beta1.powi(self.t as i32);
        let b2t = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let mh = self.m[i] / b1t;
            let vh = self.v[i] / b2t;
            params[i] -= self.lr * mh / (vh.sqrt() + self.eps);
        }
    }
}

/// Scales `grad` in place so its L2 norm does not exceed `max_norm`.
pub fn clip_grad_norm(grad: &mut [f64], max_norm: f64) -> f64 {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let scale = max_norm / norm;
        for g in grad.iter_mut() {
            *g *= scale;
        }
    }
    norm
}

// ── Weight files ──────────────────────────────────────────────────────

const WEIGHT_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct WeightFile {
    version: u32,
    kind: String,
    dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agg: Option<Aggregation>,
    params: Vec<f64>,
}

fn check_params(params: &[f64]) -> Result<(), NnError> {
    if params.iter().any(|p| !p.is_finite()) {
        return Err(NnError::Format("non-finite parameter".into()));
    }
    Ok(())
}

pub fn save_gnn(model: &GnnModel, path: &std::path::Path) -> Result<(), NnError> {
    let file = WeightFile {
        version: WEIGHT_FORMAT_VERSION,
        kind: "gcrl".into(),
        dims: vec![model.node_dim(), model.hidden_dim(), model.edge_dim(), model.mb1.len()],
        agg: Some(model.agg),
        params: model.flatten(),
    };
    std::fs::write(path, serde_json::to_string(&file).map_err(|e| NnError::Format(e.to_string()))?)?;
    Ok(())
}

pub fn load_gnn(path: &std::path::Path) -> Result<GnnModel, NnError> {
    let file: WeightFile = serde_json::from_str(&std::fs::read_to_string(path)?)
        .map_err(|e| NnError::Format(e.to_string()))?;
    if file.version != WEIGHT_FORMAT_VERSION {
        return Err(NnError::Format(format!("unsupported weight format version {}", file.version)));
    }
    if file.kind != "gcrl" {
        return Err(NnError::Format(format!("expected gcrl weights, found {:?}", file.kind)));
    }
    let [f_n, h, f_e, h_m]: [usize; 4] = file
        .dims
        .as_slice()
        .try_into()
        .map_err(|_| NnError::Format("gcrl weights need 4 dims".into()))?;
    check_params(&file.params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let agg = file.agg.ok_or_else(|| NnError::Format("missing aggregation mode".into()))?;
    let mut model = GnnModel::new(f_n, h, f_e, h_m, agg, &mut rng);
    if file.params.len() != model.num_params() {
        return Err(NnError::Format(format!(
            "parameter count {} does not match dims (expected {})",
            file.params.len(),
            model.num_params()
        )));
    }
    model.assign_from_flat(&file.params);
    Ok(model)
}

pub fn save_qnet(model: &QNet, path: &std::path::Path) -> Result<(), NnError> {
    let file = WeightFile {
        version: WEIGHT_FORMAT_VERSION,
        kind: "rl".into(),
        dims: vec![model.input_dim(), model.b1.len()],
        agg: None,
        params: model.flatten(),
    };
    std::fs::write(path, serde_json::to_string(&file).map_err(|e| NnError::Format(e.to_string()))?)?;
    Ok(())
}

pub fn load_qnet(path: &std::path::Path) -> Result<QNet, NnError> {
    let file: WeightFile = serde_json::from_str(&std::fs::read_to_string(path)?)
        .map_err(|e| NnError::Format(e.to_string()))?;
    if file.version != WEIGHT_FORMAT_VERSION {
        return Err(NnError::Format(format!("unsupported weight format version {}", file.version)));
    }
    if file.kind != "rl" {
        return Err(NnError::Format(format!("expected rl weights, found {:?}", file.kind)));
    }
    let [f, h_m]: [usize; 2] = file
        .dims
        .as_slice()
        .try_into()
        .map_err(|_| NnError::Format("rl weights need 2 dims".into()))?;
    check_params(&file.params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut model = QNet::new(f, h_m, &mut rng);
    if file.params.len() != model.flatten().len() {
        return Err(NnError::Format("parameter count does not match dims".into()));
    }
    model.assign_from_flat(&file.params);
    Ok(model)
}

use rand_chacha::rand_core::SeedableRng;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_graph(rng: &mut ChaCha8Rng, f_n: usize, f_e: usize) -> GraphEncoding {
        let n = rng.gen_range(2..8usize);
        let m = rng.gen_range(1..12usize);
        let edges: Vec<(u32, u32)> =
            (0..m).map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))).collect();
        let node_feats = (0..n)
            .map(|_| (0..f_n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let edge_feats = (0..m)
            .map(|_| (0..f_e).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let nf = rng.gen_range(1..=m);
        GraphEncoding {
            frontier: (m - nf..m).collect(),
            node_plant: (0..n as u32).collect(),
            edges,
            edge_feats,
            node_feats,
        }
    }

    fn fd_check(agg: Aggregation, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f_n, h, f_e, h_m) = (3, 4, 2, 5);
        let model = GnnModel::new(f_n, h, f_e, h_m, agg, &mut rng);
        let g = random_graph(&mut rng, f_n, f_e);
        // Loss = weighted sum of frontier scores.
        let weights: Vec<f64> =
            (0..g.frontier.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, cache) = model.forward(&g);
        let analytic = model.backward(&cache, &weights);
        let mut flat = model.flatten();
        let eps = 1e-6;
        let mut probe = model.clone();
        for i in 0..flat.len() {
            let orig = flat[i];
            flat[i] = orig + eps;
            probe.assign_from_flat(&flat);
            let up: f64 = probe.scores(&g).iter().zip(&weights).map(|(s, w)| s * w).sum();
            flat[i] = orig - eps;
            probe.assign_from_flat(&flat);
            let down: f64 = probe.scores(&g).iter().zip(&weights).map(|(s, w)| s * w).sum();
            flat[i] = orig;
            let fd = (up - down) / (2.0 * eps);
            let denom = fd.abs().max(analytic[i].abs()).max(1e-6);
            assert!(
                (fd - analytic[i]).abs() / denom < 1e-5,
                "param {i}: fd {fd} vs analytic {}",
                analytic[i]
            );
        }
    }

    #[test]
    fn gnn_gradients_match_finite_differences_normalized() {
        for seed in 0..3 {
            fd_check(Aggregation::NormalizedSym, seed);
        }
    }

    #[test]
    fn gnn_gradients_match_finite_differences_sum() {
        for seed in 10..13 {
            fd_check(Aggregation::Sum, seed);
        }
    }

    #[test]
    fn qnet_gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let model = QNet::new(6, 5, &mut rng);
        let phi: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, cache) = model.forward(&phi);
        let analytic = model.backward(&cache, 1.0);
        let mut flat = model.flatten();
        let mut probe = model.clone();
        let eps = 1e-6;
        for i in 0..flat.len() {
            let orig = flat[i];
            flat[i] = orig + eps;
            probe.assign_from_flat(&flat);
            let up = probe.q(&phi);
            flat[i] = orig - eps;
            probe.assign_from_flat(&flat);
            let down = probe.q(&phi);
            flat[i] = orig;
            let fd = (up - down) / (2.0 * eps);
            let denom = fd.abs().max(analytic[i].abs()).max(1e-6);
            assert!((fd - analytic[i]).abs() / denom < 1e-5, "param {i}");
        }
    }

    #[test]
    fn flatten_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let model = GnnModel::new(3, 4, 2, 5, Aggregation::NormalizedSym, &mut rng);
        let flat = model.flatten();
        let mut copy = GnnModel::new(3, 4, 2, 5, Aggregation::NormalizedSym, &mut rng);
        copy.assign_from_flat(&flat);
        assert_eq!(copy.flatten(), flat);
    }

    #[test]
    fn weight_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gnn = GnnModel::new(3, 4, 2, 5, Aggregation::Sum, &mut rng);
        let path = dir.path().join("g.json");
        save_gnn(&gnn, &path).unwrap();
        let loaded = load_gnn(&path).unwrap();
        assert_eq!(loaded.flatten(), gnn.flatten());
        assert_eq!(loaded.agg, Aggregation::Sum);
        let q = QNet::new(7, 3, &mut rng);
        let qpath = dir.path().join("q.json");
        save_qnet(&q, &qpath).unwrap();
        assert_eq!(load_qnet(&qpath).unwrap().flatten(), q.flatten());
        // Kind confusion is rejected.
        assert!(load_gnn(&qpath).is_err());
        assert!(load_qnet(&path).is_err());
    }

    #[test]
    fn adam_reduces_a_quadratic() {
        let mut opt = Adam::new(0.05, 2);
        let mut p = vec![3.0, -2.0];
        for _ in 0..500 {
            let grad = vec![2.0 * p[0], 2.0 * p[1]];
            opt.step(&mut p, &grad);
        }
        assert!(p[0].abs() < 1e-2 && p[1].abs() < 1e-2);
    }

    #[test]
    fn grad_clip_caps_the_norm() {
        let mut g = vec![3.0, 4.0];
        let norm = clip_grad_norm(&mut g, 1.0);
        assert!((norm - 5.0).abs() < 1e-12);
        let clipped = (g[0] * g[0] + g[1] * g[1]).sqrt();
        assert!((clipped - 1.0).abs() < 1e-12);
        let mut small = vec![0.3, 0.4];
        clip_grad_norm(&mut small, 1.0);
        assert_eq!(small, vec![0.3, 0.4]);
    }
}
