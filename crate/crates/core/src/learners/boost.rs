//! Gradient boosting of regression trees on the logistic loss.

use super::{check_labels, offer, sorted_by, Candidate, FeatureMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// L2 penalty on leaf values.
    pub lambda: f64,
}

impl Default for BoostParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 3,
            learning_rate: 0.1,
            lambda: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum RegNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(f64),
}

#[derive(Debug, Clone, PartialEq)]
struct RegTree {
    nodes: Vec<RegNode>,
}

impl RegTree {
    fn value(&self, x: &FeatureMatrix, row: usize) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                RegNode::Leaf(v) => return v,
                RegNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x.get(row, feature) <= threshold { left } else { right },
            }
        }
    }

    fn scale(&mut self, s: f64) {
        for n in &mut self.nodes {
            if let RegNode::Leaf(v) = n {
                *v *= s;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostedEnsemble {
    init: f64,
    learning_rate: f64,
    trees: Vec<RegTree>,
    loss_history: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean logistic loss of raw scores `f`.
fn log_loss(f: &[f64], y: &[u8]) -> f64 {
    // log(1 + e^-m) with margin m = f for y = 1 and -f for y = 0
    let total: f64 = f
        .iter()
        .zip(y)
        .map(|(&v, &l)| {
            let m = if l == 1 { v } else { -v };
            if m > 0.0 {
                (-m).exp().ln_1p()
            } else {
                -m + m.exp().ln_1p()
            }
        })
        .sum();
    total / f.len() as f64
}

/// Each round fits a tree to the Newton direction of the logistic loss and
/// shrinks its leaves by `learning_rate`. A round that would raise the
/// training loss is halved until it does not, or dropped.
pub fn boost_fit(x: &FeatureMatrix, y: &[u8], params: BoostParams) -> Result<BoostedEnsemble> {
    let (n0, n1) = check_labels(y, x.n_rows())?;
    if params.n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be >= 1".into()));
    }
    if params.max_depth == 0 {
        return Err(Error::InvalidParameter("max_depth must be >= 1".into()));
    }
    if !(params.learning_rate > 0.0 && params.learning_rate.is_finite()) || params.lambda < 0.0 {
        return Err(Error::InvalidParameter("learning_rate must be positive and lambda >= 0".into()));
    }
    if x.n_cols() == 0 {
        return Err(Error::InvalidParameter("feature matrix has no columns".into()));
    }
    let n = x.n_rows();
    let init = (n1 as f64 / n0 as f64).ln();
    let mut f = vec![init; n];
    let mut loss = log_loss(&f, y);
    let mut ens = BoostedEnsemble {
        init,
        learning_rate: params.learning_rate,
        trees: Vec::with_capacity(params.n_trees),
        loss_history: vec![loss],
    };
    let rows: Vec<usize> = (0..n).collect();
    let mut g = vec![0.0; n];
    let mut h = vec![0.0; n];
    for _ in 0..params.n_trees {
        for i in 0..n {
            let p = sigmoid(f[i]);
            g[i] = f64::from(y[i]) - p;
            h[i] = p * (1.0 - p);
        }
        let mut tree = RegTree { nodes: Vec::new() };
        grow(&mut tree, x, &g, &h, &rows, 0, &params);
        let step: Vec<f64> = (0..n).map(|i| tree.value(x, i)).collect();
        let mut s = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand: Vec<f64> = f.iter().zip(&step).map(|(a, d)| a + params.learning_rate * s * d).collect();
            let l = log_loss(&cand, y);
            if l <= loss {
                accepted = Some((cand, l));
                break;
            }
            s *= 0.5;
        }
        match accepted {
            Some((cand, l)) => {
                tree.scale(s);
                f = cand;
                loss = l;
            }
            None => tree.scale(0.0),
        }
        ens.trees.push(tree);
        ens.loss_history.push(loss);
    }
    Ok(ens)
}

fn grow(tree: &mut RegTree, x: &FeatureMatrix, g: &[f64], h: &[f64], rows: &[usize], depth: usize, params: &BoostParams) -> usize {
    let gs: f64 = rows.iter().map(|&r| g[r]).sum();
    let hs: f64 = rows.iter().map(|&r| h[r]).sum();
    let id = tree.nodes.len();
    tree.nodes.push(RegNode::Leaf(gs / (hs + params.lambda).max(1e-12)));
    if depth >= params.max_depth || rows.len() < 2 {
        return id;
    }
    let parent = -gs * gs / (hs + params.lambda).max(1e-12);
    let mut best: Option<Candidate> = None;
    for feat in 0..x.n_cols() {
        let col = x.column(feat);
        let s = sorted_by(x, feat, rows);
        let (mut gl, mut hl) = (0.0, 0.0);
        for k in 1..s.len() {
            gl += g[s[k - 1]];
            hl += h[s[k - 1]];
            let (a, b) = (col[s[k - 1]], col[s[k]]);
            if a == b {
                continue;
            }
            let (gr, hr) = (gs - gl, hs - hl);
            let score = -gl * gl / (hl + params.lambda).max(1e-12) - gr * gr / (hr + params.lambda).max(1e-12);
            offer(
                &mut best,
                Candidate {
                    feature: feat,
                    threshold: a + (b - a) / 2.0,
                    score,
                },
            );
        }
    }
    let Some(best) = best else { return id };
    if best.score >= parent - 1e-12 {
        return id;
    }
    let col = x.column(best.feature);
    let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| col[i] <= best.threshold);
    let left = grow(tree, x, g, h, &l, depth + 1, params);
    let right = grow(tree, x, g, h, &r, depth + 1, params);
    tree.nodes[id] = RegNode::Split {
        feature: best.feature,
        threshold: best.threshold,
        left,
        right,
    };
    id
}

impl BoostedEnsemble {
    pub fn init(&self) -> f64 {
        self.init
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Mean training log-loss before the first round and after each round.
    pub fn loss_history(&self) -> &[f64] {
        &self.loss_history
    }

    pub fn decision_function(&self, x: &FeatureMatrix) -> Vec<f64> {
        (0..x.n_rows())
            .map(|i| self.init + self.learning_rate * self.trees.iter().map(|t| t.value(x, i)).sum::<f64>())
            .collect()
    }

    pub fn predict_proba(&self, x: &FeatureMatrix) -> Vec<f64> {
        self.decision_function(x).into_iter().map(sigmoid).collect()
    }
}
