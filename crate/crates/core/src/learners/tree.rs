//! CART classification tree with Gini impurity.

use super::{check_labels, offer, sorted_by, Candidate, FeatureMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: 3, min_leaf: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Rows with `x[feature] <= threshold` go left. `impurity` is the
    /// size-weighted Gini of the two children.
    Split {
        feature: usize,
        threshold: f64,
        impurity: f64,
        left: usize,
        right: usize,
    },
    /// Class probabilities `[p0, p1]`.
    Leaf { probs: [f64; 2], n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_features: usize,
    params: TreeParams,
}

fn gini(n0: usize, n1: usize) -> f64 {
    let n = (n0 + n1) as f64;
    if n == 0.0 {
        0.0
    } else {
        2.0 * n0 as f64 * n1 as f64 / (n * n)
    }
}

/// Greedy top-down fit. A node splits only when some split lowers the
/// weighted Gini impurity.
pub fn tree_fit(x: &FeatureMatrix, y: &[u8], params: TreeParams) -> Result<DecisionTree> {
    check_labels(y, x.n_rows())?;
    if x.n_cols() == 0 {
        return Err(Error::InvalidParameter("feature matrix has no columns".into()));
    }
    if params.min_leaf == 0 {
        return Err(Error::InvalidParameter("min_leaf must be >= 1".into()));
    }
    let mut tree = DecisionTree {
        nodes: Vec::new(),
        n_features: x.n_cols(),
        params,
    };
    let rows: Vec<usize> = (0..x.n_rows()).collect();
    tree.grow(x, y, &rows, 0);
    Ok(tree)
}

impl DecisionTree {
    fn grow(&mut self, x: &FeatureMatrix, y: &[u8], rows: &[usize], depth: usize) -> usize {
        let n1 = rows.iter().filter(|&&r| y[r] == 1).count();
        let n0 = rows.len() - n1;
        let id = self.nodes.len();
        let p1 = n1 as f64 / rows.len() as f64;
        self.nodes.push(Node::Leaf {
            probs: [1.0 - p1, p1],
            n: rows.len(),
        });
        if depth >= self.params.max_depth || n0 == 0 || n1 == 0 || rows.len() < 2 * self.params.min_leaf {
            return id;
        }
        let Some(best) = best_split(x, y, rows, self.params.min_leaf) else {
            return id;
        };
        if best.score >= gini(n0, n1) - 1e-12 {
            return id;
        }
        let col = x.column(best.feature);
        let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| col[i] <= best.threshold);
        let left = self.grow(x, y, &l, depth + 1);
        let right = self.grow(x, y, &r, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            impurity: best.score,
            left,
            right,
        };
        id
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Feature, threshold and weighted child impurity of the root split.
    pub fn root_split(&self) -> Option<(usize, f64, f64)> {
        match self.nodes[0] {
            Node::Split {
                feature,
                threshold,
                impurity,
                ..
            } => Some((feature, threshold, impurity)),
            Node::Leaf { .. } => None,
        }
    }

    pub fn proba_row(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { probs, .. } => return probs[1],
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Probability of class 1 for each row.
    pub fn predict_proba(&self, x: &FeatureMatrix) -> Vec<f64> {
        (0..x.n_rows()).map(|i| self.proba_row(&x.row(i))).collect()
    }

    /// Class 1 when its probability is at least 0.5.
    pub fn predict(&self, x: &FeatureMatrix) -> Vec<u8> {
        self.predict_proba(x).into_iter().map(|p| u8::from(p >= 0.5)).collect()
    }
}

fn best_split(x: &FeatureMatrix, y: &[u8], rows: &[usize], min_leaf: usize) -> Option<Candidate> {
    let n = rows.len();
    let total1 = rows.iter().filter(|&&r| y[r] == 1).count();
    let mut best = None;
    for f in 0..x.n_cols() {
        let col = x.column(f);
        let s = sorted_by(x, f, rows);
        let mut l1 = 0;
        for k in 1..n {
            l1 += usize::from(y[s[k - 1]] == 1);
            let (a, b) = (col[s[k - 1]], col[s[k]]);
            if a == b || k < min_leaf || n - k < min_leaf {
                continue;
            }
            let (l0, r1) = (k - l1, total1 - l1);
            let r0 = n - k - r1;
            let score = (k as f64 * gini(l0, l1) + (n - k) as f64 * gini(r0, r1)) / n as f64;
            offer(
                &mut best,
                Candidate {
                    feature: f,
                    threshold: a + (b - a) / 2.0,
                    score,
                },
            );
        }
    }
    best
}
