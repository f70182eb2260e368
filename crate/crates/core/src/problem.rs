//! Assembles the ensemble-pruning linear program.
//!
//! Variables, per tree t: `z[t][h]` (node h becomes a leaf of the pruning),
//! `wt[t][(i,k)]` (example i pays feature k in tree t). Globally: `w[(i,k)]`
//! (example i pays feature k in any tree) and one slack per linking row.
//!
//! Constraints:
//! * per tree, one equality per original leaf: `z_h + sum_{u in pred(h)} z_u = 1`;
//! * per tree, one equality per (example, feature) first use at node u:
//!   `wt + z_u + sum_{h in pred(u)} z_h = 1`;
//! * one linking row per (tree, example, feature): `wt - w + s = 0`.
//!
//! The per-tree equality blocks become network matrices under telescoping row
//! differences as long as rows are emitted in depth-first order (the builder
//! guarantees this), which is what makes every vertex of the relaxation 0/1.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::forest::{Ensemble, NodeId, RoutingProfile};
use crate::simplex::StandardLP;

/// A first-use record: example `example` first meets feature `feature` at
/// node `node` of its tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    pub example: usize,
    pub feature: usize,
    pub node: NodeId,
}

/// One linking row `wt[tree][attach] - w[pair] + s = 0`.
#[derive(Debug, Clone, Copy)]
pub struct LinkRow {
    pub tree: usize,
    pub attach: usize,
    pub pair: usize,
}

/// Row descriptor inside a per-tree equality block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockRow {
    Leaf(NodeId),
    /// Index into the tree's attachment list.
    Attach(usize),
}

/// The assembled pruning problem. Column order: per tree its z block (node
/// order) followed by its wt block (attachment order, sorted by (example,
/// feature)); then the shared w block (sorted by (example, feature)); then
/// the slacks (one per linking row, ordered by (example, feature, tree)).
/// Row order: per-tree equality blocks in depth-first emission order, then
/// the linking rows.
#[derive(Debug, Clone)]
pub struct PruningProblem {
    pub lambda: f64,
    pub n_trees: usize,
    pub n_examples: usize,
    pub n_features: usize,

    /// Topology copies so the problem is self-contained.
    pub children: Vec<Vec<Vec<NodeId>>>,
    pub parents: Vec<Vec<Option<NodeId>>>,
    pub leaves: Vec<Vec<NodeId>>,

    pub attachments: Vec<Vec<Attachment>>,
    /// Shared (example, feature) pairs, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub links: Vec<LinkRow>,

    /// Objective coefficient of each z column: err / (N * T).
    pub err_cost: Vec<Vec<f64>>,
    /// Raw per-pair cost c_k / N; the objective coefficient is lambda times this.
    pub pair_cost_raw: Vec<f64>,

    /// Per tree: equality rows in emission order.
    pub block_rows: Vec<Vec<BlockRow>>,

    /// Per tree, attachment index -> position in `links`.
    pub attach_link: Vec<Vec<usize>>,
    /// Per tree, attachment index -> position in `pairs`.
    pub attach_pair: Vec<Vec<usize>>,
    /// Per pair: positions in `links`.
    pub pair_links: Vec<Vec<usize>>,

    z_offsets: Vec<usize>,
    wt_offsets: Vec<usize>,
    w_offset: usize,
    s_offset: usize,
    n_cols: usize,
    block_offsets: Vec<usize>,
    link_offset: usize,
    n_rows: usize,
}

/// Problem-size accounting against the a-priori bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeReport {
    pub n_trees: usize,
    pub n_examples: usize,
    pub z_vars: usize,
    pub wt_vars: usize,
    pub w_vars: usize,
    pub leaf_rows: usize,
    pub first_use_rows: usize,
    pub link_rows: usize,
    /// T * max nodes per tree.
    pub z_bound: usize,
    /// N * T * K_max, where K_max is the most features any example uses in one tree.
    pub wt_bound: usize,
    /// N * min(T * K_max, K).
    pub w_bound: usize,
    /// T * max leaves per tree + 2 * N * T * K_max.
    pub row_bound: usize,
}

impl SizeReport {
    pub fn within_bounds(&self) -> bool {
        self.z_vars <= self.z_bound
            && self.wt_vars <= self.wt_bound
            && self.w_vars <= self.w_bound
            && self.leaf_rows + self.first_use_rows + self.link_rows <= self.row_bound
    }
}

impl std::fmt::Display for SizeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "variables:")?;
        writeln!(f, "  z (node-is-leaf): {:>8}  (bound {})", self.z_vars, self.z_bound)?;
        writeln!(f, "  per-tree w:       {:>8}  (bound {})", self.wt_vars, self.wt_bound)?;
        writeln!(f, "  shared w:         {:>8}  (bound {})", self.w_vars, self.w_bound)?;
        writeln!(f, "constraints:")?;
        writeln!(f, "  leaf equalities:      {:>8}", self.leaf_rows)?;
        writeln!(f, "  first-use equalities: {:>8}", self.first_use_rows)?;
        writeln!(f, "  linking rows:         {:>8}", self.link_rows)?;
        write!(
            f,
            "  total: {} (bound {})",
            self.leaf_rows + self.first_use_rows + self.link_rows,
            self.row_bound
        )
    }
}

/// Builds the pruning problem for an ensemble with node statistics, a routing
/// profile computed on the same dataset, and a trade-off weight `lambda`.
pub fn build_ip3(ens: &Ensemble, profile: &RoutingProfile, lambda: f64) -> Result<PruningProblem> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if ens.n_trees() != profile.n_trees() {
        return Err(Error::Mismatch(format!(
            "profile covers {} trees, ensemble has {}",
            profile.n_trees(),
            ens.n_trees()
        )));
    }
    let n = profile.n_examples();
    if n == 0 {
        return Err(Error::Mismatch("routing profile has no examples".into()));
    }
    let t_count = ens.n_trees();
    for (t, tree) in ens.trees.iter().enumerate() {
        if tree.node(0).n_samples() as usize != n {
            return Err(Error::Mismatch(format!(
                "tree {t}: node statistics cover {} examples but the profile has {n}; \
                 recompute statistics on the profiled dataset",
                tree.node(0).n_samples()
            )));
        }
    }

    let nt = (n * t_count) as f64;

    let mut children = Vec::with_capacity(t_count);
    let mut parents = Vec::with_capacity(t_count);
    let mut leaves = Vec::with_capacity(t_count);
    let mut attachments: Vec<Vec<Attachment>> = Vec::with_capacity(t_count);
    let mut err_cost = Vec::with_capacity(t_count);
    for (t, tree) in ens.trees.iter().enumerate() {
        children.push((0..tree.n_nodes()).map(|h| tree.node(h).children.clone()).collect::<Vec<_>>());
        parents.push((0..tree.n_nodes()).map(|h| tree.parent(h)).collect::<Vec<_>>());
        leaves.push(tree.leaves());
        err_cost.push(
            (0..tree.n_nodes())
                .map(|h| f64::from(tree.node(h).err) / nt)
                .collect::<Vec<_>>(),
        );
        let mut list = Vec::new();
        for i in 0..n {
            for &(k, u) in &profile.tree(t).first_use[i] {
                list.push(Attachment { example: i, feature: k, node: u });
            }
        }
        list.sort_unstable_by_key(|a| (a.example, a.feature));
        attachments.push(list);
    }

    let pair_set: BTreeSet<(usize, usize)> = attachments
        .iter()
        .flat_map(|list| list.iter().map(|a| (a.example, a.feature)))
        .collect();
    let pairs: Vec<(usize, usize)> = pair_set.into_iter().collect();

    // Linking rows grouped per (example, feature), trees ascending.
    let mut links = Vec::new();
    let mut attach_link: Vec<Vec<usize>> = attachments.iter().map(|l| vec![0; l.len()]).collect();
    let mut attach_pair: Vec<Vec<usize>> = attachments.iter().map(|l| vec![0; l.len()]).collect();
    let mut pair_links: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    for (p, &(i, k)) in pairs.iter().enumerate() {
        for t in 0..t_count {
            if let Ok(a) = attachments[t].binary_search_by_key(&(i, k), |a| (a.example, a.feature)) {
                attach_link[t][a] = links.len();
                attach_pair[t][a] = p;
                pair_links[p].push(links.len());
                links.push(LinkRow { tree: t, attach: a, pair: p });
            }
        }
    }

    let pair_cost_raw: Vec<f64> =
        pairs.iter().map(|&(_, k)| ens.feature_costs[k] / n as f64).collect();

    // Per-tree equality rows in depth-first order: a node's children blocks
    // first, then its own first-use rows. This keeps every column's row
    // support contiguous, which the telescoping transformation needs.
    let mut block_rows = Vec::with_capacity(t_count);
    for t in 0..t_count {
        let mut at_node: Vec<Vec<usize>> = vec![Vec::new(); children[t].len()];
        for (a, att) in attachments[t].iter().enumerate() {
            at_node[att.node].push(a);
        }
        let mut rows = Vec::new();
        let mut stack = vec![(0usize, false)];
        while let Some((h, children_done)) = stack.pop() {
            if children[t][h].is_empty() {
                rows.push(BlockRow::Leaf(h));
                continue;
            }
            if children_done {
                for &a in &at_node[h] {
                    rows.push(BlockRow::Attach(a));
                }
            } else {
                stack.push((h, true));
                for &c in children[t][h].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        block_rows.push(rows);
    }

    // Column layout.
    let mut z_offsets = Vec::with_capacity(t_count);
    let mut wt_offsets = Vec::with_capacity(t_count);
    let mut cursor = 0;
    for t in 0..t_count {
        z_offsets.push(cursor);
        cursor += children[t].len();
        wt_offsets.push(cursor);
        cursor += attachments[t].len();
    }
    let w_offset = cursor;
    cursor += pairs.len();
    let s_offset = cursor;
    cursor += links.len();
    let n_cols = cursor;

    // Row layout.
    let mut block_offsets = Vec::with_capacity(t_count);
    let mut row_cursor = 0;
    for rows in &block_rows {
        block_offsets.push(row_cursor);
        row_cursor += rows.len();
    }
    let link_offset = row_cursor;
    let n_rows = row_cursor + links.len();

    Ok(PruningProblem {
        lambda,
        n_trees: t_count,
        n_examples: n,
        n_features: ens.n_features(),
        children,
        parents,
        leaves,
        attachments,
        pairs,
        links,
        err_cost,
        pair_cost_raw,
        block_rows,
        attach_link,
        attach_pair,
        pair_links,
        z_offsets,
        wt_offsets,
        w_offset,
        s_offset,
        n_cols,
        block_offsets,
        link_offset,
        n_rows,
    })
}

impl PruningProblem {
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn z_col(&self, t: usize, h: NodeId) -> usize {
        self.z_offsets[t] + h
    }

    pub fn wt_col(&self, t: usize, attach: usize) -> usize {
        self.wt_offsets[t] + attach
    }

    pub fn w_col(&self, pair: usize) -> usize {
        self.w_offset + pair
    }

    pub fn s_col(&self, link: usize) -> usize {
        self.s_offset + link
    }

    pub fn link_row(&self, link: usize) -> usize {
        self.link_offset + link
    }

    pub fn block_row(&self, t: usize, idx: usize) -> usize {
        self.block_offsets[t] + idx
    }

    /// Changes the trade-off weight without rebuilding the structure.
    pub fn set_lambda(&mut self, lambda: f64) -> Result<()> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        self.lambda = lambda;
        Ok(())
    }

    /// Predecessor chain of `h` in tree `t` (root first), including `h`.
    fn path_to(&self, t: usize, h: NodeId) -> Vec<NodeId> {
        let mut path = vec![h];
        let mut cur = h;
        while let Some(p) = self.parents[t][cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// The z columns participating in a block row (the row's variable chain).
    fn row_z_support(&self, t: usize, row: &BlockRow) -> Vec<NodeId> {
        match *row {
            BlockRow::Leaf(h) => self.path_to(t, h),
            BlockRow::Attach(a) => self.path_to(t, self.attachments[t][a].node),
        }
    }

    /// Assembles the sparse LP in standard equality form (min c'x, Ax = b, x >= 0).
    pub fn standard_lp(&self) -> StandardLP {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n_cols];
        let mut b = vec![0.0; self.n_rows];
        let mut cost = vec![0.0; self.n_cols];

        for t in 0..self.n_trees {
            for (h, &c) in self.err_cost[t].iter().enumerate() {
                cost[self.z_col(t, h)] = c;
            }
            for (idx, row) in self.block_rows[t].iter().enumerate() {
                let r = self.block_row(t, idx);
                b[r] = 1.0;
                for h in self.row_z_support(t, row) {
                    cols[self.z_col(t, h)].push((r, 1.0));
                }
                if let BlockRow::Attach(a) = *row {
                    cols[self.wt_col(t, a)].push((r, 1.0));
                }
            }
        }
        for (p, &raw) in self.pair_cost_raw.iter().enumerate() {
            cost[self.w_col(p)] = self.lambda * raw;
        }
        for (l, link) in self.links.iter().enumerate() {
            let r = self.link_row(l);
            cols[self.wt_col(link.tree, link.attach)].push((r, 1.0));
            cols[self.w_col(link.pair)].push((r, -1.0));
            cols[self.s_col(l)].push((r, 1.0));
        }

        StandardLP::new(self.n_rows, cols, b, cost).expect("assembled LP is well-formed")
    }

    /// A feasible starting basis: per tree, the first equality row takes the
    /// root's z column and every other row its own variable (the leaf's z or
    /// the row's wt); linking rows take their slack. The matrix is lower
    /// triangular with a unit diagonal under this assignment, and the basic
    /// point is the all-roots pruning.
    pub fn initial_basis(&self) -> Vec<usize> {
        let mut basis = vec![0usize; self.n_rows];
        for t in 0..self.n_trees {
            for (idx, row) in self.block_rows[t].iter().enumerate() {
                let r = self.block_row(t, idx);
                basis[r] = if idx == 0 {
                    self.z_col(t, 0)
                } else {
                    match *row {
                        BlockRow::Leaf(h) => self.z_col(t, h),
                        BlockRow::Attach(a) => self.wt_col(t, a),
                    }
                };
            }
        }
        for l in 0..self.links.len() {
            basis[self.link_row(l)] = self.s_col(l);
        }
        basis
    }

    /// Whether node `u` of tree `t` stays internal in the pruning whose leaf
    /// set is `leaf_set` (no node on the root..u path inclusive is in the set).
    pub fn node_internal_in_pruning(&self, t: usize, u: NodeId, leaf_set: &[NodeId]) -> bool {
        let mut cur = u;
        loop {
            if leaf_set.contains(&cur) {
                return false;
            }
            match self.parents[t][cur] {
                Some(p) => cur = p,
                None => return true,
            }
        }
    }

    /// Builds the full-space point induced by a pruning tuple: z from the
    /// leaf sets, per-tree w from the first-use logic, shared w as the
    /// cross-tree maximum and slacks as the difference.
    pub fn point_for_leaf_sets(&self, leaf_sets: &[Vec<NodeId>]) -> Vec<f64> {
        assert_eq!(leaf_sets.len(), self.n_trees);
        let mut x = vec![0.0; self.n_cols];
        for t in 0..self.n_trees {
            for &h in &leaf_sets[t] {
                x[self.z_col(t, h)] = 1.0;
            }
            for (a, att) in self.attachments[t].iter().enumerate() {
                if self.node_internal_in_pruning(t, att.node, &leaf_sets[t]) {
                    x[self.wt_col(t, a)] = 1.0;
                }
            }
        }
        for (l, link) in self.links.iter().enumerate() {
            let wt = x[self.wt_col(link.tree, link.attach)];
            let w = self.w_col(link.pair);
            if wt > x[w] {
                x[w] = wt;
            }
            let _ = l;
        }
        for (l, link) in self.links.iter().enumerate() {
            x[self.s_col(l)] = x[self.w_col(link.pair)] - x[self.wt_col(link.tree, link.attach)];
        }
        x
    }

    /// Splits a point's objective into (error term, raw cost term); the full
    /// objective is `error + lambda * cost`.
    pub fn decompose(&self, x: &[f64]) -> (f64, f64) {
        let mut err = 0.0;
        for t in 0..self.n_trees {
            for (h, &c) in self.err_cost[t].iter().enumerate() {
                err += c * x[self.z_col(t, h)];
            }
        }
        let mut cost = 0.0;
        for (p, &raw) in self.pair_cost_raw.iter().enumerate() {
            cost += raw * x[self.w_col(p)];
        }
        (err, cost)
    }

    pub fn objective_of(&self, x: &[f64]) -> f64 {
        let (err, cost) = self.decompose(x);
        err + self.lambda * cost
    }

    /// Exact size counts and the corresponding a-priori bounds.
    pub fn size_report(&self) -> SizeReport {
        let z_vars: usize = self.children.iter().map(Vec::len).sum();
        let wt_vars: usize = self.attachments.iter().map(Vec::len).sum();
        let w_vars = self.pairs.len();
        let leaf_rows: usize = self.leaves.iter().map(Vec::len).sum();
        let first_use_rows = wt_vars;
        let link_rows = self.links.len();

        let max_nodes = self.children.iter().map(Vec::len).max().unwrap_or(0);
        let max_leaves = self.leaves.iter().map(Vec::len).max().unwrap_or(0);
        let mut k_max = 0usize;
        for t in 0..self.n_trees {
            let mut per_example = vec![0usize; self.n_examples];
            for att in &self.attachments[t] {
                per_example[att.example] += 1;
            }
            k_max = k_max.max(per_example.iter().copied().max().unwrap_or(0));
        }

        let n = self.n_examples;
        let t = self.n_trees;
        SizeReport {
            n_trees: t,
            n_examples: n,
            z_vars,
            wt_vars,
            w_vars,
            leaf_rows,
            first_use_rows,
            link_rows,
            z_bound: t * max_nodes,
            wt_bound: n * t * k_max,
            w_bound: n * (t * k_max).min(self.n_features),
            row_bound: t * max_leaves + 2 * n * t * k_max,
        }
    }

    /// Dense per-tree equality block: one row per block row, one column per
    /// tree-local variable (z's then wt's), entries 0/1.
    pub fn block_matrix(&self, t: usize) -> DenseIntMatrix {
        let n_nodes = self.children[t].len();
        let n_cols = n_nodes + self.attachments[t].len();
        let mut m = DenseIntMatrix::zero(self.block_rows[t].len(), n_cols);
        for (r, row) in self.block_rows[t].iter().enumerate() {
            for h in self.row_z_support(t, row) {
                m.set(r, h, 1);
            }
            if let BlockRow::Attach(a) = *row {
                m.set(r, n_nodes + a, 1);
            }
        }
        m
    }

    /// Column labels of a tree block, numbered cumulatively across trees
    /// (1-based) so dumps of multi-tree problems stay unambiguous.
    pub fn block_col_labels(&self, t: usize) -> Vec<String> {
        let base: usize = self.children[..t].iter().map(Vec::len).sum();
        let mut labels: Vec<String> =
            (0..self.children[t].len()).map(|h| format!("z{}", base + h + 1)).collect();
        for att in &self.attachments[t] {
            labels.push(format!("w({})_{},{}", t + 1, att.feature + 1, att.example + 1));
        }
        labels
    }
}

/// Small dense integer matrix used for constraint-block dumps and the
/// network-form checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i32>,
}

impl DenseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseIntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c));
        DenseIntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, r: usize, c: usize) -> i32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Renders the matrix as an aligned text grid with row/column labels.
    pub fn render(&self, row_labels: &[String], col_labels: &[String]) -> String {
        let mut widths: Vec<usize> = col_labels.iter().map(String::len).collect();
        for r in 0..self.rows {
            for c in 0..self.cols {
                widths[c] = widths[c].max(self.get(r, c).to_string().len());
            }
        }
        let label_w = row_labels.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        out.push_str(&" ".repeat(label_w));
        for (c, lab) in col_labels.iter().enumerate() {
            out.push_str(&format!("  {lab:>w$}", w = widths[c]));
        }
        out.push('\n');
        for r in 0..self.rows {
            out.push_str(&format!("{:>label_w$}", row_labels[r]));
            for c in 0..self.cols {
                out.push_str(&format!("  {:>w$}", self.get(r, c), w = widths[c]));
            }
            out.push('\n');
        }
        out
    }
}

/// One tree's equality block in network-matrix form: the original 0/1 rows,
/// the transformed rows after the telescoping differences, the recorded row
/// operations and the transformed right-hand side.
#[derive(Debug, Clone)]
pub struct TreeNetworkForm {
    pub tree: usize,
    pub original: DenseIntMatrix,
    pub transformed: DenseIntMatrix,
    pub col_labels: Vec<String>,
    pub row_ops: Vec<RowOp>,
    pub rhs: Vec<i32>,
}

/// How each transformed row was obtained from the original rows (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    /// `-r[first]`
    Negate(usize),
    /// `r[i] - r[i+1]`
    Diff(usize, usize),
    /// `r[last]` appended to close the telescope.
    Keep(usize),
}

impl RowOp {
    pub fn label(&self) -> String {
        match *self {
            RowOp::Negate(i) => format!("-r{}", i + 1),
            RowOp::Diff(i, j) => format!("r{}-r{}", i + 1, j + 1),
            RowOp::Keep(i) => format!("r{}", i + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NetworkForm {
    pub trees: Vec<TreeNetworkForm>,
}

impl NetworkForm {
    /// Structural check: every column of every transformed block must hold
    /// exactly one +1 and one -1 and nothing else.
    pub fn check(&self) -> Result<()> {
        for block in &self.trees {
            let m = &block.transformed;
            for c in 0..m.cols {
                let mut pos = 0;
                let mut neg = 0;
                for r in 0..m.rows {
                    match m.get(r, c) {
                        0 => {}
                        1 => pos += 1,
                        -1 => neg += 1,
                        v => {
                            return Err(Error::Audit(format!(
                                "tree {}: transformed entry ({r},{c}) is {v}, expected -1/0/1",
                                block.tree
                            )))
                        }
                    }
                }
                if pos != 1 || neg != 1 {
                    return Err(Error::Audit(format!(
                        "tree {}: column {c} has {pos} entries +1 and {neg} entries -1; \
                         a network matrix needs exactly one of each",
                        block.tree
                    )));
                }
            }
        }
        Ok(())
    }

    /// Text dump of the original and transformed blocks of every tree.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for block in &self.trees {
            out.push_str(&format!("tree {} equality block:\n", block.tree + 1));
            let row_labels: Vec<String> =
                (0..block.original.rows).map(|r| format!("r{}", r + 1)).collect();
            out.push_str(&block.original.render(&row_labels, &block.col_labels));
            out.push_str("network form:\n");
            let t_labels: Vec<String> = block.row_ops.iter().map(RowOp::label).collect();
            out.push_str(&block.transformed.render(&t_labels, &block.col_labels));
            out.push('\n');
        }
        out
    }
}

/// Applies the telescoping row operations to every per-tree equality block.
/// With m original rows the result has m + 1 rows: `-r1`, `r1-r2`, ...,
/// `r(m-1)-rm`, `rm`, with right-hand side (-1, 0, ..., 0, 1).
pub fn to_network_form(problem: &PruningProblem) -> NetworkForm {
    let trees = (0..problem.n_trees)
        .map(|t| {
            let original = problem.block_matrix(t);
            let m = original.rows;
            let cols = original.cols;
            let mut transformed = DenseIntMatrix::zero(m + 1, cols);
            let mut row_ops = Vec::with_capacity(m + 1);
            let mut rhs = Vec::with_capacity(m + 1);
            for c in 0..cols {
                transformed.set(0, c, -original.get(0, c));
            }
            row_ops.push(RowOp::Negate(0));
            rhs.push(-1);
            for r in 1..m {
                for c in 0..cols {
                    transformed.set(r, c, original.get(r - 1, c) - original.get(r, c));
                }
                row_ops.push(RowOp::Diff(r - 1, r));
                rhs.push(0);
            }
            for c in 0..cols {
                transformed.set(m, c, original.get(m - 1, c));
            }
            row_ops.push(RowOp::Keep(m - 1));
            rhs.push(1);
            TreeNetworkForm {
                tree: t,
                original,
                transformed,
                col_labels: problem.block_col_labels(t),
                row_ops,
                rhs,
            }
        })
        .collect();
    NetworkForm { trees }
}
