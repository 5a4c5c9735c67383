//! Admissible discrete vector fields on a GF(2) matrix.
//!
//! A vector is a pair `(row, col)` with `m[row][col] = 1`; rows and columns
//! are each used at most once. Every vector `(r, c)` induces the relation
//! edges `r -> r'` for all other rows `r'` with `m[r'][c] = 1`. The field is
//! admissible when those edges form a DAG.

use std::fmt;

use crate::gf2::Gf2Matrix;
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteVectorField {
    rows: usize,
    cols: usize,
    /// `(row, col)` vectors.
    pub pairs: Vec<(usize, usize)>,
    /// `lambda[i]` belongs to `pairs[i]`.
    pub lambda: Vec<usize>,
    /// Relation edges `(r, r')`, meaning `r > r'`.
    pub relation: Vec<(usize, usize)>,
}

impl DiscreteVectorField {
    /// Shape of the matrix the field was built on.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True when `lambda` is non-increasing along `pairs`, ties ordered by
    /// ascending row.
    pub fn is_sorted(&self) -> bool {
        self.pairs
            .iter()
            .zip(&self.lambda)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| {
                let ((ra, _), la) = w[0];
                let ((rb, _), lb) = w[1];
                la > lb || (la == lb && ra < rb)
            })
    }

    /// Rows that are not the source of any vector, ascending.
    pub fn critical_rows(&self) -> Vec<usize> {
        let mut used = vec![false; self.rows];
        for &(r, _) in &self.pairs {
            used[r] = true;
        }
        (0..self.rows).filter(|&r| !used[r]).collect()
    }

    /// Columns that are not the target of any vector, ascending.
    pub fn critical_cols(&self) -> Vec<usize> {
        let mut used = vec![false; self.cols];
        for &(_, c) in &self.pairs {
            used[c] = true;
        }
        (0..self.cols).filter(|&c| !used[c]).collect()
    }

    /// The text dump: one `r c lambda` line per vector, then one `r -> r'`
    /// line per relation edge.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DiscreteVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(r, c), l) in self.pairs.iter().zip(&self.lambda) {
            writeln!(f, "{r} {c} {l}")?;
        }
        for &(a, b) in &self.relation {
            writeln!(f, "{a} -> {b}")?;
        }
        Ok(())
    }
}

/// Builds a discrete vector field by scanning rows in increasing order and
/// taking, for each row, the first unused column with a 1 whose induced
/// relation edges keep the relation acyclic.
///
/// The returned field is unsorted: `pairs` are in row order and `lambda`
/// holds the longest-path lengths.
pub fn rs_algorithm(m: &Gf2Matrix) -> DiscreteVectorField {
    let (nrows, ncols) = m.shape();
    let columns = m.transpose();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    let mut col_used = vec![false; ncols];
    let mut pairs = Vec::new();

    let mut reaches_row = vec![false; nrows];
    let mut stack = Vec::new();
    let mut touched = Vec::new();

    for i in 0..nrows {
        // Row `i` is unpaired, so it has no outgoing edges yet and any new
        // loop must run i -> k ~> i. Mark every row that reaches `i`.
        for &t in &touched {
            reaches_row[t] = false;
        }
        touched.clear();
        reaches_row[i] = true;
        touched.push(i);
        stack.push(i);
        while let Some(v) = stack.pop() {
            for &u in &in_edges[v] {
                if !reaches_row[u] {
                    reaches_row[u] = true;
                    touched.push(u);
                    stack.push(u);
                }
            }
        }

        for j in m.row_ones(i) {
            if col_used[j] {
                continue;
            }
            if columns.row_ones(j).any(|k| k != i && reaches_row[k]) {
                continue;
            }
            for k in columns.row_ones(j).filter(|&k| k != i) {
                out_edges[i].push(k);
                in_edges[k].push(i);
            }
            col_used[j] = true;
            pairs.push((i, j));
            break;
        }
    }

    let depth = longest_paths(&out_edges).expect("relation built acyclic");
    let lambda = pairs.iter().map(|&(r, _)| depth[r]).collect();
    let relation = pairs
        .iter()
        .flat_map(|&(r, _)| {
            let mut targets = out_edges[r].clone();
            targets.sort_unstable();
            targets.into_iter().map(move |t| (r, t))
        })
        .collect();

    DiscreteVectorField {
        rows: nrows,
        cols: ncols,
        pairs,
        lambda,
        relation,
    }
}

/// Longest outgoing path length (in edges) for every node, by dynamic
/// programming over a Kahn topological order. `None` if there is a cycle.
fn longest_paths(out_edges: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = out_edges.len();
    let mut indegree = vec![0usize; n];
    for targets in out_edges {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &t in &out_edges[v] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                order.push(t);
            }
        }
    }
    if order.len() != n {
        return None;
    }
    let mut depth = vec![0usize; n];
    for &v in order.iter().rev() {
        depth[v] = out_edges[v]
            .iter()
            .map(|&t| depth[t] + 1)
            .max()
            .unwrap_or(0);
    }
    Some(depth)
}

/// Reorders the vectors by decreasing `lambda`, ties by ascending row.
pub fn sort_by_lambda(vf: &DiscreteVectorField) -> DiscreteVectorField {
    let mut idx: Vec<usize> = (0..vf.pairs.len()).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(vf.lambda[i]), vf.pairs[i].0));
    let pairs: Vec<_> = idx.iter().map(|&i| vf.pairs[i]).collect();
    let lambda = idx.iter().map(|&i| vf.lambda[i]).collect();

    let mut relation = vf.relation.clone();
    let pos: std::collections::HashMap<usize, usize> = pairs
        .iter()
        .enumerate()
        .map(|(p, &(r, _))| (r, p))
        .collect();
    relation.sort_by_key(|&(a, b)| (pos.get(&a).copied().unwrap_or(usize::MAX), b));

    DiscreteVectorField {
        rows: vf.rows,
        cols: vf.cols,
        pairs,
        lambda,
        relation,
    }
}

/// Re-validates a vector field against `m` from scratch.
pub fn check_admissible(m: &Gf2Matrix, vf: &DiscreteVectorField) -> VerificationReport {
    let mut report = VerificationReport::new();
    let (nrows, ncols) = m.shape();

    report.record("shape matches", vf.shape() == m.shape());
    let in_range = vf.pairs.iter().all(|&(r, c)| r < nrows && c < ncols);
    report.record("pairs in range", in_range);
    report.record("lambda per pair", vf.lambda.len() == vf.pairs.len());
    if !in_range {
        return report;
    }

    report.record("entries are 1", vf.pairs.iter().all(|&(r, c)| m.get(r, c)));

    let mut rows: Vec<usize> = vf.pairs.iter().map(|p| p.0).collect();
    rows.sort_unstable();
    rows.dedup();
    report.record("sources distinct", rows.len() == vf.pairs.len());
    let mut cols: Vec<usize> = vf.pairs.iter().map(|p| p.1).collect();
    cols.sort_unstable();
    cols.dedup();
    report.record("targets distinct", cols.len() == vf.pairs.len());

    let mut expected: Vec<(usize, usize)> = vf
        .pairs
        .iter()
        .flat_map(|&(r, c)| {
            (0..nrows)
                .filter(move |&k| k != r && m.get(k, c))
                .map(move |k| (r, k))
        })
        .collect();
    expected.sort_unstable();
    expected.dedup();
    let mut given = vf.relation.clone();
    given.sort_unstable();
    let relation_in_range = given.iter().all(|&(a, b)| a < nrows && b < nrows);
    report.record("relation matches vectors", expected == given);

    let mut out_edges = vec![Vec::new(); nrows];
    if relation_in_range {
        for &(a, b) in &vf.relation {
            out_edges[a].push(b);
        }
    }
    let acyclic = relation_in_range && topological_order(&out_edges).is_some();
    report.record("no loop", acyclic);

    if acyclic && vf.lambda.len() == vf.pairs.len() {
        let depth = relaxed_longest_paths(&out_edges);
        report.record(
            "lambda is longest path",
            vf.pairs
                .iter()
                .zip(&vf.lambda)
                .all(|(&(r, _), &l)| depth[r] == l),
        );
    } else {
        report.record("lambda is longest path", false);
    }
    report
}

/// Depth-first topological sort; `None` on a cycle.
fn topological_order(out_edges: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = out_edges.len();
    let mut mark = vec![Mark::New; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&t) = out_edges[v].get(*next) {
                *next += 1;
                match mark[t] {
                    Mark::Open => return None,
                    Mark::New => {
                        mark[t] = Mark::Open;
                        stack.push((t, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                order.push(v);
                stack.pop();
            }
        }
    }
    order.reverse();
    Some(order)
}

/// Longest paths by repeated relaxation until nothing changes; only valid
/// on a DAG, where it stabilises within `n` rounds.
fn relaxed_longest_paths(out_edges: &[Vec<usize>]) -> Vec<usize> {
    let n = out_edges.len();
    let mut depth = vec![0usize; n];
    for _ in 0..=n {
        let mut changed = false;
        for v in 0..n {
            for &t in &out_edges[v] {
                if depth[t] + 1 > depth[v] {
                    depth[v] = depth[t] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]], cols: usize) -> Gf2Matrix {
        Gf2Matrix::from_rows(rows, cols).unwrap()
    }

    #[test]
    fn zero_matrix_gives_empty_field() {
        let vf = rs_algorithm(&Gf2Matrix::zeros(3, 4));
        assert!(vf.is_empty());
        assert!(vf.relation.is_empty());
        assert!(check_admissible(&Gf2Matrix::zeros(3, 4), &vf).all_passed());
    }

    #[test]
    fn identity_pairs_the_diagonal() {
        let i3 = Gf2Matrix::identity(3);
        let vf = rs_algorithm(&i3);
        assert_eq!(vf.pairs, vec![(0, 0), (1, 1), (2, 2)]);
        assert!(vf.relation.is_empty());
        assert_eq!(vf.lambda, vec![0, 0, 0]);
    }

    #[test]
    fn all_ones_rejects_the_loop() {
        let a = m(&[&[1, 1], &[1, 1]], 2);
        let vf = rs_algorithm(&a);
        assert_eq!(vf.pairs, vec![(0, 0)]);
        assert_eq!(vf.relation, vec![(0, 1)]);
        assert_eq!(vf.lambda, vec![1]);
        assert!(check_admissible(&a, &vf).all_passed());
        assert_eq!(vf.to_text(), "0 0 1\n0 -> 1\n");
    }

    #[test]
    fn duplicated_source_is_caught() {
        let a = Gf2Matrix::identity(2);
        let mut vf = rs_algorithm(&a);
        vf.pairs[1] = (0, 1);
        let a = m(&[&[1, 1], &[0, 1]], 2);
        let report = check_admissible(&a, &vf);
        assert!(report.failures().any(|f| f == "sources distinct"));
    }

    #[test]
    fn two_cycle_is_caught() {
        let a = m(&[&[1, 1], &[1, 1]], 2);
        let mut vf = rs_algorithm(&a);
        vf.relation.push((1, 0));
        let report = check_admissible(&a, &vf);
        assert!(report.failures().any(|f| f == "no loop"));
        assert!(report.failures().any(|f| f == "relation matches vectors"));
    }

    #[test]
    fn wrong_lambda_is_caught() {
        let a = m(&[&[1, 1], &[1, 1]], 2);
        let mut vf = rs_algorithm(&a);
        vf.lambda[0] = 0;
        let report = check_admissible(&a, &vf);
        assert_eq!(
            report.failures().collect::<Vec<_>>(),
            vec!["lambda is longest path"]
        );
    }

    #[test]
    fn zero_entry_is_caught() {
        let a = Gf2Matrix::identity(2);
        let mut vf = rs_algorithm(&a);
        vf.pairs[0] = (0, 1);
        vf.pairs[1] = (1, 0);
        assert!(check_admissible(&a, &vf)
            .failures()
            .any(|f| f == "entries are 1"));
    }

    #[test]
    fn sort_ties_by_row() {
        let vf = rs_algorithm(&Gf2Matrix::identity(4));
        let sorted = sort_by_lambda(&vf);
        assert_eq!(sorted.pairs, vf.pairs);
        assert!(sorted.is_sorted());
    }

    #[test]
    fn sort_single_pair_unchanged() {
        let vf = rs_algorithm(&m(&[&[1, 1], &[1, 1]], 2));
        assert_eq!(sort_by_lambda(&vf), vf);
    }

    #[test]
    fn sort_orders_by_decreasing_lambda() {
        // Row 0 pairs with column 0 and reaches row 2 through it; row 1 pairs
        // with column 1 and reaches row 0; row 2 pairs with column 2 alone.
        // The chain 1 -> 0 -> 2 gives lambda (1, 2, 0).
        let a = m(&[&[1, 1, 0], &[0, 1, 0], &[1, 0, 1]], 3);
        let vf = rs_algorithm(&a);
        assert_eq!(vf.pairs, vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(vf.relation, vec![(0, 2), (1, 0)]);
        assert_eq!(vf.lambda, vec![1, 2, 0]);
        assert!(check_admissible(&a, &vf).all_passed());

        let sorted = sort_by_lambda(&vf);
        assert_eq!(sorted.pairs, vec![(1, 1), (0, 0), (2, 2)]);
        assert_eq!(sorted.lambda, vec![2, 1, 0]);
        assert_eq!(sorted.relation, vec![(1, 0), (0, 2)]);
        assert!(check_admissible(&a, &sorted).all_passed());
    }

    #[test]
    fn critical_cells() {
        let vf = rs_algorithm(&m(&[&[1, 1], &[1, 1]], 2));
        assert_eq!(vf.critical_rows(), vec![1]);
        assert_eq!(vf.critical_cols(), vec![1]);
    }

    #[test]
    fn topo_and_relaxation_agree_with_kahn() {
        let edges = vec![vec![1, 2], vec![3], vec![3], vec![], vec![0]];
        assert_eq!(longest_paths(&edges), Some(vec![2, 1, 1, 0, 3]));
        assert_eq!(relaxed_longest_paths(&edges), vec![2, 1, 1, 0, 3]);
        assert!(topological_order(&edges).is_some());
        let cyc = vec![vec![1], vec![0]];
        assert!(longest_paths(&cyc).is_none());
        assert!(topological_order(&cyc).is_none());
    }
}
