//! Brute-force dimension of the bound path algebra, independent of normal forms.
//!
//! For every pair of vertices the paths between them span a vector space; the
//! ideal is spanned by all `u · r · w` with `r` a relation element and `u`, `w`
//! paths. Its dimension is read off an exact rank.

use std::collections::HashMap;

use num_traits::Zero;

use super::linalg::{Matrix, Q};
use crate::quiver::{BoundQuiver, Relation};

type Ids = Vec<usize>;

/// All paths, indexed as `paths[s][t]`.
fn all_paths(bq: &BoundQuiver) -> Vec<Vec<Vec<Ids>>> {
    let n = bq.vertices().len();
    let mut out_arrows: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, a) in bq.arrows().iter().enumerate() {
        let s = bq.vertex_id(a.source).expect("vertex");
        let t = bq.vertex_id(a.target).expect("vertex");
        out_arrows[s].push((k, t));
    }
    let mut paths = vec![vec![Vec::new(); n]; n];
    for s in 0..n {
        let mut stack: Vec<(Ids, usize)> = vec![(Vec::new(), s)];
        while let Some((w, t)) = stack.pop() {
            for &(a, next) in &out_arrows[t] {
                let mut w2 = w.clone();
                w2.push(a);
                stack.push((w2, next));
            }
            paths[s][t].push(w);
        }
    }
    paths
}

/// Number of paths (trivial ones included), saturating.
pub fn total_path_count(bq: &BoundQuiver) -> u128 {
    let n = bq.vertices().len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for a in bq.arrows() {
        let s = bq.vertex_id(a.source).expect("vertex");
        let t = bq.vertex_id(a.target).expect("vertex");
        preds[t].push(s);
        indeg[t] += 1;
    }
    // paths ending at t = 1 + sum over arrows into t of paths ending at the source
    let mut order = Vec::new();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, ps) in preds.iter().enumerate() {
        for &s in ps {
            succ[s].push(t);
        }
    }
    while let Some(v) = ready.pop() {
        order.push(v);
        for &t in &succ[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(t);
            }
        }
    }
    let mut ending = vec![0u128; n];
    for &v in &order {
        ending[v] = preds[v].iter().fold(1u128, |acc, &s| acc.saturating_add(ending[s]));
    }
    ending.iter().fold(0u128, |a, b| a.saturating_add(*b))
}

/// `dim_k kQ/I` by exact rank computations.
pub fn algebra_dim_oracle(bq: &BoundQuiver) -> usize {
    let n = bq.vertices().len();
    let paths = all_paths(bq);
    let ids = |p: &crate::quiver::Path| -> Ids { p.arrows.iter().map(|a| bq.arrow_id(*a).expect("arrow")).collect() };
    // relation elements as signed combinations of words, with their endpoints
    let mut elements: Vec<(usize, usize, Vec<(Ids, i64)>)> = Vec::new();
    for rel in bq.relations() {
        let a = bq.vertex_id(rel.source()).expect("vertex");
        let b = bq.vertex_id(rel.target()).expect("vertex");
        let terms = match rel {
            Relation::ZeroPath(_, p) => vec![(ids(p), 1)],
            Relation::Commutativity(p1, p2) => vec![(ids(p1), 1), (ids(p2), -1)],
        };
        elements.push((a, b, terms));
    }
    let mut dim = 0;
    for s in 0..n {
        for t in 0..n {
            let basis = &paths[s][t];
            if basis.is_empty() {
                continue;
            }
            let col: HashMap<&Ids, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut rows: Vec<Vec<Q>> = Vec::new();
            for (a, b, terms) in &elements {
                for u in &paths[s][*a] {
                    for w in &paths[*b][t] {
                        let mut row = vec![Q::zero(); basis.len()];
                        for (mid, sign) in terms {
                            let word: Ids = u.iter().chain(mid).chain(w).copied().collect();
                            let c = col[&word];
                            row[c] += Q::from_integer(*sign);
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
            let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(&rows, basis.len()).rank() };
            dim += basis.len() - rank;
        }
    }
    dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::basis::Algebra;
    use crate::system::{example_e1, DefiningSystem};

    #[test]
    fn relation_free_counts_paths() {
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        let bq = BoundQuiver::build(&ds);
        assert_eq!(total_path_count(&bq), 11);
        assert_eq!(algebra_dim_oracle(&bq), 11);
    }

    #[test]
    fn e1_matches_normal_forms() {
        let a = Algebra::new(&example_e1()).unwrap();
        assert_eq!(algebra_dim_oracle(a.quiver()), a.dim());
    }

    #[test]
    fn completion_example_matches() {
        let ds = DefiningSystem::new_valid(vec![3], vec![1], vec![vec![2, 4]], vec![vec![2]]).unwrap();
        let a = Algebra::new(&ds).unwrap();
        assert_eq!(algebra_dim_oracle(a.quiver()), a.dim());
    }
}
