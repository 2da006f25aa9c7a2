//! Small undirected graphs on vertices `0..n`: components, spanning forests,
//! simple-cycle enumeration and a valuation-based cycle-product test.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Support graph of a square matrix: `i ~ j` iff entry `(i, j)` is nonzero, `i ≠ j`.
    pub fn support(m: &Matrix) -> Self {
        let n = m.rows();
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if !m[(i, j)].is_zero() || !m[(j, i)].is_zero() {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "loops are not allowed");
        if let Err(pos) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(pos, b);
        }
        if let Err(pos) = self.adj[b].binary_search(&a) {
            self.adj[b].insert(pos, a);
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.order() > 0 && self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.order()
    }

    /// Breadth-first spanning forest; each component is rooted at its smallest
    /// vertex and neighbors are visited in increasing order.
    pub fn bfs_forest(&self) -> SpanningForest {
        let n = self.order();
        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        SpanningForest {
            parent,
            depth,
            order,
        }
    }

    /// All simple cycles of length `2..=max_len`.
    ///
    /// An edge counts as a cycle of length 2. Each cycle is reported once, as
    /// the vertex sequence starting at its smallest vertex with the second
    /// vertex smaller than the last. Output is sorted by length, then
    /// lexicographically. Returns `Err(limit)` as soon as more than `limit`
    /// cycles have been found.
    pub fn simple_cycles(&self, max_len: usize, limit: usize) -> Result<Vec<Vec<usize>>, usize> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        if max_len >= 2 {
            for e in self.edges() {
                out.push(vec![e.0, e.1]);
                if out.len() > limit {
                    return Err(limit);
                }
            }
        }
        if max_len >= 3 {
            let n = self.order();
            let mut on_path = vec![false; n];
            for start in 0..n {
                let mut path = vec![start];
                on_path[start] = true;
                self.extend_cycles(start, max_len, limit, &mut path, &mut on_path, &mut out)?;
                on_path[start] = false;
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn extend_cycles(
        &self,
        start: usize,
        max_len: usize,
        limit: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), usize> {
        let last = *path.last().unwrap();
        for &w in &self.adj[last] {
            if w == start && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
                if out.len() > limit {
                    return Err(limit);
                }
            } else if w > start && !on_path[w] && path.len() < max_len {
                path.push(w);
                on_path[w] = true;
                self.extend_cycles(start, max_len, limit, path, on_path, out)?;
                on_path[w] = false;
                path.pop();
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SpanningForest {
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    /// Vertices in visiting order (roots precede their descendants).
    pub order: Vec<usize>,
}

impl SpanningForest {
    pub fn is_tree_edge(&self, a: usize, b: usize) -> bool {
        self.parent[a] == Some(b) || self.parent[b] == Some(a)
    }

    /// Cycle closed by the non-tree edge `(a, b)`: the tree path from `a` to
    /// `b`, so that `b → a` completes it.
    pub fn fundamental_cycle(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while x != y {
            if self.depth[x] >= self.depth[y] {
                x = self.parent[x].expect("vertices in different trees");
                left.push(x);
            } else {
                y = self.parent[y].expect("vertices in different trees");
                right.push(y);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }
}

/// Rotates a cycle to start at its minimum and orients it so that the second
/// vertex is smaller than the last.
pub fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let k = cycle.len();
    let pos = (0..k).min_by_key(|&i| cycle[i]).unwrap_or(0);
    let mut c: Vec<usize> = (0..k).map(|i| cycle[(pos + i) % k]).collect();
    if k > 2 && c[1] > c[k - 1] {
        c[1..].reverse();
    }
    c
}

/// Product `m[c0][c1]·m[c1][c2]⋯m[c_{k-1}][c0]`.
pub fn cycle_product(m: &Matrix, cycle: &[usize]) -> Rational {
    let k = cycle.len();
    (0..k).fold(Rational::one(), |acc, i| acc * &m[(cycle[i], cycle[(i + 1) % k])])
}

/// Looks for a simple cycle (length ≥ 2) of the support graph of `m` whose
/// product is not an integer.
///
/// Rather than enumerating cycles, this works prime by prime: the product
/// around a cycle is an integer iff, for every prime, the sum of the
/// valuations of its entries is non-negative. With valuations as arc weights
/// on the (symmetric) support digraph, a bad cycle is a negative cycle, found
/// by Bellman–Ford. Primes come from a coprime base of all numerators and
/// denominators, so no integer factorization is needed.
pub fn non_integral_cycle(m: &Matrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut arcs: Vec<(usize, usize, &Rational)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !m[(i, j)].is_zero() {
                arcs.push((i, j, &m[(i, j)]));
            }
        }
    }
    if arcs.iter().all(|(_, _, x)| x.is_integer()) {
        return None;
    }
    let mut pool: Vec<BigInt> = Vec::new();
    for (_, _, x) in &arcs {
        pool.push(x.numer().abs());
        pool.push(x.denom().clone());
    }
    let base = coprime_base(pool);
    for b in &base {
        if !arcs.iter().any(|(_, _, x)| x.denom().is_multiple_of(b)) {
            continue;
        }
        let weighted: Vec<(usize, usize, i64)> = arcs
            .iter()
            .map(|&(i, j, x)| (i, j, valuation(x.numer(), b) - valuation(x.denom(), b)))
            .collect();
        if let Some(c) = negative_cycle(n, &weighted) {
            return Some(c);
        }
    }
    None
}

fn valuation(x: &BigInt, b: &BigInt) -> i64 {
    let mut x = x.abs();
    let mut v = 0;
    if x.is_zero() {
        return 0;
    }
    loop {
        let (quo, rem) = x.div_rem(b);
        if !rem.is_zero() {
            return v;
        }
        x = quo;
        v += 1;
    }
}

/// Pairwise coprime integers > 1 such that every input is, up to sign, a
/// product of powers of them.
fn coprime_base(values: Vec<BigInt>) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = values.into_iter().filter(|v| *v > BigInt::one()).collect();
    base.sort();
    base.dedup();
    loop {
        let mut changed = false;
        'outer: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if g.is_one() {
                    continue;
                }
                let (a, b) = (base[i].clone(), base[j].clone());
                base.swap_remove(j);
                base.swap_remove(i);
                for x in [&a / &g, &b / &g, g] {
                    if x > BigInt::one() {
                        base.push(x);
                    }
                }
                base.sort();
                base.dedup();
                changed = true;
                break 'outer;
            }
        }
        if !changed {
            return base;
        }
    }
}

fn negative_cycle(n: usize, arcs: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    let mut dist = vec![0i64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut touched = None;
    for _ in 0..n {
        touched = None;
        for &(a, b, w) in arcs {
            if dist[a] + w < dist[b] {
                dist[b] = dist[a] + w;
                pred[b] = Some(a);
                touched = Some(b);
            }
        }
        touched?;
    }
    let mut v = touched?;
    for _ in 0..n {
        v = pred[v].expect("relaxed vertex has a predecessor");
    }
    let mut cycle = vec![v];
    let mut u = pred[v].unwrap();
    while u != v {
        cycle.push(u);
        u = pred[u].unwrap();
    }
    // The predecessor walk runs against the arcs.
    cycle.reverse();
    Some(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};

    fn cycle_graph(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn components_and_trees() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(Graph::from_edges(3, [(0, 1), (1, 2)]).is_tree());
        assert!(!cycle_graph(4).is_tree());
    }

    #[test]
    fn cycles_of_complete_graph() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let c = k4.simple_cycles(4, 1000).unwrap();
        // 6 edges, 4 triangles, 3 four-cycles.
        assert_eq!(c.len(), 13);
        assert_eq!(c[6], vec![0, 1, 2]);
        assert!(c.iter().all(|cy| canonical_cycle(cy) == *cy));
        assert_eq!(k4.simple_cycles(4, 5), Err(5));
    }

    #[test]
    fn fundamental_cycle_closes_up() {
        let g = cycle_graph(5);
        let f = g.bfs_forest();
        let (a, b) = g
            .edges()
            .into_iter()
            .find(|&(a, b)| !f.is_tree_edge(a, b))
            .unwrap();
        let c = f.fundamental_cycle(a, b);
        assert_eq!(c.len(), 5);
        assert_eq!(canonical_cycle(&c), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn valuation_test_finds_fractional_cycles() {
        let m = Matrix::from_rows(vec![
            vec![q(2), q_frac(-1, 2), q(0)],
            vec![q(-3), q(2), q(-1)],
            vec![q(0), q(-1), q(2)],
        ]);
        let c = non_integral_cycle(&m).unwrap();
        assert!(!cycle_product(&m, &c).is_integer());

        let ok = Matrix::from_rows(vec![vec![q(2), q_frac(-1, 2)], vec![q(-2), q(2)]]);
        assert_eq!(non_integral_cycle(&ok), None);
    }

    #[test]
    fn coprime_base_refines() {
        let b = coprime_base(vec![BigInt::from(12), BigInt::from(18)]);
        for (i, x) in b.iter().enumerate() {
            for y in &b[i + 1..] {
                assert!(x.gcd(y).is_one());
            }
        }
    }
}
