//! Fill-reducing symmetric orderings for the sparse LU.
//!
//! Nested dissection by level-structure bisection: a breadth-first search
//! from a pseudo-peripheral node splits the graph at its middle level, the
//! two halves are ordered recursively and the separator goes last. On the
//! lattice-like patterns of Liouvillians this cuts fill by an order of
//! magnitude compared with the natural (banded) order.

use super::sparse::SparseComplexMatrix;

/// Tag of nodes that already have a position in the order.
const DONE: usize = usize::MAX - 1;

/// Subgraphs at or below this size are ordered naturally.
const LEAF_SIZE: usize = 48;

/// Undirected adjacency of `A + Aᵀ` without self loops, in CSR form.
struct Graph {
    ptr: Vec<usize>,
    adj: Vec<usize>,
}

impl Graph {
    fn from_pattern(m: &SparseComplexMatrix) -> Self {
        let n = m.dim();
        let mut degree = vec![0usize; n];
        for (i, j, _) in m.triplets() {
            if i != j {
                degree[i] += 1;
                degree[j] += 1;
            }
        }
        let mut ptr = vec![0usize; n + 1];
        for i in 0..n {
            ptr[i + 1] = ptr[i] + degree[i];
        }
        let mut fill = ptr.clone();
        let mut adj = vec![0usize; ptr[n]];
        for (i, j, _) in m.triplets() {
            if i != j {
                adj[fill[i]] = j;
                fill[i] += 1;
                adj[fill[j]] = i;
                fill[j] += 1;
            }
        }
        // Deduplicate each neighbor list.
        let mut out_ptr = vec![0usize; n + 1];
        let mut out = Vec::with_capacity(adj.len());
        for i in 0..n {
            let list = &mut adj[ptr[i]..ptr[i + 1]];
            list.sort_unstable();
            let mut last = usize::MAX;
            for &j in list.iter() {
                if j != last {
                    out.push(j);
                    last = j;
                }
            }
            out_ptr[i + 1] = out.len();
        }
        Graph { ptr: out_ptr, adj: out }
    }

    fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[self.ptr[i]..self.ptr[i + 1]]
    }
}

/// Scratch state shared by the recursion. `part[i]` tags the subgraph a
/// node currently belongs to; BFS only walks nodes carrying the active tag.
struct Dissection<'g> {
    graph: &'g Graph,
    part: Vec<usize>,
    level: Vec<usize>,
    next_tag: usize,
    order: Vec<usize>,
}

impl Dissection<'_> {
    /// Levels of a BFS from `root` within subgraph `tag`; returns the
    /// visited nodes in BFS order and the level boundaries.
    fn bfs(&mut self, root: usize, tag: usize) -> (Vec<usize>, Vec<usize>) {
        const ACTIVE: usize = usize::MAX;
        let mut visited = vec![root];
        let mut bounds = vec![0];
        self.level[root] = 0;
        self.part[root] = ACTIVE;
        let mut head = 0;
        while head < visited.len() {
            let v = visited[head];
            if self.level[v] == bounds.len() {
                bounds.push(head);
            }
            head += 1;
            for &w in self.graph.neighbors(v) {
                if self.part[w] == tag {
                    self.part[w] = ACTIVE;
                    self.level[w] = self.level[v] + 1;
                    visited.push(w);
                }
            }
        }
        for &v in &visited {
            self.part[v] = tag;
        }
        bounds.push(visited.len());
        (visited, bounds)
    }

    fn pseudo_peripheral(&mut self, start: usize, tag: usize) -> usize {
        let mut root = start;
        let mut depth = 0;
        for _ in 0..4 {
            let (visited, bounds) = self.bfs(root, tag);
            let levels = bounds.len() - 1;
            if levels <= depth {
                break;
            }
            depth = levels;
            // Smallest-degree node of the last level.
            let last = &visited[bounds[levels - 1]..];
            root = *last.iter().min_by_key(|&&v| self.graph.neighbors(v).len()).unwrap();
        }
        root
    }

    fn dissect(&mut self, nodes: Vec<usize>, tag: usize) {
        if nodes.len() <= LEAF_SIZE {
            self.finish(nodes);
            return;
        }
        let root = self.pseudo_peripheral(nodes[0], tag);
        let (visited, bounds) = self.bfs(root, tag);
        let levels = bounds.len() - 1;

        // A disconnected subgraph is split into its components first.
        if visited.len() < nodes.len() {
            for component in self.components(&nodes, tag) {
                let t = self.fresh_tag();
                for &v in &component {
                    self.part[v] = t;
                }
                self.dissect(component, t);
            }
            return;
        }
        if levels < 3 {
            self.finish(nodes);
            return;
        }

        // Middle level by node count.
        let half = visited.len() / 2;
        let mut k = (1..levels - 1).find(|&k| bounds[k + 1] > half).unwrap_or(levels - 2);
        k = k.clamp(1, levels - 2);

        let (a_tag, b_tag) = (self.fresh_tag(), self.fresh_tag());
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut sep = Vec::new();
        for &v in &visited[..bounds[k]] {
            a.push(v);
        }
        for &v in &visited[bounds[k + 1]..] {
            b.push(v);
        }
        // Only level-k nodes touching level k+1 are needed to separate.
        for &v in &visited[bounds[k]..bounds[k + 1]] {
            let touches_next = self
                .graph
                .neighbors(v)
                .iter()
                .any(|&w| self.part[w] == tag && self.level[w] == k + 1);
            if touches_next {
                sep.push(v);
            } else {
                a.push(v);
            }
        }
        for &v in &a {
            self.part[v] = a_tag;
        }
        for &v in &b {
            self.part[v] = b_tag;
        }
        for &v in &sep {
            self.part[v] = DONE;
        }
        a.sort_unstable();
        b.sort_unstable();
        sep.sort_unstable();
        self.dissect(a, a_tag);
        self.dissect(b, b_tag);
        self.finish(sep);
    }

    fn components(&mut self, nodes: &[usize], tag: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for &v in nodes {
            if self.part[v] == tag {
                let (mut visited, _) = self.bfs(v, tag);
                for &w in &visited {
                    self.part[w] = DONE;
                }
                visited.sort_unstable();
                out.push(visited);
            }
        }
        out
    }

    fn finish(&mut self, mut nodes: Vec<usize>) {
        nodes.sort_unstable();
        for &v in &nodes {
            self.part[v] = DONE;
        }
        self.order.extend(nodes);
    }

    fn fresh_tag(&mut self) -> usize {
        self.next_tag += 1;
        self.next_tag
    }
}

/// Nested-dissection order of the symmetrized pattern of `m`:
/// `order[k]` is the original index eliminated at step `k`.
pub fn nested_dissection(m: &SparseComplexMatrix) -> Vec<usize> {
    let n = m.dim();
    let graph = Graph::from_pattern(m);
    let mut d = Dissection { graph: &graph, part: vec![0; n], level: vec![0; n], next_tag: 0, order: Vec::with_capacity(n) };
    d.dissect((0..n).collect(), 0);
    debug_assert_eq!(d.order.len(), n);
    d.order
}

/// `P A Pᵀ` for the order `perm` (new index k holds old index `perm[k]`).
pub fn permute_symmetric(m: &SparseComplexMatrix, perm: &[usize]) -> SparseComplexMatrix {
    let mut inverse = vec![0usize; perm.len()];
    for (k, &old) in perm.iter().enumerate() {
        inverse[old] = k;
    }
    let triplets = m.triplets().map(|(i, j, v)| (inverse[i], inverse[j], v)).collect();
    SparseComplexMatrix::from_triplets(m.dim(), triplets)
}
