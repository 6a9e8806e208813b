//! Simple undirected graphs over a fixed vertex universe.
//!
//! A [`Graph`] keeps global vertex ids `0..universe`; subgraphs mark the
//! vertices they drop as absent instead of renumbering. The order of each
//! adjacency list is preserved by every operation, which lets
//! [`crate::plane::PlaneGraph`] store its rotation system directly in it.

use serde::{Deserialize, Serialize};

use crate::color::Vertex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    present: Vec<bool>,
}

impl Graph {
    /// Graph on vertices `0..n` without edges.
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], present: vec![true; n] }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph from adjacency lists, keeping their order.
    pub(crate) fn from_adjacency(adj: Vec<Vec<Vertex>>, present: Vec<bool>) -> Self {
        Graph { adj, present }
    }

    /// Appends `v` to `u`'s list and `u` to `v`'s list. Duplicate edges and
    /// loops are ignored.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v || self.has_edge(u, v) {
            return;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    /// Size of the vertex universe (ids range over `0..universe`).
    pub fn universe(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.present.len() && self.present[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.adj.len()).filter(move |&v| self.present[v])
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = self
            .vertices()
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by the vertices with `keep[v]` (intersected with the
    /// vertices already present).
    pub fn induced(&self, keep: &[bool]) -> Graph {
        let present: Vec<bool> = (0..self.universe()).map(|v| self.present[v] && keep[v]).collect();
        let adj = (0..self.universe())
            .map(|v| {
                if present[v] {
                    self.adj[v].iter().copied().filter(|&u| present[u]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Graph { adj, present }
    }

    /// Subgraph induced by `vertices`.
    pub fn induced_on(&self, vertices: &[Vertex]) -> Graph {
        let mut keep = vec![false; self.universe()];
        for &v in vertices {
            keep[v] = true;
        }
        self.induced(&keep)
    }

    pub fn without_vertices(&self, drop: &[Vertex]) -> Graph {
        let mut keep = vec![true; self.universe()];
        for &v in drop {
            keep[v] = false;
        }
        self.induced(&keep)
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.universe()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Cut vertices in increasing order.
    pub fn articulation_points(&self) -> Vec<Vertex> {
        let n = self.universe();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut time = 0;
        for root in self.vertices() {
            if disc[root] != usize::MAX {
                continue;
            }
            // Iterative DFS: (vertex, parent, next neighbor index).
            let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = vec![(root, None, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            while let Some(top) = stack.len().checked_sub(1) {
                let (u, parent, idx) = stack[top];
                if idx < self.adj[u].len() {
                    stack[top].2 += 1;
                    let w = self.adj[u][idx];
                    if Some(w) == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, Some(u), 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(p) = parent {
                        low[p] = low[p].min(low[u]);
                        if p != root && low[u] >= disc[p] {
                            is_cut[p] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Some triangle `(a, b, c)` with `a < b < c`, the lexicographically first.
    pub fn find_triangle(&self) -> Option<(Vertex, Vertex, Vertex)> {
        for a in self.vertices() {
            let mut nb: Vec<Vertex> = self.adj[a].iter().copied().filter(|&x| x > a).collect();
            nb.sort_unstable();
            for (i, &b) in nb.iter().enumerate() {
                for &c in &nb[i + 1..] {
                    if self.has_edge(b, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// Exact degeneracy with a certifying removal order: repeatedly removes a
    /// vertex of minimum remaining degree (lowest id on ties). Every vertex has
    /// at most `d` neighbors that appear later in the order.
    pub fn degeneracy_ordering(&self) -> (usize, Vec<Vertex>) {
        let n = self.universe();
        let mut deg: Vec<usize> = (0..n).map(|v| self.adj[v].len()).collect();
        let mut removed = vec![false; n];
        let mut alive: Vec<Vertex> = self.vertices().collect();
        let mut order = Vec::with_capacity(alive.len());
        let mut d = 0;
        while !alive.is_empty() {
            let (pos, &v) = alive
                .iter()
                .enumerate()
                .min_by_key(|&(_, &v)| (deg[v], v))
                .expect("nonempty");
            d = d.max(deg[v]);
            alive.swap_remove(pos);
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        (d, order)
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy_ordering().0
    }

    /// Checks that `order` lists every vertex once and that each vertex has at
    /// most `d` neighbors later in `order`.
    pub fn certifies_degeneracy(&self, order: &[Vertex], d: usize) -> bool {
        let n = self.universe();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || !self.present[v] || pos[v] != usize::MAX {
                return false;
            }
            pos[v] = i;
        }
        if order.len() != self.vertex_count() {
            return false;
        }
        order.iter().all(|&v| self.adj[v].iter().filter(|&&w| pos[w] > pos[v]).count() <= d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn degeneracy_examples() {
        let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let (d, order) = path.degeneracy_ordering();
        assert_eq!(d, 1);
        assert!(path.certifies_degeneracy(&order, 1));
        let (d, order) = k4().degeneracy_ordering();
        assert_eq!(d, 3);
        assert!(k4().certifies_degeneracy(&order, 3));
        assert!(!k4().certifies_degeneracy(&order, 2));
        assert_eq!(Graph::new(3).degeneracy(), 0);
    }

    #[test]
    fn articulation_points_of_bowtie() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert_eq!(g.articulation_points(), vec![2]);
        assert!(k4().articulation_points().is_empty());
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path.articulation_points(), vec![1, 2]);
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        let h = k4().without_vertices(&[0]);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.find_triangle(), Some((1, 2, 3)));
    }
}
