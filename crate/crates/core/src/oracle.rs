//! Exhaustive ground truth for small instances: reconfiguration graphs,
//! exact list coloring, and trajectory existence for scenes.
//!
//! Nothing here uses the solver or the kernel's validators.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::color::{Color, ColorSet, Coloring, ListAssignment, Vertex, NO_COLOR};
use crate::graph::Graph;
use crate::kernel::{Step, Witness};
use crate::scene::Scene;

pub const DEFAULT_STATE_CAP: usize = 2_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("state space exceeds the cap of {cap} states")]
    StateSpaceTooLarge { cap: usize },
    #[error("bad input: {0}")]
    BadInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    Distance(usize),
    Unreachable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diameter {
    Finite(usize),
    Disconnected,
}

/// All proper `k`-colorings of `g`, encoded in radix `k` over the present
/// vertices (digit `c - 1` for color `c`).
pub struct ReconfigGraph {
    vertices: Vec<Vertex>,
    neighbors: Vec<Vec<usize>>,
    k: u64,
    states: Vec<u64>,
}

impl ReconfigGraph {
    pub fn build(g: &Graph, k: Color, cap: usize) -> Result<ReconfigGraph, OracleError> {
        if k == 0 {
            return Err(OracleError::BadInput("k must be positive".into()));
        }
        let vertices: Vec<Vertex> = g.vertices().collect();
        let index: HashMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let neighbors: Vec<Vec<usize>> = vertices.iter().map(|&v| g.neighbors(v).iter().map(|u| index[u]).collect()).collect();
        let k64 = k as u64;
        if (vertices.len() as f64) * (k as f64).log2() > 63.0 {
            return Err(OracleError::StateSpaceTooLarge { cap });
        }
        let mut states = Vec::new();
        let mut colors = vec![0u64; vertices.len()];
        fn dfs(i: usize, nb: &[Vec<usize>], k: u64, colors: &mut [u64], states: &mut Vec<u64>, cap: usize) -> bool {
            if i == colors.len() {
                states.push(encode(colors, k));
                return states.len() <= cap;
            }
            for c in 0..k {
                if nb[i].iter().all(|&u| u > i || colors[u] != c) {
                    colors[i] = c;
                    if !dfs(i + 1, nb, k, colors, states, cap) {
                        return false;
                    }
                }
            }
            true
        }
        if !dfs(0, &neighbors, k64, &mut colors, &mut states, cap) {
            return Err(OracleError::StateSpaceTooLarge { cap });
        }
        states.sort_unstable();
        Ok(ReconfigGraph { vertices, neighbors, k: k64, states })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn encode_coloring(&self, phi: &Coloring) -> Result<usize, OracleError> {
        let digits: Vec<u64> = self
            .vertices
            .iter()
            .map(|&v| {
                let c = phi.get(v) as u64;
                if c == 0 || c > self.k {
                    Err(OracleError::BadInput(format!("vertex {v} has color {c} outside 1..={}", self.k)))
                } else {
                    Ok(c - 1)
                }
            })
            .collect::<Result<_, _>>()?;
        self.states
            .binary_search(&encode(&digits, self.k))
            .map_err(|_| OracleError::BadInput("coloring is not proper".into()))
    }

    fn decode(&self, code: u64) -> Vec<u64> {
        let mut d = vec![0; self.vertices.len()];
        let mut x = code;
        for slot in d.iter_mut() {
            *slot = x % self.k;
            x /= self.k;
        }
        d
    }

    /// States one recoloring away from `s`.
    fn moves(&self, s: usize) -> Vec<usize> {
        let colors = self.decode(self.states[s]);
        let mut out = Vec::new();
        let mut pow = 1u64;
        for (i, &c) in colors.iter().enumerate() {
            for x in 0..self.k {
                if x != c && self.neighbors[i].iter().all(|&u| colors[u] != x) {
                    let code = self.states[s] - c * pow + x * pow;
                    out.push(self.states.binary_search(&code).expect("proper neighbor state is enumerated"));
                }
            }
            pow *= self.k;
        }
        out
    }

    /// BFS distances from `s`; `u32::MAX` marks unreachable states.
    pub fn distances(&self, s: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.states.len()];
        dist[s] = 0;
        let mut frontier = vec![s];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let mut next: Vec<usize> = frontier.par_iter().flat_map_iter(|&x| self.moves(x)).collect();
            next.sort_unstable();
            next.dedup();
            next.retain(|&y| dist[y] == u32::MAX);
            for &y in &next {
                dist[y] = depth;
            }
            frontier = next;
        }
        dist
    }

    /// Canonical form under permutations of the colors: colors renamed in
    /// order of first appearance.
    fn canonical(&self, s: usize) -> Vec<u64> {
        let colors = self.decode(self.states[s]);
        let mut map = vec![u64::MAX; self.k as usize];
        let mut next = 0;
        colors
            .iter()
            .map(|&c| {
                if map[c as usize] == u64::MAX {
                    map[c as usize] = next;
                    next += 1;
                }
                map[c as usize]
            })
            .collect()
    }

    /// Maximum eccentricity, evaluated on one state per orbit of color
    /// permutations.
    pub fn diameter(&self) -> Diameter {
        if self.states.is_empty() {
            return Diameter::Finite(0);
        }
        let mut reps: HashMap<Vec<u64>, usize> = HashMap::new();
        for s in 0..self.states.len() {
            reps.entry(self.canonical(s)).or_insert(s);
        }
        let mut reps: Vec<usize> = reps.into_values().collect();
        reps.sort_unstable();
        let ecc: Vec<u32> = match self.adjacency() {
            Some(adj) => reps.par_iter().map(|&s| adj.eccentricity(s)).collect(),
            None => reps.par_iter().map(|&s| self.distances(s).into_iter().max().unwrap_or(0)).collect(),
        };
        if ecc.contains(&u32::MAX) {
            Diameter::Disconnected
        } else {
            Diameter::Finite(ecc.into_iter().max().unwrap_or(0) as usize)
        }
    }

    /// The move graph in compressed form, if it fits in [`CSR_EDGE_LIMIT`] edges.
    fn adjacency(&self) -> Option<Csr> {
        let bound = self.states.len() * self.vertices.len() * (self.k as usize - 1);
        if bound > CSR_EDGE_LIMIT || self.states.len() > u32::MAX as usize {
            return None;
        }
        let mut offsets = Vec::with_capacity(self.states.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for s in 0..self.states.len() {
            targets.extend(self.moves(s).into_iter().map(|t| t as u32));
            offsets.push(targets.len());
        }
        Some(Csr { offsets, targets })
    }
}

/// Edge count above which diameters are computed without a stored move graph.
const CSR_EDGE_LIMIT: usize = 60_000_000;

struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// Largest BFS distance from `s`, `u32::MAX` if some state is unreachable.
    fn eccentricity(&self, s: usize) -> u32 {
        let n = self.offsets.len() - 1;
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        dist[s] = 0;
        queue.push(s as u32);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head] as usize;
            head += 1;
            for &y in &self.targets[self.offsets[x]..self.offsets[x + 1]] {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x] + 1;
                    queue.push(y);
                }
            }
        }
        if queue.len() < n {
            u32::MAX
        } else {
            dist[*queue.last().unwrap() as usize]
        }
    }
}

fn encode(digits: &[u64], k: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * k + d)
}

/// Exact distance between proper `k`-colorings `alpha` and `beta` in the
/// reconfiguration graph.
pub fn reconfig_distance(g: &Graph, k: Color, alpha: &Coloring, beta: &Coloring, cap: usize) -> Result<Reach, OracleError> {
    let r = ReconfigGraph::build(g, k, cap)?;
    let a = r.encode_coloring(alpha)?;
    let b = r.encode_coloring(beta)?;
    let d = r.distances(a)[b];
    Ok(if d == u32::MAX { Reach::Unreachable } else { Reach::Distance(d as usize) })
}

pub fn reconfig_diameter(g: &Graph, k: Color, cap: usize) -> Result<Diameter, OracleError> {
    Ok(ReconfigGraph::build(g, k, cap)?.diameter())
}

/// The lexicographically smallest `L`-coloring in vertex order, if any.
pub fn exact_list_coloring(g: &Graph, lists: &ListAssignment) -> Option<Coloring> {
    let vertices: Vec<Vertex> = g.vertices().collect();
    let mut phi = Coloring::uncolored(g.universe());
    let mut domains: Vec<ColorSet> = (0..g.universe()).map(|v| if v < lists.len() { lists.get(v) } else { ColorSet::empty() }).collect();
    fn dfs(i: usize, vs: &[Vertex], g: &Graph, phi: &mut Coloring, domains: &mut Vec<ColorSet>) -> bool {
        let Some(&v) = vs.get(i) else { return true };
        for c in domains[v].iter().collect::<Vec<_>>() {
            // Forward checking on uncolored neighbors.
            let mut touched = Vec::new();
            let mut dead = false;
            for &u in g.neighbors(v) {
                if phi.get(u) == NO_COLOR && domains[u].contains(c) {
                    domains[u].remove(c);
                    touched.push(u);
                    if domains[u].is_empty() {
                        dead = true;
                    }
                }
            }
            if !dead {
                phi.set(v, c);
                if dfs(i + 1, vs, g, phi, domains) {
                    return true;
                }
                phi.set(v, NO_COLOR);
            }
            for u in touched {
                domains[u].insert(c);
            }
        }
        false
    }
    dfs(0, &vertices, g, &mut phi, &mut domains).then_some(phi)
}

/// Caps of [`brute_scene_trajectory`].
#[derive(Clone, Copy, Debug)]
pub struct BruteCaps {
    pub max_vertices: usize,
    /// Maximum number of candidate colorings examined.
    pub max_nodes: usize,
}

impl Default for BruteCaps {
    fn default() -> Self {
        BruteCaps { max_vertices: 10, max_nodes: 5_000_000 }
    }
}

/// Searches all pairs `(φ1, φ2)` that agree with the boundary trajectory on
/// `H`, and for each phase checks that the vertices outside `H` can move once
/// each in some order (the precedence graph "u before v when u's old color
/// is v's new color" is acyclic). Returns a witness if a trajectory exists.
pub fn brute_scene_trajectory(scene: &Scene, caps: BruteCaps) -> Result<Option<Witness>, OracleError> {
    let g = scene.graph.graph();
    if g.vertex_count() > caps.max_vertices {
        return Err(OracleError::StateSpaceTooLarge { cap: caps.max_vertices });
    }
    let n = g.universe();
    let mut in_h = vec![false; n];
    for &h in &scene.boundary {
        in_h[h] = true;
    }
    let mut delta = [scene.start.clone(), scene.start.clone(), scene.start.clone()];
    for i in 0..2 {
        delta[i + 1] = delta[i].clone();
        for s in &scene.boundary_witness.phases[i] {
            delta[i + 1].set(s.vertex, s.color);
        }
    }
    let mut search = Brute {
        g,
        scene,
        in_h,
        outside: g.vertices().filter(|&v| !scene.boundary.contains(&v)).collect(),
        delta,
        nodes: 0,
        cap: caps.max_nodes,
        orders: Vec::new(),
    };
    match search.phase(0, &scene.start) {
        Ok(found) => Ok(found),
        Err(()) => Err(OracleError::StateSpaceTooLarge { cap: caps.max_nodes }),
    }
}

struct Brute<'a> {
    g: &'a Graph,
    scene: &'a Scene,
    in_h: Vec<bool>,
    outside: Vec<Vertex>,
    delta: [Coloring; 3],
    nodes: usize,
    cap: usize,
    orders: Vec<Vec<Step>>,
}

impl Brute<'_> {
    /// Tries every `φ_{phase+1}` reachable from `prev`. `Err` when the node
    /// cap is hit.
    fn phase(&mut self, phase: usize, prev: &Coloring) -> Result<Option<Witness>, ()> {
        let mut next = prev.clone();
        for &h in &self.scene.boundary {
            next.set(h, self.delta[phase + 1].get(h));
        }
        let lists = &self.scene.lists[phase];
        if self.scene.boundary.iter().any(|&h| !lists.get(h).contains(next.get(h))) {
            return Ok(None);
        }
        let mut done = self.in_h.clone();
        self.assign(phase, 0, prev, &mut next, &mut done)
    }

    fn assign(&mut self, phase: usize, i: usize, prev: &Coloring, next: &mut Coloring, done: &mut [bool]) -> Result<Option<Witness>, ()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(());
        }
        let Some(&v) = self.outside.get(i) else { return self.leaf(phase, prev, next) };
        let g = self.g;
        for c in self.scene.lists[phase].get(v).iter() {
            if g.neighbors(v).iter().all(|&u| !done[u] || next.get(u) != c) {
                next.set(v, c);
                done[v] = true;
                let r = self.assign(phase, i + 1, prev, next, done);
                done[v] = false;
                if !matches!(r, Ok(None)) {
                    return r;
                }
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, phase: usize, prev: &Coloring, phi: &Coloring) -> Result<Option<Witness>, ()> {
        // H stays at its old colors while the outside moves.
        let mut during = phi.clone();
        for &h in &self.scene.boundary {
            during.set(h, self.delta[phase].get(h));
        }
        let Some(order) = schedule(self.g, &self.outside, prev, &during) else { return Ok(None) };
        self.orders.push(order);
        let found = if phase == 1 {
            let mut w = Witness::default();
            for i in 0..2 {
                w.phases[i] = self.orders[i].clone();
                w.phases[i].extend_from_slice(&self.scene.boundary_witness.phases[i]);
            }
            Some(w)
        } else {
            self.phase(1, phi)?
        };
        self.orders.pop();
        Ok(found)
    }
}

/// A once-only order moving each vertex of `vs` from `from` to `to` with
/// every other vertex fixed at `to`, or `None` if the precedence graph has a
/// cycle or a move is blocked by a fixed vertex.
fn schedule(g: &Graph, vs: &[Vertex], from: &Coloring, to: &Coloring) -> Option<Vec<Step>> {
    let n = g.universe();
    let mut moving = vec![false; n];
    for &v in vs {
        moving[v] = from.get(v) != to.get(v);
    }
    let mut cur = to.clone();
    for &v in vs {
        cur.set(v, from.get(v));
    }
    // Fixed neighbors must not hold the new color, and the start must be proper.
    for &v in vs {
        for &u in g.neighbors(v) {
            if !moving[u] && cur.get(u) == to.get(v) {
                return None;
            }
            if cur.get(u) == cur.get(v) {
                return None;
            }
        }
    }
    let mut pending: Vec<Vertex> = vs.iter().copied().filter(|&v| moving[v]).collect();
    let mut out = Vec::new();
    while !pending.is_empty() {
        let p = pending
            .iter()
            .position(|&v| g.neighbors(v).iter().all(|&u| cur.get(u) != to.get(v)))?;
        let v = pending.remove(p);
        cur.set(v, to.get(v));
        out.push(Step::new(v, to.get(v)));
    }
    Some(out)
}

/// Replays `seq` from `start`, rechecking every edge after every step and
/// requiring colors in `1..=k`. Returns the final coloring.
pub fn replay_check(g: &Graph, start: &Coloring, seq: &[Step], k: Color) -> Result<Coloring, String> {
    let proper = |phi: &Coloring| {
        g.edges().iter().all(|&(u, v)| phi.get(u) != phi.get(v)) && g.vertices().all(|v| (1..=k).contains(&phi.get(v)))
    };
    if !proper(start) {
        return Err("start coloring is not a proper k-coloring".into());
    }
    let mut phi = start.clone();
    for (i, s) in seq.iter().enumerate() {
        if !g.contains(s.vertex) || phi.get(s.vertex) == s.color {
            return Err(format!("step {i} is not a recoloring"));
        }
        phi.set(s.vertex, s.color);
        if !proper(&phi) {
            return Err(format!("step {i} produces an improper coloring"));
        }
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2n_diameters_match_enumeration() {
        // Computed by a separate all-pairs BFS over explicitly listed colorings.
        let expected = [(3, 4), (4, 6), (5, 9), (6, 10), (7, 14), (8, 16)];
        for (n, d) in expected {
            let g = crate::generate::p_dn(2, n).unwrap();
            assert_eq!(reconfig_diameter(g.graph(), 4, DEFAULT_STATE_CAP).unwrap(), Diameter::Finite(d), "n = {n}");
        }
    }

    #[test]
    fn k1_and_k2_distances() {
        let k1 = Graph::new(1);
        let d = reconfig_distance(&k1, 3, &Coloring::from_vec(vec![1]), &Coloring::from_vec(vec![2]), DEFAULT_STATE_CAP);
        assert_eq!(d, Ok(Reach::Distance(1)));
        let k2 = Graph::from_edges(2, &[(0, 1)]);
        let (a, b) = (Coloring::from_vec(vec![1, 2]), Coloring::from_vec(vec![2, 1]));
        assert_eq!(reconfig_distance(&k2, 2, &a, &b, DEFAULT_STATE_CAP), Ok(Reach::Unreachable));
        assert_eq!(reconfig_distance(&k2, 3, &a, &b, DEFAULT_STATE_CAP), Ok(Reach::Distance(3)));
    }

    #[test]
    fn k2_with_three_colors_is_a_six_cycle() {
        let k2 = Graph::from_edges(2, &[(0, 1)]);
        let r = ReconfigGraph::build(&k2, 3, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(r.state_count(), 6);
        assert!((0..6).all(|s| r.moves(s).len() == 2));
        assert_eq!(r.diameter(), Diameter::Finite(3));
    }

    #[test]
    fn k1_diameter_and_cap() {
        assert_eq!(reconfig_diameter(&Graph::new(1), 3, DEFAULT_STATE_CAP), Ok(Diameter::Finite(1)));
        assert_eq!(
            reconfig_diameter(&Graph::new(8), 10, 1000),
            Err(OracleError::StateSpaceTooLarge { cap: 1000 })
        );
    }

    #[test]
    fn frozen_colorings_disconnect() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(reconfig_diameter(&k3, 3, DEFAULT_STATE_CAP), Ok(Diameter::Disconnected));
    }

    #[test]
    fn exact_list_coloring_examples() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let l = ListAssignment::uniform(3, ColorSet::range(3));
        assert_eq!(exact_list_coloring(&k3, &l), Some(Coloring::from_vec(vec![1, 2, 3])));
        let l = ListAssignment::uniform(3, ColorSet::range(2));
        assert_eq!(exact_list_coloring(&k3, &l), None);
    }

    #[test]
    fn replay_check_catches_conflicts() {
        let p = Graph::from_edges(2, &[(0, 1)]);
        let start = Coloring::from_vec(vec![1, 2]);
        assert!(replay_check(&p, &start, &[Step::new(0, 3)], 3).is_ok());
        assert!(replay_check(&p, &start, &[Step::new(0, 2)], 3).is_err());
        assert!(replay_check(&p, &start, &[Step::new(0, 4)], 3).is_err());
    }
}
