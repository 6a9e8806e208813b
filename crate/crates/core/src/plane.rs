//! Plane graphs given by a rotation system and a designated outer face.
//!
//! Conventions: `rotation(v)` lists the neighbors of `v` in clockwise order.
//! Faces are traced dart by dart with `next(u -> v) = (v -> w)` where `w`
//! follows `u` in the rotation at `v`; with a clockwise rotation system this
//! keeps the face on the left, so bounded faces come out counterclockwise and
//! the outer face clockwise. Outer walks supplied by callers may be written
//! in either direction.
//!
//! Subgraphs never renumber vertices. When vertices or edges are deleted the
//! outer face of the result is recomputed by merging the old faces that
//! become one region and keeping every surviving dart whose region contains
//! the old outer face.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::Vertex;
use crate::graph::Graph;

pub type Dart = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("invalid embedding: {0}")]
    EmbeddingInvalid(String),
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("outer walk is not a cycle (vertex {0} repeats)")]
    NotACycle(Vertex),
    #[error("separator does not separate the graph: {0}")]
    NotSeparating(String),
    #[error("separator is not an induced separator: {0}")]
    SeparatorNotInduced(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// All faces of a rotation system, as closed dart walks.
#[derive(Clone, Debug)]
pub struct Faces {
    walks: Vec<Vec<Dart>>,
    index: HashMap<Dart, usize>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn walk(&self, f: usize) -> &[Dart] {
        &self.walks[f]
    }

    pub fn walks(&self) -> &[Vec<Dart>] {
        &self.walks
    }

    pub fn face_of(&self, dart: Dart) -> usize {
        self.index[&dart]
    }

    /// Vertex sequence of face `f` (tails of its darts).
    pub fn vertices(&self, f: usize) -> Vec<Vertex> {
        self.walks[f].iter().map(|d| d.0).collect()
    }
}

/// A graph with a combinatorial embedding and a designated outer face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraph {
    graph: Graph,
    /// Darts of the outer face, sorted; one boundary walk per component with edges.
    outer: Vec<Dart>,
}

/// Which part of the graph a split keeps as its second piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separator {
    /// A cut vertex. The first piece gets every component of `G - v` holding a
    /// vertex of `side`.
    CutVertex { v: Vertex, side: Vec<Vertex> },
    /// A chord `uv` of the outer cycle. The first piece is the side holding `side`.
    Chord { u: Vertex, v: Vertex, side: Vec<Vertex> },
    /// A path `v1 x v2` through an internal vertex `x` with `v1`, `v2` on the
    /// outer cycle. The first piece is the side holding `side`.
    Path { v1: Vertex, x: Vertex, v2: Vertex, side: Vec<Vertex> },
    /// A cycle; the second piece is the closed disk it bounds, away from the
    /// outer face.
    Cycle(Vec<Vertex>),
}

impl PlaneGraph {
    /// Builds a plane graph from a rotation system (`graph`'s adjacency order)
    /// and the outer boundary walks, one per component with edges.
    pub fn new(graph: Graph, outer_walks: &[Vec<Vertex>]) -> Result<Self, PlaneError> {
        check_rotation(&graph)?;
        let faces = trace_faces(&graph);
        check_euler(&graph, &faces)?;
        let mut outer = Vec::new();
        let mut used_faces = Vec::new();
        for walk in outer_walks {
            let f = match_walk(&faces, walk).ok_or_else(|| {
                PlaneError::EmbeddingInvalid(format!("outer walk {walk:?} is not a traced face"))
            })?;
            used_faces.push(f);
            outer.extend(faces.walk(f).iter().copied());
        }
        let comps = graph.components();
        for comp in &comps {
            let with_edges = comp.iter().any(|&v| graph.degree(v) > 0);
            let count = used_faces
                .iter()
                .filter(|&&f| comp.binary_search(&faces.walk(f)[0].0).is_ok())
                .count();
            if with_edges && count != 1 {
                return Err(PlaneError::EmbeddingInvalid(format!(
                    "component containing {} needs exactly one outer walk, got {count}",
                    comp[0]
                )));
            }
        }
        outer.sort_unstable();
        Ok(PlaneGraph { graph, outer })
    }

    /// Builds from explicit clockwise rotations on vertices `0..rot.len()`.
    pub fn from_rotations(rot: Vec<Vec<Vertex>>, outer_walks: &[Vec<Vertex>]) -> Result<Self, PlaneError> {
        let n = rot.len();
        for (v, nb) in rot.iter().enumerate() {
            if let Some(&u) = nb.iter().find(|&&u| u >= n || u == v) {
                return Err(PlaneError::NotSimple(format!("rotation of {v} lists {u}")));
            }
        }
        PlaneGraph::new(Graph::from_adjacency(rot, vec![true; n]), outer_walks)
    }

    /// Straight-line drawing: rotations are sorted clockwise by angle and the
    /// outer face of each component is its face of most negative signed area.
    pub fn from_positions(
        n: usize,
        edges: &[(Vertex, Vertex)],
        pos: &[(f64, f64)],
    ) -> Result<Self, PlaneError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u == v || g.has_edge(u, v) {
                return Err(PlaneError::NotSimple(format!("edge {u}-{v}")));
            }
            g.add_edge(u, v);
        }
        let adj: Vec<Vec<Vertex>> = (0..n)
            .map(|v| {
                let mut nb = g.neighbors(v).to_vec();
                let (x, y) = pos[v];
                // Decreasing angle is clockwise.
                nb.sort_by(|&a, &b| {
                    let ta = (pos[a].1 - y).atan2(pos[a].0 - x);
                    let tb = (pos[b].1 - y).atan2(pos[b].0 - x);
                    tb.partial_cmp(&ta).expect("finite coordinates")
                });
                nb
            })
            .collect();
        let g = Graph::from_adjacency(adj, vec![true; n]);
        let faces = trace_faces(&g);
        let mut walks = Vec::new();
        for comp in g.components() {
            let mut best: Option<(f64, usize)> = None;
            for (f, walk) in faces.walks().iter().enumerate() {
                if comp.binary_search(&walk[0].0).is_err() {
                    continue;
                }
                let area: f64 = walk
                    .iter()
                    .map(|&(a, b)| pos[a].0 * pos[b].1 - pos[b].0 * pos[a].1)
                    .sum();
                if best.is_none_or(|(a, _)| area < a) {
                    best = Some((area, f));
                }
            }
            if let Some((_, f)) = best {
                walks.push(faces.vertices(f));
            }
        }
        PlaneGraph::new(g, &walks)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn universe(&self) -> usize {
        self.graph.universe()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.graph.vertices()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.graph.contains(v)
    }

    /// Clockwise neighbor order at `v`.
    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        self.graph.neighbors(v)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.graph.neighbors(v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn outer_darts(&self) -> &[Dart] {
        &self.outer
    }

    pub fn is_outer_dart(&self, d: Dart) -> bool {
        self.outer.binary_search(&d).is_ok()
    }

    pub fn faces(&self) -> Faces {
        trace_faces(&self.graph)
    }

    /// Number of faces in the sense of the Euler formula `n - m + f = 1 + c`.
    pub fn face_count(&self) -> usize {
        let faces = self.faces();
        let comps = self.graph.components().len();
        let isolated = self.vertices().filter(|&v| self.graph.degree(v) == 0).count();
        // Each component contributes its traced faces; all outer faces are one.
        faces.len() + isolated + 1 - comps.min(faces.len() + isolated)
    }

    /// A vertex is outer if it lies on the outer face (isolated vertices do).
    pub fn is_outer_vertex(&self, v: Vertex) -> bool {
        self.graph.contains(v)
            && (self.graph.degree(v) == 0 || self.graph.neighbors(v).iter().any(|&w| self.is_outer_dart((v, w))))
    }

    pub fn is_internal(&self, v: Vertex) -> bool {
        self.graph.contains(v) && !self.is_outer_vertex(v)
    }

    /// Outer boundary walk (as a vertex sequence) of the component containing `v`.
    pub fn outer_walk_of(&self, v: Vertex) -> Vec<Vertex> {
        if self.graph.degree(v) == 0 {
            return vec![v];
        }
        let comp: Vec<bool> = {
            let mut mark = vec![false; self.universe()];
            for c in self.graph.components() {
                if c.binary_search(&v).is_ok() {
                    for &x in &c {
                        mark[x] = true;
                    }
                }
            }
            mark
        };
        let start = *self
            .outer
            .iter()
            .find(|d| comp[d.0])
            .expect("every component with edges has an outer walk");
        let mut walk = vec![start.0];
        let mut d = next_dart(&self.graph, start);
        while d != start {
            walk.push(d.0);
            d = next_dart(&self.graph, d);
        }
        walk
    }

    /// Outer cycle of a connected graph in boundary order. A single vertex or a
    /// single edge is returned as its vertex list.
    pub fn outer_cycle(&self) -> Result<Vec<Vertex>, PlaneError> {
        let first = self
            .vertices()
            .next()
            .ok_or_else(|| PlaneError::NotSeparating("empty graph".into()))?;
        let walk = self.outer_walk_of(first);
        if walk.len() == 2 {
            return Ok(walk);
        }
        let mut seen = vec![false; self.universe()];
        for &v in &walk {
            if seen[v] {
                return Err(PlaneError::NotACycle(v));
            }
            seen[v] = true;
        }
        if walk.len() < self.vertex_count() && !self.graph.is_connected() {
            return Err(PlaneError::NotSeparating("graph is disconnected".into()));
        }
        Ok(walk)
    }

    /// The subgraph keeping vertices with `keep[v]` and dropping `extra_edge`
    /// (if any); the outer face follows the region of the old outer face.
    pub fn restrict(&self, keep: &[bool], extra_edge: Option<(Vertex, Vertex)>) -> Result<PlaneGraph, PlaneError> {
        let faces = self.faces();
        let mut parent: Vec<usize> = (0..faces.len()).collect();
        let outer_faces: Vec<usize> = self.outer.iter().map(|&d| faces.face_of(d)).collect();
        for w in outer_faces.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
        let dropped = |u: Vertex, v: Vertex| {
            !keep[u] || !keep[v] || extra_edge.is_some_and(|(a, b)| (a, b) == (u, v) || (b, a) == (u, v))
        };
        for (u, v) in self.graph.edges() {
            if dropped(u, v) {
                union(&mut parent, faces.face_of((u, v)), faces.face_of((v, u)));
            }
        }
        let mut graph = self.graph.induced(keep);
        if let Some((a, b)) = extra_edge {
            graph.remove_edge(a, b);
        }
        let outer_root = outer_faces.first().map(|&f| find(&mut parent, f));
        let mut outer = Vec::new();
        if let Some(root) = outer_root {
            for u in graph.vertices() {
                for &v in graph.neighbors(u) {
                    if find(&mut parent, faces.face_of((u, v))) == root {
                        outer.push((u, v));
                    }
                }
            }
        }
        outer.sort_unstable();
        for comp in graph.components() {
            let has_edges = comp.iter().any(|&v| graph.degree(v) > 0);
            if has_edges && !outer.iter().any(|d| comp.binary_search(&d.0).is_ok()) {
                return Err(PlaneError::EmbeddingInvalid(format!(
                    "component containing {} is enclosed by another component",
                    comp[0]
                )));
            }
        }
        Ok(PlaneGraph { graph, outer })
    }

    pub fn induced(&self, keep: &[bool]) -> Result<PlaneGraph, PlaneError> {
        self.restrict(keep, None)
    }

    pub fn induced_on(&self, vertices: &[Vertex]) -> Result<PlaneGraph, PlaneError> {
        let mut keep = vec![false; self.universe()];
        for &v in vertices {
            keep[v] = true;
        }
        self.restrict(&keep, None)
    }

    pub fn without_vertices(&self, drop: &[Vertex]) -> Result<PlaneGraph, PlaneError> {
        let mut keep = vec![true; self.universe()];
        for &v in drop {
            keep[v] = false;
        }
        self.restrict(&keep, None)
    }

    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<PlaneGraph, PlaneError> {
        if !self.has_edge(u, v) {
            return Err(PlaneError::NotSeparating(format!("no edge {u}-{v}")));
        }
        let keep = vec![true; self.universe()];
        self.restrict(&keep, Some((u, v)))
    }

    /// Vertices strictly inside the closed disk bounded by `cycle`, i.e. on the
    /// side away from the outer face.
    pub fn disk_interior(&self, cycle: &[Vertex]) -> Result<Vec<bool>, PlaneError> {
        let k = cycle.len();
        if k < 3 {
            return Err(PlaneError::NotSeparating(format!("{cycle:?} is not a cycle")));
        }
        let mut on_cycle = vec![false; self.universe()];
        for i in 0..k {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            if !self.has_edge(a, b) || on_cycle[a] {
                return Err(PlaneError::NotSeparating(format!("{cycle:?} is not a cycle")));
            }
            on_cycle[a] = true;
        }
        let is_cycle_edge = |u: Vertex, v: Vertex| {
            (0..k).any(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % k]);
                (a, b) == (u, v) || (b, a) == (u, v)
            })
        };
        let faces = self.faces();
        let mut parent: Vec<usize> = (0..faces.len()).collect();
        for (u, v) in self.graph.edges() {
            if !is_cycle_edge(u, v) {
                union(&mut parent, faces.face_of((u, v)), faces.face_of((v, u)));
            }
        }
        let outer_face = faces.face_of(self.outer[0]);
        let outer_root = find(&mut parent, outer_face);
        let mut inside = vec![false; self.universe()];
        for v in self.vertices() {
            if on_cycle[v] {
                continue;
            }
            inside[v] = self.graph.neighbors(v).iter().any(|&w| find(&mut parent, faces.face_of((v, w))) != outer_root);
        }
        Ok(inside)
    }

    /// True if `cycle` (given in cyclic order) is the boundary of some face.
    pub fn bounds_face(&self, cycle: &[Vertex]) -> bool {
        let faces = self.faces();
        match_walk(&faces, cycle).is_some()
    }

    /// Splits along `sep` into `(G1, G2)` with `G1 ∪ G2 = G`; both pieces are
    /// induced and keep the original vertex ids.
    pub fn split(&self, sep: &Separator) -> Result<(PlaneGraph, PlaneGraph), PlaneError> {
        let n = self.universe();
        match sep {
            Separator::CutVertex { v, side } => {
                let rest = self.graph.without_vertices(&[*v]);
                let mut in_first = vec![false; n];
                let comps = rest.components();
                if comps.len() < 2 || !self.contains(*v) {
                    return Err(PlaneError::NotSeparating(format!("{v} is not a cut vertex")));
                }
                let mut first_count = 0;
                for comp in &comps {
                    if comp.iter().any(|x| side.contains(x)) {
                        first_count += 1;
                        for &x in comp {
                            in_first[x] = true;
                        }
                    }
                }
                if first_count == 0 || first_count == comps.len() {
                    return Err(PlaneError::NotSeparating(format!(
                        "designated side must cover some but not all components of G-{v}"
                    )));
                }
                let mut keep1 = in_first.clone();
                keep1[*v] = true;
                let mut keep2: Vec<bool> = (0..n).map(|x| self.contains(x) && !in_first[x]).collect();
                keep2[*v] = true;
                Ok((self.induced(&keep1)?, self.induced(&keep2)?))
            }
            Separator::Cycle(cycle) => {
                let inside = self.disk_interior(cycle)?;
                if !inside.iter().any(|&b| b) {
                    return Err(PlaneError::NotSeparating(format!("{cycle:?} has empty interior")));
                }
                let keep1: Vec<bool> = (0..n).map(|x| self.contains(x) && !inside[x]).collect();
                if keep1.iter().filter(|&&b| b).count() == cycle.len() {
                    return Err(PlaneError::NotSeparating(format!("{cycle:?} has empty exterior")));
                }
                let mut keep2 = inside;
                for &c in cycle {
                    keep2[c] = true;
                }
                Ok((self.induced(&keep1)?, self.induced(&keep2)?))
            }
            Separator::Chord { u, v, side } => {
                if !self.has_edge(*u, *v) {
                    return Err(PlaneError::SeparatorNotInduced(format!("{u}-{v} is not an edge")));
                }
                self.split_through(&[*u, *v], side)
            }
            Separator::Path { v1, x, v2, side } => {
                if !self.has_edge(*v1, *x) || !self.has_edge(*x, *v2) {
                    return Err(PlaneError::SeparatorNotInduced(format!("{v1}-{x}-{v2} is not a path")));
                }
                if self.has_edge(*v1, *v2) {
                    return Err(PlaneError::SeparatorNotInduced(format!("{v1} and {v2} are adjacent")));
                }
                if self.is_outer_vertex(*x) {
                    return Err(PlaneError::SeparatorNotInduced(format!("{x} is not internal")));
                }
                self.split_through(&[*v1, *x, *v2], side)
            }
        }
    }

    /// Split along a path whose ends lie on the outer cycle and whose inner
    /// vertices are internal (or a chord, when the path has two vertices).
    fn split_through(&self, path: &[Vertex], side: &[Vertex]) -> Result<(PlaneGraph, PlaneGraph), PlaneError> {
        let n = self.universe();
        let k = self.outer_cycle()?;
        let (a, b) = (path[0], *path.last().expect("nonempty path"));
        let pa = k.iter().position(|&x| x == a);
        let pb = k.iter().position(|&x| x == b);
        let (Some(pa), Some(pb)) = (pa, pb) else {
            return Err(PlaneError::SeparatorNotInduced(format!("{a} or {b} not on the outer cycle")));
        };
        let len = k.len();
        let arc = |from: usize, to: usize| -> Vec<Vertex> {
            let mut out = Vec::new();
            let mut i = (from + 1) % len;
            while i != to {
                out.push(k[i]);
                i = (i + 1) % len;
            }
            out
        };
        let arc_ab = arc(pa, pb);
        let arc_ba = arc(pb, pa);
        if arc_ab.is_empty() || arc_ba.is_empty() {
            return Err(PlaneError::NotSeparating(format!("{a} and {b} are consecutive on the outer cycle")));
        }
        let side_rest: Vec<Vertex> = side.iter().copied().filter(|x| !path.contains(x)).collect();
        let in_ab = side_rest.iter().any(|x| arc_ab.contains(x));
        let in_ba = side_rest.iter().any(|x| arc_ba.contains(x));
        // The second piece takes the arc without designated vertices.
        let cycle: Vec<Vertex> = match (in_ab, in_ba) {
            (true, true) => {
                return Err(PlaneError::NotSeparating("designated side lies on both sides".into()));
            }
            (true, false) => {
                // Second piece along arc b -> a, closed by the path a .. b.
                let mut c = vec![b];
                c.extend(arc_ba.iter().copied());
                c.extend(path.iter().copied());
                c.pop();
                c
            }
            (false, _) => {
                let mut c = vec![a];
                c.extend(arc_ab.iter().copied());
                c.extend(path.iter().rev().copied());
                c.pop();
                c
            }
        };
        let inside = self.disk_interior(&cycle)?;
        let mut keep2 = inside;
        for &c in &cycle {
            keep2[c] = true;
        }
        let keep1: Vec<bool> = (0..n).map(|x| self.contains(x) && (!keep2[x] || path.contains(&x))).collect();
        Ok((self.induced(&keep1)?, self.induced(&keep2)?))
    }

    /// Serializes in the line-oriented embedded-graph format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n {}", self.universe());
        for v in self.vertices() {
            if self.graph.degree(v) == 0 {
                continue;
            }
            let rot: Vec<String> = self.rotation(v).iter().map(|u| u.to_string()).collect();
            let _ = writeln!(s, "rot {v}: {}", rot.join(" "));
        }
        for comp in self.graph.components() {
            if comp.iter().all(|&v| self.graph.degree(v) == 0) {
                continue;
            }
            let walk: Vec<String> = self.outer_walk_of(comp[0]).iter().map(|u| u.to_string()).collect();
            let _ = writeln!(s, "outer: {}", walk.join(" "));
        }
        s
    }

    /// Parses the embedded-graph text format: `n <count>`,
    /// `rot <v>: <u1> <u2> ...` (clockwise) and `outer: <v1> ... <vk>` lines,
    /// with `#` comments. Vertices without a `rot` line are isolated.
    pub fn parse(text: &str) -> Result<PlaneGraph, PlaneError> {
        let mut n: Option<usize> = None;
        let mut rot: Vec<Option<Vec<Vertex>>> = Vec::new();
        let mut outer_walks = Vec::new();
        let perr = |line: usize, msg: String| PlaneError::Parse { line, msg };
        let parse_list = |line: usize, s: &str| -> Result<Vec<Vertex>, PlaneError> {
            s.split_whitespace()
                .map(|t| t.parse::<Vertex>().map_err(|e| perr(line, format!("bad vertex {t:?}: {e}"))))
                .collect()
        };
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("outer:") {
                outer_walks.push((lineno, parse_list(lineno, rest)?));
            } else if let Some(rest) = line.strip_prefix("rot ") {
                let (head, tail) = rest
                    .split_once(':')
                    .ok_or_else(|| perr(lineno, "expected `rot <v>: ...`".into()))?;
                let v: Vertex = head.trim().parse().map_err(|e| perr(lineno, format!("bad vertex: {e}")))?;
                let count = n.ok_or_else(|| perr(lineno, "`n` must come first".into()))?;
                if v >= count {
                    return Err(perr(lineno, format!("vertex {v} out of range")));
                }
                if rot[v].is_some() {
                    return Err(perr(lineno, format!("duplicate rotation for {v}")));
                }
                rot[v] = Some(parse_list(lineno, tail)?);
            } else if let Some(rest) = line.strip_prefix("n ") {
                let count: usize = rest.trim().parse().map_err(|e| perr(lineno, format!("bad count: {e}")))?;
                n = Some(count);
                rot = vec![None; count];
            } else {
                return Err(perr(lineno, format!("unrecognized line {line:?}")));
            }
        }
        let n = n.ok_or_else(|| perr(0, "missing `n` line".into()))?;
        let mut adj = vec![Vec::new(); n];
        for (v, r) in rot.into_iter().enumerate() {
            if let Some(list) = r {
                for &u in &list {
                    if u >= n {
                        return Err(PlaneError::EmbeddingInvalid(format!("neighbor {u} of {v} out of range")));
                    }
                    if u == v {
                        return Err(PlaneError::NotSimple(format!("loop at {v}")));
                    }
                }
                let mut sorted = list.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(PlaneError::NotSimple(format!("parallel edges at {v}")));
                }
                adj[v] = list;
            }
        }
        for (lineno, walk) in &outer_walks {
            if let Some(&bad) = walk.iter().find(|&&v| v >= n) {
                return Err(perr(*lineno, format!("vertex {bad} out of range")));
            }
        }
        let graph = Graph::from_adjacency(adj, vec![true; n]);
        let walks: Vec<Vec<Vertex>> = outer_walks.into_iter().map(|(_, w)| w).collect();
        PlaneGraph::new(graph, &walks)
    }
}

fn next_dart(g: &Graph, (u, v): Dart) -> Dart {
    let rot = g.neighbors(v);
    let i = rot.iter().position(|&x| x == u).expect("rotation is symmetric");
    (v, rot[(i + 1) % rot.len()])
}

fn trace_faces(g: &Graph) -> Faces {
    let mut walks = Vec::new();
    let mut index = HashMap::new();
    for u in g.vertices() {
        for &v in g.neighbors(u) {
            if index.contains_key(&(u, v)) {
                continue;
            }
            let f = walks.len();
            let mut walk = Vec::new();
            let mut d = (u, v);
            while !index.contains_key(&d) {
                index.insert(d, f);
                walk.push(d);
                d = next_dart(g, d);
            }
            walks.push(walk);
        }
    }
    Faces { walks, index }
}

fn check_rotation(g: &Graph) -> Result<(), PlaneError> {
    for u in g.vertices() {
        for &v in g.neighbors(u) {
            if !g.contains(v) || !g.neighbors(v).contains(&u) {
                return Err(PlaneError::EmbeddingInvalid(format!(
                    "rotation at {u} lists {v} but not vice versa"
                )));
            }
        }
    }
    Ok(())
}

fn check_euler(g: &Graph, faces: &Faces) -> Result<(), PlaneError> {
    for comp in g.components() {
        let nv = comp.len() as i64;
        let ne: i64 = comp.iter().map(|&v| g.degree(v) as i64).sum::<i64>() / 2;
        let nf = if ne == 0 {
            1
        } else {
            faces.walks().iter().filter(|w| comp.binary_search(&w[0].0).is_ok()).count() as i64
        };
        if nv - ne + nf != 2 {
            return Err(PlaneError::EmbeddingInvalid(format!(
                "component containing {}: n - m + f = {nv} - {ne} + {nf} != 2",
                comp[0]
            )));
        }
    }
    Ok(())
}

/// Finds the face whose vertex sequence equals `walk` cyclically, read in
/// either direction.
fn match_walk(faces: &Faces, walk: &[Vertex]) -> Option<usize> {
    if walk.len() < 2 {
        return None;
    }
    let rev: Vec<Vertex> = walk.iter().rev().copied().collect();
    for candidate in [walk.to_vec(), rev] {
        let d = (candidate[0], candidate[1]);
        let Some(&f) = faces.index.get(&d) else { continue };
        let fw = faces.vertices(f);
        if fw.len() != candidate.len() {
            continue;
        }
        let start = faces.walk(f).iter().position(|&x| x == d).expect("dart on its face");
        if (0..fw.len()).all(|i| fw[(start + i) % fw.len()] == candidate[i]) {
            return Some(f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> PlaneGraph {
        let pos: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        PlaneGraph::from_positions(n, &edges, &pos).unwrap()
    }

    fn k4_text() -> &'static str {
        // Outer triangle 0 1 2 drawn counterclockwise, 3 in the middle.
        "n 4\nrot 0: 2 3 1\nrot 1: 0 3 2\nrot 2: 1 3 0\nrot 3: 0 2 1\nouter: 0 1 2\n"
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = PlaneGraph::parse("n 3\nrot 0: 1 2\nrot 1: 2 0\nrot 2: 0 1\nouter: 0 1 2\n").unwrap();
        assert_eq!(g.faces().len(), 2);
        assert_eq!(g.face_count(), 2);
    }

    #[test]
    fn k4_has_four_faces() {
        let g = PlaneGraph::parse(k4_text()).unwrap();
        assert_eq!(g.faces().len(), 4);
        assert!(g.is_internal(3));
        assert!(g.is_outer_vertex(0));
        let mut k = g.outer_cycle().unwrap();
        k.sort_unstable();
        assert_eq!(k, vec![0, 1, 2]);
    }

    #[test]
    fn perturbed_k4_rotation_rejected() {
        // Transposing two neighbors in the rotation at 3 breaks Euler's formula.
        let bad = "n 4\nrot 0: 2 3 1\nrot 1: 0 3 2\nrot 2: 1 3 0\nrot 3: 0 1 2\nouter: 0 1 2\n";
        assert!(matches!(PlaneGraph::parse(bad), Err(PlaneError::EmbeddingInvalid(_))));
    }

    #[test]
    fn parse_rejects_nonsimple_and_asymmetric() {
        assert!(matches!(PlaneGraph::parse("n 2\nrot 0: 1 1\nrot 1: 0\n"), Err(PlaneError::NotSimple(_))));
        assert!(matches!(PlaneGraph::parse("n 2\nrot 0: 0\n"), Err(PlaneError::NotSimple(_))));
        assert!(matches!(PlaneGraph::parse("n 2\nrot 0: 1\nouter: 0 1\n"), Err(PlaneError::EmbeddingInvalid(_))));
        assert!(matches!(PlaneGraph::parse("n 2\nbogus\n"), Err(PlaneError::Parse { line: 2, .. })));
    }

    #[test]
    fn text_round_trip() {
        let g = PlaneGraph::parse(k4_text()).unwrap();
        let again = PlaneGraph::parse(&g.to_text()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn four_cycle_outer_cycle() {
        let g = cycle(4);
        let k = g.outer_cycle().unwrap();
        assert_eq!(k.len(), 4);
        let start = k.iter().position(|&x| x == 0).unwrap();
        let rotated: Vec<_> = (0..4).map(|i| k[(start + i) % 4]).collect();
        assert!(rotated == vec![0, 1, 2, 3] || rotated == vec![0, 3, 2, 1]);
    }

    fn wheel(rim: usize) -> PlaneGraph {
        let mut pos = vec![(0.0, 0.0)];
        let mut edges = Vec::new();
        for i in 0..rim {
            let t = 2.0 * std::f64::consts::PI * i as f64 / rim as f64;
            pos.push((t.cos(), t.sin()));
            edges.push((0, i + 1));
            edges.push((i + 1, (i + 1) % rim + 1));
        }
        PlaneGraph::from_positions(rim + 1, &edges, &pos).unwrap()
    }

    #[test]
    fn wheel_outer_cycle_is_rim() {
        let g = wheel(5);
        let mut k = g.outer_cycle().unwrap();
        assert_eq!(k.len(), 5);
        k.sort_unstable();
        assert_eq!(k, vec![1, 2, 3, 4, 5]);
        assert!(g.is_internal(0));
    }

    fn bowtie() -> PlaneGraph {
        let pos = [(0.0, 0.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, 1.0), (1.0, -1.0)];
        PlaneGraph::from_positions(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], &pos).unwrap()
    }

    #[test]
    fn bowtie_is_not_a_cycle_and_splits() {
        let g = bowtie();
        assert_eq!(g.outer_cycle(), Err(PlaneError::NotACycle(0)));
        let (g1, g2) = g.split(&Separator::CutVertex { v: 0, side: vec![1] }).unwrap();
        assert_eq!(g1.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(g2.vertices().collect::<Vec<_>>(), vec![0, 3, 4]);
        assert_eq!(g1.outer_cycle().unwrap().len(), 3);
        assert_eq!(g2.outer_cycle().unwrap().len(), 3);
    }

    #[test]
    fn chord_split_of_five_cycle() {
        let mut pos = Vec::new();
        for i in 0..5 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
            pos.push((t.cos(), t.sin()));
        }
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)];
        let g = PlaneGraph::from_positions(5, &edges, &pos).unwrap();
        let (g1, g2) = g.split(&Separator::Chord { u: 0, v: 2, side: vec![1] }).unwrap();
        assert_eq!(g1.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(g2.vertices().collect::<Vec<_>>(), vec![0, 2, 3, 4]);
        assert_eq!(g1.edge_count() + g2.edge_count(), g.edge_count() + 1);
        assert_eq!(g2.outer_cycle().unwrap().len(), 4);
    }

    #[test]
    fn separating_triangle_disk() {
        // Outer triangle 4 5 6, with K4 on 0 1 2 3 nested inside, 0 1 2 the
        // separating triangle; every outer vertex attaches to two of 0 1 2.
        let pos = [
            (0.0, 1.0),
            (-1.0, -0.7),
            (1.0, -0.7),
            (0.0, 0.0),
            (0.0, 3.0),
            (-3.0, -2.0),
            (3.0, -2.0),
        ];
        let edges = [
            (0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3),
            (4, 5), (5, 6), (6, 4),
            (4, 0), (4, 1), (5, 1), (5, 2), (6, 2), (6, 0),
        ];
        let g = PlaneGraph::from_positions(7, &edges, &pos).unwrap();
        assert!(!g.bounds_face(&[0, 1, 2]));
        assert!(g.bounds_face(&[0, 1, 3]));
        let inside = g.disk_interior(&[0, 1, 2]).unwrap();
        assert_eq!((0..7).filter(|&v| inside[v]).collect::<Vec<_>>(), vec![3]);
        let (g1, g2) = g.split(&Separator::Cycle(vec![0, 1, 2])).unwrap();
        assert_eq!(g2.vertices().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(g2.edge_count(), 6);
        assert_eq!(g1.vertex_count() + g2.vertex_count(), 7 + 3);
        let mut k = g2.outer_cycle().unwrap();
        k.sort_unstable();
        assert_eq!(k, vec![0, 1, 2]);
    }

    #[test]
    fn deleting_outer_edge_merges_faces() {
        let g = wheel(4);
        let h = g.without_edge(1, 2).unwrap();
        assert!(h.is_outer_vertex(0));
        let k = h.outer_cycle().unwrap();
        assert_eq!(k.len(), 5);
    }

    #[test]
    fn deleting_rim_keeps_hub_outer() {
        let g = wheel(5);
        let h = g.without_vertices(&[1, 2, 3, 4, 5]).unwrap();
        assert!(h.is_outer_vertex(0));
        assert_eq!(h.vertex_count(), 1);
    }
}
