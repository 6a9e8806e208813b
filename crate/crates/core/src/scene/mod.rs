//! Scenes: a plane graph, a boundary segment `H` with a prescribed two-phase
//! trajectory on it, and the lists the lifted trajectory must respect.
//!
//! `solve` lifts the boundary trajectory to the whole graph. The recursion in
//! [`solve`] follows the reductions in [`reduce`]; the stable colorings of the
//! outer cycle are built in [`stable`].

mod reduce;
mod solve;
mod stable;

use serde::{Deserialize, Serialize};

use crate::color::{ColorSet, Coloring, ListAssignment, Vertex, NO_COLOR};
use crate::graph::Graph;
use crate::kernel::{find_conflict, replay_unchecked, validate_witness, Witness};
use crate::plane::PlaneGraph;

pub use reduce::{find_reduction_site, ReductionSite};
pub use solve::{solve, SolveError, Solution};
pub use stable::{stable_outer, StableOuter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Planar graphs; `|H| <= 3` and the list sizes of conditions Ga-Gc.
    General,
    /// Triangle-free planar graphs; `|H| <= 5` and conditions Ta-Tc.
    TriangleFree,
}

impl Mode {
    pub fn max_boundary(self) -> usize {
        match self {
            Mode::General => 3,
            Mode::TriangleFree => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scene {
    pub graph: PlaneGraph,
    /// `H`, listed in order along the outer face.
    pub boundary: Vec<Vertex>,
    pub lists: [ListAssignment; 2],
    /// `φ0`, indexed by vertex over the whole universe.
    pub start: Coloring,
    /// Witness `(β1, β2)` of the trajectory on `H`.
    pub boundary_witness: Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Ga,
    Gb,
    Gc,
    Ta,
    Tb,
    Tc,
    SizeOfH,
    TriangleFree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }

    fn push(&mut self, condition: Condition, vertices: Vec<Vertex>) {
        if !vertices.is_empty() {
            self.violations.push(Violation { condition, vertices });
        }
    }
}

impl Scene {
    pub fn new(
        graph: PlaneGraph,
        boundary: Vec<Vertex>,
        lists: [ListAssignment; 2],
        start: Coloring,
        boundary_witness: Witness,
    ) -> Self {
        Scene { graph, boundary, lists, start, boundary_witness }
    }

    /// Scene with empty `H`.
    pub fn unanchored(graph: PlaneGraph, lists: [ListAssignment; 2], start: Coloring) -> Self {
        Scene { graph, boundary: Vec::new(), lists, start, boundary_witness: Witness::default() }
    }

    pub fn universe(&self) -> usize {
        self.graph.universe()
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.universe()];
        for &h in &self.boundary {
            m[h] = true;
        }
        m
    }

    /// `(δ0, δ1, δ2)` on `H`; other entries are [`NO_COLOR`].
    pub fn delta(&self) -> [Coloring; 3] {
        let d0 = self.start.restrict(self.boundary.iter().copied());
        let d1 = replay_unchecked(&d0, &self.boundary_witness.phases[0]);
        let d2 = replay_unchecked(&d1, &self.boundary_witness.phases[1]);
        [d0, d1, d2]
    }

    /// True if `G[H]` is a path in the order of `boundary` (no other edges).
    pub fn boundary_is_path(&self) -> bool {
        let h = &self.boundary;
        let g = self.graph.graph();
        for i in 0..h.len() {
            for j in i + 1..h.len() {
                if g.has_edge(h[i], h[j]) != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// JSON dump used when reporting internal failures.
    pub fn dump(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|e| format!("<unserializable scene: {e}>"))
    }

    /// Checks the structural requirements: `H` consecutive on the outer face,
    /// `φ0` a proper coloring of every vertex, and `(β1, β2)` a witness of an
    /// `(L1, L2)`-trajectory on `G[H]` starting from `φ0`.
    pub fn check_structure(&self) -> Result<(), String> {
        let g = self.graph.graph();
        let mut seen = vec![false; self.universe()];
        for &h in &self.boundary {
            if !g.contains(h) || seen[h] {
                return Err(format!("boundary vertex {h} missing or repeated"));
            }
            seen[h] = true;
        }
        if !self.boundary_consecutive() {
            return Err(format!("boundary {:?} is not consecutive on the outer face", self.boundary));
        }
        if self.start.len() != self.universe() || self.lists[0].len() != self.universe() || self.lists[1].len() != self.universe() {
            return Err("coloring or lists have the wrong length".into());
        }
        if let Some(v) = g.vertices().find(|&v| self.start.get(v) == NO_COLOR) {
            return Err(format!("vertex {v} has no starting color"));
        }
        if let Some((u, v)) = find_conflict(g, &self.start) {
            return Err(format!("starting coloring is improper on {u}-{v}"));
        }
        let mask = self.boundary_mask();
        if self.boundary_witness.phases.iter().flatten().any(|s| !mask[s.vertex]) {
            return Err("boundary witness recolors a vertex outside H".into());
        }
        let gh = g.induced(&mask);
        validate_witness(&gh, [&self.lists[0], &self.lists[1]], &self.start, &self.boundary_witness, None)
            .map_err(|e| format!("boundary witness is not a trajectory: {e}"))?;
        Ok(())
    }

    fn boundary_consecutive(&self) -> bool {
        let h = &self.boundary;
        if h.len() <= 1 {
            return h.iter().all(|&v| self.graph.is_outer_vertex(v));
        }
        let walk = self.graph.outer_walk_of(h[0]);
        let k = walk.len();
        let rev: Vec<Vertex> = h.iter().rev().copied().collect();
        (0..k).any(|s| {
            (0..h.len()).all(|i| walk[(s + i) % k] == h[i]) || (0..h.len()).all(|i| walk[(s + i) % k] == rev[i])
        }) && h.len() <= k
    }

    /// Evaluates the validity conditions of `mode`. The scene is assumed to
    /// pass [`Scene::check_structure`].
    pub fn check_valid(&self, mode: Mode) -> ValidityReport {
        let g = self.graph.graph();
        let [l1, l2] = &self.lists;
        let mut report = ValidityReport::default();
        if self.boundary.len() > mode.max_boundary() {
            report.push(Condition::SizeOfH, self.boundary.clone());
        }
        let internal = |v: Vertex| self.graph.is_internal(v);
        let lost = |v: Vertex| l1.get(v).difference(&l2.get(v)).len();
        match mode {
            Mode::General => {
                let ga = g
                    .vertices()
                    .filter(|&v| lost(v) > 1 || l1.get(v).len() < 6 || l2.get(v).len() < 7)
                    .collect();
                report.push(Condition::Ga, ga);
                let gb = g
                    .vertices()
                    .filter(|&v| internal(v) && (l1.get(v).len() < 10 || l2.get(v).len() < 9))
                    .collect();
                report.push(Condition::Gb, gb);
                if self.boundary.len() == 3 {
                    let delta = self.delta();
                    let forbidden: ColorSet = self
                        .boundary
                        .iter()
                        .flat_map(|&u| [delta[0].get(u), delta[1].get(u)])
                        .collect();
                    let gc = common_neighbors(g, &self.boundary)
                        .into_iter()
                        .filter(|&v| l1.get(v) == forbidden)
                        .collect();
                    report.push(Condition::Gc, gc);
                }
            }
            Mode::TriangleFree => {
                if let Some((a, b, c)) = g.find_triangle() {
                    report.push(Condition::TriangleFree, vec![a, b, c]);
                }
                let ta = g
                    .vertices()
                    .filter(|&v| lost(v) > 1 || l1.get(v).len() < 5 || l2.get(v).len() < 5)
                    .collect();
                report.push(Condition::Ta, ta);
                let big = |v: Vertex| l1.get(v).len() >= 7 && l2.get(v).len() >= 6;
                let mut tb: Vec<Vertex> = g.vertices().filter(|&v| internal(v) && !big(v)).collect();
                let is_path = self.boundary_is_path();
                let m = self.boundary.len();
                let mask = self.boundary_mask();
                if is_path && m >= 4 {
                    let ends = [self.boundary[0], self.boundary[m - 1]];
                    let good = ends
                        .iter()
                        .filter(|&&x| g.neighbors(x).iter().all(|&v| mask[v] || big(v)))
                        .count();
                    if good < m - 3 {
                        tb.extend(ends.iter().copied().filter(|&x| !g.neighbors(x).iter().all(|&v| mask[v] || big(v))));
                    }
                }
                report.push(Condition::Tb, tb);
                if is_path && m == 5 {
                    let tc = g
                        .vertices()
                        .filter(|&v| !mask[v] && g.neighbors(v).iter().filter(|&&u| mask[u]).count() > 1)
                        .collect();
                    report.push(Condition::Tc, tc);
                }
            }
        }
        report
    }
}

/// Vertices outside `set` adjacent to every vertex of `set`.
pub(crate) fn common_neighbors(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let Some(&first) = set.first() else { return Vec::new() };
    let mut out: Vec<Vertex> = g
        .neighbors(first)
        .iter()
        .copied()
        .filter(|v| !set.contains(v) && set.iter().all(|&u| g.has_edge(u, *v)))
        .collect();
    out.sort_unstable();
    out
}
