//! Recoloring sequences, two-phase witnesses and their composition.
//!
//! A sequence is a list of single-vertex recolorings replayed on a start
//! coloring. Sequences are normalized: a step never assigns a vertex the
//! color it already has. Validation is always an explicit call.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, Coloring, ListAssignment, Vertex, NO_COLOR};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub vertex: Vertex,
    pub color: Color,
}

impl Step {
    pub fn new(vertex: Vertex, color: Color) -> Self {
        Step { vertex, color }
    }
}

pub type RecoloringSequence = Vec<Step>;

/// The pair of once-only phases `(σ1, σ2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub phases: [RecoloringSequence; 2],
}

impl Witness {
    pub fn new(first: RecoloringSequence, second: RecoloringSequence) -> Self {
        Witness { phases: [first, second] }
    }

    pub fn len(&self) -> usize {
        self.phases[0].len() + self.phases[1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Both phases restricted to the vertices with `mask[v]`.
    pub fn restrict(&self, mask: &[bool]) -> Witness {
        Witness { phases: [restrict(&self.phases[0], mask), restrict(&self.phases[1], mask)] }
    }

    /// `σ1 + σ2` as one sequence.
    pub fn flatten(&self) -> RecoloringSequence {
        let mut out = self.phases[0].clone();
        out.extend_from_slice(&self.phases[1]);
        out
    }
}

/// The colorings `(φ0, φ1, φ2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub phi: [Coloring; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("start coloring is improper on edge {0}-{1}")]
    ImproperStart(Vertex, Vertex),
    #[error("step {0} creates a monochromatic edge")]
    ImproperStep(usize),
    #[error("step {0} uses a color outside the vertex's list")]
    ListViolation(usize),
    #[error("vertex {0} recolored twice in a once-only sequence")]
    OnceOnlyViolation(Vertex),
    #[error("step {0} recolors a late vertex before a non-late one")]
    LatenessViolation(usize),
    #[error("step {0} assigns the vertex its current color")]
    NoOpStep(usize),
    #[error("step {index} recolors vertex {vertex} more than the allowed number of times")]
    MaxRecolorings { index: usize, vertex: Vertex },
    #[error("step {0} names a vertex outside the graph or color 0")]
    UnknownVertex(usize),
    #[error("coloring at the end of phase {phase} violates the list of vertex {vertex}")]
    EndpointListViolation { phase: usize, vertex: Vertex },
    #[error("H-sequences do not realize the same phase endpoints")]
    IncompatibleEndpoints,
    #[error("witnesses disagree on the shared vertices: {0}")]
    IntersectionMismatch(String),
}

/// Which checks `apply_sequence` performs besides properness and normalization.
#[derive(Clone, Copy, Debug, Default)]
pub struct Constraints<'a> {
    pub lists: Option<&'a ListAssignment>,
    pub once_only: bool,
    /// Steps on these vertices must come after every other step.
    pub late_set: Option<&'a [bool]>,
    pub max_per_vertex: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Checks only the edges at the recolored vertex.
    #[default]
    Incremental,
    /// Rechecks every edge after every step.
    FromScratch,
}

pub fn restrict(seq: &[Step], mask: &[bool]) -> RecoloringSequence {
    seq.iter().copied().filter(|s| mask[s.vertex]).collect()
}

/// First monochromatic edge among vertices that carry a color.
pub fn find_conflict(g: &Graph, phi: &Coloring) -> Option<(Vertex, Vertex)> {
    g.edges()
        .into_iter()
        .find(|&(u, v)| phi.get(u) != NO_COLOR && phi.get(u) == phi.get(v))
}

pub fn is_proper(g: &Graph, phi: &Coloring) -> bool {
    find_conflict(g, phi).is_none()
}

/// Replays `seq` on `start` and returns the final coloring, or the first
/// violation of properness or of the requested constraints.
pub fn apply_sequence(
    g: &Graph,
    start: &Coloring,
    seq: &[Step],
    constraints: &Constraints<'_>,
    mode: CheckMode,
) -> Result<Coloring, KernelError> {
    if let Some((u, v)) = find_conflict(g, start) {
        return Err(KernelError::ImproperStart(u, v));
    }
    let mut phi = start.clone();
    let mut count = vec![0usize; g.universe()];
    let mut seen_late = false;
    for (i, step) in seq.iter().enumerate() {
        let v = step.vertex;
        if !g.contains(v) || step.color == NO_COLOR {
            return Err(KernelError::UnknownVertex(i));
        }
        if phi.get(v) == step.color {
            return Err(KernelError::NoOpStep(i));
        }
        if let Some(late) = constraints.late_set {
            if late[v] {
                seen_late = true;
            } else if seen_late {
                return Err(KernelError::LatenessViolation(i));
            }
        }
        if let Some(lists) = constraints.lists {
            if !lists.get(v).contains(step.color) {
                return Err(KernelError::ListViolation(i));
            }
        }
        count[v] += 1;
        if constraints.once_only && count[v] > 1 {
            return Err(KernelError::OnceOnlyViolation(v));
        }
        if constraints.max_per_vertex.is_some_and(|m| count[v] > m) {
            return Err(KernelError::MaxRecolorings { index: i, vertex: v });
        }
        phi.set(v, step.color);
        let proper = match mode {
            CheckMode::Incremental => g.neighbors(v).iter().all(|&u| phi.get(u) != step.color),
            CheckMode::FromScratch => is_proper(g, &phi),
        };
        if !proper {
            return Err(KernelError::ImproperStep(i));
        }
    }
    Ok(phi)
}

/// Replays a witness phase by phase, requiring once-only phases that are late
/// on `late_set`, and checks that each phase ends in an `L_i`-coloring of
/// every vertex of `g`.
pub fn validate_witness(
    g: &Graph,
    lists: [&ListAssignment; 2],
    start: &Coloring,
    witness: &Witness,
    late_set: Option<&[bool]>,
) -> Result<Trajectory, KernelError> {
    let mut phis = [start.clone(), start.clone(), start.clone()];
    for phase in 0..2 {
        let c = Constraints { lists: Some(lists[phase]), once_only: true, late_set, max_per_vertex: None };
        let next = apply_sequence(g, &phis[phase], &witness.phases[phase], &c, CheckMode::Incremental)?;
        if let Some(v) = g.vertices().find(|&v| !lists[phase].get(v).contains(next.get(v))) {
            return Err(KernelError::EndpointListViolation { phase: phase + 1, vertex: v });
        }
        phis[phase + 1] = next;
    }
    Ok(Trajectory { phi: phis })
}

/// Final colors after replaying `seq` on `start` without any checks.
pub fn replay_unchecked(start: &Coloring, seq: &[Step]) -> Coloring {
    let mut phi = start.clone();
    for s in seq {
        phi.set(s.vertex, s.color);
    }
    phi
}

/// Replaces the `H`-part of each phase of `omega` by the given `H`-sequences:
/// `π_i = ω_i^{G-H} + σ_i`. Both must move every vertex of `H` between the same
/// colors in each phase; the result is replayed to confirm properness.
pub fn reorder_witness(
    g: &Graph,
    start: &Coloring,
    h: &[bool],
    omega: &Witness,
    sigma_h: &Witness,
) -> Result<Witness, KernelError> {
    if sigma_h.phases.iter().flatten().any(|s| !h[s.vertex]) {
        return Err(KernelError::IncompatibleEndpoints);
    }
    let mut phi = start.clone();
    let mut out = Witness::default();
    for phase in 0..2 {
        let ours = replay_unchecked(&phi, &restrict(&omega.phases[phase], h));
        let theirs = replay_unchecked(&phi, &sigma_h.phases[phase]);
        if (0..g.universe()).any(|v| h[v] && ours.get(v) != theirs.get(v)) {
            return Err(KernelError::IncompatibleEndpoints);
        }
        let outside: Vec<bool> = h.iter().map(|&b| !b).collect();
        let mut pi = restrict(&omega.phases[phase], &outside);
        pi.extend_from_slice(&sigma_h.phases[phase]);
        let c = Constraints { once_only: true, late_set: Some(h), ..Default::default() };
        phi = apply_sequence(g, &phi, &pi, &c, CheckMode::Incremental)?;
        out.phases[phase] = pi;
    }
    Ok(out)
}

/// Merges a witness `w1` on `G1` with a witness `w2` on `G2` that is late on
/// `G1 ∩ G2`, giving `(π_1^{G2-V(G1)} + σ_1, π_2^{G2-V(G1)} + σ_2)` on `G`.
/// If the two disagree only in the order of the shared steps, `w1` is first
/// reordered to match `w2`.
pub fn combine(
    g: &Graph,
    start: &Coloring,
    g1: &[bool],
    g2: &[bool],
    h: &[bool],
    w1: &Witness,
    w2: &Witness,
) -> Result<Witness, KernelError> {
    let n = g.universe();
    let shared: Vec<bool> = (0..n).map(|v| g1[v] && g2[v]).collect();
    let only2: Vec<bool> = (0..n).map(|v| g2[v] && !g1[v]).collect();
    let mut phi = start.clone();
    for phase in 0..2 {
        let a = replay_unchecked(&phi, &restrict(&w1.phases[phase], &shared));
        let b = replay_unchecked(&phi, &restrict(&w2.phases[phase], &shared));
        if let Some(v) = (0..n).find(|&v| shared[v] && a.get(v) != b.get(v)) {
            return Err(KernelError::IntersectionMismatch(format!(
                "phase {} ends with color {} vs {} at vertex {v}",
                phase + 1,
                a.get(v),
                b.get(v)
            )));
        }
        phi = replay_unchecked(&phi, &w1.phases[phase]);
    }
    let w1 = if w1.restrict(&shared) == w2.restrict(&shared) {
        w1.clone()
    } else {
        let g1_graph = g.induced(g1);
        let start1 = start.restrict((0..n).filter(|&v| g1[v]));
        let slotted = substitute_shared(w1, &w2.restrict(&shared), &shared);
        if replay_phases(&g1_graph, &start1, &slotted, h).is_ok() {
            slotted
        } else if let Ok(r) = reorder_witness(&g1_graph, &start1, &shared, w1, &w2.restrict(&shared))
            .and_then(|r| replay_phases(&g1_graph, &start1, &r, h).map(|_| r))
        {
            r
        } else {
            // With w2 late on the shared part, w1's own order is always valid.
            w1.clone()
        }
    };
    let mut out = Witness::default();
    for phase in 0..2 {
        let mut seq = restrict(&w2.phases[phase], &only2);
        seq.extend_from_slice(&w1.phases[phase]);
        out.phases[phase] = seq;
    }
    replay_phases(g, start, &out, h)?;
    Ok(out)
}

/// Writes the shared steps of `shared_order` into the slots that `w` uses for
/// shared vertices, phase by phase.
fn substitute_shared(w: &Witness, shared_order: &Witness, shared: &[bool]) -> Witness {
    let mut out = Witness::default();
    for phase in 0..2 {
        let mut replacement = shared_order.phases[phase].iter();
        out.phases[phase] = w.phases[phase]
            .iter()
            .map(|s| if shared[s.vertex] { *replacement.next().unwrap_or(s) } else { *s })
            .collect();
    }
    out
}

fn replay_phases(g: &Graph, start: &Coloring, w: &Witness, late: &[bool]) -> Result<Coloring, KernelError> {
    let c = Constraints { once_only: true, late_set: Some(late), ..Default::default() };
    let mut phi = start.clone();
    for phase in 0..2 {
        phi = apply_sequence(g, &phi, &w.phases[phase], &c, CheckMode::Incremental)?;
    }
    Ok(phi)
}

/// The sequence undoing `seq`: replaying it after `start + seq` returns to `start`.
pub fn reverse(seq: &[Step], start: &Coloring) -> RecoloringSequence {
    let mut phi = start.clone();
    let mut undo = Vec::with_capacity(seq.len());
    for s in seq {
        undo.push(Step::new(s.vertex, phi.get(s.vertex)));
        phi.set(s.vertex, s.color);
    }
    undo.reverse();
    undo
}

/// Drops steps that do not change the color, given the start coloring.
pub fn normalize(seq: &[Step], start: &Coloring) -> RecoloringSequence {
    let mut phi = start.clone();
    let mut out = Vec::with_capacity(seq.len());
    for &s in seq {
        if phi.get(s.vertex) != s.color {
            phi.set(s.vertex, s.color);
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Graph {
        Graph::from_edges(2, &[(0, 1)])
    }

    fn run(g: &Graph, start: &[Color], seq: &[(Vertex, Color)]) -> Result<Coloring, KernelError> {
        let seq: Vec<Step> = seq.iter().map(|&(v, c)| Step::new(v, c)).collect();
        apply_sequence(g, &Coloring::from_vec(start.to_vec()), &seq, &Constraints::default(), CheckMode::FromScratch)
    }

    #[test]
    fn k2_examples() {
        assert_eq!(run(&k2(), &[1, 2], &[(0, 3), (1, 1)]).unwrap().0, vec![3, 1]);
        assert_eq!(run(&k2(), &[1, 2], &[(0, 2)]), Err(KernelError::ImproperStep(0)));
    }

    #[test]
    fn three_path_examples() {
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(run(&p, &[1, 2, 1], &[(0, 2)]), Err(KernelError::ImproperStep(0)));
        assert_eq!(run(&p, &[1, 2, 1], &[(1, 3), (0, 2)]).unwrap().0, vec![2, 3, 1]);
    }

    #[test]
    fn constraint_violations() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let start = Coloring::from_vec(vec![1, 2, 1]);
        let seq = vec![Step::new(2, 3), Step::new(2, 4)];
        let once = Constraints { once_only: true, ..Default::default() };
        assert_eq!(
            apply_sequence(&g, &start, &seq, &once, CheckMode::Incremental),
            Err(KernelError::OnceOnlyViolation(2))
        );
        let late = [true, false, false];
        let seq = vec![Step::new(0, 3), Step::new(2, 3)];
        let c = Constraints { late_set: Some(&late), ..Default::default() };
        assert_eq!(apply_sequence(&g, &start, &seq, &c, CheckMode::Incremental), Err(KernelError::LatenessViolation(1)));
        let lists = ListAssignment::uniform(3, crate::color::ColorSet::range(2));
        let c = Constraints { lists: Some(&lists), ..Default::default() };
        assert_eq!(apply_sequence(&g, &start, &seq, &c, CheckMode::Incremental), Err(KernelError::ListViolation(0)));
        assert_eq!(
            apply_sequence(&g, &start, &[Step::new(0, 1)], &Constraints::default(), CheckMode::Incremental),
            Err(KernelError::NoOpStep(0))
        );
        let c = Constraints { max_per_vertex: Some(2), ..Default::default() };
        let seq = vec![Step::new(2, 3), Step::new(2, 4), Step::new(2, 5)];
        assert_eq!(
            apply_sequence(&g, &start, &seq, &c, CheckMode::Incremental),
            Err(KernelError::MaxRecolorings { index: 2, vertex: 2 })
        );
    }

    #[test]
    fn reverse_examples() {
        let start = Coloring::from_vec(vec![1]);
        assert_eq!(reverse(&[Step::new(0, 3)], &start), vec![Step::new(0, 1)]);
        assert!(reverse(&[], &start).is_empty());
    }

    #[test]
    fn reorder_single_vertex_moves_h_step_last() {
        // Path 0-1-2 with H = {2}.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let start = Coloring::from_vec(vec![1, 2, 3]);
        let h = [false, false, true];
        let omega = Witness::new(vec![Step::new(2, 4), Step::new(0, 5)], vec![]);
        let sigma = Witness::new(vec![Step::new(2, 4)], vec![]);
        let pi = reorder_witness(&g, &start, &h, &omega, &sigma).unwrap();
        assert_eq!(pi.phases[0], vec![Step::new(0, 5), Step::new(2, 4)]);
        let bad = Witness::new(vec![Step::new(2, 5)], vec![]);
        assert_eq!(reorder_witness(&g, &start, &h, &omega, &bad), Err(KernelError::IncompatibleEndpoints));
    }

    #[test]
    fn reorder_two_vertex_h_in_opposite_order() {
        // 0-1-2-3-4 path, H = {3, 4}; ω swaps the colors of 3 and 4 via a third color.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let start = Coloring::from_vec(vec![1, 2, 1, 2, 1]);
        let h = [false, false, false, true, true];
        let omega = Witness::new(vec![Step::new(0, 3), Step::new(4, 3), Step::new(3, 4)], vec![]);
        let sigma = Witness::new(vec![Step::new(3, 4), Step::new(4, 3)], vec![]);
        let pi = reorder_witness(&g, &start, &h, &omega, &sigma).unwrap();
        assert_eq!(restrict(&pi.phases[0], &h), sigma.phases[0]);
    }

    #[test]
    fn combine_pendant_and_mismatch() {
        // Triangle 0 1 2 as G1 with H = {0}; pendant 3 on 2 as G2.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let start = Coloring::from_vec(vec![1, 2, 3, 1]);
        let g1 = [true, true, true, false];
        let g2 = [false, false, true, true];
        let h = [true, false, false, false];
        let w1 = Witness::new(vec![Step::new(2, 4), Step::new(0, 3)], vec![]);
        let w2 = Witness::new(vec![Step::new(3, 2), Step::new(2, 4)], vec![]);
        let w = combine(&g, &start, &g1, &g2, &h, &w1, &w2).unwrap();
        assert_eq!(w.phases[0], vec![Step::new(3, 2), Step::new(2, 4), Step::new(0, 3)]);
        let w2_bad = Witness::new(vec![Step::new(3, 2), Step::new(2, 5)], vec![]);
        assert!(matches!(
            combine(&g, &start, &g1, &g2, &h, &w1, &w2_bad),
            Err(KernelError::IntersectionMismatch(_))
        ));
    }

    #[test]
    fn combine_triangles_sharing_edge() {
        // Triangles 0 1 2 and 1 2 3 share the edge 12; H = {0}.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let start = Coloring::from_vec(vec![1, 2, 3, 1]);
        let g1 = [true, true, true, false];
        let g2 = [false, true, true, true];
        let h = [true, false, false, false];
        let w1 = Witness::new(vec![Step::new(1, 4), Step::new(2, 5), Step::new(0, 2)], vec![Step::new(0, 3)]);
        let w2 = Witness::new(vec![Step::new(3, 6), Step::new(2, 5), Step::new(1, 4)], vec![]);
        let w = combine(&g, &start, &g1, &g2, &h, &w1, &w2).unwrap();
        let c = Constraints { once_only: true, late_set: Some(&h), ..Default::default() };
        let mid = apply_sequence(&g, &start, &w.phases[0], &c, CheckMode::FromScratch).unwrap();
        assert_eq!(mid.0, vec![2, 4, 5, 6]);
        apply_sequence(&g, &mid, &w.phases[1], &c, CheckMode::FromScratch).unwrap();
    }
}
