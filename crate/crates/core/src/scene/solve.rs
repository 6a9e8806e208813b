//! Recursive lifting of the boundary trajectory of a valid scene.
//!
//! Each reduction returns the part of the witness outside `H`: the full
//! witness of a scene is `outside_i + β_i` in both phases. Every sub-scene is
//! checked for structure and validity before it is solved, and every lifted
//! witness is replayed before it is returned, so a failure is reported at the
//! reduction that caused it.

use thiserror::Error;

use crate::color::{Color, ColorSet, Coloring, ListAssignment, Vertex};
use crate::kernel::{replay_unchecked, validate_witness, Step, Trajectory, Witness};
use crate::plane::{PlaneGraph, Separator};

use super::reduce::{find_reduction_site, oriented_outer_cycle, ReductionSite};
use super::stable::stable_outer;
use super::{common_neighbors, Mode, Scene, ValidityReport};

#[derive(Clone, Debug, Error)]
pub enum SolveError {
    #[error("malformed scene: {0}")]
    Malformed(String),
    #[error("scene violates the validity conditions: {0:?}")]
    Invalid(ValidityReport),
    #[error("internal error: {reason}")]
    Internal { reason: String, dump: String },
}

pub(crate) fn internal(scene: &Scene, reason: impl Into<String>) -> SolveError {
    SolveError::Internal { reason: reason.into(), dump: scene.dump() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub trajectory: Trajectory,
    /// Once-only in each phase and late on `H`.
    pub witness: Witness,
}

/// Lifts the boundary trajectory of a valid scene to the whole graph.
pub fn solve(scene: &Scene, mode: Mode) -> Result<Solution, SolveError> {
    scene.check_structure().map_err(SolveError::Malformed)?;
    let report = scene.check_valid(mode);
    if !report.is_valid() {
        return Err(SolveError::Invalid(report));
    }
    let lift = with_large_stack(|| lift(scene, mode))?;
    let witness = lift.full(&scene.boundary_witness);
    let late = scene.boundary_mask();
    let trajectory = validate_witness(
        scene.graph.graph(),
        [&scene.lists[0], &scene.lists[1]],
        &scene.start,
        &witness,
        Some(&late),
    )
    .map_err(|e| internal(scene, format!("final witness rejected: {e}")))?;
    Ok(Solution { trajectory, witness })
}

/// Runs `f` on a thread with a stack large enough for deep recursion.
pub(crate) fn with_large_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, f)
            .expect("spawning solver thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

/// Recolorings outside `H`, per phase.
#[derive(Clone, Debug, Default)]
struct Lift {
    outside: [Vec<Step>; 2],
}

impl Lift {
    fn full(&self, beta: &Witness) -> Witness {
        let mut w = Witness::default();
        for i in 0..2 {
            w.phases[i] = self.outside[i].clone();
            w.phases[i].extend_from_slice(&beta.phases[i]);
        }
        w
    }

    fn then(mut self, other: &Lift) -> Lift {
        for i in 0..2 {
            self.outside[i].extend_from_slice(&other.outside[i]);
        }
        self
    }
}

fn colors_after(start: &Coloring, w: &Witness) -> [Coloring; 3] {
    let p1 = replay_unchecked(start, &w.phases[0]);
    let p2 = replay_unchecked(&p1, &w.phases[1]);
    [start.clone(), p1, p2]
}

fn sub(scene: &Scene, graph: PlaneGraph, boundary: Vec<Vertex>, witness: Witness) -> Scene {
    Scene {
        graph,
        boundary,
        lists: scene.lists.clone(),
        start: scene.start.clone(),
        boundary_witness: witness,
    }
}

/// Steps moving `v` through `colors = [c0, c1, c2]`, skipping no-ops.
fn vertex_steps(v: Vertex, colors: [Color; 3]) -> [Vec<Step>; 2] {
    let mut out: [Vec<Step>; 2] = Default::default();
    for i in 0..2 {
        if colors[i + 1] != colors[i] {
            out[i].push(Step::new(v, colors[i + 1]));
        }
    }
    out
}

fn pick(scene: &Scene, set: ColorSet, what: &str) -> Result<Color, SolveError> {
    set.min().ok_or_else(|| internal(scene, format!("no admissible color for {what}")))
}

fn lift(scene: &Scene, mode: Mode) -> Result<Lift, SolveError> {
    if let Err(e) = scene.check_structure() {
        return Err(internal(scene, format!("sub-scene is malformed: {e}")));
    }
    let report = scene.check_valid(mode);
    if !report.is_valid() {
        return Err(internal(scene, format!("sub-scene is not valid: {report:?}")));
    }
    let site = find_reduction_site(scene, mode).map_err(|e| internal(scene, e))?;
    let result = match site {
        ReductionSite::Base => Lift::default(),
        ReductionSite::Disconnected => disconnected(scene, mode)?,
        ReductionSite::CutVertex(v) => cut_vertex(scene, mode, v)?,
        ReductionSite::NonFacialCycle(c) => {
            let pieces = scene.graph.split(&Separator::Cycle(c.clone()));
            attach(scene, mode, pieces, c, None)?
        }
        ReductionSite::LowDegreeVertex(v) => low_degree(scene, mode, v)?,
        ReductionSite::OuterChord { u, v, straddling: false } => {
            let pieces = scene.graph.split(&Separator::Chord { u, v, side: scene.boundary.clone() });
            attach(scene, mode, pieces, vec![u, v], None)?
        }
        ReductionSite::OuterChord { u, v, straddling: true } => match mode {
            Mode::General => chord_general(scene, mode, u, v)?,
            Mode::TriangleFree => chord_triangle_free(scene, mode, u, v)?,
        },
        ReductionSite::BoundaryCycle => {
            let h = &scene.boundary;
            let g = scene
                .graph
                .without_edge(h[h.len() - 1], h[0])
                .map_err(|e| internal(scene, e.to_string()))?;
            lift(&sub(scene, g, h.clone(), scene.boundary_witness.clone()), mode)?
        }
        ReductionSite::SmallH => extend_boundary(scene, mode)?,
        ReductionSite::InternalFan { x, v1, v2 } => fan(scene, mode, x, v1, v2)?,
        ReductionSite::ShortOuterFace => match mode {
            Mode::General => short_general(scene, mode)?,
            Mode::TriangleFree => short_triangle_free(scene, mode)?,
        },
        ReductionSite::MainStep => main_step(scene, mode)?,
    };
    let late = scene.boundary_mask();
    let full = result.full(&scene.boundary_witness);
    validate_witness(scene.graph.graph(), [&scene.lists[0], &scene.lists[1]], &scene.start, &full, Some(&late))
        .map_err(|e| internal(scene, format!("lift produced by {:?} rejected: {e}", site_name(scene, mode))))?;
    Ok(result)
}

fn site_name(scene: &Scene, mode: Mode) -> String {
    find_reduction_site(scene, mode).map(|s| format!("{s:?}")).unwrap_or_default()
}

fn disconnected(scene: &Scene, mode: Mode) -> Result<Lift, SolveError> {
    let comps = scene.graph.graph().components();
    let anchor = scene.boundary.first().copied();
    let mut out = Lift::default();
    let mut anchored = None;
    for comp in comps {
        let g = scene.graph.induced_on(&comp).map_err(|e| internal(scene, e.to_string()))?;
        if anchor.is_some_and(|a| comp.binary_search(&a).is_ok()) {
            anchored = Some(g);
            continue;
        }
        let piece = lift(&sub(scene, g, Vec::new(), Witness::default()), mode)?;
        out = out.then(&piece);
    }
    if let Some(g) = anchored {
        let piece = lift(&sub(scene, g, scene.boundary.clone(), scene.boundary_witness.clone()), mode)?;
        out = out.then(&piece);
    }
    Ok(out)
}

/// Solves `G1` (holding `H`) first, then `G2` anchored on the separator with
/// the separator's part of `G1`'s witness.
fn attach(
    scene: &Scene,
    mode: Mode,
    pieces: Result<(PlaneGraph, PlaneGraph), crate::plane::PlaneError>,
    separator: Vec<Vertex>,
    lists1: Option<[ListAssignment; 2]>,
) -> Result<Lift, SolveError> {
    let (g1, g2) = pieces.map_err(|e| internal(scene, e.to_string()))?;
    let mut s1 = sub(scene, g1, scene.boundary.clone(), scene.boundary_witness.clone());
    if let Some(l) = lists1 {
        s1.lists = l;
    }
    let lift1 = lift(&s1, mode)?;
    let full1 = lift1.full(&scene.boundary_witness);
    let mut mask = vec![false; scene.universe()];
    for &x in &separator {
        mask[x] = true;
    }
    let boundary2 = order_on_outer(&g2, &separator).ok_or_else(|| internal(scene, "separator not consecutive in the second piece"))?;
    let lift2 = lift(&sub(scene, g2, boundary2, full1.restrict(&mask)), mode)?;
    Ok(lift2.then(&lift1))
}

/// Orders `set` as a consecutive segment of the outer walk of `g`.
fn order_on_outer(g: &PlaneGraph, set: &[Vertex]) -> Option<Vec<Vertex>> {
    if set.len() <= 1 {
        return Some(set.to_vec());
    }
    let walk = g.outer_walk_of(set[0]);
    let k = walk.len();
    if set.len() > k {
        return None;
    }
    (0..k).find_map(|s| {
        let seg: Vec<Vertex> = (0..set.len()).map(|i| walk[(s + i) % k]).collect();
        let mut a = seg.clone();
        let mut b = set.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        (a == b && a.windows(2).all(|w| w[0] != w[1])).then_some(seg)
    })
}

fn cut_vertex(scene: &Scene, mode: Mode, v: Vertex) -> Result<Lift, SolveError> {
    let pg = &scene.graph;
    let comps = pg.graph().without_vertices(&[v]).components();
    let h_mask = scene.boundary_mask();
    let has_h = |c: &Vec<Vertex>| c.iter().any(|&x| h_mask[x]);
    let outer_in = |c: &[Vertex]| c.iter().any(|&x| pg.is_outer_vertex(x));
    let free: Vec<usize> = (0..comps.len()).filter(|&i| !has_h(&comps[i])).collect();
    if free.is_empty() {
        if !h_mask[v] || comps.len() != 2 {
            return Err(internal(scene, format!("cut vertex {v} splits H unexpectedly")));
        }
        let mut out = Lift::default();
        for comp in &comps {
            let mut keep: Vec<Vertex> = comp.clone();
            keep.push(v);
            let g = pg.induced_on(&keep).map_err(|e| internal(scene, e.to_string()))?;
            let mut mask = vec![false; scene.universe()];
            for &x in &keep {
                mask[x] = true;
            }
            let h: Vec<Vertex> = scene.boundary.iter().copied().filter(|&x| mask[x]).collect();
            let w = scene.boundary_witness.restrict(&mask);
            out = out.then(&lift(&sub(scene, g, h, w), mode)?);
        }
        return Ok(out);
    }
    // Detach a component without H such that the rest still reaches the outer face.
    let chosen = free
        .iter()
        .copied()
        .find(|&i| {
            comps
                .iter()
                .enumerate()
                .any(|(j, c)| j != i && outer_in(c))
        })
        .ok_or_else(|| internal(scene, format!("no detachable block at cut vertex {v}")))?;
    let mut keep2 = comps[chosen].clone();
    keep2.push(v);
    let mut in2 = vec![false; scene.universe()];
    for &x in &comps[chosen] {
        in2[x] = true;
    }
    let keep1: Vec<Vertex> = pg.vertices().filter(|&x| !in2[x]).collect();
    let pieces = pg
        .induced_on(&keep1)
        .and_then(|g1| pg.induced_on(&keep2).map(|g2| (g1, g2)));
    attach(scene, mode, pieces, vec![v], None)
}

fn low_degree(scene: &Scene, mode: Mode, v: Vertex) -> Result<Lift, SolveError> {
    let g = scene.graph.without_vertices(&[v]).map_err(|e| internal(scene, e.to_string()))?;
    let inner = lift(&sub(scene, g, scene.boundary.clone(), scene.boundary_witness.clone()), mode)?;
    let psi = colors_after(&scene.start, &inner.full(&scene.boundary_witness));
    let mut c = [scene.start.get(v); 3];
    for i in 1..3 {
        let mut avoid = ColorSet::empty();
        for &u in scene.graph.neighbors(v) {
            avoid.insert(psi[i - 1].get(u));
            avoid.insert(psi[i].get(u));
        }
        c[i] = pick(scene, scene.lists[i - 1].get(v).difference(&avoid), "low-degree vertex")?;
    }
    let steps = vertex_steps(v, c);
    let mut out = Lift { outside: steps };
    out = out.then(&inner);
    Ok(out)
}

fn chord_general(scene: &Scene, mode: Mode, h2: Vertex, v: Vertex) -> Result<Lift, SolveError> {
    let g = scene.graph.graph();
    let h = &scene.boundary;
    if h.len() != 3 || h[1] != h2 {
        return Err(internal(scene, "straddling chord not at the middle of a 3-vertex H"));
    }
    let delta = scene.delta();
    let mut c = [scene.start.get(v); 3];
    for i in 1..3 {
        let mut avoid = ColorSet::empty();
        for &u in h {
            if g.has_edge(u, v) {
                avoid.insert(delta[i - 1].get(u));
                avoid.insert(delta[i].get(u));
            }
        }
        if i == 1 {
            for hj in [h[0], h[2]] {
                let base = ColorSet::from_colors([
                    scene.start.get(v),
                    delta[0].get(h2),
                    delta[1].get(h2),
                    delta[0].get(hj),
                    delta[1].get(hj),
                ]);
                for z in common_neighbors(g, &[v, h2, hj]) {
                    let lz = scene.lists[0].get(z);
                    let rest = lz.difference(&base);
                    if base.is_subset(&lz) && rest.len() == 1 {
                        avoid = avoid.union(&rest);
                    }
                }
            }
        }
        c[i] = pick(scene, scene.lists[i - 1].get(v).difference(&avoid), "chord endpoint")?;
    }
    let vsteps = vertex_steps(v, c);
    let mut pi = Witness::default();
    for i in 0..2 {
        pi.phases[i] = vsteps[i].clone();
        pi.phases[i].extend_from_slice(&scene.boundary_witness.phases[i]);
    }
    let (g1, g2) = scene
        .graph
        .split(&Separator::Chord { u: h2, v, side: vec![h[0]] })
        .map_err(|e| internal(scene, e.to_string()))?;
    let mut out = Lift::default();
    for (piece, end) in [(g1, h[0]), (g2, h[2])] {
        let boundary = vec![end, h2, v];
        let mut mask = vec![false; scene.universe()];
        for &x in &boundary {
            mask[x] = true;
        }
        out = out.then(&lift(&sub(scene, piece, boundary, pi.restrict(&mask)), mode)?);
    }
    Ok(out.then(&Lift { outside: vsteps }))
}

fn chord_triangle_free(scene: &Scene, mode: Mode, ht: Vertex, v: Vertex) -> Result<Lift, SolveError> {
    let m = scene.boundary.len();
    let mut hs = scene.boundary.clone();
    let mut t = hs.iter().position(|&x| x == ht).ok_or_else(|| internal(scene, "chord not at H"))? + 1;
    if t > m.div_ceil(2) {
        hs.reverse();
        t = m + 1 - t;
    }
    let (g1, g2) = scene
        .graph
        .split(&Separator::Chord { u: ht, v, side: vec![hs[0]] })
        .map_err(|e| internal(scene, e.to_string()))?;
    let mut mask2 = vec![false; scene.universe()];
    for &x in &hs[t - 1..] {
        mask2[x] = true;
    }
    let s2 = sub(scene, g2, hs[t - 1..].to_vec(), scene.boundary_witness.restrict(&mask2));
    let omega = lift(&s2, mode)?;
    let psi = colors_after(&scene.start, &omega.full(&s2.boundary_witness));
    let vsteps = vertex_steps(v, [psi[0].get(v), psi[1].get(v), psi[2].get(v)]);
    let mut mask_q = vec![false; scene.universe()];
    for &x in &hs[..t] {
        mask_q[x] = true;
    }
    let beta_q = scene.boundary_witness.restrict(&mask_q);
    let mut gamma = Witness::default();
    for i in 0..2 {
        gamma.phases[i] = vsteps[i].clone();
        gamma.phases[i].extend_from_slice(&beta_q.phases[i]);
    }
    let mut q = hs[..t].to_vec();
    q.push(v);
    let pi = lift(&sub(scene, g1, q, gamma), mode)?;
    Ok(pi.then(&omega))
}

fn extend_boundary(scene: &Scene, mode: Mode) -> Result<Lift, SolveError> {
    let h = &scene.boundary;
    let v = if h.is_empty() {
        scene
            .graph
            .vertices()
            .find(|&x| scene.graph.is_outer_vertex(x))
            .ok_or_else(|| internal(scene, "no outer vertex"))?
    } else {
        let k = oriented_outer_cycle(scene).map_err(|e| internal(scene, e))?;
        *k.get(h.len()).ok_or_else(|| internal(scene, "outer cycle too short to extend H"))?
    };
    let delta = scene.delta();
    let mut c = [scene.start.get(v); 3];
    for i in 1..3 {
        let avoid: ColorSet = h.iter().flat_map(|&u| [delta[i - 1].get(u), delta[i].get(u)]).collect();
        c[i] = pick(scene, scene.lists[i - 1].get(v).difference(&avoid), "boundary extension")?;
    }
    let vsteps = vertex_steps(v, c);
    let mut beta = Witness::default();
    for i in 0..2 {
        beta.phases[i] = vsteps[i].clone();
        beta.phases[i].extend_from_slice(&scene.boundary_witness.phases[i]);
    }
    let mut h2 = h.clone();
    h2.push(v);
    let inner = lift(&sub(scene, scene.graph.clone(), h2, beta), mode)?;
    Ok(inner.then(&Lift { outside: vsteps }))
}

fn fan(scene: &Scene, mode: Mode, x: Vertex, v1: Vertex, v2: Vertex) -> Result<Lift, SolveError> {
    let (g1, g2) = scene
        .graph
        .split(&Separator::Path { v1, x, v2, side: scene.boundary.clone() })
        .map_err(|e| internal(scene, e.to_string()))?;
    let mut lists1 = None;
    if mode == Mode::General {
        let g = scene.graph.graph();
        let h2 = scene.boundary[1];
        let z = common_neighbors(g, &[x, v1, v2])
            .into_iter()
            .find(|&z| z != h2 && g2.contains(z) && scene.graph.is_outer_vertex(z));
        if let Some(z) = z {
            let avoid = ColorSet::from_colors([scene.start.get(x), scene.start.get(v1), scene.start.get(v2)]);
            let c: ColorSet = scene.lists[0].get(z).difference(&avoid).iter().take(3).collect();
            if c.len() != 3 {
                return Err(internal(scene, format!("fan vertex {z} has fewer than three spare colors")));
            }
            let mut l = scene.lists.clone();
            *l[0].get_mut(x) = l[0].get(x).difference(&c);
            lists1 = Some(l);
        }
    }
    attach(scene, mode, Ok((g1, g2)), vec![v1, x, v2], lists1)
}

fn short_general(scene: &Scene, mode: Mode) -> Result<Lift, SolveError> {
    let k = oriented_outer_cycle(scene).map_err(|e| internal(scene, e))?;
    if k.len() != 4 || scene.boundary.len() != 3 {
        return Err(internal(scene, "short outer face expects a 4-cycle around a 3-vertex H"));
    }
    let (h1, h3, w) = (k[0], k[2], k[3]);
    let delta = scene.delta();
    let mut c = [scene.start.get(w); 3];
    for i in 1..3 {
        let avoid = ColorSet::from_colors([delta[i - 1].get(h1), delta[i].get(h1), delta[i - 1].get(h3), delta[i].get(h3)]);
        c[i] = pick(scene, scene.lists[i - 1].get(w).difference(&avoid), "fourth outer vertex")?;
    }
    let mut lists = scene.lists.clone();
    let drop1 = ColorSet::from_colors(c);
    let drop2 = ColorSet::from_colors([c[1], c[2]]);
    for &u in scene.graph.neighbors(w) {
        if scene.graph.is_internal(u) {
            *lists[0].get_mut(u) = lists[0].get(u).difference(&drop1);
            *lists[1].get_mut(u) = lists[1].get(u).difference(&drop2);
        }
    }
    let g = scene.graph.without_vertices(&[w]).map_err(|e| internal(scene, e.to_string()))?;
    let mut s = sub(scene, g, scene.boundary.clone(), scene.boundary_witness.clone());
    s.lists = lists;
    let inner = lift(&s, mode)?;
    Ok(inner.then(&Lift { outside: vertex_steps(w, c) }))
}

fn short_triangle_free(scene: &Scene, mode: Mode) -> Result<Lift, SolveError> {
    let k = oriented_outer_cycle(scene).map_err(|e| internal(scene, e))?;
    let m = scene.boundary.len();
    let rest = &k[m..];
    if rest.is_empty() || rest.len() > 2 {
        return Err(internal(scene, format!("short outer face with {} vertices outside H", rest.len())));
    }
    let gk = scene.graph.graph().induced_on(&k);
    let mut late = vec![false; scene.universe()];
    for &x in &k[..m] {
        late[x] = true;
    }
    let lists = [&scene.lists[0], &scene.lists[1]];
    let choices = |phase: usize, v: Vertex| -> Vec<Color> { lists[phase].get(v).iter().collect() };
    let orders: Vec<Vec<Vertex>> = if rest.len() == 1 {
        vec![rest.to_vec()]
    } else {
        vec![rest.to_vec(), vec![rest[1], rest[0]]]
    };
    let colorings = |phase: usize| -> Vec<Vec<Color>> {
        let mut out = vec![Vec::new()];
        for &v in rest {
            out = out
                .into_iter()
                .flat_map(|p| choices(phase, v).into_iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                }))
                .collect();
        }
        out
    };
    let steps_for = |order: &[Vertex], colors: &[Color], from: &Coloring| -> Vec<Step> {
        order
            .iter()
            .filter_map(|&v| {
                let c = colors[rest.iter().position(|&r| r == v).expect("in rest")];
                (from.get(v) != c).then_some(Step::new(v, c))
            })
            .collect()
    };
    for c1 in colorings(0) {
        for o1 in &orders {
            let s1 = steps_for(o1, &c1, &scene.start);
            let mid = replay_unchecked(&scene.start, &s1);
            for c2 in colorings(1) {
                for o2 in &orders {
                    let s2 = steps_for(o2, &c2, &mid);
                    let mut w = Witness::new(s1.clone(), s2.clone());
                    for i in 0..2 {
                        w.phases[i].extend_from_slice(&scene.boundary_witness.phases[i]);
                    }
                    if validate_witness(&gk, lists, &scene.start, &w, Some(&late)).is_ok() {
                        let inner = lift(&sub(scene, scene.graph.clone(), k.clone(), w), mode)?;
                        return Ok(inner.then(&Lift { outside: [s1, s2] }));
                    }
                }
            }
        }
    }
    Err(internal(scene, "no lift of the boundary trajectory to the short outer cycle"))
}

fn main_step(scene: &Scene, mode: Mode) -> Result<Lift, SolveError> {
    let st = stable_outer(scene, mode)?;
    let m = scene.boundary.len();
    let rest = &st.cycle[m..];
    let psi1 = replay_unchecked(&scene.start, &st.steps);
    let mut lists = scene.lists.clone();
    let g = scene.graph.graph();
    let mut on_rest = vec![false; scene.universe()];
    for &w in rest {
        on_rest[w] = true;
    }
    let mut on_k = on_rest.clone();
    for &h in &scene.boundary {
        on_k[h] = true;
    }
    for u in g.vertices().filter(|&u| !on_k[u]) {
        for &w in g.neighbors(u) {
            if on_rest[w] {
                *lists[0].get_mut(u) = lists[0].get(u).without(scene.start.get(w)).without(psi1.get(w));
                *lists[1].get_mut(u) = lists[1].get(u).without(psi1.get(w));
            }
        }
    }
    let g2 = scene.graph.without_vertices(rest).map_err(|e| internal(scene, e.to_string()))?;
    let mut s = sub(scene, g2, scene.boundary.clone(), scene.boundary_witness.clone());
    s.lists = lists;
    let omega = lift(&s, mode)?;
    Ok(omega.then(&Lift { outside: [st.steps, Vec::new()] }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::ListAssignment;
    use crate::kernel::{apply_sequence, CheckMode, Constraints};

    fn polygon(n: usize, extra: &[(Vertex, Vertex)], inner: &[(f64, f64)]) -> PlaneGraph {
        let mut pos: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect();
        pos.extend_from_slice(inner);
        let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        edges.extend_from_slice(extra);
        PlaneGraph::from_positions(pos.len(), &edges, &pos).unwrap()
    }

    fn check(scene: &Scene, mode: Mode) -> Solution {
        let sol = solve(scene, mode).unwrap();
        let late = scene.boundary_mask();
        let c = Constraints { lists: Some(&scene.lists[0]), once_only: true, late_set: Some(&late), max_per_vertex: None };
        let mid = apply_sequence(scene.graph.graph(), &scene.start, &sol.witness.phases[0], &c, CheckMode::FromScratch).unwrap();
        let c = Constraints { lists: Some(&scene.lists[1]), ..c };
        apply_sequence(scene.graph.graph(), &mid, &sol.witness.phases[1], &c, CheckMode::FromScratch).unwrap();
        assert_eq!(sol.witness.restrict(&late), scene.boundary_witness);
        sol
    }

    #[test]
    fn base_case_returns_boundary_witness() {
        let g = polygon(3, &[], &[]);
        let l = ColorSet::range(10);
        let lists = [ListAssignment::uniform(3, l), ListAssignment::uniform(3, l)];
        let beta = Witness::new(vec![Step::new(0, 4)], vec![Step::new(1, 5)]);
        let s = Scene::new(g, vec![0, 1, 2], lists, Coloring::from_vec(vec![1, 2, 3]), beta.clone());
        assert_eq!(check(&s, Mode::General).witness, beta);
    }

    #[test]
    fn six_cycle_with_three_path_boundary() {
        let g = polygon(6, &[], &[]);
        let lists = [ListAssignment::uniform(6, ColorSet::range(6)), ListAssignment::uniform(6, ColorSet::range(7))];
        let beta = Witness::new(vec![Step::new(1, 3), Step::new(0, 2)], vec![Step::new(2, 7)]);
        let s = Scene::new(g, vec![0, 1, 2], lists, Coloring::from_vec(vec![1, 2, 1, 2, 1, 2]), beta);
        let sol = check(&s, Mode::General);
        assert!(sol.witness.len() <= 2 * 6);
    }

    #[test]
    fn triangle_free_five_cycle_with_internal_vertex() {
        // 5-cycle plus internal 5 joined to 0 and 2.
        let g = polygon(5, &[(5, 0), (5, 2)], &[(0.3, 0.3)]);
        let mut l1 = ListAssignment::uniform(6, ColorSet::range(5));
        let mut l2 = ListAssignment::uniform(6, ColorSet::from_colors([1, 2, 3, 4, 6]));
        l1.0[5] = ColorSet::range(7);
        l2.0[5] = ColorSet::range(6);
        let start = Coloring::from_vec(vec![1, 2, 3, 1, 2, 5]);
        let s = Scene::unanchored(g, [l1, l2], start);
        assert!(s.check_valid(Mode::TriangleFree).is_valid());
        let sol = check(&s, Mode::TriangleFree);
        assert!(sol.witness.len() <= 2 * 6);
        assert!(sol.trajectory.phi[2].0.iter().all(|&c| c != 5));
    }

    #[test]
    fn wheel_elimination_general() {
        let mut pos = vec![(0.0, 0.0)];
        let mut edges = Vec::new();
        for i in 0..6 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 6.0;
            pos.push((t.cos(), t.sin()));
            edges.push((0, i + 1));
            edges.push((i + 1, (i + 1) % 6 + 1));
        }
        let g = PlaneGraph::from_positions(7, &edges, &pos).unwrap();
        let l = ListAssignment::uniform(7, ColorSet::range(10));
        let f = [8, 10, 9, 10, 9, 10, 9];
        let l2 = ListAssignment((0..7).map(|v| ColorSet::range(10).without(f[v])).collect());
        let start = Coloring::from_vec(f.to_vec());
        let s = Scene::unanchored(g, [l, l2], start);
        let sol = check(&s, Mode::General);
        for v in 0..7 {
            assert_ne!(sol.trajectory.phi[2].get(v), f[v]);
        }
    }
}
