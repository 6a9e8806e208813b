//! Choice of the next reduction for a scene, in a fixed priority order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::color::Vertex;
use crate::graph::Graph;

use super::{Mode, Scene};

/// The reduction `solve` applies next. Sites are tested in the order of the
/// variants below and the first applicable one is returned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionSite {
    /// `V(G) = V(H)`.
    Base,
    Disconnected,
    CutVertex(Vertex),
    /// A triangle (general) or a 4- or 5-cycle (triangle-free) that does not
    /// bound a face.
    NonFacialCycle(Vec<Vertex>),
    /// A vertex outside `H` of degree at most two (triangle-free only).
    LowDegreeVertex(Vertex),
    /// A chord `uv` of the outer cycle. When `straddling`, `u` is an inner
    /// vertex of `H` and `H` has vertices on both sides of the chord.
    OuterChord { u: Vertex, v: Vertex, straddling: bool },
    /// `H` is the whole outer cycle.
    BoundaryCycle,
    /// `H` has fewer than three vertices.
    SmallH,
    /// An internal vertex `x` with two non-adjacent neighbors `v1`, `v2` on the
    /// outer cycle away from the inner vertices of `H`.
    InternalFan { x: Vertex, v1: Vertex, v2: Vertex },
    /// Outer cycle of length 4 (general) or at most 5 (triangle-free).
    ShortOuterFace,
    MainStep,
}

pub fn find_reduction_site(scene: &Scene, mode: Mode) -> Result<ReductionSite, String> {
    let pg = &scene.graph;
    let g = pg.graph();
    let h = &scene.boundary;
    let mask = scene.boundary_mask();
    if g.vertex_count() == h.len() {
        return Ok(ReductionSite::Base);
    }
    if !g.is_connected() {
        return Ok(ReductionSite::Disconnected);
    }
    if let Some(&v) = g.articulation_points().first() {
        return Ok(ReductionSite::CutVertex(v));
    }
    if g.vertex_count() >= 4 {
        let max_len = match mode {
            Mode::General => 3,
            Mode::TriangleFree => 5,
        };
        let facial: HashSet<Vec<Vertex>> = pg
            .faces()
            .walks()
            .iter()
            .filter(|w| w.len() <= max_len)
            .map(|w| {
                let mut vs: Vec<Vertex> = w.iter().map(|d| d.0).collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        for c in short_cycles(g, max_len) {
            let mut key = c.clone();
            key.sort_unstable();
            if !facial.contains(&key) {
                return Ok(ReductionSite::NonFacialCycle(c));
            }
        }
    }
    if mode == Mode::TriangleFree {
        if let Some(v) = g.vertices().find(|&v| !mask[v] && g.degree(v) <= 2) {
            return Ok(ReductionSite::LowDegreeVertex(v));
        }
    }
    let k = oriented_outer_cycle(scene)?;
    let pos = positions(&k, scene.universe());
    let inner_h: Vec<Vertex> = if h.len() >= 3 { h[1..h.len() - 1].to_vec() } else { Vec::new() };
    let mut straddling = None;
    for (u, v) in chords(g, &k, &pos) {
        let (ab, ba) = arcs(&k, &pos, u, v);
        let rest: Vec<Vertex> = h.iter().copied().filter(|&x| x != u && x != v).collect();
        let in_ab = rest.iter().any(|x| ab.contains(x));
        let in_ba = rest.iter().any(|x| ba.contains(x));
        if !(in_ab && in_ba) {
            return Ok(ReductionSite::OuterChord { u, v, straddling: false });
        }
        if straddling.is_none() {
            let (hu, other) = if mask[u] { (u, v) } else { (v, u) };
            straddling = Some(ReductionSite::OuterChord { u: hu, v: other, straddling: true });
        }
    }
    if let Some(site) = straddling {
        return Ok(site);
    }
    if h.len() >= 3 && h.len() == k.len() {
        return Ok(ReductionSite::BoundaryCycle);
    }
    if h.len() < 3 {
        return Ok(ReductionSite::SmallH);
    }
    let mut excluded = vec![false; scene.universe()];
    match mode {
        Mode::General => excluded[h[1]] = true,
        Mode::TriangleFree => {
            for &x in &inner_h {
                excluded[x] = true;
            }
        }
    }
    for x in g.vertices().filter(|&x| pg.is_internal(x)) {
        let mut nb: Vec<Vertex> = g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&u| pos[u] != usize::MAX && !excluded[u])
            .collect();
        nb.sort_unstable();
        for (i, &v1) in nb.iter().enumerate() {
            if let Some(&v2) = nb[i + 1..].iter().find(|&&v2| !g.has_edge(v1, v2)) {
                return Ok(ReductionSite::InternalFan { x, v1, v2 });
            }
        }
    }
    let short = match mode {
        Mode::General => k.len() <= 4,
        Mode::TriangleFree => k.len() <= 5,
    };
    if short {
        return Ok(ReductionSite::ShortOuterFace);
    }
    Ok(ReductionSite::MainStep)
}

/// The outer cycle of a 2-connected graph, rotated and oriented so that it
/// starts with `H` in the given order.
pub(crate) fn oriented_outer_cycle(scene: &Scene) -> Result<Vec<Vertex>, String> {
    let mut k = scene.graph.outer_cycle().map_err(|e| e.to_string())?;
    let h = &scene.boundary;
    if h.is_empty() {
        return Ok(k);
    }
    let len = k.len();
    let start = k.iter().position(|&x| x == h[0]).ok_or("H is not on the outer cycle")?;
    k.rotate_left(start);
    if h.len() >= 2 && k[1] != h[1] {
        k[1..].reverse();
    }
    if k.len() != len || k[..h.len()] != h[..] {
        return Err(format!("H {h:?} is not consecutive on the outer cycle {k:?}"));
    }
    Ok(k)
}

pub(crate) fn positions(k: &[Vertex], universe: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; universe];
    for (i, &v) in k.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Chords of the cycle `k`, as sorted pairs, in increasing order.
pub(crate) fn chords(g: &Graph, k: &[Vertex], pos: &[usize]) -> Vec<(Vertex, Vertex)> {
    let len = k.len();
    let mut out = Vec::new();
    for &u in k {
        for &v in g.neighbors(u) {
            if u < v && pos[v] != usize::MAX {
                let d = pos[u].abs_diff(pos[v]);
                if d != 1 && d != len - 1 {
                    out.push((u, v));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Vertices strictly between `u` and `v` along `k` in each direction.
pub(crate) fn arcs(k: &[Vertex], pos: &[usize], u: Vertex, v: Vertex) -> (Vec<Vertex>, Vec<Vertex>) {
    let len = k.len();
    let walk = |from: usize, to: usize| {
        let mut out = Vec::new();
        let mut i = (from + 1) % len;
        while i != to {
            out.push(k[i]);
            i = (i + 1) % len;
        }
        out
    };
    (walk(pos[u], pos[v]), walk(pos[v], pos[u]))
}

/// All cycles of length at most `max_len`, each listed once starting from its
/// smallest vertex, in lexicographic order of that listing.
pub(crate) fn short_cycles(g: &Graph, max_len: usize) -> Vec<Vec<Vertex>> {
    fn extend(g: &Graph, path: &mut Vec<Vertex>, on_path: &mut [bool], max_len: usize, out: &mut Vec<Vec<Vertex>>) {
        let s = path[0];
        let last = *path.last().expect("nonempty");
        let mut nb: Vec<Vertex> = g.neighbors(last).to_vec();
        nb.sort_unstable();
        for w in nb {
            if w == s && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            } else if w > s && !on_path[w] && path.len() < max_len {
                on_path[w] = true;
                path.push(w);
                extend(g, path, on_path, max_len, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.universe()];
    for s in g.vertices() {
        on_path[s] = true;
        let mut path = vec![s];
        extend(g, &mut path, &mut on_path, max_len, &mut out);
        on_path[s] = false;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::{ColorSet, Coloring, ListAssignment};
    use crate::kernel::Witness;
    use crate::plane::PlaneGraph;

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

    fn scene(g: PlaneGraph, h: Vec<Vertex>, start: Vec<u8>) -> Scene {
        let n = g.universe();
        let lists = [ListAssignment::uniform(n, ColorSet::range(10)), ListAssignment::uniform(n, ColorSet::range(10))];
        Scene::new(g, h, lists, Coloring::from_vec(start), Witness::default())
    }

    #[test]
    fn six_cycle_with_three_path_is_main_step_in_general_mode() {
        let s = scene(polygon(6, &[], &[]), vec![0, 1, 2], vec![1, 2, 1, 2, 1, 2]);
        assert_eq!(find_reduction_site(&s, Mode::General).unwrap(), ReductionSite::MainStep);
        // Degree-2 vertices outside H are removed first in triangle-free mode.
        assert_eq!(find_reduction_site(&s, Mode::TriangleFree).unwrap(), ReductionSite::LowDegreeVertex(3));
    }

    #[test]
    fn five_cycle_chord_from_middle_of_h() {
        let s = scene(polygon(5, &[(1, 3)], &[]), vec![0, 1, 2], vec![1, 2, 1, 3, 2]);
        assert_eq!(
            find_reduction_site(&s, Mode::General).unwrap(),
            ReductionSite::OuterChord { u: 1, v: 3, straddling: true }
        );
    }

    #[test]
    fn internal_vertex_on_opposite_rim_vertices_is_a_fan() {
        // 6-cycle, H = 0 1 2, internal 6 adjacent to 0 and 3 plus 4 so that it
        // has degree three.
        let s = scene(
            polygon(6, &[(6, 0), (6, 3), (6, 4)], &[(0.1, -0.1)]),
            vec![0, 1, 2],
            vec![1, 2, 1, 2, 1, 2, 3],
        );
        assert_eq!(
            find_reduction_site(&s, Mode::General).unwrap(),
            ReductionSite::InternalFan { x: 6, v1: 0, v2: 3 }
        );
    }

    #[test]
    fn short_cycles_of_k4() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(short_cycles(&g, 3), vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(short_cycles(&g, 4).len(), 7);
    }

    #[test]
    fn boundary_order_orients_outer_cycle() {
        let s = scene(polygon(6, &[], &[]), vec![2, 1, 0], vec![1, 2, 1, 2, 1, 2]);
        assert_eq!(oriented_outer_cycle(&s).unwrap()[..3], [2, 1, 0]);
    }
}
