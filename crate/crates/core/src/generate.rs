//! Embedded graph families, random colorings and random valid scenes.
//!
//! Everything is deterministic given the seed of the `ChaCha8Rng` passed in.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, ColorSet, Coloring, ListAssignment, Vertex, NO_COLOR};
use crate::kernel::{validate_witness, Step, Witness};
use crate::plane::PlaneGraph;
use crate::scene::{Mode, Scene};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Grid,
    Cycle,
    Wheel,
    StackedTriangulation,
    RandomPlanar,
    RandomTriangleFree,
    Pdn,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Grid,
        Family::Cycle,
        Family::Wheel,
        Family::StackedTriangulation,
        Family::RandomPlanar,
        Family::RandomTriangleFree,
        Family::Pdn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Grid => "grid",
            Family::Cycle => "cycle",
            Family::Wheel => "wheel",
            Family::StackedTriangulation => "stacked-triangulation",
            Family::RandomPlanar => "random-planar",
            Family::RandomTriangleFree => "random-triangle-free",
            Family::Pdn => "pdn",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// `rows x cols` grid.
pub fn grid(rows: usize, cols: usize) -> Result<PlaneGraph, GenError> {
    if rows == 0 || cols == 0 {
        return Err(GenError::BadParams("grid needs positive dimensions".into()));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    let mut pos = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            pos.push((c as f64, -(r as f64)));
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    PlaneGraph::from_positions(rows * cols, &edges, &pos).map_err(|e| GenError::BadParams(e.to_string()))
}

fn on_circle(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect()
}

pub fn cycle(n: usize) -> Result<PlaneGraph, GenError> {
    if n < 3 {
        return Err(GenError::BadParams("cycle needs at least 3 vertices".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    PlaneGraph::from_positions(n, &edges, &on_circle(n)).map_err(|e| GenError::BadParams(e.to_string()))
}

/// Hub `0` joined to a rim cycle `1..=rim`.
pub fn wheel(rim: usize) -> Result<PlaneGraph, GenError> {
    if rim < 3 {
        return Err(GenError::BadParams("wheel needs a rim of at least 3 vertices".into()));
    }
    let mut pos = vec![(0.0, 0.0)];
    pos.extend(on_circle(rim));
    let mut edges = Vec::new();
    for i in 1..=rim {
        edges.push((0, i));
        edges.push((i, i % rim + 1));
    }
    PlaneGraph::from_positions(rim + 1, &edges, &pos).map_err(|e| GenError::BadParams(e.to_string()))
}

/// Random stacked triangulation: start from a triangle and repeatedly insert a
/// vertex into a uniformly chosen inner face.
pub fn stacked_triangulation(n: usize, rng: &mut ChaCha8Rng) -> Result<PlaneGraph, GenError> {
    if n < 3 {
        return Err(GenError::BadParams("stacked triangulation needs at least 3 vertices".into()));
    }
    // Clockwise rotations of the triangle 0 1 2 drawn counterclockwise.
    let mut rot: Vec<Vec<Vertex>> = vec![vec![2, 1], vec![0, 2], vec![1, 0]];
    // Inner faces as dart cycles (a, b, c): a->b, b->c, c->a.
    let mut faces: Vec<[Vertex; 3]> = vec![[0, 1, 2]];
    for x in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(i);
        // The face after dart u->v turns at v to the successor of u; put x there.
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let p = rot[v].iter().position(|&w| w == u).expect("face dart");
            rot[v].insert(p + 1, x);
        }
        rot.push(vec![a, c, b]);
        faces.extend([[a, b, x], [b, c, x], [c, a, x]]);
    }
    PlaneGraph::from_rotations(rot, &[vec![0, 2, 1]]).map_err(|e| GenError::BadParams(e.to_string()))
}

/// A stacked triangulation with each edge kept with probability `keep`, never
/// disconnecting the graph.
pub fn random_planar(n: usize, keep: f64, rng: &mut ChaCha8Rng) -> Result<PlaneGraph, GenError> {
    if !(0.0..=1.0).contains(&keep) {
        return Err(GenError::BadParams("keep probability must be in [0, 1]".into()));
    }
    let mut g = stacked_triangulation(n, rng)?;
    let mut edges = g.graph().edges();
    edges.shuffle(rng);
    for (u, v) in edges {
        if rng.gen_bool(keep) {
            continue;
        }
        // Removing a bridge fails or disconnects; keep it.
        if let Ok(h) = g.without_edge(u, v) {
            if h.graph().is_connected() {
                g = h;
            }
        }
    }
    Ok(g)
}

/// Removes one edge of each triangle of a stacked triangulation until none is
/// left, then thins the rest like [`random_planar`].
pub fn random_triangle_free(n: usize, keep: f64, rng: &mut ChaCha8Rng) -> Result<PlaneGraph, GenError> {
    let mut g = stacked_triangulation(n, rng)?;
    while let Some((a, b, c)) = g.graph().find_triangle() {
        // A triangle edge is never a bridge.
        let (u, v) = *[(a, b), (b, c), (a, c)].choose(rng).expect("nonempty");
        g = g.without_edge(u, v).map_err(|e| GenError::BadParams(e.to_string()))?;
    }
    let mut edges = g.graph().edges();
    edges.shuffle(rng);
    for (u, v) in edges {
        if rng.gen_bool(keep) {
            continue;
        }
        // Removing a bridge fails or disconnects; keep it.
        if let Ok(h) = g.without_edge(u, v) {
            if h.graph().is_connected() {
                g = h;
            }
        }
    }
    Ok(g)
}

/// A path on `n - d + 1` vertices and a clique of `d - 1` vertices joined to
/// every path vertex. Planar for `d <= 3`. Path vertices come first.
pub fn p_dn(d: usize, n: usize) -> Result<PlaneGraph, GenError> {
    if !(1..=3).contains(&d) || n < d {
        return Err(GenError::BadParams(format!("P_dn needs 1 <= d <= 3 and n >= d, got d={d}, n={n}")));
    }
    let q = n - (d - 1);
    let mut rot: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let (a, b) = (q, q + 1);
    for i in 0..q {
        // Clockwise: up (a), right, down (b), left.
        if d >= 2 {
            rot[i].push(a);
        }
        if i + 1 < q {
            rot[i].push(i + 1);
        }
        if d == 3 {
            rot[i].push(b);
        }
        if i > 0 {
            rot[i].push(i - 1);
        }
    }
    if d >= 2 {
        if d == 3 {
            rot[a].push(b);
        }
        rot[a].extend((0..q).rev());
    }
    if d == 3 {
        rot[b].push(a);
        rot[b].extend(0..q);
    }
    let outer = match d {
        1 if q == 1 => Vec::new(),
        1 => (0..q).chain((1..q - 1).rev()).collect(),
        2 if q == 1 => vec![0, a],
        2 => {
            let mut w = vec![a];
            w.extend(0..q);
            w
        }
        _ => vec![a, 0, b],
    };
    let walks = if outer.is_empty() { Vec::new() } else { vec![outer] };
    PlaneGraph::from_rotations(rot, &walks).map_err(|e| GenError::BadParams(e.to_string()))
}

/// Generates a family member from its size parameter `n` (grid: `n x n`,
/// wheel: rim `n`, P_dn: `d` and `n`).
pub fn generate(family: Family, n: usize, d: usize, seed: u64) -> Result<PlaneGraph, GenError> {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    match family {
        Family::Grid => grid(n, n),
        Family::Cycle => cycle(n),
        Family::Wheel => wheel(n),
        Family::StackedTriangulation => stacked_triangulation(n, &mut rng),
        Family::RandomPlanar => random_planar(n, 0.7, &mut rng),
        Family::RandomTriangleFree => random_triangle_free(n, 0.85, &mut rng),
        Family::Pdn => p_dn(d, n),
    }
}

/// A uniformly shuffled greedy proper coloring from `{1..k}` along a reversed
/// degeneracy order, followed by `n` random single-vertex moves.
pub fn random_coloring(g: &crate::graph::Graph, k: Color, rng: &mut ChaCha8Rng) -> Option<Coloring> {
    let (_, order) = g.degeneracy_ordering();
    let mut phi = Coloring::uncolored(g.universe());
    for &v in order.iter().rev() {
        let used: ColorSet = g.neighbors(v).iter().map(|&u| phi.get(u)).filter(|&c| c != NO_COLOR).collect();
        let free: Vec<Color> = ColorSet::range(k).difference(&used).iter().collect();
        phi.set(v, *free.choose(rng)?);
    }
    let vs: Vec<Vertex> = g.vertices().collect();
    for _ in 0..vs.len() {
        let Some(&v) = vs.choose(rng) else { break };
        let used: ColorSet = g.neighbors(v).iter().map(|&u| phi.get(u)).filter(|&c| c != NO_COLOR).collect();
        let free: Vec<Color> = ColorSet::range(k).difference(&used).iter().collect();
        if let Some(&c) = free.choose(rng) {
            phi.set(v, c);
        }
    }
    Some(phi)
}

fn random_list(rng: &mut ChaCha8Rng, palette: Color, size: usize) -> ColorSet {
    let mut all: Vec<Color> = (1..=palette).collect();
    all.shuffle(rng);
    all.into_iter().take(size).collect()
}

/// Random pair of lists with `|L1| = s1`, `|L2| = s2` and `|L1 \ L2| <= 1`.
fn random_list_pair(rng: &mut ChaCha8Rng, palette: Color, s1: usize, s2: usize) -> (ColorSet, ColorSet) {
    let l2 = random_list(rng, palette, s2);
    let mut l1: Vec<Color> = l2.iter().collect();
    l1.shuffle(rng);
    l1.truncate(s1.min(s2));
    let mut l1: ColorSet = l1.into_iter().collect();
    let outside: Vec<Color> = ColorSet::range(palette).difference(&l2).iter().collect();
    while l1.len() < s1 {
        // At most one color of L1 outside L2.
        if l1.difference(&l2).is_empty() && !outside.is_empty() && rng.gen_bool(0.5) {
            l1.insert(*outside.choose(rng).expect("nonempty"));
        } else if let Some(&c) = l2.difference(&l1).iter().collect::<Vec<_>>().choose(rng) {
            l1.insert(c);
        } else {
            l1.insert(*outside.choose(rng).expect("palette larger than lists"));
        }
    }
    (l1, l2)
}

/// Parameters of [`random_scene`].
#[derive(Clone, Copy, Debug)]
pub struct SceneParams {
    pub mode: Mode,
    pub max_vertices: usize,
    /// Add this many colors above the minimum list sizes, at random.
    pub slack: usize,
    pub palette: Color,
}

/// A random scene that satisfies the structural requirements and the validity
/// conditions of `params.mode`, or `None` if the random draw failed them.
pub fn random_scene(params: SceneParams, rng: &mut ChaCha8Rng) -> Option<Scene> {
    let n = rng.gen_range(1..=params.max_vertices);
    let g = match params.mode {
        Mode::General => random_planar(n.max(3), rng.gen_range(0.4..1.0), rng).ok()?,
        Mode::TriangleFree => random_triangle_free(n.max(3), rng.gen_range(0.6..1.0), rng).ok()?,
    };
    let g = if n < 3 { g.without_vertices(&(n..3).collect::<Vec<_>>()).ok()? } else { g };
    let universe = g.universe();
    let (min1, min2, in1, in2) = match params.mode {
        Mode::General => (6, 7, 10, 9),
        Mode::TriangleFree => (5, 5, 7, 6),
    };
    let mut l1 = ListAssignment::uniform(universe, ColorSet::empty());
    let mut l2 = ListAssignment::uniform(universe, ColorSet::empty());
    for v in g.vertices() {
        let (a, b) = if g.is_internal(v) { (in1, in2) } else { (min1, min2) };
        let extra = rng.gen_range(0..=params.slack);
        let (x, y) = random_list_pair(rng, params.palette, a + extra, b.max(a + extra - 1));
        *l1.get_mut(v) = x;
        *l2.get_mut(v) = y;
    }
    let start = random_coloring(g.graph(), params.palette, rng)?;
    // H: a random segment of the outer walk around a random outer vertex.
    let outer: Vec<Vertex> = g.vertices().filter(|&v| g.is_outer_vertex(v)).collect();
    let m = rng.gen_range(0..=params.mode.max_boundary().min(g.vertex_count()));
    let boundary = if m == 0 {
        Vec::new()
    } else {
        let walk = g.outer_walk_of(*outer.choose(rng)?);
        if walk.is_empty() {
            vec![*outer.choose(rng)?]
        } else {
            let s = rng.gen_range(0..walk.len());
            let seg: Vec<Vertex> = (0..m.min(walk.len())).map(|i| walk[(s + i) % walk.len()]).collect();
            let mut dedup = seg.clone();
            dedup.sort_unstable();
            dedup.dedup();
            if dedup.len() != seg.len() {
                return None;
            }
            seg
        }
    };
    let mut mask = vec![false; universe];
    for &h in &boundary {
        mask[h] = true;
    }
    let gh = g.graph().induced(&mask);
    let lists = [l1, l2];
    let witness = random_trajectory(&gh, &boundary, &lists, &start, rng)?;
    let scene = Scene::new(g, boundary, lists, start, witness);
    scene.check_structure().ok()?;
    scene.check_valid(params.mode).is_valid().then_some(scene)
}

/// A random once-only `(L1, L2)`-trajectory on `g` over the vertices `vs`.
fn random_trajectory(
    g: &crate::graph::Graph,
    vs: &[Vertex],
    lists: &[ListAssignment; 2],
    start: &Coloring,
    rng: &mut ChaCha8Rng,
) -> Option<Witness> {
    for _ in 0..200 {
        let mut phases: [Vec<Step>; 2] = Default::default();
        let mut cur = start.clone();
        let mut ok = true;
        for (i, phase) in phases.iter_mut().enumerate() {
            let mut order = vs.to_vec();
            order.shuffle(rng);
            let mut target = cur.clone();
            for &v in &order {
                let l: Vec<Color> = lists[i].get(v).iter().collect();
                target.set(v, *l.choose(rng)?);
            }
            let mut pending: Vec<Vertex> = order.into_iter().filter(|&v| target.get(v) != cur.get(v)).collect();
            // Any order in which each move is proper at its time.
            while !pending.is_empty() {
                let Some(p) = pending
                    .iter()
                    .position(|&v| g.neighbors(v).iter().all(|&u| cur.get(u) != target.get(v)))
                else {
                    ok = false;
                    break;
                };
                let v = pending.remove(p);
                cur.set(v, target.get(v));
                phase.push(Step::new(v, target.get(v)));
            }
            if !ok {
                break;
            }
        }
        if !ok {
            continue;
        }
        let w = Witness::new(phases[0].clone(), phases[1].clone());
        if validate_witness(g, [&lists[0], &lists[1]], start, &w, None).is_ok() {
            return Some(w);
        }
    }
    None
}

/// A random graph in which vertex `i` has at most `d` neighbors among
/// `0..i`, so that it is `d`-degenerate.
pub fn random_degenerate(n: usize, d: usize, rng: &mut ChaCha8Rng) -> crate::graph::Graph {
    let mut g = crate::graph::Graph::new(n);
    for v in 1..n {
        let mut earlier: Vec<Vertex> = (0..v).collect();
        earlier.shuffle(rng);
        let m = rng.gen_range(d.min(v).div_ceil(2)..=d.min(v));
        for &u in &earlier[..m] {
            g.add_edge(u, v);
        }
    }
    g
}

/// A named corpus member.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub family: Family,
    pub graph: PlaneGraph,
}

fn corpus_size(rng: &mut ChaCha8Rng, max_n: usize) -> usize {
    // A quarter of the instances are small enough for exhaustive checks.
    if rng.gen_bool(0.25) {
        rng.gen_range(3..=6)
    } else {
        rng.gen_range(7..=max_n.max(7))
    }
}

/// Planar instances with at most `max_n` vertices, cycling through grids,
/// wheels, stacked triangulations and random planar graphs.
pub fn planar_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let families = [Family::Grid, Family::Wheel, Family::StackedTriangulation, Family::RandomPlanar];
    (0..count)
        .map(|i| {
            let family = families[i % families.len()];
            let n = corpus_size(&mut rng, max_n);
            let graph = match family {
                Family::Grid => {
                    let r = rng.gen_range(1..=n.isqrt().max(1));
                    grid(r, (n / r).max(2))
                }
                Family::Wheel => wheel((n - 1).max(3)),
                Family::StackedTriangulation => stacked_triangulation(n, &mut rng),
                _ => random_planar(n, rng.gen_range(0.5..1.0), &mut rng),
            }
            .expect("corpus parameters are valid");
            Instance { id: format!("planar-{i:03}-{}", family.name()), family, graph }
        })
        .collect()
}

/// Triangle-free planar instances: grids, even and odd cycles, and random
/// triangle-free graphs.
pub fn triangle_free_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let families = [Family::Grid, Family::Cycle, Family::RandomTriangleFree, Family::RandomTriangleFree];
    (0..count)
        .map(|i| {
            let family = families[i % families.len()];
            let n = corpus_size(&mut rng, max_n);
            let graph = match family {
                Family::Grid => {
                    let r = rng.gen_range(1..=n.isqrt().max(1));
                    grid(r, (n / r).max(2))
                }
                Family::Cycle => cycle(n.max(4)),
                _ => random_triangle_free(n, rng.gen_range(0.6..1.0), &mut rng),
            }
            .expect("corpus parameters are valid");
            Instance { id: format!("trianglefree-{i:03}-{}", family.name()), family, graph }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn grid_two_by_two_is_a_four_cycle() {
        let g = grid(2, 2).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.outer_cycle().unwrap().len(), 4);
    }

    #[test]
    fn stacked_triangulation_is_maximal_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..40 {
            let g = stacked_triangulation(n, &mut rng).unwrap();
            assert_eq!(g.edge_count(), 3 * n - 6);
            assert_eq!(g.outer_cycle().unwrap().len(), 3);
        }
    }

    #[test]
    fn stacked_triangulation_is_deterministic() {
        let a = generate(Family::StackedTriangulation, 10, 0, 7).unwrap().to_text();
        let b = generate(Family::StackedTriangulation, 10, 0, 7).unwrap().to_text();
        assert_eq!(a, b);
    }

    #[test]
    fn triangle_free_generator_has_no_triangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 3..30 {
            let g = random_triangle_free(n, 0.9, &mut rng).unwrap();
            assert!(g.graph().is_triangle_free());
            assert!(g.graph().is_connected());
        }
    }

    #[test]
    fn p_dn_shapes() {
        let g = p_dn(2, 5).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 3 + 4);
        assert_eq!(g.graph().degree(4), 4);
        let g = p_dn(3, 6).unwrap();
        assert_eq!(g.edge_count(), 3 + 4 + 4 + 1);
        assert_eq!(p_dn(1, 4).unwrap().edge_count(), 3);
        assert!(p_dn(4, 6).is_err());
    }

    #[test]
    fn random_colorings_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..30 {
            let g = stacked_triangulation(n, &mut rng).unwrap();
            let phi = random_coloring(g.graph(), 7, &mut rng).unwrap();
            assert!(crate::kernel::is_proper(g.graph(), &phi));
            assert!(phi.0.iter().all(|&c| (1..=7).contains(&c)));
        }
    }

    #[test]
    fn corpora_respect_sizes_and_triangle_freeness() {
        let p = planar_corpus(40, 60, 1);
        assert!(p.iter().all(|i| i.graph.vertex_count() <= 60));
        let t = triangle_free_corpus(40, 60, 1);
        assert!(t.iter().all(|i| i.graph.graph().is_triangle_free() && i.graph.vertex_count() <= 60));
    }

    #[test]
    fn random_degenerate_has_bounded_degeneracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 1..4 {
            let g = random_degenerate(40, d, &mut rng);
            assert!(g.degeneracy() <= d);
        }
    }

    #[test]
    fn random_scenes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for mode in [Mode::General, Mode::TriangleFree] {
            let params = SceneParams { mode, max_vertices: 8, slack: 1, palette: 12 };
            let found = (0..300).filter_map(|_| random_scene(params, &mut rng)).count();
            assert!(found > 50, "{mode:?}: {found}");
        }
    }
}
