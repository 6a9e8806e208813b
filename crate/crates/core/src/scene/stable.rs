//! Trajectories on the outer cycle that change the vertices outside `H` only
//! in the first phase.

use crate::color::{Color, ColorSet, Vertex};
use crate::kernel::{validate_witness, Step, Witness};

use super::reduce::oriented_outer_cycle;
use super::solve::{internal, SolveError};
use super::{Mode, Scene};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableOuter {
    /// The outer cycle `K`, starting with `H` in order.
    pub cycle: Vec<Vertex>,
    /// Phase-1 recolorings of `K - V(H)`, in order, without no-op steps.
    pub steps: Vec<Step>,
    /// `(steps + β1, β2)`.
    pub witness: Witness,
}

/// Lifts the trajectory on `H` to the outer cycle `K` so that vertices of
/// `K - V(H)` change color at most once, in the first phase. Requires `K` to
/// be an induced cycle of length at least 5 (general) or 6 (triangle-free)
/// and `H` a path of at least three vertices on it.
pub fn stable_outer(scene: &Scene, mode: Mode) -> Result<StableOuter, SolveError> {
    let k = oriented_outer_cycle(scene).map_err(|e| internal(scene, e))?;
    let m = scene.boundary.len();
    if m < 3 || k.len() < m + 2 {
        return Err(internal(scene, format!("stable lift needs |H| >= 3 and two more outer vertices, K = {k:?}")));
    }
    let delta = scene.delta();
    let phi0 = &scene.start;
    let common = |v: Vertex| scene.lists[0].get(v).intersection(&scene.lists[1].get(v));
    let all_delta = |h: Vertex| ColorSet::from_colors([delta[0].get(h), delta[1].get(h), delta[2].get(h)]);
    let pick = |set: ColorSet, what: &str| -> Result<Color, SolveError> {
        set.min().ok_or_else(|| internal(scene, format!("stable lift: no color left for {what}")))
    };
    let outside = &k[m..];
    let (h_first, h_last) = (scene.boundary[0], scene.boundary[m - 1]);
    let mut order: Vec<(Vertex, Color)> = Vec::new();
    match mode {
        Mode::General => {
            let t = outside.len();
            let mut c = vec![0 as Color; t];
            let mut avoid = all_delta(h_last);
            avoid.insert(phi0.get(outside[1]));
            c[0] = pick(common(outside[0]).difference(&avoid), "v1")?;
            for i in 1..t - 1 {
                let avoid = ColorSet::from_colors([c[i - 1], phi0.get(outside[i + 1])]);
                c[i] = pick(common(outside[i]).difference(&avoid), "inner vertex")?;
            }
            let mut avoid = all_delta(h_first);
            avoid.insert(c[t - 2]);
            c[t - 1] = pick(common(outside[t - 1]).difference(&avoid), "vm")?;
            order.extend(outside.iter().copied().zip(c));
        }
        Mode::TriangleFree => {
            let t = outside.len();
            let restricted = |v: Vertex, h: Vertex| common(v).difference(&all_delta(h));
            let v = outside;
            match t {
                2 => {
                    let (mut x, mut hx, mut y, mut hy) = (v[0], h_last, v[1], h_first);
                    if common(x).len() < 6 {
                        std::mem::swap(&mut x, &mut y);
                        std::mem::swap(&mut hx, &mut hy);
                    }
                    let cy = pick(restricted(y, hy), "v2")?;
                    let cx = pick(restricted(x, hx).difference(&ColorSet::from_colors([phi0.get(y), cy])), "v1")?;
                    order = vec![(x, cx), (y, cy)];
                }
                _ => {
                    let c1 = pick(restricted(v[0], h_last), "v1")?;
                    let ct = pick(restricted(v[t - 1], h_first), "vt")?;
                    if t == 3 {
                        let p2 = phi0.get(v[1]);
                        if c1 != p2 {
                            let c2 = pick(common(v[1]).difference(&ColorSet::from_colors([c1, ct, phi0.get(v[2])])), "v2")?;
                            order = vec![(v[0], c1), (v[1], c2), (v[2], ct)];
                        } else if ct != p2 {
                            let c2 = pick(common(v[1]).difference(&ColorSet::from_colors([c1, ct, phi0.get(v[0])])), "v2")?;
                            order = vec![(v[2], ct), (v[1], c2), (v[0], c1)];
                        } else {
                            let avoid = ColorSet::from_colors([c1, phi0.get(v[0]), phi0.get(v[2])]);
                            let c2 = pick(common(v[1]).difference(&avoid), "v2")?;
                            order = vec![(v[1], c2), (v[0], c1), (v[2], ct)];
                        }
                    } else {
                        let mut c = vec![0 as Color; t];
                        c[0] = c1;
                        c[t - 1] = ct;
                        let avoid = ColorSet::from_colors([c1, phi0.get(v[0]), phi0.get(v[2])]);
                        c[1] = pick(common(v[1]).difference(&avoid), "v2")?;
                        for j in 2..t - 2 {
                            let avoid = ColorSet::from_colors([c[j - 1], phi0.get(v[j + 1])]);
                            c[j] = pick(common(v[j]).difference(&avoid), "inner vertex")?;
                        }
                        if t - 2 >= 2 {
                            let avoid = ColorSet::from_colors([c[t - 3], ct, phi0.get(v[t - 1])]);
                            c[t - 2] = pick(common(v[t - 2]).difference(&avoid), "v(t-1)")?;
                        }
                        order = (1..t).map(|j| (v[j], c[j])).collect();
                        order.push((v[0], c1));
                    }
                }
            }
        }
    }
    let steps: Vec<Step> = order
        .into_iter()
        .filter(|&(v, c)| phi0.get(v) != c)
        .map(|(v, c)| Step::new(v, c))
        .collect();
    let mut first = steps.clone();
    first.extend_from_slice(&scene.boundary_witness.phases[0]);
    let witness = Witness::new(first, scene.boundary_witness.phases[1].clone());
    let gk = scene.graph.graph().induced_on(&k);
    let late = scene.boundary_mask();
    validate_witness(&gk, [&scene.lists[0], &scene.lists[1]], phi0, &witness, Some(&late))
        .map_err(|e| internal(scene, format!("stable lift failed validation: {e}")))?;
    Ok(StableOuter { cycle: k, steps, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::{Coloring, ListAssignment};
    use crate::plane::PlaneGraph;

    fn polygon(n: usize) -> PlaneGraph {
        let pos: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        PlaneGraph::from_positions(n, &edges, &pos).unwrap()
    }

    #[test]
    fn general_six_cycle_greedy_choices() {
        let n = 6;
        let lists = [ListAssignment::uniform(n, ColorSet::range(6)), ListAssignment::uniform(n, ColorSet::range(7))];
        let start = Coloring::from_vec(vec![1, 2, 3, 1, 2, 3]);
        let beta = Witness::new(vec![Step::new(0, 4)], vec![Step::new(2, 5)]);
        let s = Scene::new(polygon(n), vec![0, 1, 2], lists, start, beta);
        s.check_structure().unwrap();
        let out = stable_outer(&s, Mode::General).unwrap();
        assert_eq!(out.cycle, vec![0, 1, 2, 3, 4, 5]);
        // v1 = 3 avoids {3, 5} from h3 and φ0(4) = 2: smallest is 1, a no-op.
        // v2 = 4 avoids {1, φ0(5) = 3}: 2, a no-op. v3 = 5 avoids {2, 1, 4}: 3.
        assert!(out.steps.is_empty());
        assert_eq!(out.witness.phases[1], vec![Step::new(2, 5)]);
    }

    #[test]
    fn triangle_free_t3_swaps_order_when_forced() {
        // K = h1 h2 h3 v1 v2 v3 (vertices 0..6). With lists {1..5} and the δ
        // colors of the ends covering four colors, c1 = c3 = φ0(v2) is forced.
        let n = 6;
        let l = ColorSet::range(5);
        let lists = [ListAssignment::uniform(n, l), ListAssignment::uniform(n, l)];
        // Both ends move 1 -> 2 -> 4, so c1 = c3 = 3 = φ0(v2).
        let start = Coloring::from_vec(vec![1, 5, 1, 2, 3, 4]);
        let beta = Witness::new(vec![Step::new(0, 2), Step::new(2, 2)], vec![Step::new(0, 4), Step::new(2, 4)]);
        let s = Scene::new(polygon(n), vec![0, 1, 2], lists, start, beta);
        s.check_structure().unwrap();
        let out = stable_outer(&s, Mode::TriangleFree).unwrap();
        assert_eq!(out.steps[0].vertex, 4);
        assert_eq!(out.steps.iter().map(|s| s.vertex).collect::<Vec<_>>(), vec![4, 3, 5]);
    }
}
