//! Seeded case generators for the kernel properties, shared by the proptest
//! suite and the acceptance harness. Each `*_case` returns `Err` with a
//! description when the property fails.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recolor_core::color::{Color, ColorSet, Coloring, ListAssignment, Vertex};
use recolor_core::graph::Graph;
use recolor_core::kernel::{
    apply_sequence, combine, replay_unchecked, reorder_witness, reverse, validate_witness, CheckMode,
    Constraints, KernelError, Step, Witness,
};

const PALETTE: Color = 8;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, allowed: impl Fn(Vertex, Vertex) -> bool) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if allowed(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Greedy random proper coloring; the palette exceeds every degree here.
fn random_proper(rng: &mut ChaCha8Rng, g: &Graph) -> Coloring {
    let mut phi = Coloring::uncolored(g.universe());
    for v in g.vertices() {
        let used: Vec<Color> = g.neighbors(v).iter().map(|&u| phi.get(u)).collect();
        let free: Vec<Color> = (1..=PALETTE).filter(|c| !used.contains(c)).collect();
        phi.set(v, *free.choose(rng).unwrap());
    }
    phi
}

/// Moves the vertices of `group` once each towards random targets, in random
/// order, skipping vertices that never become movable. `avoid(v, c)` rejects
/// targets. Mutates `cur`.
fn once_only_moves(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    cur: &mut Coloring,
    group: &[Vertex],
    avoid: impl Fn(Vertex, Color) -> bool,
) -> Vec<Step> {
    let mut pending = Vec::new();
    for &v in group {
        if !rng.gen_bool(0.7) {
            continue;
        }
        let options: Vec<Color> = (1..=PALETTE).filter(|&c| c != cur.get(v) && !avoid(v, c)).collect();
        if let Some(&c) = options.choose(rng) {
            pending.push((v, c));
        }
    }
    pending.shuffle(rng);
    schedule(g, cur, &mut pending)
}

/// Performs pending moves greedily while some move is proper.
fn schedule(g: &Graph, cur: &mut Coloring, pending: &mut Vec<(Vertex, Color)>) -> Vec<Step> {
    let mut out = Vec::new();
    while let Some(i) = pending
        .iter()
        .position(|&(v, c)| g.neighbors(v).iter().all(|&u| cur.get(u) != c))
    {
        let (v, c) = pending.remove(i);
        cur.set(v, c);
        out.push(Step::new(v, c));
    }
    out
}

fn uniform(n: usize) -> ListAssignment {
    ListAssignment::uniform(n, ColorSet::range(PALETTE))
}

/// A random `late`-late once-only witness on `g`.
fn late_witness(rng: &mut ChaCha8Rng, g: &Graph, start: &Coloring, late: &[bool]) -> Witness {
    let early: Vec<Vertex> = g.vertices().filter(|&v| !late[v]).collect();
    let tail: Vec<Vertex> = g.vertices().filter(|&v| late[v]).collect();
    let mut cur = start.clone();
    let mut w = Witness::default();
    for phase in 0..2 {
        let mut seq = once_only_moves(rng, g, &mut cur, &early, |_, _| false);
        seq.extend(once_only_moves(rng, g, &mut cur, &tail, |_, _| false));
        w.phases[phase] = seq;
    }
    w
}

/// `reorder_witness` puts the given `H`-order in place, keeps the rest, and
/// yields a valid `H`-late witness. Mismatched endpoints are rejected.
pub fn reorder_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=7);
    let g = random_graph(&mut rng, n, 0.45, |_, _| true);
    let start = random_proper(&mut rng, &g);
    let h: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let omega = late_witness(&mut rng, &g, &start, &h);

    // A different order of the same H-moves, proper on G[H].
    let gh = g.induced(&h);
    let mut sigma = Witness::default();
    let mut cur = start.clone();
    for phase in 0..2 {
        let own: Vec<Step> = omega.phases[phase].iter().copied().filter(|s| h[s.vertex]).collect();
        let mut pending: Vec<(Vertex, Color)> = own.iter().map(|s| (s.vertex, s.color)).collect();
        pending.shuffle(&mut rng);
        let mut trial = cur.clone();
        let order = schedule(&gh, &mut trial, &mut pending);
        sigma.phases[phase] = if pending.is_empty() { order } else { own };
        cur = replay_unchecked(&cur, &omega.phases[phase]);
    }

    let pi = reorder_witness(&g, &start, &h, &omega, &sigma).map_err(|e| format!("reorder failed: {e}"))?;
    let outside: Vec<bool> = h.iter().map(|&b| !b).collect();
    if pi.restrict(&h) != sigma {
        return Err("H-part differs from the requested order".into());
    }
    if pi.restrict(&outside) != omega.restrict(&outside) {
        return Err("outside part changed".into());
    }
    let lists = uniform(n);
    validate_witness(&g, [&lists, &lists], &start, &pi, Some(&h)).map_err(|e| format!("invalid result: {e}"))?;

    // Changing an H endpoint must be rejected.
    if let Some(last) = sigma.phases[1].last().copied() {
        let mut bad = sigma.clone();
        let c = (1..=PALETTE).find(|&c| c != last.color && c != cur_before(&start, &omega, last.vertex)).unwrap();
        bad.phases[1].last_mut().unwrap().color = c;
        match reorder_witness(&g, &start, &h, &omega, &bad) {
            Err(KernelError::IncompatibleEndpoints) => {}
            other => return Err(format!("mismatched endpoints accepted: {other:?}")),
        }
    }
    Ok(())
}

/// Color of `v` at the start of phase 2.
fn cur_before(start: &Coloring, w: &Witness, v: Vertex) -> Color {
    replay_unchecked(start, &w.phases[0]).get(v)
}

/// `combine` of a witness on `G1` and a shared-late witness on `G2` restricts
/// to both inputs' endpoints and is a valid `H`-late witness on `G`.
pub fn combine_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    // 0 = shared, 1 = only G1, 2 = only G2
    let side: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let g = random_graph(&mut rng, n, 0.45, |u, v| side[u] + side[v] != 3);
    let g1: Vec<bool> = side.iter().map(|&s| s != 2).collect();
    let g2: Vec<bool> = side.iter().map(|&s| s != 1).collect();
    let shared: Vec<bool> = side.iter().map(|&s| s == 0).collect();
    let h: Vec<bool> = (0..n).map(|v| g1[v] && rng.gen_bool(0.4)).collect();
    let start = random_proper(&mut rng, &g);

    // Per phase: W1 on G1 with shared targets avoiding the current colors of
    // G2-only neighbors, then W2 with G2-only moves first (avoiding the old and
    // new shared colors next to them) and the same shared moves in a fresh order.
    let graph1 = g.induced(&g1);
    let graph2 = g.induced(&g2);
    let gs = g.induced(&shared);
    let early1: Vec<Vertex> = (0..n).filter(|&v| g1[v] && !h[v]).collect();
    let late1: Vec<Vertex> = (0..n).filter(|&v| h[v]).collect();
    let only2: Vec<Vertex> = (0..n).filter(|&v| side[v] == 2).collect();
    let shared_vs: Vec<Vertex> = (0..n).filter(|&v| shared[v]).collect();
    let (mut w1, mut w2) = (Witness::default(), Witness::default());
    let mut cur = start.clone();
    for phase in 0..2 {
        let old = cur.clone();
        let blocked = |v: Vertex, c: Color| shared[v] && g.neighbors(v).iter().any(|&b| side[b] == 2 && old.get(b) == c);
        let mut one = cur.clone();
        let mut seq1 = once_only_moves(&mut rng, &graph1, &mut one, &early1, blocked);
        seq1.extend(once_only_moves(&mut rng, &graph1, &mut one, &late1, blocked));
        let avoid = |v: Vertex, c: Color| {
            g.neighbors(v).iter().any(|&s| shared[s] && (old.get(s) == c || one.get(s) == c))
        };
        let mut two = cur.clone();
        let mut seq2 = once_only_moves(&mut rng, &graph2, &mut two, &only2, avoid);
        let own: Vec<Step> = seq1.iter().copied().filter(|s| shared[s.vertex]).collect();
        let mut pending: Vec<(Vertex, Color)> = own.iter().map(|s| (s.vertex, s.color)).collect();
        pending.shuffle(&mut rng);
        let mut trial = two.clone();
        let order = schedule(&gs, &mut trial, &mut pending);
        seq2.extend(if pending.is_empty() { order } else { own });
        cur = replay_unchecked(&replay_unchecked(&cur, &seq1), &seq2);
        w1.phases[phase] = seq1;
        w2.phases[phase] = seq2;
    }
    let t1 = phases(&start, &w1);
    let lists = uniform(n);
    let start2 = start.restrict((0..n).filter(|&v| g2[v]));
    validate_witness(&graph2, [&lists, &lists], &start2, &w2, Some(&shared))
        .map_err(|e| format!("generated W2 invalid: {e}"))?;

    let w = combine(&g, &start, &g1, &g2, &h, &w1, &w2).map_err(|e| format!("combine failed: {e}"))?;
    let t = validate_witness(&g, [&lists, &lists], &start, &w, Some(&h)).map_err(|e| format!("invalid result: {e}"))?;
    let t2 = phases(&start, &w2);
    for i in 1..3 {
        for v in 0..n {
            let want = if g1[v] { t1[i].get(v) } else { t2[i].get(v) };
            if t.phi[i].get(v) != want {
                return Err(format!("phase {i} endpoint of vertex {v} differs"));
            }
        }
    }
    // A shared endpoint W1 does not reach must be rejected.
    if let Some(&s) = shared_vs.first() {
        let mut bad = w2.clone();
        let from = t2[1].get(s);
        let c = (1..=PALETTE).find(|&c| c != from && c != t1[2].get(s)).unwrap();
        bad.phases[1].retain(|st| st.vertex != s);
        bad.phases[1].push(Step::new(s, c));
        match combine(&g, &start, &g1, &g2, &h, &w1, &bad) {
            Err(KernelError::IntersectionMismatch(_)) => {}
            other => return Err(format!("mismatched shared endpoint accepted: {other:?}")),
        }
    }
    Ok(())
}

fn phases(start: &Coloring, w: &Witness) -> [Coloring; 3] {
    let a = replay_unchecked(start, &w.phases[0]);
    let b = replay_unchecked(&a, &w.phases[1]);
    [start.clone(), a, b]
}

/// A random proper sequence of up to `len` steps from `start`.
fn random_walk(rng: &mut ChaCha8Rng, g: &Graph, start: &Coloring, len: usize) -> Vec<Step> {
    let mut cur = start.clone();
    let mut seq = Vec::new();
    for _ in 0..len {
        let v = rng.gen_range(0..g.universe());
        let free: Vec<Color> = (1..=PALETTE)
            .filter(|&c| c != cur.get(v) && g.neighbors(v).iter().all(|&u| cur.get(u) != c))
            .collect();
        if let Some(&c) = free.choose(rng) {
            cur.set(v, c);
            seq.push(Step::new(v, c));
        }
    }
    seq
}

/// `reverse` undoes a sequence, is proper from the end, and is an involution.
pub fn reverse_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=8);
    let g = random_graph(&mut rng, n, 0.4, |_, _| true);
    let start = random_proper(&mut rng, &g);
    let len = rng.gen_range(0..25);
    let seq = random_walk(&mut rng, &g, &start, len);
    let end = replay_unchecked(&start, &seq);
    let back = reverse(&seq, &start);
    if back.len() != seq.len() {
        return Err("length changed".into());
    }
    let home = apply_sequence(&g, &end, &back, &Constraints::default(), CheckMode::FromScratch)
        .map_err(|e| format!("reverse not proper: {e}"))?;
    if home != start {
        return Err("reverse does not return to the start".into());
    }
    if reverse(&back, &end) != seq {
        return Err("reverse is not an involution".into());
    }
    Ok(())
}

/// Incremental and from-scratch checking agree on arbitrary sequences.
pub fn check_modes_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=8);
    let g = random_graph(&mut rng, n, 0.4, |_, _| true);
    let start = random_proper(&mut rng, &g);
    let len = rng.gen_range(0..15);
    let mut seq = random_walk(&mut rng, &g, &start, len);
    // Occasionally corrupt one step.
    if !seq.is_empty() && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..seq.len());
        seq[i].color = rng.gen_range(1..=PALETTE);
    }
    let lists = uniform(n);
    let late: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    let c = Constraints {
        lists: rng.gen_bool(0.5).then_some(&lists),
        once_only: rng.gen_bool(0.5),
        late_set: rng.gen_bool(0.5).then_some(&late[..]),
        max_per_vertex: rng.gen_bool(0.5).then_some(2),
    };
    let a = apply_sequence(&g, &start, &seq, &c, CheckMode::Incremental);
    let b = apply_sequence(&g, &start, &seq, &c, CheckMode::FromScratch);
    if a != b {
        return Err(format!("modes disagree: {a:?} vs {b:?}"));
    }
    Ok(())
}
