//! End-to-end recoloring: color elimination, independent sets with a
//! degenerate remainder, recoloring of degenerate graphs, and the assembly of
//! a plan between two colorings of a planar graph.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, ColorSet, Coloring, ListAssignment, Vertex, NO_COLOR};
use crate::format::{parse_sequence, write_sequence, FormatError};
use crate::graph::Graph;
use crate::kernel::{apply_sequence, find_conflict, reverse, CheckMode, Constraints, RecoloringSequence, Step};
use crate::plane::PlaneGraph;
use crate::scene::{solve, Mode, Scene, SolveError};

#[derive(Clone, Debug, Error)]
pub enum PipelineError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("list solver failed: {0}")]
    ListSolverFailed(String),
    #[error(transparent)]
    Solver(#[from] SolveError),
    #[error("internal error: {0}")]
    Internal(String),
}

fn pre(msg: impl Into<String>) -> PipelineError {
    PipelineError::PreconditionViolated(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationResult {
    pub sequence: RecoloringSequence,
    pub final_coloring: Coloring,
}

fn check_coloring(g: &Graph, phi: &Coloring, palette: impl Fn(Vertex) -> ColorSet, what: &str) -> Result<(), PipelineError> {
    if phi.len() < g.universe() {
        return Err(pre(format!("{what} has {} entries for {} vertices", phi.len(), g.universe())));
    }
    if let Some(v) = g.vertices().find(|&v| !palette(v).contains(phi.get(v))) {
        return Err(pre(format!("{what} gives vertex {v} color {} outside its allowed colors", phi.get(v))));
    }
    if let Some((u, v)) = find_conflict(g, phi) {
        return Err(pre(format!("{what} is improper on edge {u}-{v}")));
    }
    Ok(())
}

/// Recolors `phi` into an `L`-coloring avoiding `f(v)` at every vertex, each
/// vertex at most twice and through proper `L`-colorings.
pub fn eliminate_color(
    g: &PlaneGraph,
    lists: &ListAssignment,
    phi: &Coloring,
    f: &Coloring,
    mode: Mode,
) -> Result<EliminationResult, PipelineError> {
    let graph = g.graph();
    let n = g.universe();
    if lists.len() < n || f.len() < n {
        return Err(pre("lists or forbidden colors do not cover every vertex"));
    }
    let need = match mode {
        Mode::General => 10,
        Mode::TriangleFree => 7,
    };
    if let Some(v) = graph.vertices().find(|&v| lists.get(v).len() < need) {
        return Err(pre(format!("vertex {v} has {} colors, {need} needed", lists.get(v).len())));
    }
    if mode == Mode::TriangleFree {
        if let Some(t) = graph.find_triangle() {
            return Err(pre(format!("graph has a triangle {t:?}")));
        }
    }
    check_coloring(graph, phi, |v| lists.get(v), "starting coloring")?;
    let mut l2 = lists.clone();
    for v in graph.vertices() {
        if f.get(v) != NO_COLOR {
            l2.get_mut(v).remove(f.get(v));
        }
    }
    let mut start = phi.clone();
    start.0.truncate(n);
    let scene = Scene::unanchored(g.clone(), [lists.clone(), l2], start.clone());
    let sol = solve(&scene, mode)?;
    let sequence = sol.witness.flatten();
    let final_coloring = sol.trajectory.phi[2].clone();
    let c = Constraints { lists: Some(lists), once_only: false, late_set: None, max_per_vertex: Some(2) };
    apply_sequence(graph, &start, &sequence, &c, CheckMode::Incremental)
        .map_err(|e| PipelineError::Internal(format!("elimination sequence rejected: {e}")))?;
    if let Some(v) = graph.vertices().find(|&v| final_coloring.get(v) == f.get(v)) {
        return Err(PipelineError::Internal(format!("vertex {v} still has its forbidden color")));
    }
    Ok(EliminationResult { sequence, final_coloring })
}

/// Limits of the independent-set search for planar graphs.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub restarts: usize,
    pub node_budget: usize,
    pub seed: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { restarts: 200, node_budget: 200_000, seed: 0 }
    }
}

/// Checks that `set` is independent and that `g - set` is `target`-degenerate.
pub fn certifies_independent_set(g: &Graph, set: &[Vertex], target: usize) -> bool {
    let mut mask = vec![false; g.universe()];
    for &v in set {
        if v >= g.universe() || !g.contains(v) || mask[v] {
            return false;
        }
        mask[v] = true;
    }
    if set.iter().any(|&v| g.neighbors(v).iter().any(|&u| mask[u])) {
        return false;
    }
    g.without_vertices(set).degeneracy() <= target
}

/// Vertices of `g - set` that survive repeated removal of vertices of degree
/// at most `target`.
fn core(g: &Graph, in_set: &[bool], target: usize) -> Vec<Vertex> {
    let n = g.universe();
    let mut alive: Vec<bool> = (0..n).map(|v| g.contains(v) && !in_set[v]).collect();
    let mut deg: Vec<usize> = (0..n)
        .map(|v| if alive[v] { g.neighbors(v).iter().filter(|&&u| alive[u]).count() } else { 0 })
        .collect();
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| alive[v] && deg[v] <= target).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] == target {
                    stack.push(u);
                }
            }
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// An independent set `I` with `g - I` being `target`-degenerate.
///
/// Tries a greedy maximal independent set along a degeneracy order first,
/// which always works when `g` is `(target + 1)`-degenerate. Otherwise grows
/// `I` by vertices of the `(target + 1)`-core of `g - I`: randomly, then by an
/// exhaustive search within `limits.node_budget` nodes.
pub fn independent_set_degenerate(g: &Graph, target: usize, limits: SearchLimits) -> Result<Vec<Vertex>, PipelineError> {
    let n = g.universe();
    let (_, removal) = g.degeneracy_ordering();
    let mut in_set = vec![false; n];
    let mut set = Vec::new();
    for &v in removal.iter().rev() {
        if g.neighbors(v).iter().all(|&u| !in_set[u]) {
            in_set[v] = true;
            set.push(v);
        }
    }
    set.sort_unstable();
    if certifies_independent_set(g, &set, target) {
        return Ok(set);
    }
    let blocked = |in_set: &[bool], v: Vertex| in_set[v] || g.neighbors(v).iter().any(|&u| in_set[u]);
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    for _ in 0..limits.restarts {
        let mut in_set = vec![false; n];
        loop {
            let c = core(g, &in_set, target);
            if c.is_empty() {
                let set: Vec<Vertex> = (0..n).filter(|&v| in_set[v]).collect();
                if certifies_independent_set(g, &set, target) {
                    return Ok(set);
                }
                break;
            }
            let options: Vec<Vertex> = c.iter().copied().filter(|&v| !blocked(&in_set, v)).collect();
            if options.is_empty() {
                break;
            }
            let weight = |v: Vertex| g.neighbors(v).iter().filter(|&&u| c.binary_search(&u).is_ok()).count();
            let pick = if rng.gen_bool(0.5) {
                *options.iter().max_by_key(|&&v| (weight(v), rng.gen::<u32>())).expect("nonempty")
            } else {
                *options.choose(&mut rng).expect("nonempty")
            };
            in_set[pick] = true;
        }
    }
    // Exhaustive: every valid superset of I contains a core vertex not adjacent to I.
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    let mut stack: Vec<Vec<Vertex>> = vec![Vec::new()];
    let mut nodes = 0usize;
    while let Some(set) = stack.pop() {
        nodes += 1;
        if nodes > limits.node_budget {
            return Err(PipelineError::SearchExhausted(format!(
                "no independent set with a {target}-degenerate remainder within {} search nodes",
                limits.node_budget
            )));
        }
        let mut in_set = vec![false; n];
        for &v in &set {
            in_set[v] = true;
        }
        let c = core(g, &in_set, target);
        if c.is_empty() {
            if certifies_independent_set(g, &set, target) {
                return Ok(set);
            }
            return Err(PipelineError::Internal("core peeling disagrees with the degeneracy check".into()));
        }
        let mut options: Vec<Vertex> = c.iter().copied().filter(|&v| !blocked(&in_set, v)).collect();
        options.sort_by_key(|&v| g.neighbors(v).iter().filter(|&&u| c.binary_search(&u).is_ok()).count());
        for v in options {
            let mut next = set.clone();
            next.push(v);
            next.sort_unstable();
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    Err(PipelineError::SearchExhausted(format!("no independent set with a {target}-degenerate remainder exists")))
}

/// Recolors `alpha` into `beta` on a `d`-degenerate graph with `c >= 2d + 2`
/// colors. Vertices are added back in reverse removal order; the sequence of
/// the smaller graph is replayed, and the new vertex `v` moves only when a
/// neighbor is about to take its color. It then takes the admissible color
/// whose next use by a neighbor is furthest ahead, so every vertex moves at
/// most `d + 1` times.
pub fn degenerate_recolor(g: &Graph, d: usize, c: usize, alpha: &Coloring, beta: &Coloring) -> Result<RecoloringSequence, PipelineError> {
    if c < 2 * d + 2 || c > crate::color::MAX_COLOR as usize {
        return Err(pre(format!("need 2d + 2 <= c, got d = {d}, c = {c}")));
    }
    let (deg, removal) = g.degeneracy_ordering();
    if deg > d {
        return Err(pre(format!("graph is {deg}-degenerate, not {d}-degenerate")));
    }
    let palette = ColorSet::range(c as Color);
    check_coloring(g, alpha, |_| palette, "alpha")?;
    check_coloring(g, beta, |_| palette, "beta")?;
    let n = g.universe();
    let mut present = vec![false; n];
    let mut seq: Vec<Step> = Vec::new();
    for &v in removal.iter().rev() {
        let nb: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&u| present[u]).collect();
        let mut is_nb = vec![false; n];
        for &u in &nb {
            is_nb[u] = true;
        }
        let mut cur = alpha.clone();
        let mut out = Vec::with_capacity(seq.len() + 2);
        let mut moves = 0;
        for j in 0..seq.len() {
            let step = seq[j];
            if is_nb[step.vertex] && step.color == cur.get(v) {
                let mut avoid: ColorSet = nb.iter().map(|&u| cur.get(u)).collect();
                avoid.insert(step.color);
                let next_use = |x: Color| {
                    seq[j + 1..]
                        .iter()
                        .position(|s| is_nb[s.vertex] && s.color == x)
                        .unwrap_or(usize::MAX)
                };
                let x = palette
                    .difference(&avoid)
                    .iter()
                    .max_by_key(|&x| (next_use(x), x == beta.get(v), std::cmp::Reverse(x)))
                    .ok_or_else(|| PipelineError::Internal(format!("no free color for {v}")))?;
                out.push(Step::new(v, x));
                cur.set(v, x);
                moves += 1;
            }
            out.push(step);
            cur.set(step.vertex, step.color);
        }
        if cur.get(v) != beta.get(v) {
            out.push(Step::new(v, beta.get(v)));
            moves += 1;
        }
        if moves > d + 1 {
            return Err(PipelineError::Internal(format!("vertex {v} moved {moves} times")));
        }
        present[v] = true;
        seq = out;
    }
    let c = Constraints { lists: Some(&ListAssignment::uniform(n, palette)), ..Constraints::default() };
    let end = apply_sequence(g, alpha, &seq, &c, CheckMode::Incremental)
        .map_err(|e| PipelineError::Internal(format!("degenerate recoloring rejected: {e}")))?;
    if g.vertices().any(|v| end.get(v) != beta.get(v)) {
        return Err(PipelineError::Internal("degenerate recoloring does not reach beta".into()));
    }
    Ok(seq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecolorPlan {
    pub n: usize,
    pub k: Color,
    pub mode: Mode,
    /// From `alpha` to the meeting coloring.
    pub forward: RecoloringSequence,
    /// From the meeting coloring to `beta`.
    pub backward: RecoloringSequence,
    pub total_length: usize,
    pub budget: usize,
    pub independent_set: Vec<Vertex>,
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::General => "general",
        Mode::TriangleFree => "triangle-free",
    }
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "general" => Some(Mode::General),
        "triangle-free" => Some(Mode::TriangleFree),
        _ => None,
    }
}

impl RecolorPlan {
    pub fn steps(&self) -> RecoloringSequence {
        let mut s = self.forward.clone();
        s.extend_from_slice(&self.backward);
        s
    }

    pub fn within_budget(&self) -> bool {
        self.total_length <= self.budget
    }

    /// Header lines are comments, so the file also parses as a plain sequence.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# plan n={} k={} mode={} budget={} total_length={}",
            self.n,
            self.k,
            mode_name(self.mode),
            self.budget,
            self.total_length
        );
        let set: Vec<String> = self.independent_set.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "# independent {}", set.join(" "));
        let _ = writeln!(s, "# forward {}", self.forward.len());
        s.push_str(&write_sequence(&self.forward));
        let _ = writeln!(s, "# backward {}", self.backward.len());
        s.push_str(&write_sequence(&self.backward));
        s
    }

    pub fn parse(text: &str) -> Result<RecolorPlan, FormatError> {
        let err = |line: usize, msg: &str| FormatError { line, msg: msg.to_string() };
        let mut header: Option<(usize, Color, Mode, usize, usize)> = None;
        let mut independent = Vec::new();
        let mut marks: Vec<(usize, usize)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# plan") {
                let mut kv = std::collections::HashMap::new();
                for tok in rest.split_whitespace() {
                    let (k, v) = tok.split_once('=').ok_or_else(|| err(i + 1, "expected key=value"))?;
                    kv.insert(k, v);
                }
                let num = |k: &str| -> Result<usize, FormatError> {
                    kv.get(k).and_then(|v| v.parse().ok()).ok_or_else(|| err(i + 1, &format!("missing or bad {k}")))
                };
                let mode = kv.get("mode").and_then(|m| parse_mode(m)).ok_or_else(|| err(i + 1, "bad mode"))?;
                let k = Color::try_from(num("k")?).map_err(|_| err(i + 1, "k out of range"))?;
                header = Some((num("n")?, k, mode, num("budget")?, num("total_length")?));
            } else if let Some(rest) = line.strip_prefix("# independent") {
                independent = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(i + 1, "bad vertex")))
                    .collect::<Result<_, _>>()?;
            } else if let Some(rest) = line.strip_prefix("# forward").or_else(|| line.strip_prefix("# backward")) {
                let count = rest.trim().parse().map_err(|_| err(i + 1, "bad step count"))?;
                marks.push((i, count));
            }
        }
        let (n, k, mode, budget, total_length) = header.ok_or_else(|| err(1, "missing `# plan` header"))?;
        if marks.len() != 2 {
            return Err(err(1, "expected `# forward` and `# backward` sections"));
        }
        let lines: Vec<&str> = text.lines().collect();
        let section = |from: usize, to: usize| parse_sequence(&lines[from + 1..to].join("\n"), n);
        let forward = section(marks[0].0, marks[1].0)?;
        let backward = section(marks[1].0, lines.len())?;
        if forward.len() != marks[0].1 || backward.len() != marks[1].1 || forward.len() + backward.len() != total_length {
            return Err(err(1, "step counts do not match the header"));
        }
        Ok(RecolorPlan { n, k, mode, forward, backward, total_length, budget, independent_set: independent })
    }

    /// Replays the plan from `alpha` with colors in `1..=k` and checks that it
    /// ends at `beta`.
    pub fn verify(&self, g: &Graph, alpha: &Coloring, beta: &Coloring) -> Result<(), String> {
        let lists = ListAssignment::uniform(g.universe(), ColorSet::range(self.k));
        let c = Constraints { lists: Some(&lists), ..Constraints::default() };
        let end = apply_sequence(g, alpha, &self.steps(), &c, CheckMode::Incremental).map_err(|e| e.to_string())?;
        match g.vertices().find(|&v| end.get(v) != beta.get(v)) {
            Some(v) => Err(format!("plan ends with color {} at {v}, expected {}", end.get(v), beta.get(v))),
            None => Ok(()),
        }
    }
}

/// Plan from `alpha` to `beta` with `k = 10` colors on a planar graph
/// (general) or `k = 7` on a triangle-free planar graph.
pub fn recolor_planar(g: &PlaneGraph, alpha: &Coloring, beta: &Coloring, k: Color, mode: Mode) -> Result<RecolorPlan, PipelineError> {
    recolor_planar_with(g, alpha, beta, k, mode, SearchLimits::default())
}

pub fn recolor_planar_with(
    g: &PlaneGraph,
    alpha: &Coloring,
    beta: &Coloring,
    k: Color,
    mode: Mode,
    limits: SearchLimits,
) -> Result<RecolorPlan, PipelineError> {
    let graph = g.graph();
    let (want_k, target, per_vertex) = match mode {
        Mode::General => (10, 3, 8),
        Mode::TriangleFree => (7, 2, 7),
    };
    if k != want_k {
        return Err(pre(format!("{} mode needs k = {want_k}, got {k}", mode_name(mode))));
    }
    if mode == Mode::TriangleFree {
        if let Some(t) = graph.find_triangle() {
            return Err(pre(format!("graph has a triangle {t:?}")));
        }
    }
    let palette = ColorSet::range(k);
    check_coloring(graph, alpha, |_| palette, "alpha")?;
    check_coloring(graph, beta, |_| palette, "beta")?;
    let n = g.universe();
    let lists = ListAssignment::uniform(n, palette);
    let f = Coloring::from_vec(vec![k; n]);
    let (ea, eb) = rayon::join(
        || eliminate_color(g, &lists, alpha, &f, mode),
        || eliminate_color(g, &lists, beta, &f, mode),
    );
    let (ea, eb) = (ea?, eb?);
    let independent_set = independent_set_degenerate(graph, target, limits)?;
    let to_k = |phi: &Coloring| -> (Vec<Step>, Coloring) {
        let mut phi = phi.clone();
        let steps: Vec<Step> = independent_set.iter().map(|&v| Step::new(v, k)).collect();
        for s in &steps {
            phi.set(s.vertex, k);
        }
        (steps, phi)
    };
    let (ia, alpha2) = to_k(&ea.final_coloring);
    let (ib, beta2) = to_k(&eb.final_coloring);
    let rest = graph.without_vertices(&independent_set);
    let core_path = degenerate_recolor(&rest, target, (k - 1) as usize, &alpha2, &beta2)?;
    let mut forward = ea.sequence;
    forward.extend(ia);
    forward.extend(core_path);
    let mut beta_side = eb.sequence;
    beta_side.extend(ib);
    let backward = reverse(&beta_side, beta);
    let vertices = graph.vertex_count();
    let plan = RecolorPlan {
        n,
        k,
        mode,
        total_length: forward.len() + backward.len(),
        forward,
        backward,
        budget: per_vertex * vertices,
        independent_set,
    };
    plan.verify(graph, alpha, beta).map_err(|e| PipelineError::Internal(format!("plan rejected: {e}")))?;
    Ok(plan)
}

/// Frees color `c + d + 1` on a `d`-degenerate graph by recoloring each vertex
/// at most once to an `L`-coloring from `list_solver`, where `L(v)` drops the
/// colors of later neighbors in a degeneracy order.
pub fn degchos_recolor(
    g: &Graph,
    alpha: &Coloring,
    c: usize,
    d: usize,
    list_solver: impl FnOnce(&Graph, &ListAssignment) -> Option<Coloring>,
) -> Result<RecoloringSequence, PipelineError> {
    let (deg, order) = g.degeneracy_ordering();
    if deg > d {
        return Err(pre(format!("graph is {deg}-degenerate, not {d}-degenerate")));
    }
    let top = c + d + 1;
    if top > crate::color::MAX_COLOR as usize {
        return Err(pre("too many colors"));
    }
    let palette = ColorSet::range(top as Color);
    check_coloring(g, alpha, |_| palette, "alpha")?;
    let n = g.universe();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut lists = ListAssignment::uniform(n, ColorSet::empty());
    for &v in &order {
        let later: ColorSet = g.neighbors(v).iter().filter(|&&u| pos[u] > pos[v]).map(|&u| alpha.get(u)).collect();
        *lists.get_mut(v) = ColorSet::range((c + d) as Color).difference(&later);
    }
    let target = list_solver(g, &lists).ok_or_else(|| PipelineError::ListSolverFailed("no L-coloring found".into()))?;
    if target.len() < n
        || g.vertices().any(|v| !lists.get(v).contains(target.get(v)))
        || find_conflict(g, &target).is_some()
    {
        return Err(PipelineError::ListSolverFailed("solver returned a coloring that is not an L-coloring".into()));
    }
    let seq: Vec<Step> = order
        .iter()
        .filter(|&&v| target.get(v) != alpha.get(v))
        .map(|&v| Step::new(v, target.get(v)))
        .collect();
    let all = ListAssignment::uniform(n, palette);
    let cons = Constraints { lists: Some(&all), once_only: true, ..Constraints::default() };
    apply_sequence(g, alpha, &seq, &cons, CheckMode::Incremental)
        .map_err(|e| PipelineError::Internal(format!("degchos sequence rejected: {e}")))?;
    Ok(seq)
}
