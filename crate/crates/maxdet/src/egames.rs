//! Energy games with resets (EGR): arena model, energy-level semantics, the
//! safety-game reduction, winning-region and minimal-credit computation, and
//! positional strategy extraction.
//!
//! Eve must keep the running credit nonnegative forever; designated
//! Adam-owned reset edges re-seed the credit from the initial value. Small
//! instances are solved through the safety-game product over credit levels.
//! When that product would blow the arena budget, an equivalent value-lifting
//! solver takes over: it computes (an over-approximation of) the minimal
//! sufficient level per vertex and certifies divergent vertices through an
//! explicitly verified positional strategy for Adam, so every returned
//! answer is exact regardless of the backend.

use crate::error::{Error, Result};
use crate::limits::Limits;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Eve,
    Adam,
}

/// Edges are kept as a list: two parallel edges may differ in weight or in
/// the reset flag, and the owning player picks an edge, not just a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EgrEdge {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: i64,
    pub reset: bool,
}

#[derive(Clone, Debug)]
pub struct EgrArena {
    vertex_names: Vec<String>,
    owner: Vec<Player>,
    edges: Vec<EgrEdge>,
    out: Vec<Vec<usize>>,
}

impl EgrArena {
    /// Validates the arena: no sinks, and reset edges leave Adam vertices only.
    pub fn new(vertices: Vec<(String, Player)>, edge_list: Vec<EgrEdge>) -> Result<Self> {
        let n = vertices.len();
        let mut edges = edge_list;
        edges.sort_by_key(|e| (e.src, e.dst, e.weight, e.reset));
        edges.dedup();
        for e in &edges {
            if e.src.0 >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.src.0)));
            }
            if e.dst.0 >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.dst.0)));
            }
            if e.reset && vertices[e.src.0].1 == Player::Eve {
                return Err(Error::ResetFromEve(vertices[e.src.0].0.clone()));
            }
        }
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out[e.src.0].push(i);
        }
        for (v, o) in out.iter().enumerate() {
            if o.is_empty() {
                return Err(Error::ArenaSink(vertices[v].0.clone()));
            }
        }
        let (vertex_names, owner) = vertices.into_iter().unzip();
        Ok(EgrArena { vertex_names, owner, edges, out })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|s| s == name).map(VertexId)
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owner[v.0]
    }

    pub fn edges(&self) -> &[EgrEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &EgrEdge {
        &self.edges[e]
    }

    pub fn outgoing(&self, v: VertexId) -> impl Iterator<Item = (usize, &EgrEdge)> {
        self.out[v.0].iter().map(move |&i| (i, &self.edges[i]))
    }

    pub fn reset_edges(&self) -> impl Iterator<Item = &EgrEdge> {
        self.edges.iter().filter(|e| e.reset)
    }

    pub fn max_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight.abs()).max().unwrap_or(0)
    }

    /// The saturation credit |V| * w_max: winning with some credit is
    /// equivalent to winning with this one.
    pub fn credit_cap(&self) -> i64 {
        (self.vertex_count() as i64).saturating_mul(self.max_weight())
    }

    /// Energy level of a path (a sequence of edge indices) under initial
    /// credit `c0`: c0 plus the edge-weight sum starting at the last reset
    /// edge; the reset edge's own weight is included in the sum.
    pub fn energy_level(&self, path: &[usize], c0: i64) -> Result<i64> {
        for pair in path.windows(2) {
            if self.edges[pair[0]].dst != self.edges[pair[1]].src {
                return Err(Error::NotAPath);
            }
        }
        let start = path
            .iter()
            .rposition(|&e| self.edges[e].reset)
            .unwrap_or(0);
        let mut level = c0;
        for &e in &path[start..] {
            level = crate::weight::checked_add(level, self.edges[e].weight)?;
        }
        Ok(level)
    }

    /// Energy level of a vertex path; fails when some hop is ambiguous
    /// (parallel edges) or missing.
    pub fn energy_level_vertices(&self, vertices: &[VertexId], c0: i64) -> Result<i64> {
        let mut path = Vec::new();
        for pair in vertices.windows(2) {
            let mut hops = self.outgoing(pair[0]).filter(|(_, e)| e.dst == pair[1]);
            let first = hops.next().ok_or(Error::NotAPath)?;
            if hops.next().is_some() {
                return Err(Error::AmbiguousPath(
                    self.vertex_name(pair[0]).to_string(),
                    self.vertex_name(pair[1]).to_string(),
                ));
            }
            path.push(first.0);
        }
        self.energy_level(&path, c0)
    }

    /// The same arena with every reset flag cleared.
    pub fn without_resets(&self) -> EgrArena {
        let vertices = self
            .vertex_names
            .iter()
            .cloned()
            .zip(self.owner.iter().copied())
            .collect();
        let edges = self.edges.iter().map(|e| EgrEdge { reset: false, ..*e }).collect();
        EgrArena::new(vertices, edges).expect("clearing resets preserves validity")
    }
}

// ---------------------------------------------------------------------------
// Safety-game reduction
// ---------------------------------------------------------------------------

/// The unweighted safety product: vertices (v, c) for credit levels
/// c in {0..cap} plus one unsafe (v, bot) per vertex. Credits above the cap
/// bounce back to the cap; a credit underflow moves to bot; reset edges
/// re-seed the credit from the initial credit `c0`.
#[derive(Clone, Debug)]
pub struct SafetyArena {
    pub c0: i64,
    pub cap: i64,
    /// Product vertex i = (base[i], credit[i]); credit None is the unsafe bot.
    pub base: Vec<VertexId>,
    pub credit: Vec<Option<i64>>,
    pub owner: Vec<Player>,
    out: Vec<Vec<usize>>,
    index: HashMap<(usize, i64), usize>,
    bottom_of: Vec<usize>,
}

impl SafetyArena {
    pub fn vertex_count(&self) -> usize {
        self.base.len()
    }

    pub fn id(&self, v: VertexId, credit: i64) -> Option<usize> {
        self.index.get(&(v.0, credit)).copied()
    }

    pub fn is_unsafe(&self, i: usize) -> bool {
        self.credit[i].is_none()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }
}

/// Builds the full safety product for initial credit `c0` (clamped to the
/// saturation cap).
pub fn to_safety_game(arena: &EgrArena, c0: i64, limits: &Limits) -> Result<SafetyArena> {
    let cap = arena.credit_cap();
    let c0 = c0.min(cap);
    if c0 < 0 {
        return Err(Error::Precondition("initial credit must be nonnegative".into()));
    }
    let levels = (cap + 1) as usize;
    let size = arena
        .vertex_count()
        .checked_mul(levels + 1)
        .ok_or(Error::Overflow)?;
    limits.check_arena(size)?;

    let n = arena.vertex_count();
    let mut base = Vec::with_capacity(size);
    let mut credit = Vec::with_capacity(size);
    let mut owner = Vec::with_capacity(size);
    let mut index = HashMap::with_capacity(n * levels);
    // Safe vertices first, ordered by (vertex, credit) so "lowest successor
    // index" matches the canonical (vertex, credit) order; bottoms follow.
    for v in 0..n {
        for c in 0..=cap {
            index.insert((v, c), base.len());
            base.push(VertexId(v));
            credit.push(Some(c));
            owner.push(arena.owner[v]);
        }
    }
    let mut bottom_of = Vec::with_capacity(n);
    for v in 0..n {
        bottom_of.push(base.len());
        base.push(VertexId(v));
        credit.push(None);
        owner.push(arena.owner[v]);
    }
    let mut out = vec![Vec::new(); base.len()];
    for i in 0..base.len() {
        let v = base[i];
        match credit[i] {
            None => out[i].push(i),
            Some(c) => {
                for (_, e) in arena.outgoing(v) {
                    let d = if e.reset { c0 + e.weight } else { c + e.weight };
                    let target = if d < 0 {
                        bottom_of[e.dst.0]
                    } else {
                        index[&(e.dst.0, d.min(cap))]
                    };
                    if !out[i].contains(&target) {
                        out[i].push(target);
                    }
                }
                out[i].sort_unstable();
            }
        }
    }
    Ok(SafetyArena { c0, cap, base, credit, owner, out, index, bottom_of })
}

/// Classical attractor solution of a safety game: Eve's winning region is the
/// complement of Adam's attractor to the unsafe set; her strategy picks, per
/// vertex of the region, the lowest-index successor inside the region.
pub fn solve_safety(s: &SafetyArena) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = s.vertex_count();
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut remaining: Vec<usize> = vec![0; n];
    for i in 0..n {
        remaining[i] = s.out[i].len();
        for &j in &s.out[i] {
            incoming[j].push(i);
        }
    }
    let mut attracted = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for i in 0..n {
        if s.is_unsafe(i) {
            attracted[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &p in &incoming[u] {
            if attracted[p] {
                continue;
            }
            let grab = match s.owner[p] {
                Player::Adam => true,
                Player::Eve => {
                    remaining[p] -= 1;
                    remaining[p] == 0
                }
            };
            if grab {
                attracted[p] = true;
                queue.push_back(p);
            }
        }
    }
    let region: Vec<bool> = attracted.iter().map(|&a| !a).collect();
    let mut strategy = vec![None; n];
    for i in 0..n {
        if region[i] && s.owner[i] == Player::Eve {
            strategy[i] = s.out[i].iter().copied().find(|&j| region[j]);
        }
    }
    (region, strategy)
}

// ---------------------------------------------------------------------------
// Value-lifting backend
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Need {
    Fin(i64),
    Inf,
}

impl Need {
    fn at_most(self, level: i64) -> bool {
        matches!(self, Need::Fin(g) if g <= level)
    }
}

/// Cost of taking edge `e` when the target requires `g_dst`: the least level
/// at the source that keeps the play alive through the edge. Reset edges
/// depend on the re-seeded credit only, so they cost either nothing or
/// everything.
fn edge_cost(e: &EgrEdge, g_dst: Need, c0: i64, value_cap: i64) -> Need {
    let need = match (e.reset, g_dst) {
        (true, Need::Fin(g)) => {
            if c0 + e.weight >= g && c0 + e.weight >= 0 {
                Need::Fin(0)
            } else {
                Need::Inf
            }
        }
        (true, Need::Inf) => Need::Inf,
        (false, Need::Fin(g)) => Need::Fin((g - e.weight).max(0)),
        (false, Need::Inf) => Need::Inf,
    };
    match need {
        Need::Fin(g) if g > value_cap => Need::Inf,
        other => other,
    }
}

/// Least fixpoint of the lifting operator with values capped at `value_cap`.
/// Values are exact when `value_cap` reaches the saturation cap; below it
/// they over-approximate the true requirement, so `Fin(g) <= level` is
/// always a sound "Eve wins" verdict.
fn lift_fixpoint(arena: &EgrArena, c0: i64, value_cap: i64) -> Vec<Need> {
    let n = arena.vertex_count();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in arena.edges() {
        preds[e.dst.0].push(e.src.0);
    }
    for p in preds.iter_mut() {
        p.sort_unstable();
        p.dedup();
    }
    let mut g: Vec<Need> = vec![Need::Fin(0); n];
    // A negative non-reset self-loop diverges on its own: for Adam always,
    // for Eve when it is her only way out.
    for v in 0..n {
        let diverging =
            |e: &EgrEdge| e.dst.0 == v && !e.reset && e.weight < 0;
        let hit = match arena.owner[v] {
            Player::Adam => arena.outgoing(VertexId(v)).any(|(_, e)| diverging(e)),
            Player::Eve => arena.outgoing(VertexId(v)).all(|(_, e)| diverging(e)),
        };
        if hit {
            g[v] = Need::Inf;
        }
    }
    let evaluate = |v: usize, g: &[Need]| -> Need {
        let owner = arena.owner[v];
        let mut acc: Option<Need> = None;
        for (_, e) in arena.outgoing(VertexId(v)) {
            let c = edge_cost(e, g[e.dst.0], c0, value_cap);
            acc = Some(match (acc, owner) {
                (None, _) => c,
                (Some(a), Player::Eve) => a.min_with(c),
                (Some(a), Player::Adam) => a.max_with(c),
            });
        }
        // A stuck player loses: a sink is Inf for Eve, harmless for Adam.
        acc.unwrap_or(match owner {
            Player::Eve => Need::Inf,
            Player::Adam => Need::Fin(0),
        })
    };
    let mut in_queue = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    while let Some(v) = queue.pop_front() {
        in_queue[v] = false;
        if g[v] == Need::Inf {
            continue;
        }
        let new = evaluate(v, &g);
        if needs_gt(new, g[v]) {
            g[v] = new;
            for &p in &preds[v] {
                if !in_queue[p] && g[p] != Need::Inf {
                    in_queue[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    g
}

impl Need {
    fn min_with(self, other: Need) -> Need {
        match (self, other) {
            (Need::Inf, x) | (x, Need::Inf) => x,
            (Need::Fin(a), Need::Fin(b)) => Need::Fin(a.min(b)),
        }
    }
    fn max_with(self, other: Need) -> Need {
        match (self, other) {
            (Need::Inf, _) | (_, Need::Inf) => Need::Inf,
            (Need::Fin(a), Need::Fin(b)) => Need::Fin(a.max(b)),
        }
    }
}

fn needs_gt(a: Need, b: Need) -> bool {
    match (a, b) {
        (Need::Inf, Need::Inf) => false,
        (Need::Inf, Need::Fin(_)) => true,
        (Need::Fin(_), Need::Inf) => false,
        (Need::Fin(x), Need::Fin(y)) => x > y,
    }
}

/// Adam's argmax edge per vertex under the current values; used as a
/// candidate certificate for "Adam wins at every credit".
fn adam_candidate(arena: &EgrArena, g: &[Need], c0: i64, value_cap: i64) -> Vec<Option<usize>> {
    let mut tau = vec![None; arena.vertex_count()];
    for v in arena.vertices() {
        if arena.owner(v) != Player::Adam {
            continue;
        }
        let mut best: Option<(usize, Need, bool)> = None;
        for (i, e) in arena.outgoing(v) {
            let c = edge_cost(e, g[e.dst.0], c0, value_cap);
            let better = match &best {
                None => true,
                Some((_, bc, breset)) => {
                    needs_gt(c, *bc) || (c == *bc && *breset && !e.reset)
                }
            };
            if better {
                best = Some((i, c, e.reset));
            }
        }
        tau[v.0] = best.map(|(i, _, _)| i);
    }
    tau
}

/// Checks a positional Adam strategy: returns, per vertex, whether every
/// cycle Eve can still reach under it is reset-free with a negative weight
/// sum. From such vertices Adam wins with any initial credit.
fn certified_adam_wins(arena: &EgrArena, tau: &[Option<usize>]) -> Vec<bool> {
    let n = arena.vertex_count();
    // Restricted adjacency: Adam plays tau, Eve keeps all options.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        match arena.owner[v] {
            Player::Adam => {
                if let Some(e) = tau[v] {
                    adj[v].push(e);
                }
            }
            Player::Eve => adj[v] = arena.out[v].clone(),
        }
    }
    let sccs = tarjan_sccs(n, |v| adj[v].iter().map(|&e| arena.edges[e].dst.0));
    let mut comp = vec![0usize; n];
    for (ci, c) in sccs.iter().enumerate() {
        for &v in c {
            comp[v] = ci;
        }
    }
    let mut good = vec![false; sccs.len()];
    for (ci, c) in sccs.iter().enumerate() {
        good[ci] = scc_has_good_cycle(arena, &adj, c, &comp, ci);
    }
    // A vertex is doomed unless it can reach a good component.
    let mut reach_good = vec![false; sccs.len()];
    // Tarjan emits components in reverse topological order: successors first.
    for ci in 0..sccs.len() {
        if good[ci] {
            reach_good[ci] = true;
            continue;
        }
        'scan: for &v in &sccs[ci] {
            for &e in &adj[v] {
                let cj = comp[arena.edges[e].dst.0];
                if cj != ci && reach_good[cj] {
                    reach_good[ci] = true;
                    break 'scan;
                }
            }
        }
    }
    (0..n).map(|v| !reach_good[comp[v]]).collect()
}

/// Does the component contain a cycle that is good for Eve, i.e. one with a
/// reset edge or a nonnegative weight sum?
fn scc_has_good_cycle(
    arena: &EgrArena,
    adj: &[Vec<usize>],
    scc: &[usize],
    comp: &[usize],
    ci: usize,
) -> bool {
    let internal = |e: usize| comp[arena.edges[e].dst.0] == ci;
    if scc.len() == 1 {
        let v = scc[0];
        return adj[v]
            .iter()
            .any(|&e| arena.edges[e].dst.0 == v && (arena.edges[e].reset || arena.edges[e].weight >= 0));
    }
    for &v in scc {
        for &e in &adj[v] {
            if internal(e) && arena.edges[e].reset {
                return true;
            }
        }
    }
    // Longest-path relaxation inside the component: divergence shows a
    // positive cycle; on convergence, a zero cycle is a cycle of tight edges.
    let mut local = HashMap::with_capacity(scc.len());
    for (i, &v) in scc.iter().enumerate() {
        local.insert(v, i);
    }
    let m = scc.len();
    let mut dist: Vec<Option<i64>> = vec![None; m];
    dist[0] = Some(0);
    let mut relax_count = vec![0usize; m];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut queued = vec![false; m];
    queued[0] = true;
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        let v = scc[i];
        let dv = dist[i].unwrap();
        for &e in &adj[v] {
            if !internal(e) {
                continue;
            }
            let edge = &arena.edges[e];
            let j = local[&edge.dst.0];
            let nd = dv + edge.weight;
            if dist[j].map_or(true, |old| nd > old) {
                dist[j] = Some(nd);
                relax_count[j] += 1;
                if relax_count[j] > m {
                    return true; // positive cycle
                }
                if !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    // Tight subgraph: edges with dist[src] + w == dist[dst]; any cycle in it
    // has weight sum zero.
    let tight: Vec<Vec<usize>> = scc
        .iter()
        .map(|&v| {
            let i = local[&v];
            adj[v]
                .iter()
                .copied()
                .filter(|&e| {
                    let edge = &arena.edges[e];
                    internal(e)
                        && dist[i].is_some()
                        && dist[local[&edge.dst.0]].is_some()
                        && dist[i].unwrap() + edge.weight == dist[local[&edge.dst.0]].unwrap()
                })
                .collect()
        })
        .collect();
    let tight_sccs = tarjan_sccs(m, |i| {
        tight[i].iter().map(|&e| local[&arena.edges[e].dst.0])
    });
    for c in &tight_sccs {
        if c.len() > 1 {
            return true;
        }
        let i = c[0];
        if tight[i].iter().any(|&e| local[&arena.edges[e].dst.0] == i) {
            return true;
        }
    }
    false
}

/// Iterative Tarjan strongly-connected components; emitted in reverse
/// topological order (every edge leaves a component emitted no earlier).
fn tarjan_sccs<I, F>(n: usize, succ: F) -> Vec<Vec<usize>>
where
    I: Iterator<Item = usize>,
    F: Fn(usize) -> I,
{
    #[derive(Clone, Copy)]
    struct Frame {
        v: usize,
    }
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut sccs = Vec::new();
    let mut call: Vec<(Frame, Vec<usize>, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((Frame { v: root }, succ(root).collect(), 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((frame, succs, mut cursor)) = call.pop() {
            let v = frame.v;
            let mut descended = false;
            while cursor < succs.len() {
                let w = succs[cursor];
                cursor += 1;
                if index[w] == usize::MAX {
                    call.push((frame, succs, cursor));
                    call.push((Frame { v: w }, succ(w).collect(), 0));
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    descended = true;
                    break;
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            if descended {
                continue;
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                sccs.push(comp);
            }
            if let Some((pframe, _, _)) = call.last() {
                let p = pframe.v;
                low[p] = low[p].min(low[v]);
            }
        }
    }
    sccs
}

/// Per-vertex requirements at credit `c0`, resolved by iterative deepening
/// of the value cap: a vertex is settled once its lifted value drops to the
/// query credit (a sound "Eve wins", values only over-approximate) or once a
/// verified Adam strategy certifies it lost at every credit. The last round
/// runs at the saturation cap, where the fixpoint is exact.
///
/// With a focus set, only those vertices need to settle; other entries are
/// then sound for strategy use (following cheapest edges from a level at or
/// above the returned value never underflows) but may over-approximate.
fn lift_solve(arena: &EgrArena, c0: i64, focus: Option<&[VertexId]>) -> Vec<Need> {
    let cap = arena.credit_cap();
    let query = c0.min(cap);
    let mut value_cap = (4 * arena.max_weight()).max(16).min(cap.max(1));
    loop {
        let g = lift_fixpoint(arena, query, value_cap);
        if value_cap >= cap {
            return g;
        }
        let settled_by_value = |v: usize| g[v].at_most(query);
        let need_doom_check = match focus {
            Some(f) => f.iter().any(|&v| !settled_by_value(v.0)),
            None => (0..g.len()).any(|v| !settled_by_value(v)),
        };
        if !need_doom_check {
            return g;
        }
        let tau = adam_candidate(arena, &g, query, value_cap);
        let doomed = certified_adam_wins(arena, &tau);
        let settled = |v: usize| settled_by_value(v) || doomed[v];
        let all_settled = match focus {
            Some(f) => f.iter().all(|&v| settled(v.0)),
            None => (0..g.len()).all(settled),
        };
        if all_settled {
            return g
                .iter()
                .enumerate()
                .map(|(v, need)| if doomed[v] { Need::Inf } else { *need })
                .collect();
        }
        value_cap = value_cap.saturating_mul(8).min(cap.max(1));
    }
}

// ---------------------------------------------------------------------------
// Public solving API
// ---------------------------------------------------------------------------

/// A solved EGR at a fixed initial credit, usable as Eve's finite-memory
/// strategy whose memory is the current credit level.
#[derive(Clone, Debug)]
pub struct EgrSolution {
    pub c0: i64,
    pub cap: i64,
    backend: Backend,
}

#[derive(Clone, Debug)]
enum Backend {
    Product {
        product: SafetyArena,
        region: Vec<bool>,
        choice: Vec<Option<usize>>,
    },
    Lift {
        g: Vec<Need>,
        choice: Vec<Option<usize>>,
    },
}

impl EgrSolution {
    /// Does Eve win from `v` with the solution's initial credit?
    pub fn eve_wins(&self, v: VertexId) -> bool {
        self.eve_wins_at_level(v, self.c0)
    }

    /// Does Eve survive from `v` when the current level is `level` (resets
    /// still re-seed from the solution's initial credit)?
    pub fn eve_wins_at_level(&self, v: VertexId, level: i64) -> bool {
        let level = level.min(self.cap);
        if level < 0 {
            return false;
        }
        match &self.backend {
            Backend::Product { product, region, .. } => {
                product.id(v, level).map(|i| region[i]).unwrap_or(false)
            }
            Backend::Lift { g, .. } => g[v.0].at_most(level),
        }
    }

    /// Eve's edge choice at an owned vertex with the given current level.
    /// Tie-break: lowest (target vertex, target credit) in the safety
    /// product, or the cheapest edge under the lifted values.
    pub fn choose(&self, arena: &EgrArena, v: VertexId, level: i64) -> Option<usize> {
        let level = level.min(self.cap);
        if level < 0 {
            return None;
        }
        match &self.backend {
            Backend::Product { product, region, choice } => {
                let i = product.id(v, level)?;
                let target = choice[i]?;
                if !region[i] {
                    return None;
                }
                // Map the chosen product successor back to the lowest edge id
                // inducing it.
                for (eid, e) in arena.outgoing(v) {
                    let d = if e.reset { product.c0 + e.weight } else { level + e.weight };
                    let t = if d < 0 {
                        product.bottom_of[e.dst.0]
                    } else {
                        product.index[&(e.dst.0, d.min(product.cap))]
                    };
                    if t == target {
                        return Some(eid);
                    }
                }
                None
            }
            Backend::Lift { g, choice } => {
                if g[v.0].at_most(level) {
                    choice[v.0]
                } else {
                    None
                }
            }
        }
    }

    /// Level after Eve or Adam takes edge `e` from level `level`.
    pub fn step_level(&self, e: &EgrEdge, level: i64) -> Option<i64> {
        let d = if e.reset { self.c0 + e.weight } else { level + e.weight };
        if d < 0 {
            None
        } else {
            Some(d.min(self.cap))
        }
    }
}

/// Largest safety product materialized explicitly; beyond it the
/// value-lifting backend answers with far less memory.
const PRODUCT_CEILING: u128 = 2_000_000;

/// Solves the EGR at initial credit `c0` for every start vertex at once.
/// Small arenas go through the safety-game reduction; larger ones use
/// the value-lifting backend, which returns identical verdicts.
pub fn solve_all(arena: &EgrArena, c0: i64, limits: &Limits) -> Result<EgrSolution> {
    solve_focused(arena, c0, None, limits)
}

/// As [`solve_all`], but on large arenas only the `focus` vertices are
/// guaranteed exact verdicts. The returned strategy is still winning from
/// every vertex the solution reports as won: strategy-consistent plays never
/// leave the settled part.
pub fn solve_focused(
    arena: &EgrArena,
    c0: i64,
    focus: Option<&[VertexId]>,
    limits: &Limits,
) -> Result<EgrSolution> {
    if c0 < 0 {
        return Err(Error::Precondition("initial credit must be nonnegative".into()));
    }
    let cap = arena.credit_cap();
    let levels = (cap as u128 + 2) * (arena.vertex_count() as u128);
    if levels <= PRODUCT_CEILING.min(limits.max_arena as u128) {
        let product = to_safety_game(arena, c0, limits)?;
        let (region, choice) = solve_safety(&product);
        return Ok(EgrSolution { c0: c0.min(cap), cap, backend: Backend::Product { product, region, choice } });
    }
    limits.check_arena(arena.vertex_count() + arena.edges().len())?;
    let g = lift_solve(arena, c0, focus);
    let c0 = c0.min(cap);
    let mut choice = vec![None; arena.vertex_count()];
    let value_cap = cap.max(1);
    for v in arena.vertices() {
        if arena.owner(v) != Player::Eve {
            continue;
        }
        let mut best: Option<(usize, Need)> = None;
        for (i, e) in arena.outgoing(v) {
            let cost = edge_cost(e, g[e.dst.0], c0, value_cap);
            if best.map_or(true, |(_, b)| needs_gt(b, cost)) {
                best = Some((i, cost));
            }
        }
        choice[v.0] = best.map(|(i, _)| i);
    }
    Ok(EgrSolution { c0, cap, backend: Backend::Lift { g, choice } })
}

/// Winner verdicts at credit `c0` for the given target vertices only. On
/// large arenas this lets the lifting backend stop as soon as the targets
/// are settled instead of resolving the whole arena.
pub fn eve_wins_targets(
    arena: &EgrArena,
    c0: i64,
    targets: &[VertexId],
    limits: &Limits,
) -> Result<Vec<bool>> {
    if c0 < 0 {
        return Err(Error::Precondition("initial credit must be nonnegative".into()));
    }
    let cap = arena.credit_cap();
    let query = c0.min(cap);
    let levels = (cap as u128 + 2) * (arena.vertex_count() as u128);
    if levels <= PRODUCT_CEILING.min(limits.max_arena as u128) {
        let product = to_safety_game(arena, c0, limits)?;
        let (region, _) = solve_safety(&product);
        return Ok(targets
            .iter()
            .map(|&v| product.id(v, query).map(|i| region[i]).unwrap_or(false))
            .collect());
    }
    limits.check_arena(arena.vertex_count() + arena.edges().len())?;
    let g = lift_solve(arena, query, Some(targets));
    Ok(targets.iter().map(|&v| g[v.0].at_most(query)).collect())
}

/// Does Eve win the EGR from `v` with initial credit `c0`?
pub fn solve_egr(arena: &EgrArena, v: VertexId, c0: i64, limits: &Limits) -> Result<bool> {
    Ok(eve_wins_targets(arena, c0, &[v], limits)?[0])
}

/// Vertices from which Eve wins with the saturation credit |V| * w_max;
/// equivalently, with some credit.
pub fn win_region(arena: &EgrArena, limits: &Limits) -> Result<BTreeSet<VertexId>> {
    let all: Vec<VertexId> = arena.vertices().collect();
    let wins = eve_wins_targets(arena, arena.credit_cap(), &all, limits)?;
    Ok(all.into_iter().zip(wins).filter(|&(_, w)| w).map(|(v, _)| v).collect())
}

/// Least credit in {0..cap} with which Eve wins from `v`, or None when the
/// vertex is unwinnable. Winnability is monotone in the credit, so this is a
/// binary search.
pub fn minimal_credit(arena: &EgrArena, v: VertexId, limits: &Limits) -> Result<Option<i64>> {
    minimal_uniform_credit(arena, &[v], limits)
}

/// Least credit with which Eve wins simultaneously from every vertex of
/// `targets`, or None if some target is unwinnable.
pub fn minimal_uniform_credit(
    arena: &EgrArena,
    targets: &[VertexId],
    limits: &Limits,
) -> Result<Option<i64>> {
    let cap = arena.credit_cap();
    let wins_all = |c0: i64| -> Result<bool> {
        Ok(eve_wins_targets(arena, c0, targets, limits)?.iter().all(|&w| w))
    };
    if !wins_all(cap)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0i64, cap);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if wins_all(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// A credit sufficient for Eve to win from every target at once, or None if
/// some target is unwinnable. Small arenas get the exact minimum through the
/// safety product; large ones a near-minimal upper bound from a monotone
/// single-round probe (vertices that would need deeper lifting to confirm a
/// win count as losses, which only pushes the result upward).
pub fn sufficient_uniform_credit(
    arena: &EgrArena,
    targets: &[VertexId],
    limits: &Limits,
) -> Result<Option<i64>> {
    let cap = arena.credit_cap();
    let levels = (cap as u128 + 2) * (arena.vertex_count() as u128);
    if levels <= PRODUCT_CEILING.min(limits.max_arena as u128) {
        return minimal_uniform_credit(arena, targets, limits);
    }
    let exact = eve_wins_targets(arena, cap, targets, limits)?;
    if !exact.iter().all(|&w| w) {
        return Ok(None);
    }
    limits.check_arena(arena.vertex_count() + arena.edges().len())?;
    let probe = |c0: i64| -> bool {
        let value_cap = (4 * c0 + 4 * arena.max_weight() + 16).min(cap.max(1));
        let g = lift_fixpoint(arena, c0, value_cap);
        targets.iter().all(|&v| g[v.0].at_most(c0))
    };
    // Sufficient credits are typically far below the cap: gallop upward,
    // then close in by bisection. Probes stay cheap because the lifting is
    // capped proportionally to the probed credit.
    let mut hi = 1i64;
    while hi < cap && !probe(hi) {
        hi = (hi * 8).min(cap);
    }
    let mut lo = 0i64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if probe(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Eve's positional strategy on the credit-annotated arena, presented as a
/// finite-memory strategy over V whose memory is the credit level.
pub type PositionalStrategy = EgrSolution;

/// Solves at credit `c0` and returns the solution as Eve's strategy.
pub fn extract_strategy(arena: &EgrArena, c0: i64, limits: &Limits) -> Result<PositionalStrategy> {
    solve_all(arena, c0, limits)
}

/// Strategy extraction settled only for plays out of the given start
/// vertices; cheaper on large arenas.
pub fn extract_strategy_for(
    arena: &EgrArena,
    c0: i64,
    starts: &[VertexId],
    limits: &Limits,
) -> Result<PositionalStrategy> {
    solve_focused(arena, c0, Some(starts), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::make_egr_example;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn energy_level_on_example() {
        let g = make_egr_example();
        let v = |n: &str| g.vertex_id(n).unwrap();
        assert_eq!(g.energy_level_vertices(&[v("v0"), v("v1")], 2).unwrap(), 3);
        // Reset at (v1, v2): the reset edge's own weight is charged.
        assert_eq!(
            g.energy_level_vertices(&[v("v0"), v("v1"), v("v2"), v("v0")], 2).unwrap(),
            0
        );
        assert_eq!(g.energy_level_vertices(&[v("v0")], 7).unwrap(), 7);
    }

    #[test]
    fn example_is_won_with_credit_two() {
        let g = make_egr_example();
        let v0 = g.vertex_id("v0").unwrap();
        assert!(solve_egr(&g, v0, 2, &limits()).unwrap());
        assert!(!solve_egr(&g, v0, 1, &limits()).unwrap());
        assert_eq!(minimal_credit(&g, v0, &limits()).unwrap(), Some(2));
        let region = win_region(&g, &limits()).unwrap();
        assert_eq!(region.len(), 3);
    }

    #[test]
    fn without_reset_eve_loses_everywhere_from_v0() {
        let g = make_egr_example().without_resets();
        let v0 = g.vertex_id("v0").unwrap();
        for c0 in 0..=g.credit_cap() {
            assert!(!solve_egr(&g, v0, c0, &limits()).unwrap());
        }
    }

    #[test]
    fn adam_negative_self_loop_is_unwinnable() {
        let g = EgrArena::new(
            vec![("a".into(), Player::Adam)],
            vec![EgrEdge { src: VertexId(0), dst: VertexId(0), weight: -1, reset: false }],
        )
        .unwrap();
        assert!(win_region(&g, &limits()).unwrap().is_empty());
        assert_eq!(minimal_credit(&g, VertexId(0), &limits()).unwrap(), None);
    }

    #[test]
    fn all_positive_arena_is_won_everywhere() {
        let g = EgrArena::new(
            vec![("a".into(), Player::Eve), ("b".into(), Player::Adam)],
            vec![
                EgrEdge { src: VertexId(0), dst: VertexId(1), weight: 1, reset: false },
                EgrEdge { src: VertexId(1), dst: VertexId(0), weight: 2, reset: false },
            ],
        )
        .unwrap();
        assert_eq!(win_region(&g, &limits()).unwrap().len(), 2);
        assert!(solve_egr(&g, VertexId(0), 0, &limits()).unwrap());
    }

    #[test]
    fn sink_and_eve_reset_are_rejected() {
        let sink = EgrArena::new(vec![("a".into(), Player::Eve)], vec![]);
        assert!(matches!(sink, Err(Error::ArenaSink(_))));
        let eve_reset = EgrArena::new(
            vec![("a".into(), Player::Eve)],
            vec![EgrEdge { src: VertexId(0), dst: VertexId(0), weight: 0, reset: true }],
        );
        assert!(matches!(eve_reset, Err(Error::ResetFromEve(_))));
    }

    #[test]
    fn strategy_on_forced_arena_follows_unique_edges() {
        let g = make_egr_example();
        let v = |n: &str| g.vertex_id(n).unwrap();
        let sol = extract_strategy(&g, 2, &limits()).unwrap();
        for c in 0..=2 {
            let e0 = sol.choose(&g, v("v0"), c).unwrap();
            assert_eq!(g.edge(e0).dst, v("v1"));
        }
        // v2 survives only from level 2 upward (its one move costs 2).
        assert_eq!(sol.choose(&g, v("v2"), 1), None);
        for c in 2..=4 {
            let e2 = sol.choose(&g, v("v2"), c).unwrap();
            assert_eq!(g.edge(e2).dst, v("v0"));
        }
    }

    #[test]
    fn lift_backend_agrees_with_product_on_example() {
        let g = make_egr_example();
        // Room for the raw arena but not for the safety product.
        let cramped = Limits { max_states: 1_000_000, max_arena: 10 };
        for c0 in 0..=g.credit_cap() {
            let small = solve_all(&g, c0, &limits()).unwrap();
            let big = solve_all(&g, c0, &cramped).unwrap();
            for v in g.vertices() {
                assert_eq!(small.eve_wins(v), big.eve_wins(v), "c0={c0} v={v:?}");
            }
        }
    }

    #[test]
    fn nonnegative_weights_never_reach_bottom() {
        let g = EgrArena::new(
            vec![("a".into(), Player::Eve), ("b".into(), Player::Adam)],
            vec![
                EgrEdge { src: VertexId(0), dst: VertexId(1), weight: 2, reset: false },
                EgrEdge { src: VertexId(1), dst: VertexId(0), weight: 0, reset: false },
            ],
        )
        .unwrap();
        let s = to_safety_game(&g, 0, &limits()).unwrap();
        for i in 0..s.vertex_count() {
            if !s.is_unsafe(i) {
                assert!(s.successors(i).iter().all(|&j| !s.is_unsafe(j)));
            }
        }
    }

    #[test]
    fn safety_product_caps_credit() {
        let g = EgrArena::new(
            vec![("a".into(), Player::Eve)],
            vec![EgrEdge { src: VertexId(0), dst: VertexId(0), weight: 5, reset: false }],
        )
        .unwrap();
        let s = to_safety_game(&g, 3, &limits()).unwrap();
        // cap = 5; from (a, 3) the only successor is (a, min(8, 5)).
        let i = s.id(VertexId(0), 3).unwrap();
        let succ = s.successors(i);
        assert_eq!(succ.len(), 1);
        assert_eq!(s.credit[succ[0]], Some(5));
    }
}
