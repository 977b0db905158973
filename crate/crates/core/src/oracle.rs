//! Brute-force ground truth for small instances.
//!
//! Everything here is exponential and meant for `n <= 9`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::exec::Exec;
use crate::flips::{all_colored_flips, apply_colored_flip};
use crate::realizer::{check_local, Color, EdgeKind, Orientation3, Realizer, RegionVector, Wood};
use crate::triangulation::Triangulation;

pub const MAX_ENUMERATION_N: usize = 9;
pub const MAX_FLIP_GRAPH_N: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("n = {n} outside the supported range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
}

fn check_range(n: usize, max: usize) -> Result<(), OracleError> {
    if (4..=max).contains(&n) {
        Ok(())
    } else {
        Err(OracleError::OutOfRange { n, min: 4, max })
    }
}

/// All triangulations on `n` vertices with outer face `(0, 1, 2)`, found as
/// the closure of the double fan under diagonal flips. Sorted.
pub fn enumerate_triangulations(n: usize, exec: Exec) -> Result<Vec<Triangulation>, OracleError> {
    check_range(n, MAX_ENUMERATION_N)?;
    let start = Triangulation::double_fan(n).expect("n >= 4");
    let mut seen: HashSet<Triangulation> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let expanded = exec.map(&frontier, |t| {
            t.interior_edges()
                .filter(|&(a, b)| t.is_diagonal_flippable(a, b).unwrap_or(false))
                .map(|(a, b)| t.diagonal_flip(a, b).expect("flippable"))
                .collect::<Vec<_>>()
        });
        frontier = Vec::new();
        for t in expanded.into_iter().flatten() {
            if !seen.contains(&t) {
                seen.insert(t.clone());
                frontier.push(t);
            }
        }
    }
    let mut all: Vec<Triangulation> = seen.into_iter().collect();
    all.sort_by_cached_key(|t| t.to_string());
    Ok(all)
}

/// Calls `visit` with the head lists of every 3-orientation of `t`.
fn for_each_orientation(t: &Triangulation, mut visit: impl FnMut(&[Vec<usize>])) {
    let n = t.n();
    let edges: Vec<(usize, usize)> = t.interior_edges().collect();
    let mut need = vec![0usize; n];
    let mut open = vec![0usize; n];
    for u in t.interior_vertices() {
        need[u] = 3;
    }
    for &(a, b) in &edges {
        open[a] += 1;
        open[b] += 1;
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        edges: &[(usize, usize)],
        need: &mut [usize],
        open: &mut [usize],
        out: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let Some(&(a, b)) = edges.get(k) else {
            if need.iter().all(|&x| x == 0) {
                visit(out);
            }
            return;
        };
        open[a] -= 1;
        open[b] -= 1;
        for (tail, head) in [(a, b), (b, a)] {
            let other = head;
            // `tail` spends one out-edge; `head` must still be able to reach its quota.
            if need[tail] == 0 || need[other] > open[other] || need[tail] - 1 > open[tail] {
                continue;
            }
            need[tail] -= 1;
            out[tail].push(head);
            go(k + 1, edges, need, open, out, visit);
            out[tail].pop();
            need[tail] += 1;
        }
        open[a] += 1;
        open[b] += 1;
    }
    go(0, &edges, &mut need, &mut open, &mut out, &mut visit);
}

/// Number of 3-orientations of `t`, by orientation-only backtracking.
pub fn count_3_orientations(t: &Triangulation) -> usize {
    let mut count = 0;
    for_each_orientation(t, |_| count += 1);
    count
}

/// All realizers of `t`: every 3-orientation colored by
/// [`Orientation3::to_realizer`]. Sorted by edge list.
pub fn enumerate_realizers(t: &Triangulation) -> Vec<Realizer> {
    let mut out = Vec::new();
    for_each_orientation(t, |heads| {
        let o = Orientation3::new(t.clone(), heads.to_vec()).expect("backtracking yields 3-orientations");
        out.push(o.to_realizer().expect("every 3-orientation has a coloring"));
    });
    out.sort_by_cached_key(|r| r.edges());
    out
}

/// All realizers of `t` by backtracking directly over (direction, color)
/// for every interior edge and checking the local rule at each vertex once
/// all its edges are decided. Independent of the 3-orientation bijection.
pub fn enumerate_colorings(t: &Triangulation) -> Vec<Realizer> {
    let n = t.n();
    let edges: Vec<(usize, usize)> = t.interior_edges().collect();
    // The vertex whose edges are all decided after edge k.
    let mut last_edge = vec![usize::MAX; n];
    for (k, &(a, b)) in edges.iter().enumerate() {
        last_edge[a] = k;
        last_edge[b] = k;
    }
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for u in 0..n {
        if last_edge[u] != usize::MAX {
            closes[last_edge[u]].push(u);
        }
    }
    let mut assign: HashMap<(usize, usize), EdgeKind> = HashMap::new();
    let mut used = vec![[false; 3]; n];
    let mut found = Vec::new();

    struct Ctx<'a> {
        t: &'a Triangulation,
        edges: &'a [(usize, usize)],
        closes: &'a [Vec<usize>],
    }

    fn local_ok(ctx: &Ctx, assign: &HashMap<(usize, usize), EdgeKind>, u: usize) -> bool {
        let kinds: Vec<(usize, EdgeKind)> = ctx
            .t
            .rotation(u)
            .iter()
            .map(|&v| (v, if ctx.t.is_outer_edge(u, v) { EdgeKind::Outer } else { assign[&(u, v)] }))
            .collect();
        check_local(u, ctx.t.root_index(u), &kinds).is_ok()
    }

    fn go(
        ctx: &Ctx,
        k: usize,
        assign: &mut HashMap<(usize, usize), EdgeKind>,
        used: &mut Vec<[bool; 3]>,
        found: &mut Vec<Vec<(usize, usize, Color)>>,
    ) {
        let Some(&(a, b)) = ctx.edges.get(k) else {
            let mut e: Vec<(usize, usize, Color)> = assign
                .iter()
                .filter_map(|(&(x, y), &kind)| match kind {
                    EdgeKind::Out(c) => Some((x, y, c)),
                    _ => None,
                })
                .collect();
            e.sort_unstable();
            found.push(e);
            return;
        };
        for (tail, head) in [(a, b), (b, a)] {
            if ctx.t.is_outer_vertex(tail) {
                continue;
            }
            for c in Color::ALL {
                if used[tail][c.index()] {
                    continue;
                }
                used[tail][c.index()] = true;
                assign.insert((tail, head), EdgeKind::Out(c));
                assign.insert((head, tail), EdgeKind::In(c));
                if ctx.closes[k].iter().all(|&u| local_ok(ctx, assign, u)) {
                    go(ctx, k + 1, assign, used, found);
                }
                assign.remove(&(tail, head));
                assign.remove(&(head, tail));
                used[tail][c.index()] = false;
            }
        }
    }

    let ctx = Ctx { t, edges: &edges, closes: &closes };
    let mut raw = Vec::new();
    go(&ctx, 0, &mut assign, &mut used, &mut raw);
    for e in raw {
        // Local rules everywhere still allow cycles within a color class.
        if let Ok(r) = Realizer::from_edges(t.clone(), &e) {
            found.push(r);
        }
    }
    found.sort_by_cached_key(|r| r.edges());
    found
}

/// Every realizer of every triangulation on `n` vertices.
pub fn all_realizers(n: usize, exec: Exec) -> Result<Vec<Realizer>, OracleError> {
    let ts = enumerate_triangulations(n, exec)?;
    Ok(exec.map(&ts, enumerate_realizers).into_iter().flatten().collect())
}

/// Simple directed cycles of a realizer, each listed once starting from its
/// smallest vertex.
pub fn directed_cycles<W: Wood + ?Sized>(r: &W) -> Vec<Vec<usize>> {
    let t = r.base();
    let n = t.n();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    fn go<W: Wood + ?Sized>(r: &W, start: usize, x: usize, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Vec<usize>>) {
        for c in Color::ALL {
            let Some(y) = r.parent(c, x) else { continue };
            if y == start {
                out.push(path.clone());
            } else if y > start && !on_path[y] {
                on_path[y] = true;
                path.push(y);
                go(r, start, y, path, on_path, out);
                path.pop();
                on_path[y] = false;
            }
        }
    }
    for s in t.interior_vertices() {
        on_path[s] = true;
        go(r, s, s, &mut vec![s], &mut on_path, &mut cycles);
        on_path[s] = false;
    }
    cycles.sort();
    cycles
}

/// Region numerators of every vertex; thin alias of [`Realizer::barycentric`].
pub fn static_coordinates(r: &Realizer) -> Vec<RegionVector> {
    r.barycentric()
}

/// Realizers of all triangulations on `n` vertices joined by single colored flips.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    pub n: usize,
    pub triangulations: usize,
    pub nodes: Vec<Realizer>,
    pub adjacency: Vec<Vec<usize>>,
}

/// Summary numbers of a [`FlipGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipGraphStats {
    pub n: usize,
    pub triangulations: usize,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub diameter: usize,
    /// `histogram[d]` counts unordered pairs at distance `d` (within components).
    pub histogram: Vec<usize>,
}

pub fn build_flip_graph(n: usize, exec: Exec) -> Result<FlipGraph, OracleError> {
    check_range(n, MAX_FLIP_GRAPH_N)?;
    let ts = enumerate_triangulations(n, exec)?;
    let nodes: Vec<Realizer> = exec.map(&ts, enumerate_realizers).into_iter().flatten().collect();
    let index: HashMap<&Realizer, usize> = nodes.iter().enumerate().map(|(k, r)| (r, k)).collect();
    let adjacency = exec.map(&nodes, |r| {
        let mut nb: Vec<usize> = all_colored_flips(r)
            .iter()
            .map(|op| {
                let mut s = r.clone();
                apply_colored_flip(&mut s, op).expect("enumerated flip is valid");
                *index.get(&s).expect("flip stays inside the enumerated set")
            })
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    });
    Ok(FlipGraph { n, triangulations: ts.len(), nodes, adjacency })
}

impl FlipGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Breadth-first distances from `s`; `usize::MAX` if unreachable.
    pub fn distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn stats(&self, exec: Exec) -> FlipGraphStats {
        let all = exec.map_range(self.nodes.len(), |s| self.distances(s));
        let mut histogram = Vec::new();
        let mut diameter = 0;
        for (s, dist) in all.iter().enumerate() {
            for &d in &dist[s + 1..] {
                if d == usize::MAX {
                    continue;
                }
                if histogram.len() <= d {
                    histogram.resize(d + 1, 0);
                }
                histogram[d] += 1;
                diameter = diameter.max(d);
            }
        }
        let mut comp = vec![usize::MAX; self.nodes.len()];
        let mut components = 0;
        for s in 0..self.nodes.len() {
            if comp[s] == usize::MAX {
                for (k, &d) in all[s].iter().enumerate() {
                    if d != usize::MAX {
                        comp[k] = components;
                    }
                }
                components += 1;
            }
        }
        FlipGraphStats {
            n: self.n,
            triangulations: self.triangulations,
            nodes: self.nodes.len(),
            edges: self.edge_count(),
            components,
            diameter,
            histogram,
        }
    }

    /// Graphviz rendering; node labels are indices into `nodes`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flips {\n");
        for k in 0..self.nodes.len() {
            let _ = writeln!(s, "  {k};");
        }
        for (a, nb) in self.adjacency.iter().enumerate() {
            for &b in nb.iter().filter(|&&b| b > a) {
                let _ = writeln!(s, "  {a} -- {b};");
            }
        }
        s.push_str("}\n");
        s
    }
}

impl FlipGraphStats {
    pub fn csv_header() -> &'static str {
        "n,triangulations,nodes,edges,components,connected,diameter"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.triangulations,
            self.nodes,
            self.edges,
            self.components,
            self.components == 1,
            self.diameter
        )
    }

    /// `distance,pairs` lines.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("distance,pairs\n");
        for (d, c) in self.histogram.iter().enumerate() {
            let _ = writeln!(s, "{d},{c}");
        }
        s
    }
}
