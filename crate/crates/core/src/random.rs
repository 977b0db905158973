//! Seeded random triangulations and realizers.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::dynrealizer::DynRealizer;
use crate::flips::{apply_colored_flip, candidate_ops, ColoredFlipOp};
use crate::realizer::{compute_realizer, Color, Realizer, Wood};
use crate::triangulation::Triangulation;

/// Stacks `n - 3` vertices into uniformly chosen faces, evens out vertex
/// degrees with local flips, then attempts `flips` diagonal flips on
/// uniformly chosen interior edges. Vertices are finally numbered in
/// breadth-first order, so neighbors tend to have close ids. Outer face is
/// `(0, 1, 2)`.
///
/// Plain stacking leaves hubs whose degree grows polynomially in `n`; the
/// balancing pass keeps degrees small so that per-flip costs stay local.
pub fn random_triangulation<R: Rng + ?Sized>(n: usize, flips: usize, rng: &mut R) -> Triangulation {
    assert!(n >= 4, "need at least 4 vertices");
    let mut rot: Vec<Vec<usize>> = vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]];
    let after = |r: &mut Vec<usize>, anchor: usize, x: usize| {
        let k = r.iter().position(|&y| y == anchor).expect("anchor present");
        r.insert(k + 1, x);
    };
    for x in 4..n {
        let k = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[k];
        after(&mut rot[a], b, x);
        after(&mut rot[b], c, x);
        after(&mut rot[c], a, x);
        rot.push(vec![a, b, c]);
        faces[k] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    let mut t = Triangulation::new(rot, [0, 1, 2]).expect("stacking keeps a triangulation");
    balance_degrees(&mut t);
    let mut edges: Vec<(usize, usize)> = t.interior_edges().collect();
    for _ in 0..flips {
        let k = rng.gen_range(0..edges.len());
        let (u, v) = edges[k];
        if t.is_diagonal_flippable(u, v).unwrap_or(false) {
            let q = t.flip_in_place(u, v).expect("checked flippable");
            edges[k] = (q.w, q.z);
        }
    }
    let mut to = vec![0; n];
    for (new, old) in t.bfs_order().into_iter().enumerate() {
        to[old] = new;
    }
    t.relabel(&to).expect("a permutation")
}

/// Flips every diagonal `u v` with `deg u + deg v > deg w + deg z + 2` until
/// none is left. Each flip lowers the sum of squared degrees, so this ends.
fn balance_degrees(t: &mut Triangulation) {
    let mut queue: Vec<(usize, usize)> = t.interior_edges().collect();
    while let Some((u, v)) = queue.pop() {
        let Ok(q) = t.quad_of(u, v) else { continue };
        if t.degree(u) + t.degree(v) <= t.degree(q.w) + t.degree(q.z) + 2 || !t.is_diagonal_flippable(u, v).unwrap_or(false) {
            continue;
        }
        t.flip_in_place(u, v).expect("checked flippable");
        queue.extend([(u, q.w), (q.w, v), (v, q.z), (q.z, u)]);
    }
}

/// Picks a uniformly random tree edge and returns a colored flip on it,
/// trying up to `attempts` edges. A support edge plus a flippable diagonal
/// is all a valid flip needs, so no post-flip check is made.
pub fn random_flip_site<W: Wood + ?Sized, R: Rng + ?Sized>(r: &W, rng: &mut R, attempts: usize) -> Option<ColoredFlipOp> {
    let t = r.base();
    let n = t.n();
    for _ in 0..attempts {
        let u = rng.gen_range(0..n);
        if t.is_outer_vertex(u) {
            continue;
        }
        let c = Color::ALL[rng.gen_range(0..3)];
        let v = r.parent(c, u)?;
        let ops = candidate_ops(r, u, v).ok()?;
        if let Some(op) = ops.choose(rng) {
            return Some(*op);
        }
    }
    None
}

/// A random triangulation with a realizer scrambled by `steps` colored flips.
pub fn random_realizer<R: Rng + ?Sized>(n: usize, steps: usize, rng: &mut R) -> Realizer {
    let t = random_triangulation(n, 8 * n, rng);
    let mut r = compute_realizer(&t);
    for _ in 0..steps {
        if let Some(op) = random_flip_site(&r, rng, 64) {
            apply_colored_flip(&mut r, &op).expect("site was checked");
        }
    }
    r
}

/// Timing of a run of dynamic flips.
#[derive(Clone, Copy, Debug)]
pub struct Workload {
    pub n: usize,
    pub ops: usize,
    pub elapsed: Duration,
}

impl Workload {
    pub fn ns_per_op(&self) -> f64 {
        self.elapsed.as_nanos() as f64 / self.ops.max(1) as f64
    }

    pub fn csv_header() -> &'static str {
        "n,ops,total_ms,ns_per_op"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.3},{:.1}", self.n, self.ops, self.elapsed.as_secs_f64() * 1e3, self.ns_per_op())
    }
}

/// Times random colored flips on a [`DynRealizer`] over a random
/// triangulation with `n` vertices, each flip followed by a coordinate query
/// at the flipped vertex. The structure is built once, untimed, and then
/// runs `rounds` consecutive batches of `ops` flips; the fastest batch is
/// reported, which filters out scheduling noise.
pub fn dynamic_workload(n: usize, ops: usize, rounds: usize, seed: u64) -> Workload {
    let mut rng = StdRng::seed_from_u64(seed);
    let r = random_realizer(n, 0, &mut rng);
    let mut d = DynRealizer::build(&r).expect("random realizers are valid");
    let mut best: Option<Workload> = None;
    for _ in 0..rounds.max(1) {
        let mut done = 0;
        let mut misses = 0;
        let mut sink = 0usize;
        let start = Instant::now();
        while done < ops && misses < 1000 {
            let Some(op) = random_flip_site(&d, &mut rng, 64) else {
                misses += 1;
                continue;
            };
            d.apply(&op).expect("site was checked");
            sink = sink.wrapping_add(d.coordinates(op.u).sum());
            done += 1;
        }
        let w = Workload { n, ops: done, elapsed: start.elapsed() };
        black_box(sink);
        if best.is_none_or(|b| w.ns_per_op() < b.ns_per_op()) {
            best = Some(w);
        }
    }
    best.expect("at least one round")
}
