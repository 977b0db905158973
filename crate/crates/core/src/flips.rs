//! Colored flips, cycle flips and the ways they decompose into each other.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::realizer::{check_local, Color, EdgeKind, Realizer, Violation, Wood};
use crate::triangulation::{FaceMap, Triangulation, TriangulationError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipKind {
    /// The support edge has the color preceding the diagonal's.
    F1,
    /// The support edge has the color succeeding the diagonal's.
    F2,
}

/// One colored flip.
///
/// Before the flip `u -> v` has color `i` and the support edge `w -> u` has
/// color `j`. Afterwards `u -> w` has color `i` and the new diagonal `w -> z`
/// has color `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColoredFlipOp {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub z: usize,
    pub i: Color,
    pub kind: FlipKind,
}

impl ColoredFlipOp {
    /// Color of the support edge.
    pub fn j(&self) -> Color {
        match self.kind {
            FlipKind::F1 => self.i.pred(),
            FlipKind::F2 => self.i.succ(),
        }
    }

    /// The flip undoing this one.
    pub fn inverse(&self) -> ColoredFlipOp {
        ColoredFlipOp {
            u: self.w,
            v: self.z,
            w: self.u,
            z: self.v,
            i: self.j(),
            kind: match self.kind {
                FlipKind::F1 => FlipKind::F2,
                FlipKind::F2 => FlipKind::F1,
            },
        }
    }

    /// Reads colors and the opposite apex from the current state.
    pub fn resolve<W: Wood + ?Sized>(r: &W, u: usize, v: usize, w: usize) -> Result<ColoredFlipOp> {
        let t = r.base();
        let n = t.n();
        if u >= n || v >= n || w >= n {
            return Err(FlipError::NotDirected(u, v));
        }
        let Some(EdgeKind::Out(i)) = r.edge_kind(u, v) else {
            return Err(FlipError::NotDirected(u, v));
        };
        let Some(EdgeKind::Out(j)) = r.edge_kind(w, u) else {
            return Err(FlipError::NoSupport { u, w });
        };
        let q = t.quad_of(u, v)?;
        if w != q.w && w != q.z {
            return Err(FlipError::NoSupport { u, w });
        }
        if t.has_edge(q.w, q.z) {
            return Err(FlipError::NotFlippable(u, v));
        }
        let kind = if j == i.pred() { FlipKind::F1 } else { FlipKind::F2 };
        Ok(ColoredFlipOp { u, v, w, z: q.other_apex(w), i, kind })
    }
}

#[derive(Debug, Error)]
pub enum FlipError {
    #[error("{0}->{1} is not a directed interior edge")]
    NotDirected(usize, usize),
    #[error("{w}->{u} is not a support edge of the quadrilateral")]
    NoSupport { u: usize, w: usize },
    #[error("{0}-{1} is not diagonally flippable")]
    NotFlippable(usize, usize),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("flip {0:?} does not match the current realizer")]
    Stale(ColoredFlipOp),
    #[error("flip {op:?} would break the realizer: {violation}")]
    Invalid { op: ColoredFlipOp, violation: Violation },
    #[error("result is not a realizer: {0}")]
    Broken(#[from] Violation),
    #[error("not a directed cycle: {0}")]
    NotACycle(String),
    #[error("{0}->{1} is already colored flippable")]
    AlreadyFlippable(usize, usize),
    #[error("no escape cycle through the apexes of {0}->{1}")]
    NoEscape(usize, usize),
    #[error("cycle decomposition stuck: {0}")]
    Stuck(String),
    #[error("realizers differ in vertex count or outer face")]
    Mismatch,
}

type Result<T> = std::result::Result<T, FlipError>;

/// Rotation at `x` and the kind of every incident edge after `op`.
fn kinds_after<W: Wood + ?Sized>(r: &W, op: &ColoredFlipOp, x: usize) -> Vec<(usize, EdgeKind)> {
    let rot = r.base().rotation(x);
    let d = rot.len();
    let diag = |a: usize, b: usize| (a == op.u && b == op.v) || (a == op.v && b == op.u);
    let apex_other = if x == op.w {
        Some(op.z)
    } else if x == op.z {
        Some(op.w)
    } else {
        None
    };
    let kind = |y: usize| -> EdgeKind {
        match (x, y) {
            (a, b) if a == op.u && b == op.w => EdgeKind::Out(op.i),
            (a, b) if a == op.w && b == op.u => EdgeKind::In(op.i),
            (a, b) if a == op.w && b == op.z => EdgeKind::Out(op.j()),
            (a, b) if a == op.z && b == op.w => EdgeKind::In(op.j()),
            _ => r.edge_kind(x, y).unwrap_or(EdgeKind::Outer),
        }
    };
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..d {
        let y = rot[k];
        if diag(x, y) {
            continue;
        }
        out.push((y, kind(y)));
        if let Some(o) = apex_other {
            let next = rot[(k + 1) % d];
            if (y == op.u || y == op.v) && (next == op.u || next == op.v) {
                out.push((o, kind(o)));
            }
        }
    }
    out
}

/// Checks that `op` matches the current state and leaves a realizer.
///
/// Only the four quadrilateral vertices see their rotation or edge kinds
/// change, so checking them suffices.
pub fn check_op<W: Wood + ?Sized>(r: &W, op: &ColoredFlipOp) -> Result<()> {
    let fresh = ColoredFlipOp::resolve(r, op.u, op.v, op.w)?;
    if fresh != *op {
        return Err(FlipError::Stale(*op));
    }
    let t = r.base();
    for x in [op.u, op.v, op.w, op.z] {
        check_local(x, t.root_index(x), &kinds_after(r, op, x)).map_err(|violation| FlipError::Invalid { op: *op, violation })?;
    }
    Ok(())
}

/// Flips at `u -> v` supported by an apex edge pointing into `u`, without
/// the post-flip check.
pub fn candidate_ops<W: Wood + ?Sized>(r: &W, u: usize, v: usize) -> Result<Vec<ColoredFlipOp>> {
    let t = r.base();
    if u >= t.n() || v >= t.n() || !matches!(r.edge_kind(u, v), Some(EdgeKind::Out(_))) {
        return Err(FlipError::NotDirected(u, v));
    }
    let q = t.quad_of(u, v)?;
    if t.has_edge(q.w, q.z) {
        return Ok(Vec::new());
    }
    let mut ops = Vec::with_capacity(2);
    for x in [q.w, q.z] {
        if r.is_directed(x, u) {
            ops.push(ColoredFlipOp::resolve(r, u, v, x)?);
        }
    }
    Ok(ops)
}

/// Valid colored flips at the directed edge `u -> v`; empty if none.
pub fn is_colored_flippable<W: Wood + ?Sized>(r: &W, u: usize, v: usize) -> Result<Vec<ColoredFlipOp>> {
    let mut ops = candidate_ops(r, u, v)?;
    ops.retain(|op| check_op(r, op).is_ok());
    Ok(ops)
}

/// Every valid colored flip of `r`, ordered by diagonal.
pub fn all_colored_flips<W: Wood + ?Sized>(r: &W) -> Vec<ColoredFlipOp> {
    let t = r.base();
    let mut ops = Vec::new();
    for u in t.interior_vertices() {
        for c in Color::ALL {
            if let Some(v) = r.parent(c, u) {
                ops.extend(is_colored_flippable(r, u, v).unwrap_or_default());
            }
        }
    }
    ops
}

/// Applies `op` in place after the local check.
pub fn apply_colored_flip(r: &mut Realizer, op: &ColoredFlipOp) -> Result<()> {
    check_op(r, op)?;
    let (t, parent) = r.raw_mut();
    t.flip_in_place(op.u, op.v)?;
    parent[op.u][op.i.index()] = op.w;
    parent[op.w][op.j().index()] = op.z;
    Ok(())
}

/// Returns the flipped realizer, fully revalidated.
pub fn colored_flip(r: &Realizer, op: &ColoredFlipOp) -> Result<Realizer> {
    let mut out = r.clone();
    apply_colored_flip(&mut out, op)?;
    out.validate()?;
    Ok(out)
}

/// Applies `ops` in order to a copy of `r`.
pub fn replay(r: &Realizer, ops: &[ColoredFlipOp]) -> Result<Realizer> {
    let mut out = r.clone();
    for op in ops {
        apply_colored_flip(&mut out, op)?;
    }
    Ok(out)
}

/// Faces enclosed by a simple cycle and whether the cycle runs
/// counter-clockwise around them.
struct Enclosure {
    faces: FaceMap,
    inside: Vec<bool>,
    ccw: bool,
}

impl Enclosure {
    fn new(t: &Triangulation, verts: &[usize]) -> Result<Enclosure> {
        let faces = t.faces();
        Self::with_faces(t, faces, verts)
    }

    fn with_faces(t: &Triangulation, faces: FaceMap, verts: &[usize]) -> Result<Enclosure> {
        let k = verts.len();
        if k < 3 {
            return Err(FlipError::NotACycle(format!("{verts:?} is shorter than 3")));
        }
        let distinct: HashSet<usize> = verts.iter().copied().collect();
        if distinct.len() != k || verts.iter().any(|&v| v >= t.n()) {
            return Err(FlipError::NotACycle(format!("{verts:?} is not simple")));
        }
        let mut barrier = vec![false; faces.dart_count()];
        let mut darts = Vec::with_capacity(k);
        for s in 0..k {
            let (a, b) = (verts[s], verts[(s + 1) % k]);
            let d = faces.dart(t, a, b).ok_or_else(|| FlipError::NotACycle(format!("{a}-{b} is not an edge")))?;
            barrier[d] = true;
            barrier[faces.twin(d)] = true;
            darts.push(d);
        }
        let mut left = vec![false; faces.face_count()];
        let f0 = faces.face_of(darts[0]);
        left[f0] = true;
        let mut stack = vec![f0];
        while let Some(f) = stack.pop() {
            for d in faces.face_darts(f) {
                if barrier[d] {
                    continue;
                }
                let g = faces.face_of(faces.twin(d));
                if !left[g] {
                    left[g] = true;
                    stack.push(g);
                }
            }
        }
        if darts.iter().any(|&d| !left[faces.face_of(d)]) || darts.iter().any(|&d| left[faces.face_of(faces.twin(d))]) {
            return Err(FlipError::NotACycle(format!("{verts:?} does not separate the plane cleanly")));
        }
        let ccw = !left[faces.outer_face()];
        let inside = if ccw { left } else { left.into_iter().map(|b| !b).collect() };
        Ok(Enclosure { faces, inside, ccw })
    }

    fn face_count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    fn inside_faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.inside.iter().enumerate().filter(|(_, &b)| b).map(|(f, _)| f)
    }
}

/// A simple directed cycle of a realizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedCycle {
    vertices: Vec<usize>,
    ccw: bool,
    m: usize,
}

impl DirectedCycle {
    /// `vertices` lists the cycle in edge direction: `v_k -> v_{k+1}`.
    pub fn new<W: Wood + ?Sized>(r: &W, vertices: Vec<usize>) -> Result<DirectedCycle> {
        let k = vertices.len();
        for s in 0..k {
            let (a, b) = (vertices[s], vertices[(s + 1) % k]);
            if a >= r.base().n() || !r.is_directed(a, b) {
                return Err(FlipError::NotACycle(format!("{a}->{b} is not a directed edge")));
            }
        }
        let enc = Enclosure::new(r.base(), &vertices)?;
        Ok(DirectedCycle { m: enc.face_count(), ccw: enc.ccw, vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_ccw(&self) -> bool {
        self.ccw
    }

    /// Number of interior faces.
    pub fn interior_faces(&self) -> usize {
        self.m
    }

    /// Whether `a -> b` is one of the cycle's edges.
    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        let k = self.vertices.len();
        (0..k).any(|s| self.vertices[s] == a && self.vertices[(s + 1) % k] == b)
    }

    /// The same cycle after it has been flipped.
    pub fn reversed(&self) -> DirectedCycle {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        DirectedCycle { vertices, ccw: !self.ccw, m: self.m }
    }
}

/// Reverses `c` and shifts colors: for a counter-clockwise cycle the cycle
/// edges take the succeeding color and the interior edges the preceding one,
/// and the other way around for a clockwise cycle.
pub fn cycle_flip(r: &Realizer, c: &DirectedCycle) -> Result<Realizer> {
    let current = DirectedCycle::new(r, c.vertices.clone())?;
    let t = r.triangulation();
    let enc = Enclosure::new(t, &current.vertices)?;
    let (on_cycle_shift, inner_shift) = if enc.ccw { (1, 2) } else { (2, 1) };
    let k = current.vertices.len();
    let cycle_edges: HashSet<(usize, usize)> =
        (0..k).map(|s| (current.vertices[s], current.vertices[(s + 1) % k])).map(|(a, b)| (a.min(b), a.max(b))).collect();
    let mut clears = Vec::new();
    let mut sets = Vec::new();
    for s in 0..k {
        let (a, b) = (current.vertices[s], current.vertices[(s + 1) % k]);
        let col = r.label(a, b).expect("cycle edge is interior");
        clears.push((a, col));
        sets.push((b, a, col.shift(on_cycle_shift)));
    }
    for f in enc.inside_faces() {
        for d in enc.faces.face_darts(f) {
            let (x, y) = (enc.faces.tail(d), enc.faces.head(d));
            if cycle_edges.contains(&(x.min(y), x.max(y))) {
                continue;
            }
            if let Some(EdgeKind::Out(col)) = r.edge_kind(x, y) {
                clears.push((x, col));
                sets.push((x, y, col.shift(inner_shift)));
            }
        }
    }
    let mut out = r.clone();
    let (_, parent) = out.raw_mut();
    for (x, col) in clears {
        parent[x][col.index()] = usize::MAX;
    }
    for (x, y, col) in sets {
        parent[x][col.index()] = y;
    }
    out.validate()?;
    Ok(out)
}

/// How [`find_escape_cycle_with`] looks for the cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EscapeStrategy {
    /// Climb a tree from an apex until reaching a vertex below `u` in tree `i`, then follow that path to `u`.
    #[default]
    Paths,
    /// Breadth-first search for any directed path from an apex back to `u`.
    Search,
}

/// A directed cycle through `u -> w` or `u -> z` avoiding `u -> v`, for a
/// flippable diagonal `u -> v` that is not colored flippable.
pub fn find_escape_cycle(r: &Realizer, u: usize, v: usize) -> Result<DirectedCycle> {
    find_escape_cycle_with(r, u, v, EscapeStrategy::Paths)
}

pub fn find_escape_cycle_with(r: &Realizer, u: usize, v: usize, strategy: EscapeStrategy) -> Result<DirectedCycle> {
    let t = r.triangulation();
    let Some(EdgeKind::Out(i)) = (u < t.n() && v < t.n()).then(|| r.edge_kind(u, v)).flatten() else {
        return Err(FlipError::NotDirected(u, v));
    };
    let q = t.quad_of(u, v)?;
    if t.has_edge(q.w, q.z) {
        return Err(FlipError::NotFlippable(u, v));
    }
    if r.is_directed(q.w, u) || r.is_directed(q.z, u) {
        return Err(FlipError::AlreadyFlippable(u, v));
    }
    let verts = match strategy {
        EscapeStrategy::Paths => {
            let below = descendants(r, u, i);
            [(q.w, i.succ()), (q.z, i.pred()), (q.w, i.pred()), (q.z, i.succ())]
                .into_iter()
                .find_map(|(apex, climb)| climb_to_subtree(r, u, i, apex, climb, &below))
        }
        EscapeStrategy::Search => [q.w, q.z].into_iter().find_map(|apex| search_back(r, u, apex)),
    };
    let verts = verts.ok_or(FlipError::NoEscape(u, v))?;
    DirectedCycle::new(r, verts)
}

/// `mask[y]` is true iff `u` lies on `P_i(y)` and `y != u`.
fn descendants(r: &Realizer, u: usize, i: Color) -> Vec<bool> {
    let n = r.n();
    // 0 unknown, 1 below u, 2 not below u.
    let mut state = vec![0u8; n];
    state[u] = 2;
    let mut walk = Vec::new();
    for start in 0..n {
        let mut x = start;
        while state[x] == 0 {
            walk.push(x);
            match r.parent_of(x, i) {
                Some(p) if p == u => {
                    state[x] = 1;
                    break;
                }
                Some(p) => x = p,
                None => {
                    state[x] = 2;
                    break;
                }
            }
        }
        let verdict = state[x];
        for y in walk.drain(..) {
            state[y] = verdict;
        }
    }
    state.iter().map(|&s| s == 1).collect()
}

/// Cycle `u -> apex -> ... -> y -> ... -> u`: climb `P_climb(apex)` until
/// the first vertex `y` whose path in tree `i` reaches `u`, then follow it.
fn climb_to_subtree(r: &Realizer, u: usize, i: Color, apex: usize, climb: Color, below: &[bool]) -> Option<Vec<usize>> {
    let mut path = vec![u];
    let mut x = apex;
    while !below[x] {
        if x == u {
            return Some(path);
        }
        path.push(x);
        x = r.parent_of(x, climb)?;
    }
    while x != u {
        path.push(x);
        x = r.parent_of(x, i)?;
    }
    Some(path)
}

/// Shortest directed path `apex -> ... -> u` not passing through `u` early,
/// returned as the cycle `[u, apex, ...]`.
fn search_back(r: &Realizer, u: usize, apex: usize) -> Option<Vec<usize>> {
    let n = r.n();
    let mut pred = vec![usize::MAX; n];
    pred[apex] = apex;
    let mut queue = VecDeque::from([apex]);
    while let Some(x) = queue.pop_front() {
        for c in Color::ALL {
            let Some(y) = r.parent_of(x, c) else { continue };
            if y == u {
                let mut path = vec![x];
                let mut p = x;
                while p != apex {
                    p = pred[p];
                    path.push(p);
                }
                path.push(u);
                path.reverse();
                return Some(path);
            }
            if pred[y] == usize::MAX {
                pred[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Two colored flips that together flip the directed face `f`.
///
/// For a counter-clockwise face `u1 u2 u3` (starting at its smallest vertex)
/// the first flip is `u1 -> u2` supported by `u3 -> u1` and the second is the
/// new diagonal `u3 -> u4` supported by `u2 -> u3`. A clockwise face is
/// handled as the inverse of the counter-clockwise face it flips into.
pub fn face_flip_as_colored(r: &Realizer, f: &DirectedCycle) -> Result<[ColoredFlipOp; 2]> {
    if f.len() != 3 || f.m != 1 {
        return Err(FlipError::NotACycle(format!("{:?} is not a face", f.vertices)));
    }
    if !f.ccw {
        let flipped = cycle_flip(r, f)?;
        let [a, b] = face_flip_as_colored(&flipped, &f.reversed())?;
        return Ok([b.inverse(), a.inverse()]);
    }
    let verts = rotate_to_min(&f.vertices);
    let (u1, u2, u3) = (verts[0], verts[1], verts[2]);
    let op1 = ColoredFlipOp::resolve(r, u1, u2, u3)?;
    let mut mid = r.clone();
    apply_colored_flip(&mut mid, &op1)?;
    let op2 = ColoredFlipOp::resolve(&mid, u3, op1.z, u2)?;
    check_op(&mid, &op2)?;
    Ok([op1, op2])
}

fn rotate_to_min(verts: &[usize]) -> Vec<usize> {
    let k = verts.iter().enumerate().min_by_key(|(_, &v)| v).map(|(k, _)| k).unwrap_or(0);
    verts[k..].iter().chain(&verts[..k]).copied().collect()
}

/// Separating triangles inside `c` that no other separating triangle inside
/// `c` contains, each listed counter-clockwise from its smallest vertex.
pub fn maximal_separating_triangles<W: Wood + ?Sized>(r: &W, c: &DirectedCycle) -> Result<Vec<[usize; 3]>> {
    let t = r.base();
    let outer = Enclosure::new(t, &c.vertices)?;
    let mut closed = vec![false; t.n()];
    for f in outer.inside_faces() {
        for x in outer.faces.face_vertices(f) {
            closed[x] = true;
        }
    }
    let own: HashSet<usize> = if c.len() == 3 { c.vertices.iter().copied().collect() } else { HashSet::new() };
    let mut found: Vec<([usize; 3], Vec<bool>)> = Vec::new();
    for a in (0..t.n()).filter(|&a| closed[a]) {
        for &b in t.rotation(a).iter().filter(|&&b| b > a && closed[b]) {
            for &x in t.rotation(b).iter().filter(|&&x| x > b && closed[x] && t.has_edge(a, x)) {
                if !own.is_empty() && own.contains(&a) && own.contains(&b) && own.contains(&x) {
                    continue;
                }
                let enc = Enclosure::with_faces(t, outer.faces.clone(), &[a, b, x])?;
                if enc.face_count() < 2 {
                    continue;
                }
                if enc.inside_faces().any(|f| !outer.inside[f]) {
                    continue;
                }
                let tri = if enc.ccw { [a, b, x] } else { [a, x, b] };
                found.push((tri, enc.inside));
            }
        }
    }
    let contains = |big: &[bool], small: &[bool]| small.iter().zip(big).all(|(&s, &b)| !s || b);
    let mut out = Vec::new();
    for (k, (tri, inside)) in found.iter().enumerate() {
        let covered = found.iter().enumerate().any(|(l, (_, other))| l != k && other != inside && contains(other, inside));
        if !covered {
            out.push(*tri);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Colored flips whose replay equals [`cycle_flip`] on `c`; exactly two per
/// interior face.
pub fn cycle_flip_as_colored(r: &Realizer, c: &DirectedCycle) -> Result<Vec<ColoredFlipOp>> {
    let mut cur = r.clone();
    let mut ops = Vec::with_capacity(2 * c.m);
    flip_cycle_into(&mut cur, c.vertices.clone(), &mut ops)?;
    Ok(ops)
}

fn push_flip(cur: &mut Realizer, op: ColoredFlipOp, ops: &mut Vec<ColoredFlipOp>) -> Result<()> {
    apply_colored_flip(cur, &op)?;
    ops.push(op);
    Ok(())
}

fn flip_cycle_into(cur: &mut Realizer, verts: Vec<usize>, ops: &mut Vec<ColoredFlipOp>) -> Result<()> {
    let cyc = DirectedCycle::new(cur, verts)?;
    if cyc.m == 1 {
        for op in face_flip_as_colored(cur, &cyc)? {
            push_flip(cur, op, ops)?;
        }
        return Ok(());
    }
    if cyc.len() == 3 {
        // Separating triangle: flip u1 -> u2 away using the face inside it,
        // turn the rest into a 4-cycle, flip that, then restore u1 u2.
        let v = rotate_to_min(&cyc.vertices);
        let (u1, u2, u3) = (v[0], v[1], v[2]);
        let t = cur.triangulation();
        let q = t.quad_of(u1, u2)?;
        // With a counter-clockwise cycle the inside lies left of u1 -> u2.
        let (inner, outer) = if cyc.ccw { (q.w, q.z) } else { (q.z, q.w) };
        push_flip(cur, ColoredFlipOp::resolve(cur, u1, u2, inner)?, ops)?;
        flip_cycle_into(cur, vec![u1, inner, u2, u3], ops)?;
        return push_flip(cur, ColoredFlipOp::resolve(cur, inner, outer, u2)?, ops);
    }
    let t = cur.triangulation().clone();
    let enc = Enclosure::new(&t, &cyc.vertices)?;
    let triangles = maximal_separating_triangles(cur, &cyc)?;
    let mut covered = vec![false; enc.faces.face_count()];
    for tri in &triangles {
        let inner = Enclosure::with_faces(&t, enc.faces.clone(), tri)?;
        for f in inner.inside_faces() {
            covered[f] = true;
        }
    }
    let mut units: Vec<[usize; 3]> = triangles.clone();
    units.extend(enc.inside_faces().filter(|&f| !covered[f]).map(|f| {
        let v = rotate_to_min(&enc.faces.face_vertices(f));
        [v[0], v[1], v[2]]
    }));
    units.sort_unstable();
    let mut done = vec![false; units.len()];
    for _ in 0..units.len() {
        let next = (0..units.len()).find(|&k| {
            let [a, b, c] = units[k];
            !done[k]
                && if cyc.ccw {
                    cur.is_directed(a, b) && cur.is_directed(b, c) && cur.is_directed(c, a)
                } else {
                    cur.is_directed(a, c) && cur.is_directed(c, b) && cur.is_directed(b, a)
                }
        });
        let Some(k) = next else {
            return Err(FlipError::Stuck(format!("no co-oriented unit left inside {:?}", cyc.vertices)));
        };
        let [a, b, c] = units[k];
        flip_cycle_into(cur, if cyc.ccw { vec![a, b, c] } else { vec![a, c, b] }, ops)?;
        done[k] = true;
    }
    Ok(())
}

/// Makes the diagonal `u v` colored flippable, flipping an escape cycle if
/// needed. The edge may be given in either direction.
pub fn make_colored_flippable(r: &Realizer, u: usize, v: usize) -> Result<(Realizer, Option<DirectedCycle>)> {
    let (a, b) = orient(r, u, v)?;
    if !r.triangulation().is_diagonal_flippable(a, b)? {
        return Err(FlipError::NotFlippable(u, v));
    }
    if !is_colored_flippable(r, a, b)?.is_empty() {
        return Ok((r.clone(), None));
    }
    let c = find_escape_cycle(r, a, b)?;
    let flipped = cycle_flip(r, &c)?;
    Ok((flipped, Some(c)))
}

fn orient<W: Wood + ?Sized>(r: &W, u: usize, v: usize) -> Result<(usize, usize)> {
    if u < r.base().n() && v < r.base().n() {
        match r.edge_kind(u, v) {
            Some(EdgeKind::Out(_)) => return Ok((u, v)),
            Some(EdgeKind::In(_)) => return Ok((v, u)),
            _ => {}
        }
    }
    Err(FlipError::NotDirected(u, v))
}

/// Performs the diagonal flip of `u v` through colored flips, first
/// flipping an escape cycle as colored flips when necessary.
fn diagonal_as_colored(cur: &mut Realizer, u: usize, v: usize, ops: &mut Vec<ColoredFlipOp>) -> Result<()> {
    let (a, b) = orient(cur, u, v)?;
    if is_colored_flippable(cur, a, b)?.is_empty() {
        let c = find_escape_cycle(cur, a, b)?;
        for op in cycle_flip_as_colored(cur, &c)? {
            push_flip(cur, op, ops)?;
        }
    }
    let op = *is_colored_flippable(cur, a, b)?.first().ok_or(FlipError::NoEscape(a, b))?;
    push_flip(cur, op, ops)
}

fn route_to_double_fan(r: &Realizer) -> Result<(Vec<ColoredFlipOp>, Realizer)> {
    let mut cur = r.clone();
    let mut ops = Vec::new();
    for (a, b) in r.triangulation().reduce_to_double_fan() {
        diagonal_as_colored(&mut cur, a, b, &mut ops)?;
    }
    Ok((ops, cur))
}

/// Diagonal flips exchanging the neighbours `path[k]` and `path[k + 1]` of a
/// double fan, restricted to the six vertices around them.
/// Predecessor of a triangulation in a search, with the diagonal flipped from it.
type Back = (Triangulation, (usize, usize));

fn local_swap(t: &Triangulation, path: &[usize], k: usize) -> Vec<(usize, usize)> {
    let [r0, r1, r2] = t.outer();
    let mut target_path = path.to_vec();
    target_path.swap(k, k + 1);
    let target = Triangulation::double_fan_with_path(&target_path, t.outer()).expect("permuted double fan");
    let mut local = vec![r0, r1, path[k], path[k + 1], if k == 0 { r2 } else { path[k - 1] }];
    if let Some(&below) = path.get(k + 2) {
        local.push(below);
    }
    let mut prev: HashMap<Triangulation, Option<Back>> = HashMap::from([(t.clone(), None)]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(s) = queue.pop_front() {
        if s == target {
            let mut flips = Vec::new();
            let mut cur = s;
            while let Some(Some((p, e))) = prev.get(&cur).cloned() {
                flips.push(e);
                cur = p;
            }
            flips.reverse();
            return flips;
        }
        for (ai, &a) in local.iter().enumerate() {
            for &b in &local[ai + 1..] {
                if !s.has_edge(a, b) || s.is_outer_edge(a, b) {
                    continue;
                }
                let q = s.quad_of(a, b).expect("interior edge");
                if !local.contains(&q.w) || !local.contains(&q.z) || s.has_edge(q.w, q.z) {
                    continue;
                }
                let next = s.diagonal_flip(a, b).expect("flippable");
                if !prev.contains_key(&next) {
                    prev.insert(next.clone(), Some((s.clone(), (a, b))));
                    queue.push_back(next);
                }
            }
        }
    }
    unreachable!("adjacent double-fan vertices can always be exchanged locally")
}

/// Colored flips turning `r` into `target`, both realizers with the same
/// vertex count and outer face.
///
/// Both are routed to a double fan; the path order of the first double fan
/// is then sorted into that of the second by adjacent exchanges, and the
/// second route is appended reversed. Loops in the resulting walk are cut.
pub fn transform_sequence(r: &Realizer, target: &Realizer) -> Result<Vec<ColoredFlipOp>> {
    if r.n() != target.n() || r.triangulation().outer() != target.triangulation().outer() {
        return Err(FlipError::Mismatch);
    }
    if r == target {
        return Ok(Vec::new());
    }
    let (mut ops, mut cur) = route_to_double_fan(r)?;
    let (back, hub) = route_to_double_fan(target)?;
    let goal = hub.triangulation().double_fan_path().expect("route ends at a double fan");
    loop {
        let path = cur.triangulation().double_fan_path().expect("route ends at a double fan");
        let Some(k) = (0..path.len()).find(|&k| path[k] != goal[k]) else { break };
        let mut m = path.iter().position(|&x| x == goal[k]).expect("same interior vertices");
        while m > k {
            let current = cur.triangulation().double_fan_path().expect("still a double fan");
            for (a, b) in local_swap(cur.triangulation(), &current, m - 1) {
                diagonal_as_colored(&mut cur, a, b, &mut ops)?;
            }
            m -= 1;
        }
    }
    debug_assert_eq!(cur, hub);
    ops.extend(back.iter().rev().map(ColoredFlipOp::inverse));
    Ok(shortcut(r, ops))
}

/// Removes closed loops from the walk of states visited by `ops`.
fn shortcut(r: &Realizer, ops: Vec<ColoredFlipOp>) -> Vec<ColoredFlipOp> {
    let mut states = vec![r.clone()];
    let mut index: HashMap<Realizer, usize> = HashMap::from([(r.clone(), 0)]);
    let mut kept: Vec<ColoredFlipOp> = Vec::with_capacity(ops.len());
    for op in ops {
        let mut next = states.last().expect("non-empty").clone();
        apply_colored_flip(&mut next, &op).expect("route replays");
        if let Some(&k) = index.get(&next) {
            for s in states.drain(k + 1..) {
                index.remove(&s);
            }
            kept.truncate(k);
        } else {
            index.insert(next.clone(), states.len());
            states.push(next);
            kept.push(op);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realizer::compute_realizer;
    use crate::testkit::{f5, k4};

    fn c(i: usize) -> Color {
        Color::new(i).unwrap()
    }

    #[test]
    fn f5_flip_site() {
        let r = compute_realizer(&f5());
        let ops = is_colored_flippable(&r, 3, 0).unwrap();
        assert_eq!(ops, vec![ColoredFlipOp { u: 3, v: 0, w: 4, z: 2, i: c(0), kind: FlipKind::F1 }]);
        assert!(is_colored_flippable(&r, 3, 2).unwrap().is_empty());
        assert!(matches!(is_colored_flippable(&r, 0, 3), Err(FlipError::NotDirected(0, 3))));
        let k = compute_realizer(&k4());
        assert!(is_colored_flippable(&k, 3, 0).unwrap().is_empty());
    }

    #[test]
    fn f5_worked_flip_and_inverse() {
        let r = compute_realizer(&f5());
        let op = is_colored_flippable(&r, 3, 0).unwrap()[0];
        let s = colored_flip(&r, &op).unwrap();
        assert_eq!(
            s.edges(),
            vec![(3, 4, c(0)), (3, 1, c(1)), (3, 2, c(2)), (4, 0, c(0)), (4, 1, c(1)), (4, 2, c(2))]
        );
        assert!(s.triangulation().has_edge(4, 2) && !s.triangulation().has_edge(3, 0));
        let inv = op.inverse();
        assert_eq!(inv.kind, FlipKind::F2);
        assert_eq!(colored_flip(&s, &inv).unwrap(), r);
        assert!(matches!(colored_flip(&r, &inv), Err(FlipError::NotDirected(..))));
    }

    #[test]
    fn face_flip_on_double_fan_after_flip() {
        // After the worked flip, 3 -> 4 -> 2 -> ... gives no directed face, but
        // flipping back then forward round-trips through cycle flips.
        let r = compute_realizer(&f5());
        let op = is_colored_flippable(&r, 3, 0).unwrap()[0];
        let s = colored_flip(&r, &op).unwrap();
        assert!(s.is_valid());
        assert!(make_colored_flippable(&r, 0, 3).unwrap().1.is_none());
        assert!(matches!(make_colored_flippable(&compute_realizer(&k4()), 3, 0), Err(FlipError::NotFlippable(3, 0))));
    }

    #[test]
    fn transform_identity_and_worked_pair() {
        let r = compute_realizer(&f5());
        assert!(transform_sequence(&r, &r).unwrap().is_empty());
        let op = is_colored_flippable(&r, 3, 0).unwrap()[0];
        let s = colored_flip(&r, &op).unwrap();
        let seq = transform_sequence(&r, &s).unwrap();
        assert!(!seq.is_empty());
        assert_eq!(replay(&r, &seq).unwrap(), s);
    }
}
