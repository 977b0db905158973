//! Planar triangulations with a fixed outer face, stored as rotation systems.
//!
//! Every vertex keeps its neighbours in counter-clockwise order. The outer
//! face is the triangle `(r0, r1, r2)`, listed counter-clockwise as seen from
//! the interior: walking `r0 -> r1 -> r2` keeps the interior on the left.
//!
//! Faces are traced with the "left face" rule: the face to the left of the
//! dart `u -> v` continues with `v -> x`, where `x` is the neighbour of `v`
//! immediately before `u` in counter-clockwise order. Interior faces come out
//! counter-clockwise; the outer face is the one to the left of `r1 -> r0`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("{0}-{1} is an outer edge")]
    OuterEdge(usize, usize),
    #[error("diagonal {0}-{1} is not flippable")]
    NotFlippable(usize, usize),
    #[error("({0}, {1}, {2}) is not an interior face")]
    NotAFace(usize, usize, usize),
}

pub type Result<T> = std::result::Result<T, TriangulationError>;

/// The two triangles sharing the diagonal `u v`.
///
/// `w` follows `v` counter-clockwise around `u` and `z` precedes it, so the
/// faces are `(u, v, w)` and `(v, u, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrilateral {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub z: usize,
}

impl Quadrilateral {
    /// The apex that is not `x`; `x` must be one of the two apexes.
    pub fn other_apex(&self, x: usize) -> usize {
        if x == self.w {
            self.z
        } else {
            self.w
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    // Each list is rotated so that its smallest neighbour comes first, which
    // makes structural equality coincide with equality of embeddings.
    rotation: Vec<Vec<usize>>,
    outer: [usize; 3],
}

fn normalize(list: &mut [usize]) {
    if let Some((k, _)) = list.iter().enumerate().min_by_key(|&(_, &x)| x) {
        list.rotate_left(k);
    }
}

impl Triangulation {
    /// Builds and validates a triangulation from counter-clockwise rotations.
    pub fn new(rotation: Vec<Vec<usize>>, outer: [usize; 3]) -> Result<Self> {
        let mut rotation = rotation;
        rotation.iter_mut().for_each(|r| normalize(r));
        let t = Triangulation { rotation, outer };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: String| Err(TriangulationError::Invalid(m));
        if n < 4 {
            return bad(format!("need at least 4 vertices, got {n}"));
        }
        let [r0, r1, r2] = self.outer;
        if r0 == r1 || r1 == r2 || r0 == r2 || self.outer.iter().any(|&r| r >= n) {
            return bad(format!("bad outer face {:?}", self.outer));
        }
        let mut darts = HashMap::with_capacity(6 * n);
        for (u, rot) in self.rotation.iter().enumerate() {
            for (k, &v) in rot.iter().enumerate() {
                if v >= n || v == u {
                    return bad(format!("vertex {u} lists invalid neighbour {v}"));
                }
                if darts.insert((u, v), k).is_some() {
                    return bad(format!("duplicate edge {u}-{v}"));
                }
            }
        }
        for &(u, v) in darts.keys() {
            if !darts.contains_key(&(v, u)) {
                return bad(format!("edge {u}-{v} is not symmetric"));
            }
        }
        let edges = darts.len() / 2;
        if edges != 3 * n - 6 {
            return bad(format!("edge count {edges} != 3n-6 = {}", 3 * n - 6));
        }
        if let Some(u) = (0..n).find(|&u| self.rotation[u].len() < 3) {
            return bad(format!("vertex {u} has degree {}", self.rotation[u].len()));
        }
        // Every face must be a triangle, and there must be 2n-4 of them
        // (Euler), which rules out embeddings of higher genus.
        let mut seen = HashMap::with_capacity(darts.len());
        let mut faces = 0usize;
        for &(u, v) in darts.keys() {
            if seen.contains_key(&(u, v)) {
                continue;
            }
            faces += 1;
            let (mut a, mut b) = (u, v);
            let mut len = 0;
            loop {
                seen.insert((a, b), faces);
                len += 1;
                let kb = darts[&(b, a)];
                let rb = &self.rotation[b];
                let c = rb[(kb + rb.len() - 1) % rb.len()];
                (a, b) = (b, c);
                if (a, b) == (u, v) {
                    break;
                }
                if len > 3 {
                    break;
                }
            }
            if len != 3 {
                return bad(format!("face through {u}->{v} is not a triangle"));
            }
        }
        if faces != 2 * n - 4 {
            return bad(format!("{faces} faces, expected {}", 2 * n - 4));
        }
        if !darts.contains_key(&(r0, r1)) || !darts.contains_key(&(r1, r2)) || !darts.contains_key(&(r2, r0)) {
            return bad("outer vertices are not mutually adjacent".into());
        }
        if self.third_of_left_face(r1, r0) != Some(r2) {
            return bad(format!("outer face is not ({r0}, {r1}, {r2}) counter-clockwise"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn outer(&self) -> [usize; 3] {
        self.outer
    }

    pub fn root(&self, i: usize) -> usize {
        self.outer[i]
    }

    pub fn rotation(&self, u: usize) -> &[usize] {
        &self.rotation[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rotation[u].len()
    }

    /// The same triangulation with vertex `u` renamed to `to[u]`.
    pub fn relabel(&self, to: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if to.len() != n || !to.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true)) {
            return Err(TriangulationError::Invalid("relabeling is not a permutation".into()));
        }
        let mut rotation = vec![Vec::new(); n];
        for (u, rot) in self.rotation.iter().enumerate() {
            rotation[to[u]] = rot.iter().map(|&v| to[v]).collect();
        }
        Triangulation::new(rotation, self.outer.map(|r| to[r]))
    }

    /// Vertex order of a breadth-first search started from the outer face.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order: Vec<usize> = self.outer.to_vec();
        for &r in &self.outer {
            seen[r] = true;
        }
        let mut k = 0;
        while k < order.len() {
            for &v in &self.rotation[order[k]] {
                if !std::mem::replace(&mut seen[v], true) {
                    order.push(v);
                }
            }
            k += 1;
        }
        order
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Index of the outer root `u`, if `u` is an outer vertex.
    pub fn root_index(&self, u: usize) -> Option<usize> {
        self.outer.iter().position(|&r| r == u)
    }

    pub fn is_outer_vertex(&self, u: usize) -> bool {
        self.root_index(u).is_some()
    }

    pub fn is_outer_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.is_outer_vertex(u) && self.is_outer_vertex(v)
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&u| !self.is_outer_vertex(u))
    }

    pub fn position(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation[u].iter().position(|&x| x == v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        // Scan the shorter list.
        if self.degree(u) <= self.degree(v) {
            self.rotation[u].contains(&v)
        } else {
            self.rotation[v].contains(&u)
        }
    }

    /// Neighbour following `v` counter-clockwise around `u`.
    pub fn ccw_next(&self, u: usize, v: usize) -> Option<usize> {
        let rot = &self.rotation[u];
        self.position(u, v).map(|k| rot[(k + 1) % rot.len()])
    }

    /// Neighbour preceding `v` counter-clockwise around `u`.
    pub fn cw_next(&self, u: usize, v: usize) -> Option<usize> {
        let rot = &self.rotation[u];
        self.position(u, v).map(|k| rot[(k + rot.len() - 1) % rot.len()])
    }

    fn third_of_left_face(&self, u: usize, v: usize) -> Option<usize> {
        self.cw_next(v, u)
    }

    /// All undirected edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rotation
            .iter()
            .enumerate()
            .flat_map(|(u, rot)| rot.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges().filter(|&(u, v)| !self.is_outer_edge(u, v))
    }

    /// Whether `(a, b, c)` is an interior face listed counter-clockwise (in any rotation).
    pub fn is_interior_face(&self, a: usize, b: usize, c: usize) -> bool {
        if self.ccw_next(a, b) != Some(c) || self.ccw_next(b, c) != Some(a) {
            return false;
        }
        let [r0, r1, r2] = self.outer;
        let outer = [(r1, r0, r2), (r0, r2, r1), (r2, r1, r0)];
        !outer.contains(&(a, b, c))
    }

    pub fn quad_of(&self, u: usize, v: usize) -> Result<Quadrilateral> {
        let k = self.position(u, v).ok_or(TriangulationError::NotAnEdge(u, v))?;
        if self.is_outer_edge(u, v) {
            return Err(TriangulationError::OuterEdge(u, v));
        }
        let rot = &self.rotation[u];
        let d = rot.len();
        Ok(Quadrilateral { u, v, w: rot[(k + 1) % d], z: rot[(k + d - 1) % d] })
    }

    pub fn is_diagonal_flippable(&self, u: usize, v: usize) -> Result<bool> {
        let q = self.quad_of(u, v)?;
        Ok(!self.has_edge(q.w, q.z))
    }

    /// Replaces the diagonal `u v` by the opposite diagonal `w z`.
    pub fn diagonal_flip(&self, u: usize, v: usize) -> Result<Self> {
        let mut t = self.clone();
        t.flip_in_place(u, v)?;
        Ok(t)
    }

    /// In-place diagonal flip; returns the quadrilateral of the removed diagonal.
    pub fn flip_in_place(&mut self, u: usize, v: usize) -> Result<Quadrilateral> {
        let q = self.quad_of(u, v)?;
        if self.has_edge(q.w, q.z) {
            return Err(TriangulationError::NotFlippable(u, v));
        }
        let Quadrilateral { w, z, .. } = q;
        remove_neighbor(&mut self.rotation[u], v);
        remove_neighbor(&mut self.rotation[v], u);
        // Face (u, v, w): u sits right before v around w. Face (v, u, z): v
        // sits right before u around z. The new diagonal goes in between.
        insert_after(&mut self.rotation[w], u, z);
        insert_after(&mut self.rotation[z], v, w);
        for x in [u, v, w, z] {
            normalize(&mut self.rotation[x]);
        }
        Ok(q)
    }

    /// Inserts a new vertex (id `n`) inside the interior face `(a, b, c)`.
    pub fn insert_vertex(&self, a: usize, b: usize, c: usize) -> Result<Self> {
        if !self.is_interior_face(a, b, c) {
            return Err(TriangulationError::NotAFace(a, b, c));
        }
        let x = self.n();
        let mut rotation = self.rotation.clone();
        insert_after(&mut rotation[a], b, x);
        insert_after(&mut rotation[b], c, x);
        insert_after(&mut rotation[c], a, x);
        rotation.push(vec![a, b, c]);
        for y in [a, b, c, x] {
            normalize(&mut rotation[y]);
        }
        Ok(Triangulation { rotation, outer: self.outer })
    }

    /// The double fan on `n` vertices with outer face `(0, 1, 2)`: both `r0`
    /// and `r1` see every vertex and the interior vertices form the path
    /// `r2, 3, 4, ..., n-1` in increasing order.
    pub fn double_fan(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(TriangulationError::Invalid(format!("need at least 4 vertices, got {n}")));
        }
        Self::double_fan_with_path(&(3..n).collect::<Vec<_>>(), [0, 1, 2])
    }

    /// The double fan whose interior path, read from `r2` downwards, is `path`.
    pub fn double_fan_with_path(path: &[usize], outer: [usize; 3]) -> Result<Self> {
        let n = path.len() + 3;
        let [r0, r1, r2] = outer;
        let mut rotation = vec![Vec::new(); n];
        if path.is_empty() {
            return Err(TriangulationError::Invalid("double fan needs an interior vertex".into()));
        }
        let k = path.len();
        rotation[r0] = std::iter::once(r1).chain(path.iter().rev().copied()).chain([r2]).collect();
        rotation[r1] = std::iter::once(r2).chain(path.iter().copied()).chain([r0]).collect();
        rotation[r2] = vec![r0, path[0], r1];
        for (s, &p) in path.iter().enumerate() {
            let above = if s == 0 { r2 } else { path[s - 1] };
            rotation[p] = if s + 1 < k { vec![above, r0, path[s + 1], r1] } else { vec![above, r0, r1] };
        }
        Self::new(rotation, outer)
    }

    pub fn is_double_fan(&self) -> bool {
        let n = self.n();
        self.degree(self.outer[0]) == n - 1 && self.degree(self.outer[1]) == n - 1
    }

    /// Interior path of a double fan read from `r2` towards the edge `r0 r1`.
    pub fn double_fan_path(&self) -> Option<Vec<usize>> {
        if !self.is_double_fan() {
            return None;
        }
        let [r0, r1, r2] = self.outer;
        let mut path = Vec::with_capacity(self.n() - 3);
        let mut x = self.cw_next(r0, r2)?;
        while x != r1 {
            path.push(x);
            x = self.cw_next(r0, x)?;
        }
        Some(path)
    }

    /// Builds a triangulation from a straight-line drawing with integer
    /// coordinates. Rotations are obtained by sorting neighbours by angle.
    pub fn from_embedding(points: &[(i64, i64)], edges: &[(usize, usize)], outer: [usize; 3]) -> Result<Self> {
        let n = points.len();
        let mut rotation = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(TriangulationError::Invalid(format!("edge {a}-{b} out of range")));
            }
            rotation[a].push(b);
            rotation[b].push(a);
        }
        for (u, rot) in rotation.iter_mut().enumerate() {
            let (ux, uy) = points[u];
            rot.sort_by(|&a, &b| {
                let da = (points[a].0 - ux, points[a].1 - uy);
                let db = (points[b].0 - ux, points[b].1 - uy);
                angle_cmp(da, db)
            });
        }
        Self::new(rotation, outer)
    }

    /// Face structure of the current embedding.
    pub fn faces(&self) -> FaceMap {
        FaceMap::new(self)
    }

    /// Diagonal flips (as `(u, v)` diagonals) turning `self` into a double fan.
    ///
    /// First `r0` gains neighbours one flip at a time, then `r1` does while
    /// no edge at `r0` is touched. Among candidates the lexicographically
    /// smallest diagonal wins. When no flip gives `r0` a new neighbour, a
    /// chord between two of its neighbours is flipped away first.
    pub fn reduce_to_double_fan(&self) -> Vec<(usize, usize)> {
        let mut t = self.clone();
        let mut flips = Vec::new();
        let [r0, r1, _] = self.outer;
        for (hub, keep) in [(r0, None), (r1, Some(r0))] {
            while t.degree(hub) < t.n() - 1 {
                let cand = t.fan_candidate(hub, keep).expect("a degree-increasing or chord flip always exists");
                t.flip_in_place(cand.0, cand.1).expect("candidate is flippable");
                flips.push(cand);
            }
        }
        flips
    }

    fn fan_candidate(&self, hub: usize, keep: Option<usize>) -> Option<(usize, usize)> {
        let rot = &self.rotation[hub];
        let mut best: Option<(usize, usize)> = None;
        for k in 0..rot.len() {
            let a = rot[k];
            let b = rot[(k + 1) % rot.len()];
            if self.is_outer_edge(a, b) || keep.is_some_and(|r| a == r || b == r) {
                continue;
            }
            let Ok(q) = self.quad_of(a, b) else { continue };
            let y = q.other_apex(hub);
            if y == hub || self.has_edge(hub, y) {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if best.is_none_or(|bk| key < bk) {
                best = Some(key);
            }
        }
        best.or_else(|| self.chord_candidate(hub, keep))
    }

    /// An edge between two neighbours of `hub` with one apex outside the
    /// neighbourhood. Flipping it removes a chord that fences off the
    /// vertices `hub` cannot yet reach.
    fn chord_candidate(&self, hub: usize, keep: Option<usize>) -> Option<(usize, usize)> {
        let near = |x: usize| x == hub || self.has_edge(hub, x);
        let mut best: Option<(usize, usize)> = None;
        for &a in &self.rotation[hub] {
            for &b in &self.rotation[a] {
                if b <= a || b == hub || !self.has_edge(hub, b) || self.is_outer_edge(a, b) {
                    continue;
                }
                if keep.is_some_and(|r| a == r || b == r) {
                    continue;
                }
                let Ok(q) = self.quad_of(a, b) else { continue };
                if q.w == hub || q.z == hub || near(q.w) == near(q.z) || self.has_edge(q.w, q.z) {
                    continue;
                }
                if keep.is_some_and(|r| q.w == r || q.z == r) {
                    continue;
                }
                if best.is_none_or(|bk| (a, b) < bk) {
                    best = Some((a, b));
                }
            }
        }
        best
    }
}

fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |p: (i64, i64)| if p.1 > 0 || (p.1 == 0 && p.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

fn remove_neighbor(rot: &mut Vec<usize>, x: usize) {
    if let Some(k) = rot.iter().position(|&y| y == x) {
        rot.remove(k);
    }
}

fn insert_after(rot: &mut Vec<usize>, after: usize, x: usize) {
    let k = rot.iter().position(|&y| y == after).expect("anchor neighbour present");
    rot.insert(k + 1, x);
}

/// Darts and faces of a triangulation, indexed densely.
///
/// Dart `offset(u) + k` is `u -> rotation(u)[k]`. Indices are stored as
/// `u32` to keep the tables small on large inputs.
#[derive(Debug, Clone)]
pub struct FaceMap {
    offsets: Vec<u32>,
    tail: Vec<u32>,
    head: Vec<u32>,
    twin: Vec<u32>,
    face_of: Vec<u32>,
    faces: Vec<[u32; 3]>,
    outer: usize,
}

impl FaceMap {
    fn new(t: &Triangulation) -> Self {
        let n = t.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0u32;
        for u in 0..n {
            offsets.push(acc);
            acc += u32::try_from(t.degree(u)).expect("fewer than 2^32 darts");
        }
        offsets.push(acc);
        let darts = acc as usize;
        let mut tail = Vec::with_capacity(darts);
        let mut head = Vec::with_capacity(darts);
        for u in 0..n {
            for &v in t.rotation(u) {
                tail.push(u as u32);
                head.push(v as u32);
            }
        }
        let twin: Vec<u32> = (0..darts)
            .map(|d| {
                let (u, v) = (tail[d] as usize, head[d] as usize);
                offsets[v] + t.position(v, u).expect("symmetric rotations") as u32
            })
            .collect();
        // Next dart around the left face: at the head, step clockwise from the twin.
        let next = |d: usize| {
            let tw = twin[d];
            let start = offsets[tail[tw as usize] as usize];
            if tw == start {
                offsets[tail[tw as usize] as usize + 1] - 1
            } else {
                tw - 1
            }
        };
        let mut face_of = vec![u32::MAX; darts];
        let mut faces = Vec::with_capacity(2 * n);
        for d0 in 0..darts {
            if face_of[d0] != u32::MAX {
                continue;
            }
            let d1 = next(d0);
            let d2 = next(d1 as usize);
            let f = faces.len() as u32;
            for d in [d0 as u32, d1, d2] {
                face_of[d as usize] = f;
            }
            faces.push([d0 as u32, d1, d2]);
        }
        let [r0, r1, _] = t.outer();
        let outer = face_of[offsets[r1] as usize + t.position(r1, r0).expect("outer edge")] as usize;
        FaceMap { offsets, tail, head, twin, face_of, faces, outer }
    }

    pub fn dart(&self, t: &Triangulation, u: usize, v: usize) -> Option<usize> {
        t.position(u, v).map(|k| self.offsets[u] as usize + k)
    }

    pub fn dart_count(&self) -> usize {
        self.tail.len()
    }

    pub fn tail(&self, d: usize) -> usize {
        self.tail[d] as usize
    }

    pub fn head(&self, d: usize) -> usize {
        self.head[d] as usize
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d] as usize
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d] as usize
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// The three darts of face `f`, counter-clockwise for interior faces.
    pub fn face_darts(&self, f: usize) -> [usize; 3] {
        self.faces[f].map(|d| d as usize)
    }

    pub fn face_vertices(&self, f: usize) -> [usize; 3] {
        self.faces[f].map(|d| self.tail[d as usize] as usize)
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    pub fn darts_of(&self, u: usize) -> std::ops::Range<usize> {
        self.offsets[u] as usize..self.offsets[u + 1] as usize
    }
}

impl fmt::Display for Triangulation {
    /// Writes the line-oriented `.tri` format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n())?;
        writeln!(f, "outer {} {} {}", self.outer[0], self.outer[1], self.outer[2])?;
        for (u, rot) in self.rotation.iter().enumerate() {
            write!(f, "rot {u}:")?;
            for v in rot {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incremental reader for `.tri` lines, shared with the `.real` reader.
#[derive(Default)]
pub(crate) struct TriReader {
    n: Option<usize>,
    outer: Option<[usize; 3]>,
    rotation: Vec<Option<Vec<usize>>>,
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| TriangulationError::Parse { line, msg: format!("expected a vertex id, got {tok:?}") })
}

impl TriReader {
    /// Consumes one non-comment line. Returns `Ok(false)` if the keyword is not
    /// one of `n`, `outer`, `rot`.
    pub(crate) fn feed(&mut self, line_no: usize, line: &str) -> Result<bool> {
        let perr = |msg: String| TriangulationError::Parse { line: line_no, msg };
        let mut toks = line.split_whitespace();
        let Some(kw) = toks.next() else { return Ok(true) };
        match kw {
            "n" => {
                let n = parse_num(toks.next().ok_or_else(|| perr("missing count".into()))?, line_no)?;
                if toks.next().is_some() {
                    return Err(perr("trailing tokens after n".into()));
                }
                if self.n.is_some() {
                    return Err(perr("duplicate n line".into()));
                }
                self.n = Some(n);
                self.rotation = vec![None; n];
            }
            "outer" => {
                let v: Vec<usize> = toks.map(|t| parse_num(t, line_no)).collect::<Result<_>>()?;
                if v.len() != 3 {
                    return Err(perr(format!("outer needs 3 vertices, got {}", v.len())));
                }
                self.outer = Some([v[0], v[1], v[2]]);
            }
            "rot" => {
                let n = self.n.ok_or_else(|| perr("rot before n".into()))?;
                let head = toks.next().ok_or_else(|| perr("missing vertex".into()))?;
                let head = head.strip_suffix(':').ok_or_else(|| perr("expected `rot <v>:`".into()))?;
                let v = parse_num(head, line_no)?;
                if v >= n {
                    return Err(perr(format!("vertex {v} out of range")));
                }
                let nbrs: Vec<usize> = toks.map(|t| parse_num(t, line_no)).collect::<Result<_>>()?;
                if self.rotation[v].replace(nbrs).is_some() {
                    return Err(perr(format!("duplicate rot line for {v}")));
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub(crate) fn finish(self) -> Result<Triangulation> {
        let n = self.n.ok_or_else(|| TriangulationError::Parse { line: 0, msg: "missing n line".into() })?;
        let outer = self.outer.ok_or_else(|| TriangulationError::Parse { line: 0, msg: "missing outer line".into() })?;
        let rotation = self
            .rotation
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or_else(|| TriangulationError::Parse { line: 0, msg: format!("missing rot line for {v}") }))
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(rotation.len(), n);
        Triangulation::new(rotation, outer)
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

impl FromStr for Triangulation {
    type Err = TriangulationError;

    fn from_str(text: &str) -> Result<Self> {
        let mut r = TriReader::default();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            if !r.feed(i + 1, line)? {
                return Err(TriangulationError::Parse { line: i + 1, msg: format!("unknown keyword in {line:?}") });
            }
        }
        r.finish()
    }
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::testkit::{F5_TRI as F5, K4_TRI as K4};

    #[test]
    fn parses_small_triangulations() {
        let k4: Triangulation = K4.parse().unwrap();
        assert_eq!(k4.edge_count(), 6);
        let interior = (0..k4.faces().face_count()).filter(|&f| f != k4.faces().outer_face()).count();
        assert_eq!(interior, 3);
        let f5: Triangulation = F5.parse().unwrap();
        assert_eq!(f5.edge_count(), 9);
    }

    #[test]
    fn rejects_missing_edge() {
        let text = "n 4\nouter 0 1 2\nrot 0: 1 3 2\nrot 1: 2 0\nrot 2: 0 3 1\nrot 3: 2 0\n";
        let err = text.parse::<Triangulation>().unwrap_err();
        assert!(matches!(err, TriangulationError::Invalid(ref m) if m.contains("edge count 5")), "{err}");
    }

    #[test]
    fn rejects_clockwise_outer_face() {
        let text = K4.replace("outer 0 1 2", "outer 0 2 1");
        assert!(matches!(text.parse::<Triangulation>(), Err(TriangulationError::Invalid(_))));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!("n x".parse::<Triangulation>(), Err(TriangulationError::Parse { line: 1, .. })));
        let text = K4.replace("rot 3:", "rot 3");
        assert!(matches!(text.parse::<Triangulation>(), Err(TriangulationError::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        let f5: Triangulation = F5.parse().unwrap();
        assert_eq!(f5.to_string().parse::<Triangulation>().unwrap(), f5);
    }

    #[test]
    fn quadrilaterals() {
        let f5: Triangulation = F5.parse().unwrap();
        let q = f5.quad_of(3, 0).unwrap();
        assert_eq!((q.w, q.z), (4, 2));
        assert!(f5.is_diagonal_flippable(3, 0).unwrap());
        assert!(!f5.is_diagonal_flippable(3, 2).unwrap());
        assert_eq!(f5.quad_of(0, 1), Err(TriangulationError::OuterEdge(0, 1)));
        let k4: Triangulation = K4.parse().unwrap();
        let q = k4.quad_of(3, 0).unwrap();
        let mut apexes = [q.w, q.z];
        apexes.sort();
        assert_eq!(apexes, [1, 2]);
        assert!(!k4.is_diagonal_flippable(3, 0).unwrap());
        assert_eq!(k4.diagonal_flip(3, 0), Err(TriangulationError::NotFlippable(3, 0)));
    }

    #[test]
    fn flip_and_flip_back() {
        let f5: Triangulation = F5.parse().unwrap();
        let g = f5.diagonal_flip(3, 0).unwrap();
        assert!(g.has_edge(4, 2) && !g.has_edge(3, 0));
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.diagonal_flip(4, 2).unwrap(), f5);
    }

    #[test]
    fn double_fans() {
        let f5: Triangulation = F5.parse().unwrap();
        assert_eq!(Triangulation::double_fan(5).unwrap(), f5);
        assert_eq!(f5.double_fan_path(), Some(vec![3, 4]));
        assert!(f5.reduce_to_double_fan().is_empty());
        let k4: Triangulation = K4.parse().unwrap();
        assert_eq!(Triangulation::double_fan(4).unwrap(), k4);
        let g = f5.diagonal_flip(3, 0).unwrap();
        let flips = g.reduce_to_double_fan();
        assert!(!flips.is_empty() && flips.len() <= 2);
        let mut h = g.clone();
        for (a, b) in flips {
            h.flip_in_place(a, b).unwrap();
        }
        assert!(h.is_double_fan());
    }

    #[test]
    fn embedding_constructor_matches_hand_rotations() {
        let pts = [(0, 0), (10, 0), (5, 10), (5, 5), (5, 2)];
        let edges = [(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 3)];
        let t = Triangulation::from_embedding(&pts, &edges, [0, 1, 2]).unwrap();
        assert_eq!(t, F5.parse().unwrap());
    }

    #[test]
    fn insert_vertex_into_face() {
        let k4: Triangulation = K4.parse().unwrap();
        let t = k4.insert_vertex(0, 1, 3).unwrap();
        assert_eq!(t, F5.parse().unwrap());
        assert!(k4.insert_vertex(1, 0, 2).is_err());
    }
}
