//! Schnyder realizers: three oriented trees covering the interior edges.
//!
//! A realizer is stored as three parent pointers per interior vertex: the
//! head of its outgoing edge in each tree `T_0`, `T_1`, `T_2`. Every interior
//! edge is the outgoing edge of exactly one interior vertex, so this is a
//! complete description.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::triangulation::{strip_comment, FaceMap, TriReader, Triangulation, TriangulationError};

/// Tree label in `{0, 1, 2}`, arithmetic mod 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(u8);

impl Color {
    pub const ALL: [Color; 3] = [Color(0), Color(1), Color(2)];

    pub fn new(i: usize) -> Option<Color> {
        (i < 3).then_some(Color(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn succ(self) -> Color {
        Color((self.0 + 1) % 3)
    }

    pub fn pred(self) -> Color {
        Color((self.0 + 2) % 3)
    }

    pub fn shift(self, k: usize) -> Color {
        Color(((self.0 as usize + k) % 3) as u8)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What an edge looks like from one of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Out(Color),
    In(Color),
    Outer,
}

/// First violated condition found by validation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("{0}-{1} is not an interior edge")]
    NotInteriorEdge(usize, usize),
    #[error("interior edge {0}-{1} has no orientation")]
    MissingEdge(usize, usize),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("outer vertex {0} has an outgoing edge")]
    OutgoingFromRoot(usize),
    #[error("vertex {vertex}: duplicate outgoing color {color}")]
    DuplicateOutgoing { vertex: usize, color: Color },
    #[error("vertex {vertex}: no outgoing edge of color {color}")]
    MissingOutgoing { vertex: usize, color: Color },
    #[error("vertex {0}: outgoing edges are not in counter-clockwise order 0, 1, 2")]
    CcwOrder(usize),
    #[error("vertex {vertex}: incoming edge from {from} of color {color} is not between outgoing {} and {}", color.succ(), color.pred())]
    IncomingOutOfPlace { vertex: usize, from: usize, color: Color },
    #[error("root {root}: incoming edge from {from} has color {color}")]
    RootColor { root: usize, from: usize, color: Color },
    #[error("tree {color} is not rooted at its outer vertex (stuck at {vertex})")]
    NotATree { color: Color, vertex: usize },
}

#[derive(Debug, Error)]
pub enum RealizerError {
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not a realizer: {0}")]
    Invalid(#[from] Violation),
    #[error("orientation admits no realizer coloring: {0}")]
    NoColoring(String),
}

/// Read access shared by the static and the dynamic realizer.
pub trait Wood {
    fn base(&self) -> &Triangulation;

    fn parent(&self, c: Color, u: usize) -> Option<usize>;

    /// The edge `u v` as seen from `u`. `None` if `uv` is not an edge.
    fn edge_kind(&self, u: usize, v: usize) -> Option<EdgeKind> {
        let t = self.base();
        if t.is_outer_edge(u, v) {
            return Some(EdgeKind::Outer);
        }
        for c in Color::ALL {
            if self.parent(c, u) == Some(v) {
                return Some(EdgeKind::Out(c));
            }
            if self.parent(c, v) == Some(u) {
                return Some(EdgeKind::In(c));
            }
        }
        None
    }

    /// Color of the interior edge `u v`, in either direction.
    fn label(&self, u: usize, v: usize) -> Option<Color> {
        match self.edge_kind(u, v)? {
            EdgeKind::Out(c) | EdgeKind::In(c) => Some(c),
            EdgeKind::Outer => None,
        }
    }

    /// Whether `u -> v` is a directed edge.
    fn is_directed(&self, u: usize, v: usize) -> bool {
        Color::ALL.iter().any(|&c| self.parent(c, u) == Some(v))
    }

    /// Checks both local conditions at `u`.
    fn check_vertex(&self, u: usize) -> Result<(), Violation> {
        let kinds: Vec<(usize, EdgeKind)> = self
            .base()
            .rotation(u)
            .iter()
            .map(|&v| (v, self.edge_kind(u, v).unwrap_or(EdgeKind::Outer)))
            .collect();
        check_local(u, self.base().root_index(u), &kinds)
    }
}

/// Checks the counter-clockwise pattern `out0, in2*, out1, in0*, out2, in1*`
/// at an interior vertex, or "all incoming of my color" at root `root`.
pub fn check_local(u: usize, root: Option<usize>, kinds: &[(usize, EdgeKind)]) -> Result<(), Violation> {
    if let Some(k) = root {
        for &(v, kind) in kinds {
            match kind {
                EdgeKind::Outer => {}
                EdgeKind::In(c) if c.index() == k => {}
                EdgeKind::In(c) => return Err(Violation::RootColor { root: u, from: v, color: c }),
                EdgeKind::Out(_) => return Err(Violation::OutgoingFromRoot(u)),
            }
        }
        return Ok(());
    }
    let d = kinds.len();
    let mut out = [usize::MAX; 3];
    for (p, &(_, kind)) in kinds.iter().enumerate() {
        if let EdgeKind::Out(c) = kind {
            if out[c.index()] != usize::MAX {
                return Err(Violation::DuplicateOutgoing { vertex: u, color: c });
            }
            out[c.index()] = p;
        }
    }
    for c in Color::ALL {
        if out[c.index()] == usize::MAX {
            return Err(Violation::MissingOutgoing { vertex: u, color: c });
        }
    }
    let off = |from: usize, to: usize| (to + d - from) % d;
    if off(out[0], out[1]) > off(out[0], out[2]) {
        return Err(Violation::CcwOrder(u));
    }
    for (p, &(v, kind)) in kinds.iter().enumerate() {
        match kind {
            EdgeKind::In(c) => {
                let start = out[c.succ().index()];
                let end = out[c.pred().index()];
                if off(start, p) >= off(start, end) {
                    return Err(Violation::IncomingOutOfPlace { vertex: u, from: v, color: c });
                }
            }
            EdgeKind::Outer => return Err(Violation::NotInteriorEdge(u, v)),
            EdgeKind::Out(_) => {}
        }
    }
    Ok(())
}

pub(crate) const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Realizer {
    base: Triangulation,
    parent: Vec<[usize; 3]>,
}

impl Wood for Realizer {
    fn base(&self) -> &Triangulation {
        &self.base
    }

    fn parent(&self, c: Color, u: usize) -> Option<usize> {
        let p = self.parent[u][c.index()];
        (p != NONE).then_some(p)
    }
}

impl Realizer {
    /// Builds a realizer from directed colored edges `(tail, head, color)`,
    /// rejecting anything that is not a realizer of `base`.
    pub fn from_edges(base: Triangulation, edges: &[(usize, usize, Color)]) -> Result<Self, RealizerError> {
        let r = Self::from_edges_unchecked(base, edges)?;
        r.validate()?;
        Ok(r)
    }

    /// Like [`Realizer::from_edges`] but only checks that every interior
    /// edge is listed once and every interior vertex has one outgoing edge
    /// per color.
    pub fn from_edges_unchecked(base: Triangulation, edges: &[(usize, usize, Color)]) -> Result<Self, Violation> {
        let n = base.n();
        let mut parent = vec![[NONE; 3]; n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(a, b, c) in edges {
            if a >= n || b >= n || !base.has_edge(a, b) || base.is_outer_edge(a, b) {
                return Err(Violation::NotInteriorEdge(a, b));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Violation::DuplicateEdge(a, b));
            }
            if base.is_outer_vertex(a) {
                return Err(Violation::OutgoingFromRoot(a));
            }
            let slot = &mut parent[a][c.index()];
            if *slot != NONE {
                return Err(Violation::DuplicateOutgoing { vertex: a, color: c });
            }
            *slot = b;
        }
        for (a, b) in base.interior_edges() {
            if !seen.contains(&(a, b)) {
                return Err(Violation::MissingEdge(a, b));
            }
        }
        for u in base.interior_vertices() {
            for c in Color::ALL {
                if parent[u][c.index()] == NONE {
                    return Err(Violation::MissingOutgoing { vertex: u, color: c });
                }
            }
        }
        Ok(Realizer { base, parent })
    }

    pub(crate) fn from_parts(base: Triangulation, parent: Vec<[usize; 3]>) -> Self {
        Realizer { base, parent }
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.base
    }

    /// Head of the outgoing edge of color `c` at `u`.
    pub fn parent_of(&self, u: usize, c: Color) -> Option<usize> {
        Wood::parent(self, c, u)
    }

    pub(crate) fn raw_mut(&mut self) -> (&mut Triangulation, &mut Vec<[usize; 3]>) {
        (&mut self.base, &mut self.parent)
    }

    /// All directed edges `(tail, head, color)`, sorted by tail then color.
    pub fn edges(&self) -> Vec<(usize, usize, Color)> {
        let mut out = Vec::with_capacity(3 * self.n());
        for (u, ps) in self.parent.iter().enumerate() {
            for c in Color::ALL {
                if ps[c.index()] != NONE {
                    out.push((u, ps[c.index()], c));
                }
            }
        }
        out
    }

    /// Checks both local conditions at every vertex and that each color
    /// class is a tree rooted at its outer vertex.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.n();
        for u in 0..n {
            if self.base.is_outer_vertex(u) && self.parent[u].iter().any(|&p| p != NONE) {
                return Err(Violation::OutgoingFromRoot(u));
            }
        }
        for u in 0..n {
            self.check_vertex(u)?;
        }
        for c in Color::ALL {
            let root = self.base.root(c.index());
            // 0 = unknown, 1 = on the current walk, 2 = reaches the root.
            let mut state = vec![0u8; n];
            state[root] = 2;
            for start in self.base.interior_vertices() {
                let mut walk = Vec::new();
                let mut x = start;
                while state[x] == 0 {
                    state[x] = 1;
                    walk.push(x);
                    x = self.parent[x][c.index()];
                    if x == NONE {
                        return Err(Violation::NotATree { color: c, vertex: *walk.last().unwrap() });
                    }
                }
                if state[x] == 1 {
                    return Err(Violation::NotATree { color: c, vertex: x });
                }
                for y in walk {
                    state[y] = 2;
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The directed path from `u` to the root `r_c` in tree `c`.
    pub fn path_of(&self, u: usize, c: Color) -> Vec<usize> {
        let mut path = vec![u];
        let mut x = u;
        while let Some(p) = self.parent_of(x, c) {
            path.push(p);
            x = p;
            debug_assert!(path.len() <= self.n(), "cycle in tree {c}");
        }
        path
    }

    pub fn to_3_orientation(&self) -> Orientation3 {
        let mut out: Vec<Vec<usize>> = self.parent.iter().map(|ps| ps.iter().copied().filter(|&p| p != NONE).collect()).collect();
        out.iter_mut().for_each(|o| o.sort_unstable());
        Orientation3 { base: self.base.clone(), out }
    }

    /// Number of vertices in each region of `u` (numerators of its barycentric coordinates).
    pub fn region_sizes(&self, u: usize) -> RegionVector {
        RegionCounter::new(self).count(u)
    }

    /// Integer barycentric numerators of every vertex, over denominator `n - 1`.
    pub fn barycentric(&self) -> Vec<RegionVector> {
        let mut counter = RegionCounter::new(self);
        (0..self.n()).map(|u| counter.count(u)).collect()
    }

    /// Vertices of tree `c` in breadth-first order from its root.
    fn tree_order(&self, c: Color) -> Vec<usize> {
        let n = self.n();
        let mut children = vec![Vec::new(); n];
        for u in 0..n {
            if let Some(p) = self.parent_of(u, c) {
                children[p].push(u);
            }
        }
        let mut order = vec![self.base.root(c.index())];
        let mut k = 0;
        while k < order.len() {
            order.extend_from_slice(&children[order[k]]);
            k += 1;
        }
        order
    }

    /// Depth of every vertex in every tree; vertices outside a tree get 0.
    pub fn depths(&self) -> Vec<[usize; 3]> {
        let mut d = vec![[0usize; 3]; self.n()];
        for c in Color::ALL {
            for u in self.tree_order(c) {
                if let Some(p) = self.parent_of(u, c) {
                    d[u][c.index()] = d[p][c.index()] + 1;
                }
            }
        }
        d
    }

    /// Same values as [`Realizer::barycentric`] in `O(n)` total.
    ///
    /// With `t_i(x)` the size of the subtree of `x` in `T_i`,
    /// `|R_i(v)|` is the sum of `t_i` over `P_{i+1}(v)` and over `P_{i-1}(v)`,
    /// minus `t_i(v)` and the number of vertices on `P_{i-1}(v)`.
    pub fn barycentric_linear(&self) -> Vec<RegionVector> {
        let n = self.n();
        let orders = Color::ALL.map(|c| self.tree_order(c));
        let mut size = [vec![1i64; n], vec![1i64; n], vec![1i64; n]];
        for c in Color::ALL {
            for &u in orders[c.index()].iter().rev() {
                if let Some(p) = self.parent_of(u, c) {
                    size[c.index()][p] += size[c.index()][u];
                }
            }
        }
        // along[a][b][v]: sum of t_b over P_a(v); len[a][v]: vertices on P_a(v).
        let mut along = [[vec![0i64; n], vec![0i64; n], vec![0i64; n]], [vec![0i64; n], vec![0i64; n], vec![0i64; n]], [vec![0i64; n], vec![0i64; n], vec![0i64; n]]];
        let mut len = [vec![0i64; n], vec![0i64; n], vec![0i64; n]];
        for a in Color::ALL {
            let ai = a.index();
            for &u in &orders[ai] {
                let p = self.parent_of(u, a);
                len[ai][u] = 1 + p.map_or(0, |p| len[ai][p]);
                for b in 0..3 {
                    along[ai][b][u] = size[b][u] + p.map_or(0, |p| along[ai][b][p]);
                }
            }
        }
        (0..n)
            .map(|v| {
                if let Some(i) = self.base.root_index(v) {
                    return root_coordinates(n, i);
                }
                RegionVector(Color::ALL.map(|i| {
                    let (ii, up, down) = (i.index(), i.succ().index(), i.pred().index());
                    let x = along[up][ii][v] + along[down][ii][v] - size[ii][v] - len[down][v];
                    usize::try_from(x).expect("region sizes are non-negative")
                }))
            })
            .collect()
    }
}

/// Coordinates of the root `r_i`: `n - 2` in slot `i`, `1` in slot `i + 1`, `0` in slot `i + 2`.
pub fn root_coordinates(n: usize, i: usize) -> RegionVector {
    let mut v = [0usize; 3];
    v[i] = n - 2;
    v[(i + 1) % 3] = 1;
    RegionVector(v)
}

/// `(|R_0(u)|, |R_1(u)|, |R_2(u)|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionVector(pub [usize; 3]);

impl RegionVector {
    pub fn get(&self, c: Color) -> usize {
        self.0[c.index()]
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Region counting by face flooding, reusable across vertices of one realizer.
///
/// `R_i(u)` holds `P_{i+1}(u) \ {u}` and the non-path vertices in the sector
/// between the outgoing edges of colors `i+1` and `i-1`.
pub struct RegionCounter<'a> {
    r: &'a Realizer,
    faces: FaceMap,
    stamp: u32,
    on_path: Vec<u32>,
    barrier: Vec<u32>,
    face_seen: Vec<u32>,
    vertex_seen: Vec<u32>,
    queue: Vec<usize>,
}

impl<'a> RegionCounter<'a> {
    pub fn new(r: &'a Realizer) -> Self {
        let faces = r.base.faces();
        RegionCounter {
            r,
            on_path: vec![0; r.n()],
            barrier: vec![0; faces.dart_count()],
            face_seen: vec![0; faces.face_count()],
            vertex_seen: vec![0; r.n()],
            queue: Vec::new(),
            faces,
            stamp: 0,
        }
    }

    fn mark_barrier(&mut self, a: usize, b: usize) {
        let d = self.faces.dart(&self.r.base, a, b).expect("path edge exists");
        self.barrier[d] = self.stamp;
        self.barrier[self.faces.twin(d)] = self.stamp;
    }

    pub fn count(&mut self, u: usize) -> RegionVector {
        if let Some(i) = self.r.base.root_index(u) {
            return root_coordinates(self.r.n(), i);
        }
        let mut sizes = [0usize; 3];
        self.flood(u, |c, _| sizes[c.index()] += 1);
        RegionVector(sizes)
    }

    /// Vertex sets of `R_0(u)`, `R_1(u)`, `R_2(u)`, each sorted. Roots get
    /// empty sets.
    pub fn members(&mut self, u: usize) -> [Vec<usize>; 3] {
        let mut sets: [Vec<usize>; 3] = Default::default();
        if self.r.base.is_outer_vertex(u) {
            return sets;
        }
        self.flood(u, |c, x| sets[c.index()].push(x));
        sets.iter_mut().for_each(|s| s.sort_unstable());
        sets
    }

    /// Calls `visit(i, x)` once for every vertex `x` of `R_i(u)`, `u` interior.
    fn flood(&mut self, u: usize, mut visit: impl FnMut(Color, usize)) {
        let t = &self.r.base;
        self.stamp += 1;
        let barrier_stamp = self.stamp;
        let paths: [Vec<usize>; 3] = Color::ALL.map(|c| self.r.path_of(u, c));
        for p in &paths {
            for &x in p {
                self.on_path[x] = self.stamp;
            }
            for e in p.windows(2) {
                self.mark_barrier(e[0], e[1]);
            }
        }
        let [r0, r1, r2] = t.outer();
        self.mark_barrier(r0, r1);
        self.mark_barrier(r1, r2);
        self.mark_barrier(r2, r0);
        for c in Color::ALL {
            self.stamp += 1;
            let region_stamp = self.stamp;
            let head = paths[c.succ().index()][1];
            let d0 = self.faces.dart(t, u, head).expect("tree edge exists");
            let f0 = self.faces.face_of(d0);
            self.queue.clear();
            self.queue.push(f0);
            self.face_seen[f0] = region_stamp;
            while let Some(f) = self.queue.pop() {
                for d in self.faces.face_darts(f) {
                    let x = self.faces.tail(d);
                    if self.on_path[x] != barrier_stamp && self.vertex_seen[x] != region_stamp {
                        self.vertex_seen[x] = region_stamp;
                        visit(c, x);
                    }
                    if self.barrier[d] == barrier_stamp {
                        continue;
                    }
                    let g = self.faces.face_of(self.faces.twin(d));
                    if self.face_seen[g] != region_stamp {
                        self.face_seen[g] = region_stamp;
                        self.queue.push(g);
                    }
                }
            }
            paths[c.succ().index()][1..].iter().for_each(|&x| visit(c, x));
        }
    }
}

/// Orientation of the interior edges in which every interior vertex has out-degree 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation3 {
    base: Triangulation,
    out: Vec<Vec<usize>>,
}

impl Orientation3 {
    /// `out[u]` lists the heads of the edges leaving `u`.
    pub fn new(base: Triangulation, out: Vec<Vec<usize>>) -> Result<Self, Violation> {
        let n = base.n();
        if out.len() != n {
            return Err(Violation::MissingOutgoing { vertex: out.len().min(n), color: Color(0) });
        }
        let mut seen = HashSet::new();
        for (u, heads) in out.iter().enumerate() {
            if base.is_outer_vertex(u) {
                if !heads.is_empty() {
                    return Err(Violation::OutgoingFromRoot(u));
                }
                continue;
            }
            if heads.len() != 3 {
                return Err(Violation::MissingOutgoing { vertex: u, color: Color::new(heads.len().min(2)).unwrap() });
            }
            for &v in heads {
                if v >= n || !base.has_edge(u, v) {
                    return Err(Violation::NotInteriorEdge(u, v));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(Violation::DuplicateEdge(u, v));
                }
            }
        }
        for (a, b) in base.interior_edges() {
            if !seen.contains(&(a, b)) {
                return Err(Violation::MissingEdge(a, b));
            }
        }
        let mut out = out;
        out.iter_mut().for_each(|o| o.sort_unstable());
        Ok(Orientation3 { base, out })
    }

    pub fn base(&self) -> &Triangulation {
        &self.base
    }

    pub fn out(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn is_directed(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// Recovers the unique coloring that makes this orientation a realizer.
    ///
    /// Colors propagate along edges: an edge into `r_k` has color `k`; one
    /// known outgoing color fixes the other two by counter-clockwise order;
    /// an incoming edge of color `c` at `y` sits right before `y`'s outgoing
    /// edge of color `c + 2`, and one outgoing edge of known color at `x`
    /// tells the color of every incoming edge at `x` by the gap it lies in.
    pub fn to_realizer(&self) -> Result<Realizer, RealizerError> {
        let t = &self.base;
        let n = t.n();
        let mut parent = vec![[NONE; 3]; n];
        let mut queue = VecDeque::new();
        // Assign `x` given that its outgoing edge to `head` has color `c`.
        let assign = |x: usize, head: usize, c: Color, parent: &mut Vec<[usize; 3]>, queue: &mut VecDeque<usize>| -> Result<(), RealizerError> {
            let rot = t.rotation(x);
            let k = t.position(x, head).unwrap();
            let mut colors = [NONE; 3];
            let mut next = c;
            for s in 0..rot.len() {
                let y = rot[(k + s) % rot.len()];
                if self.is_directed(x, y) {
                    colors[next.index()] = y;
                    next = next.succ();
                }
            }
            if parent[x][0] != NONE {
                return if parent[x] == colors {
                    Ok(())
                } else {
                    Err(RealizerError::NoColoring(format!("conflicting colors at vertex {x}")))
                };
            }
            parent[x] = colors;
            queue.push_back(x);
            Ok(())
        };
        for (k, &r) in t.outer().iter().enumerate() {
            for &x in t.rotation(r) {
                if !t.is_outer_vertex(x) {
                    if !self.is_directed(x, r) {
                        return Err(RealizerError::NoColoring(format!("edge {x}-{r} leaves a root")));
                    }
                    assign(x, r, Color::new(k).unwrap(), &mut parent, &mut queue)?;
                }
            }
        }
        while let Some(x) = queue.pop_front() {
            let rot = t.rotation(x);
            let d = rot.len();
            for (p, &y) in rot.iter().enumerate() {
                if t.is_outer_vertex(y) {
                    continue;
                }
                if self.is_directed(x, y) {
                    // Incoming at y with the color of x -> y.
                    let c = Color::ALL.into_iter().find(|c| parent[x][c.index()] == y).unwrap();
                    let ry = t.rotation(y);
                    let q = t.position(y, x).unwrap();
                    let after = (1..ry.len()).map(|s| ry[(q + s) % ry.len()]).find(|&h| self.is_directed(y, h));
                    let Some(h) = after else {
                        return Err(RealizerError::NoColoring(format!("vertex {y} has no outgoing edge")));
                    };
                    assign(y, h, c.shift(2), &mut parent, &mut queue)?;
                } else {
                    // y -> x lies between outgoing a and a + 1 of x; its color is a + 2.
                    let before = (1..d).map(|s| rot[(p + d - s) % d]).find(|&h| self.is_directed(x, h)).unwrap();
                    let a = Color::ALL.into_iter().find(|c| parent[x][c.index()] == before).unwrap();
                    assign(y, x, a.shift(2), &mut parent, &mut queue)?;
                }
            }
        }
        if let Some(u) = t.interior_vertices().find(|&u| parent[u][0] == NONE) {
            return Err(RealizerError::NoColoring(format!("vertex {u} unreachable")));
        }
        let r = Realizer { base: t.clone(), parent };
        r.validate()?;
        Ok(r)
    }
}

pub fn from_3_orientation(o: &Orientation3) -> Result<Realizer, RealizerError> {
    o.to_realizer()
}

/// Schnyder's construction by peeling a canonical ordering from `r2` down to
/// the edge `r0 r1`. Among removable boundary vertices the smallest id goes
/// first. The removed vertex points to its left boundary neighbour in color
/// 0 and its right one in color 1; the vertices it uncovers point to it in
/// color 2.
pub fn compute_realizer(t: &Triangulation) -> Realizer {
    let n = t.n();
    let [r0, r1, r2] = t.outer();
    let mut prev = vec![NONE; n];
    let mut next = vec![NONE; n];
    let mut on = vec![false; n];
    let mut removed = vec![false; n];
    let mut chords = vec![0usize; n];
    next[r0] = r2;
    prev[r2] = r0;
    next[r2] = r1;
    prev[r1] = r2;
    on[r0] = true;
    on[r1] = true;
    on[r2] = true;
    let mut parent = vec![[NONE; 3]; n];
    let mut candidates = BTreeSet::from([r2]);
    let is_chord = |a: usize, b: usize, prev: &[usize], next: &[usize]| {
        !(prev[a] == b || next[a] == b || (a == r0 && b == r1) || (a == r1 && b == r0))
    };
    while let Some(v) = candidates.pop_first() {
        if !on[v] || removed[v] || chords[v] != 0 || v == r0 || v == r1 {
            continue;
        }
        let (l, r) = (prev[v], next[v]);
        let rot = t.rotation(v);
        let k = t.position(v, l).unwrap();
        let mut xs = Vec::new();
        for s in 1..rot.len() {
            let y = rot[(k + s) % rot.len()];
            if y == r {
                break;
            }
            if !removed[y] {
                xs.push(y);
            }
        }
        removed[v] = true;
        on[v] = false;
        if !t.is_outer_vertex(v) {
            parent[v][0] = l;
            parent[v][1] = r;
        }
        for &x in &xs {
            parent[x][2] = v;
        }
        let mut last = l;
        for &x in &xs {
            next[last] = x;
            prev[x] = last;
            last = x;
        }
        next[last] = r;
        prev[r] = last;
        if xs.is_empty() && !t.is_outer_edge(l, r) {
            // The chord l-r just became a boundary edge.
            chords[l] -= 1;
            chords[r] -= 1;
            for y in [l, r] {
                if chords[y] == 0 {
                    candidates.insert(y);
                }
            }
        }
        for &x in &xs {
            on[x] = true;
            for &y in t.rotation(x) {
                if on[y] && is_chord(x, y, &prev, &next) {
                    chords[x] += 1;
                    chords[y] += 1;
                }
            }
        }
        for &x in &xs {
            if chords[x] == 0 {
                candidates.insert(x);
            }
        }
    }
    let r = Realizer { base: t.clone(), parent };
    debug_assert!(r.validate().is_ok(), "{:?}", r.validate());
    r
}

/// Checks the weak barycentric condition: for each edge `uv` and vertex `w`
/// off it there is an `i` with `(u_i, u_{i+1})` and `(v_i, v_{i+1})` both
/// lexicographically below `(w_i, w_{i+1})`. Returns the first failing triple.
pub fn lexicographic_violation(t: &Triangulation, coords: &[RegionVector]) -> Option<(usize, usize, usize)> {
    let key = |x: usize, i: usize| (coords[x].0[i], coords[x].0[(i + 1) % 3]);
    for (u, v) in t.edges() {
        for w in 0..t.n() {
            if w == u || w == v {
                continue;
            }
            let ok = (0..3).any(|i| key(u, i) < key(w, i) && key(v, i) < key(w, i));
            if !ok {
                return Some((u, v, w));
            }
        }
    }
    None
}

impl fmt::Display for Realizer {
    /// Writes the `.real` format with the triangulation inlined.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tri inline")?;
        write!(f, "{}", self.base)?;
        for (a, b, c) in self.edges() {
            writeln!(f, "edge {a} {b} {c}")?;
        }
        Ok(())
    }
}

/// Parsed contents of a `.real` file before validation.
pub struct RealFile {
    pub base: Triangulation,
    pub edges: Vec<(usize, usize, Color)>,
}

impl RealFile {
    /// Parses a `.real` file. `tri <path>` headers are resolved with `load`.
    pub fn parse_with<F>(text: &str, load: F) -> Result<Self, RealizerError>
    where
        F: FnOnce(&str) -> Result<String, String>,
    {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: String| RealizerError::Parse { line, msg };
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
        let src = header.strip_prefix("tri").map(str::trim).ok_or_else(|| perr(hl, "expected `tri <path-or-inline>`".into()))?;
        let mut inline = TriReader::default();
        let mut edges = Vec::new();
        for (no, line) in lines {
            if let Some(rest) = line.strip_prefix("edge ") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(perr(no, format!("expected `edge <u> <v> <color>`, got {line:?}")));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|_| perr(no, format!("bad number {s:?}")));
                let (a, b, c) = (num(toks[0])?, num(toks[1])?, num(toks[2])?);
                let c = Color::new(c).ok_or_else(|| perr(no, format!("color {c} not in 0..3")))?;
                edges.push((a, b, c));
            } else if src == "inline" {
                if !inline.feed(no, line)? {
                    return Err(perr(no, format!("unknown keyword in {line:?}")));
                }
            } else {
                return Err(perr(no, format!("unexpected line {line:?}")));
            }
        }
        let base = if src == "inline" {
            inline.finish()?
        } else {
            let text = load(src).map_err(|e| perr(hl, format!("cannot read {src}: {e}")))?;
            text.parse()?
        };
        Ok(RealFile { base, edges })
    }

    pub fn into_realizer(self) -> Result<Realizer, RealizerError> {
        Realizer::from_edges(self.base, &self.edges)
    }
}

impl std::str::FromStr for Realizer {
    type Err = RealizerError;

    /// Parses a `.real` file whose triangulation is inlined.
    fn from_str(text: &str) -> Result<Self, RealizerError> {
        RealFile::parse_with(text, |p| Err(format!("external triangulation {p} not supported here")))?.into_realizer()
    }
}
