//! Dynamic rooted forest with two additive costs per vertex.
//!
//! Each tree is kept as its Euler tour, one open token `2v` and one close
//! token `2v + 1` per vertex, stored in a splay tree keyed by position. A
//! subtree is the contiguous range between its root's two tokens, so
//! link, cut and subtree-wide cost updates are splits and joins. Giving open
//! tokens weight `+1` and close tokens `-1`, prefix sums are depths and the
//! lowest common ancestor of `a` and `b` is read off the minimum prefix sum
//! between their open tokens.
//!
//! Costs are stored as differences: the cost of a token is the sum of the
//! stored values on its splay path up to the root. Adding to a whole splay
//! subtree is then a single update, with no lazy tags to push.
//!
//! Every operation is `O(log n)` amortized.

use thiserror::Error;

const NIL: usize = usize::MAX;
const NO: u32 = u32::MAX;

type Cost = [i64; 2];

fn plus(a: Cost, b: Cost) -> Cost {
    [a[0] + b[0], a[1] + b[1]]
}

fn minus(a: Cost, b: Cost) -> Cost {
    [a[0] - b[0], a[1] - b[1]]
}

/// One token. `r` and `d` are stored relative to the splay parent; depth
/// differences never exceed the vertex count, so `d` fits in 32 bits.
#[derive(Clone, Copy, Debug)]
struct Node {
    ch: [u32; 2],
    up: u32,
    sum: i32,
    min_prefix: i32,
    d: i32,
    r: i64,
}

impl Node {
    fn cost(&self) -> Cost {
        [self.r, i64::from(self.d)]
    }

    fn set_cost(&mut self, c: Cost) {
        self.r = c[0];
        self.d = i32::try_from(c[1]).expect("depth fits in 32 bits");
    }
}

/// The open and close tokens of one vertex, sharing a cache line.
#[derive(Clone, Copy, Debug)]
#[repr(align(64))]
struct Pair([Node; 2]);

/// Token storage indexed by token id.
#[derive(Clone, Debug)]
struct Tokens(Vec<Pair>);

impl std::ops::Index<usize> for Tokens {
    type Output = Node;

    fn index(&self, t: usize) -> &Node {
        &self.0[t >> 1].0[t & 1]
    }
}

impl std::ops::IndexMut<usize> for Tokens {
    fn index_mut(&mut self, t: usize) -> &mut Node {
        &mut self.0[t >> 1].0[t & 1]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("{0} already has a parent")]
    NotARoot(usize),
    #[error("linking {child} under {parent} would close a cycle")]
    Cycle { child: usize, parent: usize },
    #[error("{0} is a root and cannot be cut")]
    IsRoot(usize),
}

#[derive(Clone, Debug)]
pub struct DynForest {
    parent: Vec<usize>,
    nodes: Tokens,
    /// Reads deeper than this splay, which keeps them amortized `O(log n)`.
    deep: usize,
}

fn weight(tok: usize) -> i32 {
    if tok.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn idx(x: u32) -> usize {
    if x == NO {
        NIL
    } else {
        x as usize
    }
}

impl DynForest {
    /// `n` isolated vertices with zero costs.
    pub fn new(n: usize) -> Self {
        assert!(2 * n < i32::MAX as usize, "too many vertices");
        let token = |t: usize| Node { ch: [NO; 2], up: NO, sum: weight(t), min_prefix: weight(t), d: 0, r: 0 };
        let nodes = Tokens((0..n).map(|v| Pair([token(2 * v), token(2 * v + 1)])).collect());
        let deep = 2 * (usize::BITS - (2 * n).leading_zeros()) as usize;
        let mut f = DynForest { parent: vec![NIL; n], nodes, deep };
        for v in 0..n {
            f.hang(2 * v, 1, 2 * v + 1);
        }
        f
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn check(&self, v: usize) -> Result<(), ForestError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(ForestError::OutOfRange(v))
        }
    }

    fn child(&self, x: usize, side: usize) -> usize {
        idx(self.nodes[x].ch[side])
    }

    fn up(&self, x: usize) -> usize {
        idx(self.nodes[x].up)
    }

    fn link_nodes(&mut self, x: usize, side: usize, c: usize) {
        self.nodes[x].ch[side] = if c == NIL { NO } else { c as u32 };
        if c != NIL {
            self.nodes[c].up = x as u32;
        }
    }

    fn shift(&mut self, x: usize, by: Cost) {
        if x != NIL {
            let n = &mut self.nodes[x];
            n.set_cost(plus(n.cost(), by));
        }
    }

    fn pull(&mut self, x: usize) {
        let [a, b] = self.nodes[x].ch.map(idx);
        let w = weight(x);
        let (mut sum, mut best) = (w, w);
        if a != NIL {
            let l = &self.nodes[a];
            sum = l.sum + w;
            best = l.min_prefix.min(sum);
        }
        if b != NIL {
            let rn = &self.nodes[b];
            best = best.min(sum + rn.min_prefix);
            sum += rn.sum;
        }
        let n = &mut self.nodes[x];
        n.sum = sum;
        n.min_prefix = best;
    }

    /// Detaches the `side` child of splay root `x` as a tree of its own.
    fn unhang(&mut self, x: usize, side: usize) -> usize {
        let c = self.child(x, side);
        if c != NIL {
            self.nodes[c].up = NO;
            self.nodes[x].ch[side] = NO;
            self.shift(c, self.nodes[x].cost());
            self.pull(x);
        }
        c
    }

    /// Hangs splay root `c` as the (empty) `side` child of splay root `x`.
    fn hang(&mut self, x: usize, side: usize, c: usize) {
        if c != NIL {
            self.shift(c, minus([0; 2], self.nodes[x].cost()));
        }
        self.link_nodes(x, side, c);
        self.pull(x);
    }

    fn rotate(&mut self, x: usize) {
        let p = self.up(x);
        let g = self.up(p);
        let dir = usize::from(self.child(p, 1) == x);
        let b = self.child(x, dir ^ 1);
        let (cx, cp) = (self.nodes[x].cost(), self.nodes[p].cost());
        self.nodes[x].set_cost(plus(cp, cx));
        self.nodes[p].set_cost(minus([0; 2], cx));
        self.shift(b, cx);
        self.link_nodes(p, dir, b);
        self.link_nodes(x, dir ^ 1, p);
        self.nodes[x].up = if g == NIL { NO } else { g as u32 };
        if g != NIL {
            let side = usize::from(self.child(g, 1) == p);
            self.nodes[g].ch[side] = x as u32;
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: usize) {
        self.splay_under(x, NIL);
    }

    /// Splays `x` up until its parent is `top`, an ancestor of `x` or `NIL`.
    fn splay_under(&mut self, x: usize, top: usize) {
        while self.up(x) != top {
            let p = self.up(x);
            let g = self.up(p);
            if g != top {
                let zigzig = (self.child(g, 0) == p) == (self.child(p, 0) == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    /// Splays `a` to the root and `b`, from the same tree, right below it.
    /// Returns whether `a` comes first in the tour.
    fn bracket(&mut self, a: usize, b: usize) -> bool {
        self.splay(a);
        self.splay_under(b, a);
        self.child(a, 1) == b
    }

    fn extreme(&mut self, x: usize, side: usize) -> usize {
        self.splay(x);
        let mut y = x;
        while self.child(y, side) != NIL {
            y = self.child(y, side);
        }
        self.splay(y);
        y
    }

    fn join(&mut self, a: usize, b: usize) -> usize {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let m = self.extreme(a, 1);
        self.hang(m, 1, b);
        m
    }

    /// Root of the tree containing `v`.
    pub fn root(&mut self, v: usize) -> usize {
        self.extreme(2 * v, 0) / 2
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = *self.parent.get(v)?;
        (p != NIL).then_some(p)
    }

    /// Makes root `c` a child of `p`.
    pub fn link(&mut self, c: usize, p: usize) -> Result<(), ForestError> {
        self.check(c)?;
        self.check(p)?;
        if self.parent[c] != NIL {
            return Err(ForestError::NotARoot(c));
        }
        if self.root(p) == c {
            return Err(ForestError::Cycle { child: c, parent: p });
        }
        self.splay(2 * c);
        self.attach(c, 2 * c, p);
        Ok(())
    }

    /// Splices the tour of root `c`, whose splay root is `top`, in right
    /// after the open token of `p`.
    fn attach(&mut self, c: usize, top: usize, p: usize) {
        self.splay(2 * p);
        let right = self.unhang(2 * p, 1);
        self.hang(2 * p, 1, top);
        if right != NIL {
            let close = 2 * c + 1;
            self.splay(close);
            self.hang(close, 1, right);
        }
        self.parent[c] = p;
    }

    /// Detaches `c` (with its subtree) from its parent.
    pub fn cut(&mut self, c: usize) -> Result<(), ForestError> {
        self.check(c)?;
        if self.parent[c] == NIL {
            return Err(ForestError::IsRoot(c));
        }
        self.detach(c);
        Ok(())
    }

    /// Cuts `c` off and returns the splay root of its tour.
    fn detach(&mut self, c: usize) -> usize {
        self.splay(2 * c);
        let before = self.unhang(2 * c, 0);
        self.splay(2 * c + 1);
        let after = self.unhang(2 * c + 1, 1);
        self.join(before, after);
        self.parent[c] = NIL;
        2 * c + 1
    }

    /// Moves non-root `c` under `p` and adds `(dr, dd)` to its whole
    /// subtree. The caller guarantees `p` is not in the subtree of `c`.
    pub(crate) fn reparent_add(&mut self, c: usize, p: usize, dr: i64, dd: i64) {
        debug_assert!(self.parent[c] != NIL);
        let top = self.detach(c);
        self.shift(top, [dr, dd]);
        debug_assert!(self.root(p) != c, "reparenting {c} under its own descendant {p}");
        self.attach(c, top, p);
    }

    /// Adds `(dr, dd)` to the costs of every vertex in the subtree of `s`.
    pub fn subtree_add(&mut self, s: usize, dr: i64, dd: i64) -> Result<(), ForestError> {
        self.check(s)?;
        let (open, close) = (2 * s, 2 * s + 1);
        self.bracket(open, close);
        let by = [dr, dd];
        let back = minus([0; 2], by);
        self.shift(open, by);
        self.shift(self.child(open, 0), back);
        self.shift(self.child(close, 1), back);
        Ok(())
    }

    /// Overwrites both costs of `v` alone.
    pub fn set_costs(&mut self, v: usize, r: i64, d: i64) -> Result<(), ForestError> {
        self.check(v)?;
        let x = 2 * v;
        self.splay(x);
        let delta = minus([r, d], self.nodes[x].cost());
        self.nodes[x].set_cost([r, d]);
        let back = minus([0; 2], delta);
        self.shift(self.child(x, 0), back);
        self.shift(self.child(x, 1), back);
        Ok(())
    }

    /// Both costs `(r, d)` of `v`.
    ///
    /// Reads by summing up the splay path and only splays when that path is
    /// long, so that shallow reads write nothing.
    pub fn costs(&mut self, v: usize) -> (i64, i64) {
        let x = 2 * v;
        let mut total = self.nodes[x].cost();
        let mut depth = 0;
        let mut y = self.up(x);
        while y != NIL {
            total = plus(total, self.nodes[y].cost());
            depth += 1;
            y = self.up(y);
        }
        if depth > self.deep {
            self.splay(x);
        }
        (total[0], total[1])
    }

    /// Like [`DynForest::costs`] but always splays `v` to the top, for
    /// callers about to restructure around `v`.
    pub(crate) fn costs_splayed(&mut self, v: usize) -> (i64, i64) {
        self.splay(2 * v);
        let [r, d] = self.nodes[2 * v].cost();
        (r, d)
    }

    pub fn get_r(&mut self, v: usize) -> i64 {
        self.costs(v).0
    }

    pub fn get_d(&mut self, v: usize) -> i64 {
        self.costs(v).1
    }

    /// Lowest common ancestor, or `None` if `u` and `v` are in different trees.
    pub fn lca(&mut self, u: usize, v: usize) -> Option<usize> {
        if u >= self.len() || v >= self.len() {
            return None;
        }
        if u == v {
            return Some(u);
        }
        if self.root(u) != self.root(v) {
            return None;
        }
        let (first, last, inner) = if self.bracket(2 * u, 2 * v) {
            (2 * u, 2 * v, self.child(2 * v, 0))
        } else {
            (2 * v, 2 * u, self.child(2 * v, 1))
        };
        // Prefix sums restart at 1 right after `first`.
        let (mut best, mut tok, mut acc) = (1, first, 1);
        if inner != NIL {
            let m = self.nodes[inner];
            if acc + m.min_prefix < best {
                best = acc + m.min_prefix;
                tok = self.descend_to_min(inner, m.min_prefix);
            }
            acc += m.sum;
        }
        if acc + 1 < best {
            tok = last;
        }
        let x = tok / 2;
        let found = if tok % 2 == 0 { x } else { self.parent[x] };
        self.splay(tok);
        Some(found)
    }

    /// First token in the splay subtree of `y` whose prefix sum, counted
    /// from the start of that subtree, equals `target`.
    fn descend_to_min(&self, mut y: usize, target: i32) -> usize {
        let mut base = 0;
        loop {
            let l = self.child(y, 0);
            if l != NIL {
                if base + self.nodes[l].min_prefix == target {
                    y = l;
                    continue;
                }
                base += self.nodes[l].sum;
            }
            base += weight(y);
            if base == target {
                return y;
            }
            y = self.child(y, 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Arrays and tree walks; `O(n)` per operation.
    #[derive(Clone, Debug)]
    struct Naive {
        parent: Vec<usize>,
        r: Vec<i64>,
        d: Vec<i64>,
    }

    impl Naive {
        fn new(n: usize) -> Self {
            Naive { parent: vec![NIL; n], r: vec![0; n], d: vec![0; n] }
        }

        fn root(&self, mut v: usize) -> usize {
            while self.parent[v] != NIL {
                v = self.parent[v];
            }
            v
        }

        fn ancestors(&self, mut v: usize) -> Vec<usize> {
            let mut out = vec![v];
            while self.parent[v] != NIL {
                v = self.parent[v];
                out.push(v);
            }
            out
        }

        fn link(&mut self, c: usize, p: usize) -> Result<(), ForestError> {
            if self.parent[c] != NIL {
                return Err(ForestError::NotARoot(c));
            }
            if self.root(p) == c {
                return Err(ForestError::Cycle { child: c, parent: p });
            }
            self.parent[c] = p;
            Ok(())
        }

        fn cut(&mut self, c: usize) -> Result<(), ForestError> {
            if self.parent[c] == NIL {
                return Err(ForestError::IsRoot(c));
            }
            self.parent[c] = NIL;
            Ok(())
        }

        fn subtree_add(&mut self, s: usize, dr: i64, dd: i64) {
            for v in 0..self.parent.len() {
                if self.ancestors(v).contains(&s) {
                    self.r[v] += dr;
                    self.d[v] += dd;
                }
            }
        }

        fn lca(&self, u: usize, v: usize) -> Option<usize> {
            let au = self.ancestors(u);
            self.ancestors(v).into_iter().find(|x| au.contains(x))
        }
    }

    #[test]
    fn chain_examples() {
        let mut f = DynForest::new(3);
        assert_eq!(f.parent(0), None);
        f.link(1, 0).unwrap();
        assert_eq!(f.parent(1), Some(0));
        assert_eq!(f.link(1, 2), Err(ForestError::NotARoot(1)));
        assert_eq!(f.link(0, 1), Err(ForestError::Cycle { child: 0, parent: 1 }));
        f.link(2, 1).unwrap();
        f.subtree_add(1, 5, 1).unwrap();
        assert_eq!((f.get_r(0), f.get_r(1), f.get_r(2)), (0, 5, 5));
        f.subtree_add(2, 0, 0).unwrap();
        assert_eq!(f.get_r(2), 5);
        assert_eq!(f.lca(2, 0), Some(0));
        assert_eq!(f.lca(2, 1), Some(1));
        f.cut(1).unwrap();
        assert_eq!(f.parent(1), None);
        assert_eq!(f.parent(2), Some(1));
        assert_eq!(f.lca(2, 0), None);
        assert_eq!(f.cut(0), Err(ForestError::IsRoot(0)));
    }

    #[test]
    fn depth_costs_and_siblings() {
        let mut f = DynForest::new(6);
        for (c, p) in [(1, 0), (2, 0), (3, 1), (4, 1), (5, 2)] {
            f.link(c, p).unwrap();
        }
        for v in 0..6 {
            let depth = [0, 1, 1, 2, 2, 2][v];
            f.set_costs(v, 0, depth).unwrap();
        }
        assert_eq!(f.get_d(4), 2);
        assert_eq!(f.lca(3, 4), Some(1));
        assert_eq!(f.lca(4, 5), Some(0));
        assert_eq!(f.lca(5, 3), Some(0));
        assert_eq!(f.root(5), 0);
    }

    #[derive(Clone, Debug)]
    enum Op {
        Link(usize, usize),
        Cut(usize),
        Add(usize, i64, i64),
        Query(usize, usize),
    }

    fn op(n: usize) -> impl Strategy<Value = Op> {
        prop_oneof![
            (0..n, 0..n).prop_map(|(a, b)| Op::Link(a, b)),
            (0..n).prop_map(Op::Cut),
            (0..n, -5i64..5, -2i64..3).prop_map(|(s, r, d)| Op::Add(s, r, d)),
            (0..n, 0..n).prop_map(|(a, b)| Op::Query(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn matches_naive(ops in proptest::collection::vec(op(12), 1..300)) {
            let mut f = DynForest::new(12);
            let mut g = Naive::new(12);
            for o in ops {
                match o {
                    Op::Link(c, p) if c != p => prop_assert_eq!(f.link(c, p), g.link(c, p)),
                    Op::Link(..) => {}
                    Op::Cut(c) => prop_assert_eq!(f.cut(c), g.cut(c)),
                    Op::Add(s, r, d) => {
                        f.subtree_add(s, r, d).unwrap();
                        g.subtree_add(s, r, d);
                    }
                    Op::Query(a, b) => {
                        prop_assert_eq!(f.lca(a, b), g.lca(a, b));
                        prop_assert_eq!(f.get_r(a), g.r[a]);
                        prop_assert_eq!(f.get_d(b), g.d[b]);
                        prop_assert_eq!(f.parent(a), g.parent.get(a).copied().filter(|&p| p != NIL));
                        prop_assert_eq!(f.root(a), g.root(a));
                    }
                }
            }
        }
    }
}
