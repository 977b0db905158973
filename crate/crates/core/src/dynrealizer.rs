//! A realizer under colored flips with logarithmic-time coordinate queries.
//!
//! Each tree `T_i` lives in a [`DynForest`]. The forest of color `i` carries
//! two costs per vertex: `d`, the depth in `T_i`, and `r`, the net amount
//! flips have moved from coordinate `i + 1` to coordinate `i - 1`. A
//! coordinate is its initial value corrected by two of these costs:
//!
//! `N_k(u) = init_k(u) + r_{k+1}(u) - r_{k-1}(u)`.
//!
//! A flip moves `u` in `T_i` and `w` in `T_j`, and every vertex below them
//! sees its regions change by one amount each, given by [`flip_deltas`].

use thiserror::Error;

use crate::dynforest::DynForest;
use crate::flips::{ColoredFlipOp, FlipError, FlipKind};
use crate::realizer::{Color, EdgeKind, Realizer, RegionVector, Violation, Wood};
use crate::triangulation::Triangulation;

#[derive(Debug, Error)]
pub enum DynError {
    #[error("not a realizer: {0}")]
    Invalid(#[from] Violation),
    #[error("{0}-{1} is not an interior edge")]
    NotInterior(usize, usize),
    #[error("{found} is the opposite apex of {u}->{v}, not {z}")]
    WrongApex { u: usize, v: usize, z: usize, found: usize },
    #[error(transparent)]
    Flip(#[from] FlipError),
}

/// Region changes caused by `op`, from region sizes taken before it.
///
/// Returns `(c(u), c(w))`. Every vertex in the subtree of `u` in `T_i`
/// gains `c(u)` in coordinate `i - 1` and loses it in `i + 1`; the subtree of
/// `w` in `T_j` does the same with `c(w)` in coordinates `j - 1` and `j + 1`.
/// `u_to_z` says whether `u -> z` is an edge (otherwise `z -> u` is), and
/// `size(x, k)` is `|R_k(x)|`; only the entries the formula needs are read.
pub fn flip_deltas(op: &ColoredFlipOp, u_to_z: bool, mut size: impl FnMut(usize, Color) -> i64) -> (i64, i64) {
    let i = op.i;
    match op.kind {
        FlipKind::F1 => {
            let cu = size(op.u, i.succ()) - size(op.w, i.succ()) + 1;
            let cw = if u_to_z { -1 } else { size(op.u, i) - size(op.z, i) };
            (cu, cw)
        }
        FlipKind::F2 => {
            let cu = size(op.w, i.pred()) - size(op.u, i.pred()) + 1;
            let cw = if u_to_z { 0 } else { size(op.z, i) - size(op.u, i) + 1 };
            (cu, cw)
        }
    }
}

#[derive(Clone, Debug)]
pub struct DynRealizer {
    tri: Triangulation,
    parent: Vec<[usize; 3]>,
    init: Vec<[i64; 3]>,
    forests: [DynForest; 3],
}

impl Wood for DynRealizer {
    fn base(&self) -> &Triangulation {
        &self.tri
    }

    fn parent(&self, c: Color, u: usize) -> Option<usize> {
        let p = self.parent[u][c.index()];
        (p != usize::MAX).then_some(p)
    }
}

impl DynRealizer {
    pub fn build(r: &Realizer) -> Result<Self, DynError> {
        r.validate()?;
        let n = r.n();
        let init = r.barycentric_linear().into_iter().map(|v| v.0.map(|x| x as i64)).collect();
        let depths = r.depths();
        let mut forests = [DynForest::new(n), DynForest::new(n), DynForest::new(n)];
        let mut parent = vec![[usize::MAX; 3]; n];
        for c in Color::ALL {
            let f = &mut forests[c.index()];
            for u in 0..n {
                f.set_costs(u, 0, depths[u][c.index()] as i64).expect("vertex in range");
                if let Some(p) = r.parent_of(u, c) {
                    parent[u][c.index()] = p;
                    f.link(u, p).expect("trees of a valid realizer");
                }
            }
        }
        Ok(DynRealizer { tri: r.triangulation().clone(), parent, init, forests })
    }

    pub fn n(&self) -> usize {
        self.tri.n()
    }

    /// Color of the interior edge `u v`.
    pub fn label(&self, u: usize, v: usize) -> Result<Color, DynError> {
        match self.edge_kind(u, v) {
            Some(EdgeKind::Out(c) | EdgeKind::In(c)) => Ok(c),
            _ => Err(DynError::NotInterior(u, v)),
        }
    }

    /// The interior edge `u v` as `(tail, head)`.
    pub fn orientation(&self, u: usize, v: usize) -> Result<(usize, usize), DynError> {
        match self.edge_kind(u, v) {
            Some(EdgeKind::Out(_)) => Ok((u, v)),
            Some(EdgeKind::In(_)) => Ok((v, u)),
            _ => Err(DynError::NotInterior(u, v)),
        }
    }

    /// Region sizes of `u`, i.e. its barycentric numerators over `n - 1`.
    pub fn coordinates(&mut self, u: usize) -> RegionVector {
        let r = [0, 1, 2].map(|c| self.forests[c].get_r(u));
        RegionVector([0, 1, 2].map(|k| {
            let x = self.init[u][k] + r[(k + 1) % 3] - r[(k + 2) % 3];
            usize::try_from(x).expect("coordinates stay non-negative")
        }))
    }

    /// Depth of `u` in `T_i`.
    pub fn depth(&mut self, i: Color, u: usize) -> i64 {
        self.forests[i.index()].get_d(u)
    }

    /// Lowest common ancestor in `T_i`; `None` if either vertex is not in `T_i`.
    pub fn least_common(&mut self, i: Color, u: usize, v: usize) -> Option<usize> {
        let outside = |x: usize| self.tri.root_index(x).is_some_and(|k| k != i.index());
        if outside(u) || outside(v) {
            return None;
        }
        self.forests[i.index()].lca(u, v)
    }

    /// Flips `u -> v` using the support edge from apex `w`; `z` must be the
    /// other apex. Returns the applied flip.
    pub fn flip(&mut self, u: usize, v: usize, w: usize, z: usize) -> Result<ColoredFlipOp, DynError> {
        let op = ColoredFlipOp::resolve(self, u, v, w)?;
        if op.z != z {
            return Err(DynError::WrongApex { u, v, z, found: op.z });
        }
        self.apply(&op)?;
        Ok(op)
    }

    /// Applies a colored flip after checking it against the current state.
    ///
    /// The check reads labels and the quadrilateral only: a support edge
    /// into `u` together with a flippable diagonal always yields a realizer.
    pub fn apply(&mut self, op: &ColoredFlipOp) -> Result<(), DynError> {
        if ColoredFlipOp::resolve(self, op.u, op.v, op.w)? != *op {
            return Err(FlipError::Stale(*op).into());
        }
        let (i, j) = (op.i.index(), op.j().index());
        let u_to_z = self.is_directed(op.u, op.z);
        let quad = [op.u, op.w, op.z];
        let mut seen = [[None::<(i64, i64)>; 3]; 3];
        let forests = &mut self.forests;
        let mut costs = |k: usize, x: usize| -> (i64, i64) {
            let slot = quad.iter().position(|&q| q == x).expect("quadrilateral vertex");
            *seen[k][slot].get_or_insert_with(|| forests[k].costs_splayed(x))
        };
        let init = &self.init;
        let (cu, cw) = flip_deltas(op, u_to_z, |x, k| init[x][k.index()] + costs(k.succ().index(), x).0 - costs(k.pred().index(), x).0);
        let du = costs(i, op.w).1 - costs(i, op.u).1 + 1;
        let dw = costs(j, op.z).1 - costs(j, op.w).1 + 1;

        self.forests[i].reparent_add(op.u, op.w, cu, du);
        self.forests[j].reparent_add(op.w, op.z, cw, dw);

        self.tri.flip_in_place(op.u, op.v).map_err(FlipError::from)?;
        self.parent[op.u][i] = op.w;
        self.parent[op.w][j] = op.z;
        Ok(())
    }

    /// The current state as a static realizer.
    pub fn snapshot(&self) -> Realizer {
        Realizer::from_parts(self.tri.clone(), self.parent.clone())
    }
}
