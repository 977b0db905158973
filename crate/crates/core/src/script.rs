//! Flip scripts: one flip or query per line.
//!
//! ```text
//! cflip u v w z        colored flip of u->v with apex w, other apex z
//! fflip a b c          flip the directed face a->b->c
//! cyflip v1 v2 ... vk  flip the directed cycle v1->v2->...->vk
//! coords u             region sizes of u
//! label u v            color of the interior edge uv
//! lca i u v            lowest common ancestor in tree i
//! depth i u            depth of u in tree i
//! ```
//!
//! `#` starts a comment. A script runs against any [`Engine`]; the static
//! realizer and the dynamic one answer queries with identical lines.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dynrealizer::DynRealizer;
use crate::flips::{apply_colored_flip, cycle_flip, cycle_flip_as_colored, face_flip_as_colored, ColoredFlipOp, DirectedCycle, FlipError};
use crate::realizer::{Color, Realizer, RegionVector, Wood};
use crate::triangulation::strip_comment;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Colored { u: usize, v: usize, w: usize, z: usize },
    Face([usize; 3]),
    Cycle(Vec<usize>),
    Coords(usize),
    Label(usize, usize),
    Lca(Color, usize, usize),
    Depth(Color, usize),
}

impl Step {
    pub fn is_flip(&self) -> bool {
        matches!(self, Step::Colored { .. } | Step::Face(_) | Step::Cycle(_))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Colored { u, v, w, z } => write!(f, "cflip {u} {v} {w} {z}"),
            Step::Face([a, b, c]) => write!(f, "fflip {a} {b} {c}"),
            Step::Cycle(vs) => {
                f.write_str("cyflip")?;
                vs.iter().try_for_each(|v| write!(f, " {v}"))
            }
            Step::Coords(u) => write!(f, "coords {u}"),
            Step::Label(u, v) => write!(f, "label {u} {v}"),
            Step::Lca(c, u, v) => write!(f, "lca {c} {u} {v}"),
            Step::Depth(c, u) => write!(f, "depth {c} {u}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: `{step}` failed: {msg}")]
    Step { line: usize, step: String, msg: String },
}

/// Parsed script; each step keeps its 1-based source line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub steps: Vec<(usize, Step)>,
}

fn parse_step(words: &[&str]) -> Result<Step, String> {
    let nums = |k: usize| -> Result<Vec<usize>, String> {
        let args = &words[1..];
        if k != usize::MAX && args.len() != k {
            return Err(format!("`{}` takes {k} arguments, got {}", words[0], args.len()));
        }
        args.iter().map(|a| a.parse::<usize>().map_err(|_| format!("not a vertex: {a}"))).collect()
    };
    let color = |x: usize| Color::new(x).ok_or_else(|| format!("not a color: {x}"));
    Ok(match words[0] {
        "cflip" => {
            let a = nums(4)?;
            Step::Colored { u: a[0], v: a[1], w: a[2], z: a[3] }
        }
        "fflip" => {
            let a = nums(3)?;
            Step::Face([a[0], a[1], a[2]])
        }
        "cyflip" => {
            let a = nums(usize::MAX)?;
            if a.len() < 3 {
                return Err("a cycle needs at least 3 vertices".into());
            }
            Step::Cycle(a)
        }
        "coords" => Step::Coords(nums(1)?[0]),
        "label" => {
            let a = nums(2)?;
            Step::Label(a[0], a[1])
        }
        "lca" => {
            let a = nums(3)?;
            Step::Lca(color(a[0])?, a[1], a[2])
        }
        "depth" => {
            let a = nums(2)?;
            Step::Depth(color(a[0])?, a[1])
        }
        other => return Err(format!("unknown command `{other}`")),
    })
}

impl FromStr for Script {
    type Err = ScriptError;

    fn from_str(text: &str) -> Result<Self, ScriptError> {
        let mut steps = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let words: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            let step = parse_step(&words).map_err(|msg| ScriptError::Parse { line: k + 1, msg })?;
            steps.push((k + 1, step));
        }
        Ok(Script { steps })
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.steps.iter().try_for_each(|(_, s)| writeln!(f, "{s}"))
    }
}

impl Script {
    pub fn from_ops(ops: &[ColoredFlipOp]) -> Script {
        let steps = ops.iter().enumerate().map(|(k, op)| (k + 1, Step::Colored { u: op.u, v: op.v, w: op.w, z: op.z })).collect();
        Script { steps }
    }

    pub fn flip_count(&self) -> usize {
        self.steps.iter().filter(|(_, s)| s.is_flip()).count()
    }

    /// Runs every step, returning one output line per query.
    pub fn run<E: Engine + ?Sized>(&self, engine: &mut E) -> Result<Vec<String>, ScriptError> {
        let mut out = Vec::new();
        for (line, step) in &self.steps {
            let fail = |msg: String| ScriptError::Step { line: *line, step: step.to_string(), msg };
            let answer = match step {
                Step::Colored { u, v, w, z } => {
                    engine.colored(*u, *v, *w, *z).map_err(fail)?;
                    continue;
                }
                Step::Face(f) => {
                    engine.cycle(f.to_vec(), true).map_err(fail)?;
                    continue;
                }
                Step::Cycle(vs) => {
                    engine.cycle(vs.clone(), false).map_err(fail)?;
                    continue;
                }
                Step::Coords(u) => {
                    check_vertex(engine, *u).map_err(fail)?;
                    let RegionVector([a, b, c]) = engine.coords(*u);
                    format!("{a} {b} {c}")
                }
                Step::Label(u, v) => show(engine.label(*u, *v)),
                Step::Lca(c, u, v) => {
                    check_vertex(engine, *u).map_err(fail)?;
                    check_vertex(engine, *v).map_err(fail)?;
                    show(engine.lca(*c, *u, *v))
                }
                Step::Depth(c, u) => {
                    check_vertex(engine, *u).map_err(fail)?;
                    show(engine.depth(*c, *u))
                }
            };
            out.push(format!("{step} = {answer}"));
        }
        Ok(out)
    }
}

fn check_vertex<E: Engine + ?Sized>(e: &E, u: usize) -> Result<(), String> {
    if u < e.vertex_count() {
        Ok(())
    } else {
        Err(format!("no vertex {u}"))
    }
}

fn show<T: fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "none".to_string(), |x| x.to_string())
}

/// Something a script can drive.
pub trait Engine {
    fn vertex_count(&self) -> usize;
    fn colored(&mut self, u: usize, v: usize, w: usize, z: usize) -> Result<(), String>;
    /// Flips a directed cycle; with `face_only`, the cycle must bound a face.
    fn cycle(&mut self, vertices: Vec<usize>, face_only: bool) -> Result<(), String>;
    fn coords(&mut self, u: usize) -> RegionVector;
    fn label(&mut self, u: usize, v: usize) -> Option<Color>;
    fn lca(&mut self, c: Color, u: usize, v: usize) -> Option<usize>;
    fn depth(&mut self, c: Color, u: usize) -> Option<i64>;
}

fn directed_cycle<W: Wood>(r: &W, vertices: Vec<usize>, face_only: bool) -> Result<DirectedCycle, String> {
    let c = DirectedCycle::new(r, vertices).map_err(|e| e.to_string())?;
    if face_only && c.interior_faces() != 1 {
        return Err("the cycle does not bound a face".into());
    }
    Ok(c)
}

fn in_tree<W: Wood>(r: &W, c: Color, u: usize) -> bool {
    match r.base().root_index(u) {
        Some(k) => k == c.index(),
        None => true,
    }
}

impl Engine for Realizer {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn colored(&mut self, u: usize, v: usize, w: usize, z: usize) -> Result<(), String> {
        let op = ColoredFlipOp::resolve(self, u, v, w).map_err(|e| e.to_string())?;
        if op.z != z {
            return Err(format!("{} is the opposite apex, not {z}", op.z));
        }
        apply_colored_flip(self, &op).map_err(|e| e.to_string())
    }

    fn cycle(&mut self, vertices: Vec<usize>, face_only: bool) -> Result<(), String> {
        let c = directed_cycle(self, vertices, face_only)?;
        *self = cycle_flip(self, &c).map_err(|e| e.to_string())?;
        Ok(())
    }

    fn coords(&mut self, u: usize) -> RegionVector {
        self.region_sizes(u)
    }

    fn label(&mut self, u: usize, v: usize) -> Option<Color> {
        Wood::label(self, u, v)
    }

    fn lca(&mut self, c: Color, u: usize, v: usize) -> Option<usize> {
        if !in_tree(self, c, u) || !in_tree(self, c, v) {
            return None;
        }
        let pu = self.path_of(u, c);
        self.path_of(v, c).into_iter().find(|x| pu.contains(x))
    }

    fn depth(&mut self, c: Color, u: usize) -> Option<i64> {
        in_tree(self, c, u).then(|| self.path_of(u, c).len() as i64 - 1)
    }
}

impl Engine for DynRealizer {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn colored(&mut self, u: usize, v: usize, w: usize, z: usize) -> Result<(), String> {
        self.flip(u, v, w, z).map(|_| ()).map_err(|e| e.to_string())
    }

    fn cycle(&mut self, vertices: Vec<usize>, face_only: bool) -> Result<(), String> {
        let c = directed_cycle(self, vertices, face_only)?;
        let snap = self.snapshot();
        let ops = if face_only {
            face_flip_as_colored(&snap, &c).map(|ops| ops.to_vec())
        } else {
            cycle_flip_as_colored(&snap, &c)
        }
        .map_err(|e: FlipError| e.to_string())?;
        ops.iter().try_for_each(|op| self.apply(op).map_err(|e| e.to_string()))
    }

    fn coords(&mut self, u: usize) -> RegionVector {
        self.coordinates(u)
    }

    fn label(&mut self, u: usize, v: usize) -> Option<Color> {
        DynRealizer::label(self, u, v).ok()
    }

    fn lca(&mut self, c: Color, u: usize, v: usize) -> Option<usize> {
        if !in_tree(self, c, u) || !in_tree(self, c, v) {
            return None;
        }
        self.least_common(c, u, v)
    }

    fn depth(&mut self, c: Color, u: usize) -> Option<i64> {
        in_tree(self, c, u).then(|| DynRealizer::depth(self, c, u))
    }
}
