//! Combinatorial path homotopy rel endpoints.
//!
//! Walks are rewritten by four kinds of moves:
//!
//! * stutter: repeated consecutive values are merged (implicit, [`Walk`]
//!   never stores stutters);
//! * flag change: the side of a jump may change when both sides are
//!   continuous;
//! * backtrack: `…p,q,p…` ↔ `…p…` when `q ∈ V(p)`;
//! * cover fill: a stretch lying inside a set `U` of the designated covering
//!   system may be replaced by any other walk inside `U` with the same ends.
//!   The covering system witnesses semi-local simple connectivity, so loops
//!   inside one of its sets are contractible by stipulation.
//!
//! [`normalize`] descends to the shortest, then lexicographically least walk it
//! can reach. It first applies strictly decreasing moves greedily, then
//! explores every equal-length cover fill reachable from the result looking
//! for a further decrease. A run that exhausts its budget reports the walk as
//! uncertified instead of guessing.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::connectivity::{check_local_cover, LocalCover};
use crate::error::{Error, Result};
use crate::paths::{Flag, Walk};
use crate::pointset::PointSet;
use crate::space::LimitSpace;

/// A space, a covering system whose loops count as contractible, and a cap on
/// rewriting work.
#[derive(Clone, Debug)]
pub struct HomotopySystem {
    space: LimitSpace,
    cover: LocalCover,
    budget: usize,
}

impl HomotopySystem {
    pub fn new(space: LimitSpace, cover: Vec<PointSet>, budget: usize) -> Result<Self> {
        for s in &cover {
            space.carrier().check_set(s)?;
        }
        let cover = LocalCover::global(&space, cover);
        if let Err(w) = check_local_cover(&space, &cover) {
            return Err(Error::NotLocalCover(space.name(w.point).to_string()));
        }
        Ok(HomotopySystem { space, cover, budget })
    }

    /// The covering system `{V(x)}`.
    pub fn balls(space: LimitSpace, budget: usize) -> Self {
        let cover = LocalCover::balls(&space);
        HomotopySystem { space, cover, budget }
    }

    pub fn space(&self) -> &LimitSpace {
        &self.space
    }

    pub fn cover(&self) -> &[PointSet] {
        &self.cover.sets
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        HomotopySystem { budget, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    FlagChange,
    Backtrack,
    /// Index into the system's covering family.
    CoverFill(usize),
}

/// Replaces the value positions `start..=end` of a walk by `replacement`,
/// which has the same endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub start: usize,
    pub end: usize,
    pub replacement: Walk,
    pub kind: MoveKind,
}

impl Move {
    /// Checks the move against `walk` and returns the rewritten walk.
    pub fn apply(&self, walk: &Walk, sys: &HomotopySystem) -> Result<Walk> {
        let bad = |why: &str| Err(Error::InvalidMove(why.to_string()));
        if self.start > self.end || self.end >= walk.values().len() {
            return bad("positions out of range");
        }
        let seg = walk.segment(self.start, self.end);
        let rep = &self.replacement;
        if rep.start() != seg.start() || rep.end() != seg.end() {
            return bad("replacement changes the endpoints");
        }
        if !seg.is_valid(&sys.space) || !rep.is_valid(&sys.space) {
            return bad("segment or replacement is not continuous");
        }
        match self.kind {
            MoveKind::FlagChange => {
                if seg.len() != 1 || rep.len() != 1 || seg.values() != rep.values() {
                    return bad("flag change must keep a single jump");
                }
            }
            MoveKind::Backtrack => {
                let (long, short) = if seg.len() > rep.len() {
                    (&seg, rep)
                } else {
                    (rep, &seg)
                };
                let v = long.values();
                if short.len() != 0 || long.len() != 2 || v[0] != v[2] || !sys.space.vmax(v[0]).contains(v[1]) {
                    return bad("backtrack needs p,q,p with q in V(p)");
                }
            }
            MoveKind::CoverFill(k) => {
                let Some(u) = sys.cover.sets.get(k) else {
                    return bad("cover index out of range");
                };
                if !seg.support().is_subset(u) || !rep.support().is_subset(u) {
                    return bad("cover fill leaves its set");
                }
            }
        }
        Ok(walk.splice(self.start, self.end, rep))
    }

    /// The move undoing `self`, given the walk it was applied to.
    pub fn inverse(&self, before: &Walk) -> Move {
        Move {
            start: self.start,
            end: self.start + self.replacement.len(),
            replacement: before.segment(self.start, self.end),
            kind: self.kind,
        }
    }
}

/// A sequence of moves rewriting `from` into `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyCertificate {
    pub from: Walk,
    pub to: Walk,
    pub moves: Vec<Move>,
}

impl HomotopyCertificate {
    /// Replays the moves, checking each one, and returns every intermediate walk.
    pub fn replay(&self, sys: &HomotopySystem) -> Result<Vec<Walk>> {
        let mut cur = self.from.clone();
        let mut trail = vec![cur.clone()];
        for m in &self.moves {
            cur = m.apply(&cur, sys)?;
            trail.push(cur.clone());
        }
        if cur != self.to {
            return Err(Error::InvalidMove("certificate does not reach its target".into()));
        }
        Ok(trail)
    }
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub walk: Walk,
    /// The descent finished within budget.
    pub certified: bool,
    /// Moves from the input to `walk`.
    pub moves: Vec<Move>,
    pub work: usize,
}

#[derive(Clone, Debug)]
pub enum HomotopyVerdict {
    Yes(HomotopyCertificate),
    No,
    Unknown,
}

impl HomotopyVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, HomotopyVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, HomotopyVerdict::No)
    }
}

fn key(w: &Walk) -> (usize, &[usize]) {
    (w.len(), w.values())
}

struct Engine<'a> {
    sys: &'a HomotopySystem,
    work: usize,
    /// Lex-least shortest walk inside cover set `k` between two points.
    shortest: HashMap<(usize, usize, usize), Option<Walk>>,
}

impl<'a> Engine<'a> {
    fn new(sys: &'a HomotopySystem) -> Self {
        Engine {
            sys,
            work: 0,
            shortest: HashMap::new(),
        }
    }

    fn charge(&mut self, n: usize) -> bool {
        self.work += n;
        self.work <= self.sys.budget
    }

    fn adjacent_in(&self, u: &PointSet, p: usize) -> impl Iterator<Item = usize> + '_ {
        let space = &self.sys.space;
        u.iter()
            .filter(move |&q| q != p && space.adjacent(p, q))
            .collect::<Vec<_>>()
            .into_iter()
    }

    fn distances_to(&self, u: &PointSet, b: usize) -> HashMap<usize, usize> {
        let mut dist = HashMap::from([(b, 0)]);
        let mut queue = VecDeque::from([b]);
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            for q in self.adjacent_in(u, p) {
                dist.entry(q).or_insert_with(|| {
                    queue.push_back(q);
                    d + 1
                });
            }
        }
        dist
    }

    fn shortest_in(&mut self, k: usize, a: usize, b: usize) -> Option<Walk> {
        if let Some(w) = self.shortest.get(&(k, a, b)) {
            return w.clone();
        }
        let u = self.sys.cover.sets[k].clone();
        let dist = self.distances_to(&u, b);
        let result = dist.get(&a).map(|&d0| {
            let mut values = vec![a];
            let mut p = a;
            for d in (0..d0).rev() {
                p = self
                    .adjacent_in(&u, p)
                    .find(|q| dist.get(q) == Some(&d))
                    .expect("BFS layers are consecutive");
                values.push(p);
            }
            Walk::with_canonical_flags(&self.sys.space, values).expect("adjacent steps")
        });
        self.shortest.insert((k, a, b), result.clone());
        result
    }

    /// Largest `j` with `values[i..=j]` inside cover set `k`, if `values[i]` is.
    fn reach(&self, w: &Walk, i: usize, k: usize) -> Option<usize> {
        let u = &self.sys.cover.sets[k];
        let v = w.values();
        if !u.contains(v[i]) {
            return None;
        }
        let mut j = i;
        while j + 1 < v.len() && u.contains(v[j + 1]) {
            j += 1;
        }
        Some(j)
    }

    /// First strictly decreasing move, scanning left to right.
    fn find_reduction(&mut self, w: &Walk) -> Option<Move> {
        let v = w.values();
        let space = &self.sys.space;
        for i in 0..v.len() {
            if i + 2 < v.len() && v[i] == v[i + 2] && space.vmax(v[i]).contains(v[i + 1]) {
                return Some(Move {
                    start: i,
                    end: i + 2,
                    replacement: Walk::constant(v[i]),
                    kind: MoveKind::Backtrack,
                });
            }
            for k in 0..self.sys.cover.sets.len() {
                let Some(jmax) = self.reach(w, i, k) else { continue };
                for j in (i + 1..=jmax).rev() {
                    let seg = w.segment(i, j);
                    let best = self.shortest_in(k, v[i], v[j]).expect("segment itself connects");
                    if key(&best) < key(&seg) {
                        return Some(Move {
                            start: i,
                            end: j,
                            replacement: best,
                            kind: MoveKind::CoverFill(k),
                        });
                    }
                }
            }
        }
        None
    }

    /// Every walk inside cover set `k` from `a` to `b` with exactly `len`
    /// jumps, in lexicographic order. `None` when the budget runs out.
    fn same_length_in(&mut self, k: usize, a: usize, b: usize, len: usize) -> Option<Vec<Walk>> {
        let u = self.sys.cover.sets[k].clone();
        let dist = self.distances_to(&u, b);
        let mut out = Vec::new();
        let mut stack = vec![a];
        if !self.extend_walks(&u, &dist, b, len, &mut stack, &mut out) {
            return None;
        }
        Some(out)
    }

    fn extend_walks(
        &mut self,
        u: &PointSet,
        dist: &HashMap<usize, usize>,
        b: usize,
        len: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Walk>,
    ) -> bool {
        let p = *stack.last().unwrap();
        let steps = stack.len() - 1;
        if steps == len {
            if p == b {
                if !self.charge(1) {
                    return false;
                }
                out.push(Walk::with_canonical_flags(&self.sys.space, stack.clone()).expect("adjacent steps"));
            }
            return true;
        }
        let next: Vec<usize> = self.adjacent_in(u, p).collect();
        for q in next {
            if dist.get(&q).is_some_and(|&d| d < len - steps) {
                stack.push(q);
                let ok = self.extend_walks(u, dist, b, len, stack, out);
                stack.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Equal-length cover fills applicable to `w`.
    fn sideways(&mut self, w: &Walk) -> Option<Vec<Move>> {
        let v = w.values().to_vec();
        let mut moves = Vec::new();
        for i in 0..v.len() {
            for k in 0..self.sys.cover.sets.len() {
                let Some(jmax) = self.reach(w, i, k) else { continue };
                for j in i + 1..=jmax {
                    let seg = w.segment(i, j);
                    for alt in self.same_length_in(k, v[i], v[j], j - i)? {
                        if alt != seg {
                            moves.push(Move {
                                start: i,
                                end: j,
                                replacement: alt,
                                kind: MoveKind::CoverFill(k),
                            });
                        }
                    }
                }
            }
        }
        Some(moves)
    }

    fn normalize(&mut self, w: &Walk) -> Result<Normalized> {
        let space = &self.sys.space;
        if let Some(i) = w.first_invalid_step(space) {
            return Err(Error::MalformedPath(format!("jump {i} is not continuous")));
        }
        let mut moves = Vec::new();
        let mut cur = w.clone();
        for i in 0..cur.len() {
            let (p, q) = (cur.values()[i], cur.values()[i + 1]);
            let want = Flag::canonical(space, p, q).expect("valid jump");
            if cur.flags()[i] != want {
                let m = Move {
                    start: i,
                    end: i + 1,
                    replacement: Walk::from_parts_unchecked(vec![p, q], vec![want]),
                    kind: MoveKind::FlagChange,
                };
                cur = cur.splice(i, i + 1, &m.replacement);
                moves.push(m);
            }
        }
        let uncertified = |cur: Walk, moves: Vec<Move>, work: usize| Normalized {
            walk: cur,
            certified: false,
            moves,
            work,
        };
        loop {
            if !self.charge(1) {
                return Ok(uncertified(cur, moves, self.work));
            }
            if let Some(m) = self.find_reduction(&cur) {
                cur = cur.splice(m.start, m.end, &m.replacement);
                moves.push(m);
                continue;
            }
            // Breadth-first over equal-length rewrites of `cur`.
            let mut parent: HashMap<Walk, (Walk, Move)> = HashMap::new();
            let mut seen: HashSet<Walk> = HashSet::from([cur.clone()]);
            let mut queue = VecDeque::from([cur.clone()]);
            let mut least = cur.clone();
            let mut reduced = None;
            while let Some(s) = queue.pop_front() {
                if !self.charge(1) {
                    return Ok(uncertified(cur, moves, self.work));
                }
                if s != cur {
                    if let Some(m) = self.find_reduction(&s) {
                        // Only progress past `cur` counts; a lex-smaller fill of a
                        // sideways state may lead straight back.
                        if key(&s.splice(m.start, m.end, &m.replacement)) < key(&cur) {
                            reduced = Some((s, m));
                            break;
                        }
                    }
                }
                if key(&s) < key(&least) {
                    least = s.clone();
                }
                let Some(next) = self.sideways(&s) else {
                    return Ok(uncertified(cur, moves, self.work));
                };
                for m in next {
                    let t = s.splice(m.start, m.end, &m.replacement);
                    if seen.insert(t.clone()) {
                        parent.insert(t.clone(), (s.clone(), m));
                        queue.push_back(t);
                    }
                }
            }
            let path_to = |target: &Walk| {
                let mut path = Vec::new();
                let mut at = target.clone();
                while let Some((prev, m)) = parent.get(&at) {
                    path.push(m.clone());
                    at = prev.clone();
                }
                path.reverse();
                path
            };
            match reduced {
                Some((s, m)) => {
                    moves.extend(path_to(&s));
                    cur = s.splice(m.start, m.end, &m.replacement);
                    moves.push(m);
                }
                None => {
                    moves.extend(path_to(&least));
                    return Ok(Normalized {
                        walk: least,
                        certified: true,
                        moves,
                        work: self.work,
                    });
                }
            }
        }
    }
}

/// Rewrites `w` to its canonical representative under the system's moves.
pub fn normalize(w: &Walk, sys: &HomotopySystem) -> Result<Normalized> {
    Engine::new(sys).normalize(w)
}

/// Replays `moves` on `from`, collecting the walk before each move.
fn befores(from: &Walk, moves: &[Move], sys: &HomotopySystem) -> Result<Vec<Walk>> {
    let mut cur = from.clone();
    let mut out = Vec::with_capacity(moves.len());
    for m in moves {
        out.push(cur.clone());
        cur = m.apply(&cur, sys)?;
    }
    Ok(out)
}

/// Decides homotopy rel endpoints as far as the engine can: equal canonical
/// forms give `Yes` with a certificate, distinct certified forms give `No`,
/// anything else is `Unknown`.
pub fn homotopic(w1: &Walk, w2: &Walk, sys: &HomotopySystem) -> Result<HomotopyVerdict> {
    if w1.start() != w2.start() || w1.end() != w2.end() {
        return Err(Error::EndpointMismatch("walks must share both endpoints".into()));
    }
    if w1 == w2 {
        return Ok(HomotopyVerdict::Yes(HomotopyCertificate {
            from: w1.clone(),
            to: w2.clone(),
            moves: Vec::new(),
        }));
    }
    let n1 = normalize(w1, sys)?;
    let n2 = normalize(w2, sys)?;
    if n1.walk == n2.walk {
        let mut moves = n1.moves;
        let before2 = befores(w2, &n2.moves, sys)?;
        for (m, before) in n2.moves.iter().zip(&before2).rev() {
            moves.push(m.inverse(before));
        }
        return Ok(HomotopyVerdict::Yes(HomotopyCertificate {
            from: w1.clone(),
            to: w2.clone(),
            moves,
        }));
    }
    if n1.certified && n2.certified {
        Ok(HomotopyVerdict::No)
    } else {
        Ok(HomotopyVerdict::Unknown)
    }
}
