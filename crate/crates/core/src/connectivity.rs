//! Local covering systems, covering-system bases and connectedness.
//!
//! A family `𝒞` is a local covering system at `x` when every filter converging
//! to `x` contains a member of `𝒞`. Every convergent generator at `x` is a
//! subset of `V(x)`, so the condition reduces to one superset test per point.

use std::collections::VecDeque;

use crate::constructions::subspace;
use crate::error::{Error, Result};
use crate::paths::path_components;
use crate::pointset::PointSet;
use crate::space::LimitSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCover {
    pub sets: Vec<PointSet>,
    pub scope: PointSet,
}

impl LocalCover {
    /// A covering system claimed over the whole carrier.
    pub fn global(space: &LimitSpace, sets: Vec<PointSet>) -> Self {
        LocalCover {
            sets,
            scope: PointSet::full(space.len()),
        }
    }

    /// `{V(x) : x}` over the whole carrier.
    pub fn balls(space: &LimitSpace) -> Self {
        let mut sets: Vec<PointSet> = space.vmax_table().to_vec();
        dedup_keep_order(&mut sets);
        Self::global(space, sets)
    }

    /// `{carrier}`.
    pub fn whole(space: &LimitSpace) -> Self {
        Self::global(space, vec![PointSet::full(space.len())])
    }
}

pub(crate) fn dedup_keep_order(sets: &mut Vec<PointSet>) {
    let mut seen = std::collections::HashSet::new();
    sets.retain(|s| seen.insert(s.clone()));
}

/// A point of the scope together with a convergent generator the family fails on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub point: usize,
    pub generator: PointSet,
}

/// Some member of the family lies in every filter converging to a point of
/// the scope. Fails with `(x, V(x))` when nothing contains `V(x)`.
pub fn check_local_cover(space: &LimitSpace, c: &LocalCover) -> Result<(), CoverWitness> {
    for x in c.scope.iter() {
        let v = space.vmax(x);
        if !c.sets.iter().any(|u| v.is_subset(u)) {
            return Err(CoverWitness {
                point: x,
                generator: v.clone(),
            });
        }
    }
    Ok(())
}

pub fn is_local_cover(space: &LimitSpace, c: &LocalCover) -> bool {
    check_local_cover(space, c).is_ok()
}

/// Local covering system base: for every `[H] → x` there is a coarser
/// convergent `[F]` whose supersets each contain a base member lying in `[F]`.
/// Taking the superset `F` itself forces `F` into the base, and `H = V(x)`
/// forces `F = V(x)`; conversely `V(x)` in the base serves every `H`.
pub fn check_cover_base(space: &LimitSpace, b: &LocalCover) -> Result<(), CoverWitness> {
    for x in b.scope.iter() {
        let v = space.vmax(x);
        if !b.sets.iter().any(|s| s == v) {
            return Err(CoverWitness {
                point: x,
                generator: v.clone(),
            });
        }
    }
    Ok(())
}

pub fn is_cover_base(space: &LimitSpace, b: &LocalCover) -> bool {
    check_cover_base(space, b).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Connectedness {
    Connected,
    /// Both parts are nonempty and `{A, B}` is a covering system.
    Disconnected {
        a: PointSet,
        b: PointSet,
    },
}

impl Connectedness {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connectedness::Connected)
    }
}

/// Decides connectedness. `{A, B}` is a covering system iff every `V(x)` lies
/// inside one part, which happens iff no edge of the symmetric adjacency graph
/// crosses the partition.
pub fn connectedness(space: &LimitSpace) -> Connectedness {
    let comps = components(space);
    if comps.len() <= 1 {
        return Connectedness::Connected;
    }
    let a = comps[0].clone();
    let b = PointSet::full(space.len()).difference(&a);
    Connectedness::Disconnected { a, b }
}

pub fn is_connected(space: &LimitSpace) -> bool {
    connectedness(space).is_connected()
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so representatives are deterministic.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Maximal connected subspaces, ordered by their least point.
pub fn components(space: &LimitSpace) -> Vec<PointSet> {
    let n = space.len();
    let mut ds = DisjointSets::new(n);
    for x in 0..n {
        for y in space.vmax(x).iter() {
            ds.union(x, y);
        }
    }
    let mut parts: Vec<PointSet> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = ds.find(x);
        if slot[r] == usize::MAX {
            slot[r] = parts.len();
            parts.push(PointSet::new());
        }
        parts[slot[r]].insert(x);
    }
    parts
}

/// A chain `U₁, …, Uₙ` of members of a covering system linking `x` to `y`
/// with consecutive members intersecting. Shortest by breadth-first search
/// over the intersection graph; ties go to the lowest set index.
pub fn chain_between(space: &LimitSpace, x: usize, y: usize, c: &LocalCover) -> Result<Option<Vec<PointSet>>> {
    space.carrier().check_index(x)?;
    space.carrier().check_index(y)?;
    let whole = LocalCover::global(space, c.sets.clone());
    if let Err(w) = check_local_cover(space, &whole) {
        return Err(Error::NotLocalCover(space.name(w.point).to_string()));
    }
    let k = c.sets.len();
    let mut prev = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    let mut queue = VecDeque::new();
    for (i, u) in c.sets.iter().enumerate() {
        if u.contains(x) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if c.sets[i].contains(y) {
            let mut chain = vec![c.sets[i].clone()];
            let mut j = i;
            while prev[j] != usize::MAX {
                j = prev[j];
                chain.push(c.sets[j].clone());
            }
            chain.reverse();
            return Ok(Some(chain));
        }
        for j in 0..k {
            if !seen[j] && c.sets[i].intersects(&c.sets[j]) {
                seen[j] = true;
                prev[j] = i;
                queue.push_back(j);
            }
        }
    }
    Ok(None)
}

/// Outcome of the local (path-)connectedness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalBase {
    /// Per point, the base that was constructed and checked.
    Holds(Vec<Vec<PointSet>>),
    Fails {
        point: usize,
    },
}

impl LocalBase {
    pub fn holds(&self) -> bool {
        matches!(self, LocalBase::Holds(_))
    }
}

fn local_base(space: &LimitSpace, good: impl Fn(&LimitSpace) -> bool) -> LocalBase {
    let mut bases = Vec::with_capacity(space.len());
    for x in 0..space.len() {
        let v = space.vmax(x);
        let sub = subspace(space, v).expect("V(x) lies in the carrier");
        let base = LocalCover {
            sets: vec![v.clone()],
            scope: PointSet::singleton(x),
        };
        if !good(&sub.space) || !is_cover_base(space, &base) {
            return LocalBase::Fails { point: x };
        }
        bases.push(base.sets);
    }
    LocalBase::Holds(bases)
}

/// Looks for a base `{V(x)}` of connected sets at every point.
pub fn locally_connected(space: &LimitSpace) -> LocalBase {
    local_base(space, |s| components(s).len() <= 1)
}

/// Looks for a base `{V(x)}` of path-connected sets at every point.
pub fn locally_path_connected(space: &LimitSpace) -> LocalBase {
    local_base(space, |s| path_components(s).len() <= 1)
}

pub fn is_locally_connected(space: &LimitSpace) -> bool {
    locally_connected(space).holds()
}

pub fn is_locally_path_connected(space: &LimitSpace) -> bool {
    locally_path_connected(space).holds()
}
