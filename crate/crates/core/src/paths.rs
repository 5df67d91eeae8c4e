//! Continuous paths `I → X` into finite spaces.
//!
//! A continuous path into a finite space has finite image, so it is a step
//! function: values `p₀, …, p_k` on the open intervals between cuts
//! `0 < t₁ < … < t_k < 1`, with the value at each cut taken from one side.
//! The neighborhood filter of a cut maps onto `[{p_{i-1}, p_i}]`, which has to
//! converge to the value at the cut:
//!
//! * [`Flag::Left`] (value `p_{i-1}` at the cut) needs `p_i ∈ V(p_{i-1})`,
//! * [`Flag::Right`] (value `p_i` at the cut) needs `p_{i-1} ∈ V(p_i)`.
//!
//! Only the cut sequence depends on the parametrization; [`Walk`] keeps values
//! and flags and is what the homotopy and lifting code works with.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{LimitSpace, PointMap};

/// Which side of a jump supplies the value at the cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Left,
    Right,
}

impl Flag {
    pub fn swap(self) -> Flag {
        match self {
            Flag::Left => Flag::Right,
            Flag::Right => Flag::Left,
        }
    }

    /// Whether the jump `from → to` is continuous with this flag.
    pub fn allows(self, space: &LimitSpace, from: usize, to: usize) -> bool {
        match self {
            Flag::Left => space.vmax(from).contains(to),
            Flag::Right => space.vmax(to).contains(from),
        }
    }

    /// `Left` when both sides are allowed, otherwise the one that is.
    pub fn canonical(space: &LimitSpace, from: usize, to: usize) -> Option<Flag> {
        if Flag::Left.allows(space, from, to) {
            Some(Flag::Left)
        } else if Flag::Right.allows(space, from, to) {
            Some(Flag::Right)
        } else {
            None
        }
    }

    pub fn letter(self) -> char {
        match self {
            Flag::Left => 'L',
            Flag::Right => 'R',
        }
    }
}

/// The reparametrization-free part of a step path.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    values: Vec<usize>,
    flags: Vec<Flag>,
}

impl fmt::Debug for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.values[0])?;
        for (v, s) in self.values[1..].iter().zip(&self.flags) {
            write!(f, " -{}- {}", s.letter(), v)?;
        }
        Ok(())
    }
}

fn check_shape(values: &[usize], flags: usize) -> Result<()> {
    if values.is_empty() {
        return Err(Error::MalformedPath("no values".into()));
    }
    if flags + 1 != values.len() {
        return Err(Error::MalformedPath(format!(
            "{} values need {} flags, got {}",
            values.len(),
            values.len() - 1,
            flags
        )));
    }
    if let Some(i) = values.windows(2).position(|w| w[0] == w[1]) {
        return Err(Error::MalformedPath(format!("values {i} and {} repeat", i + 1)));
    }
    Ok(())
}

impl Walk {
    pub fn new(values: Vec<usize>, flags: Vec<Flag>) -> Result<Self> {
        check_shape(&values, flags.len())?;
        Ok(Walk { values, flags })
    }

    pub(crate) fn from_parts_unchecked(values: Vec<usize>, flags: Vec<Flag>) -> Self {
        debug_assert!(check_shape(&values, flags.len()).is_ok());
        Walk { values, flags }
    }

    pub fn constant(p: usize) -> Self {
        Walk {
            values: vec![p],
            flags: Vec::new(),
        }
    }

    /// Picks the canonical flag for every step; fails when a step is not
    /// continuous either way or values repeat.
    pub fn with_canonical_flags(space: &LimitSpace, values: Vec<usize>) -> Result<Self> {
        for &v in &values {
            space.carrier().check_index(v)?;
        }
        let flags = values
            .windows(2)
            .map(|w| {
                Flag::canonical(space, w[0], w[1]).ok_or_else(|| {
                    Error::MalformedPath(format!(
                        "no continuous jump {} -> {}",
                        space.name(w[0]),
                        space.name(w[1])
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Walk::new(values, flags)
    }

    /// Parses identifiers, e.g. `["v0", "v1"]`, choosing canonical flags.
    pub fn from_names<S: AsRef<str>>(space: &LimitSpace, names: &[S]) -> Result<Self> {
        let values = names
            .iter()
            .map(|n| space.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::with_canonical_flags(space, values)
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn start(&self) -> usize {
        self.values[0]
    }

    pub fn end(&self) -> usize {
        *self.values.last().expect("walks are nonempty")
    }

    /// Number of jumps.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_constant(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    pub fn support(&self) -> PointSet {
        self.values.iter().copied().collect()
    }

    /// Index (0-based, counting jumps) of the first discontinuous jump.
    pub fn first_invalid_step(&self, space: &LimitSpace) -> Option<usize> {
        if self.values.iter().any(|&v| v >= space.len()) {
            return Some(0);
        }
        (0..self.flags.len()).find(|&i| !self.flags[i].allows(space, self.values[i], self.values[i + 1]))
    }

    pub fn is_valid(&self, space: &LimitSpace) -> bool {
        self.first_invalid_step(space).is_none()
    }

    /// Replaces every flag by its canonical choice; `None` if some jump is
    /// not continuous in either direction.
    pub fn canonical_flags(&self, space: &LimitSpace) -> Option<Walk> {
        let flags = self
            .values
            .windows(2)
            .map(|w| Flag::canonical(space, w[0], w[1]))
            .collect::<Option<Vec<_>>>()?;
        Some(Walk {
            values: self.values.clone(),
            flags,
        })
    }

    /// Path product `self * other`.
    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.end() != other.start() {
            return Err(Error::EndpointMismatch(format!(
                "first ends at {}, second starts at {}",
                self.end(),
                other.start()
            )));
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values[1..]);
        let mut flags = self.flags.clone();
        flags.extend_from_slice(&other.flags);
        Ok(Walk { values, flags })
    }

    /// The reverse path `t ↦ γ(1 − t)`; the value at each cut changes side.
    pub fn reverse(&self) -> Walk {
        Walk {
            values: self.values.iter().rev().copied().collect(),
            flags: self.flags.iter().rev().map(|f| f.swap()).collect(),
        }
    }

    /// `m ∘ γ`, merging jumps that become constant.
    pub fn pushforward(&self, m: &PointMap) -> Result<Walk> {
        if let Some(d) = m.discontinuity() {
            return Err(Error::NotContinuous(m.domain().name(d.point).to_string()));
        }
        if self.values.iter().any(|&v| v >= m.domain().len()) {
            return Err(Error::CarrierMismatch);
        }
        Ok(self.map_values(|v| m.apply(v)))
    }

    pub(crate) fn map_values(&self, f: impl Fn(usize) -> usize) -> Walk {
        let mut values = vec![f(self.values[0])];
        let mut flags = Vec::with_capacity(self.flags.len());
        for (&v, &s) in self.values[1..].iter().zip(&self.flags) {
            let w = f(v);
            if w != *values.last().unwrap() {
                values.push(w);
                flags.push(s);
            }
        }
        Walk { values, flags }
    }

    /// Sub-walk between value positions `i..=j`.
    pub fn segment(&self, i: usize, j: usize) -> Walk {
        Walk {
            values: self.values[i..=j].to_vec(),
            flags: self.flags[i..j].to_vec(),
        }
    }

    /// Replaces positions `i..=j` by `piece`, which must share their endpoints.
    pub(crate) fn splice(&self, i: usize, j: usize, piece: &Walk) -> Walk {
        debug_assert_eq!(piece.start(), self.values[i]);
        debug_assert_eq!(piece.end(), self.values[j]);
        let mut values = self.values[..i].to_vec();
        values.extend_from_slice(&piece.values);
        values.extend_from_slice(&self.values[j + 1..]);
        let mut flags = self.flags[..i].to_vec();
        flags.extend_from_slice(&piece.flags);
        flags.extend_from_slice(&self.flags[j..]);
        Walk { values, flags }
    }

    pub fn names(&self, space: &LimitSpace) -> Vec<String> {
        self.values.iter().map(|&v| space.name(v).to_string()).collect()
    }
}

/// A step function `I → X` with explicit rational cut positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepPath {
    values: Vec<usize>,
    cuts: Vec<Ratio<i64>>,
    flags: Vec<Flag>,
}

impl StepPath {
    pub fn new(values: Vec<usize>, cuts: Vec<Ratio<i64>>, flags: Vec<Flag>) -> Result<Self> {
        check_shape(&values, flags.len())?;
        if cuts.len() != flags.len() {
            return Err(Error::MalformedPath(format!(
                "{} cuts for {} flags",
                cuts.len(),
                flags.len()
            )));
        }
        let (zero, one) = (Ratio::zero(), Ratio::one());
        if let Some(t) = cuts.iter().find(|t| **t <= zero || **t >= one) {
            return Err(Error::MalformedPath(format!("cut {t} outside (0, 1)")));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedPath("cuts must increase strictly".into()));
        }
        Ok(StepPath { values, cuts, flags })
    }

    /// Evenly spaced cuts `i / (k + 1)` for a walk with `k` jumps.
    pub fn uniform(walk: &Walk) -> StepPath {
        let k = walk.len() as i64;
        StepPath {
            values: walk.values.clone(),
            cuts: (1..=k).map(|i| Ratio::new(i, k + 1)).collect(),
            flags: walk.flags.clone(),
        }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn cuts(&self) -> &[Ratio<i64>] {
        &self.cuts
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    /// `γ(t)` for `t ∈ [0, 1]`.
    pub fn value_at(&self, t: Ratio<i64>) -> usize {
        for (i, c) in self.cuts.iter().enumerate() {
            if t < *c {
                return self.values[i];
            }
            if t == *c {
                return match self.flags[i] {
                    Flag::Left => self.values[i],
                    Flag::Right => self.values[i + 1],
                };
            }
        }
        *self.values.last().unwrap()
    }

    /// 1-based index of the first discontinuous cut.
    pub fn first_discontinuity(&self, space: &LimitSpace) -> Option<usize> {
        if self.values.iter().any(|&v| v >= space.len()) {
            return Some(0);
        }
        (0..self.flags.len())
            .find(|&i| !self.flags[i].allows(space, self.values[i], self.values[i + 1]))
            .map(|i| i + 1)
    }

    pub fn is_continuous(&self, space: &LimitSpace) -> bool {
        self.first_discontinuity(space).is_none()
    }

    pub fn to_walk(&self) -> Walk {
        Walk {
            values: self.values.clone(),
            flags: self.flags.clone(),
        }
    }
}

/// Classes of the relation "joined by a one-jump walk", closed transitively;
/// ordered by least point.
pub fn path_components(space: &LimitSpace) -> Vec<PointSet> {
    let n = space.len();
    let mut label = vec![usize::MAX; n];
    let mut parts = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = parts.len();
        let mut part = PointSet::new();
        let mut queue = VecDeque::from([s]);
        label[s] = id;
        while let Some(x) = queue.pop_front() {
            part.insert(x);
            for (y, l) in label.iter_mut().enumerate() {
                if *l == usize::MAX && Flag::canonical(space, x, y).is_some() {
                    *l = id;
                    queue.push_back(y);
                }
            }
        }
        parts.push(part);
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{cycle, staircase};

    #[test]
    fn staircase_is_continuous() {
        let c = cycle(8);
        let p = staircase(&c, 5);
        assert!(p.is_continuous(&c));
        assert!(p.flags().iter().all(|&f| f == Flag::Right));
        let w = p.to_walk();
        assert_eq!(w.values(), &[0, 1, 2, 3, 4, 5]);
        // Value at each cut is the new step, as in a right-closed staircase.
        assert_eq!(p.value_at(p.cuts()[0]), 1);
        assert_eq!(p.value_at(Ratio::zero()), 0);
        assert_eq!(p.value_at(Ratio::one()), 5);
    }

    #[test]
    fn constant_path() {
        let c = cycle(8);
        let p = StepPath::new(vec![3], vec![], vec![]).unwrap();
        assert!(p.is_continuous(&c));
        assert_eq!(p.to_walk(), Walk::constant(3));
    }

    #[test]
    fn one_sided_jump_fails() {
        // b ∉ V(a) but a ∈ V(b): the jump a → b only works with the value b at the cut.
        let s = LimitSpace::from_named(&["a", "b"], &[("b", &["a"])]).unwrap();
        let left = StepPath::new(vec![0, 1], vec![Ratio::new(1, 2)], vec![Flag::Left]).unwrap();
        assert_eq!(left.first_discontinuity(&s), Some(1));
        let right = StepPath::new(vec![0, 1], vec![Ratio::new(1, 2)], vec![Flag::Right]).unwrap();
        assert!(right.is_continuous(&s));
    }

    #[test]
    fn malformed_paths() {
        let half = Ratio::new(1, 2);
        assert!(StepPath::new(vec![0, 1], vec![Ratio::one()], vec![Flag::Left]).is_err());
        assert!(StepPath::new(vec![0, 1, 2], vec![half, half], vec![Flag::Left; 2]).is_err());
        assert!(StepPath::new(vec![0, 0], vec![half], vec![Flag::Left]).is_err());
        assert!(StepPath::new(vec![0, 1], vec![], vec![Flag::Left]).is_err());
    }

    #[test]
    fn walk_algebra() {
        let c = cycle(8);
        let k = Walk::constant(0);
        assert_eq!(k.concat(&k).unwrap(), k);
        let s = LimitSpace::from_named(&["a", "b"], &[("b", &["a"])]).unwrap();
        let ab = Walk::new(vec![0, 1], vec![Flag::Right]).unwrap();
        let ba = ab.reverse();
        assert_eq!(ba.values(), &[1, 0]);
        assert_eq!(ba.flags(), &[Flag::Left]);
        assert!(ab.is_valid(&s) && ba.is_valid(&s));
        assert_eq!(ab.reverse().reverse(), ab);
        assert!(matches!(ab.concat(&ab), Err(Error::EndpointMismatch(_))));

        let to_point = PointMap::constant(&c, &LimitSpace::point(), 0).unwrap();
        let w = staircase(&c, 7).to_walk();
        assert_eq!(w.pushforward(&to_point).unwrap(), Walk::constant(0));
    }

    #[test]
    fn path_components_examples() {
        assert_eq!(path_components(&LimitSpace::point()).len(), 1);
        assert_eq!(
            path_components(&LimitSpace::from_named(&["a", "b"], &[]).unwrap()).len(),
            2
        );
        assert_eq!(path_components(&cycle(8)), vec![PointSet::full(8)]);
    }
}
