//! Finite carriers, principal filters and limit structures.
//!
//! On a finite set every filter is principal: the intersection of all its
//! members is a finite intersection, hence itself a member, and it generates
//! the filter. A filter is therefore stored as its generator `A` (the filter
//! `[A]` of all supersets of `A`), and the filter algebra reduces to subset
//! algebra:
//!
//! * `[A] ∩ [B] = [A ∪ B]`,
//! * `[A]` is finer than `[B]` iff `A ⊆ B`,
//! * the image of `[A]` under `f` is `[f(A)]`.
//!
//! A closed limit structure is then pinned down by one set per point: the
//! union `V(x)` of all generators converging to `x`. Union-closure of the
//! convergent family makes `[V(x)]` convergent, refinement-closure makes every
//! nonempty subset convergent, so `[A] → x` iff `∅ ≠ A ⊆ V(x)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// The underlying point set: distinct opaque identifiers in a fixed order.
#[derive(Clone, PartialEq, Eq)]
pub struct Carrier {
    points: Vec<String>,
    index: HashMap<String, usize>,
}

impl Carrier {
    pub fn new<I, S>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        Ok(Carrier { points, index })
    }

    /// Points named `"0"`, `"1"`, ….
    pub fn anonymous(n: usize) -> Self {
        Carrier::new((0..n).map(|i| i.to_string())).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn names(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<PointSet> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn names_of(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|i| self.points[i].clone()).collect()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: self.len(),
            })
        }
    }

    pub(crate) fn check_set(&self, set: &PointSet) -> Result<()> {
        match set.last() {
            Some(i) => self.check_index(i),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter()).finish()
    }
}

fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// The filter `[A]` of all supersets of a nonempty generator `A`.
#[derive(Clone, Debug)]
pub struct PrincipalFilter {
    carrier: Arc<Carrier>,
    generator: PointSet,
}

impl PartialEq for PrincipalFilter {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.carrier, &other.carrier) && self.generator == other.generator
    }
}

impl Eq for PrincipalFilter {}

impl PrincipalFilter {
    pub fn new(carrier: Arc<Carrier>, generator: PointSet) -> Result<Self> {
        if generator.is_empty() {
            return Err(Error::EmptyGenerator);
        }
        carrier.check_set(&generator)?;
        Ok(PrincipalFilter { carrier, generator })
    }

    /// The point filter `[x]`.
    pub fn point(carrier: Arc<Carrier>, x: usize) -> Result<Self> {
        Self::new(carrier, PointSet::singleton(x))
    }

    pub fn generator(&self) -> &PointSet {
        &self.generator
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    /// Whether `s` belongs to the filter.
    pub fn contains(&self, s: &PointSet) -> bool {
        self.generator.is_subset(s)
    }

    /// Filter intersection `F ∩ G`, generated by the union of generators.
    pub fn meet(&self, other: &PrincipalFilter) -> Result<PrincipalFilter> {
        if !same_carrier(&self.carrier, &other.carrier) {
            return Err(Error::CarrierMismatch);
        }
        Ok(PrincipalFilter {
            carrier: self.carrier.clone(),
            generator: self.generator.union(&other.generator),
        })
    }

    /// `F` is finer than `G` (`F ⊇ G` as families).
    pub fn is_finer_than(&self, other: &PrincipalFilter) -> Result<bool> {
        if !same_carrier(&self.carrier, &other.carrier) {
            return Err(Error::CarrierMismatch);
        }
        Ok(self.generator.is_subset(&other.generator))
    }

    /// The image filter `m(F)`.
    pub fn image(&self, m: &PointMap) -> Result<PrincipalFilter> {
        if !same_carrier(&self.carrier, m.domain().carrier()) {
            return Err(Error::CarrierMismatch);
        }
        Ok(PrincipalFilter {
            carrier: m.codomain().carrier().clone(),
            generator: m.image(&self.generator),
        })
    }
}

/// Convergence data before the limit axioms are enforced.
#[derive(Clone, Debug)]
pub struct RawConvergenceTable {
    carrier: Arc<Carrier>,
    gens: Vec<Vec<PointSet>>,
}

/// Which limit axioms a raw table satisfies as listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub point_filters: bool,
    pub intersections: bool,
    pub refinements: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.point_filters && self.intersections && self.refinements
    }
}

impl RawConvergenceTable {
    pub fn new(carrier: Arc<Carrier>, gens: Vec<Vec<PointSet>>) -> Result<Self> {
        if gens.len() != carrier.len() {
            return Err(Error::TableLength {
                expected: carrier.len(),
                got: gens.len(),
            });
        }
        for set in gens.iter().flatten() {
            carrier.check_set(set)?;
        }
        Ok(RawConvergenceTable { carrier, gens })
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn generators(&self, x: usize) -> &[PointSet] {
        &self.gens[x]
    }

    /// The smallest limit structure in which every listed generator converges:
    /// `V(x) = {x} ∪ ⋃ gens(x)`. Empty listed sets contribute nothing.
    pub fn close(&self) -> LimitSpace {
        let vmax = self
            .gens
            .iter()
            .enumerate()
            .map(|(x, family)| {
                let mut v: PointSet = family.iter().flat_map(|s| s.iter()).collect();
                v.insert(x);
                v
            })
            .collect();
        LimitSpace {
            carrier: self.carrier.clone(),
            vmax,
        }
    }

    /// Checks the three limit axioms against the family exactly as listed.
    pub fn axioms(&self) -> AxiomReport {
        let mut report = AxiomReport {
            point_filters: true,
            intersections: true,
            refinements: true,
        };
        for (x, family) in self.gens.iter().enumerate() {
            let mut family: Vec<&PointSet> = family.iter().filter(|s| !s.is_empty()).collect();
            family.sort();
            family.dedup();
            if !family.iter().any(|s| s.len() == 1 && s.contains(x)) {
                report.point_filters = false;
            }
            for (i, a) in family.iter().enumerate() {
                for b in &family[i + 1..] {
                    let u = a.union(b);
                    if family.binary_search(&&u).is_err() {
                        report.intersections = false;
                    }
                }
                let below = family.iter().filter(|s| s.is_subset(a)).count() as u128;
                if a.len() >= 100 || below != (1u128 << a.len()) - 1 {
                    report.refinements = false;
                }
            }
        }
        report
    }
}

/// A closed finite limit space, stored as the maximal convergent generator of
/// every point.
#[derive(Clone, PartialEq, Eq)]
pub struct LimitSpace {
    carrier: Arc<Carrier>,
    vmax: Vec<PointSet>,
}

impl fmt::Debug for LimitSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, v) in self.vmax.iter().enumerate() {
            m.entry(&self.carrier.name(x), &self.carrier.names_of(v));
        }
        m.finish()
    }
}

impl LimitSpace {
    /// Builds a space from its maximal convergent sets; every `V(x)` must
    /// contain `x`.
    pub fn from_vmax(carrier: Arc<Carrier>, vmax: Vec<PointSet>) -> Result<Self> {
        if vmax.len() != carrier.len() {
            return Err(Error::TableLength {
                expected: carrier.len(),
                got: vmax.len(),
            });
        }
        for (x, v) in vmax.iter().enumerate() {
            carrier.check_set(v)?;
            if !v.contains(x) {
                return Err(Error::Parse(format!(
                    "V({}) must contain the point itself",
                    carrier.name(x)
                )));
            }
        }
        Ok(LimitSpace { carrier, vmax })
    }

    pub(crate) fn from_vmax_unchecked(carrier: Arc<Carrier>, vmax: Vec<PointSet>) -> Self {
        debug_assert!(vmax.iter().enumerate().all(|(x, v)| v.contains(x)));
        LimitSpace { carrier, vmax }
    }

    /// Convenience constructor from identifiers, e.g.
    /// `from_named(&["a", "b"], &[("a", &["b"])])`. Unlisted points get `V(x) = {x}`.
    pub fn from_named(points: &[&str], vmax: &[(&str, &[&str])]) -> Result<Self> {
        let carrier = Arc::new(Carrier::new(points.iter().copied())?);
        let mut sets: Vec<PointSet> = (0..carrier.len()).map(PointSet::singleton).collect();
        for (x, ys) in vmax {
            let x = carrier.index_of(x)?;
            let extra = carrier.subset(ys)?;
            sets[x] = sets[x].union(&extra);
        }
        Ok(LimitSpace { carrier, vmax: sets })
    }

    pub fn discrete(carrier: Arc<Carrier>) -> Self {
        let vmax = (0..carrier.len()).map(PointSet::singleton).collect();
        LimitSpace { carrier, vmax }
    }

    pub fn indiscrete(carrier: Arc<Carrier>) -> Self {
        let vmax = vec![PointSet::full(carrier.len()); carrier.len()];
        LimitSpace { carrier, vmax }
    }

    pub fn point() -> Self {
        Self::discrete(Arc::new(Carrier::anonymous(1)))
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.vmax.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vmax.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        self.carrier.name(x)
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.carrier.index_of(id)
    }

    /// `V(x)`.
    pub fn vmax(&self, x: usize) -> &PointSet {
        &self.vmax[x]
    }

    pub fn vmax_table(&self) -> &[PointSet] {
        &self.vmax
    }

    /// `[A] → x` for a nonempty generator `A`.
    pub fn converges_set(&self, a: &PointSet, x: usize) -> bool {
        !a.is_empty() && a.is_subset(&self.vmax[x])
    }

    pub fn converges(&self, f: &PrincipalFilter, x: usize) -> Result<bool> {
        if !same_carrier(&self.carrier, f.carrier()) {
            return Err(Error::CarrierMismatch);
        }
        self.carrier.check_index(x)?;
        Ok(self.converges_set(f.generator(), x))
    }

    /// The neighborhood filter `𝒰(x)`, the intersection of every filter
    /// converging to `x`.
    pub fn neighborhood(&self, x: usize) -> PrincipalFilter {
        PrincipalFilter {
            carrier: self.carrier.clone(),
            generator: self.vmax[x].clone(),
        }
    }

    /// Some convergent generator at one point reaches the other.
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.vmax[x].contains(y) || self.vmax[y].contains(x)
    }

    /// Symmetric adjacency lists, without self loops.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![PointSet::new(); self.len()];
        for (x, v) in self.vmax.iter().enumerate() {
            for y in v.iter().filter(|&y| y != x) {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        adj.into_iter().map(|s| s.iter().collect()).collect()
    }

    /// Every neighborhood filter converges to its point.
    pub fn is_pretopological(&self) -> bool {
        (0..self.len()).all(|x| {
            let u = self.neighborhood(x);
            self.converges_set(u.generator(), x)
        })
    }

    /// A filter converges as soon as all finer ultrafilters do. Ultrafilters on
    /// a finite set are point filters, and every `[A]` with all of its points
    /// converging lies below `[P(x)]` for `P(x) = {y : [y] → x}`; checking
    /// `[P(x)] → x` covers them all.
    pub fn is_pseudotopological(&self) -> bool {
        (0..self.len()).all(|x| {
            let ultra: PointSet = (0..self.len())
                .filter(|&y| self.converges_set(&PointSet::singleton(y), x))
                .collect();
            self.converges_set(&ultra, x)
        })
    }

    /// Serializes back to a raw table with `gens(x) = {V(x)}`.
    pub fn to_raw(&self) -> RawConvergenceTable {
        RawConvergenceTable {
            carrier: self.carrier.clone(),
            gens: self.vmax.iter().map(|v| vec![v.clone()]).collect(),
        }
    }

    /// Renames points; `names` must be distinct and as long as the carrier.
    pub fn relabel<S: Into<String>>(&self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let carrier = Arc::new(Carrier::new(names)?);
        if carrier.len() != self.len() {
            return Err(Error::TableLength {
                expected: self.len(),
                got: carrier.len(),
            });
        }
        Ok(LimitSpace {
            carrier,
            vmax: self.vmax.clone(),
        })
    }
}

/// A total function between the carriers of two limit spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    domain: LimitSpace,
    codomain: LimitSpace,
    table: Vec<usize>,
}

/// A point where continuity fails, with the maximal convergent filter whose
/// image does not converge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discontinuity {
    pub point: usize,
    pub filter: PointSet,
}

impl PointMap {
    pub fn new(domain: LimitSpace, codomain: LimitSpace, table: Vec<usize>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::TableLength {
                expected: domain.len(),
                got: table.len(),
            });
        }
        for &y in &table {
            codomain.carrier().check_index(y)?;
        }
        Ok(PointMap {
            domain,
            codomain,
            table,
        })
    }

    /// Builds a map from `(domain id, codomain id)` pairs.
    pub fn from_named(domain: &LimitSpace, codomain: &LimitSpace, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut table = vec![None; domain.len()];
        for (x, y) in pairs {
            table[domain.index_of(x)?] = Some(codomain.index_of(y)?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| Error::Parse(format!("no image for `{}`", domain.name(x)))))
            .collect::<Result<_>>()?;
        Self::new(domain.clone(), codomain.clone(), table)
    }

    pub fn identity(space: &LimitSpace) -> Self {
        PointMap {
            domain: space.clone(),
            codomain: space.clone(),
            table: (0..space.len()).collect(),
        }
    }

    pub fn constant(domain: &LimitSpace, codomain: &LimitSpace, c: usize) -> Result<Self> {
        Self::new(domain.clone(), codomain.clone(), vec![c; domain.len()])
    }

    pub fn domain(&self) -> &LimitSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &LimitSpace {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, set: &PointSet) -> PointSet {
        set.map(|x| self.table[x])
    }

    pub fn is_surjective(&self) -> bool {
        let hit: PointSet = self.table.iter().copied().collect();
        hit.len() == self.codomain.len()
    }

    /// Points mapping into `set`.
    pub fn preimage(&self, set: &PointSet) -> PointSet {
        (0..self.table.len()).filter(|&x| set.contains(self.table[x])).collect()
    }

    /// First point whose maximal convergent filter is sent to a non-convergent
    /// one. Images of finer filters are finer, so maximal filters suffice.
    pub fn discontinuity(&self) -> Option<Discontinuity> {
        (0..self.domain.len()).find_map(|x| {
            let v = self.domain.vmax(x);
            if self.image(v).is_subset(self.codomain.vmax(self.table[x])) {
                None
            } else {
                Some(Discontinuity {
                    point: x,
                    filter: v.clone(),
                })
            }
        })
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuity().is_none()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PointMap) -> Result<PointMap> {
        if self.codomain.carrier() != next.domain.carrier() {
            return Err(Error::CarrierMismatch);
        }
        Ok(PointMap {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            table: self.table.iter().map(|&y| next.table[y]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<Carrier> {
        Arc::new(Carrier::new(["a", "b", "c"]).unwrap())
    }

    fn filt(c: &Arc<Carrier>, ids: &[&str]) -> PrincipalFilter {
        PrincipalFilter::new(c.clone(), c.subset(ids).unwrap()).unwrap()
    }

    #[test]
    fn meet_is_generator_union() {
        let c = abc();
        assert_eq!(filt(&c, &["a"]).meet(&filt(&c, &["b"])).unwrap(), filt(&c, &["a", "b"]));
        assert_eq!(filt(&c, &["a"]).meet(&filt(&c, &["a"])).unwrap(), filt(&c, &["a"]));
        assert_eq!(
            filt(&c, &["a", "b"]).meet(&filt(&c, &["b", "c"])).unwrap(),
            filt(&c, &["a", "b", "c"])
        );
    }

    #[test]
    fn meet_matches_upset_intersection() {
        // The up-sets of {a,b} and {b,c} in the powerset of {a,b,c}, intersected.
        let up = |g: u64| -> Vec<u64> { (0..8).filter(|s| s & g == g).collect() };
        let both: Vec<u64> = up(0b011).into_iter().filter(|s| up(0b110).contains(s)).collect();
        assert_eq!(both, up(0b111));
        let c = abc();
        let m = filt(&c, &["a", "b"]).meet(&filt(&c, &["b", "c"])).unwrap();
        assert_eq!(m.generator().to_mask(), 0b111);
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let c = abc();
        let d = Arc::new(Carrier::new(["x"]).unwrap());
        assert_eq!(filt(&c, &["a"]).meet(&filt(&d, &["x"])), Err(Error::CarrierMismatch));
        assert_eq!(
            filt(&c, &["a"]).is_finer_than(&filt(&d, &["x"])),
            Err(Error::CarrierMismatch)
        );
        assert_eq!(PrincipalFilter::new(c, PointSet::new()), Err(Error::EmptyGenerator));
    }

    #[test]
    fn finer_is_generator_inclusion() {
        let c = abc();
        assert!(filt(&c, &["a"]).is_finer_than(&filt(&c, &["a", "b"])).unwrap());
        assert!(!filt(&c, &["a", "b"]).is_finer_than(&filt(&c, &["a"])).unwrap());
        assert!(filt(&c, &["a", "b"]).is_finer_than(&filt(&c, &["a", "b"])).unwrap());
    }

    #[test]
    fn images_of_filters() {
        let x = LimitSpace::from_named(&["a", "b"], &[]).unwrap();
        let y = LimitSpace::from_named(&["x", "y", "c"], &[]).unwrap();
        let f = PrincipalFilter::new(x.carrier().clone(), PointSet::full(2)).unwrap();
        let konst = PointMap::constant(&x, &y, 2).unwrap();
        assert_eq!(f.image(&konst).unwrap().generator(), &PointSet::singleton(2));
        let m = PointMap::from_named(&x, &y, &[("a", "x"), ("b", "y")]).unwrap();
        assert_eq!(f.image(&m).unwrap().generator(), &PointSet::from_mask(0b11, 3));
        let a = PrincipalFilter::point(x.carrier().clone(), 0).unwrap();
        assert_eq!(a.image(&PointMap::identity(&x)).unwrap(), a);
    }

    #[test]
    fn closure_examples() {
        let c = Arc::new(Carrier::new(["a"]).unwrap());
        let t = RawConvergenceTable::new(c, vec![vec![]]).unwrap();
        assert_eq!(t.close().vmax(0), &PointSet::singleton(0));

        let c = Arc::new(Carrier::new(["a", "b"]).unwrap());
        let t = RawConvergenceTable::new(c.clone(), vec![vec![c.subset(&["a", "b"]).unwrap()], vec![]]).unwrap();
        let s = t.close();
        assert_eq!(s.vmax(0).to_mask(), 0b11);
        assert_eq!(s.vmax(1).to_mask(), 0b10);

        let c = abc();
        let t = RawConvergenceTable::new(
            c.clone(),
            vec![
                vec![c.subset(&["b"]).unwrap(), c.subset(&["c"]).unwrap()],
                vec![],
                vec![],
            ],
        )
        .unwrap();
        assert_eq!(t.close().vmax(0).to_mask(), 0b111);
    }

    #[test]
    fn raw_table_rejects_foreign_points() {
        let c = Arc::new(Carrier::new(["a"]).unwrap());
        assert!(RawConvergenceTable::new(c, vec![vec![PointSet::singleton(3)]]).is_err());
    }

    #[test]
    fn convergence_and_neighborhoods() {
        let s = LimitSpace::from_named(&["a", "b"], &[("a", &["b"])]).unwrap();
        let c = s.carrier().clone();
        let b = PrincipalFilter::point(c.clone(), 1).unwrap();
        assert!(s.converges(&b, 0).unwrap());
        let ab = PrincipalFilter::new(c.clone(), PointSet::full(2)).unwrap();
        assert!(!s.converges(&ab, 1).unwrap());
        let a = PrincipalFilter::point(c, 0).unwrap();
        assert!(s.converges(&ab.meet(&a).unwrap(), 0).unwrap());
        assert_eq!(s.neighborhood(0).generator(), &PointSet::full(2));
        assert_eq!(s.neighborhood(1).generator(), &PointSet::singleton(1));
    }

    #[test]
    fn continuity_witness() {
        let dom = LimitSpace::from_named(&["a", "b"], &[("a", &["b"])]).unwrap();
        let cod = LimitSpace::from_named(&["a", "b"], &[]).unwrap();
        let m = PointMap::new(dom.clone(), cod, vec![0, 1]).unwrap();
        assert_eq!(
            m.discontinuity(),
            Some(Discontinuity {
                point: 0,
                filter: PointSet::full(2)
            })
        );
        assert!(PointMap::identity(&dom).is_continuous());
        assert!(PointMap::constant(&dom, &dom, 1).unwrap().is_continuous());
    }

    #[test]
    fn empty_carrier_is_vacuous() {
        let s = LimitSpace::discrete(Arc::new(Carrier::anonymous(0)));
        assert!(s.is_pretopological() && s.is_pseudotopological());
        assert!(PointMap::identity(&s).is_continuous());
    }

    #[test]
    fn listed_axioms() {
        let c = Arc::new(Carrier::new(["a", "b"]).unwrap());
        let closed = LimitSpace::from_named(&["a", "b"], &[("a", &["b"])]).unwrap();
        let gens = |ids: &[&[&str]]| ids.iter().map(|s| c.subset(s).unwrap()).collect::<Vec<_>>();
        let full =
            RawConvergenceTable::new(c.clone(), vec![gens(&[&["a"], &["b"], &["a", "b"]]), gens(&[&["b"]])]).unwrap();
        assert!(full.axioms().all());
        assert_eq!(full.close(), closed);
        let partial = RawConvergenceTable::new(c.clone(), vec![gens(&[&["a"], &["b"]]), gens(&[])]).unwrap();
        let r = partial.axioms();
        assert!(!r.point_filters && !r.intersections && r.refinements);
    }
}
