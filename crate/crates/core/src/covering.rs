//! Covering maps: atlas verification and search, path and homotopy lifting,
//! and the lifting criterion for maps.
//!
//! An atlas for `p : E → B` lists, for every set `U` of a covering system of
//! `B`, a trivialization `Φ_U : p⁻¹(U) → U × F` over a shared finite fiber
//! index set `F`, stored as `e ↦ (p(e), sheet)`. Charts need not agree on
//! overlaps.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::connectivity::{check_local_cover, components, is_connected, LocalCover};
use crate::constructions::{product, subspace, SizeLimits};
use crate::error::{Error, Result};
use crate::homotopy::{homotopic, HomotopyCertificate, HomotopySystem, HomotopyVerdict};
use crate::paths::{Flag, Walk};
use crate::pointset::PointSet;
use crate::space::{Carrier, LimitSpace, PointMap};

/// One trivialization `Φ_U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    set: PointSet,
    table: BTreeMap<usize, (usize, usize)>,
    inverse: HashMap<(usize, usize), usize>,
}

impl Chart {
    pub fn new(set: PointSet, table: BTreeMap<usize, (usize, usize)>) -> Self {
        let inverse = table.iter().map(|(&e, &bs)| (bs, e)).collect();
        Chart { set, table, inverse }
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn table(&self) -> &BTreeMap<usize, (usize, usize)> {
        &self.table
    }

    pub fn sheet_of(&self, e: usize) -> Option<usize> {
        self.table.get(&e).map(|&(_, s)| s)
    }

    /// `Φ_U⁻¹(b, s)`.
    pub fn point_over(&self, b: usize, sheet: usize) -> Option<usize> {
        self.inverse.get(&(b, sheet)).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringAtlas {
    map: PointMap,
    fiber: usize,
    /// Structure on the fiber index set; discrete for coverings.
    fiber_space: LimitSpace,
    charts: Vec<Chart>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtlasDefect {
    MapNotContinuous {
        point: usize,
    },
    MapNotSurjective {
        point: usize,
    },
    CoverNotLocal {
        point: usize,
    },
    ChartSetOutsideBase {
        chart: usize,
    },
    /// A point of `p⁻¹(U)` missing from the chart, or a charted point outside it.
    ChartDomain {
        chart: usize,
        point: usize,
    },
    ChartProjection {
        chart: usize,
        point: usize,
    },
    ChartNotBijective {
        chart: usize,
    },
    ChartDiscontinuous {
        chart: usize,
        point: usize,
    },
    ChartInverseDiscontinuous {
        chart: usize,
        base_point: usize,
        sheet: usize,
    },
    FiberNotDiscrete {
        point: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasReport {
    pub defects: Vec<AtlasDefect>,
}

impl AtlasReport {
    pub fn is_covering(&self) -> bool {
        self.defects.is_empty()
    }

    /// Every defect, if any, concerns fiber discreteness only.
    pub fn is_locally_trivial(&self) -> bool {
        self.defects
            .iter()
            .all(|d| matches!(d, AtlasDefect::FiberNotDiscrete { .. }))
    }
}

impl CoveringAtlas {
    pub fn new(map: PointMap, fiber: usize, charts: Vec<Chart>) -> Result<Self> {
        let fiber_space = LimitSpace::discrete(Arc::new(Carrier::anonymous(fiber)));
        Self::with_fiber_space(map, fiber_space, charts)
    }

    /// An atlas of a locally trivial map whose charts land in `U × fiber_space`.
    pub fn with_fiber_space(map: PointMap, fiber_space: LimitSpace, charts: Vec<Chart>) -> Result<Self> {
        let fiber = fiber_space.len();
        let (ne, nb) = (map.domain().len(), map.codomain().len());
        for c in &charts {
            map.codomain().carrier().check_set(&c.set)?;
            for (&e, &(b, _)) in &c.table {
                if e >= ne || b >= nb {
                    return Err(Error::IndexOutOfRange {
                        index: e.max(b),
                        size: ne.min(nb),
                    });
                }
            }
        }
        Ok(CoveringAtlas {
            map,
            fiber,
            fiber_space,
            charts,
        })
    }

    pub fn map(&self) -> &PointMap {
        &self.map
    }

    pub fn total(&self) -> &LimitSpace {
        self.map.domain()
    }

    pub fn base(&self) -> &LimitSpace {
        self.map.codomain()
    }

    pub fn fiber_size(&self) -> usize {
        self.fiber
    }

    pub fn fiber_space(&self) -> &LimitSpace {
        &self.fiber_space
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn cover(&self) -> LocalCover {
        LocalCover::global(self.base(), self.charts.iter().map(|c| c.set.clone()).collect())
    }

    /// Checks continuity and surjectivity of `p`, the covering-system
    /// property, every chart as a homeomorphism onto `U × F` with
    /// `q₁ ∘ Φ_U = p`, and discreteness of every fiber.
    pub fn verify(&self) -> AtlasReport {
        let mut defects = Vec::new();
        let (e, b, p) = (self.total(), self.base(), &self.map);
        if let Some(d) = p.discontinuity() {
            defects.push(AtlasDefect::MapNotContinuous { point: d.point });
        }
        let hit: PointSet = p.table().iter().copied().collect();
        if let Some(y) = (0..b.len()).find(|&y| !hit.contains(y)) {
            defects.push(AtlasDefect::MapNotSurjective { point: y });
        }
        if let Err(w) = check_local_cover(b, &self.cover()) {
            defects.push(AtlasDefect::CoverNotLocal { point: w.point });
        }
        for (ci, chart) in self.charts.iter().enumerate() {
            defects.extend(self.chart_defects(ci, chart));
        }
        for x in 0..e.len() {
            let fib = p.apply(x);
            if e.vmax(x).iter().any(|y| y != x && p.apply(y) == fib) {
                defects.push(AtlasDefect::FiberNotDiscrete { point: x });
            }
        }
        AtlasReport { defects }
    }

    fn chart_defects(&self, ci: usize, chart: &Chart) -> Vec<AtlasDefect> {
        let (e, b, p) = (self.total(), self.base(), &self.map);
        let mut out = Vec::new();
        if chart.set.last().is_some_and(|i| i >= b.len()) {
            return vec![AtlasDefect::ChartSetOutsideBase { chart: ci }];
        }
        let pre = p.preimage(&chart.set);
        let charted: PointSet = chart.table.keys().copied().collect();
        if let Some(x) = pre.iter().find(|&x| !charted.contains(x)) {
            out.push(AtlasDefect::ChartDomain { chart: ci, point: x });
        }
        if let Some(x) = charted.iter().find(|&x| !pre.contains(x)) {
            out.push(AtlasDefect::ChartDomain { chart: ci, point: x });
        }
        if let Some((&x, _)) = chart.table.iter().find(|(&x, &(y, _))| p.apply(x) != y) {
            out.push(AtlasDefect::ChartProjection { chart: ci, point: x });
        }
        let images: PointSet = chart
            .table
            .values()
            .filter(|(_, s)| *s < self.fiber)
            .map(|&(y, s)| y * self.fiber + s)
            .collect();
        let bijective = chart
            .table
            .values()
            .all(|&(y, s)| s < self.fiber && chart.set.contains(y))
            && images.len() == chart.table.len()
            && images.len() == chart.set.len() * self.fiber;
        if !bijective {
            out.push(AtlasDefect::ChartNotBijective { chart: ci });
        }
        if !out.is_empty() {
            return out;
        }
        // Φ_U : subspace(E, p⁻¹(U)) → subspace(B, U) × F.
        let upstairs = subspace(e, &pre).expect("preimage lies in E");
        let downstairs = subspace(b, &chart.set).expect("chart set lies in B");
        let prod = product(
            &[downstairs.space.clone(), self.fiber_space.clone()],
            SizeLimits::default(),
        )
        .expect("chart product is small");
        let up_local: Vec<usize> = pre.iter().collect();
        let down_local: HashMap<usize, usize> = chart.set.iter().enumerate().map(|(i, y)| (y, i)).collect();
        let forward: Vec<usize> = up_local
            .iter()
            .map(|x| {
                let (y, s) = chart.table[x];
                down_local[&y] * self.fiber + s
            })
            .collect();
        let mut backward = vec![0; prod.space.len()];
        for (i, &j) in forward.iter().enumerate() {
            backward[j] = i;
        }
        let phi = PointMap::new(upstairs.space.clone(), prod.space.clone(), forward).expect("sizes match");
        let psi = PointMap::new(prod.space, upstairs.space, backward).expect("sizes match");
        if let Some(d) = phi.discontinuity() {
            out.push(AtlasDefect::ChartDiscontinuous {
                chart: ci,
                point: up_local[d.point],
            });
        }
        if let Some(d) = psi.discontinuity() {
            out.push(AtlasDefect::ChartInverseDiscontinuous {
                chart: ci,
                base_point: chart.set.as_slice()[d.point / self.fiber],
                sheet: d.point % self.fiber,
            });
        }
        out
    }

    /// No fiber contains two points joined by a one-jump walk.
    pub fn has_unique_path_lifting(&self) -> bool {
        fibers_edge_free(&self.map)
    }

    fn chart_for(&self, region: &PointSet) -> Option<&Chart> {
        self.charts.iter().find(|c| region.is_subset(&c.set))
    }

    /// The lift of `w` starting at `e0`: every jump is transported inside the
    /// sheet of the first chart containing both of its ends.
    pub fn lift_path(&self, w: &Walk, e0: usize) -> Result<Walk> {
        let (e, b) = (self.total(), self.base());
        e.carrier().check_index(e0)?;
        if w.values().iter().any(|&v| v >= b.len()) {
            return Err(Error::CarrierMismatch);
        }
        if self.map.apply(e0) != w.start() {
            return Err(Error::EndpointMismatch(format!(
                "{} does not lie over {}",
                e.name(e0),
                b.name(w.start())
            )));
        }
        let mut values = vec![e0];
        for (pair, &flag) in w.values().windows(2).zip(w.flags()) {
            let cur = *values.last().unwrap();
            let next = self.step_over(cur, pair[0], pair[1])?;
            if !flag.allows(e, cur, next) {
                return Err(Error::AtlasDefect(format!(
                    "jump {} -> {} does not lift continuously",
                    e.name(cur),
                    e.name(next)
                )));
            }
            values.push(next);
        }
        Walk::new(values, w.flags().to_vec())
    }

    fn step_over(&self, cur: usize, from: usize, to: usize) -> Result<usize> {
        let region: PointSet = [from, to].into_iter().collect();
        let chart = self.chart_for(&region).ok_or_else(|| {
            Error::AtlasDefect(format!(
                "no chart contains {} and {}",
                self.base().name(from),
                self.base().name(to)
            ))
        })?;
        let sheet = chart
            .sheet_of(cur)
            .ok_or_else(|| Error::AtlasDefect(format!("{} is not charted", self.total().name(cur))))?;
        chart
            .point_over(to, sheet)
            .ok_or_else(|| Error::AtlasDefect(format!("sheet {sheet} misses {}", self.base().name(to))))
    }

    /// Transports a homotopy certificate from `B` to `E` move by move,
    /// starting from `lift1`, a lift of `cert.from`. Each move is lifted inside
    /// the sheet of a chart containing everything it touches. The result is
    /// cross-checked against an independent [`lift_path`](Self::lift_path) of
    /// `cert.to`.
    pub fn lift_homotopy(&self, cert: &HomotopyCertificate, sys: &HomotopySystem, lift1: &Walk) -> Result<Walk> {
        let e = self.total();
        if lift1.first_invalid_step(e).is_some() || lift1.map_values(|v| self.map.apply(v)) != cert.from {
            return Err(Error::AtlasDefect(
                "the given walk does not lift the certificate's source".into(),
            ));
        }
        let mut down = cert.from.clone();
        let mut up = lift1.clone();
        for m in &cert.moves {
            let next_down = m.apply(&down, sys)?;
            let region = down.segment(m.start, m.end).support().union(&m.replacement.support());
            let chart = self.chart_for(&region).ok_or_else(|| {
                Error::MoveNotLiftable(format!("move at {}..={} spans no single chart", m.start, m.end))
            })?;
            let sheet = chart
                .sheet_of(up.values()[m.start])
                .ok_or_else(|| Error::AtlasDefect("lift left the chart".into()))?;
            let lifted_values = m
                .replacement
                .values()
                .iter()
                .map(|&v| chart.point_over(v, sheet))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::AtlasDefect(format!("sheet {sheet} is incomplete")))?;
            let piece = Walk::new(lifted_values, m.replacement.flags().to_vec())?;
            if piece.end() != up.values()[m.end] {
                return Err(Error::AtlasDefect("lifted move changes the endpoint".into()));
            }
            let next_up = up.splice(m.start, m.end, &piece);
            if next_up.first_invalid_step(e).is_some() {
                return Err(Error::AtlasDefect("lifted move is not continuous".into()));
            }
            down = next_down;
            up = next_up;
        }
        if down != cert.to {
            return Err(Error::InvalidMove("certificate does not reach its target".into()));
        }
        let direct = self.lift_path(&cert.to, lift1.start())?;
        if direct != up {
            return Err(Error::AtlasDefect(
                "lifted homotopy disagrees with the path lift".into(),
            ));
        }
        Ok(up)
    }

    /// Lifts `f : Y → B` through `p` with `f'(y0) = e0`, or finds a loop of
    /// `Y` whose image does not lift to a loop. Lifts are built along a
    /// breadth-first spanning tree of `Y`; every non-tree edge closes a loop
    /// whose image must lift to a loop. When one does not, the homotopy engine
    /// on `B` is asked to certify the image loop is essential.
    pub fn lift_map(&self, f: &PointMap, y0: usize, e0: usize, sys: &HomotopySystem) -> Result<LiftOutcome> {
        let y = f.domain();
        if f.codomain().carrier() != self.base().carrier() {
            return Err(Error::CarrierMismatch);
        }
        if let Some(d) = f.discontinuity() {
            return Err(Error::NotContinuous(y.name(d.point).to_string()));
        }
        y.carrier().check_index(y0)?;
        self.total().carrier().check_index(e0)?;
        if !is_connected(y) {
            return Err(Error::NotConnected);
        }
        if self.map.apply(e0) != f.apply(y0) {
            return Err(Error::EndpointMismatch("basepoints do not match under p and f".into()));
        }
        let adj = y.adjacency();
        let mut parent = vec![usize::MAX; y.len()];
        let mut order = vec![y0];
        parent[y0] = y0;
        let mut queue = VecDeque::from([y0]);
        while let Some(a) = queue.pop_front() {
            for &c in &adj[a] {
                if parent[c] == usize::MAX {
                    parent[c] = a;
                    order.push(c);
                    queue.push_back(c);
                }
            }
        }
        let tree_walk = |t: usize| -> Walk {
            let mut v = vec![t];
            while *v.last().unwrap() != y0 {
                v.push(parent[*v.last().unwrap()]);
            }
            v.reverse();
            Walk::with_canonical_flags(y, v).expect("tree edges are jumps")
        };
        let push = |w: &Walk| w.map_values(|v| f.apply(v));
        let mut table = vec![0; y.len()];
        for &t in &order {
            table[t] = self.lift_path(&push(&tree_walk(t)), e0)?.end();
        }
        for a in 0..y.len() {
            for &c in adj[a].iter().filter(|&&c| c > a) {
                if parent[c] == a || parent[a] == c {
                    continue;
                }
                let jump = Walk::new(vec![a, c], vec![Flag::canonical(y, a, c).expect("adjacent")])?;
                let lp = tree_walk(a).concat(&jump)?.concat(&tree_walk(c).reverse())?;
                let image = push(&lp);
                let lifted = self.lift_path(&image, e0)?;
                if lifted.end() == e0 {
                    continue;
                }
                return match homotopic(&image, &Walk::constant(image.start()), sys)? {
                    HomotopyVerdict::No => Ok(LiftOutcome::Obstruction {
                        domain_loop: lp,
                        image,
                        lift: lifted,
                    }),
                    HomotopyVerdict::Unknown => Ok(LiftOutcome::Indeterminate { domain_loop: lp, image }),
                    HomotopyVerdict::Yes(_) => Err(Error::AtlasDefect(
                        "a null-homotopic loop lifts to an open walk; the homotopy system contradicts the atlas".into(),
                    )),
                };
            }
        }
        let lift = PointMap::new(y.clone(), self.total().clone(), table)?;
        if let Some(d) = lift.discontinuity() {
            return Err(Error::AtlasDefect(format!(
                "lift is not continuous at {}",
                y.name(d.point)
            )));
        }
        debug_assert!((0..y.len()).all(|t| self.map.apply(lift.apply(t)) == f.apply(t)));
        Ok(LiftOutcome::Lifted(lift))
    }
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(PointMap),
    /// `image = f ∘ domain_loop` lifts to the open walk `lift`, and the engine
    /// certified `image` is not null-homotopic.
    Obstruction {
        domain_loop: Walk,
        image: Walk,
        lift: Walk,
    },
    Indeterminate {
        domain_loop: Walk,
        image: Walk,
    },
}

/// No fiber of `p` contains distinct `e, e'` with `e ∈ V(e')` or `e' ∈ V(e)`.
pub fn fibers_edge_free(p: &PointMap) -> bool {
    let e = p.domain();
    (0..e.len()).all(|x| e.vmax(x).iter().all(|y| y == x || p.apply(y) != p.apply(x)))
}

/// Looks for an atlas of `p` over the unit balls `{V(b)}`. Each `V(b)` is
/// connected, so a trivialization over it must use the components of
/// `p⁻¹(V(b))` as its sheets; the search checks each component is carried
/// homeomorphically onto `V(b)` and that all balls have the same number of
/// sheets. A ball that fails cannot be replaced by a larger set of the same
/// family, so failure here means no atlas over the family exists.
pub fn search_atlas(p: &PointMap) -> Result<Option<CoveringAtlas>> {
    if let Some(d) = p.discontinuity() {
        return Err(Error::NotContinuous(p.domain().name(d.point).to_string()));
    }
    if !p.is_surjective() {
        let hit: PointSet = p.table().iter().copied().collect();
        let y = (0..p.codomain().len()).find(|&y| !hit.contains(y)).unwrap();
        return Err(Error::NotSurjective(p.codomain().name(y).to_string()));
    }
    let (e, b) = (p.domain(), p.codomain());
    let mut sets: Vec<PointSet> = b.vmax_table().to_vec();
    crate::connectivity::dedup_keep_order(&mut sets);
    let mut fiber = None;
    let mut charts = Vec::with_capacity(sets.len());
    for set in sets {
        let pre = p.preimage(&set);
        let sub = subspace(e, &pre)?;
        let local: Vec<usize> = pre.iter().collect();
        let sheets = components(&sub.space);
        match fiber {
            None => fiber = Some(sheets.len()),
            Some(k) if k != sheets.len() => return Ok(None),
            Some(_) => {}
        }
        let mut table = BTreeMap::new();
        for (s, comp) in sheets.iter().enumerate() {
            let image: PointSet = comp.iter().map(|i| p.apply(local[i])).collect();
            if image != set || comp.len() != set.len() {
                return Ok(None);
            }
            for i in comp.iter() {
                table.insert(local[i], (p.apply(local[i]), s));
            }
        }
        charts.push(Chart::new(set, table));
    }
    let atlas = CoveringAtlas::new(p.clone(), fiber.unwrap_or(0), charts)?;
    Ok(atlas.verify().is_covering().then_some(atlas))
}

/// Atlas for `p₂ ∘ p₁` found by [`search_atlas`].
pub fn compose(upper: &CoveringAtlas, lower: &CoveringAtlas) -> Result<Option<CoveringAtlas>> {
    let composite = upper.map().then(lower.map())?;
    search_atlas(&composite)
}

/// Restricts `p` to a component `C` of `E`, over the component `p(C)` of `B`.
pub fn restrict_to_component(atlas: &CoveringAtlas, component: &PointSet) -> Result<Option<CoveringAtlas>> {
    let image = atlas.map().image(component);
    let up = subspace(atlas.total(), component)?;
    let down = subspace(atlas.base(), &image)?;
    let local: HashMap<usize, usize> = image.iter().enumerate().map(|(i, y)| (y, i)).collect();
    let table = component.iter().map(|x| local[&atlas.map().apply(x)]).collect();
    let p = PointMap::new(up.space, down.space, table)?;
    if !p.is_continuous() {
        return Ok(None);
    }
    search_atlas(&p)
}
