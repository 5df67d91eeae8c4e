//! Radius-bounded fragments of the universal covering space.
//!
//! Points of the universal cover are homotopy classes of walks from a base
//! point, each represented by the normal form the homotopy engine assigns.
//! Classes are grown breadth first by appending one jump at a time; every
//! class reached within `radius` jumps is expanded and forms the interior,
//! classes first reached at `radius + 1` form the boundary and are never
//! expanded.
//!
//! On the interior the convergence structure is the chart-local copy of `V`:
//! `V([γ]) = {[γ]} ∪ {[γ·(x → y)] : y ∈ V(x)}` where `x` is the end of `γ`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;

use crate::connectivity::components;
use crate::constructions::subspace;
use crate::error::Result;
use crate::homotopy::{normalize, HomotopySystem};
use crate::paths::{path_components, Flag, Walk};
use crate::pointset::PointSet;
use crate::space::{Carrier, LimitSpace, PointMap};

/// Loop enumerations in the probes stop after this many loops.
const LOOP_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkClass {
    pub normal_form: Walk,
    /// The normal form was reached within budget.
    pub certified: bool,
    /// Jumps from the base class in the class graph.
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct CoverFragment {
    sys: HomotopySystem,
    base: usize,
    radius: usize,
    classes: Vec<WalkClass>,
    index: HashMap<Walk, usize>,
    /// `(class, y) ↦` class of the class's normal form followed by a jump to `y`.
    steps: HashMap<(usize, usize), usize>,
    interior: Vec<usize>,
    local: HashMap<usize, usize>,
    space: LimitSpace,
}

/// Grows the fragment of radius `radius` around the constant class at `x0`.
pub fn build_fragment(sys: &HomotopySystem, x0: usize, radius: usize) -> Result<CoverFragment> {
    let space = sys.space();
    space.carrier().check_index(x0)?;
    let adj = space.adjacency();
    let root = Walk::constant(x0);
    let mut classes = vec![WalkClass {
        normal_form: root.clone(),
        certified: true,
        depth: 0,
    }];
    let mut index = HashMap::from([(root, 0)]);
    let mut steps = HashMap::new();
    let mut frontier = vec![0];
    for depth in 0..=radius {
        // Normal forms are computed in parallel; merging stays sequential and
        // follows the frontier order, so class numbering is deterministic.
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&c| adj[classes[c].normal_form.end()].iter().map(move |&y| (c, y)))
            .collect();
        let results = jobs
            .par_iter()
            .map(|&(c, y)| {
                let nf = &classes[c].normal_form;
                let x = nf.end();
                let flag = Flag::canonical(space, x, y).expect("adjacent");
                let w = nf.concat(&Walk::from_parts_unchecked(vec![x, y], vec![flag]))?;
                normalize(&w, sys)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::new();
        for (&(c, y), n) in jobs.iter().zip(results) {
            let id = match index.get(&n.walk) {
                Some(&id) => {
                    classes[id].certified |= n.certified;
                    id
                }
                None => {
                    let id = classes.len();
                    index.insert(n.walk.clone(), id);
                    classes.push(WalkClass {
                        normal_form: n.walk,
                        certified: n.certified,
                        depth: depth + 1,
                    });
                    if n.certified {
                        next.push(id);
                    }
                    id
                }
            };
            steps.insert((c, y), id);
        }
        frontier = next;
    }
    let interior: Vec<usize> = (0..classes.len())
        .filter(|&c| classes[c].certified && classes[c].depth <= radius)
        .collect();
    let local: HashMap<usize, usize> = interior.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let vmax = interior
        .iter()
        .map(|&c| {
            let x = classes[c].normal_form.end();
            let mut v = PointSet::singleton(local[&c]);
            for y in space.vmax(x).iter().filter(|&y| y != x) {
                if let Some(i) = steps.get(&(c, y)).and_then(|d| local.get(d)) {
                    v.insert(*i);
                }
            }
            v
        })
        .collect();
    let names = interior.iter().map(|&c| class_name(space, &classes[c].normal_form));
    let carrier = Carrier::new(names)?;
    let frag_space = LimitSpace::from_vmax(Arc::new(carrier), vmax)?;
    Ok(CoverFragment {
        sys: sys.clone(),
        base: x0,
        radius,
        classes,
        index,
        steps,
        interior,
        local,
        space: frag_space,
    })
}

fn class_name(space: &LimitSpace, w: &Walk) -> String {
    format!("[{}]", w.names(space).join(" "))
}

impl CoverFragment {
    pub fn system(&self) -> &HomotopySystem {
        &self.sys
    }

    pub fn base_point(&self) -> usize {
        self.base
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Every class reached, including boundary and uncertified ones.
    pub fn classes(&self) -> &[WalkClass] {
        &self.classes
    }

    /// Class ids of the interior, in the order of [`space`](Self::space).
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|c| !self.local.contains_key(c))
            .collect()
    }

    pub fn uncertified(&self) -> usize {
        self.classes.iter().filter(|c| !c.certified).count()
    }

    /// The interior as a limit space.
    pub fn space(&self) -> &LimitSpace {
        &self.space
    }

    /// Interior position of a class id.
    pub fn interior_index(&self, class: usize) -> Option<usize> {
        self.local.get(&class).copied()
    }

    /// Class id of the walk from the base point, by normalization.
    pub fn class_of(&self, w: &Walk) -> Result<Option<usize>> {
        let n = normalize(w, &self.sys)?;
        Ok(self.index.get(&n.walk).copied().filter(|&c| self.classes[c].certified))
    }

    /// Follows `w` jump by jump through the class graph from `class`; `None`
    /// when the walk leaves the expanded part.
    pub fn transport(&self, class: usize, w: &Walk) -> Option<usize> {
        if self.classes.get(class)?.normal_form.end() != w.start() {
            return None;
        }
        w.values()[1..].iter().try_fold(class, |c, &y| {
            if !self.local.contains_key(&c) {
                return None;
            }
            self.steps.get(&(c, y)).copied()
        })
    }

    /// The endpoint projection on the interior.
    pub fn phi_bar(&self) -> PointMap {
        let table = self
            .interior
            .iter()
            .map(|&c| self.classes[c].normal_form.end())
            .collect();
        PointMap::new(self.space.clone(), self.sys.space().clone(), table).expect("endpoints lie in the space")
    }

    /// `B★` for `class` over the cover set `k`: every class `[γ·τ]` with `τ`
    /// a walk inside the set. `None` when the search leaves the interior.
    pub fn sheet(&self, class: usize, k: usize) -> Option<PointSet> {
        let u = &self.sys.cover()[k];
        let space = self.sys.space();
        if !u.contains(self.classes[class].normal_form.end()) || !self.local.contains_key(&class) {
            return None;
        }
        let mut seen = PointSet::singleton(class);
        let mut queue = VecDeque::from([class]);
        while let Some(c) = queue.pop_front() {
            let x = self.classes[c].normal_form.end();
            for y in u.iter().filter(|&y| y != x && space.adjacent(x, y)) {
                let d = *self.steps.get(&(c, y))?;
                if !self.local.contains_key(&d) {
                    return None;
                }
                if seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        Some(seen)
    }
}

/// Outcome of checking one `B★` chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCheck {
    pub class: usize,
    pub cover_set: usize,
    pub bijective: bool,
    pub homeomorphic: bool,
}

#[derive(Clone, Debug)]
pub struct UniversalReport {
    /// Charts lying inside the interior, each checked.
    pub charts: Vec<ChartCheck>,
    /// Charts that reach past the interior and were skipped.
    pub truncated_charts: usize,
    /// Sheets over the same cover set are equal or disjoint.
    pub sheets_disjoint: bool,
    pub fibers_discrete: bool,
    /// Loops of classes at the base class that were normalized.
    pub loops_checked: usize,
    /// Every such loop normalized to the constant loop.
    pub simply_connected: bool,
    /// The enumeration stopped at its cap before covering every length.
    pub loop_enumeration_capped: bool,
    pub path_connected: bool,
    /// Cover sets containing a loop that is essential in the set itself; the
    /// homotopy system declares such loops contractible by fiat.
    pub cover_stipulates_contractibility: Vec<PointSet>,
    pub uncertified_classes: usize,
}

impl UniversalReport {
    pub fn atlas_ok(&self) -> bool {
        self.charts.iter().all(|c| c.bijective && c.homeomorphic) && self.sheets_disjoint
    }

    pub fn passes(&self) -> bool {
        self.atlas_ok()
            && self.fibers_discrete
            && self.simply_connected
            && !self.loop_enumeration_capped
            && self.path_connected
            && self.uncertified_classes == 0
    }
}

/// Checks the fragment against the covering and simple-connectivity
/// properties of the universal cover, on its interior. Loops of up to
/// `loop_len` jumps at the base class are normalized under the lifted
/// covering system of `B★` sheets.
pub fn verify_universal(frag: &CoverFragment, loop_len: usize) -> Result<UniversalReport> {
    let x = frag.sys.space();
    let phi = frag.phi_bar();
    let mut charts = Vec::new();
    let mut truncated = 0;
    let mut sheets_by_set: BTreeMap<usize, Vec<PointSet>> = BTreeMap::new();
    for &c in &frag.interior {
        let end = frag.classes[c].normal_form.end();
        for (k, u) in frag.sys.cover().iter().enumerate() {
            if !u.contains(end) {
                continue;
            }
            let Some(sheet) = frag.sheet(c, k) else {
                truncated += 1;
                continue;
            };
            let local = sheet.map(|d| frag.local[&d]);
            let image = phi.image(&local);
            let bijective = image == *u && local.len() == u.len();
            let homeomorphic = bijective && {
                let up = subspace(&frag.space, &local)?;
                let down = subspace(x, u)?;
                let pos: HashMap<usize, usize> = u.iter().enumerate().map(|(i, y)| (y, i)).collect();
                let forward: Vec<usize> = local.iter().map(|i| pos[&phi.apply(i)]).collect();
                let mut backward = vec![0; forward.len()];
                for (i, &j) in forward.iter().enumerate() {
                    backward[j] = i;
                }
                PointMap::new(up.space.clone(), down.space.clone(), forward)?.is_continuous()
                    && PointMap::new(down.space, up.space, backward)?.is_continuous()
            };
            charts.push(ChartCheck {
                class: c,
                cover_set: k,
                bijective,
                homeomorphic,
            });
            sheets_by_set.entry(k).or_default().push(local);
        }
    }
    let sheets_disjoint = sheets_by_set
        .values()
        .all(|ss| ss.iter().all(|a| ss.iter().all(|b| a == b || !a.intersects(b))));

    let fs = &frag.space;
    let fibers_discrete = (0..fs.len()).all(|i| fs.vmax(i).iter().all(|j| j == i || phi.apply(j) != phi.apply(i)));

    // Lifted covering system: complete sheets, plus balls where no sheet fits.
    let mut lifted: Vec<PointSet> = sheets_by_set.into_values().flatten().collect();
    crate::connectivity::dedup_keep_order(&mut lifted);
    for i in 0..fs.len() {
        if !lifted.iter().any(|s| fs.vmax(i).is_subset(s)) {
            lifted.push(fs.vmax(i).clone());
        }
    }
    let up_sys = HomotopySystem::new(fs.clone(), lifted, frag.sys.budget())?;
    let mut loops_checked = 0;
    let mut simply_connected = true;
    let capped = for_each_loop(fs, 0, loop_len, |w| {
        loops_checked += 1;
        match normalize(w, &up_sys) {
            Ok(n) if n.certified && n.walk.is_constant() => true,
            _ => {
                simply_connected = false;
                false
            }
        }
    });

    let path_connected = path_components(fs).len() <= 1;
    let mut stipulated = Vec::new();
    for u in frag.sys.cover() {
        if u.len() >= 3 && essential_loop_inside(x, u, frag.sys.budget())? {
            stipulated.push(u.clone());
        }
    }
    Ok(UniversalReport {
        charts,
        truncated_charts: truncated,
        sheets_disjoint,
        fibers_discrete,
        loops_checked,
        simply_connected,
        loop_enumeration_capped: capped,
        path_connected,
        cover_stipulates_contractibility: stipulated,
        uncertified_classes: frag.uncertified(),
    })
}

/// Visits every loop at `base` with 1 to `max_len` jumps and canonical flags
/// until `f` returns false. Returns true when the visit stopped at the cap.
fn for_each_loop(space: &LimitSpace, base: usize, max_len: usize, mut f: impl FnMut(&Walk) -> bool) -> bool {
    if space.is_empty() {
        return false;
    }
    let adj = space.adjacency();
    // Jumps back to the base, to prune walks that cannot return in time.
    let mut dist = vec![usize::MAX; space.len()];
    dist[base] = 0;
    let mut queue = VecDeque::from([base]);
    while let Some(p) = queue.pop_front() {
        for &q in &adj[p] {
            if dist[q] == usize::MAX {
                dist[q] = dist[p] + 1;
                queue.push_back(q);
            }
        }
    }
    let mut count = 0;
    let mut stack = vec![base];
    // `Err(true)` when capped, `Err(false)` when `f` asked to stop.
    fn go(
        space: &LimitSpace,
        adj: &[Vec<usize>],
        dist: &[usize],
        max_len: usize,
        stack: &mut Vec<usize>,
        count: &mut usize,
        f: &mut dyn FnMut(&Walk) -> bool,
    ) -> Result<(), bool> {
        let p = *stack.last().unwrap();
        let steps = stack.len() - 1;
        if steps > 0 && p == stack[0] {
            *count += 1;
            if *count > LOOP_CAP {
                return Err(true);
            }
            let w = Walk::with_canonical_flags(space, stack.clone()).expect("adjacent steps");
            if !f(&w) {
                return Err(false);
            }
        }
        if steps == max_len {
            return Ok(());
        }
        for &q in &adj[p] {
            if dist[q] < max_len - steps {
                stack.push(q);
                let r = go(space, adj, dist, max_len, stack, count, f);
                stack.pop();
                r?;
            }
        }
        Ok(())
    }
    go(space, &adj, &dist, max_len, &mut stack, &mut count, &mut f) == Err(true)
}

/// Whether the subspace on `u`, with only its own balls contractible, carries
/// a loop of at most `2|u|` jumps that does not normalize to a constant.
fn essential_loop_inside(space: &LimitSpace, u: &PointSet, budget: usize) -> Result<bool> {
    let sub = subspace(space, u)?.space;
    let sys = HomotopySystem::balls(sub.clone(), budget);
    for comp in components(&sub) {
        let base = comp.first().expect("components are nonempty");
        let mut essential = false;
        for_each_loop(&sub, base, 2 * u.len(), |w| {
            let n = normalize(w, &sys);
            essential = matches!(n, Ok(n) if n.certified && !n.walk.is_constant());
            !essential
        });
        if essential {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi1Verdict {
    Trivial,
    /// One generator whose action on the fiber over the base point is a
    /// single chain, as for the integers.
    InfiniteCyclicCompatible,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Pi1Report {
    /// Normal forms of the certified loop classes at the base point.
    pub loop_classes: Vec<Walk>,
    /// A generating set under concatenation within the length bound, chosen
    /// greedily by (length, values).
    pub generators: Vec<Walk>,
    /// Length of the chain the first generator's shift forms on the fiber,
    /// when it forms one.
    pub shift_chain: Option<usize>,
    pub uncertified_classes: usize,
    pub verdict: Pi1Verdict,
}

/// Loop classes at `x0` of length at most `max_len`, a greedy generating set,
/// and evidence for the shape of the group.
pub fn pi1_probe(sys: &HomotopySystem, x0: usize, max_len: usize) -> Result<Pi1Report> {
    let frag = build_fragment(sys, x0, max_len)?;
    let mut fiber: Vec<usize> = frag
        .interior
        .iter()
        .copied()
        .filter(|&c| frag.classes[c].normal_form.end() == x0)
        .collect();
    let nf = |c: usize| &frag.classes[c].normal_form;
    fiber.sort_by(|&a, &b| (nf(a).len(), nf(a).values()).cmp(&(nf(b).len(), nf(b).values())));
    let in_fiber: HashMap<&Walk, usize> = fiber.iter().map(|&c| (nf(c), c)).collect();

    // `a·g` as a fiber class, when it lies within the bound.
    let times = |a: usize, g: &Walk| -> Result<Option<usize>> {
        let n = normalize(&nf(a).concat(g)?, sys)?;
        Ok(if n.certified {
            in_fiber.get(&n.walk).copied()
        } else {
            None
        })
    };

    let identity = 0;
    let mut generated = PointSet::singleton(identity);
    let mut generators: Vec<Walk> = Vec::new();
    for &c in &fiber {
        if generated.contains(c) {
            continue;
        }
        generators.push(nf(c).clone());
        let gens: Vec<Walk> = generators.iter().flat_map(|g| [g.clone(), g.reverse()]).collect();
        let mut queue: VecDeque<usize> = generated.iter().collect();
        while let Some(a) = queue.pop_front() {
            for g in &gens {
                if let Some(b) = times(a, g)? {
                    if generated.insert(b) {
                        queue.push_back(b);
                    }
                }
            }
        }
    }

    let shift_chain = match generators.first() {
        Some(g) => {
            let mut shift = HashMap::new();
            for &a in &fiber {
                if let Some(b) = times(a, g)? {
                    shift.insert(a, b);
                }
            }
            chain_length(&fiber, &shift)
        }
        None => None,
    };
    let uncertified = frag.uncertified();
    let verdict = if uncertified > 0 {
        Pi1Verdict::Inconclusive
    } else if generators.is_empty() {
        Pi1Verdict::Trivial
    } else if generators.len() == 1 && shift_chain == Some(fiber.len()) {
        Pi1Verdict::InfiniteCyclicCompatible
    } else {
        Pi1Verdict::Inconclusive
    };
    Ok(Pi1Report {
        loop_classes: fiber.iter().map(|&c| nf(c).clone()).collect(),
        generators,
        shift_chain,
        uncertified_classes: uncertified,
        verdict,
    })
}

/// Length of the single injective chain `shift` traces through all of
/// `nodes`, if it is one.
fn chain_length(nodes: &[usize], shift: &HashMap<usize, usize>) -> Option<usize> {
    let mut targets: Vec<usize> = shift.values().copied().collect();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() != shift.len() || shift.len() + 1 != nodes.len() {
        return None;
    }
    let start = nodes.iter().copied().find(|n| !targets.contains(n))?;
    let mut len = 1;
    let mut at = start;
    while let Some(&next) = shift.get(&at) {
        at = next;
        len += 1;
        if len > nodes.len() {
            return None;
        }
    }
    (len == nodes.len()).then_some(len)
}

/// Conjugation of loop classes at the base point along `w`.
#[derive(Clone, Debug)]
pub struct Transport {
    /// `(τ, w⁻¹·τ·w)` as normal forms, with the certification of the image.
    pub entries: Vec<(Walk, Walk, bool)>,
}

impl Transport {
    /// Distinct certified sources go to distinct images.
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.entries.iter().filter(|e| e.2).all(|e| seen.insert(&e.1))
    }
}

/// Moves every loop class of the fragment's fiber over the base point to the
/// end of `w`.
pub fn basepoint_transport(frag: &CoverFragment, w: &Walk) -> Result<Transport> {
    if w.start() != frag.base {
        return Err(crate::Error::EndpointMismatch(
            "walk must start at the base point".into(),
        ));
    }
    let back = w.reverse();
    let mut entries = Vec::new();
    for &c in &frag.interior {
        let tau = &frag.classes[c].normal_form;
        if tau.end() != frag.base {
            continue;
        }
        let n = normalize(&back.concat(tau)?.concat(w)?, &frag.sys)?;
        entries.push((tau.clone(), n.walk, n.certified));
    }
    Ok(Transport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{cycle, star};

    #[test]
    fn one_point() {
        let sys = HomotopySystem::balls(LimitSpace::point(), 1000);
        for r in [0, 3] {
            let f = build_fragment(&sys, 0, r).unwrap();
            assert_eq!(f.space().len(), 1);
            assert!(f.boundary().is_empty());
        }
    }

    #[test]
    fn star_fragment_is_the_star() {
        let s = star(3);
        let sys = HomotopySystem::new(s.clone(), vec![PointSet::full(4)], 1000).unwrap();
        let f = build_fragment(&sys, 0, 6).unwrap();
        assert_eq!(f.space().len(), 4);
        let phi = f.phi_bar();
        assert!(phi.is_surjective() && phi.is_continuous());
        let r = verify_universal(&f, 8).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.cover_stipulates_contractibility.is_empty());
        assert_eq!(pi1_probe(&sys, 0, 6).unwrap().verdict, Pi1Verdict::Trivial);
    }

    #[test]
    fn cycle_fragment_is_a_line() {
        let c = cycle(8);
        let sys = HomotopySystem::balls(c, 1000);
        let f = build_fragment(&sys, 0, 10).unwrap();
        assert_eq!(f.space().len(), 21);
        assert_eq!(f.boundary().len(), 2);
        let degrees: Vec<usize> = (0..21).map(|i| f.space().vmax(i).len()).collect();
        assert_eq!(degrees.iter().filter(|&&d| d == 2).count(), 2);
        let r = verify_universal(&f, 8).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn whole_cycle_as_one_set_collapses() {
        let c = cycle(8);
        let sys = HomotopySystem::new(c, vec![PointSet::full(8)], 1000).unwrap();
        let f = build_fragment(&sys, 0, 12).unwrap();
        assert_eq!(f.space().len(), 8);
        let r = verify_universal(&f, 10).unwrap();
        assert!(r.simply_connected);
        assert_eq!(r.cover_stipulates_contractibility, vec![PointSet::full(8)]);
        assert_eq!(pi1_probe(&sys, 0, 12).unwrap().verdict, Pi1Verdict::Trivial);
    }

    #[test]
    fn transport_along_an_edge() {
        let c = cycle(8);
        let sys = HomotopySystem::balls(c.clone(), 1000);
        let f = build_fragment(&sys, 0, 16).unwrap();
        let w = Walk::with_canonical_flags(&c, vec![0, 1]).unwrap();
        let t = basepoint_transport(&f, &w).unwrap();
        assert_eq!(t.entries.len(), 5);
        assert!(t.is_injective());
        let t0 = basepoint_transport(&f, &Walk::constant(0)).unwrap();
        assert!(t0.entries.iter().all(|(a, b, ok)| a == b && *ok));
    }
}
