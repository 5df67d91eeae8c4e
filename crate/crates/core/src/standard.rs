//! Small named spaces and maps used throughout the tests, the CLI data files
//! and the documentation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;

use crate::covering::{Chart, CoveringAtlas};
use crate::paths::{Flag, StepPath};
use crate::pointset::PointSet;
use crate::space::{Carrier, LimitSpace, PointMap};

/// Symmetric graph space: `V(x) = {x} ∪ neighbors(x)`.
pub fn graph_space(names: Vec<String>, edges: &[(usize, usize)]) -> LimitSpace {
    let n = names.len();
    let mut vmax: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
    for &(a, b) in edges {
        vmax[a].insert(b);
        vmax[b].insert(a);
    }
    LimitSpace::from_vmax(Arc::new(Carrier::new(names).expect("distinct names")), vmax).expect("reflexive")
}

/// The `n`-cycle with points `{prefix}0 … {prefix}{n-1}` and
/// `V(v_i) = {v_{i-1}, v_i, v_{i+1}}`; the scale-`r` sample of a circle.
pub fn cycle_named(n: usize, prefix: &str) -> LimitSpace {
    assert!(n >= 3, "a cycle needs at least three points");
    let names = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph_space(names, &edges)
}

pub fn cycle(n: usize) -> LimitSpace {
    cycle_named(n, "v")
}

/// Path graph `p0 - p1 - … - p{n-1}`.
pub fn path_graph(n: usize) -> LimitSpace {
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph_space(names, &edges)
}

/// A center `c` joined to leaves `l1 … lk`.
pub fn star(k: usize) -> LimitSpace {
    let mut names = vec!["c".to_string()];
    names.extend((1..=k).map(|i| format!("l{i}")));
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    graph_space(names, &edges)
}

/// Two points with `V(a) = {a, b}` and `V(b) = {b}`.
pub fn arrow() -> LimitSpace {
    LimitSpace::from_named(&["a", "b"], &[("a", &["b"])]).expect("valid")
}

/// Two `k`-cycles sharing the point `w`: `w, a1 … a{k-1}, b1 … b{k-1}`.
pub fn figure_eight(k: usize) -> LimitSpace {
    let mut names = vec!["w".to_string()];
    names.extend((1..k).map(|i| format!("a{i}")));
    names.extend((1..k).map(|i| format!("b{i}")));
    let a = |i: usize| if i.is_multiple_of(k) { 0 } else { i };
    let b = |i: usize| if i.is_multiple_of(k) { 0 } else { k - 1 + i };
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((a(i), a(i + 1)));
        edges.push((b(i), b(i + 1)));
    }
    graph_space(names, &edges)
}

/// The folding map from [`figure_eight`]`(k)` onto [`cycle`]`(k)`, sending
/// both loops around the cycle.
pub fn figure_eight_fold(k: usize) -> PointMap {
    let e = figure_eight(k);
    let c = cycle(k);
    let mut table = vec![0];
    table.extend(1..k);
    table.extend(1..k);
    PointMap::new(e, c, table).expect("valid table")
}

/// The right-closed staircase `v0, v1, …, vk` on a cycle, one step per cut,
/// taking the new value at each cut.
pub fn staircase(space: &LimitSpace, k: usize) -> StepPath {
    let values: Vec<usize> = (0..=k).map(|i| i % space.len()).collect();
    let cuts = (1..=k as i64).map(|i| Ratio::new(i, k as i64 + 1)).collect();
    StepPath::new(values, cuts, vec![Flag::Right; k]).expect("well-formed staircase")
}

/// The `sheets`-fold covering of the `n`-cycle by the `n·sheets`-cycle
/// (`e_k ↦ v_{k mod n}`), charted over the unit balls. With two sheets over
/// the 8-cycle this is the 16-point line segment with its ends joined. Below
/// `n = 4` a ball is the whole cycle and the charts fail for `sheets > 1`.
pub fn cyclic_cover(n: usize, sheets: usize) -> CoveringAtlas {
    let total = cycle_named(n * sheets, "e");
    let base = cycle(n);
    let big = n * sheets;
    let map = PointMap::new(total, base.clone(), (0..big).map(|k| k % n).collect()).expect("valid table");
    let charts = (0..n)
        .map(|i| {
            let set = base.vmax(i).clone();
            let lo = (i + n - 1) % n;
            let table: BTreeMap<usize, (usize, usize)> = (0..big)
                .filter(|k| set.contains(k % n))
                .map(|k| (k, (k % n, ((k + big - lo) % big) / n)))
                .collect();
            Chart::new(set, table)
        })
        .collect();
    CoveringAtlas::new(map, sheets, charts).expect("consistent charts")
}
