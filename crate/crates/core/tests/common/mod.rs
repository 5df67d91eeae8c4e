//! Brute-force oracles and generators shared by the integration tests. None of
//! the oracles call the function they are checking.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use limit_spaces::paths::Walk;
use limit_spaces::{Carrier, LimitSpace, PointMap, PointSet, RawConvergenceTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn carrier(n: usize) -> Arc<Carrier> {
    Arc::new(Carrier::new((0..n).map(|i| format!("x{i}"))).unwrap())
}

pub fn mask(s: &PointSet) -> u64 {
    s.iter().fold(0, |m, i| m | 1 << i)
}

pub fn set(m: u64, n: usize) -> PointSet {
    (0..n).filter(|i| m >> i & 1 == 1).collect()
}

/// Every closed structure on `n` points: each `V(x)` ranges over the sets
/// containing `x`.
pub fn all_spaces(n: usize) -> Vec<LimitSpace> {
    let c = carrier(n);
    let per_point = 1u64 << n.saturating_sub(1);
    let total = per_point.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let vmax = (0..n)
                .map(|x| {
                    let bits = code % per_point;
                    code /= per_point;
                    // Spread the n-1 free bits around position x.
                    let low = bits & ((1 << x) - 1);
                    let high = (bits >> x) << (x + 1);
                    set(low | high | 1 << x, n)
                })
                .collect();
            LimitSpace::from_vmax(c.clone(), vmax).unwrap()
        })
        .collect()
}

/// All closed structures on up to three points.
pub fn test_objects() -> Vec<LimitSpace> {
    (1..=3).flat_map(all_spaces).collect()
}

pub fn random_space(rng: &mut ChaCha8Rng, n: usize, p: f64) -> LimitSpace {
    let vmax = (0..n)
        .map(|x| (0..n).filter(|&y| y == x || rng.gen_bool(p)).collect())
        .collect();
    LimitSpace::from_vmax(carrier(n), vmax).unwrap()
}

pub fn random_raw(rng: &mut ChaCha8Rng, n: usize) -> RawConvergenceTable {
    let gens = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=3);
            (0..k).map(|_| set(rng.gen_range(0..1u64 << n), n)).collect()
        })
        .collect();
    RawConvergenceTable::new(carrier(n), gens).unwrap()
}

/// Every map `{0..dom} → {0..cod}` as a table.
pub fn all_maps(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0; dom];
    loop {
        out.push(t.clone());
        let mut i = 0;
        loop {
            if i == dom {
                return out;
            }
            t[i] += 1;
            if t[i] < cod {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Surjections onto `{0..k}` in restricted-growth form, one per partition.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    all_maps(n, n.max(1))
        .into_iter()
        .filter(|t| {
            let mut next = 0;
            t.iter().all(|&v| {
                if v < next {
                    true
                } else if v == next {
                    next += 1;
                    true
                } else {
                    false
                }
            })
        })
        .collect()
}

/// The generators at `x` that converge, as bitmasks, asked point by point.
pub fn convergent_masks(space: &LimitSpace, x: usize) -> Vec<u64> {
    let n = space.len();
    (1..1u64 << n).filter(|&m| space.converges_set(&set(m, n), x)).collect()
}

/// Smallest family of nonempty generators containing `listed`, the point
/// generator `{x}`, and closed under union and nonempty subsets.
pub fn closure_family(n: usize, x: usize, listed: &[u64]) -> HashSet<u64> {
    let mut fam: HashSet<u64> = listed.iter().copied().filter(|&m| m != 0).collect();
    fam.insert(1 << x);
    loop {
        let before = fam.len();
        let cur: Vec<u64> = fam.iter().copied().collect();
        for &a in &cur {
            for &b in &cur {
                fam.insert(a | b);
            }
            for sub in 1..1u64 << n {
                if sub & !a == 0 {
                    fam.insert(sub);
                }
            }
        }
        if fam.len() == before {
            return fam;
        }
    }
}

/// Continuity by pushing every convergent generator forward.
pub fn continuous_by_filters(f: &PointMap) -> bool {
    let (d, c) = (f.domain(), f.codomain());
    (0..d.len()).all(|x| {
        convergent_masks(d, x).into_iter().all(|m| {
            let image: PointSet = set(m, d.len()).iter().map(|v| f.apply(v)).collect();
            c.converges_set(&image, f.apply(x))
        })
    })
}

/// `{A, B}` is a covering system when every convergent generator at every
/// point lies inside `A` or inside `B`.
pub fn connected_by_partitions(space: &LimitSpace) -> bool {
    let n = space.len();
    if n <= 1 {
        return true;
    }
    let conv: Vec<Vec<u64>> = (0..n).map(|x| convergent_masks(space, x)).collect();
    let full = (1u64 << n) - 1;
    // Fix point 0 in A to visit each unordered partition once.
    (0..1u64 << (n - 1)).all(|bits| {
        let a = 1 | bits << 1;
        let b = full & !a;
        b == 0 || !conv.iter().flatten().all(|&g| g & !a == 0 || g & !b == 0)
    })
}

/// Reachability through sets of the family that share a point.
pub fn linked_by_family(x: usize, y: usize, family: &[PointSet]) -> bool {
    let start: Vec<usize> = (0..family.len()).filter(|&i| family[i].contains(x)).collect();
    let mut seen: HashSet<usize> = start.iter().copied().collect();
    let mut queue: VecDeque<usize> = start.into();
    while let Some(i) = queue.pop_front() {
        if family[i].contains(y) {
            return true;
        }
        for j in 0..family.len() {
            if family[i].intersects(&family[j]) && seen.insert(j) {
                queue.push_back(j);
            }
        }
    }
    false
}

/// All walks of `space` from `p` with exactly `len` jumps, canonical flags.
pub fn walks_from(space: &LimitSpace, p: usize, len: usize) -> Vec<Walk> {
    let mut out = Vec::new();
    let mut stack = vec![p];
    fn go(space: &LimitSpace, len: usize, stack: &mut Vec<usize>, out: &mut Vec<Walk>) {
        if stack.len() == len + 1 {
            out.push(Walk::with_canonical_flags(space, stack.clone()).unwrap());
            return;
        }
        let p = *stack.last().unwrap();
        for q in 0..space.len() {
            if q != p && (space.vmax(p).contains(q) || space.vmax(q).contains(p)) {
                stack.push(q);
                go(space, len, stack, out);
                stack.pop();
            }
        }
    }
    go(space, len, &mut stack, &mut out);
    out
}

/// All walks of `e` from `e0` with up to `max_len` jumps and every flag
/// choice, bucketed by their pushforward.
pub fn lifts_by_image(p: &PointMap, e0: usize, max_len: usize) -> HashMap<Walk, Vec<Walk>> {
    let mut out: HashMap<Walk, Vec<Walk>> = HashMap::new();
    for len in 0..=max_len {
        for w in walks_from_all_flags(p.domain(), e0, len) {
            let down = w.pushforward(p).unwrap();
            out.entry(down).or_default().push(w);
        }
    }
    out
}

/// Walks with every continuous choice of flag at every jump.
pub fn walks_from_all_flags(space: &LimitSpace, p: usize, len: usize) -> Vec<Walk> {
    use limit_spaces::paths::Flag;
    let mut out = Vec::new();
    for w in walks_from(space, p, len) {
        let choices: Vec<Vec<Flag>> = w
            .values()
            .windows(2)
            .map(|s| {
                [Flag::Left, Flag::Right]
                    .into_iter()
                    .filter(|f| f.allows(space, s[0], s[1]))
                    .collect()
            })
            .collect();
        let mut idx = vec![0; choices.len()];
        loop {
            let flags = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            out.push(Walk::new(w.values().to_vec(), flags).unwrap());
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

/// Walks on the cycle `0 … n-1` from `p` with no immediate backtrack.
pub fn reduced_cycle_walks(n: usize, p: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![p]];
    let mut layer = vec![vec![p]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            let last = *w.last().unwrap();
            for q in [(last + 1) % n, (last + n - 1) % n] {
                if w.len() >= 2 && w[w.len() - 2] == q {
                    continue;
                }
                let mut v = w.clone();
                v.push(q);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// `(golden file stem, arguments)`; `@` expands to the data directory.
pub const GOLDEN_CASES: &[(&str, &str)] = &[
    ("validate-cycle8", "validate @/cycle8.json"),
    ("validate-raw3", "validate @/raw3.json"),
    ("close-raw3", "close @/raw3.json"),
    ("product-arrow-path4", "product @/arrow.json @/path4.json"),
    ("subspace-cycle8", "subspace @/cycle8.json --points v0,v1,v2,v5"),
    (
        "quotient-limit",
        "quotient @/cycle8.json --projection @/cycle8-fold.json --mode limit",
    ),
    (
        "quotient-pstop",
        "quotient @/cycle8.json --projection @/cycle8-fold.json --mode pstop",
    ),
    ("function-space-arrow", "function-space @/arrow.json @/arrow.json"),
    ("components-two-points", "components @/two-points.json"),
    ("path-components-arrow", "path-components @/arrow.json"),
    ("is-connected-point", "is-connected @/point.json"),
    ("is-connected-two-points", "is-connected @/two-points.json"),
    ("chain-cycle8", "chain @/cycle8.json --from v0 --to v4 --cover balls"),
    ("chain-two-points", "chain @/two-points.json --from a --to b"),
    ("is-covering-double", "is-covering --atlas @/double-cover.json"),
    ("search-atlas-double", "search-atlas @/double-cover-map.json"),
    ("search-atlas-figure-eight", "search-atlas @/figure-eight-fold.json"),
    (
        "lift-path-winding",
        "lift-path --atlas @/double-cover.json --walk v0,v1,v2,v3,v4,v5,v6,v7,v0 --start e0",
    ),
    (
        "lift-map-identity",
        "lift-map --atlas @/double-cover.json --map @/cycle8-identity.json --basepoints v0,e0",
    ),
    (
        "lift-map-constant",
        "lift-map --atlas @/double-cover.json --map @/star-constant.json --basepoints c,e13",
    ),
    (
        "universal-cover-star",
        "universal-cover @/star3.json --base c --cover whole --radius 6",
    ),
    (
        "universal-cover-cycle8",
        "universal-cover @/cycle8.json --base v0 --radius 12 --loop-len 10",
    ),
    ("pi1-cycle8", "pi1 @/cycle8.json --base v0 --max-len 24"),
    ("pi1-star", "pi1 @/star3.json --base c --cover whole"),
    (
        "pi1-cycle8-whole",
        "pi1 @/cycle8.json --base v0 --cover @/cycle8-whole.json",
    ),
    ("from-cloud-circle", "from-cloud @/circle8.csv --scale 1.0"),
    ("from-edges-cycle8", "from-edges @/cycle8.edges --mode symmetric"),
    ("from-edges-arrow", "from-edges @/arrow.edges --mode directed"),
];

/// Runs the CLI and renders stdout followed by the exit code.
pub fn run_cli(args: &str, threads: usize) -> String {
    let data = data_dir();
    let argv: Vec<String> = args
        .split_whitespace()
        .map(|a| a.replace('@', data.to_str().unwrap()))
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_limsp"))
        .args(&argv)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("limsp runs");
    let mut s = String::from_utf8(out.stdout).unwrap();
    s.push_str(&format!("exit: {}\n", out.status.code().unwrap_or(-1)));
    s
}
