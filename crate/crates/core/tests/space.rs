mod common;

use common::*;
use limit_spaces::{PointMap, PointSet, PrincipalFilter, RawConvergenceTable};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn filter_with_point_exhaustive_to_four() {
    for n in 1..=4 {
        for s in all_spaces(n) {
            for x in 0..n {
                let px = PrincipalFilter::point(s.carrier().clone(), x).unwrap();
                for m in 1..1u64 << n {
                    let f = PrincipalFilter::new(s.carrier().clone(), set(m, n)).unwrap();
                    let g = f.meet(&px).unwrap();
                    assert_eq!(g.generator(), &set(m | 1 << x, n));
                    assert_eq!(s.converges(&f, x).unwrap(), s.converges(&g, x).unwrap());
                }
            }
        }
    }
}

#[test]
fn filter_with_point_random_five() {
    let mut rng = rng(11);
    for _ in 0..3000 {
        let p = rng.gen_range(0.1..0.9);
        let s = random_space(&mut rng, 5, p);
        for x in 0..5 {
            for m in 1..32u64 {
                assert_eq!(s.converges_set(&set(m, 5), x), s.converges_set(&set(m | 1 << x, 5), x));
            }
        }
    }
}

#[test]
fn neighborhood_is_intersection_of_convergent_filters() {
    for n in 1..=4 {
        for s in all_spaces(n) {
            for x in 0..n {
                // The intersection of principal filters is generated by the union.
                let union = convergent_masks(&s, x).into_iter().fold(0, |a, m| a | m);
                assert_eq!(s.neighborhood(x).generator(), &set(union, n));
            }
        }
    }
}

#[test]
fn continuity_matches_filter_images() {
    let objects = test_objects();
    let two: Vec<_> = objects.iter().filter(|o| o.len() <= 2).collect();
    for x in &objects {
        for y in &two {
            for t in all_maps(x.len(), y.len()) {
                let f = PointMap::new(x.clone(), (*y).clone(), t).unwrap();
                assert_eq!(f.is_continuous(), continuous_by_filters(&f), "{f:?}");
            }
        }
    }
    let mut rng = rng(12);
    for _ in 0..400 {
        let (a, b) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let pa = rng.gen_range(0.1..0.8);
        let x = random_space(&mut rng, a, pa);
        let pb = rng.gen_range(0.1..0.8);
        let y = random_space(&mut rng, b, pb);
        for t in all_maps(a, b) {
            let f = PointMap::new(x.clone(), y.clone(), t).unwrap();
            assert_eq!(f.is_continuous(), continuous_by_filters(&f));
        }
    }
}

#[test]
fn principal_filter_order() {
    let c = carrier(3);
    let small = PrincipalFilter::new(c.clone(), set(0b001, 3)).unwrap();
    let big = PrincipalFilter::new(c.clone(), set(0b011, 3)).unwrap();
    // A smaller generator means a larger (finer) filter.
    assert!(small.is_finer_than(&big).unwrap());
    assert!(!big.is_finer_than(&small).unwrap());
    assert!(PrincipalFilter::new(c, PointSet::new()).is_err());
}

#[test]
fn raw_axiom_report_reads_the_listing() {
    let c = carrier(2);
    let listed = RawConvergenceTable::new(
        c.clone(),
        vec![vec![set(0b01, 2), set(0b11, 2), set(0b10, 2)], vec![set(0b10, 2)]],
    )
    .unwrap();
    assert!(listed.axioms().all());
    let missing = RawConvergenceTable::new(c, vec![vec![set(0b11, 2)], vec![]]).unwrap();
    let r = missing.axioms();
    assert!(!r.point_filters && !r.refinements);
    assert!(missing.close().axioms_hold());
}

trait AxiomsHold {
    fn axioms_hold(&self) -> bool;
}

impl AxiomsHold for limit_spaces::LimitSpace {
    fn axioms_hold(&self) -> bool {
        (0..self.len()).all(|x| {
            let listed: Vec<u64> = convergent_masks(self, x);
            closure_family(self.len(), x, &listed).len() == listed.len()
        })
    }
}

fn space_and_maps() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 1..=4usize, 1..=4usize, 1..=4usize)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn continuity_is_closed_under_composition((seed, a, b, c) in space_and_maps()) {
        let mut rng = rng(seed);
        let x = random_space(&mut rng, a, 0.4);
        let y = random_space(&mut rng, b, 0.4);
        let z = random_space(&mut rng, c, 0.4);
        let f = PointMap::new(x, y.clone(), (0..a).map(|_| rng.gen_range(0..b)).collect()).unwrap();
        let g = PointMap::new(y, z, (0..b).map(|_| rng.gen_range(0..c)).collect()).unwrap();
        let h = f.then(&g).unwrap();
        if f.is_continuous() && g.is_continuous() {
            prop_assert!(h.is_continuous());
        }
        prop_assert_eq!(h.is_continuous(), continuous_by_filters(&h));
    }

    #[test]
    fn closure_is_least_and_idempotent(seed in any::<u64>(), n in 1..=4usize) {
        let raw = random_raw(&mut rng(seed), n);
        let closed = raw.close();
        prop_assert_eq!(closed.to_raw().close(), closed.clone());
        for x in 0..n {
            let listed: Vec<u64> = raw.generators(x).iter().map(mask).collect();
            let fam = closure_family(n, x, &listed);
            let mut got = convergent_masks(&closed, x);
            let mut want: Vec<u64> = fam.into_iter().collect();
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
        }
    }
}
