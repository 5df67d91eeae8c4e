//! Initial and final structures: products, subspaces, disjoint unions,
//! quotients, function spaces and the two modifications.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{Carrier, LimitSpace, PointMap, RawConvergenceTable};

/// Caps on cartesian blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimits {
    pub max_points: u128,
    pub max_maps: u128,
}

impl Default for SizeLimits {
    fn default() -> Self {
        SizeLimits {
            max_points: 1_000_000,
            max_maps: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Product {
    pub space: LimitSpace,
    pub projections: Vec<PointMap>,
}

fn product_size(sizes: &[usize]) -> u128 {
    sizes
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
        .unwrap_or(u128::MAX)
}

/// Mixed-radix decoding, last coordinate fastest.
fn decode(mut idx: usize, sizes: &[usize], out: &mut [usize]) {
    for (slot, &n) in out.iter_mut().zip(sizes).rev() {
        *slot = idx % n;
        idx /= n;
    }
}

fn encode(coords: &[usize], sizes: &[usize]) -> usize {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &n)| acc * n + c)
}

/// Product limit structure: initial with respect to the projections, which on
/// finite spaces means `V((x_i)) = Π V(x_i)`. An empty list yields the
/// one-point space.
pub fn product(xs: &[LimitSpace], limits: SizeLimits) -> Result<Product> {
    let sizes: Vec<usize> = xs.iter().map(LimitSpace::len).collect();
    let total = product_size(&sizes);
    if total > limits.max_points {
        return Err(Error::TooLarge {
            what: "product carrier",
            size: total,
            limit: limits.max_points,
        });
    }
    let total = total as usize;
    let tuples: Vec<Vec<usize>> = (0..total)
        .map(|i| {
            let mut c = vec![0; sizes.len()];
            decode(i, &sizes, &mut c);
            c
        })
        .collect();
    let names = tuples.iter().map(|c| {
        let parts: Vec<&str> = c.iter().zip(xs).map(|(&ci, s)| s.name(ci)).collect();
        format!("({})", parts.join(","))
    });
    let carrier = Arc::new(Carrier::new(names)?);
    let vmax: Vec<PointSet> = tuples
        .par_iter()
        .map(|c| {
            let factors: Vec<&[usize]> = c.iter().zip(xs).map(|(&ci, s)| s.vmax(ci).as_slice()).collect();
            let mut out = Vec::new();
            let mut pos = vec![0usize; factors.len()];
            let mut coords = vec![0usize; factors.len()];
            'outer: loop {
                for (k, f) in factors.iter().enumerate() {
                    coords[k] = f[pos[k]];
                }
                out.push(encode(&coords, &sizes));
                for k in (0..factors.len()).rev() {
                    pos[k] += 1;
                    if pos[k] < factors[k].len() {
                        continue 'outer;
                    }
                    pos[k] = 0;
                }
                break;
            }
            out.into_iter().collect()
        })
        .collect();
    let space = LimitSpace::from_vmax_unchecked(carrier, vmax);
    let projections = xs
        .iter()
        .enumerate()
        .map(|(k, s)| PointMap::new(space.clone(), s.clone(), tuples.iter().map(|c| c[k]).collect()))
        .collect::<Result<_>>()?;
    Ok(Product { space, projections })
}

#[derive(Clone, Debug)]
pub struct Subspace {
    pub space: LimitSpace,
    pub inclusion: PointMap,
}

/// Subspace structure on `m`: `V_M(x) = V(x) ∩ M`. Points keep their carrier
/// order and names.
pub fn subspace(s: &LimitSpace, m: &PointSet) -> Result<Subspace> {
    s.carrier().check_set(m)?;
    let members: Vec<usize> = m.iter().collect();
    let mut local = vec![usize::MAX; s.len()];
    for (i, &x) in members.iter().enumerate() {
        local[x] = i;
    }
    let carrier = Arc::new(Carrier::new(members.iter().map(|&x| s.name(x).to_string()))?);
    let vmax = members
        .iter()
        .map(|&x| s.vmax(x).iter().filter(|&y| m.contains(y)).map(|y| local[y]).collect())
        .collect();
    let space = LimitSpace::from_vmax_unchecked(carrier, vmax);
    let inclusion = PointMap::new(space.clone(), s.clone(), members)?;
    Ok(Subspace { space, inclusion })
}

#[derive(Clone, Debug)]
pub struct DisjointUnion {
    pub space: LimitSpace,
    pub injections: Vec<PointMap>,
}

/// Tagged union; points are named `"{summand}:{id}"`.
pub fn disjoint_union(xs: &[LimitSpace]) -> Result<DisjointUnion> {
    let mut names = Vec::new();
    let mut vmax = Vec::new();
    let mut offsets = Vec::with_capacity(xs.len());
    for (k, s) in xs.iter().enumerate() {
        let off = names.len();
        offsets.push(off);
        names.extend(s.carrier().names().iter().map(|n| format!("{k}:{n}")));
        vmax.extend(s.vmax_table().iter().map(|v| v.map(|y| y + off)));
    }
    let space = LimitSpace::from_vmax_unchecked(Arc::new(Carrier::new(names)?), vmax);
    let injections = xs
        .iter()
        .zip(&offsets)
        .map(|(s, &off)| PointMap::new(s.clone(), space.clone(), (off..off + s.len()).collect()))
        .collect::<Result<_>>()?;
    Ok(DisjointUnion { space, injections })
}

/// A surjection from a space onto a bare carrier.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    source: LimitSpace,
    target: Arc<Carrier>,
    projection: Vec<usize>,
}

impl QuotientSpec {
    pub fn new(source: LimitSpace, target: Arc<Carrier>, projection: Vec<usize>) -> Result<Self> {
        if projection.len() != source.len() {
            return Err(Error::TableLength {
                expected: source.len(),
                got: projection.len(),
            });
        }
        let mut hit = vec![false; target.len()];
        for &y in &projection {
            target.check_index(y)?;
            hit[y] = true;
        }
        if let Some(y) = hit.iter().position(|h| !h) {
            return Err(Error::NotSurjective(target.name(y).to_string()));
        }
        Ok(QuotientSpec {
            source,
            target,
            projection,
        })
    }

    /// Uses the image of `projection` as the target, in order of first
    /// appearance in the source carrier.
    pub fn onto_image(source: LimitSpace, names: &[String]) -> Result<Self> {
        let mut target: Vec<String> = Vec::new();
        let mut table = Vec::with_capacity(names.len());
        for n in names {
            let i = match target.iter().position(|t| t == n) {
                Some(i) => i,
                None => {
                    target.push(n.clone());
                    target.len() - 1
                }
            };
            table.push(i);
        }
        Self::new(source, Arc::new(Carrier::new(target)?), table)
    }

    pub fn source(&self) -> &LimitSpace {
        &self.source
    }

    pub fn target(&self) -> &Arc<Carrier> {
        &self.target
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// The projection as a map onto a structure over the target carrier.
    pub fn projection_map(&self, quotient: &LimitSpace) -> Result<PointMap> {
        if quotient.carrier() != &self.target {
            return Err(Error::CarrierMismatch);
        }
        PointMap::new(self.source.clone(), quotient.clone(), self.projection.clone())
    }
}

/// Quotient limit structure: `[A] → y` iff `A ⊆ q(B₁) ∪ … ∪ q(Bₙ)` for
/// convergent `Bₖ ⊆ V(xₖ)` with `q(xₖ) = y`, i.e. `V_q(y) = ⋃ q(V(x))` over
/// the fiber of `y`.
pub fn quotient_limit(spec: &QuotientSpec) -> LimitSpace {
    let q = &spec.projection;
    let mut vmax = vec![PointSet::new(); spec.target.len()];
    for x in 0..spec.source.len() {
        vmax[q[x]].extend(spec.source.vmax(x).iter().map(|v| q[v]));
    }
    LimitSpace::from_vmax_unchecked(spec.target.clone(), vmax)
}

/// Pseudotopological quotient: `[A] → y` iff every point filter `[a]` finer
/// than `[A]` lies above `q(H)` for some `H → x` with `q(x) = y`, i.e. each
/// `a ∈ A` is `q(v)` for some `v ∈ V(x)` in the fiber of `y`.
pub fn quotient_pstop(spec: &QuotientSpec) -> LimitSpace {
    let q = &spec.projection;
    let source = &spec.source;
    let vmax = (0..spec.target.len())
        .map(|y| {
            (0..spec.target.len())
                .filter(|&a| {
                    (0..source.len())
                        .filter(|&x| q[x] == y)
                        .any(|x| source.vmax(x).iter().any(|v| q[v] == a))
                })
                .collect()
        })
        .collect();
    LimitSpace::from_vmax_unchecked(spec.target.clone(), vmax)
}

/// Initial structure on `carrier` for a family of maps into limit spaces:
/// `V(x) = {x} ∪ ⋂ f_i⁻¹(V_i(f_i(x)))`. The empty family gives the indiscrete
/// space.
pub fn initial_structure(carrier: Arc<Carrier>, maps: &[(Vec<usize>, LimitSpace)]) -> Result<LimitSpace> {
    for (table, target) in maps {
        if table.len() != carrier.len() {
            return Err(Error::TableLength {
                expected: carrier.len(),
                got: table.len(),
            });
        }
        for &y in table {
            target.carrier().check_index(y)?;
        }
    }
    let n = carrier.len();
    let vmax = (0..n)
        .map(|x| {
            let mut v: PointSet = (0..n)
                .filter(|&z| maps.iter().all(|(f, t)| t.vmax(f[x]).contains(f[z])))
                .collect();
            v.insert(x);
            v
        })
        .collect();
    Ok(LimitSpace::from_vmax_unchecked(carrier, vmax))
}

/// `C(X, Y)` with the continuous limit structure.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    pub domain: LimitSpace,
    pub codomain: LimitSpace,
    /// Tables of the continuous maps, in the order of the carrier of `space`.
    pub maps: Vec<Vec<usize>>,
    pub space: LimitSpace,
}

impl FunctionSpace {
    pub fn map(&self, i: usize) -> Result<PointMap> {
        PointMap::new(self.domain.clone(), self.codomain.clone(), self.maps[i].clone())
    }

    /// The evaluation map `ω(h, x) = h(x)` on `C(X,Y) × X`.
    pub fn evaluation(&self, limits: SizeLimits) -> Result<PointMap> {
        let prod = product(&[self.space.clone(), self.domain.clone()], limits)?;
        let (ph, px) = (&prod.projections[0], &prod.projections[1]);
        let table = (0..prod.space.len())
            .map(|p| self.maps[ph.apply(p)][px.apply(p)])
            .collect();
        PointMap::new(prod.space, self.codomain.clone(), table)
    }
}

/// Enumerates every continuous map and equips the set with the continuous
/// limit structure. A set `H` of maps converges to `f` iff
/// `{h(v) : h ∈ H, v ∈ V(x)} ⊆ V(f(x))` for every `x`, so `V(f)` collects the
/// maps `h` with `h(V(x)) ⊆ V(f(x))` everywhere.
pub fn function_space(x: &LimitSpace, y: &LimitSpace, limits: SizeLimits) -> Result<FunctionSpace> {
    let count = (y.len() as u128).checked_pow(x.len() as u32).unwrap_or(u128::MAX);
    if count > limits.max_maps {
        return Err(Error::TooLarge {
            what: "function space enumeration",
            size: count,
            limit: limits.max_maps,
        });
    }
    let sizes = vec![y.len(); x.len()];
    let maps: Vec<Vec<usize>> = (0..count as usize)
        .into_par_iter()
        .filter_map(|i| {
            let mut t = vec![0; x.len()];
            decode(i, &sizes, &mut t);
            (0..x.len())
                .all(|p| x.vmax(p).iter().all(|v| y.vmax(t[p]).contains(t[v])))
                .then_some(t)
        })
        .collect();
    let names = maps.iter().map(|t| {
        let parts: Vec<String> = t
            .iter()
            .enumerate()
            .map(|(p, &q)| format!("{}:{}", x.name(p), y.name(q)))
            .collect();
        format!("[{}]", parts.join(","))
    });
    let carrier = Arc::new(Carrier::new(names)?);
    let vmax = maps
        .par_iter()
        .map(|f| {
            (0..maps.len())
                .filter(|&h| (0..x.len()).all(|p| x.vmax(p).iter().all(|v| y.vmax(f[p]).contains(maps[h][v]))))
                .collect()
        })
        .collect();
    Ok(FunctionSpace {
        domain: x.clone(),
        codomain: y.clone(),
        maps,
        space: LimitSpace::from_vmax_unchecked(carrier, vmax),
    })
}

/// Pseudotopological modification: `[A] → x` iff every point filter of `A`
/// converges to `x`.
pub fn modification_pstop(space: &LimitSpace) -> LimitSpace {
    let vmax = (0..space.len())
        .map(|x| {
            (0..space.len())
                .filter(|&y| space.converges_set(&PointSet::singleton(y), x))
                .collect()
        })
        .collect();
    LimitSpace::from_vmax_unchecked(space.carrier().clone(), vmax)
}

/// Pretopological modification: `F → x` iff `F` is finer than `𝒰(x)`.
pub fn modification_pretop(space: &LimitSpace) -> LimitSpace {
    let vmax = (0..space.len())
        .map(|x| space.neighborhood(x).generator().clone())
        .collect();
    LimitSpace::from_vmax_unchecked(space.carrier().clone(), vmax)
}

pub fn modification_pstop_raw(raw: &RawConvergenceTable) -> LimitSpace {
    modification_pstop(&raw.close())
}

pub fn modification_pretop_raw(raw: &RawConvergenceTable) -> LimitSpace {
    modification_pretop(&raw.close())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> LimitSpace {
        LimitSpace::from_named(&["a", "b"], &[("a", &["b"])]).unwrap()
    }

    fn set(s: &LimitSpace, ids: &[&str]) -> PointSet {
        s.carrier().subset(ids).unwrap()
    }

    #[test]
    fn product_with_point_is_unit() {
        let p = product(&[LimitSpace::point(), arrow()], SizeLimits::default()).unwrap();
        assert_eq!(p.space.vmax_table(), arrow().vmax_table());
        assert_eq!(p.space.name(0), "(0,a)");
    }

    #[test]
    fn arrow_times_point() {
        let q = LimitSpace::from_named(&["p"], &[]).unwrap();
        let p = product(&[arrow(), q], SizeLimits::default()).unwrap();
        assert_eq!(
            p.space.vmax(p.space.index_of("(a,p)").unwrap()),
            &set(&p.space, &["(a,p)", "(b,p)"])
        );
    }

    #[test]
    fn arrow_squared() {
        let p = product(&[arrow(), arrow()], SizeLimits::default()).unwrap();
        let aa = p.space.index_of("(a,a)").unwrap();
        assert_eq!(p.space.vmax(aa).len(), 4);
        let bb = p.space.index_of("(b,b)").unwrap();
        assert_eq!(p.space.vmax(bb).len(), 1);
    }

    #[test]
    fn empty_product_is_a_point() {
        let p = product(&[], SizeLimits::default()).unwrap();
        assert_eq!(p.space.len(), 1);
        assert_eq!(p.space.name(0), "()");
    }

    #[test]
    fn product_limit_is_enforced() {
        let big = LimitSpace::discrete(Arc::new(Carrier::anonymous(1000)));
        let err = product(&[big.clone(), big.clone(), big], SizeLimits::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::TooLarge {
                size: 1_000_000_000,
                ..
            }
        ));
    }

    #[test]
    fn subspace_examples() {
        let a = arrow();
        assert_eq!(subspace(&a, &PointSet::full(2)).unwrap().space, a);
        let b = subspace(&a, &PointSet::singleton(1)).unwrap();
        assert_eq!(b.space.len(), 1);
        assert_eq!(b.space.name(0), "b");
        let s = LimitSpace::from_named(&["a", "b", "c"], &[("a", &["b", "c"])]).unwrap();
        let m = subspace(&s, &set(&s, &["a", "c"])).unwrap();
        assert_eq!(m.space.vmax(0), &PointSet::full(2));
        assert!(m.inclusion.is_continuous());
    }

    #[test]
    fn disjoint_union_examples() {
        let empty = LimitSpace::discrete(Arc::new(Carrier::anonymous(0)));
        let u = disjoint_union(&[arrow(), empty]).unwrap();
        assert_eq!(u.space.vmax_table(), arrow().vmax_table());
        let u = disjoint_union(&[LimitSpace::point(), LimitSpace::point()]).unwrap();
        assert_eq!(u.space.vmax_table(), &[PointSet::singleton(0), PointSet::singleton(1)]);
        let u = disjoint_union(&[arrow(), LimitSpace::point()]).unwrap();
        assert_eq!(u.space.len(), 3);
        assert_eq!(u.space.vmax(0), &PointSet::full(2));
        assert!(u.injections.iter().all(PointMap::is_continuous));
    }

    fn three_point_quotient() -> QuotientSpec {
        let s = LimitSpace::from_named(&["a", "b", "c"], &[("a", &["b"])]).unwrap();
        let target = Arc::new(Carrier::new(["u", "w"]).unwrap());
        QuotientSpec::new(s, target, vec![0, 1, 1]).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let q = three_point_quotient();
        for space in [quotient_limit(&q), quotient_pstop(&q)] {
            assert_eq!(space.vmax(0), &PointSet::full(2));
            assert_eq!(space.vmax(1), &PointSet::singleton(1));
        }
        let id = QuotientSpec::new(arrow(), arrow().carrier().clone(), vec![0, 1]).unwrap();
        assert_eq!(quotient_limit(&id), arrow());
        assert_eq!(quotient_pstop(&id), arrow());
        let collapse = QuotientSpec::new(arrow(), Arc::new(Carrier::new(["c"]).unwrap()), vec![0, 0]).unwrap();
        assert_eq!(quotient_limit(&collapse).len(), 1);
    }

    /// Definitional quotient: union of images of every nonempty family of
    /// (fiber point, convergent generator) pairs.
    #[test]
    fn quotient_matches_family_enumeration() {
        let q = three_point_quotient();
        let src = q.source();
        let pairs: Vec<(usize, u64)> = (0..src.len())
            .flat_map(|x| {
                let v = src.vmax(x).to_mask();
                (1..8u64).filter(move |b| b & !v == 0).map(move |b| (x, b))
            })
            .collect();
        let quotient = quotient_limit(&q);
        for y in 0..2 {
            let fiber: Vec<usize> = pairs
                .iter()
                .enumerate()
                .filter(|(_, (x, _))| q.projection()[*x] == y)
                .map(|(i, _)| i)
                .collect();
            let mut convergent = 0u64;
            for fam in 1u64..1 << fiber.len() {
                let mut image = 0u64;
                for (k, &i) in fiber.iter().enumerate() {
                    if fam >> k & 1 == 1 {
                        let (_, b) = pairs[i];
                        for v in 0..3 {
                            if b >> v & 1 == 1 {
                                image |= 1 << q.projection()[v];
                            }
                        }
                    }
                }
                convergent |= image;
            }
            assert_eq!(quotient.vmax(y).to_mask(), convergent);
        }
    }

    #[test]
    fn quotient_requires_surjection() {
        let err = QuotientSpec::new(arrow(), Arc::new(Carrier::new(["u", "w", "z"]).unwrap()), vec![0, 1]);
        assert_eq!(err.unwrap_err(), Error::NotSurjective("z".into()));
    }

    #[test]
    fn initial_structure_cases() {
        let c = Arc::new(Carrier::anonymous(3));
        let ind = initial_structure(c.clone(), &[]).unwrap();
        assert_eq!(ind, LimitSpace::indiscrete(c));
        let a = arrow();
        let sub = subspace(&a, &PointSet::singleton(0)).unwrap();
        let init = initial_structure(sub.space.carrier().clone(), &[(vec![0], a)]).unwrap();
        assert_eq!(init, sub.space);
    }

    #[test]
    fn function_space_of_arrow() {
        let fs = function_space(&arrow(), &arrow(), SizeLimits::default()).unwrap();
        assert_eq!(fs.maps, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert!(fs.evaluation(SizeLimits::default()).unwrap().is_continuous());
        // Definitional check over every generator set H of maps, point and
        // convergent generator F ⊆ V(x).
        let x = arrow();
        for f in 0..3 {
            let mut best = 0u64;
            for h in 1u64..8 {
                let ok = (0..2).all(|p| {
                    (1u64..4).filter(|fm| fm & !x.vmax(p).to_mask() == 0).all(|fm| {
                        (0..3).filter(|k| h >> k & 1 == 1).all(|k| {
                            (0..2)
                                .filter(|v| fm >> v & 1 == 1)
                                .all(|v| x.vmax(fs.maps[f][p]).contains(fs.maps[k][v]))
                        })
                    })
                });
                if ok {
                    best |= h;
                }
            }
            assert_eq!(fs.space.vmax(f).to_mask(), best);
        }
    }

    #[test]
    fn function_space_units() {
        let y = arrow();
        let fs = function_space(&LimitSpace::point(), &y, SizeLimits::default()).unwrap();
        assert_eq!(fs.space.vmax_table(), y.vmax_table());
        let fs = function_space(&y, &LimitSpace::point(), SizeLimits::default()).unwrap();
        assert_eq!(fs.space.len(), 1);
        let big = LimitSpace::discrete(Arc::new(Carrier::anonymous(10)));
        assert!(matches!(
            function_space(&big, &big, SizeLimits::default()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn modifications_are_identity_on_small_cases() {
        for s in [
            LimitSpace::point(),
            LimitSpace::indiscrete(Arc::new(Carrier::anonymous(3))),
            arrow(),
        ] {
            assert_eq!(modification_pstop(&s), s);
            assert_eq!(modification_pretop(&s), s);
        }
    }
}
