//! The ordinary Burnside ring of G-sets over a base, computed from actual pullbacks,
//! compositions and dependent products, with a table of marks for virtual norms.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::group::{Group, SubgroupId};
use crate::gset::{dependent_product, dependent_product_size, pullback, sum_over, GMap, GSet};
use crate::tambarize::{TambaraError, NORM_LIMIT};

/// A transitive object over `Z`: the orbit of `Z` it lies over, and the least stabilizer
/// among its points over that orbit's minimal point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrbitKey {
    pub orbit: usize,
    pub stab: SubgroupId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnsideElt {
    base: GSet,
    terms: BTreeMap<OrbitKey, i64>,
}

impl BurnsideElt {
    pub fn zero(base: &GSet) -> Self {
        BurnsideElt { base: base.clone(), terms: BTreeMap::new() }
    }

    pub fn base(&self) -> &GSet {
        &self.base
    }

    pub fn terms(&self) -> &BTreeMap<OrbitKey, i64> {
        &self.terms
    }

    pub fn coeff(&self, k: &OrbitKey) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, k: OrbitKey, n: i64) {
        let e = self.terms.entry(k).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn from_key(base: &GSet, k: OrbitKey) -> Self {
        let mut out = Self::zero(base);
        out.insert(k, 1);
        out
    }

    pub fn add(&self, other: &BurnsideElt) -> Result<BurnsideElt, TambaraError> {
        if self.base != other.base {
            return Err(TambaraError::BaseMismatch);
        }
        let mut out = self.clone();
        for (&k, &n) in &other.terms {
            out.insert(k, n);
        }
        Ok(out)
    }

    pub fn neg(&self) -> BurnsideElt {
        self.scale(-1)
    }

    pub fn scale(&self, s: i64) -> BurnsideElt {
        let mut out = Self::zero(&self.base);
        if s != 0 {
            out.terms = self.terms.iter().map(|(&k, &n)| (k, n * s)).collect();
        }
        out
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }
}

/// The isomorphism class of `p: A -> Z` as a sum of orbit keys.
pub fn classify(p: &GMap) -> BurnsideElt {
    let z = p.cod();
    let zo = z.orbits();
    let ao = p.dom().orbits();
    let mut out = BurnsideElt::zero(z);
    for orbit in &ao.orbits {
        let o = zo.orbit_of[p.apply(orbit.rep)];
        let z0 = zo.orbits[o].rep;
        let stab = orbit
            .points
            .iter()
            .filter(|&&a| p.apply(a) == z0)
            .map(|&a| p.dom().stabilizer(a))
            .min()
            .expect("an orbit over a transitive piece meets every fiber");
        out.insert(OrbitKey { orbit: o, stab }, 1);
    }
    out
}

/// The transitive object `G/K -> Z`, `eK` going to the minimal point of the key's orbit.
pub fn realize_key(z: &GSet, k: &OrbitKey) -> GMap {
    GMap::from_coset(z.group(), k.stab, z, z.orbits().orbits[k.orbit].rep)
}

/// An object representing an effective element.
pub fn realize(x: &BurnsideElt) -> Result<GMap, TambaraError> {
    if !x.is_effective() {
        return Err(TambaraError::Malformed("only effective elements have a G-set".into()));
    }
    let pieces: Vec<GMap> = x
        .terms
        .iter()
        .flat_map(|(k, &n)| std::iter::repeat(realize_key(&x.base, k)).take(n as usize))
        .collect();
    Ok(sum_over(&x.base, &pieces))
}

/// All orbit keys over `z`.
pub fn basis(z: &GSet) -> Vec<OrbitKey> {
    let group = z.group();
    let lat = group.lattice();
    let mut out = Vec::new();
    for (o, orbit) in z.orbits().orbits.iter().enumerate() {
        let h = orbit.stabilizer;
        for k in 0..lat.len() {
            if lat.is_subgroup_of(k, h) && min_conjugate_in(group, h, k) == k {
                out.push(OrbitKey { orbit: o, stab: k });
            }
        }
    }
    out
}

fn min_conjugate_in(group: &Group, h: SubgroupId, k: SubgroupId) -> SubgroupId {
    let lat = group.lattice();
    lat.subgroup(h).elements().iter().map(|&x| lat.conj(x, k)).min().expect("h is nonempty")
}

fn bilinear(
    x: &BurnsideElt,
    y: &BurnsideElt,
    base: &GSet,
    mut f: impl FnMut(&OrbitKey, &OrbitKey) -> Result<BurnsideElt, TambaraError>,
) -> Result<BurnsideElt, TambaraError> {
    let mut out = BurnsideElt::zero(base);
    for (kx, &nx) in &x.terms {
        for (ky, &ny) in &y.terms {
            for (k, n) in f(kx, ky)?.terms {
                out.insert(k, n * nx * ny);
            }
        }
    }
    Ok(out)
}

fn linear(
    x: &BurnsideElt,
    base: &GSet,
    mut f: impl FnMut(&OrbitKey) -> Result<BurnsideElt, TambaraError>,
) -> Result<BurnsideElt, TambaraError> {
    let mut out = BurnsideElt::zero(base);
    for (k, &n) in &x.terms {
        for (k2, n2) in f(k)?.terms {
            out.insert(k2, n * n2);
        }
    }
    Ok(out)
}

pub fn one(z: &GSet) -> BurnsideElt {
    classify(&GMap::identity(z))
}

/// Product through the fibered product over the base.
pub fn mul(x: &BurnsideElt, y: &BurnsideElt) -> Result<BurnsideElt, TambaraError> {
    if x.base != y.base {
        return Err(TambaraError::BaseMismatch);
    }
    let z = x.base.clone();
    bilinear(x, y, &z, |a, b| {
        let (pa, pb) = (realize_key(&z, a), realize_key(&z, b));
        let pb_sq = pullback(&pa, &pb)?;
        Ok(classify(&pb_sq.to_base(&pa)))
    })
}

/// Pullback along `f: X -> Y` of an element over `Y`.
pub fn restrict(f: &GMap, y: &BurnsideElt) -> Result<BurnsideElt, TambaraError> {
    if f.cod() != &y.base {
        return Err(TambaraError::BaseMismatch);
    }
    linear(y, f.dom(), |k| {
        let q = realize_key(f.cod(), k);
        Ok(classify(&pullback(f, &q)?.pr1))
    })
}

/// Post-composition with `f: X -> Y`.
pub fn transfer(f: &GMap, x: &BurnsideElt) -> Result<BurnsideElt, TambaraError> {
    if f.dom() != &x.base {
        return Err(TambaraError::BaseMismatch);
    }
    linear(x, f.cod(), |k| Ok(classify(&realize_key(f.dom(), k).then(f)?)))
}

/// Multiplicative transfer along `f: X -> Y`: the dependent product for effective elements
/// of moderate size, the marks product formula otherwise.
pub fn norm(f: &GMap, x: &BurnsideElt) -> Result<BurnsideElt, TambaraError> {
    if f.dom() != &x.base {
        return Err(TambaraError::BaseMismatch);
    }
    if x.is_effective() {
        let p = realize(x)?;
        if dependent_product_size(f, &p) <= NORM_LIMIT {
            return norm_by_sections(f, &p);
        }
    }
    norm_by_marks(f, x)
}

/// `Π_f(A) -> Y` for `p: A -> X`.
pub fn norm_by_sections(f: &GMap, p: &GMap) -> Result<BurnsideElt, TambaraError> {
    let d = dependent_product(f, p)?;
    Ok(classify(&d.pi))
}

/// Marks of `x`: `marks[o][k]` counts points over the minimal point of orbit `o` fixed by `k`,
/// for every subgroup `k` of that point's stabilizer (zero elsewhere).
pub fn marks(x: &BurnsideElt) -> Vec<Vec<i64>> {
    let z = &x.base;
    let group = z.group();
    let lat = group.lattice();
    let zo = z.orbits();
    let mut out = vec![vec![0i64; lat.len()]; zo.orbits.len()];
    for (key, &n) in &x.terms {
        let h = zo.orbits[key.orbit].stabilizer;
        for (k, slot) in out[key.orbit].iter_mut().enumerate() {
            if lat.is_subgroup_of(k, h) {
                *slot += n * coset_marks(group, h, key.stab, k);
            }
        }
    }
    out
}

/// Number of cosets `hL` in `H/L` fixed by `K`.
pub fn coset_marks(group: &Group, h: SubgroupId, l: SubgroupId, k: SubgroupId) -> i64 {
    let lat = group.lattice();
    let fixed = lat
        .subgroup(h)
        .elements()
        .iter()
        .filter(|&&x| lat.is_subgroup_of(k, lat.conj(x, l)))
        .count();
    (fixed / lat.subgroup(l).order()) as i64
}

/// Inverts `marks` by back-substitution from the largest subgroups down.
pub fn from_marks(z: &GSet, m: &[Vec<i64>]) -> Result<BurnsideElt, TambaraError> {
    let group = z.group();
    let lat = group.lattice();
    let mut out = BurnsideElt::zero(z);
    for (o, orbit) in z.orbits().orbits.iter().enumerate() {
        let h = orbit.stabilizer;
        let mut keys: Vec<SubgroupId> =
            basis(z).into_iter().filter(|k| k.orbit == o).map(|k| k.stab).collect();
        keys.sort_by_key(|&k| std::cmp::Reverse((lat.subgroup(k).order(), k)));
        let mut coeffs: Vec<(SubgroupId, i64)> = Vec::new();
        for &k in &keys {
            let rest: i64 = coeffs.iter().map(|&(l, c)| c * coset_marks(group, h, l, k)).sum();
            let own = coset_marks(group, h, k, k);
            let r = m[o][k] - rest;
            if r % own != 0 {
                return Err(TambaraError::Malformed(format!("marks are not integral at {k}")));
            }
            coeffs.push((k, r / own));
        }
        for (k, c) in coeffs {
            out.insert(OrbitKey { orbit: o, stab: k }, c);
        }
    }
    Ok(out)
}

/// Marks of a norm: at `(y, K)` the product, over the `K`-orbits of `f^{-1}(y)`,
/// of the marks of `x` at a point of the orbit and its stabilizer in `K`.
pub fn norm_by_marks(f: &GMap, x: &BurnsideElt) -> Result<BurnsideElt, TambaraError> {
    if f.dom() != &x.base {
        return Err(TambaraError::BaseMismatch);
    }
    let (xs, ys) = (f.dom(), f.cod());
    let group = xs.group();
    let lat = group.lattice();
    let mx = marks(x);
    let xo = xs.orbits();
    let mark_at = |pt: usize, s: SubgroupId| -> i64 {
        let t = xo.transversal[pt];
        mx[xo.orbit_of[pt]][lat.conj(group.inv(t), s)]
    };
    let yo = ys.orbits();
    let mut out = vec![vec![0i64; lat.len()]; yo.orbits.len()];
    for (o, orbit) in yo.orbits.iter().enumerate() {
        let fiber = f.fiber(orbit.rep);
        for (k, slot) in out[o].iter_mut().enumerate() {
            if !lat.is_subgroup_of(k, orbit.stabilizer) {
                continue;
            }
            let mut seen = vec![false; xs.size()];
            let mut prod = 1i64;
            for &pt in &fiber {
                if seen[pt] {
                    continue;
                }
                for &g in lat.subgroup(k).elements() {
                    seen[xs.act(g, pt)] = true;
                }
                prod = prod
                    .checked_mul(mark_at(pt, lat.intersection(k, xs.stabilizer(pt))))
                    .ok_or(TambaraError::TooLarge(usize::MAX))?;
            }
            *slot = prod;
        }
    }
    from_marks(ys, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{instance_rng, random_map, random_over};
    use rand::Rng;

    fn fold(g: &Group) -> GMap {
        GMap::to_point(&GSet::coset(g, g.lattice().trivial()))
    }

    fn random_elt<R: Rng>(z: &GSet, rng: &mut R, signed: bool) -> BurnsideElt {
        let keys = basis(z);
        let mut out = BurnsideElt::zero(z);
        for k in keys {
            let lo = if signed { -2 } else { 0 };
            if rng.gen_bool(0.4) {
                out.insert(k, rng.gen_range(lo..=2));
            }
        }
        out
    }

    #[test]
    fn c2_products_and_norm() {
        let g = Group::cyclic(2);
        let pt = GSet::point(&g);
        let t = BurnsideElt::from_key(&pt, OrbitKey { orbit: 0, stab: 0 });
        let one_ = one(&pt);
        assert_eq!(mul(&t, &t).unwrap(), t.scale(2));
        let free = GSet::coset(&g, 0);
        let two = one(&free).scale(2);
        let n = norm(&fold(&g), &two).unwrap();
        assert_eq!(n, one_.scale(2).add(&t).unwrap());
        assert_eq!(norm_by_marks(&fold(&g), &two).unwrap(), n);
        assert_eq!(marks(&t), vec![vec![2, 0]]);
        assert_eq!(marks(&one_), vec![vec![1, 1]]);
    }

    #[test]
    fn marks_invert_and_multiply() {
        for g in [Group::cyclic(4), Group::symmetric(3), Group::dihedral(4)] {
            let mut rng = instance_rng(11, 0);
            for _ in 0..20 {
                let z = random_over(&GSet::point(&g), 8, 2, &mut rng).dom().clone();
                let x = random_elt(&z, &mut rng, true);
                let y = random_elt(&z, &mut rng, true);
                assert_eq!(from_marks(&z, &marks(&x)).unwrap(), x);
                let xy = marks(&mul(&x, &y).unwrap());
                let (mx, my) = (marks(&x), marks(&y));
                for o in 0..xy.len() {
                    for k in 0..xy[o].len() {
                        assert_eq!(xy[o][k], mx[o][k] * my[o][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn norm_routes_agree_on_effective_elements() {
        for g in [Group::cyclic(2), Group::cyclic(3), Group::symmetric(3)] {
            for i in 0..40 {
                let mut rng = instance_rng(5, i);
                let f = random_map(&g, 6, 2, &mut rng);
                let x = random_elt(f.dom(), &mut rng, false);
                let p = realize(&x).unwrap();
                if dependent_product_size(&f, &p) > 5000 {
                    continue;
                }
                assert_eq!(norm_by_sections(&f, &p).unwrap(), norm_by_marks(&f, &x).unwrap());
            }
        }
    }

    #[test]
    fn restriction_and_transfer_respect_marks() {
        let g = Group::symmetric(3);
        for i in 0..30 {
            let mut rng = instance_rng(9, i);
            let f = random_map(&g, 6, 2, &mut rng);
            let x = random_elt(f.dom(), &mut rng, true);
            let y = random_elt(f.cod(), &mut rng, true);
            // projection formula
            let lhs = transfer(&f, &mul(&x, &restrict(&f, &y).unwrap()).unwrap()).unwrap();
            let rhs = mul(&transfer(&f, &x).unwrap(), &y).unwrap();
            assert_eq!(lhs, rhs);
            // restriction is a ring map
            let y2 = random_elt(f.cod(), &mut rng, true);
            assert_eq!(
                restrict(&f, &mul(&y, &y2).unwrap()).unwrap(),
                mul(&restrict(&f, &y).unwrap(), &restrict(&f, &y2).unwrap()).unwrap()
            );
        }
    }
}
