//! Seeded random G-sets, maps and objects over a base, for property runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{Group, SubgroupId};
use crate::gset::{GMap, GSet};

/// Deterministic generator for instance `instance` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, instance: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ instance.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17))
}

/// All subgroups of `h`.
pub fn subgroups_of(group: &Group, h: SubgroupId) -> Vec<SubgroupId> {
    let lat = group.lattice();
    (0..lat.len()).filter(|&k| lat.is_subgroup_of(k, h)).collect()
}

pub fn random_subgroup_of<R: Rng>(group: &Group, h: SubgroupId, rng: &mut R) -> SubgroupId {
    *subgroups_of(group, h).choose(rng).expect("h has at least the trivial subgroup")
}

/// A random object over `base` with at most `max_points` points and at most `max_orbits` orbits,
/// built from maps `G/K -> base` and then renumbered at random.
pub fn random_over<R: Rng>(base: &GSet, max_points: usize, max_orbits: usize, rng: &mut R) -> GMap {
    let group = base.group().clone();
    let mut dom = GSet::empty(&group);
    let mut map: Vec<usize> = Vec::new();
    if base.is_empty() {
        return GMap::new_unchecked(dom, base.clone(), map);
    }
    let orbits = rng.gen_range(0..=max_orbits);
    for _ in 0..orbits {
        let x = rng.gen_range(0..base.size());
        let hx = base.stabilizer(x);
        let mut k = random_subgroup_of(&group, hx, rng);
        let orbit_size = |k: SubgroupId| group.order() / group.lattice().subgroup(k).order();
        if dom.size() + orbit_size(k) > max_points {
            k = hx;
            if dom.size() + orbit_size(k) > max_points {
                continue;
            }
        }
        let piece = GMap::from_coset(&group, k, base, x);
        let (sum, _, _) = dom.coproduct(piece.dom()).expect("same group");
        dom = sum;
        map.extend_from_slice(piece.values());
    }
    let f = GMap::new_unchecked(dom, base.clone(), map);
    relabel_domain(&f, rng).0
}

/// A random G-set with at most `max_points` points.
pub fn random_gset<R: Rng>(group: &Group, max_points: usize, max_orbits: usize, rng: &mut R) -> GSet {
    random_over(&GSet::point(group), max_points, max_orbits, rng).dom().clone()
}

/// A random map `X -> Y` with `Y` random and `X` random over `Y`.
pub fn random_map<R: Rng>(group: &Group, max_points: usize, max_orbits: usize, rng: &mut R) -> GMap {
    let y = random_gset(group, max_points, max_orbits, rng);
    random_over(&y, max_points, max_orbits, rng)
}

/// Renumbers the domain of `f` at random; returns the new map and the iso `old dom -> new dom`.
pub fn relabel_domain<R: Rng>(f: &GMap, rng: &mut R) -> (GMap, GMap) {
    let mut perm: Vec<usize> = (0..f.dom().size()).collect();
    perm.shuffle(rng);
    let (new_dom, iso) = f.dom().relabel(&perm);
    let mut map = vec![0; new_dom.size()];
    for (x, &y) in perm.iter().enumerate() {
        map[y] = f.apply(x);
    }
    (GMap::new_unchecked(new_dom, f.cod().clone(), map), iso)
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
