//! Strings over a monoid: finite H-sets with a label constant on each orbit, and their
//! Grothendieck ring. Built directly on H-sets, without reference to any Mackey functor.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::group::{Group, SubgroupId};
use crate::gset::GSet;
use crate::monoid::Monoid;
use crate::ring::{BasisEntry, RingPresentation};
use crate::tambarize::{TambaraError, Tambarization};

/// A transitive string `(H/K, q)`, `K` the class representative in the lattice of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StringKey {
    pub stab: SubgroupId,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GString {
    set: GSet,
    labels: Vec<usize>,
}

impl GString {
    pub fn new(set: GSet, labels: Vec<usize>) -> Result<Self, TambaraError> {
        if labels.len() != set.size() {
            return Err(TambaraError::Malformed("one label per point".into()));
        }
        for g in set.group().elements() {
            for (a, &l) in labels.iter().enumerate() {
                if labels[set.act(g, a)] != l {
                    return Err(TambaraError::Malformed(format!("label not constant on the orbit of {a}")));
                }
            }
        }
        Ok(GString { set, labels })
    }

    pub fn set(&self) -> &GSet {
        &self.set
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// `B_Q(H)`.
pub struct StringRing {
    h_group: Group,
    embed: Vec<usize>,
    q: Monoid,
}

impl StringRing {
    pub fn new(ambient: &Group, h: SubgroupId, q: &Monoid) -> Self {
        let (h_group, embed) = ambient.subgroup_group(h);
        StringRing { h_group, embed, q: q.clone() }
    }

    pub fn h_group(&self) -> &Group {
        &self.h_group
    }

    pub fn monoid(&self) -> &Monoid {
        &self.q
    }

    /// A subgroup of the ambient group contained in `H`, as a subgroup of `H`.
    pub fn local_subgroup(&self, ambient: &Group, k: SubgroupId) -> Option<SubgroupId> {
        let mut elems: Vec<usize> = ambient
            .lattice()
            .subgroup(k)
            .elements()
            .iter()
            .map(|&g| self.embed.iter().position(|&e| e == g))
            .collect::<Option<_>>()?;
        elems.sort_unstable();
        self.h_group.lattice().id_of(&elems)
    }

    fn class_rep(&self, k: SubgroupId) -> SubgroupId {
        let lat = self.h_group.lattice();
        lat.class_rep(lat.class_of(k))
    }

    /// Basis in subgroup-class order, then label order.
    pub fn basis(&self) -> Vec<StringKey> {
        let lat = self.h_group.lattice();
        (0..lat.class_count())
            .flat_map(|c| (0..self.q.size()).map(move |label| StringKey { stab: lat.class_rep(c), label }))
            .collect()
    }

    pub fn realize(&self, k: &StringKey) -> GString {
        let set = GSet::coset(&self.h_group, k.stab);
        let labels = vec![k.label; set.size()];
        GString { set, labels }
    }

    pub fn classify(&self, s: &GString) -> BTreeMap<StringKey, i64> {
        let mut out = BTreeMap::new();
        for orbit in &s.set.orbits().orbits {
            let key = StringKey { stab: self.class_rep(orbit.stabilizer), label: s.labels[orbit.rep] };
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    /// `A × B` with the diagonal action; the label at `(a, b)` is
    /// `m(a)^{[H_a : H_(a,b)]} · n(b)^{[H_b : H_(a,b)]}`.
    pub fn product(&self, a: &GString, b: &GString) -> GString {
        let (prod, pa, pb) = a.set.product(&b.set).expect("same group");
        let order = |s: SubgroupId| self.h_group.lattice().subgroup(s).order();
        let labels = (0..prod.size())
            .map(|z| {
                let (x, y) = (pa.apply(z), pb.apply(z));
                let l = order(prod.stabilizer(z));
                let ea = order(a.set.stabilizer(x)) / l;
                let eb = order(b.set.stabilizer(y)) / l;
                self.q.mul(self.q.pow(a.labels[x], ea), self.q.pow(b.labels[y], eb))
            })
            .collect();
        GString { set: prod, labels }
    }

    pub fn entry(&self, k: &StringKey) -> BasisEntry {
        let label = if self.q.size() == 1 { String::new() } else { self.q.name(k.label).to_string() };
        BasisEntry { stab: self.h_group.subgroup_name(k.stab), label }
    }

    pub fn presentation(&self) -> RingPresentation {
        let keys = self.basis();
        let pos: BTreeMap<StringKey, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let coords = |m: BTreeMap<StringKey, i64>| -> Vec<i64> {
            let mut v = vec![0; keys.len()];
            for (k, n) in m {
                v[pos[&k]] += n;
            }
            v
        };
        let reals: Vec<GString> = keys.iter().map(|k| self.realize(k)).collect();
        let mul = reals
            .iter()
            .map(|a| reals.iter().map(|b| coords(self.classify(&self.product(a, b)))).collect())
            .collect();
        let one = coords(self.classify(&self.realize(&StringKey {
            stab: self.h_group.lattice().whole(),
            label: self.q.unit(),
        })));
        RingPresentation { basis: keys.iter().map(|k| self.entry(k)).collect(), mul, one }
    }
}

/// The monoid ring `Z[Q]` with basis `Q`.
pub fn monoid_ring(q: &Monoid) -> RingPresentation {
    let n = q.size();
    let e = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    RingPresentation {
        basis: (0..n).map(|a| BasisEntry { stab: "e".into(), label: q.name(a).to_string() }).collect(),
        mul: (0..n).map(|a| (0..n).map(|b| e(q.mul(a, b))).collect()).collect(),
        one: e(q.unit()),
    }
}

/// Result of comparing `T_{L_Q}(G/H)` with `B_Q(H)` through the fiber over `eH`.
#[derive(Debug, Clone, Serialize)]
pub struct ElliottComparison {
    pub rank: usize,
    /// `perm[i]` is the string basis index of the `i`-th Tambarization basis class.
    pub perm: Vec<usize>,
    pub tambarization: RingPresentation,
    pub strings: RingPresentation,
}

/// Sends the class `G/K -> G/H` labeled `q` to its fiber `(H/K, q)` and checks that this is a
/// bijection of bases preserving every structure constant.
pub fn elliott_iso(t: &Tambarization, q: &Monoid, h: SubgroupId) -> Result<ElliottComparison, TambaraError> {
    let group = t.group();
    let sr = StringRing::new(group, h, q);
    let (classes, tp) = t.presentation(h);
    let keys = sr.basis();
    let mut perm = Vec::with_capacity(classes.len());
    for c in &classes {
        let local = sr
            .local_subgroup(group, c.sub)
            .ok_or_else(|| TambaraError::Malformed(format!("class stabilizer {} is not inside H", c.sub)))?;
        let key = StringKey { stab: sr.class_rep(local), label: c.label };
        let i = keys
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| TambaraError::Malformed("fiber is not a basis string".into()))?;
        perm.push(i);
    }
    let sp = sr.presentation();
    tp.check_basis_iso(&sp, &perm).map_err(TambaraError::Malformed)?;
    Ok(ElliottComparison { rank: tp.rank(), perm, tambarization: tp, strings: sp })
}
