//! Semi-Mackey functors in subgroup-indexed form.
//!
//! `M(G/S)` is a finite commutative monoid for every subgroup `S`; conjugate
//! subgroups share one carrier. Tables:
//!
//! * `res(H, K)`: `M(G/H) -> M(G/K)` for `K <= H`, pullback along `G/K -> G/H`;
//! * `tr(H, K)`: `M(G/K) -> M(G/H)`, pushforward along the same map;
//! * `conj(g, S)`: `M(G/S) -> M(G/gSg^{-1})`, pullback along `G/gSg^{-1} -> G/S, x ↦ xg`.
//!
//! For `f: G/K -> G/H` with `f(eK) = gH`:
//! `M*(f) = res(gHg^{-1}, K) ∘ conj(g, H)` and `M_*(f) = conj(g^{-1}, gHg^{-1}) ∘ tr(gHg^{-1}, K)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, SubgroupId};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gset::{pullback, GMap, GSet};
use crate::monoid::{GMonoid, Monoid, MonoidError, MonoidJson};
use crate::random::{instance_rng, random_map, random_over};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MackeyError {
    #[error("objects live over different bases")]
    BaseMismatch,
    #[error("element has {got} components, base has {expected} orbits")]
    WrongShape { expected: usize, got: usize },
    #[error("label {value} out of range for level of size {size}")]
    LabelOutOfRange { value: usize, size: usize },
    #[error("functor data is incomplete: {0}")]
    Incomplete(String),
    #[error("functor violates {count} axiom instances; first: {first}")]
    AxiomsViolated { count: usize, first: String },
    #[error("not a morphism of semi-Mackey functors: {0}")]
    NotAMackeyMorphism(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("invalid functor spec: {0}")]
    InvalidSpec(String),
}

/// Identifies one stored value table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TableRef {
    Res { h: SubgroupId, k: SubgroupId },
    Tr { h: SubgroupId, k: SubgroupId },
    Conj { g: usize, s: SubgroupId },
}

/// A semi-Mackey functor on a finite group.
#[derive(Clone, Debug)]
pub struct SemiMackey {
    group: Group,
    name: String,
    levels: Vec<Arc<Monoid>>,
    label_names: Vec<Vec<String>>,
    res: Vec<Vec<usize>>,
    tr: Vec<Vec<usize>>,
    conj: Vec<Vec<usize>>,
    /// For fixed point functors: the element of `Q` each label of each subgroup denotes.
    carriers: Option<Arc<Vec<Vec<usize>>>>,
}

type LevelFn<'a> = &'a dyn Fn(SubgroupId, SubgroupId, usize) -> usize;

impl SemiMackey {
    /// Builds all tables from closures. `levels` is indexed by subgroup class.
    pub fn from_fns(
        group: &Group,
        name: impl Into<String>,
        levels: Vec<Monoid>,
        label_names: Vec<Vec<String>>,
        res: LevelFn<'_>,
        tr: LevelFn<'_>,
        conj: LevelFn<'_>,
    ) -> Self {
        let lat = group.lattice();
        let ns = lat.len();
        let levels: Vec<Arc<Monoid>> = levels.into_iter().map(Arc::new).collect();
        let size = |s: SubgroupId| levels[lat.class_of(s)].size();
        let mut res_t = vec![Vec::new(); ns * ns];
        let mut tr_t = vec![Vec::new(); ns * ns];
        for h in 0..ns {
            for k in 0..ns {
                if lat.is_subgroup_of(k, h) {
                    res_t[h * ns + k] = (0..size(h)).map(|j| res(h, k, j)).collect();
                    tr_t[h * ns + k] = (0..size(k)).map(|j| tr(h, k, j)).collect();
                }
            }
        }
        let mut conj_t = vec![Vec::new(); group.order() * ns];
        for g in group.elements() {
            for s in 0..ns {
                conj_t[g * ns + s] = (0..size(s)).map(|j| conj(g, s, j)).collect();
            }
        }
        SemiMackey {
            group: group.clone(),
            name: name.into(),
            levels,
            label_names,
            res: res_t,
            tr: tr_t,
            conj: conj_t,
            carriers: None,
        }
    }

    /// The fixed point functor: `M(G/H) = Q^H`, restriction is inclusion,
    /// transfer multiplies the translates over `H/K`, conjugation is the action.
    pub fn fixed_point(q: &GMonoid) -> Self {
        let group = q.group().clone();
        let lat = group.lattice();
        let ns = lat.len();
        let qm = q.monoid();
        // Level carrier of a class: fixed points of the representative. For any S with
        // witness w (wSw^{-1} = R), carrier index j means w^{-1} . fix_R[j] in Q^S.
        let fix_rep: Vec<Vec<usize>> = (0..lat.class_count())
            .map(|c| q.fixed_points(lat.subgroup(lat.class_rep(c)).elements()))
            .collect();
        let embed: Vec<Vec<usize>> = (0..ns)
            .map(|s| {
                let w_inv = group.inv(lat.class_witness(s));
                fix_rep[lat.class_of(s)].iter().map(|&x| q.act(w_inv, x)).collect()
            })
            .collect();
        let index: Vec<Vec<usize>> = embed
            .iter()
            .map(|e| {
                let mut idx = vec![usize::MAX; qm.size()];
                for (j, &x) in e.iter().enumerate() {
                    idx[x] = j;
                }
                idx
            })
            .collect();
        let levels: Vec<Monoid> = (0..lat.class_count())
            .map(|c| {
                let r = lat.class_rep(c);
                let e = &embed[r];
                let op = e
                    .iter()
                    .map(|&a| e.iter().map(|&b| index[r][qm.mul(a, b)]).collect())
                    .collect();
                let names = e.iter().map(|&a| qm.name(a).to_string()).collect();
                Monoid::with_names(e.len(), op, index[r][qm.unit()], names)
                    .expect("fixed points form a submonoid")
            })
            .collect();
        let label_names =
            embed.iter().map(|e| e.iter().map(|&a| qm.name(a).to_string()).collect()).collect();
        let coset_reps = |h: SubgroupId, k: SubgroupId| -> Vec<usize> {
            let hk = lat.subgroup(k);
            let mut seen = vec![false; group.order()];
            let mut reps = Vec::new();
            for &x in lat.subgroup(h).elements() {
                if !seen[x] {
                    reps.push(x);
                    for &y in hk.elements() {
                        seen[group.mul(x, y)] = true;
                    }
                }
            }
            reps
        };
        let mut out = SemiMackey::from_fns(
            &group,
            format!("P[{}]", q.name()),
            levels,
            label_names,
            &|h, k, j| index[k][embed[h][j]],
            &|h, k, j| {
                let x = embed[k][j];
                let prod = qm.product(coset_reps(h, k).into_iter().map(|c| q.act(c, x)));
                index[h][prod]
            },
            &|g, s, j| index[lat.conj(g, s)][q.act(g, embed[s][j])],
        );
        out.carriers = Some(Arc::new(embed));
        out
    }

    /// The element of `Q` denoted by label `j` at subgroup `s`, for fixed point functors.
    pub fn carrier_value(&self, s: SubgroupId, j: usize) -> Option<usize> {
        self.carriers.as_ref().map(|c| c[s][j])
    }

    /// `L_Q`: every level is `Q`, restriction raises to the index, transfer and conjugation are identities.
    pub fn ell(group: &Group, q: &Monoid, name: &str) -> Self {
        let lat = group.lattice();
        let levels = vec![q.clone(); lat.class_count()];
        let label_names = vec![q.names().to_vec(); lat.len()];
        SemiMackey::from_fns(
            group,
            format!("L[{name}]"),
            levels,
            label_names,
            &|h, k, j| q.pow(j, lat.index_in(k, h)),
            &|_, _, j| j,
            &|_, _, j| j,
        )
    }

    /// Every level is the one-element monoid.
    pub fn trivial(group: &Group) -> Self {
        let mut m = Self::ell(group, &Monoid::trivial(), "1");
        m.name = "trivial".into();
        m
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self, s: SubgroupId) -> &Monoid {
        &self.levels[self.group.lattice().class_of(s)]
    }

    pub fn levels(&self) -> &[Arc<Monoid>] {
        &self.levels
    }

    pub fn label_name(&self, s: SubgroupId, j: usize) -> &str {
        &self.label_names[s][j]
    }

    fn ns(&self) -> usize {
        self.group.lattice().len()
    }

    #[inline]
    pub fn res(&self, h: SubgroupId, k: SubgroupId, j: usize) -> usize {
        self.res[h * self.ns() + k][j]
    }

    #[inline]
    pub fn tr(&self, h: SubgroupId, k: SubgroupId, j: usize) -> usize {
        self.tr[h * self.ns() + k][j]
    }

    #[inline]
    pub fn conj(&self, g: usize, s: SubgroupId, j: usize) -> usize {
        self.conj[g * self.ns() + s][j]
    }

    /// `M*(f)` for `f: G/K -> G/H`, `eK ↦ gH`.
    pub fn pull_orbit(&self, g: usize, h: SubgroupId, k: SubgroupId, j: usize) -> usize {
        let gh = self.group.lattice().conj(g, h);
        self.res(gh, k, self.conj(g, h, j))
    }

    /// `M_*(f)` for `f: G/K -> G/H`, `eK ↦ gH`.
    pub fn push_orbit(&self, g: usize, h: SubgroupId, k: SubgroupId, j: usize) -> usize {
        let gh = self.group.lattice().conj(g, h);
        self.conj(self.group.inv(g), gh, self.tr(gh, k, j))
    }

    /// Every stored table, in a fixed order.
    pub fn tables(&self) -> Vec<TableRef> {
        let lat = self.group.lattice();
        let ns = lat.len();
        let mut out = Vec::new();
        for h in 0..ns {
            for k in 0..ns {
                if lat.is_subgroup_of(k, h) {
                    out.push(TableRef::Res { h, k });
                    out.push(TableRef::Tr { h, k });
                }
            }
        }
        for g in self.group.elements() {
            for s in 0..ns {
                out.push(TableRef::Conj { g, s });
            }
        }
        out
    }

    /// `(table, codomain subgroup)`.
    pub fn table(&self, t: TableRef) -> (&[usize], SubgroupId) {
        let ns = self.ns();
        match t {
            TableRef::Res { h, k } => (&self.res[h * ns + k], k),
            TableRef::Tr { h, k } => (&self.tr[h * ns + k], h),
            TableRef::Conj { g, s } => (&self.conj[g * ns + s], self.group.lattice().conj(g, s)),
        }
    }

    /// Overwrites one entry of one table (used to build corrupted functors in tests).
    pub fn set_entry(&mut self, t: TableRef, j: usize, value: usize) {
        let ns = self.ns();
        let v = match t {
            TableRef::Res { h, k } => &mut self.res[h * ns + k],
            TableRef::Tr { h, k } => &mut self.tr[h * ns + k],
            TableRef::Conj { g, s } => &mut self.conj[g * ns + s],
        };
        v[j] = value;
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Fails with the violated identities if the data is not a semi-Mackey functor.
    pub fn validated(self) -> Result<Self, MackeyError> {
        let report = check_axioms(&self);
        match report.violations.first() {
            None => Ok(self),
            Some(v) => Err(MackeyError::AxiomsViolated {
                count: report.violations.len(),
                first: v.to_string(),
            }),
        }
    }

    pub fn to_json(&self) -> MackeyJson {
        let lat = self.group.lattice();
        let mut restriction = Vec::new();
        let mut transfer = Vec::new();
        let mut conjugation = Vec::new();
        for t in self.tables() {
            let map = self.table(t).0.to_vec();
            match t {
                TableRef::Res { h, k } => restriction.push(PairTable { h, k, map }),
                TableRef::Tr { h, k } => transfer.push(PairTable { h, k, map }),
                TableRef::Conj { g, s } => conjugation.push(ConjTable { g, s, map }),
            }
        }
        MackeyJson {
            name: self.name.clone(),
            levels: self.levels.iter().map(|m| m.to_json()).collect(),
            label_names: Some(self.label_names.clone()),
            subgroups: (0..lat.len()).map(|s| lat.subgroup(s).elements().to_vec()).collect(),
            restriction,
            transfer,
            conjugation,
        }
    }

    /// Reads explicit tables; the subgroup list must match the group's enumeration order.
    pub fn from_json(group: &Group, j: &MackeyJson) -> Result<Self, MackeyError> {
        let lat = group.lattice();
        let ns = lat.len();
        if j.levels.len() != lat.class_count() {
            return Err(MackeyError::Incomplete(format!(
                "expected {} levels (one per subgroup class), got {}",
                lat.class_count(),
                j.levels.len()
            )));
        }
        if !j.subgroups.is_empty()
            && (j.subgroups.len() != ns
                || (0..ns).any(|s| j.subgroups[s].as_slice() != lat.subgroup(s).elements()))
        {
            return Err(MackeyError::Incomplete("subgroup list does not match the group".into()));
        }
        let levels: Vec<Monoid> = j.levels.iter().map(Monoid::from_json).collect::<Result<_, _>>()?;
        let size = |s: SubgroupId| levels[lat.class_of(s)].size();
        let label_names = match &j.label_names {
            Some(n) => n.clone(),
            None => (0..ns).map(|s| levels[lat.class_of(s)].names().to_vec()).collect(),
        };
        let mut res = vec![Vec::new(); ns * ns];
        let mut tr = vec![Vec::new(); ns * ns];
        let mut conj = vec![Vec::new(); group.order() * ns];
        let check = |map: &[usize], dom: usize, cod: usize, what: String| {
            if map.len() != size(dom) || map.iter().any(|&v| v >= size(cod)) {
                Err(MackeyError::Incomplete(format!("{what} has the wrong shape")))
            } else {
                Ok(())
            }
        };
        for t in &j.restriction {
            if t.h >= ns || t.k >= ns || !lat.is_subgroup_of(t.k, t.h) {
                return Err(MackeyError::Incomplete(format!("bad restriction pair ({}, {})", t.h, t.k)));
            }
            check(&t.map, t.h, t.k, format!("res({}, {})", t.h, t.k))?;
            res[t.h * ns + t.k] = t.map.clone();
        }
        for t in &j.transfer {
            if t.h >= ns || t.k >= ns || !lat.is_subgroup_of(t.k, t.h) {
                return Err(MackeyError::Incomplete(format!("bad transfer pair ({}, {})", t.h, t.k)));
            }
            check(&t.map, t.k, t.h, format!("tr({}, {})", t.h, t.k))?;
            tr[t.h * ns + t.k] = t.map.clone();
        }
        for t in &j.conjugation {
            if t.g >= group.order() || t.s >= ns {
                return Err(MackeyError::Incomplete(format!("bad conjugation ({}, {})", t.g, t.s)));
            }
            check(&t.map, t.s, lat.conj(t.g, t.s), format!("conj({}, {})", t.g, t.s))?;
            conj[t.g * ns + t.s] = t.map.clone();
        }
        for h in 0..ns {
            for k in 0..ns {
                if lat.is_subgroup_of(k, h) && (res[h * ns + k].is_empty() || tr[h * ns + k].is_empty()) {
                    return Err(MackeyError::Incomplete(format!("missing table for ({h}, {k})")));
                }
            }
        }
        if conj.iter().any(|c| c.is_empty()) {
            return Err(MackeyError::Incomplete("missing conjugation table".into()));
        }
        SemiMackey {
            group: group.clone(),
            name: j.name.clone(),
            levels: levels.into_iter().map(Arc::new).collect(),
            label_names,
            res,
            tr,
            conj,
            carriers: None,
        }
        .validated()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTable {
    pub h: usize,
    pub k: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjTable {
    pub g: usize,
    pub s: usize,
    pub map: Vec<usize>,
}

/// Explicit tables for a user-defined functor. Subgroup indices refer to the group's
/// subgroup enumeration, listed in `subgroups` for reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MackeyJson {
    pub name: String,
    pub levels: Vec<MonoidJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_names: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub subgroups: Vec<Vec<usize>>,
    pub restriction: Vec<PairTable>,
    pub transfer: Vec<PairTable>,
    pub conjugation: Vec<ConjTable>,
}

/// One violated identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub identity: String,
    pub witness: String,
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {}", self.identity, self.witness)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, identity: &str, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.violations.len() < 10_000 {
            self.violations.push(AxiomViolation { identity: identity.to_string(), witness: witness() });
        }
    }
}

/// Exhaustively checks every identity of a semi-Mackey functor in subgroup form.
pub fn check_axioms(m: &SemiMackey) -> AxiomReport {
    let group = &m.group;
    let lat = group.lattice();
    let ns = lat.len();
    let mut rep = AxiomReport::default();

    // Homomorphisms.
    for t in m.tables() {
        let (table, cod) = m.table(t);
        let dom = match t {
            TableRef::Res { h, .. } => h,
            TableRef::Tr { k, .. } => k,
            TableRef::Conj { s, .. } => s,
        };
        let ok = m.level(dom).is_hom(m.level(cod), table);
        rep.record(ok, "monoid homomorphism", || format!("{t:?}"));
    }
    let sub = |k: SubgroupId, h: SubgroupId| lat.is_subgroup_of(k, h);
    // Identities and transitivity.
    for h in 0..ns {
        for j in 0..m.level(h).size() {
            rep.record(m.res(h, h, j) == j, "r^H_H = id", || format!("H={h}, m={j}"));
            rep.record(m.tr(h, h, j) == j, "t^H_H = id", || format!("H={h}, m={j}"));
        }
        for k in (0..ns).filter(|&k| sub(k, h)) {
            for l in (0..ns).filter(|&l| sub(l, k)) {
                for j in 0..m.level(h).size() {
                    let ok = m.res(k, l, m.res(h, k, j)) == m.res(h, l, j);
                    rep.record(ok, "r^K_L r^H_K = r^H_L", || format!("H={h}, K={k}, L={l}, m={j}"));
                }
                for j in 0..m.level(l).size() {
                    let ok = m.tr(h, k, m.tr(k, l, j)) == m.tr(h, l, j);
                    rep.record(ok, "t^H_K t^K_L = t^H_L", || format!("H={h}, K={k}, L={l}, m={j}"));
                }
            }
        }
    }
    // Conjugations: cocycle, inner, compatibility with r and t.
    for s in 0..ns {
        for g1 in group.elements() {
            let s1 = lat.conj(g1, s);
            for j in 0..m.level(s).size() {
                let inner = lat.subgroup(s).contains(g1);
                if inner {
                    rep.record(m.conj(g1, s, j) == j, "c_{h,H} = id for h in H", || {
                        format!("h={g1}, H={s}, m={j}")
                    });
                }
            }
            for g2 in group.elements() {
                let g21 = group.mul(g2, g1);
                for j in 0..m.level(s).size() {
                    let ok = m.conj(g2, s1, m.conj(g1, s, j)) == m.conj(g21, s, j);
                    rep.record(ok, "c_{g2} c_{g1} = c_{g2 g1}", || {
                        format!("g1={g1}, g2={g2}, H={s}, m={j}")
                    });
                }
            }
        }
    }
    for h in 0..ns {
        for k in (0..ns).filter(|&k| sub(k, h)) {
            for g in group.elements() {
                let (gh, gk) = (lat.conj(g, h), lat.conj(g, k));
                for j in 0..m.level(h).size() {
                    let ok = m.conj(g, k, m.res(h, k, j)) == m.res(gh, gk, m.conj(g, h, j));
                    rep.record(ok, "c_g r^H_K = r^{gH}_{gK} c_g", || {
                        format!("g={g}, H={h}, K={k}, m={j}")
                    });
                }
                for j in 0..m.level(k).size() {
                    let ok = m.conj(g, h, m.tr(h, k, j)) == m.tr(gh, gk, m.conj(g, k, j));
                    rep.record(ok, "c_g t^H_K = t^{gH}_{gK} c_g", || {
                        format!("g={g}, H={h}, K={k}, m={j}")
                    });
                }
            }
        }
    }
    // Mackey condition.
    for h in 0..ns {
        for k in (0..ns).filter(|&k| sub(k, h)) {
            for l in (0..ns).filter(|&l| sub(l, h)) {
                let reps = group.double_cosets(h, l, k).expect("L, K <= H");
                let lm = m.level(l);
                for j in 0..m.level(k).size() {
                    let lhs = m.res(h, l, m.tr(h, k, j));
                    let rhs = lm.product(reps.iter().map(|&x| {
                        let xk = lat.conj(x, k);
                        let s = lat.intersection(l, xk);
                        m.tr(l, s, m.res(xk, s, m.conj(x, k, j)))
                    }));
                    rep.record(lhs == rhs, "Mackey condition r^H_L t^H_K", || {
                        format!("H={h}, K={k}, L={l}, m={j}")
                    });
                }
            }
        }
    }
    rep
}

/// An element of `M(A)`: one component per orbit of `A`, stored at the orbit's minimal point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MackeyElement {
    base: GSet,
    comps: Vec<usize>,
}

impl MackeyElement {
    pub fn new(m: &SemiMackey, base: &GSet, comps: Vec<usize>) -> Result<Self, MackeyError> {
        let od = base.orbits();
        if comps.len() != od.len() {
            return Err(MackeyError::WrongShape { expected: od.len(), got: comps.len() });
        }
        for (o, &c) in od.orbits.iter().zip(&comps) {
            let size = m.level(o.stabilizer).size();
            if c >= size {
                return Err(MackeyError::LabelOutOfRange { value: c, size });
            }
        }
        Ok(MackeyElement { base: base.clone(), comps })
    }

    /// The unit of `M(A)`.
    pub fn unit(m: &SemiMackey, base: &GSet) -> Self {
        let comps = base.orbits().orbits.iter().map(|o| m.level(o.stabilizer).unit()).collect();
        MackeyElement { base: base.clone(), comps }
    }

    pub fn base(&self) -> &GSet {
        &self.base
    }

    pub fn components(&self) -> &[usize] {
        &self.comps
    }

    /// The component at an arbitrary point `x`, in `M(G/G_x)`.
    pub fn at(&self, m: &SemiMackey, x: usize) -> (SubgroupId, usize) {
        let od = self.base.orbits();
        let o = od.orbit_of[x];
        let t = od.transversal[x];
        let stab = od.orbits[o].stabilizer;
        (self.base.group().lattice().conj(t, stab), m.conj(t, stab, self.comps[o]))
    }

    /// Componentwise product.
    pub fn mul(&self, m: &SemiMackey, other: &MackeyElement) -> Result<Self, MackeyError> {
        if self.base != other.base {
            return Err(MackeyError::BaseMismatch);
        }
        let od = self.base.orbits();
        let comps = od
            .orbits
            .iter()
            .enumerate()
            .map(|(i, o)| m.level(o.stabilizer).mul(self.comps[i], other.comps[i]))
            .collect();
        Ok(MackeyElement { base: self.base.clone(), comps })
    }
}

/// `M*(f)(b)` for `f: A -> B`.
pub fn pull(m: &SemiMackey, f: &GMap, b: &MackeyElement) -> Result<MackeyElement, MackeyError> {
    if f.cod() != &b.base {
        return Err(MackeyError::BaseMismatch);
    }
    let comps = f
        .dom()
        .orbits()
        .orbits
        .iter()
        .map(|o| {
            let (hb, vb) = b.at(m, f.apply(o.rep));
            m.res(hb, o.stabilizer, vb)
        })
        .collect();
    Ok(MackeyElement { base: f.dom().clone(), comps })
}

/// `M_*(f)(a)` for `f: A -> B`.
pub fn push(m: &SemiMackey, f: &GMap, a: &MackeyElement) -> Result<MackeyElement, MackeyError> {
    if f.dom() != &a.base {
        return Err(MackeyError::BaseMismatch);
    }
    let group = f.dom().group();
    let lat = group.lattice();
    let bod = f.cod().orbits();
    let mut comps: Vec<usize> =
        bod.orbits.iter().map(|o| m.level(o.stabilizer).unit()).collect();
    for (i, o) in f.dom().orbits().orbits.iter().enumerate() {
        let b = f.apply(o.rep);
        let ob = bod.orbit_of[b];
        let t = bod.transversal[b];
        let b0_stab = bod.orbits[ob].stabilizer;
        let gb = lat.conj(t, b0_stab);
        let at_b = m.tr(gb, o.stabilizer, a.comps[i]);
        let at_b0 = m.conj(group.inv(t), gb, at_b);
        comps[ob] = m.level(b0_stab).mul(comps[ob], at_b0);
    }
    Ok(MackeyElement { base: f.cod().clone(), comps })
}

/// A morphism of semi-Mackey functors, one value table per subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MackeyMorphism {
    pub tables: Vec<Vec<usize>>,
}

impl MackeyMorphism {
    pub fn identity(m: &SemiMackey) -> Self {
        let lat = m.group.lattice();
        MackeyMorphism { tables: (0..lat.len()).map(|s| (0..m.level(s).size()).collect()).collect() }
    }

    /// Extends tables given on class representatives to all subgroups through conjugation.
    pub fn from_class_reps(m: &SemiMackey, n: &SemiMackey, reps: &[Vec<usize>]) -> Self {
        let lat = m.group.lattice();
        let tables = (0..lat.len())
            .map(|s| {
                let (c, w) = lat.classes().class_of[s];
                let r = lat.class_rep(c);
                let w_inv = m.group.inv(w);
                (0..m.level(s).size())
                    .map(|j| n.conj(w_inv, r, reps[c][m.conj(w, s, j)]))
                    .collect()
            })
            .collect();
        MackeyMorphism { tables }
    }

    #[inline]
    pub fn apply(&self, s: SubgroupId, j: usize) -> usize {
        self.tables[s][j]
    }

    /// Checks the homomorphism property and compatibility with `r`, `t` and `c`.
    pub fn validate(&self, m: &SemiMackey, n: &SemiMackey) -> Result<(), MackeyError> {
        let group = &m.group;
        let lat = group.lattice();
        let ns = lat.len();
        let err = |s: String| Err(MackeyError::NotAMackeyMorphism(s));
        if self.tables.len() != ns {
            return err("wrong number of tables".into());
        }
        for s in 0..ns {
            if !m.level(s).is_hom(n.level(s), &self.tables[s]) {
                return err(format!("component at subgroup {s} is not a monoid homomorphism"));
            }
        }
        for h in 0..ns {
            for k in (0..ns).filter(|&k| lat.is_subgroup_of(k, h)) {
                for j in 0..m.level(h).size() {
                    if self.apply(k, m.res(h, k, j)) != n.res(h, k, self.apply(h, j)) {
                        return err(format!("does not commute with r^{h}_{k}"));
                    }
                }
                for j in 0..m.level(k).size() {
                    if self.apply(h, m.tr(h, k, j)) != n.tr(h, k, self.apply(k, j)) {
                        return err(format!("does not commute with t^{h}_{k}"));
                    }
                }
            }
        }
        for g in group.elements() {
            for s in 0..ns {
                for j in 0..m.level(s).size() {
                    if self.apply(lat.conj(g, s), m.conj(g, s, j)) != n.conj(g, s, self.apply(s, j)) {
                        return err(format!("does not commute with c_({g},{s})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the morphism to an element on an arbitrary G-set.
    pub fn apply_element(&self, a: &MackeyElement) -> MackeyElement {
        let comps = a
            .base
            .orbits()
            .orbits
            .iter()
            .zip(&a.comps)
            .map(|(o, &c)| self.apply(o.stabilizer, c))
            .collect();
        MackeyElement { base: a.base.clone(), comps }
    }

    pub fn compose(&self, after: &MackeyMorphism) -> MackeyMorphism {
        MackeyMorphism {
            tables: self
                .tables
                .iter()
                .zip(&after.tables)
                .map(|(f, g)| f.iter().map(|&v| g[v]).collect())
                .collect(),
        }
    }
}

/// All morphisms `m -> n`, found by choosing homs at class representatives.
/// Returns `None` when there would be more than `limit` candidates.
pub fn enumerate_morphisms(m: &SemiMackey, n: &SemiMackey, limit: usize) -> Option<Vec<MackeyMorphism>> {
    let lat = m.group.lattice();
    let choices: Vec<Vec<Vec<usize>>> = (0..lat.class_count())
        .map(|c| {
            let r = lat.class_rep(c);
            m.level(r).homs(n.level(r))
        })
        .collect();
    let total = choices.iter().fold(1usize, |a, c| a.saturating_mul(c.len()));
    if total > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut digits = vec![0; choices.len()];
    if total == 0 {
        return Some(out);
    }
    loop {
        let reps: Vec<Vec<usize>> = digits.iter().zip(&choices).map(|(&d, c)| c[d].clone()).collect();
        let phi = MackeyMorphism::from_class_reps(m, n, &reps);
        if phi.validate(m, n).is_ok() {
            out.push(phi);
        }
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    Some(out)
}

pub fn fixed_point_functor(q: &GMonoid) -> SemiMackey {
    SemiMackey::fixed_point(q)
}

pub fn ell_functor(group: &Group, q: &Monoid, name: &str) -> SemiMackey {
    SemiMackey::ell(group, q, name)
}

pub fn trivial_functor(group: &Group) -> SemiMackey {
    SemiMackey::trivial(group)
}

/// Checks the functor identities on random G-sets: functoriality of pull and push, both being
/// monoid maps, and the pullback square condition `f* g_* = g'_* f'*`. Returns failure descriptions.
pub fn check_on_gsets(m: &SemiMackey, samples: usize, seed: u64) -> Vec<String> {
    let group = m.group();
    let mut failures = Vec::new();
    for i in 0..samples as u64 {
        let mut rng = instance_rng(seed, i);
        let g = random_map(group, 8, 3, &mut rng);
        let f = random_over(g.cod(), 8, 3, &mut rng);
        let a1 = random_element(m, g.dom(), &mut rng);
        let a2 = random_element(m, g.dom(), &mut rng);
        let pb = match pullback(&f, &g) {
            Ok(pb) => pb,
            Err(e) => {
                failures.push(format!("sample {i}: {e}"));
                continue;
            }
        };
        let lhs = pull(m, &f, &push(m, &g, &a1).unwrap()).unwrap();
        let rhs = push(m, &pb.pr1, &pull(m, &pb.pr2, &a1).unwrap()).unwrap();
        if lhs != rhs {
            failures.push(format!("sample {i}: pullback square condition"));
        }
        let prod = a1.mul(m, &a2).unwrap();
        if push(m, &g, &prod).unwrap() != push(m, &g, &a1).unwrap().mul(m, &push(m, &g, &a2).unwrap()).unwrap() {
            failures.push(format!("sample {i}: push is not multiplicative"));
        }
        if push(m, &g, &MackeyElement::unit(m, g.dom())).unwrap() != MackeyElement::unit(m, g.cod()) {
            failures.push(format!("sample {i}: push does not preserve the unit"));
        }
        let b1 = random_element(m, g.cod(), &mut rng);
        let b2 = random_element(m, g.cod(), &mut rng);
        if pull(m, &g, &b1.mul(m, &b2).unwrap()).unwrap()
            != pull(m, &g, &b1).unwrap().mul(m, &pull(m, &g, &b2).unwrap()).unwrap()
        {
            failures.push(format!("sample {i}: pull is not multiplicative"));
        }
        // f: C -> B, g: A -> B; compose h: D -> A with g.
        let h = random_over(g.dom(), 8, 3, &mut rng);
        let gh = h.then(&g).unwrap();
        let d = random_element(m, h.dom(), &mut rng);
        if push(m, &gh, &d).unwrap() != push(m, &g, &push(m, &h, &d).unwrap()).unwrap() {
            failures.push(format!("sample {i}: push is not functorial"));
        }
        if pull(m, &gh, &b1).unwrap() != pull(m, &h, &pull(m, &g, &b1).unwrap()).unwrap() {
            failures.push(format!("sample {i}: pull is not functorial"));
        }
    }
    failures
}

/// A uniformly random element of `M(A)`.
pub fn random_element<R: Rng>(m: &SemiMackey, base: &GSet, rng: &mut R) -> MackeyElement {
    let comps = base
        .orbits()
        .orbits
        .iter()
        .map(|o| rng.gen_range(0..m.level(o.stabilizer).size()))
        .collect();
    MackeyElement { base: base.clone(), comps }
}

/// One single-entry change of one table.
#[derive(Debug, Clone, Serialize)]
pub struct Mutation {
    pub table: TableRef,
    pub entry: usize,
    pub old: usize,
    pub new: usize,
}

/// Picks a table whose codomain has at least two elements, an entry and a different value.
pub fn random_mutation<R: Rng>(m: &SemiMackey, rng: &mut R) -> Option<Mutation> {
    let tables: Vec<TableRef> = m
        .tables()
        .into_iter()
        .filter(|&t| {
            let (tab, cod) = m.table(t);
            !tab.is_empty() && m.level(cod).size() > 1
        })
        .collect();
    let &table = tables.choose(rng)?;
    let (tab, cod) = m.table(table);
    let entry = rng.gen_range(0..tab.len());
    let old = tab[entry];
    let mut new = rng.gen_range(0..m.level(cod).size() - 1);
    if new >= old {
        new += 1;
    }
    Some(Mutation { table, entry, old, new })
}

pub fn apply_mutation(m: &SemiMackey, mu: &Mutation) -> SemiMackey {
    let mut out = m.clone();
    out.set_entry(mu.table, mu.entry, mu.new);
    out.name = format!("{} mutated", m.name);
    out
}

/// The functor named by a CLI spec: `trivial`, `fixed_point`, `ell`, or explicit JSON tables.
pub fn functor_from_spec(group: &Group, functor: &str, monoid: &GMonoid) -> Result<SemiMackey, MackeyError> {
    match functor.trim() {
        "trivial" => Ok(SemiMackey::trivial(group)),
        "fixed_point" | "fixed" | "P" => Ok(SemiMackey::fixed_point(monoid)),
        "ell" | "L" => {
            if !monoid.is_trivial_action() {
                return Err(MackeyError::InvalidSpec("ell takes a monoid without group action".into()));
            }
            Ok(SemiMackey::ell(group, monoid.monoid(), monoid.name()))
        }
        text if text.starts_with('{') => {
            let j: MackeyJson =
                serde_json::from_str(text).map_err(|e| MackeyError::InvalidSpec(e.to_string()))?;
            SemiMackey::from_json(group, &j)
        }
        other => Err(MackeyError::InvalidSpec(format!("unknown functor {other:?}"))),
    }
}
