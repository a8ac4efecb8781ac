//! Finite G-sets and equivariant maps.
//!
//! A [`GSet`] is a dense action table `act[g][x]`. Orbit data is computed
//! once on demand and cached. Objects "over X" are simply [`GMap`]s with
//! codomain `X`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, SubgroupId};

/// Upper bound on the number of points a constructed G-set may have.
pub const MAX_POINTS: usize = 250_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GSetError {
    #[error("objects live over different groups")]
    GroupMismatch,
    #[error("objects live over different bases")]
    BaseMismatch,
    #[error("map is not equivariant at g={g}, x={x}")]
    NotEquivariant { g: usize, x: usize },
    #[error("action table does not define a group action: {0}")]
    NotAnAction(String),
    #[error("point {0} out of range")]
    OutOfRange(usize),
    #[error("construction would have {0} points, above the limit")]
    TooLarge(usize),
}

/// One orbit of a G-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Minimal point of the orbit.
    pub rep: usize,
    pub stabilizer: SubgroupId,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Orbits in increasing order of their minimal point.
    pub orbits: Vec<Orbit>,
    /// Orbit index of every point.
    pub orbit_of: Vec<usize>,
    /// `transversal[x]` is a group element `g` with `g . rep = x`.
    pub transversal: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

/// A finite G-set.
#[derive(Clone)]
pub struct GSet {
    group: Group,
    size: usize,
    act: Arc<[usize]>,
    orbits: Arc<OnceLock<OrbitDecomposition>>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet(size {}, orbits {:?})", self.size, self.orbit_summary())
    }
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.group == other.group && self.act == other.act
    }
}

impl Eq for GSet {}

impl GSet {
    /// Validated construction from `act[g * size + x]`.
    pub fn from_action(group: &Group, size: usize, act: Vec<usize>) -> Result<Self, GSetError> {
        let n = group.order();
        if act.len() != n * size {
            return Err(GSetError::NotAnAction(format!(
                "expected {} entries, got {}",
                n * size,
                act.len()
            )));
        }
        if let Some(&bad) = act.iter().find(|&&v| v >= size) {
            return Err(GSetError::OutOfRange(bad));
        }
        for x in 0..size {
            if act[x] != x {
                return Err(GSetError::NotAnAction(format!("identity moves point {x}")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                for x in 0..size {
                    if act[g * size + act[h * size + x]] != act[gh * size + x] {
                        return Err(GSetError::NotAnAction(format!(
                            "g={g}, h={h}, x={x} violates compatibility"
                        )));
                    }
                }
            }
        }
        Ok(Self::from_action_unchecked(group, size, act))
    }

    pub(crate) fn from_action_unchecked(group: &Group, size: usize, act: Vec<usize>) -> Self {
        debug_assert_eq!(act.len(), group.order() * size);
        GSet { group: group.clone(), size, act: act.into(), orbits: Arc::new(OnceLock::new()) }
    }

    /// Builds the action table from a closure `(g, x) -> g.x`.
    pub(crate) fn from_fn(group: &Group, size: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let n = group.order();
        let mut act = Vec::with_capacity(n * size);
        for g in 0..n {
            for x in 0..size {
                act.push(f(g, x));
            }
        }
        Self::from_action_unchecked(group, size, act)
    }

    pub fn empty(group: &Group) -> Self {
        Self::from_action_unchecked(group, 0, Vec::new())
    }

    /// The one-point G-set `G/G`.
    pub fn point(group: &Group) -> Self {
        Self::from_action_unchecked(group, 1, vec![0; group.order()])
    }

    /// The coset G-set `G/K`. Point `0` is `eK`; cosets are numbered in order of their least element.
    pub fn coset(group: &Group, k: SubgroupId) -> Self {
        let (labels, _) = coset_labels(group, k);
        let count = group.order() / group.lattice().subgroup(k).order();
        // Coset i contains element reps[i]; g acts by left multiplication.
        let mut reps = vec![usize::MAX; count];
        for g in group.elements() {
            if reps[labels[g]] == usize::MAX {
                reps[labels[g]] = g;
            }
        }
        Self::from_fn(group, count, |g, x| labels[group.mul(g, reps[x])])
    }

    /// Disjoint union of coset G-sets, in the given order.
    pub fn cosets(group: &Group, subs: &[SubgroupId]) -> Self {
        subs.iter()
            .fold(Self::empty(group), |acc, &k| acc.coproduct(&Self::coset(group, k)).unwrap().0)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g * self.size + x]
    }

    pub fn action_table(&self) -> &[usize] {
        &self.act
    }

    pub fn orbits(&self) -> &OrbitDecomposition {
        self.orbits.get_or_init(|| orbit_decompose_raw(&self.group, self.size, &self.act))
    }

    pub fn stabilizer(&self, x: usize) -> SubgroupId {
        let od = self.orbits();
        let orbit = &od.orbits[od.orbit_of[x]];
        self.group.lattice().conj(od.transversal[x], orbit.stabilizer)
    }

    /// Whether every element of `k` fixes `x`.
    pub fn fixes(&self, k: SubgroupId, x: usize) -> bool {
        self.group.lattice().subgroup(k).elements().iter().all(|&g| self.act(g, x) == x)
    }

    /// Sorted multiset of stabilizer conjugacy classes, one per orbit.
    pub fn orbit_summary(&self) -> Vec<usize> {
        let lat = self.group.lattice();
        let mut v: Vec<usize> =
            self.orbits().orbits.iter().map(|o| lat.class_of(o.stabilizer)).collect();
        v.sort_unstable();
        v
    }

    /// Disjoint union with both injections; points of `other` follow those of `self`.
    pub fn coproduct(&self, other: &GSet) -> Result<(GSet, GMap, GMap), GSetError> {
        if self.group != other.group {
            return Err(GSetError::GroupMismatch);
        }
        let (n1, n2) = (self.size, other.size);
        let sum = GSet::from_fn(&self.group, n1 + n2, |g, x| {
            if x < n1 {
                self.act(g, x)
            } else {
                n1 + other.act(g, x - n1)
            }
        });
        let i1 = GMap::new_unchecked(self.clone(), sum.clone(), (0..n1).collect());
        let i2 = GMap::new_unchecked(other.clone(), sum.clone(), (n1..n1 + n2).collect());
        Ok((sum, i1, i2))
    }

    /// Cartesian product with diagonal action; point `(x, y)` has index `x * |other| + y`.
    pub fn product(&self, other: &GSet) -> Result<(GSet, GMap, GMap), GSetError> {
        if self.group != other.group {
            return Err(GSetError::GroupMismatch);
        }
        let m = other.size;
        let total = self.size * m;
        if total > MAX_POINTS {
            return Err(GSetError::TooLarge(total));
        }
        let prod = GSet::from_fn(&self.group, total, |g, z| {
            self.act(g, z / m.max(1)) * m + other.act(g, z % m.max(1))
        });
        let p1 = GMap::new_unchecked(prod.clone(), self.clone(), (0..total).map(|z| z / m).collect());
        let p2 = GMap::new_unchecked(prod.clone(), other.clone(), (0..total).map(|z| z % m).collect());
        Ok((prod, p1, p2))
    }

    /// Renumbers the points: point `x` becomes `perm[x]`. Returns the new set and the iso `self -> new`.
    pub fn relabel(&self, perm: &[usize]) -> (GSet, GMap) {
        let mut inv = vec![0; self.size];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let new = GSet::from_fn(&self.group, self.size, |g, y| perm[self.act(g, inv[y])]);
        let iso = GMap::new_unchecked(self.clone(), new.clone(), perm.to_vec());
        (new, iso)
    }
}

/// The disjoint union of maps into a common codomain, with pieces numbered consecutively.
pub fn sum_over(cod: &GSet, pieces: &[GMap]) -> GMap {
    let group = cod.group();
    let n = group.order();
    let size: usize = pieces.iter().map(|p| p.dom().size()).sum();
    let mut act = vec![0; n * size];
    let mut map = Vec::with_capacity(size);
    let mut off = 0;
    for piece in pieces {
        debug_assert!(piece.cod() == cod);
        let d = piece.dom();
        for g in 0..n {
            for x in 0..d.size() {
                act[g * size + off + x] = off + d.act(g, x);
            }
        }
        map.extend_from_slice(piece.values());
        off += d.size();
    }
    GMap::new_unchecked(GSet::from_action_unchecked(group, size, act), cod.clone(), map)
}

/// Coset index of every element for left cosets `gK`, numbered by least element; also the count.
pub(crate) fn coset_labels(group: &Group, k: SubgroupId) -> (Vec<usize>, usize) {
    let sub = group.lattice().subgroup(k);
    let mut label = vec![usize::MAX; group.order()];
    let mut next = 0;
    for g in group.elements() {
        if label[g] == usize::MAX {
            for &h in sub.elements() {
                label[group.mul(g, h)] = next;
            }
            next += 1;
        }
    }
    (label, next)
}

fn orbit_decompose_raw(group: &Group, size: usize, act: &[usize]) -> OrbitDecomposition {
    let n = group.order();
    let mut orbit_of = vec![usize::MAX; size];
    let mut transversal = vec![0; size];
    let mut orbits = Vec::new();
    for x in 0..size {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let idx = orbits.len();
        let mut points = Vec::new();
        let mut stab = Vec::new();
        for g in 0..n {
            let y = act[g * size + x];
            if y == x {
                stab.push(g);
            }
            if orbit_of[y] == usize::MAX {
                orbit_of[y] = idx;
                transversal[y] = g;
                points.push(y);
            }
        }
        points.sort_unstable();
        let stabilizer = group.lattice().id_of(&stab).expect("stabilizer is a subgroup");
        orbits.push(Orbit { rep: x, stabilizer, points });
    }
    OrbitDecomposition { orbits, orbit_of, transversal }
}

/// Orbit decomposition of a G-set (cached on the set).
pub fn orbit_decompose(a: &GSet) -> &OrbitDecomposition {
    a.orbits()
}

/// An equivariant map.
#[derive(Clone, PartialEq, Eq)]
pub struct GMap {
    dom: GSet,
    cod: GSet,
    map: Arc<[usize]>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMap({} -> {}: {:?})", self.dom.size, self.cod.size, &self.map[..])
    }
}

impl GMap {
    pub fn new(dom: GSet, cod: GSet, map: Vec<usize>) -> Result<Self, GSetError> {
        if dom.group != cod.group {
            return Err(GSetError::GroupMismatch);
        }
        if map.len() != dom.size {
            return Err(GSetError::OutOfRange(map.len()));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= cod.size) {
            return Err(GSetError::OutOfRange(bad));
        }
        for g in dom.group.elements() {
            for x in 0..dom.size {
                if map[dom.act(g, x)] != cod.act(g, map[x]) {
                    return Err(GSetError::NotEquivariant { g, x });
                }
            }
        }
        Ok(Self::new_unchecked(dom, cod, map))
    }

    pub(crate) fn new_unchecked(dom: GSet, cod: GSet, map: Vec<usize>) -> Self {
        GMap { dom, cod, map: map.into() }
    }

    pub fn identity(x: &GSet) -> Self {
        Self::new_unchecked(x.clone(), x.clone(), (0..x.size).collect())
    }

    /// The unique map to the one-point set.
    pub fn to_point(x: &GSet) -> Self {
        Self::new_unchecked(x.clone(), GSet::point(&x.group), vec![0; x.size])
    }

    /// The map `G/K -> X` sending `eK` to `x`; requires `K <= G_x`.
    pub fn from_coset(group: &Group, k: SubgroupId, x_set: &GSet, x: usize) -> Self {
        debug_assert!(x_set.fixes(k, x));
        let dom = GSet::coset(group, k);
        let (labels, count) = coset_labels(group, k);
        let mut map = vec![usize::MAX; count];
        for g in group.elements() {
            if map[labels[g]] == usize::MAX {
                map[labels[g]] = x_set.act(g, x);
            }
        }
        Self::new_unchecked(dom, x_set.clone(), map)
    }

    pub fn dom(&self) -> &GSet {
        &self.dom
    }

    pub fn cod(&self) -> &GSet {
        &self.cod
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GMap) -> Result<GMap, GSetError> {
        if self.cod != other.dom {
            return Err(GSetError::BaseMismatch);
        }
        Ok(Self::new_unchecked(
            self.dom.clone(),
            other.cod.clone(),
            self.map.iter().map(|&y| other.map[y]).collect(),
        ))
    }

    /// Points of the domain over `y`, ascending.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.dom.size).filter(|&x| self.map[x] == y).collect()
    }

    /// All fibers, indexed by codomain point.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.cod.size];
        for (x, &y) in self.map.iter().enumerate() {
            f[y].push(x);
        }
        f
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom.size != self.cod.size {
            return false;
        }
        let mut seen = vec![false; self.cod.size];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn inverse(&self) -> Option<GMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod.size];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Self::new_unchecked(self.cod.clone(), self.dom.clone(), inv))
    }
}

/// Coproduct of two objects over the same base.
pub fn coproduct(a: &GMap, b: &GMap) -> Result<(GMap, GMap, GMap), GSetError> {
    if a.cod != b.cod {
        return Err(GSetError::BaseMismatch);
    }
    let (sum, i1, i2) = a.dom.coproduct(&b.dom)?;
    let map: Vec<usize> = a.map.iter().chain(b.map.iter()).copied().collect();
    Ok((GMap::new_unchecked(sum, a.cod.clone(), map), i1, i2))
}

/// Wire form of a G-set; `act[g][x]` and `group` is the group's name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSetJson {
    pub group: String,
    pub size: usize,
    pub act: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GMapJson {
    pub dom: GSetJson,
    pub cod: GSetJson,
    pub map: Vec<usize>,
}

impl GSet {
    pub fn to_json(&self) -> GSetJson {
        GSetJson {
            group: self.group.name().to_string(),
            size: self.size,
            act: self.group.elements().map(|g| (0..self.size).map(|x| self.act(g, x)).collect()).collect(),
        }
    }

    pub fn from_json(group: &Group, j: &GSetJson) -> Result<Self, GSetError> {
        if j.act.len() != group.order() {
            return Err(GSetError::NotAnAction(format!("expected {} rows", group.order())));
        }
        if j.act.iter().any(|r| r.len() != j.size) {
            return Err(GSetError::NotAnAction(format!("rows must have {} entries", j.size)));
        }
        GSet::from_action(group, j.size, j.act.iter().flatten().copied().collect())
    }
}

impl GMap {
    pub fn to_json(&self) -> GMapJson {
        GMapJson { dom: self.dom.to_json(), cod: self.cod.to_json(), map: self.map.to_vec() }
    }

    pub fn from_json(group: &Group, j: &GMapJson) -> Result<Self, GSetError> {
        GMap::new(GSet::from_json(group, &j.dom)?, GSet::from_json(group, &j.cod)?, j.map.clone())
    }
}

/// Fibered product `A ×_X B` with points `(a, b)` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub obj: GSet,
    pub pr1: GMap,
    pub pr2: GMap,
    offset: Vec<usize>,
    pos_in_fiber: Vec<usize>,
}

impl Pullback {
    /// Index of the point `(a, b)`; requires `f(a) = g(b)`.
    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        self.offset[a] + self.pos_in_fiber[b]
    }

    /// The structure map `A ×_X B -> X`.
    pub fn to_base(&self, f: &GMap) -> GMap {
        self.pr1.then(f).expect("pullback projection composes with f")
    }
}

pub fn pullback(f: &GMap, g: &GMap) -> Result<Pullback, GSetError> {
    if f.cod != g.cod {
        return Err(GSetError::BaseMismatch);
    }
    let fibers = g.fibers();
    let mut pos_in_fiber = vec![0; g.dom.size];
    for fib in &fibers {
        for (i, &b) in fib.iter().enumerate() {
            pos_in_fiber[b] = i;
        }
    }
    let mut offset = Vec::with_capacity(f.dom.size);
    let mut pairs = Vec::new();
    for a in 0..f.dom.size {
        offset.push(pairs.len());
        for &b in &fibers[f.map[a]] {
            pairs.push((a, b));
        }
    }
    if pairs.len() > MAX_POINTS {
        return Err(GSetError::TooLarge(pairs.len()));
    }
    let obj = GSet::from_fn(&f.dom.group, pairs.len(), |h, z| {
        let (a, b) = pairs[z];
        let (a2, b2) = (f.dom.act(h, a), g.dom.act(h, b));
        offset[a2] + pos_in_fiber[b2]
    });
    let pr1 = GMap::new_unchecked(obj.clone(), f.dom.clone(), pairs.iter().map(|p| p.0).collect());
    let pr2 = GMap::new_unchecked(obj.clone(), g.dom.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { obj, pr1, pr2, offset, pos_in_fiber })
}

/// The exponential diagram `X <-p- A <-λ- X ×_Y Π -ρ-> Π -π-> Y` built from `η: X -> Y` and `p: A -> X`.
#[derive(Debug, Clone)]
pub struct ExponentialDiagram {
    pub eta: GMap,
    pub p: GMap,
    /// `π: Π_η(A) -> Y`.
    pub pi: GMap,
    /// `λ: X ×_Y Π_η(A) -> A`.
    pub lambda: GMap,
    /// `ρ: X ×_Y Π_η(A) -> Π_η(A)`.
    pub rho: GMap,
    /// `X ×_Y Π_η(A) -> X`.
    pub z_to_x: GMap,
    /// Sorted fiber `η^{-1}(y)` for every `y`.
    pub eta_fibers: Vec<Vec<usize>>,
    /// Section values: point `s` maps the `i`-th element of its fiber to `sections[s][i]`.
    pub sections: Vec<Vec<usize>>,
    z_pullback: Pullback,
    offset: Vec<usize>,
    pos_in_eta_fiber: Vec<usize>,
    pos_in_p_fiber: Vec<usize>,
    p_fiber_len: Vec<usize>,
}

impl ExponentialDiagram {
    pub fn pi_obj(&self) -> &GSet {
        self.pi.dom()
    }

    pub fn z_obj(&self) -> &GSet {
        self.lambda.dom()
    }

    /// Point of `X ×_Y Π` over `(x, s)`.
    pub fn z_index(&self, x: usize, s: usize) -> usize {
        self.z_pullback.index(x, s)
    }

    /// Point of `Π_η(A)` for the section over `y` with the given values (in fiber order).
    pub fn section_index(&self, y: usize, values: &[usize]) -> Option<usize> {
        let fib = &self.eta_fibers[y];
        if fib.len() != values.len() {
            return None;
        }
        let mut idx = 0;
        for (&x, &a) in fib.iter().zip(values) {
            if self.p.apply(a) != x {
                return None;
            }
            idx = idx * self.p_fiber_len[x] + self.pos_in_p_fiber[a];
        }
        Some(self.offset[y] + idx)
    }

    /// Position of `x` inside its `η`-fiber, i.e. the slot of `x` in a section.
    pub fn slot(&self, x: usize) -> usize {
        self.pos_in_eta_fiber[x]
    }

    /// `σ_s(x)` for `η(x) = π(s)`.
    pub fn eval(&self, s: usize, x: usize) -> usize {
        self.sections[s][self.pos_in_eta_fiber[x]]
    }

    /// `(y, σ)` for a point of `Π_η(A)`.
    pub fn section(&self, s: usize) -> (usize, &[usize]) {
        (self.pi.apply(s), &self.sections[s])
    }
}

/// Number of points of `Π_η(A)`, computed without building it.
pub fn dependent_product_size(eta: &GMap, p: &GMap) -> usize {
    let pf = p.fibers();
    eta.fibers()
        .iter()
        .map(|fib| fib.iter().fold(1usize, |acc, &x| acc.saturating_mul(pf[x].len())))
        .fold(0usize, |a, b| a.saturating_add(b))
}

/// The dependent product `Π_η(A)` and its exponential diagram.
pub fn dependent_product(eta: &GMap, p: &GMap) -> Result<ExponentialDiagram, GSetError> {
    if p.cod != eta.dom {
        return Err(GSetError::BaseMismatch);
    }
    let total = dependent_product_size(eta, p);
    if total > MAX_POINTS {
        return Err(GSetError::TooLarge(total));
    }
    let group = eta.dom.group.clone();
    let y_set = eta.cod.clone();
    let eta_fibers = eta.fibers();
    let p_fibers = p.fibers();
    let mut pos_in_pf = vec![0; p.dom.size];
    for fib in &p_fibers {
        for (i, &a) in fib.iter().enumerate() {
            pos_in_pf[a] = i;
        }
    }
    let mut pos_in_ef = vec![0; eta.dom.size];
    for fib in &eta_fibers {
        for (i, &x) in fib.iter().enumerate() {
            pos_in_ef[x] = i;
        }
    }
    // Enumerate sections fiber by fiber, lexicographically (last coordinate fastest).
    let mut offset = vec![0; y_set.size];
    let mut pi_map = Vec::with_capacity(total);
    let mut sections: Vec<Vec<usize>> = Vec::with_capacity(total);
    for y in 0..y_set.size {
        offset[y] = sections.len();
        let fib = &eta_fibers[y];
        let radices: Vec<usize> = fib.iter().map(|&x| p_fibers[x].len()).collect();
        if radices.iter().any(|&r| r == 0) {
            continue;
        }
        let mut digits = vec![0; fib.len()];
        loop {
            sections.push(fib.iter().zip(&digits).map(|(&x, &d)| p_fibers[x][d]).collect());
            pi_map.push(y);
            let mut i = fib.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || fib.is_empty() {
                break;
            }
        }
    }
    // Mixed-radix index of a section given as values in fiber order.
    let index_of = |y: usize, values: &[usize]| -> usize {
        let mut idx = 0;
        for (&x, &a) in eta_fibers[y].iter().zip(values) {
            idx = idx * p_fibers[x].len() + pos_in_pf[a];
        }
        offset[y] + idx
    };
    let n = group.order();
    let mut act = vec![0; n * total];
    let mut buf = Vec::new();
    for g in 0..n {
        let ginv = group.inv(g);
        for s in 0..total {
            let y = pi_map[s];
            let y2 = y_set.act(g, y);
            buf.clear();
            for &x2 in &eta_fibers[y2] {
                let x = eta.dom.act(ginv, x2);
                let a = sections[s][pos_in_ef[x]];
                buf.push(p.dom.act(g, a));
            }
            act[g * total + s] = index_of(y2, &buf);
        }
    }
    let pi_obj = GSet::from_action_unchecked(&group, total, act);
    let pi = GMap::new_unchecked(pi_obj.clone(), y_set.clone(), pi_map);
    let z_pullback = pullback(eta, &pi)?;
    let lambda_map: Vec<usize> = z_pullback
        .pr1
        .values()
        .iter()
        .zip(z_pullback.pr2.values())
        .map(|(&x, &s)| sections[s][pos_in_ef[x]])
        .collect();
    let lambda = GMap::new_unchecked(z_pullback.obj.clone(), p.dom.clone(), lambda_map);
    Ok(ExponentialDiagram {
        eta: eta.clone(),
        p: p.clone(),
        pi,
        lambda,
        rho: z_pullback.pr2.clone(),
        z_to_x: z_pullback.pr1.clone(),
        eta_fibers,
        sections,
        z_pullback,
        offset,
        pos_in_eta_fiber: pos_in_ef,
        pos_in_p_fiber: pos_in_pf,
        p_fiber_len: p_fibers.iter().map(|f| f.len()).collect(),
    })
}

/// Decides whether `X <-ξ- Z <-ζ- X' -η'-> Y' -υ-> Y` (with `η: X -> Y`) is an exponential diagram,
/// i.e. isomorphic to the one built by [`dependent_product`] for `ξ`.
pub fn check_exponential(
    eta: &GMap,
    xi: &GMap,
    zeta: &GMap,
    eta_p: &GMap,
    upsilon: &GMap,
) -> Result<(), String> {
    if xi.cod != eta.dom || zeta.cod != xi.dom || eta_p.dom != zeta.dom || upsilon.dom != eta_p.cod
        || upsilon.cod != eta.cod
    {
        return Err("maps do not compose".into());
    }
    let xp_to_x = zeta.then(xi).map_err(|e| e.to_string())?;
    for x2 in 0..zeta.dom.size {
        if eta.apply(xp_to_x.apply(x2)) != upsilon.apply(eta_p.apply(x2)) {
            return Err(format!("square does not commute at {x2}"));
        }
    }
    // X' must be X ×_Y Y'.
    let pb = pullback(eta, upsilon).map_err(|e| e.to_string())?;
    if pb.obj.size != zeta.dom.size {
        return Err("X' is not the pullback X ×_Y Y' (size)".into());
    }
    let mut which = vec![usize::MAX; pb.obj.size];
    for x2 in 0..zeta.dom.size {
        let i = pb.index(xp_to_x.apply(x2), eta_p.apply(x2));
        if which[i] != usize::MAX {
            return Err("X' -> X ×_Y Y' is not injective".into());
        }
        which[i] = x2;
    }
    // Comparison map Y' -> Π_η(Z).
    let exp = dependent_product(eta, xi).map_err(|e| e.to_string())?;
    if exp.pi_obj().size != upsilon.dom.size {
        return Err("Y' and Π_η(Z) have different sizes".into());
    }
    let mut hit = vec![false; exp.pi_obj().size];
    let lookup: std::collections::HashMap<(usize, &[usize]), usize> = (0..exp.pi_obj().size)
        .map(|s| ((exp.pi.apply(s), exp.sections[s].as_slice()), s))
        .collect();
    let index = |y: usize, vals: &[usize]| lookup.get(&(y, vals)).copied();
    let mut comparison = vec![0; upsilon.dom.size];
    for y2 in 0..upsilon.dom.size {
        let y = upsilon.apply(y2);
        let vals: Vec<usize> =
            exp.eta_fibers[y].iter().map(|&x| zeta.apply(which[pb.index(x, y2)])).collect();
        let s = index(y, &vals).ok_or("comparison lands outside Π_η(Z)")?;
        if std::mem::replace(&mut hit[s], true) {
            return Err("comparison map Y' -> Π_η(Z) is not injective".into());
        }
        comparison[y2] = s;
    }
    GMap::new(upsilon.dom.clone(), exp.pi_obj().clone(), comparison)
        .map_err(|e| format!("comparison map is not equivariant: {e}"))?;
    Ok(())
}

/// An isomorphism `A1 -> A2` over `X`, if one exists.
pub fn iso_over(f1: &GMap, f2: &GMap) -> Option<GMap> {
    if f1.cod != f2.cod || f1.dom.size != f2.dom.size {
        return None;
    }
    let group = f1.dom.group.clone();
    let (a1, a2) = (&f1.dom, &f2.dom);
    let (o1, o2) = (a1.orbits(), a2.orbits());
    if o1.len() != o2.len() {
        return None;
    }
    let mut used = vec![false; o2.len()];
    let mut map = vec![usize::MAX; a1.size];
    // Orbit isomorphism over X is an equivalence relation, so greedy matching is complete.
    for orbit in &o1.orbits {
        let a = orbit.rep;
        let (x, stab) = (f1.apply(a), orbit.stabilizer);
        let mut found = None;
        'search: for (j, orbit2) in o2.orbits.iter().enumerate() {
            if used[j] || orbit2.points.len() != orbit.points.len() {
                continue;
            }
            for &b in &orbit2.points {
                if f2.apply(b) == x && a2.stabilizer(b) == stab {
                    found = Some((j, b));
                    break 'search;
                }
            }
        }
        let (j, b) = found?;
        used[j] = true;
        for g in group.elements() {
            map[a1.act(g, a)] = a2.act(g, b);
        }
    }
    Some(GMap::new_unchecked(a1.clone(), a2.clone(), map))
}

/// All maps `B -> A` over `X` (`q: B -> X`, `p: A -> X`), or `None` if there are more than `limit`.
pub fn homs_over(q: &GMap, p: &GMap, limit: usize) -> Option<Vec<GMap>> {
    if q.cod != p.cod {
        return Some(Vec::new());
    }
    let (b_set, a_set) = (&q.dom, &p.dom);
    let group = b_set.group().clone();
    let choices: Vec<Vec<usize>> = b_set
        .orbits()
        .orbits
        .iter()
        .map(|o| {
            (0..a_set.size)
                .filter(|&a| p.apply(a) == q.apply(o.rep) && a_set.fixes(o.stabilizer, a))
                .collect()
        })
        .collect();
    let mut count: usize = 1;
    for c in &choices {
        count = count.saturating_mul(c.len());
    }
    if count > limit {
        return None;
    }
    let orbits = &b_set.orbits().orbits;
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0; choices.len()];
    if count == 0 {
        return Some(out);
    }
    loop {
        let mut map = vec![0; b_set.size];
        for (o, (&d, c)) in orbits.iter().zip(digits.iter().zip(&choices)) {
            for g in group.elements() {
                map[b_set.act(g, o.rep)] = a_set.act(g, c[d]);
            }
        }
        out.push(GMap::new_unchecked(b_set.clone(), a_set.clone(), map));
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
