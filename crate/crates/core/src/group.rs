//! Finite groups given by Cayley tables, together with their subgroup lattice.
//!
//! Every construction in the crate happens over a fixed ambient [`Group`]:
//! a validated multiplication table plus the full list of subgroups,
//! their conjugation action and the conjugacy-class table. Subgroups are
//! referred to by their index in that list ([`SubgroupId`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on `|G|` for subgroup enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 120;

/// Environment variable overriding [`DEFAULT_MAX_GROUP_ORDER`].
pub const MAX_GROUP_ORDER_ENV: &str = "TAMBARIZE_MAX_GROUP_ORDER";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("multiplication table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),
    #[error("group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("subgroup {inner} is not contained in subgroup {outer}")]
    NotContained { inner: usize, outer: usize },
}

/// How to build a group. Mirrors the JSON form `{"kind":"cyclic","n":4}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Table { mul: Vec<Vec<usize>> },
}

impl GroupSpec {
    /// Parses either the JSON form or the short `kind:n` form used on the command line.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| GroupError::InvalidSpec(e.to_string()));
        }
        let (kind, n) = text
            .split_once(':')
            .ok_or_else(|| GroupError::InvalidSpec(format!("expected kind:n, got {text:?}")))?;
        let n: usize = n
            .parse()
            .map_err(|_| GroupError::InvalidSpec(format!("bad order in {text:?}")))?;
        match kind {
            "cyclic" | "C" => Ok(GroupSpec::Cyclic { n }),
            "dihedral" | "D" => Ok(GroupSpec::Dihedral { n }),
            "symmetric" | "S" => Ok(GroupSpec::Symmetric { n }),
            _ => Err(GroupError::InvalidSpec(format!("unknown group kind {kind:?}"))),
        }
    }
}

/// A validated finite group: elements are `0..order`, `0` is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    name: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates a Cayley table. The identity is moved to index 0 if needed.
    pub fn from_table(table: Vec<Vec<usize>>, name: impl Into<String>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::MalformedTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::MalformedTable(format!("entry {bad} out of range in row {i}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NonAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == identity && table[b][a] == identity) {
                return Err(GroupError::NoInverse(a));
            }
        }
        // Relabel so that the identity is element 0 (swap identity and 0).
        let relabel = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mul[a * n + b] == 0).expect("inverse checked above");
        }
        Ok(FiniteGroup { order: n, mul, inv, name: name.into() })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        match *spec {
            GroupSpec::Cyclic { n } => {
                if n == 0 {
                    return Err(GroupError::InvalidSpec("cyclic group needs n >= 1".into()));
                }
                let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
                Self::from_table(table, format!("C{n}"))
            }
            GroupSpec::Dihedral { n } => {
                if n < 2 {
                    return Err(GroupError::InvalidSpec("dihedral group needs n >= 2".into()));
                }
                // r^i s^j encoded as i + n*j; s r = r^{-1} s.
                let m = 2 * n;
                let table = (0..m)
                    .map(|x| {
                        (0..m)
                            .map(|y| {
                                let (i1, j1) = (x % n, x / n);
                                let (i2, j2) = (y % n, y / n);
                                let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
                                i + n * ((j1 + j2) % 2)
                            })
                            .collect()
                    })
                    .collect();
                Self::from_table(table, format!("D{n}"))
            }
            GroupSpec::Symmetric { n } => {
                if !(1..=5).contains(&n) {
                    return Err(GroupError::InvalidSpec("symmetric group needs 1 <= n <= 5".into()));
                }
                let perms = permutations(n);
                let index: HashMap<Vec<usize>, usize> =
                    perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
                let table = perms
                    .iter()
                    .map(|s| {
                        perms
                            .iter()
                            .map(|t| {
                                let st: Vec<usize> = (0..n).map(|i| s[t[i]]).collect();
                                index[&st]
                            })
                            .collect()
                    })
                    .collect();
                Self::from_table(table, format!("S{n}"))
            }
            GroupSpec::Table { ref mul } => Self::from_table(mul.clone(), format!("G{}", mul.len())),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g h g^{-1}`.
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv[g])
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The Cayley table as rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Closure of a set of elements under multiplication (finite, so inverses follow).
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            let a = elems[i];
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    elems.push(b);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let mut mask = vec![false; self.order];
        for &e in elems {
            if e >= self.order {
                return false;
            }
            mask[e] = true;
        }
        mask[0]
            && elems.iter().all(|&a| mask[self.inv(a)])
            && elems.iter().all(|&a| elems.iter().all(|&b| mask[self.mul(a, b)]))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Index of a subgroup in [`SubgroupLattice::subgroups`].
pub type SubgroupId = usize;

/// A subgroup as a strictly sorted list of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn new(elements: Vec<usize>, order: usize) -> Self {
        let mut mask = vec![false; order];
        for &e in &elements {
            mask[e] = true;
        }
        Subgroup { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask[g]
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

/// Subgroups up to conjugacy.
#[derive(Debug, Clone)]
pub struct SubgroupClassTable {
    /// Class representatives, ordered by subgroup order then element list.
    pub representatives: Vec<SubgroupId>,
    /// For every subgroup: its class index and an element `g` with `g K g^{-1}` the representative.
    pub class_of: Vec<(usize, usize)>,
    /// `inclusion_up_to_conj[i][j]`: some conjugate of representative `i` lies in representative `j`.
    pub inclusion_up_to_conj: Vec<Vec<bool>>,
}

/// All subgroups of a finite group with conjugation data.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    index: HashMap<Vec<usize>, SubgroupId>,
    /// `conj[g * n + s]` is the index of `g S g^{-1}`.
    conj: Vec<SubgroupId>,
    classes: SubgroupClassTable,
    normalizers: Vec<Vec<usize>>,
    subgroup_count: usize,
}

impl SubgroupLattice {
    pub fn len(&self) -> usize {
        self.subgroup_count
    }

    pub fn is_empty(&self) -> bool {
        self.subgroup_count == 0
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn classes(&self) -> &SubgroupClassTable {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.representatives.len()
    }

    pub fn trivial(&self) -> SubgroupId {
        0
    }

    pub fn whole(&self) -> SubgroupId {
        self.subgroup_count - 1
    }

    /// Looks up a subgroup from a sorted element list.
    pub fn id_of(&self, elements: &[usize]) -> Option<SubgroupId> {
        self.index.get(elements).copied()
    }

    /// `g S g^{-1}`.
    #[inline]
    pub fn conj(&self, g: usize, s: SubgroupId) -> SubgroupId {
        self.conj[g * self.subgroup_count + s]
    }

    pub fn class_of(&self, s: SubgroupId) -> usize {
        self.classes.class_of[s].0
    }

    pub fn class_witness(&self, s: SubgroupId) -> usize {
        self.classes.class_of[s].1
    }

    pub fn class_rep(&self, class: usize) -> SubgroupId {
        self.classes.representatives[class]
    }

    pub fn normalizer(&self, s: SubgroupId) -> &[usize] {
        &self.normalizers[s]
    }

    pub fn is_subgroup_of(&self, inner: SubgroupId, outer: SubgroupId) -> bool {
        self.subgroups[inner].is_subset_of(&self.subgroups[outer])
    }

    pub fn intersection(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let sb = &self.subgroups[b];
        let elems: Vec<usize> =
            self.subgroups[a].elements.iter().copied().filter(|&g| sb.contains(g)).collect();
        self.index[&elems]
    }

    /// Index `[outer : inner]`.
    pub fn index_in(&self, inner: SubgroupId, outer: SubgroupId) -> usize {
        self.subgroups[outer].order() / self.subgroups[inner].order()
    }
}

/// A finite group together with its subgroup lattice; the ambient `G` of every construction.
#[derive(Debug)]
pub struct GroupData {
    table: FiniteGroup,
    lattice: SubgroupLattice,
}

/// Shared handle to the ambient group.
#[derive(Debug, Clone)]
pub struct Group(Arc<GroupData>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.table == other.0.table
    }
}

impl Eq for Group {}

impl std::ops::Deref for Group {
    type Target = FiniteGroup;

    fn deref(&self) -> &FiniteGroup {
        &self.0.table
    }
}

impl Group {
    pub fn new(table: FiniteGroup) -> Result<Self, GroupError> {
        let lattice = build_lattice(&table)?;
        Ok(Group(Arc::new(GroupData { table, lattice })))
    }

    pub fn build(spec: &GroupSpec) -> Result<Self, GroupError> {
        Self::new(FiniteGroup::from_spec(spec)?)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::build(&GroupSpec::Cyclic { n }).expect("cyclic group")
    }

    pub fn dihedral(n: usize) -> Self {
        Self::build(&GroupSpec::Dihedral { n }).expect("dihedral group")
    }

    pub fn symmetric(n: usize) -> Self {
        Self::build(&GroupSpec::Symmetric { n }).expect("symmetric group")
    }

    pub fn table(&self) -> &FiniteGroup {
        &self.0.table
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.0.lattice
    }

    pub fn same(&self, other: &Group) -> bool {
        self == other
    }

    /// Parses a subgroup selector: `G`, `e`, `class:i` (the representative of the `i`-th
    /// conjugacy class) or a comma-separated generator list such as `1,3`.
    pub fn parse_level(&self, text: &str) -> Result<SubgroupId, GroupError> {
        let lat = self.lattice();
        let text = text.trim();
        match text {
            "G" => return Ok(lat.whole()),
            "e" => return Ok(lat.trivial()),
            _ => {}
        }
        if let Some(i) = text.strip_prefix("class:") {
            let i: usize = i.parse().map_err(|_| GroupError::InvalidSpec(format!("bad class index in {text:?}")))?;
            if i >= lat.class_count() {
                return Err(GroupError::InvalidSpec(format!("{} has {} subgroup classes", self.name(), lat.class_count())));
            }
            return Ok(lat.class_rep(i));
        }
        let gens = text
            .split(',')
            .map(|g| g.trim().parse::<usize>().ok().filter(|&g| g < self.order()))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| GroupError::InvalidSpec(format!("bad subgroup selector {text:?}")))?;
        let mut elems = self.closure(&gens);
        elems.sort_unstable();
        Ok(lat.id_of(&elems).expect("closure is a subgroup"))
    }

    pub fn normalizer(&self, k: SubgroupId) -> SubgroupId {
        let elems = self.lattice().normalizer(k).to_vec();
        self.lattice().id_of(&elems).expect("normalizer is a subgroup")
    }

    /// Representatives `h` of the double cosets `L h K` in `H`, ordered by smallest element.
    pub fn double_cosets(
        &self,
        h: SubgroupId,
        l: SubgroupId,
        k: SubgroupId,
    ) -> Result<Vec<usize>, GroupError> {
        let lat = self.lattice();
        if !lat.is_subgroup_of(l, h) {
            return Err(GroupError::NotContained { inner: l, outer: h });
        }
        if !lat.is_subgroup_of(k, h) {
            return Err(GroupError::NotContained { inner: k, outer: h });
        }
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for &x in lat.subgroup(h).elements() {
            if seen[x] {
                continue;
            }
            reps.push(x);
            for &a in lat.subgroup(l).elements() {
                for &b in lat.subgroup(k).elements() {
                    seen[self.mul(self.mul(a, x), b)] = true;
                }
            }
        }
        Ok(reps)
    }

    /// The canonical `H`-conjugate of `K <= H`: the conjugate `hKh^{-1}` with smallest index,
    /// together with an `h` achieving it.
    pub fn canonical_in(&self, h: SubgroupId, k: SubgroupId) -> (SubgroupId, usize) {
        let lat = self.lattice();
        let mut best = (k, 0);
        for &x in lat.subgroup(h).elements() {
            let c = lat.conj(x, k);
            if c < best.0 {
                best = (c, x);
            }
        }
        best
    }

    /// The subgroup `h` as a group in its own right, with its elements in increasing order
    /// (so the identity stays at index 0); also the embedding into `G`.
    pub fn subgroup_group(&self, h: SubgroupId) -> (Group, Vec<usize>) {
        let elems = self.lattice().subgroup(h).elements().to_vec();
        let mut local = vec![usize::MAX; self.order()];
        for (i, &g) in elems.iter().enumerate() {
            local[g] = i;
        }
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| local[self.mul(a, b)]).collect())
            .collect();
        let fg = FiniteGroup::from_table(table, self.subgroup_name(h)).expect("a subgroup is a group");
        (Group::new(fg).expect("subgroup lattice"), elems)
    }

    /// Human-readable subgroup name, e.g. `e`, `C2`, `H6`, with `#i` when ambiguous.
    pub fn subgroup_name(&self, s: SubgroupId) -> String {
        let lat = self.lattice();
        let class = lat.class_of(s);
        let base = |c: usize| self.class_base_name(lat.class_rep(c));
        let name = base(class);
        let same: Vec<usize> = (0..lat.class_count()).filter(|&c| base(c) == name).collect();
        if same.len() > 1 {
            let pos = same.iter().position(|&c| c == class).unwrap_or(0);
            format!("{name}#{}", pos + 1)
        } else {
            name
        }
    }

    fn class_base_name(&self, s: SubgroupId) -> String {
        let sub = self.lattice().subgroup(s);
        let n = sub.order();
        if n == 1 {
            return "e".into();
        }
        if n == self.order() {
            return self.name().to_string();
        }
        let cyclic = sub.elements().iter().any(|&g| self.closure(&[g]).len() == n);
        if cyclic {
            format!("C{n}")
        } else {
            format!("H{n}")
        }
    }

    /// The subgroup `H` as a group in its own right, with the embedding of its elements into `G`.
    pub fn subgroup_as_group(&self, h: SubgroupId) -> (Group, Vec<usize>) {
        let elems = self.lattice().subgroup(h).elements().to_vec();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let name = self.subgroup_name(h);
        let sub = FiniteGroup::from_table(table, name).expect("subgroup table is a group");
        (Group::new(sub).expect("subgroup is no larger than G"), elems)
    }
}

pub fn max_group_order() -> usize {
    std::env::var(MAX_GROUP_ORDER_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}

/// Builds a validated group from a spec.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_spec(spec)
}

/// Subgroups of `G` up to conjugacy.
pub fn subgroup_classes(g: &FiniteGroup) -> Result<SubgroupClassTable, GroupError> {
    Ok(build_lattice(g)?.classes)
}

/// `N_G(K)` for an arbitrary element set `K`.
pub fn normalizer(g: &FiniteGroup, k: &[usize]) -> Result<Vec<usize>, GroupError> {
    let mut sorted = k.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if !g.is_subgroup(&sorted) {
        return Err(GroupError::NotASubgroup);
    }
    let sub = Subgroup::new(sorted, g.order());
    Ok(g.elements()
        .filter(|&x| sub.elements().iter().all(|&y| sub.contains(g.conj(x, y))))
        .collect())
}

fn build_lattice(g: &FiniteGroup) -> Result<SubgroupLattice, GroupError> {
    let bound = max_group_order();
    if g.order() > bound {
        return Err(GroupError::GroupTooLarge { order: g.order(), bound });
    }
    let n = g.order();
    // Breadth-first closure: start from the cyclic subgroups, add joins until nothing new appears.
    let mut found: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut list: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let c = g.closure(&[x]);
        if found.insert(c.clone(), ()).is_none() {
            list.push(c);
        }
    }
    let cyclic_count = list.len();
    let mut frontier: Vec<usize> = (0..list.len()).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for j in 0..cyclic_count {
                let a = &list[i];
                let b = &list[j];
                if b.iter().all(|e| a.binary_search(e).is_ok()) {
                    continue;
                }
                let mut gens = a.clone();
                gens.extend_from_slice(b);
                let c = g.closure(&gens);
                if found.insert(c.clone(), ()).is_none() {
                    list.push(c);
                    next.push(list.len() - 1);
                }
            }
        }
        frontier = next;
    }
    list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let count = list.len();
    let index: HashMap<Vec<usize>, usize> =
        list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let subgroups: Vec<Subgroup> = list.into_iter().map(|s| Subgroup::new(s, n)).collect();

    let mut conj = vec![0; n * count];
    for x in 0..n {
        for (s, sub) in subgroups.iter().enumerate() {
            let mut c: Vec<usize> = sub.elements().iter().map(|&y| g.conj(x, y)).collect();
            c.sort_unstable();
            conj[x * count + s] = index[&c];
        }
    }

    let mut class_of = vec![(usize::MAX, 0); count];
    let mut representatives = Vec::new();
    for s in 0..count {
        if class_of[s].0 != usize::MAX {
            continue;
        }
        let class = representatives.len();
        representatives.push(s);
        for x in 0..n {
            let t = conj[x * count + s];
            if class_of[t].0 == usize::MAX {
                // x S x^{-1} = T, so x^{-1} T x = S.
                class_of[t] = (class, g.inv(x));
            }
        }
    }
    let classes_n = representatives.len();
    let mut inclusion = vec![vec![false; classes_n]; classes_n];
    for i in 0..classes_n {
        for j in 0..classes_n {
            let ri = representatives[i];
            let rj = representatives[j];
            inclusion[i][j] =
                (0..n).any(|x| subgroups[conj[x * count + ri]].is_subset_of(&subgroups[rj]));
        }
    }
    let normalizers = (0..count)
        .map(|s| (0..n).filter(|&x| conj[x * count + s] == s).collect())
        .collect();

    Ok(SubgroupLattice {
        subgroups,
        index,
        conj,
        classes: SubgroupClassTable {
            representatives,
            class_of,
            inclusion_up_to_conj: inclusion,
        },
        normalizers,
        subgroup_count: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: all subsets closed under multiplication (small groups only).
    fn brute_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        assert!(n <= 12);
        (0u32..(1 << n))
            .filter(|m| m & 1 == 1)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_subgroup(s))
            .collect()
    }

    fn brute_class_count(g: &FiniteGroup) -> usize {
        let subs = brute_subgroups(g);
        let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in subs {
            let conj_of = |x: usize| {
                let mut c: Vec<usize> = s.iter().map(|&y| g.conj(x, y)).collect();
                c.sort_unstable();
                c
            };
            let hit = classes.iter().any(|cl| (0..g.order()).any(|x| cl.contains(&conj_of(x))));
            if !hit {
                classes.push(vec![s.clone()]);
            }
        }
        classes.len()
    }

    #[test]
    fn level_selectors() {
        let g = Group::symmetric(3);
        assert_eq!(g.parse_level("G").unwrap(), 5);
        assert_eq!(g.parse_level("e").unwrap(), 0);
        assert_eq!(g.lattice().subgroup(g.parse_level("class:1").unwrap()).order(), 2);
        let c3 = g.parse_level("class:2").unwrap();
        let gens: Vec<String> = g.lattice().subgroup(c3).elements().iter().map(|x| x.to_string()).collect();
        assert_eq!(g.parse_level(&gens.join(",")).unwrap(), c3);
        assert!(g.parse_level("class:9").is_err());
        assert!(g.parse_level("x").is_err());
        assert!(g.parse_level("7").is_err());
    }

    #[test]
    fn trivial_and_c2_tables() {
        let g = build_group(&GroupSpec::Cyclic { n: 1 }).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(0, 0), 0);
        let g = build_group(&GroupSpec::Cyclic { n: 2 }).unwrap();
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn subgroup_class_counts_match_brute_force() {
        for (spec, expected) in [
            (GroupSpec::Cyclic { n: 1 }, 1),
            (GroupSpec::Cyclic { n: 4 }, 3),
            (GroupSpec::Symmetric { n: 3 }, 4),
            (GroupSpec::Dihedral { n: 4 }, 8),
            (GroupSpec::Cyclic { n: 6 }, 4),
        ] {
            let g = build_group(&spec).unwrap();
            assert_eq!(brute_class_count(&g), expected, "{spec:?}");
            assert_eq!(subgroup_classes(&g).unwrap().representatives.len(), expected, "{spec:?}");
        }
    }

    #[test]
    fn orbit_counting_matches_total_subgroups() {
        for spec in [
            GroupSpec::Symmetric { n: 3 },
            GroupSpec::Dihedral { n: 4 },
            GroupSpec::Dihedral { n: 6 },
        ] {
            let g = Group::build(&spec).unwrap();
            let lat = g.lattice();
            let total: usize = lat
                .classes()
                .representatives
                .iter()
                .map(|&r| g.order() / lat.normalizer(r).len())
                .sum();
            assert_eq!(total, brute_subgroups(&g).len());
            assert_eq!(total, lat.len());
        }
    }

    #[test]
    fn s4_and_s5_lattices() {
        let s4 = Group::symmetric(4);
        assert_eq!(s4.lattice().len(), 30);
        assert_eq!(s4.lattice().class_count(), 11);
        let s5 = Group::symmetric(5);
        assert_eq!(s5.lattice().len(), 156);
        assert_eq!(s5.lattice().class_count(), 19);
    }

    #[test]
    fn class_witness_conjugates_to_representative() {
        let g = Group::dihedral(4);
        let lat = g.lattice();
        for s in 0..lat.len() {
            let (c, w) = lat.classes().class_of[s];
            assert_eq!(lat.conj(w, s), lat.class_rep(c));
        }
    }

    #[test]
    fn normalizer_examples() {
        let g = Group::symmetric(3);
        let lat = g.lattice();
        assert_eq!(g.normalizer(lat.whole()), lat.whole());
        assert_eq!(g.normalizer(lat.trivial()), lat.whole());
        let c2 = (0..lat.len()).find(|&s| lat.subgroup(s).order() == 2).unwrap();
        assert_eq!(lat.subgroup(g.normalizer(c2)).order(), 2);
        assert_eq!(normalizer(&g, &[0, 1, 2]), Err(GroupError::NotASubgroup));
    }

    #[test]
    fn double_coset_examples() {
        let g = Group::cyclic(2);
        let lat = g.lattice();
        let (e, whole) = (lat.trivial(), lat.whole());
        assert_eq!(g.double_cosets(whole, whole, whole).unwrap(), vec![0]);
        assert_eq!(g.double_cosets(whole, e, e).unwrap().len(), 2);

        let s3 = Group::symmetric(3);
        let lat = s3.lattice();
        let c2 = (0..lat.len()).find(|&s| lat.subgroup(s).order() == 2).unwrap();
        let reps = s3.double_cosets(lat.whole(), c2, c2).unwrap();
        let mut sizes: Vec<usize> = reps
            .iter()
            .map(|&h| {
                let mut set: Vec<usize> = lat
                    .subgroup(c2)
                    .elements()
                    .iter()
                    .flat_map(|&a| lat.subgroup(c2).elements().iter().map(move |&b| (a, b)))
                    .map(|(a, b)| s3.mul(s3.mul(a, h), b))
                    .collect();
                set.sort_unstable();
                set.dedup();
                set.len()
            })
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4]);
        assert!(matches!(
            s3.double_cosets(c2, lat.whole(), c2),
            Err(GroupError::NotContained { .. })
        ));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], "x"),
            Err(GroupError::NoInverse(1))
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![1, 0], vec![0, 0]], "x"),
            Err(GroupError::NoIdentity)
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1]], "x"),
            Err(GroupError::MalformedTable(_))
        ));
        // Identity at index 1 is renormalised to 0.
        let g = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], "x").unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn non_associative_table_rejected() {
        // A loop of order 5 that is not a group.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(t, "loop"), Err(GroupError::NonAssociative(..))));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(GroupSpec::parse("cyclic:4").unwrap(), GroupSpec::Cyclic { n: 4 });
        assert_eq!(
            GroupSpec::parse(r#"{"kind":"dihedral","n":3}"#).unwrap(),
            GroupSpec::Dihedral { n: 3 }
        );
        assert!(GroupSpec::parse("weird:3").is_err());
    }

    #[test]
    fn group_axioms_hold_for_builders() {
        for g in [Group::cyclic(5), Group::dihedral(4), Group::symmetric(4)] {
            for a in g.elements() {
                assert_eq!(g.mul(a, g.inv(a)), 0);
                for b in g.elements() {
                    for c in g.elements() {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }
}
