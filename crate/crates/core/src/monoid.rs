//! Finite commutative monoids and G-monoids, stored as dense tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Group;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("monoid table is malformed: {0}")]
    Malformed(String),
    #[error("monoid is not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("monoid is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} is not a two-sided unit")]
    NotAUnit(usize),
    #[error("group action on the monoid is invalid: {0}")]
    BadAction(String),
    #[error("invalid monoid spec: {0}")]
    InvalidSpec(String),
}

/// A finite commutative monoid, written multiplicatively.
#[derive(Clone, PartialEq, Eq)]
pub struct Monoid {
    size: usize,
    op: Vec<usize>,
    unit: usize,
    names: Vec<String>,
}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid{:?}", self.names)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidJson {
    pub size: usize,
    pub op: Vec<Vec<usize>>,
    pub unit: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
}

impl Monoid {
    pub fn new(size: usize, op: Vec<Vec<usize>>, unit: usize) -> Result<Self, MonoidError> {
        let names = (0..size).map(|i| i.to_string()).collect();
        Self::with_names(size, op, unit, names)
    }

    pub fn with_names(
        size: usize,
        op: Vec<Vec<usize>>,
        unit: usize,
        names: Vec<String>,
    ) -> Result<Self, MonoidError> {
        if size == 0 {
            return Err(MonoidError::Malformed("empty monoid".into()));
        }
        if op.len() != size || op.iter().any(|r| r.len() != size) {
            return Err(MonoidError::Malformed(format!("table must be {size}x{size}")));
        }
        if op.iter().flatten().any(|&v| v >= size) || unit >= size {
            return Err(MonoidError::Malformed("entry out of range".into()));
        }
        if names.len() != size {
            return Err(MonoidError::Malformed("wrong number of element names".into()));
        }
        for a in 0..size {
            if op[unit][a] != a || op[a][unit] != a {
                return Err(MonoidError::NotAUnit(unit));
            }
            for b in 0..size {
                if op[a][b] != op[b][a] {
                    return Err(MonoidError::NotCommutative(a, b));
                }
                for c in 0..size {
                    if op[op[a][b]][c] != op[a][op[b][c]] {
                        return Err(MonoidError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Monoid { size, op: op.into_iter().flatten().collect(), unit, names })
    }

    pub fn trivial() -> Self {
        Self::with_names(1, vec![vec![0]], 0, vec!["1".into()]).unwrap()
    }

    /// Cyclic group `⟨w⟩` of order `n`; element `i` is `w^i`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let op = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            })
            .collect();
        Self::with_names(n, op, 0, names).unwrap()
    }

    /// `{1, 0}` under multiplication.
    pub fn boolean() -> Self {
        Self::with_names(2, vec![vec![0, 1], vec![1, 1]], 0, vec!["1".into(), "0".into()]).unwrap()
    }

    /// `{1, a, 0}` with `a^2 = 0`.
    pub fn nil() -> Self {
        let op = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        Self::with_names(3, op, 0, vec!["1".into(), "a".into(), "0".into()]).unwrap()
    }

    /// Truncated natural numbers `{0, 1, ..., n-1}` under addition capped at `n - 1`, written `x^i`.
    pub fn truncated(n: usize) -> Self {
        assert!(n >= 1);
        let op = (0..n).map(|a| (0..n).map(|b| (a + b).min(n - 1)).collect()).collect();
        let names = (0..n).map(|i| if i == 0 { "1".into() } else { format!("x^{i}") }).collect();
        Self::with_names(n, op, 0, names).unwrap()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.op[a * self.size + b]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.unit, |acc, _| self.mul(acc, a))
    }

    pub fn product<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.unit, |acc, x| self.mul(acc, x))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Whether `f: self -> cod` (a value table) is a monoid homomorphism.
    pub fn is_hom(&self, cod: &Monoid, f: &[usize]) -> bool {
        f.len() == self.size
            && f.iter().all(|&v| v < cod.size)
            && f[self.unit] == cod.unit
            && (0..self.size)
                .all(|a| (0..self.size).all(|b| f[self.mul(a, b)] == cod.mul(f[a], f[b])))
    }

    /// All monoid homomorphisms `self -> cod`, as value tables.
    pub fn homs(&self, cod: &Monoid) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut f = vec![0; self.size];
        fn rec(i: usize, dom: &Monoid, cod: &Monoid, f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == dom.size {
                if dom.is_hom(cod, f) {
                    out.push(f.clone());
                }
                return;
            }
            for v in 0..cod.size {
                f[i] = v;
                rec(i + 1, dom, cod, f, out);
            }
        }
        rec(0, self, cod, &mut f, &mut out);
        out
    }

    pub fn to_json(&self) -> MonoidJson {
        MonoidJson {
            size: self.size,
            op: (0..self.size).map(|a| (0..self.size).map(|b| self.mul(a, b)).collect()).collect(),
            unit: self.unit,
            names: Some(self.names.clone()),
            action: None,
        }
    }

    pub fn from_json(j: &MonoidJson) -> Result<Self, MonoidError> {
        match &j.names {
            Some(n) => Self::with_names(j.size, j.op.clone(), j.unit, n.clone()),
            None => Self::new(j.size, j.op.clone(), j.unit),
        }
    }
}

/// A commutative monoid with a `G`-action by monoid automorphisms.
#[derive(Clone, Debug)]
pub struct GMonoid {
    group: Group,
    monoid: Arc<Monoid>,
    action: Vec<usize>,
    name: String,
}

impl GMonoid {
    /// `action[g][q]`, validated.
    pub fn new(group: &Group, monoid: Monoid, action: Vec<Vec<usize>>, name: impl Into<String>) -> Result<Self, MonoidError> {
        let n = monoid.size();
        if action.len() != group.order() || action.iter().any(|r| r.len() != n) {
            return Err(MonoidError::BadAction(format!("table must be {}x{n}", group.order())));
        }
        if action.iter().flatten().any(|&v| v >= n) {
            return Err(MonoidError::BadAction("entry out of range".into()));
        }
        if (0..n).any(|q| action[0][q] != q) {
            return Err(MonoidError::BadAction("identity acts nontrivially".into()));
        }
        for g in group.elements() {
            if !monoid.is_hom(&monoid, &action[g]) {
                return Err(MonoidError::BadAction(format!("element {g} is not a monoid endomorphism")));
            }
            for h in group.elements() {
                let gh = group.mul(g, h);
                if (0..n).any(|q| action[g][action[h][q]] != action[gh][q]) {
                    return Err(MonoidError::BadAction(format!("not an action at ({g}, {h})")));
                }
            }
        }
        Ok(GMonoid {
            group: group.clone(),
            monoid: Arc::new(monoid),
            action: action.into_iter().flatten().collect(),
            name: name.into(),
        })
    }

    pub fn trivial_action(group: &Group, monoid: Monoid, name: impl Into<String>) -> Self {
        let n = monoid.size();
        let action = vec![(0..n).collect(); group.order()];
        Self::new(group, monoid, action, name).expect("trivial action is valid")
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_trivial_action(&self) -> bool {
        let n = self.monoid.size();
        self.group.elements().all(|g| (0..n).all(|q| self.act(g, q) == q))
    }

    #[inline]
    pub fn act(&self, g: usize, q: usize) -> usize {
        self.action[g * self.monoid.size() + q]
    }

    /// Elements fixed by every element of `elems`, ascending.
    pub fn fixed_points(&self, elems: &[usize]) -> Vec<usize> {
        (0..self.monoid.size()).filter(|&q| elems.iter().all(|&g| self.act(g, q) == q)).collect()
    }

    pub fn to_json(&self) -> MonoidJson {
        let mut j = self.monoid.to_json();
        let n = self.monoid.size();
        j.action = Some(self.group.elements().map(|g| (0..n).map(|q| self.act(g, q)).collect()).collect());
        j
    }
}

/// Parses a monoid spec: `trivial`, `cyclic:n`, `bool`, `nil`, `trunc:n`, optionally followed by
/// `/sign` (act by inversion through the sign of the first index-2 subgroup), or a JSON table.
pub fn parse_gmonoid(group: &Group, text: &str) -> Result<GMonoid, MonoidError> {
    let text = text.trim();
    if text.starts_with('{') {
        let j: MonoidJson =
            serde_json::from_str(text).map_err(|e| MonoidError::InvalidSpec(e.to_string()))?;
        let m = Monoid::from_json(&j)?;
        return match j.action {
            Some(a) => GMonoid::new(group, m, a, "explicit"),
            None => Ok(GMonoid::trivial_action(group, m, "explicit")),
        };
    }
    let (base, sign) = match text.strip_suffix("/sign") {
        Some(b) => (b, true),
        None => (text, false),
    };
    let monoid = parse_monoid(base)?;
    if !sign {
        return Ok(GMonoid::trivial_action(group, monoid, text));
    }
    let lat = group.lattice();
    let index2 = (0..lat.len()).find(|&s| {
        lat.index_in(s, lat.whole()) == 2 && group.normalizer(s) == lat.whole()
    });
    let Some(n2) = index2 else {
        return Err(MonoidError::InvalidSpec(format!("{} has no index-2 subgroup", group.name())));
    };
    let inv: Vec<usize> = (0..monoid.size())
        .map(|q| (0..monoid.size()).find(|&r| monoid.mul(q, r) == monoid.unit()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| MonoidError::InvalidSpec("sign action needs a group monoid".into()))?;
    let action = group
        .elements()
        .map(|g| {
            if lat.subgroup(n2).contains(g) {
                (0..monoid.size()).collect()
            } else {
                inv.clone()
            }
        })
        .collect();
    GMonoid::new(group, monoid, action, text)
}

/// Parses a plain monoid spec (no action).
pub fn parse_monoid(text: &str) -> Result<Monoid, MonoidError> {
    let text = text.trim();
    if text.starts_with('{') {
        let j: MonoidJson =
            serde_json::from_str(text).map_err(|e| MonoidError::InvalidSpec(e.to_string()))?;
        return Monoid::from_json(&j);
    }
    let arg = |s: &str| -> Result<usize, MonoidError> {
        s.parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| MonoidError::InvalidSpec(format!("bad size in {text:?}")))
    };
    match text.split_once(':') {
        None => match text {
            "trivial" => Ok(Monoid::trivial()),
            "bool" => Ok(Monoid::boolean()),
            "nil" => Ok(Monoid::nil()),
            _ => Err(MonoidError::InvalidSpec(format!("unknown monoid {text:?}"))),
        },
        Some(("cyclic", n)) => Ok(Monoid::cyclic(arg(n)?)),
        Some(("trunc", n)) => Ok(Monoid::truncated(arg(n)?)),
        _ => Err(MonoidError::InvalidSpec(format!("unknown monoid {text:?}"))),
    }
}
