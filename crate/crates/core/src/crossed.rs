//! Crossed Burnside rings: G-sets over `X` carrying an equivariant map to a G-monoid `Q`.
//!
//! An element over `X` is stored through the object bijection `(A, p, m) <-> (A -> X × Q)`,
//! which is additive but not multiplicative; products use the fibered product over `X`
//! with labels multiplied in `Q`.

use std::sync::Arc;

use serde::Serialize;

use crate::axioms::{nonempty, random_virtual, TambaraStructure, SAMPLE_POINTS};
use crate::burnside::{self, classify, realize_key, BurnsideElt, OrbitKey};
use crate::group::Group;
use crate::gset::{dependent_product, dependent_product_size, pullback, GMap, GSet};
use crate::mackey::fixed_point_functor;
use crate::monoid::GMonoid;
use crate::random::{instance_rng, random_map};
use crate::ring::{BasisEntry, RingPresentation};
use crate::tambarize::{BasicClass, RingElt, TambaraError, Tambarization, NORM_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaElt {
    base: GSet,
    inner: BurnsideElt,
}

impl OmegaElt {
    pub fn base(&self) -> &GSet {
        &self.base
    }

    /// The same element read as a G-set over `X × Q`.
    pub fn over_product(&self) -> &BurnsideElt {
        &self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.terms().is_empty()
    }
}

/// `Ω_Q` for a finite G-monoid `Q`.
#[derive(Clone)]
pub struct CrossedBurnside {
    q: Arc<GMonoid>,
    qset: GSet,
}

/// `X × Q` with its two projections.
pub struct LabeledBase {
    pub xq: GSet,
    pub px: GMap,
    pub pq: GMap,
}

impl CrossedBurnside {
    pub fn new(q: &GMonoid) -> Self {
        let group = q.group();
        let n = q.monoid().size();
        let act = group.elements().flat_map(|g| (0..n).map(move |a| q.act(g, a))).collect();
        let qset = GSet::from_action(group, n, act).expect("a G-monoid is a G-set");
        CrossedBurnside { q: Arc::new(q.clone()), qset }
    }

    pub fn gmonoid(&self) -> &GMonoid {
        &self.q
    }

    pub fn group(&self) -> &Group {
        self.q.group()
    }

    pub fn labeled_base(&self, x: &GSet) -> LabeledBase {
        let (xq, px, pq) = x.product(&self.qset).expect("same group");
        LabeledBase { xq, px, pq }
    }

    fn wrap(&self, base: &GSet, inner: BurnsideElt) -> OmegaElt {
        OmegaElt { base: base.clone(), inner }
    }

    fn point_of(&self, x: usize, q: usize) -> usize {
        x * self.qset.size() + q
    }

    /// The crossed G-set `(A, p, m)` as an element.
    pub fn class_of(&self, p: &GMap, m: &GMap) -> Result<OmegaElt, TambaraError> {
        if p.dom() != m.dom() || m.cod() != &self.qset {
            return Err(TambaraError::BaseMismatch);
        }
        let lb = self.labeled_base(p.cod());
        let map = (0..p.dom().size()).map(|a| self.point_of(p.apply(a), m.apply(a))).collect();
        let pm = GMap::new(p.dom().clone(), lb.xq, map)?;
        Ok(self.wrap(p.cod(), classify(&pm)))
    }

    pub fn zero(&self, x: &GSet) -> OmegaElt {
        self.wrap(x, BurnsideElt::zero(&self.labeled_base(x).xq))
    }

    /// `(X, id, x ↦ 1)`.
    pub fn one(&self, x: &GSet) -> OmegaElt {
        let lb = self.labeled_base(x);
        let unit = self.q.monoid().unit();
        let map = (0..x.size()).map(|a| self.point_of(a, unit)).collect();
        self.wrap(x, classify(&GMap::new(x.clone(), lb.xq, map).expect("unit is G-fixed")))
    }

    pub fn basis(&self, x: &GSet) -> Vec<OrbitKey> {
        burnside::basis(&self.labeled_base(x).xq)
    }

    pub fn basis_element(&self, x: &GSet, k: OrbitKey) -> OmegaElt {
        self.wrap(x, BurnsideElt::from_key(&self.labeled_base(x).xq, k))
    }

    pub fn entry(&self, x: &GSet, k: &OrbitKey) -> BasisEntry {
        let lb = self.labeled_base(x);
        let z0 = lb.xq.orbits().orbits[k.orbit].rep;
        let label = if self.q.monoid().size() == 1 {
            String::new()
        } else {
            self.q.monoid().name(lb.pq.apply(z0)).to_string()
        };
        BasisEntry { stab: self.group().subgroup_name(k.stab), label }
    }

    pub fn add(&self, a: &OmegaElt, b: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        if a.base != b.base {
            return Err(TambaraError::BaseMismatch);
        }
        Ok(self.wrap(&a.base, a.inner.add(&b.inner)?))
    }

    pub fn neg(&self, a: &OmegaElt) -> OmegaElt {
        self.wrap(&a.base, a.inner.neg())
    }

    /// Fibered product over `X`, labels multiplied pointwise.
    pub fn mul(&self, a: &OmegaElt, b: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        if a.base != b.base {
            return Err(TambaraError::BaseMismatch);
        }
        let lb = self.labeled_base(&a.base);
        let qm = self.q.monoid();
        let mut out = BurnsideElt::zero(&lb.xq);
        for (ka, &na) in a.inner.terms() {
            let ra = realize_key(&lb.xq, ka);
            let pa = ra.then(&lb.px)?;
            for (kb, &nb) in b.inner.terms() {
                let rb = realize_key(&lb.xq, kb);
                let pb = rb.then(&lb.px)?;
                let sq = pullback(&pa, &pb)?;
                let map = (0..sq.obj.size())
                    .map(|c| {
                        let (a1, a2) = (sq.pr1.apply(c), sq.pr2.apply(c));
                        let label = qm.mul(lb.pq.apply(ra.apply(a1)), lb.pq.apply(rb.apply(a2)));
                        self.point_of(pa.apply(a1), label)
                    })
                    .collect();
                let prod = classify(&GMap::new(sq.obj.clone(), lb.xq.clone(), map)?);
                out = out.add(&prod.scale(na * nb))?;
            }
        }
        Ok(self.wrap(&a.base, out))
    }

    /// `f^*`: pull the crossed set back along `f`, keeping labels.
    pub fn restrict(&self, f: &GMap, b: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        if f.cod() != &b.base {
            return Err(TambaraError::BaseMismatch);
        }
        let fq = self.times_q(f);
        Ok(self.wrap(f.dom(), burnside::restrict(&fq, &b.inner)?))
    }

    /// `f_+`: compose the structure map with `f`.
    pub fn transfer(&self, f: &GMap, a: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        if f.dom() != &a.base {
            return Err(TambaraError::BaseMismatch);
        }
        let fq = self.times_q(f);
        Ok(self.wrap(f.cod(), burnside::transfer(&fq, &a.inner)?))
    }

    /// `f_• = (μ_f)_+ ∘ f'_• ∘ e^*`, with `f'` the projection `X ×_Y Π_f(X × Q) -> Π_f(X × Q)`.
    pub fn norm(&self, f: &GMap, a: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        if f.dom() != &a.base {
            return Err(TambaraError::BaseMismatch);
        }
        let lx = self.labeled_base(f.dom());
        let ly = self.labeled_base(f.cod());
        let size = dependent_product_size(f, &lx.px);
        if size > NORM_LIMIT {
            return Err(TambaraError::TooLarge(size));
        }
        let d = dependent_product(f, &lx.px)?;
        let e_star = burnside::restrict(&d.lambda, &a.inner)?;
        let normed = burnside::norm(&d.rho, &e_star)?;
        let qm = self.q.monoid();
        let mu_map = (0..d.pi_obj().size())
            .map(|s| {
                let (y, values) = d.section(s);
                self.point_of(y, qm.product(values.iter().map(|&v| lx.pq.apply(v))))
            })
            .collect();
        let mu = GMap::new(d.pi_obj().clone(), ly.xq, mu_map)?;
        Ok(self.wrap(f.cod(), burnside::transfer(&mu, &normed)?))
    }

    /// `f × id_Q`.
    pub fn times_q(&self, f: &GMap) -> GMap {
        let (lx, ly) = (self.labeled_base(f.dom()), self.labeled_base(f.cod()));
        let n = self.qset.size();
        let map = (0..lx.xq.size()).map(|z| self.point_of(f.apply(z / n), z % n)).collect();
        GMap::new(lx.xq, ly.xq, map).expect("f × Q is equivariant")
    }

    pub fn coords(&self, basis: &[OrbitKey], a: &OmegaElt) -> Vec<i64> {
        basis.iter().map(|k| a.inner.coeff(k)).collect()
    }

    pub fn presentation_over(&self, x: &GSet) -> Result<(Vec<OrbitKey>, RingPresentation), TambaraError> {
        let keys = self.basis(x);
        let elts: Vec<OmegaElt> = keys.iter().map(|&k| self.basis_element(x, k)).collect();
        let mut mul = Vec::with_capacity(keys.len());
        for a in &elts {
            let mut row = Vec::with_capacity(keys.len());
            for b in &elts {
                row.push(self.coords(&keys, &self.mul(a, b)?));
            }
            mul.push(row);
        }
        let one = self.coords(&keys, &self.one(x));
        let basis = keys.iter().map(|k| self.entry(x, k)).collect();
        Ok((keys, RingPresentation { basis, mul, one }))
    }

    /// The image of a fixed-point-functor class: `G/K -> X`, `eK ↦ x_0`, labeled by `gK ↦ g·q`.
    pub fn from_fixed_point_class(&self, t: &Tambarization, x: &GSet, c: &BasicClass) -> Result<OmegaElt, TambaraError> {
        let q = t
            .mackey()
            .carrier_value(c.sub, c.label)
            .ok_or_else(|| TambaraError::Malformed(format!("{} is not a fixed point functor", t.mackey().name())))?;
        let lb = self.labeled_base(x);
        let x0 = x.orbits().orbits[c.orbit].rep;
        let z = self.point_of(x0, q);
        if !lb.xq.fixes(c.sub, z) {
            return Err(TambaraError::Malformed("label is not fixed by the stabilizer".into()));
        }
        Ok(self.wrap(x, classify(&GMap::from_coset(self.group(), c.sub, &lb.xq, z))))
    }

    /// The comparison map `T_{P_Q}(X) -> Ω_Q(X)`, extended linearly.
    pub fn cbr_iso(&self, t: &Tambarization, x: &RingElt) -> Result<OmegaElt, TambaraError> {
        let mut out = self.zero(x.base());
        for (c, &n) in x.terms() {
            let img = self.from_fixed_point_class(t, x.base(), c)?;
            out = self.add(&out, &self.wrap(x.base(), img.inner.scale(n)))?;
        }
        Ok(out)
    }
}

/// Outcome of comparing `T_{P_Q}` with `Ω_Q` through [`CrossedBurnside::cbr_iso`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct CbrReport {
    pub group: String,
    pub monoid: String,
    pub levels: Vec<CbrLevel>,
    pub sampled_maps: usize,
    pub checks: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CbrLevel {
    pub subgroup: String,
    pub rank: usize,
}

impl CbrReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Basis bijection and structure constants over every `G/H`, then commutation of the
/// comparison with `f^*`, `f_+`, `f_•` and products on sampled maps and virtual elements.
pub fn cbr_comparison(q: &GMonoid, seed: u64, samples: usize) -> CbrReport {
    let group = q.group();
    let om = CrossedBurnside::new(q);
    let t = Tambarization::new(fixed_point_functor(q));
    let mut rep = CbrReport { group: group.name().to_string(), monoid: q.name().to_string(), ..Default::default() };
    for h in 0..group.lattice().len() {
        let x = GSet::coset(group, h);
        let (tb, tp) = t.presentation_over(&x);
        let (ok, op) = match om.presentation_over(&x) {
            Ok(p) => p,
            Err(e) => {
                rep.failures.push(format!("{}: {e}", group.subgroup_name(h)));
                continue;
            }
        };
        rep.levels.push(CbrLevel { subgroup: group.subgroup_name(h), rank: tp.rank() });
        let mut perm = Vec::with_capacity(tb.len());
        for c in &tb {
            rep.checks += 1;
            match om.from_fixed_point_class(&t, &x, c).map(|img| om.coords(&ok, &img)) {
                Ok(v) if v.iter().filter(|&&n| n != 0).count() == 1 && v.contains(&1) => {
                    perm.push(v.iter().position(|&n| n == 1).expect("one entry"))
                }
                other => rep.failures.push(format!("{}: {c:?} is not sent to a basis element: {other:?}", group.subgroup_name(h))),
            }
        }
        if perm.len() == tb.len() {
            rep.checks += 1;
            if let Err(e) = tp.check_basis_iso(&op, &perm) {
                rep.failures.push(format!("{}: {e}", group.subgroup_name(h)));
            }
        }
    }
    for i in 0..samples as u64 {
        let mut rng = instance_rng(seed, i);
        let f = nonempty(&mut rng, |r| random_map(group, SAMPLE_POINTS, 2, r));
        let (x, y) = (f.dom(), f.cod());
        let a = random_virtual(&t, x, 2, &mut rng);
        let b = random_virtual(&t, x, 2, &mut rng);
        let u = random_virtual(&t, y, 2, &mut rng);
        rep.sampled_maps += 1;
        let iso = |v: &RingElt| om.cbr_iso(&t, v);
        let mut check = |name: &str, l: Result<OmegaElt, TambaraError>, r: Result<OmegaElt, TambaraError>| {
            rep.checks += 1;
            match (l, r) {
                (Ok(l), Ok(r)) if l == r => {}
                (Err(TambaraError::TooLarge(_)), _) | (_, Err(TambaraError::TooLarge(_))) => rep.skipped += 1,
                (l, r) => rep.failures.push(format!("sample {i}: {name}: {l:?} vs {r:?}")),
            }
        };
        check("restriction", t.ring_restrict(&f, &u).and_then(|r| iso(&r)), iso(&u).and_then(|v| om.restrict(&f, &v)));
        check("transfer", t.ring_transfer(&f, &a).and_then(|r| iso(&r)), iso(&a).and_then(|v| om.transfer(&f, &v)));
        check("norm", t.norm_on_ring(&f, &a).and_then(|r| iso(&r)), iso(&a).and_then(|v| om.norm(&f, &v)));
        check(
            "product",
            t.ring_mul(&a, &b).and_then(|r| iso(&r)),
            iso(&a).and_then(|v| om.mul(&v, &iso(&b)?)),
        );
        check("unit", iso(&t.ring_one(x)), Ok(om.one(x)));
    }
    rep
}

impl TambaraStructure for CrossedBurnside {
    type Elt = OmegaElt;

    fn group(&self) -> &Group {
        CrossedBurnside::group(self)
    }
    fn zero(&self, x: &GSet) -> OmegaElt {
        CrossedBurnside::zero(self, x)
    }
    fn one(&self, x: &GSet) -> OmegaElt {
        CrossedBurnside::one(self, x)
    }
    fn add(&self, a: &OmegaElt, b: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        CrossedBurnside::add(self, a, b)
    }
    fn neg(&self, a: &OmegaElt) -> OmegaElt {
        CrossedBurnside::neg(self, a)
    }
    fn mul(&self, a: &OmegaElt, b: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        CrossedBurnside::mul(self, a, b)
    }
    fn restrict(&self, f: &GMap, a: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        CrossedBurnside::restrict(self, f, a)
    }
    fn transfer(&self, f: &GMap, a: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        CrossedBurnside::transfer(self, f, a)
    }
    fn norm(&self, f: &GMap, a: &OmegaElt) -> Result<OmegaElt, TambaraError> {
        CrossedBurnside::norm(self, f, a)
    }
    fn basis_elements(&self, x: &GSet) -> Vec<OmegaElt> {
        self.basis(x).into_iter().map(|k| self.basis_element(x, k)).collect()
    }
}
