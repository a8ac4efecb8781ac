//! Sampled verification of the Tambara functor identities for any structure exposing
//! restriction, transfer and norm on finite G-sets.

use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::group::Group;
use crate::gset::{dependent_product, pullback, GMap, GSet};
use crate::random::{instance_rng, random_map, random_over, random_permutation};
use crate::tambarize::{RingElt, TambaraError, Tambarization};

/// A functor on finite G-sets with a commutative ring at every object and the three structure maps.
pub trait TambaraStructure: Sync {
    type Elt: Clone + PartialEq + Debug + Send;

    fn group(&self) -> &Group;
    fn zero(&self, x: &GSet) -> Self::Elt;
    fn one(&self, x: &GSet) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Result<Self::Elt, TambaraError>;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Result<Self::Elt, TambaraError>;
    fn restrict(&self, f: &GMap, a: &Self::Elt) -> Result<Self::Elt, TambaraError>;
    fn transfer(&self, f: &GMap, a: &Self::Elt) -> Result<Self::Elt, TambaraError>;
    fn norm(&self, f: &GMap, a: &Self::Elt) -> Result<Self::Elt, TambaraError>;
    /// The additive basis of transitive classes over `x`, each as an element.
    fn basis_elements(&self, x: &GSet) -> Vec<Self::Elt>;
}

impl TambaraStructure for Tambarization {
    type Elt = RingElt;

    fn group(&self) -> &Group {
        Tambarization::group(self)
    }
    fn zero(&self, x: &GSet) -> RingElt {
        RingElt::zero(x)
    }
    fn one(&self, x: &GSet) -> RingElt {
        self.ring_one(x)
    }
    fn add(&self, a: &RingElt, b: &RingElt) -> Result<RingElt, TambaraError> {
        a.add(b)
    }
    fn neg(&self, a: &RingElt) -> RingElt {
        a.neg()
    }
    fn mul(&self, a: &RingElt, b: &RingElt) -> Result<RingElt, TambaraError> {
        self.ring_mul(a, b)
    }
    fn restrict(&self, f: &GMap, a: &RingElt) -> Result<RingElt, TambaraError> {
        self.ring_restrict(f, a)
    }
    fn transfer(&self, f: &GMap, a: &RingElt) -> Result<RingElt, TambaraError> {
        self.ring_transfer(f, a)
    }
    fn norm(&self, f: &GMap, a: &RingElt) -> Result<RingElt, TambaraError> {
        self.norm_on_ring(f, a)
    }
    fn basis_elements(&self, x: &GSet) -> Vec<RingElt> {
        self.basis(x).into_iter().map(|c| RingElt::from_terms(x, [(c, 1)])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TambaraViolation {
    pub condition: String,
    pub instance: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TambaraReport {
    pub instances: usize,
    pub checks: usize,
    pub skipped: usize,
    pub violations: Vec<TambaraViolation>,
}

impl TambaraReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: TambaraReport) -> TambaraReport {
        self.instances += other.instances;
        self.checks += other.checks;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
        self
    }
}

/// Largest object sampled per instance.
pub const SAMPLE_POINTS: usize = 6;

/// A random effective element over `x`: a sum of up to `max_terms` basis classes.
pub fn random_effective<T: TambaraStructure, R: Rng>(t: &T, x: &GSet, max_terms: usize, rng: &mut R) -> T::Elt {
    let basis = t.basis_elements(x);
    let mut out = t.zero(x);
    if basis.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(0..=max_terms) {
        out = t.add(&out, basis.choose(rng).unwrap()).expect("same base");
    }
    out
}

/// A random virtual element: difference of two random effective elements.
pub fn random_virtual<T: TambaraStructure, R: Rng>(t: &T, x: &GSet, max_terms: usize, rng: &mut R) -> T::Elt {
    let a = random_effective(t, x, max_terms, rng);
    let b = random_effective(t, x, max_terms, rng);
    t.add(&a, &t.neg(&b)).expect("same base")
}

struct Recorder {
    instance: u64,
    report: TambaraReport,
}

impl Recorder {
    fn eq<E: PartialEq + Debug>(&mut self, condition: &str, lhs: Result<E, TambaraError>, rhs: Result<E, TambaraError>) {
        self.report.checks += 1;
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) => self.fail(condition, format!("{l:?} != {r:?}")),
            (Err(TambaraError::TooLarge(_)), _) | (_, Err(TambaraError::TooLarge(_))) => {
                self.report.checks -= 1;
                self.report.skipped += 1;
            }
            (Err(e), _) | (_, Err(e)) => self.fail(condition, format!("error: {e}")),
        }
    }

    fn fail(&mut self, condition: &str, detail: String) {
        self.report.violations.push(TambaraViolation {
            condition: condition.to_string(),
            instance: self.instance,
            detail,
        });
    }
}

/// Samples `samples` diagrams and checks every structure-map identity on each.
pub fn check_tambara_axioms<T: TambaraStructure>(t: &T, seed: u64, samples: usize) -> TambaraReport {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| check_instance(t, seed, i))
        .reduce(TambaraReport::default, TambaraReport::merge)
}

/// Redraws a map until its domain is nonempty; a few tries, then keeps the last draw.
pub(crate) fn nonempty<R: Rng>(rng: &mut R, mut draw: impl FnMut(&mut R) -> GMap) -> GMap {
    let mut f = draw(rng);
    for _ in 0..8 {
        if !f.dom().is_empty() {
            break;
        }
        f = draw(rng);
    }
    f
}

/// Largest `Π` on which the exponential identity is also checked for a virtual input.
const VIRTUAL_PI_LIMIT: usize = 128;

/// `f_•(a + b)` through the exponential diagram of the fold `X ⊔ X -> X`, computed from norms
/// of `a` and `b` along the pieces of each fiber.
fn norm_of_sum<T: TambaraStructure>(t: &T, f: &GMap, a: &T::Elt, b: &T::Elt) -> Result<T::Elt, TambaraError> {
    let x = f.dom();
    let (two, i1, i2) = x.coproduct(x)?;
    let fold = GMap::new(two.clone(), x.clone(), (0..two.size()).map(|z| z % x.size()).collect())?;
    let ab = t.add(&t.transfer(&i1, a)?, &t.transfer(&i2, b)?)?;
    let d = dependent_product(f, &fold)?;
    let le = t.restrict(&d.lambda, &ab)?;
    let n = t.norm(&d.rho, &le)?;
    t.transfer(&d.pi, &n)
}

fn check_instance<T: TambaraStructure>(t: &T, seed: u64, instance: u64) -> TambaraReport {
    let mut rng = instance_rng(seed, instance);
    let group = t.group().clone();
    let mut rec = Recorder { instance, report: TambaraReport { instances: 1, ..Default::default() } };

    // f: X -> Y, a second base Y' -> Y, and elements over X and Y.
    let f = nonempty(&mut rng, |r| random_map(&group, SAMPLE_POINTS, 2, r));
    let (x, y) = (f.dom().clone(), f.cod().clone());
    let zeta = nonempty(&mut rng, |r| random_over(&y, SAMPLE_POINTS, 2, r));
    let a = random_effective(t, &x, 2, &mut rng);
    let b = random_effective(t, &x, 2, &mut rng);
    let c = random_effective(t, &x, 1, &mut rng);
    let u = random_effective(t, &y, 2, &mut rng);
    let v = random_effective(t, &y, 2, &mut rng);

    // Semiring identities at X.
    let ab = t.mul(&a, &b);
    rec.eq("commutativity", ab.clone(), t.mul(&b, &a));
    rec.eq(
        "associativity",
        ab.clone().and_then(|ab| t.mul(&ab, &c)),
        t.mul(&b, &c).and_then(|bc| t.mul(&a, &bc)),
    );
    rec.eq(
        "distributivity",
        t.add(&b, &c).and_then(|s| t.mul(&a, &s)),
        ab.clone().and_then(|ab| t.add(&ab, &t.mul(&a, &c)?)),
    );
    rec.eq("unit", t.mul(&t.one(&x), &a), Ok(a.clone()));
    rec.eq("zero", t.mul(&t.zero(&x), &a), Ok(t.zero(&x)));

    // Transfer is additive.
    rec.eq(
        "transfer additive",
        t.add(&a, &b).and_then(|s| t.transfer(&f, &s)),
        t.transfer(&f, &a).and_then(|ta| t.add(&ta, &t.transfer(&f, &b)?)),
    );
    rec.eq("transfer of zero", t.transfer(&f, &t.zero(&x)), Ok(t.zero(&y)));

    // Norm is multiplicative.
    rec.eq(
        "norm multiplicative",
        ab.clone().and_then(|ab| t.norm(&f, &ab)),
        t.norm(&f, &a).and_then(|na| t.mul(&na, &t.norm(&f, &b)?)),
    );
    rec.eq("norm of one", t.norm(&f, &t.one(&x)), Ok(t.one(&y)));

    // The same on virtual elements of the ring completion.
    let av = random_virtual(t, &x, 2, &mut rng);
    let bv = random_virtual(t, &x, 1, &mut rng);
    rec.eq(
        "norm multiplicative (virtual)",
        t.mul(&av, &bv).and_then(|p| t.norm(&f, &p)),
        t.norm(&f, &av).and_then(|na| t.mul(&na, &t.norm(&f, &bv)?)),
    );
    rec.eq(
        "norm of a sum (virtual)",
        t.add(&av, &bv).and_then(|s| t.norm(&f, &s)),
        norm_of_sum(t, &f, &av, &bv),
    );

    // Restriction along zeta: Y' -> Y is a semiring map.
    let y2 = zeta.dom().clone();
    rec.eq(
        "restriction additive",
        t.add(&u, &v).and_then(|s| t.restrict(&zeta, &s)),
        t.restrict(&zeta, &u).and_then(|ru| t.add(&ru, &t.restrict(&zeta, &v)?)),
    );
    rec.eq(
        "restriction multiplicative",
        t.mul(&u, &v).and_then(|p| t.restrict(&zeta, &p)),
        t.restrict(&zeta, &u).and_then(|ru| t.mul(&ru, &t.restrict(&zeta, &v)?)),
    );
    rec.eq("restriction of one", t.restrict(&zeta, &t.one(&y)), Ok(t.one(&y2)));
    rec.eq("restriction of zero", t.restrict(&zeta, &t.zero(&y)), Ok(t.zero(&y2)));

    // Additivity over X ⊔ Y'.
    let (sum, i1, i2) = x.coproduct(&y2).expect("same group");
    let w = random_effective(t, &y2, 2, &mut rng);
    let glued = t
        .transfer(&i1, &a)
        .and_then(|l| t.add(&l, &t.transfer(&i2, &w)?));
    rec.eq("additivity (first summand)", glued.clone().and_then(|g| t.restrict(&i1, &g)), Ok(a.clone()));
    rec.eq("additivity (second summand)", glued.and_then(|g| t.restrict(&i2, &g)), Ok(w.clone()));
    let s = random_effective(t, &sum, 3, &mut rng);
    rec.eq(
        "additivity (decomposition)",
        Ok(s.clone()),
        t.restrict(&i1, &s)
            .and_then(|s1| t.transfer(&i1, &s1))
            .and_then(|l| t.add(&l, &t.transfer(&i2, &t.restrict(&i2, &s)?)?)),
    );

    // Base change along the pullback X' = X ×_Y Y'.
    match pullback(&f, &zeta) {
        Ok(pb) => {
            let (zeta_p, f_p) = (&pb.pr1, &pb.pr2);
            rec.eq(
                "transfer base change",
                t.transfer(&f, &a).and_then(|ta| t.restrict(&zeta, &ta)),
                t.restrict(zeta_p, &a).and_then(|ra| t.transfer(f_p, &ra)),
            );
            rec.eq(
                "norm base change",
                t.norm(&f, &a).and_then(|na| t.restrict(&zeta, &na)),
                t.restrict(zeta_p, &a).and_then(|ra| t.norm(f_p, &ra)),
            );
            rec.eq(
                "norm base change (virtual)",
                t.norm(&f, &av).and_then(|na| t.restrict(&zeta, &na)),
                t.restrict(zeta_p, &av).and_then(|ra| t.norm(f_p, &ra)),
            );
        }
        Err(e) => rec.fail("pullback", e.to_string()),
    }

    // Projection formula.
    rec.eq(
        "projection formula",
        t.restrict(&f, &u).and_then(|ru| t.transfer(&f, &t.mul(&a, &ru)?)),
        t.transfer(&f, &a).and_then(|ta| t.mul(&ta, &u)),
    );

    // Norm along a composite.
    let to_pt = GMap::to_point(&y);
    rec.eq(
        "norm functorial",
        f.then(&to_pt).map_err(TambaraError::from).and_then(|comp| t.norm(&comp, &c)),
        t.norm(&f, &c).and_then(|nc| t.norm(&to_pt, &nc)),
    );
    rec.eq(
        "norm functorial (virtual)",
        f.then(&to_pt).map_err(TambaraError::from).and_then(|comp| t.norm(&comp, &bv)),
        t.norm(&f, &bv).and_then(|nc| t.norm(&to_pt, &nc)),
    );

    // Exponential diagram X <-p- A <-λ- Z -ρ-> Π -π-> Y.
    let p = nonempty(&mut rng, |r| random_over(&x, SAMPLE_POINTS, 2, r));
    let extra = t.basis_elements(p.dom()).choose(&mut rng).cloned().unwrap_or_else(|| t.zero(p.dom()));
    let e = t.add(&random_effective(t, p.dom(), 1, &mut rng), &extra).expect("same base");
    match dependent_product(&f, &p) {
        Ok(d) if d.pi_obj().size() <= 512 => {
            let rhs = t.transfer(&p, &e).and_then(|pe| t.norm(&f, &pe));
            let lhs = t
                .restrict(&d.lambda, &e)
                .and_then(|le| t.norm(&d.rho, &le))
                .and_then(|n| t.transfer(&d.pi, &n));
            rec.eq("exponential diagram", lhs, rhs.clone());
            // The same identity on a renumbered copy of the diagram.
            let (pi2, j) = d.pi_obj().relabel(&random_permutation(d.pi_obj().size(), &mut rng));
            let (z2, k) = d.z_obj().relabel(&random_permutation(d.z_obj().size(), &mut rng));
            let k_inv = k.inverse().expect("bijection");
            let j_inv = j.inverse().expect("bijection");
            let lambda2 = k_inv.then(&d.lambda).unwrap();
            let rho2 = k_inv.then(&d.rho).unwrap().then(&j).unwrap();
            let upsilon2 = j_inv.then(&d.pi).unwrap();
            debug_assert_eq!(lambda2.dom(), &z2);
            debug_assert_eq!(upsilon2.dom(), &pi2);
            let lhs2 = t
                .restrict(&lambda2, &e)
                .and_then(|le| t.norm(&rho2, &le))
                .and_then(|n| t.transfer(&upsilon2, &n));
            rec.eq("exponential diagram (renumbered)", lhs2, rhs);
            if d.pi_obj().size() <= VIRTUAL_PI_LIMIT {
                let ev = t.add(&e, &t.neg(&random_effective(t, p.dom(), 1, &mut rng))).expect("same base");
                let rhs = t.transfer(&p, &ev).and_then(|pe| t.norm(&f, &pe));
                let lhs = t
                    .restrict(&d.lambda, &ev)
                    .and_then(|le| t.norm(&d.rho, &le))
                    .and_then(|n| t.transfer(&d.pi, &n));
                rec.eq("exponential diagram (virtual)", lhs, rhs);
            } else {
                rec.report.skipped += 1;
            }
        }
        Ok(_) => rec.report.skipped += 1,
        Err(err) => rec.fail("exponential diagram", err.to_string()),
    }
    rec.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::{ell_functor, fixed_point_functor, trivial_functor};
    use crate::monoid::{parse_gmonoid, Monoid};

    #[test]
    fn trivial_group_passes() {
        let g = Group::cyclic(1);
        let t = Tambarization::new(ell_functor(&g, &Monoid::cyclic(3), "C3"));
        let r = check_tambara_axioms(&t, 1, 20);
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn small_grid_passes() {
        for g in [Group::cyclic(2), Group::symmetric(3)] {
            let q = parse_gmonoid(&g, "nil").unwrap();
            for t in [
                Tambarization::new(trivial_functor(&g)),
                Tambarization::new(fixed_point_functor(&q)),
                Tambarization::new(ell_functor(&g, &Monoid::cyclic(2), "C2")),
            ] {
                let r = check_tambara_axioms(&t, 3, 15);
                assert!(r.passed(), "{} {}: {:?}", g.name(), t.mackey().name(), &r.violations[..r.violations.len().min(3)]);
                assert!(r.checks > 15 * 15);
            }
        }
    }

    /// Squares every norm: still multiplicative, but breaks the exponential identity.
    type NormFn = fn(&Tambarization, &GMap, &RingElt) -> Result<RingElt, TambaraError>;

    struct AlteredNorm(Tambarization, NormFn);

    impl TambaraStructure for AlteredNorm {
        type Elt = RingElt;
        fn group(&self) -> &Group {
            self.0.group()
        }
        fn zero(&self, x: &GSet) -> RingElt {
            RingElt::zero(x)
        }
        fn one(&self, x: &GSet) -> RingElt {
            self.0.ring_one(x)
        }
        fn add(&self, a: &RingElt, b: &RingElt) -> Result<RingElt, TambaraError> {
            a.add(b)
        }
        fn neg(&self, a: &RingElt) -> RingElt {
            a.neg()
        }
        fn mul(&self, a: &RingElt, b: &RingElt) -> Result<RingElt, TambaraError> {
            self.0.ring_mul(a, b)
        }
        fn restrict(&self, f: &GMap, a: &RingElt) -> Result<RingElt, TambaraError> {
            self.0.ring_restrict(f, a)
        }
        fn transfer(&self, f: &GMap, a: &RingElt) -> Result<RingElt, TambaraError> {
            self.0.ring_transfer(f, a)
        }
        fn norm(&self, f: &GMap, a: &RingElt) -> Result<RingElt, TambaraError> {
            (self.1)(&self.0, f, a)
        }
        fn basis_elements(&self, x: &GSet) -> Vec<RingElt> {
            TambaraStructure::basis_elements(&self.0, x)
        }
    }

    #[test]
    fn corrupted_norm_breaks_exponential_identity() {
        let g = Group::cyclic(2);
        let squared: NormFn = |t, f, a| {
            let n = t.norm_on_ring(f, a)?;
            t.ring_mul(&n, &n)
        };
        let t = AlteredNorm(Tambarization::new(trivial_functor(&g)), squared);
        let r = check_tambara_axioms(&t, 5, 40);
        assert!(r.violations.iter().any(|v| v.condition.starts_with("exponential diagram")));
        assert!(r.violations.iter().all(|v| v.condition != "norm multiplicative"));
    }

    #[test]
    fn section_signed_norm_fails_on_virtual_inputs() {
        let g = Group::cyclic(2);
        let t = AlteredNorm(Tambarization::new(trivial_functor(&g)), Tambarization::section_signed_norm);
        let r = check_tambara_axioms(&t, 5, 40);
        assert!(r.violations.iter().any(|v| v.condition.ends_with("(virtual)")));
        assert!(r.violations.iter().all(|v| !v.condition.starts_with("norm multiplicative")));
    }
}
