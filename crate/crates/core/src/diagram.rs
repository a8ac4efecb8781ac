//! Executable diagram lemmas for exponential diagrams, the pullback / dependent
//! product adjunction, and the universal property of pullbacks.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::Group;
use crate::gset::{
    check_exponential, dependent_product, dependent_product_size, homs_over, iso_over, pullback,
    GMap, Pullback,
};
use crate::random::{instance_rng, random_over, random_permutation};

/// Upper bound on the size of any object handled by the sampled suites.
pub const SAMPLE_POINTS: usize = 12;
/// Dependent products larger than this are resampled rather than built.
pub const SAMPLE_PI_POINTS: usize = 4096;
/// Hom-set enumeration cap.
pub const HOM_LIMIT: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[error("{lemma} violated on instance {instance}: {detail}")]
pub struct LemmaViolated {
    pub lemma: String,
    pub instance: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LemmaReport {
    pub lemma_a: usize,
    pub lemma_b: usize,
    pub lemma_c: usize,
    pub adjunction: usize,
    pub pullback_universal: usize,
    pub violations: Vec<LemmaViolated>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Relabels `f`'s domain by `perm`, returning the transported map.
fn transport_dom(f: &GMap, iso: &GMap) -> GMap {
    iso.inverse().expect("relabeling is invertible").then(f).expect("composable")
}

/// Moves an object along a renumbering of its codomain.
fn transport_cod(f: &GMap, iso: &GMap) -> GMap {
    f.then(iso).expect("composable")
}

/// Dependent products preserve fibered products: for `p_i: A_i -> X`, `Π_η(A_1 ×_X A_2)` is the pullback of the `Π_η(A_i)` over `Y`.
pub fn check_lemma_a(eta: &GMap, p1: &GMap, p2: &GMap) -> Result<(), String> {
    let a = pullback(p1, p2).map_err(|e| e.to_string())?;
    let p = a.to_base(p1);
    let e = dependent_product(eta, &p).map_err(|e| e.to_string())?;
    let e1 = dependent_product(eta, p1).map_err(|e| e.to_string())?;
    let e2 = dependent_product(eta, p2).map_err(|e| e.to_string())?;
    let pb = pullback(&e1.pi, &e2.pi).map_err(|e| e.to_string())?;
    let mut map = Vec::with_capacity(e.pi_obj().size());
    for s in 0..e.pi_obj().size() {
        let (y, vals) = e.section(s);
        let v1: Vec<usize> = vals.iter().map(|&z| a.pr1.apply(z)).collect();
        let v2: Vec<usize> = vals.iter().map(|&z| a.pr2.apply(z)).collect();
        let s1 = e1.section_index(y, &v1).ok_or("Π(ϖ1) leaves Π_η(A1)")?;
        let s2 = e2.section_index(y, &v2).ok_or("Π(ϖ2) leaves Π_η(A2)")?;
        map.push(pb.index(s1, s2));
    }
    let cmp = GMap::new(e.pi_obj().clone(), pb.obj.clone(), map)
        .map_err(|e| format!("comparison not equivariant: {e}"))?;
    if !cmp.is_bijective() {
        return Err("Π_η(A) -> Π_η(A1) ×_Y Π_η(A2) is not bijective".into());
    }
    if iso_over(&e.pi, &pb.to_base(&e1.pi)).is_none() {
        return Err("iso_over finds no isomorphism".into());
    }
    check_exponential(eta, &p, &e.lambda, &e.rho, &e.pi)
}

/// Index of `(a, y')` in `A ×_Y Y'`.
fn base_change(pb: &Pullback, a: usize, y2: usize) -> usize {
    pb.index(a, y2)
}

/// Base change: pulling an exponential diagram back along `ζ: Y' -> Y` gives an exponential diagram.
pub fn check_lemma_b(eta: &GMap, p: &GMap, zeta: &GMap) -> Result<(), String> {
    let e = dependent_product(eta, p).map_err(|e| e.to_string())?;
    let err = |e: crate::gset::GSetError| e.to_string();
    let x2 = pullback(eta, zeta).map_err(err)?;
    let eta2 = x2.pr2.clone();
    let a_to_y = p.then(eta).map_err(err)?;
    let a2 = pullback(&a_to_y, zeta).map_err(err)?;
    let p2_map: Vec<usize> = (0..a2.obj.size())
        .map(|i| base_change(&x2, p.apply(a2.pr1.apply(i)), a2.pr2.apply(i)))
        .collect();
    let p2 = GMap::new(a2.obj.clone(), x2.obj.clone(), p2_map).map_err(err)?;
    let z_to_y = e.rho.then(&e.pi).map_err(err)?;
    let z2 = pullback(&z_to_y, zeta).map_err(err)?;
    let pi2 = pullback(&e.pi, zeta).map_err(err)?;
    let lambda2: Vec<usize> = (0..z2.obj.size())
        .map(|i| base_change(&a2, e.lambda.apply(z2.pr1.apply(i)), z2.pr2.apply(i)))
        .collect();
    let rho2: Vec<usize> = (0..z2.obj.size())
        .map(|i| base_change(&pi2, e.rho.apply(z2.pr1.apply(i)), z2.pr2.apply(i)))
        .collect();
    let lambda2 = GMap::new(z2.obj.clone(), a2.obj.clone(), lambda2).map_err(err)?;
    let rho2 = GMap::new(z2.obj.clone(), pi2.obj.clone(), rho2).map_err(err)?;
    check_exponential(&eta2, &p2, &lambda2, &rho2, &pi2.pr2)?;
    let canonical = dependent_product(&eta2, &p2).map_err(err)?;
    if iso_over(&pi2.pr2, &canonical.pi).is_none() {
        return Err("iso_over finds no isomorphism with Π_η'(A')".into());
    }
    Ok(())
}

/// Exponential diagrams are stable under renumbering: the diagram of `(η, ξ)` with `X'` and `Y'`
/// relabeled (so not in normal form), pasted with a pullback along `p: A -> Z`.
pub fn check_lemma_c<R: Rng>(eta: &GMap, xi: &GMap, p: &GMap, rng: &mut R) -> Result<(), String> {
    let err = |e: crate::gset::GSetError| e.to_string();
    let e0 = dependent_product(eta, xi).map_err(err)?;
    // X <-ξ- Z <-ζ- X' -η'-> Y' -υ-> Y, renumbered.
    let (_, iso_x2) = e0.z_obj().relabel(&random_permutation(e0.z_obj().size(), rng));
    let (_, iso_y2) = e0.pi_obj().relabel(&random_permutation(e0.pi_obj().size(), rng));
    let zeta = transport_dom(&e0.lambda, &iso_x2);
    let eta_p = transport_cod(&transport_dom(&e0.rho, &iso_x2), &iso_y2);
    let upsilon = transport_dom(&e0.pi, &iso_y2);
    check_exponential(eta, xi, &zeta, &eta_p, &upsilon)?;

    let a2 = pullback(p, &zeta).map_err(err)?;
    let e2 = dependent_product(&eta_p, &a2.pr2).map_err(err)?;
    let new_p = p.then(xi).map_err(err)?;
    let new_lambda = e2.lambda.then(&a2.pr1).map_err(err)?;
    let new_pi = e2.pi.then(&upsilon).map_err(err)?;
    check_exponential(eta, &new_p, &new_lambda, &e2.rho, &new_pi)?;
    let direct = dependent_product(eta, &new_p).map_err(err)?;
    if iso_over(&new_pi, &direct.pi).is_none() {
        return Err("iso_over finds no isomorphism with Π_η(A)".into());
    }
    Ok(())
}

/// Checks `Hom_{/X}(X ×_Y B, A) ≅ Hom_{/Y}(B, Π_η A)` through the explicit transpositions.
/// Returns the common hom-set size, or `None` when enumeration would exceed [`HOM_LIMIT`].
pub fn check_adjunction(eta: &GMap, p: &GMap, q: &GMap) -> Result<Option<usize>, String> {
    let err = |e: crate::gset::GSetError| e.to_string();
    let e = dependent_product(eta, p).map_err(err)?;
    let xb = pullback(eta, q).map_err(err)?;
    let Some(left) = homs_over(&xb.pr1, p, HOM_LIMIT) else { return Ok(None) };
    let Some(right) = homs_over(q, &e.pi, HOM_LIMIT) else { return Ok(None) };
    if left.len() != right.len() {
        return Err(format!("hom-set sizes differ: {} vs {}", left.len(), right.len()));
    }
    let flat = |phi: &GMap| -> Result<GMap, String> {
        let map = (0..q.dom().size())
            .map(|b| {
                let y = q.apply(b);
                let vals: Vec<usize> =
                    e.eta_fibers[y].iter().map(|&x| phi.apply(xb.index(x, b))).collect();
                e.section_index(y, &vals).ok_or_else(|| "transpose leaves Π_η(A)".to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = GMap::new(q.dom().clone(), e.pi_obj().clone(), map).map_err(err)?;
        if m.then(&e.pi).map_err(err)?.values() != q.values() {
            return Err("transpose is not over Y".into());
        }
        Ok(m)
    };
    let sharp = |psi: &GMap| -> Result<GMap, String> {
        let map = (0..xb.obj.size())
            .map(|i| e.eval(psi.apply(xb.pr2.apply(i)), xb.pr1.apply(i)))
            .collect();
        let m = GMap::new(xb.obj.clone(), p.dom().clone(), map).map_err(err)?;
        if m.then(p).map_err(err)?.values() != xb.pr1.values() {
            return Err("transpose is not over X".into());
        }
        Ok(m)
    };
    for phi in &left {
        if &sharp(&flat(phi)?)? != phi {
            return Err("♯∘♭ is not the identity".into());
        }
    }
    for psi in &right {
        if &flat(&sharp(psi)?)? != psi {
            return Err("♭∘♯ is not the identity".into());
        }
    }
    Ok(Some(left.len()))
}

/// For a cone `C -> P` over a pullback, exactly one mediating map exists.
pub fn check_pullback_universal(f: &GMap, g: &GMap, cone: &GMap) -> Result<(), String> {
    let err = |e: crate::gset::GSetError| e.to_string();
    let pb = pullback(f, g).map_err(err)?;
    // The cone legs come from a map into the pullback, forgotten afterwards.
    let u = cone.then(&pb.pr1).map_err(err)?;
    let v = cone.then(&pb.pr2).map_err(err)?;
    let c_to_x = u.then(f).map_err(err)?;
    let candidates = homs_over(&c_to_x, &pb.to_base(f), HOM_LIMIT).ok_or("too many maps")?;
    let mediating = candidates
        .iter()
        .filter(|m| m.then(&pb.pr1).unwrap() == u && m.then(&pb.pr2).unwrap() == v)
        .count();
    if mediating != 1 {
        return Err(format!("{mediating} mediating maps"));
    }
    Ok(())
}

/// Draws `η: X -> Y` and `p: A -> X` with `|Π_η(A)|` under [`SAMPLE_PI_POINTS`].
pub fn sample_exponential_input<R: Rng>(group: &Group, rng: &mut R) -> (GMap, GMap) {
    loop {
        let y = crate::random::random_gset(group, SAMPLE_POINTS, 3, rng);
        let eta = random_over(&y, SAMPLE_POINTS, 3, rng);
        let p = random_over(eta.dom(), SAMPLE_POINTS, 4, rng);
        if dependent_product_size(&eta, &p) <= SAMPLE_PI_POINTS {
            return (eta, p);
        }
    }
}

fn run_instance(group: &Group, seed: u64, instance: u64) -> Vec<(usize, Result<(), String>)> {
    let mut rng = instance_rng(seed, instance);
    let mut out = Vec::new();
    // fibered products
    let (eta, p1, p2) = loop {
        let (eta, p1) = sample_exponential_input(group, &mut rng);
        let p2 = random_over(eta.dom(), SAMPLE_POINTS, 3, &mut rng);
        let a = pullback(&p1, &p2).expect("common base");
        if a.obj.size() <= 4 * SAMPLE_POINTS
            && dependent_product_size(&eta, &a.to_base(&p1)) <= SAMPLE_PI_POINTS
        {
            break (eta, p1, p2);
        }
    };
    out.push((0, check_lemma_a(&eta, &p1, &p2)));
    // base change
    let (eta, p) = sample_exponential_input(group, &mut rng);
    let zeta = random_over(eta.cod(), SAMPLE_POINTS, 3, &mut rng);
    out.push((1, check_lemma_b(&eta, &p, &zeta)));
    // renumbered diagram pasted with a pullback
    let (eta, xi) = loop {
        let (eta, xi) = sample_exponential_input(group, &mut rng);
        if dependent_product_size(&eta, &xi) <= 256 {
            break (eta, xi);
        }
    };
    let p = loop {
        let p = random_over(xi.dom(), SAMPLE_POINTS, 3, &mut rng);
        if let Ok(e) = dependent_product(&eta, &xi) {
            let a2 = pullback(&p, &e.lambda).expect("pullback");
            if dependent_product_size(&e.rho, &a2.pr2) <= SAMPLE_PI_POINTS {
                break p;
            }
        }
    };
    out.push((2, check_lemma_c(&eta, &xi, &p, &mut rng)));
    // Adjunction
    let (eta, p) = sample_exponential_input(group, &mut rng);
    let q = random_over(eta.cod(), SAMPLE_POINTS, 3, &mut rng);
    out.push((3, check_adjunction(&eta, &p, &q).map(|_| ())));
    // Pullback universal property
    let x = crate::random::random_gset(group, SAMPLE_POINTS, 3, &mut rng);
    let f = random_over(&x, SAMPLE_POINTS, 3, &mut rng);
    let g = random_over(&x, SAMPLE_POINTS, 3, &mut rng);
    if let Ok(pb) = pullback(&f, &g) {
        if pb.obj.size() <= 40 {
            let cone = random_over(&pb.obj, SAMPLE_POINTS, 3, &mut rng);
            out.push((4, check_pullback_universal(&f, &g, &cone)));
        }
    }
    out
}

/// Runs the three diagram checks, the adjunction and the pullback property on `samples`
/// random instances.
pub fn diagram_lemma_suite(group: &Group, seed: u64, samples: usize) -> LemmaReport {
    let results: Vec<(u64, Vec<(usize, Result<(), String>)>)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| (i, run_instance(group, seed, i)))
        .collect();
    let names = ["lemma A", "lemma B", "lemma C", "adjunction", "pullback universal property"];
    let mut report = LemmaReport::default();
    for (instance, res) in results {
        for (kind, r) in res {
            match kind {
                0 => report.lemma_a += 1,
                1 => report.lemma_b += 1,
                2 => report.lemma_c += 1,
                3 => report.adjunction += 1,
                _ => report.pullback_universal += 1,
            }
            if let Err(detail) = r {
                report.violations.push(LemmaViolated {
                    lemma: names[kind].to_string(),
                    instance,
                    detail,
                });
            }
        }
    }
    report
}

/// The map `X ×_Y B -> X` used by the adjunction, exposed for tests.
pub fn pulled_back_object(eta: &GMap, q: &GMap) -> GMap {
    pullback(eta, q).expect("common base").pr1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::GSet;

    #[test]
    fn trivial_group_suite_passes() {
        let r = diagram_lemma_suite(&Group::cyclic(1), 3, 20);
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn lemma_a_fold_c2() {
        let g = Group::cyclic(2);
        let free = GSet::coset(&g, 0);
        let eta = GMap::to_point(&free);
        let a = GMap::identity(&free);
        assert_eq!(check_lemma_a(&eta, &a, &a), Ok(()));
        let two = GMap::new(GSet::cosets(&g, &[0, 0]), free.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(check_lemma_a(&eta, &two, &two), Ok(()));
    }

    #[test]
    fn s3_suite_passes() {
        let r = diagram_lemma_suite(&Group::symmetric(3), 7, 30);
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.lemma_a, 30);
    }

    #[test]
    fn adjunction_counts_match_on_fold() {
        let g = Group::cyclic(2);
        let free = GSet::coset(&g, 0);
        let eta = GMap::to_point(&free);
        let p = GMap::new(GSet::cosets(&g, &[0, 0]), free.clone(), vec![0, 1, 0, 1]).unwrap();
        let q = GMap::to_point(&GSet::cosets(&g, &[0, 1]));
        assert!(check_adjunction(&eta, &p, &q).unwrap().unwrap() > 0);
    }
}
