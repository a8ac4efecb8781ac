//! The two adjunctions: class rings as the free Tambara functor on a semi-Mackey functor,
//! and `L_Q` as the free semi-Mackey functor on a monoid.

use serde::Serialize;

use crate::axioms::{random_effective, TambaraStructure, SAMPLE_POINTS};
use crate::group::{Group, SubgroupId};
use crate::gset::{GMap, GSet};
use crate::crossed::CrossedBurnside;
use crate::mackey::{ell_functor, enumerate_morphisms, fixed_point_functor, trivial_functor, MackeyMorphism, SemiMackey};
use crate::monoid::Monoid;
use crate::random::{instance_rng, random_map};
use crate::tambarize::{RingElt, TambaraError, Tambarization};

/// `G/K -> G/H`, `eK ↦ eH`, for `K <= H`.
pub fn coset_projection(group: &Group, k: SubgroupId, h: SubgroupId) -> GMap {
    GMap::from_coset(group, k, &GSet::coset(group, h), 0)
}

/// `G/gSg^{-1} -> G/S`, `x gSg^{-1} ↦ x g S`: the map inducing `c_{g,S}`.
pub fn conjugation_map(group: &Group, g: usize, s: SubgroupId) -> GMap {
    let target = GSet::coset(group, s);
    let gs = target.act(g, 0);
    GMap::from_coset(group, group.lattice().conj(g, s), &target, gs)
}

/// A morphism `M -> T^μ` into the multiplicative semi-Mackey functor of `T`:
/// `values[H][j]` is the image in `T(G/H)` of label `j` of `M(G/H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuMorphism<E> {
    pub values: Vec<Vec<E>>,
}

/// Checks the monoid-homomorphism property and compatibility with `r = T^*`, `t = T_•`
/// and `c` at every subgroup.
pub fn validate_mu<T: TambaraStructure>(t: &T, m: &SemiMackey, phi: &MuMorphism<T::Elt>) -> Result<(), String> {
    let group = t.group();
    let lat = group.lattice();
    let ns = lat.len();
    let e = |r: Result<T::Elt, TambaraError>| r.map_err(|err| err.to_string());
    for s in 0..ns {
        let level = m.level(s);
        let cs = GSet::coset(group, s);
        if phi.values[s][level.unit()] != t.one(&cs) {
            return Err(format!("unit not preserved at {}", group.subgroup_name(s)));
        }
        for a in 0..level.size() {
            for b in a..level.size() {
                if e(t.mul(&phi.values[s][a], &phi.values[s][b]))? != phi.values[s][level.mul(a, b)] {
                    return Err(format!("not multiplicative at {} on ({a}, {b})", group.subgroup_name(s)));
                }
            }
        }
    }
    for h in 0..ns {
        for k in (0..ns).filter(|&k| lat.is_subgroup_of(k, h)) {
            let f = coset_projection(group, k, h);
            for j in 0..m.level(h).size() {
                if e(t.restrict(&f, &phi.values[h][j]))? != phi.values[k][m.res(h, k, j)] {
                    return Err(format!("restriction {h} -> {k} on label {j}"));
                }
            }
            for j in 0..m.level(k).size() {
                if e(t.norm(&f, &phi.values[k][j]))? != phi.values[h][m.tr(h, k, j)] {
                    return Err(format!("norm {k} -> {h} on label {j}"));
                }
            }
        }
    }
    for g in group.elements() {
        for s in 0..ns {
            let f = conjugation_map(group, g, s);
            for j in 0..m.level(s).size() {
                if e(t.restrict(&f, &phi.values[s][j]))? != phi.values[lat.conj(g, s)][m.conj(g, s, j)] {
                    return Err(format!("conjugation by {g} at {s} on label {j}"));
                }
            }
        }
    }
    Ok(())
}

/// `Ψ(φ)_X(A -> X, m) = T_+(p)(φ_A(m))`, orbitwise and extended linearly.
pub fn psi_apply<T: TambaraStructure>(
    t: &T,
    phi: &MuMorphism<T::Elt>,
    x: &RingElt,
) -> Result<T::Elt, TambaraError> {
    let group = t.group();
    let od = x.base().orbits();
    let mut out = t.zero(x.base());
    for (c, &n) in x.terms() {
        let p = GMap::from_coset(group, c.sub, x.base(), od.orbits[c.orbit].rep);
        let mut img = t.transfer(&p, &phi.values[c.sub][c.label])?;
        if n < 0 {
            img = t.neg(&img);
        }
        for _ in 0..n.unsigned_abs() {
            out = t.add(&out, &img)?;
        }
    }
    Ok(out)
}

/// The class of `(G/H --id--> G/H, j)`.
pub fn identity_class(s: &Tambarization, h: SubgroupId, j: usize) -> RingElt {
    let cs = GSet::coset(s.group(), h);
    let c = s.canonical_class(&cs, 0, h, j);
    RingElt::from_terms(&cs, [(c, 1)])
}

/// `Φ(ψ)_H(j) = ψ_{G/H}(G/H --id--> G/H, j)`.
pub fn phi_of<T: TambaraStructure>(
    t: &T,
    s: &Tambarization,
    psi: &dyn Fn(&RingElt) -> Result<T::Elt, TambaraError>,
) -> Result<MuMorphism<T::Elt>, TambaraError> {
    let _ = t;
    let lat = s.group().lattice();
    let values = (0..lat.len())
        .map(|h| (0..s.mackey().level(h).size()).map(|j| psi(&identity_class(s, h, j))).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(MuMorphism { values })
}

/// Coefficient bound of the search box for `φ_e`.
pub const BOX: i64 = 2;

/// All morphisms `M -> T^μ` whose component at `G/e` has every image inside the box
/// `[-BOX, BOX]^rank` of `T(G/e)`. Requires every label of `M` to be a transfer from `G/e`,
/// so the whole morphism is determined by `φ_e`; errors otherwise.
pub fn enumerate_mu_morphisms<T: TambaraStructure>(
    t: &T,
    m: &SemiMackey,
    limit: usize,
) -> Result<Vec<MuMorphism<T::Elt>>, String> {
    let group = t.group();
    let lat = group.lattice();
    let e = lat.trivial();
    let ge = GSet::coset(group, e);
    let level_e = m.level(e);
    // preimages under t^H_e
    let mut pre: Vec<Vec<usize>> = Vec::with_capacity(lat.len());
    for h in 0..lat.len() {
        let mut p = vec![usize::MAX; m.level(h).size()];
        for j in 0..level_e.size() {
            let img = m.tr(h, e, j);
            if p[img] == usize::MAX {
                p[img] = j;
            }
        }
        if p.contains(&usize::MAX) {
            return Err(format!(
                "{} has labels at {} that are not transfers from the trivial subgroup",
                m.name(),
                group.subgroup_name(h)
            ));
        }
        pre.push(p);
    }
    let basis = t.basis_elements(&ge);
    let width = (2 * BOX + 1) as usize;
    let total = width.checked_pow(basis.len() as u32).ok_or("box too large")?;
    if total > limit {
        return Err(format!("box has {total} candidates, above the limit {limit}"));
    }
    let mut candidates = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut v = t.zero(&ge);
        for b in &basis {
            let coeff = (c % width) as i64 - BOX;
            c /= width;
            let term = if coeff < 0 { t.neg(b) } else { b.clone() };
            for _ in 0..coeff.unsigned_abs() {
                v = t.add(&v, &term).map_err(|err| err.to_string())?;
            }
        }
        candidates.push(v);
    }
    let conj_maps: Vec<GMap> = group.elements().map(|g| conjugation_map(group, g, e)).collect();
    let equivariant = |j: usize, v: &T::Elt| -> bool {
        group.elements().all(|g| {
            let j2 = m.conj(g, e, j);
            j2 != j || t.restrict(&conj_maps[g], v).map(|r| &r == v).unwrap_or(false)
        })
    };
    // backtracking over labels of M(G/e)
    let n = level_e.size();
    let mut out = Vec::new();
    let mut chosen: Vec<Option<T::Elt>> = vec![None; n];
    chosen[level_e.unit()] = Some(t.one(&ge));
    let order: Vec<usize> = (0..n).filter(|&j| j != level_e.unit()).collect();
    fn consistent<T: TambaraStructure>(t: &T, level: &Monoid, chosen: &[Option<T::Elt>]) -> bool {
        for a in 0..level.size() {
            for b in a..level.size() {
                if let (Some(x), Some(y), Some(z)) = (&chosen[a], &chosen[b], &chosen[level.mul(a, b)]) {
                    match t.mul(x, y) {
                        Ok(p) if &p == z => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
    let mut stack: Vec<usize> = vec![0];
    while let Some(&idx) = stack.last() {
        let depth = stack.len() - 1;
        if depth == order.len() {
            let phi_e: Vec<T::Elt> = chosen.iter().map(|c| c.clone().expect("all chosen")).collect();
            // cross-level equivariance for labels moved by conjugation
            let moves_ok = group.elements().all(|g| {
                (0..n).all(|j| {
                    t.restrict(&conj_maps[g], &phi_e[j]).map(|r| r == phi_e[m.conj(g, e, j)]).unwrap_or(false)
                })
            });
            if moves_ok {
                let mut values = Vec::with_capacity(lat.len());
                let mut ok = true;
                for h in 0..lat.len() {
                    let f = coset_projection(group, e, h);
                    let mut row = Vec::with_capacity(m.level(h).size());
                    for &j0 in &pre[h] {
                        match t.norm(&f, &phi_e[j0]) {
                            Ok(v) => row.push(v),
                            Err(_) => ok = false,
                        }
                    }
                    values.push(row);
                }
                if ok {
                    let phi = MuMorphism { values };
                    if validate_mu(t, m, &phi).is_ok() {
                        out.push(phi);
                    }
                }
            }
            stack.pop();
            if !stack.is_empty() {
                chosen[order[stack.len() - 1]] = None;
                *stack.last_mut().expect("nonempty") += 1;
            }
            continue;
        }
        if idx >= candidates.len() {
            stack.pop();
            if depth > 0 {
                chosen[order[depth - 1]] = None;
                *stack.last_mut().expect("nonempty") += 1;
            }
            continue;
        }
        let j = order[depth];
        let v = &candidates[idx];
        chosen[j] = Some(v.clone());
        if equivariant(j, v) && consistent(t, level_e, &chosen) {
            stack.push(0);
        } else {
            chosen[j] = None;
            *stack.last_mut().expect("nonempty") += 1;
        }
    }
    Ok(out)
}

/// Checks that `psi` is additive, multiplicative, unital and commutes with restriction,
/// transfer and norm on sampled maps and elements.
pub fn check_tambara_morphism<T: TambaraStructure>(
    s: &Tambarization,
    t: &T,
    psi: &dyn Fn(&RingElt) -> Result<T::Elt, TambaraError>,
    seed: u64,
    samples: usize,
) -> Vec<String> {
    let mut failures = Vec::new();
    for i in 0..samples as u64 {
        let mut rng = instance_rng(seed, i);
        let f = random_map(s.group(), SAMPLE_POINTS, 2, &mut rng);
        let (x, y) = (f.dom(), f.cod());
        let a = random_effective(s, x, 2, &mut rng);
        let b = random_effective(s, x, 2, &mut rng);
        let u = random_effective(s, y, 2, &mut rng);
        let mut check = |name: &str, l: Result<T::Elt, TambaraError>, r: Result<T::Elt, TambaraError>| match (l, r) {
            (Ok(l), Ok(r)) if l == r => {}
            (Err(TambaraError::TooLarge(_)), _) | (_, Err(TambaraError::TooLarge(_))) => {}
            (l, r) => failures.push(format!("instance {i}: {name}: {l:?} vs {r:?}")),
        };
        check("unit", psi(&s.ring_one(x)), Ok(t.one(x)));
        check(
            "additive",
            a.add(&b).map_err(Into::into).and_then(|ab| psi(&ab)),
            psi(&a).and_then(|pa| t.add(&pa, &psi(&b)?)),
        );
        check(
            "multiplicative",
            s.ring_mul(&a, &b).and_then(|ab| psi(&ab)),
            psi(&a).and_then(|pa| t.mul(&pa, &psi(&b)?)),
        );
        check("restriction", s.ring_restrict(&f, &u).and_then(|r| psi(&r)), psi(&u).and_then(|pu| t.restrict(&f, &pu)));
        check("transfer", s.ring_transfer(&f, &a).and_then(|r| psi(&r)), psi(&a).and_then(|pa| t.transfer(&f, &pa)));
        check("norm", s.norm_on_ring(&f, &a).and_then(|r| psi(&r)), psi(&a).and_then(|pa| t.norm(&f, &pa)));
    }
    failures
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RoundTripReport {
    pub morphisms: usize,
    pub checked_values: usize,
    pub failures: Vec<String>,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Φ(Ψ(φ)) = φ` for each `φ`, and `Ψ(φ)` is a Tambara morphism on samples.
pub fn round_trip_from_mackey<T: TambaraStructure>(
    s: &Tambarization,
    t: &T,
    phis: &[MuMorphism<T::Elt>],
    seed: u64,
    samples: usize,
) -> RoundTripReport {
    let mut rep = RoundTripReport { morphisms: phis.len(), ..Default::default() };
    for (n, phi) in phis.iter().enumerate() {
        let psi = |x: &RingElt| psi_apply(t, phi, x);
        match phi_of(t, s, &psi) {
            Ok(back) => {
                rep.checked_values += back.values.iter().map(Vec::len).sum::<usize>();
                if &back != phi {
                    rep.failures.push(format!("morphism {n}: Φ(Ψ(φ)) differs from φ"));
                }
            }
            Err(err) => rep.failures.push(format!("morphism {n}: {err}")),
        }
        for f in check_tambara_morphism(s, t, &psi, seed ^ n as u64, samples) {
            rep.failures.push(format!("morphism {n}: Ψ(φ) is not a Tambara morphism: {f}"));
        }
    }
    rep
}

/// `Ψ(Φ(ψ)) = ψ` on every basis class over every `G/H` and over sampled bases, and
/// `Φ(ψ)` is a morphism into `T^μ`.
pub fn round_trip_from_tambara<T: TambaraStructure>(
    s: &Tambarization,
    t: &T,
    psi: &dyn Fn(&RingElt) -> Result<T::Elt, TambaraError>,
    seed: u64,
    samples: usize,
) -> RoundTripReport {
    let mut rep = RoundTripReport { morphisms: 1, ..Default::default() };
    let phi = match phi_of(t, s, psi) {
        Ok(p) => p,
        Err(err) => {
            rep.failures.push(err.to_string());
            return rep;
        }
    };
    if let Err(err) = validate_mu(t, s.mackey(), &phi) {
        rep.failures.push(format!("Φ(ψ) is not a morphism into T^μ: {err}"));
    }
    let group = s.group();
    let mut bases: Vec<GSet> = (0..group.lattice().len()).map(|h| GSet::coset(group, h)).collect();
    for i in 0..samples as u64 {
        let mut rng = instance_rng(seed, i);
        bases.push(random_map(group, SAMPLE_POINTS, 2, &mut rng).dom().clone());
    }
    for x in &bases {
        for c in s.basis(x) {
            let elt = RingElt::from_terms(x, [(c, 1)]);
            rep.checked_values += 1;
            match (psi_apply(t, &phi, &elt), psi(&elt)) {
                (Ok(l), Ok(r)) if l == r => {}
                (l, r) => rep.failures.push(format!("Ψ(Φ(ψ)) differs on {c:?}: {l:?} vs {r:?}")),
            }
        }
    }
    rep
}

/// Outcome of the `L_Q ⊣ ev` comparison for one target functor.
#[derive(Debug, Clone, Default, Serialize)]
pub struct EllAdjunctionReport {
    /// Monoid maps `Q -> M(G/e)^G`.
    pub monoid_maps: usize,
    /// Morphisms `L_Q -> M`.
    pub mackey_morphisms: usize,
    pub identity_checks: usize,
    pub failures: Vec<String>,
}

impl EllAdjunctionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Θ(φ) = φ_e` and `Φ(θ)_H = t^H_e ∘ θ`, checked to be mutually inverse bijections.
pub fn ell_adjunction(q: &Monoid, q_name: &str, m: &SemiMackey, limit: usize) -> EllAdjunctionReport {
    let group = m.group();
    let lat = group.lattice();
    let e = lat.trivial();
    let l = ell_functor(group, q, q_name);
    let mut rep = EllAdjunctionReport::default();
    let fixed: Vec<bool> = (0..m.level(e).size())
        .map(|j| group.elements().all(|g| m.conj(g, e, j) == j))
        .collect();
    let thetas: Vec<Vec<usize>> =
        q.homs(m.level(e)).into_iter().filter(|h| h.iter().all(|&j| fixed[j])).collect();
    rep.monoid_maps = thetas.len();
    let Some(phis) = enumerate_morphisms(&l, m, limit) else {
        rep.failures.push(format!("more than {limit} candidate morphisms"));
        return rep;
    };
    rep.mackey_morphisms = phis.len();
    let big_phi = |theta: &Vec<usize>| MackeyMorphism {
        tables: (0..lat.len()).map(|h| theta.iter().map(|&j| m.tr(h, e, j)).collect()).collect(),
    };
    for theta in &thetas {
        let phi = big_phi(theta);
        if let Err(err) = phi.validate(&l, m) {
            rep.failures.push(format!("Φ({theta:?}) is not a morphism: {err}"));
        }
        if &phi.tables[e] != theta {
            rep.failures.push(format!("Θ(Φ({theta:?})) differs"));
        }
        if !phis.contains(&phi) {
            rep.failures.push(format!("Φ({theta:?}) is missing from the enumerated morphisms"));
        }
    }
    for phi in &phis {
        let theta = phi.tables[e].clone();
        if !theta.iter().all(|&j| fixed[j]) {
            rep.failures.push("Θ(φ) leaves the G-fixed points".into());
        }
        if &big_phi(&theta) != phi {
            rep.failures.push(format!("Φ(Θ(φ)) differs from φ = {:?}", phi.tables));
        }
    }
    if thetas.len() != phis.len() {
        rep.failures.push(format!("{} monoid maps but {} Mackey morphisms", thetas.len(), phis.len()));
    }
    // r^H_K t^H_e (x) = (t^K_e x)^{[H:K]} on G-fixed x
    for h in 0..lat.len() {
        for k in (0..lat.len()).filter(|&k| lat.is_subgroup_of(k, h)) {
            for x in (0..m.level(e).size()).filter(|&x| fixed[x]) {
                rep.identity_checks += 1;
                let lhs = m.res(h, k, m.tr(h, e, x));
                let rhs = m.level(k).pow(m.tr(k, e, x), lat.index_in(k, h));
                if lhs != rhs {
                    rep.failures.push(format!("r^{h}_{k} t^{h}_e differs from the index power at {x}"));
                }
            }
        }
    }
    rep
}

/// One block of Tambarization adjunction round trips: enumerated `φ` from a source functor, or given `ψ`.
#[derive(Debug, Clone, Serialize)]
pub struct AdjunctionCase {
    pub source: String,
    pub target: String,
    pub direction: String,
    pub morphisms: usize,
    pub checked_values: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EllCase {
    pub target: String,
    pub report: EllAdjunctionReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjunctionSuite {
    pub group: String,
    pub monoid: String,
    pub tambara: Vec<AdjunctionCase>,
    pub ell: Vec<EllCase>,
}

impl AdjunctionSuite {
    pub fn violations(&self) -> usize {
        self.tambara.iter().map(|c| c.failures.len()).sum::<usize>()
            + self.ell.iter().map(|c| c.report.failures.len()).sum::<usize>()
    }
}

const ENUMERATION_LIMIT: usize = 100_000;

fn case_from(source: &str, target: &str, direction: &str, r: RoundTripReport) -> AdjunctionCase {
    AdjunctionCase {
        source: source.into(),
        target: target.into(),
        direction: direction.into(),
        morphisms: r.morphisms,
        checked_values: r.checked_values,
        failures: r.failures,
    }
}

fn enumerated_cases<T: TambaraStructure>(
    t: &T,
    target: &str,
    sources: &[(&str, &Tambarization)],
    seed: u64,
    samples: usize,
) -> Vec<AdjunctionCase> {
    sources
        .iter()
        .map(|(name, s)| {
            let r = match enumerate_mu_morphisms(t, s.mackey(), ENUMERATION_LIMIT) {
                Ok(phis) if phis.is_empty() => RoundTripReport {
                    failures: vec!["no morphisms found; the unit map is always one".into()],
                    ..Default::default()
                },
                Ok(phis) => round_trip_from_mackey(s, t, &phis, seed, samples),
                Err(err) => RoundTripReport { failures: vec![err], ..Default::default() },
            };
            case_from(name, target, "Φ∘Ψ", r)
        })
        .collect()
}

/// Adjunction round trips into `T_trivial`, `T_{L_Q}` and `Ω_Q`, plus the `L_Q ⊣ ev`
/// comparison against `L_Q`, `P_Q` and the trivial functor. `Q` carries the trivial action.
pub fn adjunction_suite(group: &Group, q: &Monoid, q_name: &str, seed: u64, samples: usize) -> AdjunctionSuite {
    let gq = crate::monoid::GMonoid::trivial_action(group, q.clone(), q_name);
    let triv = Tambarization::new(trivial_functor(group));
    let ell = Tambarization::new(ell_functor(group, q, q_name));
    let fixed = Tambarization::new(fixed_point_functor(&gq));
    let omega = CrossedBurnside::new(&gq);
    let l_name = ell.mackey().name().to_string();
    let sources = [("trivial", &triv), (l_name.as_str(), &ell)];
    let mut cases = Vec::new();

    cases.extend(enumerated_cases(&triv, "T_trivial", &sources, seed, samples));
    cases.extend(enumerated_cases(&ell, &format!("T_{l_name}"), &sources, seed, samples));
    cases.extend(enumerated_cases(&omega, &format!("Omega_{q_name}"), &sources, seed, samples));

    let id = |x: &RingElt| -> Result<RingElt, TambaraError> { Ok(x.clone()) };
    cases.push(case_from("trivial", "T_trivial", "Ψ∘Φ identity", round_trip_from_tambara(&triv, &triv, &id, seed, samples)));
    cases.push(case_from(&l_name, &format!("T_{l_name}"), "Ψ∘Φ identity", round_trip_from_tambara(&ell, &ell, &id, seed, samples)));
    // induced by Mackey morphisms L_Q -> trivial and L_Q -> L_Q
    for (target, tname) in [(&triv, "T_trivial".to_string()), (&ell, format!("T_{l_name}"))] {
        let morphisms = enumerate_morphisms(ell.mackey(), target.mackey(), ENUMERATION_LIMIT).unwrap_or_default();
        for (n, phi) in morphisms.iter().enumerate() {
            let psi = |x: &RingElt| -> Result<RingElt, TambaraError> { Ok(ell.ring_morphism(phi, target, x)) };
            let r = round_trip_from_tambara(&ell, target, &psi, seed ^ n as u64, samples);
            cases.push(case_from(&l_name, &tname, &format!("Ψ∘Φ induced #{n}"), r));
        }
    }
    let cbr = |x: &RingElt| omega.cbr_iso(&fixed, x);
    cases.push(case_from(
        fixed.mackey().name(),
        &format!("Omega_{q_name}"),
        "Ψ∘Φ cbr_iso",
        round_trip_from_tambara(&fixed, &omega, &cbr, seed, samples),
    ));

    let ell_cases = [ell.mackey(), fixed.mackey(), triv.mackey()]
        .into_iter()
        .map(|m| EllCase { target: m.name().to_string(), report: ell_adjunction(q, q_name, m, ENUMERATION_LIMIT) })
        .collect();
    AdjunctionSuite { group: group.name().to_string(), monoid: q_name.to_string(), tambara: cases, ell: ell_cases }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::parse_gmonoid;

    #[test]
    fn ell_adjunction_on_small_cases() {
        for g in [Group::cyclic(2), Group::symmetric(3)] {
            for (q, name) in [(Monoid::trivial(), "1"), (Monoid::cyclic(2), "C2"), (Monoid::nil(), "nil")] {
                let targets = [
                    ell_functor(&g, &q, name),
                    fixed_point_functor(&parse_gmonoid(&g, "cyclic:3").unwrap()),
                    trivial_functor(&g),
                ];
                for m in &targets {
                    let r = ell_adjunction(&q, name, m, 1_000_000);
                    assert!(r.passed(), "{} {name} -> {}: {:?}", g.name(), m.name(), r.failures);
                    assert!(r.mackey_morphisms >= 1);
                }
            }
        }
    }

    #[test]
    fn identity_into_ell_recovers_identity() {
        let g = Group::symmetric(3);
        let q = Monoid::cyclic(3);
        let l = ell_functor(&g, &q, "C3");
        let r = ell_adjunction(&q, "C3", &l, 1_000_000);
        assert!(r.passed());
        assert_eq!(r.monoid_maps, 3);
    }

    #[test]
    fn burnside_target_round_trips() {
        let g = Group::cyclic(2);
        let s = Tambarization::new(trivial_functor(&g));
        let phis = enumerate_mu_morphisms(&s, s.mackey(), 1000).unwrap();
        assert_eq!(phis.len(), 1);
        assert!(round_trip_from_mackey(&s, &s, &phis, 1, 5).passed());
        let id = |x: &RingElt| Ok(x.clone());
        let r = round_trip_from_tambara(&s, &s, &id, 1, 5);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn ell_target_homs_are_torsion_units() {
        let g = Group::cyclic(2);
        let q = Monoid::cyclic(2);
        let s = Tambarization::new(ell_functor(&g, &q, "C2"));
        let phis = enumerate_mu_morphisms(&s, s.mackey(), 100_000).unwrap();
        // w ↦ ±1, ±w
        assert_eq!(phis.len(), 4);
        let r = round_trip_from_mackey(&s, &s, &phis, 2, 5);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn ell_source_counts_agree_across_targets() {
        // both targets have Z[Q] with trivial action at G/e, so the counts must match
        let g = Group::symmetric(3);
        for (q, name) in [(Monoid::boolean(), "bool"), (Monoid::nil(), "nil")] {
            let gq = crate::monoid::GMonoid::trivial_action(&g, q.clone(), name);
            let ell = Tambarization::new(ell_functor(&g, &q, name));
            let om = CrossedBurnside::new(&gq);
            let a = enumerate_mu_morphisms(&ell, ell.mackey(), 10_000).unwrap().len();
            let b = enumerate_mu_morphisms(&om, ell.mackey(), 10_000).unwrap().len();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn suite_on_c2() {
        let g = Group::cyclic(2);
        for (q, name) in [(Monoid::cyclic(2), "C2"), (Monoid::nil(), "nil")] {
            let suite = adjunction_suite(&g, &q, name, 3, 4);
            for c in &suite.tambara {
                assert!(c.failures.is_empty(), "{} -> {} {}: {:?}", c.source, c.target, c.direction, c.failures);
            }
            assert_eq!(suite.violations(), 0);
        }
    }
}
