//! Witt-Burnside rings of monoid rings, presented as class rings of the constant functor `L_Q`.

use serde::Serialize;

use crate::group::{Group, SubgroupId};
use crate::mackey::ell_functor;
use crate::monoid::Monoid;
use crate::ring::RingPresentation;
use crate::strings::elliott_iso;
use crate::tambarize::{TambaraError, Tambarization};

#[derive(Debug, Clone, Serialize)]
pub struct WittBurnside {
    pub group: String,
    pub subgroup: String,
    pub monoid: String,
    /// e.g. `W_C2(Z)` or `W_C2(Z[C3])`.
    pub ring: String,
    pub identification: Vec<String>,
    pub presentation: RingPresentation,
}

/// `W_H(Z[Q])`, computed as `T_{L_Q}(G/H)` and cross-checked against the string ring `B_Q(H)`.
pub fn witt_burnside(group: &Group, q: &Monoid, q_name: &str, h: SubgroupId) -> Result<WittBurnside, TambaraError> {
    let t = Tambarization::new(ell_functor(group, q, q_name));
    let cmp = elliott_iso(&t, q, h)?;
    let sub = group.subgroup_name(h);
    let coeffs = if q.size() == 1 { "Z".to_string() } else { format!("Z[{q_name}]") };
    Ok(WittBurnside {
        group: group.name().to_string(),
        subgroup: sub.clone(),
        monoid: q_name.to_string(),
        ring: format!("W_{sub}({coeffs})"),
        identification: vec![
            format!("W_{sub}({coeffs}) = B_{q_name}({sub}) (strings over {q_name})"),
            format!("B_{q_name}({sub}) = T_L[{q_name}]({}/{sub}) (fiber over the base point)", group.name()),
            format!("W o Z[-] = T o L, evaluated at {}/{sub}", group.name()),
        ],
        presentation: cmp.tambarization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::monoid_ring;

    #[test]
    fn trivial_subgroup_is_the_monoid_ring() {
        let g = Group::symmetric(3);
        let q = Monoid::cyclic(3);
        let w = witt_burnside(&g, &q, "C3", 0).unwrap();
        let direct = monoid_ring(&q);
        assert_eq!(w.presentation.rank(), 3);
        assert!(w.presentation.check_basis_iso(&direct, &[0, 1, 2]).is_ok());
    }

    #[test]
    fn burnside_ring_of_c2() {
        let g = Group::cyclic(2);
        let w = witt_burnside(&g, &Monoid::trivial(), "1", 1).unwrap();
        assert_eq!(w.ring, "W_C2(Z)");
        assert_eq!(w.presentation.rank(), 2);
        assert_eq!(w.presentation.mul[0][0], vec![2, 0]);
        let s3 = Group::symmetric(3);
        assert_eq!(witt_burnside(&s3, &Monoid::trivial(), "1", s3.lattice().whole()).unwrap().presentation.rank(), 4);
    }
}
