//! Tables of marks and the fixed-point-count embedding of the Burnside ring.

use serde::Serialize;
use thiserror::Error;

use crate::burnside::{self, coset_marks};
use crate::crossed::{CrossedBurnside, OmegaElt};
use crate::group::{Group, SubgroupId};
use crate::gset::GSet;
use crate::tambarize::{RingElt, TambaraError, Tambarization};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarksError {
    #[error("marks are only defined for unlabeled classes; {0} carries labels")]
    NontrivialQUnsupported(String),
    #[error(transparent)]
    Tambara(#[from] TambaraError),
}

/// `matrix[i][j]` is the number of points of `H/K_i` fixed by `K_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableOfMarks {
    pub group: String,
    pub subgroup: String,
    pub classes: Vec<String>,
    pub reps: Vec<SubgroupId>,
    pub orders: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl TableOfMarks {
    /// Representatives of the `H`-conjugacy classes of subgroups of `H`, by order then index.
    pub fn new(group: &Group, h: SubgroupId) -> Self {
        let lat = group.lattice();
        let mut reps: Vec<SubgroupId> =
            burnside::basis(&GSet::coset(group, h)).into_iter().map(|k| k.stab).collect();
        reps.sort_by_key(|&k| (lat.subgroup(k).order(), k));
        let matrix = reps
            .iter()
            .map(|&ki| reps.iter().map(|&kj| coset_marks(group, h, ki, kj)).collect())
            .collect();
        TableOfMarks {
            group: group.name().to_string(),
            subgroup: group.subgroup_name(h),
            classes: reps.iter().map(|&k| group.subgroup_name(k)).collect(),
            orders: reps.iter().map(|&k| lat.subgroup(k).order()).collect(),
            reps,
            matrix,
        }
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| row.iter().skip(i + 1).all(|&v| v == 0))
    }

    /// Triangular with nonzero diagonal, hence injective over the integers.
    pub fn is_injective(&self) -> bool {
        self.is_lower_triangular() && (0..self.matrix.len()).all(|i| self.matrix[i][i] != 0)
    }

    pub fn render_text(&self) -> String {
        let w = self.classes.iter().map(|c| c.len()).max().unwrap_or(1).max(3);
        let mut out = format!("marks of {} (rows H/K, columns fixed by K)\n", self.subgroup);
        out.push_str(&format!("{:<w$}", ""));
        for c in &self.classes {
            out.push_str(&format!(" {c:>w$}"));
        }
        out.push('\n');
        for (c, row) in self.classes.iter().zip(&self.matrix) {
            out.push_str(&format!("{c:<w$}"));
            for v in row {
                out.push_str(&format!(" {v:>w$}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Marks of an element over `G/H`, in the order of [`TableOfMarks::new`].
fn marks_over_coset(x: &burnside::BurnsideElt, table: &TableOfMarks) -> Vec<i64> {
    let m = burnside::marks(x);
    table.reps.iter().map(|&k| m[0][k]).collect()
}

fn transitive_base(x: &GSet) -> Result<SubgroupId, MarksError> {
    let od = x.orbits();
    if od.orbits.len() != 1 || od.orbits[0].rep != 0 {
        return Err(TambaraError::Malformed("marks are computed over a coset space G/H".into()).into());
    }
    Ok(od.orbits[0].stabilizer)
}

/// Marks of a class-ring element of the trivial functor, computed by realizing each class as a
/// G-set and counting fixed points.
pub fn marks_of_ring_elt(t: &Tambarization, x: &RingElt) -> Result<Vec<i64>, MarksError> {
    let lat = t.group().lattice();
    if (0..lat.len()).any(|s| t.mackey().level(s).size() != 1) {
        return Err(MarksError::NontrivialQUnsupported(t.mackey().name().to_string()));
    }
    let h = transitive_base(x.base())?;
    let table = TableOfMarks::new(t.group(), h);
    let mut out = vec![0i64; table.reps.len()];
    for (c, &n) in x.terms() {
        let obj = t.realize_classes(x.base(), &[*c]);
        let v = marks_over_coset(&burnside::classify(&obj.p), &table);
        for (o, m) in out.iter_mut().zip(v) {
            *o += n * m;
        }
    }
    Ok(out)
}

/// Marks of a crossed Burnside element with trivial `Q`.
pub fn marks_of_omega(om: &CrossedBurnside, x: &OmegaElt) -> Result<Vec<i64>, MarksError> {
    if om.gmonoid().monoid().size() != 1 {
        return Err(MarksError::NontrivialQUnsupported(om.gmonoid().name().to_string()));
    }
    let h = transitive_base(x.base())?;
    let table = TableOfMarks::new(om.group(), h);
    let lb = om.labeled_base(x.base());
    // X × pt is X up to renumbering; push down along the projection.
    let down = burnside::transfer(&lb.px, x.over_product())?;
    Ok(marks_over_coset(&down, &table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::{ell_functor, trivial_functor};
    use crate::monoid::Monoid;

    #[test]
    fn c2_marks() {
        let g = Group::cyclic(2);
        let tm = TableOfMarks::new(&g, 1);
        assert_eq!(tm.matrix, vec![vec![2, 0], vec![1, 1]]);
        assert!(tm.is_injective());
        let t = Tambarization::new(trivial_functor(&g));
        let (classes, _) = t.presentation(1);
        let pt = GSet::coset(&g, 1);
        let one = t.ring_one(&pt);
        assert_eq!(marks_of_ring_elt(&t, &one).unwrap(), vec![1, 1]);
        let tt = RingElt::from_terms(&pt, [(classes[0], 1)]);
        assert_eq!(marks_of_ring_elt(&t, &tt).unwrap(), vec![2, 0]);
        let t2 = t.ring_mul(&tt, &tt).unwrap();
        assert_eq!(marks_of_ring_elt(&t, &t2).unwrap(), vec![4, 0]);
    }

    #[test]
    fn tables_are_triangular() {
        for g in [Group::cyclic(3), Group::cyclic(4), Group::symmetric(3), Group::dihedral(4)] {
            let tm = TableOfMarks::new(&g, g.lattice().whole());
            assert!(tm.is_injective(), "{}", g.name());
            assert_eq!(tm.reps.len(), g.lattice().class_count());
        }
    }

    #[test]
    fn labeled_classes_are_rejected() {
        let g = Group::cyclic(2);
        let t = Tambarization::new(ell_functor(&g, &Monoid::cyclic(2), "C2"));
        let pt = GSet::point(&g);
        assert!(matches!(
            marks_of_ring_elt(&t, &t.ring_one(&pt)),
            Err(MarksError::NontrivialQUnsupported(_))
        ));
    }
}
