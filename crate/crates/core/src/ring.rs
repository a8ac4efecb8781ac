//! Finite-rank commutative rings given by a basis and structure constants.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub stab: String,
    pub label: String,
}

impl BasisEntry {
    /// Display name such as `[C2/e; q=w]`, or `[C2/e]` when the label carries no data.
    pub fn display(&self, ambient: &str) -> String {
        if self.label.is_empty() {
            format!("[{ambient}/{}]", self.stab)
        } else {
            format!("[{ambient}/{}; q={}]", self.stab, self.label)
        }
    }
}

/// `mul[i][j]` is the coefficient vector of `b_i * b_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub basis: Vec<BasisEntry>,
    pub mul: Vec<Vec<Vec<i64>>>,
    pub one: Vec<i64>,
}

impl RingPresentation {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn product(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let n = self.rank();
        let mut out = vec![0i64; n];
        for (i, &a) in x.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in y.iter().enumerate().filter(|(_, b)| **b != 0) {
                for (k, &c) in self.mul[i][j].iter().enumerate() {
                    out[k] += a * b * c;
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    /// Checks commutativity, associativity and the unit on basis elements.
    pub fn check_ring_axioms(&self) -> Result<(), String> {
        let n = self.rank();
        for i in 0..n {
            let bi = self.basis_vector(i);
            if self.product(&self.one, &bi) != bi {
                return Err(format!("one is not a unit for basis element {i}"));
            }
            for j in 0..n {
                if self.mul[i][j] != self.mul[j][i] {
                    return Err(format!("not commutative at ({i}, {j})"));
                }
                for k in 0..n {
                    let bk = self.basis_vector(k);
                    let left = self.product(&self.mul[i][j], &bk);
                    let right = self.product(&bi, &self.mul[j][k]);
                    if left != right {
                        return Err(format!("not associative at ({i}, {j}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that `b_i ↦ images[i]` is a unital ring homomorphism into `target`.
    pub fn check_hom(&self, target: &RingPresentation, images: &[Vec<i64>]) -> Result<(), String> {
        let apply = |v: &[i64]| -> Vec<i64> {
            let mut out = vec![0; target.rank()];
            for (i, &c) in v.iter().enumerate() {
                for (k, &d) in images[i].iter().enumerate() {
                    out[k] += c * d;
                }
            }
            out
        };
        if apply(&self.one) != target.one {
            return Err("unit is not preserved".into());
        }
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if apply(&self.mul[i][j]) != target.product(&images[i], &images[j]) {
                    return Err(format!("product of basis elements {i} and {j} is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// Checks that `b_i ↦ b'_{perm[i]}` is a bijection of bases preserving every structure constant.
    pub fn check_basis_iso(&self, target: &RingPresentation, perm: &[usize]) -> Result<(), String> {
        if self.rank() != target.rank() || perm.len() != self.rank() {
            return Err(format!("ranks differ: {} vs {}", self.rank(), target.rank()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err("basis map is not a bijection".into());
            }
        }
        let images: Vec<Vec<i64>> = perm.iter().map(|&p| target.basis_vector(p)).collect();
        self.check_hom(target, &images)
    }

    /// Entrywise rendering for the text output.
    pub fn render_text(&self, ambient: &str) -> String {
        let names: Vec<String> = self.basis.iter().map(|b| b.display(ambient)).collect();
        let fmt = |v: &[i64]| -> String {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, &c)| match c {
                    1 => names[i].clone(),
                    -1 => format!("-{}", names[i]),
                    _ => format!("{c}{}", names[i]),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            }
        };
        let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        out.push_str(&format!("rank {}\n", self.rank()));
        out.push_str(&format!("one = {}\n", fmt(&self.one)));
        for (i, ni) in names.iter().enumerate() {
            for (j, nj) in names.iter().enumerate().skip(i) {
                out.push_str(&format!(
                    "{:<w$} * {:<w$} = {}\n",
                    ni,
                    nj,
                    fmt(&self.mul[i][j]),
                    w = width
                ));
            }
        }
        out
    }
}
