//! Trace-form signatures and recognition of R, C, H: the exact machinery
//! behind division checks, simplicity tests and the (n, D) invariant.
//!
//! The bilinear form is B(x, y) = trace of left multiplication by xy. On a
//! group-graded algebra tr(L_z) vanishes for homogeneous z of nontrivial
//! degree, so the Gram matrix pairs component g only with component g^{-1};
//! the signature is assembled from small diagonal blocks and hyperbolic
//! pairs instead of one dense congruence pass.

use crate::algebra::{AlgebraError, GradedAlgebra, Subalgebra};
use crate::linalg::{rank, TrackedSpan};
use crate::scalar::Scalar;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisionType {
    R,
    C,
    H,
}

impl fmt::Display for DivisionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisionType::R => write!(f, "R"),
            DivisionType::C => write!(f, "C"),
            DivisionType::H => write!(f, "H"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigReport {
    pub signature: i64,
    pub positive: usize,
    pub negative: usize,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionReport {
    pub is_division: bool,
    pub re_dim: usize,
    pub re_type: Option<DivisionType>,
}

/// Symmetric congruence diagonalization over totally real scalars, with
/// hyperbolic handling of all-zero diagonals. Returns (positive, negative,
/// nondegenerate).
pub(crate) fn sym_signature(mut m: Vec<Vec<Scalar>>) -> Result<(usize, usize, bool), AlgebraError> {
    let n = m.len();
    for row in &m {
        for c in row {
            if !c.is_real() {
                return Err(AlgebraError::Internal("non-real Gram entry".into()));
            }
        }
    }
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut t = 0usize;
    while t < n {
        if let Some(k) = (t..n).find(|&k| !m[k][k].is_zero()) {
            m.swap(t, k);
            for row in m.iter_mut() {
                row.swap(t, k);
            }
            let s = m[t][t].real_sign()?;
            if s > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
            let inv = m[t][t].inv()?;
            for i in (t + 1)..n {
                if !m[i][t].is_zero() {
                    let f = m[i][t].mul(&inv);
                    for j in 0..n {
                        if !m[t][j].is_zero() {
                            m[i][j] = m[i][j].sub(&f.mul(&m[t][j]));
                        }
                    }
                    for r in 0..n {
                        if !m[r][t].is_zero() {
                            let sub = f.mul(&m[r][t]);
                            m[r][i] = m[r][i].sub(&sub);
                        }
                    }
                }
            }
            t += 1;
        } else {
            // all diagonal entries vanish; look for an off-diagonal pivot
            let mut found = None;
            'scan: for k in t..n {
                for l in (k + 1)..n {
                    if !m[k][l].is_zero() {
                        found = Some((k, l));
                        break 'scan;
                    }
                }
            }
            match found {
                Some((k, l)) => {
                    // row/col k += row/col l turns the zero diagonal at k into
                    // 2*m[k][l] != 0
                    for j in 0..n {
                        let v = m[l][j].clone();
                        m[k][j] = m[k][j].add(&v);
                    }
                    for row in m.iter_mut() {
                        let v = row[l].clone();
                        row[k] = row[k].add(&v);
                    }
                }
                None => {
                    // remaining block is identically zero
                    return Ok((pos, neg, false));
                }
            }
        }
    }
    Ok((pos, neg, true))
}

impl GradedAlgebra {
    /// Signature and nondegeneracy of B(x, y) = tr L_{xy} on the whole
    /// algebra, assembled blockwise along the grading.
    pub fn trace_form_signature(&self) -> Result<SigReport, AlgebraError> {
        let tr = self.trace_vector();
        let support = self.support();
        let mut pos = 0usize;
        let mut neg = 0usize;
        let mut nondeg = true;
        let mut done: BTreeSet<&crate::abgroup::GroupElement> = BTreeSet::new();
        let support_set: BTreeSet<&crate::abgroup::GroupElement> = support.iter().collect();
        for g in &support {
            if done.contains(g) {
                continue;
            }
            let ginv = self.group().neg(g);
            let idx_g = self.component_indices(g);
            if &ginv == g {
                let block = self.gram_block(&idx_g, &idx_g, &tr)?;
                let (p, n, nd) = sym_signature(block)?;
                pos += p;
                neg += n;
                nondeg &= nd;
                done.insert(g);
            } else if support_set.contains(&ginv) {
                let idx_h = self.component_indices(&ginv);
                let block = self.gram_block(&idx_g, &idx_h, &tr)?;
                let r = rank(&block, idx_h.len(), self.conductor());
                pos += r;
                neg += r;
                nondeg &= r == idx_g.len() && r == idx_h.len();
                done.insert(g);
                let inv_ref = support.iter().find(|x| **x == ginv).unwrap();
                done.insert(inv_ref);
            } else {
                // g^{-1} carries no component: R_g lies in the radical
                nondeg = false;
                done.insert(g);
            }
        }
        Ok(SigReport { signature: pos as i64 - neg as i64, positive: pos, negative: neg, nondegenerate: nondeg })
    }

    fn gram_block(
        &self,
        rows: &[usize],
        cols: &[usize],
        tr: &[Scalar],
    ) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
        let mut out = Vec::with_capacity(rows.len());
        for &a in rows {
            let mut row = Vec::with_capacity(cols.len());
            for &b in cols {
                let mut acc = Scalar::zero(self.conductor());
                for (k, c) in self.entry(a, b) {
                    acc = acc.add(&c.mul(&tr[*k as usize]));
                }
                if !acc.is_real() {
                    return Err(AlgebraError::Internal(format!(
                        "non-real Gram entry at basis pair ({}, {})",
                        a, b
                    )));
                }
                row.push(acc);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Gram matrix of the trace form of a subalgebra, computed on the
    /// subalgebra itself (left multiplication acting on its own basis).
    pub fn subalgebra_gram(&self, sub: &Subalgebra) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
        let k = sub.dim();
        let tracked = TrackedSpan::from_basis(&sub.basis, self.dim(), self.conductor());
        // coordinates of all pairwise products
        let mut coords = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let p = self.multiply(&sub.basis[i], &sub.basis[j])?;
                coords[i][j] = tracked
                    .coords(&p)
                    .ok_or_else(|| AlgebraError::BadInput("subalgebra is not closed".into()))?;
            }
        }
        // trace of left multiplication by basis m
        let mut trl = vec![Scalar::zero(self.conductor()); k];
        for m in 0..k {
            for j in 0..k {
                trl[m] = trl[m].add(&coords[m][j][j]);
            }
        }
        let mut gram = vec![vec![Scalar::zero(self.conductor()); k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = Scalar::zero(self.conductor());
                for m in 0..k {
                    if !coords[i][j][m].is_zero() {
                        acc = acc.add(&coords[i][j][m].mul(&trl[m]));
                    }
                }
                gram[i][j] = acc;
            }
        }
        Ok(gram)
    }

    pub fn subalgebra_signature(&self, sub: &Subalgebra) -> Result<SigReport, AlgebraError> {
        let gram = self.subalgebra_gram(sub)?;
        let (pos, neg, nondeg) = sym_signature(gram)?;
        Ok(SigReport { signature: pos as i64 - neg as i64, positive: pos, negative: neg, nondegenerate: nondeg })
    }

    /// Recognize a subalgebra of dimension 1, 2 or 4 as R, C or H; other
    /// dimensions and split algebras return None.
    pub fn recognize_division(&self, sub: &Subalgebra) -> Result<Option<DivisionType>, AlgebraError> {
        match sub.dim() {
            1 => Ok(Some(DivisionType::R)),
            2 => {
                let sig = self.subalgebra_signature(sub)?;
                Ok((sig.nondegenerate && sig.signature == 0).then_some(DivisionType::C))
            }
            4 => {
                let sig = self.subalgebra_signature(sub)?;
                if !sig.nondegenerate || sig.signature != -2 {
                    return Ok(None);
                }
                let alg = match self.subalgebra_to_algebra(sub) {
                    Ok(a) => a,
                    Err(_) => return Ok(None),
                };
                Ok((alg.center().dim() == 1).then_some(DivisionType::H))
            }
            _ => Ok(None),
        }
    }

    /// Division-grading verdict: the identity component must be R, C or H and
    /// every component must share its dimension.
    pub fn check_division_grading(&self) -> Result<DivisionReport, AlgebraError> {
        let re = self.identity_component();
        let re_dim = re.dim();
        let uniform = self.component_dims_uniform();
        let rec = self.recognize_division(&re)?;
        let re_type = if uniform { rec } else { None };
        Ok(DivisionReport { is_division: re_type.is_some(), re_dim, re_type })
    }

    /// (n, D) with the underlying algebra isomorphic to M_n(D). Fails with
    /// NotSemisimple on a degenerate trace form and NotSimple when the center
    /// is not R or C.
    pub fn underlying_type(&self) -> Result<(u64, DivisionType), AlgebraError> {
        let sig = self.trace_form_signature()?;
        if !sig.nondegenerate {
            return Err(AlgebraError::NotSemisimple);
        }
        let z = self.center();
        let dim = self.dim() as u64;
        match z.dim() {
            1 => {
                if sig.signature > 0 {
                    let n = exact_sqrt(dim)
                        .ok_or_else(|| AlgebraError::NotSimple("dimension is not a square".into()))?;
                    Ok((n, DivisionType::R))
                } else if sig.signature < 0 {
                    if dim % 4 != 0 {
                        return Err(AlgebraError::NotSimple("dimension not divisible by 4".into()));
                    }
                    let n = exact_sqrt(dim / 4)
                        .ok_or_else(|| AlgebraError::NotSimple("dimension is not 4 n^2".into()))?;
                    Ok((n, DivisionType::H))
                } else {
                    Err(AlgebraError::NotSimple("central algebra with zero signature".into()))
                }
            }
            2 => {
                if self.recognize_division(&z)? != Some(DivisionType::C) {
                    return Err(AlgebraError::NotSimple("two-dimensional split center".into()));
                }
                if dim % 2 != 0 {
                    return Err(AlgebraError::NotSimple("dimension not divisible by 2".into()));
                }
                let n = exact_sqrt(dim / 2)
                    .ok_or_else(|| AlgebraError::NotSimple("dimension is not 2 n^2".into()))?;
                Ok((n, DivisionType::C))
            }
            d => Err(AlgebraError::NotSimple(format!("center has dimension {}", d))),
        }
    }

    pub fn is_simple(&self) -> bool {
        self.underlying_type().is_ok()
    }
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    for c in r.saturating_sub(1)..=r + 1 {
        if c * c == n {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::AbelianGroup;
    use crate::algebra::AlgebraBuilder;

    /// C = span{1, i} as a real algebra, trivially graded.
    fn complex_algebra() -> GradedAlgebra {
        let group = AbelianGroup::trivial();
        let degrees = vec![group.identity(), group.identity()];
        let mut b = AlgebraBuilder::new(group, degrees, 8);
        let one = Scalar::one(8);
        b.set_product(0, 0, vec![(0, one.clone())]);
        b.set_product(0, 1, vec![(1, one.clone())]);
        b.set_product(1, 0, vec![(1, one.clone())]);
        b.set_product(1, 1, vec![(0, Scalar::from_integer(8, -1))]);
        b.set_unit(vec![one, Scalar::zero(8)]);
        b.build()
    }

    /// H = span{1, i, j, k}, trivially graded.
    fn quaternions() -> GradedAlgebra {
        let group = AbelianGroup::trivial();
        let degrees = vec![group.identity(); 4];
        let mut b = AlgebraBuilder::new(group, degrees, 8);
        let p = |k: usize, s: i64| vec![(k, Scalar::from_integer(8, s))];
        // 1, i, j, k
        b.set_product(0, 0, p(0, 1));
        b.set_product(0, 1, p(1, 1));
        b.set_product(0, 2, p(2, 1));
        b.set_product(0, 3, p(3, 1));
        b.set_product(1, 0, p(1, 1));
        b.set_product(2, 0, p(2, 1));
        b.set_product(3, 0, p(3, 1));
        b.set_product(1, 1, p(0, -1));
        b.set_product(2, 2, p(0, -1));
        b.set_product(3, 3, p(0, -1));
        b.set_product(1, 2, p(3, 1));
        b.set_product(2, 1, p(3, -1));
        b.set_product(2, 3, p(1, 1));
        b.set_product(3, 2, p(1, -1));
        b.set_product(3, 1, p(2, 1));
        b.set_product(1, 3, p(2, -1));
        let mut unit = vec![Scalar::zero(8); 4];
        unit[0] = Scalar::one(8);
        b.set_unit(unit);
        b.build()
    }

    #[test]
    fn signatures_of_small_algebras() {
        let c = complex_algebra();
        assert!(c.validate().pass);
        let sig = c.trace_form_signature().unwrap();
        assert_eq!((sig.signature, sig.nondegenerate), (0, true));

        let h = quaternions();
        assert!(h.validate().pass);
        let sig = h.trace_form_signature().unwrap();
        assert_eq!((sig.signature, sig.nondegenerate), (-2, true));

        let m2 = crate::algebra::tests::m2_by_matrices();
        let sig = m2.trace_form_signature().unwrap();
        assert_eq!((sig.signature, sig.nondegenerate), (2, true));
    }

    #[test]
    fn underlying_types() {
        assert_eq!(quaternions().underlying_type().unwrap(), (1, DivisionType::H));
        assert_eq!(complex_algebra().underlying_type().unwrap(), (1, DivisionType::C));
        let m2 = crate::algebra::tests::m2_by_matrices();
        assert_eq!(m2.underlying_type().unwrap(), (2, DivisionType::R));
    }

    #[test]
    fn recognize_split_dim2() {
        // span{I, A} in M2(R): A^2 = I gives the split algebra R + R
        let m2 = crate::algebra::tests::m2_by_matrices();
        let sub = m2.graded_subalgebra(&[m2.basis_vec(1)]).unwrap();
        assert_eq!(sub.dim(), 2);
        assert_eq!(m2.recognize_division(&sub).unwrap(), None);
        // span{I, C}: C^2 = -I is a copy of C
        let sub = m2.graded_subalgebra(&[m2.basis_vec(3)]).unwrap();
        assert_eq!(m2.recognize_division(&sub).unwrap(), Some(DivisionType::C));
    }

    #[test]
    fn division_reports() {
        let m2 = crate::algebra::tests::m2_by_matrices();
        let rep = m2.check_division_grading().unwrap();
        assert_eq!(rep, DivisionReport { is_division: true, re_dim: 1, re_type: Some(DivisionType::R) });
        // trivial grading on M2(R): identity component is everything
        let (_, proj) = m2.group().quotient_by(&[
            m2.group().element(vec![1, 0]).unwrap(),
            m2.group().element(vec![0, 1]).unwrap(),
        ]);
        let t = m2.coarsen(&proj).unwrap();
        let rep = t.check_division_grading().unwrap();
        assert_eq!(rep, DivisionReport { is_division: false, re_dim: 4, re_type: None });
    }

    #[test]
    fn nilpotent_algebra_is_degenerate() {
        // 2-dim algebra 1, x with x^2 = 0: trace form is degenerate
        let group = AbelianGroup::trivial();
        let degrees = vec![group.identity(), group.identity()];
        let mut b = AlgebraBuilder::new(group, degrees, 8);
        let one = Scalar::one(8);
        b.set_product(0, 0, vec![(0, one.clone())]);
        b.set_product(0, 1, vec![(1, one.clone())]);
        b.set_product(1, 0, vec![(1, one.clone())]);
        b.set_product(1, 1, vec![]);
        b.set_unit(vec![one, Scalar::zero(8)]);
        let a = b.build();
        assert!(a.validate().pass);
        let sig = a.trace_form_signature().unwrap();
        assert!(!sig.nondegenerate);
        assert!(matches!(a.underlying_type(), Err(AlgebraError::NotSemisimple)));
    }
}
