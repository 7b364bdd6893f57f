//! Frames (one distinguished basis vector per support element) and the
//! commutation data they induce: squares and the skew-symmetric sigma table
//! with bimultiplicativity and nonsingularity checks.

use crate::abgroup::GroupElement;
use crate::algebra::{AlgebraError, Frame, GradedAlgebra};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct CommutationData {
    pub support: Vec<GroupElement>,
    /// u_g^2 = squares[g] * u_{g^2} (so squares[g] * I when g has order 2).
    pub squares: BTreeMap<GroupElement, Scalar>,
    /// u_g u_h = sigma[(g, h)] * u_h u_g.
    pub sigma: BTreeMap<(GroupElement, GroupElement), Scalar>,
    pub skew: bool,
    pub roots_of_unity: bool,
    pub bimultiplicative: bool,
    pub nonsingular: bool,
}

impl Frame {
    /// Real monomial frame: every component one-dimensional, the unit itself a
    /// basis vector.
    fn infer_real(alg: &GradedAlgebra) -> Result<Frame, AlgebraError> {
        let mut reps = BTreeMap::new();
        let unit_idx = unit_basis_index(alg)
            .ok_or_else(|| AlgebraError::NotMonomial("unit is not a basis monomial".into()))?;
        for g in alg.support() {
            let idx = alg.component_indices(&g);
            if idx.len() != 1 {
                return Err(AlgebraError::NotMonomial(format!(
                    "component of degree {:?} has dimension {}",
                    g.residues,
                    idx.len()
                )));
            }
            reps.insert(g, idx[0]);
        }
        debug_assert_eq!(reps[&alg.group().identity()], unit_idx);
        Ok(Frame { reps, imag: None })
    }

    /// Complex frame: two-dimensional components spanned over a central J in
    /// the identity component with J^2 = -I.
    fn infer_complex(alg: &GradedAlgebra) -> Result<Frame, AlgebraError> {
        let unit_idx = unit_basis_index(alg)
            .ok_or_else(|| AlgebraError::NotMonomial("unit is not a basis monomial".into()))?;
        let center = alg.center();
        let e = alg.group().identity();
        let minus_unit: Vec<Scalar> = alg.unit().iter().map(|c| c.neg()).collect();
        let mut j_vec: Option<Vec<Scalar>> = None;
        for (v, d) in center.basis.iter().zip(&center.degrees) {
            if *d != e {
                continue;
            }
            let sq = alg.multiply(v, v)?;
            if sq == minus_unit {
                j_vec = Some(v.clone());
                break;
            }
            // the echelon basis may present iI shifted by a multiple of I
            let coords_unit = v[unit_idx].clone();
            if !coords_unit.is_zero() {
                let mut w = v.clone();
                w[unit_idx] = w[unit_idx].sub(&coords_unit);
                let sq = alg.multiply(&w, &w)?;
                if sq == minus_unit {
                    j_vec = Some(w);
                    break;
                }
            }
        }
        let j = j_vec.ok_or_else(|| {
            AlgebraError::NotMonomial("no central square root of -I in the identity component".into())
        })?;
        let js = alg.sparsify(&j);
        let mut imag: Vec<(usize, Scalar)> = Vec::with_capacity(alg.dim());
        for b in 0..alg.dim() {
            let prod = alg.mul_sparse_basis(&js, b);
            if prod.len() != 1 {
                return Err(AlgebraError::NotMonomial(format!(
                    "J * b{} is not a single basis term",
                    b
                )));
            }
            imag.push((prod[0].0, prod[0].1.clone()));
        }
        let mut reps = BTreeMap::new();
        for g in alg.support() {
            let idx = alg.component_indices(&g);
            if idx.len() != 2 {
                return Err(AlgebraError::NotMonomial(format!(
                    "component of degree {:?} has dimension {}",
                    g.residues,
                    idx.len()
                )));
            }
            // prefer the unit in the identity component, else the least index
            // that is not the J-image of the other
            let rep = if g == e { unit_idx } else { idx[0] };
            reps.insert(g, rep);
        }
        Ok(Frame { reps, imag: Some(imag) })
    }

    pub fn infer(alg: &GradedAlgebra) -> Result<Frame, AlgebraError> {
        let e_dim = alg.component_indices(&alg.group().identity()).len();
        match e_dim {
            1 => Frame::infer_real(alg),
            2 => Frame::infer_complex(alg),
            d => Err(AlgebraError::NotMonomial(format!(
                "identity component has dimension {}, no centroid frame",
                d
            ))),
        }
    }
}

fn unit_basis_index(alg: &GradedAlgebra) -> Option<usize> {
    let mut idx = None;
    for (i, c) in alg.unit().iter().enumerate() {
        if c.is_one() && idx.is_none() {
            idx = Some(i);
        } else if !c.is_zero() {
            return None;
        }
    }
    idx
}

impl GradedAlgebra {
    /// The frame recorded by the construction, or one inferred from the
    /// component structure.
    pub fn frame(&self) -> Result<Frame, AlgebraError> {
        match &self.frame_hint() {
            Some(f) => Ok((*f).clone()),
            None => Frame::infer(self),
        }
    }

    /// Coefficient of a product of frame vectors against the frame vector of
    /// the target component, through the centroid for complex frames.
    fn frame_coefficient(
        &self,
        frame: &Frame,
        prod: &[(usize, Scalar)],
        target: &GroupElement,
    ) -> Result<Scalar, AlgebraError> {
        let rep = *frame
            .reps
            .get(target)
            .ok_or_else(|| AlgebraError::NotMonomial("product lands outside the support".into()))?;
        let mut acc = Scalar::zero(self.conductor());
        for (k, c) in prod {
            if *k == rep {
                acc = acc.add(c);
            } else if let Some(imag) = &frame.imag {
                let (m, cm) = &imag[rep];
                if k == m {
                    // b_m = (1/cm) * J * u_target
                    let i = Scalar::i_unit(self.conductor());
                    acc = acc.add(&c.mul(&i).mul(&cm.inv()?));
                } else {
                    return Err(AlgebraError::NotMonomial(format!(
                        "product has a term at b{} outside the centroid line of the target",
                        k
                    )));
                }
            } else {
                return Err(AlgebraError::NotMonomial(format!(
                    "product has a term at b{} outside the frame line",
                    k
                )));
            }
        }
        Ok(acc)
    }

    /// Squares and commutation table of the frame, with the structural checks
    /// of a skew-symmetric bicharacter.
    pub fn commutation_data(&self, frame: Option<&Frame>) -> Result<CommutationData, AlgebraError> {
        let owned;
        let frame = match frame {
            Some(f) => f,
            None => {
                owned = self.frame()?;
                &owned
            }
        };
        let support = self.support();
        let n = support.len();
        let mut lambda = vec![Scalar::zero(self.conductor()); n * n];
        let pos: BTreeMap<&GroupElement, usize> =
            support.iter().enumerate().map(|(p, g)| (g, p)).collect();
        for (a, g) in support.iter().enumerate() {
            for (b, h) in support.iter().enumerate() {
                let fg = frame.reps[g];
                let fh = frame.reps[h];
                let prod: Vec<(usize, Scalar)> = self
                    .entry(fg, fh)
                    .iter()
                    .map(|(k, c)| (*k as usize, (**c).clone()))
                    .collect();
                let target = self.group().add(g, h);
                let c = self.frame_coefficient(frame, &prod, &target)?;
                if c.is_zero() {
                    return Err(AlgebraError::NotMonomial(
                        "frame product vanishes; not a division frame".into(),
                    ));
                }
                lambda[a * n + b] = c;
            }
        }
        let mut squares = BTreeMap::new();
        let mut sigma = BTreeMap::new();
        let mut skew = true;
        let mut roots = true;
        let exponent = self.group().profile().exponent;
        for (a, g) in support.iter().enumerate() {
            squares.insert(g.clone(), lambda[a * n + a].clone());
            for (b, h) in support.iter().enumerate() {
                let s = lambda[a * n + b].div(&lambda[b * n + a])?;
                if !s.pow(exponent).is_one() {
                    roots = false;
                }
                sigma.insert((g.clone(), h.clone()), s);
            }
        }
        // sigma(g,h) * sigma(h,g) = 1
        for g in &support {
            for h in &support {
                let s1 = &sigma[&(g.clone(), h.clone())];
                let s2 = &sigma[&(h.clone(), g.clone())];
                if !s1.mul(s2).is_one() {
                    skew = false;
                }
            }
        }
        // bimultiplicativity on the full support
        let sig_at = |a: usize, b: usize| -> Scalar {
            sigma[&(support[a].clone(), support[b].clone())].clone()
        };
        let mut bimult = true;
        'bi: for a in 0..n {
            for a2 in 0..n {
                let sum = self.group().add(&support[a], &support[a2]);
                let sa = pos[&sum];
                for b in 0..n {
                    let lhs = sig_at(sa, b);
                    let rhs = sig_at(a, b).mul(&sig_at(a2, b));
                    if lhs != rhs {
                        bimult = false;
                        break 'bi;
                    }
                }
            }
        }
        let e = self.group().identity();
        let mut nonsingular = true;
        for g in &support {
            if *g == e {
                continue;
            }
            if support.iter().all(|h| sigma[&(g.clone(), h.clone())].is_one()) {
                nonsingular = false;
            }
        }
        Ok(CommutationData {
            support,
            squares,
            sigma,
            skew,
            roots_of_unity: roots,
            bimultiplicative: bimult,
            nonsingular,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::m2_by_matrices;

    #[test]
    fn m2_commutation_data() {
        let r = m2_by_matrices();
        let data = r.commutation_data(None).unwrap();
        assert!(data.skew && data.roots_of_unity && data.bimultiplicative && data.nonsingular);
        let g = r.group();
        let alpha = g.element(vec![1, 0]).unwrap();
        let beta = g.element(vec![0, 1]).unwrap();
        let gamma = g.element(vec![1, 1]).unwrap();
        let minus_one = Scalar::from_integer(8, -1);
        assert_eq!(data.sigma[&(alpha.clone(), beta.clone())], minus_one);
        assert_eq!(data.squares[&alpha], Scalar::one(8));
        assert_eq!(data.squares[&beta], Scalar::one(8));
        assert_eq!(data.squares[&gamma], minus_one);
        // sigma(g, g) = 1
        for g in &data.support {
            assert!(data.sigma[&(g.clone(), g.clone())].is_one());
        }
    }

    #[test]
    fn noncentral_centroid_is_rejected() {
        // coarsening M2 along gamma gives R_e = <I, C>; C squares to -I but is
        // not central, so there is no centroid frame to infer and the request
        // is rejected rather than guessed.
        let r = m2_by_matrices();
        let gamma = r.group().element(vec![1, 1]).unwrap();
        let (_, proj) = r.group().quotient_by(&[gamma]);
        let c = r.coarsen(&proj).unwrap();
        assert!(matches!(c.frame(), Err(crate::algebra::AlgebraError::NotMonomial(_))));
    }
}
