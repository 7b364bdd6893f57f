//! Invariant extraction and the classification decision tree, plus the
//! equivalence of (D, kappa) pairs behind endomorphism algebras.

use crate::abgroup::{split_square, AbelianGroup, GroupElement};
use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::construct::{ClassLabel, DimensionFunction, TypeKind};
use crate::division::DivisionType;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invariants are inconsistent with every type: {0}")]
    Unclassifiable(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

/// The separating invariants of a simple graded division algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantVector {
    pub dim: usize,
    pub n: u64,
    pub d: DivisionType,
    pub re_dim: usize,
    pub re_type: DivisionType,
    pub center_support_trivial: bool,
    pub exponent: u64,
    pub elementary_2: bool,
    pub group_order: u64,
}

impl std::fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim={} M_{}({}) re_dim={} re_type={} center_at_e={} exponent={} elem2={} |G|={}",
            self.dim,
            self.n,
            self.d,
            self.re_dim,
            self.re_type,
            self.center_support_trivial,
            self.exponent,
            self.elementary_2,
            self.group_order
        )
    }
}

/// Measure the invariant vector of a validated simple graded division
/// algebra. Division or simplicity failures surface as errors.
pub fn invariant_vector(alg: &GradedAlgebra) -> Result<InvariantVector, ClassifyError> {
    let rep = alg.check_division_grading()?;
    let re_type = rep.re_type.ok_or(AlgebraError::NotDivision)?;
    let (n, d) = alg.underlying_type()?;
    let center = alg.center();
    let e = alg.group().identity();
    let center_support_trivial = center.degrees.iter().all(|g| *g == e);
    let profile = alg.group().profile();
    Ok(InvariantVector {
        dim: alg.dim(),
        n,
        d,
        re_dim: rep.re_dim,
        re_type,
        center_support_trivial,
        exponent: profile.exponent,
        elementary_2: profile.is_elementary_2,
        group_order: profile.order,
    })
}

fn k_from_dim(dim: usize, base: usize) -> Option<u32> {
    if dim % base != 0 {
        return None;
    }
    let mut q = dim / base;
    let mut k = 0u32;
    while q > 1 {
        if q % 4 != 0 {
            return None;
        }
        q /= 4;
        k += 1;
    }
    Some(k)
}

/// Theorem decision tree: from the invariant vector to the class label.
pub fn classify(alg: &GradedAlgebra) -> Result<ClassLabel, ClassifyError> {
    let iv = invariant_vector(alg)?;
    let label = match iv.d {
        DivisionType::R | DivisionType::H => {
            let kind = match (iv.d, iv.re_dim) {
                (DivisionType::R, 1) => TypeKind::I,
                (DivisionType::R, 2) => TypeKind::II,
                (DivisionType::R, 4) => TypeKind::III,
                (DivisionType::H, 1) => TypeKind::IV,
                (DivisionType::H, 2) => TypeKind::V,
                (DivisionType::H, 4) => TypeKind::VI,
                _ => {
                    return Err(ClassifyError::Unclassifiable(format!(
                        "central simple with identity component of dimension {}",
                        iv.re_dim
                    )))
                }
            };
            let base = if iv.d == DivisionType::R { 1 } else { 4 };
            let k = k_from_dim(iv.dim, base)
                .ok_or_else(|| ClassifyError::Unclassifiable(format!("dimension {} has no k", iv.dim)))?;
            ClassLabel::Theorem(kind, k)
        }
        DivisionType::C => {
            if iv.center_support_trivial {
                if iv.re_dim != 2 {
                    return Err(ClassifyError::Unclassifiable(
                        "central support at e but the identity component is not C".into(),
                    ));
                }
                let h = split_square(alg.group()).ok_or_else(|| {
                    ClassifyError::Unclassifiable("Pauli support does not split as H x H".into())
                })?;
                let mut orders = h.invariant_factors();
                orders.retain(|&d| d != 0);
                if orders.is_empty() {
                    orders.push(1);
                }
                ClassLabel::Pauli(orders)
            } else {
                let kind = match (iv.re_dim, iv.exponent) {
                    (1, 2) | (1, 1) => TypeKind::VII,
                    (1, 4) => TypeKind::IX,
                    (2, 2) => TypeKind::VIII,
                    (2, 4) => TypeKind::X,
                    (4, 2) => TypeKind::XI,
                    (4, 4) => TypeKind::XII,
                    (r, e) => {
                        return Err(ClassifyError::Unclassifiable(format!(
                            "non-central case with re_dim={} exponent={}",
                            r, e
                        )))
                    }
                };
                let base = match kind {
                    TypeKind::VII | TypeKind::VIII | TypeKind::IX | TypeKind::X => 2,
                    _ => 8,
                };
                let k = k_from_dim(iv.dim, base)
                    .ok_or_else(|| ClassifyError::Unclassifiable(format!("dimension {} has no k", iv.dim)))?;
                ClassLabel::Theorem(kind, k)
            }
        }
    };
    // hard cross-check: the measured invariants must equal the label's
    if let ClassLabel::Theorem(t, k) = &label {
        if *k < t.min_k() {
            return Err(ClassifyError::Unclassifiable(format!(
                "recovered k={} below the minimum for type {}",
                k,
                t.roman()
            )));
        }
    }
    let expected = expected_invariants(&label);
    if expected != iv {
        return Err(ClassifyError::Unclassifiable(format!(
            "measured invariants [{}] disagree with type {} [{}]",
            iv, label, expected
        )));
    }
    Ok(label)
}

/// Invariant vector a label predicts, straight from its tensor normal form.
pub fn expected_invariants(label: &ClassLabel) -> InvariantVector {
    match label {
        ClassLabel::Pauli(h) => {
            let hg = AbelianGroup::new(h.clone());
            let hp = hg.profile();
            let n = hp.order;
            InvariantVector {
                dim: (2 * n * n) as usize,
                n,
                d: DivisionType::C,
                re_dim: 2,
                re_type: DivisionType::C,
                center_support_trivial: true,
                exponent: hp.exponent,
                elementary_2: hp.is_elementary_2,
                group_order: n * n,
            }
        }
        ClassLabel::Theorem(t, k) => {
            let k = *k;
            let pow4 = |e: u32| 4usize.pow(e);
            let (dim, d, re_dim, re_type) = match t {
                TypeKind::I => (pow4(k), DivisionType::R, 1, DivisionType::R),
                TypeKind::II => (pow4(k), DivisionType::R, 2, DivisionType::C),
                TypeKind::III => (pow4(k), DivisionType::R, 4, DivisionType::H),
                TypeKind::IV => (4 * pow4(k), DivisionType::H, 1, DivisionType::R),
                TypeKind::V => (4 * pow4(k), DivisionType::H, 2, DivisionType::C),
                TypeKind::VI => (4 * pow4(k), DivisionType::H, 4, DivisionType::H),
                TypeKind::VII => (2 * pow4(k), DivisionType::C, 1, DivisionType::R),
                TypeKind::VIII => (2 * pow4(k), DivisionType::C, 2, DivisionType::C),
                TypeKind::IX => (2 * pow4(k), DivisionType::C, 1, DivisionType::R),
                TypeKind::X => (2 * pow4(k), DivisionType::C, 2, DivisionType::C),
                TypeKind::XI => (8 * pow4(k), DivisionType::C, 4, DivisionType::H),
                TypeKind::XII => (8 * pow4(k), DivisionType::C, 4, DivisionType::H),
            };
            let n = match d {
                DivisionType::R => (dim as f64).sqrt() as u64,
                DivisionType::H => ((dim / 4) as f64).sqrt() as u64,
                DivisionType::C => ((dim / 2) as f64).sqrt() as u64,
            };
            let exponent = match t {
                TypeKind::IX | TypeKind::X | TypeKind::XII => 4,
                // with no graded factor at all the group is trivial
                TypeKind::I | TypeKind::VI if k == 0 => 1,
                _ => 2,
            };
            let group_order = (dim / re_dim) as u64;
            InvariantVector {
                dim,
                n,
                d,
                re_dim,
                re_type,
                center_support_trivial: matches!(
                    t,
                    TypeKind::I | TypeKind::II | TypeKind::III | TypeKind::IV | TypeKind::V | TypeKind::VI
                ),
                exponent,
                elementary_2: exponent <= 2,
                group_order,
            }
        }
    }
}

/// Equivalence of (D, kappa) pairs over the same ambient group: equal class
/// of D, equal support, and kappa matching up to a coset shift. Returns the
/// shift witness g (the permutation is then A -> A - g).
pub fn pairs_equivalent(
    p1: &DimensionFunction,
    p2: &DimensionFunction,
) -> Result<Option<GroupElement>, ClassifyError> {
    if p1.ambient() != p2.ambient() {
        return Err(ClassifyError::BadInput("ambient groups differ".into()));
    }
    let g = p1.ambient().clone();
    let h1 = p1.support_subgroup();
    let h2 = p2.support_subgroup();
    if h1 != h2 {
        return Ok(None);
    }
    let l1 = classify(&p1.d)?;
    let l2 = classify(&p2.d)?;
    if l1 != l2 || p1.d.dim() != p2.d.dim() {
        return Ok(None);
    }
    for shift in g.elements() {
        let mut moved: BTreeMap<GroupElement, u32> = BTreeMap::new();
        for (rep, &count) in &p2.kappa {
            let key = p2.canonical_rep(&g.add(rep, &shift), &h2);
            moved.insert(key, count);
        }
        if moved == p1.kappa {
            return Ok(Some(shift));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::GroupHom;
    use crate::construct::{building_block, catalog, pauli_grading, BlockName};

    #[test]
    fn invariants_of_m2_8() {
        let alg = building_block(BlockName::M2_8);
        let iv = invariant_vector(&alg).unwrap();
        assert_eq!(iv.dim, 8);
        assert_eq!(iv.n, 2);
        assert_eq!(iv.d, DivisionType::C);
        assert_eq!(iv.re_dim, 1);
        assert!(!iv.center_support_trivial);
        assert_eq!(iv.exponent, 4);
    }

    #[test]
    fn pauli_center_has_trivial_support() {
        let alg = pauli_grading(&AbelianGroup::new(vec![2]));
        let iv = invariant_vector(&alg).unwrap();
        assert!(iv.center_support_trivial);
        assert_eq!(iv.re_dim, 2);
    }

    #[test]
    fn blocks_classify_to_expected_labels() {
        let cases: Vec<(BlockName, ClassLabel)> = vec![
            (BlockName::R, ClassLabel::Theorem(TypeKind::I, 0)),
            (BlockName::C, ClassLabel::Pauli(vec![1])),
            (BlockName::C2, ClassLabel::Theorem(TypeKind::VII, 0)),
            (BlockName::H, ClassLabel::Theorem(TypeKind::VI, 0)),
            (BlockName::H2, ClassLabel::Theorem(TypeKind::V, 0)),
            (BlockName::H4, ClassLabel::Theorem(TypeKind::IV, 0)),
            (BlockName::M2_2, ClassLabel::Theorem(TypeKind::II, 1)),
            (BlockName::M2_4, ClassLabel::Theorem(TypeKind::I, 1)),
            (BlockName::M2_8, ClassLabel::Theorem(TypeKind::IX, 1)),
            (BlockName::M2CZ4, ClassLabel::Theorem(TypeKind::X, 1)),
            (BlockName::M4_4, ClassLabel::Theorem(TypeKind::III, 2)),
            (BlockName::M4_32, ClassLabel::Theorem(TypeKind::IX, 2)),
            (BlockName::M4CZ4Z2Z2, ClassLabel::Theorem(TypeKind::X, 2)),
        ];
        for (name, expect) in cases {
            let alg = building_block(name);
            let got = classify(&alg).unwrap();
            assert_eq!(got, expect, "block {:?}", name);
        }
    }

    #[test]
    fn coarsened_m2_8_is_type_x() {
        let fine = building_block(BlockName::M2_8);
        let beta = fine.group().element(vec![0, 1]).unwrap();
        let (_, proj) = fine.group().quotient_by(&[beta]);
        let alg = fine.coarsen(&proj).unwrap();
        assert_eq!(classify(&alg).unwrap(), ClassLabel::Theorem(TypeKind::X, 1));
    }

    #[test]
    fn non_division_input_is_refused() {
        let m2 = building_block(BlockName::M2_4);
        let (_, proj) = m2.group().quotient_by(&[
            m2.group().element(vec![1, 0]).unwrap(),
            m2.group().element(vec![0, 1]).unwrap(),
        ]);
        let trivial = m2.coarsen(&proj).unwrap();
        assert!(matches!(
            classify(&trivial),
            Err(ClassifyError::Algebra(AlgebraError::NotDivision))
        ));
    }

    #[test]
    fn catalog_entries_match_predicted_invariants() {
        let labels = [
            ClassLabel::Theorem(TypeKind::I, 2),
            ClassLabel::Theorem(TypeKind::IV, 1),
            ClassLabel::Theorem(TypeKind::IX, 2),
            ClassLabel::Theorem(TypeKind::XI, 0),
            ClassLabel::Pauli(vec![3]),
        ];
        for label in labels {
            let alg = catalog(&label).unwrap();
            let measured = invariant_vector(&alg).unwrap();
            assert_eq!(measured, expected_invariants(&label), "label {}", label);
            assert_eq!(classify(&alg).unwrap(), label);
        }
    }

    fn shift_pair(kappa: &[(Vec<u64>, u32)]) -> DimensionFunction {
        let d = building_block(BlockName::R);
        let g = AbelianGroup::new(vec![2]);
        let embed = GroupHom::new(d.group().clone(), g.clone(), vec![g.identity()]).unwrap();
        let kappa = kappa
            .iter()
            .map(|(res, c)| (g.element(res.clone()).unwrap(), *c))
            .collect();
        DimensionFunction { d, embed, kappa }
    }

    #[test]
    fn pair_equivalence_shift_search() {
        let p1 = shift_pair(&[(vec![0], 1), (vec![1], 2)]);
        let p2 = shift_pair(&[(vec![0], 2), (vec![1], 1)]);
        let w = pairs_equivalent(&p1, &p2).unwrap();
        assert_eq!(w, Some(p1.ambient().element(vec![1]).unwrap()));
        // multiset mismatch
        let p3 = shift_pair(&[(vec![0], 1), (vec![1], 1)]);
        assert_eq!(pairs_equivalent(&p1, &p3).unwrap(), None);
        // reflexive with the identity witness
        let w = pairs_equivalent(&p1, &p1).unwrap();
        assert_eq!(w, Some(p1.ambient().identity()));
    }
}
