//! Property tests for the structural invariants: field axioms of the scalar
//! arithmetic, dimension laws of division gradings, relabeling invariance of
//! the classification, canonical serialization round trips, and the division
//! criterion for tensor products.

use gda::abgroup::AbelianGroup;
use gda::algebra::Subalgebra;
use gda::classify::classify;
use gda::construct::{building_block, from_presentation, BlockName, Presentation, ALL_BLOCKS};
use gda::format::{read_algebra, write_algebra};
use gda::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn scalar_strategy(conductor: u64) -> impl Strategy<Value = Scalar> {
    let deg = Scalar::degree(conductor);
    proptest::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |coeffs| {
        let v: Vec<BigRational> = coeffs
            .into_iter()
            .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect();
        Scalar::from_coeffs(conductor, v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar_strategy(8), b in scalar_strategy(8), c in scalar_strategy(24)) {
        // associativity and distributivity across mixed conductors
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        // conjugation is an involutive automorphism
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn real_squares_are_positive(a in scalar_strategy(8)) {
        let r = a.add(&a.conj()); // totally real
        if !r.is_zero() {
            prop_assert_eq!(r.mul(&r).real_sign().unwrap(), 1);
        }
    }

    #[test]
    fn coercion_commutes_with_arithmetic(a in scalar_strategy(8), b in scalar_strategy(8)) {
        prop_assert_eq!(a.mul(&b).promote(24), a.promote(24).mul(&b.promote(24)));
        prop_assert_eq!(a.add(&b).promote(40), a.promote(40).add(&b.promote(40)));
    }
}

/// Random consistent presentations: +-1 power scalars and +-1 commutation
/// signs over small elementary-type groups.
fn presentation_strategy() -> impl Strategy<Value = Presentation> {
    (1usize..=3).prop_flat_map(|r| {
        let orders = proptest::collection::vec(prop_oneof![Just(2u64), Just(4u64)], r);
        let signs = proptest::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], r);
        let comms = proptest::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], r * r);
        (orders, signs, comms).prop_map(move |(orders, signs, comms)| {
            let group = AbelianGroup::new(orders.clone());
            let degrees = (0..r).map(|i| group.generator(i)).collect();
            let comm = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            if i == j {
                                Scalar::one(8)
                            } else {
                                // symmetric sign choice keeps c_ij c_ji = 1
                                let s = comms[i.min(j) * r + i.max(j)];
                                Scalar::from_integer(8, s)
                            }
                        })
                        .collect()
                })
                .collect();
            Presentation {
                group,
                degrees,
                powers: orders,
                power_scalars: signs.iter().map(|&s| Scalar::from_integer(8, s)).collect(),
                comm,
                conductor: 8,
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn presentation_algebras_validate_and_round_trip(p in presentation_strategy()) {
        let alg = from_presentation(&p).unwrap();
        let report = alg.validate();
        prop_assert!(report.grading_ok && report.unit_ok && report.assoc_ok);
        let s1 = write_algebra(&alg);
        let back = read_algebra(&s1).unwrap();
        let s2 = write_algebra(&back);
        prop_assert_eq!(s1, s2);
    }
}

#[test]
fn dimension_laws_on_blocks() {
    for name in ALL_BLOCKS {
        let alg = building_block(name);
        let re_dim = alg.identity_component().dim();
        let support = alg.support();
        for g in &support {
            assert_eq!(alg.component_indices(g).len(), re_dim, "{:?} at {:?}", name, g);
        }
        assert_eq!(alg.dim(), support.len() * re_dim, "{:?}", name);
    }
}

#[test]
fn classification_is_relabeling_invariant() {
    // applying a group automorphism to the degrees must not change the label
    let cases = [
        building_block(BlockName::M2_4),
        building_block(BlockName::M2_8),
        building_block(BlockName::H4),
        building_block(BlockName::M4_4),
        building_block(BlockName::M2_4).tensor_product(&building_block(BlockName::M2_4)),
    ];
    for alg in &cases {
        let base = classify(alg).unwrap();
        let auts = alg.group().automorphisms(256).unwrap();
        // exhaustive for small groups, sampled for order 16
        let step = if auts.len() > 300 { auts.len() / 100 } else { 1 };
        for aut in auts.iter().step_by(step) {
            let relabeled = alg.coarsen(aut).unwrap();
            assert_eq!(classify(&relabeled).unwrap(), base);
        }
    }
}

#[test]
fn coarsenings_stay_valid() {
    let alg = building_block(BlockName::M2_4).tensor_product(&building_block(BlockName::C2));
    let g = alg.group().clone();
    for kill_idx in 1..g.order() {
        let kill = g.element_at(kill_idx as usize);
        let (_, proj) = g.quotient_by(&[kill]);
        let c = alg.coarsen(&proj).unwrap();
        let report = c.validate();
        assert!(report.pass, "kill {:?}: {:?}", kill_idx, report.witness);
        // support of the coarsening is the image of the support
        let mut image: Vec<_> = alg.support().iter().map(|s| proj.apply(s)).collect();
        image.sort();
        image.dedup();
        assert_eq!(c.support(), image);
    }
}

#[test]
fn tensor_division_iff_identity_components_divide() {
    let blocks =
        [BlockName::C2, BlockName::H2, BlockName::H, BlockName::M2_2, BlockName::M2_4, BlockName::C];
    for a_name in blocks {
        for b_name in blocks {
            let a = building_block(a_name);
            let b = building_block(b_name);
            let t = a.tensor_product(&b);
            let t_div = t.check_division_grading().unwrap().is_division;
            // identity components tensored as a standalone algebra
            let ae = a.subalgebra_to_algebra(&a.identity_component()).unwrap();
            let be = b.subalgebra_to_algebra(&b.identity_component()).unwrap();
            let ee = ae.tensor_product(&be);
            let full = Subalgebra {
                basis: (0..ee.dim()).map(|i| ee.basis_vec(i)).collect(),
                degrees: ee.degrees().to_vec(),
            };
            let expected = ee.recognize_division(&full).unwrap().is_some();
            assert_eq!(
                t_div, expected,
                "{:?} x {:?}: division {} but identity tensor verdict {}",
                a_name, b_name, t_div, expected
            );
        }
    }
}

#[test]
fn quaternion_tensor_complex_is_division_not_simple_free() {
    // H^(4) x C^(2): dim 8 over Z2^3, a division grading on M_2(C)
    let t = building_block(BlockName::H4).tensor_product(&building_block(BlockName::C2));
    assert_eq!(t.dim(), 8);
    assert_eq!(t.group().orders(), &[2, 2, 2]);
    let rep = t.check_division_grading().unwrap();
    assert!(rep.is_division);
    assert!(t.is_simple());
}
