//! Weak isomorphisms: verification of explicit graded maps, the equivalences
//! carried by the source text as changes of generators, and a complete
//! backtracking search for monomial weak isomorphisms over a finite scalar
//! set.

use crate::abgroup::{AbelianGroup, GroupElement, GroupError, GroupHom};
use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::construct::{from_presentation, ConstructError, Presentation};
use crate::scalar::Scalar;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("not a monomial frame: {0}")]
    NotMonomial(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// A candidate weak isomorphism: a group isomorphism on supports plus the
/// image of every basis vector.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub alpha: GroupHom,
    pub images: Vec<Vec<Scalar>>,
}

impl GradedMap {
    /// Linear extension applied to a coordinate vector of the source.
    pub fn apply(&self, b: &GradedAlgebra, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = b.zero_vec();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, w) in self.images[i].iter().enumerate() {
                if !w.is_zero() {
                    out[j] = out[j].add(&c.mul(w));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct MapReport {
    pub pass: bool,
    pub group_iso: bool,
    pub graded: bool,
    pub real_coords: bool,
    pub bijective: bool,
    pub unit_ok: bool,
    pub multiplicative: bool,
    pub witness: Option<String>,
}

/// Check every requirement of a weak isomorphism; the first failure is
/// reported as a witness.
pub fn verify_graded_map(a: &GradedAlgebra, b: &GradedAlgebra, f: &GradedMap) -> MapReport {
    let mut witness: Option<String> = None;
    let fail = |w: &mut Option<String>, msg: String| {
        if w.is_none() {
            *w = Some(msg);
        }
    };
    let dims_ok = a.dim() == b.dim() && f.images.len() == a.dim();
    if !dims_ok {
        return MapReport {
            pass: false,
            group_iso: false,
            graded: false,
            real_coords: false,
            bijective: false,
            unit_ok: false,
            multiplicative: false,
            witness: Some("dimension mismatch".into()),
        };
    }
    let group_iso = f.alpha.domain == *a.group()
        && f.alpha.codomain == *b.group()
        && f.alpha.is_bijective();
    if !group_iso {
        fail(&mut witness, "alpha is not an isomorphism of the grading groups".into());
    }
    let mut graded = true;
    let mut real_coords = true;
    for (i, img) in f.images.iter().enumerate() {
        if img.len() != b.dim() {
            return MapReport {
                pass: false,
                group_iso,
                graded: false,
                real_coords: false,
                bijective: false,
                unit_ok: false,
                multiplicative: false,
                witness: Some(format!("image of b{} has wrong length", i)),
            };
        }
        let target = f.alpha.apply(a.degree(i));
        for (j, c) in img.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_real() {
                real_coords = false;
                fail(&mut witness, format!("image of b{} has a non-real coordinate at b{}", i, j));
            }
            if *b.degree(j) != target {
                graded = false;
                fail(
                    &mut witness,
                    format!("image of b{} leaks outside the component alpha(deg b{})", i, i),
                );
            }
        }
    }
    let bijective = crate::linalg::rank(&f.images, b.dim(), b.conductor()) == a.dim();
    if !bijective {
        fail(&mut witness, "linear extension is not bijective".into());
    }
    let unit_ok = f.apply(b, a.unit()) == b.unit().to_vec();
    if !unit_ok {
        fail(&mut witness, "unit is not preserved".into());
    }
    let mut multiplicative = true;
    'outer: for i in 0..a.dim() {
        for j in 0..a.dim() {
            // phi(b_i b_j) through the source table
            let mut lhs = b.zero_vec();
            for (k, c) in a.entry(i, j) {
                for (t, w) in f.images[*k as usize].iter().enumerate() {
                    if !w.is_zero() {
                        lhs[t] = lhs[t].add(&c.mul(w));
                    }
                }
            }
            let rhs = b
                .multiply(&f.images[i], &f.images[j])
                .expect("image lengths checked above");
            if lhs != rhs {
                multiplicative = false;
                fail(&mut witness, format!("phi(b{i} b{j}) != phi(b{i}) phi(b{j})"));
                break 'outer;
            }
        }
    }
    MapReport {
        pass: group_iso && graded && real_coords && bijective && unit_ok && multiplicative,
        group_iso,
        graded,
        real_coords,
        bijective,
        unit_ok,
        multiplicative,
        witness,
    }
}

/// Extend generator images multiplicatively along the monomial basis of the
/// source: basis x^e maps to the ordered product of the generator images.
pub fn extend_generator_map(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    alpha: GroupHom,
    gen_images: &[Vec<Scalar>],
) -> Result<GradedMap, IsoError> {
    let mono = a
        .monomials()
        .ok_or_else(|| IsoError::NotMonomial("source has no monomial basis".into()))?
        .clone();
    if gen_images.len() != mono.gens.len() {
        return Err(IsoError::BadInput("one image per generator required".into()));
    }
    let mut images = Vec::with_capacity(a.dim());
    for idx in 0..a.dim() {
        let mut acc: Vec<Scalar> = b.unit().to_vec();
        for (gi, &e) in mono.exps[idx].iter().enumerate() {
            for _ in 0..e {
                acc = b.multiply(&acc, &gen_images[gi])?;
            }
        }
        images.push(acc);
    }
    Ok(GradedMap { alpha, images })
}

/// One equivalence from the text: named source and target with a verified
/// change of generators.
pub struct BuiltinEquivalence {
    pub name: &'static str,
    pub source: GradedAlgebra,
    pub target: GradedAlgebra,
    pub map: GradedMap,
}

fn anticommuting_over(
    group: &AbelianGroup,
    degrees: Vec<GroupElement>,
    powers: Vec<u64>,
    squares: Vec<i64>,
    commuting_pairs: &[(usize, usize)],
) -> GradedAlgebra {
    let r = powers.len();
    let one = Scalar::one(8);
    let m1 = Scalar::from_integer(8, -1);
    let mut comm: Vec<Vec<Scalar>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { one.clone() } else { m1.clone() }).collect())
        .collect();
    for &(i, j) in commuting_pairs {
        comm[i][j] = one.clone();
        comm[j][i] = one.clone();
    }
    let p = Presentation {
        group: group.clone(),
        degrees,
        powers,
        power_scalars: squares.iter().map(|&s| Scalar::from_integer(8, s)).collect(),
        comm,
        conductor: 8,
    };
    from_presentation(&p).expect("builtin presentations are consistent")
}

fn gen_vec(alg: &GradedAlgebra, gi: usize) -> Vec<Scalar> {
    alg.basis_vec(alg.monomials().unwrap().gens[gi])
}

fn prod(alg: &GradedAlgebra, factors: &[&[Scalar]]) -> Vec<Scalar> {
    let mut acc = alg.unit().to_vec();
    for f in factors {
        acc = alg.multiply(&acc, f).unwrap();
    }
    acc
}

fn neg(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|c| c.neg()).collect()
}

fn hom(dom: &AbelianGroup, cod: &AbelianGroup, images: &[Vec<u64>]) -> GroupHom {
    let imgs = images.iter().map(|r| cod.element(r.clone()).unwrap()).collect();
    GroupHom::new(dom.clone(), cod.clone(), imgs).expect("builtin group maps are well defined")
}

/// The explicit weak isomorphisms stated in the source text, each with its
/// change of generators spelled out and re-verified by the caller.
pub fn builtin_equivalences() -> Vec<BuiltinEquivalence> {
    let mut out = Vec::new();
    let z2 = |rank: usize| AbelianGroup::elementary2(rank);

    // (a) H4 (x) C2 -> M2_4 (x) C2:
    //     i(x)1 -> B(x)i, j(x)1 -> C(x)1, 1(x)i -> 1(x)i
    {
        let g3 = z2(3);
        let degs =
            |v: &[[u64; 3]]| v.iter().map(|r| g3.element(r.to_vec()).unwrap()).collect::<Vec<_>>();
        let source = anticommuting_over(
            &g3,
            degs(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            vec![2, 2, 2],
            vec![-1, -1, -1],
            &[(0, 2), (1, 2)],
        );
        let target = anticommuting_over(
            &g3,
            degs(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            vec![2, 2, 2],
            vec![1, 1, -1],
            &[(0, 2), (1, 2)],
        );
        let (ub, ua, ui) = (gen_vec(&target, 0), gen_vec(&target, 1), gen_vec(&target, 2));
        let images = vec![
            prod(&target, &[&ub, &ui]),       // B (x) i
            neg(&prod(&target, &[&ub, &ua])), // C = AB = -(BA)
            ui.clone(),
        ];
        let alpha = hom(&g3, &g3, &[vec![1, 0, 1], vec![1, 1, 0], vec![0, 0, 1]]);
        let map = extend_generator_map(&source, &target, alpha, &images).unwrap();
        out.push(BuiltinEquivalence { name: "H4xC2_to_M2_4xC2", source, target, map });
    }

    // (b) H4 (x) H4 -> M2_4 (x) M2_4:
    //     i(x)1 -> C(x)I, j(x)1 -> A(x)C, 1(x)i -> I(x)C, 1(x)j -> C(x)A
    {
        let g4 = z2(4);
        let std4: Vec<GroupElement> = (0..4).map(|i| g4.generator(i)).collect();
        let source = anticommuting_over(
            &g4,
            std4.clone(),
            vec![2, 2, 2, 2],
            vec![-1, -1, -1, -1],
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
        );
        let target = anticommuting_over(
            &g4,
            std4,
            vec![2, 2, 2, 2],
            vec![1, 1, 1, 1],
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
        );
        let u: Vec<Vec<Scalar>> = (0..4).map(|i| gen_vec(&target, i)).collect();
        let images = vec![
            neg(&prod(&target, &[&u[0], &u[1]])),        // C (x) I
            neg(&prod(&target, &[&u[1], &u[2], &u[3]])), // A (x) C
            neg(&prod(&target, &[&u[2], &u[3]])),        // I (x) C
            neg(&prod(&target, &[&u[0], &u[1], &u[3]])), // C (x) A
        ];
        let alpha = hom(
            &g4,
            &g4,
            &[vec![1, 1, 0, 0], vec![0, 1, 1, 1], vec![0, 0, 1, 1], vec![1, 1, 0, 1]],
        );
        let map = extend_generator_map(&source, &target, alpha, &images).unwrap();
        out.push(BuiltinEquivalence { name: "H4xH4_to_M2_4xM2_4", source, target, map });
    }

    // (c) M2_2 (x) H4 -> H2 (x) M2_4 by y -> x1 x2 y with
    //     alpha -> alpha beta, beta -> beta, gamma -> beta gamma
    {
        let g3 = z2(3);
        let degs = vec![
            g3.identity(),
            g3.generator(0),
            g3.generator(1),
            g3.generator(2),
        ];
        let commuting: Vec<(usize, usize)> = vec![(0, 2), (0, 3), (1, 2), (1, 3)];
        let source = anticommuting_over(
            &g3,
            degs.clone(),
            vec![2, 2, 2, 2],
            vec![-1, 1, -1, -1],
            &commuting,
        );
        let target = anticommuting_over(
            &g3,
            degs,
            vec![2, 2, 2, 2],
            vec![-1, -1, -1, 1],
            &commuting,
        );
        let u: Vec<Vec<Scalar>> = (0..4).map(|i| gen_vec(&target, i)).collect();
        let images = vec![
            u[0].clone(),
            prod(&target, &[&u[0], &u[1], &u[2]]),
            u[2].clone(),
            prod(&target, &[&u[0], &u[2], &u[3]]),
        ];
        let alpha = hom(&g3, &g3, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 1, 1]]);
        let map = extend_generator_map(&source, &target, alpha, &images).unwrap();
        out.push(BuiltinEquivalence { name: "M2_2xH4_to_H2xM2_4", source, target, map });
    }

    // (d) M4_32 -> M2_8 (x) M2_4, the substitution mixing the order-2
    //     generators with the central square of the order-4 one
    {
        let source = crate::construct::building_block(crate::construct::BlockName::M4_32);
        let m28 = crate::construct::building_block(crate::construct::BlockName::M2_8);
        let m24 = crate::construct::building_block(crate::construct::BlockName::M2_4);
        let target = m28.tensor_product(&m24);
        let p = gen_vec(&target, 0);
        let q = gen_vec(&target, 1);
        let r = gen_vec(&target, 2);
        let s = gen_vec(&target, 3);
        let p2 = prod(&target, &[&p, &p]);
        let images = vec![
            p.clone(),
            prod(&target, &[&q, &r]),
            prod(&target, &[&q, &s]),
            prod(&target, &[&p2, &q, &r, &s]),
        ];
        let ga = source.group().clone();
        let gb = target.group().clone();
        let alpha = hom(
            &ga,
            &gb,
            &[
                vec![1, 0, 0, 0],
                vec![0, 1, 1, 0],
                vec![0, 1, 0, 1],
                vec![2, 1, 1, 1],
            ],
        );
        let map = extend_generator_map(&source, &target, alpha, &images).unwrap();
        out.push(BuiltinEquivalence { name: "M4_32_to_M2_8xM2_4", source, target, map });
    }

    // (e) M2(C, Z4) (x) H4 -> M2(C, Z4) (x) M2_4 by z_i = y_i x1^2
    {
        let g = AbelianGroup::new(vec![4, 2, 2]);
        let degs = vec![g.generator(0), g.identity(), g.generator(1), g.generator(2)];
        let commuting: Vec<(usize, usize)> = vec![(0, 2), (0, 3), (1, 2), (1, 3)];
        let build = |y_squares: [i64; 2]| {
            let one = Scalar::one(8);
            let m1 = Scalar::from_integer(8, -1);
            let mut comm: Vec<Vec<Scalar>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { one.clone() } else { m1.clone() }).collect())
                .collect();
            for &(i, j) in &commuting {
                comm[i][j] = one.clone();
                comm[j][i] = one.clone();
            }
            let p = Presentation {
                group: g.clone(),
                degrees: degs.clone(),
                powers: vec![4, 2, 2, 2],
                power_scalars: vec![
                    Scalar::from_integer(8, -1),
                    Scalar::from_integer(8, -1),
                    Scalar::from_integer(8, y_squares[0]),
                    Scalar::from_integer(8, y_squares[1]),
                ],
                comm,
                conductor: 8,
            };
            from_presentation(&p).unwrap()
        };
        let source = build([-1, -1]);
        let target = build([1, 1]);
        let x1 = gen_vec(&target, 0);
        let x2 = gen_vec(&target, 1);
        let z1 = gen_vec(&target, 2);
        let z2v = gen_vec(&target, 3);
        let x1sq = prod(&target, &[&x1, &x1]);
        let images = vec![
            x1.clone(),
            x2.clone(),
            prod(&target, &[&z1, &x1sq]),
            prod(&target, &[&z2v, &x1sq]),
        ];
        let alpha = hom(&g, &g, &[vec![1, 0, 0], vec![2, 1, 0], vec![2, 0, 1]]);
        let map = extend_generator_map(&source, &target, alpha, &images).unwrap();
        out.push(BuiltinEquivalence { name: "M2CZ4xH4_to_M2CZ4xM2_4", source, target, map });
    }

    out
}

/// mu_n: the n-th roots of unity (as scalars of conductor lcm(8, n)).
pub fn mu(n: u64) -> Vec<Scalar> {
    let conductor = num_integer::Integer::lcm(&8u64, &n);
    (0..n).map(|k| Scalar::root_of_unity(conductor, (k * (conductor / n)) as i64)).collect()
}

struct SearchSide {
    support: Vec<GroupElement>,
    pos: BTreeMap<GroupElement, usize>,
    /// frame vector (basis index) per support position
    rep: Vec<usize>,
    /// lambda[a][b]: u_a u_b = lambda * u_{a+b}
    lambda: Vec<Vec<Scalar>>,
}

fn search_side(alg: &GradedAlgebra) -> Result<SearchSide, IsoError> {
    let frame = alg.frame()?;
    if frame.imag.is_some() {
        return Err(IsoError::NotMonomial("search requires a real monomial frame".into()));
    }
    let support = alg.support();
    if support.len() != alg.dim() {
        return Err(IsoError::NotMonomial("components are not one-dimensional".into()));
    }
    let pos: BTreeMap<GroupElement, usize> =
        support.iter().cloned().enumerate().map(|(p, g)| (g, p)).collect();
    let rep: Vec<usize> = support.iter().map(|g| frame.reps[g]).collect();
    let n = support.len();
    let mut lambda = vec![vec![Scalar::zero(alg.conductor()); n]; n];
    for a in 0..n {
        for b in 0..n {
            let entry = alg.entry(rep[a], rep[b]);
            if entry.len() != 1 {
                return Err(IsoError::NotMonomial("frame products are not single terms".into()));
            }
            lambda[a][b] = (*entry[0].1).clone();
        }
    }
    Ok(SearchSide { support, pos, rep, lambda })
}

impl SearchSide {
    fn sigma(&self, g: &AbelianGroup, a: usize, b: usize) -> Scalar {
        let c1 = &self.lambda[a][b];
        let c2 = &self.lambda[b][a];
        let _ = g;
        c1.div(c2).expect("frame products are invertible")
    }

    /// u_g^k as (support position, scalar).
    fn frame_power(&self, g: &AbelianGroup, a: usize, k: u64) -> (usize, Scalar) {
        let mut pos = self.pos[&g.identity()];
        let mut coef = Scalar::one(self.lambda[0][0].conductor());
        for _ in 0..k {
            coef = coef.mul(&self.lambda[pos][a]);
            let next = g.add(&self.support[pos], &self.support[a]);
            pos = self.pos[&next];
        }
        (pos, coef)
    }
}

/// Search for a monomial weak isomorphism A -> B: backtracking over support
/// isomorphisms with incremental commutation checks, then frame scalars from
/// `scalar_set` (restricted to real values, since images must stay inside the
/// real algebra). Complete over the searched scalar set; None means no
/// monomial isomorphism with those scalars exists.
pub fn search_monomial_iso(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    scalar_set: &[Scalar],
    max_support: usize,
) -> Result<Option<GradedMap>, IsoError> {
    let ga = a.group().clone();
    let gb = b.group().clone();
    if !ga.is_isomorphic(&gb) || a.dim() != b.dim() {
        return Ok(None);
    }
    let sa = search_side(a)?;
    let sb = search_side(b)?;
    if sa.support.len() > max_support {
        return Err(IsoError::BadInput(format!(
            "support of size {} exceeds the search bound {}",
            sa.support.len(),
            max_support
        )));
    }
    let real_scalars: Vec<Scalar> = scalar_set.iter().filter(|s| s.is_real()).cloned().collect();
    // canonical generating set of the source group
    let (canon, to_a, from_a) = ga.canonical();
    let gen_count = canon.orders().len();
    let gen_orders: Vec<u64> = canon.orders().to_vec();
    let pa: Vec<GroupElement> = (0..gen_count).map(|i| from_a.apply(&canon.generator(i))).collect();
    let pa_pos: Vec<usize> = pa.iter().map(|g| sa.pos[g]).collect();
    // generator power scalars in A: u^{d} = mu * I
    let mu_a: Vec<Scalar> = (0..gen_count)
        .map(|i| sa.frame_power(&ga, pa_pos[i], gen_orders[i]).1)
        .collect();
    // candidate images per generator: exact order, with at least one workable
    // frame scalar
    let b_elems: Vec<GroupElement> = gb.elements().collect();
    let candidates: Vec<Vec<(GroupElement, Vec<Scalar>)>> = (0..gen_count)
        .map(|i| {
            let d = gen_orders[i];
            b_elems
                .iter()
                .filter(|e| gb.order_of(e) == d)
                .filter_map(|e| {
                    let nu = sb.frame_power(&gb, sb.pos[e], d).1;
                    let lambdas: Vec<Scalar> = real_scalars
                        .iter()
                        .filter(|l| l.pow(d).mul(&nu) == mu_a[i])
                        .cloned()
                        .collect();
                    if lambdas.is_empty() {
                        None
                    } else {
                        Some((e.clone(), lambdas))
                    }
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    // parallel over the first generator's candidates, deterministic by index
    let found: Option<(usize, GradedMap)> = candidates[0]
        .par_iter()
        .enumerate()
        .filter_map(|(idx, first)| {
            let mut chosen: Vec<(GroupElement, Vec<Scalar>)> = vec![first.clone()];
            search_rest(a, b, &sa, &sb, &ga, &gb, &canon, &to_a, &pa_pos, &gen_orders, &candidates, &mut chosen)
                .map(|m| (idx, m))
        })
        .min_by_key(|(idx, _)| *idx);
    Ok(found.map(|(_, m)| m))
}

#[allow(clippy::too_many_arguments)]
fn search_rest(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    sa: &SearchSide,
    sb: &SearchSide,
    ga: &AbelianGroup,
    gb: &AbelianGroup,
    canon: &AbelianGroup,
    to_a: &GroupHom,
    pa_pos: &[usize],
    gen_orders: &[u64],
    candidates: &[Vec<(GroupElement, Vec<Scalar>)>],
    chosen: &mut Vec<(GroupElement, Vec<Scalar>)>,
) -> Option<GradedMap> {
    let j = chosen.len() - 1;
    // incremental commutation check against previously chosen images
    for i in 0..j {
        let lhs = sb.sigma(gb, sb.pos[&chosen[i].0], sb.pos[&chosen[j].0]);
        let rhs = sa.sigma(ga, pa_pos[i], pa_pos[j]);
        if lhs != rhs {
            return None;
        }
    }
    // the partial span must still be able to reach the whole group
    let span = gb.span(&chosen.iter().map(|(e, _)| e.clone()).collect::<Vec<_>>());
    let remaining: u64 = gen_orders[(j + 1)..].iter().product();
    if (span.len() as u64) * remaining < gb.order() {
        return None;
    }
    let partial: u64 = gen_orders[..=j].iter().product();
    if span.len() as u64 > partial {
        return None;
    }
    if chosen.len() == gen_orders.len() {
        if span.len() as u64 != gb.order() {
            return None;
        }
        // assemble the map for the first workable scalar assignment
        let lambdas: Vec<Scalar> = chosen.iter().map(|(_, ls)| ls[0].clone()).collect();
        let map = assemble_map(a, b, sa, sb, ga, gb, canon, to_a, pa_pos, &chosen.iter().map(|(e, _)| e.clone()).collect::<Vec<_>>(), &lambdas);
        let report = verify_graded_map(a, b, &map);
        return if report.pass { Some(map) } else { None };
    }
    for cand in &candidates[chosen.len()] {
        chosen.push(cand.clone());
        if let Some(m) = search_rest(a, b, sa, sb, ga, gb, canon, to_a, pa_pos, gen_orders, candidates, chosen) {
            chosen.pop();
            return Some(m);
        }
        chosen.pop();
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn assemble_map(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    sa: &SearchSide,
    sb: &SearchSide,
    ga: &AbelianGroup,
    gb: &AbelianGroup,
    canon: &AbelianGroup,
    to_a: &GroupHom,
    pa_pos: &[usize],
    images_of_gens: &[GroupElement],
    lambdas: &[Scalar],
) -> GradedMap {
    // alpha on the standard generators of A's group
    let alpha_images: Vec<GroupElement> = (0..ga.orders().len())
        .map(|t| {
            let coords = to_a.apply(&ga.generator(t));
            let mut acc = gb.identity();
            for (i, &r) in coords.residues.iter().enumerate() {
                if r != 0 {
                    acc = gb.add(&acc, &gb.scalar_mul(r, &images_of_gens[i]));
                }
            }
            acc
        })
        .collect();
    let alpha = GroupHom::new_unchecked(ga.clone(), gb.clone(), alpha_images);
    // image of each frame vector: write g in canonical coordinates, multiply
    // out on both sides and compare scalars
    let conductor = b.conductor();
    let mut images = vec![b.zero_vec(); a.dim()];
    for (apos, g) in sa.support.iter().enumerate() {
        let coords = to_a.apply(g);
        // A side: product of generator frame powers = c_g * u_g
        let mut a_pos_acc = sa.pos[&ga.identity()];
        let mut c_g = Scalar::one(conductor);
        // B side simultaneously
        let mut b_pos_acc = sb.pos[&gb.identity()];
        let mut c_b = Scalar::one(conductor);
        for (i, &r) in coords.residues.iter().enumerate() {
            let _ = canon;
            for _ in 0..r {
                c_g = c_g.mul(&sa.lambda[a_pos_acc][pa_pos[i]]);
                a_pos_acc = sa.pos[&ga.add(&sa.support[a_pos_acc], &sa.support[pa_pos[i]])];
                let bi = sb.pos[&images_of_gens[i]];
                c_b = c_b.mul(&lambdas[i]).mul(&sb.lambda[b_pos_acc][bi]);
                b_pos_acc = sb.pos[&gb.add(&sb.support[b_pos_acc], &sb.support[bi])];
            }
        }
        debug_assert_eq!(a_pos_acc, apos);
        // phi(u_g) = (c_b / c_g) * u_{alpha(g)}
        let coef = c_b.mul(&c_g.inv().expect("frame scalars are invertible"));
        let mut v = b.zero_vec();
        v[sb.rep[b_pos_acc]] = coef;
        images[sa.rep[apos]] = v;
    }
    GradedMap { alpha, images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{building_block, clifford_graded, BlockName};

    #[test]
    fn identity_map_verifies() {
        let m2 = building_block(BlockName::M2_4);
        let alpha = GroupHom::identity(m2.group());
        let images = (0..m2.dim()).map(|i| m2.basis_vec(i)).collect();
        let map = GradedMap { alpha, images };
        let report = verify_graded_map(&m2, &m2, &map);
        assert!(report.pass, "witness: {:?}", report.witness);
    }

    #[test]
    fn all_builtin_equivalences_verify() {
        let builtins = builtin_equivalences();
        assert!(builtins.len() >= 5);
        for eq in &builtins {
            assert!(eq.source.validate().pass, "{} source", eq.name);
            assert!(eq.target.validate().pass, "{} target", eq.name);
            let report = verify_graded_map(&eq.source, &eq.target, &eq.map);
            assert!(report.pass, "{}: {:?}", eq.name, report.witness);
        }
    }

    #[test]
    fn order4_generator_maps_to_order4() {
        let builtins = builtin_equivalences();
        let m432 = builtins.iter().find(|e| e.name == "M4_32_to_M2_8xM2_4").unwrap();
        let ga = m432.source.group();
        let gb = m432.map.alpha.codomain.clone();
        let img = m432.map.alpha.apply(&ga.generator(0));
        assert_eq!(gb.order_of(&img), 4);
    }

    #[test]
    fn corrupted_builtin_fails_with_witness() {
        let mut builtins = builtin_equivalences();
        let eq = &mut builtins[0];
        // flip the sign of one image coordinate
        let idx = eq.map.images.len() - 1;
        eq.map.images[idx] = eq.map.images[idx].iter().map(|c| c.neg()).collect();
        let report = verify_graded_map(&eq.source, &eq.target, &eq.map);
        assert!(!report.pass);
        assert!(report.witness.is_some());
    }

    #[test]
    fn search_finds_identity_class_map() {
        let m2 = building_block(BlockName::M2_4);
        let found = search_monomial_iso(&m2, &m2, &mu(8), 64).unwrap();
        let map = found.expect("self-isomorphism exists");
        assert!(verify_graded_map(&m2, &m2, &map).pass);
    }

    #[test]
    fn search_connects_the_two_clifford_forms() {
        let a = clifford_graded(1, 1);
        let b = clifford_graded(0, 2);
        let found = search_monomial_iso(&a, &b, &mu(8), 64).unwrap();
        let map = found.expect("C_gr(1,1) and C_gr(0,2) are weakly isomorphic");
        assert!(verify_graded_map(&a, &b, &map).pass);
    }

    #[test]
    fn search_separates_h4_from_m2_4() {
        let a = building_block(BlockName::H4);
        let b = building_block(BlockName::M2_4);
        let found = search_monomial_iso(&a, &b, &mu(8), 64).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn search_is_deterministic() {
        let a = clifford_graded(1, 1);
        let b = clifford_graded(0, 2);
        let m1 = search_monomial_iso(&a, &b, &mu(8), 64).unwrap().unwrap();
        let m2 = search_monomial_iso(&a, &b, &mu(8), 64).unwrap().unwrap();
        assert_eq!(m1.alpha.images, m2.alpha.images);
        for (x, y) in m1.images.iter().zip(&m2.images) {
            assert_eq!(x, y);
        }
    }
}
