//! Builders for the graded division algebras of the catalog: twisted group
//! algebras from graded presentations, homogeneous Clifford gradings, the
//! named building blocks, Sylvester/Pauli real forms, tensor-product normal
//! forms of the thirteen types, and endomorphism algebras End_D(U) for a
//! dimension function kappa.

use crate::abgroup::{split_square, AbelianGroup, GroupElement, GroupError, GroupHom};
use crate::algebra::{AlgebraBuilder, AlgebraError, Frame, GradedAlgebra, MonomialBasis};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("group is not of the form H x H")]
    NotSquareGroup,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Graded presentation: generators x_i of degree g_i with x_i^{m_i} = s_i I
/// and x_i x_j = c_{ij} x_j x_i.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: AbelianGroup,
    pub degrees: Vec<GroupElement>,
    pub powers: Vec<u64>,
    pub power_scalars: Vec<Scalar>,
    pub comm: Vec<Vec<Scalar>>,
    pub conductor: u64,
}

impl Presentation {
    fn check(&self) -> Result<(), ConstructError> {
        let r = self.powers.len();
        if self.degrees.len() != r || self.power_scalars.len() != r || self.comm.len() != r {
            return Err(ConstructError::BadInput("presentation field lengths disagree".into()));
        }
        let n = self.conductor;
        for i in 0..r {
            if self.powers[i] == 0 {
                return Err(ConstructError::InconsistentPresentation(format!(
                    "generator {} has power 0",
                    i
                )));
            }
            if !self.group.contains(&self.degrees[i]) {
                return Err(ConstructError::BadInput(format!("degree of generator {} outside group", i)));
            }
            // g_i^{m_i} = e so the grading is well defined on exponents
            let ord = self.group.order_of(&self.degrees[i]);
            if self.powers[i] % ord != 0 {
                return Err(ConstructError::InconsistentPresentation(format!(
                    "degree order {} of generator {} does not divide its power {}",
                    ord, i, self.powers[i]
                )));
            }
            if !self.power_scalars[i].pow(n).is_one() {
                return Err(ConstructError::InconsistentPresentation(format!(
                    "power scalar of generator {} is not a root of unity",
                    i
                )));
            }
            if self.comm[i].len() != r {
                return Err(ConstructError::BadInput("commutation matrix is not square".into()));
            }
        }
        for i in 0..r {
            if !self.comm[i][i].is_one() {
                return Err(ConstructError::InconsistentPresentation(format!(
                    "c[{}][{}] must be 1",
                    i, i
                )));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if !self.comm[i][j].mul(&self.comm[j][i]).is_one() {
                    return Err(ConstructError::InconsistentPresentation(format!(
                        "c[{i}][{j}] * c[{j}][{i}] != 1"
                    )));
                }
                // x_i^{m_i} must be central
                if !self.comm[i][j].pow(self.powers[i]).is_one() {
                    return Err(ConstructError::InconsistentPresentation(format!(
                        "c[{i}][{j}]^m_{i} != 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Twisted group algebra of a presentation: basis x_1^{e_1} ... x_r^{e_r}
/// with 0 <= e_i < m_i, dim = prod m_i, single-term products obtained by
/// normal ordering. Components merge whenever monomial degrees collide.
pub fn from_presentation(p: &Presentation) -> Result<GradedAlgebra, ConstructError> {
    p.check()?;
    let r = p.powers.len();
    let dim: u64 = p.powers.iter().product();
    let dim = dim as usize;
    // mixed-radix strides, first generator most significant
    let mut strides = vec![1usize; r];
    for i in (0..r.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * p.powers[i + 1] as usize;
    }
    let exps_of = |mut idx: usize| -> Vec<u32> {
        let mut e = vec![0u32; r];
        for i in 0..r {
            e[i] = (idx / strides[i]) as u32;
            idx %= strides[i];
        }
        e
    };
    let conductor = num_integer::Integer::lcm(&8u64, &p.conductor);
    let mut degrees = Vec::with_capacity(dim);
    for idx in 0..dim {
        let e = exps_of(idx);
        let mut d = p.group.identity();
        for i in 0..r {
            if e[i] != 0 {
                d = p.group.add(&d, &p.group.scalar_mul(e[i] as u64, &p.degrees[i]));
            }
        }
        degrees.push(d);
    }
    let group = p.group.clone();
    let mut b = AlgebraBuilder::new(group, degrees.clone(), conductor);
    // precompute commutation powers c[j][i]^t for t < m_i * m_j
    let mut cpow: Vec<Vec<Vec<Scalar>>> = vec![vec![Vec::new(); r]; r];
    for j in 0..r {
        for i in 0..r {
            if i == j {
                continue;
            }
            let top = (p.powers[i] * p.powers[j]) as usize;
            let mut acc = Scalar::one(conductor);
            let mut v = Vec::with_capacity(top);
            for _ in 0..top {
                v.push(acc.clone());
                acc = acc.mul(&p.comm[j][i]);
            }
            cpow[j][i] = v;
        }
    }
    for ia in 0..dim {
        let ea = exps_of(ia);
        for ib in 0..dim {
            let eb = exps_of(ib);
            let mut scalar = Scalar::one(conductor);
            // move each x_i^{b_i} left past x_j^{a_j}, j > i
            for i in 0..r {
                if eb[i] == 0 {
                    continue;
                }
                for j in (i + 1)..r {
                    if ea[j] != 0 {
                        scalar = scalar.mul(&cpow[j][i][(ea[j] * eb[i]) as usize]);
                    }
                }
            }
            let mut target = 0usize;
            for i in 0..r {
                let mut e = ea[i] + eb[i];
                if e as u64 >= p.powers[i] {
                    e -= p.powers[i] as u32;
                    scalar = scalar.mul(&p.power_scalars[i]);
                }
                target += e as usize * strides[i];
            }
            b.set_product(ia, ib, vec![(target, scalar)]);
        }
    }
    let mut unit = vec![Scalar::zero(conductor); dim];
    unit[0] = Scalar::one(conductor);
    b.set_unit(unit);
    // monomial bookkeeping: generator x_i sits at basis index strides[i]
    // (degenerate m_i = 1 generators never appear in a reduced exponent)
    let gens = (0..r).map(|i| if p.powers[i] >= 2 { strides[i] } else { 0 }).collect();
    b.set_monomials(MonomialBasis { exps: (0..dim).map(exps_of).collect(), gens, unit_index: 0 });
    // distinguished frame when every component is a single monomial
    let support: std::collections::BTreeSet<&GroupElement> = degrees.iter().collect();
    if support.len() == dim {
        let reps: BTreeMap<GroupElement, usize> =
            degrees.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        b.set_frame(Frame { reps, imag: None });
    }
    Ok(b.build())
}

/// Helper: the presentation of a pairwise-anticommuting generator family with
/// squares +-1 over an elementary 2-group, i.e. a homogeneous Clifford shape.
fn anticommuting_presentation(squares: &[i64], degrees: Vec<GroupElement>, group: AbelianGroup) -> Presentation {
    let r = squares.len();
    let minus_one = Scalar::from_integer(8, -1);
    let one = Scalar::one(8);
    let comm: Vec<Vec<Scalar>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { one.clone() } else { minus_one.clone() }).collect())
        .collect();
    Presentation {
        group,
        degrees,
        powers: vec![2; r],
        power_scalars: squares
            .iter()
            .map(|&s| Scalar::from_integer(8, s))
            .collect(),
        comm,
        conductor: 8,
    }
}

/// Homogeneous Clifford grading C^gr(p, m) over Z_2^{p+m}: p generators of
/// square -1 and m of square +1, all anticommuting, degrees the standard
/// basis.
pub fn clifford_graded(p: u32, m: u32) -> GradedAlgebra {
    let r = (p + m) as usize;
    if r == 0 {
        return building_block(BlockName::R);
    }
    let group = AbelianGroup::elementary2(r);
    let degrees = (0..r).map(|i| group.generator(i)).collect();
    let mut squares = vec![-1i64; p as usize];
    squares.extend(vec![1i64; m as usize]);
    from_presentation(&anticommuting_presentation(&squares, degrees, group))
        .expect("clifford presentations are consistent")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockName {
    R,
    C,
    C2,
    H,
    H2,
    H4,
    M2_2,
    M2_4,
    M2_8,
    M2CZ4,
    M4_4,
    M4_32,
    M4CZ4Z2Z2,
}

pub const ALL_BLOCKS: [BlockName; 13] = [
    BlockName::R,
    BlockName::C,
    BlockName::C2,
    BlockName::H,
    BlockName::H2,
    BlockName::H4,
    BlockName::M2_2,
    BlockName::M2_4,
    BlockName::M2_8,
    BlockName::M2CZ4,
    BlockName::M4_4,
    BlockName::M4_32,
    BlockName::M4CZ4Z2Z2,
];

impl fmt::Display for BlockName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockName::R => "R",
            BlockName::C => "C",
            BlockName::C2 => "C2",
            BlockName::H => "H",
            BlockName::H2 => "H2",
            BlockName::H4 => "H4",
            BlockName::M2_2 => "M2_2",
            BlockName::M2_4 => "M2_4",
            BlockName::M2_8 => "M2_8",
            BlockName::M2CZ4 => "M2C_Z4",
            BlockName::M4_4 => "M4_4",
            BlockName::M4_32 => "M4_32",
            BlockName::M4CZ4Z2Z2 => "M4C_Z4Z2Z2",
        };
        write!(f, "{}", s)
    }
}

impl FromStr for BlockName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "R" => BlockName::R,
            "C" => BlockName::C,
            "C2" => BlockName::C2,
            "H" => BlockName::H,
            "H2" => BlockName::H2,
            "H4" => BlockName::H4,
            "M2_2" => BlockName::M2_2,
            "M2_4" => BlockName::M2_4,
            "M2_8" => BlockName::M2_8,
            "M2C_Z4" => BlockName::M2CZ4,
            "M4_4" => BlockName::M4_4,
            "M4_32" => BlockName::M4_32,
            "M4C_Z4Z2Z2" => BlockName::M4CZ4Z2Z2,
            other => return Err(format!("unknown building block '{}'", other)),
        })
    }
}

/// The named building blocks, with the gradings used throughout the catalog.
pub fn building_block(name: BlockName) -> GradedAlgebra {
    let m1 = Scalar::from_integer(8, -1);
    match name {
        BlockName::R => {
            let p = Presentation {
                group: AbelianGroup::trivial(),
                degrees: vec![],
                powers: vec![],
                power_scalars: vec![],
                comm: vec![],
                conductor: 8,
            };
            from_presentation(&p).unwrap()
        }
        BlockName::C => {
            let g = AbelianGroup::trivial();
            let p = Presentation {
                degrees: vec![g.identity()],
                group: g,
                powers: vec![2],
                power_scalars: vec![m1],
                comm: vec![vec![Scalar::one(8)]],
                conductor: 8,
            };
            from_presentation(&p).unwrap()
        }
        BlockName::C2 => clifford_graded(1, 0),
        BlockName::H => {
            let g = AbelianGroup::trivial();
            let degrees = vec![g.identity(), g.identity()];
            from_presentation(&anticommuting_presentation(&[-1, -1], degrees, g)).unwrap()
        }
        BlockName::H2 => {
            let g = AbelianGroup::new(vec![2]);
            let degrees = vec![g.identity(), g.generator(0)];
            from_presentation(&anticommuting_presentation(&[-1, -1], degrees, g)).unwrap()
        }
        BlockName::H4 => clifford_graded(2, 0),
        BlockName::M2_4 => clifford_graded(0, 2),
        BlockName::M2_2 => {
            // coarsening of M2_4 identifying alpha beta with e: R_e = <I, C>,
            // R_alpha = <A, B>
            let fine = clifford_graded(0, 2);
            let gamma = fine.group().element(vec![1, 1]).unwrap();
            let (_, proj) = fine.group().quotient_by(&[gamma]);
            fine.coarsen(&proj).unwrap()
        }
        BlockName::M2_8 => {
            let g = AbelianGroup::new(vec![4, 2]);
            let p = Presentation {
                degrees: vec![g.generator(0), g.generator(1)],
                group: g,
                powers: vec![4, 2],
                power_scalars: vec![m1.clone(), m1],
                comm: vec![
                    vec![Scalar::one(8), Scalar::from_integer(8, -1)],
                    vec![Scalar::from_integer(8, -1), Scalar::one(8)],
                ],
                conductor: 8,
            };
            from_presentation(&p).unwrap()
        }
        BlockName::M2CZ4 => {
            let fine = building_block(BlockName::M2_8);
            let beta = fine.group().element(vec![0, 1]).unwrap();
            let (_, proj) = fine.group().quotient_by(&[beta]);
            fine.coarsen(&proj).unwrap()
        }
        BlockName::M4_4 => {
            // H4 tensor H realized in one presentation over Z2 x Z2 so the
            // grading group carries no trivial factor
            let g = AbelianGroup::new(vec![2, 2]);
            let degrees = vec![g.generator(0), g.generator(1), g.identity(), g.identity()];
            let one = Scalar::one(8);
            let m = Scalar::from_integer(8, -1);
            // x1, x2 anticommute; x3, x4 anticommute; cross pairs commute
            let comm = vec![
                vec![one.clone(), m.clone(), one.clone(), one.clone()],
                vec![m.clone(), one.clone(), one.clone(), one.clone()],
                vec![one.clone(), one.clone(), one.clone(), m.clone()],
                vec![one.clone(), one.clone(), m.clone(), one.clone()],
            ];
            let p = Presentation {
                degrees,
                group: g,
                powers: vec![2, 2, 2, 2],
                power_scalars: vec![m.clone(), m.clone(), m.clone(), m],
                comm,
                conductor: 8,
            };
            from_presentation(&p).unwrap()
        }
        BlockName::M4_32 => {
            let g = AbelianGroup::new(vec![4, 2, 2, 2]);
            let degrees = (0..4).map(|i| g.generator(i)).collect::<Vec<_>>();
            let one = Scalar::one(8);
            let m = Scalar::from_integer(8, -1);
            let comm: Vec<Vec<Scalar>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { one.clone() } else { m.clone() }).collect())
                .collect();
            let p = Presentation {
                degrees,
                group: g,
                powers: vec![4, 2, 2, 2],
                power_scalars: vec![m.clone(), m.clone(), m.clone(), m],
                comm,
                conductor: 8,
            };
            from_presentation(&p).unwrap()
        }
        BlockName::M4CZ4Z2Z2 => {
            let fine = building_block(BlockName::M4_32);
            let gamma = fine.group().element(vec![0, 0, 1, 0]).unwrap();
            let (_, proj) = fine.group().quotient_by(&[gamma]);
            fine.coarsen(&proj).unwrap()
        }
    }
}

/// Real form of the complex algebra: every complex basis vector w splits into
/// the real pair (w, i w); complex structure constants split into totally
/// real coordinates. The input is treated as an algebra over C with i acting
/// as the scalar i of the coefficient field.
pub fn realify(complex: &GradedAlgebra) -> GradedAlgebra {
    let dim = complex.dim();
    let conductor = complex.conductor();
    let i_unit = Scalar::i_unit(conductor);
    let mut degrees = Vec::with_capacity(2 * dim);
    for d in complex.degrees() {
        degrees.push(d.clone());
        degrees.push(d.clone());
    }
    let mut b = AlgebraBuilder::new(complex.group().clone(), degrees, conductor);
    for a in 0..dim {
        for c in 0..dim {
            let entry = complex.entry(a, c);
            if entry.is_empty() {
                continue;
            }
            for (sa, sb) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let mut terms = Vec::with_capacity(entry.len() * 2);
                for (k, z) in entry {
                    let mut zz = (**z).clone();
                    if sa + sb == 1 {
                        zz = zz.mul(&i_unit);
                    } else if sa + sb == 2 {
                        zz = zz.neg();
                    }
                    let (re, im) = zz.re_im();
                    terms.push((2 * (*k as usize), re));
                    terms.push((2 * (*k as usize) + 1, im));
                }
                b.set_product(2 * a + sa, 2 * c + sb, terms);
            }
        }
    }
    let mut unit = vec![Scalar::zero(conductor); 2 * dim];
    for (m, c) in complex.unit().iter().enumerate() {
        let (re, im) = c.re_im();
        unit[2 * m] = re;
        unit[2 * m + 1] = im;
    }
    b.set_unit(unit);
    if let Some(frame) = complex.frame_hint() {
        let reps: BTreeMap<GroupElement, usize> =
            frame.reps.iter().map(|(g, &i)| (g.clone(), 2 * i)).collect();
        let mut imag = Vec::with_capacity(2 * dim);
        for m in 0..dim {
            imag.push((2 * m + 1, Scalar::one(conductor)));
            imag.push((2 * m, Scalar::from_integer(conductor as u64, -1)));
        }
        b.set_frame(Frame { reps, imag: Some(imag) });
    }
    if let Some(mono) = complex.monomials() {
        if mono.unit_index == 0 {
            let exps = (0..2 * dim)
                .map(|t| {
                    let mut e = mono.exps[t / 2].clone();
                    e.push((t % 2) as u32);
                    e
                })
                .collect();
            let mut gens: Vec<usize> = mono.gens.iter().map(|&g| 2 * g).collect();
            gens.push(1); // the imaginary unit i itself
            b.set_monomials(MonomialBasis { exps, gens, unit_index: 0 });
        }
    }
    b.build()
}

/// Sylvester (generalized Pauli) division grading: the real form of the
/// complex tensor product of clock/shift blocks of the sizes of H, graded by
/// H x H. Real dimension 2 n^2 with n = |H|.
pub fn pauli_grading(h: &AbelianGroup) -> GradedAlgebra {
    assert!(h.is_finite());
    let sizes: Vec<u64> = h.orders().iter().copied().filter(|&d| d > 1).collect();
    let mut g_orders: Vec<u64> = h.orders().to_vec();
    g_orders.extend(h.orders().iter().cloned());
    let group = AbelianGroup::new(g_orders);
    let hrank = h.orders().len();
    let mut conductor = 8u64;
    for &n in &sizes {
        conductor = num_integer::Integer::lcm(&conductor, &n);
    }
    let mut degrees = Vec::new();
    let mut powers = Vec::new();
    let mut power_scalars = Vec::new();
    let mut factor_of = Vec::new(); // generator index -> (factor, is_shift)
    for (fi, &d) in h.orders().iter().enumerate() {
        if d <= 1 {
            continue;
        }
        degrees.push(group.generator(fi)); // clock
        degrees.push(group.generator(hrank + fi)); // shift
        powers.push(d);
        powers.push(d);
        power_scalars.push(Scalar::one(conductor));
        power_scalars.push(Scalar::one(conductor));
        factor_of.push((fi, false));
        factor_of.push((fi, true));
    }
    let r = powers.len();
    let one = Scalar::one(conductor);
    let mut comm: Vec<Vec<Scalar>> = vec![vec![one.clone(); r]; r];
    for a in 0..r {
        for bb in 0..r {
            let (fa, sa) = factor_of[a];
            let (fb, sb) = factor_of[bb];
            if fa == fb && sa != sb {
                let n = powers[a];
                let eps = Scalar::root_of_unity(conductor, (conductor / n) as i64);
                // shift * clock = eps * clock * shift
                comm[a][bb] = if sa { eps } else { eps.inv().unwrap() };
            }
        }
    }
    let pres = Presentation { group, degrees, powers, power_scalars, comm, conductor };
    let complex = from_presentation(&pres).expect("pauli presentations are consistent");
    realify(&complex)
}

/// Pauli grading for an ambient group G, which must split as H x H.
pub fn pauli_from_group(g: &AbelianGroup) -> Result<GradedAlgebra, ConstructError> {
    let h = split_square(g).ok_or(ConstructError::NotSquareGroup)?;
    Ok(pauli_grading(&h))
}

// ---------------------------------------------------------------------------
// Catalog of the thirteen types.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKind {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    XI,
    XII,
}

impl TypeKind {
    pub const ALL: [TypeKind; 12] = [
        TypeKind::I,
        TypeKind::II,
        TypeKind::III,
        TypeKind::IV,
        TypeKind::V,
        TypeKind::VI,
        TypeKind::VII,
        TypeKind::VIII,
        TypeKind::IX,
        TypeKind::X,
        TypeKind::XI,
        TypeKind::XII,
    ];

    pub fn roman(&self) -> &'static str {
        match self {
            TypeKind::I => "i",
            TypeKind::II => "ii",
            TypeKind::III => "iii",
            TypeKind::IV => "iv",
            TypeKind::V => "v",
            TypeKind::VI => "vi",
            TypeKind::VII => "vii",
            TypeKind::VIII => "viii",
            TypeKind::IX => "ix",
            TypeKind::X => "x",
            TypeKind::XI => "xi",
            TypeKind::XII => "xii",
        }
    }

    pub fn from_roman(s: &str) -> Option<TypeKind> {
        TypeKind::ALL.iter().copied().find(|t| t.roman() == s)
    }

    /// Smallest k for which the tensor normal form is defined.
    pub fn min_k(&self) -> u32 {
        match self {
            TypeKind::II | TypeKind::VIII | TypeKind::IX | TypeKind::X | TypeKind::XII => 1,
            TypeKind::III => 2,
            _ => 0,
        }
    }
}

/// Weak-isomorphism class label: one of the twelve parametric types with its
/// k, or a Pauli grading with the factor orders of H.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Theorem(TypeKind, u32),
    Pauli(Vec<u64>),
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Theorem(t, k) => write!(f, "type={} k={}", t.roman(), k),
            ClassLabel::Pauli(h) => write!(
                f,
                "type=xiii H={}",
                h.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut kind: Option<&str> = None;
        let mut k: Option<u32> = None;
        let mut h: Option<Vec<u64>> = None;
        for part in s.split_whitespace() {
            if let Some(v) = part.strip_prefix("type=") {
                kind = Some(v);
            } else if let Some(v) = part.strip_prefix("k=") {
                k = Some(v.parse().map_err(|_| format!("bad k '{}'", v))?);
            } else if let Some(v) = part.strip_prefix("H=") {
                let orders: Result<Vec<u64>, _> = v.split(',').map(|t| t.parse::<u64>()).collect();
                h = Some(orders.map_err(|_| format!("bad H '{}'", v))?);
            } else {
                return Err(format!("unknown label field '{}'", part));
            }
        }
        match kind {
            Some("xiii") => {
                let h = h.ok_or("type xiii requires H=")?;
                if h.is_empty() || h.contains(&0) {
                    return Err("H factors must be positive".into());
                }
                Ok(ClassLabel::Pauli(h))
            }
            Some(r) => {
                let t = TypeKind::from_roman(r).ok_or_else(|| format!("unknown type '{}'", r))?;
                let k = k.ok_or("parametric types require k=")?;
                if k < t.min_k() {
                    return Err(format!("type {} requires k >= {}", r, t.min_k()));
                }
                Ok(ClassLabel::Theorem(t, k))
            }
            None => Err("label must contain type=".into()),
        }
    }
}

fn tensor_chain(factors: Vec<GradedAlgebra>) -> GradedAlgebra {
    let mut it = factors.into_iter();
    let first = it.next().expect("at least one factor");
    it.fold(first, |acc, f| acc.tensor_product(&f))
}

/// Tensor-product normal form of a class label.
pub fn catalog(label: &ClassLabel) -> Result<GradedAlgebra, ConstructError> {
    use BlockName::*;
    match label {
        ClassLabel::Pauli(h) => {
            if h.is_empty() || h.contains(&0) {
                return Err(ConstructError::BadInput("H factors must be positive".into()));
            }
            Ok(pauli_grading(&AbelianGroup::new(h.clone())))
        }
        ClassLabel::Theorem(t, k) => {
            let k = *k;
            if k < t.min_k() {
                return Err(ConstructError::BadInput(format!(
                    "type {} requires k >= {}",
                    t.roman(),
                    t.min_k()
                )));
            }
            let m24 = |n: u32| -> Vec<GradedAlgebra> {
                (0..n).map(|_| building_block(M2_4)).collect()
            };
            let mut factors: Vec<GradedAlgebra> = Vec::new();
            match t {
                TypeKind::I => factors.extend(m24(k)),
                TypeKind::II => {
                    factors.push(building_block(M2_2));
                    factors.extend(m24(k - 1));
                }
                TypeKind::III => {
                    factors.push(building_block(M4_4));
                    factors.extend(m24(k - 2));
                }
                TypeKind::IV => {
                    factors.push(building_block(H4));
                    factors.extend(m24(k));
                }
                TypeKind::V => {
                    factors.push(building_block(H2));
                    factors.extend(m24(k));
                }
                TypeKind::VI => {
                    factors.push(building_block(H));
                    factors.extend(m24(k));
                }
                TypeKind::VII => {
                    factors.push(building_block(C2));
                    factors.extend(m24(k));
                }
                TypeKind::VIII => {
                    factors.push(building_block(C2));
                    factors.push(building_block(M2_2));
                    factors.extend(m24(k - 1));
                }
                TypeKind::IX => {
                    factors.push(building_block(M2_8));
                    factors.extend(m24(k - 1));
                }
                TypeKind::X => {
                    factors.push(building_block(M2CZ4));
                    factors.extend(m24(k - 1));
                }
                TypeKind::XI => {
                    factors.extend(m24(k));
                    factors.push(building_block(C2));
                    factors.push(building_block(H));
                }
                TypeKind::XII => {
                    factors.push(building_block(M2_8));
                    factors.extend(m24(k - 1));
                    factors.push(building_block(H));
                }
            }
            if factors.is_empty() {
                factors.push(building_block(R));
            }
            Ok(tensor_chain(factors))
        }
    }
}

// ---------------------------------------------------------------------------
// Endomorphism algebras M(D, kappa).

/// A simple graded division algebra D together with an embedding of its
/// grading group into an ambient group G and a dimension function on the
/// cosets of the support.
#[derive(Clone, Debug)]
pub struct DimensionFunction {
    pub d: GradedAlgebra,
    pub embed: GroupHom,
    pub kappa: BTreeMap<GroupElement, u32>,
}

impl DimensionFunction {
    pub fn ambient(&self) -> &AbelianGroup {
        &self.embed.codomain
    }

    /// The support subgroup H = image of D's grading group in G.
    pub fn support_subgroup(&self) -> Vec<GroupElement> {
        self.ambient().span(&self.embed.images)
    }

    /// Lexicographically least representative of g + H.
    pub fn canonical_rep(&self, g: &GroupElement, h_sub: &[GroupElement]) -> GroupElement {
        h_sub.iter().map(|h| self.ambient().add(g, h)).min().expect("H is nonempty")
    }

    pub fn total(&self) -> u32 {
        self.kappa.values().sum()
    }

    pub fn check(&self) -> Result<(), ConstructError> {
        if self.embed.domain != *self.d.group() {
            return Err(ConstructError::BadInput("embedding domain must be D's grading group".into()));
        }
        let h_sub = self.support_subgroup();
        if h_sub.len() as u64 != self.d.group().order() {
            return Err(ConstructError::BadInput("support embedding is not injective".into()));
        }
        for (rep, &count) in &self.kappa {
            if !self.ambient().contains(rep) {
                return Err(ConstructError::BadInput("kappa key outside the ambient group".into()));
            }
            if count == 0 {
                return Err(ConstructError::BadInput("kappa multiplicities must be positive".into()));
            }
            if *rep != self.canonical_rep(rep, &h_sub) {
                return Err(ConstructError::BadInput(
                    "kappa keys must be canonical (lex-least) coset representatives".into(),
                ));
            }
        }
        if self.total() == 0 {
            return Err(ConstructError::BadInput("kappa must have positive total".into()));
        }
        Ok(())
    }
}

/// End_D(U) for the graded vector space U described by kappa: a block matrix
/// algebra of size s = sum kappa over D, graded by deg(E_ab x) =
/// g_a + deg(x) - g_b in the ambient group.
pub fn endo_algebra(df: &DimensionFunction) -> Result<GradedAlgebra, ConstructError> {
    df.check()?;
    let d = &df.d;
    let g = df.ambient();
    let dim_d = d.dim();
    let mut reps: Vec<GroupElement> = Vec::new();
    for (rep, &count) in &df.kappa {
        for _ in 0..count {
            reps.push(rep.clone());
        }
    }
    let s = reps.len();
    let dim = s * s * dim_d;
    let mut degrees = Vec::with_capacity(dim);
    for a in 0..s {
        for bb in 0..s {
            for m in 0..dim_d {
                let dm = df.embed.apply(&d.degrees()[m]);
                let deg = g.sub(&g.add(&reps[a], &dm), &reps[bb]);
                degrees.push(deg);
            }
        }
    }
    let mut builder = AlgebraBuilder::new(g.clone(), degrees, d.conductor());
    let at = |a: usize, b: usize, m: usize| (a * s + b) * dim_d + m;
    for a in 0..s {
        for bb in 0..s {
            for m in 0..dim_d {
                for c in 0..s {
                    for m2 in 0..dim_d {
                        // (E_ab x)(E_bc y) = E_ac xy; other column/row pairs vanish
                        let entry = d.entry(m, m2);
                        if entry.is_empty() {
                            continue;
                        }
                        let terms: Vec<(usize, Scalar)> = entry
                            .iter()
                            .map(|(k, z)| (at(a, c, *k as usize), (**z).clone()))
                            .collect();
                        builder.set_product(at(a, bb, m), at(bb, c, m2), terms);
                    }
                }
            }
        }
    }
    let mut unit = vec![Scalar::zero(d.conductor()); dim];
    for a in 0..s {
        for (m, c) in d.unit().iter().enumerate() {
            unit[at(a, a, m)] = c.clone();
        }
    }
    builder.set_unit(unit);
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::DivisionType;

    #[test]
    fn presentation_rejects_inconsistencies() {
        let g = AbelianGroup::new(vec![4, 2]);
        let mut p = Presentation {
            degrees: vec![g.generator(0), g.generator(1)],
            group: g.clone(),
            powers: vec![4, 2],
            power_scalars: vec![Scalar::from_integer(8, -1), Scalar::from_integer(8, -1)],
            comm: vec![
                vec![Scalar::one(8), Scalar::i_unit(8)],
                vec![Scalar::i_unit(8), Scalar::one(8)],
            ],
            conductor: 8,
        };
        // c12 * c21 = i * i = -1 != 1
        assert!(matches!(
            from_presentation(&p),
            Err(ConstructError::InconsistentPresentation(_))
        ));
        // c12 = i with m1 = 4 is fine only if c12^4 = 1 (it is), but c21 must
        // be the inverse
        p.comm[0][1] = Scalar::i_unit(8);
        p.comm[1][0] = Scalar::i_unit(8).inv().unwrap();
        // now c21^{m2} = (-i)^2 = -1 != 1: x2^2 is not central
        assert!(matches!(
            from_presentation(&p),
            Err(ConstructError::InconsistentPresentation(_))
        ));
    }

    #[test]
    fn trivial_presentations() {
        let r = building_block(BlockName::R);
        assert_eq!(r.dim(), 1);
        assert!(r.validate().pass);
        let c = building_block(BlockName::C);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.support().len(), 1);
        assert!(c.validate().pass);
    }

    #[test]
    fn m2_8_matches_its_matrix_realization() {
        // independent oracle: x1 -> omega A, x2 -> C as exact 2x2 complex
        // matrices; every structure constant of the presentation must agree
        // with literal matrix multiplication.
        type M2 = [[Scalar; 2]; 2];
        let n = 8u64;
        let zero = || Scalar::zero(n);
        let matmul = |x: &M2, y: &M2| -> M2 {
            let mut out = [[zero(), zero()], [zero(), zero()]];
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] = x[r][0].mul(&y[0][c]).add(&x[r][1].mul(&y[1][c]));
                }
            }
            out
        };
        let w = Scalar::omega(n);
        let one = Scalar::one(n);
        let m1 = Scalar::from_integer(n, -1);
        let omega_a: M2 = [[w.clone(), zero()], [zero(), w.neg()]];
        let cmat: M2 = [[zero(), one.clone()], [m1.clone(), zero()]];
        let ident: M2 = [[one.clone(), zero()], [zero(), one.clone()]];

        let alg = building_block(BlockName::M2_8);
        let mono = alg.monomials().unwrap().clone();
        // matrix of each basis monomial x1^a x2^b
        let mats: Vec<M2> = (0..8)
            .map(|idx| {
                let e = &mono.exps[idx];
                let mut m = ident.clone();
                for _ in 0..e[0] {
                    m = matmul(&m, &omega_a);
                }
                for _ in 0..e[1] {
                    m = matmul(&m, &cmat);
                }
                m
            })
            .collect();
        // express a matrix over the monomial matrices via exact elimination;
        // flatten to 8 totally real coordinates so that the real basis of
        // M_2(C) stays independent over the coefficient field
        let flat = |m: &M2| -> Vec<Scalar> {
            let mut out = Vec::with_capacity(8);
            for r in 0..2 {
                for c in 0..2 {
                    let (re, im) = m[r][c].re_im();
                    out.push(re);
                    out.push(im);
                }
            }
            out
        };
        let tracked =
            crate::linalg::TrackedSpan::from_basis(&mats.iter().map(flat).collect::<Vec<_>>(), 8, n);
        for i in 0..8 {
            for j in 0..8 {
                let prod = matmul(&mats[i], &mats[j]);
                let coords = tracked.coords(&flat(&prod)).expect("product is in the monomial span");
                let expect: Vec<(usize, Scalar)> =
                    coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                let got: Vec<(usize, Scalar)> =
                    alg.entry(i, j).iter().map(|(k, c)| (*k as usize, (**c).clone())).collect();
                assert_eq!(got, expect, "structure constant mismatch at ({}, {})", i, j);
            }
        }
        // R_{alpha^2} = <iI>: x1^2 is i times the identity matrix
        let x1x1 = alg.entry(mono.gens[0], mono.gens[0]);
        assert_eq!(x1x1.len(), 1);
        let (k, c) = (&x1x1[0].0, &x1x1[0].1);
        assert!(c.is_one());
        let m = &mats[*k as usize];
        assert_eq!(m[0][0], Scalar::i_unit(n));
        assert_eq!(m[1][1], Scalar::i_unit(n));
    }

    #[test]
    fn clifford_small_cases() {
        let h = clifford_graded(2, 0);
        assert_eq!(h.dim(), 4);
        assert!(h.validate().pass);
        assert_eq!(h.underlying_type().unwrap(), (1, DivisionType::H));

        let r = clifford_graded(0, 0);
        assert_eq!(r.dim(), 1);
        assert_eq!(r.underlying_type().unwrap(), (1, DivisionType::R));

        let m2 = clifford_graded(1, 1);
        assert!(m2.validate().pass);
        assert_eq!(m2.underlying_type().unwrap(), (2, DivisionType::R));
        // squares along the frame: e1^2 = -1 at alpha, e2^2 = +1 at beta,
        // (e1 e2)^2 = +1 at alpha beta
        let data = m2.commutation_data(None).unwrap();
        let g = m2.group();
        let alpha = g.element(vec![1, 0]).unwrap();
        let beta = g.element(vec![0, 1]).unwrap();
        let gamma = g.element(vec![1, 1]).unwrap();
        assert_eq!(data.squares[&alpha], Scalar::from_integer(8, -1));
        assert_eq!(data.squares[&beta], Scalar::one(8));
        assert_eq!(data.squares[&gamma], Scalar::one(8));
    }

    #[test]
    fn building_blocks_validate_with_expected_shapes() {
        for name in ALL_BLOCKS {
            let alg = building_block(name);
            let report = alg.validate();
            assert!(report.pass, "{:?}: {:?}", name, report.witness);
        }
        let expect_dim = |n: BlockName| building_block(n).dim();
        assert_eq!(expect_dim(BlockName::R), 1);
        assert_eq!(expect_dim(BlockName::C), 2);
        assert_eq!(expect_dim(BlockName::C2), 2);
        assert_eq!(expect_dim(BlockName::H), 4);
        assert_eq!(expect_dim(BlockName::H2), 4);
        assert_eq!(expect_dim(BlockName::H4), 4);
        assert_eq!(expect_dim(BlockName::M2_2), 4);
        assert_eq!(expect_dim(BlockName::M2_4), 4);
        assert_eq!(expect_dim(BlockName::M2_8), 8);
        assert_eq!(expect_dim(BlockName::M2CZ4), 8);
        assert_eq!(expect_dim(BlockName::M4_4), 16);
        assert_eq!(expect_dim(BlockName::M4_32), 32);
        assert_eq!(expect_dim(BlockName::M4CZ4Z2Z2), 32);
    }

    #[test]
    fn h4_components_are_lines() {
        let h4 = building_block(BlockName::H4);
        assert_eq!(h4.support().len(), 4);
        for g in h4.support() {
            assert_eq!(h4.component_indices(&g).len(), 1);
        }
        assert_eq!(h4.underlying_type().unwrap(), (1, DivisionType::H));
    }

    #[test]
    fn m2_2_identity_component_is_complex() {
        // R_e = <I, C> with C^2 = -I, the Lemma-compatible choice
        let alg = building_block(BlockName::M2_2);
        let re = alg.identity_component();
        assert_eq!(re.dim(), 2);
        assert_eq!(alg.recognize_division(&re).unwrap(), Some(DivisionType::C));
        let rep = alg.check_division_grading().unwrap();
        assert!(rep.is_division);
        assert_eq!(rep.re_type, Some(DivisionType::C));
    }

    #[test]
    fn m2c_z4_components() {
        let alg = building_block(BlockName::M2CZ4);
        assert!(alg.validate().pass);
        assert_eq!(alg.group().orders(), &[4]);
        assert_eq!(alg.identity_component().dim(), 2);
        let rep = alg.check_division_grading().unwrap();
        assert!(rep.is_division);
        assert_eq!(rep.re_type, Some(DivisionType::C));
        assert_eq!(alg.underlying_type().unwrap(), (2, DivisionType::C));
    }

    #[test]
    fn m4_32_graded_subalgebra_of_clifford_triple() {
        // images of e2, e3, e4: x2, x3, and x1^2 x4 (squares -1, -1, +1)
        let alg = building_block(BlockName::M4_32);
        let mono = alg.monomials().unwrap().clone();
        let x2 = alg.basis_vec(mono.gens[1]);
        let x3 = alg.basis_vec(mono.gens[2]);
        let x1 = alg.basis_vec(mono.gens[0]);
        let x4 = alg.basis_vec(mono.gens[3]);
        let x1sq = alg.multiply(&x1, &x1).unwrap();
        let e4img = alg.multiply(&x1sq, &x4).unwrap();
        let sub = alg.graded_subalgebra(&[x2, x3, e4img]).unwrap();
        assert_eq!(sub.dim(), 8);
        let degs: std::collections::BTreeSet<_> = sub.degrees.iter().cloned().collect();
        assert_eq!(degs.len(), 8);
        let as_alg = alg.subalgebra_to_algebra(&sub).unwrap();
        assert_eq!(as_alg.underlying_type().unwrap(), (2, DivisionType::C));
        // powers of a single generator close to a 4-dimensional subalgebra in M2_8
        let m28 = building_block(BlockName::M2_8);
        let g1 = m28.basis_vec(m28.monomials().unwrap().gens[0]);
        let sub = m28.graded_subalgebra(&[g1]).unwrap();
        assert_eq!(sub.dim(), 4);
        let degs: std::collections::BTreeSet<_> = sub.degrees.iter().cloned().collect();
        assert_eq!(degs.len(), 4);
    }

    #[test]
    fn pauli_z2_real_form() {
        let alg = pauli_grading(&AbelianGroup::new(vec![2]));
        assert_eq!(alg.dim(), 8);
        assert!(alg.validate().pass);
        let re = alg.identity_component();
        assert_eq!(re.dim(), 2);
        assert_eq!(alg.recognize_division(&re).unwrap(), Some(DivisionType::C));
        assert_eq!(alg.underlying_type().unwrap(), (2, DivisionType::C));
        // the center is C I and lives entirely in degree e
        let z = alg.center();
        assert_eq!(z.dim(), 2);
        assert!(z.degrees.iter().all(|d| *d == alg.group().identity()));
    }

    #[test]
    fn pauli_trivial_group_is_complex_numbers() {
        let alg = pauli_grading(&AbelianGroup::trivial());
        assert_eq!(alg.dim(), 2);
        assert_eq!(alg.support().len(), 1);
        assert_eq!(alg.underlying_type().unwrap(), (1, DivisionType::C));
    }

    #[test]
    fn pauli_z3_sigma_from_clock_shift_matrices() {
        // independent 3x3 clock/shift oracle over Q(zeta_24)
        let n = 24u64;
        let eps = Scalar::root_of_unity(n, 8); // primitive cube root
        let zero = || Scalar::zero(n);
        let one = || Scalar::one(n);
        type M3 = Vec<Vec<Scalar>>;
        let clock: M3 = vec![
            vec![one(), zero(), zero()],
            vec![zero(), eps.clone(), zero()],
            vec![zero(), zero(), eps.mul(&eps)],
        ];
        let shift: M3 = vec![
            vec![zero(), one(), zero()],
            vec![zero(), zero(), one()],
            vec![one(), zero(), zero()],
        ];
        let matmul = |x: &M3, y: &M3| -> M3 {
            (0..3)
                .map(|r| {
                    (0..3)
                        .map(|c| {
                            (0..3).fold(zero(), |acc, t| acc.add(&x[r][t].mul(&y[t][c])))
                        })
                        .collect()
                })
                .collect()
        };
        let ab = matmul(&clock, &shift);
        let ba = matmul(&shift, &clock);
        // X_a X_b = sigma * X_b X_a: read sigma off the (0,1) entries
        let sigma_oracle = ab[0][1].div(&ba[0][1]).unwrap();
        assert!(!sigma_oracle.is_one());
        assert!(sigma_oracle.pow(3).is_one());

        let alg = pauli_grading(&AbelianGroup::new(vec![3]));
        assert_eq!(alg.dim(), 18);
        assert!(alg.validate().pass);
        let data = alg.commutation_data(None).unwrap();
        let a = alg.group().element(vec![1, 0]).unwrap();
        let b = alg.group().element(vec![0, 1]).unwrap();
        assert_eq!(data.sigma[&(a, b)], sigma_oracle);
        assert!(data.nonsingular && data.skew && data.bimultiplicative && data.roots_of_unity);
    }

    #[test]
    fn pauli_group_splitting_guard() {
        assert!(pauli_from_group(&AbelianGroup::new(vec![2, 4])).is_err());
        let ok = pauli_from_group(&AbelianGroup::new(vec![2, 2])).unwrap();
        assert_eq!(ok.dim(), 8);
    }

    #[test]
    fn catalog_labels_parse_and_build() {
        let l: ClassLabel = "type=ix k=2".parse().unwrap();
        assert_eq!(l, ClassLabel::Theorem(TypeKind::IX, 2));
        assert_eq!(l.to_string(), "type=ix k=2");
        let l: ClassLabel = "type=xiii H=2,2".parse().unwrap();
        assert_eq!(l, ClassLabel::Pauli(vec![2, 2]));
        assert!("type=iii k=1".parse::<ClassLabel>().is_err());
        assert!("type=ix k=0".parse::<ClassLabel>().is_err());

        let a = catalog(&ClassLabel::Theorem(TypeKind::I, 0)).unwrap();
        assert_eq!(a.dim(), 1);
        let a = catalog(&ClassLabel::Theorem(TypeKind::I, 1)).unwrap();
        assert_eq!(a.dim(), 4);
        let a = catalog(&ClassLabel::Theorem(TypeKind::XI, 0)).unwrap();
        assert_eq!(a.dim(), 8);
        assert_eq!(a.identity_component().dim(), 4);
        let a = catalog(&ClassLabel::Theorem(TypeKind::IX, 2)).unwrap();
        assert_eq!(a.dim(), 32);
    }

    #[test]
    fn endo_algebra_shapes() {
        // D = R trivial, G = Z2, kappa = 1 on each coset: M_2(R) with the
        // shift grading
        let d = building_block(BlockName::R);
        let g = AbelianGroup::new(vec![2]);
        let embed = GroupHom::new(d.group().clone(), g.clone(), vec![g.identity()]).unwrap();
        let mut kappa = BTreeMap::new();
        kappa.insert(g.identity(), 1);
        kappa.insert(g.generator(0), 1);
        let df = DimensionFunction { d, embed, kappa };
        let alg = endo_algebra(&df).unwrap();
        assert_eq!(alg.dim(), 4);
        assert!(alg.validate().pass);
        assert_eq!(alg.underlying_type().unwrap(), (2, DivisionType::R));
        assert_eq!(alg.identity_component().dim(), 2);
        // diagonal blocks have degree e, off-diagonal degree a
        assert_eq!(alg.component_indices(&alg.group().identity()).len(), 2);

        // kappa concentrated on one coset with s = 1: D itself
        let d = building_block(BlockName::C2);
        let g2 = d.group().clone();
        let embed = GroupHom::identity(&g2);
        let mut kappa = BTreeMap::new();
        kappa.insert(g2.identity(), 1);
        let df = DimensionFunction { d: d.clone(), embed, kappa };
        let alg = endo_algebra(&df).unwrap();
        assert_eq!(alg.dim(), d.dim());
        assert!(alg.validate().pass);

        // D = C2, kappa = 2 on the single coset: dim 8, R_e of dim 4
        let embed = GroupHom::identity(&g2);
        let mut kappa = BTreeMap::new();
        kappa.insert(g2.identity(), 2);
        let df = DimensionFunction { d, embed, kappa };
        let alg = endo_algebra(&df).unwrap();
        assert_eq!(alg.dim(), 8);
        assert!(alg.validate().pass);
        assert_eq!(alg.identity_component().dim(), 4);
    }

    #[test]
    fn endo_rejects_bad_kappa() {
        let d = building_block(BlockName::R);
        let g = AbelianGroup::new(vec![2]);
        let embed = GroupHom::new(d.group().clone(), g.clone(), vec![g.identity()]).unwrap();
        let df = DimensionFunction { d, embed, kappa: BTreeMap::new() };
        assert!(endo_algebra(&df).is_err());
    }
}
