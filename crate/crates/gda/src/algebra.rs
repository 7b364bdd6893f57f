//! Structure-constant graded algebras with degree-labeled bases: products,
//! validation, components, centralizers, tensor products, coarsenings,
//! graded subalgebras and universal grading groups.

use crate::abgroup::{AbelianGroup, GroupElement, GroupHom};
use crate::linalg::{nullspace, Span, TrackedSpan};
use crate::scalar::{Scalar, ScalarError};
use crate::abgroup::smith_universal_group;
use num_rational::BigRational;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("not a monomial frame: {0}")]
    NotMonomial(String),
    #[error("algebra is not simple: {0}")]
    NotSimple(String),
    #[error("algebra is not semisimple (degenerate trace form)")]
    NotSemisimple,
    #[error("not a division grading")]
    NotDivision,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Monomial bookkeeping for algebras built from presentations: basis element
/// m is the normal-ordered product of the generators with exponents
/// `exps[m]`. Survives tensor products and coarsenings.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub exps: Vec<Vec<u32>>,
    pub gens: Vec<usize>,
    pub unit_index: usize,
}

/// Distinguished frame: one chosen basis vector per support element. For
/// complex-centroid gradings (Pauli real forms) `imag` records the action of
/// the central imaginary unit on each basis vector.
#[derive(Clone, Debug)]
pub struct Frame {
    pub reps: BTreeMap<GroupElement, usize>,
    pub imag: Option<Vec<(usize, Scalar)>>,
}

pub type SparseVec = Vec<(usize, Scalar)>;

/// Finite-dimensional algebra over the reals, presented by exact structure
/// constants on a degree-labeled basis. Immutable after construction.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    group: AbelianGroup,
    degrees: Vec<GroupElement>,
    unit: Vec<Scalar>,
    table: Vec<Vec<(u32, Arc<Scalar>)>>,
    conductor: u64,
    pub(crate) frame_hint: Option<Frame>,
    pub(crate) monomials: Option<MonomialBasis>,
}

#[derive(PartialEq, Eq, Hash)]
struct InternKey(Vec<BigRational>);

/// Builder with scalar interning so equal structure constants share storage.
pub struct AlgebraBuilder {
    group: AbelianGroup,
    degrees: Vec<GroupElement>,
    unit: Option<Vec<Scalar>>,
    table: Vec<Vec<(u32, Arc<Scalar>)>>,
    conductor: u64,
    intern: HashMap<InternKey, Arc<Scalar>>,
    frame_hint: Option<Frame>,
    monomials: Option<MonomialBasis>,
}

impl AlgebraBuilder {
    pub fn new(group: AbelianGroup, degrees: Vec<GroupElement>, conductor: u64) -> AlgebraBuilder {
        let dim = degrees.len();
        AlgebraBuilder {
            group,
            degrees,
            unit: None,
            table: vec![Vec::new(); dim * dim],
            conductor,
            intern: HashMap::new(),
            frame_hint: None,
            monomials: None,
        }
    }

    fn intern(&mut self, s: Scalar) -> Option<Arc<Scalar>> {
        let s = s.promote(self.conductor.lcm_with(s.conductor()));
        debug_assert_eq!(s.conductor(), self.conductor);
        if s.is_zero() {
            return None;
        }
        let key = InternKey(s.coeffs().to_vec());
        Some(self.intern.entry(key).or_insert_with(|| Arc::new(s)).clone())
    }

    pub fn set_product(&mut self, i: usize, j: usize, terms: Vec<(usize, Scalar)>) {
        let dim = self.degrees.len();
        let mut out: Vec<(u32, Arc<Scalar>)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            let c = c.promote(self.conductor);
            if let Some(a) = self.intern(c) {
                out.push((k as u32, a));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        self.table[i * dim + j] = out;
    }

    pub fn set_unit(&mut self, unit: Vec<Scalar>) {
        self.unit = Some(unit.into_iter().map(|c| c.promote(self.conductor)).collect());
    }

    pub fn set_frame(&mut self, frame: Frame) {
        self.frame_hint = Some(frame);
    }

    pub fn set_monomials(&mut self, m: MonomialBasis) {
        self.monomials = Some(m);
    }

    pub fn build(self) -> GradedAlgebra {
        GradedAlgebra {
            group: self.group,
            degrees: self.degrees,
            unit: self.unit.expect("unit must be set"),
            table: self.table,
            conductor: self.conductor,
            frame_hint: self.frame_hint,
            monomials: self.monomials,
        }
    }
}

trait LcmWith {
    fn lcm_with(self, other: u64) -> u64;
}

impl LcmWith for u64 {
    fn lcm_with(self, other: u64) -> u64 {
        num_integer::Integer::lcm(&self, &other)
    }
}

/// Homogeneous-basis subspace of a parent algebra, stored by coordinate
/// vectors in the parent basis.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub basis: Vec<Vec<Scalar>>,
    pub degrees: Vec<GroupElement>,
}

impl Subalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub pass: bool,
    pub grading_ok: bool,
    pub unit_ok: bool,
    pub assoc_ok: bool,
    pub support_generates: bool,
    pub witness: Option<String>,
}

impl GradedAlgebra {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.degrees[i]
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn entry(&self, i: usize, j: usize) -> &[(u32, Arc<Scalar>)] {
        &self.table[i * self.dim() + j]
    }

    pub fn frame_hint(&self) -> Option<&Frame> {
        self.frame_hint.as_ref()
    }

    pub fn monomials(&self) -> Option<&MonomialBasis> {
        self.monomials.as_ref()
    }

    /// Sorted list of distinct degrees with a nonzero component.
    pub fn support(&self) -> Vec<GroupElement> {
        let set: BTreeSet<GroupElement> = self.degrees.iter().cloned().collect();
        set.into_iter().collect()
    }

    pub fn component_indices(&self, g: &GroupElement) -> Vec<usize> {
        (0..self.dim()).filter(|&i| &self.degrees[i] == g).collect()
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![Scalar::zero(self.conductor); self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        v[i] = Scalar::one(self.conductor);
        v
    }

    pub fn sparsify(&self, v: &[Scalar]) -> SparseVec {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
    }

    fn densify(&self, v: &SparseVec) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, c) in v {
            out[*i] = out[*i].add(c);
        }
        out
    }

    pub fn mul_sparse(&self, xs: &SparseVec, ys: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, xc) in xs {
            for (j, yc) in ys {
                let f = xc.mul(yc);
                if f.is_zero() {
                    continue;
                }
                for (k, c) in self.entry(*i, *j) {
                    let add = f.mul(c);
                    let slot = acc.entry(*k as usize).or_insert_with(|| Scalar::zero(self.conductor));
                    *slot = slot.add(&add);
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Bilinear product of coordinate vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(AlgebraError::BadInput(format!(
                "coordinate length mismatch: expected {}, got {} and {}",
                self.dim(),
                x.len(),
                y.len()
            )));
        }
        let prod = self.mul_sparse(&self.sparsify(x), &self.sparsify(y));
        Ok(self.densify(&prod))
    }

    /// b_i * (sparse vector).
    pub fn mul_basis_sparse(&self, i: usize, ys: &SparseVec) -> SparseVec {
        self.mul_sparse(&vec![(i, Scalar::one(self.conductor))], ys)
    }

    pub fn mul_sparse_basis(&self, xs: &SparseVec, j: usize) -> SparseVec {
        self.mul_sparse(xs, &vec![(j, Scalar::one(self.conductor))])
    }

    /// Degree of a nonzero homogeneous vector; None when zero or mixed.
    pub fn degree_of_vec(&self, v: &[Scalar]) -> Option<GroupElement> {
        let mut deg: Option<GroupElement> = None;
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                match &deg {
                    None => deg = Some(self.degrees[i].clone()),
                    Some(d) if *d == self.degrees[i] => {}
                    _ => return None,
                }
            }
        }
        deg
    }

    // -- validation --------------------------------------------------------

    pub fn validate(&self) -> ValidationReport {
        let mut witness: Option<String> = None;
        let grading_ok = self.check_grading(&mut witness);
        let unit_ok = self.check_unit(&mut witness);
        let support_generates = {
            let ok = self.group.span(&self.support()).len() as u64 == self.group.order();
            if !ok && witness.is_none() {
                witness = Some("support does not generate the grading group".into());
            }
            ok
        };
        let assoc_ok = if grading_ok {
            match self.check_associativity() {
                None => true,
                Some((i, j, k)) => {
                    if witness.is_none() {
                        witness = Some(format!("associativity fails at basis triple ({}, {}, {})", i, j, k));
                    }
                    false
                }
            }
        } else {
            false
        };
        ValidationReport {
            pass: grading_ok && unit_ok && assoc_ok && support_generates,
            grading_ok,
            unit_ok,
            assoc_ok,
            support_generates,
            witness,
        }
    }

    fn check_grading(&self, witness: &mut Option<String>) -> bool {
        let dim = self.dim();
        // index degrees into the support list once; the scan is then integer-only
        let support = self.support();
        let pos: HashMap<&GroupElement, usize> = support.iter().enumerate().map(|(p, g)| (g, p)).collect();
        let dpos: Vec<usize> = self.degrees.iter().map(|g| pos[g]).collect();
        let m = support.len();
        let mut sum = vec![usize::MAX; m * m];
        for a in 0..m {
            for b in 0..m {
                let s = self.group.add(&support[a], &support[b]);
                sum[a * m + b] = pos.get(&s).copied().unwrap_or(usize::MAX);
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let target = sum[dpos[i] * m + dpos[j]];
                for (k, _) in self.entry(i, j) {
                    if dpos[*k as usize] != target {
                        if witness.is_none() {
                            *witness = Some(format!(
                                "grading violated: b{} * b{} has a term at b{} outside the product component",
                                i, j, k
                            ));
                        }
                        return false;
                    }
                }
            }
        }
        true
    }

    fn check_unit(&self, witness: &mut Option<String>) -> bool {
        if self.unit.len() != self.dim() || self.unit.iter().all(|c| c.is_zero()) {
            *witness = Some("unit vector is zero or has wrong length".into());
            return false;
        }
        let e = self.group.identity();
        for (i, c) in self.unit.iter().enumerate() {
            if !c.is_zero() && self.degrees[i] != e {
                if witness.is_none() {
                    *witness = Some(format!("unit has a component of nontrivial degree at b{}", i));
                }
                return false;
            }
        }
        let us = self.sparsify(&self.unit);
        for i in 0..self.dim() {
            let bi = vec![(i, Scalar::one(self.conductor))];
            let left = self.mul_sparse(&us, &bi);
            let right = self.mul_sparse(&bi, &us);
            if left != bi || right != bi {
                if witness.is_none() {
                    *witness = Some(format!("unit law fails at b{}", i));
                }
                return false;
            }
        }
        true
    }

    /// Exhaustive associativity scan over basis triples, in interned scalar-id
    /// space so the inner loop is integer work plus memoized field operations.
    /// Returns the lexicographically least failing triple.
    fn check_associativity(&self) -> Option<(usize, usize, usize)> {
        let dim = self.dim();
        let mut vals: Vec<Arc<Scalar>> = vec![Arc::new(Scalar::zero(self.conductor))];
        let mut index: HashMap<InternKey, u32> = HashMap::new();
        index.insert(InternKey(vals[0].coeffs().to_vec()), 0);
        let mut tids: Vec<Vec<(u32, u32)>> = Vec::with_capacity(dim * dim);
        for cell in &self.table {
            let mut out = Vec::with_capacity(cell.len());
            for (k, c) in cell {
                let key = InternKey(c.coeffs().to_vec());
                let id = *index.entry(key).or_insert_with(|| {
                    vals.push(c.clone());
                    (vals.len() - 1) as u32
                });
                out.push((*k, id));
            }
            tids.push(out);
        }
        let base = Calc::new(self.conductor, vals, index);
        (0..dim)
            .into_par_iter()
            .map_init(
                || base.fork(),
                |calc, i| {
                    for j in 0..dim {
                        for k in 0..dim {
                            if !assoc_triple_ok(&tids, dim, i, j, k, calc) {
                                return Some((i, j, k));
                            }
                        }
                    }
                    None
                },
            )
            .flatten()
            .min()
    }

    // -- components, centralizers ------------------------------------------

    /// The identity component R_e as a subalgebra (unit basis vectors).
    pub fn identity_component(&self) -> Subalgebra {
        let e = self.group.identity();
        let idx = self.component_indices(&e);
        Subalgebra {
            basis: idx.iter().map(|&i| self.basis_vec(i)).collect(),
            degrees: idx.iter().map(|_| e.clone()).collect(),
        }
    }

    pub fn component_dims_uniform(&self) -> bool {
        let e_dim = self.component_indices(&self.group.identity()).len();
        self.support().iter().all(|g| self.component_indices(g).len() == e_dim)
    }

    /// Graded centralizer of a list of sparse vectors, solved per component.
    fn centralizer_sparse(&self, others: &[SparseVec]) -> Subalgebra {
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for g in self.support() {
            let idx = self.component_indices(&g);
            let mut rows: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
            for (spos, s) in others.iter().enumerate() {
                for (upos, &u) in idx.iter().enumerate() {
                    let left = self.mul_basis_sparse(u, s);
                    let right = self.mul_sparse_basis(s, u);
                    for (k, c) in sparse_sub(&left, &right, self.conductor) {
                        let row = rows
                            .entry((spos, k))
                            .or_insert_with(|| vec![Scalar::zero(self.conductor); idx.len()]);
                        row[upos] = row[upos].add(&c);
                    }
                }
            }
            let row_list: Vec<Vec<Scalar>> = rows.into_values().collect();
            for sol in nullspace(&row_list, idx.len(), self.conductor) {
                let mut full = self.zero_vec();
                for (upos, &u) in idx.iter().enumerate() {
                    full[u] = sol[upos].clone();
                }
                basis.push(full);
                degrees.push(g.clone());
            }
        }
        Subalgebra { basis, degrees }
    }

    /// Elements commuting with every basis vector of `sub`.
    pub fn centralizer(&self, sub: &Subalgebra) -> Subalgebra {
        let others: Vec<SparseVec> = sub.basis.iter().map(|v| self.sparsify(v)).collect();
        self.centralizer_sparse(&others)
    }

    /// The center Z(R) with a homogeneous basis.
    pub fn center(&self) -> Subalgebra {
        let others: Vec<SparseVec> =
            (0..self.dim()).map(|j| vec![(j, Scalar::one(self.conductor))]).collect();
        self.centralizer_sparse(&others)
    }

    // -- constructions on algebras -----------------------------------------

    /// Tensor product with the product grading over the direct product group.
    pub fn tensor_product(&self, other: &GradedAlgebra) -> GradedAlgebra {
        let group = AbelianGroup::new(
            self.group.orders().iter().chain(other.group.orders()).cloned().collect(),
        );
        let (da, db) = (self.dim(), other.dim());
        let conductor = self.conductor.lcm_with(other.conductor);
        let mut degrees = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                let mut residues = self.degrees[i].residues.clone();
                residues.extend(other.degrees[j].residues.iter().cloned());
                degrees.push(GroupElement { residues });
            }
        }
        let mut b = AlgebraBuilder::new(group, degrees, conductor);
        for i1 in 0..da {
            for j1 in 0..db {
                for i2 in 0..da {
                    for j2 in 0..db {
                        let e1 = self.entry(i1, i2);
                        if e1.is_empty() {
                            continue;
                        }
                        let e2 = other.entry(j1, j2);
                        if e2.is_empty() {
                            continue;
                        }
                        let mut terms = Vec::with_capacity(e1.len() * e2.len());
                        for (k1, c1) in e1 {
                            for (k2, c2) in e2 {
                                terms.push((*k1 as usize * db + *k2 as usize, c1.mul(c2)));
                            }
                        }
                        b.set_product(i1 * db + j1, i2 * db + j2, terms);
                    }
                }
            }
        }
        let mut unit = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                unit.push(self.unit[i].mul(&other.unit[j]));
            }
        }
        b.set_unit(unit);
        if let (Some(ma), Some(mb)) = (&self.monomials, &other.monomials) {
            if self.unit_is_basis(ma.unit_index) && other.unit_is_basis(mb.unit_index) {
                let exps = (0..da * db)
                    .map(|t| {
                        let (i, j) = (t / db, t % db);
                        let mut e = ma.exps[i].clone();
                        e.extend(mb.exps[j].iter().cloned());
                        e
                    })
                    .collect();
                let mut gens: Vec<usize> =
                    ma.gens.iter().map(|&g| g * db + mb.unit_index).collect();
                gens.extend(mb.gens.iter().map(|&g| ma.unit_index * db + g));
                b.set_monomials(MonomialBasis {
                    exps,
                    gens,
                    unit_index: ma.unit_index * db + mb.unit_index,
                });
            }
        }
        b.build()
    }

    fn unit_is_basis(&self, idx: usize) -> bool {
        self.unit.iter().enumerate().all(|(i, c)| if i == idx { c.is_one() } else { c.is_zero() })
    }

    /// Relabel degrees through a surjective homomorphism (factor-grading).
    pub fn coarsen(&self, proj: &GroupHom) -> Result<GradedAlgebra, AlgebraError> {
        if proj.domain != self.group {
            return Err(AlgebraError::BadInput("projection domain does not match the grading group".into()));
        }
        if !proj.is_surjective() {
            return Err(AlgebraError::BadInput("projection must be surjective".into()));
        }
        let degrees = self.degrees.iter().map(|g| proj.apply(g)).collect();
        Ok(GradedAlgebra {
            group: proj.codomain.clone(),
            degrees,
            unit: self.unit.clone(),
            table: self.table.clone(),
            conductor: self.conductor,
            frame_hint: None,
            monomials: self.monomials.clone(),
        })
    }

    /// Smallest graded subalgebra containing the given homogeneous vectors.
    pub fn graded_subalgebra(&self, gens: &[Vec<Scalar>]) -> Result<Subalgebra, AlgebraError> {
        let mut items: Vec<(Vec<Scalar>, GroupElement)> = Vec::new();
        let mut span = Span::new(self.dim(), self.conductor);
        for g in gens {
            let deg = self
                .degree_of_vec(g)
                .ok_or_else(|| AlgebraError::BadInput("generator is zero or not homogeneous".into()))?;
            if span.insert(g) {
                items.push((g.clone(), deg));
            }
        }
        let mut k = 0;
        while k < items.len() {
            for l in 0..=k {
                for (a, b) in [(k, l), (l, k)] {
                    let p = self.multiply(&items[a].0, &items[b].0)?;
                    if p.iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    if span.insert(&p) {
                        let deg = self.group.add(&items[a].1, &items[b].1);
                        items.push((p, deg));
                    }
                }
            }
            k += 1;
        }
        // canonical homogeneous basis: echelon rows are homogeneous because
        // all inserted vectors are, but re-derive degrees from the rows
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for row in span.rows() {
            let deg = self
                .degree_of_vec(row)
                .ok_or_else(|| AlgebraError::Internal("closure produced a non-homogeneous vector".into()))?;
            basis.push(row.to_vec());
            degrees.push(deg);
        }
        Ok(Subalgebra { basis, degrees })
    }

    /// Express a closed subalgebra as a standalone algebra on its own basis.
    pub fn subalgebra_to_algebra(&self, sub: &Subalgebra) -> Result<GradedAlgebra, AlgebraError> {
        let k = sub.dim();
        let tracked = TrackedSpan::from_basis(&sub.basis, self.dim(), self.conductor);
        let unit_coords = tracked
            .coords(&self.unit)
            .ok_or_else(|| AlgebraError::BadInput("subalgebra does not contain the unit".into()))?;
        let mut b = AlgebraBuilder::new(self.group.clone(), sub.degrees.clone(), self.conductor);
        for i in 0..k {
            for j in 0..k {
                let p = self.multiply(&sub.basis[i], &sub.basis[j])?;
                let coords = tracked
                    .coords(&p)
                    .ok_or_else(|| AlgebraError::BadInput("subalgebra is not closed under multiplication".into()))?;
                let terms: Vec<(usize, Scalar)> =
                    coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                b.set_product(i, j, terms);
            }
        }
        b.set_unit(unit_coords);
        Ok(b.build())
    }

    /// Left-multiplication trace of each basis element.
    pub fn trace_vector(&self) -> Vec<Scalar> {
        let dim = self.dim();
        let mut tr = vec![Scalar::zero(self.conductor); dim];
        for m in 0..dim {
            for j in 0..dim {
                for (k, c) in self.entry(m, j) {
                    if *k as usize == j {
                        tr[m] = tr[m].add(c);
                    }
                }
            }
        }
        tr
    }

    /// Universal group of the grading: generators are the support elements,
    /// one relation s1 + s2 - s3 for every nonzero component product.
    pub fn universal_grading_group(&self) -> AbelianGroup {
        let support = self.support();
        let pos: HashMap<&GroupElement, usize> = support.iter().enumerate().map(|(p, g)| (g, p)).collect();
        let dpos: Vec<usize> = self.degrees.iter().map(|g| pos[g]).collect();
        let m = support.len();
        let mut seen = vec![false; m * m];
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                if !self.entry(i, j).is_empty() {
                    let (a, b) = (dpos[i], dpos[j]);
                    // the relation for (a, b) and (b, a) is the same row
                    let key = if a <= b { a * m + b } else { b * m + a };
                    seen[key] = true;
                }
            }
        }
        let mut relations = Vec::new();
        for a in 0..m {
            for b in a..m {
                if seen[a * m + b] {
                    let s3 = self.group.add(&support[a], &support[b]);
                    let c = pos[&s3];
                    let mut row = vec![0i128; m];
                    row[a] += 1;
                    row[b] += 1;
                    row[c] -= 1;
                    relations.push(row);
                }
            }
        }
        smith_universal_group(&relations, m)
    }
}

pub(crate) fn sparse_sub(a: &SparseVec, b: &SparseVec, conductor: u64) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in a {
        let slot = acc.entry(*k).or_insert_with(|| Scalar::zero(conductor));
        *slot = slot.add(c);
    }
    for (k, c) in b {
        let slot = acc.entry(*k).or_insert_with(|| Scalar::zero(conductor));
        *slot = slot.sub(c);
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

// -- interned scalar calculator for the associativity scan ------------------

struct Calc {
    conductor: u64,
    vals: Vec<Arc<Scalar>>,
    index: HashMap<InternKey, u32>,
    cap: usize,
    mul_memo: Vec<u32>,
    add_memo: Vec<u32>,
}

const MEMO_NONE: u32 = u32::MAX;

impl Calc {
    fn new(conductor: u64, vals: Vec<Arc<Scalar>>, index: HashMap<InternKey, u32>) -> Calc {
        let cap = (vals.len() * 2).max(16);
        Calc {
            conductor,
            vals,
            index,
            cap,
            mul_memo: vec![MEMO_NONE; cap * cap],
            add_memo: vec![MEMO_NONE; cap * cap],
        }
    }

    fn fork(&self) -> Calc {
        Calc {
            conductor: self.conductor,
            vals: self.vals.clone(),
            index: self.index.iter().map(|(k, v)| (InternKey(k.0.clone()), *v)).collect(),
            cap: self.cap,
            mul_memo: vec![MEMO_NONE; self.cap * self.cap],
            add_memo: vec![MEMO_NONE; self.cap * self.cap],
        }
    }

    fn intern(&mut self, s: Scalar) -> u32 {
        let key = InternKey(s.coeffs().to_vec());
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.vals.len() as u32;
        self.vals.push(Arc::new(s));
        self.index.insert(key, id);
        if self.vals.len() > self.cap {
            self.cap *= 2;
            self.mul_memo = vec![MEMO_NONE; self.cap * self.cap];
            self.add_memo = vec![MEMO_NONE; self.cap * self.cap];
        }
        id
    }

    fn mul(&mut self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let slot = a as usize * self.cap + b as usize;
        let hit = self.mul_memo[slot];
        if hit != MEMO_NONE {
            return hit;
        }
        let v = self.vals[a as usize].mul(&self.vals[b as usize]);
        let id = self.intern(v);
        let slot = a as usize * self.cap + b as usize;
        self.mul_memo[slot] = id;
        id
    }

    fn add(&mut self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let slot = a as usize * self.cap + b as usize;
        let hit = self.add_memo[slot];
        if hit != MEMO_NONE {
            return hit;
        }
        let v = self.vals[a as usize].add(&self.vals[b as usize]);
        let id = self.intern(v);
        let slot = a as usize * self.cap + b as usize;
        self.add_memo[slot] = id;
        id
    }
}

fn assoc_triple_ok(tids: &[Vec<(u32, u32)>], dim: usize, i: usize, j: usize, k: usize, calc: &mut Calc) -> bool {
    let ij = &tids[i * dim + j];
    let jk = &tids[j * dim + k];
    // fast path: single-term tables all the way down
    if ij.len() == 1 && jk.len() == 1 {
        let (p, s) = ij[0];
        let (q2, t2) = jk[0];
        let pk = &tids[p as usize * dim + k];
        let iq = &tids[i * dim + q2 as usize];
        if pk.len() == 1 && iq.len() == 1 {
            let (q, t) = pk[0];
            let (q3, s3) = iq[0];
            return q == q3 && calc.mul(s, t) == calc.mul(s3, t2);
        }
    }
    let mut lhs: Vec<(u32, u32)> = Vec::new();
    for &(p, s) in ij {
        for &(q, t) in &tids[p as usize * dim + k] {
            push_term(&mut lhs, q, calc.mul(s, t), calc);
        }
    }
    let mut rhs: Vec<(u32, u32)> = Vec::new();
    for &(q, t) in jk {
        for &(r, s) in &tids[i * dim + q as usize] {
            push_term(&mut rhs, r, calc.mul(s, t), calc);
        }
    }
    lhs.retain(|&(_, v)| v != 0);
    rhs.retain(|&(_, v)| v != 0);
    lhs.sort_unstable();
    rhs.sort_unstable();
    lhs == rhs
}

fn push_term(acc: &mut Vec<(u32, u32)>, at: u32, val: u32, calc: &mut Calc) {
    if val == 0 {
        return;
    }
    for slot in acc.iter_mut() {
        if slot.0 == at {
            slot.1 = calc.add(slot.1, val);
            return;
        }
    }
    acc.push((at, val));
}
