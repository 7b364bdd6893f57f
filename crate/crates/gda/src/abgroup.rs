//! Finite abelian groups as products of cyclic factors: elements, orders,
//! quotients, automorphism enumeration, and presentation of universal grading
//! groups via the Smith normal form.
//!
//! Order-0 factors (free summands) appear only in the output of
//! [`smith_universal_group`]; everywhere else groups are finite.

use crate::snf::{smith_with_u, RowLattice};
use num_integer::Integer;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group of order {0} exceeds the enumeration bound {1}")]
    TooLarge(u64, u64),
    #[error("element residues do not match the group shape")]
    BadElement,
    #[error("images do not define a homomorphism (order of image {0} does not divide {1})")]
    NotAHom(u64, u64),
    #[error("domain mismatch")]
    Mismatch,
}

/// Z_{d1} x ... x Z_{dr}, written additively. A factor order 0 denotes Z.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

/// Residue tuple in an [`AbelianGroup`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement {
    pub residues: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    pub order: u64,
    pub exponent: u64,
    pub rank2: usize,
    pub is_elementary_2: bool,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[{}]", self.orders.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl AbelianGroup {
    pub fn new(orders: Vec<u64>) -> AbelianGroup {
        assert!(!orders.is_empty(), "factor list must be nonempty");
        AbelianGroup { orders }
    }

    pub fn trivial() -> AbelianGroup {
        AbelianGroup { orders: vec![1] }
    }

    pub fn elementary2(rank: usize) -> AbelianGroup {
        if rank == 0 {
            AbelianGroup::trivial()
        } else {
            AbelianGroup { orders: vec![2; rank] }
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&d| d != 0)
    }

    pub fn order(&self) -> u64 {
        assert!(self.is_finite());
        self.orders.iter().product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.orders.len()] }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.residues.len() == self.orders.len()
            && g.residues.iter().zip(&self.orders).all(|(&r, &d)| d == 0 || r < d)
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement, GroupError> {
        let g = GroupElement { residues };
        if self.contains(&g) {
            Ok(g)
        } else {
            Err(GroupError::BadElement)
        }
    }

    /// Standard generator of factor i.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut residues = vec![0; self.orders.len()];
        if self.orders[i] != 1 {
            residues[i] = 1;
        }
        GroupElement { residues }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.orders)
            .map(|((&x, &y), &d)| if d == 0 { x + y } else { (x + y) % d })
            .collect();
        GroupElement { residues }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&x, &d)| if x == 0 { 0 } else { d - x })
            .collect();
        GroupElement { residues }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: u64, a: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&x, &d)| if d == 0 { x * k } else { (x % d * (k % d)) % d })
            .collect();
        GroupElement { residues }
    }

    pub fn order_of(&self, a: &GroupElement) -> u64 {
        let mut ord = 1u64;
        for (&x, &d) in a.residues.iter().zip(&self.orders) {
            if x != 0 {
                let o = d / d.gcd(&x);
                ord = ord.lcm(&o);
            }
        }
        ord
    }

    /// Mixed-radix rank of an element, a bijection onto 0..order().
    pub fn index_of(&self, a: &GroupElement) -> usize {
        let mut idx = 0usize;
        for (&x, &d) in a.residues.iter().zip(&self.orders) {
            idx = idx * d as usize + x as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut residues = vec![0u64; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            let d = self.orders[k] as usize;
            residues[k] = (idx % d) as u64;
            idx /= d;
        }
        GroupElement { residues }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        assert!(self.is_finite());
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    pub fn profile(&self) -> GroupProfile {
        assert!(self.is_finite());
        let order = self.order();
        let exponent = self.orders.iter().fold(1u64, |e, &d| e.lcm(&d));
        let rank2 = self.orders.iter().filter(|&&d| d % 2 == 0).count();
        GroupProfile { order, exponent, rank2, is_elementary_2: exponent <= 2 }
    }

    /// Invariant factors d1 | d2 | ... (1s dropped, 0s for free factors last).
    pub fn invariant_factors(&self) -> Vec<u64> {
        let finite: Vec<i128> = self.orders.iter().filter(|&&d| d != 0).map(|&d| d as i128).collect();
        let free = self.orders.len() - finite.len();
        let mut out: Vec<u64> = if finite.is_empty() {
            Vec::new()
        } else {
            let n = finite.len();
            let mat: Vec<Vec<i128>> =
                (0..n).map(|i| (0..n).map(|j| if i == j { finite[i] } else { 0 }).collect()).collect();
            smith_with_u(mat).diag.into_iter().map(|d| d as u64).filter(|&d| d != 1).collect()
        };
        out.extend(std::iter::repeat(0).take(free));
        out
    }

    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    /// The same group in invariant-factor form, with mutually inverse
    /// isomorphisms to and from it.
    pub fn canonical(&self) -> (AbelianGroup, GroupHom, GroupHom) {
        assert!(self.is_finite());
        let n = self.orders.len();
        let mat: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.orders[i] as i128 } else { 0 }).collect())
            .collect();
        let snf = smith_with_u(mat);
        let mut diag = snf.diag.clone();
        diag.resize(n, 0);
        let keep: Vec<usize> = (0..n).filter(|&k| diag[k] != 1).collect();
        let canon = if keep.is_empty() {
            AbelianGroup::trivial()
        } else {
            AbelianGroup::new(keep.iter().map(|&k| diag[k] as u64).collect())
        };
        // x in G maps to (Ux) reduced; generators of G are the unit vectors.
        let to_images: Vec<GroupElement> = (0..n)
            .map(|i| {
                let residues: Vec<u64> = if keep.is_empty() {
                    vec![0]
                } else {
                    keep.iter()
                        .map(|&k| {
                            let d = diag[k];
                            (snf.u[k][i].rem_euclid(d)) as u64
                        })
                        .collect()
                };
                GroupElement { residues }
            })
            .collect();
        let to = GroupHom::new_unchecked(self.clone(), canon.clone(), to_images);
        // invert by brute force on generators of the canonical group
        let mut from_images = Vec::new();
        for i in 0..canon.orders.len() {
            let target = canon.generator(i);
            let mut found = None;
            for g in self.elements() {
                if to.apply(&g) == target {
                    found = Some(g);
                    break;
                }
            }
            from_images.push(found.expect("canonical map is surjective"));
        }
        let from = GroupHom::new_unchecked(canon.clone(), self.clone(), from_images);
        (canon, to, from)
    }

    /// G / <kill> in invariant-factor form, with the canonical projection.
    pub fn quotient_by(&self, kill: &[GroupElement]) -> (AbelianGroup, GroupHom) {
        assert!(self.is_finite());
        let n = self.orders.len();
        let mut mat: Vec<Vec<i128>> = Vec::new();
        for i in 0..n {
            let mut row = vec![0i128; n];
            row[i] = self.orders[i] as i128;
            mat.push(row);
        }
        for g in kill {
            assert!(self.contains(g), "kill element outside the group");
            mat.push(g.residues.iter().map(|&r| r as i128).collect());
        }
        // quotient = Z^n / row lattice; work on the transpose so the lattice is
        // the column span and coker(A) = Z^n / A Z^m with x -> Ux.
        let cols = mat.len();
        let a: Vec<Vec<i128>> = (0..n).map(|i| (0..cols).map(|j| mat[j][i]).collect()).collect();
        let snf = smith_with_u(a);
        let mut diag = snf.diag.clone();
        diag.resize(n, 0);
        debug_assert!(diag.iter().all(|&d| d > 0), "quotient of a finite group is finite");
        let keep: Vec<usize> = (0..n).filter(|&k| diag[k] != 1).collect();
        let q = if keep.is_empty() {
            AbelianGroup::trivial()
        } else {
            AbelianGroup::new(keep.iter().map(|&k| diag[k] as u64).collect())
        };
        let images: Vec<GroupElement> = (0..n)
            .map(|i| {
                let residues: Vec<u64> = if keep.is_empty() {
                    vec![0]
                } else {
                    keep.iter().map(|&k| (snf.u[k][i].rem_euclid(diag[k])) as u64).collect()
                };
                GroupElement { residues }
            })
            .collect();
        let proj = GroupHom::new_unchecked(self.clone(), q.clone(), images);
        (q, proj)
    }

    /// Closure of a set of elements under the group operation.
    pub fn span(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        assert!(self.is_finite());
        let size = self.order() as usize;
        let mut seen = vec![false; size];
        let mut out = vec![self.identity()];
        seen[self.index_of(&self.identity())] = true;
        for g in gens {
            let cur = out.clone();
            for base in cur {
                let mut acc = base;
                loop {
                    acc = self.add(&acc, g);
                    let idx = self.index_of(&acc);
                    if seen[idx] {
                        break;
                    }
                    seen[idx] = true;
                    out.push(acc.clone());
                }
            }
        }
        out.sort();
        out
    }

    /// All automorphisms, by generator-image backtracking with order and
    /// partial-span pruning. Refuses groups larger than `bound`.
    pub fn automorphisms(&self, bound: u64) -> Result<Vec<GroupHom>, GroupError> {
        self.isomorphisms_to(self, bound)
    }

    /// All isomorphisms self -> other (empty when the groups differ).
    pub fn isomorphisms_to(&self, other: &AbelianGroup, bound: u64) -> Result<Vec<GroupHom>, GroupError> {
        assert!(self.is_finite() && other.is_finite());
        let ord = self.order();
        if ord > bound {
            return Err(GroupError::TooLarge(ord, bound));
        }
        if !self.is_isomorphic(other) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        // candidates per generator: elements of the exact order
        let all: Vec<GroupElement> = other.elements().collect();
        let cands: Vec<Vec<GroupElement>> = self
            .orders
            .iter()
            .map(|&d| all.iter().filter(|g| other.order_of(g) == d).cloned().collect())
            .collect();
        let mut chosen: Vec<GroupElement> = Vec::new();
        self.backtrack_isos(other, &cands, &mut chosen, &mut out);
        Ok(out)
    }

    fn backtrack_isos(
        &self,
        other: &AbelianGroup,
        cands: &[Vec<GroupElement>],
        chosen: &mut Vec<GroupElement>,
        out: &mut Vec<GroupHom>,
    ) {
        let j = chosen.len();
        if j == self.orders.len() {
            let hom = GroupHom::new_unchecked(self.clone(), other.clone(), chosen.clone());
            if hom.is_surjective() {
                out.push(hom);
            }
            return;
        }
        let remaining: u64 = self.orders[j + 1..].iter().product();
        for cand in &cands[j] {
            chosen.push(cand.clone());
            let span = other.span(chosen).len() as u64;
            if span * remaining >= other.order() {
                // the span after this choice can still reach the whole group
                let partial: u64 = self.orders[..=j].iter().product();
                if span <= partial {
                    self.backtrack_isos(other, cands, chosen, out);
                }
            }
            chosen.pop();
        }
    }
}

/// Homomorphism between finite abelian groups, stored by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: AbelianGroup,
    pub codomain: AbelianGroup,
    pub images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(
        domain: AbelianGroup,
        codomain: AbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<GroupHom, GroupError> {
        if images.len() != domain.orders.len() {
            return Err(GroupError::Mismatch);
        }
        for (i, img) in images.iter().enumerate() {
            if !codomain.contains(img) {
                return Err(GroupError::BadElement);
            }
            let o = codomain.order_of(img);
            if domain.orders[i] % o != 0 {
                return Err(GroupError::NotAHom(o, domain.orders[i]));
            }
        }
        Ok(GroupHom { domain, codomain, images })
    }

    pub fn new_unchecked(domain: AbelianGroup, codomain: AbelianGroup, images: Vec<GroupElement>) -> GroupHom {
        GroupHom { domain, codomain, images }
    }

    pub fn identity(g: &AbelianGroup) -> GroupHom {
        let images = (0..g.orders.len()).map(|i| g.generator(i)).collect();
        GroupHom { domain: g.clone(), codomain: g.clone(), images }
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let mut acc = self.codomain.identity();
        for (&r, img) in g.residues.iter().zip(&self.images) {
            if r != 0 {
                acc = self.codomain.add(&acc, &self.codomain.scalar_mul(r, img));
            }
        }
        acc
    }

    pub fn compose(&self, then: &GroupHom) -> GroupHom {
        debug_assert!(self.codomain == then.domain);
        let images = self.images.iter().map(|g| then.apply(g)).collect();
        GroupHom { domain: self.domain.clone(), codomain: then.codomain.clone(), images }
    }

    pub fn is_surjective(&self) -> bool {
        self.codomain.span(&self.images).len() as u64 == self.codomain.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.order() == self.codomain.order() && self.is_surjective()
    }
}

/// The abelian group presented by `generators` symbols and additive relation
/// rows, in invariant-factor form. Free factors come out as order 0.
pub fn smith_universal_group(relations: &[Vec<i128>], generators: usize) -> AbelianGroup {
    let mut lat = RowLattice::new(generators);
    for row in relations {
        lat.add_row(row.clone());
    }
    let rows = lat.rows();
    if rows.is_empty() {
        return AbelianGroup::new(vec![0; generators.max(1)]);
    }
    let snf = smith_with_u(rows.to_vec());
    let rank = snf.diag.len();
    let mut orders: Vec<u64> =
        snf.diag.iter().map(|&d| d as u64).filter(|&d| d != 1).collect();
    orders.extend(std::iter::repeat(0).take(generators - rank));
    if orders.is_empty() {
        AbelianGroup::trivial()
    } else {
        AbelianGroup::new(orders)
    }
}

/// Splits G as H x H (pairing up invariant factors); None when impossible.
pub fn split_square(g: &AbelianGroup) -> Option<AbelianGroup> {
    let inv = g.invariant_factors();
    if inv.is_empty() {
        return Some(AbelianGroup::trivial());
    }
    // invariant factors of H x H are those of H, each twice
    if inv.len() % 2 != 0 {
        return None;
    }
    let mut h = Vec::new();
    for pair in inv.chunks(2) {
        if pair[0] != pair[1] {
            return None;
        }
        h.push(pair[0]);
    }
    Some(AbelianGroup::new(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders.to_vec())
    }

    #[test]
    fn profiles() {
        let p = z(&[2, 2]).profile();
        assert_eq!((p.order, p.exponent, p.rank2, p.is_elementary_2), (4, 2, 2, true));
        let p = z(&[4, 2]).profile();
        assert_eq!((p.order, p.exponent, p.is_elementary_2), (8, 4, false));
        let p = z(&[1]).profile();
        assert_eq!((p.order, p.exponent, p.rank2, p.is_elementary_2), (1, 1, 0, true));
    }

    #[test]
    fn element_orders() {
        let g = z(&[4, 2]);
        assert_eq!(g.order_of(&g.element(vec![1, 0]).unwrap()), 4);
        assert_eq!(g.order_of(&g.element(vec![2, 1]).unwrap()), 2);
        assert_eq!(g.order_of(&g.identity()), 1);
        assert!(g.element(vec![4, 0]).is_err());
    }

    #[test]
    fn quotients() {
        // Z4 x Z2 / <beta> = Z4
        let g = z(&[4, 2]);
        let beta = g.element(vec![0, 1]).unwrap();
        let (q, proj) = g.quotient_by(&[beta.clone()]);
        assert!(q.is_isomorphic(&z(&[4])));
        assert_eq!(proj.apply(&beta), q.identity());
        assert!(proj.is_surjective());
        // empty kill set: isomorphic copy
        let (q2, proj2) = g.quotient_by(&[]);
        assert!(q2.is_isomorphic(&g));
        assert!(proj2.is_bijective());
        // Z4 x Z2^3 / <gamma> = Z4 x Z2^2
        let g = z(&[4, 2, 2, 2]);
        let gamma = g.element(vec![0, 0, 1, 0]).unwrap();
        let (q, _) = g.quotient_by(&[gamma]);
        assert!(q.is_isomorphic(&z(&[4, 2, 2])));
        // order bookkeeping: |Q| * |<kill>| = |G|
        let g = z(&[4, 4]);
        let k = g.element(vec![2, 2]).unwrap();
        let (q, _) = g.quotient_by(&[k.clone()]);
        let killed = g.span(&[k]).len() as u64;
        assert_eq!(q.order() * killed, g.order());
    }

    /// Brute-force count of automorphisms by filtering all generator-image
    /// tuples, independent of the backtracking path.
    fn brute_force_aut_count(g: &AbelianGroup) -> usize {
        let all: Vec<GroupElement> = g.elements().collect();
        let n = g.orders().len();
        let total = all.len().pow(n as u32);
        let mut count = 0;
        for code in 0..total {
            let mut c = code;
            let mut images = Vec::new();
            for _ in 0..n {
                images.push(all[c % all.len()].clone());
                c /= all.len();
            }
            if let Ok(h) = GroupHom::new(g.clone(), g.clone(), images) {
                if h.is_bijective() {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(z(&[2]).automorphisms(256).unwrap().len(), 1);
        let auts22 = z(&[2, 2]).automorphisms(256).unwrap();
        assert_eq!(auts22.len(), 6); // GL_2(F_2)
        assert_eq!(auts22.len(), brute_force_aut_count(&z(&[2, 2])));
        assert_eq!(z(&[4]).automorphisms(256).unwrap().len(), 2); // units mod 4
        assert_eq!(z(&[4]).automorphisms(256).unwrap().len(), brute_force_aut_count(&z(&[4])));
        assert_eq!(z(&[2, 2, 2]).automorphisms(256).unwrap().len(), 168); // GL_3(F_2)
        assert_eq!(z(&[4, 2]).automorphisms(256).unwrap().len(), brute_force_aut_count(&z(&[4, 2])));
        assert!(matches!(z(&[1024]).automorphisms(256), Err(GroupError::TooLarge(_, _))));
    }

    #[test]
    fn automorphisms_are_distinct_bijections() {
        let g = z(&[4, 2]);
        let auts = g.automorphisms(256).unwrap();
        for a in &auts {
            assert!(a.is_bijective());
        }
        let mut keys: Vec<Vec<GroupElement>> = auts.iter().map(|a| a.images.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), auts.len());
    }

    #[test]
    fn universal_group_presentations() {
        // one generator, no relations: Z
        let g = smith_universal_group(&[], 1);
        assert_eq!(g.orders(), &[0]);
        // x + x = 0 -> Z2
        let g = smith_universal_group(&[vec![2]], 1);
        assert!(g.is_isomorphic(&z(&[2])));
        // x + y - z = 0, 2x = 0, 2y = 0 over (x,y,z) -> Z2 x Z2
        let rels = vec![vec![1, 1, -1], vec![2, 0, 0], vec![0, 2, 0]];
        let g = smith_universal_group(&rels, 3);
        assert!(g.is_isomorphic(&z(&[2, 2])));
    }

    #[test]
    fn canonical_form_round_trip() {
        let g = z(&[2, 4, 1, 2]);
        let (c, to, from) = g.canonical();
        assert!(c.is_isomorphic(&g));
        for x in g.elements() {
            assert_eq!(from.apply(&to.apply(&x)), x);
        }
        assert_eq!(c.invariant_factors(), vec![2, 2, 4]);
    }

    #[test]
    fn square_splitting() {
        assert_eq!(split_square(&z(&[2, 2])).unwrap().invariant_factors(), vec![2]);
        assert_eq!(split_square(&z(&[4, 4])).unwrap().invariant_factors(), vec![4]);
        assert_eq!(split_square(&z(&[2, 2, 2, 2])).unwrap().invariant_factors(), vec![2, 2]);
        assert!(split_square(&z(&[2, 4])).is_none());
        assert!(split_square(&z(&[2])).is_none());
        assert!(split_square(&z(&[1])).is_some());
    }
}
