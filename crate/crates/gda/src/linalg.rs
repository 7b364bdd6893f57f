//! Exact Gaussian elimination over cyclotomic scalars: spans, ranks,
//! nullspaces and coordinate solving. Everything here is small and dense;
//! callers that need sparsity exploit the grading before coming here.

use crate::scalar::Scalar;

/// Incremental row-echelon span with pivot normalization. Rows are kept fully
/// reduced, so the stored basis is canonical for a given insertion order.
pub struct Span {
    width: usize,
    conductor: u64,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(width: usize, conductor: u64) -> Span {
        Span { width, conductor, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Residual of `v` after eliminating all pivot columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w: Vec<Scalar> = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.width {
                    if !row[j].is_zero() {
                        w[j] = w[j].sub(&f.mul(&row[j]));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Insert if independent; returns true when the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("pivot is nonzero");
        for c in w.iter_mut() {
            if !c.is_zero() {
                *c = c.mul(&inv);
            }
        }
        // back-reduce existing rows to keep the basis in reduced echelon form
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            debug_assert!(rp != p);
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.width {
                    if !w[j].is_zero() {
                        row[j] = row[j].sub(&f.mul(&w[j]));
                    }
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.rows.len());
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }
}

/// Span that also tracks how each echelon row decomposes over the inserted
/// vectors, so membership comes with coordinates.
pub struct TrackedSpan {
    span: Span,
    combos: Vec<Vec<Scalar>>, // parallel to span.rows, width = #inserted
    inserted: usize,
}

impl TrackedSpan {
    pub fn new(width: usize, conductor: u64) -> TrackedSpan {
        TrackedSpan { span: Span::new(width, conductor), combos: Vec::new(), inserted: 0 }
    }

    pub fn from_basis(basis: &[Vec<Scalar>], width: usize, conductor: u64) -> TrackedSpan {
        let mut t = TrackedSpan::new(width, conductor);
        for v in basis {
            let grew = t.insert(v);
            assert!(grew, "basis vectors must be independent");
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    fn reduce_with_combo(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut w: Vec<Scalar> = v.to_vec();
        let mut combo = vec![Scalar::zero(self.span.conductor); self.inserted];
        for ((row, &p), rc) in self.span.rows.iter().zip(&self.span.pivots).zip(&self.combos) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.span.width {
                    if !row[j].is_zero() {
                        w[j] = w[j].sub(&f.mul(&row[j]));
                    }
                }
                for (cj, rcj) in combo.iter_mut().zip(rc) {
                    if !rcj.is_zero() {
                        *cj = cj.add(&f.mul(rcj));
                    }
                }
            }
        }
        (w, combo)
    }

    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let (mut w, mut combo) = self.reduce_with_combo(v);
        combo.push(Scalar::one(self.span.conductor));
        self.inserted += 1;
        for c in self.combos.iter_mut() {
            c.push(Scalar::zero(self.span.conductor));
        }
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            // dependent vector: still counts as inserted for combo width
            return false;
        };
        // combo currently expresses w as inserted[last] - sum f_i * prior; fix
        // signs: we track v_reduced = v - sum f*rows, so combo holds the sum
        // part; the stored row is (v - sum)/pivot and decomposes accordingly.
        let inv = w[p].inv().expect("pivot is nonzero");
        for c in w.iter_mut() {
            if !c.is_zero() {
                *c = c.mul(&inv);
            }
        }
        let mut row_combo = vec![Scalar::zero(self.span.conductor); self.inserted];
        for (k, f) in combo.iter().enumerate().take(self.inserted - 1) {
            if !f.is_zero() {
                row_combo[k] = f.neg().mul(&inv);
            }
        }
        row_combo[self.inserted - 1] = inv.clone();
        for ((row, &rp), rc) in
            self.span.rows.iter_mut().zip(&self.span.pivots).zip(self.combos.iter_mut())
        {
            debug_assert!(rp != p);
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.span.width {
                    if !w[j].is_zero() {
                        row[j] = row[j].sub(&f.mul(&w[j]));
                    }
                }
                for (cj, nj) in rc.iter_mut().zip(&row_combo) {
                    if !nj.is_zero() {
                        *cj = cj.sub(&f.mul(nj));
                    }
                }
            }
        }
        let at = self.span.pivots.iter().position(|&q| q > p).unwrap_or(self.span.rows.len());
        self.span.rows.insert(at, w);
        self.span.pivots.insert(at, p);
        self.combos.insert(at, row_combo);
        true
    }

    /// Coordinates of `v` over the inserted vectors, if `v` lies in the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (w, combo) = self.reduce_with_combo(v);
        if w.iter().all(|c| c.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }
}

/// Basis of the right kernel {x : rows * x = 0}; `unknowns` columns.
pub fn nullspace(rows: &[Vec<Scalar>], unknowns: usize, conductor: u64) -> Vec<Vec<Scalar>> {
    let mut span = Span::new(unknowns, conductor);
    for r in rows {
        span.insert(r);
    }
    let pivot_cols: Vec<usize> = span.pivots.clone();
    let mut out = Vec::new();
    for free in 0..unknowns {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(conductor); unknowns];
        v[free] = Scalar::one(conductor);
        for (row, &p) in span.rows.iter().zip(&span.pivots) {
            if !row[free].is_zero() {
                v[p] = row[free].neg();
            }
        }
        out.push(v);
    }
    out
}

pub fn rank(rows: &[Vec<Scalar>], width: usize, conductor: u64) -> usize {
    let mut span = Span::new(width, conductor);
    for r in rows {
        span.insert(r);
    }
    span.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn s(v: i64) -> Scalar {
        Scalar::from_integer(8, v)
    }

    fn vecs(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect()
    }

    #[test]
    fn span_and_rank() {
        let rows = vecs(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&rows, 3, 8), 2);
        let mut sp = Span::new(3, 8);
        assert!(sp.insert(&rows[0]));
        assert!(!sp.insert(&rows[1]));
        assert!(sp.insert(&rows[2]));
        assert!(sp.contains(&vecs(&[&[1, 3, 4]])[0]));
        assert!(!sp.contains(&vecs(&[&[0, 0, 1]])[0]));
    }

    #[test]
    fn nullspace_small() {
        // x + y + z = 0, x - z = 0 -> kernel spanned by (1, -2, 1)
        let rows = vecs(&[&[1, 1, 1], &[1, 0, -1]]);
        let ns = nullspace(&rows, 3, 8);
        assert_eq!(ns.len(), 1);
        let k = &ns[0];
        for r in &rows {
            let dot = (0..3).fold(Scalar::zero(8), |acc, j| acc.add(&r[j].mul(&k[j])));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn tracked_coordinates() {
        let basis = vecs(&[&[1, 1, 0], &[0, 1, 1]]);
        let t = TrackedSpan::from_basis(&basis, 3, 8);
        let v = vecs(&[&[2, 5, 3]])[0].clone();
        let c = t.coords(&v).unwrap();
        assert_eq!(c.len(), 2);
        // reconstruct
        let mut rec = vec![Scalar::zero(8); 3];
        for (ci, b) in c.iter().zip(&basis) {
            for j in 0..3 {
                rec[j] = rec[j].add(&ci.mul(&b[j]));
            }
        }
        assert_eq!(rec, v);
        assert!(t.coords(&vecs(&[&[1, 0, 0]])[0]).is_none());
        // fractional coordinates survive exactly
        let half = Scalar::from_rational(8, BigRational::new(BigInt::from(1), BigInt::from(2)));
        let w: Vec<Scalar> = basis[0].iter().map(|x| x.mul(&half)).collect();
        let c = t.coords(&w).unwrap();
        assert_eq!(c[0], half);
        assert!(c[1].is_zero());
    }
}
