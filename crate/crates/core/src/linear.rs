//! Sparse exact linear algebra: vectors, reduced row-echelon bases,
//! kernels and span membership.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("index {index} out of range for ambient dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> SparseVec<F> {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: vec![(index, F::one())],
        }
    }

    /// Builds from arbitrary pairs; repeated indices are summed and zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, F)>>(pairs: I) -> Self {
        let mut map: BTreeMap<usize, F> = BTreeMap::new();
        for (i, c) in pairs {
            let slot = map.entry(i).or_insert_with(F::zero);
            *slot = slot.clone() + c;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[F]) -> Self {
        Self::from_pairs(values.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<F> {
        let mut out = vec![F::zero(); dim];
        for (i, c) in &self.entries {
            if *i < dim {
                out[*i] = c.clone();
            }
        }
        out
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> F {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(usize, F)> {
        self.entries.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, x)| (*i, x.clone() * c.clone()))
                .collect(),
        }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &F, other: &Self) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, xa)), Some((ib, xb))) => {
                    if ia < ib {
                        out.push((*ia, xa.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, xb.clone() * c.clone()));
                        b.next();
                    } else {
                        let s = xa.clone() + xb.clone() * c.clone();
                        if !s.is_zero() {
                            out.push((*ia, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, xa)), None) => {
                    out.push((*ia, xa.clone()));
                    a.next();
                }
                (None, Some((ib, xb))) => {
                    out.push((*ib, xb.clone() * c.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&(-F::one()), other)
    }

    pub fn dot(&self, other: &Self) -> F {
        let mut acc = F::zero();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((ia, xa)), Some((ib, xb))) = (a.peek(), b.peek()) {
            if ia < ib {
                a.next();
            } else if ib < ia {
                b.next();
            } else {
                acc = acc + xa.clone() * xb.clone();
                a.next();
                b.next();
            }
        }
        acc
    }

    fn check_dim(&self, dim: usize) -> Result<(), LinearError> {
        match self.max_index() {
            Some(i) if i >= dim => Err(LinearError::IndexOutOfRange { index: i, dim }),
            _ => Ok(()),
        }
    }
}

impl<F: Field> fmt::Debug for SparseVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, (i, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}→{c}")?;
        }
        write!(f, ")")
    }
}

/// A subspace in reduced row-echelon form: pivots strictly increase, every
/// pivot entry is 1 and pivot columns vanish in all other rows.
#[derive(Clone, PartialEq)]
pub struct SubspaceBasis<F: Field> {
    ambient_dim: usize,
    rows: Vec<SparseVec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for SubspaceBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubspaceBasis")
            .field("ambient_dim", &self.ambient_dim)
            .field("rows", &self.rows)
            .finish()
    }
}

impl<F: Field> SubspaceBasis<F> {
    pub fn empty(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            rows: (0..ambient_dim).map(SparseVec::unit).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots, i.e. the coordinates of the standard
    /// complement of this subspace.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient_dim - self.rank());
        let mut piv = self.pivots.iter().peekable();
        for c in 0..self.ambient_dim {
            if piv.peek() == Some(&&c) {
                piv.next();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Eliminates all pivot coordinates of `v`, returning the remainder
    /// (which lives on free columns) and the row coefficients used.
    pub fn reduce(&self, v: &SparseVec<F>) -> (SparseVec<F>, Vec<F>) {
        let coeffs: Vec<F> = self.pivots.iter().map(|&p| v.get(p)).collect();
        let mut rem = v.clone();
        for (row, c) in self.rows.iter().zip(&coeffs) {
            if !c.is_zero() {
                rem = rem.add_scaled(&(-c.clone()), row);
            }
        }
        (rem, coeffs)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts one vector, keeping reduced row-echelon form. Returns whether
    /// the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        let (rem, _) = self.reduce(v);
        let Some((pivot, lead)) = rem.leading().cloned() else {
            return false;
        };
        let inv = F::one() / lead;
        let new_row = rem.scale(&inv);
        for row in self.rows.iter_mut() {
            let c = row.get(pivot);
            if !c.is_zero() {
                *row = row.add_scaled(&(-c), &new_row);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(pos, pivot);
        self.rows.insert(pos, new_row);
        true
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for r in other.rows() {
            out.insert(r);
        }
        out
    }

    /// Intersection, computed from the kernel of `[self; -other]`.
    pub fn intersect(&self, other: &Self) -> Self {
        let n = self.ambient_dim;
        let r1 = self.rank();
        let r2 = other.rank();
        // columns: coefficients on self.rows then other.rows; rows: ambient coordinates
        let mut cols: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
        for (k, row) in self.rows.iter().enumerate() {
            for (i, c) in row.entries() {
                cols[*i].push((k, c.clone()));
            }
        }
        for (k, row) in other.rows.iter().enumerate() {
            for (i, c) in row.entries() {
                cols[*i].push((r1 + k, -c.clone()));
            }
        }
        let eqs: Vec<SparseVec<F>> = cols.into_iter().map(SparseVec::from_pairs).collect();
        let ker = kernel(&eqs, r1 + r2).expect("indices built in range");
        let mut out = SubspaceBasis::empty(n);
        for k in ker.rows() {
            let mut v = SparseVec::zero();
            for (idx, c) in k.entries() {
                if *idx < r1 {
                    v = v.add_scaled(c, &self.rows[*idx]);
                }
            }
            out.insert(&v);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

/// Reduced row-echelon basis of the span of `rows`. Rows are processed in
/// input order; the leftmost nonzero column of each new row becomes its pivot.
pub fn echelonize<F: Field>(
    rows: &[SparseVec<F>],
    ambient_dim: usize,
) -> Result<SubspaceBasis<F>, LinearError> {
    let mut out = SubspaceBasis::empty(ambient_dim);
    for r in rows {
        r.check_dim(ambient_dim)?;
        out.insert(r);
    }
    Ok(out)
}

/// Basis of `{ v : M v = 0 }` where `M` has the given rows.
pub fn kernel<F: Field>(
    matrix: &[SparseVec<F>],
    ambient_dim: usize,
) -> Result<SubspaceBasis<F>, LinearError> {
    let rref = echelonize(matrix, ambient_dim)?;
    let free = rref.free_columns();
    let mut vecs = Vec::with_capacity(free.len());
    for &f in &free {
        let mut pairs = vec![(f, F::one())];
        for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
            let c = row.get(f);
            if !c.is_zero() {
                pairs.push((p, -c));
            }
        }
        vecs.push(SparseVec::from_pairs(pairs));
    }
    echelonize(&vecs, ambient_dim)
}

/// Span membership with the coefficients against the echelon rows.
pub fn member<F: Field>(
    v: &SparseVec<F>,
    basis: &SubspaceBasis<F>,
) -> Result<Option<Vec<F>>, LinearError> {
    v.check_dim(basis.ambient_dim)?;
    let (rem, coeffs) = basis.reduce(v);
    Ok(if rem.is_zero() { Some(coeffs) } else { None })
}

/// Applies a matrix given by rows to a vector.
pub fn mat_vec<F: Field>(rows: &[SparseVec<F>], v: &SparseVec<F>) -> SparseVec<F> {
    SparseVec::from_pairs(rows.iter().enumerate().map(|(i, r)| (i, r.dot(v))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn sv(pairs: &[(usize, i64)]) -> SparseVec<Q> {
        SparseVec::from_pairs(pairs.iter().map(|&(i, c)| (i, q(c))))
    }

    #[test]
    fn echelonize_examples() {
        let b = echelonize(&[sv(&[(0, 1), (1, 2)]), sv(&[(0, 2), (1, 4)])], 2).unwrap();
        assert_eq!(b.rank(), 1);
        assert_eq!(b.rows()[0], sv(&[(0, 1), (1, 2)]));

        let b = echelonize::<Q>(&[], 3).unwrap();
        assert_eq!(b.rank(), 0);

        let b = echelonize(&[sv(&[(0, 1)]), sv(&[(1, 1)])], 2).unwrap();
        assert_eq!(b, SubspaceBasis::full(2));
    }

    #[test]
    fn echelonize_rejects_out_of_range() {
        let err = echelonize(&[sv(&[(3, 1)])], 2).unwrap_err();
        assert_eq!(err, LinearError::IndexOutOfRange { index: 3, dim: 2 });
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&[sv(&[(0, 1), (1, 1)])], 2).unwrap();
        assert_eq!(k.rank(), 1);
        assert_eq!(k.rows()[0], sv(&[(0, 1), (1, -1)]));

        let id: Vec<_> = (0..3).map(SparseVec::<Q>::unit).collect();
        assert_eq!(kernel(&id, 3).unwrap().rank(), 0);

        let zero = vec![SparseVec::<Q>::zero(); 2];
        assert_eq!(kernel(&zero, 2).unwrap().rank(), 2);
    }

    #[test]
    fn member_examples() {
        let b = echelonize(&[sv(&[(0, 1), (1, 2)])], 2).unwrap();
        assert_eq!(member(&sv(&[(0, 3), (1, 6)]), &b).unwrap(), Some(vec![q(3)]));

        let b = echelonize(&[sv(&[(1, 1)])], 2).unwrap();
        assert_eq!(member(&sv(&[(0, 1)]), &b).unwrap(), None);

        assert_eq!(member(&SparseVec::zero(), &b).unwrap(), Some(vec![q(0)]));
        assert!(member(&sv(&[(5, 1)]), &b).is_err());
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let a = echelonize(&[sv(&[(0, 1)]), sv(&[(1, 1)])], 3).unwrap();
        let b = echelonize(&[sv(&[(1, 1)]), sv(&[(2, 1)])], 3).unwrap();
        let c = a.intersect(&b);
        assert_eq!(c.rank(), 1);
        assert_eq!(c.rows()[0], sv(&[(1, 1)]));
        assert_eq!(a.join(&b).rank(), 3);
    }

    fn arb_matrix() -> impl Strategy<Value = (Vec<SparseVec<Q>>, usize)> {
        (1usize..6).prop_flat_map(|dim| {
            let row = proptest::collection::vec((-3i64..=3, 1i64..=3), dim)
                .prop_map(|cs| {
                    SparseVec::from_pairs(
                        cs.into_iter()
                            .enumerate()
                            .map(|(i, (n, d))| (i, Q::from_ratio(n, d))),
                    )
                });
            (proptest::collection::vec(row, 0..6), Just(dim))
        })
    }

    proptest! {
        #[test]
        fn echelonize_is_idempotent((rows, dim) in arb_matrix()) {
            let b = echelonize(&rows, dim).unwrap();
            let bb = echelonize(b.rows(), dim).unwrap();
            prop_assert_eq!(&b, &bb);
            for w in b.pivots().windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for r in &rows {
                prop_assert!(b.contains(r));
            }
        }

        #[test]
        fn rank_nullity_and_exact_kernel((rows, dim) in arb_matrix()) {
            let k = kernel(&rows, dim).unwrap();
            let r = echelonize(&rows, dim).unwrap();
            prop_assert_eq!(k.rank() + r.rank(), dim);
            for v in k.rows() {
                prop_assert!(mat_vec(&rows, v).is_zero());
            }
        }
    }
}
