//! Finite-dimensional commutative unital algebras, their ideals, radicals,
//! quotients and Chinese-remainder splittings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linear::{echelonize, kernel, LinearError, SparseVec, SubspaceBasis};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ideals live in different ambient algebras")]
    AmbientMismatch,
    #[error("subspace is not closed under multiplication by basis element {basis_index}")]
    NotAnIdeal { basis_index: usize },
    #[error("algebra is not semisimple: nilradical has dimension {nilradical_dim}")]
    NotSemisimple { nilradical_dim: usize },
    #[error("multiplication by {element} has a minimal polynomial that does not split over the rationals")]
    SplitFieldRequired { element: String },
    #[error("cannot take the quotient by the whole algebra")]
    ImproperIdeal,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// A commutative associative unital algebra given by its structure tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct CommAlgebra<F: Field> {
    labels: Vec<String>,
    /// `table[i][j]` is the product of basis elements `i` and `j`.
    table: Vec<Vec<SparseVec<F>>>,
    unit: SparseVec<F>,
}

/// Outcome of checking the algebra axioms on every basis pair / triple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub commutativity: Vec<(usize, usize)>,
    pub associativity: Vec<(usize, usize, usize)>,
    pub unit_law: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.commutativity.is_empty() && self.associativity.is_empty() && self.unit_law.is_empty()
    }
}

impl<F: Field> CommAlgebra<F> {
    /// Builds an algebra from a full multiplication table. No axioms are
    /// checked here; see [`CommAlgebra::validate`].
    pub fn from_table(
        labels: Vec<String>,
        table: Vec<Vec<SparseVec<F>>>,
        unit: SparseVec<F>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if n == 0 {
            return Err(AlgebraError::BadParams("algebra must have positive dimension".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(AlgebraError::BadParams(format!("multiplication table must be {n}x{n}")));
        }
        for v in table.iter().flatten().chain(std::iter::once(&unit)) {
            if let Some(i) = v.max_index() {
                if i >= n {
                    return Err(LinearError::IndexOutOfRange { index: i, dim: n }.into());
                }
            }
        }
        Ok(CommAlgebra { labels, table, unit })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVec<F> {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &SparseVec<F>, b: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zero();
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                out = out.add_scaled(&(x.clone() * y.clone()), &self.table[*i][*j]);
            }
        }
        out
    }

    pub fn pow(&self, a: &SparseVec<F>, n: u32) -> SparseVec<F> {
        let mut out = self.unit.clone();
        for _ in 0..n {
            out = self.mul(&out, a);
        }
        out
    }

    /// Trace of the multiplication operator `y ↦ x y`.
    pub fn trace(&self, x: &SparseVec<F>) -> F {
        let mut acc = F::zero();
        for (i, c) in x.entries() {
            for j in 0..self.dim() {
                acc = acc + c.clone() * self.table[*i][j].get(j);
            }
        }
        acc
    }

    /// Display string such as `2 - t` for a coordinate vector.
    pub fn format_element(&self, a: &SparseVec<F>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in a.entries().iter().enumerate() {
            let label = &self.labels[*i];
            let neg = *c < F::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if label == "1" {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(label);
            } else {
                s.push_str(&format!("{mag}*{label}"));
            }
        }
        s
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut report = ValidationReport::default();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.table[i][j] != self.table[j][i] {
                    report.commutativity.push((i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &SparseVec::unit(k));
                    let right = self.mul(&SparseVec::unit(i), &self.table[j][k]);
                    if left != right {
                        report.associativity.push((i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            let e = SparseVec::unit(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                report.unit_law.push(i);
            }
        }
        report
    }

    // ----- presets -----

    pub fn scalar() -> Self {
        CommAlgebra {
            labels: vec!["1".into()],
            table: vec![vec![SparseVec::unit(0)]],
            unit: SparseVec::unit(0),
        }
    }

    /// Truncated polynomials `Q[t]/(t^n)`.
    pub fn jet(n: usize) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::BadParams("jet order must be at least 1".into()));
        }
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i + j < n { SparseVec::unit(i + j) } else { SparseVec::zero() })
                    .collect()
            })
            .collect();
        Ok(CommAlgebra {
            labels: power_labels(n),
            table,
            unit: SparseVec::unit(0),
        })
    }

    /// `Q[t, t^-1]/(p)`; `coeffs` lists `p` from the constant term up.
    /// `p(0) != 0` makes `t` invertible, so this equals `Q[t]/(p)`.
    pub fn laurent_mod(coeffs: &[F]) -> Result<Self, AlgebraError> {
        if coeffs.first().is_none_or(|c| c.is_zero()) {
            return Err(AlgebraError::BadParams("modulus must satisfy p(0) != 0".into()));
        }
        Self::poly_mod(coeffs)
    }

    /// `Q[t]/(p)` with basis `1, t, ..., t^{deg p - 1}`.
    pub fn poly_mod(coeffs: &[F]) -> Result<Self, AlgebraError> {
        let mut p: Vec<F> = coeffs.to_vec();
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.len() < 2 {
            return Err(AlgebraError::BadParams("modulus must have degree at least 1".into()));
        }
        let d = p.len() - 1;
        let lead = p[d].clone();
        // t^d = -sum_{i<d} (p_i / p_d) t^i
        let top = SparseVec::from_pairs((0..d).map(|i| (i, -p[i].clone() / lead.clone())));
        let mut powers: Vec<SparseVec<F>> = (0..d).map(SparseVec::unit).collect();
        for k in d..(2 * d - 1) {
            let mut next = SparseVec::zero();
            for (i, c) in powers[k - 1].entries() {
                if i + 1 < d {
                    next = next.add_scaled(c, &SparseVec::unit(i + 1));
                } else {
                    next = next.add_scaled(c, &top);
                }
            }
            powers.push(next);
        }
        let table = (0..d)
            .map(|i| (0..d).map(|j| powers[i + j].clone()).collect())
            .collect();
        Ok(CommAlgebra {
            labels: power_labels(d),
            table,
            unit: SparseVec::unit(0),
        })
    }

    /// Functions on finitely many distinct nonzero points, presented as
    /// `Q[t, t^-1]/((t - z_1)...(t - z_k))` with basis `1, t, ..., t^{k-1}`.
    pub fn points(zs: &[F]) -> Result<Self, AlgebraError> {
        if zs.is_empty() {
            return Err(AlgebraError::BadParams("need at least one point".into()));
        }
        for (i, z) in zs.iter().enumerate() {
            if z.is_zero() {
                return Err(AlgebraError::BadParams("evaluation points must be nonzero".into()));
            }
            if zs[..i].contains(z) {
                return Err(AlgebraError::BadParams(format!("repeated evaluation point {z}")));
            }
        }
        let mut p = vec![F::one()];
        for z in zs {
            // p *= (t - z)
            let mut next = vec![F::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
                next[i] = next[i].clone() - c.clone() * z.clone();
            }
            p = next;
        }
        Self::laurent_mod(&p)
    }

    /// Coordinates of the polynomial `sum c_i t^i` for power-basis presets.
    pub fn polynomial(&self, coeffs: &[F]) -> SparseVec<F> {
        let t = if self.dim() > 1 { SparseVec::unit(1) } else { self.unit.clone() };
        let mut out = SparseVec::zero();
        let mut power = self.unit.clone();
        for c in coeffs {
            out = out.add_scaled(c, &power);
            power = self.mul(&power, &t);
        }
        out
    }
}

fn power_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        })
        .collect()
}

/// An ideal of a finite-dimensional algebra, stored as an echelonized subspace.
#[derive(Debug, Clone)]
pub struct IdealBasis<F: Field> {
    ambient: Arc<CommAlgebra<F>>,
    space: SubspaceBasis<F>,
}

impl<F: Field> IdealBasis<F> {
    pub fn new(ambient: Arc<CommAlgebra<F>>, space: SubspaceBasis<F>) -> Result<Self, AlgebraError> {
        if space.ambient_dim() != ambient.dim() {
            return Err(AlgebraError::AmbientMismatch);
        }
        for i in 0..ambient.dim() {
            let e = SparseVec::unit(i);
            for r in space.rows() {
                if !space.contains(&ambient.mul(&e, r)) {
                    return Err(AlgebraError::NotAnIdeal { basis_index: i });
                }
            }
        }
        Ok(IdealBasis { ambient, space })
    }

    pub fn zero(ambient: Arc<CommAlgebra<F>>) -> Self {
        let n = ambient.dim();
        IdealBasis {
            ambient,
            space: SubspaceBasis::empty(n),
        }
    }

    pub fn whole(ambient: Arc<CommAlgebra<F>>) -> Self {
        let n = ambient.dim();
        IdealBasis {
            ambient,
            space: SubspaceBasis::full(n),
        }
    }

    /// The ideal generated by `gens`.
    pub fn generated_by(
        ambient: Arc<CommAlgebra<F>>,
        gens: &[SparseVec<F>],
    ) -> Result<Self, AlgebraError> {
        let n = ambient.dim();
        let mut rows = Vec::new();
        for g in gens {
            for i in 0..n {
                rows.push(ambient.mul(g, &SparseVec::unit(i)));
            }
        }
        let space = echelonize(&rows, n)?;
        Ok(IdealBasis { ambient, space })
    }

    pub fn ambient(&self) -> &Arc<CommAlgebra<F>> {
        &self.ambient
    }

    pub fn space(&self) -> &SubspaceBasis<F> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.rank()
    }

    pub fn codim(&self) -> usize {
        self.ambient.dim() - self.dim()
    }

    pub fn contains(&self, a: &SparseVec<F>) -> bool {
        self.space.contains(a)
    }

    pub fn is_proper(&self) -> bool {
        self.dim() < self.ambient.dim()
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) || *self.ambient == *other.ambient
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.same_ambient(other) {
            return Err(AlgebraError::AmbientMismatch);
        }
        Ok(IdealBasis {
            ambient: self.ambient.clone(),
            space: self.space.intersect(&other.space),
        })
    }
}

impl<F: Field> PartialEq for IdealBasis<F> {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.space == other.space
    }
}

/// `I J`: span of all pairwise products of basis elements.
pub fn ideal_product<F: Field>(
    i: &IdealBasis<F>,
    j: &IdealBasis<F>,
) -> Result<IdealBasis<F>, AlgebraError> {
    if !i.same_ambient(j) {
        return Err(AlgebraError::AmbientMismatch);
    }
    let a = &i.ambient;
    let mut rows = Vec::new();
    for x in i.space.rows() {
        for y in j.space.rows() {
            rows.push(a.mul(x, y));
        }
    }
    let space = echelonize(&rows, a.dim())?;
    Ok(IdealBasis {
        ambient: a.clone(),
        space,
    })
}

/// The surjection `A → A/I`. Quotient coordinates are the free (non-pivot)
/// columns of the echelonized ideal.
#[derive(Debug, Clone)]
pub struct Projection<F: Field> {
    ideal: SubspaceBasis<F>,
    free: Vec<usize>,
}

impl<F: Field> Projection<F> {
    pub fn apply(&self, a: &SparseVec<F>) -> SparseVec<F> {
        let (rem, _) = self.ideal.reduce(a);
        SparseVec::from_pairs(rem.entries().iter().map(|(i, c)| {
            let pos = self.free.binary_search(i).expect("remainder lives on free columns");
            (pos, c.clone())
        }))
    }

    /// Canonical lift back into `A`.
    pub fn lift(&self, b: &SparseVec<F>) -> SparseVec<F> {
        SparseVec::from_pairs(b.entries().iter().map(|(i, c)| (self.free[*i], c.clone())))
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free
    }
}

pub fn quotient<F: Field>(
    a: &CommAlgebra<F>,
    ideal: &IdealBasis<F>,
) -> Result<(CommAlgebra<F>, Projection<F>), AlgebraError> {
    if ideal.space.ambient_dim() != a.dim() {
        return Err(AlgebraError::AmbientMismatch);
    }
    if !ideal.is_proper() {
        return Err(AlgebraError::ImproperIdeal);
    }
    let proj = Projection {
        ideal: ideal.space.clone(),
        free: ideal.space.free_columns(),
    };
    let labels: Vec<String> = proj.free.iter().map(|&c| a.labels[c].clone()).collect();
    let table = proj
        .free
        .iter()
        .map(|&i| proj.free.iter().map(|&j| proj.apply(&a.table[i][j])).collect())
        .collect();
    let unit = proj.apply(&a.unit);
    Ok((CommAlgebra { labels, table, unit }, proj))
}

/// `√I`, as the preimage of the trace-form kernel of `A/I` (characteristic 0).
pub fn radical<F: Field>(ideal: &IdealBasis<F>) -> Result<IdealBasis<F>, AlgebraError> {
    let a = &ideal.ambient;
    if !ideal.is_proper() {
        return Ok(ideal.clone());
    }
    let (b, proj) = quotient(a, ideal)?;
    let nil = nilradical(&b);
    let mut space = ideal.space.clone();
    for r in nil.rows() {
        space.insert(&proj.lift(r));
    }
    IdealBasis::new(a.clone(), space)
}

/// Kernel of the trace form `(x, y) ↦ tr(L_{xy})`.
pub fn nilradical<F: Field>(a: &CommAlgebra<F>) -> SubspaceBasis<F> {
    let n = a.dim();
    let traces: Vec<Vec<F>> = (0..n)
        .map(|i| (0..n).map(|j| a.trace(&a.table[i][j])).collect())
        .collect();
    let rows: Vec<SparseVec<F>> = traces.iter().map(|r| SparseVec::from_dense(r)).collect();
    kernel(&rows, n).expect("gram matrix is square")
}

/// Primitive idempotents and the matching evaluation functionals of a
/// split semisimple algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct CrtSplit<F: Field> {
    pub idempotents: Vec<SparseVec<F>>,
    /// `point_maps[i][k]` is the value of the i-th evaluation on basis element `k`.
    pub point_maps: Vec<Vec<F>>,
}

impl<F: Field> CrtSplit<F> {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    pub fn evaluate(&self, i: usize, a: &SparseVec<F>) -> F {
        a.entries()
            .iter()
            .fold(F::zero(), |acc, (k, c)| acc + c.clone() * self.point_maps[i][*k].clone())
    }
}

/// Splits a semisimple algebra into copies of the base field.
///
/// Idempotents are refined by the eigen-decomposition of multiplication by
/// each basis element in turn; for a split semisimple algebra the basis
/// elements already separate all points.
pub fn crt_split<F: Field>(a: &CommAlgebra<F>) -> Result<CrtSplit<F>, AlgebraError> {
    let nil = nilradical(a);
    if nil.rank() > 0 {
        return Err(AlgebraError::NotSemisimple {
            nilradical_dim: nil.rank(),
        });
    }
    let n = a.dim();
    let mut idems = vec![a.unit.clone()];
    for k in 0..n {
        if idems.len() == n {
            break;
        }
        let x = SparseVec::unit(k);
        let mut refined = Vec::new();
        for e in &idems {
            let xe = a.mul(&x, e);
            let minpoly = min_poly_in(a, &xe, e);
            let (roots, split) = rational_roots(&minpoly);
            if !split {
                return Err(AlgebraError::SplitFieldRequired {
                    element: a.labels[k].clone(),
                });
            }
            for (ri, r) in roots.iter().enumerate() {
                // e * prod_{s != r} (xe - s e) / (r - s)
                let mut p = e.clone();
                for (si, s) in roots.iter().enumerate() {
                    if si == ri {
                        continue;
                    }
                    let factor = xe.add_scaled(&(-s.clone()), e).scale(&(F::one() / (r.clone() - s.clone())));
                    p = a.mul(&p, &factor);
                }
                refined.push(p);
            }
        }
        idems = refined;
    }
    if idems.len() != n {
        // Unreachable for split semisimple input, kept as a guard.
        return Err(AlgebraError::SplitFieldRequired {
            element: "basis".into(),
        });
    }
    let point_maps = idems
        .iter()
        .map(|e| {
            let (lead_idx, lead) = e.leading().cloned().expect("idempotents are nonzero");
            (0..n)
                .map(|k| a.mul(&SparseVec::unit(k), e).get(lead_idx) / lead.clone())
                .collect()
        })
        .collect();
    Ok(CrtSplit {
        idempotents: idems,
        point_maps,
    })
}

/// Minimal polynomial of `x` inside the algebra `eA` with unit `e`,
/// coefficients from the constant term up, monic.
fn min_poly_in<F: Field>(a: &CommAlgebra<F>, x: &SparseVec<F>, e: &SparseVec<F>) -> Vec<F> {
    let n = a.dim();
    let mut powers = vec![e.clone()];
    let mut span = SubspaceBasis::empty(n);
    span.insert(e);
    loop {
        let next = a.mul(powers.last().unwrap(), x);
        if span.contains(&next) {
            powers.push(next);
            // columns are powers; solve sum c_i p_i = 0 with c_last = 1
            let m = powers.len();
            let mut cols: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
            for (k, p) in powers.iter().enumerate() {
                for (i, c) in p.entries() {
                    cols[*i].push((k, c.clone()));
                }
            }
            let eqs: Vec<SparseVec<F>> = cols.into_iter().map(SparseVec::from_pairs).collect();
            let ker = kernel(&eqs, m).expect("in range");
            let v = ker.rows().last().expect("dependent powers give a kernel").clone();
            let lead = v.get(m - 1);
            return (0..m).map(|i| v.get(i) / lead.clone()).collect();
        }
        span.insert(&next);
        powers.push(next);
    }
}

/// Distinct rational roots in increasing order, and whether they account
/// for the full degree (counted with multiplicity).
fn rational_roots<F: Field>(poly: &[F]) -> (Vec<F>, bool) {
    let mut ints = integer_poly(poly);
    let degree = ints.len() - 1;
    let mut roots: Vec<F> = Vec::new();
    let mut found = 0usize;
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        found += 1;
        if !roots.iter().any(|r| r.is_zero()) {
            roots.push(F::zero());
        }
    }
    loop {
        if ints.len() <= 1 {
            break;
        }
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let mut hit = None;
        'search: for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1i32, -1] {
                    let num = if sign == 1 { p.clone() } else { -p.clone() };
                    if eval_int_poly_at(&ints, &num, &q).is_zero() {
                        hit = Some((num, q.clone()));
                        break 'search;
                    }
                }
            }
        }
        let Some((num, den)) = hit else { break };
        ints = deflate(&ints, &num, &den);
        found += 1;
        if let Some(r) = F::from_bigints(num, den) {
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).expect("rationals are totally ordered"));
    (roots, found == degree)
}

fn integer_poly<F: Field>(poly: &[F]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in poly {
        lcm = lcm.lcm(&c.numer_denom().1);
    }
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| {
            let (n, d) = c.numer_denom();
            n * (&lcm / d)
        })
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|c| c / &g).collect()
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let other = n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `q^deg * P(p/q)`
fn eval_int_poly_at(coeffs: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    let deg = coeffs.len() - 1;
    let mut acc = BigInt::zero();
    let mut pp = BigInt::one();
    let mut qq: Vec<BigInt> = Vec::with_capacity(deg + 1);
    let mut qpow = BigInt::one();
    for _ in 0..=deg {
        qq.push(qpow.clone());
        qpow *= q;
    }
    for (i, c) in coeffs.iter().enumerate() {
        acc += c * &pp * &qq[deg - i];
        pp *= p;
    }
    acc
}

/// Divides an integer polynomial by `(q t - p)`, rescaling to stay integral.
fn deflate(coeffs: &[BigInt], p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    // synthetic division by (t - p/q) over the rationals, then clear denominators
    let deg = coeffs.len() - 1;
    let mut out: Vec<num_rational::BigRational> = vec![num_rational::BigRational::zero(); deg];
    let r = num_rational::BigRational::new(p.clone(), q.clone());
    let mut carry = num_rational::BigRational::zero();
    for i in (1..=deg).rev() {
        carry = carry * &r + num_rational::BigRational::from_integer(coeffs[i].clone());
        out[i - 1] = carry.clone();
    }
    let as_field: Vec<num_rational::BigRational> = out;
    integer_poly(&as_field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn sv(vals: &[i64]) -> SparseVec<Q> {
        SparseVec::from_dense(&vals.iter().map(|&v| q(v)).collect::<Vec<_>>())
    }

    #[test]
    fn presets_are_valid() {
        assert!(CommAlgebra::<Q>::scalar().validate().is_valid());
        for n in 1..5 {
            assert!(CommAlgebra::<Q>::jet(n).unwrap().validate().is_valid());
        }
        let pts = CommAlgebra::points(&[q(1), q(2)]).unwrap();
        assert!(pts.validate().is_valid());
        assert_eq!(pts.dim(), 2);
        // t^2 = 3t - 2
        assert_eq!(pts.basis_product(1, 1), &sv(&[-2, 3]));
        let lm = CommAlgebra::laurent_mod(&[q(1), q(0), q(1)]).unwrap();
        assert!(lm.validate().is_valid());
    }

    #[test]
    fn jet_three_has_nilpotent_t() {
        let a = CommAlgebra::<Q>::jet(3).unwrap();
        assert_eq!(a.labels(), &["1", "t", "t^2"]);
        assert!(a.pow(&SparseVec::unit(1), 3).is_zero());
        assert!(!a.pow(&SparseVec::unit(1), 2).is_zero());
    }

    #[test]
    fn preset_param_errors() {
        assert!(matches!(CommAlgebra::<Q>::jet(0), Err(AlgebraError::BadParams(_))));
        assert!(matches!(CommAlgebra::points(&[q(1), q(1)]), Err(AlgebraError::BadParams(_))));
        assert!(matches!(CommAlgebra::points(&[q(0), q(1)]), Err(AlgebraError::BadParams(_))));
        assert!(matches!(
            CommAlgebra::laurent_mod(&[q(0), q(1)]),
            Err(AlgebraError::BadParams(_))
        ));
    }

    #[test]
    fn validate_reports_noncommutative_table() {
        let table = vec![
            vec![sv(&[1, 0]), sv(&[0, 1])],
            vec![sv(&[0, 1]), sv(&[0, 0])],
        ];
        let mut broken = table.clone();
        broken[0][1] = sv(&[0, 2]);
        let a = CommAlgebra::from_table(vec!["1".into(), "t".into()], broken, sv(&[1, 0])).unwrap();
        let rep = a.validate();
        assert!(!rep.is_valid());
        assert_eq!(rep.commutativity, vec![(0, 1)]);
        let ok = CommAlgebra::from_table(vec!["1".into(), "t".into()], table, sv(&[1, 0])).unwrap();
        assert!(ok.validate().is_valid());
    }

    #[test]
    fn product_of_t_ideals_in_jet_three() {
        let a = Arc::new(CommAlgebra::<Q>::jet(3).unwrap());
        let t = IdealBasis::generated_by(a.clone(), &[SparseVec::unit(1)]).unwrap();
        let t2 = IdealBasis::generated_by(a.clone(), &[SparseVec::unit(2)]).unwrap();
        assert_eq!(ideal_product(&t, &t).unwrap(), t2);
        let whole = IdealBasis::whole(a.clone());
        assert_eq!(ideal_product(&t, &whole).unwrap(), t);
    }

    #[test]
    fn product_of_maximal_ideals_at_two_points() {
        let a = Arc::new(CommAlgebra::points(&[q(1), q(2)]).unwrap());
        let m1 = IdealBasis::generated_by(a.clone(), &[sv(&[-1, 1])]).unwrap();
        let m2 = IdealBasis::generated_by(a.clone(), &[sv(&[-2, 1])]).unwrap();
        // brute force: span of all products of spanning elements
        let mut span = SubspaceBasis::empty(2);
        for x in m1.space().rows() {
            for y in m2.space().rows() {
                span.insert(&a.mul(x, y));
            }
        }
        assert_eq!(span.rank(), 0);
        assert_eq!(ideal_product(&m1, &m2).unwrap().dim(), 0);
        assert_eq!(m1.intersect(&m2).unwrap().dim(), 0);
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let a = Arc::new(CommAlgebra::<Q>::jet(2).unwrap());
        let b = Arc::new(CommAlgebra::<Q>::jet(3).unwrap());
        let err = ideal_product(&IdealBasis::zero(a), &IdealBasis::zero(b)).unwrap_err();
        assert_eq!(err, AlgebraError::AmbientMismatch);
    }

    #[test]
    fn not_an_ideal_is_rejected() {
        let a = Arc::new(CommAlgebra::<Q>::jet(3).unwrap());
        let space = echelonize(&[SparseVec::unit(1)], 3).unwrap();
        assert!(matches!(
            IdealBasis::new(a, space),
            Err(AlgebraError::NotAnIdeal { .. })
        ));
    }

    #[test]
    fn radical_examples() {
        let jet2 = Arc::new(CommAlgebra::<Q>::jet(2).unwrap());
        let r = radical(&IdealBasis::zero(jet2.clone())).unwrap();
        assert_eq!(r.space().rows(), &[SparseVec::unit(1)]);

        let pts = Arc::new(CommAlgebra::points(&[q(1), q(2)]).unwrap());
        assert_eq!(radical(&IdealBasis::zero(pts)).unwrap().dim(), 0);

        // Q[t]/(t^3 - t^2): brute-force nilpotents among small combinations
        let a = Arc::new(CommAlgebra::poly_mod(&[q(0), q(0), q(-1), q(1)]).unwrap());
        let r = radical(&IdealBasis::zero(a.clone())).unwrap();
        assert_eq!(r.dim(), 1);
        let expected = sv(&[0, -1, 1]);
        assert!(r.contains(&expected));
        let mut nil = SubspaceBasis::empty(3);
        for x in -2..=2 {
            for y in -2..=2 {
                for z in -2..=2 {
                    let v = sv(&[x, y, z]);
                    if a.pow(&v, 3).is_zero() {
                        nil.insert(&v);
                    }
                }
            }
        }
        assert_eq!(&nil, r.space());
    }

    #[test]
    fn radical_invariants() {
        let a = Arc::new(CommAlgebra::<Q>::jet(4).unwrap());
        let i = IdealBasis::generated_by(a.clone(), &[SparseVec::unit(3)]).unwrap();
        let r = radical(&i).unwrap();
        assert!(i.space().is_subspace_of(r.space()));
        assert_eq!(radical(&r).unwrap(), r);
        let (b, _) = quotient(&a, &r).unwrap();
        assert_eq!(nilradical(&b).rank(), 0);
    }

    #[test]
    fn crt_examples() {
        let pts = CommAlgebra::points(&[q(1), q(2)]).unwrap();
        let split = crt_split(&pts).unwrap();
        assert_eq!(split.idempotents, vec![sv(&[2, -1]), sv(&[-1, 1])]);
        assert_eq!(split.point_maps, vec![vec![q(1), q(1)], vec![q(1), q(2)]]);

        let s = crt_split(&CommAlgebra::<Q>::scalar()).unwrap();
        assert_eq!(s.idempotents, vec![SparseVec::unit(0)]);

        assert!(matches!(
            crt_split(&CommAlgebra::<Q>::jet(2).unwrap()),
            Err(AlgebraError::NotSemisimple { nilradical_dim: 1 })
        ));
    }

    #[test]
    fn crt_requires_split_field() {
        // Q[t]/(t^2 - 2) is a field but not split over Q
        let a = CommAlgebra::laurent_mod(&[q(-2), q(0), q(1)]).unwrap();
        assert!(matches!(crt_split(&a), Err(AlgebraError::SplitFieldRequired { .. })));
    }

    #[test]
    fn crt_idempotent_identities_three_points() {
        let a = CommAlgebra::points(&[q(-1), Q::from_ratio(1, 2), q(3)]).unwrap();
        let split = crt_split(&a).unwrap();
        let mut sum = SparseVec::zero();
        for (i, ei) in split.idempotents.iter().enumerate() {
            sum = sum.add(ei);
            for (j, ej) in split.idempotents.iter().enumerate() {
                let prod = a.mul(ei, ej);
                if i == j {
                    assert_eq!(&prod, ei);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        assert_eq!(&sum, a.unit());
        let x = sv(&[3, -1, 2]);
        let mut recon = SparseVec::zero();
        for (i, e) in split.idempotents.iter().enumerate() {
            recon = recon.add_scaled(&split.evaluate(i, &x), e);
        }
        assert_eq!(recon, x);
        // point maps are unital algebra morphisms
        for i in 0..split.len() {
            assert_eq!(split.evaluate(i, a.unit()), q(1));
            let y = sv(&[0, 1, 1]);
            assert_eq!(
                split.evaluate(i, &a.mul(&x, &y)),
                split.evaluate(i, &x) * split.evaluate(i, &y)
            );
        }
    }

    #[test]
    fn quotient_examples() {
        let jet3 = Arc::new(CommAlgebra::<Q>::jet(3).unwrap());
        let t2 = IdealBasis::generated_by(jet3.clone(), &[SparseVec::unit(2)]).unwrap();
        let (b, _) = quotient(&jet3, &t2).unwrap();
        assert_eq!(b, CommAlgebra::jet(2).unwrap());

        let pts = Arc::new(CommAlgebra::points(&[q(1), q(2)]).unwrap());
        let m1 = IdealBasis::generated_by(pts.clone(), &[sv(&[-1, 1])]).unwrap();
        let (b, proj) = quotient(&pts, &m1).unwrap();
        assert_eq!(b.dim(), 1);
        // the image of t is 1 times the quotient unit: evaluation at z1 = 1
        assert_eq!(proj.apply(&SparseVec::unit(1)), b.unit().scale(&q(1)));
        let m2 = IdealBasis::generated_by(pts.clone(), &[sv(&[-2, 1])]).unwrap();
        let (b2, proj2) = quotient(&pts, &m2).unwrap();
        assert_eq!(proj2.apply(&SparseVec::unit(1)), b2.unit().scale(&q(2)));

        let (same, proj) = quotient(&pts, &IdealBasis::zero(pts.clone())).unwrap();
        assert_eq!(same, *pts);
        assert_eq!(proj.apply(&sv(&[4, 5])), sv(&[4, 5]));

        assert_eq!(
            quotient(&pts, &IdealBasis::whole(pts.clone())).unwrap_err(),
            AlgebraError::ImproperIdeal
        );
    }

    #[test]
    fn projection_is_algebra_morphism() {
        let a = Arc::new(CommAlgebra::<Q>::jet(4).unwrap());
        let i = IdealBasis::generated_by(a.clone(), &[SparseVec::unit(2)]).unwrap();
        let (b, proj) = quotient(&a, &i).unwrap();
        let x = sv(&[1, 2, 3, 4]);
        let y = sv(&[-1, 0, 5, 1]);
        assert_eq!(proj.apply(&a.mul(&x, &y)), b.mul(&proj.apply(&x), &proj.apply(&y)));
        assert_eq!(&proj.apply(a.unit()), b.unit());
        for r in i.space().rows() {
            assert!(proj.apply(r).is_zero());
        }
    }

    #[test]
    fn rational_root_search() {
        // (t - 1/2)(t + 3) = t^2 + 5/2 t - 3/2
        let (roots, split) = rational_roots(&[Q::from_ratio(-3, 2), Q::from_ratio(5, 2), q(1)]);
        assert!(split);
        assert_eq!(roots, vec![q(-3), Q::from_ratio(1, 2)]);
        let (roots, split) = rational_roots(&[q(-2), q(0), q(1)]);
        assert!(!split);
        assert!(roots.is_empty());
        let (roots, split) = rational_roots(&[q(0), q(-1), q(1)]);
        assert!(split);
        assert_eq!(roots, vec![q(0), q(1)]);
    }
}
