//! The loop affine-Virasoro algebra `τ(A)` as exact structure constants.
//!
//! Basis symbols are `x⊗t^m(a)` (loop currents), `L_n(a)` and `K(a)` for
//! `a` running over a basis of `A`. The Virasoro center is identified with
//! `K`, so there is no separate symbol for it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::comm_algebra::CommAlgebra;
use crate::lie::SimpleLieData;
use crate::linear::SparseVec;
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TauError {
    #[error("elements belong to different loop algebras")]
    AlgebraMismatch,
    #[error("cannot parse symbol `{0}`")]
    BadSymbol(String),
}

/// Which exponent multiplies the affine cocycle `δ_{m+n,0} (X,Y) K` in
/// `[X⊗t^n, Y⊗t^m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CentralConvention {
    /// `n`, the exponent of the first argument (the usual convention).
    #[default]
    FirstExponent,
    /// `m`, the exponent of the second argument.
    SecondExponent,
}

impl CentralConvention {
    pub fn name(self) -> &'static str {
        match self {
            CentralConvention::FirstExponent => "first-exponent",
            CentralConvention::SecondExponent => "second-exponent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// `g_index ⊗ t^power`
    Current { g: usize, power: i64 },
    /// `L_n`
    Vir(i64),
    /// `K`
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauSymbol {
    pub kind: SymbolKind,
    /// Basis index into `A`.
    pub a: usize,
}

impl TauSymbol {
    pub fn current(g: usize, power: i64, a: usize) -> Self {
        TauSymbol { kind: SymbolKind::Current { g, power }, a }
    }

    pub fn vir(n: i64, a: usize) -> Self {
        TauSymbol { kind: SymbolKind::Vir(n), a }
    }

    pub fn central(a: usize) -> Self {
        TauSymbol { kind: SymbolKind::Central, a }
    }

    pub fn with_a(self, a: usize) -> Self {
        TauSymbol { a, ..self }
    }
}

/// Weight offset `(p, q)` of a symbol: its weight is `-p α - q δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BiDegree {
    pub p: i64,
    pub q: i64,
}

impl BiDegree {
    pub fn new(p: i64, q: i64) -> Self {
        BiDegree { p, q }
    }
}

impl std::ops::Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree { p: self.p + o.p, q: self.q + o.q }
    }
}

impl std::ops::Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree { p: self.p - o.p, q: self.q - o.q }
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Triangular decomposition `τ(A) = τ⁻(A) ⊕ τ⁰(A) ⊕ τ⁺(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Minus,
    Zero,
    Plus,
}

/// Finite linear combination of symbols; zero coefficients are never stored.
#[derive(Clone, PartialEq, Default)]
pub struct TauElement<F> {
    terms: BTreeMap<TauSymbol, F>,
}

impl<F: Field> TauElement<F> {
    pub fn zero() -> Self {
        TauElement { terms: BTreeMap::new() }
    }

    pub fn symbol(s: TauSymbol) -> Self {
        Self::term(s, F::one())
    }

    pub fn term(s: TauSymbol, c: F) -> Self {
        let mut e = Self::zero();
        e.add_term(s, c);
        e
    }

    pub fn add_term(&mut self, s: TauSymbol, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(s).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        for (s, x) in &self.terms {
            out.add_term(*s, x.clone() * c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TauSymbol, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &TauSymbol) -> F {
        self.terms.get(s).cloned().unwrap_or_else(F::zero)
    }

    /// `kind ⊗ a` for an arbitrary element `a` of `A` given by coordinates.
    pub fn from_kind(kind: SymbolKind, a: &SparseVec<F>) -> Self {
        let mut out = Self::zero();
        for (k, c) in a.entries() {
            out.add_term(TauSymbol { kind, a: *k }, c.clone());
        }
        out
    }
}

impl<F: Field> fmt::Debug for TauElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `τ(A)` for a fixed simple `g` and commutative algebra `A`.
#[derive(Debug, Clone)]
pub struct TauAlgebra<F: Field> {
    lie: SimpleLieData<F>,
    algebra: Arc<CommAlgebra<F>>,
    convention: CentralConvention,
}

impl<F: Field> PartialEq for TauAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.convention == other.convention
            && self.lie == other.lie
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
    }
}

impl<F: Field> TauAlgebra<F> {
    pub fn new(lie: SimpleLieData<F>, algebra: Arc<CommAlgebra<F>>, convention: CentralConvention) -> Self {
        TauAlgebra { lie, algebra, convention }
    }

    /// `sl2` with the default cocycle convention.
    pub fn sl2(algebra: Arc<CommAlgebra<F>>) -> Self {
        Self::new(SimpleLieData::sl2(), algebra, CentralConvention::default())
    }

    pub fn lie(&self) -> &SimpleLieData<F> {
        &self.lie
    }

    pub fn algebra(&self) -> &Arc<CommAlgebra<F>> {
        &self.algebra
    }

    pub fn convention(&self) -> CentralConvention {
        self.convention
    }

    pub fn unit_index_vec(&self) -> SparseVec<F> {
        self.algebra.unit().clone()
    }

    pub fn degree(&self, s: &TauSymbol) -> BiDegree {
        match s.kind {
            SymbolKind::Current { g, power } => BiDegree::new(-self.lie.root_coeff[g], -power),
            SymbolKind::Vir(n) => BiDegree::new(0, -n),
            SymbolKind::Central => BiDegree::new(0, 0),
        }
    }

    pub fn triangular_part(&self, s: &TauSymbol) -> Part {
        let d = self.degree(s);
        if d.q < 0 || (d.q == 0 && d.p < 0) {
            Part::Plus
        } else if d.q > 0 || d.p > 0 {
            Part::Minus
        } else {
            Part::Zero
        }
    }

    /// Sort key for symbols inside PBW monomials: `q`, then `p`, then kind,
    /// then the `A` index.
    pub fn pbw_key(&self, s: &TauSymbol) -> (i64, i64, usize, usize) {
        let d = self.degree(s);
        let tag = match s.kind {
            SymbolKind::Current { g, .. } => g,
            SymbolKind::Vir(_) => self.lie.dim(),
            SymbolKind::Central => self.lie.dim() + 1,
        };
        (d.q, d.p, tag, s.a)
    }

    /// `[s1, s2]` on basis symbols.
    pub fn bracket_symbols(&self, s1: &TauSymbol, s2: &TauSymbol) -> TauElement<F> {
        let base = self.base_bracket(&s1.kind, &s2.kind);
        let mut out = TauElement::zero();
        if base.is_empty() {
            return out;
        }
        let prod = self.algebra.basis_product(s1.a, s2.a);
        for (kind, c) in &base {
            for (k, x) in prod.entries() {
                out.add_term(TauSymbol { kind: *kind, a: *k }, c.clone() * x.clone());
            }
        }
        out
    }

    fn base_bracket(&self, k1: &SymbolKind, k2: &SymbolKind) -> Vec<(SymbolKind, F)> {
        use SymbolKind::*;
        match (*k1, *k2) {
            (Central, _) | (_, Central) => Vec::new(),
            (Current { g: g1, power: n }, Current { g: g2, power: m }) => {
                let mut out: Vec<(SymbolKind, F)> = self.lie.bracket[g1][g2]
                    .entries()
                    .iter()
                    .map(|(g, c)| (Current { g: *g, power: n + m }, c.clone()))
                    .collect();
                if n + m == 0 {
                    let factor = match self.convention {
                        CentralConvention::FirstExponent => n,
                        CentralConvention::SecondExponent => m,
                    };
                    let c = F::from_int(factor) * self.lie.form[g1][g2].clone();
                    if !c.is_zero() {
                        out.push((Central, c));
                    }
                }
                out
            }
            (Vir(n), Vir(m)) => {
                let mut out = Vec::new();
                if m != n {
                    out.push((Vir(n + m), F::from_int(m - n)));
                }
                if n + m == 0 {
                    let c = F::from_ratio(n * n * n - n, 12);
                    if !c.is_zero() {
                        out.push((Central, c));
                    }
                }
                out
            }
            (Vir(n), Current { g, power: m }) => {
                if m == 0 {
                    Vec::new()
                } else {
                    vec![(Current { g, power: m + n }, F::from_int(m))]
                }
            }
            (Current { g, power: m }, Vir(n)) => {
                if m == 0 {
                    Vec::new()
                } else {
                    vec![(Current { g, power: m + n }, F::from_int(-m))]
                }
            }
        }
    }

    pub fn bracket(&self, u: &TauElement<F>, v: &TauElement<F>) -> TauElement<F> {
        let mut out = TauElement::zero();
        for (s1, c1) in u.terms() {
            for (s2, c2) in v.terms() {
                let b = self.bracket_symbols(s1, s2);
                out = out.add(&b.scale(&(c1.clone() * c2.clone())));
            }
        }
        out
    }

    /// Checked bracket between elements of two (possibly different) algebras.
    pub fn bracket_checked(
        &self,
        other: &TauAlgebra<F>,
        u: &TauElement<F>,
        v: &TauElement<F>,
    ) -> Result<TauElement<F>, TauError> {
        if self != other {
            return Err(TauError::AlgebraMismatch);
        }
        Ok(self.bracket(u, v))
    }

    /// `[s1,[s2,s3]] + [s3,[s1,s2]] + [s2,[s3,s1]]`, which must vanish.
    pub fn jacobi_probe(&self, s1: &TauSymbol, s2: &TauSymbol, s3: &TauSymbol) -> TauElement<F> {
        let e = |s: &TauSymbol| TauElement::symbol(*s);
        let t1 = self.bracket(&e(s1), &self.bracket_symbols(s2, s3));
        let t2 = self.bracket(&e(s3), &self.bracket_symbols(s1, s2));
        let t3 = self.bracket(&e(s2), &self.bracket_symbols(s3, s1));
        t1.add(&t2).add(&t3)
    }

    pub fn check_symbol(&self, s: &TauSymbol) -> Result<(), TauError> {
        let ok = s.a < self.algebra.dim()
            && match s.kind {
                SymbolKind::Current { g, .. } => g < self.lie.dim(),
                _ => true,
            };
        if ok {
            Ok(())
        } else {
            Err(TauError::BadSymbol(self.symbol_label(s)))
        }
    }

    /// Display string: `X(t^-1;a1)`, `L_-2(a0)`, `K(a1)`.
    pub fn symbol_label(&self, s: &TauSymbol) -> String {
        match s.kind {
            SymbolKind::Current { g, power } => {
                let name = self.lie.labels.get(g).map(String::as_str).unwrap_or("?");
                format!("{name}(t^{power};a{})", s.a)
            }
            SymbolKind::Vir(n) => format!("L_{n}(a{})", s.a),
            SymbolKind::Central => format!("K(a{})", s.a),
        }
    }

    /// Inverse of [`TauAlgebra::symbol_label`].
    pub fn parse_symbol(&self, text: &str) -> Result<TauSymbol, TauError> {
        let bad = || TauError::BadSymbol(text.to_string());
        let t = text.trim();
        let open = t.find('(').ok_or_else(bad)?;
        if !t.ends_with(')') {
            return Err(bad());
        }
        let head = &t[..open];
        let inner = &t[open + 1..t.len() - 1];
        let parse_a = |s: &str| -> Result<usize, TauError> {
            s.trim().strip_prefix('a').ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let sym = if head == "K" {
            TauSymbol::central(parse_a(inner)?)
        } else if let Some(n) = head.strip_prefix("L_") {
            TauSymbol::vir(n.parse().map_err(|_| bad())?, parse_a(inner)?)
        } else {
            let g = self.lie.labels.iter().position(|l| l == head).ok_or_else(bad)?;
            let (pw, a) = inner.split_once(';').ok_or_else(bad)?;
            let power = pw.trim().strip_prefix("t^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            TauSymbol::current(g, power, parse_a(a)?)
        };
        self.check_symbol(&sym)?;
        Ok(sym)
    }

    pub fn format_element(&self, e: &TauElement<F>) -> String {
        if e.is_zero() {
            return "0".into();
        }
        e.terms()
            .map(|(s, c)| format!("{c}*{}", self.symbol_label(s)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Every symbol with t-powers and Virasoro indices in `[-w, w]`.
    pub fn symbol_window(&self, w: i64) -> Vec<TauSymbol> {
        let mut out = Vec::new();
        for a in 0..self.algebra.dim() {
            for g in 0..self.lie.dim() {
                for m in -w..=w {
                    out.push(TauSymbol::current(g, m, a));
                }
            }
            for n in -w..=w {
                out.push(TauSymbol::vir(n, a));
            }
            out.push(TauSymbol::central(a));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    const X: usize = 0;
    const Y: usize = 1;
    const H: usize = 2;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn tau(a: CommAlgebra<Q>, conv: CentralConvention) -> TauAlgebra<Q> {
        TauAlgebra::new(SimpleLieData::sl2(), Arc::new(a), conv)
    }

    #[test]
    fn virasoro_brackets() {
        let t = tau(CommAlgebra::scalar(), CentralConvention::SecondExponent);
        let b = t.bracket_symbols(&TauSymbol::vir(1, 0), &TauSymbol::vir(-1, 0));
        assert_eq!(b, TauElement::term(TauSymbol::vir(0, 0), q(-2)));

        let t = tau(CommAlgebra::jet(2).unwrap(), CentralConvention::SecondExponent);
        // a = 1, b = 1: ab = 1
        let b = t.bracket_symbols(&TauSymbol::vir(2, 0), &TauSymbol::vir(-2, 0));
        let mut want = TauElement::term(TauSymbol::vir(0, 0), q(-4));
        want.add_term(TauSymbol::central(0), Q::from_ratio(1, 2));
        assert_eq!(b, want);
        // a = 1, b = t: ab = t
        let b = t.bracket_symbols(&TauSymbol::vir(2, 0), &TauSymbol::vir(-2, 1));
        let mut want = TauElement::term(TauSymbol::vir(0, 1), q(-4));
        want.add_term(TauSymbol::central(1), Q::from_ratio(1, 2));
        assert_eq!(b, want);
    }

    #[test]
    fn affine_cocycle_as_printed_uses_second_exponent() {
        let t = tau(CommAlgebra::scalar(), CentralConvention::SecondExponent);
        let b = t.bracket_symbols(&TauSymbol::current(X, 2, 0), &TauSymbol::current(Y, -2, 0));
        let mut want = TauElement::symbol(TauSymbol::current(H, 0, 0));
        want.add_term(TauSymbol::central(0), q(-2));
        assert_eq!(b, want);

        let t = tau(CommAlgebra::scalar(), CentralConvention::FirstExponent);
        let b = t.bracket_symbols(&TauSymbol::current(X, 2, 0), &TauSymbol::current(Y, -2, 0));
        assert_eq!(b.coeff(&TauSymbol::central(0)), q(2));
    }

    #[test]
    fn virasoro_acts_on_currents() {
        let t = tau(CommAlgebra::jet(2).unwrap(), CentralConvention::SecondExponent);
        let b = t.bracket_symbols(&TauSymbol::vir(3, 0), &TauSymbol::current(X, -1, 1));
        assert_eq!(b, TauElement::term(TauSymbol::current(X, 2, 1), q(-1)));
    }

    #[test]
    fn triangular_parts() {
        let t = tau(CommAlgebra::scalar(), CentralConvention::default());
        assert_eq!(t.triangular_part(&TauSymbol::current(Y, 0, 0)), Part::Minus);
        assert_eq!(t.triangular_part(&TauSymbol::current(H, 0, 0)), Part::Zero);
        assert_eq!(t.triangular_part(&TauSymbol::central(0)), Part::Zero);
        assert_eq!(t.triangular_part(&TauSymbol::vir(0, 0)), Part::Zero);
        assert_eq!(t.triangular_part(&TauSymbol::current(Y, 1, 0)), Part::Plus);
        assert_eq!(t.triangular_part(&TauSymbol::vir(2, 0)), Part::Plus);
        assert_eq!(t.triangular_part(&TauSymbol::current(X, 0, 0)), Part::Plus);
        assert_eq!(t.triangular_part(&TauSymbol::current(X, -1, 0)), Part::Minus);
        assert_eq!(t.degree(&TauSymbol::current(Y, -3, 0)), BiDegree::new(1, 3));
    }

    #[test]
    fn jacobi_examples() {
        for conv in [CentralConvention::FirstExponent, CentralConvention::SecondExponent] {
            let t = tau(CommAlgebra::scalar(), conv);
            assert!(t
                .jacobi_probe(&TauSymbol::vir(1, 0), &TauSymbol::vir(-1, 0), &TauSymbol::vir(0, 0))
                .is_zero());
            let t = tau(CommAlgebra::jet(2).unwrap(), conv);
            assert!(t
                .jacobi_probe(
                    &TauSymbol::vir(1, 1),
                    &TauSymbol::current(X, -1, 0),
                    &TauSymbol::current(Y, 0, 1)
                )
                .is_zero());
            let t = tau(CommAlgebra::points(&[q(1), q(2)]).unwrap(), conv);
            assert!(t
                .jacobi_probe(
                    &TauSymbol::current(X, 0, 0),
                    &TauSymbol::current(Y, 0, 1),
                    &TauSymbol::current(H, 0, 1)
                )
                .is_zero());
        }
    }

    #[test]
    fn structure_constants_on_window() {
        for conv in [CentralConvention::FirstExponent, CentralConvention::SecondExponent] {
            let t = tau(CommAlgebra::jet(2).unwrap(), conv);
            let w = t.symbol_window(2);
            for s1 in &w {
                assert!(t.bracket_symbols(&TauSymbol::central(0), s1).is_zero());
                for s2 in &w {
                    let ab = t.bracket_symbols(s1, s2);
                    let ba = t.bracket_symbols(s2, s1);
                    assert!(ab.add(&ba).is_zero(), "{s1:?} {s2:?}");
                    // degree additivity
                    let d = t.degree(s1) + t.degree(s2);
                    for (s, _) in ab.terms() {
                        assert_eq!(t.degree(s), d);
                    }
                }
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        let t = tau(CommAlgebra::jet(2).unwrap(), CentralConvention::default());
        for s in t.symbol_window(2) {
            let label = t.symbol_label(&s);
            assert_eq!(t.parse_symbol(&label).unwrap(), s, "{label}");
        }
        assert_eq!(t.symbol_label(&TauSymbol::current(X, -1, 1)), "X(t^-1;a1)");
        assert_eq!(t.symbol_label(&TauSymbol::vir(-2, 0)), "L_-2(a0)");
        assert_eq!(t.symbol_label(&TauSymbol::central(1)), "K(a1)");
        assert!(t.parse_symbol("K(a7)").is_err());
        assert!(t.parse_symbol("Z(t^1;a0)").is_err());
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let t1 = tau(CommAlgebra::scalar(), CentralConvention::default());
        let t2 = tau(CommAlgebra::jet(2).unwrap(), CentralConvention::default());
        let e = TauElement::symbol(TauSymbol::vir(1, 0));
        assert_eq!(t1.bracket_checked(&t2, &e, &e), Err(TauError::AlgebraMismatch));
        assert!(t1.bracket_checked(&t1.clone(), &e, &e).unwrap().is_zero());
    }
}
