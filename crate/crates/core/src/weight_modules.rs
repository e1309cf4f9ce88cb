//! Box-truncated highest-weight modules over `τ(A)`.
//!
//! Weights are written as offsets `ψ - pα - qδ` from the highest weight. A
//! module only answers for offsets inside its region; anything that would
//! land outside is reported as an error instead of being dropped.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::comm_algebra::{crt_split, nilradical, quotient, AlgebraError, CommAlgebra, IdealBasis};
use crate::linear::{kernel, SparseVec, SubspaceBasis};
use crate::scalar::Field;
use crate::tau::{BiDegree, Part, SymbolKind, TauAlgebra, TauElement, TauSymbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("{symbol} maps offset {from} to {to}, outside the computed region")]
    Truncation {
        symbol: String,
        from: BiDegree,
        to: BiDegree,
    },
    #[error("offset {offset} needs offset {needed}, which is outside the box")]
    BoxTooSmall { offset: BiDegree, needed: BiDegree },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Values of `ψ` on `h⊗a_k`, `K⊗a_k` and `L_0⊗a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunctional<F> {
    pub h: Vec<F>,
    pub k: Vec<F>,
    pub l0: Vec<F>,
}

impl<F: Field> PsiFunctional<F> {
    pub fn new(h: Vec<F>, k: Vec<F>, l0: Vec<F>) -> Result<Self, ModuleError> {
        if h.len() != k.len() || h.len() != l0.len() {
            return Err(ModuleError::BadParams(format!(
                "psi lists have lengths {}, {}, {}",
                h.len(),
                k.len(),
                l0.len()
            )));
        }
        Ok(PsiFunctional { h, k, l0 })
    }

    /// `ψ` over `A = ℚ` given by `(λ, c, d_0)`.
    pub fn scalar(lambda: F, level: F, d0: F) -> Self {
        PsiFunctional { h: vec![lambda], k: vec![level], l0: vec![d0] }
    }

    /// `ψ(u)` on `τ⁰(A)` symbols; zero elsewhere.
    pub fn value(&self, tau: &TauAlgebra<F>, s: &TauSymbol) -> F {
        let lie = tau.lie();
        match s.kind {
            SymbolKind::Current { g, power: 0 } if lie.cartan.contains(&g) => self.h[s.a].clone(),
            SymbolKind::Central => self.k[s.a].clone(),
            SymbolKind::Vir(0) => self.l0[s.a].clone(),
            _ => F::zero(),
        }
    }

    fn pair(values: &[F], a: &SparseVec<F>) -> F {
        a.entries()
            .iter()
            .fold(F::zero(), |acc, (i, c)| acc + c.clone() * values[*i].clone())
    }

    pub fn h_on(&self, a: &SparseVec<F>) -> F {
        Self::pair(&self.h, a)
    }

    pub fn k_on(&self, a: &SparseVec<F>) -> F {
        Self::pair(&self.k, a)
    }

    pub fn l0_on(&self, a: &SparseVec<F>) -> F {
        Self::pair(&self.l0, a)
    }

    /// `λ = ψ(h⊗1)`
    pub fn lambda(&self, a: &CommAlgebra<F>) -> F {
        self.h_on(a.unit())
    }

    /// `c = ψ(K⊗1)`
    pub fn level(&self, a: &CommAlgebra<F>) -> F {
        self.k_on(a.unit())
    }

    /// `d_0 = ψ(L_0⊗1)`
    pub fn d0(&self, a: &CommAlgebra<F>) -> F {
        self.l0_on(a.unit())
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }
}

/// Rectangular truncation: `0 ≤ q ≤ q_max`, `-q ≤ p ≤ p_max`.
///
/// `p` can be negative because `X⊗t^{-n}` lowers the `δ` part while raising
/// the `α` part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightBox {
    pub p_max: i64,
    pub q_max: i64,
}

impl WeightBox {
    pub fn new(p_max: i64, q_max: i64) -> Self {
        WeightBox { p_max, q_max }
    }

    pub fn contains(&self, off: BiDegree) -> bool {
        is_weight_offset(off) && off.q <= self.q_max && off.p <= self.p_max
    }

    pub fn offsets(&self) -> Vec<BiDegree> {
        let mut out = Vec::new();
        for q in 0..=self.q_max {
            for p in -q..=self.p_max {
                out.push(BiDegree::new(p, q));
            }
        }
        out
    }
}

/// Offsets that can carry weight vectors in any highest-weight module.
pub fn is_weight_offset(off: BiDegree) -> bool {
    off.q >= 0 && off.p >= -off.q
}

/// Finite linear combination of basis keys with no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct ModVec<K, F> {
    terms: BTreeMap<K, F>,
}

impl<K: Ord + Clone, F: Field> ModVec<K, F> {
    pub fn zero() -> Self {
        ModVec { terms: BTreeMap::new() }
    }

    pub fn unit(k: K) -> Self {
        Self::term(k, F::one())
    }

    pub fn term(k: K, c: F) -> Self {
        let mut v = Self::zero();
        v.add_term(k, c);
        v
    }

    pub fn add_term(&mut self, k: K, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                *slot = slot.clone() + c;
                if slot.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &F, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&F::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-F::one(), other);
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &K) -> F {
        self.terms.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &F)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// If `self = c·other` for a scalar `c`, returns `c`.
    pub fn ratio_to(&self, other: &Self) -> Option<F> {
        if other.is_zero() {
            return if self.is_zero() { Some(F::zero()) } else { None };
        }
        let (k0, x0) = other.terms.iter().next()?;
        let c = self.get(k0) / x0.clone();
        if self.sub(&other.scale(&c)).is_zero() {
            Some(c)
        } else {
            None
        }
    }
}

impl<K: Debug, F: Field> Debug for ModVec<K, F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, c)| (k, c.to_string()))).finish()
    }
}

/// Ordered product of lowering symbols applied to the highest-weight vector.
/// The first factor is applied last; factors ascend in [`TauAlgebra::pbw_key`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PbwMonomial(pub Vec<TauSymbol>);

impl PbwMonomial {
    pub fn top() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn factors(&self) -> &[TauSymbol] {
        &self.0
    }

    pub fn degree<F: Field>(&self, tau: &TauAlgebra<F>) -> BiDegree {
        self.0.iter().fold(BiDegree::default(), |d, s| d + tau.degree(s))
    }

    pub fn label<F: Field>(&self, tau: &TauAlgebra<F>) -> String {
        self.label_with(tau, "v")
    }

    /// Label with a custom name for the highest-weight vector.
    pub fn label_with<F: Field>(&self, tau: &TauAlgebra<F>, top: &str) -> String {
        let mut parts: Vec<String> = self.0.iter().map(|s| tau.symbol_label(s)).collect();
        parts.push(top.into());
        parts.join("·")
    }
}

/// Common interface of the truncated modules.
pub trait HighestWeightModule<F: Field>: Send + Sync {
    type Key: Clone + Ord + Hash + Debug + Send + Sync;

    fn tau(&self) -> &TauAlgebra<F>;
    fn psi(&self) -> &PsiFunctional<F>;
    /// Offsets whose dimensions the module reports.
    fn weight_box(&self) -> WeightBox;
    /// Whether vectors at `off` can be represented exactly.
    fn represents(&self, off: BiDegree) -> bool;
    fn offset_of(&self, key: &Self::Key) -> BiDegree;
    fn basis(&self, off: BiDegree) -> Result<Vec<Self::Key>, ModuleError>;
    fn highest_key(&self) -> Self::Key;
    fn key_label(&self, key: &Self::Key) -> String;
    fn act_symbol(
        &self,
        s: &TauSymbol,
        v: &ModVec<Self::Key, F>,
    ) -> Result<ModVec<Self::Key, F>, ModuleError>;

    fn act(
        &self,
        u: &TauElement<F>,
        v: &ModVec<Self::Key, F>,
    ) -> Result<ModVec<Self::Key, F>, ModuleError> {
        let mut out = ModVec::zero();
        for (s, c) in u.terms() {
            out.add_scaled(c, &self.act_symbol(s, v)?);
        }
        Ok(out)
    }

    fn highest_vector(&self) -> ModVec<Self::Key, F> {
        ModVec::unit(self.highest_key())
    }

    fn dim(&self, off: BiDegree) -> Result<usize, ModuleError> {
        Ok(self.basis(off)?.len())
    }

    /// Dimensions over the whole box, `q` outer, `p` inner.
    fn dim_table(&self) -> Result<Vec<(BiDegree, usize)>, ModuleError> {
        self.weight_box()
            .offsets()
            .into_iter()
            .map(|o| Ok((o, self.dim(o)?)))
            .collect()
    }

    fn format_vector(&self, v: &ModVec<Self::Key, F>) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.terms()
            .map(|(k, c)| format!("{c}*{}", self.key_label(k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Offset of a homogeneous vector; `None` for zero or mixed vectors.
    fn offset_of_vector(&self, v: &ModVec<Self::Key, F>) -> Option<BiDegree> {
        let mut it = v.keys().map(|k| self.offset_of(k));
        let first = it.next()?;
        it.all(|o| o == first).then_some(first)
    }
}

type ActionCache<F> = Mutex<HashMap<(TauSymbol, PbwMonomial), Arc<ModVec<PbwMonomial, F>>>>;

/// The Verma module `M(ψ)` with PBW basis.
///
/// Internally the action is exact on the whole module; the box only limits
/// which results are handed out.
pub struct Verma<F: Field> {
    tau: TauAlgebra<F>,
    psi: PsiFunctional<F>,
    bounds: WeightBox,
    cache: ActionCache<F>,
}

impl<F: Field> Verma<F> {
    pub fn new(tau: TauAlgebra<F>, psi: PsiFunctional<F>, bounds: WeightBox) -> Result<Self, ModuleError> {
        if psi.dim() != tau.algebra().dim() {
            return Err(ModuleError::BadParams(format!(
                "psi has {} entries but A has dimension {}",
                psi.dim(),
                tau.algebra().dim()
            )));
        }
        if bounds.p_max < 0 || bounds.q_max < 0 {
            return Err(ModuleError::BadParams("box must be non-negative".into()));
        }
        Ok(Verma { tau, psi, bounds, cache: Mutex::new(HashMap::new()) })
    }

    /// `u · m` with no box check.
    pub fn apply_monomial(&self, u: &TauSymbol, m: &PbwMonomial) -> Arc<ModVec<PbwMonomial, F>> {
        let key = (*u, m.clone());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let out = Arc::new(self.rewrite(u, m));
        self.cache.lock().expect("cache lock").insert(key, out.clone());
        out
    }

    fn rewrite(&self, u: &TauSymbol, m: &PbwMonomial) -> ModVec<PbwMonomial, F> {
        let part = self.tau.triangular_part(u);
        let Some((y1, rest)) = m.0.split_first() else {
            return match part {
                Part::Plus => ModVec::zero(),
                Part::Zero => ModVec::term(PbwMonomial::top(), self.psi.value(&self.tau, u)),
                Part::Minus => ModVec::unit(PbwMonomial(vec![*u])),
            };
        };
        if part == Part::Minus && self.tau.pbw_key(u) <= self.tau.pbw_key(y1) {
            let mut f = Vec::with_capacity(m.0.len() + 1);
            f.push(*u);
            f.extend_from_slice(&m.0);
            return ModVec::unit(PbwMonomial(f));
        }
        // u y1 R = y1 (u R) + [u, y1] R
        let rest = PbwMonomial(rest.to_vec());
        let mut out = ModVec::zero();
        let inner = self.apply_monomial(u, &rest);
        for (mm, c) in inner.terms() {
            out.add_scaled(c, &self.apply_monomial(y1, mm));
        }
        for (s, c) in self.tau.bracket_symbols(u, y1).terms() {
            out.add_scaled(c, &self.apply_monomial(s, &rest));
        }
        out
    }

    /// `u · v` with no box check.
    pub fn apply_unbounded(&self, u: &TauSymbol, v: &ModVec<PbwMonomial, F>) -> ModVec<PbwMonomial, F> {
        let mut out = ModVec::zero();
        for (m, c) in v.terms() {
            out.add_scaled(c, &self.apply_monomial(u, m));
        }
        out
    }

    /// All PBW monomials of the given offset, sorted.
    pub fn monomials(&self, off: BiDegree) -> Vec<PbwMonomial> {
        if !is_weight_offset(off) {
            return Vec::new();
        }
        let dim_a = self.tau.algebra().dim();
        let dim_g = self.tau.lie().dim();
        let mut level0 = Vec::new();
        let mut deep = Vec::new();
        for a in 0..dim_a {
            for g in 0..dim_g {
                let s = TauSymbol::current(g, 0, a);
                if self.tau.triangular_part(&s) == Part::Minus {
                    level0.push(s);
                }
                for n in 1..=off.q {
                    deep.push(TauSymbol::current(g, -n, a));
                }
            }
            for n in 1..=off.q {
                deep.push(TauSymbol::vir(-n, a));
            }
        }
        let key = |s: &TauSymbol| self.tau.pbw_key(s);
        level0.sort_by_key(key);
        deep.sort_by_key(key);
        let degs: Vec<BiDegree> = deep.iter().map(|s| self.tau.degree(s)).collect();

        let mut out = Vec::new();
        let mut chosen = Vec::new();
        let mut stack = Vec::new();
        collect_multisets(&degs, 0, off.q, &mut chosen, &mut |idx: &[usize]| stack.push(idx.to_vec()));
        for idx in stack {
            let p_used: i64 = idx.iter().map(|&i| degs[i].p).sum();
            let p_left = off.p - p_used;
            if p_left < 0 {
                continue;
            }
            // each level-0 symbol carries p = 1 (only `Y` for sl2)
            let mut fill = Vec::new();
            fill_level0(&level0, &self.tau, 0, p_left, &mut Vec::new(), &mut fill);
            for head in fill {
                let mut f = head;
                f.extend(idx.iter().map(|&i| deep[i]));
                out.push(PbwMonomial(f));
            }
        }
        out.sort();
        out
    }
}

fn collect_multisets(
    degs: &[BiDegree],
    start: usize,
    q_left: i64,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if q_left == 0 {
        emit(chosen);
        return;
    }
    for i in start..degs.len() {
        if degs[i].q <= q_left {
            chosen.push(i);
            collect_multisets(degs, i, q_left - degs[i].q, chosen, emit);
            chosen.pop();
        }
    }
}

fn fill_level0<F: Field>(
    syms: &[TauSymbol],
    tau: &TauAlgebra<F>,
    start: usize,
    p_left: i64,
    chosen: &mut Vec<TauSymbol>,
    out: &mut Vec<Vec<TauSymbol>>,
) {
    if p_left == 0 {
        out.push(chosen.clone());
        return;
    }
    for i in start..syms.len() {
        let p = tau.degree(&syms[i]).p;
        if p <= p_left {
            chosen.push(syms[i]);
            fill_level0(syms, tau, i, p_left - p, chosen, out);
            chosen.pop();
        }
    }
}

impl<F: Field> HighestWeightModule<F> for Verma<F> {
    type Key = PbwMonomial;

    fn tau(&self) -> &TauAlgebra<F> {
        &self.tau
    }

    fn psi(&self) -> &PsiFunctional<F> {
        &self.psi
    }

    fn weight_box(&self) -> WeightBox {
        self.bounds
    }

    fn represents(&self, off: BiDegree) -> bool {
        self.bounds.contains(off)
    }

    fn offset_of(&self, key: &PbwMonomial) -> BiDegree {
        key.degree(&self.tau)
    }

    fn basis(&self, off: BiDegree) -> Result<Vec<PbwMonomial>, ModuleError> {
        if is_weight_offset(off) && !self.represents(off) {
            return Err(ModuleError::BoxTooSmall { offset: off, needed: off });
        }
        Ok(self.monomials(off))
    }

    fn highest_key(&self) -> PbwMonomial {
        PbwMonomial::top()
    }

    fn key_label(&self, key: &PbwMonomial) -> String {
        key.label(&self.tau)
    }

    fn act_symbol(
        &self,
        s: &TauSymbol,
        v: &ModVec<PbwMonomial, F>,
    ) -> Result<ModVec<PbwMonomial, F>, ModuleError> {
        self.tau
            .check_symbol(s)
            .map_err(|e| ModuleError::BadParams(e.to_string()))?;
        let d = self.tau.degree(s);
        let mut out = ModVec::zero();
        for (m, c) in v.terms() {
            let r = self.apply_monomial(s, m);
            let from = m.degree(&self.tau);
            if !r.is_zero() && !self.represents(from + d) {
                return Err(ModuleError::Truncation {
                    symbol: self.tau.symbol_label(s),
                    from,
                    to: from + d,
                });
            }
            out.add_scaled(c, &r);
        }
        Ok(out)
    }
}

/// Raising generators of `τ⁺(A)`: `X⊗t^0`, `Y⊗t`, `h⊗t`, and with
/// `with_vir` also `L_1`, `L_2`, each tensored with every basis element of `A`.
pub fn raising_generators<F: Field>(tau: &TauAlgebra<F>, with_vir: bool) -> Vec<TauSymbol> {
    let lie = tau.lie();
    let mut out = Vec::new();
    for a in 0..tau.algebra().dim() {
        for g in 0..lie.dim() {
            let power = if lie.root_coeff[g] > 0 { 0 } else { 1 };
            out.push(TauSymbol::current(g, power, a));
        }
        if with_vir {
            out.push(TauSymbol::vir(1, a));
            out.push(TauSymbol::vir(2, a));
        }
    }
    out
}

struct Layer<F: Field> {
    monos: Vec<PbwMonomial>,
    index: HashMap<PbwMonomial, usize>,
    j: SubspaceBasis<F>,
    free: Vec<PbwMonomial>,
}

impl<F: Field> Layer<F> {
    fn to_sparse(&self, v: &ModVec<PbwMonomial, F>) -> SparseVec<F> {
        SparseVec::from_pairs(v.terms().map(|(m, c)| (self.index[m], c.clone())))
    }

    fn to_vector(&self, v: &SparseVec<F>) -> ModVec<PbwMonomial, F> {
        let mut out = ModVec::zero();
        for (i, c) in v.entries() {
            out.add_term(self.monos[*i].clone(), c.clone());
        }
        out
    }

    fn reduce(&self, v: &ModVec<PbwMonomial, F>) -> ModVec<PbwMonomial, F> {
        self.to_vector(&self.j.reduce(&self.to_sparse(v)).0)
    }
}

/// The irreducible quotient `V(ψ) = M(ψ)/J`.
///
/// `J` is built offset by offset: a vector lies in `J` when every raising
/// generator maps it into `J`. The recursion needs offsets up to
/// `p ≤ p_max + (q_max - q)`, so that larger region is computed and is also
/// where the action is exact.
pub struct Irreducible<F: Field> {
    verma: Verma<F>,
    bounds: WeightBox,
    layers: BTreeMap<BiDegree, Layer<F>>,
}

impl<F: Field> Irreducible<F> {
    pub fn new(tau: TauAlgebra<F>, psi: PsiFunctional<F>, bounds: WeightBox) -> Result<Self, ModuleError> {
        let verma = Verma::new(tau, psi, bounds)?;
        let gens = raising_generators(&verma.tau, true);
        let mut layers: BTreeMap<BiDegree, Layer<F>> = BTreeMap::new();
        for q in 0..=bounds.q_max {
            for p in -q..=bounds.p_max + (bounds.q_max - q) {
                let off = BiDegree::new(p, q);
                let monos = verma.monomials(off);
                let index: HashMap<PbwMonomial, usize> =
                    monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                let n = monos.len();
                let j = if off == BiDegree::default() {
                    SubspaceBasis::empty(n)
                } else {
                    let mut rows: BTreeMap<(usize, usize), Vec<(usize, F)>> = BTreeMap::new();
                    for (col, m) in monos.iter().enumerate() {
                        for (gi, g) in gens.iter().enumerate() {
                            let target = off + verma.tau.degree(g);
                            if !is_weight_offset(target) {
                                continue;
                            }
                            let image = verma.apply_monomial(g, m);
                            if image.is_zero() {
                                continue;
                            }
                            let layer = &layers[&target];
                            let reduced = layer.j.reduce(&layer.to_sparse(&image)).0;
                            for (r, c) in reduced.entries() {
                                rows.entry((gi, *r)).or_default().push((col, c.clone()));
                            }
                        }
                    }
                    let rows: Vec<SparseVec<F>> =
                        rows.into_values().map(SparseVec::from_pairs).collect();
                    kernel(&rows, n).expect("columns index the layer basis")
                };
                let free = j.free_columns().into_iter().map(|i| monos[i].clone()).collect();
                layers.insert(off, Layer { monos, index, j, free });
            }
        }
        Ok(Irreducible { verma, bounds, layers })
    }

    pub fn verma(&self) -> &Verma<F> {
        &self.verma
    }

    /// Dimension of `J` at an offset of the computed region.
    pub fn submodule_dim(&self, off: BiDegree) -> Option<usize> {
        self.layers.get(&off).map(|l| l.j.rank())
    }

    /// Canonical representative of a Verma vector modulo `J`.
    pub fn reduce(&self, v: &ModVec<PbwMonomial, F>) -> Result<ModVec<PbwMonomial, F>, ModuleError> {
        let mut groups: BTreeMap<BiDegree, ModVec<PbwMonomial, F>> = BTreeMap::new();
        for (m, c) in v.terms() {
            groups.entry(m.degree(&self.verma.tau)).or_insert_with(ModVec::zero).add_term(m.clone(), c.clone());
        }
        let mut out = ModVec::zero();
        for (off, w) in groups {
            let layer = self.layers.get(&off).ok_or(ModuleError::BoxTooSmall { offset: off, needed: off })?;
            out.add_scaled(&F::one(), &layer.reduce(&w));
        }
        Ok(out)
    }
}

impl<F: Field> HighestWeightModule<F> for Irreducible<F> {
    type Key = PbwMonomial;

    fn tau(&self) -> &TauAlgebra<F> {
        &self.verma.tau
    }

    fn psi(&self) -> &PsiFunctional<F> {
        &self.verma.psi
    }

    fn weight_box(&self) -> WeightBox {
        self.bounds
    }

    fn represents(&self, off: BiDegree) -> bool {
        self.layers.contains_key(&off)
    }

    fn offset_of(&self, key: &PbwMonomial) -> BiDegree {
        key.degree(&self.verma.tau)
    }

    fn basis(&self, off: BiDegree) -> Result<Vec<PbwMonomial>, ModuleError> {
        if !is_weight_offset(off) {
            return Ok(Vec::new());
        }
        self.layers
            .get(&off)
            .map(|l| l.free.clone())
            .ok_or(ModuleError::BoxTooSmall { offset: off, needed: off })
    }

    fn highest_key(&self) -> PbwMonomial {
        PbwMonomial::top()
    }

    fn key_label(&self, key: &PbwMonomial) -> String {
        key.label(&self.verma.tau)
    }

    fn act_symbol(
        &self,
        s: &TauSymbol,
        v: &ModVec<PbwMonomial, F>,
    ) -> Result<ModVec<PbwMonomial, F>, ModuleError> {
        let tau = &self.verma.tau;
        tau.check_symbol(s).map_err(|e| ModuleError::BadParams(e.to_string()))?;
        let d = tau.degree(s);
        let mut raw = ModVec::zero();
        for (m, c) in v.terms() {
            let r = self.verma.apply_monomial(s, m);
            let from = m.degree(tau);
            if !r.is_zero() && !self.represents(from + d) {
                return Err(ModuleError::Truncation { symbol: tau.symbol_label(s), from, to: from + d });
            }
            raw.add_scaled(c, &r);
        }
        self.reduce(&raw)
    }
}

/// `V(ψ_1) ⊗ V(ψ_2)` as a module over `τ(A)` with `A` the functions on two
/// points: `u⊗a` acts as `a(z_1)·(u on the first factor) + a(z_2)·(u on the second)`.
pub struct EvaluationTensor<F: Field> {
    tau: TauAlgebra<F>,
    factors: [Irreducible<F>; 2],
    points: [Vec<F>; 2],
    psi: PsiFunctional<F>,
    bounds: WeightBox,
}

impl<F: Field> EvaluationTensor<F> {
    /// `psis` are functionals over `A = ℚ`; `tau_factor` must be over the
    /// scalar algebra and `tau` over `points(z_1, z_2)` with the same `g` and
    /// cocycle convention.
    pub fn new(
        tau_factor: TauAlgebra<F>,
        tau: TauAlgebra<F>,
        zs: [F; 2],
        psis: [PsiFunctional<F>; 2],
        bounds: WeightBox,
    ) -> Result<Self, ModuleError> {
        if zs[0] == zs[1] || zs[0].is_zero() || zs[1].is_zero() {
            return Err(ModuleError::BadParams("points must be distinct and nonzero".into()));
        }
        if tau_factor.algebra().dim() != 1 || tau.algebra().dim() != 2 {
            return Err(ModuleError::BadParams("factor algebra must be ℚ and A two-dimensional".into()));
        }
        if tau_factor.convention() != tau.convention() || tau_factor.lie() != tau.lie() {
            return Err(ModuleError::BadParams("factor and tensor algebras disagree".into()));
        }
        // point maps on the power basis 1, t
        let points = [vec![F::one(), zs[0].clone()], vec![F::one(), zs[1].clone()]];
        let check = tau.algebra().mul(&SparseVec::unit(1), &SparseVec::unit(1));
        for pt in &points {
            let lhs = check
                .entries()
                .iter()
                .fold(F::zero(), |acc, (i, c)| acc + c.clone() * pt[*i].clone());
            if lhs != pt[1].clone() * pt[1].clone() {
                return Err(ModuleError::BadParams("A is not the algebra of functions on z_1, z_2".into()));
            }
        }
        let combine = |f: &dyn Fn(&PsiFunctional<F>) -> F, k: usize| {
            f(&psis[0]) * points[0][k].clone() + f(&psis[1]) * points[1][k].clone()
        };
        let mut h = Vec::new();
        let mut kk = Vec::new();
        let mut l0 = Vec::new();
        for k in 0..2 {
            h.push(combine(&|p: &PsiFunctional<F>| p.h[0].clone(), k));
            kk.push(combine(&|p: &PsiFunctional<F>| p.k[0].clone(), k));
            l0.push(combine(&|p: &PsiFunctional<F>| p.l0[0].clone(), k));
        }
        let psi = PsiFunctional::new(h, kk, l0)?;
        let factor_box = WeightBox::new(bounds.p_max + bounds.q_max, bounds.q_max);
        let [p1, p2] = psis;
        let f1 = Irreducible::new(tau_factor.clone(), p1, factor_box)?;
        let f2 = Irreducible::new(tau_factor, p2, factor_box)?;
        Ok(EvaluationTensor { tau, factors: [f1, f2], points, psi, bounds })
    }

    pub fn factor(&self, i: usize) -> &Irreducible<F> {
        &self.factors[i]
    }

    /// Value of the `i`-th point evaluation on an element of `A`.
    pub fn evaluate(&self, i: usize, a: &SparseVec<F>) -> F {
        a.entries()
            .iter()
            .fold(F::zero(), |acc, (k, c)| acc + c.clone() * self.points[i][*k].clone())
    }

    /// `w_1 ⊗ w_2` for factor vectors.
    pub fn tensor(
        &self,
        w1: &ModVec<PbwMonomial, F>,
        w2: &ModVec<PbwMonomial, F>,
    ) -> ModVec<(PbwMonomial, PbwMonomial), F> {
        let mut out = ModVec::zero();
        for (m1, c1) in w1.terms() {
            for (m2, c2) in w2.terms() {
                out.add_term((m1.clone(), m2.clone()), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<F: Field> HighestWeightModule<F> for EvaluationTensor<F> {
    type Key = (PbwMonomial, PbwMonomial);

    fn tau(&self) -> &TauAlgebra<F> {
        &self.tau
    }

    fn psi(&self) -> &PsiFunctional<F> {
        &self.psi
    }

    fn weight_box(&self) -> WeightBox {
        self.bounds
    }

    fn represents(&self, off: BiDegree) -> bool {
        self.bounds.contains(off)
    }

    fn offset_of(&self, key: &Self::Key) -> BiDegree {
        let t = self.factors[0].tau();
        key.0.degree(t) + key.1.degree(t)
    }

    fn basis(&self, off: BiDegree) -> Result<Vec<Self::Key>, ModuleError> {
        if !is_weight_offset(off) {
            return Ok(Vec::new());
        }
        if !self.represents(off) {
            return Err(ModuleError::BoxTooSmall { offset: off, needed: off });
        }
        let mut out = Vec::new();
        for q1 in 0..=off.q {
            let q2 = off.q - q1;
            for p1 in -q1..=off.p + q2 {
                let o1 = BiDegree::new(p1, q1);
                let o2 = off - o1;
                let b1 = self.factors[0].basis(o1)?;
                if b1.is_empty() {
                    continue;
                }
                let b2 = self.factors[1].basis(o2)?;
                for m1 in &b1 {
                    for m2 in &b2 {
                        out.push((m1.clone(), m2.clone()));
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn highest_key(&self) -> Self::Key {
        (PbwMonomial::top(), PbwMonomial::top())
    }

    fn key_label(&self, key: &Self::Key) -> String {
        let t = self.factors[0].tau();
        format!("{} ⊗ {}", key.0.label_with(t, "v1"), key.1.label_with(t, "v2"))
    }

    fn act_symbol(
        &self,
        s: &TauSymbol,
        v: &ModVec<Self::Key, F>,
    ) -> Result<ModVec<Self::Key, F>, ModuleError> {
        self.tau.check_symbol(s).map_err(|e| ModuleError::BadParams(e.to_string()))?;
        let local = s.with_a(0);
        let weights = [self.points[0][s.a].clone(), self.points[1][s.a].clone()];
        let d = self.tau.degree(s);
        let mut out = ModVec::zero();
        for ((m1, m2), c) in v.terms() {
            let mut piece = ModVec::zero();
            if !weights[0].is_zero() {
                let r = self.factors[0].act_symbol(&local, &ModVec::unit(m1.clone()))?;
                for (n1, x) in r.terms() {
                    piece.add_term((n1.clone(), m2.clone()), x.clone() * weights[0].clone());
                }
            }
            if !weights[1].is_zero() {
                let r = self.factors[1].act_symbol(&local, &ModVec::unit(m2.clone()))?;
                for (n2, x) in r.terms() {
                    piece.add_term((m1.clone(), n2.clone()), x.clone() * weights[1].clone());
                }
            }
            let from = self.offset_of(&(m1.clone(), m2.clone()));
            if !piece.is_zero() && !self.represents(from + d) {
                return Err(ModuleError::Truncation { symbol: self.tau.symbol_label(s), from, to: from + d });
            }
            out.add_scaled(c, &piece);
        }
        Ok(out)
    }
}

/// Vectors at one offset killed by every given raising symbol.
#[derive(Debug, Clone)]
pub struct SingularSpace<K, F: Field> {
    pub offset: BiDegree,
    pub basis: Vec<K>,
    pub space: SubspaceBasis<F>,
}

impl<K: Clone + Ord, F: Field> SingularSpace<K, F> {
    pub fn dim(&self) -> usize {
        self.space.rank()
    }

    pub fn vectors(&self) -> Vec<ModVec<K, F>> {
        self.space
            .rows()
            .iter()
            .map(|r| {
                let mut v = ModVec::zero();
                for (i, c) in r.entries() {
                    v.add_term(self.basis[*i].clone(), c.clone());
                }
                v
            })
            .collect()
    }
}

/// Singular vectors for all of `τ⁺(A)` at `off`.
pub fn singular_vectors<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    off: BiDegree,
) -> Result<SingularSpace<M::Key, F>, ModuleError> {
    let gens = raising_generators(m.tau(), true);
    singular_vectors_for(m, off, &gens)
}

/// Vectors at `off` annihilated by each symbol in `gens`.
pub fn singular_vectors_for<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    off: BiDegree,
    gens: &[TauSymbol],
) -> Result<SingularSpace<M::Key, F>, ModuleError> {
    let basis = m.basis(off)?;
    let tau = m.tau();
    let mut targets: Vec<BTreeMap<M::Key, usize>> = vec![BTreeMap::new(); gens.len()];
    let mut rows: BTreeMap<(usize, usize), Vec<(usize, F)>> = BTreeMap::new();
    for (gi, g) in gens.iter().enumerate() {
        let to = off + tau.degree(g);
        if !is_weight_offset(to) {
            continue;
        }
        if !m.represents(to) {
            return Err(ModuleError::BoxTooSmall { offset: off, needed: to });
        }
        for (col, k) in basis.iter().enumerate() {
            let image = m.act_symbol(g, &ModVec::unit(k.clone()))?;
            for (key, c) in image.terms() {
                let next = targets[gi].len();
                let r = *targets[gi].entry(key.clone()).or_insert(next);
                rows.entry((gi, r)).or_default().push((col, c.clone()));
            }
        }
    }
    let rows: Vec<SparseVec<F>> = rows.into_values().map(SparseVec::from_pairs).collect();
    let space = kernel(&rows, basis.len()).expect("columns index the basis");
    Ok(SingularSpace { offset: off, basis, space })
}

/// Outcome of the cofinite-annihilation check.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilationReport {
    /// `ψ(h̄⊗I) = 0`.
    pub hypothesis_holds: bool,
    pub hypothesis_failures: Vec<String>,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl AnnihilationReport {
    pub fn passed(&self) -> bool {
        self.hypothesis_holds && self.violations.is_empty()
    }
}

/// Checks that every `u⊗i` (`u` in a symbol window, `i` in a basis of `I`)
/// acts as zero on `V(ψ)` throughout the box.
pub fn check_cofinite_annihilation<F: Field>(
    tau: &TauAlgebra<F>,
    psi: &PsiFunctional<F>,
    ideal: &IdealBasis<F>,
    bounds: WeightBox,
) -> Result<AnnihilationReport, ModuleError> {
    if ideal.ambient().as_ref() != tau.algebra().as_ref() {
        return Err(ModuleError::Algebra(AlgebraError::AmbientMismatch));
    }
    let a = tau.algebra();
    let mut failures = Vec::new();
    for r in ideal.space().rows() {
        let label = a.format_element(r);
        for (name, val) in [("h", psi.h_on(r)), ("K", psi.k_on(r)), ("L0", psi.l0_on(r))] {
            if !val.is_zero() {
                failures.push(format!("psi({name}⊗{label}) = {val}"));
            }
        }
    }
    if !failures.is_empty() {
        return Ok(AnnihilationReport {
            hypothesis_holds: false,
            hypothesis_failures: failures,
            checked: 0,
            violations: Vec::new(),
        });
    }
    let module = Irreducible::new(tau.clone(), psi.clone(), bounds)?;
    let w = bounds.q_max;
    let mut kinds = Vec::new();
    for g in 0..tau.lie().dim() {
        for m in -w..=w {
            kinds.push(SymbolKind::Current { g, power: m });
        }
    }
    for n in -w..=w {
        kinds.push(SymbolKind::Vir(n));
    }
    kinds.push(SymbolKind::Central);
    let mut checked = 0;
    let mut violations = Vec::new();
    for off in bounds.offsets() {
        for key in module.basis(off)? {
            let v = ModVec::unit(key.clone());
            for kind in &kinds {
                let d = tau.degree(&TauSymbol { kind: *kind, a: 0 });
                if is_weight_offset(off + d) && !module.represents(off + d) {
                    continue;
                }
                for r in ideal.space().rows() {
                    let u = TauElement::from_kind(*kind, r);
                    let image = module.act(&u, &v)?;
                    checked += 1;
                    if !image.is_zero() {
                        violations.push(format!(
                            "{} on {} = {}",
                            tau.format_element(&u),
                            module.key_label(&key),
                            module.format_vector(&image)
                        ));
                    }
                }
            }
        }
    }
    Ok(AnnihilationReport { hypothesis_holds: true, hypothesis_failures: Vec::new(), checked, violations })
}

/// One point of `A/√0` and the weight `ψ` induces there.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentWeight<F> {
    pub lambda: F,
    pub level: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport<F> {
    pub dominant: bool,
    pub radical_dim: usize,
    pub components: Vec<ComponentWeight<F>>,
    /// Reason for failure, naming the offending component.
    pub witness: Option<String>,
}

/// Dominant integrality with `I = 0`: `ψ(h̃⊗√0) = 0` and every point of
/// `A/√0` carries `λ_i ∈ ℤ_{≥0}` and `c_i - λ_i ∈ ℤ_{≥0}`.
pub fn dominant_integral<F: Field>(
    psi: &PsiFunctional<F>,
    a: &Arc<CommAlgebra<F>>,
) -> Result<DominanceReport<F>, ModuleError> {
    if psi.dim() != a.dim() {
        return Err(ModuleError::BadParams("psi does not match A".into()));
    }
    let nil = nilradical(a);
    let radical_dim = nil.rank();
    for r in nil.rows() {
        let label = a.format_element(r);
        for (name, val) in [("h", psi.h_on(r)), ("K", psi.k_on(r))] {
            if !val.is_zero() {
                return Ok(DominanceReport {
                    dominant: false,
                    radical_dim,
                    components: Vec::new(),
                    witness: Some(format!("psi({name}⊗{label}) = {val} on the radical")),
                });
            }
        }
    }
    let ideal = IdealBasis::new(a.clone(), nil)?;
    let (reduced, proj) = quotient(a, &ideal)?;
    let split = crt_split(&reduced)?;
    let mut components = Vec::new();
    let mut witness = None;
    for (i, e) in split.idempotents.iter().enumerate() {
        let lifted = proj.lift(e);
        let lambda = psi.h_on(&lifted);
        let level = psi.k_on(&lifted);
        let gap = level.clone() - lambda.clone();
        if witness.is_none() {
            let int_nonneg = |x: &F| x.as_i64().is_some_and(|n| n >= 0);
            if !int_nonneg(&lambda) {
                witness = Some(format!("component {i}: lambda = {lambda} is not a non-negative integer"));
            } else if !int_nonneg(&gap) {
                witness = Some(format!("component {i}: c - lambda = {gap} is not a non-negative integer"));
            }
        }
        components.push(ComponentWeight { lambda, level });
    }
    Ok(DominanceReport { dominant: witness.is_none(), radical_dim, components, witness })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Nilpotency<K, F: Field> {
    /// Least `N` with `x^N v = 0`.
    Nilpotent(usize),
    /// `x^{n_max} v`, still nonzero.
    Survives(ModVec<K, F>),
}

/// Least `N ≤ n_max` with `(x⊗a)^N v = 0` for a real root vector `x`.
pub fn nilpotency_probe<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    kind: SymbolKind,
    a: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
    n_max: usize,
) -> Result<Nilpotency<M::Key, F>, ModuleError> {
    let lie = m.tau().lie();
    match kind {
        SymbolKind::Current { g, .. } if lie.root_coeff[g] != 0 => {}
        _ => return Err(ModuleError::BadParams("nilpotency needs a real root vector".into())),
    }
    let u = TauElement::from_kind(kind, a);
    let mut w = v.clone();
    for n in 0..=n_max {
        if w.is_zero() {
            return Ok(Nilpotency::Nilpotent(n));
        }
        if n == n_max {
            break;
        }
        w = m.act(&u, &w)?;
    }
    Ok(Nilpotency::Survives(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::SimpleLieData;
    use crate::tau::CentralConvention;
    use num_rational::BigRational;

    type Q = BigRational;
    const X: usize = 0;
    const Y: usize = 1;
    const H: usize = 2;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn tau_scalar() -> TauAlgebra<Q> {
        TauAlgebra::sl2(Arc::new(CommAlgebra::scalar()))
    }

    fn verma(lambda: i64, c: i64, d0: i64, b: (i64, i64)) -> Verma<Q> {
        Verma::new(tau_scalar(), PsiFunctional::scalar(q(lambda), q(c), q(d0)), WeightBox::new(b.0, b.1)).unwrap()
    }

    #[test]
    fn verma_small_dimensions() {
        let m = verma(1, 1, 0, (4, 4));
        assert_eq!(m.dim(BiDegree::new(0, 0)).unwrap(), 1);
        assert_eq!(m.dim(BiDegree::new(0, 1)).unwrap(), 3);
        assert_eq!(m.dim(BiDegree::new(1, 1)).unwrap(), 4);
        assert_eq!(m.dim(BiDegree::new(-1, 1)).unwrap(), 1);
        let labels: Vec<String> = m.basis(BiDegree::new(0, 1)).unwrap().iter().map(|k| m.key_label(k)).collect();
        assert!(labels.contains(&"L_-1(a0)·v".to_string()), "{labels:?}");
        assert!(labels.contains(&"Y(t^0;a0)·X(t^-1;a0)·v".to_string()), "{labels:?}");
    }

    #[test]
    fn x_on_y_v_is_lambda_v() {
        let m = verma(1, 1, 0, (2, 2));
        let v = m.highest_vector();
        let yv = m.act_symbol(&TauSymbol::current(Y, 0, 0), &v).unwrap();
        let xyv = m.act_symbol(&TauSymbol::current(X, 0, 0), &yv).unwrap();
        assert_eq!(xyv, v);
    }

    #[test]
    fn l1_on_l_minus1_v() {
        let m = verma(0, 0, 5, (2, 2));
        let v = m.highest_vector();
        let w = m.act_symbol(&TauSymbol::vir(-1, 0), &v).unwrap();
        let w = m.act_symbol(&TauSymbol::vir(1, 0), &w).unwrap();
        assert_eq!(w, v.scale(&q(-10)));
    }

    #[test]
    fn lowering_outside_box_is_an_error() {
        let m = verma(1, 1, 0, (0, 0));
        let err = m.act_symbol(&TauSymbol::current(Y, -1, 0), &m.highest_vector()).unwrap_err();
        assert!(matches!(err, ModuleError::Truncation { .. }));
        // raising above the top is zero, not an error
        assert!(m.act_symbol(&TauSymbol::current(X, 0, 0), &m.highest_vector()).unwrap().is_zero());
    }

    #[test]
    fn module_axiom_on_verma() {
        let m = verma(2, 3, 1, (3, 3));
        let tau = m.tau().clone();
        let syms = tau.symbol_window(1);
        let vecs: Vec<PbwMonomial> = [BiDegree::new(0, 1), BiDegree::new(1, 0)]
            .iter()
            .flat_map(|o| m.basis(*o).unwrap())
            .collect();
        for s1 in &syms {
            for s2 in &syms {
                for k in &vecs {
                    let v = ModVec::unit(k.clone());
                    let l = m.act_symbol(s1, &m.act_symbol(s2, &v).unwrap()).unwrap();
                    let r = m.act_symbol(s2, &m.act_symbol(s1, &v).unwrap()).unwrap();
                    let b = m.act(&tau.bracket_symbols(s1, s2), &v).unwrap();
                    assert_eq!(l.sub(&r), b, "{s1:?} {s2:?} {k:?}");
                }
            }
        }
    }

    #[test]
    fn verma_singular_vectors() {
        let m = verma(0, 0, 0, (2, 2));
        let s = singular_vectors(&m, BiDegree::new(1, 0)).unwrap();
        assert_eq!(s.dim(), 1);
        let m = verma(1, 0, 0, (2, 2));
        assert_eq!(singular_vectors(&m, BiDegree::new(1, 0)).unwrap().dim(), 0);
        assert_eq!(singular_vectors(&m, BiDegree::new(0, 0)).unwrap().dim(), 1);
    }

    #[test]
    fn irreducible_dimensions() {
        let t = tau_scalar();
        let v = Irreducible::new(t.clone(), PsiFunctional::scalar(q(0), q(0), q(0)), WeightBox::new(2, 1)).unwrap();
        assert_eq!(v.dim(BiDegree::new(1, 0)).unwrap(), 0);
        assert_eq!(v.dim(BiDegree::new(0, 0)).unwrap(), 1);
        let v = Irreducible::new(t, PsiFunctional::scalar(q(1), q(1), q(0)), WeightBox::new(2, 1)).unwrap();
        assert_eq!(v.dim(BiDegree::new(1, 0)).unwrap(), 1);
        assert_eq!(v.dim(BiDegree::new(2, 0)).unwrap(), 0);
    }

    #[test]
    fn irreducible_has_no_singular_vectors_below_top() {
        let t = tau_scalar();
        let v = Irreducible::new(t, PsiFunctional::scalar(q(1), q(2), q(0)), WeightBox::new(2, 2)).unwrap();
        for off in v.weight_box().offsets() {
            let s = singular_vectors(&v, off).unwrap();
            let want = usize::from(off == BiDegree::default());
            assert_eq!(s.dim(), want, "{off}");
        }
    }

    #[test]
    fn nilpotency() {
        let t = tau_scalar();
        let v = Irreducible::new(t, PsiFunctional::scalar(q(1), q(1), q(0)), WeightBox::new(3, 1)).unwrap();
        let one = SparseVec::unit(0);
        let top = v.highest_vector();
        let y = SymbolKind::Current { g: Y, power: 0 };
        assert_eq!(nilpotency_probe(&v, y, &one, &top, 5).unwrap(), Nilpotency::Nilpotent(2));
        let xt = SymbolKind::Current { g: X, power: -1 };
        assert_eq!(nilpotency_probe(&v, xt, &one, &top, 5).unwrap(), Nilpotency::Nilpotent(1));
        let h = SymbolKind::Current { g: H, power: 0 };
        assert!(nilpotency_probe(&v, h, &one, &top, 5).is_err());
        let m = verma(1, 1, 0, (6, 0));
        assert!(matches!(nilpotency_probe(&m, y, &one, &m.highest_vector(), 6).unwrap(), Nilpotency::Survives(_)));
    }

    #[test]
    fn dominance() {
        let a = Arc::new(CommAlgebra::<Q>::scalar());
        let d = |l, c| dominant_integral(&PsiFunctional::scalar(q(l), q(c), q(0)), &a).unwrap();
        assert!(d(1, 1).dominant);
        assert!(!d(3, 1).dominant);
        assert!(d(0, 0).dominant);
        assert!(d(3, 1).witness.unwrap().contains("c - lambda"));
        let jet = Arc::new(CommAlgebra::<Q>::jet(2).unwrap());
        let psi = PsiFunctional::new(vec![q(1), q(1)], vec![q(1), q(0)], vec![q(0), q(0)]).unwrap();
        assert!(!dominant_integral(&psi, &jet).unwrap().dominant);
        let psi = PsiFunctional::new(vec![q(1), q(0)], vec![q(2), q(0)], vec![q(0), q(7)]).unwrap();
        let r = dominant_integral(&psi, &jet).unwrap();
        assert!(r.dominant);
        assert_eq!(r.radical_dim, 1);
    }

    #[test]
    fn annihilation_by_cofinite_ideal() {
        let a = Arc::new(CommAlgebra::<Q>::jet(2).unwrap());
        let tau = TauAlgebra::sl2(a.clone());
        let ideal = IdealBasis::generated_by(a.clone(), &[SparseVec::unit(1)]).unwrap();
        let psi = PsiFunctional::new(vec![q(1), q(0)], vec![q(1), q(0)], vec![q(0), q(0)]).unwrap();
        let r = check_cofinite_annihilation(&tau, &psi, &ideal, WeightBox::new(1, 1)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.checked > 0);
        let zero = IdealBasis::zero(a.clone());
        assert!(check_cofinite_annihilation(&tau, &psi, &zero, WeightBox::new(1, 1)).unwrap().passed());
        let bad = PsiFunctional::new(vec![q(1), q(1)], vec![q(1), q(0)], vec![q(0), q(0)]).unwrap();
        let r = check_cofinite_annihilation(&tau, &bad, &ideal, WeightBox::new(1, 1)).unwrap();
        assert!(!r.hypothesis_holds);
    }

    #[test]
    fn evaluation_tensor_localizes() {
        let pts = Arc::new(CommAlgebra::points(&[q(1), q(2)]).unwrap());
        let tau = TauAlgebra::sl2(pts.clone());
        let m = EvaluationTensor::new(
            tau_scalar(),
            tau.clone(),
            [q(1), q(2)],
            [PsiFunctional::scalar(q(2), q(1), q(0)), PsiFunctional::scalar(q(3), q(2), q(0))],
            WeightBox::new(2, 2),
        )
        .unwrap();
        assert_eq!(m.dim(BiDegree::default()).unwrap(), 1);
        let p1 = SparseVec::from_pairs([(0, q(2)), (1, q(-1))]);
        let p2 = SparseVec::from_pairs([(0, q(-1)), (1, q(1))]);
        let y = SymbolKind::Current { g: Y, power: 0 };
        let v = m.highest_vector();
        let w = m.act(&TauElement::from_kind(y, &p1), &v).unwrap();
        let f = m.factor(0);
        let yv1 = f.act_symbol(&TauSymbol::current(Y, 0, 0), &f.highest_vector()).unwrap();
        assert_eq!(w, m.tensor(&yv1, &m.factor(1).highest_vector()));
        let p1p2 = pts.mul(&p1, &p2);
        let z = m.act(&TauElement::from_kind(y, &p1p2), &v).unwrap();
        assert!(z.is_zero());
        let k = m.act(&TauElement::from_kind(SymbolKind::Central, &p2), &v).unwrap();
        assert_eq!(k, v.scale(&q(2)));
        assert_eq!(m.psi().level(&pts), q(3));
    }

    #[test]
    fn second_exponent_convention_changes_the_quotient() {
        let lie = SimpleLieData::sl2();
        let a = Arc::new(CommAlgebra::scalar());
        let t = TauAlgebra::new(lie, a, CentralConvention::SecondExponent);
        let v = Irreducible::new(t, PsiFunctional::scalar(q(1), q(1), q(0)), WeightBox::new(1, 1)).unwrap();
        // Y⊗t · X⊗t^{-1} v = (-λ - c) v ≠ 0, so X⊗t^{-1} v survives
        assert_eq!(v.dim(BiDegree::new(-1, 1)).unwrap(), 1);
    }
}
