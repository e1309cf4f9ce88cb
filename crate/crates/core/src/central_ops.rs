//! The operators `Ω(a,b)` and `T_j(a,b)` acting on highest-weight modules,
//! plus the identity checks built on them.
//!
//! Infinite sums over `n` are evaluated on a given vector only: every term
//! beyond the vector's `δ`-depth contains a raising factor that kills it.

use serde::{Deserialize, Serialize};

use crate::linear::SparseVec;
use crate::lie::AffineWeight;
use crate::scalar::Field;
use crate::tau::{BiDegree, SymbolKind, TauAlgebra, TauElement, TauSymbol};
use crate::weight_modules::{
    is_weight_offset, HighestWeightModule, ModVec, ModuleError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realization {
    /// Explicit bilinear sums, split at `n = 0` into normal order.
    NormalOrdered,
    /// `(-1/j)[L_j, Ω(a,b)]`.
    CommutatorDefined,
}

/// `T_j(a,b)`; `j = 0` is `Ω(a,b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec<F: Field> {
    pub j: i64,
    pub a: SparseVec<F>,
    pub b: SparseVec<F>,
    pub realization: Realization,
}

impl<F: Field> OperatorSpec<F> {
    pub fn new(j: i64, a: SparseVec<F>, b: SparseVec<F>) -> Self {
        OperatorSpec { j, a, b, realization: Realization::NormalOrdered }
    }

    pub fn omega(a: SparseVec<F>, b: SparseVec<F>) -> Self {
        Self::new(0, a, b)
    }

    pub fn with_realization(mut self, r: Realization) -> Self {
        self.realization = r;
        self
    }

    /// Weight shift of the operator.
    pub fn shift(&self) -> BiDegree {
        BiDegree::new(0, -self.j)
    }

    /// Extra room an evaluation needs beyond its input offset.
    pub fn margin(&self) -> BiDegree {
        BiDegree::new(1, (-self.j).max(0))
    }

    /// `T_-2(1, t)` with `a`, `b` written in the basis of `alg`.
    pub fn describe(&self, alg: &crate::comm_algebra::CommAlgebra<F>) -> String {
        let name = if self.j == 0 { "Omega".to_string() } else { format!("T_{}", self.j) };
        format!("{name}({}, {})", alg.format_element(&self.a), alg.format_element(&self.b))
    }
}

type VecPair<K, F> = (ModVec<K, F>, ModVec<K, F>);

fn act_kind<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    kind: SymbolKind,
    a: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    if v.is_zero() || a.is_zero() {
        return Ok(ModVec::zero());
    }
    m.act(&TauElement::from_kind(kind, a), v)
}

fn current(g: usize, power: i64) -> SymbolKind {
    SymbolKind::Current { g, power }
}

fn depth<F: Field, M: HighestWeightModule<F>>(m: &M, v: &ModVec<M::Key, F>) -> i64 {
    v.keys().map(|k| m.offset_of(k).q).max().unwrap_or(0)
}

/// `x(a) · y(b) · v` summed over root pairs and Cartan dual pairs, with the
/// powers `(-n, n + j)`; the `b` factor is applied first.
fn pair_sum<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    n: i64,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    let lie = m.tau().lie();
    let mut out = ModVec::zero();
    for r in &lie.roots {
        let inner = act_kind(m, current(r.x_alpha, n + j), b, v)?;
        out.add_scaled(&F::one(), &act_kind(m, current(r.x_minus_alpha, -n), a, &inner)?);
    }
    for (i, &hi) in lie.cartan.iter().enumerate() {
        for (g, c) in lie.cartan_dual[i].entries() {
            let inner = act_kind(m, current(*g, n + j), b, v)?;
            out.add_scaled(c, &act_kind(m, current(hi, -n), a, &inner)?);
        }
    }
    Ok(out)
}

/// Same terms as [`pair_sum`] in the opposite order: the `a` factor first.
fn pair_sum_reordered<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    n: i64,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    let lie = m.tau().lie();
    let mut out = ModVec::zero();
    for r in &lie.roots {
        let inner = act_kind(m, current(r.x_minus_alpha, -n), a, v)?;
        out.add_scaled(&F::one(), &act_kind(m, current(r.x_alpha, n + j), b, &inner)?);
    }
    for (i, &hi) in lie.cartan.iter().enumerate() {
        for (g, c) in lie.cartan_dual[i].entries() {
            let inner = act_kind(m, current(hi, -n), a, v)?;
            out.add_scaled(c, &act_kind(m, current(*g, n + j), b, &inner)?);
        }
    }
    Ok(out)
}

/// `Ω(a,b) v`.
pub fn omega_apply<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    let tau = m.tau();
    let lie = tau.lie();
    let alg = tau.algebra();
    let ab = alg.mul(a, b);
    let two = F::from_int(2);
    let mut out = ModVec::zero();

    // 2γ⁻¹(ρ̄)(ab) + 2h^∨ L_0(ab)
    for (g, c) in lie.rho_bar_coroot().entries() {
        out.add_scaled(&(two.clone() * c.clone()), &act_kind(m, current(*g, 0), &ab, v)?);
    }
    out.add_scaled(&F::from_int(2 * lie.dual_coxeter), &act_kind(m, SymbolKind::Vir(0), &ab, v)?);

    // Σ h_i(a) h^i(b)
    for (i, &hi) in lie.cartan.iter().enumerate() {
        for (g, c) in lie.cartan_dual[i].entries() {
            let inner = act_kind(m, current(*g, 0), b, v)?;
            out.add_scaled(c, &act_kind(m, current(hi, 0), a, &inner)?);
        }
    }

    // K(a)L_0(b) + K(b)L_0(a)
    for (x, y) in [(a, b), (b, a)] {
        let inner = act_kind(m, SymbolKind::Vir(0), y, v)?;
        out.add_scaled(&F::one(), &act_kind(m, SymbolKind::Central, x, &inner)?);
    }

    let top = depth(m, v);
    for (x, y) in [(a, b), (b, a)] {
        // Ω¹ and Ω²
        for n in 1..=top {
            out.add_scaled(&F::one(), &pair_sum(m, n, 0, x, y, v)?);
        }
        // Ω³
        for r in lie.roots.iter().filter(|r| r.positive) {
            let inner = act_kind(m, current(r.x_alpha, 0), y, v)?;
            out.add_scaled(&F::one(), &act_kind(m, current(r.x_minus_alpha, 0), x, &inner)?);
        }
    }
    Ok(out)
}

/// `T_j(a,b) v` from the explicit sums: `n ≥ 0` terms as written,
/// `n < 0` terms reordered with the `a` factor applied first.
pub fn t_apply<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    if j == 0 {
        return omega_apply(m, a, b, v);
    }
    let tau = m.tau();
    let lie = tau.lie();
    let ab = tau.algebra().mul(a, b);
    let top = depth(m, v);
    let mut out = ModVec::zero();
    for n in 0..=(top - j) {
        out.add_scaled(&F::one(), &pair_sum(m, n, j, a, b, v)?);
    }
    for n in -top..=-1 {
        out.add_scaled(&F::one(), &pair_sum_reordered(m, n, j, a, b, v)?);
    }
    for (x, y) in [(a, b), (b, a)] {
        let inner = act_kind(m, SymbolKind::Vir(j), y, v)?;
        out.add_scaled(&F::one(), &act_kind(m, SymbolKind::Central, x, &inner)?);
    }
    out.add_scaled(&F::from_int(2 * lie.dual_coxeter), &act_kind(m, SymbolKind::Vir(j), &ab, v)?);
    Ok(out)
}

/// `(-1/j)(L_j Ω(a,b) v - Ω(a,b) L_j v)` with `L_j` taken at the unit of `A`.
pub fn t_apply_commutator<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    if j == 0 {
        return Err(ModuleError::BadParams("the commutator form needs j != 0".into()));
    }
    let unit = m.tau().algebra().unit().clone();
    let lw = act_kind(m, SymbolKind::Vir(j), &unit, &omega_apply(m, a, b, v)?)?;
    let wl = omega_apply(m, a, b, &act_kind(m, SymbolKind::Vir(j), &unit, v)?)?;
    Ok(lw.sub(&wl).scale(&(-F::one() / F::from_int(j))))
}

pub fn apply_operator<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    op: &OperatorSpec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<ModVec<M::Key, F>, ModuleError> {
    match op.realization {
        Realization::NormalOrdered => t_apply(m, op.j, &op.a, &op.b, v),
        Realization::CommutatorDefined => t_apply_commutator(m, op.j, &op.a, &op.b, v),
    }
}

/// Both evaluation orders of the `α`-summed (and Cartan) term with fixed `n`.
pub fn reorder_pair<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    n: i64,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
    v: &ModVec<M::Key, F>,
) -> Result<VecPair<M::Key, F>, ModuleError> {
    Ok((pair_sum(m, n, j, a, b, v)?, pair_sum_reordered(m, n, j, a, b, v)?))
}

/// `λ + λ²/2 + (2h^∨ + 2c) d_0`, the action of `Ω(1,1)` on a highest-weight
/// line of `sl2`, from the diagonal terms alone.
pub fn casimir_diagonal<F: Field>(lambda: &F, level: &F, d0: &F) -> F {
    let two = F::from_int(2);
    lambda.clone()
        + lambda.clone() * lambda.clone() / two.clone()
        + (F::from_int(4) + two * level.clone()) * d0.clone()
}

/// `(Λ, Λ + 2ρ)` from the normalized form on affine weights.
pub fn casimir_from_form<F: Field>(lie: &crate::lie::SimpleLieData<F>, weight: &AffineWeight<F>) -> F {
    let shifted = weight.add(&lie.rho().scale(&F::from_int(2)));
    lie.weight_form(weight, &shifted)
}

/// Result of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub parameters: Vec<(String, String)>,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn new(identity: &str) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            parameters: Vec::new(),
            checked: 0,
            skipped: 0,
            violations: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.parameters.push((k.to_string(), v.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }

    pub fn merge(&mut self, other: IdentityReport) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
    }
}

/// Whether an operator with the given margin can be evaluated exactly at `off`.
fn fits<F: Field, M: HighestWeightModule<F>>(m: &M, off: BiDegree, margin: BiDegree) -> bool {
    !is_weight_offset(off) || m.represents(off + margin)
}

/// Whether `off` can hold a result (zero offsets always can).
fn holds<F: Field, M: HighestWeightModule<F>>(m: &M, off: BiDegree) -> bool {
    !is_weight_offset(off) || m.represents(off)
}

/// Basis vectors of the box at which `margin` still fits.
pub fn safe_basis<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    margin: BiDegree,
) -> Result<Vec<M::Key>, ModuleError> {
    let mut out = Vec::new();
    for off in m.weight_box().offsets() {
        if m.weight_box().contains(off + margin) {
            out.extend(m.basis(off)?);
        }
    }
    Ok(out)
}

/// Which current labels count as generators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorScope {
    /// The affine algebra inside `τ(A)`: currents and `K` on the unit of `A`.
    #[default]
    Affine,
    /// Currents and `K` on every basis element of `A`.
    Loop,
}

impl GeneratorScope {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorScope::Affine => "affine",
            GeneratorScope::Loop => "loop",
        }
    }
}

/// A generator as an element of `τ(A)` with its degree and display label.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<F: Field> {
    pub element: TauElement<F>,
    pub degree: BiDegree,
    pub label: String,
}

fn generators_for<F: Field>(
    tau: &TauAlgebra<F>,
    kinds: &[SymbolKind],
    scope: GeneratorScope,
) -> Vec<Generator<F>> {
    let mut out = Vec::new();
    match scope {
        GeneratorScope::Affine => {
            let unit = tau.algebra().unit();
            for &kind in kinds {
                let sym = TauSymbol { kind, a: 0 };
                let label = tau.symbol_label(&sym).replace(";a0", "").replace("(a0)", "");
                out.push(Generator { element: TauElement::from_kind(kind, unit), degree: tau.degree(&sym), label });
            }
        }
        GeneratorScope::Loop => {
            for a in 0..tau.algebra().dim() {
                for &kind in kinds {
                    let sym = TauSymbol { kind, a };
                    out.push(Generator {
                        element: TauElement::symbol(sym),
                        degree: tau.degree(&sym),
                        label: tau.symbol_label(&sym),
                    });
                }
            }
        }
    }
    out
}

/// Currents with powers in `[-w, w]` and `K`.
pub fn affine_generators<F: Field>(tau: &TauAlgebra<F>, w: i64, scope: GeneratorScope) -> Vec<Generator<F>> {
    let mut kinds = Vec::new();
    for g in 0..tau.lie().dim() {
        for power in -w..=w {
            kinds.push(SymbolKind::Current { g, power });
        }
    }
    kinds.push(SymbolKind::Central);
    generators_for(tau, &kinds, scope)
}

/// `X`, `Y⊗t`, `h⊗t` for `sl2`: currents that raise the weight.
pub fn affine_raising_generators<F: Field>(tau: &TauAlgebra<F>, scope: GeneratorScope) -> Vec<Generator<F>> {
    let lie = tau.lie();
    let kinds: Vec<SymbolKind> = (0..lie.dim())
        .map(|g| SymbolKind::Current { g, power: if lie.root_coeff[g] > 0 { 0 } else { 1 } })
        .collect();
    generators_for(tau, &kinds, scope)
}

/// `u·(op v) - op(u·v) = 0` for generators `u` in the window and all basis
/// vectors of the box where every intermediate is representable.
pub fn centrality_report<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    op: &OperatorSpec<F>,
    window: i64,
    scope: GeneratorScope,
) -> Result<IdentityReport, ModuleError> {
    let mut rep = IdentityReport::new("affine-centrality")
        .param("operator", op.describe(m.tau().algebra()))
        .param("window", window)
        .param("scope", scope.name());
    let gens = affine_generators(m.tau(), window, scope);
    for off in m.weight_box().offsets() {
        let keys = m.basis(off)?;
        for u in &gens {
            let du = u.degree;
            let ok = fits(m, off, op.margin())
                && holds(m, off + op.shift() + du)
                && holds(m, off + du)
                && fits(m, off + du, op.margin());
            if !ok {
                rep.skipped += keys.len();
                continue;
            }
            for k in &keys {
                let v = ModVec::unit(k.clone());
                let lhs = m.act(&u.element, &apply_operator(m, op, &v)?)?;
                let rhs = apply_operator(m, op, &m.act(&u.element, &v)?)?;
                rep.checked += 1;
                let diff = lhs.sub(&rhs);
                if !diff.is_zero() {
                    rep.violations.push(format!(
                        "[{}, op] on {} = {}",
                        u.label,
                        m.key_label(k),
                        m.format_vector(&diff)
                    ));
                }
            }
        }
    }
    Ok(rep)
}

/// Normal-ordered and commutator forms of `T_j(a,b)` agree on every
/// representable basis vector.
pub fn realization_report<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
) -> Result<IdentityReport, ModuleError> {
    let op = OperatorSpec::new(j, a.clone(), b.clone());
    let mut rep = IdentityReport::new("normal-order-vs-commutator").param("operator", op.describe(m.tau().algebra()));
    for off in m.weight_box().offsets() {
        // the commutator passes through L_j first, then Ω
        let ok = fits(m, off, op.margin())
            && fits(m, off + op.shift(), BiDegree::new(1, 0))
            && holds(m, off + op.shift());
        let keys = m.basis(off)?;
        if !ok {
            rep.skipped += keys.len();
            continue;
        }
        for k in keys {
            let v = ModVec::unit(k.clone());
            let x = t_apply(m, j, a, b, &v)?;
            let y = t_apply_commutator(m, j, a, b, &v)?;
            rep.checked += 1;
            if x != y {
                rep.violations.push(format!(
                    "on {}: sums give {}, commutator gives {}",
                    m.key_label(&k),
                    m.format_vector(&x),
                    m.format_vector(&y)
                ));
            }
        }
    }
    Ok(rep)
}

/// `T_j(a,b) = T_j(b,a)` pointwise.
pub fn symmetry_report<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
) -> Result<IdentityReport, ModuleError> {
    let op = OperatorSpec::new(j, a.clone(), b.clone());
    let mut rep = IdentityReport::new("operator-symmetry").param("operator", op.describe(m.tau().algebra()));
    for k in safe_basis(m, op.margin())? {
        let v = ModVec::unit(k.clone());
        rep.checked += 1;
        let d = t_apply(m, j, a, b, &v)?.sub(&t_apply(m, j, b, a, &v)?);
        if !d.is_zero() {
            rep.violations.push(format!("on {}: difference {}", m.key_label(&k), m.format_vector(&d)));
        }
    }
    Ok(rep)
}

/// Both orders of each fixed-`n` term agree when `j ≠ 0`.
pub fn reorder_report<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    j: i64,
    n_range: std::ops::RangeInclusive<i64>,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
) -> Result<IdentityReport, ModuleError> {
    let mut rep = IdentityReport::new("reorder").param("j", j);
    let margin = BiDegree::new(1, (-j).max(0) + n_range.clone().map(|n| n.abs()).max().unwrap_or(0));
    for k in safe_basis(m, margin)? {
        let v = ModVec::unit(k.clone());
        for n in n_range.clone() {
            let (x, y) = reorder_pair(m, n, j, a, b, &v)?;
            rep.checked += 1;
            if x != y {
                rep.violations.push(format!("n = {n} on {}", m.key_label(&k)));
            }
        }
    }
    Ok(rep)
}

/// Measured central scalar of `[L_k, T_{-k}(a,b)] - (-2k)Ω(a,b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralSample<F> {
    pub k_ab: F,
    pub k_a_k_b: F,
    pub scalar: F,
}

/// `γ_1 K(ab) + γ_2 K(a)K(b)` fitted to the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralFit<F> {
    pub k: i64,
    pub measured: Option<(F, F)>,
    pub stated: (F, F),
    pub samples: usize,
    /// Samples the fit does not reproduce.
    pub inconsistent: Vec<String>,
}

impl<F: Field> CentralFit<F> {
    pub fn agrees_with_stated(&self) -> bool {
        self.measured.as_ref() == Some(&self.stated)
    }
}

/// Coefficients `(γ_1, γ_2)` as printed:
/// `-(k³-k)/6 · dim g + (k³-k)/12 · 2h^∨` and `(k³-k)/12 · 2`.
pub fn stated_central_coefficients<F: Field>(lie: &crate::lie::SimpleLieData<F>, k: i64) -> (F, F) {
    let c = F::from_int(k * k * k - k);
    let g1 = -c.clone() / F::from_int(6) * F::from_int(lie.dim() as i64)
        + c.clone() / F::from_int(12) * F::from_int(2 * lie.dual_coxeter);
    let g2 = c / F::from_int(12) * F::from_int(2);
    (g1, g2)
}

/// `[L_k(1), T_j(a,b)] v` on every representable basis vector.
///
/// For `j + k ≠ 0` each vector is compared with `(j-k) T_{j+k}(a,b) v`. For
/// `j + k = 0` the residual against `(j-k)Ω(a,b)v` must be a multiple of `v`
/// with a factor independent of `v`; the factor is returned as a sample.
pub fn vir_bracket_report<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    k: i64,
    j: i64,
    a: &SparseVec<F>,
    b: &SparseVec<F>,
) -> Result<(IdentityReport, Option<CentralSample<F>>), ModuleError> {
    if j == 0 {
        return Err(ModuleError::BadParams("the bracket needs j != 0".into()));
    }
    let tau = m.tau();
    let unit = tau.algebra().unit().clone();
    let op = OperatorSpec::new(j, a.clone(), b.clone());
    let target = OperatorSpec::new(j + k, a.clone(), b.clone());
    let lk = BiDegree::new(0, -k);
    let mut rep = IdentityReport::new("vir-bracket")
        .param("k", k)
        .param("operator", op.describe(m.tau().algebra()));
    let mut scalar: Option<F> = None;
    for off in m.weight_box().offsets() {
        let keys = m.basis(off)?;
        let ok = fits(m, off, op.margin())
            && holds(m, off + op.shift())
            && holds(m, off + op.shift() + lk)
            && holds(m, off + lk)
            && fits(m, off + lk, op.margin())
            && fits(m, off, target.margin());
        if !ok {
            rep.skipped += keys.len();
            continue;
        }
        for key in keys {
            let v = ModVec::unit(key.clone());
            let first = act_kind(m, SymbolKind::Vir(k), &unit, &t_apply(m, j, a, b, &v)?)?;
            let second = t_apply(m, j, a, b, &act_kind(m, SymbolKind::Vir(k), &unit, &v)?)?;
            let lhs = first.sub(&second);
            let rhs = t_apply(m, j + k, a, b, &v)?.scale(&F::from_int(j - k));
            let resid = lhs.sub(&rhs);
            rep.checked += 1;
            if j + k != 0 {
                if !resid.is_zero() {
                    rep.violations.push(format!("on {}: residual {}", m.key_label(&key), m.format_vector(&resid)));
                }
                continue;
            }
            match resid.ratio_to(&v) {
                None => rep.violations.push(format!(
                    "on {}: residual {} is not a multiple of the vector",
                    m.key_label(&key),
                    m.format_vector(&resid)
                )),
                Some(s) => match &scalar {
                    None => scalar = Some(s),
                    Some(prev) if *prev != s => rep.violations.push(format!(
                        "on {}: residual factor {s} differs from {prev}",
                        m.key_label(&key)
                    )),
                    _ => {}
                },
            }
        }
    }
    let sample = if j + k == 0 {
        scalar.map(|s| {
            let ab = tau.algebra().mul(a, b);
            let psi = m.psi();
            CentralSample { k_ab: psi.k_on(&ab), k_a_k_b: psi.k_on(a) * psi.k_on(b), scalar: s }
        })
    } else {
        None
    };
    Ok((rep, sample))
}

/// Solves `scalar = γ_1 k_ab + γ_2 k_a_k_b` exactly from two independent
/// samples and checks the rest.
pub fn fit_central<F: Field>(
    lie: &crate::lie::SimpleLieData<F>,
    k: i64,
    samples: &[CentralSample<F>],
) -> CentralFit<F> {
    let stated = stated_central_coefficients(lie, k);
    let mut measured = None;
    'outer: for (i, s) in samples.iter().enumerate() {
        for t in &samples[i + 1..] {
            let det = s.k_ab.clone() * t.k_a_k_b.clone() - s.k_a_k_b.clone() * t.k_ab.clone();
            if det.is_zero() {
                continue;
            }
            let g1 = (s.scalar.clone() * t.k_a_k_b.clone() - s.k_a_k_b.clone() * t.scalar.clone()) / det.clone();
            let g2 = (s.k_ab.clone() * t.scalar.clone() - s.scalar.clone() * t.k_ab.clone()) / det;
            measured = Some((g1, g2));
            break 'outer;
        }
    }
    let mut inconsistent = Vec::new();
    if let Some((g1, g2)) = &measured {
        for (i, s) in samples.iter().enumerate() {
            let pred = g1.clone() * s.k_ab.clone() + g2.clone() * s.k_a_k_b.clone();
            if pred != s.scalar {
                inconsistent.push(format!("sample {i}: measured {} predicted {pred}", s.scalar));
            }
        }
    }
    CentralFit { k, measured, stated, samples: samples.len(), inconsistent }
}

/// A vector `T_j(a,b) v` and its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedVector<K, F: Field> {
    pub j: i64,
    pub pair: (SparseVec<F>, SparseVec<F>),
    pub vector: ModVec<K, F>,
    pub offset: Option<BiDegree>,
    /// Raising generators in the requested scope that fail to kill the vector.
    pub not_killed_by: Vec<String>,
}

impl<K, F: Field> GeneratedVector<K, F> {
    pub fn is_singular(&self) -> bool {
        self.not_killed_by.is_empty()
    }
}

/// `T_j(a,b) v_top` for each `j` and pair, dropping zeros, with a
/// singularity verdict against the affine raising generators.
pub fn singular_generation<F: Field, M: HighestWeightModule<F>>(
    m: &M,
    js: &[i64],
    pairs: &[(SparseVec<F>, SparseVec<F>)],
    scope: GeneratorScope,
) -> Result<Vec<GeneratedVector<M::Key, F>>, ModuleError> {
    let gens = affine_raising_generators(m.tau(), scope);
    let top = m.highest_vector();
    let mut out = Vec::new();
    for &j in js {
        for (a, b) in pairs {
            let w = t_apply(m, j, a, b, &top)?;
            if w.is_zero() {
                continue;
            }
            let mut not_killed_by = Vec::new();
            for g in &gens {
                if !m.act(&g.element, &w)?.is_zero() {
                    not_killed_by.push(g.label.clone());
                }
            }
            out.push(GeneratedVector {
                j,
                pair: (a.clone(), b.clone()),
                offset: m.offset_of_vector(&w),
                vector: w,
                not_killed_by,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comm_algebra::CommAlgebra;
    use crate::lie::SimpleLieData;
    use crate::tau::{CentralConvention, TauAlgebra, TauSymbol};
    use crate::weight_modules::{PbwMonomial, PsiFunctional, Verma, WeightBox};
    use num_rational::BigRational;
    use std::sync::Arc;

    type Q = BigRational;
    const X: usize = 0;
    const Y: usize = 1;
    const H: usize = 2;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn one() -> SparseVec<Q> {
        SparseVec::unit(0)
    }

    fn scalar_verma(l: Q, c: Q, d0: Q, b: (i64, i64), conv: CentralConvention) -> Verma<Q> {
        let tau = TauAlgebra::new(SimpleLieData::sl2(), Arc::new(CommAlgebra::scalar()), conv);
        Verma::new(tau, PsiFunctional::scalar(l, c, d0), WeightBox::new(b.0, b.1)).unwrap()
    }

    #[test]
    fn omega_on_top_line() {
        let m = scalar_verma(q(1), q(1), q(0), (2, 2), CentralConvention::default());
        let v = m.highest_vector();
        assert_eq!(omega_apply(&m, &one(), &one(), &v).unwrap(), v.scale(&Q::from_ratio(3, 2)));
        for (l, c, d) in [(q(2), q(-3), Q::from_ratio(1, 2)), (Q::from_ratio(-5, 3), q(7), q(2))] {
            let m = scalar_verma(l.clone(), c.clone(), d.clone(), (2, 2), CentralConvention::default());
            let v = m.highest_vector();
            let w = omega_apply(&m, &one(), &one(), &v).unwrap();
            assert_eq!(w, v.scale(&casimir_diagonal(&l, &c, &d)));
        }
    }

    #[test]
    fn casimir_two_ways() {
        let lie = SimpleLieData::<Q>::sl2();
        for (l, c, d) in [(1, 1, 0), (2, 5, -3), (0, 0, 4), (-3, 2, 1)] {
            let w = AffineWeight { finite: vec![q(l)], level: q(c), delta: q(d) };
            assert_eq!(casimir_from_form(&lie, &w), casimir_diagonal(&q(l), &q(c), &q(d)));
        }
    }

    #[test]
    fn t_minus_one_on_top_line() {
        // two n values contribute to the current part
        let (l, c) = (q(3), q(5));
        let m = scalar_verma(l.clone(), c.clone(), q(0), (2, 2), CentralConvention::default());
        let v = m.highest_vector();
        let w = t_apply(&m, -1, &one(), &one(), &v).unwrap();
        let mono = |s: Vec<TauSymbol>| PbwMonomial(s);
        let mut want = ModVec::zero();
        want.add_term(mono(vec![TauSymbol::current(Y, 0, 0), TauSymbol::current(X, -1, 0)]), q(2));
        want.add_term(mono(vec![TauSymbol::current(H, -1, 0)]), q(2) + l);
        want.add_term(mono(vec![TauSymbol::vir(-1, 0)]), q(2) * c + q(4));
        assert_eq!(w, want);
        assert_eq!(t_apply_commutator(&m, -1, &one(), &one(), &v).unwrap(), want);
    }

    #[test]
    fn t_positive_kills_top() {
        let m = scalar_verma(q(1), q(1), q(0), (2, 2), CentralConvention::default());
        let v = m.highest_vector();
        assert!(t_apply(&m, 3, &one(), &one(), &v).unwrap().is_zero());
    }

    #[test]
    fn commutator_form_flips_with_order() {
        let m = scalar_verma(q(2), q(1), q(1), (2, 2), CentralConvention::default());
        let v = m.highest_vector();
        let l = act_kind(&m, SymbolKind::Vir(-1), &one(), &omega_apply(&m, &one(), &one(), &v).unwrap()).unwrap();
        let r = omega_apply(&m, &one(), &one(), &act_kind(&m, SymbolKind::Vir(-1), &one(), &v).unwrap()).unwrap();
        let t = t_apply_commutator(&m, -1, &one(), &one(), &v).unwrap();
        // T = (-1/j)(LΩ - ΩL) with j = -1
        assert_eq!(l.sub(&r), t);
    }

    #[test]
    fn omega_is_central_for_first_exponent_only() {
        let psi = PsiFunctional::scalar(q(1), q(2), q(0));
        let tau = TauAlgebra::sl2(Arc::new(CommAlgebra::scalar()));
        let m = Verma::new(tau, psi.clone(), WeightBox::new(2, 2)).unwrap();
        let rep = centrality_report(&m, &OperatorSpec::omega(one(), one()), 1, GeneratorScope::Affine).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        let tau = TauAlgebra::new(SimpleLieData::sl2(), Arc::new(CommAlgebra::scalar()), CentralConvention::SecondExponent);
        let m = Verma::new(tau, psi, WeightBox::new(2, 2)).unwrap();
        let rep = centrality_report(&m, &OperatorSpec::omega(one(), one()), 1, GeneratorScope::Affine).unwrap();
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn sums_match_commutator_on_scalar_algebra() {
        let m = scalar_verma(q(1), q(3), q(2), (2, 2), CentralConvention::default());
        for j in [-2, -1, 1, 2] {
            let rep = realization_report(&m, j, &one(), &one()).unwrap();
            assert!(rep.passed(), "j={j}: {:?}", rep.violations);
        }
    }

    #[test]
    fn vir_bracket_small() {
        let m = scalar_verma(q(1), q(3), q(2), (2, 2), CentralConvention::default());
        let (rep, _) = vir_bracket_report(&m, 1, 1, &one(), &one()).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        let (rep, sample) = vir_bracket_report(&m, 1, -1, &one(), &one()).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(sample.unwrap().scalar, q(0));
    }
}
