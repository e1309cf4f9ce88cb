//! Finite-dimensional simple Lie algebra data and the affine weight form.
//!
//! Only `sl2` is provided; the struct carries everything the loop algebra,
//! the modules and the central operators read, so further Chevalley data can
//! be added without touching those layers.

use crate::linear::SparseVec;
use crate::scalar::Field;

/// A root `α` of the finite root system with its normalized root vectors:
/// `(x_α, x_{-α}) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootPair {
    pub x_alpha: usize,
    pub x_minus_alpha: usize,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimpleLieData<F: Field> {
    pub name: String,
    pub labels: Vec<String>,
    /// `bracket[i][j] = [e_i, e_j]`
    pub bracket: Vec<Vec<SparseVec<F>>>,
    /// Invariant form on basis pairs.
    pub form: Vec<Vec<F>>,
    /// Coefficient of the simple root in the weight of each basis vector.
    pub root_coeff: Vec<i64>,
    /// Basis indices of the Cartan basis `h_i`.
    pub cartan: Vec<usize>,
    /// The dual basis `h^i`, `(h_i, h^j) = δ_ij`.
    pub cartan_dual: Vec<SparseVec<F>>,
    /// Every root of the finite root system, both signs.
    pub roots: Vec<RootPair>,
    /// `ρ̄(h_i)`
    pub rho_bar: Vec<F>,
    pub dual_coxeter: i64,
    /// Highest root as a multiple of the simple root.
    pub highest_root: i64,
    /// `α_0 = -β + δ` as (coefficient of the simple root, coefficient of δ).
    pub alpha0: (i64, i64),
}

impl<F: Field> SimpleLieData<F> {
    /// `sl2` with basis `X, Y, h`, `[X,Y] = h`, `[h,X] = 2X`, `[h,Y] = -2Y`,
    /// and form `(X,Y) = 1`, `(h,h) = 2`.
    pub fn sl2() -> Self {
        const X: usize = 0;
        const Y: usize = 1;
        const H: usize = 2;
        let z = SparseVec::zero;
        let two = F::from_int(2);
        let mut bracket = vec![vec![z(), z(), z()], vec![z(), z(), z()], vec![z(), z(), z()]];
        bracket[X][Y] = SparseVec::unit(H);
        bracket[Y][X] = SparseVec::unit(H).scale(&-F::one());
        bracket[H][X] = SparseVec::unit(X).scale(&two);
        bracket[X][H] = SparseVec::unit(X).scale(&-two.clone());
        bracket[H][Y] = SparseVec::unit(Y).scale(&-two.clone());
        bracket[Y][H] = SparseVec::unit(Y).scale(&two);
        let mut form = vec![vec![F::zero(); 3]; 3];
        form[X][Y] = F::one();
        form[Y][X] = F::one();
        form[H][H] = two;
        SimpleLieData {
            name: "sl2".into(),
            labels: vec!["X".into(), "Y".into(), "h".into()],
            bracket,
            form,
            root_coeff: vec![1, -1, 0],
            cartan: vec![H],
            cartan_dual: vec![SparseVec::unit(H).scale(&F::from_ratio(1, 2))],
            roots: vec![
                RootPair { x_alpha: X, x_minus_alpha: Y, positive: true },
                RootPair { x_alpha: Y, x_minus_alpha: X, positive: false },
            ],
            rho_bar: vec![F::one()],
            dual_coxeter: 2,
            highest_root: 1,
            alpha0: (-1, 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn lie_bracket(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zero();
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out = out.add_scaled(&(a.clone() * b.clone()), &self.bracket[*i][*j]);
            }
        }
        out
    }

    pub fn pair(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> F {
        let mut acc = F::zero();
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                acc = acc + a.clone() * b.clone() * self.form[*i][*j].clone();
            }
        }
        acc
    }

    /// `α(h_i)` for the root carried by basis vector `x`.
    pub fn root_on_cartan(&self, x: usize) -> Vec<F> {
        self.cartan
            .iter()
            .map(|&h| self.bracket[h][x].get(x))
            .collect()
    }

    /// `γ^{-1}(μ) = Σ_i μ(h_i) h^i` for a functional given by its values on `h_i`.
    pub fn coroot_of(&self, mu: &[F]) -> SparseVec<F> {
        let mut out = SparseVec::zero();
        for (m, hd) in mu.iter().zip(&self.cartan_dual) {
            out = out.add_scaled(m, hd);
        }
        out
    }

    /// `γ^{-1}(ρ̄)` as an element of the Cartan subalgebra.
    pub fn rho_bar_coroot(&self) -> SparseVec<F> {
        self.coroot_of(&self.rho_bar)
    }

    /// Checks the defining identities of the data; returns human-readable
    /// descriptions of every failure.
    pub fn validate(&self) -> Vec<String> {
        let n = self.dim();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.form[a][b] != self.form[b][a] {
                    bad.push(format!("form not symmetric at ({a},{b})"));
                }
                let ab = &self.bracket[a][b];
                if *ab != self.bracket[b][a].scale(&-F::one()) {
                    bad.push(format!("bracket not antisymmetric at ({a},{b})"));
                }
                for c in 0..n {
                    let ec = SparseVec::unit(c);
                    let eb = SparseVec::unit(b);
                    let lhs = self.pair(ab, &ec)
                        + self.pair(&eb, &self.bracket[a][c]);
                    if !lhs.is_zero() {
                        bad.push(format!("form not invariant at ({a},{b},{c})"));
                    }
                }
            }
        }
        for (i, &h) in self.cartan.iter().enumerate() {
            for (j, hd) in self.cartan_dual.iter().enumerate() {
                let v = self.pair(&SparseVec::unit(h), hd);
                let want = if i == j { F::one() } else { F::zero() };
                if v != want {
                    bad.push(format!("cartan dual basis fails at ({i},{j})"));
                }
            }
        }
        for r in &self.roots {
            let xa = SparseVec::unit(r.x_alpha);
            let xm = SparseVec::unit(r.x_minus_alpha);
            if self.pair(&xa, &xm) != F::one() {
                bad.push(format!("root vectors {} not normalized", self.labels[r.x_alpha]));
            }
            let coroot = self.coroot_of(&self.root_on_cartan(r.x_alpha));
            if self.lie_bracket(&xa, &xm) != coroot {
                bad.push(format!(
                    "[x_α, x_-α] != γ^-1(α) for {}",
                    self.labels[r.x_alpha]
                ));
            }
        }
        bad
    }

    /// `ρ = ρ̄ + h^∨ Λ_0` as an affine weight.
    pub fn rho(&self) -> AffineWeight<F> {
        AffineWeight {
            finite: self.rho_bar.clone(),
            level: F::from_int(self.dual_coxeter),
            delta: F::zero(),
        }
    }

    /// The normalized invariant form on affine weights: the finite part uses
    /// the dual of the form on `h`, and `(Λ_0, δ) = 1`, `(Λ_0, Λ_0) = (δ, δ) = 0`.
    pub fn weight_form(&self, x: &AffineWeight<F>, y: &AffineWeight<F>) -> F {
        let coroot_y = self.coroot_of(&y.finite);
        let mut finite = F::zero();
        for (xi, &h) in x.finite.iter().zip(&self.cartan) {
            // x(γ^{-1}(y)) expanded on the h_i coordinates of γ^{-1}(y)
            finite = finite + xi.clone() * coroot_y.get(h);
        }
        finite + x.level.clone() * y.delta.clone() + x.delta.clone() * y.level.clone()
    }
}

/// `Λ = Σ finite_i ω_i + level Λ_0 + delta δ`, with `finite` the values on `h_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineWeight<F: Field> {
    pub finite: Vec<F>,
    pub level: F,
    pub delta: F,
}

impl<F: Field> AffineWeight<F> {
    pub fn add(&self, other: &Self) -> Self {
        AffineWeight {
            finite: self
                .finite
                .iter()
                .zip(&other.finite)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            level: self.level.clone() + other.level.clone(),
            delta: self.delta.clone() + other.delta.clone(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        AffineWeight {
            finite: self.finite.iter().map(|a| a.clone() * c.clone()).collect(),
            level: self.level.clone() * c.clone(),
            delta: self.delta.clone() * c.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn sl2_data_is_consistent() {
        let g = SimpleLieData::<Q>::sl2();
        assert!(g.validate().is_empty(), "{:?}", g.validate());
        assert_eq!(g.dim(), 3);
        assert_eq!(g.rho_bar_coroot(), SparseVec::unit(2).scale(&Q::from_ratio(1, 2)));
    }

    #[test]
    fn broken_form_is_detected() {
        let mut g = SimpleLieData::<Q>::sl2();
        g.form[2][2] = Q::from_int(1);
        assert!(!g.validate().is_empty());
    }

    #[test]
    fn weight_form_values() {
        let g = SimpleLieData::<Q>::sl2();
        let omega = AffineWeight { finite: vec![Q::from_int(1)], level: Q::from_int(0), delta: Q::from_int(0) };
        assert_eq!(g.weight_form(&omega, &omega), Q::from_ratio(1, 2));
        let lam0 = AffineWeight { finite: vec![Q::from_int(0)], level: Q::from_int(1), delta: Q::from_int(0) };
        let delta = AffineWeight { finite: vec![Q::from_int(0)], level: Q::from_int(0), delta: Q::from_int(1) };
        assert_eq!(g.weight_form(&lam0, &delta), Q::from_int(1));
        assert_eq!(g.weight_form(&lam0, &lam0), Q::from_int(0));
        assert_eq!(g.weight_form(&delta, &delta), Q::from_int(0));
    }
}
