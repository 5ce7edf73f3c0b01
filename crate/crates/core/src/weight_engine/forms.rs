//! Twisted forms t^λ dt_I: contraction with the Euler field, the de Rham
//! differential, closed forms and the Casimir projection of Ω^{k−1} ⊗ V.

use super::{ExponentVector, Shift, WeightError, WindowModule};
use crate::linalg::{int, poly, Matrix, Rational, Subspace};
use num_traits::Zero;
use std::collections::BTreeMap;

/// k-element subsets of {0, …, n}, lexicographic.
pub fn form_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n + 1 {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn position(list: &[Vec<usize>], s: &[usize]) -> usize {
    list.iter().position(|t| t == s).expect("subset present")
}

/// i_E: dt_{i_0} ∧ … ∧ dt_{i_{k−1}} ↦ Σ_s (−1)^s t_{i_s} dt_{I∖i_s}. The
/// coefficients do not depend on the exponent, so one matrix serves every weight.
pub fn contraction_matrix(n: usize, k: usize) -> Matrix {
    let src = form_subsets(n, k);
    if k == 0 {
        return Matrix::zeros(0, src.len());
    }
    let dst = form_subsets(n, k - 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (c, set) in src.iter().enumerate() {
        for s in 0..set.len() {
            let mut rest = set.clone();
            rest.remove(s);
            m.set(position(&dst, &rest), c, int(if s % 2 == 0 { 1 } else { -1 }));
        }
    }
    m
}

/// d on k-forms of total weight ν: t^λ dt_I ↦ Σ_{i∉I} λ_i t^{λ−e_i} dt_i ∧ dt_I,
/// where λ_i = ν_i for i ∉ I.
pub fn exterior_derivative(n: usize, k: usize, nu: &[Rational]) -> Matrix {
    let src = form_subsets(n, k);
    let dst = form_subsets(n, k + 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (c, set) in src.iter().enumerate() {
        for i in 0..=n {
            if set.contains(&i) {
                continue;
            }
            let before = set.iter().filter(|&&s| s < i).count();
            let mut out = set.clone();
            out.insert(before, i);
            let sign = if before % 2 == 0 { int(1) } else { int(-1) };
            m.set(position(&dst, &out), c, sign * &nu[i]);
        }
    }
    m
}

fn require_de_rham_input(m: &WindowModule) -> Result<(), WeightError> {
    if m.is_tensor() || m.log_degree() != 0 {
        return Err(WeightError::Unsupported("d is implemented on plain Ω^k windows"));
    }
    if !m.mu().total().is_zero() {
        return Err(WeightError::NonzeroTotal(crate::linalg::format_rational(&m.mu().total())));
    }
    Ok(())
}

/// ker d ∩ Ω^k at δ, in ambient coordinates.
pub(crate) fn closed_fiber(m: &WindowModule, delta: &[i64]) -> Subspace {
    let n = m.n();
    let k = m.form_degree();
    let forms = m.forms_space.clone();
    let b = forms.basis_matrix();
    let d = exterior_derivative(n, k, &m.total_weight(delta));
    let kernel = d.mul(&b).kernel();
    let vecs: Vec<Vec<Rational>> = kernel.iter().map(|c| b.mul_vec(c)).collect();
    Subspace::span(forms.ambient(), &vecs)
}

/// The de Rham differential Ω^k → Ω^{k+1}, one block per window weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeRham {
    pub degree: usize,
    pub blocks: BTreeMap<Shift, Matrix>,
}

/// d on an Ω^k(μ) window (|μ| = 0), in the fiber coordinates of Ω^k and Ω^{k+1}.
pub fn de_rham(m: &WindowModule) -> Result<DeRham, WeightError> {
    require_de_rham_input(m)?;
    let n = m.n();
    let k = m.form_degree();
    let target = WindowModule::forms_unchecked(m.mu(), k + 1, m.radius())?;
    let mut blocks = BTreeMap::new();
    for delta in m.weights() {
        let (fs, ft) = (m.fiber(delta), target.fiber(delta));
        let d = exterior_derivative(n, k, &m.total_weight(delta));
        let cols: Vec<Vec<Rational>> = fs
            .basis()
            .iter()
            .map(|v| {
                let w = d.mul_vec(v);
                ft.coordinates(&w)
            })
            .collect();
        blocks.insert(delta.clone(), Matrix::from_columns(ft.dim(), &cols));
    }
    Ok(DeRham { degree: k, blocks })
}

/// L_k = ker d ∩ Ω^k(μ), which equals d(Ω^{k−1}(μ)).
pub fn simple_lk(mu: &ExponentVector, k: usize, radius: usize) -> Result<WindowModule, WeightError> {
    if k == 0 || k > mu.n() {
        return Err(WeightError::FormDegree { k, max: mu.n() });
    }
    if !mu.total().is_zero() {
        return Err(WeightError::NonzeroTotal(crate::linalg::format_rational(&mu.total())));
    }
    mu.require_cuspidal()?;
    Ok(WindowModule::forms_unchecked(mu, k, radius)?.closed())
}

impl WindowModule {
    /// Ω^k(μ): forms with L_E = |μ| = 0 and i_E ω = 0.
    pub fn build_forms(mu: &ExponentVector, k: usize, radius: usize) -> Result<WindowModule, WeightError> {
        if k > mu.n() {
            return Err(WeightError::FormDegree { k, max: mu.n() });
        }
        if !mu.total().is_zero() {
            return Err(WeightError::NonzeroTotal(crate::linalg::format_rational(&mu.total())));
        }
        mu.require_cuspidal()?;
        WindowModule::forms_unchecked(mu, k, radius)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeRhamReport {
    pub weights_checked: usize,
    /// dim Ω^k per degree k = 0..=n (constant in the weight).
    pub dims: Vec<usize>,
    pub d_squared_zero: bool,
    /// d i_E + i_E d = L_E = |ν| on all ambient k-forms.
    pub cartan_formula: bool,
    pub image_in_kernel: bool,
    /// rank d_{k−1} + rank d_k = dim Ω^k (k ≥ 1) and ker d_0 = 0.
    pub exact: bool,
    pub first_inexact: Option<(Shift, usize)>,
}

impl DeRhamReport {
    pub fn passed(&self) -> bool {
        self.d_squared_zero && self.cartan_formula && self.image_in_kernel && self.exact
    }
}

/// Full de Rham verification on the interior weights of the radius-N window.
pub fn de_rham_report(mu: &ExponentVector, radius: usize) -> Result<DeRhamReport, WeightError> {
    let n = mu.n();
    let modules: Vec<WindowModule> =
        (0..=n).map(|k| WindowModule::build_forms(mu, k, radius)).collect::<Result<_, _>>()?;
    let diffs: Vec<DeRham> = modules.iter().map(de_rham).collect::<Result<_, _>>()?;
    let weights = modules[0].interior_weights(1);
    let dims: Vec<usize> = modules.iter().map(|m| m.dim(&weights[0])).collect();
    let mut report = DeRhamReport {
        weights_checked: weights.len(),
        dims,
        d_squared_zero: true,
        cartan_formula: true,
        image_in_kernel: true,
        exact: true,
        first_inexact: None,
    };
    for delta in &weights {
        let nu = mu.at(delta);
        let total: Rational = nu.iter().sum();
        for k in 0..=n + 1 {
            let size = form_subsets(n, k).len();
            let mut lhs = contraction_matrix(n, k + 1).mul(&exterior_derivative(n, k, &nu));
            if k > 0 {
                lhs = lhs.add(&exterior_derivative(n, k - 1, &nu).mul(&contraction_matrix(n, k)));
            }
            if lhs != Matrix::scalar(size, &total) {
                report.cartan_formula = false;
            }
            if k <= n {
                let d = exterior_derivative(n, k, &nu);
                let iota = contraction_matrix(n, k + 1);
                for v in modules.get(k).map(|m| m.fiber(delta).basis().to_vec()).unwrap_or_default() {
                    if !iota.mul_vec(&d.mul_vec(&v)).iter().all(Zero::is_zero) {
                        report.image_in_kernel = false;
                    }
                }
            }
        }
        let ranks: Vec<usize> = diffs.iter().map(|d| d.blocks[delta].rank()).collect();
        for k in 0..n {
            let dd = diffs[k + 1].blocks[delta].mul(&diffs[k].blocks[delta]);
            if !dd.is_zero() {
                report.d_squared_zero = false;
            }
        }
        for k in 0..=n {
            let ok = if k == 0 {
                ranks[0] == report.dims[0]
            } else {
                ranks[k - 1] + ranks[k] == report.dims[k]
            };
            if !ok && report.exact {
                report.exact = false;
                report.first_inexact = Some((delta.clone(), k));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDims {
    pub weight: Shift,
    pub tensor_dim: usize,
    pub s_dim: usize,
    pub omega_k: usize,
    pub omega_k_minus_1: usize,
    pub idempotent: bool,
    /// Rational Casimir eigenvalues on Ω^{k−1} ⊗ V other than χ_0.
    pub other_eigenvalues: Vec<Rational>,
}

impl WeightDims {
    pub fn passed(&self) -> bool {
        self.idempotent && self.s_dim == self.omega_k + self.omega_k_minus_1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub k: usize,
    /// Casimir scalar on Ω^k(μ).
    pub chi0: Rational,
    pub weights: Vec<WeightDims>,
}

impl ProjectionReport {
    pub fn passed(&self) -> bool {
        !self.weights.is_empty() && self.weights.iter().all(WeightDims::passed)
    }

    /// True when no other Casimir eigenvalue coincides with χ_0. The Casimir
    /// cannot tell apart distinct central characters with the same value.
    pub fn casimir_separates(&self) -> bool {
        self.weights.iter().all(|w| !w.other_eigenvalues.contains(&self.chi0))
    }
}

/// S^k = generalized χ_0-eigenspace of the Casimir on Ω^{k−1}(μ − ε_0) ⊗ V,
/// compared per interior weight with dim Ω^k(μ) + dim Ω^{k−1}(μ).
pub fn casimir_projection_check(mu: &ExponentVector, k: usize, radius: usize) -> Result<ProjectionReport, WeightError> {
    let n = mu.n();
    if k == 0 || k > n {
        return Err(WeightError::FormDegree { k, max: n });
    }
    let omega_k = WindowModule::build_forms(mu, k, radius)?;
    let omega_km1 = WindowModule::build_forms(mu, k - 1, radius)?;
    let base = WindowModule::forms_unchecked(&mu.shifted(0, &int(-1)), k - 1, radius)?;
    let tensor = base.natural_tensor()?;
    let weights = tensor.interior_weights(2);
    let chi0 = omega_k.casimir(&weights[0]);
    let chi0 = chi0.get(0, 0).clone();
    let mut out = Vec::new();
    for delta in &weights {
        let c = tensor.casimir(delta);
        let dim = c.rows();
        let shifted = c.sub(&Matrix::scalar(dim, &chi0)).pow(dim as u32);
        let gen = Subspace::kernel_of(&shifted);
        let img = Subspace::image_of(&shifted);
        // projection onto gen along img
        let basis = gen.basis_matrix().hstack(&img.basis_matrix());
        let idempotent = match basis.inverse() {
            Some(inv) => {
                let mut diag = Matrix::zeros(dim, dim);
                for i in 0..gen.dim() {
                    diag.set(i, i, int(1));
                }
                let p = basis.mul(&diag).mul(&inv);
                p.mul(&p) == p && p.mul(&c) == c.mul(&p)
            }
            None => false,
        };
        let mut other: Vec<Rational> =
            poly::rational_roots(&poly::charpoly(&c)).into_iter().filter(|r| *r != chi0).collect();
        other.sort();
        out.push(WeightDims {
            weight: delta.clone(),
            tensor_dim: dim,
            s_dim: gen.dim(),
            omega_k: omega_k.dim(delta),
            omega_k_minus_1: omega_km1.dim(delta),
            idempotent,
            other_eigenvalues: other,
        });
    }
    Ok(ProjectionReport { k, chi0, weights: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    #[test]
    fn subset_counts() {
        assert_eq!(form_subsets(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(form_subsets(2, 2).len(), 3);
        assert!(form_subsets(2, 4).is_empty());
    }

    #[test]
    fn derivative_of_monomial() {
        // d(t^λ) = Σ λ_i t^{λ−e_i} dt_i
        let nu = vec![frac(1, 3), frac(1, 3), frac(-2, 3)];
        let d = exterior_derivative(2, 0, &nu);
        assert_eq!(d.column(0), nu);
        // i_E d t^λ = |λ| t^λ = 0
        assert!(contraction_matrix(2, 1).mul(&d).is_zero());
    }
}
