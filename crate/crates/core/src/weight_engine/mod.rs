//! Finite windows of cuspidal sl(n+1)-modules realised on twisted Laurent
//! monomials t^λ = t_0^{λ_0}⋯t_n^{λ_n}, their log-extensions u^p t^λ with
//! u = log(t_0⋯t_n), and the twisted differential forms t^λ dt_I.
//!
//! E_ij acts as the Lie derivative of t_i ∂/∂t_j. A basis element is indexed
//! by its weight shift δ (Σδ = 0) and an ambient key (p, I, l); the total
//! weight is ν = μ + δ and the monomial exponent is λ = ν − e_I − e_l, where
//! l indexes the natural module in tensor products. Every operator is given by
//! a closed formula at every weight; the radius only fixes which weights are
//! enumerated.

mod forms;

pub use forms::{
    casimir_projection_check, contraction_matrix, de_rham, de_rham_report, exterior_derivative,
    form_subsets, simple_lk, DeRham, DeRhamReport, ProjectionReport, WeightDims,
};

use crate::linalg::{format_rational, int, is_integral, parse_rational, Matrix, Rational, Subspace};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Root-lattice shift δ of a weight, Σδ = 0.
pub type Shift = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("an exponent vector needs at least two components")]
    TooShort,
    #[error("|μ| = {0}, but this construction needs |μ| = 0")]
    NonzeroTotal(String),
    #[error("μ_{0} = {1} is an integer")]
    Integral(usize, String),
    #[error("form degree {k} outside 0..={max}")]
    FormDegree { k: usize, max: usize },
    #[error("needs n >= {0}")]
    Rank(usize),
    #[error("cannot parse exponent vector: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(&'static str),
}

/// μ = (μ_0, …, μ_n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    mu: Vec<Rational>,
}

impl ExponentVector {
    pub fn new(mu: Vec<Rational>) -> Result<Self, WeightError> {
        if mu.len() < 2 {
            return Err(WeightError::TooShort);
        }
        Ok(ExponentVector { mu })
    }

    pub fn n(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn components(&self) -> &[Rational] {
        &self.mu
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.mu[i]
    }

    /// |μ| = μ_0 + … + μ_n.
    pub fn total(&self) -> Rational {
        self.mu.iter().sum()
    }

    pub fn integral_components(&self) -> Vec<usize> {
        (0..self.mu.len()).filter(|&i| is_integral(&self.mu[i])).collect()
    }

    pub fn is_cuspidal(&self) -> bool {
        self.integral_components().is_empty()
    }

    pub fn require_cuspidal(&self) -> Result<(), WeightError> {
        match self.integral_components().first() {
            Some(&i) => Err(WeightError::Integral(i, format_rational(&self.mu[i]))),
            None => Ok(()),
        }
    }

    pub fn with_component(&self, i: usize, v: Rational) -> ExponentVector {
        let mut mu = self.mu.clone();
        mu[i] = v;
        ExponentVector { mu }
    }

    /// μ + c ε_i.
    pub fn shifted(&self, i: usize, c: &Rational) -> ExponentVector {
        let mut mu = self.mu.clone();
        mu[i] += c;
        ExponentVector { mu }
    }

    /// μ + δ.
    pub fn at(&self, delta: &[i64]) -> Vec<Rational> {
        self.mu.iter().zip(delta).map(|(m, d)| m + int(*d)).collect()
    }

    /// Default exponents: (1/2, −1/2) for n = 1, (1/3, 1/3, −2/3) for n = 2,
    /// and (1/(n+1), …, 1/(n+1), 1/(n+1) − 1) in general.
    pub fn default_for(n: usize) -> ExponentVector {
        let c = Rational::new(1.into(), ((n + 1) as i64).into());
        let mut mu = vec![c.clone(); n + 1];
        mu[n] = c - int(1);
        if n == 1 {
            mu = vec![Rational::new(1.into(), 2.into()), Rational::new((-1).into(), 2.into())];
        }
        ExponentVector { mu }
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mu.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for ExponentVector {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mu = s
            .split(',')
            .map(|p| parse_rational(p.trim()).map_err(|e| WeightError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        ExponentVector::new(mu)
    }
}

/// How u = log(t_0⋯t_n) is acted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogAction {
    /// Lie derivative: E_ij(u) = t_i / t_j.
    Standard,
    /// sl(2) with |μ| = −1: X = E_01 ignores u, Y = E_10 gains u^{p−1} ⊗ X^{−1}.
    Exceptional,
}

/// Ambient basis key: log power p, form indices I (sorted) and optional
/// natural-module index l.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmbientKey {
    pub p: usize,
    pub forms: Vec<usize>,
    pub vector: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Fiber {
    /// The i_E-kernel, the same at every weight.
    Forms,
    /// Closed forms ker d inside Ω^k.
    Closed,
}

#[derive(Debug, Clone)]
pub struct WindowModule {
    mu: ExponentVector,
    radius: usize,
    form_degree: usize,
    log_degree: usize,
    natural: bool,
    action: LogAction,
    fiber: Fiber,
    ambient: Vec<AmbientKey>,
    index: HashMap<AmbientKey, usize>,
    pub(crate) forms_space: Subspace,
    weights: Vec<Shift>,
}

/// All δ ∈ ℤ^{n+1} with Σδ = 0 and max |δ_i| ≤ radius, lexicographically sorted.
pub fn window_weights(n: usize, radius: usize) -> Vec<Shift> {
    let r = radius as i64;
    let mut out = Vec::new();
    let mut cur = vec![0i64; n + 1];
    fn rec(i: usize, n: usize, r: i64, sum: i64, cur: &mut Vec<i64>, out: &mut Vec<Shift>) {
        if i == n {
            if sum.abs() <= r {
                cur[n] = -sum;
                out.push(cur.clone());
            }
            return;
        }
        // the remaining n − i coordinates can absorb at most (n − i)·r
        let slack = (n - i) as i64 * r;
        for v in -r..=r {
            if (sum + v).abs() <= slack {
                cur[i] = v;
                rec(i + 1, n, r, sum + v, cur, out);
            }
        }
    }
    rec(0, n, r, 0, &mut cur, &mut out);
    out
}

/// δ + e_i − e_j.
pub fn root_shift(delta: &[i64], i: usize, j: usize) -> Shift {
    let mut d = delta.to_vec();
    d[i] += 1;
    d[j] -= 1;
    d
}

fn max_abs(delta: &[i64]) -> i64 {
    delta.iter().map(|d| d.abs()).max().unwrap_or(0)
}

/// Sign and sorted result of replacing `j` by `i` in the sorted index list.
pub(crate) fn substitute(set: &[usize], j: usize, i: usize) -> Option<(Vec<usize>, i64)> {
    let pos = set.iter().position(|&s| s == j)?;
    if set.contains(&i) {
        return None;
    }
    let mut seq = set.to_vec();
    seq[pos] = i;
    let mut inversions = 0;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inversions += 1;
            }
        }
    }
    seq.sort_unstable();
    Some((seq, if inversions % 2 == 0 { 1 } else { -1 }))
}

impl WindowModule {
    fn assemble(
        mu: ExponentVector,
        radius: usize,
        form_degree: usize,
        log_degree: usize,
        natural: bool,
        action: LogAction,
    ) -> WindowModule {
        let n = mu.n();
        let subsets = form_subsets(n, form_degree);
        let mut ambient = Vec::new();
        for p in 0..=log_degree {
            for s in &subsets {
                if natural {
                    for l in 0..=n {
                        ambient.push(AmbientKey { p, forms: s.clone(), vector: Some(l) });
                    }
                } else {
                    ambient.push(AmbientKey { p, forms: s.clone(), vector: None });
                }
            }
        }
        let index = ambient.iter().cloned().enumerate().map(|(a, k)| (k, a)).collect();
        // i_E acts on the form part only and does not see exponents
        let contraction = contraction_matrix(n, form_degree);
        let forms_space = if form_degree == 0 {
            Subspace::full(ambient.len())
        } else {
            let per = Subspace::kernel_of(&contraction);
            let mut vecs = Vec::new();
            let width = if natural { n + 1 } else { 1 };
            for p in 0..=log_degree {
                for v in per.basis() {
                    for l in 0..width {
                        let mut full = vec![Rational::zero(); ambient.len()];
                        for (s, c) in v.iter().enumerate() {
                            full[(p * subsets.len() + s) * width + l] = c.clone();
                        }
                        vecs.push(full);
                    }
                }
            }
            Subspace::span(ambient.len(), &vecs)
        };
        let weights = window_weights(n, radius);
        WindowModule {
            mu,
            radius,
            form_degree,
            log_degree,
            natural,
            action,
            fiber: Fiber::Forms,
            ambient,
            index,
            forms_space,
            weights,
        }
    }

    /// F_μ: span of t^{μ+δ}.
    pub fn functions(mu: &ExponentVector, radius: usize) -> WindowModule {
        Self::assemble(mu.clone(), radius, 0, 0, false, LogAction::Standard)
    }

    /// Ω^k(μ) without the |μ| = 0 and cuspidality checks.
    pub fn forms_unchecked(mu: &ExponentVector, k: usize, radius: usize) -> Result<WindowModule, WeightError> {
        if k > mu.n() + 1 {
            return Err(WeightError::FormDegree { k, max: mu.n() + 1 });
        }
        Ok(Self::assemble(mu.clone(), radius, k, 0, false, LogAction::Standard))
    }

    /// u^0, …, u^m times the module; the exceptional sl(2) action is used
    /// automatically when n = 1 and |μ| = −1.
    pub fn log_extend(&self, m: usize) -> WindowModule {
        let exceptional = self.mu.n() == 1 && self.mu.total() == int(-1) && self.form_degree == 0 && !self.natural;
        self.log_extend_with(m, if exceptional { LogAction::Exceptional } else { LogAction::Standard })
    }

    pub fn log_extend_with(&self, m: usize, action: LogAction) -> WindowModule {
        let mut out = Self::assemble(self.mu.clone(), self.radius, self.form_degree, m, self.natural, action);
        out.fiber = self.fiber.clone();
        out
    }

    /// M ⊗ V for the natural (n+1)-dimensional module; weights are shifted
    /// by ε_0 so the exponent of the tensor product is μ + ε_0.
    pub fn natural_tensor(&self) -> Result<WindowModule, WeightError> {
        if self.natural || self.fiber != Fiber::Forms {
            return Err(WeightError::Unsupported("tensoring is supported once, on Ω^k or F_μ"));
        }
        Ok(Self::assemble(
            self.mu.shifted(0, &Rational::one()),
            self.radius,
            self.form_degree,
            self.log_degree,
            true,
            self.action,
        ))
    }

    /// The same module on a different window.
    pub fn with_radius(&self, radius: usize) -> WindowModule {
        let mut m = self.clone();
        m.radius = radius;
        m.weights = window_weights(self.n(), radius);
        m
    }

    pub(crate) fn closed(mut self) -> WindowModule {
        self.fiber = Fiber::Closed;
        self
    }

    pub fn mu(&self) -> &ExponentVector {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.mu.n()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    pub fn log_degree(&self) -> usize {
        self.log_degree
    }

    pub fn is_tensor(&self) -> bool {
        self.natural
    }

    pub fn action(&self) -> LogAction {
        self.action
    }

    pub fn ambient(&self) -> &[AmbientKey] {
        &self.ambient
    }

    pub fn weights(&self) -> &[Shift] {
        &self.weights
    }

    pub fn contains(&self, delta: &[i64]) -> bool {
        max_abs(delta) <= self.radius as i64
    }

    /// Interior at the given depth: every shift by at most `depth` roots
    /// stays inside the window.
    pub fn is_interior(&self, delta: &[i64], depth: usize) -> bool {
        max_abs(delta) + depth as i64 <= self.radius as i64
    }

    pub fn interior_weights(&self, depth: usize) -> Vec<Shift> {
        self.weights.iter().filter(|d| self.is_interior(d, depth)).cloned().collect()
    }

    /// Total weight ν = μ + δ.
    pub fn total_weight(&self, delta: &[i64]) -> Vec<Rational> {
        self.mu.at(delta)
    }

    /// Exponent λ of the monomial carried by `key` at shift δ.
    pub fn exponent(&self, key: &AmbientKey, delta: &[i64]) -> Vec<Rational> {
        let mut lam = self.total_weight(delta);
        for &i in &key.forms {
            lam[i] -= int(1);
        }
        if let Some(l) = key.vector {
            lam[l] -= int(1);
        }
        lam
    }

    /// The fiber at δ as a subspace of the ambient coordinates.
    pub fn fiber(&self, delta: &[i64]) -> Subspace {
        match self.fiber {
            Fiber::Forms => self.forms_space.clone(),
            Fiber::Closed => forms::closed_fiber(self, delta),
        }
    }

    pub fn dim(&self, delta: &[i64]) -> usize {
        self.fiber(delta).dim()
    }

    /// E_ij (i ≠ j) on the ambient space at shift δ.
    pub fn ambient_root_vector(&self, i: usize, j: usize, delta: &[i64]) -> Matrix {
        assert_ne!(i, j, "root vectors need i ≠ j");
        let d = self.ambient.len();
        let mut m = Matrix::zeros(d, d);
        for (a, key) in self.ambient.iter().enumerate() {
            let lam = self.exponent(key, delta);
            *m.get_mut(a, a) += &lam[j];
            if key.p > 0 {
                let lower = AmbientKey { p: key.p - 1, ..key.clone() };
                let b = self.index[&lower];
                match self.action {
                    LogAction::Standard => *m.get_mut(b, a) += int(key.p as i64),
                    LogAction::Exceptional => {
                        if (i, j) == (1, 0) {
                            // X^{-1} t^λ = t^{λ−e_0+e_1} / (λ_1 + 1)
                            *m.get_mut(b, a) += (&lam[1] + int(1)).recip();
                        }
                    }
                }
            }
            if let Some((set, sign)) = substitute(&key.forms, j, i) {
                let b = self.index[&AmbientKey { forms: set, ..key.clone() }];
                *m.get_mut(b, a) += int(sign);
            }
            if key.vector == Some(j) {
                let b = self.index[&AmbientKey { vector: Some(i), ..key.clone() }];
                *m.get_mut(b, a) += int(1);
            }
        }
        m
    }

    /// E_ii of gl(n+1) on the ambient space, including the u-derivative.
    pub fn ambient_diagonal(&self, i: usize, delta: &[i64]) -> Matrix {
        let nu = self.total_weight(delta);
        let d = self.ambient.len();
        let mut m = Matrix::scalar(d, &nu[i]);
        if self.action == LogAction::Standard {
            for (a, key) in self.ambient.iter().enumerate() {
                if key.p > 0 {
                    let b = self.index[&AmbientKey { p: key.p - 1, ..key.clone() }];
                    *m.get_mut(b, a) += int(key.p as i64);
                }
            }
        }
        m
    }

    /// Matrix of an ambient operator between fibers, in fiber coordinates.
    pub fn restrict(&self, ambient_op: &Matrix, src: &[i64], dst: &[i64]) -> Matrix {
        let (fs, ft) = (self.fiber(src), self.fiber(dst));
        let cols: Vec<Vec<Rational>> = fs
            .basis()
            .iter()
            .map(|v| {
                let w = ambient_op.mul_vec(v);
                debug_assert!(ft.contains(&w), "operator leaves the fiber");
                ft.coordinates(&w)
            })
            .collect();
        Matrix::from_columns(ft.dim(), &cols)
    }

    /// E_ij: M_δ → M_{δ+e_i−e_j} in fiber coordinates.
    pub fn root_vector(&self, i: usize, j: usize, delta: &[i64]) -> Matrix {
        let a = self.ambient_root_vector(i, j, delta);
        self.restrict(&a, delta, &root_shift(delta, i, j))
    }

    /// Traceless Cartan element E_ii − E/(n+1), a scalar on each weight space.
    pub fn cartan(&self, i: usize, delta: &[i64]) -> Rational {
        let nu = self.total_weight(delta);
        let total: Rational = nu.iter().sum();
        &nu[i] - total / int(self.n() as i64 + 1)
    }

    /// Quadratic Casimir Σ_{i≠j} E_ij E_ji + Σ_i (E_ii − E/(n+1))².
    pub fn casimir(&self, delta: &[i64]) -> Matrix {
        let n = self.n();
        let dim = self.dim(delta);
        let mut c = Matrix::zeros(dim, dim);
        for i in 0..=n {
            for j in 0..=n {
                if i == j {
                    continue;
                }
                let mid = root_shift(delta, j, i);
                c = c.add(&self.root_vector(i, j, &mid).mul(&self.root_vector(j, i, delta)));
            }
            let h = self.cartan(i, delta);
            c = c.add(&Matrix::scalar(dim, &(&h * &h)));
        }
        c
    }

    /// z = Σ_{i≥1} E_ii − n E_00 in fiber coordinates.
    pub fn z_operator(&self, delta: &[i64]) -> Matrix {
        let n = self.n();
        let mut z = self.ambient_diagonal(0, delta).scale(&int(-(n as i64)));
        for i in 1..=n {
            z = z.add(&self.ambient_diagonal(i, delta));
        }
        self.restrict(&z, delta, delta)
    }
}

/// A weight-homogeneous operator: one block per source weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub shift: Shift,
    pub blocks: BTreeMap<Shift, Matrix>,
}

impl OperatorMatrix {
    pub fn target(&self, src: &[i64]) -> Shift {
        src.iter().zip(&self.shift).map(|(a, b)| a + b).collect()
    }
}

/// E_ij on every window weight whose image stays in the window.
pub fn act_root_vector(m: &WindowModule, i: usize, j: usize) -> OperatorMatrix {
    let n = m.n();
    let mut shift = vec![0; n + 1];
    shift[i] += 1;
    shift[j] -= 1;
    let blocks = m
        .weights()
        .iter()
        .filter(|d| m.contains(&root_shift(d, i, j)))
        .map(|d| (d.clone(), m.root_vector(i, j, d)))
        .collect();
    OperatorMatrix { shift, blocks }
}

/// Quadratic Casimir on every window weight.
pub fn casimir_matrix(m: &WindowModule) -> OperatorMatrix {
    let n = m.n();
    OperatorMatrix {
        shift: vec![0; n + 1],
        blocks: m.weights().iter().map(|d| (d.clone(), m.casimir(d))).collect(),
    }
}

/// Highest-weight Casimir eigenvalue Σ_{i<j}(Λ_i − Λ_j) + Σ_i (Λ_i − |Λ|/(n+1))².
pub fn highest_weight_casimir(lambda: &[Rational]) -> Rational {
    let k = lambda.len();
    let total: Rational = lambda.iter().sum();
    let mean = total / int(k as i64);
    let mut s = Rational::zero();
    for i in 0..k {
        for j in i + 1..k {
            s += &lambda[i] - &lambda[j];
        }
        let c = &lambda[i] - &mean;
        s += &c * &c;
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspidalFailure {
    pub i: usize,
    pub j: usize,
    pub weight: Shift,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspidalReport {
    pub blocks_checked: usize,
    pub failures: Vec<CuspidalFailure>,
}

impl CuspidalReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every root vector block at every interior weight must be square and invertible.
pub fn check_cuspidal(m: &WindowModule) -> CuspidalReport {
    let n = m.n();
    let mut failures = Vec::new();
    let mut checked = 0;
    for d in m.interior_weights(1) {
        for i in 0..=n {
            for j in 0..=n {
                if i == j {
                    continue;
                }
                checked += 1;
                let b = m.root_vector(i, j, &d);
                if !b.is_square() || !b.is_invertible() {
                    failures.push(CuspidalFailure { i, j, weight: d.clone() });
                }
            }
        }
    }
    CuspidalReport { blocks_checked: checked, failures }
}

/// Interior weights where E_ij must fail for F_μ: those with ν_j = 0.
pub fn predicted_cuspidal_failures(m: &WindowModule) -> Vec<CuspidalFailure> {
    let n = m.n();
    let mut out = Vec::new();
    for d in m.interior_weights(1) {
        let nu = m.total_weight(&d);
        for i in 0..=n {
            for j in 0..=n {
                if i != j && nu[j].is_zero() {
                    out.push(CuspidalFailure { i, j, weight: d.clone() });
                }
            }
        }
    }
    out
}

/// z-eigenvalue of a basis vector, computed and predicted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZEntry {
    pub weight: Shift,
    pub index: usize,
    pub k: i64,
    /// `None` when z does not act diagonally on this basis vector.
    pub computed: Option<Rational>,
    pub predicted: Rational,
}

/// z-grading of an F_μ window: the eigenvalue on t^λ is |μ| + (n+1)(k − μ_0)
/// with k = μ_0 − λ_0.
pub fn z_grading(m: &WindowModule) -> Result<Vec<ZEntry>, WeightError> {
    let n = m.n();
    if n < 2 {
        return Err(WeightError::Rank(2));
    }
    if m.form_degree() != 0 || m.is_tensor() {
        return Err(WeightError::Unsupported("z-grading is defined here for F_μ windows"));
    }
    let total = m.mu().total();
    let mut out = Vec::new();
    for d in m.weights() {
        let z = m.z_operator(d);
        let k = -d[0];
        let predicted = &total + int(n as i64 + 1) * (int(k) - m.mu().get(0));
        for idx in 0..z.rows() {
            let off_diagonal = (0..z.cols()).any(|c| c != idx && !z.get(idx, c).is_zero());
            let computed = (!off_diagonal).then(|| z.get(idx, idx).clone());
            out.push(ZEntry { weight: d.clone(), index: idx, k, computed, predicted: predicted.clone() });
        }
    }
    Ok(out)
}
