//! Weight-homogeneous 1-cocycles c: sl(n+1) → Hom(M, N) on window modules,
//! coboundaries c(g) = [g, φ], and window dimensions of H¹.
//!
//! g acts on Hom(M, N) by [g, f] = ρ_N(g) f − f ρ_M(g). A cocycle is stored by
//! its values on root vectors E_ij; its value on E_ii − E_jj is the scalar
//! γ_i − γ_j, which vanishes in the relative setting.

use crate::linalg::sparse::{self, SparseRow};
use crate::linalg::{int, Matrix, Rational};
use crate::weight_engine::{root_shift, OperatorMatrix, Shift, WindowModule};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// A root vector E_ij, i ≠ j.
pub type Root = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// c vanishes on the Cartan subalgebra.
    Relative,
    /// c is a constant scalar on the Cartan subalgebra.
    Generalized,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("modules are not comparable: {0}")]
    Incompatible(&'static str),
    #[error("{0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub mode: Mode,
    pub roots: BTreeMap<Root, OperatorMatrix>,
    /// γ_0, …, γ_n with c(E_ii − E_jj) = (γ_i − γ_j)·Id.
    pub cartan: Vec<Rational>,
}

/// Chevalley generators e_i = E_{i−1,i} and f_i = E_{i,i−1}, i = 1..n.
pub fn chevalley_generators(n: usize) -> Vec<Root> {
    (1..=n).flat_map(|i| [(i - 1, i), (i, i - 1)]).collect()
}

pub fn all_roots(n: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

fn root_weight(n: usize, r: Root) -> Shift {
    root_shift(&vec![0; n + 1], r.0, r.1)
}

fn operator<F>(m: &WindowModule, shift: Shift, mut block: F) -> OperatorMatrix
where
    F: FnMut(&Shift, &Shift) -> Matrix,
{
    let mut blocks = BTreeMap::new();
    for d in m.weights() {
        let t: Shift = d.iter().zip(&shift).map(|(a, b)| a + b).collect();
        if m.contains(&t) {
            blocks.insert(d.clone(), block(d, &t));
        }
    }
    OperatorMatrix { shift, blocks }
}

/// Multiplication by t_i/t_j (a shift of the exponent by e_i − e_j).
pub fn multiplication_operator(m: &WindowModule, r: Root) -> OperatorMatrix {
    let id = Matrix::identity(m.ambient().len());
    operator(m, root_weight(m.n(), r), |d, t| m.restrict(&id, d, t))
}

/// φ(t^λ) = f(λ) t^λ on a module of functions.
pub fn diagonal_operator<F>(m: &WindowModule, f: F) -> OperatorMatrix
where
    F: Fn(&[Rational]) -> Rational,
{
    operator(m, vec![0; m.n() + 1], |d, _| Matrix::scalar(m.dim(d), &f(&m.total_weight(d))))
}

/// ζ(λ_0) with ζ(λ_0) − ζ(λ_0 − 1) = φ(λ_0), normalised to vanish at the
/// lowest λ_0 of the window. Then [E_i0, ζ] = E_i0 ∘ φ.
pub fn integrate_first_coordinate<F>(m: &WindowModule, phi: F) -> OperatorMatrix
where
    F: Fn(&Rational) -> Rational,
{
    let r = m.radius() as i64;
    let mu0 = m.mu().get(0).clone();
    let mut zeta = BTreeMap::new();
    let mut acc = Rational::zero();
    zeta.insert(-r, acc.clone());
    for k in -r + 1..=r {
        acc += phi(&(&mu0 + int(k)));
        zeta.insert(k, acc.clone());
    }
    operator(m, vec![0; m.n() + 1], |d, _| Matrix::scalar(m.dim(d), &zeta[&d[0]]))
}

fn require_functions(m: &WindowModule) -> Result<(), CohomologyError> {
    if m.form_degree() != 0 || m.is_tensor() || m.log_degree() != 0 {
        return Err(CohomologyError::Unsupported("this cocycle is defined on F_μ windows"));
    }
    Ok(())
}

impl Cocycle {
    pub fn zero(m: &WindowModule, roots: &[Root], mode: Mode) -> Cocycle {
        let roots = roots
            .iter()
            .map(|&r| (r, operator(m, root_weight(m.n(), r), |d, t| Matrix::zeros(m.dim(t), m.dim(d)))))
            .collect();
        Cocycle { mode, roots, cartan: vec![Rational::zero(); m.n() + 1] }
    }

    /// c(E_ij) = b_ij t_i/t_j for every root, c(Cartan) = 0.
    pub fn multiplication<F>(m: &WindowModule, b: F) -> Cocycle
    where
        F: Fn(usize, usize) -> Rational,
    {
        let roots = all_roots(m.n())
            .into_iter()
            .map(|r| {
                let mut op = multiplication_operator(m, r);
                let c = b(r.0, r.1);
                for block in op.blocks.values_mut() {
                    *block = block.scale(&c);
                }
                (r, op)
            })
            .collect();
        Cocycle { mode: Mode::Relative, roots, cartan: vec![Rational::zero(); m.n() + 1] }
    }

    /// sl(2): c(X) = 0, c(Y) = b X^{−1} with X^{−1} t^λ = t^{λ−e_0+e_1} / (λ_1 + 1).
    pub fn inverse_root(m: &WindowModule, b: &Rational) -> Result<Cocycle, CohomologyError> {
        require_functions(m)?;
        if m.n() != 1 {
            return Err(CohomologyError::Unsupported("X^{-1} cocycle is defined for sl(2)"));
        }
        let y = operator(m, root_weight(1, (1, 0)), |d, _| {
            let lam = m.total_weight(d);
            Matrix::scalar(1, &(b / (&lam[1] + int(1))))
        });
        let mut c = Cocycle::zero(m, &[(0, 1)], Mode::Relative);
        c.roots.insert((1, 0), y);
        Ok(c)
    }

    /// c(g) = g(u) for u = Σ u_i log t_i: c(E_ij) = u_j t_i/t_j, c(E_ii − E_jj) = u_i − u_j.
    pub fn logarithmic(m: &WindowModule, u: &[Rational]) -> Cocycle {
        let mut c = Cocycle::multiplication(m, |_, j| u[j].clone());
        c.mode = Mode::Generalized;
        c.cartan = u.to_vec();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.roots.values().all(|op| op.blocks.values().all(Matrix::is_zero)) && self.cartan_is_zero()
    }

    fn cartan_is_zero(&self) -> bool {
        self.cartan.iter().all(|g| *g == self.cartan[0])
    }

    /// Sum of two cocycles on the same roots.
    pub fn add(&self, other: &Cocycle) -> Cocycle {
        let mut out = self.clone();
        for (r, op) in &mut out.roots {
            if let Some(o) = other.roots.get(r) {
                for (d, b) in &mut op.blocks {
                    if let Some(ob) = o.blocks.get(d) {
                        *b = b.add(ob);
                    }
                }
            }
        }
        for (g, o) in out.cartan.iter_mut().zip(&other.cartan) {
            *g += o;
        }
        if other.mode == Mode::Generalized {
            out.mode = Mode::Generalized;
        }
        out
    }
}

/// c(g) = [g, φ] for a weight-preserving φ, on every root vector.
pub fn coboundary(phi: &OperatorMatrix, m: &WindowModule) -> Cocycle {
    let n = m.n();
    let roots = all_roots(n)
        .into_iter()
        .map(|r| {
            let mut blocks = BTreeMap::new();
            for d in m.weights() {
                let t = root_shift(d, r.0, r.1);
                if let (Some(p0), Some(p1)) = (phi.blocks.get(d), phi.blocks.get(&t)) {
                    let g = m.root_vector(r.0, r.1, d);
                    blocks.insert(d.clone(), g.mul(p0).sub(&p1.mul(&g)));
                }
            }
            (r, OperatorMatrix { shift: root_weight(n, r), blocks })
        })
        .collect();
    Cocycle { mode: Mode::Relative, roots, cartan: vec![Rational::zero(); n + 1] }
}

// ---------------------------------------------------------------------------
// relations

#[derive(Debug, Clone)]
enum Word {
    Gen(Root),
    Br(Box<Word>, Box<Word>),
}

impl Word {
    fn br(a: Word, b: Word) -> Word {
        Word::Br(Box::new(a), Box::new(b))
    }

    fn weight(&self, n: usize) -> Shift {
        match self {
            Word::Gen(r) => root_weight(n, *r),
            Word::Br(a, b) => a.weight(n).iter().zip(b.weight(n)).map(|(x, y)| x + y).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Rhs {
    Zero,
    Root(Root, i64),
    /// E_ii − E_jj.
    Cartan(usize, usize),
}

/// [E_ij, E_kl] = δ_jk E_il − δ_li E_kj.
fn bracket(a: Root, b: Root) -> Rhs {
    let ((i, j), (k, l)) = (a, b);
    match (j == k, l == i) {
        (true, true) => Rhs::Cartan(i, j),
        (true, false) => Rhs::Root((i, l), 1),
        (false, true) => Rhs::Root((k, j), -1),
        (false, false) => Rhs::Zero,
    }
}

/// Brackets among the given roots whose right side is known, plus the Serre
/// relations among Chevalley generators.
fn relations(n: usize, roots: &[Root]) -> Vec<(Word, Rhs)> {
    let mut out = Vec::new();
    for (x, &a) in roots.iter().enumerate() {
        for &b in &roots[x + 1..] {
            let rhs = bracket(a, b);
            if let Rhs::Root(r, _) = rhs {
                if !roots.contains(&r) {
                    continue;
                }
            }
            out.push((Word::br(Word::Gen(a), Word::Gen(b)), rhs));
        }
    }
    for i in 1..=n {
        for j in [i.wrapping_sub(1), i + 1] {
            if j == 0 || j > n {
                continue;
            }
            for (a, b) in [((i - 1, i), (j - 1, j)), ((i, i - 1), (j, j - 1))] {
                if roots.contains(&a) && roots.contains(&b) {
                    out.push((Word::br(Word::Gen(a), Word::br(Word::Gen(a), Word::Gen(b))), Rhs::Zero));
                }
            }
        }
    }
    out
}

/// Values c(word) can take: concrete matrices or matrices of linear forms.
trait Block: Sized {
    fn lmul(m: &Matrix, b: &Self) -> Self;
    fn rmul(b: &Self, m: &Matrix) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
}

impl Block for Matrix {
    fn lmul(m: &Matrix, b: &Self) -> Self {
        m.mul(b)
    }
    fn rmul(b: &Self, m: &Matrix) -> Self {
        b.mul(m)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
}

type Lin = BTreeMap<usize, Rational>;

fn lin_axpy(acc: &mut Lin, c: &Rational, x: &Lin) {
    if c.is_zero() {
        return;
    }
    for (k, v) in x {
        let e = acc.entry(*k).or_insert_with(Rational::zero);
        *e += c * v;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

#[derive(Debug, Clone)]
struct LinMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Lin>,
}

impl LinMatrix {
    fn at(&self, r: usize, c: usize) -> &Lin {
        &self.data[r * self.cols + c]
    }

    fn zip(&self, o: &Self, sign: &Rational) -> Self {
        let mut data = self.data.clone();
        for (a, b) in data.iter_mut().zip(&o.data) {
            lin_axpy(a, sign, b);
        }
        LinMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Block for LinMatrix {
    fn lmul(m: &Matrix, b: &Self) -> Self {
        let mut data = vec![Lin::new(); m.rows() * b.cols];
        for (r, k, v) in m.nonzero_entries() {
            for c in 0..b.cols {
                lin_axpy(&mut data[r * b.cols + c], v, b.at(k, c));
            }
        }
        LinMatrix { rows: m.rows(), cols: b.cols, data }
    }
    fn rmul(b: &Self, m: &Matrix) -> Self {
        let mut data = vec![Lin::new(); b.rows * m.cols()];
        for (k, c, v) in m.nonzero_entries() {
            for r in 0..b.rows {
                lin_axpy(&mut data[r * m.cols() + c], v, b.at(r, k));
            }
        }
        LinMatrix { rows: b.rows, cols: m.cols(), data }
    }
    fn plus(&self, o: &Self) -> Self {
        self.zip(o, &Rational::one())
    }
    fn minus(&self, o: &Self) -> Self {
        self.zip(o, &-Rational::one())
    }
}

struct Eval<C> {
    rho_src: Matrix,
    rho_dst: Matrix,
    c: C,
}

/// Root-vector blocks of a source and target module, memoised.
struct Context<'a> {
    src: &'a WindowModule,
    dst: &'a WindowModule,
    cache: std::cell::RefCell<HashMap<(bool, Root, Shift), Matrix>>,
}

impl<'a> Context<'a> {
    fn new(src: &'a WindowModule, dst: &'a WindowModule) -> Self {
        Context { src, dst, cache: Default::default() }
    }

    fn rho(&self, target: bool, r: Root, d: &Shift) -> Matrix {
        let key = (target, r, d.clone());
        if let Some(m) = self.cache.borrow().get(&key) {
            return m.clone();
        }
        let module = if target { self.dst } else { self.src };
        let m = module.root_vector(r.0, r.1, d);
        self.cache.borrow_mut().insert(key, m.clone());
        m
    }

    fn eval<C: Block, F>(&self, w: &Word, d: &Shift, c: &F) -> Option<Eval<C>>
    where
        F: Fn(Root, &Shift) -> Option<C>,
    {
        let n = self.src.n();
        match w {
            Word::Gen(r) => {
                let t = root_shift(d, r.0, r.1);
                if !self.src.contains(d) || !self.src.contains(&t) {
                    return None;
                }
                Some(Eval { rho_src: self.rho(false, *r, d), rho_dst: self.rho(true, *r, d), c: c(*r, d)? })
            }
            Word::Br(a, b) => {
                let shift = |w: &Word| -> Shift { d.iter().zip(w.weight(n)).map(|(x, y)| x + y).collect() };
                let eb = self.eval(b, d, c)?;
                let ea = self.eval(a, d, c)?;
                let a_b = self.eval(a, &shift(b), c)?;
                let b_a = self.eval(b, &shift(a), c)?;
                let rho_src = a_b.rho_src.mul(&eb.rho_src).sub(&b_a.rho_src.mul(&ea.rho_src));
                let rho_dst = a_b.rho_dst.mul(&eb.rho_dst).sub(&b_a.rho_dst.mul(&ea.rho_dst));
                // [ρA, cB] − [ρB, cA]
                let c = C::lmul(&a_b.rho_dst, &eb.c)
                    .minus(&C::rmul(&b_a.c, &ea.rho_src))
                    .minus(&C::lmul(&b_a.rho_dst, &ea.c))
                    .plus(&C::rmul(&a_b.c, &eb.rho_src));
                Some(Eval { rho_src, rho_dst, c })
            }
        }
    }
}

/// True iff c satisfies the cocycle identity, as exact matrices, on every
/// weight where all blocks involved lie in the window.
pub fn check_cocycle(c: &Cocycle, m: &WindowModule) -> bool {
    if c.mode == Mode::Relative && !c.cartan_is_zero() {
        return false;
    }
    let roots: Vec<Root> = c.roots.keys().copied().collect();
    let ctx = Context::new(m, m);
    let value = |r: Root, d: &Shift| c.roots.get(&r)?.blocks.get(d).cloned();
    for (word, rhs) in relations(m.n(), &roots) {
        for d in m.weights() {
            let Some(e) = ctx.eval::<Matrix, _>(&word, d, &value) else { continue };
            let expected = match &rhs {
                Rhs::Zero => Matrix::zeros(e.c.rows(), e.c.cols()),
                Rhs::Root(r, sign) => match value(*r, d) {
                    Some(b) => b.scale(&int(*sign)),
                    None => continue,
                },
                Rhs::Cartan(i, j) => Matrix::scalar(e.c.rows(), &(&c.cartan[*i] - &c.cartan[*j])),
            };
            if e.c != expected {
                return false;
            }
        }
    }
    true
}

/// A weight-preserving φ with c(g) = [g, φ] on every interior block, if any.
pub fn trivializing_map(c: &Cocycle, m: &WindowModule) -> Option<OperatorMatrix> {
    if !c.cartan_is_zero() {
        return None;
    }
    let mut offset = BTreeMap::new();
    let mut ncols = 0;
    for d in m.weights() {
        offset.insert(d.clone(), ncols);
        ncols += m.dim(d) * m.dim(d);
    }
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut rhs = Vec::new();
    for (&r, op) in &c.roots {
        for (d, block) in &op.blocks {
            if !m.is_interior(d, 1) {
                continue;
            }
            let t = root_shift(d, r.0, r.1);
            let g = m.root_vector(r.0, r.1, d);
            let (ds, dt) = (m.dim(d), m.dim(&t));
            // (g φ_d − φ_t g)[a][b] = Σ_k g[a][k] φ_d[k][b] − Σ_k φ_t[a][k] g[k][b]
            for a in 0..dt {
                for b in 0..ds {
                    let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                    for k in 0..ds {
                        let v = g.get(a, k);
                        if !v.is_zero() {
                            *row.entry(offset[d] + k * ds + b).or_insert_with(Rational::zero) += v;
                        }
                    }
                    for k in 0..dt {
                        let v = g.get(k, b);
                        if !v.is_zero() {
                            *row.entry(offset[&t] + a * dt + k).or_insert_with(Rational::zero) -= v;
                        }
                    }
                    rows.push(row.into_iter().filter(|(_, v)| !v.is_zero()).collect());
                    rhs.push(block.get(a, b).clone());
                }
            }
        }
    }
    let x = sparse::solve(ncols, &rows, &rhs)?;
    let blocks = m
        .weights()
        .iter()
        .map(|d| {
            let s = m.dim(d);
            let o = offset[d];
            let vals: Vec<Vec<Rational>> = (0..s).map(|a| x[o + a * s..o + (a + 1) * s].to_vec()).collect();
            (d.clone(), Matrix::from_rows_shaped(s, s, vals))
        })
        .collect();
    Some(OperatorMatrix { shift: vec![0; m.n() + 1], blocks })
}

/// The extension of M by M defined by c splits iff c = [·, φ] for some φ.
pub fn self_extension_nontrivial(c: &Cocycle, m: &WindowModule) -> bool {
    trivializing_map(c, m).is_none()
}

// ---------------------------------------------------------------------------
// H¹ on a window

/// Cocycle equations and coboundaries in the coordinates of the unknown blocks.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub unknowns: usize,
    pub equations: Vec<SparseRow>,
    pub coboundaries: Vec<SparseRow>,
}

impl ConstraintSystem {
    /// True iff the vector (given sparsely) solves every equation.
    pub fn satisfies(&self, v: &SparseRow) -> bool {
        let dense: HashMap<usize, &Rational> = v.iter().map(|(k, x)| (*k, x)).collect();
        self.equations.iter().all(|e| {
            let mut s = Rational::zero();
            for (k, a) in e {
                if let Some(x) = dense.get(k) {
                    s += a * *x;
                }
            }
            s.is_zero()
        })
    }

    /// Coordinate-format dump of the equation matrix.
    pub fn to_matrix_market(&self) -> String {
        let nnz: usize = self.equations.iter().map(Vec::len).sum();
        let mut s = String::from("%%MatrixMarket matrix coordinate rational general\n");
        let _ = writeln!(s, "{} {} {}", self.equations.len(), self.unknowns, nnz);
        for (r, row) in self.equations.iter().enumerate() {
            for (c, v) in row {
                let _ = writeln!(s, "{} {} {}", r + 1, c + 1, crate::linalg::format_rational(v));
            }
        }
        s
    }
}

fn aligned(src: &WindowModule, dst: &WindowModule) -> Result<(), CohomologyError> {
    if src.n() != dst.n() || src.radius() != dst.radius() {
        return Err(CohomologyError::Incompatible("rank and radius must agree"));
    }
    // equal h-weights at equal shifts: μ' − μ must be a multiple of (1, …, 1)
    let diff: Vec<Rational> =
        src.mu().components().iter().zip(dst.mu().components()).map(|(a, b)| b - a).collect();
    if diff.iter().any(|d| *d != diff[0]) {
        return Err(CohomologyError::Incompatible("weights of the two windows do not line up"));
    }
    Ok(())
}

/// Unknowns: blocks of c on Chevalley generators (and γ_1..γ_n in generalized
/// mode). Equations: the Serre presentation at every weight where all blocks
/// lie in the window. Coboundaries: [·, φ] for φ supported on the window.
pub fn constraint_system(src: &WindowModule, dst: &WindowModule, mode: Mode) -> Result<ConstraintSystem, CohomologyError> {
    aligned(src, dst)?;
    let same = std::ptr::eq(src, dst) || src.mu() == dst.mu();
    if mode == Mode::Generalized && !same {
        return Err(CohomologyError::Unsupported("generalized mode needs M = N"));
    }
    let n = src.n();
    let gens = chevalley_generators(n);
    let mut offset: HashMap<(Root, Shift), usize> = HashMap::new();
    let mut unknowns = 0;
    for &g in &gens {
        for d in src.weights() {
            let t = root_shift(d, g.0, g.1);
            if src.contains(&t) {
                offset.insert((g, d.clone()), unknowns);
                unknowns += dst.dim(&t) * src.dim(d);
            }
        }
    }
    let gamma0 = unknowns;
    if mode == Mode::Generalized {
        unknowns += n;
    }
    let gamma = |i: usize| -> Lin {
        // γ_0 is fixed to 0: only differences enter
        if i == 0 {
            Lin::new()
        } else {
            Lin::from([(gamma0 + i - 1, Rational::one())])
        }
    };

    let ctx = Context::new(src, dst);
    let value = |g: Root, d: &Shift| -> Option<LinMatrix> {
        let base = *offset.get(&(g, d.clone()))?;
        let (rows, cols) = (dst.dim(&root_shift(d, g.0, g.1)), src.dim(d));
        let data = (0..rows * cols).map(|k| Lin::from([(base + k, Rational::one())])).collect();
        Some(LinMatrix { rows, cols, data })
    };
    let mut equations = Vec::new();
    for (word, rhs) in relations(n, &gens) {
        for d in src.weights() {
            let Some(e) = ctx.eval::<LinMatrix, _>(&word, d, &value) else { continue };
            let mut c = e.c;
            match rhs {
                Rhs::Zero => {}
                Rhs::Root(..) => continue,
                Rhs::Cartan(i, j) => {
                    if mode == Mode::Generalized {
                        let mut g = gamma(i);
                        lin_axpy(&mut g, &-Rational::one(), &gamma(j));
                        for k in 0..c.rows.min(c.cols) {
                            let idx = k * c.cols + k;
                            lin_axpy(&mut c.data[idx], &-Rational::one(), &g);
                        }
                    }
                }
            }
            for entry in c.data {
                if !entry.is_empty() {
                    equations.push(entry.into_iter().collect());
                }
            }
        }
    }

    let mut coboundaries = Vec::new();
    for d in src.weights() {
        let (ds, dd) = (src.dim(d), dst.dim(d));
        for r in 0..dd {
            for c in 0..ds {
                // φ = unit matrix E_rc at weight d
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for &g in &gens {
                    if let Some(&base) = offset.get(&(g, d.clone())) {
                        // ρ_N(g)_d E_rc: column c holds column r of ρ_N(g)
                        let rho = ctx.rho(true, g, d);
                        for a in 0..rho.rows() {
                            let v = rho.get(a, r);
                            if !v.is_zero() {
                                *row.entry(base + a * ds + c).or_insert_with(Rational::zero) += v;
                            }
                        }
                    }
                    let prev: Shift = root_shift(d, g.1, g.0);
                    if let Some(&base) = offset.get(&(g, prev.clone())) {
                        // −E_rc ρ_M(g)_{d−α}: row r holds −(row c of ρ_M(g))
                        let rho = ctx.rho(false, g, &prev);
                        let cols = rho.cols();
                        for b in 0..cols {
                            let v = rho.get(c, b);
                            if !v.is_zero() {
                                *row.entry(base + r * cols + b).or_insert_with(Rational::zero) -= v;
                            }
                        }
                    }
                }
                let row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if !row.is_empty() {
                    coboundaries.push(row);
                }
            }
        }
    }
    Ok(ConstraintSystem { unknowns, equations, coboundaries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Dims {
    pub radius: usize,
    pub unknowns: usize,
    pub equation_rank: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_h1: usize,
}

/// dim H¹ of Hom(M, N) on the common window.
pub fn h1_between(src: &WindowModule, dst: &WindowModule, mode: Mode) -> Result<H1Dims, CohomologyError> {
    let sys = constraint_system(src, dst, mode)?;
    let equation_rank = sparse::rank(sys.unknowns, &sys.equations);
    let dim_cocycles = sys.unknowns - equation_rank;
    let dim_coboundaries = sparse::rank(sys.unknowns, &sys.coboundaries);
    if dim_coboundaries > dim_cocycles || !sys.coboundaries.iter().all(|b| sys.satisfies(b)) {
        return Err(CohomologyError::Unsupported("coboundaries failed the cocycle equations"));
    }
    Ok(H1Dims {
        radius: src.radius(),
        unknowns: sys.unknowns,
        equation_rank,
        dim_cocycles,
        dim_coboundaries,
        dim_h1: dim_cocycles - dim_coboundaries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub mode: Mode,
    pub per_radius: Vec<H1Dims>,
    /// The dimension is the same at every radius of the sweep.
    pub stable: bool,
}

impl CohomologyReport {
    /// The stable dimension, if the sweep stabilised.
    pub fn dim_h1(&self) -> Option<usize> {
        match (self.stable, self.per_radius.first()) {
            (true, Some(d)) => Some(d.dim_h1),
            _ => None,
        }
    }
}

/// dim H¹(sl(n+1), h; End M) (or its generalized version) over a sweep of radii.
pub fn h1_dimension<I>(m: &WindowModule, mode: Mode, radii: I) -> Result<CohomologyReport, CohomologyError>
where
    I: IntoIterator<Item = usize>,
{
    let mut per_radius = Vec::new();
    for r in radii {
        let w = m.with_radius(r);
        per_radius.push(h1_between(&w, &w, mode)?);
    }
    let stable = per_radius.windows(2).all(|p| p[0].dim_h1 == p[1].dim_h1);
    Ok(CohomologyReport { mode, per_radius, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight_engine::ExponentVector;

    #[test]
    fn bracket_table() {
        assert_eq!(bracket((0, 1), (1, 0)), Rhs::Cartan(0, 1));
        assert_eq!(bracket((0, 1), (1, 2)), Rhs::Root((0, 2), 1));
        assert_eq!(bracket((1, 2), (0, 1)), Rhs::Root((0, 2), -1));
        assert_eq!(bracket((0, 1), (2, 3)), Rhs::Zero);
    }

    #[test]
    fn serre_relations_present() {
        let rel = relations(2, &chevalley_generators(2));
        // 4 pairs with a known right side, 4 Serre words
        assert_eq!(rel.len(), 4 + 4);
    }

    #[test]
    fn sl2_counts() {
        let m = WindowModule::functions(&ExponentVector::default_for(1), 5);
        let d = h1_between(&m, &m, Mode::Relative).unwrap();
        assert_eq!((d.unknowns, d.equation_rank, d.dim_coboundaries, d.dim_h1), (20, 9, 10, 1));
    }
}
