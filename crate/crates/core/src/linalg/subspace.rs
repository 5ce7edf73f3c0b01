use super::{Matrix, Rational};
use num_traits::{One, Zero};

/// A subspace of Q^d stored as a reduced echelon basis (one row per basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &Matrix::identity(ambient).row_vectors())
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows_shaped(vectors.len(), ambient, vectors.to_vec());
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &Matrix) -> Self {
        Self::span(m.rows(), &m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an ambient × dim matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Reduces `v` modulo the subspace: the result vanishes on every pivot column.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wi, bi) in w.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *wi -= &f * bi;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis; `v` must lie in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert!(self.contains(v));
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Columns not used as pivots; the standard vectors there span the
    /// lexicographically first complement.
    pub fn complement_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Coordinates of the class of `v` in the quotient, relative to the
    /// standard complement.
    pub fn quotient_coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        let w = self.reduce(v);
        self.complement_columns().into_iter().map(|c| w[c].clone()).collect()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        // a ∈ Q^{dim self} with other.reduce(Σ a_i b_i) = 0
        let reduced: Vec<Vec<Rational>> = self.basis.iter().map(|b| other.reduce(b)).collect();
        let m = Matrix::from_columns(self.ambient, &reduced);
        let ker = m.kernel();
        let vecs: Vec<Vec<Rational>> = ker.iter().map(|a| self.combination(a)).collect();
        Self::span(self.ambient, &vecs)
    }

    pub fn combination(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// Image under `map` (target × ambient).
    pub fn image(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient);
        let v: Vec<Vec<Rational>> = self.basis.iter().map(|b| map.mul_vec(b)).collect();
        Self::span(map.rows(), &v)
    }

    /// {v : map v ∈ target}.
    pub fn preimage(map: &Matrix, target: &Subspace) -> Subspace {
        assert_eq!(map.rows(), target.ambient);
        let cols: Vec<Vec<Rational>> = map.columns().iter().map(|c| target.reduce(c)).collect();
        let m = Matrix::from_columns(map.rows(), &cols);
        Self::span(map.cols(), &m.kernel())
    }

    pub fn kernel_of(map: &Matrix) -> Subspace {
        Self::span(map.cols(), &map.kernel())
    }

    pub fn image_of(map: &Matrix) -> Subspace {
        Self::column_span(map)
    }
}

/// A linear relation R ⊆ A × B, stored as a subspace of A ⊕ B.
#[derive(Clone, Debug)]
pub struct LinearRelation {
    src: usize,
    dst: usize,
    space: Subspace,
}

impl LinearRelation {
    /// Graph {(v, f v)} of `f` (dst × src).
    pub fn graph(f: &Matrix) -> Self {
        let (dst, src) = f.shape();
        let vecs: Vec<Vec<Rational>> = (0..src)
            .map(|j| {
                let mut v = vec![Rational::zero(); src + dst];
                v[j] = Rational::one();
                for i in 0..dst {
                    v[src + i] = f.get(i, j).clone();
                }
                v
            })
            .collect();
        LinearRelation { src, dst, space: Subspace::span(src + dst, &vecs) }
    }

    /// Inverse relation {(b, a) : (a, b) ∈ R}.
    pub fn inverse(&self) -> Self {
        let vecs: Vec<Vec<Rational>> = self
            .space
            .basis()
            .iter()
            .map(|v| {
                let mut w = v[self.src..].to_vec();
                w.extend_from_slice(&v[..self.src]);
                w
            })
            .collect();
        LinearRelation { src: self.dst, dst: self.src, space: Subspace::span(self.src + self.dst, &vecs) }
    }

    pub fn src_dim(&self) -> usize {
        self.src
    }

    pub fn dst_dim(&self) -> usize {
        self.dst
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&[Rational], &[Rational])> {
        self.space.basis().iter().map(move |v| (&v[..self.src], &v[self.src..]))
    }

    /// `next ∘ self` = {(a, c) : ∃ b, (a, b) ∈ self, (b, c) ∈ next}.
    pub fn then(&self, next: &LinearRelation) -> LinearRelation {
        assert_eq!(self.dst, next.src);
        let r: Vec<_> = self.pairs().collect();
        let s: Vec<_> = next.pairs().collect();
        // (α, β) with Σ α_i b_i − Σ β_j b'_j = 0
        let mut cols: Vec<Vec<Rational>> = r.iter().map(|(_, b)| b.to_vec()).collect();
        cols.extend(s.iter().map(|(b, _)| b.iter().map(|x| -x).collect::<Vec<_>>()));
        let m = Matrix::from_columns(self.dst, &cols);
        let ker = m.kernel();
        let out: Vec<Vec<Rational>> = ker
            .iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); self.src + next.dst];
                for (i, (a, _)) in r.iter().enumerate() {
                    if !k[i].is_zero() {
                        for (t, x) in a.iter().enumerate() {
                            v[t] += &k[i] * x;
                        }
                    }
                }
                for (j, (_, c)) in s.iter().enumerate() {
                    let kj = &k[r.len() + j];
                    if !kj.is_zero() {
                        for (t, x) in c.iter().enumerate() {
                            v[self.src + t] += kj * x;
                        }
                    }
                }
                v
            })
            .collect();
        LinearRelation { src: self.src, dst: next.dst, space: Subspace::span(self.src + next.dst, &out) }
    }

    /// R(U) = {b : ∃ a ∈ U, (a, b) ∈ R}.
    pub fn apply(&self, u: &Subspace) -> Subspace {
        assert_eq!(u.ambient(), self.src);
        // pairs whose first component lies in U
        let first: Vec<Vec<Rational>> = self.pairs().map(|(a, _)| u.reduce(a)).collect();
        let m = Matrix::from_columns(self.src, &first);
        let ker = m.kernel();
        let pairs: Vec<_> = self.pairs().collect();
        let vecs: Vec<Vec<Rational>> = ker
            .iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); self.dst];
                for (i, (_, b)) in pairs.iter().enumerate() {
                    if !k[i].is_zero() {
                        for (t, x) in b.iter().enumerate() {
                            v[t] += &k[i] * x;
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.dst, &vecs)
    }

    /// Restriction to pairs lying in U × W.
    pub fn restrict(&self, u: &Subspace, w: &Subspace) -> LinearRelation {
        let mut vecs = u.basis().iter().map(|a| {
            let mut v = a.clone();
            v.extend(std::iter::repeat_n(Rational::zero(), self.dst));
            v
        }).collect::<Vec<_>>();
        vecs.extend(w.basis().iter().map(|b| {
            let mut v = vec![Rational::zero(); self.src];
            v.extend(b.iter().cloned());
            v
        }));
        let uw = Subspace::span(self.src + self.dst, &vecs);
        LinearRelation { src: self.src, dst: self.dst, space: self.space.intersect(&uw) }
    }
}
