//! Finite-dimensional representations of Q_n over the rationals.
//!
//! A representation has a space V_j per vertex j (1-based labels, stored at
//! index j−1) and blocks `x[j]: V_j → V_{π1(j)}`, `y[j]: V_j → V_{π2(j)}`
//! subject to xy = yx = 0 with x, y nilpotent.

mod decompose;
mod hom;
mod ops;
mod path_algebra;
mod serial;
mod socle;

pub use decompose::{band_eigenvalue, decompose, decompose_with_seed, rebuild, DecomposeError, Summand};
pub use hom::{find_isomorphism, hom_space, is_isomorphic, GradedMap, HomSpace};
pub use ops::{dual_glue, glue, polymerize, HomogeneousVector};
pub use path_algebra::{
    hilbert_dual_series, hilbert_formula, hilbert_series, koszul_numerical_check, koszul_product_is_identity,
    path_algebra_layer, PathAlgebraLayer, PathWord, Series,
};
pub use serial::RepFile;
pub use socle::{radical_layers, socle_filtration, socle_subspaces};

use crate::linalg::{Matrix, Rational, Subspace};
use crate::string_band::{pi1, pi2, BandDescriptor, Descriptor, Dir, GradedString};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverRepError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("block {op}[{vertex}] has shape {got:?}, expected {expected:?}")]
    Shape { op: char, vertex: usize, got: (usize, usize), expected: (usize, usize) },
    #[error("relation {0} violated at vertex {1}")]
    Relation(&'static str, usize),
    #[error("{0} is not nilpotent")]
    NotNilpotent(char),
    #[error("vector at vertex {0} does not lie in the socle")]
    NotInSocle(usize),
    #[error("vector has length {got}, vertex {vertex} has dimension {expected}")]
    VectorLength { vertex: usize, expected: usize, got: usize },
    #[error("zero vector supplied")]
    ZeroVector,
    #[error("span is not a submodule")]
    NotSubmodule,
    #[error("subspaces are not matched: {0}")]
    Mismatch(String),
    #[error("malformed representation: {0}")]
    Format(String),
}

impl QuiverRepError {
    /// Violations of the defining relations, as opposed to malformed input.
    pub fn is_relation_violation(&self) -> bool {
        matches!(self, QuiverRepError::Relation(..) | QuiverRepError::NotNilpotent(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    n: usize,
    dims: Vec<usize>,
    x: Vec<Matrix>,
    y: Vec<Matrix>,
}

/// π1 on 0-based indices.
pub(crate) fn p1(n: usize, j: usize) -> usize {
    pi1(n, j + 1) - 1
}

/// π2 on 0-based indices.
pub(crate) fn p2(n: usize, j: usize) -> usize {
    pi2(n, j + 1) - 1
}

fn is_nilpotent(a: &Matrix) -> bool {
    a.rows() == 0 || a.pow(a.rows() as u32).is_zero()
}

impl QuiverRep {
    /// Validates shapes and the relations (C0)–(C2).
    pub fn new(n: usize, dims: Vec<usize>, x: Vec<Matrix>, y: Vec<Matrix>) -> Result<Self, QuiverRepError> {
        if dims.len() != n || x.len() != n || y.len() != n {
            return Err(QuiverRepError::Format(format!("expected {n} vertices")));
        }
        for j in 0..n {
            for (op, m, t) in [('x', &x[j], p1(n, j)), ('y', &y[j], p2(n, j))] {
                let expected = (dims[t], dims[j]);
                if m.shape() != expected {
                    return Err(QuiverRepError::Shape { op, vertex: j + 1, got: m.shape(), expected });
                }
            }
        }
        let rep = QuiverRep { n, dims, x, y };
        rep.check_relations()?;
        Ok(rep)
    }

    fn check_relations(&self) -> Result<(), QuiverRepError> {
        let n = self.n;
        for j in 0..n {
            if !self.x[p2(n, j)].mul(&self.y[j]).is_zero() {
                return Err(QuiverRepError::Relation("xy=0", j + 1));
            }
            if !self.y[p1(n, j)].mul(&self.x[j]).is_zero() {
                return Err(QuiverRepError::Relation("yx=0", j + 1));
            }
        }
        for j in 0..n {
            let xx = if p1(n, j) == j { self.x[j].clone() } else { self.x[p1(n, j)].mul(&self.x[j]) };
            if !is_nilpotent(&xx) {
                return Err(QuiverRepError::NotNilpotent('x'));
            }
            let yy = if p2(n, j) == j { self.y[j].clone() } else { self.y[p2(n, j)].mul(&self.y[j]) };
            if !is_nilpotent(&yy) {
                return Err(QuiverRepError::NotNilpotent('y'));
            }
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        QuiverRep {
            n,
            dims: vec![0; n],
            x: vec![Matrix::zeros(0, 0); n],
            y: vec![Matrix::zeros(0, 0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Block V_j → V_{π1(j)}, `j` 0-based.
    pub fn x(&self, j: usize) -> &Matrix {
        &self.x[j]
    }

    /// Block V_j → V_{π2(j)}, `j` 0-based.
    pub fn y(&self, j: usize) -> &Matrix {
        &self.y[j]
    }

    pub fn x_target(&self, j: usize) -> usize {
        p1(self.n, j)
    }

    pub fn y_target(&self, j: usize) -> usize {
        p2(self.n, j)
    }

    pub fn direct_sum(&self, other: &QuiverRep) -> Result<QuiverRep, QuiverRepError> {
        if self.n != other.n {
            return Err(QuiverRepError::RankMismatch(self.n, other.n));
        }
        let n = self.n;
        Ok(QuiverRep {
            n,
            dims: (0..n).map(|j| self.dims[j] + other.dims[j]).collect(),
            x: (0..n).map(|j| Matrix::block_diag(&[&self.x[j], &other.x[j]])).collect(),
            y: (0..n).map(|j| Matrix::block_diag(&[&self.y[j], &other.y[j]])).collect(),
        })
    }

    pub fn direct_sum_all<'a>(n: usize, reps: impl IntoIterator<Item = &'a QuiverRep>) -> Result<QuiverRep, QuiverRepError> {
        reps.into_iter().try_fold(QuiverRep::zero(n), |acc, r| acc.direct_sum(r))
    }

    /// Transposed blocks on the dual spaces.
    pub fn dual(&self) -> QuiverRep {
        let n = self.n;
        QuiverRep {
            n,
            dims: self.dims.clone(),
            x: (0..n).map(|j| self.x[p1(n, j)].transpose()).collect(),
            y: (0..n).map(|j| self.y[p2(n, j)].transpose()).collect(),
        }
    }

    /// The representation in a new basis: `g[j]` maps old coordinates of V_j to new ones.
    pub fn conjugate(&self, g: &GradedMap) -> Option<QuiverRep> {
        let n = self.n;
        let inv: Option<Vec<Matrix>> = g.blocks().iter().map(Matrix::inverse).collect();
        let inv = inv?;
        let tr = |ops: &[Matrix], t: &dyn Fn(usize) -> usize| -> Vec<Matrix> {
            (0..n).map(|j| g.block(t(j)).mul(&ops[j]).mul(&inv[j])).collect()
        };
        Some(QuiverRep {
            n,
            dims: self.dims.clone(),
            x: tr(&self.x, &|j| p1(n, j)),
            y: tr(&self.y, &|j| p2(n, j)),
        })
    }

    /// Restriction to a graded subrepresentation spanned by the columns of `basis[j]`.
    pub fn restrict(&self, basis: &[Matrix]) -> Result<QuiverRep, QuiverRepError> {
        let n = self.n;
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for j in 0..n {
            let (tx, ty) = (p1(n, j), p2(n, j));
            x.push(basis[tx].solve(&self.x[j].mul(&basis[j])).ok_or(QuiverRepError::NotSubmodule)?);
            y.push(basis[ty].solve(&self.y[j].mul(&basis[j])).ok_or(QuiverRepError::NotSubmodule)?);
        }
        Ok(QuiverRep { n, dims: basis.iter().map(Matrix::cols).collect(), x, y })
    }

    /// Quotient by a graded subrepresentation, using the standard complement
    /// of the echelon basis of each `sub[j]`.
    pub fn quotient(&self, sub: &[Subspace]) -> Result<QuiverRep, QuiverRepError> {
        let n = self.n;
        for j in 0..n {
            for v in sub[j].basis() {
                if !sub[p1(n, j)].contains(&self.x[j].mul_vec(v)) || !sub[p2(n, j)].contains(&self.y[j].mul_vec(v)) {
                    return Err(QuiverRepError::NotSubmodule);
                }
            }
        }
        let comp: Vec<Vec<usize>> = sub.iter().map(Subspace::complement_columns).collect();
        let induced = |op: &Matrix, j: usize, t: usize| -> Matrix {
            let cols: Vec<Vec<Rational>> =
                comp[j].iter().map(|&c| sub[t].quotient_coordinates(&op.column(c))).collect();
            Matrix::from_columns(comp[t].len(), &cols)
        };
        Ok(QuiverRep {
            n,
            dims: comp.iter().map(Vec::len).collect(),
            x: (0..n).map(|j| induced(&self.x[j], j, p1(n, j))).collect(),
            y: (0..n).map(|j| induced(&self.y[j], j, p2(n, j))).collect(),
        })
    }

    /// Ranks of x, y on each vertex; an isomorphism invariant.
    pub fn rank_profile(&self) -> Vec<(usize, usize)> {
        (0..self.n).map(|j| (self.x[j].rank(), self.y[j].rank())).collect()
    }

    pub fn to_file(&self) -> RepFile {
        RepFile::from_rep(self)
    }
}

/// Position of each polygon/string vertex inside its vertex space, for blocks of size `r`.
pub fn vertex_offsets(labels: &[usize], r: usize) -> Vec<usize> {
    let mut count = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let c = count.entry(*l).or_insert(0usize);
            *c += 1;
            (*c - 1) * r
        })
        .collect()
}

fn place_chain(
    n: usize,
    labels: &[usize],
    dirs: &[Dir],
    r: usize,
    block_for: impl Fn(usize) -> Matrix,
) -> QuiverRep {
    let k = labels.len();
    let mut dims = vec![0; n];
    for l in labels {
        dims[l - 1] += r;
    }
    let mut x: Vec<Matrix> = (0..n).map(|j| Matrix::zeros(dims[p1(n, j)], dims[j])).collect();
    let mut y: Vec<Matrix> = (0..n).map(|j| Matrix::zeros(dims[p2(n, j)], dims[j])).collect();
    let off = vertex_offsets(labels, r);
    for (i, d) in dirs.iter().enumerate() {
        let (a, b) = (i, (i + 1) % k);
        let t = block_for(i);
        match d {
            Dir::R => x[labels[a] - 1].set_block(off[b], off[a], &t),
            Dir::L => y[labels[b] - 1].set_block(off[a], off[b], &t),
        }
    }
    QuiverRep { n, dims, x, y }
}

/// I(S): one basis vector per vertex, arrows acting as identities.
pub fn build_string_rep(s: &GradedString) -> QuiverRep {
    let rep = place_chain(s.n(), s.labels(), s.dirs(), 1, |_| Matrix::identity(1));
    debug_assert!(rep.check_relations().is_ok());
    rep
}

/// J_r(λ): λ on the diagonal, ones above it.
pub fn jordan_block(lambda: &Rational, r: usize) -> Matrix {
    let mut j = Matrix::scalar(r, lambda);
    for i in 0..r.saturating_sub(1) {
        j.set(i, i + 1, Rational::one());
    }
    j
}

/// I(P, λ, r) with the Jordan block on the arrow leaving vertex 0.
pub fn build_band_rep(b: &BandDescriptor) -> QuiverRep {
    build_band_rep_at(b, 0)
}

/// I(P, λ, r) with the Jordan block carried by arrow `arrow`; the monodromy
/// (composite of x and y⁻¹ around the cycle) is similar to J_r(λ).
pub fn build_band_rep_at(b: &BandDescriptor, arrow: usize) -> QuiverRep {
    let p = b.polygon();
    let r = b.r();
    let j = jordan_block(b.lambda(), r);
    let jinv = j.inverse().expect("nonzero eigenvalue");
    let rep = place_chain(p.n(), p.labels(), p.dirs(), r, |i| {
        if i != arrow % p.len() {
            Matrix::identity(r)
        } else if p.dirs()[i] == Dir::R {
            j.clone()
        } else {
            jinv.clone()
        }
    });
    debug_assert!(rep.check_relations().is_ok());
    rep
}

pub fn build(d: &Descriptor) -> QuiverRep {
    match d {
        Descriptor::String(s) => build_string_rep(s),
        Descriptor::Band(b) => build_band_rep(b),
    }
}

/// Monodromy d_{k−1}⋯d_0 of a band representation built by [`build_band_rep_at`],
/// read off the blocks at vertex 0.
pub fn band_monodromy(rep: &QuiverRep, b: &BandDescriptor) -> Matrix {
    let p = b.polygon();
    let r = b.r();
    let off = vertex_offsets(p.labels(), r);
    let k = p.len();
    let mut m = Matrix::identity(r);
    for i in 0..k {
        let (a, c) = (i, (i + 1) % k);
        let (la, lc) = (p.labels()[a] - 1, p.labels()[c] - 1);
        let d = match p.dirs()[i] {
            Dir::R => rep.x[la].submatrix(off[c]..off[c] + r, off[a]..off[a] + r),
            Dir::L => rep.y[lc]
                .submatrix(off[a]..off[a] + r, off[c]..off[c] + r)
                .inverse()
                .expect("band arrows are invertible"),
        };
        m = d.mul(&m);
    }
    m
}

/// The i-th standard basis vector.
pub fn unit_vector(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, int};
    use crate::string_band::{Dir::*, GradedPolygon};

    #[test]
    fn worked_example_dims() {
        let s = GradedString::new(3, vec![R, L, R, R, R], vec![2, 1, 1, 2, 1, 2]).unwrap();
        let m = build_string_rep(&s);
        assert_eq!(m.dims(), &[3, 3, 0]);
    }

    #[test]
    fn x2_of_1() {
        let s = GradedString::homogeneous_x(2, 2, 1).unwrap();
        let m = build_string_rep(&s);
        assert_eq!(m.dims(), &[1, 1]);
        assert_eq!(m.x(0), &Matrix::from_i64(&[&[1]]));
        assert!(m.x(1).is_zero() && m.y(0).is_zero() && m.y(1).is_zero());
    }

    #[test]
    fn band_monodromy_is_jordan() {
        let p = GradedPolygon::new(2, vec![R, R, L, L], vec![1, 2, 1, 1]).unwrap();
        for arrow in 0..4 {
            let b = BandDescriptor::new(p.clone(), frac(3, 2), 2).unwrap();
            let m = build_band_rep_at(&b, arrow);
            assert!(m.check_relations().is_ok());
            let mono = band_monodromy(&m, &b);
            assert_eq!(mono.trace(), int(3));
            let shifted = mono.sub(&Matrix::scalar(2, &frac(3, 2)));
            assert!(!shifted.is_zero() && shifted.mul(&shifted).is_zero());
        }
    }

    #[test]
    fn relation_violation_detected() {
        // n=1: x and y both loops; x = y = e_{12} gives xy = 0 but x nilpotent fine;
        // x = e_{12}, y = e_{21} gives xy = e_{11} ≠ 0
        let x = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let y = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let e = QuiverRep::new(1, vec![2], vec![x], vec![y]).unwrap_err();
        assert!(e.is_relation_violation());
        let bad_shape = QuiverRep::new(1, vec![2], vec![Matrix::zeros(1, 2)], vec![Matrix::zeros(2, 2)]);
        assert!(matches!(bad_shape, Err(QuiverRepError::Shape { .. })));
    }
}
