use super::{p1, p2, QuiverRep};
use crate::linalg::{sparse, Matrix, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A vertex-graded linear map; block j maps V_j(M) → V_j(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    blocks: Vec<Matrix>,
}

impl GradedMap {
    pub fn new(blocks: Vec<Matrix>) -> Self {
        GradedMap { blocks }
    }

    pub fn identity(dims: &[usize]) -> Self {
        GradedMap { blocks: dims.iter().map(|&d| Matrix::identity(d)).collect() }
    }

    pub fn zero(src: &[usize], dst: &[usize]) -> Self {
        GradedMap { blocks: src.iter().zip(dst).map(|(&s, &d)| Matrix::zeros(d, s)).collect() }
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &Matrix {
        &self.blocks[j]
    }

    pub fn compose(&self, first: &GradedMap) -> GradedMap {
        GradedMap { blocks: self.blocks.iter().zip(&first.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, o: &GradedMap) -> GradedMap {
        GradedMap { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &GradedMap) -> GradedMap {
        GradedMap { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        GradedMap { blocks: self.blocks.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks.iter().all(Matrix::is_invertible)
    }

    pub fn trace(&self) -> Rational {
        self.blocks.iter().fold(Rational::zero(), |s, b| s + b.trace())
    }

    /// Checks f∘x_M = x_N∘f and f∘y_M = y_N∘f.
    pub fn intertwines(&self, m: &QuiverRep, n: &QuiverRep) -> bool {
        let k = m.n();
        (0..k).all(|j| {
            self.blocks[p1(k, j)].mul(m.x(j)) == n.x(j).mul(&self.blocks[j])
                && self.blocks[p2(k, j)].mul(m.y(j)) == n.y(j).mul(&self.blocks[j])
        })
    }

    /// Flattened coordinates, block by block in row-major order.
    pub fn to_vector(&self) -> Vec<Rational> {
        self.blocks.iter().flat_map(|b| b.entries().map(|(_, _, v)| v.clone()).collect::<Vec<_>>()).collect()
    }

    pub fn from_vector(src: &[usize], dst: &[usize], v: &[Rational]) -> GradedMap {
        let mut pos = 0;
        let blocks = src
            .iter()
            .zip(dst)
            .map(|(&s, &d)| {
                let mut b = Matrix::zeros(d, s);
                for r in 0..d {
                    for c in 0..s {
                        b.set(r, c, v[pos].clone());
                        pos += 1;
                    }
                }
                b
            })
            .collect();
        GradedMap { blocks }
    }
}

/// Basis of Hom(M, N) as graded intertwiners.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub basis: Vec<GradedMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, coeffs: &[Rational], src: &[usize], dst: &[usize]) -> GradedMap {
        let mut acc = GradedMap::zero(src, dst);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }
}

/// Equations h_{π(j)} op_M[j] − op_N[j] h_j = 0 over the unknown entries of h.
fn intertwining_rows(m: &QuiverRep, n: &QuiverRep) -> (usize, Vec<sparse::SparseRow>) {
    let k = m.n();
    let (dm, dn) = (m.dims(), n.dims());
    let mut offset = vec![0; k + 1];
    for j in 0..k {
        offset[j + 1] = offset[j] + dm[j] * dn[j];
    }
    let var = |j: usize, r: usize, c: usize| offset[j] + r * dm[j] + c;
    let mut rows = Vec::new();
    for j in 0..k {
        for (op_m, op_n, t) in [(m.x(j), n.x(j), p1(k, j)), (m.y(j), n.y(j), p2(k, j))] {
            // column nonzeros of op_m and row nonzeros of op_n
            let col_nz: Vec<Vec<(usize, &Rational)>> = (0..dm[j])
                .map(|b| (0..dm[t]).filter(|&s| !op_m.get(s, b).is_zero()).map(|s| (s, op_m.get(s, b))).collect())
                .collect();
            let row_nz: Vec<Vec<(usize, &Rational)>> = (0..dn[t])
                .map(|a| (0..dn[j]).filter(|&s| !op_n.get(a, s).is_zero()).map(|s| (s, op_n.get(a, s))).collect())
                .collect();
            for a in 0..dn[t] {
                for b in 0..dm[j] {
                    let mut row: sparse::SparseRow = Vec::new();
                    for &(s, v) in &col_nz[b] {
                        row.push((var(t, a, s), v.clone()));
                    }
                    for &(s, v) in &row_nz[a] {
                        row.push((var(j, s, b), -v.clone()));
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    (offset[k], rows)
}

pub fn hom_space(m: &QuiverRep, n: &QuiverRep) -> HomSpace {
    assert_eq!(m.n(), n.n(), "rank mismatch");
    let (nvars, rows) = intertwining_rows(m, n);
    let basis = sparse::kernel(nvars, &rows)
        .into_iter()
        .map(|v| GradedMap::from_vector(m.dims(), n.dims(), &v))
        .collect();
    HomSpace { basis }
}

const ISO_SEED: u64 = 0x5eed_1507;
const ISO_TRIALS: usize = 4;

/// Searches for an invertible intertwiner; a returned map is a certificate.
///
/// A random integer combination with coefficients of size up to 10^6 is
/// invertible unless the determinant polynomial vanishes at it, which by the
/// Schwartz–Zippel bound happens with probability at most dim/10^6 per trial.
pub fn find_isomorphism(m: &QuiverRep, n: &QuiverRep) -> Option<GradedMap> {
    if m.n() != n.n() || m.dims() != n.dims() {
        return None;
    }
    if m.total_dim() == 0 {
        return Some(GradedMap::identity(m.dims()));
    }
    if m.rank_profile() != n.rank_profile() {
        return None;
    }
    let hom = hom_space(m, n);
    if hom.dim() == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for _ in 0..ISO_TRIALS {
        let coeffs: Vec<Rational> = (0..hom.dim())
            .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))))
            .collect();
        let f = hom.combination(&coeffs, m.dims(), n.dims());
        if f.is_invertible() {
            debug_assert!(f.intertwines(m, n));
            return Some(f);
        }
    }
    None
}

pub fn is_isomorphic(m: &QuiverRep, n: &QuiverRep) -> bool {
    find_isomorphism(m, n).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_rep::build_string_rep;
    use crate::string_band::GradedString;

    #[test]
    fn simples() {
        let l1 = build_string_rep(&GradedString::simple(3, 1).unwrap());
        let l2 = build_string_rep(&GradedString::simple(3, 2).unwrap());
        assert_eq!(hom_space(&l1, &l1).dim(), 1);
        assert_eq!(hom_space(&l1, &l2).dim(), 0);
        assert!(is_isomorphic(&l1, &l1));
        assert!(!is_isomorphic(&l1, &l2));
    }

    #[test]
    fn homs_intertwine() {
        let s = GradedString::homogeneous_x(2, 5, 1).unwrap();
        let m = build_string_rep(&s);
        let h = hom_space(&m, &m);
        assert_eq!(h.dim(), 3);
        for f in &h.basis {
            assert!(f.intertwines(&m, &m));
        }
    }
}
