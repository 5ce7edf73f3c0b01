use super::{p1, p2, QuiverRep, QuiverRepError};
use crate::linalg::{Rational, Subspace};
use num_traits::Zero;

/// A vector of V_j, `vertex` being the 1-based label j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousVector {
    pub vertex: usize,
    pub coords: Vec<Rational>,
}

impl HomogeneousVector {
    pub fn new(vertex: usize, coords: Vec<Rational>) -> Self {
        HomogeneousVector { vertex, coords }
    }

    fn check(&self, m: &QuiverRep) -> Result<usize, QuiverRepError> {
        if self.vertex == 0 || self.vertex > m.n() {
            return Err(QuiverRepError::Mismatch(format!("vertex {} out of range", self.vertex)));
        }
        let j = self.vertex - 1;
        if self.coords.len() != m.dims()[j] {
            return Err(QuiverRepError::VectorLength {
                vertex: self.vertex,
                expected: m.dims()[j],
                got: self.coords.len(),
            });
        }
        Ok(j)
    }
}

fn check_socle(m: &QuiverRep, v: &HomogeneousVector) -> Result<usize, QuiverRepError> {
    let j = v.check(m)?;
    if v.coords.iter().all(Zero::is_zero) {
        return Err(QuiverRepError::ZeroVector);
    }
    let killed = m.x(j).mul_vec(&v.coords).iter().all(Zero::is_zero)
        && m.y(j).mul_vec(&v.coords).iter().all(Zero::is_zero);
    if !killed {
        return Err(QuiverRepError::NotInSocle(v.vertex));
    }
    Ok(j)
}

/// (M ⊕ N) / D where D is spanned by (v_M, v_N), both socle vectors at vertex j.
pub fn glue(
    m: &QuiverRep,
    n: &QuiverRep,
    j: usize,
    vm: &HomogeneousVector,
    vn: &HomogeneousVector,
) -> Result<QuiverRep, QuiverRepError> {
    if m.n() != n.n() {
        return Err(QuiverRepError::RankMismatch(m.n(), n.n()));
    }
    if vm.vertex != j || vn.vertex != j {
        return Err(QuiverRepError::Mismatch(format!("vectors must sit at vertex {j}")));
    }
    let jm = check_socle(m, vm)?;
    check_socle(n, vn)?;
    let sum = m.direct_sum(n)?;
    let sub: Vec<Subspace> = (0..m.n())
        .map(|k| {
            if k == jm {
                let mut v = vm.coords.clone();
                v.extend(vn.coords.iter().cloned());
                Subspace::span(sum.dims()[k], &[v])
            } else {
                Subspace::zero(sum.dims()[k])
            }
        })
        .collect();
    sum.quotient(&sub)
}

/// dual(glue(dual M, dual N)); `fm`, `fn_` are functionals on V_j vanishing on the radical.
pub fn dual_glue(
    m: &QuiverRep,
    n: &QuiverRep,
    j: usize,
    fm: &HomogeneousVector,
    fn_: &HomogeneousVector,
) -> Result<QuiverRep, QuiverRepError> {
    Ok(glue(&m.dual(), &n.dual(), j, fm, fn_)?.dual())
}

/// A^{⊕p} modulo the span of (σ(a)−λa in copy s, −a in copy s+1) for a in A1,
/// where σ maps `a1[i]` to `a2[i]`.
pub fn polymerize(
    m: &QuiverRep,
    a1: &[HomogeneousVector],
    a2: &[HomogeneousVector],
    lambda: &Rational,
    p: usize,
) -> Result<QuiverRep, QuiverRepError> {
    if a1.len() != a2.len() {
        return Err(QuiverRepError::Mismatch(format!("{} vs {} basis vectors", a1.len(), a2.len())));
    }
    if p == 0 {
        return Err(QuiverRepError::Mismatch("p must be positive".into()));
    }
    for (u, w) in a1.iter().zip(a2) {
        u.check(m)?;
        w.check(m)?;
        if u.vertex != w.vertex {
            return Err(QuiverRepError::Mismatch("σ must preserve vertices".into()));
        }
    }
    let n = m.n();
    let span_of = |vs: &[HomogeneousVector]| -> Vec<Subspace> {
        (0..n)
            .map(|j| {
                let v: Vec<Vec<Rational>> =
                    vs.iter().filter(|h| h.vertex == j + 1).map(|h| h.coords.clone()).collect();
                Subspace::span(m.dims()[j], &v)
            })
            .collect()
    };
    for vs in [a1, a2] {
        let s = span_of(vs);
        if s.iter().map(Subspace::dim).sum::<usize>() != vs.len() {
            return Err(QuiverRepError::Mismatch("basis vectors are dependent".into()));
        }
        for h in vs {
            let j = h.vertex - 1;
            if !s[p1(n, j)].contains(&m.x(j).mul_vec(&h.coords)) || !s[p2(n, j)].contains(&m.y(j).mul_vec(&h.coords)) {
                return Err(QuiverRepError::NotSubmodule);
            }
        }
    }
    let big = QuiverRep::direct_sum_all(n, std::iter::repeat_n(m, p))?;
    let mut gens: Vec<Vec<Vec<Rational>>> = (0..n).map(|_| Vec::new()).collect();
    for (u, w) in a1.iter().zip(a2) {
        let j = u.vertex - 1;
        let d = m.dims()[j];
        for s in 0..p {
            let mut v = vec![Rational::zero(); d * p];
            for i in 0..d {
                v[s * d + i] = &w.coords[i] - lambda * &u.coords[i];
                if s + 1 < p {
                    v[(s + 1) * d + i] = -u.coords[i].clone();
                }
            }
            gens[j].push(v);
        }
    }
    let sub: Vec<Subspace> = (0..n).map(|j| Subspace::span(big.dims()[j], &gens[j])).collect();
    big.quotient(&sub)
}
