//! Krull–Schmidt decomposition into string and band modules.
//!
//! 1. Isotypic splitting: End(M)/rad is a product of matrix algebras over Q,
//!    one per isotypic class, and rad is the kernel of the trace form. A random
//!    element z that is central modulo rad acts on each isotypic block by a
//!    rational scalar plus a nilpotent part, so the generalized eigenspaces of
//!    z split M.
//! 2. Identification: the graded Jordan-chain multisets of x and y determine
//!    the runs of a string or polygon; candidates are enumerated from them and
//!    certified by an explicit isomorphism. For bands the eigenvalue is read off
//!    the stable part of the linear relation obtained by walking around the
//!    polygon.
//! 3. The direct sum of the identified summands is certified isomorphic to M.

use super::{build, hom_space, is_isomorphic, p1, p2, GradedMap, QuiverRep};
use crate::linalg::{poly, sparse, LinearRelation, Matrix, Rational, Subspace};
use crate::string_band::{step, BandDescriptor, Descriptor, Dir, GradedPolygon, GradedString};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const DEFAULT_SEED: u64 = 20_240_611;
const MAX_ATTEMPTS: usize = 8;
const MAX_CANDIDATES: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("no string or band matches a summand of dimension vector {0:?}")]
    Unidentified(Vec<usize>),
    #[error("endomorphism eigenvalues are not rational")]
    IrrationalEigenvalues,
    #[error("direct sum of the identified summands is not isomorphic to the input")]
    VerificationFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Summand {
    pub descriptor: Descriptor,
    pub multiplicity: usize,
}

pub fn decompose(m: &QuiverRep) -> Result<Vec<Summand>, DecomposeError> {
    decompose_with_seed(m, DEFAULT_SEED)
}

pub fn decompose_with_seed(m: &QuiverRep, seed: u64) -> Result<Vec<Summand>, DecomposeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = vec![m.clone()];
    let mut found: BTreeMap<Descriptor, usize> = BTreeMap::new();
    while let Some(g) = work.pop() {
        if g.total_dim() == 0 {
            continue;
        }
        let mut attempt = 0;
        loop {
            attempt += 1;
            match split(&g, &mut rng) {
                Ok(Some(parts)) => {
                    work.extend(parts);
                    break;
                }
                Ok(None) => match identify(&g) {
                    Some((d, k)) => {
                        *found.entry(d).or_insert(0) += k;
                        break;
                    }
                    None if attempt < MAX_ATTEMPTS => continue,
                    None => return Err(DecomposeError::Unidentified(g.dims().to_vec())),
                },
                Err(_) if attempt < MAX_ATTEMPTS => continue,
                Err(e) => return Err(e),
            }
        }
    }
    let summands: Vec<Summand> =
        found.into_iter().map(|(descriptor, multiplicity)| Summand { descriptor, multiplicity }).collect();
    let rebuilt = rebuild(m.n(), &summands);
    if !is_isomorphic(&rebuilt, m) {
        return Err(DecomposeError::VerificationFailed);
    }
    Ok(summands)
}

/// ⊕ X_i^{k_i}.
pub fn rebuild(n: usize, summands: &[Summand]) -> QuiverRep {
    let reps: Vec<QuiverRep> = summands
        .iter()
        .flat_map(|s| std::iter::repeat_n(build(&s.descriptor), s.multiplicity))
        .collect();
    QuiverRep::direct_sum_all(n, &reps).expect("equal ranks")
}

fn random_combination(basis: &[GradedMap], rng: &mut ChaCha8Rng, range: i64) -> GradedMap {
    let mut acc = basis[0].scale(&Rational::zero());
    for b in basis {
        let c = Rational::from_integer(BigInt::from(rng.gen_range(-range..=range)));
        if !c.is_zero() {
            acc = acc.add(&b.scale(&c));
        }
    }
    acc
}

/// Splits into generalized eigenspaces of a central-ish endomorphism; `None`
/// when only one eigenvalue occurs.
fn split(g: &QuiverRep, rng: &mut ChaCha8Rng) -> Result<Option<Vec<QuiverRep>>, DecomposeError> {
    let end = hom_space(g, g).basis;
    if end.len() <= 1 {
        return Ok(None);
    }
    // rad End = kernel of the trace form; a is central modulo rad iff
    // tr(a [φ, b]) = 0 for two generic generators φ and every b
    let phis = [random_combination(&end, rng, 5), random_combination(&end, rng, 5)];
    let sparse_end: Vec<Vec<(usize, Rational)>> = end
        .iter()
        .map(|b| b.to_vector().into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let mut rows: Vec<sparse::SparseRow> = Vec::new();
    for phi in &phis {
        for b in &end {
            let c = phi.compose(b).sub(&b.compose(phi));
            let ct = GradedMap::new(c.blocks().iter().map(Matrix::transpose).collect()).to_vector();
            let row: sparse::SparseRow = sparse_end
                .iter()
                .enumerate()
                .map(|(t, bt)| (t, bt.iter().map(|(i, v)| v * &ct[*i]).sum::<Rational>()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    let cent: Vec<GradedMap> = sparse::kernel(end.len(), &rows)
        .iter()
        .map(|a| {
            let mut acc = end[0].scale(&Rational::zero());
            for (c, b) in a.iter().zip(&end) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c));
                }
            }
            acc
        })
        .collect();
    let z = random_combination(&cent, rng, 1000);
    let mut roots: Vec<Rational> = Vec::new();
    for blk in z.blocks() {
        if blk.rows() > 0 {
            for r in poly::rational_roots(&poly::charpoly(blk)) {
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    let mut parts = Vec::new();
    let mut covered = 0;
    for c in &roots {
        let basis: Vec<Matrix> = z
            .blocks()
            .iter()
            .map(|b| {
                let d = b.rows();
                if d == 0 {
                    return Matrix::zeros(0, 0);
                }
                let shifted = b.sub(&Matrix::scalar(d, c)).pow(d as u32);
                Matrix::from_columns(d, &shifted.kernel())
            })
            .collect();
        let part = g.restrict(&basis).expect("generalized eigenspaces are submodules");
        covered += part.total_dim();
        parts.push(part);
    }
    if covered != g.total_dim() {
        return Err(DecomposeError::IrrationalEigenvalues);
    }
    if parts.len() <= 1 {
        return Ok(None);
    }
    Ok(Some(parts))
}

type Counts = BTreeMap<(usize, usize), usize>;

/// Jordan chains of a graded nilpotent operator keyed by (bottom label, length).
fn chain_counts(g: &QuiverRep, use_x: bool) -> Counts {
    let n = g.n();
    let target = |j| if use_x { p1(n, j) } else { p2(n, j) };
    let op = |j: usize| if use_x { g.x(j) } else { g.y(j) };
    let kernels: Vec<Subspace> = (0..n).map(|j| Subspace::kernel_of(op(j))).collect();
    // images[j] = Im(op^{ℓ−1}) ∩ V_j
    let mut images: Vec<Subspace> = g.dims().iter().map(|&d| Subspace::full(d)).collect();
    let mut ge: Vec<Vec<usize>> = Vec::new();
    loop {
        let cur: Vec<usize> = (0..n).map(|j| images[j].intersect(&kernels[j]).dim()).collect();
        if cur.iter().all(|&c| c == 0) {
            break;
        }
        ge.push(cur);
        // op maps V_{t} into V_j where t = target(j) because the permutations are involutions
        images = (0..n).map(|j| images[target(j)].image(op(target(j)))).collect();
    }
    let mut counts = Counts::new();
    for (l, row) in ge.iter().enumerate() {
        for j in 0..n {
            let next = ge.get(l + 1).map_or(0, |r| r[j]);
            let c = row[j] - next;
            if c > 0 {
                counts.insert((j + 1, l + 1), c);
            }
        }
    }
    counts
}

fn gcd_all(values: impl Iterator<Item = usize>) -> usize {
    values.fold(0, |g, v| g.gcd(&v))
}

fn divide(c: &Counts, k: usize) -> Counts {
    c.iter().map(|(key, v)| (*key, v / k)).collect()
}

fn divisors_desc(n: usize) -> Vec<usize> {
    let mut d: Vec<usize> = (1..=n).filter(|k| n.is_multiple_of(*k)).collect();
    d.reverse();
    d
}

/// Identifies an isotypic representation G ≅ X^k.
fn identify(g: &QuiverRep) -> Option<(Descriptor, usize)> {
    let n = g.n();
    let cx = chain_counts(g, true);
    let cy = chain_counts(g, false);
    let total = g.total_dim();
    let all = gcd_all(cx.values().chain(cy.values()).copied().chain(g.dims().iter().copied()));
    for k in divisors_desc(all) {
        let (tx, ty) = (divide(&cx, k), divide(&cy, k));
        let dims: Vec<usize> = g.dims().iter().map(|d| d / k).collect();
        let power = |x: &QuiverRep| QuiverRep::direct_sum_all(n, std::iter::repeat_n(x, k)).unwrap();
        for s in string_candidates(n, &tx, &ty, &dims, total / k) {
            let x = super::build_string_rep(&s);
            if is_isomorphic(&power(&x), g) {
                return Some((Descriptor::String(s), k));
            }
        }
        let inner = gcd_all(tx.values().chain(ty.values()).copied().chain(dims.iter().copied()));
        for r in divisors_desc(inner) {
            let (bx, by) = (divide(&tx, r), divide(&ty, r));
            let bdims: Vec<usize> = dims.iter().map(|d| d / r).collect();
            for p in polygon_candidates(n, &bx, &by, &bdims, total / (k * r)) {
                let Some(lambda) = band_eigenvalue(g, &p, k * r) else {
                    continue;
                };
                let Ok(b) = BandDescriptor::new(p.canonical(), lambda, r) else {
                    continue;
                };
                let d = Descriptor::Band(b);
                if is_isomorphic(&power(&build(&d)), g) {
                    return Some((d, k));
                }
            }
        }
    }
    None
}

struct Search<'a> {
    n: usize,
    xs: Counts,
    ys: Counts,
    verts: Vec<usize>,
    total: usize,
    labels: Vec<usize>,
    dirs: Vec<Dir>,
    out: &'a mut Vec<(Vec<usize>, Vec<Dir>)>,
}

fn take(c: &mut Counts, key: (usize, usize)) -> bool {
    match c.get_mut(&key) {
        Some(v) if *v > 0 => {
            *v -= 1;
            true
        }
        _ => false,
    }
}

fn give(c: &mut Counts, key: (usize, usize)) {
    *c.entry(key).or_insert(0) += 1;
}

fn max_len(c: &Counts) -> usize {
    c.iter().filter(|(_, v)| **v > 0).map(|((_, l), _)| *l).max().unwrap_or(0)
}

impl Search<'_> {
    /// Current vertex is the last label; `xlen` is the open x-run ending here,
    /// `(ystart, ylen)` the open y-run ending here.
    fn strings(&mut self, xlen: usize, ystart: usize, ylen: usize) {
        if self.out.len() >= MAX_CANDIDATES {
            return;
        }
        let l = *self.labels.last().unwrap();
        if self.labels.len() == self.total {
            if take(&mut self.xs, (l, xlen)) {
                if take(&mut self.ys, (ystart, ylen)) {
                    if self.xs.values().all(|&v| v == 0) && self.ys.values().all(|&v| v == 0) {
                        self.out.push((self.labels.clone(), self.dirs.clone()));
                    }
                    give(&mut self.ys, (ystart, ylen));
                }
                give(&mut self.xs, (l, xlen));
            }
            return;
        }
        for d in [Dir::R, Dir::L] {
            let next = step(self.n, d, l);
            if self.verts[next - 1] == 0 {
                continue;
            }
            let (closed, key) = match d {
                Dir::R => (&mut self.ys, (ystart, ylen)),
                Dir::L => (&mut self.xs, (l, xlen)),
            };
            if !take(closed, key) {
                continue;
            }
            let feasible = match d {
                Dir::R => max_len(&self.xs) > xlen,
                Dir::L => max_len(&self.ys) > ylen,
            };
            if feasible {
                self.verts[next - 1] -= 1;
                self.labels.push(next);
                self.dirs.push(d);
                match d {
                    Dir::R => self.strings(xlen + 1, next, 1),
                    Dir::L => self.strings(1, ystart, ylen + 1),
                }
                self.labels.pop();
                self.dirs.pop();
                self.verts[next - 1] += 1;
            }
            match d {
                Dir::R => give(&mut self.ys, key),
                Dir::L => give(&mut self.xs, key),
            }
        }
    }

    /// Cyclic variant: vertex 0 is a source (arrow K−1 is L, arrow 0 is R);
    /// the y-run through vertex K−1 closes at vertex 0.
    fn polygons(&mut self, xlen: usize, ystart: usize, ylen: usize) {
        if self.out.len() >= MAX_CANDIDATES {
            return;
        }
        let l = *self.labels.last().unwrap();
        if self.labels.len() == self.total {
            let l0 = self.labels[0];
            if step(self.n, Dir::L, l) != l0 {
                return;
            }
            if take(&mut self.xs, (l, xlen)) {
                if take(&mut self.ys, (ystart, ylen + 1)) {
                    if self.xs.values().all(|&v| v == 0) && self.ys.values().all(|&v| v == 0) {
                        let mut dirs = self.dirs.clone();
                        dirs.push(Dir::L);
                        self.out.push((self.labels.clone(), dirs));
                    }
                    give(&mut self.ys, (ystart, ylen + 1));
                }
                give(&mut self.xs, (l, xlen));
            }
            return;
        }
        self.strings_step_cyclic(l, xlen, ystart, ylen);
    }

    fn strings_step_cyclic(&mut self, l: usize, xlen: usize, ystart: usize, ylen: usize) {
        let first = self.labels.len() == 1;
        for d in [Dir::R, Dir::L] {
            if first && d == Dir::L {
                continue;
            }
            let next = step(self.n, d, l);
            if self.verts[next - 1] == 0 {
                continue;
            }
            // the y-run at vertex 0 is the wrap-around run and closes at the end
            let key = match d {
                Dir::R => (ystart, ylen),
                Dir::L => (l, xlen),
            };
            let closes = !(first && d == Dir::R);
            if closes {
                let c = match d {
                    Dir::R => &mut self.ys,
                    Dir::L => &mut self.xs,
                };
                if !take(c, key) {
                    continue;
                }
            }
            self.verts[next - 1] -= 1;
            self.labels.push(next);
            self.dirs.push(d);
            match d {
                Dir::R => self.polygons(xlen + 1, next, 1),
                Dir::L => self.polygons(1, ystart, ylen + 1),
            }
            self.labels.pop();
            self.dirs.pop();
            self.verts[next - 1] += 1;
            if closes {
                match d {
                    Dir::R => give(&mut self.ys, key),
                    Dir::L => give(&mut self.xs, key),
                }
            }
        }
    }
}

fn string_candidates(n: usize, xs: &Counts, ys: &Counts, dims: &[usize], total: usize) -> Vec<GradedString> {
    let mut out = Vec::new();
    for start in 1..=n {
        if dims[start - 1] == 0 {
            continue;
        }
        let mut s = Search {
            n,
            xs: xs.clone(),
            ys: ys.clone(),
            verts: dims.to_vec(),
            total,
            labels: vec![start],
            dirs: Vec::new(),
            out: &mut out,
        };
        s.verts[start - 1] -= 1;
        s.strings(1, start, 1);
    }
    out.into_iter().filter_map(|(l, d)| GradedString::new(n, d, l).ok()).collect()
}

fn polygon_candidates(n: usize, xs: &Counts, ys: &Counts, dims: &[usize], total: usize) -> Vec<GradedPolygon> {
    if total < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for start in 1..=n {
        if dims[start - 1] == 0 {
            continue;
        }
        let mut s = Search {
            n,
            xs: xs.clone(),
            ys: ys.clone(),
            verts: dims.to_vec(),
            total,
            labels: vec![start],
            dirs: Vec::new(),
            out: &mut out,
        };
        s.verts[start - 1] -= 1;
        // ystart/ylen of vertex 0 are placeholders; its y-run is closed at the end
        s.polygons(1, start, 0);
    }
    let mut polys: Vec<GradedPolygon> = out
        .into_iter()
        .filter_map(|(l, d)| GradedPolygon::new(n, d, l).ok())
        .filter(|p| !p.has_rotational_symmetry())
        .collect();
    polys.sort_by_key(|p| p.canonical());
    polys.dedup_by_key(|p| p.canonical());
    polys
}

/// Eigenvalue of the automorphism induced on the stable part of the relation
/// obtained by composing x and y⁻¹ around the polygon from vertex 0.
pub fn band_eigenvalue(g: &QuiverRep, p: &GradedPolygon, expected_dim: usize) -> Option<Rational> {
    let a = band_automorphism(g, p)?;
    if a.rows() != expected_dim || a.rows() == 0 {
        return None;
    }
    let lambda = a.trace() / Rational::from_integer(BigInt::from(a.rows()));
    let shifted = a.sub(&Matrix::scalar(a.rows(), &lambda));
    if !shifted.pow(a.rows() as u32).is_zero() || lambda.is_zero() {
        return None;
    }
    Some(lambda)
}

/// Matrix of the induced automorphism on E/E0, where E and E0 are the usual
/// stable subspaces of the walk relation C ⊆ V × V.
pub fn band_automorphism(g: &QuiverRep, p: &GradedPolygon) -> Option<Matrix> {
    let k = p.len();
    let labels = p.labels();
    let w = g.dims()[labels[0] - 1];
    let mut rel = LinearRelation::graph(&Matrix::identity(w));
    for i in 0..k {
        let (a, b) = (labels[i] - 1, labels[(i + 1) % k] - 1);
        let step = match p.dirs()[i] {
            Dir::R => LinearRelation::graph(g.x(a)),
            Dir::L => LinearRelation::graph(g.y(b)).inverse(),
        };
        rel = rel.then(&step);
    }
    let inv = rel.inverse();
    let iterate = |r: &LinearRelation, start: Subspace| {
        let mut cur = start;
        loop {
            let next = r.apply(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    };
    let im = iterate(&rel, Subspace::full(w));
    let z = iterate(&rel, Subspace::zero(w));
    let dom = iterate(&inv, Subspace::full(w));
    let ker = iterate(&inv, Subspace::zero(w));
    let e = im.intersect(&dom);
    let e0 = z.intersect(&dom).sum(&im.intersect(&ker));
    // coordinates of E/E0: extend a basis of E0 to one of E
    let e0_cols = e0.complement_columns();
    let quotient_basis: Vec<Vec<Rational>> = {
        let mut acc = e0.clone();
        let mut out = Vec::new();
        for v in e.basis() {
            if !acc.contains(v) {
                out.push(v.clone());
                acc = acc.sum(&Subspace::span(w, std::slice::from_ref(v)));
            }
        }
        out
    };
    let q = quotient_basis.len();
    if q == 0 {
        return None;
    }
    // columns: quotient coordinates (w.r.t. E0's complement) of the chosen basis
    let coords = |v: &[Rational]| -> Vec<Rational> {
        let r = e0.reduce(v);
        e0_cols.iter().map(|&c| r[c].clone()).collect()
    };
    let basis_coords = Matrix::from_columns(e0_cols.len(), &quotient_basis.iter().map(|v| coords(v)).collect::<Vec<_>>());
    let restricted = rel.restrict(&e, &e);
    let mut images = Vec::with_capacity(q);
    for v in &quotient_basis {
        // find (a, b) ∈ C|_E with a ≡ v mod E0
        let pairs: Vec<(&[Rational], &[Rational])> = restricted.pairs().collect();
        let firsts: Vec<Vec<Rational>> = pairs.iter().map(|(a, _)| coords(a)).collect();
        let m = Matrix::from_columns(e0_cols.len(), &firsts);
        let target = Matrix::from_columns(e0_cols.len(), &[coords(v)]);
        let sol = m.solve(&target)?;
        let mut img = vec![Rational::zero(); w];
        for (i, (_, b)) in pairs.iter().enumerate() {
            let c = sol.get(i, 0);
            if !c.is_zero() {
                for (t, x) in b.iter().enumerate() {
                    img[t] += c * x;
                }
            }
        }
        let col = basis_coords.solve(&Matrix::from_columns(e0_cols.len(), &[coords(&img)]))?;
        images.push(col.column(0));
    }
    let a = Matrix::from_columns(q, &images);
    if !a.is_invertible() {
        return None;
    }
    Some(a)
}
