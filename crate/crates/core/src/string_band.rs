//! Graded strings and polygons of the quiver Q_n and their predicted socle series.
//!
//! Conventions: a string is read left to right; `R` is an x-arrow pointing right
//! (`x(e_i) = e_{i+1}`), `L` is a y-arrow pointing left (`y(e_{i+1}) = e_i`).
//! Labels are 1-based vertex indices of Q_n.

use crate::linalg::{format_rational, parse_rational, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StringBandError {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("label {label} outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("expected {expected} directions, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a string needs at least one vertex")]
    Empty,
    #[error("labels incompatible with arrow {position}")]
    Incompatible { position: usize },
    #[error("a polygon needs more than two vertices, got {0}")]
    TooShort(usize),
    #[error("polygon is not directed: all arrows point the same way")]
    Undirected,
    #[error("polygon has a rotational symmetry")]
    Symmetric,
    #[error("vertex {0} is not a sink")]
    NotASink(usize),
    #[error("band eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error("Jordan block size must be positive")]
    ZeroJordanSize,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    /// x-arrow pointing right.
    R,
    /// y-arrow pointing left.
    L,
}

impl Dir {
    fn symbol(self) -> char {
        match self {
            Dir::R => 'R',
            Dir::L => 'L',
        }
    }
}

/// π1 = (12)(34)…, labels 1-based.
pub fn pi1(n: usize, j: usize) -> usize {
    if j % 2 == 1 {
        if j < n { j + 1 } else { j }
    } else {
        j - 1
    }
}

/// π2 = (23)(45)…, labels 1-based.
pub fn pi2(n: usize, j: usize) -> usize {
    if j == 1 {
        1
    } else if j.is_multiple_of(2) {
        if j < n { j + 1 } else { j }
    } else {
        j - 1
    }
}

pub fn step(n: usize, d: Dir, j: usize) -> usize {
    match d {
        Dir::R => pi1(n, j),
        Dir::L => pi2(n, j),
    }
}

fn check_labels(n: usize, labels: &[usize]) -> Result<(), StringBandError> {
    if n == 0 {
        return Err(StringBandError::ZeroRank);
    }
    match labels.iter().find(|&&l| l == 0 || l > n) {
        Some(&label) => Err(StringBandError::LabelOutOfRange { label, n }),
        None => Ok(()),
    }
}

/// True iff every arrow is compatible with the labelling; errors on malformed input.
pub fn validate_string(n: usize, dirs: &[Dir], labels: &[usize]) -> Result<bool, StringBandError> {
    if labels.is_empty() {
        return Err(StringBandError::Empty);
    }
    check_labels(n, labels)?;
    if dirs.len() + 1 != labels.len() {
        return Err(StringBandError::LengthMismatch { expected: labels.len() - 1, got: dirs.len() });
    }
    Ok(first_incompatible(n, dirs, labels, false).is_none())
}

fn first_incompatible(n: usize, dirs: &[Dir], labels: &[usize], cyclic: bool) -> Option<usize> {
    let k = labels.len();
    (0..dirs.len()).find(|&i| {
        let next = if cyclic { labels[(i + 1) % k] } else { labels[i + 1] };
        step(n, dirs[i], labels[i]) != next
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedString {
    n: usize,
    dirs: Vec<Dir>,
    labels: Vec<usize>,
}

impl GradedString {
    pub fn new(n: usize, dirs: Vec<Dir>, labels: Vec<usize>) -> Result<Self, StringBandError> {
        if !validate_string(n, &dirs, &labels)? {
            let position = first_incompatible(n, &dirs, &labels, false).unwrap();
            return Err(StringBandError::Incompatible { position });
        }
        Ok(GradedString { n, dirs, labels })
    }

    /// The string determined by a start label and a direction sequence.
    pub fn from_start(n: usize, start: usize, dirs: Vec<Dir>) -> Result<Self, StringBandError> {
        let mut labels = vec![start];
        for d in &dirs {
            labels.push(step(n, *d, *labels.last().unwrap()));
        }
        Self::new(n, dirs, labels)
    }

    /// The simple module L_j.
    pub fn simple(n: usize, j: usize) -> Result<Self, StringBandError> {
        Self::new(n, Vec::new(), vec![j])
    }

    /// X_m(s): m vertices joined by x-arrows, starting at label s.
    pub fn homogeneous_x(n: usize, m: usize, s: usize) -> Result<Self, StringBandError> {
        Self::from_start(n, s, vec![Dir::R; m.saturating_sub(1)])
    }

    /// Y_m(s): m vertices joined by y-arrows, starting at label s.
    pub fn homogeneous_y(n: usize, m: usize, s: usize) -> Result<Self, StringBandError> {
        Self::from_start(n, s, vec![Dir::L; m.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Reading backwards; the string of the dual module.
    pub fn reverse(&self) -> GradedString {
        let mut dirs = self.dirs.clone();
        dirs.reverse();
        let mut labels = self.labels.clone();
        labels.reverse();
        GradedString { n: self.n, dirs, labels }
    }

    /// Concatenation when the last label of `self` equals the first of `other`
    /// and the joined arrows stay compatible (the two ends are identified).
    pub fn join(&self, other: &GradedString) -> Result<GradedString, StringBandError> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels[1..]);
        let mut dirs = self.dirs.clone();
        dirs.extend_from_slice(&other.dirs);
        if self.labels.last() != other.labels.first() {
            return Err(StringBandError::Incompatible { position: self.dirs.len() });
        }
        GradedString::new(self.n, dirs, labels)
    }

    pub fn is_sink(&self, i: usize) -> bool {
        let out_right = i + 1 < self.len() && self.dirs[i] == Dir::R;
        let out_left = i > 0 && self.dirs[i - 1] == Dir::L;
        !out_right && !out_left
    }

    /// Arrows as (source, target) vertex positions.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.dirs
            .iter()
            .enumerate()
            .map(|(i, d)| match d {
                Dir::R => (i, i + 1),
                Dir::L => (i + 1, i),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedPolygon {
    n: usize,
    dirs: Vec<Dir>,
    labels: Vec<usize>,
}

impl GradedPolygon {
    /// `dirs[i]` is the arrow between vertex i and vertex i+1 (cyclically).
    pub fn new(n: usize, dirs: Vec<Dir>, labels: Vec<usize>) -> Result<Self, StringBandError> {
        let k = labels.len();
        if k <= 2 {
            return Err(StringBandError::TooShort(k));
        }
        check_labels(n, &labels)?;
        if dirs.len() != k {
            return Err(StringBandError::LengthMismatch { expected: k, got: dirs.len() });
        }
        if let Some(position) = first_incompatible(n, &dirs, &labels, true) {
            return Err(StringBandError::Incompatible { position });
        }
        if !(dirs.contains(&Dir::R) && dirs.contains(&Dir::L)) {
            return Err(StringBandError::Undirected);
        }
        Ok(GradedPolygon { n, dirs, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_sink(&self, i: usize) -> bool {
        let k = self.len();
        self.dirs[(i + k - 1) % k] == Dir::R && self.dirs[i] == Dir::L
    }

    pub fn is_source(&self, i: usize) -> bool {
        let k = self.len();
        self.dirs[(i + k - 1) % k] == Dir::L && self.dirs[i] == Dir::R
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_sink(i)).collect()
    }

    /// Rotation making vertex `s` the first vertex.
    pub fn rotate(&self, s: usize) -> GradedPolygon {
        let mut dirs = self.dirs.clone();
        let mut labels = self.labels.clone();
        dirs.rotate_left(s % self.len());
        labels.rotate_left(s % self.len());
        GradedPolygon { n: self.n, dirs, labels }
    }

    /// Offset of the lexicographically least rotation.
    pub fn canonical_offset(&self) -> usize {
        (0..self.len()).min_by_key(|&s| self.rotate(s)).unwrap_or(0)
    }

    pub fn canonical(&self) -> GradedPolygon {
        self.rotate(self.canonical_offset())
    }

    pub fn has_rotational_symmetry(&self) -> bool {
        has_rotational_symmetry(&self.dirs, &self.labels)
    }

    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        self.dirs
            .iter()
            .enumerate()
            .map(|(i, d)| match d {
                Dir::R => (i, (i + 1) % k),
                Dir::L => ((i + 1) % k, i),
            })
            .collect()
    }
}

/// True iff a nontrivial rotation fixes both cyclic sequences.
pub fn has_rotational_symmetry(dirs: &[Dir], labels: &[usize]) -> bool {
    let k = labels.len();
    (1..k).any(|s| {
        k.is_multiple_of(s) && (0..k).all(|i| dirs[i] == dirs[(i + s) % k] && labels[i] == labels[(i + s) % k])
    })
}

/// Opens the polygon at a sink: vertices v_i, …, v_{i−1}, v̄_i.
pub fn unfold(p: &GradedPolygon, sink: usize) -> Result<GradedString, StringBandError> {
    if sink >= p.len() || !p.is_sink(sink) {
        return Err(StringBandError::NotASink(sink));
    }
    let r = p.rotate(sink);
    let mut labels = r.labels.clone();
    labels.push(r.labels[0]);
    GradedString::new(p.n, r.dirs.clone(), labels)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BandDescriptor {
    polygon: GradedPolygon,
    lambda: Rational,
    r: usize,
}

impl BandDescriptor {
    pub fn new(polygon: GradedPolygon, lambda: Rational, r: usize) -> Result<Self, StringBandError> {
        if lambda.is_zero() {
            return Err(StringBandError::ZeroEigenvalue);
        }
        if r == 0 {
            return Err(StringBandError::ZeroJordanSize);
        }
        if polygon.has_rotational_symmetry() {
            return Err(StringBandError::Symmetric);
        }
        Ok(BandDescriptor { polygon, lambda, r })
    }

    pub fn polygon(&self) -> &GradedPolygon {
        &self.polygon
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Same band with the polygon in its least rotation.
    pub fn normalized(&self) -> BandDescriptor {
        BandDescriptor { polygon: self.polygon.canonical(), lambda: self.lambda.clone(), r: self.r }
    }
}

/// Layer i lists the multiplicities of the simples L_j in soc_i / soc_{i−1}.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SocleSeries {
    pub layers: Vec<BTreeMap<usize, usize>>,
}

impl SocleSeries {
    pub fn total(&self) -> usize {
        self.layers.iter().flat_map(|l| l.values()).sum()
    }

    pub fn from_label_lists(lists: &[&[usize]]) -> Self {
        let layers = lists
            .iter()
            .map(|l| {
                let mut m = BTreeMap::new();
                for &j in l.iter() {
                    *m.entry(j).or_insert(0) += 1;
                }
                m
            })
            .collect();
        SocleSeries { layers }
    }

    /// Layerwise sum of multiplicities.
    pub fn merge(&self, other: &SocleSeries) -> SocleSeries {
        let len = self.layers.len().max(other.layers.len());
        let layers = (0..len)
            .map(|i| {
                let mut m = self.layers.get(i).cloned().unwrap_or_default();
                for (j, c) in other.layers.get(i).into_iter().flatten() {
                    *m.entry(*j).or_insert(0) += c;
                }
                m
            })
            .collect();
        SocleSeries { layers }
    }

    /// Diagram lines `soc_i/soc_{i-1}: L_1 + L_2`, bottom layer first.
    pub fn diagram(&self) -> Vec<String> {
        self.layers
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let terms: Vec<String> = l
                    .iter()
                    .flat_map(|(j, c)| std::iter::repeat_n(format!("L_{j}"), *c))
                    .collect();
                format!("soc_{}/soc_{}: {}", i + 1, i, terms.join(" + "))
            })
            .collect()
    }
}

/// Either kind of quiver accepted by [`predicted_socle`].
#[derive(Debug, Clone, Copy)]
pub enum LabelledQuiver<'a> {
    String(&'a GradedString),
    Polygon(&'a GradedPolygon),
}

/// Repeatedly strips sinks and the arrows into them.
pub fn predicted_socle(q: LabelledQuiver<'_>, r: usize) -> SocleSeries {
    let (labels, arrows) = match q {
        LabelledQuiver::String(s) => (s.labels(), s.arrows()),
        LabelledQuiver::Polygon(p) => (p.labels(), p.arrows()),
    };
    let mut alive = vec![true; labels.len()];
    let mut layers = Vec::new();
    while alive.iter().any(|&a| a) {
        let sinks: Vec<usize> = (0..labels.len())
            .filter(|&v| alive[v] && !arrows.iter().any(|&(s, t)| s == v && alive[t]))
            .collect();
        assert!(!sinks.is_empty(), "sink removal stalled on a cyclic quiver");
        let mut layer = BTreeMap::new();
        for &v in &sinks {
            *layer.entry(labels[v]).or_insert(0) += r;
            alive[v] = false;
        }
        layers.push(layer);
    }
    SocleSeries { layers }
}

/// All valid graded strings with at most `max_len` vertices, ordered by
/// length, then labels, then directions.
pub fn enumerate_strings(n: usize, max_len: usize) -> Vec<GradedString> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for start in 1..=n {
            for mask in 0..(1u64 << (len - 1)) {
                let dirs: Vec<Dir> =
                    (0..len - 1).map(|b| if mask >> (len - 2 - b) & 1 == 1 { Dir::L } else { Dir::R }).collect();
                if let Ok(s) = GradedString::from_start(n, start, dirs) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.len(), &a.labels, &a.dirs).cmp(&(b.len(), &b.labels, &b.dirs)));
    out
}

/// Directed asymmetric polygons with perimeter in 3..=max_perimeter, each in
/// its least rotation.
pub fn enumerate_bands(n: usize, max_perimeter: usize) -> Vec<GradedPolygon> {
    let mut out = Vec::new();
    for k in 3..=max_perimeter {
        for start in 1..=n {
            for mask in 0..(1u64 << k) {
                let dirs: Vec<Dir> =
                    (0..k).map(|b| if mask >> (k - 1 - b) & 1 == 1 { Dir::L } else { Dir::R }).collect();
                let mut labels = vec![start];
                for d in &dirs[..k - 1] {
                    labels.push(step(n, *d, *labels.last().unwrap()));
                }
                let Ok(p) = GradedPolygon::new(n, dirs, labels) else {
                    continue;
                };
                if !p.has_rotational_symmetry() && p.canonical() == p {
                    out.push(p);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.len(), &a.labels, &a.dirs).cmp(&(b.len(), &b.labels, &b.dirs)));
    out
}

/// A string or band summand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Descriptor {
    String(GradedString),
    Band(BandDescriptor),
}

impl Descriptor {
    pub fn n(&self) -> usize {
        match self {
            Descriptor::String(s) => s.n(),
            Descriptor::Band(b) => b.polygon().n(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Descriptor::String(s) => s.len(),
            Descriptor::Band(b) => b.polygon().len() * b.r(),
        }
    }

    pub fn predicted_socle(&self) -> SocleSeries {
        match self {
            Descriptor::String(s) => predicted_socle(LabelledQuiver::String(s), 1),
            Descriptor::Band(b) => predicted_socle(LabelledQuiver::Polygon(b.polygon()), b.r()),
        }
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for GradedString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "string n={} labels={} dirs={}",
            self.n,
            join(&self.labels),
            join(self.dirs.iter().map(|d| d.symbol()))
        )
    }
}

impl fmt::Display for GradedPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "polygon n={} labels={} dirs={}",
            self.n,
            join(&self.labels),
            join(self.dirs.iter().map(|d| d.symbol()))
        )
    }
}

impl fmt::Display for BandDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.polygon;
        write!(
            f,
            "band n={} labels={} dirs={} lambda={} r={}",
            p.n,
            join(&p.labels),
            join(p.dirs.iter().map(|d| d.symbol())),
            format_rational(&self.lambda),
            self.r
        )
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::String(s) => s.fmt(f),
            Descriptor::Band(b) => b.fmt(f),
        }
    }
}

fn parse_fields(s: &str, kind: &str, keys: &[&str]) -> Result<Vec<String>, StringBandError> {
    let err = |m: &str| StringBandError::Parse(format!("{m} in `{s}`"));
    let mut tokens = s.split_whitespace();
    if tokens.next() != Some(kind) {
        return Err(err(&format!("expected `{kind}`")));
    }
    let mut found: BTreeMap<&str, String> = BTreeMap::new();
    for t in tokens {
        let (k, v) = t.split_once('=').ok_or_else(|| err("expected key=value"))?;
        if !keys.contains(&k) {
            return Err(err(&format!("unknown key `{k}`")));
        }
        if found.insert(k, v.to_string()).is_some() {
            return Err(err(&format!("duplicate key `{k}`")));
        }
    }
    keys.iter().map(|k| found.remove(k).ok_or_else(|| err(&format!("missing `{k}`")))).collect()
}

fn parse_usize(v: &str) -> Result<usize, StringBandError> {
    v.parse().map_err(|_| StringBandError::Parse(format!("bad integer `{v}`")))
}

fn parse_labels(v: &str) -> Result<Vec<usize>, StringBandError> {
    v.split(',').map(parse_usize).collect()
}

fn parse_dirs(v: &str) -> Result<Vec<Dir>, StringBandError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|d| match d {
            "R" => Ok(Dir::R),
            "L" => Ok(Dir::L),
            _ => Err(StringBandError::Parse(format!("bad direction `{d}`"))),
        })
        .collect()
}

impl FromStr for GradedString {
    type Err = StringBandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f = parse_fields(s, "string", &["n", "labels", "dirs"])?;
        GradedString::new(parse_usize(&f[0])?, parse_dirs(&f[2])?, parse_labels(&f[1])?)
    }
}

impl FromStr for GradedPolygon {
    type Err = StringBandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f = parse_fields(s, "polygon", &["n", "labels", "dirs"])?;
        GradedPolygon::new(parse_usize(&f[0])?, parse_dirs(&f[2])?, parse_labels(&f[1])?)
    }
}

impl FromStr for BandDescriptor {
    type Err = StringBandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f = parse_fields(s, "band", &["n", "labels", "dirs", "lambda", "r"])?;
        let p = GradedPolygon::new(parse_usize(&f[0])?, parse_dirs(&f[2])?, parse_labels(&f[1])?)?;
        let lambda = parse_rational(&f[3]).map_err(|e| StringBandError::Parse(e.to_string()))?;
        BandDescriptor::new(p, lambda, parse_usize(&f[4])?)
    }
}

impl FromStr for Descriptor {
    type Err = StringBandError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_whitespace().next() {
            Some("string") => s.parse().map(Descriptor::String),
            Some("band") => s.parse().map(Descriptor::Band),
            _ => Err(StringBandError::Parse(format!("expected `string` or `band` in `{s}`"))),
        }
    }
}
