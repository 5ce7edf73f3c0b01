use super::{p1, p2, QuiverRep, QuiverRepError};
use crate::linalg::{format_rational, parse_rational, Matrix};
use serde::{Deserialize, Serialize};

/// JSON document for a representation. Entries are `[vertex, row, col, "p/q"]`
/// with a 1-based source vertex and 0-based row/column inside the block;
/// only nonzero entries are listed, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub n: usize,
    pub dims: Vec<usize>,
    pub x: Vec<(usize, usize, usize, String)>,
    pub y: Vec<(usize, usize, usize, String)>,
}

fn entries(blocks: &[Matrix]) -> Vec<(usize, usize, usize, String)> {
    let mut out = Vec::new();
    for (j, b) in blocks.iter().enumerate() {
        for (r, c, v) in b.nonzero_entries() {
            out.push((j + 1, r, c, format_rational(v)));
        }
    }
    out
}

impl RepFile {
    pub fn from_rep(m: &QuiverRep) -> Self {
        RepFile { n: m.n, dims: m.dims.clone(), x: entries(&m.x), y: entries(&m.y) }
    }

    /// Builds the representation, checking shapes and relations.
    pub fn to_rep(&self) -> Result<QuiverRep, QuiverRepError> {
        let n = self.n;
        if n == 0 || self.dims.len() != n {
            return Err(QuiverRepError::Format(format!("dims must have {n} entries")));
        }
        let fill = |list: &[(usize, usize, usize, String)], t: &dyn Fn(usize) -> usize| {
            let mut blocks: Vec<Matrix> = (0..n).map(|j| Matrix::zeros(self.dims[t(j)], self.dims[j])).collect();
            for (v, r, c, s) in list {
                if *v == 0 || *v > n {
                    return Err(QuiverRepError::Format(format!("vertex {v} out of range")));
                }
                let b = &mut blocks[v - 1];
                if *r >= b.rows() || *c >= b.cols() {
                    return Err(QuiverRepError::Format(format!("entry ({r},{c}) outside block {v}")));
                }
                let q = parse_rational(s).map_err(|e| QuiverRepError::Format(e.to_string()))?;
                b.set(*r, *c, q);
            }
            Ok(blocks)
        };
        let x = fill(&self.x, &|j| p1(n, j))?;
        let y = fill(&self.y, &|j| p2(n, j))?;
        QuiverRep::new(n, self.dims.clone(), x, y)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, QuiverRepError> {
        serde_json::from_str(s).map_err(|e| QuiverRepError::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;
    use crate::quiver_rep::build_band_rep;
    use crate::string_band::{BandDescriptor, Dir::*, GradedPolygon};

    #[test]
    fn json_round_trip_is_bit_exact() {
        let p = GradedPolygon::new(2, vec![R, R, L, L], vec![1, 2, 1, 1]).unwrap();
        let m = build_band_rep(&BandDescriptor::new(p, frac(-3, 2), 2).unwrap());
        let text = m.to_file().to_json();
        let back = RepFile::from_json(&text).unwrap().to_rep().unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_file().to_json(), text);
        assert!(text.contains("\"-2/3\"") || text.contains("\"-3/2\""));
    }
}
