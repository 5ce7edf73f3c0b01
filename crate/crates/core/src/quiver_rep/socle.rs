use super::{p1, p2, QuiverRep};
use crate::linalg::Subspace;
use crate::string_band::SocleSeries;
use std::collections::BTreeMap;

/// soc(M)_j = ker x_j ∩ ker y_j.
pub fn socle_subspaces(m: &QuiverRep) -> Vec<Subspace> {
    (0..m.n()).map(|j| Subspace::kernel_of(&m.x(j).vstack(m.y(j)))).collect()
}

fn layer(dims: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    dims.enumerate().filter(|(_, d)| *d > 0).map(|(j, d)| (j + 1, d)).collect()
}

/// Socle layers, bottom first; each step passes to the quotient by the socle.
pub fn socle_filtration(m: &QuiverRep) -> SocleSeries {
    let mut cur = m.clone();
    let mut layers = Vec::new();
    while cur.total_dim() > 0 {
        let soc = socle_subspaces(&cur);
        assert!(soc.iter().any(|s| s.dim() > 0), "nilpotent representation with zero socle");
        layers.push(layer(soc.iter().map(Subspace::dim)));
        cur = cur.quotient(&soc).expect("socle is a submodule");
    }
    SocleSeries { layers }
}

/// Radical layers rad^{i}/rad^{i+1}, top first.
pub fn radical_layers(m: &QuiverRep) -> SocleSeries {
    let n = m.n();
    let mut rad: Vec<Subspace> = m.dims().iter().map(|&d| Subspace::full(d)).collect();
    let mut layers = Vec::new();
    while rad.iter().any(|s| s.dim() > 0) {
        let next: Vec<Subspace> = (0..n)
            .map(|j| {
                // x and y land in V_j from V_{π1 j} and V_{π2 j}
                let from_x = rad[p1(n, j)].image(m.x(p1(n, j)));
                let from_y = rad[p2(n, j)].image(m.y(p2(n, j)));
                from_x.sum(&from_y)
            })
            .collect();
        layers.push(layer((0..n).map(|j| rad[j].dim() - next[j].dim())));
        rad = next;
    }
    SocleSeries { layers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_rep::build_string_rep;
    use crate::string_band::{Dir::*, GradedString};

    #[test]
    fn worked_example() {
        let s = GradedString::new(3, vec![R, L, R, R, R], vec![2, 1, 1, 2, 1, 2]).unwrap();
        let m = build_string_rep(&s);
        assert_eq!(socle_filtration(&m), SocleSeries::from_label_lists(&[&[1, 2], &[1, 2], &[2], &[1]]));
    }

    #[test]
    fn top_is_socle_of_dual() {
        let s = GradedString::new(3, vec![R, L, R, R, R], vec![2, 1, 1, 2, 1, 2]).unwrap();
        let m = build_string_rep(&s);
        assert_eq!(radical_layers(&m), socle_filtration(&m.dual()));
    }
}
