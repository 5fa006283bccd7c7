//! Set-level comparisons between located zero sets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::locate::ZeroSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonPair {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroComparison {
    /// Smallest distance between a zero of one set and a zero of the other.
    pub min_distance: Option<f64>,
    /// Index pairs closer than the comparison radius.
    pub common: Vec<CommonPair>,
    pub delta: f64,
}

impl ZeroComparison {
    pub fn has_common_zero(&self) -> bool {
        !self.common.is_empty()
    }
}

/// All pairs `(i, j)` with `|z1ᵢ − z2ⱼ| < delta`.
pub fn compare_zero_sets(z1: &ZeroSet, z2: &ZeroSet, delta: f64) -> ZeroComparison {
    let mut min_distance: Option<f64> = None;
    let mut common = Vec::new();
    for (i, p) in z1.zeros.iter().enumerate() {
        for (j, q) in z2.zeros.iter().enumerate() {
            let d = (p.z() - q.z()).norm();
            min_distance = Some(min_distance.map_or(d, |m| m.min(d)));
            if d < delta {
                common.push(CommonPair {
                    first: i,
                    second: j,
                    distance: d,
                });
            }
        }
    }
    ZeroComparison {
        min_distance,
        common,
        delta,
    }
}

/// Largest nearest-neighbour distance after pairing the two lists one to one,
/// or `None` when the multisets have different sizes.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, (p - q).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFlags {
    pub no_real_zeros: bool,
    pub no_conjugate_pairs: bool,
}

/// Whether any zero lies within `axis_tol` of the real axis and whether any
/// off-axis zero has its conjugate (within `axis_tol`) in the set.
pub fn structure_checks(z: &ZeroSet, axis_tol: f64) -> StructureFlags {
    let pts = z.points();
    let no_real_zeros = pts.iter().all(|p| p.im.abs() > axis_tol);
    let no_conjugate_pairs = !pts.iter().enumerate().any(|(i, p)| {
        p.im.abs() > axis_tol
            && pts
                .iter()
                .enumerate()
                .any(|(j, q)| i != j && (q - p.conj()).norm() <= axis_tol)
    });
    StructureFlags {
        no_real_zeros,
        no_conjugate_pairs,
    }
}
