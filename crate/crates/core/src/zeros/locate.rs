//! Zero isolation by recursive quadrisection plus Newton polishing.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::{
    certify, count_with_rect, scan_boundary, scan_segment, winding_raw, AnalyticPair, SearchRect,
};
use crate::error::ZeroError;
use crate::transform::ClosedTransform;

/// Below this cell diameter a multi-zero cell is tried as a multiple zero.
const CLUSTER_PROBE: f64 = 1e-4;
const NEWTON_MAX_ITER: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocatedZero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: i64,
    /// `|F(z)|` at the returned point.
    pub residual: f64,
}

impl LocatedZero {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<LocatedZero>,
    /// The searched rectangle after any boundary nudging.
    pub rect: SearchRect,
    /// Winding count of the whole rectangle.
    pub total_count: i64,
    /// Largest `|F|` sampled on the outer contour.
    pub contour_sup: f64,
}

impl ZeroSet {
    pub fn points(&self) -> Vec<Complex64> {
        self.zeros.iter().map(LocatedZero::z).collect()
    }

    pub fn multiplicity_sum(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    /// Rows `z_re,z_im,multiplicity,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z_re,z_im,multiplicity,residual\n");
        for z in &self.zeros {
            out.push_str(&format!(
                "{:.17e},{:.17e},{},{:.6e}\n",
                z.re, z.im, z.multiplicity, z.residual
            ));
        }
        out
    }

    /// Zeros farther than `radius` from the origin.
    pub fn excluding_disk(&self, radius: f64) -> ZeroSet {
        ZeroSet {
            zeros: self
                .zeros
                .iter()
                .copied()
                .filter(|z| z.z().norm() > radius)
                .collect(),
            ..self.clone()
        }
    }
}

/// Newton iteration `z ← z − m·F/F′`; `None` on divergence.
fn newton(
    g: &AnalyticPair,
    start: Complex64,
    multiplicity: f64,
    tol: f64,
    bound: &SearchRect,
) -> Option<Complex64> {
    let mut z = start;
    let slack = bound.diameter();
    for _ in 0..NEWTON_MAX_ITER {
        let step = g.value(z) / g.derivative(z) * multiplicity;
        if !step.re.is_finite() || !step.im.is_finite() {
            return if g.value(z).norm() == 0.0 {
                Some(z)
            } else {
                None
            };
        }
        z -= step;
        if !bound.contains(z, slack) {
            return None;
        }
        if step.norm() <= tol {
            // one more step to settle the last digits
            let extra = g.value(z) / g.derivative(z) * multiplicity;
            if extra.re.is_finite() && extra.im.is_finite() && extra.norm() <= step.norm() {
                z -= extra;
            }
            return Some(z);
        }
    }
    None
}

struct Locator<'a> {
    g: &'a AnalyticPair,
    tol: f64,
}

impl Locator<'_> {
    /// Exact count of a sub-cell whose boundary has already been vetted.
    fn count_cell(&self, cell: &SearchRect, d_min: f64) -> Result<i64, ZeroError> {
        certify(winding_raw(self.g, cell, d_min))
    }

    fn threshold(&self, cell: &SearchRect) -> f64 {
        cell.boundary_margin
            .min(0.02 * cell.width().min(cell.height()))
            .max(1e-12)
    }

    /// Picks split lines that keep clear of zeros, returning the children
    /// with their boundary distance estimates.
    fn split(&self, cell: &SearchRect) -> Option<Vec<(SearchRect, f64)>> {
        let fractions = [0.5, 0.4, 0.6, 0.45, 0.55, 0.35, 0.65, 0.3, 0.7];
        let thr = self.threshold(cell);
        let lo = Complex64::new(cell.re_min, cell.im_min);
        let hi = Complex64::new(cell.re_max, cell.im_max);
        let re_cut = fractions
            .iter()
            .map(|f| cell.re_min + f * cell.width())
            .find(|&x| {
                let (d, _) = scan_segment(
                    self.g,
                    Complex64::new(x, lo.im),
                    Complex64::new(x, hi.im),
                    thr,
                );
                d >= 1.2 * thr
            })?;
        let im_cut = fractions
            .iter()
            .map(|f| cell.im_min + f * cell.height())
            .find(|&y| {
                let (d, _) = scan_segment(
                    self.g,
                    Complex64::new(lo.re, y),
                    Complex64::new(hi.re, y),
                    thr,
                );
                d >= 1.2 * thr
            })?;
        let children = cell.split_at(re_cut, im_cut);
        Some(
            children
                .iter()
                .map(|c| {
                    let (d, _) = scan_boundary(self.g, c, self.threshold(c));
                    (*c, d)
                })
                .collect(),
        )
    }

    fn resolve(&self, cell: SearchRect, count: i64) -> Result<Vec<LocatedZero>, ZeroError> {
        if count == 0 {
            return Ok(Vec::new());
        }
        if count == 1 {
            if let Some(z) = newton(self.g, cell.center(), 1.0, self.tol, &cell) {
                if cell.contains(z, 1e-12 * cell.diameter().max(1.0)) {
                    return Ok(vec![self.finish(z, 1)]);
                }
            }
        } else if cell.diameter() < CLUSTER_PROBE {
            if let Some(z) = newton(self.g, cell.center(), count as f64, self.tol, &cell) {
                if cell.contains(z, 0.0) {
                    return Ok(vec![self.finish(z, count)]);
                }
            }
        }
        if cell.diameter() < 100.0 * self.tol {
            return Err(ZeroError::ClusterUnresolved {
                diameter: cell.diameter(),
                count,
            });
        }
        let Some(children) = self.split(&cell) else {
            return Err(ZeroError::ClusterUnresolved {
                diameter: cell.diameter(),
                count,
            });
        };
        let counted: Vec<(SearchRect, i64)> = children
            .iter()
            .map(|(c, d)| self.count_cell(c, *d).map(|n| (*c, n)))
            .collect::<Result<_, _>>()?;
        let total: i64 = counted.iter().map(|(_, n)| n).sum();
        if total != count {
            return Err(ZeroError::NonIntegerWinding {
                value: total as f64,
            });
        }
        let parts: Vec<Vec<LocatedZero>> = counted
            .into_par_iter()
            .map(|(c, n)| self.resolve(c, n))
            .collect::<Result<_, _>>()?;
        Ok(parts.into_iter().flatten().collect())
    }

    fn finish(&self, z: Complex64, multiplicity: i64) -> LocatedZero {
        LocatedZero {
            re: z.re,
            im: z.im,
            multiplicity,
            residual: self.g.value(z).norm(),
        }
    }
}

/// All zeros of `F` in `rect`, each polished by Newton to `|Δz| ≤ tol`.
///
/// The result is sorted by `(Re z, Im z)` and its multiplicities add up to
/// the winding count of the (possibly nudged) rectangle.
pub fn locate_zeros(
    f: &ClosedTransform,
    rect: &SearchRect,
    tol: f64,
) -> Result<ZeroSet, ZeroError> {
    let g = AnalyticPair::new(f).map_err(|_| ZeroError::EmptyRect)?;
    let top = count_with_rect(&g, rect)?;
    let locator = Locator { g: &g, tol };
    let mut zeros = locator.resolve(top.rect, top.count)?;
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let set = ZeroSet {
        zeros,
        rect: top.rect,
        total_count: top.count,
        contour_sup: top.contour_sup,
    };
    debug_assert_eq!(set.multiplicity_sum(), set.total_count);
    Ok(set)
}

/// `|F|` on a `re_n × im_n` grid over `rect`, row-major in `Im` then `Re`.
pub fn abs_grid(
    f: &ClosedTransform,
    rect: &SearchRect,
    re_n: usize,
    im_n: usize,
) -> Vec<(f64, f64, f64)> {
    let lin = |lo: f64, hi: f64, n: usize, k: usize| {
        if n > 1 {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        } else {
            0.5 * (lo + hi)
        }
    };
    let mut out = Vec::with_capacity(re_n * im_n);
    for j in 0..im_n {
        let y = lin(rect.im_min, rect.im_max, im_n, j);
        for i in 0..re_n {
            let x = lin(rect.re_min, rect.re_max, re_n, i);
            out.push((x, y, f.eval(Complex64::new(x, y)).norm()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, DensityPoly};
    use crate::transform::{closed_form, reflected_transform};
    use std::f64::consts::PI;

    #[test]
    fn constant_density_zeros() {
        let f = closed_form(&DensityPoly::from_ints(&[1]), &rat(1, 1)).unwrap();
        let zs = locate_zeros(&f, &SearchRect::new(-7.0, 7.0, -1.0, 1.0), 1e-12).unwrap();
        assert_eq!(zs.total_count, 2);
        assert_eq!(zs.zeros.len(), 2);
        assert!((zs.zeros[0].z() - Complex64::new(-2.0 * PI, 0.0)).norm() < 1e-10);
        assert!((zs.zeros[1].z() - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn linear_density_zeros_are_complex() {
        let f = closed_form(&DensityPoly::from_ints(&[0, 2]), &rat(1, 1)).unwrap();
        let zs = locate_zeros(&f, &SearchRect::new(-20.0, 20.0, -8.0, 8.0), 1e-12).unwrap();
        assert!(zs.total_count > 0);
        assert_eq!(zs.multiplicity_sum(), zs.total_count);
        assert!(zs.zeros.iter().all(|z| z.im.abs() > 0.1));
        for z in &zs.zeros {
            assert!(z.residual <= 1e-9 * zs.contour_sup.max(1.0));
        }
        // sorted
        assert!(zs.zeros.windows(2).all(|w| w[0].re <= w[1].re));
    }

    #[test]
    fn coincident_pair_zero_sets_match() {
        let a = rat(1, 1);
        let psi1 = DensityPoly::from_ints(&[2, -2]);
        let psi2 = DensityPoly::from_ints(&[0, 2]);
        let rect = SearchRect::new(-20.0, 20.0, -6.0, 6.0);
        let z1 = locate_zeros(&closed_form(&psi1, &a).unwrap(), &rect, 1e-12).unwrap();
        let z21 = locate_zeros(&reflected_transform(&psi2, &a).unwrap(), &rect, 1e-12).unwrap();
        assert_eq!(z1.zeros.len(), z21.zeros.len());
        for (p, q) in z1.zeros.iter().zip(&z21.zeros) {
            assert!((p.z() - q.z()).norm() < 1e-8);
        }
    }

    #[test]
    fn csv_layout() {
        let f = closed_form(&DensityPoly::from_ints(&[1]), &rat(1, 1)).unwrap();
        let zs = locate_zeros(&f, &SearchRect::new(-7.0, 7.0, -1.0, 1.0), 1e-12).unwrap();
        let csv = zs.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "z_re,z_im,multiplicity,residual");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn abs_grid_row_major() {
        let f = closed_form(&DensityPoly::from_ints(&[1]), &rat(1, 1)).unwrap();
        let g = abs_grid(&f, &SearchRect::new(-1.0, 1.0, -1.0, 1.0), 3, 3);
        assert_eq!(g.len(), 9);
        assert_eq!((g[1].0, g[1].1), (0.0, -1.0));
        assert!((g[4].2 - 1.0).abs() < 1e-15);
    }
}
