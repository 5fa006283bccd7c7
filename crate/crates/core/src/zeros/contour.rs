//! Argument-principle zero counting on axis-aligned rectangles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BezoutError, ZeroError};
use crate::quadrature::{adaptive, GaussLegendre};
use crate::transform::{differentiate, ClosedTransform};

/// Attempts at moving an edge away from a nearby zero.
pub const MAX_NUDGES: usize = 5;

/// Largest admissible distance of the unrounded winding number from an integer.
pub const INTEGER_SLACK: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    /// Minimum admissible distance between the contour and a zero.
    #[serde(default = "default_margin")]
    pub boundary_margin: f64,
}

fn default_margin() -> f64 {
    1e-3
}

impl SearchRect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
            boundary_margin: default_margin(),
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.boundary_margin = margin;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.re_min < self.re_max && self.im_min < self.im_max && self.boundary_margin > 0.0
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    /// Reflection across the real axis.
    pub fn mirrored(&self) -> Self {
        Self {
            im_min: -self.im_max,
            im_max: -self.im_min,
            ..*self
        }
    }

    /// Corners in counterclockwise order starting bottom-left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// The four sub-rectangles obtained by splitting at `(re_cut, im_cut)`.
    pub fn split_at(&self, re_cut: f64, im_cut: f64) -> [SearchRect; 4] {
        let m = self.boundary_margin;
        [
            SearchRect {
                re_min: self.re_min,
                re_max: re_cut,
                im_min: self.im_min,
                im_max: im_cut,
                boundary_margin: m,
            },
            SearchRect {
                re_min: re_cut,
                re_max: self.re_max,
                im_min: self.im_min,
                im_max: im_cut,
                boundary_margin: m,
            },
            SearchRect {
                re_min: self.re_min,
                re_max: re_cut,
                im_min: im_cut,
                im_max: self.im_max,
                boundary_margin: m,
            },
            SearchRect {
                re_min: re_cut,
                re_max: self.re_max,
                im_min: im_cut,
                im_max: self.im_max,
                boundary_margin: m,
            },
        ]
    }
}

/// `F` paired with its exact derivative for the numeric routines.
#[derive(Clone, Debug)]
pub struct AnalyticPair {
    pub f: ClosedTransform,
    pub df: ClosedTransform,
}

impl AnalyticPair {
    pub fn new(f: &ClosedTransform) -> Result<Self, BezoutError> {
        Ok(Self {
            f: f.clone(),
            df: differentiate(f)?,
        })
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.f.eval(z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.df.eval(z)
    }

    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        self.df.eval(z) / self.f.eval(z)
    }

    /// `|F/F′|`, a first-order estimate of the distance to the nearest zero.
    pub fn newton_distance(&self, z: Complex64) -> f64 {
        (self.f.eval(z) / self.df.eval(z)).norm()
    }
}

/// Smallest Newton-distance estimate along the segment, sampled with spacing
/// at most `spacing`, together with the largest `|F|` seen.
pub(crate) fn scan_segment(
    g: &AnalyticPair,
    from: Complex64,
    to: Complex64,
    spacing: f64,
) -> (f64, f64) {
    let len = (to - from).norm();
    let n = ((len / spacing).ceil() as usize).max(4);
    let mut d_min = f64::INFINITY;
    let mut f_max: f64 = 0.0;
    for k in 0..=n {
        let z = from + (to - from) * (k as f64 / n as f64);
        let fz = g.value(z);
        f_max = f_max.max(fz.norm());
        let d = (fz / g.derivative(z)).norm();
        d_min = d_min.min(if d.is_nan() { 0.0 } else { d });
    }
    (d_min, f_max)
}

/// Boundary scan of a whole rectangle: `(min distance estimate, sup |F|)`.
pub(crate) fn scan_boundary(g: &AnalyticPair, rect: &SearchRect, spacing: f64) -> (f64, f64) {
    let c = rect.corners();
    (0..4)
        .map(|k| scan_segment(g, c[k], c[(k + 1) % 4], spacing))
        .fold((f64::INFINITY, 0.0), |(d, f), (d2, f2)| {
            (d.min(d2), f.max(f2))
        })
}

/// `(1/2πi)∮ F′/F dz` over one straight edge.
fn edge_winding(
    g: &AnalyticPair,
    rule: &GaussLegendre,
    from: Complex64,
    to: Complex64,
    d_min: f64,
) -> Complex64 {
    let dz = to - from;
    let len = dz.norm();
    // panels no longer than the distance to the closest zero seen on the edge
    let panel = (0.5 * d_min).clamp(1e-6, 0.5);
    let panels = ((len / panel).ceil() as usize).clamp(2, 200_000);
    let f = |s: f64| g.log_derivative(from + dz * s) * dz;
    let h = 1.0 / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = k as f64 * h;
            adaptive(rule, &f, lo, lo + h, 1e-9 * h, 1e-10, 12)
        })
        .sum::<Complex64>()
        / (2.0 * PI * Complex64::i())
}

/// Unrounded winding number of `F` around `rect`, no nudging.
pub(crate) fn winding_raw(g: &AnalyticPair, rect: &SearchRect, d_min: f64) -> Complex64 {
    let rule = GaussLegendre::new(16);
    let c = rect.corners();
    (0..4)
        .map(|k| edge_winding(g, &rule, c[k], c[(k + 1) % 4], d_min))
        .sum()
}

/// Rounds a winding value, rejecting values that are not nearly integral.
pub(crate) fn certify(w: Complex64) -> Result<i64, ZeroError> {
    let rounded = w.re.round();
    if (w.re - rounded).abs() > INTEGER_SLACK || w.im.abs() > INTEGER_SLACK || !w.re.is_finite() {
        return Err(ZeroError::NonIntegerWinding { value: w.re });
    }
    Ok(rounded as i64)
}

/// Outcome of a certified count: the (possibly nudged) rectangle, the count
/// and the largest boundary `|F|`.
#[derive(Clone, Copy, Debug)]
pub struct CountResult {
    pub rect: SearchRect,
    pub count: i64,
    pub contour_sup: f64,
}

/// Moves every edge outward by a growing multiple of the margin until the
/// contour keeps a margin-sized distance from every zero, then counts.
pub fn count_with_rect(g: &AnalyticPair, rect: &SearchRect) -> Result<CountResult, ZeroError> {
    if !rect.is_valid() {
        return Err(ZeroError::EmptyRect);
    }
    if !g.f.fits_double(rect.im_min.abs().max(rect.im_max.abs())) {
        return Err(ZeroError::Overflow);
    }
    let margin = rect.boundary_margin;
    let mut current = *rect;
    for attempt in 0..=MAX_NUDGES {
        let (d_min, sup) = scan_boundary(g, &current, margin);
        if d_min >= 1.2 * margin {
            let count = certify(winding_raw(g, &current, d_min))?;
            return Ok(CountResult {
                rect: current,
                count,
                contour_sup: sup,
            });
        }
        // irregular step so repeated nudges do not land on a lattice of zeros
        let step = margin * (2.0 + 1.618 * attempt as f64);
        current = SearchRect {
            re_min: current.re_min - step,
            re_max: current.re_max + step,
            im_min: current.im_min - step,
            im_max: current.im_max + step,
            boundary_margin: margin,
        };
    }
    Err(ZeroError::BoundaryZero {
        attempts: MAX_NUDGES,
    })
}

/// Number of zeros of `F` inside `rect`, counted with multiplicity.
pub fn count_zeros(f: &ClosedTransform, rect: &SearchRect) -> Result<i64, ZeroError> {
    let g = AnalyticPair::new(f).map_err(|_| ZeroError::EmptyRect)?;
    count_with_rect(&g, rect).map(|r| r.count)
}
