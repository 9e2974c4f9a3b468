//! Rational-hat vectorization of barcodes, with analytic gradients.
//!
//! Hat `i` with center `c` and radius `r` maps a multiset of points `p` to
//!
//! ```text
//! sum_p  1 / (1 + |p - c|_1)  -  1 / (1 + | |r| - |p - c|_1 |)
//! ```
//!
//! Derivatives use `sign(0) = 0` at the kinks of `|.|`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::barcode::{BarKind, ExtendedBarcode};
use crate::datasets::stream_rng;
use crate::error::{Error, Result};

pub const DEFAULT_K: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalHatParams {
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
}

impl RationalHatParams {
    pub fn new(centers: Vec<[f64; 2]>, radii: Vec<f64>) -> Result<Self> {
        let p = RationalHatParams { centers, radii };
        p.validate()?;
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.radii.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::InvalidParams("at least one hat is required".into()));
        }
        if self.centers.len() != self.radii.len() {
            return Err(Error::InvalidParams(format!(
                "{} centers for {} radii",
                self.centers.len(),
                self.radii.len()
            )));
        }
        let finite = self.radii.iter().chain(self.centers.iter().flatten()).all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("hat parameters must be finite".into()));
        }
        Ok(())
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn l1(p: [f64; 2], c: [f64; 2]) -> f64 {
    (p[0] - c[0]).abs() + (p[1] - c[1]).abs()
}

fn hat(p: [f64; 2], c: [f64; 2], r: f64) -> f64 {
    let d = l1(p, c);
    1.0 / (1.0 + d) - 1.0 / (1.0 + (r.abs() - d).abs())
}

/// Partial derivatives of one hat term: (d/dp, d/dc, d/dr).
fn hat_partials(p: [f64; 2], c: [f64; 2], r: f64) -> ([f64; 2], [f64; 2], f64) {
    let d = l1(p, c);
    let s = r.abs() - d;
    let tail = sign(s) / ((1.0 + s.abs()) * (1.0 + s.abs()));
    let dv_dd = -1.0 / ((1.0 + d) * (1.0 + d)) - tail;
    let dv_drho = tail;
    let dp = [dv_dd * sign(p[0] - c[0]), dv_dd * sign(p[1] - c[1])];
    (dp, [-dp[0], -dp[1]], dv_drho * sign(r))
}

/// One coordinate per hat, each summed over all points. Points are summed
/// in sorted order, so the result depends only on the multiset.
pub fn rational_hat(points: &[[f64; 2]], params: &RationalHatParams) -> Vec<f64> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    params
        .centers
        .iter()
        .zip(&params.radii)
        .map(|(&c, &r)| sorted.iter().map(|&p| hat(p, c, r)).sum())
        .collect()
}

/// Full derivative information for [`rational_hat`].
#[derive(Debug, Clone, PartialEq)]
pub struct RationalHatJacobian {
    pub value: Vec<f64>,
    /// `wrt_points[i][b]` is the derivative of coordinate `i` by point `b`.
    pub wrt_points: Vec<Vec<[f64; 2]>>,
    /// Coordinate `i` depends only on center `i`.
    pub wrt_centers: Vec<[f64; 2]>,
    /// Coordinate `i` depends only on radius `i`.
    pub wrt_radii: Vec<f64>,
}

pub fn rational_hat_grad(points: &[[f64; 2]], params: &RationalHatParams) -> RationalHatJacobian {
    let k = params.k();
    let mut jac = RationalHatJacobian {
        value: rational_hat(points, params),
        wrt_points: vec![vec![[0.0; 2]; points.len()]; k],
        wrt_centers: vec![[0.0; 2]; k],
        wrt_radii: vec![0.0; k],
    };
    for i in 0..k {
        let (c, r) = (params.centers[i], params.radii[i]);
        for (b, &p) in points.iter().enumerate() {
            let (dp, dc, dr) = hat_partials(p, c, r);
            jac.wrt_points[i][b] = dp;
            jac.wrt_centers[i][0] += dc[0];
            jac.wrt_centers[i][1] += dc[1];
            jac.wrt_radii[i] += dr;
        }
    }
    jac
}

/// Gradients of `<cotangent, rational_hat(points)>`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalHatVjp {
    pub points: Vec<[f64; 2]>,
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
}

pub fn rational_hat_vjp(points: &[[f64; 2]], params: &RationalHatParams, cotangent: &[f64]) -> Result<RationalHatVjp> {
    if cotangent.len() != params.k() {
        return Err(Error::InvalidParams(format!(
            "cotangent has length {}, expected {}",
            cotangent.len(),
            params.k()
        )));
    }
    let mut out = RationalHatVjp {
        points: vec![[0.0; 2]; points.len()],
        centers: vec![[0.0; 2]; params.k()],
        radii: vec![0.0; params.k()],
    };
    for (i, &w) in cotangent.iter().enumerate() {
        let (c, r) = (params.centers[i], params.radii[i]);
        for (b, &p) in points.iter().enumerate() {
            let (dp, dc, dr) = hat_partials(p, c, r);
            out.points[b][0] += w * dp[0];
            out.points[b][1] += w * dp[1];
            out.centers[i][0] += w * dc[0];
            out.centers[i][1] += w * dc[1];
            out.radii[i] += w * dr;
        }
    }
    Ok(out)
}

pub fn bar_points(bc: &ExtendedBarcode, kind: BarKind) -> Vec<[f64; 2]> {
    bc.bars(kind).iter().map(|b| [b.birth, b.death]).collect()
}

/// Concatenates one hat vector per bar kind, in the order of [`BarKind::ALL`].
pub fn vectorize_barcode(bc: &ExtendedBarcode, params: &[RationalHatParams; 4]) -> Vec<f64> {
    BarKind::ALL
        .iter()
        .zip(params)
        .flat_map(|(&kind, p)| rational_hat(&bar_points(bc, kind), p))
        .collect()
}

/// Seeded initialization: centers uniform over the bounding box of the
/// reference bars of each kind (the unit square if there are none), radii
/// uniform in [0.1, 1).
pub fn init_params(reference: &[ExtendedBarcode], k: usize, seed: u64) -> Result<[RationalHatParams; 4]> {
    if k == 0 {
        return Err(Error::InvalidParams("at least one hat is required".into()));
    }
    let mut out = Vec::with_capacity(4);
    for (slot, kind) in BarKind::ALL.into_iter().enumerate() {
        let mut rng = stream_rng(seed, slot as u64);
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in reference.iter().flat_map(|bc| bar_points(bc, kind)) {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if !lo[0].is_finite() {
            lo = [0.0; 2];
            hi = [1.0; 2];
        }
        let centers = (0..k)
            .map(|_| {
                let mut c = [0.0; 2];
                for a in 0..2 {
                    c[a] = lo[a] + (hi[a] - lo[a]) * rng.random::<f64>();
                }
                c
            })
            .collect();
        let radii = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
        out.push(RationalHatParams { centers, radii });
    }
    Ok(out.try_into().expect("four kinds"))
}

pub fn params_to_json(params: &[RationalHatParams; 4]) -> String {
    serde_json::to_string(params).expect("parameters serialize")
}

pub fn params_from_json(s: &str) -> Result<[RationalHatParams; 4]> {
    let params: [RationalHatParams; 4] = serde_json::from_str(s)?;
    for p in &params {
        p.validate()?;
    }
    Ok(params)
}
