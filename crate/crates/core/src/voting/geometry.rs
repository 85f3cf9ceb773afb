//! Pair geometry: candidate axis parameters, reflection and the mirror term.

use crate::error::{Error, Result};

/// Candidate axis of a feature pair in normal form `x cos(theta) + y sin(theta) = rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisParams {
    /// Distance of the axis to the top-left origin, `>= 0`.
    pub rho: f64,
    /// Direction of the axis normal in degrees, `[0, 360)`.
    pub theta: f64,
    /// Unit normal `(cos theta, sin theta)`.
    pub normal: (f64, f64),
}

/// Perpendicular bisector of `p_i p_j`.
///
/// The normal points from `p_i` to `p_j` unless that makes `rho` negative, in
/// which case it is flipped. With `rho == 0` the normal is chosen in the upper
/// half-turn so swapping the points never changes the result.
pub fn pair_axis_params(p_i: (f64, f64), p_j: (f64, f64)) -> Result<AxisParams> {
    let (dx, dy) = (p_j.0 - p_i.0, p_j.1 - p_i.1);
    let len = dx.hypot(dy);
    if !(len > 0.0) {
        return Err(Error::CoincidentPoints);
    }
    let (mut nx, mut ny) = (dx / len, dy / len);
    let (mx, my) = ((p_i.0 + p_j.0) * 0.5, (p_i.1 + p_j.1) * 0.5);
    let mut rho = mx * nx + my * ny;
    if rho < 0.0 || (rho == 0.0 && (ny < 0.0 || (ny == 0.0 && nx < 0.0))) {
        nx = -nx;
        ny = -ny;
        rho = -rho;
    }
    let rho = rho.abs();
    Ok(AxisParams {
        rho,
        theta: normalize_degrees(ny.atan2(nx).to_degrees()),
        normal: (nx, ny),
    })
}

/// Wraps an angle in degrees into `[0, 360)`.
pub fn normalize_degrees(theta: f64) -> f64 {
    let t = theta.rem_euclid(360.0);
    if t >= 360.0 {
        0.0
    } else {
        t
    }
}

/// Reflection across a line through the origin with direction angle `gamma`.
pub fn reflection_matrix(gamma: f64) -> [[f64; 2]; 2] {
    let (s, c) = (2.0 * gamma).sin_cos();
    [[c, s], [s, -c]]
}

/// Unit direction vector of an orientation.
#[inline]
pub fn direction(phi: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    (c, s)
}

/// `|tau_i^T R(gamma) tau_j|`, clamped to `[0, 1]`.
pub fn mirror_term(phi_i: f64, phi_j: f64, gamma: f64) -> f64 {
    let r = reflection_matrix(gamma);
    let (ci, si) = direction(phi_i);
    let (cj, sj) = direction(phi_j);
    let rx = r[0][0] * cj + r[0][1] * sj;
    let ry = r[1][0] * cj + r[1][1] * sj;
    (ci * rx + si * ry).abs().min(1.0)
}

/// Mirror term with the reflection taken from an axis normal `(nx, ny)`,
/// avoiding trigonometry in the pair loop.
///
/// The axis direction is the normal turned by a quarter, so
/// `cos 2gamma = ny^2 - nx^2` and `sin 2gamma = -2 nx ny`.
#[inline]
pub(crate) fn mirror_term_from_normal(tau_i: (f64, f64), tau_j: (f64, f64), normal: (f64, f64)) -> f64 {
    let (nx, ny) = normal;
    let c2 = ny * ny - nx * nx;
    let s2 = -2.0 * nx * ny;
    let rx = c2 * tau_j.0 + s2 * tau_j.1;
    let ry = s2 * tau_j.0 - c2 * tau_j.1;
    (tau_i.0 * rx + tau_i.1 * ry).abs().min(1.0)
}
