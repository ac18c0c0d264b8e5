//! Reference frames, rotations, angle transforms and propagation delays.
//!
//! The sensing terminal sits at the origin of the global frame. The skin is
//! a planar array whose local frame is rotated about the global z axis by
//! the vehicle heading `psi`. All angular quantities are `(theta, phi)`
//! pairs, with `theta` the azimuth measured in the local x-y plane and
//! `phi` the polar angle measured from the local z axis.

use nalgebra::{Matrix2x3, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

/// Azimuth/polar angle pair in radians.
///
/// Invariants: `phi` in `[0, pi]`, `theta` in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    /// Azimuth in radians, `(-pi, pi]`.
    pub theta: f64,
    /// Polar (elevation-from-zenith) angle in radians, `[0, pi]`.
    pub phi: f64,
}

impl AnglePair {
    /// Builds an angle pair, rejecting values outside the documented ranges.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument("non-finite angle".into()));
        }
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(Error::InvalidArgument(format!(
                "phi = {phi} outside [0, pi]"
            )));
        }
        if theta <= -std::f64::consts::PI || theta > std::f64::consts::PI {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} outside (-pi, pi]"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// Builds an angle pair, wrapping `theta` into `(-pi, pi]` and clamping
    /// `phi` into `[0, pi]`.
    pub fn wrapped(theta: f64, phi: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            phi: phi.clamp(0.0, std::f64::consts::PI),
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Skin pose: phase-center position in the global frame plus heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    /// Position of the skin phase center in meters, global frame.
    pub x: Vector3<f64>,
    /// Heading: counterclockwise rotation of the local frame about z, radians.
    pub psi: f64,
}

impl Pose {
    /// Builds a pose; `psi` is normalized into `(-pi, pi]`.
    pub fn new(x: Vector3<f64>, psi: f64) -> Result<Self> {
        if !(x.iter().all(|v| v.is_finite()) && psi.is_finite()) {
            return Err(Error::InvalidArgument("non-finite pose".into()));
        }
        Ok(Self {
            x,
            psi: wrap_angle(psi),
        })
    }

    /// Range from the terminal phase center (global origin) to the skin.
    pub fn range(&self) -> f64 {
        self.x.norm()
    }
}

/// Rotation about the global z axis by `psi` radians (counterclockwise).
pub fn rotation_z(psi: f64) -> Result<Matrix3<f64>> {
    if !psi.is_finite() {
        return Err(Error::InvalidArgument("non-finite rotation angle".into()));
    }
    let (s, c) = psi.sin_cos();
    Ok(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
}

/// Cartesian vector to `(theta, phi)`: `theta = atan2(y, x)`,
/// `phi = arccos(z / |v|)`.
///
/// At the poles (`x = y = 0`) the azimuth is undefined; this implementation
/// returns `theta = 0` by convention.
pub fn cart_to_angles(v: &Vector3<f64>) -> Result<AnglePair> {
    let r = v.norm();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::DegenerateDirection(
            "cannot derive angles from a zero vector".into(),
        ));
    }
    let theta = if v.x == 0.0 && v.y == 0.0 {
        0.0
    } else {
        wrap_angle(v.y.atan2(v.x))
    };
    let phi = (v.z / r).clamp(-1.0, 1.0).acos();
    Ok(AnglePair { theta, phi })
}

/// Unit direction vector `(sin phi cos theta, sin phi sin theta, cos phi)`.
pub fn unit_vector(xi: &AnglePair) -> Vector3<f64> {
    let (st, ct) = xi.theta.sin_cos();
    let (sp, cp) = xi.phi.sin_cos();
    Vector3::new(sp * ct, sp * st, cp)
}

/// Incidence/reflection angles at the skin for a terminal phase center at
/// the global origin: `xi = J(-Q_z(psi) x)`.
pub fn ems_incidence_angles(pose: &Pose) -> Result<AnglePair> {
    let q = rotation_z(pose.psi)?;
    cart_to_angles(&(-(q * pose.x)))
}

/// Pointing angles from the terminal toward the skin: `zeta = J(x)`.
pub fn terminal_pointing_angles(pose: &Pose) -> Result<AnglePair> {
    cart_to_angles(&pose.x)
}

/// Global position of the `(n, m)`-th element: `x + Q_z(psi) [n d, m d, 0]`.
///
/// Index convention: `n` in `[-N/2, N/2 - 1]`, `m` in `[-M/2, M/2 - 1]`
/// with `N`, `M` even; the caller validates the ranges.
pub fn element_position(pose: &Pose, n: i64, m: i64, d: f64) -> Vector3<f64> {
    let local = Vector3::new(n as f64 * d, m as f64 * d, 0.0);
    let (s, c) = pose.psi.sin_cos();
    let rotated = Vector3::new(
        c * local.x - s * local.y,
        s * local.x + c * local.y,
        local.z,
    );
    pose.x + rotated
}

/// Exact one-way delays element-wise: `tau_i = |x_nm - tx| / c`,
/// `tau_o = |rx - x_nm| / c`.
pub fn exact_delays(
    tx: &Vector3<f64>,
    rx: &Vector3<f64>,
    x_nm: &Vector3<f64>,
) -> Result<(f64, f64)> {
    let di = (x_nm - tx).norm();
    let douts = (rx - x_nm).norm();
    if di == 0.0 || douts == 0.0 {
        return Err(Error::DegenerateGeometry(
            "coincident antenna and element positions".into(),
        ));
    }
    Ok((di / SPEED_OF_LIGHT, douts / SPEED_OF_LIGHT))
}

/// Far-field (planar wavefront) delay decomposition.
///
/// `tau0` is the phase-center one-way delay, `dtau_i[l]`/`dtau_o[l]` the
/// per-channel Tx/Rx excess delays and `dtau_nm` the per-element excess
/// delay over the panel grid.
#[derive(Debug, Clone)]
pub struct DelayDecomposition {
    /// One-way phase-center delay `|x| / c`, seconds.
    pub tau0: f64,
    /// Tx excess delay per measurement channel, seconds.
    pub dtau_i: Vec<f64>,
    /// Rx excess delay per measurement channel, seconds.
    pub dtau_o: Vec<f64>,
    /// Element excess delays, row index `i` maps to `n = i - N/2`, column
    /// index `j` to `m = j - M/2`.
    pub dtau_nm: nalgebra::DMatrix<f64>,
    /// Far-field validity notes; empty when the planar-wavefront
    /// approximation is comfortably valid.
    pub warnings: Vec<String>,
}

impl DelayDecomposition {
    /// Excess delay of element `(n, m)` using the symmetric index ranges.
    pub fn element(&self, n: i64, m: i64) -> f64 {
        let i = (n + self.dtau_nm.nrows() as i64 / 2) as usize;
        let j = (m + self.dtau_nm.ncols() as i64 / 2) as usize;
        self.dtau_nm[(i, j)]
    }
}

/// Aperture-to-range ratio above which a far-field validity warning is
/// recorded. The decomposition is still computed; the planar-wavefront
/// model is used throughout the bound analysis.
pub const FAR_FIELD_WARN_RATIO: f64 = 0.05;

/// Linearized delays for a planar panel observed by a multi-channel
/// terminal at the origin.
///
/// `tau0 = |x|/c`; the excess terms are the first-order Taylor expansion of
/// the exact delays around the two phase centers:
/// `dtau_i = -s_l . u(zeta) / c`, `dtau_o = -r_l . u(zeta) / c`,
/// `dtau_nm = -(d/c) (n sin phi cos theta + m sin phi sin theta)`,
/// negative whenever the antenna (or element) is displaced toward the other
/// end of the link, so that `tau0 + excess` tracks the exact delay to
/// second order. Reflection-gain formulas are even in this sign, so the
/// convention is observable only when comparing against exact delays.
pub fn linearized_delays(
    pose: &Pose,
    tx_positions: &[Vector3<f64>],
    rx_positions: &[Vector3<f64>],
    n_x: usize,
    n_y: usize,
    d: f64,
) -> Result<DelayDecomposition> {
    let r = pose.range();
    if r == 0.0 {
        return Err(Error::DegenerateGeometry(
            "skin at the terminal phase center".into(),
        ));
    }
    let zeta = terminal_pointing_angles(pose)?;
    let u_zeta = unit_vector(&zeta);
    let xi = ems_incidence_angles(pose)?;
    let (st, ct) = xi.theta.sin_cos();
    let sp = xi.phi.sin();

    let mut dtau_i = Vec::with_capacity(tx_positions.len() * rx_positions.len());
    let mut dtau_o = Vec::with_capacity(tx_positions.len() * rx_positions.len());
    for s in tx_positions {
        for rx in rx_positions {
            dtau_i.push(s.dot(&u_zeta) / SPEED_OF_LIGHT);
            dtau_o.push(rx.dot(&u_zeta) / SPEED_OF_LIGHT);
        }
    }

    let half_n = n_x as i64 / 2;
    let half_m = n_y as i64 / 2;
    let dtau_nm = nalgebra::DMatrix::from_fn(n_x, n_y, |i, j| {
        let n = i as i64 - half_n;
        let m = j as i64 - half_m;
        d / SPEED_OF_LIGHT * (n as f64 * sp * ct + m as f64 * sp * st)
    });

    let mut warnings = Vec::new();
    let panel_diag = d * ((n_x * n_x + n_y * n_y) as f64).sqrt();
    let terminal_diag = 2.0
        * tx_positions
            .iter()
            .chain(rx_positions.iter())
            .map(|p| p.norm())
            .fold(0.0_f64, f64::max);
    let ratio = panel_diag.max(terminal_diag) / r;
    if ratio > FAR_FIELD_WARN_RATIO {
        warnings.push(format!(
            "aperture/range ratio {ratio:.3} exceeds {FAR_FIELD_WARN_RATIO}; \
             planar-wavefront linearization degrades"
        ));
    }

    Ok(DelayDecomposition {
        tau0: r / SPEED_OF_LIGHT,
        dtau_i,
        dtau_o,
        dtau_nm,
        warnings,
    })
}

/// Jacobian of the incidence angles with respect to the skin position,
/// `d xi / d x` for `xi = J(-Q_z(psi) x)`, a 2x3 matrix.
///
/// Undefined at the pole (`sin phi = 0`), where the azimuth row blows up.
pub fn angle_jacobian(pose: &Pose) -> Result<Matrix2x3<f64>> {
    let q = rotation_z(pose.psi)?;
    let w = -(q * pose.x);
    let r2 = w.norm_squared();
    let rho2 = w.x * w.x + w.y * w.y;
    let rho = rho2.sqrt();
    let r = r2.sqrt();
    if r == 0.0 {
        return Err(Error::DegenerateGeometry("zero range".into()));
    }
    if rho / r < 1e-9 {
        return Err(Error::PoleSingularity(
            "azimuth Jacobian undefined for a terminal at the local zenith".into(),
        ));
    }
    // Rows are gradients of theta and phi with respect to w.
    let d_theta = Vector3::new(-w.y / rho2, w.x / rho2, 0.0);
    let d_phi = Vector3::new(
        w.z * w.x / (r2 * rho),
        w.z * w.y / (r2 * rho),
        -rho / r2,
    );
    // Chain rule through w = -Q_z(psi) x.
    let dw_dx = -q;
    let mut jac = Matrix2x3::zeros();
    jac.set_row(0, &(d_theta.transpose() * dw_dx));
    jac.set_row(1, &(d_phi.transpose() * dw_dx));
    Ok(jac)
}
