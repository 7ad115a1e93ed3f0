//! Closed-form densities and conditional expectations of the uniformly
//! sampled bridge, meander and Bessel-3 process, plus the joint law of
//! `(B_1, L_1)`.

use std::f64::consts::PI;

use super::erf::{gauss_tail, mills_h};
use super::quad::{integrate, QuadConfig};
use crate::{Error, Result};

fn frac_1_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

fn sqrt_2_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

fn nonneg(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: v,
            domain: "[0, inf)",
        })
    }
}

/// Density of `(B_1, L_1)` at `(x, l)`.
pub fn joint_density_b1_l1(x: f64, l: f64) -> Result<f64> {
    nonneg("joint_density_b1_l1", l)?;
    let s = x.abs() + l;
    Ok(frac_1_sqrt_2pi() * s * (-0.5 * s * s).exp())
}

/// `l E[1/(N² + l²)]` for standard normal `N`, evaluated by quadrature.
///
/// Independent route to [`mills_h`]; `l = 0` is rejected because the
/// integrand degenerates to a point mass.
pub fn h_via_quadrature(l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Domain {
            name: "H_via_quadrature",
            value: l,
            domain: "(0, inf)",
        });
    }
    let cfg = QuadConfig {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    let phi = frac_1_sqrt_2pi();
    let f = |x: f64| phi * (-0.5 * x * x).exp() / (x * x + l * l);
    // Integrand is even and peaked on the scale min(l, 1).
    let knee = l.min(1.0);
    let a = integrate(f, 0.0, knee, &cfg)?.value;
    let b = integrate(f, knee, 8.0_f64.max(knee), &cfg)?.value;
    let c = integrate(f, 8.0_f64.max(knee), f64::INFINITY, &cfg)?.value;
    Ok(2.0 * l * (a + b + c))
}

/// Rayleigh density `l exp(-l²/2)`: the law of the bridge local time at 0.
pub fn pdf_lambda10(l: f64) -> Result<f64> {
    nonneg("pdf_lambda10", l)?;
    Ok(l * (-0.5 * l * l).exp())
}

/// Density of `b(U)` at `y` given `λ_1^0 = l`.
pub fn pdf_bu_given_lambda(y: f64, l: f64) -> Result<f64> {
    nonneg("pdf_bU_given_lambda", l)?;
    let a = y.abs();
    Ok((2.0 * a + l) * (-(2.0 * y * y + 2.0 * a * l)).exp())
}

/// `E[λ_1^y / λ_1^0] = exp(-2y²)`.
pub fn expected_ratio_lambda(y: f64) -> f64 {
    (-2.0 * y * y).exp()
}

/// Density of `b(U)`: `∫_{2|y|}^∞ exp(-z²/2) dz`.
pub fn pdf_bu(y: f64) -> f64 {
    gauss_tail(2.0 * y.abs())
}

/// Density of `m(U)`: `2 ∫_y^{2y} exp(-z²/2) dz` on `y >= 0`.
pub fn pdf_mu(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    2.0 * (gauss_tail(y) - gauss_tail(2.0 * y))
}

/// Maxwell density `sqrt(2/pi) y² exp(-y²/2)`: the law of `R_1`.
pub fn pdf_r1(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    sqrt_2_over_pi() * y * y * (-0.5 * y * y).exp()
}

/// Density of `R_U`: `2 sqrt(2/pi) y ∫_y^∞ exp(-z²/2) dz`.
pub fn pdf_ru(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    2.0 * sqrt_2_over_pi() * y * gauss_tail(y)
}

/// `E[U / R_U | R_1 = r] = H(r)`.
pub fn cond_exp_u_over_ru(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            name: "cond_exp_U_over_RU",
            value: r,
            domain: "(0, inf)",
        });
    }
    mills_h(r)
}

/// `E[R_U | R_1 = r] = (r + H(r)) / 2`.
pub fn cond_exp_ru(r: f64) -> Result<f64> {
    Ok(0.5 * (r + cond_exp_u_over_ru(r)?))
}

pub fn pdf_half_normal(x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    sqrt_2_over_pi() * (-0.5 * x * x).exp()
}

pub fn pdf_std_normal(x: f64) -> f64 {
    frac_1_sqrt_2pi() * (-0.5 * x * x).exp()
}

/// Density of `T_1 = 1/N²`: `(2 pi)^(-1/2) t^(-3/2) exp(-1/(2t))`.
pub fn pdf_t1(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    // in logs, so that tiny t underflows to 0 instead of inf * 0
    frac_1_sqrt_2pi() * (-1.5 * t.ln() - 0.5 / t).exp()
}

/// `P(T_1 <= t) = 2 (1 - Phi(1/sqrt t))`.
pub fn cdf_t1(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    2.0 * super::erf::normal_sf(1.0 / t.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joint_density_values() {
        assert_eq!(joint_density_b1_l1(0.0, 0.0).unwrap(), 0.0);
        let a = joint_density_b1_l1(1.0, 2.0).unwrap();
        let b = joint_density_b1_l1(2.0, 1.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(joint_density_b1_l1(-1.0, 2.0).unwrap(), a);
        assert!(joint_density_b1_l1(0.0, -0.1).is_err());
    }

    #[test]
    fn lambda10_and_ratio_values() {
        assert!((pdf_lambda10(1.0).unwrap() - 0.606_530_659_712_633_4).abs() < 1e-15);
        assert!((expected_ratio_lambda(0.5) - 0.606_530_659_712_633_4).abs() < 1e-15);
        assert!(pdf_lambda10(-1.0).is_err());
        assert!(pdf_bu_given_lambda(0.2, -1.0).is_err());
    }

    #[test]
    fn ru_density_factorizes_through_gauss_tail() {
        let y = 1.0;
        let ratio = pdf_ru(y) / (2.0 * sqrt_2_over_pi() * y);
        assert!((ratio - gauss_tail(1.0)).abs() < 1e-12);
    }

    #[test]
    fn support_edges() {
        assert_eq!(pdf_mu(0.0), 0.0);
        assert_eq!(pdf_mu(-1.0), 0.0);
        assert_eq!(pdf_r1(-1.0), 0.0);
        assert_eq!(pdf_ru(0.0), 0.0);
        assert!(pdf_mu(1e-6) > 0.0);
        assert!((pdf_bu(0.0) - (PI / 2.0).sqrt()).abs() < 1e-15);
        assert_eq!(pdf_t1(1e-310), 0.0);
    }

    #[test]
    fn cond_exp_domain() {
        assert!(cond_exp_u_over_ru(0.0).is_err());
        let v = cond_exp_u_over_ru(1.0).unwrap();
        assert!((v - 0.655_679_542_418_798_5).abs() < 1e-13);
        let big = cond_exp_u_over_ru(50.0).unwrap();
        assert!((big * 50.0 - 1.0).abs() < 1e-3);
        assert!((cond_exp_ru(1.0).unwrap() - 0.827_839_771_209_399_2).abs() < 1e-13);
    }

    #[test]
    fn h_quadrature_rejects_zero() {
        assert!(h_via_quadrature(0.0).is_err());
        assert!(h_via_quadrature(-1.0).is_err());
    }

    #[test]
    fn t1_cdf_reflection_value() {
        assert!((cdf_t1(1.0) - 0.317_310_507_862_914_1).abs() < 1e-14);
    }
}
