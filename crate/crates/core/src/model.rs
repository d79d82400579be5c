//! Model parameters, static profile equations and the kink-like profile.
//!
//! Everything here works at the level of the radial profile function `F(x)`
//! with `x = e F_pi r`. Energies are measured in units of `pi F_pi / e`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SkyrmeError};

/// hbar*c in MeV fm, used to make `F_pi^2 eps6^2` dimensionless.
pub const HBAR_C_MEV_FM: f64 = 197.327;

/// Raw physical inputs. Masses in MeV, `eps6_sq` in fm^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub m_pi: f64,
    pub e: f64,
    pub f_pi: f64,
    pub epsilon: f64,
    pub eps6_sq: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            m_pi: 140.0,
            e: 4.84,
            f_pi: 108.0,
            epsilon: 3.5e-7,
            eps6_sq: 5.0,
        }
    }
}

/// Physical constants together with the derived dimensionless couplings.
///
/// `beta` is always recomputed from the constants; `gamma6` is fixed at
/// construction. The only way to build one is [`derive_dimensionless`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    constants: PhysicalConstants,
    gamma6: f64,
}

impl ModelParams {
    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn m_pi(&self) -> f64 {
        self.constants.m_pi
    }

    pub fn e(&self) -> f64 {
        self.constants.e
    }

    pub fn f_pi(&self) -> f64 {
        self.constants.f_pi
    }

    pub fn epsilon(&self) -> f64 {
        self.constants.epsilon
    }

    pub fn eps6_sq(&self) -> f64 {
        self.constants.eps6_sq
    }

    /// `m_pi / (e F_pi)`.
    pub fn beta(&self) -> f64 {
        self.constants.m_pi / (self.constants.e * self.constants.f_pi)
    }

    /// Dimensionless sixth-order coupling `F_pi^2 eps6^2 e^4 / pi^4`.
    pub fn gamma6(&self) -> f64 {
        self.gamma6
    }

    /// Energy unit `pi F_pi / e` in MeV.
    pub fn mass_unit_gamma(&self) -> f64 {
        PI * self.constants.f_pi / self.constants.e
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        derive_dimensionless(&PhysicalConstants::default()).expect("default constants are valid")
    }
}

pub fn derive_dimensionless(physical: &PhysicalConstants) -> Result<ModelParams> {
    let positive = |name: &'static str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(SkyrmeError::InvalidParameter {
                name,
                reason: format!("must be positive and finite, got {v}"),
            })
        }
    };
    let non_negative = |name: &'static str, v: f64| {
        if v.is_finite() && v >= 0.0 {
            Ok(())
        } else {
            Err(SkyrmeError::InvalidParameter {
                name,
                reason: format!("must be non-negative and finite, got {v}"),
            })
        }
    };
    positive("m_pi", physical.m_pi)?;
    positive("e", physical.e)?;
    positive("F_pi", physical.f_pi)?;
    non_negative("epsilon", physical.epsilon)?;
    non_negative("eps6_sq", physical.eps6_sq)?;

    let f_pi_fm = physical.f_pi / HBAR_C_MEV_FM;
    let gamma6 = f_pi_fm * f_pi_fm * physical.eps6_sq * physical.e.powi(4) / PI.powi(4);
    Ok(ModelParams {
        constants: *physical,
        gamma6,
    })
}

/// Chiral symmetry-breaking source attached to the static equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SbVariant {
    None,
    PionMass,
    /// Pion-mass source scaled by `epsilon`.
    Modified,
}

impl SbVariant {
    /// Coefficient multiplying `x^2 sin F / 4` in the static equation.
    pub fn coefficient(self, params: &ModelParams) -> f64 {
        let beta = params.beta();
        match self {
            SbVariant::None => 0.0,
            SbVariant::PionMass => beta * beta,
            SbVariant::Modified => params.epsilon() * beta * beta,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SbVariant::None => "none",
            SbVariant::PionMass => "pion-mass",
            SbVariant::Modified => "modified",
        }
    }
}

impl fmt::Display for SbVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SbVariant {
    type Err = SkyrmeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(SbVariant::None),
            "pion-mass" | "pionmass" | "pion_mass" => Ok(SbVariant::PionMass),
            "modified" => Ok(SbVariant::Modified),
            other => Err(SkyrmeError::Validation(format!(
                "unknown symmetry-breaking variant `{other}` (expected none, pion-mass or modified)"
            ))),
        }
    }
}

/// Which static profile equation to solve.
///
/// `k` is the azimuthal twist (1 = spherical hedgehog), `n` the winding at the
/// origin, `F(0) = n pi`. With `sixth_order` set the static part of the
/// sixth-order equation is used instead; that is only defined for `k = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StaticEquationSpec {
    k: u32,
    n: u32,
    sb: SbVariant,
    sixth_order: bool,
}

impl StaticEquationSpec {
    pub fn new(k: u32, n: u32, sb: SbVariant) -> Result<Self> {
        if k == 0 {
            return Err(SkyrmeError::InvalidParameter {
                name: "k",
                reason: "twist must be at least 1".into(),
            });
        }
        Ok(StaticEquationSpec {
            k,
            n,
            sb,
            sixth_order: false,
        })
    }

    /// Spherical hedgehog of the model with the sixth-order term.
    pub fn sixth_order(n: u32, sb: SbVariant) -> Self {
        StaticEquationSpec {
            k: 1,
            n,
            sb,
            sixth_order: true,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sb(&self) -> SbVariant {
        self.sb
    }

    pub fn is_sixth_order(&self) -> bool {
        self.sixth_order
    }

    /// `a = 2(k^2 + 1)`.
    pub fn a(&self) -> f64 {
        let k = self.k as f64;
        2.0 * (k * k + 1.0)
    }

    /// `b = 2 k^2`.
    pub fn b(&self) -> f64 {
        let k = self.k as f64;
        2.0 * k * k
    }

    /// Value of the profile at the origin, `n pi`.
    pub fn origin_value(&self) -> f64 {
        self.n as f64 * PI
    }

    /// Leading power `p` of `F - n pi ~ s x^p` at the origin: `p (p + 1) = k^2 + 1`.
    pub fn origin_exponent(&self) -> f64 {
        if self.sixth_order || self.k == 1 {
            1.0
        } else {
            0.5 * ((1.0 + 2.0 * self.a()).sqrt() - 1.0)
        }
    }

    pub fn lagrangian(&self, params: &ModelParams) -> RadialLagrangian {
        let k = self.k as f64;
        RadialLagrangian {
            twist: k * k + 1.0,
            k_sq: k * k,
            gamma6: if self.sixth_order {
                params.gamma6()
            } else {
                0.0
            },
            sb: self.sb.coefficient(params),
        }
    }
}

impl fmt::Display for StaticEquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} n={} sb={}", self.k, self.n, self.sb)?;
        if self.sixth_order {
            f.write_str(" sixth-order")?;
        }
        Ok(())
    }
}

/// Kink-like profile `4 n arctan(exp(-x))`.
pub fn kink_profile(x: f64, n: u32) -> Result<f64> {
    Ok(kink_derivatives(x, n)?.0)
}

/// Kink profile with its first two derivatives in closed form.
pub fn kink_derivatives(x: f64, n: u32) -> Result<(f64, f64, f64)> {
    if !(x >= 0.0) {
        return Err(SkyrmeError::Domain(format!(
            "kink profile needs x >= 0, got {x}"
        )));
    }
    let n = n as f64;
    let sech = 1.0 / x.cosh();
    Ok((
        4.0 * n * (-x).exp().atan(),
        -2.0 * n * sech,
        2.0 * n * sech * x.tanh(),
    ))
}

/// Symmetry-breaking source `c (beta^2 / 4) x^2 sin F` with `c` = 0, 1 or epsilon.
pub fn sb_source(variant: SbVariant, x: f64, f: f64, params: &ModelParams) -> f64 {
    match variant {
        SbVariant::None => 0.0,
        _ => 0.25 * variant.coefficient(params) * x * x * f.sin(),
    }
}

/// Residual of the static profile equation (all terms on the left).
///
/// For `k = 1` this is the hedgehog equation
/// `xF'/2 + (x^2/4 + 2 sin^2F) F'' + sin2F F'^2 - sin2F/4 - sin^2F sin2F/x^2`;
/// for general `k` the twisty equation with coefficients `a`, `b`, divided by
/// four so both share one normalization. The symmetry-breaking source is
/// subtracted.
pub fn static_residual(
    spec: &StaticEquationSpec,
    x: f64,
    f: f64,
    df: f64,
    d2f: f64,
    params: &ModelParams,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(SkyrmeError::SingularPoint { x });
    }
    let s = f.sin();
    let s2f = (2.0 * f).sin();
    let sin_sq = s * s;
    let lhs = if spec.sixth_order {
        let g = params.gamma6();
        let x2 = x * x;
        let inertia = 0.25 * x2 + 2.0 * sin_sq + 0.25 * g * sin_sq * sin_sq / x2;
        inertia * d2f
            + (s2f + 0.25 * g * sin_sq * s2f / x2) * df * df
            + (0.5 * x - 0.5 * g * sin_sq * sin_sq / (x2 * x)) * df
            - 0.25 * s2f
            - sin_sq * s2f / x2
    } else {
        let a = spec.a();
        let b = spec.b();
        0.25 * ((x * x + 2.0 * a * sin_sq) * d2f
            + 2.0 * x * df
            + (a * df * df - 0.25 * a - 2.0 * b * sin_sq / (x * x)) * s2f)
    };
    Ok(lhs - sb_source(spec.sb, x, f, params))
}

/// Coefficient of `F''` in [`static_residual`].
pub fn residual_second_derivative_coefficient(
    spec: &StaticEquationSpec,
    x: f64,
    f: f64,
    params: &ModelParams,
) -> f64 {
    let sin_sq = f.sin().powi(2);
    if spec.sixth_order {
        0.25 * x * x + 2.0 * sin_sq + 0.25 * params.gamma6() * sin_sq * sin_sq / (x * x)
    } else {
        0.25 * (x * x + 2.0 * spec.a() * sin_sq)
    }
}

/// Radial Lagrangian `W(x,F) (Fdot^2 - F'^2) - V(x,F)` behind the profile
/// equations; `2 * integral (W F'^2 + V) dx` is the static energy in mass units.
///
/// `W = x^2/4 + (k^2+1) sin^2F + (gamma6/4) sin^4F / x^2`,
/// `V = (k^2+1)/4 sin^2F + k^2 sin^4F / x^2 + (sb/2) x^2 (1 - cos F)`.
/// At `x = 0` the `sin^4F / x^2` pieces take their limit 0 (valid for `F(0) = n pi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLagrangian {
    twist: f64,
    k_sq: f64,
    gamma6: f64,
    sb: f64,
}

impl RadialLagrangian {
    /// Spherical hedgehog with the given sixth-order coupling and SB coefficient
    /// (the coefficient multiplying `x^2 sin F / 4` in the field equation).
    pub fn hedgehog(gamma6: f64, sb: f64) -> Self {
        RadialLagrangian {
            twist: 2.0,
            k_sq: 1.0,
            gamma6,
            sb,
        }
    }

    pub fn gamma6(&self) -> f64 {
        self.gamma6
    }

    #[inline]
    pub fn inertia(&self, x: f64, f: f64) -> f64 {
        let sin_sq = f.sin().powi(2);
        let mut w = 0.25 * x * x + self.twist * sin_sq;
        if x > 0.0 && self.gamma6 != 0.0 {
            w += 0.25 * self.gamma6 * sin_sq * sin_sq / (x * x);
        }
        w
    }

    #[inline]
    pub fn inertia_df(&self, x: f64, f: f64) -> f64 {
        let (s, c) = f.sin_cos();
        let mut w = self.twist * 2.0 * s * c;
        if x > 0.0 && self.gamma6 != 0.0 {
            w += self.gamma6 * s * s * s * c / (x * x);
        }
        w
    }

    #[inline]
    pub fn inertia_dx(&self, x: f64, f: f64) -> f64 {
        let mut w = 0.5 * x;
        if x > 0.0 && self.gamma6 != 0.0 {
            w -= 0.5 * self.gamma6 * f.sin().powi(4) / (x * x * x);
        }
        w
    }

    /// `(W, W_F, V_F)` at one point, sharing a single `sin_cos`.
    #[inline]
    pub fn node_terms(&self, x: f64, f: f64) -> (f64, f64, f64) {
        let (s, c) = f.sin_cos();
        let sin_sq = s * s;
        let s2f = 2.0 * s * c;
        let mut w = 0.25 * x * x + self.twist * sin_sq;
        let mut w_f = self.twist * s2f;
        let mut v_f = 0.25 * self.twist * s2f + 0.5 * self.sb * x * x * s;
        if x > 0.0 {
            let inv_x2 = 1.0 / (x * x);
            if self.gamma6 != 0.0 {
                w += 0.25 * self.gamma6 * sin_sq * sin_sq * inv_x2;
                w_f += 0.5 * self.gamma6 * sin_sq * s2f * inv_x2;
            }
            v_f += 2.0 * self.k_sq * sin_sq * s2f * inv_x2;
        }
        (w, w_f, v_f)
    }

    #[inline]
    pub fn potential(&self, x: f64, f: f64) -> f64 {
        let sin_sq = f.sin().powi(2);
        let mut v = 0.25 * self.twist * sin_sq + 0.5 * self.sb * x * x * (1.0 - f.cos());
        if x > 0.0 {
            v += self.k_sq * sin_sq * sin_sq / (x * x);
        }
        v
    }

    #[inline]
    pub fn potential_df(&self, x: f64, f: f64) -> f64 {
        let (s, c) = f.sin_cos();
        let s2f = 2.0 * s * c;
        let mut v = 0.25 * self.twist * s2f + 0.5 * self.sb * x * x * s;
        if x > 0.0 {
            v += 2.0 * self.k_sq * s * s * s2f / (x * x);
        }
        v
    }
}
