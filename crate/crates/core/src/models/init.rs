//! Terminal values of the early-exercise boundary, which seed the
//! integral-equation solver at zero transformed time.

use crate::error::{Error, Result};
use crate::models::cev::CevTransform;
use crate::models::cir::CirTransform;
use crate::models::hw::HwTransform;
use crate::models::option::{OptionKind, OptionSpec};
use crate::models::ou::OuTransform;
use crate::models::zcb::AffineZcb;

/// Boundary spot at the instant before maturity for an option on a
/// dividend-paying asset: K max(1, r/q) for a call, K min(1, r/q) for a put,
/// with rates evaluated at maturity.
pub fn kim_terminal_spot(kind: OptionKind, strike: f64, r_t: f64, q_t: f64) -> Result<f64> {
    let ratio_active = match kind {
        OptionKind::Call => r_t > q_t,
        OptionKind::Put => r_t < q_t,
    };
    if !ratio_active {
        return Ok(strike);
    }
    if q_t <= 0.0 {
        return Err(Error::domain(format!(
            "terminal boundary needs a positive dividend yield when the rate \
             ratio branch is active, got q(T) = {q_t}"
        )));
    }
    if r_t < 0.0 {
        return Err(Error::domain(format!(
            "early exercise never pays near maturity for a negative rate, \
             got r(T) = {r_t}"
        )));
    }
    Ok(strike * r_t / q_t)
}

/// Transformed-coordinate view of whichever model the solver runs on.
pub enum ModelTransforms<'a> {
    Ou(&'a OuTransform),
    Hw {
        transform: &'a HwTransform,
        zcb: &'a AffineZcb,
    },
    Cev(&'a CevTransform),
    Cir {
        transform: &'a CirTransform,
        zcb: &'a AffineZcb,
    },
}

impl ModelTransforms<'_> {
    fn t_max(&self) -> f64 {
        match self {
            ModelTransforms::Ou(tr) => tr.t_max(),
            ModelTransforms::Hw { transform, .. } => transform.t_max(),
            ModelTransforms::Cev(tr) => tr.t_max(),
            ModelTransforms::Cir { transform, .. } => transform.t_max(),
        }
    }
}

fn check_bond_option(option: &OptionSpec, zcb: &AffineZcb) -> Result<f64> {
    let q = option.bond_maturity_required()?;
    if (q - zcb.q_maturity()).abs() > 1e-12 * q.max(1.0) {
        return Err(Error::domain(format!(
            "option references a bond maturing at {q} but the bond curve was \
             built for {}",
            zcb.q_maturity()
        )));
    }
    if option.kind != OptionKind::Put {
        return Err(Error::domain(
            "only puts on the zero-coupon bond are supported".to_string(),
        ));
    }
    Ok(q)
}

/// Boundary location at zero transformed time, in the solver's coordinate.
pub fn boundary_initial_value(option: &OptionSpec, model: &ModelTransforms) -> Result<f64> {
    let t = model.t_max();
    if (t - option.maturity).abs() > 1e-12 * option.maturity.max(1.0) {
        return Err(Error::domain(format!(
            "transform horizon {t} does not match the option maturity {}",
            option.maturity
        )));
    }
    match model {
        ModelTransforms::Ou(tr) => {
            let spot =
                kim_terminal_spot(option.kind, option.strike, tr.r.value(t), tr.q.value(t))?;
            Ok(tr.x_of_s(t, spot))
        }
        ModelTransforms::Cev(tr) => {
            if tr.mirrored() {
                return Err(Error::domain(
                    "the boundary solver does not run on the mirrored elasticity branch"
                        .to_string(),
                ));
            }
            let spot =
                kim_terminal_spot(option.kind, option.strike, tr.r.value(t), tr.q.value(t))?;
            Ok(tr.z_of_spot(t, spot))
        }
        ModelTransforms::Hw { transform, zcb } => {
            check_bond_option(option, zcb)?;
            let r_b = zcb.rate_of_price(option.strike, t)?;
            Ok(transform.x_hat_of_r(t, r_b))
        }
        ModelTransforms::Cir { transform, zcb } => {
            check_bond_option(option, zcb)?;
            let r_b = zcb.rate_of_price(option.strike, t)?;
            if r_b < 0.0 {
                return Err(Error::domain(format!(
                    "terminal boundary rate {r_b} is negative, outside the \
                     square-root model's state space"
                )));
            }
            Ok(transform.z_of_rate(t, r_b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::cev::{cev_build_transform, CevModel};
    use crate::models::cir::{cir_build_transform, CirModel};
    use crate::models::curve::TimeCurve;
    use crate::models::hw::{hw_build_transform, HwModel};
    use crate::models::ou::{ou_build_transform, ou_riccati_solve, OuModel};
    use crate::models::zcb::{affine_zcb_cir, affine_zcb_hull_white};

    #[test]
    fn terminal_spot_branches() {
        let k = 60.0;
        let got = kim_terminal_spot(OptionKind::Call, k, 0.02, 0.03).unwrap();
        assert_eq!(got, k);
        let got = kim_terminal_spot(OptionKind::Call, k, 0.06, 0.03).unwrap();
        assert!((got - k * 2.0).abs() < 1e-12);
        let got = kim_terminal_spot(OptionKind::Put, k, 0.06, 0.03).unwrap();
        assert_eq!(got, k);
        let got = kim_terminal_spot(OptionKind::Put, k, 0.02, 0.04).unwrap();
        assert!((got - k * 0.5).abs() < 1e-12);
        assert!(kim_terminal_spot(OptionKind::Call, k, 0.02, 0.0).is_err());
        assert!(kim_terminal_spot(OptionKind::Put, k, -0.01, 0.03).is_err());
        assert_eq!(kim_terminal_spot(OptionKind::Call, k, -0.01, 0.0).unwrap(), k);
    }

    #[test]
    fn spot_models_seed_at_the_terminal_spot_in_transformed_coordinates() {
        let ou_model = OuModel {
            r: TimeCurve::Constant(0.02),
            q: TimeCurve::Constant(0.03),
            sigma: TimeCurve::Constant(30.0),
        };
        let w = ou_riccati_solve(&ou_model, 1.0).unwrap();
        let ou = ou_build_transform(&ou_model, &w, 1.0, 512).unwrap();
        let option = OptionSpec::new(OptionKind::Call, 60.0, 1.0).unwrap();
        let y0 = boundary_initial_value(&option, &ModelTransforms::Ou(&ou)).unwrap();
        assert!((y0 - 60.0 * ou.g(1.0)).abs() < 1e-12);

        let cev_model = CevModel {
            r: TimeCurve::Constant(0.02),
            q: TimeCurve::Constant(0.03),
            sigma: TimeCurve::Constant(2.0),
            beta: -0.5,
        };
        let cev = cev_build_transform(&cev_model, 1.0, 256).unwrap();
        let z0 = boundary_initial_value(&option, &ModelTransforms::Cev(&cev)).unwrap();
        assert!((z0 - cev.z_of_spot(1.0, 60.0)).abs() < 1e-12);

        let wrong_maturity = OptionSpec::new(OptionKind::Call, 60.0, 0.5).unwrap();
        assert!(boundary_initial_value(&wrong_maturity, &ModelTransforms::Ou(&ou)).is_err());
    }

    #[test]
    fn bond_models_seed_where_the_bond_price_crosses_the_strike() {
        let hw_model = HwModel {
            kappa: TimeCurve::Constant(0.1),
            theta: TimeCurve::Constant(0.05),
            sigma: TimeCurve::Constant(0.01),
        };
        let hw = hw_build_transform(&hw_model, 1.0, 512).unwrap();
        let zcb =
            affine_zcb_hull_white(&hw_model.kappa, &hw_model.theta, &hw_model.sigma, 2.0, 512)
                .unwrap();
        let strike = 0.93;
        let option = OptionSpec::new(OptionKind::Put, strike, 1.0)
            .unwrap()
            .with_bond_maturity(2.0)
            .unwrap();
        let model = ModelTransforms::Hw { transform: &hw, zcb: &zcb };
        let y_hat = boundary_initial_value(&option, &model).unwrap();
        let r_b = hw.r_of_x_hat(1.0, y_hat);
        assert!((zcb.price(r_b, 1.0) - strike).abs() < 1e-12);

        let call = OptionSpec::new(OptionKind::Call, strike, 1.0)
            .unwrap()
            .with_bond_maturity(2.0)
            .unwrap();
        assert!(boundary_initial_value(&call, &model).is_err());
        let no_bond = OptionSpec::new(OptionKind::Put, strike, 1.0).unwrap();
        assert!(boundary_initial_value(&no_bond, &model).is_err());
    }

    #[test]
    fn square_root_model_rejects_a_negative_terminal_rate() {
        let (kappa, theta) = (0.5f64, 0.05f64);
        let sigma = (2.0 * kappa * theta).sqrt();
        let cir_model = CirModel {
            kappa: TimeCurve::Constant(kappa),
            theta: TimeCurve::Constant(theta),
            sigma: TimeCurve::Constant(sigma),
        };
        let cir = cir_build_transform(&cir_model, 1.0, 512).unwrap();
        let zcb = affine_zcb_cir(
            &cir_model.kappa,
            &cir_model.theta,
            &cir_model.sigma,
            2.0,
            512,
        )
        .unwrap();
        let in_range = OptionSpec::new(OptionKind::Put, 0.9, 1.0)
            .unwrap()
            .with_bond_maturity(2.0)
            .unwrap();
        let model = ModelTransforms::Cir { transform: &cir, zcb: &zcb };
        let z0 = boundary_initial_value(&in_range, &model).unwrap();
        let r_b = zcb.rate_of_price(0.9, 1.0).unwrap();
        assert!(r_b >= 0.0);
        assert!((z0 - cir.g(1.0) * r_b.sqrt()).abs() < 1e-12);

        let too_high = OptionSpec::new(OptionKind::Put, 1.5, 1.0)
            .unwrap()
            .with_bond_maturity(2.0)
            .unwrap();
        assert!(boundary_initial_value(&too_high, &model).is_err());
    }
}
