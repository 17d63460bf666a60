//! American option contract terms.

use crate::error::{Error, Result};

/// Payoff side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Call,
    Put,
}

/// Contract terms. `bond_maturity` applies to options written on a
/// zero-coupon bond and must not precede the option maturity.
#[derive(Debug, Clone)]
pub struct OptionSpec {
    pub kind: OptionKind,
    pub strike: f64,
    pub maturity: f64,
    pub bond_maturity: Option<f64>,
}

impl OptionSpec {
    pub fn new(kind: OptionKind, strike: f64, maturity: f64) -> Result<Self> {
        if !(strike > 0.0) || !strike.is_finite() {
            return Err(Error::domain(format!("strike must be positive, got {strike}")));
        }
        if !(maturity > 0.0) || !maturity.is_finite() {
            return Err(Error::domain(format!(
                "maturity must be positive, got {maturity}"
            )));
        }
        Ok(OptionSpec { kind, strike, maturity, bond_maturity: None })
    }

    /// Attaches the maturity of the underlying bond.
    pub fn with_bond_maturity(mut self, q: f64) -> Result<Self> {
        if !(q >= self.maturity) || !q.is_finite() {
            return Err(Error::domain(format!(
                "bond maturity {q} must not precede option maturity {}",
                self.maturity
            )));
        }
        self.bond_maturity = Some(q);
        Ok(self)
    }

    /// Bond maturity, or an error for models that require one.
    pub fn bond_maturity_required(&self) -> Result<f64> {
        self.bond_maturity.ok_or_else(|| {
            Error::model("this model prices options on a bond and needs a bond maturity")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_strike_and_maturity() {
        assert!(OptionSpec::new(OptionKind::Call, 50.0, 1.0).is_ok());
        assert!(OptionSpec::new(OptionKind::Call, 0.0, 1.0).is_err());
        assert!(OptionSpec::new(OptionKind::Call, -3.0, 1.0).is_err());
        assert!(OptionSpec::new(OptionKind::Put, 50.0, 0.0).is_err());
    }

    #[test]
    fn bond_maturity_must_cover_option_maturity() {
        let spec = OptionSpec::new(OptionKind::Put, 0.3, 1.0).unwrap();
        assert!(spec.clone().with_bond_maturity(0.5).is_err());
        let ok = spec.with_bond_maturity(2.0).unwrap();
        assert_eq!(ok.bond_maturity_required().unwrap(), 2.0);
    }

    #[test]
    fn missing_bond_maturity_is_reported() {
        let spec = OptionSpec::new(OptionKind::Put, 0.3, 1.0).unwrap();
        assert!(spec.bond_maturity_required().is_err());
    }
}
