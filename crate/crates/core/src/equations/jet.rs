use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::scalar::{all_finite, Real};

/// Pointwise value plus first and second derivatives of a field of two
/// variables.
///
/// The labels follow the physical frame `(t, r)`; the same container carries
/// `(t, x)` jets for the planar string equation and `(tau, rho)` jets in
/// similarity coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SecondOrderJet<T> {
    pub u: T,
    pub u_t: T,
    pub u_r: T,
    pub u_tt: T,
    pub u_tr: T,
    pub u_rr: T,
}

impl<T: Real> SecondOrderJet<T> {
    /// Builds a jet, rejecting non-finite entries.
    pub fn new(u: T, u_t: T, u_r: T, u_tt: T, u_tr: T, u_rr: T) -> Result<Self> {
        let jet = Self { u, u_t, u_r, u_tt, u_tr, u_rr };
        jet.validate()?;
        Ok(jet)
    }

    pub fn zero() -> Self {
        Self {
            u: T::zero(),
            u_t: T::zero(),
            u_r: T::zero(),
            u_tt: T::zero(),
            u_tr: T::zero(),
            u_rr: T::zero(),
        }
    }

    /// Jet of a field that depends on the spatial variable only.
    pub fn stationary(u: T, u_r: T, u_rr: T) -> Result<Self> {
        Self::new(u, T::zero(), u_r, T::zero(), T::zero(), u_rr)
    }

    pub fn as_array(&self) -> [T; 6] {
        [self.u, self.u_t, self.u_r, self.u_tt, self.u_tr, self.u_rr]
    }

    pub fn from_array(a: [T; 6]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    pub fn validate(&self) -> Result<()> {
        if all_finite(&self.as_array()) {
            Ok(())
        } else {
            Err(invalid(format!("non-finite jet entry in {self:?}")))
        }
    }
}

impl<T: Real> Neg for SecondOrderJet<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            u: -self.u,
            u_t: -self.u_t,
            u_r: -self.u_r,
            u_tt: -self.u_tt,
            u_tr: -self.u_tr,
            u_rr: -self.u_rr,
        }
    }
}

/// Value and first two derivatives of a self-similar profile `phi(rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProfileJet<T> {
    pub phi: T,
    pub dphi: T,
    pub d2phi: T,
}

impl<T: Real> ProfileJet<T> {
    pub fn new(phi: T, dphi: T, d2phi: T) -> Result<Self> {
        if !all_finite(&[phi, dphi, d2phi]) {
            return Err(invalid(format!("non-finite profile jet ({phi}, {dphi}, {d2phi})")));
        }
        Ok(Self { phi, dphi, d2phi })
    }

    /// `1 - rho^2 - phi^2`, the coefficient that multiplies `rho * phi''` in
    /// the profile equation. It vanishes identically on the explicit profiles.
    pub fn degeneracy_indicator(&self, rho: T) -> T {
        T::one() - rho * rho - self.phi * self.phi
    }

    /// Lifts the profile into a jet in similarity coordinates that does not
    /// depend on `tau`.
    pub fn to_static_jet(&self) -> SecondOrderJet<T> {
        SecondOrderJet {
            u: self.phi,
            u_t: T::zero(),
            u_r: self.dphi,
            u_tt: T::zero(),
            u_tr: T::zero(),
            u_rr: self.d2phi,
        }
    }
}

/// Sign selecting one of the two explicit self-similar solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+1",
            Branch::Minus => "-1",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Branch::Plus),
            "-" | "-1" | "minus" => Ok(Branch::Minus),
            other => Err(invalid(format!("branch must be +1 or -1, got `{other}`"))),
        }
    }
}

/// Result of evaluating a closed form that may sit on the lightcone, where
/// the value is finite but derivatives diverge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation<J, T> {
    Interior(J),
    /// On the boundary: value only, derivatives overflow.
    Boundary {
        value: T,
    },
}

impl<J: Copy, T: Copy> Evaluation<J, T> {
    pub fn jet(&self) -> Option<J> {
        match self {
            Evaluation::Interior(j) => Some(*j),
            Evaluation::Boundary { .. } => None,
        }
    }

    pub fn derivative_overflow(&self) -> bool {
        matches!(self, Evaluation::Boundary { .. })
    }
}

impl<T: Real> Evaluation<ProfileJet<T>, T> {
    pub fn phi(&self) -> T {
        match self {
            Evaluation::Interior(j) => j.phi,
            Evaluation::Boundary { value } => *value,
        }
    }
}

impl<T: Real> Evaluation<SecondOrderJet<T>, T> {
    pub fn value(&self) -> T {
        match self {
            Evaluation::Interior(j) => j.u,
            Evaluation::Boundary { value } => *value,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        assert!(SecondOrderJet::new(0.0, f64::NAN, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SecondOrderJet::new(0.0, 0.0, 0.0, f64::INFINITY, 0.0, 0.0).is_err());
        assert!(ProfileJet::new(1.0, f64::NEG_INFINITY, 0.0).is_err());
        assert!(SecondOrderJet::new(1.0f32, 2.0, 3.0, 4.0, 5.0, 6.0).is_ok());
    }

    #[test]
    fn branch_parsing() {
        assert_eq!("+1".parse::<Branch>().unwrap(), Branch::Plus);
        assert_eq!("-1".parse::<Branch>().unwrap(), Branch::Minus);
        assert!("0".parse::<Branch>().is_err());
        assert_eq!(Branch::Minus.sign::<f64>(), -1.0);
    }
}
