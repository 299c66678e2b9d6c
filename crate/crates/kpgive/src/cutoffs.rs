//! Truncation parameters shared by every computation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `E` doubled energy, `W` x-weight, `Z` z-order, `T` t-degree, `D` θ depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutoffs {
    pub energy2: i32,
    pub xweight: u32,
    pub zorder: usize,
    pub tdegree: u32,
    #[serde(rename = "thetaDepth", alias = "theta_depth")]
    pub theta_depth: usize,
}

impl Cutoffs {
    /// Defaults derived from `W` and `Z`: `E = 2(W + Z + 1) + 4`, `T = W`, `D = Z`.
    pub fn from_wz(xweight: u32, zorder: usize) -> Self {
        Cutoffs {
            energy2: 2 * (xweight as i32 + zorder as i32 + 1) + 4,
            xweight,
            zorder,
            tdegree: xweight,
            theta_depth: zorder,
        }
    }

    pub fn new(energy2: i32, xweight: u32, zorder: usize, tdegree: u32, theta_depth: usize) -> Self {
        Cutoffs {
            energy2,
            xweight,
            zorder,
            tdegree,
            theta_depth,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.energy2 <= 0 || self.xweight == 0 || self.zorder == 0 || self.tdegree == 0 || self.theta_depth == 0 {
            return Err(Error::Parse("cutoffs E, W, Z, T, D must all be positive".into()));
        }
        Ok(())
    }

    /// Parses `E,W,Z,T,D`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("cutoffs {s:?}: expected five positive integers E,W,Z,T,D"));
        if parts.len() != 5 {
            return Err(bad());
        }
        let nums: Vec<u64> = parts
            .iter()
            .map(|p| p.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let c = Cutoffs::new(nums[0] as i32, nums[1] as u32, nums[2] as usize, nums[3] as u32, nums[4] as usize);
        c.validate()?;
        Ok(c)
    }

    /// Same cutoffs with `E` raised by `delta` (stabilization reruns).
    pub fn with_energy_bump(&self, delta: i32) -> Self {
        Cutoffs {
            energy2: self.energy2 + delta,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_defaults() {
        let c = Cutoffs::parse("24,5,5,6,5").unwrap();
        assert_eq!(c, Cutoffs::new(24, 5, 5, 6, 5));
        assert!(Cutoffs::parse("24,5,5,6").is_err());
        assert!(Cutoffs::parse("24,0,5,6,5").is_err());
        assert_eq!(Cutoffs::from_wz(4, 4).energy2, 22);
    }
}
