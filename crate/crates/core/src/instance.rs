use alloc::string::String;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::solver::{MultivaluedMap, SelfMap};
use crate::{DistanceFunction, Error, FiniteMetricSpace, PiecewiseLinearGauge, Result};

/// Generator seed and profile name recorded with an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Provenance {
    pub seed: u64,
    pub profile: String,
}

/// Everything a fixed-point theorem talks about: `(X,d)`, `κ`, `T`, and the
/// optional `φ`, `μ` and `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub space: FiniteMetricSpace,
    pub kappa: DistanceFunction,
    pub map: MultivaluedMap,
    pub phi: Option<SelfMap>,
    pub mu: Option<PiecewiseLinearGauge>,
    pub lipschitz: Option<f64>,
    pub provenance: Option<Provenance>,
}

impl Instance {
    /// Builds an instance with no optional parts, checking that all
    /// components live on the same point set.
    pub fn new(
        space: FiniteMetricSpace,
        kappa: DistanceFunction,
        map: MultivaluedMap,
    ) -> Result<Self> {
        let inst = Self {
            space,
            kappa,
            map,
            phi: None,
            mu: None,
            lipschitz: None,
            provenance: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.space.len();
        let same = |found: usize| {
            if found == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: n, found })
            }
        };
        same(self.kappa.len())?;
        same(self.map.len())?;
        self.map.check_within(n)?;
        if let Some(phi) = &self.phi {
            same(phi.len())?;
            phi.check_within(n)?;
        }
        if let Some(l) = self.lipschitz {
            if !l.is_finite() {
                return Err(Error::Malformed("L must be finite".into()));
            }
        }
        Ok(())
    }

    /// The same instance with `κ := d` and `φ := identity`, the setting of the
    /// classical metric theorems.
    pub fn metric_specialization(&self) -> Instance {
        Instance {
            kappa: self.space.as_distance(),
            phi: Some(SelfMap::identity(self.len())),
            ..self.clone()
        }
    }
}
