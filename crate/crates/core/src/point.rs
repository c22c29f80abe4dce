use serde::{Deserialize, Serialize};

/// A point of a Möbius space: finite model coordinates or the model's point at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MPoint {
    Finite(Vec<f64>),
    Infinity,
}

impl MPoint {
    pub fn finite(coords: impl Into<Vec<f64>>) -> Self {
        MPoint::Finite(coords.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MPoint::Infinity)
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            MPoint::Finite(c) => Some(c),
            MPoint::Infinity => None,
        }
    }

    /// Coordinates of a point known to be finite.
    ///
    /// Panics on `Infinity`; callers use it only after ruling that out.
    pub fn expect_finite(&self) -> &[f64] {
        self.coords().expect("point at infinity where a finite point was required")
    }

    pub fn has_finite_coords(&self) -> bool {
        match self {
            MPoint::Finite(c) => c.iter().all(|v| v.is_finite()),
            MPoint::Infinity => true,
        }
    }
}

impl From<Vec<f64>> for MPoint {
    fn from(c: Vec<f64>) -> Self {
        MPoint::Finite(c)
    }
}

impl From<&[f64]> for MPoint {
    fn from(c: &[f64]) -> Self {
        MPoint::Finite(c.to_vec())
    }
}
