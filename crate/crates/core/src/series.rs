use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Observations in time order. Nonempty, every value finite.
///
/// Sorting always happens on copies; the stored order is the observation
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TimeSeries<T> {
    values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Ascending copy. Stable, so equal values keep their time order.
    pub fn sorted(&self) -> Vec<T> {
        let mut out = self.values.clone();
        sort_finite(&mut out);
        out
    }

    /// Contiguous sub-series `range`, used to cut adjacent blocks.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.values.len() {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            values: self.values[range].to_vec(),
        })
    }

    /// Applies `f` elementwise, keeping order.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn has_ties(&self) -> bool {
        has_adjacent_equal(&self.sorted())
    }
}

impl<T> Deref for TimeSeries<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.values
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for TimeSeries<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<T>::deserialize(d)?;
        Self::new(values).map_err(serde::de::Error::custom)
    }
}

/// True when any value occurs in both series or twice in one of them.
pub fn ties_between<T: Scalar>(x: &TimeSeries<T>, y: &TimeSeries<T>) -> bool {
    let mut all: Vec<T> = x.values.iter().chain(y.values.iter()).copied().collect();
    sort_finite(&mut all);
    has_adjacent_equal(&all)
}

pub(crate) fn sort_finite<T: Scalar>(v: &mut [T]) {
    // values are validated finite, so partial_cmp never fails
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values are totally ordered"));
}

fn has_adjacent_equal<T: Scalar>(sorted: &[T]) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}
