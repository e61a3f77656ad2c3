use std::ops::{Deref, DerefMut};

/// A fixed-width vector of real values carried on one edge of the graph.
///
/// Spikes are encoded as 0.0/1.0 entries; analog values are allowed for
/// modulatory or filtered lines. The width is fixed per edge and checked
/// at wiring time.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
}

impl Signal {
    pub fn zeros(width: usize) -> Self {
        Self {
            values: vec![0.0; width],
        }
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Overwrite all entries from `src`. Panics if the widths differ.
    pub fn copy_from(&mut self, src: &[f64]) {
        self.values.copy_from_slice(src);
    }

    pub fn fill(&mut self, value: f64) {
        self.values.iter_mut().for_each(|v| *v = value);
    }
}

impl Deref for Signal {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for Signal {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

impl From<Vec<f64>> for Signal {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}
