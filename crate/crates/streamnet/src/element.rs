use std::any::Any;

use crate::error::StepError;
use crate::signal::Signal;

/// Declaration of one input or output node of an element: a label plus the
/// signal width carried on that node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSpec {
    label: String,
    width: usize,
}

impl NodeSpec {
    pub fn new(label: impl Into<String>, width: usize) -> Self {
        Self {
            label: label.into(),
            width,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// A stateful node of the dataflow graph.
///
/// The number, order, and widths of input/output nodes are fixed after
/// construction. One call to [`step`](Element::step) consumes exactly one
/// signal per input node and produces exactly one signal per output node.
///
/// Elements never pull their own inputs; the enclosing [`StreamNet`]
/// gathers them under its synchronous one-step-delay semantics and hands
/// them in. An element therefore does not know (or care) whether a given
/// input comes from another element or from a net input port.
///
/// [`StreamNet`]: crate::StreamNet
pub trait Element: Send + 'static {
    fn input_nodes(&self) -> &[NodeSpec];

    fn output_nodes(&self) -> &[NodeSpec];

    /// Advance one time step. `inputs` holds one signal per input node,
    /// `outputs` one pre-sized buffer per output node to write into.
    fn step(&mut self, inputs: &[&Signal], outputs: &mut [Signal]) -> Result<(), StepError>;

    /// Restore the element to its exact construction-time state
    /// (including learned weights and RNG positions).
    fn reset(&mut self);

    /// Zero the fast-moving state (membrane potentials, filters, traces)
    /// while keeping learned weights and RNG positions. Stateless
    /// elements need not override.
    fn clear_transient(&mut self) {}

    /// Enable or disable plasticity. Elements without learnable state
    /// ignore it; container elements forward it to their children.
    fn set_learning(&mut self, _enabled: bool) {}

    fn clone_box(&self) -> Box<dyn Element>;

    fn as_any(&self) -> &dyn Any;

    fn as_any_mut(&mut self) -> &mut dyn Any;
}

impl Clone for Box<dyn Element> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}
