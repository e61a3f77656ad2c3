//! Small reference elements: signal plumbing useful in real nets and in
//! tests of the execution semantics.

use std::any::Any;

use crate::element::{Element, NodeSpec};
use crate::error::StepError;
use crate::signal::Signal;

/// Copies its single input to its single output.
#[derive(Clone, Debug)]
pub struct Identity {
    inputs: [NodeSpec; 1],
    outputs: [NodeSpec; 1],
}

impl Identity {
    pub fn new(width: usize) -> Self {
        Self {
            inputs: [NodeSpec::new("in", width)],
            outputs: [NodeSpec::new("out", width)],
        }
    }
}

impl Element for Identity {
    fn input_nodes(&self) -> &[NodeSpec] {
        &self.inputs
    }

    fn output_nodes(&self) -> &[NodeSpec] {
        &self.outputs
    }

    fn step(&mut self, inputs: &[&Signal], outputs: &mut [Signal]) -> Result<(), StepError> {
        outputs[0].copy_from(inputs[0]);
        Ok(())
    }

    fn reset(&mut self) {}

    fn clone_box(&self) -> Box<dyn Element> {
        Box::new(self.clone())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }

    fn as_any_mut(&mut self) -> &mut dyn Any {
        self
    }
}

/// Elementwise sum of `n` equally wide inputs, labeled `in0..in{n-1}`.
#[derive(Clone, Debug)]
pub struct Sum {
    inputs: Vec<NodeSpec>,
    outputs: [NodeSpec; 1],
}

impl Sum {
    pub fn new(n_inputs: usize, width: usize) -> Self {
        let inputs = (0..n_inputs)
            .map(|i| NodeSpec::new(format!("in{i}"), width))
            .collect();
        Self {
            inputs,
            outputs: [NodeSpec::new("out", width)],
        }
    }
}

impl Element for Sum {
    fn input_nodes(&self) -> &[NodeSpec] {
        &self.inputs
    }

    fn output_nodes(&self) -> &[NodeSpec] {
        &self.outputs
    }

    fn step(&mut self, inputs: &[&Signal], outputs: &mut [Signal]) -> Result<(), StepError> {
        let out = outputs[0].as_mut_slice();
        out.fill(0.0);
        for sig in inputs {
            for (acc, v) in out.iter_mut().zip(sig.iter()) {
                *acc += v;
            }
        }
        Ok(())
    }

    fn reset(&mut self) {}

    fn clone_box(&self) -> Box<dyn Element> {
        Box::new(self.clone())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }

    fn as_any_mut(&mut self) -> &mut dyn Any {
        self
    }
}
