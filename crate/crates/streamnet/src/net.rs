use std::any::Any;
use std::collections::HashMap;

use crate::element::{Element, NodeSpec};
use crate::error::{Diagnostic, NetError, StepError};
use crate::signal::Signal;

/// Where an input node (or net output port) draws its value from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    /// A net input port, read from the current `step` call.
    Input(usize),
    /// An element output node, read from the previous step.
    Node { elem: usize, out: usize },
}

#[derive(Clone)]
struct Slot {
    name: String,
    elem: Box<dyn Element>,
    /// One entry per input node of the element.
    wiring: Vec<Option<Source>>,
}

/// A directed graph of [`Element`]s advancing in lockstep at a shared
/// discrete time step.
///
/// Every element input node has indegree exactly one; output nodes may fan
/// out freely. The execution model is synchronous with a one-step delay on
/// every edge: during step `n+1` each element reads the outputs its
/// sources produced at step `n`, so the result is invariant under any
/// re-ordering of element execution and cycles never deadlock. Signals
/// injected through [`step`](Self::step) obey the same rule — an input
/// presented at step `n` is seen by port-wired elements at step `n+1`.
/// Net output ports return the outputs just produced by their sources.
///
/// A `StreamNet` is itself an [`Element`], so nets compose. When nested,
/// the parent has already applied the edge delay while gathering the
/// child's inputs, so the child consumes them directly; port boundaries
/// therefore add no delay of their own and [`flattened`](Self::flattened)
/// reproduces the nested net's outputs bit for bit.
#[derive(Clone)]
pub struct StreamNet {
    slots: Vec<Slot>,
    by_name: HashMap<String, usize>,
    input_ports: Vec<NodeSpec>,
    output_ports: Vec<NodeSpec>,
    /// One entry per output port: the element output node it mirrors.
    output_wiring: Vec<Option<Source>>,
    /// Per element: outputs of the most recent step.
    out_cur: Vec<Vec<Signal>>,
    /// Per element: scratch buffers the next step writes into.
    out_next: Vec<Vec<Signal>>,
    /// Top-level edge delay for injected inputs: values presented to the
    /// previous `step` call, consumed by the current one.
    input_latch: Vec<Signal>,
    exec_order: Vec<usize>,
    step_count: u64,
    dirty: bool,
}

impl Default for StreamNet {
    fn default() -> Self {
        Self::new()
    }
}

impl StreamNet {
    pub fn new() -> Self {
        Self {
            slots: Vec::new(),
            by_name: HashMap::new(),
            input_ports: Vec::new(),
            output_ports: Vec::new(),
            output_wiring: Vec::new(),
            out_cur: Vec::new(),
            out_next: Vec::new(),
            input_latch: Vec::new(),
            exec_order: Vec::new(),
            step_count: 0,
            dirty: true,
        }
    }

    /// Declare a net input port. Ports are ordered by declaration.
    pub fn add_input_port(&mut self, label: &str, width: usize) -> Result<(), NetError> {
        if self.input_ports.iter().any(|p| p.label() == label) {
            return Err(NetError::DuplicateName(label.to_string()));
        }
        self.input_ports.push(NodeSpec::new(label, width));
        self.input_latch.push(Signal::zeros(width));
        self.dirty = true;
        Ok(())
    }

    /// Declare a net output port. It must later be wired to an element
    /// output node with [`connect_output`](Self::connect_output).
    pub fn add_output_port(&mut self, label: &str, width: usize) -> Result<(), NetError> {
        if self.output_ports.iter().any(|p| p.label() == label) {
            return Err(NetError::DuplicateName(label.to_string()));
        }
        self.output_ports.push(NodeSpec::new(label, width));
        self.output_wiring.push(None);
        self.dirty = true;
        Ok(())
    }

    /// Register an element under `name` with all input nodes unwired.
    pub fn add_element<E: Element>(&mut self, name: &str, elem: E) -> Result<(), NetError> {
        self.add_boxed_element(name, Box::new(elem))
    }

    pub fn add_boxed_element(&mut self, name: &str, elem: Box<dyn Element>) -> Result<(), NetError> {
        if self.by_name.contains_key(name) {
            return Err(NetError::DuplicateName(name.to_string()));
        }
        let idx = self.slots.len();
        let n_inputs = elem.input_nodes().len();
        let out_bufs: Vec<Signal> = elem
            .output_nodes()
            .iter()
            .map(|n| Signal::zeros(n.width()))
            .collect();
        self.out_cur.push(out_bufs.clone());
        self.out_next.push(out_bufs);
        self.slots.push(Slot {
            name: name.to_string(),
            elem,
            wiring: vec![None; n_inputs],
        });
        self.by_name.insert(name.to_string(), idx);
        self.exec_order.push(idx);
        self.dirty = true;
        Ok(())
    }

    fn elem_index(&self, name: &str) -> Result<usize, NetError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| NetError::UnknownElement(name.to_string()))
    }

    fn input_node_index(&self, elem: usize, node: &str) -> Result<usize, NetError> {
        self.slots[elem]
            .elem
            .input_nodes()
            .iter()
            .position(|n| n.label() == node)
            .ok_or_else(|| NetError::UnknownNode {
                element: self.slots[elem].name.clone(),
                node: node.to_string(),
            })
    }

    fn output_node_index(&self, elem: usize, node: &str) -> Result<usize, NetError> {
        self.slots[elem]
            .elem
            .output_nodes()
            .iter()
            .position(|n| n.label() == node)
            .ok_or_else(|| NetError::UnknownNode {
                element: self.slots[elem].name.clone(),
                node: node.to_string(),
            })
    }

    fn wire_input(
        &mut self,
        src: Source,
        src_desc: String,
        src_width: usize,
        dst: (&str, &str),
    ) -> Result<(), NetError> {
        let (dst_elem, dst_node) = dst;
        let de = self.elem_index(dst_elem)?;
        let dn = self.input_node_index(de, dst_node)?;
        let dst_width = self.slots[de].elem.input_nodes()[dn].width();
        if src_width != dst_width {
            return Err(NetError::WidthMismatch {
                src: src_desc,
                src_width,
                dst: format!("{dst_elem}.{dst_node}"),
                dst_width,
            });
        }
        let entry = &mut self.slots[de].wiring[dn];
        if entry.is_some() {
            return Err(NetError::IndegreeViolation {
                element: dst_elem.to_string(),
                node: dst_node.to_string(),
            });
        }
        *entry = Some(src);
        self.dirty = true;
        Ok(())
    }

    /// Wire an element output node to an element input node.
    pub fn connect(&mut self, src: (&str, &str), dst: (&str, &str)) -> Result<(), NetError> {
        let (src_elem, src_node) = src;
        let se = self.elem_index(src_elem)?;
        let so = self.output_node_index(se, src_node)?;
        let width = self.slots[se].elem.output_nodes()[so].width();
        self.wire_input(
            Source::Node { elem: se, out: so },
            format!("{src_elem}.{src_node}"),
            width,
            dst,
        )
    }

    /// Wire a net input port to an element input node.
    pub fn connect_input(&mut self, port: &str, dst: (&str, &str)) -> Result<(), NetError> {
        let p = self
            .input_ports
            .iter()
            .position(|n| n.label() == port)
            .ok_or_else(|| NetError::UnknownPort(port.to_string()))?;
        let width = self.input_ports[p].width();
        self.wire_input(Source::Input(p), format!("<input:{port}>"), width, dst)
    }

    /// Wire an element output node to a net output port.
    pub fn connect_output(&mut self, src: (&str, &str), port: &str) -> Result<(), NetError> {
        let p = self
            .output_ports
            .iter()
            .position(|n| n.label() == port)
            .ok_or_else(|| NetError::UnknownPort(port.to_string()))?;
        let (src_elem, src_node) = src;
        let se = self.elem_index(src_elem)?;
        let so = self.output_node_index(se, src_node)?;
        let src_width = self.slots[se].elem.output_nodes()[so].width();
        let dst_width = self.output_ports[p].width();
        if src_width != dst_width {
            return Err(NetError::WidthMismatch {
                src: format!("{src_elem}.{src_node}"),
                src_width,
                dst: format!("<output:{port}>"),
                dst_width,
            });
        }
        if self.output_wiring[p].is_some() {
            return Err(NetError::OutputPortWired(port.to_string()));
        }
        self.output_wiring[p] = Some(Source::Node { elem: se, out: so });
        self.dirty = true;
        Ok(())
    }

    /// Check that every element input node and every net output port is
    /// wired. Returns one diagnostic per dangling node.
    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        for slot in &self.slots {
            for (i, wired) in slot.wiring.iter().enumerate() {
                if wired.is_none() {
                    diags.push(Diagnostic::UnwiredInput {
                        element: slot.name.clone(),
                        node: slot.elem.input_nodes()[i].label().to_string(),
                    });
                }
            }
        }
        for (p, wired) in self.output_wiring.iter().enumerate() {
            if wired.is_none() {
                diags.push(Diagnostic::UnwiredOutputPort {
                    port: self.output_ports[p].label().to_string(),
                });
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }

    fn ensure_valid(&mut self) -> Result<(), NetError> {
        if self.dirty {
            self.validate().map_err(NetError::InvalidGraph)?;
            self.dirty = false;
        }
        Ok(())
    }

    /// Advance the whole net one step and return one signal per output port.
    ///
    /// `inputs` are placed on the input-port wires and, like every other
    /// edge, reach their consumers on the following step; this call's
    /// port-wired elements see the previous call's inputs.
    pub fn step(&mut self, inputs: &[Signal]) -> Result<Vec<Signal>, NetError> {
        self.ensure_valid()?;
        let refs: Vec<&Signal> = inputs.iter().collect();
        self.check_step_inputs(&refs)?;
        let latch = std::mem::take(&mut self.input_latch);
        let latched: Vec<&Signal> = latch.iter().collect();
        let result = self.step_refs(&latched);
        self.input_latch = latch;
        result?;
        for (wire, sig) in self.input_latch.iter_mut().zip(inputs) {
            wire.copy_from(sig);
        }
        let mut out: Vec<Signal> = self
            .output_ports
            .iter()
            .map(|p| Signal::zeros(p.width()))
            .collect();
        self.write_port_outputs(&mut out);
        Ok(out)
    }

    fn check_step_inputs(&self, inputs: &[&Signal]) -> Result<(), NetError> {
        if inputs.len() != self.input_ports.len() {
            return Err(NetError::BadStepInput(format!(
                "expected {} input signals, got {}",
                self.input_ports.len(),
                inputs.len()
            )));
        }
        for (sig, port) in inputs.iter().zip(&self.input_ports) {
            if sig.width() != port.width() {
                return Err(NetError::BadStepInput(format!(
                    "input port `{}` expects width {}, got {}",
                    port.label(),
                    port.width(),
                    sig.width()
                )));
            }
        }
        Ok(())
    }

    fn step_refs(&mut self, inputs: &[&Signal]) -> Result<(), NetError> {
        self.ensure_valid()?;
        self.check_step_inputs(inputs)?;

        let slots = &mut self.slots;
        let cur = &self.out_cur;
        let next = &mut self.out_next;
        let mut gathered: Vec<&Signal> = Vec::new();
        for &idx in &self.exec_order {
            let slot = &mut slots[idx];
            gathered.clear();
            for src in &slot.wiring {
                let sig = match src.expect("validated wiring") {
                    Source::Input(p) => inputs[p],
                    Source::Node { elem, out } => &cur[elem][out],
                };
                gathered.push(sig);
            }
            slot.elem
                .step(&gathered, &mut next[idx])
                .map_err(|source| NetError::Element {
                    name: slot.name.clone(),
                    source,
                })?;
        }
        std::mem::swap(&mut self.out_cur, &mut self.out_next);
        self.step_count += 1;
        Ok(())
    }

    fn write_port_outputs(&self, out: &mut [Signal]) {
        for (p, src) in self.output_wiring.iter().enumerate() {
            match src.expect("validated output wiring") {
                Source::Node { elem, out: o } => out[p].copy_from(&self.out_cur[elem][o]),
                Source::Input(_) => unreachable!("output ports wire to element nodes"),
            }
        }
    }

    /// Number of steps taken since construction or the last [`reset`](Self::reset).
    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn input_ports(&self) -> &[NodeSpec] {
        &self.input_ports
    }

    pub fn output_ports(&self) -> &[NodeSpec] {
        &self.output_ports
    }

    pub fn element_names(&self) -> impl Iterator<Item = &str> {
        self.slots.iter().map(|s| s.name.as_str())
    }

    pub fn element(&self, name: &str) -> Option<&dyn Element> {
        self.by_name.get(name).map(|&i| self.slots[i].elem.as_ref())
    }

    pub fn element_mut(&mut self, name: &str) -> Option<&mut dyn Element> {
        match self.by_name.get(name) {
            Some(&i) => Some(self.slots[i].elem.as_mut()),
            None => None,
        }
    }

    /// Override the order elements are visited within a step. Outputs are
    /// invariant under this (see module docs); the hook exists so tests can
    /// prove it.
    pub fn set_execution_order(&mut self, names: &[&str]) -> Result<(), NetError> {
        if names.len() != self.slots.len() {
            return Err(NetError::BadStepInput(format!(
                "execution order names {} elements, net has {}",
                names.len(),
                self.slots.len()
            )));
        }
        let mut order = Vec::with_capacity(names.len());
        let mut seen = vec![false; self.slots.len()];
        for name in names {
            let idx = self.elem_index(name)?;
            if seen[idx] {
                return Err(NetError::DuplicateName((*name).to_string()));
            }
            seen[idx] = true;
            order.push(idx);
        }
        self.exec_order = order;
        Ok(())
    }

    fn zero_buffers(&mut self) {
        for bufs in self.out_cur.iter_mut().chain(self.out_next.iter_mut()) {
            for sig in bufs {
                sig.fill(0.0);
            }
        }
        for sig in &mut self.input_latch {
            sig.fill(0.0);
        }
    }

    /// Restore every element and the step counter to initial state.
    pub fn reset_net(&mut self) {
        for slot in &mut self.slots {
            slot.elem.reset();
        }
        self.zero_buffers();
        self.step_count = 0;
    }

    /// Zero fast-moving state (potentials, filters, traces, in-flight
    /// signals) while keeping learned weights and RNG positions.
    pub fn clear_transient_state(&mut self) {
        for slot in &mut self.slots {
            slot.elem.clear_transient();
        }
        self.zero_buffers();
    }

    /// Enable or disable plasticity in every element (recursively).
    pub fn set_learning_enabled(&mut self, enabled: bool) {
        for slot in &mut self.slots {
            slot.elem.set_learning(enabled);
        }
    }

    fn contains_nested(&self) -> bool {
        self.slots
            .iter()
            .any(|s| s.elem.as_any().is::<StreamNet>())
    }

    /// Inline every nested `StreamNet` into this one, recursively. Inner
    /// elements are renamed `{net}/{inner}`; current state (including
    /// in-flight signals) is preserved, so a flattened net continues with
    /// bit-identical outputs.
    pub fn flattened(&self) -> Result<StreamNet, NetError> {
        let mut net = self.clone();
        while net.contains_nested() {
            net = net.flatten_once()?;
        }
        Ok(net)
    }

    fn flatten_once(&self) -> Result<StreamNet, NetError> {
        let mut flat = StreamNet::new();
        for p in &self.input_ports {
            flat.add_input_port(p.label(), p.width())?;
        }
        for p in &self.output_ports {
            flat.add_output_port(p.label(), p.width())?;
        }

        // Place elements; nested nets are expanded one level.
        enum Placed {
            Leaf(usize),
            Net { inner: StreamNet, base: Vec<usize> },
        }
        let mut placed = Vec::with_capacity(self.slots.len());
        for (idx, slot) in self.slots.iter().enumerate() {
            if let Some(inner) = slot.elem.as_any().downcast_ref::<StreamNet>() {
                let mut base = Vec::with_capacity(inner.slots.len());
                for inner_slot in &inner.slots {
                    let name = format!("{}/{}", slot.name, inner_slot.name);
                    base.push(flat.slots.len());
                    flat.add_boxed_element(&name, inner_slot.elem.clone())?;
                }
                for k in 0..inner.slots.len() {
                    flat.out_cur[base[k]] = inner.out_cur[k].clone();
                    flat.out_next[base[k]] = inner.out_next[k].clone();
                }
                placed.push(Placed::Net {
                    inner: inner.clone(),
                    base,
                });
            } else {
                let new_idx = flat.slots.len();
                flat.add_boxed_element(&slot.name, slot.elem.clone())?;
                flat.out_cur[new_idx] = self.out_cur[idx].clone();
                flat.out_next[new_idx] = self.out_next[idx].clone();
                placed.push(Placed::Leaf(new_idx));
            }
        }

        // Resolve an old-parent source to a source in the flat net. A
        // reference to a nested net's output node is chased through to the
        // inner element backing that output port.
        let resolve = |src: Source| -> Option<Source> {
            match src {
                Source::Input(p) => Some(Source::Input(p)),
                Source::Node { elem, out } => match &placed[elem] {
                    Placed::Leaf(new_idx) => Some(Source::Node {
                        elem: *new_idx,
                        out,
                    }),
                    Placed::Net { inner, base } => match inner.output_wiring[out] {
                        Some(Source::Node { elem: ie, out: io }) => Some(Source::Node {
                            elem: base[ie],
                            out: io,
                        }),
                        _ => None,
                    },
                },
            }
        };

        for (idx, slot) in self.slots.iter().enumerate() {
            match &placed[idx] {
                Placed::Leaf(new_idx) => {
                    for (k, src) in slot.wiring.iter().enumerate() {
                        flat.slots[*new_idx].wiring[k] = src.and_then(resolve);
                    }
                }
                Placed::Net { inner, base } => {
                    for (k, inner_slot) in inner.slots.iter().enumerate() {
                        for (j, src) in inner_slot.wiring.iter().enumerate() {
                            flat.slots[base[k]].wiring[j] = match src {
                                // Inner port feeds straight through to the
                                // nested element's own source in the parent.
                                Some(Source::Input(p)) => slot.wiring[*p].and_then(resolve),
                                Some(Source::Node { elem: ie, out: io }) => Some(Source::Node {
                                    elem: base[*ie],
                                    out: *io,
                                }),
                                None => None,
                            };
                        }
                    }
                }
            }
        }

        for (p, src) in self.output_wiring.iter().enumerate() {
            flat.output_wiring[p] = src.and_then(resolve);
        }
        flat.input_latch = self.input_latch.clone();
        flat.step_count = self.step_count;
        flat.dirty = true;
        Ok(flat)
    }
}

impl Element for StreamNet {
    fn input_nodes(&self) -> &[NodeSpec] {
        &self.input_ports
    }

    fn output_nodes(&self) -> &[NodeSpec] {
        &self.output_ports
    }

    fn step(&mut self, inputs: &[&Signal], outputs: &mut [Signal]) -> Result<(), StepError> {
        // Inside a parent net the wiring is already validated; surface any
        // residual misconfiguration as an input-range failure rather than
        // panicking.
        self.step_refs(inputs)
            .map_err(|e| StepError::InputRange(e.to_string()))?;
        self.write_port_outputs(outputs);
        Ok(())
    }

    fn reset(&mut self) {
        self.reset_net();
    }

    fn clear_transient(&mut self) {
        self.clear_transient_state();
    }

    fn set_learning(&mut self, enabled: bool) {
        self.set_learning_enabled(enabled);
    }

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
