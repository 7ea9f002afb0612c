use crate::error::{Result, TensorError};
use crate::tensor::Tensor;

/// Handle to a value recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    MatMul(Var, Var),
    Add(Var, Var),
    AddBias(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    MulColumn(Var, Var),
    Scale(Var, f64),
    Concat {
        parts: Vec<Var>,
        axis: usize,
    },
    Narrow {
        input: Var,
        axis: usize,
        start: usize,
    },
    Tanh(Var),
    Sigmoid(Var),
    Relu(Var),
    LeakyRelu(Var, f64),
    Softmax {
        input: Var,
        axis: usize,
    },
    Sum(Var),
    Mean(Var),
    CrossEntropy {
        logits: Var,
        labels: Vec<usize>,
        probs: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
struct Node {
    shape: Vec<usize>,
    value: Vec<f64>,
    op: Op,
    requires_grad: bool,
}

/// Records operations in evaluation order and replays them backwards.
///
/// Gradients of leaves accumulate across calls to [`Tape::backward`] until
/// [`Tape::zero_grads`] is called. Intermediate gradients are never kept.
#[derive(Debug, Default, Clone)]
pub struct Tape {
    nodes: Vec<Node>,
    leaf_grads: Vec<Option<Vec<f64>>>,
}

/// (outer, axis length, inner) decomposition of a shape around `axis`.
fn split_axis(shape: &[usize], axis: usize) -> Result<(usize, usize, usize)> {
    if axis >= shape.len() {
        return Err(TensorError::AxisOutOfRange {
            axis,
            shape: shape.to_vec(),
        });
    }
    let outer = shape[..axis].iter().product();
    let inner = shape[axis + 1..].iter().product();
    Ok((outer, shape[axis], inner))
}

fn add_into(dst: &mut Option<Vec<f64>>, src: &[f64]) {
    match dst {
        Some(buf) => {
            for (d, s) in buf.iter_mut().zip(src) {
                *d += s;
            }
        }
        None => *dst = Some(src.to_vec()),
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, shape: Vec<usize>, value: Vec<f64>, op: Op, requires_grad: bool) -> Var {
        debug_assert_eq!(shape.iter().product::<usize>(), value.len());
        self.nodes.push(Node {
            shape,
            value,
            op,
            requires_grad,
        });
        self.leaf_grads.push(None);
        Var(self.nodes.len() - 1)
    }

    fn node(&self, v: Var) -> &Node {
        &self.nodes[v.0]
    }

    fn needs_grad(&self, vars: &[Var]) -> bool {
        vars.iter().any(|v| self.node(*v).requires_grad)
    }

    /// Records a copy of `tensor`, tracking gradients if the tensor asks for them.
    pub fn leaf(&mut self, tensor: &Tensor) -> Var {
        self.push(
            tensor.shape().to_vec(),
            tensor.data().to_vec(),
            Op::Leaf,
            tensor.requires_grad(),
        )
    }

    /// Records a trainable leaf.
    pub fn param(&mut self, tensor: &Tensor) -> Var {
        self.push(tensor.shape().to_vec(), tensor.data().to_vec(), Op::Leaf, true)
    }

    /// Records a leaf that never receives gradients.
    pub fn constant(&mut self, tensor: &Tensor) -> Var {
        self.push(tensor.shape().to_vec(), tensor.data().to_vec(), Op::Leaf, false)
    }

    pub fn value(&self, v: Var) -> &[f64] {
        &self.node(v).value
    }

    pub fn shape(&self, v: Var) -> &[usize] {
        &self.node(v).shape
    }

    pub fn tensor(&self, v: Var) -> Tensor {
        let n = self.node(v);
        Tensor::new(n.shape.clone(), n.value.clone()).expect("recorded shapes are valid")
    }

    /// Accumulated gradient of a leaf, if any backward pass reached it.
    pub fn grad(&self, v: Var) -> Option<&[f64]> {
        self.leaf_grads[v.0].as_deref()
    }

    pub fn zero_grads(&mut self) {
        self.leaf_grads.iter_mut().for_each(|g| *g = None);
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a), self.shape(b));
        if sa.len() != 2 || sb.len() != 2 || sa[1] != sb[0] {
            return Err(TensorError::ShapeMismatch {
                op: "matmul",
                left: sa.to_vec(),
                right: sb.to_vec(),
            });
        }
        let (m, k, n) = (sa[0], sa[1], sb[1]);
        let (av, bv) = (self.value(a), self.value(b));
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            let row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let x = av[i * k + p];
                if x == 0.0 {
                    continue;
                }
                let brow = &bv[p * n..(p + 1) * n];
                for (o, w) in row.iter_mut().zip(brow) {
                    *o += x * w;
                }
            }
        }
        let rg = self.needs_grad(&[a, b]);
        Ok(self.push(vec![m, n], out, Op::MatMul(a, b), rg))
    }

    /// Elementwise sum of equal shapes, or a matrix plus a broadcast row
    /// vector of shape `[n]` or `[1, n]`.
    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(b).to_vec());
        let rg = self.needs_grad(&[a, b]);
        if sa == sb {
            let out = self.value(a).iter().zip(self.value(b)).map(|(x, y)| x + y).collect();
            return Ok(self.push(sa, out, Op::Add(a, b), rg));
        }
        let is_row = |s: &[usize], n: usize| s == [n] || s == [1, n];
        if sa.len() == 2 && is_row(&sb, sa[1]) {
            let n = sa[1];
            let bias = self.value(b);
            let out = self
                .value(a)
                .iter()
                .enumerate()
                .map(|(i, x)| x + bias[i % n])
                .collect();
            return Ok(self.push(sa, out, Op::AddBias(a, b), rg));
        }
        Err(TensorError::ShapeMismatch {
            op: "add",
            left: sa,
            right: sb,
        })
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(b).to_vec());
        if sa != sb {
            return Err(TensorError::ShapeMismatch {
                op: "sub",
                left: sa,
                right: sb,
            });
        }
        let out = self.value(a).iter().zip(self.value(b)).map(|(x, y)| x - y).collect();
        let rg = self.needs_grad(&[a, b]);
        Ok(self.push(sa, out, Op::Sub(a, b), rg))
    }

    /// Elementwise product of equal shapes, or `[m, n] * [m, 1]` with the
    /// column broadcast across each row.
    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(b).to_vec());
        let rg = self.needs_grad(&[a, b]);
        if sa == sb {
            let out = self.value(a).iter().zip(self.value(b)).map(|(x, y)| x * y).collect();
            return Ok(self.push(sa, out, Op::Mul(a, b), rg));
        }
        if sa.len() == 2 && sb == [sa[0], 1] {
            let n = sa[1];
            let col = self.value(b);
            let out = self
                .value(a)
                .iter()
                .enumerate()
                .map(|(i, x)| x * col[i / n])
                .collect();
            return Ok(self.push(sa, out, Op::MulColumn(a, b), rg));
        }
        Err(TensorError::ShapeMismatch {
            op: "mul",
            left: sa,
            right: sb,
        })
    }

    pub fn scale(&mut self, a: Var, factor: f64) -> Var {
        let out = self.value(a).iter().map(|x| x * factor).collect();
        let rg = self.needs_grad(&[a]);
        self.push(self.shape(a).to_vec(), out, Op::Scale(a, factor), rg)
    }

    /// Joins tensors that agree on every dimension except `axis`.
    pub fn concat(&mut self, parts: &[Var], axis: usize) -> Result<Var> {
        let first = *parts.first().ok_or(TensorError::NoOperands("concat"))?;
        let base = self.shape(first).to_vec();
        split_axis(&base, axis)?;
        let mut total = 0;
        for p in parts {
            let s = self.shape(*p);
            let compatible = s.len() == base.len()
                && s.iter().zip(&base).enumerate().all(|(d, (x, y))| d == axis || x == y);
            if !compatible {
                return Err(TensorError::ShapeMismatch {
                    op: "concat",
                    left: base,
                    right: s.to_vec(),
                });
            }
            total += s[axis];
        }
        let mut shape = base;
        shape[axis] = total;
        let (outer, _, inner) = split_axis(&shape, axis)?;
        let mut out = Vec::with_capacity(outer * total * inner);
        for o in 0..outer {
            for p in parts {
                let block = self.shape(*p)[axis] * inner;
                out.extend_from_slice(&self.value(*p)[o * block..(o + 1) * block]);
            }
        }
        let rg = self.needs_grad(parts);
        Ok(self.push(
            shape,
            out,
            Op::Concat {
                parts: parts.to_vec(),
                axis,
            },
            rg,
        ))
    }

    /// The sub-tensor `start..start + len` along `axis`.
    pub fn narrow(&mut self, a: Var, axis: usize, start: usize, len: usize) -> Result<Var> {
        let shape = self.shape(a).to_vec();
        let (outer, n, inner) = split_axis(&shape, axis)?;
        if len == 0 || start + len > n {
            return Err(TensorError::ShapeMismatch {
                op: "narrow",
                left: shape,
                right: vec![start, len],
            });
        }
        let src = self.value(a);
        let mut out = Vec::with_capacity(outer * len * inner);
        for o in 0..outer {
            let base = o * n * inner + start * inner;
            out.extend_from_slice(&src[base..base + len * inner]);
        }
        let mut new_shape = shape;
        new_shape[axis] = len;
        let rg = self.needs_grad(&[a]);
        Ok(self.push(new_shape, out, Op::Narrow { input: a, axis, start }, rg))
    }

    fn unary(&mut self, a: Var, f: impl Fn(f64) -> f64, op: Op) -> Var {
        let out = self.value(a).iter().map(|&x| f(x)).collect();
        let rg = self.needs_grad(&[a]);
        self.push(self.shape(a).to_vec(), out, op, rg)
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        self.unary(a, f64::tanh, Op::Tanh(a))
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        self.unary(a, sigmoid, Op::Sigmoid(a))
    }

    pub fn relu(&mut self, a: Var) -> Var {
        self.unary(a, |x| if x > 0.0 { x } else { 0.0 }, Op::Relu(a))
    }

    pub fn leaky_relu(&mut self, a: Var, slope: f64) -> Var {
        self.unary(a, |x| if x > 0.0 { x } else { slope * x }, Op::LeakyRelu(a, slope))
    }

    pub fn softmax(&mut self, a: Var, axis: usize) -> Result<Var> {
        self.softmax_impl(a, axis, None)
    }

    /// Softmax along `axis` over the positions where `mask` is true. Masked
    /// positions come out as exactly 0; a fully masked slice is all zeros.
    pub fn masked_softmax(&mut self, a: Var, axis: usize, mask: &[bool]) -> Result<Var> {
        if mask.len() != self.value(a).len() {
            return Err(TensorError::ShapeMismatch {
                op: "masked_softmax",
                left: self.shape(a).to_vec(),
                right: vec![mask.len()],
            });
        }
        self.softmax_impl(a, axis, Some(mask))
    }

    fn softmax_impl(&mut self, a: Var, axis: usize, mask: Option<&[bool]>) -> Result<Var> {
        let shape = self.shape(a).to_vec();
        let (outer, n, inner) = split_axis(&shape, axis)?;
        let x = self.value(a);
        let keep = |idx: usize| mask.is_none_or(|m| m[idx]);
        let mut out = vec![0.0; x.len()];
        for o in 0..outer {
            for i in 0..inner {
                let at = |k: usize| o * n * inner + k * inner + i;
                let max = (0..n)
                    .filter(|&k| keep(at(k)))
                    .map(|k| x[at(k)])
                    .fold(f64::NEG_INFINITY, f64::max);
                if max == f64::NEG_INFINITY {
                    continue;
                }
                let mut total = 0.0;
                for k in 0..n {
                    if keep(at(k)) {
                        let e = (x[at(k)] - max).exp();
                        out[at(k)] = e;
                        total += e;
                    }
                }
                for k in 0..n {
                    out[at(k)] /= total;
                }
            }
        }
        let rg = self.needs_grad(&[a]);
        Ok(self.push(shape, out, Op::Softmax { input: a, axis }, rg))
    }

    pub fn sum(&mut self, a: Var) -> Var {
        let total = self.value(a).iter().sum();
        let rg = self.needs_grad(&[a]);
        self.push(vec![1], vec![total], Op::Sum(a), rg)
    }

    pub fn mean(&mut self, a: Var) -> Var {
        let v = self.value(a);
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let rg = self.needs_grad(&[a]);
        self.push(vec![1], vec![m], Op::Mean(a), rg)
    }

    /// Mean negative log-likelihood of `labels` under row-wise softmax of
    /// `logits` (`[m, c]`).
    pub fn softmax_cross_entropy(&mut self, logits: Var, labels: &[usize]) -> Result<Var> {
        let shape = self.shape(logits).to_vec();
        if shape.len() != 2 || shape[0] != labels.len() {
            return Err(TensorError::ShapeMismatch {
                op: "softmax_cross_entropy",
                left: shape,
                right: vec![labels.len()],
            });
        }
        let (m, c) = (shape[0], shape[1]);
        if let Some(&label) = labels.iter().find(|&&l| l >= c) {
            return Err(TensorError::LabelOutOfRange { label, classes: c });
        }
        let x = self.value(logits);
        let mut probs = vec![0.0; m * c];
        let mut loss = 0.0;
        for (r, &label) in labels.iter().enumerate() {
            let row = &x[r * c..(r + 1) * c];
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let total: f64 = row.iter().map(|v| (v - max).exp()).sum();
            let log_z = max + total.ln();
            for k in 0..c {
                probs[r * c + k] = (row[k] - log_z).exp();
            }
            loss -= row[label] - log_z;
        }
        loss /= m as f64;
        let rg = self.needs_grad(&[logits]);
        Ok(self.push(
            vec![1],
            vec![loss],
            Op::CrossEntropy {
                logits,
                labels: labels.to_vec(),
                probs,
            },
            rg,
        ))
    }

    /// Reverse sweep from a scalar `loss`, adding into leaf gradients.
    pub fn backward(&mut self, loss: Var) -> Result<()> {
        let shape = self.shape(loss);
        if shape.iter().product::<usize>() != 1 {
            return Err(TensorError::NonScalarLoss(shape.to_vec()));
        }
        let mut grads: Vec<Option<Vec<f64>>> = vec![None; loss.0 + 1];
        grads[loss.0] = Some(vec![1.0]);
        for idx in (0..=loss.0).rev() {
            let Some(g) = grads[idx].take() else { continue };
            let node = &self.nodes[idx];
            if !node.requires_grad {
                continue;
            }
            if let Op::Leaf = node.op {
                add_into(&mut self.leaf_grads[idx], &g);
                continue;
            }
            for (parent, contribution) in self.local_grads(idx, &g) {
                if self.nodes[parent.0].requires_grad {
                    add_into(&mut grads[parent.0], &contribution);
                }
            }
        }
        Ok(())
    }

    /// Vector-Jacobian products of node `idx` for each of its inputs.
    fn local_grads(&self, idx: usize, g: &[f64]) -> Vec<(Var, Vec<f64>)> {
        let node = &self.nodes[idx];
        let y = &node.value;
        let wants = |v: &Var| self.nodes[v.0].requires_grad;
        match &node.op {
            Op::Leaf => Vec::new(),
            Op::MatMul(a, b) => {
                let (m, k) = (self.shape(*a)[0], self.shape(*a)[1]);
                let n = self.shape(*b)[1];
                let (av, bv) = (self.value(*a), self.value(*b));
                let mut out = Vec::new();
                if wants(a) {
                    let mut ga = vec![0.0; m * k];
                    for i in 0..m {
                        let grow = &g[i * n..(i + 1) * n];
                        for p in 0..k {
                            let brow = &bv[p * n..(p + 1) * n];
                            ga[i * k + p] = grow.iter().zip(brow).map(|(x, y)| x * y).sum();
                        }
                    }
                    out.push((*a, ga));
                }
                if wants(b) {
                    let mut gb = vec![0.0; k * n];
                    for i in 0..m {
                        let grow = &g[i * n..(i + 1) * n];
                        for p in 0..k {
                            let x = av[i * k + p];
                            if x == 0.0 {
                                continue;
                            }
                            for (d, s) in gb[p * n..(p + 1) * n].iter_mut().zip(grow) {
                                *d += x * s;
                            }
                        }
                    }
                    out.push((*b, gb));
                }
                out
            }
            Op::Add(a, b) => vec![(*a, g.to_vec()), (*b, g.to_vec())],
            Op::AddBias(a, b) => {
                let n = self.value(*b).len();
                let mut gb = vec![0.0; n];
                for (i, x) in g.iter().enumerate() {
                    gb[i % n] += x;
                }
                vec![(*a, g.to_vec()), (*b, gb)]
            }
            Op::Sub(a, b) => vec![(*a, g.to_vec()), (*b, g.iter().map(|x| -x).collect())],
            Op::Mul(a, b) => {
                let (av, bv) = (self.value(*a), self.value(*b));
                vec![
                    (*a, g.iter().zip(bv).map(|(x, y)| x * y).collect()),
                    (*b, g.iter().zip(av).map(|(x, y)| x * y).collect()),
                ]
            }
            Op::MulColumn(a, b) => {
                let n = self.shape(*a)[1];
                let (av, col) = (self.value(*a), self.value(*b));
                let ga = g.iter().enumerate().map(|(i, x)| x * col[i / n]).collect();
                let mut gb = vec![0.0; col.len()];
                for (i, (x, v)) in g.iter().zip(av).enumerate() {
                    gb[i / n] += x * v;
                }
                vec![(*a, ga), (*b, gb)]
            }
            Op::Scale(a, f) => vec![(*a, g.iter().map(|x| x * f).collect())],
            Op::Concat { parts, axis } => {
                let (outer, total, inner) = split_axis(&node.shape, *axis).unwrap();
                let mut offset = 0;
                let mut out = Vec::with_capacity(parts.len());
                for p in parts {
                    let len = self.shape(*p)[*axis];
                    let mut gp = Vec::with_capacity(outer * len * inner);
                    for o in 0..outer {
                        let base = o * total * inner + offset * inner;
                        gp.extend_from_slice(&g[base..base + len * inner]);
                    }
                    offset += len;
                    out.push((*p, gp));
                }
                out
            }
            Op::Narrow { input, axis, start } => {
                let in_shape = self.shape(*input);
                let (outer, n, inner) = split_axis(in_shape, *axis).unwrap();
                let len = node.shape[*axis];
                let mut gi = vec![0.0; outer * n * inner];
                for o in 0..outer {
                    let dst = o * n * inner + start * inner;
                    let src = o * len * inner;
                    gi[dst..dst + len * inner].copy_from_slice(&g[src..src + len * inner]);
                }
                vec![(*input, gi)]
            }
            Op::Tanh(a) => vec![(*a, g.iter().zip(y).map(|(d, t)| d * (1.0 - t * t)).collect())],
            Op::Sigmoid(a) => vec![(*a, g.iter().zip(y).map(|(d, s)| d * s * (1.0 - s)).collect())],
            Op::Relu(a) => {
                let x = self.value(*a);
                vec![(*a, g.iter().zip(x).map(|(d, x)| if *x > 0.0 { *d } else { 0.0 }).collect())]
            }
            Op::LeakyRelu(a, slope) => {
                let x = self.value(*a);
                vec![(
                    *a,
                    g.iter()
                        .zip(x)
                        .map(|(d, x)| if *x > 0.0 { *d } else { d * slope })
                        .collect(),
                )]
            }
            Op::Softmax { input, axis } => {
                let (outer, n, inner) = split_axis(&node.shape, *axis).unwrap();
                let mut gi = vec![0.0; y.len()];
                for o in 0..outer {
                    for i in 0..inner {
                        let at = |k: usize| o * n * inner + k * inner + i;
                        let dot: f64 = (0..n).map(|k| y[at(k)] * g[at(k)]).sum();
                        for k in 0..n {
                            gi[at(k)] = y[at(k)] * (g[at(k)] - dot);
                        }
                    }
                }
                vec![(*input, gi)]
            }
            Op::Sum(a) => vec![(*a, vec![g[0]; self.value(*a).len()])],
            Op::Mean(a) => {
                let n = self.value(*a).len();
                vec![(*a, vec![g[0] / n as f64; n])]
            }
            Op::CrossEntropy { logits, labels, probs } => {
                let m = labels.len();
                let c = probs.len() / m;
                let scale = g[0] / m as f64;
                let mut gl: Vec<f64> = probs.iter().map(|p| p * scale).collect();
                for (r, &label) in labels.iter().enumerate() {
                    gl[r * c + label] -= scale;
                }
                vec![(*logits, gl)]
            }
        }
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
