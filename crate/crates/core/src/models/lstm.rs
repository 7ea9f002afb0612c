use std::collections::HashMap;

use desc_autograd::{Tape, Tensor, Var};

use crate::error::Result;

/// One LSTM direction. Parameters live in the model's tensor map under
/// `{prefix}.w_{gate}` (`[input_dim, hidden_dim]`), `{prefix}.u_{gate}`
/// (`[hidden_dim, hidden_dim]`) and `{prefix}.b_{gate}` (`[hidden_dim]`) for
/// the forget, input, output and candidate gates.
#[derive(Debug, Clone)]
pub struct LstmCell {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub prefix: String,
}

pub(crate) const GATES: [&str; 4] = ["f", "i", "o", "c"];

impl LstmCell {
    pub fn new(prefix: impl Into<String>, input_dim: usize, hidden_dim: usize) -> Self {
        Self {
            input_dim,
            hidden_dim,
            prefix: prefix.into(),
        }
    }

    /// `(name, shape)` of every parameter, gate by gate.
    pub fn param_shapes(&self) -> Vec<(String, Vec<usize>)> {
        let mut out = Vec::with_capacity(12);
        for g in GATES {
            out.push((format!("{}.w_{g}", self.prefix), vec![self.input_dim, self.hidden_dim]));
            out.push((format!("{}.u_{g}", self.prefix), vec![self.hidden_dim, self.hidden_dim]));
            out.push((format!("{}.b_{g}", self.prefix), vec![self.hidden_dim]));
        }
        out
    }

    fn gate(
        &self,
        tape: &mut Tape,
        vars: &HashMap<String, Var>,
        gate: &str,
        x: Var,
        h: Var,
    ) -> Result<Var> {
        let w = vars[&format!("{}.w_{gate}", self.prefix)];
        let u = vars[&format!("{}.u_{gate}", self.prefix)];
        let b = vars[&format!("{}.b_{gate}", self.prefix)];
        let xw = tape.matmul(x, w)?;
        let hu = tape.matmul(h, u)?;
        let s = tape.add(xw, hu)?;
        Ok(tape.add(s, b)?)
    }

    /// One step: returns the new `(h, c)`.
    fn step(&self, tape: &mut Tape, vars: &HashMap<String, Var>, x: Var, h: Var, c: Var) -> Result<(Var, Var)> {
        let f = self.gate(tape, vars, "f", x, h)?;
        let f = tape.sigmoid(f);
        let i = self.gate(tape, vars, "i", x, h)?;
        let i = tape.sigmoid(i);
        let o = self.gate(tape, vars, "o", x, h)?;
        let o = tape.sigmoid(o);
        let g = self.gate(tape, vars, "c", x, h)?;
        let g = tape.tanh(g);
        let fc = tape.mul(f, c)?;
        let ig = tape.mul(i, g)?;
        let c_new = tape.add(fc, ig)?;
        let tc = tape.tanh(c_new);
        let h_new = tape.mul(o, tc)?;
        Ok((h_new, c_new))
    }

    /// Runs the cell over `inputs` (each `[batch, input_dim]`), forwards or
    /// backwards in time. Steps whose mask is off carry the previous state
    /// through unchanged. Returns the hidden state at every position, indexed
    /// by position regardless of direction.
    pub fn run(
        &self,
        tape: &mut Tape,
        vars: &HashMap<String, Var>,
        inputs: &[Var],
        mask: &StepMask,
        reverse: bool,
    ) -> Result<Vec<Var>> {
        let batch = mask.batch;
        let zeros = Tensor::zeros(&[batch, self.hidden_dim]);
        let mut h = tape.constant(&zeros);
        let mut c = tape.constant(&zeros);
        let mut outputs = vec![h; inputs.len()];
        let order: Vec<usize> = if reverse {
            (0..inputs.len()).rev().collect()
        } else {
            (0..inputs.len()).collect()
        };
        for t in order {
            let (h_new, c_new) = self.step(tape, vars, inputs[t], h, c)?;
            if mask.all_on(t) {
                h = h_new;
                c = c_new;
            } else {
                let (on, off) = mask.columns(tape, t);
                h = blend(tape, h_new, h, on, off)?;
                c = blend(tape, c_new, c, on, off)?;
            }
            outputs[t] = h;
        }
        Ok(outputs)
    }
}

/// `on * new + off * old` with `on`/`off` complementary 0/1 columns.
fn blend(tape: &mut Tape, new: Var, old: Var, on: Var, off: Var) -> Result<Var> {
    let a = tape.mul(new, on)?;
    let b = tape.mul(old, off)?;
    Ok(tape.add(a, b)?)
}

/// Per-timestep validity for a pre-padded batch.
#[derive(Debug, Clone)]
pub struct StepMask {
    pub batch: usize,
    pub steps: usize,
    /// `valid[b][t]`.
    pub valid: Vec<Vec<bool>>,
}

impl StepMask {
    pub fn all_on(&self, t: usize) -> bool {
        self.valid.iter().all(|row| row[t])
    }

    fn columns(&self, tape: &mut Tape, t: usize) -> (Var, Var) {
        let on: Vec<f64> = self.valid.iter().map(|row| if row[t] { 1.0 } else { 0.0 }).collect();
        let off: Vec<f64> = on.iter().map(|v| 1.0 - v).collect();
        let on = tape.constant(&Tensor::matrix(self.batch, 1, on).unwrap());
        let off = tape.constant(&Tensor::matrix(self.batch, 1, off).unwrap());
        (on, off)
    }

    /// Row-major `[batch, steps]` flags.
    pub fn flat(&self) -> Vec<bool> {
        self.valid.iter().flatten().copied().collect()
    }
}
