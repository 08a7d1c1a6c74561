use serde::{Deserialize, Serialize};

use crate::awgn::LLR_SATURATION;
use crate::error::{Error, Result};

pub const MAX_MEMORY: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `memory` tail steps return the encoder to the zero state.
    #[default]
    Terminated,
    Unterminated,
}

/// Rate-1/2 convolutional code in octal generator notation.
///
/// Each generator is read as a `memory + 1` bit word whose most significant
/// bit is the coefficient of `D⁰`, so `5 = 101` taps the current register
/// input and `D²`. With a feedback polynomial the register input is
/// `w = u ⊕ (feedback taps on past w)`, and the outputs tap `w`; a generator
/// equal to the feedback polynomial then yields the systematic bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OctalSpec", into = "OctalSpec")]
pub struct ConvCodeSpec {
    feedforward: Vec<u32>,
    feedback: Option<u32>,
    termination: Termination,
    memory: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OctalSpec {
    feedforward: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    feedback: Option<String>,
    #[serde(default)]
    termination: Termination,
}

fn parse_octal(s: &str) -> Result<u32> {
    let t = s.trim();
    let t = t.strip_prefix("0o").unwrap_or(t);
    u32::from_str_radix(t, 8)
        .map_err(|_| Error::InvalidCode(format!("`{s}` is not an octal polynomial")))
}

fn bit_len(g: u32) -> u32 {
    32 - g.leading_zeros()
}

impl ConvCodeSpec {
    pub fn new(
        feedforward: Vec<u32>,
        feedback: Option<u32>,
        termination: Termination,
    ) -> Result<Self> {
        if feedforward.len() != 2 {
            return Err(Error::InvalidCode(format!(
                "rate 1/2 needs two feedforward generators, got {}",
                feedforward.len()
            )));
        }
        if feedforward.iter().chain(feedback.iter()).any(|&g| g == 0) {
            return Err(Error::InvalidCode("generators must be nonzero".into()));
        }
        let memory = feedforward
            .iter()
            .chain(feedback.iter())
            .map(|&g| bit_len(g) - 1)
            .max()
            .unwrap_or(0);
        if memory > MAX_MEMORY {
            return Err(Error::InvalidCode(format!(
                "memory {memory} exceeds {MAX_MEMORY}"
            )));
        }
        if let Some(fb) = feedback {
            if fb >> memory & 1 == 0 {
                return Err(Error::InvalidCode(
                    "feedback polynomial needs a D^0 term at the code's constraint length".into(),
                ));
            }
        }
        Ok(ConvCodeSpec {
            feedforward,
            feedback,
            termination,
            memory,
        })
    }

    /// `from_octal(&["5", "7"], None, Termination::Terminated)`.
    pub fn from_octal(
        feedforward: &[&str],
        feedback: Option<&str>,
        termination: Termination,
    ) -> Result<Self> {
        let ff = feedforward
            .iter()
            .map(|s| parse_octal(s))
            .collect::<Result<Vec<_>>>()?;
        let fb = feedback.map(parse_octal).transpose()?;
        ConvCodeSpec::new(ff, fb, termination)
    }

    pub fn memory(&self) -> u32 {
        self.memory
    }

    pub fn feedforward(&self) -> &[u32] {
        &self.feedforward
    }

    pub fn feedback(&self) -> Option<u32> {
        self.feedback
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    /// Tail steps appended to a block.
    pub fn tail_len(&self) -> usize {
        match self.termination {
            Termination::Terminated => self.memory as usize,
            Termination::Unterminated => 0,
        }
    }

    /// Information rate of a block of `k` info bits, tail included.
    pub fn block_rate(&self, k: usize) -> f64 {
        k as f64 / (self.feedforward.len() * (k + self.tail_len())) as f64
    }

    pub fn label(&self) -> String {
        let mut s = self
            .feedforward
            .iter()
            .map(|g| format!("{g:o}"))
            .collect::<Vec<_>>()
            .join(",");
        if let Some(fb) = self.feedback {
            s = format!("{s}/{fb:o}");
        }
        format!("({s})_8")
    }
}

impl TryFrom<OctalSpec> for ConvCodeSpec {
    type Error = Error;
    fn try_from(o: OctalSpec) -> Result<Self> {
        let ff: Vec<&str> = o.feedforward.iter().map(String::as_str).collect();
        ConvCodeSpec::from_octal(&ff, o.feedback.as_deref(), o.termination)
    }
}

impl From<ConvCodeSpec> for OctalSpec {
    fn from(c: ConvCodeSpec) -> Self {
        OctalSpec {
            feedforward: c.feedforward.iter().map(|g| format!("{g:o}")).collect(),
            feedback: c.feedback.map(|g| format!("{g:o}")),
            termination: c.termination,
        }
    }
}

/// Extrinsic LLRs of one decoded block.
#[derive(Debug, Clone, PartialEq)]
pub struct AppOutput {
    pub info_ext: Vec<f64>,
    pub coded_ext: Vec<f64>,
}

/// State-transition tables of a [`ConvCodeSpec`].
///
/// The state holds the last `memory` register inputs, most recent in the
/// most significant bit. Bits map to symbols as `0 → +1`, `1 → −1`, and LLRs
/// are `ln P(+1)/P(−1)`.
#[derive(Debug, Clone)]
pub struct Trellis {
    n_out: usize,
    tail: usize,
    terminated: bool,
    next: Vec<[usize; 2]>,
    out: Vec<[u32; 2]>,
    tail_input: Vec<u8>,
}

fn parity(v: u32) -> u32 {
    v.count_ones() & 1
}

pub(crate) fn max_star(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}

pub(crate) fn clamp_llr(l: f64) -> f64 {
    l.clamp(-LLR_SATURATION, LLR_SATURATION)
}

impl Trellis {
    pub fn new(code: &ConvCodeSpec) -> Trellis {
        let m = code.memory;
        let states = 1usize << m;
        let fb = code.feedback.unwrap_or(0);
        let mut next = Vec::with_capacity(states);
        let mut out = Vec::with_capacity(states);
        let mut tail_input = Vec::with_capacity(states);
        for s in 0..states as u32 {
            let fbit = parity(fb & s);
            tail_input.push(fbit as u8);
            let mut nx = [0; 2];
            let mut ob = [0; 2];
            for u in 0..2u32 {
                let w = u ^ fbit;
                let window = (w << m) | s;
                for (j, &g) in code.feedforward.iter().enumerate() {
                    ob[u as usize] |= parity(g & window) << j;
                }
                nx[u as usize] = (window >> 1) as usize;
            }
            next.push(nx);
            out.push(ob);
        }
        Trellis {
            n_out: code.feedforward.len(),
            tail: code.tail_len(),
            terminated: code.termination == Termination::Terminated,
            next,
            out,
            tail_input,
        }
    }

    pub fn states(&self) -> usize {
        self.next.len()
    }

    pub fn coded_len(&self, k: usize) -> usize {
        (k + self.tail) * self.n_out
    }

    /// Coded bits for `info` (values 0/1), tail included.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        let mut s = 0usize;
        let mut coded = Vec::with_capacity(self.coded_len(info.len()));
        let inputs = info
            .iter()
            .map(|&b| Some(b))
            .chain(std::iter::repeat_n(None, self.tail));
        for b in inputs {
            let u = match b {
                Some(b) => (b & 1) as usize,
                None => self.tail_input[s] as usize,
            };
            let o = self.out[s][u];
            for j in 0..self.n_out {
                coded.push((o >> j & 1) as u8);
            }
            s = self.next[s][u];
        }
        coded
    }

    fn inputs_at(&self, t: usize, k: usize, s: usize) -> std::ops::Range<usize> {
        if t < k {
            0..2
        } else {
            let u = self.tail_input[s] as usize;
            u..u + 1
        }
    }

    /// Log-domain forward-backward APP decoding with exact max-star.
    ///
    /// `info_ap` has one LLR per info bit, `coded_ap` one per coded bit
    /// (tail included). Inputs are clamped to `±LLR_SATURATION`.
    pub fn app(&self, info_ap: &[f64], coded_ap: &[f64]) -> Result<AppOutput> {
        let k = info_ap.len();
        let n = self.n_out;
        if coded_ap.len() != self.coded_len(k) {
            return Err(Error::LengthMismatch {
                what: "coded a-priori LLRs",
                expected: self.coded_len(k),
                actual: coded_ap.len(),
            });
        }
        if info_ap.iter().chain(coded_ap).any(|l| l.is_nan()) {
            return Err(Error::domain("NaN LLR input"));
        }
        let la_info: Vec<f64> = info_ap.iter().map(|&l| 0.5 * clamp_llr(l)).collect();
        let la_coded: Vec<f64> = coded_ap.iter().map(|&l| 0.5 * clamp_llr(l)).collect();
        let steps = k + self.tail;
        let ns = self.states();
        let patterns = 1usize << n;

        // Half-LLR metric of every output pattern at every step.
        let mut cm = vec![0.0; steps * patterns];
        for t in 0..steps {
            for p in 0..patterns {
                cm[t * patterns + p] = (0..n)
                    .map(|j| {
                        let x = if p >> j & 1 == 0 { 1.0 } else { -1.0 };
                        x * la_coded[t * n + j]
                    })
                    .sum();
            }
        }
        let branch = |t: usize, s: usize, u: usize| -> f64 {
            let info = if t < k {
                if u == 0 {
                    la_info[t]
                } else {
                    -la_info[t]
                }
            } else {
                0.0
            };
            info + cm[t * patterns + self.out[s][u] as usize]
        };

        let ninf = f64::NEG_INFINITY;
        let mut alpha = vec![ninf; (steps + 1) * ns];
        alpha[0] = 0.0;
        for t in 0..steps {
            let (cur, nxt) = alpha.split_at_mut((t + 1) * ns);
            let cur = &cur[t * ns..];
            let nxt = &mut nxt[..ns];
            for (s, &a) in cur.iter().enumerate() {
                if a == ninf {
                    continue;
                }
                for u in self.inputs_at(t, k, s) {
                    let s2 = self.next[s][u];
                    nxt[s2] = max_star(nxt[s2], a + branch(t, s, u));
                }
            }
            let top = nxt.iter().cloned().fold(ninf, f64::max);
            if top.is_finite() {
                nxt.iter_mut().for_each(|a| *a -= top);
            }
        }

        let mut beta = vec![ninf; (steps + 1) * ns];
        if self.terminated {
            beta[steps * ns] = 0.0;
        } else {
            beta[steps * ns..].iter_mut().for_each(|b| *b = 0.0);
        }
        for t in (0..steps).rev() {
            let (cur, nxt) = beta.split_at_mut((t + 1) * ns);
            let cur = &mut cur[t * ns..];
            for s in 0..ns {
                let mut acc = ninf;
                for u in self.inputs_at(t, k, s) {
                    let b = nxt[self.next[s][u]];
                    if b != ninf {
                        acc = max_star(acc, branch(t, s, u) + b);
                    }
                }
                cur[s] = acc;
            }
            let top = cur.iter().cloned().fold(ninf, f64::max);
            if top.is_finite() {
                cur.iter_mut().for_each(|b| *b -= top);
            }
        }

        let mut info_ext = vec![0.0; k];
        let mut coded_ext = vec![0.0; steps * n];
        for t in 0..steps {
            let a = &alpha[t * ns..(t + 1) * ns];
            let b = &beta[(t + 1) * ns..(t + 2) * ns];
            let mut info_acc = [ninf; 2];
            let mut coded_acc = vec![[ninf; 2]; n];
            for s in 0..ns {
                if a[s] == ninf {
                    continue;
                }
                for u in self.inputs_at(t, k, s) {
                    let bb = b[self.next[s][u]];
                    if bb == ninf {
                        continue;
                    }
                    let g = branch(t, s, u);
                    let o = self.out[s][u];
                    if t < k {
                        // Drop this bit's own a-priori term.
                        let own = if u == 0 { la_info[t] } else { -la_info[t] };
                        info_acc[u] = max_star(info_acc[u], a[s] + (g - own) + bb);
                    }
                    for (j, acc) in coded_acc.iter_mut().enumerate() {
                        let c = (o >> j & 1) as usize;
                        let own = if c == 0 {
                            la_coded[t * n + j]
                        } else {
                            -la_coded[t * n + j]
                        };
                        acc[c] = max_star(acc[c], a[s] + (g - own) + bb);
                    }
                }
            }
            if t < k {
                info_ext[t] = llr_from(info_acc);
            }
            for (j, acc) in coded_acc.iter().enumerate() {
                coded_ext[t * n + j] = llr_from(*acc);
            }
        }
        Ok(AppOutput {
            info_ext,
            coded_ext,
        })
    }
}

fn llr_from(acc: [f64; 2]) -> f64 {
    match (acc[0] == f64::NEG_INFINITY, acc[1] == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, true) => f64::INFINITY,
        (true, false) => f64::NEG_INFINITY,
        _ => acc[0] - acc[1],
    }
}
