use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub qubits: Vec<usize>,
}

/// Named registers over `n_total` qubits. Qubit 0 is the most significant
/// bit of a basis index; within a register the first listed qubit carries the
/// most significant bit of the register value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    n_total: usize,
}

impl RegisterLayout {
    pub fn new(registers: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let n_total: usize = registers.iter().map(|(_, q)| q.len()).sum();
        let mut seen = vec![false; n_total];
        for (name, qubits) in &registers {
            for &q in qubits {
                if q >= n_total || seen[q] {
                    return Err(Error::InvalidLayout(format!(
                        "register {name} uses qubit {q} which is out of range or shared"
                    )));
                }
                seen[q] = true;
            }
        }
        for (i, (a, _)) in registers.iter().enumerate() {
            if registers[..i].iter().any(|(b, _)| a == b) {
                return Err(Error::InvalidLayout(format!("duplicate register name {a}")));
            }
        }
        Ok(Self {
            registers: registers
                .into_iter()
                .map(|(name, qubits)| Register { name, qubits })
                .collect(),
            n_total,
        })
    }

    /// Registers laid out back to back in the given order.
    pub fn sequential(spec: &[(&str, usize)]) -> Result<Self> {
        let mut next = 0;
        let regs = spec
            .iter()
            .map(|(name, n)| {
                let qubits = (next..next + n).collect();
                next += n;
                (name.to_string(), qubits)
            })
            .collect();
        Self::new(regs)
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        1 << self.n_total
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn has(&self, name: &str) -> bool {
        self.registers.iter().any(|r| r.name == name)
    }

    pub fn qubits(&self, name: &str) -> Result<&[usize]> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.qubits.as_slice())
            .ok_or_else(|| Error::InvalidLayout(format!("no register named {name}")))
    }

    /// Concatenated qubit lists of the named registers.
    pub fn qubits_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for name in names {
            out.extend_from_slice(self.qubits(name)?);
        }
        Ok(out)
    }

    pub fn concat(&self, other: &RegisterLayout) -> Result<RegisterLayout> {
        let shift = self.n_total;
        let regs = self
            .registers
            .iter()
            .map(|r| (r.name.clone(), r.qubits.clone()))
            .chain(
                other
                    .registers
                    .iter()
                    .map(|r| (r.name.clone(), r.qubits.iter().map(|q| q + shift).collect())),
            )
            .collect();
        RegisterLayout::new(regs)
    }

    /// Layout of the kept registers, renumbered densely in the given order,
    /// together with the original qubits in their new order.
    pub(crate) fn restrict(&self, keep: &[&str]) -> Result<(RegisterLayout, Vec<usize>)> {
        let mut regs = Vec::new();
        let mut old = Vec::new();
        for name in keep {
            let qs = self.qubits(name)?;
            let start = old.len();
            old.extend_from_slice(qs);
            regs.push((name.to_string(), (start..old.len()).collect()));
        }
        Ok((RegisterLayout::new(regs)?, old))
    }
}

/// Index bookkeeping for an operator acting on `targets` inside `n_total`
/// qubits: every basis index is `target[t] | rest[r]`.
pub(crate) struct Split {
    pub target: Vec<usize>,
    pub rest: Vec<usize>,
}

impl Split {
    pub fn new(n_total: usize, targets: &[usize]) -> Self {
        let bit = |q: usize| 1usize << (n_total - 1 - q);
        let others: Vec<usize> = (0..n_total).filter(|q| !targets.contains(q)).collect();
        Self {
            target: offsets(targets, bit),
            rest: offsets(&others, bit),
        }
    }
}

fn offsets(qubits: &[usize], bit: impl Fn(usize) -> usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|t| {
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| (t >> (k - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, q)| acc | bit(*q))
        })
        .collect()
}

/// Value of the sub-register `qubits` inside the basis index `index`.
pub(crate) fn extract(index: usize, n_total: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |acc, q| (acc << 1) | ((index >> (n_total - 1 - q)) & 1))
}
