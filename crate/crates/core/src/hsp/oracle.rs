use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, GroupElement, Subgroup};

/// Whether the oracle's circuit may be rewritten or only called.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Access {
    #[default]
    OpenCircuit,
    BlackBox,
}

/// Optional side information carried with an oracle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Annotations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    /// Generators of an intermediate subgroup `H <= K <= G`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_generators: Option<Vec<GroupElement>>,
    #[serde(default)]
    pub access: Access,
}

/// A hidden subgroup instance `f: G -> {0,1}^m` given by its full table,
/// together with the ground-truth hidden subgroup.
#[derive(Clone, Debug)]
pub struct OracleSpec {
    group: AbelianGroup,
    codomain_bits: usize,
    table: Vec<usize>,
    hidden: Subgroup,
    annotations: Annotations,
}

impl OracleSpec {
    /// Checks that `f(g) = f(g')` exactly when `g - g'` lies in `hidden`.
    pub fn new(
        group: AbelianGroup,
        codomain_bits: usize,
        table: Vec<usize>,
        hidden: Subgroup,
    ) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::OracleValidation(format!(
                "table has {} entries but |G| = {}",
                table.len(),
                group.order()
            )));
        }
        if codomain_bits >= usize::BITS as usize {
            return Err(Error::OracleValidation(format!(
                "{codomain_bits} codomain bits"
            )));
        }
        if let Some(v) = table.iter().find(|v| **v >> codomain_bits != 0) {
            return Err(Error::OracleValidation(format!(
                "value {v} does not fit in {codomain_bits} bits"
            )));
        }
        if hidden.parent() != &group {
            return Err(Error::OracleValidation(format!(
                "hidden subgroup lives in {}, not {group}",
                hidden.parent()
            )));
        }
        let mut value_of_coset: HashMap<GroupElement, usize> = HashMap::new();
        let mut coset_of_value: HashMap<usize, GroupElement> = HashMap::new();
        for (i, &v) in table.iter().enumerate() {
            let g = group.element_at(i);
            let rep = hidden.canonical_rep(&g);
            if let Some(&prev) = value_of_coset.get(&rep) {
                if prev != v {
                    return Err(Error::OracleValidation(format!(
                        "f is not constant on the coset {rep} + H: f({g}) = {v}, expected {prev}"
                    )));
                }
            } else {
                value_of_coset.insert(rep.clone(), v);
            }
            match coset_of_value.get(&v) {
                Some(other) if *other != rep => {
                    return Err(Error::OracleValidation(format!(
                        "value {v} is shared by the cosets {other} + H and {rep} + H"
                    )));
                }
                Some(_) => {}
                None => {
                    coset_of_value.insert(v, rep);
                }
            }
        }
        Ok(Self {
            group,
            codomain_bits,
            table,
            hidden,
            annotations: Annotations::default(),
        })
    }

    pub fn with_annotations(mut self, annotations: Annotations) -> Result<Self> {
        if let Some(gens) = &annotations.k_generators {
            for g in gens {
                if !self.group.contains(g) {
                    return Err(Error::OracleValidation(format!(
                        "K generator {g} is not in {}",
                        self.group
                    )));
                }
            }
        }
        self.annotations = annotations;
        Ok(self)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn codomain_bits(&self) -> usize {
        self.codomain_bits
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn hidden(&self) -> &Subgroup {
        &self.hidden
    }

    pub fn annotations(&self) -> &Annotations {
        &self.annotations
    }

    /// Qubits in the main register.
    pub fn n(&self) -> usize {
        self.group.num_qubits()
    }

    /// Qubits in the auxiliary register.
    pub fn m(&self) -> usize {
        self.codomain_bits
    }

    pub fn eval(&self, g: &GroupElement) -> usize {
        self.table[self.group.index_of(g)]
    }

    /// The annotated intermediate subgroup, if any.
    pub fn annotated_k(&self) -> Result<Option<Subgroup>> {
        self.annotations
            .k_generators
            .as_ref()
            .map(|gens| Subgroup::span(&self.group, gens))
            .transpose()
    }

    pub fn to_file(&self) -> OracleFile {
        OracleFile {
            group: self.group.clone(),
            codomain_bits: self.codomain_bits,
            table: self.table.clone(),
            hidden_generators: self.hidden.generators().to_vec(),
            annotations: self.annotations.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: OracleFile = serde_json::from_str(text)
            .map_err(|e| Error::OracleValidation(format!("malformed oracle file: {e}")))?;
        file.into_spec()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }
}

/// On-disk form of an oracle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleFile {
    pub group: AbelianGroup,
    pub codomain_bits: usize,
    pub table: Vec<usize>,
    pub hidden_generators: Vec<GroupElement>,
    #[serde(default)]
    pub annotations: Annotations,
}

impl OracleFile {
    pub fn into_spec(self) -> Result<OracleSpec> {
        let hidden = Subgroup::span(&self.group, &self.hidden_generators)
            .map_err(|e| Error::OracleValidation(format!("hidden generators: {e}")))?;
        OracleSpec::new(self.group, self.codomain_bits, self.table, hidden)?
            .with_annotations(self.annotations)
    }
}
