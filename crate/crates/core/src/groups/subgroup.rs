use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::{AbelianGroup, GroupElement};
use crate::error::{Error, Result};

/// A subgroup held as its fully enumerated, sorted element list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: AbelianGroup,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Subgroup {
    /// Smallest subgroup of `parent` containing `generators`.
    pub fn span(parent: &AbelianGroup, generators: &[GroupElement]) -> Result<Self> {
        for g in generators {
            parent.check(g)?;
        }
        let mut member = vec![false; parent.order()];
        member[0] = true;
        let mut stack = vec![parent.identity()];
        while let Some(x) = stack.pop() {
            for g in generators {
                let y = parent.add_unchecked(&x, g);
                let idx = parent.index_of(&y);
                if !member[idx] {
                    member[idx] = true;
                    stack.push(y);
                }
            }
        }
        let elements = member
            .iter()
            .enumerate()
            .filter(|(_, m)| **m)
            .map(|(i, _)| parent.element_at(i))
            .collect();
        Ok(Self {
            parent: parent.clone(),
            generators: generators.to_vec(),
            elements,
        })
    }

    /// Builds a subgroup from an explicit element set, checking closure.
    pub fn from_elements(parent: &AbelianGroup, elements: &[GroupElement]) -> Result<Self> {
        let mut elements = elements.to_vec();
        for e in &elements {
            parent.check(e)?;
        }
        elements.sort();
        elements.dedup();
        if elements.binary_search(&parent.identity()).is_err() {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for a in &elements {
            for b in &elements {
                let c = parent.add_unchecked(a, b);
                if elements.binary_search(&c).is_err() {
                    return Err(Error::NotASubgroup(format!(
                        "{a} + {b} = {c} escapes the set"
                    )));
                }
            }
        }
        let generators = greedy_generators(parent, &elements);
        Ok(Self {
            parent: parent.clone(),
            generators,
            elements,
        })
    }

    pub fn trivial(parent: &AbelianGroup) -> Self {
        Self {
            parent: parent.clone(),
            generators: Vec::new(),
            elements: vec![parent.identity()],
        }
    }

    pub fn whole(parent: &AbelianGroup) -> Self {
        let elements: Vec<_> = parent.elements().collect();
        let generators = greedy_generators(parent, &elements);
        Self {
            parent: parent.clone(),
            generators,
            elements,
        }
    }

    pub fn parent(&self) -> &AbelianGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `|G| / |H|`.
    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_parent(other)?;
        let elements: Vec<_> = self
            .elements
            .iter()
            .filter(|e| other.contains(e))
            .cloned()
            .collect();
        Subgroup::from_elements(&self.parent, &elements)
    }

    fn same_parent(&self, other: &Subgroup) -> Result<()> {
        if self.parent != other.parent {
            return Err(Error::InvalidGroup(format!(
                "subgroups live in different groups ({} vs {})",
                self.parent, other.parent
            )));
        }
        Ok(())
    }

    /// Splits `g = representative + k` with `k` in this subgroup and the
    /// representative the lexicographically smallest element of `g + K`.
    pub fn coset_decompose(&self, g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        self.parent.check(g)?;
        let rep = self.canonical_rep(g);
        let k = self
            .parent
            .add_unchecked(g, &self.parent.neg_unchecked(&rep));
        Ok((rep, k))
    }

    pub(crate) fn canonical_rep(&self, g: &GroupElement) -> GroupElement {
        self.elements
            .iter()
            .map(|k| self.parent.add_unchecked(g, k))
            .min()
            .expect("subgroups are nonempty")
    }

    /// Canonical coset representatives, sorted. The subgroup itself is coset 0.
    pub fn coset_representatives(&self) -> Vec<GroupElement> {
        let mut reps: Vec<_> = self
            .parent
            .elements()
            .filter(|g| self.canonical_rep(g) == *g)
            .collect();
        reps.sort();
        reps
    }

    /// Every subgroup of this subgroup, sorted by order and then element list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let key = |s: &Subgroup| -> Vec<usize> {
            s.elements.iter().map(|e| self.parent.index_of(e)).collect()
        };
        let trivial = Subgroup::trivial(&self.parent);
        let mut seen = HashSet::from([key(&trivial)]);
        let mut out = vec![trivial.clone()];
        let mut queue = VecDeque::from([trivial]);
        while let Some(s) = queue.pop_front() {
            for e in &self.elements {
                if s.contains(e) {
                    continue;
                }
                let mut gens = s.generators.clone();
                gens.push(e.clone());
                let t = Subgroup::span(&self.parent, &gens).expect("members of the parent");
                if seen.insert(key(&t)) {
                    out.push(t.clone());
                    queue.push_back(t);
                }
            }
        }
        out.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        out
    }

    /// Decomposition of this subgroup into cyclic factors with explicit
    /// generators, giving it its own coordinates and characters.
    pub fn basis(&self) -> SubgroupBasis {
        SubgroupBasis::new(self)
    }
}

fn greedy_generators(parent: &AbelianGroup, elements: &[GroupElement]) -> Vec<GroupElement> {
    let mut by_order: Vec<_> = elements.to_vec();
    by_order.sort_by(|a, b| parent.order_of(b).cmp(&parent.order_of(a)).then(a.cmp(b)));
    let mut gens = Vec::new();
    let mut covered = Subgroup::trivial(parent);
    for e in by_order {
        if covered.order() == elements.len() {
            break;
        }
        if !covered.contains(&e) {
            gens.push(e);
            covered = Subgroup::span(parent, &gens).expect("members of the parent");
        }
    }
    gens
}

/// `H^perp = { g : chi_g(h) = 1 for all h in H }`.
pub fn h_perp(group: &AbelianGroup, h: &Subgroup) -> Result<Subgroup> {
    if h.parent() != group {
        return Err(Error::InvalidGroup(format!(
            "subgroup of {} used with {group}",
            h.parent()
        )));
    }
    let elements: Vec<_> = group
        .elements()
        .filter(|g| h.elements().iter().all(|x| group.chi_is_trivial(g, x)))
        .collect();
    Subgroup::from_elements(group, &elements)
}

/// Kernel of the character labelled by `g`, `{ h : chi_h(g) = 1 }`.
pub fn kernel(group: &AbelianGroup, g: &GroupElement) -> Result<Subgroup> {
    group.check(g)?;
    let elements: Vec<_> = group
        .elements()
        .filter(|h| group.chi_is_trivial(h, g))
        .collect();
    Subgroup::from_elements(group, &elements)
}

/// Intersection of the character kernels of all samples. An empty sample
/// list imposes no constraint and yields the whole group.
pub fn reconstruct_subgroup(group: &AbelianGroup, samples: &[GroupElement]) -> Result<Subgroup> {
    for s in samples {
        group.check(s)?;
    }
    let elements: Vec<_> = group
        .elements()
        .filter(|h| samples.iter().all(|s| group.chi_is_trivial(h, s)))
        .collect();
    Subgroup::from_elements(group, &elements)
}

/// A subgroup `K` together with an isomorphism `K ~ Z/b_1 x ... x Z/b_r`
/// given by cyclic generators.
#[derive(Clone, Debug)]
pub struct SubgroupBasis {
    subgroup: Subgroup,
    generators: Vec<GroupElement>,
    abstract_group: AbelianGroup,
    decode_table: Vec<usize>,
    encode_table: HashMap<usize, usize>,
}

impl SubgroupBasis {
    fn new(k: &Subgroup) -> Self {
        let parent = k.parent();
        let (generators, orders): (Vec<_>, Vec<_>) = if k.is_whole() {
            // Keep the parent's own coordinates so that K = G is the identity map.
            parent
                .factors()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let mut c = vec![0; parent.factors().len()];
                    if *a > 1 {
                        c[i] = 1;
                    }
                    (GroupElement(c), *a)
                })
                .unzip()
        } else {
            let mut parts = cyclic_decomposition(k);
            parts.sort_by_key(|(_, ord)| *ord);
            parts.into_iter().unzip()
        };
        let abstract_group = if orders.is_empty() {
            AbelianGroup::trivial()
        } else {
            AbelianGroup::new(orders).expect("orders of a 2-group decomposition")
        };
        let decode_table: Vec<usize> = abstract_group
            .elements()
            .map(|a| {
                let mut acc = parent.identity();
                for (c, gen) in a.coords().iter().zip(&generators) {
                    let term = parent.scale(gen, *c).expect("generator in parent");
                    acc = parent.add_unchecked(&acc, &term);
                }
                parent.index_of(&acc)
            })
            .collect();
        let encode_table: HashMap<usize, usize> = decode_table
            .iter()
            .enumerate()
            .map(|(a, p)| (*p, a))
            .collect();
        debug_assert_eq!(encode_table.len(), k.order());
        Self {
            subgroup: k.clone(),
            generators,
            abstract_group,
            decode_table,
            encode_table,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn abstract_group(&self) -> &AbelianGroup {
        &self.abstract_group
    }

    /// Abstract index of the parent element with index `parent_index`.
    pub fn encode_index(&self, parent_index: usize) -> Option<usize> {
        self.encode_table.get(&parent_index).copied()
    }

    pub fn decode_index(&self, abstract_index: usize) -> usize {
        self.decode_table[abstract_index]
    }

    pub fn encode(&self, k: &GroupElement) -> Result<GroupElement> {
        let parent = self.subgroup.parent();
        parent.check(k)?;
        self.encode_index(parent.index_of(k))
            .map(|i| self.abstract_group.element_at(i))
            .ok_or_else(|| Error::GroupMismatch {
                element: k.to_string(),
                group: format!("subgroup {}", self.subgroup),
            })
    }

    pub fn decode(&self, a: &GroupElement) -> Result<GroupElement> {
        self.abstract_group.check(a)?;
        let parent = self.subgroup.parent();
        Ok(parent.element_at(self.decode_index(self.abstract_group.index_of(a))))
    }

    /// Expresses a subgroup `H <= K` in the abstract coordinates of `K`.
    pub fn pull_back(&self, h: &Subgroup) -> Result<Subgroup> {
        if !h.is_subgroup_of(&self.subgroup) {
            return Err(Error::NotASubgroup(format!(
                "{h} is not contained in {}",
                self.subgroup
            )));
        }
        let elements = h
            .elements()
            .iter()
            .map(|e| self.encode(e))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::from_elements(&self.abstract_group, &elements)
    }

    /// Maps a subgroup of the abstract group back into the parent.
    pub fn push_forward(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.parent() != &self.abstract_group {
            return Err(Error::InvalidGroup("subgroup of a different group".into()));
        }
        let elements = h
            .elements()
            .iter()
            .map(|e| self.decode(e))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::from_elements(self.subgroup.parent(), &elements)
    }
}

/// For a 2-group, a cyclic subgroup of maximal order is a direct summand, so
/// split it off and recurse on a complement.
fn cyclic_decomposition(k: &Subgroup) -> Vec<(GroupElement, u64)> {
    if k.order() == 1 {
        return Vec::new();
    }
    let parent = k.parent();
    let x = k
        .elements()
        .iter()
        .max_by(|a, b| parent.order_of(a).cmp(&parent.order_of(b)).then(b.cmp(a)))
        .cloned()
        .expect("nonempty");
    let ord = parent.order_of(&x);
    let cyclic = Subgroup::span(parent, std::slice::from_ref(&x)).expect("x in parent");
    let target = k.order() / cyclic.order();
    let complement = k
        .subgroups()
        .into_iter()
        .find(|c| {
            c.order() == target && c.elements().iter().filter(|e| cyclic.contains(e)).count() == 1
        })
        .expect("maximal cyclic subgroup of a finite abelian p-group has a complement");
    let mut parts = cyclic_decomposition(&complement);
    parts.push((x, ord));
    parts
}
