use std::collections::{BTreeMap, BTreeSet};

use super::{Condition, SemanticForm, SemanticsError, Var};

/// Equivalence classes of referents under `=` conditions.
///
/// The representative of a class is its smallest member in natural order,
/// so `x2` represents `{x2, x4, x6}` and `x9` precedes `x10`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityClasses {
    parent: BTreeMap<Var, Var>,
}

impl IdentityClasses {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_form(form: &SemanticForm) -> Result<Self, SemanticsError> {
        let mut classes = Self::new();
        for c in &form.conditions {
            if let Condition::Equal(a, b) = c {
                classes.union(a, b)?;
            }
        }
        Ok(classes)
    }

    fn find_root(&self, v: &Var) -> Var {
        let mut cur = v;
        while let Some(p) = self.parent.get(cur) {
            if p == cur {
                break;
            }
            cur = p;
        }
        cur.clone()
    }

    /// Merge the classes of `a` and `b`. Both must have the same sort.
    pub fn union(&mut self, a: &Var, b: &Var) -> Result<(), SemanticsError> {
        if a.sort() != b.sort() {
            return Err(SemanticsError::SortClash(a.clone(), b.clone()));
        }
        let ra = self.find_root(a);
        let rb = self.find_root(b);
        self.parent.entry(ra.clone()).or_insert_with(|| ra.clone());
        self.parent.entry(rb.clone()).or_insert_with(|| rb.clone());
        if ra == rb {
            return Ok(());
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(drop, keep.clone());
        // Path compression over the whole map keeps `find` shallow.
        let keys: Vec<Var> = self.parent.keys().cloned().collect();
        for k in keys {
            let root = self.find_root(&k);
            self.parent.insert(k, root);
        }
        Ok(())
    }

    pub fn representative(&self, v: &Var) -> Var {
        self.find_root(v)
    }

    /// Members of every class with more than one element, representative first.
    pub fn classes(&self) -> Vec<Vec<Var>> {
        let mut groups: BTreeMap<Var, BTreeSet<Var>> = BTreeMap::new();
        for k in self.parent.keys() {
            groups
                .entry(self.find_root(k))
                .or_default()
                .insert(k.clone());
        }
        groups
            .into_values()
            .filter(|g| g.len() > 1)
            .map(|g| g.into_iter().collect())
            .collect()
    }

    pub fn class_of(&self, v: &Var) -> Vec<Var> {
        let root = self.find_root(v);
        let mut members: Vec<Var> = self
            .parent
            .keys()
            .filter(|k| self.find_root(k) == root)
            .cloned()
            .collect();
        if members.is_empty() {
            members.push(v.clone());
        }
        members
    }

    pub fn is_trivial(&self, v: &Var) -> bool {
        self.class_of(v).len() == 1
    }
}

/// Rewrite every non-equality condition onto class representatives.
/// Equalities are kept as written. Referents are left alone.
pub fn apply_identities(form: &SemanticForm) -> Result<SemanticForm, SemanticsError> {
    let classes = IdentityClasses::from_form(form)?;
    let rep = |v: &Var| classes.representative(v);
    let conditions = form
        .conditions
        .iter()
        .map(|c| {
            if c.is_equality() {
                c.clone()
            } else {
                c.map_vars(&rep)
            }
        })
        .collect();
    Ok(SemanticForm {
        referents: form.referents.clone(),
        conditions,
    })
}
