//! Slot-expanded adjacency matrix over a concept network.
//!
//! Each column is a (target, label) pair, so `drink` reached through slot-1
//! and `drink` reached through slot-2 are different dimensions. Rows are
//! concepts; a row read out of the matrix is that concept's vector.

mod cluster;

pub use cluster::{agglomerative_order, Dendrogram, Merge};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{ConceptKey, ConceptKind, ConceptNetwork, EdgeLabel};
use crate::numfmt::format_sig;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpandedColumn {
    pub target: ConceptKey,
    pub label: EdgeLabel,
}

impl fmt::Display for ExpandedColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊕{}", self.target.name, self.label)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConceptVector(Vec<f64>);

impl ConceptVector {
    pub fn new(values: Vec<f64>) -> Self {
        ConceptVector(values)
    }

    pub fn zeros(dim: usize) -> Self {
        ConceptVector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("{0} is not a row of the matrix")]
    UnknownConcept(ConceptKey),
    #[error("category {0} has no members")]
    EmptyCategory(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConceptMatrix {
    rows: Vec<ConceptKey>,
    columns: Vec<ExpandedColumn>,
    /// Row-major, `rows.len() * columns.len()`.
    data: Vec<f64>,
    row_index: HashMap<ConceptKey, usize>,
}

/// Snapshot of `net`. Rows sorted by kind then name; one column per
/// (target, label) pair that carries a nonzero weight anywhere.
pub fn build_matrix(net: &ConceptNetwork) -> ConceptMatrix {
    let rows: Vec<ConceptKey> = net.sorted_nodes().into_iter().map(|n| n.key()).collect();
    let row_index: HashMap<ConceptKey, usize> = rows
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();

    let mut columns: Vec<ExpandedColumn> = net
        .edges()
        .filter(|e| e.weight > 0.0)
        .map(|e| ExpandedColumn {
            target: net.node(e.target).expect("edge endpoint exists").key(),
            label: e.label,
        })
        .collect();
    columns.sort();
    columns.dedup();
    let col_index: HashMap<&ExpandedColumn, usize> =
        columns.iter().enumerate().map(|(i, c)| (c, i)).collect();

    let width = columns.len();
    let mut data = vec![0.0; rows.len() * width];
    for e in net.edges().filter(|e| e.weight > 0.0) {
        let src = net.node(e.source).expect("edge endpoint exists").key();
        let col = ExpandedColumn {
            target: net.node(e.target).expect("edge endpoint exists").key(),
            label: e.label,
        };
        data[row_index[&src] * width + col_index[&col]] = e.weight;
    }
    ConceptMatrix {
        rows,
        columns,
        data,
        row_index,
    }
}

impl ConceptMatrix {
    pub fn rows(&self) -> &[ConceptKey] {
        &self.rows
    }

    pub fn columns(&self) -> &[ExpandedColumn] {
        &self.columns
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    pub fn row_of(&self, key: &ConceptKey) -> Option<usize> {
        self.row_index.get(key).copied()
    }

    pub fn column_of(&self, target: &ConceptKey, label: EdgeLabel) -> Option<usize> {
        self.columns
            .binary_search_by(|c| (&c.target, c.label).cmp(&(target, label)))
            .ok()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.columns.len() + col]
    }

    /// Entry for a concept and (target, label); 0.0 for absent rows or columns.
    pub fn entry(&self, row: &ConceptKey, target: &ConceptKey, label: EdgeLabel) -> f64 {
        match (self.row_of(row), self.column_of(target, label)) {
            (Some(r), Some(c)) => self.get(r, c),
            _ => 0.0,
        }
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let w = self.columns.len();
        &self.data[row * w..(row + 1) * w]
    }

    /// The concept's row, copied.
    pub fn concept_vector(&self, key: &ConceptKey) -> Result<ConceptVector, MatrixError> {
        let r = self
            .row_of(key)
            .ok_or_else(|| MatrixError::UnknownConcept(key.clone()))?;
        Ok(ConceptVector(self.row(r).to_vec()))
    }

    /// Component-wise mean of the members' rows.
    pub fn category_vector(
        &self,
        category: &str,
        members: &[ConceptKey],
    ) -> Result<ConceptVector, MatrixError> {
        if members.is_empty() {
            return Err(MatrixError::EmptyCategory(category.to_string()));
        }
        let mut acc = vec![0.0; self.columns.len()];
        for m in members {
            let r = self
                .row_of(m)
                .ok_or_else(|| MatrixError::UnknownConcept(m.clone()))?;
            for (a, x) in acc.iter_mut().zip(self.row(r)) {
                *a += x;
            }
        }
        let n = members.len() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        Ok(ConceptVector(acc))
    }

    /// Copy keeping only the rows that satisfy `keep`; columns are unchanged.
    pub fn restrict_rows(&self, keep: impl Fn(&ConceptKey) -> bool) -> ConceptMatrix {
        let picked: Vec<usize> = (0..self.rows.len())
            .filter(|&r| keep(&self.rows[r]))
            .collect();
        let rows: Vec<ConceptKey> = picked.iter().map(|&r| self.rows[r].clone()).collect();
        let data = picked
            .iter()
            .flat_map(|&r| self.row(r).iter().copied())
            .collect();
        let row_index = rows
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        ConceptMatrix {
            rows,
            columns: self.columns.clone(),
            data,
            row_index,
        }
    }

    /// Comma-separated table: header `concept,<target>⊕<label>...`, then one
    /// row per concept with 6 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("concept");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.to_string());
        }
        out.push('\n');
        for (r, key) in self.rows.iter().enumerate() {
            out.push_str(&key.name);
            for &x in self.row(r) {
                out.push(',');
                out.push_str(&format_sig(x, 6));
            }
            out.push('\n');
        }
        out
    }
}

/// Members of the named category in `net`, as matrix row keys.
pub fn membership(net: &ConceptNetwork, category: &str) -> Vec<ConceptKey> {
    net.find(category, ConceptKind::Category)
        .and_then(|c| net.members_of(c).ok())
        .map(|ms| ms.into_iter().map(|n| n.key()).collect())
        .unwrap_or_default()
}

/// Whether a probed concept counts toward the category vector it is compared to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CategoryVectorMode {
    /// Mean over every current member, the probe included.
    #[default]
    IncludeProbe,
    /// Mean over the other members only.
    ExcludeProbe,
}

/// Cosine similarity between `concept` and the vector of `category`.
/// A category with no members (other than an excluded probe) scores 0.
pub fn category_similarity(
    net: &ConceptNetwork,
    matrix: &ConceptMatrix,
    concept: &ConceptKey,
    category: &str,
    mode: CategoryVectorMode,
) -> Result<f64, MatrixError> {
    let u = matrix.concept_vector(concept)?;
    let mut members = membership(net, category);
    if mode == CategoryVectorMode::ExcludeProbe {
        members.retain(|m| m != concept);
    }
    if members.is_empty() {
        return Ok(0.0);
    }
    let v = matrix.category_vector(category, &members)?;
    cosine_similarity(&u, &v)
}

/// `dot(u, v) / (|u| |v|)`, or 0 when either vector is all zeros.
pub fn cosine_similarity(u: &ConceptVector, v: &ConceptVector) -> Result<f64, MatrixError> {
    cosine(u.as_slice(), v.as_slice())
}

pub(crate) fn cosine(u: &[f64], v: &[f64]) -> Result<f64, MatrixError> {
    if u.len() != v.len() {
        return Err(MatrixError::DimensionMismatch(u.len(), v.len()));
    }
    let mut dot = 0.0;
    let mut uu = 0.0;
    let mut vv = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if uu == 0.0 || vv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (uu * vv).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ConceptKind::*;
    use proptest::prelude::*;

    fn key(kind: ConceptKind, name: &str) -> ConceptKey {
        ConceptKey::new(kind, name)
    }

    #[test]
    fn empty_network_is_zero_by_zero() {
        let m = build_matrix(&ConceptNetwork::new());
        assert_eq!(m.shape(), (0, 0));
        assert_eq!(m.to_csv(), "concept\n");
    }

    #[test]
    fn single_edge() {
        let mut net = ConceptNetwork::new();
        let mom = net.add_concept("mom", Object).unwrap();
        let drink = net.add_concept("drink", Action).unwrap();
        net.observe_association(mom, drink, EdgeLabel::Slot1)
            .unwrap();
        let m = build_matrix(&net);
        assert_eq!(m.shape(), (2, 1));
        assert_eq!(
            m.entry(&key(Object, "mom"), &key(Action, "drink"), EdgeLabel::Slot1),
            0.2
        );
        assert_eq!(
            m.concept_vector(&key(Action, "drink")).unwrap().as_slice(),
            &[0.0]
        );
        assert_eq!(m.to_csv(), "concept,drink⊕slot-1\nmom,0.200000\ndrink,0\n");
    }

    #[test]
    fn slots_expand_into_separate_columns() {
        let mut net = ConceptNetwork::new();
        let mom = net.add_concept("mom", Object).unwrap();
        let juice = net.add_concept("juice", Object).unwrap();
        let drink = net.add_concept("drink", Action).unwrap();
        net.observe_association(mom, drink, EdgeLabel::Slot1)
            .unwrap();
        net.observe_association(juice, drink, EdgeLabel::Slot2)
            .unwrap();
        let m = build_matrix(&net);
        let names: Vec<String> = m.columns().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["drink⊕slot-1", "drink⊕slot-2"]);
        let mv = m.concept_vector(&key(Object, "mom")).unwrap();
        let jv = m.concept_vector(&key(Object, "juice")).unwrap();
        assert_eq!(cosine_similarity(&mv, &jv).unwrap(), 0.0);
    }

    #[test]
    fn rows_sorted_by_kind_then_name() {
        let mut net = ConceptNetwork::new();
        net.add_concept("zebra", Object).unwrap();
        net.add_concept("animal", Category).unwrap();
        net.add_concept("apple", Object).unwrap();
        net.add_concept("red", Attribute).unwrap();
        let m = build_matrix(&net);
        let names: Vec<&str> = m.rows().iter().map(|k| k.name.as_str()).collect();
        assert_eq!(names, ["apple", "zebra", "red", "animal"]);
    }

    #[test]
    fn category_vector_means() {
        let mut net = ConceptNetwork::new();
        let a = net.add_concept("a", Object).unwrap();
        let b = net.add_concept("b", Object).unwrap();
        let x = net.add_concept("x", Attribute).unwrap();
        let y = net.add_concept("y", Attribute).unwrap();
        net.assert_generic(a, x, EdgeLabel::Is).unwrap();
        net.assert_generic(b, y, EdgeLabel::Is).unwrap();
        let m = build_matrix(&net);
        let one = m.category_vector("c", &[key(Object, "a")]).unwrap();
        assert_eq!(one, m.concept_vector(&key(Object, "a")).unwrap());
        let two = m
            .category_vector("c", &[key(Object, "a"), key(Object, "b")])
            .unwrap();
        assert_eq!(two.as_slice(), &[0.5, 0.5]);
        assert!(matches!(
            m.category_vector("c", &[]),
            Err(MatrixError::EmptyCategory(_))
        ));
        assert!(matches!(
            m.concept_vector(&key(Object, "nope")),
            Err(MatrixError::UnknownConcept(_))
        ));
    }

    #[test]
    fn cosine_examples() {
        let v = |xs: &[f64]| ConceptVector::new(xs.to_vec());
        assert_eq!(
            cosine_similarity(&v(&[1.0, 2.0]), &v(&[1.0, 2.0])).unwrap(),
            1.0
        );
        assert_eq!(
            cosine_similarity(&v(&[1.0, 0.0]), &v(&[0.0, 3.0])).unwrap(),
            0.0
        );
        let s = cosine_similarity(&v(&[1.0, 1.0, 0.0]), &v(&[1.0, 0.0, 0.0])).unwrap();
        assert!((s - 0.7071067811865475).abs() < 1e-15);
        assert_eq!(
            cosine_similarity(&v(&[0.0, 0.0]), &v(&[0.0, 0.0])).unwrap(),
            0.0
        );
        assert!(matches!(
            cosine_similarity(&v(&[1.0]), &v(&[1.0, 0.0])),
            Err(MatrixError::DimensionMismatch(1, 2))
        ));
    }

    proptest! {
        #[test]
        fn cosine_symmetric_scale_invariant(
            pair in (1usize..12).prop_flat_map(|n| (
                prop::collection::vec(0.0f64..1.0, n),
                prop::collection::vec(0.0f64..1.0, n),
            )),
            alpha in 0.01f64..100.0,
        ) {
            let (u, v) = pair;
            let s_uv = cosine(&u, &v).unwrap();
            let s_vu = cosine(&v, &u).unwrap();
            prop_assert_eq!(s_uv, s_vu);
            prop_assert!((0.0..=1.0).contains(&s_uv));
            let scaled: Vec<f64> = u.iter().map(|x| x * alpha).collect();
            prop_assert!((cosine(&scaled, &v).unwrap() - s_uv).abs() < 1e-12);
        }

        #[test]
        fn adding_the_mean_leaves_category_vector_unchanged(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 4), 1..6)
        ) {
            let mut net = ConceptNetwork::new();
            let attrs: Vec<_> = (0..4)
                .map(|j| net.add_concept(&format!("x{j}"), Attribute).unwrap())
                .collect();
            let mut members = Vec::new();
            for (i, r) in rows.iter().enumerate() {
                let m = net.add_concept(&format!("m{i}"), Object).unwrap();
                for (&a, &w) in attrs.iter().zip(r) {
                    net.set_inferred(m, a, EdgeLabel::Is, w).unwrap();
                }
                members.push(key(Object, &format!("m{i}")));
            }
            let before = build_matrix(&net).category_vector("c", &members).unwrap();
            // Columns with all-zero weight are dropped; index by attribute name.
            let m0 = build_matrix(&net);
            let extra = net.add_concept("extra", Object).unwrap();
            for (j, &a) in attrs.iter().enumerate() {
                let w = m0.column_of(&key(Attribute, &format!("x{j}")), EdgeLabel::Is)
                    .map_or(0.0, |c| before.as_slice()[c]);
                net.set_inferred(extra, a, EdgeLabel::Is, w).unwrap();
            }
            members.push(key(Object, "extra"));
            let after = build_matrix(&net).category_vector("c", &members).unwrap();
            prop_assert_eq!(before.dim(), after.dim());
            for (a, b) in before.as_slice().iter().zip(after.as_slice()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
