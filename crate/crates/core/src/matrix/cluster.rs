//! Average-linkage agglomerative clustering of matrix rows under cosine
//! distance, for heatmap row ordering.

use super::{cosine, ConceptMatrix};
use crate::graph::ConceptKey;

/// Distances closer than this are treated as tied.
const TIE_EPS: f64 = 1e-12;

/// One merge step. Ids below the leaf count are leaves (matrix rows); id
/// `leaves + i` is the cluster formed by merge `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    leaves: Vec<ConceptKey>,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn leaves(&self) -> &[ConceptKey] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    fn root(&self) -> Option<usize> {
        match (self.leaves.len(), self.merges.len()) {
            (0, _) => None,
            (_, 0) => Some(0),
            (n, m) => Some(n + m - 1),
        }
    }

    /// Leaves in left-to-right tree order.
    pub fn leaf_order(&self) -> Vec<&ConceptKey> {
        let mut out = Vec::with_capacity(self.leaves.len());
        if let Some(root) = self.root() {
            let mut stack = vec![root];
            while let Some(id) = stack.pop() {
                if id < self.leaves.len() {
                    out.push(&self.leaves[id]);
                } else {
                    let m = &self.merges[id - self.leaves.len()];
                    stack.push(m.right);
                    stack.push(m.left);
                }
            }
        }
        out
    }

    /// Nested parentheses, `(left,right):height`, leaves by name.
    pub fn to_tree_string(&self) -> String {
        fn walk(d: &Dendrogram, id: usize, out: &mut String) {
            if id < d.leaves.len() {
                out.push_str(&d.leaves[id].name);
            } else {
                let m = &d.merges[id - d.leaves.len()];
                out.push('(');
                walk(d, m.left, out);
                out.push(',');
                walk(d, m.right, out);
                out.push_str(&format!("):{:.6}", m.height));
            }
        }
        let mut out = String::new();
        if let Some(root) = self.root() {
            walk(self, root, &mut out);
        }
        out
    }

    /// Export text: the leaf order, one per line, then the merge tree.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# leaf order\n");
        for k in self.leaf_order() {
            out.push_str(&k.name);
            out.push('\n');
        }
        out.push_str("# merge tree\n");
        let tree = self.to_tree_string();
        if !tree.is_empty() {
            out.push_str(&tree);
            out.push('\n');
        }
        out
    }
}

struct Cluster {
    id: usize,
    size: usize,
    /// Smallest (name, kind) among the leaves; drives tie-breaking and child order.
    tag: Tag,
}

type Tag = (String, crate::graph::ConceptKind);

/// Clusters every matrix row. Ties are broken by the lexicographically
/// smallest leaf names of the two candidate clusters.
#[allow(clippy::needless_range_loop)]
pub fn agglomerative_order(matrix: &ConceptMatrix) -> Dendrogram {
    let leaves: Vec<ConceptKey> = matrix.rows().to_vec();
    let n = leaves.len();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    let mut dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let s = cosine(matrix.row(i), matrix.row(j)).expect("rows share a width");
            let d = (1.0 - s).max(0.0);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    let mut active: Vec<Cluster> = leaves
        .iter()
        .enumerate()
        .map(|(i, k)| Cluster {
            id: i,
            size: 1,
            tag: (k.name.clone(), k.kind),
        })
        .collect();
    // `dist` is indexed by slot in `active`, kept in lockstep.

    while active.len() > 1 {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..active.len() {
            for b in (a + 1)..active.len() {
                let d = dist[a][b];
                let better = match best {
                    None => true,
                    Some((ba, bb, bd)) => {
                        if d < bd - TIE_EPS {
                            true
                        } else if d <= bd + TIE_EPS {
                            pair_tag(&active, a, b) < pair_tag(&active, ba, bb)
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some((a, b, d));
                }
            }
        }
        let (a, b, height) = best.expect("at least two clusters");
        let (sa, sb) = (active[a].size as f64, active[b].size as f64);

        // Lance-Williams update for average linkage, stored in slot `a`.
        for k in 0..active.len() {
            if k != a && k != b {
                let d = (sa * dist[a][k] + sb * dist[b][k]) / (sa + sb);
                dist[a][k] = d;
                dist[k][a] = d;
            }
        }
        let (left, right) = if active[a].tag <= active[b].tag {
            (a, b)
        } else {
            (b, a)
        };
        let merged = Cluster {
            id: n + merges.len(),
            size: active[a].size + active[b].size,
            tag: active[left].tag.clone().min(active[right].tag.clone()),
        };
        merges.push(Merge {
            left: active[left].id,
            right: active[right].id,
            height,
            size: merged.size,
        });
        active[a] = merged;
        active.remove(b);
        dist.remove(b);
        for row in &mut dist {
            row.remove(b);
        }
    }

    Dendrogram { leaves, merges }
}

fn pair_tag(active: &[Cluster], a: usize, b: usize) -> (&Tag, &Tag) {
    let (x, y) = (&active[a].tag, &active[b].tag);
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ConceptKind::*, ConceptNetwork, EdgeLabel};
    use crate::matrix::build_matrix;

    fn net_with(rows: &[(&str, &[(&str, f64)])]) -> ConceptNetwork {
        let mut net = ConceptNetwork::new();
        for (name, feats) in rows {
            let s = net.add_concept(name, Object).unwrap();
            for (attr, w) in feats.iter() {
                let a = net.add_concept(attr, Attribute).unwrap();
                net.set_inferred(s, a, EdgeLabel::Is, *w).unwrap();
            }
        }
        net
    }

    fn order(d: &Dendrogram) -> Vec<&str> {
        d.leaf_order()
            .into_iter()
            .map(|k| k.name.as_str())
            .collect()
    }

    #[test]
    fn identical_rows_merge_first_at_zero() {
        let net = net_with(&[
            ("a", &[("x", 1.0)]),
            ("b", &[("y", 1.0)]),
            ("c", &[("x", 0.5)]),
        ]);
        let m = build_matrix(&net);
        // Only object rows matter here; attribute rows are zero vectors.
        let d = agglomerative_order(&m);
        let first = &d.merges()[0];
        assert!(first.height.abs() < 1e-12);
        let names: Vec<&str> = [first.left, first.right]
            .iter()
            .map(|&i| d.leaves()[i].name.as_str())
            .collect();
        assert_eq!(names, ["a", "c"]);
    }

    #[test]
    fn singleton_and_empty() {
        let net = net_with(&[("solo", &[])]);
        let d = agglomerative_order(&build_matrix(&net));
        assert!(d.merges().is_empty());
        assert_eq!(order(&d), ["solo"]);
        assert_eq!(d.to_tree_string(), "solo");

        let d = agglomerative_order(&build_matrix(&ConceptNetwork::new()));
        assert!(d.leaf_order().is_empty());
        assert_eq!(d.to_text(), "# leaf order\n# merge tree\n");
    }

    #[test]
    fn groups_stay_contiguous() {
        let net = net_with(&[
            ("milk", &[("drink2", 1.0)]),
            ("cat", &[("walk1", 1.0), ("drink1", 0.3)]),
            ("juice", &[("drink2", 0.6)]),
            ("dog", &[("walk1", 0.8), ("drink1", 0.2)]),
            ("water", &[("drink2", 0.9), ("walk1", 0.01)]),
        ]);
        let m = build_matrix(&net);
        let d = agglomerative_order(&m);
        assert_eq!(d.merges().len(), m.rows().len() - 1);
        let ord = order(&d);
        let pos = |s: &str| ord.iter().position(|&x| x == s).unwrap();
        let liquids = [pos("milk"), pos("juice"), pos("water")];
        let span = liquids.iter().max().unwrap() - liquids.iter().min().unwrap();
        assert_eq!(span, 2, "{ord:?}");
        assert_eq!((pos("cat") as i64 - pos("dog") as i64).abs(), 1, "{ord:?}");
    }

    #[test]
    fn average_linkage_heights() {
        // Two orthogonal pairs; every cross distance is 1, so the root merges at 1.
        let net = net_with(&[
            ("a", &[("x", 1.0)]),
            ("b", &[("x", 1.0)]),
            ("c", &[("y", 1.0)]),
            ("d", &[("y", 2.0 / 3.0)]),
        ]);
        let m = build_matrix(&net).restrict_rows(|k| k.kind == Object);
        let d = agglomerative_order(&m);
        let heights: Vec<f64> = d.merges().iter().map(|m| m.height).collect();
        assert!(heights[0].abs() < 1e-12 && heights[1].abs() < 1e-12);
        assert!((heights[2] - 1.0).abs() < 1e-12);
        assert_eq!(
            d.to_tree_string(),
            "((a,b):0.000000,(c,d):0.000000):1.000000"
        );
    }

    #[test]
    fn deterministic() {
        let net = net_with(&[
            ("p", &[("x", 1.0)]),
            ("q", &[("x", 1.0)]),
            ("r", &[("x", 1.0)]),
        ]);
        let m = build_matrix(&net);
        assert_eq!(agglomerative_order(&m), agglomerative_order(&m));
        assert_eq!(order(&agglomerative_order(&m))[..3], ["p", "q", "r"]);
    }
}
