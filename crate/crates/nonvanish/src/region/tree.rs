//! Rooted trees over interior components touching at single contact points.
//! A cycle in the touching graph encloses a pocket of the complement, so it
//! is rejected as a connected-complement violation.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::CompactRegion;

#[derive(Debug, Clone)]
pub struct ComponentTree {
    /// Total order extending the tree order: BFS from the root.
    pub order: Vec<u32>,
    pub root: u32,
    pub parent: BTreeMap<u32, u32>,
    /// Contact point z_n of each non-root node with its parent.
    pub contact_points: BTreeMap<u32, Complex64>,
}

impl ComponentTree {
    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len()
    }
}

/// Builds one tree per connected cluster of components whose closures come
/// within `contact_tol` of each other. Pass `contact_tol <= 0` to use the
/// default `1e-6 * diam(K)`.
pub fn build_component_trees(region: &CompactRegion, contact_tol: f64) -> Result<Vec<ComponentTree>> {
    let comps = &region.components;
    if comps.is_empty() {
        return Err(Error::InvalidRegion("no components to build a tree over".into()));
    }
    let tol = if contact_tol > 0.0 { contact_tol } else { 1e-6 * region.diameter() };

    let n = comps.len();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut contacts: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (dist, pa, pb) = comps[i].closure_distance(&comps[j]);
            if dist <= tol {
                let loci = comps[i].touch_loci(&comps[j], tol);
                if loci.len() > 1 {
                    return Err(Error::MultipleContactPoints {
                        a: comps[i].id,
                        b: comps[j].id,
                        loci: loci.len(),
                    });
                }
                adjacency[i].push(j);
                adjacency[j].push(i);
                contacts.insert((i, j), (pa + pb) * 0.5);
            }
        }
    }

    // Connected clusters by flood over the adjacency lists.
    let mut cluster_of = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if cluster_of[start] != usize::MAX {
            continue;
        }
        let cid = clusters.len();
        let mut members = Vec::new();
        let mut stack = vec![start];
        cluster_of[start] = cid;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &adjacency[v] {
                if cluster_of[w] == usize::MAX {
                    cluster_of[w] = cid;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }

    let mut trees = Vec::new();
    for members in clusters {
        let edge_count: usize =
            members.iter().map(|&v| adjacency[v].len()).sum::<usize>() / 2;
        if edge_count + 1 != members.len() {
            // Connected with too many edges: some cycle exists.
            let mut ids: Vec<u32> = members.iter().map(|&v| comps[v].id).collect();
            ids.sort_unstable();
            return Err(Error::CycleDetected { cycle: ids });
        }

        // Root = lowest component id; BFS with ascending-id neighbor order.
        let root_idx = *members
            .iter()
            .min_by_key(|&&v| comps[v].id)
            .expect("cluster nonempty");
        let mut order = Vec::with_capacity(members.len());
        let mut parent = BTreeMap::new();
        let mut contact_points = BTreeMap::new();
        let mut visited: BTreeMap<usize, bool> = members.iter().map(|&v| (v, false)).collect();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(root_idx);
        visited.insert(root_idx, true);
        while let Some(v) = queue.pop_front() {
            order.push(comps[v].id);
            let mut neighbors: Vec<usize> = adjacency[v].clone();
            neighbors.sort_by_key(|&w| comps[w].id);
            for w in neighbors {
                if !visited[&w] {
                    visited.insert(w, true);
                    parent.insert(comps[w].id, comps[v].id);
                    let key = if v < w { (v, w) } else { (w, v) };
                    contact_points.insert(comps[w].id, contacts[&key]);
                    queue.push_back(w);
                }
            }
        }

        trees.push(ComponentTree { order, root: comps[root_idx].id, parent, contact_points });
    }
    Ok(trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{ComponentShape, JordanComponent};

    fn disc(id: u32, center: (f64, f64), radius: f64) -> JordanComponent {
        JordanComponent::new(id, ComponentShape::Disc {
            center: Complex64::new(center.0, center.1),
            radius,
        })
        .unwrap()
    }

    #[test]
    fn single_disc_tree() {
        let k = CompactRegion::new(vec![disc(0, (0.0, 0.0), 1.0)], vec![], vec![]).unwrap();
        let trees = build_component_trees(&k, 0.0).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].node_count(), 1);
        assert_eq!(trees[0].edge_count(), 0);
        assert_eq!(trees[0].root, 0);
    }

    #[test]
    fn tangent_discs_contact_point() {
        let k = CompactRegion::new(
            vec![disc(0, (-1.0, 0.0), 1.0), disc(1, (1.0, 0.0), 1.0)],
            vec![],
            vec![],
        )
        .unwrap();
        let trees = build_component_trees(&k, 0.0).unwrap();
        assert_eq!(trees.len(), 1);
        let tree = &trees[0];
        assert_eq!(tree.node_count(), 2);
        assert_eq!(tree.edge_count(), 1);
        assert_eq!(tree.root, 0);
        assert_eq!(tree.parent[&1], 0);
        let z = tree.contact_points[&1];
        let tol = 1e-6 * k.diameter();
        assert!(z.norm() <= tol, "contact point {z} too far from 0");
    }

    #[test]
    fn three_pairwise_tangent_discs_cycle() {
        // Unit discs centered on the vertices of an equilateral triangle with
        // side 2: pairwise tangent, enclosing a complement pocket.
        let h = 3.0f64.sqrt();
        let k = CompactRegion::new(
            vec![
                disc(0, (-1.0, 0.0), 1.0),
                disc(1, (1.0, 0.0), 1.0),
                disc(2, (0.0, h), 1.0),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        match build_component_trees(&k, 0.0) {
            Err(Error::CycleDetected { cycle }) => assert_eq!(cycle, vec![0, 1, 2]),
            other => panic!("expected CycleDetected, got {other:?}"),
        }
    }

    #[test]
    fn separated_discs_give_two_trees() {
        let k = CompactRegion::new(
            vec![disc(0, (-2.0, 0.0), 1.0), disc(1, (2.0, 0.0), 1.0)],
            vec![],
            vec![],
        )
        .unwrap();
        let trees = build_component_trees(&k, 0.0).unwrap();
        assert_eq!(trees.len(), 2);
        assert!(trees.iter().all(|t| t.node_count() == 1));
    }

    #[test]
    fn chain_of_three_discs_bfs_order() {
        let k = CompactRegion::new(
            vec![
                disc(0, (0.0, 0.0), 1.0),
                disc(1, (2.0, 0.0), 1.0),
                disc(2, (4.0, 0.0), 1.0),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let trees = build_component_trees(&k, 0.0).unwrap();
        assert_eq!(trees.len(), 1);
        let t = &trees[0];
        assert_eq!(t.order, vec![0, 1, 2]);
        assert_eq!(t.parent[&1], 0);
        assert_eq!(t.parent[&2], 1);
        assert!((t.contact_points[&1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((t.contact_points[&2] - Complex64::new(3.0, 0.0)).norm() < 1e-9);
    }
}
