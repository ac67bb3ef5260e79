//! Binary-monotone normalization of entangled decompositions.
//!
//! The root is a node of maximal cover size. Bottom-up, a parent whose cover
//! is smaller than a child's cover is padded with blue nodes of the child's
//! cover (and its bag recomputed as the union of neighbourhoods); top-down,
//! a node with `n ≥ 3` children is split into a chain of `n − 2` copies so that
//! every node keeps at most two children.

use super::{validate, DecompMode, TreeDecomp};
use crate::error::{Error, Result};
use crate::model::IncidenceGraph;

/// Normalizes a valid entangled decomposition into a binary, monotone one.
///
/// Returns the new decomposition (with its root set) and the root.
pub fn normalize_binary_monotone(d: &TreeDecomp, i: &IncidenceGraph) -> Result<(TreeDecomp, usize)> {
    let report = validate(d, i, DecompMode::Ehd)?;
    if !report.valid {
        return Err(Error::InvalidDecomposition(
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ));
    }
    let mut out = d.clone();
    let root = (0..d.n_nodes())
        .max_by_key(|&t| (d.cover[t].len(), std::cmp::Reverse(t)))
        .expect("decompositions have at least one node");
    let (parent, order) = out.rooted(root);
    // bottom-up padding
    for &t in order.iter().rev() {
        let Some(p) = parent[t] else { continue };
        if out.cover[p].len() < out.cover[t].len() {
            let need = out.cover[t].len() - out.cover[p].len();
            let extra: Vec<usize> =
                out.cover[t].difference(&out.cover[p]).copied().take(need).collect();
            out.cover[p].extend(extra);
            out.bag[p] = i.nbr_union(&out.cover[p]);
        }
    }
    // top-down splitting
    let children = out.children(root);
    for t in order {
        let ch = &children[t];
        let n = ch.len();
        if n < 3 {
            continue;
        }
        // t keeps ch[0]; copies c_2..c_{n-1} carry ch[1..n-1], the last copy also ch[n-1]
        let mut prev = t;
        for (idx, &c) in ch.iter().enumerate().take(n - 1).skip(1) {
            let copy = out.add_node(out.bag[t].clone(), out.cover[t].clone());
            out.add_edge(prev, copy);
            out.remove_edge(t, c);
            out.add_edge(copy, c);
            if idx == n - 2 {
                out.remove_edge(t, ch[n - 1]);
                out.add_edge(copy, ch[n - 1]);
            }
            prev = copy;
        }
    }
    out.root = Some(root);
    Ok((out, root))
}

/// True iff every node has at most two children and covers never grow
/// from parent to child, when rooted at `root`.
pub fn is_binary_monotone(d: &TreeDecomp, root: usize) -> bool {
    let (parent, _) = d.rooted(root);
    let children = d.children(root);
    children.iter().all(|c| c.len() <= 2)
        && parent
            .iter()
            .enumerate()
            .all(|(t, p)| p.is_none_or(|p| d.cover[p].len() >= d.cover[t].len()))
}
