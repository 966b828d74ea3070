use std::fmt;

/// A rooted planar tree whose internal vertices have at least two children.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(children) => children.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn internal_vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(children) => 1 + children.iter().map(PlanarTree::internal_vertices).sum::<usize>(),
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "|"),
            PlanarTree::Node(children) => {
                write!(f, "(")?;
                for c in children {
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn subtrees(n: usize) -> Vec<PlanarTree> {
    if n == 1 {
        vec![PlanarTree::Leaf]
    } else {
        planar_trees(n)
    }
}

/// All planar trees with `n ≥ 2` leaves, ordered by the leaf counts of the
/// root's children (compositions in lexicographic order, coarser first).
pub fn planar_trees(n: usize) -> Vec<PlanarTree> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for m in 2..=n {
        for comp in crate::coalgebra::compositions(n, m) {
            let mut partial: Vec<Vec<PlanarTree>> = vec![Vec::new()];
            for &r in &comp {
                let options = subtrees(r);
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        options.iter().map(move |t| {
                            let mut q = p.clone();
                            q.push(t.clone());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(PlanarTree::Node));
        }
    }
    out
}
