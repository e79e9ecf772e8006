//! Splitting a sparse matrix into independent diagonal blocks.
//!
//! Rows and columns are nodes of a bipartite graph with an edge for every
//! nonzero entry; each connected component is a block that can be reduced on
//! its own.  Zero rows and zero columns belong to no block.

use super::matrix::SparseMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Blocks ordered by their smallest column; indices ascending inside each.
pub fn blocks(m: &SparseMatrix) -> Vec<Block> {
    let (nr, nc) = (m.rows(), m.cols());
    let mut uf = UnionFind::new(nr + nc);
    for (c, col) in m.columns().iter().enumerate() {
        for r in col.keys() {
            uf.union(nr + c, *r);
        }
    }
    let mut slot = vec![usize::MAX; nr + nc];
    let mut out: Vec<Block> = Vec::new();
    for (c, col) in m.columns().iter().enumerate() {
        if col.is_empty() {
            continue;
        }
        let root = uf.find(nr + c);
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Block {
                rows: Vec::new(),
                cols: Vec::new(),
            });
        }
        out[slot[root]].cols.push(c);
    }
    for r in 0..nr {
        let root = uf.find(r);
        if slot[root] != usize::MAX {
            out[slot[root]].rows.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Rational, Ring};

    #[test]
    fn splits_permuted_block_diagonal() {
        let one = || Rational::from_integer(1.into());
        // rows {0,2} x cols {1,3} and rows {1} x cols {0}; row 3 and col 2 empty
        let m = SparseMatrix::from_triplets(
            4,
            4,
            Ring::Integers,
            [(0, 1, one()), (2, 3, one()), (0, 3, one()), (1, 0, one())],
        )
        .unwrap();
        let b = blocks(&m);
        assert_eq!(
            b,
            vec![
                Block {
                    rows: vec![1],
                    cols: vec![0]
                },
                Block {
                    rows: vec![0, 2],
                    cols: vec![1, 3]
                },
            ]
        );
    }
}
