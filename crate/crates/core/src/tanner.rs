use crate::gf2::SparseBinaryMatrix;

/// Edge enumeration of the Tanner graph of a parity-check matrix.
///
/// Edges are numbered by error node (column), then by detector (row) in
/// ascending order, so the edges of column `j` are the contiguous range
/// `col_start[j]..col_start[j + 1]`.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    col_start: Vec<usize>,
    edge_row: Vec<usize>,
    edge_col: Vec<usize>,
    row_start: Vec<usize>,
    // edge ids grouped by detector, ascending column within a detector
    row_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn new(h: &SparseBinaryMatrix) -> Self {
        let n = h.num_cols();
        let m = h.num_rows();
        let mut col_start = Vec::with_capacity(n + 1);
        let mut edge_row = Vec::with_capacity(h.nnz());
        let mut edge_col = Vec::with_capacity(h.nnz());
        col_start.push(0);
        for j in 0..n {
            for &i in h.col(j) {
                edge_row.push(i);
                edge_col.push(j);
            }
            col_start.push(edge_row.len());
        }

        let mut row_start = vec![0; m + 1];
        for &i in &edge_row {
            row_start[i + 1] += 1;
        }
        for i in 0..m {
            row_start[i + 1] += row_start[i];
        }
        let mut fill = row_start.clone();
        let mut row_edges = vec![0; edge_row.len()];
        for (e, &i) in edge_row.iter().enumerate() {
            row_edges[fill[i]] = e;
            fill[i] += 1;
        }

        Self {
            col_start,
            edge_row,
            edge_col,
            row_start,
            row_edges,
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edge_row.len()
    }

    pub fn num_errors(&self) -> usize {
        self.col_start.len() - 1
    }

    pub fn num_detectors(&self) -> usize {
        self.row_start.len() - 1
    }

    #[inline]
    pub fn col_edges(&self, j: usize) -> std::ops::Range<usize> {
        self.col_start[j]..self.col_start[j + 1]
    }

    #[inline]
    pub fn row_edges(&self, i: usize) -> &[usize] {
        &self.row_edges[self.row_start[i]..self.row_start[i + 1]]
    }

    #[inline]
    pub fn edge_row(&self, e: usize) -> usize {
        self.edge_row[e]
    }

    #[inline]
    pub fn edge_col(&self, e: usize) -> usize {
        self.edge_col[e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_column_major() {
        let h = SparseBinaryMatrix::from_rows(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let g = TannerGraph::new(&h);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.col_edges(1), 1..3);
        assert_eq!(g.edge_row(1), 0);
        assert_eq!(g.edge_row(2), 1);
        assert_eq!(g.row_edges(0), &[0, 1]);
        assert_eq!(g.row_edges(1), &[2, 3]);
        for e in 0..4 {
            assert!(h.get(g.edge_row(e), g.edge_col(e)));
        }
    }
}
