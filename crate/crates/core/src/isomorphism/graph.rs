use crate::matrix::RunMatrix;

/// Vertex color classes, in the order their cells appear in the initial
/// partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum VertexClass {
    Run = 0,
    TwoLevelFactor = 1,
    FourLevelFactor = 2,
    TwoLevelLevel = 3,
    FourLevelLevel = 4,
}

pub const CLASS_COUNT: usize = 5;

/// Undirected vertex-colored graph encoding a run matrix.
///
/// Vertices are laid out as: runs, two-level factors, four-level factors,
/// two-level level vertices (2 per factor), four-level level vertices
/// (4 per factor). Run `r` is joined to the level vertex it takes in every
/// factor, and every level vertex is joined to its factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    colors: Vec<VertexClass>,
    edges: Vec<(u32, u32)>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<VertexClass>, edges: Vec<(u32, u32)>) -> Self {
        let n = colors.len() as u32;
        assert!(edges.iter().all(|&(a, b)| a < n && b < n && a != b), "edge endpoint out of range");
        ColoredGraph { colors, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn colors(&self) -> &[VertexClass] {
        &self.colors
    }

    pub fn class_sizes(&self) -> [u32; CLASS_COUNT] {
        let mut sizes = [0; CLASS_COUNT];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.colors.len()];
        for &(a, b) in &self.edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg
    }

    /// Same graph with vertex `v` renamed `perm[v]`; colors follow their
    /// vertices.
    pub fn relabel(&self, perm: &[u32]) -> ColoredGraph {
        let mut colors = self.colors.clone();
        for (v, &p) in perm.iter().enumerate() {
            colors[p as usize] = self.colors[v];
        }
        let edges = self.edges.iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
        ColoredGraph { colors, edges }
    }
}

/// Encodes a run matrix as a colored graph.
pub fn design_to_graph(matrix: &RunMatrix) -> ColoredGraph {
    let runs = matrix.runs() as u32;
    let m = matrix.m() as u32;
    let n = matrix.n() as u32;
    let two_factor0 = runs;
    let four_factor0 = two_factor0 + n;
    let two_level0 = four_factor0 + m;
    let four_level0 = two_level0 + 2 * n;
    let total = four_level0 + 4 * m;

    let mut colors = vec![VertexClass::Run; total as usize];
    colors[two_factor0 as usize..four_factor0 as usize].fill(VertexClass::TwoLevelFactor);
    colors[four_factor0 as usize..two_level0 as usize].fill(VertexClass::FourLevelFactor);
    colors[two_level0 as usize..four_level0 as usize].fill(VertexClass::TwoLevelLevel);
    colors[four_level0 as usize..].fill(VertexClass::FourLevelLevel);

    let mut edges = Vec::with_capacity((runs * (m + n) + 2 * n + 4 * m) as usize);
    for (j, col) in matrix.two_level().iter().enumerate() {
        let j = j as u32;
        for (r, &x) in col.iter().enumerate() {
            let level = u32::from(x < 0);
            edges.push((r as u32, two_level0 + 2 * j + level));
        }
        for level in 0..2 {
            edges.push((two_level0 + 2 * j + level, two_factor0 + j));
        }
    }
    for (j, col) in matrix.four_level().iter().enumerate() {
        let j = j as u32;
        for (r, &l) in col.iter().enumerate() {
            edges.push((r as u32, four_level0 + 4 * j + l as u32));
        }
        for level in 0..4 {
            edges.push((four_level0 + 4 * j + level, four_factor0 + j));
        }
    }
    ColoredGraph::new(colors, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Design;
    use crate::matrix::design_matrix;

    #[test]
    fn vertex_and_edge_counts() {
        let d = Design::new(4, 1, &[4, 8, 7]).unwrap();
        let g = design_to_graph(&design_matrix(&d));
        assert_eq!(g.vertex_count(), 30);
        assert_eq!(g.edges().len(), 74);
        assert_eq!(g.class_sizes(), [16, 3, 1, 6, 4]);
    }

    #[test]
    fn degree_invariants() {
        let d = Design::new(5, 2, &[16, 7, 29, 14]).unwrap();
        let g = design_to_graph(&design_matrix(&d));
        let deg = g.degrees();
        let runs = d.runs() as u32;
        for (v, c) in g.colors().iter().enumerate() {
            let expected = match c {
                VertexClass::Run => d.m() + d.n(),
                VertexClass::TwoLevelFactor => 2,
                VertexClass::FourLevelFactor => 4,
                VertexClass::TwoLevelLevel => runs / 2 + 1,
                VertexClass::FourLevelLevel => runs / 4 + 1,
            };
            assert_eq!(deg[v], expected, "vertex {v} of class {c:?}");
        }
    }
}
