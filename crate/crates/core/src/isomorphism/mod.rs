//! Design isomorphism: colored-graph encoding, canonical certificates,
//! invariant-partitioned reduction and an exhaustive pairwise oracle.

mod canon;
mod graph;
mod oracle;
mod reduce;

pub use canon::{canonical_certificate, canonical_certificate_with, Certificate};
pub use graph::{design_to_graph, ColoredGraph, VertexClass, CLASS_COUNT};
pub use oracle::{pairwise_oracle, ORACLE_MAX_FACTORS, ORACLE_MAX_RUNS};
pub use reduce::{reduce, reduce_keyed, Representative};

use crate::design::Design;
use crate::matrix::{design_matrix, RunMatrix};

/// Certificate of the colored graph of `d`'s run matrix.
pub fn certificate_of(d: &Design) -> Certificate {
    let matrix = design_matrix(d);
    let g = design_to_graph(&matrix);
    canonical_certificate_with(&g, &factor_keys(d, g.vertex_count()), &translations(d, &matrix))
}

/// Vertex keys: a hash of each factor's word-count profile on its factor
/// vertex, zero elsewhere.
fn factor_keys(d: &Design, vertex_count: usize) -> Vec<u64> {
    let runs = d.runs();
    let (m, n) = (d.m() as usize, d.n() as usize);
    let mut keys = vec![0u64; vertex_count];
    for (f, profile) in crate::wlp::factor_word_counts(d).iter().enumerate() {
        let h = profile
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &c| (h ^ c as u64).wrapping_mul(0x100_0000_01b3));
        let vertex = if f < m { runs + n + f } else { runs + (f - m) };
        keys[vertex] = h;
    }
    keys
}

/// Graph automorphisms induced by the run translations `r -> r ^ 2^b`,
/// which fix every factor and permute levels.
fn translations(d: &Design, matrix: &RunMatrix) -> Vec<Vec<u32>> {
    let runs = matrix.runs() as u32;
    let (m, n) = (matrix.m() as u32, matrix.n() as u32);
    let two_level0 = runs + n + m;
    let four_level0 = two_level0 + 2 * n;
    (0..d.k())
        .map(|b| {
            let t = 1u32 << b;
            let mut gamma: Vec<u32> = (0..four_level0 + 4 * m).collect();
            for r in 0..runs {
                gamma[r as usize] = r ^ t;
            }
            for (j, col) in matrix.two_level().iter().enumerate() {
                if col[0] != col[t as usize] {
                    let v = two_level0 + 2 * j as u32;
                    gamma.swap(v as usize, v as usize + 1);
                }
            }
            for (j, col) in matrix.four_level().iter().enumerate() {
                for r in 0..runs as usize {
                    let from = four_level0 + 4 * j as u32 + col[r] as u32;
                    gamma[from as usize] = four_level0 + 4 * j as u32 + col[r ^ t as usize] as u32;
                }
            }
            gamma
        })
        .collect()
}
