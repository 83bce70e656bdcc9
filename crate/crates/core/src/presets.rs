//! Small named AJN data used by tests, the CLI docs and the web demo.

use crate::linalg::Matrix;
use crate::quiver::AjnDatum;

fn scalars(rows: &[&[f64]]) -> Vec<Vec<Matrix>> {
    rows.iter().map(|r| r.iter().map(|&x| Matrix::scalar(x)).collect()).collect()
}

/// Two scalar sources into one scalar sink with `c = (1, 1)`, `p = (2)`,
/// both maps `[1]`: the entropy power inequality. Capacity 4.
pub fn epi() -> AjnDatum {
    AjnDatum { d: vec![1, 1], n: vec![1], c: vec![1, 1], p: vec![2], a: scalars(&[&[1.0], &[1.0]]) }
}

/// Two scalar sources embedded as the coordinate axes of `R²`. Geometric.
pub fn orthogonal() -> AjnDatum {
    AjnDatum {
        d: vec![1, 1],
        n: vec![2],
        c: vec![1, 1],
        p: vec![1],
        a: vec![vec![Matrix::from_rows(&[[1.0], [0.0]]).unwrap()], vec![Matrix::from_rows(&[[0.0], [1.0]]).unwrap()]],
    }
}

/// `A = [1 0]` with `c = (1)`, `p = (2)`: balanced and surjective but not
/// semi-stable, since `e₂` is killed.
pub fn infeasible() -> AjnDatum {
    AjnDatum {
        d: vec![2],
        n: vec![1],
        c: vec![1],
        p: vec![2],
        a: vec![vec![Matrix::from_rows(&[[1.0, 0.0]]).unwrap()]],
    }
}

/// `A_i1 = [[1, x_i], [0, 1]]` on `d = (2, 2)`, `n = (2)`, `c = (1, 1)`,
/// `p = (2)`. Both diagonal blocks are the EPI datum.
pub fn block_triangular(x1: f64, x2: f64) -> AjnDatum {
    AjnDatum {
        d: vec![2, 2],
        n: vec![2],
        c: vec![1, 1],
        p: vec![2],
        a: vec![
            vec![Matrix::from_rows(&[[1.0, x1], [0.0, 1.0]]).unwrap()],
            vec![Matrix::from_rows(&[[1.0, x2], [0.0, 1.0]]).unwrap()],
        ],
    }
}

/// Direct sum of two copies of the EPI datum.
pub fn direct_sum() -> AjnDatum {
    block_triangular(0.0, 0.0)
}
