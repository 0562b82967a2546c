//! Fixed instances for the benchmarks.

use std::sync::Arc;

use crossnorm_core::rational::Rational;
use crossnorm_core::{Matrix, MeasureSpace, ModuleSpec, NormDescriptor, Tensor};

/// A deterministic `n x n` matrix with small signed rational entries.
pub fn matrix(n: usize) -> Matrix {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = (3 * i + 5 * j + 1) % 7;
                    Rational::new((k as i64 - 3).into(), (1 + (i + j) % 3).into())
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows, n)
}

/// `atoms` copies of `left ⊗ right` carrying [`matrix`].
pub fn tensor(atoms: usize, left: NormDescriptor, right: NormDescriptor) -> Tensor {
    let n = left.dim();
    assert_eq!(n, right.dim(), "square fibers only");
    let space = Arc::new(MeasureSpace::uniform(atoms));
    let l = Arc::new(ModuleSpec::constant(space.clone(), left));
    let r = Arc::new(ModuleSpec::constant(space, right));
    Tensor::new(l, r, vec![matrix(n); atoms]).expect("shapes match")
}

/// The hexagonal norm on `R^2`.
pub fn hexagon() -> NormDescriptor {
    let v = |a: i64, b: i64| {
        vec![
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
        ]
        .into()
    };
    NormDescriptor::polyhedral_from_vertices(vec![v(1, 0), v(0, 1), v(1, 1)]).expect("hexagon")
}
