#![allow(dead_code)]

use helibudget_core::spectral::{Grid, ScalarField, VectorField};

pub fn grid(n: usize) -> Grid {
    Grid::periodic(n).unwrap()
}

pub fn abc(g: &Grid) -> VectorField {
    VectorField::from_fn(g, |x, y, z| [z.sin() + y.cos(), x.sin() + z.cos(), y.sin() + x.cos()])
}

pub fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    (a - b).max_abs()
}

pub fn vmax_diff(a: &VectorField, b: &VectorField) -> f64 {
    (a - b).max_abs()
}

/// Samples of a fine-grid field at the points of a grid with half the
/// resolution.
pub fn restrict(fine: &ScalarField, coarse: &Grid) -> ScalarField {
    let fg = fine.grid();
    let ratio = fg.n() / coarse.n();
    let n = coarse.n();
    let mut out = Vec::with_capacity(coarse.len());
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                out.push(fine.values()[fg.index(ratio * i, ratio * j, ratio * k)]);
            }
        }
    }
    ScalarField::from_values(coarse, out)
}

pub fn restrict_vec(fine: &VectorField, coarse: &Grid) -> VectorField {
    let [x, y, z] = fine.components();
    VectorField::new(restrict(x, coarse), restrict(y, coarse), restrict(z, coarse))
}

/// Centered finite difference of order 12 along `axis` on a periodic grid.
pub fn fd_derivative(f: &ScalarField, axis: usize) -> ScalarField {
    // weights for offsets 1..=6 of the 12th-order central first derivative
    const W: [f64; 6] = [
        6.0 / 7.0,
        -15.0 / 56.0,
        5.0 / 63.0,
        -1.0 / 56.0,
        1.0 / 385.0,
        -1.0 / 5544.0,
    ];
    let g = f.grid();
    let n = g.n();
    let h = g.dx();
    let v = f.values();
    let mut out = vec![0.0; g.len()];
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let mut acc = 0.0;
                for (o, w) in W.iter().enumerate() {
                    let s = o + 1;
                    let (p, m) = match axis {
                        0 => (g.index((i + s) % n, j, k), g.index((i + n - s) % n, j, k)),
                        1 => (g.index(i, (j + s) % n, k), g.index(i, (j + n - s) % n, k)),
                        _ => (g.index(i, j, (k + s) % n), g.index(i, j, (k + n - s) % n)),
                    };
                    acc += w * (v[p] - v[m]);
                }
                out[g.index(i, j, k)] = acc / h;
            }
        }
    }
    ScalarField::from_values(g, out)
}

pub fn fd_gradient(f: &ScalarField) -> VectorField {
    VectorField::new(fd_derivative(f, 0), fd_derivative(f, 1), fd_derivative(f, 2))
}

pub fn fd_divergence(v: &VectorField) -> ScalarField {
    let [x, y, z] = v.components();
    &(&fd_derivative(x, 0) + &fd_derivative(y, 1)) + &fd_derivative(z, 2)
}
