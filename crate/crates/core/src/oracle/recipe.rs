use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{Grid, ScalarField, VectorField};

/// Largest wavenumber used by generated recipes.
pub const MAX_RECIPE_MODE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Sin,
    Cos,
}

/// `sin(kξ)` or `cos(kξ)` in one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub basis: Basis,
    pub k: i32,
}

impl Factor {
    pub const ONE: Factor = Factor { basis: Basis::Cos, k: 0 };

    pub fn sin(k: i32) -> Self {
        Self { basis: Basis::Sin, k }
    }

    pub fn cos(k: i32) -> Self {
        Self { basis: Basis::Cos, k }
    }

    fn eval(self, xi: f64) -> f64 {
        let arg = f64::from(self.k) * xi;
        match self.basis {
            Basis::Sin => arg.sin(),
            Basis::Cos => arg.cos(),
        }
    }

    /// `(sign·k, derivative factor)`
    fn derivative(self) -> (f64, Factor) {
        let k = f64::from(self.k);
        match self.basis {
            Basis::Sin => (k, Factor::cos(self.k)),
            Basis::Cos => (-k, Factor::sin(self.k)),
        }
    }
}

/// `c · f_x(ξ_x) f_y(ξ_y) f_z(ξ_z)` with a rational coefficient `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub factors: [Factor; 3],
}

/// Finite sum of trig monomials in the scaled coordinate `ξ = 2πx/L`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigSum {
    pub terms: Vec<Monomial>,
}

impl TrigSum {
    pub fn constant(c: f64) -> Self {
        Self { terms: vec![Monomial { coeff: c, factors: [Factor::ONE; 3] }] }
    }

    pub fn monomial(coeff: f64, factors: [Factor; 3]) -> Self {
        Self { terms: vec![Monomial { coeff, factors }] }
    }

    pub fn plus(mut self, other: &TrigSum) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        for t in &mut self.terms {
            t.coeff *= factor;
        }
        self
    }

    pub fn eval(&self, xi: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * t.factors[0].eval(xi[0]) * t.factors[1].eval(xi[1]) * t.factors[2].eval(xi[2]))
            .sum()
    }

    /// Closed-form `∂/∂ξ_axis`.
    pub fn derivative(&self, axis: usize) -> TrigSum {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let (scale, f) = t.factors[axis].derivative();
                if scale == 0.0 {
                    return None;
                }
                let mut factors = t.factors;
                factors[axis] = f;
                Some(Monomial { coeff: t.coeff * scale, factors })
            })
            .collect();
        TrigSum { terms }
    }

    /// `Σ |c|`, a bound on the sum.
    pub fn bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    pub fn max_mode(&self) -> i32 {
        self.terms.iter().flat_map(|t| t.factors.iter().map(|f| f.k.abs())).max().unwrap_or(0)
    }

    /// Samples on the lattice via per-axis tables.
    pub fn sample(&self, grid: &Grid) -> ScalarField {
        let n = grid.n();
        let xi: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let mut values = vec![0.0; grid.len()];
        for t in &self.terms {
            let table: Vec<Vec<f64>> = t.factors.iter().map(|f| xi.iter().map(|&x| f.eval(x)).collect()).collect();
            for k in 0..n {
                for j in 0..n {
                    let c = t.coeff * table[1][j] * table[2][k];
                    let row = &mut values[n * (j + n * k)..n * (j + n * k) + n];
                    for (v, fx) in row.iter_mut().zip(&table[0]) {
                        *v += c * fx;
                    }
                }
            }
        }
        ScalarField::from_values(grid, values)
    }

    /// Closed-form physical derivative `∂/∂x_axis` sampled on `grid`.
    pub fn sample_derivative(&self, axis: usize, grid: &Grid) -> ScalarField {
        self.derivative(axis).sample(grid).scaled(2.0 * PI / grid.length())
    }

    pub fn sample_gradient(&self, grid: &Grid) -> VectorField {
        VectorField::new(
            self.sample_derivative(0, grid),
            self.sample_derivative(1, grid),
            self.sample_derivative(2, grid),
        )
    }
}

impl fmt::Display for TrigSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            for (factor, axis) in t.factors.iter().zip(["x", "y", "z"]) {
                if factor.k == 0 {
                    continue;
                }
                let name = if factor.basis == Basis::Sin { "sin" } else { "cos" };
                write!(f, "·{name}({}{axis})", factor.k)?;
            }
        }
        Ok(())
    }
}

/// Three recipes, one per component.
pub type VectorRecipe = [TrigSum; 3];

/// `∇×A` in closed form, in ξ-derivatives.
pub fn curl_recipe(a: &VectorRecipe) -> VectorRecipe {
    [
        a[2].derivative(1).plus(&a[1].derivative(2).scaled(-1.0)),
        a[0].derivative(2).plus(&a[2].derivative(0).scaled(-1.0)),
        a[1].derivative(0).plus(&a[0].derivative(1).scaled(-1.0)),
    ]
}

pub fn gradient_recipe(s: &TrigSum) -> VectorRecipe {
    [s.derivative(0), s.derivative(1), s.derivative(2)]
}

pub fn sample_vector(v: &VectorRecipe, grid: &Grid) -> VectorField {
    VectorField::new(v[0].sample(grid), v[1].sample(grid), v[2].sample(grid))
}

/// `∂v_i/∂x_j` in closed form, indexed `[i][j]`.
pub fn sample_jacobian(v: &VectorRecipe, grid: &Grid) -> [[ScalarField; 3]; 3] {
    v.each_ref().map(|c| [0, 1, 2].map(|axis| c.sample_derivative(axis, grid)))
}

/// Manufactured fields with closed-form derivatives. Recipes are written
/// in `ξ = 2πx/L`; vector potentials are kept so that curls stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedFieldSet {
    pub seed: u64,
    pub mode_budget: usize,
    /// `1 + Σ`, with `Σ|c| ≤ ½`.
    pub rho: TrigSum,
    /// Velocity potential `A` with `u_s = ∇×A` (ξ-derivatives).
    pub velocity_potential: VectorRecipe,
    /// Scalar potential `φ` of the compressive part.
    pub velocity_scalar: TrigSum,
    pub pressure: TrigSum,
    /// `1 + Σ`, with `Σ|c| ≤ ½`.
    pub energy: TrigSum,
    pub field_potential: VectorRecipe,
    /// Stand-in for `Dρ/Dt`.
    pub material_rate: TrigSum,
}

impl ManufacturedFieldSet {
    /// Solenoidal velocity `∇×A`.
    pub fn u_solenoidal(&self) -> VectorRecipe {
        curl_recipe(&self.velocity_potential)
    }

    /// General velocity `∇×A + ∇φ`.
    pub fn u(&self) -> VectorRecipe {
        let s = self.u_solenoidal();
        let g = gradient_recipe(&self.velocity_scalar);
        [s[0].clone().plus(&g[0]), s[1].clone().plus(&g[1]), s[2].clone().plus(&g[2])]
    }

    pub fn b(&self) -> VectorRecipe {
        curl_recipe(&self.field_potential)
    }

    pub fn max_mode(&self) -> i32 {
        let mut all = vec![&self.rho, &self.velocity_scalar, &self.pressure, &self.energy, &self.material_rate];
        all.extend(self.velocity_potential.iter());
        all.extend(self.field_potential.iter());
        all.into_iter().map(TrigSum::max_mode).max().unwrap_or(0)
    }
}

fn random_factor(rng: &mut ChaCha8Rng) -> Factor {
    let k = rng.random_range(0..=MAX_RECIPE_MODE);
    if k == 0 || rng.random_bool(0.5) { Factor::cos(k) } else { Factor::sin(k) }
}

/// Monomial with at least one non-constant factor and coefficient
/// `±p/denominator`, `p ∈ {1,…,4}`.
fn random_monomial(rng: &mut ChaCha8Rng, denominator: f64) -> Monomial {
    let mut factors = [random_factor(rng), random_factor(rng), random_factor(rng)];
    if factors.iter().all(|f| f.k == 0) {
        let axis = rng.random_range(0..3);
        let k = rng.random_range(1..=MAX_RECIPE_MODE);
        factors[axis] = if rng.random_bool(0.5) { Factor::cos(k) } else { Factor::sin(k) };
    }
    let p = f64::from(rng.random_range(1..=4u8));
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    Monomial { coeff: sign * p / denominator, factors }
}

fn random_sum(rng: &mut ChaCha8Rng, count: usize, denominator: f64) -> TrigSum {
    TrigSum { terms: (0..count).map(|_| random_monomial(rng, denominator)).collect() }
}

/// `1 + Σ` with `Σ|c| ≤ ½`.
fn random_positive(rng: &mut ChaCha8Rng, count: usize) -> TrigSum {
    TrigSum::constant(1.0).plus(&random_sum(rng, count, 8.0 * count as f64))
}

fn random_vector(rng: &mut ChaCha8Rng, count: usize) -> VectorRecipe {
    [random_sum(rng, count, 8.0), random_sum(rng, count, 8.0), random_sum(rng, count, 8.0)]
}

/// Reproducible recipe set with `mode_budget` monomials per scalar recipe.
///
/// # Panics
/// If `mode_budget` is zero.
pub fn generate(seed: u64, mode_budget: usize) -> ManufacturedFieldSet {
    assert!(mode_budget >= 1, "mode_budget must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = random_positive(&mut rng, mode_budget);
    let velocity_potential = random_vector(&mut rng, mode_budget);
    let velocity_scalar = random_sum(&mut rng, mode_budget, 8.0);
    let pressure = TrigSum::constant(1.0).plus(&random_sum(&mut rng, mode_budget, 8.0));
    let energy = random_positive(&mut rng, mode_budget);
    let field_potential = random_vector(&mut rng, mode_budget);
    let material_rate = random_sum(&mut rng, mode_budget, 8.0);
    ManufacturedFieldSet {
        seed,
        mode_budget,
        rho,
        velocity_potential,
        velocity_scalar,
        pressure,
        energy,
        field_potential,
        material_rate,
    }
}

/// Variant with `ρ = ρ(z)` and vorticity confined to horizontal planes,
/// so `ω·∇ρ ≡ 0`: `u = (a(z), b(z), w(x, y))`.
pub fn generate_orthogonal(seed: u64, mode_budget: usize) -> ManufacturedFieldSet {
    assert!(mode_budget >= 1, "mode_budget must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let only = |axes: &[usize], count: usize, denominator: f64, rng: &mut ChaCha8Rng| {
        let mut sum = random_sum(rng, count, denominator);
        for t in &mut sum.terms {
            for axis in 0..3 {
                if !axes.contains(&axis) {
                    t.factors[axis] = Factor::ONE;
                }
            }
            if t.factors.iter().all(|f| f.k == 0) {
                t.factors[axes[0]] = Factor::sin(1);
            }
        }
        sum
    };
    let rho = TrigSum::constant(1.0).plus(&only(&[2], mode_budget, 8.0 * mode_budget as f64, &mut rng));
    // A = (β(z) + ∂yW, −α(z) − ∂xW, 0) gives ∇×A = (α′, β′, −ΔW).
    let alpha = only(&[2], mode_budget, 8.0, &mut rng);
    let beta = only(&[2], mode_budget, 8.0, &mut rng);
    let w = only(&[0, 1], mode_budget, 8.0, &mut rng);
    let velocity_potential = [
        beta.plus(&w.derivative(1)),
        alpha.scaled(-1.0).plus(&w.derivative(0).scaled(-1.0)),
        TrigSum::default(),
    ];
    let pressure = TrigSum::constant(1.0).plus(&random_sum(&mut rng, mode_budget, 8.0));
    let energy = random_positive(&mut rng, mode_budget);
    let field_potential = random_vector(&mut rng, mode_budget);
    let material_rate = random_sum(&mut rng, mode_budget, 8.0);
    ManufacturedFieldSet {
        seed,
        mode_budget,
        rho,
        velocity_potential,
        velocity_scalar: TrigSum::default(),
        pressure,
        energy,
        field_potential,
        material_rate,
    }
}
