use std::fmt;

use rayon::prelude::*;

use crate::spectral::{Grid, ScalarField};

use super::identities::{Identity, IdentityId, Sampled};
use super::recipe::{generate, ManufacturedFieldSet};

/// Pass threshold on `residual / scale`.
pub const IDENTITY_TOLERANCE: f64 = 1e-11;

/// Grid sizes used by [`verify_all`].
pub const VERIFY_GRID_SIZES: [usize; 2] = [32, 64];

/// Monomials per recipe used by [`verify_all`].
pub const DEFAULT_MODE_BUDGET: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    /// Max-norm of the summed terms.
    pub residual: f64,
    /// Max-norm of the largest single term.
    pub scale: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn from_equations(equations: &[Vec<ScalarField>]) -> Self {
        let mut residual: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for terms in equations {
            let Some(first) = terms.first() else { continue };
            let mut sum = first.clone();
            for t in &terms[1..] {
                sum.axpy(1.0, t);
            }
            residual = residual.max(sum.max_abs());
            scale = terms.iter().map(ScalarField::max_abs).fold(scale, f64::max);
        }
        let passed = residual.is_finite() && residual <= IDENTITY_TOLERANCE * scale;
        Self { residual, scale, passed }
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 { self.residual / self.scale } else { self.residual }
    }
}

pub fn verify_identity(identity: &dyn Identity, fields: &ManufacturedFieldSet, grid: &Grid) -> IdentityCheck {
    verify_sampled(identity, &Sampled::new(fields, grid))
}

pub fn verify_sampled(identity: &dyn Identity, sampled: &Sampled) -> IdentityCheck {
    IdentityCheck::from_equations(&identity.equations(sampled))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub identity: String,
    pub seed: u64,
    pub n: usize,
    pub check: IdentityCheck,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.check.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows.iter().filter(|r| !r.check.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<34} {:>5} {:>4} {:>12} {:>12} {:>12}  verdict", "identity", "seed", "n", "residual", "scale", "relative")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<34} {:>5} {:>4} {:>12.3e} {:>12.3e} {:>12.3e}  {}",
                r.identity,
                r.seed,
                r.n,
                r.check.residual,
                r.check.scale,
                r.check.relative(),
                if r.check.passed { "pass" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Every built-in identity over seeds `0..seed_count` at n = 32 and 64.
pub fn verify_all(seed_count: usize) -> VerifyReport {
    let catalogue: Vec<&dyn Identity> = IdentityId::ALL.iter().map(|id| id as &dyn Identity).collect();
    verify_catalogue(seed_count, &catalogue, DEFAULT_MODE_BUDGET, &VERIFY_GRID_SIZES)
}

/// Rows are ordered by seed, then grid size, then catalogue position.
pub fn verify_catalogue(
    seed_count: usize,
    catalogue: &[&dyn Identity],
    mode_budget: usize,
    sizes: &[usize],
) -> VerifyReport {
    if catalogue.is_empty() {
        return VerifyReport::default();
    }
    let grids: Vec<Grid> = sizes.iter().map(|&n| Grid::periodic(n).expect("verification grid sizes are valid")).collect();
    let cases: Vec<(u64, &Grid)> =
        (0..seed_count as u64).flat_map(|seed| grids.iter().map(move |g| (seed, g))).collect();
    let rows = cases
        .par_iter()
        .flat_map_iter(|&(seed, grid)| {
            let sampled = Sampled::new(&generate(seed, mode_budget), grid);
            catalogue
                .iter()
                .map(|id| VerifyRow {
                    identity: id.name().to_owned(),
                    seed,
                    n: grid.n(),
                    check: verify_sampled(*id, &sampled),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    VerifyReport { rows }
}
