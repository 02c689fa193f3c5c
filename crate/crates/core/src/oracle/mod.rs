//! Manufactured trig-polynomial fields with closed-form derivatives, and
//! machine-precision checks of the pointwise identities behind the
//! helicity budgets.

mod identities;
mod recipe;
mod verify;

pub use identities::{Equation, Identity, IdentityId, Sampled};
pub use recipe::{
    curl_recipe, generate, generate_orthogonal, gradient_recipe, sample_jacobian, sample_vector, Basis, Factor,
    ManufacturedFieldSet, Monomial, TrigSum, VectorRecipe, MAX_RECIPE_MODE,
};
pub use verify::{
    verify_all, verify_catalogue, verify_identity, verify_sampled, IdentityCheck, VerifyReport, VerifyRow,
    DEFAULT_MODE_BUDGET, IDENTITY_TOLERANCE, VERIFY_GRID_SIZES,
};
