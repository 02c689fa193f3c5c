use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::spectral::{curl, divergence, gradient, Grid, ScalarField, VectorField};

use super::recipe::{sample_jacobian, sample_vector, ManufacturedFieldSet, VectorRecipe};

/// A recipe set sampled on a grid, with every first derivative taken in
/// closed form.
pub struct Sampled {
    pub grid: Grid,
    pub rho: ScalarField,
    pub grad_rho: VectorField,
    /// General velocity `∇×A + ∇φ`.
    pub u: VectorField,
    pub jac_u: [[ScalarField; 3]; 3],
    pub u_sol: VectorField,
    pub jac_u_sol: [[ScalarField; 3]; 3],
    pub pressure: ScalarField,
    pub grad_p: VectorField,
    pub energy: ScalarField,
    pub b: VectorField,
    pub jac_b: [[ScalarField; 3]; 3],
    pub rate: ScalarField,
    pub grad_rate: VectorField,
}

impl Sampled {
    pub fn new(fields: &ManufacturedFieldSet, grid: &Grid) -> Self {
        let sample = |v: &VectorRecipe| (sample_vector(v, grid), sample_jacobian(v, grid));
        let (u, jac_u) = sample(&fields.u());
        let (u_sol, jac_u_sol) = sample(&fields.u_solenoidal());
        let (b, jac_b) = sample(&fields.b());
        Self {
            grid: grid.clone(),
            rho: fields.rho.sample(grid),
            grad_rho: fields.rho.sample_gradient(grid),
            u,
            jac_u,
            u_sol,
            jac_u_sol,
            pressure: fields.pressure.sample(grid),
            grad_p: fields.pressure.sample_gradient(grid),
            energy: fields.energy.sample(grid),
            b,
            jac_b,
            rate: fields.material_rate.sample(grid),
            grad_rate: fields.material_rate.sample_gradient(grid),
        }
    }
}

/// `∇×v` from a closed-form Jacobian `[i][j] = ∂v_i/∂x_j`.
fn jacobian_curl(j: &[[ScalarField; 3]; 3]) -> VectorField {
    VectorField::new(&j[2][1] - &j[1][2], &j[0][2] - &j[2][0], &j[1][0] - &j[0][1])
}

fn jacobian_divergence(j: &[[ScalarField; 3]; 3]) -> ScalarField {
    &(&j[0][0] + &j[1][1]) + &j[2][2]
}

/// `(a·∇)v`, pointwise.
fn directional(a: &VectorField, j: &[[ScalarField; 3]; 3]) -> VectorField {
    let [ax, ay, az] = a.components();
    let row = |i: usize| {
        let mut out = j[i][0].mul_pointwise(ax);
        out.axpy(1.0, &j[i][1].mul_pointwise(ay));
        out.axpy(1.0, &j[i][2].mul_pointwise(az));
        out
    };
    VectorField::new(row(0), row(1), row(2))
}

/// `∇(½|v|²)_j = Σ_i v_i ∂_j v_i`, pointwise.
fn half_norm_gradient(v: &VectorField, j: &[[ScalarField; 3]; 3]) -> VectorField {
    let [vx, vy, vz] = v.components();
    let col = |c: usize| {
        let mut out = j[0][c].mul_pointwise(vx);
        out.axpy(1.0, &j[1][c].mul_pointwise(vy));
        out.axpy(1.0, &j[2][c].mul_pointwise(vz));
        out
    };
    VectorField::new(col(0), col(1), col(2))
}

/// `∇(ρ⁻¹) = −ρ⁻²∇ρ`, pointwise.
fn inverse_density_gradient(s: &Sampled) -> VectorField {
    s.grad_rho.scale_by_pointwise(&s.rho.map(|r| -1.0 / (r * r)))
}

/// One scalar equation: the listed terms sum to zero.
pub type Equation = Vec<ScalarField>;

/// A pointwise identity evaluated on sampled manufactured fields.
pub trait Identity: Send + Sync {
    fn name(&self) -> &str;
    fn equations(&self, fields: &Sampled) -> Vec<Equation>;
}

/// Built-in identity catalogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `ρω·∇P − u·(∇ρ×∇P) = ∇·{P∇×(ρu)}`
    PerfectDivergence,
    /// `ρ²ω·∇(½|u|²) = ∇·{½ωρ²|u|²} − qρ|u|²`
    KineticEnergyFlux,
    /// `∂t q + u·∇q = ω·∇(Dρ/Dt) − [∇(ρ⁻¹)×∇P]·∇ρ` for solenoidal `u`
    /// driven by `−u·∇u − ρ⁻¹∇P`, with the bracket vanishing on its own.
    ErtelCancellation,
    /// The two forms of `∂t h_c` under the compressible MHD equations.
    CrossHelicityForms,
    /// `∂t h_c + h_c∇·u + ∇·J_c = −½q_c|u|²`
    CrossHelicityBudget,
    /// `∇(ρ⁻¹)×∇P = 0` for `P = Kρ^γ`, closed-form chain rule.
    BarotropicCrossProduct,
    /// `∇(ρ⁻¹)×∇P = 0` for `P = ρ²`, with `∇P` taken spectrally.
    BarotropicCrossProductSpectral,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::PerfectDivergence,
        IdentityId::KineticEnergyFlux,
        IdentityId::ErtelCancellation,
        IdentityId::CrossHelicityForms,
        IdentityId::CrossHelicityBudget,
        IdentityId::BarotropicCrossProduct,
        IdentityId::BarotropicCrossProductSpectral,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::PerfectDivergence => "perfect-divergence",
            IdentityId::KineticEnergyFlux => "kinetic-energy-flux",
            IdentityId::ErtelCancellation => "ertel-cancellation",
            IdentityId::CrossHelicityForms => "cross-helicity-forms",
            IdentityId::CrossHelicityBudget => "cross-helicity-budget",
            IdentityId::BarotropicCrossProduct => "barotropic-cross-product",
            IdentityId::BarotropicCrossProductSpectral => "barotropic-cross-product-spectral",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        IdentityId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| Error::UnknownIdentity(s.to_owned()))
    }
}

/// Default polytropic closure of the chain-rule cross-product check.
const POLYTROPIC_GAMMA: f64 = 1.4;

impl Identity for IdentityId {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn equations(&self, s: &Sampled) -> Vec<Equation> {
        match self {
            IdentityId::PerfectDivergence => perfect_divergence(s),
            IdentityId::KineticEnergyFlux => kinetic_energy_flux(s),
            IdentityId::ErtelCancellation => ertel_cancellation(s),
            IdentityId::CrossHelicityForms => {
                let mut eq = cross_helicity_first_form(s);
                eq.extend(cross_helicity_second_form(s).into_iter().map(|t| -&t));
                vec![eq]
            }
            IdentityId::CrossHelicityBudget => cross_helicity_budget(s),
            IdentityId::BarotropicCrossProduct => {
                let dp_drho = s.rho.map(|r| POLYTROPIC_GAMMA * r.powf(POLYTROPIC_GAMMA - 1.0));
                cross_product_terms(&inverse_density_gradient(s), &s.grad_rho.scale_by_pointwise(&dp_drho))
            }
            IdentityId::BarotropicCrossProductSpectral => {
                let p = s.rho.mul_pointwise(&s.rho);
                cross_product_terms(&inverse_density_gradient(s), &gradient(&p))
            }
        }
    }
}

/// `a×b` as three equations `a_j b_k − a_k b_j = 0`.
fn cross_product_terms(a: &VectorField, b: &VectorField) -> Vec<Equation> {
    let [ax, ay, az] = a.components();
    let [bx, by, bz] = b.components();
    vec![
        vec![ay.mul_pointwise(bz), -&az.mul_pointwise(by)],
        vec![az.mul_pointwise(bx), -&ax.mul_pointwise(bz)],
        vec![ax.mul_pointwise(by), -&ay.mul_pointwise(bx)],
    ]
}

fn perfect_divergence(s: &Sampled) -> Vec<Equation> {
    let omega = jacobian_curl(&s.jac_u);
    // ∇×(ρu) = ∇ρ×u + ρω
    let curl_m = &s.grad_rho.cross_pointwise(&s.u) + &omega.scale_by_pointwise(&s.rho);
    vec![vec![
        omega.scale_by_pointwise(&s.rho).dot_pointwise(&s.grad_p),
        -&s.u.dot_pointwise(&s.grad_rho.cross_pointwise(&s.grad_p)),
        -&divergence(&curl_m.scale_by_pointwise(&s.pressure)),
    ]]
}

fn kinetic_energy_flux(s: &Sampled) -> Vec<Equation> {
    let omega = jacobian_curl(&s.jac_u);
    let rho2 = s.rho.mul_pointwise(&s.rho);
    let u2 = s.u.norm_sq_pointwise();
    let q = omega.dot_pointwise(&s.grad_rho);
    let flux = omega.scale_by_pointwise(&rho2.mul_pointwise(&u2).scaled(0.5));
    vec![vec![
        rho2.mul_pointwise(&omega.dot_pointwise(&half_norm_gradient(&s.u, &s.jac_u))),
        -&divergence(&flux),
        q.mul_pointwise(&s.rho).mul_pointwise(&u2),
    ]]
}

fn ertel_cancellation(s: &Sampled) -> Vec<Equation> {
    let u = &s.u_sol;
    let omega = jacobian_curl(&s.jac_u_sol);
    let advection = directional(u, &s.jac_u_sol);
    let baroclinic = inverse_density_gradient(s).cross_pointwise(&s.grad_p);
    // ∂t ω = −∇×(u·∇u) − ∇(ρ⁻¹)×∇P and ∂t ρ = −u·∇ρ + Dρ/Dt
    let rho_t = &(-&u.dot_pointwise(&s.grad_rho)) + &s.rate;
    let q = omega.dot_pointwise(&s.grad_rho);
    vec![vec![
        -&curl(&advection).dot_pointwise(&s.grad_rho),
        -&baroclinic.dot_pointwise(&s.grad_rho),
        omega.dot_pointwise(&gradient(&rho_t)),
        u.dot_pointwise(&gradient(&q)),
        -&omega.dot_pointwise(&s.grad_rate),
    ]]
}

/// `−B·{B×∇×B + ∇P + ρu∇·u + u·∇(ρu)} + ρu·{B·∇u − u·∇B − B∇·u}`, term by term.
fn cross_helicity_first_form(s: &Sampled) -> Equation {
    let (u, b, rho) = (&s.u, &s.b, &s.rho);
    let div_u = jacobian_divergence(&s.jac_u);
    let curl_b = jacobian_curl(&s.jac_b);
    let ub = u.dot_pointwise(b);
    let rho_ub = rho.mul_pointwise(&ub);
    // u·∇(ρu) = (u·∇ρ)u + ρ(u·∇u)
    let u_grad_m = &u.scale_by_pointwise(&u.dot_pointwise(&s.grad_rho))
        + &directional(u, &s.jac_u).scale_by_pointwise(rho);
    let m = u.scale_by_pointwise(rho);
    vec![
        -&b.dot_pointwise(&b.cross_pointwise(&curl_b)),
        -&b.dot_pointwise(&s.grad_p),
        -&rho_ub.mul_pointwise(&div_u),
        -&b.dot_pointwise(&u_grad_m),
        m.dot_pointwise(&directional(b, &s.jac_u)),
        -&m.dot_pointwise(&directional(u, &s.jac_b)),
        -&rho_ub.mul_pointwise(&div_u),
    ]
}

/// `−2h_c∇·u − u·∇h_c − B·∇P + ρB·∇(½|u|²)`, term by term.
fn cross_helicity_second_form(s: &Sampled) -> Equation {
    let (u, b, rho) = (&s.u, &s.b, &s.rho);
    let div_u = jacobian_divergence(&s.jac_u);
    let h = rho.mul_pointwise(&u.dot_pointwise(b));
    vec![
        h.mul_pointwise(&div_u).scaled(-2.0),
        -&u.dot_pointwise(&gradient(&h)),
        -&b.dot_pointwise(&s.grad_p),
        rho.mul_pointwise(&b.dot_pointwise(&half_norm_gradient(u, &s.jac_u))),
    ]
}

fn cross_helicity_budget(s: &Sampled) -> Vec<Equation> {
    let (u, b, rho) = (&s.u, &s.b, &s.rho);
    let div_u = jacobian_divergence(&s.jac_u);
    let h = rho.mul_pointwise(&u.dot_pointwise(b));
    let u2 = u.norm_sq_pointwise();
    let qc = b.dot_pointwise(&s.grad_rho);
    let weight = &s.pressure - &rho.mul_pointwise(&u2).scaled(0.5);
    let flux = &u.scale_by_pointwise(&h) + &b.scale_by_pointwise(&weight);
    let mut eq = cross_helicity_second_form(s);
    eq.push(h.mul_pointwise(&div_u));
    eq.push(divergence(&flux));
    eq.push(qc.mul_pointwise(&u2).scaled(0.5));
    vec![eq]
}
