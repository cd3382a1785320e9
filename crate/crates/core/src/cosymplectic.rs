//! Cosymplectic structures on Lie algebras: verification, Reeb and
//! Hamiltonian solvers, the splitting obstruction for Killing Reeb fields,
//! and deformations of type I and II.
//!
//! A pair `(η, ω)` on a `(2n+1)`-dimensional algebra is cosymplectic when
//! `dη = 0`, `dω = 0` and `η∧ωⁿ ≠ 0`. The Reeb field is the unique vector
//! with `ι_R η = 1` and `ι_R ω = 0`.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exterior::{solve_contraction_system, Form, LieAlgebra, Vector};
use crate::linalg::{kernel_symbolic, LinearSolution};
use crate::scalar::{Rational, SymbolicReal};

/// Per-condition verdict of a cosymplectic-structure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosymplecticVerdict {
    /// Half the kernel dimension: `dim = 2n + 1`.
    pub n: usize,
    pub d_eta_zero: bool,
    pub d_omega_zero: bool,
    pub volume_nonzero: bool,
    pub is_cosymplectic: bool,
    /// Top coefficient of `η∧ωⁿ` over the volume basis form.
    pub volume: SymbolicReal,
}

/// Checks the definition on a raw triple. Odd dimension is required; the
/// Jacobi identity must hold for the differential to mean anything.
pub fn verify_cosymplectic(
    g: &LieAlgebra,
    eta: &Form,
    omega: &Form,
) -> Result<CosymplecticVerdict> {
    if g.dim().is_multiple_of(2) {
        return Err(Error::Input(format!(
            "cosymplectic structures need odd dimension, got {}",
            g.dim()
        )));
    }
    if eta.dim() != g.dim() || omega.dim() != g.dim() {
        return Err(Error::Dimension(
            "forms do not live on the given algebra".into(),
        ));
    }
    if eta.degree() != 1 || omega.degree() != 2 {
        return Err(Error::Input(format!(
            "expected degrees (1, 2), got ({}, {})",
            eta.degree(),
            omega.degree()
        )));
    }
    let jacobi = g.jacobi_check();
    if !jacobi.holds {
        return Err(Error::Precondition(format!(
            "bracket table violates the Jacobi identity on basis triple {:?}",
            jacobi.witness.map(|w| [w[0] + 1, w[1] + 1, w[2] + 1])
        )));
    }
    let n = (g.dim() - 1) / 2;
    let d_eta_zero = g.d(eta)?.is_zero();
    let d_omega_zero = g.d(omega)?.is_zero();
    let volume = eta.wedge(&omega.wedge_pow(n)?)?.top_coeff();
    let volume_nonzero = !volume.is_zero();
    Ok(CosymplecticVerdict {
        n,
        d_eta_zero,
        d_omega_zero,
        volume_nonzero,
        is_cosymplectic: d_eta_zero && d_omega_zero && volume_nonzero,
        volume,
    })
}

/// Solves `ι_R η = 1`, `ι_R ω = 0`. The solver reports uniqueness; a
/// non-unique or inconsistent system contradicts the cosymplectic
/// invariants and surfaces as an integrity error.
pub fn reeb_field(g: &LieAlgebra, eta: &Form, omega: &Form) -> Result<Vector> {
    let zero_target = Form::zero(g.dim(), 1);
    let solution = solve_contraction_system(
        omega,
        &zero_target,
        &[eta.one_form_row()?],
        &[SymbolicReal::one()],
    )?;
    match solution {
        LinearSolution::Unique(x) => Ok(Vector::new(x)),
        LinearSolution::NoSolution => Err(Error::Integrity(
            "Reeb system has no rational solution; the pair is not cosymplectic over this scalar field"
                .into(),
        )),
        LinearSolution::NonUnique { kernel, .. } => Err(Error::Integrity(format!(
            "Reeb system is underdetermined (kernel dimension {}); the pair is not cosymplectic",
            kernel.len()
        ))),
    }
}

/// A verified cosymplectic pair with its Reeb field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosymplecticPair {
    algebra: LieAlgebra,
    eta: Form,
    omega: Form,
    n: usize,
    reeb: Vector,
}

impl CosymplecticPair {
    pub fn new(algebra: LieAlgebra, eta: Form, omega: Form) -> Result<Self> {
        let verdict = verify_cosymplectic(&algebra, &eta, &omega)?;
        if !verdict.is_cosymplectic {
            let mut failed = Vec::new();
            if !verdict.d_eta_zero {
                failed.push("dη ≠ 0");
            }
            if !verdict.d_omega_zero {
                failed.push("dω ≠ 0");
            }
            if !verdict.volume_nonzero {
                failed.push("η∧ωⁿ = 0");
            }
            return Err(Error::Precondition(format!(
                "pair is not cosymplectic: {}",
                failed.join(", ")
            )));
        }
        let reeb = reeb_field(&algebra, &eta, &omega)?;
        Ok(Self {
            algebra,
            eta,
            omega,
            n: verdict.n,
            reeb,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn eta(&self) -> &Form {
        &self.eta
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reeb(&self) -> &Vector {
        &self.reeb
    }

    /// Top coefficient of the volume form `η∧ωⁿ`.
    pub fn volume(&self) -> Result<SymbolicReal> {
        Ok(self.eta.wedge(&self.omega.wedge_pow(self.n)?)?.top_coeff())
    }
}

/// The unique `X` with `η(X) = 0` and `ι_X ω = df`, for a closed 1-form
/// `df` invariant under the Reeb flow (`ι_R df = 0`).
pub fn hamiltonian_vector(pair: &CosymplecticPair, df: &Form) -> Result<Vector> {
    if df.degree() != 1 || df.dim() != pair.algebra.dim() {
        return Err(Error::Input(
            "Hamiltonian data must be a 1-form on the same algebra".into(),
        ));
    }
    if !pair.algebra.d(df)?.is_zero() {
        return Err(Error::Precondition("df is not closed".into()));
    }
    let along_reeb = df.pair(&pair.reeb)?;
    if !along_reeb.is_zero() {
        return Err(Error::Precondition(format!(
            "not Reeb-basic: ι_R df = {along_reeb} ≠ 0 (the Reeb direction is never Hamiltonian)"
        )));
    }
    let solution = solve_contraction_system(
        &pair.omega,
        df,
        &[pair.eta.one_form_row()?],
        &[SymbolicReal::zero()],
    )?;
    match solution {
        LinearSolution::Unique(x) => Ok(Vector::new(x)),
        LinearSolution::NoSolution => Err(Error::Integrity(
            "Hamiltonian system inconsistent; pair integrity violated".into(),
        )),
        LinearSolution::NonUnique { kernel, .. } => Err(Error::Integrity(format!(
            "Hamiltonian system underdetermined (kernel dimension {}); pair integrity violated",
            kernel.len()
        ))),
    }
}

/// Necessary condition for an adapted metric with Killing Reeb field: the
/// algebra must split as `ker η ⊕ ⟨R⟩` with `R` central on `ker η`.
///
/// `splits = false` rules such a metric out; `true` proves nothing beyond
/// the splitting itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingVerdict {
    pub ker_eta_subalgebra: bool,
    pub reeb_central_on_ker: bool,
    pub splits: bool,
}

pub fn splitting_obstruction(pair: &CosymplecticPair) -> Result<SplittingVerdict> {
    let kernel = pair.algebra.one_form_kernel(&pair.eta)?;
    let mut ker_eta_subalgebra = true;
    'outer: for (a, u) in kernel.iter().enumerate() {
        for v in &kernel[a + 1..] {
            let w = pair.algebra.bracket(u, v)?;
            if !pair.eta.pair(&w)?.is_zero() {
                ker_eta_subalgebra = false;
                break 'outer;
            }
        }
    }
    let reeb_central_on_ker = kernel
        .iter()
        .map(|u| pair.algebra.bracket(&pair.reeb, u))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(Vector::is_zero);
    Ok(SplittingVerdict {
        ker_eta_subalgebra,
        reeb_central_on_ker,
        splits: ker_eta_subalgebra && reeb_central_on_ker,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformationKind {
    TypeI,
    TypeII,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeformationParameter {
    /// Type I: a cosymplectic vector field `θ` with `1 + η(θ) > 0`.
    VectorField(Vector),
    /// Type II: a closed Reeb-basic 1-form `β`.
    BasicForm(Form),
}

/// Immutable audit record of a deformation: both pairs are verified, so a
/// record is evidence the deformation closed up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationRecord {
    pub kind: DeformationKind,
    pub input: CosymplecticPair,
    pub parameter: DeformationParameter,
    pub output: CosymplecticPair,
    /// Exact factor relating the volume forms: `η′∧ω′ⁿ = scale · η∧ωⁿ`.
    pub volume_scale: Rational,
}

/// Type I deformation: `η′ = η/(1+η(θ))`, `ω′ = (ω + ι_θω∧η′)/(1+η(θ))`.
///
/// Requires `θ` cosymplectic (`L_θη = L_θω = 0`) and a rational
/// `1 + η(θ) > 0`; the volume rescales by `(1+η(θ))^{−(n+1)}`.
pub fn deform_type_i(pair: &CosymplecticPair, theta: &Vector) -> Result<DeformationRecord> {
    let eta_theta = pair.eta.pair(theta)?;
    let Some(eta_theta) = eta_theta.as_rational() else {
        return Err(Error::Precondition(
            "η(θ) is not rational; type I deformations need a rational scale".into(),
        ));
    };
    let scale = Rational::one() + eta_theta;
    if !scale.is_positive() {
        return Err(Error::Precondition(format!(
            "1+η(θ) = {scale} ≤ 0 violates the deformation hypothesis"
        )));
    }
    if !pair.algebra.lie_derivative(theta, &pair.eta)?.is_zero()
        || !pair.algebra.lie_derivative(theta, &pair.omega)?.is_zero()
    {
        return Err(Error::Precondition(
            "θ is not cosymplectic: L_θη or L_θω ≠ 0".into(),
        ));
    }
    let inv = scale.recip();
    let eta_new = pair.eta.scale(&inv);
    let correction = pair.omega.contract(theta)?.wedge(&eta_new)?;
    let omega_new = pair.omega.add(&correction)?.scale(&inv);
    let output = CosymplecticPair::new(pair.algebra.clone(), eta_new, omega_new)?;
    let mut volume_scale = Rational::one();
    for _ in 0..=pair.n {
        volume_scale *= &inv;
    }
    Ok(DeformationRecord {
        kind: DeformationKind::TypeI,
        input: pair.clone(),
        parameter: DeformationParameter::VectorField(theta.clone()),
        output,
        volume_scale,
    })
}

/// Type II deformation: `η′ = η + β` for a closed basic 1-form; `ω` and
/// the Reeb field do not change.
pub fn deform_type_ii(pair: &CosymplecticPair, beta: &Form) -> Result<DeformationRecord> {
    if beta.degree() != 1 || beta.dim() != pair.algebra.dim() {
        return Err(Error::Input(
            "type II parameter must be a 1-form on the same algebra".into(),
        ));
    }
    if !pair.algebra.d(beta)?.is_zero() {
        return Err(Error::Precondition(
            "dβ ≠ 0: deformation form must be closed".into(),
        ));
    }
    let along_reeb = beta.pair(&pair.reeb)?;
    if !along_reeb.is_zero() {
        return Err(Error::Precondition(format!(
            "not R-basic: ι_R β = {along_reeb} ≠ 0"
        )));
    }
    let eta_new = pair.eta.add(beta)?;
    let output = CosymplecticPair::new(pair.algebra.clone(), eta_new, pair.omega.clone())?;
    if output.reeb != pair.reeb {
        return Err(Error::Integrity(
            "type II deformation moved the Reeb field".into(),
        ));
    }
    Ok(DeformationRecord {
        kind: DeformationKind::TypeII,
        input: pair.clone(),
        parameter: DeformationParameter::BasicForm(beta.clone()),
        output,
        volume_scale: Rational::one(),
    })
}

/// Constants `ι_X η` per torus generator for a closed invariant 1-form.
///
/// With a fixed point asserted, all constants must vanish (the form is
/// basic); without one, the constants are reported without judgment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TBasicVerdict {
    pub constants: Vec<SymbolicReal>,
    pub is_basic: bool,
    pub fixed_point_asserted: bool,
    /// A fixed point was asserted but a constant is nonzero.
    pub contradiction: bool,
}

pub fn check_t_basic(
    g: &LieAlgebra,
    eta: &Form,
    torus_gens: &[Vector],
    has_fixed_point: bool,
) -> Result<TBasicVerdict> {
    if eta.degree() != 1 {
        return Err(Error::Input("basicness check needs a 1-form".into()));
    }
    if !g.d(eta)?.is_zero() {
        return Err(Error::Precondition("η is not closed".into()));
    }
    for (k, x) in torus_gens.iter().enumerate() {
        if !g.lie_derivative(x, eta)?.is_zero() {
            return Err(Error::Precondition(format!(
                "η is not invariant under generator #{}",
                k + 1
            )));
        }
    }
    let constants: Vec<SymbolicReal> = torus_gens
        .iter()
        .map(|x| eta.pair(x))
        .collect::<Result<_>>()?;
    let is_basic = constants.iter().all(SymbolicReal::is_zero);
    Ok(TBasicVerdict {
        constants,
        is_basic,
        fixed_point_asserted: has_fixed_point,
        contradiction: has_fixed_point && !is_basic,
    })
}

/// `ω(A, B)` for two commuting generators tangent to `ker η` whose
/// contractions with `ω` are closed. For a Hamiltonian torus the orbit
/// tangent spaces are isotropic, so this value is the obstruction to that
/// conclusion at the invariant level.
pub fn orbit_isotropy_defect(
    pair: &CosymplecticPair,
    a: &Vector,
    b: &Vector,
) -> Result<SymbolicReal> {
    if !pair.algebra.bracket(a, b)?.is_zero() {
        return Err(Error::Precondition(
            "[A,B] ≠ 0: generators do not commute".into(),
        ));
    }
    if !pair.eta.pair(a)?.is_zero() || !pair.eta.pair(b)?.is_zero() {
        return Err(Error::Precondition("generators must lie in ker η".into()));
    }
    let ia = pair.omega.contract(a)?;
    let ib = pair.omega.contract(b)?;
    if !pair.algebra.d(&ia)?.is_zero() || !pair.algebra.d(&ib)?.is_zero() {
        return Err(Error::Precondition("ι_Aω and ι_Bω must be closed".into()));
    }
    ia.pair(b)
}

/// Basis of the space of cosymplectic vector fields
/// `{θ : L_θη = 0, L_θω = 0}`, computed over ℚ.
pub fn cosymplectic_vector_space(pair: &CosymplecticPair) -> Result<Vec<Vector>> {
    let dim = pair.algebra.dim();
    // columns: the candidate θ = Σ t_i e_i; rows: every coefficient of
    // L_{e_i}η (degree 1) and L_{e_i}ω (degree 2)
    let mut lie_eta = Vec::with_capacity(dim);
    let mut lie_omega = Vec::with_capacity(dim);
    for i in 0..dim {
        let e = Vector::basis(dim, i);
        lie_eta.push(pair.algebra.lie_derivative(&e, &pair.eta)?);
        lie_omega.push(pair.algebra.lie_derivative(&e, &pair.omega)?);
    }
    let mut rows: Vec<Vec<SymbolicReal>> = Vec::new();
    for j in 0..dim {
        rows.push(lie_eta.iter().map(|f| f.coeff(&[j])).collect());
    }
    for j in 0..dim {
        for k in j + 1..dim {
            rows.push(lie_omega.iter().map(|f| f.coeff(&[j, k])).collect());
        }
    }
    Ok(kernel_symbolic(&rows)?
        .into_iter()
        .map(Vector::new)
        .collect())
}

/// Basis of the closed Reeb-basic 1-forms `{β : dβ = 0, ι_R β = 0}` with
/// rational coefficients; type II parameters are combinations of these
/// (rational or symbol-scaled).
pub fn basic_closed_one_forms(pair: &CosymplecticPair) -> Result<Vec<Form>> {
    let dim = pair.algebra.dim();
    let mut rows: Vec<Vec<SymbolicReal>> = Vec::new();
    // dβ = Σ b_i de^i = 0, one row per degree-2 index
    let d_basis: Vec<Form> = (0..dim)
        .map(|i| pair.algebra.d(&Form::basis(dim, &[i])?))
        .collect::<Result<_>>()?;
    for j in 0..dim {
        for k in j + 1..dim {
            rows.push(d_basis.iter().map(|f| f.coeff(&[j, k])).collect());
        }
    }
    // β(R) = Σ b_i R_i = 0
    rows.push(
        pair.reeb
            .components()
            .iter()
            .map(|c| SymbolicReal::from_rational(c.clone()))
            .collect(),
    );
    let kernel = kernel_symbolic(&rows)?;
    kernel
        .into_iter()
        .map(|coeffs| {
            Form::from_terms(
                dim,
                1,
                coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (vec![i], SymbolicReal::from_rational(c))),
            )
        })
        .collect()
}
