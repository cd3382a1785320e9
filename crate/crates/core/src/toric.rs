//! Toric momentum models for complex projective space: the momentum map
//! with the unit-simplex convention, polytope rescaling under type I
//! deformations, dense-subgroup tests for torus elements, and closed Reeb
//! orbit counting on the associated mapping tori.
//!
//! Convention fixed here: `μ_j = |z_j|² / Σ_{i=0}^n |z_i|²` for `j = 1..n`,
//! so the momentum image of `CPⁿ` is exactly the standard simplex
//! `{x ≥ 0, Σ x_j ≤ 1}` with no 2π or 1/2 factors. The 2-form paired with
//! it in the residual check is the matching multiple of the Fubini–Study
//! form.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cosymplectic::{DeformationKind, DeformationRecord};
use crate::error::{Error, Result};
use crate::linalg::rank_over_q;
use crate::scalar::{rat, Rational, SymbolicReal};

/// Homogeneous coordinates with exact Gaussian-rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    coords: Vec<(Rational, Rational)>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<(Rational, Rational)>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Input("projective point needs coordinates".into()));
        }
        if coords.iter().all(|(re, im)| re.is_zero() && im.is_zero()) {
            return Err(Error::Input(
                "projective point cannot have all-zero coordinates".into(),
            ));
        }
        Ok(Self { coords })
    }

    pub fn from_integers(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&(re, im)| {
                    (
                        Rational::from_integer(re.into()),
                        Rational::from_integer(im.into()),
                    )
                })
                .collect(),
        )
    }

    /// Complex dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[(Rational, Rational)] {
        &self.coords
    }

    fn norms_squared(&self) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|(re, im)| re * re + im * im)
            .collect()
    }
}

/// Momentum value `μ(p) ∈ ℝⁿ` of the standard torus action on `CPⁿ`;
/// lands in the standard simplex.
pub fn cpn_moment(p: &ProjectivePoint) -> Result<Vec<Rational>> {
    let norms = p.norms_squared();
    let total: Rational = norms.iter().fold(Rational::zero(), |acc, v| acc + v);
    Ok(norms[1..].iter().map(|v| v / &total).collect())
}

/// Membership in `{x ∈ ℝⁿ : x_j ≥ 0, Σ x_j ≤ 1}`.
pub fn in_standard_simplex(x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative())
        && x.iter().fold(Rational::zero(), |acc, v| acc + v) <= Rational::one()
}

/// A toric momentum model: dimension, polytope vertices, the constant
/// `η₀(θ)` of a pending type I deformation, and the rotation numbers of a
/// torus element `t = (exp(2πi a_1), …, exp(2πi a_n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentModel {
    n: usize,
    vertices: Vec<Vec<Rational>>,
    eta0_theta: Rational,
    torus_element: Option<Vec<SymbolicReal>>,
}

impl MomentModel {
    /// The `CPⁿ` model: momentum image is the standard simplex with
    /// vertices 0 and the basis vectors.
    pub fn cpn(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("projective dimension must be positive".into()));
        }
        let mut vertices = vec![vec![Rational::zero(); n]];
        for j in 0..n {
            let mut v = vec![Rational::zero(); n];
            v[j] = Rational::one();
            vertices.push(v);
        }
        Ok(Self {
            n,
            vertices,
            eta0_theta: Rational::zero(),
            torus_element: None,
        })
    }

    pub fn with_vertices(mut self, vertices: Vec<Vec<Rational>>) -> Result<Self> {
        if vertices.iter().any(|v| v.len() != self.n) {
            return Err(Error::Input("vertex coordinates must have length n".into()));
        }
        self.vertices = vertices;
        Ok(self)
    }

    pub fn with_eta0_theta(mut self, value: Rational) -> Self {
        self.eta0_theta = value;
        self
    }

    pub fn with_torus_element(mut self, rotations: Vec<SymbolicReal>) -> Result<Self> {
        if rotations.len() != self.n {
            return Err(Error::Input(format!(
                "torus element needs {} rotation numbers, got {}",
                self.n,
                rotations.len()
            )));
        }
        self.torus_element = Some(rotations);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn eta0_theta(&self) -> &Rational {
        &self.eta0_theta
    }

    pub fn torus_element(&self) -> Option<&[SymbolicReal]> {
        self.torus_element.as_deref()
    }

    fn is_standard_simplex(&self) -> bool {
        let expected = MomentModel::cpn(self.n).expect("n ≥ 1").vertices;
        let mut sorted = self.vertices.clone();
        sorted.sort();
        let mut expected_sorted = expected;
        expected_sorted.sort();
        sorted == expected_sorted
    }
}

/// Vertices of the momentum polytope after a type I deformation: every
/// vertex scales by `1/(1+η₀(θ))`.
pub fn moment_rescale(m: &MomentModel) -> Result<Vec<Vec<Rational>>> {
    let scale = Rational::one() + &m.eta0_theta;
    if !scale.is_positive() {
        return Err(Error::Precondition(format!(
            "1+η₀(θ) = {scale} ≤ 0 violates the deformation hypothesis"
        )));
    }
    let inv = scale.recip();
    Ok(m.vertices
        .iter()
        .map(|v| v.iter().map(|c| c * &inv).collect())
        .collect())
}

/// Type II deformations leave `ω` untouched, so the momentum map and its
/// image do not move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentUnchangedVerdict {
    pub unchanged: bool,
    pub vertices: Vec<Vec<Rational>>,
}

pub fn moment_unchanged_type_ii(
    m: &MomentModel,
    record: &DeformationRecord,
) -> Result<MomentUnchangedVerdict> {
    if record.kind != DeformationKind::TypeII {
        return Err(Error::Input("record is not a type II deformation".into()));
    }
    if record.input.omega() != record.output.omega() {
        return Err(Error::Integrity("type II record changed ω".into()));
    }
    Ok(MomentUnchangedVerdict {
        unchanged: true,
        vertices: m.vertices.clone(),
    })
}

/// Whether `{tᵏ}` is dense in the torus: true iff `{1, a_1, …, a_n}` is
/// ℚ-linearly independent, decided exactly on the coefficient matrix.
pub fn dense_subgroup_check(a: &[SymbolicReal]) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::Input("torus element has no rotation numbers".into()));
    }
    let mut rows = vec![vec![SymbolicReal::one()]];
    rows.extend(a.iter().map(|v| vec![v.clone()]));
    Ok(rank_over_q(&rows)? == a.len() + 1)
}

/// Closed Reeb orbits of the mapping torus `L_t` for `L = CPⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReebOrbits {
    /// `t` has finite order; each orbit closes after finitely many turns.
    AllClosed,
    /// Exactly this many closed orbits, through the isolated fixed points
    /// of the closure torus.
    Finite(usize),
    /// The closure torus has a positive-dimensional fixed set, so
    /// infinitely many (but not all) orbits close.
    InfinitelyMany,
}

/// Counts closed Reeb orbits on the `CPⁿ` mapping torus of `t`.
///
/// Orbits through a point close exactly when the point is fixed by the
/// identity component `S` of the closure of `⟨t⟩`; `Lie(S)` is the span of
/// the irrational directions of the rotation vector. The fixed set of `S`
/// is finite iff the `n+1` coordinate weights restrict to pairwise
/// distinct characters of `S`, in which case the closed orbits pass
/// through the `n+1` coordinate points.
pub fn closed_reeb_orbit_count(m: &MomentModel) -> Result<ReebOrbits> {
    let Some(rotations) = m.torus_element.as_deref() else {
        return Err(Error::Input("model carries no torus element".into()));
    };
    if !m.is_standard_simplex() {
        return Err(Error::Unsupported(
            "closed-orbit counting is implemented for the CPⁿ model (standard simplex) only".into(),
        ));
    }
    if rotations.iter().all(SymbolicReal::is_rational) {
        return Ok(ReebOrbits::AllClosed);
    }
    // columns of irrational directions: one vector in ℚⁿ per symbol slot
    let max_slot = rotations
        .iter()
        .map(SymbolicReal::max_slot)
        .max()
        .unwrap_or(0);
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for slot in 1..=max_slot {
        let col: Vec<Rational> = rotations.iter().map(|a| a.coeff(slot)).collect();
        if col.iter().any(|c| !c.is_zero()) {
            columns.push(col);
        }
    }
    // weights w₀ = 0, w_j = e_j; a shared restriction to span(columns)
    // means a positive-dimensional fixed set
    let n = m.n;
    for i in 0..=n {
        for j in i + 1..=n {
            let shared = columns.iter().all(|col| {
                let di = if i > 0 {
                    col[i - 1].clone()
                } else {
                    Rational::zero()
                };
                let dj = if j > 0 {
                    col[j - 1].clone()
                } else {
                    Rational::zero()
                };
                di == dj
            });
            if shared {
                return Ok(ReebOrbits::InfinitelyMany);
            }
        }
    }
    Ok(ReebOrbits::Finite(n + 1))
}

/// Outcome of the seeded finite-difference check of `dμ^A = ι_Āω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRecord {
    pub n: usize,
    pub coefficients: Vec<i64>,
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub max_residual: f64,
}

/// Finite-difference step for the residual checks.
pub const RESIDUAL_STEP: f64 = 1e-5;

fn sample_chart_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    // bounded rational coordinates, then evaluated in f64
    (0..n)
        .map(|_| {
            let re = rat(rng.random_range(-200..=200), 100);
            let im = rat(rng.random_range(-200..=200), 100);
            Complex64::new(re.to_f64().unwrap(), im.to_f64().unwrap())
        })
        .collect()
}

fn mu_component_sum(w: &[Complex64], a: &[i64]) -> f64 {
    let rho = 1.0 + w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    w.iter()
        .zip(a)
        .map(|(z, &c)| c as f64 * z.norm_sqr() / rho)
        .sum::<f64>()
}

/// The 2-form paired with the unit-simplex momentum convention, evaluated
/// on tangent vectors of the affine chart: the multiple `−(1/π)` of the
/// Fubini–Study form, written through the Hermitian matrix
/// `h_{jk} = δ_{jk}/ρ − w̄_j w_k/ρ²`.
fn omega_chart(w: &[Complex64], u: &[Complex64], v: &[Complex64]) -> f64 {
    let rho = 1.0 + w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..w.len() {
        for k in 0..w.len() {
            let mut h = -w[j].conj() * w[k] / (rho * rho);
            if j == k {
                h += 1.0 / rho;
            }
            sum += h * (u[j] * v[k].conj() - v[j] * u[k].conj());
        }
    }
    // −(1/π)·(i/2)·Σ …, which is real for Hermitian h
    (-(Complex64::i() / 2.0) * sum).re / std::f64::consts::PI
}

/// Fundamental vector field of `A ∈ ℤⁿ ≅ Lie(Tⁿ)` at `w`: rotation speed
/// `2πi A_j w_j` in each coordinate.
fn fundamental_field(w: &[Complex64], a: &[i64]) -> Vec<Complex64> {
    w.iter()
        .zip(a)
        .map(|(z, &c)| Complex64::i() * (2.0 * std::f64::consts::PI * c as f64) * z)
        .collect()
}

/// Maximum over seeded sample points, and over real chart directions, of
/// `|∂_dir μ^A − ω(Ā, dir)|` with central finite differences.
///
/// This is the crate's single floating-point operation; everything it
/// checks is exact in theory, so the residual only measures discretization
/// error.
pub fn moment_condition_residual(
    n: usize,
    a: &[i64],
    samples: usize,
    seed: u64,
) -> Result<ResidualRecord> {
    if n == 0 || n > 3 {
        return Err(Error::Input(format!(
            "residual check supports 1 ≤ n ≤ 3, got {n}"
        )));
    }
    if a.len() != n {
        return Err(Error::Input(format!(
            "coefficient vector must have length {n}"
        )));
    }
    if samples == 0 {
        return Err(Error::Input("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = RESIDUAL_STEP;
    let mut max_residual: f64 = 0.0;
    for _ in 0..samples {
        let w = sample_chart_point(n, &mut rng);
        let field = fundamental_field(&w, a);
        for dir in 0..2 * n {
            let (j, unit) = if dir < n {
                (dir, Complex64::new(1.0, 0.0))
            } else {
                (dir - n, Complex64::new(0.0, 1.0))
            };
            let mut plus = w.clone();
            plus[j] += h * unit;
            let mut minus = w.clone();
            minus[j] -= h * unit;
            let derivative = (mu_component_sum(&plus, a) - mu_component_sum(&minus, a)) / (2.0 * h);
            let mut direction = vec![Complex64::new(0.0, 0.0); n];
            direction[j] = unit;
            let pairing = omega_chart(&w, &field, &direction);
            max_residual = max_residual.max((derivative - pairing).abs());
        }
    }
    Ok(ResidualRecord {
        n,
        coefficients: a.to_vec(),
        samples,
        seed,
        step: h,
        max_residual,
    })
}

/// Maximum of `|ω(Ā, B̄)|` over seeded sample points: the tangent spaces
/// of torus orbits are isotropic, so this should vanish to roundoff.
pub fn orbit_isotropy_residual(
    n: usize,
    a: &[i64],
    b: &[i64],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if n == 0 || n > 3 {
        return Err(Error::Input(format!(
            "residual check supports 1 ≤ n ≤ 3, got {n}"
        )));
    }
    if a.len() != n || b.len() != n {
        return Err(Error::Input(format!(
            "coefficient vectors must have length {n}"
        )));
    }
    if samples == 0 {
        return Err(Error::Input("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    for _ in 0..samples {
        let w = sample_chart_point(n, &mut rng);
        let fa = fundamental_field(&w, a);
        let fb = fundamental_field(&w, b);
        max_residual = max_residual.max(omega_chart(&w, &fa, &fb).abs());
    }
    Ok(max_residual)
}
