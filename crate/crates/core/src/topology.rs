//! Mapping-torus Betti numbers via the Wang sequence, the toric Betti
//! relations, Poincaré polynomials from fixed circles, finite-order tests
//! for gluing matrices, the fibration (compact-leaf) criterion for period
//! classes, and the basic-cohomology recursion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rank_over_q, solve_linear, LinearSolution, Matrix};
use crate::scalar::{Rational, SymbolicReal};

/// Graded cohomology data of a fiber together with the integer matrices of
/// the gluing map per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTorus {
    fiber_betti: Vec<usize>,
    maps: Vec<IntMatrix>,
    label: String,
}

impl MappingTorus {
    /// `maps[p]` acts on `H^p` and must be a `b_p × b_p` integer matrix,
    /// invertible over ℤ; the degree-0 map must be the identity on the
    /// single generator.
    pub fn new(
        fiber_betti: Vec<usize>,
        maps: Vec<IntMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if fiber_betti.is_empty() {
            return Err(Error::Input("fiber Betti list is empty".into()));
        }
        if fiber_betti[0] != 1 {
            return Err(Error::Input("fiber must be connected: b₀ = 1".into()));
        }
        if maps.len() != fiber_betti.len() {
            return Err(Error::Input(format!(
                "need one gluing matrix per degree: got {} matrices for {} degrees",
                maps.len(),
                fiber_betti.len()
            )));
        }
        for (p, (m, &b)) in maps.iter().zip(&fiber_betti).enumerate() {
            if m.size() != b {
                return Err(Error::Input(format!(
                    "degree-{p} matrix is {}×{} but b_{p} = {b}",
                    m.size(),
                    m.size()
                )));
            }
            if b > 0 && !m.det().abs().is_one() {
                return Err(Error::Input(format!(
                    "degree-{p} gluing matrix is not invertible over ℤ (det = {})",
                    m.det()
                )));
            }
        }
        if !maps[0].is_identity() {
            return Err(Error::Input("gluing map must be the identity on H⁰".into()));
        }
        Ok(Self {
            fiber_betti,
            maps,
            label: label.into(),
        })
    }

    /// Identity gluing: the product of the fiber with a circle.
    pub fn identity_gluing(fiber_betti: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        let maps = fiber_betti
            .iter()
            .map(|&b| IntMatrix::identity(b))
            .collect();
        Self::new(fiber_betti, maps, label)
    }

    pub fn fiber_betti(&self) -> &[usize] {
        &self.fiber_betti
    }

    pub fn map(&self, degree: usize) -> Option<&IntMatrix> {
        self.maps.get(degree)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Betti numbers of the mapping torus over ℚ:
/// `b_p = dim ker(φ*−id | H^p) + dim coker(φ*−id | H^{p−1})`.
pub fn wang_betti(m: &MappingTorus) -> Vec<usize> {
    // over a field, coker and ker of a square map have equal dimension
    let fixed_dims: Vec<usize> = m
        .maps
        .iter()
        .zip(&m.fiber_betti)
        .map(|(phi, &b)| b - phi.minus_identity_rank())
        .collect();
    let top = m.fiber_betti.len();
    (0..=top)
        .map(|p| {
            let ker = if p < top { fixed_dims[p] } else { 0 };
            let coker = if p > 0 { fixed_dims[p - 1] } else { 0 };
            ker + coker
        })
        .collect()
}

/// The Betti relations satisfied by every compact toric cosymplectic
/// manifold: `b_{2k} = b_{2k+1}` for all `k`, with `b₀ = b₁ = b_{2n} = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricBettiVerdict {
    pub pairs_equal: bool,
    pub b0_is_one: bool,
    pub b1_is_one: bool,
    pub b2n_is_one: bool,
    pub ok: bool,
}

pub fn toric_betti_check(b: &[usize]) -> Result<ToricBettiVerdict> {
    if b.len() < 2 || !b.len().is_multiple_of(2) {
        return Err(Error::Input(format!(
            "Betti list of an odd-dimensional manifold has even length 2n+2, got {}",
            b.len()
        )));
    }
    let n = b.len() / 2 - 1;
    let pairs_equal = (0..=n).all(|k| b[2 * k] == b[2 * k + 1]);
    let b0_is_one = b[0] == 1;
    let b1_is_one = b[1] == 1;
    let b2n_is_one = b[2 * n] == 1;
    let ok = pairs_equal && b0_is_one && b1_is_one && b2n_is_one;
    Ok(ToricBettiVerdict {
        pairs_equal,
        b0_is_one,
        b1_is_one,
        b2n_is_one,
        ok,
    })
}

/// Fixed-point data of a momentum Morse–Bott function on a toric
/// cosymplectic manifold: each component is a circle with an even index,
/// and exactly one component sits at the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedCircleSet {
    indices: Vec<usize>,
}

impl FixedCircleSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Input("fixed set is empty".into()));
        }
        if let Some(odd) = indices.iter().find(|&&l| l % 2 != 0) {
            return Err(Error::Input(format!(
                "index {odd} is odd; all indices must be even"
            )));
        }
        if indices.iter().filter(|&&l| l == 0).count() != 1 {
            return Err(Error::Input(
                "exactly one component must have index 0 (the minimum)".into(),
            ));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Poincaré polynomial `P_t = Σ_B t^{λ_B}(1+t)` as a coefficient list.
pub fn poincare_from_fixed(fs: &FixedCircleSet) -> Vec<usize> {
    let top = fs.indices.iter().max().copied().unwrap_or(0) + 1;
    let mut coeffs = vec![0usize; top + 1];
    for &l in &fs.indices {
        coeffs[l] += 1;
        coeffs[l + 1] += 1;
    }
    coeffs
}

/// Dense square integer matrix, sized for gluing maps on cohomology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "{n}×{n} matrix needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.at(k, j);
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn pow(&self, mut k: u64) -> IntMatrix {
        let mut result = IntMatrix::identity(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn det(&self) -> BigInt {
        let d = self.to_rational().det().expect("square");
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    fn to_rational(&self) -> Matrix {
        let data: Vec<Rational> = self
            .data
            .iter()
            .map(|v| Rational::from_integer(v.clone()))
            .collect();
        Matrix::new(self.n, self.n, data).expect("square data")
    }

    /// Rank of `self − I` over ℚ.
    fn minus_identity_rank(&self) -> usize {
        let mut q = self.to_rational();
        for i in 0..self.n {
            *q.at_mut(i, i) = q.at(i, i) - Rational::one();
        }
        q.rank()
    }

    /// Characteristic polynomial, ascending coefficients, monic.
    /// Faddeev–LeVerrier over exact rationals; the result is integral.
    pub fn char_poly(&self) -> Vec<BigInt> {
        let n = self.n;
        let a = self.to_rational();
        let mul = |x: &Matrix, y: &Matrix| {
            let mut out = Matrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut s = Rational::zero();
                    for t in 0..n {
                        s += x.at(i, t) * y.at(t, j);
                    }
                    *out.at_mut(i, j) = s;
                }
            }
            out
        };
        let trace = |x: &Matrix| {
            let mut s = Rational::zero();
            for i in 0..n {
                s += x.at(i, i);
            }
            s
        };
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = a.clone();
        for k in 1..=n {
            let c = -trace(&m) / Rational::from_integer(BigInt::from(k as i64));
            coeffs[n - k] = c.clone();
            if k < n {
                let mut shifted = m;
                for i in 0..n {
                    *shifted.at_mut(i, i) = shifted.at(i, i) + &c;
                }
                m = mul(&a, &shifted);
            }
        }
        coeffs
            .into_iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect()
    }
}

// --- integer polynomial helpers (ascending coefficients, monic divisors) ---

/// Exact division by a monic polynomial; `None` when the remainder is
/// nonzero.
fn poly_divide_exact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert!(
        den.last().map(One::is_one).unwrap_or(false),
        "divisor must be monic"
    );
    if num.len() < den.len() {
        return None;
    }
    let mut rem = num.to_vec();
    let qlen = num.len() - den.len() + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + den.len() - 1].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
    }
    if rem.iter().all(Zero::is_zero) {
        Some(quot)
    } else {
        None
    }
}

/// Cyclotomic polynomial `Φ_m`, via `x^m − 1 = Π_{d|m} Φ_d`.
fn cyclotomic(m: u64) -> Vec<BigInt> {
    let mut quot = vec![BigInt::zero(); m as usize + 1];
    quot[0] = -BigInt::one();
    quot[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic(d);
            quot = poly_divide_exact(&quot, &phi_d).expect("cyclotomic factors divide x^m − 1");
        }
    }
    quot
}

fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All possible orders of finite-order elements of `GL(d, ℤ)`: lcms of
/// sets of cyclotomic orders whose degrees fit into dimension `d`.
pub fn admissible_orders(d: usize) -> Vec<u64> {
    let budget = d as u64;
    // φ(m) ≥ √(m/2), so m ≤ 2d² bounds the candidates
    let candidates: Vec<(u64, u64)> = (1..=(2 * budget * budget).max(2))
        .map(|m| (m, euler_phi(m)))
        .filter(|&(_, phi)| phi <= budget)
        .collect();
    fn explore(
        candidates: &[(u64, u64)],
        start: usize,
        budget: u64,
        lcm_so_far: u64,
        orders: &mut std::collections::BTreeSet<u64>,
    ) {
        orders.insert(lcm_so_far);
        for i in start..candidates.len() {
            let (m, phi) = candidates[i];
            if phi <= budget {
                explore(candidates, i + 1, budget - phi, lcm_so_far.lcm(&m), orders);
            }
        }
    }
    let mut orders = std::collections::BTreeSet::new();
    explore(&candidates, 0, budget, 1, &mut orders);
    orders.into_iter().collect()
}

/// Multiplicative order of an integer matrix, or `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixOrder {
    Finite(u64),
    Infinite,
}

/// Decides finiteness exactly: the characteristic polynomial must factor
/// into cyclotomics, and then the order, if finite, lies among the
/// admissible orders of `GL(d, ℤ)`, tested exhaustively in ascending
/// order (for 2×2 matrices every candidate divides 12).
pub fn finite_order(a: &IntMatrix) -> Result<MatrixOrder> {
    if a.size() == 0 {
        return Ok(MatrixOrder::Finite(1));
    }
    if !a.det().abs().is_one() {
        return Err(Error::Input(format!(
            "matrix is not invertible over ℤ (det = {})",
            a.det()
        )));
    }
    // screen: strip cyclotomic factors from the characteristic polynomial
    let mut residual = a.char_poly();
    let d = a.size() as u64;
    for m in 1..=(2 * d * d).max(2) {
        if euler_phi(m) > d {
            continue;
        }
        let phi_m = cyclotomic(m);
        while residual.len() >= phi_m.len() {
            match poly_divide_exact(&residual, &phi_m) {
                Some(q) => residual = q,
                None => break,
            }
        }
    }
    if residual.len() != 1 {
        // an eigenvalue is not a root of unity; powers never return to I
        return Ok(MatrixOrder::Infinite);
    }
    for k in admissible_orders(a.size()) {
        if a.pow(k).is_identity() {
            return Ok(MatrixOrder::Finite(k));
        }
    }
    Ok(MatrixOrder::Infinite)
}

/// Whether a torus mapping-torus with gluing matrix `A` on `H¹` can carry
/// a metric making the structure K-cosymplectic.
///
/// Infinite order forces "no": a Killing Reeb field would put the powers
/// of the gluing map inside a compact isometry group, but they never
/// accumulate. Finite order makes the obstruction vacuous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCosymplecticVerdict {
    pub order: MatrixOrder,
    pub no_k_metric: bool,
    pub message: String,
}

pub fn k_cosymplectic_obstruction_torus(a: &IntMatrix) -> Result<KCosymplecticVerdict> {
    let order = finite_order(a)?;
    Ok(match order {
        MatrixOrder::Infinite => KCosymplecticVerdict {
            order,
            no_k_metric: true,
            message: "no K-cosymplectic metric: the gluing map has infinite order on H¹".into(),
        },
        MatrixOrder::Finite(k) => KCosymplecticVerdict {
            order,
            no_k_metric: false,
            message: format!(
                "obstruction vacuous: the order-{k} gluing map is an isometry of an averaged metric"
            ),
        },
    })
}

/// Periods of a closed 1-form over a basis of 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodClass {
    periods: Vec<SymbolicReal>,
}

impl PeriodClass {
    /// At least one period must be nonzero (a nowhere-vanishing closed
    /// form has nonzero class on the models considered here).
    pub fn new(periods: Vec<SymbolicReal>) -> Result<Self> {
        if periods.is_empty() || periods.iter().all(SymbolicReal::is_zero) {
            return Err(Error::Input(
                "period class must have a nonzero period".into(),
            ));
        }
        Ok(Self { periods })
    }

    pub fn periods(&self) -> &[SymbolicReal] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }
}

/// Verdict of the compact-leaf criterion: a closed nowhere-vanishing
/// 1-form whose class is a real multiple of an integer class fibers the
/// manifold over the circle (Tischler), so its foliation has compact
/// leaves. The criterion is one-directional; failure only means no
/// compactness guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationVerdict {
    pub rational_multiple_of_integer_class: bool,
    /// Primitive integer class `m` with `periods = multiple · m`.
    pub integer_class: Option<Vec<BigInt>>,
    /// The common multiple `λ`; may be irrational (symbolic).
    pub multiple: Option<SymbolicReal>,
    /// `c = 1/λ` whenever `λ` is rational, so `c · periods` is integral.
    pub scaling: Option<Rational>,
    pub summary: String,
}

/// True iff all periods are pairwise ℚ-proportional (the flattened period
/// matrix has rank 1 over ℚ).
pub fn fibration_check(pc: &PeriodClass) -> Result<FibrationVerdict> {
    let rows: Vec<Vec<SymbolicReal>> = pc.periods.iter().map(|p| vec![p.clone()]).collect();
    let rank = rank_over_q(&rows)?;
    if rank != 1 {
        return Ok(FibrationVerdict {
            rational_multiple_of_integer_class: false,
            integer_class: None,
            multiple: None,
            scaling: None,
            summary: "no compactness guarantee from this criterion".into(),
        });
    }
    let (k0, p0) = pc
        .periods
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_zero())
        .expect("class invariant: some period is nonzero");
    // ratio of each period to the reference one, read off a common slot
    let (slot, c0) = p0.iter().next().expect("nonzero period has a term");
    let ratios: Vec<Rational> = pc.periods.iter().map(|p| p.coeff(slot) / c0).collect();
    for (p, q) in pc.periods.iter().zip(&ratios) {
        if *p != p0.scale(q) {
            return Err(Error::Integrity(
                "rank-1 period matrix with inconsistent ratios".into(),
            ));
        }
    }
    // clear denominators, divide by the common gcd: primitive integer class
    let denom_lcm = ratios
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled: Vec<BigInt> = ratios
        .iter()
        .map(|r| (r * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let class: Vec<BigInt> = scaled.iter().map(|v| v / &gcd).collect();
    // periods = λ·class with λ = p₀ / class[k₀]
    let lambda = p0.div_rational(&Rational::from_integer(class[k0].clone()))?;
    let scaling = lambda.as_rational().map(|l| l.recip());
    Ok(FibrationVerdict {
        rational_multiple_of_integer_class: true,
        integer_class: Some(class),
        multiple: Some(lambda),
        scaling,
        summary: "fibers over S¹; leaves compact".into(),
    })
}

/// Outcome of searching for a basic correction that rationalizes a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rationalization {
    Feasible {
        coefficients: Vec<Rational>,
        new_periods: PeriodClass,
    },
    Infeasible,
}

/// Rational coefficients `c_i` with `periods + Σ c_i·gen_i` passing
/// [`fibration_check`], found by zeroing every symbol coordinate with one
/// exact linear solve; `Infeasible` when no rational combination works.
pub fn rationalize_class(pc: &PeriodClass, basic_gens: &[PeriodClass]) -> Result<Rationalization> {
    let slots = pc.len();
    if basic_gens.iter().any(|g| g.len() != slots) {
        return Err(Error::Input(
            "generator period lists must match the class length".into(),
        ));
    }
    let rows: Vec<Vec<SymbolicReal>> = pc.periods.iter().map(|p| vec![p.clone()]).collect();
    if rank_over_q(&rows)? == 1 {
        return Ok(Rationalization::Feasible {
            coefficients: vec![Rational::zero(); basic_gens.len()],
            new_periods: pc.clone(),
        });
    }
    let width = 1 + pc
        .periods
        .iter()
        .chain(basic_gens.iter().flat_map(|g| g.periods.iter()))
        .map(SymbolicReal::max_slot)
        .max()
        .unwrap_or(0);
    // unknowns: one coefficient per generator; equations: every symbol
    // coordinate (slot ≥ 1) of every period entry must cancel
    let mut mat_rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..slots {
        let target = pc.periods[i].flatten(width)?;
        let gen_cols: Vec<Vec<Rational>> = basic_gens
            .iter()
            .map(|g| g.periods[i].flatten(width))
            .collect::<Result<_>>()?;
        for slot in 1..width {
            mat_rows.push(gen_cols.iter().map(|c| c[slot].clone()).collect::<Vec<_>>());
            rhs.push(-target[slot].clone());
        }
    }
    let solution = solve_linear(&Matrix::from_rows(mat_rows)?, &rhs)?;
    let coefficients = match solution {
        LinearSolution::Unique(c) => c,
        LinearSolution::NonUnique { particular, .. } => particular,
        LinearSolution::NoSolution => return Ok(Rationalization::Infeasible),
    };
    let mut new_periods = Vec::with_capacity(slots);
    for i in 0..slots {
        let mut p = pc.periods[i].clone();
        for (c, g) in coefficients.iter().zip(basic_gens) {
            p += &g.periods[i].scale(c);
        }
        new_periods.push(p);
    }
    if new_periods.iter().all(SymbolicReal::is_zero) {
        // the corrected class vanishes; no fibration conclusion possible
        return Ok(Rationalization::Infeasible);
    }
    let new_periods = PeriodClass::new(new_periods)?;
    debug_assert!(fibration_check(&new_periods)?.rational_multiple_of_integer_class);
    Ok(Rationalization::Feasible {
        coefficients,
        new_periods,
    })
}

/// Basic Betti numbers from ordinary ones via
/// `b_p = b_p^basic + b_{p−1}^basic`, or the degree where the recursion
/// breaks down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicBetti {
    Consistent(Vec<usize>),
    Inconsistent { degree: usize },
}

pub fn basic_betti(b: &[usize]) -> Result<BasicBetti> {
    if b.is_empty() {
        return Err(Error::Input("Betti list is empty".into()));
    }
    if b[0] != 1 {
        return Err(Error::Input("recursion requires b₀ = 1".into()));
    }
    let mut basic = Vec::with_capacity(b.len());
    let mut prev: i64 = 0;
    for (p, &bp) in b.iter().enumerate() {
        let value = bp as i64 - prev;
        if value < 0 {
            return Ok(BasicBetti::Inconsistent { degree: p });
        }
        basic.push(value as usize);
        prev = value;
    }
    if prev != 0 {
        // surplus at the top degree: forward recursion cannot reproduce b
        return Ok(BasicBetti::Inconsistent {
            degree: b.len() - 1,
        });
    }
    Ok(BasicBetti::Consistent(basic))
}
