//! Exterior algebra over a finite-dimensional Lie algebra, with the
//! Chevalley–Eilenberg differential.
//!
//! Alternating forms are stored over strictly increasing multi-indices in
//! lexicographic order; all sign bookkeeping happens when terms are
//! inserted, so two equal forms are structurally equal.
//!
//! Sign conventions, fixed once here and used everywhere downstream:
//! on degree-1 forms `(dα)(X,Y) = −α([X,Y])`, so the dual structure
//! equations read `de^k = −Σ_{i<j} c^k_{ij} e^i∧e^j`, and the interior
//! product satisfies `ι_{e_j} e^{i₁…i_p} = (−1)^{t−1} e^{…î_t…}` when
//! `j = i_t`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::LinearSolution;
use crate::scalar::{Rational, SymbolicReal};

/// A vector in the underlying algebra, over the fixed basis `e_0..e_{dim-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    components: Vec<Rational>,
}

impl Vector {
    pub fn new(components: Vec<Rational>) -> Self {
        Self { components }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            components: vec![Rational::zero(); dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.components[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Rational {
        &self.components[i]
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector::new(self.components.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.components.iter().map(|a| -a.clone()).collect())
    }
}

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!(
            "underlying dimensions differ: {a} vs {b}"
        )));
    }
    Ok(())
}

/// Merge two strictly increasing index sequences, tracking the permutation
/// sign; `None` when they share an index.
fn merge_indices(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut sign = 1i8;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

/// A degree-`p` alternating form with [`SymbolicReal`] coefficients.
///
/// Purely rational forms are the common case; symbolic coefficients appear
/// when a deformation parameter mixes in declared-independent constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, SymbolicReal>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form holding a scalar.
    pub fn scalar(dim: usize, value: SymbolicReal) -> Self {
        let mut f = Self::zero(dim, 0);
        if !value.is_zero() {
            f.terms.insert(Vec::new(), value);
        }
        f
    }

    /// Build from `(indices, coefficient)` terms. Indices are 0-based, in
    /// any order; repeated indices annihilate the term.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, SymbolicReal)>,
    {
        let mut f = Self::zero(dim, degree);
        for (idx, coeff) in terms {
            if idx.len() != degree {
                return Err(Error::Input(format!(
                    "multi-index {idx:?} has length {}, expected degree {degree}",
                    idx.len()
                )));
            }
            let mut sorted: Vec<u8> = Vec::with_capacity(idx.len());
            let mut sign = 1i8;
            let mut zero = false;
            for &raw in &idx {
                if raw >= dim {
                    return Err(Error::Input(format!(
                        "index {raw} out of range for dimension {dim}"
                    )));
                }
                let v = raw as u8;
                match sorted.binary_search(&v) {
                    Ok(_) => {
                        zero = true;
                        break;
                    }
                    Err(pos) => {
                        if (sorted.len() - pos) % 2 == 1 {
                            sign = -sign;
                        }
                        sorted.insert(pos, v);
                    }
                }
            }
            if zero {
                continue;
            }
            let signed = if sign < 0 { -coeff } else { coeff };
            f.add_term(sorted, signed);
        }
        Ok(f)
    }

    /// The basis form `e^{i₁} ∧ … ∧ e^{i_p}` (0-based indices).
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        Self::from_terms(
            dim,
            indices.len(),
            [(indices.to_vec(), SymbolicReal::one())],
        )
    }

    fn add_term(&mut self, idx: Vec<u8>, coeff: SymbolicReal) {
        if coeff.is_zero() || self.degree > self.dim {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &SymbolicReal)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of a strictly increasing multi-index.
    pub fn coeff(&self, indices: &[usize]) -> SymbolicReal {
        let key: Vec<u8> = indices.iter().map(|&i| i as u8).collect();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Value of a degree-0 form.
    pub fn as_scalar(&self) -> Result<SymbolicReal> {
        if self.degree != 0 {
            return Err(Error::Input(format!(
                "degree-{} form is not a scalar",
                self.degree
            )));
        }
        Ok(self
            .terms
            .get(&Vec::new() as &Vec<u8>)
            .cloned()
            .unwrap_or_default())
    }

    /// Coefficient of the top-degree basis form `e^{1…dim}`; zero unless
    /// `degree == dim`.
    pub fn top_coeff(&self) -> SymbolicReal {
        if self.degree != self.dim {
            return SymbolicReal::zero();
        }
        let key: Vec<u8> = (0..self.dim as u8).collect();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree {
            return Err(Error::Input(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect();
        Form {
            dim: self.dim,
            degree: self.degree,
            terms,
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.dim, self.degree);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.scale(c)))
            .collect();
        Form {
            dim: self.dim,
            degree: self.degree,
            terms,
        }
    }

    /// Scale by a symbolic factor; fails if that would multiply two symbols.
    pub fn try_scale(&self, c: &SymbolicReal) -> Result<Form> {
        let mut out = Form::zero(self.dim, self.degree);
        for (idx, v) in &self.terms {
            out.add_term(idx.clone(), v.try_mul(c)?);
        }
        Ok(out)
    }

    /// Exterior product. Bilinear, associative, graded-commutative; the
    /// result is the zero form when the degrees overflow the dimension.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        check_dim(self.dim, other.dim)?;
        let degree = self.degree + other.degree;
        let mut out = Form::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((idx, sign)) = merge_indices(ia, ib) {
                    let c = ca.try_mul(cb)?;
                    out.add_term(idx, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `n`-fold wedge power; the empty product is the constant 1.
    pub fn wedge_pow(&self, n: usize) -> Result<Form> {
        let mut out = Form::scalar(self.dim, SymbolicReal::one());
        for _ in 0..n {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Interior product `ι_X`; an antiderivation of degree −1.
    pub fn contract(&self, x: &Vector) -> Result<Form> {
        check_dim(self.dim, x.dim())?;
        if self.degree == 0 {
            return Err(Error::Input("interior product of a degree-0 form".into()));
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (t, &i) in idx.iter().enumerate() {
                let xi = x.component(i as usize);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(t);
                let signed = if t % 2 == 1 { -xi.clone() } else { xi.clone() };
                out.add_term(rest, c.scale(&signed));
            }
        }
        Ok(out)
    }

    /// Evaluate a 1-form on a vector.
    pub fn pair(&self, x: &Vector) -> Result<SymbolicReal> {
        if self.degree != 1 {
            return Err(Error::Input(format!(
                "pairing needs a 1-form, got degree {}",
                self.degree
            )));
        }
        self.contract(x)?.as_scalar()
    }

    /// Coefficient rows of a 1-form over the basis, used by linear solvers.
    pub fn one_form_row(&self) -> Result<Vec<SymbolicReal>> {
        if self.degree != 1 {
            return Err(Error::Input(format!(
                "expected a 1-form, got degree {}",
                self.degree
            )));
        }
        Ok((0..self.dim).map(|i| self.coeff(&[i])).collect())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let label: Vec<String> = idx.iter().map(|&i| (i + 1).to_string()).collect();
            if idx.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·e^{{{}}}", label.join(","))?;
            }
        }
        Ok(())
    }
}

/// Outcome of a Jacobi-identity check; the witness is a 0-based basis
/// triple on which the Jacobiator fails to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiVerdict {
    pub holds: bool,
    pub witness: Option<[usize; 3]>,
}

/// A finite-dimensional Lie algebra given by structure constants
/// `[e_i, e_j] = Σ_k c^k_{ij} e_k`, stored for `i < j` only so antisymmetry
/// is built in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    brackets: BTreeMap<(u8, u8), BTreeMap<u8, Rational>>,
}

impl LieAlgebra {
    /// `brackets` lists `(i, j, [(k, c^k_{ij})])` with `i < j`, 0-based.
    pub fn new(dim: usize, brackets: Vec<(usize, usize, Vec<(usize, Rational)>)>) -> Result<Self> {
        if dim == 0 || dim > u8::MAX as usize {
            return Err(Error::Input(format!("unsupported dimension {dim}")));
        }
        let mut table: BTreeMap<(u8, u8), BTreeMap<u8, Rational>> = BTreeMap::new();
        for (i, j, coeffs) in brackets {
            if i >= j {
                return Err(Error::Input(format!(
                    "bracket ({i},{j}) must have i < j; antisymmetry is synthesized"
                )));
            }
            if j >= dim {
                return Err(Error::Input(format!(
                    "bracket index {j} out of range for dim {dim}"
                )));
            }
            if table.contains_key(&(i as u8, j as u8)) {
                return Err(Error::Input(format!(
                    "duplicate bracket entry for ({i},{j})"
                )));
            }
            let mut row = BTreeMap::new();
            for (k, c) in coeffs {
                if k >= dim {
                    return Err(Error::Input(format!(
                        "target index {k} out of range for dim {dim}"
                    )));
                }
                if !c.is_zero() && row.insert(k as u8, c).is_some() {
                    return Err(Error::Input(format!(
                        "duplicate target {k} in bracket ({i},{j})"
                    )));
                }
            }
            if !row.is_empty() {
                table.insert((i as u8, j as u8), row);
            }
        }
        Ok(Self {
            dim,
            brackets: table,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, Vec::new()).expect("abelian algebra")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Structure-constant entries `(i, j, k, c^k_{ij})` with `i < j`.
    pub fn bracket_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.brackets.iter().flat_map(|(&(i, j), row)| {
            row.iter()
                .map(move |(&k, c)| (i as usize, j as usize, k as usize, c))
        })
    }

    /// `[e_i, e_j]` for any pair, synthesizing antisymmetry.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = Vector::zero(self.dim);
        if i == j {
            return v;
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        if let Some(row) = self.brackets.get(&(a as u8, b as u8)) {
            for (&k, c) in row {
                v.components[k as usize] = if flip { -c.clone() } else { c.clone() };
            }
        }
        v
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        check_dim(self.dim, u.dim())?;
        check_dim(self.dim, v.dim())?;
        let mut out = Vector::zero(self.dim);
        for (&(i, j), row) in &self.brackets {
            let (i, j) = (i as usize, j as usize);
            let c = u.component(i) * v.component(j) - u.component(j) * v.component(i);
            if c.is_zero() {
                continue;
            }
            for (&k, s) in row {
                out.components[k as usize] += s * &c;
            }
        }
        Ok(out)
    }

    /// Jacobi identity on all basis triples; equivalent to `d∘d = 0`.
    pub fn jacobi_check(&self) -> JacobiVerdict {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let ei = Vector::basis(self.dim, i);
                    let ej = Vector::basis(self.dim, j);
                    let ek = Vector::basis(self.dim, k);
                    let t1 = self.bracket(&self.bracket_basis(i, j), &ek).expect("dim");
                    let t2 = self.bracket(&self.bracket_basis(j, k), &ei).expect("dim");
                    let t3 = self.bracket(&self.bracket_basis(k, i), &ej).expect("dim");
                    let jacobiator = t1.add(&t2).and_then(|s| s.add(&t3)).expect("dim");
                    if !jacobiator.is_zero() {
                        return JacobiVerdict {
                            holds: false,
                            witness: Some([i, j, k]),
                        };
                    }
                }
            }
        }
        JacobiVerdict {
            holds: true,
            witness: None,
        }
    }

    /// `de^k = −Σ_{i<j} c^k_{ij} e^i∧e^j`, cached per call site as a 2-form.
    fn d_basis_one_form(&self, k: usize) -> Form {
        let mut f = Form::zero(self.dim, 2);
        for (&(i, j), row) in &self.brackets {
            if let Some(c) = row.get(&(k as u8)) {
                f.add_term(vec![i, j], SymbolicReal::from_rational(-c.clone()));
            }
        }
        f
    }

    /// Chevalley–Eilenberg differential, extended to all degrees as an
    /// antiderivation: `d e^I = Σ_t (−1)^{t−1} de^{i_t} ∧ e^{I∖i_t}`.
    pub fn d(&self, form: &Form) -> Result<Form> {
        check_dim(self.dim, form.dim())?;
        let mut out = Form::zero(self.dim, form.degree() + 1);
        if form.degree() == 0 {
            return Ok(out);
        }
        for (idx, c) in &form.terms {
            for (t, &k) in idx.iter().enumerate() {
                let dk = self.d_basis_one_form(k as usize);
                if dk.is_zero() {
                    continue;
                }
                let mut rest_idx = idx.clone();
                rest_idx.remove(t);
                let mut rest = Form::zero(self.dim, idx.len() - 1);
                rest.add_term(rest_idx, c.clone());
                let mut piece = dk.wedge(&rest)?;
                if t % 2 == 1 {
                    piece = piece.neg();
                }
                out = out.add(&piece)?;
            }
        }
        Ok(out)
    }

    /// Lie derivative via the Cartan formula `L_X = ι_X∘d + d∘ι_X`.
    pub fn lie_derivative(&self, x: &Vector, form: &Form) -> Result<Form> {
        check_dim(self.dim, x.dim())?;
        check_dim(self.dim, form.dim())?;
        let term1 = self.d(form)?.contract(x)?;
        if form.degree() == 0 {
            // d of a constant is zero; ι_X d(f) is the whole derivative
            return Ok(term1);
        }
        let term2 = self.d(&form.contract(x)?)?;
        term1.add(&term2)
    }

    /// Kernel of a 1-form as a basis of vectors, computed over ℚ by
    /// flattening symbolic coefficients per slot.
    pub fn one_form_kernel(&self, form: &Form) -> Result<Vec<Vector>> {
        check_dim(self.dim, form.dim())?;
        let kernel = crate::linalg::kernel_symbolic(&[form.one_form_row()?])?;
        Ok(kernel.into_iter().map(Vector::new).collect())
    }
}

/// Solve `ι_X ω = target` together with linear constraints `rows · X = rhs`;
/// shared by the Reeb and Hamiltonian solvers.
pub(crate) fn solve_contraction_system(
    omega: &Form,
    target: &Form,
    extra_rows: &[Vec<SymbolicReal>],
    extra_rhs: &[SymbolicReal],
) -> Result<LinearSolution> {
    let dim = omega.dim();
    if omega.degree() != 2 || target.degree() != 1 {
        return Err(Error::Input(
            "contraction system needs a 2-form and a 1-form target".into(),
        ));
    }
    check_dim(dim, target.dim())?;
    let mut rows: Vec<Vec<SymbolicReal>> = extra_rows.to_vec();
    let mut rhs: Vec<SymbolicReal> = extra_rhs.to_vec();
    // row j: Σ_i X_i ω(e_i, e_j) = target(e_j)
    for j in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for i in 0..dim {
            let val = match i.cmp(&j) {
                std::cmp::Ordering::Less => omega.coeff(&[i, j]),
                std::cmp::Ordering::Equal => SymbolicReal::zero(),
                std::cmp::Ordering::Greater => -omega.coeff(&[j, i]),
            };
            row.push(val);
        }
        rows.push(row);
        rhs.push(target.coeff(&[j]));
    }
    crate::linalg::solve_symbolic(&rows, &rhs)
}
