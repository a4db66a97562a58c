//! Dense complex linear algebra over finite-dimensional Hilbert spaces.
//!
//! Carriers for state vectors, operators, density operators, and observables
//! with cached spectral decompositions, plus the tensor/partial-trace
//! machinery for composite system–ancilla spaces.
//!
//! Composite indices follow the system-major convention throughout: a basis
//! vector `|i⟩⊗|j⟩` of `H⊗K` with `dim K = k` sits at flat index `i·k + j`.
//!
//! On the wire, complex scalars are two-element arrays `[re, im]` and
//! matrices are row-major nested arrays of those pairs.

pub mod random;

use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, EigValsh, SVD, UPLO};
use num_complex::Complex;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Complex scalar used everywhere.
pub type C64 = Complex<f64>;

const ZERO_NORM_FLOOR: f64 = 1e-14;

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

/// Euclidean norm of a complex vector.
pub fn vector_norm(v: &Array1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product ⟨a|b⟩, conjugate-linear in the first argument.
pub fn vector_inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

// ---------------------------------------------------------------------------
// Ket
// ---------------------------------------------------------------------------

/// A pure state vector of unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Array1<C64>,
}

impl Ket {
    /// Normalizes `amplitudes` into a unit vector; rejects (near-)zero input.
    pub fn new(amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch("ket must have dim ≥ 1".into()));
        }
        let norm = vector_norm(&amplitudes);
        if norm < ZERO_NORM_FLOOR {
            return Err(Error::ZeroVector);
        }
        // keep already-normalized input bit-exact so wire round-trips are lossless
        let amplitudes = if (norm - 1.0).abs() <= 1e-12 {
            amplitudes
        } else {
            amplitudes.mapv(|z| z / norm)
        };
        Ok(Self { amplitudes })
    }

    /// Builds a ket from `(re, im)` component pairs.
    pub fn from_components(components: &[(f64, f64)]) -> Result<Self> {
        Self::new(components.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = Array1::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Ket) -> C64 {
        vector_inner(&self.amplitudes, &other.amplitudes)
    }

    /// Rank-one projector |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Operator {
        let d = self.dim();
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                m[[i, j]] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        Operator { entries: m }
    }

    /// Tensor product `self ⊗ other`, system-major indexing.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let (da, db) = (self.dim(), other.dim());
        let mut v = Array1::zeros(da * db);
        for i in 0..da {
            for j in 0..db {
                v[i * db + j] = self.amplitudes[i] * other.amplitudes[j];
            }
        }
        Ket { amplitudes: v }
    }
}

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

/// A dense square complex matrix on a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: Array2<C64>,
}

impl Operator {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r == 0 || r != c {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square and nonempty, got {r}×{c}"
            )));
        }
        Ok(Self { entries })
    }

    /// Builds from row-major rows of `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "operator rows must form a nonempty square matrix".into(),
            ));
        }
        let mut m = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            for (j, &(re, im)) in row.iter().enumerate() {
                m[[i, j]] = C64::new(re, im);
            }
        }
        Ok(Self { entries: m })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: Array2::zeros((dim, dim)),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        let mut t = self.entries.t().to_owned();
        t.mapv_inplace(|z| z.conj());
        Operator { entries: t }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.entries[[i, i]]).sum()
    }

    pub fn scale(&self, c: C64) -> Operator {
        Operator {
            entries: self.entries.mapv(|z| z * c),
        }
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(C64::new(c, 0.0))
    }

    /// Matrix–vector application on a raw amplitude vector.
    pub fn apply_vec(&self, v: &Array1<C64>) -> Array1<C64> {
        assert_eq!(self.dim(), v.len(), "operator/vector dimension mismatch");
        self.entries.dot(v)
    }

    /// Applies to a ket, returning the (generally unnormalized) image vector.
    pub fn apply(&self, psi: &Ket) -> Array1<C64> {
        self.apply_vec(psi.amplitudes())
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.frobenius_norm() == 0.0 {
            return 0.0;
        }
        let (_, s, _) = self
            .entries
            .svd(false, false)
            .expect("svd of a finite dense matrix");
        s.iter().fold(0.0f64, |m, &x| m.max(x))
    }

    /// ‖self − other‖ in operator norm.
    pub fn distance(&self, other: &Operator) -> f64 {
        (self - other).operator_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// ‖A − A†‖ in operator norm.
    pub fn hermitian_deviation(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// ‖A†A − I‖ in operator norm.
    pub fn unitary_deviation(&self) -> f64 {
        (&self.adjoint() * self).distance(&Operator::identity(self.dim()))
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match self.eigenvalues_hermitian() {
            Ok(vals) => vals.iter().all(|&v| v >= -tol),
            Err(_) => false,
        }
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Operator {
        let adj = self.adjoint();
        Operator {
            entries: (&self.entries + &adj.entries).mapv(|z| z * 0.5),
        }
    }

    /// Eigenvalues of a (near-)hermitian operator, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        let vals = self.hermitian_part().entries.eigvalsh(UPLO::Lower)?;
        Ok(vals.to_vec())
    }

    /// Full spectral data of a (near-)hermitian operator: ascending
    /// eigenvalues with matching eigenvector columns.
    ///
    /// The backend expects column-major storage; a row-major matrix would
    /// silently decompose the transpose, so the input is copied into
    /// column-major layout first.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, Array2<C64>)> {
        let h = self.hermitian_part();
        let n = h.dim();
        let mut f = Array2::<C64>::zeros((n, n).f());
        f.assign(&h.entries);
        let (vals, vecs) = f.eigh(UPLO::Lower)?;
        Ok((vals.to_vec(), vecs))
    }

    /// Positive-semidefinite square root, clamping tiny negative eigenvalues
    /// to zero.
    pub fn sqrt_psd(&self, tol: &Tolerances) -> Result<Operator> {
        let (vals, vecs) = self.hermitian_eigen()?;
        if let Some(&min) = vals.first() {
            if min < -tol.psd {
                return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
            }
        }
        let n = self.dim();
        let mut m = Array2::<C64>::zeros((n, n));
        for (k, &v) in vals.iter().enumerate() {
            let s = v.max(0.0).sqrt();
            let col = vecs.column(k);
            for i in 0..n {
                for j in 0..n {
                    m[[i, j]] += C64::new(s, 0.0) * col[i] * col[j].conj();
                }
            }
        }
        Ok(Operator { entries: m })
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
                Operator { entries: &self.entries $op &rhs.entries }
            }
        }
    };
}
impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);

impl std::ops::Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            entries: self.entries.dot(&rhs.entries),
        }
    }
}

impl std::ops::Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator {
            entries: self.entries.mapv(|z| -z),
        }
    }
}

// ---------------------------------------------------------------------------
// DensityOperator
// ---------------------------------------------------------------------------

/// A positive unit-trace operator representing a (possibly mixed) state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: Operator,
}

impl DensityOperator {
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tolerances(op, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(op: Operator, tol: &Tolerances) -> Result<Self> {
        let dev = op.hermitian_deviation();
        if dev > tol.hermitian {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol.hermitian,
            });
        }
        let vals = op.eigenvalues_hermitian()?;
        if let Some(&min) = vals.first() {
            if min < -tol.psd {
                return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
            }
        }
        let trace = op.trace();
        if (trace.re - 1.0).abs() > tol.trace_one || trace.im.abs() > tol.trace_one {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        Ok(Self { op })
    }

    /// The pure state |ψ⟩⟨ψ|.
    pub fn pure(psi: &Ket) -> Self {
        Self {
            op: psi.projector(),
        }
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

// ---------------------------------------------------------------------------
// Observable
// ---------------------------------------------------------------------------

/// A hermitian operator with its cached spectral decomposition
/// `A = Σ_m m E_m` into distinct eigenvalues and orthogonal projectors.
#[derive(Debug, Clone)]
pub struct Observable {
    op: Operator,
    eigenvalues: Vec<f64>,
    projectors: Vec<Operator>,
}

impl Observable {
    /// Decomposes a hermitian operator, merging eigenvalues that lie within
    /// `degeneracy_tol` of their neighbor into a single projector.
    pub fn spectral(op: Operator, degeneracy_tol: f64) -> Result<Self> {
        Self::spectral_with(op, degeneracy_tol, &Tolerances::DEFAULT)
    }

    /// [`Observable::spectral`] with the default degeneracy tolerance.
    pub fn from_operator(op: Operator) -> Result<Self> {
        Self::spectral(op, Tolerances::DEFAULT.degeneracy)
    }

    pub fn spectral_with(op: Operator, degeneracy_tol: f64, tol: &Tolerances) -> Result<Self> {
        let dev = op.hermitian_deviation();
        if dev > tol.hermitian {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol.hermitian,
            });
        }
        let (vals, vecs) = op.hermitian_eigen()?;
        let n = op.dim();

        // Chain-cluster the ascending eigenvalues.
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in vals.iter().enumerate() {
            match clusters.last_mut() {
                Some(cluster) if v - vals[*cluster.last().unwrap()] <= degeneracy_tol => {
                    cluster.push(k)
                }
                _ => clusters.push(vec![k]),
            }
        }

        let mut eigenvalues = Vec::with_capacity(clusters.len());
        let mut projectors = Vec::with_capacity(clusters.len());
        for cluster in &clusters {
            let mean = cluster.iter().map(|&k| vals[k]).sum::<f64>() / cluster.len() as f64;
            let mut proj = Array2::<C64>::zeros((n, n));
            for &k in cluster {
                let col = vecs.column(k);
                for i in 0..n {
                    for j in 0..n {
                        proj[[i, j]] += col[i] * col[j].conj();
                    }
                }
            }
            eigenvalues.push(mean);
            projectors.push(Operator { entries: proj });
        }

        let obs = Self {
            op,
            eigenvalues,
            projectors,
        };
        obs.validate(tol)?;
        Ok(obs)
    }

    /// Assembles an observable from explicit `(eigenvalue, projector)` pairs
    /// without an eigensolve; the operator is rebuilt as `Σ m E_m` and the
    /// usual invariants are validated. Labels must be pairwise distinct.
    pub fn from_spectrum(pairs: Vec<(f64, Operator)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::DimensionMismatch(
                "an observable needs at least one projector".into(),
            ));
        }
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateLabel(w[0].0));
            }
        }
        let dim = pairs[0].1.dim();
        if pairs.iter().any(|(_, p)| p.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "projectors must share one dimension".into(),
            ));
        }
        let mut op = Operator::zeros(dim);
        for (m, p) in &pairs {
            op = &op + &p.scale_re(*m);
        }
        let (eigenvalues, projectors) = pairs.into_iter().unzip();
        let obs = Self {
            op,
            eigenvalues,
            projectors,
        };
        obs.validate(&Tolerances::DEFAULT)?;
        Ok(obs)
    }

    fn validate(&self, tol: &Tolerances) -> Result<()> {
        let n = self.op.dim();
        let mut sum = Operator::zeros(n);
        for p in &self.projectors {
            sum = &sum + p;
        }
        let completeness = sum.distance(&Operator::identity(n));
        if completeness > tol.completeness {
            return Err(Error::SpectralReconstruction {
                residual: completeness,
                tol: tol.completeness,
            });
        }
        for (a, pa) in self.projectors.iter().enumerate() {
            for (b, pb) in self.projectors.iter().enumerate() {
                let prod = pa * pb;
                let target = if a == b { pa.clone() } else { Operator::zeros(n) };
                let dev = prod.distance(&target);
                if dev > tol.projector_orthogonality {
                    return Err(Error::SpectralReconstruction {
                        residual: dev,
                        tol: tol.projector_orthogonality,
                    });
                }
            }
        }
        let residual = self.reconstruct().distance(&self.op);
        if residual > tol.spectral_reconstruction {
            return Err(Error::SpectralReconstruction {
                residual,
                tol: tol.spectral_reconstruction,
            });
        }
        Ok(())
    }

    /// Σ_m m E_m from the stored spectral data.
    pub fn reconstruct(&self) -> Operator {
        let mut acc = Operator::zeros(self.op.dim());
        for (m, p) in self.eigenvalues.iter().zip(&self.projectors) {
            acc = &acc + &p.scale_re(*m);
        }
        acc
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    /// Outcome pairs `(m, E_m)`.
    pub fn outcomes(&self) -> impl Iterator<Item = (f64, &Operator)> {
        self.eigenvalues.iter().copied().zip(self.projectors.iter())
    }
}

// ---------------------------------------------------------------------------
// Composite-space operations
// ---------------------------------------------------------------------------

/// Kronecker product `x ⊗ y` with system-major indexing: entry
/// `((i,j),(i',j')) = x[i,i']·y[j,j']` at row `i·dim(y)+j`.
pub fn tensor(x: &Operator, y: &Operator) -> Operator {
    let (dx, dy) = (x.dim(), y.dim());
    let mut m = Array2::zeros((dx * dy, dx * dy));
    for i in 0..dx {
        for ip in 0..dx {
            let xv = x.entries[[i, ip]];
            if xv == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dy {
                for jp in 0..dy {
                    m[[i * dy + j, ip * dy + jp]] = xv * y.entries[[j, jp]];
                }
            }
        }
    }
    Operator { entries: m }
}

/// Partial trace over the ancilla factor: `Tr_K[x]` for `x` on `H⊗K`.
pub fn partial_trace_ancilla(x: &Operator, dim_k: usize) -> Result<Operator> {
    let d = x.dim();
    if dim_k == 0 || !d.is_multiple_of(dim_k) {
        return Err(Error::DimensionMismatch(format!(
            "dim {d} not divisible by ancilla dim {dim_k}"
        )));
    }
    let dh = d / dim_k;
    let mut m = Array2::zeros((dh, dh));
    for i in 0..dh {
        for ip in 0..dh {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..dim_k {
                acc += x.entries[[i * dim_k + j, ip * dim_k + j]];
            }
            m[[i, ip]] = acc;
        }
    }
    Ok(Operator { entries: m })
}

/// Partial inner product `⟨ξ| x |ξ⟩_K`: contracts the ancilla factor of an
/// operator on `H⊗K` against a fixed ancilla ket, leaving an operator on `H`.
pub fn partial_inner_ancilla(x: &Operator, xi: &Ket) -> Result<Operator> {
    let d = x.dim();
    let k = xi.dim();
    if k == 0 || !d.is_multiple_of(k) {
        return Err(Error::DimensionMismatch(format!(
            "dim {d} not divisible by ancilla dim {k}"
        )));
    }
    let dh = d / k;
    let amps = xi.amplitudes();
    let mut m = Array2::zeros((dh, dh));
    for i in 0..dh {
        for ip in 0..dh {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..k {
                for jp in 0..k {
                    acc += amps[j].conj() * x.entries[[i * k + j, ip * k + jp]] * amps[jp];
                }
            }
            m[[i, ip]] = acc;
        }
    }
    Ok(Operator { entries: m })
}

/// Commutator `[a, b] = ab − ba`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same_dim(a, b)?;
    Ok(&(a * b) - &(b * a))
}

/// Anticommutator `{a, b} = ab + ba`.
pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    check_same_dim(a, b)?;
    Ok(&(a * b) + &(b * a))
}

/// Expectation value ⟨ψ|a|ψ⟩.
pub fn expectation(a: &Operator, psi: &Ket) -> Result<C64> {
    if a.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs ket dim {}",
            a.dim(),
            psi.dim()
        )));
    }
    Ok(vector_inner(psi.amplitudes(), &a.apply(psi)))
}

/// Expectation of a hermitian operator as a real number; errors if the
/// imaginary part exceeds tolerance.
pub fn real_expectation(a: &Operator, psi: &Ket) -> Result<f64> {
    let v = expectation(a, psi)?;
    if v.im.abs() > Tolerances::DEFAULT.expectation_imag {
        return Err(Error::NotHermitian {
            deviation: v.im.abs(),
            tol: Tolerances::DEFAULT.expectation_imag,
        });
    }
    Ok(v.re)
}

fn check_same_dim(a: &Operator, b: &Operator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dims {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pauli fixtures
// ---------------------------------------------------------------------------

/// The qubit Pauli operators and 2×2 identity.
pub mod pauli {
    use super::{C64, Operator};
    use ndarray::array;

    pub fn x() -> Operator {
        Operator::new(array![
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        ])
        .unwrap()
    }

    pub fn y() -> Operator {
        Operator::new(array![
            [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]
        ])
        .unwrap()
    }

    pub fn z() -> Operator {
        Operator::new(array![
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]
        ])
        .unwrap()
    }

    pub fn identity() -> Operator {
        Operator::identity(2)
    }
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

fn complex_pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

impl Serialize for Ket {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for z in self.amplitudes.iter() {
            seq.serialize_element(&complex_pair(z))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Ket {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        let v: Array1<C64> = pairs.iter().map(|p| C64::new(p[0], p[1])).collect();
        Ket::new(v).map_err(de::Error::custom)
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut seq = serializer.serialize_seq(Some(n))?;
        for i in 0..n {
            let row: Vec<[f64; 2]> = (0..n).map(|j| complex_pair(&self.entries[[i, j]])).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(de::Error::custom("matrix must be nonempty and square"));
        }
        let mut m = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                m[[i, j]] = C64::new(p[0], p[1]);
            }
        }
        Ok(Operator { entries: m })
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.op.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let op = Operator::deserialize(deserializer)?;
        DensityOperator::new(op).map_err(de::Error::custom)
    }
}

impl Serialize for Observable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.op.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let op = Operator::deserialize(deserializer)?;
        Observable::from_operator(op).map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
