//! Direct products of Wigner rotations, their reduction into total-spin
//! blocks, and on-orbit tensors built from vector and spinor slots.
//!
//! Vector slots are carried in rest-frame spin components `𝒜_{n₀}·ε`
//! (`ε = iσ₂`), which turns the congruence `D 𝒜 D†` into `D ⊗ D`, so every
//! slot is a pair of spin-½ indices rotating with the same `D(Λ, n)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector2};
use serde::{Deserialize, Serialize};

use crate::angular::{decompose_product_with_cap, BlockRange, BlockSpec, HalfInt, ProductDecomposition};
use crate::error::Result;
use crate::little_group::{orbit_act, wigner_rotation, OrbitPoint, WignerRotation};
use crate::minkowski::{FourVector, LorentzMatrix};
use crate::sl2c::{lift, matrix_to_complex_vector, matrix_to_vector, spin_boost, vector_to_matrix};
use crate::{check_spin_count, state_cap, C64};

fn decomposition(n: usize) -> Result<Arc<ProductDecomposition>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ProductDecomposition>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().expect("cache lock").get(&n) {
        return Ok(d.clone());
    }
    let d = Arc::new(decompose_product_with_cap(n, usize::MAX >> 1)?);
    cache.lock().expect("cache lock").insert(n, d.clone());
    Ok(d)
}

/// `ε = iσ₂ = [[0, 1], [-1, 0]]`.
pub fn epsilon() -> Matrix2<C64> {
    let (z, o) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    Matrix2::new(z, o, -o, z)
}

fn to_dmatrix(m: &Matrix2<C64>) -> DMatrix<C64> {
    DMatrix::from_iterator(2, 2, m.iter().copied())
}

/// `D(Λ, n)^{⊗N}`, assembled on first use.
#[derive(Clone, Debug)]
pub struct ProductRep {
    factor: WignerRotation,
    n_factors: usize,
    assembled: OnceLock<DMatrix<C64>>,
}

pub fn product_rep(lambda: &LorentzMatrix, n: &OrbitPoint, n_factors: usize) -> Result<ProductRep> {
    check_spin_count(n_factors, state_cap())?;
    Ok(ProductRep { factor: wigner_rotation(lambda, n), n_factors, assembled: OnceLock::new() })
}

impl ProductRep {
    pub fn factor(&self) -> &WignerRotation {
        &self.factor
    }

    pub fn len(&self) -> usize {
        self.n_factors
    }

    pub fn is_empty(&self) -> bool {
        self.n_factors == 0
    }

    /// Kronecker product of the factors in leaf order.
    pub fn assembled(&self) -> &DMatrix<C64> {
        self.assembled.get_or_init(|| {
            let d = to_dmatrix(self.factor.matrix());
            (1..self.n_factors).fold(d.clone(), |acc, _| acc.kronecker(&d))
        })
    }

    pub fn unitarity_residual(&self) -> f64 {
        let a = self.assembled();
        (a.adjoint() * a - DMatrix::identity(a.nrows(), a.ncols())).camax()
    }
}

/// `Cᵀ · D^{⊗N} · C` with its block layout.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedRep {
    #[serde(skip)]
    pub matrix: DMatrix<C64>,
    pub blocks: Vec<BlockSpec>,
    pub ranges: Vec<BlockRange>,
}

pub fn reduce_rep(p: &ProductRep) -> Result<ReducedRep> {
    let d = decomposition(p.len())?;
    let c = d.complex_matrix();
    let matrix = c.transpose() * p.assembled() * &c;
    Ok(ReducedRep { matrix, blocks: d.blocks.clone(), ranges: d.ranges.clone() })
}

impl ReducedRep {
    pub fn block(&self, i: usize) -> DMatrix<C64> {
        let r = &self.ranges[i];
        self.matrix.view((r.start, r.start), (r.dimension, r.dimension)).into_owned()
    }

    /// Frobenius norm of everything outside the diagonal blocks.
    pub fn off_block_residual(&self) -> f64 {
        let mut owner = vec![0; self.matrix.nrows()];
        for (k, r) in self.ranges.iter().enumerate() {
            owner[r.start..r.start + r.dimension].fill(k);
        }
        let mut sq = 0.0;
        for ((i, j), x) in self.matrix.iter().enumerate().map(|(k, x)| ((k % self.matrix.nrows(), k / self.matrix.nrows()), x)) {
            if owner[i] != owner[j] {
                sq += x.norm_sqr();
            }
        }
        sq.sqrt()
    }

    pub fn block_trace(&self, i: usize) -> C64 {
        self.block(i).trace()
    }
}

/// `χ_s(ψ) = Σ_m e^{imψ} = sin((2s+1)ψ/2)/sin(ψ/2)`.
pub fn spin_character(s: HalfInt, psi: f64) -> f64 {
    s.projections().map(|m| (m.to_f64() * psi).cos()).sum()
}

/// A 2×2 matrix image of a four-vector carrying its orbit label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OnOrbitTensor {
    pub matrix: Matrix2<C64>,
    pub n: OrbitPoint,
}

impl OnOrbitTensor {
    pub fn from_vector(a: &FourVector, n: OrbitPoint) -> Self {
        Self { matrix: vector_to_matrix(a), n }
    }

    pub fn to_vector(&self) -> Result<FourVector> {
        matrix_to_vector(&self.matrix)
    }

    /// `B(n)⁻¹ 𝒜 B(n)^{†-1}`, the components seen from the rest frame of `n`.
    pub fn rest_frame(&self) -> Matrix2<C64> {
        let b = spin_boost(&self.n.forward()).expect("forward cone").inverse();
        b.matrix() * self.matrix * b.matrix().adjoint()
    }
}

/// `𝒜 → M 𝒜 M†` with the label moved to `Λn`. In rest-frame components
/// this is `D(Λ, n) 𝒜_{n₀} D(Λ, n)†`.
pub fn transform_on_orbit(t: &OnOrbitTensor, lambda: &LorentzMatrix) -> OnOrbitTensor {
    let m = lift(lambda);
    OnOrbitTensor { matrix: m.matrix() * t.matrix * m.matrix().adjoint(), n: orbit_act(lambda, &t.n) }
}

/// Components `T^{(αβ),(γδ)}` of `𝒜 ⊗ ℬ`, stored at `(2α+β, 2γ+δ)`.
pub fn rank2_components(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r / 2, r % 2)] * b[(c / 2, c % 2)])
}

/// Inverts the matrix map on both index pairs: `t^{μν}` from `T^{(αβ),(γδ)}`.
pub fn extract_rank2(t: &Matrix4<C64>) -> Matrix4<C64> {
    // coefficient of entry (α, β) in the μ-th component
    let coeff: [[C64; 4]; 4] = std::array::from_fn(|slot| {
        let mut e = Matrix2::zeros();
        e[(slot / 2, slot % 2)] = C64::new(1.0, 0.0);
        matrix_to_complex_vector(&e)
    });
    Matrix4::from_fn(|mu, nu| {
        let mut s = C64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                s += coeff[r][mu] * coeff[c][nu] * t[(r, c)];
            }
        }
        s
    })
}

/// Product of `m` vector slots and `k` spinor slots in rest-frame spin
/// components, `2m + k` spin-½ indices in all.
#[derive(Clone, Debug)]
pub struct MixedTensor {
    pub n: OrbitPoint,
    pub vector_slots: usize,
    pub spinor_slots: usize,
    pub components: DVector<C64>,
}

/// Direct product of vector factors `a^μ` and spinor factors `ψ` (covariant
/// components, `ψ = B(n) ξ`) at the orbit point `n`.
pub fn build_higher_rank(n: &OrbitPoint, vectors: &[FourVector], spinors: &[Vector2<C64>]) -> Result<MixedTensor> {
    let indices = 2 * vectors.len() + spinors.len();
    check_spin_count(indices, state_cap())?;
    let b_inv = spin_boost(&n.forward())?.inverse();
    let mut comps = DVector::from_element(1, C64::new(1.0, 0.0));
    for a in vectors {
        let t = OnOrbitTensor::from_vector(a, *n);
        let rest = t.rest_frame() * epsilon();
        let flat = DVector::from_iterator(4, (0..4).map(|k| rest[(k / 2, k % 2)]));
        comps = comps.kronecker(&flat);
    }
    for psi in spinors {
        let xi = b_inv.matrix() * psi;
        comps = comps.kronecker(&DVector::from_column_slice(xi.as_slice()));
    }
    Ok(MixedTensor { n: *n, vector_slots: vectors.len(), spinor_slots: spinors.len(), components: comps })
}

impl MixedTensor {
    pub fn indices(&self) -> usize {
        2 * self.vector_slots + self.spinor_slots
    }

    /// `D(Λ, n)^{⊗(2m+k)}` on the components, label moved to `Λn`.
    pub fn transform(&self, lambda: &LorentzMatrix) -> Result<MixedTensor> {
        let p = product_rep(lambda, &self.n, self.indices())?;
        Ok(MixedTensor {
            n: orbit_act(lambda, &self.n),
            vector_slots: self.vector_slots,
            spinor_slots: self.spinor_slots,
            components: p.assembled() * &self.components,
        })
    }

    /// Components in the total-spin basis, `Cᵀ v`.
    pub fn reduced(&self) -> Result<DVector<C64>> {
        let d = decomposition(self.indices())?;
        Ok(d.complex_matrix().transpose() * &self.components)
    }

    pub fn block_spec(&self) -> Result<Vec<BlockSpec>> {
        Ok(decomposition(self.indices())?.blocks.clone())
    }
}

/// Kind of two-component spinor in a bilinear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinorKind {
    /// Boosted with `B(n)`.
    First,
    /// Boosted with `B̄(n) = B(n)^{†-1}`.
    Second,
}

/// Rest-frame matrix of one spinor kind under `Λ`.
fn rest_action(kind: SpinorKind, lambda: &LorentzMatrix, n: &OrbitPoint) -> Matrix2<C64> {
    let fwd = n.forward();
    let b = *spin_boost(&fwd).expect("forward cone").matrix();
    let b_moved = *spin_boost(&orbit_act(lambda, &fwd)).expect("forward cone").matrix();
    let m = *lift(lambda).matrix();
    match kind {
        SpinorKind::First => b_moved.try_inverse().expect("invertible") * m * b,
        SpinorKind::Second => {
            let bar = |x: Matrix2<C64>| x.adjoint().try_inverse().expect("invertible");
            bar(b_moved).try_inverse().expect("invertible") * bar(m) * bar(b)
        }
    }
}

/// One of the four bilinear channels `X ⊗ Y†`: its 4×4 rest-frame action
/// `R_X ⊗ conj(R_Y)` taken on `Aε` instead of `A`, reduced with the
/// two-spin `C`.
pub fn combination_channel(x: SpinorKind, y: SpinorKind, lambda: &LorentzMatrix, n: &OrbitPoint) -> Result<ReducedRep> {
    let rx = to_dmatrix(&rest_action(x, lambda, n));
    let ry = to_dmatrix(&rest_action(y, lambda, n)).map(|z| z.conj());
    let eps = to_dmatrix(&epsilon());
    let id = DMatrix::<C64>::identity(2, 2);
    let action = id.kronecker(&eps.transpose()) * rx.kronecker(&ry) * id.kronecker(&eps);
    let d = decomposition(2)?;
    let c = d.complex_matrix();
    Ok(ReducedRep { matrix: c.transpose() * action * &c, blocks: d.blocks.clone(), ranges: d.ranges.clone() })
}
