//! Informative Vector Machine objective `f(S) = ½·log det(I + σ⁻²·K_S)` with
//! a squared-exponential kernel, evaluated through a lower-triangular
//! Cholesky factor that grows one row per inserted item.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::Objective;
use crate::window::ItemId;

/// Pivots at or below this value are treated as a breakdown.
pub const PIVOT_FLOOR: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct KernelParams {
    pub h: f64,
    pub sigma: f64,
}

impl KernelParams {
    pub fn new(h: f64, sigma: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Input(format!("kernel bandwidth h must be positive, got {h}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Input(format!("noise scale sigma must be positive, got {sigma}")));
        }
        Ok(KernelParams { h, sigma })
    }

    fn inv_sigma2(&self) -> f64 {
        1.0 / (self.sigma * self.sigma)
    }
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams { h: 0.75, sigma: 1.0 }
    }
}

fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `exp(-‖x−y‖² / h²)`.
pub fn se_kernel(x: &[f64], y: &[f64], params: &KernelParams) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Input(format!("dimension mismatch: {} vs {}", x.len(), y.len())));
    }
    Ok((-sq_dist(x, y) / (params.h * params.h)).exp())
}

/// Lower-triangular factor `L` with `L·Lᵀ = I + σ⁻²·K_S`, stored row-packed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CholState {
    members: Vec<ItemId>,
    packed: Vec<f64>,
    generation: u64,
}

impl CholState {
    pub fn new() -> Self {
        CholState::default()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ItemId] {
        &self.members
    }

    fn row(&self, i: usize) -> &[f64] {
        let start = i * (i + 1) / 2;
        &self.packed[start..start + i + 1]
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.row(i)[i]
    }

    /// `½·log det = Σ log L_ii`.
    pub fn log_det_half(&self) -> f64 {
        (0..self.order()).map(|i| self.diag(i).ln()).sum()
    }

    /// Dense copy of `L` (row-major, `n×n`).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.resize(n, 0.0);
                r
            })
            .collect()
    }

    /// Solves `L·w = c` by forward substitution.
    fn forward_solve(&self, c: &[f64]) -> Vec<f64> {
        let mut w = Vec::with_capacity(c.len());
        for (i, &ci) in c.iter().enumerate() {
            let row = self.row(i);
            let dot: f64 = row[..i].iter().zip(&w).map(|(l, x)| l * x).sum();
            w.push((ci - dot) / row[i]);
        }
        w
    }
}

/// Data needed to append one row to a [`CholState`].
#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    id: ItemId,
    w: Vec<f64>,
    diag: f64,
    order: usize,
    generation: u64,
}

/// Result of [`Ivm::marginal`]. `extension` is `None` when the Schur
/// complement fell to the pivot floor; `gain` is then reported as 0.
#[derive(Clone, Debug, PartialEq)]
pub struct IvmMarginal {
    pub gain: f64,
    pub degenerate: bool,
    pub extension: Option<Extension>,
}

#[derive(Clone, Debug)]
pub struct Ivm {
    points: Arc<[Vec<f64>]>,
    params: KernelParams,
}

impl Ivm {
    pub fn new(points: impl Into<Arc<[Vec<f64>]>>, params: KernelParams) -> Result<Self> {
        let points = points.into();
        if let Some(first) = points.first() {
            let d = first.len();
            if let Some(i) = points.iter().position(|p| p.len() != d) {
                return Err(Error::Input(format!("point {i} has dimension {} but expected {d}", points[i].len())));
            }
        }
        Ok(Ivm { points, params })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn kernel(&self, a: ItemId, b: ItemId) -> f64 {
        let h2 = self.params.h * self.params.h;
        (-sq_dist(&self.points[a], &self.points[b]) / h2).exp()
    }

    /// Fresh factorization of `I + σ⁻²·K_S`.
    pub fn factorize(&self, ids: &[ItemId]) -> Result<CholState> {
        self.check_ids(ids)?;
        let s2 = self.params.inv_sigma2();
        let n = ids.len();
        let mut packed = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            let base_i = i * (i + 1) / 2;
            for j in 0..=i {
                let base_j = j * (j + 1) / 2;
                let a = if i == j { 1.0 } else { 0.0 } + s2 * self.kernel(ids[i], ids[j]);
                let dot: f64 = (0..j).map(|m| packed[base_i + m] * packed[base_j + m]).sum();
                if i == j {
                    let pivot = a - dot;
                    if pivot <= PIVOT_FLOOR {
                        return Err(Error::Degenerate(format!("non-positive pivot {pivot:e} at row {i}")));
                    }
                    packed.push(pivot.sqrt());
                } else {
                    packed.push((a - dot) / packed[base_j + j]);
                }
            }
        }
        Ok(CholState { members: ids.to_vec(), packed, generation: 0 })
    }

    /// `½·log det(I + σ⁻²·K_S)` from a fresh factorization.
    pub fn value(&self, ids: &[ItemId]) -> Result<f64> {
        Ok(self.factorize(ids)?.log_det_half())
    }

    /// Schur-complement marginal gain of `id` against the set factored in `chol`.
    pub fn marginal_gain(&self, id: ItemId, chol: &CholState) -> IvmMarginal {
        let s2 = self.params.inv_sigma2();
        let c: Vec<f64> = chol.members.iter().map(|&m| s2 * self.kernel(id, m)).collect();
        let w = chol.forward_solve(&c);
        let d = 1.0 + s2 * self.kernel(id, id) - w.iter().map(|x| x * x).sum::<f64>();
        if d <= PIVOT_FLOOR {
            return IvmMarginal { gain: 0.0, degenerate: true, extension: None };
        }
        IvmMarginal {
            gain: 0.5 * d.ln(),
            degenerate: false,
            extension: Some(Extension { id, w, diag: d.sqrt(), order: chol.order(), generation: chol.generation }),
        }
    }

    /// Appends the row `[wᵀ, √d]` produced by [`Ivm::marginal_gain`].
    pub fn extend(&self, chol: &mut CholState, ext: Extension) -> Result<()> {
        if ext.order != chol.order() || ext.generation != chol.generation {
            return Err(Error::StaleExtension { expected: ext.order, generation: ext.generation });
        }
        chol.packed.extend_from_slice(&ext.w);
        chol.packed.push(ext.diag);
        chol.members.push(ext.id);
        chol.generation += 1;
        Ok(())
    }

    /// Hadamard bound: `f(S) ≤ (k/2)·log(1 + σ⁻²·max K(x,x))`, floored at 1.
    pub fn upper_bound(&self, k: usize) -> f64 {
        let kmax = if self.points.is_empty() { 0.0 } else { 1.0 };
        (0.5 * k as f64 * (1.0 + self.params.inv_sigma2() * kmax).ln()).max(1.0)
    }
}

impl Objective for Ivm {
    type State = CholState;

    fn ground_len(&self) -> usize {
        self.points.len()
    }

    fn empty_state(&self) -> CholState {
        CholState::new()
    }

    fn state_value(&self, state: &CholState) -> f64 {
        state.log_det_half()
    }

    fn gain(&self, state: &CholState, id: ItemId) -> f64 {
        self.marginal_gain(id, state).gain
    }

    fn insert(&self, state: &mut CholState, id: ItemId) {
        // A degenerate item is kept in the solution but not in the factor.
        if let Some(ext) = self.marginal_gain(id, state).extension {
            self.extend(state, ext).expect("extension computed against the current factor");
        }
    }

    fn eval(&self, ids: &[ItemId]) -> f64 {
        match self.value(ids) {
            Ok(v) => v,
            Err(_) => self.state_value(&self.build(ids)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ivm(points: Vec<Vec<f64>>) -> Ivm {
        Ivm::new(points, KernelParams::new(0.75, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn kernel_identity_and_unit_exponent() {
        let p = KernelParams::new(2.0, 1.0).unwrap();
        assert_eq!(se_kernel(&[1.0, 2.0], &[1.0, 2.0], &p).unwrap(), 1.0);
        assert_abs_diff_eq!(se_kernel(&[0.0, 0.0], &[2.0, 0.0], &p).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn kernel_dimension_mismatch() {
        assert!(se_kernel(&[1.0], &[1.0, 2.0], &KernelParams::default()).is_err());
    }

    #[test]
    fn small_values() {
        let f = ivm(vec![vec![0.3, 0.1], vec![0.3, 0.1]]);
        assert_eq!(f.value(&[]).unwrap(), 0.0);
        assert_abs_diff_eq!(f.value(&[0]).unwrap(), 0.5 * 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(f.value(&[0, 1]).unwrap(), 0.5 * 3f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(0.5 * 2f64.ln(), 0.346574, epsilon = 1e-6);
        assert_abs_diff_eq!(0.5 * 3f64.ln(), 0.549306, epsilon = 1e-6);
    }

    #[test]
    fn marginal_against_duplicate_member() {
        let f = ivm(vec![vec![1.0], vec![1.0]]);
        let empty = CholState::new();
        let m0 = f.marginal_gain(0, &empty);
        assert_abs_diff_eq!(m0.gain, 0.5 * 2f64.ln(), epsilon = 1e-12);
        let mut chol = CholState::new();
        f.extend(&mut chol, m0.extension.unwrap()).unwrap();
        assert_abs_diff_eq!(chol.diag(0), 2f64.sqrt(), epsilon = 1e-15);
        let m1 = f.marginal_gain(1, &chol);
        assert_abs_diff_eq!(m1.gain, 0.5 * 1.5f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(m1.gain, 0.202733, epsilon = 1e-6);
        assert_abs_diff_eq!(m1.gain, f.value(&[0, 1]).unwrap() - f.value(&[0]).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn stale_extension_is_rejected() {
        let f = ivm(vec![vec![0.0], vec![1.0], vec![2.0]]);
        let mut chol = CholState::new();
        let a = f.marginal_gain(0, &chol).extension.unwrap();
        let b = f.marginal_gain(1, &chol).extension.unwrap();
        f.extend(&mut chol, a).unwrap();
        assert!(matches!(f.extend(&mut chol, b), Err(Error::StaleExtension { .. })));
    }

    #[test]
    fn degenerate_pivot_reports_zero_gain() {
        // sigma tiny makes I + σ⁻²K nearly singular for duplicated points.
        let f = Ivm::new(vec![vec![0.0], vec![0.0]], KernelParams::new(1.0, 1e-9).unwrap()).unwrap();
        let mut chol = CholState::new();
        let first = f.marginal_gain(0, &chol);
        f.extend(&mut chol, first.extension.unwrap()).unwrap();
        let second = f.marginal_gain(1, &chol);
        assert!(second.degenerate);
        assert_eq!(second.gain, 0.0);
        let mut state = chol.clone();
        f.insert(&mut state, 1);
        assert_eq!(state.order(), 1);
    }

    #[test]
    fn upper_bound_hadamard() {
        let f = ivm(vec![vec![0.0]; 3]);
        assert_abs_diff_eq!(f.upper_bound(5), 2.5 * 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(f.upper_bound(5), 1.732868, epsilon = 1e-6);
        assert_eq!(f.upper_bound(1), 1.0);
    }
}
