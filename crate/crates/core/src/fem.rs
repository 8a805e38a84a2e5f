//! Galerkin and SUPG assembly of the linear finite element system for
//! `-eps u'' + u' = 1` with homogeneous Dirichlet data, and its solution.

use crate::cost::CostKind;
use crate::error::{Error, Result};
use crate::mesh::Partition;
use crate::piecewise::PiecewiseLinear;
use crate::scalar::Real;

/// Coefficients of `F(x_{i-1}), F(x_i), F(x_{i+1})` in row `i` of the discrete
/// operator, together with the load `f_i = (h_{i-1} + h_i) / 2`.
///
/// The diffusion part is `eps * K` (stiffness). The convection part is the
/// centered `C` for Galerkin and the fully upwinded difference for SUPG with
/// `delta_i = h_{i-1} / 2`.
pub(crate) fn stencil<T: Real>(p: &Partition<T>, eps: T, kind: CostKind, i: usize) -> ([T; 3], T) {
    let (hl, hr) = (p.h(i - 1), p.h(i));
    let half = T::lit(0.5);
    let (cl, cd, cr) = match kind {
        CostKind::Galerkin => (-half, T::zero(), half),
        CostKind::Supg => (-T::one(), T::one(), T::zero()),
    };
    let row = [
        -eps / hl + cl,
        eps * (hl.recip() + hr.recip()) + cd,
        -eps / hr + cr,
    ];
    (row, (hl + hr) * half)
}

pub(crate) fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps > T::zero() && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "eps must be positive and finite, got {eps}"
        )))
    }
}

/// Tridiagonal system `A u = f` on the interior nodes `x_1..x_{N-1}`.
///
/// Row `r` (0-based) corresponds to node `x_{r+1}`. `sub[0]` and `sup[N-2]`
/// are stored as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
    pub rhs: Vec<T>,
    eps: T,
    kind: CostKind,
    partition: Partition<T>,
}

impl<T: Real> TridiagonalSystem<T> {
    pub fn assemble(p: &Partition<T>, eps: T, kind: CostKind) -> Result<Self> {
        check_eps(eps)?;
        let m = p.interior_count();
        let mut sys = Self {
            sub: vec![T::zero(); m],
            diag: vec![T::zero(); m],
            sup: vec![T::zero(); m],
            rhs: vec![T::zero(); m],
            eps,
            kind,
            partition: p.clone(),
        };
        for r in 0..m {
            let ([l, d, u], f) = stencil(p, eps, kind, r + 1);
            if r > 0 {
                sys.sub[r] = l;
            }
            sys.diag[r] = d;
            if r + 1 < m {
                sys.sup[r] = u;
            }
            sys.rhs[r] = f;
        }
        Ok(sys)
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn partition(&self) -> &Partition<T> {
        &self.partition
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A u`.
    pub fn apply(&self, u: &[T]) -> Vec<T> {
        let m = self.len();
        (0..m)
            .map(|r| {
                let mut s = self.diag[r] * u[r];
                if r > 0 {
                    s += self.sub[r] * u[r - 1];
                }
                if r + 1 < m {
                    s += self.sup[r] * u[r + 1];
                }
                s
            })
            .collect()
    }

    pub fn solve(&self) -> Result<NodalFunction<T>> {
        let values = thomas_solve(&self.sub, &self.diag, &self.sup, &self.rhs)?;
        NodalFunction::new(self.partition.clone(), values)
    }
}

pub fn assemble_galerkin<T: Real>(p: &Partition<T>, eps: T) -> Result<TridiagonalSystem<T>> {
    TridiagonalSystem::assemble(p, eps, CostKind::Galerkin)
}

pub fn assemble_supg<T: Real>(p: &Partition<T>, eps: T) -> Result<TridiagonalSystem<T>> {
    TridiagonalSystem::assemble(p, eps, CostKind::Supg)
}

pub fn solve_tridiagonal<T: Real>(sys: &TridiagonalSystem<T>) -> Result<NodalFunction<T>> {
    sys.solve()
}

/// Thomas algorithm without pivoting. `sub[0]` and `sup[m-1]` are ignored.
pub fn thomas_solve<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let m = diag.len();
    for len in [sub.len(), sup.len(), rhs.len()] {
        if len != m {
            return Err(Error::SizeMismatch {
                expected: m,
                found: len,
            });
        }
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let tiny = T::min_positive_value().max(T::lit(1e-300));
    let mut c = vec![T::zero(); m];
    let mut d = vec![T::zero(); m];
    for r in 0..m {
        let pivot = if r > 0 {
            diag[r] - sub[r] * c[r - 1]
        } else {
            diag[0]
        };
        if !(pivot.abs() > tiny) {
            return Err(Error::SingularSystem {
                row: r,
                pivot: pivot.to_f64_lossy(),
            });
        }
        c[r] = if r + 1 < m { sup[r] / pivot } else { T::zero() };
        d[r] = if r > 0 {
            (rhs[r] - sub[r] * d[r - 1]) / pivot
        } else {
            rhs[r] / pivot
        };
    }
    let mut x = d;
    for r in (0..m - 1).rev() {
        let next = x[r + 1];
        x[r] -= c[r] * next;
    }
    Ok(x)
}

/// A finite element function given by its interior nodal values; the boundary
/// values are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalFunction<T> {
    partition: Partition<T>,
    values: Vec<T>,
}

impl<T: Real> NodalFunction<T> {
    pub fn new(partition: Partition<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != partition.interior_count() {
            return Err(Error::SizeMismatch {
                expected: partition.interior_count(),
                found: values.len(),
            });
        }
        Ok(Self { partition, values })
    }

    pub fn partition(&self) -> &Partition<T> {
        &self.partition
    }

    /// Interior values `u(x_1)..u(x_{N-1})`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value at node `x_j`, `0 <= j <= N`.
    pub fn at_node(&self, j: usize) -> T {
        if j == 0 || j == self.partition.n() {
            T::zero()
        } else {
            self.values[j - 1]
        }
    }

    /// All `N + 1` nodal values including the zero boundary values.
    pub fn full_values(&self) -> Vec<T> {
        (0..=self.partition.n()).map(|j| self.at_node(j)).collect()
    }

    pub fn to_piecewise_linear(&self) -> PiecewiseLinear<T> {
        PiecewiseLinear::new(self.partition.nodes().to_vec(), self.full_values())
            .expect("partition nodes form valid breakpoints")
    }

    pub fn eval(&self, x: T) -> T {
        self.to_piecewise_linear().eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_solution;
    use crate::norms::{l2_error, QuadratureConfig};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Dense Gaussian elimination with partial pivoting (test oracle).
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for (off, row) in rest.iter_mut().enumerate() {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
                b[col + 1 + off] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
            x[row] = (b[row] - s) / a[row][row];
        }
        x
    }

    #[test]
    fn galerkin_two_elements() {
        let p = Partition::<f64>::uniform(2).unwrap();
        let sys = assemble_galerkin(&p, 0.1).unwrap();
        assert_close(sys.diag[0], 0.4, 1e-15);
        assert_close(sys.rhs[0], 0.5, 1e-15);
        let u = sys.solve().unwrap();
        assert_close(u.values()[0], 1.25, 1e-14);
    }

    #[test]
    fn galerkin_four_elements() {
        let p = Partition::<f64>::uniform(4).unwrap();
        let sys = assemble_galerkin(&p, 0.1).unwrap();
        for r in 0..3 {
            assert_close(sys.diag[r], 0.8, 1e-14);
            assert_close(sys.rhs[r], 0.25, 1e-15);
        }
        assert_close(sys.sub[1], -0.9, 1e-14);
        assert_close(sys.sub[2], -0.9, 1e-14);
        assert_close(sys.sup[0], 0.1, 1e-14);
        assert_close(sys.sup[1], 0.1, 1e-14);
        assert_eq!(sys.sub[0], 0.0);
        assert_eq!(sys.sup[2], 0.0);
    }

    #[test]
    fn galerkin_splits_into_symmetric_and_antisymmetric_parts() {
        let p = Partition::from_nodes(vec![0.0f64, 0.1, 0.3, 0.45, 0.7, 1.0]).unwrap();
        // eps must be positive, so the two parts come from two assemblies:
        // K = A(2) - A(1) and C = 2 A(1) - A(2).
        let a1 = assemble_galerkin(&p, 1.0).unwrap();
        let a2 = assemble_galerkin(&p, 2.0).unwrap();
        let m = a1.len();
        for r in 0..m - 1 {
            let k_up = a2.sup[r] - a1.sup[r];
            let k_low = a2.sub[r + 1] - a1.sub[r + 1];
            assert_close(k_up, k_low, 1e-13);
            let c_up = 2.0 * a1.sup[r] - a2.sup[r];
            let c_low = 2.0 * a1.sub[r + 1] - a2.sub[r + 1];
            assert_close(c_up, -c_low, 1e-13);
        }
        for r in 0..m {
            assert_close(2.0 * a1.diag[r] - a2.diag[r], 0.0, 1e-12);
        }
    }

    #[test]
    fn supg_two_elements() {
        let p = Partition::<f64>::uniform(2).unwrap();
        let sys = assemble_supg(&p, 0.1).unwrap();
        assert_close(sys.diag[0], 1.4, 1e-15);
        assert_close(sys.rhs[0], 0.5, 1e-15);
        assert_close(
            sys.solve().unwrap().values()[0],
            0.357_142_857_142_857_1,
            1e-15,
        );
    }

    #[test]
    fn supg_four_elements_small_eps() {
        let p = Partition::<f64>::uniform(4).unwrap();
        let sys = assemble_supg(&p, 0.001).unwrap();
        assert_close(sys.diag[1], 1.008, 1e-14);
        assert_close(sys.sub[1], -1.004, 1e-14);
        assert_close(sys.sup[1], -0.004, 1e-14);
    }

    #[test]
    fn supg_vanishing_diffusion_gives_identity_at_nodes() {
        for n in [4, 20, 100] {
            let p = Partition::<f64>::uniform(n).unwrap();
            let u = assemble_supg(&p, 1e-15).unwrap().solve().unwrap();
            for j in 1..n {
                assert_close(u.at_node(j), p.node(j), 1e-12);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_eps() {
        let p = Partition::<f64>::uniform(4).unwrap();
        assert!(assemble_galerkin(&p, 0.0).is_err());
        assert!(assemble_supg(&p, -1.0).is_err());
        assert!(assemble_supg(&p, f64::NAN).is_err());
    }

    #[test]
    fn identity_system_returns_rhs() {
        let rhs = vec![3.0, -1.0, 2.5, 7.0];
        let x = thomas_solve(&[0.0; 4], &[1.0; 4], &[0.0; 4], &rhs).unwrap();
        assert_eq!(x, rhs);
    }

    #[test]
    fn zero_pivot_is_reported() {
        let err = thomas_solve(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { row: 1, .. }));
        let err = thomas_solve(&[0.0], &[0.0], &[0.0], &[1.0]).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { row: 0, .. }));
    }

    #[test]
    fn size_mismatch_is_reported() {
        assert!(matches!(
            thomas_solve(&[0.0], &[1.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn thomas_matches_dense_elimination() {
        let mut state = 0x1234_5678_u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..50 {
            let m = 9;
            let sub: Vec<f64> = (0..m).map(|r| if r == 0 { 0.0 } else { next() }).collect();
            let sup: Vec<f64> = (0..m)
                .map(|r| if r == m - 1 { 0.0 } else { next() })
                .collect();
            let diag: Vec<f64> = (0..m).map(|_| 3.0 + next()).collect();
            let rhs: Vec<f64> = (0..m).map(|_| next()).collect();
            let mut dense = vec![vec![0.0; m]; m];
            for r in 0..m {
                dense[r][r] = diag[r];
                if r > 0 {
                    dense[r][r - 1] = sub[r];
                }
                if r + 1 < m {
                    dense[r][r + 1] = sup[r];
                }
            }
            let expected = dense_solve(dense, rhs.clone());
            let got = thomas_solve(&sub, &diag, &sup, &rhs).unwrap();
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn solution_residual_is_small() {
        let cases = [
            (0.1, CostKind::Galerkin),
            (0.001, CostKind::Supg),
            (0.001, CostKind::Galerkin),
        ];
        for (eps, kind) in cases {
            for n in [20, 40, 100] {
                let p = Partition::<f64>::uniform(n).unwrap();
                let sys = TridiagonalSystem::assemble(&p, eps, kind).unwrap();
                let u = sys.solve().unwrap();
                let au = sys.apply(u.values());
                let fmax = sys.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (a, f) in au.iter().zip(&sys.rhs) {
                    assert!((a - f).abs() <= 1e-12 * fmax);
                }
            }
        }
    }

    #[test]
    fn solve_is_bit_deterministic() {
        let p = Partition::<f64>::uniform(37).unwrap();
        let a = assemble_galerkin(&p, 0.013).unwrap().solve().unwrap();
        let b = assemble_galerkin(&p, 0.013).unwrap().solve().unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn galerkin_converges_at_second_order_in_l2() {
        let q = QuadratureConfig::default();
        let errs: Vec<f64> = [20, 40, 80]
            .iter()
            .map(|&n| {
                let p = Partition::<f64>::uniform(n).unwrap();
                let u = assemble_galerkin(&p, 0.1).unwrap().solve().unwrap();
                l2_error(&u.to_piecewise_linear(), 0.1, &q)
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio / 4.0 - 1.0).abs() < 0.05, "ratio {ratio}");
        }
    }

    #[test]
    fn nodal_function_interpolates() {
        let p = Partition::<f64>::uniform(4).unwrap();
        let u = NodalFunction::new(p, vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(u.at_node(0), 0.0);
        assert_eq!(u.at_node(4), 0.0);
        assert_close(u.eval(0.375), 1.5, 1e-15);
        assert_close(u.eval(0.875), 2.0, 1e-15);
        assert!(NodalFunction::new(Partition::<f64>::uniform(4).unwrap(), vec![1.0]).is_err());
    }

    #[test]
    fn single_precision_solve_tracks_double() {
        let p32 = Partition::<f32>::uniform(20).unwrap();
        let p64 = Partition::<f64>::uniform(20).unwrap();
        let u32 = assemble_galerkin(&p32, 0.1f32).unwrap().solve().unwrap();
        let u64 = assemble_galerkin(&p64, 0.1).unwrap().solve().unwrap();
        for (a, b) in u32.values().iter().zip(u64.values()) {
            assert!((*a as f64 - b).abs() < 1e-5);
        }
        for j in 1..20 {
            assert!((u64.at_node(j) - exact_solution(0.1, p64.node(j))).abs() < 1e-2);
        }
    }
}
