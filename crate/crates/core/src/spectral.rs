//! Instantaneous eigenstates of `H(t)`, gap tracking and the adiabaticity
//! diagnostic.

use crate::error::{Error, Result};
use crate::linalg::jacobi_eigen;
use crate::model::{hamiltonian_at, hamiltonian_rate_at, HermitianMatrix3, SystemConfig};

/// Gaps at or below this are treated as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-12;

pub type RealVec3 = [f64; 3];

/// Sorted eigen-decomposition of a real symmetric `H(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    /// Ascending eigenvalues `e0 <= e1 <= e2`.
    pub energies: [f64; 3],
    /// `vectors[n]` is the unit eigenvector of `energies[n]`.
    pub vectors: [RealVec3; 3],
    /// Evaluation time; `NaN` when built from a bare matrix.
    pub t: f64,
}

impl EigenSystem {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn ground_state(&self) -> &RealVec3 {
        &self.vectors[0]
    }

    /// `e1 - e0`
    pub fn gap(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }

    fn at_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

pub fn dot(a: &RealVec3, b: &RealVec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn negated(v: &RealVec3) -> RealVec3 {
    [-v[0], -v[1], -v[2]]
}

/// Flip so that the largest-magnitude component is positive (first index
/// wins ties).
fn fix_sign(v: RealVec3) -> RealVec3 {
    let mut idx = 0;
    for k in 1..3 {
        if v[k].abs() > v[idx].abs() {
            idx = k;
        }
    }
    if v[idx] < 0.0 {
        negated(&v)
    } else {
        v
    }
}

/// Sorted, orthonormal, sign-fixed eigen-decomposition of a real symmetric
/// matrix. Imaginary parts of `h` are ignored.
pub fn eigensystem(h: &HermitianMatrix3) -> Result<EigenSystem> {
    let (values, v) = jacobi_eigen(&h.real_part())?;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut energies = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (n, &k) in order.iter().enumerate() {
        energies[n] = values[k];
        vectors[n] = fix_sign([v[0][k], v[1][k], v[2][k]]);
    }
    Ok(EigenSystem {
        energies,
        vectors,
        t: f64::NAN,
    })
}

pub fn eigensystem_at(config: &SystemConfig, t: f64) -> Result<EigenSystem> {
    Ok(eigensystem(&hamiltonian_at(config, t))?.at_time(t))
}

/// Eigen-decompositions along a time grid with continuous eigenvector signs.
///
/// The first point uses the static sign rule; every later vector is flipped
/// if needed to have positive overlap with its predecessor.
pub fn eigensystem_path(config: &SystemConfig, grid: &[f64]) -> Result<Vec<EigenSystem>> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("time grid must be strictly increasing".into()));
    }
    let mut path: Vec<EigenSystem> = Vec::with_capacity(grid.len());
    for &t in grid {
        let mut es = eigensystem_at(config, t)?;
        if let Some(prev) = path.last() {
            for n in 0..3 {
                if dot(&prev.vectors[n], &es.vectors[n]) < 0.0 {
                    es.vectors[n] = negated(&es.vectors[n]);
                }
            }
        }
        path.push(es);
    }
    Ok(path)
}

pub fn energy_gap(config: &SystemConfig, t: f64) -> Result<f64> {
    Ok(eigensystem_at(config, t)?.gap())
}

/// Location and value of the smallest ground-state gap on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinGap {
    pub t: f64,
    pub gap: f64,
}

/// Smallest `e1 - e0` over `grid`; a non-positive minimum is reported as a
/// level crossing.
pub fn min_gap(config: &SystemConfig, grid: &[f64]) -> Result<MinGap> {
    let mut best = MinGap {
        t: f64::NAN,
        gap: f64::INFINITY,
    };
    for &t in grid {
        let gap = energy_gap(config, t)?;
        if gap < best.gap {
            best = MinGap { t, gap };
        }
    }
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    if best.gap <= 0.0 {
        return Err(Error::LevelCrossing {
            t: best.t,
            gap: best.gap,
        });
    }
    Ok(best)
}

/// Hellmann–Feynman couplings `<psi_m| d psi_0/dt>` for `m = 1, 2`.
///
/// Signs follow the eigenvectors in `es`.
pub fn ground_state_couplings(config: &SystemConfig, es: &EigenSystem) -> Result<[f64; 2]> {
    if es.gap() <= DEGENERATE_GAP {
        return Err(Error::SingularGap {
            t: es.t,
            gap: es.gap(),
        });
    }
    let rate = hamiltonian_rate_at(config, es.t);
    let mut out = [0.0; 2];
    for (slot, m) in out.iter_mut().zip(1..3) {
        let num = rate.real_sandwich(&es.vectors[m], &es.vectors[0]);
        *slot = num / (es.energies[0] - es.energies[m]);
    }
    Ok(out)
}

/// `max_m |<psi_m| dH/dt |psi_0>| / (e_m - e_0)^2` over the two excited states.
/// Small values mean the ground state is followed adiabatically.
pub fn adiabaticity_metric(config: &SystemConfig, t: f64) -> Result<f64> {
    let es = eigensystem_at(config, t)?;
    adiabaticity_metric_of(config, &es)
}

pub fn adiabaticity_metric_of(config: &SystemConfig, es: &EigenSystem) -> Result<f64> {
    if es.gap() <= DEGENERATE_GAP {
        return Err(Error::SingularGap {
            t: es.t,
            gap: es.gap(),
        });
    }
    let rate = hamiltonian_rate_at(config, es.t);
    let mut worst: f64 = 0.0;
    for m in 1..3 {
        let num = rate.real_sandwich(&es.vectors[m], &es.vectors[0]).abs();
        let de = es.energies[m] - es.energies[0];
        worst = worst.max(num / (de * de));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gate_voltage_left, gate_voltage_right};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Real roots of the characteristic cubic of `h`, found by bisection on
    /// the determinant polynomial. Independent of the Jacobi path.
    fn cubic_roots(h: &[[f64; 3]; 3]) -> [f64; 3] {
        let tr = h[0][0] + h[1][1] + h[2][2];
        let minors = h[0][0] * h[1][1] - h[0][1] * h[1][0] + h[0][0] * h[2][2]
            - h[0][2] * h[2][0]
            + h[1][1] * h[2][2]
            - h[1][2] * h[2][1];
        let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
            - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
            + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
        let p = |x: f64| ((x - tr) * x + minors) * x - det;
        let bound = 1.0 + h.iter().flatten().map(|v| v.abs()).sum::<f64>();
        // scan for sign changes, then bisect
        let n = 200_000;
        let mut roots = Vec::new();
        let mut x0 = -bound;
        let mut f0 = p(x0);
        for k in 1..=n {
            let x1 = -bound + 2.0 * bound * k as f64 / n as f64;
            let f1 = p(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut a, mut b) = (x0, x1);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if p(a) * p(mid) <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            x0 = x1;
            f0 = f1;
        }
        assert_eq!(roots.len(), 3, "{roots:?}");
        [roots[0], roots[1], roots[2]]
    }

    fn baseline(alpha_tau: f64) -> SystemConfig {
        SystemConfig::from_params(0.8, 1.0, 20.0, alpha_tau / 400.0, 400.0).unwrap()
    }

    fn check_decomposition(h: &HermitianMatrix3, es: &EigenSystem) {
        let m = h.real_part();
        for n in 0..3 {
            let v = es.vectors[n];
            for i in 0..3 {
                let hv = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
                assert!((hv - es.energies[n] * v[i]).abs() <= 1e-10);
            }
            for k in 0..3 {
                let expected = if n == k { 1.0 } else { 0.0 };
                assert!((dot(&v, &es.vectors[k]) - expected).abs() <= 1e-10);
            }
        }
        assert!(es.energies[0] <= es.energies[1] && es.energies[1] <= es.energies[2]);
    }

    #[test]
    fn diagonal_matrix() {
        let h = HermitianMatrix3::from_real([[0.0, 0.0, 0.0], [0.0, -5.0, 0.0], [0.0, 0.0, -3.0]]);
        let es = eigensystem(&h).unwrap();
        assert_eq!(es.energies, [-5.0, -3.0, 0.0]);
        assert_eq!(es.vectors, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
    }

    #[test]
    fn initial_hamiltonian_against_cubic_oracle() {
        let c = baseline(5.0);
        let h = hamiltonian_at(&c, 0.0);
        let es = eigensystem(&h).unwrap();
        let roots = cubic_roots(&h.real_part());
        for n in 0..3 {
            assert!((es.energies[n] - roots[n]).abs() < 1e-10, "{es:?} vs {roots:?}");
        }
        check_decomposition(&h, &es);
        // separable-limit structure: e0 ~ -mu0 - J1^2/mu0, e_pm ~ +-J2
        assert!((es.energies[0] - (-20.0 - 0.64 / 20.0)).abs() < 1e-3);
        assert!((es.energies[1] + 1.0).abs() < 0.05);
        assert!((es.energies[2] - 1.0).abs() < 0.05);
        assert_relative_eq!(es.gap(), 19.048_676_548_966, max_relative = 1e-10);
        assert!((es.gap() - 19.0).abs() / 19.0 < 0.02);
    }

    #[test]
    fn mr_block_alone() {
        let h = HermitianMatrix3::from_real([[-1e6, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]);
        let es = eigensystem(&h).unwrap();
        assert_relative_eq!(es.energies[1], -1.0, epsilon = 1e-9);
        assert_relative_eq!(es.energies[2], 1.0, epsilon = 1e-9);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let minus = es.vectors[1];
        let plus = es.vectors[2];
        assert!((dot(&minus, &[0.0, s, -s]).abs() - 1.0).abs() < 1e-12);
        assert!((dot(&plus, &[0.0, s, s]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn static_sign_rule() {
        let c = baseline(5.0);
        for t in [0.0, 100.0, 200.0, 300.0, 400.0] {
            let es = eigensystem_at(&c, t).unwrap();
            for v in es.vectors {
                let big = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
                assert!(big > 0.0);
            }
        }
    }

    #[test]
    fn constant_hamiltonian_path_is_constant() {
        let c = SystemConfig::from_params(0.8, 1.0, 0.0, 0.01, 400.0).unwrap();
        let grid: Vec<f64> = (0..50).map(|k| 8.0 * k as f64).collect();
        let path = eigensystem_path(&c, &grid).unwrap();
        for es in &path {
            assert_eq!(es.energies, path[0].energies);
            assert_eq!(es.vectors, path[0].vectors);
        }
    }

    #[test]
    fn ground_state_moves_from_left_to_right() {
        let c = baseline(5.0);
        let grid: Vec<f64> = (0..2000).map(|k| 400.0 * k as f64 / 1999.0).collect();
        let path = eigensystem_path(&c, &grid).unwrap();
        assert!(path[0].ground_state()[0].abs() >= 0.998);
        assert!(path.last().unwrap().ground_state()[2].abs() >= 0.998);
        for w in path.windows(2) {
            assert!(dot(w[0].ground_state(), w[1].ground_state()) > 0.0);
        }
    }

    #[test]
    fn path_rejects_unsorted_grid() {
        assert!(eigensystem_path(&baseline(5.0), &[0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn symmetric_gap_for_equal_couplings() {
        let c = SystemConfig::from_params(1.0, 1.0, 20.0, 5.0 / 400.0, 400.0).unwrap();
        for s in [0.0, 13.0, 77.7, 150.0, 200.0] {
            let a = energy_gap(&c, 200.0 - s).unwrap();
            let b = energy_gap(&c, 200.0 + s).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn static_hamiltonian_metric_is_zero() {
        let c = SystemConfig::from_params(0.8, 1.0, 0.0, 0.01, 400.0).unwrap();
        for t in [0.0, 123.0, 400.0] {
            assert_eq!(adiabaticity_metric(&c, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn metric_is_small_for_baseline() {
        let c = baseline(5.0);
        let worst = (0..=2000)
            .map(|k| adiabaticity_metric(&c, 400.0 * k as f64 / 2000.0).unwrap())
            .fold(0.0, f64::max);
        assert!(worst < 0.05, "{worst}");
    }

    #[test]
    fn degenerate_gap_is_an_error() {
        // all couplings and pulses off: triple degeneracy
        let c = SystemConfig::from_params(0.0, 0.0, 0.0, 0.01, 400.0).unwrap();
        assert!(matches!(adiabaticity_metric(&c, 10.0), Err(Error::SingularGap { .. })));
    }

    #[test]
    fn level_crossing_detected() {
        let c = SystemConfig::from_params(0.0, 0.0, 0.0, 0.01, 400.0).unwrap();
        assert!(matches!(min_gap(&c, &[0.0, 1.0]), Err(Error::LevelCrossing { .. })));
        let ok = min_gap(&baseline(5.0), &[0.0, 200.0, 400.0]).unwrap();
        assert_eq!(ok.t, 200.0);
    }

    #[test]
    fn hellmann_feynman_matches_finite_difference() {
        let c = baseline(5.0);
        let d = 1e-3;
        for t in [50.0, 120.0, 200.0, 260.0, 350.0] {
            let path = eigensystem_path(&c, &[t - d, t, t + d]).unwrap();
            let hf = ground_state_couplings(&c, &path[1]).unwrap();
            for (m, &value) in hf.iter().enumerate() {
                let psi_m = path[1].vectors[m + 1];
                let plus = path[2].vectors[0];
                let minus = path[0].vectors[0];
                let fd = (dot(&psi_m, &plus) - dot(&psi_m, &minus)) / (2.0 * d);
                assert!((value - fd).abs() <= 1e-5, "t={t} m={}: {value} vs {fd}", m + 1);
            }
        }
    }

    #[test]
    fn boundary_overlap_increases_with_depth() {
        let mut prev = (0.0, 0.0);
        for mu0 in [10.0, 20.0, 40.0, 80.0] {
            let c = SystemConfig::from_params(0.8, 1.0, mu0, 5.0 / 400.0, 400.0).unwrap();
            let left = eigensystem_at(&c, 0.0).unwrap().ground_state()[0].abs();
            let right = eigensystem_at(&c, 400.0).unwrap().ground_state()[2].abs();
            assert!(left > prev.0 && right > prev.1);
            prev = (left, right);
        }
    }

    proptest! {
        #[test]
        fn decomposition_invariants(j1 in -3.0f64..3.0, j2 in -3.0f64..3.0, mu0 in 0.0f64..60.0,
                                    k in 3.0f64..8.0, tau in 10.0f64..500.0, frac in 0.0f64..1.0) {
            let c = SystemConfig::from_params(j1, j2, mu0, k / tau, tau).unwrap();
            let t = frac * tau;
            let h = hamiltonian_at(&c, t);
            let es = eigensystem_at(&c, t).unwrap();
            check_decomposition(&h, &es);
            let tr = gate_voltage_left(&c.schedule, t) + gate_voltage_right(&c.schedule, t);
            prop_assert!((es.energies.iter().sum::<f64>() - tr).abs() <= 1e-10);
            let flipped = eigensystem_at(&c.gauge_flipped(), t).unwrap();
            for n in 0..3 {
                prop_assert!((flipped.energies[n] - es.energies[n]).abs() <= 1e-12);
            }
        }
    }
}
