//! Hamiltonian discrimination: pick the evolution time `t` that minimizes the largest pairwise
//! fidelity between the unitaries `exp(-i H_m t)`.

use crate::chanfid::channel_fidelity;
use crate::channels::{compose, QuantumChannel};
use crate::error::{Error, Result};
use crate::matlin::herm_eig;
use crate::scalar::cis;
use crate::tol;
use crate::{ComplexMatrix, HermitianEigen};

/// Time-independent Hamiltonians `H_m` (hbar = 1) probed on `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct HamiltonianEnsemble {
    hamiltonians: Vec<ComplexMatrix>,
    spectra: Vec<HermitianEigen>,
    horizon: f64,
    grid_points: usize,
}

impl HamiltonianEnsemble {
    pub const DEFAULT_GRID: usize = 1024;

    pub fn new(hamiltonians: Vec<ComplexMatrix>, horizon: f64, grid_points: usize) -> Result<Self> {
        if hamiltonians.len() < 2 {
            return Err(Error::InvalidParameter("an ensemble needs at least two Hamiltonians".into()));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        if grid_points < 2 {
            return Err(Error::InvalidParameter("the time grid needs at least two points".into()));
        }
        let d = hamiltonians[0].ensure_square()?;
        let mut spectra = Vec::with_capacity(hamiltonians.len());
        for h in &hamiltonians {
            h.ensure_shape("Hamiltonian", d, d)?;
            let residual = h.hermitian_residual();
            if residual > tol::HERMITIAN {
                return Err(Error::NotHermitian { residual });
            }
            spectra.push(herm_eig(h)?);
        }
        Ok(Self {
            hamiltonians,
            spectra,
            horizon,
            grid_points,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonians[0].rows()
    }

    pub fn len(&self) -> usize {
        self.hamiltonians.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hamiltonians(&self) -> &[ComplexMatrix] {
        &self.hamiltonians
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// `t_i = i T / (N - 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        (0..n).map(|i| i as f64 * self.horizon / (n - 1) as f64).collect()
    }

    /// `exp(-i H_m t)`.
    pub fn unitary(&self, m: usize, t: f64) -> Result<ComplexMatrix> {
        let eig = self.spectra.get(m).ok_or(Error::IndexOutOfRange {
            index: m,
            len: self.len(),
        })?;
        Ok(eig.map_spectrum(|l| cis(-l * t)))
    }

    fn check_pair(&self, m: usize, n: usize, t: f64) -> Result<()> {
        for i in [m, n] {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
        }
        if m == n {
            return Err(Error::InvalidParameter(format!("pair ({m}, {n}) is not distinct")));
        }
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::InvalidParameter(format!("t = {t} outside [0, {}]", self.horizon)));
        }
        Ok(())
    }

    /// Largest pairwise fidelity at `t` and the first pair `(m, n)`, `m < n`, attaining it.
    pub fn max_pairwise(&self, t: f64) -> Result<(f64, (usize, usize))> {
        let us: Vec<ComplexMatrix> = (0..self.len()).map(|m| self.unitary(m, t)).collect::<Result<_>>()?;
        let d2 = (self.dim() * self.dim()) as f64;
        let mut best = (f64::NEG_INFINITY, (0, 1));
        for m in 0..us.len() {
            for n in m + 1..us.len() {
                let f = us[m].adjoint_mul(&us[n]).trace().norm_sqr() / d2;
                if f > best.0 {
                    best = (f, (m, n));
                }
            }
        }
        Ok(best)
    }
}

/// `(1/d^2) |tr(U_m(t)* U_n(t))|^2`, valid for commuting and noncommuting pairs alike.
pub fn pairwise_fidelity_at(ensemble: &HamiltonianEnsemble, m: usize, n: usize, t: f64) -> Result<f64> {
    ensemble.check_pair(m, n, t)?;
    let um = ensemble.unitary(m, t)?;
    let un = ensemble.unitary(n, t)?;
    let d = ensemble.dim() as f64;
    Ok((um.adjoint_mul(&un).trace().norm_sqr() / (d * d)).min(1.0))
}

/// `(1/d^2) |tr exp(-i (H_m - H_n) t)|^2`, which equals [`pairwise_fidelity_at`] only when
/// `H_m` and `H_n` commute.
pub fn difference_exponent_fidelity(ensemble: &HamiltonianEnsemble, m: usize, n: usize, t: f64) -> Result<f64> {
    ensemble.check_pair(m, n, t)?;
    let h = ensemble.hamiltonians();
    let eig = herm_eig(&(&h[m] - &h[n]))?;
    let d = ensemble.dim() as f64;
    let tr: crate::Complex64 = eig.eigenvalues.iter().map(|&l| cis(-l * t)).sum();
    Ok((tr.norm_sqr() / (d * d)).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationResult {
    pub t_opt: f64,
    pub f_opt: f64,
    pub worst_pair: (usize, usize),
    /// `(t, max pairwise fidelity)` on the scan grid.
    pub curve: Vec<(f64, f64)>,
}

/// Values closer than this count as ties, resolved toward the earlier time.
const TIE: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `g` on `[a, b]` by golden-section search until the bracket is narrower than `width`.
fn golden_section(mut a: f64, mut b: f64, width: f64, g: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    while b - a >= width {
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - INV_PHI * (b - a);
            g1 = g(x1)?;
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + INV_PHI * (b - a);
            g2 = g(x2)?;
        }
    }
    Ok(if g1 <= g2 { (x1, g1) } else { (x2, g2) })
}

/// Scans the grid for the smallest max-pairwise fidelity (earliest time on ties), then refines by
/// golden-section search between the neighbouring grid points. The refined point replaces the grid
/// point only if it is better by more than 1e-12.
pub fn optimize_discrimination(ensemble: &HamiltonianEnsemble) -> Result<DiscriminationResult> {
    let grid = ensemble.grid();
    let mut curve = Vec::with_capacity(grid.len());
    let mut best = 0;
    for (i, &t) in grid.iter().enumerate() {
        let (f, _) = ensemble.max_pairwise(t)?;
        curve.push((t, f));
        if f < curve[best].1 - TIE {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (t_ref, f_ref) = golden_section(lo, hi, 1e-9 * ensemble.horizon(), |t| {
        Ok(ensemble.max_pairwise(t)?.0)
    })?;
    let (t_opt, f_opt) = if f_ref < curve[best].1 - TIE {
        (t_ref, f_ref)
    } else {
        curve[best]
    };
    let (_, worst_pair) = ensemble.max_pairwise(t_opt)?;
    Ok(DiscriminationResult {
        t_opt,
        f_opt,
        worst_pair,
        curve,
    })
}

/// Discrete-time version for channels applied in steps of duration `tau`: minimizes
/// `max_{m != n} F(T_m^k, T_n^k)` over `k = 0..=max_steps` (earliest `k` on ties) and reports
/// `t_opt = k tau`.
pub fn optimize_discrete(channels: &[QuantumChannel<f64>], tau: f64, max_steps: usize) -> Result<DiscriminationResult> {
    if channels.len() < 2 {
        return Err(Error::InvalidParameter("need at least two channels".into()));
    }
    let d = channels[0].dim_in();
    for c in channels {
        c.same_dims(&QuantumChannel::identity(d), "optimize_discrete")?;
    }
    let mut powers: Vec<QuantumChannel<f64>> = channels.iter().map(|_| QuantumChannel::identity(d)).collect();
    let mut curve = Vec::with_capacity(max_steps + 1);
    let mut best: Option<(f64, f64, (usize, usize))> = None;
    for k in 0..=max_steps {
        if k > 0 {
            for (p, c) in powers.iter_mut().zip(channels) {
                *p = compose(c, p)?.minimal()?;
            }
        }
        let mut worst = (f64::NEG_INFINITY, (0, 1));
        for m in 0..powers.len() {
            for n in m + 1..powers.len() {
                let f = channel_fidelity(&powers[m], &powers[n])?.value;
                if f > worst.0 {
                    worst = (f, (m, n));
                }
            }
        }
        let t = k as f64 * tau;
        curve.push((t, worst.0));
        if best.is_none_or(|(_, f, _)| worst.0 < f - TIE) {
            best = Some((t, worst.0, worst.1));
        }
    }
    let (t_opt, f_opt, worst_pair) = best.expect("at least one step");
    Ok(DiscriminationResult {
        t_opt,
        f_opt,
        worst_pair,
        curve,
    })
}
