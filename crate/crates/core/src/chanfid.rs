//! Channel fidelity `F(S, T) = F(rho_S, rho_T)` on normalized Choi states, its closed forms,
//! the dilation (Uhlmann) route, the CF1-CF7 property suite and the cb-norm bound chain.

use std::fmt;

use crate::channels::{compose, tensor, QuantumChannel};
use crate::error::{mismatch, Error, Result};
use crate::matlin::{herm_eig, kron, trace_norm, Matrix};
use crate::random::Sampler;
use crate::scalar::{Real, C};
use crate::states::{state_fidelity, trace_distance};
use crate::tol;

/// How a [`FidelityReport`] value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    ChoiState,
    ClosedFormIdentity,
    ClosedFormUnitary,
    Dilation,
}

impl Route {
    pub fn label(self) -> &'static str {
        match self {
            Route::ChoiState => "choi-state",
            Route::ClosedFormIdentity => "closed-form-identity",
            Route::ClosedFormUnitary => "closed-form-unitary",
            Route::Dilation => "dilation",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport<T: Real> {
    pub value: T,
    pub route: Route,
    /// Largest disagreement between the routes that were evaluated.
    pub residual: T,
}

fn unit_clamp<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

fn check_gap<T: Real>(gap: T, tolerance: f64, what: &str) -> Result<()> {
    let tolerance = T::tol(tolerance);
    if gap > tolerance || gap.is_nan() {
        return Err(Error::CertificateFailed {
            what: what.into(),
            gap: gap.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    Ok(())
}

/// `F(rho_S, rho_T)` straight from the Choi states.
pub fn choi_state_fidelity<T: Real>(s: &QuantumChannel<T>, t: &QuantumChannel<T>) -> Result<T> {
    s.same_dims(t, "channel_fidelity")?;
    state_fidelity(s.choi().state(), t.choi().state())
}

/// Channel fidelity with route dispatch.
///
/// Unitary pairs use `|tr(U*V)|^2 / d^2`, comparisons with the identity use
/// `sum |tr V_a|^2 / d^2`, everything else the Choi states. The Choi route and the dilation
/// route are always evaluated as well, and the largest disagreement (which must stay below
/// 1e-8) is reported as the residual.
pub fn channel_fidelity<T: Real>(s: &QuantumChannel<T>, t: &QuantumChannel<T>) -> Result<FidelityReport<T>> {
    s.same_dims(t, "channel_fidelity")?;
    let choi = choi_state_fidelity(s, t)?;
    let dilation = dilation_fidelity(s, t)?;
    let square = s.dim_in() == s.dim_out();
    let (value, route) = match (s.as_unitary(), t.as_unitary()) {
        (Some(u), Some(v)) if square => (unitary_pair_fidelity(u, v)?, Route::ClosedFormUnitary),
        _ if square && t.is_identity() => (fidelity_to_identity(s)?, Route::ClosedFormIdentity),
        _ if square && s.is_identity() => (fidelity_to_identity(t)?, Route::ClosedFormIdentity),
        _ => (choi, Route::ChoiState),
    };
    let residual = (value - choi).abs().max((value - dilation).abs());
    check_gap(residual, tol::ROUTE_RESIDUAL, "agreement of channel fidelity routes")?;
    Ok(FidelityReport { value, route, residual })
}

/// `F(T, id) = (1/d^2) sum_a |tr V_a|^2`.
pub fn fidelity_to_identity<T: Real>(t: &QuantumChannel<T>) -> Result<T> {
    if t.dim_in() != t.dim_out() {
        return Err(mismatch("fidelity_to_identity", t.dim_in(), t.dim_out()));
    }
    let d = T::of(t.dim_in() as f64);
    let sum: T = t.kraus().iter().map(|k| k.trace().norm_sqr()).sum();
    Ok(unit_clamp(sum / (d * d)))
}

/// `F(U, V) = (1/d^2) |tr(U*V)|^2`, cross-checked against `F(U*V, id)`.
pub fn unitary_pair_fidelity<T: Real>(u: &Matrix<T>, v: &Matrix<T>) -> Result<T> {
    let uc = QuantumChannel::unitary(u.clone())?;
    let vc = QuantumChannel::unitary(v.clone())?;
    uc.same_dims(&vc, "unitary_pair_fidelity")?;
    let d = T::of(u.rows() as f64);
    let w = u.adjoint_mul(v);
    let value = unit_clamp(w.trace().norm_sqr() / (d * d));
    let reduced = fidelity_to_identity(&QuantumChannel::new_unchecked(u.rows(), u.rows(), vec![w])?)?;
    check_gap((value - reduced).abs(), 1e-10, "reduction of a unitary pair to the identity")?;
    Ok(value)
}

/// Environment-reduced overlap `X_ab = tr(T_b* S_a)`, zero padded to a square.
fn environment_overlap<T: Real>(s: &QuantumChannel<T>, t: &QuantumChannel<T>) -> Matrix<T> {
    let n = s.kraus_count().max(t.kraus_count());
    let mut x = Matrix::zeros(n, n);
    for (a, sa) in s.kraus().iter().enumerate() {
        for (b, tb) in t.kraus().iter().enumerate() {
            x[(a, b)] = tb
                .as_slice()
                .iter()
                .zip(sa.as_slice())
                .map(|(p, q)| p.conj() * q)
                .sum();
        }
    }
    x
}

/// Uhlmann form `(1/d^2) max_{V,W} |tr(V*W)|^2` over Stinespring isometries of `T` and `S`
/// on a common environment.
///
/// The maximum over environment unitaries of `|tr(V*(I (x) U)W)|` is the trace norm of
/// `Tr_K(W V*)`, whose entries are the Hilbert-Schmidt products of the Kraus operators.
pub fn dilation_fidelity<T: Real>(s: &QuantumChannel<T>, t: &QuantumChannel<T>) -> Result<T> {
    s.same_dims(t, "dilation_fidelity")?;
    let d = T::of(s.dim_in() as f64);
    let norm = trace_norm(&environment_overlap(s, t));
    Ok(unit_clamp(norm * norm / (d * d)))
}

/// Inputs to [`cf_property_suite`]. `s`, `t`, `t1`, `t2` share dimensions; `s1 ~ t1` and
/// `s2 ~ t2` feed the tensor check; `r` post-processes `s`, `t`; `u`, `v` are unitaries on
/// the output space.
#[derive(Debug, Clone, Copy)]
pub struct PropertyInputs<'a, T: Real> {
    pub s: &'a QuantumChannel<T>,
    pub t: &'a QuantumChannel<T>,
    pub s1: &'a QuantumChannel<T>,
    pub s2: &'a QuantumChannel<T>,
    pub t1: &'a QuantumChannel<T>,
    pub t2: &'a QuantumChannel<T>,
    pub r: &'a QuantumChannel<T>,
    pub u: &'a Matrix<T>,
    pub v: &'a Matrix<T>,
    pub lambda: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn from(name: &'static str, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((passed, detail)) => Self { name, passed, detail },
            Err(e) => Self {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

fn fid<T: Real>(s: &QuantumChannel<T>, t: &QuantumChannel<T>) -> Result<T> {
    Ok(channel_fidelity(s, t)?.value)
}

/// Runs CF1 to CF7, one named result per property. A dimension error fails only its own check.
pub fn cf_property_suite<T: Real>(inp: &PropertyInputs<'_, T>) -> Vec<PropertyCheck> {
    let slack = |x: f64| T::tol(x);
    let mut out = Vec::with_capacity(7);

    out.push(PropertyCheck::from("CF1", (|| {
        let f = fid(inp.s, inp.t)?;
        let own = fid(inp.s, inp.s)?;
        let dist = trace_distance(inp.s.choi().state(), inp.t.choi().state())? / T::of(2.0);
        // Fuchs-van de Graaf: F = 1 exactly when the Choi states coincide.
        let lower = T::one() - f.sqrt() <= dist + slack(1e-9);
        let upper = dist <= (T::one() - f).max(T::zero()).sqrt() + slack(1e-9);
        let passed = f >= T::zero() && f <= T::one() && (own - T::one()).abs() <= slack(1e-9) && lower && upper;
        Ok((passed, format!("F={f}, F(S,S)={own}, half trace distance={dist}")))
    })()));

    out.push(PropertyCheck::from("CF2", (|| {
        let (a, b) = (fid(inp.s, inp.t)?, fid(inp.t, inp.s)?);
        Ok(((a - b).abs() <= slack(1e-10), format!("F(S,T)={a}, F(T,S)={b}")))
    })()));

    out.push(PropertyCheck::from("CF3", (|| {
        let general = choi_state_fidelity(
            &QuantumChannel::unitary(inp.u.clone())?,
            &QuantumChannel::unitary(inp.v.clone())?,
        )?;
        let closed = unitary_pair_fidelity(inp.u, inp.v)?;
        Ok((
            (general - closed).abs() <= slack(1e-9),
            format!("Choi route={general}, closed form={closed}"),
        ))
    })()));

    out.push(PropertyCheck::from("CF4", (|| {
        let l = inp.lambda;
        let mixed = QuantumChannel::mixture(l, inp.t1, inp.t2)?;
        let lhs = fid(inp.s, &mixed)?;
        let rhs = l * fid(inp.s, inp.t1)? + (T::one() - l) * fid(inp.s, inp.t2)?;
        Ok((lhs >= rhs - slack(1e-9), format!("F(S, mixture)={lhs}, mixture of F={rhs}")))
    })()));

    out.push(PropertyCheck::from("CF5", (|| {
        let joint = fid(&tensor(inp.s1, inp.s2), &tensor(inp.t1, inp.t2))?;
        let product = fid(inp.s1, inp.t1)? * fid(inp.s2, inp.t2)?;
        Ok(((joint - product).abs() <= slack(1e-8), format!("joint={joint}, product={product}")))
    })()));

    out.push(PropertyCheck::from("CF6", (|| {
        let u = QuantumChannel::unitary(inp.u.clone())?;
        let after = fid(&compose(&u, inp.s)?, &compose(&u, inp.t)?)?;
        let before = fid(inp.s, inp.t)?;
        Ok(((after - before).abs() <= slack(1e-9), format!("after={after}, before={before}")))
    })()));

    out.push(PropertyCheck::from("CF7", (|| {
        let after = fid(&compose(inp.r, inp.s)?, &compose(inp.r, inp.t)?)?;
        let before = fid(inp.s, inp.t)?;
        Ok((after >= before - slack(1e-9), format!("after={after}, before={before}")))
    })()));

    out
}

/// Budgets and seed for the multi-start estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    /// Random restarts on top of the deterministic candidates.
    pub restarts: usize,
    /// Ascent steps per start.
    pub steps: usize,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            steps: 200,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

fn normalize<T: Real>(v: &mut [C<T>]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if n > T::zero() {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

fn top_eigenvector<T: Real>(h: &Matrix<T>) -> Result<Vec<C<T>>> {
    let eig = herm_eig(&h.hermitian_part())?;
    Ok(eig.vector(eig.dim() - 1))
}

fn improved<T: Real>(new: T, old: T) -> bool {
    new > old + T::tol(1e-13) * T::one().max(old.abs())
}

/// Lower bound on `||S - T||_cb` from pure inputs on `H (x) H`.
///
/// An input `|A>>` maps to `sum_a s_a |V_a A>><<V_a A|` with `s_a = +1` on the Kraus
/// operators of `S` and `-1` on those of `T`. Each start is refined by alternating between
/// the sign projector `P` of that output and the top eigenvector of
/// `sum_a s_a (V_a (x) I)* P (V_a (x) I)`, which never decreases the trace norm. The
/// maximally entangled input is always the first start; random starts use
/// `Sampler::stream(seed, k)`.
pub fn diamond_lower_bound<T: Real>(
    s: &QuantumChannel<T>,
    t: &QuantumChannel<T>,
    config: &EstimatorConfig,
) -> Result<T> {
    s.same_dims(t, "diamond_lower_bound")?;
    let d = s.dim_in();
    let ancilla = Matrix::identity(d);
    let lifted: Vec<(Matrix<T>, T)> = s
        .kraus()
        .iter()
        .map(|k| (kron(k, &ancilla), T::one()))
        .chain(t.kraus().iter().map(|k| (kron(k, &ancilla), -T::one())))
        .collect();
    let n_out = s.dim_out() * d;

    // Returns the trace norm of the output and its sign projector.
    let evaluate = |a: &[C<T>]| -> Result<(T, Matrix<T>)> {
        let mut delta = Matrix::zeros(n_out, n_out);
        for (l, sign) in &lifted {
            let w = l.apply(a);
            delta += &Matrix::outer(&w, &w).scale_real(*sign);
        }
        let eig = herm_eig(&delta.hermitian_part())?;
        let value = eig.eigenvalues.iter().map(|x| x.abs()).sum();
        let signs = eig.map_spectrum(|x| C::new(if x < T::zero() { -T::one() } else { T::one() }, T::zero()));
        Ok((value, signs))
    };

    let ascend = |mut a: Vec<C<T>>| -> Result<T> {
        normalize(&mut a);
        let (mut best, mut p) = evaluate(&a)?;
        for _ in 0..config.steps {
            let mut g = Matrix::zeros(d * d, d * d);
            for (l, sign) in &lifted {
                g += &l.adjoint_mul(&p.matmul(l)).scale_real(*sign);
            }
            let next = top_eigenvector(&g)?;
            let (value, q) = evaluate(&next)?;
            if !improved(value, best) {
                best = best.max(value);
                break;
            }
            best = value;
            p = q;
        }
        Ok(best)
    };

    let phi = crate::matlin::vectorize(&Matrix::<T>::identity(d));
    let mut best = ascend(phi)?;
    for k in 0..config.restarts {
        let mut sampler = Sampler::stream(config.seed, k as u64);
        best = best.max(ascend(sampler.gaussian_vector(d * d))?);
    }
    Ok(best.min(T::of(2.0)))
}

/// Lower bound on `sup_{psi,phi} Re <phi|T(|phi><psi|)|psi>`.
///
/// The objective is `Re sum_a <phi|V_a|phi> conj(<psi|V_a|psi>)`; with one vector fixed it is
/// a Hermitian form in the other, so alternating top eigenvectors never decreases it. Starts:
/// basis states, eigenvectors of the Hermitian part of each Kraus operator, then seeded random
/// vectors.
pub fn off_diagonal_fidelity_lb<T: Real>(t: &QuantumChannel<T>, config: &EstimatorConfig) -> Result<T> {
    let d = t.dim_in();
    if d != t.dim_out() {
        return Err(mismatch("off_diagonal_fidelity_lb", d, t.dim_out()));
    }
    let expectations = |x: &[C<T>]| -> Vec<C<T>> {
        t.kraus()
            .iter()
            .map(|k| x.iter().zip(k.apply(x)).map(|(a, b)| a.conj() * b).sum())
            .collect()
    };
    let objective = |phi: &[C<T>], psi: &[C<T>]| -> T {
        expectations(phi)
            .into_iter()
            .zip(expectations(psi))
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    };
    let weighted = |c: &[C<T>]| -> Matrix<T> {
        let mut m = Matrix::zeros(d, d);
        for (k, w) in t.kraus().iter().zip(c) {
            m += &k.scale(*w);
        }
        m
    };

    let ascend = |mut psi: Vec<C<T>>| -> Result<T> {
        normalize(&mut psi);
        let mut phi = psi.clone();
        let mut best = objective(&phi, &psi);
        for _ in 0..config.steps {
            let c: Vec<C<T>> = expectations(&psi).into_iter().map(|z| z.conj()).collect();
            phi = top_eigenvector(&weighted(&c))?;
            let b: Vec<C<T>> = expectations(&phi).into_iter().map(|z| z.conj()).collect();
            psi = top_eigenvector(&weighted(&b))?;
            let value = objective(&phi, &psi);
            if !improved(value, best) {
                best = best.max(value);
                break;
            }
            best = value;
        }
        Ok(best)
    };

    let mut starts: Vec<Vec<C<T>>> = (0..d)
        .map(|i| (0..d).map(|j| C::new(if i == j { T::one() } else { T::zero() }, T::zero())).collect())
        .collect();
    for k in t.kraus() {
        let eig = herm_eig(&k.hermitian_part())?;
        starts.extend((0..d).map(|i| eig.vector(i)));
    }
    let mut best = -T::infinity();
    for start in starts {
        best = best.max(ascend(start)?);
    }
    for k in 0..config.restarts {
        let mut sampler = Sampler::stream(config.seed, k as u64);
        best = best.max(ascend(sampler.gaussian_vector(d))?);
    }
    Ok(best.min(T::one()))
}

/// One recorded inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality<T: Real> {
    pub name: &'static str,
    pub lhs: T,
    pub rhs: T,
    pub satisfied: bool,
    /// Informational rows are reported but not part of [`BoundReport::holds`].
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T: Real> {
    /// `F(S, T)`.
    pub fid: T,
    /// `||rho_S - rho_T||_1`.
    pub choi_trace_distance: T,
    /// Lower bound on `||S - T||_cb`.
    pub diamond_lb: T,
    /// Lower bound on the off-diagonal fidelity of `T` (absent when `T` is not square).
    pub offdiag_lb: Option<T>,
    pub inequalities: Vec<Inequality<T>>,
}

impl<T: Real> BoundReport<T> {
    /// True when every asserted inequality holds.
    pub fn holds(&self) -> bool {
        self.inequalities.iter().all(|i| i.satisfied || !i.asserted)
    }
}

fn inequality<T: Real>(name: &'static str, lhs: T, rhs: T, asserted: bool) -> Inequality<T> {
    Inequality {
        name,
        lhs,
        rhs,
        satisfied: lhs <= rhs + T::tol(tol::INEQUALITY_SLACK),
        asserted,
    }
}

/// Bound chain between the channel fidelity and cb-norm distances, each cb-norm replaced by
/// a certified lower bound. The comparisons with the identity use `T` and are skipped when
/// `T` is not square.
pub fn bound_suite<T: Real>(
    s: &QuantumChannel<T>,
    t: &QuantumChannel<T>,
    config: &EstimatorConfig,
) -> Result<BoundReport<T>> {
    let two = T::of(2.0);
    let four = T::of(4.0);
    let fid = channel_fidelity(s, t)?.value;
    let choi_trace_distance = trace_distance(s.choi().state(), t.choi().state())?;
    let diamond_lb = diamond_lower_bound(s, t, config)?;
    let mut inequalities = vec![
        inequality("choi-distance-lower-bound", two - two * fid.sqrt(), choi_trace_distance, true),
        inequality("diamond-dominates-choi", choi_trace_distance, diamond_lb, true),
    ];
    let mut offdiag_lb = None;
    if t.dim_in() == t.dim_out() {
        let id = QuantumChannel::identity(t.dim_in());
        let fid_id = fidelity_to_identity(t)?;
        let dlb_id = diamond_lower_bound(t, &id, config)?;
        let od = off_diagonal_fidelity_lb(t, config)?;
        offdiag_lb = Some(od);
        let gap = |x: T| (T::one() - x).max(T::zero()).sqrt();
        inequalities.extend([
            inequality("identity-upper-bound", dlb_id, four * gap(fid_id), true),
            inequality("combined-upper", fid_id, T::one() - dlb_id * dlb_id / T::of(16.0), true),
            inequality("combined-lower", (T::one() - dlb_id / two).powi(2), fid_id, false),
        ]);
    }
    Ok(BoundReport {
        fid,
        choi_trace_distance,
        diamond_lb,
        offdiag_lb,
        inequalities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::pauli;
    use crate::matlin::{partial_trace, SubsystemShape};
    use crate::scalar::cis;

    type Ch = QuantumChannel<f64>;
    type M = Matrix<f64>;

    fn quick() -> EstimatorConfig {
        EstimatorConfig {
            restarts: 8,
            steps: 50,
            seed: 3,
        }
    }

    #[test]
    fn fidelity_examples() {
        let id = Ch::identity(2);
        let r = channel_fidelity(&id, &id).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.route, Route::ClosedFormUnitary);

        let x = Ch::unitary(pauli('X')).unwrap();
        let r = channel_fidelity(&x, &id).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert!(r.residual <= 1e-8);

        for (d, p) in [(2, 1.0), (2, 0.3), (3, 0.6)] {
            let dep = Ch::depolarizing(d, p).unwrap();
            let r = channel_fidelity(&dep, &Ch::identity(d)).unwrap();
            let dd = (d * d) as f64;
            assert!((r.value - (1.0 - p + p / dd)).abs() < 1e-10);
            assert_eq!(r.route, Route::ClosedFormIdentity);
        }
        assert!(channel_fidelity(&id, &Ch::identity(3)).is_err());
    }

    #[test]
    fn generic_pair_uses_choi_route() {
        let a = Ch::random(2, 3, 2, 1).unwrap();
        let b = Ch::random(2, 3, 3, 2).unwrap();
        let r = channel_fidelity(&a, &b).unwrap();
        assert_eq!(r.route, Route::ChoiState);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn unitary_pair_examples() {
        let i2 = M::identity(2);
        assert!((unitary_pair_fidelity(&i2, &i2).unwrap() - 1.0).abs() < 1e-15);
        assert!(unitary_pair_fidelity(&i2, &pauli('Z')).unwrap().abs() < 1e-15);
        for theta in [0.1, 1.0, 2.5] {
            let v = M::from_diag(&[C::new(1.0, 0.0), cis(theta)]);
            let f = unitary_pair_fidelity(&i2, &v).unwrap();
            assert!((f - (theta / 2.0f64).cos().powi(2)).abs() < 1e-14);
        }
        assert!(unitary_pair_fidelity(&i2, &i2.scale_real(2.0)).is_err());
    }

    #[test]
    fn identity_closed_form_matches_choi() {
        for seed in 0..10 {
            let t = Ch::random(3, 3, 1 + seed as usize % 9, seed).unwrap();
            let closed = fidelity_to_identity(&t).unwrap();
            let choi = choi_state_fidelity(&t, &Ch::identity(3)).unwrap();
            assert!((closed - choi).abs() < 1e-9);
        }
    }

    #[test]
    fn dilation_matches_literal_isometries() {
        let s = Ch::random(2, 2, 3, 4).unwrap();
        let t = Ch::random(2, 2, 2, 5).unwrap();
        let env = 3;
        let w = s.stinespring_padded(env).unwrap();
        let v = t.stinespring_padded(env).unwrap();
        let wv = w.matrix().matmul(&v.matrix().adjoint());
        let shape = SubsystemShape::new([2, env]).unwrap();
        let reduced = partial_trace(&wv, &shape, &[1]).unwrap();
        let literal = trace_norm(&reduced).powi(2) / 4.0;
        assert!((dilation_fidelity(&s, &t).unwrap() - literal).abs() < 1e-12);
        assert!((dilation_fidelity(&s, &t).unwrap() - choi_state_fidelity(&s, &t).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn property_suite_identity_pair() {
        let id = Ch::identity(2);
        let i2 = M::identity(2);
        let inp = PropertyInputs {
            s: &id,
            t: &id,
            s1: &id,
            s2: &id,
            t1: &id,
            t2: &id,
            r: &id,
            u: &i2,
            v: &i2,
            lambda: 0.5,
        };
        let checks = cf_property_suite(&inp);
        assert_eq!(checks.len(), 7);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn property_suite_reports_dimension_errors_per_check() {
        let id2 = Ch::identity(2);
        let id3 = Ch::identity(3);
        let i2 = M::identity(2);
        let inp = PropertyInputs {
            s: &id2,
            t: &id2,
            s1: &id2,
            s2: &id2,
            t1: &id2,
            t2: &id2,
            r: &id3,
            u: &i2,
            v: &i2,
            lambda: 0.5,
        };
        let checks = cf_property_suite(&inp);
        assert!(checks[..6].iter().all(|c| c.passed));
        assert!(!checks[6].passed && checks[6].detail.starts_with("error"));
    }

    #[test]
    fn concavity_with_full_depolarizer() {
        let r = Ch::depolarizing(2, 1.0).unwrap();
        let s = Ch::unitary(pauli('X')).unwrap();
        let t = Ch::identity(2);
        let after = channel_fidelity(&compose(&r, &s).unwrap(), &compose(&r, &t).unwrap()).unwrap();
        assert!((after.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn diamond_examples() {
        let id = Ch::identity(2);
        assert!(diamond_lower_bound(&id, &id, &quick()).unwrap() < 1e-12);
        let x = Ch::unitary(pauli('X')).unwrap();
        assert!((diamond_lower_bound(&x, &id, &quick()).unwrap() - 2.0).abs() < 1e-10);
        for p in [0.1, 0.5, 1.0] {
            let dep = Ch::depolarizing(2, p).unwrap();
            let lb = diamond_lower_bound(&dep, &id, &quick()).unwrap();
            assert!(lb >= 1.5 * p - 1e-12, "p={p}: {lb}");
        }
    }

    #[test]
    fn diamond_monotone_in_budget() {
        let s = Ch::random(2, 2, 2, 6).unwrap();
        let t = Ch::random(2, 2, 3, 7).unwrap();
        let mut last = 0.0;
        for restarts in [0, 1, 4, 16] {
            let cfg = EstimatorConfig {
                restarts,
                ..quick()
            };
            let v = diamond_lower_bound(&s, &t, &cfg).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn off_diagonal_examples() {
        assert!((off_diagonal_fidelity_lb(&Ch::identity(3), &quick()).unwrap() - 1.0).abs() < 1e-9);
        for p in [0.2, 0.7] {
            let dep = Ch::depolarizing(2, p).unwrap();
            assert!(off_diagonal_fidelity_lb(&dep, &quick()).unwrap() >= 1.0 - p / 2.0 - 1e-12);
        }
        // eigenvector pairs of U give Re(lambda_i conj(lambda_j)); with phi = psi it is 1
        let u: M = Sampler::new(8).haar_unitary(3);
        let lb = off_diagonal_fidelity_lb(&Ch::unitary(u).unwrap(), &quick()).unwrap();
        assert!(lb >= 1.0 - 1e-9);
    }

    #[test]
    fn bound_suite_examples() {
        let id = Ch::identity(2);
        let same = bound_suite(&id, &id, &quick()).unwrap();
        assert!(same.holds());
        assert!((same.fid - 1.0).abs() < 1e-12 && same.choi_trace_distance < 1e-12);

        let x = Ch::unitary(pauli('X')).unwrap();
        let r = bound_suite(&id, &x, &quick()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.fid.abs() < 1e-12);
        assert!((r.diamond_lb - 2.0).abs() < 1e-10);
        let combined = r.inequalities.iter().find(|i| i.name == "combined-upper").unwrap();
        assert!((combined.rhs - 0.75).abs() < 1e-10);
        let lower = r.inequalities.iter().find(|i| i.name == "choi-distance-lower-bound").unwrap();
        assert!((lower.lhs - 2.0).abs() < 1e-9 && (lower.rhs - 2.0).abs() < 1e-9);
    }
}
