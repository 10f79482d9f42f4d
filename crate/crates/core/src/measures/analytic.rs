use nalgebra::DVector;

use super::{require_qubit, MeasureReport, Method, OptimizerConfig};
use crate::channels::{BlochAffine, DensityMatrix, KrausChannel};
use crate::error::Result;
use crate::numerics::{c, hermitian_eig, ComplexMatrix, Mat3, Vec3};
use crate::optimize::{argmax, ball_ascent, ball_start, multistart, nelder_mead, project_ball};
use crate::static_coherence::StaticMeasureId;
use crate::tolerance::TOL;

/// Singular-value frame of a qubit channel's Bloch map `r ↦ a + M r`.
#[derive(Debug, Clone, PartialEq)]
pub struct T2Decomposition {
    pub a: Vec3,
    pub m: Mat3,
    pub u: Mat3,
    pub v: Mat3,
    /// Singular values of `M`, descending.
    pub xi: Vec3,
    /// `Uᵀ a`.
    pub a_tilde: Vec3,
    /// Maximiser of the purity gain in the rotated frame; the input Bloch vector is `V r̃`.
    pub r_tilde_star: Vec3,
    /// Whether `r̃` is the unconstrained stationary point (no boundary fallback).
    pub interior: bool,
}

impl T2Decomposition {
    /// Purity gain `½(|ã + Ξ r̃|² − |r̃|²)` in the rotated frame.
    pub fn objective(&self, r_tilde: &Vec3) -> f64 {
        let out = self.a_tilde + self.xi.component_mul(r_tilde);
        0.5 * (out.norm_squared() - r_tilde.norm_squared())
    }

    pub fn witness_bloch(&self) -> Vec3 {
        project_ball(&(self.v * self.r_tilde_star))
    }
}

fn sorted_svd(m: &Mat3) -> (Mat3, Vec3, Mat3) {
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let xi = Vec3::from_fn(|k, _| svd.singular_values[order[k]]);
    let u = Mat3::from_fn(|r, k| u[(r, order[k])]);
    let v = Mat3::from_fn(|r, k| vt[(order[k], r)]);
    (u, xi, v)
}

/// Frame and purity-gain maximiser. The stationary point
/// `r̃_i = ξ_i ã_i / (1 − ξ_i²)` is used when every `ξ_i ≤ 1 − 1e-6` and it
/// lies in the ball; otherwise the maximiser on the sphere solves
/// `r̃_i = ξ_i ã_i / (1 − ξ_i² + λ)`, `|r̃| = 1`, for `λ > 0`.
pub fn t2_decomposition(ch: &KrausChannel) -> Result<T2Decomposition> {
    require_qubit(ch, "T2")?;
    let BlochAffine { a, m } = ch.bloch_affine()?;
    let (u, xi, v) = sorted_svd(&m);
    let a_tilde = u.transpose() * a;
    let guarded = xi.iter().all(|&x| x <= 1.0 - TOL.singular_guard);
    let stationary = Vec3::from_fn(|i, _| xi[i] * a_tilde[i] / (1.0 - xi[i] * xi[i]));

    let mut d = T2Decomposition {
        a,
        m,
        u,
        v,
        xi,
        a_tilde,
        r_tilde_star: Vec3::zeros(),
        interior: false,
    };
    if guarded && stationary.norm() <= 1.0 {
        d.r_tilde_star = stationary;
        d.interior = true;
    } else {
        d.r_tilde_star = constrained_maximiser(&xi, &a_tilde);
    }
    Ok(d)
}

/// Maximiser of the concave purity gain over the ball via its KKT system.
fn constrained_maximiser(xi: &Vec3, a_tilde: &Vec3) -> Vec3 {
    let b = xi.component_mul(a_tilde);
    let at = |lambda: f64| {
        Vec3::from_fn(|i, _| {
            let den = 1.0 - xi[i] * xi[i] + lambda;
            if den <= 1e-300 {
                if b[i].abs() <= 1e-300 {
                    0.0
                } else {
                    f64::INFINITY.copysign(b[i])
                }
            } else {
                b[i] / den
            }
        })
    };
    let free = at(0.0);
    if free.iter().all(|x| x.is_finite()) && free.norm() <= 1.0 {
        return free;
    }
    let (mut lo, mut hi) = (0.0, b.norm().max(1e-300));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid).norm() > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    project_ball(&at(hi))
}

/// Closed-form `T̃₂`, the largest purity gain `max_ρ Tr Θ(ρ)² − Tr ρ²`.
pub fn t2_closed_form(ch: &KrausChannel) -> Result<MeasureReport> {
    let d = t2_decomposition(ch)?;
    let (value, method) = if d.interior {
        let sum: f64 = (0..3)
            .map(|i| {
                let x2 = d.xi[i] * d.xi[i];
                x2 * d.a_tilde[i] * d.a_tilde[i] / (2.0 * (1.0 - x2))
            })
            .sum();
        (sum + 0.5 * d.a.norm_squared(), Method::ClosedForm)
    } else {
        // cross-check the KKT boundary point with projected gradient ascent
        let f = |r: &Vec3| d.objective(r);
        let g = |r: &Vec3| d.xi.component_mul(&(d.a_tilde + d.xi.component_mul(r))) - r;
        let cfg = OptimizerConfig::default();
        let runs = multistart(cfg.multistart_count, cfg.seed, |i, seed| {
            let start = if i == 0 { d.r_tilde_star } else { ball_start(seed) };
            ball_ascent(f, g, start, cfg.max_iterations, cfg.step_tolerance, cfg.value_tolerance)
        });
        let best = &runs[argmax(runs.iter().map(|r| r.value)).expect("at least one start")];
        let mut d2 = d.clone();
        if best.value > d.objective(&d.r_tilde_star) {
            d2.r_tilde_star = best.point;
        }
        let v = d2.objective(&d2.r_tilde_star);
        return Ok(report(&d2, v, Method::Numeric));
    };
    Ok(report(&d, value, method))
}

fn report(d: &T2Decomposition, value: f64, method: Method) -> MeasureReport {
    let mut r = MeasureReport::new(value, method)
        .diag("xi_max", d.xi[0])
        .diag("r_tilde_norm", d.r_tilde_star.norm());
    r.witness_state = DensityMatrix::from_bloch(&d.witness_bloch()).ok();
    r
}

/// `h(x)`: binary entropy of `(1 + x)/2`, the von Neumann entropy of a Bloch vector of length `x`.
fn h(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let p = 0.5 * (1.0 + x);
    let q = 1.0 - p;
    let t = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.log2() };
    t(p) + t(q)
}

fn h_prime(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0 - 1e-15);
    0.5 * ((1.0 - x) / (1.0 + x)).log2()
}

/// Largest increase `max_ρ C(Θ(ρ)) − C(ρ)`, clamped at zero. Heuristic
/// multistart search; the value is attained by the reported witness and so is a lower bound.
pub fn delta_c_max(
    ch: &KrausChannel,
    measure: StaticMeasureId,
    cfg: &OptimizerConfig,
) -> Result<MeasureReport> {
    cfg.check()?;
    if ch.is_qubit() {
        let BlochAffine { a, m } = ch.bloch_affine()?;
        let f = |r: &Vec3| match measure {
            StaticMeasureId::C2 => 0.5 * ((a + m * r).norm_squared() - r.norm_squared()),
            StaticMeasureId::CRE => h(r.norm()) - h((a + m * r).norm()),
        };
        let grad = |r: &Vec3| match measure {
            StaticMeasureId::C2 => m.transpose() * (a + m * r) - r,
            StaticMeasureId::CRE => {
                let s = a + m * r;
                let unit = |v: &Vec3| {
                    let n = v.norm();
                    if n > 1e-14 {
                        v / n
                    } else {
                        Vec3::zeros()
                    }
                };
                unit(r) * h_prime(r.norm()) - m.transpose() * unit(&s) * h_prime(s.norm())
            }
        };
        let runs = multistart(cfg.multistart_count, cfg.seed, |i, seed| {
            let start = if i == 0 { Vec3::zeros() } else { ball_start(seed) };
            ball_ascent(f, grad, start, cfg.max_iterations, cfg.step_tolerance, cfg.value_tolerance)
        });
        let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
        let best = argmax(values.iter().copied()).expect("at least one start");
        let mut rep = MeasureReport::new(values[best], Method::Numeric)
            .diag("spread", spread(&values))
            .diag("starts", values.len() as f64);
        rep.witness_state = DensityMatrix::from_bloch(&project_ball(&runs[best].point)).ok();
        return Ok(rep);
    }

    let d = ch.dim_in();
    let n_params = d * d + d;
    let objective = |x: &[f64]| -> f64 {
        let rho = state_from_params(d, x);
        match ch.apply(&rho) {
            Ok(out) => -(measure.evaluate(&out) - measure.evaluate(&rho)),
            Err(_) => f64::INFINITY,
        }
    };
    let runs = multistart(cfg.multistart_count, cfg.seed, |i, seed| {
        let start: Vec<f64> = if i == 0 {
            vec![0.0; n_params]
        } else {
            let mut r = crate::channels::random::rng(seed);
            (0..n_params)
                .map(|_| rand::Rng::sample::<f64, _>(&mut r, rand_distr::StandardNormal) * 2.0)
                .collect()
        };
        nelder_mead(objective, &start, 0.5, cfg.max_iterations * n_params, cfg.value_tolerance)
    });
    let values: Vec<f64> = runs.iter().map(|r| -r.value).collect();
    let best = argmax(values.iter().copied()).expect("at least one start");
    let mut rep = MeasureReport::new(values[best], Method::Numeric)
        .diag("spread", spread(&values))
        .diag("starts", values.len() as f64);
    rep.witness_state = Some(state_from_params(d, &runs[best].point));
    Ok(rep)
}

/// Gap between the best and the runner-up start.
pub(crate) fn spread(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    match v.as_slice() {
        [a, b, ..] => a - b,
        _ => 0.0,
    }
}

/// `ρ = e^{iH} diag(softmax p) e^{−iH}` from `d²` entries of `H` followed by `d` logits.
pub(crate) fn state_from_params(d: usize, x: &[f64]) -> DensityMatrix {
    let mut hm = ComplexMatrix::zeros(d, d);
    let mut k = 0;
    for p in 0..d {
        hm[(p, p)] = c(x[k], 0.0);
        k += 1;
        for q in p + 1..d {
            hm[(p, q)] = c(x[k], x[k + 1]);
            hm[(q, p)] = c(x[k], -x[k + 1]);
            k += 2;
        }
    }
    let logits = DVector::from_column_slice(&x[d * d..d * d + d]);
    let mx = logits.max();
    let w = logits.map(|l| (l - mx).exp());
    let probs = &w / w.sum();
    let eig = hermitian_eig(&hm).expect("constructed Hermitian");
    let v = &eig.vectors;
    let u = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|l| v[(i, l)] * c(0.0, eig.values[l]).exp() * v[(j, l)].conj())
            .sum()
    });
    let rho = u.conjugate(&ComplexMatrix::diag_real(probs.as_slice()));
    DensityMatrix::new(rho.hermitian_part()).unwrap_or_else(|_| DensityMatrix::maximally_mixed(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, random};

    #[test]
    fn amplitude_damping_closed_form() {
        let r = t2_closed_form(&amplitude_damping(0.5).unwrap()).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!((r.value - 1.0 / 6.0).abs() < 1e-12, "{}", r.value);
        let r = t2_closed_form(&amplitude_damping(1.0).unwrap()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        for eta in [0.1f64, 0.3, 0.7, 0.9] {
            let expected = eta * (1.0 - eta).powi(2) / (2.0 * (2.0 - eta)) + eta * eta / 2.0;
            let got = t2_closed_form(&amplitude_damping(eta).unwrap()).unwrap().value;
            assert!((got - expected).abs() < 1e-12, "{eta}: {got} vs {expected}");
        }
    }

    #[test]
    fn identity_and_unital_channels_give_zero() {
        let r = t2_closed_form(&amplitude_damping(0.0).unwrap()).unwrap();
        assert_eq!(r.value, 0.0);
        for seed in 0..10 {
            let ch = random::random_mixed_unitary(2, 3, seed);
            assert!(t2_closed_form(&ch).unwrap().value < 1e-12);
        }
    }

    #[test]
    fn witness_attains_value() {
        for seed in 0..20 {
            let ch = random::random_channel(2, 2, 2, seed).unwrap();
            let r = t2_closed_form(&ch).unwrap();
            let rho = r.witness_state.clone().unwrap();
            let gain = ch.apply(&rho).unwrap().purity() - rho.purity();
            assert!((gain.max(0.0) - r.value).abs() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn numeric_maximiser_agrees_with_closed_form() {
        let cfg = OptimizerConfig::default();
        let ch = amplitude_damping(0.5).unwrap();
        let n = delta_c_max(&ch, StaticMeasureId::C2, &cfg).unwrap();
        assert!((n.value - 1.0 / 6.0).abs() < 1e-5);
        let re = delta_c_max(&amplitude_damping(1.0).unwrap(), StaticMeasureId::CRE, &cfg).unwrap();
        assert!((re.value - 1.0).abs() < 1e-9, "{}", re.value);
        for seed in 0..10 {
            let ch = random::random_channel(2, 2, 3, seed).unwrap();
            let a = t2_closed_form(&ch).unwrap().value;
            let b = delta_c_max(&ch, StaticMeasureId::C2, &cfg).unwrap().value;
            assert!((a - b).abs() < 1e-6, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn qutrit_search_runs() {
        let cfg = OptimizerConfig {
            multistart_count: 4,
            max_iterations: 200,
            ..OptimizerConfig::default()
        };
        let ch = random::random_mixed_unitary(3, 2, 5);
        let r = delta_c_max(&ch, StaticMeasureId::C2, &cfg).unwrap();
        assert!(r.value < 1e-9);
        assert!(t2_closed_form(&ch).is_err());
    }
}
