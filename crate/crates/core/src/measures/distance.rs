use nalgebra::{Matrix4, SymmetricEigen};

use super::analytic::spread;
use super::unital::UnitalQubitParam;
use super::{require_qubit, MeasureReport, Method, OptimizerConfig};
use crate::channels::{choi_to_kraus, BlochAffine, ChoiMatrix, DensityMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, kron, partial_trace, ComplexMatrix, Mat3, Subsystem, Vec3, C64};
use crate::optimize::{multistart, nelder_mead, project_ball, sample_ball};
use crate::sdp::{build_diamond_unital, names, solve, verify, SdpStatus};
use crate::static_coherence::relative_entropy_matrices;
use crate::tolerance::TOL;

/// `T_⋄` with the default gap tolerance `1e-8`.
pub fn t_diamond(ch: &KrausChannel) -> Result<MeasureReport> {
    t_diamond_with(ch, 1e-8)
}

/// Diamond distance to the nearest unital channel, solved as an SDP.
/// The witness channel is the optimal unital channel.
pub fn t_diamond_with(ch: &KrausChannel, gap_tol: f64) -> Result<MeasureReport> {
    if ch.dim_in() != ch.dim_out() {
        return Err(Error::Dimension(format!(
            "T_diamond needs equal dimensions, got {}->{}",
            ch.dim_in(),
            ch.dim_out()
        )));
    }
    let d = ch.dim_in();
    let p = build_diamond_unital(&ch.choi())?;
    let sol = solve(&p, gap_tol, 200)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::NotConverged {
            message: format!("diamond SDP ended with status {:?}", sol.status),
            primal: sol.primal_objective,
            dual: sol.dual_objective,
        });
    }
    let check = verify(&p, &sol)?;
    let z = sol.block(names::Z);
    let trz = partial_trace(z, d, d, Subsystem::B)?;
    let spectral = 2.0 * hermitian_eig(&trz.hermitian_part())?.max();

    let w = unital_projection(sol.block(names::W), d);
    let witness = ChoiMatrix::new(d, d, w).and_then(|j| choi_to_kraus(&j)).ok();

    let mut rep = MeasureReport::new(sol.primal_objective, Method::Sdp)
        .diag("gap", sol.gap)
        .diag("primal_objective", sol.primal_objective)
        .diag("dual_objective", sol.dual_objective)
        .diag("primal_residual", check.max_primal())
        .diag("dual_residual", check.max_dual())
        .diag("iterations", sol.iterations as f64)
        .diag("spectral_objective", spectral);
    rep.witness_channel = witness;
    Ok(rep)
}

/// Removes the rounding-level violations of `Tr_B W = I` and `Tr_A W = I`.
fn unital_projection(w: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(d);
    let w = w.hermitian_part();
    let ea = &partial_trace(&w, d, d, Subsystem::B).expect("square") - &id;
    let eb = &partial_trace(&w, d, d, Subsystem::A).expect("square") - &id;
    let t = ea.trace().re / (d * d) as f64;
    let mut out = &w - &kron(&ea, &id).scale(1.0 / d as f64);
    out -= &kron(&id, &eb).scale(1.0 / d as f64);
    out += &ComplexMatrix::identity(d * d).scale(t);
    out
}

/// `max_{|r|=1} |a + D r|`: the largest output trace distance of `r ↦ a + D r` over pure inputs.
pub(crate) fn sphere_max_norm(a: &Vec3, d: &Mat3) -> f64 {
    sphere_max(a, d).0
}

/// [`sphere_max_norm`] together with a maximising unit vector.
pub(crate) fn sphere_max(a: &Vec3, d: &Mat3) -> (f64, Vec3) {
    let b = d.transpose() * d;
    let g = d.transpose() * a;
    let eig = SymmetricEigen::new(b);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let lam: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let q: Vec<Vec3> = order.iter().map(|&i| eig.eigenvectors.column(i).into()).collect();
    let gh: Vec<f64> = q.iter().map(|qi| qi.dot(&g)).collect();
    let value = |r: &Vec3| (a + d * r).norm();

    let r_at = |mu: f64| -> Vec3 {
        (0..3).fold(Vec3::zeros(), |acc, i| {
            let den = mu - lam[i];
            if den.abs() < 1e-300 {
                acc
            } else {
                acc + q[i] * (gh[i] / den)
            }
        })
    };
    let mut best = (f64::NEG_INFINITY, Vec3::z());
    let mut consider = |r: Vec3| {
        let v = value(&r);
        if v > best.0 {
            best = (v, r);
        }
    };
    // degenerate case: the top eigenvector is orthogonal to g
    let tol = 1e-12 * (1.0 + lam[0].abs());
    if gh
        .iter()
        .zip(&lam)
        .all(|(gi, li)| (lam[0] - li).abs() > tol || gi.abs() < 1e-14)
    {
        let r = r_at(lam[0]);
        if r.norm() <= 1.0 {
            let fill = (1.0 - r.norm_squared()).max(0.0).sqrt();
            for sign in [1.0, -1.0] {
                consider(r + q[0] * (sign * fill));
            }
        }
    }
    let gn = g.norm();
    if gn > 0.0 {
        let (mut lo, mut hi) = (lam[0], lam[0] + gn);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if r_at(mid).norm() > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = r_at(hi);
        if r.norm() > 0.0 {
            consider(r / r.norm());
        }
    } else {
        consider(q[0]);
    }
    for e in [Vec3::x(), Vec3::y(), Vec3::z()] {
        consider(e);
        consider(-e);
    }
    best
}

/// Minimises `f` over the unital qubit channels from several starting Bloch matrices.
/// Each run owns a scratch vector that `f` may use for warm starts.
fn unital_search(
    f: impl Fn(&UnitalQubitParam, &mut Vec<f64>) -> f64 + Sync,
    seeds_from: &[Mat3],
    random_starts: usize,
    cfg: &OptimizerConfig,
    max_evals: usize,
) -> (UnitalQubitParam, Vec<f64>) {
    let fixed: Vec<UnitalQubitParam> = seeds_from.iter().map(UnitalQubitParam::from_matrix).collect();
    let total = fixed.len() + random_starts;
    let runs = multistart(total, cfg.seed, |i, seed| {
        let start = if i < fixed.len() {
            fixed[i]
        } else {
            let mut r = crate::channels::random::rng(seed);
            let mut x = [0.0; 9];
            for (k, v) in x.iter_mut().enumerate() {
                *v = if (3..6).contains(&k) {
                    sample_ball(&mut r)[0]
                } else {
                    sample_ball(&mut r)[0] * std::f64::consts::PI
                };
            }
            UnitalQubitParam::from_slice(&x)
        };
        let scratch = std::cell::RefCell::new(Vec::new());
        let obj = |x: &[f64]| f(&UnitalQubitParam::from_slice(x), &mut scratch.borrow_mut());
        let mut opt = nelder_mead(obj, &start.to_vec(), 0.3, max_evals, cfg.value_tolerance);
        for scale in [0.05, 0.005] {
            let again = nelder_mead(obj, &opt.point, scale, max_evals / 2, cfg.value_tolerance);
            if again.value <= opt.value {
                opt = again;
            }
        }
        let start_value = f(&start, &mut scratch.borrow_mut());
        if start_value < opt.value {
            (start, start_value)
        } else {
            (UnitalQubitParam::from_slice(&opt.point), opt.value)
        }
    });
    let values: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("at least one start");
    (runs[best].0, values)
}

/// Smallest induced-trace-norm distance to a unital channel:
/// `min_F max_ψ ‖(Θ − F)(ψ)‖₁` over pure inputs.
pub fn t_one(ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    require_qubit(ch, "T1")?;
    cfg.check()?;
    if ch.is_unital() {
        let mut rep = MeasureReport::new(0.0, Method::Numeric).diag("spread", 0.0);
        rep.witness_channel = Some(ch.clone());
        return Ok(rep);
    }
    let BlochAffine { a, m } = ch.bloch_affine()?;
    let mut seeds = vec![m, Mat3::zeros(), Mat3::identity()];
    if let Some(w) = t_diamond(ch).ok().and_then(|r| r.witness_channel) {
        seeds.insert(0, w.bloch_affine()?.m);
    }
    let f = |p: &UnitalQubitParam| sphere_max_norm(&a, &(m - p.matrix()));
    let randoms = (cfg.multistart_count / 4).max(1);
    let (best, values) = unital_search(|p, _| f(p), &seeds, randoms, cfg, 3000);
    let value = f(&best);
    let mut rep = MeasureReport::new(value, Method::Numeric).diag("spread", spread_min(&values));
    rep.witness_channel = best.channel().ok();
    Ok(rep)
}

fn spread_min(values: &[f64]) -> f64 {
    let neg: Vec<f64> = values.iter().map(|v| -v).collect();
    spread(&neg)
}

/// `(√σ ⊗ I) J (√σ ⊗ I)`: the output of `id ⊗ Φ` on the purification of σ.
fn purified_output(j: &ComplexMatrix, sqrt_sigma: &ComplexMatrix, d_out: usize) -> ComplexMatrix {
    kron(sqrt_sigma, &ComplexMatrix::identity(d_out)).conjugate(j)
}

fn sigma_from(d: usize, x: &[f64]) -> DensityMatrix {
    if d == 2 {
        let r = project_ball(&Vec3::new(x[0], x[1], x[2]));
        return DensityMatrix::from_bloch(&r).expect("projected into the ball");
    }
    let g = ComplexMatrix::from_fn(d, d, |i, k| crate::numerics::c(x[2 * (i * d + k)], x[2 * (i * d + k) + 1]));
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    if tr <= 1e-300 {
        return DensityMatrix::maximally_mixed(d);
    }
    DensityMatrix::new(w.scale(1.0 / tr).hermitian_part()).unwrap_or_else(|_| DensityMatrix::maximally_mixed(d))
}

fn n_sigma_params(d: usize) -> usize {
    if d == 2 {
        3
    } else {
        2 * d * d
    }
}

type M4 = Matrix4<C64>;

fn to_m4(m: &ComplexMatrix) -> M4 {
    M4::from_fn(|i, j| m[(i, j)])
}

/// Fixed-size version of the purified-output relative entropy for qubit channels.
fn qubit_divergence_at(jn: &M4, jm: &M4, r: &Vec3) -> f64 {
    let r = project_ball(r);
    let len = r.norm();
    let (lp, lm) = (((1.0 + len) / 2.0).sqrt(), ((1.0 - len).max(0.0) / 2.0).sqrt());
    let (c0, c1) = ((lp + lm) / 2.0, if len > 0.0 { (lp - lm) / (2.0 * len) } else { 0.0 });
    // √σ = c0 I + c1 r·σ, tensored with I on the output
    let s = nalgebra::Matrix2::new(
        C64::new(c0 + c1 * r[2], 0.0),
        C64::new(c1 * r[0], -c1 * r[1]),
        C64::new(c1 * r[0], c1 * r[1]),
        C64::new(c0 - c1 * r[2], 0.0),
    );
    let k = s.kronecker(&nalgebra::Matrix2::identity());
    let rho = k * jn * k;
    let tau = k * jm * k;
    relative_entropy_fixed(&rho, &tau)
}

fn relative_entropy_fixed(rho: &M4, tau: &M4) -> f64 {
    let herm = |m: &M4| (m + m.adjoint()) * C64::new(0.5, 0.0);
    let rho = herm(rho);
    let et = herm(tau).symmetric_eigen();
    let er = rho.symmetric_eigen();
    let mut cross = 0.0;
    for k in 0..4 {
        let v = et.eigenvectors.column(k);
        let weight = (v.adjoint() * rho * v)[(0, 0)].re;
        let lambda = et.eigenvalues[k];
        if lambda < TOL.support_kernel {
            if weight > TOL.support_weight {
                return f64::INFINITY;
            }
            continue;
        }
        cross += weight * lambda.log2();
    }
    let neg_entropy: f64 = er
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l * l.log2() } else { 0.0 })
        .sum();
    (neg_entropy - cross).max(0.0)
}

struct DivergenceSearch {
    value: f64,
    sigma: Vec<f64>,
    values: Vec<f64>,
}

/// Maximises `S((id⊗N)(ψ) ‖ (id⊗M)(ψ))` over purifications `ψ` of input states σ.
fn divergence_search(
    jn: &ComplexMatrix,
    jm: &ComplexMatrix,
    d_in: usize,
    d_out: usize,
    starts: &[Vec<f64>],
    max_evals: usize,
    tol: f64,
) -> DivergenceSearch {
    let qubits = (d_in == 2 && d_out == 2).then(|| (to_m4(jn), to_m4(jm)));
    let eval = |x: &[f64]| -> f64 {
        if let Some((jn4, jm4)) = &qubits {
            return -qubit_divergence_at(jn4, jm4, &Vec3::new(x[0], x[1], x[2]));
        }
        let sigma = sigma_from(d_in, x);
        let Ok(s) = sigma.matrix().hermitian_fn(|v| v.max(0.0).sqrt()) else {
            return f64::NAN;
        };
        let rho = purified_output(jn, &s, d_out);
        let tau = purified_output(jm, &s, d_out);
        match relative_entropy_matrices(&rho, &tau) {
            Ok(v) => -v,
            Err(_) => f64::NAN,
        }
    };
    let mut values = Vec::with_capacity(starts.len());
    let mut best = (f64::NEG_INFINITY, starts[0].clone());
    for s in starts {
        let opt = nelder_mead(eval, s, 0.25, max_evals, tol);
        let v = -opt.value;
        values.push(v);
        if v > best.0 {
            best = (v, opt.point);
        }
        if v == f64::INFINITY {
            break;
        }
    }
    DivergenceSearch {
        value: best.0.max(0.0),
        sigma: best.1,
        values,
    }
}

fn divergence_starts(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = n_sigma_params(d);
    let mut out = Vec::with_capacity(count);
    if d == 2 {
        out.push(vec![0.0; 3]);
        for axis in 0..3 {
            for sign in [0.9, -0.9] {
                let mut x = vec![0.0; 3];
                x[axis] = sign;
                out.push(x);
            }
        }
    } else {
        let mut x = vec![0.0; n];
        for i in 0..d {
            x[2 * (i * d + i)] = 1.0;
        }
        out.push(x);
    }
    let mut r = crate::channels::random::rng(seed);
    while out.len() < count.max(1) {
        let x: Vec<f64> = if d == 2 {
            sample_ball(&mut r).iter().copied().collect()
        } else {
            (0..n).map(|_| sample_ball(&mut r)[0]).collect()
        };
        out.push(x);
    }
    out.truncate(count.max(1));
    out
}

/// Channel divergence `max_ψ S((id⊗N)(ψ) ‖ (id⊗M)(ψ))` in bits. Multistart
/// search over input states; the result is attained, hence a lower bound.
/// Returns `+∞` when some input exposes a support violation.
pub fn channel_divergence(n: &KrausChannel, m: &KrausChannel, cfg: &OptimizerConfig) -> Result<f64> {
    cfg.check()?;
    if n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out() {
        return Err(Error::Dimension(format!(
            "divergence between {}->{} and {}->{} channels",
            n.dim_in(),
            n.dim_out(),
            m.dim_in(),
            m.dim_out()
        )));
    }
    let d = n.dim_in();
    let starts = divergence_starts(d, cfg.multistart_count, cfg.seed);
    let evals = cfg.max_iterations * n_sigma_params(d);
    let res = divergence_search(
        n.choi().matrix(),
        m.choi().matrix(),
        d,
        n.dim_out(),
        &starts,
        evals,
        cfg.value_tolerance,
    );
    Ok(res.value)
}

/// Smallest channel divergence `min_F D(Θ‖F)` to a unital channel `F`.
/// Unital channels report exactly 0.
pub fn t_re(ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    require_qubit(ch, "T_RE")?;
    cfg.check()?;
    if ch.is_unital() {
        let mut rep = MeasureReport::new(0.0, Method::Numeric)
            .diag("spread", 0.0)
            .diag("certified", 1.0);
        rep.witness_channel = Some(ch.clone());
        return Ok(rep);
    }
    let jn = ch.choi().matrix().clone();
    let BlochAffine { m, .. } = ch.bloch_affine()?;
    let mut seeds = vec![m];
    if let Some(w) = t_diamond(ch).ok().and_then(|r| r.witness_channel) {
        seeds.insert(0, w.bloch_affine()?.m);
    }
    let centre = divergence_starts(2, 1, cfg.seed);
    // inner maximum warm-started from the previous maximiser of the same run
    let f = |p: &UnitalQubitParam, warm: &mut Vec<f64>| {
        let jf = p.bloch().choi_matrix();
        let mut starts = centre.clone();
        if !warm.is_empty() {
            starts.insert(0, warm.clone());
        }
        let res = divergence_search(&jn, &jf, 2, 2, &starts, 90, 1e-12);
        *warm = res.sigma;
        res.value
    };
    let randoms = (cfg.multistart_count / 32).max(1);
    let (best, values) = unital_search(f, &seeds, randoms, cfg, 500);

    // final certification at the chosen F with the full set of inner starts
    let jf = best.bloch().choi_matrix();
    let starts = divergence_starts(2, cfg.multistart_count.max(8), cfg.seed);
    let res = divergence_search(&jn, &jf, 2, 2, &starts, cfg.max_iterations * 3, cfg.value_tolerance);
    let agreeing = res.values.iter().filter(|v| (res.value - **v).abs() <= 1e-4).count();
    let mut rep = MeasureReport::new(res.value, Method::Numeric)
        .diag("spread", spread_min(&values))
        .diag("inner_agreeing_starts", agreeing as f64)
        .diag("certified", if agreeing >= 8 { 1.0 } else { 0.0 });
    rep.witness_channel = best.channel().ok();
    rep.witness_state = Some(sigma_from(2, &res.sigma));
    Ok(rep)
}
