//! Small derivative-free and projected-gradient optimizers with seeded multistart.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channels::random::{derive_seed, rng};
use crate::numerics::Vec3;

/// Nearest point of the closed unit ball.
pub fn project_ball(r: &Vec3) -> Vec3 {
    let n = r.norm();
    if n > 1.0 {
        r / n
    } else {
        *r
    }
}

/// Uniform sample from the unit ball.
pub fn sample_ball(rng: &mut impl Rng) -> Vec3 {
    let d = sample_sphere(rng);
    let u: f64 = rng.random();
    d * u.cbrt()
}

pub fn sample_sphere(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum<T> {
    pub point: T,
    pub value: f64,
    pub iterations: usize,
}

/// Maximises `f` over the unit ball by projected gradient ascent with
/// Armijo backtracking along the projection arc.
pub fn ball_ascent(
    f: impl Fn(&Vec3) -> f64,
    grad: impl Fn(&Vec3) -> Vec3,
    start: Vec3,
    max_iter: usize,
    step_tol: f64,
    value_tol: f64,
) -> Optimum<Vec3> {
    let mut x = project_ball(&start);
    let mut fx = f(&x);
    let mut t = 1.0;
    let mut iterations = 0;
    for it in 0..max_iter {
        iterations = it + 1;
        let g = grad(&x);
        if !g.iter().all(|v| v.is_finite()) {
            break;
        }
        let mut accepted = None;
        while t > 1e-16 {
            let y = project_ball(&(x + g * t));
            let fy = f(&y);
            if fy >= fx + 1e-4 * g.dot(&(y - x)) {
                accepted = Some((y, fy));
                break;
            }
            t *= 0.5;
        }
        let Some((y, fy)) = accepted else { break };
        let moved = (y - x).norm();
        let gained = fy - fx;
        x = y;
        fx = fy;
        t = (t * 2.0).min(1e3);
        if moved < step_tol && gained.abs() < value_tol {
            break;
        }
    }
    Optimum {
        point: x,
        value: fx,
        iterations,
    }
}

/// Nelder–Mead minimisation. Non-finite values count as `+∞`.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    scale: f64,
    max_evals: usize,
    tol: f64,
) -> Optimum<Vec<f64>> {
    let n = start.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += scale;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    let mut iterations = 0;
    while evals < max_evals {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst - best).abs() <= tol && size <= tol.sqrt() {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let x = along(0.5);
            let v = eval(&x);
            (x, v)
        } else {
            let x = along(-0.5);
            let v = eval(&x);
            (x, v)
        };
        evals += 1;
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x0 = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = entry.0.iter().zip(&x0).map(|(a, b)| b + 0.5 * (a - b)).collect();
            let v = eval(&x);
            *entry = (x, v);
        }
        evals += n;
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (point, value) = simplex.swap_remove(0);
    Optimum {
        point,
        value,
        iterations,
    }
}

/// Runs `job(index, seed)` for every start in parallel; results keep start order.
pub fn multistart<T: Send>(count: usize, seed: u64, job: impl Fn(usize, u64) -> T + Sync) -> Vec<T> {
    (0..count)
        .into_par_iter()
        .map(|i| job(i, derive_seed(seed, i as u64)))
        .collect()
}

/// Index of the largest value; ties resolve to the lowest index.
pub fn argmax(values: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Seeded uniform ball sample for start `seed`.
pub fn ball_start(seed: u64) -> Vec3 {
    sample_ball(&mut rng(seed))
}
