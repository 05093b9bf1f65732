//! Adaptive Nelder-Mead simplex search with restarts.

/// Settings for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    /// Maximum number of objective evaluations, restarts included.
    pub max_evals: usize,
    /// Initial simplex edge, relative to `|x_i|` (floored by `min_step`).
    pub rel_step: f64,
    pub min_step: f64,
    /// Stop a cycle when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop a cycle when the spread of simplex values falls below this.
    pub f_tol: f64,
    /// Stop early once the best value reaches this.
    pub f_target: f64,
    pub max_restarts: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 200_000,
            rel_step: 0.1,
            min_step: 0.1,
            x_tol: 1e-13,
            f_tol: 1e-22,
            f_target: 0.0,
            max_restarts: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub restarts: usize,
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|p| p.iter().zip(best).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

/// Minimizes `f` from `x0`. Non-finite values are treated as infeasible and
/// never accepted over finite ones.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> NelderMeadResult {
    let n = x0.len();
    let mut evals = 1;
    let mut best_x = x0.to_vec();
    let mut best_f = f(x0);
    let mut restarts = 0;
    if n == 0 || !best_f.is_finite() {
        return NelderMeadResult { x: best_x, f: best_f, evals, restarts };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, shrink) = if n > 1 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    loop {
        // fresh simplex around the incumbent
        let mut pts = vec![best_x.clone()];
        let mut vals = vec![best_f];
        for i in 0..n {
            let mut p = best_x.clone();
            p[i] += (cfg.rel_step * p[i].abs()).max(cfg.min_step);
            vals.push(f(&p));
            pts.push(p);
            evals += 1;
        }
        let start_f = best_f;
        while evals < cfg.max_evals {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            pts = order.iter().map(|&i| pts[i].clone()).collect();
            vals = order.iter().map(|&i| vals[i]).collect();
            if vals[0] <= cfg.f_target
                || (vals[n] - vals[0] <= cfg.f_tol && vals[n].is_finite())
                || diameter(&pts) <= cfg.x_tol * (1.0 + pts[0].iter().fold(0.0f64, |m, v| m.max(v.abs())))
            {
                break;
            }
            let centroid: Vec<f64> =
                (0..n).map(|j| pts[..n].iter().map(|p| p[j]).sum::<f64>() / nf).collect();
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&pts[n]).map(|(c, w)| c + t * (c - w)).collect()
            };
            let xr = along(alpha);
            let fr = f(&xr);
            evals += 1;
            if fr < vals[0] {
                let xe = along(alpha * beta);
                let fe = f(&xe);
                evals += 1;
                if fe < fr {
                    pts[n] = xe;
                    vals[n] = fe;
                } else {
                    pts[n] = xr;
                    vals[n] = fr;
                }
                continue;
            }
            if fr < vals[n - 1] {
                pts[n] = xr;
                vals[n] = fr;
                continue;
            }
            // outside or inside contraction
            let xc = if fr < vals[n] { along(alpha * gamma) } else { along(-gamma) };
            let fc = f(&xc);
            evals += 1;
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
                continue;
            }
            for i in 1..=n {
                let p: Vec<f64> = pts[0].iter().zip(&pts[i]).map(|(b, x)| b + shrink * (x - b)).collect();
                vals[i] = f(&p);
                pts[i] = p;
                evals += 1;
            }
        }
        let i = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
        if vals[i] < best_f {
            best_f = vals[i];
            best_x = pts[i].clone();
        }
        let improved = best_f < start_f - cfg.f_tol.max(1e-15 * start_f.abs());
        if !improved || best_f <= cfg.f_target || evals >= cfg.max_evals || restarts >= cfg.max_restarts {
            break;
        }
        restarts += 1;
    }
    NelderMeadResult { x: best_x, f: best_f, evals, restarts }
}
