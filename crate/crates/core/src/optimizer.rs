//! Maximization of the down-conversion efficiency over the five parameters
//! (Ω_a, Ω_b, Δ1, Δb, Δω_i) at fixed optical depth.
//!
//! Strategy: multi-start bounded Nelder-Mead. The objective is smooth
//! within each parametric coupling window but multimodal across the three
//! windows, so one start is seeded at each dressed-window center and the
//! remainder drawn uniformly from a seeded generator. Everything is
//! deterministic for a fixed seed, including under parallel start
//! evaluation (results merge in start order).

use crate::model::{coefficients, DecayRates, EnsembleConfig, ProbeConfig, PumpConfig};
use crate::par;
use crate::parametric::{dressed_spectrum, efficiencies};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const N_PARAMS: usize = 5;
const DEFAULT_N_STARTS: usize = 12;
/// Relative simplex-diameter convergence threshold (per parameter, scaled
/// by bound width).
const X_TOL_REL: f64 = 1e-6;
/// Objective-spread convergence threshold.
const F_TOL: f64 = 1e-9;
/// Optima within this efficiency of the best are treated as ties and
/// broken toward Δω_i < 0 (left-window convention).
const TIE_TOL: f64 = 1e-9;

/// Closed search intervals for the five parameters (γ03 units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub omega_a: (f64, f64),
    pub omega_b: (f64, f64),
    pub delta_1: (f64, f64),
    pub delta_b: (f64, f64),
    pub dw_i: (f64, f64),
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            omega_a: (0.1, 100.0),
            omega_b: (0.1, 100.0),
            delta_1: (-100.0, 100.0),
            delta_b: (-100.0, 100.0),
            dw_i: (-150.0, 150.0),
        }
    }
}

impl Bounds {
    fn as_array(&self) -> [(f64, f64); N_PARAMS] {
        [self.omega_a, self.omega_b, self.delta_1, self.delta_b, self.dw_i]
    }

    pub fn contains(&self, p: &ParamPoint) -> bool {
        let x = p.as_array();
        self.as_array()
            .iter()
            .zip(x)
            .all(|(&(lo, hi), v)| v >= lo && v <= hi)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, (lo, hi)) in ["omega_a", "omega_b", "delta_1", "delta_b", "dw_i"]
            .iter()
            .zip(self.as_array())
        {
            if !(lo < hi) {
                return Err(format!("bounds for {name}: lower {lo} must be below upper {hi}"));
            }
        }
        if self.omega_a.0 < 0.0 || self.omega_b.0 < 0.0 {
            return Err("Rabi-frequency bounds must be nonnegative".into());
        }
        Ok(())
    }
}

/// A point in the five-dimensional search space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub omega_a: f64,
    pub omega_b: f64,
    pub delta_1: f64,
    pub delta_b: f64,
    pub dw_i: f64,
}

impl ParamPoint {
    pub fn as_array(&self) -> [f64; N_PARAMS] {
        [self.omega_a, self.omega_b, self.delta_1, self.delta_b, self.dw_i]
    }

    pub fn from_array(x: [f64; N_PARAMS]) -> Self {
        ParamPoint {
            omega_a: x[0],
            omega_b: x[1],
            delta_1: x[2],
            delta_b: x[3],
            dw_i: x[4],
        }
    }

    pub fn pump(&self) -> PumpConfig {
        PumpConfig {
            omega_a: self.omega_a,
            omega_b: self.omega_b,
            delta_1: self.delta_1,
            delta_b: self.delta_b,
        }
    }

    /// The detuning-sign partner (Δ1, Δb, Δω_i) → −(Δ1, Δb, Δω_i).
    pub fn negated_detunings(&self) -> Self {
        ParamPoint {
            delta_1: -self.delta_1,
            delta_b: -self.delta_b,
            dw_i: -self.dw_i,
            ..*self
        }
    }
}

/// Best five-parameter point and efficiency at a fixed optical depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub opd: f64,
    pub params: ParamPoint,
    pub eta_d: f64,
    pub eta_u: f64,
    pub t_d: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub starts_used: usize,
    pub seed: u64,
}

/// Down-conversion efficiency at a parameter point; singular denominators
/// score zero.
pub fn eta_d_at(params: &ParamPoint, opd: f64, ens: &EnsembleConfig, rates: &DecayRates) -> f64 {
    let ens = EnsembleConfig { opd, ..*ens };
    let pump = params.pump();
    let probe = ProbeConfig::new(params.dw_i, &pump);
    match coefficients(&pump, &probe, &ens, rates) {
        Ok(c) => efficiencies(&c).eta_d,
        Err(_) => 0.0,
    }
}

fn clip(x: [f64; N_PARAMS], b: &[(f64, f64); N_PARAMS]) -> [f64; N_PARAMS] {
    let mut y = x;
    for (v, &(lo, hi)) in y.iter_mut().zip(b) {
        *v = v.clamp(lo, hi);
    }
    y
}

struct LocalResult {
    x: [f64; N_PARAMS],
    f: f64,
    evaluations: u64,
    converged: bool,
}

/// Bounded Nelder-Mead descent on `f` (minimization), candidates clipped
/// into the box.
fn nelder_mead<F>(
    f: &F,
    x0: [f64; N_PARAMS],
    bounds: &[(f64, f64); N_PARAMS],
    budget: u64,
) -> LocalResult
where
    F: Fn(&[f64; N_PARAMS]) -> f64,
{
    let widths: Vec<f64> = bounds.iter().map(|&(lo, hi)| hi - lo).collect();
    let mut evals: u64 = 0;
    let eval = |x: &[f64; N_PARAMS], evals: &mut u64| {
        *evals += 1;
        f(x)
    };

    // initial simplex: x0 plus 5% of the bound width along each axis,
    // stepping inward when that would leave the box
    let x0 = clip(x0, bounds);
    let mut simplex: Vec<[f64; N_PARAMS]> = vec![x0];
    for i in 0..N_PARAMS {
        let mut v = x0;
        let step = 0.05 * widths[i];
        v[i] = if v[i] + step <= bounds[i].1 { v[i] + step } else { v[i] - step };
        simplex.push(v);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;

    while evals < budget {
        // order
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap());
        let ordered: Vec<[f64; N_PARAMS]> = idx.iter().map(|&i| simplex[i]).collect();
        let ordered_f: Vec<f64> = idx.iter().map(|&i| fv[i]).collect();
        simplex = ordered;
        fv = ordered_f;

        // convergence: scaled simplex diameter or objective spread
        let diam = (1..simplex.len())
            .map(|i| {
                (0..N_PARAMS)
                    .map(|k| (simplex[i][k] - simplex[0][k]).abs() / widths[k])
                    .fold(0.0_f64, f64::max)
            })
            .fold(0.0_f64, f64::max);
        let spread = fv[fv.len() - 1] - fv[0];
        if diam < X_TOL_REL || spread < F_TOL {
            converged = true;
            break;
        }

        // centroid of all but worst
        let mut centroid = [0.0; N_PARAMS];
        for v in &simplex[..N_PARAMS] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / N_PARAMS as f64;
            }
        }
        let worst = simplex[N_PARAMS];
        let f_worst = fv[N_PARAMS];

        let mut refl = [0.0; N_PARAMS];
        for k in 0..N_PARAMS {
            refl[k] = centroid[k] + alpha * (centroid[k] - worst[k]);
        }
        let refl = clip(refl, bounds);
        let f_refl = eval(&refl, &mut evals);

        if f_refl < fv[0] {
            // expand
            let mut exp = [0.0; N_PARAMS];
            for k in 0..N_PARAMS {
                exp[k] = centroid[k] + gamma * (refl[k] - centroid[k]);
            }
            let exp = clip(exp, bounds);
            let f_exp = eval(&exp, &mut evals);
            if f_exp < f_refl {
                simplex[N_PARAMS] = exp;
                fv[N_PARAMS] = f_exp;
            } else {
                simplex[N_PARAMS] = refl;
                fv[N_PARAMS] = f_refl;
            }
        } else if f_refl < fv[N_PARAMS - 1] {
            simplex[N_PARAMS] = refl;
            fv[N_PARAMS] = f_refl;
        } else {
            // contract (outside if reflection improved the worst)
            let (base, f_base) = if f_refl < f_worst { (refl, f_refl) } else { (worst, f_worst) };
            let mut con = [0.0; N_PARAMS];
            for k in 0..N_PARAMS {
                con[k] = centroid[k] + rho * (base[k] - centroid[k]);
            }
            let con = clip(con, bounds);
            let f_con = eval(&con, &mut evals);
            if f_con < f_base {
                simplex[N_PARAMS] = con;
                fv[N_PARAMS] = f_con;
            } else {
                // shrink toward the best vertex
                for i in 1..simplex.len() {
                    for k in 0..N_PARAMS {
                        simplex[i][k] = simplex[0][k] + sigma * (simplex[i][k] - simplex[0][k]);
                    }
                    simplex[i] = clip(simplex[i], bounds);
                    fv[i] = eval(&simplex[i], &mut evals);
                }
            }
        }
    }

    let best = fv
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    LocalResult {
        x: simplex[best],
        f: fv[best],
        evaluations: evals,
        converged,
    }
}

fn window_starts(bounds: &Bounds) -> Vec<[f64; N_PARAMS]> {
    let oa = bounds.omega_a.1 / 3.0;
    let ob = bounds.omega_b.1 / 3.0;
    let pump = PumpConfig {
        omega_a: oa,
        omega_b: ob,
        delta_1: 0.0,
        delta_b: 0.0,
    };
    dressed_spectrum(&pump)
        .window_centers
        .iter()
        .map(|&c| [oa, ob, 0.0, 0.0, c])
        .collect()
}

fn run_multi_start(
    opd: f64,
    bounds: &Bounds,
    budget: u64,
    seed: u64,
    ens: &EnsembleConfig,
    rates: &DecayRates,
    warm: &[ParamPoint],
) -> OptimumRecord {
    assert!(opd > 0.0, "optical depth must be positive");
    assert!(budget >= 1000, "evaluation budget must be at least 1000");
    bounds.validate().expect("invalid bounds");

    let barr = bounds.as_array();
    let mut starts = window_starts(bounds);
    for w in warm {
        starts.push(clip(w.as_array(), &barr));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists: Vec<Uniform<f64>> = barr.iter().map(|&(lo, hi)| Uniform::new_inclusive(lo, hi)).collect();
    while starts.len() < DEFAULT_N_STARTS + warm.len() {
        let mut x = [0.0; N_PARAMS];
        for (v, d) in x.iter_mut().zip(&dists) {
            *v = d.sample(&mut rng);
        }
        starts.push(x);
    }
    for s in starts.iter_mut() {
        *s = clip(*s, &barr);
    }

    let per_start = budget / starts.len() as u64;
    let objective = |x: &[f64; N_PARAMS]| -eta_d_at(&ParamPoint::from_array(*x), opd, ens, rates);

    let locals = par::map_ordered(&starts, |&x0| nelder_mead(&objective, x0, &barr, per_start));

    // pick the best; ties broken toward Δω_i < 0, then lowest start index
    let mut best_i = 0;
    for i in 1..locals.len() {
        let (fb, fi) = (locals[best_i].f, locals[i].f);
        if fi < fb - TIE_TOL {
            best_i = i;
        } else if (fi - fb).abs() <= TIE_TOL && locals[i].x[4] < 0.0 && locals[best_i].x[4] >= 0.0 {
            best_i = i;
        }
    }
    let best = &locals[best_i];
    let params = ParamPoint::from_array(best.x);
    let ens_at = EnsembleConfig { opd, ..*ens };
    let pump = params.pump();
    let probe = ProbeConfig::new(params.dw_i, &pump);
    let conv = coefficients(&pump, &probe, &ens_at, rates)
        .map(|c| efficiencies(&c))
        .unwrap_or(crate::parametric::ConversionResult {
            eta_d: 0.0,
            eta_u: 0.0,
            t_d: 0.0,
            t_u: 0.0,
        });

    OptimumRecord {
        opd,
        params,
        eta_d: -best.f,
        eta_u: conv.eta_u,
        t_d: conv.t_d,
        evaluations: locals.iter().map(|l| l.evaluations).sum(),
        converged: best.converged,
        starts_used: starts.len(),
        seed,
    }
}

/// Best point found by window-seeded multi-start bounded Nelder-Mead at a
/// fixed optical depth. Deterministic for a fixed seed. When the budget
/// runs out before convergence the best-so-far is returned with
/// `converged = false`.
pub fn optimize_at_opd(
    opd: f64,
    bounds: &Bounds,
    budget: u64,
    seed: u64,
    ens: &EnsembleConfig,
    rates: &DecayRates,
) -> OptimumRecord {
    run_multi_start(opd, bounds, budget, seed, ens, rates, &[])
}

/// One optimization per optical depth, each warm-started from the previous
/// optimum in addition to the fresh window-seeded starts.
pub fn efficiency_vs_opd(
    opd_list: &[f64],
    bounds: &Bounds,
    budget: u64,
    seed: u64,
    ens: &EnsembleConfig,
    rates: &DecayRates,
) -> Vec<OptimumRecord> {
    debug_assert!(opd_list.windows(2).all(|w| w[0] < w[1]));
    let mut records = Vec::with_capacity(opd_list.len());
    let mut warm: Vec<ParamPoint> = Vec::new();
    for &opd in opd_list {
        let rec = run_multi_start(opd, bounds, budget, seed, ens, rates, &warm);
        warm = vec![rec.params];
        records.push(rec);
    }
    records
}

/// |η_d(params) − η_d(params with negated detunings)|; the model's
/// sign-flip symmetry makes this vanish.
pub fn verify_detuning_symmetry(
    record: &OptimumRecord,
    ens: &EnsembleConfig,
    rates: &DecayRates,
) -> f64 {
    let a = eta_d_at(&record.params, record.opd, ens, rates);
    let b = eta_d_at(&record.params.negated_detunings(), record.opd, ens, rates);
    (a - b).abs()
}
