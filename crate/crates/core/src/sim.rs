//! Mass-action ODE integration, steady-state detection, and empirical
//! monotonicity sweeps.
//!
//! The integrator is an embedded Dormand-Prince 5(4) pair with the usual
//! 4th-order dense-output interpolant. Trajectories carry a fixed uniform
//! grid (plus all accepted step endpoints) so that two runs can be compared
//! pointwise.

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{species_derivatives, Network};

/// Number of uniform sample points per trajectory, endpoints included.
pub const GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// trailing window over which the steady state is assessed
    pub ss_window: f64,
    /// relative-change threshold of the steady-state criterion
    pub ss_tol: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            t_end: 200.0,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_steps: 10_000_000,
            ss_window: 20.0,
            ss_tol: 1e-6,
        }
    }
}

impl SimConfig {
    pub fn with_t_end(t_end: f64) -> Self {
        SimConfig {
            t_end,
            ss_window: 0.1 * t_end,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        let ok = self.t_end > 0.0
            && self.rel_tol >= 1e-12
            && self.abs_tol > 0.0
            && self.max_steps > 0
            && self.ss_window > 0.0
            && self.ss_window < self.t_end
            && self.ss_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(SimError::BadConfig)
        }
    }
}

/// Final-state summary of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub state: Vec<f64>,
    pub converged: bool,
}

/// An integrated solution: strictly increasing times from 0 to `t_end`,
/// one state per time, plus the indices of the uniform sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// indices into `times`/`states` of the `GRID_POINTS` uniform samples
    pub grid: Vec<usize>,
    pub steady_state: Option<SteadyState>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory is never empty")
    }

    /// Values of one species on the uniform grid.
    pub fn grid_series(&self, species: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid
            .iter()
            .map(move |&idx| (self.times[idx], self.states[idx][species]))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation configuration")]
    BadConfig,
    #[error("initial state has wrong dimension or negative entries")]
    BadInitial,
    #[error("step limit exceeded at t = {t}")]
    MaxStepsExceeded { t: f64 },
    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("trajectory does not cover the steady-state window")]
    WindowTooLong,
    #[error("sweep values must be strictly increasing and non-negative")]
    BadSweepValues,
    #[error("input and output species must be distinct")]
    InputEqualsOutput,
    #[error("simulation failed for input value {value}: {source}")]
    SweepFailure {
        value: f64,
        #[source]
        source: Box<SimError>,
    },
}

// Dormand-Prince 5(4) tableau (autonomous system, so no c nodes needed).
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

struct DenseSegment {
    t0: f64,
    h: f64,
    cont: [Vec<f64>; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> Vec<f64> {
        let s = if self.h == 0.0 { 0.0 } else { (t - self.t0) / self.h };
        let s1 = 1.0 - s;
        let n = self.cont[0].len();
        (0..n)
            .map(|i| {
                self.cont[0][i]
                    + s * (self.cont[1][i]
                        + s1 * (self.cont[2][i]
                            + s * (self.cont[3][i] + s1 * self.cont[4][i])))
            })
            .collect()
    }
}

/// Integrate the mass-action ODEs from `init` to `cfg.t_end`.
///
/// A step that produces a slightly negative component (magnitude below
/// `abs_tol`) is clamped to zero; larger undershoots reject the step and
/// retry at half size.
pub fn simulate(network: &Network, init: &[f64], cfg: &SimConfig) -> Result<Trajectory, SimError> {
    cfg.validate()?;
    let dim = network.num_species();
    if init.len() != dim || init.iter().any(|&c| c < 0.0 || !c.is_finite()) {
        return Err(SimError::BadInitial);
    }

    let f = |y: &[f64]| species_derivatives(network, y).expect("dimension fixed");

    let grid_times: Vec<f64> = (0..GRID_POINTS)
        .map(|k| cfg.t_end * k as f64 / (GRID_POINTS - 1) as f64)
        .collect();

    let mut times: Vec<f64> = vec![0.0];
    let mut states: Vec<Vec<f64>> = vec![init.to_vec()];
    let mut grid: Vec<usize> = vec![0];
    let mut next_grid = 1;

    if dim == 0 || network.num_reactions() == 0 {
        // nothing evolves; fill the grid with the constant state
        for &t in &grid_times[1..] {
            times.push(t);
            states.push(init.to_vec());
            grid.push(times.len() - 1);
        }
        let steady = detect_steady_state_inner(&times, &states, cfg)?;
        return Ok(Trajectory {
            times,
            states,
            grid,
            steady_state: Some(steady),
        });
    }

    let mut t = 0.0_f64;
    let mut y = init.to_vec();
    let mut k1 = f(&y);
    let mut h = initial_step(&y, &k1, cfg);
    let mut steps = 0usize;

    while t < cfg.t_end {
        if steps >= cfg.max_steps {
            return Err(SimError::MaxStepsExceeded { t });
        }
        steps += 1;
        h = h.min(cfg.t_end - t);

        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| Vec::new());
        k[0] = k1.clone();
        for stage in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..dim {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[stage] = f(&ys);
        }
        // 5th-order solution is the stage-7 state (FSAL)
        let mut y_new = y.clone();
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = A[6][j];
            if b != 0.0 {
                for i in 0..dim {
                    y_new[i] += h * b * kj[i];
                }
            }
        }

        if y_new.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { t: t + h });
        }

        // error norm
        let mut err = 0.0_f64;
        for i in 0..dim {
            let sk = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            let e: f64 = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            err += (e / sk) * (e / sk);
        }
        err = (err / dim as f64).sqrt();

        if err <= 1.0 {
            // mass action is forward-invariant; tiny numerical undershoots
            // are clamped, real ones force a smaller step
            let worst = y_new.iter().cloned().fold(0.0_f64, f64::min);
            if worst < -cfg.abs_tol {
                h *= 0.5;
                continue;
            }
            for v in y_new.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }

            let k7 = f(&y_new);
            let mut cont = [
                y.clone(),
                vec![0.0; dim],
                vec![0.0; dim],
                vec![0.0; dim],
                vec![0.0; dim],
            ];
            for i in 0..dim {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
            }
            let segment = DenseSegment { t0: t, h, cont };
            let t_new = t + h;

            // uniform grid samples inside (t, t_new]
            while next_grid < GRID_POINTS && grid_times[next_grid] <= t_new + 1e-14 * cfg.t_end {
                let tg = grid_times[next_grid];
                let mut yg = if (tg - t_new).abs() <= 1e-14 * cfg.t_end {
                    y_new.clone()
                } else {
                    segment.eval(tg)
                };
                for v in yg.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                if *times.last().unwrap() < tg {
                    times.push(tg);
                    states.push(yg);
                    grid.push(times.len() - 1);
                } else {
                    // endpoint coincides with the previous sample
                    grid.push(times.len() - 1);
                }
                next_grid += 1;
            }
            if *times.last().unwrap() < t_new {
                times.push(t_new);
                states.push(y_new.clone());
            }

            t = t_new;
            y = y_new;
            k1 = k7;

            let scale = 0.9 * err.powf(-0.2);
            h *= scale.clamp(0.2, 5.0);
        } else {
            let scale = 0.9 * err.powf(-0.2);
            h *= scale.clamp(0.2, 1.0);
        }
    }

    debug_assert_eq!(grid.len(), GRID_POINTS);
    let steady = detect_steady_state_inner(&times, &states, cfg)?;
    Ok(Trajectory {
        times,
        states,
        grid,
        steady_state: Some(steady),
    })
}

fn initial_step(y: &[f64], dy: &[f64], cfg: &SimConfig) -> f64 {
    let norm_y = y.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let norm_dy = dy.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let h = if norm_dy > 1e-12 {
        0.01 * (norm_y.max(cfg.abs_tol) / norm_dy)
    } else {
        cfg.t_end / 100.0
    };
    h.min(cfg.t_end / 10.0).max(1e-10 * cfg.t_end)
}

/// Trailing-window steady-state criterion: over the last `ss_window` time
/// units, every species must stay within `ss_tol` relative of its final
/// value.
pub fn detect_steady_state(traj: &Trajectory, cfg: &SimConfig) -> Result<SteadyState, SimError> {
    detect_steady_state_inner(&traj.times, &traj.states, cfg)
}

fn detect_steady_state_inner(
    times: &[f64],
    states: &[Vec<f64>],
    cfg: &SimConfig,
) -> Result<SteadyState, SimError> {
    let t_end = *times.last().ok_or(SimError::WindowTooLong)?;
    let window_start = t_end - cfg.ss_window;
    if window_start < times[0] {
        return Err(SimError::WindowTooLong);
    }
    let last = states.last().unwrap();
    // relative to the overall state scale, so near-zero species are not held
    // to thresholds below the integrator's own error
    let norm = last.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let scale = cfg.ss_tol * norm.max(cfg.abs_tol);
    let mut converged = true;
    'species: for j in 0..last.len() {
        for (t, state) in times.iter().zip(states) {
            if *t >= window_start && (state[j] - last[j]).abs() > scale {
                converged = false;
                break 'species;
            }
        }
    }
    Ok(SteadyState {
        state: last.clone(),
        converged,
    })
}

/// Pointwise comparison of two output series on the shared uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDominance {
    /// indices into the sweep's `input_values`
    pub lower: usize,
    pub upper: usize,
    /// the higher-input trajectory stays >= the lower one (within tolerance)
    pub upper_dominates: bool,
    /// the higher-input trajectory stays <= the lower one (within tolerance)
    pub lower_dominates: bool,
    /// largest breach of upper dominance (positive = violation) and its time
    pub worst_gap: f64,
    pub worst_time: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DominanceReport {
    pub pairs: Vec<PairDominance>,
    pub tol_dom: f64,
}

/// Result of simulating one network per input value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub input_values: Vec<f64>,
    pub output_at_ss: Vec<f64>,
    pub converged: Vec<bool>,
    pub trajectories: Vec<Trajectory>,
    pub dominance: DominanceReport,
}

/// Simulate once per input value, holding every other initial concentration
/// fixed, and compare adjacent trajectories pointwise.
pub fn sweep(
    network: &Network,
    input: usize,
    values: &[f64],
    output: usize,
    cfg: &SimConfig,
) -> Result<SweepResult, SimError> {
    cfg.validate()?;
    if input == output {
        return Err(SimError::InputEqualsOutput);
    }
    if values.is_empty()
        || values.iter().any(|&v| v < 0.0 || v.is_nan())
        || values.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(SimError::BadSweepValues);
    }

    let trajectories: Vec<Trajectory> = values
        .par_iter()
        .map(|&v| {
            let mut init = network.initial.clone();
            init[input] = v;
            simulate(network, &init, cfg).map_err(|e| SimError::SweepFailure {
                value: v,
                source: Box::new(e),
            })
        })
        .collect::<Result<_, _>>()?;

    let output_at_ss: Vec<f64> = trajectories
        .iter()
        .map(|tr| tr.steady_state.as_ref().unwrap().state[output])
        .collect();
    let converged: Vec<bool> = trajectories
        .iter()
        .map(|tr| tr.steady_state.as_ref().unwrap().converged)
        .collect();

    // dominance tolerance scales with the largest output value seen
    let max_scale = trajectories
        .iter()
        .flat_map(|tr| tr.grid.iter().map(|&i| tr.states[i][output].abs()))
        .fold(cfg.abs_tol, f64::max);
    let tol_dom = cfg.ss_tol * max_scale;

    let mut pairs = Vec::new();
    for w in 0..trajectories.len().saturating_sub(1) {
        let lo = &trajectories[w];
        let hi = &trajectories[w + 1];
        let mut upper_dominates = true;
        let mut lower_dominates = true;
        let mut worst_gap = f64::NEG_INFINITY;
        let mut worst_time = 0.0;
        for (&il, &ih) in lo.grid.iter().zip(&hi.grid) {
            let (a, b) = (lo.states[il][output], hi.states[ih][output]);
            let gap = a - b; // positive when the lower input is ahead
            if gap > worst_gap {
                worst_gap = gap;
                worst_time = lo.times[il];
            }
            if gap > tol_dom {
                upper_dominates = false;
            }
            if -gap > tol_dom {
                lower_dominates = false;
            }
        }
        pairs.push(PairDominance {
            lower: w,
            upper: w + 1,
            upper_dominates,
            lower_dominates,
            worst_gap,
            worst_time,
        });
    }

    Ok(SweepResult {
        input_values: values.to_vec(),
        output_at_ss,
        converged,
        trajectories,
        dominance: DominanceReport { pairs, tol_dom },
    })
}

/// Empirical verdict from pointwise trajectory dominance.
#[derive(Debug, Clone, PartialEq)]
pub enum EmpiricalOutcome {
    ConsistentPositive,
    ConsistentNegative,
    /// trajectories are cleanly ordered pairwise but not in one direction
    Violation {
        lower: usize,
        upper: usize,
        time: f64,
        gap: f64,
    },
    /// some adjacent pair crosses: neither ordering holds within tolerance
    Indeterminate,
}

/// Test the input-output monotonicity definitions empirically: every
/// adjacent pair of sweep trajectories must be ordered pointwise in the same
/// direction.
pub fn check_empirical_monotonicity(
    network: &Network,
    input: usize,
    output: usize,
    values: &[f64],
    cfg: &SimConfig,
) -> Result<(EmpiricalOutcome, SweepResult), SimError> {
    let result = sweep(network, input, values, output, cfg)?;
    let pairs = &result.dominance.pairs;
    let outcome = if pairs.iter().all(|p| p.upper_dominates) {
        EmpiricalOutcome::ConsistentPositive
    } else if pairs.iter().all(|p| p.lower_dominates) {
        EmpiricalOutcome::ConsistentNegative
    } else if pairs.iter().any(|p| !p.upper_dominates && !p.lower_dominates) {
        EmpiricalOutcome::Indeterminate
    } else {
        let p = pairs
            .iter()
            .find(|p| !p.upper_dominates)
            .or_else(|| pairs.iter().find(|p| !p.lower_dominates))
            .expect("some pair breaks the common ordering");
        EmpiricalOutcome::Violation {
            lower: p.lower,
            upper: p.upper,
            time: p.worst_time,
            gap: p.worst_gap,
        }
    };
    Ok((outcome, result))
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV of a sweep: `input_value,output_ss,converged`.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("input_value,output_ss,converged\n");
    for i in 0..result.input_values.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(result.input_values[i]),
            fmt_float(result.output_at_ss[i]),
            result.converged[i]
        ));
    }
    out
}

/// CSV of a trajectory: time column plus one column per species.
pub fn trajectory_csv(traj: &Trajectory, network: &Network) -> String {
    let mut out = String::from("time");
    for sp in &network.species {
        out.push(',');
        out.push_str(&sp.name);
    }
    out.push('\n');
    for (t, state) in traj.times.iter().zip(&traj.states) {
        out.push_str(&fmt_float(*t));
        for v in state {
            out.push(',');
            out.push_str(&fmt_float(*v));
        }
        out.push('\n');
    }
    out
}
