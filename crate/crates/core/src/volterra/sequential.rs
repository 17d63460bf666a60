//! Node-by-node solver for the assembled boundary equation.

use super::config::{QuadRule, ResidualReport, SolverConfig};
use super::grid::{build_taus, BoundaryGrid};
use super::problem::{assemble_node_residual, BoundaryProblem};
use crate::error::{Error, Result};

/// Marches the boundary forward one node at a time, solving each node's
/// residual equation with a safeguarded root search.
///
/// Returns the solved grid and a residual report with per-node diagnostics.
pub fn solve_sequential<P: BoundaryProblem + ?Sized>(
    problem: &P,
    config: &SolverConfig,
) -> Result<(BoundaryGrid, ResidualReport)> {
    config.validate()?;
    let taus = build_taus(problem.tau_max(), config.m, config.spacing);
    check_spacing(problem, &taus)?;

    let y0 = problem.initial_value();
    let mut ys = vec![y0];
    let mut report = ResidualReport {
        residuals: vec![0.0],
        iterations: vec![0],
        warnings: Vec::new(),
    };

    for j in 1..=config.m {
        let guess = extrapolated_guess(&taus, &ys, j);
        let node = solve_node(problem, &taus, &ys, j, guess, config, &mut report.warnings)?;
        ys.push(node.y);
        report.residuals.push(node.residual.abs());
        report.iterations.push(node.iterations);
    }

    let mut pullback = Vec::with_capacity(ys.len());
    for (tau, y) in taus.iter().zip(&ys) {
        pullback.push(problem.pullback(*tau, *y)?);
    }
    let converged = report
        .residuals
        .iter()
        .map(|r| *r <= config.root_tol)
        .collect();
    Ok((
        BoundaryGrid {
            taus,
            ys,
            pullback,
            converged,
        },
        report,
    ))
}

/// Fails early when the grid steps undercut the smallest kernel separation
/// the problem can evaluate.
fn check_spacing<P: BoundaryProblem + ?Sized>(problem: &P, taus: &[f64]) -> Result<()> {
    let floor = problem.min_delta();
    if floor <= 0.0 {
        return Ok(());
    }
    let smallest = taus
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if smallest < floor * 0.999 {
        return Err(Error::domain(format!(
            "grid step {smallest:.3e} undercuts the smallest evaluable kernel separation \
             {floor:.3e}; rebuild the problem for finer grids"
        )));
    }
    Ok(())
}

/// Linear extrapolation from the last two solved nodes.
fn extrapolated_guess(taus: &[f64], ys: &[f64], j: usize) -> f64 {
    let n = ys.len();
    if n < 2 {
        return ys[n - 1];
    }
    let slope = (ys[n - 1] - ys[n - 2]) / (taus[n - 1] - taus[n - 2]);
    ys[n - 1] + slope * (taus[j] - taus[n - 1])
}

struct NodeSolution {
    y: f64,
    residual: f64,
    iterations: usize,
}

/// Outermost admissible search bounds, relative to the previous node.
fn node_bracket<P: BoundaryProblem + ?Sized>(problem: &P, y_prev: f64) -> (f64, f64) {
    if problem.positive_boundary() {
        (0.2 * y_prev, 5.0 * y_prev)
    } else {
        let width = 2.4 * y_prev.abs() + 0.1;
        (y_prev - width, y_prev + width)
    }
}

/// Residual evaluations for one node, with a memory of every point tried.
struct NodeSearch<'a, P: ?Sized> {
    problem: &'a P,
    taus: &'a [f64],
    known_ys: &'a [f64],
    j: usize,
    rule: QuadRule,
    evals: usize,
    history: Vec<(f64, f64)>,
}

impl<P: BoundaryProblem + ?Sized> NodeSearch<'_, P> {
    /// Evaluates the residual at a trial level. A failure on the very first
    /// point is a hard error; on later points it marks the trial as
    /// infeasible (an extreme level can push the interpolant out of the
    /// kernels' domain) and the caller narrows its search instead.
    fn try_eval(&mut self, y: f64) -> Result<Option<f64>> {
        match assemble_node_residual(self.problem, self.taus, self.known_ys, self.j, y, self.rule) {
            Ok(r) => {
                self.evals += 1;
                self.history.push((y, r));
                Ok(Some(r))
            }
            Err(e) => {
                if self.history.is_empty() {
                    Err(e)
                } else {
                    self.evals += 1;
                    Ok(None)
                }
            }
        }
    }

    /// Adjacent pair of evaluated points straddling a zero crossing of the
    /// requested orientation, nearest to the given center. Upward crossings
    /// (residual rising through zero) mark the stable branch; downward ones
    /// are usually saturation artifacts left by a trial boundary that
    /// outran the diffusion cone, so they serve only as a fallback.
    fn nearest_bracket(&self, center: f64, upward: bool) -> Option<((f64, f64), (f64, f64))> {
        let mut points = self.history.clone();
        points.sort_by(|p, q| p.0.total_cmp(&q.0));
        points.dedup_by(|p, q| p.0 == q.0);
        let mut best: Option<((f64, f64), (f64, f64))> = None;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let crosses = if upward {
                a.1 < 0.0 && b.1 >= 0.0
            } else {
                a.1 > 0.0 && b.1 <= 0.0
            };
            if crosses {
                let dist = (0.5 * (a.0 + b.0) - center).abs();
                let better = match &best {
                    Some((c, d)) => (0.5 * (c.0 + d.0) - center).abs() > dist,
                    None => true,
                };
                if better {
                    best = Some((a, b));
                }
            }
        }
        best
    }
}

/// Shrinks a sign-change bracket with secant steps safeguarded by
/// bisection, returning the best point seen if the tolerance stays out of
/// reach.
fn refine<P: BoundaryProblem + ?Sized>(
    search: &mut NodeSearch<'_, P>,
    bracket: ((f64, f64), (f64, f64)),
    tol: f64,
    max_steps: usize,
) -> Result<(f64, f64)> {
    let ((mut a, mut ra), (mut b, mut rb)) = bracket;
    if ra.abs() <= tol {
        return Ok((a, ra));
    }
    if rb.abs() <= tol {
        return Ok((b, rb));
    }
    let mut best = if ra.abs() <= rb.abs() { (a, ra) } else { (b, rb) };
    for _ in 0..max_steps {
        let mut mid = 0.5 * (a + b);
        let denom = rb - ra;
        if denom != 0.0 {
            let secant = a - ra * (b - a) / denom;
            if secant > a + 0.125 * (b - a) && secant < b - 0.125 * (b - a) {
                mid = secant;
            }
        }
        let Some(rm) = search.try_eval(mid)? else {
            break;
        };
        if rm.abs() < best.1.abs() {
            best = (mid, rm);
        }
        if rm.abs() <= tol {
            return Ok((mid, rm));
        }
        if (rm < 0.0) == (ra < 0.0) {
            a = mid;
            ra = rm;
        } else {
            b = mid;
            rb = rm;
        }
        if b - a <= 1e-15 * b.abs().max(a.abs()).max(1e-30) {
            break;
        }
    }
    Ok(best)
}

/// Safeguarded root search on a single node's residual.
///
/// A chord iteration from the extrapolated guess settles the common case in
/// a handful of evaluations, with the slope seeded by the analytic datum
/// derivative plus a one-time finite difference of the memory part. When
/// the chord diverges, stalls, or lands on a downward crossing, the search
/// probes outward from the guess on the local step scale, brackets the
/// nearest crossing (upward preferred), and polishes it with
/// secant-accelerated bisection.
fn solve_node<P: BoundaryProblem + ?Sized>(
    problem: &P,
    taus: &[f64],
    known_ys: &[f64],
    j: usize,
    guess: f64,
    config: &SolverConfig,
    warnings: &mut Vec<String>,
) -> Result<NodeSolution> {
    let y_prev = known_ys[j - 1];
    let (mut outer_lo, mut outer_hi) = node_bracket(problem, y_prev);
    let step = (taus[j] - taus[j - 1]).sqrt();
    let mut search = NodeSearch {
        problem,
        taus,
        known_ys,
        j,
        rule: config.quadrature,
        evals: 0,
        history: Vec::new(),
    };

    let y_start = guess.clamp(outer_lo, outer_hi);
    let r_start = search
        .try_eval(y_start)?
        .expect("a first-point failure propagates as an error");
    if r_start.abs() <= config.root_tol {
        return Ok(NodeSolution {
            y: y_start,
            residual: r_start,
            iterations: search.evals,
        });
    }

    // Chord slope: the analytic datum derivative plus a finite difference
    // of everything else, refreshed by secant updates when progress slows.
    let h = 1e-7 * y_start.abs().max(1.0);
    let mut slope = match search.try_eval(y_start + h)? {
        Some(r_shift) => {
            let datum = problem.datum(taus[j], y_start)?;
            let datum_shift = problem.datum(taus[j], y_start + h)?;
            problem.datum_dy(taus[j], y_start)? + ((r_shift - datum_shift) - (r_start - datum)) / h
        }
        None => problem.datum_dy(taus[j], y_start)?,
    };

    let mut y = y_start;
    let mut r = r_start;
    for _ in 0..config.max_newton_iters.min(16) {
        if !slope.is_finite() || slope == 0.0 {
            break;
        }
        let y_next = (y - r / slope).clamp(outer_lo, outer_hi);
        if y_next == y {
            break;
        }
        let Some(r_next) = search.try_eval(y_next)? else {
            if y_next > y {
                outer_hi = y + 0.9 * (y_next - y);
            } else {
                outer_lo = y + 0.9 * (y_next - y);
            }
            break;
        };
        if r_next.abs() <= config.root_tol {
            // Accept only an upward crossing; the secant through the last
            // two iterates estimates the local residual slope.
            let local = (r_next - r) / (y_next - y);
            if local > 0.0 {
                return Ok(NodeSolution {
                    y: y_next,
                    residual: r_next,
                    iterations: search.evals,
                });
            }
            warnings.push(format!(
                "node {j}: chord landed on a downward crossing, rebracketing"
            ));
            break;
        }
        if r_next.abs() > 0.5 * r.abs() {
            slope = (r_next - r) / (y_next - y);
        }
        let diverged = r_next.abs() > 20.0 * r_start.abs();
        y = y_next;
        r = r_next;
        if diverged {
            break;
        }
    }

    // Robust path: bracket the nearest upward crossing, probing outward on
    // the local step scale if the chord history holds none.
    let mut bracket = search.nearest_bracket(y_start, true);
    if bracket.is_none() {
        for i in 0..80 {
            let off = step * 0.5 * f64::powi(2.0, i / 2);
            let dir = if i % 2 == 0 { 1.0 } else { -1.0 };
            let y_probe = (y_start + dir * off).clamp(outer_lo, outer_hi);
            match search.try_eval(y_probe)? {
                Some(r_probe) => {
                    if r_probe.abs() <= config.root_tol {
                        return Ok(NodeSolution {
                            y: y_probe,
                            residual: r_probe,
                            iterations: search.evals,
                        });
                    }
                    bracket = search.nearest_bracket(y_start, true);
                    if bracket.is_some() {
                        break;
                    }
                }
                None => {
                    if dir > 0.0 {
                        outer_hi = y_start + 0.95 * (y_probe - y_start);
                    } else {
                        outer_lo = y_start + 0.95 * (y_probe - y_start);
                    }
                }
            }
            if y_start + off >= outer_hi && y_start - off <= outer_lo {
                break;
            }
        }
    }
    if bracket.is_none() {
        bracket = search.nearest_bracket(y_start, false);
        if bracket.is_some() {
            warnings.push(format!(
                "node {j}: only a downward crossing was found; the residual \
                 may sit on an unstable branch"
            ));
        }
    }
    let Some(found) = bracket else {
        return Err(Error::BoundaryNode {
            node: j,
            reason: format!(
                "no sign change within [{outer_lo:.6}, {outer_hi:.6}], \
                 residual {r_start:.3e} at the guess {y_start:.6}"
            ),
        });
    };

    let (y_root, r_root) = refine(
        &mut search,
        found,
        config.root_tol,
        config.max_newton_iters.max(40),
    )?;
    if r_root.abs() <= config.root_tol {
        return Ok(NodeSolution {
            y: y_root,
            residual: r_root,
            iterations: search.evals,
        });
    }
    if r_root.abs() <= 10.0 * config.root_tol {
        warnings.push(format!(
            "node {j}: accepted residual {:.3e} just above tolerance",
            r_root
        ));
        return Ok(NodeSolution {
            y: y_root,
            residual: r_root,
            iterations: search.evals,
        });
    }
    Err(Error::BoundaryNode {
        node: j,
        reason: format!("root stuck at residual {:.3e} after bisection", r_root),
    })
}


#[cfg(test)]
mod diag {
    use super::*;
    use crate::volterra::config::GridSpacing;
    use crate::volterra::manufactured::ManufacturedProblem;
    use crate::volterra::ou::fixtures::{benchmark_problem, mild_problem};
    use std::f64::consts::PI;

    #[test]
    #[ignore]
    fn scan_tiny_sigma_node1() {
        let problem = mild_problem(0.02, 0.03, 0.005);
        let tau_max = problem.tau_max();
        let taus = build_taus(tau_max, 2, GridSpacing::Uniform);
        let known = [problem.initial_value()];
        eprintln!("tau1 = {:.6e}, y0 = {}", taus[1], known[0]);
        let mut ys: Vec<f64> = Vec::new();
        for k in 0..40 {
            ys.push(60.0 + 0.00125 * f64::powi(2.0, k / 4) * (1.0 + 0.25 * (k % 4) as f64));
        }
        for y in [100.0, 150.0, 200.0, 259.48, 299.0] {
            ys.push(y);
        }
        for y in ys {
            let r = assemble_node_residual(&problem, &taus, &known, 1, y, QuadRule::Simpson);
            match r {
                Ok(r) => eprintln!("y = {y:>12.6}  R = {r:+.6e}"),
                Err(e) => eprintln!("y = {y:>12.6}  ERR {e}"),
            }
        }
    }

    #[test]
    #[ignore]
    fn scan_manufactured_node1() {
        let problem = mild_problem(0.02, 0.03, 0.4);
        let tau_max = problem.tau_max();
        let y0 = problem.initial_value();
        let curve = move |tau: f64| {
            let u = tau / tau_max;
            y0 + 0.8 * u + 0.15 * (PI * u).sin()
        };
        let deriv = move |tau: f64| {
            let u = tau / tau_max;
            (0.8 + 0.15 * PI * (PI * u).cos()) / tau_max
        };
        let m = 16;
        let taus = build_taus(tau_max, m, GridSpacing::Uniform);
        let wrapped = ManufacturedProblem::new(&problem, curve, deriv, &taus).expect("builds");
        let config = SolverConfig {
            m,
            quadrature: QuadRule::Trapezoid,
            ..SolverConfig::default()
        };
        let (grid, report) = solve_sequential(&wrapped, &config).expect("solves");
        for j in 0..=m {
            eprintln!(
                "node {j:>2}: solved {:+.8}  exact {:+.8}  diff {:+.3e}  iters {}",
                grid.ys[j],
                wrapped.exact(grid.taus[j]),
                grid.ys[j] - wrapped.exact(grid.taus[j]),
                report.iterations[j]
            );
        }
        let known = [y0];
        let exact1 = wrapped.exact(taus[1]);
        eprintln!("sweep around exact node-1 root {exact1:.8}, step scale {:.4e}", (taus[1] - taus[0]).sqrt());
        for k in -20..=20 {
            let y = exact1 + 0.01 * k as f64;
            let r = assemble_node_residual(&wrapped, &taus, &known, 1, y, QuadRule::Trapezoid);
            match r {
                Ok(r) => eprintln!("y = {y:>12.6}  R = {r:+.6e}"),
                Err(e) => eprintln!("y = {y:>12.6}  ERR {e}"),
            }
        }
    }

    #[test]
    #[ignore]
    fn scan_benchmark_node3() {
        let problem = benchmark_problem(60.0);
        let config = SolverConfig::default();
        let (grid, report) = solve_sequential(&problem, &config).expect("solves");
        eprintln!("iters {:?}", report.iterations);
        eprintln!("resid {:?}", report.residuals);
        let j = 3;
        let known = &grid.ys[..j];
        let root = grid.ys[j];
        for k in -10..=10 {
            let y = root + 0.002 * k as f64;
            let r = assemble_node_residual(&problem, &grid.taus, known, j, y, QuadRule::Simpson);
            match r {
                Ok(r) => eprintln!("y = {y:>12.6}  R = {r:+.6e}"),
                Err(e) => eprintln!("y = {y:>12.6}  ERR {e}"),
            }
        }
        // fine sweep to expose micro-jumps near the root
        for k in -10..=10 {
            let y = root + 2e-7 * k as f64;
            let r = assemble_node_residual(&problem, &grid.taus, known, j, y, QuadRule::Simpson)
                .expect("assembles");
            eprintln!("y = {y:>16.10}  R = {r:+.6e}");
        }
    }
}
