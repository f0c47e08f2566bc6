//! Radial shooting solver under a box boundary condition.
//!
//! The radial equation for u(r) = r·R(r), in atomic units,
//!
//!   u''(r) = [ l(l+1)/r² + 2V(r) − 2E ] u(r)
//!
//! is integrated outward from a small origin offset r₀ with fixed-step
//! fourth-order Runge-Kutta, and the box eigenvalue problem u(ℛ) = 0 is
//! solved by bisection on E. Interior sign changes of u are counted along
//! the way; by the Sturm oscillation property the node count equals the
//! number of eigenvalues below E, which makes it a robust branch label and
//! lets a lost bracket be recovered by pure counting.
//!
//! Near the origin the regular solution behaves like
//! r^(l+1)·(1 + Zr/(l+1) + …); starting at r₀ = δr with that first-order
//! series keeps the scheme consistent with the O(δr⁴) truncation of the
//! integrator. The irregular solution r^(−l) is suppressed by forward
//! integration. Under a barrier u can grow exponentially, so the (u, u')
//! pair is rescaled in place whenever it exceeds 10²⁰⁰; only sign and node
//! information matter before normalization.

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

/// Relative energy tolerance of the eigenvalue bisection. Tighter than the
/// 1e-8 discretization accuracy of the δr = 1e-4 grid, so the root-finder
/// error is negligible against the integrator error.
pub const EIGEN_REL_TOL: f64 = 1e-10;

/// Converged box states must have |u(ℛ)| below this fraction of max|u|.
pub const BOUNDARY_RATIO: f64 = 1e-6;

const RESCALE_LIMIT: f64 = 1e200;
const RESCALE_FACTOR: f64 = 1e-200;
const MAX_BISECT_ITER: usize = 220;

/// Radial grid parameters: step, origin offset and box radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationParams {
    /// Radial step δr (atomic units).
    pub dr: f64,
    /// Origin offset where integration starts; defaults to δr.
    pub r0: f64,
    /// Box radius ℛ where u is forced to vanish.
    pub box_size: f64,
}

impl IntegrationParams {
    /// Grid with the origin offset equal to the step.
    pub fn new(dr: f64, box_size: f64) -> Result<Self> {
        Self::with_origin(dr, dr, box_size)
    }

    pub fn with_origin(dr: f64, r0: f64, box_size: f64) -> Result<Self> {
        if !(dr > 0.0 && dr <= 1e-3) {
            return Err(Error::InvalidParams(format!(
                "dr must lie in (0, 1e-3], got {dr}"
            )));
        }
        if !(r0 >= dr) {
            return Err(Error::InvalidParams(format!(
                "origin offset {r0} must be at least dr = {dr}"
            )));
        }
        if !(box_size > r0) || !box_size.is_finite() {
            return Err(Error::InvalidParams(format!(
                "box size {box_size} must exceed the origin offset {r0}"
            )));
        }
        Ok(Self { dr, r0, box_size })
    }

    /// Same grid parameters with a different box radius.
    pub fn with_box_size(&self, box_size: f64) -> Result<Self> {
        Self::with_origin(self.dr, self.r0, box_size)
    }

    /// Step count and effective step. The count is snapped to the nearest
    /// integer so the grid lands exactly on the box radius; the effective
    /// step then differs from the nominal one by at most half a step over
    /// the whole range.
    pub(crate) fn grid(&self) -> (usize, f64) {
        let n = ((self.box_size - self.r0) / self.dr).round().max(1.0) as usize;
        (n, (self.box_size - self.r0) / n as f64)
    }
}

/// Outcome of one outward integration at a fixed energy.
#[derive(Debug, Clone)]
pub struct ShootResult {
    /// Wavefunction amplitude at the box radius (arbitrary normalization).
    pub psi_at_box: f64,
    /// Number of interior sign changes of u on (r₀, ℛ), endpoint excluded.
    pub node_count: usize,
    /// Largest |u| seen along the integration, same normalization.
    pub max_abs_psi: f64,
    /// Full-resolution (r, u) samples from r₀ to ℛ, when requested.
    pub samples: Option<Vec<(f64, f64)>>,
}

/// A converged box eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    /// Node count; the stable branch label across box sizes.
    pub n: usize,
    /// Eigenvalue (atomic units).
    pub energy: f64,
    /// Box radius this state was solved in.
    pub box_size: f64,
    /// Orbital angular momentum.
    pub l: u32,
}

/// The energy-independent part of the RK4 right-hand side,
/// w(r) = l(l+1)/r² + 2V(r), pre-evaluated on the half-step grid. One grid
/// serves every energy probed by a bisection at fixed (spec, ℛ), which is
/// where almost all shooting time goes.
#[derive(Debug, Clone)]
pub struct ShootingGrid {
    spec: PotentialSpec,
    r0: f64,
    h: f64,
    n_steps: usize,
    box_size: f64,
    w: Vec<f64>,
}

struct Integration {
    psi_at_box: f64,
    node_count: usize,
    max_abs: f64,
    samples: Option<Vec<(f64, f64)>>,
    captured: Vec<f64>,
}

impl ShootingGrid {
    pub fn build(spec: &PotentialSpec, params: &IntegrationParams) -> Result<Self> {
        let (n_steps, h) = params.grid();
        let lf = f64::from(spec.l) * (f64::from(spec.l) + 1.0);
        let mut w = Vec::with_capacity(2 * n_steps + 1);
        for j in 0..=2 * n_steps {
            let r = params.r0 + 0.5 * h * j as f64;
            let val = lf / (r * r) + 2.0 * spec.eval_total(r)?;
            if !val.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "potential evaluated to a non-finite value at r = {r}"
                )));
            }
            w.push(val);
        }
        Ok(Self {
            spec: *spec,
            r0: params.r0,
            h,
            n_steps,
            box_size: params.box_size,
            w,
        })
    }

    pub fn box_size(&self) -> f64 {
        self.box_size
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Radius of grid node `i` (0 ..= n_steps).
    pub fn node_r(&self, i: usize) -> f64 {
        if i == self.n_steps {
            self.box_size
        } else {
            self.r0 + self.h * i as f64
        }
    }

    /// Grid node nearest to radius `r`.
    pub fn nearest_node(&self, r: f64) -> usize {
        let i = ((r - self.r0) / self.h).round();
        (i.max(0.0) as usize).min(self.n_steps)
    }

    pub fn shoot(&self, energy: f64, collect_samples: bool) -> Result<ShootResult> {
        let out = self.integrate(energy, &[], collect_samples)?;
        Ok(ShootResult {
            psi_at_box: out.psi_at_box,
            node_count: out.node_count,
            max_abs_psi: out.max_abs,
            samples: out.samples,
        })
    }

    /// Wavefunction values at selected grid nodes (sorted indices), all on a
    /// single consistent normalization even if a rescale fires mid-run.
    pub fn shoot_capturing(&self, energy: f64, nodes: &[usize]) -> Result<Vec<f64>> {
        Ok(self.integrate(energy, nodes, false)?.captured)
    }

    pub(crate) fn node_count(&self, energy: f64) -> Result<usize> {
        Ok(self.integrate(energy, &[], false)?.node_count)
    }

    fn integrate(&self, energy: f64, captures: &[usize], collect: bool) -> Result<Integration> {
        if !energy.is_finite() {
            return Err(Error::Domain(format!("energy must be finite, got {energy}")));
        }
        debug_assert!(captures.windows(2).all(|p| p[0] < p[1]));

        let l1 = f64::from(self.spec.l) + 1.0;
        let c = self.spec.z / l1;
        // regular series u ∝ r^(l+1)(1 + Zr/(l+1)), rescaled by r0^(-l) so the
        // start never underflows at high l
        let mut u = self.r0 * (1.0 + c * self.r0);
        let mut v = l1 + c * (l1 + 1.0) * self.r0;

        let h = self.h;
        let e2 = 2.0 * energy;
        let mut nodes = 0usize;
        let mut prev_sign = sign_of(u);
        let mut max_abs = u.abs();
        let mut samples = if collect {
            let mut s = Vec::with_capacity(self.n_steps + 1);
            s.push((self.r0, u));
            Some(s)
        } else {
            None
        };
        let mut captured = Vec::with_capacity(captures.len());
        let mut next_capture = captures.iter().copied().peekable();
        if next_capture.peek() == Some(&0) {
            captured.push(u);
            next_capture.next();
        }

        let coeffs = Rk4Coeffs::new(h);
        for (i, win) in self.w.windows(3).step_by(2).enumerate() {
            let g0 = win[0] - e2;
            let gm = win[1] - e2;
            let g1 = win[2] - e2;
            (u, v) = coeffs.advance(g0, gm, g1, u, v);

            if u.abs() > RESCALE_LIMIT || v.abs() > RESCALE_LIMIT {
                u *= RESCALE_FACTOR;
                v *= RESCALE_FACTOR;
                max_abs *= RESCALE_FACTOR;
                for s in captured.iter_mut() {
                    *s *= RESCALE_FACTOR;
                }
                if let Some(s) = samples.as_mut() {
                    for p in s.iter_mut() {
                        p.1 *= RESCALE_FACTOR;
                    }
                }
            }
            if !u.is_finite() {
                return Err(Error::Domain(format!(
                    "integration diverged at r = {} (E = {energy})",
                    self.node_r(i + 1)
                )));
            }

            // interior node counting: the enforced zero at the box radius is
            // excluded; an exact grid zero counts once
            if i + 1 < self.n_steps {
                let s = sign_of(u);
                if s == 0 {
                    nodes += 1;
                    prev_sign = 0;
                } else if prev_sign == 0 {
                    prev_sign = s;
                } else if s != prev_sign {
                    nodes += 1;
                    prev_sign = s;
                }
            }

            max_abs = max_abs.max(u.abs());
            if let Some(s) = samples.as_mut() {
                s.push((self.node_r(i + 1), u));
            }
            if next_capture.peek() == Some(&(i + 1)) {
                captured.push(u);
                next_capture.next();
            }
        }

        Ok(Integration {
            psi_at_box: u,
            node_count: nodes,
            max_abs,
            samples,
            captured,
        })
    }
}

/// One classic fourth-order Runge-Kutta step of u'' = g(r)·u, written as its
/// exact 2×2 step matrix. For this linear system the four stage vectors
/// collapse algebraically (A(g)² = g·I), which takes the per-step critical
/// path from the full k₁…k₄ dependency chain down to two fused
/// multiply-adds. Same discretization, same order, same truncation term.
#[derive(Clone, Copy)]
struct Rk4Coeffs {
    h: f64,
    c1: f64, // h/6
    c2: f64, // h^2/6
    c3: f64, // h^3/6
    c4: f64, // h^4/24
    c5: f64, // h^3/12
}

impl Rk4Coeffs {
    fn new(h: f64) -> Self {
        let c1 = h / 6.0;
        let c2 = c1 * h;
        let c3 = c2 * h;
        Self {
            h,
            c1,
            c2,
            c3,
            c4: c3 * h / 4.0,
            c5: 0.5 * c3,
        }
    }

    #[inline(always)]
    fn advance(&self, g0: f64, gm: f64, g1: f64, u: f64, v: f64) -> (f64, f64) {
        let m11 = 1.0 + self.c2 * (g0 + 2.0 * gm) + self.c4 * (gm * g0);
        let m12 = self.h + self.c3 * gm;
        let m21 = self.c1 * (g0 + 4.0 * gm + g1) + self.c5 * (gm * (g0 + g1));
        let m22 = 1.0 + self.c2 * (2.0 * gm + g1);
        (m11 * u + m12 * v, m21 * u + m22 * v)
    }
}

impl ShootingGrid {
    /// Last grid node inside the classically allowed region at this energy,
    /// i.e. the outer turning point. None if the whole grid is forbidden.
    fn last_classical_node(&self, energy: f64) -> Option<usize> {
        let e2 = 2.0 * energy;
        (0..=self.n_steps).rev().find(|&i| self.w[2 * i] < e2)
    }

    /// Integrate inward from u(ℛ) = 0, u'(ℛ) = −1 down to `stop` and return
    /// u at every node in `stop ..= n_steps`. Inward integration follows the
    /// solution that decays outward, so it is the stable direction for a
    /// bound-state tail.
    fn integrate_inward(&self, energy: f64, stop: usize) -> Vec<f64> {
        let e2 = 2.0 * energy;
        let mut u = 0.0f64;
        let mut v = -1.0f64;
        let mut out = vec![0.0; self.n_steps - stop + 1];
        let coeffs = Rk4Coeffs::new(-self.h);
        for i in (stop..self.n_steps).rev() {
            let g0 = self.w[2 * (i + 1)] - e2;
            let gm = self.w[2 * i + 1] - e2;
            let g1 = self.w[2 * i] - e2;
            (u, v) = coeffs.advance(g0, gm, g1, u, v);
            if u.abs() > RESCALE_LIMIT || v.abs() > RESCALE_LIMIT {
                u *= RESCALE_FACTOR;
                v *= RESCALE_FACTOR;
                for s in out[i + 1 - stop..].iter_mut() {
                    *s *= RESCALE_FACTOR;
                }
            }
            out[i - stop] = u;
        }
        out
    }
}

fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign changes of u over the interior samples, endpoint excluded, exact
/// zeros counted once — the same rule the integrator applies on the fly.
fn count_interior_nodes(samples: &[(f64, f64)]) -> usize {
    let mut nodes = 0;
    let mut prev = sign_of(samples[0].1);
    for &(_, u) in &samples[1..samples.len() - 1] {
        let s = sign_of(u);
        if s == 0 {
            nodes += 1;
            prev = 0;
        } else if prev == 0 {
            prev = s;
        } else if s != prev {
            nodes += 1;
            prev = s;
        }
    }
    nodes
}

/// Integrate outward once and report the boundary amplitude and node count.
pub fn shoot(
    spec: &PotentialSpec,
    params: &IntegrationParams,
    energy: f64,
    collect_samples: bool,
) -> Result<ShootResult> {
    ShootingGrid::build(spec, params)?.shoot(energy, collect_samples)
}

/// Solve the box eigenvalue of branch `n` inside a caller-supplied bracket.
///
/// The bracket must contain exactly one eigenvalue and it must belong to
/// branch `n`: the boundary amplitude changes sign across it and the node
/// counts at the ends are n and n+1.
pub fn solve_eigenvalue(
    spec: &PotentialSpec,
    params: &IntegrationParams,
    n: usize,
    e_bracket: (f64, f64),
) -> Result<EigenState> {
    let grid = ShootingGrid::build(spec, params)?;
    solve_in_bracket(&grid, n, e_bracket, EIGEN_REL_TOL)
}

pub(crate) fn solve_in_bracket(
    grid: &ShootingGrid,
    n: usize,
    (lo, hi): (f64, f64),
    rel_tol: f64,
) -> Result<EigenState> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParams(format!(
            "energy bracket [{lo}, {hi}] is not an interval"
        )));
    }
    let s_lo = grid.shoot(lo, false)?;
    let s_hi = grid.shoot(hi, false)?;
    let count = s_hi.node_count.saturating_sub(s_lo.node_count);
    if count > 1 {
        return Err(Error::AmbiguousBracket { lo, hi, count });
    }
    if s_lo.node_count > n || s_hi.node_count <= n {
        return Err(Error::EmptyBracket { lo, hi, branch: n });
    }
    if sign_of(s_lo.psi_at_box) == sign_of(s_hi.psi_at_box) {
        return Err(Error::EmptyBracket { lo, hi, branch: n });
    }
    let energy = bisect(grid, lo, hi, sign_of(s_lo.psi_at_box), rel_tol)?;
    Ok(EigenState {
        n,
        energy,
        box_size: grid.box_size(),
        l: grid.spec().l,
    })
}

/// Locate the eigenvalue of branch `n` near a hint energy, recovering from a
/// bad window by expanding it under node-count guidance. This is the
/// continuation workhorse for box-size scans; every probe shot is reused.
pub(crate) fn solve_on_branch(
    grid: &ShootingGrid,
    n: usize,
    hint: f64,
    half_width: f64,
    rel_tol: f64,
) -> Result<EigenState> {
    let lost = |reason: String| Error::BracketLost {
        branch: n,
        box_size: grid.box_size(),
        reason,
    };
    let mut lo = hint - half_width;
    let mut hi = hint + half_width;
    let mut width = half_width.max(1e-6);
    let mut res_lo = grid.shoot(lo, false)?;
    for attempt in 0.. {
        if res_lo.node_count <= n {
            break;
        }
        if attempt >= 64 {
            return Err(lost(format!("no energy below {lo} has node count <= {n}")));
        }
        lo -= width;
        width *= 2.0;
        res_lo = grid.shoot(lo, false)?;
    }
    width = half_width.max(1e-6);
    let mut res_hi = grid.shoot(hi, false)?;
    for attempt in 0.. {
        if res_hi.node_count > n {
            break;
        }
        if attempt >= 64 {
            return Err(lost(format!("no energy above {hi} has node count > {n}")));
        }
        hi += width;
        width *= 2.0;
        res_hi = grid.shoot(hi, false)?;
    }
    // shrink to a bracket holding exactly the branch-n root
    while res_hi.node_count - res_lo.node_count > 1 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(lost(format!(
                "eigenvalues around branch {n} are closer than f64 resolution"
            )));
        }
        let res_mid = grid.shoot(mid, false)?;
        if res_mid.node_count <= n {
            lo = mid;
            res_lo = res_mid;
        } else {
            hi = mid;
            res_hi = res_mid;
        }
    }
    let lo_sign = sign_of(res_lo.psi_at_box);
    if lo_sign == sign_of(res_hi.psi_at_box) {
        return Err(lost("boundary amplitude does not change sign".into()));
    }
    let energy = bisect(grid, lo, hi, lo_sign, rel_tol)?;
    Ok(EigenState {
        n,
        energy,
        box_size: grid.box_size(),
        l: grid.spec().l,
    })
}

fn bisect(grid: &ShootingGrid, lo: f64, hi: f64, lo_sign: i8, rel_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..MAX_BISECT_ITER {
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at f64 resolution
        }
        let s = sign_of(grid.shoot(mid, false)?.psi_at_box);
        if s == lo_sign || s == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All eigenstates with energy below `e_max`, at most `n_max` of them,
/// ordered by energy.
///
/// The energy axis is swept upward from below the spectrum floor with a step
/// of a quarter of the local free-particle level spacing π²(2n+1)/(2ℛ²);
/// every increment of the node count between consecutive probe energies is
/// isolated by count bisection and polished by sign bisection, so nearly
/// degenerate pairs at avoided crossings are not missed.
pub fn list_eigenvalues(
    spec: &PotentialSpec,
    params: &IntegrationParams,
    e_max: f64,
    n_max: usize,
) -> Result<Vec<EigenState>> {
    list_eigenvalues_impl(spec, params, e_max, n_max, 4.0)
}

pub(crate) fn list_eigenvalues_impl(
    spec: &PotentialSpec,
    params: &IntegrationParams,
    e_max: f64,
    n_max: usize,
    spacing_divisor: f64,
) -> Result<Vec<EigenState>> {
    if n_max == 0 {
        return Err(Error::InvalidParams("n_max must be at least 1".into()));
    }
    if !e_max.is_finite() {
        return Err(Error::InvalidParams(format!("e_max must be finite, got {e_max}")));
    }
    let grid = ShootingGrid::build(spec, params)?;
    let rr = params.box_size * params.box_size;

    // find a floor below the whole spectrum
    let mut e_lo = e_max.min(0.0);
    let mut step_down = 1.0;
    while grid.node_count(e_lo)? > 0 {
        e_lo -= step_down;
        step_down *= 2.0;
        if step_down > 1e12 {
            return Err(Error::InvalidParams(
                "could not find an energy below the spectrum".into(),
            ));
        }
    }

    let mut states = Vec::new();
    let mut e = e_lo;
    let mut count = 0usize;
    while e < e_max && states.len() < n_max {
        let spacing = std::f64::consts::PI.powi(2) * (2.0 * count as f64 + 1.0) / (2.0 * rr);
        let e_next = (e + spacing / spacing_divisor).min(e_max);
        let count_next = grid.node_count(e_next)?;
        if count_next > count {
            isolate_roots(&grid, e, count, e_next, count_next, n_max, &mut states)?;
        }
        count = count_next;
        e = e_next;
    }
    states.truncate(n_max);
    Ok(states)
}

fn isolate_roots(
    grid: &ShootingGrid,
    lo: f64,
    c_lo: usize,
    hi: f64,
    c_hi: usize,
    n_max: usize,
    out: &mut Vec<EigenState>,
) -> Result<()> {
    if out.len() >= n_max {
        return Ok(());
    }
    if c_hi - c_lo == 1 {
        out.push(solve_in_bracket(grid, c_lo, (lo, hi), EIGEN_REL_TOL)?);
        return Ok(());
    }
    if hi - lo < 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
        return Err(Error::AmbiguousBracket {
            lo,
            hi,
            count: c_hi - c_lo,
        });
    }
    let mid = 0.5 * (lo + hi);
    let c_mid = grid.node_count(mid)?;
    isolate_roots(grid, lo, c_lo, mid, c_mid, n_max, out)?;
    isolate_roots(grid, mid, c_mid, hi, c_hi, n_max, out)
}

/// Re-shoot a converged eigenstate, normalize it to ∫u²dr = 1 by the
/// trapezoidal rule on the integration grid, fix the overall sign so u > 0
/// on its first antinode, and return every `stride`-th sample (the boundary
/// point is always included).
pub fn normalize_and_sample(
    state: &EigenState,
    spec: &PotentialSpec,
    params: &IntegrationParams,
    stride: usize,
) -> Result<Vec<(f64, f64)>> {
    if stride == 0 {
        return Err(Error::InvalidParams("stride must be at least 1".into()));
    }
    if spec.l != state.l {
        return Err(Error::StaleState(format!(
            "state has l = {}, potential has l = {}",
            state.l, spec.l
        )));
    }
    let params = params.with_box_size(state.box_size)?;
    let grid = ShootingGrid::build(spec, &params)?;
    let res = grid.shoot(state.energy, true)?;
    let mut samples = res.samples.expect("samples were requested");

    if state.energy < 0.0 {
        // Bound state: beyond the wavefunction peak the outward pass picks up
        // the exponentially growing admixture that even an eigenvalue
        // converged to f64 resolution cannot suppress. Rebuild the tail from
        // a stable inward integration, matched at the peak inside the
        // classically allowed region (the outward garbage lives beyond the
        // outer turning point and must not bias the peak search).
        let i_turn = grid.last_classical_node(state.energy).ok_or_else(|| {
            Error::StaleState("no classically allowed region at this energy".into())
        })?;
        let i_peak = samples[..=i_turn.min(samples.len() - 1)]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
            .map(|(i, _)| i)
            .unwrap();
        if i_peak + 1 < samples.len() {
            let tail = grid.integrate_inward(state.energy, i_peak);
            if tail[0] == 0.0 {
                return Err(Error::StaleState("inward tail vanished at the peak".into()));
            }
            let scale = samples[i_peak].1 / tail[0];
            // the two passes must agree just outside the peak, or the energy
            // is not an eigenvalue of this grid
            let mismatch =
                (samples[i_peak + 1].1 - scale * tail[1]).abs() / samples[i_peak].1.abs();
            if mismatch > 1e-4 {
                return Err(Error::StaleState(format!(
                    "outward/inward mismatch {mismatch:.3e} at the matching point"
                )));
            }
            for (s, &t) in samples[i_peak..].iter_mut().zip(&tail) {
                s.1 = scale * t;
            }
        }
        let nodes = count_interior_nodes(&samples);
        if nodes != state.n {
            return Err(Error::StaleState(format!(
                "expected {} nodes, re-shooting found {nodes}",
                state.n
            )));
        }
    } else {
        if res.node_count != state.n {
            return Err(Error::StaleState(format!(
                "expected {} nodes, re-shooting found {}",
                state.n, res.node_count
            )));
        }
        if res.psi_at_box.abs() > BOUNDARY_RATIO * res.max_abs_psi {
            return Err(Error::StaleState(format!(
                "boundary amplitude ratio {:.3e} exceeds {BOUNDARY_RATIO:.0e}",
                res.psi_at_box.abs() / res.max_abs_psi
            )));
        }
    }

    let h = grid.step();
    let mut norm: f64 = samples.iter().map(|&(_, u)| u * u).sum();
    norm -= 0.5 * (samples[0].1.powi(2) + samples[samples.len() - 1].1.powi(2));
    norm *= h;
    let mut scale = 1.0 / norm.sqrt();

    // first antinode: |u| grows from the origin, so the first downturn marks it
    for i in 1..samples.len() - 1 {
        if samples[i].1.abs() >= samples[i + 1].1.abs() {
            if samples[i].1 < 0.0 {
                scale = -scale;
            }
            break;
        }
    }
    for p in samples.iter_mut() {
        p.1 *= scale;
    }

    let last = samples.len() - 1;
    let mut out: Vec<(f64, f64)> = samples.iter().copied().step_by(stride).collect();
    if (last % stride) != 0 {
        out.push(samples[last]);
    }
    Ok(out)
}
