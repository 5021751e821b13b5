//! Adaptive quadrature engine: vector-valued integrands, registered
//! breakpoints, semi-infinite decay transforms, and a polar in-plane-momentum
//! rule (fixed-order angular x adaptive radial) with half-plane restrictions.
//!
//! All routines are deterministic: panel selection, subdivision and summation
//! orders are fixed functions of the inputs, so repeated runs produce
//! bit-identical results.
//!
//! The 1D kernel is a 15-point Kronrod rule with the embedded 7-point Gauss
//! rule for error estimation, bisecting the panel whose error is worst
//! relative to its component tolerance. Integrands return `[f64; N]`; all
//! components share nodes and each carries its own error estimate.

/// Square-root of machine epsilon times 50, the classic roundoff guard.
const EPMACH_50: f64 = 50.0 * f64::EPSILON;

/// Truncation point for decay-transformed semi-infinite domains, in units of
/// the decay length: exp(-60) ~ 8.8e-27, far below every tolerance in use
/// (the in-plane momentum integrals need the cutoff weight below 1e-18).
pub const DECAY_UMAX: f64 = 60.0;

// 15-point Kronrod abscissae on [-1, 1] (positive half; symmetric) and
// weights, with the embedded 7-point Gauss weights. QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone)]
pub struct QuadConfig {
    /// Per-component relative tolerance on the accumulated integral.
    pub rel_tol: f64,
    /// Components with |value| below `abs_floor * max_j |value_j|` are exempt
    /// from the relative criterion; the floor also caps their error demand.
    pub abs_floor: f64,
    /// Maximum number of panels before giving up (result flagged).
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-6,
            abs_floor: 1e-13,
            max_panels: 4000,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadConfig {
            rel_tol,
            ..Default::default()
        }
    }
}

/// Integration domain for the 1D engine.
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    /// Plain finite interval [a, b].
    Finite { a: f64, b: f64 },
    /// [start, infinity) for integrands decaying like exp(-(x-start)/scale);
    /// substituted as x = start + scale*u and truncated at u = DECAY_UMAX.
    SemiInfiniteDecay { start: f64, decay_scale: f64 },
}

/// Outcome of an adaptive integration; `value` is always usable, `converged`
/// says whether every component met its tolerance within the panel budget.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub err: [f64; N],
    pub n_evals: usize,
    pub n_panels: usize,
    pub converged: bool,
}

impl<const N: usize> QuadResult<N> {
    /// Worst error relative to the magnitude of its own component (or to the
    /// largest component when the component is tiny).
    pub fn worst_rel_err(&self) -> f64 {
        let vmax = self.value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if vmax == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..N {
            let scale = self.value[i].abs().max(vmax * 1e-13);
            worst = worst.max(self.err[i] / scale);
        }
        worst
    }
}

#[derive(Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    err: [f64; N],
}

/// One 15-point Kronrod evaluation of `f` over [a, b].
fn gk15<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> Panel<N> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv = [[0.0f64; N]; 15]; // nodes ordered: pairs (c-hx, c+hx), centre last
    let mut idx = 0;
    for j in 0..7 {
        fv[idx] = f(centre - half * XGK[j]);
        fv[idx + 1] = f(centre + half * XGK[j]);
        idx += 2;
    }
    fv[14] = f(centre);

    let mut resk = [0.0f64; N];
    let mut resg = [0.0f64; N];
    let mut resabs = [0.0f64; N];
    for j in 0..7 {
        for n in 0..N {
            let s = fv[2 * j][n] + fv[2 * j + 1][n];
            resk[n] += WGK[j] * s;
            resabs[n] += WGK[j] * (fv[2 * j][n].abs() + fv[2 * j + 1][n].abs());
        }
        // odd-indexed Kronrod abscissae are the embedded Gauss points
        if j % 2 == 1 {
            let g = (j - 1) / 2;
            for n in 0..N {
                resg[n] += WG[g] * (fv[2 * j][n] + fv[2 * j + 1][n]);
            }
        }
    }
    for n in 0..N {
        resk[n] += WGK[7] * fv[14][n];
        resabs[n] += WGK[7] * fv[14][n].abs();
        resg[n] += WG[3] * fv[14][n];
    }

    let mut value = [0.0f64; N];
    let mut err = [0.0f64; N];
    for n in 0..N {
        let reskh = resk[n] * 0.5;
        let mut resasc = WGK[7] * (fv[14][n] - reskh).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((fv[2 * j][n] - reskh).abs() + (fv[2 * j + 1][n] - reskh).abs());
        }
        resasc *= half.abs();
        let rabs = resabs[n] * half.abs();
        let mut e = ((resk[n] - resg[n]) * half).abs();
        if resasc != 0.0 && e != 0.0 {
            e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
        }
        // keep the estimate above the roundoff floor of the panel sum
        if rabs > f64::MIN_POSITIVE / EPMACH_50 {
            e = e.max(EPMACH_50 * rabs);
        }
        value[n] = resk[n] * half;
        err[n] = e;
    }
    Panel {
        a,
        b,
        value,
        err,
    }
}

fn totals<const N: usize>(panels: &[Panel<N>]) -> ([f64; N], [f64; N]) {
    let mut value = [0.0f64; N];
    let mut err = [0.0f64; N];
    for p in panels {
        for n in 0..N {
            value[n] += p.value[n];
            err[n] += p.err[n];
        }
    }
    (value, err)
}

/// Per-component error thresholds for the current totals.
fn thresholds<const N: usize>(value: &[f64; N], cfg: &QuadConfig) -> [f64; N] {
    let vmax = value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut t = [0.0f64; N];
    for n in 0..N {
        t[n] = (cfg.rel_tol * value[n].abs()).max(cfg.abs_floor * vmax);
        if t[n] == 0.0 {
            // all-zero integrand so far: accept anything at denormal scale
            t[n] = f64::MIN_POSITIVE;
        }
    }
    t
}

/// Adaptive integration of a vector integrand over `domain`.
///
/// `breakpoints` (given in the coordinates of `domain`, i.e. x-space) become
/// initial panel boundaries, so jumps or kinks registered there never sit in
/// a panel interior. Points outside the domain are ignored.
pub fn integrate_1d<const N: usize, F: FnMut(f64) -> [f64; N]>(
    mut f: F,
    domain: Domain,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> QuadResult<N> {
    // map to a finite interval, with a change of variables when semi-infinite
    let (a, b, scale, offset): (f64, f64, f64, f64) = match domain {
        Domain::Finite { a, b } => (a, b, 1.0, 0.0),
        Domain::SemiInfiniteDecay { start, decay_scale } => {
            (0.0, DECAY_UMAX, decay_scale, start)
        }
    };
    let to_u = |x: f64| match domain {
        Domain::Finite { .. } => x,
        Domain::SemiInfiniteDecay { start, decay_scale } => (x - start) / decay_scale,
    };
    let mut g = |u: f64| -> [f64; N] {
        let mut v = f(offset + scale * u);
        if scale != 1.0 {
            for x in v.iter_mut() {
                *x *= scale;
            }
        }
        v
    };

    let mut edges: Vec<f64> = vec![a, b];
    for &bp in breakpoints {
        let u = to_u(bp);
        if u > a && u < b {
            edges.push(u);
        }
    }
    // seed a graded initial mesh on decay-transformed domains so the first
    // pass already resolves the exponential envelope
    if matches!(domain, Domain::SemiInfiniteDecay { .. }) {
        for s in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
            edges.push(s);
        }
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup_by(|x, y| (*x - *y).abs() <= f64::EPSILON * (x.abs() + y.abs()));

    let mut n_evals = 0usize;
    let mut panels: Vec<Panel<N>> = Vec::with_capacity(64);
    for w in edges.windows(2) {
        if w[1] > w[0] {
            panels.push(gk15(&mut g, w[0], w[1]));
            n_evals += 15;
        }
    }
    if panels.is_empty() {
        return QuadResult {
            value: [0.0; N],
            err: [0.0; N],
            n_evals: 0,
            n_panels: 0,
            converged: true,
        };
    }

    loop {
        let (value, err) = totals(&panels);
        let thr = thresholds(&value, cfg);
        let ok = (0..N).all(|n| err[n] <= thr[n]);
        if ok {
            return QuadResult {
                value,
                err,
                n_evals,
                n_panels: panels.len(),
                converged: true,
            };
        }
        if panels.len() >= cfg.max_panels {
            return QuadResult {
                value,
                err,
                n_evals,
                n_panels: panels.len(),
                converged: false,
            };
        }
        // split the panel with the worst error relative to its component need
        let mut worst_idx = 0usize;
        let mut worst_score = -1.0f64;
        for (i, p) in panels.iter().enumerate() {
            let mut score = 0.0f64;
            for n in 0..N {
                score = score.max(p.err[n] / thr[n]);
            }
            if score > worst_score {
                worst_score = score;
                worst_idx = i;
            }
        }
        let p = panels[worst_idx];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // interval exhausted at machine precision; accept as converged
            let (value, err) = totals(&panels);
            return QuadResult {
                value,
                err,
                n_evals,
                n_panels: panels.len(),
                converged: true,
            };
        }
        panels[worst_idx] = gk15(&mut g, p.a, mid);
        panels.push(gk15(&mut g, mid, p.b));
        n_evals += 30;
    }
}

/// Scalar convenience wrapper around [`integrate_1d`].
pub fn integrate_1d_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    domain: Domain,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> QuadResult<1> {
    integrate_1d(move |x| [f(x)], domain, breakpoints, cfg)
}

// ---------------------------------------------------------------------------
// polar in-plane momentum integrals
// ---------------------------------------------------------------------------

/// Restriction of the in-plane momentum integral to a half-plane in kx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KxRegion {
    /// The whole k-plane.
    Full,
    /// kx > c.
    Above(f64),
    /// kx < c.
    Below(f64),
}

/// Configuration for [`integrate_k_plane`].
#[derive(Debug, Clone)]
pub struct KPlaneConfig {
    /// Gauss-Legendre nodes per angular sub-panel (sub-panels split at
    /// multiples of pi/2, where half-plane boundaries turn tangent).
    pub angular_order: usize,
    /// Tolerances for each radial line integral.
    pub radial: QuadConfig,
    /// kx values where the integrand has kinks or jumps; converted to
    /// theta-dependent radial breakpoints k = kx / cos(theta) on each ray.
    pub kx_breaklines: Vec<f64>,
}

impl Default for KPlaneConfig {
    fn default() -> Self {
        KPlaneConfig {
            angular_order: 16,
            radial: QuadConfig {
                rel_tol: 1e-8,
                abs_floor: 1e-13,
                max_panels: 800,
            },
            kx_breaklines: Vec::new(),
        }
    }
}

/// Per-ray radial domain after clipping to a kx half-plane.
fn ray_domain(region: KxRegion, cos_t: f64) -> Option<(f64, Option<f64>)> {
    const TINY: f64 = 1e-300;
    match region {
        KxRegion::Full => Some((0.0, None)),
        KxRegion::Above(c) => {
            if cos_t > TINY {
                if c <= 0.0 {
                    Some((0.0, None))
                } else {
                    Some((c / cos_t, None))
                }
            } else if cos_t < -TINY {
                if c < 0.0 {
                    Some((0.0, Some(c / cos_t)))
                } else {
                    None
                }
            } else if c < 0.0 {
                Some((0.0, None))
            } else {
                None
            }
        }
        KxRegion::Below(c) => {
            if cos_t > TINY {
                if c > 0.0 {
                    Some((0.0, Some(c / cos_t)))
                } else {
                    None
                }
            } else if cos_t < -TINY {
                if c > 0.0 {
                    Some((0.0, None))
                } else {
                    Some((c / cos_t, None))
                }
            } else if c > 0.0 {
                Some((0.0, None))
            } else {
                None
            }
        }
    }
}

/// Integrate `f(k, theta)` with measure d^2k/(2 pi)^2 over a (possibly
/// kx-restricted) region of the in-plane momentum plane.
///
/// Polar product rule: fixed-order Gauss-Legendre nodes in theta over
/// `[theta_start, theta_end]` (split at multiples of pi/2), adaptive radial
/// integration along each ray assuming an exp(-k / decay_k) envelope, where
/// `decay_k` is the radial decay length in k (it only grades the initial
/// node placement; the adaptive pass does the rest). Entries of
/// `kx_breaklines` map to radial breakpoints `kx/cos(theta)` per ray, so
/// angular nodes never integrate across a kx-threshold jump.
pub fn integrate_k_plane<const N: usize, F: FnMut(f64, f64) -> [f64; N]>(
    mut f: F,
    theta_start: f64,
    theta_end: f64,
    decay_k: f64,
    region: KxRegion,
    cfg: &KPlaneConfig,
) -> QuadResult<N> {
    assert!(theta_end > theta_start);
    assert!(decay_k > 0.0);
    let norm = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);

    // split the angular range at multiples of pi/2
    let mut edges = vec![theta_start, theta_end];
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut m = (theta_start / half_pi).ceil();
    while m * half_pi < theta_end {
        if m * half_pi > theta_start {
            edges.push(m * half_pi);
        }
        m += 1.0;
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();

    let (nodes, weights) = gauss_legendre(cfg.angular_order);

    let mut value = [0.0f64; N];
    let mut err = [0.0f64; N];
    let mut n_evals = 0usize;
    let mut n_panels = 0usize;
    let mut converged = true;

    let mut radial_breaks: Vec<f64> = Vec::with_capacity(cfg.kx_breaklines.len());
    for w in edges.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let centre = 0.5 * (t0 + t1);
        let half = 0.5 * (t1 - t0);
        for (i, &xi) in nodes.iter().enumerate() {
            let theta = centre + half * xi;
            let w_t = weights[i] * half;
            let cos_t = theta.cos();
            let Some((k_lo, k_hi)) = ray_domain(region, cos_t) else {
                continue;
            };
            radial_breaks.clear();
            for &line in &cfg.kx_breaklines {
                if cos_t.abs() > 1e-300 {
                    let kb = line / cos_t;
                    if kb > k_lo {
                        radial_breaks.push(kb);
                    }
                }
            }
            // radial integrand carries the polar measure factor k
            let mut radial = |k: f64| -> [f64; N] {
                let mut v = f(k, theta);
                for x in v.iter_mut() {
                    *x *= k;
                }
                v
            };
            let res = match k_hi {
                None => integrate_1d(
                    &mut radial,
                    Domain::SemiInfiniteDecay {
                        start: k_lo,
                        decay_scale: decay_k,
                    },
                    &radial_breaks,
                    &cfg.radial,
                ),
                Some(hi) => integrate_1d(
                    &mut radial,
                    Domain::Finite { a: k_lo, b: hi },
                    &radial_breaks,
                    &cfg.radial,
                ),
            };
            n_evals += res.n_evals;
            n_panels += res.n_panels;
            converged &= res.converged;
            for n in 0..N {
                value[n] += w_t * res.value[n];
                err[n] += w_t.abs() * res.err[n];
            }
        }
    }
    for n in 0..N {
        value[n] *= norm;
        err[n] *= norm;
    }
    QuadResult {
        value,
        err,
        n_evals,
        n_panels,
        converged,
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence. Deterministic and accurate to ~1e-15.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "angular order must be at least 2");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(rel: f64) -> QuadConfig {
        QuadConfig {
            rel_tol: rel,
            abs_floor: 1e-13,
            max_panels: 4000,
        }
    }

    /// One analytic case for the honesty battery.
    struct Case {
        name: &'static str,
        exact: f64,
        result: QuadResult<1>,
    }

    fn battery() -> Vec<Case> {
        let mut cases = Vec::new();
        let c = cfg(1e-10);

        // plain exponential moments on the decay transform
        for (p, exact) in [(0usize, 1.0f64), (3, 6.0), (9, 362_880.0)] {
            let res = integrate_1d_scalar(
                |u| u.powi(p as i32) * (-u).exp(),
                Domain::SemiInfiniteDecay {
                    start: 0.0,
                    decay_scale: 1.0,
                },
                &[],
                &c,
            );
            cases.push(Case {
                name: match p {
                    0 => "int u^0 exp(-u)",
                    3 => "int u^3 exp(-u)",
                    _ => "int u^9 exp(-u)",
                },
                exact,
                result: res,
            });
        }

        // scaled decay: int_0^inf (u^3 - 2u) e^{-u/2} du = 96 - 8 = 88
        cases.push(Case {
            name: "poly x exp(-u/2)",
            exact: 88.0,
            result: integrate_1d_scalar(
                |u| (u.powi(3) - 2.0 * u) * (-0.5 * u).exp(),
                Domain::SemiInfiniteDecay {
                    start: 0.0,
                    decay_scale: 2.0,
                },
                &[],
                &c,
            ),
        });

        // sign jump at a registered breakpoint
        cases.push(Case {
            name: "sign(u - 1/3) on [0,1]",
            exact: 1.0 / 3.0,
            result: integrate_1d_scalar(
                |u| if u > 1.0 / 3.0 { 1.0 } else { -1.0 },
                Domain::Finite { a: 0.0, b: 1.0 },
                &[1.0 / 3.0],
                &c,
            ),
        });

        // narrow Lorentzian with the peak registered as a breakpoint:
        // int_{-1}^{1} (g/pi)/(x^2+g^2) dx = (2/pi) atan(1/g)
        for g in [1e-2f64, 1e-4, 1e-6] {
            cases.push(Case {
                name: "lorentzian",
                exact: 2.0 / std::f64::consts::PI * (1.0 / g).atan(),
                result: integrate_1d_scalar(
                    |x| (g / std::f64::consts::PI) / (x * x + g * g),
                    Domain::Finite { a: -1.0, b: 1.0 },
                    &[0.0],
                    &c,
                ),
            });
        }

        // oscillatory: int_0^{2pi} cos^2 = pi
        cases.push(Case {
            name: "cos^2 over a period",
            exact: std::f64::consts::PI,
            result: integrate_1d_scalar(
                |x| x.cos().powi(2),
                Domain::Finite {
                    a: 0.0,
                    b: 2.0 * std::f64::consts::PI,
                },
                &[],
                &c,
            ),
        });

        // shifted decay start: int_2^inf e^{-(x-2)} x dx = 3
        cases.push(Case {
            name: "shifted decay",
            exact: 3.0,
            result: integrate_1d_scalar(
                |x| (-(x - 2.0)).exp() * x,
                Domain::SemiInfiniteDecay {
                    start: 2.0,
                    decay_scale: 1.0,
                },
                &[],
                &c,
            ),
        });

        cases
    }

    #[test]
    fn analytic_battery_converges() {
        for case in battery() {
            assert!(case.result.converged, "{} did not converge", case.name);
            assert_relative_eq!(
                case.result.value[0],
                case.exact,
                max_relative = 1e-9,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn error_estimates_are_honest() {
        // true error must not exceed 3x the reported estimate (with an
        // epsilon-scale floor for exactly-integrated cases)
        for case in battery() {
            let true_err = (case.result.value[0] - case.exact).abs();
            let reported = case.result.err[0].max(16.0 * f64::EPSILON * case.exact.abs());
            assert!(
                true_err <= 3.0 * reported,
                "{}: true err {:.3e} vs reported {:.3e}",
                case.name,
                true_err,
                reported
            );
        }
    }

    #[test]
    fn vector_components_share_nodes_but_not_tolerances() {
        // one smooth and one tiny component; the tiny one is exempt via the
        // floor yet still accumulates a sensible value
        let res = integrate_1d(
            |u: f64| [(-u).exp(), 1e-20 * (-u).exp()],
            Domain::SemiInfiniteDecay {
                start: 0.0,
                decay_scale: 1.0,
            },
            &[],
            &cfg(1e-10),
        );
        assert!(res.converged);
        assert_relative_eq!(res.value[0], 1.0, max_relative = 1e-10);
        assert_relative_eq!(res.value[1], 1e-20, max_relative = 1e-8);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        // degree-30 monomial is within the 16-point rule's exactness range
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(30)).sum();
        assert_relative_eq!(s, 2.0 / 31.0, max_relative = 1e-12);
        let total: f64 = w.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn k_plane_gaussian_full_plane() {
        // int d^2k/(2pi)^2 exp(-k^2) = (1/(4 pi^2)) * pi = 1/(4 pi)
        let res = integrate_k_plane(
            |k: f64, _t: f64| [(-k * k).exp()],
            0.0,
            2.0 * std::f64::consts::PI,
            1.0,
            KxRegion::Full,
            &KPlaneConfig::default(),
        );
        assert!(res.converged);
        assert_relative_eq!(
            res.value[0],
            1.0 / (4.0 * std::f64::consts::PI),
            max_relative = 1e-8
        );
    }

    #[test]
    fn k_plane_gaussian_half_plane_matches_erfc() {
        // int_{kx > c} d^2k/(2pi)^2 exp(-k^2) = erfc(c) / (8 pi); c = 0.7
        // erfc(0.7) = 0.32219880616258153
        let exact = 0.322_198_806_162_581_53 / (8.0 * std::f64::consts::PI);
        let res = integrate_k_plane(
            |k: f64, _t: f64| [(-k * k).exp()],
            -std::f64::consts::PI,
            std::f64::consts::PI,
            1.0,
            KxRegion::Above(0.7),
            &KPlaneConfig {
                angular_order: 48,
                ..Default::default()
            },
        );
        assert!(res.converged);
        assert_relative_eq!(res.value[0], exact, max_relative = 1e-7);
        let true_err = (res.value[0] - exact).abs();
        assert!(true_err <= 3.0 * res.err[0].max(1e-14 * exact));
    }

    #[test]
    fn k_plane_halfplane_below_mirrors_above() {
        let above = integrate_k_plane(
            |k: f64, _t: f64| [(-k * k).exp()],
            -std::f64::consts::PI,
            std::f64::consts::PI,
            1.0,
            KxRegion::Above(0.3),
            &KPlaneConfig::default(),
        );
        let below = integrate_k_plane(
            |k: f64, _t: f64| [(-k * k).exp()],
            -std::f64::consts::PI,
            std::f64::consts::PI,
            1.0,
            KxRegion::Below(-0.3),
            &KPlaneConfig::default(),
        );
        assert_relative_eq!(above.value[0], below.value[0], max_relative = 1e-8);
    }

    #[test]
    fn k_plane_odd_integrand_vanishes() {
        // kx * exp(-k) integrates to zero over the full plane
        let res = integrate_k_plane(
            |k: f64, t: f64| [k * t.cos() * (-k).exp()],
            -std::f64::consts::PI,
            std::f64::consts::PI,
            1.0,
            KxRegion::Full,
            &KPlaneConfig::default(),
        );
        // scale of the non-cancelling |kx| integral: ~ Gamma(3)/(4pi^2) * 2
        assert!(res.value[0].abs() < 1e-12);
    }

    #[test]
    fn k_plane_exponential_with_breakline() {
        // int_{kx > 1} d^2k/(2pi)^2 e^{-k}: reference via a 1D theta integral
        // of the per-ray closed form (1 + k0) e^{-k0}, k0 = 1/cos(theta).
        let res = integrate_k_plane(
            |k: f64, _t: f64| [(-k).exp()],
            -std::f64::consts::PI,
            std::f64::consts::PI,
            1.0,
            KxRegion::Above(1.0),
            &KPlaneConfig {
                angular_order: 48,
                kx_breaklines: vec![1.0],
                ..Default::default()
            },
        );
        let reference = integrate_1d_scalar(
            |t: f64| {
                let k0 = 1.0 / t.cos();
                (1.0 + k0) * (-k0).exp()
            },
            Domain::Finite {
                a: -std::f64::consts::FRAC_PI_2 + 1e-9,
                b: std::f64::consts::FRAC_PI_2 - 1e-9,
            },
            &[],
            &cfg(1e-12),
        );
        let exact = reference.value[0] / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        assert_relative_eq!(res.value[0], exact, max_relative = 1e-7);
    }

    #[test]
    fn budget_exhaustion_is_flagged_not_hidden() {
        let tight = QuadConfig {
            rel_tol: 1e-14,
            abs_floor: 1e-16,
            max_panels: 4,
        };
        let res = integrate_1d_scalar(
            |x| (30.0 * x).sin().abs(),
            Domain::Finite { a: 0.0, b: 10.0 },
            &[],
            &tight,
        );
        assert!(!res.converged);
        assert!(res.value[0].is_finite());
    }
}
