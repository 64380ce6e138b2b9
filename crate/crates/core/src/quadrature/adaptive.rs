//! Globally adaptive Gauss–Kronrod (10/21) integration.
//!
//! Panels are kept in a max-heap keyed on their error estimate and the worst one is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol * |I|)`. Callers
//! that know where the integrand is singular pass those points as breakpoints;
//! [`integrate_unit`] builds the dyadic partition used for every `u ∈ (0, 1)`
//! integral in the crate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_292_270_210,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions<S> {
    pub abs_tol: S,
    pub rel_tol: S,
    /// Maximum number of live panels before giving up.
    pub max_panels: usize,
}

impl<S: Scalar> AdaptiveOptions<S> {
    pub fn absolute(tol: S) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: S::zero(),
            max_panels: 4000,
        }
    }

    pub fn relative(tol: S) -> Self {
        Self {
            abs_tol: S::min_positive_value(),
            rel_tol: tol,
            max_panels: 4000,
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    fn target(&self, value: S) -> S {
        self.abs_tol.fmax(self.rel_tol * value.abs())
    }
}

impl<S: Scalar> Default for AdaptiveOptions<S> {
    fn default() -> Self {
        Self::absolute(S::of(1e-10))
    }
}

/// Value of an adaptive integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<S> {
    pub value: S,
    pub error: S,
    pub panels: usize,
    pub evaluations: usize,
}

struct Panel<S> {
    a: S,
    b: S,
    value: S,
    error: S,
}

impl<S: Scalar> PartialEq for Panel<S> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<S: Scalar> Eq for Panel<S> {}

impl<S: Scalar> PartialOrd for Panel<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Panel<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// One Gauss–Kronrod 21 evaluation on `[a, b]`, with the QUADPACK error heuristic.
pub fn gauss_kronrod21<S: Scalar, F: FnMut(S) -> S>(f: &mut F, a: S, b: S) -> (S, S) {
    let half = S::of(0.5) * (b - a);
    let centre = S::of(0.5) * (a + b);
    let fc = f(centre);
    let mut resk = fc * S::of(WGK[10]);
    let mut resg = S::zero();
    let mut resabs = resk.abs();
    let mut fv1 = [S::zero(); 10];
    let mut fv2 = [S::zero(); 10];
    for j in 0..10 {
        let dx = half * S::of(XGK[j]);
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = S::of(WGK[j]);
        resk += w * (f1 + f2);
        resabs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += S::of(WG[j / 2]) * (f1 + f2);
        }
    }
    let reskh = resk * S::of(0.5);
    let mut resasc = S::of(WGK[10]) * (fc - reskh).abs();
    for j in 0..10 {
        resasc += S::of(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != S::zero() && err != S::zero() {
        let scale = (S::of(200.0) * err / resasc).powf(S::of(1.5));
        err = resasc * if scale < S::one() { scale } else { S::one() };
    }
    let floor = S::of(50.0) * S::epsilon() * resabs;
    if resabs > S::min_positive_value() / (S::of(50.0) * S::epsilon()) && floor > err {
        err = floor;
    }
    if !value.is_finite() {
        err = S::infinity();
    }
    (value, err)
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// `breakpoints` must be strictly increasing and contain at least two points.
pub fn integrate<S: Scalar, F: FnMut(S) -> S>(
    mut f: F,
    breakpoints: &[S],
    opts: &AdaptiveOptions<S>,
) -> Result<Integral<S>> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidArgument(
            "adaptive integration needs at least two breakpoints".into(),
        ));
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(
            "breakpoints must be strictly increasing".into(),
        ));
    }
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    let mut settled: Vec<Panel<S>> = Vec::new();
    let mut evaluations = 0usize;
    for w in breakpoints.windows(2) {
        let (value, error) = gauss_kronrod21(&mut f, w[0], w[1]);
        evaluations += 21;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    loop {
        let (value, error) = totals(&heap, &settled);
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                panels: heap.len() + settled.len(),
                error: f64::INFINITY,
                requested: opts.target(S::zero()).as_f64(),
            });
        }
        let target = opts.target(value);
        if error <= target || heap.is_empty() {
            return Ok(Integral {
                value,
                error,
                panels: heap.len() + settled.len(),
                evaluations,
            });
        }
        if heap.len() + settled.len() >= opts.max_panels {
            return Err(Error::NonConvergence {
                panels: heap.len() + settled.len(),
                error: error.as_f64(),
                requested: target.as_f64(),
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = S::of(0.5) * (worst.a + worst.b);
        // Panels at the resolution limit cannot be split further.
        if !(worst.a < mid && mid < worst.b)
            || (worst.b - worst.a) <= S::of(64.0) * S::epsilon() * worst.a.abs().fmax(worst.b.abs())
        {
            settled.push(worst);
            continue;
        }
        let (v1, e1) = gauss_kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = gauss_kronrod21(&mut f, mid, worst.b);
        evaluations += 42;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
}

fn totals<S: Scalar>(heap: &BinaryHeap<Panel<S>>, settled: &[Panel<S>]) -> (S, S) {
    heap.iter()
        .chain(settled.iter())
        .fold((S::zero(), S::zero()), |(v, e), p| (v + p.value, e + p.error))
}

/// Default dyadic depth for [`integrate_unit`].
pub const UNIT_DEPTH: usize = 24;

/// Integrates `f(u, v)` over `u ∈ (0, 1)` where `v = 1 - u`.
///
/// Both endpoints may carry integrable singularities. The interval is split at
/// `1/2` and each half is integrated in its own small variable (`u` near 0, `v`
/// near 1) on panels that halve toward the endpoint, `depth` levels deep; both
/// `u` and `v` are therefore handed to `f` without cancellation.
pub fn integrate_unit<S: Scalar, F: FnMut(S, S) -> S>(
    mut f: F,
    depth: usize,
    opts: &AdaptiveOptions<S>,
) -> Result<Integral<S>> {
    let depth = depth.max(1);
    // Parameter z ∈ [-1/2, 1/2]: z > 0 means u = z, z < 0 means v = -z.
    let mut bp = Vec::with_capacity(2 * depth + 1);
    for k in 1..=depth {
        bp.push(-S::of(0.5f64.powi(k as i32)));
    }
    bp.push(S::zero());
    for k in (1..=depth).rev() {
        bp.push(S::of(0.5f64.powi(k as i32)));
    }
    integrate(
        |z: S| {
            if z > S::zero() {
                f(z, S::one() - z)
            } else {
                let v = -z;
                f(S::one() - v, v)
            }
        },
        &bp,
        opts,
    )
}

/// Integrates `f` over `[a, b]` with no interior breakpoints.
pub fn integrate_interval<S: Scalar, F: FnMut(S) -> S>(
    f: F,
    a: S,
    b: S,
    opts: &AdaptiveOptions<S>,
) -> Result<Integral<S>> {
    integrate(f, &[a, b], opts)
}
