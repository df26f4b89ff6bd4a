//! 10/21-point Gauss-Kronrod panels and a global adaptive driver.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

pub(crate) const NODES_PER_PANEL: usize = 21;

/// Values the adaptive driver can integrate.
pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    const ZERO: Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn modulus(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Panel<T> {
    pub a: f64,
    pub b: f64,
    pub value: T,
    pub error: f64,
    pub resabs: f64,
}

impl<T> Panel<T> {
    fn at_roundoff_floor(&self) -> bool {
        self.error <= 50.0 * f64::EPSILON * self.resabs * (1.0 + 1e-9)
    }
}

pub(crate) fn gk21<T: Scalar>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> Panel<T> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();

    let mut fv1 = [T::ZERO; 10];
    let mut fv2 = [T::ZERO; 10];
    let fc = f(centr);
    let mut resg = T::ZERO;
    let mut resk = fc * WGK[10];
    let mut resabs = WGK[10] * fc.modulus();
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg = resg + (f1 + f2) * WG[j];
        resk = resk + (f1 + f2) * WGK[jtw];
        resabs += WGK[jtw] * (f1.modulus() + f2.modulus());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk = resk + (f1 + f2) * WGK[jtwm1];
        resabs += WGK[jtwm1] * (f1.modulus() + f2.modulus());
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).modulus();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).modulus() + (fv2[j] - reskh).modulus());
    }
    let value = resk * hlgth;
    let resabs = resabs * dhlgth;
    let resasc = resasc * dhlgth;
    let mut error = ((resk - resg) * hlgth).modulus();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel { a, b, value, error, resabs }
}

struct ByError<T>(Panel<T>);

impl<T> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error.total_cmp(&other.0.error) == Ordering::Equal
    }
}
impl<T> Eq for ByError<T> {}
impl<T> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

pub(crate) struct Adaptive<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Globally adaptive bisection over the panels given by `breaks`.
///
/// `basis` maps the running total to the magnitude the relative tolerance
/// refers to. Refinement stops once the largest remaining panel error sits at
/// its roundoff floor, since bisecting such a panel cannot reduce it.
pub(crate) fn adaptive<T: Scalar>(
    f: &impl Fn(f64) -> T,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
    basis: impl Fn(T) -> f64,
) -> Adaptive<T> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        heap.push(ByError(gk21(f, w[0], w[1])));
        evaluations += NODES_PER_PANEL;
    }
    let max_panels = max_subdivisions.max(breaks.len() - 1);
    let totals = |heap: &BinaryHeap<ByError<T>>| {
        heap.iter()
            .fold((T::ZERO, 0.0), |(v, e), p| (v + p.0.value, e + p.0.error))
    };
    let (mut value, mut error) = totals(&heap);
    let mut iterations = 0usize;
    loop {
        let tol = abs_tol.max(rel_tol * basis(value));
        if error <= tol {
            break;
        }
        if heap.len() >= max_panels {
            break;
        }
        let worst = match heap.peek() {
            Some(p) => p.0,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.at_roundoff_floor() || !(mid > worst.a && mid < worst.b) {
            break;
        }
        heap.pop();
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        evaluations += 2 * NODES_PER_PANEL;
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
        iterations += 1;
        if iterations % 64 == 0 {
            (value, error) = totals(&heap);
        }
    }
    let (value, error) = totals(&heap);
    let converged = error <= abs_tol.max(rel_tol * basis(value));
    Adaptive { value, error, evaluations, converged }
}
