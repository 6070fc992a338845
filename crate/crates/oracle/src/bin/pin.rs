//! Prints the reference values that the zetalab test suites freeze as
//! expected constants. Run with `--release`; takes a few minutes.
//!
//! Usage: pin [filter-substring]

use num_complex::Complex64;
use std::time::Instant;
use zetalab_oracle as oracle;

const EULER_C: f64 = 0.577_215_664_901_532_9;
const TWO_PI: f64 = std::f64::consts::TAU;

fn j_hat(t: f64) -> f64 {
    t * (t / TWO_PI).ln() - t
}

/// Upper endpoint of one reverse-iteration step in closed-form mode:
/// solves j_hat(u) - j_hat(t) = (1 - c) t.
fn ladder_step_asymptotic(t: f64) -> f64 {
    let target = (1.0 - EULER_C) * t;
    oracle::bisect_monotone(|u| j_hat(u) - j_hat(t) - target, t, 2.0 * t, 1e-10 * t)
}

/// One integral-mode step: solves int_t^u Z^2 = (1 - c) t against the oracle
/// quadrature.
fn ladder_step_integral(t: f64, step: f64) -> f64 {
    let target = (1.0 - EULER_C) * t;
    let guess = ladder_step_asymptotic(t);
    let lo = t + 0.5 * (guess - t);
    let hi = t + 2.0 * (guess - t);
    oracle::bisect_monotone(
        |u| oracle::integrate(|x| oracle::z_fn(x).powi(2), t, u, step) - target,
        lo,
        hi,
        1e-9 * t,
    )
}

fn ln_gamma_real(x: f64) -> f64 {
    oracle::ln_gamma_complex(Complex64::new(x, 0.0)).re
}

/// Sum of d(n) over integers in (a, b], by trial division.
fn divisor_sum(a: f64, b: f64) -> u64 {
    let lo = a.floor() as u64 + 1;
    let hi = b.floor() as u64;
    let mut total = 0u64;
    for n in lo..=hi {
        let mut d = 0u64;
        let mut k = 1u64;
        while k * k <= n {
            if n % k == 0 {
                d += if k * k == n { 1 } else { 2 };
            }
            k += 1;
        }
        total += d;
    }
    total
}

/// Gram points in (lo, hi]: solutions of theta(t) = nu * pi.
fn gram_points(lo: f64, hi: f64) -> Vec<(i64, f64)> {
    let nu_lo = (oracle::theta(lo) / std::f64::consts::PI).floor() as i64 + 1;
    let nu_hi = (oracle::theta(hi) / std::f64::consts::PI).floor() as i64;
    let mut out = Vec::new();
    let mut left = lo;
    for nu in nu_lo..=nu_hi {
        let target = nu as f64 * std::f64::consts::PI;
        let mut right = left + 0.1;
        while oracle::theta(right) < target {
            right += 0.5;
        }
        let g = oracle::bisect_monotone(|t| oracle::theta(t) - target, left, right, 1e-11);
        out.push((nu, g));
        left = g;
    }
    out
}

struct S1Oracle {
    zeros: Vec<f64>,
    prefix: Vec<f64>,
    theta_int: Vec<f64>, // integral of theta over [0, k] at integer checkpoints
}

impl S1Oracle {
    fn build(t_max: f64) -> Self {
        let zeros = oracle::find_zeros(4.0, t_max + 1.0);
        let mut prefix = vec![0.0];
        for z in &zeros {
            prefix.push(prefix.last().unwrap() + z);
        }
        let n = t_max.ceil() as usize + 2;
        let mut theta_int = vec![0.0];
        for k in 0..n {
            let inc = oracle::integrate(oracle::theta, k as f64, k as f64 + 1.0, 0.25);
            theta_int.push(theta_int.last().unwrap() + inc);
        }
        S1Oracle { zeros, prefix, theta_int }
    }

    fn theta_antiderivative(&self, t: f64) -> f64 {
        let k = t.floor() as usize;
        self.theta_int[k] + oracle::integrate(oracle::theta, k as f64, t, 0.25)
    }

    /// S1(t) = int_0^t S(u) du with S = N(u) - 1 - theta(u)/pi.
    fn s1(&self, t: f64) -> f64 {
        let k = self.zeros.partition_point(|z| *z <= t);
        let n_part = k as f64 * t - self.prefix[k] - t;
        n_part - self.theta_antiderivative(t) / std::f64::consts::PI
    }

    fn s(&self, t: f64) -> f64 {
        let k = self.zeros.partition_point(|z| *z <= t);
        k as f64 - 1.0 - oracle::theta(t) / std::f64::consts::PI
    }
}

fn main() {
    let filter = std::env::args().nth(1).unwrap_or_default();
    let run = |name: &str| filter.is_empty() || name.contains(&filter);
    let t0 = Instant::now();
    let emit = |name: &str, value: f64| {
        println!("{name} = {value:.17e}");
    };

    if run("zeta_half") {
        emit("zeta_half", oracle::zeta_em(0.5, 0.0, 2.0).re);
    }
    if run("theta_at") {
        emit("theta_at_first_zero", oracle::theta(14.134_725_141_734_693));
        emit("theta_at_14", oracle::theta(14.0));
        let g0 = oracle::bisect_monotone(oracle::theta, 17.0, 19.0, 1e-12);
        emit("gram_point_0", g0);
    }
    if run("zeros") {
        let zeros = oracle::find_zeros(4.0, 105.0);
        for (i, z) in zeros.iter().enumerate().take(30) {
            emit(&format!("zero_{:02}", i + 1), *z);
        }
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("j1000") {
        let j = oracle::integrate(|t| oracle::z_fn_boosted(t, 1.5).powi(2), 0.0, 1000.0, 0.08);
        emit("j_1000", j);
        let main_term = j_hat(1000.0);
        emit("j_1000_main_term", main_term);
        emit("j_1000_rel_dev", (j - main_term).abs() / j);
    }
    if run("i4_1000") {
        let v = oracle::integrate(|t| oracle::z_fn_boosted(t, 1.5).powi(4), 0.0, 1000.0, 0.08);
        emit("fourth_moment_1000", v);
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("s1_at_50") {
        let s1o = S1Oracle::build(60.0);
        // fine-grid trapezoid on S between consecutive zeros, as a cross-check
        // of the closed-form path
        let mut knots: Vec<f64> = vec![0.0];
        knots.extend(s1o.zeros.iter().copied().filter(|z| *z < 50.0));
        knots.push(50.0);
        let mut total = 0.0;
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let n = ((b - a) / 1e-4).ceil() as usize;
            let h = (b - a) / n as f64;
            let mut acc = 0.5 * (s1o.s(a + 1e-12) + s1o.s(b - 1e-12));
            for i in 1..n {
                acc += s1o.s(a + i as f64 * h);
            }
            total += acc * h;
        }
        emit("s1_at_50_trapezoid", total);
        emit("s1_at_50_closed_form", s1o.s1(50.0));
    }
    if run("ladder_asym") {
        emit("ladder_t1_of_1000_asym", ladder_step_asymptotic(1000.0));
        emit("ladder_t1_of_10000_asym", ladder_step_asymptotic(10000.0));
    }
    if run("ladder_integral_1000") {
        emit("ladder_t1_of_1000_integral", ladder_step_integral(1000.0, 0.1));
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("ladder_5000") {
        // integral-mode sequence at T = 5000, k = 3 and its partition defects
        let mut it = vec![5000.0];
        for r in 0..3 {
            it.push(ladder_step_integral(it[r], 0.12));
        }
        for (r, v) in it.iter().enumerate() {
            emit(&format!("ladder_5000_it{r}"), *v);
        }
        let inc: Vec<f64> = it.windows(2).map(|w| w[1] - w[0]).collect();
        let mut equid: f64 = 0.0;
        for w in inc.windows(2) {
            equid = equid.max((w[0] / w[1] - 1.0).abs());
        }
        emit("ladder_5000_equidistance_defect", equid);
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("f1") {
        for (x, tau) in [
            (0.5, 1e3),
            (1.0, 1e3),
            (2.0, 1e3),
            (0.5, 1e4),
            (1.0, 1e4),
            (2.0, 1e4),
        ] {
            let lower = x * tau / (1.0 - EULER_C);
            let upper = ladder_step_asymptotic(lower);
            let raw = oracle::integrate(|t| oracle::z_fn(t).powi(2), lower, upper, 0.2);
            emit(&format!("f1_raw_x{x}_tau{tau:.0}"), raw);
            emit(&format!("f1_x{x}_tau{tau:.0}"), raw / tau);
        }
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("basic_state") {
        // basic state at x = 1 - c (lower endpoint is exactly tau)
        for tau in [1e3, 3e3, 1e4] {
            let upper = ladder_step_asymptotic(tau);
            let raw = oracle::integrate(|t| oracle::z_fn(t).powi(2), tau, upper, 0.2);
            emit(&format!("basic_state_xc_tau{tau:.0}"), raw);
        }
    }
    if run("divisor") {
        for tau in [1e3, 1e4] {
            let lower = tau / (1.0 - EULER_C);
            let upper = ladder_step_asymptotic(lower);
            let s = divisor_sum(lower, upper);
            emit(&format!("divisor_sum_x1_tau{tau:.0}"), s as f64);
            emit(&format!("divisor_functional_x1_tau{tau:.0}"), s as f64 / tau);
        }
    }
    if run("gamma_ratio") {
        let tau = 1e4;
        let lower = tau / (1.0 - EULER_C);
        let upper = ladder_step_asymptotic(lower);
        let v = (ln_gamma_real(upper) - ln_gamma_real(lower)) / tau;
        emit("gamma_ratio_x1_tau10000", v);
    }
    if run("tnu") {
        let tau = 1e4;
        let lower = tau / (1.0 - EULER_C);
        let upper = ladder_step_asymptotic(lower);
        let pts = gram_points(lower, upper);
        // previous gram point below the interval, for the first spacing weight
        let first_nu = pts[0].0;
        let prev_target = (first_nu - 1) as f64 * std::f64::consts::PI;
        let prev = oracle::bisect_monotone(
            |t| oracle::theta(t) - prev_target,
            lower - 2.0,
            lower,
            1e-11,
        );
        let mut plain = 0.0;
        let mut weighted = 0.0;
        let mut last = prev;
        for (_, g) in &pts {
            let z2 = oracle::zeta_em(0.5, *g, 1.5).norm_sqr();
            plain += z2;
            weighted += z2 * (*g - last);
            last = *g;
        }
        emit("tnu_count_x1_tau10000", pts.len() as f64);
        emit("tnu_plain_sum_x1_tau10000", plain);
        emit("tnu_weighted_sum_x1_tau10000", weighted);
        emit(
            "tnu_functional_x1_tau10000",
            weighted / std::f64::consts::PI / tau,
        );
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("sigma_moment") {
        let tau = 1e4;
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        let upper = tau / zeta2;
        let v = oracle::integrate(
            |t| oracle::zeta_em(1.0, t, 1.0).norm_sqr(),
            1.0,
            upper,
            0.25,
        );
        emit("sigma_moment_x1_tau10000", v / tau);
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("cbar") {
        // solve int_0^U S1^2 = tau_ref, then cbar(1) = tau_ref / U
        let tau_ref = 5e3;
        let s1o = S1Oracle::build(8200.0);
        let f = |u: f64| oracle::integrate(|t| s1o.s1(t).powi(2), 0.0, u, 0.2) - tau_ref;
        let u_star = oracle::bisect_monotone(f, 2000.0, 8200.0, 1e-6);
        emit("cbar_1_upper_endpoint", u_star);
        emit("cbar_1_at_tauref_5000", tau_ref / u_star);
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    if run("crossbreed") {
        // full composition at x = 1, sigma = 1, tau = 1e4, closed-form ladder
        // step, coefficient vector c = (1, 0, 0, 0, 0)
        let tau = 1e4;
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        let l = 2.0 * std::f64::consts::PI.powi(2) * tau / zeta2.powi(4);
        let u = ladder_step_asymptotic(l);
        let a = oracle::integrate(|t| oracle::zeta_em(1.0, t, 1.0).norm_sqr(), l, u, 0.25);
        let c = oracle::integrate(|t| oracle::z_fn(t).powi(2), l, u, 0.2);
        let b = oracle::integrate(|t| oracle::z_fn(t).powi(4), 0.0, l, 0.2);
        emit("crossbreed_l", l);
        emit("crossbreed_u", u);
        emit("crossbreed_sigma2_lu", a);
        emit("crossbreed_crit2_lu", c);
        emit("crossbreed_crit4_0l", b);
        let value = a.powi(4) * b / c.powi(4) / tau;
        emit("crossbreed_value_x1_sigma1_tau10000_c0only", value);
        println!("# elapsed {:.1}s", t0.elapsed().as_secs_f64());
    }
    println!("# total elapsed {:.1}s", t0.elapsed().as_secs_f64());
}
