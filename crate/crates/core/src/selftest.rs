//! Invariant suite run by the `selftest` command.

use num_complex::Complex;

use crate::analytic::{
    self, ccdf_papr_real, ccdf_upapr, expected_min_ratio, joint_cdf, joint_cdf_from_tails, joint_pdf,
    joint_pdf_mass, normal, JointEvalConfig,
};
use crate::ofdm::{Constellation, FrequencyFrame, IdftPlan, SymbolSource, SUPPORTED_ORDERS};
use crate::rng::substream;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, observed: f64, tolerance: f64) -> Self {
        Self {
            name,
            observed,
            tolerance,
            passed: observed <= tolerance,
        }
    }
}

/// Knobs for the suite. `phi_ripple` perturbs the normal CDF used by the
/// CDF/PDF consistency check with a high-frequency ripple of that amplitude,
/// as a sensitivity canary.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SelftestOptions {
    pub phi_ripple: f64,
}

fn naive_idft(x: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let n = x.len();
    (0..n)
        .map(|t| {
            let mut acc = Complex::new(0.0, 0.0);
            for (k, xk) in x.iter().enumerate() {
                let theta = 2.0 * std::f64::consts::PI * ((k * t) % n) as f64 / n as f64;
                acc += xk * Complex::new(theta.cos(), theta.sin());
            }
            acc / (n as f64).sqrt()
        })
        .collect()
}

fn dft_checks(out: &mut Vec<Check>) {
    let c = Constellation::<f64>::new(64).expect("supported order");
    let mut worst_oracle = 0.0f64;
    let mut worst_parseval = 0.0f64;
    for n in [8usize, 64, 256] {
        let plan = IdftPlan::new(n).expect("valid size");
        for i in 0..100u64 {
            let frame = FrequencyFrame::random(n, &c, &mut substream(0x5e1f, i), i % 2 == 0).expect("valid size");
            let mut fast = frame.bins().to_vec();
            plan.process(&mut fast);
            for (a, b) in fast.iter().zip(naive_idft(frame.bins())) {
                worst_oracle = worst_oracle.max((a - b).norm());
            }
            let ef: f64 = frame.bins().iter().map(|v| v.norm_sqr()).sum();
            let et: f64 = fast.iter().map(|v| v.norm_sqr()).sum();
            worst_parseval = worst_parseval.max((et - ef).abs() / ef);
        }
    }
    out.push(Check::at_most("idft_matches_naive_dft", worst_oracle, 1e-10));
    out.push(Check::at_most("parseval_relative_error", worst_parseval, 1e-9));

    let mut residue = 0.0f64;
    for log_n in 3..=12 {
        let n = 1usize << log_n;
        let plan = IdftPlan::new(n).expect("valid size");
        for i in 0..8u64 {
            let frame = FrequencyFrame::random(n, &c, &mut substream(0x4ea1, i), true).expect("valid size");
            let mut buf = frame.bins().to_vec();
            plan.process(&mut buf);
            residue = buf.iter().fold(residue, |m, v| m.max(v.im.abs()));
        }
    }
    out.push(Check::at_most("hermitian_imaginary_residue", residue, 1e-9));
}

fn normal_checks(out: &mut Vec<Check>) {
    out.push(Check::at_most("phi_at_zero", (normal::cdf(0.0f64) - 0.5f64).abs(), 0.0));

    let mut reflect = 0.0f64;
    let mut decreases = 0.0;
    let mut prev = 0.0;
    let mut derivative = 0.0f64;
    for i in 0..=10_000 {
        let x = 8.0 * i as f64 / 10_000.0;
        reflect = reflect.max((normal::cdf(-x) + normal::cdf(x) - 1.0).abs());
        let y = -8.0 + 16.0 * i as f64 / 10_000.0;
        let c = normal::cdf(y);
        if c < prev {
            decreases += 1.0;
        }
        prev = c;
        if i % 50 == 0 {
            let h = 1e-5;
            let fd = (normal::cdf(y + h) - normal::cdf(y - h)) / (2.0 * h);
            derivative = derivative.max((fd - normal::pdf(y)).abs());
        }
    }
    out.push(Check::at_most("phi_reflection_identity", reflect, 1e-15));
    out.push(Check::at_most("phi_monotone_violations", decreases, 0.0));
    out.push(Check::at_most("pdf_is_cdf_derivative", derivative, 1e-8));
}

fn distribution_checks(opts: &SelftestOptions, out: &mut Vec<Check>) {
    let mut diag = 0.0f64;
    for i in 0..50u32 {
        // deterministic scatter over r in [0.5, 40], N in [2, 4096]
        let r = 0.5 + 39.5 * ((i as f64 * 0.618_033_988_75).fract());
        let n = 2 + ((i as usize * 2_654_435_761) % 4095);
        let lhs = ccdf_papr_real(r, n).expect("valid");
        let rhs = 1.0 - joint_cdf(r, r, n).expect("valid");
        diag = diag.max((lhs - rhs).abs());
    }
    out.push(Check::at_most("joint_cdf_diagonal", diag, 1e-12));

    let mut marginal = 0.0f64;
    for n in [16usize, 128, 1024] {
        for i in 0..40 {
            let r = 0.5 + 0.5 * i as f64;
            let lhs = 1.0 - joint_cdf(100.0, r, n).expect("valid");
            marginal = marginal.max((lhs - ccdf_upapr(r, n).expect("valid")).abs());
        }
    }
    out.push(Check::at_most("joint_cdf_marginal", marginal, 1e-10));

    let ripple = opts.phi_ripple;
    let tail = move |t: f64| normal::sf(t) + ripple * (997.0 * t).sin();
    let mut worst = 0.0f64;
    for n in [8usize, 64] {
        let f = |a: f64, b: f64| joint_cdf_from_tails(tail(a.sqrt()), tail(b.sqrt()), n);
        let h = 2e-4;
        for i in 0..10 {
            for j in 0..10 {
                let a = 0.5 + 0.75 * i as f64;
                let b = 0.5 + 0.75 * j as f64;
                let fd = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4.0 * h * h);
                let pdf = joint_pdf(a, b, n).expect("valid");
                worst = worst.max(((fd - pdf) / pdf).abs());
            }
        }
    }
    out.push(Check::at_most("cdf_pdf_mixed_difference", worst, 1e-4));

    let cfg = JointEvalConfig::default();
    let mut norm = 0.0f64;
    for n in [128usize, 1024] {
        let m: f64 = joint_pdf_mass(n, &cfg).map(|e| e.value).unwrap_or(f64::NAN);
        norm = norm.max((m - 1.0).abs());
    }
    out.push(Check::at_most("pdf_normalization_large_n", norm, cfg.rel_tol));
    let mut mass = 0.0f64;
    for n in [4usize, 16] {
        let m: f64 = joint_pdf_mass(n, &cfg).map(|e| e.value).unwrap_or(f64::NAN);
        mass = mass.max((m - (1.0 - 2f64.powi(1 - n as i32))).abs());
    }
    out.push(Check::at_most("pdf_mass_small_n", mass, cfg.rel_tol));

    let mut plateau = 0.0;
    let mut prev = 1.0;
    for i in 0..=80 {
        let r = 10f64.powf((8.0 + 0.1 * i as f64) / 10.0);
        let p = ccdf_upapr(r, 4096).expect("valid");
        if !(p > 0.0 && p < 1.0 && p < prev) {
            plateau += 1.0;
        }
        prev = p;
    }
    out.push(Check::at_most("upapr_ccdf_large_n_stability", plateau, 0.0));

    let a: f64 = expected_min_ratio(0.49, 0.09, 128, &cfg).unwrap_or(f64::NAN);
    let b: f64 = expected_min_ratio(0.09, 0.49, 128, &cfg).unwrap_or(f64::NAN);
    out.push(Check::at_most("variance_reflection_symmetry", ((a - b) / a).abs(), 1e-7));

    let v: f64 = analytic::violation_probability(40.0, 0.5, 256).expect("valid");
    let d = ccdf_papr_real(10.0, 256).expect("valid");
    out.push(Check::at_most("violation_midpoint_reduction", (v - d).abs(), 1e-15));
}

fn signal_checks(out: &mut Vec<Check>) {
    let energy = SUPPORTED_ORDERS
        .iter()
        .map(|&m| (Constellation::<f64>::new(m).expect("supported").average_energy() - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(Check::at_most("constellation_unit_energy", energy, 1e-12));

    // 2000 symbols x 64 samples; symbols are the independent units
    let n = 64;
    let symbols = 2000u64;
    let src = SymbolSource::new(n, Constellation::new(64).expect("supported"), 0xfeed, true).expect("valid");
    let (sum, sum_sq, powers) = src
        .fold(
            symbols,
            || (0.0f64, 0.0f64, Vec::new()),
            |acc, s| {
                let x = s.real_samples().expect("real");
                acc.0 += x.iter().sum::<f64>();
                let p = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
                acc.1 += p;
                acc.2.push(p);
            },
            |a, b| {
                a.0 += b.0;
                a.1 += b.1;
                a.2.extend(b.2);
            },
        )
        .expect("valid");
    let total = (symbols as usize * n) as f64;
    out.push(Check::at_most("zero_mean_bound_ratio", (sum / total).abs() * total.sqrt() / 4.0, 1.0));
    let mean_power = sum_sq / symbols as f64;
    let sd = (powers.iter().map(|p| (p - mean_power).powi(2)).sum::<f64>() / (symbols as f64 - 1.0)).sqrt();
    let z = (mean_power - (n as f64 - 2.0) / n as f64).abs() / (sd / (symbols as f64).sqrt());
    out.push(Check::at_most("ensemble_variance_z_score", z, 3.0));
}

/// Runs every check, in a fixed order.
pub fn run(opts: &SelftestOptions) -> Vec<Check> {
    let mut out = Vec::new();
    dft_checks(&mut out);
    normal_checks(&mut out);
    distribution_checks(opts, &mut out);
    signal_checks(&mut out);
    out
}
