//! CSV and text rendering. Numbers carry 12 significant digits and never
//! depend on the locale.

use std::fmt::Write as _;

use qpurify_core::extraction::{
    estimate_measurements, maximally_mixed, ExtractionResult, MeasurementEstimate, Trajectory,
};
use qpurify_core::linalg::{vectorize, QUBIT_REPORT_ORDER};

use crate::config::{Config, Point};
use crate::sweep::SweepRow;

pub const SWEEP_HEADER: &str =
    "epsilon_tau,theta_over_pi,chi,kT_over_omega,purity,lambda0_abs,lambda1_abs,log_ratio,degenerate";
pub const TRAJECTORY_HEADER: &str = "N,success_probability,purity,underflow";

/// Target quality used by the single-point measurement estimate.
pub const REPORT_QUALITY: f64 = 0.99;

pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::with_capacity(rows.len() * 160);
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let p = &r.point;
        let fields = [
            num(p.epsilon_tau),
            num(p.theta_over_pi),
            num(p.chi),
            num(p.kt_over_omega),
            num(r.purity),
            num(r.lambda0_abs),
            num(r.lambda1_abs),
            num(r.log_ratio),
            flag(r.degenerate).to_string(),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::new();
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for pt in &traj.points {
        let _ = writeln!(s, "{},{},{},{}", pt.n, num(pt.success_probability), num(pt.purity), flag(traj.underflow));
    }
    s
}

fn complex(z: qpurify_core::Complex64) -> String {
    format!("{} {} {}", num(z.re), num(z.im), num(z.norm()))
}

/// Human-readable single-point summary.
pub fn extract_report(cfg: &Config, pt: &Point, res: &ExtractionResult) -> String {
    let m = &cfg.model;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "model: omega_over_epsilon = {}, gamma2_over_epsilon = {}, gamma1_over_gamma2 = {}, kT_over_omega = {}, ideal = {}",
        m.omega_over_epsilon, m.gamma2_over_epsilon, m.gamma1_over_gamma2, pt.kt_over_omega, m.ideal
    );
    let _ = writeln!(
        s,
        "point: epsilon_tau = {}, theta_over_pi = {}, chi = {}",
        pt.epsilon_tau, pt.theta_over_pi, pt.chi
    );
    let _ = writeln!(s, "eigenvalues (re im abs):");
    for (k, l) in res.spectrum.eigenvalues.iter().enumerate() {
        let _ = writeln!(s, "  lambda{k} = {}", complex(*l));
    }
    let _ = writeln!(s, "extracted state (rho_uu, rho_dd, rho_ud, rho_du; re im abs):");
    let v = vectorize(&res.extracted_state);
    let labels = ["rho_uu", "rho_dd", "rho_ud", "rho_du"];
    for (label, idx) in labels.iter().zip(QUBIT_REPORT_ORDER) {
        let _ = writeln!(s, "  {label} = {}", complex(v[idx]));
    }
    let _ = writeln!(s, "purity = {}", num(res.purity));
    let _ = writeln!(s, "log_ratio = {}", num(res.log_ratio));
    let _ = writeln!(s, "degenerate = {}", flag(res.degenerate));
    match estimate_measurements(&res.spectrum, &maximally_mixed(), REPORT_QUALITY) {
        Ok(MeasurementEstimate { count, weight, .. }) => {
            let _ = writeln!(s, "measurements for p0 = {REPORT_QUALITY} from I/2: {count} (weight {})", num(weight));
        }
        Err(e) => {
            let _ = writeln!(s, "measurements for p0 = {REPORT_QUALITY} from I/2: unavailable ({e})");
        }
    }
    s
}
