//! Backward error of the trimmed linearizations: convolution-matrix margins,
//! the dual completion `ΔD`, the perturbed polynomial `ΔP`, the constants
//! `Ĉ` and `C_full`, and seeded perturbation experiments.
//!
//! Everything here runs on the float path. Pencil norms are
//! `‖λX + Y‖_F = √(‖X‖_F² + ‖Y‖_F²)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matpoly::{h_jp, lambda_kp, MatPoly, Pencil};
use crate::matrix::Mat;
use crate::minimal::BasisSide;
use crate::random;
use crate::reduction::TrimResult;
use crate::scalar::Tol;

/// `2·sin(π/(4k−2))`.
pub fn sigma_formula(k: usize) -> f64 {
    2.0 * (std::f64::consts::PI / (4 * k - 2) as f64).sin()
}

/// Which convolution matrix of `τ = H_{k−1} ⊗ I_n` to inspect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConvIndex {
    /// `j = k − 2`, square.
    Square,
    /// `j = k − 1`, wide.
    Wide,
}

impl ConvIndex {
    pub fn j(self, k: usize) -> usize {
        match self {
            ConvIndex::Square => k - 2,
            ConvIndex::Wide => k - 1,
        }
    }
}

/// `(formula, computed)` for `σ_min(C_j(H_{k−1} ⊗ I_n))`, the computed value by SVD.
pub fn sigma_min_tau(k: usize, n: usize, j: ConvIndex) -> Result<(f64, f64)> {
    if k < 2 || n == 0 {
        return Err(Error::pre("sigma_min_tau needs k >= 2 and n >= 1"));
    }
    let tau = h_jp::<f64>(k - 1, n);
    let c = tau.conv_matrix(j.j(k));
    Ok((sigma_formula(k), linalg::sigma_min(&c)))
}

/// The tridiagonal matrices used to locate the smallest singular value.
pub struct AppendixMatrices;

impl AppendixMatrices {
    /// `diag(1, 2, …, 2, 1)` of order `j`; `[1]` for `j = 1`.
    pub fn d(j: usize) -> Mat<f64> {
        Mat::from_fn(j, j, |a, b| match (a == b, a == 0 || a + 1 == j) {
            (true, true) => 1.0,
            (true, false) => 2.0,
            _ => 0.0,
        })
    }

    /// `−1` on the subdiagonal.
    pub fn l(j: usize) -> Mat<f64> {
        Mat::from_fn(j, j, |a, b| if a == b + 1 { -1.0 } else { 0.0 })
    }

    fn base(j: usize) -> Mat<f64> {
        let l = Self::l(j);
        &(&Self::d(j) + &l) + &l.transpose()
    }

    /// `D_j + L_j + L_jᵀ + e_j e_jᵀ`.
    pub fn t(j: usize) -> Mat<f64> {
        let mut t = Self::base(j);
        if j > 0 {
            t[(j - 1, j - 1)] += 1.0;
        }
        t
    }

    /// `D_j + L_j + L_jᵀ + e₁ e₁ᵀ`.
    pub fn t_hat(j: usize) -> Mat<f64> {
        let mut t = Self::base(j);
        if j > 0 {
            t[(0, 0)] += 1.0;
        }
        t
    }

    /// Smallest eigenvalue of a symmetric matrix.
    pub fn smallest_eigenvalue(a: &Mat<f64>) -> f64 {
        linalg::to_na(a).symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `2 + 2·cos(2(k−1)π/(2k−1))`.
    pub fn predicted_t_hat_min(k: usize) -> f64 {
        2.0 + 2.0 * (2.0 * (k - 1) as f64 * std::f64::consts::PI / (2 * k - 1) as f64).cos()
    }
}

/// Outcome of the convolution-matrix minimality test for `B + ΔB`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalityCheck {
    pub is_minimal: bool,
    /// `3σ_min(R̃)/(2k^{3/2})`.
    pub margin: f64,
    pub sigma_square: f64,
    pub sigma_wide: f64,
    /// A decisive singular value sits within a factor 10 of the rank threshold.
    pub borderline: bool,
}

fn kn_of(bp: &Pencil<f64>) -> Result<(usize, usize)> {
    let (r, c) = (bp.rows(), bp.cols());
    if c <= r || c % (c - r) != 0 {
        return Err(Error::dim(format!("{r}x{c} is not a (k-1)n x kn pencil")));
    }
    let n = c - r;
    Ok((c / n, n))
}

/// Is `Bp` a minimal basis with row degrees 1 and dual degrees `k − 1`?
/// Decided by `C_{k−2}(Bp)` nonsingular and `C_{k−1}(Bp)` of full row rank.
pub fn minimality_margin(bp: &Pencil<f64>, r_tilde: &Mat<f64>, tol: Tol) -> Result<MinimalityCheck> {
    let (k, _) = kn_of(bp)?;
    let poly = bp.to_poly();
    let sq = poly.conv_matrix(k - 2);
    let wide = poly.conv_matrix(k - 1);
    let sv_sq = linalg::singular_values(&sq);
    let sv_wide = linalg::singular_values(&wide);
    let sigma_square = sv_sq.last().copied().unwrap_or(0.0);
    let sigma_wide = sv_wide.get(wide.rows() - 1).copied().unwrap_or(0.0);
    let thr_sq = tol.rank_threshold(sq.rows(), sq.cols(), sv_sq[0]);
    let thr_wide = tol.rank_threshold(wide.rows(), wide.cols(), sv_wide[0]);
    let near = |s: f64, t: f64| s > t / 10.0 && s < t * 10.0;
    Ok(MinimalityCheck {
        is_minimal: sigma_square > thr_sq && sigma_wide > thr_wide,
        margin: 3.0 * linalg::sigma_min(r_tilde) / (2.0 * (k as f64).powf(1.5)),
        sigma_square,
        sigma_wide,
        borderline: near(sigma_square, thr_sq) || near(sigma_wide, thr_wide),
    })
}

/// Minimum-norm `ΔD` (grade `k − 1`, `kn × n`) with `Bp·(Λ_{k,n} + ΔD) = 0`.
pub fn dual_completion(bp: &Pencil<f64>, k: usize, n: usize, tol: Tol) -> Result<MatPoly<f64>> {
    if bp.rows() != (k - 1) * n || bp.cols() != k * n {
        return Err(Error::dim("Bp must be (k-1)n x kn"));
    }
    let c = bp.to_poly().conv_matrix(k - 1);
    let lam = lambda_kp::<f64>(k, n).stacked_desc();
    let rhs = (&c * &lam).neg_mat();
    let dd = linalg::float_min_norm_solve(&c, &rhs, tol);
    let delta = MatPoly::from_stacked_desc(&dd, k * n);
    let resid = crate::scalar::frob(&(&c * &(&lam + &dd)));
    let scale = bp.frob_norm() * (lam.frob_sq() + dd.frob_sq()).sqrt();
    if resid > tol.verify_rel * scale.max(1.0) {
        return Err(Error::verify(format!("dual completion residual {resid:e}")));
    }
    Ok(delta)
}

/// Dual completion with the admissibility check and the norm bound.
#[derive(Clone, Debug)]
pub struct DualCompletion {
    pub delta_d: MatPoly<f64>,
    pub norm: f64,
    /// `(k√2/σ_min(R̃))·‖ΔB‖_F`.
    pub bound: f64,
    pub bound_ok: bool,
    /// `Λᵀ + ΔDᵀ` is a dual minimal basis of `B + ΔB`.
    pub dual_minimal: bool,
    pub minimality: MinimalityCheck,
}

/// Completes `B + ΔB`; requires `‖ΔB‖_F < σ_min(R̃)/(2k^{3/2})`.
pub fn complete_dual(b: &Pencil<f64>, delta_b: &Pencil<f64>, r_tilde: &Mat<f64>, tol: Tol) -> Result<DualCompletion> {
    let (k, n) = kn_of(b)?;
    let smin = linalg::sigma_min(r_tilde);
    let nb = delta_b.frob_norm();
    if nb >= smin / (2.0 * (k as f64).powf(1.5)) {
        return Err(Error::pre("perturbation of B exceeds the admissible radius"));
    }
    let bp = b.add(delta_b);
    let delta_d = dual_completion(&bp, k, n, tol)?;
    let norm = delta_d.frob_norm();
    let bound = k as f64 * std::f64::consts::SQRT_2 / smin * nb;
    let minimality = minimality_margin(&bp, r_tilde, tol)?;
    let full = lambda_kp::<f64>(k, n).add(&delta_d)?;
    let lead_rank = linalg::float_rank(&full.coeff(k - 1), tol);
    Ok(DualCompletion {
        bound_ok: norm <= bound * (1.0 + 1e-12) + 1e-15,
        dual_minimal: minimality.is_minimal && lead_rank == n,
        delta_d,
        norm,
        bound,
        minimality,
    })
}

/// `ΔP = (1/α)·((A + ΔA)·ΔD + ΔA·Λ_{k,n})`.
pub fn perturbed_polynomial(
    a: &Pencil<f64>,
    delta_a: &Pencil<f64>,
    delta_d: &MatPoly<f64>,
    alpha: f64,
) -> Result<MatPoly<f64>> {
    if alpha == 0.0 {
        return Err(Error::pre("alpha must be nonzero"));
    }
    if a.cols() != delta_d.rows() || delta_a.rows() != a.rows() || delta_a.cols() != a.cols() {
        return Err(Error::dim("A, dA and dD are not compatible"));
    }
    let k = a.cols() / delta_d.cols();
    let apd = a.add(delta_a).to_poly();
    let lam = lambda_kp::<f64>(k, delta_d.cols());
    let t1 = apd.mul(&delta_d.with_grade(k - 1)?)?;
    let t2 = delta_a.to_poly().mul(&lam)?;
    Ok(t1.add(&t2)?.scale(&(1.0 / alpha)))
}

/// Constants and conditioning data of a trim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub constant_hat: f64,
    pub constant_full: f64,
    pub kappa_d_tilde: f64,
    pub kappa_r_tilde: f64,
    pub sigma_min_r_tilde: f64,
    pub sigma_min_d_tilde: f64,
    pub norm_lhat_t: f64,
    pub norm_lt: f64,
    pub norm_a: f64,
    pub norm_p: f64,
    pub alpha: f64,
    /// `σ_min(R̃)σ_min(D̃)/(2k^{3/2})`.
    pub radius: f64,
}

/// `Ĉ = (1/|α|)(‖L̂_t‖/‖P‖)(3 + 2k‖A‖/σ_min(R̃))` and `C_full = κ₂(D̃)·Ĉ`.
/// `P` is taken in the orientation of the trim (transposed for `L2`).
pub fn backward_constants(tr: &TrimResult<f64>, p: &MatPoly<f64>) -> Constants {
    let k = tr.k as f64;
    let sr = linalg::singular_values(&tr.r_tilde);
    let sd = linalg::singular_values(&tr.d_tilde);
    let smin_r = sr.last().copied().unwrap_or(0.0);
    let smin_d = sd.last().copied().unwrap_or(0.0);
    let norm_lhat_t = tr.lhat_t.frob_norm();
    let norm_a = tr.a_block().frob_norm();
    let norm_p = p.frob_norm();
    let alpha = tr.alpha;
    let constant_hat = (norm_lhat_t / norm_p) * (3.0 + 2.0 * k * norm_a / smin_r) / alpha.abs();
    let kappa_d_tilde = linalg::cond2(&tr.d_tilde);
    Constants {
        constant_hat,
        constant_full: kappa_d_tilde * constant_hat,
        kappa_d_tilde,
        kappa_r_tilde: linalg::cond2(&tr.r_tilde),
        sigma_min_r_tilde: smin_r,
        sigma_min_d_tilde: smin_d,
        norm_lhat_t,
        norm_lt: tr.lt.frob_norm(),
        norm_a,
        norm_p,
        alpha,
        radius: smin_r * smin_d / (2.0 * k.powf(1.5)),
    }
}

/// `(3 + 2k)·√(1 + 2(k−1)n)`, the constant of the optimally scaled companion.
pub fn optimal_constant(k: usize, n: usize) -> f64 {
    (3.0 + 2.0 * k as f64) * (1.0 + 2.0 * ((k - 1) * n) as f64).sqrt()
}

/// One perturbation trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbReport {
    pub trial: usize,
    pub epsilon: f64,
    pub bound_rhs: f64,
    pub delta_p_norm: f64,
    pub ratio: f64,
    pub constant_hat: f64,
    pub constant_full: f64,
    pub kappa_d_tilde: f64,
    pub kappa_r_tilde: f64,
    pub sigma_min_r_tilde: f64,
    pub bound_holds: bool,
    pub delta_d_norm: f64,
    pub delta_d_bound: f64,
    pub dual_bound_ok: bool,
    pub dual_minimal: bool,
    pub indices_preserved: bool,
    pub inconclusive: bool,
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
}

/// Aggregate over a list of reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub max_ratio: f64,
    pub constant_full: f64,
    pub all_bounds_hold: bool,
    pub all_dual_bounds_ok: bool,
    pub indices_preserved: bool,
    pub inconclusive: usize,
}

pub fn summarize(reports: &[PerturbReport]) -> Summary {
    Summary {
        trials: reports.len(),
        max_ratio: reports.iter().map(|r| r.ratio).fold(0.0, f64::max),
        constant_full: reports.first().map_or(0.0, |r| r.constant_full),
        all_bounds_hold: reports.iter().all(|r| r.bound_holds),
        all_dual_bounds_ok: reports.iter().all(|r| r.dual_bound_ok),
        indices_preserved: reports.iter().filter(|r| !r.inconclusive).all(|r| r.indices_preserved),
        inconclusive: reports.iter().filter(|r| r.inconclusive).count(),
    }
}

/// Minimal indices read off tolerance-rank nullity profiles, and whether any
/// rank decision was borderline.
pub fn float_indices(p: &MatPoly<f64>, side: BasisSide, tol: Tol) -> (Vec<usize>, bool) {
    let q = match side {
        BasisSide::Right => p.clone(),
        BasisSide::Left => p.transpose(),
    };
    let upto = q.grade() * q.rows().min(q.cols()) + 1;
    let mut borderline = false;
    let profile: Vec<usize> = (0..=upto)
        .map(|d| {
            let c = q.conv_matrix(d);
            let info = linalg::float_rank_info(&c, tol);
            borderline |= info.borderline;
            c.cols() - info.rank
        })
        .collect();
    // #{ε ≤ d} = N_d − N_{d−1}
    let le: Vec<usize> = (0..profile.len()).map(|d| profile[d] - if d == 0 { 0 } else { profile[d - 1] }).collect();
    let mut out = Vec::new();
    for d in 0..le.len() {
        let prev = if d == 0 { 0 } else { le[d - 1] };
        if le[d] < prev {
            borderline = true;
            continue;
        }
        out.extend(std::iter::repeat_n(d, le[d] - prev));
    }
    (out, borderline)
}

/// Per-trial data shared by every trial of an experiment.
struct Setup<'a> {
    tr: &'a TrimResult<f64>,
    p: &'a MatPoly<f64>,
    consts: Constants,
    d_inv: Mat<f64>,
    epsilon: f64,
    tol: Tol,
}

fn run_trial(s: &Setup, seed: u64, trial: usize) -> Result<PerturbReport> {
    let tr = s.tr;
    let (m, n, k) = (tr.m, tr.n, tr.k);
    let mut rng = random::rng(seed, trial as u64);
    let dlt = random::rescale_pencil(&random::normal_pencil(&mut rng, tr.lt.rows(), tr.lt.cols()), s.epsilon);
    let dlh = dlt.left_mul(&s.d_inv);
    let da = dlh.submatrix(0, 0, m, k * n);
    let db = dlh.submatrix(m, 0, (k - 1) * n, k * n);
    let dual = complete_dual(&tr.b_block(), &db, &tr.r_tilde, s.tol)?;
    let dp = perturbed_polynomial(&tr.a_block(), &da, &dual.delta_d, tr.alpha)?;
    let delta_p_norm = dp.frob_norm();
    let rel_l = s.epsilon / s.consts.norm_lt;
    let ratio = (delta_p_norm / s.consts.norm_p) / rel_l;

    let pp = s.p.add(&dp)?;
    let lp = tr.lt.add(&dlt).to_poly();
    let (pr, b1) = float_indices(&pp, BasisSide::Right, s.tol);
    let (pl, b2) = float_indices(&pp, BasisSide::Left, s.tol);
    let (lr, b3) = float_indices(&lp, BasisSide::Right, s.tol);
    let (ll, b4) = float_indices(&lp, BasisSide::Left, s.tol);
    let shifted: Option<Vec<usize>> = lr.iter().map(|&e| e.checked_sub(k - 1)).collect();
    let indices_preserved = shifted.as_deref() == Some(pr.as_slice()) && ll == pl;

    Ok(PerturbReport {
        trial,
        epsilon: s.epsilon,
        bound_rhs: s.consts.radius,
        delta_p_norm,
        ratio,
        constant_hat: s.consts.constant_hat,
        constant_full: s.consts.constant_full,
        kappa_d_tilde: s.consts.kappa_d_tilde,
        kappa_r_tilde: s.consts.kappa_r_tilde,
        sigma_min_r_tilde: s.consts.sigma_min_r_tilde,
        bound_holds: ratio <= s.consts.constant_full * (1.0 + 1e-10),
        delta_d_norm: dual.norm,
        delta_d_bound: dual.bound,
        dual_bound_ok: dual.bound_ok,
        dual_minimal: dual.dual_minimal,
        indices_preserved,
        inconclusive: b1 || b2 || b3 || b4 || dual.minimality.borderline,
        right_indices: pr,
        left_indices: pl,
    })
}

/// Runs `trials` perturbations of `L_t` at `eps_fraction` of the admissible
/// radius. Trial `i` draws from stream `i` of `seed`; reports come back in
/// trial order regardless of scheduling. `P` is given in the input orientation.
pub fn run_experiment(
    p: &MatPoly<f64>,
    tr: &TrimResult<f64>,
    eps_fraction: f64,
    trials: usize,
    seed: u64,
    tol: Tol,
) -> Result<Vec<PerturbReport>> {
    if !(eps_fraction > 0.0 && eps_fraction < 1.0) {
        return Err(Error::pre("eps_fraction must lie in (0, 1)"));
    }
    let p = match tr.side {
        crate::spaces::Side::L1 => p.clone(),
        crate::spaces::Side::L2 => p.transpose(),
    };
    if (p.rows(), p.cols(), p.grade()) != (tr.m, tr.n, tr.k) {
        return Err(Error::dim("trim does not match the polynomial"));
    }
    let d_inv = linalg::float_inverse(&tr.d_tilde, tol).ok_or_else(|| Error::pre("D-tilde is singular"))?;
    let consts = backward_constants(tr, &p);
    let setup = Setup { tr, p: &p, epsilon: eps_fraction * consts.radius, consts, d_inv, tol };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(|t| run_trial(&setup, seed, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(|t| run_trial(&setup, seed, t)).collect()
    }
}

/// One optimality condition with its measured value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalityReport {
    pub conditions: Vec<Condition>,
    pub pass: bool,
    pub constants: Constants,
    pub recommendation: Option<String>,
}

/// Checks `κ₂(D̃) ≈ 1`, `κ₂(R̃) ≈ 1` and `‖A‖_F ≈ |α|‖P‖_F ≈ σ_min(R̃)`,
/// each within `factor`.
pub fn optimality_check(tr: &TrimResult<f64>, p: &MatPoly<f64>, factor: f64) -> OptimalityReport {
    let c = backward_constants(tr, p);
    let within = |x: f64| x.is_finite() && x <= factor && x >= 1.0 / factor;
    let ap = c.alpha.abs() * c.norm_p;
    let conditions = vec![
        Condition { name: "kappa_d_tilde".into(), value: c.kappa_d_tilde, pass: within(c.kappa_d_tilde) },
        Condition { name: "kappa_r_tilde".into(), value: c.kappa_r_tilde, pass: within(c.kappa_r_tilde) },
        Condition { name: "norm_a_over_alpha_norm_p".into(), value: c.norm_a / ap, pass: within(c.norm_a / ap) },
        Condition {
            name: "alpha_norm_p_over_sigma_min_r_tilde".into(),
            value: ap / c.sigma_min_r_tilde,
            pass: within(ap / c.sigma_min_r_tilde),
        },
    ];
    let pass = conditions.iter().all(|x| x.pass);
    let recommendation = (!pass).then(|| format!("rescale so that alpha = 1/||P||_F = {:.6e}", 1.0 / c.norm_p));
    OptimalityReport { conditions, pass, constants: c, recommendation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::trim;
    use crate::spaces::{build_l1, companion_w};

    fn tol() -> Tol {
        Tol::default()
    }

    /// `C₁ᵍ` with ansatz vector `e₁/‖P‖_F`.
    fn scaled_companion_trim(p: &MatPoly<f64>) -> TrimResult<f64> {
        let k = p.grade();
        let mut v = vec![0.0; k];
        v[0] = 1.0 / p.frob_norm();
        let l = build_l1(p, &v, &companion_w(p.rows(), p.cols(), k)).unwrap();
        trim(&l, None, tol()).unwrap()
    }

    #[test]
    fn formula_small_k() {
        let (f, c) = sigma_min_tau(2, 1, ConvIndex::Square).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        assert!((c - 1.0).abs() < 1e-12);
        let (f3, c3) = sigma_min_tau(3, 1, ConvIndex::Wide).unwrap();
        assert!((f3 - 0.618_033_988_749_894_9).abs() < 1e-12);
        assert!((c3 - f3).abs() < 1e-10);
        assert!(f3 >= 0.5);
    }

    #[test]
    fn t_hat_smallest_eigenvalue_k3() {
        let t = AppendixMatrices::t_hat(2);
        let e = AppendixMatrices::smallest_eigenvalue(&t);
        assert!((e - 0.381_966_011_250_105).abs() < 1e-12);
        assert!((e - AppendixMatrices::predicted_t_hat_min(3)).abs() < 1e-12);
    }

    #[test]
    fn t_and_t_hat_are_flip_similar() {
        for j in 1..7 {
            let f = Mat::from_fn(j, j, |a, b| if a + b + 1 == j { 1.0 } else { 0.0 });
            let flipped = &(&f * &AppendixMatrices::t(j)) * &f;
            assert_eq!(flipped, AppendixMatrices::t_hat(j));
        }
    }

    #[test]
    fn unperturbed_b_is_minimal() {
        let b = crate::reduction::kron_lower::<f64>(2, 3);
        let r = Mat::identity(4);
        let c = minimality_margin(&b, &r, tol()).unwrap();
        assert!(c.is_minimal);
        assert!((c.margin - 3.0 / (2.0 * 3f64.powf(1.5))).abs() < 1e-15);
    }

    #[test]
    fn rank_collapse_detected() {
        // R̃ = diag(1, 1, 1, 1/2); ΔB cancels the last row of B
        let mut r = Mat::identity(4);
        r[(3, 3)] = 0.5;
        let b = crate::reduction::kron_lower::<f64>(2, 3).left_mul(&r);
        let mut db = Pencil::zeros(4, 6);
        db.x[(3, 5)] = 0.5;
        db.y[(3, 3)] = -0.5;
        assert!((db.frob_norm() - std::f64::consts::SQRT_2 * 0.5).abs() < 1e-15);
        let c = minimality_margin(&b.add(&db), &r, tol()).unwrap();
        assert!(!c.is_minimal);
    }

    #[test]
    fn zero_perturbation_gives_zero_completion() {
        let b = crate::reduction::kron_lower::<f64>(2, 3);
        let dd = dual_completion(&b, 3, 2, tol()).unwrap();
        assert!(dd.frob_norm() < 1e-14);
    }

    #[test]
    fn completion_at_half_radius() {
        let mut rng = random::rng(11, 0);
        let r = random::normal_mat(&mut rng, 4, 4);
        let b = crate::reduction::kron_lower::<f64>(2, 3).left_mul(&r);
        let radius = linalg::sigma_min(&r) / (2.0 * 3f64.powf(1.5));
        let db = random::rescale_pencil(&random::normal_pencil(&mut rng, 4, 6), 0.5 * radius);
        let dc = complete_dual(&b, &db, &r, tol()).unwrap();
        assert!(dc.bound_ok && dc.dual_minimal);
        let resid = b.add(&db).to_poly().mul(&lambda_kp::<f64>(3, 2).add(&dc.delta_d).unwrap()).unwrap();
        assert!(resid.frob_norm() <= 1e-10);
    }

    #[test]
    fn perturbed_polynomial_without_completion() {
        let mut rng = random::rng(5, 0);
        let a = random::normal_pencil(&mut rng, 3, 4);
        let da = random::normal_pencil(&mut rng, 3, 4);
        let zero = MatPoly::zero(4, 2, 1);
        let dp = perturbed_polynomial(&a, &da, &zero, 0.5).unwrap();
        let direct = da.to_poly().mul(&lambda_kp(2, 2)).unwrap().scale(&2.0);
        assert!(dp.approx_eq(&direct, tol()));
        assert!(dp.frob_norm() <= 2.0 * std::f64::consts::SQRT_2 * da.frob_norm() + 1e-12);
        assert!(perturbed_polynomial(&a, &da, &zero, 0.0).is_err());
    }

    #[test]
    fn scaled_companion_constant() {
        let p = random::normal_poly(&mut random::rng(2, 0), 3, 2, 2);
        let tr = scaled_companion_trim(&p);
        let c = backward_constants(&tr, &p);
        assert!((c.kappa_d_tilde - 1.0).abs() < 1e-12);
        let target = optimal_constant(2, 2);
        assert!(c.constant_full / target < 2.0 && target / c.constant_full < 2.0);
        assert!(optimality_check(&tr, &p, 10.0).pass);
    }

    #[test]
    fn ill_conditioned_r_flagged() {
        let p = random::normal_poly(&mut random::rng(2, 0), 3, 2, 2);
        let mut tr = scaled_companion_trim(&p);
        tr.r_tilde = Mat::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1e6]]);
        let rep = optimality_check(&tr, &p, 10.0);
        assert!(!rep.pass);
        assert!(!rep.conditions[1].pass);
        assert!(rep.recommendation.is_some());
    }

    #[test]
    fn experiment_is_deterministic_and_bounded() {
        let p = random::normal_poly(&mut random::rng(9, 0), 3, 2, 2);
        let tr = scaled_companion_trim(&p);
        let a = run_experiment(&p, &tr, 0.5, 8, 42, tol()).unwrap();
        let b = run_experiment(&p, &tr, 0.5, 8, 42, tol()).unwrap();
        assert_eq!(a, b);
        let s = summarize(&a);
        assert!(s.all_bounds_hold && s.all_dual_bounds_ok && s.indices_preserved);
    }
}
