//! The three reference examples: a rank-deficient Z that is still strong, a
//! g-linearization that is not strong, and a trimmed 3×2 quadratic.

use serde::Serialize;
use serde_json::{json, Value};

use crate::eigen::{check_g_linearization, check_linearization, complete_eigenstructure, Verdict};
use crate::error::Result;
use crate::io::{mat_to_json, pencil_to_json, poly_to_json, vector_to_json};
use crate::matpoly::{constant_det, MatPoly, Pencil};
use crate::matrix::Mat;
use crate::reduction::{glin_target, reflector_for, trim, z_block, z_rank};
use crate::scalar::{int_mat, Rat, Scalar, Tol};
use crate::smith::{from_poly_matrix, PolyMat};
use crate::spaces::{ansatz_membership, companion_c1g, AnsatzPencil, Membership, Side};
use crate::upoly::UPoly;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub example: u8,
    pub title: String,
    pub checks: Vec<Check>,
    pub objects: Value,
    pub elapsed_ms: f64,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// JSON without timing, for byte-stable output.
    pub fn to_json(&self) -> Value {
        json!({
            "example": self.example,
            "title": self.title,
            "passed": self.passed(),
            "checks": self.checks,
            "objects": self.objects,
        })
    }
}

/// Wall-clock timer; reads zero where the platform has no clock (wasm32).
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        0.0
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }
}

fn r(v: i64) -> Rat {
    Rat::from_i64(v)
}

fn ansatz_text(v: Option<&[Rat]>) -> String {
    match v {
        Some(v) => format!("ansatz [{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        None => "not a member".into(),
    }
}

fn opt_text<D: std::fmt::Display>(x: Option<D>) -> String {
    x.map_or_else(|| "none".into(), |x| x.to_string())
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = format!("nrank {} vs {}, finite match {}", v.nrank_pencil, v.nrank_target, v.finite_match);
    if let Some(inf) = v.infinite_match {
        s += &format!(", infinite match {inf}");
    }
    if let Some(r) = &v.reason {
        s += &format!(": {r}");
    }
    s
}

fn up(c: &[i64]) -> UPoly<Rat> {
    UPoly::new(c.iter().map(|&x| r(x)).collect())
}

pub fn example1_poly() -> MatPoly<Rat> {
    let a2 = int_mat(&[&[1, 0], &[0, 0], &[0, 0]]);
    MatPoly::from_coeffs(vec![Mat::zeros(3, 2), Mat::zeros(3, 2), a2])
}

/// `λ[[A₂, −X̂], [0, −Z]] + [[X̂, 0], [Z, 0]]` from the printed blocks.
pub fn example1_pencil() -> Pencil<Rat> {
    let a2: Mat<Rat> = int_mat(&[&[1, 0], &[0, 0], &[0, 0]]);
    let xh: Mat<Rat> = int_mat(&[&[0, 0], &[0, -1], &[0, 0]]);
    let z: Mat<Rat> = int_mat(&[&[-1, 0], &[0, 0], &[0, 0]]);
    let zero = Mat::zeros(3, 2);
    Pencil {
        x: Mat::vstack(&[&Mat::hstack(&[&a2, &xh.neg_mat()]), &Mat::hstack(&[&zero, &z.neg_mat()])]),
        y: Mat::vstack(&[&Mat::hstack(&[&xh, &zero]), &Mat::hstack(&[&z, &zero])]),
    }
}

pub fn example2_poly() -> MatPoly<Rat> {
    MatPoly::from_coeffs(vec![
        int_mat(&[&[0, 0], &[0, 1], &[0, 0]]),
        int_mat(&[&[0, 1], &[1, 0], &[0, 0]]),
        int_mat(&[&[1, 0], &[0, 0], &[0, 0]]),
    ])
}

pub fn example2_pencil() -> Pencil<Rat> {
    let mut x = Mat::zeros(6, 4);
    x[(0, 0)] = r(1);
    x[(3, 2)] = r(-1);
    let y = int_mat(&[&[0, 1, 0, 0], &[1, 0, 0, 1], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
    Pencil { x, y }
}

/// The printed unimodular `E(λ)` and `F(λ)`.
pub fn example2_witnesses() -> (MatPoly<Rat>, MatPoly<Rat>) {
    let z = up(&[]);
    let one = up(&[1]);
    let lam = up(&[0, 1]);
    let e_rows = [
        [0, 0, 1, 2, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
    ];
    // code 2 stands for λ
    let e: PolyMat<Rat> = Mat::from_fn(6, 6, |i, j| match e_rows[i][j] {
        0 => z.clone(),
        1 => one.clone(),
        _ => lam.clone(),
    });
    let f: PolyMat<Rat> = Mat::from_rows(vec![
        vec![up(&[]), up(&[1]), up(&[]), up(&[])],
        vec![up(&[]), up(&[0, -1]), up(&[]), up(&[1])],
        vec![up(&[-1]), up(&[]), up(&[]), up(&[])],
        vec![up(&[]), up(&[-1]), up(&[1]), up(&[])],
    ]);
    (from_poly_matrix(&e), from_poly_matrix(&f))
}

pub fn example3_poly() -> MatPoly<Rat> {
    MatPoly::from_coeffs(vec![
        int_mat(&[&[1, 7], &[2, 5], &[4, 19]]),
        int_mat(&[&[3, 4], &[9, 2], &[15, 10]]),
        int_mat(&[&[1, 2], &[2, 5], &[4, 9]]),
    ])
}

pub fn example3_pencil() -> Pencil<Rat> {
    Pencil {
        x: int_mat(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[0, 0, 0, 0], &[1, 2, 0, 0], &[2, 5, 0, 0], &[4, 9, 0, 0]]),
        y: int_mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[3, 4, 1, 7], &[9, 2, 2, 5], &[15, 10, 4, 19]]),
    }
}

pub fn example3_d() -> Mat<Rat> {
    int_mat(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, -2, -1, 1],
    ])
}

pub fn example3_lt() -> Pencil<Rat> {
    Pencil {
        x: int_mat(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 2, 0, 0], &[2, 5, 0, 0], &[0, 0, 0, 0]]),
        y: int_mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[3, 4, 1, 7], &[9, 2, 2, 5], &[0, 0, 0, 0]]),
    }
}

fn member(l: &Pencil<Rat>, p: &MatPoly<Rat>, tol: Tol) -> Result<Option<Vec<Rat>>> {
    Ok(match ansatz_membership(l, p, Side::L1, tol)? {
        Membership::Member(v) => Some(v),
        _ => None,
    })
}

fn show(v: &[Rat]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

pub fn example1() -> Result<ExampleReport> {
    let t0 = Stopwatch::start();
    let tol = Tol::default();
    let mut b = Builder::new();
    let p = example1_poly();
    let l = example1_pencil();
    let v = member(&l, &p, tol)?;
    b.check("member of L1 with v = e1", v.as_deref() == Some(&[r(1), r(0)][..]), ansatz_text(v.as_deref()));
    let al = AnsatzPencil { pencil: l.clone(), side: Side::L1, ansatz: vec![r(1), r(0)], m: 3, n: 2, k: 2 };
    let zr = z_rank(&al, tol)?;
    b.check("Z-rank is 1", zr == 1, format!("z_rank = {zr}"));
    let mut swapped = l.clone();
    swapped.x.swap_rows(1, 4);
    swapped.y.swap_rows(1, 4);
    let c1g = companion_c1g(&p)?.pencil;
    b.check("swapping rows 2 and 5 gives C1g", swapped == c1g, "exact equality");
    let g = check_g_linearization(&l, &p, false)?;
    b.check("g-linearization", g.holds, verdict_text(&g));
    let s = check_g_linearization(&l, &p, true)?;
    b.check("strong g-linearization", s.holds, verdict_text(&s));
    Ok(ExampleReport {
        example: 1,
        title: "rank-deficient Z, still a strong g-linearization".into(),
        checks: b.checks,
        objects: json!({
            "P": poly_to_json(&p),
            "L": pencil_to_json(&l),
            "z_rank": zr,
            "strong_verdict": s,
        }),
        elapsed_ms: t0.ms(),
    })
}

pub fn example2() -> Result<ExampleReport> {
    let t0 = Stopwatch::start();
    let tol = Tol::default();
    let mut b = Builder::new();
    let p = example2_poly();
    let l = example2_pencil();
    let v = member(&l, &p, tol)?;
    b.check("member of L1", v.is_some(), v.as_deref().map(show).unwrap_or_else(|| "not a member".into()));
    let (e, f) = example2_witnesses();
    let elf = e.mul(&l.to_poly())?.mul(&f)?;
    let target = glin_target(&p);
    b.check("E·L·F = diag(P, I_{3,2})", elf.same_poly(&target), "symbolic identity");
    let de = constant_det(&e);
    let df = constant_det(&f);
    b.check(
        "det E, det F nonzero constants",
        de.is_some() && df.is_some(),
        format!("det E = {}, det F = {}", opt_text(de), opt_text(df)),
    );
    let g = check_g_linearization(&l, &p, false)?;
    b.check("g-linearization", g.holds, verdict_text(&g));
    let s = check_g_linearization(&l, &p, true)?;
    b.check(
        "not strong: infinite eigenvalue mismatch",
        !s.holds && s.reason.as_deref() == Some("infinite eigenvalue mismatch"),
        verdict_text(&s),
    );
    let es_p = complete_eigenstructure(&p, tol)?;
    let es_l = complete_eigenstructure(&l.to_poly(), tol)?;
    b.check(
        "L has an infinite eigenvalue, P does not",
        es_l.has_infinite() && !es_p.has_infinite(),
        format!("L infinite {:?}, P infinite {:?}", es_l.infinite, es_p.infinite),
    );
    b.check(
        "P: nrank 1, right {1}, left {0, 1}",
        es_p.nrank == 1 && es_p.right_indices == [1] && es_p.left_indices == [0, 1] && es_p.finite.is_empty(),
        format!("nrank {}, right {:?}, left {:?}", es_p.nrank, es_p.right_indices, es_p.left_indices),
    );
    Ok(ExampleReport {
        example: 2,
        title: "g-linearization that is not strong".into(),
        checks: b.checks,
        objects: json!({
            "P": poly_to_json(&p),
            "L": pencil_to_json(&l),
            "ansatz": v.as_deref().map(vector_to_json),
            "E": poly_to_json(&e),
            "F": poly_to_json(&f),
            "strong_verdict": s,
        }),
        elapsed_ms: t0.ms(),
    })
}

pub fn example3() -> Result<ExampleReport> {
    let t0 = Stopwatch::start();
    let tol = Tol::default();
    let mut b = Builder::new();
    let p = example3_poly();
    let lhat = example3_pencil();
    let v = member(&lhat, &p, tol)?;
    b.check("member of L1 with v = e2", v.as_deref() == Some(&[r(0), r(1)][..]), ansatz_text(v.as_deref()));
    let al = AnsatzPencil { pencil: lhat.clone(), side: Side::L1, ansatz: vec![r(0), r(1)], m: 3, n: 2, k: 2 };
    let (m_mat, alpha) = reflector_for(&al.ansatz)?;
    let swap: Mat<Rat> = int_mat(&[&[0, 1], &[1, 0]]);
    b.check("M is the 2×2 swap, α = 1", m_mat == swap && alpha == r(1), format!("alpha = {alpha}"));
    let ml = lhat.left_mul(&m_mat.kron(&Mat::identity(3)));
    let x_printed: Mat<Rat> =
        int_mat(&[&[1, 2, 0, 0], &[2, 5, 0, 0], &[4, 9, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1], &[0, 0, 0, 0]]);
    b.check("(M⊗I)X̂ matches the display", ml.x == x_printed, "exact equality");
    // The display shows 12 at position (2,2) of (M⊗I)Ŷ; the product gives 2.
    let y_row = ml.y.row(1).to_vec();
    b.check(
        "(M⊗I)Ŷ row 2 is [9, 2, 2, 5]",
        y_row == [r(9), r(2), r(2), r(5)],
        format!("computed {}; the display shows 12 in column 2", show(&y_row)),
    );
    let z = z_block(&al, &m_mat, &alpha, tol)?;
    let z_printed: Mat<Rat> = int_mat(&[&[1, 0], &[0, 1], &[0, 0]]);
    b.check("Z = [[1,0],[0,1],[0,0]]", z == z_printed, "exact equality");
    let d = example3_d();
    let tr = trim(&al, Some(&d), tol)?;
    let q2_row =
        Mat::hstack(&[&Mat::zeros(1, 3), &tr.q2.transpose()]).matmul(&m_mat.transpose().kron(&Mat::identity(3)));
    b.check(
        "[0 Q2*](Mᵀ⊗I) = e3ᵀ",
        q2_row == Mat::from_rows(vec![vec![r(0), r(0), r(1), r(0), r(0), r(0)]]),
        format!("[{}]", q2_row.row(0).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
    );
    let stacked = Mat::vstack(&[&d, &q2_row]);
    b.check("[D; 0 Q2*(Mᵀ⊗I)] is nonsingular", Rat::rank(&stacked, tol) == 6, "rank 6");
    let lt_printed = example3_lt();
    b.check("L_t equals the printed 5×4 pencil", tr.lt == lt_printed, "exact equality");
    let s = check_linearization(&tr.lt, &p, true)?;
    b.check("L_t is a strong linearization", s.holds, verdict_text(&s));
    Ok(ExampleReport {
        example: 3,
        title: "trimming a full-Z-rank member of L1 for a 3×2 quadratic".into(),
        checks: b.checks,
        objects: json!({
            "P": poly_to_json(&p),
            "L": pencil_to_json(&lhat),
            "M": mat_to_json(&m_mat),
            "Z": mat_to_json(&z),
            "D": mat_to_json(&d),
            "L_t": pencil_to_json(&tr.lt),
            "strong_verdict": s,
        }),
        elapsed_ms: t0.ms(),
    })
}

pub fn run_example(id: u8) -> Result<ExampleReport> {
    match id {
        1 => example1(),
        2 => example2(),
        3 => example3(),
        other => Err(crate::error::Error::Invalid(format!("no example {other}; choose 1, 2 or 3"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_pass() {
        for id in 1..=3 {
            let rep = run_example(id).unwrap();
            assert!(rep.passed(), "example {id}: {:?}", rep.failures());
        }
    }
}
