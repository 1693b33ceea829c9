//! Seed-driven property checks shared by the proptest suite and the acceptance run.
#![allow(dead_code)]

use glinear::eigen::complete_eigenstructure;
use glinear::matpoly::MatPoly;
use glinear::minimal::{lift_left, minimal_basis, project_ansatz, vec_degree, BasisSide};
use glinear::random::{self, int_member, int_poly, planted_singular};
use glinear::reduction::{full_z_rank, trim};
use glinear::smith::{smith_form, verify_smith};
use glinear::spaces::{ansatz_membership, ansatz_residual, coefficient_row, companion_c1g, Membership, Side};
use glinear::{Rat, Scalar, Tol};
use num_traits::Zero;
use rand::Rng;

pub type Check = Result<(), String>;

fn t() -> Tol {
    Tol::default()
}

fn shape(rng: &mut impl Rng) -> (usize, usize, usize) {
    (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(2..=3))
}

fn side(rng: &mut impl Rng) -> Side {
    if rng.random_bool(0.5) {
        Side::L1
    } else {
        Side::L2
    }
}

/// `L(Λ_k ⊗ I_n) = v ⊗ P` (or the `L2` analogue) for constructed members.
pub fn ansatz_identity(seed: u64) -> Check {
    let mut rng = random::rng(seed, 0);
    let (m, n, k) = shape(&mut rng);
    let p = int_poly::<Rat, _>(&mut rng, m, n, k, 4);
    let s = side(&mut rng);
    let l = int_member(&mut rng, &p, s, 4).map_err(|e| e.to_string())?;
    let r = ansatz_residual(&l, &p).map_err(|e| e.to_string())?;
    if r.is_zero() {
        Ok(())
    } else {
        Err(format!("nonzero residual for {m}x{n} grade {k}"))
    }
}

/// Shifted-sum membership returns the ansatz vector of a member, and rejects
/// a single-entry perturbation whenever `P` has two or more nonzero coefficient entries.
pub fn shifted_sum_equivalence(seed: u64) -> Check {
    let mut rng = random::rng(seed, 0);
    let (m, n, k) = shape(&mut rng);
    let p = int_poly::<Rat, _>(&mut rng, m, n, k, 3);
    let s = side(&mut rng);
    let l = int_member(&mut rng, &p, s, 3).map_err(|e| e.to_string())?;
    match ansatz_membership(&l.pencil, &p, s, t()).map_err(|e| e.to_string())? {
        Membership::Member(v) if v == l.ansatz => {}
        other => return Err(format!("member not recognised: {other:?}")),
    }
    let nonzero = coefficient_row(&p).data().iter().filter(|x| !x.is_zero()).count();
    let mut pert = l.pencil.clone();
    let (i, j) = (rng.random_range(0..pert.rows()), rng.random_range(0..pert.cols()));
    pert.y[(i, j)] = pert.y[(i, j)].clone() + Rat::from_i64(1);
    let got = ansatz_membership(&pert, &p, s, t()).map_err(|e| e.to_string())?;
    if nonzero >= 2 && got != Membership::NotMember {
        return Err("perturbed pencil accepted".into());
    }
    Ok(())
}

/// Left null vectors of `P` lift to left null vectors of `L` of the same degree
/// and project back onto themselves.
pub fn lift_project_round_trip(seed: u64) -> Check {
    let mut rng = random::rng(seed, 0);
    let n = rng.random_range(1..=2);
    let m = n + rng.random_range(1..=2);
    let k = rng.random_range(2..=3);
    let p = int_poly::<Rat, _>(&mut rng, m, n, k, 3);
    let mut l = int_member(&mut rng, &p, Side::L1, 3).map_err(|e| e.to_string())?;
    if !full_z_rank(&l, t()).map_err(|e| e.to_string())? {
        l = companion_c1g(&p).map_err(|e| e.to_string())?;
    }
    let tr = trim(&l, None, t()).map_err(|e| e.to_string())?;
    let lp = l.pencil.to_poly();
    let basis = minimal_basis(&p, BasisSide::Left, t()).map_err(|e| e.to_string())?;
    for q in &basis.vectors {
        let y = lift_left(q, &tr, &p, t()).map_err(|e| e.to_string())?;
        if vec_degree(&y) != vec_degree(q) {
            return Err("degree changed by lifting".into());
        }
        if !lp.transpose().mul(&y).map_err(|e| e.to_string())?.is_zero() {
            return Err("lift is not a left null vector of L".into());
        }
        let back = project_ansatz(&l.ansatz, &y, m).map_err(|e| e.to_string())?;
        if !back.same_poly(&q.trimmed()) {
            return Err("projection does not return the original vector".into());
        }
    }
    Ok(())
}

/// `U·P·V = S`, constant nonzero `det U`, `det V`, and the divisibility chain.
pub fn smith_certificate(seed: u64) -> Check {
    let mut rng = random::rng(seed, 0);
    let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let g = rng.random_range(1..=2);
    let mut p = int_poly::<Rat, _>(&mut rng, m, n, g, 2);
    if rng.random_bool(0.3) {
        // force a rank drop
        let a = int_poly::<Rat, _>(&mut rng, m, 1, 1, 2);
        let b = int_poly::<Rat, _>(&mut rng, 1, n, g.saturating_sub(1), 2);
        p = a.mul(&b).map_err(|e| e.to_string())?;
    }
    let sf = smith_form(&p).map_err(|e| e.to_string())?;
    verify_smith(&p, &sf).map_err(|e| e.to_string())
}

/// Degree sum of finite and infinite elementary divisors plus minimal indices
/// equals `grade · nrank` for pencils.
pub fn index_sum_consistency(seed: u64) -> Check {
    let mut rng = random::rng(seed, 0);
    let p: MatPoly<Rat> = if rng.random_bool(0.5) {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
        int_poly(&mut rng, m, n, 1, 2)
    } else {
        let n = rng.random_range(2..=3);
        let m = n + rng.random_range(0..=1);
        planted_singular(&mut rng, m, n, 1, Side::L1, 2).map_err(|e| e.to_string())?.poly
    };
    let es = complete_eigenstructure(&p, t()).map_err(|e| e.to_string())?;
    if es.index_sum_consistent() {
        Ok(())
    } else {
        Err(format!("index sum {} != {}", es.index_sum(), es.grade * es.nrank))
    }
}
