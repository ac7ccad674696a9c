//! Virasoro differential operators on the super-Weyl algebra, the string /
//! dilaton / grading operators, exact relation checking with a boundary
//! guard, and the four-variable operators of the elliptic-curve comparison.

use crate::error::{Error, Result};
use crate::rat::{q, qi, Q};
use crate::state_space::StateSpace;
use crate::sympoly::Scalar;
use crate::weyl::{DiffOperator, VarIdx};
use num_traits::Zero;
use serde::Serialize;

/// Rising factorial `(l)_n = l (l+1) ... (l+n-1)`, `(l)_0 = 1`.
pub fn pochhammer(l: &Q, n: u32) -> Q {
    let mut p = Q::from_integer(1.into());
    for i in 0..n {
        p *= l + qi(i as i64);
    }
    p
}

/// The graded data the operator constructions consume: gradings, parities,
/// and the pairing with its inverse. Detached from `StateSpace` so synthetic
/// spaces (the elliptic table) can drive the same machinery.
#[derive(Debug, Clone)]
pub struct OperatorSpace {
    pub mu_plus: Vec<Q>,
    pub parities: Vec<i8>,
    pub eta: Vec<Vec<Q>>,
    pub eta_inv: Vec<Vec<Q>>,
    pub c_hat: Q,
}

impl OperatorSpace {
    pub fn rank(&self) -> usize {
        self.mu_plus.len()
    }

    pub fn from_state_space(s: &StateSpace) -> Self {
        OperatorSpace {
            mu_plus: s.mu_plus(),
            parities: s.parities(),
            eta: s.eta.clone(),
            eta_inv: s.eta_inv.clone(),
            c_hat: s.c_hat.clone(),
        }
    }

    /// Rescale basis vector `i` by `scale[i]` (gradings unchanged, pairing
    /// conjugated).
    pub fn rescaled(&self, scale: &[Q]) -> Self {
        let n = self.rank();
        let mut eta = self.eta.clone();
        let mut eta_inv = self.eta_inv.clone();
        for i in 0..n {
            for j in 0..n {
                eta[i][j] = &self.eta[i][j] * &scale[i] * &scale[j];
                eta_inv[i][j] = &self.eta_inv[i][j] / (&scale[i] * &scale[j]);
            }
        }
        OperatorSpace {
            mu_plus: self.mu_plus.clone(),
            parities: self.parities.clone(),
            eta,
            eta_inv,
            c_hat: self.c_hat.clone(),
        }
    }

    /// The signed supertrace `Str(theta^2 - 1/4)`.
    pub fn supertrace_theta(&self) -> Q {
        self.mu_plus
            .iter()
            .zip(&self.parities)
            .fold(Q::zero(), |acc, (mu, p)| {
                acc + qi(*p as i64) * (mu - q(1, 2)) * (mu + q(1, 2))
            })
    }

    /// The same sum without the parity sign.
    pub fn trace_theta_unsigned(&self) -> Q {
        self.mu_plus.iter().fold(Q::zero(), |acc, mu| {
            acc + (mu - q(1, 2)) * (mu + q(1, 2))
        })
    }
}

/// The Virasoro operator `L_k` truncated at level `M`.
///
/// Five parts: the leading `-((3-c)/2)_{k+1} d/dt_{k+1}^0`; the diagonal
/// `sum (mu+_a + m + 1/2)_{k+1} t_m^a d_{m+k}^a`; the `hbar^2/2` double
/// derivative over `-k <= m <= -1` with `eta^{ab}` and sign `(-1)^m`; the
/// `hbar^{-2}` quadratic at `k = -1`; and the signed supertrace constant at
/// `k = 0`.
pub fn virasoro_operator(space: &OperatorSpace, k: i64, m_max: i64) -> Result<DiffOperator<Q>> {
    if k < -1 {
        return Err(Error::PreconditionNotMet("k >= -1 required".into()));
    }
    if m_max < k + 1 {
        return Err(Error::TruncationTooSmall {
            m: m_max,
            need: k + 1,
        });
    }
    let n = space.rank();
    let kp1 = (k + 1) as u32;
    let mut op = DiffOperator::zero(&space.parities);

    // leading term
    let lead = pochhammer(&((qi(3) - &space.c_hat) / qi(2)), kp1);
    op.add_term(
        vec![],
        vec![VarIdx::new(k + 1, 0)],
        0,
        -lead,
    );

    // diagonal t d part
    for a in 0..n {
        for m in 0..=m_max {
            let target = m + k;
            if !(0..=m_max).contains(&target) {
                continue;
            }
            let c = pochhammer(&(&space.mu_plus[a] + qi(m) + q(1, 2)), kp1);
            op.add_term(
                vec![VarIdx::new(m, a)],
                vec![VarIdx::new(target, a)],
                0,
                c,
            );
        }
    }

    // hbar^2 double-derivative part; the Pochhammer index rides the
    // level-(m+k) slot (the p-side indices of the display carry the dual
    // grading, see the quantization identity)
    for m in -k..=-1 {
        let sign = if m.rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
        for b in 0..n {
            let c = pochhammer(&(&space.mu_plus[b] + qi(m) + q(1, 2)), kp1);
            if c.is_zero() {
                continue;
            }
            for a in 0..n {
                if space.eta_inv[a][b].is_zero() {
                    continue;
                }
                let coeff = q(1, 2) * &sign * &c * &space.eta_inv[a][b];
                op.add_term(
                    vec![],
                    vec![VarIdx::new(-m - 1, a), VarIdx::new(m + k, b)],
                    2,
                    coeff,
                );
            }
        }
    }

    // hbar^{-2} quadratic at k = -1
    if k == -1 {
        for a in 0..n {
            for b in 0..n {
                if space.eta[a][b].is_zero() {
                    continue;
                }
                op.add_term(
                    vec![VarIdx::new(0, a), VarIdx::new(0, b)],
                    vec![],
                    -2,
                    q(1, 2) * &space.eta[a][b],
                );
            }
        }
    }

    // signed supertrace constant at k = 0
    if k == 0 {
        op.add_constant(0, -q(1, 4) * space.supertrace_theta());
    }

    Ok(op)
}

/// The grading operator `sum (m - 1 + mu+_a + c/2) t_m^a d_m^a`.
pub fn grading_operator(space: &OperatorSpace, m_max: i64) -> DiffOperator<Q> {
    let mut op = DiffOperator::zero(&space.parities);
    let half_c = &space.c_hat / qi(2);
    for a in 0..space.rank() {
        for m in 0..=m_max {
            let c = qi(m - 1) + &space.mu_plus[a] + &half_c;
            op.add_term(vec![VarIdx::new(m, a)], vec![VarIdx::new(m, a)], 0, c);
        }
    }
    op
}

/// String operator (`= L_{-1}`) and dilaton operator
/// `-d/dt_1^0 + sum t_m^a d_m^a + hbar d/d hbar + chi/24`.
pub fn string_dilaton_operators(
    space: &OperatorSpace,
    m_max: i64,
    chi: i64,
) -> Result<(DiffOperator<Q>, DiffOperator<Q>)> {
    let string = virasoro_operator(space, -1, m_max)?;
    let mut dilaton = DiffOperator::zero(&space.parities);
    dilaton.add_term(vec![], vec![VarIdx::new(1, 0)], 0, qi(-1));
    for a in 0..space.rank() {
        for m in 0..=m_max {
            dilaton.add_term(vec![VarIdx::new(m, a)], vec![VarIdx::new(m, a)], 0, qi(1));
        }
    }
    dilaton.hbar_euler = qi(1);
    dilaton.add_constant(0, q(chi, 24));
    Ok((string, dilaton))
}

/// One `[L_m, L_n] = (m-n) L_{m+n}` verdict on the guarded window.
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub m: i64,
    pub n: i64,
    pub pass: bool,
    pub guard_level: i64,
}

/// Check all commutators for `-1 <= m, n <= kmax` at truncation `m_max`,
/// discarding terms above level `m_max - (|m| + |n|)` on both sides.
pub fn check_virasoro_relations(
    space: &OperatorSpace,
    kmax: i64,
    m_max: i64,
) -> Result<Vec<RelationCheck>> {
    if m_max < 2 * kmax + 2 {
        return Err(Error::TruncationTooSmall {
            m: m_max,
            need: 2 * kmax + 2,
        });
    }
    let mut ops = std::collections::BTreeMap::new();
    for k in -1..=(2 * kmax) {
        ops.insert(k, virasoro_operator(space, k, m_max)?);
    }
    let mut out = Vec::new();
    for m in -1..=kmax {
        for n in m..=kmax {
            let guard = m_max - (m.abs() + n.abs());
            let lhs = ops[&m].commutator(&ops[&n]).truncate_levels(guard);
            let rhs = if m + n >= -1 {
                ops[&(m + n)].scale_q(&qi(m - n)).truncate_levels(guard)
            } else {
                DiffOperator::zero(&space.parities)
            };
            out.push(RelationCheck {
                m,
                n,
                pass: lhs == rhs,
                guard_level: guard,
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The elliptic four-variable operators
// ---------------------------------------------------------------------------

/// Basis slots of the rank-4 elliptic graded space, in the order
/// `(t^0, t^1, s^0, s^1)` = (identity, point class, odd pair).
pub const ELL_T0: usize = 0;
pub const ELL_T1: usize = 1;
pub const ELL_S0: usize = 2;
pub const ELL_S1: usize = 3;

/// The elliptic-curve graded space: `mu+ = (-1/2, 1/2, 1/2, -1/2)`,
/// parities `(+, +, -, -)`, antidiagonal pairing within each parity block.
pub fn elliptic_space() -> OperatorSpace {
    let one = qi(1);
    let zero = Q::zero();
    let eta = vec![
        vec![zero.clone(), one.clone(), zero.clone(), zero.clone()],
        vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), zero.clone(), one.clone()],
        vec![zero.clone(), zero.clone(), one.clone(), zero.clone()],
    ];
    OperatorSpace {
        mu_plus: vec![q(-1, 2), q(1, 2), q(1, 2), q(-1, 2)],
        parities: vec![1, 1, -1, -1],
        eta_inv: eta.clone(),
        eta,
        c_hat: qi(1),
    }
}

/// `L_k` for the elliptic pair, built from the general construction over the
/// elliptic graded space.
pub fn elliptic_operator(k: i64, m_max: i64) -> Result<DiffOperator<Q>> {
    virasoro_operator(&elliptic_space(), k, m_max)
}

/// Literal transcription of the displayed elliptic Virasoro operator
/// (leading + diagonal parts): used to pin the coefficient pattern
/// `(l)_{k+1}` vs `(l+1)_{k+1}` on the four variable families.
pub fn elliptic_operator_displayed(k: i64, m_max: i64) -> DiffOperator<Q> {
    let space = elliptic_space();
    let mut op = DiffOperator::zero(&space.parities);
    op.add_term(
        vec![],
        vec![VarIdx::new(k + 1, ELL_T0)],
        0,
        -pochhammer(&qi(1), (k + 1) as u32),
    );
    for l in 0..=m_max {
        if !(0..=m_max).contains(&(l + k)) {
            continue;
        }
        let low = pochhammer(&qi(l), (k + 1) as u32);
        let high = pochhammer(&qi(l + 1), (k + 1) as u32);
        for (a, c) in [
            (ELL_T0, &low),
            (ELL_T1, &high),
            (ELL_S0, &high),
            (ELL_S1, &low),
        ] {
            op.add_term(
                vec![VarIdx::new(l, a)],
                vec![VarIdx::new(l + k, a)],
                0,
                c.clone(),
            );
        }
    }
    op
}

/// The additional operators `D_k` and `D-bar_k` on the elliptic space, as
/// generic-scalar operators so a formal parameter can ride along.
pub fn extra_operators<S: Scalar>(k: i64, m_max: i64) -> (DiffOperator<S>, DiffOperator<S>) {
    let parities = elliptic_space().parities;
    let mut d = DiffOperator::zero(&parities);
    let mut dbar = DiffOperator::zero(&parities);
    let fact = pochhammer(&qi(1), (k + 1) as u32);
    d.add_term(
        vec![],
        vec![VarIdx::new(k + 1, ELL_S0)],
        0,
        S::from_q(&-fact.clone()),
    );
    dbar.add_term(
        vec![],
        vec![VarIdx::new(k + 1, ELL_S1)],
        0,
        S::from_q(&-fact),
    );
    for l in 0..=m_max {
        if !(0..=m_max).contains(&(l + k)) {
            continue;
        }
        let low = pochhammer(&qi(l), (k + 1) as u32);
        let high = pochhammer(&qi(l + 1), (k + 1) as u32);
        d.add_term(
            vec![VarIdx::new(l, ELL_T0)],
            vec![VarIdx::new(l + k, ELL_S0)],
            0,
            S::from_q(&low),
        );
        d.add_term(
            vec![VarIdx::new(l, ELL_S1)],
            vec![VarIdx::new(l + k, ELL_T1)],
            0,
            S::from_q(&high),
        );
        dbar.add_term(
            vec![VarIdx::new(l, ELL_T0)],
            vec![VarIdx::new(l + k, ELL_S1)],
            0,
            S::from_q(&low),
        );
        dbar.add_term(
            vec![VarIdx::new(l, ELL_S0)],
            vec![VarIdx::new(l + k, ELL_T1)],
            0,
            S::from_q(&-high),
        );
    }
    (d, dbar)
}
