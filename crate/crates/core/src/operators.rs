//! Dense matrix realizations of the deformed boson algebra and the bilinear
//! algebras built from it.
//!
//! All operators live on one [`TruncatedBasis`]; states pushed past the box
//! are annihilated. Relation checks therefore score residuals only on an
//! interior subspace whose margin covers the total per-mode shift of the
//! expression being tested (budget 2 for quadratic relations, 4 for the
//! closure of the ten bilinears).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{jm_to_modes, modes_to_jm, AngularLabel, TruncatedBasis, TwoModeState};
use crate::error::{Error, Result};
use crate::qnum::{q_number, QParam, Scalar};

/// Which of the two boson modes an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plus,
    Minus,
}

impl Mode {
    fn occupation(&self, s: TwoModeState) -> u32 {
        match self {
            Mode::Plus => s.n1,
            Mode::Minus => s.n2,
        }
    }

    fn shifted(&self, s: TwoModeState, by: i32) -> Option<TwoModeState> {
        let n = self.occupation(s) as i32 + by;
        if n < 0 {
            return None;
        }
        Some(match self {
            Mode::Plus => TwoModeState {
                n1: n as u32,
                n2: s.n2,
            },
            Mode::Minus => TwoModeState {
                n1: s.n1,
                n2: n as u32,
            },
        })
    }

    fn label(&self) -> &'static str {
        match self {
            Mode::Plus => "+",
            Mode::Minus => "-",
        }
    }
}

/// A named dense operator over a shared truncated basis.
#[derive(Debug, Clone)]
pub struct LabeledOperator {
    name: String,
    basis: Arc<TruncatedBasis>,
    matrix: DMatrix<Complex64>,
}

impl LabeledOperator {
    fn new(
        name: impl Into<String>,
        basis: &Arc<TruncatedBasis>,
        matrix: DMatrix<Complex64>,
    ) -> Self {
        LabeledOperator {
            name: name.into(),
            basis: Arc::clone(basis),
            matrix,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.matrix[(row, col)]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LabeledOperator {
        LabeledOperator::new(
            format!("{}^+", self.name),
            &self.basis,
            self.matrix.adjoint(),
        )
    }

    fn same_basis(&self, other: &LabeledOperator) -> Result<()> {
        if self.basis.n_max() != other.basis.n_max() {
            return Err(Error::BasisMismatch {
                left: self.basis.n_max() as usize,
                right: other.basis.n_max() as usize,
            });
        }
        Ok(())
    }
}

/// `[A, B] = AB - BA`; both operators must share a basis.
pub fn commutator(a: &LabeledOperator, b: &LabeledOperator) -> Result<LabeledOperator> {
    a.same_basis(b)?;
    let m = &a.matrix * &b.matrix - &b.matrix * &a.matrix;
    Ok(LabeledOperator::new(
        format!("[{}, {}]", a.name, b.name),
        &a.basis,
        m,
    ))
}

/// Largest entry modulus of `a - b` over the whole box.
pub fn max_abs_difference(a: &LabeledOperator, b: &LabeledOperator) -> Result<f64> {
    a.same_basis(b)?;
    Ok(max_abs(&(&a.matrix - &b.matrix)))
}

/// Largest entry modulus of `a - b` over the interior rows and columns.
pub fn max_interior_difference(
    a: &LabeledOperator,
    b: &LabeledOperator,
    budget: u32,
) -> Result<f64> {
    a.same_basis(b)?;
    let interior = a.basis.interior_indices(budget);
    Ok(interior_max(&(&a.matrix - &b.matrix), &interior))
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn interior_max(m: &DMatrix<Complex64>, interior: &[usize]) -> f64 {
    let mut worst = 0.0_f64;
    for &r in interior {
        for &c in interior {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

/// Residual of an identity written as `sum of terms = 0`, scaled by the
/// largest interior entry among the terms (so it reads as units of rounding
/// in the dominant term, independent of how large the brackets grow).
fn relation_residual(terms: &[DMatrix<Complex64>], interior: &[usize]) -> f64 {
    let mut sum = terms[0].clone();
    for t in &terms[1..] {
        sum += t;
    }
    let scale = terms
        .iter()
        .map(|t| interior_max(t, interior))
        .fold(1.0_f64, f64::max);
    interior_max(&sum, interior) / scale
}

fn require_real(q: &QParam) -> Result<f64> {
    q.real_value()?;
    // Matrix elements are sqrt brackets; evaluate at the canonical q >= 1 so
    // parameters related by q -> 1/q produce identical matrices.
    Ok(q.canonical().re)
}

fn sqrt_bracket(n: u32, q: &QParam) -> Result<f64> {
    let b = q_number(n as f64, q)?.re;
    debug_assert!(
        b >= 0.0,
        "brackets of non-negative integers are non-negative for real q"
    );
    Ok(b.sqrt())
}

/// Annihilator of one mode: `a |n> = sqrt([n]) |n-1>`.
pub fn lowering_operator(
    basis: &Arc<TruncatedBasis>,
    mode: Mode,
    q: &QParam,
) -> Result<LabeledOperator> {
    require_real(q)?;
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, &s) in basis.states().iter().enumerate() {
        let n = mode.occupation(s);
        if n == 0 {
            continue;
        }
        let target = mode.shifted(s, -1).expect("n >= 1");
        let row = basis
            .index_of(target)
            .expect("lowering stays inside the box");
        m[(row, col)] = Complex64::new(sqrt_bracket(n, q)?, 0.0);
    }
    Ok(LabeledOperator::new(format!("a{}", mode.label()), basis, m))
}

/// Creator of one mode: `a^+ |n> = sqrt([n+1]) |n+1>`; the top state of the
/// box is annihilated.
pub fn raising_operator(
    basis: &Arc<TruncatedBasis>,
    mode: Mode,
    q: &QParam,
) -> Result<LabeledOperator> {
    require_real(q)?;
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, &s) in basis.states().iter().enumerate() {
        let Some(target) = mode.shifted(s, 1) else {
            continue;
        };
        let Some(row) = basis.index_of(target) else {
            continue;
        };
        m[(row, col)] = Complex64::new(sqrt_bracket(mode.occupation(s) + 1, q)?, 0.0);
    }
    Ok(LabeledOperator::new(
        format!("a{}^+", mode.label()),
        basis,
        m,
    ))
}

/// Undeformed number operator of one mode (diagonal `n`).
pub fn number_operator(basis: &Arc<TruncatedBasis>, mode: Mode) -> LabeledOperator {
    let diag: Vec<Complex64> = basis
        .states()
        .iter()
        .map(|&s| Complex64::new(mode.occupation(s) as f64, 0.0))
        .collect();
    LabeledOperator::new(
        format!("N{}", mode.label()),
        basis,
        DMatrix::from_diagonal(&DVector::from_vec(diag)),
    )
}

/// Diagonal operator of brackets `[f(n1, n2)]` for a per-state eigenvalue.
pub fn bracket_diagonal_operator(
    basis: &Arc<TruncatedBasis>,
    name: impl Into<String>,
    q: &QParam,
    eigenvalue: impl Fn(TwoModeState) -> f64,
) -> Result<LabeledOperator> {
    let mut diag = Vec::with_capacity(basis.dim());
    for &s in basis.states() {
        diag.push(q_number(eigenvalue(s), q)?);
    }
    Ok(LabeledOperator::new(
        name,
        basis,
        DMatrix::from_diagonal(&DVector::from_vec(diag)),
    ))
}

fn plain_diagonal(
    basis: &Arc<TruncatedBasis>,
    name: impl Into<String>,
    eigenvalue: impl Fn(TwoModeState) -> f64,
) -> LabeledOperator {
    let diag: Vec<Complex64> = basis
        .states()
        .iter()
        .map(|&s| Complex64::new(eigenvalue(s), 0.0))
        .collect();
    LabeledOperator::new(
        name,
        basis,
        DMatrix::from_diagonal(&DVector::from_vec(diag)),
    )
}

fn bilinear(
    name: &str,
    basis: &Arc<TruncatedBasis>,
    left: &LabeledOperator,
    right: &LabeledOperator,
    sign: f64,
) -> LabeledOperator {
    LabeledOperator::new(
        name,
        basis,
        (&left.matrix * &right.matrix) * Complex64::new(sign, 0.0),
    )
}

/// The angular-momentum triple built from mode bilinears:
/// `J- = a-^+ a+`, `J3 = (N1 - N2)/2`, `J+ = a+^+ a-`.
#[derive(Debug, Clone)]
pub struct Su2Generators {
    pub minus: LabeledOperator,
    pub three: LabeledOperator,
    pub plus: LabeledOperator,
}

pub fn su2_generators(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<Su2Generators> {
    let ap = lowering_operator(basis, Mode::Plus, q)?;
    let am = lowering_operator(basis, Mode::Minus, q)?;
    let apd = raising_operator(basis, Mode::Plus, q)?;
    let amd = raising_operator(basis, Mode::Minus, q)?;
    Ok(Su2Generators {
        minus: bilinear("J-", basis, &amd, &ap, 1.0),
        three: plain_diagonal(basis, "J3", |s| (s.n1 as f64 - s.n2 as f64) / 2.0),
        plus: bilinear("J+", basis, &apd, &am, 1.0),
    })
}

/// Same triple from its action on `|j m>` labels:
/// `J± |j m> = sqrt([j ∓ m][j ± m + 1]) |j, m ± 1>`.
pub fn su2_generators_from_action(
    basis: &Arc<TruncatedBasis>,
    q: &QParam,
) -> Result<Su2Generators> {
    require_real(q)?;
    let dim = basis.dim();
    let mut plus = DMatrix::zeros(dim, dim);
    let mut minus = DMatrix::zeros(dim, dim);
    for (col, &s) in basis.states().iter().enumerate() {
        let AngularLabel { two_j, two_m } = modes_to_jm(s);
        // J+: amplitude sqrt([j - m][j + m + 1])
        if two_m < two_j as i32 {
            let target = jm_to_modes(AngularLabel {
                two_j,
                two_m: two_m + 2,
            })?;
            if let Some(row) = basis.index_of(target) {
                let jmm = ((two_j as i32 - two_m) / 2) as u32;
                let jpm1 = ((two_j as i32 + two_m) / 2) as u32 + 1;
                plus[(row, col)] =
                    Complex64::new(sqrt_bracket(jmm, q)? * sqrt_bracket(jpm1, q)?, 0.0);
            }
        }
        // J-: amplitude sqrt([j + m][j - m + 1])
        if -two_m < two_j as i32 {
            let target = jm_to_modes(AngularLabel {
                two_j,
                two_m: two_m - 2,
            })?;
            if let Some(row) = basis.index_of(target) {
                let jpm = ((two_j as i32 + two_m) / 2) as u32;
                let jmm1 = ((two_j as i32 - two_m) / 2) as u32 + 1;
                minus[(row, col)] =
                    Complex64::new(sqrt_bracket(jpm, q)? * sqrt_bracket(jmm1, q)?, 0.0);
            }
        }
    }
    Ok(Su2Generators {
        minus: LabeledOperator::new("J-", basis, minus),
        three: plain_diagonal(basis, "J3", |s| (s.n1 as f64 - s.n2 as f64) / 2.0),
        plus: LabeledOperator::new("J+", basis, plus),
    })
}

/// The non-compact triple: `K- = a+ a-`, `K3 = (N1 + N2 + 1)/2`,
/// `K+ = a+^+ a-^+`.
#[derive(Debug, Clone)]
pub struct Su11Generators {
    pub minus: LabeledOperator,
    pub three: LabeledOperator,
    pub plus: LabeledOperator,
}

pub fn su11_generators(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<Su11Generators> {
    let ap = lowering_operator(basis, Mode::Plus, q)?;
    let am = lowering_operator(basis, Mode::Minus, q)?;
    let apd = raising_operator(basis, Mode::Plus, q)?;
    let amd = raising_operator(basis, Mode::Minus, q)?;
    Ok(Su11Generators {
        minus: bilinear("K-", basis, &ap, &am, 1.0),
        three: plain_diagonal(basis, "K3", |s| (s.n1 as f64 + s.n2 as f64 + 1.0) / 2.0),
        plus: bilinear("K+", basis, &apd, &amd, 1.0),
    })
}

/// Same triple from its action on `|j m>` labels: `K± |j m> =
/// sqrt([j ∓ m (+1)][j ± m (+1)]) |j ± 1, m>` (upper signs shown for K+).
pub fn su11_generators_from_action(
    basis: &Arc<TruncatedBasis>,
    q: &QParam,
) -> Result<Su11Generators> {
    require_real(q)?;
    let dim = basis.dim();
    let mut plus = DMatrix::zeros(dim, dim);
    let mut minus = DMatrix::zeros(dim, dim);
    for (col, &s) in basis.states().iter().enumerate() {
        let AngularLabel { two_j, two_m } = modes_to_jm(s);
        // K+: amplitude sqrt([j - m + 1][j + m + 1]), j -> j + 1
        {
            let target = jm_to_modes(AngularLabel {
                two_j: two_j + 2,
                two_m,
            })?;
            if let Some(row) = basis.index_of(target) {
                let a = ((two_j as i32 - two_m) / 2) as u32 + 1;
                let b = ((two_j as i32 + two_m) / 2) as u32 + 1;
                plus[(row, col)] = Complex64::new(sqrt_bracket(a, q)? * sqrt_bracket(b, q)?, 0.0);
            }
        }
        // K-: amplitude sqrt([j - m][j + m]), j -> j - 1
        if two_j >= 2 && two_m.unsigned_abs() <= two_j - 2 {
            let target = jm_to_modes(AngularLabel {
                two_j: two_j - 2,
                two_m,
            })?;
            if let Some(row) = basis.index_of(target) {
                let a = ((two_j as i32 - two_m) / 2) as u32;
                let b = ((two_j as i32 + two_m) / 2) as u32;
                minus[(row, col)] = Complex64::new(sqrt_bracket(a, q)? * sqrt_bracket(b, q)?, 0.0);
            }
        }
    }
    Ok(Su11Generators {
        minus: LabeledOperator::new("K-", basis, minus),
        three: plain_diagonal(basis, "K3", |s| (s.n1 as f64 + s.n2 as f64 + 1.0) / 2.0),
        plus: LabeledOperator::new("K+", basis, plus),
    })
}

/// The four single-mode quadratic shifts that move by one unit of j and m at
/// once; together with the two triples they span a ten-generator family.
///
/// Naming: `up_up` raises both j and m (`-a+^+ a+^+`), `up_down` raises j and
/// lowers m (`a-^+ a-^+`), `down_down` lowers both (`-a+ a+`), `down_up`
/// lowers j and raises m (`a- a-`).
#[derive(Debug, Clone)]
pub struct ShiftBilinears {
    pub up_up: LabeledOperator,
    pub up_down: LabeledOperator,
    pub down_down: LabeledOperator,
    pub down_up: LabeledOperator,
}

pub fn shift_bilinears(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<ShiftBilinears> {
    let ap = lowering_operator(basis, Mode::Plus, q)?;
    let am = lowering_operator(basis, Mode::Minus, q)?;
    let apd = raising_operator(basis, Mode::Plus, q)?;
    let amd = raising_operator(basis, Mode::Minus, q)?;
    Ok(ShiftBilinears {
        up_up: bilinear("k[j+,m+]", basis, &apd, &apd, -1.0),
        up_down: bilinear("k[j+,m-]", basis, &amd, &amd, 1.0),
        down_down: bilinear("k[j-,m-]", basis, &ap, &ap, -1.0),
        down_up: bilinear("k[j-,m+]", basis, &am, &am, 1.0),
    })
}

/// Casimir of the compact triple, arranged so its eigenvalue on a complete
/// block is `[j][j+1]`:
/// `J^2 = (J+ J- + J- J+)/2 + ([2]/2) [J3]^2`.
pub fn su2_casimir(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<LabeledOperator> {
    let gens = su2_generators(basis, q)?;
    let bracket_j3 =
        bracket_diagonal_operator(basis, "[J3]", q, |s| (s.n1 as f64 - s.n2 as f64) / 2.0)?;
    let two = q_number(2.0, q)?;
    let half = Complex64::new(0.5, 0.0);
    let m = (&gens.plus.matrix * &gens.minus.matrix + &gens.minus.matrix * &gens.plus.matrix)
        * half
        + (&bracket_j3.matrix * &bracket_j3.matrix) * (two * half);
    Ok(LabeledOperator::new("J^2", basis, m))
}

/// Numerical score of one family of operator identities.
///
/// `max_interior_residual` is scaled by the largest matrix element entering
/// each identity, so it stays near machine epsilon for any `n_max` and `q`
/// even when the brackets themselves grow to 1e7 and beyond.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RelationReport {
    pub relation_name: String,
    pub max_interior_residual: f64,
    pub interior_dimension: usize,
    pub q_used: QParam,
}

/// Per-mode `a a^+ - q^-1 a^+ a = q^N` plus vanishing of the four cross-mode
/// commutators, scored on the interior with shift budget 2.
pub fn check_qboson_relations(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<RelationReport> {
    let qc = require_real(q)?;
    let interior = basis.interior_indices(2);
    let mut worst = 0.0_f64;

    let lop = lowering_operator(basis, Mode::Plus, q)?;
    let lom = lowering_operator(basis, Mode::Minus, q)?;
    let rap = raising_operator(basis, Mode::Plus, q)?;
    let ram = raising_operator(basis, Mode::Minus, q)?;

    for (low, raise, mode) in [(&lop, &rap, Mode::Plus), (&lom, &ram, Mode::Minus)] {
        let q_to_n = plain_diagonal(basis, "q^N", |s| qc.powi(mode.occupation(s) as i32));
        let terms = [
            &low.matrix * &raise.matrix,
            (&raise.matrix * &low.matrix) * Complex64::new(-1.0 / qc, 0.0),
            -&q_to_n.matrix,
        ];
        worst = worst.max(relation_residual(&terms, &interior));
    }

    for (x, y) in [(&lop, &lom), (&lop, &ram), (&rap, &lom), (&rap, &ram)] {
        let terms = [&x.matrix * &y.matrix, -(&y.matrix * &x.matrix)];
        worst = worst.max(relation_residual(&terms, &interior));
    }

    Ok(RelationReport {
        relation_name: "q-boson".into(),
        max_interior_residual: worst,
        interior_dimension: interior.len(),
        q_used: *q,
    })
}

/// `[J3, J±] = ±J±` and `[J+, J-] = [2 J3]`, scored on the interior with
/// shift budget 2.
pub fn check_su2_relations(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<RelationReport> {
    let gens = su2_generators(basis, q)?;
    let interior = basis.interior_indices(2);
    let mut worst = 0.0_f64;

    for (ladder, sign) in [(&gens.plus, -1.0), (&gens.minus, 1.0)] {
        let terms = [
            &gens.three.matrix * &ladder.matrix,
            -(&ladder.matrix * &gens.three.matrix),
            &ladder.matrix * Complex64::from(sign),
        ];
        worst = worst.max(relation_residual(&terms, &interior));
    }

    let bracket_two_j3 =
        bracket_diagonal_operator(basis, "[2 J3]", q, |s| s.n1 as f64 - s.n2 as f64)?;
    let terms = [
        &gens.plus.matrix * &gens.minus.matrix,
        -(&gens.minus.matrix * &gens.plus.matrix),
        -&bracket_two_j3.matrix,
    ];
    worst = worst.max(relation_residual(&terms, &interior));

    Ok(RelationReport {
        relation_name: "su_q(2)".into(),
        max_interior_residual: worst,
        interior_dimension: interior.len(),
        q_used: *q,
    })
}

/// `[K3, K±] = ±K±` and `[K+, K-] = -[2 K3]`, scored on the interior with
/// shift budget 2.
pub fn check_su11_relations(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<RelationReport> {
    let gens = su11_generators(basis, q)?;
    let interior = basis.interior_indices(2);
    let mut worst = 0.0_f64;

    for (ladder, sign) in [(&gens.plus, -1.0), (&gens.minus, 1.0)] {
        let terms = [
            &gens.three.matrix * &ladder.matrix,
            -(&ladder.matrix * &gens.three.matrix),
            &ladder.matrix * Complex64::from(sign),
        ];
        worst = worst.max(relation_residual(&terms, &interior));
    }

    let bracket_two_k3 =
        bracket_diagonal_operator(basis, "[2 K3]", q, |s| s.n1 as f64 + s.n2 as f64 + 1.0)?;
    let terms = [
        &gens.plus.matrix * &gens.minus.matrix,
        -(&gens.minus.matrix * &gens.plus.matrix),
        bracket_two_k3.matrix.clone(),
    ];
    worst = worst.max(relation_residual(&terms, &interior));

    Ok(RelationReport {
        relation_name: "su_q(1,1)".into(),
        max_interior_residual: worst,
        interior_dimension: interior.len(),
        q_used: *q,
    })
}

/// Measured vs expected Casimir eigenvalue on one complete j block.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CasimirBlock {
    pub two_j: u32,
    pub eigenvalue: f64,
    pub expected: f64,
    pub max_deviation: f64,
}

/// Reads `J^2` on every complete block `2j <= n_max`; `max_deviation` covers
/// both diagonal drift from `[j][j+1]` and any off-diagonal leakage.
pub fn casimir_block_spectrum(
    basis: &Arc<TruncatedBasis>,
    q: &QParam,
) -> Result<Vec<CasimirBlock>> {
    let j2 = su2_casimir(basis, q)?;
    let mut blocks = Vec::new();
    for two_j in 0..=basis.n_max() {
        let idx = basis.block_indices(two_j);
        let j = two_j as f64 / 2.0;
        let expected = (q_number(j, q)? * q_number(j + 1.0, q)?).re;
        let mut max_deviation = 0.0_f64;
        let mut diag_sum = 0.0_f64;
        for &r in &idx {
            for &c in &idx {
                let want = if r == c { expected } else { 0.0 };
                max_deviation =
                    max_deviation.max((j2.matrix[(r, c)] - Complex64::from(want)).norm());
            }
            diag_sum += j2.matrix[(r, r)].re;
        }
        blocks.push(CasimirBlock {
            two_j,
            eigenvalue: diag_sum / idx.len() as f64,
            expected,
            max_deviation,
        });
    }
    Ok(blocks)
}

/// Max least-squares residual of all pairwise commutators of the ten
/// bilinears (both triples plus the four shifts) projected onto their span
/// (plus the identity), over the interior with shift budget 4.
///
/// At q = 1 the family closes and the residual is float noise; away from 1 it
/// measures how far the commutators leave the span.
pub fn so32_closure_residual(basis: &Arc<TruncatedBasis>, q: &QParam) -> Result<f64> {
    let su2 = su2_generators(basis, q)?;
    let su11 = su11_generators(basis, q)?;
    let shifts = shift_bilinears(basis, q)?;
    let ten = [
        &su2.minus,
        &su2.three,
        &su2.plus,
        &su11.minus,
        &su11.three,
        &su11.plus,
        &shifts.up_up,
        &shifts.up_down,
        &shifts.down_down,
        &shifts.down_up,
    ];

    let interior = basis.interior_indices(4);
    if interior.is_empty() {
        return Err(Error::ParameterDomain(format!(
            "n_max = {} leaves no interior at shift budget 4",
            basis.n_max()
        )));
    }
    let d = interior.len();

    let flatten = |m: &DMatrix<Complex64>| {
        DVector::from_fn(d * d, |k, _| m[(interior[k % d], interior[k / d])])
    };

    // Span matrix: one column per generator, last column the identity.
    let mut span = DMatrix::zeros(d * d, ten.len() + 1);
    for (col, op) in ten.iter().enumerate() {
        span.set_column(col, &flatten(&op.matrix));
    }
    span.set_column(
        ten.len(),
        &flatten(&DMatrix::identity(basis.dim(), basis.dim())),
    );

    let gram = span.ad_mul(&span);
    let gram_lu = gram.lu();

    let mut worst = 0.0_f64;
    for i in 0..ten.len() {
        for j in (i + 1)..ten.len() {
            let comm = commutator(ten[i], ten[j])?;
            let target = flatten(&comm.matrix);
            let rhs = span.ad_mul(&target);
            let coeffs = gram_lu.solve(&rhs).ok_or_else(|| {
                Error::ParameterDomain("generator span is degenerate on this interior".into())
            })?;
            let residual = &target - &span * &coeffs;
            worst = worst.max(residual.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(worst)
}
