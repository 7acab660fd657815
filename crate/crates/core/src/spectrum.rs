//! The two deformed discrete spectra, as dimensionless ratios `E/E0`.
//!
//! The first model deforms the angular-momentum content of the Pauli
//! treatment: `E_j/E0 = 1/(4[j][j+1] + 1)` with degeneracy `(2j+1)^2`. The
//! second goes through the four-oscillator (Kustaanheimo-Stiefel) picture:
//! shell `n` carries all quadruples with `n1+n2+n3+n4 = 2n-2`, and
//! `E/E0 = 16/nu^2` with `nu = sum_i ([n_i] + [n_i+1])`. Both collapse to
//! `1/n^2` at q = 1; away from it the oscillator shells split.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qnum::{q_number, QParam, Scalar};

/// Relative spread of `nu` values collected into one level.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-9;

/// One level of the deformed Pauli model.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliLevel {
    pub two_j: u32,
    pub energy_ratio: f64,
    pub degeneracy: u64,
}

/// `E_j/E0 = 1/(4[j][j+1] + 1)`; equals `1/(2j+1)^2` at q = 1.
pub fn pauli_energy_ratio(two_j: u32, q: &QParam) -> Result<f64> {
    q.real_value()?;
    let j = two_j as f64 / 2.0;
    let jj1 = (q_number(j, q)? * q_number(j + 1.0, q)?).re;
    Ok(1.0 / (4.0 * jj1 + 1.0))
}

/// Levels for `2j = 0..=two_j_max`, ordered by increasing j (decreasing
/// binding). Degeneracy is `(2j+1)^2`.
pub fn pauli_spectrum(two_j_max: u32, q: &QParam) -> Result<Vec<PauliLevel>> {
    (0..=two_j_max)
        .map(|two_j| {
            Ok(PauliLevel {
                two_j,
                energy_ratio: pauli_energy_ratio(two_j, q)?,
                degeneracy: (two_j as u64 + 1) * (two_j as u64 + 1),
            })
        })
        .collect()
}

/// Occupations of the four oscillator modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct KSQuadruple(pub [u32; 4]);

impl KSQuadruple {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Shell number n with `sum n_i = 2n - 2`; `None` for odd totals.
    pub fn shell(&self) -> Option<u32> {
        let t = self.total();
        (t % 2 == 0).then_some(t / 2 + 1)
    }

    /// Occupations sorted descending: the pattern that decides which levels
    /// merge and what they look like in reports.
    pub fn pattern(&self) -> [u32; 4] {
        let mut p = self.0;
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }
}

/// `nu = sum_i ([n_i] + [n_i + 1])`; equals `4n` on shell n at q = 1.
pub fn ks_nu(quad: &KSQuadruple, q: &QParam) -> Result<f64> {
    q.real_value()?;
    let mut nu = 0.0;
    for &n in &quad.0 {
        nu += (q_number(n as f64, q)? + q_number(n as f64 + 1.0, q)?).re;
    }
    Ok(nu)
}

/// `E/E0 = 16/nu^2` for a single quadruple.
pub fn ks_energy_ratio(quad: &KSQuadruple, q: &QParam) -> Result<f64> {
    let nu = ks_nu(quad, q)?;
    Ok(16.0 / (nu * nu))
}

/// One degenerate group of quadruples on a shell.
#[derive(Debug, Clone, PartialEq)]
pub struct KSLevel {
    pub shell: u32,
    pub nu: f64,
    pub energy_ratio: f64,
    /// Members, lexicographically descending.
    pub members: Vec<KSQuadruple>,
    pub oscillator_multiplicity: u64,
    /// Hydrogen-state count carried by the level; only the ground shell and
    /// the first excited shell have an assignment.
    pub physical_multiplicity: Option<u64>,
}

impl KSLevel {
    /// Distinct occupation patterns present, descending.
    pub fn patterns(&self) -> Vec<[u32; 4]> {
        let mut pats: Vec<[u32; 4]> = self.members.iter().map(|m| m.pattern()).collect();
        pats.sort_unstable_by(|a, b| b.cmp(a));
        pats.dedup();
        pats
    }
}

fn physical_multiplicity(shell_n: u32, patterns: &[[u32; 4]]) -> Option<u64> {
    match shell_n {
        1 => Some(1),
        2 => Some(
            patterns
                .iter()
                .map(|p| match p {
                    [2, 0, 0, 0] => 2, // one s and one p state
                    [1, 1, 0, 0] => 2, // the two remaining p states
                    _ => 0,
                })
                .sum(),
        ),
        _ => None,
    }
}

/// All levels of one oscillator shell, grouped by `nu` within
/// `grouping_tol * nu` (relative) and ordered by decreasing binding
/// (ascending `nu`).
pub fn ks_shell_levels(shell_n: u32, q: &QParam, grouping_tol: f64) -> Result<Vec<KSLevel>> {
    if shell_n == 0 {
        return Err(Error::ParameterDomain("shells are numbered from 1".into()));
    }
    if !grouping_tol.is_finite() || grouping_tol < 0.0 {
        return Err(Error::ParameterDomain(format!(
            "grouping tolerance must be finite and >= 0, got {grouping_tol}"
        )));
    }
    let total = 2 * shell_n - 2;

    let mut quads = Vec::new();
    for a in 0..=total {
        for b in 0..=(total - a) {
            for c in 0..=(total - a - b) {
                let d = total - a - b - c;
                let quad = KSQuadruple([a, b, c, d]);
                quads.push((ks_nu(&quad, q)?, quad));
            }
        }
    }
    // Ascending nu; ties broken by the quadruple itself so grouping and
    // member order are reproducible.
    quads.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));

    let mut levels: Vec<KSLevel> = Vec::new();
    let mut start = 0;
    while start < quads.len() {
        let nu_ref = quads[start].0;
        let mut end = start + 1;
        while end < quads.len() && (quads[end].0 - nu_ref).abs() <= grouping_tol * nu_ref {
            end += 1;
        }
        let mut members: Vec<KSQuadruple> = quads[start..end].iter().map(|x| x.1).collect();
        members.sort_unstable_by(|a, b| b.cmp(a));
        let level = KSLevel {
            shell: shell_n,
            nu: nu_ref,
            energy_ratio: 16.0 / (nu_ref * nu_ref),
            oscillator_multiplicity: members.len() as u64,
            physical_multiplicity: None,
            members,
        };
        let phys = physical_multiplicity(shell_n, &level.patterns());
        levels.push(KSLevel {
            physical_multiplicity: phys,
            ..level
        });
        start = end;
    }
    Ok(levels)
}

/// A first-excited-shell eigenstate expressed over four oscillator kets.
#[derive(Debug, Clone)]
pub struct DoubletMember {
    /// Hydrogen labels (n, l, m).
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub coefficients: [Scalar; 4],
}

/// One of the two split levels with its oscillator expansion basis.
#[derive(Debug, Clone)]
pub struct DoubletLevel {
    pub pattern: [u32; 4],
    pub basis: [KSQuadruple; 4],
    pub members: Vec<DoubletMember>,
}

/// The explicit content of the first excited shell: which hydrogen states
/// ride on which oscillator level, with a common normalization.
#[derive(Debug, Clone)]
pub struct DoubletTable {
    pub normalization: f64,
    pub levels: [DoubletLevel; 2],
}

impl DoubletTable {
    /// Inner product of two members of one level (the oscillator kets are
    /// orthonormal, so it is the normalized coefficient overlap).
    pub fn overlap(&self, level: usize, a: usize, b: usize) -> Scalar {
        let lv = &self.levels[level];
        let n2 = Complex64::new(self.normalization * self.normalization, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            sum += lv.members[a].coefficients[k].conj() * lv.members[b].coefficients[k];
        }
        sum * n2
    }
}

/// The fixed expansion of the four n = 2 hydrogen states over the first
/// excited oscillator shell.
pub fn doublet_table() -> DoubletTable {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    DoubletTable {
        normalization: 0.5,
        levels: [
            DoubletLevel {
                pattern: [2, 0, 0, 0],
                basis: [
                    KSQuadruple([2, 0, 0, 0]),
                    KSQuadruple([0, 2, 0, 0]),
                    KSQuadruple([0, 0, 2, 0]),
                    KSQuadruple([0, 0, 0, 2]),
                ],
                members: vec![
                    DoubletMember {
                        n: 2,
                        l: 0,
                        m: 0,
                        coefficients: [one, one, one, one],
                    },
                    DoubletMember {
                        n: 2,
                        l: 1,
                        m: 0,
                        coefficients: [one, one, -one, -one],
                    },
                ],
            },
            DoubletLevel {
                pattern: [1, 1, 0, 0],
                basis: [
                    KSQuadruple([1, 0, 1, 0]),
                    KSQuadruple([0, 1, 0, 1]),
                    KSQuadruple([1, 0, 0, 1]),
                    KSQuadruple([0, 1, 1, 0]),
                ],
                members: vec![
                    DoubletMember {
                        n: 2,
                        l: 1,
                        m: 1,
                        coefficients: [one, -one, i, -i],
                    },
                    DoubletMember {
                        n: 2,
                        l: 1,
                        m: -1,
                        coefficients: [one, -one, -i, i],
                    },
                ],
            },
        ],
    }
}

/// A rendered, unit-attached table of levels: what the command line emits.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectrumTable {
    pub model: String,
    pub q: f64,
    pub unit: String,
    pub z: u32,
    pub mass: String,
    pub levels: Vec<SpectrumRow>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectrumRow {
    pub label: String,
    pub energy: f64,
    pub multiplicity: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub physical_multiplicity: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<KSQuadruple>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qr(q: f64) -> QParam {
        QParam::real(q).unwrap()
    }

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn pauli_reduces_to_inverse_squares() {
        let one = QParam::one();
        for level in pauli_spectrum(19, &one).unwrap() {
            let n = level.two_j as f64 + 1.0;
            assert!((level.energy_ratio - 1.0 / (n * n)).abs() < 1e-15);
            assert_eq!(level.degeneracy, (level.two_j as u64 + 1).pow(2));
        }
    }

    #[test]
    fn pauli_binding_decreases_with_j() {
        for q in [0.8, 1.0, 1.2] {
            let levels = pauli_spectrum(12, &qr(q)).unwrap();
            for w in levels.windows(2) {
                assert!(w[1].energy_ratio < w[0].energy_ratio);
            }
        }
    }

    #[test]
    fn pauli_frozen_value_near_one() {
        let r = pauli_energy_ratio(1, &qr(1.004)).unwrap();
        assert_relative_eq!(r, 0.2499997509972560, max_relative = 1e-12);
    }

    #[test]
    fn pauli_agrees_with_integer_bracket_route() {
        use crate::qnum::q_integer;
        let q = qr(2.0);
        for two_j in [0u32, 2, 4, 6] {
            let j = (two_j / 2) as i64;
            let jj1 = (q_integer(j, &q).unwrap() * q_integer(j + 1, &q).unwrap()).re;
            let expected = 1.0 / (4.0 * jj1 + 1.0);
            assert_relative_eq!(
                pauli_energy_ratio(two_j, &q).unwrap(),
                expected,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn spectra_require_real_parameters() {
        let circle = QParam::unit_circle(1.1).unwrap();
        assert!(pauli_energy_ratio(2, &circle).is_err());
        assert!(ks_nu(&KSQuadruple([1, 0, 0, 0]), &circle).is_err());
    }

    #[test]
    fn nu_hand_values() {
        assert_eq!(ks_nu(&KSQuadruple([0, 0, 0, 0]), &qr(1.7)).unwrap(), 4.0);
        assert_eq!(
            ks_nu(&KSQuadruple([2, 0, 0, 0]), &QParam::one()).unwrap(),
            8.0
        );
        assert_relative_eq!(
            ks_nu(&KSQuadruple([1, 1, 0, 0]), &qr(1.5)).unwrap(),
            25.0 / 3.0,
            epsilon = 1e-14
        );
        assert_eq!(
            ks_energy_ratio(&KSQuadruple([0, 0, 0, 0]), &qr(1.3)).unwrap(),
            1.0
        );
    }

    #[test]
    fn shells_merge_undeformed() {
        let one = QParam::one();
        for n in 1..=10u32 {
            let levels = ks_shell_levels(n, &one, DEFAULT_GROUPING_TOL).unwrap();
            assert_eq!(levels.len(), 1, "shell {n}");
            let level = &levels[0];
            assert!((level.energy_ratio - 1.0 / (n as f64 * n as f64)).abs() < 1e-15);
            assert_eq!(
                level.oscillator_multiplicity,
                binomial(2 * n as u64 + 1, 3),
                "shell {n}"
            );
        }
    }

    #[test]
    fn first_excited_shell_splits_into_the_two_expected_levels() {
        let q = qr(1.1);
        let levels = ks_shell_levels(2, &q, DEFAULT_GROUPING_TOL).unwrap();
        assert_eq!(levels.len(), 2);

        // Deeper level: the pair-excited pattern, 6 members.
        assert_eq!(levels[0].patterns(), vec![[1, 1, 0, 0]]);
        assert_eq!(levels[0].oscillator_multiplicity, 6);
        assert_eq!(levels[0].physical_multiplicity, Some(2));
        assert_relative_eq!(
            levels[0].energy_ratio,
            0.24886749862454430,
            max_relative = 1e-12
        );

        assert_eq!(levels[1].patterns(), vec![[2, 0, 0, 0]]);
        assert_eq!(levels[1].oscillator_multiplicity, 4);
        assert_eq!(levels[1].physical_multiplicity, Some(2));
        assert_relative_eq!(
            levels[1].energy_ratio,
            0.24717804291251465,
            max_relative = 1e-12
        );

        // Cross-check against the closed forms in terms of brackets.
        let two = q_number(2.0, &q).unwrap().re;
        let three = q_number(3.0, &q).unwrap().re;
        assert_relative_eq!(
            levels[1].energy_ratio,
            16.0 / (two + three + 3.0).powi(2),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            levels[0].energy_ratio,
            4.0 / (two + 2.0).powi(2),
            epsilon = 1e-15
        );
        assert!(levels[0].energy_ratio > levels[1].energy_ratio);
    }

    #[test]
    fn merged_first_excited_shell_keeps_all_ten_members() {
        let levels = ks_shell_levels(2, &QParam::one(), DEFAULT_GROUPING_TOL).unwrap();
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0].oscillator_multiplicity, 10);
        assert_eq!(levels[0].physical_multiplicity, Some(4));
        let pats = levels[0].patterns();
        assert_eq!(pats, vec![[2, 0, 0, 0], [1, 1, 0, 0]]);
    }

    #[test]
    fn ground_shell() {
        let levels = ks_shell_levels(1, &qr(1.3), DEFAULT_GROUPING_TOL).unwrap();
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0].members, vec![KSQuadruple([0, 0, 0, 0])]);
        assert_eq!(levels[0].energy_ratio, 1.0);
        assert_eq!(levels[0].physical_multiplicity, Some(1));
    }

    #[test]
    fn higher_shells_group_consistently() {
        for (n, q) in [(3u32, 1.05f64), (4, 1.2), (5, 0.9)] {
            let levels = ks_shell_levels(n, &qr(q), DEFAULT_GROUPING_TOL).unwrap();
            let total: u64 = levels.iter().map(|l| l.oscillator_multiplicity).sum();
            assert_eq!(total, binomial(2 * n as u64 + 1, 3));
            for level in &levels {
                assert!(level.physical_multiplicity.is_none());
                assert!(!level.members.is_empty());
                for m in &level.members {
                    assert_eq!(m.shell(), Some(n));
                    assert_relative_eq!(ks_nu(m, &qr(q)).unwrap(), level.nu, max_relative = 1e-9);
                }
            }
            for w in levels.windows(2) {
                assert!(w[0].nu < w[1].nu);
                assert!(w[0].energy_ratio > w[1].energy_ratio);
            }
        }
    }

    #[test]
    fn shell_zero_rejected() {
        assert!(ks_shell_levels(0, &QParam::one(), DEFAULT_GROUPING_TOL).is_err());
    }

    #[test]
    fn spectra_invariant_under_parameter_inversion() {
        for q in [1.1f64, 1.5, 2.0] {
            let a = pauli_spectrum(8, &qr(q)).unwrap();
            let b = pauli_spectrum(8, &qr(1.0 / q)).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_relative_eq!(x.energy_ratio, y.energy_ratio, max_relative = 1e-12);
            }
            let a = ks_shell_levels(3, &qr(q), DEFAULT_GROUPING_TOL).unwrap();
            let b = ks_shell_levels(3, &qr(1.0 / q), DEFAULT_GROUPING_TOL).unwrap();
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert_relative_eq!(x.energy_ratio, y.energy_ratio, max_relative = 1e-12);
                assert_eq!(x.members, y.members);
            }
        }
    }

    #[test]
    fn doublet_members_are_orthonormal() {
        let table = doublet_table();
        assert_eq!(table.normalization, 0.5);
        for level in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let want = if a == b { 1.0 } else { 0.0 };
                    let got = table.overlap(level, a, b);
                    assert!((got - Complex64::new(want, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn doublet_structure_matches_the_shell_split() {
        let table = doublet_table();
        // expansion bases are disjoint and drawn from the matching patterns
        for level in &table.levels {
            for ket in &level.basis {
                assert_eq!(ket.pattern(), level.pattern);
                assert_eq!(ket.shell(), Some(2));
            }
        }
        let labels: Vec<(u32, u32, i32)> = table
            .levels
            .iter()
            .flat_map(|l| l.members.iter().map(|m| (m.n, m.l, m.m)))
            .collect();
        assert_eq!(labels, vec![(2, 0, 0), (2, 1, 0), (2, 1, 1), (2, 1, -1)]);
        // the m = ±1 pair really uses complex combinations
        assert!(table.levels[1].members[0].coefficients[2].im != 0.0);
    }
}
