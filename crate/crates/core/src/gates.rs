//! Two-site interaction unitaries and single-site rotations.
//!
//! A [`Gate2`] acts on an ordered pair `(a, b)` of sites: the row/column
//! index of its 4×4 matrix is `2·bit(a) + bit(b)`. Reversing the pair mirrors
//! the gate, which is how leftward-moving interactions are expressed.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lattice::SiteId;
use crate::state::PureState;

/// Unitarity tolerance for user-supplied matrices.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn max_unitarity_deviation<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            let acc: Complex64 = m.iter().map(|row| row[i].conj() * row[j]).sum();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate2 {
    name: String,
    matrix: [[Complex64; 4]; 4],
}

impl Gate2 {
    /// Validates unitarity to [`UNITARY_TOLERANCE`].
    pub fn new(name: impl Into<String>, matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        let name = name.into();
        let deviation = max_unitarity_deviation(&matrix);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { name, deviation });
        }
        Ok(Gate2 { name, matrix })
    }

    /// Skips the unitarity check. Intended for fault-injection tests.
    pub fn new_unchecked(name: impl Into<String>, matrix: [[Complex64; 4]; 4]) -> Self {
        Gate2 { name: name.into(), matrix }
    }

    fn permutation(name: &str, map: [usize; 4]) -> Self {
        let mut matrix = [[ZERO; 4]; 4];
        for (input, &output) in map.iter().enumerate() {
            matrix[output][input] = ONE;
        }
        Gate2 { name: name.to_string(), matrix }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.matrix
    }

    pub fn unitarity_deviation(&self) -> f64 {
        max_unitarity_deviation(&self.matrix)
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_deviation() <= tolerance
    }

    pub fn is_permutation(&self) -> bool {
        (0..4).all(|col| {
            let ones = (0..4).filter(|&r| self.matrix[r][col] == ONE).count();
            let zeros = (0..4).filter(|&r| self.matrix[r][col] == ZERO).count();
            ones == 1 && zeros == 3
        })
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Gate2) -> Gate2 {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        Gate2 { name: format!("{}·{}", self.name, other.name), matrix: m }
    }

    /// Haar-like random unitary from Gram–Schmidt on complex Gaussian columns.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Gate2 {
        let mut cols = [[ZERO; 4]; 4];
        for c in 0..4 {
            let mut v = [ZERO; 4];
            for x in v.iter_mut() {
                *x = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
            for prev in cols.iter().take(c) {
                let proj: Complex64 = (0..4).map(|k| prev[k].conj() * v[k]).sum();
                for k in 0..4 {
                    v[k] -= proj * prev[k];
                }
            }
            let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in v.iter_mut() {
                *x /= n;
            }
            cols[c] = v;
        }
        let mut matrix = [[ZERO; 4]; 4];
        for (r, row) in matrix.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = cols[c][r];
            }
        }
        Gate2 { name: "random".to_string(), matrix }
    }
}

impl fmt::Display for Gate2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// System–field record gate: a system `|0⟩` flips the neighbouring spin,
/// a system `|1⟩` leaves it alone. Apply as `(system, field)`.
pub fn gate_system_field() -> Gate2 {
    // |0⟩↑ ↔ |0⟩↓, |1⟩s fixed
    Gate2::permutation("U_si", [1, 0, 2, 3])
}

/// Field–field copy gate: a ↓ on the left flips the right spin.
pub fn gate_field_copy() -> Gate2 {
    Gate2::permutation("U_copy", [0, 1, 3, 2])
}

/// Left-right symmetric field gate: exchanges the two spins.
pub fn gate_field_swap() -> Gate2 {
    Gate2::permutation("U_swap", [0, 2, 1, 3])
}

pub fn identity2() -> Gate2 {
    Gate2::permutation("I", [0, 1, 2, 3])
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate1 {
    name: String,
    matrix: [[Complex64; 2]; 2],
}

impl Gate1 {
    pub fn new(name: impl Into<String>, matrix: [[Complex64; 2]; 2]) -> Result<Self> {
        let name = name.into();
        let deviation = max_unitarity_deviation(&matrix);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { name, deviation });
        }
        Ok(Gate1 { name, matrix })
    }

    pub fn identity() -> Self {
        Gate1 { name: "I".into(), matrix: [[ONE, ZERO], [ZERO, ONE]] }
    }

    /// Columns are `(|0⟩ ± |1⟩)/√2`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Gate1 { name: "H".into(), matrix: [[h, h], [h, -h]] }
    }

    /// Real rotation in the Z–X plane. Measuring Z after applying this gate
    /// is equivalent to measuring `cos θ·Z + sin θ·X` before it.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Gate1 {
            name: format!("rot({theta})"),
            matrix: [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)]],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }

    pub fn adjoint(&self) -> Gate1 {
        let m = &self.matrix;
        Gate1 {
            name: format!("{}†", self.name),
            matrix: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        max_unitarity_deviation(&self.matrix)
    }
}

pub fn rotation_gate(theta: f64) -> Gate1 {
    Gate1::rotation(theta)
}

/// A gate resolved from a library name.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedGate {
    Two(Gate2),
    One(Gate1),
}

/// Looks up `"U_si"`, `"U_copy"`, `"U_swap"`, `"I"`, `"H"` or `"rot(θ)"`
/// (θ in radians).
pub fn gate_by_name(name: &str) -> Result<NamedGate> {
    let trimmed = name.trim();
    match trimmed {
        "U_si" => return Ok(NamedGate::Two(gate_system_field())),
        "U_copy" => return Ok(NamedGate::Two(gate_field_copy())),
        "U_swap" => return Ok(NamedGate::Two(gate_field_swap())),
        "I" | "I2" => return Ok(NamedGate::Two(identity2())),
        "I1" => return Ok(NamedGate::One(Gate1::identity())),
        "H" => return Ok(NamedGate::One(Gate1::hadamard())),
        _ => {}
    }
    if let Some(arg) = trimmed.strip_prefix("rot(").and_then(|r| r.strip_suffix(')')) {
        let theta: f64 = arg.trim().parse().map_err(|_| Error::UnknownGate(name.to_string()))?;
        if !theta.is_finite() {
            return Err(Error::UnknownGate(name.to_string()));
        }
        return Ok(NamedGate::One(Gate1::rotation(theta)));
    }
    Err(Error::UnknownGate(name.to_string()))
}

/// `(I ⊗ … ⊗ gate ⊗ … ⊗ I)|state⟩` with the gate's first factor on `pair.0`.
pub fn apply_gate2(state: &PureState, gate: &Gate2, pair: (SiteId, SiteId)) -> Result<PureState> {
    let lattice = state.lattice();
    let pa = lattice.require(pair.0)?;
    let pb = lattice.require(pair.1)?;
    if pa == pb {
        return Err(Error::PairNotDistinct(pair.0));
    }
    let m = gate.matrix();
    let mut out: HashMap<_, Complex64> = HashMap::with_capacity(state.num_terms() * 2);
    for (key, amp) in state.amplitudes() {
        let input = 2 * key.get(pa) as usize + key.get(pb) as usize;
        for (output, row) in m.iter().enumerate() {
            let coeff = row[input];
            if coeff == ZERO {
                continue;
            }
            let mut k = key.clone();
            k.set(pa, (output >> 1) as u8);
            k.set(pb, (output & 1) as u8);
            *out.entry(k).or_default() += coeff * amp;
        }
    }
    Ok(PureState::from_parts(state.lattice_arc().clone(), out.into_iter().collect()))
}

pub fn apply_gate1(state: &PureState, gate: &Gate1, site: SiteId) -> Result<PureState> {
    let p = state.lattice().require(site)?;
    let m = gate.matrix();
    let mut out: HashMap<_, Complex64> = HashMap::with_capacity(state.num_terms() * 2);
    for (key, amp) in state.amplitudes() {
        let input = key.get(p) as usize;
        for (output, row) in m.iter().enumerate() {
            let coeff = row[input];
            if coeff == ZERO {
                continue;
            }
            let mut k = key.clone();
            k.set(p, output as u8);
            *out.entry(k).or_default() += coeff * amp;
        }
    }
    Ok(PureState::from_parts(state.lattice_arc().clone(), out.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pair_state(bits: &str) -> PureState {
        PureState::from_terms(Lattice::with_systems(0, 1, &[0]).unwrap(), &[(bits, c(1.0))]).unwrap()
    }

    fn image(gate: &Gate2, bits: &str) -> String {
        let out = apply_gate2(&pair_state(bits), gate, (SiteId(0), SiteId(1))).unwrap();
        assert_eq!(out.num_terms(), 1);
        out.amplitudes().keys().next().unwrap().to_string()
    }

    #[test]
    fn system_field_gate_table() {
        let g = gate_system_field();
        assert_eq!(image(&g, "00"), "01");
        assert_eq!(image(&g, "01"), "00");
        assert_eq!(image(&g, "10"), "10");
        assert_eq!(image(&g, "11"), "11");
        assert!(g.is_unitary(1e-15));
    }

    #[test]
    fn copy_gate_table_and_involution() {
        let g = gate_field_copy();
        assert_eq!(image(&g, "10"), "11");
        assert_eq!(image(&g, "01"), "01");
        assert_eq!(image(&g, "00"), "00");
        assert_eq!(image(&g, "11"), "10");
        assert_eq!(g.compose(&g).matrix(), identity2().matrix());
    }

    #[test]
    fn swap_gate_table_and_involution() {
        let g = gate_field_swap();
        assert_eq!(image(&g, "10"), "01");
        assert_eq!(image(&g, "01"), "10");
        assert_eq!(image(&g, "00"), "00");
        assert_eq!(g.compose(&g).matrix(), identity2().matrix());
    }

    #[test]
    fn reversed_pair_mirrors_the_gate() {
        // system at the right end acting leftwards
        let g = gate_system_field();
        let out = apply_gate2(&pair_state("10"), &g, (SiteId(1), SiteId(0))).unwrap();
        assert_eq!(out.amplitudes().keys().next().unwrap().to_string(), "00");
        let out = apply_gate2(&pair_state("00"), &g, (SiteId(1), SiteId(0))).unwrap();
        assert_eq!(out.amplitudes().keys().next().unwrap().to_string(), "10");
    }

    #[test]
    fn non_unitary_matrices_are_rejected() {
        let mut m = *identity2().matrix();
        m[0][0] = c(1.1);
        assert!(matches!(Gate2::new("bad", m), Err(Error::NotUnitary { .. })));
        assert!(Gate1::new("bad", [[c(1.0), c(1.0)], [c(0.0), c(1.0)]]).is_err());
    }

    #[test]
    fn apply_errors() {
        let psi = pair_state("00");
        assert!(matches!(
            apply_gate2(&psi, &identity2(), (SiteId(0), SiteId(0))),
            Err(Error::PairNotDistinct(_))
        ));
        assert!(matches!(apply_gate2(&psi, &identity2(), (SiteId(0), SiteId(4))), Err(Error::UnknownSite(_))));
        assert!(matches!(apply_gate1(&psi, &Gate1::identity(), SiteId(-3)), Err(Error::UnknownSite(_))));
    }

    #[test]
    fn identity_leaves_state_bitwise_unchanged() {
        let l = Lattice::with_systems(0, 2, &[0]).unwrap();
        let psi = PureState::from_terms(l, &[("000", c(0.6)), ("101", Complex64::new(0.0, 0.8))]).unwrap();
        assert_eq!(apply_gate2(&psi, &identity2(), (SiteId(1), SiteId(2))).unwrap(), psi);
        assert_eq!(apply_gate1(&psi, &Gate1::identity(), SiteId(0)).unwrap(), psi);
    }

    #[test]
    fn rotation_special_angles() {
        let r0 = Gate1::rotation(0.0);
        assert_eq!(r0.matrix(), Gate1::identity().matrix());
        // half turn swaps |0⟩ and |1⟩ up to sign
        let r = Gate1::rotation(PI);
        assert!(r.matrix()[0][0].norm() < 1e-15 && r.matrix()[1][1].norm() < 1e-15);
        assert!((r.matrix()[0][1].norm() - 1.0).abs() < 1e-15);
        assert!((r.matrix()[1][0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_turn_maps_plus_state_to_definite_outcome() {
        let l = Lattice::with_systems(0, 0, &[0]).unwrap();
        let plus = PureState::from_terms(l.clone(), &[("0", c(1.0)), ("1", c(1.0))]).unwrap();
        let out = apply_gate1(&plus, &Gate1::rotation(PI / 2.0), SiteId(0)).unwrap();
        assert_eq!(out.num_terms(), 1);
        assert!((out.amplitude(&"0".parse().unwrap()).norm() - 1.0).abs() < 1e-12);

        let zero = PureState::from_terms(l, &[("0", c(1.0))]).unwrap();
        let out = apply_gate1(&zero, &Gate1::rotation(PI / 2.0), SiteId(0)).unwrap();
        assert_eq!(out.num_terms(), 2);
        for a in out.amplitudes().values() {
            assert!((a.norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_then_inverse_is_identity() {
        let l = Lattice::with_systems(0, 1, &[0]).unwrap();
        let psi = PureState::from_terms(l, &[("00", c(0.6)), ("11", Complex64::new(0.0, 0.8))]).unwrap();
        let a = apply_gate1(&psi, &Gate1::rotation(0.37), SiteId(1)).unwrap();
        let b = apply_gate1(&a, &Gate1::rotation(-0.37), SiteId(1)).unwrap();
        assert!((psi.overlap(&b).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(b.num_terms(), 2);
    }

    #[test]
    fn named_gates_resolve() {
        assert!(matches!(gate_by_name("U_si"), Ok(NamedGate::Two(g)) if g == gate_system_field()));
        assert!(matches!(gate_by_name("U_swap"), Ok(NamedGate::Two(_))));
        match gate_by_name("rot(1.5707963267948966)").unwrap() {
            NamedGate::One(g) => assert!((g.matrix()[0][1].re - FRAC_1_SQRT_2).abs() < 1e-15),
            _ => panic!("expected single-site gate"),
        }
        assert!(matches!(gate_by_name("U_foo"), Err(Error::UnknownGate(_))));
        assert!(matches!(gate_by_name("rot(abc)"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn random_gates_are_unitary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert!(Gate2::random(&mut rng).is_unitary(1e-12));
        }
    }
}
