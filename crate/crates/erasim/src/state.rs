//! Sparse pure states over labeled occupation modes.
//!
//! A state is a map from basis configurations (one hard-core 0/1 occupation
//! per labeled mode) to complex amplitudes. Everything downstream — optics,
//! measurement, protocol branches — works on these values. States are
//! immutable; every operation returns a fresh state.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Complex amplitude attached to a basis configuration.
pub type Amplitude = Complex64;

/// Amplitudes with magnitude below this are dropped after each operation.
/// Below double-precision noise; keeps term maps sparse after cancellations.
pub const PRUNE_TOLERANCE: f64 = 1e-15;

/// Tolerance used when an operation checks unit norm.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Identifier for an occupation mode, e.g. `g0`, `Gamma0`, `ptr_D1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel(String);

impl ModeLabel {
    /// Validates the identifier against `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn new(name: &str) -> Result<Self> {
        let mut chars = name.chars();
        let head_ok = chars
            .next()
            .map(|c| c.is_ascii_alphabetic() || c == '_')
            .unwrap_or(false);
        if head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(ModeLabel(name.to_owned()))
        } else {
            Err(SimError::InvalidModeName(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Total assignment of 0/1 occupations to a mode set.
///
/// Ordering is lexicographic by mode name, then by occupation bits, which is
/// what makes all printed output and JSON byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisConfig(BTreeMap<ModeLabel, bool>);

impl BasisConfig {
    pub fn new(entries: impl IntoIterator<Item = (ModeLabel, bool)>) -> Self {
        BasisConfig(entries.into_iter().collect())
    }

    pub fn modes(&self) -> impl Iterator<Item = &ModeLabel> {
        self.0.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ModeLabel, bool)> {
        self.0.iter().map(|(m, &v)| (m, v))
    }

    pub fn occupation(&self, mode: &ModeLabel) -> Option<bool> {
        self.0.get(mode).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Functional update of a single occupation.
    pub fn with(&self, mode: &ModeLabel, value: bool) -> Self {
        let mut map = self.0.clone();
        map.insert(mode.clone(), value);
        BasisConfig(map)
    }

    /// Restriction to a subset of modes.
    pub fn restrict(&self, modes: &[ModeLabel]) -> Self {
        BasisConfig(
            modes
                .iter()
                .filter_map(|m| self.0.get(m).map(|&v| (m.clone(), v)))
                .collect(),
        )
    }

    /// Renames modes according to `map`; modes not in the map keep their name.
    pub fn rename(&self, map: &BTreeMap<ModeLabel, ModeLabel>) -> Self {
        BasisConfig(
            self.0
                .iter()
                .map(|(m, &v)| (map.get(m).cloned().unwrap_or_else(|| m.clone()), v))
                .collect(),
        )
    }

    fn covers(&self, modes: &BTreeSet<ModeLabel>) -> bool {
        self.0.len() == modes.len() && self.0.keys().all(|m| modes.contains(m))
    }
}

impl fmt::Display for BasisConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", m, if *v { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Sparse pure state: basis configurations with complex amplitudes over a
/// fixed mode set. Not necessarily normalized; post-selection and collapse
/// bookkeeping legitimately produce sub-normalized states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    modes: BTreeSet<ModeLabel>,
    terms: BTreeMap<BasisConfig, Amplitude>,
    norm_sq: f64,
}

impl PureState {
    /// Single-term unit state fixing every mode of `modes` per `config`.
    pub fn basis_state(
        modes: impl IntoIterator<Item = ModeLabel>,
        config: BasisConfig,
    ) -> Result<Self> {
        let modes: BTreeSet<ModeLabel> = modes.into_iter().collect();
        if !config.covers(&modes) {
            return Err(SimError::ConfigurationMismatch(format!(
                "basis config `{config}` does not cover the mode set exactly"
            )));
        }
        let mut terms = BTreeMap::new();
        terms.insert(config, Amplitude::new(1.0, 0.0));
        Ok(PureState {
            modes,
            terms,
            norm_sq: 1.0,
        })
    }

    /// Builds a (not auto-normalized) superposition; duplicate configs sum.
    pub fn superpose(terms: impl IntoIterator<Item = (BasisConfig, Amplitude)>) -> Result<Self> {
        Self::superpose_with_tolerance(terms, PRUNE_TOLERANCE)
    }

    /// As [`superpose`](Self::superpose) with an explicit pruning tolerance
    /// on amplitude magnitude.
    pub fn superpose_with_tolerance(
        terms: impl IntoIterator<Item = (BasisConfig, Amplitude)>,
        prune_tolerance: f64,
    ) -> Result<Self> {
        let mut iter = terms.into_iter();
        let (first_config, first_amp) = iter.next().ok_or_else(|| {
            SimError::ConfigurationMismatch("superpose needs at least one term".into())
        })?;
        let modes: BTreeSet<ModeLabel> = first_config.modes().cloned().collect();
        let mut map: BTreeMap<BasisConfig, Amplitude> = BTreeMap::new();
        for (config, amp) in std::iter::once((first_config, first_amp)).chain(iter) {
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(SimError::NonFiniteAmplitude);
            }
            if !config.covers(&modes) {
                return Err(SimError::ConfigurationMismatch(format!(
                    "term `{config}` does not share the mode set of the first term"
                )));
            }
            *map.entry(config).or_insert(Amplitude::new(0.0, 0.0)) += amp;
        }
        Ok(Self::from_term_map(modes, map, prune_tolerance))
    }

    /// Internal constructor: prunes tiny amplitudes and caches the norm.
    pub(crate) fn from_term_map(
        modes: BTreeSet<ModeLabel>,
        mut terms: BTreeMap<BasisConfig, Amplitude>,
        prune_tolerance: f64,
    ) -> Self {
        terms.retain(|_, amp| amp.norm() >= prune_tolerance);
        let norm_sq = terms.values().map(|a| a.norm_sqr()).sum();
        PureState {
            modes,
            terms,
            norm_sq,
        }
    }

    pub fn modes(&self) -> &BTreeSet<ModeLabel> {
        &self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisConfig, &Amplitude)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn amplitude(&self, config: &BasisConfig) -> Amplitude {
        self.terms
            .get(config)
            .copied()
            .unwrap_or_else(|| Amplitude::new(0.0, 0.0))
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The zero vector on `modes`, used as the empty-state sentinel after a
    /// probability-zero collapse.
    pub fn zero(modes: BTreeSet<ModeLabel>) -> Self {
        PureState {
            modes,
            terms: BTreeMap::new(),
            norm_sq: 0.0,
        }
    }

    /// ⟨self|other⟩, conjugating `self`.
    pub fn inner_product(&self, other: &PureState) -> Result<Amplitude> {
        if self.modes != other.modes {
            return Err(SimError::ConfigurationMismatch(
                "inner product of states over different mode sets".into(),
            ));
        }
        // iterate the smaller term map
        let (small, big, conj_small) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms, true)
        } else {
            (&other.terms, &self.terms, false)
        };
        let mut acc = Amplitude::new(0.0, 0.0);
        for (config, amp) in small {
            if let Some(other_amp) = big.get(config) {
                acc += if conj_small {
                    amp.conj() * other_amp
                } else {
                    other_amp.conj() * amp
                };
            }
        }
        Ok(acc)
    }

    /// Tensor product with a state over a disjoint mode set.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        if let Some(shared) = self.modes.intersection(&other.modes).next() {
            return Err(SimError::LabelCollision(format!(
                "mode `{shared}` appears in both tensor factors"
            )));
        }
        let modes: BTreeSet<ModeLabel> = self.modes.union(&other.modes).cloned().collect();
        let mut terms = BTreeMap::new();
        for (ca, aa) in &self.terms {
            for (cb, ab) in &other.terms {
                let joined =
                    BasisConfig(ca.0.iter().chain(cb.0.iter()).map(|(m, &v)| (m.clone(), v)).collect());
                terms.insert(joined, aa * ab);
            }
        }
        Ok(Self::from_term_map(modes, terms, PRUNE_TOLERANCE))
    }

    /// Unit-norm copy; the zero vector has no direction to keep.
    pub fn normalized(&self) -> Result<Self> {
        if self.norm_sq <= 0.0 || self.terms.is_empty() {
            return Err(SimError::UndefinedState);
        }
        let inv = 1.0 / self.norm();
        let terms = self
            .terms
            .iter()
            .map(|(c, a)| (c.clone(), a * inv))
            .collect();
        Ok(PureState {
            modes: self.modes.clone(),
            terms,
            norm_sq: 1.0,
        })
    }

    /// Scales every amplitude by `factor`.
    pub fn scaled(&self, factor: Amplitude) -> Self {
        let terms: BTreeMap<BasisConfig, Amplitude> = self
            .terms
            .iter()
            .map(|(c, a)| (c.clone(), a * factor))
            .collect();
        Self::from_term_map(self.modes.clone(), terms, PRUNE_TOLERANCE)
    }

    /// Fidelity |⟨a|b⟩|² between two unit states.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (config, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:+.6}{:+.6}i)|{}>", amp.re, amp.im, config)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn m(name: &str) -> ModeLabel {
        ModeLabel::new(name).unwrap()
    }

    fn cfg(pairs: &[(&str, bool)]) -> BasisConfig {
        BasisConfig::new(pairs.iter().map(|(n, v)| (m(n), *v)))
    }

    #[test]
    fn mode_label_validation() {
        assert!(ModeLabel::new("g0").is_ok());
        assert!(ModeLabel::new("_ptr_D1").is_ok());
        assert!(ModeLabel::new("").is_err());
        assert!(ModeLabel::new("0g").is_err());
        assert!(ModeLabel::new("a-b").is_err());
    }

    #[test]
    fn basis_state_single_term() {
        let s = PureState::basis_state(
            [m("g0"), m("g1")],
            cfg(&[("g0", true), ("g1", false)]),
        )
        .unwrap();
        assert_eq!(s.term_count(), 1);
        assert!((s.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn basis_state_vacuum() {
        let s = PureState::basis_state([m("g0")], cfg(&[("g0", false)])).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn basis_state_rejects_mismatched_config() {
        let err = PureState::basis_state([m("g0"), m("g1")], cfg(&[("g0", true)])).unwrap_err();
        assert!(matches!(err, SimError::ConfigurationMismatch(_)));
    }

    #[test]
    fn superpose_two_orthogonal_terms_is_unit() {
        let s = PureState::superpose([
            (cfg(&[("g0", true), ("g1", false)]), Amplitude::new(FRAC_1_SQRT_2, 0.0)),
            (cfg(&[("g0", false), ("g1", true)]), Amplitude::new(FRAC_1_SQRT_2, 0.0)),
        ])
        .unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-14);
        assert_eq!(s.term_count(), 2);
    }

    #[test]
    fn superpose_cancellation_gives_zero_state() {
        let c = cfg(&[("g0", true), ("g1", false)]);
        let s = PureState::superpose([
            (c.clone(), Amplitude::new(FRAC_1_SQRT_2, 0.0)),
            (c, Amplitude::new(-FRAC_1_SQRT_2, 0.0)),
        ])
        .unwrap();
        assert!(s.is_zero());
        assert_eq!(s.norm_sq(), 0.0);
    }

    #[test]
    fn superpose_rejects_inconsistent_mode_sets() {
        let err = PureState::superpose([
            (cfg(&[("g0", true), ("g1", false)]), Amplitude::new(1.0, 0.0)),
            (cfg(&[("g0", false)]), Amplitude::new(1.0, 0.0)),
        ])
        .unwrap_err();
        assert!(matches!(err, SimError::ConfigurationMismatch(_)));
    }

    #[test]
    fn superpose_rejects_non_finite() {
        let err = PureState::superpose([(
            cfg(&[("g0", true)]),
            Amplitude::new(f64::NAN, 0.0),
        )])
        .unwrap_err();
        assert_eq!(err, SimError::NonFiniteAmplitude);
    }

    #[test]
    fn path_entangled_input_is_unit_with_two_terms() {
        // (1/sqrt2)(|g0 G0> + |g1 G1>)
        let s = PureState::superpose([
            (
                cfg(&[("g0", true), ("g1", false), ("G0", true), ("G1", false)]),
                Amplitude::new(FRAC_1_SQRT_2, 0.0),
            ),
            (
                cfg(&[("g0", false), ("g1", true), ("G0", false), ("G1", true)]),
                Amplitude::new(FRAC_1_SQRT_2, 0.0),
            ),
        ])
        .unwrap();
        assert_eq!(s.term_count(), 2);
        assert!((s.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inner_product_self_is_one() {
        let s = PureState::superpose([
            (cfg(&[("t", true), ("r", false)]), Amplitude::new(FRAC_1_SQRT_2, 0.0)),
            (cfg(&[("t", false), ("r", true)]), Amplitude::new(0.0, FRAC_1_SQRT_2)),
        ])
        .unwrap();
        let ip = s.inner_product(&s).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-12 && ip.im.abs() < 1e-12);
    }

    #[test]
    fn inner_product_orthogonal_terms() {
        let a = PureState::basis_state(
            [m("g0"), m("g1")],
            cfg(&[("g0", true), ("g1", false)]),
        )
        .unwrap();
        let b = PureState::basis_state(
            [m("g0"), m("g1")],
            cfg(&[("g0", false), ("g1", true)]),
        )
        .unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), Amplitude::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_conjugates_left() {
        // <(|t>+i|r>)/sqrt2 , |r>> = -i/sqrt2
        let left = PureState::superpose([
            (cfg(&[("t", true), ("r", false)]), Amplitude::new(FRAC_1_SQRT_2, 0.0)),
            (cfg(&[("t", false), ("r", true)]), Amplitude::new(0.0, FRAC_1_SQRT_2)),
        ])
        .unwrap();
        let right = PureState::basis_state(
            [m("t"), m("r")],
            cfg(&[("t", false), ("r", true)]),
        )
        .unwrap();
        let ip = left.inner_product(&right).unwrap();
        assert!(ip.re.abs() < 1e-14);
        assert!((ip.im + FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn inner_product_rejects_mode_mismatch() {
        let a = PureState::basis_state([m("t")], cfg(&[("t", true)])).unwrap();
        let b = PureState::basis_state([m("r")], cfg(&[("r", true)])).unwrap();
        assert!(a.inner_product(&b).is_err());
    }

    #[test]
    fn tensor_joins_disjoint_mode_sets() {
        let a = PureState::basis_state([m("g0")], cfg(&[("g0", true)])).unwrap();
        let b = PureState::basis_state(
            [m("G0"), m("G1")],
            cfg(&[("G0", true), ("G1", false)]),
        )
        .unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.modes().len(), 3);
        assert_eq!(ab.term_count(), 1);
        assert!((ab.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_rejects_overlap() {
        let a = PureState::basis_state([m("g0")], cfg(&[("g0", true)])).unwrap();
        let err = a.tensor(&a).unwrap_err();
        assert!(matches!(err, SimError::LabelCollision(_)));
    }

    #[test]
    fn entangled_state_has_schmidt_rank_two() {
        // Reduced density matrix of the photon half of the Bell-type state
        // has eigenvalues {1/2, 1/2}: the marginal purity tr(rho^2) is 1/2,
        // so the state cannot be a tensor product of 2-mode factors.
        let s = PureState::superpose([
            (
                cfg(&[("g0", true), ("g1", false), ("G0", true), ("G1", false)]),
                Amplitude::new(FRAC_1_SQRT_2, 0.0),
            ),
            (
                cfg(&[("g0", false), ("g1", true), ("G0", false), ("G1", true)]),
                Amplitude::new(FRAC_1_SQRT_2, 0.0),
            ),
        ])
        .unwrap();
        let photon_modes = [m("g0"), m("g1")];
        // rho_{ab} = sum_e psi(a,e) conj(psi(b,e)) over environment patterns e
        let mut rho: BTreeMap<(BasisConfig, BasisConfig), Amplitude> = BTreeMap::new();
        for (ca, aa) in s.terms() {
            for (cb, ab) in s.terms() {
                let env_a: Vec<_> = ca
                    .entries()
                    .filter(|(mm, _)| !photon_modes.contains(mm))
                    .map(|(mm, v)| (mm.clone(), v))
                    .collect();
                let env_b: Vec<_> = cb
                    .entries()
                    .filter(|(mm, _)| !photon_modes.contains(mm))
                    .map(|(mm, v)| (mm.clone(), v))
                    .collect();
                if env_a == env_b {
                    let key = (ca.restrict(&photon_modes), cb.restrict(&photon_modes));
                    *rho.entry(key).or_insert(Amplitude::new(0.0, 0.0)) += aa * ab.conj();
                }
            }
        }
        let purity: f64 = rho.values().map(|v| v.norm_sqr()).sum();
        assert!((purity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pruning_drops_sub_tolerance_terms() {
        let s = PureState::superpose([
            (cfg(&[("g0", true), ("g1", false)]), Amplitude::new(1.0, 0.0)),
            (cfg(&[("g0", false), ("g1", true)]), Amplitude::new(1e-16, 0.0)),
        ])
        .unwrap();
        assert_eq!(s.term_count(), 1);
    }
}
