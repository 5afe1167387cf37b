//! Product registers for the two-ensemble protocols.
//!
//! A register is an ordered list of sites (ensembles, bosonic modes truncated
//! to {0, 1}, an optional ancilla qubit) with one complex amplitude per
//! product basis state, last site fastest.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{self, CMatrix};
use crate::{Error, Result, C64};

/// Single-excitation collective states of one ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleLevel {
    A,
    S1,
    B1,
    C1,
    D1,
}

impl EnsembleLevel {
    pub const ALL: [EnsembleLevel; 5] =
        [EnsembleLevel::A, EnsembleLevel::S1, EnsembleLevel::B1, EnsembleLevel::C1, EnsembleLevel::D1];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            EnsembleLevel::A => "A",
            EnsembleLevel::S1 => "S1",
            EnsembleLevel::B1 => "B1",
            EnsembleLevel::C1 => "C1",
            EnsembleLevel::D1 => "D1",
        }
    }
}

/// A subsystem of a register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    /// Control ensemble of the C-NOT.
    EnsembleI,
    /// Shared cavity mode.
    Cavity,
    /// Target ensemble of the C-NOT.
    EnsembleII,
    /// Sending ensemble of the photon link.
    Q1,
    /// Free-space photon mode of the link.
    FreeSpace,
    /// Receiving ensemble of the photon link.
    Q2,
    /// Two-level reference system entangled with Q1.
    Ancilla,
}

impl Site {
    pub fn dim(self) -> usize {
        if self.is_ensemble() {
            5
        } else {
            2
        }
    }

    pub fn is_ensemble(self) -> bool {
        matches!(self, Site::EnsembleI | Site::EnsembleII | Site::Q1 | Site::Q2)
    }

    pub fn is_mode(self) -> bool {
        matches!(self, Site::Cavity | Site::FreeSpace)
    }

    pub fn name(self) -> &'static str {
        match self {
            Site::EnsembleI => "E-I",
            Site::Cavity => "cavity",
            Site::EnsembleII => "E-II",
            Site::Q1 => "Q1",
            Site::FreeSpace => "photon",
            Site::Q2 => "Q2",
            Site::Ancilla => "ancilla",
        }
    }

    pub fn level_name(self, level: usize) -> &'static str {
        if self.is_ensemble() {
            EnsembleLevel::ALL[level].name()
        } else {
            ["0", "1"][level]
        }
    }
}

/// A site pinned to one of its levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub site: Site,
    pub level: usize,
}

impl Slot {
    pub fn ensemble(site: Site, level: EnsembleLevel) -> Self {
        debug_assert!(site.is_ensemble());
        Slot { site, level: level.index() }
    }

    pub fn photons(site: Site, n: usize) -> Self {
        debug_assert!(site.is_mode() && n < 2);
        Slot { site, level: n }
    }

    pub fn ancilla(level: usize) -> Self {
        Slot { site: Site::Ancilla, level }
    }
}

/// Complex amplitudes over a product of sites.
#[derive(Clone, Debug, PartialEq)]
pub struct Register {
    sites: Vec<Site>,
    amplitudes: Vec<C64>,
}

/// Norm tolerance of a register.
pub const REGISTER_NORM_TOL: f64 = 1e-10;

impl Register {
    pub fn new(sites: Vec<Site>, amplitudes: Vec<C64>) -> Result<Self> {
        let dim: usize = sites.iter().map(|s| s.dim()).product();
        if amplitudes.len() != dim {
            return Err(Error::BasisMismatch { expected: dim, found: amplitudes.len() });
        }
        for (i, s) in sites.iter().enumerate() {
            if sites[..i].contains(s) {
                return Err(Error::invalid("sites", "each site may appear once"));
            }
        }
        let norm = linalg::norm(&amplitudes);
        if (norm - 1.0).abs() > REGISTER_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Register { sites, amplitudes })
    }

    /// Tensor product of per-site amplitude vectors.
    pub fn product(factors: &[(Site, Vec<C64>)]) -> Result<Self> {
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for (site, f) in factors {
            if f.len() != site.dim() {
                return Err(Error::BasisMismatch { expected: site.dim(), found: f.len() });
            }
            amplitudes = amplitudes.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
        }
        Self::new(factors.iter().map(|(s, _)| *s).collect(), amplitudes)
    }

    /// The product basis state selecting one level per site.
    pub fn basis_state(sites: Vec<Site>, levels: &[usize]) -> Result<Self> {
        if levels.len() != sites.len() {
            return Err(Error::BasisMismatch { expected: sites.len(), found: levels.len() });
        }
        let mut r = Register { amplitudes: Vec::new(), sites };
        let dim = r.dim();
        r.amplitudes = vec![C64::new(0.0, 0.0); dim];
        let idx = r.index_of(levels);
        r.amplitudes[idx] = C64::new(1.0, 0.0);
        Self::new(r.sites, r.amplitudes)
    }

    /// Builds a register from a sparse list of basis states.
    pub fn from_terms(sites: Vec<Site>, terms: &[(&[usize], C64)]) -> Result<Self> {
        let dim: usize = sites.iter().map(|s| s.dim()).product();
        let mut r = Register { sites, amplitudes: vec![C64::new(0.0, 0.0); dim] };
        for (levels, amp) in terms {
            if levels.len() != r.sites.len() {
                return Err(Error::BasisMismatch { expected: r.sites.len(), found: levels.len() });
            }
            let idx = r.index_of(levels);
            r.amplitudes[idx] += *amp;
        }
        Self::new(r.sites, r.amplitudes)
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.sites.iter().map(|s| s.dim()).product()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    pub fn position(&self, site: Site) -> Option<usize> {
        self.sites.iter().position(|&s| s == site)
    }

    pub fn index_of(&self, levels: &[usize]) -> usize {
        self.sites.iter().zip(levels).fold(0, |acc, (s, &l)| acc * s.dim() + l)
    }

    pub fn levels_of(&self, mut index: usize) -> Vec<usize> {
        let mut levels = vec![0; self.sites.len()];
        for (k, s) in self.sites.iter().enumerate().rev() {
            levels[k] = index % s.dim();
            index /= s.dim();
        }
        levels
    }

    /// Human-readable label of a basis index, e.g. `C1,1,D1`.
    pub fn label(&self, index: usize) -> String {
        let levels = self.levels_of(index);
        let mut out = String::new();
        for (k, (s, l)) in self.sites.iter().zip(&levels).enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(s.level_name(*l));
        }
        out
    }

    pub fn amplitude(&self, levels: &[usize]) -> C64 {
        self.amplitudes[self.index_of(levels)]
    }

    fn resolve(&self, pattern: &[Slot]) -> Result<Vec<(usize, usize)>> {
        pattern
            .iter()
            .map(|slot| {
                let pos = self
                    .position(slot.site)
                    .ok_or_else(|| Error::Precondition(alloc::format!("register has no {} site", slot.site.name())))?;
                if slot.level >= slot.site.dim() {
                    return Err(Error::invalid("slot", "level out of range"));
                }
                Ok((pos, slot.level))
            })
            .collect()
    }

    /// Basis indices whose levels agree with `pattern`.
    pub fn matching(&self, pattern: &[Slot]) -> Result<Vec<usize>> {
        let fixed = self.resolve(pattern)?;
        Ok((0..self.dim())
            .filter(|&i| {
                let levels = self.levels_of(i);
                fixed.iter().all(|&(pos, l)| levels[pos] == l)
            })
            .collect())
    }

    /// Total probability on basis states matching `pattern`.
    pub fn probability(&self, pattern: &[Slot]) -> Result<f64> {
        Ok(self.matching(pattern)?.into_iter().map(|i| self.amplitudes[i].norm_sqr()).sum())
    }

    /// Pairs every basis index matching `x` with the index obtained by
    /// replacing the `x` levels by the `y` levels. Both patterns must pin the
    /// same sites.
    pub fn partners(&self, x: &[Slot], y: &[Slot]) -> Result<Vec<(usize, usize)>> {
        let fx = self.resolve(x)?;
        let fy = self.resolve(y)?;
        if fx.len() != fy.len() || fx.iter().zip(&fy).any(|(a, b)| a.0 != b.0) {
            return Err(Error::invalid("transition", "both ends must pin the same sites in the same order"));
        }
        Ok(self
            .matching(x)?
            .into_iter()
            .map(|i| {
                let mut levels = self.levels_of(i);
                for &(pos, l) in &fy {
                    levels[pos] = l;
                }
                (i, self.index_of(&levels))
            })
            .collect())
    }

    /// Applies `u = [[u_xx, u_xy], [u_yx, u_yy]]` to every (x, y) partner
    /// pair: `x' = u_xx·x + u_xy·y`, `y' = u_yx·x + u_yy·y`.
    pub fn apply_pair_unitary(&mut self, pairs: &[(usize, usize)], u: [[C64; 2]; 2]) {
        for &(ix, iy) in pairs {
            let ax = self.amplitudes[ix];
            let ay = self.amplitudes[iy];
            self.amplitudes[ix] = u[0][0] * ax + u[0][1] * ay;
            self.amplitudes[iy] = u[1][0] * ax + u[1][1] * ay;
        }
    }

    /// Multiplies every basis state matching `pattern` by `factor`.
    pub fn apply_phase(&mut self, pattern: &[Slot], factor: C64) -> Result<()> {
        for i in self.matching(pattern)? {
            self.amplitudes[i] *= factor;
        }
        Ok(())
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    /// Rescales to unit norm; used after discarding leaked amplitude.
    pub(crate) fn renormalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::Numerical("register lost all amplitude".into()));
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        Ok(())
    }

    /// `|⟨self|other⟩|²` on identical site lists.
    pub fn fidelity(&self, other: &Register) -> Result<f64> {
        if self.sites != other.sites {
            return Err(Error::BasisMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(linalg::fidelity(&self.amplitudes, &other.amplitudes))
    }

    /// Reduced density matrix of `keep` (in the order given).
    pub fn reduced_density(&self, keep: &[Site]) -> Result<CMatrix> {
        let keep_pos: Vec<usize> = keep
            .iter()
            .map(|&s| self.position(s).ok_or_else(|| Error::Precondition(alloc::format!("no {} site", s.name()))))
            .collect::<Result<_>>()?;
        let kdim: usize = keep.iter().map(|s| s.dim()).product();
        let sub_index = |levels: &[usize]| keep_pos.iter().zip(keep).fold(0, |acc, (&p, s)| acc * s.dim() + levels[p]);
        let env_key = |levels: &[usize]| {
            levels
                .iter()
                .enumerate()
                .filter(|(p, _)| !keep_pos.contains(p))
                .fold(0usize, |acc, (p, &l)| acc * self.sites[p].dim() + l)
        };
        let mut rho = CMatrix::zeros(kdim);
        let all: Vec<(usize, usize, C64)> = (0..self.dim())
            .filter(|&i| self.amplitudes[i] != C64::new(0.0, 0.0))
            .map(|i| {
                let levels = self.levels_of(i);
                (sub_index(&levels), env_key(&levels), self.amplitudes[i])
            })
            .collect();
        for &(a, ea, za) in &all {
            for &(b, eb, zb) in &all {
                if ea == eb {
                    rho[(a, b)] += za * zb.conj();
                }
            }
        }
        Ok(rho)
    }

    /// Von Neumann entropy (bits) of the reduced state of `keep`.
    pub fn entanglement_entropy(&self, keep: &[Site]) -> Result<f64> {
        let rho = self.reduced_density(keep)?;
        let eig = rho.eigh()?;
        Ok(eig.values.iter().filter(|&&p| p > 1e-15).map(|&p| -p * libm::log2(p)).sum())
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, self.label(i))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const CNOT_SITES: [Site; 3] = [Site::EnsembleI, Site::Cavity, Site::EnsembleII];

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn cnot_register_has_fifty_states() {
        let r = Register::basis_state(CNOT_SITES.to_vec(), &[0, 0, 0]).unwrap();
        assert_eq!(r.dim(), 50);
        assert_eq!(r.label(r.index_of(&[3, 1, 4])), "C1,1,D1");
        assert_eq!(r.levels_of(r.index_of(&[3, 1, 4])), vec![3, 1, 4]);
    }

    #[test]
    fn partners_substitute_levels() {
        let r = Register::basis_state(CNOT_SITES.to_vec(), &[0, 0, 0]).unwrap();
        let x = [Slot::ensemble(Site::EnsembleI, EnsembleLevel::A), Slot::photons(Site::Cavity, 0)];
        let y = [Slot::ensemble(Site::EnsembleI, EnsembleLevel::C1), Slot::photons(Site::Cavity, 1)];
        let p = r.partners(&x, &y).unwrap();
        assert_eq!(p.len(), 5);
        for (ix, iy) in p {
            let (lx, ly) = (r.levels_of(ix), r.levels_of(iy));
            assert_eq!((lx[0], lx[1], ly[0], ly[1]), (0, 0, 3, 1));
            assert_eq!(lx[2], ly[2]);
        }
    }

    #[test]
    fn bell_state_has_one_bit() {
        let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let r = Register::from_terms(vec![Site::Ancilla, Site::Q2], &[(&[0, 0], h), (&[1, 3], h)]).unwrap();
        let s = r.entanglement_entropy(&[Site::Ancilla]).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        let p = Register::product(&[
            (Site::Ancilla, vec![h, h]),
            (Site::Q2, vec![one(), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]),
        ])
        .unwrap();
        assert!(p.entanglement_entropy(&[Site::Ancilla]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn duplicate_sites_rejected() {
        assert!(Register::basis_state(vec![Site::Cavity, Site::Cavity], &[0, 0]).is_err());
    }

    #[test]
    fn display_lists_terms() {
        let r = Register::basis_state(CNOT_SITES.to_vec(), &[3, 0, 4]).unwrap();
        assert_eq!(r.to_string(), "(1.000000+0.000000i)|C1,0,D1⟩");
    }
}
