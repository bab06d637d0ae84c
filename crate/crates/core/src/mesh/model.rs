use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{build_global, build_local, BasisFamily, GlobalMesh, LocalMesh};
use crate::error::{Error, Result};

/// Global-to-local element size ratio of the verification setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `h_G : h_L = 4 : 3`; global element faces cut through local elements.
    A,
    /// `h_G : h_L = 2 : 1`; every global face coincides with local faces.
    B,
}

impl Case {
    /// Ratio `h_G / h_L` as `(numerator, denominator)`.
    pub fn ratio(self) -> (usize, usize) {
        match self {
            Case::A => (4, 3),
            Case::B => (2, 1),
        }
    }

    /// Gauss points per axis for bases of order `p` and `q`.
    pub fn quadrature_points(self, p: usize, q: usize) -> usize {
        let order = p.max(q);
        match self {
            Case::A => order + 8,
            Case::B => order + 1,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "A",
            Case::B => "B",
        })
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Case::A),
            "B" | "b" => Ok(Case::B),
            _ => Err(Error::Config(format!("case must be `A` or `B`, got `{s}`"))),
        }
    }
}

/// A global mesh with one local mesh laid over an aligned sub-box.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperposedModel {
    global: GlobalMesh,
    local: LocalMesh,
    case: Option<Case>,
    /// First global element (per axis) inside the local box, and how many.
    inside_start: usize,
    inside_count: usize,
}

impl SuperposedModel {
    /// Checks containment and face alignment of the local box.
    pub fn new(global: GlobalMesh, local: LocalMesh) -> Result<Self> {
        let h = global.element_size();
        let tol = 1e-9;
        if local.lo() < global.lo() - tol * h || local.hi() > global.hi() + tol * h {
            return Err(Error::Geometry(format!(
                "local box [{}, {}] leaves the global box [{}, {}]",
                local.lo(),
                local.hi(),
                global.lo(),
                global.hi()
            )));
        }
        let start = (local.lo() - global.lo()) / h;
        let end = (local.hi() - global.lo()) / h;
        if (start - start.round()).abs() > tol || (end - end.round()).abs() > tol {
            return Err(Error::Geometry(
                "local box faces must lie on global element boundaries".into(),
            ));
        }
        let inside_start = start.round() as usize;
        let inside_count = end.round() as usize - inside_start;
        let ratio = h / local.element_size();
        let case = [Case::A, Case::B].into_iter().find(|c| {
            let (n, d) = c.ratio();
            (ratio - n as f64 / d as f64).abs() < 1e-9
        });
        Ok(Self { global, local, case, inside_start, inside_count })
    }

    /// Local box spanning the first `extent` global elements of every axis,
    /// refined by `h_G : h_L = ratio.0 : ratio.1`.
    pub fn with_ratio(
        global_family: BasisFamily,
        global_elements: usize,
        local_order: usize,
        extent: usize,
        ratio: (usize, usize),
        domain: (f64, f64),
    ) -> Result<Self> {
        let (num, den) = ratio;
        if extent == 0 || extent > global_elements {
            return Err(Error::Config(format!(
                "local extent of {extent} global elements does not fit in {global_elements}"
            )));
        }
        if !(extent * num).is_multiple_of(den) {
            return Err(Error::Config(format!(
                "{extent} global elements cannot be divided at ratio {num}:{den}"
            )));
        }
        let global = build_global(global_family, domain.0, domain.1, global_elements)?;
        let local_hi = global.axis().element_start(extent);
        let local = build_local(local_order, domain.0, local_hi, extent * num / den)?;
        Self::new(global, local)
    }

    /// The verification setup on `[0, 2]^3`: the local box is the corner
    /// cube of [`default_local_extent`] global elements.
    pub fn for_case(
        global_family: BasisFamily,
        global_elements: usize,
        local_order: usize,
        case: Case,
    ) -> Result<Self> {
        let extent = default_local_extent(global_elements)?;
        Self::with_ratio(global_family, global_elements, local_order, extent, case.ratio(), (0.0, 2.0))
    }

    pub fn global(&self) -> &GlobalMesh {
        &self.global
    }

    pub fn local(&self) -> &LocalMesh {
        &self.local
    }

    pub fn case(&self) -> Option<Case> {
        self.case
    }

    /// `h_G / h_L`.
    pub fn size_ratio(&self) -> f64 {
        self.global.element_size() / self.local.element_size()
    }

    /// True when global element `e` lies inside the local box. Elements
    /// never straddle the box because its faces are aligned.
    pub fn global_element_inside(&self, e: [usize; 3]) -> bool {
        e.iter().all(|&i| (self.inside_start..self.inside_start + self.inside_count).contains(&i))
    }

    pub fn global_elements_inside(&self) -> usize {
        self.inside_count.pow(3)
    }

    /// True when a global element face passes through the interior of
    /// local element `e`.
    pub fn local_element_crosses(&self, e: [usize; 3]) -> bool {
        let ga = self.global.axis();
        let la = self.local.axis();
        let h = ga.element_size();
        let tol = 1e-9 * h;
        e.iter().any(|&i| {
            let a = la.element_start(i);
            let b = la.element_start(i + 1);
            let k = ((a - ga.lo()) / h).floor() as usize + 1;
            let face = ga.element_start(k.min(ga.n_elements()));
            face > a + tol && face < b - tol
        })
    }
}

/// Global elements per axis covered by the default local box: half the
/// domain when that is a multiple of 3 elements (needed for `4:3`),
/// otherwise the largest multiple of 3 below half.
pub fn default_local_extent(global_elements: usize) -> Result<usize> {
    if global_elements < 3 {
        return Err(Error::Config(format!(
            "the verification setup needs at least 3 global elements per axis, got {global_elements}"
        )));
    }
    Ok(3 * (global_elements / 6).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_ratios_and_local_sizes() {
        let m = SuperposedModel::for_case(BasisFamily::BSpline(3), 12, 1, Case::A).unwrap();
        assert_eq!(m.case(), Some(Case::A));
        assert_eq!(m.local().elements_per_axis(), 8);
        assert_eq!(m.local().element_size(), 0.125);
        assert!((m.size_ratio() - 4.0 / 3.0).abs() < 1e-12);

        let m = SuperposedModel::for_case(BasisFamily::Lagrange(1), 12, 1, Case::B).unwrap();
        assert_eq!(m.case(), Some(Case::B));
        assert_eq!(m.local().elements_per_axis(), 12);
        assert_eq!(m.global_elements_inside(), 6 * 6 * 6);
    }

    #[test]
    fn odd_meshes_use_the_largest_compatible_box() {
        assert_eq!(default_local_extent(6).unwrap(), 3);
        assert_eq!(default_local_extent(9).unwrap(), 3);
        assert_eq!(default_local_extent(15).unwrap(), 6);
        assert_eq!(default_local_extent(18).unwrap(), 9);
        assert!(default_local_extent(2).is_err());
        let m = SuperposedModel::for_case(BasisFamily::BSpline(2), 9, 2, Case::A).unwrap();
        assert!((m.local().hi() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.local().elements_per_axis(), 4);
    }

    #[test]
    fn element_classification() {
        let m = SuperposedModel::for_case(BasisFamily::BSpline(3), 6, 1, Case::A).unwrap();
        let n = m.global().elements_per_axis();
        let mut inside = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if m.global_element_inside([i, j, k]) {
                        inside += 1;
                    }
                }
            }
        }
        assert_eq!(inside, 27);
    }

    #[test]
    fn crossing_flags() {
        // h_G = 1/3, h_L = 1/4 on [0, 1]: local elements 1 and 2 contain 1/3 and 2/3.
        let m = SuperposedModel::for_case(BasisFamily::Lagrange(1), 6, 1, Case::A).unwrap();
        assert!(!m.local_element_crosses([0, 0, 0]));
        assert!(m.local_element_crosses([1, 0, 0]));
        assert!(m.local_element_crosses([0, 0, 2]));
        assert!(!m.local_element_crosses([3, 3, 3]));
        let m = SuperposedModel::for_case(BasisFamily::Lagrange(1), 6, 1, Case::B).unwrap();
        for i in 0..6 {
            assert!(!m.local_element_crosses([i, i, i]));
        }
    }

    #[test]
    fn rejects_misaligned_or_escaping_boxes() {
        let g = build_global(BasisFamily::BSpline(2), 0.0, 2.0, 6).unwrap();
        let l = build_local(1, 0.0, 0.5, 2).unwrap();
        assert!(SuperposedModel::new(g.clone(), l).is_err());
        let l = build_local(1, 1.0, 2.5, 2).unwrap();
        assert!(SuperposedModel::new(g, l).is_err());
        assert!(SuperposedModel::with_ratio(BasisFamily::BSpline(2), 6, 1, 2, (4, 3), (0.0, 2.0)).is_err());
    }

    #[test]
    fn case_parsing_and_quadrature_policy() {
        assert_eq!("A".parse::<Case>().unwrap(), Case::A);
        assert!("C".parse::<Case>().is_err());
        assert_eq!(Case::A.quadrature_points(3, 1), 11);
        assert_eq!(Case::B.quadrature_points(1, 3), 4);
    }
}
