//! Body-segment parameters from subject height and weight.
//!
//! Contini's empirical regressions estimate segment densities, volumes,
//! masses, lengths, center-of-mass locations and principal inertias of the
//! thigh, shank and foot from nothing but the subject's height (inches) and
//! weight (pounds). The regressions are implemented verbatim, imperial unit
//! labels and all; [`to_si`] converts a complete set to SI afterwards.
//!
//! The regressions and published segment tables for the same subject do not
//! agree particularly well (the mass equations run roughly 2x high), so a
//! direct-override path exists: [`SegmentSet::default_adult`] is a curated SI
//! data set for a 163 lb / 67 in adult and is what the simulator uses unless
//! told otherwise.

use thiserror::Error;

/// Pounds to kilograms.
pub const LB_TO_KG: f64 = 0.453_592_37;
/// Inches to meters.
pub const IN_TO_M: f64 = 0.0254;
/// Pound-square-inches to kilogram-square-meters.
pub const LBIN2_TO_KGM2: f64 = LB_TO_KG * IN_TO_M * IN_TO_M;

/// Gram-square-centimeters to kilogram-square-meters (the unit body-segment
/// inertia tables are conventionally printed in).
pub fn gcm2_to_kgm2(value: f64) -> f64 {
    value * 1e-7
}

#[derive(Debug, Error, PartialEq)]
pub enum AnthroError {
    #[error("subject height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("subject weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("segment set is already in {0:?} units")]
    AlreadyConverted(UnitSystem),
    #[error("{segment} {field} is invalid: {message}")]
    InvalidSegment {
        segment: &'static str,
        field: &'static str,
        message: String,
    },
}

/// Subject height and weight; the seed for every anthropometric parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubjectProfile {
    height_in: f64,
    weight_lb: f64,
}

impl SubjectProfile {
    pub fn new(height_in: f64, weight_lb: f64) -> Result<Self, AnthroError> {
        if !(height_in > 0.0) {
            return Err(AnthroError::NonPositiveHeight(height_in));
        }
        if !(weight_lb > 0.0) {
            return Err(AnthroError::NonPositiveWeight(weight_lb));
        }
        Ok(Self {
            height_in,
            weight_lb,
        })
    }

    /// The built-in default subject (163 lb, 67 in).
    pub fn default_adult() -> Self {
        Self {
            height_in: 67.0,
            weight_lb: 163.0,
        }
    }

    pub fn height_in(&self) -> f64 {
        self.height_in
    }

    pub fn weight_lb(&self) -> f64 {
        self.weight_lb
    }
}

/// Whole-body composition quantities, in the regressions' own unit labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyComposition {
    /// Ponderal-type index C = H * W^(-1/3).
    pub c_index: f64,
    /// Body density (lb/ft^3 label).
    pub body_density: f64,
    pub thigh_density: f64,
    pub shank_density: f64,
    pub foot_density: f64,
    /// Whole-body volume, weight / body density.
    pub body_volume: f64,
}

/// Body density and segment densities from height and weight.
pub fn body_composition(subject: &SubjectProfile) -> BodyComposition {
    let c_index = subject.height_in * subject.weight_lb.powf(-1.0 / 3.0);
    let body_density = 0.6905 + 0.0297 * c_index;
    BodyComposition {
        c_index,
        body_density,
        thigh_density: 1.035 + 0.814 * body_density,
        shank_density: 1.065 + body_density,
        foot_density: 1.071 + body_density,
        body_volume: subject.weight_lb / body_density,
    }
}

/// Which unit system a [`SegmentSet`] is expressed in.
///
/// Imperial sets carry lb / inch / lb·in² (what the regressions produce);
/// SI sets carry kg / m / kg·m².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSystem {
    Imperial,
    Si,
}

/// Inertial parameters of one segment.
///
/// `inertia_diag` is the diagonal of the inertia tensor about the segment COM
/// in the segment's principal axes, in the conventional printed order:
/// thigh `[longitudinal, transverse, transverse]`,
/// shank `[transverse, longitudinal, transverse]`,
/// foot  `[longitudinal, transverse, transverse]`.
/// The smallest radius of gyration always identifies the longitudinal axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentParams {
    pub mass: f64,
    pub length: f64,
    /// Distance of the COM from the proximal joint along the segment axis.
    pub com_offset: f64,
    pub inertia_diag: [f64; 3],
    /// Ankle-to-sole distance; present only on the foot record.
    pub ankle_to_sole: Option<f64>,
}

impl SegmentParams {
    fn validate(&self, segment: &'static str) -> Result<(), AnthroError> {
        let err = |field: &'static str, message: String| AnthroError::InvalidSegment {
            segment,
            field,
            message,
        };
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(err("mass", format!("must be positive, got {}", self.mass)));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(err(
                "length",
                format!("must be positive, got {}", self.length),
            ));
        }
        if !(self.com_offset > 0.0 && self.com_offset < self.length) {
            return Err(err(
                "com_offset",
                format!(
                    "must lie strictly inside (0, length={}), got {}",
                    self.length, self.com_offset
                ),
            ));
        }
        let [a, b, c] = self.inertia_diag;
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(err(
                "inertia",
                format!("diagonal entries must be positive, got {:?}", self.inertia_diag),
            ));
        }
        // Physical realizability of a rigid body: each principal moment is at
        // most the sum of the other two.
        if a > b + c || b > a + c || c > a + b {
            return Err(err(
                "inertia",
                format!(
                    "diagonal violates the triangle inequalities: {:?}",
                    self.inertia_diag
                ),
            ));
        }
        Ok(())
    }
}

/// Thigh, shank and foot parameters in a single unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSet {
    pub thigh: SegmentParams,
    pub shank: SegmentParams,
    pub foot: SegmentParams,
    pub units: UnitSystem,
}

impl SegmentSet {
    /// Built-in SI data set for the default 163 lb / 67 in adult.
    ///
    /// These are curated table values, not regression output; they are the
    /// default plant/model parameters everywhere in the crate.
    pub fn default_adult() -> Self {
        SegmentSet {
            thigh: SegmentParams {
                mass: 5.65,
                length: 0.41,
                com_offset: 0.170,
                inertia_diag: [0.0151, 0.070, 0.070],
                ankle_to_sole: None,
            },
            shank: SegmentParams {
                mass: 3.48,
                length: 0.4879,
                com_offset: 0.1892,
                inertia_diag: [0.0648, 0.0107, 0.0620],
                ankle_to_sole: None,
            },
            foot: SegmentParams {
                mass: 0.93,
                length: 0.2588,
                com_offset: 0.115,
                inertia_diag: [0.001, 0.0037, 0.0041],
                ankle_to_sole: Some(0.0732),
            },
            units: UnitSystem::Si,
        }
    }

    pub fn validate(&self) -> Result<(), AnthroError> {
        self.thigh.validate("thigh")?;
        self.shank.validate("shank")?;
        self.foot.validate("foot")?;
        Ok(())
    }

    /// Scale this set to another subject: masses by the weight ratio, lengths
    /// by the height ratio, inertias by weight * height^2.
    pub fn scaled_to(
        &self,
        nominal: &SubjectProfile,
        subject: &SubjectProfile,
    ) -> SegmentSet {
        let mw = subject.weight_lb / nominal.weight_lb;
        let mh = subject.height_in / nominal.height_in;
        let mi = mw * mh * mh;
        let scale = |s: &SegmentParams| SegmentParams {
            mass: s.mass * mw,
            length: s.length * mh,
            com_offset: s.com_offset * mh,
            inertia_diag: [
                s.inertia_diag[0] * mi,
                s.inertia_diag[1] * mi,
                s.inertia_diag[2] * mi,
            ],
            ankle_to_sole: s.ankle_to_sole.map(|a| a * mh),
        };
        SegmentSet {
            thigh: scale(&self.thigh),
            shank: scale(&self.shank),
            foot: scale(&self.foot),
            units: self.units,
        }
    }
}

/// Full segment parameter set from the regressions, in imperial units
/// (lb, inch, lb·in²).
pub fn segment_parameters(subject: &SubjectProfile) -> SegmentSet {
    let comp = body_composition(subject);
    let h = subject.height_in;

    let thigh_volume = 0.0922 * comp.body_volume;
    let shank_volume = 0.0464 * comp.body_volume;
    let foot_volume = 0.0124 * comp.body_volume;

    let thigh_mass = thigh_volume * comp.thigh_density;
    let shank_mass = shank_volume * comp.shank_density;
    let foot_mass = foot_volume * comp.foot_density;

    let thigh_length = 0.245 * h;
    let shank_length = 0.285 * h;
    let foot_length = 0.152 * h;
    let ankle_to_sole = 0.043 * h;

    SegmentSet {
        thigh: SegmentParams {
            mass: thigh_mass,
            length: thigh_length,
            com_offset: 0.41 * thigh_length,
            inertia_diag: [
                thigh_mass * (0.124 * thigh_length).powi(2),
                thigh_mass * (0.267 * thigh_length).powi(2),
                thigh_mass * (0.267 * thigh_length).powi(2),
            ],
            ankle_to_sole: None,
        },
        shank: SegmentParams {
            mass: shank_mass,
            length: shank_length,
            com_offset: 0.393 * shank_length,
            inertia_diag: [
                shank_mass * (0.281 * shank_length).powi(2),
                shank_mass * (0.114 * shank_length).powi(2),
                shank_mass * (0.275 * shank_length).powi(2),
            ],
            ankle_to_sole: None,
        },
        foot: SegmentParams {
            mass: foot_mass,
            length: foot_length,
            com_offset: 0.445 * foot_length,
            inertia_diag: [
                foot_mass * (0.124 * foot_length).powi(2),
                foot_mass * (0.245 * foot_length).powi(2),
                foot_mass * (0.257 * foot_length).powi(2),
            ],
            ankle_to_sole: Some(ankle_to_sole),
        },
        units: UnitSystem::Imperial,
    }
}

/// Convert an imperial set to SI.
pub fn to_si(set: &SegmentSet) -> Result<SegmentSet, AnthroError> {
    if set.units == UnitSystem::Si {
        return Err(AnthroError::AlreadyConverted(UnitSystem::Si));
    }
    Ok(convert(set, LB_TO_KG, IN_TO_M, LBIN2_TO_KGM2, UnitSystem::Si))
}

/// Convert an SI set back to imperial.
pub fn to_imperial(set: &SegmentSet) -> Result<SegmentSet, AnthroError> {
    if set.units == UnitSystem::Imperial {
        return Err(AnthroError::AlreadyConverted(UnitSystem::Imperial));
    }
    Ok(convert(
        set,
        1.0 / LB_TO_KG,
        1.0 / IN_TO_M,
        1.0 / LBIN2_TO_KGM2,
        UnitSystem::Imperial,
    ))
}

fn convert(set: &SegmentSet, mass: f64, length: f64, inertia: f64, units: UnitSystem) -> SegmentSet {
    let conv = |s: &SegmentParams| SegmentParams {
        mass: s.mass * mass,
        length: s.length * length,
        com_offset: s.com_offset * length,
        inertia_diag: [
            s.inertia_diag[0] * inertia,
            s.inertia_diag[1] * inertia,
            s.inertia_diag[2] * inertia,
        ],
        ankle_to_sole: s.ankle_to_sole.map(|a| a * length),
    };
    SegmentSet {
        thigh: conv(&set.thigh),
        shank: conv(&set.shank),
        foot: conv(&set.foot),
        units,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Hand-evaluated regression outputs for the default subject (67 in,
    // 163 lb), frozen from an independent evaluation of the formulas.
    const C_67_163: f64 = 12.265321446292077;
    const BD_67_163: f64 = 1.0547800469548747;

    #[test]
    fn body_composition_default_subject() {
        let s = SubjectProfile::new(67.0, 163.0).unwrap();
        let c = body_composition(&s);
        assert_relative_eq!(c.c_index, C_67_163, max_relative = 1e-12);
        assert_relative_eq!(c.body_density, BD_67_163, max_relative = 1e-12);
        assert_relative_eq!(c.thigh_density, 1.8935909582212678, max_relative = 1e-12);
        assert_relative_eq!(c.shank_density, 2.1197800469548747, max_relative = 1e-12);
        assert_relative_eq!(c.foot_density, 2.1257800469548744, max_relative = 1e-12);
        assert_relative_eq!(c.body_volume, 154.53458801252182, max_relative = 1e-12);
    }

    #[test]
    fn body_composition_exact_cube_root() {
        // 216 lb has an exact cube root, so C comes out on a round number.
        let s = SubjectProfile::new(72.0, 216.0).unwrap();
        let c = body_composition(&s);
        assert_relative_eq!(c.c_index, 12.0, max_relative = 1e-12);
        assert_relative_eq!(c.body_density, 1.0469, max_relative = 1e-12);
    }

    #[test]
    fn body_composition_short_subject_limit() {
        // C -> 0 as H -> 0, so density approaches the intercept.
        let s = SubjectProfile::new(1e-9, 150.0).unwrap();
        let c = body_composition(&s);
        assert_abs_diff_eq!(c.body_density, 0.6905, epsilon = 1e-9);
    }

    #[test]
    fn rejects_non_positive_subjects() {
        assert_eq!(
            SubjectProfile::new(0.0, 163.0),
            Err(AnthroError::NonPositiveHeight(0.0))
        );
        assert_eq!(
            SubjectProfile::new(67.0, -3.0),
            Err(AnthroError::NonPositiveWeight(-3.0))
        );
        assert!(SubjectProfile::new(f64::NAN, 163.0).is_err());
    }

    #[test]
    fn segment_parameters_default_subject() {
        let s = SubjectProfile::new(67.0, 163.0).unwrap();
        let set = segment_parameters(&s);
        assert_eq!(set.units, UnitSystem::Imperial);
        // Lengths and COM offsets (inches).
        assert_relative_eq!(set.thigh.length, 16.415, max_relative = 1e-12);
        assert_relative_eq!(set.shank.length, 19.095, max_relative = 1e-12);
        assert_relative_eq!(set.foot.length, 10.184, max_relative = 1e-12);
        assert_relative_eq!(set.foot.ankle_to_sole.unwrap(), 2.881, max_relative = 1e-12);
        assert_relative_eq!(set.thigh.com_offset, 6.730149999999999, max_relative = 1e-12);
        assert_relative_eq!(set.shank.com_offset, 7.504335, max_relative = 1e-12);
        assert_relative_eq!(set.foot.com_offset, 4.53188, max_relative = 1e-12);
        // Masses (lb). These intentionally follow the regressions, not the
        // curated default_adult table.
        assert_relative_eq!(set.thigh.mass, 26.980052530270918, max_relative = 1e-12);
        assert_relative_eq!(set.shank.mass, 15.199681201226777, max_relative = 1e-12);
        assert_relative_eq!(set.foot.mass, 4.073481142641494, max_relative = 1e-12);
        set.validate().unwrap();
    }

    #[test]
    fn thigh_longitudinal_inertia_is_smallest() {
        for (h, w) in [(60.0, 120.0), (67.0, 163.0), (75.0, 220.0)] {
            let set = segment_parameters(&SubjectProfile::new(h, w).unwrap());
            let [a, b, c] = set.thigh.inertia_diag;
            assert!(a < b && a < c);
            assert_relative_eq!(
                a,
                set.thigh.mass * (0.124 * set.thigh.length).powi(2),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn volume_identity_and_positivity() {
        for (h, w) in [(50.0, 100.0), (67.0, 163.0), (80.0, 250.0), (62.5, 140.0)] {
            let s = SubjectProfile::new(h, w).unwrap();
            let c = body_composition(&s);
            // B_v * B_d = W is an algebraic identity.
            assert_relative_eq!(c.body_volume * c.body_density, w, max_relative = 1e-14);
            for v in [
                c.c_index,
                c.body_density,
                c.thigh_density,
                c.shank_density,
                c.foot_density,
                c.body_volume,
            ] {
                assert!(v > 0.0);
            }
            // Per-leg segment volume fractions total 15.1% of body volume.
            let set = segment_parameters(&s);
            let total = 0.0922 * c.body_volume + 0.0464 * c.body_volume + 0.0124 * c.body_volume;
            assert_relative_eq!(total, 0.151 * c.body_volume, max_relative = 1e-12);
            set.validate().unwrap();
        }
    }

    #[test]
    fn lengths_increase_with_height() {
        let w = 163.0;
        let mut prev = segment_parameters(&SubjectProfile::new(50.0, w).unwrap());
        for h in [55.0, 60.0, 65.0, 70.0, 75.0] {
            let cur = segment_parameters(&SubjectProfile::new(h, w).unwrap());
            assert!(cur.thigh.length > prev.thigh.length);
            assert!(cur.shank.length > prev.shank.length);
            assert!(cur.foot.length > prev.foot.length);
            assert!(cur.foot.ankle_to_sole.unwrap() > prev.foot.ankle_to_sole.unwrap());
            prev = cur;
        }
    }

    #[test]
    fn si_conversion_and_round_trip() {
        let s = SubjectProfile::new(67.0, 163.0).unwrap();
        let imp = segment_parameters(&s);
        let si = to_si(&imp).unwrap();
        assert_eq!(si.units, UnitSystem::Si);
        // 163 lb of body mass is 73.94 kg; segment masses convert with the
        // same factor.
        assert_abs_diff_eq!(163.0 * LB_TO_KG, 73.94, epsilon = 0.02);
        assert_relative_eq!(si.thigh.mass, imp.thigh.mass * LB_TO_KG, max_relative = 1e-15);
        assert_relative_eq!(si.thigh.length, imp.thigh.length * IN_TO_M, max_relative = 1e-15);
        // Zero maps to zero under any linear unit change.
        assert_eq!(0.0 * IN_TO_M, 0.0);

        let back = to_imperial(&si).unwrap();
        for (a, b) in [
            (back.thigh.mass, imp.thigh.mass),
            (back.shank.length, imp.shank.length),
            (back.foot.com_offset, imp.foot.com_offset),
            (back.thigh.inertia_diag[1], imp.thigh.inertia_diag[1]),
            (back.foot.ankle_to_sole.unwrap(), imp.foot.ankle_to_sole.unwrap()),
        ] {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn double_conversion_is_an_error() {
        let si = SegmentSet::default_adult();
        assert_eq!(to_si(&si), Err(AnthroError::AlreadyConverted(UnitSystem::Si)));
        let imp = to_imperial(&si).unwrap();
        assert_eq!(
            to_imperial(&imp),
            Err(AnthroError::AlreadyConverted(UnitSystem::Imperial))
        );
    }

    #[test]
    fn table_style_inertia_conversion() {
        // Inertia tables print g·cm²; 151e3 g·cm² is 0.0151 kg·m².
        assert_relative_eq!(gcm2_to_kgm2(151e3), 0.0151, max_relative = 1e-12);
    }

    #[test]
    fn default_adult_is_valid() {
        let set = SegmentSet::default_adult();
        set.validate().unwrap();
        assert_eq!(set.units, UnitSystem::Si);
    }

    #[test]
    fn scaled_to_identity_at_nominal() {
        let nominal = SubjectProfile::default_adult();
        let set = SegmentSet::default_adult();
        let same = set.scaled_to(&nominal, &nominal);
        assert_eq!(set, same);
        // Heavier subject scales masses/inertias, not lengths.
        let heavy = set.scaled_to(&nominal, &SubjectProfile::new(67.0, 217.0).unwrap());
        assert_relative_eq!(heavy.thigh.mass, set.thigh.mass * 217.0 / 163.0, max_relative = 1e-12);
        assert_eq!(heavy.thigh.length, set.thigh.length);
    }
}
