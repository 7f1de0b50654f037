use crate::model::{FunctionalUnit, MissingMotionRate, MotionProfile};

/// Success rate of the unit's motion. Higher is better.
pub fn heuristic_success(
    unit: &FunctionalUnit,
    profile: &MotionProfile,
    strict: bool,
) -> Result<f64, MissingMotionRate> {
    profile.rate_for(unit.motion().label(), strict)
}

/// Number of input objects, kitchen-satisfied ones included. Lower is better.
pub fn heuristic_input_count(unit: &FunctionalUnit) -> usize {
    unit.inputs().len()
}
