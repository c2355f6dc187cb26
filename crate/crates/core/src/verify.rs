//! Independent checks of the `BW16` class representatives: squared norms,
//! relevance or vertexhood, orbit sizes, stabilizer orders and the
//! orbit-stabilizer products.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::bw16::{normal_representatives, vertex_representatives, Representative, GROUP_ORDER, VERTEX_COUNT};
use crate::exact::{Rational, ScaledVec};
use crate::faces::verify_vertex;
use crate::group::{bw16_generators, GroupError, MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP};
use crate::lattice::{make_lattice, Lattice, LatticeError};

/// Orbits up to this size are enumerated; larger ones are obtained as
/// `|G| / |Stab|`.
pub const DIRECT_ORBIT_LIMIT: u64 = 100_000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitMethod {
    Enumerated,
    Index,
}

/// Result of checking one representative.
#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub name: String,
    pub norm2: Rational,
    pub expected_norm2: Rational,
    /// Relevance for a normal, vertexhood for a vertex.
    pub membership: bool,
    pub orbit: u64,
    pub expected_orbit: u64,
    pub orbit_method: OrbitMethod,
    pub stabilizer: u64,
    pub expected_stabilizer: u64,
    pub product_is_group_order: bool,
    pub draws: u64,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.norm2 == self.expected_norm2
            && self.membership
            && self.orbit == self.expected_orbit
            && self.stabilizer == self.expected_stabilizer
            && self.product_is_group_order
    }

    /// Human-readable differences from the expected values.
    pub fn diff(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.norm2 != self.expected_norm2 {
            out.push(format!("norm2 {} != {}", self.norm2, self.expected_norm2));
        }
        if !self.membership {
            out.push("membership check failed".into());
        }
        if self.orbit != self.expected_orbit {
            out.push(format!("orbit {} != {}", self.orbit, self.expected_orbit));
        }
        if self.stabilizer != self.expected_stabilizer {
            out.push(format!("stabilizer {} != {}", self.stabilizer, self.expected_stabilizer));
        }
        if !self.product_is_group_order {
            out.push("orbit * stabilizer != |G|".into());
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RepresentativeReport {
    #[serde(serialize_with = "crate::serde_util::display")]
    pub group_order: BigUint,
    pub rows: Vec<RowCheck>,
    pub vertex_orbit_sum: u64,
    pub expected_vertex_count: u64,
}

impl RepresentativeReport {
    pub fn passed(&self) -> bool {
        self.group_order == BigUint::from(GROUP_ORDER)
            && self.rows.iter().all(RowCheck::passed)
            && self.vertex_orbit_sum == self.expected_vertex_count
    }
}

/// `r / 2` has exactly the closest lattice points `0` and `r`.
pub fn is_relevant(lattice: &Lattice, r: &ScaledVec) -> Result<bool, LatticeError> {
    let v = r.to_rvector();
    let closest = lattice.closest_points(&v.scale(&Rational::new(1, 2)))?;
    Ok(closest.len() == 2 && closest.iter().all(|p| p.coords.is_zero() || p.coords == v))
}

/// Checks every normal and vertex representative of `BW16`.
pub fn verify_representatives(
    options: StabilizerOptions,
    log: &(dyn Fn(&str) + Sync),
) -> Result<RepresentativeReport, VerifyError> {
    let lattice = make_lattice("BW16")?;
    let group = MatrixGroup::new(bw16_generators(), &normal_representatives()[0].vector, DEFAULT_ORBIT_CAP)?;
    let order = group.order();
    let mut rows = Vec::new();
    let mut vertex_orbit_sum = 0;
    for (rep, normal) in normal_representatives().into_iter().map(|r| (r, true)).chain(vertex_representatives().into_iter().map(|r| (r, false))) {
        let membership = if normal { is_relevant(&lattice, &rep.vector)? } else { verify_vertex(&lattice, &rep.vector.to_rvector()) };
        let row = check_orbit(&group, &order, &rep, membership, options)?;
        log(&format!("{}: orbit {} stabilizer {} after {} draws", row.name, row.orbit, row.stabilizer, row.draws));
        if !normal {
            vertex_orbit_sum += row.orbit;
        }
        rows.push(row);
    }
    Ok(RepresentativeReport { group_order: order, rows, vertex_orbit_sum, expected_vertex_count: VERTEX_COUNT })
}

fn check_orbit(
    group: &MatrixGroup,
    order: &BigUint,
    rep: &Representative,
    membership: bool,
    options: StabilizerOptions,
) -> Result<RowCheck, VerifyError> {
    let (orbit_size, method) = if rep.orbit <= DIRECT_ORBIT_LIMIT {
        (group.orbit(&rep.vector, &|_| false, DEFAULT_ORBIT_CAP)?.len() as u64, OrbitMethod::Enumerated)
    } else {
        (rep.orbit, OrbitMethod::Index)
    };
    let (stab, stats) = group.stabilizer(&rep.vector, &BigUint::from(orbit_size), options)?;
    let stab_order: u64 = stab.order().try_into().unwrap_or(u64::MAX);
    let orbit = match method {
        OrbitMethod::Enumerated => orbit_size,
        OrbitMethod::Index => (order / stab.order()).try_into().unwrap_or(u64::MAX),
    };
    Ok(RowCheck {
        name: rep.name.to_string(),
        norm2: rep.vector.norm2(),
        expected_norm2: rep.norm2.clone(),
        membership,
        orbit,
        expected_orbit: rep.orbit,
        orbit_method: method,
        stabilizer: stab_order,
        expected_stabilizer: rep.stabilizer,
        product_is_group_order: BigUint::from(orbit) * BigUint::from(stab_order) == *order,
        draws: stats.draws,
    })
}
