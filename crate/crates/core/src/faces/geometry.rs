use serde::Serialize;

use super::region::{Face, Region};
use super::FaceError;
use crate::exact::{RMatrix, RVector, Rational};

/// Shape tags for edges and 2-faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Point,
    Edge,
    Square,
    Rectangle,
    Rhombus,
    Quadrilateral,
    Equilateral,
    Isosceles,
    Scalene,
    Polygon,
}

/// Exact internal angle: `cos2` is the squared cosine and `obtuse` records
/// a negative cosine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Angle {
    pub cos2: Rational,
    pub obtuse: bool,
}

impl Angle {
    /// Signed squared cosine, increasing as the angle decreases.
    pub fn signed_cos2(&self) -> Rational {
        if self.obtuse {
            -self.cos2.clone()
        } else {
            self.cos2.clone()
        }
    }
}

/// Exact metrics of a face of dimension at most two. Vertices are listed in
/// boundary order; `edge_lengths2[i]` joins vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct FaceGeometry {
    pub dim: usize,
    pub vertices: Vec<RVector>,
    pub edge_lengths2: Vec<Rational>,
    pub area2: Option<Rational>,
    pub angles: Vec<Angle>,
    pub shape: Shape,
}

fn angle(u: &RVector, v: &RVector) -> Angle {
    let d = u.dot(v);
    let cos2 = &(&d * &d) / &(u.norm2() * v.norm2());
    Angle { cos2, obtuse: d.is_negative() }
}

/// Edge lengths, area and angles of a point, edge or polygon of the region.
pub fn face_geometry(region: &Region, face: &Face) -> Result<FaceGeometry, FaceError> {
    let pts = region.vertex_vectors(face);
    match face.dim() {
        0 => Ok(FaceGeometry { dim: 0, vertices: pts, edge_lengths2: Vec::new(), area2: None, angles: Vec::new(), shape: Shape::Point }),
        1 => {
            let l = pts[1].sub(&pts[0]).norm2();
            Ok(FaceGeometry { dim: 1, vertices: pts, edge_lengths2: vec![l], area2: None, angles: Vec::new(), shape: Shape::Edge })
        }
        2 => polygon(region, face),
        d => Err(FaceError::Unsupported(format!("geometry of {d}-faces"))),
    }
}

fn polygon(region: &Region, face: &Face) -> Result<FaceGeometry, FaceError> {
    let edges = region.children(face);
    let k = face.vertices().len();
    if edges.len() != k {
        return Err(FaceError::Inconsistent("polygon edge count differs from vertex count".into()));
    }
    let mut order = vec![face.vertices()[0]];
    let mut used = vec![false; edges.len()];
    while order.len() < k {
        let last = *order.last().expect("nonempty");
        let (i, e) = edges
            .iter()
            .enumerate()
            .find(|(i, e)| !used[*i] && e.contains_vertex(last))
            .ok_or_else(|| FaceError::Inconsistent("polygon boundary is not a cycle".into()))?;
        used[i] = true;
        let next = if e.vertices()[0] == last { e.vertices()[1] } else { e.vertices()[0] };
        order.push(next);
    }
    let pts: Vec<RVector> = order.iter().map(|&v| region.store().point(v).to_rvector()).collect();
    let edge_lengths2: Vec<Rational> = (0..k).map(|i| pts[(i + 1) % k].sub(&pts[i]).norm2()).collect();
    let angles: Vec<Angle> = (0..k)
        .map(|i| {
            let prev = pts[(i + k - 1) % k].sub(&pts[i]);
            let next = pts[(i + 1) % k].sub(&pts[i]);
            angle(&prev, &next)
        })
        .collect();

    let b = RMatrix::from_rows(vec![pts[1].sub(&pts[0]), pts[k - 1].sub(&pts[0])])?;
    let gram = b.mul(&b.transpose());
    let gram_inv = gram.inverse()?;
    let coords = |p: &RVector| gram_inv.mul_vec(&b.mul_vec(&p.sub(&pts[0])));
    let lam: Vec<RVector> = pts.iter().map(coords).collect();
    let mut twice_area = Rational::zero();
    for i in 1..k - 1 {
        let (u, v) = (&lam[i], &lam[i + 1]);
        twice_area = &twice_area + &(&u[0] * &v[1] - &u[1] * &v[0]).abs();
    }
    let half = &twice_area * &Rational::new(1, 2);
    let area2 = &(&half * &half) * &gram.determinant()?;

    let all_equal = edge_lengths2.iter().all(|l| *l == edge_lengths2[0]);
    let right = angles.iter().all(|a| a.cos2.is_zero());
    let shape = match k {
        3 if all_equal => Shape::Equilateral,
        3 if edge_lengths2[0] == edge_lengths2[1] || edge_lengths2[1] == edge_lengths2[2] || edge_lengths2[0] == edge_lengths2[2] => {
            Shape::Isosceles
        }
        3 => Shape::Scalene,
        4 if all_equal && right => Shape::Square,
        4 if right => Shape::Rectangle,
        4 if all_equal => Shape::Rhombus,
        4 => Shape::Quadrilateral,
        _ => Shape::Polygon,
    };
    Ok(FaceGeometry { dim: 2, vertices: pts, edge_lengths2, area2: Some(area2), angles, shape })
}
