use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ground::{ExtRat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rat,
    pub length: usize,
}

/// Lower convex hull of a finite set of points `(i, v_i)`. Points with
/// infinite ordinate are kept in `points` but play no role in the hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    points: Vec<(usize, ExtRat)>,
    vertices: Vec<(usize, Rat)>,
    segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn new(points: Vec<(usize, ExtRat)>) -> Result<Self> {
        let mut finite: Vec<(usize, Rat)> = points
            .iter()
            .filter_map(|(i, v)| v.finite().map(|q| (*i, q.clone())))
            .collect();
        finite.sort();
        // sorted by (abscissa, ordinate): keep the lowest point per abscissa
        finite.dedup_by_key(|(i, _)| *i);
        if finite.len() < 2 {
            return Err(Error::Contract("a Newton polygon needs two points with finite ordinate".into()));
        }

        let mut hull: Vec<(usize, Rat)> = Vec::with_capacity(finite.len());
        for pt in finite {
            while hull.len() >= 2 && !turns_left(&hull[hull.len() - 2], &hull[hull.len() - 1], &pt) {
                hull.pop();
            }
            hull.push(pt);
        }

        let segments = hull
            .windows(2)
            .map(|w| {
                let length = w[1].0 - w[0].0;
                Segment { slope: (&w[1].1 - &w[0].1) / BigInt::from(length), length }
            })
            .collect();
        Ok(NewtonPolygon { points, vertices: hull, segments })
    }

    pub fn points(&self) -> &[(usize, ExtRat)] {
        &self.points
    }

    pub fn vertices(&self) -> &[(usize, Rat)] {
        &self.vertices
    }

    /// Segments left to right; slopes strictly increase.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }
}

fn turns_left(o: &(usize, Rat), a: &(usize, Rat), b: &(usize, Rat)) -> bool {
    let dx1 = BigInt::from(a.0 - o.0);
    let dx2 = BigInt::from(b.0 - o.0);
    let cross = &(&b.1 - &o.1) * dx1 - &(&a.1 - &o.1) * dx2;
    cross > Rat::zero()
}
