//! Normalized states on the group of formal differences of `W`.

use std::time::Instant;

use itertools::Itertools;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{affinely_independent, dot, is_nonnegative, primitive, solve};
use crate::axioms::{finish, new_report};
use crate::cap::{Cap, CapIndex};
use crate::divisibility::is_full;
use crate::error::{CuError, Result};
use crate::ideal::bounded_part;
use crate::model::{CuModel, Element};
use crate::report::{el, CheckOptions, CheckReport, Instance};

const EXHAUSTIVE_TRIPLES: usize = 200_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateCone {
    /// Extreme points as weight vectors over the poset points.
    pub vertices: Vec<Vec<String>>,
    pub constraints: usize,
    pub bounded: bool,
    pub simplex: bool,
    pub report: CheckReport,
}

fn finite_vector(x: &Element) -> Option<Vec<Rational64>> {
    x.as_values().iter().map(|s| s.rank().finite()).collect()
}

/// The states `λ : K₀* → ℝ` with `λ(u) = 1` on an Lsc model, computed from
/// the cap-restricted positive cone `{x − y : y ≤ x in W}`.
///
/// A state is a weight vector `w` with `w·g ≥ 0` for every generator `g`
/// of the cone and `w·u = 1`. Vertices come from exact solutions of the
/// tight systems; the simplex flag is affine independence of the vertices.
pub fn dimension_function_cone(model: &CuModel, u: &Element, cap: &Cap, opts: &CheckOptions) -> Result<StateCone> {
    let start = Instant::now();
    let CuModel::Lsc(m) = model else {
        return Err(CuError::Unsupported("the state cone is computed for Lsc models".into()));
    };
    model.check(u)?;
    let uv = finite_vector(u)
        .filter(|_| model.wb(u, u) && is_full(model, u))
        .ok_or_else(|| CuError::Precondition(format!("{} is not full and compact", model.fmt_element(u))))?;
    let w = bounded_part(model, u)?;
    let idx = CapIndex::new(model, cap);
    let mut r = new_report("state-cone", &idx);
    let members: Vec<&Element> = idx
        .cap_elements()
        .iter()
        .filter(|x| w.contains(model, x, opts.n_bound) == Some(true))
        .collect();

    // cancellation in W: x + z ≤ y + z implies x ≤ y
    let n = members.len();
    let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n.pow(3) <= EXHAUSTIVE_TRIPLES {
        Box::new(
            (0..n)
                .cartesian_product(0..n)
                .cartesian_product(0..n)
                .map(|((a, b), c)| (a, b, c)),
        )
    } else {
        r.note(format!(
            "cancellation sampled on {} triples (seed {})",
            opts.samples, opts.seed
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        Box::new(
            (0..opts.samples)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect::<Vec<_>>()
                .into_iter(),
        )
    };
    for (a, b, c) in triples {
        let (x, y, z) = (members[a], members[b], members[c]);
        if model.le(&model.plus(x, z), &model.plus(y, z)) && !model.le(x, y) {
            r.fail(Instance::new(
                model,
                "cancellation",
                vec![("x", el(x)), ("y", el(y)), ("z", el(z))],
            ));
            return Err(CuError::Unsupported(format!(
                "W is not cancellative on the cap: {} + {} ≤ {} + {}",
                model.fmt_element(x),
                model.fmt_element(z),
                model.fmt_element(y),
                model.fmt_element(z)
            )));
        }
    }

    let vecs: Vec<(&Element, Vec<Rational64>)> = members
        .iter()
        .filter_map(|&x| finite_vector(x).map(|v| (x, v)))
        .collect();
    let mut gens: Vec<Vec<Rational64>> = Vec::new();
    for (x, y) in vecs.iter().cartesian_product(&vecs) {
        if x.0 != y.0 && model.le(y.0, x.0) {
            let g: Vec<Rational64> = x.1.iter().zip(&y.1).map(|(a, b)| a - b).collect();
            gens.push(primitive(&g));
        }
    }
    gens.sort();
    gens.dedup();
    let dim = m.poset.len();
    r.fact("generators", gens.len());

    let mut vertices: Vec<Vec<Rational64>> = Vec::new();
    for tight in gens.iter().combinations(dim.saturating_sub(1)) {
        r.stats.tuples += 1;
        let mut a: Vec<Vec<Rational64>> = tight.iter().map(|g| g.to_vec()).collect();
        a.push(uv.clone());
        let mut b = vec![Rational64::from_integer(0); dim - 1];
        b.push(Rational64::from_integer(1));
        if let Some(v) = solve(&a, &b) {
            if gens.iter().all(|g| dot(g, &v) >= Rational64::from_integer(0)) && !vertices.contains(&v) {
                vertices.push(v);
            }
        }
    }
    vertices.sort();
    // the unit vectors among the generators force w ≥ 0, and w·u = 1 with
    // u > 0 then bounds every coordinate
    let bounded = (0..dim).all(|p| {
        gens.iter().any(|g| {
            is_nonnegative(g)
                && g.iter()
                    .enumerate()
                    .all(|(q, v)| (q == p) == (*v != Rational64::from_integer(0)))
        })
    });
    let simplex = bounded && !vertices.is_empty() && affinely_independent(&vertices);
    if !bounded {
        r.note("the cap's generators do not certify boundedness");
    }
    r.fact("vertices", vertices.len());
    r.fact("simplex", simplex);
    Ok(StateCone {
        vertices: vertices
            .iter()
            .map(|v| v.iter().map(|q| q.to_string()).collect())
            .collect(),
        constraints: gens.len(),
        bounded,
        simplex,
        report: finish(r, start),
    })
}
