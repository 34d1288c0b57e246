//! Instance files and the seeded generators that produce them.
//!
//! An instance is one JSON document. Point arrays are flat and row-major, so a
//! set of `count` points in dimension `d` carries `count * d` coordinates.
//! Serialization is bit-exact for finite values (`serde_json` with
//! `float_roundtrip`).
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::caratheodory::WeightedFamily;
use crate::error::{Error, Result};
use crate::geometry::{regular_simplex, vector as v, ConvexBody, Point, PointSet, WHOLE_SPACE_RADIUS};
use crate::helly::{
    self, fractional_tight_family, hyperplane_family, BodyFamily, HellyInstance, HyperplaneSplit,
};
use crate::tverberg::ColoredFamily;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    PointSet,
    ColoredFamily,
    WeightedFamily,
    BodyFamily,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::PointSet => "point_set",
            InstanceKind::ColoredFamily => "colored_family",
            InstanceKind::WeightedFamily => "weighted_family",
            InstanceKind::BodyFamily => "body_family",
        }
    }
}

/// `count` points, coordinates concatenated point by point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatPoints {
    pub count: usize,
    pub coords: Vec<f64>,
}

impl FlatPoints {
    pub fn from_set(set: &PointSet) -> Self {
        FlatPoints {
            count: set.len(),
            coords: set.points().iter().flat_map(|p| p.coords().iter().copied()).collect(),
        }
    }

    fn check(&self, dim: usize, what: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidArgument(format!("{what}: empty point array")));
        }
        check_len(what, self.coords.len(), self.count * dim)
    }

    pub fn to_set(&self, dim: usize) -> Result<PointSet> {
        self.check(dim, "points")?;
        PointSet::from_rows(self.coords.chunks(dim).map(<[f64]>::to_vec).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Hull { count: usize, coords: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x : normal·x <= offset}`.
    Halfspace { normal: Vec<f64>, offset: f64 },
    Hyperplane { normal: Vec<f64>, offset: f64 },
    WholeSpace,
}

impl BodySpec {
    pub fn from_body(body: &ConvexBody) -> Self {
        match body {
            ConvexBody::HullOfPoints(p) => {
                let f = FlatPoints::from_set(p);
                BodySpec::Hull { count: f.count, coords: f.coords }
            }
            ConvexBody::Ball { center, radius } => {
                if *radius == WHOLE_SPACE_RADIUS && center.norm() == 0.0 {
                    BodySpec::WholeSpace
                } else {
                    BodySpec::Ball { center: center.coords().to_vec(), radius: *radius }
                }
            }
            ConvexBody::Halfspace { normal, offset } => BodySpec::Halfspace {
                normal: normal.coords().to_vec(),
                offset: *offset,
            },
            ConvexBody::Hyperplane { normal, offset } => BodySpec::Hyperplane {
                normal: normal.coords().to_vec(),
                offset: *offset,
            },
        }
    }

    pub fn to_body(&self, dim: usize) -> Result<ConvexBody> {
        match self {
            BodySpec::Hull { count, coords } => {
                let f = FlatPoints { count: *count, coords: coords.clone() };
                Ok(ConvexBody::hull(f.to_set(dim)?))
            }
            BodySpec::Ball { center, radius } => {
                check_len("ball center", center.len(), dim)?;
                ConvexBody::ball(Point::new(center.clone())?, *radius)
            }
            BodySpec::Halfspace { normal, offset } => {
                check_len("halfspace normal", normal.len(), dim)?;
                ConvexBody::halfspace(Point::new(normal.clone())?, *offset)
            }
            BodySpec::Hyperplane { normal, offset } => {
                check_len("hyperplane normal", normal.len(), dim)?;
                ConvexBody::hyperplane(Point::new(normal.clone())?, *offset)
            }
            BodySpec::WholeSpace => Ok(ConvexBody::whole_space(dim)),
        }
    }
}

/// Kind-specific contents. The variant always agrees with the file's `kind`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    PointSet(FlatPoints),
    ColoredFamily {
        colors: Vec<FlatPoints>,
    },
    /// `weights[i]` are convex weights on `sets[i]` whose combination is `target`.
    WeightedFamily {
        sets: Vec<FlatPoints>,
        weights: Vec<Vec<f64>>,
        target: Vec<f64>,
    },
    /// `anchor` is the center `b` of the unit anchor ball.
    BodyFamily {
        families: Vec<Vec<BodySpec>>,
        anchor: Vec<f64>,
    },
}

impl Payload {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Payload::PointSet(_) => InstanceKind::PointSet,
            Payload::ColoredFamily { .. } => InstanceKind::ColoredFamily,
            Payload::WeightedFamily { .. } => InstanceKind::WeightedFamily,
            Payload::BodyFamily { .. } => InstanceKind::BodyFamily,
        }
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    schema_version: String,
    kind: InstanceKind,
    dimension: usize,
    payload: Value,
    #[serde(default)]
    metadata: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoredRaw {
    colors: Vec<FlatPoints>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightedRaw {
    sets: Vec<FlatPoints>,
    weights: Vec<Vec<f64>>,
    target: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyRaw {
    families: Vec<Vec<BodySpec>>,
    anchor: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct InstanceFile {
    pub schema_version: String,
    pub dimension: usize,
    pub payload: Payload,
    /// Provenance: generator name, parameters, seed.
    pub metadata: BTreeMap<String, Value>,
}

impl TryFrom<RawInstance> for InstanceFile {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schema_version {:?}",
                raw.schema_version
            )));
        }
        let payload = match raw.kind {
            InstanceKind::PointSet => Payload::PointSet(serde_json::from_value(raw.payload)?),
            InstanceKind::ColoredFamily => {
                let c: ColoredRaw = serde_json::from_value(raw.payload)?;
                Payload::ColoredFamily { colors: c.colors }
            }
            InstanceKind::WeightedFamily => {
                let w: WeightedRaw = serde_json::from_value(raw.payload)?;
                Payload::WeightedFamily { sets: w.sets, weights: w.weights, target: w.target }
            }
            InstanceKind::BodyFamily => {
                let b: BodyRaw = serde_json::from_value(raw.payload)?;
                Payload::BodyFamily { families: b.families, anchor: b.anchor }
            }
        };
        let file = InstanceFile {
            schema_version: raw.schema_version,
            dimension: raw.dimension,
            payload,
            metadata: raw.metadata,
        };
        file.validate()?;
        Ok(file)
    }
}

impl From<InstanceFile> for RawInstance {
    fn from(f: InstanceFile) -> Self {
        RawInstance {
            schema_version: f.schema_version,
            kind: f.payload.kind(),
            dimension: f.dimension,
            payload: serde_json::to_value(&f.payload).expect("payload serializes"),
            metadata: f.metadata,
        }
    }
}

fn check_len(what: &str, found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::InvalidArgument(format!(
            "{what}: expected {expected} values, found {found}"
        )));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

impl InstanceFile {
    fn new(dimension: usize, payload: Payload, metadata: BTreeMap<String, Value>) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION.to_string(),
            dimension,
            payload,
            metadata,
        }
    }

    pub fn kind(&self) -> InstanceKind {
        self.payload.kind()
    }

    pub fn from_point_set(set: &PointSet, metadata: BTreeMap<String, Value>) -> Self {
        Self::new(set.dim(), Payload::PointSet(FlatPoints::from_set(set)), metadata)
    }

    pub fn from_colored(family: &ColoredFamily, metadata: BTreeMap<String, Value>) -> Self {
        let colors = family.colors().iter().map(FlatPoints::from_set).collect();
        Self::new(family.dim(), Payload::ColoredFamily { colors }, metadata)
    }

    pub fn from_weighted(family: &WeightedFamily, target: &Point, metadata: BTreeMap<String, Value>) -> Self {
        let payload = Payload::WeightedFamily {
            sets: family.sets().iter().map(FlatPoints::from_set).collect(),
            weights: family.weights().to_vec(),
            target: target.coords().to_vec(),
        };
        Self::new(family.dim(), payload, metadata)
    }

    pub fn from_bodies(bf: &BodyFamily, metadata: BTreeMap<String, Value>) -> Self {
        let payload = Payload::BodyFamily {
            families: bf.families().iter().map(|f| f.iter().map(BodySpec::from_body).collect()).collect(),
            anchor: bf.anchor().coords().to_vec(),
        };
        Self::new(bf.dim(), payload, metadata)
    }

    /// Length and finiteness checks against `dimension` and the declared counts.
    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let points = |f: &FlatPoints, what: &str| -> Result<()> {
            f.check(d, what)?;
            check_finite(&f.coords)
        };
        match &self.payload {
            Payload::PointSet(f) => points(f, "point_set"),
            Payload::ColoredFamily { colors } => {
                if colors.is_empty() {
                    return Err(Error::InvalidArgument("colored_family: no colors".into()));
                }
                colors.iter().try_for_each(|c| points(c, "color class"))
            }
            Payload::WeightedFamily { sets, weights, target } => {
                if sets.is_empty() {
                    return Err(Error::InvalidArgument("weighted_family: no sets".into()));
                }
                check_len("weights", weights.len(), sets.len())?;
                for (s, w) in sets.iter().zip(weights) {
                    points(s, "weighted set")?;
                    check_len("set weights", w.len(), s.count)?;
                    check_finite(w)?;
                }
                check_len("target", target.len(), d)?;
                check_finite(target)
            }
            Payload::BodyFamily { families, anchor } => {
                check_len("anchor", anchor.len(), d)?;
                check_finite(anchor)?;
                if families.is_empty() || families.iter().any(Vec::is_empty) {
                    return Err(Error::InvalidArgument("body_family: empty family".into()));
                }
                for spec in families.iter().flatten() {
                    match spec {
                        BodySpec::Hull { count, coords } => {
                            points(&FlatPoints { count: *count, coords: coords.clone() }, "hull")?
                        }
                        BodySpec::Ball { center, radius } => {
                            check_len("ball center", center.len(), d)?;
                            check_finite(center)?;
                            check_finite(&[*radius])?;
                        }
                        BodySpec::Halfspace { normal, offset } | BodySpec::Hyperplane { normal, offset } => {
                            check_len("normal", normal.len(), d)?;
                            check_finite(normal)?;
                            check_finite(&[*offset])?;
                        }
                        BodySpec::WholeSpace => {}
                    }
                }
                Ok(())
            }
        }
    }

    fn mismatch(&self, expected: InstanceKind) -> Error {
        Error::KindMismatch {
            expected: expected.name().into(),
            found: self.kind().name().into(),
        }
    }

    pub fn point_set(&self) -> Result<PointSet> {
        match &self.payload {
            Payload::PointSet(f) => f.to_set(self.dimension),
            _ => Err(self.mismatch(InstanceKind::PointSet)),
        }
    }

    pub fn colored_family(&self) -> Result<ColoredFamily> {
        match &self.payload {
            Payload::ColoredFamily { colors } => {
                ColoredFamily::new(colors.iter().map(|c| c.to_set(self.dimension)).collect::<Result<_>>()?)
            }
            _ => Err(self.mismatch(InstanceKind::ColoredFamily)),
        }
    }

    pub fn weighted_family(&self) -> Result<(WeightedFamily, Point)> {
        match &self.payload {
            Payload::WeightedFamily { sets, weights, target } => {
                let sets = sets.iter().map(|s| s.to_set(self.dimension)).collect::<Result<_>>()?;
                Ok((WeightedFamily::new(sets, weights.clone())?, Point::new(target.clone())?))
            }
            _ => Err(self.mismatch(InstanceKind::WeightedFamily)),
        }
    }

    pub fn body_family(&self) -> Result<BodyFamily> {
        match &self.payload {
            Payload::BodyFamily { families, anchor } => {
                let fams = families
                    .iter()
                    .map(|f| f.iter().map(|s| s.to_body(self.dimension)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                BodyFamily::new(fams, Point::new(anchor.clone())?)
            }
            _ => Err(self.mismatch(InstanceKind::BodyFamily)),
        }
    }

    /// Integer metadata entry, if present.
    pub fn meta_usize(&self, key: &str) -> Option<usize> {
        self.metadata.get(key)?.as_u64().map(|x| x as usize)
    }

    /// Numeric array metadata entry, if present and well formed.
    pub fn meta_f64s(&self, key: &str) -> Option<Vec<f64>> {
        self.metadata.get(key)?.as_array()?.iter().map(Value::as_f64).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Uniform in the unit ball.
    #[default]
    Ball,
    /// Uniform in `[-1, 1]^d`.
    Cube,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    #[default]
    Uniform,
    /// Normalized exponential weights.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HellyShape {
    Halfspace,
    Hull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitParam {
    #[default]
    Alternating,
    Paired,
}

fn one() -> f64 {
    1.0
}

/// Generator name plus its parameters, as accepted by [`generate`].
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// `n` vertices in `R^(n-1)`, pairwise `edge` apart.
    RegularSimplex {
        n: usize,
        #[serde(default = "one")]
        edge: f64,
    },
    /// `n` Gaussian vertices in `R^(n-1)`.
    RandomSimplex { n: usize },
    RandomCloud {
        n: usize,
        d: usize,
        #[serde(default)]
        distribution: Distribution,
    },
    /// `r` color classes of `k` Gaussian points each.
    ColoredCloud { r: usize, k: usize, d: usize },
    /// `r` random sets of `size` points whose weighted combinations all equal
    /// a common Gaussian target.
    CaratheodoryFamily {
        r: usize,
        d: usize,
        size: usize,
        #[serde(default)]
        weights: WeightScheme,
    },
    /// Outer facet halfspaces of the regular simplex, tight for the precise Helly bound.
    HellyTight { n: usize, k: usize },
    HellyRandom { n: usize, k: usize, d: usize, shape: HellyShape },
    /// Parallel hyperplanes `x_i = +-r_i` plus `whole` whole-space copies per family.
    HyperplaneFamily {
        #[serde(default)]
        k: Option<usize>,
        m: Vec<usize>,
        rho: Vec<f64>,
        #[serde(default)]
        whole: usize,
        #[serde(default)]
        split: SplitParam,
    },
    /// `m_i` parallel hyperplanes and `n_i - m_i` whole-space copies per family.
    FractionalFamily { n: Vec<usize>, m: Vec<usize> },
}

/// Names accepted by [`generate`].
pub const GENERATORS: &[&str] = &[
    "regular_simplex",
    "random_simplex",
    "random_cloud",
    "colored_cloud",
    "caratheodory_family",
    "helly_tight",
    "helly_random",
    "hyperplane_family",
    "fractional_family",
];

fn gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

fn positive(name: &str, x: usize) -> Result<()> {
    if x == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be positive")));
    }
    Ok(())
}

fn helly_file(inst: HellyInstance, meta: BTreeMap<String, Value>) -> Result<InstanceFile> {
    let bf = BodyFamily::new(vec![inst.bodies], inst.anchor)?;
    Ok(InstanceFile::from_bodies(&bf, meta))
}

/// Builds the instance named by `name` from a JSON object of parameters.
///
/// Metadata records the generator, its parameters and the seed. Generators
/// without randomness ignore the seed apart from recording it.
pub fn generate(name: &str, params: &serde_json::Map<String, Value>, seed: u64) -> Result<InstanceFile> {
    if !GENERATORS.contains(&name) {
        return Err(Error::InvalidArgument(format!(
            "unknown generator {name:?} (known: {})",
            GENERATORS.join(", ")
        )));
    }
    let mut tagged = params.clone();
    tagged.insert("generator".into(), Value::String(name.into()));
    let spec: GeneratorSpec = serde_json::from_value(Value::Object(tagged))
        .map_err(|e| Error::InvalidArgument(format!("{name}: {e}")))?;
    let mut meta: BTreeMap<String, Value> = params.clone().into_iter().collect();
    meta.insert("generator".into(), Value::String(name.into()));
    meta.insert("seed".into(), json!(seed));
    generate_spec(&spec, seed, meta)
}

fn generate_spec(spec: &GeneratorSpec, seed: u64, mut meta: BTreeMap<String, Value>) -> Result<InstanceFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        GeneratorSpec::RegularSimplex { n, edge } => {
            if !(*edge > 0.0) || !edge.is_finite() {
                return Err(Error::InvalidArgument("edge must be positive".into()));
            }
            Ok(InstanceFile::from_point_set(&regular_simplex(*n, *edge)?, meta))
        }
        GeneratorSpec::RandomSimplex { n } => {
            if *n < 2 {
                return Err(Error::InvalidArgument("random_simplex needs n >= 2".into()));
            }
            let rows = (0..*n).map(|_| gaussian(&mut rng, n - 1)).collect();
            Ok(InstanceFile::from_point_set(&PointSet::from_rows(rows)?, meta))
        }
        GeneratorSpec::RandomCloud { n, d, distribution } => {
            positive("n", *n)?;
            positive("d", *d)?;
            let origin = vec![0.0; *d];
            let rows = (0..*n)
                .map(|_| match distribution {
                    Distribution::Ball => helly::ball_sample(&mut rng, &origin),
                    Distribution::Cube => (0..*d).map(|_| rng.random_range(-1.0..=1.0)).collect(),
                    Distribution::Gaussian => gaussian(&mut rng, *d),
                })
                .collect();
            Ok(InstanceFile::from_point_set(&PointSet::from_rows(rows)?, meta))
        }
        GeneratorSpec::ColoredCloud { r, k, d } => {
            positive("r", *r)?;
            positive("k", *k)?;
            positive("d", *d)?;
            let colors = (0..*r)
                .map(|_| PointSet::from_rows((0..*k).map(|_| gaussian(&mut rng, *d)).collect()))
                .collect::<Result<Vec<_>>>()?;
            Ok(InstanceFile::from_colored(&ColoredFamily::new(colors)?, meta))
        }
        GeneratorSpec::CaratheodoryFamily { r, d, size, weights } => {
            positive("r", *r)?;
            positive("d", *d)?;
            positive("size", *size)?;
            let target = gaussian(&mut rng, *d);
            let mut sets = Vec::with_capacity(*r);
            let mut ws = Vec::with_capacity(*r);
            for _ in 0..*r {
                let w: Vec<f64> = match weights {
                    WeightScheme::Uniform => vec![1.0 / *size as f64; *size],
                    WeightScheme::Random => {
                        let raw: Vec<f64> = (0..*size).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
                        let s: f64 = raw.iter().sum();
                        raw.iter().map(|x| x / s).collect()
                    }
                };
                let rows: Vec<Vec<f64>> = (0..*size).map(|_| gaussian(&mut rng, *d)).collect();
                let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
                let shift = v::sub(&target, &v::combine(&refs, &w));
                sets.push(PointSet::from_rows(rows.iter().map(|p| v::add(p, &shift)).collect())?);
                ws.push(w);
            }
            let family = WeightedFamily::new(sets, ws)?;
            Ok(InstanceFile::from_weighted(&family, &Point::new(target)?, meta))
        }
        GeneratorSpec::HellyTight { n, k } => {
            let inst = helly::simplex_facet_instance(*n, *k)?;
            meta.insert("k".into(), json!(k));
            meta.insert("radius".into(), json!(helly::precise_helly_bound(*n, *k)));
            helly_file(inst, meta)
        }
        GeneratorSpec::HellyRandom { n, k, d, shape } => {
            let inst = match shape {
                HellyShape::Halfspace => helly::random_halfspace_instance(*n, *k, *d, seed)?,
                HellyShape::Hull => helly::random_hull_instance(*n, *k, *d, seed)?,
            };
            meta.insert("k".into(), json!(k));
            helly_file(inst, meta)
        }
        GeneratorSpec::HyperplaneFamily { k, m, rho, whole, split } => {
            if k.is_some_and(|k| k != m.len()) {
                return Err(Error::InvalidArgument("hyperplane_family: k must equal len(m)".into()));
            }
            let split = match split {
                SplitParam::Alternating => HyperplaneSplit::Alternating,
                SplitParam::Paired => HyperplaneSplit::Paired,
            };
            let bf = hyperplane_family(m, rho, *whole, split)?;
            Ok(InstanceFile::from_bodies(&bf, meta))
        }
        GeneratorSpec::FractionalFamily { n, m } => {
            let fams = fractional_tight_family(n, m)?;
            let bf = BodyFamily::new(fams, Point::origin(n.len() - 1))?;
            Ok(InstanceFile::from_bodies(&bf, meta))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: Value) -> serde_json::Map<String, Value> {
        v.as_object().unwrap().clone()
    }

    #[test]
    fn regular_simplex_file_has_unit_edges() {
        let f = generate("regular_simplex", &params(json!({"n": 4, "edge": 1.0})), 0).unwrap();
        let s = f.point_set().unwrap();
        assert_eq!(s.len(), 4);
        for i in 0..4 {
            for j in 0..i {
                assert!((s.point(i).dist(s.point(j)) - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(f.metadata["generator"], json!("regular_simplex"));
    }

    #[test]
    fn every_generator_round_trips_bit_exactly() {
        let cases = [
            ("regular_simplex", json!({"n": 5})),
            ("random_simplex", json!({"n": 4})),
            ("random_cloud", json!({"n": 7, "d": 3, "distribution": "gaussian"})),
            ("colored_cloud", json!({"r": 3, "k": 2, "d": 4})),
            ("caratheodory_family", json!({"r": 3, "d": 2, "size": 4, "weights": "random"})),
            ("helly_tight", json!({"n": 5, "k": 2})),
            ("helly_random", json!({"n": 5, "k": 2, "d": 3, "shape": "hull"})),
            ("hyperplane_family", json!({"m": [2, 3], "rho": [0.5, 0.5], "whole": 1})),
            ("fractional_family", json!({"n": [3, 3], "m": [2, 1]})),
        ];
        for (name, p) in cases {
            let f = generate(name, &params(p), 11).unwrap();
            let back = InstanceFile::from_json(&f.to_json().unwrap()).unwrap();
            assert_eq!(back, f, "{name}");
            let bits = |f: &InstanceFile| serde_json::to_string(f).unwrap();
            assert_eq!(bits(&back), bits(&f));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = params(json!({"n": 20, "d": 5}));
        let a = generate("random_cloud", &p, 3).unwrap();
        let b = generate("random_cloud", &p, 3).unwrap();
        let c = generate("random_cloud", &p, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn caratheodory_family_hits_its_target() {
        let f = generate("caratheodory_family", &params(json!({"r": 4, "d": 3, "size": 5, "weights": "random"})), 1)
            .unwrap();
        let (fam, a) = f.weighted_family().unwrap();
        fam.check_target(&a, 1e-12).unwrap();
    }

    #[test]
    fn helly_tight_is_tangent() {
        let f = generate("helly_tight", &params(json!({"n": 5, "k": 2})), 0).unwrap();
        let bf = f.body_family().unwrap();
        let bodies: Vec<ConvexBody> = bf.families()[0].clone();
        let check = helly::check_kwise_hypothesis(&bodies, 2, bf.anchor(), Default::default()).unwrap();
        assert!(check.ok);
        assert!(check.min_slack.abs() < 1e-9, "{}", check.min_slack);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(generate("nope", &params(json!({})), 0).is_err());
        assert!(generate("regular_simplex", &params(json!({"n": 4, "bogus": 1})), 0).is_err());
        assert!(generate("hyperplane_family", &params(json!({"k": 3, "m": [1], "rho": [1.0]})), 0).is_err());
        let bad = r#"{"schema_version":"1","kind":"point_set","dimension":2,"payload":{"count":2,"coords":[0,1,2]}}"#;
        assert!(InstanceFile::from_json(bad).is_err());
        let wrong = r#"{"schema_version":"2","kind":"point_set","dimension":1,"payload":{"count":1,"coords":[0]}}"#;
        assert!(InstanceFile::from_json(wrong).is_err());
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let f = generate("regular_simplex", &params(json!({"n": 3})), 0).unwrap();
        assert!(matches!(f.body_family(), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn whole_space_survives_round_trip() {
        let f = generate("fractional_family", &params(json!({"n": [2, 2], "m": [1, 1]})), 0).unwrap();
        let bf = f.body_family().unwrap();
        assert_eq!(bf.families()[0][1], ConvexBody::whole_space(1));
    }
}
