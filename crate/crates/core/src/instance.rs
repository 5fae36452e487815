//! On-disk formats: voter instances, placements, responses, and reports.
//!
//! Coordinates are stored as strings so files stay exact: `"3/7"`, `"-2"`,
//! and `"0.125"` all parse back to the rational they denote. Plain JSON
//! integers are also accepted on input.

use crate::geometry::{GameError, Metric, Point, Square, WeightedPointSet};
use crate::num::{format_rat, parse_rat, Rat};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fs;
use std::path::Path;

/// One-sided rational text (or integer) in a JSON file.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    fn to_rat<E: DeError>(&self) -> Result<Rat, E> {
        match self {
            RatRepr::Int(n) => Ok(crate::num::rat(*n)),
            RatRepr::Str(s) => parse_rat(s).map_err(E::custom),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (format_rat(&self.x), format_rat(&self.y)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let (x, y) = <(RatRepr, RatRepr)>::deserialize(d)?;
        Ok(Point::new(x.to_rat()?, y.to_rat()?))
    }
}

impl Serialize for Square {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            x0: &'a str,
            y0: &'a str,
            size: &'a str,
        }
        Dto {
            x0: &format_rat(&self.x0),
            y0: &format_rat(&self.y0),
            size: &format_rat(&self.size),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Square {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Square, D::Error> {
        #[derive(Deserialize)]
        struct Dto {
            x0: RatRepr,
            y0: RatRepr,
            size: RatRepr,
        }
        let dto = Dto::deserialize(d)?;
        Ok(Square::new(dto.x0.to_rat()?, dto.y0.to_rat()?, dto.size.to_rat()?))
    }
}

/// Serializes a rational as its canonical string.
pub fn rat_ser<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(x))
}

/// Deserializes a rational from a string or integer.
pub fn rat_de<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    RatRepr::deserialize(d)?.to_rat()
}

fn opt_rat_ser<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&format_rat(v)),
        None => s.serialize_none(),
    }
}

fn opt_rat_de<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
    let v = Option::<RatRepr>::deserialize(d)?;
    v.map(|r| r.to_rat()).transpose()
}

/// Errors while reading or writing game files.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed file {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("inconsistent instance: {0}")]
    Game(#[from] GameError),
}

/// A voter instance: the metric plus the weighted voter set.
#[derive(Clone, Debug)]
pub struct Instance {
    pub metric: Metric,
    pub voters: WeightedPointSet,
    /// Seed and generator description when this instance was generated.
    pub provenance: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDto {
    metric: Metric,
    points: Vec<Point>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "opt_weights_ser",
        deserialize_with = "opt_weights_de"
    )]
    weights: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

fn opt_weights_ser<S: Serializer>(x: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => {
            let strings: Vec<String> = v.iter().map(format_rat).collect();
            s.serialize_some(&strings)
        }
        None => s.serialize_none(),
    }
}

fn opt_weights_de<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rat>>, D::Error> {
    let v = Option::<Vec<RatRepr>>::deserialize(d)?;
    v.map(|rs| rs.iter().map(|r| r.to_rat()).collect()).transpose()
}

impl Instance {
    pub fn new(metric: Metric, voters: WeightedPointSet) -> Instance {
        Instance { metric, voters, provenance: None }
    }

    /// True when every voter has weight one.
    pub fn is_unweighted(&self) -> bool {
        self.voters.weights().iter().all(|w| *w == crate::num::rat(1))
    }

    pub fn to_json(&self) -> String {
        let weights =
            if self.is_unweighted() { None } else { Some(self.voters.weights().to_vec()) };
        let dto = InstanceDto {
            metric: self.metric,
            points: self.voters.points().to_vec(),
            weights,
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&dto).expect("instance serialization cannot fail")
    }

    pub fn from_json(path_label: &str, text: &str) -> Result<Instance, FileError> {
        let dto: InstanceDto = serde_json::from_str(text)
            .map_err(|source| FileError::Json { path: path_label.to_string(), source })?;
        let voters = match dto.weights {
            Some(w) => WeightedPointSet::new(dto.points, w)?,
            None => WeightedPointSet::unweighted(dto.points)?,
        };
        Ok(Instance { metric: dto.metric, voters, provenance: dto.provenance })
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        fs::write(path, self.to_json() + "\n")
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Instance, FileError> {
        let text = fs::read_to_string(path)
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })?;
        Instance::from_json(&path.display().to_string(), &text)
    }
}

/// A placement produced by one of the first player's strategies, with enough
/// metadata to audit its budget and block structure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Placement {
    pub metric: Metric,
    pub strategy: String,
    pub k: usize,
    pub points: Vec<Point>,
    /// Voter quota per region for quadtree strategies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Block side length for quadtree strategies.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "opt_rat_ser",
        deserialize_with = "opt_rat_de"
    )]
    pub block_size: Option<Rat>,
    /// Blocks assigned per placed point, parallel to `points`, for quadtree
    /// strategies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Square>>,
    /// The guaranteed fraction of total voter mass this strategy retains
    /// against every reply, when the strategy gives one.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "opt_rat_ser",
        deserialize_with = "opt_rat_de"
    )]
    pub guarantee: Option<Rat>,
}

impl Placement {
    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self).expect("placement serialization");
        fs::write(path, text + "\n")
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Placement, FileError> {
        let text = fs::read_to_string(path)
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&text)
            .map_err(|source| FileError::Json { path: path.display().to_string(), source })
    }
}

/// The second player's best reply and what it captures.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Response {
    pub point: Point,
    /// Voter mass the reply captures.
    #[serde(serialize_with = "rat_ser", deserialize_with = "rat_de")]
    pub mass: Rat,
    /// Indices of the voters it captures, in input order.
    pub captured: Vec<usize>,
}

impl Response {
    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self).expect("response serialization");
        fs::write(path, text + "\n")
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Response, FileError> {
        let text = fs::read_to_string(path)
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&text)
            .map_err(|source| FileError::Json { path: path.display().to_string(), source })
    }
}

/// Outcome report for one full round: placement, best reply, and the scores.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundReport {
    pub metric: Metric,
    pub strategy: String,
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "rat_ser", deserialize_with = "rat_de")]
    pub total_mass: Rat,
    pub placement: Vec<Point>,
    pub response: Point,
    #[serde(serialize_with = "rat_ser", deserialize_with = "rat_de")]
    pub p_mass: Rat,
    #[serde(serialize_with = "rat_ser", deserialize_with = "rat_de")]
    pub q_mass: Rat,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "opt_rat_ser",
        deserialize_with = "opt_rat_de"
    )]
    pub guarantee: Option<Rat>,
    /// Whether `p_mass >= guarantee * total_mass`, when a guarantee exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantee_met: Option<bool>,
}

impl RoundReport {
    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self).expect("report serialization");
        fs::write(path, text + "\n")
            .map_err(|source| FileError::Io { path: path.display().to_string(), source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    #[test]
    fn instance_round_trip() {
        let pts = vec![
            Point::new(rat(0), rat(0)),
            Point::new(frac(1, 3), frac(-2, 7)),
            Point::new(frac(1, 8), rat(5)),
        ];
        let inst = Instance::new(Metric::L2, WeightedPointSet::unweighted(pts).unwrap());
        let text = inst.to_json();
        let back = Instance::from_json("mem", &text).unwrap();
        assert_eq!(back.metric, Metric::L2);
        assert_eq!(back.voters.points(), inst.voters.points());
        assert!(back.is_unweighted());
    }

    #[test]
    fn weighted_instance_round_trip() {
        let pts = vec![Point::new(rat(0), rat(0)), Point::new(rat(1), rat(1))];
        let ws = vec![frac(1, 2), frac(7, 3)];
        let inst = Instance::new(Metric::L1, WeightedPointSet::new(pts, ws.clone()).unwrap());
        let back = Instance::from_json("mem", &inst.to_json()).unwrap();
        assert_eq!(back.voters.weights(), &ws[..]);
        assert_eq!(back.metric, Metric::L1);
    }

    #[test]
    fn accepts_integer_coordinates() {
        let text = r#"{"metric":"l1","points":[[0,0],[3,"4/3"]]}"#;
        let inst = Instance::from_json("mem", text).unwrap();
        assert_eq!(inst.voters.points()[1], Point::new(rat(3), frac(4, 3)));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(Instance::from_json("mem", "{").is_err());
        let dup = r#"{"metric":"l2","points":[[0,0],[0,0]]}"#;
        assert!(Instance::from_json("mem", dup).is_err());
        let badweight = r#"{"metric":"l2","points":[[0,0]],"weights":["0"]}"#;
        assert!(Instance::from_json("mem", badweight).is_err());
    }

    #[test]
    fn placement_round_trip() {
        let p = Placement {
            metric: Metric::L2,
            strategy: "eps-net".into(),
            k: 4,
            points: vec![Point::new(frac(1, 2), frac(1, 2))],
            m: None,
            block_size: Some(frac(1, 4)),
            blocks: Some(vec![Square::new(rat(0), rat(0), frac(1, 4))]),
            guarantee: Some(frac(1, 2)),
        };
        let text = serde_json::to_string(&p).unwrap();
        let back: Placement = serde_json::from_str(&text).unwrap();
        assert_eq!(back.points, p.points);
        assert_eq!(back.block_size, p.block_size);
        assert_eq!(back.blocks.as_ref().unwrap()[0], p.blocks.as_ref().unwrap()[0]);
        assert_eq!(back.guarantee, p.guarantee);
    }
}
