//! Semantic map: named room, furniture and door contours with containment and
//! connectivity references.

use crate::geometry::{Point2, Polygon2, Pose2, BOUNDARY_TOLERANCE};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

pub const DEFAULT_STANDOFF: f64 = 0.6;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("no feasible edge of `{target}` at standoff {standoff} m")]
    NoFeasibleEdge { target: String, standoff: f64 },
    #[error("standoff must be positive and finite, got {0}")]
    InvalidStandoff(f64),
}

impl From<serde_json::Error> for MapError {
    fn from(e: serde_json::Error) -> Self {
        MapError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Room {
    pub name: String,
    pub contour: Polygon2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Furniture {
    pub name: String,
    pub room: String,
    pub contour: Polygon2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Door {
    pub name: String,
    pub rooms: [String; 2],
    pub contour: Polygon2,
}

/// Immutable after construction; all cross-references are checked by
/// [`SemanticMap::new`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SemanticMap {
    rooms: Vec<Room>,
    furniture: Vec<Furniture>,
    doors: Vec<Door>,
}

#[derive(Serialize, Deserialize)]
struct RawArea {
    name: String,
    contour: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct RawFurniture {
    name: String,
    room: String,
    contour: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct RawDoor {
    name: String,
    rooms: [String; 2],
    contour: Vec<Point2>,
}

/// On-disk layout of a map file.
#[derive(Serialize, Deserialize, Default)]
pub(crate) struct RawMap {
    #[serde(default)]
    rooms: Vec<RawArea>,
    #[serde(default)]
    furniture: Vec<RawFurniture>,
    #[serde(default)]
    doors: Vec<RawDoor>,
}

fn contour(kind: &str, name: &str, pts: Vec<Point2>) -> Result<Polygon2, MapError> {
    Polygon2::new(pts)
        .map_err(|e| MapError::Validation(format!("{kind} `{name}` contour invalid: {e}")))
}

/// Result of a point-location query.
#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub room: Option<String>,
    /// Set when several rooms contain the query point.
    pub diagnostic: Option<String>,
}

impl SemanticMap {
    pub fn new(
        rooms: Vec<Room>,
        furniture: Vec<Furniture>,
        doors: Vec<Door>,
    ) -> Result<Self, MapError> {
        let map = Self {
            rooms,
            furniture,
            doors,
        };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), MapError> {
        fn unique<'a>(kind: &str, names: impl Iterator<Item = &'a str>) -> Result<(), MapError> {
            let mut seen = HashSet::new();
            for n in names {
                if !seen.insert(n) {
                    return Err(MapError::Validation(format!("duplicate {kind} name `{n}`")));
                }
            }
            Ok(())
        }
        unique("room", self.rooms.iter().map(|r| r.name.as_str()))?;
        unique("furniture", self.furniture.iter().map(|f| f.name.as_str()))?;
        unique("door", self.doors.iter().map(|d| d.name.as_str()))?;
        for f in &self.furniture {
            let room = self.room(&f.room).ok_or_else(|| {
                MapError::Validation(format!(
                    "furniture `{}` references missing room `{}`",
                    f.name, f.room
                ))
            })?;
            if !room.contour.contains(f.contour.centroid()) {
                return Err(MapError::Validation(format!(
                    "furniture `{}` centroid lies outside room `{}`",
                    f.name, f.room
                )));
            }
        }
        for d in &self.doors {
            for r in &d.rooms {
                if self.room(r).is_none() {
                    return Err(MapError::Validation(format!(
                        "door `{}` references missing room `{r}`",
                        d.name
                    )));
                }
            }
            if d.rooms[0] == d.rooms[1] {
                return Err(MapError::Validation(format!(
                    "door `{}` must connect two distinct rooms",
                    d.name
                )));
            }
        }
        Ok(())
    }

    pub fn rooms(&self) -> &[Room] {
        &self.rooms
    }

    pub fn furniture(&self) -> &[Furniture] {
        &self.furniture
    }

    pub fn doors(&self) -> &[Door] {
        &self.doors
    }

    pub fn room(&self, name: &str) -> Option<&Room> {
        self.rooms.iter().find(|r| r.name == name)
    }

    pub fn furniture_named(&self, name: &str) -> Option<&Furniture> {
        self.furniture.iter().find(|f| f.name == name)
    }

    pub fn door(&self, name: &str) -> Option<&Door> {
        self.doors.iter().find(|d| d.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.rooms.is_empty() && self.furniture.is_empty() && self.doors.is_empty()
    }

    /// Bounding box over every contour, or `None` for an empty map.
    pub fn bounds(&self) -> Option<(Point2, Point2)> {
        let pts: Vec<Point2> = self
            .rooms
            .iter()
            .map(|r| &r.contour)
            .chain(self.furniture.iter().map(|f| &f.contour))
            .chain(self.doors.iter().map(|d| &d.contour))
            .flat_map(|c| c.vertices().iter().copied())
            .collect();
        if pts.is_empty() {
            None
        } else {
            Some(crate::geometry::bounds_of(&pts))
        }
    }

    /// Finds the room containing `p`. Overlapping candidates resolve to the
    /// smallest area, then to file order.
    pub fn locate(&self, p: Point2) -> Location {
        let hits: Vec<&Room> = self.rooms.iter().filter(|r| r.contour.contains(p)).collect();
        match hits.len() {
            0 => Location {
                room: None,
                diagnostic: None,
            },
            1 => Location {
                room: Some(hits[0].name.clone()),
                diagnostic: None,
            },
            _ => {
                let mut best = hits[0];
                for r in &hits[1..] {
                    if r.contour.area() < best.contour.area() {
                        best = r;
                    }
                }
                let names: Vec<&str> = hits.iter().map(|r| r.name.as_str()).collect();
                Location {
                    room: Some(best.name.clone()),
                    diagnostic: Some(format!(
                        "point ({}, {}) lies in {} rooms: {}",
                        p.x,
                        p.y,
                        hits.len(),
                        names.join(", ")
                    )),
                }
            }
        }
    }

    /// Standoff pose in front of one edge of a furniture contour.
    pub fn navigation_point(&self, target: &str, standoff: f64) -> Result<NavGoal, MapError> {
        if !(standoff > 0.0 && standoff.is_finite()) {
            return Err(MapError::InvalidStandoff(standoff));
        }
        let furniture = self
            .furniture_named(target)
            .ok_or_else(|| MapError::UnknownTarget(target.to_string()))?;
        let room = self
            .room(&furniture.room)
            .expect("furniture room validated at construction");
        let mut best: Option<NavGoal> = None;
        for (edge, (a, b)) in furniture.contour.edges().enumerate() {
            let d = b.sub(a);
            let len = d.norm();
            // Outward normal of a counter-clockwise contour.
            let normal = Point2::new(d.y / len, -d.x / len);
            let midpoint = a.add(d.scale(0.5));
            let goal = midpoint.add(normal.scale(standoff));
            if !room.contour.contains(goal) {
                continue;
            }
            if self.furniture.iter().any(|f| f.contour.contains(goal)) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => len > b.edge_length + BOUNDARY_TOLERANCE,
            };
            if better {
                let to_mid = midpoint.sub(goal);
                best = Some(NavGoal {
                    pose: Pose2::new(goal, to_mid.y.atan2(to_mid.x)),
                    edge,
                    edge_length: len,
                    midpoint,
                });
            }
        }
        best.ok_or_else(|| MapError::NoFeasibleEdge {
            target: target.to_string(),
            standoff,
        })
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, MapError> {
        let raw: RawMap = serde_json::from_slice(bytes)?;
        Self::from_raw(raw)
    }

    pub(crate) fn from_raw(raw: RawMap) -> Result<Self, MapError> {
        let rooms = raw
            .rooms
            .into_iter()
            .map(|r| {
                Ok(Room {
                    contour: contour("room", &r.name, r.contour)?,
                    name: r.name,
                })
            })
            .collect::<Result<Vec<_>, MapError>>()?;
        let furniture = raw
            .furniture
            .into_iter()
            .map(|f| {
                Ok(Furniture {
                    contour: contour("furniture", &f.name, f.contour)?,
                    name: f.name,
                    room: f.room,
                })
            })
            .collect::<Result<Vec<_>, MapError>>()?;
        let doors = raw
            .doors
            .into_iter()
            .map(|d| {
                Ok(Door {
                    contour: contour("door", &d.name, d.contour)?,
                    name: d.name,
                    rooms: d.rooms,
                })
            })
            .collect::<Result<Vec<_>, MapError>>()?;
        Self::new(rooms, furniture, doors)
    }

    pub(crate) fn to_raw(&self) -> RawMap {
        RawMap {
            rooms: self
                .rooms
                .iter()
                .map(|r| RawArea {
                    name: r.name.clone(),
                    contour: r.contour.vertices().to_vec(),
                })
                .collect(),
            furniture: self
                .furniture
                .iter()
                .map(|f| RawFurniture {
                    name: f.name.clone(),
                    room: f.room.clone(),
                    contour: f.contour.vertices().to_vec(),
                })
                .collect(),
            doors: self
                .doors
                .iter()
                .map(|d| RawDoor {
                    name: d.name.clone(),
                    rooms: d.rooms.clone(),
                    contour: d.contour.vertices().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Vec<u8> {
        serde_json::to_vec_pretty(&self.to_raw()).expect("map serialization is infallible")
    }
}

impl Serialize for SemanticMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemanticMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawMap::deserialize(d)?;
        SemanticMap::from_raw(raw).map_err(serde::de::Error::custom)
    }
}

pub fn load_map(bytes: &[u8]) -> Result<SemanticMap, MapError> {
    SemanticMap::from_json(bytes)
}

pub fn save_map(map: &SemanticMap) -> Vec<u8> {
    map.to_json()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NavGoal {
    pub pose: Pose2,
    /// Index of the contour edge the goal faces.
    pub edge: usize,
    pub edge_length: f64,
    pub midpoint: Point2,
}
