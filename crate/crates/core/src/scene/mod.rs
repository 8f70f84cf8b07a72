//! Scene description, parsing, and the validity function over C-space.

mod checker;
mod schema;

pub use checker::ValidityChecker;

use std::collections::HashSet;

use crate::geometry::{Pose, Primitive, Vec3};
use crate::robot::{AttachedObject, Configuration, Joint, Link, RobotModel};
use schema::{PoseFile, RobotKindFile, SceneFile, ShapeKind};

/// Default validity-check resolution as a fraction of the joint-range diagonal.
pub const DEFAULT_RESOLUTION: f64 = 5.0e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid {0} configuration (out of limits or in collision)")]
    InvalidEndpoint(String),
}

fn schema_err(path: impl Into<String>, message: impl Into<String>) -> SceneError {
    SceneError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn contains_box(&self, lo: &Vec3, hi: &Vec3) -> bool {
        (0..3).all(|i| lo[i] >= self.min[i] && hi[i] <= self.max[i])
    }

    pub fn contains_point(&self, p: &Vec3) -> bool {
        self.contains_box(p, p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubObstacle {
    pub id: String,
    pub primitive: Primitive,
    pub pose: Pose,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Obstacle {
    pub id: String,
    pub subs: Vec<SubObstacle>,
}

/// Author-declared contact between two sub-obstacles; overrides detection.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitContact {
    pub a: String,
    pub b: String,
    pub point: Vec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub name: String,
    pub workspace: Aabb,
    pub robot: RobotModel,
    pub obstacles: Vec<Obstacle>,
    pub start: Configuration,
    pub goal: Configuration,
    pub explicit_contacts: Vec<ExplicitContact>,
    pub allow_single_parent_loops: bool,
}

/// Sub-obstacle with the index of its parent obstacle.
#[derive(Clone, Copy, Debug)]
pub struct SubRef<'a> {
    pub parent: usize,
    pub sub: &'a SubObstacle,
}

impl Scene {
    pub fn sub_obstacles(&self) -> impl Iterator<Item = SubRef<'_>> {
        self.obstacles
            .iter()
            .enumerate()
            .flat_map(|(parent, o)| o.subs.iter().map(move |sub| SubRef { parent, sub }))
    }

    pub fn sub_count(&self) -> usize {
        self.obstacles.iter().map(|o| o.subs.len()).sum()
    }

    /// Checks endpoint validity at zero margin (scene files carry no margin).
    pub fn validate_endpoints(&self) -> Result<(), SceneError> {
        let checker = ValidityChecker::new(self, 0.0, DEFAULT_RESOLUTION);
        for (name, q) in [("start", &self.start), ("goal", &self.goal)] {
            if q.len() != self.robot.dof() || !checker.config_valid(q) {
                return Err(SceneError::InvalidEndpoint(name.into()));
            }
        }
        Ok(())
    }
}

fn pose_of(p: &PoseFile) -> Pose {
    Pose::from_xyz_rpy(p.xyz, p.rpy)
}

fn primitive_of(kind: ShapeKind, params: &[f64], path: &str) -> Result<Primitive, SceneError> {
    let want = match kind {
        ShapeKind::Box => 3,
        ShapeKind::Sphere => 1,
        ShapeKind::Capsule | ShapeKind::Cylinder => 2,
    };
    if params.len() != want {
        return Err(schema_err(
            format!("{path}.params"),
            format!("expected {want} values, got {}", params.len()),
        ));
    }
    let prim = match kind {
        ShapeKind::Box => Primitive::cuboid(params[0], params[1], params[2]),
        ShapeKind::Sphere => Primitive::sphere(params[0]),
        ShapeKind::Capsule | ShapeKind::Cylinder => Primitive::capsule(params[0], params[1]),
    };
    prim.map_err(|e| schema_err(format!("{path}.params"), e.to_string()))
}

/// Parse and validate a scene document.
pub fn parse_scene(source: &str) -> Result<Scene, SceneError> {
    let de = &mut serde_json::Deserializer::from_str(source);
    let file: SceneFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => schema_err(path, inner.to_string()),
            _ => SceneError::Parse(inner.to_string()),
        }
    })?;
    let scene = build_scene(file)?;
    scene.validate_endpoints()?;
    Ok(scene)
}

fn build_scene(file: SceneFile) -> Result<Scene, SceneError> {
    if file.schema_version != 1 {
        return Err(schema_err(
            "schema_version",
            format!("unsupported version {}", file.schema_version),
        ));
    }
    let min = Vec3::from(file.workspace.min);
    let max = Vec3::from(file.workspace.max);
    if (0..3).any(|i| !(min[i] < max[i])) {
        return Err(schema_err("workspace", "min must be below max on every axis"));
    }

    let r = &file.robot;
    let limits: Vec<(f64, f64)> = r.limits.iter().map(|l| (l[0], l[1])).collect();
    let object = AttachedObject {
        primitive: primitive_of(r.object.kind, &r.object.params, "robot.object")?,
        grasp: pose_of(&r.object.grasp),
    };
    let mut links = Vec::with_capacity(r.links.len());
    for (i, l) in r.links.iter().enumerate() {
        links.push(Link {
            primitive: primitive_of(l.kind, &l.params, &format!("robot.links[{i}]"))?,
            frame: l.frame,
            offset: pose_of(&l.pose),
        });
    }
    let robot = match r.kind {
        RobotKindFile::FreeFlyer => {
            if !r.joints.is_empty() || r.tool.is_some() || r.base.is_some() {
                return Err(schema_err(
                    "robot",
                    "free_flyer takes no joints, base or tool",
                ));
            }
            let mut model = RobotModel::free_flyer(limits, object)
                .map_err(|e| schema_err("robot.limits", e.to_string()))?;
            model.links = links;
            model
        }
        RobotKindFile::SerialArm => {
            let joints = r
                .joints
                .iter()
                .map(|j| Joint {
                    origin: pose_of(&j.origin),
                    axis: Vec3::from(j.axis),
                })
                .collect();
            RobotModel::serial_arm(
                r.base.as_ref().map(pose_of).unwrap_or_else(Pose::identity),
                joints,
                r.tool.as_ref().map(pose_of).unwrap_or_else(Pose::identity),
                limits,
                links,
                object,
            )
            .map_err(|e| schema_err("robot", e.to_string()))?
        }
    };

    let mut seen = HashSet::new();
    let mut obstacles = Vec::with_capacity(file.obstacles.len());
    for (i, o) in file.obstacles.iter().enumerate() {
        if o.subs.is_empty() {
            return Err(schema_err(format!("obstacles[{i}].subs"), "must not be empty"));
        }
        let mut subs = Vec::with_capacity(o.subs.len());
        for (j, s) in o.subs.iter().enumerate() {
            let path = format!("obstacles[{i}].subs[{j}]");
            if !seen.insert(s.id.clone()) {
                return Err(schema_err(format!("{path}.id"), format!("duplicate id {:?}", s.id)));
            }
            subs.push(SubObstacle {
                id: s.id.clone(),
                primitive: primitive_of(s.kind, &s.params, &path)?,
                pose: pose_of(&s.pose),
            });
        }
        obstacles.push(Obstacle {
            id: o.id.clone(),
            subs,
        });
    }

    let mut explicit_contacts = Vec::with_capacity(file.contacts.len());
    let mut pairs = HashSet::new();
    for (i, c) in file.contacts.iter().enumerate() {
        for (field, id) in [("a", &c.a), ("b", &c.b)] {
            if !seen.contains(id) {
                return Err(schema_err(
                    format!("contacts[{i}].{field}"),
                    format!("unknown sub-obstacle {id:?}"),
                ));
            }
        }
        if c.a == c.b {
            return Err(schema_err(format!("contacts[{i}]"), "self contact"));
        }
        let key = if c.a < c.b {
            (c.a.clone(), c.b.clone())
        } else {
            (c.b.clone(), c.a.clone())
        };
        if !pairs.insert(key) {
            return Err(schema_err(
                format!("contacts[{i}]"),
                "at most one contact per pair",
            ));
        }
        explicit_contacts.push(ExplicitContact {
            a: c.a.clone(),
            b: c.b.clone(),
            point: Vec3::from(c.point),
        });
    }

    let dof = robot.dof();
    for (name, q) in [("start", &file.start), ("goal", &file.goal)] {
        if q.len() != dof {
            return Err(schema_err(name, format!("expected {dof} values, got {}", q.len())));
        }
    }

    Ok(Scene {
        name: file.name.unwrap_or_else(|| "scene".into()),
        workspace: Aabb { min, max },
        robot,
        obstacles,
        start: Configuration::new(file.start),
        goal: Configuration::new(file.goal),
        explicit_contacts,
        allow_single_parent_loops: file.allow_single_parent_loops,
    })
}
