//! On-disk JSON layout of a scene file.

use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SceneFile {
    pub schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub workspace: WorkspaceFile,
    pub robot: RobotFile,
    #[serde(default)]
    pub obstacles: Vec<ObstacleFile>,
    pub start: Vec<f64>,
    pub goal: Vec<f64>,
    #[serde(default)]
    pub contacts: Vec<ContactFile>,
    #[serde(default)]
    pub allow_single_parent_loops: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct WorkspaceFile {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

#[derive(Debug, Default, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub(super) struct PoseFile {
    #[serde(default)]
    pub xyz: [f64; 3],
    #[serde(default)]
    pub rpy: [f64; 3],
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub(super) enum RobotKindFile {
    FreeFlyer,
    SerialArm,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct RobotFile {
    pub kind: RobotKindFile,
    pub limits: Vec<[f64; 2]>,
    #[serde(default)]
    pub base: Option<PoseFile>,
    #[serde(default)]
    pub joints: Vec<JointFile>,
    #[serde(default)]
    pub tool: Option<PoseFile>,
    #[serde(default)]
    pub links: Vec<LinkFile>,
    pub object: ObjectFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct JointFile {
    #[serde(default)]
    pub origin: PoseFile,
    pub axis: [f64; 3],
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub(super) enum ShapeKind {
    Box,
    Sphere,
    Cylinder,
    Capsule,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct LinkFile {
    pub kind: ShapeKind,
    pub params: Vec<f64>,
    pub frame: usize,
    #[serde(default)]
    pub pose: PoseFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ObjectFile {
    pub kind: ShapeKind,
    pub params: Vec<f64>,
    #[serde(default)]
    pub grasp: PoseFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ObstacleFile {
    pub id: String,
    pub subs: Vec<SubFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SubFile {
    pub id: String,
    pub kind: ShapeKind,
    pub params: Vec<f64>,
    #[serde(default)]
    pub pose: PoseFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ContactFile {
    pub a: String,
    pub b: String,
    pub point: [f64; 3],
}
