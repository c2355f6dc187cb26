use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::classify::FaceClassifier;
use super::region::{Face, Region};
use super::symmetry::SymmetryContext;
use super::FaceError;
use crate::exact::{RVector, ScaledVec};
use crate::group::GroupElement;

/// A child of a class representative: `transform` maps the representative
/// of class `class` (one dimension lower) onto the child.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChildLink {
    pub class: usize,
    pub transform: GroupElement,
}

/// A face class in the hierarchy with the children of its representative.
#[derive(Debug, Clone)]
pub struct HierarchyClass {
    pub face: Face,
    pub members_constructed: usize,
    pub children: Vec<ChildLink>,
}

/// Face classes of every dimension from the region itself down to `min_dim`.
/// `levels[d]` holds the classes of dimension `d`; the links of a class in
/// `levels[d]` point into `levels[d - 1]`.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub dim: usize,
    pub min_dim: usize,
    pub levels: Vec<Vec<HierarchyClass>>,
}

impl Hierarchy {
    /// Number of classes per dimension, starting at dimension 0.
    pub fn class_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Number of faces built explicitly while classifying.
    pub fn constructed_faces(&self) -> usize {
        self.levels.iter().flatten().map(|c| c.members_constructed).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.min_dim == 0
    }
}

/// Report emitted after each finished dimension.
#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub dim: usize,
    pub classes: usize,
    pub constructed: usize,
    pub seconds: f64,
    pub resumed: bool,
}

pub struct HierarchyOptions<'a> {
    /// Lowest dimension to classify.
    pub min_dim: usize,
    /// Directory of per-dimension JSON-lines files; finished dimensions found
    /// there are loaded instead of recomputed.
    pub checkpoint: Option<PathBuf>,
    pub progress: Option<&'a (dyn Fn(&LevelReport) + Sync)>,
}

impl Default for HierarchyOptions<'_> {
    fn default() -> Self {
        HierarchyOptions { min_dim: 0, checkpoint: None, progress: None }
    }
}

/// Builds the face hierarchy top-down. Facets are classified through their
/// normals; below that, the children of every class representative are
/// constructed and classified with [`FaceClassifier`].
pub fn build_hierarchy(
    region: &Region,
    ctx: &SymmetryContext,
    options: &HierarchyOptions<'_>,
) -> Result<Hierarchy, FaceError> {
    let n = region.dim();
    let min_dim = options.min_dim.min(n);
    let mut levels: Vec<Vec<HierarchyClass>> = vec![Vec::new(); n + 1];

    let normals = ctx.normals();
    let facet_classes: Vec<HierarchyClass> = (0..normals.num_classes() as u32)
        .map(|c| HierarchyClass { face: region.facet(normals.representative(c)), members_constructed: 1, children: Vec::new() })
        .collect();
    let top_links: Vec<ChildLink> = (0..region.relvecs().len() as u32)
        .map(|r| {
            let class = normals.class_of(r).ok_or_else(|| FaceError::Inconsistent("unclassified relevant vector".into()))?;
            Ok(ChildLink { class: class as usize, transform: normals.transform(r) })
        })
        .collect::<Result<_, FaceError>>()?;
    levels[n].push(HierarchyClass { face: region.whole(), members_constructed: 1, children: top_links });
    levels[n - 1] = facet_classes;
    report(options, n - 1, &levels[n - 1], 0.0, false);

    for d in (min_dim..n - 1).rev() {
        let start = Instant::now();
        if let Some(dir) = &options.checkpoint {
            if let Some((classes, links)) = load_level(region, dir, d)? {
                for (parent, l) in levels[d + 1].iter_mut().zip(links) {
                    parent.children = l;
                }
                levels[d] = classes;
                report(options, d, &levels[d], start.elapsed().as_secs_f64(), true);
                continue;
            }
        }
        let mut classifier = FaceClassifier::new(region, ctx);
        let mut all_links = Vec::with_capacity(levels[d + 1].len());
        for parent in &levels[d + 1] {
            let kids = region.children(&parent.face);
            let links: Vec<ChildLink> = kids
                .iter()
                .map(|k| {
                    let (class, transform) = classifier.classify(k);
                    ChildLink { class, transform }
                })
                .collect();
            all_links.push(links);
        }
        for (parent, l) in levels[d + 1].iter_mut().zip(all_links) {
            parent.children = l;
        }
        levels[d] = classifier
            .into_classes()
            .into_iter()
            .map(|c| HierarchyClass { face: c.representative, members_constructed: c.members_constructed, children: Vec::new() })
            .collect();
        if let Some(dir) = &options.checkpoint {
            save_level(region, dir, d, &levels[d], &levels[d + 1])?;
        }
        report(options, d, &levels[d], start.elapsed().as_secs_f64(), false);
    }
    Ok(Hierarchy { dim: n, min_dim, levels })
}

fn report(options: &HierarchyOptions<'_>, dim: usize, classes: &[HierarchyClass], seconds: f64, resumed: bool) {
    if let Some(p) = options.progress {
        let constructed = classes.iter().map(|c| c.members_constructed).sum();
        p(&LevelReport { dim, classes: classes.len(), constructed, seconds, resumed });
    }
}

/// One face class as stored on disk, with exact coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassRecord {
    pub dim: usize,
    pub members_constructed: usize,
    pub vertices: Vec<RVector>,
    pub normals: Vec<RVector>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LinkRecord {
    parent: usize,
    children: Vec<ChildLink>,
}

impl ClassRecord {
    pub fn from_class(region: &Region, class: &HierarchyClass) -> Self {
        ClassRecord {
            dim: class.face.dim(),
            members_constructed: class.members_constructed,
            vertices: region.vertex_vectors(&class.face),
            normals: region.normal_vectors(&class.face),
        }
    }

    fn to_face(&self, region: &Region) -> Result<Face, FaceError> {
        let missing = || FaceError::Inconsistent("checkpoint does not match the vertex store".into());
        let vertices = self
            .vertices
            .iter()
            .map(|v| region.store().index_of(&ScaledVec::from_rvector(v)?).ok_or_else(missing))
            .collect::<Result<Vec<u32>, FaceError>>()?;
        let normals = self
            .normals
            .iter()
            .map(|r| region.relvecs().position(r).map(|i| i as u32).ok_or_else(missing))
            .collect::<Result<Vec<u32>, FaceError>>()?;
        Ok(Face::new(self.dim, vertices, normals))
    }
}

fn level_paths(dir: &Path, d: usize) -> (PathBuf, PathBuf, PathBuf) {
    (dir.join(format!("classes-{d:02}.jsonl")), dir.join(format!("links-{:02}.jsonl", d + 1)), dir.join(format!("done-{d:02}")))
}

fn save_level(
    region: &Region,
    dir: &Path,
    d: usize,
    classes: &[HierarchyClass],
    parents: &[HierarchyClass],
) -> Result<(), FaceError> {
    fs::create_dir_all(dir)?;
    let (cpath, lpath, done) = level_paths(dir, d);
    let mut w = BufWriter::new(File::create(&cpath)?);
    for c in classes {
        serde_json::to_writer(&mut w, &ClassRecord::from_class(region, c))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    let mut w = BufWriter::new(File::create(&lpath)?);
    for (i, p) in parents.iter().enumerate() {
        serde_json::to_writer(&mut w, &LinkRecord { parent: i, children: p.children.clone() })?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    File::create(done)?;
    Ok(())
}

type LevelData = (Vec<HierarchyClass>, Vec<Vec<ChildLink>>);

fn load_level(region: &Region, dir: &Path, d: usize) -> Result<Option<LevelData>, FaceError> {
    let (cpath, lpath, done) = level_paths(dir, d);
    if !done.exists() {
        return Ok(None);
    }
    let mut classes = Vec::new();
    for line in BufReader::new(File::open(cpath)?).lines() {
        let rec: ClassRecord = serde_json::from_str(&line?)?;
        classes.push(HierarchyClass {
            face: rec.to_face(region)?,
            members_constructed: rec.members_constructed,
            children: Vec::new(),
        });
    }
    let mut links = Vec::new();
    for line in BufReader::new(File::open(lpath)?).lines() {
        let rec: LinkRecord = serde_json::from_str(&line?)?;
        if rec.parent != links.len() {
            return Err(FaceError::Inconsistent("links out of order in checkpoint".into()));
        }
        links.push(rec.children);
    }
    Ok(Some((classes, links)))
}
