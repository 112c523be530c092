//! Structure lookup and the on-disk catalog with its artifact cache.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use pframe::catalog;
use pframe::format::StructureFile;
use pframe::SFrame;
use sha2::{Digest, Sha256};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes through a temporary sibling and a rename, so readers never see
/// a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub struct Store {
    dir: Option<PathBuf>,
}

impl Store {
    pub fn new(dir: Option<PathBuf>) -> Store {
        Store { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Resolves a structure by file path, then by name in the catalog
    /// directory, then among the built-in entries.
    pub fn load(&self, reference: &str) -> Result<Arc<SFrame>, CliError> {
        let (file, _) = self.load_file(reference)?;
        Ok(Arc::new(file.to_sframe()?))
    }

    pub fn load_file(&self, reference: &str) -> Result<(StructureFile, String), CliError> {
        let path = Path::new(reference);
        if path.is_file() {
            let text = read(path)?;
            return Ok((StructureFile::parse(&text)?, text));
        }
        if let Some(dir) = &self.dir {
            let candidate = dir.join(format!("{reference}.json"));
            if candidate.is_file() {
                let text = read(&candidate)?;
                return Ok((StructureFile::parse(&text)?, text));
            }
        }
        let file = catalog::structure_files()
            .into_iter()
            .find(|f| f.name == reference)
            .ok_or_else(|| CliError::UnknownStructure(reference.to_string()))?;
        let text = file.to_json();
        Ok((file, text))
    }

    /// Every catalog structure file, sorted by name: the catalog directory
    /// when it holds any, the built-in entries otherwise.
    pub fn catalog_files(&self) -> Result<Vec<StructureFile>, CliError> {
        if let Some(dir) = &self.dir {
            if dir.is_dir() {
                let mut paths: Vec<PathBuf> = fs::read_dir(dir)
                    .map_err(|source| CliError::Io {
                        path: dir.display().to_string(),
                        source,
                    })?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "json") && p.is_file())
                    .collect();
                paths.sort();
                if !paths.is_empty() {
                    let mut files = paths
                        .iter()
                        .map(|p| Ok(StructureFile::parse(&read(p)?)?))
                        .collect::<Result<Vec<_>, CliError>>()?;
                    files.sort_by(|a, b| a.name.cmp(&b.name));
                    return Ok(files);
                }
            }
        }
        let mut files = catalog::structure_files();
        files.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(files)
    }

    /// Writes the built-in catalog as structure files.
    pub fn export_builtin(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let mut written = Vec::new();
        for file in catalog::structure_files() {
            let path = dir.join(format!("{}.json", file.name));
            write_atomic(&path, &file.to_json())?;
            written.push(path);
        }
        Ok(written)
    }

    fn cache_path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join("cache").join(format!("{key}.json")))
    }

    /// Content hash of a structure file together with the request that
    /// derived an artifact from it.
    pub fn cache_key(source: &str, request: &str) -> String {
        let mut h = Sha256::new();
        h.update(source.as_bytes());
        h.update([0u8]);
        h.update(request.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn cached(&self, key: &str) -> Option<String> {
        self.cache_path(key).and_then(|p| fs::read_to_string(p).ok())
    }

    pub fn store(&self, key: &str, contents: &str) -> Result<(), CliError> {
        match self.cache_path(key) {
            Some(p) => write_atomic(&p, contents),
            None => Ok(()),
        }
    }
}
